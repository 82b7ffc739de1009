use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer coordinate vector. Used for lattice points and for cell base points
/// (a cell's base need not itself be a lattice point; its vertices are).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<i64>);

impl Point {
    pub fn new(coords: Vec<i64>) -> Self {
        Point(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `T_dir` applied `delta` times (negative `delta` is `T_dir-bar`).
    pub fn shifted(&self, dir: usize, delta: i64) -> Point {
        let mut c = self.0.clone();
        c[dir] += delta;
        Point(c)
    }

    /// Adds the unit vector of every listed direction (with repetition).
    pub fn offset(&self, dirs: &[usize]) -> Point {
        let mut c = self.0.clone();
        for &d in dirs {
            c[d] += 1;
        }
        Point(c)
    }

    /// Appends `extra` zero coordinates.
    pub fn padded(&self, extra: usize) -> Point {
        let mut c = self.0.clone();
        c.extend(std::iter::repeat(0).take(extra));
        Point(c)
    }

    /// Removes coordinate `dir`.
    pub fn dropped(&self, dir: usize) -> Point {
        let mut c = self.0.clone();
        c.remove(dir);
        Point(c)
    }

    /// Inserts `value` as the new coordinate `dir`.
    pub fn inserted(&self, dir: usize, value: i64) -> Point {
        let mut c = self.0.clone();
        c.insert(dir, value);
        Point(c)
    }

    /// Parses `c0,c1,...`, optionally wrapped in parentheses.
    pub fn parse(text: &str) -> Result<Point> {
        let t = text.trim();
        let t = t.strip_prefix('(').unwrap_or(t);
        let t = t.strip_suffix(')').unwrap_or(t);
        if t.trim().is_empty() {
            return Err(Error::Parse(format!("empty point `{text}`")));
        }
        t.split(',')
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad coordinate `{s}` in `{text}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Point)
    }

    /// Comma-joined coordinates without parentheses (field-file key form).
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

/// A point of the root lattice Q(A_N): N+1 integers summing to zero, N >= 3.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootLatticePoint(Point);

impl RootLatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        Self::try_from(Point::new(coords))
    }

    /// N, the lattice rank (one less than the coordinate count).
    pub fn rank(&self) -> usize {
        self.0.dim() - 1
    }

    pub fn point(&self) -> &Point {
        &self.0
    }

    pub fn into_point(self) -> Point {
        self.0
    }
}

impl TryFrom<Point> for RootLatticePoint {
    type Error = Error;

    fn try_from(p: Point) -> Result<Self> {
        if p.dim() < 4 {
            return Err(Error::InvalidPoint(format!(
                "Q(A_N) needs N >= 3 (at least 4 coordinates), got {}",
                p.dim()
            )));
        }
        if p.sum() != 0 {
            return Err(Error::InvalidPoint(format!(
                "coordinates of {p} sum to {} instead of 0",
                p.sum()
            )));
        }
        Ok(RootLatticePoint(p))
    }
}

/// A point of the cubic lattice Z^N, N >= 3.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubicLatticePoint(Point);

impl CubicLatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        Self::try_from(Point::new(coords))
    }

    pub fn rank(&self) -> usize {
        self.0.dim()
    }

    pub fn point(&self) -> &Point {
        &self.0
    }

    pub fn into_point(self) -> Point {
        self.0
    }
}

impl TryFrom<Point> for CubicLatticePoint {
    type Error = Error;

    fn try_from(p: Point) -> Result<Self> {
        if p.dim() < 3 {
            return Err(Error::InvalidPoint(format!(
                "Z^N needs N >= 3, got {}",
                p.dim()
            )));
        }
        Ok(CubicLatticePoint(p))
    }
}
