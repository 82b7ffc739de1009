use std::collections::BTreeSet;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::chain::Chain;
use super::point::Point;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LatticeKind {
    /// The root lattice Q(A_N), points carried as N+1 coordinates.
    #[serde(rename = "qan")]
    RootA,
    /// The cubic lattice Z^N.
    #[serde(rename = "cubic")]
    Cubic,
}

impl LatticeKind {
    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::RootA => "qan",
            LatticeKind::Cubic => "cubic",
        }
    }

    pub fn from_name(name: &str) -> Option<LatticeKind> {
        match name {
            "qan" => Some(LatticeKind::RootA),
            "cubic" => Some(LatticeKind::Cubic),
            _ => None,
        }
    }

    /// Number of coordinates of a point of the rank-`n` lattice.
    pub fn coords(self, n: usize) -> usize {
        match self {
            LatticeKind::RootA => n + 1,
            LatticeKind::Cubic => n,
        }
    }

    /// Whether `p` is a point of the rank-`n` lattice.
    pub fn contains(self, n: usize, p: &Point) -> bool {
        p.dim() == self.coords(n) && (self == LatticeKind::Cubic || p.sum() == 0)
    }
}

/// Cell sorts of Q(A_N) and Z^N up to dimension 4.
///
/// The root-lattice sorts are labelled by their vertex level `r`: the vertices
/// of a cell with base `b` and index set `I` are `b + e_S` for all `S ⊆ I` with
/// `|S| = r`. Cubic cells take every subset of `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellKind {
    BlackTriangle,
    WhiteTriangle,
    BlackTetrahedron,
    Octahedron,
    WhiteTetrahedron,
    BlackSimplex4,
    BlackAmbo4,
    WhiteAmbo4,
    WhiteSimplex4,
    Square,
    Cube3,
    Cube4,
}

impl CellKind {
    pub const ALL: [CellKind; 12] = [
        CellKind::BlackTriangle,
        CellKind::WhiteTriangle,
        CellKind::BlackTetrahedron,
        CellKind::Octahedron,
        CellKind::WhiteTetrahedron,
        CellKind::BlackSimplex4,
        CellKind::BlackAmbo4,
        CellKind::WhiteAmbo4,
        CellKind::WhiteSimplex4,
        CellKind::Square,
        CellKind::Cube3,
        CellKind::Cube4,
    ];

    pub const FOUR_CELLS: [CellKind; 5] = [
        CellKind::BlackSimplex4,
        CellKind::BlackAmbo4,
        CellKind::WhiteAmbo4,
        CellKind::WhiteSimplex4,
        CellKind::Cube4,
    ];

    pub fn lattice(self) -> LatticeKind {
        match self {
            CellKind::Square | CellKind::Cube3 | CellKind::Cube4 => LatticeKind::Cubic,
            _ => LatticeKind::RootA,
        }
    }

    pub fn dim(self) -> usize {
        use CellKind::*;
        match self {
            BlackTriangle | WhiteTriangle | Square => 2,
            BlackTetrahedron | Octahedron | WhiteTetrahedron | Cube3 => 3,
            BlackSimplex4 | BlackAmbo4 | WhiteAmbo4 | WhiteSimplex4 | Cube4 => 4,
        }
    }

    /// Number of direction indices in the bracket notation.
    pub fn index_count(self) -> usize {
        match self.lattice() {
            LatticeKind::RootA => self.dim() + 1,
            LatticeKind::Cubic => self.dim(),
        }
    }

    /// Vertex level for root-lattice sorts; `None` for cubic cells.
    pub fn level(self) -> Option<usize> {
        use CellKind::*;
        match self {
            BlackTriangle | BlackTetrahedron | BlackSimplex4 => Some(1),
            WhiteTriangle | Octahedron | BlackAmbo4 => Some(2),
            WhiteTetrahedron | WhiteAmbo4 => Some(3),
            WhiteSimplex4 => Some(4),
            Square | Cube3 | Cube4 => None,
        }
    }

    pub fn vertex_count(self) -> usize {
        let n = self.index_count();
        match self.level() {
            Some(r) => binomial(n, r),
            None => 1 << n,
        }
    }

    pub fn token(self) -> &'static str {
        use CellKind::*;
        match self {
            BlackTriangle => "btri",
            WhiteTriangle => "wtri",
            BlackTetrahedron => "btet",
            Octahedron => "oct",
            WhiteTetrahedron => "wtet",
            BlackSimplex4 => "bsim",
            BlackAmbo4 => "bamb",
            WhiteAmbo4 => "wamb",
            WhiteSimplex4 => "wsim",
            Square => "sq",
            Cube3 => "cube3",
            Cube4 => "cube4",
        }
    }

    pub fn from_token(token: &str) -> Option<CellKind> {
        CellKind::ALL.into_iter().find(|k| k.token() == token)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Sign> {
        match v.signum() {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Unoriented cell in canonical form: indices strictly increasing, all shifts
/// folded into `base`. This is the key type of [`Chain`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    kind: CellKind,
    base: Point,
    indices: Vec<usize>,
}

impl Cell {
    /// Canonicalizes an index list. The returned sign is the parity of the
    /// sorting permutation.
    pub fn canonical(kind: CellKind, base: Point, indices: &[usize]) -> Result<(Cell, Sign)> {
        if indices.len() != kind.index_count() {
            return Err(Error::InvalidCell(format!(
                "{} takes {} indices, got {}",
                kind.token(),
                kind.index_count(),
                indices.len()
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= base.dim()) {
            return Err(Error::InvalidCell(format!(
                "index {bad} out of range for a base with {} coordinates",
                base.dim()
            )));
        }
        let mut sorted = indices.to_vec();
        let mut parity = Sign::Plus;
        // insertion sort, counting transpositions
        for a in 1..sorted.len() {
            let mut b = a;
            while b > 0 && sorted[b - 1] > sorted[b] {
                sorted.swap(b - 1, b);
                parity = -parity;
                b -= 1;
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCell(format!(
                "repeated index in {indices:?}"
            )));
        }
        Ok((Cell { kind, base, indices: sorted }, parity))
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// Lattice point `base + Σ e_d` for the listed directions.
    pub fn point_at(&self, dirs: &[usize]) -> Point {
        self.base.offset(dirs)
    }

    pub fn contains_vertex(&self, p: &Point) -> bool {
        if p.dim() != self.base.dim() {
            return false;
        }
        let mut ones = 0;
        for (d, (&pc, &bc)) in p.coords().iter().zip(self.base.coords()).enumerate() {
            match pc - bc {
                0 => {}
                1 if self.indices.contains(&d) => ones += 1,
                _ => return false,
            }
        }
        match self.kind.level() {
            Some(r) => ones == r,
            None => true,
        }
    }

    /// Multi-index `S ⊆ I` of a vertex relative to the base, if it is one.
    pub fn vertex_subset(&self, p: &Point) -> Option<Vec<usize>> {
        if !self.contains_vertex(p) {
            return None;
        }
        Some(
            self.indices
                .iter()
                .copied()
                .filter(|&d| p.coords()[d] != self.base.coords()[d])
                .collect(),
        )
    }

    pub fn vertices(&self) -> BTreeSet<Point> {
        match self.kind.level() {
            Some(r) => self
                .indices
                .iter()
                .copied()
                .combinations(r)
                .map(|s| self.base.offset(&s))
                .collect(),
            None => self
                .indices
                .iter()
                .copied()
                .powerset()
                .map(|s| self.base.offset(&s))
                .collect(),
        }
    }

    /// Same cell with `extra` zero coordinates appended to the base.
    pub fn padded(&self, extra: usize) -> Cell {
        Cell { kind: self.kind, base: self.base.padded(extra), indices: self.indices.clone() }
    }
}

/// A cell together with its orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedCell {
    cell: Cell,
    sign: Sign,
}

impl OrientedCell {
    /// Builds `kind[indices]` at `base`, in whatever index order is given.
    /// An odd permutation of the indices flips the orientation.
    pub fn new(kind: CellKind, base: Point, indices: &[usize]) -> Result<Self> {
        let (cell, sign) = Cell::canonical(kind, base, indices)?;
        Ok(OrientedCell { cell, sign })
    }

    pub fn from_cell(cell: Cell, sign: Sign) -> Self {
        OrientedCell { cell, sign }
    }

    pub fn cell(&self) -> &Cell {
        &self.cell
    }

    pub fn into_cell(self) -> Cell {
        self.cell
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn kind(&self) -> CellKind {
        self.cell.kind
    }

    pub fn base(&self) -> &Point {
        &self.cell.base
    }

    pub fn indices(&self) -> &[usize] {
        &self.cell.indices
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    pub fn contains_vertex(&self, p: &Point) -> bool {
        self.cell.contains_vertex(p)
    }

    pub fn vertices(&self) -> BTreeSet<Point> {
        self.cell.vertices()
    }

    /// Signed facet chain, following the alternating-sign recipe with the
    /// shifts of the root-lattice facet tables.
    pub fn facets(&self) -> Result<Chain> {
        use CellKind::*;
        let kind = self.kind();
        let idx = self.indices();
        let base = self.base();
        let n = idx.len();
        let mut out = Chain::new();
        for (p, &dir) in idx.iter().enumerate() {
            let rest: Vec<usize> = idx.iter().copied().filter(|&d| d != dir).collect();
            let s = if (n - 1 - p) % 2 == 0 { 1 } else { -1 } * self.sign.as_i64();
            let shifted = base.shifted(dir, 1);
            let mut push = |k: CellKind, b: &Point, coef: i64| {
                let (c, parity) = Cell::canonical(k, b.clone(), &rest)
                    .expect("facet of a canonical cell is canonical");
                out.add_cell(&c, coef * parity.as_i64());
            };
            match kind {
                BlackTetrahedron => push(BlackTriangle, base, s),
                Octahedron => {
                    push(BlackTriangle, &shifted, s);
                    push(WhiteTriangle, base, s);
                }
                WhiteTetrahedron => push(WhiteTriangle, &shifted, s),
                BlackSimplex4 => push(BlackTetrahedron, base, s),
                BlackAmbo4 => {
                    push(BlackTetrahedron, &shifted, s);
                    push(Octahedron, base, s);
                }
                WhiteAmbo4 => {
                    push(Octahedron, &shifted, s);
                    push(WhiteTetrahedron, base, s);
                }
                WhiteSimplex4 => push(WhiteTetrahedron, &shifted, s),
                Cube3 => {
                    push(Square, base, s);
                    push(Square, &shifted, -s);
                }
                Cube4 => {
                    push(Cube3, base, s);
                    push(Cube3, &shifted, -s);
                }
                BlackTriangle | WhiteTriangle | Square => {
                    return Err(Error::UnsupportedKind { op: "facets", kind });
                }
            }
        }
        Ok(out)
    }

    /// Chain of the facets adjacent to `center` (the 4D corner for 4-cells).
    pub fn corner(&self, center: &Point) -> Result<Chain> {
        if self.kind().dim() != 4 {
            return Err(Error::UnsupportedKind { op: "corner", kind: self.kind() });
        }
        if !self.contains_vertex(center) {
            return Err(Error::NotAVertex { point: center.to_string(), cell: self.to_string() });
        }
        Ok(self.facets()?.filter(|c| c.contains_vertex(center)))
    }
}

impl Neg for OrientedCell {
    type Output = OrientedCell;
    fn neg(mut self) -> OrientedCell {
        self.sign = -self.sign;
        self
    }
}

impl From<Cell> for OrientedCell {
    fn from(cell: Cell) -> Self {
        OrientedCell { cell, sign: Sign::Plus }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{}[{}]@{}", self.kind.token(), idx.join(" "), self.base)
    }
}

impl fmt::Display for OrientedCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign.symbol(), self.cell)
    }
}

impl FromStr for OrientedCell {
    type Err = Error;

    /// `<sign><kind>[i j k ...]@(c0,c1,...)`; the sign is optional and
    /// defaults to `+`. Indices may come in any order.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let (sign, rest) = match t.as_bytes().first() {
            Some(b'+') => (Sign::Plus, &t[1..]),
            Some(b'-') => (Sign::Minus, &t[1..]),
            _ => (Sign::Plus, t),
        };
        let bad = |why: &str| Error::Parse(format!("cell `{text}`: {why}"));
        let open = rest.find('[').ok_or_else(|| bad("missing `[`"))?;
        let close = rest.find(']').ok_or_else(|| bad("missing `]`"))?;
        if close < open {
            return Err(bad("misplaced brackets"));
        }
        let kind = CellKind::from_token(rest[..open].trim())
            .ok_or_else(|| bad("unknown cell kind"))?;
        let indices = rest[open + 1..close]
            .split_whitespace()
            .map(|s| s.parse::<usize>().map_err(|_| bad("bad index")))
            .collect::<Result<Vec<_>>>()?;
        let after = rest[close + 1..].trim();
        let base_text = after.strip_prefix('@').ok_or_else(|| bad("missing `@` base"))?;
        let base = Point::parse(base_text)?;
        let cell = OrientedCell::new(kind, base, &indices)
            .map_err(|e| bad(&e.to_string()))?;
        Ok(if sign == Sign::Minus { -cell } else { cell })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(kind: CellKind, base: &[i64], idx: &[usize]) -> OrientedCell {
        OrientedCell::new(kind, Point::new(base.to_vec()), idx).unwrap()
    }

    #[test]
    fn transposition_flips_sign() {
        let a = cell(CellKind::Octahedron, &[0; 5], &[0, 1, 2, 3]);
        let b = cell(CellKind::Octahedron, &[0; 5], &[1, 0, 2, 3]);
        assert_eq!(a.cell(), b.cell());
        assert_eq!(a.sign(), -b.sign());
        let c = cell(CellKind::Octahedron, &[0; 5], &[1, 2, 0, 3]);
        assert_eq!(c.sign(), Sign::Plus);
    }

    #[test]
    fn rejects_malformed_cells() {
        let z = Point::zeros(5);
        assert!(OrientedCell::new(CellKind::Octahedron, z.clone(), &[0, 1, 2]).is_err());
        assert!(OrientedCell::new(CellKind::Octahedron, z.clone(), &[0, 1, 1, 2]).is_err());
        assert!(OrientedCell::new(CellKind::Octahedron, z, &[0, 1, 2, 7]).is_err());
    }

    #[test]
    fn vertex_counts() {
        let counts = [
            (CellKind::BlackTriangle, 3),
            (CellKind::WhiteTriangle, 3),
            (CellKind::BlackTetrahedron, 4),
            (CellKind::Octahedron, 6),
            (CellKind::WhiteTetrahedron, 4),
            (CellKind::BlackSimplex4, 5),
            (CellKind::BlackAmbo4, 10),
            (CellKind::WhiteAmbo4, 10),
            (CellKind::WhiteSimplex4, 5),
            (CellKind::Square, 4),
            (CellKind::Cube3, 8),
            (CellKind::Cube4, 16),
        ];
        for (kind, n) in counts {
            let idx: Vec<usize> = (0..kind.index_count()).collect();
            let c = cell(kind, &[0; 6], &idx);
            assert_eq!(c.vertices().len(), n, "{kind:?}");
            assert_eq!(kind.vertex_count(), n);
            assert!(c.vertices().iter().all(|v| c.contains_vertex(v)));
        }
    }

    #[test]
    fn octahedron_vertices_are_pair_sums() {
        let c = cell(CellKind::Octahedron, &[0; 5], &[0, 1, 3, 4]);
        let expected: BTreeSet<Point> = [0usize, 1, 3, 4]
            .into_iter()
            .combinations(2)
            .map(|s| Point::zeros(5).offset(&s))
            .collect();
        assert_eq!(c.vertices(), expected);
    }

    #[test]
    fn cube3_vertices_are_unit_cube() {
        let c = cell(CellKind::Cube3, &[0; 4], &[1, 2, 3]);
        let v = c.vertices();
        assert_eq!(v.len(), 8);
        assert!(v.contains(&Point::new(vec![0, 1, 1, 0])));
        assert!(v.contains(&Point::zeros(4)));
        assert!(!v.contains(&Point::new(vec![1, 0, 0, 0])));
    }

    #[test]
    fn text_roundtrip() {
        let c: OrientedCell = "-oct[0 1 2 3]@(0,0,0,0,-1)".parse().unwrap();
        assert_eq!(c.sign(), Sign::Minus);
        assert_eq!(c.kind(), CellKind::Octahedron);
        assert_eq!(c.to_string(), "-oct[0 1 2 3]@(0,0,0,0,-1)");
        let d: OrientedCell = "oct[1 0 2 3]@(0,0,0,0,-1)".parse().unwrap();
        assert_eq!(d, c);
        assert!("xyz[0 1]@(0,0)".parse::<OrientedCell>().is_err());
        assert!("oct[0 1 2 3]".parse::<OrientedCell>().is_err());
    }

    #[test]
    fn two_cells_have_no_facets() {
        let t = cell(CellKind::BlackTriangle, &[0; 4], &[0, 1, 2]);
        assert!(matches!(t.facets(), Err(Error::UnsupportedKind { .. })));
    }
}
