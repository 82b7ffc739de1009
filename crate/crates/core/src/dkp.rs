//! The dKP equation and its inverted form dKP⁻ on octahedra and 3-cubes,
//! systems on 4-cells, constant golden solutions, and initial-value solvers.

use std::collections::BTreeMap;

use itertools::Itertools;
use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cell_complex::{Cell, CellKind, OrientedCell, Point};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::golden;

/// A field `x: lattice → ℝ∖{0}` given on finitely many points.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Field<T> {
    values: BTreeMap<Point, T>,
}

impl<T: Real> Field<T> {
    pub fn new() -> Self {
        Field { values: BTreeMap::new() }
    }

    /// Stores a value; zero and non-finite values are rejected.
    pub fn insert(&mut self, p: Point, v: T) -> Result<()> {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("value {v} at {p}")));
        }
        if v == T::zero() {
            return Err(Error::ZeroValue(p.to_string()));
        }
        self.values.insert(p, v);
        Ok(())
    }

    pub fn get(&self, p: &Point) -> Result<T> {
        self.values.get(p).copied().ok_or_else(|| Error::MissingVertex(p.to_string()))
    }

    pub fn try_get(&self, p: &Point) -> Option<T> {
        self.values.get(p).copied()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.values.contains_key(p)
    }

    pub fn remove(&mut self, p: &Point) -> Option<T> {
        self.values.remove(p)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, T)> + '_ {
        self.values.iter().map(|(p, &v)| (p, v))
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> + '_ {
        self.values.keys()
    }

    /// Pointwise `x ↦ 1/x`; maps dKP solutions to dKP⁻ solutions.
    pub fn inverted(&self) -> Field<T> {
        Field { values: self.values.iter().map(|(p, &v)| (p.clone(), v.recip())).collect() }
    }

    pub fn scaled(&self, c: T) -> Result<Field<T>> {
        let mut out = Field::new();
        for (p, v) in self.iter() {
            out.insert(p.clone(), v * c)?;
        }
        Ok(out)
    }

    /// Copy of the field restricted to `points`; all must be present.
    pub fn restricted<'a>(&self, points: impl IntoIterator<Item = &'a Point>) -> Result<Field<T>> {
        let mut out = Field::new();
        for p in points {
            out.values.insert(p.clone(), self.get(p)?);
        }
        Ok(out)
    }

    /// Copy with every key padded by `extra` zero coordinates.
    pub fn padded(&self, extra: usize) -> Field<T> {
        Field { values: self.values.iter().map(|(p, &v)| (p.padded(extra), v)).collect() }
    }

    pub fn convert<U: Real>(&self) -> Field<U> {
        Field {
            values: self.values.iter().map(|(p, &v)| (p.clone(), U::lit(v.to_f64_lossy()))).collect(),
        }
    }
}

impl<T: Real> FromIterator<(Point, T)> for Field<T> {
    /// Collects without the nonzero check; use [`Field::insert`] for untrusted data.
    fn from_iter<I: IntoIterator<Item = (Point, T)>>(iter: I) -> Self {
        Field { values: iter.into_iter().collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "dKP")]
    Dkp,
    #[serde(rename = "dKP-")]
    DkpMinus,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Dkp => "dKP",
            Branch::DkpMinus => "dKP-",
        }
    }

    /// Value of every corner quantity `E` on a solution of this branch.
    pub fn corner_value(self) -> f64 {
        match self {
            Branch::Dkp => -1.0,
            Branch::DkpMinus => 1.0,
        }
    }
}

/// Values on an octahedron `[ijkl]`, named by the pair of directions added to
/// the base. For a 3-cube `{jkl}` the inscribed octahedron reads
/// `(y_j, y_k, y_l, y_jk, y_jl, y_kl)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OctValues<T> {
    pub ij: T,
    pub ik: T,
    pub il: T,
    pub jk: T,
    pub jl: T,
    pub kl: T,
}

impl<T: Real> OctValues<T> {
    pub fn from_array(v: [T; 6]) -> Self {
        OctValues { ij: v[0], ik: v[1], il: v[2], jk: v[3], jl: v[4], kl: v[5] }
    }

    pub fn to_array(self) -> [T; 6] {
        [self.ij, self.ik, self.il, self.jk, self.jl, self.kl]
    }

    /// `x_ij x_kl − x_ik x_jl + x_il x_jk`.
    pub fn dkp_residual(&self) -> T {
        self.ij * self.kl - self.ik * self.jl + self.il * self.jk
    }

    pub fn dkp_scale(&self) -> T {
        (self.ij * self.kl).abs() + (self.ik * self.jl).abs() + (self.il * self.jk).abs()
    }

    /// `x_ik x_il x_jk x_jl − x_ij x_il x_jk x_kl + x_ij x_ik x_jl x_kl`.
    pub fn dkp_minus_residual(&self) -> T {
        let a = self.ik * self.il * self.jk * self.jl;
        let b = self.ij * self.il * self.jk * self.kl;
        let c = self.ij * self.ik * self.jl * self.kl;
        a - b + c
    }

    pub fn dkp_minus_scale(&self) -> T {
        (self.ik * self.il * self.jk * self.jl).abs()
            + (self.ij * self.il * self.jk * self.kl).abs()
            + (self.ij * self.ik * self.jl * self.kl).abs()
    }

    pub fn residual(&self, branch: Branch) -> T {
        match branch {
            Branch::Dkp => self.dkp_residual(),
            Branch::DkpMinus => self.dkp_minus_residual(),
        }
    }

    /// `|residual| / Σ|monomials|`.
    pub fn relative_residual(&self, branch: Branch) -> T {
        let (r, s) = match branch {
            Branch::Dkp => (self.dkp_residual(), self.dkp_scale()),
            Branch::DkpMinus => (self.dkp_minus_residual(), self.dkp_minus_scale()),
        };
        r.abs() / s
    }

    /// The three two-term brackets that appear as denominators of the corner
    /// quantities, divided by the monomial scale: `ij·kl − ik·jl`,
    /// `ik·jl − il·jk`, `ij·kl + il·jk`. Their minimum measures the distance
    /// from the singular variety.
    pub fn conditioning(&self) -> T {
        let p = self.ij * self.kl;
        let q = self.ik * self.jl;
        let r = self.il * self.jk;
        let s = self.dkp_scale();
        ((p - q).abs().min((q - r).abs()).min((p + r).abs())) / s
    }

    pub fn product(&self) -> T {
        self.to_array().iter().fold(T::one(), |a, &b| a * b)
    }
}

/// The six points of an octahedron or of the octahedron inscribed in a
/// 3-cube, in the order `ij, ik, il, jk, jl, kl`.
pub fn octahedron_points(cell: &Cell) -> Result<[Point; 6]> {
    let idx = cell.indices();
    let b = cell.base();
    match cell.kind() {
        CellKind::Octahedron => {
            let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
            Ok([
                b.offset(&[i, j]),
                b.offset(&[i, k]),
                b.offset(&[i, l]),
                b.offset(&[j, k]),
                b.offset(&[j, l]),
                b.offset(&[k, l]),
            ])
        }
        CellKind::Cube3 => {
            let (j, k, l) = (idx[0], idx[1], idx[2]);
            Ok([
                b.offset(&[j]),
                b.offset(&[k]),
                b.offset(&[l]),
                b.offset(&[j, k]),
                b.offset(&[j, l]),
                b.offset(&[k, l]),
            ])
        }
        kind => Err(Error::UnsupportedKind { op: "octahedron_points", kind }),
    }
}

pub fn octahedron_values<T: Real>(field: &Field<T>, cell: &Cell) -> Result<OctValues<T>> {
    let pts = octahedron_points(cell)?;
    let mut v = [T::zero(); 6];
    for (slot, p) in v.iter_mut().zip(pts.iter()) {
        *slot = field.get(p)?;
    }
    Ok(OctValues::from_array(v))
}

/// Signed trilinear dKP residual on an octahedron or 3-cube.
pub fn dkp_residual<T: Real>(field: &Field<T>, oct: &OrientedCell) -> Result<T> {
    Ok(octahedron_values(field, oct.cell())?.dkp_residual())
}

/// Quartic dKP⁻ residual, `(∏ x)·dkp_residual(1/x)`.
pub fn dkp_minus_residual<T: Real>(field: &Field<T>, oct: &OrientedCell) -> Result<T> {
    Ok(octahedron_values(field, oct.cell())?.dkp_minus_residual())
}

/// Octahedral supports of the equations living on a 4-cell.
pub fn system_on_4cell(cell4: &OrientedCell) -> Result<Vec<OrientedCell>> {
    let b = cell4.base();
    let idx = cell4.indices();
    let s = cell4.sign();
    let oct = |base: Point, pick: [usize; 4], neg: bool| -> OrientedCell {
        let ids: Vec<usize> = pick.iter().map(|&q| idx[q]).collect();
        let c = OrientedCell::new(CellKind::Octahedron, base, &ids).expect("valid octahedron");
        let sign = c.sign() * s;
        if neg {
            c.with_sign(-sign)
        } else {
            c.with_sign(sign)
        }
    };
    let (i, j, k, l, m) = (0, 1, 2, 3, 4);
    match cell4.kind() {
        CellKind::BlackAmbo4 => Ok(vec![
            oct(b.clone(), [i, j, k, l], false),
            oct(b.clone(), [j, k, l, m], false),
            oct(b.clone(), [i, k, l, m], true),
            oct(b.clone(), [i, j, l, m], false),
            oct(b.clone(), [i, j, k, m], true),
        ]),
        CellKind::WhiteAmbo4 => {
            let t = |q: usize| b.shifted(idx[q], 1);
            Ok(vec![
                oct(t(m), [i, j, k, l], false),
                oct(t(i), [j, k, l, m], false),
                oct(t(j), [i, k, l, m], true),
                oct(t(k), [i, j, l, m], false),
                oct(t(l), [i, j, k, m], true),
            ])
        }
        CellKind::Cube4 => Ok(cell4.facets()?.oriented_terms().map(|(c, _)| c).collect()),
        kind => Err(Error::UnsupportedKind { op: "system_on_4cell", kind }),
    }
}

/// Maximum relative residual of the 4-cell system for a branch.
pub fn max_relative_residual<T: Real>(field: &Field<T>, cell4: &OrientedCell, branch: Branch) -> Result<T> {
    let mut worst = T::zero();
    for oct in system_on_4cell(cell4)? {
        worst = worst.max(octahedron_values(field, oct.cell())?.relative_residual(branch));
    }
    Ok(worst)
}

/// The value at `unknown` that makes the dKP residual of `oct` vanish, given
/// the other five values.
pub fn solve_octahedron<T: Real>(field: &Field<T>, oct: &OrientedCell, unknown: &Point) -> Result<T> {
    let pts = octahedron_points(oct.cell())?;
    let pos = pts.iter().position(|p| p == unknown).ok_or_else(|| Error::NotAVertex {
        point: unknown.to_string(),
        cell: oct.to_string(),
    })?;
    let mut v = [T::zero(); 6];
    for (q, p) in pts.iter().enumerate() {
        if q != pos {
            v[q] = field.get(p)?;
        }
    }
    let sign = |q: usize| if q == 1 || q == 4 { -T::one() } else { T::one() };
    let coef = sign(pos) * v[5 - pos];
    if coef == T::zero() {
        return Err(Error::Singular(format!("zero coefficient of {unknown} in {oct}")));
    }
    let rest = OctValues::from_array(v).dkp_residual();
    nonzero(-rest / coef, unknown)
}

fn nonzero<T: Real>(v: T, at: &Point) -> Result<T> {
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("solved value at {at}")));
    }
    if v == T::zero() {
        return Err(Error::ZeroValue(at.to_string()));
    }
    Ok(v)
}

fn ratio<T: Real>(num: T, den: T, at: &Point) -> Result<T> {
    if den == T::zero() {
        return Err(Error::Singular(format!("zero denominator while solving for {at}")));
    }
    nonzero(num / den, at)
}

/// Position pairs (into the five indices `ijklm`) of the prescribed vertices
/// of a black ambo-simplex: `il, im, jl, jm, kl, km, lm`.
const AMBO_FREE_PAIRS: [[usize; 2]; 7] = [[0, 3], [0, 4], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]];

fn complement(pair: [usize; 2]) -> Vec<usize> {
    (0..5).filter(|q| !pair.contains(q)).collect()
}

/// Vertex of an ambo-simplex labelled by positions into its index list.
pub fn ambo_point(cell4: &OrientedCell, positions: &[usize]) -> Point {
    let dirs: Vec<usize> = positions.iter().map(|&q| cell4.indices()[q]).collect();
    cell4.base().offset(&dirs)
}

/// Pair label of a black-ambo vertex; white-ambo vertices are labelled by the
/// complementary pair, under which the white system reads as the black one.
fn ambo_label(cell4: &OrientedCell, pair: [usize; 2]) -> Point {
    match cell4.kind() {
        CellKind::WhiteAmbo4 => ambo_point(cell4, &complement(pair)),
        _ => ambo_point(cell4, &pair),
    }
}

/// Vertex positions of the cube `{jklm}` prescribed for the initial-value
/// problem: `l, m, jl, jm, kl, km, lm, jlm, klm`. Found by rank probing of the
/// cube system (see [`cube_rank_probe`]).
pub const CUBE_FREE_SUBSETS: [&[usize]; 9] =
    [&[2], &[3], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3], &[0, 2, 3], &[1, 2, 3]];

/// Vertex positions determined by the cube initial-value problem, in solve order.
pub const CUBE_DETERMINED_SUBSETS: [&[usize]; 5] = [&[0], &[1], &[0, 1], &[0, 1, 3], &[0, 1, 2]];

pub fn cube_point(cube: &OrientedCell, subset: &[usize]) -> Point {
    let dirs: Vec<usize> = subset.iter().map(|&q| cube.indices()[q]).collect();
    cube.base().offset(&dirs)
}

/// Points whose values must be prescribed for the initial-value problem.
pub fn free_vertices(cell4: &OrientedCell) -> Result<Vec<Point>> {
    match cell4.kind() {
        CellKind::BlackAmbo4 | CellKind::WhiteAmbo4 => {
            Ok(AMBO_FREE_PAIRS.iter().map(|&p| ambo_label(cell4, p)).collect())
        }
        CellKind::Cube4 => Ok(CUBE_FREE_SUBSETS.iter().map(|s| cube_point(cell4, s)).collect()),
        kind => Err(Error::UnsupportedKind { op: "free_vertices", kind }),
    }
}

/// Points that carry a value on a solution: all ten ambo vertices, or the
/// fourteen cube vertices other than `x` and `x_jklm`.
pub fn solution_vertices(cell4: &OrientedCell) -> Result<Vec<Point>> {
    match cell4.kind() {
        CellKind::BlackAmbo4 | CellKind::WhiteAmbo4 => Ok(cell4.vertices().into_iter().collect()),
        CellKind::Cube4 => Ok((0..4)
            .powerset()
            .filter(|s| !s.is_empty() && s.len() < 4)
            .map(|s| cube_point(cell4, &s))
            .collect()),
        kind => Err(Error::UnsupportedKind { op: "solution_vertices", kind }),
    }
}

fn check_initial<T: Real>(cell4: &OrientedCell, initial: &Field<T>) -> Result<Vec<Point>> {
    let free = free_vertices(cell4)?;
    for p in initial.points() {
        if !free.contains(p) {
            return Err(Error::UnexpectedVertex(p.to_string()));
        }
    }
    for p in &free {
        initial.get(p)?;
    }
    Ok(free)
}

/// Completes seven prescribed values on an ambo-simplex to a solution of the
/// five equations of the chosen branch.
pub fn solve_ambo_ivp<T: Real>(cell4: &OrientedCell, initial: &Field<T>, branch: Branch) -> Result<Field<T>> {
    if !matches!(cell4.kind(), CellKind::BlackAmbo4 | CellKind::WhiteAmbo4) {
        return Err(Error::UnsupportedKind { op: "solve_ambo_ivp", kind: cell4.kind() });
    }
    check_initial(cell4, initial)?;
    if branch == Branch::DkpMinus {
        return Ok(solve_ambo_ivp(cell4, &initial.inverted(), Branch::Dkp)?.inverted());
    }
    let x = |a: usize, b: usize| initial.get(&ambo_label(cell4, [a, b]));
    let (i, j, k, l, m) = (0, 1, 2, 3, 4);
    let lm = x(l, m)?;
    let mut out = initial.clone();
    let ij_at = ambo_label(cell4, [i, j]);
    let ij = ratio(x(i, l)? * x(j, m)? - x(i, m)? * x(j, l)?, lm, &ij_at)?;
    let jk_at = ambo_label(cell4, [j, k]);
    let jk = ratio(x(j, l)? * x(k, m)? - x(j, m)? * x(k, l)?, lm, &jk_at)?;
    let ik_at = ambo_label(cell4, [i, k]);
    let ik = ratio(x(i, l)? * x(k, m)? - x(i, m)? * x(k, l)?, lm, &ik_at)?;
    out.insert(ij_at, ij)?;
    out.insert(jk_at, jk)?;
    out.insert(ik_at, ik)?;
    Ok(out)
}

/// Completes nine prescribed values on a 4-cube to the fourteen values that
/// solve its eight equations.
pub fn solve_cube_ivp<T: Real>(cube: &OrientedCell, initial: &Field<T>, branch: Branch) -> Result<Field<T>> {
    if cube.kind() != CellKind::Cube4 {
        return Err(Error::UnsupportedKind { op: "solve_cube_ivp", kind: cube.kind() });
    }
    check_initial(cube, initial)?;
    if branch == Branch::DkpMinus {
        return Ok(solve_cube_ivp(cube, &initial.inverted(), Branch::Dkp)?.inverted());
    }
    let y = |s: &[usize]| initial.get(&cube_point(cube, s));
    let (j, k, l, m) = (0, 1, 2, 3);
    let lm = y(&[l, m])?;
    let mut out = initial.clone();
    let at = |s: &[usize]| cube_point(cube, s);
    let yj = ratio(y(&[l])? * y(&[j, m])? - y(&[m])? * y(&[j, l])?, lm, &at(&[j]))?;
    let yk = ratio(y(&[l])? * y(&[k, m])? - y(&[m])? * y(&[k, l])?, lm, &at(&[k]))?;
    let yjk = ratio(y(&[j, l])? * y(&[k, m])? - y(&[j, m])? * y(&[k, l])?, lm, &at(&[j, k]))?;
    let km = y(&[k, m])?;
    let yjkm = ratio(km * y(&[j, l, m])? - y(&[j, m])? * y(&[k, l, m])?, lm, &at(&[j, k, m]))?;
    let yjkl = ratio(y(&[k, l])? * yjkm - yjk * y(&[k, l, m])?, km, &at(&[j, k, l]))?;
    out.insert(at(&[j]), yj)?;
    out.insert(at(&[k]), yk)?;
    out.insert(at(&[j, k]), yjk)?;
    out.insert(at(&[j, k, m]), yjkm)?;
    out.insert(at(&[j, k, l]), yjkl)?;
    Ok(out)
}

/// The constant solution on an ambo-simplex: value `a` (or `1/a` for dKP⁻) on
/// the five vertices labelled by cyclically adjacent pairs, `−1` elsewhere.
pub fn golden_field<T: Real>(cell4: &OrientedCell, branch: Branch) -> Result<Field<T>> {
    if !matches!(cell4.kind(), CellKind::BlackAmbo4 | CellKind::WhiteAmbo4) {
        return Err(Error::UnsupportedKind { op: "golden_field", kind: cell4.kind() });
    }
    let a: T = golden();
    let special = match branch {
        Branch::Dkp => a,
        Branch::DkpMinus => a.recip(),
    };
    let mut out = Field::new();
    for pair in (0..5).combinations(2) {
        let adjacent = (pair[1] - pair[0]) % 5 == 1 || (pair[0] + 5 - pair[1]) % 5 == 1;
        let v = if adjacent { special } else { -T::one() };
        out.insert(ambo_label(cell4, [pair[0], pair[1]]), v)?;
    }
    Ok(out)
}

/// Magnitude uniform in `[0.5, 2]` with a random sign.
pub fn random_value<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    let mag: f64 = rng.gen_range(0.5..=2.0);
    let v = if rng.gen_bool(0.5) { mag } else { -mag };
    T::lit(v)
}

pub fn random_field<T: Real, R: Rng + ?Sized>(points: &[Point], rng: &mut R) -> Field<T> {
    points.iter().map(|p| (p.clone(), random_value::<T, R>(rng))).collect()
}

/// Smallest octahedral conditioning over the equations of a 4-cell.
pub fn system_conditioning<T: Real>(field: &Field<T>, cell4: &OrientedCell) -> Result<T> {
    let mut worst = T::infinity();
    for oct in system_on_4cell(cell4)? {
        worst = worst.min(octahedron_values(field, oct.cell())?.conditioning());
    }
    Ok(worst)
}

/// Numeric rank of a Jacobian and a maximal set of columns that can be
/// prescribed freely.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankProbe {
    pub rank: usize,
    pub variables: usize,
    pub pivots: Vec<Point>,
    pub free: Vec<Point>,
}

/// Greedy column selection: walks the columns in order and keeps each one
/// that raises the rank. The kept columns are determined by the others.
pub fn rank_probe(jacobian: &DMatrix<f64>, columns: &[Point], tol: f64) -> RankProbe {
    let rank = jacobian.rank(tol);
    let mut pivots = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    for c in 0..jacobian.ncols() {
        let mut trial = kept.clone();
        trial.push(c);
        if jacobian.select_columns(trial.iter()).rank(tol) > kept.len() {
            kept = trial;
            pivots.push(columns[c].clone());
        }
    }
    let free = columns.iter().filter(|p| !pivots.contains(p)).cloned().collect();
    RankProbe { rank, variables: columns.len(), pivots, free }
}

/// Jacobian of the branch residuals of a 4-cell system with respect to the
/// listed vertices, by central differences of the exact polynomials.
pub fn system_jacobian(field: &Field<f64>, cell4: &OrientedCell, vars: &[Point], branch: Branch) -> Result<DMatrix<f64>> {
    let system = system_on_4cell(cell4)?;
    let mut jac = DMatrix::zeros(system.len(), vars.len());
    for (c, p) in vars.iter().enumerate() {
        let x0 = field.get(p)?;
        let h = 1e-6 * x0.abs().max(1.0);
        let mut fp = field.clone();
        fp.insert(p.clone(), x0 + h)?;
        let mut fm = field.clone();
        fm.insert(p.clone(), x0 - h)?;
        for (r, oct) in system.iter().enumerate() {
            let rp = octahedron_values(&fp, oct.cell())?.residual(branch);
            let rm = octahedron_values(&fm, oct.cell())?.residual(branch);
            jac[(r, c)] = (rp - rm) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Rank probe of the cube system at a random solution: the determined
/// vertices are offered first so the frozen split is reproduced when valid.
pub fn cube_rank_probe<R: Rng + ?Sized>(rng: &mut R) -> Result<RankProbe> {
    let cube = OrientedCell::new(CellKind::Cube4, Point::zeros(4), &[0, 1, 2, 3])?;
    let field = loop {
        let init = random_field::<f64, R>(&free_vertices(&cube)?, rng);
        match solve_cube_ivp(&cube, &init, Branch::Dkp) {
            Ok(f) if system_conditioning(&f, &cube)? > 1e-3 => break f,
            _ => continue,
        }
    };
    let mut columns: Vec<Point> = CUBE_DETERMINED_SUBSETS.iter().map(|s| cube_point(&cube, s)).collect();
    columns.extend(free_vertices(&cube)?);
    let jac = system_jacobian(&field, &cube, &columns, Branch::Dkp)?;
    Ok(rank_probe(&jac, &columns, 1e-7))
}
