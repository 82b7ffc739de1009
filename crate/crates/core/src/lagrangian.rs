//! The dilogarithmic 3-form, actions, exterior derivatives on 4-cells and the
//! corner quantities `E` whose logarithms are the corner equations.

use crate::cell_complex::projection::lift_cube4;
use crate::cell_complex::{Chain, CellKind, OrientedCell, Point};
use crate::dkp::{ambo_point, octahedron_values, system_on_4cell, Field, OctValues};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::big_lambda;

/// Ratio `num/den`, refusing denominators below `1e-12` of `scale`.
fn guarded_div<T: Real>(num: T, den: T, scale: T, what: &str) -> Result<T> {
    if !(den.abs() >= T::lit(1e-12) * scale) || den == T::zero() {
        return Err(Error::Singular(format!("near-zero denominator in {what}")));
    }
    Ok(num / den)
}

/// The 3-form on octahedral values, without the orientation sign.
pub fn three_form_values<T: Real>(v: &OctValues<T>) -> Result<T> {
    let a = v.ij * v.kl;
    let b = v.ik * v.jl;
    let c = v.il * v.jk;
    let sa = a.abs();
    let z1 = guarded_div(a, b, sa, "3-form")?;
    let z2 = guarded_div(b, c, b.abs(), "3-form")?;
    let z3 = guarded_div(-c, a, c.abs(), "3-form")?;
    Ok(T::lit(0.5) * (big_lambda(z1)? + big_lambda(z2)? + big_lambda(z3)?))
}

/// Value of the 3-form on an oriented 3-cell. Tetrahedra carry zero; a
/// 3-cube carries the value of its inscribed octahedron.
pub fn three_form<T: Real>(field: &Field<T>, cell: &OrientedCell) -> Result<T> {
    match cell.kind() {
        CellKind::BlackTetrahedron | CellKind::WhiteTetrahedron => Ok(T::zero()),
        CellKind::Octahedron | CellKind::Cube3 => {
            let v = three_form_values(&octahedron_values(field, cell.cell())?)?;
            Ok(v * T::lit(cell.sign().as_i64() as f64))
        }
        kind => Err(Error::UnsupportedKind { op: "three_form", kind }),
    }
}

/// `S = Σ coef · L(cell)` over a chain of 3-cells.
pub fn action<T: Real>(field: &Field<T>, chain: &Chain) -> Result<T> {
    let mut total = T::zero();
    for (cell, k) in chain.iter() {
        let v = three_form(field, &OrientedCell::from(cell.clone()))?;
        total = total + v * T::lit(k as f64);
    }
    Ok(total)
}

/// Action over the boundary of a 4-cell.
pub fn exterior_derivative<T: Real>(field: &Field<T>, cell4: &OrientedCell) -> Result<T> {
    if cell4.kind().dim() != 4 {
        return Err(Error::UnsupportedKind { op: "exterior_derivative", kind: cell4.kind() });
    }
    action(field, &cell4.facets()?)
}

/// The two ambo-simplices whose difference represents a 4-cube: the black
/// one of [`lift_cube4`] and the white one one step back in direction 0.
pub fn cube_ambo_pair(cube: &OrientedCell) -> Result<(OrientedCell, OrientedCell)> {
    let black = lift_cube4(cube)?;
    let white = OrientedCell::new(CellKind::WhiteAmbo4, black.base().shifted(0, -1), black.indices())?
        .with_sign(black.sign());
    Ok((black, white))
}

/// Root-lattice field on the vertices of [`cube_ambo_pair`], read off the
/// cube field by dropping coordinate 0.
pub fn lifted_cube_field<T: Real>(field: &Field<T>, cube: &OrientedCell) -> Result<Field<T>> {
    let (black, white) = cube_ambo_pair(cube)?;
    let mut out = Field::new();
    for p in black.vertices().into_iter().chain(white.vertices()) {
        let v = field.get(&p.dropped(0))?;
        out.insert(p, v)?;
    }
    Ok(out)
}

/// Corner quantity at one vertex of a 4-cell. `factors` holds the quantities
/// that take the branch value (−1 for dKP, +1 for dKP⁻); for the
/// double-index corners of a 4-cube `e` is the ratio of the two factors.
#[derive(Clone, Debug, PartialEq)]
pub struct CornerQuantity<T> {
    pub vertex: Point,
    pub e: T,
    pub factors: Vec<T>,
}

/// `(n1 + sn·n2)/(d1 + sd·d2)` with products given pairwise.
fn frac<T: Real>(n: (T, T), sn: T, d: (T, T), sd: T) -> Result<T> {
    let den = d.0 + sd * d.1;
    guarded_div(n.0 + sn * n.1, den, d.0.abs() + d.1.abs(), "corner quantity")
}

type Getter<'a, T> = dyn Fn(&[usize]) -> Result<T> + 'a;

fn e_ij<T: Real>(g: &Getter<T>, p: [usize; 5]) -> Result<T> {
    let [i, j, k, l, m] = p;
    let x = |a: usize, b: usize| g(&[a, b]);
    let (one, neg) = (T::one(), -T::one());
    let ij = x(i, j)?;
    let f1 = frac((ij * x(k, l)?, x(i, l)? * x(j, k)?), one, (ij * x(k, l)?, x(i, k)? * x(j, l)?), neg)?;
    let f2 = frac((ij * x(k, m)?, x(i, k)? * x(j, m)?), neg, (ij * x(k, m)?, x(i, m)? * x(j, k)?), one)?;
    let f3 = frac((ij * x(l, m)?, x(i, m)? * x(j, l)?), one, (ij * x(l, m)?, x(i, l)? * x(j, m)?), neg)?;
    Ok(f1 * f2 * f3)
}

fn e_ik<T: Real>(g: &Getter<T>, p: [usize; 5]) -> Result<T> {
    let [i, j, k, l, m] = p;
    let x = |a: usize, b: usize| g(&[a, b]);
    let (one, neg) = (T::one(), -T::one());
    let ik = x(i, k)?;
    let f1 = frac((ik * x(j, l)?, x(i, j)? * x(k, l)?), neg, (ik * x(j, l)?, x(i, l)? * x(j, k)?), neg)?;
    let f2 = frac((ik * x(j, m)?, x(i, m)? * x(j, k)?), neg, (ik * x(j, m)?, x(i, j)? * x(k, m)?), neg)?;
    let f3 = frac((ik * x(l, m)?, x(i, l)? * x(k, m)?), neg, (ik * x(l, m)?, x(i, m)? * x(k, l)?), one)?;
    Ok(f1 * f2 * f3)
}

fn e_ijk<T: Real>(g: &Getter<T>, p: [usize; 5]) -> Result<T> {
    let [i, j, k, l, m] = p;
    let x = |a: usize, b: usize, c: usize| g(&[a, b, c]);
    let (one, neg) = (T::one(), -T::one());
    let ijk = x(i, j, k)?;
    let f1 = frac((ijk * x(k, l, m)?, x(i, k, m)? * x(j, k, l)?), one, (ijk * x(k, l, m)?, x(i, k, l)? * x(j, k, m)?), neg)?;
    let f2 = frac((ijk * x(j, l, m)?, x(i, j, l)? * x(j, k, m)?), neg, (ijk * x(j, l, m)?, x(i, j, m)? * x(j, k, l)?), one)?;
    let f3 = frac((ijk * x(i, l, m)?, x(i, j, m)? * x(i, k, l)?), one, (ijk * x(i, l, m)?, x(i, j, l)? * x(i, k, m)?), neg)?;
    Ok(f1 * f2 * f3)
}

fn e_ijl<T: Real>(g: &Getter<T>, p: [usize; 5]) -> Result<T> {
    let [i, j, k, l, m] = p;
    let x = |a: usize, b: usize, c: usize| g(&[a, b, c]);
    let (one, neg) = (T::one(), -T::one());
    let ijl = x(i, j, l)?;
    let f1 = frac((ijl * x(k, l, m)?, x(i, k, l)? * x(j, l, m)?), neg, (ijl * x(k, l, m)?, x(i, l, m)? * x(j, k, l)?), one)?;
    let f2 = frac((ijl * x(j, k, m)?, x(i, j, m)? * x(j, k, l)?), neg, (ijl * x(j, k, m)?, x(i, j, k)? * x(j, l, m)?), neg)?;
    let f3 = frac((ijl * x(i, k, m)?, x(i, j, k)? * x(i, l, m)?), neg, (ijl * x(i, k, m)?, x(i, j, m)? * x(i, k, l)?), neg)?;
    Ok(f1 * f2 * f3)
}

/// `E` at the ambo vertex labelled by `positions` (two for black, three for
/// white), obtained from the template formulas by cyclic relabelling.
fn ambo_corner_e<T: Real>(field: &Field<T>, cell4: &OrientedCell, positions: &[usize]) -> Result<T> {
    let g = |pos: &[usize]| field.get(&ambo_point(cell4, pos));
    let rot = |r: usize| -> [usize; 5] { std::array::from_fn(|q| (r + q) % 5) };
    let md = |v: isize| v.rem_euclid(5) as usize;
    match cell4.kind() {
        CellKind::BlackAmbo4 => {
            let (a, c) = (positions[0].min(positions[1]), positions[0].max(positions[1]));
            match c - a {
                1 => e_ij(&g, rot(a)),
                4 => e_ij(&g, rot(c)),
                2 => e_ik(&g, rot(a)),
                _ => e_ik(&g, rot(c)),
            }
        }
        CellKind::WhiteAmbo4 => {
            let comp: Vec<usize> = (0..5).filter(|q| !positions.contains(q)).collect();
            let (a, c) = (comp[0] as isize, comp[1] as isize);
            match c - a {
                1 => e_ijk(&g, rot(md(a + 2))),
                4 => e_ijk(&g, rot(md(c + 2))),
                2 => e_ijl(&g, rot(md(a - 2))),
                _ => e_ijl(&g, rot(md(c - 2))),
            }
        }
        kind => Err(Error::UnsupportedKind { op: "corner_E", kind }),
    }
}

fn subset_positions(cell4: &OrientedCell, vertex: &Point) -> Result<Vec<usize>> {
    let subset = cell4.cell().vertex_subset(vertex).ok_or_else(|| Error::NotAVertex {
        point: vertex.to_string(),
        cell: cell4.to_string(),
    })?;
    Ok(subset
        .iter()
        .map(|d| cell4.indices().iter().position(|x| x == d).expect("subset of indices"))
        .collect())
}

/// Corner quantity of a black/white ambo-simplex or a 4-cube at `vertex`,
/// reported for the positively oriented cell.
pub fn corner_e<T: Real>(field: &Field<T>, cell4: &OrientedCell, vertex: &Point) -> Result<CornerQuantity<T>> {
    let pos = subset_positions(cell4, vertex)?;
    match cell4.kind() {
        CellKind::BlackAmbo4 | CellKind::WhiteAmbo4 => {
            let e = ambo_corner_e(field, cell4, &pos)?;
            Ok(CornerQuantity { vertex: vertex.clone(), e, factors: vec![e] })
        }
        CellKind::Cube4 => {
            if pos.is_empty() || pos.len() == 4 {
                return Err(Error::NoCornerEquation(vertex.to_string()));
            }
            let (black, white) = cube_ambo_pair(cell4)?;
            let lifted = lifted_cube_field(field, cell4)?;
            let shifted: Vec<usize> = pos.iter().map(|q| q + 1).collect();
            let (e, factors) = match pos.len() {
                1 => {
                    let e = ambo_corner_e(&lifted, &black, &[0, shifted[0]])?;
                    (e, vec![e])
                }
                2 => {
                    let lower = ambo_corner_e(&lifted, &black, &shifted)?;
                    let upper = ambo_corner_e(&lifted, &white, &[0, shifted[0], shifted[1]])?;
                    (guarded_div(lower, upper, upper.abs(), "cube corner")?, vec![lower, upper])
                }
                3 => {
                    let upper = ambo_corner_e(&lifted, &white, &shifted)?;
                    let e = guarded_div(T::one(), upper, T::one(), "cube corner")?;
                    (e, vec![e])
                }
                _ => return Err(Error::NoCornerEquation(vertex.to_string())),
            };
            Ok(CornerQuantity { vertex: vertex.clone(), e, factors })
        }
        kind => Err(Error::UnsupportedKind { op: "corner_E", kind }),
    }
}

/// Vertices of a 4-cell that carry a corner equation.
pub fn corner_vertices(cell4: &OrientedCell) -> Result<Vec<Point>> {
    match cell4.kind() {
        CellKind::BlackAmbo4 | CellKind::WhiteAmbo4 => Ok(cell4.vertices().into_iter().collect()),
        CellKind::Cube4 => crate::dkp::solution_vertices(cell4),
        kind => Err(Error::UnsupportedKind { op: "corner_vertices", kind }),
    }
}

pub fn corner_quantities<T: Real>(field: &Field<T>, cell4: &OrientedCell) -> Result<Vec<CornerQuantity<T>>> {
    corner_vertices(cell4)?.iter().map(|v| corner_e(field, cell4, v)).collect()
}

/// `(1/x)·log|E|` with the orientation sign; equals `∂S/∂x` at the vertex.
pub fn corner_residual<T: Real>(field: &Field<T>, cell4: &OrientedCell, vertex: &Point) -> Result<T> {
    let q = corner_e(field, cell4, vertex)?;
    if q.e == T::zero() {
        return Err(Error::Singular(format!("E = 0 at {vertex} on {cell4}")));
    }
    let s = T::lit(cell4.sign().as_i64() as f64);
    Ok(s * q.e.abs().ln() / field.get(vertex)?)
}

/// `∂S/∂x` at `vertex` for any 4-cell: zero where the action does not
/// depend on the vertex (4-simplices, the two extreme vertices of a 4-cube).
pub fn corner_gradient<T: Real>(field: &Field<T>, cell4: &OrientedCell, vertex: &Point) -> Result<T> {
    if !cell4.contains_vertex(vertex) {
        return Err(Error::NotAVertex { point: vertex.to_string(), cell: cell4.to_string() });
    }
    match cell4.kind() {
        CellKind::BlackSimplex4 | CellKind::WhiteSimplex4 => Ok(T::zero()),
        _ => match corner_residual(field, cell4, vertex) {
            Err(Error::NoCornerEquation(_)) => Ok(T::zero()),
            other => other,
        },
    }
}

/// Octahedra whose brackets enter the corner quantities of a 4-cell, with the
/// field they are evaluated on (the lifted field for a 4-cube).
fn conditioning_octahedra<T: Real>(field: &Field<T>, cell4: &OrientedCell) -> Result<(Vec<OrientedCell>, Field<T>, bool)> {
    match cell4.kind() {
        CellKind::BlackAmbo4 | CellKind::WhiteAmbo4 => Ok((system_on_4cell(cell4)?, field.clone(), false)),
        CellKind::Cube4 => {
            let (black, white) = cube_ambo_pair(cell4)?;
            let mut octs = system_on_4cell(&black)?;
            octs.extend(system_on_4cell(&white)?);
            Ok((octs, lifted_cube_field(field, cell4)?, true))
        }
        _ => Ok((Vec::new(), field.clone(), false)),
    }
}

/// Smallest normalized bracket over the octahedra of a 4-cell, optionally
/// only those through `vertex`. Returns infinity when no octahedron applies.
pub fn conditioning<T: Real>(field: &Field<T>, cell4: &OrientedCell, vertex: Option<&Point>) -> Result<T> {
    let (octs, values, lifted) = conditioning_octahedra(field, cell4)?;
    let mut worst = T::infinity();
    for oct in &octs {
        if let Some(v) = vertex {
            let through = oct.vertices().iter().any(|p| if lifted { &p.dropped(0) == v } else { p == v });
            if !through {
                continue;
            }
        }
        worst = worst.min(octahedron_values(&values, oct.cell())?.conditioning());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dkp::{golden_field, Branch};
    use std::f64::consts::PI;

    fn black() -> OrientedCell {
        OrientedCell::new(CellKind::BlackAmbo4, Point::new(vec![-2, 0, 0, 0, 0]), &[0, 1, 2, 3, 4]).unwrap()
    }

    #[test]
    fn golden_three_form() {
        let cell = black();
        let g = golden_field::<f64>(&cell, Branch::Dkp).unwrap();
        for oct in system_on_4cell(&cell).unwrap() {
            let v = three_form(&g, &oct).unwrap();
            assert!((v + PI * PI / 20.0).abs() < 1e-12, "{oct}: {v}");
            let neg = three_form(&g, &(-oct)).unwrap();
            assert_eq!(neg, -v);
        }
        let s = exterior_derivative(&g, &cell).unwrap();
        assert!((s + PI * PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn golden_corners() {
        let cell = black();
        let g = golden_field::<f64>(&cell, Branch::Dkp).unwrap();
        for q in corner_quantities(&g, &cell).unwrap() {
            assert!((q.e + 1.0).abs() < 1e-12);
        }
        let gi = golden_field::<f64>(&cell, Branch::DkpMinus).unwrap();
        for q in corner_quantities(&gi, &cell).unwrap() {
            assert!((q.e - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn simplex_derivative_vanishes() {
        let cell = OrientedCell::new(CellKind::BlackSimplex4, Point::new(vec![-1, 0, 0, 0, 0]), &[0, 1, 2, 3, 4]).unwrap();
        let f = Field::<f64>::new();
        assert_eq!(exterior_derivative(&f, &cell).unwrap(), 0.0);
    }

    #[test]
    fn cube_extremes_have_no_corner() {
        let cube = OrientedCell::new(CellKind::Cube4, Point::zeros(4), &[0, 1, 2, 3]).unwrap();
        let f = Field::<f64>::new();
        assert!(matches!(corner_e(&f, &cube, &Point::zeros(4)), Err(Error::NoCornerEquation(_))));
        assert!(matches!(corner_e(&f, &cube, &Point::new(vec![1, 1, 1, 1])), Err(Error::NoCornerEquation(_))));
    }
}
