//! The correspondence `P_i` between Q(A_N) and Z^N that drops coordinate `i`.

use std::collections::BTreeSet;

use super::cell::{CellKind, OrientedCell};
use super::point::Point;
use crate::error::{Error, Result};

/// Drops coordinate `i`.
pub fn project_point(i: usize, point: &Point) -> Result<Point> {
    if i >= point.dim() {
        return Err(Error::Projection(format!("direction {i} out of range for {point}")));
    }
    Ok(point.dropped(i))
}

/// Inverse of [`project_point`] on Q(A_N): re-inserts `n_i` so the sum is 0.
pub fn lift_point(i: usize, point: &Point) -> Result<Point> {
    if i > point.dim() {
        return Err(Error::Projection(format!("direction {i} out of range for {point}")));
    }
    Ok(point.inserted(i, -point.sum()))
}

/// Projects the vertex set of a root-lattice cell. `i` must not exceed any
/// index of the cell.
pub fn project_cell_vertices(i: usize, cell: &OrientedCell) -> Result<BTreeSet<Point>> {
    if cell.kind().lattice() != super::cell::LatticeKind::RootA {
        return Err(Error::Projection(format!("{cell} is not a root-lattice cell")));
    }
    if cell.indices().iter().any(|&d| d < i) {
        return Err(Error::Projection(format!(
            "P_{i} needs {i} below every index of {cell}"
        )));
    }
    cell.vertices().iter().map(|v| project_point(i, v)).collect()
}

/// The octahedron `[0 j+1 k+1 l+1]` whose vertices project under `P_0` onto
/// the inscribed octahedron of the cube `{j k l}`.
pub fn lift_cube3(cube: &OrientedCell) -> Result<OrientedCell> {
    lift_cube(cube, CellKind::Cube3, CellKind::Octahedron)
}

/// The black ambo-simplex `[0 j+1 k+1 l+1 m+1]` of the decomposition of the
/// 4D cube `{j k l m}`; the white one sits at this base shifted by `-e_0`.
pub fn lift_cube4(cube: &OrientedCell) -> Result<OrientedCell> {
    lift_cube(cube, CellKind::Cube4, CellKind::BlackAmbo4)
}

/// Base of the lift: `(-2 - Σc, c)`, so level-2 vertices sum to zero.
fn lift_cube(cube: &OrientedCell, from: CellKind, to: CellKind) -> Result<OrientedCell> {
    if cube.kind() != from {
        return Err(Error::UnsupportedKind { op: "lift_cube", kind: cube.kind() });
    }
    let c = cube.base();
    let base = c.inserted(0, -2 - c.sum());
    let mut idx = vec![0];
    idx.extend(cube.indices().iter().map(|d| d + 1));
    Ok(OrientedCell::new(to, base, &idx)?.with_sign(cube.sign()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedron_projects_to_inscribed_octahedron() {
        let cube = OrientedCell::new(CellKind::Cube3, Point::new(vec![1, 0, -2]), &[0, 1, 2]).unwrap();
        let oct = lift_cube3(&cube).unwrap();
        assert!(oct.vertices().iter().all(|v| v.sum() == 0));
        let projected = project_cell_vertices(0, &oct).unwrap();
        let cube_vertices = cube.vertices();
        assert_eq!(projected.len(), 6);
        assert!(projected.is_subset(&cube_vertices));
        let c = cube.base();
        assert!(!projected.contains(c));
        assert!(!projected.contains(&c.offset(&[0, 1, 2])));
    }

    #[test]
    fn point_roundtrip() {
        let p = Point::new(vec![3, -1, 2]);
        let q = lift_point(0, &p).unwrap();
        assert_eq!(q.sum(), 0);
        assert_eq!(project_point(0, &q).unwrap(), p);
    }

    #[test]
    fn precondition_enforced() {
        let oct = OrientedCell::new(CellKind::Octahedron, Point::zeros(5), &[0, 1, 2, 3]).unwrap();
        assert!(project_cell_vertices(1, &oct).is_err());
        assert!(project_cell_vertices(0, &oct).is_ok());
    }
}
