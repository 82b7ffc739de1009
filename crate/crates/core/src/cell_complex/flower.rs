use std::fmt;

use super::cell::{Cell, CellKind, LatticeKind, OrientedCell, Sign};
use super::chain::Chain;
use super::point::Point;
use crate::error::{Error, Result};

/// One 4D corner: the facets of `cell` adjacent to `center`, taken
/// `multiplicity` times.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub cell: OrientedCell,
    pub center: Point,
    pub multiplicity: i64,
}

impl Corner {
    pub fn chain(&self) -> Result<Chain> {
        Ok(self.cell.corner(&self.center)?.scaled(self.multiplicity))
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multiplicity == 1 {
            write!(f, "{} center {}", self.cell, self.center)
        } else {
            write!(f, "{}*{} center {}", self.multiplicity, self.cell, self.center)
        }
    }
}

/// Output of [`decompose_flower`]. The corners live in the lattice extended
/// by `extra_dims` zero coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowerDecomposition {
    pub corners: Vec<Corner>,
    pub extra_dims: usize,
}

impl FlowerDecomposition {
    pub fn chain_sum(&self) -> Result<Chain> {
        corner_chain_sum(&self.corners)
    }

    /// The center in the extended lattice.
    pub fn center(&self, vertex: &Point) -> Point {
        vertex.padded(self.extra_dims)
    }
}

pub fn corner_chain_sum(corners: &[Corner]) -> Result<Chain> {
    let mut out = Chain::new();
    for c in corners {
        out += &c.chain()?;
    }
    Ok(out)
}

/// Checks that every 2-cell of `manifold` through `vertex` is matched, i.e.
/// the boundary has no term adjacent to `vertex`.
pub fn check_interior(manifold: &Chain, vertex: &Point) -> Result<()> {
    if !manifold.cells().any(|c| c.contains_vertex(vertex)) {
        return Err(Error::NotInterior(format!("{vertex} lies on no cell of the manifold")));
    }
    let unmatched = manifold
        .filter(|c| c.contains_vertex(vertex))
        .boundary()?
        .filter(|f| f.contains_vertex(vertex));
    if let Some((f, k)) = unmatched.iter().next() {
        return Err(Error::NotInterior(format!(
            "{vertex}: facet {f} left with coefficient {k} ({} unmatched)",
            unmatched.len()
        )));
    }
    Ok(())
}

/// The sub-chain of all 3-cells of `manifold` containing `vertex`.
pub fn flower(manifold: &Chain, vertex: &Point) -> Result<Chain> {
    if let Some(c) = manifold.cells().find(|c| c.dim() != 3) {
        return Err(Error::NotAFlower(format!("{c} is not a 3-cell")));
    }
    check_interior(manifold, vertex)?;
    Ok(manifold.filter(|c| c.contains_vertex(vertex)))
}

fn validate_flower(flower: &Chain, vertex: &Point) -> Result<LatticeKind> {
    let mut lattice = None;
    for c in flower.cells() {
        if c.dim() != 3 {
            return Err(Error::NotAFlower(format!("{c} is not a 3-cell")));
        }
        if c.base().dim() != vertex.dim() {
            return Err(Error::NotAFlower(format!("{c} and {vertex} differ in dimension")));
        }
        if !c.contains_vertex(vertex) {
            return Err(Error::NotAFlower(format!("{c} does not contain {vertex}")));
        }
        match lattice {
            None => lattice = Some(c.kind().lattice()),
            Some(l) if l != c.kind().lattice() => {
                return Err(Error::NotAFlower("cells from both lattices".into()));
            }
            _ => {}
        }
    }
    let lattice = lattice.ok_or_else(|| Error::NotAFlower("empty chain".into()))?;
    check_interior(flower, vertex).map_err(|e| Error::NotAFlower(e.to_string()))?;
    Ok(lattice)
}

/// Writes a flower as a sum of 4D corners.
///
/// Root-lattice flowers are embedded two dimensions up with auxiliary
/// directions `M = n` and `L = n + 1` (`n` the coordinate count): every petal
/// becomes a 4-cell over `M`, and the white tetrahedra over `M` left in the
/// sum are removed with white 4-simplices over `L`. Cubic flowers use one
/// auxiliary direction and a 4D cube per petal.
pub fn decompose_flower(flower: &Chain, vertex: &Point) -> Result<FlowerDecomposition> {
    let lattice = validate_flower(flower, vertex)?;
    let n = vertex.dim();
    let extra = match lattice {
        LatticeKind::RootA => 2,
        LatticeKind::Cubic => 1,
    };
    let mut corners = Vec::new();
    let center = vertex.padded(extra);
    let m = n;
    let lift = |c: &Cell, kind: CellKind, base: Point, dir: usize| -> OrientedCell {
        let mut idx = c.indices().to_vec();
        idx.push(dir);
        OrientedCell::new(kind, base, &idx).expect("lifted cell is valid")
    };
    for (c, k) in flower.iter() {
        let kind = match c.kind() {
            CellKind::BlackTetrahedron => CellKind::BlackSimplex4,
            CellKind::Octahedron => CellKind::BlackAmbo4,
            CellKind::WhiteTetrahedron => CellKind::WhiteAmbo4,
            CellKind::Cube3 => CellKind::Cube4,
            other => return Err(Error::UnsupportedKind { op: "decompose_flower", kind: other }),
        };
        let cell = lift(c, kind, c.base().padded(extra), m);
        corners.push(oriented_corner(cell, &center, k));
    }
    if lattice == LatticeKind::RootA {
        let l = n + 1;
        let partial = corner_chain_sum(&corners)?;
        let vertical: Vec<(Cell, i64)> = partial
            .iter()
            .filter(|(f, _)| f.kind() == CellKind::WhiteTetrahedron && f.indices().contains(&m))
            .map(|(f, k)| (f.clone(), k))
            .collect();
        for (f, k) in vertical {
            let cell = lift(&f, CellKind::WhiteSimplex4, f.base().shifted(l, -1), l);
            corners.push(oriented_corner(cell, &center, -k));
        }
    }
    let decomposition = FlowerDecomposition { corners, extra_dims: extra };
    let residual = decomposition.chain_sum()? - flower.padded(extra);
    if !residual.is_empty() {
        return Err(Error::DecompositionResidual(residual.len()));
    }
    Ok(decomposition)
}

fn oriented_corner(cell: OrientedCell, center: &Point, coef: i64) -> Corner {
    let sign = cell.sign() * if coef < 0 { Sign::Minus } else { Sign::Plus };
    Corner { cell: cell.with_sign(sign), center: center.clone(), multiplicity: coef.abs() }
}

/// The 14-cell flower of Q(A_3) around `center`, spanned by four directions:
/// four black and four white tetrahedra and six octahedra.
pub fn root_flower(center: &Point, dirs: [usize; 4]) -> Result<Chain> {
    let mut out = Chain::new();
    for (p, &a) in dirs.iter().enumerate() {
        let btet = OrientedCell::new(CellKind::BlackTetrahedron, center.shifted(a, -1), &dirs)?;
        out.add_oriented(&btet, -1);
        let others: Vec<usize> = dirs.iter().copied().filter(|&d| d != a).collect();
        let mut wbase = center.clone();
        for &d in &others {
            wbase = wbase.shifted(d, -1);
        }
        let wtet = OrientedCell::new(CellKind::WhiteTetrahedron, wbase, &dirs)?;
        out.add_oriented(&wtet, -1);
        for &b in &dirs[p + 1..] {
            let base = center.shifted(a, -1).shifted(b, -1);
            out.add_oriented(&OrientedCell::new(CellKind::Octahedron, base, &dirs)?, 1);
        }
    }
    Ok(out)
}

/// The eight unit cubes of Z^N around `center` spanned by three directions.
pub fn cubic_flower(center: &Point, dirs: [usize; 3]) -> Result<Chain> {
    let mut out = Chain::new();
    for mask in 0u8..8 {
        let mut base = center.clone();
        for (q, &d) in dirs.iter().enumerate() {
            if mask & (1 << q) != 0 {
                base = base.shifted(d, -1);
            }
        }
        out.add_oriented(&OrientedCell::new(CellKind::Cube3, base, &dirs)?, 1);
    }
    Ok(out)
}
