//! Seeded random cells, fields and solutions.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cell_complex::{CellKind, FlowerDecomposition, LatticeKind, OrientedCell, Point};
use crate::dkp::{
    free_vertices, random_field, solve_ambo_ivp, solve_cube_ivp, system_conditioning, Branch, Field,
};
use crate::error::Result;
use crate::lagrangian::conditioning;

/// Generator for one trial of one check. Distinct `(stream, trial)` pairs
/// give independent sequences under the same seed.
pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream << 32) ^ trial);
    rng
}

/// A random lattice point of the rank-`n` lattice with small coordinates.
pub fn random_point<R: Rng + ?Sized>(lattice: LatticeKind, n: usize, rng: &mut R) -> Point {
    let mut c: Vec<i64> = (0..lattice.coords(n)).map(|_| rng.gen_range(-2..=2)).collect();
    if lattice == LatticeKind::RootA {
        let s: i64 = c.iter().sum();
        let d = rng.gen_range(0..c.len());
        c[d] -= s;
    }
    Point::new(c)
}

fn sorted_sample<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut v = sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}

/// A positively oriented 4-cell of `kind` in the rank-`n` lattice with random
/// directions and position.
pub fn random_cell<R: Rng + ?Sized>(kind: CellKind, n: usize, rng: &mut R) -> Result<OrientedCell> {
    let lattice = kind.lattice();
    let idx = sorted_sample(rng, lattice.coords(n), kind.index_count());
    let mut base = random_point(lattice, n, rng);
    if let Some(level) = kind.level() {
        base = base.shifted(idx[0], -(level as i64));
    }
    OrientedCell::new(kind, base, &idx)
}

/// Random directions for a three-dimensional flower: four root directions or
/// three cube directions.
pub fn random_flower_dirs<R: Rng + ?Sized>(lattice: LatticeKind, n: usize, rng: &mut R) -> Vec<usize> {
    let k = match lattice {
        LatticeKind::RootA => 4,
        LatticeKind::Cubic => 3,
    };
    sorted_sample(rng, lattice.coords(n), k)
}

/// A completed solution of the 4-cell system from random initial data,
/// resampling until every bracket clears `floor`.
pub fn sample_solution<R: Rng + ?Sized>(cell4: &OrientedCell, branch: Branch, floor: f64, rng: &mut R) -> Result<Field<f64>> {
    let free = free_vertices(cell4)?;
    loop {
        let init: Field<f64> = random_field(&free, rng);
        let solved = match cell4.kind() {
            CellKind::Cube4 => solve_cube_ivp(cell4, &init, branch),
            _ => solve_ambo_ivp(cell4, &init, branch),
        };
        let field = match solved {
            Ok(f) => f,
            Err(e) if e.is_singular() => continue,
            Err(e) => return Err(e),
        };
        let plain = match branch {
            Branch::Dkp => field.clone(),
            Branch::DkpMinus => field.inverted(),
        };
        if system_conditioning(&plain, cell4)? >= floor && conditioning(&plain, cell4, None)? >= floor {
            return Ok(field);
        }
    }
}

/// Random values on `points`, resampled until every listed 4-cell is
/// conditioned at least `floor` near `vertex` (everywhere if `None`).
pub fn sample_conditioned_field<R: Rng + ?Sized>(
    points: &[Point],
    cells: &[OrientedCell],
    vertex: Option<&Point>,
    floor: f64,
    rng: &mut R,
) -> Result<Field<f64>> {
    loop {
        let field: Field<f64> = random_field(points, rng);
        let mut ok = true;
        for c in cells {
            if conditioning(&field, c, vertex)? < floor {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(field);
        }
    }
}

/// All vertices of the 4-cells of a decomposition.
pub fn decomposition_vertices(d: &FlowerDecomposition) -> Vec<Point> {
    let set: BTreeSet<Point> = d.corners.iter().flat_map(|c| c.cell.vertices()).collect();
    set.into_iter().collect()
}
