//! Executable checks: branch classification, closure, Euler–Lagrange sums,
//! and the aggregated suite.

mod config;
pub mod sampling;
mod suite;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cell_complex::{decompose_flower, flower, CellKind, Chain, OrientedCell, Point};
use crate::dkp::{max_relative_residual, Branch, Field};
use crate::error::{Error, Result};
use crate::lagrangian::{
    action, corner_gradient, corner_quantities, cube_ambo_pair, exterior_derivative, lifted_cube_field,
};

pub use config::{
    SuiteConfig, Tolerances, DEFAULT_DIM, DEFAULT_FLOWER_TRIALS, DEFAULT_SEED, DEFAULT_TRIALS, TOLERANCE_TABLE,
};
pub use suite::{run_suite, SuiteReport, Summary, REPORT_FORMAT_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchClass {
    #[serde(rename = "dKP")]
    Dkp,
    #[serde(rename = "dKP-")]
    DkpMinus,
    #[serde(rename = "neither")]
    Neither,
}

impl BranchClass {
    pub fn name(self) -> &'static str {
        match self {
            BranchClass::Dkp => "dKP",
            BranchClass::DkpMinus => "dKP-",
            BranchClass::Neither => "neither",
        }
    }
}

impl From<Branch> for BranchClass {
    fn from(b: Branch) -> Self {
        match b {
            Branch::Dkp => BranchClass::Dkp,
            Branch::DkpMinus => BranchClass::DkpMinus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerEntry {
    pub vertex: String,
    pub e: f64,
    pub factors: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub branch: BranchClass,
    pub corners: Vec<CornerEntry>,
    /// Largest `|E + 1|` over all corner factors.
    pub max_dev_minus: f64,
    /// Largest `|E − 1|` over all corner factors.
    pub max_dev_plus: f64,
    pub max_dkp_residual: f64,
    pub max_dkp_minus_residual: f64,
    /// The branch agrees with which residual system is solved.
    pub residuals_agree: bool,
}

/// Classifies a field on a black/white ambo-simplex or a 4-cube by its
/// corner quantities and cross-checks against the dKP and dKP⁻ residuals.
pub fn classify_branch(field: &Field<f64>, cell4: &OrientedCell, tol: &Tolerances) -> Result<BranchReport> {
    let quantities = corner_quantities(field, cell4)?;
    let mut dev_minus: f64 = 0.0;
    let mut dev_plus: f64 = 0.0;
    for q in &quantities {
        for &f in &q.factors {
            if !f.is_finite() {
                return Err(Error::NonFinite(format!("corner quantity at {}", q.vertex)));
            }
            dev_minus = dev_minus.max((f + 1.0).abs());
            dev_plus = dev_plus.max((f - 1.0).abs());
        }
    }
    let branch = if dev_minus <= tol.classify {
        BranchClass::Dkp
    } else if dev_plus <= tol.classify {
        BranchClass::DkpMinus
    } else if dev_minus > tol.neither_gap && dev_plus > tol.neither_gap {
        BranchClass::Neither
    } else {
        return Err(Error::Inconclusive { dev_minus, dev_plus });
    };
    let r_plain = max_relative_residual(field, cell4, Branch::Dkp)?;
    let r_inv = max_relative_residual(field, cell4, Branch::DkpMinus)?;
    let residuals_agree =
        (branch == BranchClass::Dkp) == (r_plain <= tol.equivalence) && (branch == BranchClass::DkpMinus) == (r_inv <= tol.equivalence);
    Ok(BranchReport {
        branch,
        corners: quantities
            .into_iter()
            .map(|q| CornerEntry { vertex: q.vertex.to_string(), e: q.e, factors: q.factors })
            .collect(),
        max_dev_minus: dev_minus,
        max_dev_plus: dev_plus,
        max_dkp_residual: r_plain,
        max_dkp_minus_residual: r_inv,
        residuals_agree,
    })
}

/// One verification outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: u64,
}

impl CheckRecord {
    /// Builds a record; `pass` is `|observed − expected| ≤ tolerance`.
    pub fn new(check: &str, params: impl Into<String>, observed: f64, expected: f64, tolerance: f64, seed: u64) -> Self {
        let pass = (observed - expected).abs() <= tolerance;
        CheckRecord { check: check.to_string(), params: params.into(), observed, expected, tolerance, pass, seed }
    }

    pub fn deviation(&self) -> f64 {
        (self.observed - self.expected).abs()
    }
}

/// Closure constant on the solution component of the golden field: `∓π²/4`
/// on ambo-simplices, 0 on 4-cubes.
pub fn nominal_closure_constant(cell4: &OrientedCell, branch: Branch) -> Result<f64> {
    let s = cell4.sign().as_i64() as f64;
    match (cell4.kind(), branch) {
        (CellKind::BlackAmbo4 | CellKind::WhiteAmbo4, Branch::Dkp) => Ok(-s * PI * PI / 4.0),
        (CellKind::BlackAmbo4 | CellKind::WhiteAmbo4, Branch::DkpMinus) => Ok(s * PI * PI / 4.0),
        (CellKind::Cube4, _) => Ok(0.0),
        (kind, _) => Err(Error::UnsupportedKind { op: "closure", kind }),
    }
}

/// Sign of the product of the field over the vertices of a cell.
pub fn component_sign(field: &Field<f64>, cell: &OrientedCell) -> Result<f64> {
    let mut s = 1.0;
    for p in cell.vertices() {
        let v = field.get(&p)?;
        if v == 0.0 {
            return Err(Error::ZeroValue(p.to_string()));
        }
        s *= v.signum();
    }
    Ok(s)
}

/// Value of the exterior derivative on the solution component containing
/// `field`. Real solutions split by the sign of the product of the ten ambo
/// values; the nominal constant is scaled by that sign, and a 4-cube takes
/// the difference of its black and white lifts.
pub fn closure_constant(field: &Field<f64>, cell4: &OrientedCell, branch: Branch) -> Result<f64> {
    match cell4.kind() {
        CellKind::Cube4 => {
            let (black, white) = cube_ambo_pair(cell4)?;
            let lifted = lifted_cube_field(field, cell4)?;
            Ok(closure_constant(&lifted, &black, branch)? - closure_constant(&lifted, &white, branch)?)
        }
        _ => Ok(nominal_closure_constant(cell4, branch)? * component_sign(field, cell4)?),
    }
}

/// Compares the exterior derivative with the closure constant of the branch
/// the field is classified in.
pub fn check_closure(field: &Field<f64>, cell4: &OrientedCell, tol: &Tolerances, tolerance: f64, seed: u64) -> Result<CheckRecord> {
    let report = classify_branch(field, cell4, tol)?;
    let branch = match report.branch {
        BranchClass::Dkp => Branch::Dkp,
        BranchClass::DkpMinus => Branch::DkpMinus,
        BranchClass::Neither => return Err(Error::ClosureNotClaimed),
    };
    let expected = closure_constant(field, cell4, branch)?;
    let observed = exterior_derivative(field, cell4)?;
    Ok(CheckRecord::new("closure", format!("{cell4} {}", branch.name()), observed, expected, tolerance, seed))
}

/// Central difference of `f` in the value at `p`.
pub fn central_difference(field: &Field<f64>, p: &Point, h: f64, f: impl Fn(&Field<f64>) -> Result<f64>) -> Result<f64> {
    let x0 = field.get(p)?;
    let mut fp = field.clone();
    fp.insert(p.clone(), x0 + h)?;
    let mut fm = field.clone();
    fm.insert(p.clone(), x0 - h)?;
    Ok((f(&fp)? - f(&fm)?) / (2.0 * h))
}

/// Finite-difference derivative of the action of the flower of `manifold` at
/// `vertex`, against the sum of analytic corner gradients over the flower's
/// decomposition. The field is given on the extended lattice the
/// decomposition lives in (two extra coordinates for Q(A_N), one for Z^N).
pub fn check_euler_lagrange_sum(
    manifold: &Chain,
    vertex: &Point,
    field: &Field<f64>,
    tol: &Tolerances,
    seed: u64,
) -> Result<CheckRecord> {
    let fl = flower(manifold, vertex)?;
    let decomposition = decompose_flower(&fl, vertex)?;
    let center = decomposition.center(vertex);
    let embedded = fl.padded(decomposition.extra_dims);
    let lhs = central_difference(field, &center, tol.fd_step, |f| action(f, &embedded))?;
    let mut rhs = 0.0;
    for corner in &decomposition.corners {
        rhs += corner.multiplicity as f64 * corner_gradient(field, &corner.cell, &center)?;
    }
    Ok(CheckRecord::new(
        "euler_lagrange_sum",
        format!("center {vertex}, {} petals, {} corners", fl.len(), decomposition.corners.len()),
        lhs,
        rhs,
        tol.euler_lagrange,
        seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dkp::golden_field;

    fn black() -> OrientedCell {
        OrientedCell::new(CellKind::BlackAmbo4, Point::new(vec![-2, 0, 0, 0, 0]), &[0, 1, 2, 3, 4]).unwrap()
    }

    #[test]
    fn golden_classification() {
        let tol = Tolerances::default();
        let g = golden_field::<f64>(&black(), Branch::Dkp).unwrap();
        let r = classify_branch(&g, &black(), &tol).unwrap();
        assert_eq!(r.branch, BranchClass::Dkp);
        assert!(r.residuals_agree);
        let r = classify_branch(&g.inverted(), &black(), &tol).unwrap();
        assert_eq!(r.branch, BranchClass::DkpMinus);
        assert!(r.residuals_agree);
    }

    #[test]
    fn golden_closure_record() {
        let tol = Tolerances::default();
        let g = golden_field::<f64>(&black(), Branch::Dkp).unwrap();
        let rec = check_closure(&g, &black(), &tol, 1e-9, 0).unwrap();
        assert!(rec.pass, "{rec:?}");
        assert!((rec.expected + PI * PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn closure_follows_component_sign() {
        let tol = Tolerances::default();
        let g = golden_field::<f64>(&black(), Branch::Dkp).unwrap();
        let flipped = g.scaled(-1.0).unwrap();
        assert_eq!(component_sign(&flipped, &black()).unwrap(), 1.0);
        let rec = check_closure(&flipped, &black(), &tol, 1e-9, 0).unwrap();
        assert!(rec.pass, "{rec:?}");
        let mut seen = [false; 2];
        for t in 0..40 {
            let mut rng = sampling::trial_rng(0, 0, t);
            let f = sampling::sample_solution(&black(), Branch::Dkp, 1e-6, &mut rng).unwrap();
            let sign = component_sign(&f, &black()).unwrap();
            seen[(sign > 0.0) as usize] = true;
            let s = exterior_derivative(&f, &black()).unwrap();
            assert!((s + sign * PI * PI / 4.0).abs() < 1e-9, "{s} {sign}");
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn closure_not_claimed_for_ones() {
        let tol = Tolerances::default();
        let mut f = Field::new();
        for (n, v) in black().vertices().into_iter().enumerate() {
            f.insert(v, 1.0 + 0.37 * n as f64).unwrap();
        }
        assert!(matches!(check_closure(&f, &black(), &tol, 1e-9, 0), Err(Error::ClosureNotClaimed)));
    }

    #[test]
    fn record_pass_rule() {
        assert!(CheckRecord::new("x", "", 1.0, 1.0, 0.0, 0).pass);
        assert!(!CheckRecord::new("x", "", f64::NAN, 1.0, 1.0, 0).pass);
    }
}
