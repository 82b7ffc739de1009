use serde::{Deserialize, Serialize};

use crate::cell_complex::{LatticeKind, DEFAULT_MAX_RANK};
use crate::error::{Error, Result};

/// Every numeric threshold of the verifier. Overridable by name, e.g.
/// `--tol.closure=1e-9` on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub special_values: f64,
    pub golden_three_form: f64,
    pub golden_closure: f64,
    pub ivp_residual: f64,
    pub corner: f64,
    pub closure: f64,
    pub classify: f64,
    pub neither_gap: f64,
    pub equivalence: f64,
    pub gradient: f64,
    pub fd_step: f64,
    pub euler_lagrange: f64,
    pub sample_floor: f64,
    pub fd_conditioning: f64,
}

/// Name, default and meaning of every tolerance.
pub const TOLERANCE_TABLE: [(&str, f64, &str); 14] = [
    ("special_values", 1e-11, "dilogarithm closed forms at the golden points"),
    ("golden_three_form", 1e-10, "3-form of the golden solution against -pi^2/20"),
    ("golden_closure", 1e-9, "exterior derivative of the golden solution against -+pi^2/4"),
    ("ivp_residual", 1e-10, "relative residual of completed initial-value data"),
    ("corner", 1e-8, "|E -+ 1| on completed solutions"),
    ("closure", 1e-8, "exterior derivative on completed solutions"),
    ("classify", 1e-7, "|E -+ 1| accepted as a branch"),
    ("neither_gap", 1e-3, "both deviations above this classify as neither"),
    ("equivalence", 1e-9, "relative residual counted as solving a system"),
    ("gradient", 1e-6, "corner residual against finite differences of the action"),
    ("fd_step", 1e-6, "central-difference step"),
    ("euler_lagrange", 1e-6, "flower derivative against the sum of corner residuals"),
    ("sample_floor", 1e-6, "minimum normalized denominator of sampled data"),
    ("fd_conditioning", 0.05, "minimum normalized bracket near a differentiated vertex"),
];

impl Default for Tolerances {
    fn default() -> Self {
        let get = |name: &str| {
            TOLERANCE_TABLE.iter().find(|(n, _, _)| *n == name).map(|t| t.1).expect("listed tolerance")
        };
        Tolerances {
            special_values: get("special_values"),
            golden_three_form: get("golden_three_form"),
            golden_closure: get("golden_closure"),
            ivp_residual: get("ivp_residual"),
            corner: get("corner"),
            closure: get("closure"),
            classify: get("classify"),
            neither_gap: get("neither_gap"),
            equivalence: get("equivalence"),
            gradient: get("gradient"),
            fd_step: get("fd_step"),
            euler_lagrange: get("euler_lagrange"),
            sample_floor: get("sample_floor"),
            fd_conditioning: get("fd_conditioning"),
        }
    }
}

impl Tolerances {
    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "special_values" => &mut self.special_values,
            "golden_three_form" => &mut self.golden_three_form,
            "golden_closure" => &mut self.golden_closure,
            "ivp_residual" => &mut self.ivp_residual,
            "corner" => &mut self.corner,
            "closure" => &mut self.closure,
            "classify" => &mut self.classify,
            "neither_gap" => &mut self.neither_gap,
            "equivalence" => &mut self.equivalence,
            "gradient" => &mut self.gradient,
            "fd_step" => &mut self.fd_step,
            "euler_lagrange" => &mut self.euler_lagrange,
            "sample_floor" => &mut self.sample_floor,
            "fd_conditioning" => &mut self.fd_conditioning,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::Config(format!("tolerance {name} must be finite and >= 0, got {value}")));
        }
        if name == "fd_step" && value == 0.0 {
            return Err(Error::Config("fd_step must be positive".into()));
        }
        let slot = self.slot(name).ok_or_else(|| Error::Config(format!("unknown tolerance `{name}`")))?;
        *slot = value;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub lattice: LatticeKind,
    pub dim: usize,
    pub trials: usize,
    /// Trials for the costlier flower checks.
    pub flower_trials: usize,
    pub seed: u64,
    pub max_dim: usize,
    pub tolerances: Tolerances,
}

pub const DEFAULT_DIM: usize = 4;
pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_FLOWER_TRIALS: usize = 100;
pub const DEFAULT_SEED: u64 = 1;

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            lattice: LatticeKind::RootA,
            dim: DEFAULT_DIM,
            trials: DEFAULT_TRIALS,
            flower_trials: DEFAULT_FLOWER_TRIALS,
            seed: DEFAULT_SEED,
            max_dim: DEFAULT_MAX_RANK,
            tolerances: Tolerances::default(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 3 {
            return Err(Error::Config(format!("dimension must be at least 3, got {}", self.dim)));
        }
        if self.dim > self.max_dim {
            return Err(Error::Config(format!("dimension {} exceeds the maximum {}", self.dim, self.max_dim)));
        }
        if self.trials == 0 || self.flower_trials == 0 {
            return Err(Error::Config("trial counts must be at least 1".into()));
        }
        Ok(())
    }

    /// Whether the lattice has 4-cells (five root directions or four cube
    /// directions); below that only the three-dimensional checks run.
    pub fn has_four_cells(&self) -> bool {
        self.dim >= 4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_by_name() {
        let mut t = Tolerances::default();
        t.set("closure", 1e-3).unwrap();
        assert_eq!(t.closure, 1e-3);
        assert!(t.set("nope", 1.0).is_err());
        assert!(t.set("closure", -1.0).is_err());
        assert!(t.set("fd_step", 0.0).is_err());
    }

    #[test]
    fn validation() {
        let mut c = SuiteConfig::default();
        c.validate().unwrap();
        c.dim = 2;
        assert!(c.validate().is_err());
        c.dim = 11;
        assert!(c.validate().is_err());
        c.dim = 4;
        c.trials = 0;
        assert!(c.validate().is_err());
    }
}
