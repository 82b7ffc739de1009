//! Real dilogarithm `Li₂`, its real-part extension `λ`, and the odd
//! combination `Λ(z) = λ(z) − λ(1/z)` used by the 3-form.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `B_n / (n+1)!` for n = 0, 1, 2, 4, ..., 30 (odd n > 1 vanish).
const BERNOULLI_OVER_FACTORIAL: [f64; 17] = [
    1.0,
    -0.25,
    0.027777777777777777778,
    -0.00027777777777777777778,
    4.7241118669690098262e-6,
    -9.1857730746619635509e-8,
    1.8978869988970999072e-9,
    -4.0647616451442255268e-11,
    8.9216910204564525552e-13,
    -1.9939295860721075687e-14,
    4.5189800296199181917e-16,
    -1.0356517612181247014e-17,
    2.3952186210261867457e-19,
    -5.5817858743250093363e-21,
    1.3091507554183212858e-22,
    -3.0874198024267402932e-24,
    7.3159756527022034204e-26,
];

fn pi2_over<T: Real>(d: f64) -> T {
    T::PI() * T::PI() / T::lit(d)
}

fn finite<T: Real>(z: T, what: &str) -> Result<T> {
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(format!("{what} argument {z}")))
    }
}

/// `Li₂(u)` expressed through `u = −log(1−z)`, valid for z in [−1, 1/2].
fn dilog_series<T: Real>(z: T) -> T {
    let u = -(-z).ln_1p();
    let u2 = u * u;
    let mut acc = T::zero();
    for &c in BERNOULLI_OVER_FACTORIAL[2..].iter().rev() {
        acc = acc * u2 + T::lit(c);
    }
    // acc = Σ c_{2k} u^{2k-2}
    u * (T::one() + u * (T::lit(BERNOULLI_OVER_FACTORIAL[1]) + u * acc))
}

/// Real dilogarithm `Li₂(z) = −∫₀^z log(1−x)/x dx` for `z ≤ 1`.
pub fn dilog<T: Real>(z: T) -> Result<T> {
    let z = finite(z, "dilog")?;
    let one = T::one();
    let half = T::lit(0.5);
    if z > one {
        return Err(Error::Domain(format!("dilog({z}) is complex for z > 1")));
    }
    if z == one {
        return Ok(pi2_over(6.0));
    }
    if z < -one {
        let l = (-z).ln();
        return Ok(-pi2_over::<T>(6.0) - half * l * l - dilog_series(one / z));
    }
    if z > half {
        return Ok(pi2_over::<T>(6.0) - z.ln() * (one - z).ln() - dilog_series(one - z));
    }
    Ok(dilog_series(z))
}

/// `λ(z) = −∫₀^z log|1−x|/x dx`, defined for every finite real `z`.
pub fn lambda_fn<T: Real>(z: T) -> Result<T> {
    let z = finite(z, "lambda")?;
    if z <= T::one() {
        return dilog(z);
    }
    let l = z.ln();
    Ok(-dilog(z.recip())? - T::lit(0.5) * l * l + pi2_over(3.0))
}

/// `Λ(z) = λ(z) − λ(1/z)`; odd under `z ↦ 1/z`.
pub fn big_lambda<T: Real>(z: T) -> Result<T> {
    let z = finite(z, "Lambda")?;
    if z == T::zero() {
        return Err(Error::Domain("Lambda(0): 1/z has a pole".into()));
    }
    let w = finite(z.recip(), "Lambda")?;
    Ok(lambda_fn(z)? - lambda_fn(w)?)
}

/// The golden constant `a = (1 − √5)/2`, the negative root of `a² − a − 1`.
pub fn golden<T: Real>() -> T {
    (T::one() - T::lit(5.0).sqrt()) / T::lit(2.0)
}

/// Closed forms of `Li₂` at the points built from the golden constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecialValue {
    pub label: &'static str,
    pub argument: f64,
    pub closed_form: f64,
}

pub fn golden_special_values() -> [SpecialValue; 4] {
    let a: f64 = golden();
    let l2 = (-a).ln().powi(2);
    let p2 = std::f64::consts::PI.powi(2);
    [
        SpecialValue { label: "Li2(a^2)", argument: a * a, closed_form: p2 / 15.0 - l2 },
        SpecialValue { label: "Li2(-a)", argument: -a, closed_form: p2 / 10.0 - l2 },
        SpecialValue { label: "Li2(a)", argument: a, closed_form: -p2 / 15.0 + 0.5 * l2 },
        SpecialValue { label: "Li2(1/a)", argument: 1.0 / a, closed_form: -p2 / 10.0 - l2 },
    ]
}
