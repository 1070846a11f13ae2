//! The numeric constants of the obstruction argument.

use std::f64::consts::PI;

use serde::Serialize;

use crate::covering::CoveringSpec;
use crate::error::EngineError;
use crate::matrix::universe_summary;

/// `log(2/π)`, the collar threshold.
pub const LN_2_OVER_PI: f64 = -0.451_582_705_289_454_9;

/// `-log log(2√2 + 3)`.
pub fn a_base() -> f64 {
    -(2.0 * 2f64.sqrt() + 3.0).ln().ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantParams {
    pub delta0: f64,
    pub eps0: f64,
    pub eta: f64,
    /// Upper estimate of `d_T(x₀, x₁)`.
    pub d_est: f64,
    pub j: f64,
    pub beta: f64,
    pub m: usize,
    pub big_m: usize,
    pub p: usize,
    pub degree: u32,
    /// Stand-in for the preimage marked-point count.
    pub c_count: f64,
    /// Coefficient of `J` in the exponent of `C(J)`; `p - 3` unless overridden.
    pub p_reading: f64,
}

impl ConstantParams {
    /// Defaults for `spec`: `δ₀ = ε₀ = η = 0.1`, `D = 0`, `β, m, M` from the curve universe,
    /// `C = p·d^m`.
    pub fn from_spec(spec: &CoveringSpec, j: f64) -> Result<Self, EngineError> {
        let summary = universe_summary(spec)?;
        let p = spec.p();
        let m = summary.m.max(1);
        Ok(Self {
            delta0: 0.1,
            eps0: 0.1,
            eta: 0.1,
            d_est: 0.0,
            j,
            beta: summary.beta.value,
            m,
            big_m: summary.max_depth,
            p,
            degree: spec.degree,
            c_count: p as f64 * (spec.degree as f64).powi(m as i32),
            p_reading: p.saturating_sub(3) as f64,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PaperConstants {
    pub params: ConstantParams,
    pub a: f64,
    pub c_j: f64,
    pub e_j: f64,
    pub kappa: f64,
    pub j_a: f64,
    pub j_0: f64,
    /// Smallest admissible `J` for extraction.
    pub j_min: f64,
}

impl PaperConstants {
    /// `C(J)` at another `J`, keeping everything else.
    pub fn c_at(&self, j: f64) -> f64 {
        c_of(&self.params, self.a, j)
    }

    /// `E(J) = C(J) + 2mD`.
    pub fn e_at(&self, j: f64) -> f64 {
        self.c_at(j) + 2.0 * self.params.m as f64 * self.params.d_est
    }
}

fn c_of(p: &ConstantParams, a: f64, j: f64) -> f64 {
    let q = p.p.saturating_sub(3) as f64;
    let floor = (-(a + p.p_reading * j)).exp().min(p.eps0);
    (2.0 * (1.0 / PI + (p.c_count + 1.0) / floor)).max(a + q * j)
}

pub fn compute_constants(params: &ConstantParams) -> Result<PaperConstants, EngineError> {
    let p = params;
    for (name, v) in [("delta0", p.delta0), ("eps0", p.eps0), ("eta", p.eta)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(EngineError::Argument(format!("{name} must be positive, got {v}")));
        }
    }
    if !(p.beta > 0.0 && p.beta <= 1.0) {
        return Err(EngineError::Argument(format!("beta must lie in (0, 1], got {}", p.beta)));
    }
    if !(p.d_est >= 0.0 && p.d_est.is_finite()) {
        return Err(EngineError::Argument(format!("D must be non-negative, got {}", p.d_est)));
    }
    if p.degree < 2 {
        return Err(EngineError::Argument(format!("degree must be at least 2, got {}", p.degree)));
    }
    let a = a_base().max(-p.delta0.ln());
    let q = p.p.saturating_sub(3) as f64;
    let step = (p.degree as f64).ln() + 2.0 * p.d_est;
    let c_j = c_of(p, a, p.j);
    let e_j = c_j + 2.0 * p.m as f64 * p.d_est;
    let kappa = p.beta.ln() - 1.0 - 2.0 * PI.ln() - 2.0 * q * step;
    let j_a = ((3.0 / p.beta).ln() + PI.ln()).max(a) + kappa + p.big_m as f64 * step + 1.0;
    let j_0 = j_a + a.abs();
    let j_min = (p.m as f64 * (step + 1.0)).max(j_0);
    let out = PaperConstants {
        params: p.clone(),
        a,
        c_j,
        e_j,
        kappa,
        j_a,
        j_0,
        j_min,
    };
    for (name, v) in [("C(J)", c_j), ("E(J)", e_j), ("J_A", j_a)] {
        if !v.is_finite() {
            return Err(EngineError::Argument(format!("{name} is not finite")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::canned;

    fn params() -> ConstantParams {
        ConstantParams {
            delta0: 1.0,
            eps0: 0.1,
            eta: 0.1,
            d_est: 0.0,
            j: 2.0,
            beta: 1.0,
            m: 1,
            big_m: 1,
            p: 4,
            degree: 2,
            c_count: 8.0,
            p_reading: 1.0,
        }
    }

    #[test]
    fn a_is_zero_for_unit_delta() {
        let c = compute_constants(&params()).unwrap();
        assert_eq!(c.a, 0.0);
        assert!((a_base() + 0.566_873_5).abs() < 1e-6);
        assert!((LN_2_OVER_PI - (2.0 / PI).ln()).abs() < 1e-15);
    }

    #[test]
    fn kappa_and_ja() {
        let c = compute_constants(&params()).unwrap();
        let kappa = -1.0 - 2.0 * PI.ln() - 2.0 * 2f64.ln();
        assert!((c.kappa - kappa).abs() < 1e-12);
        let ja = 3f64.ln() + PI.ln() + kappa + 2f64.ln() + 1.0;
        assert!((c.j_a - ja).abs() < 1e-12);
        assert_eq!(c.j_0, c.j_a);
    }

    #[test]
    fn bad_inputs() {
        let mut p = params();
        p.delta0 = 0.0;
        assert!(compute_constants(&p).is_err());
        let mut p = params();
        p.beta = 1.5;
        assert!(compute_constants(&p).is_err());
    }

    #[test]
    fn levy_defaults() {
        let p = ConstantParams::from_spec(&canned("levy_cycle").unwrap(), 2.0).unwrap();
        let c = compute_constants(&p).unwrap();
        assert!((c.a - 10f64.ln()).abs() < 1e-12);
        assert!(c.j_min < 2.0);
        assert!(c.e_at(8.0) > c.e_at(2.0));
    }
}
