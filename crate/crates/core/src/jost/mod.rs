//! Jost solutions at the origin, the Wronskian w(k) and ψ, Ψ in the closed
//! upper half-plane.

mod profile;
mod series;
mod transfer;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::potential::{cnum, cnum_opt, PotentialSpec};
use crate::util::I;
use profile::Profile;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JostError {
    #[error("momentum k = {k} is outside the closed upper half-plane")]
    InvalidMomentum { k: C64 },
    #[error("series at k = {k} not certified after {terms} terms (tail {reached:.3e})")]
    ToleranceNotReached { k: C64, reached: f64, terms: usize },
    #[error("bracket and decomposition of w disagree at k = {k}: {discrepancy:.3e} > {budget:.3e}")]
    InconsistentEvaluations { k: C64, discrepancy: f64, budget: f64 },
    #[error("a priori bound {which} violated at k = {k}: {value:.6e} > {bound:.6e}")]
    BoundViolated {
        k: C64,
        which: &'static str,
        value: f64,
        bound: f64,
    },
    #[error("non-finite value at k = {k}")]
    NonFinite { k: C64 },
    #[error("transfer-matrix path needs a piecewise-constant potential")]
    PathUnavailable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalPath {
    /// Transfer matrix for piecewise-constant potentials, series otherwise.
    Auto,
    Series,
    Transfer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostConfig {
    /// Absolute and relative tolerance on w.
    pub tol: f64,
    pub path: EvalPath,
    pub max_terms: usize,
}

impl Default for JostConfig {
    fn default() -> Self {
        JostConfig {
            tol: 1e-10,
            path: EvalPath::Auto,
            max_terms: 600,
        }
    }
}

/// Jost data on one side: f(0), f'(0) for the side's own orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideValue {
    pub f: C64,
    pub fp: C64,
    pub err_f: f64,
    pub err_fp: f64,
    pub(crate) y: C64,
    pub(crate) yp: C64,
    /// ∫ q y du over the side.
    pub(crate) int_qy: C64,
    pub terms: usize,
    pub sigma: f64,
}

impl SideValue {
    fn free(k: C64) -> Self {
        SideValue {
            f: C64::new(1.0, 0.0),
            fp: I * k,
            err_f: 0.0,
            err_fp: 0.0,
            y: C64::new(1.0, 0.0),
            yp: C64::new(0.0, 0.0),
            int_qy: C64::new(0.0, 0.0),
            terms: 0,
            sigma: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JostEvaluation {
    #[serde(with = "cnum")]
    pub k: C64,
    #[serde(with = "cnum")]
    pub f_plus: C64,
    #[serde(with = "cnum")]
    pub f_plus_prime: C64,
    #[serde(with = "cnum")]
    pub f_minus: C64,
    #[serde(with = "cnum")]
    pub f_minus_prime: C64,
    #[serde(with = "cnum")]
    pub w: C64,
    #[serde(with = "cnum_opt")]
    pub psi: Option<C64>,
    #[serde(rename = "Psi", with = "cnum")]
    pub big_psi: C64,
    pub err: f64,
}

/// Evaluator bound to one potential and one origin.
#[derive(Debug, Clone)]
pub struct Jost {
    right: Profile,
    left: Profile,
    /// ‖q‖ and ∫|x − x0||q|
    l1: f64,
    w1: f64,
    pub config: JostConfig,
}

impl Jost {
    pub fn new(q: &PotentialSpec, config: JostConfig) -> Self {
        Self::with_origin(q, 0.0, config)
    }

    /// Jost data and Wronskian evaluated at x0 instead of 0. The Wronskian
    /// does not depend on x0.
    pub fn with_origin(q: &PotentialSpec, x0: f64, config: JostConfig) -> Self {
        let right = Profile::build(q, x0, true);
        let left = Profile::build(q, x0, false);
        Jost {
            l1: right.l1 + left.l1,
            w1: right.w1 + left.w1,
            right,
            left,
            config,
        }
    }

    fn side(&self, prof: &Profile, k: C64) -> Result<SideValue, JostError> {
        if !(k.re.is_finite() && k.im.is_finite()) || k.im < 0.0 {
            return Err(JostError::InvalidMomentum { k });
        }
        let use_transfer = match self.config.path {
            EvalPath::Auto => prof.piecewise_constant(),
            EvalPath::Transfer => true,
            EvalPath::Series => false,
        };
        let v = if use_transfer {
            transfer::evaluate(prof, k)?
        } else {
            series::evaluate(prof, k, self.config.max_terms)?
        };
        // |y(0) − 1| ≤ ς e^ς
        let s = if k.norm() > 0.0 {
            prof.w1.min(prof.l1 / k.norm())
        } else {
            prof.w1
        };
        let bound = s * s.exp() + v.err_f;
        let dev = (v.y - 1.0).norm();
        if dev > bound * (1.0 + 1e-12) + 1e-14 {
            return Err(JostError::BoundViolated {
                k,
                which: "|y(0) - 1| <= s e^s",
                value: dev,
                bound,
            });
        }
        Ok(v)
    }

    /// (f₊(0,k), f₊′(0,k)) with errors.
    pub fn plus(&self, k: C64) -> Result<SideValue, JostError> {
        self.side(&self.right, k)
    }

    /// (f₋(0,k), f₋′(0,k)) with errors.
    pub fn minus(&self, k: C64) -> Result<SideValue, JostError> {
        let mut v = self.side(&self.left, k)?;
        v.fp = -v.fp;
        Ok(v)
    }

    pub fn wronskian(&self, k: C64) -> Result<JostEvaluation, JostError> {
        let p = self.plus(k)?;
        let m = self.minus(k)?;
        let w = m.f * p.fp - m.fp * p.f;
        // w = 2ik − w₁ − w₂
        let w1 = p.int_qy + m.int_qy;
        let fs_p = p.f - 1.0;
        let kfc_p = I * k - p.fp;
        let fs_m = 1.0 - m.f;
        let kfc_m = m.fp + I * k;
        let w2 = fs_p * kfc_m - kfc_p * fs_m;
        let w_dec = 2.0 * I * k - w1 - w2;
        let err_bracket = m.f.norm() * p.err_fp + p.fp.norm() * m.err_f + m.fp.norm() * p.err_f + p.f.norm() * m.err_fp;
        let disc = (w - w_dec).norm();
        let s = if k.norm() > 0.0 {
            self.w1.min(self.l1 / k.norm())
        } else {
            self.w1
        };
        let scale = (2.0 * k.norm() + self.l1) * s.exp() + 1.0;
        let budget = 100.0 * err_bracket + 1e-12 * scale;
        if disc > budget {
            return Err(JostError::InconsistentEvaluations {
                k,
                discrepancy: disc,
                budget,
            });
        }
        let err = err_bracket + disc;
        let wb = (2.0 * k.norm() + self.l1) * s.exp() + err;
        if w.norm() > wb * (1.0 + 1e-12) {
            return Err(JostError::BoundViolated {
                k,
                which: "|w| <= (2|k| + |q|) e^s",
                value: w.norm(),
                bound: wb,
            });
        }
        if err > self.config.tol * (1.0 + w.norm()) {
            return Err(JostError::ToleranceNotReached {
                k,
                reached: err,
                terms: p.terms.max(m.terms),
            });
        }
        let zero = C64::new(0.0, 0.0);
        Ok(JostEvaluation {
            k,
            f_plus: p.f,
            f_plus_prime: p.fp,
            f_minus: m.f,
            f_minus_prime: m.fp,
            w,
            psi: if k == zero { None } else { Some(w / (2.0 * I * k)) },
            big_psi: w / (2.0 * I * (k + I)),
            err,
        })
    }

    /// ψ(t), ψ(−t) for real t ≠ 0.
    pub fn psi_pair(&self, t: f64) -> Result<(C64, C64), JostError> {
        let a = self.wronskian(C64::new(t, 0.0))?;
        let b = self.wronskian(C64::new(-t, 0.0))?;
        match (a.psi, b.psi) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(JostError::InvalidMomentum { k: C64::new(0.0, 0.0) }),
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.l1
    }

    /// ∫|x − x0||q| for the evaluator's origin.
    pub fn weighted_norm(&self) -> f64 {
        self.w1
    }
}

pub fn jost_plus(q: &PotentialSpec, k: C64) -> Result<SideValue, JostError> {
    Jost::new(q, JostConfig::default()).plus(k)
}

pub fn jost_minus(q: &PotentialSpec, k: C64) -> Result<SideValue, JostError> {
    Jost::new(q, JostConfig::default()).minus(k)
}

pub fn wronskian(q: &PotentialSpec, k: C64) -> Result<JostEvaluation, JostError> {
    Jost::new(q, JostConfig::default()).wronskian(k)
}

pub fn psi_pair(q: &PotentialSpec, t: f64) -> Result<(C64, C64), JostError> {
    Jost::new(q, JostConfig::default()).psi_pair(t)
}
