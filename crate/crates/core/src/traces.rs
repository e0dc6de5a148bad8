//! Trace-formula integrals J₀, J₁, J₂, the inferred singular-measure
//! moments, the outer-factor check and zero-counting certificates.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jost::{Jost, JostError};
use crate::locator::{
    blaschke_coeffs, count_zeros, locate_eigenvalues, BlaschkeCoeffs, Contour, EigenvalueSet, LocatorConfig,
    LocatorError,
};
use crate::potential::{cnum, PotentialError, PotentialSpec};
use crate::quad;
use crate::util::I;

/// log(3e/2) + 3e²/4 + (9/16)e⁴
pub fn c0_constant() -> f64 {
    let e = std::f64::consts::E;
    (1.5 * e).ln() + 0.75 * e * e + 9.0 / 16.0 * e.powi(4)
}

/// 1 + 8/(√17 log 2)
pub fn c1_constant() -> f64 {
    1.0 + 8.0 / (17f64.sqrt() * LN_2)
}

/// 2√17/(π log 2)
pub fn c2_constant() -> f64 {
    2.0 * 17f64.sqrt() / (PI * LN_2)
}

/// Integrand cap: |log|ψ|| above this means a real zero of w at a node.
pub const LOG_CAP: f64 = 1e3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("log|psi| = {value:.3e} at t = {t}: real zero of w on the integration path, principal value unreliable")]
    SingularityOnAxis { t: f64, value: f64 },
    #[error("J{which} integrand decays slower than its tail model at t = {t} (remainder {remainder:.3e})")]
    SlowDecay { which: usize, t: f64, remainder: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("radius {rho} below the admissible minimum {min}")]
    InvalidRadius { rho: f64, min: f64 },
    #[error(transparent)]
    Locator(#[from] LocatorError),
    #[error(transparent)]
    Jost(#[from] JostError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    pub locator: LocatorConfig,
    /// Absolute tolerance per integral.
    pub tol: f64,
    /// Interval budget per quadrature segment.
    pub max_intervals: usize,
    /// Number of doublings of the truncation point beyond T₀.
    pub doublings: usize,
    pub parallel: bool,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            locator: LocatorConfig::default(),
            tol: 1e-8,
            max_intervals: 600,
            doublings: 6,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub value: f64,
    pub err: f64,
}

/// Result of one truncated-and-extrapolated integral family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JIntegrals {
    #[serde(rename = "J")]
    pub j: Vec<Integral>,
    /// T₀ = max(4‖q‖, 10)
    pub t0: f64,
    /// Last truncation point used.
    pub l_final: f64,
    /// Closed-form bound on (1/π)∫_L^∞ |log|ψ(t)ψ(−t)|| dt at L = l_final.
    pub j0_tail_bound: f64,
    /// Max |integrand − tail model| on [L/2, L], per component.
    pub remainder: Vec<f64>,
    pub extrapolated: Vec<bool>,
    pub converged: bool,
}

fn truncation(l1: f64) -> f64 {
    (4.0 * l1).max(10.0)
}

/// (1/π)‖q‖[3(e^{2u} − 1) + 9(e^{4u}(u²/4 − u/8 + 1/32) − 1/32)], u = ‖q‖/L.
pub fn j0_tail_bound(l1: f64, l: f64) -> f64 {
    let u = l1 / l;
    l1 / PI * (3.0 * (2.0 * u).exp_m1() + 9.0 * ((4.0 * u).exp() * (u * u / 4.0 - u / 8.0 + 1.0 / 32.0) - 1.0 / 32.0))
}

pub(crate) struct Family<'a, E> {
    pub g: &'a (dyn Fn(f64) -> Result<Vec<f64>, E> + Sync),
    /// ∫_L^∞ of the asymptotic model of each component.
    pub tail: &'a dyn Fn(f64) -> Vec<f64>,
    /// Pointwise asymptotic model of each component.
    pub model: &'a dyn Fn(f64) -> Vec<f64>,
}

pub(crate) struct Extrapolated {
    pub value: Vec<f64>,
    pub err: Vec<f64>,
    pub l_final: f64,
    pub remainder: Vec<f64>,
    pub extrapolated: Vec<bool>,
    pub converged: bool,
    /// Estimates at T₀, 2T₀, … per component.
    pub sequence: Vec<Vec<f64>>,
}

/// ∫_0^∞ by doubling the truncation point from T₀ until the estimate
/// settles, with Aitken extrapolation over the last three estimates otherwise.
pub(crate) fn integrate_family<E: Send>(fam: &Family<E>, t0: f64, cfg: &TraceConfig) -> Result<Extrapolated, E> {
    let base = quad::integrate(fam.g, 0.0, t0, 0.5 * cfg.tol, cfg.max_intervals, cfg.parallel)?;
    let dim = base.value.len();
    let mut converged = base.converged;
    let mut s = base.value.clone();
    let mut qerr = base.err.clone();
    let add = |s: &[f64], t: &[f64]| s.iter().zip(t).map(|(a, b)| a + b).collect::<Vec<f64>>();
    let mut est = vec![add(&s, &(fam.tail)(t0))];
    let mut l = t0;
    let mut settled = false;
    for _ in 0..cfg.doublings {
        let seg = quad::integrate(fam.g, l, 2.0 * l, 0.25 * cfg.tol, cfg.max_intervals, cfg.parallel)?;
        converged &= seg.converged;
        for d in 0..dim {
            s[d] += seg.value[d];
            qerr[d] += seg.err[d];
        }
        l *= 2.0;
        est.push(add(&s, &(fam.tail)(l)));
        let n = est.len();
        if (0..dim).all(|d| (est[n - 1][d] - est[n - 2][d]).abs() <= 0.25 * cfg.tol) {
            settled = true;
            break;
        }
    }
    let n = est.len();
    let mut value = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    let mut extrapolated = vec![false; dim];
    for d in 0..dim {
        let e2 = est[n - 1][d];
        let d2 = if n >= 2 { e2 - est[n - 2][d] } else { 0.0 };
        value[d] = e2;
        err[d] = qerr[d] + d2.abs();
        if !settled && n >= 3 {
            let d1 = est[n - 2][d] - est[n - 3][d];
            if d1 != 0.0 {
                let r = d2 / d1;
                if r.abs() < 0.9 && r != 0.0 {
                    let corr = d2 * r / (1.0 - r);
                    value[d] = e2 + corr;
                    err[d] = qerr[d] + corr.abs() + 0.5 * d2.abs() * r.abs();
                    extrapolated[d] = true;
                }
            }
        }
    }
    // unmodelled remainder of the integrand near the last truncation point
    let mut remainder = vec![0.0; dim];
    for i in 0..8 {
        let t = l * (0.5 + 0.5 * (i as f64 + 0.5) / 8.0);
        let gv = (fam.g)(t)?;
        let mv = (fam.model)(t);
        for d in 0..dim {
            remainder[d] = f64::max(remainder[d], (gv[d] - mv[d]).abs());
        }
    }
    let sequence = (0..dim).map(|d| est.iter().map(|e| e[d]).collect()).collect();
    Ok(Extrapolated {
        value,
        err,
        l_final: l,
        remainder,
        extrapolated,
        converged,
        sequence,
    })
}

fn check_log(t: f64, h: f64) -> Result<f64, TraceError> {
    if h.is_finite() && h.abs() <= LOG_CAP {
        Ok(h)
    } else {
        Err(TraceError::SingularityOnAxis { t, value: h })
    }
}

fn h_pair(j: &Jost, t: f64) -> Result<(f64, f64), TraceError> {
    let (a, b) = j.psi_pair(t)?;
    Ok((check_log(t, a.norm().ln())?, check_log(-t, b.norm().ln())?))
}

/// Im Q₂ and Im Q₄ when available.
fn imag_moments(q: &PotentialSpec) -> (f64, f64) {
    let n = q.norms();
    let i2 = n.big_q2.map(|v| v.im).unwrap_or(0.0);
    let i4 = q.quartic_moment().map(|v| v.im).unwrap_or(0.0);
    (i2, i4)
}

/// J₀, J₁, J₂ (the components listed in `which`, others reported as 0).
pub fn j_integrals(q: &PotentialSpec, which: &[usize], cfg: &TraceConfig) -> Result<JIntegrals, TraceError> {
    q.validate()?;
    let n = q.norms();
    let t0 = truncation(n.l1_norm);
    if q.is_zero() {
        return Ok(JIntegrals {
            j: vec![Integral { value: 0.0, err: 0.0 }; 3],
            t0,
            l_final: t0,
            j0_tail_bound: 0.0,
            remainder: vec![0.0; 3],
            extrapolated: vec![false; 3],
            converged: true,
        });
    }
    let jost = Jost::new(q, cfg.locator.jost);
    let i0 = n.big_q0.im;
    let (i2, i4) = imag_moments(q);
    let sel: Vec<usize> = which.to_vec();
    let g = |t: f64| -> Result<Vec<f64>, TraceError> {
        let (ha, hb) = h_pair(&jost, t)?;
        Ok(sel
            .iter()
            .map(|&c| match c {
                0 => ha + hb,
                1 => t * (ha - hb) + 2.0 * i0,
                _ => t * t * (ha + hb),
            })
            .collect())
    };
    let tail = |l: f64| -> Vec<f64> {
        sel.iter()
            .map(|&c| {
                if c == 1 {
                    -2.0 * i2 / l - 2.0 / 3.0 * i4 / l.powi(3)
                } else {
                    0.0
                }
            })
            .collect()
    };
    let model = |t: f64| -> Vec<f64> {
        sel.iter()
            .map(|&c| {
                if c == 1 {
                    -2.0 * i2 / (t * t) - 2.0 * i4 / t.powi(4)
                } else {
                    0.0
                }
            })
            .collect()
    };
    let fam = Family {
        g: &g,
        tail: &tail,
        model: &model,
    };
    let r = integrate_family(&fam, t0, cfg)?;
    let mut j = vec![Integral { value: 0.0, err: 0.0 }; 3];
    let mut remainder = vec![0.0; 3];
    let mut extrapolated = vec![false; 3];
    for (i, &c) in sel.iter().enumerate() {
        j[c] = Integral {
            value: r.value[i] / PI,
            err: r.err[i] / PI,
        };
        remainder[c] = r.remainder[i];
        extrapolated[c] = r.extrapolated[i];
    }
    Ok(JIntegrals {
        j,
        t0,
        l_final: r.l_final,
        j0_tail_bound: j0_tail_bound(n.l1_norm, r.l_final),
        remainder,
        extrapolated,
        converged: r.converged,
    })
}

fn slow_decay(r: &JIntegrals, which: usize, tol: f64) -> Option<TraceError> {
    let rem = r.remainder[which];
    if rem * r.l_final > 10.0 * tol.max(r.j[which].err) {
        Some(TraceError::SlowDecay {
            which,
            t: r.l_final,
            remainder: rem,
        })
    } else {
        None
    }
}

pub fn j0(q: &PotentialSpec, cfg: &TraceConfig) -> Result<Integral, TraceError> {
    Ok(j_integrals(q, &[0], cfg)?.j[0])
}

pub fn j1(q: &PotentialSpec, cfg: &TraceConfig) -> Result<Integral, TraceError> {
    let r = j_integrals(q, &[1], cfg)?;
    match slow_decay(&r, 1, cfg.tol) {
        Some(e) => Err(e),
        None => Ok(r.j[1]),
    }
}

pub fn j2(q: &PotentialSpec, cfg: &TraceConfig) -> Result<Integral, TraceError> {
    let r = j_integrals(q, &[2], cfg)?;
    match slow_decay(&r, 2, cfg.tol) {
        Some(e) => Err(e),
        None => Ok(r.j[2]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    #[serde(rename = "B")]
    pub b: BlaschkeCoeffs,
    pub eigenvalues: EigenvalueSet,
    #[serde(rename = "Q0_re")]
    pub q0_re: f64,
    /// Absent when ∫q² diverges.
    #[serde(rename = "Q2_re")]
    pub q2_re: Option<f64>,
    #[serde(rename = "J")]
    pub j: Vec<Integral>,
    #[serde(rename = "K0_inferred")]
    pub k0_inferred: f64,
    #[serde(rename = "K1_inferred")]
    pub k1_inferred: f64,
    #[serde(rename = "K2_inferred")]
    pub k2_inferred: Option<f64>,
    pub estimate_lhs: f64,
    pub estimate_rhs: f64,
    /// Error budget on K₀ (quadrature plus polish).
    pub k_err: Vec<f64>,
    pub t0: f64,
    pub l_final: f64,
    pub j0_tail_bound: f64,
    pub checks: TraceChecks,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceChecks {
    pub k0_nonnegative: bool,
    pub k1_envelope: bool,
    pub k2_envelope: Option<bool>,
    pub estimate_holds: bool,
}

impl TraceChecks {
    pub fn all_hold(&self) -> bool {
        self.k0_nonnegative && self.k1_envelope && self.k2_envelope.unwrap_or(true) && self.estimate_holds
    }
}

/// Right-hand side (2/π)(1 + ‖q‖₁) + (2/π) r_c (C₀ + log r_c).
pub fn estimate_rhs(weighted_norm: f64, r_c: f64) -> f64 {
    let rlog = if r_c > 0.0 {
        r_c * (c0_constant() + r_c.ln())
    } else {
        0.0
    };
    2.0 / PI * (1.0 + weighted_norm) + 2.0 / PI * rlog
}

pub fn trace_report(q: &PotentialSpec, cfg: &TraceConfig) -> Result<TraceReport, TraceError> {
    q.validate()?;
    let n = q.norms();
    let set = locate_eigenvalues(q, &cfg.locator)?;
    let b = blaschke_coeffs(&set, 2, n.r_c);
    let mut warnings = Vec::new();
    let which: Vec<usize> = if n.big_q2.is_some() { vec![0, 1, 2] } else { vec![0, 1] };
    if n.big_q2.is_none() {
        warnings.push("Q2 diverges for this potential; J2 and K2 are not reported".to_string());
    }
    let r = j_integrals(q, &which, cfg)?;
    for &c in which.iter().skip(1) {
        if let Some(e) = slow_decay(&r, c, cfg.tol) {
            warnings.push(format!("{e}; the identity for J{c} needs a smoother potential"));
        }
    }
    if !r.converged {
        warnings.push("quadrature interval budget exhausted; reported errors are estimates".to_string());
    }
    let polish: f64 = set.eigenvalues.iter().map(|e| e.residual * e.multiplicity as f64).sum();
    let q0_re = n.big_q0.re;
    let q2_re = n.big_q2.map(|v| v.re);
    let k0 = r.j[0].value - b.b[0] - q0_re;
    let k1 = r.j[1].value - b.b[1] / 2.0;
    let k2 = q2_re.map(|q2| r.j[2].value - b.b[2] / 3.0 - q2);
    let k_err = vec![r.j[0].err + polish, r.j[1].err + polish, r.j[2].err + polish];
    let lhs = b.b[0] + k0 + q0_re;
    let rhs = estimate_rhs(n.weighted_norm, n.r_c);
    let rc = n.r_c;
    let checks = TraceChecks {
        k0_nonnegative: k0 >= -k_err[0],
        k1_envelope: k1.abs() <= rc * k0.max(0.0) + k_err[1] + rc * k_err[0],
        k2_envelope: k2.map(|k2| k2.abs() <= rc * rc * k0.max(0.0) + k_err[2] + rc * rc * k_err[0]),
        estimate_holds: lhs <= rhs,
    };
    Ok(TraceReport {
        b,
        eigenvalues: set,
        q0_re,
        q2_re,
        j: r.j.clone(),
        k0_inferred: k0,
        k1_inferred: k1,
        k2_inferred: k2,
        estimate_lhs: lhs,
        estimate_rhs: rhs,
        k_err,
        t0: r.t0,
        l_final: r.l_final,
        j0_tail_bound: r.j0_tail_bound,
        checks,
        warnings,
    })
}

/// M(k) = (1/π)∫ log|ψ(t)|/(k − t) dt for each k in the sample.
pub fn outer_integral(q: &PotentialSpec, ks: &[C64], cfg: &TraceConfig) -> Result<Vec<(C64, f64)>, TraceError> {
    let n = q.norms();
    if q.is_zero() {
        return Ok(ks.iter().map(|_| (C64::new(0.0, 0.0), 0.0)).collect());
    }
    let jost = Jost::new(q, cfg.locator.jost);
    let i0 = n.big_q0.im;
    let (i2, _) = imag_moments(q);
    let g = |t: f64| -> Result<Vec<f64>, TraceError> {
        let (ha, hb) = h_pair(&jost, t)?;
        let mut v = Vec::with_capacity(2 * ks.len());
        for &k in ks {
            let z = ha / (k - t) + hb / (k + t);
            v.push(z.re);
            v.push(z.im);
        }
        Ok(v)
    };
    let tail = |l: f64| -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * ks.len());
        for &k in ks {
            let lg = ((l + k) / (l - k)).ln();
            let z = i0 / k * lg + 2.0 * i2 / (k * k) * (lg / (2.0 * k) - 1.0 / l);
            v.push(z.re);
            v.push(z.im);
        }
        v
    };
    let model = |t: f64| -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * ks.len());
        for &k in ks {
            let ha = -i0 / t - i2 / t.powi(3);
            let z = ha / (k - t) - ha / (k + t);
            v.push(z.re);
            v.push(z.im);
        }
        v
    };
    let t0 = truncation(n.l1_norm).max(4.0 * ks.iter().map(|k| k.norm()).fold(0.0, f64::max));
    let fam = Family {
        g: &g,
        tail: &tail,
        model: &model,
    };
    let r = integrate_family(&fam, t0, cfg)?;
    Ok(ks
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let m = C64::new(r.value[2 * i], r.value[2 * i + 1]) / PI;
            (m, (r.err[2 * i] + r.err[2 * i + 1]) / PI)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterPoint {
    #[serde(with = "cnum")]
    pub k: C64,
    #[serde(with = "cnum")]
    pub psi: C64,
    #[serde(rename = "exp_iM", with = "cnum")]
    pub exp_im: C64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterFactorCheck {
    pub max_deviation: f64,
    pub points: Vec<OuterPoint>,
    #[serde(rename = "K0_inferred")]
    pub k0_inferred: f64,
}

/// max over the sample of |ψ(k) − e^{iM(k)}|/|ψ(k)| in the case without
/// eigenvalues and singular measure.
pub fn outer_factor_check(
    q: &PotentialSpec,
    sample: &[C64],
    cfg: &TraceConfig,
) -> Result<OuterFactorCheck, TraceError> {
    q.validate()?;
    if sample.iter().any(|k| k.im <= 0.0) {
        return Err(TraceError::PreconditionViolated(
            "sample points must lie in the open upper half-plane".into(),
        ));
    }
    let n = q.norms();
    let set = locate_eigenvalues(q, &cfg.locator)?;
    if set.total_count > 0 {
        return Err(TraceError::PreconditionViolated(format!(
            "{} eigenvalue(s) present",
            set.total_count
        )));
    }
    let j = j0(q, cfg)?;
    let k0 = j.value - n.big_q0.re;
    if k0.abs() > 1e-6f64.max(10.0 * j.err) {
        return Err(TraceError::PreconditionViolated(format!(
            "K0_inferred = {k0:.3e} is not negligible"
        )));
    }
    let m = outer_integral(q, sample, cfg)?;
    let jost = Jost::new(q, cfg.locator.jost);
    let mut points = Vec::new();
    let mut worst: f64 = 0.0;
    for (&k, &(mk, _)) in sample.iter().zip(&m) {
        let psi = jost.wronskian(k)?.psi.unwrap_or(C64::new(1.0, 0.0));
        let e = (I * mk).exp();
        let dev = (psi - e).norm() / psi.norm();
        worst = worst.max(dev);
        points.push(OuterPoint {
            k,
            psi,
            exp_im: e,
            deviation: dev,
        });
    }
    Ok(OuterFactorCheck {
        max_deviation: worst,
        points,
        k0_inferred: k0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCountCertificate {
    #[serde(with = "cnum")]
    pub center: C64,
    pub radius: f64,
    pub observed_count: usize,
    pub bound: f64,
    pub min_abs_w: f64,
    pub gamma: f64,
    /// Zeros in {Im k ≥ δ} and the bound C₁ + C₂γ‖q‖.
    pub total_count: usize,
    pub total_bound: f64,
    pub holds: bool,
}

/// 1 + (4/log 2)(γρ/π + ‖q‖/ρ)
pub fn count_bound(gamma: f64, l1: f64, rho: f64) -> f64 {
    1.0 + 4.0 / LN_2 * (gamma * rho / PI + if rho > 0.0 { l1 / rho } else { 0.0 })
}

pub fn count_bound_certificate(
    q: &PotentialSpec,
    rho: f64,
    cfg: &TraceConfig,
) -> Result<ZeroCountCertificate, TraceError> {
    q.validate()?;
    let n = q.norms();
    let min = 2f64.sqrt() * n.l1_norm;
    if !rho.is_finite() || rho < min * (1.0 - 1e-12) {
        return Err(TraceError::InvalidRadius { rho, min });
    }
    let gamma = q.support_length();
    let center = C64::new(0.0, 2.0 * n.l1_norm);
    let delta = cfg.locator.delta.unwrap_or(1e-6 * (1.0 + n.r_c));
    let (observed, min_abs) = if q.is_zero() || rho == 0.0 {
        (0, f64::INFINITY)
    } else {
        let z = count_zeros(q, &Contour::clipped_disk(center, rho, delta), &cfg.locator)?;
        (z.winding, z.min_abs_w)
    };
    let total = if q.is_zero() {
        0
    } else {
        locate_eigenvalues(q, &cfg.locator)?.total_count
    };
    let bound = count_bound(gamma, n.l1_norm, rho);
    let total_bound = c1_constant() + c2_constant() * gamma * n.l1_norm;
    Ok(ZeroCountCertificate {
        center,
        radius: rho,
        observed_count: observed,
        bound,
        min_abs_w: min_abs,
        gamma,
        total_count: total,
        total_bound,
        holds: observed as f64 <= bound && total as f64 <= total_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::c;

    #[test]
    fn constants() {
        assert!((c0_constant() - 37.66).abs() < 0.01);
        assert!((c1_constant() - 3.80).abs() < 0.01);
        assert!((c2_constant() - 3.79).abs() < 0.01);
    }

    #[test]
    fn zero_potential_is_trivial() {
        let cfg = TraceConfig::default();
        let q = PotentialSpec::zero();
        let r = trace_report(&q, &cfg).unwrap();
        assert_eq!(r.k0_inferred, 0.0);
        assert_eq!(r.j.iter().map(|x| x.value).sum::<f64>(), 0.0);
        assert!(r.checks.all_hold());
        let o = outer_factor_check(&q, &[c(0.0, 1.0)], &cfg).unwrap();
        assert_eq!(o.max_deviation, 0.0);
        let z = count_bound_certificate(&q, 0.0, &cfg).unwrap();
        assert_eq!(z.observed_count, 0);
        assert!(z.bound >= 1.0);
    }

    #[test]
    fn tail_bound_matches_quadrature() {
        let (l1, l) = (3.0, 20.0);
        let f = |t: f64| -> Result<Vec<f64>, ()> {
            let s: f64 = l1 / t;
            Ok(vec![6.0 * s * s * (2.0 * s).exp() + 9.0 * s.powi(4) * (4.0 * s).exp()])
        };
        // substitute t = l/x to map (l, ∞) onto (0, 1)
        let g = |x: f64| -> Result<Vec<f64>, ()> {
            if x == 0.0 {
                return Ok(vec![0.0]);
            }
            Ok(vec![f(l / x)?[0] * l / (x * x)])
        };
        let r = quad::integrate(&g, 0.0, 1.0, 1e-12, 200, false).unwrap();
        assert!((r.value[0] / PI - j0_tail_bound(l1, l)).abs() < 1e-10);
    }
}
