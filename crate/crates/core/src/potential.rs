//! Compactly supported complex potentials, their norms and moments.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("invalid potential: {0}")]
    Invalid(String),
    #[error("potential has mass at x < 0 ({0})")]
    SupportViolation(String),
    #[error("moment diverges: {0}")]
    Divergent(String),
    #[error("cannot parse potential file: {0}")]
    Parse(String),
}

/// A complex potential with compact support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    /// Constant `height` on `support = [a, b]`.
    Box {
        #[serde(with = "cnum")]
        height: C64,
        #[serde(with = "pair")]
        support: [f64; 2],
    },
    /// q(x) = c·t·x^{t²−1} on (0, 1).
    PaperPower {
        #[serde(with = "cnum")]
        amplitude: C64,
        #[serde(with = "real")]
        t: f64,
    },
    /// Linear interpolation of `qs` at breakpoints `xs`, zero outside.
    Grid {
        #[serde(with = "reals")]
        xs: Vec<f64>,
        #[serde(with = "cnums")]
        qs: Vec<C64>,
    },
    /// q(|x|) for a potential `half` supported in x ≥ 0.
    Even { half: std::boxed::Box<PotentialSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// ∫ q
    One,
    /// ∫ |q|
    Abs,
    /// ∫ x q
    X,
    /// ∫ |x| |q|
    AbsX,
    /// ∫ q²
    Square,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub l1_norm: f64,
    pub weighted_norm: f64,
    #[serde(with = "cnum")]
    pub q0: C64,
    #[serde(rename = "Q0", with = "cnum")]
    pub big_q0: C64,
    /// None when ∫q² diverges (PaperPower with t ≤ 1/√2).
    #[serde(rename = "Q2", with = "cnum_opt")]
    pub big_q2: Option<C64>,
    pub r_c: f64,
    pub rouche_a: f64,
}

impl PotentialSpec {
    pub fn zero() -> Self {
        PotentialSpec::Box {
            height: C64::new(0.0, 0.0),
            support: [0.0, 1.0],
        }
    }

    pub fn boxed(height: C64, a: f64, b: f64) -> Self {
        PotentialSpec::Box {
            height,
            support: [a, b],
        }
    }

    pub fn paper_power(amplitude: C64, t: f64) -> Self {
        PotentialSpec::PaperPower { amplitude, t }
    }

    pub fn grid(xs: Vec<f64>, qs: Vec<C64>) -> Self {
        PotentialSpec::Grid { xs, qs }
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        let bad = |m: String| Err(PotentialError::Invalid(m));
        match self {
            PotentialSpec::Box { height, support } => {
                let [a, b] = *support;
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return bad(format!("box support [{a}, {b}] must satisfy a < b"));
                }
                if !(height.re.is_finite() && height.im.is_finite()) {
                    return bad("box height must be finite".into());
                }
            }
            PotentialSpec::PaperPower { amplitude, t } => {
                if !(t.is_finite() && *t > 0.0) {
                    return bad(format!("paper_power exponent t = {t} must be > 0"));
                }
                if !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
                    return bad("paper_power amplitude must be finite".into());
                }
            }
            PotentialSpec::Grid { xs, qs } => {
                if xs.len() < 2 {
                    return bad("grid needs at least 2 breakpoints".into());
                }
                if xs.len() != qs.len() {
                    return bad(format!("grid has {} breakpoints but {} values", xs.len(), qs.len()));
                }
                if xs.iter().any(|x| !x.is_finite()) || qs.iter().any(|q| !(q.re.is_finite() && q.im.is_finite())) {
                    return bad("grid entries must be finite".into());
                }
                if xs.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("grid breakpoints must be strictly increasing".into());
                }
            }
            PotentialSpec::Even { half } => {
                half.validate()?;
                let (a, _) = half.support();
                if a < 0.0 && half.mass_left_of_zero() > 0.0 {
                    return Err(PotentialError::SupportViolation(format!(
                        "half-line potential starts at {a}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Closed support interval [a, b].
    pub fn support(&self) -> (f64, f64) {
        match self {
            PotentialSpec::Box { support, .. } => (support[0], support[1]),
            PotentialSpec::PaperPower { .. } => (0.0, 1.0),
            PotentialSpec::Grid { xs, .. } => (xs[0], xs[xs.len() - 1]),
            PotentialSpec::Even { half } => {
                let (_, b) = half.support();
                (-b, b)
            }
        }
    }

    /// Length γ of the support.
    pub fn support_length(&self) -> f64 {
        let (a, b) = self.support();
        b - a
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PotentialSpec::Box { height, .. } => *height == C64::new(0.0, 0.0),
            PotentialSpec::PaperPower { amplitude, .. } => *amplitude == C64::new(0.0, 0.0),
            PotentialSpec::Grid { qs, .. } => qs.iter().all(|q| *q == C64::new(0.0, 0.0)),
            PotentialSpec::Even { half } => half.is_zero(),
        }
    }

    /// Point value; zero outside the support. PaperPower is infinite at 0⁺ for t < 1.
    pub fn eval(&self, x: f64) -> C64 {
        let zero = C64::new(0.0, 0.0);
        match self {
            PotentialSpec::Box { height, support } => {
                if x >= support[0] && x <= support[1] {
                    *height
                } else {
                    zero
                }
            }
            PotentialSpec::PaperPower { amplitude, t } => {
                if x > 0.0 && x < 1.0 {
                    amplitude * t * x.powf(t * t - 1.0)
                } else {
                    zero
                }
            }
            PotentialSpec::Grid { xs, qs } => {
                if x < xs[0] || x > xs[xs.len() - 1] {
                    return zero;
                }
                let i = match xs.binary_search_by(|v| v.total_cmp(&x)) {
                    Ok(i) => return qs[i],
                    Err(i) => i - 1,
                };
                let s = (x - xs[i]) / (xs[i + 1] - xs[i]);
                qs[i] + (qs[i + 1] - qs[i]) * s
            }
            PotentialSpec::Even { half } => half.eval(x.abs()),
        }
    }

    fn mass_left_of_zero(&self) -> f64 {
        match self {
            PotentialSpec::Box { height, support } => height.norm() * (support[1].min(0.0) - support[0]).max(0.0),
            PotentialSpec::PaperPower { .. } | PotentialSpec::Even { .. } => 0.0,
            PotentialSpec::Grid { xs, qs } => {
                let (cx, cq) = clip_grid(xs, qs, f64::NEG_INFINITY, 0.0);
                grid_moment(&cx, &cq, Weight::Abs).re
            }
        }
    }

    /// ∫ w(x) q(x) dx in closed form.
    pub fn integrate_moment(&self, weight: Weight) -> Result<C64, PotentialError> {
        let r = |v: f64| C64::new(v, 0.0);
        Ok(match self {
            PotentialSpec::Box { height, support } => {
                let [a, b] = *support;
                match weight {
                    Weight::One => height * (b - a),
                    Weight::Abs => r(height.norm() * (b - a)),
                    Weight::X => height * ((b * b - a * a) / 2.0),
                    Weight::AbsX => r(height.norm() * abs_x_integral(a, b)),
                    Weight::Square => height * height * (b - a),
                }
            }
            PotentialSpec::PaperPower { amplitude: c, t } => {
                let t = *t;
                match weight {
                    Weight::One => c / t,
                    Weight::Abs => r(c.norm() / t),
                    Weight::X => c * (t / (1.0 + t * t)),
                    Weight::AbsX => r(c.norm() * t / (1.0 + t * t)),
                    Weight::Square => {
                        if 2.0 * t * t <= 1.0 {
                            return Err(PotentialError::Divergent(format!(
                                "∫q² diverges for paper_power with t = {t}"
                            )));
                        }
                        c * c * (t * t / (2.0 * t * t - 1.0))
                    }
                }
            }
            PotentialSpec::Grid { xs, qs } => grid_moment(xs, qs, weight),
            PotentialSpec::Even { half } => match weight {
                Weight::X => C64::new(0.0, 0.0),
                w => half.integrate_moment(w)? * 2.0,
            },
        })
    }

    /// (1/32)∫(2q³ + q′²), when the potential is continuous and piecewise linear.
    pub fn quartic_moment(&self) -> Option<C64> {
        let zero = C64::new(0.0, 0.0);
        match self {
            PotentialSpec::Box { height, .. } if height.norm() == 0.0 => Some(zero),
            PotentialSpec::Grid { xs, qs } => {
                let n = qs.len();
                if qs[0] != zero || qs[n - 1] != zero {
                    return None;
                }
                Some(grid_quartic(xs, qs))
            }
            PotentialSpec::Even { half } => half.quartic_moment().map(|v| v * 2.0),
            _ => None,
        }
    }

    /// The even extension q(|x|) of a potential supported in x ≥ 0.
    pub fn even_extension(&self) -> Result<PotentialSpec, PotentialError> {
        self.validate()?;
        if self.mass_left_of_zero() > 0.0 {
            let (a, _) = self.support();
            return Err(PotentialError::SupportViolation(format!("support starts at {a}")));
        }
        Ok(match self {
            PotentialSpec::Box { height, support } if support[0] <= 0.0 => PotentialSpec::Box {
                height: *height,
                support: [-support[1], support[1]],
            },
            PotentialSpec::Box { height, .. } if height.norm() == 0.0 => self.clone(),
            PotentialSpec::Grid { xs, qs } if xs[0] <= 0.0 => {
                let (cx, cq) = clip_grid(xs, qs, 0.0, f64::INFINITY);
                let mut nx: Vec<f64> = cx.iter().rev().map(|x| -x).collect();
                let mut nq: Vec<C64> = cq.iter().rev().cloned().collect();
                let start = if cx[0] == 0.0 { 1 } else { 0 };
                nx.extend_from_slice(&cx[start..]);
                nq.extend_from_slice(&cq[start..]);
                PotentialSpec::Grid { xs: nx, qs: nq }
            }
            other => PotentialSpec::Even {
                half: std::boxed::Box::new(other.clone()),
            },
        })
    }

    pub fn norms(&self) -> Norms {
        let l1 = self.integrate_moment(Weight::Abs).map(|v| v.re).unwrap_or(f64::NAN);
        let w1 = self.integrate_moment(Weight::AbsX).map(|v| v.re).unwrap_or(f64::NAN);
        let q0 = self
            .integrate_moment(Weight::One)
            .unwrap_or(C64::new(f64::NAN, f64::NAN));
        let q2 = self.integrate_moment(Weight::Square).ok().map(|v| v / 8.0);
        Norms {
            l1_norm: l1,
            weighted_norm: w1,
            q0,
            big_q0: q0 / 2.0,
            big_q2: q2,
            r_c: l1 / 2.0,
            rouche_a: l1 * w1 * w1.exp(),
        }
    }

    /// Multiplies the potential by a complex scalar.
    pub fn scaled(&self, alpha: C64) -> PotentialSpec {
        match self {
            PotentialSpec::Box { height, support } => PotentialSpec::Box {
                height: height * alpha,
                support: *support,
            },
            PotentialSpec::PaperPower { amplitude, t } => PotentialSpec::PaperPower {
                amplitude: amplitude * alpha,
                t: *t,
            },
            PotentialSpec::Grid { xs, qs } => PotentialSpec::Grid {
                xs: xs.clone(),
                qs: qs.iter().map(|q| q * alpha).collect(),
            },
            PotentialSpec::Even { half } => PotentialSpec::Even {
                half: std::boxed::Box::new(half.scaled(alpha)),
            },
        }
    }

    pub fn from_json(text: &str) -> Result<PotentialSpec, PotentialError> {
        let p: PotentialSpec = serde_json::from_str(text).map_err(|e| PotentialError::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("potential serialization cannot fail")
    }
}

/// ∫_a^b |x| dx
fn abs_x_integral(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        (b * b - a * a) / 2.0
    } else if b <= 0.0 {
        (a * a - b * b) / 2.0
    } else {
        (a * a + b * b) / 2.0
    }
}

/// Restricts a grid to [lo, hi], inserting interpolated endpoints.
pub(crate) fn clip_grid(xs: &[f64], qs: &[C64], lo: f64, hi: f64) -> (Vec<f64>, Vec<C64>) {
    let p = PotentialSpec::Grid {
        xs: xs.to_vec(),
        qs: qs.to_vec(),
    };
    let mut cx = Vec::new();
    let mut cq = Vec::new();
    let a = xs[0].max(lo);
    let b = xs[xs.len() - 1].min(hi);
    if a >= b {
        return (cx, cq);
    }
    cx.push(a);
    cq.push(p.eval(a));
    for (x, q) in xs.iter().zip(qs) {
        if *x > a && *x < b {
            cx.push(*x);
            cq.push(*q);
        }
    }
    cx.push(b);
    cq.push(p.eval(b));
    (cx, cq)
}

/// ∫_0^h |A + B s/h| ds for complex A, B.
fn abs_linear(a: C64, b: C64, h: f64) -> f64 {
    seg_abs_moments(a, b, h, 0.0).0
}

/// (∫|q|, ∫ x|q|) over a linear segment q(s) = a + (b−a)s/h, x = x0 + s, s ∈ [0, h].
pub(crate) fn seg_abs_moments(a: C64, b: C64, h: f64, x0: f64) -> (f64, f64) {
    // |q| = |a + β s|, β = (b − a)/h; P(s) = |β|² s² + 2 Re(a β̄) s + |a|²
    let beta = (b - a) / h;
    let aa = beta.norm_sqr();
    if aa == 0.0 || aa * h * h <= 1e-30 * a.norm_sqr() {
        let m = a.norm();
        return (m * h, m * (x0 * h + h * h / 2.0));
    }
    let bb = 2.0 * (a * beta.conj()).re;
    let u0 = bb / (2.0 * aa);
    // d² = (4ac − b²)/(4a²) = Im(a β̄)² / |β|⁴
    let d = (a * beta.conj()).im.abs() / aa;
    let sa = aa.sqrt();
    // I0(u) = ∫ sqrt(u² + d²) du, I1(u) = ∫ u sqrt(u² + d²) du
    let i0 = |u: f64| {
        let r = (u * u + d * d).sqrt();
        if d == 0.0 {
            0.5 * u * u.abs()
        } else {
            0.5 * (u * r + d * d * (u / d).asinh())
        }
    };
    let i1 = |u: f64| (u * u + d * d).powf(1.5) / 3.0;
    let (ua, ub) = (u0, h + u0);
    let m0 = sa * (i0(ub) - i0(ua));
    // x = x0 + s = (x0 − u0) + u
    let m1 = sa * ((x0 - u0) * (i0(ub) - i0(ua)) + (i1(ub) - i1(ua)));
    (m0, m1)
}

/// ∫ |x| |q| over the segment, splitting at x = 0.
fn seg_abs_x(a: C64, b: C64, x0: f64, x1: f64) -> f64 {
    let h = x1 - x0;
    if x0 >= 0.0 {
        seg_abs_moments(a, b, h, x0).1
    } else if x1 <= 0.0 {
        -seg_abs_moments(a, b, h, x0).1
    } else {
        let s = -x0;
        let qz = a + (b - a) * (s / h);
        -seg_abs_moments(a, qz, s, x0).1 + seg_abs_moments(qz, b, x1, 0.0).1
    }
}

fn grid_quartic(xs: &[f64], qs: &[C64]) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..qs.len() - 1 {
        let h = xs[i + 1] - xs[i];
        let (a, b) = (qs[i], qs[i + 1]);
        let cube = (a * a * a + a * a * b + a * b * b + b * b * b) * (h / 4.0);
        let d = (b - a) / h;
        s += cube * 2.0 + d * d * h;
    }
    s / 32.0
}

pub(crate) fn grid_moment(xs: &[f64], qs: &[C64], weight: Weight) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..xs.len().saturating_sub(1) {
        let (x0, x1) = (xs[i], xs[i + 1]);
        let h = x1 - x0;
        let (a, b) = (qs[i], qs[i + 1]);
        s += match weight {
            Weight::One => (a + b) * (h / 2.0),
            Weight::Abs => C64::new(abs_linear(a, b, h), 0.0),
            Weight::X => (a + b) * (x0 * h / 2.0) + (a + b * 2.0) * (h * h / 6.0),
            Weight::AbsX => C64::new(seg_abs_x(a, b, x0, x1), 0.0),
            Weight::Square => (a * a + a * b + b * b) * (h / 3.0),
        };
    }
    s
}

/// Accepts a JSON number or a decimal string.
#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Num(f64),
    Str(String),
}

fn num_value<E: serde::de::Error>(v: NumOrStr) -> Result<f64, E> {
    match v {
        NumOrStr::Num(x) => Ok(x),
        NumOrStr::Str(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| E::custom(format!("not a decimal number: {s:?}"))),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexRepr {
    Pair([NumOrStr; 2]),
    Real(NumOrStr),
}

fn complex_value<E: serde::de::Error>(v: ComplexRepr) -> Result<C64, E> {
    match v {
        ComplexRepr::Pair([re, im]) => Ok(C64::new(num_value(re)?, num_value(im)?)),
        ComplexRepr::Real(re) => Ok(C64::new(num_value(re)?, 0.0)),
    }
}

pub mod real {
    use super::*;
    use serde::{Deserializer, Serializer};
    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(*v)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        num_value(NumOrStr::deserialize(d)?)
    }
}

pub mod reals {
    use super::*;
    use serde::{Deserializer, Serializer};
    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<NumOrStr>::deserialize(d)?.into_iter().map(num_value).collect()
    }
}

pub mod pair {
    use super::*;
    use serde::{Deserializer, Serializer};
    pub fn serialize<S: Serializer>(v: &[f64; 2], s: S) -> Result<S::Ok, S::Error> {
        v.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 2], D::Error> {
        let [a, b] = <[NumOrStr; 2]>::deserialize(d)?;
        Ok([num_value(a)?, num_value(b)?])
    }
}

/// Complex numbers as `[re, im]`.
pub mod cnum {
    use super::*;
    use serde::{Deserializer, Serializer};
    pub fn serialize<S: Serializer>(v: &C64, s: S) -> Result<S::Ok, S::Error> {
        [v.re, v.im].serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        complex_value(ComplexRepr::deserialize(d)?)
    }
}

pub mod cnum_opt {
    use super::*;
    use serde::{Deserializer, Serializer};
    pub fn serialize<S: Serializer>(v: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(|c| [c.re, c.im]).serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<C64>, D::Error> {
        Option::<ComplexRepr>::deserialize(d)?.map(complex_value).transpose()
    }
}

pub mod cnums {
    use super::*;
    use serde::{Deserializer, Serializer};
    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>().serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        Vec::<ComplexRepr>::deserialize(d)?
            .into_iter()
            .map(complex_value)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_potential_norms_vanish() {
        let n = PotentialSpec::zero().norms();
        assert_eq!(n.l1_norm, 0.0);
        assert_eq!(n.weighted_norm, 0.0);
        assert_eq!(n.q0, c(0.0, 0.0));
        assert_eq!(n.rouche_a, 0.0);
    }

    #[test]
    fn box_square_moment() {
        let q = PotentialSpec::boxed(c(0.0, 2.0), 0.0, 1.0);
        assert_eq!(q.integrate_moment(Weight::Square).unwrap(), c(-4.0, 0.0));
        assert_eq!(q.norms().big_q2.unwrap(), c(-0.5, 0.0));
    }

    #[test]
    fn box_norms_by_hand() {
        let n = PotentialSpec::boxed(c(3.0, -4.0), 0.0, 2.0).norms();
        assert_eq!(n.l1_norm, 10.0);
        assert_eq!(n.r_c, 5.0);
        assert_eq!(n.q0, c(6.0, -8.0));
    }

    #[test]
    fn paper_power_closed_forms() {
        let amp = C64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        let n = PotentialSpec::paper_power(amp, 0.1).norms();
        assert!((n.q0.re - 5.0).abs() < 1e-12);
        assert!((n.l1_norm - 10.0).abs() < 1e-12);
        assert!((n.weighted_norm - 0.1 / 1.01).abs() < 1e-15);
        assert!((n.rouche_a - 1.0932).abs() < 1e-3);
        assert!(n.big_q2.is_none());
    }

    #[test]
    fn grid_moments_match_box() {
        let v = c(1.5, -0.5);
        let g = PotentialSpec::grid(vec![-0.5, 0.25, 1.0], vec![v, v, v]);
        let b = PotentialSpec::boxed(v, -0.5, 1.0);
        for w in [Weight::One, Weight::Abs, Weight::X, Weight::AbsX, Weight::Square] {
            let (x, y) = (g.integrate_moment(w).unwrap(), b.integrate_moment(w).unwrap());
            assert!((x - y).norm() < 1e-14, "{w:?}");
        }
    }

    #[test]
    fn grid_abs_moment_of_sign_changing_segment() {
        // q = x on [-1, 2]: ∫|q| = 1/2 + 2 = 2.5, ∫|x||q| = 1/3 + 8/3 = 3
        let g = PotentialSpec::grid(vec![-1.0, 2.0], vec![c(-1.0, 0.0), c(2.0, 0.0)]);
        assert!((g.integrate_moment(Weight::Abs).unwrap().re - 2.5).abs() < 1e-14);
        assert!((g.integrate_moment(Weight::AbsX).unwrap().re - 3.0).abs() < 1e-14);
        // q = (1 + i) x passes through zero
        let g = PotentialSpec::grid(vec![0.0, 1.0], vec![c(0.0, 0.0), c(1.0, 1.0)]);
        assert!((g.integrate_moment(Weight::Abs).unwrap().re - 0.5 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn grid_abs_moment_complex_against_quadrature() {
        let (a, b) = (c(1.0, -2.0), c(-0.5, 3.0));
        let g = PotentialSpec::grid(vec![-0.3, 1.1], vec![a, b]);
        let n = 200_000;
        let (mut s0, mut s1) = (0.0, 0.0);
        for i in 0..n {
            let x = -0.3 + 1.4 * (i as f64 + 0.5) / n as f64;
            let q = g.eval(x).norm();
            s0 += q * 1.4 / n as f64;
            s1 += x.abs() * q * 1.4 / n as f64;
        }
        assert!((g.integrate_moment(Weight::Abs).unwrap().re - s0).abs() < 1e-8);
        assert!((g.integrate_moment(Weight::AbsX).unwrap().re - s1).abs() < 1e-6);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let specs = vec![
            PotentialSpec::boxed(c(0.1, -1.0 / 3.0), -0.7, 1.3),
            PotentialSpec::paper_power(C64::from_polar(1.0, -std::f64::consts::FRAC_PI_3), 0.1),
            PotentialSpec::grid(vec![0.0, 0.1, 0.3], vec![c(0.0, 0.0), c(1e-300, 2.0), c(0.0, 0.0)]),
        ];
        for p in specs {
            let once = PotentialSpec::from_json(&p.to_json()).unwrap();
            assert_eq!(once, p);
            let twice = PotentialSpec::from_json(&once.to_json()).unwrap();
            assert_eq!(twice, p);
        }
    }

    #[test]
    fn json_accepts_decimal_strings() {
        let p = PotentialSpec::from_json(r#"{"kind":"box","height":["-9","0"],"support":["0",1]}"#).unwrap();
        assert_eq!(p, PotentialSpec::boxed(c(-9.0, 0.0), 0.0, 1.0));
        let p = PotentialSpec::from_json(r#"{"kind":"paper_power","amplitude":2.5,"t":"0.5"}"#).unwrap();
        assert_eq!(p, PotentialSpec::paper_power(c(2.5, 0.0), 0.5));
    }

    #[test]
    fn json_rejects_invalid() {
        assert!(PotentialSpec::from_json(r#"{"kind":"box","height":[1,0],"support":[1,0]}"#).is_err());
        assert!(PotentialSpec::from_json(r#"{"kind":"grid","xs":[0],"qs":[[1,0]]}"#).is_err());
        assert!(PotentialSpec::from_json(r#"{"kind":"grid","xs":[0,0],"qs":[[1,0],[1,0]]}"#).is_err());
        assert!(PotentialSpec::from_json(r#"{"kind":"paper_power","amplitude":[1,0],"t":0}"#).is_err());
        assert!(PotentialSpec::from_json(r#"{"kind":"blob"}"#).is_err());
    }

    #[test]
    fn even_extension_doubles_norms() {
        let b = PotentialSpec::boxed(c(2.0, 1.0), 0.0, 1.0);
        let e = b.even_extension().unwrap();
        assert_eq!(e, PotentialSpec::boxed(c(2.0, 1.0), -1.0, 1.0));
        assert!((e.norms().l1_norm - 2.0 * b.norms().l1_norm).abs() < 1e-15);
        let p = PotentialSpec::paper_power(c(0.5, 0.5), 0.5);
        let e = p.even_extension().unwrap();
        assert!((e.norms().q0 - p.norms().q0 * 2.0).norm() < 1e-15);
        assert_eq!(e.eval(-0.25), p.eval(0.25));
        let left = PotentialSpec::boxed(c(1.0, 0.0), -1.0, 1.0);
        assert!(matches!(
            left.even_extension(),
            Err(PotentialError::SupportViolation(_))
        ));
        assert_eq!(PotentialSpec::zero().even_extension().unwrap().norms().l1_norm, 0.0);
    }

    #[test]
    fn even_extension_of_grid() {
        let g = PotentialSpec::grid(vec![0.0, 0.5, 1.0], vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, 0.0)]);
        let e = g.even_extension().unwrap();
        match &e {
            PotentialSpec::Grid { xs, .. } => assert_eq!(xs, &vec![-1.0, -0.5, 0.0, 0.5, 1.0]),
            _ => panic!("expected grid"),
        }
        assert_eq!(e.eval(-0.25), g.eval(0.25));
    }
}
