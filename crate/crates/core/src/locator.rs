//! Zeros of w in the upper half-plane: argument-principle counting on
//! adaptively sampled contours, rectangle subdivision, Newton polishing,
//! Blaschke product and its coefficients.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jost::{Jost, JostConfig, JostError};
use crate::potential::{cnum, Norms, PotentialSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocatorError {
    #[error("contour passes within the guard band of a zero near k = {at}: |w| = {min_abs_w:.3e} < {threshold:.3e}")]
    ContourTooClose { at: C64, min_abs_w: f64, threshold: f64 },
    #[error("zero suspected on a cell boundary in [{}, {}] x [{}, {}]", re[0], re[1], im[0], im[1])]
    BoundaryZeroSuspected { re: [f64; 2], im: [f64; 2] },
    #[error("cluster of {count} zeros in [{}, {}] x [{}, {}] could not be resolved", re[0], re[1], im[0], im[1])]
    UnresolvedCluster { re: [f64; 2], im: [f64; 2], count: usize },
    #[error(transparent)]
    Jost(#[from] JostError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocatorConfig {
    pub jost: JostConfig,
    /// Half-width R of the search rectangle; default max(1.5 r_c, r_c + 1).
    pub radius: Option<f64>,
    /// Floor δ above the real axis; default 1e−6 (1 + r_c).
    pub delta: Option<f64>,
    /// Default 1e−6 r_c.
    pub cluster_radius: Option<f64>,
    pub max_retries: usize,
    pub contour_guard: f64,
    /// Bound on |w| at a polished zero.
    pub polish_tol: f64,
}

impl Default for LocatorConfig {
    fn default() -> Self {
        LocatorConfig {
            jost: JostConfig::default(),
            radius: None,
            delta: None,
            cluster_radius: None,
            max_retries: 3,
            contour_guard: 100.0,
            polish_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    #[serde(with = "cnum")]
    pub k: C64,
    pub multiplicity: usize,
    pub residual: f64,
    #[serde(with = "cnum")]
    pub energy: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchRegion {
    pub radius: f64,
    pub delta: f64,
    pub cluster_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueSet {
    pub eigenvalues: Vec<Eigenvalue>,
    pub total_count: usize,
    pub region: SearchRegion,
}

impl EigenvalueSet {
    pub fn empty() -> Self {
        EigenvalueSet {
            eigenvalues: Vec::new(),
            total_count: 0,
            region: SearchRegion {
                radius: 0.0,
                delta: 0.0,
                cluster_radius: 0.0,
            },
        }
    }

    /// Eigenvalues given by hand, each simple unless repeated.
    pub fn from_points(ks: &[C64]) -> Self {
        let mut set = EigenvalueSet::empty();
        for &k in ks {
            set.eigenvalues.push(Eigenvalue {
                k,
                multiplicity: 1,
                residual: 0.0,
                energy: k * k,
            });
        }
        set.total_count = ks.len();
        sort_eigenvalues(&mut set.eigenvalues, 1.0);
        set
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeCoeffs {
    #[serde(rename = "B")]
    pub b: Vec<f64>,
    pub r_c: f64,
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    NoEigenvalues,
    ExactlyOneSimple,
    Inconclusive,
}

/// One piece of a closed contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Edge {
    Line {
        a: C64,
        b: C64,
    },
    /// center + radius·e^{iθ}, θ from theta0 to theta1.
    Arc {
        center: C64,
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl Edge {
    fn point(&self, s: f64) -> C64 {
        match *self {
            Edge::Line { a, b } => {
                if s == 0.0 {
                    a
                } else if s == 1.0 {
                    b
                } else {
                    a + (b - a) * s
                }
            }
            Edge::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => center + C64::from_polar(radius, theta0 + (theta1 - theta0) * s),
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Edge::Line { a, b } => (b - a).norm(),
            Edge::Arc {
                radius, theta0, theta1, ..
            } => radius * (theta1 - theta0).abs(),
        }
    }
}

/// Closed, positively oriented, piecewise-smooth curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub edges: Vec<Edge>,
}

impl Contour {
    pub fn rectangle(re0: f64, re1: f64, im0: f64, im1: f64) -> Self {
        let p = [
            C64::new(re0, im0),
            C64::new(re1, im0),
            C64::new(re1, im1),
            C64::new(re0, im1),
        ];
        Contour {
            edges: (0..4)
                .map(|i| Edge::Line {
                    a: p[i],
                    b: p[(i + 1) % 4],
                })
                .collect(),
        }
    }

    /// Disk |k − center| ≤ radius intersected with Im k ≥ delta.
    pub fn clipped_disk(center: C64, radius: f64, delta: f64) -> Self {
        let lo = center.im - radius;
        if lo >= delta {
            return Contour {
                edges: vec![Edge::Arc {
                    center,
                    radius,
                    theta0: -PI / 2.0,
                    theta1: 1.5 * PI,
                }],
            };
        }
        let th = ((delta - center.im) / radius).clamp(-1.0, 1.0).asin();
        let left = center + C64::from_polar(radius, PI - th);
        let right = center + C64::from_polar(radius, th);
        Contour {
            edges: vec![
                Edge::Line {
                    a: C64::new(left.re, delta),
                    b: C64::new(right.re, delta),
                },
                Edge::Arc {
                    center,
                    radius,
                    theta0: th,
                    theta1: PI - th,
                },
            ],
        }
    }

    /// {|k| ≤ radius, Im k ≥ delta}.
    pub fn half_disk(radius: f64, delta: f64) -> Self {
        Self::clipped_disk(C64::new(0.0, 0.0), radius, delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub winding: usize,
    pub min_abs_w: f64,
}

/// Analytic function with a pointwise error bound.
pub type Target<'a> = dyn Fn(C64) -> Result<(C64, f64), JostError> + 'a;

#[derive(Clone, Copy)]
struct EdgeArg {
    darg: f64,
    min_abs: f64,
    at: C64,
}

/// Memoised evaluation of one target with the argument-tracking machinery.
pub(crate) struct Tracker<'a> {
    f: &'a Target<'a>,
    guard: f64,
    /// Initial sample spacing along edges.
    h0: f64,
    values: RefCell<HashMap<(u64, u64), (C64, f64)>>,
    edges: RefCell<HashMap<[u64; 4], EdgeArg>>,
}

fn key(z: C64) -> (u64, u64) {
    ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())
}

const MAX_DEPTH: usize = 48;

impl<'a> Tracker<'a> {
    pub(crate) fn new(f: &'a Target<'a>, guard: f64, h0: f64) -> Self {
        Tracker {
            f,
            guard,
            h0,
            values: RefCell::new(HashMap::new()),
            edges: RefCell::new(HashMap::new()),
        }
    }

    pub(crate) fn eval(&self, z: C64) -> Result<(C64, f64), JostError> {
        if let Some(v) = self.values.borrow().get(&key(z)) {
            return Ok(*v);
        }
        let v = (self.f)(z)?;
        self.values.borrow_mut().insert(key(z), v);
        Ok(v)
    }

    fn guarded(&self, z: C64) -> Result<C64, LocatorError> {
        let (w, err) = self.eval(z)?;
        let threshold = self.guard * err;
        if w.norm() <= threshold || w.norm() == 0.0 {
            return Err(LocatorError::ContourTooClose {
                at: z,
                min_abs_w: w.norm(),
                threshold,
            });
        }
        Ok(w)
    }

    fn edge_arg(&self, e: &Edge) -> Result<EdgeArg, LocatorError> {
        if let Edge::Line { a, b } = *e {
            let (ka, kb) = (key(a), key(b));
            let (fwd, k4) = if ka <= kb {
                (true, [ka.0, ka.1, kb.0, kb.1])
            } else {
                (false, [kb.0, kb.1, ka.0, ka.1])
            };
            if let Some(v) = self.edges.borrow().get(&k4) {
                let mut v = *v;
                if !fwd {
                    v.darg = -v.darg;
                }
                return Ok(v);
            }
            let canon = if fwd { *e } else { Edge::Line { a: b, b: a } };
            let v = self.track(&canon)?;
            self.edges.borrow_mut().insert(k4, v);
            let mut v = v;
            if !fwd {
                v.darg = -v.darg;
            }
            return Ok(v);
        }
        self.track(e)
    }

    fn track(&self, e: &Edge) -> Result<EdgeArg, LocatorError> {
        let n0 = ((e.length() / self.h0).ceil() as usize).clamp(2, 4096);
        let mut acc = EdgeArg {
            darg: 0.0,
            min_abs: f64::INFINITY,
            at: e.point(0.0),
        };
        let mut sa = 0.0;
        let mut wa = self.guarded(e.point(0.0))?;
        note(&mut acc, e.point(0.0), wa);
        for i in 1..=n0 {
            let sb = if i == n0 { 1.0 } else { i as f64 / n0 as f64 };
            let wb = self.guarded(e.point(sb))?;
            self.refine(e, sa, sb, wa, wb, 0, &mut acc)?;
            sa = sb;
            wa = wb;
        }
        Ok(acc)
    }

    /// Accepts [sa, sb] once both halves change arg w by at most π/4 and
    /// |w| by at most a factor e; the midpoint guards against aliasing.
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        e: &Edge,
        sa: f64,
        sb: f64,
        wa: C64,
        wb: C64,
        depth: usize,
        acc: &mut EdgeArg,
    ) -> Result<(), LocatorError> {
        let sm = 0.5 * (sa + sb);
        if depth >= MAX_DEPTH || sm <= sa || sm >= sb {
            let at = e.point(sm);
            return Err(LocatorError::ContourTooClose {
                at,
                min_abs_w: wa.norm().min(wb.norm()),
                threshold: 0.0,
            });
        }
        let wm = self.guarded(e.point(sm))?;
        let smooth = |r: C64| r.arg().abs() <= PI / 4.0 && r.norm().ln().abs() <= 1.0;
        let (r1, r2) = (wm / wa, wb / wm);
        if smooth(wb / wa) && smooth(r1) && smooth(r2) {
            acc.darg += r1.arg() + r2.arg();
            note(acc, e.point(sm), wm);
            note(acc, e.point(sb), wb);
            return Ok(());
        }
        self.refine(e, sa, sm, wa, wm, depth + 1, acc)?;
        self.refine(e, sm, sb, wm, wb, depth + 1, acc)
    }

    pub(crate) fn count(&self, c: &Contour) -> Result<ZeroCount, LocatorError> {
        let mut total = 0.0;
        let mut min_abs = f64::INFINITY;
        let mut at = C64::new(0.0, 0.0);
        for e in &c.edges {
            let a = self.edge_arg(e)?;
            total += a.darg;
            if a.min_abs < min_abs {
                min_abs = a.min_abs;
                at = a.at;
            }
        }
        let n = total / TAU;
        let r = n.round();
        if (n - r).abs() > 0.05 || r < -0.5 {
            return Err(LocatorError::ContourTooClose {
                at,
                min_abs_w: min_abs,
                threshold: 0.0,
            });
        }
        Ok(ZeroCount {
            winding: r as usize,
            min_abs_w: min_abs,
        })
    }

    fn derivative(&self, k: C64) -> Result<C64, JostError> {
        let h = 1e-6 * (1.0 + k.norm());
        let (wp, _) = self.eval(k + h)?;
        let (wm, _) = self.eval(k - h)?;
        Ok((wp - wm) / (2.0 * h))
    }

    /// Newton with multiplicity m from k; returns the last iterate and |w|.
    fn newton(&self, mut k: C64, m: usize) -> Result<(C64, f64, bool), JostError> {
        let mut best = (k, f64::INFINITY);
        for _ in 0..60 {
            let (w, err) = self.eval(k)?;
            if w.norm() < best.1 {
                best = (k, w.norm());
            }
            if w.norm() <= err {
                return Ok((k, w.norm(), true));
            }
            let dw = self.derivative(k)?;
            if dw.norm() == 0.0 || !dw.re.is_finite() {
                return Ok((best.0, best.1, false));
            }
            let step = w / dw * m as f64;
            let mut next = k - step;
            if next.im < 0.0 {
                next.im = 0.5 * k.im;
            }
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + k.norm()) {
                let (wn, _) = self.eval(next)?;
                let (kk, ww) = if wn.norm() < w.norm() {
                    (next, wn.norm())
                } else {
                    (k, w.norm())
                };
                return Ok((kk, ww, true));
            }
            k = next;
        }
        Ok((best.0, best.1, false))
    }
}

fn note(acc: &mut EdgeArg, z: C64, w: C64) {
    if w.norm() < acc.min_abs {
        acc.min_abs = w.norm();
        acc.at = z;
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    re: [f64; 2],
    im: [f64; 2],
    count: usize,
}

impl Cell {
    fn contour(&self) -> Contour {
        Contour::rectangle(self.re[0], self.re[1], self.im[0], self.im[1])
    }
    fn diameter(&self) -> f64 {
        (self.re[1] - self.re[0]).hypot(self.im[1] - self.im[0])
    }
    fn center(&self) -> C64 {
        C64::new(0.5 * (self.re[0] + self.re[1]), 0.5 * (self.im[0] + self.im[1]))
    }
    fn contains(&self, k: C64) -> bool {
        k.re >= self.re[0] && k.re <= self.re[1] && k.im >= self.im[0] && k.im <= self.im[1]
    }
}

const SPLIT: [f64; 2] = [0.513_7, 0.487_1];

/// Zeros of an analytic target inside the rectangle [−R, R] × [δ, R].
pub(crate) fn locate_zeros(f: &Target, scale: f64, cfg: &LocatorConfig) -> Result<EigenvalueSet, LocatorError> {
    let radius = cfg.radius.unwrap_or((1.5 * scale).max(scale + 1.0));
    let delta = cfg.delta.unwrap_or(1e-6 * (1.0 + scale));
    let cluster = cfg.cluster_radius.unwrap_or(1e-6 * scale).max(1e-12 * (1.0 + scale));
    let tracker = Tracker::new(f, cfg.contour_guard, 0.05 * radius);

    let mut outer = None;
    let mut last_err = None;
    for attempt in 0..=cfg.max_retries {
        let r = radius * (1.0 + 1e-3 * attempt as f64);
        let d = delta * (1.0 + 1e-3 * attempt as f64);
        match tracker.count(&Contour::rectangle(-r, r, d, r)) {
            Ok(c) => {
                outer = Some((
                    Cell {
                        re: [-r, r],
                        im: [d, r],
                        count: c.winding,
                    },
                    r,
                    d,
                ));
                break;
            }
            Err(e @ LocatorError::Jost(_)) => return Err(e),
            Err(e) => last_err = Some(e),
        }
    }
    let (root, r_used, d_used) = match outer {
        Some(o) => o,
        None => {
            let _ = last_err;
            return Err(LocatorError::BoundaryZeroSuspected {
                re: [-radius, radius],
                im: [delta, radius],
            });
        }
    };

    let mut found = Vec::new();
    let mut stack = vec![root];
    while let Some(cell) = stack.pop() {
        if cell.count == 0 {
            continue;
        }
        if cell.count == 1 {
            let (k, res, ok) = tracker.newton(cell.center(), 1)?;
            if ok && cell.contains(k) && res <= cfg.polish_tol {
                found.push(Eigenvalue {
                    k,
                    multiplicity: 1,
                    residual: res,
                    energy: k * k,
                });
                continue;
            }
        }
        if cell.diameter() < cluster {
            let (k, res, _) = tracker.newton(cell.center(), cell.count)?;
            let k = if cell.contains(k) { k } else { cell.center() };
            let res = if cell.contains(k) {
                res
            } else {
                tracker.eval(k)?.0.norm()
            };
            if res > cfg.polish_tol {
                return Err(LocatorError::UnresolvedCluster {
                    re: cell.re,
                    im: cell.im,
                    count: cell.count,
                });
            }
            found.push(Eigenvalue {
                k,
                multiplicity: cell.count,
                residual: res,
                energy: k * k,
            });
            continue;
        }
        if cell.diameter() < 1e-13 * (1.0 + scale) {
            return Err(LocatorError::UnresolvedCluster {
                re: cell.re,
                im: cell.im,
                count: cell.count,
            });
        }
        let mut children = None;
        for attempt in 0..=cfg.max_retries {
            let jit = if attempt == 0 {
                0.0
            } else {
                1e-3 * 6f64.powi(attempt as i32)
            } * if attempt % 2 == 0 { 1.0 } else { -1.0 };
            let (a, b) = split(&cell, jit);
            let ca = tracker.count(&a.contour());
            let cb = tracker.count(&b.contour());
            match (ca, cb) {
                (Ok(x), Ok(y)) if x.winding + y.winding == cell.count => {
                    children = Some((Cell { count: x.winding, ..a }, Cell { count: y.winding, ..b }));
                    break;
                }
                (Err(e @ LocatorError::Jost(_)), _) | (_, Err(e @ LocatorError::Jost(_))) => return Err(e),
                _ => {}
            }
        }
        match children {
            Some((a, b)) => {
                stack.push(b);
                stack.push(a);
            }
            None if cell.diameter() < 16.0 * cluster => {
                let (k, res, _) = tracker.newton(cell.center(), cell.count)?;
                if !cell.contains(k) || res > cfg.polish_tol {
                    return Err(LocatorError::UnresolvedCluster {
                        re: cell.re,
                        im: cell.im,
                        count: cell.count,
                    });
                }
                found.push(Eigenvalue {
                    k,
                    multiplicity: cell.count,
                    residual: res,
                    energy: k * k,
                });
            }
            None => {
                return Err(LocatorError::BoundaryZeroSuspected {
                    re: cell.re,
                    im: cell.im,
                });
            }
        }
    }
    let total: usize = found.iter().map(|e| e.multiplicity).sum();
    if total != root.count {
        return Err(LocatorError::UnresolvedCluster {
            re: root.re,
            im: root.im,
            count: root.count,
        });
    }
    sort_eigenvalues(&mut found, scale);
    Ok(EigenvalueSet {
        eigenvalues: found,
        total_count: total,
        region: SearchRegion {
            radius: r_used,
            delta: d_used,
            cluster_radius: cluster,
        },
    })
}

fn split(c: &Cell, jitter: f64) -> (Cell, Cell) {
    let wide = c.re[1] - c.re[0] >= c.im[1] - c.im[0];
    if wide {
        let m = c.re[0] + (SPLIT[0] + jitter) * (c.re[1] - c.re[0]);
        (Cell { re: [c.re[0], m], ..*c }, Cell { re: [m, c.re[1]], ..*c })
    } else {
        let m = c.im[0] + (SPLIT[1] + jitter) * (c.im[1] - c.im[0]);
        (Cell { im: [c.im[0], m], ..*c }, Cell { im: [m, c.im[1]], ..*c })
    }
}

fn sort_eigenvalues(v: &mut [Eigenvalue], scale: f64) {
    let q = 1e-9 * (1.0 + scale);
    v.sort_by(|a, b| {
        let ia = (a.k.im / q).round();
        let ib = (b.k.im / q).round();
        ib.total_cmp(&ia).then(a.k.re.total_cmp(&b.k.re))
    });
}

fn wronskian_target(j: &Jost) -> impl Fn(C64) -> Result<(C64, f64), JostError> + '_ {
    move |k| j.wronskian(k).map(|e| (e.w, e.err))
}

/// Winding number of w over a contour in {Im k > 0}.
pub fn count_zeros(q: &PotentialSpec, contour: &Contour, cfg: &LocatorConfig) -> Result<ZeroCount, LocatorError> {
    let j = Jost::new(q, cfg.jost);
    let f = wronskian_target(&j);
    let len: f64 = contour.edges.iter().map(|e| e.length()).sum();
    Tracker::new(&f, cfg.contour_guard, len / 64.0).count(contour)
}

pub fn locate_eigenvalues(q: &PotentialSpec, cfg: &LocatorConfig) -> Result<EigenvalueSet, LocatorError> {
    let n = q.norms();
    let j = Jost::new(q, cfg.jost);
    let f = wronskian_target(&j);
    locate_zeros(&f, n.r_c, cfg)
}

/// ∏ (k − k_j)/(k − k̄_j) with multiplicities.
pub fn blaschke_value(set: &EigenvalueSet, k: C64) -> C64 {
    let mut b = C64::new(1.0, 0.0);
    for e in &set.eigenvalues {
        let f = (k - e.k) / (k - e.k.conj());
        for _ in 0..e.multiplicity {
            b *= f;
        }
    }
    b
}

/// B_n = 2 Σ m_j Im k_j^{n+1}.
pub fn blaschke_coeffs(set: &EigenvalueSet, n_max: usize, r_c: f64) -> BlaschkeCoeffs {
    let mut b = vec![0.0; n_max + 1];
    for e in &set.eigenvalues {
        let mut p = e.k;
        for bn in b.iter_mut() {
            *bn += 2.0 * e.multiplicity as f64 * p.im;
            p *= e.k;
        }
    }
    BlaschkeCoeffs { b, r_c, n_max }
}

pub fn existence_criterion(n: &Norms) -> Existence {
    if n.rouche_a < n.q0.re {
        Existence::NoEigenvalues
    } else if n.rouche_a < -n.q0.re {
        Existence::ExactlyOneSimple
    } else {
        Existence::Inconclusive
    }
}
