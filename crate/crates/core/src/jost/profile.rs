//! One side of a potential as seen from an origin x0, in the local
//! coordinate u = |x − x0| ≥ 0, split into smooth segments and, for a
//! given momentum, into Chebyshev panels.

use num_complex::Complex64 as C64;

use crate::cheb;
use crate::potential::{seg_abs_moments, PotentialSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SegKind {
    Const(C64),
    /// Values at the left and right ends.
    Linear(C64, C64),
    /// c·t·s^{t²−1} with s = dir·(u − us) ≥ 0.
    Power {
        c: C64,
        t: f64,
        us: f64,
        dir: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Segment {
    pub u0: f64,
    pub u1: f64,
    pub kind: SegKind,
}

#[derive(Debug, Clone, Copy)]
enum Phys {
    Const(C64),
    Linear(C64, C64),
    /// Singular end at the left (true) or right (false) of [x0, x1].
    Power {
        c: C64,
        t: f64,
        left: bool,
    },
}

#[derive(Debug, Clone, Copy)]
struct PhysSeg {
    x0: f64,
    x1: f64,
    kind: Phys,
}

fn phys_segments(q: &PotentialSpec) -> Vec<PhysSeg> {
    match q {
        PotentialSpec::Box { height, support } => {
            if height.norm() == 0.0 {
                vec![]
            } else {
                vec![PhysSeg {
                    x0: support[0],
                    x1: support[1],
                    kind: Phys::Const(*height),
                }]
            }
        }
        PotentialSpec::PaperPower { amplitude, t } => {
            if amplitude.norm() == 0.0 {
                vec![]
            } else if *t == 1.0 {
                vec![PhysSeg {
                    x0: 0.0,
                    x1: 1.0,
                    kind: Phys::Const(*amplitude),
                }]
            } else {
                vec![PhysSeg {
                    x0: 0.0,
                    x1: 1.0,
                    kind: Phys::Power {
                        c: *amplitude,
                        t: *t,
                        left: true,
                    },
                }]
            }
        }
        PotentialSpec::Grid { xs, qs } => {
            if qs.iter().all(|v| v.norm() == 0.0) {
                return vec![];
            }
            (0..xs.len() - 1)
                .map(|i| PhysSeg {
                    x0: xs[i],
                    x1: xs[i + 1],
                    kind: if qs[i] == qs[i + 1] {
                        Phys::Const(qs[i])
                    } else {
                        Phys::Linear(qs[i], qs[i + 1])
                    },
                })
                .collect()
        }
        PotentialSpec::Even { half } => {
            let right = phys_segments(half);
            let mut out: Vec<PhysSeg> = right.iter().rev().map(reflect).collect();
            out.extend(right);
            out
        }
    }
}

fn reflect(s: &PhysSeg) -> PhysSeg {
    PhysSeg {
        x0: -s.x1,
        x1: -s.x0,
        kind: match s.kind {
            Phys::Const(v) => Phys::Const(v),
            Phys::Linear(a, b) => Phys::Linear(b, a),
            Phys::Power { c, t, left } => Phys::Power { c, t, left: !left },
        },
    }
}

/// Smooth segments of q on the chosen side of `origin`.
#[derive(Debug, Clone)]
pub(crate) struct Profile {
    pub segs: Vec<Segment>,
    /// ∫ |q| du
    pub l1: f64,
    /// ∫ u |q| du
    pub w1: f64,
}

impl Profile {
    pub fn build(q: &PotentialSpec, origin: f64, right: bool) -> Profile {
        let mut segs = Vec::new();
        for s in phys_segments(q) {
            // map to local u, keeping u increasing
            let (a, b, kind) = if right {
                (s.x0 - origin, s.x1 - origin, s.kind)
            } else {
                let r = reflect(&s);
                (r.x0 + origin, r.x1 + origin, r.kind)
            };
            if b <= 0.0 {
                continue;
            }
            let lo = a.max(0.0);
            let kind = match kind {
                Phys::Const(v) => SegKind::Const(v),
                Phys::Linear(va, vb) => {
                    let va2 = if lo > a {
                        va + (vb - va) * ((lo - a) / (b - a))
                    } else {
                        va
                    };
                    if va2 == vb {
                        SegKind::Const(vb)
                    } else {
                        SegKind::Linear(va2, vb)
                    }
                }
                Phys::Power { c, t, left } => {
                    if left {
                        SegKind::Power { c, t, us: a, dir: 1.0 }
                    } else {
                        SegKind::Power { c, t, us: b, dir: -1.0 }
                    }
                }
            };
            segs.push(Segment { u0: lo, u1: b, kind });
        }
        segs.sort_by(|x, y| x.u0.total_cmp(&y.u0));
        let mut l1 = 0.0;
        let mut w1 = 0.0;
        for s in &segs {
            let (m0, m1) = seg_norms(s);
            l1 += m0;
            w1 += m1;
        }
        Profile { segs, l1, w1 }
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    /// Every segment is constant: the transfer-matrix path applies.
    pub fn piecewise_constant(&self) -> bool {
        self.segs.iter().all(|s| matches!(s.kind, SegKind::Const(_)))
    }

    pub fn start(&self) -> f64 {
        self.segs.first().map(|s| s.u0).unwrap_or(0.0)
    }
}

/// (∫|q| du, ∫u|q| du) over a segment.
fn seg_norms(s: &Segment) -> (f64, f64) {
    let h = s.u1 - s.u0;
    match s.kind {
        SegKind::Const(v) => (v.norm() * h, v.norm() * (s.u1 * s.u1 - s.u0 * s.u0) / 2.0),
        SegKind::Linear(a, b) => seg_abs_moments(a, b, h, s.u0),
        SegKind::Power { c, t, us, dir } => {
            let (s0, s1) = dist_range(s.u0, s.u1, us, dir);
            let t2 = t * t;
            let m0 = c.norm() * (s1.powf(t2) - s0.powf(t2)) / t;
            let m_s = c.norm() * t * (s1.powf(t2 + 1.0) - s0.powf(t2 + 1.0)) / (t2 + 1.0);
            (m0, us * m0 + dir * m_s)
        }
    }
}

fn dist_range(u0: f64, u1: f64, us: f64, dir: f64) -> (f64, f64) {
    let a = (dir * (u0 - us)).max(0.0);
    let b = (dir * (u1 - us)).max(0.0);
    (a.min(b), a.max(b))
}

/// A Chebyshev panel in a parameter τ with u = u(τ) increasing.
#[derive(Debug, Clone)]
pub(crate) struct Panel {
    pub p: usize,
    /// Local coordinate at the nodes, node 0 at the right end.
    pub u: Vec<f64>,
    /// du/dτ
    pub jac: Vec<f64>,
    /// q(u(τ))·du/dτ
    pub qjac: Vec<C64>,
    /// Half the τ-length.
    pub half_h: f64,
    pub ul: f64,
    pub ur: f64,
}

/// Parameterisation of one segment.
#[derive(Clone, Copy)]
enum Map {
    /// u = us + dir·|τ|^α with τ = dir·σ
    Sigma { alpha: f64, us: f64, dir: f64, rho: C64 },
    /// τ = dir·s, u = us + τ, q = c t s^{t²−1}
    Dist { c: C64, t: f64, us: f64 },
}

impl Map {
    fn u(&self, tau: f64) -> f64 {
        match *self {
            Map::Sigma { alpha, us, dir, .. } => us + dir * (dir * tau).max(0.0).powf(alpha),
            Map::Dist { us, .. } => us + tau,
        }
    }

    fn jac(&self, tau: f64) -> f64 {
        match *self {
            Map::Dist { .. } => 1.0,
            Map::Sigma { alpha, dir, .. } => {
                let sg = (dir * tau).max(0.0);
                if alpha == 1.0 {
                    1.0
                } else if sg == 0.0 {
                    if alpha > 1.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    alpha * sg.powf(alpha - 1.0)
                }
            }
        }
    }
}

fn is_small_integer(x: f64) -> bool {
    (0.0..=24.0).contains(&x) && (x - x.round()).abs() < 1e-12
}

/// Panels covering the profile for momentum k, ordered left to right.
pub(crate) fn panels(prof: &Profile, k: C64) -> Vec<Panel> {
    let mut out = Vec::new();
    for seg in &prof.segs {
        match seg.kind {
            SegKind::Const(v) => linear_panels(seg.u0, seg.u1, v, v, k, &mut out),
            SegKind::Linear(a, b) => linear_panels(seg.u0, seg.u1, a, b, k, &mut out),
            SegKind::Power { c, t, us, dir } => power_panels(seg, c, t, us, dir, k, &mut out),
        }
    }
    out
}

fn linear_panels(u0: f64, u1: f64, a: C64, b: C64, k: C64, out: &mut Vec<Panel>) {
    let len = u1 - u0;
    let wav = a.norm().max(b.norm()).sqrt();
    let z = (k.norm() + wav) * len;
    let lim = cheb::RATE_LIMITS[cheb::RATE_LIMITS.len() - 1];
    let n = ((z / lim).max(k.im.max(0.0) * len)).ceil().max(1.0) as usize;
    let h = len / n as f64;
    let p = cheb::degree_for_rate(z / n as f64).unwrap_or(cheb::DEGREES[cheb::DEGREES.len() - 1]);
    let rule = cheb::rule(p);
    for i in 0..n {
        let ul = u0 + h * i as f64;
        let ur = if i + 1 == n { u1 } else { u0 + h * (i + 1) as f64 };
        let mut u = Vec::with_capacity(p + 1);
        let mut qj = Vec::with_capacity(p + 1);
        for &xh in &rule.nodes {
            let uu = ul + (xh + 1.0) * 0.5 * (ur - ul);
            let s = (uu - u0) / len;
            u.push(uu);
            qj.push(a + (b - a) * s);
        }
        out.push(Panel {
            p,
            u,
            jac: vec![1.0; p + 1],
            qjac: qj,
            half_h: 0.5 * (ur - ul),
            ul,
            ur,
        });
    }
}

fn power_panels(seg: &Segment, c: C64, t: f64, us: f64, dir: f64, k: C64, out: &mut Vec<Panel>) {
    let (s0, s1) = dist_range(seg.u0, seg.u1, us, dir);
    if s1 <= s0 {
        return;
    }
    let t2 = t * t;
    let (map, lo, hi, expo, graded) = if t < 1.0 {
        let alpha = 1.0 / t2;
        let beta = alpha - 1.0;
        let map = Map::Sigma {
            alpha,
            us,
            dir,
            rho: c / t,
        };
        (
            map,
            s0.powf(t2),
            s1.powf(t2),
            beta,
            !is_small_integer(beta) || beta > 24.0,
        )
    } else {
        let map = Map::Dist { c, t, us };
        let g = t2 - 1.0;
        (map, s0, s1, g, !is_small_integer(g))
    };
    // breakpoints in the positive distance-like variable (σ or s)
    let mut bps = vec![hi];
    if graded {
        let ratio = if t < 1.0 {
            (1.0 - 2.0 / (expo + 1.0)).max(0.5)
        } else {
            0.5
        };
        let mut v = hi;
        loop {
            let next = v * ratio;
            let negligible = if t < 1.0 {
                // x = σ^α below 1e-18 relative to the segment
                next.powf(1.0 / t2) <= 1e-18 * s1.max(1e-300)
            } else {
                c.norm() * next.powf(t2) / t <= 1e-18 * (c.norm() / t).max(1e-300)
            };
            if next <= lo || negligible {
                break;
            }
            bps.push(next);
            v = next;
        }
    }
    bps.push(lo);
    bps.dedup();
    // convert to τ with u increasing: τ = dir·σ
    let mut taus: Vec<f64> = bps.iter().map(|v| dir * v).collect();
    taus.sort_by(|a, b| a.total_cmp(b));
    taus.dedup();
    for w in taus.windows(2) {
        split_power(&map, w[0], w[1], expo, k, 0, out);
    }
}

#[allow(clippy::too_many_arguments)]
fn split_power(map: &Map, ta: f64, tb: f64, expo: f64, k: C64, depth: usize, out: &mut Vec<Panel>) {
    let ua = map.u(ta);
    let ub = map.u(tb);
    let du = (ub - ua).abs();
    let dt = tb - ta;
    let (va, vb) = (ta.abs().min(tb.abs()), ta.abs().max(tb.abs()));
    let variation = if va > 0.0 { expo.abs() * (vb / va).ln() } else { 0.0 };
    let jmax = map.jac(ta).max(map.jac(tb));
    let coupling = match *map {
        Map::Sigma { rho, .. } => (rho.norm() * jmax).sqrt() * dt,
        Map::Dist { c, t, .. } => {
            let qa = c.norm() * t * va.powf(t * t - 1.0);
            let qb = c.norm() * t * vb.powf(t * t - 1.0);
            qa.max(qb).sqrt() * dt
        }
    };
    // largest local phase rate, not the mean one
    let z = k.norm() * du.max(jmax * dt) + coupling + variation;
    let lim = cheb::RATE_LIMITS[cheb::RATE_LIMITS.len() - 1];
    if (z > lim || k.im.max(0.0) * du > 1.0) && depth < 60 {
        let m = 0.5 * (ta + tb);
        split_power(map, ta, m, expo, k, depth + 1, out);
        split_power(map, m, tb, expo, k, depth + 1, out);
        return;
    }
    let p = cheb::degree_for_rate(z).unwrap_or(cheb::DEGREES[cheb::DEGREES.len() - 1]);
    let rule = cheb::rule(p);
    let mut u = Vec::with_capacity(p + 1);
    let mut jac = Vec::with_capacity(p + 1);
    let mut qjac = Vec::with_capacity(p + 1);
    for &xh in &rule.nodes {
        let tau = ta + (xh + 1.0) * 0.5 * dt;
        u.push(map.u(tau));
        match *map {
            Map::Sigma { rho, .. } => {
                jac.push(map.jac(tau));
                qjac.push(rho);
            }
            Map::Dist { c, t, .. } => {
                let s = tau.abs();
                jac.push(1.0);
                qjac.push(if s > 0.0 {
                    c * t * s.powf(t * t - 1.0)
                } else {
                    C64::new(0.0, 0.0)
                });
            }
        }
    }
    out.push(Panel {
        p,
        half_h: 0.5 * dt,
        ul: ua.min(ub),
        ur: ua.max(ub),
        u,
        jac,
        qjac,
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Weight;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn total_norms(q: &PotentialSpec, origin: f64) -> (f64, f64) {
        let r = Profile::build(q, origin, true);
        let l = Profile::build(q, origin, false);
        (r.l1 + l.l1, r.w1 + l.w1)
    }

    #[test]
    fn profiles_reproduce_norms() {
        let qs = vec![
            PotentialSpec::boxed(c(1.0, 2.0), -0.5, 1.5),
            PotentialSpec::paper_power(c(0.5, -1.0), 0.3),
            PotentialSpec::paper_power(c(0.5, -1.0), 1.7),
            PotentialSpec::grid(
                vec![-1.0, -0.2, 0.4, 1.0],
                vec![c(0.0, 0.0), c(1.0, -1.0), c(-2.0, 0.5), c(0.0, 0.0)],
            ),
            PotentialSpec::paper_power(c(1.0, 1.0), 0.5).even_extension().unwrap(),
        ];
        for q in &qs {
            let (l1, w1) = total_norms(q, 0.0);
            let n = q.norms();
            assert!((l1 - n.l1_norm).abs() < 1e-12 * (1.0 + n.l1_norm), "{q:?}");
            assert!((w1 - n.weighted_norm).abs() < 1e-12 * (1.0 + n.weighted_norm), "{q:?}");
        }
    }

    #[test]
    fn shifted_origin_preserves_mass() {
        let q = PotentialSpec::paper_power(c(1.0, 0.0), 0.5).even_extension().unwrap();
        let (l1, _) = total_norms(&q, -0.3);
        assert!((l1 - q.norms().l1_norm).abs() < 1e-12);
    }

    #[test]
    fn panels_integrate_potential() {
        let qs = vec![
            PotentialSpec::paper_power(c(1.0, 0.5), 0.1),
            PotentialSpec::paper_power(c(1.0, 0.5), 0.5),
            PotentialSpec::paper_power(c(1.0, 0.5), 0.9),
            PotentialSpec::paper_power(c(1.0, 0.5), 1.5),
            PotentialSpec::grid(vec![0.0, 0.3, 1.0], vec![c(1.0, 0.0), c(0.0, 2.0), c(1.0, 1.0)]),
        ];
        for q in &qs {
            for k in [c(0.0, 0.0), c(7.0, 3.0)] {
                let prof = Profile::build(q, 0.0, true);
                let mut s = C64::new(0.0, 0.0);
                for p in panels(&prof, k) {
                    let w = cheb::rule(p.p).weights();
                    for (qj, wj) in p.qjac.iter().zip(w.iter()) {
                        s += qj * wj * p.half_h;
                    }
                }
                let want = q.integrate_moment(Weight::One).unwrap();
                assert!((s - want).norm() < 1e-12 * want.norm(), "{q:?} {s} {want}");
            }
        }
    }
}
