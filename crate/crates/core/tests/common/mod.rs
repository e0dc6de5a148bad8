//! Closed-form oracles and fixture families shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra_trace::PotentialSpec;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

fn sin_over(kappa: C64, len: f64) -> C64 {
    let z = kappa * len;
    if z.norm() < 1e-8 {
        C64::new(len, 0.0)
    } else {
        z.sin() / kappa
    }
}

/// Move (f, f') from x to x + len through the constant potential v.
fn carry(v: C64, k: C64, len: f64, f: C64, fp: C64, kappa_sign: f64) -> (C64, C64) {
    let kappa = (k * k - v).sqrt() * kappa_sign;
    let cs = (kappa * len).cos();
    let sn = sin_over(kappa, len);
    (cs * f + sn * fp, -kappa * kappa * sn * f + cs * fp)
}

/// f₊(0,k), f₊′(0,k) for V on [a, b], by matching e^{ikx} at b.
pub fn box_plus_signed(v: C64, a: f64, b: f64, k: C64, s: f64) -> (C64, C64) {
    if b <= 0.0 {
        return (C64::new(1.0, 0.0), I * k);
    }
    let e = (I * k * b).exp();
    let (mut f, mut fp) = (e, I * k * e);
    let lo = a.max(0.0);
    (f, fp) = carry(v, k, -(b - lo), f, fp, s);
    if lo > 0.0 {
        (f, fp) = carry(C64::new(0.0, 0.0), k, -lo, f, fp, s);
    }
    (f, fp)
}

pub fn box_plus(v: C64, a: f64, b: f64, k: C64) -> (C64, C64) {
    box_plus_signed(v, a, b, k, 1.0)
}

/// f₋(0,k), f₋′(0,k), matching e^{−ikx} at a.
pub fn box_minus(v: C64, a: f64, b: f64, k: C64) -> (C64, C64) {
    let (f, fp) = box_plus(v, -b, -a, k);
    (f, -fp)
}

pub fn box_wronskian(v: C64, a: f64, b: f64, k: C64) -> C64 {
    let (fp_, fpp) = box_plus(v, a, b, k);
    let (fm, fmp) = box_minus(v, a, b, k);
    fm * fpp - fmp * fp_
}

/// Roots of a real function on (lo, hi] by dense scan and bisection.
pub fn scan_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let h = (hi - lo) / n as f64;
    let mut xa = lo;
    let mut fa = f(xa);
    for i in 1..=n {
        let xb = lo + h * i as f64;
        let fb = f(xb);
        if fa == 0.0 {
            roots.push(xa);
        } else if fa * fb < 0.0 {
            let (mut l, mut r, mut fl) = (xa, xb, fa);
            for _ in 0..200 {
                let m = 0.5 * (l + r);
                if m <= l || m >= r {
                    break;
                }
                let fm = f(m);
                if fm * fl <= 0.0 {
                    r = m;
                } else {
                    l = m;
                    fl = fm;
                }
            }
            roots.push(0.5 * (l + r));
        }
        xa = xb;
        fa = fb;
    }
    roots
}

/// Bound-state momenta iκ of a real box, largest κ first.
pub fn box_bound_states(v: f64, a: f64, b: f64) -> Vec<f64> {
    let rc = v.abs() * (b - a) / 2.0;
    let mut r = scan_roots(|x| box_wronskian(c(v, 0.0), a, b, c(0.0, x)).re, 1e-9, rc + 1e-9, 20000);
    r.reverse();
    r
}

/// A e⁴ exp(−1/(x(1−x))) on [0,1], sampled on n equal segments.
pub fn bump(amp: C64, n: usize) -> PotentialSpec {
    let xs: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let qs = xs
        .iter()
        .map(|&x| {
            if x <= 0.0 || x >= 1.0 {
                C64::new(0.0, 0.0)
            } else {
                amp * (4.0 - 1.0 / (x * (1.0 - x))).exp()
            }
        })
        .collect();
    PotentialSpec::grid(xs, qs)
}

/// Continuous piecewise-linear complex potentials vanishing at both ends.
pub fn random_grids(count: usize, seed: u64) -> Vec<PotentialSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(0.5..2.0);
            let x0 = rng.gen_range(-1.0..0.5);
            let inner = rng.gen_range(3..=8);
            let mut xs: Vec<f64> = (0..inner).map(|_| rng.gen_range(0.0..1.0)).collect();
            xs.push(0.0);
            xs.push(1.0);
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let n = xs.len();
            let xs: Vec<f64> = xs.iter().map(|t| x0 + len * t).collect();
            let qs = (0..n)
                .map(|i| {
                    if i == 0 || i + 1 == n {
                        C64::new(0.0, 0.0)
                    } else {
                        C64::from_polar(
                            rng.gen_range(0.0..6.0),
                            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                        )
                    }
                })
                .collect();
            PotentialSpec::grid(xs, qs)
        })
        .collect()
}

/// Box fixtures with real and complex heights.
pub fn box_fixtures() -> Vec<(C64, f64, f64)> {
    vec![
        (c(-9.0, 0.0), 0.0, 1.0),
        (c(-4.0, 0.0), 0.0, 1.0),
        (c(3.0, -4.0), 0.0, 2.0),
        (c(0.0, 2.0), 0.0, 1.0),
        (c(-6.0, 3.0), -0.5, 0.7),
        (c(0.1, 0.0), 0.0, 1.0),
        (c(-2.0, -5.0), 0.2, 1.4),
    ]
}
