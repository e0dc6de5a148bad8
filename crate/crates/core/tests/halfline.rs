mod common;

use common::*;
use num_complex::Complex64 as C64;
use spectra_trace::halfline::*;
use spectra_trace::jost::{wronskian, Jost, JostConfig};
use spectra_trace::potential::PotentialSpec;
use spectra_trace::traces::TraceConfig;

// f₊(0, iκ) and f₊′(0, iκ) for a well of depth v on [0, 1], up to the factor e^{−κ}
fn well_dirichlet(v: f64, kappa: f64) -> f64 {
    let s = (v - kappa * kappa).sqrt();
    s.cos() + kappa / s * s.sin()
}

fn well_neumann(v: f64, kappa: f64) -> f64 {
    let s = (v - kappa * kappa).sqrt();
    s * s.sin() - kappa * s.cos()
}

fn imag_parts(set: &spectra_trace::locator::EigenvalueSet) -> Vec<f64> {
    let mut v: Vec<f64> = set
        .eigenvalues
        .iter()
        .map(|e| {
            assert!(e.k.re.abs() < 1e-8, "off-axis eigenvalue {}", e.k);
            e.k.im
        })
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

#[test]
fn well_roots_match_closed_forms() {
    let q = PotentialSpec::boxed(c(-9.0, 0.0), 0.0, 1.0);
    let r = halfline_report(&q, &TraceConfig::default()).unwrap();
    let mut d = scan_roots(|k| well_dirichlet(9.0, k), 1e-9, 3.0 - 1e-12, 20000);
    let mut n = scan_roots(|k| well_neumann(9.0, k), 1e-9, 3.0 - 1e-12, 20000);
    d.sort_by(|a, b| b.total_cmp(a));
    n.sort_by(|a, b| b.total_cmp(a));
    let got_d = imag_parts(&r.dirichlet_eigs);
    let got_n = imag_parts(&r.neumann_eigs);
    assert_eq!(got_d.len(), d.len());
    assert_eq!(got_n.len(), n.len());
    for (a, b) in got_d.iter().zip(&d) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
    for (a, b) in got_n.iter().zip(&n) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
    // interlacing along the imaginary axis, Neumann ground state deepest
    let mut all: Vec<(f64, bool)> = got_d
        .iter()
        .map(|&x| (x, false))
        .chain(got_n.iter().map(|&x| (x, true)))
        .collect();
    all.sort_by(|a, b| b.0.total_cmp(&a.0));
    assert!(all[0].1);
    for w in all.windows(2) {
        assert_ne!(w[0].1, w[1].1);
    }
    assert!(r.count_splitting_holds && r.disjoint && r.combined_total.holds && r.combined_disk.holds);
}

#[test]
fn factorization_identity_on_box() {
    let q = PotentialSpec::boxed(c(0.0, 2.0), 0.0, 1.0);
    let k = c(1.0, 1.0);
    let (wd, wn) = halfline_wronskians(&q, k).unwrap();
    let wt = wronskian(&q.even_extension().unwrap(), k).unwrap().w;
    assert!((wt - 2.0 * wd * wn).norm() <= 1e-10 * wt.norm());
    // and against the closed form on [0, 1]
    let (f, fp) = box_plus(c(0.0, 2.0), 0.0, 1.0, k);
    assert!((wd - f).norm() < 1e-12 && (wn - fp).norm() < 1e-12);
}

#[test]
fn factorization_residual_small() {
    for q in [
        PotentialSpec::boxed(c(-9.0, 0.0), 0.0, 1.0),
        PotentialSpec::paper_power(C64::from_polar(1.0, std::f64::consts::PI / 3.0), 0.5),
        bump(c(2.0, -1.0), 48),
    ] {
        let (res, ratio) = factorization_residual(&q, &JostConfig::default()).unwrap();
        assert!(res <= 1e-10, "{res}");
        assert!(ratio <= 1.0, "{ratio}");
    }
}

#[test]
fn even_extension_norms() {
    let q = PotentialSpec::paper_power(c(0.3, 0.4), 0.7);
    let e = q.even_extension().unwrap();
    let (a, b) = (q.norms(), e.norms());
    assert!((b.l1_norm - 2.0 * a.l1_norm).abs() < 1e-12);
    assert!((b.q0 - 2.0 * a.q0).norm() < 1e-12);
    // Jost solutions of the extension at 0 reproduce the half-line data
    let j = Jost::new(&e, JostConfig::default());
    let k = c(0.5, 0.7);
    let (wd, wn) = halfline_wronskians(&q, k).unwrap();
    let p = j.plus(k).unwrap();
    assert!((p.f - wd).norm() < 1e-12 && (p.fp - wn).norm() < 1e-12);
}

#[test]
fn neumann_trace_on_repulsive_bump() {
    // real, no eigenvalues and no real zeros: ν_n = 0
    let q = bump(c(1.0, 0.0), 48);
    let r = halfline_report(&q, &TraceConfig::default()).unwrap();
    assert!(r.neumann_eigs.eigenvalues.is_empty());
    let t = &r.neumann_trace;
    assert!(t.pv_converged, "{:?}", t);
    assert!(t.k0_inferred.abs() < 1e-6, "{:?}", t);
}
