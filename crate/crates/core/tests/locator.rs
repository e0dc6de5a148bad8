mod common;

use common::*;
use spectra_trace::locator::{
    blaschke_coeffs, blaschke_value, count_zeros, existence_criterion, locate_eigenvalues, Contour, Existence,
    LocatorConfig,
};
use spectra_trace::PotentialSpec;

#[test]
fn real_well_matches_imaginary_axis_oracle() {
    for (v, a, b) in [(-9.0, 0.0, 1.0), (-4.0, 0.0, 1.0), (-20.0, -0.3, 0.5)] {
        let q = PotentialSpec::boxed(c(v, 0.0), a, b);
        let oracle = box_bound_states(v, a, b);
        let set = locate_eigenvalues(&q, &LocatorConfig::default()).unwrap();
        assert_eq!(set.total_count, oracle.len(), "V = {v}");
        for (e, kappa) in set.eigenvalues.iter().zip(&oracle) {
            assert!((e.k - c(0.0, *kappa)).norm() < 1e-8, "{} vs {kappa}", e.k);
            assert_eq!(e.multiplicity, 1);
        }
    }
}

#[test]
fn half_disk_count_matches_oracle() {
    let q = PotentialSpec::boxed(c(-9.0, 0.0), 0.0, 1.0);
    let z = count_zeros(&q, &Contour::half_disk(4.5, 1e-6), &LocatorConfig::default()).unwrap();
    assert_eq!(z.winding, box_bound_states(-9.0, 0.0, 1.0).len());
}

#[test]
fn enclosure_annulus_is_zero_free() {
    for (v, a, b) in box_fixtures() {
        let q = PotentialSpec::boxed(v, a, b);
        let rc = q.norms().r_c;
        let cfg = LocatorConfig::default();
        let d = 1e-6 * (1.0 + rc);
        let big = count_zeros(&q, &Contour::half_disk(2.0 * rc.max(0.5), d), &cfg).unwrap();
        let small = count_zeros(&q, &Contour::half_disk(1.2 * rc.max(0.5), d), &cfg).unwrap();
        assert_eq!(big.winding, small.winding, "{v}");
    }
}

#[test]
fn paper_example_criterion() {
    let pi3 = std::f64::consts::FRAC_PI_3;
    let cfg = LocatorConfig::default();
    // Re q0 = +5 for both e^{±iπ/3}
    for sign in [1.0, -1.0] {
        let q = PotentialSpec::paper_power(c(pi3.cos(), sign * pi3.sin()), 0.1);
        assert_eq!(existence_criterion(&q.norms()), Existence::NoEigenvalues);
        assert_eq!(locate_eigenvalues(&q, &cfg).unwrap().total_count, 0);
    }
    // Re(−q0) = 5 needs the opposite real part
    let one = PotentialSpec::paper_power(c(-pi3.cos(), pi3.sin()), 0.1);
    assert_eq!(existence_criterion(&one.norms()), Existence::ExactlyOneSimple);
    let s = locate_eigenvalues(&one, &cfg).unwrap();
    assert_eq!(s.total_count, 1);
    assert_eq!(s.eigenvalues[0].multiplicity, 1);
    assert!(s.eigenvalues[0].k.norm() <= one.norms().r_c);
}

#[test]
fn real_potentials_have_imaginary_eigenvalues() {
    for amp in [-6.0, -3.0] {
        let q = bump(c(amp, 0.0), 48);
        let s = locate_eigenvalues(&q, &LocatorConfig::default()).unwrap();
        for e in &s.eigenvalues {
            assert!(e.k.re.abs() <= 1e-8, "{}", e.k);
        }
    }
    let q = PotentialSpec::grid(
        vec![-1.0, 0.0, 0.3, 1.0],
        vec![c(0.0, 0.0), c(-8.0, 0.0), c(-5.0, 0.0), c(0.0, 0.0)],
    );
    let s = locate_eigenvalues(&q, &LocatorConfig::default()).unwrap();
    assert!(s.total_count >= 1);
    for e in &s.eigenvalues {
        assert!(e.k.re.abs() <= 1e-8, "{}", e.k);
    }
}

#[test]
fn blaschke_modulus_and_series() {
    let q = PotentialSpec::boxed(c(-6.0, 3.0), -0.5, 0.7);
    let s = locate_eigenvalues(&q, &LocatorConfig::default()).unwrap();
    assert!(s.total_count >= 1);
    let rc = q.norms().r_c;
    let mut rng = 0x2545F4914F6CDD1Du64;
    let mut next = || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        (rng >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..1000 {
        let k = c(20.0 * (next() - 0.5), 10.0 * next() + 1e-9);
        assert!(blaschke_value(&s, k).norm() <= 1.0 + 1e-14);
    }
    let b = blaschke_coeffs(&s, 2, rc);
    assert!(b.b[0] >= 0.0);
    for n in 1..=2 {
        assert!(b.b[n].abs() <= std::f64::consts::PI * (n as f64 + 1.0) * rc.powi(n as i32) * b.b[0]);
    }
    for th in [0.3, 1.2, 2.5] {
        let k = num_complex::Complex64::from_polar(3.0 * rc, th);
        let lhs =
            blaschke_value(&s, k).ln() + I * b.b[0] / k + I * b.b[1] / (2.0 * k * k) + I * b.b[2] / (3.0 * k * k * k);
        assert!(
            lhs.norm() <= 2.0 * s.total_count as f64 * (rc / k.norm()).powi(4),
            "{}",
            lhs.norm()
        );
    }
}

#[test]
fn sorted_by_decreasing_imaginary_part() {
    let q = PotentialSpec::boxed(c(-20.0, 0.0), -0.3, 0.5);
    let s = locate_eigenvalues(&q, &LocatorConfig::default()).unwrap();
    for w in s.eigenvalues.windows(2) {
        assert!(w[0].k.im >= w[1].k.im);
    }
}

#[test]
fn criterion_soundness_on_random_family() {
    let mut checked = 0;
    for q in random_grids(40, 11) {
        let q = q.scaled(c(0.15, 0.0));
        let crit = existence_criterion(&q.norms());
        if crit == Existence::Inconclusive {
            continue;
        }
        let s = locate_eigenvalues(&q, &LocatorConfig::default()).unwrap();
        match crit {
            Existence::NoEigenvalues => assert_eq!(s.total_count, 0),
            Existence::ExactlyOneSimple => assert_eq!(s.total_count, 1),
            Existence::Inconclusive => unreachable!(),
        }
        checked += 1;
    }
    assert!(checked > 0);
}
