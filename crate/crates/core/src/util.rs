use num_complex::Complex64 as C64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// e^z − 1 without cancellation for small |z|.
pub fn expm1(z: C64) -> C64 {
    let (x, y) = (z.re, z.im);
    let s = (0.5 * y).sin();
    C64::new(x.exp_m1() * y.cos() - 2.0 * s * s, x.exp() * y.sin())
}

/// (e^{2iks} − 1)/(2ik), with the k → 0 limit s.
pub fn dkernel(k: C64, s: f64) -> C64 {
    if k == C64::new(0.0, 0.0) {
        return C64::new(s, 0.0);
    }
    let z = 2.0 * I * k * s;
    if z.norm() < 1e-8 {
        return C64::new(s, 0.0) * (1.0 + z / 2.0);
    }
    expm1(z) / (2.0 * I * k)
}

/// sin(z)/z, smooth through 0.
pub fn sinc(z: C64) -> C64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Σ_{m>n} s^m/m! for s ≥ 0.
pub fn exp_tail(s: f64, n: usize) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let mut term = 1.0;
    for m in 1..=n + 1 {
        term *= s / m as f64;
    }
    let ratio = s / (n as f64 + 2.0);
    if ratio < 1.0 {
        term / (1.0 - ratio)
    } else {
        let mut partial = 0.0;
        let mut t = 1.0;
        for m in 0..=n {
            if m > 0 {
                t *= s / m as f64;
            }
            partial += t;
        }
        (s.exp() - partial).max(term)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm1_small_and_large() {
        let z = c(1e-12, -2e-12);
        assert!((expm1(z) - z).norm() < 1e-23);
        let z = c(0.3, 2.0);
        assert!((expm1(z) - (z.exp() - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_limits() {
        assert_eq!(dkernel(c(0.0, 0.0), 0.7), c(0.7, 0.0));
        let k = c(1e-10, 0.0);
        assert!((dkernel(k, 2.0) - c(2.0, 0.0)).norm() < 1e-9);
        let k = c(1.0, 0.5);
        let want = ((2.0 * I * k * 0.3).exp() - 1.0) / (2.0 * I * k);
        assert!((dkernel(k, 0.3) - want).norm() < 1e-15);
    }

    #[test]
    fn tail_of_exponential_series() {
        let s: f64 = 2.0;
        let mut partial = 0.0;
        let mut t = 1.0;
        for m in 0..=5 {
            if m > 0 {
                t *= s / m as f64;
            }
            partial += t;
        }
        let exact = s.exp() - partial;
        let b = exp_tail(s, 5);
        assert!(b >= exact && b < 1.5 * exact);
        assert_eq!(exp_tail(0.0, 3), 0.0);
    }
}
