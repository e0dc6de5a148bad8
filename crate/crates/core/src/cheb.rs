//! Chebyshev–Lobatto panels: nodes, right-cumulative integration and
//! value-to-coefficient transforms on [-1, 1].

use std::sync::OnceLock;

/// Supported panel degrees, cheapest first.
pub const DEGREES: [usize; 4] = [8, 12, 16, 24];

/// Largest panel "rate" |k|·h (plus local wavenumber) each degree resolves
/// to roughly unit roundoff.
pub const RATE_LIMITS: [f64; 4] = [0.075, 0.48, 1.36, 4.0];

pub struct ChebRule {
    pub p: usize,
    /// x_j = cos(jπ/p); x_0 = 1 is the right end, x_p = -1 the left end.
    pub nodes: Vec<f64>,
    /// Row-major (p+1)², (R f)_i = ∫_{x_i}^{1} f.
    pub rint: Vec<f64>,
    /// Row-major (p+1)², c = C f gives the Chebyshev coefficients.
    pub coef: Vec<f64>,
}

impl ChebRule {
    fn new(p: usize) -> Self {
        let n = p + 1;
        let pf = p as f64;
        let nodes: Vec<f64> = (0..n).map(|j| (std::f64::consts::PI * j as f64 / pf).cos()).collect();
        let mut coef = vec![0.0; n * n];
        for m in 0..n {
            for j in 0..n {
                let mut v = (std::f64::consts::PI * (m * j) as f64 / pf).cos() * 2.0 / pf;
                if j == 0 || j == p {
                    v *= 0.5;
                }
                if m == 0 || m == p {
                    v *= 0.5;
                }
                coef[m * n + j] = v;
            }
        }
        let mut rint = vec![0.0; n * n];
        for j in 0..n {
            let c: Vec<f64> = (0..n).map(|m| coef[m * n + j]).collect();
            let get = |m: usize| if m < n { c[m] } else { 0.0 };
            // antiderivative coefficients F_1..F_{p+1}
            let mut f = vec![0.0; n + 1];
            f[1] = get(0) - get(2) / 2.0;
            for (m, fm) in f.iter_mut().enumerate().skip(2) {
                *fm = (get(m - 1) - get(m + 1)) / (2.0 * m as f64);
            }
            for i in 0..n {
                let mut s = 0.0;
                for (m, fm) in f.iter().enumerate().skip(1) {
                    let tm = (std::f64::consts::PI * (m * i) as f64 / pf).cos();
                    s += fm * (1.0 - tm);
                }
                rint[i * n + j] = s;
            }
        }
        ChebRule { p, nodes, rint, coef }
    }

    pub fn points(&self) -> usize {
        self.p + 1
    }

    /// Clenshaw–Curtis weights for ∫_{-1}^{1}: the last row of R.
    pub fn weights(&self) -> &[f64] {
        let n = self.points();
        &self.rint[self.p * n..]
    }
}

pub fn rule(p: usize) -> &'static ChebRule {
    static RULES: OnceLock<Vec<ChebRule>> = OnceLock::new();
    let rules = RULES.get_or_init(|| DEGREES.iter().map(|&p| ChebRule::new(p)).collect());
    rules.iter().find(|r| r.p == p).expect("unsupported Chebyshev degree")
}

/// Degree index for a panel of the given rate, or None if it must be split.
pub fn degree_for_rate(z: f64) -> Option<usize> {
    RATE_LIMITS.iter().position(|&lim| z <= lim).map(|i| DEGREES[i])
}
