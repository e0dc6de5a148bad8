//! Volterra series for y(u) = e^{−iku} f(u) on one side of the origin.
//!
//! Each iterate solves v'' + 2ik v' = q y_n with zero data at the far end;
//! inside a panel this is two applications of the cumulative integration
//! matrix with the integrating factor e^{2iku}.

use num_complex::Complex64 as C64;

use super::profile::{panels, Panel, Profile};
use super::{JostError, SideValue};
use crate::cheb;
use crate::util::{dkernel, exp_tail, I};

struct PanelWork {
    /// e^{2ik(u_j − u_L)}
    e: Vec<C64>,
    /// D(u_R − u_j)
    d: Vec<C64>,
    /// e^{2ik(u_R − u_j)}
    f: Vec<C64>,
    y: Vec<C64>,
    y_sum: Vec<C64>,
    s_sum: Vec<C64>,
}

fn matvec(r: &[f64], n: usize, x: &[C64], out: &mut [C64]) {
    for i in 0..n {
        let row = &r[i * n..(i + 1) * n];
        let mut acc = C64::new(0.0, 0.0);
        for (a, b) in row.iter().zip(x) {
            acc += b * *a;
        }
        out[i] = acc;
    }
}

// several arrays share one index in the sweeps
#[allow(clippy::needless_range_loop)]
pub(crate) fn evaluate(prof: &Profile, k: C64, max_terms: usize) -> Result<SideValue, JostError> {
    if prof.is_empty() {
        return Ok(SideValue::free(k));
    }
    let ps: Vec<Panel> = panels(prof, k);
    let two_ik = 2.0 * I * k;
    let mut work: Vec<PanelWork> = ps
        .iter()
        .map(|p| {
            let n = p.p + 1;
            PanelWork {
                e: p.u.iter().map(|u| (two_ik * (u - p.ul)).exp()).collect(),
                d: p.u.iter().map(|u| dkernel(k, p.ur - u)).collect(),
                f: p.u.iter().map(|u| (two_ik * (p.ur - u)).exp()).collect(),
                y: vec![C64::new(1.0, 0.0); n],
                y_sum: vec![C64::new(0.0, 0.0); n],
                s_sum: vec![C64::new(0.0, 0.0); n],
            }
        })
        .collect();

    let sigma = if k.norm() > 0.0 {
        prof.w1.min(prof.l1 / k.norm())
    } else {
        prof.w1
    };
    let mut y_tot = C64::new(1.0, 0.0);
    let mut yp_tot = C64::new(0.0, 0.0);
    let mut mag = 1.0;
    let mut terms = 0;
    let mut tail_y;
    let mut tail_yp;
    let mut scratch_a = vec![C64::new(0.0, 0.0); 25];
    let mut scratch_b = vec![C64::new(0.0, 0.0); 25];
    let mut s_loc = vec![C64::new(0.0, 0.0); 25];
    loop {
        let mut carry_y = C64::new(0.0, 0.0);
        let mut carry_s = C64::new(0.0, 0.0);
        let mut it_max: f64 = 0.0;
        for (p, w) in ps.iter().zip(work.iter_mut()).rev() {
            let n = p.p + 1;
            let rule = cheb::rule(p.p);
            for j in 0..n {
                scratch_a[j] = w.e[j] * p.qjac[j] * w.y[j];
            }
            matvec(&rule.rint, n, &scratch_a[..n], &mut scratch_b[..n]);
            for j in 0..n {
                s_loc[j] = -scratch_b[j] * p.half_h / w.e[j];
                scratch_a[j] = s_loc[j] * p.jac[j];
            }
            matvec(&rule.rint, n, &scratch_a[..n], &mut scratch_b[..n]);
            for j in 0..n {
                let v = -scratch_b[j] * p.half_h;
                let ynew = v + carry_y - carry_s * w.d[j];
                let snew = s_loc[j] + carry_s * w.f[j];
                w.y[j] = ynew;
                w.y_sum[j] += ynew;
                w.s_sum[j] += snew;
                it_max = it_max.max(ynew.norm());
                s_loc[j] = snew;
            }
            carry_y = w.y[p.p];
            carry_s = s_loc[p.p];
        }
        y_tot += carry_y;
        yp_tot += carry_s;
        mag += it_max;
        terms += 1;
        tail_y = exp_tail(sigma, terms);
        tail_yp = prof.l1 * exp_tail(sigma, terms.saturating_sub(1));
        if !(y_tot.re.is_finite() && y_tot.im.is_finite()) {
            return Err(JostError::NonFinite { k });
        }
        let done_y = tail_y <= 1e-16 * y_tot.norm().max(1.0);
        let done_yp = tail_yp <= 1e-16 * yp_tot.norm().max(1.0).max(k.norm());
        if (done_y && done_yp) || it_max == 0.0 {
            break;
        }
        if terms >= max_terms {
            return Err(JostError::ToleranceNotReached {
                k,
                reached: tail_y,
                terms,
            });
        }
    }

    // resolution of the summed solution and ∫ q y
    let mut quad = 0.0;
    let mut int_qy = C64::new(0.0, 0.0);
    let mut coef = vec![C64::new(0.0, 0.0); 25];
    for (p, w) in ps.iter().zip(work.iter()) {
        let n = p.p + 1;
        let rule = cheb::rule(p.p);
        let ytot: Vec<C64> = w.y_sum.iter().map(|v| v + 1.0).collect();
        matvec(&rule.coef, n, &ytot, &mut coef[..n]);
        quad += coef[n - 1].norm() + coef[n - 2].norm();
        matvec(&rule.coef, n, &w.s_sum, &mut coef[..n]);
        quad += (coef[n - 1].norm() + coef[n - 2].norm()) * (p.ur - p.ul);
        let wts = rule.weights();
        for j in 0..n {
            int_qy += p.qjac[j] * ytot[j] * (wts[j] * p.half_h);
        }
    }

    // free stretch between the origin and the first segment
    let u0 = prof.start();
    let (y0, yp0) = if u0 > 0.0 {
        (y_tot - yp_tot * dkernel(k, u0), yp_tot * (2.0 * I * k * u0).exp())
    } else {
        (y_tot, yp_tot)
    };
    let round = 8.0 * f64::EPSILON * mag;
    let err_y = tail_y + quad + round;
    let err_yp = tail_yp + quad * (1.0 + k.norm()) + round * (1.0 + prof.l1);
    Ok(SideValue {
        f: y0,
        fp: I * k * y0 + yp0,
        err_f: err_y,
        err_fp: err_yp + k.norm() * err_y,
        y: y0,
        yp: yp0,
        int_qy,
        terms,
        sigma,
    })
}
