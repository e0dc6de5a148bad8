//! Closed-form propagation through piecewise-constant profiles.

use num_complex::Complex64 as C64;

use super::profile::{Profile, SegKind};
use super::{JostError, SideValue};
use crate::util::{dkernel, sinc, I};

/// Leftward propagation of (y, y') across a constant piece of length `len`.
fn step(v: C64, len: f64, k: C64, y: C64, yp: C64) -> (C64, C64, f64) {
    let kappa = (k * k - v).sqrt();
    let kl = kappa * len;
    let cs = kl.cos();
    let sn = sinc(kl) * len; // sin(κL)/κ
    let ph = (I * k * len).exp();
    let g = yp + I * k * y; // f'/e^{iku} at the right end
    let f_left = cs * y - sn * g;
    let fp_left = kappa * kappa * sn * y + cs * g;
    let ny = ph * f_left;
    let nyp = ph * (fp_left - I * k * f_left);
    // rounding in cos(κL) is ε|κL|; the change of basis costs the ratio of wavenumbers
    let (ak, aq) = (1.0 + k.norm(), 1.0 + kappa.norm());
    let scale = ph.norm() * (cs.norm() + sn.norm() * aq) * (1.0 + kl.norm()) * (ak / aq + aq / ak);
    (ny, nyp, scale)
}

pub(crate) fn evaluate(prof: &Profile, k: C64) -> Result<SideValue, JostError> {
    if prof.is_empty() {
        return Ok(SideValue::free(k));
    }
    let mut y = C64::new(1.0, 0.0);
    let mut yp = C64::new(0.0, 0.0);
    let mut growth = 1.0;
    let mut edge = prof.segs.last().map(|s| s.u1).unwrap_or(0.0);
    for s in prof.segs.iter().rev() {
        if s.u1 < edge {
            let gap = edge - s.u1;
            y -= yp * dkernel(k, gap);
            yp *= (2.0 * I * k * gap).exp();
        }
        let v = match s.kind {
            SegKind::Const(v) => v,
            _ => return Err(JostError::PathUnavailable),
        };
        let (ny, nyp, sc) = step(v, s.u1 - s.u0, k, y, yp);
        growth *= sc.max(1.0);
        y = ny;
        yp = nyp;
        edge = s.u0;
    }
    if edge > 0.0 {
        y -= yp * dkernel(k, edge);
        yp *= (2.0 * I * k * edge).exp();
    }
    if !(y.re.is_finite() && y.im.is_finite() && yp.re.is_finite() && yp.im.is_finite()) {
        return Err(JostError::NonFinite { k });
    }
    let err = 16.0 * f64::EPSILON * growth * (1.0 + y.norm() + yp.norm());
    // ∫ q y from the boundary data: −y'(0) − 2ik(y(0) − 1)
    let int_qy = -yp - 2.0 * I * k * (y - 1.0);
    Ok(SideValue {
        f: y,
        fp: I * k * y + yp,
        err_f: err,
        err_fp: err * (1.0 + k.norm()),
        y,
        yp,
        int_qy,
        terms: 0,
        sigma: 0.0,
    })
}
