//! Adaptive Gauss–Kronrod (10/21) quadrature for vector-valued integrands.
//!
//! Every component shares the node set, so one evaluation of an expensive
//! integrand (a pair of Jost evaluations) feeds all of them.

use rayon::prelude::*;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525452442,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ...
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: Vec<f64>,
    /// Per-component sum of |Kronrod − Gauss| over the final partition.
    pub err: Vec<f64>,
    pub intervals: usize,
    pub converged: bool,
}

struct Piece {
    a: f64,
    b: f64,
    val: Vec<f64>,
    err: Vec<f64>,
}

impl Piece {
    fn worst(&self) -> f64 {
        self.err.iter().cloned().fold(0.0, f64::max)
    }
}

fn nodes(a: f64, b: f64) -> [f64; 21] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut x = [0.0; 21];
    for i in 0..10 {
        x[2 * i] = c - h * XGK[i];
        x[2 * i + 1] = c + h * XGK[i];
    }
    x[20] = c;
    x
}

fn rule(a: f64, b: f64, vals: &[Vec<f64>]) -> Piece {
    let h = 0.5 * (b - a);
    let dim = vals[0].len();
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    for d in 0..dim {
        let mut sk = WGK[10] * vals[20][d];
        let mut sg = 0.0;
        for i in 0..10 {
            let pair = vals[2 * i][d] + vals[2 * i + 1][d];
            sk += WGK[i] * pair;
            if i % 2 == 1 {
                sg += WG[i / 2] * pair;
            }
        }
        k[d] = sk * h;
        g[d] = sg * h;
    }
    let err = k.iter().zip(&g).map(|(a, b)| (a - b).abs()).collect();
    Piece { a, b, val: k, err }
}

fn eval_piece<F, E>(f: &F, a: f64, b: f64, parallel: bool) -> Result<Piece, E>
where
    F: Fn(f64) -> Result<Vec<f64>, E> + Sync + ?Sized,
    E: Send,
{
    let x = nodes(a, b);
    let vals: Vec<Vec<f64>> = if parallel {
        x.par_iter().map(|&t| f(t)).collect::<Result<_, E>>()?
    } else {
        x.iter().map(|&t| f(t)).collect::<Result<_, E>>()?
    };
    Ok(rule(a, b, &vals))
}

/// Integrates `f` over [a, b] until the summed error estimate of every
/// component is below `tol` or `max_intervals` is reached.
pub fn integrate<F, E>(f: &F, a: f64, b: f64, tol: f64, max_intervals: usize, parallel: bool) -> Result<QuadResult, E>
where
    F: Fn(f64) -> Result<Vec<f64>, E> + Sync + ?Sized,
    E: Send,
{
    let first = eval_piece(f, a, b, parallel)?;
    let dim = first.val.len();
    let mut pieces = vec![first];
    let total_err = |ps: &[Piece]| -> f64 {
        (0..dim)
            .map(|d| ps.iter().map(|p| p.err[d]).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let mut converged = true;
    while total_err(&pieces) > tol {
        if pieces.len() >= max_intervals {
            converged = false;
            break;
        }
        let (idx, _) = pieces.iter().enumerate().fold(
            (0, -1.0),
            |acc, (i, p)| {
                if p.worst() > acc.1 {
                    (i, p.worst())
                } else {
                    acc
                }
            },
        );
        let p = pieces.swap_remove(idx);
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            converged = false;
            pieces.push(p);
            break;
        }
        pieces.push(eval_piece(f, p.a, m, parallel)?);
        pieces.push(eval_piece(f, m, p.b, parallel)?);
    }
    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    for p in &pieces {
        for d in 0..dim {
            value[d] += p.val[d];
            err[d] += p.err[d];
        }
    }
    Ok(QuadResult {
        value,
        err,
        intervals: pieces.len(),
        converged,
    })
}
