//! Best-of-N accuracy from the ROC curve.
//!
//! Conditioned on `p` correct draws among `N`, Best-of-N is right when the
//! best positive outscores the best of the `k = N - p` negatives:
//!
//! ```text
//! H(k, p) = k ∫ (1 - (1 - T(F))^p) (1 - F)^(k-1) dF      (k > 0),  H(0, p) = 1
//! ACC(N)  = E_{p ~ Bin(N, pi)} H(N - p, p)
//!         = 1 - (1 - pi) N ∫ (1 - pi T(F) - (1 - pi) F)^(N-1) dF
//! ```
//!
//! On a piecewise-linear curve every integrand is a polynomial on each
//! segment, so both forms are integrated exactly rather than by quadrature.

use crate::error::{check_unit, Error, Result};
use crate::exec::Execution;
use crate::rejection::{self, Limit};
use crate::roc::{CurveKind, RocCurve, RocPoint};

/// Largest N for which the binomial-sum form is evaluated as a cross-check.
pub const BINOMIAL_CHECK_MAX_N: u64 = 30;
/// Agreement required between the two representations.
pub const REPRESENTATION_TOL: f64 = 1e-8;

/// `ln(i!)` for `i = 0..=n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

/// `e * ln(x)` with the convention `0^0 = 1`.
fn ln_pow(x: f64, e: usize) -> f64 {
    if e == 0 {
        0.0
    } else {
        e as f64 * x.ln()
    }
}

/// `∫_0^1 ((1-s) u0 + s u1)^p ((1-s) v0 + s v1)^m ds` for non-negative
/// endpoint values, via the Bernstein expansion of both factors. Every term
/// is non-negative, so there is no cancellation.
fn bernstein_product_integral(u: (f64, f64), v: (f64, f64), p: usize, m: usize, lnf: &[f64]) -> f64 {
    let n = p + m;
    let ln_choose = |a: usize, b: usize| lnf[a] - lnf[b] - lnf[a - b];
    let mut sum = 0.0;
    for i in 0..=p {
        let lu = ln_choose(p, i) + ln_pow(u.0, p - i) + ln_pow(u.1, i);
        if lu == f64::NEG_INFINITY {
            continue;
        }
        for j in 0..=m {
            let lv = ln_choose(m, j) + ln_pow(v.0, m - j) + ln_pow(v.1, j);
            sum += (lu + lv - ln_choose(n, i + j)).exp();
        }
    }
    sum / (n + 1) as f64
}

/// `H(k, p)`: probability that the best of `p` positive scores beats the best
/// of `k` negative scores.
pub fn h_integral(curve: &RocCurve, k: usize, p: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if p == 0 {
        return 0.0;
    }
    let lnf = ln_factorials(p + k);
    let mut miss = 0.0;
    for (a, b) in curve.segments() {
        let width = b.fpr - a.fpr;
        if width == 0.0 {
            continue;
        }
        miss += width
            * bernstein_product_integral(
                (1.0 - a.tpr, 1.0 - b.tpr),
                (1.0 - a.fpr, 1.0 - b.fpr),
                p,
                k - 1,
                &lnf,
            );
    }
    (1.0 - k as f64 * miss).clamp(0.0, 1.0)
}

/// Binomial-sum form `E_{p ~ Bin(N, pi)} H(N - p, p)` with log-domain weights.
pub fn bon_accuracy_binomial(curve: &RocCurve, pi: f64, n: usize) -> Result<f64> {
    check_unit("pi", pi)?;
    if n == 0 {
        return Err(Error::Config("N must be at least 1".into()));
    }
    let lnf = ln_factorials(n);
    let mut acc = 0.0;
    for p in 0..=n {
        let lw = lnf[n] - lnf[p] - lnf[n - p] + ln_pow(pi, p) + ln_pow(1.0 - pi, n - p);
        if lw == f64::NEG_INFINITY {
            continue;
        }
        acc += lw.exp() * h_integral(curve, n - p, p);
    }
    Ok(acc.clamp(0.0, 1.0))
}

/// `∫ g^(N-1) dF` over one segment on which `g` is affine with endpoint
/// values `g0`, `g1`, scaled by `N`, i.e. `width * Σ_{j<N} g_lo^j g_hi^(N-1-j)`.
fn segment_power_integral(width: f64, g0: f64, g1: f64, n: usize) -> f64 {
    let (lo, hi) = if g0 <= g1 { (g0, g1) } else { (g1, g0) };
    if hi <= 0.0 {
        return 0.0;
    }
    let delta = (hi - lo) / hi;
    let geometric = if delta == 0.0 {
        n as f64
    } else {
        -(n as f64 * (-delta).ln_1p()).exp_m1() / delta
    };
    width * ((n - 1) as f64 * hi.ln()).exp() * geometric
}

/// Single-integral form `1 - (1 - pi) N ∫ (1 - q(F))^(N-1) dF`.
pub fn bon_accuracy_integral(curve: &RocCurve, pi: f64, n: usize) -> Result<f64> {
    check_unit("pi", pi)?;
    if n == 0 {
        return Err(Error::Config("N must be at least 1".into()));
    }
    if n == 1 {
        return Ok(pi);
    }
    let g = |p: RocPoint| (1.0 - p.fpr) * (1.0 - pi) + pi * (1.0 - p.tpr);
    let total: f64 = curve
        .segments()
        .filter(|(a, b)| b.fpr > a.fpr)
        .map(|(a, b)| segment_power_integral(b.fpr - a.fpr, g(a), g(b), n))
        .sum();
    Ok((1.0 - (1.0 - pi) * total).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BonMethod {
    BinomialSum,
    SingleIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BonPoint {
    pub n: usize,
    pub accuracy: f64,
    pub method: BonMethod,
    /// Binomial-sum value, computed for `N <= 30`.
    pub cross_check: Option<f64>,
}

/// Exact Best-of-N accuracy.
///
/// For small N both representations are evaluated and must agree to
/// [`REPRESENTATION_TOL`].
pub fn bon_accuracy(curve: &RocCurve, pi: f64, n: usize) -> Result<BonPoint> {
    let accuracy = bon_accuracy_integral(curve, pi, n)?;
    let cross_check = if n as u64 <= BINOMIAL_CHECK_MAX_N {
        let b = bon_accuracy_binomial(curve, pi, n)?;
        if (b - accuracy).abs() > REPRESENTATION_TOL {
            return Err(Error::RepresentationMismatch {
                n: n as u64,
                binomial: b,
                integral: accuracy,
            });
        }
        Some(b)
    } else {
        None
    };
    Ok(BonPoint {
        n,
        accuracy,
        method: BonMethod::SingleIntegral,
        cross_check,
    })
}

/// Gain from Best-of-1 to Best-of-2, in closed form from the AUROC.
pub fn bo2_gain(curve: &RocCurve, pi: f64) -> Result<f64> {
    check_unit("pi", pi)?;
    Ok(pi * (pi + 2.0 * (1.0 - pi) * curve.auroc() - 1.0))
}

/// Accuracy as `N -> inf`; identical to the rejection-sampling limit.
pub fn bon_limit(curve: &RocCurve, pi: f64) -> Result<Limit> {
    rejection::limit_accuracy(curve, pi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BonProfile {
    pub pi: f64,
    pub kind: CurveKind,
    pub points: Vec<BonPoint>,
    pub limit: Limit,
}

pub fn bon_profile(curve: &RocCurve, pi: f64, ns: &[usize], exec: Execution) -> Result<BonProfile> {
    check_unit("pi", pi)?;
    if ns.contains(&0) {
        return Err(Error::Config("N must be at least 1".into()));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("N values must be strictly ascending".into()));
    }
    let points = exec
        .map(ns.len(), |i| bon_accuracy(curve, pi, ns[i]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(BonProfile {
        pi,
        kind: curve.kind().clone(),
        points,
        limit: bon_limit(curve, pi)?,
    })
}

/// Rejection sampling and Best-of-N at the same expected number of
/// generator samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub n: usize,
    /// Rejection-sampling accuracy at expected cost `C = N`; `None` when the
    /// curve cannot absorb that much compute.
    pub rejection: Option<f64>,
    pub bon: f64,
}

pub fn compare(curve: &RocCurve, pi: f64, ns: &[usize], exec: Execution) -> Result<Vec<ComparisonRow>> {
    let profile = bon_profile(curve, pi, ns, exec)?;
    profile
        .points
        .iter()
        .map(|p| {
            let rejection = match rejection::accuracy_at_compute(curve, pi, p.n as f64) {
                Ok(a) => Some(a),
                Err(Error::BudgetOutOfRange { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(ComparisonRow {
                n: p.n,
                rejection,
                bon: p.accuracy,
            })
        })
        .collect()
}
