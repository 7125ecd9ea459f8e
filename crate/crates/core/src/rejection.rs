//! Rejection sampling against a thresholded verifier.
//!
//! Operating at false-positive rate F, the sampler keeps drawing until the
//! classifier accepts. The expected number of draws is the inverse of the
//! acceptance probability `q(F) = T(F) pi + F (1 - pi)` and the accuracy of the
//! accepted sample is the classifier's precision `T(F) pi / q(F)`.
//!
//! `q` is non-decreasing along the ROC polyline (strictly so for `0 < pi < 1`),
//! so a budget C maps to a unique point on the polyline. Vertical jumps are
//! traversed like any other segment, which corresponds to randomizing between
//! the two adjacent thresholds.

use crate::error::{check_unit, Error, Result};
use crate::exec::Execution;
use crate::roc::{CurveKind, OriginSlope, RocCurve, RocPoint, Slope};

/// Expected generator samples per accepted output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cost {
    Finite(f64),
    /// The classifier never accepts.
    Infinite,
}

impl Cost {
    fn from_acceptance(q: f64) -> Self {
        if q > 0.0 {
            Cost::Finite(1.0 / q)
        } else {
            Cost::Infinite
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Cost::Finite(c) => Some(c),
            Cost::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }
}

fn acceptance_at(pi: f64, p: RocPoint) -> f64 {
    p.tpr * pi + p.fpr * (1.0 - pi)
}

/// Precision at a point of the polyline, with the degenerate priors
/// short-circuited.
fn precision_at(pi: f64, p: RocPoint) -> Result<f64> {
    if pi == 0.0 {
        return Ok(0.0);
    }
    if pi == 1.0 {
        return Ok(1.0);
    }
    let q = acceptance_at(pi, p);
    if q <= 0.0 {
        return Err(Error::ZeroAcceptance(p.fpr));
    }
    Ok(p.tpr * pi / q)
}

/// Slope of A(C) at a point, given one side's ROC slope.
///
/// A vertical ROC segment is the limit `T' -> inf`, where the value tends to
/// `-(1 - pi) F`: moving up the jump lowers the cost and raises the accuracy.
fn dadc_at(pi: f64, p: RocPoint, slope: Slope) -> f64 {
    if pi == 0.0 || pi == 1.0 {
        return 0.0;
    }
    match slope {
        Slope::Finite(s) => pi * (1.0 - pi) * (p.tpr - p.fpr * s) / (1.0 + pi * s - pi),
        Slope::Vertical => -(1.0 - pi) * p.fpr,
    }
}

/// Probability that the classifier at `fpr` accepts a draw.
pub fn acceptance_probability(curve: &RocCurve, pi: f64, fpr: f64) -> Result<f64> {
    check_unit("pi", pi)?;
    let t = curve.eval(fpr)?;
    Ok(acceptance_at(pi, RocPoint::new(fpr, t)))
}

pub fn compute_cost(curve: &RocCurve, pi: f64, fpr: f64) -> Result<Cost> {
    acceptance_probability(curve, pi, fpr).map(Cost::from_acceptance)
}

/// Accuracy of the accepted sample at false-positive rate `fpr`.
pub fn precision(curve: &RocCurve, pi: f64, fpr: f64) -> Result<f64> {
    check_unit("pi", pi)?;
    let t = curve.eval(fpr)?;
    precision_at(pi, RocPoint::new(fpr, t))
}

/// Expected cost at an explicit operating point, e.g. the lower end of a
/// vertical jump that [`compute_cost`] would not select.
pub fn cost_at_point(pi: f64, point: RocPoint) -> Result<Cost> {
    check_unit("pi", pi)?;
    Ok(Cost::from_acceptance(acceptance_at(pi, point)))
}

/// Precision at an explicit operating point.
pub fn precision_at_point(pi: f64, point: RocPoint) -> Result<f64> {
    check_unit("pi", pi)?;
    precision_at(pi, point)
}

/// The largest finite budget reachable on the curve, `None` when unbounded.
pub fn max_cost(curve: &RocCurve, pi: f64) -> Result<Option<f64>> {
    check_unit("pi", pi)?;
    let q0 = acceptance_at(pi, curve.points()[0]);
    Ok((q0 > 0.0).then(|| 1.0 / q0))
}

/// Point of the polyline operating at expected cost `budget`, together with
/// the index of the segment it lies on.
fn locate(curve: &RocCurve, pi: f64, budget: f64) -> Result<(usize, RocPoint)> {
    check_unit("pi", pi)?;
    let pts = curve.points();
    let max = max_cost(curve, pi)?;
    let out_of_range = || Error::BudgetOutOfRange {
        budget,
        max: max.unwrap_or(f64::INFINITY),
    };
    if budget.is_nan() || budget < 1.0 || max.is_some_and(|m| budget > m) {
        return Err(out_of_range());
    }
    let target = 1.0 / budget;
    let q: Vec<f64> = pts.iter().map(|&p| acceptance_at(pi, p)).collect();
    // 1 / (1 / q0) need not round back to q0
    if target <= q[0] || max == Some(budget) {
        return Ok((0, pts[0]));
    }
    // first vertex reaching the target acceptance
    let k = q.partition_point(|&x| x < target);
    if k == q.len() {
        // rounding pushed 1/budget above q = 1 at (1, 1)
        return Ok((pts.len() - 2, pts[pts.len() - 1]));
    }
    let (a, b) = (pts[k - 1], pts[k]);
    if q[k] == target {
        return Ok((k - 1, b));
    }
    let w = (target - q[k - 1]) / (q[k] - q[k - 1]);
    let p = RocPoint::new(
        a.fpr + w * (b.fpr - a.fpr),
        a.tpr + w * (b.tpr - a.tpr),
    );
    Ok((k - 1, p))
}

/// The operating point `(F(C), T(F(C)))` whose expected cost is `budget`.
pub fn operating_point(curve: &RocCurve, pi: f64, budget: f64) -> Result<RocPoint> {
    locate(curve, pi, budget).map(|(_, p)| p)
}

/// Accuracy of rejection sampling at expected compute `budget`.
pub fn accuracy_at_compute(curve: &RocCurve, pi: f64, budget: f64) -> Result<f64> {
    let p = operating_point(curve, pi, budget)?;
    precision_at(pi, p)
}

/// `dA/dC` at `fpr`. Fails with [`Error::KinkPoint`] where the ROC slope
/// is not defined; use [`RocCurve::derivative`] for the one-sided values.
pub fn slope_da_dc(curve: &RocCurve, pi: f64, fpr: f64) -> Result<f64> {
    check_unit("pi", pi)?;
    let slopes = curve.derivative(fpr)?;
    let s = slopes.derivative().ok_or(Error::KinkPoint(fpr))?;
    let t = curve.eval(fpr)?;
    Ok(dadc_at(pi, RocPoint::new(fpr, t), Slope::Finite(s)))
}

/// Initial slope of A(C) at `C = 1`, from the ROC slope at the top-right corner.
pub fn early_slope(curve: &RocCurve, pi: f64) -> Result<f64> {
    check_unit("pi", pi)?;
    let top = curve
        .derivative(1.0)?
        .left
        .expect("F = 1 always has a left side");
    Ok(dadc_at(pi, RocPoint::new(1.0, 1.0), top))
}

/// Which case of the large-compute limit applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitRegime {
    /// `T(0) = 0` with finite slope at the origin.
    OriginSlope(f64),
    /// `T(0) > 0`: perfect accuracy at finite cost.
    Separating,
    /// The curve approximates a function with unbounded slope at the origin,
    /// so the smoothness hypothesis fails; the reported value is the pointwise
    /// limit of the precision, 1.
    UnboundedSlope,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limit {
    pub value: f64,
    pub regime: LimitRegime,
}

/// Accuracy as compute grows without bound (or up to the finite `C(0)`).
///
/// Best-of-N converges to the same value as `N -> inf`.
pub fn limit_accuracy(curve: &RocCurve, pi: f64) -> Result<Limit> {
    check_unit("pi", pi)?;
    let regime = match (curve.kind(), curve.slope_at_origin()) {
        (_, OriginSlope::Separating) => LimitRegime::Separating,
        (CurveKind::Power { gamma, .. }, _) if *gamma < 1.0 => LimitRegime::UnboundedSlope,
        (_, OriginSlope::Finite(alpha)) => LimitRegime::OriginSlope(alpha),
    };
    let value = if pi == 0.0 {
        0.0
    } else {
        match regime {
            LimitRegime::OriginSlope(alpha) => alpha * pi / (alpha * pi + 1.0 - pi),
            LimitRegime::Separating | LimitRegime::UnboundedSlope => 1.0,
        }
    };
    Ok(Limit { value, regime })
}

/// One tabulated operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyComputePoint {
    pub fpr: f64,
    pub tpr: f64,
    pub cost: Cost,
    /// Precision at this point; for an infinite-cost endpoint, the limit.
    pub accuracy: f64,
    /// `dA/dC` using the ROC slope on the low-F side.
    pub da_dc_left: Option<f64>,
    /// `dA/dC` using the ROC slope on the high-F side.
    pub da_dc_right: Option<f64>,
}

impl AccuracyComputePoint {
    /// `dA/dC` when both sides agree.
    pub fn da_dc(&self) -> Option<f64> {
        match (self.da_dc_left, self.da_dc_right) {
            (Some(l), Some(r)) if l == r => Some(l),
            _ => None,
        }
    }
}

/// Rejection-sampling accuracy/compute table, ordered by decreasing F
/// (increasing cost).
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyComputeCurve {
    pub pi: f64,
    pub kind: CurveKind,
    pub points: Vec<AccuracyComputePoint>,
}

/// Tabulates cost, accuracy and `dA/dC` over a grid of false-positive rates
/// plus every vertex of the curve.
pub fn profile(
    curve: &RocCurve,
    pi: f64,
    fpr_grid: &[f64],
    exec: Execution,
) -> Result<AccuracyComputeCurve> {
    check_unit("pi", pi)?;
    for &f in fpr_grid {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::Domain {
                name: "F grid value",
                value: f,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    let pts = curve.points();
    let n = pts.len();
    let seg = |i: usize| -> Slope {
        let (a, b) = (pts[i], pts[i + 1]);
        if a.fpr == b.fpr {
            Slope::Vertical
        } else {
            Slope::Finite((b.tpr - a.tpr) / (b.fpr - a.fpr))
        }
    };

    // (point, slope on the low-F side, slope on the high-F side)
    let mut rows: Vec<(RocPoint, Option<Slope>, Option<Slope>)> = (0..n)
        .map(|i| {
            let left = (i > 0).then(|| seg(i - 1));
            let right = (i + 1 < n).then(|| seg(i));
            (pts[i], left, right)
        })
        .collect();
    for &f in fpr_grid {
        let hi = pts.partition_point(|p| p.fpr <= f);
        if pts[hi - 1].fpr == f {
            continue;
        }
        let s = seg(hi - 1);
        rows.push((RocPoint::new(f, curve.eval(f)?), Some(s), Some(s)));
    }
    rows.sort_by(|a, b| {
        b.0.fpr
            .total_cmp(&a.0.fpr)
            .then(b.0.tpr.total_cmp(&a.0.tpr))
    });
    rows.dedup_by(|a, b| a.0 == b.0);

    let limit = limit_accuracy(curve, pi)?;
    let points = exec.map(rows.len(), |i| {
        let (p, left, right) = rows[i];
        let cost = Cost::from_acceptance(acceptance_at(pi, p));
        let accuracy = match cost {
            Cost::Finite(_) => precision_at(pi, p).unwrap_or(limit.value),
            Cost::Infinite => limit.value,
        };
        AccuracyComputePoint {
            fpr: p.fpr,
            tpr: p.tpr,
            cost,
            accuracy,
            da_dc_left: left.map(|s| dadc_at(pi, p, s)),
            da_dc_right: right.map(|s| dadc_at(pi, p, s)),
        }
    });
    Ok(AccuracyComputeCurve {
        pi,
        kind: curve.kind().clone(),
        points,
    })
}

/// Two curves that agree with everything observable up to a budget yet have
/// opposite large-compute behaviour.
#[derive(Debug, Clone, PartialEq)]
pub struct DeEmergenceResult {
    pub budget: f64,
    /// The operating point at the budget followed by the observed vertices
    /// with larger F.
    pub observed_prefix: Vec<RocPoint>,
    /// Extension by the straight line through the origin: accuracy stops
    /// improving beyond the budget.
    pub extension_stagnant: RocCurve,
    /// Extension by a horizontal line to `F = 0`: accuracy reaches 1.
    pub extension_perfect: RocCurve,
    pub sup_accuracy_stagnant: f64,
    pub sup_accuracy_perfect: f64,
}

pub fn de_emergence(curve: &RocCurve, pi: f64, budget: f64) -> Result<DeEmergenceResult> {
    check_unit("pi", pi)?;
    let limit = max_cost(curve, pi)?;
    let too_large = || Error::BudgetTooLarge {
        budget,
        limit: limit.unwrap_or(f64::INFINITY),
    };
    if limit.is_some_and(|m| budget >= m) {
        return Err(too_large());
    }
    let (k, at_budget) = locate(curve, pi, budget)?;
    if at_budget.fpr == 0.0 {
        return Err(too_large());
    }
    if at_budget.tpr == 0.0 || pi == 0.0 {
        return Err(Error::ZeroAccuracyPrefix);
    }
    let mut prefix = vec![at_budget];
    prefix.extend(
        curve.points()[k + 1..]
            .iter()
            .copied()
            .filter(|&p| p != at_budget),
    );

    let stagnant = RocCurve::from_points(
        std::iter::once(RocPoint::new(0.0, 0.0)).chain(prefix.iter().copied()),
        CurveKind::Piecewise,
    )?;
    let perfect = RocCurve::from_points(
        std::iter::once(RocPoint::new(0.0, at_budget.tpr)).chain(prefix.iter().copied()),
        CurveKind::Piecewise,
    )?;

    // precision is monotone along each segment, so the sup sits on a vertex
    let mut sup_stagnant = f64::NEG_INFINITY;
    for &p in &prefix {
        sup_stagnant = sup_stagnant.max(precision_at(pi, p)?);
    }
    let sup_perfect = limit_accuracy(&perfect, pi)?.value;
    Ok(DeEmergenceResult {
        budget,
        observed_prefix: prefix,
        extension_stagnant: stagnant,
        extension_perfect: perfect,
        sup_accuracy_stagnant: sup_stagnant,
        sup_accuracy_perfect: sup_perfect,
    })
}
