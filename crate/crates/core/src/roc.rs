//! ROC curves induced by a verifier score.
//!
//! A curve is stored as the vertices of a monotone polyline from `(0, T(0))`
//! to `(1, 1)`. Between vertices the curve is the linear interpolation of the
//! step endpoints, which is exactly the ROC curve of a score whose ties have
//! been broken by independent uniform jitter. A vertical jump at some F is
//! stored as two consecutive vertices sharing that F; evaluation returns the
//! upper one.

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};

const SLOPE_TOL: f64 = 1e-12;

/// One generator output reduced to its verifier score and correctness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub score: f64,
    pub label: bool,
}

impl LabeledSample {
    pub fn new(score: f64, label: bool) -> Result<Self> {
        if !score.is_finite() || !(0.0..=1.0).contains(&score) {
            return Err(Error::InvalidSample {
                index: 0,
                reason: format!("score {score} is outside [0, 1]"),
            });
        }
        Ok(Self { score, label })
    }
}

/// Finite stand-in for the base generator's output distribution.
///
/// The positive fraction is always derived from the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ScorePool {
    samples: Vec<LabeledSample>,
    positives: usize,
}

impl ScorePool {
    pub fn new(samples: Vec<LabeledSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyPool);
        }
        for (index, s) in samples.iter().enumerate() {
            if !s.score.is_finite() || !(0.0..=1.0).contains(&s.score) {
                return Err(Error::InvalidSample {
                    index,
                    reason: format!("score {} is outside [0, 1]", s.score),
                });
            }
        }
        let positives = samples.iter().filter(|s| s.label).count();
        Ok(Self { samples, positives })
    }

    /// Builds a pool from `(score, label)` pairs.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, bool)>,
    {
        Self::new(
            pairs
                .into_iter()
                .map(|(score, label)| LabeledSample { score, label })
                .collect(),
        )
    }

    pub fn samples(&self) -> &[LabeledSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.positives
    }

    pub fn negatives(&self) -> usize {
        self.samples.len() - self.positives
    }

    /// Accuracy of the base generator.
    pub fn pi(&self) -> f64 {
        self.positives as f64 / self.samples.len() as f64
    }

    /// `(F, T)` of the classifier accepting scores `>= threshold`.
    pub fn rates_at(&self, threshold: f64) -> Result<RocPoint> {
        let (npos, nneg) = (self.positives(), self.negatives());
        if nneg == 0 {
            return Err(Error::AllPositive);
        }
        if npos == 0 {
            return Err(Error::AllNegative);
        }
        let (mut tp, mut fp) = (0usize, 0usize);
        for s in self.samples.iter().filter(|s| s.score >= threshold) {
            if s.label {
                tp += 1;
            } else {
                fp += 1;
            }
        }
        Ok(RocPoint::new(fp as f64 / nneg as f64, tp as f64 / npos as f64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
}

impl RocPoint {
    pub const fn new(fpr: f64, tpr: f64) -> Self {
        Self { fpr, tpr }
    }
}

impl From<(f64, f64)> for RocPoint {
    fn from((fpr, tpr): (f64, f64)) -> Self {
        Self { fpr, tpr }
    }
}

/// How a curve was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveKind {
    Empirical,
    Piecewise,
    LinearSlope { alpha: f64 },
    Power { gamma: f64, grid: usize },
    TwoSegment { intercept: f64, knee: (f64, f64) },
    Sampled { label: String, grid: usize },
}

/// Slope of one side of the curve at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Finite(f64),
    Vertical,
}

impl Slope {
    pub fn finite(self) -> Option<f64> {
        match self {
            Slope::Finite(s) => Some(s),
            Slope::Vertical => None,
        }
    }
}

/// Left and right derivatives of T at some F. `None` where a side lies
/// outside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedSlopes {
    pub left: Option<Slope>,
    pub right: Option<Slope>,
}

impl OneSidedSlopes {
    /// The derivative, if both sides exist and agree.
    pub fn derivative(&self) -> Option<f64> {
        match (self.left, self.right) {
            (Some(Slope::Finite(l)), Some(Slope::Finite(r))) if l == r => Some(l),
            _ => None,
        }
    }
}

/// Behaviour of the curve at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OriginSlope {
    /// `T(0) = 0` and the first segment has this slope.
    Finite(f64),
    /// `T(0) > 0`: some positives outscore every negative.
    Separating,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    points: Vec<RocPoint>,
    kind: CurveKind,
}

impl RocCurve {
    /// Validates and normalizes a vertex list.
    ///
    /// Consecutive duplicates are dropped, any run of vertices at `F = 0`
    /// collapses to its highest one, and vertical runs elsewhere keep only
    /// their two ends.
    pub fn from_points<P>(points: impl IntoIterator<Item = P>, kind: CurveKind) -> Result<Self>
    where
        P: Into<RocPoint>,
    {
        let raw: Vec<RocPoint> = points.into_iter().map(Into::into).collect();
        if raw.len() < 2 {
            return Err(Error::InvalidCurve("need at least two points".into()));
        }
        for p in &raw {
            if !p.fpr.is_finite() || !p.tpr.is_finite() {
                return Err(Error::InvalidCurve(format!("non-finite point ({}, {})", p.fpr, p.tpr)));
            }
            if !(0.0..=1.0).contains(&p.fpr) || !(0.0..=1.0).contains(&p.tpr) {
                return Err(Error::InvalidCurve(format!(
                    "point ({}, {}) is outside the unit square",
                    p.fpr, p.tpr
                )));
            }
        }
        if raw[0].fpr != 0.0 {
            return Err(Error::InvalidCurve("first point must have F = 0".into()));
        }
        let last = raw[raw.len() - 1];
        if last.fpr != 1.0 || last.tpr != 1.0 {
            return Err(Error::InvalidCurve("last point must be (1, 1)".into()));
        }
        for w in raw.windows(2) {
            if w[1].fpr < w[0].fpr {
                return Err(Error::InvalidCurve(format!(
                    "F decreases from {} to {}",
                    w[0].fpr, w[1].fpr
                )));
            }
            if w[1].tpr < w[0].tpr {
                return Err(Error::InvalidCurve(format!(
                    "T decreases from {} to {}",
                    w[0].tpr, w[1].tpr
                )));
            }
        }

        let mut points: Vec<RocPoint> = Vec::with_capacity(raw.len());
        let mut i = 0;
        while i < raw.len() {
            let f = raw[i].fpr;
            let mut j = i;
            while j + 1 < raw.len() && raw[j + 1].fpr == f {
                j += 1;
            }
            if f == 0.0 || raw[i].tpr == raw[j].tpr {
                points.push(raw[j]);
            } else {
                points.push(raw[i]);
                points.push(raw[j]);
            }
            i = j + 1;
        }
        Ok(Self { points, kind })
    }

    /// The chance diagonal `T(F) = F`.
    pub fn diagonal() -> Self {
        Self {
            points: vec![RocPoint::new(0.0, 0.0), RocPoint::new(1.0, 1.0)],
            kind: CurveKind::Piecewise,
        }
    }

    /// A verifier that accepts every positive before any negative.
    pub fn perfect() -> Self {
        Self {
            points: vec![RocPoint::new(0.0, 1.0), RocPoint::new(1.0, 1.0)],
            kind: CurveKind::Piecewise,
        }
    }

    /// `T(F) = min(alpha * F, 1)` for `alpha >= 1`.
    pub fn linear_slope(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::InvalidCurve(format!(
                "linear slope alpha = {alpha} must be finite and at least 1"
            )));
        }
        let kind = CurveKind::LinearSlope { alpha };
        if alpha == 1.0 {
            Self::from_points([(0.0, 0.0), (1.0, 1.0)], kind)
        } else {
            Self::from_points([(0.0, 0.0), (1.0 / alpha, 1.0), (1.0, 1.0)], kind)
        }
    }

    /// Piecewise-linear approximation of `T(F) = F^gamma` on a uniform grid.
    pub fn power(gamma: f64, grid: usize) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::InvalidCurve(format!("power gamma = {gamma} must be positive")));
        }
        let kind = CurveKind::Power { gamma, grid };
        Self::sampled_with_kind(grid, |f| f.powf(gamma), kind)
    }

    /// Three vertices `(0, intercept)`, `knee`, `(1, 1)`.
    pub fn two_segment(intercept: f64, knee: (f64, f64)) -> Result<Self> {
        let kind = CurveKind::TwoSegment { intercept, knee };
        Self::from_points([(0.0, intercept), knee, (1.0, 1.0)], kind)
    }

    /// Samples a monotone function with `T(1) = 1` on `grid + 1` uniform nodes.
    pub fn sampled(label: &str, grid: usize, roc: impl Fn(f64) -> f64) -> Result<Self> {
        let kind = CurveKind::Sampled {
            label: label.to_string(),
            grid,
        };
        Self::sampled_with_kind(grid, roc, kind)
    }

    fn sampled_with_kind(grid: usize, roc: impl Fn(f64) -> f64, kind: CurveKind) -> Result<Self> {
        if grid == 0 {
            return Err(Error::InvalidCurve("grid must have at least one segment".into()));
        }
        let points = (0..=grid).map(|i| {
            let f = i as f64 / grid as f64;
            let t = if i == grid { 1.0 } else { roc(f) };
            RocPoint::new(f, t)
        });
        Self::from_points(points, kind)
    }

    pub fn points(&self) -> &[RocPoint] {
        &self.points
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn with_kind(mut self, kind: CurveKind) -> Self {
        self.kind = kind;
        self
    }

    /// `T(0)`, the fraction of positives scoring above every negative.
    pub fn t_at_zero(&self) -> f64 {
        self.points[0].tpr
    }

    /// Iterates over consecutive vertex pairs.
    pub fn segments(&self) -> impl Iterator<Item = (RocPoint, RocPoint)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    /// Evaluates `T(F)`, taking the upper value across a vertical jump.
    pub fn eval(&self, fpr: f64) -> Result<f64> {
        check_unit("F", fpr)?;
        let hi = self.points.partition_point(|p| p.fpr <= fpr);
        let j = hi - 1;
        let a = self.points[j];
        if a.fpr == fpr || hi == self.points.len() {
            return Ok(a.tpr);
        }
        let b = self.points[hi];
        let w = (fpr - a.fpr) / (b.fpr - a.fpr);
        Ok(a.tpr + w * (b.tpr - a.tpr))
    }

    /// One-sided slopes of the interpolated curve at `fpr`.
    pub fn derivative(&self, fpr: f64) -> Result<OneSidedSlopes> {
        check_unit("F", fpr)?;
        let pts = &self.points;
        let lo = pts.partition_point(|p| p.fpr < fpr);
        let hi = pts.partition_point(|p| p.fpr <= fpr);
        let seg = |i: usize| -> Slope {
            let (a, b) = (pts[i], pts[i + 1]);
            if b.fpr == a.fpr {
                Slope::Vertical
            } else {
                Slope::Finite((b.tpr - a.tpr) / (b.fpr - a.fpr))
            }
        };
        if lo == hi {
            // strictly inside segment (lo - 1, lo)
            let s = seg(lo - 1);
            return Ok(OneSidedSlopes {
                left: Some(s),
                right: Some(s),
            });
        }
        let left = if fpr == 0.0 {
            None
        } else if hi - lo >= 2 {
            Some(Slope::Vertical)
        } else {
            Some(seg(lo - 1))
        };
        let right = if hi == pts.len() { None } else { Some(seg(hi - 1)) };
        Ok(OneSidedSlopes { left, right })
    }

    pub fn slope_at_origin(&self) -> OriginSlope {
        let (a, b) = (self.points[0], self.points[1]);
        if a.tpr > 0.0 {
            OriginSlope::Separating
        } else {
            OriginSlope::Finite((b.tpr - a.tpr) / (b.fpr - a.fpr))
        }
    }

    /// Left slope at `F = 1`, or `None` when the curve jumps there.
    pub fn slope_at_top(&self) -> Option<f64> {
        self.derivative(1.0)
            .ok()
            .and_then(|s| s.left)
            .and_then(Slope::finite)
    }

    /// Area under the curve.
    pub fn auroc(&self) -> f64 {
        self.segments()
            .map(|(a, b)| (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5)
            .sum()
    }

    pub fn is_concave(&self) -> bool {
        let mut prev = f64::INFINITY;
        for (a, b) in self.segments() {
            if b.fpr == a.fpr {
                return false;
            }
            let s = (b.tpr - a.tpr) / (b.fpr - a.fpr);
            if s > prev + SLOPE_TOL {
                return false;
            }
            prev = s;
        }
        true
    }
}

/// Step-endpoint ROC of the discrete score over a pool.
///
/// A sample is accepted at threshold `tau` when its score is at least `tau`;
/// tied scores form one threshold.
pub fn empirical_roc(pool: &ScorePool) -> Result<RocCurve> {
    let npos = pool.positives();
    let nneg = pool.negatives();
    if nneg == 0 {
        return Err(Error::AllPositive);
    }
    if npos == 0 {
        return Err(Error::AllNegative);
    }
    let mut sorted: Vec<LabeledSample> = pool.samples().to_vec();
    sorted.sort_by(|a, b| b.score.total_cmp(&a.score));

    let mut points = Vec::with_capacity(sorted.len() + 1);
    points.push(RocPoint::new(0.0, 0.0));
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < sorted.len() {
        let score = sorted[i].score;
        while i < sorted.len() && sorted[i].score == score {
            if sorted[i].label {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint::new(fp as f64 / nneg as f64, tp as f64 / npos as f64));
    }
    RocCurve::from_points(points, CurveKind::Empirical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pool(pos: &[f64], neg: &[f64]) -> ScorePool {
        ScorePool::from_pairs(
            pos.iter()
                .map(|&s| (s, true))
                .chain(neg.iter().map(|&s| (s, false))),
        )
        .unwrap()
    }

    fn pts(c: &RocCurve) -> Vec<(f64, f64)> {
        c.points().iter().map(|p| (p.fpr, p.tpr)).collect()
    }

    #[test]
    fn separating_pool() {
        let c = empirical_roc(&pool(&[0.9], &[0.1])).unwrap();
        assert_eq!(pts(&c), vec![(0.0, 1.0), (1.0, 1.0)]);
    }

    #[test]
    fn tied_pool_is_diagonal() {
        let c = empirical_roc(&pool(&[0.5], &[0.5])).unwrap();
        assert_eq!(pts(&c), vec![(0.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn two_by_two_pool() {
        let c = empirical_roc(&pool(&[0.9, 0.4], &[0.6, 0.2])).unwrap();
        assert_eq!(pts(&c), vec![(0.0, 0.5), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)]);
        assert_eq!(c.eval(0.25).unwrap(), 0.5);
        assert_eq!(c.eval(0.5).unwrap(), 1.0);
        assert_eq!(c.auroc(), 0.75);
    }

    #[test]
    fn degenerate_pools() {
        assert_eq!(empirical_roc(&pool(&[0.2, 0.3], &[])), Err(Error::AllPositive));
        assert_eq!(empirical_roc(&pool(&[], &[0.2])), Err(Error::AllNegative));
        assert_eq!(ScorePool::new(vec![]), Err(Error::EmptyPool));
        assert!(matches!(
            ScorePool::from_pairs([(1.5, true)]),
            Err(Error::InvalidSample { index: 0, .. })
        ));
    }

    #[test]
    fn positive_tied_with_top_negative_is_not_separated() {
        let c = empirical_roc(&pool(&[0.9, 0.7], &[0.7, 0.1])).unwrap();
        assert_eq!(c.t_at_zero(), 0.5);
        assert_eq!(pts(&c), vec![(0.0, 0.5), (0.5, 1.0), (1.0, 1.0)]);
    }

    #[test]
    fn evaluation() {
        assert_eq!(RocCurve::diagonal().eval(0.3).unwrap(), 0.3);
        let c = RocCurve::from_points([(0.0, 0.5), (1.0, 1.0)], CurveKind::Piecewise).unwrap();
        assert_eq!(c.eval(0.0).unwrap(), 0.5);
        assert!(matches!(c.eval(1.2), Err(Error::Domain { .. })));
        assert!(matches!(c.eval(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn one_sided_slopes() {
        let d = RocCurve::diagonal().derivative(0.5).unwrap();
        assert_eq!(d.left, Some(Slope::Finite(1.0)));
        assert_eq!(d.right, Some(Slope::Finite(1.0)));

        let c = RocCurve::from_points([(0.0, 0.0), (0.25, 0.5), (1.0, 1.0)], CurveKind::Piecewise)
            .unwrap();
        let d = c.derivative(0.25).unwrap();
        assert_eq!(d.left, Some(Slope::Finite(2.0)));
        let r = d.right.unwrap().finite().unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.derivative(), None);

        let c = RocCurve::from_points([(0.0, 0.5), (1.0, 1.0)], CurveKind::Piecewise).unwrap();
        let d = c.derivative(0.0).unwrap();
        assert_eq!(d.left, None);
        assert_eq!(d.right, Some(Slope::Finite(0.5)));

        let c = empirical_roc(&pool(&[0.9, 0.4], &[0.6, 0.2])).unwrap();
        let d = c.derivative(0.5).unwrap();
        assert_eq!(d.left, Some(Slope::Vertical));
        assert_eq!(d.right, Some(Slope::Finite(0.0)));
        assert_eq!(c.derivative(1.0).unwrap().right, None);
    }

    #[test]
    fn origin_slope() {
        let c = RocCurve::linear_slope(4.0).unwrap();
        assert_eq!(c.slope_at_origin(), OriginSlope::Finite(4.0));
        assert_eq!(RocCurve::diagonal().slope_at_origin(), OriginSlope::Finite(1.0));
        let c = RocCurve::from_points([(0.0, 0.5), (1.0, 1.0)], CurveKind::Piecewise).unwrap();
        assert_eq!(c.slope_at_origin(), OriginSlope::Separating);
    }

    #[test]
    fn area() {
        assert_eq!(RocCurve::diagonal().auroc(), 0.5);
        assert_eq!(RocCurve::perfect().auroc(), 1.0);
        let c = RocCurve::from_points(
            [(0.0, 0.0), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)],
            CurveKind::Piecewise,
        )
        .unwrap();
        assert_eq!(c.auroc(), 0.625);
    }

    #[test]
    fn concavity() {
        assert!(RocCurve::diagonal().is_concave());
        let c = |p: [(f64, f64); 3]| RocCurve::from_points(p, CurveKind::Piecewise).unwrap();
        assert!(c([(0.0, 0.0), (0.5, 0.9), (1.0, 1.0)]).is_concave());
        assert!(!c([(0.0, 0.0), (0.5, 0.2), (1.0, 1.0)]).is_concave());
    }

    #[test]
    fn rejects_malformed_curves() {
        let bad = |p: Vec<(f64, f64)>| RocCurve::from_points(p, CurveKind::Piecewise).is_err();
        assert!(bad(vec![(0.0, 0.0)]));
        assert!(bad(vec![(0.1, 0.0), (1.0, 1.0)]));
        assert!(bad(vec![(0.0, 0.0), (1.0, 0.9)]));
        assert!(bad(vec![(0.0, 0.0), (0.6, 0.5), (0.4, 0.6), (1.0, 1.0)]));
        assert!(bad(vec![(0.0, 0.6), (0.5, 0.5), (1.0, 1.0)]));
        assert!(bad(vec![(0.0, f64::NAN), (1.0, 1.0)]));
        assert!(RocCurve::linear_slope(0.5).is_err());
    }

    #[test]
    fn normalization_collapses_runs() {
        let c = RocCurve::from_points(
            [(0.0, 0.0), (0.0, 0.3), (0.5, 0.5), (0.5, 0.6), (0.5, 0.8), (1.0, 1.0), (1.0, 1.0)],
            CurveKind::Piecewise,
        )
        .unwrap();
        assert_eq!(pts(&c), vec![(0.0, 0.3), (0.5, 0.5), (0.5, 0.8), (1.0, 1.0)]);
    }

    fn rank_statistic(pool: &ScorePool) -> f64 {
        let s = pool.samples();
        let (mut wins, mut pairs) = (0.0, 0.0);
        for p in s.iter().filter(|x| x.label) {
            for n in s.iter().filter(|x| !x.label) {
                pairs += 1.0;
                if p.score > n.score {
                    wins += 1.0;
                } else if p.score == n.score {
                    wins += 0.5;
                }
            }
        }
        wins / pairs
    }

    fn mixed_pool() -> impl Strategy<Value = ScorePool> {
        // scores on a coarse grid so ties are common
        (1usize..100, 1usize..100)
            .prop_flat_map(|(np, nn)| {
                (
                    prop::collection::vec(0u32..=20, np),
                    prop::collection::vec(0u32..=20, nn),
                )
            })
            .prop_map(|(p, n)| {
                ScorePool::from_pairs(
                    p.into_iter()
                        .map(|s| (s as f64 / 20.0, true))
                        .chain(n.into_iter().map(|s| (s as f64 / 20.0, false))),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn empirical_curve_is_valid(pool in mixed_pool()) {
            let c = empirical_roc(&pool).unwrap();
            let p = c.points();
            prop_assert_eq!(p[0].fpr, 0.0);
            prop_assert_eq!(*p.last().unwrap(), RocPoint::new(1.0, 1.0));
            for w in p.windows(2) {
                prop_assert!(w[1].fpr >= w[0].fpr && w[1].tpr >= w[0].tpr);
                prop_assert!(w[0] != w[1]);
            }
            // at most two vertices per F
            for w in p.windows(3) {
                prop_assert!(!(w[0].fpr == w[1].fpr && w[1].fpr == w[2].fpr));
            }
            RocCurve::from_points(p.to_vec(), CurveKind::Piecewise).unwrap();
        }

        #[test]
        fn auroc_matches_rank_statistic(pool in mixed_pool()) {
            let c = empirical_roc(&pool).unwrap();
            prop_assert!((c.auroc() - rank_statistic(&pool)).abs() <= 1e-12);
        }

        #[test]
        fn eval_is_monotone_and_segmentwise_lipschitz(pool in mixed_pool(), a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
            let c = empirical_roc(&pool).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (tlo, thi) = (c.eval(lo).unwrap(), c.eval(hi).unwrap());
            prop_assert!(tlo <= thi);
            let d = c.derivative(lo).unwrap();
            if let (Some(Slope::Finite(s)), Some(Slope::Finite(_))) = (d.right, d.left) {
                let mid = lo + (hi - lo) * 1e-3;
                let seg_end = c.points().iter().map(|p| p.fpr).find(|&f| f > lo).unwrap_or(1.0);
                if mid < seg_end {
                    let t = c.eval(mid).unwrap();
                    prop_assert!((t - tlo - s * (mid - lo)).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn threshold_invariance(pool in mixed_pool(), shift in -0.2..0.2f64, scale in 0.1..3.0f64) {
            let moved = ScorePool::from_pairs(pool.samples().iter().map(|s| {
                // strictly increasing map back into [0, 1]
                let x = (s.score + shift) * scale;
                (1.0 / (1.0 + (-x).exp()), s.label)
            })).unwrap();
            let (a, b) = (empirical_roc(&pool).unwrap(), empirical_roc(&moved).unwrap());
            prop_assert_eq!(a.points(), b.points());
        }
    }
}
