//! Synthetic verifier pairs showing that early and late scaling are set by
//! opposite corners of the ROC curve.

use crate::roc::{CurveKind, RocCurve};

fn curve(label: &str, points: &[(f64, f64)]) -> RocCurve {
    RocCurve::from_points(points.iter().copied(), CurveKind::Piecewise)
        .unwrap_or_else(|e| panic!("scenario curve {label} is invalid: {e}"))
}

/// Two concave curves identical for `F <= 0.1` but with different slopes at
/// `F = 1`: early scaling differs, the large-compute accuracy is the same.
///
/// Returns `(flat_top, steep_top)`.
pub fn shared_origin_pair() -> (RocCurve, RocCurve) {
    (
        curve("flat_top", &[(0.0, 0.0), (0.1, 0.5), (0.4, 0.95), (1.0, 1.0)]),
        curve("steep_top", &[(0.0, 0.0), (0.1, 0.5), (0.2, 0.6), (1.0, 1.0)]),
    )
}

/// A curve that is flat near `F = 1` but shallow at the origin, against one
/// that is steep at the origin but steep near `F = 1`. The first scales
/// faster at low compute and is overtaken at high compute.
///
/// Returns `(fast_start, strong_finish)`.
pub fn reversal_pair() -> (RocCurve, RocCurve) {
    (
        curve("fast_start", &[(0.0, 0.0), (0.4, 0.9), (1.0, 1.0)]),
        curve("strong_finish", &[(0.0, 0.0), (0.02, 0.3), (1.0, 1.0)]),
    )
}
