#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rocscale::{CurveKind, RocCurve, RocPoint, ScorePool};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Concave piecewise-linear curve with `segments` pieces starting at
/// `(0, intercept)`. Widths are kept away from zero so the first segment is
/// resolvable at moderate N.
pub fn random_concave(rng: &mut impl Rng, segments: usize, intercept: f64) -> RocCurve {
    let widths: Vec<f64> = (0..segments).map(|_| rng.random_range(0.2..1.0)).collect();
    let wsum: f64 = widths.iter().sum();
    let widths: Vec<f64> = widths.iter().map(|w| w / wsum).collect();
    let mut slopes: Vec<f64> = (0..segments).map(|_| rng.random_range(0.0..1.0f64).powi(2) * 10.0).collect();
    slopes.sort_by(|a, b| b.total_cmp(a));
    if slopes.iter().all(|&s| s == 0.0) {
        slopes[0] = 1.0;
    }
    let rise: f64 = widths.iter().zip(&slopes).map(|(w, s)| w * s).sum();
    let scale = (1.0 - intercept) / rise;
    let mut pts = vec![RocPoint::new(0.0, intercept)];
    let (mut f, mut t) = (0.0, intercept);
    for i in 0..segments - 1 {
        f += widths[i];
        t += widths[i] * slopes[i] * scale;
        pts.push(RocPoint::new(f, t.min(1.0)));
    }
    pts.push(RocPoint::new(1.0, 1.0));
    RocCurve::from_points(pts, CurveKind::Piecewise).expect("generated curve is valid")
}

/// Arbitrary monotone piecewise-linear curve, possibly non-concave, with
/// possible vertical jumps and a positive intercept.
pub fn random_curve(rng: &mut impl Rng) -> RocCurve {
    let k = rng.random_range(1..8);
    let mut f: Vec<f64> = (0..k).map(|_| rng.random_range(0..=20) as f64 / 20.0).collect();
    let mut t: Vec<f64> = (0..k).map(|_| rng.random_range(0..=20) as f64 / 20.0).collect();
    f.sort_by(f64::total_cmp);
    t.sort_by(f64::total_cmp);
    let t0 = if rng.random_bool(0.3) { t[0] } else { 0.0 };
    let pts = std::iter::once(RocPoint::new(0.0, t0))
        .chain(f.into_iter().zip(t).map(|(f, t)| RocPoint::new(f, t)))
        .chain(std::iter::once(RocPoint::new(1.0, 1.0)));
    RocCurve::from_points(pts, CurveKind::Piecewise).expect("generated curve is valid")
}

/// Pool of `size` samples with scores on a coarse grid (ties are common),
/// containing at least one sample of each label.
pub fn random_pool(rng: &mut impl Rng, size: usize, levels: u32) -> ScorePool {
    assert!(size >= 2);
    loop {
        let pairs: Vec<(f64, bool)> = (0..size)
            .map(|_| {
                (
                    rng.random_range(0..=levels) as f64 / levels as f64,
                    rng.random_bool(0.5),
                )
            })
            .collect();
        let pool = ScorePool::from_pairs(pairs).unwrap();
        if pool.positives() > 0 && pool.negatives() > 0 {
            return pool;
        }
    }
}
