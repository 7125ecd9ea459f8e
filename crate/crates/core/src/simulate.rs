//! Monte-Carlo rejection sampling and Best-of-N over a finite score pool,
//! plus exact enumeration oracles for both.
//!
//! Trial `i` draws from its own ChaCha stream `(seed, i)`, so results do not
//! depend on how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::roc::ScorePool;

const ACCURACY_SALT: u64 = 0x5851_f42d_4c95_7f2d;
const DRAWS_SALT: u64 = 0x1405_7b7e_f767_814f;
const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub trials: usize,
    pub seed: u64,
    /// Cap on draws per rejection-sampling trial.
    pub max_draws: u64,
    pub resamples: usize,
    pub level: f64,
    pub exec: Execution,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            trials: 10_000,
            seed: 42,
            max_draws: 1_000_000,
            resamples: 1000,
            level: 0.95,
            exec: Execution::default(),
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.max_draws == 0 {
            return Err(Error::Config("max_draws must be at least 1".into()));
        }
        if self.resamples == 0 {
            return Err(Error::Config("resamples must be at least 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Config(format!("level {} is outside (0, 1)", self.level)));
        }
        Ok(())
    }
}

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Percentile bootstrap of a sample mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapSummary {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_resamples: usize,
    pub level: f64,
}

impl BootstrapSummary {
    pub fn contains(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    sorted[lo] + w * (sorted[hi] - sorted[lo])
}

/// Percentile confidence interval for the mean of `values`.
///
/// A resample of n values with replacement is equivalent to a multinomial
/// count vector over the distinct values, which is what gets drawn here
/// (one binomial per distinct value) instead of n uniform indices.
pub fn bootstrap(
    values: &[f64],
    n_resamples: usize,
    level: f64,
    seed: u64,
    exec: Execution,
) -> Result<BootstrapSummary> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if n_resamples == 0 {
        return Err(Error::Config("resamples must be at least 1".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Config(format!("level {level} is outside (0, 1)")));
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut groups: Vec<(f64, u64)> = Vec::new();
    for v in sorted {
        match groups.last_mut() {
            Some((g, c)) if *g == v => *c += 1,
            _ => groups.push((v, 1)),
        }
    }
    let mean = groups.iter().map(|&(v, c)| v * c as f64).sum::<f64>() / n as f64;
    if groups.len() == 1 {
        let mean = groups[0].0;
        return Ok(BootstrapSummary {
            mean,
            ci_low: mean,
            ci_high: mean,
            n_resamples,
            level,
        });
    }

    let mut means = exec.map(n_resamples, |b| {
        let mut rng = stream(seed, b);
        let mut left_n = n as u64;
        let mut left_count = n as u64;
        let mut total = 0.0;
        for &(v, c) in &groups[..groups.len() - 1] {
            if left_n == 0 {
                break;
            }
            let draw = if c == left_count {
                left_n
            } else {
                Binomial::new(left_n, c as f64 / left_count as f64)
                    .expect("probability lies in [0, 1]")
                    .sample(&mut rng)
            };
            total += draw as f64 * v;
            left_n -= draw;
            left_count -= c;
        }
        total += left_n as f64 * groups[groups.len() - 1].0;
        total / n as f64
    });
    means.sort_by(f64::total_cmp);
    let alpha = 1.0 - level;
    Ok(BootstrapSummary {
        mean,
        ci_low: quantile(&means, alpha / 2.0),
        ci_high: quantile(&means, 1.0 - alpha / 2.0),
        n_resamples,
        level,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub accuracy: BootstrapSummary,
    /// Draws per accepted output; rejection sampling only.
    pub mean_draws: Option<BootstrapSummary>,
    pub trials_used: usize,
    /// Trials that hit `max_draws` without an acceptance. Non-zero values are
    /// a warning: those trials still count, scored on their last draw.
    pub truncated_trials: usize,
}

/// Rejection sampling at `threshold`: draw with replacement until a score
/// reaches the threshold.
pub fn simulate_rejection(pool: &ScorePool, threshold: f64, cfg: &SimulationConfig) -> Result<SimResult> {
    cfg.validate()?;
    let samples = pool.samples();
    if !samples.iter().any(|s| s.score >= threshold) {
        return Err(Error::NoAcceptingSample(threshold));
    }
    let n = samples.len();
    let outcomes = cfg.exec.map(cfg.trials, |t| {
        let mut rng = stream(cfg.seed, t);
        let mut draws = 0u64;
        loop {
            let s = samples[rng.random_range(0..n)];
            draws += 1;
            if s.score >= threshold {
                return (s.label, draws, false);
            }
            if draws == cfg.max_draws {
                return (s.label, draws, true);
            }
        }
    });
    let correct: Vec<f64> = outcomes.iter().map(|o| f64::from(u8::from(o.0))).collect();
    let draws: Vec<f64> = outcomes.iter().map(|o| o.1 as f64).collect();
    let truncated_trials = outcomes.iter().filter(|o| o.2).count();
    Ok(SimResult {
        accuracy: bootstrap(&correct, cfg.resamples, cfg.level, cfg.seed ^ ACCURACY_SALT, cfg.exec)?,
        mean_draws: Some(bootstrap(&draws, cfg.resamples, cfg.level, cfg.seed ^ DRAWS_SALT, cfg.exec)?),
        trials_used: cfg.trials,
        truncated_trials,
    })
}

/// Best-of-N: draw `n` samples with replacement and keep the highest score,
/// breaking ties uniformly at random.
pub fn simulate_bon(pool: &ScorePool, n: usize, cfg: &SimulationConfig) -> Result<SimResult> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::Config("N must be at least 1".into()));
    }
    let samples = pool.samples();
    let size = samples.len();
    let correct = cfg.exec.map(cfg.trials, |t| {
        let mut rng = stream(cfg.seed, t);
        let mut best = samples[rng.random_range(0..size)];
        let mut ties = 1u32;
        for _ in 1..n {
            let s = samples[rng.random_range(0..size)];
            if s.score > best.score {
                best = s;
                ties = 1;
            } else if s.score == best.score {
                // reservoir step keeps each tied draw with equal probability
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    best = s;
                }
            }
        }
        f64::from(u8::from(best.label))
    });
    Ok(SimResult {
        accuracy: bootstrap(&correct, cfg.resamples, cfg.level, cfg.seed ^ ACCURACY_SALT, cfg.exec)?,
        mean_draws: None,
        trials_used: cfg.trials,
        truncated_trials: 0,
    })
}

/// Exact Best-of-N accuracy by enumerating all `|pool|^n` ordered draws.
pub fn brute_force_bon(pool: &ScorePool, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Config("N must be at least 1".into()));
    }
    let size = pool.len();
    let total = (size as u128)
        .checked_pow(n as u32)
        .filter(|&t| t <= BRUTE_FORCE_LIMIT)
        .ok_or(Error::TooLarge((size as u128).saturating_pow(n.min(u32::MAX as usize) as u32)))?;
    let samples = pool.samples();
    let mut idx = vec![0usize; n];
    let mut sum = 0.0;
    loop {
        let best = idx
            .iter()
            .map(|&i| samples[i].score)
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut ties, mut hits) = (0u32, 0u32);
        for &i in &idx {
            if samples[i].score == best {
                ties += 1;
                hits += u32::from(samples[i].label);
            }
        }
        sum += f64::from(hits) / f64::from(ties);

        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(sum / total as f64);
            }
            idx[pos] += 1;
            if idx[pos] < size {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Exact rejection-sampling accuracy and expected draws at `threshold` by
/// counting the accepted samples.
pub fn brute_force_rejection(pool: &ScorePool, threshold: f64) -> Result<(f64, f64)> {
    let accepted: Vec<_> = pool.samples().iter().filter(|s| s.score >= threshold).collect();
    if accepted.is_empty() {
        return Err(Error::NoAcceptingSample(threshold));
    }
    let hits = accepted.iter().filter(|s| s.label).count();
    Ok((
        hits as f64 / accepted.len() as f64,
        pool.len() as f64 / accepted.len() as f64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> ScorePool {
        ScorePool::from_pairs([(0.9, true), (0.5, false), (0.1, false)]).unwrap()
    }

    fn cfg(trials: usize) -> SimulationConfig {
        SimulationConfig {
            trials,
            ..SimulationConfig::default()
        }
    }

    #[test]
    fn brute_force_bon_examples() {
        assert!((brute_force_bon(&three(), 2).unwrap() - 5.0 / 9.0).abs() < 1e-15);
        assert!((brute_force_bon(&three(), 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let tied = ScorePool::from_pairs([(0.5, true), (0.5, false)]).unwrap();
        assert_eq!(brute_force_bon(&tied, 2).unwrap(), 0.5);
        let big = ScorePool::from_pairs((0..11).map(|i| (i as f64 / 10.0, i % 2 == 0))).unwrap();
        assert!(matches!(brute_force_bon(&big, 6), Err(Error::TooLarge(_))));
    }

    #[test]
    fn brute_force_rejection_examples() {
        assert_eq!(brute_force_rejection(&three(), 0.7).unwrap(), (1.0, 3.0));
        let (a, d) = brute_force_rejection(&three(), 0.0).unwrap();
        assert!((a - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(d, 1.0);
        let p = ScorePool::from_pairs([(0.9, true), (0.8, false), (0.1, false)]).unwrap();
        assert_eq!(brute_force_rejection(&p, 0.75).unwrap(), (0.5, 1.5));
        assert_eq!(brute_force_rejection(&three(), 1.0), Err(Error::NoAcceptingSample(1.0)));
    }

    #[test]
    fn rejection_simulation() {
        let r = simulate_rejection(&three(), 0.7, &cfg(20_000)).unwrap();
        assert_eq!(r.accuracy.mean, 1.0);
        let d = r.mean_draws.unwrap();
        assert!(d.contains(3.0), "{d:?}");
        assert!(d.ci_high - d.ci_low < 0.1);
        assert_eq!(r.truncated_trials, 0);

        let r = simulate_rejection(&three(), 0.0, &cfg(20_000)).unwrap();
        assert!(r.accuracy.contains(1.0 / 3.0), "{:?}", r.accuracy);
        assert_eq!(r.mean_draws.unwrap().mean, 1.0);

        assert_eq!(
            simulate_rejection(&three(), 1.0, &cfg(10)),
            Err(Error::NoAcceptingSample(1.0))
        );
    }

    #[test]
    fn truncation_is_reported() {
        let c = SimulationConfig {
            trials: 200,
            max_draws: 2,
            ..SimulationConfig::default()
        };
        let r = simulate_rejection(&three(), 0.7, &c).unwrap();
        assert!(r.truncated_trials > 0);
        assert_eq!(r.trials_used, 200);
        assert!(r.mean_draws.unwrap().mean <= 2.0);
    }

    #[test]
    fn bon_simulation() {
        let r = simulate_bon(&three(), 2, &cfg(20_000)).unwrap();
        assert!(r.accuracy.contains(5.0 / 9.0), "{:?}", r.accuracy);
        let r = simulate_bon(&three(), 1, &cfg(20_000)).unwrap();
        assert!(r.accuracy.contains(1.0 / 3.0), "{:?}", r.accuracy);
        let flat = ScorePool::from_pairs([(0.4, true), (0.4, false), (0.4, false), (0.4, true)]).unwrap();
        let r = simulate_bon(&flat, 5, &cfg(20_000)).unwrap();
        assert!(r.accuracy.contains(0.5), "{:?}", r.accuracy);
    }

    #[test]
    fn bootstrap_examples() {
        let s = bootstrap(&[0.3; 50], 1000, 0.95, 1, Execution::Sequential).unwrap();
        assert_eq!((s.mean, s.ci_low, s.ci_high), (0.3, 0.3, 0.3));
        let s = bootstrap(&[1.0], 1000, 0.95, 1, Execution::Sequential).unwrap();
        assert_eq!((s.mean, s.ci_low, s.ci_high), (1.0, 1.0, 1.0));
        let v: Vec<f64> = (0..1000).map(|i| (i % 2) as f64).collect();
        let s = bootstrap(&v, 2000, 0.95, 1, Execution::Sequential).unwrap();
        assert_eq!(s.mean, 0.5);
        assert!(s.ci_low < 0.5 && s.ci_high > 0.5);
        // binomial standard error is 0.0158, so the 95% half-width is about 0.031
        assert!((s.ci_high - s.ci_low - 0.062).abs() < 0.01, "{s:?}");
        assert_eq!(bootstrap(&[], 10, 0.95, 1, Execution::Sequential), Err(Error::EmptyInput));
        assert!(bootstrap(&[1.0], 10, 1.5, 1, Execution::Sequential).is_err());
    }

    #[test]
    fn bootstrap_matches_index_resampling_in_distribution() {
        // compare against the textbook resampler on a small skewed sample
        let v = [0.0, 1.0, 1.0, 2.0, 5.0, 5.0, 9.0];
        let s = bootstrap(&v, 20_000, 0.9, 7, Execution::Sequential).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut means: Vec<f64> = (0..20_000)
            .map(|_| (0..v.len()).map(|_| v[rng.random_range(0..v.len())]).sum::<f64>() / v.len() as f64)
            .collect();
        means.sort_by(f64::total_cmp);
        assert!((quantile(&means, 0.05) - s.ci_low).abs() < 0.15);
        assert!((quantile(&means, 0.95) - s.ci_high).abs() < 0.15);
    }

    #[test]
    fn deterministic_across_execution_modes() {
        let pool = ScorePool::from_pairs([(0.9, true), (0.7, false), (0.7, true), (0.2, false), (0.1, true)])
            .unwrap();
        let seq = SimulationConfig {
            trials: 3000,
            resamples: 300,
            exec: Execution::Sequential,
            ..SimulationConfig::default()
        };
        let par = SimulationConfig {
            exec: Execution::Parallel,
            ..seq
        };
        assert_eq!(simulate_bon(&pool, 3, &seq).unwrap(), simulate_bon(&pool, 3, &par).unwrap());
        assert_eq!(
            simulate_rejection(&pool, 0.7, &seq).unwrap(),
            simulate_rejection(&pool, 0.7, &par).unwrap()
        );
        let other = SimulationConfig { seed: 7, ..seq };
        assert_ne!(simulate_bon(&pool, 3, &seq).unwrap(), simulate_bon(&pool, 3, &other).unwrap());
    }

    #[test]
    fn config_validation() {
        let bad = SimulationConfig {
            trials: 0,
            ..SimulationConfig::default()
        };
        assert!(simulate_bon(&three(), 2, &bad).is_err());
        assert!(simulate_bon(&three(), 0, &cfg(10)).is_err());
    }
}
