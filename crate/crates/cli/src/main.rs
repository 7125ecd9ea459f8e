use std::fmt::Display;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use rocscale::bon::{bo2_gain, bon_accuracy, bon_profile, compare};
use rocscale::io::{load_pool, load_roc_spec, RocSpec, Table};
use rocscale::rejection::{
    de_emergence, early_slope, limit_accuracy, max_cost, profile, AccuracyComputeCurve, LimitRegime,
};
use rocscale::roc::OriginSlope;
use rocscale::simulate::{simulate_bon, simulate_rejection, SimulationConfig};
use rocscale::{empirical_roc, Execution, RocCurve, ScorePool};

/// Accuracy/compute scaling of rejection sampling and Best-of-N from a
/// verifier's ROC curve.
#[derive(Parser)]
#[command(name = "rocscale", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a curve and print its vertices, AUROC, concavity and origin slope
    Roc {
        #[command(flatten)]
        common: Common,
        /// Print the curve as a `points` spec instead of a table
        #[arg(long)]
        emit_spec: bool,
    },
    /// Rejection-sampling accuracy against expected compute
    RsCurve {
        #[command(flatten)]
        common: Common,
        /// Number of evenly spaced F values added to the curve's vertices
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Initial slope and large-compute limit of rejection sampling
    RsLimits {
        #[command(flatten)]
        common: Common,
    },
    /// Exact Best-of-N accuracy, optionally checked by simulation
    BonCurve {
        #[command(flatten)]
        common: Common,
        /// Comma-separated, strictly ascending N values
        #[arg(long = "N", value_delimiter = ',', default_value = "1,2,4,8,16,32,64,128,256,512,1024")]
        n: Vec<usize>,
        /// Add simulated accuracy with a bootstrap CI (needs --pool)
        #[arg(long)]
        simulate: bool,
    },
    /// Accuracy gain from Best-of-1 to Best-of-2
    Bo2 {
        #[command(flatten)]
        common: Common,
    },
    /// Two curves that agree with the observed prefix up to a budget but
    /// whose large-compute accuracy differs
    DeEmergence {
        #[command(flatten)]
        common: Common,
        /// Largest observed compute budget
        #[arg(long)]
        budget: f64,
        /// Number of evenly spaced F values in the extension profiles
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Monte-Carlo simulation over a score pool
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        method: Method,
        /// Acceptance threshold for rejection sampling
        #[arg(long)]
        threshold: Option<f64>,
        /// Number of samples for Best-of-N
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Rejection sampling at expected cost C = N against Best-of-N
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long = "N", value_delimiter = ',', default_value = "1,2,4,8,16,32,64,128,256,512,1024")]
        n: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Rejection,
    Bon,
}

#[derive(Args)]
struct Common {
    /// Score pool CSV with header `score,label`
    #[arg(long, required_unless_present = "roc", conflicts_with = "roc")]
    pool: Option<PathBuf>,
    /// ROC spec (JSON)
    #[arg(long)]
    roc: Option<PathBuf>,
    /// Base accuracy; required with --roc, derived from the pool otherwise
    #[arg(long, conflicts_with = "pool", value_parser = parse_unit)]
    pi: Option<f64>,
    #[arg(long, env = "ROCSCALE_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1000)]
    resamples: usize,
    /// Output file (directory for de-emergence); stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run every loop on the calling thread
    #[arg(long)]
    sequential: bool,
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("{x} is outside [0, 1]"))
    }
}

enum Failure {
    Usage(String),
    Data(String),
}

fn data(e: impl Display) -> Failure {
    Failure::Data(e.to_string())
}

type Outcome<T = ()> = Result<T, Failure>;

struct Input {
    curve: RocCurve,
    pi: f64,
    pool: Option<ScorePool>,
    /// First comment line of every output file.
    provenance: String,
}

fn digest(path: &Path) -> Outcome<String> {
    let bytes = fs::read(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    Ok(format!("{}=sha256:{:x}", path.display(), Sha256::digest(&bytes)))
}

impl Common {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn sim_config(&self) -> SimulationConfig {
        SimulationConfig {
            trials: self.trials,
            seed: self.seed,
            resamples: self.resamples,
            exec: self.exec(),
            ..SimulationConfig::default()
        }
    }

    fn load(&self) -> Outcome<Input> {
        let mut digests = Vec::new();
        let (curve, pi, pool) = match (&self.pool, &self.roc) {
            (Some(path), _) => {
                digests.push(digest(path)?);
                let pool = load_pool(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
                let curve = empirical_roc(&pool).map_err(data)?;
                (curve, pool.pi(), Some(pool))
            }
            (None, Some(path)) => {
                let pi = self
                    .pi
                    .ok_or_else(|| Failure::Usage("--pi is required with --roc".into()))?;
                digests.push(digest(path)?);
                let curve = load_roc_spec(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
                // an empirical spec pulls in a pool file, which is an input too
                if let Ok(RocSpec::Empirical { pool_path }) =
                    fs::read_to_string(path).map_err(data).and_then(|t| RocSpec::parse(&t).map_err(data))
                {
                    let base = path.parent().unwrap_or(Path::new("."));
                    digests.push(digest(&base.join(pool_path))?);
                }
                (curve, pi, None)
            }
            (None, None) => unreachable!("clap requires one input"),
        };
        let provenance = format!(
            "rocscale {} seed={} {}",
            env!("CARGO_PKG_VERSION"),
            self.seed,
            digests.join(" ")
        );
        Ok(Input {
            curve,
            pi,
            pool,
            provenance,
        })
    }

    fn require_pool<'a>(&self, input: &'a Input, what: &str) -> Outcome<&'a ScorePool> {
        input
            .pool
            .as_ref()
            .ok_or_else(|| Failure::Usage(format!("{what} needs --pool")))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| data(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(data),
    }
}

fn table(input: &Input, columns: &[&'static str]) -> Table {
    let mut t = Table::new(columns);
    t.comment(input.provenance.clone());
    t.comment(format!("pi={}", input.pi));
    t
}

fn grid(k: usize) -> Outcome<Vec<f64>> {
    if k == 0 {
        return Err(Failure::Usage("--grid must be at least 1".into()));
    }
    Ok((1..=k).map(|i| i as f64 / k as f64).collect())
}

fn regime(r: LimitRegime) -> String {
    match r {
        LimitRegime::OriginSlope(a) => format!("origin_slope({a})"),
        LimitRegime::Separating => "separating".into(),
        LimitRegime::UnboundedSlope => "unbounded_slope".into(),
    }
}

fn rs_table(input: &Input, curve: &AccuracyComputeCurve) -> Table {
    let mut t = table(input, &["F", "T", "C", "A", "dA_dC_left", "dA_dC_right"]);
    for p in &curve.points {
        match p.cost.finite() {
            Some(c) => t.push(vec![
                p.fpr.into(),
                p.tpr.into(),
                c.into(),
                p.accuracy.into(),
                p.da_dc_left.into(),
                p.da_dc_right.into(),
            ]),
            None => {
                t.comment(format!(
                    "omitted F={} T={}: infinite cost, limit accuracy {}",
                    p.fpr, p.tpr, p.accuracy
                ));
            }
        }
    }
    t
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Roc { common, emit_spec } => {
            let input = common.load()?;
            let c = &input.curve;
            if emit_spec {
                let mut json = RocSpec::from_curve(c).to_json();
                json.push('\n');
                return emit(common.out.as_deref(), &json);
            }
            let mut t = table(&input, &["F", "T"]);
            t.comment(format!("auroc={}", c.auroc()));
            t.comment(format!("concave={}", c.is_concave()));
            t.comment(match c.slope_at_origin() {
                OriginSlope::Finite(a) => format!("origin_slope={a}"),
                OriginSlope::Separating => format!("origin_slope=separating T(0)={}", c.t_at_zero()),
            });
            for p in c.points() {
                t.push(vec![p.fpr.into(), p.tpr.into()]);
            }
            emit(common.out.as_deref(), &t.to_csv())
        }
        Command::RsCurve { common, grid: k } => {
            let input = common.load()?;
            let p = profile(&input.curve, input.pi, &grid(k)?, common.exec()).map_err(data)?;
            emit(common.out.as_deref(), &rs_table(&input, &p).to_csv())
        }
        Command::RsLimits { common } => {
            let input = common.load()?;
            let early = early_slope(&input.curve, input.pi).map_err(data)?;
            let limit = limit_accuracy(&input.curve, input.pi).map_err(data)?;
            let cmax = max_cost(&input.curve, input.pi).map_err(data)?;
            let mut t = table(&input, &["early_slope", "limit_accuracy", "regime", "max_cost"]);
            t.push(vec![
                early.into(),
                limit.value.into(),
                regime(limit.regime).as_str().into(),
                cmax.into(),
            ]);
            emit(common.out.as_deref(), &t.to_csv())
        }
        Command::BonCurve { common, n, simulate } => {
            let input = common.load()?;
            let pool = if simulate {
                Some(common.require_pool(&input, "--simulate")?)
            } else {
                None
            };
            let prof = bon_profile(&input.curve, input.pi, &n, common.exec()).map_err(|e| match e {
                rocscale::Error::Config(m) => Failure::Usage(m),
                e => data(e),
            })?;
            let mut t = table(&input, &["N", "acc_exact", "acc_sim", "ci_low", "ci_high"]);
            t.comment(format!(
                "limit={} regime={}",
                prof.limit.value,
                regime(prof.limit.regime)
            ));
            let cfg = common.sim_config();
            for p in &prof.points {
                let sim = match pool {
                    Some(pool) => Some(simulate_bon(pool, p.n, &cfg).map_err(data)?.accuracy),
                    None => None,
                };
                t.push(vec![
                    p.n.into(),
                    p.accuracy.into(),
                    sim.map(|s| s.mean).into(),
                    sim.map(|s| s.ci_low).into(),
                    sim.map(|s| s.ci_high).into(),
                ]);
            }
            emit(common.out.as_deref(), &t.to_csv())
        }
        Command::Bo2 { common } => {
            let input = common.load()?;
            let (c, pi) = (&input.curve, input.pi);
            let gain = bo2_gain(c, pi).map_err(data)?;
            let acc1 = bon_accuracy(c, pi, 1).map_err(data)?.accuracy;
            let acc2 = bon_accuracy(c, pi, 2).map_err(data)?.accuracy;
            let mut t = table(&input, &["auroc", "bo2_gain", "acc_1", "acc_2"]);
            t.push(vec![c.auroc().into(), gain.into(), acc1.into(), acc2.into()]);
            emit(common.out.as_deref(), &t.to_csv())
        }
        Command::DeEmergence { common, budget, grid: k } => {
            let dir = common
                .out
                .clone()
                .ok_or_else(|| Failure::Usage("de-emergence needs --out DIR".into()))?;
            let g = grid(k)?;
            let input = common.load()?;
            let r = de_emergence(&input.curve, input.pi, budget).map_err(data)?;
            fs::create_dir_all(&dir).map_err(|e| data(format!("{}: {e}", dir.display())))?;

            let mut summary = table(
                &input,
                &["budget", "F_z", "T_z", "sup_accuracy_stagnant", "sup_accuracy_perfect"],
            );
            for (name, ext) in [("stagnant", &r.extension_stagnant), ("perfect", &r.extension_perfect)] {
                let spec = dir.join(format!("{name}.json"));
                let mut json = RocSpec::from_curve(ext).to_json();
                json.push('\n');
                emit(Some(&spec), &json)?;
                // JSON has no comments, so the spec digests go in the summary
                summary.comment(digest(&spec)?);
                let p = profile(ext, input.pi, &g, common.exec()).map_err(data)?;
                emit(Some(&dir.join(format!("{name}_profile.csv"))), &rs_table(&input, &p).to_csv())?;
            }
            let z = r.observed_prefix[0];
            summary.push(vec![
                budget.into(),
                z.fpr.into(),
                z.tpr.into(),
                r.sup_accuracy_stagnant.into(),
                r.sup_accuracy_perfect.into(),
            ]);
            emit(Some(&dir.join("summary.csv")), &summary.to_csv())
        }
        Command::Simulate {
            common,
            method,
            threshold,
            n,
        } => {
            let input = common.load()?;
            let pool = common.require_pool(&input, "simulate")?;
            let cfg = common.sim_config();
            let pi = input.pi;
            match method {
                Method::Rejection => {
                    let tau = threshold
                        .ok_or_else(|| Failure::Usage("--method rejection needs --threshold".into()))?;
                    let pt = pool.rates_at(tau).map_err(data)?;
                    let sim = simulate_rejection(pool, tau, &cfg).map_err(data)?;
                    let draws = sim.mean_draws.expect("rejection reports draws");
                    let mut t = table(
                        &input,
                        &[
                            "threshold", "F", "T", "acc_exact", "acc_sim", "ci_low", "ci_high", "cost_exact",
                            "cost_sim", "cost_ci_low", "cost_ci_high",
                        ],
                    );
                    if sim.truncated_trials > 0 {
                        t.comment(format!("warning: {} trials hit the draw cap", sim.truncated_trials));
                    }
                    t.push(vec![
                        tau.into(),
                        pt.fpr.into(),
                        pt.tpr.into(),
                        rocscale::rejection::precision_at_point(pi, pt).map_err(data)?.into(),
                        sim.accuracy.mean.into(),
                        sim.accuracy.ci_low.into(),
                        sim.accuracy.ci_high.into(),
                        rocscale::rejection::cost_at_point(pi, pt).map_err(data)?.finite().into(),
                        draws.mean.into(),
                        draws.ci_low.into(),
                        draws.ci_high.into(),
                    ]);
                    emit(common.out.as_deref(), &t.to_csv())
                }
                Method::Bon => {
                    let n = n.ok_or_else(|| Failure::Usage("--method bon needs --N".into()))?;
                    if n == 0 {
                        return Err(Failure::Usage("--N must be at least 1".into()));
                    }
                    let exact = bon_accuracy(&input.curve, pi, n).map_err(data)?.accuracy;
                    let sim = simulate_bon(pool, n, &cfg).map_err(data)?.accuracy;
                    let mut t = table(&input, &["N", "acc_exact", "acc_sim", "ci_low", "ci_high"]);
                    t.push(vec![n.into(), exact.into(), sim.mean.into(), sim.ci_low.into(), sim.ci_high.into()]);
                    emit(common.out.as_deref(), &t.to_csv())
                }
            }
        }
        Command::Compare { common, n } => {
            let input = common.load()?;
            let rows = compare(&input.curve, input.pi, &n, common.exec()).map_err(|e| match e {
                rocscale::Error::Config(m) => Failure::Usage(m),
                e => data(e),
            })?;
            let mut t = table(&input, &["N", "C", "acc_rs", "acc_bon"]);
            t.comment("acc_rs is empty where C exceeds the largest cost the curve allows");
            for r in rows {
                t.push(vec![r.n.into(), (r.n as f64).into(), r.rejection.into(), r.bon.into()]);
            }
            emit(common.out.as_deref(), &t.to_csv())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("error: invalid usage"));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
