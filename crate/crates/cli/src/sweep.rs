//! `sweep`: seeded trials over a list of sizes, one output row per trial.
//!
//! Trials run in parallel; rows are collected in (n, trial) order so the
//! output does not depend on scheduling.

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use stablelab::embeddings::{DisjInstance, HighMidLowParams};
use stablelab::market::{deferred_acceptance, random_market, random_perfect_marriage, MarriageMarket, Model};
use stablelab::query::{optimality_check, query_protocol, DaStrategy, VerifierOrder};

use crate::failure::Failure;
use crate::files::emit;
use crate::protocol::{decide, decider_params, estimate, gs, naive};
use crate::{Cli, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    NaiveVerify,
    Gs,
    Estimator,
    DisjDecider,
    /// Deferred acceptance run as a comparison-query protocol.
    DaQueries,
    OptimalityCheck,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub target: Target,

    /// Comma-separated market sizes.
    #[arg(long = "n-list", value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,

    #[arg(long, default_value_t = 10)]
    pub trials: usize,

    /// Estimator threshold or disj-decider slack.
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,

    /// Estimator gap (default 0.1) or disj-decider tier parameter.
    #[arg(long)]
    pub delta: Option<f64>,

    #[arg(long, default_value_t = 0.05)]
    pub failure_prob: f64,
}

/// One trial. Protocol targets make no queries and report zero in the query
/// columns; optimality-check reports the verifier's women-side count in
/// `queries_w` and the rejection count in `queries_m`.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub target: Target,
    pub bits: usize,
    pub queries_w: usize,
    pub queries_m: usize,
    pub correct: bool,
    pub error: String,
}

struct Outcome {
    bits: usize,
    queries_w: usize,
    queries_m: usize,
    correct: bool,
}

pub fn run(cli: &Cli, args: &SweepArgs) -> Result<(), Failure> {
    validate(args)?;
    let jobs: Vec<(usize, usize)> = args
        .n_list
        .iter()
        .flat_map(|&n| (0..args.trials).map(move |t| (n, t)))
        .collect();

    let results: Vec<(Row, Option<u8>)> = jobs
        .par_iter()
        .map(|&(n, trial)| {
            let seed = trial_seed(cli.seed, n, trial);
            let (outcome, failure) = match run_trial(args, n, seed) {
                Ok(o) => (o, None),
                Err(f) => (Outcome { bits: 0, queries_w: 0, queries_m: 0, correct: false }, Some(f)),
            };
            let row = Row {
                n,
                trial,
                seed,
                target: args.target,
                bits: outcome.bits,
                queries_w: outcome.queries_w,
                queries_m: outcome.queries_m,
                correct: outcome.correct,
                error: failure.as_ref().map(ToString::to_string).unwrap_or_default(),
            };
            (row, failure.map(|f| f.code))
        })
        .collect();

    let worst = results.iter().filter_map(|(_, code)| *code).max();
    let rows: Vec<Row> = results.into_iter().map(|(row, _)| row).collect();
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(&rows)?,
        Format::Json => serde_json::to_string(&rows).expect("rows serialise"),
    };
    emit(cli, &text)?;

    match worst {
        None => Ok(()),
        Some(code) => {
            let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
            Err(Failure { code, kind: "sweep", message: format!("{failed} of {} trials errored", rows.len()) })
        }
    }
}

fn validate(args: &SweepArgs) -> Result<(), Failure> {
    if args.trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    for &n in &args.n_list {
        let min = match args.target {
            Target::DisjDecider => 2,
            _ => 1,
        };
        if n < min {
            return Err(Failure::usage(format!("n={n} is too small for this target")));
        }
        if args.target == Target::DisjDecider {
            decider_params(n, args.epsilon, args.delta)?;
        }
    }
    Ok(())
}

/// Seed of one trial: the first output of the base stream, moved to a
/// stream that is unique for (n, trial).
pub fn trial_seed(base: u64, n: usize, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(((n as u64) << 32) ^ trial as u64);
    rng.gen()
}

fn run_trial(args: &SweepArgs, n: usize, seed: u64) -> Result<Outcome, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let protocol = |trial: crate::protocol::Trial| Outcome {
        bits: trial.record.bits,
        queries_w: 0,
        queries_m: 0,
        correct: trial.record.correct,
    };
    let market = |rng: &mut ChaCha8Rng| -> MarriageMarket { random_market(n, Model::Full, rng) };

    Ok(match args.target {
        Target::NaiveVerify => {
            let m = market(&mut rng);
            let mu = random_perfect_marriage(n, &mut rng);
            protocol(naive(&m, mu, seed)?)
        }
        Target::Gs => protocol(gs(&market(&mut rng), seed)?),
        Target::Estimator => {
            let m = market(&mut rng);
            let mu = random_perfect_marriage(n, &mut rng);
            let delta = args.delta.unwrap_or(0.1);
            protocol(estimate(&m, mu, args.epsilon, delta, args.failure_prob, seed)?)
        }
        Target::DisjDecider => {
            let params = decider_params(n, args.epsilon, args.delta)?;
            let d = planted_instance(&params, &mut rng)?;
            protocol(decide(&d, &params, args.epsilon, seed)?)
        }
        Target::DaQueries => {
            let m = market(&mut rng);
            let run = query_protocol(&DaStrategy, &m, seed)?;
            let (marriage, log) = &run.output;
            Outcome {
                bits: run.bits(),
                queries_w: log.women_side_count(),
                queries_m: log.men_side_count(),
                correct: *marriage == deferred_acceptance(&m),
            }
        }
        Target::OptimalityCheck => {
            let m = market(&mut rng);
            let report = optimality_check(&m, VerifierOrder::Shuffled(seed))?;
            if !report.holds {
                return Err(Failure::contract(format!("optimality accounting fails: {report:?}")));
            }
            Outcome {
                bits: 0,
                queries_w: report.verifier_women_side,
                queries_m: report.rejections,
                correct: report.holds,
            }
        }
    })
}

/// Random x and y with every common element cleared, then with probability
/// 1/2 a single common element planted at a random grid cell.
fn planted_instance(params: &HighMidLowParams, rng: &mut ChaCha8Rng) -> Result<DisjInstance, Failure> {
    let domain = params.domain();
    let len = domain.len();
    let mut x: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
    let mut y: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
    for k in 0..len {
        if x[k] && y[k] {
            if rng.gen() {
                x[k] = false;
            } else {
                y[k] = false;
            }
        }
    }
    if rng.gen() {
        let k = rng.gen_range(0..len);
        x[k] = true;
        y[k] = true;
    }
    Ok(DisjInstance::new(domain, x, y)?)
}

fn to_csv(rows: &[Row]) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| Failure::usage(format!("csv: {e}")))?;
    }
    let bytes = writer.into_inner().map_err(|e| Failure::usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}
