//! `protocol`: one metered two-party run, reported as a run record.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stablelab::embeddings::{choose_delta, DisjInstance, HighMidLowParams};
use stablelab::market::{deferred_acceptance, Marriage, MarriageFile, MarriageMarket};
use stablelab::protocol::{
    disj_decider, run_two_party, BlockingFractionEstimator, FractionVerdict, GaleShapleyProtocol,
    NaiveStabilityProtocol, RunRecord, Verdict,
};

use crate::analyze::to_json;
use crate::failure::Failure;
use crate::files::{emit, parse_disj, read_market, read_marriage, write_file};
use crate::Cli;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolName {
    NaiveVerify,
    Gs,
    Estimator,
    DisjDecider,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    #[arg(value_enum)]
    pub name: ProtocolName,

    /// Market JSON file. disj-decider builds its own market from --disj.
    pub market: Option<PathBuf>,

    /// Marriage to test (naive-verify, estimator).
    #[arg(long)]
    pub marriage: Option<PathBuf>,

    /// Blocking fraction threshold of the estimator, or the approximation
    /// slack of the disj-decider.
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,

    /// Gap of the estimator (default 0.1), or the tier parameter of the
    /// disj-decider (default: the largest valid one for --epsilon).
    #[arg(long)]
    pub delta: Option<f64>,

    /// Failure probability of the estimator.
    #[arg(long, default_value_t = 0.05)]
    pub failure_prob: f64,

    /// Market size of the disj-decider.
    #[arg(long)]
    pub n: Option<usize>,

    /// DISJ instance of the disj-decider: zeros, random, unique:i,j or a file.
    #[arg(long, default_value = "zeros")]
    pub disj: String,

    /// Write the transcript dump here.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

/// A run record together with its transcript dump.
pub struct Trial {
    pub record: RunRecord,
    pub transcript: String,
}

pub fn run(cli: &Cli, args: &ProtocolArgs) -> Result<(), Failure> {
    let trial = match args.name {
        ProtocolName::DisjDecider => {
            let n = args.n.ok_or_else(|| Failure::usage("disj-decider needs --n"))?;
            let params = decider_params(n, args.epsilon, args.delta)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let d = parse_disj(&args.disj, params.domain(), &mut rng)?;
            decide(&d, &params, args.epsilon, cli.seed)?
        }
        name => {
            let path = args.market.as_ref().ok_or_else(|| Failure::usage("this protocol needs a market file"))?;
            let market = read_market(path)?;
            let marriage = || -> Result<Marriage, Failure> {
                let path = args.marriage.as_ref().ok_or_else(|| Failure::usage("this protocol needs --marriage"))?;
                read_marriage(path)
            };
            match name {
                ProtocolName::NaiveVerify => naive(&market, marriage()?, cli.seed)?,
                ProtocolName::Gs => gs(&market, cli.seed)?,
                ProtocolName::Estimator => {
                    let delta = args.delta.unwrap_or(0.1);
                    estimate(&market, marriage()?, args.epsilon, delta, args.failure_prob, cli.seed)?
                }
                ProtocolName::DisjDecider => unreachable!("handled above"),
            }
        }
    };
    if let Some(path) = &args.transcript {
        write_file(path, &trial.transcript)?;
    }
    emit(cli, &to_json(&trial.record))
}

pub fn decider_params(n: usize, epsilon: f64, delta: Option<f64>) -> Result<HighMidLowParams, Failure> {
    Ok(match delta {
        Some(delta) => HighMidLowParams::new(n, delta)?,
        None => choose_delta(n, epsilon)?,
    })
}

fn record(protocol: &str, n: usize, seed: u64, bits: usize, output: serde_json::Value, correct: bool) -> RunRecord {
    RunRecord { protocol: protocol.to_owned(), n, seed, bits, output, correct }
}

pub fn naive(market: &MarriageMarket, mu: Marriage, seed: u64) -> Result<Trial, Failure> {
    let expected = market.is_stable(&mu)?;
    let run = run_two_party(&NaiveStabilityProtocol { marriage: mu }, market.women(), market.men(), seed)?;
    let correct = (run.output == Verdict::Stable) == expected;
    Ok(Trial {
        record: record("naive-verify", market.n(), seed, run.bits(), serde_json::to_value(run.output).unwrap(), correct),
        transcript: run.transcript.dump(),
    })
}

pub fn gs(market: &MarriageMarket, seed: u64) -> Result<Trial, Failure> {
    let run = run_two_party(&GaleShapleyProtocol, market.women(), market.men(), seed)?;
    let correct = run.output == deferred_acceptance(market);
    let output = serde_json::to_value(MarriageFile::from(&run.output)).unwrap();
    Ok(Trial {
        record: record("gs", market.n(), seed, run.bits(), output, correct),
        transcript: run.transcript.dump(),
    })
}

/// Correct when the verdict matches the side of the gap the true blocking
/// fraction lies on. Inside the gap either verdict is accepted.
pub fn estimate(
    market: &MarriageMarket,
    mu: Marriage,
    epsilon: f64,
    delta: f64,
    failure_prob: f64,
    seed: u64,
) -> Result<Trial, Failure> {
    let n = market.n();
    let fraction = market.blocking_pairs(&mu)?.len() as f64 / (n * n) as f64;
    let est = BlockingFractionEstimator::new(mu, epsilon, delta, failure_prob)?;
    let run = run_two_party(&est, market.women(), market.men(), seed)?;
    let correct = if fraction >= epsilon {
        run.output == FractionVerdict::AtLeast
    } else if fraction <= epsilon - delta {
        run.output == FractionVerdict::AtMost
    } else {
        true
    };
    Ok(Trial {
        record: record("estimator", n, seed, run.bits(), serde_json::to_value(run.output).unwrap(), correct),
        transcript: run.transcript.dump(),
    })
}

pub fn decide(d: &DisjInstance, params: &HighMidLowParams, epsilon: f64, seed: u64) -> Result<Trial, Failure> {
    let run = disj_decider(d, params, epsilon, &GaleShapleyProtocol, seed)?;
    let correct = run.output == d.disj();
    Ok(Trial {
        record: record("disj-decider", params.n(), seed, run.bits(), run.output.into(), correct),
        transcript: run.transcript.dump(),
    })
}
