//! `solve`, `enumerate`, `verify` and `optimality-check`.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use stablelab::embeddings::{verify_certificate, EmbeddingCertificate};
use stablelab::market::{deferred_acceptance, distance_to_stability, enumerate_stable, MarriageFile, Model};
use stablelab::query::{optimality_check, VerifierOrder};
use stablelab::Error;

use crate::failure::Failure;
use crate::files::{emit, read_market, read_marriage, read_text};
use crate::Cli;

#[derive(Debug, Args)]
pub struct MarketArg {
    /// Market JSON file.
    pub market: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Market JSON file.
    pub market: PathBuf,

    /// Marriage JSON file.
    pub marriage: PathBuf,

    /// Certificate whose unique stable marriage lets the distance be
    /// computed past the enumeration bound.
    #[arg(long)]
    pub cert: Option<PathBuf>,

    /// Check the certificate against the brute-force oracle first.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    RowMajor,
    Shuffled,
}

#[derive(Debug, Args)]
pub struct OptimalityArgs {
    /// Market JSON file with full preference lists.
    pub market: PathBuf,

    /// Pair order of the verifier; shuffled uses the global seed.
    #[arg(long, value_enum, default_value_t = Order::RowMajor)]
    pub order: Order,
}

pub fn solve(cli: &Cli, args: &MarketArg) -> Result<(), Failure> {
    let market = read_market(&args.market)?;
    emit(cli, &deferred_acceptance(&market).to_json())
}

#[derive(Serialize)]
struct Enumeration {
    count: usize,
    marriages: Vec<MarriageFile>,
}

pub fn enumerate(cli: &Cli, args: &MarketArg) -> Result<(), Failure> {
    let market = read_market(&args.market)?;
    let stable = enumerate_stable(&market)?;
    let report = Enumeration {
        count: stable.len(),
        marriages: stable.iter().map(MarriageFile::from).collect(),
    };
    emit(cli, &to_json(&report))
}

#[derive(Serialize)]
struct VerifyReport {
    stable: bool,
    blocking_pairs: Vec<[usize; 2]>,
    /// Absent when the market is partial or too large without a certificate.
    distance: Option<usize>,
    /// Why `distance` is absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    distance_error: Option<String>,
}

pub fn verify(cli: &Cli, args: &VerifyArgs) -> Result<(), Failure> {
    let market = read_market(&args.market)?;
    let mu = read_marriage(&args.marriage)?;
    let blocking = market.blocking_pairs(&mu)?;

    let cert = match &args.cert {
        Some(path) => Some(EmbeddingCertificate::from_json(&read_text(path)?)?),
        None => None,
    };
    if let (Some(cert), true) = (&cert, args.check) {
        if !verify_certificate(&market, cert)? {
            return Err(Failure::contract(format!("market fails its {:?} certificate", cert.kind)));
        }
    }
    let unique = cert.as_ref().and_then(EmbeddingCertificate::unique);

    let (distance, distance_error) = if market.model() == Model::Full {
        match distance_to_stability(&market, &mu, unique) {
            Ok(d) => (Some(d), None),
            Err(e @ Error::Capacity { .. }) => (None, Some(e.to_string())),
            Err(e) => return Err(e.into()),
        }
    } else {
        (None, Some("distance is defined for full preference lists".to_owned()))
    };

    let report = VerifyReport {
        stable: blocking.is_empty(),
        blocking_pairs: blocking.into_iter().map(|(w, m)| [w, m]).collect(),
        distance,
        distance_error,
    };
    emit(cli, &to_json(&report))
}

pub fn optimality(cli: &Cli, args: &OptimalityArgs) -> Result<(), Failure> {
    let market = read_market(&args.market)?;
    let order = match args.order {
        Order::RowMajor => VerifierOrder::RowMajor,
        Order::Shuffled => VerifierOrder::Shuffled(cli.seed),
    };
    let report = optimality_check(&market, order)?;
    emit(cli, &to_json(&report))?;
    if !report.holds {
        return Err(Failure::contract("rejection set exceeds the verifier evidence"));
    }
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serialises")
}
