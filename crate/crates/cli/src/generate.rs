//! `generate`: random markets, disjointness embeddings and market lifts.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use stablelab::embeddings::{
    build_high_mid_low, complete_preferences_with, embed_find_stable_partial, embed_is_single, embed_unique_full,
    embed_verify_stability, find_stable_partial_certificate, high_mid_low_certificate, is_single_certificate,
    lift_single_to_married, negate_single, verify_certificate, verify_stability_certificate, DisjDomain,
    EmbeddingCertificate, HighMidLowParams, PaddingOrder,
};
use stablelab::market::{random_market, MarriageMarket, Model, Side};

use crate::failure::Failure;
use crate::files::{emit, parse_disj, read_market, write_file};
use crate::Cli;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Random,
    VerifyEmbed,
    PartialEmbed,
    Hml,
    IsSingle,
    Complete,
    UniqueFull,
    NegateSingle,
    LiftMarried,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Full,
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Woman,
    Man,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Padding {
    Ascending,
    Descending,
    Shuffled,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,

    /// Number of participants per side (random, verify-embed, partial-embed,
    /// hml, is-single).
    #[arg(long)]
    pub n: Option<usize>,

    /// Tier parameter of the hml construction.
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,

    /// DISJ instance: zeros, random, unique:i,j or a JSON file.
    #[arg(long, default_value = "zeros")]
    pub disj: String,

    /// Preference model of a random market.
    #[arg(long, value_enum, default_value_t = ModelArg::Full)]
    pub model: ModelArg,

    /// Side of the distinguished participant of is-single.
    #[arg(long, value_enum, default_value_t = SideArg::Woman)]
    pub side: SideArg,

    /// Input market of complete, unique-full, negate-single and lift-married.
    #[arg(long)]
    pub market: Option<PathBuf>,

    /// Distinguished woman of negate-single and lift-married.
    #[arg(long)]
    pub woman: Option<usize>,

    /// Order of the padding block appended by complete.
    #[arg(long, value_enum, default_value_t = Padding::Ascending)]
    pub padding: Padding,

    /// Write the certificate or distinguished participants here.
    #[arg(long)]
    pub cert: Option<PathBuf>,

    /// Check the certificate against the brute-force oracle before writing.
    #[arg(long)]
    pub check: bool,
}

impl GenerateArgs {
    fn n(&self) -> Result<usize, Failure> {
        match self.n {
            Some(n) if n >= 1 => Ok(n),
            Some(_) => Err(Failure::usage("--n must be at least 1")),
            None => Err(Failure::usage(format!("--kind {:?} needs --n", self.kind))),
        }
    }

    fn input(&self) -> Result<MarriageMarket, Failure> {
        let path = self.market.as_ref().ok_or_else(|| Failure::usage("this kind needs --market"))?;
        read_market(path)
    }

    fn woman(&self) -> Result<usize, Failure> {
        self.woman.ok_or_else(|| Failure::usage("this kind needs --woman"))
    }
}

/// What goes into the sidecar file.
enum Sidecar {
    Certificate(EmbeddingCertificate),
    Note(serde_json::Value),
    Nothing,
}

pub fn run(cli: &Cli, args: &GenerateArgs) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let (market, sidecar) = build(args, &mut rng, cli.seed)?;

    if args.check {
        if let Sidecar::Certificate(cert) = &sidecar {
            if !verify_certificate(&market, cert)? {
                return Err(Failure::contract(format!(
                    "generated market fails its {:?} certificate",
                    cert.kind
                )));
            }
        }
    }
    if let Some(path) = &args.cert {
        let text = match &sidecar {
            Sidecar::Certificate(cert) => cert.to_json(),
            Sidecar::Note(value) => value.to_string(),
            Sidecar::Nothing => EmbeddingCertificate::none().to_json(),
        };
        write_file(path, &text)?;
    }
    emit(cli, &market.to_json())
}

fn build(args: &GenerateArgs, rng: &mut ChaCha8Rng, seed: u64) -> Result<(MarriageMarket, Sidecar), Failure> {
    Ok(match args.kind {
        Kind::Random => {
            let model = match args.model {
                ModelArg::Full => Model::Full,
                ModelArg::Partial => Model::Partial,
            };
            (random_market(args.n()?, model, rng), Sidecar::Nothing)
        }
        Kind::VerifyEmbed => {
            let d = parse_disj(&args.disj, DisjDomain::OffDiagonal(args.n()?), rng)?;
            (embed_verify_stability(&d)?, Sidecar::Certificate(verify_stability_certificate(&d)?))
        }
        Kind::PartialEmbed => {
            let d = parse_disj(&args.disj, DisjDomain::OffDiagonal(args.n()?), rng)?;
            (embed_find_stable_partial(&d)?, Sidecar::Certificate(find_stable_partial_certificate(&d)?))
        }
        Kind::Hml => {
            let p = HighMidLowParams::new(args.n()?, args.delta)?;
            let d = parse_disj(&args.disj, p.domain(), rng)?;
            (build_high_mid_low(&p, &d)?, Sidecar::Certificate(high_mid_low_certificate(&p, &d)?))
        }
        Kind::IsSingle => {
            let side = match args.side {
                SideArg::Woman => Side::Woman,
                SideArg::Man => Side::Man,
            };
            let d = parse_disj(&args.disj, DisjDomain::OffDiagonal(args.n()?), rng)?;
            let (market, _) = embed_is_single(&d, side)?;
            (market, Sidecar::Certificate(is_single_certificate(&d, side)?))
        }
        Kind::Complete => {
            let order = match args.padding {
                Padding::Ascending => PaddingOrder::Ascending,
                Padding::Descending => PaddingOrder::Descending,
                Padding::Shuffled => PaddingOrder::Shuffled(seed),
            };
            (complete_preferences_with(&args.input()?, order), Sidecar::Nothing)
        }
        Kind::UniqueFull => (embed_unique_full(&args.input()?), Sidecar::Nothing),
        Kind::NegateSingle => {
            let w = args.woman()?;
            let (market, man) = negate_single(&args.input()?, w)?;
            (market, Sidecar::Note(json!({ "woman": w, "man": man })))
        }
        Kind::LiftMarried => {
            let (market, (w, m)) = lift_single_to_married(&args.input()?, args.woman()?)?;
            (market, Sidecar::Note(json!({ "couple": [w, m] })))
        }
    })
}
