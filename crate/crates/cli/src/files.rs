//! Reading inputs and writing the primary output.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stablelab::embeddings::{DisjDomain, DisjInstance};
use stablelab::market::{Marriage, MarriageMarket};

use crate::failure::Failure;
use crate::Cli;

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

pub fn read_market(path: &Path) -> Result<MarriageMarket, Failure> {
    Ok(MarriageMarket::from_json(&read_text(path)?)?)
}

pub fn read_marriage(path: &Path) -> Result<Marriage, Failure> {
    Ok(Marriage::from_json(&read_text(path)?)?)
}

pub fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, with_newline(text)).map_err(|e| Failure::io(path, e))
}

/// Writes to `--out` when given, else to stdout.
pub fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => write_file(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(with_newline(text).as_bytes())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}

fn with_newline(text: &str) -> String {
    if text.ends_with('\n') {
        text.to_owned()
    } else {
        format!("{text}\n")
    }
}

/// Builds a DISJ instance from `zeros`, `random`, `unique:i,j` or a file path.
///
/// `random` draws every bit of x and y independently with probability 1/2.
pub fn parse_disj(spec: &str, domain: DisjDomain, rng: &mut ChaCha8Rng) -> Result<DisjInstance, Failure> {
    if spec == "zeros" {
        return Ok(DisjInstance::zeros(domain));
    }
    if spec == "random" {
        let len = domain.len();
        let x = (0..len).map(|_| rng.gen()).collect();
        let y = (0..len).map(|_| rng.gen()).collect();
        return Ok(DisjInstance::new(domain, x, y)?);
    }
    if let Some(rest) = spec.strip_prefix("unique:") {
        let (i, j) = rest
            .split_once(',')
            .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)))
            .ok_or_else(|| Failure::usage(format!("expected unique:i,j, got {spec}")))?;
        return Ok(DisjInstance::unique_at(domain, i, j)?);
    }
    let d = DisjInstance::from_json(&read_text(Path::new(spec))?)?;
    if d.domain() != domain {
        return Err(Failure::usage(format!(
            "disj file domain {:?} does not match the expected {domain:?}",
            d.domain()
        )));
    }
    Ok(d)
}
