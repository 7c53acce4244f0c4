//! JSON market and marriage files.
//!
//! Files are written compact with fields in a fixed order, so a file
//! produced by `to_json` reloads and re-serialises to the same bytes.

use serde::{Deserialize, Serialize};

use super::{Marriage, MarriageMarket, Model, PreferenceProfile};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketFile {
    pub n: usize,
    pub model: Model,
    pub women: Vec<Vec<usize>>,
    pub men: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarriageFile {
    pub n: usize,
    pub pairs: Vec<[usize; 2]>,
}

impl From<&MarriageMarket> for MarketFile {
    fn from(m: &MarriageMarket) -> Self {
        Self {
            n: m.n(),
            model: m.model(),
            women: m.women().to_vecs(),
            men: m.men().to_vecs(),
        }
    }
}

impl TryFrom<MarketFile> for MarriageMarket {
    type Error = Error;

    fn try_from(f: MarketFile) -> Result<Self> {
        MarriageMarket::new(
            f.model,
            PreferenceProfile::new(f.n, f.women)?,
            PreferenceProfile::new(f.n, f.men)?,
        )
    }
}

impl From<&Marriage> for MarriageFile {
    fn from(mu: &Marriage) -> Self {
        Self {
            n: mu.n(),
            pairs: mu.pairs().map(|(w, m)| [w, m]).collect(),
        }
    }
}

impl TryFrom<MarriageFile> for Marriage {
    type Error = Error;

    fn try_from(f: MarriageFile) -> Result<Self> {
        Marriage::from_pairs(f.n, f.pairs.into_iter().map(|[w, m]| (w, m)))
    }
}

impl MarriageMarket {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MarketFile::from(self)).expect("market file serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<MarketFile>(s)?.try_into()
    }
}

impl Marriage {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MarriageFile::from(self)).expect("marriage file serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<MarriageFile>(s)?.try_into()
    }
}
