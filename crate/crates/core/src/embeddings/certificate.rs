use serde::{Deserialize, Serialize};

use crate::market::{enumerate_stable, Marriage, MarriageFile, MarriageMarket};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// No claim.
    None,
    /// The marriage is stable.
    Stable,
    /// The marriage is unstable.
    Unstable,
    /// The marriage is the only stable marriage of the market.
    UniqueStable,
}

/// What a generator claims about the market it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingCertificate {
    pub kind: CertificateKind,
    pub marriage: Option<Marriage>,
    /// DISJ of the embedded instance, when there is one.
    pub disj: Option<bool>,
}

impl EmbeddingCertificate {
    pub fn none() -> Self {
        Self { kind: CertificateKind::None, marriage: None, disj: None }
    }

    pub fn stable(mu: Marriage, disj: bool) -> Self {
        Self { kind: CertificateKind::Stable, marriage: Some(mu), disj: Some(disj) }
    }

    pub fn unstable(mu: Marriage, disj: bool) -> Self {
        Self { kind: CertificateKind::Unstable, marriage: Some(mu), disj: Some(disj) }
    }

    pub fn unique_stable(mu: Marriage, disj: bool) -> Self {
        Self { kind: CertificateKind::UniqueStable, marriage: Some(mu), disj: Some(disj) }
    }

    /// The certified unique stable marriage, if that is the claim.
    pub fn unique(&self) -> Option<&Marriage> {
        match self.kind {
            CertificateKind::UniqueStable => self.marriage.as_ref(),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CertificateFile::from(self)).expect("certificate serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<CertificateFile>(s)?.try_into()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    kind: CertificateKind,
    marriage: Option<MarriageFile>,
    disj: Option<u8>,
}

impl From<&EmbeddingCertificate> for CertificateFile {
    fn from(c: &EmbeddingCertificate) -> Self {
        Self {
            kind: c.kind,
            marriage: c.marriage.as_ref().map(MarriageFile::from),
            disj: c.disj.map(u8::from),
        }
    }
}

impl TryFrom<CertificateFile> for EmbeddingCertificate {
    type Error = Error;

    fn try_from(f: CertificateFile) -> Result<Self> {
        let marriage = f.marriage.map(Marriage::try_from).transpose()?;
        if f.kind != CertificateKind::None && marriage.is_none() {
            return Err(Error::parameter("certificate claim needs a marriage"));
        }
        let disj = match f.disj {
            None => None,
            Some(0) => Some(false),
            Some(1) => Some(true),
            Some(b) => return Err(Error::parameter(format!("disj value {b}"))),
        };
        Ok(Self { kind: f.kind, marriage, disj })
    }
}

/// Checks the certificate's claim against the market by enumeration.
pub fn verify_certificate(market: &MarriageMarket, cert: &EmbeddingCertificate) -> Result<bool> {
    let Some(mu) = &cert.marriage else {
        return Ok(cert.kind == CertificateKind::None);
    };
    if mu.n() != market.n() {
        return Ok(false);
    }
    Ok(match cert.kind {
        CertificateKind::None => true,
        CertificateKind::Stable => market.is_stable(mu)?,
        CertificateKind::Unstable => !market.is_stable(mu)?,
        CertificateKind::UniqueStable => enumerate_stable(market)?.as_slice() == std::slice::from_ref(mu),
    })
}
