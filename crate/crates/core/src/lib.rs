//! A laboratory for stable marriage markets and their communication cost.
//!
//! The crate is split along the objects it manipulates:
//!
//! * [`market`]: preference profiles, marriages, stability predicates,
//!   men-proposing deferred acceptance, brute-force enumeration of stable
//!   marriages and the divorce-distance metric.
//! * [`embeddings`]: generators that turn set-disjointness instances (and
//!   smaller markets) into marriage markets whose stable marriages encode the
//!   answer, together with oracle-checkable certificates.
//! * [`protocol`]: a bit-metered two-party simulator where Alice holds the
//!   women's preferences and Bob holds the men's.
//! * [`query`]: comparison and rank query oracles with metering, the
//!   query-to-protocol adapter and deferred-acceptance query accounting.
//!
//! All participant indices are 1-based.

pub mod embeddings;
mod error;
pub mod market;
pub mod protocol;
pub mod query;

pub use error::{Error, Result};
