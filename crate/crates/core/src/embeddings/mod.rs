//! Generators that embed set-disjointness instances, or smaller markets,
//! into marriage markets whose stable marriages reveal the answer.
//!
//! Every generator is deterministic: ties the constructions leave open are
//! broken by ascending index unless a [`PaddingOrder`] says otherwise.

mod certificate;
mod disj;
mod lifts;
mod reductions;
mod tiers;

pub use certificate::{verify_certificate, CertificateKind, EmbeddingCertificate};
pub use disj::{DisjDomain, DisjFile, DisjInstance, IntersectionWitness};
pub use lifts::{
    complete_preferences, complete_preferences_with, embed_unique_full, lift_single_to_married,
    negate_single, PaddingOrder,
};
pub use reductions::{
    embed_find_stable_partial, embed_is_single, embed_verify_stability,
    find_stable_partial_certificate, is_single_certificate, shifted_identity,
    verify_stability_certificate,
};
pub use tiers::{
    build_high_mid_low, canonical_mu0, canonical_mu1, choose_delta, high_mid_low_certificate,
    HighMidLowParams, Tier,
};
