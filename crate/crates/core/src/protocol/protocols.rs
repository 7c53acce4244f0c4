//! Upper-bound protocols and the disjointness decider built on a finder.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{run_two_party, PartyContext, Protocol, ProtocolRun};
use crate::embeddings::{build_high_mid_low, canonical_mu1, DisjInstance, HighMidLowParams};
use crate::market::{deferred_acceptance_with, divorce_distance, Courtship, Marriage};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
}

/// Bits needed to name one of `n` participants.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

fn check_perfect(mu: &Marriage, n: usize) -> Result<()> {
    if mu.n() != n || !mu.is_perfect() {
        return Err(Error::Precondition(format!(
            "expected a perfect marriage over n={n}"
        )));
    }
    Ok(())
}

fn check_full(ctx: &PartyContext<'_>) -> Result<()> {
    if ctx.profile().is_full() {
        Ok(())
    } else {
        Err(Error::Precondition("protocol needs full preference lists".into()))
    }
}

/// Checks every pair: Bob sends one bit per (w, m) in row-major order
/// telling whether m prefers w over his wife, Alice answers with a single
/// bit. n² + 1 bits.
#[derive(Debug, Clone)]
pub struct NaiveStabilityProtocol {
    pub marriage: Marriage,
}

impl Protocol for NaiveStabilityProtocol {
    type Output = Verdict;

    fn name(&self) -> &str {
        "naive-verify"
    }

    fn alice(&self, ctx: &mut PartyContext<'_>) -> Result<Verdict> {
        let n = ctx.n();
        check_perfect(&self.marriage, n)?;
        let women = ctx.profile();
        let bob_bits = ctx.recv()?;
        if bob_bits.len() != n * n {
            return Err(Error::Protocol(format!("expected {} bits", n * n)));
        }
        let blocked = bob_bits.bits().iter().enumerate().any(|(k, &man_wants)| {
            let (w, m) = (k / n + 1, k % n + 1);
            man_wants && women.lists()[w - 1].prefers_over(m, self.marriage.husband_of(w))
        });
        ctx.send_bit(blocked)?;
        Ok(if blocked { Verdict::Unstable } else { Verdict::Stable })
    }

    fn bob(&self, ctx: &mut PartyContext<'_>) -> Result<Verdict> {
        let n = ctx.n();
        check_perfect(&self.marriage, n)?;
        let men = ctx.profile();
        let bits = (1..=n)
            .flat_map(|w| (1..=n).map(move |m| (w, m)))
            .map(|(w, m)| men.lists()[m - 1].prefers_over(w, self.marriage.wife_of(m)))
            .collect();
        ctx.send(bits)?;
        let blocked = ctx.recv_bit()?;
        Ok(if blocked { Verdict::Unstable } else { Verdict::Stable })
    }
}

/// Deferred acceptance over the wire: Bob announces which woman the next
/// proposer serenades in ⌈log₂ n⌉ bits, Alice answers accept or reject in
/// one bit. Both sides track the provisional marriage.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaleShapleyProtocol;

struct BobCourtship<'c, 'a> {
    ctx: &'c mut PartyContext<'a>,
    width: usize,
}

impl Courtship for BobCourtship<'_, '_> {
    fn choice_at(&mut self, man: usize, place: usize) -> Result<Option<usize>> {
        Ok(self.ctx.profile().lists()[man - 1].at(place))
    }

    fn accepts(&mut self, woman: usize, _current: Option<usize>, _challenger: usize) -> Result<bool> {
        self.ctx.send_uint((woman - 1) as u64, self.width)?;
        self.ctx.recv_bit()
    }
}

impl Protocol for GaleShapleyProtocol {
    type Output = Marriage;

    fn name(&self) -> &str {
        "gs"
    }

    fn alice(&self, ctx: &mut PartyContext<'_>) -> Result<Marriage> {
        check_full(ctx)?;
        let n = ctx.n();
        let width = ceil_log2(n);
        let women = ctx.profile();
        let mut mu = Marriage::empty(n);
        let mut single: BTreeSet<usize> = (1..=n).collect();
        // Bob's proposer is always the lowest-index single man, which Alice
        // can track from the answers she gave.
        while let Some(&man) = single.first() {
            let woman = ctx.recv_uint(width)? as usize + 1;
            if woman > n {
                return Err(Error::Protocol(format!("proposal to w{woman} with n={n}")));
            }
            let current = mu.husband_of(woman);
            let accept = women.lists()[woman - 1].prefers_over(man, current);
            ctx.send_bit(accept)?;
            if accept {
                mu.divorce_woman(woman);
                mu.marry(woman, man)?;
                single.remove(&man);
                if let Some(r) = current {
                    single.insert(r);
                }
            }
        }
        Ok(mu)
    }

    fn bob(&self, ctx: &mut PartyContext<'_>) -> Result<Marriage> {
        check_full(ctx)?;
        let n = ctx.n();
        let width = ceil_log2(n);
        let run = deferred_acceptance_with(n, &mut BobCourtship { ctx, width })?;
        Ok(run.marriage)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FractionVerdict {
    /// At least εn² blocking pairs.
    AtLeast,
    /// At most (ε−δ)n² blocking pairs.
    AtMost,
}

/// Samples pairs with public coins and estimates the blocking fraction.
///
/// k = ⌈ln(2/p) / (2(δ/2)²)⌉ samples; Alice sends one bit per sample, Bob
/// counts the pairs where both bits are set and announces whether the
/// empirical fraction reaches ε − δ/2. k + 1 bits regardless of n.
#[derive(Debug, Clone)]
pub struct BlockingFractionEstimator {
    marriage: Marriage,
    epsilon: f64,
    delta: f64,
    failure_prob: f64,
}

impl BlockingFractionEstimator {
    pub fn new(marriage: Marriage, epsilon: f64, delta: f64, failure_prob: f64) -> Result<Self> {
        if !(delta > 0.0 && epsilon >= delta && epsilon <= 1.0) {
            return Err(Error::parameter(format!(
                "need 0 < delta <= epsilon <= 1, got epsilon={epsilon}, delta={delta}"
            )));
        }
        if !(failure_prob > 0.0 && failure_prob < 1.0) {
            return Err(Error::parameter(format!("failure probability {failure_prob} outside (0,1)")));
        }
        if !marriage.is_perfect() {
            return Err(Error::parameter("estimator needs a perfect marriage"));
        }
        Ok(Self { marriage, epsilon, delta, failure_prob })
    }

    pub fn samples(&self) -> usize {
        let half = self.delta / 2.0;
        ((2.0 / self.failure_prob).ln() / (2.0 * half * half)).ceil() as usize
    }

    pub fn threshold(&self) -> f64 {
        self.epsilon - self.delta / 2.0
    }

    fn draw(&self, ctx: &mut PartyContext<'_>) -> Vec<(usize, usize)> {
        let n = ctx.n();
        let rng = ctx.coins();
        (0..self.samples())
            .map(|_| (rng.gen_range(1..=n), rng.gen_range(1..=n)))
            .collect()
    }
}

impl Protocol for BlockingFractionEstimator {
    type Output = FractionVerdict;

    fn name(&self) -> &str {
        "estimator"
    }

    fn alice(&self, ctx: &mut PartyContext<'_>) -> Result<FractionVerdict> {
        check_perfect(&self.marriage, ctx.n())?;
        let women = ctx.profile();
        let bits = self
            .draw(ctx)
            .into_iter()
            .map(|(w, m)| women.lists()[w - 1].prefers_over(m, self.marriage.husband_of(w)))
            .collect();
        ctx.send(bits)?;
        Ok(verdict(ctx.recv_bit()?))
    }

    fn bob(&self, ctx: &mut PartyContext<'_>) -> Result<FractionVerdict> {
        check_perfect(&self.marriage, ctx.n())?;
        let men = ctx.profile();
        let pairs = self.draw(ctx);
        let alice_bits = ctx.recv()?;
        if alice_bits.len() != pairs.len() {
            return Err(Error::Protocol(format!("expected {} bits", pairs.len())));
        }
        let count = pairs
            .iter()
            .zip(alice_bits.bits())
            .filter(|&(&(w, m), &woman_wants)| {
                woman_wants && men.lists()[m - 1].prefers_over(w, self.marriage.wife_of(m))
            })
            .count();
        let at_least = count as f64 / pairs.len() as f64 >= self.threshold();
        ctx.send_bit(at_least)?;
        Ok(verdict(at_least))
    }
}

fn verdict(at_least: bool) -> FractionVerdict {
    if at_least {
        FractionVerdict::AtLeast
    } else {
        FractionVerdict::AtMost
    }
}

/// Decides DISJ from any finder of an approximately stable marriage on the
/// three-tier market: both parties compare the finder's output with μ₁
/// locally, so no bits are added.
pub struct DisjDecider<'f, F> {
    finder: &'f F,
    mu1: Marriage,
    epsilon: f64,
}

impl<F: Protocol<Output = Marriage>> DisjDecider<'_, F> {
    fn decide(&self, mu: &Marriage) -> Result<u8> {
        let d = divorce_distance(mu, &self.mu1)?;
        Ok((d as f64 <= self.epsilon * self.mu1.n() as f64) as u8)
    }
}

impl<F: Protocol<Output = Marriage>> Protocol for DisjDecider<'_, F> {
    type Output = u8;

    fn name(&self) -> &str {
        "disj-decider"
    }

    fn alice(&self, ctx: &mut PartyContext<'_>) -> Result<u8> {
        let mu = self.finder.alice(ctx)?;
        self.decide(&mu)
    }

    fn bob(&self, ctx: &mut PartyContext<'_>) -> Result<u8> {
        let mu = self.finder.bob(ctx)?;
        self.decide(&mu)
    }
}

/// Embeds `d` into the three-tier market for `params` and decides DISJ with
/// `finder`, which must output a (1−ε)-stable marriage.
pub fn disj_decider<F: Protocol<Output = Marriage>>(
    d: &DisjInstance,
    params: &HighMidLowParams,
    epsilon: f64,
    finder: &F,
    seed: u64,
) -> Result<ProtocolRun<u8>> {
    if d.witness().is_none() {
        return Err(Error::Precondition(
            "instance must be disjoint or uniquely intersecting".into(),
        ));
    }
    if !(epsilon >= 0.0 && epsilon < (1.0 - params.delta()) / 2.0) {
        return Err(Error::parameter(format!(
            "epsilon={epsilon} must be below (1-delta)/2 = {}",
            (1.0 - params.delta()) / 2.0
        )));
    }
    let market = build_high_mid_low(params, d)?;
    let decider = DisjDecider {
        finder,
        mu1: canonical_mu1(params.n())?,
        epsilon,
    };
    run_two_party(&decider, market.women(), market.men(), seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_widths() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(16), 4);
    }

    #[test]
    fn estimator_sample_count() {
        let e = BlockingFractionEstimator::new(Marriage::identity(4), 0.2, 0.1, 0.05).unwrap();
        assert_eq!(e.samples(), 738);
    }

    #[test]
    fn estimator_parameter_errors() {
        let id = Marriage::identity(4);
        assert!(BlockingFractionEstimator::new(id.clone(), 0.1, 0.2, 0.05).is_err());
        assert!(BlockingFractionEstimator::new(id.clone(), 0.2, 0.0, 0.05).is_err());
        assert!(BlockingFractionEstimator::new(id.clone(), 0.2, 0.1, 1.0).is_err());
        assert!(BlockingFractionEstimator::new(Marriage::empty(4), 0.2, 0.1, 0.05).is_err());
    }
}
