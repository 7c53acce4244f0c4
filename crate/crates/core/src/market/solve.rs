//! Men-proposing deferred acceptance.

use std::collections::BTreeSet;

use super::{Marriage, MarriageMarket};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NightOutcome {
    /// The woman was provisionally single and accepted.
    Engaged,
    /// The woman traded up and rejected her provisional husband.
    Accepted { rejected: usize },
    /// The woman rejected the serenading man.
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Night {
    pub man: usize,
    pub woman: usize,
    pub outcome: NightOutcome,
}

impl Night {
    /// The (woman, man) rejection this night produced, if any.
    pub fn rejection(&self) -> Option<(usize, usize)> {
        match self.outcome {
            NightOutcome::Engaged => None,
            NightOutcome::Accepted { rejected } => Some((self.woman, rejected)),
            NightOutcome::Rejected => Some((self.woman, self.man)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaRun {
    pub marriage: Marriage,
    pub nights: Vec<Night>,
}

impl DaRun {
    pub fn rejections(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nights.iter().filter_map(Night::rejection)
    }
}

/// Where the men's and women's answers come from during a run.
///
/// Plain runs read the market directly; instrumented and two-party runs
/// route the same questions through query logs or a metered channel.
pub trait Courtship {
    /// The woman at 1-based `place` on `man`'s list, or `None` once his list
    /// is exhausted.
    fn choice_at(&mut self, man: usize, place: usize) -> Result<Option<usize>>;

    /// Whether `woman` accepts `challenger`, given her provisional husband.
    fn accepts(&mut self, woman: usize, current: Option<usize>, challenger: usize) -> Result<bool>;
}

pub struct MarketCourtship<'a>(pub &'a MarriageMarket);

impl Courtship for MarketCourtship<'_> {
    fn choice_at(&mut self, man: usize, place: usize) -> Result<Option<usize>> {
        Ok(self.0.men().lists[man - 1].at(place))
    }

    fn accepts(&mut self, woman: usize, current: Option<usize>, challenger: usize) -> Result<bool> {
        let list = &self.0.women().lists[woman - 1];
        Ok(list.prefers_over(challenger, current))
    }
}

/// Runs deferred acceptance over `n` couples. Each night the lowest-index
/// provisionally-single man with someone left to serenade proposes to the
/// next woman on his list.
pub fn deferred_acceptance_with(n: usize, court: &mut impl Courtship) -> Result<DaRun> {
    let mut mu = Marriage::empty(n);
    let mut next_place = vec![1usize; n];
    let mut single: BTreeSet<usize> = (1..=n).collect();
    let mut nights = Vec::new();

    while let Some(man) = single.pop_first() {
        let Some(woman) = court.choice_at(man, next_place[man - 1])? else {
            // List exhausted: he stays single for good.
            continue;
        };
        next_place[man - 1] += 1;
        let current = mu.husband_of(woman);
        let outcome = if court.accepts(woman, current, man)? {
            mu.divorce_woman(woman);
            mu.marry(woman, man)?;
            match current {
                Some(rejected) => {
                    single.insert(rejected);
                    NightOutcome::Accepted { rejected }
                }
                None => NightOutcome::Engaged,
            }
        } else {
            single.insert(man);
            NightOutcome::Rejected
        };
        nights.push(Night { man, woman, outcome });
    }
    Ok(DaRun { marriage: mu, nights })
}

pub fn deferred_acceptance_trace(market: &MarriageMarket) -> DaRun {
    deferred_acceptance_with(market.n(), &mut MarketCourtship(market))
        .expect("reading a validated market cannot fail")
}

/// The M-optimal stable marriage.
pub fn deferred_acceptance(market: &MarriageMarket) -> Marriage {
    deferred_acceptance_trace(market).marriage
}
