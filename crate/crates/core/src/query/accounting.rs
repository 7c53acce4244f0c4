//! Women-side query accounting for deferred acceptance and for
//! comparison-based verification of a stable marriage.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::adapter::{run_strategy, VerifierStrategy};
use super::{answer_comparison, answer_rank, ComparisonQuery, LoggedQuery, QueryLog, RankQuery};
use crate::market::{deferred_acceptance_with, Courtship, Marriage, MarriageMarket, Model, Side};
use crate::protocol::Verdict;
use crate::{Error, Result};

/// Pairs (w, m) such that w rejected m.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RejectionSet(BTreeSet<(usize, usize)>);

impl RejectionSet {
    /// Fails if `w` already rejected `m`.
    pub fn insert(&mut self, w: usize, m: usize) -> Result<()> {
        if self.0.insert((w, m)) {
            Ok(())
        } else {
            Err(Error::Precondition(format!("w{w} rejected m{m} twice")))
        }
    }

    pub fn contains(&self, w: usize, m: usize) -> bool {
        self.0.contains(&(w, m))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }
}

/// Triples (w, m′, m) meaning "w was found to prefer m′ over m" by a
/// women-side comparison.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComparisonEvidence(BTreeSet<(usize, usize, usize)>);

impl ComparisonEvidence {
    /// Collects the triples implied by the women-side comparisons in `log`.
    /// A yes to "a over b" gives (w, a, b) and a no gives (w, b, a).
    pub fn from_log(log: &QueryLog) -> Self {
        Self(
            log.entries()
                .iter()
                .filter_map(|e| match e.query {
                    LoggedQuery::Comparison(q) if q.side == Side::Woman => Some(if e.answer == 1 {
                        (q.who, q.a, q.b)
                    } else {
                        (q.who, q.b, q.a)
                    }),
                    _ => None,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.0.iter().copied()
    }

    /// Whether some triple (w, _, m) is present.
    pub fn covers(&self, w: usize, m: usize) -> bool {
        self.0.range((w, 0, 0)..(w + 1, 0, 0)).any(|&(_, _, last)| last == m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaAccounting {
    pub marriage: Marriage,
    pub rejections: RejectionSet,
    pub log: QueryLog,
}

struct MeteredCourtship<'a> {
    market: &'a MarriageMarket,
    log: QueryLog,
}

impl Courtship for MeteredCourtship<'_> {
    fn choice_at(&mut self, man: usize, place: usize) -> Result<Option<usize>> {
        if place > self.market.n() {
            return Ok(None);
        }
        answer_rank(self.market, RankQuery::at_place(Side::Man, man, place), &mut self.log).map(Some)
    }

    fn accepts(&mut self, woman: usize, current: Option<usize>, challenger: usize) -> Result<bool> {
        match current {
            // A single woman accepts unconditionally, so nothing is asked.
            None => Ok(true),
            Some(husband) => answer_comparison(
                self.market,
                ComparisonQuery::new(Side::Woman, woman, challenger, husband),
                &mut self.log,
            ),
        }
    }
}

fn require_full(market: &MarriageMarket) -> Result<()> {
    if market.model() == Model::Full {
        Ok(())
    } else {
        Err(Error::Precondition("query accounting needs the full model".into()))
    }
}

/// Men-proposing deferred acceptance with every preference lookup metered.
///
/// Each proposal reads the man's next choice with one men-side rank query.
/// A serenaded woman who is provisionally married costs one women-side
/// comparison, so the women-side count equals the number of rejections.
pub fn da_instrumented(market: &MarriageMarket) -> Result<DaAccounting> {
    require_full(market)?;
    let mut court = MeteredCourtship { market, log: QueryLog::new() };
    let run = deferred_acceptance_with(market.n(), &mut court)?;
    let mut rejections = RejectionSet::default();
    for (w, m) in run.rejections() {
        rejections.insert(w, m)?;
    }
    Ok(DaAccounting { marriage: run.marriage, rejections, log: court.log })
}

/// Order in which the verifier visits candidate pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifierOrder {
    /// Women in index order, then men in index order.
    #[default]
    RowMajor,
    /// A seeded permutation of the row-major order.
    Shuffled(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierRun {
    pub verdict: Verdict,
    pub evidence: ComparisonEvidence,
    pub log: QueryLog,
}

/// Comparison-only stability check of a perfect marriage.
pub fn comparison_verifier(market: &MarriageMarket, mu: &Marriage) -> Result<VerifierRun> {
    comparison_verifier_ordered(market, mu, VerifierOrder::RowMajor)
}

/// For every pair (w, m) with m ≠ μ(w): ask m whether he prefers w over his
/// wife, and only on a yes ask w whether she prefers her husband over m. A
/// no from w exposes a blocking pair. Every pair is visited.
pub fn comparison_verifier_ordered(
    market: &MarriageMarket,
    mu: &Marriage,
    order: VerifierOrder,
) -> Result<VerifierRun> {
    require_full(market)?;
    let strategy = VerifierStrategy { marriage: mu.clone(), order };
    let (verdict, log) = run_strategy(market, &strategy, 0)?;
    Ok(VerifierRun {
        verdict,
        evidence: ComparisonEvidence::from_log(&log),
        log,
    })
}

/// Rejections of deferred acceptance against the women-side evidence of a
/// comparison verifier run on its output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalityReport {
    #[serde(rename = "R")]
    pub rejections: usize,
    #[serde(rename = "Q")]
    pub evidence: usize,
    #[serde(rename = "verifierW")]
    pub verifier_women_side: usize,
    pub holds: bool,
}

/// Checks R ⊆ {(w, m) : (w, _, m) ∈ Q} and |R| ≤ |Q| ≤ verifier women-side
/// count, for the verifier visiting pairs in `order`.
pub fn optimality_check(market: &MarriageMarket, order: VerifierOrder) -> Result<OptimalityReport> {
    let da = da_instrumented(market)?;
    let verifier = comparison_verifier_ordered(market, &da.marriage, order)?;
    let r = da.rejections.len();
    let q = verifier.evidence.len();
    let verifier_w = verifier.log.women_side_count();
    let covered = da.rejections.iter().all(|(w, m)| verifier.evidence.covers(w, m));
    Ok(OptimalityReport {
        rejections: r,
        evidence: q,
        verifier_women_side: verifier_w,
        holds: covered && r <= q && q <= verifier_w,
    })
}
