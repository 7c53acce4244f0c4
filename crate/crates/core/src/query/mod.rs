//! Query models over preference profiles.
//!
//! A query model lets an algorithm learn preferences only by asking
//! questions, each addressed to one side of the market, and meters every
//! answer. Comparison queries ask whether a participant prefers one
//! candidate over another; rank queries ask where a candidate sits on a
//! list or who sits at a given place.

mod accounting;
mod adapter;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::market::{MarriageMarket, Model, Side};
use crate::{Error, Result};

pub use accounting::{
    comparison_verifier, comparison_verifier_ordered, da_instrumented, optimality_check,
    ComparisonEvidence, DaAccounting, OptimalityReport, RejectionSet, VerifierOrder, VerifierRun,
};
pub use adapter::{
    query_protocol, run_strategy, BooleanQuery, DaStrategy, MarketOracle, QueryOracle,
    QueryProtocol, QueryStrategy, VerifierStrategy,
};

/// "Does `who` on `side` prefer `a` over `b`?"
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComparisonQuery {
    pub side: Side,
    pub who: usize,
    pub a: usize,
    pub b: usize,
}

impl ComparisonQuery {
    pub fn new(side: Side, who: usize, a: usize, b: usize) -> Self {
        Self { side, who, a, b }
    }
}

impl fmt::Display for ComparisonQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let other = match self.side {
            Side::Woman => 'm',
            Side::Man => 'w',
        };
        write!(
            f,
            "{}{} prefers {other}{} over {other}{}",
            side_letter(self.side),
            self.who,
            self.a,
            self.b
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankKind {
    /// 1-based position of `target` on the list.
    RankOf(usize),
    /// The candidate at 1-based place `k`.
    AtPlace(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankQuery {
    pub side: Side,
    pub who: usize,
    pub kind: RankKind,
}

impl RankQuery {
    pub fn rank_of(side: Side, who: usize, target: usize) -> Self {
        Self { side, who, kind: RankKind::RankOf(target) }
    }

    pub fn at_place(side: Side, who: usize, k: usize) -> Self {
        Self { side, who, kind: RankKind::AtPlace(k) }
    }
}

impl fmt::Display for RankQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let me = side_letter(self.side);
        match self.kind {
            RankKind::RankOf(t) => write!(f, "rank of {t} on {me}{}", self.who),
            RankKind::AtPlace(k) => write!(f, "place {k} on {me}{}", self.who),
        }
    }
}

fn side_letter(side: Side) -> char {
    match side {
        Side::Woman => 'w',
        Side::Man => 'm',
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoggedQuery {
    Comparison(ComparisonQuery),
    Rank(RankQuery),
}

impl LoggedQuery {
    pub fn side(&self) -> Side {
        match self {
            LoggedQuery::Comparison(q) => q.side,
            LoggedQuery::Rank(q) => q.side,
        }
    }
}

impl fmt::Display for LoggedQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoggedQuery::Comparison(q) => q.fmt(f),
            LoggedQuery::Rank(q) => q.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QueryEntry {
    pub query: LoggedQuery,
    /// 0 or 1 for comparisons, an index or rank for rank queries.
    pub answer: usize,
}

/// Ordered record of answered queries with per-side counters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLog {
    women_side: usize,
    men_side: usize,
    entries: Vec<QueryEntry>,
}

impl QueryLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, query: LoggedQuery, answer: usize) {
        match query.side() {
            Side::Woman => self.women_side += 1,
            Side::Man => self.men_side += 1,
        }
        self.entries.push(QueryEntry { query, answer });
    }

    pub fn women_side_count(&self) -> usize {
        self.women_side
    }

    pub fn men_side_count(&self) -> usize {
        self.men_side
    }

    pub fn count(&self, side: Side) -> usize {
        match side {
            Side::Woman => self.women_side,
            Side::Man => self.men_side,
        }
    }

    pub fn total(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[QueryEntry] {
        &self.entries
    }

    /// One line per query: `W|M <descriptor> -> <answer>`.
    pub fn dump(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{} {} -> {}\n", e.query.side(), e.query, e.answer))
            .collect()
    }
}

fn check_index(n: usize, i: usize, what: &str) -> Result<()> {
    if i == 0 || i > n {
        Err(Error::Query(format!("{what} {i} outside [1,{n}]")))
    } else {
        Ok(())
    }
}

/// Answers a comparison query from `market` and meters it.
pub fn answer_comparison(market: &MarriageMarket, q: ComparisonQuery, log: &mut QueryLog) -> Result<bool> {
    let answer = compare(market.profile(q.side), q)?;
    log.record(LoggedQuery::Comparison(q), answer as usize);
    Ok(answer)
}

pub(crate) fn compare(profile: &crate::market::PreferenceProfile, q: ComparisonQuery) -> Result<bool> {
    let n = profile.n();
    check_index(n, q.who, "participant")?;
    check_index(n, q.a, "candidate")?;
    check_index(n, q.b, "candidate")?;
    if q.a == q.b {
        return Err(Error::Query(format!("comparison of {} with itself", q.a)));
    }
    Ok(profile.lists()[q.who - 1].prefers(q.a, q.b))
}

/// Answers a rank query from `market` and meters it. Full model only.
pub fn answer_rank(market: &MarriageMarket, q: RankQuery, log: &mut QueryLog) -> Result<usize> {
    if market.model() != Model::Full {
        return Err(Error::Unsupported("rank queries need full preference lists".into()));
    }
    let n = market.n();
    check_index(n, q.who, "participant")?;
    let list = &market.profile(q.side).lists()[q.who - 1];
    let answer = match q.kind {
        RankKind::RankOf(target) => {
            check_index(n, target, "candidate")?;
            list.rank_of(target)
        }
        RankKind::AtPlace(k) => {
            check_index(n, k, "place")?;
            list.at(k)
        }
    }
    .ok_or_else(|| Error::Query(format!("{q} has no answer")))?;
    log.record(LoggedQuery::Rank(q), answer);
    Ok(answer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn market(women: Vec<Vec<usize>>, men: Vec<Vec<usize>>) -> MarriageMarket {
        MarriageMarket::from_lists(Model::Full, women, men).unwrap()
    }

    #[test]
    fn comparison_is_metered_per_side() {
        let m = market(vec![vec![2, 1], vec![1, 2]], vec![vec![1, 2], vec![1, 2]]);
        let mut log = QueryLog::new();
        assert!(answer_comparison(&m, ComparisonQuery::new(Side::Woman, 1, 2, 1), &mut log).unwrap());
        assert_eq!((log.women_side_count(), log.men_side_count()), (1, 0));
        assert!(!answer_comparison(&m, ComparisonQuery::new(Side::Man, 2, 2, 1), &mut log).unwrap());
        assert_eq!((log.women_side_count(), log.men_side_count()), (1, 1));
    }

    #[test]
    fn repeated_query_is_not_deduplicated() {
        let m = market(vec![vec![2, 1], vec![1, 2]], vec![vec![1, 2], vec![1, 2]]);
        let mut log = QueryLog::new();
        let q = ComparisonQuery::new(Side::Woman, 1, 2, 1);
        answer_comparison(&m, q, &mut log).unwrap();
        answer_comparison(&m, q, &mut log).unwrap();
        assert_eq!(log.total(), 2);
    }

    #[test]
    fn self_comparison_is_a_query_error() {
        let m = market(vec![vec![1]], vec![vec![1]]);
        let mut log = QueryLog::new();
        let err = answer_comparison(&m, ComparisonQuery::new(Side::Woman, 1, 1, 1), &mut log);
        assert!(matches!(err, Err(Error::Query(_))));
        assert_eq!(log.total(), 0);
    }

    #[test]
    fn rank_queries() {
        let m = market(
            vec![vec![3, 1, 2], vec![1, 2, 3], vec![1, 2, 3]],
            vec![vec![1, 2, 3], vec![1, 2, 3], vec![1, 2, 3]],
        );
        let mut log = QueryLog::new();
        assert_eq!(answer_rank(&m, RankQuery::rank_of(Side::Woman, 1, 1), &mut log).unwrap(), 2);
        assert_eq!(answer_rank(&m, RankQuery::at_place(Side::Woman, 1, 1), &mut log).unwrap(), 3);
        assert!(matches!(
            answer_rank(&m, RankQuery::at_place(Side::Woman, 1, 4), &mut log),
            Err(Error::Query(_))
        ));
        assert_eq!(log.women_side_count(), 2);
    }

    #[test]
    fn rank_queries_need_full_model() {
        let m = MarriageMarket::from_lists(Model::Partial, vec![vec![1]], vec![vec![]]).unwrap();
        let mut log = QueryLog::new();
        assert!(matches!(
            answer_rank(&m, RankQuery::rank_of(Side::Woman, 1, 1), &mut log),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn dump_lines() {
        let mut log = QueryLog::new();
        log.record(LoggedQuery::Comparison(ComparisonQuery::new(Side::Woman, 1, 2, 3)), 1);
        log.record(LoggedQuery::Rank(RankQuery::at_place(Side::Man, 2, 1)), 4);
        assert_eq!(log.dump(), "W w1 prefers m2 over m3 -> 1\nM place 1 on m2 -> 4\n");
    }
}
