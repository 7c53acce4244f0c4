//! Query strategies and their simulation as two-party protocols.
//!
//! A strategy learns about the market only through Boolean queries, each
//! addressed to one side. Run centrally it is answered straight from the
//! market. Run as a protocol, both parties execute the strategy in lockstep
//! and the party owning the queried side sends the one-bit answer, so the
//! transcript length equals the number of queries.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::accounting::VerifierOrder;
use super::{answer_comparison, compare, ComparisonQuery, LoggedQuery, QueryLog};
use crate::market::{deferred_acceptance_with, Courtship, Marriage, MarriageMarket, Side};
use crate::protocol::{run_two_party, PartyContext, Protocol, ProtocolRun, Verdict};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BooleanQuery {
    Comparison(ComparisonQuery),
    /// "Do `woman` and `man` rank each other first?" Its answer depends on
    /// both profiles, so no single side can answer it.
    MutualFirst { woman: usize, man: usize },
}

impl BooleanQuery {
    /// The side whose preferences determine the answer, if there is one.
    pub fn side(&self) -> Option<Side> {
        match self {
            BooleanQuery::Comparison(q) => Some(q.side),
            BooleanQuery::MutualFirst { .. } => None,
        }
    }

    fn comparison(&self) -> Result<ComparisonQuery> {
        match self {
            BooleanQuery::Comparison(q) => Ok(*q),
            BooleanQuery::MutualFirst { woman, man } => Err(Error::ModelViolation(format!(
                "query on w{woman} and m{man} reads both profiles"
            ))),
        }
    }
}

/// Source of answers for a running strategy.
pub trait QueryOracle {
    fn ask(&mut self, q: BooleanQuery) -> Result<bool>;
}

/// An algorithm in the Boolean query model.
pub trait QueryStrategy: Sync {
    type Output: Send + PartialEq + fmt::Debug;

    fn name(&self) -> &str;

    /// Runs over a market with `n` couples. `coins` is the only randomness
    /// the strategy may use.
    fn run(&self, n: usize, oracle: &mut dyn QueryOracle, coins: &mut ChaCha8Rng) -> Result<Self::Output>;
}

/// Answers queries directly from a market and logs them.
pub struct MarketOracle<'a> {
    market: &'a MarriageMarket,
    log: QueryLog,
}

impl<'a> MarketOracle<'a> {
    pub fn new(market: &'a MarriageMarket) -> Self {
        Self { market, log: QueryLog::new() }
    }

    pub fn into_log(self) -> QueryLog {
        self.log
    }
}

impl QueryOracle for MarketOracle<'_> {
    fn ask(&mut self, q: BooleanQuery) -> Result<bool> {
        answer_comparison(self.market, q.comparison()?, &mut self.log)
    }
}

/// Runs `strategy` centrally against `market`.
pub fn run_strategy<S: QueryStrategy + ?Sized>(
    market: &MarriageMarket,
    strategy: &S,
    seed: u64,
) -> Result<(S::Output, QueryLog)> {
    let mut oracle = MarketOracle::new(market);
    let mut coins = ChaCha8Rng::seed_from_u64(seed);
    let output = strategy.run(market.n(), &mut oracle, &mut coins)?;
    Ok((output, oracle.into_log()))
}

struct ChannelOracle<'c, 'a> {
    ctx: &'c mut PartyContext<'a>,
    log: QueryLog,
}

impl QueryOracle for ChannelOracle<'_, '_> {
    fn ask(&mut self, q: BooleanQuery) -> Result<bool> {
        let cq = q.comparison()?;
        let answer = if cq.side == self.ctx.party().side() {
            let answer = compare(self.ctx.profile_of(cq.side)?, cq)?;
            self.ctx.send_bit(answer)?;
            answer
        } else {
            self.ctx.recv_bit()?
        };
        self.log.record(LoggedQuery::Comparison(cq), answer as usize);
        Ok(answer)
    }
}

/// A query strategy wrapped as a two-party protocol. Both parties end with
/// the strategy's output and the same query log.
pub struct QueryProtocol<'s, S: ?Sized> {
    strategy: &'s S,
}

impl<'s, S: QueryStrategy + ?Sized> QueryProtocol<'s, S> {
    pub fn new(strategy: &'s S) -> Self {
        Self { strategy }
    }

    fn play(&self, ctx: &mut PartyContext<'_>) -> Result<(S::Output, QueryLog)> {
        let n = ctx.n();
        let mut coins = ctx.coins().clone();
        let mut oracle = ChannelOracle { ctx, log: QueryLog::new() };
        let output = self.strategy.run(n, &mut oracle, &mut coins)?;
        Ok((output, oracle.log))
    }
}

impl<S: QueryStrategy + ?Sized> Protocol for QueryProtocol<'_, S> {
    type Output = (S::Output, QueryLog);

    fn name(&self) -> &str {
        self.strategy.name()
    }

    fn alice(&self, ctx: &mut PartyContext<'_>) -> Result<Self::Output> {
        self.play(ctx)
    }

    fn bob(&self, ctx: &mut PartyContext<'_>) -> Result<Self::Output> {
        self.play(ctx)
    }
}

/// Runs `strategy` as a protocol with Alice holding the women of `market`
/// and Bob holding the men.
pub fn query_protocol<S: QueryStrategy + ?Sized>(
    strategy: &S,
    market: &MarriageMarket,
    seed: u64,
) -> Result<ProtocolRun<(S::Output, QueryLog)>> {
    run_two_party(&QueryProtocol::new(strategy), market.women(), market.men(), seed)
}

/// The comparison verifier as a query strategy.
#[derive(Debug, Clone)]
pub struct VerifierStrategy {
    pub marriage: Marriage,
    pub order: VerifierOrder,
}

impl QueryStrategy for VerifierStrategy {
    type Output = Verdict;

    fn name(&self) -> &str {
        "comparison-verifier"
    }

    fn run(&self, n: usize, oracle: &mut dyn QueryOracle, _coins: &mut ChaCha8Rng) -> Result<Verdict> {
        let mu = &self.marriage;
        if mu.n() != n || !mu.is_perfect() {
            return Err(Error::Precondition(format!("verifier needs a perfect marriage over n={n}")));
        }
        let mut pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|w| (1..=n).map(move |m| (w, m)))
            .filter(|&(w, m)| !mu.contains(w, m))
            .collect();
        if let VerifierOrder::Shuffled(seed) = self.order {
            pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        let mut blocked = false;
        for (w, m) in pairs {
            let (Some(wife), Some(husband)) = (mu.wife_of(m), mu.husband_of(w)) else {
                unreachable!("perfect marriage");
            };
            let man_wants = oracle.ask(BooleanQuery::Comparison(ComparisonQuery::new(Side::Man, m, w, wife)))?;
            if man_wants {
                let keeps =
                    oracle.ask(BooleanQuery::Comparison(ComparisonQuery::new(Side::Woman, w, husband, m)))?;
                blocked |= !keeps;
            }
        }
        Ok(if blocked { Verdict::Unstable } else { Verdict::Stable })
    }
}

/// Men-proposing deferred acceptance using comparisons only, for markets
/// with full lists.
///
/// A proposing man finds his favourite among the women he has not yet
/// serenaded with a linear scan of men-side comparisons. A provisionally
/// married woman costs one women-side comparison and a single one costs
/// nothing, exactly as in the metered run.
#[derive(Debug, Clone, Copy, Default)]
pub struct DaStrategy;

struct OracleCourtship<'o> {
    oracle: &'o mut dyn QueryOracle,
    serenaded: Vec<Vec<bool>>,
}

impl Courtship for OracleCourtship<'_> {
    fn choice_at(&mut self, man: usize, _place: usize) -> Result<Option<usize>> {
        let tried = &self.serenaded[man - 1];
        let mut left = (1..=tried.len()).filter(|&w| !tried[w - 1]);
        let Some(mut best) = left.next() else {
            return Ok(None);
        };
        for w in left.collect::<Vec<_>>() {
            if self.oracle.ask(BooleanQuery::Comparison(ComparisonQuery::new(Side::Man, man, w, best)))? {
                best = w;
            }
        }
        self.serenaded[man - 1][best - 1] = true;
        Ok(Some(best))
    }

    fn accepts(&mut self, woman: usize, current: Option<usize>, challenger: usize) -> Result<bool> {
        match current {
            None => Ok(true),
            Some(husband) => self.oracle.ask(BooleanQuery::Comparison(ComparisonQuery::new(
                Side::Woman,
                woman,
                challenger,
                husband,
            ))),
        }
    }
}

impl QueryStrategy for DaStrategy {
    type Output = Marriage;

    fn name(&self) -> &str {
        "deferred-acceptance"
    }

    fn run(&self, n: usize, oracle: &mut dyn QueryOracle, _coins: &mut ChaCha8Rng) -> Result<Marriage> {
        let mut court = OracleCourtship { oracle, serenaded: vec![vec![false; n]; n] };
        Ok(deferred_acceptance_with(n, &mut court)?.marriage)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::Model;

    struct Fixed(Vec<BooleanQuery>);

    impl QueryStrategy for Fixed {
        type Output = Vec<bool>;

        fn name(&self) -> &str {
            "fixed"
        }

        fn run(&self, _n: usize, oracle: &mut dyn QueryOracle, _coins: &mut ChaCha8Rng) -> Result<Vec<bool>> {
            self.0.iter().map(|&q| oracle.ask(q)).collect()
        }
    }

    fn market() -> MarriageMarket {
        MarriageMarket::from_lists(
            Model::Full,
            vec![vec![2, 1], vec![1, 2]],
            vec![vec![1, 2], vec![2, 1]],
        )
        .unwrap()
    }

    #[test]
    fn one_bit_per_query() {
        let qs = vec![
            BooleanQuery::Comparison(ComparisonQuery::new(Side::Woman, 1, 2, 1)),
            BooleanQuery::Comparison(ComparisonQuery::new(Side::Man, 2, 1, 2)),
            BooleanQuery::Comparison(ComparisonQuery::new(Side::Woman, 2, 2, 1)),
        ];
        let m = market();
        let run = query_protocol(&Fixed(qs.clone()), &m, 0).unwrap();
        assert_eq!(run.bits(), 3);
        assert_eq!(run.output.0, vec![true, false, false]);
        let (central, log) = run_strategy(&m, &Fixed(qs), 0).unwrap();
        assert_eq!(central, run.output.0);
        assert_eq!(log, run.output.1);
    }

    #[test]
    fn joint_query_is_a_model_violation() {
        let s = Fixed(vec![BooleanQuery::MutualFirst { woman: 1, man: 1 }]);
        assert!(matches!(query_protocol(&s, &market(), 0), Err(Error::ModelViolation(_))));
        assert!(matches!(run_strategy(&market(), &s, 0), Err(Error::ModelViolation(_))));
    }
}
