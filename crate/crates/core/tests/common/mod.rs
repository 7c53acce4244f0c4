//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stablelab::embeddings::{
    complete_preferences_with, embed_unique_full, lift_single_to_married, negate_single, PaddingOrder,
};
use stablelab::market::{
    all_marriages, deferred_acceptance, enumerate_stable, married_sets, Marriage, MarriageMarket, Model,
    PreferenceList,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Everyone ranks their own index first, then the rest ascending.
pub fn mutual_top(n: usize) -> MarriageMarket {
    let lists: Vec<Vec<usize>> = (1..=n)
        .map(|i| std::iter::once(i).chain((1..=n).filter(|&j| j != i)).collect())
        .collect();
    MarriageMarket::from_lists(Model::Full, lists.clone(), lists).unwrap()
}

/// Every ordered subset of 1..=n.
pub fn ordered_subsets(n: usize) -> Vec<Vec<usize>> {
    fn grow(n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        for x in 1..=n {
            if !prefix.contains(&x) {
                prefix.push(x);
                grow(n, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(n, &mut Vec::new(), &mut out);
    out
}

/// Every partial-model market over `n` couples.
pub fn all_partial_markets(n: usize) -> Vec<MarriageMarket> {
    let lists = ordered_subsets(n);
    let slots = 2 * n;
    let total = lists.len().pow(slots as u32);
    (0..total)
        .map(|mut code| {
            let mut chosen = Vec::with_capacity(slots);
            for _ in 0..slots {
                chosen.push(lists[code % lists.len()].clone());
                code /= lists.len();
            }
            let men = chosen.split_off(n);
            MarriageMarket::from_lists(Model::Partial, chosen, men).unwrap()
        })
        .collect()
}

/// `a` is at least as good as `b` for the owner of `list`, where being
/// single is worst.
pub fn weakly_better(list: &PreferenceList, a: Option<usize>, b: Option<usize>) -> bool {
    match (a, b) {
        _ if a == b => true,
        (None, _) => false,
        (Some(_), None) => true,
        (Some(a), Some(b)) => list.prefers(a, b),
    }
}

/// The W-optimal stable marriage, from women-proposing deferred acceptance.
pub fn women_optimal(market: &MarriageMarket) -> Marriage {
    deferred_acceptance(&market.transpose()).transpose()
}

fn single_in_some(stable: &[Marriage], w: usize) -> bool {
    stable.iter().any(|mu| mu.husband_of(w).is_none())
}

/// Completion: a marriage is stable iff it is a submarriage of some stable
/// marriage of the completed market.
pub fn check_completion(market: &MarriageMarket, order: PaddingOrder) -> Result<(), String> {
    let big = complete_preferences_with(market, order);
    let big_stable = enumerate_stable(&big).map_err(|e| e.to_string())?;
    for mu in all_marriages(market.n()) {
        let stable = market.is_stable(&mu).unwrap();
        let lifted = big_stable.iter().any(|s| mu.is_submarriage_of(s));
        if stable != lifted {
            return Err(format!("completion mismatch for {mu} in {market:?}"));
        }
    }
    Ok(())
}

/// Lift: w single in some stable marriage iff (w, n+w) married in some,
/// iff married in every, stable marriage of the completion.
pub fn check_lift(market: &MarriageMarket) -> Result<(), String> {
    let stable = enumerate_stable(market).map_err(|e| e.to_string())?;
    for w in 1..=market.n() {
        let (big, (bw, bm)) = lift_single_to_married(market, w).unwrap();
        let big_stable = enumerate_stable(&big).map_err(|e| e.to_string())?;
        let single = single_in_some(&stable, w);
        let some = big_stable.iter().any(|s| s.contains(bw, bm));
        let every = big_stable.iter().all(|s| s.contains(bw, bm));
        if single != some || single != every {
            return Err(format!("lift mismatch for w{w} in {market:?}"));
        }
    }
    Ok(())
}

/// Negation: w single in some stable marriage iff m' married in every
/// stable marriage of the extended market.
pub fn check_negation(market: &MarriageMarket) -> Result<(), String> {
    let stable = enumerate_stable(market).map_err(|e| e.to_string())?;
    for w in 1..=market.n() {
        let (big, extra) = negate_single(market, w).unwrap();
        let big_stable = enumerate_stable(&big).map_err(|e| e.to_string())?;
        let single = single_in_some(&stable, w);
        let married = big_stable.iter().all(|s| s.wife_of(extra).is_some());
        if single != married {
            return Err(format!("negation mismatch for w{w} in {market:?}"));
        }
    }
    Ok(())
}

/// Unique-full: a unique stable identity lifts to the unique stable
/// identity over 2n, an unstable identity stays unstable.
pub fn check_unique_full(market: &MarriageMarket) -> Result<(), String> {
    let n = market.n();
    let id = Marriage::identity(n);
    let big = embed_unique_full(market);
    let big_id = Marriage::identity(2 * n);
    let stable = enumerate_stable(market).map_err(|e| e.to_string())?;
    if stable == [id.clone()] {
        let big_stable = enumerate_stable(&big).map_err(|e| e.to_string())?;
        if big_stable != [big_id] {
            return Err(format!("unique identity not preserved for {market:?}"));
        }
    } else if !market.is_stable(&id).unwrap() && big.is_stable(&big_id).unwrap() {
        return Err(format!("unstable identity became stable for {market:?}"));
    }
    Ok(())
}

/// DA is stable, M-optimal and W-worst; married sets agree across stable
/// marriages; if M-optimal equals W-optimal the stable marriage is unique.
pub fn check_classical(market: &MarriageMarket) -> Result<(), String> {
    let stable = enumerate_stable(market).map_err(|e| e.to_string())?;
    if stable.is_empty() {
        return Err(format!("no stable marriage for {market:?}"));
    }
    let da = deferred_acceptance(market);
    if !stable.contains(&da) {
        return Err(format!("DA output {da} not stable"));
    }
    for mu in &stable {
        for m in 1..=market.n() {
            if !weakly_better(&market.men().lists()[m - 1], da.wife_of(m), mu.wife_of(m)) {
                return Err(format!("DA not M-optimal: m{m} prefers {mu} over {da}"));
            }
        }
        for w in 1..=market.n() {
            if !weakly_better(&market.women().lists()[w - 1], mu.husband_of(w), da.husband_of(w)) {
                return Err(format!("DA not W-worst: w{w} prefers {da} over {mu}"));
            }
        }
        if married_sets(mu) != married_sets(&da) {
            return Err(format!("married sets differ between {mu} and {da}"));
        }
    }
    if women_optimal(market) == da && stable.len() != 1 {
        return Err(format!("M-optimal equals W-optimal but {} stable marriages", stable.len()));
    }
    Ok(())
}
