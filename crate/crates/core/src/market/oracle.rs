//! Brute-force enumeration of stable marriages and the divorce-distance metric.

use std::collections::BTreeSet;

use itertools::Itertools;

use super::{married_of, Marriage, MarriageMarket, Model};
use crate::{Error, Result};

/// Largest n for which exhaustive enumeration is attempted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    pub full: usize,
    pub partial: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        Self { full: 8, partial: 6 }
    }
}

impl OracleBounds {
    pub fn for_model(&self, model: Model) -> usize {
        match model {
            Model::Full => self.full,
            Model::Partial => self.partial,
        }
    }
}

pub fn enumerate_stable(market: &MarriageMarket) -> Result<Vec<Marriage>> {
    enumerate_stable_within(market, OracleBounds::default())
}

/// Every stable marriage of `market`, sorted.
///
/// Full-model markets enumerate all n! perfect marriages; partial-model
/// markets enumerate every injective partial map.
pub fn enumerate_stable_within(market: &MarriageMarket, bounds: OracleBounds) -> Result<Vec<Marriage>> {
    let n = market.n();
    let bound = bounds.for_model(market.model());
    if n > bound {
        return Err(Error::Capacity { n, bound });
    }
    let mut stable = Vec::new();
    match market.model() {
        Model::Full => {
            for perm in (1..=n).permutations(n) {
                let mu = Marriage::from_husbands(&perm)?;
                if market.stable_unchecked(&mu) {
                    stable.push(mu);
                }
            }
        }
        Model::Partial => {
            each_partial_map(n, 1, &mut Marriage::empty(n), &mut |mu| {
                if market.stable_unchecked(mu) {
                    stable.push(mu.clone());
                }
            });
        }
    }
    stable.sort();
    Ok(stable)
}

fn each_partial_map(n: usize, w: usize, mu: &mut Marriage, visit: &mut impl FnMut(&Marriage)) {
    if w > n {
        visit(mu);
        return;
    }
    each_partial_map(n, w + 1, mu, visit);
    for m in 1..=n {
        if mu.wife_of(m).is_none() {
            mu.marry(w, m).expect("both partners are free");
            each_partial_map(n, w + 1, mu, visit);
            mu.divorce_woman(w);
        }
    }
}

/// Every marriage over `n` couples, perfect or not, sorted.
pub fn all_marriages(n: usize) -> Vec<Marriage> {
    let mut out = Vec::new();
    each_partial_map(n, 1, &mut Marriage::empty(n), &mut |mu| out.push(mu.clone()));
    out.sort();
    out
}

/// n minus the number of shared couples.
pub fn divorce_distance(mu: &Marriage, other: &Marriage) -> Result<usize> {
    if mu.n() != other.n() {
        return Err(Error::domain(format!(
            "marriages over different sizes {} and {}",
            mu.n(),
            other.n()
        )));
    }
    if !mu.is_perfect() || !other.is_perfect() {
        return Err(Error::domain("divorce distance is defined on perfect marriages"));
    }
    let shared = mu.pairs().filter(|&(w, m)| other.contains(w, m)).count();
    Ok(mu.n() - shared)
}

/// Minimum divorce distance from `mu` to a stable marriage.
///
/// With `certified_unique` the caller vouches that the given marriage is the
/// only stable one, which lifts the enumeration bound.
pub fn distance_to_stability(
    market: &MarriageMarket,
    mu: &Marriage,
    certified_unique: Option<&Marriage>,
) -> Result<usize> {
    if market.model() != Model::Full {
        return Err(Error::Unsupported(
            "distance to stability is defined for full preference lists".into(),
        ));
    }
    if let Some(stable) = certified_unique {
        return divorce_distance(mu, stable);
    }
    let stable = enumerate_stable(market)?;
    stable
        .iter()
        .map(|s| divorce_distance(mu, s))
        .process_results(|it| it.min())?
        .ok_or_else(|| Error::domain("market has no stable marriage"))
}

/// The sets of married women and married men.
pub fn married_sets(mu: &Marriage) -> (BTreeSet<usize>, BTreeSet<usize>) {
    married_of(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mutual_top(n: usize) -> MarriageMarket {
        let lists: Vec<Vec<usize>> = (1..=n)
            .map(|i| std::iter::once(i).chain((1..=n).filter(|&j| j != i)).collect())
            .collect();
        MarriageMarket::from_lists(Model::Full, lists.clone(), lists).unwrap()
    }

    #[test]
    fn mutual_top_has_single_stable_marriage() {
        assert_eq!(enumerate_stable(&mutual_top(4)).unwrap(), vec![Marriage::identity(4)]);
    }

    #[test]
    fn capacity_error_past_bound() {
        let err = enumerate_stable(&mutual_top(9)).unwrap_err();
        assert!(matches!(err, Error::Capacity { n: 9, bound: 8 }));
        let tight = OracleBounds { full: 3, partial: 3 };
        assert!(enumerate_stable_within(&mutual_top(4), tight).is_err());
    }

    #[test]
    fn partial_enumeration_counts_maps() {
        // Empty lists: only the empty marriage is stable.
        let market = MarriageMarket::from_lists(
            Model::Partial,
            vec![vec![]; 3],
            vec![vec![]; 3],
        )
        .unwrap();
        assert_eq!(enumerate_stable(&market).unwrap(), vec![Marriage::empty(3)]);
    }

    #[test]
    fn divorce_distance_examples() {
        let id = Marriage::identity(4);
        assert_eq!(divorce_distance(&id, &id).unwrap(), 0);
        let swapped = Marriage::from_husbands(&[2, 1, 3, 4]).unwrap();
        assert_eq!(divorce_distance(&id, &swapped).unwrap(), 2);
        assert!(divorce_distance(&id, &Marriage::empty(4)).is_err());
        assert!(divorce_distance(&id, &Marriage::identity(3)).is_err());
    }

    #[test]
    fn distance_zero_for_stable() {
        let market = mutual_top(3);
        assert_eq!(distance_to_stability(&market, &Marriage::identity(3), None).unwrap(), 0);
        let off = Marriage::from_husbands(&[2, 1, 3]).unwrap();
        assert_eq!(distance_to_stability(&market, &off, None).unwrap(), 2);
    }

    #[test]
    fn married_sets_projects_pairs() {
        let (w, m) = married_sets(&Marriage::empty(3));
        assert!(w.is_empty() && m.is_empty());
        let (w, m) = married_sets(&Marriage::identity(3));
        assert_eq!(w, BTreeSet::from([1, 2, 3]));
        assert_eq!(m, BTreeSet::from([1, 2, 3]));
    }
}
