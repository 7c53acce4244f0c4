//! Market-to-market embeddings: completing partial lists, lifting
//! single-ness to couple membership, and negating single-ness.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::market::{MarriageMarket, Model};
use crate::{Error, Result};

/// Order of the padding block appended after the forced entries of each
/// completed list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaddingOrder {
    Ascending,
    Descending,
    /// An independent shuffle per list, seeded.
    Shuffled(u64),
}

/// Completes partial lists over 2n participants per side.
///
/// The added women w'_i and men m'_j take indices n+i and n+j. The list of
/// w_i is her original list, then m'_i, then every remaining man; w'_i lists
/// m_i first, then everyone else. Men are built the same way. A marriage is
/// stable in the input exactly when it is a submarriage of a stable marriage
/// of the output.
pub fn complete_preferences(market: &MarriageMarket) -> MarriageMarket {
    complete_preferences_with(market, PaddingOrder::Ascending)
}

pub fn complete_preferences_with(market: &MarriageMarket, order: PaddingOrder) -> MarriageMarket {
    let n = market.n();
    let mut rng = match order {
        PaddingOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut pad = |head: Vec<usize>| -> Vec<usize> {
        let mut rest: Vec<usize> = (1..=2 * n).filter(|x| !head.contains(x)).collect();
        match order {
            PaddingOrder::Ascending => {}
            PaddingOrder::Descending => rest.reverse(),
            PaddingOrder::Shuffled(_) => rest.shuffle(rng.as_mut().expect("seeded")),
        }
        head.into_iter().chain(rest).collect()
    };
    let mut side = |own: &[Vec<usize>]| -> Vec<Vec<usize>> {
        let originals = (1..=n).map(|i| {
            let mut head = own[i - 1].clone();
            head.push(n + i);
            head
        });
        let primed = (1..=n).map(|i| vec![i]);
        originals.chain(primed).map(&mut pad).collect()
    };
    let women = side(&market.women().to_vecs());
    let men = side(&market.men().to_vecs());
    MarriageMarket::from_lists(Model::Full, women, men).expect("completed lists are permutations")
}

/// The completion with padding blocks sorted by index; a unique stable
/// identity marriage in the input becomes the unique stable identity over
/// 2n couples.
pub fn embed_unique_full(market: &MarriageMarket) -> MarriageMarket {
    complete_preferences_with(market, PaddingOrder::Ascending)
}

/// Completion of `market` together with the couple (w, m'_w): `w` is single
/// in some stable input marriage iff that couple is married in some (and
/// then every) stable output marriage.
pub fn lift_single_to_married(market: &MarriageMarket, w: usize) -> Result<(MarriageMarket, (usize, usize))> {
    let n = market.n();
    if w == 0 || w > n {
        return Err(Error::domain(format!("woman {w} outside [1,{n}]")));
    }
    Ok((complete_preferences(market), (w, n + w)))
}

/// Adds w' (empty list) and m' (who lists only `w`) as index n+1 and
/// appends m' to the end of `w`'s list. Returns the market and m'.
pub fn negate_single(market: &MarriageMarket, w: usize) -> Result<(MarriageMarket, usize)> {
    let n = market.n();
    if w == 0 || w > n {
        return Err(Error::domain(format!("woman {w} outside [1,{n}]")));
    }
    let extra = n + 1;
    let mut women = market.women().to_vecs();
    women[w - 1].push(extra);
    women.push(Vec::new());
    let mut men = market.men().to_vecs();
    men.push(vec![w]);
    Ok((MarriageMarket::from_lists(Model::Partial, women, men)?, extra))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::{enumerate_stable, Marriage};

    #[test]
    fn completes_empty_single_couple() {
        let m = MarriageMarket::from_lists(Model::Partial, vec![vec![]], vec![vec![]]).unwrap();
        let full = complete_preferences(&m);
        assert_eq!(full.n(), 2);
        assert_eq!(full.women().to_vecs(), vec![vec![2, 1], vec![1, 2]]);
        assert_eq!(full.men().to_vecs(), vec![vec![2, 1], vec![1, 2]]);
        let stable = enumerate_stable(&full).unwrap();
        let expected = Marriage::from_pairs(2, [(1, 2), (2, 1)]).unwrap();
        assert_eq!(stable, vec![expected.clone()]);
        assert!(Marriage::empty(1).is_submarriage_of(&expected));
    }

    #[test]
    fn mutual_single_couple_unique_full() {
        let m = MarriageMarket::from_lists(Model::Partial, vec![vec![1]], vec![vec![1]]).unwrap();
        let full = embed_unique_full(&m);
        assert_eq!(enumerate_stable(&full).unwrap(), vec![Marriage::identity(2)]);
    }

    #[test]
    fn padding_orders_differ_only_in_tail() {
        let m = MarriageMarket::from_lists(Model::Partial, vec![vec![2], vec![]], vec![vec![], vec![1]]).unwrap();
        let asc = complete_preferences_with(&m, PaddingOrder::Ascending);
        let desc = complete_preferences_with(&m, PaddingOrder::Descending);
        assert_eq!(asc.women().to_vecs()[0], vec![2, 3, 1, 4]);
        assert_eq!(desc.women().to_vecs()[0], vec![2, 3, 4, 1]);
        let shuffled = complete_preferences_with(&m, PaddingOrder::Shuffled(5));
        assert_eq!(&shuffled.women().to_vecs()[0][..2], &[2, 3]);
    }

    #[test]
    fn negate_single_layout() {
        let m = MarriageMarket::from_lists(Model::Partial, vec![vec![1], vec![]], vec![vec![2], vec![]]).unwrap();
        let (out, extra) = negate_single(&m, 2).unwrap();
        assert_eq!(extra, 3);
        assert_eq!(out.women().to_vecs(), vec![vec![1], vec![3], vec![]]);
        assert_eq!(out.men().to_vecs(), vec![vec![2], vec![], vec![2]]);
        assert!(negate_single(&m, 3).is_err());
    }
}
