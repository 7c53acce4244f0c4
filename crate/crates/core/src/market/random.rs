use rand::seq::SliceRandom;
use rand::Rng;

use super::{Marriage, MarriageMarket, Model};

/// Independent uniformly random preference lists. In the partial model each
/// partner is acceptable with probability 1/2 before shuffling.
pub fn random_market<R: Rng + ?Sized>(n: usize, model: Model, rng: &mut R) -> MarriageMarket {
    let side = |rng: &mut R| -> Vec<Vec<usize>> {
        (0..n)
            .map(|_| {
                let mut list: Vec<usize> = match model {
                    Model::Full => (1..=n).collect(),
                    Model::Partial => (1..=n).filter(|_| rng.gen_bool(0.5)).collect(),
                };
                list.shuffle(rng);
                list
            })
            .collect()
    };
    let women = side(rng);
    let men = side(rng);
    MarriageMarket::from_lists(model, women, men).expect("random lists are valid")
}

pub fn random_perfect_marriage<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Marriage {
    let mut husbands: Vec<usize> = (1..=n).collect();
    husbands.shuffle(rng);
    Marriage::from_husbands(&husbands).expect("a shuffle is a permutation")
}
