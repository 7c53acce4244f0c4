//! Marriage markets with full or partial preference lists.

mod io;
mod oracle;
mod random;
mod solve;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use io::{MarketFile, MarriageFile};
pub use oracle::{
    all_marriages, distance_to_stability, divorce_distance, enumerate_stable, enumerate_stable_within,
    married_sets, OracleBounds,
};
pub use random::{random_market, random_perfect_marriage};
pub use solve::{
    deferred_acceptance, deferred_acceptance_trace, deferred_acceptance_with, Courtship, DaRun,
    MarketCourtship, Night, NightOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Woman,
    Man,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Woman => Side::Man,
            Side::Man => Side::Woman,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Woman => "W",
            Side::Man => "M",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParticipantId {
    pub side: Side,
    pub index: usize,
}

impl ParticipantId {
    pub fn woman(index: usize) -> Self {
        Self { side: Side::Woman, index }
    }

    pub fn man(index: usize) -> Self {
        Self { side: Side::Man, index }
    }
}

impl fmt::Display for ParticipantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Woman => write!(f, "w{}", self.index),
            Side::Man => write!(f, "m{}", self.index),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Full,
    Partial,
}

/// An ordered list of acceptable partners, best first.
///
/// Stores the inverse permutation alongside the ranking so that preference
/// comparisons are constant time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceList {
    ranked: Vec<usize>,
    position: Vec<Option<u32>>,
}

impl PreferenceList {
    pub fn new(n: usize, ranked: Vec<usize>) -> Result<Self> {
        let mut position = vec![None; n];
        for (place, &who) in ranked.iter().enumerate() {
            if who == 0 || who > n {
                return Err(Error::domain(format!("index {who} outside [1,{n}]")));
            }
            if position[who - 1].is_some() {
                return Err(Error::domain(format!("index {who} listed twice")));
            }
            position[who - 1] = Some(place as u32);
        }
        Ok(Self { ranked, position })
    }

    pub fn ranked(&self) -> &[usize] {
        &self.ranked
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    pub fn contains(&self, who: usize) -> bool {
        self.position
            .get(who.wrapping_sub(1))
            .is_some_and(|p| p.is_some())
    }

    /// 1-based place of `who`, if listed.
    pub fn rank_of(&self, who: usize) -> Option<usize> {
        self.position
            .get(who.wrapping_sub(1))
            .copied()
            .flatten()
            .map(|p| p as usize + 1)
    }

    /// Who is listed at 1-based `place`.
    pub fn at(&self, place: usize) -> Option<usize> {
        self.ranked.get(place.wrapping_sub(1)).copied()
    }

    fn place(&self, who: usize) -> Option<u32> {
        self.position.get(who.wrapping_sub(1)).copied().flatten()
    }

    /// Strict preference; a listed candidate beats an unlisted one.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        match (self.place(a), self.place(b)) {
            (Some(pa), Some(pb)) => pa < pb,
            (Some(_), None) => true,
            (None, _) => false,
        }
    }

    /// Whether `candidate` beats the current spouse, where being single is
    /// worse than any listed candidate.
    pub fn prefers_over(&self, candidate: usize, spouse: Option<usize>) -> bool {
        match spouse {
            Some(s) if s == candidate => false,
            Some(s) => self.prefers(candidate, s),
            None => self.contains(candidate),
        }
    }
}

/// One preference list per participant of one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    n: usize,
    lists: Vec<PreferenceList>,
}

impl PreferenceProfile {
    pub fn new(n: usize, lists: Vec<Vec<usize>>) -> Result<Self> {
        if lists.len() != n {
            return Err(Error::domain(format!(
                "profile has {} lists, expected {n}",
                lists.len()
            )));
        }
        let lists = lists
            .into_iter()
            .map(|l| PreferenceList::new(n, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, lists })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lists(&self) -> &[PreferenceList] {
        &self.lists
    }

    pub fn list(&self, who: usize) -> Result<&PreferenceList> {
        self.check(who)?;
        Ok(&self.lists[who - 1])
    }

    /// Every list ranks the whole opposite side.
    pub fn is_full(&self) -> bool {
        self.lists.iter().all(|l| l.len() == self.n)
    }

    pub fn to_vecs(&self) -> Vec<Vec<usize>> {
        self.lists.iter().map(|l| l.ranked.clone()).collect()
    }

    /// Whether `who` strictly prefers `a` over `b`.
    pub fn prefers(&self, who: usize, a: usize, b: usize) -> Result<bool> {
        self.check(who)?;
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::domain(format!("prefers needs distinct candidates, got {a} twice")));
        }
        Ok(self.lists[who - 1].prefers(a, b))
    }

    pub fn weakly_prefers(&self, who: usize, a: usize, b: usize) -> Result<bool> {
        self.check(who)?;
        self.check(a)?;
        self.check(b)?;
        Ok(a == b || self.lists[who - 1].prefers(a, b))
    }

    fn check(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::domain(format!("index {i} outside [1,{}]", self.n)))
        } else {
            Ok(())
        }
    }
}

/// Two equal-size sides plus their preference profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarriageMarket {
    n: usize,
    model: Model,
    women: PreferenceProfile,
    men: PreferenceProfile,
}

impl MarriageMarket {
    pub fn new(model: Model, women: PreferenceProfile, men: PreferenceProfile) -> Result<Self> {
        let n = women.n();
        if n == 0 {
            return Err(Error::domain("market needs n >= 1"));
        }
        if men.n() != n {
            return Err(Error::domain(format!(
                "women side has n={n}, men side has n={}",
                men.n()
            )));
        }
        if model == Model::Full && !(women.is_full() && men.is_full()) {
            return Err(Error::domain("full model requires every list to rank all n partners"));
        }
        Ok(Self { n, model, women, men })
    }

    pub fn from_lists(model: Model, women: Vec<Vec<usize>>, men: Vec<Vec<usize>>) -> Result<Self> {
        let n = women.len();
        Self::new(
            model,
            PreferenceProfile::new(n, women)?,
            PreferenceProfile::new(n, men)?,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn women(&self) -> &PreferenceProfile {
        &self.women
    }

    pub fn men(&self) -> &PreferenceProfile {
        &self.men
    }

    pub fn profile(&self, side: Side) -> &PreferenceProfile {
        match side {
            Side::Woman => &self.women,
            Side::Man => &self.men,
        }
    }

    /// Swap the roles of women and men.
    pub fn transpose(&self) -> Self {
        Self {
            n: self.n,
            model: self.model,
            women: self.men.clone(),
            men: self.women.clone(),
        }
    }

    fn check_marriage(&self, mu: &Marriage) -> Result<()> {
        if mu.n() != self.n {
            return Err(Error::domain(format!(
                "marriage is over n={}, market over n={}",
                mu.n(),
                self.n
            )));
        }
        Ok(())
    }

    pub fn is_blocking_pair(&self, mu: &Marriage, w: usize, m: usize) -> Result<bool> {
        self.check_marriage(mu)?;
        self.women.check(w)?;
        self.men.check(m)?;
        Ok(self.blocks(mu, w, m))
    }

    fn blocks(&self, mu: &Marriage, w: usize, m: usize) -> bool {
        self.women.lists[w - 1].prefers_over(m, mu.husband_of(w))
            && self.men.lists[m - 1].prefers_over(w, mu.wife_of(m))
    }

    /// All blocking pairs, scanning every (w, m) in row-major order.
    pub fn blocking_pairs(&self, mu: &Marriage) -> Result<Vec<(usize, usize)>> {
        self.check_marriage(mu)?;
        let n = self.n;
        Ok((1..=n)
            .flat_map(|w| (1..=n).map(move |m| (w, m)))
            .filter(|&(w, m)| self.blocks(mu, w, m))
            .collect())
    }

    /// Stable iff nobody is married to an unlisted partner and no pair blocks.
    ///
    /// Only candidates a woman ranks above her husband are examined, which is
    /// enough since any blocking partner must be among them.
    pub fn is_stable(&self, mu: &Marriage) -> Result<bool> {
        self.check_marriage(mu)?;
        Ok(self.stable_unchecked(mu))
    }

    pub(crate) fn stable_unchecked(&self, mu: &Marriage) -> bool {
        for (w, m) in mu.pairs() {
            if !self.women.lists[w - 1].contains(m) || !self.men.lists[m - 1].contains(w) {
                return false;
            }
        }
        for w in 1..=self.n {
            let husband = mu.husband_of(w);
            for &m in self.women.lists[w - 1].ranked() {
                if Some(m) == husband {
                    break;
                }
                if self.men.lists[m - 1].prefers_over(w, mu.wife_of(m)) {
                    return false;
                }
            }
        }
        true
    }
}

/// A one-to-one mapping between a subset of the women and a subset of the men.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marriage {
    husband: Vec<Option<usize>>,
    wife: Vec<Option<usize>>,
}

impl Marriage {
    /// Everyone single.
    pub fn empty(n: usize) -> Self {
        Self {
            husband: vec![None; n],
            wife: vec![None; n],
        }
    }

    /// w_i married to m_i for every i.
    pub fn identity(n: usize) -> Self {
        Self::from_husbands(&(1..=n).collect::<Vec<_>>()).expect("identity is a permutation")
    }

    /// Perfect marriage from `husbands[w-1] = m`.
    pub fn from_husbands(husbands: &[usize]) -> Result<Self> {
        let n = husbands.len();
        Self::from_pairs(n, husbands.iter().enumerate().map(|(i, &m)| (i + 1, m)))
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut mu = Self::empty(n);
        for (w, m) in pairs {
            mu.marry(w, m)?;
        }
        Ok(mu)
    }

    pub fn marry(&mut self, w: usize, m: usize) -> Result<()> {
        let n = self.n();
        if w == 0 || w > n || m == 0 || m > n {
            return Err(Error::domain(format!("pair (w{w}, m{m}) outside [1,{n}]")));
        }
        if let Some(h) = self.husband[w - 1] {
            return Err(Error::domain(format!("w{w} already married to m{h}")));
        }
        if let Some(x) = self.wife[m - 1] {
            return Err(Error::domain(format!("m{m} already married to w{x}")));
        }
        self.husband[w - 1] = Some(m);
        self.wife[m - 1] = Some(w);
        Ok(())
    }

    pub(crate) fn divorce_woman(&mut self, w: usize) {
        if let Some(m) = self.husband[w - 1].take() {
            self.wife[m - 1] = None;
        }
    }

    pub fn n(&self) -> usize {
        self.husband.len()
    }

    pub fn husband_of(&self, w: usize) -> Option<usize> {
        self.husband.get(w.wrapping_sub(1)).copied().flatten()
    }

    pub fn wife_of(&self, m: usize) -> Option<usize> {
        self.wife.get(m.wrapping_sub(1)).copied().flatten()
    }

    pub fn spouse(&self, p: ParticipantId) -> Option<usize> {
        match p.side {
            Side::Woman => self.husband_of(p.index),
            Side::Man => self.wife_of(p.index),
        }
    }

    pub fn contains(&self, w: usize, m: usize) -> bool {
        self.husband_of(w) == Some(m)
    }

    /// Couples sorted by the woman's index.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.husband
            .iter()
            .enumerate()
            .filter_map(|(i, h)| h.map(|m| (i + 1, m)))
    }

    pub fn len(&self) -> usize {
        self.husband.iter().filter(|h| h.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_perfect(&self) -> bool {
        self.husband.iter().all(Option::is_some)
    }

    /// Whether every couple of `self` is a couple of `larger` and vice versa
    /// for participants inside `self`'s index range.
    pub fn is_submarriage_of(&self, larger: &Marriage) -> bool {
        let n = self.n();
        (1..=n).all(|w| {
            (1..=n).all(|m| self.contains(w, m) == larger.contains(w, m))
        })
    }

    /// Same couples with the roles of women and men swapped.
    pub fn transpose(&self) -> Self {
        Self {
            husband: self.wife.clone(),
            wife: self.husband.clone(),
        }
    }
}

impl fmt::Display for Marriage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (w, m)) in self.pairs().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "(w{w},m{m})")?;
        }
        f.write_str("}")
    }
}

/// Women and men married by `mu`, as a convenience for set comparisons.
pub(crate) fn married_of(mu: &Marriage) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let women = mu.pairs().map(|(w, _)| w).collect();
    let men = mu.pairs().map(|(_, m)| m).collect();
    (women, men)
}
