//! The three-tier construction: high participants carry a disjointness
//! instance, mid and low participants have fixed lists, and a single shared
//! 1-bit reroutes almost every couple.

use super::{DisjDomain, DisjInstance, EmbeddingCertificate, IntersectionWitness};
use crate::market::{Marriage, MarriageMarket, Model};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    High,
    Mid,
    Low,
}

/// Sizes of the tiers on each side: `high` = δn/2, mid = (1−δ)n/2, low = n/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HighMidLowParams {
    n: usize,
    high: usize,
}

impl HighMidLowParams {
    /// Rejects (n, δ) unless n is even and δn/2 is a positive integer.
    pub fn new(n: usize, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::parameter(format!("delta={delta} outside (0,1]")));
        }
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::parameter(format!("n={n} must be even and positive")));
        }
        let high = delta * n as f64 / 2.0;
        let rounded = high.round();
        if (high - rounded).abs() > 1e-9 || rounded < 1.0 {
            return Err(Error::parameter(format!(
                "delta*n/2 = {high} is not a positive integer for n={n}, delta={delta}"
            )));
        }
        Self::from_sizes(n, rounded as usize)
    }

    pub fn from_sizes(n: usize, high: usize) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) || high == 0 || high > n / 2 {
            return Err(Error::parameter(format!("invalid tier sizes n={n}, high={high}")));
        }
        Ok(Self { n, high })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn high(&self) -> usize {
        self.high
    }

    pub fn mid(&self) -> usize {
        self.n / 2 - self.high
    }

    pub fn low(&self) -> usize {
        self.n / 2
    }

    pub fn delta(&self) -> f64 {
        2.0 * self.high as f64 / self.n as f64
    }

    /// Domain of the embedded instance.
    pub fn domain(&self) -> DisjDomain {
        DisjDomain::Grid(self.high)
    }

    pub fn tier(&self, index: usize) -> Tier {
        if index <= self.high {
            Tier::High
        } else if index <= self.n / 2 {
            Tier::Mid
        } else {
            Tier::Low
        }
    }

    fn high_range(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.high
    }

    fn mid_range(&self) -> std::ops::RangeInclusive<usize> {
        self.high + 1..=self.n / 2
    }

    fn low_range(&self) -> std::ops::RangeInclusive<usize> {
        self.n / 2 + 1..=self.n
    }
}

/// Largest δ ≤ 1/2 with ε < (1−δ)/2 that fits the divisibility rules for `n`.
pub fn choose_delta(n: usize, epsilon: f64) -> Result<HighMidLowParams> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::parameter(format!("epsilon={epsilon} outside [0,1/2)")));
    }
    let cap = (0.5f64).min(1.0 - 2.0 * epsilon - 1.0 / n as f64);
    (1..=n / 2)
        .rev()
        .filter_map(|high| HighMidLowParams::from_sizes(n, high).ok())
        .find(|p| p.delta() <= cap + 1e-12 && epsilon < (1.0 - p.delta()) / 2.0)
        .ok_or_else(|| Error::parameter(format!("no valid delta for n={n}, epsilon={epsilon}")))
}

/// Builds the three-tier market with `d` embedded in the high lists.
///
/// * low: everyone in index order;
/// * mid: low, then high, then mid, each in index order;
/// * high w_i: high men with x^i_j = 1, low men, mid men, high men with
///   x^i_j = 0. High men mirror this with y^i_j.
pub fn build_high_mid_low(p: &HighMidLowParams, d: &DisjInstance) -> Result<MarriageMarket> {
    if d.domain() != p.domain() {
        return Err(Error::parameter(format!(
            "instance domain {:?} does not match {:?}",
            d.domain(),
            p.domain()
        )));
    }
    let build = |bit: &dyn Fn(usize, usize) -> bool| -> Vec<Vec<usize>> {
        (1..=p.n)
            .map(|i| match p.tier(i) {
                Tier::Low => (1..=p.n).collect(),
                Tier::Mid => p.low_range().chain(1..=p.n / 2).collect(),
                Tier::High => p
                    .high_range()
                    .filter(|&j| bit(i, j))
                    .chain(p.low_range())
                    .chain(p.mid_range())
                    .chain(p.high_range().filter(|&j| !bit(i, j)))
                    .collect(),
            })
            .collect()
    };
    let women = build(&|i, j| d.x(i, j));
    let men = build(&|j, i| d.y(i, j));
    MarriageMarket::from_lists(Model::Full, women, men)
}

/// (w_{i+n/2}, m_i) and (w_i, m_{i+n/2}) for i = 1..n/2.
pub fn canonical_mu1(n: usize) -> Result<Marriage> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::parameter(format!("n={n} must be even and positive")));
    }
    let h = n / 2;
    Marriage::from_pairs(n, (1..=h).flat_map(|i| [(i + h, i), (i, i + h)]))
}

/// The unique stable marriage when x and y meet only at (alpha, beta):
/// (w_alpha, m_beta), high/mid women below alpha and men below beta matched
/// to their low counterpart, those above shifted down by one, and
/// (w_n, m_n).
pub fn canonical_mu0(p: &HighMidLowParams, alpha: usize, beta: usize) -> Result<Marriage> {
    let k = p.high;
    if alpha == 0 || alpha > k || beta == 0 || beta > k {
        return Err(Error::parameter(format!(
            "intersection ({alpha},{beta}) outside high tier [1,{k}]"
        )));
    }
    let n = p.n;
    let h = n / 2;
    let pairs = std::iter::once((alpha, beta))
        .chain((1..alpha).map(|i| (i, i + h)))
        .chain((1..beta).map(|i| (i + h, i)))
        .chain((alpha + 1..=h).map(|i| (i, i + h - 1)))
        .chain((beta + 1..=h).map(|i| (i + h - 1, i)))
        .chain(std::iter::once((n, n)));
    Marriage::from_pairs(n, pairs)
}

/// Certifies μ₁ for disjoint inputs and μ₀(α, β) for uniquely-intersecting
/// ones. Inputs meeting more than once get no certificate.
pub fn high_mid_low_certificate(p: &HighMidLowParams, d: &DisjInstance) -> Result<EmbeddingCertificate> {
    Ok(match d.witness() {
        Some(IntersectionWitness::Absent) => EmbeddingCertificate::unique_stable(canonical_mu1(p.n)?, true),
        Some(IntersectionWitness::At { alpha, beta }) => {
            EmbeddingCertificate::unique_stable(canonical_mu0(p, alpha, beta)?, false)
        }
        None => EmbeddingCertificate::none(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::divorce_distance;

    #[test]
    fn tier_sizes_for_eight() {
        let p = HighMidLowParams::new(8, 0.5).unwrap();
        assert_eq!((p.high(), p.mid(), p.low()), (2, 2, 4));
    }

    #[test]
    fn divisibility() {
        assert!(HighMidLowParams::new(6, 0.5).is_err());
        assert!(HighMidLowParams::new(4, 0.5).is_ok());
        assert!(HighMidLowParams::new(7, 1.0).is_err());
        assert!(HighMidLowParams::new(8, 0.0).is_err());
        assert!(HighMidLowParams::new(8, 1.5).is_err());
        assert!(HighMidLowParams::new(12, 1.0 / 3.0).is_ok());
    }

    #[test]
    fn lists_for_eight() {
        let p = HighMidLowParams::new(8, 0.5).unwrap();
        let d = DisjInstance::unique_at(p.domain(), 1, 2).unwrap();
        let m = build_high_mid_low(&p, &d).unwrap();
        let w = m.women().to_vecs();
        assert_eq!(w[0], vec![2, 5, 6, 7, 8, 3, 4, 1]);
        assert_eq!(w[1], vec![5, 6, 7, 8, 3, 4, 1, 2]);
        assert_eq!(w[2], vec![5, 6, 7, 8, 1, 2, 3, 4]);
        assert_eq!(w[7], (1..=8).collect::<Vec<_>>());
        // m_2 has y^1_2 = 1.
        assert_eq!(m.men().to_vecs()[1], vec![1, 5, 6, 7, 8, 3, 4, 2]);
    }

    #[test]
    fn canonical_marriages_are_perfect() {
        let mu1 = canonical_mu1(2).unwrap();
        assert_eq!(mu1, Marriage::from_pairs(2, [(2, 1), (1, 2)]).unwrap());
        assert!(canonical_mu1(8).unwrap().is_perfect());
        assert!(canonical_mu1(3).is_err());

        let p = HighMidLowParams::new(8, 0.5).unwrap();
        let mu0 = canonical_mu0(&p, 1, 1).unwrap();
        assert!(mu0.is_perfect());
        assert!(mu0.contains(1, 1) && mu0.contains(8, 8));
        assert_eq!(divorce_distance(&mu0, &canonical_mu1(8).unwrap()).unwrap(), 8);
        assert!(canonical_mu0(&p, 3, 1).is_err());
    }

    #[test]
    fn delta_choice() {
        let p = choose_delta(8, 0.1).unwrap();
        assert_eq!(p.delta(), 0.5);
        let p = choose_delta(8, 0.3).unwrap();
        assert!(0.3 < (1.0 - p.delta()) / 2.0);
        assert!(choose_delta(8, 0.6).is_err());
    }
}
