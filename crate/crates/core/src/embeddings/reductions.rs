//! Disjointness over off-diagonal pairs embedded into verifying stability,
//! finding a stable marriage with partial lists, and deciding whether a
//! participant is single.

use super::{DisjDomain, DisjInstance, EmbeddingCertificate};
use crate::market::{Marriage, MarriageMarket, Model, ParticipantId, Side};
use crate::{Error, Result};

fn off_diagonal_n(d: &DisjInstance) -> Result<usize> {
    match d.domain() {
        DisjDomain::OffDiagonal(n) if n >= 1 => Ok(n),
        other => Err(Error::parameter(format!(
            "expected an off-diagonal domain, got {other:?}"
        ))),
    }
}

/// Listed partners `j != me` with `bit(j)` set, ascending.
fn flagged(n: usize, me: usize, bit: impl Fn(usize) -> bool) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |&j| j != me && bit(j))
}

/// w_i lists {m_j : x^i_j = 1}, then m_i, then everyone else; men dually
/// with y. The identity marriage is stable exactly when x and y are
/// disjoint.
pub fn embed_verify_stability(d: &DisjInstance) -> Result<MarriageMarket> {
    let n = off_diagonal_n(d)?;
    let build = |bit: &dyn Fn(usize, usize) -> bool| -> Vec<Vec<usize>> {
        (1..=n)
            .map(|i| {
                flagged(n, i, |j| bit(i, j))
                    .chain(std::iter::once(i))
                    .chain(flagged(n, i, |j| !bit(i, j)))
                    .collect()
            })
            .collect()
    };
    let women = build(&|i, j| d.x(i, j));
    let men = build(&|j, i| d.y(i, j));
    MarriageMarket::from_lists(Model::Full, women, men)
}

/// As [`embed_verify_stability`] but truncated after the own-index partner,
/// so everybody else is unacceptable. Disjoint inputs make the identity the
/// unique stable marriage; intersecting inputs make it unstable.
pub fn embed_find_stable_partial(d: &DisjInstance) -> Result<MarriageMarket> {
    let n = off_diagonal_n(d)?;
    let build = |bit: &dyn Fn(usize, usize) -> bool| -> Vec<Vec<usize>> {
        (1..=n)
            .map(|i| flagged(n, i, |j| bit(i, j)).chain(std::iter::once(i)).collect())
            .collect()
    };
    let women = build(&|i, j| d.x(i, j));
    let men = build(&|j, i| d.y(i, j));
    MarriageMarket::from_lists(Model::Partial, women, men)
}

pub fn verify_stability_certificate(d: &DisjInstance) -> Result<EmbeddingCertificate> {
    let n = off_diagonal_n(d)?;
    let id = Marriage::identity(n);
    Ok(if d.is_disjoint() {
        EmbeddingCertificate::stable(id, true)
    } else {
        EmbeddingCertificate::unstable(id, false)
    })
}

pub fn find_stable_partial_certificate(d: &DisjInstance) -> Result<EmbeddingCertificate> {
    let n = off_diagonal_n(d)?;
    let id = Marriage::identity(n);
    Ok(if d.is_disjoint() {
        EmbeddingCertificate::unique_stable(id, true)
    } else {
        EmbeddingCertificate::unstable(id, false)
    })
}

/// Marriage over 2n couples pairing w_i with m'_i = m_{n+i}, i = 1..n.
pub fn shifted_identity(n: usize) -> Marriage {
    Marriage::from_pairs(2 * n, (1..=n).map(|i| (i, n + i))).expect("distinct couples")
}

/// Market over 2n participants per side in which `p` is single in some
/// stable marriage exactly when x and y are disjoint.
///
/// Women are w_1..w_n, then p = w_{n+1}, then fillers w'_2..w'_n with empty
/// lists. Men are m_1..m_n followed by m'_j = m_{n+j}. With `side == Man`
/// the roles are transposed and p is m_{n+1}.
pub fn embed_is_single(d: &DisjInstance, side: Side) -> Result<(MarriageMarket, ParticipantId)> {
    let n = off_diagonal_n(d)?;
    let p = n + 1;
    let mut women: Vec<Vec<usize>> = (1..=n)
        .map(|i| flagged(n, i, |j| d.x(i, j)).chain(std::iter::once(n + i)).collect())
        .collect();
    women.push((n + 1..=2 * n).collect());
    women.extend((2..=n).map(|_| Vec::new()));

    let mut men: Vec<Vec<usize>> = (1..=n)
        .map(|j| flagged(n, j, |i| d.y(i, j)).collect())
        .collect();
    men.extend((1..=n).map(|j| vec![j, p]));

    let market = MarriageMarket::from_lists(Model::Partial, women, men)?;
    Ok(match side {
        Side::Woman => (market, ParticipantId::woman(p)),
        Side::Man => (market.transpose(), ParticipantId::man(p)),
    })
}

/// Disjoint inputs: the shifted identity is the unique stable marriage and
/// leaves p single. Otherwise it is unstable.
pub fn is_single_certificate(d: &DisjInstance, side: Side) -> Result<EmbeddingCertificate> {
    let n = off_diagonal_n(d)?;
    let mu = match side {
        Side::Woman => shifted_identity(n),
        Side::Man => shifted_identity(n).transpose(),
    };
    Ok(if d.is_disjoint() {
        EmbeddingCertificate::unique_stable(mu, true)
    } else {
        EmbeddingCertificate::unstable(mu, false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::enumerate_stable;

    #[test]
    fn verify_embedding_two_couples() {
        let zeros = DisjInstance::zeros(DisjDomain::OffDiagonal(2));
        let m = embed_verify_stability(&zeros).unwrap();
        assert_eq!(m.women().to_vecs(), vec![vec![1, 2], vec![2, 1]]);
        assert!(m.is_stable(&Marriage::identity(2)).unwrap());

        let hit = DisjInstance::unique_at(DisjDomain::OffDiagonal(2), 1, 2).unwrap();
        let m = embed_verify_stability(&hit).unwrap();
        assert!(m.is_blocking_pair(&Marriage::identity(2), 1, 2).unwrap());
        assert!(!m.is_stable(&Marriage::identity(2)).unwrap());
    }

    #[test]
    fn partial_embedding_lists() {
        let d = DisjInstance::unique_at(DisjDomain::OffDiagonal(3), 1, 2).unwrap();
        let m = embed_find_stable_partial(&d).unwrap();
        assert_eq!(m.women().to_vecs(), vec![vec![2, 1], vec![2], vec![3]]);
        assert_eq!(m.men().to_vecs(), vec![vec![1], vec![1, 2], vec![3]]);
        assert!(!enumerate_stable(&m).unwrap().contains(&Marriage::identity(3)));
    }

    #[test]
    fn partial_embedding_zero_bits_unique() {
        let m = embed_find_stable_partial(&DisjInstance::zeros(DisjDomain::OffDiagonal(3))).unwrap();
        assert_eq!(enumerate_stable(&m).unwrap(), vec![Marriage::identity(3)]);
    }

    #[test]
    fn is_single_layout() {
        let (m, p) = embed_is_single(&DisjInstance::zeros(DisjDomain::OffDiagonal(2)), Side::Woman).unwrap();
        assert_eq!(p, ParticipantId::woman(3));
        assert_eq!(m.women().to_vecs(), vec![vec![3], vec![4], vec![3, 4], vec![]]);
        assert_eq!(m.men().to_vecs(), vec![vec![], vec![], vec![1, 3], vec![2, 3]]);
        let stable = enumerate_stable(&m).unwrap();
        assert_eq!(stable, vec![shifted_identity(2)]);
        assert_eq!(stable[0].husband_of(3), None);
    }

    #[test]
    fn rejects_grid_domain() {
        assert!(embed_verify_stability(&DisjInstance::zeros(DisjDomain::Grid(2))).is_err());
    }
}
