use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Index set of a disjointness instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DisjDomain {
    /// Pairs (i, j) over [n] with i != j.
    OffDiagonal(usize),
    /// All pairs (i, j) over [k].
    Grid(usize),
}

impl DisjDomain {
    pub fn side(&self) -> usize {
        match *self {
            DisjDomain::OffDiagonal(n) | DisjDomain::Grid(n) => n,
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            DisjDomain::OffDiagonal(n) => n * n.saturating_sub(1),
            DisjDomain::Grid(k) => k * k,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major position of (i, j), skipping the diagonal off-diagonally.
    pub fn offset(&self, i: usize, j: usize) -> Option<usize> {
        let s = self.side();
        if i == 0 || j == 0 || i > s || j > s {
            return None;
        }
        match self {
            DisjDomain::Grid(_) => Some((i - 1) * s + (j - 1)),
            DisjDomain::OffDiagonal(_) if i == j => None,
            DisjDomain::OffDiagonal(_) => {
                let col = if j < i { j - 1 } else { j - 2 };
                Some((i - 1) * (s - 1) + col)
            }
        }
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let s = self.side();
        (1..=s)
            .flat_map(move |i| (1..=s).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.offset(i, j).is_some())
    }

    fn tag(&self) -> &'static str {
        match self {
            DisjDomain::OffDiagonal(_) => "offdiag",
            DisjDomain::Grid(_) => "grid",
        }
    }
}

/// Where the two bit vectors meet, when they meet at most once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionWitness {
    Absent,
    At { alpha: usize, beta: usize },
}

/// Alice's bits `x` and Bob's bits `y` over a common domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DisjInstance {
    domain: DisjDomain,
    x: Vec<bool>,
    y: Vec<bool>,
}

impl DisjInstance {
    pub fn new(domain: DisjDomain, x: Vec<bool>, y: Vec<bool>) -> Result<Self> {
        if x.len() != domain.len() || y.len() != domain.len() {
            return Err(Error::parameter(format!(
                "domain has {} entries, got |x|={} |y|={}",
                domain.len(),
                x.len(),
                y.len()
            )));
        }
        Ok(Self { domain, x, y })
    }

    pub fn zeros(domain: DisjDomain) -> Self {
        Self {
            domain,
            x: vec![false; domain.len()],
            y: vec![false; domain.len()],
        }
    }

    /// Bit `k` of each mask is the `k`-th domain entry.
    pub fn from_masks(domain: DisjDomain, x: u64, y: u64) -> Result<Self> {
        let len = domain.len();
        if len > 64 {
            return Err(Error::parameter("mask construction supports at most 64 entries"));
        }
        let bits = |mask: u64| (0..len).map(|k| mask >> k & 1 == 1).collect();
        Self::new(domain, bits(x), bits(y))
    }

    /// Every instance over a domain of at most 32 entries.
    pub fn all(domain: DisjDomain) -> impl Iterator<Item = DisjInstance> {
        let len = domain.len();
        assert!(len <= 32, "exhaustive iteration limited to 32 entries");
        let count = 1u64 << len;
        (0..count).flat_map(move |x| {
            (0..count).map(move |y| DisjInstance::from_masks(domain, x, y).expect("masks fit"))
        })
    }

    /// Zero bits except a single common 1 at (alpha, beta).
    pub fn unique_at(domain: DisjDomain, alpha: usize, beta: usize) -> Result<Self> {
        let k = domain
            .offset(alpha, beta)
            .ok_or_else(|| Error::parameter(format!("({alpha},{beta}) outside domain")))?;
        let mut d = Self::zeros(domain);
        d.x[k] = true;
        d.y[k] = true;
        Ok(d)
    }

    pub fn domain(&self) -> DisjDomain {
        self.domain
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn y_bits(&self) -> &[bool] {
        &self.y
    }

    /// x^i_j; false off the domain.
    pub fn x(&self, i: usize, j: usize) -> bool {
        self.domain.offset(i, j).is_some_and(|k| self.x[k])
    }

    pub fn y(&self, i: usize, j: usize) -> bool {
        self.domain.offset(i, j).is_some_and(|k| self.y[k])
    }

    /// Common 1-entries in row-major order.
    pub fn intersection(&self) -> Vec<(usize, usize)> {
        self.domain
            .entries()
            .filter(|&(i, j)| self.x(i, j) && self.y(i, j))
            .collect()
    }

    pub fn is_disjoint(&self) -> bool {
        self.x.iter().zip(&self.y).all(|(a, b)| !(a & b))
    }

    /// DISJ as a bit: 1 when disjoint.
    pub fn disj(&self) -> u8 {
        self.is_disjoint() as u8
    }

    /// `None` when the vectors meet more than once.
    pub fn witness(&self) -> Option<IntersectionWitness> {
        match self.intersection().as_slice() {
            [] => Some(IntersectionWitness::Absent),
            &[(alpha, beta)] => Some(IntersectionWitness::At { alpha, beta }),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DisjFile::from(self)).expect("disj file serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<DisjFile>(s)?.try_into()
    }
}

/// On-disk layout: bits row-major, diagonal skipped for `offdiag`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisjFile {
    pub domain: String,
    pub n: usize,
    pub x: Vec<u8>,
    pub y: Vec<u8>,
}

impl From<&DisjInstance> for DisjFile {
    fn from(d: &DisjInstance) -> Self {
        let bits = |v: &[bool]| v.iter().map(|&b| b as u8).collect();
        Self {
            domain: d.domain.tag().to_owned(),
            n: d.domain.side(),
            x: bits(&d.x),
            y: bits(&d.y),
        }
    }
}

impl TryFrom<DisjFile> for DisjInstance {
    type Error = Error;

    fn try_from(f: DisjFile) -> Result<Self> {
        let domain = match f.domain.as_str() {
            "offdiag" => DisjDomain::OffDiagonal(f.n),
            "grid" => DisjDomain::Grid(f.n),
            other => return Err(Error::parameter(format!("unknown domain {other:?}"))),
        };
        let bits = |v: Vec<u8>| -> Result<Vec<bool>> {
            v.into_iter()
                .map(|b| match b {
                    0 => Ok(false),
                    1 => Ok(true),
                    _ => Err(Error::parameter(format!("bit value {b}"))),
                })
                .collect()
        };
        DisjInstance::new(domain, bits(f.x)?, bits(f.y)?)
    }
}
