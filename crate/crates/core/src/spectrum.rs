//! Spherical spectra of the three sphere families.
//!
//! `L²(S)` splits into isotypic pieces `W_γ`, one for every spectrum index
//! `γ`. For `SU(n+1)/SU(n)` the index is a pair `(γ1, γ2)` attached to the
//! highest weight `(γ1, 0, ..., 0, -γ2)`; for `SO(2n+1)/SO(2n)` and
//! `SO(2n)/SO(2n-1)` it is a single `γ` attached to `(γ, 0, ..., 0)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::root_systems::{RootKind, RootSystem, Weight};

/// Upper bound on the number of entries `enumerate_spectrum` will materialize.
pub const MAX_SPECTRUM_ENTRIES: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `SU(n+1)/SU(n) = S^{2n+1}`
    #[serde(rename = "odd-a")]
    OddA,
    /// `SO(2n+1)/SO(2n) = S^{2n}`
    #[serde(rename = "even-b")]
    EvenB,
    /// `SO(2n)/SO(2n-1) = S^{2n-1}`
    #[serde(rename = "odd-d")]
    OddD,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::OddA, Family::EvenB, Family::OddD];

    pub fn slug(self) -> &'static str {
        match self {
            Family::OddA => "odd-a",
            Family::EvenB => "even-b",
            Family::OddD => "odd-d",
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Family::OddD => 2,
            _ => 1,
        }
    }

    pub fn root_kind(self) -> RootKind {
        match self {
            Family::OddA => RootKind::A,
            Family::EvenB => RootKind::B,
            Family::OddD => RootKind::D,
        }
    }

    pub fn branching_pair(self) -> BranchingPair {
        match self {
            Family::OddA => BranchingPair::AA,
            Family::EvenB => BranchingPair::BD,
            Family::OddD => BranchingPair::DB,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "odd-a" | "odda" | "a" => Ok(Family::OddA),
            "even-b" | "evenb" | "b" => Ok(Family::EvenB),
            "odd-d" | "oddd" | "d" => Ok(Family::OddD),
            other => Err(Error::InvalidArgument(format!("unknown family '{other}'"))),
        }
    }
}

/// One of the three homogeneous-space families together with its rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SphereFamily {
    pub family: Family,
    pub n: usize,
}

impl SphereFamily {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n < family.min_n() {
            return Err(Error::UnsupportedRank { kind: family.root_kind().name(), rank: n });
        }
        Ok(SphereFamily { family, n })
    }

    pub fn odd_a(n: usize) -> Result<Self> {
        Self::new(Family::OddA, n)
    }

    pub fn even_b(n: usize) -> Result<Self> {
        Self::new(Family::EvenB, n)
    }

    pub fn odd_d(n: usize) -> Result<Self> {
        Self::new(Family::OddD, n)
    }

    /// Real dimension of the sphere.
    pub fn sphere_dim(&self) -> usize {
        match self.family {
            Family::OddA => 2 * self.n + 1,
            Family::EvenB => 2 * self.n,
            Family::OddD => 2 * self.n - 1,
        }
    }

    /// Number of coordinates in a spectrum index.
    pub fn arity(&self) -> usize {
        match self.family {
            Family::OddA => 2,
            Family::EvenB | Family::OddD => 1,
        }
    }

    pub fn root_kind(&self) -> RootKind {
        self.family.root_kind()
    }

    pub fn root_system(&self) -> RootSystem {
        RootSystem::new(self.root_kind(), self.n).expect("rank validated on construction")
    }

    pub fn root_index(&self) -> SpectrumIndex {
        match self.family {
            Family::OddA => SpectrumIndex::Pair(0, 0),
            _ => SpectrumIndex::Single(0),
        }
    }

    pub fn check_index(&self, gamma: &SpectrumIndex) -> Result<()> {
        match (self.family, gamma) {
            (Family::OddA, SpectrumIndex::Pair(..)) => Ok(()),
            (Family::EvenB | Family::OddD, SpectrumIndex::Single(_)) => Ok(()),
            _ => Err(Error::InvalidArgument(format!("index {gamma} does not belong to {self}"))),
        }
    }

    /// The length function of the default growth graph in closed form:
    /// `max(γ1, γ2)` or `γ`, with the root assigned 1.
    pub fn canonical_length(&self, gamma: &SpectrumIndex) -> u64 {
        gamma.max_coord().max(1)
    }
}

impl fmt::Display for SphereFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={}", self.family, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpectrumIndex {
    Pair(u64, u64),
    Single(u64),
}

impl SpectrumIndex {
    pub fn coords(&self) -> Vec<u64> {
        match *self {
            SpectrumIndex::Pair(a, b) => vec![a, b],
            SpectrumIndex::Single(a) => vec![a],
        }
    }

    pub fn max_coord(&self) -> u64 {
        match *self {
            SpectrumIndex::Pair(a, b) => a.max(b),
            SpectrumIndex::Single(a) => a,
        }
    }

    pub fn coord_sum(&self) -> u64 {
        self.coords().iter().sum()
    }

    /// Componentwise sum; `None` if the arities differ.
    pub fn checked_add(&self, other: &SpectrumIndex) -> Option<SpectrumIndex> {
        match (*self, *other) {
            (SpectrumIndex::Pair(a, b), SpectrumIndex::Pair(c, d)) => Some(SpectrumIndex::Pair(a + c, b + d)),
            (SpectrumIndex::Single(a), SpectrumIndex::Single(c)) => Some(SpectrumIndex::Single(a + c)),
            _ => None,
        }
    }

    /// Per-coordinate signed difference `other - self`.
    pub fn shift_to(&self, other: &SpectrumIndex) -> Vec<i64> {
        self.coords().iter().zip(other.coords()).map(|(&a, b)| b as i64 - a as i64).collect()
    }
}

impl fmt::Display for SpectrumIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumIndex::Pair(a, b) => write!(f, "({a},{b})"),
            SpectrumIndex::Single(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for SpectrumIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: std::result::Result<Vec<u64>, _> =
            cleaned.split(',').map(|p| p.trim().parse::<u64>()).collect();
        match parts.map_err(|e| Error::InvalidArgument(format!("bad index '{s}': {e}")))?.as_slice() {
            [a] => Ok(SpectrumIndex::Single(*a)),
            [a, b] => Ok(SpectrumIndex::Pair(*a, *b)),
            _ => Err(Error::InvalidArgument(format!("bad index '{s}'"))),
        }
    }
}

/// `(γ1, 0, ..., 0, -γ2)` for the odd-A family, `(γ, 0, ..., 0)` otherwise.
pub fn index_to_weight(fam: &SphereFamily, gamma: &SpectrumIndex) -> Weight {
    let len = fam.root_kind().ambient_dim(fam.n);
    let mut coords = vec![0i64; len];
    match *gamma {
        SpectrumIndex::Pair(a, b) => {
            coords[0] = a as i64;
            coords[len - 1] -= b as i64;
        }
        SpectrumIndex::Single(a) => coords[0] = a as i64,
    }
    Weight::from_ints(&coords)
}

/// Inverse of [`index_to_weight`] on spherical weights, read literally
/// (odd-A weights as `U(n+1)` tuples).
pub fn weight_to_index(fam: &SphereFamily, weight: &Weight) -> Option<SpectrumIndex> {
    let ints = weight.to_ints()?;
    if ints.len() != fam.root_kind().ambient_dim(fam.n) {
        return None;
    }
    match fam.family {
        Family::OddA => {
            let m = ints.len();
            let (first, last) = (ints[0], ints[m - 1]);
            (first >= 0 && last <= 0 && ints[1..m - 1].iter().all(|&x| x == 0))
                .then(|| SpectrumIndex::Pair(first as u64, (-last) as u64))
        }
        Family::EvenB | Family::OddD => {
            (ints[0] >= 0 && ints[1..].iter().all(|&x| x == 0)).then(|| SpectrumIndex::Single(ints[0] as u64))
        }
    }
}

/// Multiplicity of the trivial subgroup representation in the irreducible
/// representation `λ` of the big group.
pub fn spherical_multiplicity(fam: &SphereFamily, lambda: &Weight) -> Result<u8> {
    let sys = fam.root_system();
    if lambda.len() != sys.ambient_dim() {
        return Err(Error::RankMismatch { expected: sys.ambient_dim(), got: lambda.len() });
    }
    if !sys.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    Ok(u8::from(weight_to_index(fam, lambda).is_some()))
}

/// One-step restriction patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchingPair {
    /// `U(n+1) ↓ U(n)`
    AA,
    /// `SO(2n+1) ↓ SO(2n)`
    BD,
    /// `SO(2n) ↓ SO(2n-1)`
    DB,
}

impl BranchingPair {
    fn big_kind(self) -> RootKind {
        match self {
            BranchingPair::AA => RootKind::A,
            BranchingPair::BD => RootKind::B,
            BranchingPair::DB => RootKind::D,
        }
    }
}

/// Interlacing test: 1 iff `μ` occurs in the restriction of `λ`.
///
/// * `AA`: `λ1 ≥ μ1 ≥ λ2 ≥ … ≥ μn ≥ λ(n+1)`
/// * `BD`: `λ1 ≥ μ1 ≥ λ2 ≥ … ≥ μ(n-1) ≥ λn ≥ |μn|`
/// * `DB`: `λ1 ≥ μ1 ≥ λ2 ≥ … ≥ μ(n-1) ≥ |λn|`
///
/// with `λ - μ` integral for the orthogonal pairs.
pub fn interlacing_branching_oracle(pair: BranchingPair, lambda: &Weight, mu: &Weight) -> Result<u8> {
    let l = lambda.coords();
    let m = mu.coords();
    let expected_mu = match pair {
        BranchingPair::AA | BranchingPair::DB => l.len().saturating_sub(1),
        BranchingPair::BD => l.len(),
    };
    if l.is_empty() || m.len() != expected_mu {
        return Err(Error::RankMismatch { expected: expected_mu, got: m.len() });
    }
    let rank = match pair {
        BranchingPair::AA => l.len() - 1,
        _ => l.len(),
    };
    let sys = RootSystem::new(pair.big_kind(), rank)?;
    if !sys.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    let integral_gap = |a: Rational64, b: Rational64| (a - b).is_integer();
    let ok = match pair {
        BranchingPair::AA => (0..m.len()).all(|i| l[i] >= m[i] && m[i] >= l[i + 1] && integral_gap(l[i], m[i])),
        BranchingPair::BD => {
            let n = l.len();
            (0..n - 1).all(|i| l[i] >= m[i] && m[i] >= l[i + 1])
                && l[n - 1] >= m[n - 1].abs()
                && (0..n).all(|i| integral_gap(l[i], m[i]))
        }
        BranchingPair::DB => {
            let n = l.len();
            (0..n - 1).all(|i| {
                let floor = if i + 1 == n - 1 { l[i + 1].abs() } else { l[i + 1] };
                l[i] >= m[i] && m[i] >= floor && integral_gap(l[i], m[i])
            })
        }
    };
    Ok(u8::from(ok))
}

/// `N_γ`, the dimension of the isotypic piece `W_γ`.
pub fn isotypic_dimension(fam: &SphereFamily, gamma: &SpectrumIndex) -> Result<BigUint> {
    fam.check_index(gamma)?;
    fam.root_system().weyl_dimension(&index_to_weight(fam, gamma))
}

/// All `γ` with `ℓ(γ) ≤ cutoff` paired with `N_γ`, in lexicographic order.
pub fn enumerate_spectrum(fam: &SphereFamily, cutoff: usize) -> Result<Vec<(SpectrumIndex, BigUint)>> {
    if cutoff < 1 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    let side = cutoff + 1;
    let count = match fam.arity() {
        2 => side.checked_mul(side),
        _ => Some(side),
    };
    match count {
        Some(c) if c <= MAX_SPECTRUM_ENTRIES => {}
        _ => return Err(Error::CutoffTooLarge { cutoff, limit: MAX_SPECTRUM_ENTRIES }),
    }
    let sys = fam.root_system();
    let k = cutoff as u64;
    let indices: Vec<SpectrumIndex> = match fam.family {
        Family::OddA => (0..=k).flat_map(|a| (0..=k).map(move |b| SpectrumIndex::Pair(a, b))).collect(),
        _ => (0..=k).map(SpectrumIndex::Single).collect(),
    };
    indices
        .into_iter()
        .map(|g| Ok((g, sys.weyl_dimension(&index_to_weight(fam, &g))?)))
        .collect()
}
