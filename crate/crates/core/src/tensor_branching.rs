//! Tensor products `V ⊗ V_λ` with the defining representation `V`, by
//! explicit rules and by the Brauer–Klimyk formula, and the bounded-leap
//! check that such products only move spherical indices by one step.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_systems::{RootKind, RootSystem, Weight};
use crate::spectrum::{index_to_weight, weight_to_index, SpectrumIndex, SphereFamily};

/// Largest rank accepted by the Brauer–Klimyk oracle.
pub const ORACLE_RANK_LIMIT: usize = 6;

/// Highest weights with positive multiplicities, sorted by weight.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightMultiset(Vec<(Weight, u64)>);

impl WeightMultiset {
    fn from_counts(counts: BTreeMap<Weight, u64>) -> Self {
        WeightMultiset(counts.into_iter().filter(|(_, m)| *m > 0).collect())
    }

    pub fn entries(&self) -> &[(Weight, u64)] {
        &self.0
    }

    pub fn weights(&self) -> impl Iterator<Item = &Weight> {
        self.0.iter().map(|(w, _)| w)
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.0.iter().any(|(v, _)| v == w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ mult · dim`
    pub fn dimension(&self, sys: &RootSystem) -> Result<BigUint> {
        let mut total = BigUint::default();
        for (w, m) in &self.0 {
            total += sys.weyl_dimension(w)? * BigUint::from(*m);
        }
        Ok(total)
    }
}

fn check_dominant(sys: &RootSystem, lambda: &Weight) -> Result<()> {
    if lambda.len() != sys.ambient_dim() {
        return Err(Error::RankMismatch { expected: sys.ambient_dim(), got: lambda.len() });
    }
    if !sys.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.to_string()));
    }
    Ok(())
}

/// Weights of the defining representation: `e_i` (A), `±e_i` and `0` (B), `±e_i` (D).
pub fn defining_weights(kind: RootKind, rank: usize) -> Result<Vec<Vec<i64>>> {
    kind.check_rank(rank)?;
    let dim = kind.ambient_dim(rank);
    let unit = |i: usize, s: i64| {
        let mut v = vec![0i64; dim];
        v[i] = s;
        v
    };
    let mut out: Vec<Vec<i64>> = (0..dim).map(|i| unit(i, 1)).collect();
    if kind != RootKind::A {
        out.extend((0..dim).map(|i| unit(i, -1)));
    }
    if kind == RootKind::B {
        out.push(vec![0; dim]);
    }
    Ok(out)
}

/// `V ⊗ V_λ` by the explicit rules: every `λ ± e_i` that is dominant, and
/// for B also `λ` itself unless its last entry is zero.
pub fn fundamental_tensor(kind: RootKind, rank: usize, lambda: &Weight) -> Result<WeightMultiset> {
    let sys = RootSystem::new(kind, rank)?;
    check_dominant(&sys, lambda)?;
    let mut counts = BTreeMap::new();
    let signs: &[i64] = if kind == RootKind::A { &[1] } else { &[1, -1] };
    for i in 0..lambda.len() {
        for &s in signs {
            let w = lambda.add_unit(i, s);
            if sys.is_dominant(&w) {
                *counts.entry(w).or_insert(0) += 1;
            }
        }
    }
    if kind == RootKind::B && !lambda.coords()[lambda.len() - 1].is_zero() {
        *counts.entry(lambda.clone()).or_insert(0) += 1;
    }
    Ok(WeightMultiset::from_counts(counts))
}

/// Sorts `v` descending; returns the parity sign of the sorting permutation,
/// or `None` if two entries coincide.
fn sort_with_sign(v: &mut [i64]) -> Option<i64> {
    let mut inversions = 0usize;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            match v[i].cmp(&v[j]) {
                std::cmp::Ordering::Less => inversions += 1,
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => {}
            }
        }
    }
    v.sort_unstable_by(|a, b| b.cmp(a));
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Moves a `ρ`-shifted vector (doubled coordinates) into the open dominant
/// chamber. Returns the image and `det(w)`, or `None` if the vector lies on
/// a reflecting hyperplane.
pub fn dominant_reflect(kind: RootKind, v: &[i64]) -> Option<(Vec<i64>, i64)> {
    let mut u = v.to_vec();
    let mut sign = 1;
    match kind {
        RootKind::A => {}
        RootKind::B => {
            for x in u.iter_mut() {
                if *x == 0 {
                    return None;
                }
                if *x < 0 {
                    *x = -*x;
                    sign = -sign;
                }
            }
        }
        RootKind::D => {
            let negatives = u.iter().filter(|&&x| x < 0).count();
            for x in u.iter_mut() {
                *x = x.abs();
            }
            let has_zero = u.contains(&0);
            sign *= sort_with_sign(&mut u)?;
            // an odd number of flips is only absorbed by a zero entry
            if negatives % 2 == 1 && !has_zero {
                let last = u.len() - 1;
                u[last] = -u[last];
            }
            return Some((u, sign));
        }
    }
    sign *= sort_with_sign(&mut u)?;
    Some((u, sign))
}

/// `V ⊗ V_λ = Σ_ν sign(w) V_{w(λ+ρ+ν)−ρ}` over the weights `ν` of `V`.
pub fn brauer_klimyk_oracle(kind: RootKind, rank: usize, lambda: &Weight) -> Result<WeightMultiset> {
    if rank > ORACLE_RANK_LIMIT {
        return Err(Error::RankLimit { rank, limit: ORACLE_RANK_LIMIT });
    }
    let sys = RootSystem::new(kind, rank)?;
    check_dominant(&sys, lambda)?;
    let doubled = lambda.to_doubled().ok_or_else(|| Error::NotDominant(lambda.to_string()))?;
    let rho = sys.doubled_rho();
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for nu in defining_weights(kind, rank)? {
        let shifted: Vec<i64> = doubled.iter().zip(rho).zip(&nu).map(|((l, r), n)| l + r + 2 * n).collect();
        if let Some((image, sign)) = dominant_reflect(kind, &shifted) {
            let w: Vec<i64> = image.iter().zip(rho).map(|(x, r)| x - r).collect();
            *acc.entry(Weight::from_halves(&w)).or_insert(0) += sign;
        }
    }
    let mut counts = BTreeMap::new();
    for (w, m) in acc {
        if m < 0 {
            return Err(Error::NegativeMultiplicity { weight: w.to_string(), mult: m });
        }
        counts.insert(w, m as u64);
    }
    Ok(WeightMultiset::from_counts(counts))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeapReport {
    pub gamma: SpectrumIndex,
    /// Spherical indices occurring in `V ⊗ W_γ`.
    pub reachable: Vec<SpectrumIndex>,
    /// Largest `|β_j − γ_j|` over reachable `β`.
    pub max_shift: u64,
    /// Some reachable `β` has a coordinate below `γ`.
    pub one_sided_discrepancy: bool,
    pub passed: bool,
}

/// Spherical components of `V ⊗ W_γ` and how far they move the index.
pub fn bounded_leap_check(fam: &SphereFamily, gamma: &SpectrumIndex) -> Result<LeapReport> {
    fam.check_index(gamma)?;
    let lambda = index_to_weight(fam, gamma);
    let product = fundamental_tensor(fam.root_kind(), fam.n, &lambda)?;
    let reachable: BTreeSet<SpectrumIndex> = product.weights().filter_map(|w| weight_to_index(fam, w)).collect();
    let reachable: Vec<SpectrumIndex> = reachable.into_iter().collect();
    let shifts: Vec<Vec<i64>> = reachable.iter().map(|b| gamma.shift_to(b)).collect();
    let max_shift = shifts.iter().flatten().map(|s| s.unsigned_abs()).max().unwrap_or(0);
    let one_sided_discrepancy = shifts.iter().flatten().any(|&s| s < 0);
    Ok(LeapReport {
        gamma: *gamma,
        passed: !reachable.is_empty() && max_shift <= 1,
        reachable,
        max_shift,
        one_sided_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::from_ints(c)
    }

    #[test]
    fn a2_adjoint() {
        let t = fundamental_tensor(RootKind::A, 2, &w(&[1, 0, -1])).unwrap();
        let expected: Vec<Weight> = vec![w(&[1, 0, 0]), w(&[1, 1, -1]), w(&[2, 0, -1])];
        assert_eq!(t.weights().cloned().collect::<Vec<_>>(), expected);
        let sys = RootSystem::new(RootKind::A, 2).unwrap();
        assert_eq!(t.dimension(&sys).unwrap(), BigUint::from(24u32));
        assert_eq!(brauer_klimyk_oracle(RootKind::A, 2, &w(&[1, 0, -1])).unwrap(), t);
    }

    #[test]
    fn b2_vector_cancels_zero_weight() {
        let t = fundamental_tensor(RootKind::B, 2, &w(&[1, 0])).unwrap();
        assert_eq!(t.weights().cloned().collect::<Vec<_>>(), vec![w(&[0, 0]), w(&[1, 1]), w(&[2, 0])]);
        assert!(!t.contains(&w(&[1, 0])));
        let sys = RootSystem::new(RootKind::B, 2).unwrap();
        assert_eq!(t.dimension(&sys).unwrap(), BigUint::from(25u32));
        assert_eq!(brauer_klimyk_oracle(RootKind::B, 2, &w(&[1, 0])).unwrap(), t);
    }

    #[test]
    fn trivial_products() {
        let t = fundamental_tensor(RootKind::A, 1, &w(&[0, 0])).unwrap();
        assert_eq!(t.entries(), &[(w(&[1, 0]), 1)]);
        let t = brauer_klimyk_oracle(RootKind::A, 2, &w(&[0, 0, 0])).unwrap();
        assert_eq!(t.entries(), &[(w(&[1, 0, 0]), 1)]);
    }

    #[test]
    fn spin_weights() {
        // B1 spin 1/2 ⊗ vector = spin 3/2 + spin 1/2
        let half = Weight::from_halves(&[1]);
        let t = fundamental_tensor(RootKind::B, 1, &half).unwrap();
        assert_eq!(t, brauer_klimyk_oracle(RootKind::B, 1, &half).unwrap());
        assert_eq!(t.len(), 2);
        for lam in [Weight::from_halves(&[1, 1, 1]), Weight::from_halves(&[3, 1, -1])] {
            let a = fundamental_tensor(RootKind::D, 3, &lam).unwrap();
            assert_eq!(a, brauer_klimyk_oracle(RootKind::D, 3, &lam).unwrap(), "{lam}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(fundamental_tensor(RootKind::A, 2, &w(&[0, 1, 0])), Err(Error::NotDominant(_))));
        assert!(matches!(
            brauer_klimyk_oracle(RootKind::A, 7, &w(&[0; 8])),
            Err(Error::RankLimit { rank: 7, limit: 6 })
        ));
    }

    #[test]
    fn leap_examples() {
        let r = bounded_leap_check(&SphereFamily::odd_a(2).unwrap(), &SpectrumIndex::Pair(1, 1)).unwrap();
        assert_eq!(r.reachable, vec![SpectrumIndex::Pair(1, 0), SpectrumIndex::Pair(2, 1)]);
        assert_eq!(r.max_shift, 1);
        assert!(r.one_sided_discrepancy && r.passed);

        let r = bounded_leap_check(&SphereFamily::even_b(2).unwrap(), &SpectrumIndex::Single(3)).unwrap();
        assert_eq!(r.reachable, vec![SpectrumIndex::Single(2), SpectrumIndex::Single(4)]);
        assert_eq!(r.max_shift, 1);

        let r = bounded_leap_check(&SphereFamily::odd_d(2).unwrap(), &SpectrumIndex::Single(0)).unwrap();
        assert_eq!(r.reachable, vec![SpectrumIndex::Single(1)]);
        assert!(!r.one_sided_discrepancy);

        // rank one keeps γ itself
        let r = bounded_leap_check(&SphereFamily::even_b(1).unwrap(), &SpectrumIndex::Single(3)).unwrap();
        assert_eq!(r.reachable.len(), 3);
    }
}
