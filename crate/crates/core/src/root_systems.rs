//! Root data for the classical types A, B and D, and the Weyl dimension
//! formula evaluated in exact arithmetic.
//!
//! Weights live in the standard orthonormal `e`-basis. Type `A_n` uses
//! `n + 1` coordinates (a weight of `U(n+1)`), types `B_n` and `D_n` use `n`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootKind {
    A,
    B,
    D,
}

impl RootKind {
    pub fn name(self) -> &'static str {
        match self {
            RootKind::A => "A",
            RootKind::B => "B",
            RootKind::D => "D",
        }
    }

    /// Number of `e`-coordinates carried by a weight of rank `rank`.
    pub fn ambient_dim(self, rank: usize) -> usize {
        match self {
            RootKind::A => rank + 1,
            RootKind::B | RootKind::D => rank,
        }
    }

    /// Dimension of the defining representation.
    pub fn defining_dim(self, rank: usize) -> usize {
        match self {
            RootKind::A => rank + 1,
            RootKind::B => 2 * rank + 1,
            RootKind::D => 2 * rank,
        }
    }

    pub fn check_rank(self, rank: usize) -> Result<()> {
        let min = match self {
            RootKind::A | RootKind::B => 1,
            RootKind::D => 2,
        };
        if rank < min {
            return Err(Error::UnsupportedRank { kind: self.name(), rank });
        }
        Ok(())
    }
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A weight in `e`-coordinates with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(Vec<Rational64>);

impl Weight {
    pub fn new(coords: Vec<Rational64>) -> Self {
        Weight(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| Rational64::from_integer(c)).collect())
    }

    /// Builds a weight from doubled coordinates, so `[3, 1]` is `(3/2, 1/2)`.
    pub fn from_halves(doubled: &[i64]) -> Self {
        Weight(doubled.iter().map(|&c| Rational64::new(c, 2)).collect())
    }

    pub fn zero(len: usize) -> Self {
        Weight(vec![Rational64::zero(); len])
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// All entries are odd multiples of 1/2.
    pub fn is_half_integral(&self) -> bool {
        !self.0.is_empty() && self.0.iter().all(|c| (*c * 2).is_integer() && !c.is_integer())
    }

    /// Integer coordinates, if every entry is an integer.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    /// Doubled coordinates, if every entry lies in `Z/2`.
    pub fn to_doubled(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|c| {
                let d = *c * 2;
                d.is_integer().then(|| d.to_integer())
            })
            .collect()
    }

    pub fn add_unit(&self, index: usize, sign: i64) -> Weight {
        let mut coords = self.0.clone();
        coords[index] += Rational64::from_integer(sign);
        Weight(coords)
    }

    pub fn shifted(&self, by: Rational64) -> Weight {
        Weight(self.0.iter().map(|c| c - by).collect())
    }

    /// Representative of the class modulo `(1, ..., 1)` used for `SU(n+1)`
    /// comparisons: subtract the integer closest to zero inside the median
    /// interval. The last entry of the result is `<= 0`.
    pub fn canonical_a(&self) -> Weight {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut sorted = self.0.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        let m = sorted.len();
        let hi = sorted[(m - 1) / 2];
        let lo = sorted[m / 2];
        let zero = Rational64::zero();
        let shift = if zero > hi {
            hi.floor()
        } else if zero < lo {
            lo.ceil()
        } else {
            zero
        };
        self.shifted(shift)
    }

    /// Equality modulo `(1, ..., 1)`.
    pub fn same_class_a(&self, other: &Weight) -> bool {
        self.canonical_a() == other.canonical_a()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    pub kind: RootKind,
    pub rank: usize,
    pub positive_roots: Vec<Vec<i64>>,
    pub weyl_vector: Vec<Rational64>,
    /// `2ρ`, kept as integers for the dimension formula.
    doubled_rho: Vec<i64>,
}

/// Positive roots `{e_i - e_j}` (A), `{e_i ± e_j} ∪ {e_i}` (B), `{e_i ± e_j}` (D).
pub fn positive_roots(kind: RootKind, rank: usize) -> Result<Vec<Vec<i64>>> {
    kind.check_rank(rank)?;
    let dim = kind.ambient_dim(rank);
    let unit = |i: usize, j: Option<(usize, i64)>| {
        let mut v = vec![0i64; dim];
        v[i] = 1;
        if let Some((j, s)) = j {
            v[j] = s;
        }
        v
    };
    let mut roots = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            roots.push(unit(i, Some((j, -1))));
            if kind != RootKind::A {
                roots.push(unit(i, Some((j, 1))));
            }
        }
        if kind == RootKind::B {
            roots.push(unit(i, None));
        }
    }
    Ok(roots)
}

impl RootSystem {
    pub fn new(kind: RootKind, rank: usize) -> Result<Self> {
        let positive_roots = positive_roots(kind, rank)?;
        let dim = kind.ambient_dim(rank);
        let mut doubled_rho = vec![0i64; dim];
        for root in &positive_roots {
            for (acc, r) in doubled_rho.iter_mut().zip(root) {
                *acc += r;
            }
        }
        let weyl_vector = doubled_rho.iter().map(|&r| Rational64::new(r, 2)).collect();
        Ok(RootSystem { kind, rank, positive_roots, weyl_vector, doubled_rho })
    }

    pub fn ambient_dim(&self) -> usize {
        self.kind.ambient_dim(self.rank)
    }

    pub fn doubled_rho(&self) -> &[i64] {
        &self.doubled_rho
    }

    /// Dominance plus the integrality constraint of the type: integer entries
    /// for A, all-integer or all-half-integer entries for B and D.
    pub fn is_dominant(&self, weight: &Weight) -> bool {
        if weight.len() != self.ambient_dim() {
            return false;
        }
        let c = weight.coords();
        let ordered = c.windows(2).all(|w| w[0] >= w[1]);
        match self.kind {
            RootKind::A => weight.is_integral() && ordered,
            RootKind::B => {
                (weight.is_integral() || weight.is_half_integral())
                    && ordered
                    && !c[c.len() - 1].is_negative()
            }
            RootKind::D => {
                let n = c.len();
                let head_ordered = c[..n - 1].windows(2).all(|w| w[0] >= w[1]);
                (weight.is_integral() || weight.is_half_integral())
                    && head_ordered
                    && c[n - 2] >= c[n - 1].abs()
            }
        }
    }

    fn check_dominant(&self, weight: &Weight) -> Result<()> {
        if weight.len() != self.ambient_dim() {
            return Err(Error::RankMismatch { expected: self.ambient_dim(), got: weight.len() });
        }
        if !self.is_dominant(weight) {
            return Err(Error::NotDominant(weight.to_string()));
        }
        Ok(())
    }

    /// `∏_{α>0} ⟨λ+ρ, α⟩ / ⟨ρ, α⟩`, evaluated on doubled integer coordinates.
    pub fn weyl_dimension(&self, weight: &Weight) -> Result<BigUint> {
        self.check_dominant(weight)?;
        let doubled = weight.to_doubled().ok_or_else(|| Error::NotDominant(weight.to_string()))?;
        let shifted: Vec<i64> =
            doubled.iter().zip(&self.doubled_rho).map(|(l, r)| l + r).collect();

        // Fast path in u128, falling back to big integers on overflow.
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        let mut overflow = false;
        let mut pairs = Vec::with_capacity(self.positive_roots.len());
        for root in &self.positive_roots {
            let top = dot(root, &shifted);
            let bottom = dot(root, &self.doubled_rho);
            if top <= 0 || bottom <= 0 {
                return Err(Error::NonIntegerResult(weight.to_string()));
            }
            pairs.push((top as u64, bottom as u64));
            if !overflow {
                match (num.checked_mul(top as u128), den.checked_mul(bottom as u128)) {
                    (Some(a), Some(b)) => {
                        let g = a.gcd(&b);
                        num = a / g;
                        den = b / g;
                    }
                    _ => overflow = true,
                }
            }
        }
        if !overflow {
            if den != 1 {
                return Err(Error::NonIntegerResult(weight.to_string()));
            }
            return Ok(BigUint::from(num));
        }
        let mut big_num = BigUint::one();
        let mut big_den = BigUint::one();
        for (top, bottom) in pairs {
            big_num *= top;
            big_den *= bottom;
        }
        let (q, r) = big_num.div_rem(&big_den);
        if !r.is_zero() {
            return Err(Error::NonIntegerResult(weight.to_string()));
        }
        Ok(q)
    }

    /// `⟨λ, α^∨⟩` for the simple coroots, i.e. the Dynkin labels of `λ`.
    pub fn dynkin_labels(&self, weight: &Weight) -> Vec<Rational64> {
        let c = weight.coords();
        let n = self.rank;
        let mut labels: Vec<Rational64> = (0..n.saturating_sub(1)).map(|i| c[i] - c[i + 1]).collect();
        match self.kind {
            RootKind::A => labels.push(c[n - 1] - c[n]),
            RootKind::B => labels.push(c[n - 1] * 2),
            RootKind::D => labels.push(c[n - 2] + c[n - 1]),
        }
        labels
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Convenience wrapper used throughout the crate.
pub fn weyl_dimension(kind: RootKind, rank: usize, weight: &Weight) -> Result<BigUint> {
    RootSystem::new(kind, rank)?.weyl_dimension(weight)
}

/// Dominant weights with every `|coordinate| ≤ max_entry`, in sorted order.
/// Half-integral weights are included for B and D.
pub fn dominant_weights(kind: RootKind, rank: usize, max_entry: i64) -> Result<Vec<Weight>> {
    let sys = RootSystem::new(kind, rank)?;
    let dim = sys.ambient_dim();
    let step = if kind == RootKind::A { 2 } else { 1 };
    let values: Vec<i64> = (-2 * max_entry..=2 * max_entry).step_by(step).collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; dim];
    loop {
        let doubled: Vec<i64> = digits.iter().map(|&d| values[d]).collect();
        let w = Weight::from_halves(&doubled);
        if sys.is_dominant(&w) {
            out.push(w);
        }
        let Some(pos) = digits.iter().rposition(|&d| d + 1 < values.len()) else { break };
        digits[pos] += 1;
        digits[pos + 1..].iter_mut().for_each(|d| *d = 0);
    }
    out.sort();
    Ok(out)
}

/// `ln x` for a big unsigned integer, stable far beyond the f64 range.
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: i64, k: i64) -> u128 {
        if k < 0 || n < 0 || k > n {
            return 0;
        }
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc
    }

    #[test]
    fn dominant_enumeration() {
        // (a, b) with a ≥ b in [-1, 1]
        assert_eq!(dominant_weights(RootKind::A, 1, 1).unwrap().len(), 6);
        let b1 = dominant_weights(RootKind::B, 1, 1).unwrap();
        assert_eq!(b1, vec![Weight::from_halves(&[0]), Weight::from_halves(&[1]), Weight::from_halves(&[2])]);
        let d2 = dominant_weights(RootKind::D, 2, 1).unwrap();
        assert!(d2.contains(&Weight::from_halves(&[1, -1])));
        assert!(d2.iter().all(|w| RootSystem::new(RootKind::D, 2).unwrap().is_dominant(w)));
    }

    #[test]
    fn root_counts() {
        for n in 1..8 {
            assert_eq!(positive_roots(RootKind::A, n).unwrap().len(), n * (n + 1) / 2);
            assert_eq!(positive_roots(RootKind::B, n).unwrap().len(), n * n);
            if n >= 2 {
                assert_eq!(positive_roots(RootKind::D, n).unwrap().len(), n * (n - 1));
            }
        }
        assert_eq!(positive_roots(RootKind::A, 1).unwrap(), vec![vec![1, -1]]);
        let b2 = positive_roots(RootKind::B, 2).unwrap();
        for r in [[1, -1], [1, 1], [1, 0], [0, 1]] {
            assert!(b2.contains(&r.to_vec()));
        }
        assert!(matches!(
            positive_roots(RootKind::D, 1),
            Err(Error::UnsupportedRank { kind: "D", rank: 1 })
        ));
    }

    #[test]
    fn weyl_vector_is_half_sum() {
        let b3 = RootSystem::new(RootKind::B, 3).unwrap();
        let expected: Vec<Rational64> =
            [5, 3, 1].iter().map(|&x| Rational64::new(x, 2)).collect();
        assert_eq!(b3.weyl_vector, expected);
        let d3 = RootSystem::new(RootKind::D, 3).unwrap();
        assert_eq!(d3.weyl_vector, vec![2.into(), 1.into(), 0.into()]);
    }

    #[test]
    fn small_dimensions() {
        let dim = |k, n, w: &[i64]| weyl_dimension(k, n, &Weight::from_ints(w)).unwrap();
        assert_eq!(dim(RootKind::A, 2, &[1, 0, -1]), 8u32.into());
        assert_eq!(dim(RootKind::B, 2, &[1, 0]), 5u32.into());
        assert_eq!(dim(RootKind::D, 3, &[1, 0, 0]), 6u32.into());
        assert_eq!(dim(RootKind::B, 4, &[0, 0, 0, 0]), 1u32.into());
        assert_eq!(dim(RootKind::A, 1, &[0, 0]), 1u32.into());
        // spin representations
        let b2 = RootSystem::new(RootKind::B, 2).unwrap();
        assert_eq!(b2.weyl_dimension(&Weight::from_halves(&[1, 1])).unwrap(), 4u32.into());
        let d3 = RootSystem::new(RootKind::D, 3).unwrap();
        assert_eq!(d3.weyl_dimension(&Weight::from_halves(&[1, 1, -1])).unwrap(), 4u32.into());
    }

    #[test]
    fn not_dominant_is_rejected() {
        let a2 = RootSystem::new(RootKind::A, 2).unwrap();
        assert!(matches!(a2.weyl_dimension(&Weight::from_ints(&[0, 1, 0])), Err(Error::NotDominant(_))));
        let b2 = RootSystem::new(RootKind::B, 2).unwrap();
        assert!(matches!(b2.weyl_dimension(&Weight::from_ints(&[1, -1])), Err(Error::NotDominant(_))));
        let d3 = RootSystem::new(RootKind::D, 3).unwrap();
        assert!(d3.is_dominant(&Weight::from_ints(&[2, 1, -1])));
        assert!(!d3.is_dominant(&Weight::from_ints(&[2, 1, -2])));
        // mixed integer / half-integer entries
        assert!(!b2.is_dominant(&Weight::new(vec![Rational64::new(3, 2), 1.into()])));
        assert!(matches!(
            b2.weyl_dimension(&Weight::from_ints(&[1, 0, 0])),
            Err(Error::RankMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn spherical_closed_forms() {
        // A_n, λ = (a, 0, ..., 0, -b)
        for n in 1..=6i64 {
            let sys = RootSystem::new(RootKind::A, n as usize).unwrap();
            for a in 0..=50i64 {
                for b in 0..=50i64 {
                    let mut w = vec![0i64; n as usize + 1];
                    w[0] = a;
                    w[n as usize] = -b;
                    let got = sys.weyl_dimension(&Weight::from_ints(&w)).unwrap();
                    let closed = (a + b + n) as u128
                        * binom(a + n - 1, n - 1)
                        * binom(b + n - 1, n - 1)
                        / n as u128;
                    assert_eq!(got, BigUint::from(closed), "n={n} a={a} b={b}");
                }
            }
        }
        // harmonic polynomial dimensions on S^{2n} and S^{2n-1}
        for n in 1..=6i64 {
            let b = RootSystem::new(RootKind::B, n as usize).unwrap();
            for k in 0..=40i64 {
                let mut w = vec![0i64; n as usize];
                w[0] = k;
                let harm = binom(2 * n + k, k) - binom(2 * n + k - 2, k - 2);
                assert_eq!(b.weyl_dimension(&Weight::from_ints(&w)).unwrap(), BigUint::from(harm));
                if n >= 2 {
                    let d = RootSystem::new(RootKind::D, n as usize).unwrap();
                    let harm = binom(2 * n - 1 + k, k) - binom(2 * n - 3 + k, k - 2);
                    assert_eq!(d.weyl_dimension(&Weight::from_ints(&w)).unwrap(), BigUint::from(harm));
                }
            }
        }
    }

    #[test]
    fn a_dimension_is_shift_invariant() {
        let sys = RootSystem::new(RootKind::A, 3).unwrap();
        let w = Weight::from_ints(&[4, 2, 2, -1]);
        let base = sys.weyl_dimension(&w).unwrap();
        for s in -5..=5 {
            let shifted = w.shifted(Rational64::from_integer(s));
            assert_eq!(sys.weyl_dimension(&shifted).unwrap(), base);
        }
    }

    #[test]
    fn canonical_representative() {
        assert_eq!(Weight::from_ints(&[2, 0, -1]).canonical_a(), Weight::from_ints(&[2, 0, -1]));
        assert_eq!(Weight::from_ints(&[3, 1, 1]).canonical_a(), Weight::from_ints(&[2, 0, 0]));
        assert_eq!(Weight::from_ints(&[1, -1]).canonical_a(), Weight::from_ints(&[1, -1]));
        assert_eq!(Weight::from_ints(&[5, 3]).canonical_a(), Weight::from_ints(&[2, 0]));
        assert!(Weight::from_ints(&[2, 1, 0]).same_class_a(&Weight::from_ints(&[1, 0, -1])));
        let c = Weight::from_ints(&[-2, -3, -7]).canonical_a();
        assert!(*c.coords().last().unwrap() <= Rational64::zero());
    }

    #[test]
    fn big_ln_matches_f64() {
        let x = BigUint::from(123_456_789u64);
        assert!((big_ln(&x) - (123_456_789f64).ln()).abs() < 1e-12);
        let huge = BigUint::from(3u32).pow(2000);
        assert!((big_ln(&huge) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }
}
