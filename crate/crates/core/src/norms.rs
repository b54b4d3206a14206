//! Norms of the highest-weight monomials `b^γ`.
//!
//! On the odd-A family `b^(γ1,γ2) = y^γ1 z^γ2` and its sup norm is the
//! maximum of `y^a z^b` over the quarter circle `Θ = {y, z ≥ 0, y² + z² = 1}`.
//! That maximum has the closed form `sqrt(a^a b^b / (a+b)^(a+b))`, whose
//! square is rational, so every ratio bound below is decided exactly.
//! L² norms are normalized integrals over the sphere, also exact rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{Family, SpectrumIndex, SphereFamily};

/// Powers `y^a z^b` of the two distinguished coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialExponents {
    pub a: u64,
    pub b: u64,
}

impl MonomialExponents {
    pub const fn new(a: u64, b: u64) -> Self {
        MonomialExponents { a, b }
    }

    pub fn is_constant(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// `self · other^m`
    pub fn times_power(&self, other: &MonomialExponents, m: u64) -> MonomialExponents {
        MonomialExponents::new(self.a + m * other.a, self.b + m * other.b)
    }
}

impl fmt::Display for MonomialExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, 0) => f.write_str("1"),
            (a, 0) => write!(f, "y^{a}"),
            (0, b) => write!(f, "z^{b}"),
            (a, b) => write!(f, "y^{a} z^{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    #[default]
    Sup,
    L2,
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::Sup => "sup",
            NormKind::L2 => "l2",
        })
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sup" => Ok(NormKind::Sup),
            "l2" => Ok(NormKind::L2),
            other => Err(Error::InvalidArgument(format!("unknown norm '{other}'"))),
        }
    }
}

fn pow_self(x: u64) -> BigUint {
    // 0^0 = 1
    BigUint::from(x).pow(x as u32)
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `a^a b^b / (a+b)^(a+b)`, the squared maximum of `y^a z^b` on `Θ`.
pub fn monomial_sup_sq_exact(a: u64, b: u64) -> BigRational {
    let num = pow_self(a) * pow_self(b);
    let den = pow_self(a + b);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Maximum of `y^a z^b` over the quarter circle.
pub fn monomial_sup(a: u64, b: u64) -> f64 {
    let xlnx = |x: u64| if x == 0 { 0.0 } else { x as f64 * (x as f64).ln() };
    (0.5 * (xlnx(a) + xlnx(b) - xlnx(a + b))).exp()
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (hi - lo).abs() > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Numerical maximum of `y^a z^b` on `Θ`: a dense sweep over the angle
/// `y = cos t, z = sin t` followed by golden-section refinement around the
/// best grid point. Grids smaller than 100 are raised to 100.
pub fn monomial_sup_oracle(a: u64, b: u64, grid_size: usize) -> f64 {
    if a == 0 && b == 0 {
        return 1.0;
    }
    let grid = grid_size.max(100);
    let g = |t: f64| t.cos().max(0.0).powi(a as i32) * t.sin().max(0.0).powi(b as i32);
    let end = std::f64::consts::FRAC_PI_2;
    let step = end / grid as f64;
    let (best_i, best_v) = (0..=grid)
        .map(|i| (i, g(i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let lo = (best_i.saturating_sub(1)) as f64 * step;
    let hi = ((best_i + 1).min(grid)) as f64 * step;
    let (_, refined) = golden_section_max(g, lo, hi, 1e-13);
    refined.max(best_v)
}

/// Exact `∫ |b^γ|² dσ` for the normalized measure on the sphere.
///
/// Odd-A: `n! γ1! γ2! / (n+γ1+γ2)!`. Even-B / odd-D on `S^{m-1} ⊂ R^m`, with
/// `w = (x1 + i x2)/√2` the first Witt coordinate: `E|w|^{2γ} = 2^{-γ} γ! / (m/2)_γ`.
pub fn l2_monomial_norm_sq(fam: &SphereFamily, gamma: &SpectrumIndex) -> Result<BigRational> {
    fam.check_index(gamma)?;
    let int = |x: u64| BigRational::from_integer(BigInt::from(x));
    Ok(match *gamma {
        SpectrumIndex::Pair(g1, g2) => {
            let n = fam.n as u64;
            // n! g1! g2! / (n+g1+g2)! = g1! g2! / ((n+1)(n+2)...(n+g1+g2))
            let mut num = BigRational::one();
            for k in 1..=g1 {
                num *= int(k);
            }
            for k in 1..=g2 {
                num *= int(k);
            }
            let mut den = BigRational::one();
            for k in (n + 1)..=(n + g1 + g2) {
                den *= int(k);
            }
            num / den
        }
        SpectrumIndex::Single(g) => {
            let m = match fam.family {
                Family::EvenB => 2 * fam.n as u64 + 1,
                _ => 2 * fam.n as u64,
            };
            // prod_{j<g} (j+1) / (2 (m/2 + j)) = prod (j+1)/(m + 2j)
            let mut acc = BigRational::one();
            for j in 0..g {
                acc *= BigRational::new(BigInt::from(j + 1), BigInt::from(m + 2 * j));
            }
            acc
        }
    })
}

/// Squared norm of `b^γ` as an exact rational.
pub fn hwv_norm_sq_exact(fam: &SphereFamily, gamma: &SpectrumIndex, kind: NormKind) -> Result<BigRational> {
    fam.check_index(gamma)?;
    match (kind, gamma) {
        (NormKind::Sup, SpectrumIndex::Pair(a, b)) => Ok(monomial_sup_sq_exact(*a, *b)),
        (NormKind::Sup, SpectrumIndex::Single(_)) => Ok(BigRational::one()),
        (NormKind::L2, _) => l2_monomial_norm_sq(fam, gamma),
    }
}

/// Norm of the highest-weight vector `b^γ`.
pub fn hwv_norm(fam: &SphereFamily, gamma: &SpectrumIndex, kind: NormKind) -> Result<f64> {
    fam.check_index(gamma)?;
    Ok(match (kind, gamma) {
        (NormKind::Sup, SpectrumIndex::Pair(a, b)) => monomial_sup(*a, *b),
        (NormKind::Sup, SpectrumIndex::Single(_)) => 1.0,
        (NormKind::L2, _) => ratio_to_f64(&l2_monomial_norm_sq(fam, gamma)?).sqrt(),
    })
}

/// `(‖b^from‖ / ‖b^to‖)²`, exact.
pub fn hwv_ratio_sq_exact(
    fam: &SphereFamily,
    from: &SpectrumIndex,
    to: &SpectrumIndex,
    kind: NormKind,
) -> Result<BigRational> {
    let num = hwv_norm_sq_exact(fam, from, kind)?;
    let den = hwv_norm_sq_exact(fam, to, kind)?;
    Ok(num / den)
}

/// `‖b^from‖ / ‖b^to‖` computed from the exact squared ratio.
pub fn hwv_ratio(fam: &SphereFamily, from: &SpectrumIndex, to: &SpectrumIndex, kind: NormKind) -> Result<f64> {
    Ok(ratio_to_f64(&hwv_ratio_sq_exact(fam, from, to, kind)?).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioBoundReport {
    pub f: MonomialExponents,
    pub h: MonomialExponents,
    /// `‖h^m f‖ / ‖h^(m+1) f‖` for `m = 0..=m_max`.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    /// `1/|h(x0)|` at a maximizer `x0` of `|f|`; infinite if `h(x0) = 0`.
    pub bound: f64,
    pub applicable: bool,
    /// Every ratio is at most the bound (decided on exact squares).
    pub holds: bool,
}

/// Checks `‖h^m f‖ / ‖h^(m+1) f‖ ≤ 1/|h(x0)|` for sup norms on `Θ`.
///
/// For constant `f` every point of `Θ` is a maximizer, so `x0` is taken to
/// maximize `|h|`, which gives the sharpest bound `1/‖h‖`.
pub fn ratio_bound_check(f: MonomialExponents, h: MonomialExponents, m_max: u64) -> Result<RatioBoundReport> {
    if h.is_constant() {
        return Err(Error::InvalidArgument("h must be non-constant".into()));
    }
    // h(x0)^2 as an exact rational
    let h_at_max_sq = if f.is_constant() {
        monomial_sup_sq_exact(h.a, h.b)
    } else {
        let total = BigInt::from(f.a + f.b);
        let y2 = BigRational::new(BigInt::from(f.a), total.clone());
        let z2 = BigRational::new(BigInt::from(f.b), total);
        pow_rational(&y2, h.a) * pow_rational(&z2, h.b)
    };
    let applicable = !h_at_max_sq.is_zero();
    let bound_sq = applicable.then(|| h_at_max_sq.recip());

    let mut ratios = Vec::with_capacity(m_max as usize + 1);
    let mut holds = applicable;
    for m in 0..=m_max {
        let lower = f.times_power(&h, m);
        let upper = f.times_power(&h, m + 1);
        let r_sq = monomial_sup_sq_exact(lower.a, lower.b) / monomial_sup_sq_exact(upper.a, upper.b);
        if let Some(b) = &bound_sq {
            holds &= &r_sq <= b;
        }
        ratios.push(ratio_to_f64(&r_sq).sqrt());
    }
    let max_ratio = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let bound = bound_sq.map_or(f64::INFINITY, |b| ratio_to_f64(&b).sqrt());
    Ok(RatioBoundReport { f, h, ratios, max_ratio, bound, applicable, holds })
}

/// Natural logarithms of `‖b^γ‖` for every index with coordinates up to
/// `max_coord`, backed by log-factorial prefix sums. Used where exact ratios
/// would be too slow (large graphs).
#[derive(Debug, Clone)]
pub struct LogNormTable {
    fam: SphereFamily,
    kind: NormKind,
    max_coord: u64,
    table: Vec<f64>,
}

impl LogNormTable {
    pub fn new(fam: SphereFamily, kind: NormKind, max_coord: u64) -> Self {
        let table = match (kind, fam.family) {
            (NormKind::Sup, _) => Vec::new(),
            // ln k! for k up to n + 2 max_coord
            (NormKind::L2, Family::OddA) => {
                let top = fam.n as u64 + 2 * max_coord;
                let mut t = Vec::with_capacity(top as usize + 1);
                t.push(0.0);
                for k in 1..=top {
                    t.push(t[k as usize - 1] + (k as f64).ln());
                }
                t
            }
            // Σ_{j<γ} ln((j+1)/(m+2j))
            (NormKind::L2, _) => {
                let m = if fam.family == Family::EvenB { 2 * fam.n + 1 } else { 2 * fam.n } as f64;
                let mut t = Vec::with_capacity(max_coord as usize + 1);
                t.push(0.0);
                for j in 0..max_coord {
                    let jf = j as f64;
                    t.push(t[j as usize] + ((jf + 1.0) / (m + 2.0 * jf)).ln());
                }
                t
            }
        };
        LogNormTable { fam, kind, max_coord, table }
    }

    pub fn log_norm(&self, gamma: &SpectrumIndex) -> f64 {
        let xlnx = |x: u64| if x == 0 { 0.0 } else { x as f64 * (x as f64).ln() };
        if gamma.max_coord() > self.max_coord {
            let sq = hwv_norm_sq_exact(&self.fam, gamma, self.kind).expect("index arity checked by caller");
            return 0.5 * (crate::root_systems::big_ln(sq.numer().magnitude())
                - crate::root_systems::big_ln(sq.denom().magnitude()));
        }
        match (self.kind, *gamma) {
            (NormKind::Sup, SpectrumIndex::Pair(a, b)) => 0.5 * (xlnx(a) + xlnx(b) - xlnx(a + b)),
            (NormKind::Sup, SpectrumIndex::Single(_)) => 0.0,
            (NormKind::L2, SpectrumIndex::Pair(a, b)) => {
                let n = self.fam.n as u64;
                let t = &self.table;
                0.5 * (t[n as usize] + t[a as usize] + t[b as usize] - t[(n + a + b) as usize])
            }
            (NormKind::L2, SpectrumIndex::Single(g)) => 0.5 * self.table[g as usize],
        }
    }

    /// `‖b^from‖ / ‖b^to‖`
    pub fn ratio(&self, from: &SpectrumIndex, to: &SpectrumIndex) -> f64 {
        (self.log_norm(from) - self.log_norm(to)).exp()
    }
}

fn pow_rational(x: &BigRational, e: u64) -> BigRational {
    // 0^0 = 1
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Monte Carlo estimate of `∫ |b^γ|² dσ`: returns `(mean, standard error)`.
pub fn l2_monte_carlo(fam: &SphereFamily, gamma: &SpectrumIndex, samples: usize, seed: u64) -> Result<(f64, f64)> {
    fam.check_index(gamma)?;
    if samples < 2 {
        return Err(Error::InsufficientData("need at least two samples".into()));
    }
    let ambient = match fam.family {
        Family::OddA => 2 * fam.n + 2,
        Family::EvenB => 2 * fam.n + 1,
        Family::OddD => 2 * fam.n,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0f64; ambient];
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        for xi in x.iter_mut() {
            *xi = StandardNormal.sample(&mut rng);
        }
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        let value = match *gamma {
            SpectrumIndex::Pair(g1, g2) => {
                let z1 = (x[0] * x[0] + x[1] * x[1]) / norm_sq;
                let zl = (x[ambient - 2] * x[ambient - 2] + x[ambient - 1] * x[ambient - 1]) / norm_sq;
                z1.powi(g1 as i32) * zl.powi(g2 as i32)
            }
            SpectrumIndex::Single(g) => (0.5 * (x[0] * x[0] + x[1] * x[1]) / norm_sq).powi(g as i32),
        };
        sum += value;
        sum_sq += value * value;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}
