//! Spectral side of the length operator `L`: the eigenvalue `k` has
//! multiplicity `S_k = Σ_{ℓ(γ)=k} N_γ`. For the three families `S_k` is a
//! polynomial in `k` for `k ≥ 2`, and `Σ S_k k^{-p}` converges exactly when
//! `p > deg + 1`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth_graph::{default_graph, find_root, length_function};
use crate::norms::NormKind;
use crate::polynomial::Polynomial;
use crate::root_systems::big_ln;
use crate::spectrum::{isotypic_dimension, Family, SpectrumIndex, SphereFamily};
use crate::tensor_branching::bounded_leap_check;

/// Number of shells past the interpolation nodes used for validation.
pub const HELD_OUT_SHELLS: u64 = 5;

/// Indices with `ℓ(γ) = k` under the canonical length, for `k ≥ 1`
/// (the root is not included).
pub fn shell_indices(fam: &SphereFamily, k: u64) -> Vec<SpectrumIndex> {
    match fam.family {
        Family::OddA => (0..=k)
            .map(|b| SpectrumIndex::Pair(k, b))
            .chain((0..k).map(|a| SpectrumIndex::Pair(a, k)))
            .collect(),
        _ => vec![SpectrumIndex::Single(k)],
    }
}

/// `Σ_{max(γ)=k} N_γ`, without the root.
pub fn generic_shell(fam: &SphereFamily, k: u64) -> Result<BigUint> {
    let mut total = BigUint::default();
    for g in shell_indices(fam, k) {
        total += isotypic_dimension(fam, &g)?;
    }
    Ok(total)
}

/// Multiplicity of the eigenvalue `k` of `L`; `k = 1` includes the root.
pub fn shell_multiplicity(fam: &SphereFamily, k: u64) -> Result<BigUint> {
    if k < 1 {
        return Err(Error::InvalidArgument("shells start at k = 1".into()));
    }
    let mut s = generic_shell(fam, k)?;
    if k == 1 {
        s += isotypic_dimension(fam, &fam.root_index())?;
    }
    Ok(s)
}

/// `S_1, ..., S_cutoff` (index 0 holds `S_1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellSpectrum {
    pub fam: SphereFamily,
    pub shells: Vec<BigUint>,
}

impl ShellSpectrum {
    pub fn compute(fam: &SphereFamily, cutoff: u64) -> Result<Self> {
        let shells = (1..=cutoff)
            .into_par_iter()
            .map(|k| shell_multiplicity(fam, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(ShellSpectrum { fam: *fam, shells })
    }

    pub fn get(&self, k: u64) -> Option<&BigUint> {
        k.checked_sub(1).and_then(|i| self.shells.get(i as usize))
    }
}

/// Upper bound on the degree of the generic shell polynomial.
pub fn degree_bound(fam: &SphereFamily) -> usize {
    let n = fam.n;
    let base = match fam.family {
        Family::OddA => 2 * n,
        Family::EvenB => 2 * n - 1,
        Family::OddD => 2 * n - 2,
    };
    base + 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellPolynomial {
    pub fam: SphereFamily,
    /// `P` with `S_k = P(k)` for `k ≥ 2`.
    pub polynomial: Polynomial,
    /// `S_1 − P(1)`, the extra multiplicity the root brings to shell 1.
    pub root_correction: BigInt,
    pub nodes: Vec<u64>,
    pub validated_shells: Vec<u64>,
}

impl ShellPolynomial {
    pub fn degree(&self) -> usize {
        self.polynomial.degree().unwrap_or(0)
    }

    pub fn eval(&self, k: u64) -> BigRational {
        let p = self.polynomial.eval_int(k as i64);
        if k == 1 {
            p + BigRational::from_integer(self.root_correction.clone())
        } else {
            p
        }
    }
}

fn to_rational(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact interpolation of the generic shells on `k = 2..=D+3` and validation
/// on the next [`HELD_OUT_SHELLS`] shells.
pub fn shell_polynomial(fam: &SphereFamily) -> Result<ShellPolynomial> {
    let d = degree_bound(fam) as u64;
    let nodes: Vec<u64> = (2..=d + 3).collect();
    let held: Vec<u64> = (d + 4..d + 4 + HELD_OUT_SHELLS).collect();
    let values = nodes
        .par_iter()
        .chain(held.par_iter())
        .map(|&k| generic_shell(fam, k).map(to_rational))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(BigRational, BigRational)> = nodes
        .iter()
        .zip(&values)
        .map(|(&k, v)| (BigRational::from_integer(k.into()), v.clone()))
        .collect();
    let polynomial = Polynomial::interpolate(&points)?;
    for (&k, v) in held.iter().zip(&values[nodes.len()..]) {
        if &polynomial.eval_int(k as i64) != v {
            return Err(Error::NotPolynomial(format!("{fam}: shell {k} off the interpolant")));
        }
    }
    if polynomial.degree().is_none_or(|deg| deg > degree_bound(fam)) {
        return Err(Error::NotPolynomial(format!("{fam}: degree outside the expected range")));
    }
    let s1 = to_rational(shell_multiplicity(fam, 1)?);
    let diff = s1 - polynomial.eval_int(1);
    if !diff.is_integer() {
        return Err(Error::NonIntegerResult(format!("{fam}: root correction {diff}")));
    }
    Ok(ShellPolynomial { fam: *fam, polynomial, root_correction: diff.to_integer(), nodes, validated_shells: held })
}

/// `deg S + 1`: the infimum of `p` with `Σ S_k k^{-p} < ∞`.
pub fn exact_summability(fam: &SphereFamily) -> Result<u32> {
    Ok(shell_polynomial(fam)?.degree() as u32 + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaEstimate {
    pub p: f64,
    pub cutoff: u64,
    pub partial_sum: f64,
    /// Integral-test bound on `Σ_{k>cutoff} S_k k^{-p}`; infinite when divergent.
    pub tail_upper_bound: f64,
    pub converged: bool,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `Σ_{k ≤ cutoff} S_k k^{-p}` with a certified bound on the remainder.
pub fn zeta_partial_sum(fam: &SphereFamily, p: f64, cutoff: u64) -> Result<ZetaEstimate> {
    let poly = shell_polynomial(fam)?;
    zeta_from_polynomial(&poly, p, cutoff)
}

/// As [`zeta_partial_sum`] with a precomputed shell polynomial.
pub fn zeta_from_polynomial(poly: &ShellPolynomial, p: f64, cutoff: u64) -> Result<ZetaEstimate> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::InvalidArgument(format!("p must be positive, got {p}")));
    }
    if cutoff < 2 {
        return Err(Error::InvalidArgument("cutoff must be at least 2".into()));
    }
    let coeffs = poly.polynomial.to_f64_coeffs();
    let s1 = poly.eval(1).to_f64().unwrap_or(f64::NAN);
    let mut acc = CompensatedSum::default();
    acc.add(s1);
    for k in 2..=cutoff {
        let x = k as f64;
        let value = coeffs.iter().rev().fold(0.0, |a, c| a * x + c);
        acc.add(value * x.powf(-p));
    }
    // Σ_{k>K} k^{j-p} ≤ ∫_K^∞ x^{j-p} dx = K^{j+1-p} / (p-j-1) for p > j+1
    let big_k = cutoff as f64;
    let mut tail = 0.0;
    for (j, c) in poly.polynomial.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = j as f64 + 1.0 - p;
        if e >= 0.0 {
            tail = f64::INFINITY;
            break;
        }
        tail += c.abs().to_f64().unwrap_or(f64::INFINITY) * big_k.powf(e) / -e;
    }
    Ok(ZetaEstimate { p, cutoff, partial_sum: acc.value(), tail_upper_bound: tail, converged: tail.is_finite() })
}

/// Least-squares slope of `ln S_k` against `ln k` over `window`, plus 1.
pub fn fit_summability(fam: &SphereFamily, cutoff: u64, window: (u64, u64)) -> Result<f64> {
    if cutoff < 50 {
        return Err(Error::InsufficientData(format!("cutoff {cutoff} below 50")));
    }
    let (lo, hi) = window;
    if lo * 2 < cutoff || hi > cutoff || lo >= hi {
        return Err(Error::InvalidArgument(format!("window [{lo},{hi}] not inside [cutoff/2, cutoff]")));
    }
    let points = (lo..=hi)
        .into_par_iter()
        .map(|k| shell_multiplicity(fam, k).map(|s| ((k as f64).ln(), big_ln(&s))))
        .collect::<Result<Vec<_>>>()?;
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateOptions {
    /// Cutoff of the growth graph whose root and lengths are checked.
    pub graph_cutoff: u64,
    pub norm: NormKind,
    /// Bounded leap is checked on indices with coordinates up to this.
    pub leap_max_gamma: u64,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions { graph_cutoff: 8, norm: NormKind::Sup, leap_max_gamma: 6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionCertificate {
    pub schema_version: u32,
    pub family: Family,
    pub n: usize,
    pub sphere_dim: usize,
    pub dimension: u32,
    /// Ascending coefficients of the generic shell polynomial.
    pub shell_polynomial: Vec<String>,
    pub degree: usize,
    pub root_correction: String,
    pub root: String,
    pub c: f64,
    pub norm: NormKind,
    pub graph_cutoff: u64,
    pub max_leap: u64,
    pub validated_shells: Vec<u64>,
}

impl DimensionCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

fn incomplete(fam: &SphereFamily, what: String) -> Error {
    Error::CertificateIncomplete(format!("{fam}: {what}"))
}

/// Exact summability together with the facts it rests on: the growth graph
/// has the expected root and length function, tensoring with the defining
/// representation moves indices by at most one, and the shell polynomial
/// survives held-out validation.
pub fn spectral_dimension(fam: &SphereFamily, options: &CertificateOptions) -> Result<DimensionCertificate> {
    let graph = default_graph(fam, options.graph_cutoff, options.norm)?;
    let root = find_root(&graph).ok_or_else(|| incomplete(fam, "growth graph has no root".into()))?;
    if root != fam.root_index() {
        return Err(incomplete(fam, format!("unexpected root {root}")));
    }
    let lengths = length_function(&graph, &root)?;
    if let Some((v, l)) = lengths.iter().find(|(v, l)| **l != fam.canonical_length(v)) {
        return Err(incomplete(fam, format!("length of {v} is {l}")));
    }

    let leap_indices: Vec<SpectrumIndex> = match fam.family {
        Family::OddA => (0..=options.leap_max_gamma)
            .flat_map(|a| (0..=options.leap_max_gamma).map(move |b| SpectrumIndex::Pair(a, b)))
            .collect(),
        _ => (0..=options.leap_max_gamma).map(SpectrumIndex::Single).collect(),
    };
    let mut max_leap = 0;
    for g in &leap_indices {
        let report = bounded_leap_check(fam, g)?;
        if !report.passed {
            return Err(incomplete(fam, format!("leap from {g} is {}", report.max_shift)));
        }
        max_leap = max_leap.max(report.max_shift);
    }

    let poly = shell_polynomial(fam).map_err(|e| incomplete(fam, e.to_string()))?;
    let degree = poly.degree();
    Ok(DimensionCertificate {
        schema_version: 1,
        family: fam.family,
        n: fam.n,
        sphere_dim: fam.sphere_dim(),
        dimension: degree as u32 + 1,
        shell_polynomial: poly.polynomial.coeffs().iter().map(|c| c.to_string()).collect(),
        degree,
        root_correction: poly.root_correction.to_string(),
        root: root.to_string(),
        c: graph.c,
        norm: options.norm,
        graph_cutoff: options.graph_cutoff,
        max_leap,
        validated_shells: poly.validated_shells,
    })
}
