//! Chevalley generators acting on the coordinate algebra of the sphere.
//!
//! A point of the sphere is a row `r` of a group element: the last row for
//! `SU(n+1)`, the first row for `SO(m)`. Coordinate variables are linear
//! functions `r ↦ r·c`. Lie algebra elements act by derivations through
//! right translation, `X(v_c) = v_{Xc}`, so on a variable basis the action is
//! just the matrix of `X` in that basis.
//!
//! Odd-A variables are `z_j = r_j` and their conjugates `w_j`. The action on
//! `w_j` depends on a sign/transpose convention, checked numerically below.
//! The orthogonal families use the Witt basis `f_j = e_{2j-1} + i e_{2j}`,
//! `f̄_j`, and `f_0 = e_{2n+1}` for B, so that Cartan elements act diagonally.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{index_to_weight, Family, SpectrumIndex, SphereFamily};

/// Step of the central differences in the numerical oracle.
pub const FD_STEP: f64 = 1e-5;

/// How `X` acts on the conjugate variables `w_j`:
/// `X(w_j) = sign · Σ_k w_k X_{jk}` (transpose) or `sign · Σ_k w_k X_{kj}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Convention {
    pub conjugate_sign: Option<i8>,
    pub conjugate_transpose: Option<bool>,
}

impl Default for Convention {
    /// The choice that agrees with differentiating `conj(r_j)`.
    fn default() -> Self {
        Convention { conjugate_sign: Some(-1), conjugate_transpose: Some(true) }
    }
}

impl Convention {
    pub fn unset() -> Self {
        Convention { conjugate_sign: None, conjugate_transpose: None }
    }

    fn resolve(&self) -> Result<(i64, bool)> {
        let sign = self.conjugate_sign.ok_or(Error::ConventionUnset("conjugate_sign"))?;
        let transpose = self.conjugate_transpose.ok_or(Error::ConventionUnset("conjugate_transpose"))?;
        Ok((i64::from(sign), transpose))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GeneratorKind {
    E,
    F,
    H,
}

/// `E_i`, `F_i` or `H_i` with `1 ≤ i ≤ rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ChevalleyGenerator {
    pub kind: GeneratorKind,
    pub index: usize,
}

impl ChevalleyGenerator {
    pub fn new(kind: GeneratorKind, index: usize) -> Self {
        ChevalleyGenerator { kind, index }
    }

    pub fn all(rank: usize) -> Vec<ChevalleyGenerator> {
        [GeneratorKind::E, GeneratorKind::F, GeneratorKind::H]
            .into_iter()
            .flat_map(|k| (1..=rank).map(move |i| ChevalleyGenerator::new(k, i)))
            .collect()
    }
}

impl fmt::Display for ChevalleyGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}_{}", self.kind, self.index)
    }
}

/// Sparse polynomial in the coordinate variables with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinatePolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl CoordinatePolynomial {
    pub fn zero(nvars: usize) -> Self {
        CoordinatePolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(nvars, &vec![0; nvars], BigRational::one())
    }

    pub fn monomial(nvars: usize, exponents: &[u32], coeff: BigRational) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        p.add_term(exponents.to_vec(), coeff);
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(nvars, &e, BigRational::one())
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// `Some(λ)` when `other = λ · self`, for nonzero `self`.
    pub fn eigenvalue_of(&self, other: &Self) -> Option<BigRational> {
        let (e, c) = self.terms.iter().next()?;
        let lambda = other.terms.get(e).cloned().unwrap_or_else(BigRational::zero) / c;
        (self.scale(&lambda) == *other).then_some(lambda)
    }

    pub fn eval(&self, values: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (v, &k) in values.iter().zip(e) {
                if k > 0 {
                    term *= v.powu(k);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let factors: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
                    .collect();
                match (factors.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => factors.join(" "),
                    (false, false) => format!("{c} {}", factors.join(" ")),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// The coordinate variables of a family and how they sit in `C^m`.
#[derive(Debug, Clone)]
pub struct CoordinateRing {
    pub fam: SphereFamily,
    /// Dimension of the defining representation.
    pub m: usize,
    pub names: Vec<String>,
    /// Standard coordinates of the vector `c` of each variable `r ↦ r·c`.
    vectors: Vec<Vec<Complex64>>,
    conjugate: Vec<bool>,
}

impl CoordinateRing {
    pub fn new(fam: &SphereFamily) -> Self {
        let n = fam.n;
        let unit = |m: usize, i: usize, z: Complex64| {
            let mut v = vec![Complex64::new(0.0, 0.0); m];
            v[i] = z;
            v
        };
        let one = Complex64::new(1.0, 0.0);
        let i_unit = Complex64::new(0.0, 1.0);
        match fam.family {
            Family::OddA => {
                let m = n + 1;
                let mut names: Vec<String> = (1..=m).map(|j| format!("z{j}")).collect();
                names.extend((1..=m).map(|j| format!("w{j}")));
                let mut vectors: Vec<Vec<Complex64>> = (0..m).map(|j| unit(m, j, one)).collect();
                vectors.extend((0..m).map(|j| unit(m, j, one)));
                let conjugate = (0..2 * m).map(|v| v >= m).collect();
                CoordinateRing { fam: *fam, m, names, vectors, conjugate }
            }
            Family::EvenB | Family::OddD => {
                let m = if fam.family == Family::EvenB { 2 * n + 1 } else { 2 * n };
                let witt = |j: usize, s: f64| {
                    let mut v = unit(m, 2 * j, one);
                    v[2 * j + 1] = i_unit * s;
                    v
                };
                let mut names: Vec<String> = (1..=n).map(|j| format!("u{j}")).collect();
                names.extend((1..=n).map(|j| format!("ubar{j}")));
                let mut vectors: Vec<Vec<Complex64>> = (0..n).map(|j| witt(j, 1.0)).collect();
                vectors.extend((0..n).map(|j| witt(j, -1.0)));
                if fam.family == Family::EvenB {
                    names.push("u0".into());
                    vectors.push(unit(m, 2 * n, one));
                }
                let conjugate = vec![false; vectors.len()];
                CoordinateRing { fam: *fam, m, names, vectors, conjugate }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// The highest-weight coordinate `y`.
    pub fn y(&self) -> usize {
        0
    }

    /// The second distinguished coordinate `z = conj(z_{n+1})` of odd-A.
    pub fn z(&self) -> Option<usize> {
        (self.fam.family == Family::OddA).then(|| 2 * self.m - 1)
    }

    pub fn var(&self, index: usize) -> CoordinatePolynomial {
        CoordinatePolynomial::var(self.nvars(), index)
    }

    /// `y^γ1 z^γ2` (odd-A), `y^{2γ}` (even-B), `y^γ` (odd-D).
    pub fn hwv_monomial(&self, gamma: &SpectrumIndex) -> Result<CoordinatePolynomial> {
        self.fam.check_index(gamma)?;
        let mut e = vec![0u32; self.nvars()];
        match (*gamma, self.fam.family) {
            (SpectrumIndex::Pair(a, b), _) => {
                e[self.y()] = a as u32;
                e[self.z().expect("odd-A has z")] = b as u32;
            }
            (SpectrumIndex::Single(g), Family::EvenB) => e[self.y()] = 2 * g as u32,
            (SpectrumIndex::Single(g), _) => e[self.y()] = g as u32,
        }
        Ok(CoordinatePolynomial::monomial(self.nvars(), &e, BigRational::one()))
    }

    fn check_generator(&self, gen: &ChevalleyGenerator) -> Result<()> {
        if gen.index == 0 || gen.index > self.fam.n {
            return Err(Error::InvalidArgument(format!("{gen} outside rank {}", self.fam.n)));
        }
        Ok(())
    }

    /// Matrix of the generator on the non-conjugate variable basis:
    /// `X(v) = Σ_u M[u][v] u`.
    pub fn generator_matrix(&self, gen: &ChevalleyGenerator) -> Result<Vec<Vec<BigRational>>> {
        self.check_generator(gen)?;
        let i = gen.index;
        let n = self.fam.n;
        let dim = self.vectors.len() - if self.fam.family == Family::OddA { self.m } else { 0 };
        let mut mat = vec![vec![BigRational::zero(); dim]; dim];
        let int = |x: i64| BigRational::from_integer(BigInt::from(x));
        match self.fam.family {
            Family::OddA => {
                // e_{i,i+1}, e_{i+1,i}, e_ii − e_{i+1,i+1}
                let (a, b) = (i - 1, i);
                match gen.kind {
                    GeneratorKind::E => mat[a][b] = int(1),
                    GeneratorKind::F => mat[b][a] = int(1),
                    GeneratorKind::H => {
                        mat[a][a] = int(1);
                        mat[b][b] = int(-1);
                    }
                }
            }
            Family::EvenB | Family::OddD => {
                let u = |j: usize| j - 1;
                let ubar = |j: usize| n + j - 1;
                let u0 = 2 * n;
                let is_b = self.fam.family == Family::EvenB;
                // Witt Gram form: B(u_j, ubar_j) = 2, B(u0, u0) = 1
                let gram = |x: usize, y: usize| -> i64 {
                    if x == u0 && y == u0 {
                        1
                    } else if (x < n && y == x + n) || (y < n && x == y + n) {
                        2
                    } else {
                        0
                    }
                };
                // M_{a,b}(x) = a B(b,x) − b B(a,x)
                let rotation = |mat: &mut Vec<Vec<BigRational>>, a: usize, b: usize| {
                    for x in 0..dim {
                        mat[a][x] += int(gram(b, x));
                        mat[b][x] -= int(gram(a, x));
                    }
                };
                let cartan = |mat: &mut Vec<Vec<BigRational>>, j: usize, s: i64| {
                    mat[u(j)][u(j)] += int(s);
                    mat[ubar(j)][ubar(j)] -= int(s);
                };
                match (gen.kind, i < n) {
                    (GeneratorKind::E, true) => rotation(&mut mat, u(i), ubar(i + 1)),
                    (GeneratorKind::F, true) => rotation(&mut mat, u(i + 1), ubar(i)),
                    (GeneratorKind::H, true) => {
                        cartan(&mut mat, i, 1);
                        cartan(&mut mat, i + 1, -1);
                    }
                    (GeneratorKind::E, false) if is_b => rotation(&mut mat, u(n), u0),
                    (GeneratorKind::F, false) if is_b => rotation(&mut mat, ubar(n), u0),
                    (GeneratorKind::H, false) if is_b => cartan(&mut mat, n, 2),
                    (GeneratorKind::E, false) => rotation(&mut mat, u(n - 1), u(n)),
                    (GeneratorKind::F, false) => rotation(&mut mat, ubar(n - 1), ubar(n)),
                    (GeneratorKind::H, false) => {
                        cartan(&mut mat, n - 1, 1);
                        cartan(&mut mat, n, 1);
                    }
                }
            }
        }
        Ok(mat)
    }

    /// Images of all variables as linear forms.
    fn variable_images(
        &self,
        gen: &ChevalleyGenerator,
        convention: &Convention,
    ) -> Result<Vec<Vec<(usize, BigRational)>>> {
        let mat = self.generator_matrix(gen)?;
        let dim = mat.len();
        let mut images: Vec<Vec<(usize, BigRational)>> = (0..dim)
            .map(|v| (0..dim).filter(|&u| !mat[u][v].is_zero()).map(|u| (u, mat[u][v].clone())).collect())
            .collect();
        if self.fam.family == Family::OddA {
            let (sign, transpose) = convention.resolve()?;
            let s = BigRational::from_integer(BigInt::from(sign));
            for j in 0..self.m {
                let image = (0..self.m)
                    .filter_map(|k| {
                        let x = if transpose { &mat[j][k] } else { &mat[k][j] };
                        (!x.is_zero()).then(|| (self.m + k, x * &s))
                    })
                    .collect();
                images.push(image);
            }
        }
        Ok(images)
    }

    /// The generator acting as a derivation.
    pub fn act(
        &self,
        gen: &ChevalleyGenerator,
        p: &CoordinatePolynomial,
        convention: &Convention,
    ) -> Result<CoordinatePolynomial> {
        if p.nvars() != self.nvars() {
            return Err(Error::RankMismatch { expected: self.nvars(), got: p.nvars() });
        }
        let images = self.variable_images(gen, convention)?;
        let mut out = CoordinatePolynomial::zero(self.nvars());
        for (e, c) in p.terms() {
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                for (u, coeff) in &images[v] {
                    let mut e2 = e.clone();
                    e2[v] -= 1;
                    e2[*u] += 1;
                    out.add_term(e2, c * coeff * BigRational::from_integer(BigInt::from(k)));
                }
            }
        }
        Ok(out)
    }

    /// Generator matrix in standard coordinates, acting on column vectors.
    pub fn standard_matrix(&self, gen: &ChevalleyGenerator) -> Result<DMatrix<Complex64>> {
        let mat = self.generator_matrix(gen)?;
        let dim = mat.len();
        let witt = DMatrix::from_fn(dim, dim, |u, v| Complex64::new(mat[u][v].to_f64().unwrap_or(f64::NAN), 0.0));
        let basis = DMatrix::from_fn(self.m, dim, |k, v| self.vectors[v][k]);
        let inverse = basis.clone().try_inverse().expect("variable vectors form a basis");
        Ok(&basis * witt * inverse)
    }

    /// Values of the variables at the sphere point `row`.
    pub fn variable_values(&self, row: &[Complex64]) -> Vec<Complex64> {
        self.vectors
            .iter()
            .zip(&self.conjugate)
            .map(|(c, &conj)| {
                let v: Complex64 = row.iter().zip(c).map(|(r, x)| r * x).sum();
                if conj { v.conj() } else { v }
            })
            .collect()
    }

    fn point(&self, g: &DMatrix<Complex64>) -> Vec<Complex64> {
        let r = if self.fam.family == Family::OddA { self.m - 1 } else { 0 };
        g.row(r).iter().cloned().collect()
    }

    /// Haar-random element of `SU(n+1)` or `SO(m)`.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> DMatrix<Complex64> {
        let m = self.m;
        if self.fam.family == Family::OddA {
            let z = DMatrix::from_fn(m, m, |_, _| {
                Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
            });
            let qr = z.qr();
            let (mut q, r) = (qr.q(), qr.r());
            for j in 0..m {
                let d = r[(j, j)];
                let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
                for i in 0..m {
                    q[(i, j)] *= phase;
                }
            }
            let det = q.determinant();
            let root = det.powf(1.0 / m as f64);
            q / root
        } else {
            let x = DMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
            let qr = x.qr();
            let (mut q, r) = (qr.q(), qr.r());
            for j in 0..m {
                if r[(j, j)] < 0.0 {
                    q.column_mut(j).neg_mut();
                }
            }
            if q.determinant() < 0.0 {
                q.column_mut(0).neg_mut();
            }
            q.map(|v| Complex64::new(v, 0.0))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HwvReport {
    pub family: Family,
    pub n: usize,
    pub gamma: SpectrumIndex,
    pub monomial: String,
    /// `E_i(b) = 0` for `i = 1..rank`.
    pub e_annihilation: Vec<bool>,
    /// `H_i(b) = λ_i b`, rendered; `None` if `b` is not an eigenvector.
    pub h_eigenvalues: Vec<Option<String>>,
    /// Dynkin labels of the highest weight attached to `γ`.
    pub expected_labels: Vec<String>,
    pub weight_matches: bool,
    pub annihilated: bool,
}

/// Applies the raising and Cartan generators to `b^γ`.
pub fn hwv_check_symbolic(fam: &SphereFamily, gamma: &SpectrumIndex, convention: &Convention) -> Result<HwvReport> {
    let ring = CoordinateRing::new(fam);
    let b = ring.hwv_monomial(gamma)?;
    let mut e_annihilation = Vec::new();
    let mut eigen = Vec::new();
    for i in 1..=fam.n {
        e_annihilation.push(ring.act(&ChevalleyGenerator::new(GeneratorKind::E, i), &b, convention)?.is_zero());
        let hb = ring.act(&ChevalleyGenerator::new(GeneratorKind::H, i), &b, convention)?;
        eigen.push(b.eigenvalue_of(&hb));
    }
    let labels = fam.root_system().dynkin_labels(&index_to_weight(fam, gamma));
    let weight_matches = eigen
        .iter()
        .zip(&labels)
        .all(|(e, l)| e.as_ref().is_some_and(|e| *e == BigRational::new((*l.numer()).into(), (*l.denom()).into())));
    Ok(HwvReport {
        family: fam.family,
        n: fam.n,
        gamma: *gamma,
        monomial: b.render(&ring.names),
        annihilated: e_annihilation.iter().all(|&x| x),
        e_annihilation,
        h_eigenvalues: eigen.into_iter().map(|e| e.map(|e| e.to_string())).collect(),
        expected_labels: labels.iter().map(|l| l.to_string()).collect(),
        weight_matches,
    })
}

/// One sample of the numerical oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    /// Central-difference derivative of `p` along the generator.
    pub numeric: Complex64,
    /// `act(gen, p)` evaluated at the same point.
    pub symbolic: Complex64,
}

/// Evaluates `p` and `act(gen, p)` on `samples` random group elements.
///
/// The generator `X` is split as `X = A + iB` with `A`, `B` in the compact
/// real form; the derivative along `X` is `D_A + i D_B`, each a central
/// difference along `g ↦ g exp(±hA)`.
pub fn oracle_samples(
    fam: &SphereFamily,
    p: &CoordinatePolynomial,
    gen: &ChevalleyGenerator,
    convention: &Convention,
    samples: usize,
    seed: u64,
) -> Result<Vec<OracleSample>> {
    if samples < 1 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let ring = CoordinateRing::new(fam);
    let x = ring.standard_matrix(gen)?;
    let (a, b) = if fam.family == Family::OddA {
        let adj = x.adjoint();
        ((&x - &adj) * Complex64::new(0.5, 0.0), (&x + &adj) * Complex64::new(0.0, -0.5))
    } else {
        (x.map(|v| Complex64::new(v.re, 0.0)), x.map(|v| Complex64::new(v.im, 0.0)))
    };
    let h = Complex64::new(FD_STEP, 0.0);
    let steps = [(&a * h).exp(), (&a * -h).exp(), (&b * h).exp(), (&b * -h).exp()];
    let image = ring.act(gen, p, convention)?;

    let mut out = Vec::with_capacity(samples);
    for s in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s as u64);
        let g = ring.random_element(&mut rng);
        let value_at = |m: &DMatrix<Complex64>| p.eval(&ring.variable_values(&ring.point(&(&g * m))));
        let d_a = (value_at(&steps[0]) - value_at(&steps[1])) / (2.0 * FD_STEP);
        let d_b = (value_at(&steps[2]) - value_at(&steps[3])) / (2.0 * FD_STEP);
        let numeric = d_a + Complex64::new(0.0, 1.0) * d_b;
        let symbolic = image.eval(&ring.variable_values(&ring.point(&g)));
        out.push(OracleSample { numeric, symbolic });
    }
    Ok(out)
}

/// `max |X p|` over random group elements, by finite differences only.
pub fn directional_derivative_oracle(
    fam: &SphereFamily,
    p: &CoordinatePolynomial,
    gen: &ChevalleyGenerator,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let s = oracle_samples(fam, p, gen, &Convention::default(), samples, seed)?;
    Ok(s.iter().map(|x| x.numeric.norm()).fold(0.0, f64::max))
}

/// `max |numeric − symbolic|` over random group elements.
pub fn oracle_agreement(
    fam: &SphereFamily,
    p: &CoordinatePolynomial,
    gen: &ChevalleyGenerator,
    convention: &Convention,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let s = oracle_samples(fam, p, gen, convention, samples, seed)?;
    Ok(s.iter().map(|x| (x.numeric - x.symbolic).norm()).fold(0.0, f64::max))
}
