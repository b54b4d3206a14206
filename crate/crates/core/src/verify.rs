//! Verification suites run by `specdim verify` and the acceptance tests.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::growth_graph::{default_graph, find_root, dirac_growth_check, length_function};
use crate::lie_action::{hwv_check_symbolic, oracle_agreement, ChevalleyGenerator, Convention, CoordinateRing, GeneratorKind};
use crate::norms::{monomial_sup, monomial_sup_oracle, NormKind};
use crate::root_systems::{dominant_weights, RootKind, RootSystem, Weight};
use crate::spectrum::{interlacing_branching_oracle, spherical_multiplicity, Family, SpectrumIndex, SphereFamily};
use crate::tensor_branching::{bounded_leap_check, brauer_klimyk_oracle, fundamental_tensor};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub target: String,
    pub passed: bool,
    pub notes: Vec<String>,
    pub instances: Vec<Instance>,
}

impl VerifyReport {
    fn new(target: &str, instances: Vec<Instance>, notes: Vec<String>) -> Self {
        VerifyReport {
            schema_version: 1,
            target: target.to_string(),
            passed: instances.iter().all(|i| i.passed),
            notes,
            instances,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.passed)
    }

    pub fn to_text(&self) -> String {
        let failed = self.failures().count();
        let mut out = format!(
            "verify {}: {} ({} checked, {} failed)\n",
            self.target,
            if self.passed { "pass" } else { "FAIL" },
            self.instances.len(),
            failed
        );
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        for i in self.failures() {
            out.push_str(&format!("failed {}: {}\n", i.name, i.detail));
        }
        out
    }
}

fn family_for(kind: RootKind, rank: usize) -> Result<SphereFamily> {
    let family = match kind {
        RootKind::A => Family::OddA,
        RootKind::B => Family::EvenB,
        RootKind::D => Family::OddD,
    };
    SphereFamily::new(family, rank)
}

/// Per `(kind, rank)`: spherical multiplicity against the interlacing rule,
/// explicit tensor rules against Brauer–Klimyk, and dimension conservation.
pub fn verify_branching(max_entry: i64, max_rank: usize) -> Result<VerifyReport> {
    let mut cases = Vec::new();
    for kind in [RootKind::A, RootKind::B, RootKind::D] {
        let lo = if kind == RootKind::D { 2 } else { 1 };
        cases.extend((lo..=max_rank).map(|r| (kind, r)));
    }
    let instances = cases
        .par_iter()
        .map(|&(kind, rank)| -> Result<Instance> {
            let fam = family_for(kind, rank)?;
            let sys = RootSystem::new(kind, rank)?;
            let defining = BigUint::from(kind.defining_dim(rank) as u64);
            let mu_len = match kind {
                RootKind::B => rank,
                _ => sys.ambient_dim() - 1,
            };
            let trivial = Weight::zero(mu_len);
            let weights = dominant_weights(kind, rank, max_entry)?;
            let mut problems = Vec::new();
            let mut spherical = 0;
            for lam in &weights {
                let a = spherical_multiplicity(&fam, lam)?;
                let b = interlacing_branching_oracle(fam.family.branching_pair(), lam, &trivial)?;
                spherical += usize::from(a);
                if a != b {
                    problems.push(format!("spherical {lam}: {a} vs {b}"));
                }
                let rules = fundamental_tensor(kind, rank, lam)?;
                if rules != brauer_klimyk_oracle(kind, rank, lam)? {
                    problems.push(format!("tensor {lam}"));
                }
                if rules.dimension(&sys)? != &defining * sys.weyl_dimension(lam)? {
                    problems.push(format!("dimension {lam}"));
                }
            }
            Ok(Instance {
                name: format!("{}{rank}", kind.name()),
                passed: problems.is_empty(),
                detail: if problems.is_empty() {
                    format!("{} weights, {spherical} spherical", weights.len())
                } else {
                    problems.join("; ")
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::new("branching", instances, Vec::new()))
}

fn indices_up_to(fam: &SphereFamily, max_gamma: u64) -> Vec<SpectrumIndex> {
    match fam.family {
        Family::OddA => (0..=max_gamma)
            .flat_map(|a| (0..=max_gamma).map(move |b| SpectrumIndex::Pair(a, b)))
            .collect(),
        _ => (0..=max_gamma).map(SpectrumIndex::Single).collect(),
    }
}

/// Bounded leap on every index with coordinates up to `max_gamma`.
pub fn verify_leap(fam: &SphereFamily, max_gamma: u64) -> Result<VerifyReport> {
    let mut instances = Vec::new();
    let mut max_shift = 0;
    let mut one_sided = 0;
    for g in indices_up_to(fam, max_gamma) {
        let r = bounded_leap_check(fam, &g)?;
        max_shift = max_shift.max(r.max_shift);
        one_sided += usize::from(r.one_sided_discrepancy);
        let reach: Vec<String> = r.reachable.iter().map(|b| b.to_string()).collect();
        instances.push(Instance {
            name: format!("{fam} {g}"),
            passed: r.passed,
            detail: format!("reachable [{}], max shift {}", reach.join(" "), r.max_shift),
        });
    }
    let mut notes = vec![format!("max shift {max_shift}")];
    if one_sided > 0 {
        notes.push(format!("one-sided discrepancy: {one_sided} indices reach a smaller coordinate"));
    }
    Ok(VerifyReport::new("leap", instances, notes))
}

/// Highest-weight checks: symbolic annihilation by every `E_i`, and
/// agreement of the symbolic action of `E_i`, `H_i` with finite differences.
pub fn verify_hwv(fam: &SphereFamily, gammas: &[SpectrumIndex], samples: usize, seed: u64) -> Result<VerifyReport> {
    let conv = Convention::default();
    let ring = CoordinateRing::new(fam);
    let mut instances = Vec::new();
    let mut mismatched = 0;
    for g in gammas {
        let r = hwv_check_symbolic(fam, g, &conv)?;
        let b = ring.hwv_monomial(g)?;
        let mut worst: f64 = 0.0;
        for i in 1..=fam.n {
            for kind in [GeneratorKind::E, GeneratorKind::H] {
                let gen = ChevalleyGenerator::new(kind, i);
                worst = worst.max(oracle_agreement(fam, &b, &gen, &conv, samples, seed)?);
            }
        }
        mismatched += usize::from(!r.weight_matches);
        let eig: Vec<String> = r.h_eigenvalues.iter().map(|e| e.clone().unwrap_or_else(|| "-".into())).collect();
        instances.push(Instance {
            name: format!("{fam} {g}"),
            passed: r.annihilated && worst <= 1e-6,
            detail: format!(
                "{}: annihilated {}, H eigenvalues [{}], labels [{}], oracle error {worst:.2e}",
                r.monomial,
                r.annihilated,
                eig.join(" "),
                r.expected_labels.join(" ")
            ),
        });
    }
    let mut notes = Vec::new();
    if mismatched > 0 {
        notes.push(format!("{mismatched} monomials have H eigenvalues differing from the Dynkin labels"));
    }
    Ok(VerifyReport::new("hwv", instances, notes))
}

/// Sup-norm ratio bounds on `γ ≤ max_gamma`, decided on exact squares, and
/// closed form against the numerical oracle on `a, b ≤ oracle_max`.
pub fn verify_norms(max_gamma: u64, oracle_max: u64) -> Result<VerifyReport> {
    // (sup b^f / sup b^h)^2 compared with k by cross-multiplying x^x products,
    // which avoids reducing thousand-digit fractions.
    let top = 2 * max_gamma + 2;
    let pow_self: Vec<BigUint> = (0..=top).map(|x| BigUint::from(x).pow(x as u32)).collect();
    let cmp_ratio_sq = |f: (u64, u64), h: (u64, u64), k: u32| {
        let p = |x: u64| &pow_self[x as usize];
        let num = p(f.0) * p(f.1) * p(h.0 + h.1);
        let den = p(f.0 + f.1) * p(h.0) * p(h.1);
        num.cmp(&(den * k))
    };

    let diagonal_bad: Vec<u64> = (0..=max_gamma)
        .into_par_iter()
        .filter(|&k| cmp_ratio_sq((k, k), (k + 1, k + 1), 4).is_ne())
        .collect();
    let off_bad: Vec<(u64, u64)> = (0..=max_gamma)
        .into_par_iter()
        .flat_map_iter(|g1| (0..=g1).map(move |g2| (g1, g2)))
        .filter(|&(g1, g2)| {
            cmp_ratio_sq((g1, g2), (g1 + 1, g2), 2).is_gt() || cmp_ratio_sq((g2, g1), (g2, g1 + 1), 2).is_gt()
        })
        .collect();
    let oracle_worst = (0..=oracle_max)
        .into_par_iter()
        .flat_map_iter(|a| (0..=oracle_max).map(move |b| (a, b)))
        .map(|(a, b)| (monomial_sup(a, b) - monomial_sup_oracle(a, b, 1000)).abs())
        .reduce(|| 0.0, f64::max);

    let instances = vec![
        Instance {
            name: "diagonal ratio".into(),
            passed: diagonal_bad.is_empty(),
            detail: format!("||b^(k,k)|| / ||b^(k+1,k+1)|| = 2 for k <= {max_gamma}; failures {diagonal_bad:?}"),
        },
        Instance {
            name: "off-diagonal ratio".into(),
            passed: off_bad.is_empty(),
            detail: format!("ratio <= sqrt 2 on both half-planes up to {max_gamma}; failures {off_bad:?}"),
        },
        Instance {
            name: "oracle".into(),
            passed: oracle_worst <= 1e-9,
            detail: format!("closed form vs grid + golden section, a, b <= {oracle_max}: max error {oracle_worst:.2e}"),
        },
    ];
    Ok(VerifyReport::new("norms", instances, Vec::new()))
}

/// Growth bound with `d = ℓ`, `d = Σγ` (expected to hold) and `d = (maxγ)²`
/// with `Δ` taken near the root (expected to fail).
pub fn verify_dirac(fam: &SphereFamily, cutoff: u64) -> Result<VerifyReport> {
    let g = default_graph(fam, cutoff, NormKind::Sup)?;
    let root = find_root(&g).unwrap_or(fam.root_index());
    let lengths = length_function(&g, &root)?;
    let by_length = dirac_growth_check(&g, &root, |v| lengths[v] as f64, None)?;
    let by_sum = dirac_growth_check(&g, &root, |v| v.coord_sum() as f64, None)?;
    let window = (cutoff / 5).max(1);
    let square = dirac_growth_check(&g, &root, |v| (v.max_coord() * v.max_coord()) as f64, Some(window))?;
    let instances = vec![
        Instance {
            name: "d = length".into(),
            passed: by_length.passed(),
            detail: format!("delta {}, {} violations", by_length.max_edge_increment, by_length.violations.len()),
        },
        Instance {
            name: "d = coordinate sum".into(),
            passed: by_sum.passed(),
            detail: format!("delta {}, {} violations", by_sum.max_edge_increment, by_sum.violations.len()),
        },
        Instance {
            name: "d = square (negative control)".into(),
            passed: !square.passed(),
            detail: format!(
                "delta {} over lengths <= {window}, {} violations",
                square.max_edge_increment,
                square.violations.len()
            ),
        },
    ];
    Ok(VerifyReport::new("dirac", instances, vec![format!("{fam}, cutoff {cutoff}")]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(verify_branching(2, 2).unwrap().passed);
        assert!(verify_leap(&SphereFamily::odd_a(2).unwrap(), 5).unwrap().passed);
        let fam = SphereFamily::odd_a(1).unwrap();
        assert!(verify_hwv(&fam, &[SpectrumIndex::Pair(2, 1)], 3, 42).unwrap().passed);
        assert!(verify_norms(20, 5).unwrap().passed);
        let r = verify_dirac(&SphereFamily::even_b(1).unwrap(), 50).unwrap();
        assert!(r.passed, "{}", r.to_text());
    }

    #[test]
    fn leap_notes_one_sided_discrepancy() {
        let r = verify_leap(&SphereFamily::odd_a(2).unwrap(), 3).unwrap();
        assert!(r.notes.iter().any(|n| n.contains("one-sided")));
        assert!(r.to_text().starts_with("verify leap: pass"));
    }
}
