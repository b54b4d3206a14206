//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use specdim::growth_graph::{default_graph, find_root, length_function};
use specdim::growth_graph::{build_graph, GeneratorSet};
use specdim::length_operator::{exact_summability, fit_summability, zeta_partial_sum};
use specdim::lie_action::{
    hwv_check_symbolic, oracle_agreement, ChevalleyGenerator, Convention, CoordinatePolynomial, CoordinateRing,
    GeneratorKind,
};
use specdim::norms::NormKind;
use specdim::root_systems::{RootKind, RootSystem, Weight};
use specdim::spectrum::{isotypic_dimension, Family, SpectrumIndex, SphereFamily};
use specdim::tensor_branching::{brauer_klimyk_oracle, fundamental_tensor};
use specdim::verify::{verify_branching, verify_dirac, verify_leap, verify_norms};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg.into()) }
}

fn families(max_n: usize) -> Vec<SphereFamily> {
    Family::ALL
        .iter()
        .flat_map(|&f| (f.min_n()..=max_n).map(move |n| SphereFamily::new(f, n).unwrap()))
        .collect()
}

fn within(elapsed: Duration, limit: u64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit as f64, format!("took {elapsed:.1?}, limit {limit} s"))
}

fn c1_exact_dimension() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for fam in families(25) {
        let d = exact_summability(&fam).map_err(|e| format!("{fam}: {e}"))?;
        let expected = match fam.family {
            Family::OddA => 2 * fam.n + 1,
            Family::EvenB => 2 * fam.n,
            Family::OddD => 2 * fam.n - 1,
        };
        ensure(d as usize == expected, format!("{fam}: got {d}, expected {expected}"))?;
        count += 1;
    }
    within(start.elapsed(), 60)?;
    Ok(format!("{count} cases exact in {:.1?}", start.elapsed()))
}

fn c2_fit() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for fam in families(3) {
        let est = fit_summability(&fam, 500, (250, 500)).map_err(|e| e.to_string())?;
        let err = (est - fam.sphere_dim() as f64).abs();
        ensure(err <= 0.1, format!("{fam}: fit {est:.4}"))?;
        worst = worst.max(err);
    }
    within(start.elapsed(), 30)?;
    Ok(format!("max deviation {worst:.4} in {:.1?}", start.elapsed()))
}

fn c3_zeta() -> Outcome {
    for fam in families(3) {
        let dim = fam.sphere_dim() as f64;
        let above = zeta_partial_sum(&fam, dim + 0.5, 100_000).map_err(|e| e.to_string())?;
        ensure(above.converged, format!("{fam}: not converged at p = {}", dim + 0.5))?;
        let at = zeta_partial_sum(&fam, dim, 100_000).map_err(|e| e.to_string())?;
        ensure(!at.converged, format!("{fam}: converged at p = {dim}"))?;
    }
    let fam = SphereFamily::even_b(1).unwrap();
    let value = zeta_partial_sum(&fam, 3.0, 1_000_000).map_err(|e| e.to_string())?.partial_sum;
    let closed = 1.0 + std::f64::consts::PI.powi(2) / 3.0 + 1.202_056_903_159_594_2;
    // Direct summation over the spectrum: multiplicity times length^-3.
    let k_max = 20_000u64;
    let mut direct = 0.0;
    for g in (0..=k_max).rev() {
        let gamma = SpectrumIndex::Single(g);
        let m = isotypic_dimension(&fam, &gamma).map_err(|e| e.to_string())?.to_f64().unwrap();
        direct += m / (fam.canonical_length(&gamma) as f64).powi(3);
    }
    let tail = 2.0 / k_max as f64;
    ensure((value - closed).abs() <= 1e-3, format!("value {value:.6} vs closed form {closed:.6}"))?;
    ensure(
        (value - direct).abs() <= 1e-3 + tail,
        format!("value {value:.6} vs direct sum {direct:.6}"),
    )?;
    Ok(format!("boundary verdicts ok; even-b n=1 p=3: {value:.6} (closed {closed:.6}, direct {direct:.6})"))
}

fn c4_norms() -> Outcome {
    let r = verify_norms(200, 200).map_err(|e| e.to_string())?;
    ensure(r.passed, r.to_text())?;
    Ok(r.instances.iter().map(|i| i.detail.split(';').next().unwrap_or("").to_string()).collect::<Vec<_>>().join("; "))
}

fn c5_graph() -> Outcome {
    let a = SphereFamily::odd_a(1).unwrap();
    let g = default_graph(&a, 100, NormKind::Sup).map_err(|e| e.to_string())?;
    let root = find_root(&g).ok_or("odd-a: no root at default c")?;
    ensure(root == SpectrumIndex::Pair(0, 0), format!("odd-a root {root}"))?;
    let lengths = length_function(&g, &root).map_err(|e| e.to_string())?;
    ensure(lengths.len() == 101 * 101, "odd-a: unreachable vertices")?;
    for (v, l) in &lengths {
        ensure(*l == v.max_coord().max(1), format!("odd-a: length({v}) = {l}"))?;
    }
    for fam in [SphereFamily::even_b(1).unwrap(), SphereFamily::odd_d(2).unwrap()] {
        let g = default_graph(&fam, 10_000, NormKind::Sup).map_err(|e| e.to_string())?;
        let root = find_root(&g).ok_or(format!("{fam}: no root"))?;
        ensure(root == SpectrumIndex::Single(0), format!("{fam}: root {root}"))?;
        let lengths = length_function(&g, &root).map_err(|e| e.to_string())?;
        ensure(lengths.len() == 10_001, format!("{fam}: unreachable vertices"))?;
        for (v, l) in &lengths {
            ensure(*l == v.max_coord().max(1), format!("{fam}: length({v}) = {l}"))?;
        }
    }
    let g = build_graph(&a, &GeneratorSet::default_for(&a), 1.5, 10, NormKind::Sup).map_err(|e| e.to_string())?;
    ensure(find_root(&g).is_none(), "odd-a: root found at c = 1.5")?;
    Ok("roots (0,0)/0/0, lengths exact, no root at c = 1.5".into())
}

fn c6_dirac() -> Outcome {
    let mut count = 0;
    for fam in families(3) {
        let r = verify_dirac(&fam, 50).map_err(|e| e.to_string())?;
        ensure(r.passed, r.to_text())?;
        count += 1;
    }
    Ok(format!("{count} cases: length and sum bounded, square rejected"))
}

fn random_dominant(rng: &mut ChaCha8Rng, kind: RootKind, rank: usize) -> Weight {
    let sys = RootSystem::new(kind, rank).unwrap();
    loop {
        let width = kind.ambient_dim(rank);
        let half = kind == RootKind::B && rng.random_bool(0.5);
        let mut v: Vec<i64> = (0..width).map(|_| rng.random_range(0..=6)).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        if kind == RootKind::A {
            *v.last_mut().unwrap() = 0;
        }
        if kind == RootKind::D && rng.random_bool(0.5) {
            *v.last_mut().unwrap() *= -1;
        }
        let w = if half {
            Weight::from_halves(&v.iter().map(|x| 2 * x + 1).collect::<Vec<_>>())
        } else {
            Weight::from_ints(&v)
        };
        if sys.is_dominant(&w) {
            return w;
        }
    }
}

fn c7_branching() -> Outcome {
    let r = verify_branching(3, 4).map_err(|e| e.to_string())?;
    ensure(r.passed, r.to_text())?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..200 {
        let kind = [RootKind::A, RootKind::B, RootKind::D][i % 3];
        let rank = rng.random_range(if kind == RootKind::D { 2..=4 } else { 1..=4 });
        let lambda = random_dominant(&mut rng, kind, rank);
        let sys = RootSystem::new(kind, rank).unwrap();
        let tensor = fundamental_tensor(kind, rank, &lambda).map_err(|e| e.to_string())?;
        let bk = brauer_klimyk_oracle(kind, rank, &lambda).map_err(|e| e.to_string())?;
        ensure(tensor == bk, format!("{} rank {rank} {lambda:?}: rule differs from oracle", kind.name()))?;
        let lhs = sys.weyl_dimension(&lambda).map_err(|e| e.to_string())? * BigUint::from(kind.defining_dim(rank));
        let rhs = tensor.dimension(&sys).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, format!("{} rank {rank} {lambda:?}: {lhs} != {rhs}", kind.name()))?;
    }
    Ok(format!("{} exhaustive checks, 200 random conservation checks", r.instances.len()))
}

fn c8_leap() -> Outcome {
    let mut checked = 0;
    let mut flagged = 0;
    for fam in families(4) {
        let r = verify_leap(&fam, 50).map_err(|e| e.to_string())?;
        ensure(r.passed, format!("{fam}: {}", r.to_text()))?;
        ensure(r.notes.iter().any(|n| n == "max shift 1"), format!("{fam}: {:?}", r.notes))?;
        flagged += usize::from(r.notes.iter().any(|n| n.starts_with("one-sided discrepancy")));
        checked += r.instances.len();
    }
    ensure(flagged > 0, "one-sided discrepancy not flagged")?;
    Ok(format!("{checked} indices, max shift 1, discrepancy flagged in {flagged} families"))
}

fn c9_hwv() -> Outcome {
    let conv = Convention::default();
    let mut count = 0;
    for n in 1..=3 {
        let fam = SphereFamily::odd_a(n).unwrap();
        for a in 0..=5 {
            for b in 0..=5 {
                let r = hwv_check_symbolic(&fam, &SpectrumIndex::Pair(a, b), &conv).map_err(|e| e.to_string())?;
                ensure(r.annihilated, format!("{fam} ({a},{b}): {:?}", r.e_annihilation))?;
                count += 1;
            }
        }
    }
    let so: Vec<SphereFamily> = (1..=3)
        .map(|n| SphereFamily::even_b(n).unwrap())
        .chain((2..=3).map(|n| SphereFamily::odd_d(n).unwrap()))
        .collect();
    for fam in &so {
        let ring = CoordinateRing::new(fam);
        let mut yk = CoordinatePolynomial::one(ring.nvars());
        for k in 0..=10 {
            for i in 1..=fam.n {
                let e = ChevalleyGenerator::new(GeneratorKind::E, i);
                ensure(ring.act(&e, &yk, &conv).map_err(|e| e.to_string())?.is_zero(), format!("{fam} y^{k}: E_{i}"))?;
            }
            count += 1;
            yk = yk.mul(&ring.var(ring.y()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let pool = families(3);
    let mut worst: f64 = 0.0;
    for s in 0..50 {
        let fam = &pool[rng.random_range(0..pool.len())];
        let ring = CoordinateRing::new(fam);
        let mut exps = vec![0u32; ring.nvars()];
        for _ in 0..rng.random_range(1..=4) {
            exps[rng.random_range(0..ring.nvars())] += 1;
        }
        let p = CoordinatePolynomial::monomial(ring.nvars(), &exps, BigRational::one());
        let kind = [GeneratorKind::E, GeneratorKind::F, GeneratorKind::H][rng.random_range(0..3)];
        let gen = ChevalleyGenerator::new(kind, rng.random_range(1..=fam.n));
        let err = oracle_agreement(fam, &p, &gen, &conv, 3, s).map_err(|e| e.to_string())?;
        ensure(err <= 1e-6, format!("{fam} {gen} on {exps:?}: error {err:.2e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("{count} monomials annihilated; 50 random monomials, max oracle error {worst:.1e}"))
}

fn c10_report() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_specdim"))
            .args(["report", "--max-n", "10", "--seed", "42"])
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    let second = run()?;
    ensure(first.status.success(), format!("exit {:?}", first.status.code()))?;
    ensure(first.stdout == second.stdout && first.stderr == second.stderr, "output differs between runs")?;
    let text = String::from_utf8(first.stdout).map_err(|e| e.to_string())?;
    let rows: Vec<&str> = text.lines().skip(1).collect();
    ensure(rows.len() == 29, format!("{} rows", rows.len()))?;
    ensure(rows.iter().all(|r| r.ends_with(",true")), "mismatch row present")?;
    Ok(format!("{} rows, all match, identical bytes", rows.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact dimension", c1_exact_dimension),
        ("numerical fit", c2_fit),
        ("zeta boundary", c3_zeta),
        ("norm ratios", c4_norms),
        ("growth graph", c5_graph),
        ("dirac growth", c6_dirac),
        ("branching", c7_branching),
        ("bounded leap", c8_leap),
        ("highest-weight vectors", c9_hwv),
        ("report table", c10_report),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.1?}]", i + 1, start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{:.1?}]", i + 1, start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
