use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use specdim::growth_graph::{build_graph, GeneratorSet};
use specdim::length_operator::{shell_multiplicity, shell_polynomial, zeta_partial_sum};
use specdim::lie_action::{oracle_agreement, ChevalleyGenerator, Convention, CoordinatePolynomial, CoordinateRing, GeneratorKind};
use specdim::norms::{l2_monomial_norm_sq, l2_monte_carlo, monomial_sup, monomial_sup_oracle, NormKind};
use specdim::root_systems::{dominant_weights, RootKind, RootSystem};
use specdim::spectrum::{Family, SpectrumIndex, SphereFamily};
use specdim::tensor_branching::{brauer_klimyk_oracle, fundamental_tensor};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(42), failure_persistence: None, ..Config::default() }
}

fn sphere(max_n: usize) -> impl Strategy<Value = SphereFamily> {
    (0usize..3, 1usize..=max_n).prop_map(|(f, n)| {
        let family = Family::ALL[f];
        SphereFamily::new(family, n.max(family.min_n())).unwrap()
    })
}

fn index_for(fam: &SphereFamily, a: u64, b: u64) -> SpectrumIndex {
    if fam.family == Family::OddA { SpectrumIndex::Pair(a, b) } else { SpectrumIndex::Single(a) }
}

fn generator(rank: usize) -> impl Strategy<Value = ChevalleyGenerator> {
    (0usize..3, 1usize..=rank).prop_map(|(k, i)| {
        ChevalleyGenerator::new([GeneratorKind::E, GeneratorKind::F, GeneratorKind::H][k], i)
    })
}

fn monomial(ring: &CoordinateRing, exps: &[u32]) -> CoordinatePolynomial {
    let mut e = vec![0u32; ring.nvars()];
    for (i, x) in exps.iter().enumerate() {
        e[i % ring.nvars()] += x;
    }
    CoordinatePolynomial::monomial(ring.nvars(), &e, BigRational::one())
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn sup_closed_form_matches_oracle(a in 0u64..=200, b in 0u64..=200) {
        prop_assert!((monomial_sup(a, b) - monomial_sup_oracle(a, b, 1000)).abs() <= 1e-9);
    }

    #[test]
    fn action_is_a_derivation(
        fam in sphere(3),
        e1 in prop::collection::vec(0u32..3, 1..6),
        e2 in prop::collection::vec(0u32..3, 1..6),
        pick in 0usize..3,
        idx in 1usize..=3,
    ) {
        let ring = CoordinateRing::new(&fam);
        let conv = Convention::default();
        let gen = ChevalleyGenerator::new([GeneratorKind::E, GeneratorKind::F, GeneratorKind::H][pick], idx.min(fam.n));
        let (p, q) = (monomial(&ring, &e1), monomial(&ring, &e2));
        let lhs = ring.act(&gen, &p.mul(&q), &conv).unwrap();
        let rhs = ring.act(&gen, &p, &conv).unwrap().mul(&q).add(&p.mul(&ring.act(&gen, &q, &conv).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shell_polynomial_on_random_shells(fam in sphere(5), k in 2u64..300) {
        let poly = shell_polynomial(&fam).unwrap();
        let direct = shell_multiplicity(&fam, k).unwrap();
        prop_assert_eq!(poly.eval(k), BigRational::from_integer(direct.into()));
    }

    #[test]
    fn zeta_monotone(fam in sphere(3), dp in 0.1f64..3.0, cutoff in 10u64..2000) {
        let p = fam.sphere_dim() as f64 + dp;
        let small = zeta_partial_sum(&fam, p, cutoff).unwrap();
        let large = zeta_partial_sum(&fam, p, cutoff * 2).unwrap();
        prop_assert!(large.partial_sum >= small.partial_sum);
        prop_assert!(large.partial_sum <= small.partial_sum + small.tail_upper_bound * (1.0 + 1e-9));
        let steeper = zeta_partial_sum(&fam, p + 0.5, cutoff).unwrap();
        prop_assert!(steeper.partial_sum <= small.partial_sum);
    }

    #[test]
    fn growth_graph_acyclic(fam in sphere(3), c in 0.5f64..3.0, cutoff in 1u64..25, l2 in any::<bool>()) {
        let norm = if l2 { NormKind::L2 } else { NormKind::Sup };
        let g = build_graph(&fam, &GeneratorSet::default_for(&fam), c, cutoff, norm).unwrap();
        prop_assert!(g.is_acyclic());
    }

    #[test]
    fn l2_monte_carlo_within_three_sigma(fam in sphere(3), a in 0u64..4, b in 0u64..4) {
        let gamma = index_for(&fam, a, b);
        let exact = l2_monomial_norm_sq(&fam, &gamma).unwrap().to_f64().unwrap();
        let seed = 1_000 * fam.n as u64 + 100 * fam.family as u64 + 10 * a + b;
        let (mean, stderr) = l2_monte_carlo(&fam, &gamma, 20_000, seed).unwrap();
        prop_assert!((mean - exact).abs() <= 3.0 * stderr + 1e-12, "mean {mean}, exact {exact}, stderr {stderr}");
    }
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn symbolic_matches_numeric(fam in sphere(3), exps in prop::collection::vec(0u32..3, 1..5), gen_seed in (0usize..3, 1usize..=3), seed in any::<u64>()) {
        let ring = CoordinateRing::new(&fam);
        let p = monomial(&ring, &exps);
        let gen = ChevalleyGenerator::new([GeneratorKind::E, GeneratorKind::F, GeneratorKind::H][gen_seed.0], gen_seed.1.min(fam.n));
        let err = oracle_agreement(&fam, &p, &gen, &Convention::default(), 2, seed).unwrap();
        prop_assert!(err <= 1e-6, "error {err}");
    }
}

fn dominant_lambda() -> impl Strategy<Value = (RootKind, usize, usize)> {
    (0usize..3, 1usize..=4, any::<prop::sample::Index>()).prop_map(|(k, rank, pick)| {
        let kind = [RootKind::A, RootKind::B, RootKind::D][k];
        let rank = if kind == RootKind::D { rank.max(2) } else { rank };
        (kind, rank, pick.index(usize::MAX))
    })
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn tensor_dimension_conserved((kind, rank, pick) in dominant_lambda()) {
        let weights = dominant_weights(kind, rank, 5).unwrap();
        let lambda = &weights[pick % weights.len()];
        let sys = RootSystem::new(kind, rank).unwrap();
        let tensor = fundamental_tensor(kind, rank, lambda).unwrap();
        let lhs = sys.weyl_dimension(lambda).unwrap() * BigUint::from(kind.defining_dim(rank));
        prop_assert_eq!(lhs, tensor.dimension(&sys).unwrap());
        prop_assert_eq!(tensor, brauer_klimyk_oracle(kind, rank, lambda).unwrap());
    }
}

#[test]
fn generator_strategy_in_range() {
    let mut runner = proptest::test_runner::TestRunner::new(config(16));
    runner
        .run(&generator(3), |g| {
            prop_assert!(g.index >= 1 && g.index <= 3);
            Ok(())
        })
        .unwrap();
}
