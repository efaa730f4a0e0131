//! Independent oracles for the stage operators: exact rational column sums
//! in ℓ₁, dense SVD in ℓ₂ and seeded search for general p.

use fbasis::lp_operators::{op_norm, op_norm_bruteforce, remainder_norm, solve_b_next, PExp, SpaceKind, TailOp};
use fbasis::scalar::rat;
use fbasis::{build_basis, FilterSpec, Scalar, ScalarSeq};
use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seq(text: &str) -> ScalarSeq {
    ScalarSeq::parse(text).unwrap()
}

fn bounded_filter() -> FilterSpec {
    FilterSpec::parse("summable(const(1/2))").unwrap()
}

/// Exact ℓ₁ operator norm of `x ↦ x_{≤n} − x_{n+1} b_{≤n}/b_{n+1}`: the
/// largest column ℓ₁ sum, computed from the coefficients alone.
fn l1_column_oracle(b: &[BigRational], n: usize) -> BigRational {
    let last = &b[n];
    let tail: BigRational = b[..n].iter().map(|x| (x / last).abs()).sum();
    if tail > BigRational::one() {
        tail
    } else {
        BigRational::one()
    }
}

#[test]
fn l1_constant_two_is_exact_to_fifty() {
    let start = std::time::Instant::now();
    let sys = build_basis(&seq("const(2)"), &SpaceKind::l1(51), &bounded_filter(), 51).unwrap();
    let b: Vec<BigRational> = sys.coefficients.iter().map(|x| x.as_rational().unwrap()).collect();
    let two = rat(2, 1);
    for n in 1..=50 {
        let prefix: BigRational = b[..n].iter().sum();
        assert_eq!(b[n], &prefix / &two, "b_{} recursion", n + 1);
        assert_eq!(l1_column_oracle(&b, n), two, "column norm at stage {}", n);
        assert_eq!(sys.norms[n - 1].value.to_scalar().as_rational(), Some(two.clone()));
        assert_eq!(sys.defect_coeffs[n - 1].as_rational(), Some(two.clone()));
    }
    assert!(start.elapsed().as_secs_f64() < 1.0, "took {:?}", start.elapsed());
}

#[test]
fn l2_sqrt_two_matches_svd() {
    let a = seq("const(sqrt(2))");
    let sys = build_basis(&a, &SpaceKind::l2(51), &bounded_filter(), 51).unwrap();
    let b2: Vec<BigRational> = sys.coefficients.iter().map(|x| x.square().unwrap()).collect();
    for n in 1..=50 {
        let prefix: BigRational = b2[..n].iter().sum();
        assert_eq!(b2[n], prefix, "b_{}^2 recursion", n + 1);
        let stage = &sys.stages[n - 1];
        let dense = stage.to_dense();
        let m = dense.len();
        let mat = DMatrix::from_fn(m, m, |i, j| dense[i][j]);
        let sigma = mat.singular_values().max();
        let reported = op_norm(stage).unwrap().to_f64();
        assert!(
            (sigma - reported).abs() <= 1e-9,
            "stage {}: svd {} vs {}",
            n,
            sigma,
            reported
        );
        assert!((reported - 2f64.sqrt()).abs() <= 1e-12);
    }
}

#[test]
fn l2_random_stages_match_svd() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let len = rng.random_range(2..12usize);
        let b: Vec<Scalar> = (0..len)
            .map(|_| Scalar::from_rational(rat(rng.random_range(1..50), rng.random_range(1..20))))
            .collect();
        let t = TailOp::new(len - 1, b, SpaceKind::l2(len)).unwrap();
        let dense = t.to_dense();
        let mat = DMatrix::from_fn(len, len, |i, j| dense[i][j]);
        let sigma = mat.singular_values().max();
        assert!((sigma - op_norm(&t).unwrap().to_f64()).abs() <= 1e-9 * sigma.max(1.0));
    }
}

#[test]
fn general_p_prescription_against_search() {
    let space = SpaceKind::new(rat(3, 2), 8).unwrap();
    assert!(matches!(space.p, PExp::Other(_)));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let start = std::time::Instant::now();
    for seed in 0..10u64 {
        let target = Scalar::Float(rng.random_range(1.05..3.95));
        let mut b = vec![Scalar::one()];
        for _ in 0..3 {
            let next = solve_b_next(&b, &target, &space).unwrap();
            b.push(next);
            let t = TailOp::new(b.len() - 1, b.clone(), space.clone()).unwrap();
            let norm = op_norm(&t).unwrap().to_f64();
            assert!(
                (norm - target.to_f64()).abs() <= 1e-6,
                "seed {}: {} vs {}",
                seed,
                norm,
                target
            );
            let lower = op_norm_bruteforce(&t, 64, seed).lower;
            assert!((lower - norm).abs() <= 1e-6, "search {} vs {}", lower, norm);
            assert!(lower <= t.riesz_thorin_upper() + 1e-9);
        }
    }
    assert!(start.elapsed().as_secs_f64() < 30.0);
}

#[test]
fn remainder_sandwich_across_spaces() {
    for (space, a) in [
        (SpaceKind::l1(12), "pow(2,1/2)"),
        (SpaceKind::l1(12), "pow(2,1/4)"),
        (SpaceKind::new(rat(3, 2), 12).unwrap(), "const(3)"),
        (SpaceKind::l2(12), "const(sqrt(5))"),
    ] {
        let f = FilterSpec::parse("summable(pow(1,-1/2))").unwrap();
        let sys = build_basis(&seq(a), &space, &f, 12).unwrap();
        for (i, stage) in sys.stages.iter().enumerate() {
            let s = op_norm(stage).unwrap().to_f64();
            let r = remainder_norm(stage, stage.n + 2).unwrap().to_f64();
            assert!(
                r >= (s - 1.0).max(1.0) - 1e-9 && r <= s + 1.0 + 1e-9,
                "stage {}: {} vs {}",
                i + 1,
                r,
                s
            );
            if space.p == PExp::One {
                let a_n = sys.target_at(stage.n);
                let rem = remainder_norm(stage, stage.n + 2).unwrap().value.to_scalar();
                match (a_n.as_rational(), rem.as_rational()) {
                    (Some(a), Some(r)) => assert_eq!(r, a + BigRational::one()),
                    _ => assert!((rem.to_f64() - a_n.to_f64() - 1.0).abs() <= 1e-9),
                }
            }
        }
    }
}
