//! Admissibility verdicts against independent desk oracles.

use fbasis::admissibility::{greedy_blocks, nonadmissibility_witness, summable_criterion, verify_refutation};
use fbasis::scalar::rat;
use fbasis::{check_admissible, AdmissVerdict, FilterSpec, ScalarSeq, SetExpr, SumVerdict, Witness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seq(text: &str) -> ScalarSeq {
    ScalarSeq::parse(text).unwrap()
}

/// Boundedness by sampling: the sequence is a single power-log form, so it is
/// bounded iff its values stop growing between widely separated indices.
fn sampled_bounded(a: &ScalarSeq) -> bool {
    let (x, y) = (a.eval_f64(1 << 20), a.eval_f64(1 << 40));
    y <= x * (1.0 + 1e-9) || y < 1e3 && a.eval_f64(1 << 60) <= y * (1.0 + 1e-9)
}

fn random_seq(rng: &mut ChaCha8Rng) -> String {
    let c = rng.random_range(1..5);
    let beta = rng.random_range(-4i64..9);
    match rng.random_range(0..3) {
        0 => format!("pow({},{}/4)", c, beta),
        1 => format!("powlog({},{}/4,{})", c, beta, rng.random_range(-2i64..3)),
        _ => format!("prefix[{}]:pow({},{}/4)", rng.random_range(2..9), c, beta),
    }
}

#[test]
fn frechet_admissibility_is_boundedness() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let text = random_seq(&mut rng);
        let a = seq(&text);
        let bounded = a.is_bounded().expect("symbolic boundedness");
        assert_eq!(bounded, sampled_bounded(&a), "{}", text);
        for p in [rat(1, 1), rat(2, 1)] {
            let v = check_admissible(&a, &FilterSpec::Frechet, &p).unwrap();
            assert_eq!(v.is_proved(), bounded, "{} at p = {}: {:?}", text, p, v);
            assert_eq!(v.is_refuted(), !bounded, "{} at p = {}: {:?}", text, p, v);
            if v.is_refuted() {
                assert!(verify_refutation(&a, &FilterSpec::Frechet, &p, &v));
            }
        }
    }
}

#[test]
fn sqrt_n_is_statistically_admissible_in_l2() {
    let v = check_admissible(&seq("pow(1,1/2)"), &FilterSpec::Statistical, &rat(2, 1)).unwrap();
    assert!(v.is_proved(), "{:?}", v);
}

#[test]
fn linear_growth_fails_in_l2_for_every_filter() {
    for f in [
        "frechet",
        "statistical",
        "summable(pow(1,-1))",
        "summable(const(1))",
        "trace(statistical; residue(2,0))",
    ] {
        let f = FilterSpec::parse(f).unwrap();
        let v = check_admissible(&seq("pow(1,1)"), &f, &rat(2, 1)).unwrap();
        match &v {
            AdmissVerdict::Refuted {
                witness: Witness::Symbolic(w),
                inverse_sum: SumVerdict::Converges { bound },
                ..
            } => {
                // the whole of ℕ (or the trace set) already carries a finite Σ n^-2
                assert!(
                    *w == SetExpr::all() || matches!(f, FilterSpec::Trace(..)),
                    "{} under {}",
                    w,
                    f
                );
                assert!(
                    (std::f64::consts::PI.powi(2) / 6.0 - 1e-9..=2.0 + 1e-9).contains(bound),
                    "{}",
                    bound
                );
            }
            other => panic!("{}: {:?}", f, other),
        }
        assert!(verify_refutation(&seq("pow(1,1)"), &f, &rat(2, 1), &v));
    }
}

/// Greedy search up to two horizons: when the criterion fails the number of
/// completed blocks keeps growing; when it holds the levels `2^m` soon exceed
/// `sup a s` and the count freezes.
fn greedy_finds_witness(a: &ScalarSeq, s: &ScalarSeq) -> bool {
    // blocks are emitted in index order, so one run serves both horizons
    let Ok(w) = greedy_blocks(a, s, &rat(1, 1), 1_000_000) else {
        return false;
    };
    let early = w
        .blocks
        .iter()
        .filter(|b| b.last().is_some_and(|&n| n <= 10_000))
        .count();
    w.blocks.len() > early
}

#[test]
fn summable_criterion_matches_greedy_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut agreed = 0;
    let mut refuted = 0;
    while agreed < 50 {
        let ca = rng.random_range(1..4);
        let alpha = rng.random_range(0i64..9); // a = ca n^{alpha/4}
        let sigma = rng.random_range(0i64..5); // s = n^{-sigma/4}
        let a = seq(&format!("pow({},{}/4)", ca, alpha));
        let s = seq(&format!("pow(1,-{}/4)", sigma));
        let criterion = summable_criterion(&a, &s, &rat(1, 1)).expect("pure powers are decided");
        let found = greedy_finds_witness(&a, &s);
        assert_eq!(criterion, !found, "a = {}, s = {}", a, s);
        if !criterion {
            refuted += 1;
            let w = nonadmissibility_witness(&a, &s, &rat(1, 1), 100_000).unwrap();
            assert!(
                w.block_sums.iter().all(|m| (1.0..=2.0).contains(m)),
                "{:?}",
                w.block_sums
            );
            assert!(w.inverse_sum <= 2.0, "{}", w.inverse_sum);
        }
        agreed += 1;
    }
    assert!(
        refuted > 5 && refuted < 45,
        "both outcomes should be exercised: {}",
        refuted
    );
}
