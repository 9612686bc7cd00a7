mod common;

use secure_isac::binary::BinaryParams;
use secure_isac::channel::binary_example_channel;
use secure_isac::degraded::{
    check_physically_degraded, check_reversely_degraded, check_stochastically_degraded,
    degradedness_report, witness_residual, WitnessKernel, DEFAULT_TOL,
};
use secure_isac::rng::Stream;
use secure_isac::IsacError;

#[test]
fn composed_channels_are_physically_and_stochastically_degraded() {
    let mut rng = Stream::new(101);
    for _ in 0..40 {
        let ch = common::physically_degraded(&mut rng);
        let law = common::full_law(&mut rng, ch.alphabets());
        let phys = check_physically_degraded(&ch, &law, DEFAULT_TOL).unwrap();
        assert!(phys.holds, "residual {}", phys.residual);
        let stoch = check_stochastically_degraded(&ch, &law, DEFAULT_TOL).unwrap();
        assert!(stoch.holds, "residual {}", stoch.residual);
        let w = stoch.witness.unwrap();
        assert!(witness_residual(&ch, &law, &w).unwrap() <= DEFAULT_TOL);
    }
}

#[test]
fn mirrored_composition_is_reversely_degraded() {
    let mut rng = Stream::new(202);
    for _ in 0..40 {
        let ch = common::reversely_degraded(&mut rng);
        let law = common::full_law(&mut rng, ch.alphabets());
        let rev = check_reversely_degraded(&ch, &law, DEFAULT_TOL).unwrap();
        assert!(rev.holds, "residual {}", rev.residual);
    }
}

#[test]
fn physical_implies_stochastic_on_arbitrary_channels() {
    let mut rng = Stream::new(303);
    let mut failures = 0;
    for _ in 0..40 {
        let ch = common::arbitrary(&mut rng);
        let law = common::full_law(&mut rng, ch.alphabets());
        let r = degradedness_report(&ch, &law, DEFAULT_TOL, false).unwrap();
        if r.physically_degraded.holds {
            assert!(r.stochastically_degraded.holds);
        }
        if !r.physically_degraded.holds {
            failures += 1;
        }
    }
    // Dense random kernels almost never factor through a Markov chain.
    assert!(failures > 30);
}

#[test]
fn verdicts_are_invariant_under_relabeling() {
    let mut rng = Stream::new(404);
    for k in 0..30 {
        let ch = if k % 2 == 0 {
            common::physically_degraded(&mut rng)
        } else {
            common::arbitrary(&mut rng)
        };
        let law = common::full_law(&mut rng, ch.alphabets());
        let relabel = common::Relabeling::random(&mut rng, ch.alphabets());
        let (ch2, law2) = (relabel.channel(&ch), relabel.law(&law));
        let a = degradedness_report(&ch, &law, DEFAULT_TOL, false).unwrap();
        let b = degradedness_report(&ch2, &law2, DEFAULT_TOL, false).unwrap();
        assert_eq!(a.physically_degraded.holds, b.physically_degraded.holds);
        assert_eq!(a.reversely_degraded.holds, b.reversely_degraded.holds);
        assert_eq!(a.stochastically_degraded.holds, b.stochastically_degraded.holds);
        assert!((a.physically_degraded.residual - b.physically_degraded.residual).abs() < 1e-12);
    }
}

#[test]
fn binary_example_is_degraded_with_explicit_witness() {
    for (p, q) in [(0.5, 0.5), (0.1, 0.8), (0.9, 0.3)] {
        let bp = BinaryParams::new(0.3, 0.7, p, q).unwrap();
        let (ch, law) = binary_example_channel(&bp).unwrap();
        let r = degradedness_report(&ch, &law, DEFAULT_TOL, false).unwrap();
        assert!(r.physically_degraded.holds);
        assert!(!r.reversely_degraded.holds);
        assert!(r.stochastically_degraded.holds);
        let w = WitnessKernel::binary_example(bp.alpha);
        assert!(witness_residual(&ch, &law, &w).unwrap() <= 1e-12);
    }
}

#[test]
fn strict_mode_covers_every_input_pair() {
    let bp = BinaryParams::new(0.3, 0.7, 1.0, 0.0).unwrap();
    let (ch, law) = binary_example_channel(&bp).unwrap();
    let r = degradedness_report(&ch, &law, DEFAULT_TOL, true).unwrap();
    assert!(r.strict);
    assert!(r.physically_degraded.holds);
}

#[test]
fn nonpositive_tolerance_is_rejected() {
    let bp = BinaryParams::new(0.3, 0.7, 0.5, 0.5).unwrap();
    let (ch, law) = binary_example_channel(&bp).unwrap();
    for tol in [0.0, -1.0, f64::NAN] {
        assert!(matches!(
            check_physically_degraded(&ch, &law, tol),
            Err(IsacError::InvalidArgument(_))
        ));
    }
}
