use infoshare::{ActionProfile, GainFamily, GameSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_spec(g: &mut ChaCha8Rng) -> GameSpec {
    random_spec_with_base(g, true)
}

/// `base` allows a positive gain with no other discloser in concave tables.
fn random_spec_with_base(g: &mut ChaCha8Rng, base: bool) -> GameSpec {
    let n = g.gen_range(2..=6);
    let gain = if g.gen_bool(0.5) {
        GainFamily::Linear { g: g.gen_range(0.1..4.0) }
    } else {
        // nonincreasing nonnegative increments make a concave table
        let mut f = vec![if base { g.gen_range(0.0..0.5) } else { 0.0 }];
        let mut step: f64 = g.gen_range(0.0..2.0);
        for _ in 1..n {
            step *= g.gen_range(0.0..=1.0);
            f.push(f.last().unwrap() + step);
        }
        GainFamily::Concave { g: g.gen_range(0.1..4.0), f }
    };
    GameSpec::new(n, gain, g.gen_range(0.05..3.0), 0.9, 0.1, 0.9).unwrap()
}

#[test]
fn linear_specs_satisfy_a1() {
    let mut g = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let spec = GameSpec::linear(g.gen_range(2..=8), g.gen_range(0.1..4.0), g.gen_range(0.05..3.0), 0.9, 0.1, 0.9)
            .unwrap();
        assert!(spec.check_assumptions().a1_holds);
        for x in 1..=spec.n_firms {
            let gap = spec.deviator_payoff(x - 1).unwrap() - spec.cooperator_payoff(x).unwrap();
            assert!((gap - spec.loss).abs() < 1e-12);
        }
    }
}

#[test]
fn a2prime_implies_a2() {
    let mut g = ChaCha8Rng::seed_from_u64(2);
    let mut seen = 0;
    for _ in 0..10_000 {
        let rep = random_spec(&mut g).check_assumptions();
        if rep.a2prime_holds {
            seen += 1;
            assert!(rep.a2_holds);
        }
    }
    assert!(seen > 100, "too few specs satisfied A2' to exercise the implication");
}

#[test]
fn minmax_is_all_conceal_with_value_zero() {
    let mut g = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let spec = random_spec_with_base(&mut g, false);
        if !spec.check_assumptions().a1_holds {
            continue;
        }
        for i in 0..spec.n_firms {
            let m = spec.minmax(i).unwrap();
            assert_eq!(m.profile, ActionProfile::all(spec.n_firms, false));
            assert_eq!(m.value, 0.0);
        }
    }
}

#[test]
fn minmax_with_positive_base_gain() {
    let spec = GameSpec::new(3, GainFamily::Concave { g: 2.0, f: vec![0.25, 1.0, 1.5] }, 1.0, 0.9, 0.1, 0.9).unwrap();
    let d0 = spec.deviator_payoff(0).unwrap();
    let c1 = spec.cooperator_payoff(1).unwrap();
    assert_eq!(d0, 0.5);
    assert_eq!(spec.minmax(0).unwrap().value, d0.max(c1));
}

#[test]
fn welfare_increases_under_example_condition() {
    // G > L / (N - 1)
    let spec = GameSpec::linear(4, 0.5, 1.0, 0.9, 0.1, 0.9).unwrap();
    for x in 1..=4 {
        assert!(spec.social_welfare(x).unwrap() > spec.social_welfare(x - 1).unwrap());
    }
    assert_eq!(GameSpec::linear(3, 1.0, 1.0, 0.9, 0.1, 0.9).unwrap().social_welfare(3).unwrap(), 3.0);
}

#[test]
fn hull_contains_every_profile_payoff() {
    for n in 2..=4 {
        let spec = GameSpec::linear(n, 1.5, 1.0, 0.9, 0.1, 0.9).unwrap();
        let hull = spec.feasible_hull(false).unwrap();
        for r in ActionProfile::enumerate(n) {
            assert!(hull.contains(&spec.profile_payoff(&r), 1e-9).unwrap(), "{r}");
        }
    }
}

#[test]
fn clipped_hull_inside_unclipped() {
    for n in 2..=4 {
        let spec = GameSpec::linear(n, 1.5, 1.0, 0.9, 0.1, 0.9).unwrap();
        let full = spec.feasible_hull(false).unwrap();
        let clipped = spec.feasible_hull(true).unwrap();
        assert!(clipped.is_clipped_to_ir);
        for v in &clipped.vertices {
            assert!(v.iter().all(|&x| x >= -1e-9));
            assert!(full.contains(v, 1e-7).unwrap(), "{v:?}");
        }
    }
}

#[test]
fn out_of_range_counts_are_rejected() {
    let spec = GameSpec::linear(3, 1.0, 1.0, 0.9, 0.1, 0.9).unwrap();
    assert!(spec.cooperator_payoff(0).is_err());
    assert!(spec.deviator_payoff(3).is_err());
    assert!(spec.social_welfare(4).is_err());
    assert!(spec.minmax(3).is_err());
}

proptest! {
    #[test]
    fn profile_payoff_is_permutation_equivariant(
        bits in prop::collection::vec(any::<bool>(), 2..=7),
        seed in any::<u64>(),
        g in 0.1f64..4.0,
        l in 0.05f64..3.0,
    ) {
        let n = bits.len();
        let spec = GameSpec::linear(n, g, l, 0.9, 0.1, 0.9).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let r = ActionProfile::new(bits.clone());
        let permuted = ActionProfile::new(perm.iter().map(|&p| bits[p]).collect());
        let u = spec.profile_payoff(&r);
        let up = spec.profile_payoff(&permuted);
        for (k, &p) in perm.iter().enumerate() {
            prop_assert!((up[k] - u[p]).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_round_trips_through_text(bits in prop::collection::vec(any::<bool>(), 1..=12)) {
        let r = ActionProfile::new(bits);
        let back: ActionProfile = r.to_string().parse().unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(ActionProfile::from_index(r.index(), r.len()), r);
    }
}
