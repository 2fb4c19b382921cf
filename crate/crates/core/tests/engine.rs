use infoshare::decomposition::Direction;
use infoshare::engine::{
    self, AlwaysConceal, AlwaysDisclose, EpisodeTrace, PrivateHistory, PromiseAutomaton, PublicHistory, SignalTrigger,
    Strategy,
};
use infoshare::monitoring::{self, MonitoringMode, PublicSignal, SignalRealization};
use infoshare::{ActionProfile, Error, GameSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn g3(delta: f64) -> GameSpec {
    GameSpec::linear(2, 3.0, 1.0, 0.9, 0.1, delta).unwrap()
}

fn triggers(n: usize, k: Option<u64>) -> Vec<Box<dyn Strategy>> {
    (0..n).map(|_| Box::new(SignalTrigger::new(k)) as Box<dyn Strategy>).collect()
}

#[test]
fn episodes_replay_exactly() {
    let spec = GameSpec::linear(3, 1.0, 1.0, 0.8, 0.15, 0.95).unwrap();
    for mode in [MonitoringMode::Public, MonitoringMode::Private] {
        let a = engine::run_episode(&spec, &mut triggers(3, Some(4)), 300, 17, mode).unwrap();
        let b = engine::run_episode(&spec, &mut triggers(3, Some(4)), 300, 17, mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        let c = engine::run_episode(&spec, &mut triggers(3, Some(4)), 300, 18, mode).unwrap();
        assert_ne!(a, c);
    }
}

#[test]
fn discounted_average_recomputes_from_csv() {
    let spec = GameSpec::linear(3, 1.0, 1.0, 0.8, 0.15, 0.95).unwrap();
    for mode in [MonitoringMode::Public, MonitoringMode::Private] {
        let trace = engine::run_episode(&spec, &mut triggers(3, Some(6)), 500, 3, mode).unwrap();
        let reported = trace.discounted_average();
        let back = EpisodeTrace::from_csv(&trace.to_csv(), spec.discount).unwrap();
        let mut manual = vec![0.0; 3];
        for (t, p) in back.periods.iter().enumerate() {
            for (m, u) in manual.iter_mut().zip(&p.payoffs) {
                *m += (1.0 - spec.discount) * spec.discount.powi(t as i32) * u;
            }
        }
        for i in 0..3 {
            assert!((manual[i] - reported[i]).abs() < 1e-12);
        }
        assert_eq!(back.to_csv(), trace.to_csv());
    }
}

#[test]
fn monte_carlo_matches_single_episodes() {
    let spec = g3(0.9);
    let make = |_| triggers(2, Some(3));
    let s = engine::monte_carlo(&spec, make, 16, 200, 42, MonitoringMode::Public).unwrap();
    let again = engine::monte_carlo(&spec, make, 16, 200, 42, MonitoringMode::Public).unwrap();
    assert_eq!(s, again);
    let mut max_u = 0.0_f64;
    for (seed, m) in s.seeds.iter().zip(&s.replica_means) {
        let t = engine::run_episode(&spec, &mut triggers(2, Some(3)), 200, *seed, MonitoringMode::Public).unwrap();
        let d = t.discounted_average();
        assert!((d[0] - m[0]).abs() < 1e-12 && (d[1] - m[1]).abs() < 1e-12);
        max_u = t.periods.iter().flat_map(|p| p.payoffs.iter()).fold(max_u, |a, u| a.max(u.abs()));
    }
    assert_eq!(s.truncation_bound, engine::truncation_bound(0.9, 200, max_u));
}

#[test]
fn always_conceal_earns_nothing() {
    let spec = g3(0.9);
    let s = engine::monte_carlo(
        &spec,
        |_| vec![Box::new(AlwaysConceal) as Box<dyn Strategy>, Box::new(AlwaysConceal)],
        8,
        100,
        1,
        MonitoringMode::Public,
    )
    .unwrap();
    assert_eq!(s.mean, vec![0.0, 0.0]);
    assert_eq!(s.std_error, vec![0.0, 0.0]);
}

#[test]
fn concealing_against_disclosure_earns_the_deviation_payoff() {
    let spec = GameSpec::linear(3, 1.0, 1.0, 0.9, 0.1, 0.9).unwrap();
    let mut s: Vec<Box<dyn Strategy>> = vec![Box::new(AlwaysConceal), Box::new(AlwaysDisclose), Box::new(AlwaysDisclose)];
    let t = engine::run_episode(&spec, &mut s, 20, 0, MonitoringMode::Public).unwrap();
    let d2 = spec.deviator_payoff(2).unwrap();
    assert!(t.periods.iter().all(|p| p.payoffs[0] == d2));
}

#[test]
fn sensitive_trigger_eventually_fires() {
    // false alarms arrive with probability 1 - (1 - eps)^N per period
    let spec = g3(0.9);
    for seed in 0..20 {
        let t = engine::run_episode(&spec, &mut triggers(2, Some(1)), 400, seed, MonitoringMode::Public).unwrap();
        assert!(t.periods.last().unwrap().actions == ActionProfile::all(2, false), "seed {seed}");
    }
    let never = engine::run_episode(&spec, &mut triggers(2, None), 400, 0, MonitoringMode::Public).unwrap();
    let always = engine::run_episode(
        &spec,
        &mut [Box::new(AlwaysDisclose) as Box<dyn Strategy>, Box::new(AlwaysDisclose)],
        400,
        0,
        MonitoringMode::Public,
    )
    .unwrap();
    assert_eq!(never, always);
}

fn random_private(g: &mut ChaCha8Rng, len: usize, n: usize) -> PrivateHistory {
    PrivateHistory {
        actions: (0..len).map(|_| g.gen()).collect(),
        signals: (0..len).map(|_| (0..n - 1).map(|_| g.gen()).collect()).collect(),
    }
}

#[test]
fn public_strategies_ignore_private_histories() {
    let spec = g3(0.995);
    let mut g = ChaCha8Rng::seed_from_u64(77);
    let promise = PromiseAutomaton::new(&spec, vec![1.0, 1.0], Direction::new(vec![1.0, 1.0]).unwrap()).unwrap();
    let protos: Vec<Box<dyn Fn() -> Box<dyn Strategy>>> = vec![
        Box::new(|| Box::new(AlwaysDisclose)),
        Box::new(|| Box::new(AlwaysConceal)),
        Box::new(|| Box::new(SignalTrigger::new(Some(3)))),
        Box::new(move || Box::new(promise.clone())),
    ];
    for make in &protos {
        assert!(make().is_public());
        for _ in 0..200 {
            let len = g.gen_range(0..6);
            let public = PublicHistory {
                // mostly clean signals so the promise stays feasible
                signals: (0..len).map(|_| PublicSignal(vec![g.gen_bool(0.9), g.gen_bool(0.9)])).collect(),
                messages: vec![],
            };
            let firm = g.gen_range(0..2);
            let a = make().next_action(firm, len, &public, &random_private(&mut g, len, 2));
            let b = make().next_action(firm, len, &public, &random_private(&mut g, len, 2));
            match (a, b) {
                (Ok(x), Ok(y)) => assert_eq!(x, y),
                (Err(Error::DiscountTooSmall { .. }), Err(Error::DiscountTooSmall { .. })) => {}
                other => panic!("{other:?}"),
            }
        }
    }
}

#[test]
fn promise_recursion_holds_every_period() {
    let spec = g3(0.999);
    let mut a = PromiseAutomaton::new(&spec, vec![1.0, 1.5], Direction::new(vec![1.0, 1.0]).unwrap()).unwrap();
    let mut periods = 0;
    for t in 0..500u64 {
        let st = a.state();
        assert!(st.recursion_residual(&spec).unwrap().iter().all(|x| x.abs() <= 1e-9));
        let b = monitoring::sample_public(spec.public_accuracy(), a.action(), 2, t).index();
        if a.observe(t as usize, b).is_err() {
            break;
        }
        periods += 1;
    }
    assert!(periods > 0);
}

#[test]
fn impatient_promise_halts() {
    let spec = g3(0.5);
    let p = PromiseAutomaton::new(&spec, vec![2.0, 2.0], Direction::new(vec![1.0, 1.0]).unwrap()).unwrap();
    let out = engine::run_episode(&spec, &mut [Box::new(p.clone()) as Box<dyn Strategy>, Box::new(p)], 100, 0, MonitoringMode::Public);
    let Err(Error::DiscountTooSmall { min_delta, .. }) = out else { panic!("{out:?}") };
    assert!(min_delta > 0.5);
    assert!(PromiseAutomaton::new(&spec, vec![3.0, 3.0], Direction::new(vec![1.0, 1.0]).unwrap()).is_err());
}

#[test]
fn cross_observation_bit_follows_the_kernel() {
    // a uniformly chosen tester's report about firm j, from truthful messages
    let spec = GameSpec::linear(3, 1.0, 1.0, 0.8, 0.15, 0.9).unwrap();
    let mut s: Vec<Box<dyn Strategy>> = vec![
        Box::new(engine::truthful_report_strategy(AlwaysDisclose)),
        Box::new(engine::truthful_report_strategy(AlwaysConceal)),
        Box::new(engine::truthful_report_strategy(AlwaysDisclose)),
    ];
    let periods = 10_000;
    let t = engine::run_episode(&spec, &mut s, periods, 8, MonitoringMode::Private).unwrap();
    let mut g = ChaCha8Rng::seed_from_u64(5);
    for j in 0..3 {
        let testers: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let zeros = t
            .periods
            .iter()
            .filter(|p| {
                let k = testers[g.gen_range(0..testers.len())];
                let pos = if j < k { j } else { j - 1 };
                !p.messages[k][pos]
            })
            .count() as f64;
        let p0 = monitoring::belief_kernel(j != 1, spec.private_accuracy());
        let n = periods as f64;
        let chi2 = (zeros - n * p0).powi(2) / (n * p0) + (zeros - n * p0).powi(2) / (n * (1.0 - p0));
        assert!(chi2 <= 9.0, "firm {j}: chi2 = {chi2}");
    }
    // messages are the senders' own rows
    for p in &t.periods {
        let SignalRealization::Private(m) = &p.signal else { panic!() };
        for k in 0..3 {
            assert_eq!(p.messages[k], m.row(k));
        }
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    let spec = g3(0.9);
    assert!(engine::run_episode(&spec, &mut triggers(2, None), 0, 0, MonitoringMode::Public).is_err());
    assert!(engine::run_episode(&spec, &mut triggers(3, None), 5, 0, MonitoringMode::Public).is_err());
    assert!(engine::monte_carlo(&spec, |_| triggers(2, None), 0, 5, 0, MonitoringMode::Public).is_err());
    assert!(EpisodeTrace::from_csv("", 0.9).is_err());
    assert!(EpisodeTrace::from_csv("period,action_1\n0,1\n", 0.9).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trace_csv_round_trips(seed in any::<u64>(), k in 1u64..8, horizon in 1usize..60, private in any::<bool>()) {
        let spec = GameSpec::linear(3, 1.0, 1.0, 0.8, 0.15, 0.95).unwrap();
        let mode = if private { MonitoringMode::Private } else { MonitoringMode::Public };
        let t = engine::run_episode(&spec, &mut triggers(3, Some(k)), horizon, seed, mode).unwrap();
        let back = EpisodeTrace::from_csv(&t.to_csv(), spec.discount).unwrap();
        prop_assert_eq!(&back, &t);
    }
}
