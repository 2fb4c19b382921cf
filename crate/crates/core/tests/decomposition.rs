use std::f64::consts::PI;

use infoshare::decomposition::{self, Direction, Enforceability};
use infoshare::{geometry, ActionProfile, GameSpec};
use proptest::prelude::*;

fn g3(alpha: f64, eps: f64, loss: f64) -> GameSpec {
    GameSpec::linear(2, 3.0, loss, alpha, eps, 0.9).unwrap()
}

fn grid_specs() -> Vec<GameSpec> {
    let mut out = Vec::new();
    for a in [0.6, 0.7, 0.8, 0.9, 0.95] {
        for e in [0.05, 0.1, 0.2, 0.3, 0.4] {
            for l in [0.5, 1.0, 2.0] {
                out.push(g3(a, e, l));
            }
        }
    }
    out
}

fn off_axis() -> Vec<Direction> {
    (0..8).map(|k| Direction::at_angle(PI / 8.0 + k as f64 * PI / 4.0)).collect()
}

#[test]
fn orthogonal_mode_is_orthogonal() {
    let r = ActionProfile::all(2, true);
    for spec in grid_specs() {
        for d in off_axis() {
            // directions with both components negative cannot orthogonally
            // enforce mutual disclosure; all others must
            let Some(map) = decomposition::solve_enforceability(&spec, &r, &d, true).unwrap().map() else {
                assert!(d.components().iter().any(|&c| c < 0.0));
                continue;
            };
            assert!(map.orthogonal);
            for g in &map.gamma_bar {
                assert!(d.dot(g).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn profile_bound_with_equality_iff_orthogonal() {
    let dirs: Vec<Direction> = (0..24).map(|k| Direction::at_angle(2.0 * PI * (k as f64 + 0.3) / 24.0)).collect();
    for spec in [g3(0.9, 0.1, 1.0), g3(0.7, 0.3, 2.0), GameSpec::linear(3, 1.0, 1.0, 0.9, 0.1, 0.9).unwrap()] {
        let n = spec.n_firms;
        let dirs: Vec<Direction> = if n == 2 { dirs.clone() } else { decomposition::sphere_directions(3, 12, 4) };
        for d in &dirs {
            for r in ActionProfile::enumerate(n) {
                let bound = d.dot(&spec.profile_payoff(&r));
                let general = decomposition::solve_enforceability(&spec, &r, d, false).unwrap();
                let Some(map) = general.map() else { continue };
                assert!(map.k_star <= bound + 1e-9, "{r} {:?}", d.components());
                let ortho = decomposition::solve_enforceability(&spec, &r, d, true).unwrap().map().is_some();
                assert_eq!(ortho, map.k_star >= bound - 1e-9, "{r} {:?}", d.components());
            }
        }
    }
}

#[test]
fn rescaling_the_direction_changes_nothing() {
    let spec = g3(0.8, 0.15, 1.0);
    for raw in [[1.0, 2.0], [-1.0, 0.5], [0.3, -2.0], [2.0, 2.0]] {
        let a = Direction::new(raw.to_vec()).unwrap();
        let b = Direction::new(raw.iter().map(|x| 3.0 * x).collect()).unwrap();
        let close = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(p, q)| (p - q).abs() < 1e-12);
        assert!(close(a.components(), b.components()));
        let ka = decomposition::k_star(&spec, &a).unwrap();
        let kb = decomposition::k_star(&spec, &b).unwrap();
        assert!((ka.k - kb.k).abs() < 1e-12);
        assert_eq!(ka.best_action, kb.best_action);
        for (x, y) in ka.map.gamma_bar.iter().zip(&kb.map.gamma_bar) {
            assert!(close(x, y));
        }
        assert!((kb.map.k_star_unnormalized() - 3.0 * ka.map.k_star_unnormalized()).abs() < 1e-9);
    }
    assert!(Direction::new(vec![0.0, 0.0]).is_err());
}

#[test]
fn punishment_shrinks_with_accuracy() {
    let d = Direction::new(vec![1.0, 1.0]).unwrap();
    let value = |a: f64, e: f64| decomposition::table2_closed_form(&g3(a, e, 1.0), &d).unwrap().gamma_bar[1][0];
    let alphas: Vec<f64> = (0..10).map(|k| 0.55 + 0.04 * k as f64).collect();
    let eps: Vec<f64> = (0..10).map(|k| 0.05 + 0.04 * k as f64).collect();
    for &a in &alphas {
        for &e in &eps {
            let v = value(a, e);
            assert!((v - 1.0 / (e * a * decomposition::kappa(a, e).unwrap().value)).abs() < 1e-9);
            assert!(value(a + 0.04, e) < v || a + 0.04 >= 1.0);
            assert!(value(a, e + 0.04) > v || e + 0.04 >= 0.5);
        }
    }
}

#[test]
fn both_firms_are_never_punished_together() {
    for spec in grid_specs() {
        for k in 0..16 {
            let d = Direction::at_angle(PI / 2.0 * (k as f64 + 0.5) / 16.0);
            for m in [
                decomposition::table2_closed_form(&spec, &d).unwrap(),
                decomposition::solve_enforceability(&spec, &ActionProfile::all(2, true), &d, false).unwrap().map().unwrap(),
            ] {
                for g in &m.gamma_bar {
                    let min = g.iter().cloned().fold(f64::INFINITY, f64::min);
                    let max = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    assert!(!(min < 0.0) || max >= 0.0, "{g:?}");
                }
            }
        }
    }
}

#[test]
fn closed_form_map_decomposes_the_promise() {
    let spec = g3(0.9, 0.1, 1.0);
    let map = decomposition::table2_closed_form(&spec, &Direction::new(vec![1.0, 1.0]).unwrap()).unwrap();
    let r = ActionProfile::all(2, true);
    let check = decomposition::verify_decomposition(&spec, &[2.0, 2.0], &r, &map, 0.9).unwrap();
    assert!(check.holds);
    assert!(check.equality_residual.iter().all(|x| x.abs() < 1e-12));
    assert!(check.ic_slack.iter().all(|x| x.abs() < 1e-12));
    for delta in [0.99, 0.999, 0.9999] {
        let c = decomposition::verify_decomposition(&spec, &[2.0, 2.0], &r, &map, delta).unwrap();
        let spread = c.continuations.iter().flatten().map(|x| (x - 2.0).abs()).fold(0.0, f64::max);
        assert!(spread <= (1.0 - delta) / delta * 12.5 + 1e-12);
    }
    assert!(decomposition::verify_decomposition(&spec, &[2.0, 2.0], &r, &map, 1.0).is_err());
}

#[test]
fn unenforceable_profiles_are_reported() {
    // (1,1) cannot be enforced with lambda . gamma_bar = 0 on an axis
    let spec = g3(0.9, 0.1, 1.0);
    let out = decomposition::solve_enforceability(&spec, &ActionProfile::all(2, true), &Direction::new(vec![1.0, 0.0]).unwrap(), true)
        .unwrap();
    assert!(matches!(out, Enforceability::NotEnforceable { .. }));
    assert!(out.map().is_none());
}

#[test]
fn polygon_satisfies_its_halfspaces() {
    for spec in [g3(0.9, 0.1, 1.0), g3(0.7, 0.2, 0.5), g3(0.95, 0.3, 2.0)] {
        let approx = decomposition::ppe_payoff_set(&spec, 90).unwrap();
        let poly = approx.polygon_vertices.clone().unwrap();
        assert!(geometry::polygon_area(&poly) > 0.0);
        for w in 0..poly.len() {
            let (a, b, c) = (poly[w], poly[(w + 1) % poly.len()], poly[(w + 2) % poly.len()]);
            let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            assert!(cross > -1e-12, "not counterclockwise convex");
        }
        for h in &approx.halfspaces {
            for v in &poly {
                assert!(h.lambda.dot(v) <= h.k + 1e-9);
            }
        }
        let hull = spec.feasible_hull(true).unwrap().polygon().unwrap();
        assert!((approx.discretization_error.unwrap() - geometry::hausdorff(&poly, &hull)).abs() < 1e-12);
        assert!(!approx.interior_empty);
    }
}

#[test]
fn three_firm_bounds() {
    let spec = GameSpec::linear(3, 1.0, 1.0, 0.9, 0.1, 0.9).unwrap();
    for i in 0..3 {
        let mut e = vec![0.0; 3];
        e[i] = -1.0;
        assert!(decomposition::k_star(&spec, &Direction::new(e).unwrap()).unwrap().k.abs() < 1e-9);
    }
    let all = Direction::new(vec![1.0, 1.0, 1.0]).unwrap();
    let ks = decomposition::k_star(&spec, &all).unwrap();
    assert_eq!(ks.best_action, ActionProfile::all(3, true));
    assert!((ks.k - 3f64.sqrt()).abs() < 1e-9);
    let approx = decomposition::ppe_payoff_set_seeded(&spec, 40, 1).unwrap();
    assert!(approx.halfspaces.len() >= 40);
    assert!(approx.polygon_vertices.is_none());
}

proptest! {
    #[test]
    fn k_star_is_the_best_profile_value(angle in 0.0f64..(2.0 * PI), alpha in 0.6f64..0.99, eps in 0.01f64..0.45, loss in 0.2f64..2.5) {
        let spec = GameSpec::linear(2, 3.0, loss, alpha, eps, 0.9).unwrap();
        let d = Direction::at_angle(angle);
        let ks = decomposition::k_star(&spec, &d).unwrap();
        let best = ActionProfile::enumerate(2)
            .filter_map(|r| decomposition::solve_enforceability(&spec, &r, &d, false).unwrap().map())
            .map(|m| m.k_star)
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((ks.k - best).abs() <= 1e-9);
        // every maximal half-space contains the individually rational hull
        let hull = spec.feasible_hull(true).unwrap().polygon().unwrap();
        let support = hull.iter().map(|v| d.dot(v)).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(ks.k >= support - 1e-9);
    }

    #[test]
    fn k_star_follows_the_positive_quadrant_formula(angle in 0.0f64..(PI / 2.0), loss in 0.2f64..2.5, g in 0.5f64..5.0) {
        let spec = GameSpec::linear(2, g, loss, 0.85, 0.1, 0.9).unwrap();
        let d = Direction::at_angle(angle);
        let (l1, l2) = (d.components()[0], d.components()[1]);
        let formula = (g * l2 - loss * l1).max(g * l1 - loss * l2).max((g - loss) * (l1 + l2)).max(0.0);
        prop_assert!((decomposition::k_star(&spec, &d).unwrap().k - formula).abs() <= 1e-9);
    }
}
