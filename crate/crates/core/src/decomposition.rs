//! Enforceability on half-spaces: normalized continuation payoffs, the
//! two-firm closed form, maximal half-spaces `k*(lambda)` and the
//! direction-sampled approximation of the limit equilibrium payoff set.
//!
//! Continuation payoffs are indexed by public signal (firm 1 is the least
//! significant bit) and then by firm.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameSpec};
use crate::geometry::{self, Point2};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::monitoring;
use crate::rng;

/// Tolerance for half-space and orthogonality checks.
pub const GAMMA_TOL: f64 = 1e-9;
/// Largest game handled by the enforceability program.
pub const MAX_LP_FIRMS: usize = 8;

/// A nonzero direction, stored with unit Euclidean norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Direction {
    lambda: Vec<f64>,
    /// Norm of the vector as given, before normalization.
    scale: f64,
}

impl Direction {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() || lambda.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("direction must be a finite nonempty vector"));
        }
        let scale = lambda.iter().map(|x| x * x).sum::<f64>().sqrt();
        if scale == 0.0 {
            return Err(Error::domain("direction must be nonzero"));
        }
        Ok(Direction {
            lambda: lambda.iter().map(|x| x / scale).collect(),
            scale,
        })
    }

    /// Unit direction at `angle` radians in the plane.
    pub fn at_angle(angle: f64) -> Self {
        Direction {
            lambda: vec![angle.cos(), angle.sin()],
            scale: 1.0,
        }
    }

    pub fn components(&self) -> &[f64] {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dot(&self, v: &[f64]) -> f64 {
        self.lambda.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

/// `kappa = (1 - eps)/eps - (1 - alpha)/alpha`, positive on the legal range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kappa {
    pub value: f64,
}

pub fn kappa(alpha: f64, epsilon: f64) -> Result<Kappa> {
    crate::game::Accuracy::new(alpha, epsilon)?;
    Ok(Kappa {
        value: (1.0 - epsilon) / epsilon - (1.0 - alpha) / alpha,
    })
}

impl Kappa {
    /// `eps * alpha * kappa`, written as `alpha (1 - eps) - eps (1 - alpha)`.
    pub fn scaled(alpha: f64, epsilon: f64) -> f64 {
        alpha * (1.0 - epsilon) - epsilon * (1.0 - alpha)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuationMap {
    /// `gamma_bar[b][i]`: normalized continuation of firm `i` on signal `b`.
    pub gamma_bar: Vec<Vec<f64>>,
    /// `k*(lambda; r)` for the unit direction.
    pub k_star: f64,
    pub action: ActionProfile,
    pub direction: Direction,
    /// Whether firm `i`'s incentive constraint is tight.
    pub binding: Vec<bool>,
    /// Whether `lambda . gamma_bar(b) = 0` on every signal.
    pub orthogonal: bool,
}

impl ContinuationMap {
    pub fn n_signals(&self) -> usize {
        self.gamma_bar.len()
    }

    /// `E[gamma_bar_i | profile]` under the public monitor.
    pub fn expected(&self, spec: &GameSpec, profile: &ActionProfile) -> Result<Vec<f64>> {
        let probs = monitoring::public_signal_distribution(spec, profile).probs()?;
        let n = self.action.len();
        Ok((0..n)
            .map(|i| probs.iter().zip(&self.gamma_bar).map(|(p, g)| p * g[i]).sum())
            .collect())
    }

    /// `k*` for the direction as originally given (before normalization).
    pub fn k_star_unnormalized(&self) -> f64 {
        self.k_star * self.direction.scale
    }

    /// CSV with one row per signal; `signal` lists the bits of firms 1..N.
    pub fn to_csv(&self) -> String {
        let n = self.action.len();
        let mut out = String::from("signal_index,signal");
        for i in 1..=n {
            out.push_str(&format!(",gamma_bar_{i}"));
        }
        out.push('\n');
        for (b, g) in self.gamma_bar.iter().enumerate() {
            let bits: String = (0..n).map(|j| if (b >> j) & 1 == 1 { '1' } else { '0' }).collect();
            out.push_str(&format!("{b},{bits}"));
            for x in g {
                out.push_str(&format!(",{}", fmt_num(*x)));
            }
            out.push('\n');
        }
        out
    }
}

/// Shortest round-tripping decimal, with negative zero folded to zero and
/// exponent notation for very small or large magnitudes.
pub(crate) fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// The two-firm closed form at the mutual-disclosure profile, with the pin
/// `gamma_bar(1,1) = 0`. Both direction components must be nonzero.
pub fn table2_closed_form(spec: &GameSpec, lambda: &Direction) -> Result<ContinuationMap> {
    if spec.n_firms != 2 || lambda.dim() != 2 {
        return Err(Error::domain("the closed form covers two firms only"));
    }
    let [l1, l2] = [lambda.components()[0], lambda.components()[1]];
    if l1 == 0.0 || l2 == 0.0 {
        return Err(Error::Redirect {
            reason: "the closed form divides by both direction components".into(),
            redirect: "the general enforceability solver",
        });
    }
    let acc = spec.public_accuracy();
    let (alpha, eps) = (acc.alpha, acc.epsilon);
    let c = spec.loss / Kappa::scaled(alpha, eps);
    let rho = l2 / l1;
    // firm 1, indexed by signal b1 + 2 b2
    let g1 = [c * ((1.0 - eps) / eps) * (rho - 1.0), c, -rho * c, 0.0];
    let gamma_bar = g1.iter().map(|&g| vec![g, -g * l1 / l2]).collect();
    let action = ActionProfile::all(2, true);
    let k_star = lambda.dot(&spec.profile_payoff(&action));
    Ok(ContinuationMap {
        gamma_bar,
        k_star,
        action,
        direction: lambda.clone(),
        binding: vec![true, true],
        orthogonal: true,
    })
}

/// Result of the enforceability program.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Enforceability {
    Enforced(ContinuationMap),
    /// No continuation map on the half-space satisfies every incentive
    /// constraint; `constraints` names the system that failed.
    NotEnforceable {
        action: ActionProfile,
        direction: Direction,
        constraints: String,
    },
}

impl Enforceability {
    pub fn map(self) -> Option<ContinuationMap> {
        match self {
            Enforceability::Enforced(m) => Some(m),
            Enforceability::NotEnforceable { .. } => None,
        }
    }
}

struct Problem {
    n: usize,
    s: usize,
    lambda: Vec<f64>,
    pi: Vec<f64>,
    /// `pi_r - pi_dev(i)` per firm.
    gap: Vec<Vec<f64>>,
    /// `u_i(dev) - u_i(r)` per firm.
    gain: Vec<f64>,
    lambda_u: f64,
}

impl Problem {
    fn new(spec: &GameSpec, r: &ActionProfile, lambda: &Direction) -> Result<Self> {
        let n = spec.n_firms;
        if n > MAX_LP_FIRMS {
            return Err(Error::Capacity {
                what: "firms for the enforceability program",
                limit: MAX_LP_FIRMS,
                requested: n,
            });
        }
        if r.len() != n || lambda.dim() != n {
            return Err(Error::domain("profile and direction must have one entry per firm"));
        }
        let pi = monitoring::public_signal_distribution(spec, r).probs()?;
        let u = spec.profile_payoff(r);
        let mut gap = Vec::with_capacity(n);
        let mut gain = Vec::with_capacity(n);
        for i in 0..n {
            let dev = r.flipped(i);
            let pd = monitoring::public_signal_distribution(spec, &dev).probs()?;
            gap.push(pi.iter().zip(&pd).map(|(a, b)| a - b).collect());
            gain.push(spec.profile_payoff(&dev)[i] - u[i]);
        }
        Ok(Problem {
            n,
            s: pi.len(),
            lambda: lambda.components().to_vec(),
            lambda_u: lambda.dot(&u),
            pi,
            gap,
            gain,
        })
    }

    fn var(&self, i: usize, b: usize) -> usize {
        i * self.s + b
    }

    fn n_vars(&self) -> usize {
        self.n * self.s
    }

    /// Terms of `lambda . gamma_bar(b)`.
    fn halfspace_terms(&self, b: usize) -> Vec<(usize, f64)> {
        (0..self.n)
            .filter(|&i| self.lambda[i] != 0.0)
            .map(|i| (self.var(i, b), self.lambda[i]))
            .collect()
    }

    fn ic_terms(&self, i: usize) -> Vec<(usize, f64)> {
        (0..self.s).map(|b| (self.var(i, b), self.gap[i][b])).collect()
    }

    /// `E_r[lambda . gamma_bar]` as a dense row.
    fn objective_row(&self) -> Vec<f64> {
        let mut row = vec![0.0; self.n_vars()];
        for i in 0..self.n {
            for b in 0..self.s {
                row[self.var(i, b)] = self.pi[b] * self.lambda[i];
            }
        }
        row
    }

    fn stage_one(&self, orthogonal: bool) -> Result<Option<f64>> {
        let mut lp = LinearProgram::maximize(self.objective_row());
        lp.set_all_free();
        let rel = if orthogonal { Relation::Eq } else { Relation::Le };
        for b in 0..self.s {
            lp.add_sparse(&self.halfspace_terms(b), rel, 0.0);
        }
        for i in 0..self.n {
            lp.add_sparse(&self.ic_terms(i), Relation::Ge, self.gain[i]);
        }
        match lp.solve()? {
            LpOutcome::Optimal { value, .. } => Ok(Some(self.lambda_u + value)),
            LpOutcome::Infeasible => Ok(None),
            LpOutcome::Unbounded => Err(Error::Solver(
                "enforceability program unbounded although the half-space caps it".into(),
            )),
        }
    }

    /// Smallest-magnitude map attaining `k`. Variables are split into
    /// nonnegative parts so the objective is the l1 norm.
    fn stage_two(&self, k: f64, orthogonal: bool, pin: bool, bind: bool) -> Result<Option<Vec<f64>>> {
        let nv = self.n_vars();
        let mut lp = LinearProgram::minimize(vec![1.0; 2 * nv]);
        let split = |terms: &[(usize, f64)]| -> Vec<(usize, f64)> {
            terms
                .iter()
                .flat_map(|&(j, a)| [(j, a), (j + nv, -a)])
                .collect()
        };
        let obj: Vec<(usize, f64)> = self
            .objective_row()
            .into_iter()
            .enumerate()
            .filter(|(_, a)| *a != 0.0)
            .collect();
        let target = k - self.lambda_u;
        lp.add_sparse(&split(&obj), Relation::Ge, target - GAMMA_TOL * (1.0 + target.abs()));
        let rel = if orthogonal { Relation::Eq } else { Relation::Le };
        for b in 0..self.s {
            lp.add_sparse(&split(&self.halfspace_terms(b)), rel, 0.0);
        }
        if orthogonal {
            // promise stays at the stage payoff
            for i in 0..self.n {
                let terms: Vec<(usize, f64)> =
                    (0..self.s).map(|b| (self.var(i, b), self.pi[b])).collect();
                lp.add_sparse(&split(&terms), Relation::Eq, 0.0);
            }
        }
        if pin {
            for i in 0..self.n {
                lp.add_sparse(&split(&[(self.var(i, self.s - 1), 1.0)]), Relation::Eq, 0.0);
            }
        }
        for i in 0..self.n {
            let rel = if bind && self.gain[i] > 0.0 {
                Relation::Eq
            } else {
                Relation::Ge
            };
            lp.add_sparse(&split(&self.ic_terms(i)), rel, self.gain[i]);
        }
        Ok(lp
            .solve()?
            .optimal()
            .map(|(x, _)| (0..nv).map(|j| x[j] - x[j + nv]).collect()))
    }
}

/// Best payoff in direction `lambda` enforceable by `r` on the half-space
/// `lambda . gamma_bar <= 0` (or `= 0` when `orthogonal`), together with a
/// canonical continuation map.
///
/// The map is made unique by a second program: among maps attaining `k`, it
/// minimizes the l1 norm subject to the pin `gamma_bar(1,...,1) = 0` and to
/// binding incentive constraints for firms with a profitable deviation.
/// When `k = lambda . u(r)` the map is also orthogonal with zero mean, so the
/// promise stays at `u(r)`. Pins that cannot be met are dropped in order.
pub fn solve_enforceability(
    spec: &GameSpec,
    r: &ActionProfile,
    lambda: &Direction,
    orthogonal: bool,
) -> Result<Enforceability> {
    let prob = Problem::new(spec, r, lambda)?;
    let Some(k) = prob.stage_one(orthogonal)? else {
        return Ok(Enforceability::NotEnforceable {
            action: r.clone(),
            direction: lambda.clone(),
            constraints: format!(
                "incentive constraints of firms 1..{} with lambda . gamma_bar(b) {} 0 on all {} signals",
                prob.n,
                if orthogonal { "=" } else { "<=" },
                prob.s
            ),
        });
    };
    let ortho_attained = k >= prob.lambda_u - GAMMA_TOL * (1.0 + prob.lambda_u.abs());
    let mut x = None;
    for (pin, bind) in [(true, true), (true, false), (false, true), (false, false)] {
        x = prob.stage_two(k, ortho_attained, pin, bind)?;
        if x.is_some() {
            break;
        }
    }
    let x = x.ok_or_else(|| Error::Solver("no canonical map at the optimal value".into()))?;
    let gamma_bar: Vec<Vec<f64>> = (0..prob.s)
        .map(|b| (0..prob.n).map(|i| clean(x[prob.var(i, b)])).collect())
        .collect();
    let binding = (0..prob.n)
        .map(|i| {
            let lhs: f64 = (0..prob.s).map(|b| prob.gap[i][b] * gamma_bar[b][i]).sum();
            (lhs - prob.gain[i]).abs() <= GAMMA_TOL * (1.0 + prob.gain[i].abs())
        })
        .collect();
    let orthogonal_out = gamma_bar
        .iter()
        .all(|g| lambda.dot(g).abs() <= GAMMA_TOL * (1.0 + g.iter().map(|v| v.abs()).sum::<f64>()));
    let k_star = prob.lambda_u
        + gamma_bar
            .iter()
            .zip(&prob.pi)
            .map(|(g, p)| p * lambda.dot(g))
            .sum::<f64>();
    Ok(Enforceability::Enforced(ContinuationMap {
        gamma_bar,
        k_star: clean(k_star),
        action: r.clone(),
        direction: lambda.clone(),
        binding,
        orthogonal: orthogonal_out,
    }))
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-13 {
        0.0
    } else {
        x
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KStar {
    pub k: f64,
    pub best_action: ActionProfile,
    pub map: ContinuationMap,
}

/// `k*(lambda) = max_r k*(lambda; r)` over pure profiles. Ties go to the
/// lexicographically smallest profile.
pub fn k_star(spec: &GameSpec, lambda: &Direction) -> Result<KStar> {
    let n = spec.n_firms;
    if n > MAX_LP_FIRMS {
        return Err(Error::Capacity {
            what: "firms for the enforceability program",
            limit: MAX_LP_FIRMS,
            requested: n,
        });
    }
    // k*(lambda; r) <= lambda . u(r), so scan profiles by that bound and stop
    // once no remaining profile can reach the best value
    let mut profiles: Vec<(f64, ActionProfile)> = ActionProfile::enumerate(n)
        .map(|r| (lambda.dot(&spec.profile_payoff(&r)), r))
        .collect();
    profiles.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let tie = |k: f64| GAMMA_TOL * (1.0 + k.abs());
    let mut best: Option<(f64, ActionProfile)> = None;
    for (bound, r) in profiles {
        if let Some((kb, _)) = &best {
            if bound < kb - tie(*kb) {
                break;
            }
        }
        let Some(k) = Problem::new(spec, &r, lambda)?.stage_one(false)? else {
            continue;
        };
        best = match best {
            None => Some((k, r)),
            Some((kb, rb)) => {
                if k > kb + tie(kb) || (k >= kb - tie(kb) && r < rb) {
                    Some((k, r))
                } else {
                    Some((kb, rb))
                }
            }
        };
    }
    let (_, best_action) =
        best.ok_or_else(|| Error::Solver("no pure profile is enforceable".into()))?;
    let map = solve_enforceability(spec, &best_action, lambda, false)?
        .map()
        .ok_or_else(|| Error::Solver("argmax profile lost enforceability".into()))?;
    Ok(KStar {
        k: map.k_star,
        best_action,
        map,
    })
}

/// Half-space `{v : lambda . v <= k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalfSpace {
    pub lambda: Direction,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffSetApprox {
    pub halfspaces: Vec<HalfSpace>,
    /// Counterclockwise vertices of the intersection (two firms only).
    pub polygon_vertices: Option<Vec<Point2>>,
    /// True when the intersection has no interior.
    pub interior_empty: bool,
    /// Hausdorff distance from the clipped feasible hull (two firms only).
    pub discretization_error: Option<f64>,
}

impl PayoffSetApprox {
    pub fn halfspaces_csv(&self) -> String {
        let n = self.halfspaces.first().map_or(0, |h| h.lambda.dim());
        let mut out: String = (1..=n).map(|i| format!("lambda_{i},")).collect();
        out.push_str("k\n");
        for h in &self.halfspaces {
            for x in h.lambda.components() {
                out.push_str(&fmt_num(*x));
                out.push(',');
            }
            out.push_str(&fmt_num(h.k));
            out.push('\n');
        }
        out
    }

    pub fn vertices_csv(&self) -> String {
        let mut out = String::from("vertex,v1,v2\n");
        for (i, p) in self.polygon_vertices.iter().flatten().enumerate() {
            out.push_str(&format!("{i},{},{}\n", fmt_num(p[0]), fmt_num(p[1])));
        }
        out
    }
}

pub const DEFAULT_DIRECTIONS: usize = 360;

/// Uniform angular grid of `n` unit directions starting at angle 0.
pub fn angular_grid(n: usize) -> Vec<Direction> {
    (0..n)
        .map(|k| Direction::at_angle(2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

/// `n` directions drawn uniformly on the unit sphere plus the coordinate
/// directions, from a seeded substream.
pub fn sphere_directions(dim: usize, n: usize, seed: u64) -> Vec<Direction> {
    let mut g = rng::substream(seed, 0, rng::AUX_STREAM);
    let mut out: Vec<Direction> = (0..dim)
        .flat_map(|i| {
            [1.0, -1.0].map(|s| {
                let mut v = vec![0.0; dim];
                v[i] = s;
                Direction::new(v).expect("unit vector")
            })
        })
        .collect();
    while out.len() < n + 2 * dim {
        let v: Vec<f64> = (0..dim).map(|_| g.gen_range(-1.0..1.0)).collect();
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-6 && r2 <= 1.0 {
            out.push(Direction::new(v).expect("nonzero"));
        }
    }
    out
}

/// Approximation of the limit equilibrium payoff set as the intersection of
/// maximal half-spaces.
///
/// For two firms the directions are a uniform angular grid of `n_directions`
/// augmented with the outward edge normals of the clipped feasible hull, so
/// the polygon is an outer approximation that never leaves that hull. For
/// three or more firms a half-space list over `n_directions` seeded random
/// directions is returned.
pub fn ppe_payoff_set(spec: &GameSpec, n_directions: usize) -> Result<PayoffSetApprox> {
    ppe_payoff_set_seeded(spec, n_directions, 0)
}

pub fn ppe_payoff_set_seeded(spec: &GameSpec, n_directions: usize, seed: u64) -> Result<PayoffSetApprox> {
    if n_directions < 8 {
        return Err(Error::domain("at least 8 directions are required"));
    }
    if spec.n_firms != 2 {
        let dirs = sphere_directions(spec.n_firms, n_directions, seed);
        return Ok(PayoffSetApprox {
            halfspaces: halfspaces_for(spec, &dirs)?,
            polygon_vertices: None,
            interior_empty: false,
            discretization_error: None,
        });
    }
    let mut dirs = angular_grid(n_directions);
    let clipped = spec
        .feasible_hull(true)?
        .polygon()
        .expect("two-firm hull is planar");
    if clipped.len() >= 3 {
        for (nrm, _) in geometry::edge_halfplanes(&clipped) {
            if !dirs.iter().any(|d| (d.components()[0] - nrm[0]).abs() < 1e-12 && (d.components()[1] - nrm[1]).abs() < 1e-12) {
                dirs.push(Direction::new(nrm.to_vec())?);
            }
        }
    }
    polygon_from_directions(spec, &dirs, Some(&clipped))
}

/// Two-firm polygon from an explicit direction list.
pub fn ppe_polygon_for_directions(spec: &GameSpec, dirs: &[Direction]) -> Result<PayoffSetApprox> {
    let clipped = spec.feasible_hull(true)?.polygon();
    polygon_from_directions(spec, dirs, clipped.as_deref())
}

fn polygon_from_directions(
    spec: &GameSpec,
    dirs: &[Direction],
    reference: Option<&[Point2]>,
) -> Result<PayoffSetApprox> {
    if spec.n_firms != 2 {
        return Err(Error::domain("polygon output needs two firms"));
    }
    let halfspaces = halfspaces_for(spec, dirs)?;
    let planes: Vec<(Point2, f64)> = halfspaces
        .iter()
        .map(|h| ([h.lambda.components()[0], h.lambda.components()[1]], h.k))
        .collect();
    let bound = 1e3
        * (1.0
            + ActionProfile::enumerate(2)
                .flat_map(|r| spec.profile_payoff(&r))
                .fold(0.0_f64, |m, v| m.max(v.abs())));
    let poly = geometry::intersect_halfplanes(&planes, bound)
        .ok_or_else(|| Error::domain("directions do not bound the payoff set"))?;
    let mut poly = geometry::simplify_polygon(&poly, 1e-12);
    for c in poly.iter_mut().flatten() {
        *c = clean(*c);
    }
    let interior_empty = geometry::polygon_area(&poly) <= 1e-12;
    let discretization_error = match reference {
        Some(r) if !poly.is_empty() && !r.is_empty() => Some(geometry::hausdorff(&poly, r)),
        _ => None,
    };
    Ok(PayoffSetApprox {
        halfspaces,
        polygon_vertices: Some(poly),
        interior_empty,
        discretization_error,
    })
}

fn halfspaces_for(spec: &GameSpec, dirs: &[Direction]) -> Result<Vec<HalfSpace>> {
    dirs.par_iter()
        .map(|d| {
            k_star(spec, d).map(|ks| HalfSpace {
                lambda: d.clone(),
                k: ks.k,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionCheck {
    /// Actual continuation `gamma(b) = v + ((1 - delta)/delta) gamma_bar(b)`.
    pub continuations: Vec<Vec<f64>>,
    /// `v_i - (1 - delta) u_i(r) - delta E[gamma_i]` per firm.
    pub equality_residual: Vec<f64>,
    /// Incentive slack per firm; negative means a profitable deviation.
    pub ic_slack: Vec<f64>,
    pub holds: bool,
}

/// Checks `v = (1 - delta) u(r) + delta E[gamma]` and every one-shot
/// deviation constraint for the continuations implied by `map`.
pub fn verify_decomposition(
    spec: &GameSpec,
    v: &[f64],
    r: &ActionProfile,
    map: &ContinuationMap,
    delta: f64,
) -> Result<DecompositionCheck> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain("discount factor must lie in (0, 1)"));
    }
    let n = spec.n_firms;
    if v.len() != n || r.len() != n {
        return Err(Error::domain("payoff vector and profile need one entry per firm"));
    }
    let scale = (1.0 - delta) / delta;
    let continuations: Vec<Vec<f64>> = map
        .gamma_bar
        .iter()
        .map(|g| v.iter().zip(g).map(|(vi, gi)| vi + scale * gi).collect())
        .collect();
    let expect = |profile: &ActionProfile| -> Result<Vec<f64>> {
        let probs = monitoring::public_signal_distribution(spec, profile).probs()?;
        Ok((0..n)
            .map(|i| probs.iter().zip(&continuations).map(|(p, c)| p * c[i]).sum())
            .collect())
    };
    let u = spec.profile_payoff(r);
    let eg = expect(r)?;
    let equality_residual: Vec<f64> = (0..n)
        .map(|i| v[i] - (1.0 - delta) * u[i] - delta * eg[i])
        .collect();
    let mut ic_slack = Vec::with_capacity(n);
    for i in 0..n {
        let dev = r.flipped(i);
        let ud = spec.profile_payoff(&dev)[i];
        let ed = expect(&dev)?[i];
        ic_slack.push((1.0 - delta) * u[i] + delta * eg[i] - (1.0 - delta) * ud - delta * ed);
    }
    let holds = equality_residual.iter().all(|x| x.abs() <= 1e-9) && ic_slack.iter().all(|&s| s >= -1e-9);
    Ok(DecompositionCheck {
        continuations,
        equality_residual,
        ic_slack,
        holds,
    })
}
