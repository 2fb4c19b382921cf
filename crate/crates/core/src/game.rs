//! The N-firm disclosure stage game: payoffs, assumption checks, minmax and
//! feasible payoff geometry.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::linalg;
use crate::lp::{LinearProgram, Relation};

/// Strict inequalities must clear this margin to count as holding.
pub const STRICT_TOL: f64 = 1e-12;

/// Largest game for which payoff profiles are enumerated.
pub const MAX_ENUMERATED_FIRMS: usize = 16;

/// Monitoring accuracy: `alpha` is the probability of flagging a concealing
/// firm, `epsilon` the false-alarm probability for a disclosing firm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub alpha: f64,
    pub epsilon: f64,
}

impl Accuracy {
    /// Accuracy inside the open ranges `0 < epsilon < 1/2 < alpha < 1`.
    pub fn new(alpha: f64, epsilon: f64) -> Result<Self> {
        let acc = Accuracy { alpha, epsilon };
        acc.validate()?;
        Ok(acc)
    }

    pub fn validate(&self) -> Result<()> {
        let Accuracy { alpha, epsilon } = *self;
        if !(alpha.is_finite() && epsilon.is_finite()) {
            return Err(Error::domain("monitoring parameters must be finite"));
        }
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::domain(format!("epsilon = {epsilon} outside (0, 1/2)")));
        }
        if !(alpha > 0.5 && alpha < 1.0) {
            return Err(Error::domain(format!("alpha = {alpha} outside (1/2, 1)")));
        }
        Ok(())
    }

    /// Accepts the closed boundary `epsilon = 0` or `alpha = 1`, which only
    /// public-signal sampling tolerates. The flag reports whether the
    /// boundary was hit.
    pub fn new_allowing_boundary(alpha: f64, epsilon: f64) -> Result<(Self, bool)> {
        if !(0.0..0.5).contains(&epsilon) || !(alpha > 0.5 && alpha <= 1.0) {
            return Err(Error::domain(format!(
                "accuracy (alpha = {alpha}, epsilon = {epsilon}) outside [0, 1/2) x (1/2, 1]"
            )));
        }
        Ok((Accuracy { alpha, epsilon }, epsilon == 0.0 || alpha == 1.0))
    }

    pub fn has_full_support(&self) -> bool {
        self.epsilon > 0.0 && self.alpha < 1.0
    }
}

/// How the information gain scales with the number of other disclosers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GainFamily {
    /// gain `z * g`
    Linear { g: f64 },
    /// gain `f(z) * g` for a tabulated nondecreasing concave `f(0..N-1)`
    Concave { g: f64, f: Vec<f64> },
}

impl GainFamily {
    fn validate(&self, n_firms: usize) -> Result<()> {
        match self {
            GainFamily::Linear { g } => {
                if !(g.is_finite() && *g > 0.0) {
                    return Err(Error::domain(format!("gain G = {g} must be positive")));
                }
            }
            GainFamily::Concave { g, f } => {
                if !(g.is_finite() && *g > 0.0) {
                    return Err(Error::domain(format!("gain G = {g} must be positive")));
                }
                if f.len() != n_firms {
                    return Err(Error::domain(format!(
                        "concave table has {} entries, expected N = {n_firms}",
                        f.len()
                    )));
                }
                if f.iter().any(|v| !v.is_finite()) || f[0] < 0.0 {
                    return Err(Error::domain("concave table must be finite with f(0) >= 0"));
                }
                for z in 1..f.len() {
                    if f[z] < f[z - 1] {
                        return Err(Error::domain(format!("concave table decreases at z = {z}")));
                    }
                    if z + 1 < f.len() && f[z + 1] - f[z] > f[z] - f[z - 1] + STRICT_TOL {
                        return Err(Error::domain(format!("concave table is not concave at z = {z}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Gain from `z` other disclosers.
    pub fn gain(&self, z: usize) -> f64 {
        match self {
            GainFamily::Linear { g } => z as f64 * g,
            GainFamily::Concave { g, f } => f[z] * g,
        }
    }
}

/// A full game instance. Fields are public so analyses can be run on
/// deliberately invalid parameters; [`GameSpec::new`] validates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameSpec {
    pub n_firms: usize,
    pub gain: GainFamily,
    /// disclosure cost `L`
    pub loss: f64,
    /// firms' own monitoring accuracy
    pub alpha: f64,
    pub epsilon: f64,
    pub discount: f64,
    /// monitor accuracy, when it differs from the firms'
    pub monitor: Option<Accuracy>,
}

impl GameSpec {
    pub fn new(
        n_firms: usize,
        gain: GainFamily,
        loss: f64,
        alpha: f64,
        epsilon: f64,
        discount: f64,
    ) -> Result<Self> {
        let spec = GameSpec {
            n_firms,
            gain,
            loss,
            alpha,
            epsilon,
            discount,
            monitor: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The linear-gain family with the given parameters.
    pub fn linear(n_firms: usize, g: f64, loss: f64, alpha: f64, epsilon: f64, discount: f64) -> Result<Self> {
        Self::new(n_firms, GainFamily::Linear { g }, loss, alpha, epsilon, discount)
    }

    pub fn with_monitor(mut self, monitor: Accuracy) -> Result<Self> {
        monitor.validate()?;
        self.monitor = Some(monitor);
        Ok(self)
    }

    pub fn with_discount(mut self, discount: f64) -> Result<Self> {
        self.discount = discount;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_firms < 2 {
            return Err(Error::domain(format!("n_firms = {} must be at least 2", self.n_firms)));
        }
        if !(self.loss.is_finite() && self.loss > 0.0) {
            return Err(Error::domain(format!("loss L = {} must be positive", self.loss)));
        }
        if !(self.discount > 0.0 && self.discount < 1.0) {
            return Err(Error::domain(format!("discount = {} outside (0, 1)", self.discount)));
        }
        self.private_accuracy().validate()?;
        if let Some(m) = self.monitor {
            m.validate()?;
        }
        self.gain.validate(self.n_firms)
    }

    /// Accuracy of the firms' private beliefs.
    pub fn private_accuracy(&self) -> Accuracy {
        Accuracy {
            alpha: self.alpha,
            epsilon: self.epsilon,
        }
    }

    /// Accuracy of the public monitor (defaults to the firms' accuracy).
    pub fn public_accuracy(&self) -> Accuracy {
        self.monitor.unwrap_or_else(|| self.private_accuracy())
    }

    /// Cooperator payoff `C(x)` with `x >= 1` total disclosers.
    pub fn cooperator_payoff(&self, x: usize) -> Result<f64> {
        if x < 1 || x > self.n_firms {
            return Err(Error::domain(format!("C(x) needs 1 <= x <= N, got x = {x}")));
        }
        Ok(self.gain.gain(x - 1) - self.loss)
    }

    /// Deviator payoff `D(x)` with `x <= N - 1` total disclosers.
    pub fn deviator_payoff(&self, x: usize) -> Result<f64> {
        if x >= self.n_firms {
            return Err(Error::domain(format!("D(x) needs 0 <= x <= N - 1, got x = {x}")));
        }
        Ok(self.gain.gain(x))
    }

    /// `C(x)` for a cooperator, `D(x)` otherwise.
    pub fn role_payoff(&self, cooperator: bool, x: usize) -> Result<f64> {
        if cooperator {
            self.cooperator_payoff(x)
        } else {
            self.deviator_payoff(x)
        }
    }

    pub fn profile_payoff(&self, r: &ActionProfile) -> Vec<f64> {
        assert_eq!(r.len(), self.n_firms, "profile length must equal n_firms");
        let x = r.disclosers();
        r.iter()
            .map(|c| self.role_payoff(c, x).expect("x is in range for each role"))
            .collect()
    }

    pub fn social_welfare(&self, x: usize) -> Result<f64> {
        if x > self.n_firms {
            return Err(Error::domain(format!("welfare needs 0 <= x <= N, got x = {x}")));
        }
        let n = self.n_firms;
        let coop = if x > 0 { x as f64 * self.cooperator_payoff(x)? } else { 0.0 };
        let dev = if x < n { (n - x) as f64 * self.deviator_payoff(x)? } else { 0.0 };
        Ok(coop + dev)
    }

    pub fn check_assumptions(&self) -> AssumptionReport {
        let n = self.n_firms;
        let mut witnesses = Vec::new();
        let mut a1 = true;
        for x in 1..=n {
            let d = self.deviator_payoff(x - 1).unwrap();
            let c = self.cooperator_payoff(x).unwrap();
            if d - c <= STRICT_TOL {
                a1 = false;
                witnesses.push(Witness { assumption: Assumption::A1, x });
            }
        }
        let a2 = self.cooperator_payoff(n).unwrap() - self.deviator_payoff(0).unwrap() > STRICT_TOL;
        if !a2 {
            witnesses.push(Witness { assumption: Assumption::A2, x: n });
        }
        let mut a2prime = true;
        for x in 1..=n {
            let gain = self.social_welfare(x).unwrap() - self.social_welfare(x - 1).unwrap();
            if gain <= STRICT_TOL {
                a2prime = false;
                witnesses.push(Witness { assumption: Assumption::A2Prime, x });
            }
        }
        AssumptionReport {
            a1_holds: a1,
            a2_holds: a2,
            a2prime_holds: a2prime,
            witnesses,
        }
    }

    /// Minmax profile and value for `firm`: everyone conceals.
    pub fn minmax(&self, firm: usize) -> Result<Minmax> {
        if firm >= self.n_firms {
            return Err(Error::domain(format!("firm index {firm} out of range")));
        }
        let value = self
            .deviator_payoff(0)?
            .max(self.cooperator_payoff(1)?);
        Ok(Minmax {
            profile: ActionProfile::all(self.n_firms, false),
            value,
        })
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.n_firms > MAX_ENUMERATED_FIRMS {
            return Err(Error::Capacity {
                what: "firms for profile enumeration",
                limit: MAX_ENUMERATED_FIRMS,
                requested: self.n_firms,
            });
        }
        Ok(())
    }

    /// Convex hull of all pure-profile payoffs, optionally intersected with
    /// the closed individually rational orthant.
    pub fn feasible_hull(&self, clip_to_ir: bool) -> Result<PayoffPolytope> {
        self.check_enumerable()?;
        let n = self.n_firms;
        let vertices = if n == 2 {
            let pts: Vec<geometry::Point2> = ActionProfile::enumerate(2)
                .map(|r| {
                    let u = self.profile_payoff(&r);
                    [u[0], u[1]]
                })
                .collect();
            let mut hull = geometry::convex_hull(&pts, 1e-9);
            if clip_to_ir {
                hull = geometry::clip_polygon(&hull, [-1.0, 0.0], 0.0);
                hull = geometry::clip_polygon(&hull, [0.0, -1.0], 0.0);
                hull = geometry::simplify_polygon(&hull, 1e-9);
                for v in hull.iter_mut().flatten() {
                    if v.abs() < 1e-12 {
                        *v = 0.0;
                    }
                }
            }
            hull.into_iter().map(|p| p.to_vec()).collect()
        } else {
            let vertices = self.extreme_points()?;
            if clip_to_ir {
                clip_high_dim(&vertices, n)?
            } else {
                vertices
            }
        };
        Ok(PayoffPolytope {
            dim: n,
            vertices,
            is_clipped_to_ir: clip_to_ir,
        })
    }

    /// Distinct payoff vectors that are extreme points of the feasible set.
    /// Symmetry makes extremeness a property of the number of disclosers, so
    /// one representative per class is tested.
    fn extreme_points(&self) -> Result<Vec<Vec<f64>>> {
        let n = self.n_firms;
        let mut points: Vec<Vec<f64>> = Vec::new();
        for r in ActionProfile::enumerate(n) {
            let u = self.profile_payoff(&r);
            if !points.iter().any(|p| approx_eq(p, &u, 1e-9)) {
                points.push(u);
            }
        }
        let mut extreme_class = vec![false; n + 1];
        for (x, flag) in extreme_class.iter_mut().enumerate() {
            let rep = ActionProfile::new((0..n).map(|i| i < x).collect());
            let p = self.profile_payoff(&rep);
            let others: Vec<&Vec<f64>> = points.iter().filter(|q| !approx_eq(q, &p, 1e-9)).collect();
            *flag = !in_convex_hull(&others, &p, 1e-9)?;
        }
        Ok(points
            .into_iter()
            .filter(|p| {
                ActionProfile::enumerate(n).any(|r| {
                    extreme_class[r.disclosers()] && approx_eq(&self.profile_payoff(&r), p, 1e-9)
                })
            })
            .collect())
    }

    /// Pure profiles whose payoff is a vertex of the feasible hull; ties
    /// (several profiles on one vertex) are all returned.
    pub fn extreme_profiles(&self) -> Result<Vec<ActionProfile>> {
        let hull = self.feasible_hull(false)?;
        Ok(ActionProfile::enumerate(self.n_firms)
            .filter(|r| {
                let u = self.profile_payoff(r);
                hull.vertices.iter().any(|v| approx_eq(v, &u, 1e-9))
            })
            .collect())
    }

    /// `max over feasible v of min_i v_i`; positive iff some feasible payoff
    /// is strictly individually rational.
    pub fn strict_ir_margin(&self) -> Result<f64> {
        self.check_enumerable()?;
        let pts: Vec<Vec<f64>> = ActionProfile::enumerate(self.n_firms)
            .map(|r| self.profile_payoff(&r))
            .collect();
        // variables: weights (one per profile), t
        let k = pts.len();
        let mut obj = vec![0.0; k + 1];
        obj[k] = 1.0;
        let mut lp = LinearProgram::maximize(obj);
        lp.set_free(k);
        let mut sum = vec![1.0; k + 1];
        sum[k] = 0.0;
        lp.add(sum, Relation::Eq, 1.0);
        for i in 0..self.n_firms {
            let mut row: Vec<f64> = pts.iter().map(|p| p[i]).collect();
            row.push(-1.0);
            lp.add(row, Relation::Ge, 0.0);
        }
        let (_, value) = lp
            .solve()?
            .optimal()
            .ok_or_else(|| Error::Solver("IR margin program has no optimum".into()))?;
        Ok(value)
    }
}

fn approx_eq(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Whether `p` is a convex combination of `points` (to `tol` per coordinate).
pub(crate) fn in_convex_hull(points: &[&Vec<f64>], p: &[f64], tol: f64) -> Result<bool> {
    if points.is_empty() {
        return Ok(false);
    }
    let k = points.len();
    let mut lp = LinearProgram::feasibility(k);
    lp.add(vec![1.0; k], Relation::Eq, 1.0);
    for (i, &pi) in p.iter().enumerate() {
        let row: Vec<f64> = points.iter().map(|q| q[i]).collect();
        lp.add(row.clone(), Relation::Le, pi + tol);
        lp.add(row, Relation::Ge, pi - tol);
    }
    Ok(lp.solve()?.optimal().is_some())
}

const MAX_CLIP_DIM: usize = 4;

fn clip_high_dim(vertices: &[Vec<f64>], n: usize) -> Result<Vec<Vec<f64>>> {
    if n > MAX_CLIP_DIM {
        return Err(Error::Capacity {
            what: "firms for individually rational clipping",
            limit: MAX_CLIP_DIM,
            requested: n,
        });
    }
    let mut constraints = geometry::facets(vertices, 1e-9);
    for i in 0..n {
        let mut a = vec![0.0; n];
        a[i] = -1.0;
        constraints.push((a, 0.0));
    }
    Ok(geometry::vertices_of(&constraints, n, 1e-9))
}

/// A binary disclosure profile; `true` means full disclosure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionProfile(Vec<bool>);

impl ActionProfile {
    pub fn new(bits: Vec<bool>) -> Self {
        ActionProfile(bits)
    }

    pub fn all(n: usize, disclose: bool) -> Self {
        ActionProfile(vec![disclose; n])
    }

    /// Firm 1 is the least significant bit.
    pub fn from_index(index: usize, n: usize) -> Self {
        ActionProfile((0..n).map(|i| (index >> i) & 1 == 1).collect())
    }

    pub fn index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &b)| (b as usize) << i)
            .sum()
    }

    /// All `2^n` profiles in index order.
    pub fn enumerate(n: usize) -> impl Iterator<Item = ActionProfile> {
        (0..1usize << n).map(move |i| ActionProfile::from_index(i, n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, firm: usize) -> bool {
        self.0[firm]
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn disclosers(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Copy with `firm`'s action replaced.
    pub fn with(&self, firm: usize, disclose: bool) -> Self {
        let mut bits = self.0.clone();
        bits[firm] = disclose;
        ActionProfile(bits)
    }

    pub fn flipped(&self, firm: usize) -> Self {
        self.with(firm, !self.0[firm])
    }
}

impl fmt::Display for ActionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for ActionProfile {
    type Err = Error;

    /// Parses `"110"` (firm 1 first) or `"1,1,0"`.
    fn from_str(s: &str) -> Result<Self> {
        let bits: Result<Vec<bool>> = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid action '{other}' in profile '{s}'"))),
            })
            .collect();
        let bits = bits?;
        if bits.is_empty() {
            return Err(Error::Parse("empty action profile".into()));
        }
        Ok(ActionProfile(bits))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Assumption {
    A1,
    A2,
    A2Prime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub assumption: Assumption,
    pub x: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub a1_holds: bool,
    pub a2_holds: bool,
    pub a2prime_holds: bool,
    pub witnesses: Vec<Witness>,
}

impl AssumptionReport {
    pub fn all_hold(&self) -> bool {
        self.a1_holds && self.a2_holds && self.a2prime_holds
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minmax {
    pub profile: ActionProfile,
    pub value: f64,
}

/// Vertex description of a payoff polytope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffPolytope {
    pub dim: usize,
    /// For two firms the vertices are in counterclockwise order.
    pub vertices: Vec<Vec<f64>>,
    pub is_clipped_to_ir: bool,
}

impl PayoffPolytope {
    pub fn contains(&self, p: &[f64], tol: f64) -> Result<bool> {
        if self.is_clipped_to_ir && p.iter().any(|&v| v < -tol) {
            return Ok(false);
        }
        let refs: Vec<&Vec<f64>> = self.vertices.iter().collect();
        in_convex_hull(&refs, p, tol)
    }

    /// Vertices as planar points (two firms only).
    pub fn polygon(&self) -> Option<Vec<geometry::Point2>> {
        (self.dim == 2).then(|| self.vertices.iter().map(|v| [v[0], v[1]]).collect())
    }

    /// Full-dimensional iff the vertices span an `dim`-dimensional affine set.
    pub fn has_nonempty_interior(&self) -> bool {
        let Some(base) = self.vertices.first() else {
            return false;
        };
        let diffs: Vec<Vec<f64>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        linalg::row_rank(&diffs, 1e-9) == self.dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(g: f64, l: f64) -> GameSpec {
        GameSpec::linear(2, g, l, 0.9, 0.1, 0.9).unwrap()
    }

    fn example1() -> GameSpec {
        GameSpec::linear(3, 1.0, 1.0, 0.9, 0.1, 0.9).unwrap()
    }

    fn concave() -> GameSpec {
        GameSpec::new(
            3,
            GainFamily::Concave { g: 2.0, f: vec![0.0, 1.0, 1.5] },
            1.0,
            0.9,
            0.1,
            0.9,
        )
        .unwrap()
    }

    #[test]
    fn role_payoffs() {
        let s = example1();
        assert_eq!(s.role_payoff(false, 0).unwrap(), 0.0);
        assert_eq!(s.role_payoff(true, 3).unwrap(), 1.0);
        assert_eq!(concave().role_payoff(true, 2).unwrap(), 1.0);
        assert!(matches!(s.role_payoff(true, 0), Err(Error::Domain(_))));
        assert!(matches!(s.role_payoff(false, 3), Err(Error::Domain(_))));
        assert!(matches!(s.role_payoff(true, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn two_firm_payoff_table() {
        let s = pd(3.0, 1.0);
        let p = |b: &str| s.profile_payoff(&b.parse().unwrap());
        assert_eq!(p("11"), vec![2.0, 2.0]);
        assert_eq!(p("01"), vec![3.0, -1.0]);
        assert_eq!(p("00"), vec![0.0, 0.0]);
    }

    #[test]
    fn assumptions() {
        assert!(example1().check_assumptions().all_hold());
        let weak = GameSpec::linear(3, 0.4, 1.0, 0.9, 0.1, 0.9).unwrap();
        let rep = weak.check_assumptions();
        assert!(rep.a1_holds && !rep.a2_holds);
        assert!((weak.cooperator_payoff(3).unwrap() + 0.2).abs() < 1e-12);
        assert!(rep.witnesses.contains(&Witness { assumption: Assumption::A2, x: 3 }));
    }

    #[test]
    fn concave_a2_threshold() {
        // a2 iff G > L / (f(N-1) - f(0)) = 1 / 1.5
        for (g, expect) in [(0.6, false), (0.7, true), (2.0, true)] {
            let s = GameSpec::new(
                3,
                GainFamily::Concave { g, f: vec![0.0, 1.0, 1.5] },
                1.0,
                0.9,
                0.1,
                0.9,
            )
            .unwrap();
            assert_eq!(s.check_assumptions().a2_holds, expect, "G = {g}");
        }
    }

    #[test]
    fn boundary_ties_fail() {
        // G = L/(N-1) gives C(N) = D(0) exactly
        let s = GameSpec::linear(3, 0.5, 1.0, 0.9, 0.1, 0.9).unwrap();
        let rep = s.check_assumptions();
        assert!(!rep.a2_holds && !rep.a2prime_holds);
    }

    #[test]
    fn minmax_values() {
        let m = pd(3.0, 1.0).minmax(0).unwrap();
        assert_eq!(m.profile, ActionProfile::all(2, false));
        assert_eq!(m.value, 0.0);
        assert_eq!(concave().minmax(2).unwrap().value, 0.0);
        assert!(pd(3.0, 1.0).minmax(2).is_err());
    }

    #[test]
    fn welfare() {
        let s = example1();
        assert_eq!(s.social_welfare(0).unwrap(), 0.0);
        assert_eq!(s.social_welfare(3).unwrap(), 3.0);
        for x in 1..=3 {
            assert!(s.social_welfare(x).unwrap() > s.social_welfare(x - 1).unwrap());
        }
        assert!(s.social_welfare(4).is_err());
    }

    #[test]
    fn two_firm_hulls() {
        let s = pd(3.0, 1.0);
        let h = s.feasible_hull(false).unwrap();
        assert_eq!(h.vertices.len(), 4);
        for v in [[0.0, 0.0], [3.0, -1.0], [-1.0, 3.0], [2.0, 2.0]] {
            assert!(h.vertices.iter().any(|w| approx_eq(w, &v, 1e-12)), "{v:?}");
        }
        let c = s.feasible_hull(true).unwrap();
        assert_eq!(c.vertices.len(), 4);
        for v in [[0.0, 0.0], [8.0 / 3.0, 0.0], [2.0, 2.0], [0.0, 8.0 / 3.0]] {
            assert!(c.vertices.iter().any(|w| approx_eq(w, &v, 1e-12)), "{v:?}");
        }
        assert!(c.contains(&[0.0, 0.0], 1e-9).unwrap());
        assert!(!c.contains(&[3.0, -1.0], 1e-9).unwrap());
    }

    #[test]
    fn three_firm_hull_contains_profiles() {
        let s = example1();
        let h = s.feasible_hull(false).unwrap();
        assert!(h.has_nonempty_interior());
        for r in ActionProfile::enumerate(3) {
            assert!(h.contains(&s.profile_payoff(&r), 1e-9).unwrap());
        }
        let c = s.feasible_hull(true).unwrap();
        assert!(c.vertices.iter().all(|v| v.iter().all(|&x| x >= -1e-9)));
        for v in &c.vertices {
            assert!(h.contains(v, 1e-7).unwrap());
        }
        assert!(s.strict_ir_margin().unwrap() > 0.0);
    }

    #[test]
    fn capacity_limits() {
        let s = GameSpec::linear(17, 1.0, 1.0, 0.9, 0.1, 0.9).unwrap();
        assert!(matches!(s.feasible_hull(false), Err(Error::Capacity { .. })));
        let s = GameSpec::linear(5, 1.0, 1.0, 0.9, 0.1, 0.9).unwrap();
        assert!(matches!(s.feasible_hull(true), Err(Error::Capacity { .. })));
    }

    #[test]
    fn validation() {
        assert!(GameSpec::linear(1, 1.0, 1.0, 0.9, 0.1, 0.9).is_err());
        assert!(GameSpec::linear(2, 1.0, 0.0, 0.9, 0.1, 0.9).is_err());
        assert!(GameSpec::linear(2, 1.0, 1.0, 0.5, 0.1, 0.9).is_err());
        assert!(GameSpec::linear(2, 1.0, 1.0, 0.9, 0.5, 0.9).is_err());
        assert!(GameSpec::linear(2, 1.0, 1.0, 0.9, 0.1, 1.0).is_err());
        let bad_f = GameSpec::new(3, GainFamily::Concave { g: 1.0, f: vec![0.0, 1.0, 3.0] }, 1.0, 0.9, 0.1, 0.9);
        assert!(bad_f.is_err());
        assert!(Accuracy::new_allowing_boundary(1.0, 0.0).unwrap().1);
    }

    #[test]
    fn profile_index_roundtrip() {
        for i in 0..16 {
            assert_eq!(ActionProfile::from_index(i, 4).index(), i);
        }
        let r: ActionProfile = "100".parse().unwrap();
        assert_eq!(r.index(), 1);
        assert!("12".parse::<ActionProfile>().is_err());
    }
}
