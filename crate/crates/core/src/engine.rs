//! Repeated-game simulation: strategies, episodes under public or private
//! monitoring, the promise-keeping automaton and Monte Carlo replication.
//!
//! Within a period the order is: actions, signals, then (private monitoring
//! only) a communication round whose messages join the public history.
//! Stage payoffs are the ex-ante payoffs of the action profile.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{self, fmt_num, ContinuationMap, Direction};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameSpec};
use crate::geometry;
use crate::monitoring::{self, MonitoringMode, PrivateSignalMatrix, PublicSignal, SignalRealization};
use crate::rng;

/// A report: the sender's belief bits about the other firms in firm order,
/// or empty.
pub type Message = Vec<bool>;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PublicHistory {
    /// Public-monitoring signals, one per past period.
    pub signals: Vec<PublicSignal>,
    /// Communication rounds, one per past period (private monitoring).
    pub messages: Vec<Vec<Message>>,
}

/// What one firm alone has seen.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PrivateHistory {
    pub actions: Vec<bool>,
    /// Own belief rows (private monitoring only).
    pub signals: Vec<Vec<bool>>,
}

pub trait Strategy: Send {
    /// Action for `period` given histories up to the previous period:
    /// 1 discloses, 0 conceals.
    fn next_action(
        &mut self,
        firm: usize,
        period: usize,
        public: &PublicHistory,
        private: &PrivateHistory,
    ) -> Result<u8>;

    /// Message for the current communication round; truthful by default.
    fn next_message(&mut self, _firm: usize, private: &PrivateHistory, _public: &PublicHistory) -> Message {
        private.signals.last().cloned().unwrap_or_default()
    }

    /// Whether actions depend on the public history only.
    fn is_public(&self) -> bool {
        false
    }

    /// Current promised payoff, for strategies that keep one.
    fn promise(&self) -> Option<Vec<f64>> {
        None
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysDisclose;

impl Strategy for AlwaysDisclose {
    fn next_action(&mut self, _: usize, _: usize, _: &PublicHistory, _: &PrivateHistory) -> Result<u8> {
        Ok(1)
    }
    fn is_public(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysConceal;

impl Strategy for AlwaysConceal {
    fn next_action(&mut self, _: usize, _: usize, _: &PublicHistory, _: &PrivateHistory) -> Result<u8> {
        Ok(0)
    }
    fn is_public(&self) -> bool {
        true
    }
}

/// Discloses until `threshold` cumulative "0" observations about any firm
/// have appeared publicly, then conceals forever. Under public monitoring
/// the monitor's signals are counted; under private monitoring the
/// reported beliefs are. `None` never triggers.
#[derive(Debug, Clone, Default)]
pub struct SignalTrigger {
    pub threshold: Option<u64>,
    seen_signals: usize,
    seen_rounds: usize,
    zeros: u64,
}

impl SignalTrigger {
    pub fn new(threshold: Option<u64>) -> Self {
        SignalTrigger {
            threshold,
            ..Default::default()
        }
    }

    pub fn triggered(&self) -> bool {
        self.threshold.is_some_and(|k| self.zeros >= k)
    }
}

impl Strategy for SignalTrigger {
    fn next_action(&mut self, _: usize, _: usize, public: &PublicHistory, _: &PrivateHistory) -> Result<u8> {
        for s in &public.signals[self.seen_signals..] {
            self.zeros += s.bits().iter().filter(|b| !**b).count() as u64;
        }
        self.seen_signals = public.signals.len();
        for round in &public.messages[self.seen_rounds..] {
            self.zeros += round.iter().flatten().filter(|b| !**b).count() as u64;
        }
        self.seen_rounds = public.messages.len();
        Ok(u8::from(!self.triggered()))
    }

    fn is_public(&self) -> bool {
        true
    }
}

/// Wraps a strategy so that its message is always the latest own belief
/// row, verbatim (empty before any signal).
pub struct TruthfulReport<S>(pub S);

pub fn truthful_report_strategy<S: Strategy>(inner: S) -> TruthfulReport<S> {
    TruthfulReport(inner)
}

impl<S: Strategy> Strategy for TruthfulReport<S> {
    fn next_action(&mut self, firm: usize, period: usize, public: &PublicHistory, private: &PrivateHistory) -> Result<u8> {
        self.0.next_action(firm, period, public, private)
    }
    fn next_message(&mut self, _: usize, private: &PrivateHistory, _: &PublicHistory) -> Message {
        private.signals.last().cloned().unwrap_or_default()
    }
    fn is_public(&self) -> bool {
        self.0.is_public()
    }
    fn promise(&self) -> Option<Vec<f64>> {
        self.0.promise()
    }
}

/// `{always_disclose, always_conceal, signal_trigger(k)}`.
pub fn baseline_strategies(k: Option<u64>) -> (AlwaysDisclose, AlwaysConceal, SignalTrigger) {
    (AlwaysDisclose, AlwaysConceal, SignalTrigger::new(k))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodRecord {
    pub period: usize,
    pub actions: ActionProfile,
    pub signal: SignalRealization,
    pub messages: Vec<Message>,
    pub payoffs: Vec<f64>,
    pub promise: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpisodeTrace {
    pub n_firms: usize,
    pub mode: MonitoringMode,
    pub discount: f64,
    pub periods: Vec<PeriodRecord>,
}

impl EpisodeTrace {
    pub fn horizon(&self) -> usize {
        self.periods.len()
    }

    /// `(1 - delta) sum_t delta^t u_i(t)` over the recorded periods.
    pub fn discounted_average(&self) -> Vec<f64> {
        discounted(self.discount, self.periods.iter().map(|p| p.payoffs.as_slice()), self.n_firms)
    }

    /// Bound on the bias from stopping at the horizon.
    pub fn truncation_bound(&self) -> f64 {
        let max_u = self
            .periods
            .iter()
            .flat_map(|p| p.payoffs.iter())
            .fold(0.0_f64, |m, u| m.max(u.abs()));
        truncation_bound(self.discount, self.horizon(), max_u)
    }

    /// CSV with one row per period. The signal column is `signal_index`
    /// (firm 1 least significant) under public monitoring and `beliefs`
    /// (row-major off-diagonal bits) under private monitoring.
    pub fn to_csv(&self) -> String {
        let n = self.n_firms;
        let with_promise = self.periods.iter().any(|p| p.promise.is_some());
        let mut cols = vec!["period".to_string()];
        cols.extend((1..=n).map(|i| format!("action_{i}")));
        cols.push(match self.mode {
            MonitoringMode::Public => "signal_index".into(),
            MonitoringMode::Private => "beliefs".into(),
        });
        cols.extend((1..=n).map(|i| format!("message_{i}")));
        cols.extend((1..=n).map(|i| format!("payoff_{i}")));
        if with_promise {
            cols.extend((1..=n).map(|i| format!("promise_{i}")));
        }
        let mut out = cols.join(",");
        out.push('\n');
        for p in &self.periods {
            let mut row = vec![p.period.to_string()];
            row.extend(p.actions.iter().map(|a| u8::from(a).to_string()));
            row.push(match &p.signal {
                SignalRealization::Public(s) => s.index().to_string(),
                SignalRealization::Private(m) => m.flattened(),
            });
            row.extend((0..n).map(|i| p.messages.get(i).map_or(String::new(), |m| bits_str(m))));
            row.extend(p.payoffs.iter().map(|u| fmt_num(*u)));
            if with_promise {
                match &p.promise {
                    Some(v) => row.extend(v.iter().map(|x| fmt_num(*x))),
                    None => row.extend((0..n).map(|_| String::new())),
                }
            }
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses [`to_csv`](Self::to_csv) output back into a trace.
    pub fn from_csv(text: &str, discount: f64) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::Parse("empty trace".into()))?
            .split(',')
            .collect();
        let n = header.iter().filter(|h| h.starts_with("action_")).count();
        let mode = if header.contains(&"signal_index") {
            MonitoringMode::Public
        } else if header.contains(&"beliefs") {
            MonitoringMode::Private
        } else {
            return Err(Error::Parse("trace header has no signal column".into()));
        };
        let with_promise = header.iter().any(|h| h.starts_with("promise_"));
        let bad = |line: usize, what: &str| Error::Parse(format!("trace line {line}: bad {what}"));
        let mut periods = Vec::new();
        for (k, line) in lines.enumerate() {
            let line_no = k + 2;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != header.len() {
                return Err(bad(line_no, "field count"));
            }
            let period = f[0].parse().map_err(|_| bad(line_no, "period"))?;
            let actions = ActionProfile::new(
                f[1..=n]
                    .iter()
                    .map(|a| match *a {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        _ => Err(bad(line_no, "action")),
                    })
                    .collect::<Result<_>>()?,
            );
            let sig = f[n + 1];
            let signal = match mode {
                MonitoringMode::Public => SignalRealization::Public(PublicSignal::from_index(
                    sig.parse().map_err(|_| bad(line_no, "signal"))?,
                    n,
                )),
                MonitoringMode::Private => {
                    let bits = parse_bits(sig).ok_or_else(|| bad(line_no, "beliefs"))?;
                    if bits.len() != n * (n - 1) {
                        return Err(bad(line_no, "beliefs"));
                    }
                    let mut it = bits.into_iter();
                    let rows = (0..n)
                        .map(|i| (0..n).map(|j| j == i || it.next().unwrap()).collect())
                        .collect();
                    SignalRealization::Private(PrivateSignalMatrix::new(n, rows))
                }
            };
            let messages = f[n + 2..2 * n + 2]
                .iter()
                .map(|m| parse_bits(m).ok_or_else(|| bad(line_no, "message")))
                .collect::<Result<Vec<_>>>()?;
            let messages = if messages.iter().all(Vec::is_empty) && mode == MonitoringMode::Public {
                Vec::new()
            } else {
                messages
            };
            let nums = |slice: &[&str]| -> Result<Vec<f64>> {
                slice
                    .iter()
                    .map(|x| x.parse::<f64>().map_err(|_| bad(line_no, "number")))
                    .collect()
            };
            let payoffs = nums(&f[2 * n + 2..3 * n + 2])?;
            let promise = if with_promise && !f[3 * n + 2].is_empty() {
                Some(nums(&f[3 * n + 2..4 * n + 2])?)
            } else {
                None
            };
            periods.push(PeriodRecord {
                period,
                actions,
                signal,
                messages,
                payoffs,
                promise,
            });
        }
        Ok(EpisodeTrace {
            n_firms: n,
            mode,
            discount,
            periods,
        })
    }
}

fn bits_str(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

fn discounted<'a>(delta: f64, payoffs: impl Iterator<Item = &'a [f64]>, n: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n];
    let mut w = 1.0 - delta;
    for u in payoffs {
        for (a, x) in acc.iter_mut().zip(u) {
            *a += w * x;
        }
        w *= delta;
    }
    acc
}

/// `delta^T max|u| / (1 - delta)`.
pub fn truncation_bound(delta: f64, horizon: usize, max_abs_payoff: f64) -> f64 {
    delta.powi(horizon as i32) * max_abs_payoff / (1.0 - delta)
}

/// Plays `horizon` periods. Signals in period `t` come from the substreams
/// keyed by `(seed, t)`, so a trace depends only on the seed and the
/// strategies.
pub fn run_episode(
    spec: &GameSpec,
    strategies: &mut [Box<dyn Strategy>],
    horizon: usize,
    seed: u64,
    mode: MonitoringMode,
) -> Result<EpisodeTrace> {
    let mut periods = Vec::with_capacity(horizon);
    simulate(spec, strategies, horizon, seed, mode, |rec| periods.push(rec))?;
    Ok(EpisodeTrace {
        n_firms: spec.n_firms,
        mode,
        discount: spec.discount,
        periods,
    })
}

fn simulate(
    spec: &GameSpec,
    strategies: &mut [Box<dyn Strategy>],
    horizon: usize,
    seed: u64,
    mode: MonitoringMode,
    mut sink: impl FnMut(PeriodRecord),
) -> Result<()> {
    let n = spec.n_firms;
    if horizon == 0 {
        return Err(Error::domain("horizon must be at least one period"));
    }
    if strategies.len() != n {
        return Err(Error::domain(format!("{} strategies for {n} firms", strategies.len())));
    }
    let mut public = PublicHistory::default();
    let mut private: Vec<PrivateHistory> = vec![PrivateHistory::default(); n];
    for t in 0..horizon {
        let mut bits = Vec::with_capacity(n);
        for (i, s) in strategies.iter_mut().enumerate() {
            let a = s.next_action(i, t, &public, &private[i])?;
            if a > 1 {
                return Err(Error::Protocol {
                    firm: i + 1,
                    period: t,
                    message: format!("action {a} is neither 0 nor 1"),
                });
            }
            bits.push(a == 1);
        }
        let promise = strategies[0].promise();
        let r = ActionProfile::new(bits);
        let signal = monitoring::sample_signals(spec, &r, seed, t as u64, mode);
        for (i, h) in private.iter_mut().enumerate() {
            h.actions.push(r.get(i));
        }
        let mut messages = Vec::new();
        match &signal {
            SignalRealization::Public(s) => public.signals.push(s.clone()),
            SignalRealization::Private(m) => {
                for (i, h) in private.iter_mut().enumerate() {
                    h.signals.push(m.row(i));
                }
                for (i, s) in strategies.iter_mut().enumerate() {
                    let msg = s.next_message(i, &private[i], &public);
                    if !msg.is_empty() && msg.len() != n - 1 {
                        return Err(Error::Protocol {
                            firm: i + 1,
                            period: t,
                            message: format!("message has {} bits, expected {} or none", msg.len(), n - 1),
                        });
                    }
                    messages.push(msg);
                }
                public.messages.push(messages.clone());
            }
        }
        sink(PeriodRecord {
            period: t,
            payoffs: spec.profile_payoff(&r),
            actions: r,
            signal,
            messages,
            promise,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    pub seeds: Vec<u64>,
    pub replica_means: Vec<Vec<f64>>,
    pub truncation_bound: f64,
}

impl MonteCarloSummary {
    pub fn to_csv(&self) -> String {
        let n = self.mean.len();
        let mut out = String::from("replica,seed");
        for i in 1..=n {
            out.push_str(&format!(",payoff_{i}"));
        }
        out.push('\n');
        for (k, (seed, m)) in self.seeds.iter().zip(&self.replica_means).enumerate() {
            out.push_str(&format!("{k},{seed}"));
            for x in m {
                out.push_str(&format!(",{}", fmt_num(*x)));
            }
            out.push('\n');
        }
        out
    }
}

/// Runs `replicas` independent episodes in parallel. `make` builds fresh
/// strategies for a replica. Replica `k` uses seed
/// `replica_seed(base_seed, k)` and results are combined in replica order,
/// so the summary is bit-for-bit reproducible.
pub fn monte_carlo<F>(
    spec: &GameSpec,
    make: F,
    replicas: usize,
    horizon: usize,
    base_seed: u64,
    mode: MonitoringMode,
) -> Result<MonteCarloSummary>
where
    F: Fn(usize) -> Vec<Box<dyn Strategy>> + Sync,
{
    if replicas == 0 {
        return Err(Error::domain("at least one replica is required"));
    }
    let n = spec.n_firms;
    let seeds: Vec<u64> = (0..replicas as u64).map(|k| rng::replica_seed(base_seed, k)).collect();
    let results: Vec<Result<(Vec<f64>, f64)>> = seeds
        .par_iter()
        .enumerate()
        .map(|(k, &seed)| {
            let mut strategies = make(k);
            let mut acc = vec![0.0; n];
            let mut w = 1.0 - spec.discount;
            let mut max_u = 0.0_f64;
            simulate(spec, &mut strategies, horizon, seed, mode, |rec| {
                for (a, x) in acc.iter_mut().zip(&rec.payoffs) {
                    *a += w * x;
                    max_u = max_u.max(x.abs());
                }
                w *= spec.discount;
            })?;
            Ok((acc, max_u))
        })
        .collect();
    let mut replica_means = Vec::with_capacity(replicas);
    let mut max_u = 0.0_f64;
    for r in results {
        let (m, u) = r?;
        replica_means.push(m);
        max_u = max_u.max(u);
    }
    let k = replicas as f64;
    let mean: Vec<f64> = (0..n)
        .map(|i| replica_means.iter().map(|m| m[i]).sum::<f64>() / k)
        .collect();
    let std_error = (0..n)
        .map(|i| {
            if replicas < 2 {
                return 0.0;
            }
            let var = replica_means.iter().map(|m| (m[i] - mean[i]).powi(2)).sum::<f64>() / (k - 1.0);
            (var / k).sqrt()
        })
        .collect();
    Ok(MonteCarloSummary {
        mean,
        std_error,
        seeds,
        replica_means,
        truncation_bound: truncation_bound(spec.discount, horizon, max_u),
    })
}

/// Snapshot of the automaton at the start of a period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PromiseState {
    pub v: Vec<f64>,
    pub direction: Direction,
    pub action: ActionProfile,
    /// Normalized continuations shifted so that their mean is `v - u(r)`.
    pub gamma_bar: Vec<Vec<f64>>,
}

impl PromiseState {
    /// `v - (1 - delta) u(r) - delta E[gamma]`, with the actual
    /// continuations `gamma(b) = v + ((1 - delta)/delta) gamma_bar(b)`.
    pub fn recursion_residual(&self, spec: &GameSpec) -> Result<Vec<f64>> {
        let delta = spec.discount;
        let probs = monitoring::public_signal_distribution(spec, &self.action).probs()?;
        let u = spec.profile_payoff(&self.action);
        let scale = (1.0 - delta) / delta;
        Ok((0..self.v.len())
            .map(|i| {
                let eg: f64 = probs
                    .iter()
                    .zip(&self.gamma_bar)
                    .map(|(p, g)| p * (self.v[i] + scale * g[i]))
                    .sum();
                self.v[i] - (1.0 - delta) * u[i] - delta * eg
            })
            .collect())
    }
}

/// Public strategy that keeps a promised payoff `v` and decomposes it each
/// period with the `k*`-maximizing action for a fixed direction.
///
/// After signal `b` the promise moves to the continuation
/// `v + ((1 - delta)/delta) gamma_bar(b)`. The canonical map has zero mean,
/// so it is shifted by `v - u(r)`; the shift leaves every incentive
/// constraint unchanged and makes the recursion identity exact. If the new
/// promise leaves the individually rational feasible set the automaton
/// stops with [`Error::DiscountTooSmall`].
#[derive(Debug, Clone)]
pub struct PromiseAutomaton {
    spec: Arc<GameSpec>,
    direction: Direction,
    action: ActionProfile,
    map: Arc<ContinuationMap>,
    /// Outward facets `(normal, offset)` of the clipped feasible set.
    facets: Arc<Vec<(Vec<f64>, f64)>>,
    v0: Vec<f64>,
    v: Vec<f64>,
    observed: Vec<usize>,
    seen: usize,
}

/// Containment slack for promises on the boundary of the feasible set.
const HULL_TOL: f64 = 1e-9;

impl PromiseAutomaton {
    pub fn new(spec: &GameSpec, v0: Vec<f64>, direction: Direction) -> Result<Self> {
        let n = spec.n_firms;
        if v0.len() != n || direction.dim() != n {
            return Err(Error::domain("promise and direction need one entry per firm"));
        }
        let hull = spec.feasible_hull(true)?;
        let facets = if n == 2 {
            let poly = hull.polygon().expect("planar");
            geometry::edge_halfplanes(&poly)
                .into_iter()
                .map(|(nrm, k)| (nrm.to_vec(), k))
                .collect()
        } else {
            geometry::facets(&hull.vertices, 1e-9)
        };
        let ks = decomposition::k_star(spec, &direction)?;
        let automaton = PromiseAutomaton {
            spec: Arc::new(spec.clone()),
            direction,
            action: ks.best_action,
            map: Arc::new(ks.map),
            facets: Arc::new(facets),
            v: v0.clone(),
            v0,
            observed: Vec::new(),
            seen: 0,
        };
        if !automaton.inside(&automaton.v) {
            return Err(Error::domain(format!(
                "initial promise {:?} lies outside the individually rational feasible set",
                automaton.v
            )));
        }
        Ok(automaton)
    }

    fn inside(&self, v: &[f64]) -> bool {
        self.facets
            .iter()
            .all(|(nrm, k)| nrm.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() <= k + HULL_TOL)
    }

    pub fn action(&self) -> &ActionProfile {
        &self.action
    }

    pub fn map(&self) -> &ContinuationMap {
        &self.map
    }

    fn shifted(&self, v: &[f64]) -> Vec<Vec<f64>> {
        let u = self.spec.profile_payoff(&self.action);
        let mean = self
            .map
            .expected(&self.spec, &self.action)
            .expect("map was built for this game");
        self.map
            .gamma_bar
            .iter()
            .map(|g| {
                g.iter()
                    .enumerate()
                    .map(|(i, x)| x - mean[i] + v[i] - u[i])
                    .collect()
            })
            .collect()
    }

    pub fn state(&self) -> PromiseState {
        PromiseState {
            v: self.v.clone(),
            direction: self.direction.clone(),
            action: self.action.clone(),
            gamma_bar: self.shifted(&self.v),
        }
    }

    fn advance(&self, v: &[f64], b: usize, delta: f64) -> Vec<f64> {
        let scale = (1.0 - delta) / delta;
        let g = &self.shifted(v)[b];
        v.iter().zip(g).map(|(x, y)| x + scale * y).collect()
    }

    /// Applies the signal observed at the end of `period`.
    pub fn observe(&mut self, period: usize, signal_index: usize) -> Result<PromiseState> {
        let next = self.advance(&self.v, signal_index, self.spec.discount);
        self.observed.push(signal_index);
        if !self.inside(&next) {
            return Err(Error::DiscountTooSmall {
                period,
                min_delta: self.smallest_feasible_discount(),
            });
        }
        self.v = next;
        Ok(self.state())
    }

    /// Smallest discount factor under which replaying the observed signals
    /// from `v0` keeps every promise inside; 1 when none below 1 does.
    fn smallest_feasible_discount(&self) -> f64 {
        let ok = |delta: f64| {
            let mut v = self.v0.clone();
            for &b in &self.observed {
                v = self.advance(&v, b, delta);
                if !self.inside(&v) {
                    return false;
                }
            }
            true
        };
        let (mut lo, mut hi) = (self.spec.discount, 1.0 - 1e-12);
        if !ok(hi) {
            return 1.0;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

impl Strategy for PromiseAutomaton {
    fn next_action(&mut self, firm: usize, _: usize, public: &PublicHistory, _: &PrivateHistory) -> Result<u8> {
        while self.seen < public.signals.len() {
            let idx = public.signals[self.seen].index();
            self.observe(self.seen, idx)?;
            self.seen += 1;
        }
        Ok(u8::from(self.action.get(firm)))
    }

    fn is_public(&self) -> bool {
        true
    }

    fn promise(&self) -> Option<Vec<f64>> {
        Some(self.v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, delta: f64) -> GameSpec {
        GameSpec::linear(n, 3.0, 1.0, 0.9, 0.1, delta).unwrap()
    }

    fn all<S: Strategy + Clone + 'static>(s: S, n: usize) -> Vec<Box<dyn Strategy>> {
        (0..n).map(|_| Box::new(s.clone()) as Box<dyn Strategy>).collect()
    }

    #[test]
    fn constant_strategies() {
        let s = spec(3, 0.9);
        let t = run_episode(&s, &mut all(AlwaysDisclose, 3), 3, 1, MonitoringMode::Public).unwrap();
        let c3 = s.cooperator_payoff(3).unwrap();
        assert!(t.periods.iter().all(|p| p.payoffs == vec![c3; 3]));
        let t = run_episode(&s, &mut all(AlwaysConceal, 3), 5, 1, MonitoringMode::Private).unwrap();
        assert!(t.discounted_average().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn invalid_action_is_a_protocol_error() {
        struct Bad;
        impl Strategy for Bad {
            fn next_action(&mut self, _: usize, _: usize, _: &PublicHistory, _: &PrivateHistory) -> Result<u8> {
                Ok(2)
            }
        }
        let mut st: Vec<Box<dyn Strategy>> = vec![Box::new(AlwaysDisclose), Box::new(Bad)];
        let e = run_episode(&spec(2, 0.9), &mut st, 2, 0, MonitoringMode::Public).unwrap_err();
        assert!(matches!(e, Error::Protocol { firm: 2, period: 0, .. }));
    }

    #[test]
    fn csv_round_trip() {
        for mode in [MonitoringMode::Public, MonitoringMode::Private] {
            let s = spec(3, 0.95);
            let t = run_episode(&s, &mut all(SignalTrigger::new(Some(3)), 3), 20, 7, mode).unwrap();
            let back = EpisodeTrace::from_csv(&t.to_csv(), s.discount).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn promise_automaton_halts_when_impatient() {
        let s = spec(2, 0.5);
        let a = PromiseAutomaton::new(&s, vec![2.0, 2.0], Direction::new(vec![1.0, 1.0]).unwrap()).unwrap();
        let mut st: Vec<Box<dyn Strategy>> = vec![Box::new(a.clone()), Box::new(a)];
        let e = run_episode(&s, &mut st, 200, 3, MonitoringMode::Public).unwrap_err();
        assert!(matches!(e, Error::DiscountTooSmall { .. }));
    }

    #[test]
    fn single_replica_matches_episode() {
        let s = spec(2, 0.9);
        let mc = monte_carlo(&s, |_| all(SignalTrigger::new(Some(2)), 2), 1, 50, 11, MonitoringMode::Public).unwrap();
        let t = run_episode(&s, &mut all(SignalTrigger::new(Some(2)), 2), 50, mc.seeds[0], MonitoringMode::Public).unwrap();
        assert_eq!(mc.mean, t.discounted_average());
        assert_eq!(mc.std_error, vec![0.0, 0.0]);
    }
}
