//! Imperfect monitoring: the per-observation belief kernel, the public
//! monitor's signal distribution, private belief matrices and their
//! marginals, and seeded sampling.
//!
//! Every distribution in this model is a product of independent binary
//! observations, so [`SignalDistribution`] is stored factorized and only
//! expanded to a dense vector on request. Dense signal indices put the first
//! listed observation in the least significant bit; for the public monitor
//! that is firm 1.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Accuracy, ActionProfile, GameSpec};
use crate::rng;

/// Largest number of bits expanded into a dense distribution.
pub const MAX_DENSE_BITS: usize = 24;

/// Probability that an observation of a firm reads 0 ("not honest").
pub fn belief_kernel(disclosed: bool, acc: Accuracy) -> f64 {
    if disclosed {
        acc.epsilon
    } else {
        acc.alpha
    }
}

/// [`belief_kernel`] with the parameter ranges enforced; the perfect
/// monitoring limit `(alpha, epsilon) = (1, 0)` is rejected.
pub fn belief_kernel_checked(disclosed: bool, alpha: f64, epsilon: f64) -> Result<f64> {
    Ok(belief_kernel(disclosed, Accuracy::new(alpha, epsilon)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Observer {
    Monitor,
    Firm(usize),
    /// A uniformly chosen tester among several i.i.d. observers.
    RandomTester,
}

/// One binary observation: `observer` watching `subject`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Observation {
    pub observer: Observer,
    pub subject: usize,
}

/// Product distribution over independent binary observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalDistribution {
    bits: Vec<Observation>,
    p_zero: Vec<f64>,
}

impl SignalDistribution {
    pub fn from_parts(bits: Vec<Observation>, p_zero: Vec<f64>) -> Self {
        assert_eq!(bits.len(), p_zero.len());
        SignalDistribution { bits, p_zero }
    }

    pub fn bits(&self) -> &[Observation] {
        &self.bits
    }

    pub fn n_bits(&self) -> usize {
        self.bits.len()
    }

    /// `P(bit k = 0)`.
    pub fn bit_zero_prob(&self, k: usize) -> f64 {
        self.p_zero[k]
    }

    pub fn zero_probs(&self) -> &[f64] {
        &self.p_zero
    }

    /// Probability of a dense outcome index.
    pub fn prob(&self, index: usize) -> f64 {
        self.p_zero
            .iter()
            .enumerate()
            .map(|(k, &p0)| if (index >> k) & 1 == 0 { p0 } else { 1.0 - p0 })
            .product()
    }

    /// Dense probability vector of length `2^bits`.
    pub fn probs(&self) -> Result<Vec<f64>> {
        let k = self.n_bits();
        if k > MAX_DENSE_BITS {
            return Err(Error::Capacity {
                what: "bits in a dense signal distribution",
                limit: MAX_DENSE_BITS,
                requested: k,
            });
        }
        // doubling: each new observation becomes the next most significant bit
        let mut out = vec![1.0];
        for &p0 in &self.p_zero {
            let mut next = Vec::with_capacity(out.len() * 2);
            next.extend(out.iter().map(|v| v * p0));
            next.extend(out.iter().map(|v| v * (1.0 - p0)));
            out = next;
        }
        Ok(out)
    }

    fn same_support(&self, other: &Self) -> Result<()> {
        if self.bits != other.bits {
            return Err(Error::domain("distributions range over different observations"));
        }
        Ok(())
    }

    /// Largest per-observation difference of marginals.
    pub fn max_bit_gap(&self, other: &Self) -> Result<f64> {
        self.same_support(other)?;
        Ok(self
            .p_zero
            .iter()
            .zip(&other.p_zero)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Exact `max_b |p(b) - q(b)|`, without expanding the shared bits.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        self.same_support(other)?;
        let differing: Vec<usize> = (0..self.n_bits())
            .filter(|&k| self.p_zero[k] != other.p_zero[k])
            .collect();
        if differing.is_empty() {
            return Ok(0.0);
        }
        check_enumeration(differing.len())?;
        let shared: f64 = (0..self.n_bits())
            .filter(|k| !differing.contains(k))
            .map(|k| self.p_zero[k].max(1.0 - self.p_zero[k]))
            .product();
        let mut best = 0.0_f64;
        for x in 0..1usize << differing.len() {
            let (mut a, mut b) = (1.0, 1.0);
            for (pos, &k) in differing.iter().enumerate() {
                let zero = (x >> pos) & 1 == 0;
                a *= if zero { self.p_zero[k] } else { 1.0 - self.p_zero[k] };
                b *= if zero { other.p_zero[k] } else { 1.0 - other.p_zero[k] };
            }
            best = best.max((a - b).abs());
        }
        Ok(best * shared)
    }

    /// Inner product `<a - b, c - d>` of dense differences, computed on the
    /// factorized form.
    pub fn inner_of_differences(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<f64> {
        a.same_support(b)?;
        a.same_support(c)?;
        a.same_support(d)?;
        let n = a.n_bits();
        let varying: Vec<usize> = (0..n)
            .filter(|&k| {
                let p = a.p_zero[k];
                b.p_zero[k] != p || c.p_zero[k] != p || d.p_zero[k] != p
            })
            .collect();
        if varying.is_empty() {
            return Ok(0.0);
        }
        check_enumeration(varying.len())?;
        let shared: f64 = (0..n)
            .filter(|k| !varying.contains(k))
            .map(|k| {
                let p = a.p_zero[k];
                p * p + (1.0 - p) * (1.0 - p)
            })
            .product();
        let pick = |dist: &Self, k: usize, zero: bool| {
            if zero {
                dist.p_zero[k]
            } else {
                1.0 - dist.p_zero[k]
            }
        };
        let mut sum = 0.0;
        for x in 0..1usize << varying.len() {
            let (mut pa, mut pb, mut pc, mut pd) = (1.0, 1.0, 1.0, 1.0);
            for (pos, &k) in varying.iter().enumerate() {
                let zero = (x >> pos) & 1 == 0;
                pa *= pick(a, k, zero);
                pb *= pick(b, k, zero);
                pc *= pick(c, k, zero);
                pd *= pick(d, k, zero);
            }
            sum += (pa - pb) * (pc - pd);
        }
        Ok(sum * shared)
    }

    /// Mixture `(1 - w) self + w other`, dense.
    pub fn dense_mixture(&self, other: &Self, w: f64) -> Result<Vec<f64>> {
        self.same_support(other)?;
        let (p, q) = (self.probs()?, other.probs()?);
        Ok(p.iter().zip(&q).map(|(a, b)| (1.0 - w) * a + w * b).collect())
    }
}

fn check_enumeration(bits: usize) -> Result<()> {
    if bits > MAX_DENSE_BITS {
        return Err(Error::Capacity {
            what: "differing observation bits",
            limit: MAX_DENSE_BITS,
            requested: bits,
        });
    }
    Ok(())
}

/// The monitor's signal: one bit per firm, 1 meaning "believed honest".
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PublicSignal(pub Vec<bool>);

impl PublicSignal {
    pub fn from_index(index: usize, n: usize) -> Self {
        PublicSignal((0..n).map(|j| (index >> j) & 1 == 1).collect())
    }

    /// Firm 1 is the least significant bit.
    pub fn index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &b)| (b as usize) << j)
            .sum()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

/// Private beliefs: entry `(i, j)` is firm `i`'s belief about firm `j`.
/// The diagonal is unused and stored as `true`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrivateSignalMatrix {
    n: usize,
    beliefs: Vec<bool>,
}

impl PrivateSignalMatrix {
    pub fn new(n: usize, beliefs: Vec<Vec<bool>>) -> Self {
        assert_eq!(beliefs.len(), n);
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in beliefs.into_iter().enumerate() {
            assert_eq!(row.len(), n);
            flat.extend(row.into_iter().enumerate().map(|(j, b)| b || i == j));
        }
        PrivateSignalMatrix { n, beliefs: flat }
    }

    pub fn n_firms(&self) -> usize {
        self.n
    }

    pub fn get(&self, observer: usize, subject: usize) -> bool {
        self.beliefs[observer * self.n + subject]
    }

    /// Firm `observer`'s observations of the others, in firm order.
    pub fn row(&self, observer: usize) -> Vec<bool> {
        (0..self.n)
            .filter(|&j| j != observer)
            .map(|j| self.get(observer, j))
            .collect()
    }

    /// Row-major off-diagonal bits as a `0/1` string.
    pub fn flattened(&self) -> String {
        (0..self.n)
            .flat_map(|i| (0..self.n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| if self.get(i, j) { '1' } else { '0' })
            .collect()
    }
}

/// Factorized joint law of a private belief matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PrivateJoint {
    n: usize,
    p_zero: Vec<f64>,
}

impl PrivateJoint {
    /// `P(b_ij = 0)`; `None` on the diagonal.
    pub fn zero_prob(&self, observer: usize, subject: usize) -> Option<f64> {
        (observer != subject).then(|| self.p_zero[observer * self.n + subject])
    }

    pub fn prob(&self, m: &PrivateSignalMatrix) -> f64 {
        let mut p = 1.0;
        for i in 0..self.n {
            for j in (0..self.n).filter(|&j| j != i) {
                let p0 = self.p_zero[i * self.n + j];
                p *= if m.get(i, j) { 1.0 - p0 } else { p0 };
            }
        }
        p
    }
}

pub fn public_signal_distribution(spec: &GameSpec, r: &ActionProfile) -> SignalDistribution {
    public_distribution_with(spec.public_accuracy(), r)
}

/// Public distribution for an explicit accuracy (boundary values allowed).
pub fn public_distribution_with(acc: Accuracy, r: &ActionProfile) -> SignalDistribution {
    let bits = (0..r.len())
        .map(|j| Observation {
            observer: Observer::Monitor,
            subject: j,
        })
        .collect();
    let p_zero = r.iter().map(|d| belief_kernel(d, acc)).collect();
    SignalDistribution { bits, p_zero }
}

pub fn private_joint_distribution(spec: &GameSpec, r: &ActionProfile) -> PrivateJoint {
    let n = spec.n_firms;
    let acc = spec.private_accuracy();
    let mut p_zero = vec![0.0; n * n];
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            p_zero[i * n + j] = belief_kernel(r.get(j), acc);
        }
    }
    PrivateJoint { n, p_zero }
}

/// Joint law of the observations held by firms outside `excluded`
/// (each such firm observes every other firm, excluded or not).
pub fn marginal_excluding(
    spec: &GameSpec,
    r: &ActionProfile,
    excluded: &[usize],
) -> Result<SignalDistribution> {
    let n = spec.n_firms;
    if let Some(&bad) = excluded.iter().find(|&&i| i >= n) {
        return Err(Error::domain(format!("excluded firm {bad} out of range")));
    }
    let remaining: Vec<usize> = (0..n).filter(|k| !excluded.contains(k)).collect();
    if remaining.is_empty() {
        return Err(Error::domain("excluding every firm leaves no observations"));
    }
    let acc = spec.private_accuracy();
    let mut bits = Vec::new();
    let mut p_zero = Vec::new();
    for &k in &remaining {
        for l in (0..n).filter(|&l| l != k) {
            bits.push(Observation {
                observer: Observer::Firm(k),
                subject: l,
            });
            p_zero.push(belief_kernel(r.get(l), acc));
        }
    }
    Ok(SignalDistribution { bits, p_zero })
}

/// Marginals of the firms outside `pair` when `deviator` switches to each
/// of its other actions (exactly one with binary actions).
pub fn deviation_set(
    spec: &GameSpec,
    r: &ActionProfile,
    deviator: usize,
    pair: (usize, usize),
) -> Result<Vec<SignalDistribution>> {
    if deviator != pair.0 && deviator != pair.1 {
        return Err(Error::domain(format!(
            "deviator {deviator} is not in the excluded pair {pair:?}"
        )));
    }
    Ok(vec![marginal_excluding(spec, &r.flipped(deviator), &[pair.0, pair.1])?])
}

/// Law of one belief bit about `suspect` taken from a uniformly chosen
/// tester outside `excluded`. Testers' bits are i.i.d., so this is the
/// kernel for the suspect's action.
pub fn cross_observation_reduction(
    spec: &GameSpec,
    r: &ActionProfile,
    suspect: usize,
    excluded: &[usize],
) -> Result<SignalDistribution> {
    let testers = testers_for(spec.n_firms, suspect, excluded)?;
    let p0 = testers
        .iter()
        .map(|_| belief_kernel(r.get(suspect), spec.private_accuracy()))
        .sum::<f64>()
        / testers.len() as f64;
    Ok(SignalDistribution {
        bits: vec![Observation {
            observer: Observer::RandomTester,
            subject: suspect,
        }],
        p_zero: vec![p0],
    })
}

/// Firms eligible to testify about `suspect`.
pub fn testers_for(n: usize, suspect: usize, excluded: &[usize]) -> Result<Vec<usize>> {
    if suspect >= n {
        return Err(Error::domain(format!("suspect {suspect} out of range")));
    }
    if excluded.contains(&suspect) {
        return Err(Error::domain("the suspect cannot be in the excluded set"));
    }
    let testers: Vec<usize> = (0..n)
        .filter(|&k| k != suspect && !excluded.contains(&k))
        .collect();
    if testers.is_empty() {
        return Err(Error::domain(format!("no tester left to observe firm {suspect}")));
    }
    Ok(testers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MonitoringMode {
    Public,
    Private,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SignalRealization {
    Public(PublicSignal),
    Private(PrivateSignalMatrix),
}

/// Monitor's signal in `period`; observation of firm `j` is drawn from the
/// substream `(seed, period, MONITOR_STREAM + j)`.
pub fn sample_public(acc: Accuracy, r: &ActionProfile, seed: u64, period: u64) -> PublicSignal {
    PublicSignal(
        (0..r.len())
            .map(|j| {
                let mut g = rng::substream(seed, period, rng::MONITOR_STREAM + j as u64);
                rng::uniform(&mut g) >= belief_kernel(r.get(j), acc)
            })
            .collect(),
    )
}

/// Private beliefs in `period`; firm `i`'s row comes from substream
/// `(seed, period, i)` in subject order.
pub fn sample_private(acc: Accuracy, r: &ActionProfile, seed: u64, period: u64) -> PrivateSignalMatrix {
    let n = r.len();
    let rows = (0..n)
        .map(|i| {
            let mut g = rng::substream(seed, period, i as u64);
            (0..n)
                .map(|j| j == i || rng::uniform(&mut g) >= belief_kernel(r.get(j), acc))
                .collect()
        })
        .collect();
    PrivateSignalMatrix::new(n, rows)
}

pub fn sample_signals(
    spec: &GameSpec,
    r: &ActionProfile,
    seed: u64,
    period: u64,
    mode: MonitoringMode,
) -> SignalRealization {
    match mode {
        MonitoringMode::Public => {
            SignalRealization::Public(sample_public(spec.public_accuracy(), r, seed, period))
        }
        MonitoringMode::Private => {
            SignalRealization::Private(sample_private(spec.private_accuracy(), r, seed, period))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize) -> GameSpec {
        GameSpec::linear(n, 1.0, 1.0, 0.9, 0.1, 0.9).unwrap()
    }

    fn profile(s: &str) -> ActionProfile {
        s.parse().unwrap()
    }

    #[test]
    fn kernel_values() {
        assert_eq!(belief_kernel_checked(true, 0.9, 0.1).unwrap(), 0.1);
        assert_eq!(belief_kernel_checked(false, 0.9, 0.1).unwrap(), 0.9);
        assert!(belief_kernel_checked(true, 1.0, 0.0).is_err());
    }

    #[test]
    fn public_two_firm_tables() {
        let s = spec(2);
        let p = public_signal_distribution(&s, &profile("11")).probs().unwrap();
        // index = b1 + 2 b2
        let expect = [0.01, 0.09, 0.09, 0.81];
        for (a, b) in p.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        let p = public_signal_distribution(&s, &profile("01")).probs().unwrap();
        let expect = [0.09, 0.01, 0.81, 0.09];
        for (a, b) in p.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_matches_pointwise() {
        let d = public_signal_distribution(&spec(4), &profile("1010"));
        let dense = d.probs().unwrap();
        for (i, &p) in dense.iter().enumerate() {
            assert!((p - d.prob(i)).abs() < 1e-15);
        }
        assert!((dense.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn private_joint_entries() {
        let s = spec(3);
        let j = private_joint_distribution(&s, &profile("100"));
        assert_eq!(j.zero_prob(1, 0), Some(0.1));
        assert_eq!(j.zero_prob(0, 1), Some(0.9));
        assert_eq!(j.zero_prob(0, 2), Some(0.9));
        assert_eq!(j.zero_prob(1, 1), None);
        let all_ones = PrivateSignalMatrix::new(3, vec![vec![true; 3]; 3]);
        let j = private_joint_distribution(&s, &ActionProfile::all(3, true));
        assert!((j.prob(&all_ones) - 0.9f64.powi(6)).abs() < 1e-15);
    }

    #[test]
    fn marginal_layout_and_errors() {
        let s = spec(3);
        let m = marginal_excluding(&s, &ActionProfile::all(3, true), &[2]).unwrap();
        assert_eq!(m.n_bits(), 4);
        assert_eq!(m.bits()[0], Observation { observer: Observer::Firm(0), subject: 1 });
        assert_eq!(m.bits()[3], Observation { observer: Observer::Firm(1), subject: 2 });
        assert!(marginal_excluding(&s, &ActionProfile::all(3, true), &[0, 1, 2]).is_err());
    }

    #[test]
    fn deviation_sets() {
        let s = spec(3);
        let all = ActionProfile::all(3, true);
        let q = deviation_set(&s, &all, 0, (0, 1)).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q[0], marginal_excluding(&s, &profile("011"), &[0, 1]).unwrap());
        let p = marginal_excluding(&s, &all, &[0, 1]).unwrap();
        assert!(q[0].sup_distance(&p).unwrap() > 0.1);
        assert!(deviation_set(&s, &all, 2, (0, 1)).is_err());
    }

    #[test]
    fn cross_observation() {
        let d = cross_observation_reduction(&spec(3), &ActionProfile::all(3, true), 0, &[2]).unwrap();
        assert_eq!(d.bit_zero_prob(0), 0.1);
        let d = cross_observation_reduction(&spec(4), &profile("1011"), 1, &[]).unwrap();
        assert_eq!(d.bit_zero_prob(0), 0.9);
        assert!(cross_observation_reduction(&spec(3), &profile("111"), 0, &[1, 2]).is_err());
        assert!(cross_observation_reduction(&spec(3), &profile("111"), 0, &[0]).is_err());
    }

    #[test]
    fn sampling_replays() {
        let s = spec(3);
        let r = profile("110");
        for mode in [MonitoringMode::Public, MonitoringMode::Private] {
            let a = sample_signals(&s, &r, 99, 5, mode);
            let b = sample_signals(&s, &r, 99, 5, mode);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn near_half_alpha_is_valid() {
        let acc = Accuracy::new(0.5 + 1e-9, 0.1).unwrap();
        let r = ActionProfile::all(1, false);
        let zeros = (0..20_000)
            .filter(|&t| !sample_public(acc, &r, 1, t).bits()[0])
            .count();
        let f = zeros as f64 / 20_000.0;
        assert!((f - 0.5).abs() < 0.02, "{f}");
    }

    #[test]
    fn flattened_matrix() {
        let m = PrivateSignalMatrix::new(2, vec![vec![true, false], vec![true, true]]);
        assert_eq!(m.flattened(), "01");
        assert_eq!(m.row(0), vec![false]);
    }
}
