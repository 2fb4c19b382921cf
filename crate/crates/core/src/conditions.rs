//! Informativeness conditions behind the two folk theorems: individual and
//! pairwise full rank under public monitoring, and the three
//! distinguishability conditions (C1 to C3) under private monitoring with
//! communication.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameSpec, MAX_ENUMERATED_FIRMS};
use crate::linalg;
use crate::monitoring::{self, SignalDistribution};

/// Relative pivot threshold for numeric rank.
pub const RANK_TOL: f64 = 1e-9;
/// Sup-norm threshold below which two distributions count as equal.
pub const DIST_TOL: f64 = 1e-9;
/// Cosine above `1 - COLLINEAR_TOL` counts as positively collinear.
pub const COLLINEAR_TOL: f64 = 1e-9;

/// Signal probabilities, one row per probed action.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignalMatrix {
    pub rows: Vec<Vec<f64>>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl SignalMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        SignalMatrix {
            row_labels: (0..rows.len()).map(|r| r.to_string()).collect(),
            col_labels: (0..cols).map(|c| c.to_string()).collect(),
            rows,
        }
    }

    /// Public-signal matrix of `firm`: rows are its two actions (conceal,
    /// disclose) with everybody else at `profile`.
    pub fn public_for_firm(spec: &GameSpec, firm: usize, profile: &ActionProfile) -> Result<Self> {
        check_public_size(spec)?;
        check_firm(spec, firm)?;
        let n = spec.n_firms;
        let mut rows = Vec::with_capacity(2);
        let mut row_labels = Vec::with_capacity(2);
        for action in [false, true] {
            let r = profile.with(firm, action);
            rows.push(monitoring::public_signal_distribution(spec, &r).probs()?);
            row_labels.push(format!("r{}={}", firm + 1, action as u8));
        }
        let col_labels = (0..1usize << n)
            .map(|b| monitoring::PublicSignal::from_index(b, n))
            .map(|s| s.bits().iter().map(|&x| if x { '1' } else { '0' }).collect())
            .collect();
        Ok(SignalMatrix {
            rows,
            row_labels,
            col_labels,
        })
    }

    pub fn stacked(mut self, other: SignalMatrix) -> Self {
        self.rows.extend(other.rows);
        self.row_labels.extend(other.row_labels);
        self
    }

    /// Index pairs of rows that coincide within `tol`.
    pub fn duplicate_rows(&self, tol: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.rows.len() {
            for b in a + 1..self.rows.len() {
                let same = self.rows[a]
                    .iter()
                    .zip(&self.rows[b])
                    .all(|(x, y)| (x - y).abs() <= tol);
                if same {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Rank by partial-pivoting elimination; a pivot counts iff it exceeds
/// `tol` times the largest absolute entry.
pub fn numeric_rank(m: &SignalMatrix, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::domain("rank tolerance must be positive"));
    }
    if m.rows.is_empty() || m.rows[0].is_empty() {
        return Err(Error::domain("rank of an empty matrix"));
    }
    Ok(linalg::row_rank(&m.rows, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConditionId {
    #[serde(rename = "IFR")]
    IndividualFullRank,
    #[serde(rename = "PFR")]
    PairwiseFullRank,
    C1,
    C2,
    C3,
    #[serde(rename = "FLM-ALL")]
    FlmAll,
    #[serde(rename = "KM-ALL")]
    KmAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// Public monitoring (full-rank conditions).
    Flm,
    /// Private monitoring with communication (C1 to C3).
    Km,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Rank {
        computed: usize,
        required: usize,
        rows: usize,
        cols: usize,
        duplicate_rows: Vec<(usize, usize)>,
    },
    /// One deviation from the minmax profile.
    Deviation {
        deviator: usize,
        sup_distance: f64,
        bit_gap: f64,
        payoff_gain: f64,
        clause: Option<u8>,
    },
    Separation {
        deviations_distance: f64,
        equilibrium_to_deviation: f64,
    },
    Segments {
        norm_i: f64,
        norm_j: f64,
        cosine: Option<f64>,
    },
    Check {
        name: String,
        holds: bool,
        value: Option<f64>,
    },
}

/// Firm indices are zero-based in memory and one-based in text output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Context {
    pub profile: Option<String>,
    pub firms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub holds: bool,
    pub evidence: Vec<Evidence>,
    pub context: Context,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sub_reports: Vec<ConditionReport>,
}

impl ConditionReport {
    fn new(condition: ConditionId, holds: bool, evidence: Vec<Evidence>, profile: Option<&ActionProfile>, firms: Vec<usize>) -> Self {
        ConditionReport {
            condition,
            holds,
            evidence,
            context: Context {
                profile: profile.map(|r| r.to_string()),
                firms: firms.into_iter().map(|f| f + 1).collect(),
            },
            sub_reports: Vec::new(),
        }
    }

    /// Failing leaves of the report tree.
    pub fn failures(&self) -> Vec<&ConditionReport> {
        if self.holds {
            return Vec::new();
        }
        let nested: Vec<&ConditionReport> =
            self.sub_reports.iter().flat_map(|r| r.failures()).collect();
        if nested.is_empty() {
            vec![self]
        } else {
            nested
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers and strings")
    }
}

fn check_firm(spec: &GameSpec, firm: usize) -> Result<()> {
    if firm >= spec.n_firms {
        return Err(Error::domain(format!("firm index {firm} out of range")));
    }
    Ok(())
}

fn check_public_size(spec: &GameSpec) -> Result<()> {
    if spec.n_firms > MAX_ENUMERATED_FIRMS {
        return Err(Error::Capacity {
            what: "firms for a dense public signal matrix",
            limit: MAX_ENUMERATED_FIRMS,
            requested: spec.n_firms,
        });
    }
    Ok(())
}

fn rank_evidence(m: &SignalMatrix, required: usize) -> Result<(bool, Evidence)> {
    let computed = numeric_rank(m, RANK_TOL)?;
    Ok((
        computed == required,
        Evidence::Rank {
            computed,
            required,
            rows: m.rows.len(),
            cols: m.rows[0].len(),
            duplicate_rows: m.duplicate_rows(1e-12),
        },
    ))
}

pub fn individual_full_rank(spec: &GameSpec, firm: usize, profile: &ActionProfile) -> Result<ConditionReport> {
    let m = SignalMatrix::public_for_firm(spec, firm, profile)?;
    let (holds, ev) = rank_evidence(&m, 2)?;
    Ok(ConditionReport::new(
        ConditionId::IndividualFullRank,
        holds,
        vec![ev],
        Some(profile),
        vec![firm],
    ))
}

/// Rank of `[A_i; A_j]` must be 3. When both firms' prescribed rows are the
/// same profile, that row appears twice; the evidence lists the duplicate.
pub fn pairwise_full_rank(
    spec: &GameSpec,
    firm_i: usize,
    firm_j: usize,
    profile: &ActionProfile,
) -> Result<ConditionReport> {
    if firm_i == firm_j {
        return Err(Error::domain("pairwise rank needs two distinct firms"));
    }
    let m = SignalMatrix::public_for_firm(spec, firm_i, profile)?
        .stacked(SignalMatrix::public_for_firm(spec, firm_j, profile)?);
    let (holds, ev) = rank_evidence(&m, 3)?;
    Ok(ConditionReport::new(
        ConditionId::PairwiseFullRank,
        holds,
        vec![ev],
        Some(profile),
        vec![firm_i, firm_j],
    ))
}

/// At the minmax profile of `minmaxed`, each other firm's deviation must be
/// either visible in the others' private signals or unprofitable.
///
/// Only pure deviations are examined. The induced signal law is affine in
/// the deviator's mixing weight, so a mixture with weight `w` sits at sup
/// distance `w * d` from the equilibrium law; it is distinguishable whenever
/// the pure deviation is, and its payoff gain is `w` times the pure gain.
pub fn check_c1(spec: &GameSpec, minmaxed: usize) -> Result<ConditionReport> {
    check_firm(spec, minmaxed)?;
    let r = spec.minmax(minmaxed)?.profile;
    let base_payoff = spec.profile_payoff(&r);
    let mut holds = true;
    let mut evidence = Vec::new();
    for j in (0..spec.n_firms).filter(|&j| j != minmaxed) {
        let dev = r.flipped(j);
        let p = monitoring::marginal_excluding(spec, &r, &[j])?;
        let q = monitoring::marginal_excluding(spec, &dev, &[j])?;
        let sup_distance = p.sup_distance(&q)?;
        let bit_gap = p.max_bit_gap(&q)?;
        let payoff_gain = spec.profile_payoff(&dev)[j] - base_payoff[j];
        let clause = if sup_distance > DIST_TOL {
            Some(1)
        } else if payoff_gain <= 0.0 {
            Some(2)
        } else {
            None
        };
        holds &= clause.is_some();
        evidence.push(Evidence::Deviation {
            deviator: j + 1,
            sup_distance,
            bit_gap,
            payoff_gain,
            clause,
        });
    }
    Ok(ConditionReport::new(ConditionId::C1, holds, evidence, Some(&r), vec![minmaxed]))
}

struct PairLaws {
    p: SignalDistribution,
    q_i: SignalDistribution,
    q_j: SignalDistribution,
}

fn pair_laws(spec: &GameSpec, i: usize, j: usize, profile: &ActionProfile) -> Result<PairLaws> {
    if spec.n_firms <= 2 {
        return Err(Error::Inapplicable(
            "pairwise private-monitoring conditions need more than two players".into(),
        ));
    }
    check_firm(spec, i)?;
    check_firm(spec, j)?;
    if i == j {
        return Err(Error::domain("pairwise condition needs two distinct firms"));
    }
    let p = monitoring::marginal_excluding(spec, profile, &[i, j])?;
    let q_i = monitoring::deviation_set(spec, profile, i, (i, j))?.remove(0);
    let q_j = monitoring::deviation_set(spec, profile, j, (i, j))?.remove(0);
    Ok(PairLaws { p, q_i, q_j })
}

/// `p` must lie outside the hull of the common deviation laws. With binary
/// actions each deviation set is one point, so the intersection is empty
/// unless the two deviation laws coincide.
pub fn check_c2(spec: &GameSpec, i: usize, j: usize, profile: &ActionProfile) -> Result<ConditionReport> {
    let PairLaws { p, q_i, q_j } = pair_laws(spec, i, j, profile)?;
    let deviations_distance = q_i.sup_distance(&q_j)?;
    let equilibrium_to_deviation = p.sup_distance(&q_i)?;
    let holds = deviations_distance > DIST_TOL || equilibrium_to_deviation > DIST_TOL;
    Ok(ConditionReport::new(
        ConditionId::C2,
        holds,
        vec![Evidence::Separation {
            deviations_distance,
            equilibrium_to_deviation,
        }],
        Some(profile),
        vec![i, j],
    ))
}

pub fn check_c3(spec: &GameSpec, i: usize, j: usize, profile: &ActionProfile) -> Result<ConditionReport> {
    let PairLaws { p, q_i, q_j } = pair_laws(spec, i, j, profile)?;
    let (holds, ev) = segments_meet_only_at_base(&p, &q_i, &q_j)?;
    Ok(ConditionReport::new(ConditionId::C3, holds, vec![ev], Some(profile), vec![i, j]))
}

/// Whether segments `[p, q_i]` and `[p, q_j]` share only `p`. Degenerate
/// segments (`q = p`) trivially do; otherwise they overlap exactly when the
/// directions are positively collinear.
pub fn segments_meet_only_at_base(
    p: &SignalDistribution,
    q_i: &SignalDistribution,
    q_j: &SignalDistribution,
) -> Result<(bool, Evidence)> {
    let dot = |a: &SignalDistribution, b: &SignalDistribution| {
        SignalDistribution::inner_of_differences(a, p, b, p)
    };
    let norm_i = dot(q_i, q_i)?.max(0.0).sqrt();
    let norm_j = dot(q_j, q_j)?.max(0.0).sqrt();
    if p.sup_distance(q_i)? <= DIST_TOL || p.sup_distance(q_j)? <= DIST_TOL {
        return Ok((true, Evidence::Segments { norm_i, norm_j, cosine: None }));
    }
    let cosine = dot(q_i, q_j)? / (norm_i * norm_j);
    Ok((
        cosine <= 1.0 - COLLINEAR_TOL,
        Evidence::Segments {
            norm_i,
            norm_j,
            cosine: Some(cosine),
        },
    ))
}

fn check(name: &str, holds: bool, value: Option<f64>) -> Evidence {
    Evidence::Check {
        name: name.into(),
        holds,
        value,
    }
}

/// Whether the individually rational part of the feasible set is
/// full-dimensional: the hull must be, and some feasible payoff must be
/// strictly above every firm's minmax value.
fn interior_check(spec: &GameSpec) -> Result<Evidence> {
    let full_dim = spec.feasible_hull(false)?.has_nonempty_interior();
    let margin = spec.strict_ir_margin()? - spec.minmax(0)?.value;
    Ok(check("individually rational set has interior", full_dim && margin > 1e-9, Some(margin)))
}

/// Every precondition of the chosen folk theorem, aggregated in a fixed
/// order. Failed sub-checks are reported, not raised.
pub fn theorem_preconditions(spec: &GameSpec, theorem: Theorem) -> Result<ConditionReport> {
    let n = spec.n_firms;
    let mut evidence = Vec::new();
    let mut subs = Vec::new();
    match theorem {
        Theorem::Flm => {
            evidence.push(interior_check(spec)?);
            let efficient = spec.cooperator_payoff(n)?;
            let minmax = spec.minmax(0)?.value;
            evidence.push(check("minmax payoff is inefficient", minmax < efficient, Some(efficient - minmax)));
            for i in 0..n {
                let r = spec.minmax(i)?.profile;
                subs.push(individual_full_rank(spec, i, &r)?);
            }
            for r in spec.extreme_profiles()? {
                for i in 0..n {
                    for j in i + 1..n {
                        subs.push(pairwise_full_rank(spec, i, j, &r)?);
                    }
                }
            }
        }
        Theorem::Km => {
            let enough = n > 2;
            evidence.push(check("more than two players", enough, Some(n as f64)));
            evidence.push(check("full support", spec.private_accuracy().has_full_support(), None));
            evidence.push(interior_check(spec)?);
            for i in 0..n {
                subs.push(check_c1(spec, i)?);
            }
            if enough {
                for r in spec.extreme_profiles()? {
                    for i in 0..n {
                        for j in i + 1..n {
                            subs.push(check_c2(spec, i, j, &r)?);
                            subs.push(check_c3(spec, i, j, &r)?);
                        }
                    }
                }
            }
        }
    }
    let holds = evidence
        .iter()
        .all(|e| !matches!(e, Evidence::Check { holds: false, .. }))
        && subs.iter().all(|s| s.holds);
    let id = match theorem {
        Theorem::Flm => ConditionId::FlmAll,
        Theorem::Km => ConditionId::KmAll,
    };
    let mut report = ConditionReport::new(id, holds, evidence, None, Vec::new());
    report.sub_reports = subs;
    Ok(report)
}
