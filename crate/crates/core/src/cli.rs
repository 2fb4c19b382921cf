//! Command-line front end. [`run`] parses arguments and returns the exit
//! code together with what belongs on stdout (machine-readable CSV or JSON)
//! and stderr (human-readable summaries).
//!
//! Exit codes: 0 when the analysis succeeds or the checked conditions hold,
//! 1 when the analysis comes out negative, 2 for usage and parse errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::conditions::{self, Evidence, Theorem};
use crate::decomposition::{self, fmt_num, Direction, Enforceability};
use crate::engine::{self, AlwaysConceal, AlwaysDisclose, PromiseAutomaton, SignalTrigger, Strategy};
use crate::error::{Error, Result};
use crate::game::{Accuracy, ActionProfile, GainFamily, GameSpec};
use crate::monitoring::MonitoringMode;

/// Environment variable read for the seed when `--seed` is absent.
pub const SEED_ENV: &str = "INFOSHARE_SEED";

pub const STRATEGY_NAMES: &str = "always-disclose, always-conceal, trigger:K, promise";

#[derive(Debug, Parser)]
#[command(name = "infoshare", version, about = "Information-sharing games under imperfect monitoring")]
struct Cli {
    /// Game parameters (JSON file)
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Random seed; falls back to INFOSHARE_SEED, then the spec file
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write stdout output to this file instead
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TheoremArg {
    Flm,
    Km,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Orthogonal,
    General,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MonitorArg {
    Public,
    Private,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stage-game assumptions and folk-theorem preconditions
    Check {
        #[arg(long, value_enum, default_value = "both")]
        theorem: TheoremArg,
    },
    /// Individual and pairwise full-rank checks
    Rank {
        /// Probe one firm (1-based) at --profile
        #[arg(long)]
        firm: Option<usize>,
        /// Probe a pair "i,j" (1-based) at --profile
        #[arg(long)]
        pair: Option<String>,
        /// Action profile such as "110"; defaults to all-conceal
        #[arg(long)]
        profile: Option<String>,
    },
    /// Continuation map enforcing an action on a half-space
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Action profile; defaults to the k*-maximizing one
        #[arg(long)]
        action: Option<String>,
        #[arg(long, value_enum, default_value = "general")]
        mode: ModeArg,
    },
    /// Half-space approximation of the limit equilibrium payoff set
    Payoffset {
        #[arg(long, default_value_t = decomposition::DEFAULT_DIRECTIONS)]
        directions: usize,
        /// Also write the half-space list here (two firms)
        #[arg(long)]
        halfspaces: Option<PathBuf>,
    },
    /// Simulate the repeated game
    Simulate {
        #[arg(long, default_value = "always-disclose")]
        strategy: String,
        #[arg(long = "T", default_value_t = 100)]
        horizon: usize,
        #[arg(long, default_value_t = 1)]
        replicas: usize,
        #[arg(long, value_enum, default_value = "public")]
        mode: MonitorArg,
        /// Initial promise for the promise strategy, e.g. "2,2"
        #[arg(long, allow_hyphen_values = true)]
        v0: Option<String>,
        /// Direction for the promise strategy; defaults to all ones
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// gamma_bar_1(1,0) over an (alpha, epsilon) grid
    Sweep {
        /// min:max:steps
        #[arg(long, default_value = "0.55:0.95:10")]
        alpha: String,
        /// min:max:steps
        #[arg(long, default_value = "0.05:0.45:10")]
        epsilon: String,
        #[arg(long, default_value_t = 1.0)]
        loss: f64,
        #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
        lambda: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String, stderr: String) -> Self {
        CliOutput { code: 0, stdout, stderr }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        CliOutput {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Domain(_) | Error::Io(_) | Error::Redirect { .. } | Error::Capacity { .. } => 2,
        _ => 1,
    }
}

/// Runs the CLI on `args` (the first item is the program name).
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput::ok(text, String::new())
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let out_path = cli.out.clone();
    let mut result = match dispatch(cli) {
        Ok(o) => o,
        Err(e) => CliOutput {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    };
    if let Some(path) = out_path {
        if let Err(e) = std::fs::write(&path, &result.stdout) {
            return CliOutput::usage(format!("cannot write {}: {e}", path.display()));
        }
        result.stdout.clear();
    }
    result
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    n_firms: usize,
    gain: GainFile,
    #[serde(rename = "L")]
    loss: f64,
    alpha: f64,
    epsilon: f64,
    delta: f64,
    monitor_alpha: Option<f64>,
    monitor_epsilon: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum GainFile {
    Linear {
        #[serde(rename = "G")]
        g: f64,
    },
    Concave {
        #[serde(rename = "G")]
        g: f64,
        f: Vec<f64>,
    },
}

/// Parses a JSON game description; also returns its optional seed.
pub fn parse_spec(text: &str) -> Result<(GameSpec, Option<u64>)> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let gain = match file.gain {
        GainFile::Linear { g } => GainFamily::Linear { g },
        GainFile::Concave { g, f } => GainFamily::Concave { g, f },
    };
    let mut spec = GameSpec::new(file.n_firms, gain, file.loss, file.alpha, file.epsilon, file.delta)?;
    match (file.monitor_alpha, file.monitor_epsilon) {
        (None, None) => {}
        (a, e) => {
            let acc = Accuracy::new(a.unwrap_or(file.alpha), e.unwrap_or(file.epsilon))?;
            spec = spec.with_monitor(acc)?;
        }
    }
    Ok((spec, file.seed))
}

pub fn load_spec(path: &Path) -> Result<(GameSpec, Option<u64>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn require_spec(cli: &Cli) -> Result<(GameSpec, Option<u64>)> {
    let path = cli
        .spec
        .as_ref()
        .ok_or_else(|| Error::Parse("--spec PATH is required for this command".into()))?;
    load_spec(path)
}

fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(v) = std::env::var(SEED_ENV) {
        return v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{SEED_ENV}={v:?} is not an unsigned integer")));
    }
    Ok(file.unwrap_or(0))
}

fn parse_vec(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse(format!("{what}: {x:?} is not a finite number")))
        })
        .collect()
}

fn parse_profile(s: &str, n: usize) -> Result<ActionProfile> {
    let r: ActionProfile = s.parse()?;
    if r.len() != n {
        return Err(Error::Parse(format!("profile {s:?} has {} entries, expected {n}", r.len())));
    }
    Ok(r)
}

fn parse_direction(s: &str, n: usize) -> Result<Direction> {
    let v = parse_vec(s, "--lambda")?;
    if v.len() != n {
        return Err(Error::Parse(format!("--lambda has {} entries, expected {n}", v.len())));
    }
    Direction::new(v)
}

fn dispatch(cli: Cli) -> Result<CliOutput> {
    match &cli.command {
        Command::Check { theorem } => cmd_check(&cli, *theorem),
        Command::Rank { firm, pair, profile } => cmd_rank(&cli, *firm, pair.as_deref(), profile.as_deref()),
        Command::Decompose { lambda, action, mode } => cmd_decompose(&cli, lambda, action.as_deref(), *mode),
        Command::Payoffset { directions, halfspaces } => cmd_payoffset(&cli, *directions, halfspaces.as_deref()),
        Command::Simulate {
            strategy,
            horizon,
            replicas,
            mode,
            v0,
            lambda,
        } => cmd_simulate(&cli, strategy, *horizon, *replicas, *mode, v0.as_deref(), lambda.as_deref()),
        Command::Sweep {
            alpha,
            epsilon,
            loss,
            lambda,
        } => cmd_sweep(alpha, epsilon, *loss, lambda),
    }
}

fn cmd_check(cli: &Cli, theorem: TheoremArg) -> Result<CliOutput> {
    let (spec, _) = require_spec(cli)?;
    let assumptions = spec.check_assumptions();
    let mut holds = assumptions.all_hold();
    let mut doc = serde_json::Map::new();
    doc.insert("assumptions".into(), serde_json::to_value(&assumptions).expect("serializable"));
    let mut summary = format!(
        "assumptions: A1 {}, A2 {}, A2' {}\n",
        verdict(assumptions.a1_holds),
        verdict(assumptions.a2_holds),
        verdict(assumptions.a2prime_holds)
    );
    let wanted: &[Theorem] = match theorem {
        TheoremArg::Flm => &[Theorem::Flm],
        TheoremArg::Km => &[Theorem::Km],
        TheoremArg::Both => &[Theorem::Flm, Theorem::Km],
    };
    for &t in wanted {
        let report = conditions::theorem_preconditions(&spec, t)?;
        holds &= report.holds;
        let name = match t {
            Theorem::Flm => "flm",
            Theorem::Km => "km",
        };
        summary.push_str(&format!("{name}: {}\n", verdict(report.holds)));
        for f in report.failures() {
            summary.push_str(&format!("  failing: {}\n", describe_failure(f)));
        }
        doc.insert(name.into(), serde_json::to_value(&report).expect("serializable"));
    }
    let stdout = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    Ok(CliOutput {
        code: if holds { 0 } else { 1 },
        stdout,
        stderr: summary,
    })
}

fn verdict(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn one_based(i: usize, n: usize) -> Result<usize> {
    if i == 0 || i > n {
        return Err(Error::Parse(format!("firm {i} is not in 1..={n}")));
    }
    Ok(i - 1)
}

fn cmd_rank(cli: &Cli, firm: Option<usize>, pair: Option<&str>, profile: Option<&str>) -> Result<CliOutput> {
    let (spec, _) = require_spec(cli)?;
    let n = spec.n_firms;
    let r = match profile {
        Some(p) => parse_profile(p, n)?,
        None => ActionProfile::all(n, false),
    };
    let mut reports = Vec::new();
    if let Some(i) = firm {
        reports.push(conditions::individual_full_rank(&spec, one_based(i, n)?, &r)?);
    }
    if let Some(p) = pair {
        let ij = p
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("--pair {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if ij.len() != 2 {
            return Err(Error::Parse("--pair takes two firms, e.g. 1,3".into()));
        }
        reports.push(conditions::pairwise_full_rank(&spec, one_based(ij[0], n)?, one_based(ij[1], n)?, &r)?);
    }
    if reports.is_empty() {
        let flm = conditions::theorem_preconditions(&spec, Theorem::Flm)?;
        reports.extend(flm.sub_reports);
    }
    let holds = reports.iter().all(|r| r.holds);
    let stderr = format!(
        "{} rank checks, {} hold\n",
        reports.len(),
        reports.iter().filter(|r| r.holds).count()
    );
    Ok(CliOutput {
        code: if holds { 0 } else { 1 },
        stdout: serde_json::to_string_pretty(&reports).expect("serializable") + "\n",
        stderr,
    })
}

fn cmd_decompose(cli: &Cli, lambda: &str, action: Option<&str>, mode: ModeArg) -> Result<CliOutput> {
    let (spec, _) = require_spec(cli)?;
    let n = spec.n_firms;
    let dir = parse_direction(lambda, n)?;
    let map = match mode {
        ModeArg::ClosedForm => {
            if let Some(a) = action {
                if parse_profile(a, n)? != ActionProfile::all(n, true) {
                    return Err(Error::Parse("the closed form covers mutual disclosure only".into()));
                }
            }
            decomposition::table2_closed_form(&spec, &dir).map_err(|e| match e {
                Error::Redirect { reason, .. } => Error::Redirect {
                    reason,
                    redirect: "--mode general",
                },
                other => other,
            })?
        }
        ModeArg::Orthogonal | ModeArg::General => {
            let r = match action {
                Some(a) => parse_profile(a, n)?,
                None => decomposition::k_star(&spec, &dir)?.best_action,
            };
            match decomposition::solve_enforceability(&spec, &r, &dir, matches!(mode, ModeArg::Orthogonal))? {
                Enforceability::Enforced(m) => m,
                Enforceability::NotEnforceable { action, constraints, .. } => {
                    return Ok(CliOutput {
                        code: 1,
                        stdout: String::new(),
                        stderr: format!("action {action} is not enforceable: infeasible system: {constraints}\n"),
                    });
                }
            }
        }
    };
    let stderr = format!(
        "action {} direction {:?}: k* = {} (unit direction), {} for lambda as given; orthogonal: {}\n",
        map.action,
        dir.components(),
        fmt_num(map.k_star),
        fmt_num(map.k_star_unnormalized()),
        map.orthogonal
    );
    Ok(CliOutput::ok(map.to_csv(), stderr))
}

fn cmd_payoffset(cli: &Cli, directions: usize, halfspaces: Option<&Path>) -> Result<CliOutput> {
    let (spec, file_seed) = require_spec(cli)?;
    let seed = resolve_seed(cli.seed, file_seed)?;
    let approx = decomposition::ppe_payoff_set_seeded(&spec, directions, seed)?;
    let mut stderr = format!("{} half-spaces\n", approx.halfspaces.len());
    if approx.polygon_vertices.is_none() {
        return Ok(CliOutput::ok(approx.halfspaces_csv(), stderr));
    }
    if let Some(path) = halfspaces {
        std::fs::write(path, approx.halfspaces_csv())
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(err) = approx.discretization_error {
        stderr.push_str(&format!("distance to the clipped feasible hull: {err:.3e}\n"));
    }
    if approx.interior_empty {
        stderr.push_str("individually rational set has empty interior\n");
        return Ok(CliOutput {
            code: 1,
            stdout: approx.vertices_csv(),
            stderr,
        });
    }
    Ok(CliOutput::ok(approx.vertices_csv(), stderr))
}

enum StrategyKind {
    Disclose,
    Conceal,
    Trigger(Option<u64>),
    Promise(PromiseAutomaton),
}

fn parse_strategy(name: &str, spec: &GameSpec, v0: Option<&str>, lambda: Option<&str>) -> Result<StrategyKind> {
    let unknown = || Error::Parse(format!("unknown strategy {name:?}; available: {STRATEGY_NAMES}"));
    Ok(match name {
        "always-disclose" => StrategyKind::Disclose,
        "always-conceal" => StrategyKind::Conceal,
        "promise" => {
            let n = spec.n_firms;
            let v0 = match v0 {
                Some(s) => parse_vec(s, "--v0")?,
                None => spec.profile_payoff(&ActionProfile::all(n, true)),
            };
            let dir = match lambda {
                Some(s) => parse_direction(s, n)?,
                None => Direction::new(vec![1.0; n])?,
            };
            StrategyKind::Promise(PromiseAutomaton::new(spec, v0, dir)?)
        }
        other => {
            let k = other.strip_prefix("trigger:").ok_or_else(unknown)?;
            if k == "inf" {
                StrategyKind::Trigger(None)
            } else {
                StrategyKind::Trigger(Some(k.parse().map_err(|_| unknown())?))
            }
        }
    })
}

impl StrategyKind {
    fn build(&self, n: usize) -> Vec<Box<dyn Strategy>> {
        (0..n)
            .map(|_| -> Box<dyn Strategy> {
                match self {
                    StrategyKind::Disclose => Box::new(AlwaysDisclose),
                    StrategyKind::Conceal => Box::new(AlwaysConceal),
                    StrategyKind::Trigger(k) => Box::new(SignalTrigger::new(*k)),
                    StrategyKind::Promise(p) => Box::new(p.clone()),
                }
            })
            .collect()
    }
}

fn cmd_simulate(
    cli: &Cli,
    strategy: &str,
    horizon: usize,
    replicas: usize,
    mode: MonitorArg,
    v0: Option<&str>,
    lambda: Option<&str>,
) -> Result<CliOutput> {
    let (spec, file_seed) = require_spec(cli)?;
    let seed = resolve_seed(cli.seed, file_seed)?;
    let mode = match mode {
        MonitorArg::Public => MonitoringMode::Public,
        MonitorArg::Private => MonitoringMode::Private,
    };
    let kind = parse_strategy(strategy, &spec, v0, lambda)?;
    if matches!(kind, StrategyKind::Promise(_)) && mode == MonitoringMode::Private {
        return Err(Error::Parse("the promise strategy runs under public monitoring".into()));
    }
    let n = spec.n_firms;
    if replicas <= 1 {
        let trace = engine::run_episode(&spec, &mut kind.build(n), horizon, seed, mode)?;
        let avg: Vec<String> = trace.discounted_average().iter().map(|x| fmt_num(*x)).collect();
        let stderr = format!(
            "discounted average payoff: ({}); truncation bias bound: {:.3e}\n",
            avg.join(", "),
            trace.truncation_bound()
        );
        return Ok(CliOutput::ok(trace.to_csv(), stderr));
    }
    let mc = engine::monte_carlo(&spec, |_| kind.build(n), replicas, horizon, seed, mode)?;
    let fmt = |v: &[f64]| v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(", ");
    let stderr = format!(
        "mean discounted payoff: ({}); standard error: ({}); truncation bias bound: {:.3e}\n",
        fmt(&mc.mean),
        fmt(&mc.std_error),
        mc.truncation_bound
    );
    Ok(CliOutput::ok(mc.to_csv(), stderr))
}

/// One line per failing leaf, e.g. `PFR at 10 firms 1,2: rank 2 of 3`.
fn describe_failure(f: &conditions::ConditionReport) -> String {
    let id = serde_json::to_value(f.condition).expect("serializable");
    let mut head = id.as_str().unwrap_or("?").to_string();
    if let Some(p) = &f.context.profile {
        head.push_str(&format!(" at {p}"));
    }
    if !f.context.firms.is_empty() {
        let firms: Vec<String> = f.context.firms.iter().map(|i| i.to_string()).collect();
        head.push_str(&format!(" firms {}", firms.join(",")));
    }
    let reasons: Vec<String> = f
        .evidence
        .iter()
        .filter_map(|e| match e {
            Evidence::Check { name, holds: false, .. } => Some(name.clone()),
            Evidence::Rank { computed, required, .. } if computed != required => {
                Some(format!("rank {computed} of {required}"))
            }
            Evidence::Deviation { deviator, clause: None, .. } => {
                Some(format!("firm {deviator} has an undetectable profitable deviation"))
            }
            Evidence::Separation { .. } => Some("deviation laws are not separated".into()),
            Evidence::Segments { cosine: Some(c), .. } => Some(format!("deviation segments overlap (cosine {c:.6})")),
            _ => None,
        })
        .collect();
    format!("{head}: {}", reasons.join("; "))
}

/// Inclusive grid `min:max:steps`.
pub fn parse_grid(s: &str, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Parse(format!("{what} grid {s:?} must be min:max:steps"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    if steps == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo || (steps == 1 && hi != lo) {
        return Err(bad());
    }
    Ok((0..steps)
        .map(|k| if steps == 1 { lo } else { lo + (hi - lo) * k as f64 / (steps - 1) as f64 })
        .collect())
}

fn cmd_sweep(alpha: &str, epsilon: &str, loss: f64, lambda: &str) -> Result<CliOutput> {
    let alphas = parse_grid(alpha, "alpha")?;
    let epsilons = parse_grid(epsilon, "epsilon")?;
    let dir = parse_direction(lambda, 2)?;
    let mut out = String::from("alpha,epsilon,gamma_bar_1_10\n");
    for &a in &alphas {
        for &e in &epsilons {
            // build with a placeholder gain; the continuation does not depend on it
            let spec = GameSpec::linear(2, 1.0, loss, a, e, 0.9)?;
            let map = decomposition::table2_closed_form(&spec, &dir)?;
            out.push_str(&format!("{},{},{}\n", fmt_num(a), fmt_num(e), fmt_num(map.gamma_bar[1][0])));
        }
    }
    let stderr = format!("{} grid points\n", alphas.len() * epsilons.len());
    Ok(CliOutput::ok(out, stderr))
}
