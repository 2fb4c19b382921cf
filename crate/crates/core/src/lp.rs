//! Small dense linear programs.
//!
//! Two-phase tableau simplex with Bland's anti-cycling rule. Problem sizes in
//! this crate stay below a few thousand columns, so a dense tableau is fine.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<f64>,
    relation: Relation,
    rhs: f64,
}

/// `maximize c.x` subject to linear rows; variables are nonnegative unless
/// marked free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    n_vars: usize,
    objective: Vec<f64>,
    minimize: bool,
    free: Vec<bool>,
    rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<(Vec<f64>, f64)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n_vars = objective.len();
        LinearProgram {
            n_vars,
            objective,
            minimize: false,
            free: vec![false; n_vars],
            rows: Vec::new(),
        }
    }

    pub fn minimize(objective: Vec<f64>) -> Self {
        let mut lp = Self::maximize(objective);
        lp.minimize = true;
        lp
    }

    /// Feasibility problem with a zero objective.
    pub fn feasibility(n_vars: usize) -> Self {
        Self::maximize(vec![0.0; n_vars])
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn set_all_free(&mut self) {
        self.free.iter_mut().for_each(|f| *f = true);
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.n_vars, "constraint width mismatch");
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Sparse form of [`add`](Self::add).
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) {
        let mut coeffs = vec![0.0; self.n_vars];
        for &(j, a) in terms {
            coeffs[j] += a;
        }
        self.add(coeffs, relation, rhs);
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        // column layout: [split structurals | slacks/surplus | artificials]
        let mut col_of = Vec::with_capacity(self.n_vars);
        let mut n_struct = 0;
        for &f in &self.free {
            col_of.push((n_struct, f));
            n_struct += if f { 2 } else { 1 };
        }

        let m = self.rows.len();
        let n_slack = self
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        let n_art = self
            .rows
            .iter()
            .filter(|r| {
                let flip = r.rhs < 0.0;
                match (r.relation, flip) {
                    (Relation::Eq, _) => true,
                    (Relation::Le, false) | (Relation::Ge, true) => false,
                    _ => true,
                }
            })
            .count();
        let n_cols = n_struct + n_slack + n_art;
        let art_start = n_struct + n_slack;

        let mut t = Tableau::new(m, n_cols);
        let mut slack = n_struct;
        let mut art = art_start;
        for (i, row) in self.rows.iter().enumerate() {
            let sign = if row.rhs < 0.0 { -1.0 } else { 1.0 };
            for (j, &a) in row.coeffs.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let (c, f) = col_of[j];
                t.set(i, c, sign * a);
                if f {
                    t.set(i, c + 1, -sign * a);
                }
            }
            t.rhs[i] = sign * row.rhs;
            let relation = match (row.relation, sign < 0.0) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            match relation {
                Relation::Le => {
                    t.set(i, slack, 1.0);
                    t.basis[i] = slack;
                    slack += 1;
                }
                Relation::Ge => {
                    t.set(i, slack, -1.0);
                    slack += 1;
                    t.set(i, art, 1.0);
                    t.basis[i] = art;
                    art += 1;
                }
                Relation::Eq => {
                    t.set(i, art, 1.0);
                    t.basis[i] = art;
                    art += 1;
                }
            }
        }

        // phase 1: maximize -sum(artificials)
        if n_art > 0 {
            let mut cost = vec![0.0; n_cols];
            for c in cost.iter_mut().skip(art_start) {
                *c = -1.0;
            }
            match t.run(&cost, n_cols)? {
                PhaseResult::Optimal => {}
                PhaseResult::Unbounded => {
                    return Err(Error::Solver("phase one reported unbounded".into()))
                }
            }
            let infeasibility: f64 = (0..t.m)
                .filter(|&i| t.basis[i] >= art_start)
                .map(|i| t.rhs[i])
                .sum();
            let scale = 1.0 + self.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
            if infeasibility > 1e-9 * scale {
                return Ok(LpOutcome::Infeasible);
            }
            t.drive_out_artificials(art_start);
        }

        let mut cost = vec![0.0; n_cols];
        let sign = if self.minimize { -1.0 } else { 1.0 };
        for (j, &c) in self.objective.iter().enumerate() {
            let (col, f) = col_of[j];
            cost[col] = sign * c;
            if f {
                cost[col + 1] = -sign * c;
            }
        }
        match t.run(&cost, art_start)? {
            PhaseResult::Unbounded => return Ok(LpOutcome::Unbounded),
            PhaseResult::Optimal => {}
        }

        let mut raw = vec![0.0; n_cols];
        for i in 0..t.m {
            raw[t.basis[i]] = t.rhs[i];
        }
        let x: Vec<f64> = col_of
            .iter()
            .map(|&(c, f)| if f { raw[c] - raw[c + 1] } else { raw[c] })
            .collect();
        let value = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpOutcome::Optimal { x, value })
    }
}

enum PhaseResult {
    Optimal,
    Unbounded,
}

struct Tableau {
    m: usize,
    n: usize,
    a: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn new(m: usize, n: usize) -> Self {
        Tableau {
            m,
            n,
            a: vec![0.0; m * n],
            rhs: vec![0.0; m],
            basis: vec![usize::MAX; m],
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let n = self.n;
        let p = self.at(r, c);
        {
            let row = &mut self.a[r * n..(r + 1) * n];
            row.iter_mut().for_each(|v| *v /= p);
        }
        self.rhs[r] /= p;
        let pivot_row: Vec<f64> = self.a[r * n..(r + 1) * n].to_vec();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * n + c];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[i * n..(i + 1) * n];
            for (v, &pr) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            row[c] = 0.0;
            self.rhs[i] -= f * pivot_rhs;
            if self.rhs[i].abs() < 1e-14 {
                self.rhs[i] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` over columns `< allowed`, Bland's rule.
    fn run(&mut self, cost: &[f64], allowed: usize) -> Result<PhaseResult> {
        let max_iter = 50_000 + 200 * (self.m + self.n);
        for _ in 0..max_iter {
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j];
                for i in 0..self.m {
                    let a = self.at(i, j);
                    if a != 0.0 {
                        reduced -= cost[self.basis[i]] * a;
                    }
                }
                if reduced > 1e-10 {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return Ok(PhaseResult::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a > PIVOT_TOL {
                    let ratio = self.rhs[i] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12
                                || (ratio <= lr + 1e-12 && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(PhaseResult::Unbounded);
            };
            self.pivot(r, c);
        }
        Err(Error::Solver("simplex iteration limit reached".into()))
    }

    fn drive_out_artificials(&mut self, art_start: usize) {
        let mut i = 0;
        while i < self.m {
            if self.basis[i] >= art_start {
                let col = (0..art_start)
                    .filter(|j| !self.basis.contains(j))
                    .max_by(|&a, &b| self.at(i, a).abs().total_cmp(&self.at(i, b).abs()))
                    .filter(|&j| self.at(i, j).abs() > 1e-9);
                match col {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => self.remove_row(i),
                }
            } else {
                i += 1;
            }
        }
    }

    fn remove_row(&mut self, r: usize) {
        let n = self.n;
        self.a.drain(r * n..(r + 1) * n);
        self.rhs.remove(r);
        self.basis.remove(r);
        self.m -= 1;
    }
}
