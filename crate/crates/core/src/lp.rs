//! Exact rational linear programming for strict-inequality feasibility.
//!
//! Problems are stated over free variables with equalities, weak inequalities
//! (`row · x ≥ rhs`) and strict inequalities (`row · x ≥ rhs + δ`). The solver
//! maximizes the margin δ, capped at 1, so "strictly feasible" is exactly
//! "optimal margin > 0". Equalities are eliminated first (exact kernel
//! parametrization), then a dense two-phase simplex with Bland's rule runs on
//! the reduced problem; termination is guaranteed and every returned
//! assignment is re-checked against the original constraints.

use crate::linalg::{solve_linear, LinearSolution};
use crate::rat::{dot, Rat, RVec};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum LpError {
    #[error("constraint row has {got} coefficients, expected {expected}")]
    MalformedRow { expected: usize, got: usize },
    #[error("simplex reported an unbounded problem despite the margin cap")]
    Unbounded,
    #[error("internal error: optimal assignment failed exact re-verification")]
    VerificationFailed,
}

/// Constraint system over `num_vars` free rational variables.
#[derive(Debug, Clone, Default)]
pub struct LpProblem {
    pub num_vars: usize,
    /// `row · x = rhs`
    pub equalities: Vec<(RVec, Rat)>,
    /// `row · x ≥ rhs`
    pub weak: Vec<(RVec, Rat)>,
    /// `row · x ≥ rhs + δ`
    pub strict: Vec<(RVec, Rat)>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            ..Default::default()
        }
    }

    fn check_rows(&self) -> Result<(), LpError> {
        for (row, _) in self
            .equalities
            .iter()
            .chain(&self.weak)
            .chain(&self.strict)
        {
            if row.len() != self.num_vars {
                return Err(LpError::MalformedRow {
                    expected: self.num_vars,
                    got: row.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// Feasible (ignoring strictness); `margin > 0` iff strictly feasible.
    Optimal { margin: Rat, assignment: RVec },
    Infeasible,
}

impl LpOutcome {
    pub fn strictly_feasible(&self) -> bool {
        matches!(self, LpOutcome::Optimal { margin, .. } if margin.is_positive())
    }
}

/// Maximizes the strictness margin δ (capped at 1) over the problem's
/// constraint system. An empty system is feasible with margin 1.
pub fn lp_max_margin(problem: &LpProblem) -> Result<LpOutcome, LpError> {
    problem.check_rows()?;

    // Eliminate equalities: x = particular + kernel · t.
    let (x0, basis) = if problem.equalities.is_empty() {
        let basis: Vec<RVec> = (0..problem.num_vars)
            .map(|i| {
                let mut e = vec![Rat::zero(); problem.num_vars];
                e[i] = Rat::one();
                e
            })
            .collect();
        (vec![Rat::zero(); problem.num_vars], basis)
    } else {
        let rows: Vec<RVec> = problem.equalities.iter().map(|(r, _)| r.clone()).collect();
        let rhs: Vec<Rat> = problem.equalities.iter().map(|(_, b)| b.clone()).collect();
        match solve_linear(&rows, &rhs).map_err(|_| LpError::MalformedRow {
            expected: problem.num_vars,
            got: 0,
        })? {
            LinearSolution::Inconsistent => return Ok(LpOutcome::Infeasible),
            LinearSolution::Unique(p) => (p, Vec::new()),
            LinearSolution::Underdetermined { particular, kernel } => (particular, kernel),
        }
    };

    // Reduced rows over t: coefficient vector and the residual rhs.
    let reduce = |row: &RVec, rhs: &Rat| -> (RVec, Rat) {
        let coeffs: RVec = basis.iter().map(|k| dot(row, k)).collect();
        (coeffs, rhs - &dot(row, &x0))
    };
    let weak: Vec<(RVec, Rat)> = problem.weak.iter().map(|(r, b)| reduce(r, b)).collect();
    let strict: Vec<(RVec, Rat)> = problem.strict.iter().map(|(r, b)| reduce(r, b)).collect();

    let outcome = solve_reduced(basis.len(), &weak, &strict)?;
    let result = match outcome {
        None => LpOutcome::Infeasible,
        Some((margin, t)) => {
            let mut x = x0.clone();
            for (k, tj) in basis.iter().zip(&t) {
                for (xi, kij) in x.iter_mut().zip(k) {
                    *xi += &(kij * tj);
                }
            }
            LpOutcome::Optimal { margin, assignment: x }
        }
    };

    // Exact re-verification of the returned assignment.
    if let LpOutcome::Optimal { margin, assignment } = &result {
        let eq_ok = problem
            .equalities
            .iter()
            .all(|(r, b)| dot(r, assignment) == *b);
        let weak_ok = problem.weak.iter().all(|(r, b)| dot(r, assignment) >= *b);
        let strict_ok = problem
            .strict
            .iter()
            .all(|(r, b)| dot(r, assignment) >= b + margin);
        if !(eq_ok && weak_ok && strict_ok) {
            return Err(LpError::VerificationFailed);
        }
    }
    Ok(result)
}

/// Maximize δ ≤ 1 s.t. `w · t ≥ c` (weak) and `s · t − δ ≥ c` (strict), with
/// `t` free and δ free below. Returns `None` if infeasible.
fn solve_reduced(
    num_t: usize,
    weak: &[(RVec, Rat)],
    strict: &[(RVec, Rat)],
) -> Result<Option<(Rat, RVec)>, LpError> {
    // Structural columns: t+ (num_t), t- (num_t), δ+ , δ-.
    // Rows (standard form, all with nonnegative rhs after sign fixing):
    //   weak:   w·t − slack = c
    //   strict: s·t − δ − slack = c
    //   cap:    δ + slack = 1
    let ns = 2 * num_t + 2;
    let dplus = 2 * num_t;
    let dminus = 2 * num_t + 1;
    let m = weak.len() + strict.len() + 1;
    let total_cols = ns + m; // + one slack per row; artificials appended later

    let mut rows: Vec<RVec> = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    let mut build = |coeffs: &RVec, delta_coeff: i64, slack_idx: usize, b: Rat| {
        let mut row = vec![Rat::zero(); total_cols];
        for (j, c) in coeffs.iter().enumerate() {
            row[j] = c.clone();
            row[num_t + j] = -c;
        }
        if delta_coeff != 0 {
            row[dplus] = Rat::from_int(delta_coeff);
            row[dminus] = Rat::from_int(-delta_coeff);
        }
        row[ns + slack_idx] = Rat::from_int(-1);
        rows.push(row);
        rhs.push(b);
    };
    let mut slack = 0;
    for (w, c) in weak {
        build(w, 0, slack, c.clone());
        slack += 1;
    }
    for (s, c) in strict {
        build(s, -1, slack, c.clone());
        slack += 1;
    }
    // cap row: δ ≤ 1  ⇔  −δ ≥ −1
    build(&vec![Rat::zero(); num_t], -1, slack, Rat::from_int(-1));

    // Fix signs so every rhs is nonnegative; rows whose slack column ends up
    // +1 get it as the initial basic variable, the rest get an artificial.
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut artificials: Vec<usize> = Vec::new();
    for i in 0..m {
        if rhs[i].is_negative() {
            for x in rows[i].iter_mut() {
                *x = -&*x;
            }
            rhs[i] = -&rhs[i];
        }
        let slack_col = (ns..total_cols).find(|&j| !rows[i][j].is_zero()).unwrap();
        if rows[i][slack_col] == Rat::one() {
            basis.push(slack_col);
        } else {
            basis.push(usize::MAX); // artificial, assigned below
            artificials.push(i);
        }
    }
    let art_base = total_cols;
    let ncols = total_cols + artificials.len();
    for row in rows.iter_mut() {
        row.resize(ncols, Rat::zero());
    }
    for (a, &i) in artificials.iter().enumerate() {
        rows[i][art_base + a] = Rat::one();
        basis[i] = art_base + a;
    }

    // Phase 1: maximize −Σ artificials.
    if !artificials.is_empty() {
        let mut cost = vec![Rat::zero(); ncols];
        for a in 0..artificials.len() {
            cost[art_base + a] = Rat::from_int(-1);
        }
        let value = simplex(&mut rows, &mut rhs, &mut basis, &cost, Some(art_base))?;
        if !value.is_zero() {
            return Ok(None);
        }
        // Pivot any lingering artificials out of the basis (degenerate rows).
        for i in 0..m {
            if basis[i] >= art_base {
                if let Some(j) = (0..art_base).find(|&j| !rows[i][j].is_zero()) {
                    pivot(&mut rows, &mut rhs, &mut basis, i, j);
                }
                // A fully zero row is redundant; its artificial stays basic at
                // zero and is frozen out by the phase-2 column restriction.
            }
        }
    }

    // Phase 2: maximize δ = δ+ − δ−.
    let mut cost = vec![Rat::zero(); ncols];
    cost[dplus] = Rat::one();
    cost[dminus] = Rat::from_int(-1);
    let value = simplex(&mut rows, &mut rhs, &mut basis, &cost, Some(art_base))?;

    let mut assignment = vec![Rat::zero(); ncols];
    for (i, &b) in basis.iter().enumerate() {
        assignment[b] = rhs[i].clone();
    }
    let t: RVec = (0..num_t)
        .map(|j| &assignment[j] - &assignment[num_t + j])
        .collect();
    Ok(Some((value, t)))
}

fn pivot(rows: &mut [RVec], rhs: &mut [Rat], basis: &mut [usize], r: usize, c: usize) {
    let inv = rows[r][c].recip();
    for x in rows[r].iter_mut() {
        *x *= &inv;
    }
    rhs[r] *= &inv;
    for i in 0..rows.len() {
        if i == r || rows[i][c].is_zero() {
            continue;
        }
        let factor = rows[i][c].clone();
        let (pivot_row, row_i) = if i < r {
            let (a, b) = rows.split_at_mut(r);
            (&b[0], &mut a[i])
        } else {
            let (a, b) = rows.split_at_mut(i);
            (&a[r], &mut b[0])
        };
        for (x, p) in row_i.iter_mut().zip(pivot_row.iter()) {
            if !p.is_zero() {
                *x -= &(p * &factor);
            }
        }
        let t = &rhs[r] * &factor;
        rhs[i] -= &t;
    }
    basis[r] = c;
}

/// Dense simplex maximizing `cost · x` from the current basic feasible
/// solution. Bland's rule (least-index entering and leaving) guarantees
/// termination. Columns at or beyond `frozen_from` may not enter the basis.
/// Returns the optimal objective value.
fn simplex(
    rows: &mut [RVec],
    rhs: &mut [Rat],
    basis: &mut [usize],
    cost: &[Rat],
    frozen_from: Option<usize>,
) -> Result<Rat, LpError> {
    let ncols = cost.len();
    let limit = frozen_from.unwrap_or(ncols);
    // Reduced costs: z[j] = cost[j] − cost_B · column_j.
    let mut z: RVec = cost.to_vec();
    for (i, &b) in basis.iter().enumerate() {
        if !cost[b].is_zero() {
            let cb = cost[b].clone();
            for j in 0..ncols {
                if !rows[i][j].is_zero() {
                    let t = &rows[i][j] * &cb;
                    z[j] -= &t;
                }
            }
        }
    }
    loop {
        // Bland: least-index column with positive reduced cost, not frozen,
        // not already basic.
        let entering =
            (0..ncols).find(|&j| j < limit && z[j].is_positive() && !basis.contains(&j));
        let Some(c) = entering else {
            let mut value = Rat::zero();
            for (i, &b) in basis.iter().enumerate() {
                if !cost[b].is_zero() {
                    value += &(&cost[b] * &rhs[i]);
                }
            }
            return Ok(value);
        };
        // Ratio test; Bland tie-break on least basic-variable index.
        let mut best: Option<(Rat, usize)> = None;
        for i in 0..rows.len() {
            if rows[i][c].is_positive() {
                let ratio = &rhs[i] / &rows[i][c];
                match &best {
                    None => best = Some((ratio, i)),
                    Some((r0, i0)) => {
                        if ratio < *r0 || (ratio == *r0 && basis[i] < basis[*i0]) {
                            best = Some((ratio, i));
                        }
                    }
                }
            }
        }
        let Some((_, r)) = best else {
            return Err(LpError::Unbounded);
        };
        pivot(rows, rhs, basis, r, c);
        // Update reduced costs for the new basis.
        let zc = z[c].clone();
        if !zc.is_zero() {
            for j in 0..ncols {
                if !rows[r][j].is_zero() {
                    let t = &rows[r][j] * &zc;
                    z[j] -= &t;
                }
            }
        }
    }
}
