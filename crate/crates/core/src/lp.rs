//! Dense two-phase primal simplex for `min c^T x  s.t.  G x ≤ h` with
//! optional equality rows and free variables.
//!
//! Free variables are split `x = x⁺ - x⁻`, inequality rows get slacks, and
//! phase 1 drives artificial variables out of a rhs-nonnegative system. The
//! ratio test breaks ties lexicographically; after a stall the solver
//! switches to Bland's rule, so it terminates on degenerate instances.
//! Results carry the tight-row set and dual multipliers, and every Optimal
//! result is checked against its KKT system before being returned.

use ndarray::{Array1, Array2, ArrayView1};
use thiserror::Error;

use crate::linalg::{lu_factor, norm_inf, LinalgError};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("inconsistent dimensions: {0}")]
    Shape(String),
    #[error("non-finite problem data in {0}")]
    NonFinite(&'static str),
    #[error("basis matrix is singular or badly conditioned (pivot ratio {ratio:e}); use the general LP path")]
    SingularBasis { ratio: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration cap exceeded or postcondition check failed; never silent.
    NumericalFailure,
}

/// `min c^T x  s.t.  a_ub x ≤ b_ub  (and a_eq x = b_eq)`, `x` free.
#[derive(Debug, Clone)]
pub struct LpProblem<S> {
    pub c: Array1<S>,
    pub a_ub: Array2<S>,
    pub b_ub: Array1<S>,
    pub a_eq: Option<Array2<S>>,
    pub b_eq: Option<Array1<S>>,
}

#[derive(Debug, Clone)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    pub x: Array1<S>,
    pub value: S,
    /// Inequality rows tight at the solution.
    pub active: Vec<usize>,
    /// Multipliers λ ≥ 0 of the inequality rows: `c + a_ub^T λ + a_eq^T μ = 0`.
    pub dual: Array1<S>,
    /// Multipliers μ of the equality rows.
    pub dual_eq: Array1<S>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    /// Relative feasibility/optimality tolerance.
    pub tol_feas: f64,
    /// Entries smaller than this never pivot.
    pub tol_pivot: f64,
    /// Degenerate pivots tolerated before switching to Bland's rule.
    pub stall_limit: usize,
    /// Iteration cap factor: `factor * (rows + cols)`.
    pub iter_factor: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            tol_feas: 1e-9,
            tol_pivot: 1e-10,
            stall_limit: 40,
            iter_factor: 50,
        }
    }
}

/// Largest KKT residual of a claimed-optimal solution, each block scaled
/// relative to the data it checks.
#[derive(Debug, Clone, Copy)]
pub struct KktResiduals<S> {
    pub primal: S,
    pub dual: S,
    pub complementarity: S,
    pub duality_gap: S,
}

impl<S: Scalar> LpProblem<S> {
    pub fn new(c: Array1<S>, a_ub: Array2<S>, b_ub: Array1<S>) -> Self {
        Self {
            c,
            a_ub,
            b_ub,
            a_eq: None,
            b_eq: None,
        }
    }

    pub fn with_equalities(mut self, a_eq: Array2<S>, b_eq: Array1<S>) -> Self {
        self.a_eq = Some(a_eq);
        self.b_eq = Some(b_eq);
        self
    }

    pub fn nvars(&self) -> usize {
        self.c.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.c.len();
        if self.a_ub.ncols() != n && self.a_ub.nrows() > 0 {
            return Err(LpError::Shape(format!(
                "a_ub has {} columns, objective has {n}",
                self.a_ub.ncols()
            )));
        }
        if self.a_ub.nrows() != self.b_ub.len() {
            return Err(LpError::Shape(format!(
                "a_ub has {} rows, b_ub has {}",
                self.a_ub.nrows(),
                self.b_ub.len()
            )));
        }
        if !self.c.iter().all(|x| x.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        if !self.a_ub.iter().all(|x| x.is_finite()) || !self.b_ub.iter().all(|x| x.is_finite()) {
            return Err(LpError::NonFinite("inequality rows"));
        }
        match (&self.a_eq, &self.b_eq) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                if a.ncols() != n && a.nrows() > 0 {
                    return Err(LpError::Shape(format!(
                        "a_eq has {} columns, objective has {n}",
                        a.ncols()
                    )));
                }
                if a.nrows() != b.len() {
                    return Err(LpError::Shape(format!(
                        "a_eq has {} rows, b_eq has {}",
                        a.nrows(),
                        b.len()
                    )));
                }
                if !a.iter().all(|x| x.is_finite()) || !b.iter().all(|x| x.is_finite()) {
                    return Err(LpError::NonFinite("equality rows"));
                }
            }
            _ => return Err(LpError::Shape("a_eq and b_eq must come together".into())),
        }
        Ok(())
    }

    /// KKT residuals for a solution claiming optimality.
    pub fn kkt_residuals(&self, sol: &LpSolution<S>) -> KktResiduals<S> {
        let m = self.a_ub.nrows();
        let scale_b = S::one() + norm_inf(self.b_ub.view());
        let mut primal = S::zero();
        let mut comp = S::zero();
        if m > 0 {
            let slack = &self.b_ub - &self.a_ub.dot(&sol.x);
            for i in 0..m {
                primal = primal.max(-slack[i] / scale_b);
                comp = comp.max((sol.dual[i] * slack[i]).abs() / scale_b);
            }
        }
        let mut grad = self.c.clone();
        if m > 0 {
            grad = grad + self.a_ub.t().dot(&sol.dual);
        }
        let mut dual_bound = -sol.dual.dot(&self.b_ub);
        if let (Some(a_eq), Some(b_eq)) = (&self.a_eq, &self.b_eq) {
            if a_eq.nrows() > 0 {
                let res = &a_eq.dot(&sol.x) - b_eq;
                let scale_eq = S::one() + norm_inf(b_eq.view());
                primal = primal.max(norm_inf(res.view()) / scale_eq);
                grad = grad + a_eq.t().dot(&sol.dual_eq);
                dual_bound = dual_bound - sol.dual_eq.dot(b_eq);
            }
        }
        let scale_c = S::one() + norm_inf(self.c.view());
        KktResiduals {
            primal,
            dual: norm_inf(grad.view()) / scale_c,
            complementarity: comp,
            duality_gap: (sol.value - dual_bound).abs() / (S::one() + sol.value.abs()),
        }
    }
}

/// Closed-form solve of the nondegenerate square active system: returns
/// `a_basis^{-1} w`. Errors on a singular or badly conditioned basis so the
/// caller can fall back to the general LP path.
pub fn closed_form_gamma<S: Scalar>(
    a_basis: &Array2<S>,
    w: &Array1<S>,
) -> Result<Array1<S>, LpError> {
    let factors = lu_factor(a_basis)?;
    if factors.pivot_ratio < S::cst(1e-12) {
        return Err(LpError::SingularBasis {
            ratio: factors.pivot_ratio.as_f64(),
        });
    }
    Ok(factors.solve(w)?)
}

pub fn solve_lp<S: Scalar>(p: &LpProblem<S>) -> Result<LpSolution<S>, LpError> {
    solve_lp_with(p, &LpOptions::default())
}

pub fn solve_lp_with<S: Scalar>(
    p: &LpProblem<S>,
    opts: &LpOptions,
) -> Result<LpSolution<S>, LpError> {
    p.validate()?;
    let mut tableau = Tableau::build(p, opts);
    let status = tableau.run_phase1();
    let mut sol = tableau.extract(p, status);
    if sol.status == LpStatus::Optimal {
        let res = p.kkt_residuals(&sol);
        let tol = S::cst(opts.tol_feas) * S::cst(100.0);
        if res.primal > tol
            || res.dual > tol
            || res.complementarity > tol
            || res.duality_gap > tol
        {
            sol.status = LpStatus::NumericalFailure;
        }
    }
    Ok(sol)
}

/// Full-tableau simplex over the standard form
/// `[G | -G | I_slack | I_art] z = rhs`, `z ≥ 0`.
struct Tableau<S> {
    /// Constraint rows, one trailing rhs column.
    t: Array2<S>,
    /// Reduced-cost row with trailing objective value (negated).
    obj: Array1<S>,
    basis: Vec<usize>,
    /// Sign applied to each original row to make the rhs nonnegative.
    row_sign: Vec<S>,
    n: usize,
    m_ub: usize,
    m_eq: usize,
    /// First artificial column.
    art0: usize,
    ncols: usize,
    opts: LpOptions,
    iterations: usize,
    bland: bool,
    stall: usize,
    unbounded: bool,
    hit_cap: bool,
}

impl<S: Scalar> Tableau<S> {
    fn build(p: &LpProblem<S>, opts: &LpOptions) -> Self {
        let n = p.nvars();
        let m_ub = p.a_ub.nrows();
        let m_eq = p.a_eq.as_ref().map_or(0, |a| a.nrows());
        let rows = m_ub + m_eq;
        let art0 = 2 * n + m_ub;
        let ncols = art0 + rows;
        let mut t = Array2::zeros((rows, ncols + 1));
        let mut row_sign = vec![S::one(); rows];

        for i in 0..m_ub {
            for j in 0..n {
                t[[i, j]] = p.a_ub[[i, j]];
                t[[i, n + j]] = -p.a_ub[[i, j]];
            }
            t[[i, 2 * n + i]] = S::one();
            t[[i, ncols]] = p.b_ub[i];
        }
        if let (Some(a_eq), Some(b_eq)) = (&p.a_eq, &p.b_eq) {
            for i in 0..m_eq {
                for j in 0..n {
                    t[[m_ub + i, j]] = a_eq[[i, j]];
                    t[[m_ub + i, n + j]] = -a_eq[[i, j]];
                }
                t[[m_ub + i, ncols]] = b_eq[i];
            }
        }
        for i in 0..rows {
            if t[[i, ncols]] < S::zero() {
                row_sign[i] = -S::one();
                for j in 0..=ncols {
                    t[[i, j]] = -t[[i, j]];
                }
            }
            t[[i, art0 + i]] = S::one();
        }
        let basis = (0..rows).map(|i| art0 + i).collect();
        Tableau {
            t,
            obj: Array1::zeros(ncols + 1),
            basis,
            row_sign,
            n,
            m_ub,
            m_eq,
            art0,
            ncols,
            opts: *opts,
            iterations: 0,
            bland: false,
            stall: 0,
            unbounded: false,
            hit_cap: false,
        }
    }

    fn rows(&self) -> usize {
        self.m_ub + self.m_eq
    }

    /// Costs over the standard-form columns: `None` is the phase-1
    /// artificial objective, `Some(c)` the split original objective.
    fn phase_costs(&self, objective: Option<&Array1<S>>) -> Array1<S> {
        let mut c = Array1::zeros(self.ncols);
        match objective {
            None => {
                for j in self.art0..self.ncols {
                    c[j] = S::one();
                }
            }
            Some(orig) => {
                for j in 0..self.n {
                    c[j] = orig[j];
                    c[self.n + j] = -orig[j];
                }
            }
        }
        c
    }

    fn reset_objective(&mut self, costs: &Array1<S>) {
        for j in 0..=self.ncols {
            let mut acc = if j < self.ncols { costs[j] } else { S::zero() };
            for i in 0..self.rows() {
                let cb = costs[self.basis[i]];
                if cb != S::zero() {
                    acc = acc - cb * self.t[[i, j]];
                }
            }
            self.obj[j] = acc;
        }
    }

    fn cost_scale(&self) -> S {
        S::one()
            + (0..self.ncols).fold(S::zero(), |m, j| m.max(self.obj[j].abs()))
    }

    /// One simplex phase over the allowed columns. Returns false when the
    /// problem is unbounded in this phase.
    fn iterate(&mut self, allow_artificial: bool) -> bool {
        let iter_cap = self.opts.iter_factor * (self.rows() + self.ncols);
        let tol_pivot = S::cst(self.opts.tol_pivot);
        loop {
            if self.iterations >= iter_cap {
                self.hit_cap = true;
                return true;
            }
            let tol_cost = S::cst(self.opts.tol_feas) * self.cost_scale();
            let limit = if allow_artificial {
                self.ncols
            } else {
                self.art0
            };
            let mut entering = None;
            if self.bland {
                for j in 0..limit {
                    if self.obj[j] < -tol_cost {
                        entering = Some(j);
                        break;
                    }
                }
            } else {
                let mut best = -tol_cost;
                for j in 0..limit {
                    if self.obj[j] < best {
                        best = self.obj[j];
                        entering = Some(j);
                    }
                }
            }
            let Some(col) = entering else { return true };

            let mut leaving: Option<(usize, S)> = None;
            for i in 0..self.rows() {
                let a = self.t[[i, col]];
                if a <= tol_pivot {
                    continue;
                }
                let ratio = self.t[[i, self.ncols]] / a;
                match leaving {
                    None => leaving = Some((i, ratio)),
                    Some((r, best_ratio)) => {
                        let near = (ratio - best_ratio).abs()
                            <= S::cst(self.opts.tol_feas) * (S::one() + best_ratio.abs());
                        if ratio < best_ratio && !near {
                            leaving = Some((i, ratio));
                        } else if near && self.prefer_row(i, r, col) {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
            let Some((row, _)) = leaving else {
                self.unbounded = true;
                return false;
            };

            let before = self.obj[self.ncols];
            self.pivot(row, col);
            self.iterations += 1;
            let progress = (self.obj[self.ncols] - before).abs();
            if progress <= S::cst(self.opts.tol_feas) * (S::one() + before.abs()) {
                self.stall += 1;
                if self.stall > self.opts.stall_limit {
                    self.bland = true;
                }
            } else {
                self.stall = 0;
            }
        }
    }

    /// Ratio-test tie break: Bland (smallest basis index) once stalled,
    /// lexicographic row comparison otherwise.
    fn prefer_row(&self, cand: usize, incumbent: usize, col: usize) -> bool {
        if self.bland {
            return self.basis[cand] < self.basis[incumbent];
        }
        let pc = self.t[[cand, col]];
        let pi = self.t[[incumbent, col]];
        for j in 0..self.ncols {
            let a = self.t[[cand, j]] / pc;
            let b = self.t[[incumbent, j]] / pi;
            if (a - b).abs() > S::cst(self.opts.tol_pivot) {
                return a < b;
            }
        }
        self.basis[cand] < self.basis[incumbent]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.t[[row, col]];
        for j in 0..=self.ncols {
            self.t[[row, j]] = self.t[[row, j]] / piv;
        }
        self.t[[row, col]] = S::one();
        for i in 0..self.rows() {
            if i == row {
                continue;
            }
            let factor = self.t[[i, col]];
            if factor != S::zero() {
                for j in 0..=self.ncols {
                    let delta = factor * self.t[[row, j]];
                    self.t[[i, j]] -= delta;
                }
                self.t[[i, col]] = S::zero();
            }
        }
        let factor = self.obj[col];
        if factor != S::zero() {
            for j in 0..=self.ncols {
                let delta = factor * self.t[[row, j]];
                self.obj[j] -= delta;
            }
            self.obj[col] = S::zero();
        }
        self.basis[row] = col;
    }

    /// Pivot still-basic artificials onto structural columns where possible;
    /// rows that cannot be cleared are redundant and get zeroed out.
    fn evict_artificials(&mut self) {
        for i in 0..self.rows() {
            if self.basis[i] < self.art0 {
                continue;
            }
            let mut col = None;
            for j in 0..self.art0 {
                if self.t[[i, j]].abs() > S::cst(self.opts.tol_pivot) {
                    col = Some(j);
                    break;
                }
            }
            if let Some(j) = col {
                self.pivot(i, j);
            } else {
                for j in 0..=self.ncols {
                    self.t[[i, j]] = S::zero();
                }
                self.t[[i, self.basis[i]]] = S::one();
            }
        }
    }

    /// Phase 1: drive the artificial objective to zero.
    fn run_phase1(&mut self) -> LpStatus {
        let rows = self.rows();
        if rows == 0 {
            return LpStatus::Optimal;
        }
        let p1_costs = self.phase_costs(None);
        self.reset_objective(&p1_costs);
        self.iterate(true);
        if self.hit_cap {
            return LpStatus::NumericalFailure;
        }
        let rhs_scale =
            S::one() + (0..rows).fold(S::zero(), |m, i| m.max(self.t[[i, self.ncols]].abs()));
        // The value cell holds the negated phase-1 objective.
        if -self.obj[self.ncols] > S::cst(self.opts.tol_feas * 100.0) * rhs_scale {
            return LpStatus::Infeasible;
        }
        self.evict_artificials();
        LpStatus::Optimal
    }

    fn run_phase2(&mut self, p: &LpProblem<S>) -> LpStatus {
        let costs = self.phase_costs(Some(&p.c));
        self.reset_objective(&costs);
        self.bland = false;
        self.stall = 0;
        self.unbounded = false;
        self.iterate(false);
        if self.hit_cap {
            LpStatus::NumericalFailure
        } else if self.unbounded {
            LpStatus::Unbounded
        } else {
            LpStatus::Optimal
        }
    }

    fn failed(&self, status: LpStatus) -> LpSolution<S> {
        LpSolution {
            status,
            x: Array1::zeros(self.n),
            value: S::nan(),
            active: vec![],
            dual: Array1::zeros(self.m_ub),
            dual_eq: Array1::zeros(self.m_eq),
            iterations: self.iterations,
        }
    }

    fn extract(&mut self, p: &LpProblem<S>, phase1: LpStatus) -> LpSolution<S> {
        let n = self.n;
        if phase1 != LpStatus::Optimal {
            return self.failed(phase1);
        }
        let status = self.run_phase2(p);
        if status != LpStatus::Optimal {
            return self.failed(status);
        }

        let mut x = Array1::zeros(n);
        for (i, &b) in self.basis.iter().enumerate() {
            let v = self.t[[i, self.ncols]];
            if b < n {
                x[b] += v;
            } else if b < 2 * n {
                x[b - n] -= v;
            }
        }
        let value = p.c.dot(&x);

        // λ_i is the reduced cost of slack column i; equality multipliers
        // come off the artificial columns, undoing any row sign flip.
        let mut dual = Array1::zeros(self.m_ub);
        for i in 0..self.m_ub {
            dual[i] = self.obj[2 * n + i].max(S::zero());
        }
        let mut dual_eq = Array1::zeros(self.m_eq);
        for i in 0..self.m_eq {
            dual_eq[i] = self.row_sign[self.m_ub + i] * self.obj[self.art0 + self.m_ub + i];
        }

        let tol = S::cst(self.opts.tol_feas);
        let mut active = Vec::new();
        for i in 0..self.m_ub {
            let gap = p.b_ub[i] - p.a_ub.row(i).dot(&x);
            if gap.abs() <= tol * S::cst(100.0) * (S::one() + p.b_ub[i].abs()) {
                active.push(i);
            }
        }

        LpSolution {
            status,
            x,
            value,
            active,
            dual,
            dual_eq,
            iterations: self.iterations,
        }
    }
}

/// Convenience wrapper used by oracles: solve `min c^T x` over `Ax = b`.
pub fn solve_equality_lp<S: Scalar>(
    c: Array1<S>,
    a: Array2<S>,
    b: Array1<S>,
) -> Result<LpSolution<S>, LpError> {
    let n = c.len();
    let p = LpProblem::new(c, Array2::zeros((0, n)), Array1::zeros(0)).with_equalities(a, b);
    solve_lp(&p)
}

pub fn dot<S: Scalar>(a: ArrayView1<'_, S>, b: ArrayView1<'_, S>) -> S {
    a.dot(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_cone_lp_solves_to_origin() {
        // min x2 over the degenerate three-row cone; all rows tight at 0.
        let p = LpProblem::new(
            array![0.0, 1.0],
            array![[-1.0, -1.0], [1.0, -1.0], [0.5, -1.0]],
            array![0.0, 0.0, 0.0],
        );
        let sol = solve_lp(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.x[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.x[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.value, 0.0, epsilon = 1e-12);
        assert_eq!(sol.active, vec![0, 1, 2]);
    }

    #[test]
    fn zero_objective_is_optimal() {
        let p = LpProblem::new(array![0.0], array![[1.0]], array![1.0]);
        let sol = solve_lp(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, 0.0);
    }

    #[test]
    fn detects_unbounded() {
        let p = LpProblem::new(array![-1.0], array![[-1.0]], array![0.0]);
        let sol = solve_lp(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn detects_infeasible() {
        let p = LpProblem::new(array![1.0], array![[1.0], [-1.0]], array![-1.0, -1.0]);
        let sol = solve_lp(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn negative_rhs_feasible_problem() {
        // x ≥ 2 via  -x ≤ -2, minimize x.
        let p = LpProblem::new(array![1.0], array![[-1.0]], array![-2.0]);
        let sol = solve_lp(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.x[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.dual[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn equality_rows_are_respected() {
        // min x + y s.t. x + y = 2, x - y ≤ 0.
        let p = LpProblem::new(array![1.0, 1.0], array![[1.0, -1.0]], array![0.0])
            .with_equalities(array![[1.0, 1.0]], array![2.0]);
        let sol = solve_lp(&p).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_abs_diff_eq!(sol.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_identity_basis() {
        let gamma = closed_form_gamma(
            &array![[1.0, 0.0], [0.0, 1.0]],
            &array![-1.0, -2.0],
        )
        .unwrap();
        assert_eq!(gamma, array![-1.0, -2.0]);
    }

    #[test]
    fn closed_form_degen_active_pair() {
        let gamma = closed_form_gamma(
            &array![[-1.0, -1.0], [1.0, -1.0]],
            &array![0.0, -4.0],
        )
        .unwrap();
        assert_abs_diff_eq!(gamma[0], -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gamma[1], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_rejects_singular_basis() {
        let r = closed_form_gamma(&array![[1.0, 1.0], [2.0, 2.0]], &array![1.0, 2.0]);
        assert!(r.is_err());
    }

    #[test]
    fn closed_form_matches_equality_lp_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let n = 5;
            let mut a = Array2::zeros((n, n));
            for i in 0..n {
                for j in 0..n {
                    a[[i, j]] = rng.gen_range(-1.0..1.0) + if i == j { 6.0 } else { 0.0 };
                }
            }
            let w = Array1::from_iter((0..n).map(|_| rng.gen_range(-1.0..1.0)));
            let gamma = closed_form_gamma(&a, &w).unwrap();
            let oracle = solve_equality_lp(Array1::zeros(n), a.clone(), w.clone()).unwrap();
            assert_eq!(oracle.status, LpStatus::Optimal);
            for j in 0..n {
                assert_abs_diff_eq!(gamma[j], oracle.x[j], epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn kkt_and_duality_hold_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut optimal = 0;
        for _ in 0..50 {
            let n = rng.gen_range(2..5);
            let m = rng.gen_range(n..2 * n + 3);
            let a = Array2::from_shape_fn((m, n), |_| rng.gen_range(-1.0..1.0f64));
            // Keep it bounded and feasible: rows x_j ≤ 1 appended, rhs slack.
            let x0 = Array1::from_iter((0..n).map(|_| rng.gen_range(-0.5..0.5)));
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for i in 0..m {
                rows.push(a.row(i).to_owned());
                rhs.push(a.row(i).dot(&x0) + rng.gen_range(0.0..1.0));
            }
            for j in 0..n {
                let mut e = Array1::zeros(n);
                e[j] = 1.0;
                rows.push(e.clone());
                rhs.push(2.0);
                rows.push(e.mapv(|v: f64| -v));
                rhs.push(2.0);
            }
            let total = rows.len();
            let mut g = Array2::zeros((total, n));
            for (i, r) in rows.iter().enumerate() {
                g.row_mut(i).assign(r);
            }
            let c = Array1::from_iter((0..n).map(|_| rng.gen_range(-1.0..1.0)));
            let p = LpProblem::new(c, g, Array1::from(rhs));
            let sol = solve_lp(&p).unwrap();
            if sol.status == LpStatus::Optimal {
                optimal += 1;
                let res = p.kkt_residuals(&sol);
                assert!(res.primal <= 1e-8, "primal residual {}", res.primal);
                assert!(res.dual <= 1e-8, "dual residual {}", res.dual);
                assert!(res.complementarity <= 1e-8);
                assert!(res.duality_gap <= 1e-8, "gap {}", res.duality_gap);
                assert!(sol.dual.iter().all(|&l| l >= 0.0));
            }
        }
        assert!(optimal >= 45, "only {optimal} optimal out of 50");
    }

    #[test]
    fn deterministic_bitwise() {
        let p: LpProblem<f64> = LpProblem::new(
            array![0.3, -0.7, 0.1],
            array![
                [1.0, 2.0, -1.0],
                [-1.0, 0.5, 0.25],
                [0.0, -1.0, 1.0],
                [1.0, 1.0, 1.0]
            ],
            array![1.0, 2.0, 0.5, 3.0],
        );
        let a = solve_lp(&p).unwrap();
        let b = solve_lp(&p).unwrap();
        assert_eq!(a.x.to_vec(), b.x.to_vec());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.iterations, b.iterations);
    }
}
