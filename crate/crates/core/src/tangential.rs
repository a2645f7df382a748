//! Assembly and solution of the tangential problem
//!
//! ```text
//! min  c^T γ   s.t.   A_i γ + L_i(ΔU_i) ⊆ T_{Q_i}(A_i x̄ - b_i)   for all i
//! ```
//!
//! Each block is classified by its tangent cone at the nominal residual:
//!
//! * interior residual — the tangent cone is the full space and the block
//!   drops out,
//! * boundary residual — each tangent halfspace normal `v` contributes one
//!   linear row `(v^T A_i) γ ≤ -h_i(v)`, where `h_i` is the uncertainty
//!   set's support function in residual space,
//! * zero residual at a second-order cone — the tangent cone is the cone
//!   itself, and the set enters through the vertices of `L_i(ΔU_i)`; one
//!   cone-membership constraint per vertex is enforced by cutting planes.
//!
//! The solution carries an optimality certificate (nonnegative weights
//! reproducing `-c` from the active constraint gradients), a constraint-
//! qualification margin, and a uniqueness flag probed with perturbed
//! objectives.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use thiserror::Error;

use crate::cones::{Cone, TangentCone};
use crate::cutting::{solve_with_cuts, SocConstraint};
use crate::lp::{solve_lp_with, LpError, LpProblem, LpStatus};
use crate::options::SolveOptions;
use crate::program::{ConicProgram, ProgramError};
use crate::scalar::Scalar;
use crate::uncertainty::{LMap, SetError};

#[derive(Debug, Error)]
pub enum TangentialError {
    #[error("nominal point violates block {block} by {violation:e}")]
    InfeasibleNominal { block: usize, violation: f64 },
    #[error("block {block}: zero-residual second-order cone needs a polyhedral uncertainty set: {source}")]
    UnsupportedCombination { block: usize, source: SetError },
    #[error("block {block} uncertainty: {source}")]
    Set { block: usize, source: SetError },
    #[error("block {block} is not an orthant block")]
    NonOrthantBlock { block: usize },
    #[error(transparent)]
    Program(#[from] ProgramError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// One linear tangential constraint `coeffs^T γ ≤ threshold`.
#[derive(Debug, Clone)]
pub struct HalfspaceRow<S> {
    pub block: usize,
    /// Unit normal of the tangent halfspace, in the block's residual space.
    pub normal: Array1<S>,
    /// `A_i^T normal`, the row over γ.
    pub coeffs: Array1<S>,
    /// `-support(ΔU_i, L_i, normal)`.
    pub threshold: S,
}

/// A zero-residual second-order-cone block: `A γ + u ∈ cone` for every
/// vertex `u` of `L(ΔU)`.
#[derive(Debug, Clone)]
pub struct SelfConeBlock<S> {
    pub block: usize,
    pub a: Array2<S>,
    pub cone: Cone<S>,
    pub vertices: Vec<Array1<S>>,
}

#[derive(Debug, Clone)]
pub struct TangentialProblem<S> {
    pub nvars: usize,
    pub objective: Array1<S>,
    pub rows: Vec<HalfspaceRow<S>>,
    pub selfcone: Vec<SelfConeBlock<S>>,
    /// Blocks whose residual is interior (tangential constraint vanished).
    pub dropped: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CertificateCheck<S> {
    pub certified: bool,
    /// L1 residual of `-c - Σ λ_j g_j` over nonnegative weights λ.
    pub residual: S,
    pub weights: Vec<S>,
}

#[derive(Debug, Clone)]
pub struct TangentialSolution<S> {
    pub status: LpStatus,
    pub gamma: Array1<S>,
    /// `c^T γ̄`.
    pub vtilde: S,
    /// Indices into the problem's halfspace rows active at γ̄.
    pub active: Vec<usize>,
    /// Cutting planes generated for self-cone blocks, as extra rows.
    pub cuts: Vec<HalfspaceRow<S>>,
    pub unique: bool,
    pub certified: bool,
    pub cert_residual: S,
    /// Positive margin certifies the constraint qualification
    /// `∃ γ': A_i γ' ∈ int(T_i)` for all retained blocks.
    pub cq_margin: S,
    pub warnings: Vec<String>,
}

impl<S: Scalar> TangentialProblem<S> {
    /// Worst constraint violation of `γ` over rows and self-cone vertices.
    pub fn violation(&self, gamma: &Array1<S>) -> S {
        let mut worst = S::neg_infinity();
        for row in &self.rows {
            worst = worst.max(row.coeffs.dot(gamma) - row.threshold);
        }
        for sc in &self.selfcone {
            for u in &sc.vertices {
                let w = sc.a.dot(gamma) + u;
                worst = worst.max(sc.cone.violation(w.view()).unwrap_or(S::infinity()));
            }
        }
        if worst == S::neg_infinity() {
            S::zero()
        } else {
            worst
        }
    }

    pub fn is_feasible(&self, gamma: &Array1<S>, tol: S) -> bool {
        self.violation(gamma) <= tol
    }
}

/// Build the tangential problem of a program at the nominal solution `x̄`.
pub fn build_tangential<S: Scalar>(
    p: &ConicProgram<S>,
    xbar: &Array1<S>,
    opts: &SolveOptions,
) -> Result<TangentialProblem<S>, TangentialError> {
    p.validate()?;
    let l = LMap::new(xbar.clone());
    let mut rows = Vec::new();
    let mut selfcone = Vec::new();
    let mut dropped = Vec::new();
    for (i, blk) in p.blocks.iter().enumerate() {
        let z = blk.residual(xbar);
        let tol_blk = blk.tol_act(&opts.tol);
        let viol = blk
            .cone
            .violation(z.view())
            .map_err(|source| ProgramError::Cone { block: i, source })?;
        if viol > tol_blk {
            return Err(TangentialError::InfeasibleNominal {
                block: i,
                violation: viol.as_f64(),
            });
        }
        let tangent = blk
            .cone
            .tangent_cone_at(z.view(), tol_blk)
            .map_err(|source| ProgramError::Cone { block: i, source })?;
        match tangent {
            TangentCone::FullSpace => dropped.push(i),
            TangentCone::Halfspaces(normals) => {
                for v in normals {
                    let support = blk
                        .uncertainty
                        .support(&l, v.view())
                        .map_err(|source| TangentialError::Set { block: i, source })?;
                    rows.push(HalfspaceRow {
                        block: i,
                        coeffs: blk.a.t().dot(&v),
                        normal: v,
                        threshold: -support,
                    });
                }
            }
            TangentCone::SelfCone(cone) => {
                let vertices = blk
                    .uncertainty
                    .l_image_vertices(&l)
                    .map_err(|source| TangentialError::UnsupportedCombination {
                        block: i,
                        source,
                    })?;
                selfcone.push(SelfConeBlock {
                    block: i,
                    a: blk.a.clone(),
                    cone,
                    vertices,
                });
            }
        }
    }
    Ok(TangentialProblem {
        nvars: p.nvars(),
        objective: p.c.clone(),
        rows,
        selfcone,
        dropped,
    })
}

/// Specialization of [`build_tangential`] to pure-LP programs: one row per
/// active orthant row, thresholds straight from the support function. The
/// result is row-for-row identical to the general path.
pub fn first_order_problem_lp<S: Scalar>(
    p: &ConicProgram<S>,
    xbar: &Array1<S>,
    opts: &SolveOptions,
) -> Result<TangentialProblem<S>, TangentialError> {
    p.validate()?;
    let l = LMap::new(xbar.clone());
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    for (i, blk) in p.blocks.iter().enumerate() {
        let Cone::OrthantNonpositive { dim } = blk.cone else {
            return Err(TangentialError::NonOrthantBlock { block: i });
        };
        let z = blk.residual(xbar);
        let tol_blk = blk.tol_act(&opts.tol);
        if z.iter().any(|&r| r > tol_blk) {
            return Err(TangentialError::InfeasibleNominal {
                block: i,
                violation: z.iter().fold(S::zero(), |m, &r| m.max(r)).as_f64(),
            });
        }
        let mut any = false;
        for j in 0..dim {
            if z[j].abs() <= tol_blk {
                any = true;
                let mut e = Array1::zeros(dim);
                e[j] = S::one();
                let support = blk
                    .uncertainty
                    .support(&l, e.view())
                    .map_err(|source| TangentialError::Set { block: i, source })?;
                rows.push(HalfspaceRow {
                    block: i,
                    coeffs: blk.a.row(j).to_owned(),
                    normal: e,
                    threshold: -support,
                });
            }
        }
        if !any {
            dropped.push(i);
        }
    }
    Ok(TangentialProblem {
        nvars: p.nvars(),
        objective: p.c.clone(),
        rows,
        selfcone: vec![],
        dropped,
    })
}

fn assemble_rows<S: Scalar>(tp: &TangentialProblem<S>) -> (Array2<S>, Array1<S>) {
    let mut g = Array2::zeros((tp.rows.len(), tp.nvars));
    let mut h = Array1::zeros(tp.rows.len());
    for (i, row) in tp.rows.iter().enumerate() {
        g.row_mut(i).assign(&row.coeffs);
        h[i] = row.threshold;
    }
    (g, h)
}

fn soc_constraints<S: Scalar>(tp: &TangentialProblem<S>) -> (Vec<SocConstraint<S>>, Vec<usize>) {
    let mut cons = Vec::new();
    let mut owner = Vec::new();
    for sc in &tp.selfcone {
        for u in &sc.vertices {
            cons.push(SocConstraint {
                a: sc.a.clone(),
                offset: u.clone(),
                margin_col: None,
            });
            owner.push(sc.block);
        }
    }
    (cons, owner)
}

fn solve_raw<S: Scalar>(
    tp: &TangentialProblem<S>,
    objective: &Array1<S>,
    opts: &SolveOptions,
) -> Result<(LpStatus, Array1<S>, Vec<HalfspaceRow<S>>), TangentialError> {
    let (g, h) = assemble_rows(tp);
    let (soc, owner) = soc_constraints(tp);
    if soc.is_empty() {
        let p = LpProblem::new(objective.clone(), g, h);
        let sol = solve_lp_with(&p, &opts.tol.lp_options())?;
        return Ok((sol.status, sol.x, vec![]));
    }
    let out = solve_with_cuts(objective, &g, &h, &soc, &opts.tol)?;
    let cuts = out
        .cuts
        .into_iter()
        .map(|cut| HalfspaceRow {
            block: owner[cut.source],
            normal: cut.normal,
            coeffs: cut.coeffs,
            threshold: cut.rhs,
        })
        .collect();
    Ok((out.status, out.solution.x, cuts))
}

/// Solve the tangential problem: γ̄, ṽ, active set, certificate, CQ margin
/// and a uniqueness flag.
pub fn solve_tangential<S: Scalar>(
    tp: &TangentialProblem<S>,
    opts: &SolveOptions,
) -> Result<TangentialSolution<S>, TangentialError> {
    let (status, gamma, cuts) = solve_raw(tp, &tp.objective, opts)?;
    if status != LpStatus::Optimal {
        return Ok(TangentialSolution {
            status,
            gamma: Array1::zeros(tp.nvars),
            vtilde: S::nan(),
            active: vec![],
            cuts,
            unique: false,
            certified: false,
            cert_residual: S::nan(),
            cq_margin: S::nan(),
            warnings: vec![],
        });
    }
    let vtilde = tp.objective.dot(&gamma);
    let tol_active = S::cst(opts.tol.tol_feas * 100.0);
    let active = tp
        .rows
        .iter()
        .enumerate()
        .filter(|(_, row)| {
            (row.coeffs.dot(&gamma) - row.threshold).abs()
                <= tol_active * (S::one() + row.threshold.abs())
        })
        .map(|(i, _)| i)
        .collect();

    let mut sol = TangentialSolution {
        status,
        gamma,
        vtilde,
        active,
        cuts,
        unique: false,
        certified: false,
        cert_residual: S::nan(),
        cq_margin: S::nan(),
        warnings: vec![],
    };

    let cert = check_certificate(tp, &sol, opts);
    sol.certified = cert.certified;
    sol.cert_residual = cert.residual;

    sol.cq_margin = cq_margin(tp, opts)?;
    if sol.cq_margin <= S::zero() {
        sol.warnings.push(format!(
            "constraint qualification margin is {:.3e}; first-order prediction may be unreliable",
            sol.cq_margin.as_f64()
        ));
    }

    sol.unique = probe_uniqueness(tp, &sol.gamma, opts)?;
    Ok(sol)
}

/// Re-solve with two perturbed objectives `c ± μ d` and call the minimizer
/// unique when both stay within the probe distance of γ̄.
fn probe_uniqueness<S: Scalar>(
    tp: &TangentialProblem<S>,
    gamma: &Array1<S>,
    opts: &SolveOptions,
) -> Result<bool, TangentialError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mu = S::cst(opts.tol.probe_mu);
    let scale = S::one() + crate::linalg::norm_inf(tp.objective.view());
    let dir = Array1::from_iter((0..tp.nvars).map(|_| S::cst(rng.gen_range(-1.0..1.0)) * scale));
    let threshold = S::cst(opts.tol.probe_dist)
        * (S::one() + crate::linalg::norm2(gamma.view()));
    for sign in [S::one(), -S::one()] {
        let perturbed = &tp.objective + &dir.mapv(|x| x * mu * sign);
        let (status, g, _) = solve_raw(tp, &perturbed, opts)?;
        if status != LpStatus::Optimal {
            return Ok(false);
        }
        if crate::linalg::norm2((&g - gamma).view()) > threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Optimality certificate: nonnegative weights on the active constraint
/// gradients reproducing `-c`, found by an L1 feasibility LP.
pub fn check_certificate<S: Scalar>(
    tp: &TangentialProblem<S>,
    sol: &TangentialSolution<S>,
    opts: &SolveOptions,
) -> CertificateCheck<S> {
    let n = tp.nvars;
    let tol_active = S::cst(opts.tol.tol_feas * 100.0);
    let mut gradients: Vec<&Array1<S>> = sol.active.iter().map(|&i| &tp.rows[i].coeffs).collect();
    for cut in &sol.cuts {
        if (cut.coeffs.dot(&sol.gamma) - cut.threshold).abs()
            <= tol_active * (S::one() + cut.threshold.abs())
        {
            gradients.push(&cut.coeffs);
        }
    }
    let j = gradients.len();

    // Variables (λ_1..λ_j, t_1..t_n):  min Σ t
    // s.t.  ±(Σ λ g + c)_i ≤ t_i,  λ ≥ 0.
    let nv = j + n;
    let mut c_lp = Array1::zeros(nv);
    for i in 0..n {
        c_lp[j + i] = S::one();
    }
    let mut rows = Array2::zeros((2 * n + j, nv));
    let mut rhs = Array1::zeros(2 * n + j);
    for i in 0..n {
        for (jj, grad) in gradients.iter().enumerate() {
            rows[[2 * i, jj]] = -grad[i];
            rows[[2 * i + 1, jj]] = grad[i];
        }
        rows[[2 * i, j + i]] = -S::one();
        rows[[2 * i + 1, j + i]] = -S::one();
        rhs[2 * i] = tp.objective[i];
        rhs[2 * i + 1] = -tp.objective[i];
    }
    for jj in 0..j {
        rows[[2 * n + jj, jj]] = -S::one();
    }
    let p = LpProblem::new(c_lp, rows, rhs);
    match solve_lp_with(&p, &opts.tol.lp_options()) {
        Ok(lp_sol) if lp_sol.status == LpStatus::Optimal => {
            let residual = lp_sol.value.max(S::zero());
            CertificateCheck {
                certified: residual <= S::cst(opts.tol.cert_residual),
                residual,
                weights: (0..j).map(|jj| lp_sol.x[jj].max(S::zero())).collect(),
            }
        }
        _ => CertificateCheck {
            certified: false,
            residual: S::infinity(),
            weights: vec![],
        },
    }
}

/// Constraint-qualification margin: the optimum of
/// `max s  s.t.  (v^T A_i) γ + s ≤ 0` over unit tangent normals, with
/// self-cone blocks entering as `g(A_i γ) + s ≤ 0` cuts, boxed to
/// `‖γ‖_∞ ≤ 1, s ≤ 1`. Positive means some γ' maps strictly inside every
/// retained tangent cone.
pub fn cq_margin<S: Scalar>(
    tp: &TangentialProblem<S>,
    opts: &SolveOptions,
) -> Result<S, TangentialError> {
    let n = tp.nvars;
    let nv = n + 1;
    let margin_rows = tp.rows.len();
    let mut g = Array2::zeros((margin_rows + 2 * n + 1, nv));
    let mut h = Array1::zeros(margin_rows + 2 * n + 1);
    for (i, row) in tp.rows.iter().enumerate() {
        for jj in 0..n {
            g[[i, jj]] = row.coeffs[jj];
        }
        g[[i, n]] = S::one();
    }
    for jj in 0..n {
        g[[margin_rows + 2 * jj, jj]] = S::one();
        h[margin_rows + 2 * jj] = S::one();
        g[[margin_rows + 2 * jj + 1, jj]] = -S::one();
        h[margin_rows + 2 * jj + 1] = S::one();
    }
    g[[margin_rows + 2 * n, n]] = S::one();
    h[margin_rows + 2 * n] = S::one();

    let mut obj = Array1::zeros(nv);
    obj[n] = -S::one();

    let soc: Vec<SocConstraint<S>> = tp
        .selfcone
        .iter()
        .map(|sc| {
            let k = sc.a.nrows();
            let mut a = Array2::zeros((k, nv));
            for i in 0..k {
                for jj in 0..n {
                    a[[i, jj]] = sc.a[[i, jj]];
                }
            }
            SocConstraint {
                a,
                offset: Array1::zeros(k),
                margin_col: Some(n),
            }
        })
        .collect();

    let out = solve_with_cuts(&obj, &g, &h, &soc, &opts.tol)?;
    if out.status != LpStatus::Optimal {
        return Ok(S::neg_infinity());
    }
    Ok(out.solution.x[n])
}
