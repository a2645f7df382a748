//! Cone types and tangent cones at a point.
//!
//! Three cone families are supported:
//!
//! * the nonpositive orthant `ℝ^k_-`, modelling rows `A_i x ≤ b_i`,
//! * the second-order cone `{w ∈ ℝ^k : ‖(w_1,…,w_{k-1})‖₂ ≤ w_0}`
//!   (coordinate 0 is the radius coordinate),
//! * polyhedral cones `{z : v^T z ≤ 0 for every row v}`.
//!
//! The tangent cone of a convex cone Q at a residual point z splits into
//! three cases: the full space when z is interior, Q itself when z = 0, and
//! an intersection of halfspaces when z sits on the boundary. For the
//! second-order cone the boundary halfspace normal is `R z / ‖R z‖`, where
//! `R` flips the sign of the radius coordinate.

use ndarray::{Array1, ArrayView1};
use thiserror::Error;

use crate::linalg::norm2;
use crate::scalar::Scalar;

/// Active-set tolerance used when classifying residuals, absolute on
/// residuals normalized by `1 + ‖b‖_∞` of the owning block.
pub const DEFAULT_TOL_ACT: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum ConeError {
    #[error("dimension mismatch: cone has dim {expected}, point has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cone dimension must be >= 1")]
    EmptyDimension,
    #[error("polyhedral cone row {row} is zero or non-finite")]
    BadRow { row: usize },
    #[error("point lies outside the cone by {violation:e} (tolerance {tol:e})")]
    PointOutsideCone { violation: f64, tol: f64 },
}

/// A closed convex cone in `ℝ^dim`.
#[derive(Debug, Clone, PartialEq)]
pub enum Cone<S> {
    /// `ℝ^k_-`: every coordinate nonpositive.
    OrthantNonpositive { dim: usize },
    /// `{w : ‖(w_1,…,w_{k-1})‖₂ - w_0 ≤ 0}`.
    SecondOrderCone { dim: usize },
    /// `{z : v^T z ≤ 0 for all rows v}`.
    Polyhedral { dim: usize, rows: Vec<Array1<S>> },
}

/// Tangent cone of a [`Cone`] at a feasible point.
#[derive(Debug, Clone, PartialEq)]
pub enum TangentCone<S> {
    /// Residual strictly interior: the tangential constraint vanishes.
    FullSpace,
    /// `{z : v^T z ≤ 0 for all v}` with unit-normalized normals.
    Halfspaces(Vec<Array1<S>>),
    /// Residual numerically zero at a second-order cone: the tangent cone is
    /// the cone itself.
    SelfCone(Cone<S>),
}

impl<S: Scalar> Cone<S> {
    pub fn orthant(dim: usize) -> Result<Self, ConeError> {
        if dim == 0 {
            return Err(ConeError::EmptyDimension);
        }
        Ok(Cone::OrthantNonpositive { dim })
    }

    pub fn soc(dim: usize) -> Result<Self, ConeError> {
        if dim == 0 {
            return Err(ConeError::EmptyDimension);
        }
        Ok(Cone::SecondOrderCone { dim })
    }

    pub fn polyhedral(dim: usize, rows: Vec<Array1<S>>) -> Result<Self, ConeError> {
        if dim == 0 {
            return Err(ConeError::EmptyDimension);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(ConeError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            let n = norm2(row.view());
            if !n.is_finite() || n == S::zero() {
                return Err(ConeError::BadRow { row: i });
            }
        }
        Ok(Cone::Polyhedral { dim, rows })
    }

    pub fn dim(&self) -> usize {
        match self {
            Cone::OrthantNonpositive { dim }
            | Cone::SecondOrderCone { dim }
            | Cone::Polyhedral { dim, .. } => *dim,
        }
    }

    fn check_dim(&self, z: ArrayView1<'_, S>) -> Result<(), ConeError> {
        if z.len() != self.dim() {
            return Err(ConeError::DimensionMismatch {
                expected: self.dim(),
                got: z.len(),
            });
        }
        Ok(())
    }

    /// Largest violation of the defining inequalities at `z`. Nonpositive
    /// values mean membership; polyhedral rows are scaled by their norm so
    /// the value is comparable across rows.
    pub fn violation(&self, z: ArrayView1<'_, S>) -> Result<S, ConeError> {
        self.check_dim(z)?;
        Ok(match self {
            Cone::OrthantNonpositive { .. } => z.iter().fold(S::neg_infinity(), |m, &x| m.max(x)),
            Cone::SecondOrderCone { .. } => norm2(z.slice(ndarray::s![1..])) - z[0],
            Cone::Polyhedral { rows, .. } => rows.iter().fold(S::neg_infinity(), |m, row| {
                m.max(row.dot(&z) / norm2(row.view()))
            }),
        })
    }

    /// Membership within `tol` of the defining inequalities.
    pub fn contains(&self, z: ArrayView1<'_, S>, tol: S) -> Result<bool, ConeError> {
        Ok(self.violation(z)? <= tol)
    }

    /// Tangent cone of the cone at a member point `z`.
    ///
    /// `tol_act` decides which inequalities count as active; `z` must lie in
    /// the cone within the same tolerance.
    pub fn tangent_cone_at(
        &self,
        z: ArrayView1<'_, S>,
        tol_act: S,
    ) -> Result<TangentCone<S>, ConeError> {
        let viol = self.violation(z)?;
        if viol > tol_act {
            return Err(ConeError::PointOutsideCone {
                violation: viol.as_f64(),
                tol: tol_act.as_f64(),
            });
        }
        match self {
            Cone::OrthantNonpositive { dim } => {
                let mut normals = Vec::new();
                for j in 0..*dim {
                    if z[j].abs() <= tol_act {
                        let mut e = Array1::zeros(*dim);
                        e[j] = S::one();
                        normals.push(e);
                    }
                }
                Ok(if normals.is_empty() {
                    TangentCone::FullSpace
                } else {
                    TangentCone::Halfspaces(normals)
                })
            }
            Cone::SecondOrderCone { dim } => {
                if norm2(z) <= tol_act {
                    return Ok(TangentCone::SelfCone(self.clone()));
                }
                let tail_norm = norm2(z.slice(ndarray::s![1..]));
                if z[0] - tail_norm > tol_act {
                    return Ok(TangentCone::FullSpace);
                }
                // Boundary away from the apex: single halfspace normal R z.
                let mut normal = Array1::zeros(*dim);
                normal[0] = -z[0];
                for j in 1..*dim {
                    normal[j] = z[j];
                }
                let n = norm2(normal.view());
                Ok(TangentCone::Halfspaces(vec![normal.mapv(|x| x / n)]))
            }
            Cone::Polyhedral { rows, .. } => {
                let mut normals = Vec::new();
                for row in rows {
                    let n = norm2(row.view());
                    if (row.dot(&z) / n).abs() <= tol_act {
                        normals.push(row.mapv(|x| x / n));
                    }
                }
                Ok(if normals.is_empty() {
                    TangentCone::FullSpace
                } else {
                    TangentCone::Halfspaces(normals)
                })
            }
        }
    }
}

impl<S: Scalar> TangentCone<S> {
    /// Membership of `z` in the tangent cone within `tol`.
    pub fn contains(&self, z: ArrayView1<'_, S>, tol: S) -> Result<bool, ConeError> {
        match self {
            TangentCone::FullSpace => Ok(true),
            TangentCone::Halfspaces(normals) => {
                for v in normals {
                    if v.len() != z.len() {
                        return Err(ConeError::DimensionMismatch {
                            expected: v.len(),
                            got: z.len(),
                        });
                    }
                    if v.dot(&z) > tol {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            TangentCone::SelfCone(cone) => cone.contains(z, tol),
        }
    }
}
