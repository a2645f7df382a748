//! Structured uncertainty sets over `(ΔA, Δb)` perturbations.
//!
//! A set is a small AST: rectangular (entrywise-bounded) boxes and
//! vertex-listed polytopes as leaves, closed under nonnegative scaling,
//! translation and Minkowski sums. Every set denotes a nonempty compact
//! convex region of perturbation space.
//!
//! Sets enter the solvers only through the affine image
//! `L(ΔA, Δb) = (ΔA) x̄ - Δb` and its support function
//! `h(y) = max { y^T L(ΔA, Δb) : (ΔA, Δb) in the set }`,
//! which every variant evaluates exactly:
//!
//! * rectangular: `h(y) = Σ_j |y_j| (δ_j + Σ_k ε_{j,k} |x̄_k|)`,
//! * vertex-listed: maximum over vertex images,
//! * scaling is multiplicative, translation adds `y^T L(shift)`, and a
//!   Minkowski sum adds the two support values.

use ndarray::{Array1, Array2, ArrayView1};
use thiserror::Error;

use crate::scalar::Scalar;

/// Vertex enumeration gives up beyond this many box corners (2^20).
pub const MAX_BOX_CORNERS_LOG2: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum SetError {
    #[error("dimension mismatch: {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("set is not compact convex: {0}")]
    Invalid(String),
    #[error("set is not polyhedral after composition; vertex enumeration unavailable")]
    NotPolyhedral,
    #[error("vertex enumeration would exceed 2^{MAX_BOX_CORNERS_LOG2} corners ({nonzero} nonzero box coordinates)")]
    TooManyCorners { nonzero: usize },
}

/// The affine map `L(ΔA, Δb) = (ΔA) x̄ - Δb` taking perturbations to
/// residual space, defined by the nominal solution `x̄`.
#[derive(Debug, Clone)]
pub struct LMap<S> {
    pub xbar: Array1<S>,
}

impl<S: Scalar> LMap<S> {
    pub fn new(xbar: Array1<S>) -> Self {
        Self { xbar }
    }

    pub fn apply(&self, da: &Array2<S>, db: &Array1<S>) -> Result<Array1<S>, SetError> {
        if da.ncols() != self.xbar.len() {
            return Err(SetError::DimensionMismatch {
                context: "dA columns vs xbar",
                expected: self.xbar.len(),
                got: da.ncols(),
            });
        }
        if da.nrows() != db.len() {
            return Err(SetError::DimensionMismatch {
                context: "dA rows vs db",
                expected: db.len(),
                got: da.nrows(),
            });
        }
        Ok(da.dot(&self.xbar) - db)
    }
}

/// A nonempty compact convex uncertainty set in `(ΔA, Δb)` space.
#[derive(Debug, Clone, PartialEq)]
pub enum UncertaintySet<S> {
    /// `|ΔA_{j,k}| ≤ eps_a[j,k]`, `|Δb_j| ≤ eps_b[j]`.
    Rectangular { eps_a: Array2<S>, eps_b: Array1<S> },
    /// Convex hull of listed `(ΔA, Δb)` pairs.
    VertexPolytope { vertices: Vec<(Array2<S>, Array1<S>)> },
    /// Convex hull of listed `Δb` vectors with `ΔA = 0`.
    BVertexPolytope { ncols: usize, vertices: Vec<Array1<S>> },
    Scaled { lambda: S, inner: Box<UncertaintySet<S>> },
    Translated {
        shift_a: Array2<S>,
        shift_b: Array1<S>,
        inner: Box<UncertaintySet<S>>,
    },
    MinkowskiSum {
        left: Box<UncertaintySet<S>>,
        right: Box<UncertaintySet<S>>,
    },
}

impl<S: Scalar> UncertaintySet<S> {
    /// Residual-space dimension `k` (rows of ΔA, length of Δb).
    pub fn residual_dim(&self) -> usize {
        match self {
            UncertaintySet::Rectangular { eps_b, .. } => eps_b.len(),
            UncertaintySet::VertexPolytope { vertices } => {
                vertices.first().map_or(0, |(_, db)| db.len())
            }
            UncertaintySet::BVertexPolytope { vertices, .. } => {
                vertices.first().map_or(0, |db| db.len())
            }
            UncertaintySet::Scaled { inner, .. } => inner.residual_dim(),
            UncertaintySet::Translated { inner, .. } => inner.residual_dim(),
            UncertaintySet::MinkowskiSum { left, .. } => left.residual_dim(),
        }
    }

    /// Decision-space dimension `n` (columns of ΔA).
    pub fn ncols(&self) -> usize {
        match self {
            UncertaintySet::Rectangular { eps_a, .. } => eps_a.ncols(),
            UncertaintySet::VertexPolytope { vertices } => {
                vertices.first().map_or(0, |(da, _)| da.ncols())
            }
            UncertaintySet::BVertexPolytope { ncols, .. } => *ncols,
            UncertaintySet::Scaled { inner, .. } => inner.ncols(),
            UncertaintySet::Translated { inner, .. } => inner.ncols(),
            UncertaintySet::MinkowskiSum { left, .. } => left.ncols(),
        }
    }

    /// Structural check that the AST denotes a nonempty compact convex set.
    pub fn validate_compact_convex(&self) -> Result<(), SetError> {
        match self {
            UncertaintySet::Rectangular { eps_a, eps_b } => {
                if eps_a.nrows() != eps_b.len() {
                    return Err(SetError::DimensionMismatch {
                        context: "epsA rows vs epsB",
                        expected: eps_b.len(),
                        got: eps_a.nrows(),
                    });
                }
                for x in eps_a.iter().chain(eps_b.iter()) {
                    if !x.is_finite() || *x < S::zero() {
                        return Err(SetError::Invalid(format!(
                            "rectangular bounds must be finite and >= 0, got {x}"
                        )));
                    }
                }
                Ok(())
            }
            UncertaintySet::VertexPolytope { vertices } => {
                if vertices.is_empty() {
                    return Err(SetError::Invalid("empty vertex list".into()));
                }
                let (k, n) = (vertices[0].1.len(), vertices[0].0.ncols());
                for (da, db) in vertices {
                    if da.nrows() != db.len() || db.len() != k || da.ncols() != n {
                        return Err(SetError::DimensionMismatch {
                            context: "vertex shapes inconsistent",
                            expected: k,
                            got: db.len(),
                        });
                    }
                    if da.iter().chain(db.iter()).any(|x| !x.is_finite()) {
                        return Err(SetError::Invalid("non-finite vertex entry".into()));
                    }
                }
                Ok(())
            }
            UncertaintySet::BVertexPolytope { vertices, .. } => {
                if vertices.is_empty() {
                    return Err(SetError::Invalid("empty vertex list".into()));
                }
                let k = vertices[0].len();
                for db in vertices {
                    if db.len() != k {
                        return Err(SetError::DimensionMismatch {
                            context: "b-vertex lengths inconsistent",
                            expected: k,
                            got: db.len(),
                        });
                    }
                    if db.iter().any(|x| !x.is_finite()) {
                        return Err(SetError::Invalid("non-finite vertex entry".into()));
                    }
                }
                Ok(())
            }
            UncertaintySet::Scaled { lambda, inner } => {
                if !lambda.is_finite() || *lambda < S::zero() {
                    return Err(SetError::Invalid(format!(
                        "scale factor must be finite and >= 0, got {lambda}"
                    )));
                }
                inner.validate_compact_convex()
            }
            UncertaintySet::Translated {
                shift_a,
                shift_b,
                inner,
            } => {
                if shift_a.nrows() != shift_b.len()
                    || shift_b.len() != inner.residual_dim()
                    || shift_a.ncols() != inner.ncols()
                {
                    return Err(SetError::DimensionMismatch {
                        context: "translation shift vs inner set",
                        expected: inner.residual_dim(),
                        got: shift_b.len(),
                    });
                }
                if shift_a.iter().chain(shift_b.iter()).any(|x| !x.is_finite()) {
                    return Err(SetError::Invalid("non-finite translation".into()));
                }
                inner.validate_compact_convex()
            }
            UncertaintySet::MinkowskiSum { left, right } => {
                left.validate_compact_convex()?;
                right.validate_compact_convex()?;
                if left.residual_dim() != right.residual_dim() {
                    return Err(SetError::DimensionMismatch {
                        context: "minkowski summand residual dims",
                        expected: left.residual_dim(),
                        got: right.residual_dim(),
                    });
                }
                Ok(())
            }
        }
    }

    pub fn is_compact_convex(&self) -> bool {
        self.validate_compact_convex().is_ok()
    }

    /// Per-coordinate reach of `L(set)` for a rectangular set:
    /// `r_j = δ_j + Σ_k ε_{j,k} |x̄_k|`.
    fn box_radii(eps_a: &Array2<S>, eps_b: &Array1<S>, l: &LMap<S>) -> Result<Array1<S>, SetError> {
        if eps_a.ncols() != l.xbar.len() {
            return Err(SetError::DimensionMismatch {
                context: "epsA columns vs xbar",
                expected: l.xbar.len(),
                got: eps_a.ncols(),
            });
        }
        Ok(Array1::from_iter((0..eps_b.len()).map(|j| {
            eps_b[j]
                + (0..eps_a.ncols())
                    .map(|k| eps_a[[j, k]] * l.xbar[k].abs())
                    .sum()
        })))
    }

    /// Exact support function `max { y^T ((ΔA) x̄ - Δb) }` over the set.
    pub fn support(&self, l: &LMap<S>, y: ArrayView1<'_, S>) -> Result<S, SetError> {
        if y.len() != self.residual_dim() {
            return Err(SetError::DimensionMismatch {
                context: "support direction vs residual dim",
                expected: self.residual_dim(),
                got: y.len(),
            });
        }
        match self {
            UncertaintySet::Rectangular { eps_a, eps_b } => {
                let radii = Self::box_radii(eps_a, eps_b, l)?;
                Ok(y.iter()
                    .zip(radii.iter())
                    .map(|(&yj, &rj)| yj.abs() * rj)
                    .sum())
            }
            UncertaintySet::VertexPolytope { vertices } => {
                let mut best = S::neg_infinity();
                for (da, db) in vertices {
                    best = best.max(y.dot(&l.apply(da, db)?));
                }
                Ok(best)
            }
            UncertaintySet::BVertexPolytope { vertices, .. } => Ok(vertices
                .iter()
                .map(|db| -y.dot(db))
                .fold(S::neg_infinity(), S::max)),
            UncertaintySet::Scaled { lambda, inner } => Ok(*lambda * inner.support(l, y)?),
            UncertaintySet::Translated {
                shift_a,
                shift_b,
                inner,
            } => Ok(inner.support(l, y)? + y.dot(&l.apply(shift_a, shift_b)?)),
            UncertaintySet::MinkowskiSum { left, right } => {
                Ok(left.support(l, y)? + right.support(l, y)?)
            }
        }
    }

    /// True when the composed image `L(set)` is a polytope we can enumerate.
    pub fn is_polyhedral(&self) -> bool {
        match self {
            UncertaintySet::Rectangular { .. }
            | UncertaintySet::VertexPolytope { .. }
            | UncertaintySet::BVertexPolytope { .. } => true,
            UncertaintySet::Scaled { inner, .. } => inner.is_polyhedral(),
            UncertaintySet::Translated { inner, .. } => inner.is_polyhedral(),
            UncertaintySet::MinkowskiSum { left, right } => {
                left.is_polyhedral() && right.is_polyhedral()
            }
        }
    }

    /// Finite list `V` with `conv(V) = L(set)`.
    ///
    /// Rectangular sets map to a centered coordinate box whose corners are
    /// enumerated by sign pattern; vertex lists map through `L`; scaling,
    /// translation and Minkowski sums act vertexwise (sums pairwise).
    pub fn l_image_vertices(&self, l: &LMap<S>) -> Result<Vec<Array1<S>>, SetError> {
        match self {
            UncertaintySet::Rectangular { eps_a, eps_b } => {
                let radii = Self::box_radii(eps_a, eps_b, l)?;
                let active: Vec<usize> = (0..radii.len())
                    .filter(|&j| radii[j] > S::zero())
                    .collect();
                if active.len() > MAX_BOX_CORNERS_LOG2 {
                    return Err(SetError::TooManyCorners {
                        nonzero: active.len(),
                    });
                }
                let mut corners = Vec::with_capacity(1 << active.len());
                for mask in 0u32..(1u32 << active.len()) {
                    let mut v = Array1::zeros(radii.len());
                    for (bit, &j) in active.iter().enumerate() {
                        v[j] = if mask >> bit & 1 == 1 {
                            radii[j]
                        } else {
                            -radii[j]
                        };
                    }
                    corners.push(v);
                }
                Ok(corners)
            }
            UncertaintySet::VertexPolytope { vertices } => vertices
                .iter()
                .map(|(da, db)| l.apply(da, db))
                .collect(),
            UncertaintySet::BVertexPolytope { vertices, .. } => {
                Ok(vertices.iter().map(|db| db.mapv(|x| -x)).collect())
            }
            UncertaintySet::Scaled { lambda, inner } => {
                if *lambda == S::zero() {
                    return Ok(vec![Array1::zeros(self.residual_dim())]);
                }
                Ok(inner
                    .l_image_vertices(l)?
                    .into_iter()
                    .map(|v| v.mapv(|x| x * *lambda))
                    .collect())
            }
            UncertaintySet::Translated {
                shift_a,
                shift_b,
                inner,
            } => {
                let offset = l.apply(shift_a, shift_b)?;
                Ok(inner
                    .l_image_vertices(l)?
                    .into_iter()
                    .map(|v| v + &offset)
                    .collect())
            }
            UncertaintySet::MinkowskiSum { left, right } => {
                if !self.is_polyhedral() {
                    return Err(SetError::NotPolyhedral);
                }
                let lv = left.l_image_vertices(l)?;
                let rv = right.l_image_vertices(l)?;
                if lv.len().saturating_mul(rv.len()) > 1 << MAX_BOX_CORNERS_LOG2 {
                    return Err(SetError::TooManyCorners {
                        nonzero: MAX_BOX_CORNERS_LOG2,
                    });
                }
                let mut out = Vec::with_capacity(lv.len() * rv.len());
                for a in &lv {
                    for b in &rv {
                        out.push(a + b);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Reduce the AST to a centered box `(epsA, epsB)` in perturbation space
    /// when it denotes one: rectangular leaves, their nonnegative scalings,
    /// and Minkowski sums thereof. Translations break the symmetry.
    pub fn as_centered_box(&self) -> Option<(Array2<S>, Array1<S>)> {
        match self {
            UncertaintySet::Rectangular { eps_a, eps_b } => Some((eps_a.clone(), eps_b.clone())),
            UncertaintySet::Scaled { lambda, inner } => {
                let (ea, eb) = inner.as_centered_box()?;
                Some((ea.mapv(|x| x * *lambda), eb.mapv(|x| x * *lambda)))
            }
            UncertaintySet::MinkowskiSum { left, right } => {
                let (la, lb) = left.as_centered_box()?;
                let (ra, rb) = right.as_centered_box()?;
                if la.dim() != ra.dim() || lb.len() != rb.len() {
                    return None;
                }
                Some((la + &ra, lb + &rb))
            }
            _ => None,
        }
    }

    /// Explicit `(ΔA, Δb)` corner list whose hull is the set, for variants
    /// built from vertex leaves. Rectangular leaves are excluded (their
    /// corner count explodes in matrix space); use [`Self::as_centered_box`].
    pub fn du_vertices(&self) -> Option<Vec<(Array2<S>, Array1<S>)>> {
        match self {
            UncertaintySet::Rectangular { .. } => None,
            UncertaintySet::VertexPolytope { vertices } => Some(vertices.clone()),
            UncertaintySet::BVertexPolytope { ncols, vertices } => Some(
                vertices
                    .iter()
                    .map(|db| (Array2::zeros((db.len(), *ncols)), db.clone()))
                    .collect(),
            ),
            UncertaintySet::Scaled { lambda, inner } => Some(
                inner
                    .du_vertices()?
                    .into_iter()
                    .map(|(da, db)| (da.mapv(|x| x * *lambda), db.mapv(|x| x * *lambda)))
                    .collect(),
            ),
            UncertaintySet::Translated {
                shift_a,
                shift_b,
                inner,
            } => Some(
                inner
                    .du_vertices()?
                    .into_iter()
                    .map(|(da, db)| (da + shift_a, db + shift_b))
                    .collect(),
            ),
            UncertaintySet::MinkowskiSum { left, right } => {
                let lv = left.du_vertices()?;
                let rv = right.du_vertices()?;
                if lv.len().saturating_mul(rv.len()) > 1 << MAX_BOX_CORNERS_LOG2 {
                    return None;
                }
                let mut out = Vec::with_capacity(lv.len() * rv.len());
                for (la, lb) in &lv {
                    for (ra, rb) in &rv {
                        out.push((la + ra, lb + rb));
                    }
                }
                Some(out)
            }
        }
    }

    /// Convenience: `{0}` uncertainty of the given shape.
    pub fn zero(residual_dim: usize, ncols: usize) -> Self {
        UncertaintySet::Rectangular {
            eps_a: Array2::zeros((residual_dim, ncols)),
            eps_b: Array1::zeros(residual_dim),
        }
    }

    pub fn scaled(lambda: S, inner: UncertaintySet<S>) -> Self {
        UncertaintySet::Scaled {
            lambda,
            inner: Box::new(inner),
        }
    }

    pub fn sum(left: UncertaintySet<S>, right: UncertaintySet<S>) -> Self {
        UncertaintySet::MinkowskiSum {
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::{array, Array2};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bvertex(ncols: usize, vertices: Vec<Array1<f64>>) -> UncertaintySet<f64> {
        UncertaintySet::BVertexPolytope { ncols, vertices }
    }

    #[test]
    fn rectangular_support_along_axis_matches_closed_form() {
        // One-row set: h(e_0) = δ_0 + Σ_k ε_{0,k} |x̄_k|.
        let set = UncertaintySet::Rectangular {
            eps_a: array![[0.5, 2.0]],
            eps_b: array![3.0],
        };
        let l = LMap::new(array![-1.0, 2.0]);
        let h = set.support(&l, array![1.0].view()).unwrap();
        assert_abs_diff_eq!(h, 3.0 + 0.5 * 1.0 + 2.0 * 2.0, epsilon = 1e-15);
    }

    #[test]
    fn support_at_zero_direction_is_zero() {
        let set = bvertex(2, vec![array![1.0, -2.0, 0.5], array![0.0, 1.0, 0.0]]);
        let l = LMap::new(array![0.3, -0.7]);
        assert_eq!(set.support(&l, array![0.0, 0.0, 0.0].view()).unwrap(), 0.0);
    }

    #[test]
    fn minkowski_support_matches_pairwise_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s1 = bvertex(
            1,
            (0..3)
                .map(|_| Array1::from_iter((0..3).map(|_| rng.gen_range(-1.0..1.0))))
                .collect(),
        );
        let s2 = bvertex(
            1,
            (0..4)
                .map(|_| Array1::from_iter((0..3).map(|_| rng.gen_range(-1.0..1.0))))
                .collect(),
        );
        let sum = UncertaintySet::sum(s1.clone(), s2.clone());
        let l = LMap::new(array![0.0]);
        for _ in 0..20 {
            let y = Array1::from_iter((0..3).map(|_| rng.gen_range(-1.0..1.0)));
            // Oracle: brute force over all pairwise vertex sums.
            let mut best = f64::NEG_INFINITY;
            if let (
                UncertaintySet::BVertexPolytope { vertices: v1, .. },
                UncertaintySet::BVertexPolytope { vertices: v2, .. },
            ) = (&s1, &s2)
            {
                for a in v1 {
                    for b in v2 {
                        best = best.max(y.dot(&(-(a + b))));
                    }
                }
            }
            let h = sum.support(&l, y.view()).unwrap();
            assert_abs_diff_eq!(h, best, epsilon = 1e-12);
        }
    }

    #[test]
    fn degen_bvertex_image_negates_db() {
        let set = bvertex(2, vec![array![0.0, 4.0, 0.0], array![0.0, -4.0, 0.0]]);
        let l = LMap::new(array![0.0, 0.0]);
        let v = set.l_image_vertices(&l).unwrap();
        assert_eq!(v, vec![array![0.0, -4.0, 0.0], array![0.0, 4.0, 0.0]]);
    }

    #[test]
    fn zero_scale_collapses_to_origin() {
        let set = UncertaintySet::scaled(0.0, bvertex(1, vec![array![5.0, -3.0]]));
        let l = LMap::new(array![1.0]);
        assert_eq!(set.l_image_vertices(&l).unwrap(), vec![array![0.0, 0.0]]);
        assert_eq!(set.support(&l, array![1.0, 1.0].view()).unwrap(), 0.0);
    }

    #[test]
    fn rectangular_corners_match_support_in_random_directions() {
        let set = UncertaintySet::Rectangular {
            eps_a: Array2::zeros((2, 1)),
            eps_b: array![1.5, 0.25],
        };
        let l = LMap::new(array![0.0]);
        let corners = set.l_image_vertices(&l).unwrap();
        assert_eq!(corners.len(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let y = array![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let corner_max = corners
                .iter()
                .map(|v| v.dot(&y))
                .fold(f64::NEG_INFINITY, f64::max);
            assert_abs_diff_eq!(
                corner_max,
                set.support(&l, y.view()).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn validation_catches_bad_sets() {
        let singleton = UncertaintySet::Rectangular {
            eps_a: Array2::<f64>::zeros((2, 2)),
            eps_b: Array1::zeros(2),
        };
        assert!(singleton.is_compact_convex());

        let empty = UncertaintySet::<f64>::VertexPolytope { vertices: vec![] };
        assert!(matches!(
            empty.validate_compact_convex(),
            Err(SetError::Invalid(_))
        ));

        let neg = UncertaintySet::scaled(-1.0, singleton);
        assert!(!neg.is_compact_convex());
    }

    #[test]
    fn corner_cap_is_enforced() {
        let k = MAX_BOX_CORNERS_LOG2 + 1;
        let set = UncertaintySet::Rectangular {
            eps_a: Array2::<f64>::zeros((k, 1)),
            eps_b: Array1::ones(k),
        };
        let l = LMap::new(array![0.0]);
        assert!(matches!(
            set.l_image_vertices(&l),
            Err(SetError::TooManyCorners { .. })
        ));
        // Support stays available regardless.
        assert!(set.support(&l, Array1::ones(k).view()).is_ok());
    }

    fn arb_direction() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-2.0f64..2.0, 3)
    }

    proptest! {
        /// Sublinearity and positive homogeneity of the support function.
        #[test]
        fn support_is_sublinear(
            y1 in arb_direction(),
            y2 in arb_direction(),
            lam in 0.0f64..5.0,
            db in prop::collection::vec(-1.0f64..1.0, 3),
        ) {
            let set = UncertaintySet::sum(
                UncertaintySet::Rectangular {
                    eps_a: Array2::from_elem((3, 2), 0.3),
                    eps_b: array![0.1, 0.2, 0.4],
                },
                bvertex(2, vec![Array1::from(db), Array1::zeros(3)]),
            );
            let l = LMap::new(array![0.5, -1.5]);
            let y1 = Array1::from(y1);
            let y2 = Array1::from(y2);
            let h = |y: &Array1<f64>| set.support(&l, y.view()).unwrap();
            prop_assert!(h(&(&y1 + &y2)) <= h(&y1) + h(&y2) + 1e-12);
            let scaled = y1.mapv(|x| x * lam);
            prop_assert!((h(&scaled) - lam * h(&y1)).abs() <= 1e-12 * (1.0 + h(&y1).abs()));
        }

        /// Support of a Minkowski sum is exactly additive, scaling multiplicative,
        /// and the polyhedral support equals the vertex-image maximum.
        #[test]
        fn support_algebra_and_vertex_oracle(
            y in arb_direction(),
            lam in 0.0f64..3.0,
        ) {
            let s1 = UncertaintySet::Rectangular {
                eps_a: Array2::from_elem((3, 2), 0.25),
                eps_b: array![0.5, 0.0, 1.0],
            };
            let s2 = bvertex(2, vec![array![1.0, 0.0, -1.0], array![-1.0, 2.0, 0.0]]);
            let l = LMap::new(array![1.0, -0.5]);
            let y = Array1::from(y);
            let sum = UncertaintySet::sum(s1.clone(), s2.clone());
            let hs = sum.support(&l, y.view()).unwrap();
            let h1 = s1.support(&l, y.view()).unwrap();
            let h2 = s2.support(&l, y.view()).unwrap();
            prop_assert!((hs - h1 - h2).abs() < 1e-12);

            let sc = UncertaintySet::scaled(lam, sum.clone());
            prop_assert!((sc.support(&l, y.view()).unwrap() - lam * hs).abs() < 1e-10);

            let vmax = sum
                .l_image_vertices(&l)
                .unwrap()
                .iter()
                .map(|v| v.dot(&y))
                .fold(f64::NEG_INFINITY, f64::max);
            prop_assert!((hs - vmax).abs() < 1e-12);
        }
    }
}
