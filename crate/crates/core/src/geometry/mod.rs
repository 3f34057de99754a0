//! Metric, connection and curvature of Walker metrics.
//!
//! Conventions: `R(x,y) = ∇x∇y − ∇y∇x − ∇[x,y]`, the Jacobi operator is
//! `J(x)y = R(y,x)x`, the lowered tensor is `R(x,y,z,w) = g(R(x,y)w, z)`, and
//! `ρ(x,y) = Σ g^{ij} g(R(x,e_i)e_j, y)`.

pub mod closed_form;
pub mod dense;
mod metric;
mod symbolic;
mod tensor;

use serde_json::{json, Value};
use thiserror::Error;

pub use closed_form::{lemma23_geodesic_accel, lemma23_ricci, walker_covariant_derivatives};
pub use metric::{MetricError, MetricFile, WalkerMetric};
pub use symbolic::{PointCurvature, SymbolicCurvature};
pub use tensor::{
    identity, jacobi_from_operator, mat_from_fn, mat_json, mat_mul, mat_to_f64, mat_vec,
    rational_json, t3_json, t4_json, vec_json, Christoffel, CurvatureTensor, Mat4, Operator4,
    Scalar, SymMatrix4, Tensor3, Tensor4, Vec4,
};

use crate::expression::{EvalError, Point4, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl PointCurvature {
    pub fn metric(&self) -> SymMatrix4<Rational> {
        SymMatrix4::from_fn(|i, j| self.g[i][j].clone())
    }

    pub fn jacobi(&self, x: &Vec4<Rational>) -> Mat4<Rational> {
        jacobi_from_operator(&self.riemann_up, x)
    }

    pub fn conformal_jacobi(&self, x: &Vec4<Rational>) -> Mat4<Rational> {
        jacobi_from_operator(&self.weyl_up, x)
    }

    pub fn weyl(&self) -> CurvatureTensor<Rational> {
        CurvatureTensor::from_operator(&self.weyl_up, &self.g)
    }
}

pub fn metric_matrix(m: &WalkerMetric, p: &Point4<Rational>) -> SymMatrix4<Rational> {
    let g = &m.curvature().g;
    SymMatrix4::from_fn(|i, j| g[i][j].eval_exact(p))
}

pub fn inverse_metric(m: &WalkerMetric, p: &Point4<Rational>) -> SymMatrix4<Rational> {
    let g = &m.curvature().ginv;
    SymMatrix4::from_fn(|i, j| g[i][j].eval_exact(p))
}

pub fn christoffel(m: &WalkerMetric, p: &Point4<Rational>) -> Christoffel<Rational> {
    let gamma = &m.curvature().gamma;
    Christoffel {
        gamma: std::array::from_fn(|k| {
            std::array::from_fn(|i| std::array::from_fn(|j| gamma[k][i][j].eval_exact(p)))
        }),
    }
}

/// All curvature quantities at `p`, exact.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    pub label: String,
    pub point: Point4<Rational>,
    pub metric: SymMatrix4<Rational>,
    pub inverse: SymMatrix4<Rational>,
    pub christoffel: Christoffel<Rational>,
    pub riemann: CurvatureTensor<Rational>,
    pub ricci: SymMatrix4<Rational>,
    pub scalar: Rational,
    pub weyl: CurvatureTensor<Rational>,
}

pub fn curvature_report(m: &WalkerMetric, p: &Point4<Rational>) -> CurvatureReport {
    let c = m.curvature().at(p);
    CurvatureReport {
        label: m.label.clone(),
        point: p.clone(),
        metric: c.metric(),
        inverse: SymMatrix4::from_fn(|i, j| c.ginv[i][j].clone()),
        christoffel: Christoffel {
            gamma: c.gamma.clone(),
        },
        riemann: CurvatureTensor {
            lowered: c.riemann.clone(),
        },
        ricci: SymMatrix4::from_fn(|i, j| c.ricci[i][j].clone()),
        scalar: c.scalar.clone(),
        weyl: c.weyl(),
    }
}

impl CurvatureReport {
    /// Index conventions: `christoffel[k][i][j] = Γ^k_ij`,
    /// `riemann[i][j][k][l] = R(∂i,∂j,∂k,∂l)`, all zero-based in the arrays.
    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "point": vec_json(&self.point.0),
            "metric": self.metric.to_json(),
            "inverse_metric": self.inverse.to_json(),
            "christoffel": t3_json(&self.christoffel.gamma),
            "riemann": t4_json(&self.riemann.lowered),
            "ricci": self.ricci.to_json(),
            "scalar": rational_json(&self.scalar),
            "weyl": t4_json(&self.weyl.lowered),
        })
    }
}

/// `J(x)y = R(y,x)x` at `p`; `x` need not be a unit vector.
pub fn jacobi_operator(m: &WalkerMetric, p: &Point4<Rational>, x: &Vec4<Rational>) -> Operator4 {
    let c = m.curvature().at(p);
    Operator4 {
        matrix: c.jacobi(x),
        point: p.clone(),
        vector: x.clone(),
    }
}

/// `J_W(x)y = W(y,x)x` at `p`.
pub fn conformal_jacobi_operator(
    m: &WalkerMetric,
    p: &Point4<Rational>,
    x: &Vec4<Rational>,
) -> Operator4 {
    let c = m.curvature().at(p);
    Operator4 {
        matrix: c.conformal_jacobi(x),
        point: p.clone(),
        vector: x.clone(),
    }
}

/// `ρ(v,v)` at a float point.
pub fn ricci_quadratic(
    m: &WalkerMetric,
    p: &Point4<f64>,
    v: &[f64; 4],
) -> Result<f64, GeometryError> {
    if p.0.iter().chain(v).any(|c| !c.is_finite()) {
        return Err(EvalError::NonFinitePoint.into());
    }
    let rho = m.curvature().ricci_f64(&p.0);
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            acc += rho[i][j] * v[i] * v[j];
        }
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(EvalError::Overflow.into())
    }
}

/// `ρ(v,v)` at a rational point.
pub fn ricci_quadratic_exact(
    m: &WalkerMetric,
    p: &Point4<Rational>,
    v: &Vec4<Rational>,
) -> Rational {
    let rho = SymMatrix4::from_fn(|i, j| m.curvature().ricci[i][j].eval_exact(p));
    rho.bilinear(v, v)
}
