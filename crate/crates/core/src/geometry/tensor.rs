//! Small fixed-size tensor containers shared by the exact and float paths.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::expression::{format_rational, Point4, Rational};

pub type Vec4<T> = [T; 4];
pub type Mat4<T> = [[T; 4]; 4];
pub type Tensor3<T> = [[[T; 4]; 4]; 4];
pub type Tensor4<T> = [[[[T; 4]; 4]; 4]; 4];

/// Field operations needed by the index loops, implemented for `Rational` and `f64`.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn mat_from_fn<T>(mut f: impl FnMut(usize, usize) -> T) -> Mat4<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
}

pub fn t3_from_fn<T>(mut f: impl FnMut(usize, usize, usize) -> T) -> Tensor3<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| f(i, j, k))))
}

pub fn t4_from_fn<T>(mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Tensor4<T> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| std::array::from_fn(|l| f(i, j, k, l))))
    })
}

pub fn mat_mul<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    mat_from_fn(|i, j| (0..4).fold(T::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
}

pub fn mat_vec<T: Scalar>(a: &Mat4<T>, v: &Vec4<T>) -> Vec4<T> {
    std::array::from_fn(|i| (0..4).fold(T::zero(), |acc, k| acc + a[i][k].clone() * v[k].clone()))
}

pub fn identity<T: Scalar>() -> Mat4<T> {
    mat_from_fn(|i, j| if i == j { T::one() } else { T::zero() })
}

pub fn mat_to_f64(a: &Mat4<Rational>) -> Mat4<f64> {
    mat_from_fn(|i, j| f64::from_rational(&a[i][j]))
}

/// A symmetric 4×4 array storing only its 10 independent entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix4<T> {
    upper: [T; 10],
}

const PACKED: [[usize; 4]; 4] = [[0, 1, 2, 3], [1, 4, 5, 6], [2, 5, 7, 8], [3, 6, 8, 9]];

fn packed(i: usize, j: usize) -> usize {
    PACKED[i][j]
}

impl<T: Clone> SymMatrix4<T> {
    /// Builds from `f(i, j)`, called once per unordered pair with `i <= j`.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut cells: Vec<T> = Vec::with_capacity(10);
        for i in 0..4 {
            for j in i..4 {
                cells.push(f(i, j));
            }
        }
        SymMatrix4 {
            upper: cells.try_into().unwrap_or_else(|_| unreachable!()),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.upper[packed(i, j)]
    }

    pub fn to_mat(&self) -> Mat4<T> {
        mat_from_fn(|i, j| self.get(i, j).clone())
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> SymMatrix4<U> {
        SymMatrix4 {
            upper: std::array::from_fn(|n| f(&self.upper[n])),
        }
    }
}

impl<T: Scalar> SymMatrix4<T> {
    /// `Σ a_ij u^i w^j`.
    pub fn bilinear(&self, u: &Vec4<T>, w: &Vec4<T>) -> T {
        let mut acc = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                acc = acc + self.get(i, j).clone() * u[i].clone() * w[j].clone();
            }
        }
        acc
    }
}

/// Christoffel symbols `Γ^k_ij`, stored as `gamma[k][i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel<T> {
    pub gamma: Tensor3<T>,
}

impl<T: Scalar> Christoffel<T> {
    pub fn get(&self, k: usize, i: usize, j: usize) -> &T {
        &self.gamma[k][i][j]
    }

    /// Components of `∇_{∂i} ∂j`.
    pub fn covariant(&self, i: usize, j: usize) -> Vec4<T> {
        std::array::from_fn(|k| self.gamma[k][i][j].clone())
    }
}

/// A 4-index tensor with the algebraic symmetries of a curvature tensor.
///
/// `lowered[i][j][k][l]` is `R(∂i,∂j,∂k,∂l) = g(R(∂i,∂j)∂l, ∂k)`, so that the
/// operator convention `R(x,y) = ∇x∇y − ∇y∇x − ∇[x,y]` gives `R(∂1,∂3,∂3,∂1) = 4k`
/// on the Osserman family with eigenvalues `{0,4k,k,k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<T> {
    pub lowered: Tensor4<T>,
}

impl<T: Scalar> CurvatureTensor<T> {
    /// Lowers operator components `up[l][i][j][k]` (`R(∂i,∂j)∂k = Σ_l up[l][i][j][k] ∂l`).
    pub fn from_operator(up: &Tensor4<T>, g: &Mat4<T>) -> Self {
        CurvatureTensor {
            lowered: t4_from_fn(|i, j, m, k| {
                (0..4).fold(T::zero(), |acc, l| {
                    acc + up[l][i][j][k].clone() * g[l][m].clone()
                })
            }),
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &T {
        &self.lowered[i][j][k][l]
    }

    /// Operator components `R^l_ijk`, raising with `g^{-1}`.
    pub fn raise(&self, ginv: &Mat4<T>) -> Tensor4<T> {
        t4_from_fn(|l, i, j, k| {
            (0..4).fold(T::zero(), |acc, m| {
                acc + ginv[l][m].clone() * self.lowered[i][j][m][k].clone()
            })
        })
    }

    /// Multilinear evaluation `R(a, b, c, d)`.
    pub fn eval(&self, a: &Vec4<T>, b: &Vec4<T>, c: &Vec4<T>, d: &Vec4<T>) -> T {
        let mut acc = T::zero();
        for i in 0..4 {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if b[j].is_zero() {
                    continue;
                }
                let ab = a[i].clone() * b[j].clone();
                for k in 0..4 {
                    if c[k].is_zero() {
                        continue;
                    }
                    let abc = ab.clone() * c[k].clone();
                    for l in 0..4 {
                        acc = acc + abc.clone() * d[l].clone() * self.lowered[i][j][k][l].clone();
                    }
                }
            }
        }
        acc
    }
}

/// The operator `y ↦ T(y, x)x` built from operator components `up[l][i][j][k]`.
pub fn jacobi_from_operator<T: Scalar>(up: &Tensor4<T>, x: &Vec4<T>) -> Mat4<T> {
    mat_from_fn(|l, a| {
        let mut acc = T::zero();
        for b in 0..4 {
            for c in 0..4 {
                acc = acc + up[l][a][b][c].clone() * x[b].clone() * x[c].clone();
            }
        }
        acc
    })
}

/// A 4×4 exact operator on the tangent space at `point`, defined by `vector`.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator4 {
    pub matrix: Mat4<Rational>,
    pub point: Point4<Rational>,
    pub vector: Vec4<Rational>,
}

impl Operator4 {
    /// The operator rescaled by `c`, e.g. to pass from `J(v)` to `J(v/√|g(v,v)|)`.
    pub fn scaled(&self, c: &Rational) -> Operator4 {
        Operator4 {
            matrix: mat_from_fn(|i, j| &self.matrix[i][j] * c),
            point: self.point.clone(),
            vector: self.vector.clone(),
        }
    }
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn vec_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

pub fn mat_json(m: &Mat4<Rational>) -> Value {
    Value::Array(m.iter().map(|r| vec_json(r)).collect())
}

pub fn t3_json(t: &Tensor3<Rational>) -> Value {
    Value::Array(t.iter().map(mat_json).collect())
}

pub fn t4_json(t: &Tensor4<Rational>) -> Value {
    Value::Array(t.iter().map(t3_json).collect())
}

impl SymMatrix4<Rational> {
    pub fn to_json(&self) -> Value {
        mat_json(&self.to_mat())
    }
}

impl Operator4 {
    pub fn to_json(&self) -> Value {
        json!({
            "point": vec_json(&self.point.0),
            "vector": vec_json(&self.vector),
            "matrix": mat_json(&self.matrix),
        })
    }
}
