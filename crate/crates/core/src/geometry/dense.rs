//! Pointwise curvature of an arbitrary symmetric polynomial metric matrix.
//!
//! Nothing here knows about the Walker block structure. The inverse comes from
//! Gauss–Jordan elimination and derivatives of the inverse from
//! `∂g⁻¹ = −g⁻¹ (∂g) g⁻¹`, which makes this an independent witness for the
//! polynomial pipeline.

use num_traits::{One, Zero};

use super::tensor::{
    identity, mat_from_fn, mat_mul, t3_from_fn, t4_from_fn, Mat4, Tensor3, Tensor4,
};
use crate::expression::{rat, Coord, Point4, Poly4, Rational};

/// Exact inverse by Gauss–Jordan elimination, `None` if singular.
pub fn invert(a: &Mat4<Rational>) -> Option<Mat4<Rational>> {
    let mut m = a.clone();
    let mut inv: Mat4<Rational> = identity();
    for col in 0..4 {
        let pivot = (col..4).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..4 {
            m[col][j] = &m[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..4 {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..4 {
                let (mc, ic) = (m[col][j].clone(), inv[col][j].clone());
                m[r][j] -= &f * mc;
                inv[r][j] -= &f * ic;
            }
        }
    }
    Some(inv)
}

#[derive(Clone, Debug)]
pub struct DenseCurvature {
    pub g: Mat4<Rational>,
    pub ginv: Mat4<Rational>,
    pub gamma: Tensor3<Rational>,
    /// `riemann_up[l][i][j][k]`, the `∂l` component of `R(∂i,∂j)∂k`.
    pub riemann_up: Tensor4<Rational>,
    pub ricci: Mat4<Rational>,
    pub scalar: Rational,
    pub weyl_up: Tensor4<Rational>,
}

impl DenseCurvature {
    /// Curvature of the metric whose matrix entries are `metric[i][j]`, at `p`.
    /// Returns `None` where the matrix is singular.
    pub fn at(metric: &Mat4<Poly4>, p: &Point4<Rational>) -> Option<Self> {
        let ev = |q: &Poly4| q.eval_exact(p);
        let dq = |q: &Poly4, m: usize| q.differentiate(Coord::ALL[m]);
        let g = mat_from_fn(|i, j| ev(&metric[i][j]));
        let ginv = invert(&g)?;
        // dg[m][i][j] = ∂m g_ij, ddg[m][n][i][j] = ∂m ∂n g_ij
        let dg: Tensor3<Rational> = t3_from_fn(|m, i, j| ev(&dq(&metric[i][j], m)));
        let ddg: Tensor4<Rational> = t4_from_fn(|m, n, i, j| ev(&dq(&dq(&metric[i][j], n), m)));
        // dginv[m] = −g⁻¹ (∂m g) g⁻¹
        let dginv: [Mat4<Rational>; 4] = std::array::from_fn(|m| {
            let t = mat_mul(&mat_mul(&ginv, &dg[m]), &ginv);
            mat_from_fn(|i, j| -t[i][j].clone())
        });

        let half = rat(1, 2);
        // first-kind symbols [ij, l] and their derivatives
        let first = |i: usize, j: usize, l: usize| &(&dg[i][j][l] + &dg[j][i][l]) - &dg[l][i][j];
        let dfirst = |m: usize, i: usize, j: usize, l: usize| {
            &(&ddg[m][i][j][l] + &ddg[m][j][i][l]) - &ddg[m][l][i][j]
        };
        let gamma: Tensor3<Rational> = t3_from_fn(|k, i, j| {
            (0..4).fold(Rational::zero(), |acc, l| {
                acc + &ginv[k][l] * first(i, j, l)
            }) * &half
        });
        // dgamma[m][k][i][j] = ∂m Γ^k_ij
        let dgamma: Tensor4<Rational> = t4_from_fn(|m, k, i, j| {
            (0..4).fold(Rational::zero(), |acc, l| {
                acc + &dginv[m][k][l] * first(i, j, l) + &ginv[k][l] * dfirst(m, i, j, l)
            }) * &half
        });
        let riemann_up: Tensor4<Rational> = t4_from_fn(|l, i, j, k| {
            let mut r = &dgamma[i][l][j][k] - &dgamma[j][l][i][k];
            for m in 0..4 {
                r += &gamma[l][i][m] * &gamma[m][j][k];
                r -= &gamma[l][j][m] * &gamma[m][i][k];
            }
            r
        });
        // ρ(a,b) = Σ_ij g^{ij} Σ_l R^l_{aij} g_lb
        let ricci = mat_from_fn(|a, b| {
            let mut acc = Rational::zero();
            for i in 0..4 {
                for j in 0..4 {
                    for l in 0..4 {
                        acc += &ginv[i][j] * &riemann_up[l][a][i][j] * &g[l][b];
                    }
                }
            }
            acc
        });
        let mut scalar = Rational::zero();
        for i in 0..4 {
            for j in 0..4 {
                scalar += &ginv[i][j] * &ricci[i][j];
            }
        }
        let n = rat(4, 1);
        let rho_op = mat_mul(&ginv, &ricci);
        let delta = |a: usize, b: usize| {
            if a == b {
                Rational::one()
            } else {
                Rational::zero()
            }
        };
        let c_tau = &scalar / ((&n - Rational::one()) * (&n - rat(2, 1)));
        let c_rho = (&n - rat(2, 1)).recip();
        let weyl_up = t4_from_fn(|l, i, j, k| {
            let tau_part = &c_tau * (&g[j][k] * delta(l, i) - &g[i][k] * delta(l, j));
            let rho_part = &c_rho
                * (&g[i][k] * &rho_op[l][j] + &ricci[i][k] * delta(l, j)
                    - &g[j][k] * &rho_op[l][i]
                    - &ricci[j][k] * delta(l, i));
            &riemann_up[l][i][j][k] + tau_part + rho_part
        });
        Some(DenseCurvature {
            g,
            ginv,
            gamma,
            riemann_up,
            ricci,
            scalar,
            weyl_up,
        })
    }
}
