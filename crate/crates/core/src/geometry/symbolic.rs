//! Curvature of a Walker metric as polynomials in `x1..x4`.
//!
//! The inverse of a Walker metric matrix is itself polynomial, so every
//! curvature quantity is a polynomial and is built once per metric. Points are
//! then handled by exact evaluation, or by compiled float copies along
//! trajectories.

use super::metric::WalkerMetric;
use super::tensor::{mat_from_fn, t3_from_fn, t4_from_fn, Mat4, Tensor3, Tensor4};
use crate::expression::{rat, Coord, FloatPoly, Point4, Poly4, Rational};

#[derive(Clone, Debug)]
pub struct SymbolicCurvature {
    pub g: Mat4<Poly4>,
    pub ginv: Mat4<Poly4>,
    /// `gamma[k][i][j] = Γ^k_ij`.
    pub gamma: Tensor3<Poly4>,
    /// `riemann_up[l][i][j][k]`, the `∂l` component of `R(∂i,∂j)∂k`.
    pub riemann_up: Tensor4<Poly4>,
    /// `riemann[i][j][k][l] = g(R(∂i,∂j)∂l, ∂k)`.
    pub riemann: Tensor4<Poly4>,
    pub ricci: Mat4<Poly4>,
    pub scalar: Poly4,
    /// `weyl_up[l][i][j][k]`, the `∂l` component of `W(∂i,∂j)∂k`.
    pub weyl_up: Tensor4<Poly4>,
    compiled: Compiled,
}

#[derive(Clone, Debug)]
struct Compiled {
    g: Mat4<FloatPoly>,
    /// Nonzero `Γ^k_ij` with `i <= j`, as `(k, i, j, weight, poly)` where
    /// `weight` is 2 off the diagonal.
    gamma: Vec<(usize, usize, usize, f64, FloatPoly)>,
    ricci: Mat4<FloatPoly>,
    riemann: Vec<([usize; 4], FloatPoly)>,
}

fn half() -> Rational {
    rat(1, 2)
}

fn walker_matrix(m: &WalkerMetric) -> Mat4<Poly4> {
    let one = Poly4::one();
    mat_from_fn(|i, j| match (i.min(j), i.max(j)) {
        (0, 2) | (1, 3) => one.clone(),
        (2, 2) => m.psi33.clone(),
        (2, 3) => m.psi34.clone(),
        (3, 3) => m.psi44.clone(),
        _ => Poly4::zero(),
    })
}

/// Closed-form inverse: `g^11 = −ψ33`, `g^12 = −ψ34`, `g^22 = −ψ44`, `g^13 = g^24 = 1`.
fn walker_inverse(m: &WalkerMetric) -> Mat4<Poly4> {
    let one = Poly4::one();
    mat_from_fn(|i, j| match (i.min(j), i.max(j)) {
        (0, 2) | (1, 3) => one.clone(),
        (0, 0) => -&m.psi33,
        (0, 1) => -&m.psi34,
        (1, 1) => -&m.psi44,
        _ => Poly4::zero(),
    })
}

fn sum(it: impl Iterator<Item = Poly4>) -> Poly4 {
    let mut acc = Poly4::zero();
    for p in it {
        acc += &p;
    }
    acc
}

fn d(p: &Poly4, m: usize) -> Poly4 {
    p.differentiate(Coord::ALL[m])
}

impl SymbolicCurvature {
    pub fn new(metric: &WalkerMetric) -> Self {
        let g = walker_matrix(metric);
        let ginv = walker_inverse(metric);

        // dg[m][i][j] = ∂m g_ij
        let dg: Tensor3<Poly4> = t3_from_fn(|m, i, j| d(&g[i][j], m));
        let gamma: Tensor3<Poly4> = t3_from_fn(|k, i, j| {
            sum((0..4).map(|l| {
                let s = &(&dg[i][j][l] + &dg[j][i][l]) - &dg[l][i][j];
                &ginv[k][l] * &s
            }))
            .scale(&half())
        });
        // dgamma[m][k][i][j] = ∂m Γ^k_ij
        let dgamma: Tensor4<Poly4> = t4_from_fn(|m, k, i, j| d(&gamma[k][i][j], m));

        let mut riemann_up: Tensor4<Poly4> = t4_from_fn(|_, _, _, _| Poly4::zero());
        for l in 0..4 {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    for k in 0..4 {
                        let mut r = &dgamma[i][l][j][k] - &dgamma[j][l][i][k];
                        for m in 0..4 {
                            r += &(&gamma[l][i][m] * &gamma[m][j][k]);
                            r += &-(&gamma[l][j][m] * &gamma[m][i][k]);
                        }
                        riemann_up[l][j][i][k] = -&r;
                        riemann_up[l][i][j][k] = r;
                    }
                }
            }
        }

        let riemann = lower(&riemann_up, &g);
        // ρ(a,b) = Σ g^{ij} g(R(∂a,∂i)∂j, ∂b)
        let ricci: Mat4<Poly4> = mat_from_fn(|a, b| {
            sum((0..4)
                .flat_map(|i| (0..4).map(move |j| (i, j)))
                .filter(|&(i, j)| !ginv[i][j].is_zero())
                .map(|(i, j)| &ginv[i][j] * &riemann[a][i][b][j]))
        });
        let scalar = sum((0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| &ginv[i][j] * &ricci[i][j]));
        let weyl_up = weyl_operator(&riemann_up, &g, &ginv, &ricci, &scalar);

        let compiled = Compiled::new(&g, &gamma, &ricci, &riemann);
        SymbolicCurvature {
            g,
            ginv,
            gamma,
            riemann_up,
            riemann,
            ricci,
            scalar,
            weyl_up,
            compiled,
        }
    }

    /// Exact values of every curvature quantity at `p`.
    pub fn at(&self, p: &Point4<Rational>) -> PointCurvature {
        let ev = |q: &Poly4| q.eval_exact(p);
        PointCurvature {
            g: self.g.each_ref().map(|r| r.each_ref().map(ev)),
            ginv: self.ginv.each_ref().map(|r| r.each_ref().map(ev)),
            gamma: self
                .gamma
                .each_ref()
                .map(|a| a.each_ref().map(|r| r.each_ref().map(ev))),
            riemann_up: eval_t4(&self.riemann_up, p),
            riemann: eval_t4(&self.riemann, p),
            ricci: self.ricci.each_ref().map(|r| r.each_ref().map(ev)),
            scalar: ev(&self.scalar),
            weyl_up: eval_t4(&self.weyl_up, p),
        }
    }

    pub fn metric_f64(&self, x: &[f64; 4]) -> Mat4<f64> {
        mat_from_fn(|i, j| self.compiled.g[i][j].eval(x))
    }

    pub fn christoffel_f64(&self, x: &[f64; 4]) -> Tensor3<f64> {
        let mut out = [[[0.0; 4]; 4]; 4];
        for (k, i, j, _, p) in &self.compiled.gamma {
            let v = p.eval(x);
            out[*k][*i][*j] = v;
            out[*k][*j][*i] = v;
        }
        out
    }

    /// `−Σ Γ^k_ij v^i v^j`, the geodesic acceleration.
    pub fn geodesic_accel(&self, x: &[f64; 4], v: &[f64; 4]) -> [f64; 4] {
        let mut a = [0.0; 4];
        for (k, i, j, w, p) in &self.compiled.gamma {
            a[*k] -= w * p.eval(x) * v[*i] * v[*j];
        }
        a
    }

    pub fn ricci_f64(&self, x: &[f64; 4]) -> Mat4<f64> {
        mat_from_fn(|i, j| self.compiled.ricci[i][j].eval(x))
    }

    /// Lowered curvature `R(∂i,∂j,∂k,∂l)` in floats.
    pub fn riemann_f64(&self, x: &[f64; 4]) -> Tensor4<f64> {
        let mut out = [[[[0.0; 4]; 4]; 4]; 4];
        for ([i, j, k, l], p) in &self.compiled.riemann {
            out[*i][*j][*k][*l] = p.eval(x);
        }
        out
    }
}

impl Compiled {
    fn new(
        g: &Mat4<Poly4>,
        gamma: &Tensor3<Poly4>,
        ricci: &Mat4<Poly4>,
        riemann: &Tensor4<Poly4>,
    ) -> Self {
        let mut gam = Vec::new();
        for k in 0..4 {
            for i in 0..4 {
                for j in i..4 {
                    if !gamma[k][i][j].is_zero() {
                        let w = if i == j { 1.0 } else { 2.0 };
                        gam.push((k, i, j, w, gamma[k][i][j].compile()));
                    }
                }
            }
        }
        let mut riem = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        if !riemann[i][j][k][l].is_zero() {
                            riem.push(([i, j, k, l], riemann[i][j][k][l].compile()));
                        }
                    }
                }
            }
        }
        Compiled {
            g: mat_from_fn(|i, j| g[i][j].compile()),
            gamma: gam,
            ricci: mat_from_fn(|i, j| ricci[i][j].compile()),
            riemann: riem,
        }
    }
}

fn eval_t4(t: &Tensor4<Poly4>, p: &Point4<Rational>) -> Tensor4<Rational> {
    t4_from_fn(|i, j, k, l| t[i][j][k][l].eval_exact(p))
}

fn lower(up: &Tensor4<Poly4>, g: &Mat4<Poly4>) -> Tensor4<Poly4> {
    t4_from_fn(|i, j, m, k| sum((0..4).map(|l| &up[l][i][j][k] * &g[l][m])))
}

/// `W(x,y)z = R(x,y)z + τ/6 {g(y,z)x − g(x,z)y}
///          + ½ {g(x,z)ρy + ρ(x,z)y − g(y,z)ρx − ρ(y,z)x}` in dimension 4,
/// where `ρx` is the Ricci operator `g^{-1}ρ`.
fn weyl_operator(
    r: &Tensor4<Poly4>,
    g: &Mat4<Poly4>,
    ginv: &Mat4<Poly4>,
    ricci: &Mat4<Poly4>,
    scalar: &Poly4,
) -> Tensor4<Poly4> {
    let rho_op: Mat4<Poly4> = mat_from_fn(|l, j| sum((0..4).map(|m| &ginv[l][m] * &ricci[m][j])));
    let tau6 = scalar.scale(&rat(1, 6));
    let delta = |a: usize, b: usize| a == b;
    t4_from_fn(|l, i, j, k| {
        let mut w = r[l][i][j][k].clone();
        if delta(l, i) {
            w += &(&tau6 * &g[j][k]);
            w += &ricci[j][k].scale(&rat(-1, 2));
        }
        if delta(l, j) {
            w += &-(&tau6 * &g[i][k]);
            w += &ricci[i][k].scale(&half());
        }
        w += &(&g[i][k] * &rho_op[l][j]).scale(&half());
        w += &(&g[j][k] * &rho_op[l][i]).scale(&rat(-1, 2));
        w
    })
}

/// Exact curvature data at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCurvature {
    pub g: Mat4<Rational>,
    pub ginv: Mat4<Rational>,
    pub gamma: Tensor3<Rational>,
    pub riemann_up: Tensor4<Rational>,
    pub riemann: Tensor4<Rational>,
    pub ricci: Mat4<Rational>,
    pub scalar: Rational,
    pub weyl_up: Tensor4<Rational>,
}
