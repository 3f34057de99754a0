//! Closed-form Walker formulas used as oracles for the general pipeline.

use num_traits::Zero;

use super::metric::WalkerMetric;
use super::tensor::{SymMatrix4, Vec4};
use super::GeometryError;
use crate::expression::{rat, Coord, Point4, Poly4, Rational};

/// `ψij/k1k2...`: the partial derivatives of a `ψ` entry, evaluated at `p`.
struct Jet<'a> {
    metric: &'a WalkerMetric,
    p: &'a Point4<Rational>,
}

impl Jet<'_> {
    fn at(&self, ij: (usize, usize), ks: &[usize]) -> Rational {
        let mut q: Poly4 = self.metric.psi(ij.0, ij.1).clone();
        for &k in ks {
            q = q.differentiate(Coord::from_number(k).expect("coordinate 1..4"));
        }
        q.eval_exact(self.p)
    }
}

/// The covariant derivatives `∇_{∂i}∂j` written out for Walker metrics.
///
/// Returns `((i, j), components)` with one-based `i <= j` for every pair with
/// a displayed formula, and zero vectors for the pairs inside `{1,2}` where the
/// connection vanishes identically.
pub fn walker_covariant_derivatives(
    m: &WalkerMetric,
    p: &Point4<Rational>,
) -> Vec<((usize, usize), Vec4<Rational>)> {
    let psi = Jet { metric: m, p };
    let h = rat(1, 2);
    let z = Rational::zero;
    let s33 = psi.at((3, 3), &[]);
    let s34 = psi.at((3, 4), &[]);
    let s44 = psi.at((4, 4), &[]);
    let d = |ij: (usize, usize), k: usize| psi.at(ij, &[k]);
    let (a33, a34, a44) = ((3, 3), (3, 4), (4, 4));

    vec![
        ((1, 1), [z(), z(), z(), z()]),
        ((1, 2), [z(), z(), z(), z()]),
        ((2, 2), [z(), z(), z(), z()]),
        ((1, 3), [&h * d(a33, 1), &h * d(a34, 1), z(), z()]),
        ((1, 4), [&h * d(a34, 1), &h * d(a44, 1), z(), z()]),
        ((2, 3), [&h * d(a33, 2), &h * d(a34, 2), z(), z()]),
        ((2, 4), [&h * d(a34, 2), &h * d(a44, 2), z(), z()]),
        (
            (3, 3),
            [
                &h * (d(a33, 3) + &s34 * d(a33, 2) + &s33 * d(a33, 1)),
                &h * (rat(2, 1) * d(a34, 3) - d(a33, 4) + &s44 * d(a33, 2) + &s34 * d(a33, 1)),
                -&h * d(a33, 1),
                -&h * d(a33, 2),
            ],
        ),
        (
            (3, 4),
            [
                &h * (d(a33, 4) + &s34 * d(a34, 2) + &s33 * d(a34, 1)),
                &h * (d(a44, 3) + &s44 * d(a34, 2) + &s34 * d(a34, 1)),
                -&h * d(a34, 1),
                -&h * d(a34, 2),
            ],
        ),
        (
            (4, 4),
            [
                &h * (rat(2, 1) * d(a34, 4) - d(a44, 3) + &s34 * d(a44, 2) + &s33 * d(a44, 1)),
                &h * (d(a44, 4) + &s44 * d(a44, 2) + &s34 * d(a44, 1)),
                -&h * d(a44, 1),
                -&h * d(a44, 2),
            ],
        ),
    ]
}

/// Ricci tensor of a Walker metric with `ψ33 = ψ44 = 0` from its closed form.
pub fn lemma23_ricci(
    m: &WalkerMetric,
    p: &Point4<Rational>,
) -> Result<SymMatrix4<Rational>, GeometryError> {
    if !m.psi33_psi44_vanish() {
        return Err(GeometryError::Precondition(
            "closed-form Ricci requires psi33 = psi44 = 0".into(),
        ));
    }
    let psi = Jet { metric: m, p };
    let s = (3, 4);
    let d = |ks: &[usize]| psi.at(s, ks);
    let h = rat(1, 2);
    let two = rat(2, 1);
    let p0 = d(&[]);
    Ok(SymMatrix4::from_fn(|i, j| match (i + 1, j + 1) {
        (1, 3) | (2, 4) => &h * d(&[1, 2]),
        (1, 4) => &h * d(&[1, 1]),
        (2, 3) => &h * d(&[2, 2]),
        (3, 3) => &h * (-(d(&[2]) * d(&[2])) + &two * d(&[2, 3])),
        (4, 4) => &h * (-(d(&[1]) * d(&[1])) + &two * d(&[1, 4])),
        (3, 4) => &h * (d(&[1]) * d(&[2]) + &two * &p0 * d(&[1, 2]) - d(&[1, 3]) - d(&[2, 4])),
        _ => Rational::zero(),
    }))
}

/// Geodesic acceleration written out for `ψ33 = ψ44 = 0`, in floats.
pub fn lemma23_geodesic_accel(
    m: &WalkerMetric,
    x: &[f64; 4],
    v: &[f64; 4],
) -> Result<[f64; 4], GeometryError> {
    if !m.psi33_psi44_vanish() {
        return Err(GeometryError::Precondition(
            "closed-form geodesic equations require psi33 = psi44 = 0".into(),
        ));
    }
    let p = Point4(*x);
    let ev = |q: &Poly4| q.eval_float(&p).map_err(GeometryError::Eval);
    let s = &m.psi34;
    let psi = ev(s)?;
    let d = |k: Coord| ev(&s.differentiate(k));
    let (d1, d2, d3, d4) = (d(Coord::X1)?, d(Coord::X2)?, d(Coord::X3)?, d(Coord::X4)?);
    let [v1, v2, v3, v4] = *v;
    Ok([
        -(v1 * v4 * d1 + v2 * v4 * d2 + v3 * v4 * psi * d2 + v4 * v4 * d4),
        -(v1 * v3 * d1 + v2 * v3 * d2 + v3 * v3 * d3 + v3 * v4 * psi * d1),
        v3 * v4 * d1,
        v3 * v4 * d2,
    ])
}
