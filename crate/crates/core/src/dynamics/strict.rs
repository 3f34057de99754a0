//! Reference solution for strict Walker metrics by direct quadrature.
//!
//! When every `ψ` depends only on `x3, x4`, the last two geodesic equations
//! are `ẍ3 = ẍ4 = 0`, so `x3` and `x4` are affine and the first two equations
//! become `ẍ1 = f1(t)`, `ẍ2 = f2(t)`:
//!
//! ```text
//! ẍ1 = −[½ẋ3²ψ33/3 + ½ẋ4²(2ψ34/4 − ψ44/3) + ẋ3ẋ4ψ33/4]
//! ẍ2 = −[½ẋ3²(2ψ34/3 − ψ33/4) + ½ẋ4²ψ44/4 + ẋ3ẋ4ψ44/3]
//! ```
//!
//! where `ψij/k` is `∂ψij/∂xk`. These are integrated twice with composite
//! Gauss–Legendre quadrature, independently of the Christoffel pipeline.

use std::collections::BTreeMap;

use gauss_quad::GaussLegendre;

use super::{DynamicsError, GeodesicState, Trajectory};
use crate::expression::{Coord, FloatPoly};
use crate::geometry::WalkerMetric;

const NODES: usize = 12;
const PANEL_LENGTH: f64 = 25.0;

struct Forcing {
    d: [[FloatPoly; 2]; 3],
}

impl Forcing {
    fn new(m: &WalkerMetric) -> Self {
        let dd = |p: &crate::expression::Poly4| {
            [
                p.differentiate(Coord::X3).compile(),
                p.differentiate(Coord::X4).compile(),
            ]
        };
        Forcing {
            d: [dd(&m.psi33), dd(&m.psi34), dd(&m.psi44)],
        }
    }

    /// `(f1, f2)` at the point `(·, ·, x3, x4)` with constant velocities `u3, u4`.
    fn eval(&self, x3: f64, x4: f64, u3: f64, u4: f64) -> (f64, f64) {
        let p = [0.0, 0.0, x3, x4];
        let [[p33_3, p33_4], [p34_3, p34_4], [p44_3, p44_4]] =
            self.d.each_ref().map(|r| r.each_ref().map(|q| q.eval(&p)));
        let f1 = -(0.5 * u3 * u3 * p33_3 + 0.5 * u4 * u4 * (2.0 * p34_4 - p44_3) + u3 * u4 * p33_4);
        let f2 = -(0.5 * u3 * u3 * (2.0 * p34_3 - p33_4) + 0.5 * u4 * u4 * p44_4 + u3 * u4 * p44_3);
        (f1, f2)
    }
}

fn check_strict(m: &WalkerMetric) -> Result<(), DynamicsError> {
    if m.is_strict() {
        Ok(())
    } else {
        Err(DynamicsError::Precondition(format!(
            "metric {} is not strict: some ψ depends on x1 or x2",
            m.label
        )))
    }
}

fn state_at(f: &Forcing, quad: &GaussLegendre, s0: &GeodesicState, t: f64) -> GeodesicState {
    let dt = t - s0.t;
    let [_, _, u3, u4] = s0.v;
    let x3 = |s: f64| s0.x[2] + u3 * s;
    let x4 = |s: f64| s0.x[3] + u4 * s;
    let panels = (dt.abs() / PANEL_LENGTH).ceil().max(1.0) as usize;
    let width = dt / panels as f64;
    let (mut v1, mut v2, mut q1, mut q2) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..panels {
        let (a, b) = (k as f64 * width, (k + 1) as f64 * width);
        let force = |s: f64| f.eval(x3(s), x4(s), u3, u4);
        v1 += quad.integrate(a, b, |s| force(s).0);
        v2 += quad.integrate(a, b, |s| force(s).1);
        q1 += quad.integrate(a, b, |s| (dt - s) * force(s).0);
        q2 += quad.integrate(a, b, |s| (dt - s) * force(s).1);
    }
    GeodesicState {
        t,
        x: [
            s0.x[0] + s0.v[0] * dt + q1,
            s0.x[1] + s0.v[1] * dt + q2,
            x3(dt),
            x4(dt),
        ],
        v: [s0.v[0] + v1, s0.v[1] + v2, u3, u4],
    }
}

fn rule() -> GaussLegendre {
    GaussLegendre::new(NODES.try_into().expect("nonzero node count"))
        .expect("valid Gauss–Legendre order")
}

/// The state at time `t` of the geodesic through `s0`.
pub fn strict_geodesic_at(
    m: &WalkerMetric,
    s0: &GeodesicState,
    t: f64,
) -> Result<GeodesicState, DynamicsError> {
    check_strict(m)?;
    Ok(state_at(&Forcing::new(m), &rule(), s0, t))
}

/// `n + 1` equally spaced samples on `[s0.t, t_end]`.
pub fn strict_geodesic_reference(
    m: &WalkerMetric,
    s0: &GeodesicState,
    t_end: f64,
    n: usize,
) -> Result<Trajectory, DynamicsError> {
    check_strict(m)?;
    if n == 0 {
        return Err(DynamicsError::InvalidOptions(
            "at least one interval is required".into(),
        ));
    }
    let f = Forcing::new(m);
    let quad = rule();
    let samples = (0..=n)
        .map(|i| {
            let t = s0.t + (t_end - s0.t) * i as f64 / n as f64;
            state_at(&f, &quad, s0, t)
        })
        .collect();
    Ok(Trajectory {
        samples,
        monitors: BTreeMap::new(),
    })
}
