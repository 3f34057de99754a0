//! Geodesic integration with finite-time blowup detection, parallel
//! transport, trajectory monitors and the strict-metric quadrature reference.

mod certificate;
mod dp45;
mod export;
mod strict;
mod transport;

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

pub use certificate::{lemma41_certificate, CertificateVerdict, Lemma41Certificate};
pub use strict::{strict_geodesic_at, strict_geodesic_reference};
pub use transport::{
    gram, gram_drift, monitor, parallel_transport, FrameTrajectory, GramDrift, Monitor,
};

use crate::geometry::{GeometryError, WalkerMetric};
use dp45::{initial_step, PiController, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid integration options: {0}")]
    InvalidOptions(String),
    #[error("right-hand side is not finite at t = {t}")]
    Overflow { t: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("the curvature-component monitor needs a transported frame")]
    MissingFrame,
    #[error("frame index {0} out of range 0..4")]
    InvalidIndex(usize),
    #[error("parallel transport failed between t = {0} and t = {1}")]
    TransportFailed(f64, f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicState {
    pub t: f64,
    pub x: [f64; 4],
    pub v: [f64; 4],
}

impl GeodesicState {
    pub fn new(x: [f64; 4], v: [f64; 4]) -> Self {
        GeodesicState { t: 0.0, x, v }
    }

    fn packed(&self) -> [f64; 8] {
        std::array::from_fn(|i| if i < 4 { self.x[i] } else { self.v[i - 4] })
    }

    fn unpack(t: f64, y: &[f64; 8]) -> Self {
        GeodesicState {
            t,
            x: std::array::from_fn(|i| y[i]),
            v: std::array::from_fn(|i| y[i + 4]),
        }
    }

    pub fn speed_inf(&self) -> f64 {
        self.v.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Accepted states of one run, with optional named series aligned to them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<GeodesicState>,
    pub monitors: BTreeMap<String, Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &GeodesicState {
        self.samples.last().expect("trajectories are never empty")
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationOptions {
    pub horizon: f64,
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub v_max: f64,
    pub max_steps: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        IntegrationOptions {
            horizon: 10.0,
            rtol: 1e-8,
            atol: 1e-10,
            h_min: 1e-12,
            v_max: 1e8,
            max_steps: 2_000_000,
        }
    }
}

impl IntegrationOptions {
    pub fn with_horizon(horizon: f64) -> Self {
        IntegrationOptions {
            horizon,
            ..Default::default()
        }
    }

    pub fn with_tolerances(self, rtol: f64, atol: f64) -> Self {
        IntegrationOptions { rtol, atol, ..self }
    }

    fn validate(&self, t0: f64) -> Result<(), DynamicsError> {
        let positive = [
            ("rtol", self.rtol),
            ("atol", self.atol),
            ("h_min", self.h_min),
            ("v_max", self.v_max),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DynamicsError::InvalidOptions(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.max_steps == 0 {
            return Err(DynamicsError::InvalidOptions(
                "max_steps must be positive".into(),
            ));
        }
        if !(self.horizon > t0 && self.horizon.is_finite()) {
            return Err(DynamicsError::InvalidOptions(format!(
                "horizon {} must exceed the initial time {t0}",
                self.horizon
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Completed {
        t_final: f64,
    },
    Blowup {
        t_star: f64,
        t_star_uncertainty: f64,
        diverging_quantity: String,
    },
    BudgetExhausted {
        reason: String,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Completed { .. } => "Completed",
            Verdict::Blowup { .. } => "Blowup",
            Verdict::BudgetExhausted { .. } => "BudgetExhausted",
        }
    }

    pub fn t_star(&self) -> Option<f64> {
        match self {
            Verdict::Blowup { t_star, .. } => Some(*t_star),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationStats {
    pub steps: usize,
    pub rejected_steps: usize,
    pub min_step: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationOutcome {
    pub verdict: Verdict,
    pub stats: IntegrationStats,
}

impl IntegrationOutcome {
    pub fn to_json(&self) -> Value {
        let (t_star, unc, quantity, t_final, reason) = match &self.verdict {
            Verdict::Completed { t_final } => (None, None, None, Some(*t_final), None),
            Verdict::Blowup {
                t_star,
                t_star_uncertainty,
                diverging_quantity,
            } => (
                Some(*t_star),
                Some(*t_star_uncertainty),
                Some(diverging_quantity.clone()),
                None,
                None,
            ),
            Verdict::BudgetExhausted { reason } => (None, None, None, None, Some(reason.clone())),
        };
        json!({
            "verdict": self.verdict.name(),
            "t_star": t_star,
            "t_star_uncertainty": unc,
            "diverging_quantity": quantity,
            "t_final": t_final,
            "reason": reason,
            "stats": {
                "steps": self.stats.steps,
                "rejected_steps": self.stats.rejected_steps,
                "min_step": self.stats.min_step,
            },
        })
    }
}

/// `(ẋ, v̇)` with `v̇^k = −Σ Γ^k_ij v^i v^j`.
pub fn geodesic_rhs(
    m: &WalkerMetric,
    s: &GeodesicState,
) -> Result<([f64; 4], [f64; 4]), DynamicsError> {
    let a = m.curvature().geodesic_accel(&s.x, &s.v);
    if a.iter().chain(&s.v).all(|c| c.is_finite()) {
        Ok((s.v, a))
    } else {
        Err(DynamicsError::Overflow { t: s.t })
    }
}

pub(crate) fn packed_rhs(m: &WalkerMetric) -> impl FnMut(f64, &[f64; 8]) -> Option<[f64; 8]> + '_ {
    let c = m.curvature();
    move |_, y| {
        let x = [y[0], y[1], y[2], y[3]];
        let v = [y[4], y[5], y[6], y[7]];
        let a = c.geodesic_accel(&x, &v);
        let out: [f64; 8] = std::array::from_fn(|i| if i < 4 { v[i] } else { a[i - 4] });
        out.iter().all(|c| c.is_finite()).then_some(out)
    }
}

/// Accepted steps inspected for monotone growth of `|v|∞`.
const GROWTH_WINDOW: usize = 10;

fn monotone_growth(samples: &[GeodesicState]) -> bool {
    samples.len() > GROWTH_WINDOW
        && samples[samples.len() - GROWTH_WINDOW - 1..]
            .windows(2)
            .all(|w| w[1].speed_inf() > w[0].speed_inf())
}

/// Final time plus the linear extrapolation of `1/|v|∞` to zero.
fn extrapolate_t_star(samples: &[GeodesicState]) -> (f64, f64) {
    let n = samples.len();
    let (a, b) = (&samples[n - 2], &samples[n - 1]);
    let (wa, wb) = (1.0 / a.speed_inf(), 1.0 / b.speed_inf());
    let dt = b.t - a.t;
    let slope = (wb - wa) / dt;
    let t_star = if slope < 0.0 { b.t - wb / slope } else { b.t };
    (t_star, dt)
}

/// Integrates the geodesic equations from `s0` towards `opts.horizon`.
///
/// Every accepted step is recorded. The run ends as `Blowup` when the step
/// controller asks for a step below `h_min` while `|v|∞ > v_max` and `|v|∞`
/// grew over each of the last ten accepted steps; a step collapse without
/// that evidence ends as `BudgetExhausted`.
pub fn integrate_geodesic(
    m: &WalkerMetric,
    s0: &GeodesicState,
    opts: &IntegrationOptions,
) -> Result<(Trajectory, IntegrationOutcome), DynamicsError> {
    opts.validate(s0.t)?;
    let tol = Tolerance {
        rtol: opts.rtol,
        atol: opts.atol,
    };
    let mut f = packed_rhs(m);
    let mut t = s0.t;
    let mut y = s0.packed();
    let mut dy = f(t, &y).ok_or(DynamicsError::Overflow { t })?;
    let mut h = initial_step(&mut f, t, &y, &dy, tol).min(opts.horizon - t);
    let mut ctrl = PiController::new();
    let mut samples = vec![*s0];
    let mut stats = IntegrationStats {
        steps: 0,
        rejected_steps: 0,
        min_step: f64::INFINITY,
    };

    let verdict = loop {
        let remaining = opts.horizon - t;
        if remaining <= 0.0 {
            break Verdict::Completed { t_final: t };
        }
        if stats.steps + stats.rejected_steps >= opts.max_steps {
            break Verdict::BudgetExhausted {
                reason: format!("step budget of {} exhausted", opts.max_steps),
            };
        }
        if h < opts.h_min && remaining > opts.h_min {
            stats.min_step = stats.min_step.min(h);
            let speed = samples.last().map_or(0.0, GeodesicState::speed_inf);
            break if speed > opts.v_max && monotone_growth(&samples) {
                let (t_star, unc) = extrapolate_t_star(&samples);
                Verdict::Blowup {
                    t_star,
                    t_star_uncertainty: unc,
                    diverging_quantity: "|v|_inf".into(),
                }
            } else {
                Verdict::BudgetExhausted {
                    reason: format!("step size fell below h_min = {:e} at t = {t}", opts.h_min),
                }
            };
        }
        let last = h >= remaining;
        let hs = if last { remaining } else { h };
        match dp45::step(&mut f, t, &y, &dy, hs, tol) {
            Some(s) if s.err <= 1.0 => {
                t = if last { opts.horizon } else { t + hs };
                y = s.y;
                dy = s.dy;
                stats.steps += 1;
                stats.min_step = stats.min_step.min(hs);
                samples.push(GeodesicState::unpack(t, &y));
                h = hs * ctrl.accept(s.err);
            }
            Some(s) => {
                stats.rejected_steps += 1;
                h = hs * ctrl.reject(s.err);
            }
            None => {
                stats.rejected_steps += 1;
                h = hs * 0.2;
            }
        }
    };
    Ok((
        Trajectory {
            samples,
            monitors: BTreeMap::new(),
        },
        IntegrationOutcome { verdict, stats },
    ))
}

#[cfg(test)]
mod tests;
