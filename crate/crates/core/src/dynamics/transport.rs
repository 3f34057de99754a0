//! Parallel frames along trajectories and scalar monitors.

use super::dp45::{integrate_to, Tolerance};
use super::{DynamicsError, GeodesicState, Trajectory};
use crate::expression::Point4;
use crate::geometry::{ricci_quadratic, Mat4, WalkerMetric};

pub type Frame = [[f64; 4]; 4];

/// `frames[i][a]` is `e_{a+1}` at the `i`-th trajectory sample, and
/// `points[i]` the position the frame was transported to at that time.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameTrajectory {
    pub frames: Vec<Frame>,
    pub points: Vec<[f64; 4]>,
}

impl FrameTrajectory {
    /// The series of `e_{a+1}`.
    pub fn series(&self, a: usize) -> impl Iterator<Item = [f64; 4]> + '_ {
        self.frames.iter().map(move |f| f[a])
    }
}

const TRANSPORT_TOL: Tolerance = Tolerance {
    rtol: 1e-12,
    atol: 1e-14,
};
const MAX_SUBSTEPS: usize = 100_000;

/// Transports `frame0` along `traj` by solving `ė_a^k + Γ^k_ij ẋ^i e_a^j = 0`.
///
/// The geodesic is carried along in one augmented system from the first
/// sample, so the frame follows a single smooth curve; its state is read off
/// at every sample time. Near a blowup the augmented system can reach the
/// singularity before the recorded trajectory does; the frames computed up to
/// that point are returned, so the result may cover a prefix of `traj`.
pub fn parallel_transport(
    m: &WalkerMetric,
    traj: &Trajectory,
    frame0: &Frame,
) -> Result<FrameTrajectory, DynamicsError> {
    let c = m.curvature();
    let mut rhs = |_: f64, y: &[f64; 24]| -> Option<[f64; 24]> {
        let x = [y[0], y[1], y[2], y[3]];
        let v = [y[4], y[5], y[6], y[7]];
        let gamma = c.christoffel_f64(&x);
        let acc = c.geodesic_accel(&x, &v);
        let mut out = [0.0; 24];
        out[..4].copy_from_slice(&v);
        out[4..8].copy_from_slice(&acc);
        // Γ^k_ij v^i, the connection matrix along the curve
        let conn: Mat4<f64> = std::array::from_fn(|k| {
            std::array::from_fn(|j| (0..4).map(|i| gamma[k][i][j] * v[i]).sum())
        });
        for a in 0..4 {
            for k in 0..4 {
                out[8 + 4 * a + k] = -(0..4).map(|j| conn[k][j] * y[8 + 4 * a + j]).sum::<f64>();
            }
        }
        out.iter().all(|z| z.is_finite()).then_some(out)
    };
    let s0 = &traj.samples[0];
    let mut y = [0.0; 24];
    y[..4].copy_from_slice(&s0.x);
    y[4..8].copy_from_slice(&s0.v);
    for a in 0..4 {
        y[8 + 4 * a..12 + 4 * a].copy_from_slice(&frame0[a]);
    }
    let mut frames = Vec::with_capacity(traj.samples.len());
    let mut points = Vec::with_capacity(traj.samples.len());
    frames.push(*frame0);
    points.push(s0.x);
    for w in traj.samples.windows(2) {
        match integrate_to(&mut rhs, w[0].t, &y, w[1].t, TRANSPORT_TOL, MAX_SUBSTEPS) {
            Some(next) => y = next,
            None if frames.len() > 1 => break,
            None => return Err(DynamicsError::TransportFailed(w[0].t, w[1].t)),
        }
        frames.push(std::array::from_fn(|a| {
            std::array::from_fn(|k| y[8 + 4 * a + k])
        }));
        points.push([y[0], y[1], y[2], y[3]]);
    }
    Ok(FrameTrajectory { frames, points })
}

/// `g(e_a, e_b)` at `x`.
pub fn gram(m: &WalkerMetric, x: &[f64; 4], e: &Frame) -> Mat4<f64> {
    let g = m.curvature().metric_f64(x);
    std::array::from_fn(|a| std::array::from_fn(|b| bilinear(&g, &e[a], &e[b])))
}

fn bilinear(g: &Mat4<f64>, u: &[f64; 4], v: &[f64; 4]) -> f64 {
    (0..4)
        .map(|i| (0..4).map(|j| g[i][j] * u[i] * v[j]).sum::<f64>())
        .sum()
}

fn bilinear_abs(g: &Mat4<f64>, u: &[f64; 4], v: &[f64; 4]) -> f64 {
    (0..4)
        .map(|i| (0..4).map(|j| (g[i][j] * u[i] * v[j]).abs()).sum::<f64>())
        .sum()
}

/// Largest change of the Gram matrix along a transported frame.
///
/// `absolute` is `max |G(t)_ab − G(0)_ab|`. `relative` divides each deviation
/// by `1 + Σ_ij |g_ij e_a^i e_b^j|`, the magnitude of the terms that cancel in
/// `G(t)_ab`, which is the meaningful scale once frame components diverge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramDrift {
    pub absolute: f64,
    pub relative: f64,
}

pub fn gram_drift(m: &WalkerMetric, frames: &FrameTrajectory) -> GramDrift {
    let g0 = gram(m, &frames.points[0], &frames.frames[0]);
    let mut drift = GramDrift {
        absolute: 0.0,
        relative: 0.0,
    };
    for (x, e) in frames.points.iter().zip(&frames.frames) {
        let g = m.curvature().metric_f64(x);
        for a in 0..4 {
            for b in a..4 {
                let d = (bilinear(&g, &e[a], &e[b]) - g0[a][b]).abs();
                drift.absolute = drift.absolute.max(d);
                drift.relative = drift
                    .relative
                    .max(d / (1.0 + bilinear_abs(&g, &e[a], &e[b])));
            }
        }
    }
    drift
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monitor {
    /// `g(γ̇, γ̇)`.
    Energy,
    /// `ρ(γ̇, γ̇)`.
    Ricci,
    /// `R(e_a, e_b, e_c, e_d)` on the transported frame, zero-based indices.
    CurvatureComponent([usize; 4]),
}

impl Monitor {
    pub fn name(&self) -> String {
        match self {
            Monitor::Energy => "energy".into(),
            Monitor::Ricci => "ricci".into(),
            Monitor::CurvatureComponent([a, b, c, d]) => {
                format!("R(e{},e{},e{},e{})", a + 1, b + 1, c + 1, d + 1)
            }
        }
    }
}

fn energy(m: &WalkerMetric, s: &GeodesicState) -> f64 {
    bilinear(&m.curvature().metric_f64(&s.x), &s.v, &s.v)
}

/// Evaluates a monitor on every sample of `traj`.
pub fn monitor(
    m: &WalkerMetric,
    traj: &Trajectory,
    which: Monitor,
    frames: Option<&FrameTrajectory>,
) -> Result<Vec<f64>, DynamicsError> {
    match which {
        Monitor::Energy => Ok(traj.samples.iter().map(|s| energy(m, s)).collect()),
        Monitor::Ricci => traj
            .samples
            .iter()
            .map(|s| Ok(ricci_quadratic(m, &Point4(s.x), &s.v)?))
            .collect(),
        Monitor::CurvatureComponent(idx) => {
            if let Some(&bad) = idx.iter().find(|&&i| i >= 4) {
                return Err(DynamicsError::InvalidIndex(bad));
            }
            let frames = frames.ok_or(DynamicsError::MissingFrame)?;
            let c = m.curvature();
            Ok(frames
                .points
                .iter()
                .zip(&frames.frames)
                .map(|(x, e)| {
                    let r = c.riemann_f64(x);
                    let [ea, eb, ec, ed] = idx.map(|i| e[i]);
                    let mut acc = 0.0;
                    for i in 0..4 {
                        for j in 0..4 {
                            for k in 0..4 {
                                for l in 0..4 {
                                    acc += r[i][j][k][l] * ea[i] * eb[j] * ec[k] * ed[l];
                                }
                            }
                        }
                    }
                    acc
                })
                .collect())
        }
    }
}
