//! Dormand–Prince 5(4) stepping with a proportional-integral controller.

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Fifth-order weights minus the embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Right-hand side returning `None` when the derivative is not finite.
pub(crate) trait Rhs<const N: usize> {
    fn eval(&mut self, t: f64, y: &[f64; N]) -> Option<[f64; N]>;
}

impl<const N: usize, F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>> Rhs<N> for F {
    fn eval(&mut self, t: f64, y: &[f64; N]) -> Option<[f64; N]> {
        self(t, y)
    }
}

pub(crate) struct Step<const N: usize> {
    pub y: [f64; N],
    /// Derivative at the new point, reused as the next first stage.
    pub dy: [f64; N],
    pub err: f64,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

pub(crate) fn step<const N: usize>(
    f: &mut impl Rhs<N>,
    t: f64,
    y: &[f64; N],
    dy: &[f64; N],
    h: f64,
    tol: Tolerance,
) -> Option<Step<N>> {
    let mut k = [[0.0; N]; 7];
    k[0] = *dy;
    let mut y_new = *y;
    for s in 1..7 {
        let mut ys = *y;
        for (i, yi) in ys.iter_mut().enumerate() {
            *yi += h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
        }
        k[s] = f.eval(t + C[s] * h, &ys)?;
        if s == 6 {
            y_new = ys;
        }
    }
    let mut err = 0.0f64;
    for i in 0..N {
        let e = h * (0..7).map(|s| E[s] * k[s][i]).sum::<f64>();
        let scale = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
        err = err.max(e.abs() / scale);
    }
    (err.is_finite() && y_new.iter().all(|v| v.is_finite())).then_some(Step {
        y: y_new,
        dy: k[6],
        err,
    })
}

/// Step-size factors from the current and previous error norms.
#[derive(Clone, Debug)]
pub(crate) struct PiController {
    err_prev: f64,
}

impl PiController {
    const ALPHA: f64 = 0.17;
    const BETA: f64 = 0.04;
    const SAFETY: f64 = 0.9;

    pub fn new() -> Self {
        PiController { err_prev: 1e-4 }
    }

    pub fn accept(&mut self, err: f64) -> f64 {
        let err = err.max(1e-10);
        let fac = Self::SAFETY * err.powf(-Self::ALPHA) * self.err_prev.powf(Self::BETA);
        self.err_prev = err;
        fac.clamp(0.2, 10.0)
    }

    pub fn reject(&mut self, err: f64) -> f64 {
        (Self::SAFETY * err.powf(-0.2)).clamp(0.1, 0.9)
    }
}

fn rms_norm<const N: usize>(v: &[f64; N], y: &[f64; N], tol: Tolerance) -> f64 {
    let s: f64 = v
        .iter()
        .zip(y)
        .map(|(a, b)| (a / (tol.atol + tol.rtol * b.abs())).powi(2))
        .sum();
    (s / N as f64).sqrt()
}

/// Starting step from the local scale of the solution and its derivative.
pub(crate) fn initial_step<const N: usize>(
    f: &mut impl Rhs<N>,
    t: f64,
    y: &[f64; N],
    dy: &[f64; N],
    tol: Tolerance,
) -> f64 {
    let d0 = rms_norm(y, y, tol);
    let d1 = rms_norm(dy, y, tol);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1: [f64; N] = std::array::from_fn(|i| y[i] + h0 * dy[i]);
    let d2 = match f.eval(t + h0, &y1) {
        Some(dy1) => {
            let diff: [f64; N] = std::array::from_fn(|i| dy1[i] - dy[i]);
            rms_norm(&diff, y, tol) / h0
        }
        None => return h0 * 1e-3,
    };
    let m = d1.max(d2);
    let h1 = if m <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / m).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

/// Integrates from `t0` to `t1` without any blowup logic; `None` if the step
/// size collapses or the substep budget runs out.
pub(crate) fn integrate_to<const N: usize>(
    f: &mut impl Rhs<N>,
    t0: f64,
    y0: &[f64; N],
    t1: f64,
    tol: Tolerance,
    max_substeps: usize,
) -> Option<[f64; N]> {
    let span = t1 - t0;
    if span == 0.0 {
        return Some(*y0);
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = *y0;
    let mut dy = f.eval(t, &y)?;
    let mut h = initial_step(f, t, &y, &dy, tol).min(span.abs());
    let mut ctrl = PiController::new();
    for _ in 0..max_substeps {
        let remaining = (t1 - t) * dir;
        if remaining <= 0.0 {
            return Some(y);
        }
        let last = h >= remaining;
        let hs = if last { remaining } else { h };
        if hs <= f64::EPSILON * t.abs().max(1.0) {
            return None;
        }
        match step(f, t, &y, &dy, dir * hs, tol) {
            Some(s) if s.err <= 1.0 => {
                t = if last { t1 } else { t + dir * hs };
                y = s.y;
                dy = s.dy;
                h = hs * ctrl.accept(s.err);
            }
            Some(s) => h = hs * ctrl.reject(s.err),
            None => h = hs * 0.2,
        }
    }
    None
}
