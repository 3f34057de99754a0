//! Unit-vector sampling on the pseudo-spheres and Osserman scans.

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{char_poly, eigenvalues, multiset_distance, spectrum_json, SpectralError};
use crate::expression::{rat, Point4, Rational};
use crate::geometry::{Mat4, SymMatrix4, WalkerMetric};
use crate::random::rng;

/// Rejections allowed before sampling gives up.
pub const SAMPLING_BUDGET: usize = 10_000;

/// Vectors with `|g(v,v)|` at or below this are rejected as too close to null.
const NULL_CUTOFF: f64 = 1e-3;

/// A unit vector: `g(v,v) = causal_sign`, `+1` spacelike, `−1` timelike.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector {
    pub components: [f64; 4],
    pub causal_sign: i8,
}

fn kind_name(sign: i8) -> &'static str {
    if sign > 0 {
        "spacelike"
    } else {
        "timelike"
    }
}

fn check_sign(sign: i8) -> Result<(), SpectralError> {
    if sign == 1 || sign == -1 {
        Ok(())
    } else {
        Err(SpectralError::InvalidArgument(format!(
            "causal sign must be +1 or -1, got {sign}"
        )))
    }
}

/// Accepts `v` if `|g(v,v)| > 1e−3` with the requested sign, and rescales it to unit length.
pub fn normalize_candidate(g: &SymMatrix4<f64>, v: &[f64; 4], sign: i8) -> Option<UnitVector> {
    let q = g.bilinear(v, v);
    (q.abs() > NULL_CUTOFF && q.signum() as i8 == sign).then(|| {
        let s = q.abs().sqrt();
        UnitVector {
            components: v.map(|c| c / s),
            causal_sign: sign,
        }
    })
}

/// Integer factor `⌈max |g_ij|⌉ ≥ 1` applied to the first two box axes.
///
/// In Walker coordinates a large `ψ` block forces vectors of one causal class
/// to have `|v1|, |v2| ≫ |v3|, |v4|`; an unstretched box misses them.
fn stretch(entries: impl Iterator<Item = f64>) -> i64 {
    let m = entries.map(f64::abs).fold(1.0, f64::max);
    if m.is_finite() {
        m.ceil().min(1e12) as i64
    } else {
        1
    }
}

/// Rejection-samples a float unit vector of the requested causal type from a
/// box stretched along the first two axes by the largest metric entry.
pub fn sample_unit_vector(
    g: &SymMatrix4<f64>,
    sign: i8,
    r: &mut impl Rng,
) -> Result<UnitVector, SpectralError> {
    check_sign(sign)?;
    let k = stretch(
        (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| *g.get(i, j)),
    ) as f64;
    for _ in 0..SAMPLING_BUDGET {
        let v: [f64; 4] =
            std::array::from_fn(|i| r.random_range(-1.0..=1.0) * if i < 2 { k } else { 1.0 });
        if let Some(u) = normalize_candidate(g, &v, sign) {
            return Ok(u);
        }
    }
    Err(SpectralError::SamplingBudgetExhausted {
        kind: kind_name(sign),
        attempts: SAMPLING_BUDGET,
    })
}

/// A rational direction `v` with exact `g(v,v)`; the unit vector is `v/√|g(v,v)|`.
///
/// Jacobi-type operators are quadratic in their vector, so the operator at the
/// unit vector is exactly `J(v)/|g(v,v)|` and stays rational.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDirection {
    pub raw: [Rational; 4],
    pub norm2: Rational,
    pub unit: UnitVector,
}

impl ExactDirection {
    /// Operator at the unit vector given the operator at `raw`.
    pub fn normalize(&self, op: &Mat4<Rational>) -> Mat4<Rational> {
        let s = self.norm2.abs().recip();
        op.each_ref().map(|row| row.each_ref().map(|c| c * &s))
    }
}

/// Rejection-samples a rational direction with components `n/8`, `|n| <= 8`,
/// the first two multiplied by the same stretch as [`sample_unit_vector`].
pub fn sample_exact_direction(
    g: &SymMatrix4<Rational>,
    sign: i8,
    r: &mut impl Rng,
) -> Result<ExactDirection, SpectralError> {
    check_sign(sign)?;
    let k = stretch(
        (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| g.get(i, j).to_f64().unwrap_or(f64::INFINITY)),
    );
    for _ in 0..SAMPLING_BUDGET {
        let raw: [Rational; 4] =
            std::array::from_fn(|i| rat(r.random_range(-8..=8) * if i < 2 { k } else { 1 }, 8));
        let q = g.bilinear(&raw, &raw);
        let qf = q.to_f64().unwrap_or(0.0);
        if qf.abs() > NULL_CUTOFF && qf.signum() as i8 == sign {
            let s = qf.abs().sqrt();
            let unit = UnitVector {
                components: raw.each_ref().map(|c| c.to_f64().unwrap_or(f64::NAN) / s),
                causal_sign: sign,
            };
            return Ok(ExactDirection {
                raw,
                norm2: q,
                unit,
            });
        }
    }
    Err(SpectralError::SamplingBudgetExhausted {
        kind: kind_name(sign),
        attempts: SAMPLING_BUDGET,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Jacobi,
    Conformal,
}

impl OperatorKind {
    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Jacobi => "jacobi",
            OperatorKind::Conformal => "conformal",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSample {
    pub vector: UnitVector,
    pub spectrum: Vec<Complex64>,
}

impl ScanSample {
    fn to_json(&self) -> Value {
        json!({
            "vector": self.vector.components,
            "causal_sign": self.vector.causal_sign,
            "spectrum": spectrum_json(&self.spectrum),
        })
    }
}

/// Result of comparing operator spectra over sampled unit vectors at one point.
///
/// Spectra are compared within each causal class. `cross_class_agrees`
/// compares the spacelike spectrum with the negated timelike one, since
/// `J(x)` scales with `g(x,x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OssermanScan {
    pub kind: OperatorKind,
    pub point: Point4<Rational>,
    pub tol: f64,
    pub constant: bool,
    pub spacelike_constant: bool,
    pub timelike_constant: bool,
    pub cross_class_agrees: bool,
    pub spectrum: Vec<Complex64>,
    pub timelike_spectrum: Vec<Complex64>,
    pub counterexample: Option<(ScanSample, ScanSample)>,
    pub spacelike: Vec<ScanSample>,
    pub timelike: Vec<ScanSample>,
}

impl OssermanScan {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "point": self.point.0.iter().map(crate::expression::format_rational).collect::<Vec<_>>(),
            "tol": self.tol,
            "constant": self.constant,
            "spacelike_constant": self.spacelike_constant,
            "timelike_constant": self.timelike_constant,
            "cross_class_agrees": self.cross_class_agrees,
            "spectrum": spectrum_json(&self.spectrum),
            "timelike_spectrum": spectrum_json(&self.timelike_spectrum),
            "counterexample": self.counterexample.as_ref().map(|(a, b)| json!([a.to_json(), b.to_json()])),
            "samples": self.spacelike.iter().chain(&self.timelike).map(ScanSample::to_json).collect::<Vec<_>>(),
        })
    }
}

fn first_mismatch(samples: &[ScanSample], tol: f64) -> Option<(ScanSample, ScanSample)> {
    let first = samples.first()?;
    samples
        .iter()
        .find(|s| multiset_distance(&first.spectrum, &s.spectrum) > tol)
        .map(|s| (first.clone(), s.clone()))
}

/// Samples `n` unit spacelike and `n` unit timelike vectors at `p` and checks
/// whether the spectrum of the chosen operator is the same for all of them.
///
/// Sampling is sequential from `(seed, stream 0)`; spectra are computed in
/// parallel and collected in sample order, so results depend only on the seed.
pub fn osserman_scan(
    m: &WalkerMetric,
    p: &Point4<Rational>,
    kind: OperatorKind,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<OssermanScan, SpectralError> {
    if n < 2 {
        return Err(SpectralError::InvalidArgument(
            "an Osserman scan needs at least 2 samples per class".into(),
        ));
    }
    let c = m.curvature().at(p);
    let g = c.metric();
    let mut r = rng(seed, 0);
    let mut dirs = Vec::with_capacity(2 * n);
    for sign in [1i8, -1] {
        for _ in 0..n {
            dirs.push(sample_exact_direction(&g, sign, &mut r)?);
        }
    }
    let samples: Vec<ScanSample> = dirs
        .par_iter()
        .map(|d| {
            let op = match kind {
                OperatorKind::Jacobi => c.jacobi(&d.raw),
                OperatorKind::Conformal => c.conformal_jacobi(&d.raw),
            };
            ScanSample {
                vector: d.unit.clone(),
                spectrum: eigenvalues(&char_poly(&d.normalize(&op))),
            }
        })
        .collect();
    let (spacelike, timelike) = samples.split_at(n);
    let space_bad = first_mismatch(spacelike, tol);
    let time_bad = first_mismatch(timelike, tol);
    let spectrum = spacelike[0].spectrum.clone();
    let timelike_spectrum = timelike[0].spectrum.clone();
    let mut negated: Vec<Complex64> = timelike_spectrum.iter().map(|z| -z).collect();
    super::sort_spectrum(&mut negated);
    Ok(OssermanScan {
        kind,
        point: p.clone(),
        tol,
        constant: space_bad.is_none() && time_bad.is_none(),
        spacelike_constant: space_bad.is_none(),
        timelike_constant: time_bad.is_none(),
        cross_class_agrees: multiset_distance(&spectrum, &negated) <= tol,
        spectrum,
        timelike_spectrum,
        counterexample: space_bad.or(time_bad),
        spacelike: spacelike.to_vec(),
        timelike: timelike.to_vec(),
    })
}
