//! Exact Jordan data and numeric spectra of 4×4 operators.

mod ratpoly;
mod roots;
mod sampling;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

pub use ratpoly::RatPoly;
pub use roots::{multiset_distance, residual, roots_exact, roots_f64, sort_spectrum};
pub use sampling::{
    normalize_candidate, osserman_scan, sample_exact_direction, sample_unit_vector, ExactDirection,
    OperatorKind, OssermanScan, ScanSample, UnitVector, SAMPLING_BUDGET,
};

use crate::expression::Rational;
use crate::geometry::{identity, mat_mul, Mat4};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("no {kind} vector found after {attempts} rejections")]
    SamplingBudgetExhausted { kind: &'static str, attempts: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Characteristic polynomial `det(λI − A)` by Faddeev–LeVerrier.
pub fn char_poly(a: &Mat4<Rational>) -> RatPoly {
    let n = 4;
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m: Mat4<Rational> = crate::geometry::mat_from_fn(|_, _| Rational::zero());
    let id: Mat4<Rational> = identity();
    for k in 1..=n {
        let am = mat_mul(a, &m);
        m = crate::geometry::mat_from_fn(|i, j| &am[i][j] + &coeffs[n - k + 1] * &id[i][j]);
        let tr = mat_mul(a, &m)
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, row)| acc + &row[i]);
        coeffs[n - k] = -tr / Rational::from_integer((k as i64).into());
    }
    RatPoly::new(coeffs)
}

fn flatten(a: &Mat4<Rational>) -> Vec<Rational> {
    a.iter().flatten().cloned().collect()
}

/// Solves `Σ x_c cols[c] = rhs` exactly, assuming the columns are independent.
fn solve_columns(cols: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let nc = cols.len();
    let nr = rhs.len();
    let mut m: Vec<Vec<Rational>> = (0..nr)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..nc {
        let p = (pivot_row..nr).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, p);
        let pv = m[pivot_row][col].clone();
        for v in m[pivot_row].iter_mut() {
            *v = &*v / &pv;
        }
        for r in 0..nr {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let src = m[pivot_row].clone();
                for (v, s) in m[r].iter_mut().zip(src) {
                    *v -= &f * s;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[nc].is_zero()) {
        return None;
    }
    Some((0..nc).map(|c| m[c][nc].clone()).collect())
}

/// Lowest-degree monic polynomial annihilating `A`, from the first linear
/// dependence among `I, A, A², A³, A⁴` viewed as 16-vectors.
pub fn min_poly(a: &Mat4<Rational>) -> RatPoly {
    let mut powers = vec![flatten(&identity())];
    let mut current: Mat4<Rational> = identity();
    for d in 1..=4 {
        current = mat_mul(&current, a);
        let v = flatten(&current);
        if let Some(x) = solve_columns(&powers, &v) {
            let mut c: Vec<Rational> = x.into_iter().map(|c| -c).collect();
            c.push(Rational::one());
            debug_assert_eq!(c.len(), d + 1);
            return RatPoly::new(c);
        }
        powers.push(v);
    }
    unreachable!("Cayley–Hamilton bounds the minimal polynomial degree by 4")
}

/// True iff `A` is diagonalizable over the complex numbers.
pub fn is_diagonalizable(a: &Mat4<Rational>) -> bool {
    min_poly(a).is_square_free()
}

/// `d` when the minimal polynomial is `λ^d`, `None` if `A` is not nilpotent.
pub fn nilpotency_index(a: &Mat4<Rational>) -> Option<usize> {
    min_poly(a).as_power_of_lambda()
}

/// All four eigenvalues with multiplicity.
pub fn eigenvalues(char: &RatPoly) -> Vec<Complex64> {
    roots_exact(char)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub char_poly: RatPoly,
    pub min_poly: RatPoly,
    pub eigenvalues: Vec<Complex64>,
    pub diagonalizable: bool,
    pub nilpotency_index: Option<usize>,
}

impl SpectralReport {
    pub fn analyze(a: &Mat4<Rational>) -> Self {
        let cp = char_poly(a);
        let mp = min_poly(a);
        SpectralReport {
            eigenvalues: eigenvalues(&cp),
            diagonalizable: mp.is_square_free(),
            nilpotency_index: mp.as_power_of_lambda(),
            char_poly: cp,
            min_poly: mp,
        }
    }

    /// Polynomials are ascending coefficient arrays of `"p/q"` strings.
    pub fn to_json(&self) -> Value {
        json!({
            "char_poly": self.char_poly.to_strings(),
            "min_poly": self.min_poly.to_strings(),
            "char_poly_text": self.char_poly.to_string(),
            "min_poly_text": self.min_poly.to_string(),
            "eigenvalues": spectrum_json(&self.eigenvalues),
            "diagonalizable": self.diagonalizable,
            "nilpotency_index": self.nilpotency_index,
        })
    }
}

pub fn spectrum_json(z: &[Complex64]) -> Value {
    Value::Array(z.iter().map(|w| json!([w.re, w.im])).collect())
}
