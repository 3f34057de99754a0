//! Univariate polynomials over the rationals.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::expression::{format_rational, Rational};
use crate::geometry::{mat_from_fn, mat_mul, Mat4};

/// Coefficients in ascending order of degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly::default()
    }

    pub fn one() -> Self {
        RatPoly::new(vec![Rational::one()])
    }

    /// `λ^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![Rational::zero(); n + 1];
        c[n] = Rational::one();
        RatPoly::new(c)
    }

    /// The monic polynomial with the given rational roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(RatPoly::one(), |acc, r| {
            acc.mul(&RatPoly::new(vec![-r.clone(), Rational::one()]))
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        RatPoly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::new(c)
    }

    pub fn scale(&self, s: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dl = d.leading();
        let dn = d.degree();
        if self.is_zero() || self.degree() < dn {
            return (RatPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); self.degree() - dn + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dn] / &dl;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dn);
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn divides(&self, other: &RatPoly) -> bool {
        other.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_matrix(&self, a: &Mat4<Rational>) -> Mat4<Rational> {
        let mut acc: Mat4<Rational> = mat_from_fn(|_, _| Rational::zero());
        for c in self.coeffs.iter().rev() {
            acc = mat_mul(&acc, a);
            for (i, row) in acc.iter_mut().enumerate() {
                row[i] += c;
            }
        }
        acc
    }

    /// True when the polynomial has no repeated root over the complex numbers.
    pub fn is_square_free(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// If this is `λ^d`, returns `d`.
    pub fn as_power_of_lambda(&self) -> Option<usize> {
        let d = self.degree();
        let only_top = self.coeffs[..d].iter().all(Zero::is_zero);
        (!self.is_zero() && only_top && self.leading().is_one()).then_some(d)
    }

    /// Yun's square-free decomposition: `(factor, multiplicity)` pairs, factors monic.
    pub fn square_free_decomposition(&self) -> Vec<(RatPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            if !a.is_constant() {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Coefficients as `"p/q"` strings, ascending degree.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "λ".to_string(),
                n => format!("λ^{n}"),
            };
            match (a.is_one(), var.is_empty()) {
                (true, false) => write!(f, "{var}")?,
                (_, true) => write!(f, "{a}")?,
                (false, false) => write!(f, "{a}*{var}")?,
            }
        }
        Ok(())
    }
}
