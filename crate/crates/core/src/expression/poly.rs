use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rational::{rat, Rational};

/// One of the four coordinates `x1..x4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coord {
    X1,
    X2,
    X3,
    X4,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::X1, Coord::X2, Coord::X3, Coord::X4];

    /// Zero-based array index.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Coord> {
        Coord::ALL.get(i).copied()
    }

    /// Accepts the one-based numbering used in `x1..x4`.
    pub fn from_number(n: usize) -> Option<Coord> {
        n.checked_sub(1).and_then(Coord::from_index)
    }

    pub fn name(self) -> &'static str {
        ["x1", "x2", "x3", "x4"][self.index()]
    }
}

/// A point of R^4, either exact (`Point4<Rational>`) or floating (`Point4<f64>`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point4<T>(pub [T; 4]);

impl<T> Point4<T> {
    pub fn new(x1: T, x2: T, x3: T, x4: T) -> Self {
        Point4([x1, x2, x3, x4])
    }

    pub fn coords(&self) -> &[T; 4] {
        &self.0
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Point4<U> {
        Point4(self.0.each_ref().map(f))
    }
}

impl<T> Index<Coord> for Point4<T> {
    type Output = T;
    fn index(&self, c: Coord) -> &T {
        &self.0[c.index()]
    }
}

impl Point4<Rational> {
    pub fn from_ints(v: [i64; 4]) -> Self {
        Point4(v.map(|n| rat(n, 1)))
    }

    pub fn to_f64(&self) -> Point4<f64> {
        self.map(|r| r.to_f64().unwrap_or(f64::NAN))
    }
}

/// Exponent vector `(e1, e2, e3, e4)` of a monomial `x1^e1 x2^e2 x3^e3 x4^e4`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn var(c: Coord) -> Monomial {
        let mut e = [0; 4];
        e[c.index()] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("evaluation overflowed to a non-finite value")]
    Overflow,
    #[error("evaluation point has a non-finite coordinate")]
    NonFinitePoint,
}

/// Sparse polynomial in `x1..x4` with exact rational coefficients.
///
/// The term map never stores a zero coefficient, so two equal polynomials
/// always have identical maps and `==` is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly4 {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly4 {
    pub fn zero() -> Self {
        Poly4::default()
    }

    pub fn one() -> Self {
        Poly4::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly4::monomial(c, Monomial::ONE)
    }

    pub fn var(c: Coord) -> Self {
        Poly4::monomial(Rational::one(), Monomial::var(c))
    }

    pub fn monomial(coef: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(m, coef);
        }
        Poly4 { terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly4::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn depends_on(&self, c: Coord) -> bool {
        self.terms.keys().any(|m| m.0[c.index()] > 0)
    }

    pub fn scale(&self, s: &Rational) -> Poly4 {
        if s.is_zero() {
            return Poly4::zero();
        }
        Poly4 {
            terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly4 {
        let mut acc = Poly4::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `c`.
    pub fn differentiate(&self, c: Coord) -> Poly4 {
        let i = c.index();
        let mut out = Poly4::zero();
        for (m, coef) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.0[i] = e - 1;
            out.add_term(dm, coef * Rational::from_integer(e.into()));
        }
        out
    }

    pub fn eval_exact(&self, p: &Point4<Rational>) -> Rational {
        let mut acc = Rational::zero();
        for (m, coef) in &self.terms {
            let mut t = coef.clone();
            for (x, &e) in p.0.iter().zip(&m.0) {
                if e > 0 {
                    t *= Pow::pow(x, e);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_float(&self, p: &Point4<f64>) -> Result<f64, EvalError> {
        if p.0.iter().any(|x| !x.is_finite()) {
            return Err(EvalError::NonFinitePoint);
        }
        let mut acc = 0.0;
        for (m, coef) in &self.terms {
            acc += rational_to_f64(coef) * monomial_f64(&m.0, &p.0);
        }
        if acc.is_finite() {
            Ok(acc)
        } else {
            Err(EvalError::Overflow)
        }
    }

    /// Float copy of the coefficients for repeated evaluation along trajectories.
    pub fn compile(&self) -> FloatPoly {
        FloatPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (rational_to_f64(c), m.0))
                .collect(),
        }
    }
}

fn monomial_f64(e: &[u32; 4], x: &[f64; 4]) -> f64 {
    let mut t = 1.0;
    for (xi, &ei) in x.iter().zip(e) {
        if ei > 0 {
            t *= xi.powi(ei as i32);
        }
    }
    t
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(if r.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// A polynomial with `f64` coefficients, evaluated without allocation.
#[derive(Clone, Debug, Default)]
pub struct FloatPoly {
    terms: Vec<(f64, [u32; 4])>,
}

impl FloatPoly {
    #[inline]
    pub fn eval(&self, x: &[f64; 4]) -> f64 {
        self.terms.iter().map(|(c, e)| c * monomial_f64(e, x)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for &Poly4 {
    type Output = Poly4;
    fn add(self, rhs: &Poly4) -> Poly4 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly4 {
    type Output = Poly4;
    fn add(mut self, rhs: Poly4) -> Poly4 {
        self += &rhs;
        self
    }
}

impl AddAssign<&Poly4> for Poly4 {
    fn add_assign(&mut self, rhs: &Poly4) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl Neg for &Poly4 {
    type Output = Poly4;
    fn neg(self) -> Poly4 {
        Poly4 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Poly4 {
    type Output = Poly4;
    fn neg(self) -> Poly4 {
        -&self
    }
}

impl Sub for &Poly4 {
    type Output = Poly4;
    fn sub(self, rhs: &Poly4) -> Poly4 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Sub for Poly4 {
    type Output = Poly4;
    fn sub(self, rhs: Poly4) -> Poly4 {
        &self - &rhs
    }
}

impl Mul for &Poly4 {
    type Output = Poly4;
    fn mul(self, rhs: &Poly4) -> Poly4 {
        let mut out = Poly4::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly4 {
    type Output = Poly4;
    fn mul(self, rhs: Poly4) -> Poly4 {
        &self * &rhs
    }
}

/// Renders in the input grammar, so `parse(&p.to_string(), ..) == p`.
impl fmt::Display for Poly4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || *m == Monomial::ONE {
                if mag.is_integer() {
                    factors.push(mag.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", mag.numer(), mag.denom()));
                }
            }
            for c in Coord::ALL {
                match m.0[c.index()] {
                    0 => {}
                    1 => factors.push(c.name().to_string()),
                    e => factors.push(format!("{}^{}", c.name(), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
