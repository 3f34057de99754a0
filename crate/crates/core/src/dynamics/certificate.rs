//! Blowup certificate for scalar equations `f̈ = Ξ(ḟ, f)` with `f(0) = ḟ(0) = 1`.

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::expression::{format_rational, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateVerdict {
    CertifiedBlowup,
    NotApplicable,
}

impl CertificateVerdict {
    pub fn name(self) -> &'static str {
        match self {
            CertificateVerdict::CertifiedBlowup => "certified-blowup",
            CertificateVerdict::NotApplicable => "not-applicable",
        }
    }
}

/// The caller asserts `Ξ(x, y) >= ε x^a y^b` on `x, y >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma41Certificate {
    pub epsilon: Rational,
    pub a: Rational,
    pub b: Rational,
}

impl Lemma41Certificate {
    pub fn new(epsilon: Rational, a: Rational, b: Rational) -> Self {
        Lemma41Certificate { epsilon, a, b }
    }

    pub fn verdict(&self) -> CertificateVerdict {
        lemma41_certificate(&self.epsilon, &self.a, &self.b)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "epsilon": format_rational(&self.epsilon),
            "a": format_rational(&self.a),
            "b": format_rational(&self.b),
            "verdict": self.verdict().name(),
        })
    }
}

/// Blowup in finite time is certified iff `ε > 0`, `a, b >= 0` and `2a + b >= 3`.
pub fn lemma41_certificate(epsilon: &Rational, a: &Rational, b: &Rational) -> CertificateVerdict {
    let ok = epsilon.is_positive()
        && !a.is_negative()
        && !b.is_negative()
        && (a * rat(2, 1) + b - rat(3, 1)) >= Rational::zero();
    if ok {
        CertificateVerdict::CertifiedBlowup
    } else {
        CertificateVerdict::NotApplicable
    }
}
