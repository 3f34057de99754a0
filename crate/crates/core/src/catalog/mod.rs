//! Example metrics with their expected curvature behaviour, and the driver
//! that replays every expectation against the geometry, spectral and
//! dynamics modules.

mod region;
mod verify;

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use region::Region;
pub use verify::{
    verify_entry, verify_suite, Budget, ClauseReport, EntryReport, Suite, VerificationReport,
};

use crate::dynamics::Lemma41Certificate;
use crate::expression::{parse, rat, Coord, Point4, Poly4, Rational};
use crate::geometry::WalkerMetric;
use crate::spectral::{sort_spectrum, OperatorKind, RatPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
    #[error("entry {0} has no spectrum rule")]
    NoRule(String),
    #[error("entry {0} is not an instance of the Osserman family")]
    WrongEntryKind(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    RicciBlowup,
    IncompleteCurvatureBlowup,
}

impl Completeness {
    pub fn name(self) -> &'static str {
        match self {
            Completeness::Complete => "complete",
            Completeness::RicciBlowup => "ricci-blowup",
            Completeness::IncompleteCurvatureBlowup => "incomplete-curvature-blowup",
        }
    }
}

/// Closed-form eigenvalues as a function of the point.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumRule {
    /// The same rational multiset everywhere.
    Fixed(Vec<Rational>),
    /// `{0, 0, +√s, −√s}`, imaginary where `s < 0`.
    ZeroPair(Poly4),
}

/// Expected minimal polynomial on a region.
#[derive(Clone, Debug, PartialEq)]
pub enum MinPolyRule {
    Exact(RatPoly),
    /// `λ³ − s(P)·λ`.
    CubicOddPart(Poly4),
    /// `λ^d` with `d <= n`.
    NilpotentAtMost(usize),
}

impl MinPolyRule {
    pub fn matches(&self, p: &Point4<Rational>, mp: &RatPoly) -> bool {
        match self {
            MinPolyRule::Exact(q) => mp == q,
            MinPolyRule::CubicOddPart(s) => *mp == cubic_odd(&s.eval_exact(p)),
            MinPolyRule::NilpotentAtMost(n) => mp.as_power_of_lambda().is_some_and(|d| d <= *n),
        }
    }

    pub fn expected_at(&self, p: &Point4<Rational>) -> String {
        match self {
            MinPolyRule::Exact(q) => q.to_string(),
            MinPolyRule::CubicOddPart(s) => cubic_odd(&s.eval_exact(p)).to_string(),
            MinPolyRule::NilpotentAtMost(n) => format!("λ^d with d <= {n}"),
        }
    }
}

fn cubic_odd(s: &Rational) -> RatPoly {
    RatPoly::new(vec![
        Rational::zero(),
        -s.clone(),
        Rational::zero(),
        rat(1, 1),
    ])
}

/// Closed-form behaviour of a witness geodesic.
#[derive(Clone, Debug, PartialEq)]
pub enum WitnessLaw {
    /// `x1(t) = 1/(1 − t)`.
    ReciprocalX1,
    /// `x3(t) = −ln(1 − t)/rate`.
    LogX3 { rate: f64 },
    /// `R(e1,e3,e3,e4) = fdot·(e^{2·rate·x3} − 1)` on the parallel frame
    /// starting at the coordinate frame.
    FrameCurvature { fdot: f64, rate: f64 },
}

/// A geodesic known to leave every compact set in finite time.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupWitness {
    pub x0: [Rational; 4],
    pub v0: [Rational; 4],
    /// The scalar equation the geodesic reduces to.
    pub reduced_ode: &'static str,
    pub certificate: Lemma41Certificate,
    pub expected_t_star: Option<f64>,
    pub laws: Vec<WitnessLaw>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EntryKind {
    /// Verified on freshly drawn strict metrics; `metric` is a representative.
    StrictTemplate,
    /// The Osserman family with parameter `k` and profile `f(x4)`.
    OssermanFamily { k: Rational, f: Poly4 },
    /// A `ψ34`-only metric whose conformal Jacobi operator is Osserman.
    ConformalOsserman,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub description: String,
    pub kind: EntryKind,
    pub metric: WalkerMetric,
    pub operator: OperatorKind,
    pub spectrum: SpectrumRule,
    pub min_poly_rules: Vec<(Region, MinPolyRule)>,
    pub diag_locus: Option<Poly4>,
    pub completeness: Completeness,
    pub witness: Option<BlowupWitness>,
    pub notes: Vec<String>,
}

fn poly(text: &str) -> Poly4 {
    parse(text, &BTreeMap::new()).expect("catalog expressions are well formed")
}

fn lambda_poly(coeffs: &[(i64, i64)]) -> RatPoly {
    RatPoly::new(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
}

fn ints(v: [i64; 4]) -> [Rational; 4] {
    v.map(|c| rat(c, 1))
}

/// The metric with `ψ33 = 4k x1² − f²/(4k)`, `ψ34 = 4k x1x2 + x2 f − ḟ/(4k)`,
/// `ψ44 = 4k x2²`, where `f = f(x4)`.
pub fn osserman_family(label: &str, k: &Rational, f: &Poly4) -> WalkerMetric {
    let fd = f.differentiate(Coord::X4);
    let x1 = Poly4::var(Coord::X1);
    let x2 = Poly4::var(Coord::X2);
    let four_k = k * rat(4, 1);
    let c = Poly4::constant(four_k.clone());
    let inv = four_k.recip();
    let psi33 = &(&c * &(&x1 * &x1)) - &(f * f).scale(&inv);
    let psi34 = &(&(&c * &(&x1 * &x2)) + &(&x2 * f)) - &fd.scale(&inv);
    let psi44 = &c * &(&x2 * &x2);
    let mut m = WalkerMetric::new(label, psi33, psi34, psi44);
    m.parameters.insert("k".into(), k.clone());
    m
}

/// `24k f ḟ x2 − 12k f̈ x1 + 3 f f̈ + 4ḟ²`.
pub fn osserman_locus(k: &Rational, f: &Poly4) -> Poly4 {
    let fd = f.differentiate(Coord::X4);
    let fdd = fd.differentiate(Coord::X4);
    let x1 = Poly4::var(Coord::X1);
    let x2 = Poly4::var(Coord::X2);
    let t1 = (&(f * &fd) * &x2).scale(&(k * rat(24, 1)));
    let t2 = (&fdd * &x1).scale(&(k * rat(-12, 1)));
    let t3 = (f * &fdd).scale(&rat(3, 1));
    let t4 = (&fd * &fd).scale(&rat(4, 1));
    &(&(&t1 + &t2) + &t3) + &t4
}

fn osserman_entry(id: &str, k: Rational, f_text: &str, x1_0: Rational) -> CatalogEntry {
    let f = poly(f_text);
    let metric = osserman_family(id, &k, &f);
    let locus = osserman_locus(&k, &f);
    let roots = [Rational::zero(), &k * rat(4, 1), k.clone(), k.clone()];
    let distinct = RatPoly::from_roots(&roots[..3]);
    let full = RatPoly::from_roots(&roots);
    // ξ4 = 1 and 16k²ξ1² = f(1)², with kξ1 > 0, give 4kξ1 = 1
    let one = Point4::from_ints([0, 0, 0, 1]);
    let fdot = f.differentiate(Coord::X4).eval_exact(&one);
    let rate = (&k * &x1_0 * rat(4, 1)).to_f64().unwrap_or(f64::NAN);
    CatalogEntry {
        id: id.into(),
        description: format!(
            "Osserman family with k = {k}, f = {f_text}: Jacobi spectrum {{0, 4k, k, k}}"
        ),
        kind: EntryKind::OssermanFamily { k: k.clone(), f },
        metric,
        operator: OperatorKind::Jacobi,
        spectrum: SpectrumRule::Fixed(roots.to_vec()),
        min_poly_rules: vec![
            (Region::Zero(locus.clone()), MinPolyRule::Exact(distinct)),
            (Region::Nonzero(locus.clone()), MinPolyRule::Exact(full)),
        ],
        diag_locus: Some(locus),
        completeness: Completeness::IncompleteCurvatureBlowup,
        witness: Some(BlowupWitness {
            x0: [x1_0, Rational::zero(), Rational::zero(), rat(1, 1)],
            v0: ints([0, 0, 1, 0]),
            reduced_ode: "ẍ3 = 4kξ1·ẋ3², so f = x3 + 1 has f̈ = ḟ²",
            certificate: Lemma41Certificate::new(rat(1, 1), rat(2, 1), rat(0, 1)),
            expected_t_star: Some(1.0),
            laws: vec![
                WitnessLaw::LogX3 { rate },
                WitnessLaw::FrameCurvature {
                    fdot: fdot.to_f64().unwrap_or(f64::NAN),
                    rate,
                },
            ],
        }),
        notes: vec!["the diagonalizability locus is checked on non-null unit vectors".into()],
    }
}

struct Conformal {
    id: &'static str,
    psi34: &'static str,
    s: &'static str,
    rules: Vec<(Region, MinPolyRule)>,
    witness: Option<BlowupWitness>,
    notes: Vec<&'static str>,
}

fn block13_witness(expected_t_star: Option<f64>, reciprocal: bool) -> BlowupWitness {
    BlowupWitness {
        x0: ints([1, 0, 0, 0]),
        v0: ints([1, 0, 0, -1]),
        reduced_ode: "x2 = x3 = 0, x4 = −t: ẍ1 = ẋ1·p(x1) with p(x1) >= x1 on x1 >= 1",
        certificate: Lemma41Certificate::new(rat(1, 1), rat(1, 1), rat(1, 1)),
        expected_t_star,
        laws: if reciprocal {
            vec![WitnessLaw::ReciprocalX1]
        } else {
            Vec::new()
        },
    }
}

fn x3_affine_witness() -> BlowupWitness {
    BlowupWitness {
        x0: ints([0, 0, 0, 1]),
        v0: ints([0, 0, 1, 1]),
        reduced_ode: "x3 = t: ẍ4 = ẋ4·x4²",
        certificate: Lemma41Certificate::new(rat(1, 1), rat(1, 1), rat(2, 1)),
        expected_t_star: None,
        laws: Vec::new(),
    }
}

fn cubic() -> RatPoly {
    RatPoly::monomial(3)
}

fn conformal_entries() -> Vec<Conformal> {
    let everywhere = |mp: RatPoly| vec![(Region::Everywhere, MinPolyRule::Exact(mp))];
    let zero = |s: &str| Region::Zero(poly(s));
    let nonzero = |s: &str| Region::Nonzero(poly(s));
    let exact = MinPolyRule::Exact;
    vec![
        Conformal {
            id: "thm61-1a",
            psi34: "x1^2 - x2^2",
            s: "1/4",
            rules: everywhere(lambda_poly(&[(0, 1), (-1, 4), (0, 1), (1, 1)])),
            witness: Some(block13_witness(Some(1.0), true)),
            notes: vec![],
        },
        Conformal {
            id: "thm61-1b",
            psi34: "x1^2 + x2^2",
            s: "-1/4",
            rules: everywhere(lambda_poly(&[(0, 1), (1, 4), (0, 1), (1, 1)])),
            witness: Some(block13_witness(Some(1.0), true)),
            notes: vec![],
        },
        Conformal {
            id: "thm61-1c",
            psi34: "x1*x4 + x3*x4",
            s: "0",
            rules: everywhere(RatPoly::monomial(2)),
            witness: None,
            notes: vec![
                "completeness is numerical evidence from long-horizon runs, not a proof",
                "randomized starts keep |v4| <= 1/1000 because x3 grows like exp(v4²t²/2)",
            ],
        },
        Conformal {
            id: "thm61-1d",
            psi34: "x1^2",
            s: "0",
            rules: everywhere(cubic()),
            witness: Some(block13_witness(Some(1.0), true)),
            notes: vec![],
        },
        Conformal {
            id: "thm61-2a",
            psi34: "x2*x4^2 + x3^2*x4",
            s: "0",
            rules: vec![
                (nonzero("x4"), exact(cubic())),
                (Region::All(vec![zero("x4"), nonzero("x3")]), exact(RatPoly::monomial(2))),
                (Region::All(vec![zero("x3"), zero("x4")]), exact(RatPoly::monomial(1))),
            ],
            witness: Some(x3_affine_witness()),
            notes: vec![],
        },
        Conformal {
            id: "thm61-2b",
            psi34: "x2*x4^2 + x3*x4",
            s: "0",
            rules: vec![
                (nonzero("x4"), exact(cubic())),
                (zero("x4"), exact(RatPoly::monomial(2))),
            ],
            witness: Some(x3_affine_witness()),
            notes: vec![],
        },
        Conformal {
            id: "thm61-2c",
            psi34: "x1*x3^2",
            s: "0",
            rules: vec![
                (nonzero("x3"), exact(cubic())),
                (zero("x3"), exact(RatPoly::monomial(1))),
            ],
            witness: Some(BlowupWitness {
                x0: ints([0, 0, 1, 0]),
                v0: ints([0, 0, 1, 1]),
                reduced_ode: "x4 = t: ẍ3 = ẋ3·x3²",
                certificate: Lemma41Certificate::new(rat(1, 1), rat(1, 1), rat(2, 1)),
                expected_t_star: None,
                laws: Vec::new(),
            }),
            notes: vec![],
        },
        Conformal {
            id: "thm61-2d",
            psi34: "x1*x3 + x2*x4",
            s: "0",
            rules: vec![
                (nonzero("x1*x3 + x2*x4"), exact(RatPoly::monomial(2))),
                (zero("x1*x3 + x2*x4"), exact(RatPoly::monomial(1))),
            ],
            witness: Some(BlowupWitness {
                x0: ints([0, 0, 1, 1]),
                v0: ints([0, 0, 1, 1]),
                reduced_ode: "x3 = x4 = h: ḧ = ḣ²h",
                certificate: Lemma41Certificate::new(rat(1, 1), rat(2, 1), rat(1, 1)),
                expected_t_star: None,
                laws: Vec::new(),
            }),
            notes: vec![
                "initial data x3(0) = ẋ3(1) = x4(1) = ẋ4(1) = 1 mix two times; all four are imposed at t = 0",
            ],
        },
        Conformal {
            id: "thm61-3a",
            psi34: "x1^4 + x1^2 - x2^4 - x2^2",
            s: "1/4*(6*x1^2 + 1)*(6*x2^2 + 1)",
            rules: vec![(Region::Everywhere, MinPolyRule::CubicOddPart(poly("1/4*(6*x1^2 + 1)*(6*x2^2 + 1)")))],
            witness: Some(block13_witness(None, false)),
            notes: vec!["the minimal polynomial λ³ − sλ is derived from the stated spectrum"],
        },
        Conformal {
            id: "thm61-3b",
            psi34: "x1^4 + x1^2 + x2^4 + x2^2",
            s: "-1/4*(6*x1^2 + 1)*(6*x2^2 + 1)",
            rules: vec![(Region::Everywhere, MinPolyRule::CubicOddPart(poly("-1/4*(6*x1^2 + 1)*(6*x2^2 + 1)")))],
            witness: Some(block13_witness(None, false)),
            notes: vec!["the minimal polynomial λ³ − sλ is derived from the stated spectrum"],
        },
        Conformal {
            id: "thm61-3c",
            psi34: "x1^3 - x2^3",
            s: "9/4*x1*x2",
            rules: vec![
                (nonzero("x1*x2"), MinPolyRule::CubicOddPart(poly("9/4*x1*x2"))),
                (Region::All(vec![zero("x1*x2"), nonzero("x1^2 + x2^2")]), exact(cubic())),
                (Region::All(vec![zero("x1"), zero("x2")]), exact(RatPoly::monomial(1))),
            ],
            witness: Some(block13_witness(Some(0.5), false)),
            notes: vec![
                "the eigenvalues ±(3/2)√(x1x2) are imaginary where x1x2 < 0",
                "the minimal polynomial on x1x2 = 0 is computed, not stated",
            ],
        },
    ]
}

fn strict_entry() -> CatalogEntry {
    let metric = WalkerMetric::from_exprs(
        "thm31-strict",
        BTreeMap::new(),
        "x3^2 - x4",
        "x3*x4 + 1/2*x3",
        "x4^2 + x3",
    )
    .expect("template metric parses");
    CatalogEntry {
        id: "thm31-strict".into(),
        description:
            "strict Walker metrics (ψ depends on x3, x4 only): nilpotent Osserman and complete"
                .into(),
        kind: EntryKind::StrictTemplate,
        metric,
        operator: OperatorKind::Jacobi,
        spectrum: SpectrumRule::Fixed(vec![Rational::zero(); 4]),
        min_poly_rules: vec![(Region::Everywhere, MinPolyRule::NilpotentAtMost(2))],
        diag_locus: None,
        completeness: Completeness::Complete,
        witness: None,
        notes: vec![
            "verified on randomized strict metrics with ψ of degree <= 2".into(),
            "completeness is numerical evidence from long-horizon runs, not a proof".into(),
        ],
    }
}

/// All catalog entries, ordered by id.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    let mut out = vec![
        strict_entry(),
        osserman_entry("thm51-k1", rat(1, 1), "x4", rat(1, 4)),
        osserman_entry("thm51-km12", rat(-1, 2), "x4^2", rat(-1, 2)),
    ];
    out.extend(conformal_entries().into_iter().map(|c| {
        let metric = WalkerMetric::psi34_only(c.id, poly(c.psi34));
        CatalogEntry {
            id: c.id.into(),
            description: format!("ψ34 = {}: conformally Osserman", c.psi34),
            kind: EntryKind::ConformalOsserman,
            metric,
            operator: OperatorKind::Conformal,
            spectrum: SpectrumRule::ZeroPair(poly(c.s)),
            min_poly_rules: c.rules,
            diag_locus: None,
            completeness: if c.witness.is_some() {
                Completeness::RicciBlowup
            } else {
                Completeness::Complete
            },
            witness: c.witness,
            notes: c.notes.into_iter().map(String::from).collect(),
        }
    }));
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

pub fn find_entry(id: &str) -> Result<CatalogEntry, CatalogError> {
    catalog_entries()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| CatalogError::UnknownId(id.into()))
}

/// The closed-form eigenvalue multiset of `entry` at `p`, sorted canonically.
pub fn expected_spectrum(
    entry: &CatalogEntry,
    p: &Point4<Rational>,
) -> Result<Vec<Complex64>, CatalogError> {
    let mut out = match &entry.spectrum {
        SpectrumRule::Fixed(v) => v
            .iter()
            .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect(),
        SpectrumRule::ZeroPair(s) => {
            let s = s.eval_exact(p);
            let mag = s.abs().to_f64().unwrap_or(f64::NAN).sqrt();
            let root = if s.is_negative() {
                Complex64::new(0.0, mag)
            } else {
                Complex64::new(mag, 0.0)
            };
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                root,
                -root,
            ]
        }
    };
    sort_spectrum(&mut out);
    Ok(out)
}

/// True iff the displayed diagonalizability polynomial vanishes at `p`.
pub fn thm51_diag_locus(entry: &CatalogEntry, p: &Point4<Rational>) -> Result<bool, CatalogError> {
    match (&entry.kind, &entry.diag_locus) {
        (EntryKind::OssermanFamily { .. }, Some(locus)) => Ok(locus.eval_exact(p).is_zero()),
        _ => Err(CatalogError::WrongEntryKind(entry.id.clone())),
    }
}
