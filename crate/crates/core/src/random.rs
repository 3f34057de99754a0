//! Seeded generators for randomized metrics, points and vectors.
//!
//! Every generator draws from a ChaCha8 stream selected by `(seed, stream)`,
//! so parallel work can take disjoint streams and stay reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expression::{rat, Coord, Monomial, Point4, Poly4, Rational};
use crate::geometry::WalkerMetric;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> SeededRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A rational `n/d` with `|n| <= num_bound` and `1 <= d <= den_bound`.
pub fn small_rational(r: &mut impl Rng, num_bound: i64, den_bound: i64) -> Rational {
    rat(
        r.random_range(-num_bound..=num_bound),
        r.random_range(1..=den_bound),
    )
}

/// A polynomial in `vars` with up to `max_terms` terms of total degree `<= max_degree`.
pub fn random_poly(
    r: &mut impl Rng,
    vars: &[Coord],
    max_degree: u32,
    max_terms: usize,
    coef_bound: i64,
) -> Poly4 {
    let n = r.random_range(0..=max_terms);
    Poly4::from_terms((0..n).map(|_| {
        let mut e = [0u32; 4];
        let deg = r.random_range(0..=max_degree);
        for _ in 0..deg {
            e[vars[r.random_range(0..vars.len())].index()] += 1;
        }
        (Monomial(e), small_rational(r, coef_bound, 3))
    }))
}

/// A general Walker metric: all three `ψ` random in all four coordinates.
pub fn random_walker_metric(r: &mut impl Rng, label: &str) -> WalkerMetric {
    let mut p = || random_poly(r, &Coord::ALL, 3, 4, 4);
    WalkerMetric::new(label, p(), p(), p())
}

/// A Walker metric with `ψ33 = ψ44 = 0` and random `ψ34`.
pub fn random_psi34_metric(r: &mut impl Rng, label: &str) -> WalkerMetric {
    WalkerMetric::psi34_only(label, random_poly(r, &Coord::ALL, 4, 5, 4))
}

/// A strict Walker metric: every `ψ` a polynomial in `x3, x4` of degree `<= max_degree`.
pub fn random_strict_metric(r: &mut impl Rng, label: &str, max_degree: u32) -> WalkerMetric {
    let vars = [Coord::X3, Coord::X4];
    let mut p = || random_poly(r, &vars, max_degree, 3, 2);
    WalkerMetric::new(label, p(), p(), p())
}

pub fn random_rational_point(r: &mut impl Rng, num_bound: i64, den_bound: i64) -> Point4<Rational> {
    Point4(std::array::from_fn(|_| {
        small_rational(r, num_bound, den_bound)
    }))
}

pub fn random_rational_vector(r: &mut impl Rng, num_bound: i64, den_bound: i64) -> [Rational; 4] {
    std::array::from_fn(|_| small_rational(r, num_bound, den_bound))
}
