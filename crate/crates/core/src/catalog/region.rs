//! Polynomial region predicates and exact sampling inside them.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::expression::{Coord, Monomial, Point4, Poly4, Rational};
use crate::random::random_rational_point;

/// A semialgebraic piece of R^4 cut out by vanishing or non-vanishing polynomials.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Everywhere,
    Zero(Poly4),
    Nonzero(Poly4),
    All(Vec<Region>),
}

impl Region {
    pub fn contains(&self, p: &Point4<Rational>) -> bool {
        match self {
            Region::Everywhere => true,
            Region::Zero(q) => q.eval_exact(p).is_zero(),
            Region::Nonzero(q) => !q.eval_exact(p).is_zero(),
            Region::All(parts) => parts.iter().all(|r| r.contains(p)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Region::Everywhere => "everywhere".into(),
            Region::Zero(q) => format!("{q} = 0"),
            Region::Nonzero(q) => format!("{q} != 0"),
            Region::All(parts) => parts
                .iter()
                .map(Region::describe)
                .collect::<Vec<_>>()
                .join(" and "),
        }
    }

    fn equations<'a>(&'a self, out: &mut Vec<&'a Poly4>) {
        match self {
            Region::Zero(q) => out.push(q),
            Region::All(parts) => parts.iter().for_each(|r| r.equations(out)),
            _ => {}
        }
    }

    /// Draws a rational point in the region: a random point is moved onto each
    /// equation in turn by solving for a coordinate the equation is linear in.
    pub fn sample(&self, r: &mut impl Rng, attempts: usize) -> Option<Point4<Rational>> {
        let mut eqs = Vec::new();
        self.equations(&mut eqs);
        for _ in 0..attempts {
            let mut p = random_rational_point(r, 6, 3);
            for q in &eqs {
                let mut coords = Coord::ALL;
                coords.shuffle(r);
                for c in coords {
                    if let Some(v) = solve_linear(q, c, &p) {
                        p.0[c.index()] = v;
                        break;
                    }
                }
            }
            if self.contains(&p) {
                return Some(p);
            }
        }
        None
    }
}

/// If `q = a·x_c + b` with `a, b` free of `x_c` and `a(p) != 0`, the root `−b(p)/a(p)`.
fn solve_linear(q: &Poly4, c: Coord, p: &Point4<Rational>) -> Option<Rational> {
    let i = c.index();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (m, coef) in q.terms() {
        match m.0[i] {
            0 => b.push((*m, coef.clone())),
            1 => {
                let mut e = m.0;
                e[i] = 0;
                a.push((Monomial(e), coef.clone()));
            }
            _ => return None,
        }
    }
    let a = Poly4::from_terms(a).eval_exact(p);
    if a.is_zero() {
        return None;
    }
    Some(-Poly4::from_terms(b).eval_exact(p) / a)
}
