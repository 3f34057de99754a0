//! Complex roots of univariate polynomials.
//!
//! Exact inputs are first split into square-free factors, so the numerical
//! stage only ever sees simple roots and keeps full double precision even for
//! highly repeated eigenvalues.

use num_complex::Complex64;

use super::ratpoly::RatPoly;

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All complex roots of the polynomial with ascending real coefficients `c`.
///
/// Uses the Aberth–Ehrlich iteration followed by Newton polishing; conjugate
/// pairs are symmetrized and nearly real roots are snapped to the real axis.
pub fn roots_f64(c: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = c.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<f64> = c.iter().map(|a| a / lead).collect();
    let mut z = match n {
        1 => vec![Complex64::new(-c[0], 0.0)],
        2 => quadratic(c[1], c[0]),
        _ => aberth(&c),
    };
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&c, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zk -= step;
        }
    }
    conjugate_cleanup(&mut z);
    z
}

/// Roots of `λ² + bλ + c` avoiding cancellation.
fn quadratic(b: f64, c: f64) -> Vec<Complex64> {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let q = -0.5 * (b + b.signum() * s);
        if q == 0.0 {
            return vec![Complex64::new(0.0, 0.0); 2];
        }
        vec![Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn aberth(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    // Cauchy bound on root moduli
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

fn conjugate_cleanup(z: &mut [Complex64]) {
    for w in z.iter_mut() {
        if w.im.abs() <= 1e-13 * w.norm().max(1.0) {
            w.im = 0.0;
        }
    }
    let n = z.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || z[i].im <= 0.0 {
            continue;
        }
        let target = z[i].conj();
        let partner = (0..n)
            .filter(|&j| !used[j] && j != i && z[j].im < 0.0)
            .min_by(|&a, &b| (z[a] - target).norm().total_cmp(&(z[b] - target).norm()));
        if let Some(j) = partner {
            let re = 0.5 * (z[i].re + z[j].re);
            let im = 0.5 * (z[i].im - z[j].im);
            z[i] = Complex64::new(re, im);
            z[j] = Complex64::new(re, -im);
            used[i] = true;
            used[j] = true;
        }
    }
}

/// Roots of an exact polynomial with multiplicity, in canonical order.
pub fn roots_exact(p: &RatPoly) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(p.degree());
    for (factor, mult) in p.square_free_decomposition() {
        for r in roots_f64(&factor.to_f64()) {
            out.extend(std::iter::repeat_n(r, mult));
        }
    }
    sort_spectrum(&mut out);
    out
}

/// Orders by modulus, then by argument in `(−π, π]`.
pub fn sort_spectrum(z: &mut [Complex64]) {
    z.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(a.arg().total_cmp(&b.arg()))
    });
}

/// Smallest achievable maximum distance between two equal-size multisets.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let d = (0..n).map(|i| (a[i] - b[p[i]]).norm()).fold(0.0, f64::max);
        best = best.min(d);
    });
    best
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// `|p(z)|` for ascending real coefficients.
pub fn residual(c: &[f64], z: Complex64) -> f64 {
    horner(c, z).0.norm()
}
