//! Reference computations that share no code with the certified engines:
//! plain polynomial arithmetic, Horner evaluation, bisection and dense sign
//! scans on logarithmic grids.

use crate::euler::MassTriple;

/// Polynomial with ascending coefficients.
pub type Poly = Vec<f64>;

pub fn poly_add(a: &[f64], b: &[f64]) -> Poly {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] += v;
    }
    out
}

pub fn poly_mul(a: &[f64], b: &[f64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_scale(a: &[f64], k: f64) -> Poly {
    a.iter().map(|v| v * k).collect()
}

fn pow(p: &[f64], n: usize) -> Poly {
    (0..n).fold(vec![1.0], |acc, _| poly_mul(&acc, p))
}

/// `(1+s)²s²g(s)` at `b = −2`, from
/// `m₁s²(1 − (1+s)³) + m₂(1+s)²(1 − s³) + m₃((1+s)³ − s³)`.
pub fn euler_quintic(m: MassTriple) -> Poly {
    let one_s = [1.0, 1.0];
    let s2 = [0.0, 0.0, 1.0];
    let s3 = [0.0, 0.0, 0.0, 1.0];
    let cube = pow(&one_s, 3);
    let t1 = poly_mul(&s2, &poly_add(&[1.0], &poly_scale(&cube, -1.0)));
    let t2 = poly_mul(&pow(&one_s, 2), &poly_add(&[1.0], &poly_scale(&s3, -1.0)));
    let t3 = poly_add(&cube, &poly_scale(&s3, -1.0));
    poly_add(
        &poly_add(&poly_scale(&t1, m.m1), &poly_scale(&t2, m.m2)),
        &poly_scale(&t3, m.m3),
    )
}

/// `(1+s)s·g(s)` at `b = −1`, from
/// `m₁s(1 − (1+s)²) + m₂(1+s)(1 − s²) + m₃((1+s)² − s²)`.
pub fn euler_cubic(m: MassTriple) -> Poly {
    let one_s = [1.0, 1.0];
    let s1 = [0.0, 1.0];
    let s2 = [0.0, 0.0, 1.0];
    let sq = pow(&one_s, 2);
    let t1 = poly_mul(&s1, &poly_add(&[1.0], &poly_scale(&sq, -1.0)));
    let t2 = poly_mul(&one_s, &poly_add(&[1.0], &poly_scale(&s2, -1.0)));
    let t3 = poly_add(&sq, &poly_scale(&s2, -1.0));
    poly_add(
        &poly_add(&poly_scale(&t1, m.m1), &poly_scale(&t2, m.m2)),
        &poly_scale(&t3, m.m3),
    )
}

/// `g` at any real `s ∉ {−1, 0}`, written directly from the pairwise law
/// `ρ(x) = x|x|^{b−1}` with particles at `0`, `1`, `1 + s`.
pub fn g_line(m: MassTriple, b: f64, s: f64) -> f64 {
    let rho = |x: f64| x * x.abs().powf(b - 1.0);
    let t = 1.0 + s;
    let a = rho(t) - t;
    let bb = rho(s) - s;
    let c = t * rho(s) - s * rho(t);
    m.m1 * a + m.m2 * bb + m.m3 * c
}

/// Horner value and `Σ|cᵢ|xⁱ`.
pub fn horner(p: &[f64], x: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut mag = 0.0;
    for c in p.iter().rev() {
        v = v * x + c;
        mag = mag * x.abs() + c.abs();
    }
    (v, mag)
}

/// Sign changes in the coefficient sequence, zeros skipped.
pub fn descartes_variations(p: &[f64]) -> usize {
    let signs: Vec<bool> = p.iter().filter(|c| **c != 0.0).map(|c| *c > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// The positive root of a polynomial with one sign variation, by bisection
/// on `(0, 1 + max|cᵢ/c_top|]`.
pub fn single_positive_root(p: &[f64]) -> Option<f64> {
    let top = *p.iter().rev().find(|c| **c != 0.0)?;
    let bound = 1.0 + p.iter().map(|c| (c / top).abs()).fold(0.0, f64::max);
    let sign_at = |x: f64| horner(p, x).0 > 0.0;
    let (mut lo, mut hi) = (0.0f64, bound);
    let s_lo = sign_at(f64::MIN_POSITIVE);
    if s_lo == sign_at(hi) {
        return None;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sign_at(mid) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Sign changes of `Σ cᵢ x^{βᵢ}` over `n` log-spaced points in `[lo, hi]`.
///
/// Terms are advanced by constant ratios and re-anchored periodically;
/// points where the sum is within `1e-11` of the term magnitudes are
/// skipped.
pub fn dense_scan_signomial(terms: &[(f64, f64)], lo: f64, hi: f64, n: usize) -> usize {
    const ANCHOR: usize = 1024;
    let (l0, l1) = (lo.ln(), hi.ln());
    let step = (l1 - l0) / (n - 1) as f64;
    let ratios: Vec<f64> = terms.iter().map(|&(_, e)| (e * step).exp()).collect();
    let mut values = vec![0.0; terms.len()];
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for k in 0..n {
        if k % ANCHOR == 0 {
            let lx = l0 + k as f64 * step;
            for (v, &(c, e)) in values.iter_mut().zip(terms) {
                *v = c * (e * lx).exp();
            }
        } else {
            for (v, r) in values.iter_mut().zip(&ratios) {
                *v *= r;
            }
        }
        let sum: f64 = values.iter().sum();
        let mag: f64 = values.iter().map(|v| v.abs()).sum();
        if sum.abs() <= 1e-11 * mag {
            continue;
        }
        let s = sum > 0.0;
        if last.is_some_and(|p| p != s) {
            changes += 1;
        }
        last = Some(s);
    }
    changes
}

/// Sign changes of `f(t)` over `n` log-spaced `t` in `[lo, hi]`, ignoring
/// exact zeros and non-finite values.
pub fn dense_scan<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> usize {
    let (l0, l1) = (lo.ln(), hi.ln());
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for k in 0..n {
        let t = (l0 + (l1 - l0) * k as f64 / (n - 1) as f64).exp();
        let v = f(t);
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        let s = v > 0.0;
        if last.is_some_and(|p| p != s) {
            changes += 1;
        }
        last = Some(s);
    }
    changes
}

/// Fourth-order central second difference with step `h`.
pub fn second_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}
