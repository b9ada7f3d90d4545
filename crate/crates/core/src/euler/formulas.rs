use super::MassTriple;
use crate::bracket::Probe;
use crate::error::{Error, Result};
use crate::numeric::{exp_expm1, ln1p_exp, EPS};
use crate::signomial::Signomial;

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "s must be positive and finite, got {s}"
        )))
    }
}

/// `A`, `B`, `C` at `u = ln s`, each computed without cancellation:
/// differences of powers are written with `expm1`, and no factor under- or
/// overflows on its own.
fn abc_log(b: f64, u: f64) -> (f64, f64, f64) {
    let l1 = ln1p_exp(u); // ln(1 + s)
    let l2 = ln1p_exp(-u); // ln(1 + 1/s)
    let a = exp_expm1(l1, (b - 1.0) * l1);
    let bb = exp_expm1(u, (b - 1.0) * u);
    let c = -exp_expm1(b * u + l1, (b - 1.0) * l2);
    (a, bb, c)
}

fn noise_factor(b: f64, u: f64) -> f64 {
    16.0 * EPS * (1.0 + (b.abs() + 2.0) * (u.abs() + 1.0))
}

/// The mass coefficients of `g(s) = m₁A + m₂B + m₃C` for `s > 0`:
/// `A = (1+s)((1+s)^{b−1} − 1)`, `B = s(s^{b−1} − 1)`,
/// `C = s(1+s)(s^{b−1} − (1+s)^{b−1})`.
pub fn abc_terms(b: f64, s: f64) -> Result<(f64, f64, f64)> {
    check_s(s)?;
    Ok(abc_log(b, s.ln()))
}

/// `g(s)` for `s > 0`.
///
/// Evaluated as `m₁A + m₂B + m₃C` with each coefficient computed stably; this
/// agrees with the expanded form [`eval_g_expanded`] to rounding and keeps
/// full relative accuracy of the coefficients near `s → 0`, `s → ∞` and
/// `b → 1`.
pub fn eval_g(m: MassTriple, b: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(g_probe(m, b, s.ln()).value)
}

/// `g(s) = (m₂+m₃)s^b + (m₁+m₃)(1+s)^b + m₃(s^{b+1} − (1+s)^{b+1}) − m₁(1+s) − m₂s`.
pub fn eval_g_expanded(m: MassTriple, b: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    let t = 1.0 + s;
    Ok((m.m2 + m.m3) * s.powf(b)
        + (m.m1 + m.m3) * t.powf(b)
        + m.m3 * (s.powf(b + 1.0) - t.powf(b + 1.0))
        - m.m1 * t
        - m.m2 * s)
}

/// `g` on the whole punctured line `s ∉ {−1, 0}`, with `|·|` inside the
/// powers. Roots with `s < −1` belong to Cell 1, roots in `(−1, 0)` to Cell 3.
pub fn eval_g_line(m: MassTriple, b: f64, s: f64) -> Result<f64> {
    if !s.is_finite() || s == 0.0 || s == -1.0 {
        return Err(Error::Domain(format!("g is undefined at s = {s}")));
    }
    let t = 1.0 + s;
    let pt = t.abs().powf(b - 1.0);
    let ps = s.abs().powf(b - 1.0);
    let a = t * (pt - 1.0);
    let bb = s * (ps - 1.0);
    let c = s * t * (ps - pt);
    Ok(m.m1 * a + m.m2 * bb + m.m3 * c)
}

/// `g′(s) = b(m₂+m₃)s^{b−1} + b(m₁+m₃)(1+s)^{b−1} + (b+1)m₃(s^b − (1+s)^b) − m₁ − m₂`.
pub fn eval_g_prime(m: MassTriple, b: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(g_prime_probe(m, b, s.ln()).value)
}

/// `h(y)` of the transform `g″(s) = (1−y)^{1−b} b(b−1) h(y)`, `s = y/(1−y)`.
pub fn eval_h(m: MassTriple, b: f64, y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Domain(format!(
            "h is evaluated on 0 < y < 1, got {y}"
        )));
    }
    if b == 1.0 {
        return Err(Error::Domain("h is undefined at b = 1".into()));
    }
    let k = 2.0 * m.m3 / (b - 1.0);
    Ok(
        -(m.m2 - k) * y.powf(b - 1.0) + (m.m2 + m.m3) * y.powf(b - 2.0) - (m.m1 + m.m3) * y
            + (m.m1 - k),
    )
}

/// `H = b(b−1)h` as a signomial in `y` with exponents `b−1, b−2, 1, 0`,
/// normalized (terms merge for `b ∈ {2, 3}`).
///
/// The constant coefficient is taken as minus the sum of the others, which is
/// its exact value since `H(1) = 0` for all masses; this keeps the forced root
/// at `y = 1` exact up to the final rounding.
pub fn h_signomial(m: MassTriple, b: f64) -> Result<Signomial> {
    if b == 0.0 || b == 1.0 {
        return Err(Error::Domain(format!("H = b(b-1)h degenerates at b = {b}")));
    }
    let f = b * (b - 1.0);
    let c_bm1 = -f * m.m2 + 2.0 * b * m.m3;
    let c_bm2 = f * (m.m2 + m.m3);
    let c_1 = -f * (m.m1 + m.m3);
    let c_0 = -(c_bm1 + c_bm2 + c_1);
    Ok(Signomial::normalize([
        (c_bm1, b - 1.0),
        (c_bm2, b - 2.0),
        (c_1, 1.0),
        (c_0, 0.0),
    ]))
}

/// `g` at `s = e^u` with an error bound and the term-magnitude sum
/// `|m₁A| + |m₂B| + |m₃C|`.
pub(crate) fn g_probe(m: MassTriple, b: f64, u: f64) -> Sample {
    let (a, bb, c) = abc_log(b, u);
    let terms = [m.m1 * a, m.m2 * bb, m.m3 * c];
    Sample::from_terms(&terms, noise_factor(b, u))
}

/// `g′` at `s = e^u`, from `A′ = b((1+s)^{b−1} − 1) + b − 1`,
/// `B′ = b(s^{b−1} − 1) + b − 1` and `C′ = (s^b − (1+s)^b) + b((1+s)s^{b−1} − s(1+s)^{b−1})`.
pub(crate) fn g_prime_probe(m: MassTriple, b: f64, u: f64) -> Sample {
    let l1 = ln1p_exp(u);
    let l2 = ln1p_exp(-u);
    let da = b * ((b - 1.0) * l1).exp_m1() + (b - 1.0);
    let db = b * ((b - 1.0) * u).exp_m1() + (b - 1.0);
    let d = -exp_expm1(b * u, b * l2);
    let e = -exp_expm1(l1 + (b - 1.0) * u, (b - 2.0) * l2);
    let terms = [m.m1 * da, m.m2 * db, m.m3 * d, m.m3 * b * e];
    Sample::from_terms(&terms, noise_factor(b, u))
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Sample {
    pub value: f64,
    pub magnitude: f64,
    pub noise: f64,
}

impl Sample {
    fn from_terms(terms: &[f64], factor: f64) -> Sample {
        let mut values = terms.to_vec();
        let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
        Sample {
            value: crate::numeric::compensated_sum(&mut values),
            magnitude,
            noise: factor * magnitude,
        }
    }

    pub fn probe(&self) -> Probe {
        Probe {
            value: self.value,
            noise: self.noise,
        }
    }
}
