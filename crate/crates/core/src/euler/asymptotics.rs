//! Signs of `g` and `g′` at `0⁺` and `∞` from exact generalized power series.
//!
//! Near `0`, with `(1+s)^a = Σ C(a,k) s^k`,
//! `g = (m₂+m₃)s^b + m₃s^{b+1} + Σ_{k≥1} p_k s^k`,
//! `p₁ = (b−1)m₁ − m₂ − m₃`, `p_k = (m₁+m₃)C(b,k) − m₃C(b+1,k)`.
//!
//! Near `∞`, expanding in `1/s`,
//! `g = −(m₁+m₂)s − m₁ + Σ_{k≥0} q_k s^{b−k}`,
//! `q₀ = m₁ + m₂ + (1−b)m₃`, `q_k = (m₁+m₃)C(b,k) − m₃C(b+1,k+1)`.
//!
//! Equal exponents are merged and the first coefficient that survives
//! cancellation decides the sign. Every exponent below the truncation
//! horizon is present, so a decision inside the horizon is exact; otherwise
//! the sign is read from certified probes.

use super::formulas::{g_prime_probe, g_probe, Sample};
use super::MassTriple;
use crate::numeric::{binomial, EPS};
use crate::sign::{Endpoint, Sign};

/// Relative size below which a merged coefficient counts as cancelled.
const SNAP: f64 = 64.0 * EPS;
/// Upper limit on the number of series terms.
const MAX_TERMS: usize = 200;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesTerm {
    pub coefficient: f64,
    /// Sum of the magnitudes that were added into `coefficient`.
    pub scale: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Expansion {
    endpoint: Endpoint,
    /// Sorted from dominant to subdominant; equal exponents merged.
    terms: Vec<SeriesTerm>,
    /// Every omitted exponent lies beyond this value (above it at `0⁺`,
    /// below it at `∞`).
    horizon: f64,
    complete: bool,
}

impl Expansion {
    fn new(endpoint: Endpoint, raw: Vec<SeriesTerm>, horizon: f64, complete: bool) -> Self {
        let mut raw = raw;
        raw.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut terms: Vec<SeriesTerm> = Vec::with_capacity(raw.len());
        for t in raw {
            match terms.last_mut() {
                Some(last) if last.exponent == t.exponent => {
                    last.coefficient += t.coefficient;
                    last.scale += t.scale;
                }
                _ => terms.push(t),
            }
        }
        if endpoint == Endpoint::Infinity {
            terms.reverse();
        }
        Expansion {
            endpoint,
            terms,
            horizon,
            complete,
        }
    }

    fn within_horizon(&self, exponent: f64) -> bool {
        match self.endpoint {
            Endpoint::ZeroPlus => exponent < self.horizon,
            Endpoint::Infinity => exponent > self.horizon,
        }
    }

    /// The dominant surviving term, if it is certainly dominant.
    pub fn leading(&self) -> Option<SeriesTerm> {
        self.terms
            .iter()
            .copied()
            .find(|t| t.coefficient.abs() > SNAP * t.scale)
            .filter(|t| self.within_horizon(t.exponent))
    }

    /// `Some(Zero)` only when the truncated series is the whole function and
    /// all of it cancels.
    pub fn sign(&self) -> Option<Sign> {
        match self.leading() {
            Some(t) => Some(Sign::of(t.coefficient)),
            None if self.complete
                && self
                    .terms
                    .iter()
                    .all(|t| t.coefficient.abs() <= SNAP * t.scale) =>
            {
                Some(Sign::Zero)
            }
            None => None,
        }
    }

    /// Termwise derivative; constants drop out.
    pub fn derivative(&self) -> Expansion {
        let raw = self
            .terms
            .iter()
            .filter(|t| t.exponent != 0.0)
            .map(|t| SeriesTerm {
                coefficient: t.coefficient * t.exponent,
                scale: t.scale * t.exponent.abs(),
                exponent: t.exponent - 1.0,
            })
            .collect();
        Expansion::new(self.endpoint, raw, self.horizon - 1.0, self.complete)
    }

    #[cfg(test)]
    pub fn coefficient_of(&self, exponent: f64) -> f64 {
        self.terms
            .iter()
            .find(|t| (t.exponent - exponent).abs() < 1e-12)
            .map_or(0.0, |t| t.coefficient)
    }
}

fn term(coefficient: f64, scale: f64, exponent: f64) -> SeriesTerm {
    SeriesTerm {
        coefficient,
        scale,
        exponent,
    }
}

fn series_len(b: f64) -> (usize, bool) {
    let wanted = if b > 0.0 { b.ceil() + 3.0 } else { 0.0 }.max(4.0);
    if wanted > MAX_TERMS as f64 {
        (MAX_TERMS, false)
    } else {
        (wanted as usize, true)
    }
}

/// Whether the binomial series of `(1+x)^a` terminates within `n` terms.
fn terminates(a: f64, n: usize) -> bool {
    a >= 0.0 && a.fract() == 0.0 && a < n as f64
}

pub(crate) fn expansion_g(m: MassTriple, b: f64, endpoint: Endpoint) -> Expansion {
    let (n, capped_ok) = series_len(b);
    let (m1, m2, m3) = (m.m1, m.m2, m.m3);
    let outer = m1 + m3;
    let mut raw = Vec::with_capacity(n + 4);
    match endpoint {
        Endpoint::ZeroPlus => {
            raw.push(term(m2 + m3, m2.abs() + m3.abs(), b));
            raw.push(term(m3, m3.abs(), b + 1.0));
            let p1 = (b - 1.0) * m1 - m2 - m3;
            raw.push(term(
                p1,
                (b - 1.0).abs() * m1.abs() + m2.abs() + m3.abs(),
                1.0,
            ));
            for k in 2..=n {
                let (cb, cb1) = (binomial(b, k), binomial(b + 1.0, k));
                raw.push(term(
                    outer * cb - m3 * cb1,
                    (outer * cb).abs() + (m3 * cb1).abs(),
                    k as f64,
                ));
            }
            let complete = capped_ok && terminates(b, n) && terminates(b + 1.0, n + 1);
            Expansion::new(endpoint, raw, (n + 1) as f64, complete)
        }
        Endpoint::Infinity => {
            raw.push(term(-(m1 + m2), m1.abs() + m2.abs(), 1.0));
            raw.push(term(-m1, m1.abs(), 0.0));
            let q0 = m1 + m2 + (1.0 - b) * m3;
            raw.push(term(q0, m1.abs() + m2.abs() + ((1.0 - b) * m3).abs(), b));
            for k in 1..=n {
                let (cb, cb1) = (binomial(b, k), binomial(b + 1.0, k + 1));
                raw.push(term(
                    outer * cb - m3 * cb1,
                    (outer * cb).abs() + (m3 * cb1).abs(),
                    b - k as f64,
                ));
            }
            let complete = capped_ok && terminates(b, n) && terminates(b + 1.0, n + 1);
            Expansion::new(endpoint, raw, b - (n + 1) as f64, complete)
        }
    }
}

/// Sign of the farthest certified probe toward the endpoint.
fn probe_sign<F: Fn(f64) -> Sample>(f: F, endpoint: Endpoint) -> Sign {
    let dir = match endpoint {
        Endpoint::ZeroPlus => -1.0,
        Endpoint::Infinity => 1.0,
    };
    let mut last = Sign::Zero;
    let mut u = 1.0;
    while u <= 512.0 {
        let p = f(dir * u);
        if p.value.is_finite() && p.noise.is_finite() {
            let s = p.probe().sign();
            if !s.is_zero() {
                last = s;
            }
        }
        u *= 2.0;
    }
    last
}

/// Sign of `g(s)` as `s → 0⁺` or `s → ∞`.
///
/// Read from the dominant term of the exact expansion at the endpoint, which
/// covers every regime of `b` including the boundaries `b = 0` and `b = 2`;
/// certified probes decide only when the series cancels to its truncation
/// horizon. Returns `Zero` when `g` vanishes identically.
pub fn endpoint_sign_g(m: MassTriple, b: f64, endpoint: Endpoint) -> Sign {
    if super::degenerate_family(m, b).is_some() {
        return Sign::Zero;
    }
    expansion_g(m, b, endpoint)
        .sign()
        .unwrap_or_else(|| probe_sign(|u| g_probe(m, b, u), endpoint))
}

/// Sign of `g′(s)` as `s → 0⁺` or `s → ∞`, from the termwise derivative of
/// the same expansion.
pub fn endpoint_sign_g_prime(m: MassTriple, b: f64, endpoint: Endpoint) -> Sign {
    if super::degenerate_family(m, b).is_some() {
        return Sign::Zero;
    }
    expansion_g(m, b, endpoint)
        .derivative()
        .sign()
        .unwrap_or_else(|| probe_sign(|u| g_prime_probe(m, b, u), endpoint))
}
