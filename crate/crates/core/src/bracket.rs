//! Certified bisection on a monotone piece, carried out in the logarithmic
//! coordinate `u = ln x` so that relative widths on `x > 0` become absolute
//! widths in `u` and no probe overflows before the search gives up.

use crate::error::{Error, Result};
use crate::sign::Sign;

/// A function value together with a bound on its evaluation error.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Probe {
    pub value: f64,
    pub noise: f64,
}

impl Probe {
    pub fn sign(&self) -> Sign {
        Sign::certified(self.value, self.noise)
    }
}

/// Largest `|u|` visited while looking for a finite bracket.
pub(crate) const MAX_LOG: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LogEnd {
    NegInf,
    At(f64),
    PosInf,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LogBracket {
    pub lo: f64,
    pub hi: f64,
    pub root: f64,
}

pub(crate) fn checked<F>(f: &F, u: f64) -> Result<Sign>
where
    F: Fn(f64) -> Result<Probe>,
{
    let p = f(u)?;
    if !p.value.is_finite() || !p.noise.is_finite() {
        return Err(Error::Tolerance(format!(
            "non-finite evaluation at x = exp({u})"
        )));
    }
    Ok(p.sign())
}

/// Probe abscissae above `from`, ascending: unit steps doubling away from
/// `from`, merged with `0`, `±2ᵏ` and `±MAX_LOG` so that a search starting
/// far out still visits the middle of the line.
fn ladder(from: f64) -> Vec<f64> {
    let mut points = vec![0.0, MAX_LOG, -MAX_LOG];
    let mut p = 1.0;
    while p < MAX_LOG {
        points.extend([p, -p]);
        p *= 2.0;
    }
    if from.is_finite() {
        let mut step = 1.0;
        while step <= MAX_LOG {
            points.push(from + step);
            step *= 2.0;
        }
    }
    let top = MAX_LOG.max(from + MAX_LOG);
    points.retain(|&u| u > from && u <= top);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// Sign of a probe, `Zero` when it is not certified or not finite.
fn probe_sign<F>(f: &F, u: f64) -> Result<Sign>
where
    F: Fn(f64) -> Result<Probe>,
{
    let p = f(u)?;
    if p.value.is_finite() && p.noise.is_finite() {
        Ok(p.sign())
    } else {
        Ok(Sign::Zero)
    }
}

/// Turns a monotone piece with possibly infinite ends into a finite bracket.
///
/// `s_lo` and `s_hi` are the (nonzero, opposite) limit signs at the ends.
/// Probes walk outward from the finite end (or from `u = 0`) over a ladder
/// that spans `|u| ≤ MAX_LOG`; any probe that certifies the far-end sign
/// tightens the other side.
pub(crate) fn finite_bracket<F>(
    f: &F,
    lo: LogEnd,
    hi: LogEnd,
    s_lo: Sign,
    s_hi: Sign,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<Probe>,
{
    debug_assert!(s_lo.opposes(s_hi));
    let mut lo_u = match lo {
        LogEnd::At(u) => Some(u),
        _ => None,
    };
    let mut hi_u = match hi {
        LogEnd::At(u) => Some(u),
        _ => None,
    };

    if lo_u.is_none() {
        // walk down from the upper end, or from just above 0
        let from = hi_u.unwrap_or(0.0);
        let mut found = None;
        let start = if hi_u.is_some() { -from } else { -from - 1.0 };
        for v in ladder(start) {
            let u = -v;
            let s = probe_sign(f, u)?;
            if s == s_lo {
                found = Some(u);
                break;
            }
            if s == s_hi {
                hi_u = Some(u);
            }
        }
        lo_u =
            Some(found.ok_or_else(|| {
                Error::Tolerance("no certified sign found approaching 0+".into())
            })?);
    }
    let lo_u = lo_u.unwrap_or(0.0);

    if hi_u.is_none() {
        let mut lo_cur = lo_u;
        for u in ladder(lo_u) {
            let s = probe_sign(f, u)?;
            if s == s_hi {
                return Ok((lo_cur, u));
            }
            if s == s_lo {
                lo_cur = u;
            }
        }
        return Err(Error::Tolerance(
            "no certified sign found approaching infinity".into(),
        ));
    }
    Ok((lo_u, hi_u.unwrap_or(0.0)))
}

/// Bisects a finite bracket `[lo, hi]` whose end signs `s_lo`, `s_hi` are
/// certified and opposite, until the width in `u` is at most `tol`.
///
/// A midpoint whose sign cannot be certified lies in the noise band around
/// the root; the band edges are then located separately and the bracket is
/// shrunk onto the band.
pub(crate) fn bisect<F>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    s_lo: Sign,
    s_hi: Sign,
    tol: f64,
) -> Result<LogBracket>
where
    F: Fn(f64) -> Result<Probe>,
{
    debug_assert!(lo < hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = checked(f, mid)?;
        if s == s_lo {
            lo = mid;
        } else if s == s_hi {
            hi = mid;
        } else {
            let (mut l, mut r) = (lo, mid);
            while r - l > tol {
                let m = 0.5 * (l + r);
                if m <= l || m >= r {
                    break;
                }
                if checked(f, m)? == s_lo {
                    l = m;
                } else {
                    r = m;
                }
            }
            lo = l;
            let (mut l, mut r) = (mid, hi);
            while r - l > tol {
                let m = 0.5 * (l + r);
                if m <= l || m >= r {
                    break;
                }
                if checked(f, m)? == s_hi {
                    r = m;
                } else {
                    l = m;
                }
            }
            hi = r;
            return Ok(LogBracket { lo, hi, root: mid });
        }
    }
    Ok(LogBracket {
        lo,
        hi,
        root: 0.5 * (lo + hi),
    })
}

/// Converts a log-coordinate bracket into `(lo, value, hi)` on `x > 0`,
/// keeping the three values strictly ordered.
///
/// A root beyond the range of `f64` is reported at the nearest positive
/// finite value, with the bracket reaching `0` or `∞`.
pub(crate) fn to_linear(b: &LogBracket) -> (f64, f64, f64) {
    let value = clamp_exp(b.root);
    let mut lo = b.lo.exp();
    let mut hi = b.hi.exp();
    if lo >= value {
        lo = value.next_down();
    }
    if hi <= value {
        hi = value.next_up();
    }
    (lo, value, hi)
}

/// `eᵘ` clamped to the positive finite range.
pub(crate) fn clamp_exp(u: f64) -> f64 {
    u.exp().clamp(f64::from_bits(1), f64::MAX)
}
