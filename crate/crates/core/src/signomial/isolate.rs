use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Signomial;
use crate::bracket::{bisect, checked, to_linear, LogEnd};
use crate::error::{Error, Result};
use crate::sign::{Endpoint, Sign};

/// Default relative width of an isolating interval.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A root is degenerate when the next function of the derivative chain is
/// below this fraction of its local term-magnitude sum there.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Number of distinct zeros on an interval, with a separate value for a
/// function that vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootCount {
    Finite(usize),
    IdenticallyZero,
}

impl RootCount {
    pub fn finite(self) -> Option<usize> {
        match self {
            RootCount::Finite(n) => Some(n),
            RootCount::IdenticallyZero => None,
        }
    }
}

impl fmt::Display for RootCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootCount::Finite(n) => write!(f, "{n}"),
            RootCount::IdenticallyZero => f.write_str("identically_zero"),
        }
    }
}

impl Serialize for RootCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RootCount::Finite(n) => s.serialize_u64(*n as u64),
            RootCount::IdenticallyZero => s.serialize_str("identically_zero"),
        }
    }
}

impl<'de> Deserialize<'de> for RootCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|n| RootCount::Finite(n as usize))
                .ok_or_else(|| {
                    serde::de::Error::custom("root count must be a non-negative integer")
                }),
            serde_json::Value::String(s) if s == "identically_zero" => {
                Ok(RootCount::IdenticallyZero)
            }
            other => Err(serde::de::Error::custom(format!(
                "invalid root count {other}"
            ))),
        }
    }
}

/// An isolated root: `lo < value < hi`. Unless `degenerate`, the function
/// takes opposite signs at `lo` and `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Isolation {
    pub count: RootCount,
    pub roots: Vec<RootRecord>,
}

#[derive(Debug, Clone, Copy)]
struct LogRoot {
    lo: f64,
    hi: f64,
    u: f64,
    degenerate: bool,
}

/// Certified count and isolation of the distinct zeros of `p` in the open
/// interval `(lo, hi)`, `0 ≤ lo < hi ≤ ∞`.
///
/// The roots of `Q = (x^{-β} p)′`, with `β` the exponent at the first sign
/// change, are isolated first; between consecutive roots of `Q` the function
/// `x^{-β} p` is strictly monotone, so each piece holds at most one root of
/// `p`, found by certified bisection. Pieces touching `0` or `∞` are closed
/// off at the point where the dominant term outweighs all others. A root of
/// `Q` where `p` itself vanishes (to the degeneracy threshold) is reported
/// once, flagged degenerate.
pub fn count_and_isolate(p: &Signomial, lo: f64, hi: f64, tol: f64) -> Result<Isolation> {
    if !(lo >= 0.0 && lo < hi) || hi.is_nan() {
        return Err(Error::Domain(format!(
            "isolation interval must satisfy 0 <= lo < hi, got ({lo}, {hi})"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if p.is_empty() {
        return Ok(Isolation {
            count: RootCount::IdenticallyZero,
            roots: Vec::new(),
        });
    }
    let a = if lo == 0.0 {
        LogEnd::NegInf
    } else {
        LogEnd::At(lo.ln())
    };
    let c = if hi == f64::INFINITY {
        LogEnd::PosInf
    } else {
        LogEnd::At(hi.ln())
    };
    let roots: Vec<RootRecord> = isolate(p, a, c, tol, DEGENERACY_THRESHOLD)?
        .iter()
        .map(|r| {
            let (lo, value, hi) = to_linear(&crate::bracket::LogBracket {
                lo: r.lo,
                hi: r.hi,
                root: r.u,
            });
            RootRecord {
                lo,
                hi,
                value,
                degenerate: r.degenerate,
            }
        })
        .collect();
    Ok(Isolation {
        count: RootCount::Finite(roots.len()),
        roots,
    })
}

/// Roots `(ln x, degenerate)` of `p` between the logarithmic ends `a < c`.
/// Unlike [`count_and_isolate`], roots outside the range of `f64` keep their
/// exact position, and a critical point counts as a root only where the sign
/// of `p` cannot be certified, so every certified sign change is kept.
pub(crate) fn isolate_log(
    p: &Signomial,
    a: LogEnd,
    c: LogEnd,
    tol: f64,
) -> Result<Vec<(f64, bool)>> {
    Ok(isolate(p, a, c, tol, 0.0)?
        .into_iter()
        .map(|r| (r.u, r.degenerate))
        .collect())
}

#[derive(Debug, Clone, Copy)]
struct Node {
    end: LogEnd,
    sign: Sign,
}

/// `threshold` is the relative size below which `p` counts as vanishing; an
/// uncertified sign always does.
fn isolate(p: &Signomial, a: LogEnd, c: LogEnd, tol: f64, threshold: f64) -> Result<Vec<LogRoot>> {
    let pivot = match p.first_sign_change() {
        Some(pivot) if p.len() >= 2 => pivot,
        _ => return Ok(Vec::new()),
    };
    let q = p.shift_and_differentiate(pivot)?;
    let critical = isolate(&q, a, c, tol, threshold)?;

    let eval = |u: f64| Ok(p.eval_log(u).probe());
    let end_sign = |end: LogEnd| match end {
        LogEnd::NegInf => Ok(p.limit_sign(Endpoint::ZeroPlus)),
        LogEnd::PosInf => Ok(p.limit_sign(Endpoint::Infinity)),
        LogEnd::At(u) => checked(&eval, u),
    };

    let mut roots = Vec::new();
    let mut nodes = vec![Node {
        end: a,
        sign: end_sign(a)?,
    }];
    let mut last_degenerate = false;
    for r in &critical {
        let v = p.eval_log(r.u);
        if v.value.abs() <= (threshold * v.magnitude).max(v.noise) {
            if last_degenerate {
                // p stays within the threshold between two adjacent critical
                // points: one root
                if let Some(prev) = roots.last_mut() {
                    let prev: &mut LogRoot = prev;
                    prev.hi = r.hi;
                    prev.u = 0.5 * (prev.u + r.u);
                }
            } else {
                roots.push(LogRoot {
                    lo: r.lo,
                    hi: r.hi,
                    u: r.u,
                    degenerate: true,
                });
            }
            last_degenerate = true;
            nodes.push(Node {
                end: LogEnd::At(r.u),
                sign: Sign::Zero,
            });
        } else {
            last_degenerate = false;
            nodes.push(Node {
                end: LogEnd::At(r.u),
                sign: checked(&eval, r.u)?,
            });
        }
    }
    nodes.push(Node {
        end: c,
        sign: end_sign(c)?,
    });

    let mut found = Vec::new();
    for w in nodes.windows(2) {
        let (left, right) = (w[0], w[1]);
        if !left.sign.opposes(right.sign) {
            continue;
        }
        let lo_u = match left.end {
            LogEnd::NegInf => {
                let u0 = p.zero_domination_log();
                match right.end {
                    LogEnd::At(r) if r <= u0 => continue,
                    _ => u0,
                }
            }
            LogEnd::At(u) => u,
            LogEnd::PosInf => unreachable!("left end of a piece is never +inf"),
        };
        let hi_u = match right.end {
            LogEnd::PosInf => {
                let u1 = p.infinity_domination_log();
                if u1 <= lo_u {
                    continue;
                }
                u1
            }
            LogEnd::At(u) => u,
            LogEnd::NegInf => unreachable!("right end of a piece is never -inf"),
        };
        let b = bisect(&eval, lo_u, hi_u, left.sign, right.sign, tol)?;
        let dq = q.eval_log(b.root);
        found.push(LogRoot {
            lo: b.lo,
            hi: b.hi,
            u: b.root,
            degenerate: dq.value.abs() <= (threshold * dq.magnitude).max(dq.noise),
        });
    }
    roots.extend(found);
    roots.sort_by(|x, y| x.u.total_cmp(&y.u));
    Ok(roots)
}
