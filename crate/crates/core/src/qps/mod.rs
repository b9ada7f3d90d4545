//! Two-equation quasi-polynomial systems on the positive quadrant whose first
//! equation is a trinomial.
//!
//! Dividing the trinomial by one of its terms and taking the two quotients as
//! new variables turns it into a segment `a₁x + a₂y = 1`; the monomials of the
//! second equation stay monomials under this exponential change of
//! variables. The system then reduces to counting zeros of one function on
//! an interval. Zeros are found by a dense, noise-aware scan; the count is a
//! lower bound unless it meets a known cap.

use serde::{Deserialize, Serialize};

use crate::bracket::{bisect, Probe};
use crate::error::{Error, Result};
use crate::euler::MassTriple;
use crate::numeric::{compensated_sum, ln1p_exp, EPS};
use crate::sign::Sign;
use crate::signomial::RootRecord;

/// `2ⁿ − 2`, the bound on positive solutions when one equation is a
/// trinomial and the other has `n` monomials.
pub fn straight_bound(n: u32) -> Result<u128> {
    if n < 1 {
        return Err(Error::Domain("straight_bound needs n >= 1".into()));
    }
    1u128
        .checked_shl(n)
        .filter(|_| n < 128)
        .map(|p| p - 2)
        .ok_or_else(|| Error::Overflow(format!("2^{n} does not fit in 128 bits")))
}

/// `d₁d₂(d₁+d₂+1)^k 2^{k(k−1)/2}`, the fewnomial bound for two polynomial
/// equations of degrees `d₁`, `d₂` in `k` exponentials.
pub fn khovanskii_bound(d1: u32, d2: u32, k: u32) -> Result<u128> {
    if d1 < 1 || d2 < 1 {
        return Err(Error::Domain(format!(
            "khovanskii_bound needs d1, d2 >= 1, got {d1}, {d2}"
        )));
    }
    let overflow = || {
        Error::Overflow(format!(
            "khovanskii_bound({d1}, {d2}, {k}) exceeds 128 bits"
        ))
    };
    let base = d1 as u128 + d2 as u128 + 1;
    let power = base.checked_pow(k).ok_or_else(overflow)?;
    let shift = (k as u128) * (k as u128).saturating_sub(1) / 2;
    if shift >= 128 {
        return Err(overflow());
    }
    (d1 as u128 * d2 as u128)
        .checked_mul(power)
        .and_then(|v| v.checked_mul(1u128 << shift))
        .ok_or_else(overflow)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, f64)", into = "(f64, f64, f64)")]
pub struct BiTerm {
    pub coefficient: f64,
    pub x_exponent: f64,
    pub y_exponent: f64,
}

impl From<(f64, f64, f64)> for BiTerm {
    fn from((coefficient, x_exponent, y_exponent): (f64, f64, f64)) -> Self {
        BiTerm {
            coefficient,
            x_exponent,
            y_exponent,
        }
    }
}

impl From<BiTerm> for (f64, f64, f64) {
    fn from(t: BiTerm) -> Self {
        (t.coefficient, t.x_exponent, t.y_exponent)
    }
}

/// `Σ aᵢ x^{βᵢ} y^{γᵢ}` with distinct exponent pairs and nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BivariateSignomial {
    terms: Vec<BiTerm>,
}

impl BivariateSignomial {
    /// Merges equal exponent pairs and drops zero coefficients; terms are
    /// ordered by `(x_exponent, y_exponent)`.
    pub fn normalize<I, T>(raw: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BiTerm>,
    {
        let mut all: Vec<BiTerm> = raw.into_iter().map(Into::into).collect();
        all.sort_by(|a, b| {
            a.x_exponent
                .total_cmp(&b.x_exponent)
                .then(a.y_exponent.total_cmp(&b.y_exponent))
        });
        let mut terms: Vec<BiTerm> = Vec::with_capacity(all.len());
        let mut i = 0;
        while i < all.len() {
            let mut j = i;
            let mut parts = Vec::new();
            while j < all.len()
                && all[j].x_exponent == all[i].x_exponent
                && all[j].y_exponent == all[i].y_exponent
            {
                parts.push(all[j].coefficient);
                j += 1;
            }
            let c = compensated_sum(&mut parts);
            if c != 0.0 {
                terms.push(BiTerm {
                    coefficient: c,
                    ..all[i]
                });
            }
            i = j;
        }
        BivariateSignomial { terms }
    }

    pub fn terms(&self) -> &[BiTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at `x, y > 0`.
    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::Domain(format!(
                "bivariate signomials are evaluated on x, y > 0, got ({x}, {y})"
            )));
        }
        Ok(self.eval_log(x.ln(), y.ln()).value)
    }

    /// Value, from `ln x` and `ln y`, with an error bound.
    fn eval_log(&self, lx: f64, ly: f64) -> Probe {
        let mut values: Vec<f64> = Vec::with_capacity(self.terms.len());
        let mut noise = 0.0;
        for t in &self.terms {
            let e = t.x_exponent * lx + t.y_exponent * ly;
            let v = t.coefficient * e.exp();
            noise += v.abs() * (1.0 + e.abs());
            values.push(v);
        }
        Probe {
            value: compensated_sum(&mut values),
            noise: 16.0 * EPS * (self.terms.len().max(1) as f64) * noise,
        }
    }
}

/// The segment `a₁x + a₂y = 1` in the positive quadrant, read as the graph
/// `y = (1 − a₁x)/a₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineConstraint {
    pub a1: f64,
    pub a2: f64,
}

/// How `x` is reached from the scan coordinate `u ∈ ℝ`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Chart {
    /// `x = e^u` on `(0, ∞)`.
    Exp,
    /// `x = L/(1 + e^{−u})` on `(0, L)`.
    Logistic(f64),
    /// `x = L(1 + e^u)` on `(L, ∞)`.
    Shifted(f64),
}

impl AffineConstraint {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if !(a1.is_finite() && a2.is_finite()) || a2 == 0.0 {
            return Err(Error::Domain(format!(
                "the constraint needs finite a1 and a nonzero a2, got ({a1}, {a2})"
            )));
        }
        Ok(AffineConstraint { a1, a2 })
    }

    /// Open interval of `x > 0` with `(1 − a₁x)/a₂ > 0`.
    pub fn admissible_interval(&self) -> Result<(f64, f64)> {
        self.chart().map(|c| match c {
            Chart::Exp => (0.0, f64::INFINITY),
            Chart::Logistic(l) => (0.0, l),
            Chart::Shifted(l) => (l, f64::INFINITY),
        })
    }

    fn chart(&self) -> Result<Chart> {
        let AffineConstraint { a1, a2 } = *self;
        if a2 == 0.0 {
            return Err(Error::Domain("a2 must be nonzero".into()));
        }
        match (a2 > 0.0, a1 > 0.0) {
            (true, true) => Ok(Chart::Logistic(1.0 / a1)),
            (true, false) => Ok(Chart::Exp),
            (false, true) => Ok(Chart::Shifted(1.0 / a1)),
            (false, false) => Err(Error::Domain(format!(
                "the line {a1}x + {a2}y = 1 misses the positive quadrant"
            ))),
        }
    }

    /// `(ln x, ln y)` at scan coordinate `u`, without forming `1 − a₁x`.
    fn logs(&self, chart: Chart, u: f64) -> (f64, f64) {
        let AffineConstraint { a1, a2 } = *self;
        match chart {
            Chart::Exp => {
                // 1 − a₁x = 1 + |a₁|e^u
                let l = if a1 == 0.0 {
                    0.0
                } else {
                    ln1p_exp(u + (-a1).ln())
                };
                (u, l - a2.ln())
            }
            Chart::Logistic(l) => (l.ln() - ln1p_exp(-u), -ln1p_exp(u) - a2.ln()),
            Chart::Shifted(l) => (l.ln() + ln1p_exp(u), u - (-a2).ln()),
        }
    }

    fn x_at(&self, chart: Chart, u: f64) -> f64 {
        match chart {
            Chart::Exp => u.exp(),
            Chart::Logistic(l) => l / (1.0 + (-u).exp()),
            Chart::Shifted(l) => l * (1.0 + u.exp()),
        }
    }
}

/// A bivariate signomial restricted to a constraint segment.
#[derive(Debug, Clone, PartialEq)]
pub struct LineRestriction {
    pub f: BivariateSignomial,
    pub constraint: AffineConstraint,
    /// Open admissible interval of `x`.
    pub interval: (f64, f64),
}

impl LineRestriction {
    /// `f(x, (1 − a₁x)/a₂)` on the admissible interval.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.interval;
        if !(x > lo && x < hi) {
            return Err(Error::Domain(format!(
                "x = {x} is outside the admissible interval ({lo}, {hi})"
            )));
        }
        let y = (1.0 - self.constraint.a1 * x) / self.constraint.a2;
        self.f.evaluate(x, y)
    }
}

pub fn restrict_to_line(f: &BivariateSignomial, c: AffineConstraint) -> Result<LineRestriction> {
    Ok(LineRestriction {
        f: f.clone(),
        constraint: c,
        interval: c.admissible_interval()?,
    })
}

/// What the count returned by [`count_on_line`] is known to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    /// The count reached the `2ⁿ − 2` bound, so it is exact.
    AnalyticBound,
    /// The count reached the caller's cap, so it is exact.
    CallerCap,
    /// Sign changes seen by the scan; zeros of even multiplicity or
    /// clusters finer than the scan can be missed.
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineCount {
    pub count: usize,
    /// Roots in `x`, increasing.
    pub roots: Vec<RootRecord>,
    pub exactness: Exactness,
    /// No probe could certify a sign: the restriction looks identically zero.
    pub all_probes_vanish: bool,
}

/// Number of initial probes.
const PROBES: usize = 10_000;
/// Initial probes cover `|u| ≤ SPAN`.
const SPAN: f64 = 30.0;
/// Farthest probe toward the ends.
const REACH: f64 = 700.0;

/// Zeros of `f` along the segment.
///
/// `tol` is the bracket width in the scan coordinate (relative width in `x`
/// away from a finite end). `cap`, when given, is a known upper bound on the
/// number of zeros.
pub fn count_on_line(
    f: &BivariateSignomial,
    c: AffineConstraint,
    tol: f64,
    cap: Option<usize>,
) -> Result<LineCount> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let chart = c.chart()?;
    let probe = |u: f64| -> Result<Probe> {
        let (lx, ly) = c.logs(chart, u);
        Ok(f.eval_log(lx, ly))
    };

    let mut us: Vec<f64> = (0..PROBES)
        .map(|i| -SPAN + 2.0 * SPAN * i as f64 / (PROBES - 1) as f64)
        .collect();
    let mut reach = 2.0 * SPAN;
    while reach <= REACH {
        us.push(-reach);
        us.push(reach);
        reach *= 1.5;
    }
    us.sort_by(f64::total_cmp);
    let mut samples: Vec<(f64, Probe)> = us
        .into_iter()
        .map(|u| probe(u).map(|p| (u, p)))
        .collect::<Result<_>>()?;
    refine_near_minima(&probe, &mut samples)?;

    let certified: Vec<(f64, Sign)> = samples
        .iter()
        .filter(|(_, p)| p.value.is_finite() && p.noise.is_finite())
        .map(|&(u, p)| (u, p.sign()))
        .filter(|(_, s)| !s.is_zero())
        .collect();
    let all_probes_vanish = certified.is_empty();

    let mut roots = Vec::new();
    for w in certified.windows(2) {
        let ((lo, sl), (hi, sh)) = (w[0], w[1]);
        if sl.opposes(sh) {
            let br = bisect(&probe, lo, hi, sl, sh, tol)?;
            let (a, b) = (c.x_at(chart, br.lo), c.x_at(chart, br.hi));
            roots.push(RootRecord {
                lo: a.min(b),
                hi: a.max(b),
                value: c.x_at(chart, br.root),
                degenerate: false,
            });
        }
    }
    let count = roots.len();
    let analytic = u32::try_from(f.len())
        .ok()
        .and_then(|n| straight_bound(n.max(1)).ok());
    let exactness = if analytic == Some(count as u128) && count > 0 {
        Exactness::AnalyticBound
    } else if cap == Some(count) {
        Exactness::CallerCap
    } else {
        Exactness::LowerBound
    };
    Ok(LineCount {
        count,
        roots,
        exactness,
        all_probes_vanish,
    })
}

/// Adds probes around interior local minima of the relative size
/// `|f|/noise` between same-sign neighbours, where two close zeros may hide.
fn refine_near_minima<F>(probe: &F, samples: &mut Vec<(f64, Probe)>) -> Result<()>
where
    F: Fn(f64) -> Result<Probe>,
{
    const ROUNDS: usize = 3;
    const POINTS: usize = 32;
    let size = |p: &Probe| p.value.abs() / p.noise.max(f64::MIN_POSITIVE);
    for _ in 0..ROUNDS {
        let mut extra = Vec::new();
        for w in samples.windows(3) {
            let (a, b, c) = (&w[0], &w[1], &w[2]);
            let signs = [a.1.sign(), b.1.sign(), c.1.sign()];
            if signs.iter().any(|s| s.is_zero()) || signs[0] != signs[1] || signs[1] != signs[2] {
                continue;
            }
            if size(&b.1) < size(&a.1) && size(&b.1) < size(&c.1) {
                for k in 1..POINTS {
                    let t = k as f64 / POINTS as f64;
                    extra.push(a.0 + (c.0 - a.0) * t);
                }
            }
        }
        if extra.is_empty() {
            break;
        }
        for u in extra {
            samples.push((u, probe(u)?));
        }
        samples.sort_by(|x, y| x.0.total_cmp(&y.0));
        samples.dedup_by(|x, y| x.0 == y.0);
    }
    Ok(())
}

/// Divides the trinomial by its `designated` term and changes variables so
/// that it reads `a₁X + a₂Y = 1`, where `X` is the quotient of term `x_term`
/// by the designated one and `Y` that of the remaining term. Term indices
/// refer to [`BivariateSignomial::terms`].
///
/// Returns the constraint and `second` rewritten in `(X, Y)`.
pub fn straighten(
    trinomial: &BivariateSignomial,
    designated: usize,
    x_term: usize,
    second: &BivariateSignomial,
) -> Result<(AffineConstraint, BivariateSignomial)> {
    if trinomial.len() != 3 || designated > 2 || x_term > 2 || x_term == designated {
        return Err(Error::Domain(format!(
            "expected a trinomial and two distinct term indices below 3, got {} terms and indices {designated}, {x_term}",
            trinomial.len()
        )));
    }
    let t = trinomial.terms();
    let r = t[designated];
    let p = t[x_term];
    let q = t[3 - designated - x_term];
    let m = [
        [p.x_exponent - r.x_exponent, p.y_exponent - r.y_exponent],
        [q.x_exponent - r.x_exponent, q.y_exponent - r.y_exponent],
    ];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 {
        return Err(Error::Domain(
            "the trinomial's exponent differences are linearly dependent".into(),
        ));
    }
    // (ln X, ln Y) = M (ln x, ln y), so x^β y^γ = X^{β'} Y^{γ'} with (β', γ') = (β, γ) M⁻¹
    let inv = [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ];
    let constraint = AffineConstraint::new(
        -p.coefficient / r.coefficient,
        -q.coefficient / r.coefficient,
    )?;
    let rewritten = BivariateSignomial::normalize(second.terms().iter().map(|s| {
        (
            s.coefficient,
            s.x_exponent * inv[0][0] + s.y_exponent * inv[1][0],
            s.x_exponent * inv[0][1] + s.y_exponent * inv[1][1],
        )
    }));
    Ok((constraint, rewritten))
}

/// The configuration equations in `s, t > 0`: the trinomial `s + 1 − t = 0`
/// and the six-term equation `g = 0` with `t` standing for `1 + s`.
pub fn euler_system(m: MassTriple, b: f64) -> (BivariateSignomial, BivariateSignomial) {
    let trinomial =
        BivariateSignomial::normalize([(1.0, 1.0, 0.0), (1.0, 0.0, 0.0), (-1.0, 0.0, 1.0)]);
    let second = BivariateSignomial::normalize([
        (m.m2 + m.m3, b, 0.0),
        (m.m1 + m.m3, 0.0, b),
        (m.m3, b + 1.0, 0.0),
        (-m.m3, 0.0, b + 1.0),
        (-m.m1, 0.0, 1.0),
        (-m.m2, 1.0, 0.0),
    ]);
    (trinomial, second)
}

/// The configuration equation on the segment `−s + t = 1`.
pub fn euler_restriction(m: MassTriple, b: f64) -> Result<(AffineConstraint, BivariateSignomial)> {
    let (trinomial, second) = euler_system(m, b);
    let find = |x: f64, y: f64| {
        trinomial
            .terms()
            .iter()
            .position(|t| t.x_exponent == x && t.y_exponent == y)
            .expect("the trinomial has terms 1, s and t")
    };
    straighten(&trinomial, find(0.0, 0.0), find(1.0, 0.0), &second)
}
