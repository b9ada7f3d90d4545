//! Generalized polynomials with real exponents on the positive half-line.
//!
//! A [`Signomial`] is a finite sum `α₁x^β₁ + … + αₙx^βₙ` stored with strictly
//! increasing exponents and nonzero coefficients. The empty sum is the
//! identically-zero function. Root counting follows the classical derivative
//! chain: dividing by `x^β` for a pivot exponent and differentiating removes
//! one term and, for the pivot at the first sign change, one sign variation,
//! so roots can be isolated recursively between the roots of the shorter
//! function (see [`count_and_isolate`]).

mod isolate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bracket::Probe;
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, EPS};
use crate::sign::{Endpoint, Sign};

pub(crate) use isolate::isolate_log;
pub use isolate::{
    count_and_isolate, Isolation, RootCount, RootRecord, DEFAULT_TOL, DEGENERACY_THRESHOLD,
};

/// One monomial `coefficient · x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: f64,
    pub exponent: f64,
}

impl Term {
    pub fn new(coefficient: f64, exponent: f64) -> Self {
        Term {
            coefficient,
            exponent,
        }
    }
}

/// A signomial in normal form: exponents strictly increasing, no zero
/// coefficients.
///
/// Serialized as a JSON array of `[coefficient, exponent]` pairs; input is
/// normalized on deserialization.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct Signomial {
    terms: Vec<Term>,
}

impl From<Vec<(f64, f64)>> for Signomial {
    fn from(raw: Vec<(f64, f64)>) -> Self {
        Signomial::normalize(raw)
    }
}

impl From<Signomial> for Vec<(f64, f64)> {
    fn from(p: Signomial) -> Self {
        p.terms
            .iter()
            .map(|t| (t.coefficient, t.exponent))
            .collect()
    }
}

/// Values of a signomial at `x = e^u`, all scaled by the same positive factor
/// so that the largest term has magnitude one.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scaled {
    pub value: f64,
    pub magnitude: f64,
    pub noise: f64,
}

impl Scaled {
    pub fn probe(&self) -> Probe {
        Probe {
            value: self.value,
            noise: self.noise,
        }
    }
}

impl Signomial {
    /// The identically-zero signomial.
    pub fn zero() -> Self {
        Signomial { terms: Vec::new() }
    }

    /// Builds a signomial from raw `(coefficient, exponent)` pairs: equal
    /// exponents are merged by adding coefficients, zero coefficients are
    /// dropped and the result is sorted by exponent.
    ///
    /// Exponents are compared exactly.
    pub fn normalize<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut pairs: Vec<(f64, f64)> = raw.into_iter().collect();
        pairs.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut terms: Vec<Term> = Vec::with_capacity(pairs.len());
        let mut i = 0;
        while i < pairs.len() {
            let exponent = pairs[i].1;
            let mut group = Vec::new();
            while i < pairs.len() && pairs[i].1 == exponent {
                group.push(pairs[i].0);
                i += 1;
            }
            let coefficient = compensated_sum(&mut group);
            if coefficient != 0.0 {
                terms.push(Term::new(coefficient, exponent));
            }
        }
        Signomial { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.exponent)
    }

    /// `Σ αᵢ x^βᵢ`, summed with compensation in order of decreasing magnitude.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x <= 0.0 {
            return Err(Error::Domain(format!(
                "signomials are evaluated on x > 0, got {x}"
            )));
        }
        let mut values: Vec<f64> = self
            .terms
            .iter()
            .map(|t| t.coefficient * x.powf(t.exponent))
            .collect();
        Ok(compensated_sum(&mut values))
    }

    /// Term-wise derivative `(α, β) ↦ (αβ, β − 1)`.
    pub fn derivative(&self) -> Signomial {
        Signomial::normalize(
            self.terms
                .iter()
                .map(|t| (t.coefficient * t.exponent, t.exponent - 1.0)),
        )
    }

    /// `(x^{-pivot} p(x))′`: the pivot term vanishes and every other term
    /// `(α, β)` becomes `(α(β − pivot), β − pivot − 1)`.
    pub fn shift_and_differentiate(&self, pivot_exponent: f64) -> Result<Signomial> {
        if !self.terms.iter().any(|t| t.exponent == pivot_exponent) {
            return Err(Error::PivotNotFound(pivot_exponent));
        }
        // shifting by a common amount keeps exponents distinct, so no merging
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponent != pivot_exponent)
            .map(|t| {
                let d = t.exponent - pivot_exponent;
                Term::new(t.coefficient * d, d - 1.0)
            })
            .collect();
        Ok(Signomial { terms })
    }

    /// Number of strict sign changes in the coefficient sequence.
    pub fn sign_variations(&self) -> usize {
        self.terms
            .windows(2)
            .filter(|w| (w[0].coefficient > 0.0) != (w[1].coefficient > 0.0))
            .count()
    }

    /// Exponent of the first term whose coefficient sign differs from the
    /// first coefficient's, if any.
    pub fn first_sign_change(&self) -> Option<f64> {
        let first = self.terms.first()?.coefficient > 0.0;
        self.terms
            .iter()
            .find(|t| (t.coefficient > 0.0) != first)
            .map(|t| t.exponent)
    }

    /// Sign of the dominant term at the endpoint: lowest exponent at `0⁺`,
    /// highest at infinity.
    pub fn limit_sign(&self, endpoint: Endpoint) -> Sign {
        let term = match endpoint {
            Endpoint::ZeroPlus => self.terms.first(),
            Endpoint::Infinity => self.terms.last(),
        };
        term.map_or(Sign::Zero, |t| Sign::of(t.coefficient))
    }

    /// The chain of signomials `p, Q₁, Q₂, …` obtained by repeatedly applying
    /// [`shift_and_differentiate`](Self::shift_and_differentiate) at the first
    /// sign change, down to a signomial without sign variation.
    pub fn derivative_chain(&self) -> Vec<Signomial> {
        let mut chain = vec![self.clone()];
        while let Some(pivot) = chain.last().and_then(Signomial::first_sign_change) {
            let next = chain
                .last()
                .and_then(|p| p.shift_and_differentiate(pivot).ok())
                .unwrap_or_default();
            chain.push(next);
        }
        chain
    }

    /// Evaluation at `x = e^u` with terms rescaled by the largest one. The
    /// noise bound accounts for the rounding of `ln|α| + βu` inside `exp`.
    pub(crate) fn eval_log(&self, u: f64) -> Scaled {
        if self.terms.is_empty() {
            return Scaled {
                value: 0.0,
                magnitude: 0.0,
                noise: 0.0,
            };
        }
        let logs: Vec<f64> = self
            .terms
            .iter()
            .map(|t| t.coefficient.abs().ln() + t.exponent * u)
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut spread = 0.0f64;
        let mut values = Vec::with_capacity(self.terms.len());
        let mut magnitude = 0.0;
        for (t, &l) in self.terms.iter().zip(&logs) {
            let m = (l - top).exp();
            magnitude += m;
            values.push(m.copysign(t.coefficient));
            spread = spread.max(t.coefficient.abs().ln().abs() + (t.exponent * u).abs());
        }
        let value = compensated_sum(&mut values);
        Scaled {
            value,
            magnitude,
            noise: 8.0 * EPS * magnitude * (1.0 + spread),
        }
    }

    /// A point `u` such that the lowest-exponent term outweighs the sum of all
    /// other terms by a factor two on `(-∞, u]`. Requires two or more terms.
    pub(crate) fn zero_domination_log(&self) -> f64 {
        let n = self.terms.len();
        let lead = self.terms[0];
        let share = (2.0 * (n - 1) as f64).ln();
        self.terms[1..]
            .iter()
            .map(|t| {
                let ratio = (t.coefficient / lead.coefficient).abs().ln();
                (-share - ratio) / (t.exponent - lead.exponent)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Mirror of [`zero_domination_log`](Self::zero_domination_log) at
    /// infinity: the highest-exponent term dominates on `[u, ∞)`.
    pub(crate) fn infinity_domination_log(&self) -> f64 {
        let n = self.terms.len();
        let lead = self.terms[n - 1];
        let share = (2.0 * (n - 1) as f64).ln();
        self.terms[..n - 1]
            .iter()
            .map(|t| {
                let ratio = (t.coefficient / lead.coefficient).abs().ln();
                (share + ratio) / (lead.exponent - t.exponent)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

impl fmt::Display for Signomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if t.coefficient < 0.0 { " - " } else { " + " })?;
                write!(f, "{}·x^{}", t.coefficient.abs(), t.exponent)?;
            } else {
                write!(f, "{}·x^{}", t.coefficient, t.exponent)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(p: &Signomial) -> Vec<(f64, f64)> {
        p.clone().into()
    }

    #[test]
    fn normalize_merges_and_cancels() {
        assert_eq!(
            pairs(&Signomial::normalize([(1.0, 2.0), (3.0, 2.0)])),
            vec![(4.0, 2.0)]
        );
        assert!(Signomial::normalize([(1.0, 1.0), (-1.0, 1.0)]).is_empty());
        let p = Signomial::normalize([(1.0, 3.0), (0.0, 1.0), (2.0, -1.0)]);
        assert_eq!(pairs(&p), vec![(2.0, -1.0), (1.0, 3.0)]);
    }

    #[test]
    fn equal_mass_h_terms_at_b3_cancel() {
        // exponents {b-1, b-2, 1, 0} = {2, 1, 1, 0} with coefficients {0, 2, -2, 0}
        let p = Signomial::normalize([(0.0, 2.0), (2.0, 1.0), (-2.0, 1.0), (0.0, 0.0)]);
        assert!(p.is_empty());
    }

    #[test]
    fn evaluate_examples() {
        let p = Signomial::normalize([(1.0, 0.5), (-3.0, 1.0), (1.0, 2.0)]);
        assert_eq!(p.evaluate(1.0).unwrap(), -1.0);
        assert_eq!(Signomial::zero().evaluate(7.5).unwrap(), 0.0);
        let q = Signomial::normalize([(1.0, std::f64::consts::PI)]);
        assert_eq!(q.evaluate(1.0).unwrap(), 1.0);
        assert!(matches!(p.evaluate(0.0), Err(Error::Domain(_))));
        assert!(matches!(p.evaluate(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_examples() {
        let d = Signomial::normalize([(4.0, 2.0)]).derivative();
        assert_eq!(pairs(&d), vec![(8.0, 1.0)]);
        assert!(Signomial::normalize([(5.0, 0.0)]).derivative().is_empty());
        let d = Signomial::normalize([(1.0, 0.5), (-3.0, 1.0)]).derivative();
        assert_eq!(pairs(&d), vec![(0.5, -0.5), (-3.0, 0.0)]);
    }

    #[test]
    fn shift_and_differentiate_examples() {
        let p = Signomial::normalize([(1.0, 0.0), (-2.0, 1.0)]);
        assert_eq!(
            pairs(&p.shift_and_differentiate(0.0).unwrap()),
            vec![(-2.0, 0.0)]
        );
        let p = Signomial::normalize([(2.0, 3.0)]);
        assert!(p.shift_and_differentiate(3.0).unwrap().is_empty());
        assert_eq!(
            p.shift_and_differentiate(1.0).unwrap_err(),
            Error::PivotNotFound(1.0)
        );
    }

    #[test]
    fn chain_step_at_first_sign_change_drops_one_variation() {
        let p = Signomial::normalize([
            (2.0, -1.0),
            (1.0, 0.3),
            (-4.0, 1.0),
            (1.0, 2.5),
            (-1.0, 3.0),
        ]);
        assert_eq!(p.sign_variations(), 3);
        let q = p
            .shift_and_differentiate(p.first_sign_change().unwrap())
            .unwrap();
        assert_eq!(q.sign_variations(), 2);
        assert_eq!(q.len(), p.len() - 1);
        let chain = p.derivative_chain();
        let vars: Vec<usize> = chain.iter().map(Signomial::sign_variations).collect();
        assert_eq!(vars, vec![3, 2, 1, 0]);
    }

    #[test]
    fn sign_variation_examples() {
        // Euler's quintic for unit masses: coefficients by increasing degree
        let quintic = Signomial::normalize([
            (2.0, 0.0),
            (5.0, 1.0),
            (4.0, 2.0),
            (-4.0, 3.0),
            (-5.0, 4.0),
            (-2.0, 5.0),
        ]);
        assert_eq!(quintic.sign_variations(), 1);
        assert_eq!(Signomial::zero().sign_variations(), 0);
        let p = Signomial::normalize([(1.0, 0.0), (-3.0, 1.0), (1.0, 2.0)]);
        assert_eq!(p.sign_variations(), 2);
    }

    #[test]
    fn limit_sign_examples() {
        // h for b = -1, unit masses: 2y^-3 - 2y^-2 - 2y + 2
        let h = Signomial::normalize([(2.0, -3.0), (-2.0, -2.0), (-2.0, 1.0), (2.0, 0.0)]);
        assert_eq!(h.limit_sign(Endpoint::ZeroPlus), Sign::Positive);
        assert_eq!(h.limit_sign(Endpoint::Infinity), Sign::Negative);
        let p = Signomial::normalize([(-3.0, 1.0), (1.0, 2.0)]);
        assert_eq!(p.limit_sign(Endpoint::Infinity), Sign::Positive);
        assert_eq!(Signomial::zero().limit_sign(Endpoint::ZeroPlus), Sign::Zero);
        assert_eq!(Signomial::zero().limit_sign(Endpoint::Infinity), Sign::Zero);
    }

    #[test]
    fn domination_points_control_the_sign() {
        let p = Signomial::normalize([(1.0, 0.5), (-3.0, 1.0), (1.0, 2.0)]);
        let u0 = p.zero_domination_log();
        let u1 = p.infinity_domination_log();
        for k in 0..50 {
            let a = p.eval_log(u0 - k as f64 * 0.7);
            assert!(a.value > 0.5 * a.magnitude - 1e-12);
            let b = p.eval_log(u1 + k as f64 * 0.7);
            assert!(b.value > 0.5 * b.magnitude - 1e-12);
        }
    }

    #[test]
    fn json_is_a_pair_array_and_normalizes_on_input() {
        let p: Signomial = serde_json::from_str("[[1,2],[3,2],[-1,0.5]]").unwrap();
        assert_eq!(pairs(&p), vec![(-1.0, 0.5), (4.0, 2.0)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[-1.0,0.5],[4.0,2.0]]");
    }
}
