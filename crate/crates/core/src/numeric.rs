//! Small floating-point helpers shared by the evaluators.

/// Unit roundoff of `f64`.
pub(crate) const EPS: f64 = f64::EPSILON;

/// Neumaier-compensated sum of the values, added in order of decreasing
/// magnitude.
pub(crate) fn compensated_sum(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for &v in values.iter() {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// `ln(1 + e^u)` without overflow for large `u`.
pub(crate) fn ln1p_exp(u: f64) -> f64 {
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

/// `e^p (e^x − 1)` with the two factors combined in the exponent, so that
/// an underflowing `e^p` never meets an overflowing `e^x`.
pub(crate) fn exp_expm1(p: f64, x: f64) -> f64 {
    if x > 0.5 {
        (p + x + (-(-x).exp()).ln_1p()).exp()
    } else if x < -0.5 {
        -(p + (-x.exp()).ln_1p()).exp()
    } else {
        let f = p.exp();
        let e = x.exp_m1();
        if (f.is_finite() && f > 0.0) || e == 0.0 {
            f * e
        } else {
            e.signum() * (p + e.abs().ln()).exp()
        }
    }
}

/// Generalized binomial coefficient `C(a, k)` for real `a`.
pub(crate) fn binomial(a: f64, k: usize) -> f64 {
    let mut c = 1.0;
    for j in 0..k {
        c *= (a - j as f64) / (j as f64 + 1.0);
    }
    c
}
