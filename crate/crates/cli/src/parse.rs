//! Value parsers for command-line arguments. Numbers are plain decimal
//! literals; no expressions are evaluated.

/// A finite real.
pub fn real(text: &str) -> Result<f64, String> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("`{text}` is not a decimal number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{text}` is not finite"))
    }
}

/// A positive finite real.
pub fn positive(text: &str) -> Result<f64, String> {
    let v = real(text)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("`{text}` must be positive"))
    }
}

/// A non-negative real or `inf`.
pub fn endpoint(text: &str) -> Result<f64, String> {
    match text.trim() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => {
            let v = real(t)?;
            if v >= 0.0 {
                Ok(v)
            } else {
                Err(format!("`{text}` must be non-negative"))
            }
        }
    }
}

/// Three comma-separated reals.
pub fn triple(text: &str) -> Result<[f64; 3], String> {
    let parts = text.split(',').map(real).collect::<Result<Vec<_>, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|p| format!("expected three values, got {}", p.len()))
}

/// `lo:hi` with `lo ≤ hi`.
pub fn range(text: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("`{text}` is not of the form lo:hi"))?;
    let (lo, hi) = (real(lo)?, real(hi)?);
    if lo <= hi {
        Ok((lo, hi))
    } else {
        Err(format!("empty range {lo}:{hi}"))
    }
}

/// `NXxNY` with both counts positive.
pub fn resolution(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("`{text}` is not of the form NXxNY"))?;
    let count = |s: &str| -> Result<usize, String> {
        match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(format!("`{s}` is not a positive integer")),
        }
    };
    Ok((count(a)?, count(b)?))
}

/// Two comma-separated positive integers.
pub fn degree_pair(text: &str) -> Result<(u32, u32), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("`{text}` is not of the form d1,d2"))?;
    let degree = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| format!("`{s}` is not a degree"))
    };
    Ok((degree(a)?, degree(b)?))
}
