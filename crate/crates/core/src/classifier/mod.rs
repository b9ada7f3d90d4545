//! Closed-form counts over the `(m₂, b)` plane for equal exterior masses
//! `m₁ = m₃ = 1`.
//!
//! In the second cell, `g(1) = 0` and roots pair as `s ↔ 1/s`, so `ℰ₂` is
//! decided by the sign of `g` at `0⁺` against the sign just left of `1`,
//! which is that of `−g′(1)`. In the first cell (equivalently, the second
//! cell with masses `(m₂, 1, 1)`) the count is `1` exactly on the interval of
//! `m₂` where `g` has opposite signs at `0⁺` and `∞`.
//!
//! Frontiers:
//!
//! | kind            | locus                          | affects |
//! |-----------------|--------------------------------|---------|
//! | `curve`         | `m₂ = (2^b − 2b)/(b − 1)`      | `ℰ₂`    |
//! | `halfline_low`  | `m₂ = −1`, `b < 1`             | both    |
//! | `halfline_high` | `m₂ = b − 2`, `b > 1`          | both    |
//! | `hyperbola`     | `m₂ = 2/(b − 1)`, `b > 1`      | `ℰ₁`    |
//!
//! `ℰ₂ = 1` on its frontiers and `ℰ₁ = 0` on its own; every count is
//! infinite on `b = 1` and at the special points listed in
//! [`SPECIAL_POINTS`].

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{count_all, endpoint_sign_g, CellCount, Count, MassTriple};
use crate::sign::{Endpoint, Sign};
use crate::signomial::DEFAULT_TOL;

/// Distance within which a user coordinate is snapped onto a frontier.
pub const SNAP_TOL: f64 = 1e-12;

/// `(m₂, b)` where `g ≡ 0` in the second cell off the line `b = 1`.
pub const SPECIAL_POINTS: [(f64, f64); 3] = [(-1.0, 0.0), (0.0, 2.0), (1.0, 3.0)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontierKind {
    Curve,
    HalflineLow,
    HalflineHigh,
    Hyperbola,
    LineB1,
    SpecialPoint,
}

/// A classified count with its frontier status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classified {
    pub value: Count,
    pub on_frontier: bool,
    pub frontier_kind: Option<FrontierKind>,
}

impl Classified {
    fn interior(value: Count) -> Self {
        Classified {
            value,
            on_frontier: false,
            frontier_kind: None,
        }
    }

    fn frontier(value: Count, kind: FrontierKind) -> Self {
        Classified {
            value,
            on_frontier: true,
            frontier_kind: Some(kind),
        }
    }
}

/// Classification of one point of the `(m₂, b)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionClass {
    pub e1: Count,
    pub e2: Count,
    pub e3: Count,
    pub total: Count,
    pub on_frontier: bool,
    pub frontier_kind: Option<FrontierKind>,
}

impl RegionClass {
    pub fn counts(&self) -> CellCount {
        CellCount {
            e1: self.e1,
            e2: self.e2,
            e3: self.e3,
            total: self.total,
        }
    }
}

fn near(x: f64, y: f64) -> bool {
    (x - y).abs() <= SNAP_TOL * x.abs().max(y.abs()).max(1.0)
}

fn on_line_b1(b: f64) -> bool {
    near(b, 1.0)
}

fn special_point(m2: f64, b: f64) -> bool {
    SPECIAL_POINTS
        .iter()
        .any(|&(pm, pb)| near(m2, pm) && near(b, pb))
}

/// `(2^b − 2b)/(b − 1)`, where the symmetric root `s = 1` is degenerate.
pub fn frontier_curve_m2(b: f64) -> Result<f64> {
    if b == 1.0 || !b.is_finite() {
        return Err(Error::Domain(format!("the curve is undefined at b = {b}")));
    }
    Ok((b.exp2() - 2.0 * b) / (b - 1.0))
}

/// Frontier crossings of the horizontal line at `b`, sorted by `m₂`.
pub fn frontiers_at(b: f64) -> Result<Vec<(FrontierKind, f64)>> {
    let mut out = vec![(FrontierKind::Curve, frontier_curve_m2(b)?)];
    if b < 1.0 {
        out.push((FrontierKind::HalflineLow, -1.0));
    } else {
        out.push((FrontierKind::HalflineHigh, b - 2.0));
        out.push((FrontierKind::Hyperbola, 2.0 / (b - 1.0)));
    }
    out.sort_by(|x, y| x.1.total_cmp(&y.1));
    Ok(out)
}

/// The half-line through `(−1, 1)` on the side of `b`.
fn halfline(m2: f64, b: f64) -> Option<FrontierKind> {
    if b < 1.0 && near(m2, -1.0) {
        Some(FrontierKind::HalflineLow)
    } else if b > 1.0 && near(m2, b - 2.0) {
        Some(FrontierKind::HalflineHigh)
    } else {
        None
    }
}

fn on_hyperbola(m2: f64, b: f64) -> bool {
    b > 1.0 && near(m2 * (b - 1.0), 2.0)
}

/// `g′(1)` for masses `(1, m₂, 1)`.
fn g_prime_at_one(m2: f64, b: f64) -> f64 {
    2.0 * b - b.exp2() + m2 * (b - 1.0)
}

fn check(m2: f64, b: f64) -> Result<()> {
    if m2.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite point ({m2}, {b})")))
    }
}

/// `ℰ₂` for masses `(1, m₂, 1)`.
pub fn classify_e2(m2: f64, b: f64) -> Result<Classified> {
    check(m2, b)?;
    if on_line_b1(b) {
        return Ok(Classified::frontier(Count::Infinite, FrontierKind::LineB1));
    }
    if special_point(m2, b) {
        return Ok(Classified::frontier(
            Count::Infinite,
            FrontierKind::SpecialPoint,
        ));
    }
    if let Some(kind) = halfline(m2, b) {
        return Ok(Classified::frontier(Count::Finite(1), kind));
    }
    if near(m2, frontier_curve_m2(b)?) {
        return Ok(Classified::frontier(Count::Finite(1), FrontierKind::Curve));
    }
    let at_zero = endpoint_sign_g(MassTriple::new(1.0, m2, 1.0), b, Endpoint::ZeroPlus);
    let before_one = -Sign::of(g_prime_at_one(m2, b));
    let e2 = if at_zero == before_one { 1 } else { 3 };
    Ok(Classified::interior(Count::Finite(e2)))
}

/// `ℰ₁` (equal to `ℰ₃`) for masses `(1, m₂, 1)`.
pub fn classify_e1(m2: f64, b: f64) -> Result<Classified> {
    check(m2, b)?;
    if on_line_b1(b) {
        return Ok(Classified::frontier(Count::Infinite, FrontierKind::LineB1));
    }
    if near(m2, 1.0) && near(b, 3.0) {
        return Ok(Classified::frontier(
            Count::Infinite,
            FrontierKind::SpecialPoint,
        ));
    }
    if let Some(kind) = halfline(m2, b) {
        return Ok(Classified::frontier(Count::Finite(0), kind));
    }
    if on_hyperbola(m2, b) {
        return Ok(Classified::frontier(
            Count::Finite(0),
            FrontierKind::Hyperbola,
        ));
    }
    let inside = if b < 1.0 {
        m2 > -1.0
    } else {
        let (p, q) = (b - 2.0, 2.0 / (b - 1.0));
        p.min(q) < m2 && m2 < p.max(q)
    };
    Ok(Classified::interior(Count::Finite(inside as usize)))
}

/// All three cell counts and the total.
///
/// On a frontier each cell takes its frontier value, which makes the total
/// the smaller of the totals on the two sides, or `1` where both sides have
/// total `3`.
pub fn classify_total(m2: f64, b: f64) -> Result<RegionClass> {
    let e1 = classify_e1(m2, b)?;
    let e2 = classify_e2(m2, b)?;
    let kind = match (e2.frontier_kind, e1.frontier_kind) {
        (Some(FrontierKind::SpecialPoint), _) | (_, Some(FrontierKind::SpecialPoint)) => {
            Some(FrontierKind::SpecialPoint)
        }
        (k @ Some(_), _) => k,
        (None, k) => k,
    };
    Ok(RegionClass {
        e1: e1.value,
        e2: e2.value,
        e3: e1.value,
        total: e1.value + e2.value + e1.value,
        on_frontier: e1.on_frontier || e2.on_frontier,
        frontier_kind: kind,
    })
}

/// Euclidean distance from `(m₂, b)` to the nearest frontier, the line
/// `b = 1` or a special point, to first order for the curved loci.
pub fn frontier_distance(m2: f64, b: f64) -> f64 {
    let mut d = (b - 1.0).abs();
    let pivot = (m2 + 1.0).hypot(b - 1.0);
    for &(pm, pb) in &SPECIAL_POINTS {
        d = d.min((m2 - pm).hypot(b - pb));
    }
    d = d.min(if b < 1.0 { (m2 + 1.0).abs() } else { pivot });
    d = d.min(if b > 1.0 {
        (m2 - b + 2.0).abs() / 2f64.sqrt()
    } else {
        pivot
    });
    if b != 1.0 {
        let f = (b.exp2() - 2.0 * b) / (b - 1.0);
        let df = ((b.exp2() * std::f64::consts::LN_2 - 2.0) * (b - 1.0) - (b.exp2() - 2.0 * b))
            / ((b - 1.0) * (b - 1.0));
        d = d.min((m2 - f).abs() / (1.0 + df * df).sqrt());
    }
    if b > 1.0 {
        let f = 2.0 / (b - 1.0);
        let df = -2.0 / ((b - 1.0) * (b - 1.0));
        d = d.min((m2 - f).abs() / (1.0 + df * df).sqrt());
    }
    d
}

/// Half-open description of an axis: `n` evenly spaced samples from `lo` to
/// `hi` inclusive; a single sample sits at `lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Axis> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::Domain(format!("invalid range {lo}:{hi}")));
        }
        if n == 0 {
            return Err(Error::Domain("resolution must be at least 1".into()));
        }
        Ok(Axis { lo, hi, n })
    }

    pub fn at(&self, i: usize) -> f64 {
        if self.n == 1 || i == 0 {
            self.lo
        } else if i + 1 == self.n {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * (i as f64 / (self.n - 1) as f64)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub m2: f64,
    pub b: f64,
    pub class: RegionClass,
}

/// A grid point where the numeric counter disagrees with the closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub m2: f64,
    pub b: f64,
    pub classified: CellCount,
    /// `None` when the numeric counter failed; see `error`.
    pub numeric: Option<CellCount>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridScan {
    /// Row-major: `b` varies slowest.
    pub points: Vec<GridPoint>,
    /// Points farther than the margin from every frontier that were counted
    /// numerically.
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

/// Points, number recounted and mismatches of one row.
type RowScan = (Vec<GridPoint>, usize, Vec<Mismatch>);

fn scan_row(m2_axis: Axis, b: f64, cross_check: bool, margin: f64) -> Result<RowScan> {
    let mut points = Vec::with_capacity(m2_axis.n);
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for i in 0..m2_axis.n {
        let m2 = m2_axis.at(i);
        let class = classify_total(m2, b)?;
        points.push(GridPoint { m2, b, class });
        if !cross_check || frontier_distance(m2, b) <= margin {
            continue;
        }
        checked += 1;
        let classified = class.counts();
        match count_all(MassTriple::new(1.0, m2, 1.0), b, DEFAULT_TOL) {
            Ok(numeric) if numeric == classified => {}
            Ok(numeric) => mismatches.push(Mismatch {
                m2,
                b,
                classified,
                numeric: Some(numeric),
                error: None,
            }),
            Err(e) => mismatches.push(Mismatch {
                m2,
                b,
                classified,
                numeric: None,
                error: Some(e.to_string()),
            }),
        }
    }
    Ok((points, checked, mismatches))
}

/// Classifies a grid and optionally cross-checks it against [`count_all`].
///
/// Rows are distributed over `workers` threads (`0` or `1` runs inline);
/// the result does not depend on the number of workers.
pub fn grid_scan(
    m2_axis: Axis,
    b_axis: Axis,
    cross_check: bool,
    margin: f64,
    workers: usize,
) -> Result<GridScan> {
    if margin.is_nan() || margin < 0.0 {
        return Err(Error::Domain(format!(
            "margin must be non-negative, got {margin}"
        )));
    }
    let rows: Vec<f64> = (0..b_axis.n).map(|j| b_axis.at(j)).collect();
    let results: Vec<Result<RowScan>> = if workers <= 1 {
        rows.iter()
            .map(|&b| scan_row(m2_axis, b, cross_check, margin))
            .collect()
    } else {
        let chunk = rows.len().div_ceil(workers).max(1);
        std::thread::scope(|scope| {
            let handles: Vec<_> = rows
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        part.iter()
                            .map(|&b| scan_row(m2_axis, b, cross_check, margin))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("grid worker panicked"))
                .collect()
        })
    };
    let mut scan = GridScan {
        points: Vec::with_capacity(m2_axis.n * b_axis.n),
        checked: 0,
        mismatches: Vec::new(),
    };
    for r in results {
        let (points, checked, mismatches) = r?;
        scan.points.extend(points);
        scan.checked += checked;
        scan.mismatches.extend(mismatches);
    }
    Ok(scan)
}

/// Writes `m2,b,e1,e2,e3,total,on_frontier` rows.
pub fn write_csv<W: Write>(out: &mut W, points: &[GridPoint]) -> std::io::Result<()> {
    writeln!(out, "m2,b,e1,e2,e3,total,on_frontier")?;
    for p in points {
        let c = &p.class;
        writeln!(
            out,
            "{:.16e},{:.16e},{},{},{},{},{}",
            p.m2, p.b, c.e1, c.e2, c.e3, c.total, c.on_frontier
        )?;
    }
    Ok(())
}
