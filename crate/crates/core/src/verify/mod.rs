//! Randomized and exact checks of the library against independent oracles,
//! one function per acceptance criterion. Every check is seeded and
//! deterministic.

pub mod oracle;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classifier::{frontiers_at, grid_scan, Axis, FrontierKind};
use crate::euler::{
    celli_identity_residual, count_all, count_cell, degenerate_family, eval_g, h_signomial, solve,
    Cell, CellCount, Count, MassTriple,
};
use crate::qps::{count_on_line, euler_restriction, khovanskii_bound, straight_bound};
use crate::signomial::{count_and_isolate, Signomial, DEFAULT_TOL};

pub const DEFAULT_SEED: u64 = 0x5eed_e01e;

/// Failure messages kept per criterion.
const MAX_FAILURES: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Number of individual checks performed.
    pub checked: usize,
    pub detail: String,
    pub failures: Vec<String>,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {} ({} checks): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.checked,
            self.detail
        )?;
        for msg in &self.failures {
            write!(f, "\n    {msg}")?;
        }
        Ok(())
    }
}

struct Tally {
    checked: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(msg());
            }
        }
    }

    fn report(self, id: u8, title: &'static str, detail: String) -> CriterionReport {
        CriterionReport {
            id,
            title,
            passed: self.failed == 0,
            checked: self.checked,
            detail: format!("{} failed; {detail}", self.failed),
            failures: self.failures,
        }
    }
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn triple(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> MassTriple {
    MassTriple::new(
        rng.gen_range(lo..hi),
        rng.gen_range(lo..hi),
        rng.gen_range(lo..hi),
    )
}

fn finite_total(c: &CellCount) -> Option<usize> {
    c.total.finite()
}

/// Positive masses at `b = −2`: the quintic has one coefficient sign change
/// and its root is the unique configuration of the second cell.
pub fn criterion_1(seed: u64) -> CriterionReport {
    let mut rng = rng_for(seed, 1);
    let mut t = Tally::new();
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = triple(&mut rng, 0.1, 10.0);
        let quintic = oracle::euler_quintic(m);
        t.check(oracle::descartes_variations(&quintic) == 1, || {
            format!("{m:?}: quintic {quintic:?} does not have one sign variation")
        });
        let cell = count_cell(m, -2.0, Cell::Two, DEFAULT_TOL);
        let root = oracle::single_positive_root(&quintic);
        match (cell, root) {
            (Ok(c), Some(r)) if c.count == Count::Finite(1) => {
                let rel = (c.solutions[0].s - r).abs() / r;
                worst = worst.max(rel);
                t.check(rel <= 1e-9, || {
                    format!("{m:?}: root {} vs quintic {r}", c.solutions[0].s)
                });
            }
            (c, r) => t.check(false, || format!("{m:?}: count {c:?}, quintic root {r:?}")),
        }
    }
    t.report(
        1,
        "positive masses at b = -2",
        format!("worst relative root error {worst:.2e}"),
    )
}

/// Vortex exponent: at most three configurations over all cells.
pub fn criterion_2(seed: u64) -> CriterionReport {
    let mut rng = rng_for(seed, 2);
    let mut t = Tally::new();
    let mut histogram = [0usize; 4];
    let mut drawn = 0;
    while drawn < 1000 {
        let m = triple(&mut rng, -10.0, 10.0);
        if degenerate_family(m, -1.0).is_some() {
            continue;
        }
        drawn += 1;
        match count_all(m, -1.0, DEFAULT_TOL) {
            Ok(c) => {
                let total = finite_total(&c);
                if let Some(n) = total.filter(|n| *n <= 3) {
                    histogram[n] += 1;
                }
                t.check(total.is_some_and(|n| n <= 3), || format!("{m:?}: {c:?}"));
            }
            Err(e) => t.check(false, || format!("{m:?}: {e}")),
        }
    }
    t.report(
        2,
        "b = -1 totals are at most 3",
        format!("totals 0..3 seen {histogram:?}"),
    )
}

/// At most three configurations in the second cell, none degenerate when
/// there are three.
pub fn criterion_3(seed: u64) -> CriterionReport {
    let mut rng = rng_for(seed, 3);
    let mut t = Tally::new();
    let mut histogram = [0usize; 4];
    let mut drawn = 0;
    while drawn < 1000 {
        let m = triple(&mut rng, -10.0, 10.0);
        let b = rng.gen_range(-5.0..5.0);
        if degenerate_family(m, b).is_some() {
            continue;
        }
        drawn += 1;
        match count_cell(m, b, Cell::Two, DEFAULT_TOL) {
            Ok(c) => match c.count {
                Count::Finite(n) if n <= 3 => {
                    histogram[n] += 1;
                    let clean = n < 3 || c.solutions.iter().all(|s| !s.degenerate);
                    t.check(clean, || {
                        format!("{m:?}, b={b}: degenerate root among three")
                    });
                }
                other => t.check(false, || format!("{m:?}, b={b}: count {other}")),
            },
            Err(e) => t.check(false, || format!("{m:?}, b={b}: {e}")),
        }
    }
    t.report(
        3,
        "second cell holds at most 3",
        format!("counts 0..3 seen {histogram:?}"),
    )
}

/// Positive masses with `b < 1`: one configuration per cell.
pub fn criterion_4(seed: u64) -> CriterionReport {
    let mut rng = rng_for(seed, 4);
    let mut t = Tally::new();
    let one = CellCount::new(Count::Finite(1), Count::Finite(1), Count::Finite(1));
    for _ in 0..1000 {
        let m = triple(&mut rng, 0.1, 10.0);
        let b = rng.gen_range(-5.0..0.99);
        match count_all(m, b, DEFAULT_TOL) {
            Ok(c) => t.check(c == one, || format!("{m:?}, b={b}: {c:?}")),
            Err(e) => t.check(false, || format!("{m:?}, b={b}: {e}")),
        }
    }
    t.report(
        4,
        "positive masses, b < 1: one per cell",
        "every draw gave (1,1,1)".into(),
    )
}

/// Totals at most 3 for `b < 0` and at most 5 for `0 < b < 1`, with 5
/// attained.
pub fn criterion_5(seed: u64) -> CriterionReport {
    let mut rng = rng_for(seed, 5);
    let mut t = Tally::new();
    let mut max_seen = [0usize; 2];
    for (slot, (lo, hi, cap)) in [(-5.0, 0.0, 3usize), (0.0, 1.0, 5usize)]
        .into_iter()
        .enumerate()
    {
        let mut drawn = 0;
        while drawn < 500 {
            let m = triple(&mut rng, -10.0, 10.0);
            let b: f64 = rng.gen_range(lo..hi);
            if b == 0.0 || degenerate_family(m, b).is_some() {
                continue;
            }
            drawn += 1;
            match count_all(m, b, DEFAULT_TOL) {
                Ok(c) => {
                    let total = finite_total(&c);
                    max_seen[slot] = max_seen[slot].max(total.unwrap_or(0));
                    t.check(total.is_some_and(|n| n <= cap), || {
                        format!("{m:?}, b={b}: {c:?}")
                    });
                }
                Err(e) => t.check(false, || format!("{m:?}, b={b}: {e}")),
            }
        }
    }
    let m = MassTriple::new(1.0, -0.9, 1.0);
    let five = CellCount::new(Count::Finite(1), Count::Finite(3), Count::Finite(1));
    let c = count_all(m, 0.5, DEFAULT_TOL);
    t.check(c.as_ref().is_ok_and(|c| *c == five), || {
        format!("(1,-0.9,1), b=0.5: {c:?}")
    });
    let line = |s: f64| oracle::g_line(m, 0.5, s);
    let scan = (
        oracle::dense_scan(|u| line(-1.0 - u), 1e-6, 1e6, 400_000),
        oracle::dense_scan(line, 1e-6, 1e6, 400_000),
        oracle::dense_scan(|u| line(-u / (1.0 + u)), 1e-6, 1e6, 400_000),
    );
    t.check(scan == (1, 3, 1), || {
        format!("(1,-0.9,1), b=0.5: line scan {scan:?}")
    });
    t.report(
        5,
        "totals at most 3 (b<0) and 5 (0<b<1)",
        format!(
            "largest totals {} and {}; five attained, scan {scan:?}",
            max_seen[0], max_seen[1]
        ),
    )
}

/// Zero-count triples and the zero-total-mass identity.
pub fn criterion_6(_seed: u64) -> CriterionReport {
    let mut t = Tally::new();
    for b in [-2.0, -1.0] {
        let c = count_all(MassTriple::new(0.0, -1.0, 1.0), b, DEFAULT_TOL);
        t.check(
            c.as_ref().is_ok_and(|c| c.total == Count::Finite(0)),
            || format!("(0,-1,1), b={b}: {c:?}"),
        );
    }
    let m = MassTriple::new(1.0, 2.0, -3.0);
    let mut residual = f64::NAN;
    match solve(m, -2.0, DEFAULT_TOL) {
        Ok(census) => {
            t.check(census.counts.total == Count::Finite(1), || {
                format!("(1,2,-3), b=-2: {:?}", census.counts)
            });
            if let Some(sol) = census.solutions.first() {
                residual = celli_identity_residual(m, sol).unwrap_or(f64::NAN);
                t.check(residual.abs() < 1e-9, || {
                    format!("(1,2,-3): residual {residual:e}")
                });
            }
        }
        Err(e) => t.check(false, || format!("(1,2,-3): {e}")),
    }
    t.report(
        6,
        "zero counts and zero total mass",
        format!("identity residual {residual:.2e}"),
    )
}

/// Polynomial forms at `b = −2` and `b = −1`, and the second-derivative
/// transform against finite differences.
pub fn criterion_7(seed: u64) -> CriterionReport {
    let mut rng = rng_for(seed, 7);
    let mut t = Tally::new();
    let mut worst = [0.0f64; 3];
    for _ in 0..100 {
        let m = triple(&mut rng, -10.0, 10.0);
        let s: f64 = 10f64.powf(rng.gen_range(-2.0..2.0));
        for (slot, b, factor, poly) in [
            (0, -2.0, (1.0 + s).powi(2) * s * s, oracle::euler_quintic(m)),
            (1, -1.0, (1.0 + s) * s, oracle::euler_cubic(m)),
        ] {
            let lhs = factor * eval_g(m, b, s).unwrap_or(f64::NAN);
            let (rhs, mag) = oracle::horner(&poly, s);
            let rel = (lhs - rhs).abs() / mag;
            worst[slot] = worst[slot].max(rel);
            t.check(rel <= 1e-9, || {
                format!("{m:?}, b={b}, s={s}: {lhs} vs {rhs}")
            });
        }

        let b = loop {
            let b: f64 = rng.gen_range(-5.0..5.0);
            if b != 0.0 && b != 1.0 {
                break b;
            }
        };
        let y: f64 = rng.gen_range(0.05..0.95);
        let s = y / (1.0 - y);
        let h = h_signomial(m, b).unwrap_or_default();
        let scale = (1.0 - y).powf(1.0 - b);
        let exact = scale * h.evaluate(y).unwrap_or(f64::NAN);
        let magnitude: f64 = scale
            * h.terms()
                .iter()
                .map(|t| (t.coefficient * y.powf(t.exponent)).abs())
                .sum::<f64>();
        let fd = oracle::second_difference(|x| oracle::g_line(m, b, x), s, 1e-3 * s);
        let rel = (fd - exact).abs() / exact.abs().max(magnitude);
        worst[2] = worst[2].max(rel);
        t.check(rel <= 1e-5, || {
            format!("{m:?}, b={b}, y={y}: g'' {fd} vs transform {exact}")
        });
    }
    t.report(
        7,
        "polynomial forms and second-derivative transform",
        format!(
            "worst relative errors {:.1e}, {:.1e}, {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

/// The five families are infinite and small perturbations are finite.
pub fn criterion_8(seed: u64) -> CriterionReport {
    let mut rng = rng_for(seed, 8);
    let mut t = Tally::new();
    let families = [
        (MassTriple::new(0.0, 0.0, 0.0), -2.0),
        (MassTriple::new(1.0, -1.0, 1.0), 0.0),
        (MassTriple::new(0.7, -1.3, 2.1), 1.0),
        (MassTriple::new(1.0, 0.0, 1.0), 2.0),
        (MassTriple::new(1.0, 1.0, 1.0), 3.0),
    ];
    for (m, b) in families {
        let c = count_cell(m, b, Cell::Two, DEFAULT_TOL);
        t.check(c.as_ref().is_ok_and(|c| c.count == Count::Infinite), || {
            format!("{m:?}, b={b}: {c:?}")
        });
        for _ in 0..100 {
            let mut d = || rng.gen_range(-1e-3..1e-3);
            let p = MassTriple::new(m.m1 + d(), m.m2 + d(), m.m3 + d());
            let pb = b + d();
            let c = count_all(p, pb, DEFAULT_TOL);
            t.check(c.as_ref().is_ok_and(|c| c.total.finite().is_some()), || {
                format!("{p:?}, b={pb}: {c:?}")
            });
        }
    }
    t.report(
        8,
        "degenerate families",
        "5 families, 100 perturbations each".into(),
    )
}

/// The closed-form classification agrees with numeric counts away from the
/// frontiers, and the frontier values at `b = −2` are exact.
pub fn criterion_9(_seed: u64) -> CriterionReport {
    let mut t = Tally::new();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let axes = (Axis::new(-4.0, 2.0, 50), Axis::new(-4.0, 4.0, 50));
    let mut checked = 0;
    match axes {
        (Ok(m2), Ok(b)) => match grid_scan(m2, b, true, 0.05, workers) {
            Ok(scan) => {
                checked = scan.checked;
                t.check(scan.points.len() == 2500, || {
                    format!("{} grid points", scan.points.len())
                });
                for mm in &scan.mismatches {
                    t.check(false, || format!("mismatch {mm:?}"));
                }
                t.check(scan.checked > 0, || "no point was cross-checked".into());
            }
            Err(e) => t.check(false, || format!("grid: {e}")),
        },
        _ => t.check(false, || "invalid axes".into()),
    }
    match frontiers_at(-2.0) {
        Ok(f) => {
            let curve = f.iter().find(|x| x.0 == FrontierKind::Curve).map(|x| x.1);
            let low = f
                .iter()
                .find(|x| x.0 == FrontierKind::HalflineLow)
                .map(|x| x.1);
            t.check(
                curve.is_some_and(|c| (c - (0.25 + 4.0) / -3.0).abs() <= 1e-12),
                || format!("curve at b=-2: {curve:?}"),
            );
            t.check(low.is_some_and(|c| (c + 1.0).abs() <= 1e-12), || {
                format!("half-line at b=-2: {low:?}")
            });
        }
        Err(e) => t.check(false, || format!("frontiers: {e}")),
    }
    t.report(
        9,
        "50x50 classification grid",
        format!("{checked} points cross-checked numerically"),
    )
}

fn random_signomial(rng: &mut ChaCha8Rng) -> Signomial {
    let n = rng.gen_range(1..=6);
    Signomial::normalize((0..n).map(|_| (rng.gen_range(-10.0..10.0), rng.gen_range(-5.0..5.0))))
}

/// Certified counts respect the sign rule and match a dense scan; every step
/// of the derivative chain removes exactly one sign variation.
pub fn criterion_10(seed: u64) -> CriterionReport {
    let mut rng = rng_for(seed, 10);
    let mut t = Tally::new();
    let draws: Vec<Signomial> = (0..500).map(|_| random_signomial(&mut rng)).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = draws.len().div_ceil(workers);
    let scans: Vec<usize> = std::thread::scope(|scope| {
        let handles: Vec<_> = draws
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|p| {
                            let terms: Vec<(f64, f64)> = p
                                .terms()
                                .iter()
                                .map(|t| (t.coefficient, t.exponent))
                                .collect();
                            oracle::dense_scan_signomial(&terms, 1e-6, 1e6, 1_000_000)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });
    let mut roots_seen = 0;
    for (p, scan) in draws.iter().zip(scans) {
        let bound = p.sign_variations().min(p.len().saturating_sub(1));
        match count_and_isolate(p, 0.0, f64::INFINITY, DEFAULT_TOL) {
            Ok(iso) => {
                let n = iso.count.finite().unwrap_or(usize::MAX);
                t.check(n <= bound, || format!("{p}: {n} roots above bound {bound}"));
            }
            Err(e) => t.check(false, || format!("{p}: {e}")),
        }
        match count_and_isolate(p, 1e-6, 1e6, DEFAULT_TOL) {
            Ok(iso) => {
                let n = iso.count.finite().unwrap_or(usize::MAX);
                roots_seen += n;
                t.check(n == scan, || {
                    format!("{p}: {n} roots in window, scan saw {scan}")
                });
            }
            Err(e) => t.check(false, || format!("{p}: {e}")),
        }
        let chain = p.derivative_chain();
        for w in chain.windows(2) {
            let ok = w[1].sign_variations() + 1 == w[0].sign_variations()
                && w[1].len() + 1 == w[0].len();
            t.check(ok, || format!("chain step {} -> {}", w[0], w[1]));
        }
        t.check(
            chain.last().is_some_and(|q| q.sign_variations() == 0),
            || format!("{p}: chain does not end without variations"),
        );
    }
    t.report(
        10,
        "signomial engine against dense scan",
        format!("{roots_seen} roots in [1e-6, 1e6]"),
    )
}

/// Bound formulas and the quasi-polynomial reduction of the configuration
/// equation.
pub fn criterion_11(seed: u64) -> CriterionReport {
    let mut rng = rng_for(seed, 11);
    let mut t = Tally::new();
    let sb = straight_bound(6);
    t.check(sb.as_ref().is_ok_and(|v| *v == 62), || {
        format!("straight_bound(6) = {sb:?}")
    });
    let kb = khovanskii_bound(1, 2, 4);
    t.check(kb.as_ref().is_ok_and(|v| *v == 32768), || {
        format!("khovanskii_bound(1,2,4) = {kb:?}")
    });
    let mut drawn = 0;
    while drawn < 50 {
        let m = triple(&mut rng, -10.0, 10.0);
        let b: f64 = rng.gen_range(-5.0..5.0);
        if b == 0.0 || degenerate_family(m, b).is_some() {
            continue;
        }
        drawn += 1;
        let cell = count_cell(m, b, Cell::Two, DEFAULT_TOL);
        let line =
            euler_restriction(m, b).and_then(|(c, f)| count_on_line(&f, c, DEFAULT_TOL, None));
        match (cell, line) {
            (Ok(c), Ok(l)) => t.check(c.count == Count::Finite(l.count), || {
                format!("{m:?}, b={b}: cell {} vs line {}", c.count, l.count)
            }),
            (c, l) => t.check(false, || format!("{m:?}, b={b}: {c:?} / {l:?}")),
        }
    }
    t.report(
        11,
        "bound formulas and line reduction",
        "50 draws compared".into(),
    )
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    vec![
        criterion_1(seed),
        criterion_2(seed),
        criterion_3(seed),
        criterion_4(seed),
        criterion_5(seed),
        criterion_6(seed),
        criterion_7(seed),
        criterion_8(seed),
        criterion_9(seed),
        criterion_10(seed),
        criterion_11(seed),
    ]
}

/// Runs a single criterion by number.
pub fn run_one(id: u8, seed: u64) -> Option<CriterionReport> {
    let f: fn(u64) -> CriterionReport = match id {
        1 => criterion_1,
        2 => criterion_2,
        3 => criterion_3,
        4 => criterion_4,
        5 => criterion_5,
        6 => criterion_6,
        7 => criterion_7,
        8 => criterion_8,
        9 => criterion_9,
        10 => criterion_10,
        11 => criterion_11,
        _ => return None,
    };
    Some(f(seed))
}
