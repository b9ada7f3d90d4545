use serde::{Deserialize, Serialize};

use super::asymptotics::{endpoint_sign_g, endpoint_sign_g_prime};
use super::formulas::{g_prime_probe, g_probe, h_signomial};
use super::{Cell, CellCount, ConfigurationSolution, Count, DegenerateFamily, MassTriple};
use crate::bracket::{bisect, checked, clamp_exp, finite_bracket, LogEnd, Probe};
use crate::error::{Error, Result};
use crate::sign::{Endpoint, Sign};
use crate::signomial::{isolate_log, DEGENERACY_THRESHOLD};

/// Exact membership in the families where `g ≡ 0`.
pub fn degenerate_family(m: MassTriple, b: f64) -> Option<DegenerateFamily> {
    let MassTriple { m1, m2, m3 } = m;
    if m1 == 0.0 && m2 == 0.0 && m3 == 0.0 {
        Some(DegenerateFamily::I)
    } else if b == 0.0 && m1 == -m2 && m1 == m3 {
        Some(DegenerateFamily::Ii)
    } else if b == 1.0 {
        Some(DegenerateFamily::Iii)
    } else if b == 2.0 && m2 == 0.0 && m1 == m3 {
        Some(DegenerateFamily::Iv)
    } else if b == 3.0 && m1 == m2 && m2 == m3 {
        Some(DegenerateFamily::V)
    } else {
        None
    }
}

/// Masses in (left, middle, right) order for the cell, so that the cell's
/// configurations are the roots `s > 0` of `g` built from this triple.
pub fn cell_mass_view(m: MassTriple, cell: Cell) -> MassTriple {
    let [i, j, k] = cell.layout();
    let a = m.as_array();
    MassTriple::new(a[i - 1], a[j - 1], a[k - 1])
}

/// Count and solutions in a single cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSolutions {
    pub count: Count,
    pub solutions: Vec<ConfigurationSolution>,
}

/// Counts in all cells with every isolated configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    #[serde(flatten)]
    pub counts: CellCount,
    pub solutions: Vec<ConfigurationSolution>,
    pub degenerate_family: Option<DegenerateFamily>,
}

fn check_inputs(m: MassTriple, b: f64, tol: f64) -> Result<()> {
    if !(m.m1.is_finite() && m.m2.is_finite() && m.m3.is_finite()) {
        return Err(Error::Domain(format!("masses must be finite, got {m:?}")));
    }
    if !b.is_finite() {
        return Err(Error::Domain(format!("exponent must be finite, got {b}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

/// Certified configurations of one cell.
///
/// `tol` bounds the relative width of the bracket around each `s`.
/// Roots at which `g′` vanishes to within the degeneracy threshold are
/// flagged and counted once.
pub fn count_cell(m: MassTriple, b: f64, cell: Cell, tol: f64) -> Result<CellSolutions> {
    check_inputs(m, b, tol)?;
    let v = cell_mass_view(m, cell);
    if degenerate_family(v, b).is_some() {
        return Ok(CellSolutions {
            count: Count::Infinite,
            solutions: Vec::new(),
        });
    }
    let roots = if b == 0.0 {
        affine_root(v).into_iter().collect()
    } else {
        positive_roots(v, b, tol)?
    };
    Ok(CellSolutions {
        count: Count::Finite(roots.len()),
        solutions: roots
            .into_iter()
            .map(|(s, degenerate)| ConfigurationSolution::new(cell, s, degenerate))
            .collect(),
    })
}

/// Counts in the three cells.
pub fn count_all(m: MassTriple, b: f64, tol: f64) -> Result<CellCount> {
    Ok(solve(m, b, tol)?.counts)
}

/// Counts in the three cells together with the isolated configurations.
pub fn solve(m: MassTriple, b: f64, tol: f64) -> Result<Census> {
    let mut counts = [Count::Finite(0); 3];
    let mut solutions = Vec::new();
    for (slot, cell) in Cell::ALL.into_iter().enumerate() {
        let r = count_cell(m, b, cell, tol)?;
        counts[slot] = r.count;
        solutions.extend(r.solutions);
    }
    Ok(Census {
        counts: CellCount::new(counts[0], counts[1], counts[2]),
        solutions,
        degenerate_family: degenerate_family(m, b),
    })
}

/// `m₁x₁ + m₂x₂ + m₃x₃` at the solution; vanishes for zero total mass.
pub fn celli_identity_residual(m: MassTriple, sol: &ConfigurationSolution) -> Result<f64> {
    if m.m1 + m.m2 + m.m3 != 0.0 {
        return Err(Error::Precondition(format!(
            "the identity needs zero total mass, got {}",
            m.m1 + m.m2 + m.m3
        )));
    }
    let x = sol.positions;
    Ok(m.m1 * x[0] + m.m2 * x[1] + m.m3 * x[2])
}

/// At `b = 0`, `g(s) = m₂ + m₃ − (m₁ + m₂)s`.
fn affine_root(v: MassTriple) -> Option<(f64, bool)> {
    let c0 = v.m2 + v.m3;
    let c1 = v.m1 + v.m2;
    (c0 * c1 > 0.0).then(|| (c0 / c1, false))
}

/// `ln s` for `s = y/(1−y)`, from `ln y`.
fn logit(ln_y: f64) -> f64 {
    ln_y - (-ln_y.exp()).ln_1p()
}

/// Roots strictly between consecutive nodes of opposite sign, by bracketing
/// and bisection in `u = ln s`.
fn roots_between<F>(f: &F, nodes: &[(LogEnd, Sign)], tol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<Probe>,
{
    let mut out = Vec::new();
    for w in nodes.windows(2) {
        let ((a, sa), (c, sc)) = (w[0], w[1]);
        if !sa.opposes(sc) {
            continue;
        }
        let (lo, hi) = finite_bracket(f, a, c, sa, sc)?;
        out.push(bisect(f, lo, hi, sa, sc, tol)?.root);
    }
    Ok(out)
}

/// Roots `s > 0` of `g` with their degeneracy flags, for `b ∉ {0, 1}` outside
/// the degenerate families.
fn positive_roots(v: MassTriple, b: f64, tol: f64) -> Result<Vec<(f64, bool)>> {
    let g = |u: f64| -> Result<Probe> { Ok(g_probe(v, b, u).probe()) };
    let gp = |u: f64| -> Result<Probe> { Ok(g_prime_probe(v, b, u).probe()) };

    // breakpoints of g'' (g' is monotone between them)
    let h = h_signomial(v, b)?;
    let mut breaks = Vec::new();
    if !h.is_empty() {
        for (ln_y, _) in isolate_log(&h, LogEnd::NegInf, LogEnd::At(0.0), tol)? {
            breaks.push(logit(ln_y));
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    // critical points of g
    let dz = endpoint_sign_g_prime(v, b, Endpoint::ZeroPlus);
    let di = endpoint_sign_g_prime(v, b, Endpoint::Infinity);
    if dz.is_zero() && di.is_zero() && breaks.is_empty() {
        return Ok(Vec::new());
    }
    let mut nodes = vec![(LogEnd::NegInf, dz)];
    let mut critical = Vec::new();
    for &u in &breaks {
        let s = checked(&gp, u)?;
        if s.is_zero() {
            critical.push(u);
        }
        nodes.push((LogEnd::At(u), s));
    }
    nodes.push((LogEnd::PosInf, di));
    critical.extend(roots_between(&gp, &nodes, tol)?);
    critical.sort_by(f64::total_cmp);

    // roots of g: degenerate ones at critical points, simple ones between
    let mut roots: Vec<(f64, bool)> = Vec::new();
    let mut nodes = vec![(LogEnd::NegInf, endpoint_sign_g(v, b, Endpoint::ZeroPlus))];
    let mut previous_degenerate = false;
    for &u in &critical {
        let sign = checked(&g, u)?;
        let sample = g_probe(v, b, u);
        if sample.value.abs() <= DEGENERACY_THRESHOLD * sample.magnitude {
            if !previous_degenerate {
                roots.push((u, true));
            }
            previous_degenerate = true;
            nodes.push((LogEnd::At(u), Sign::Zero));
        } else {
            previous_degenerate = false;
            nodes.push((LogEnd::At(u), sign));
        }
    }
    nodes.push((LogEnd::PosInf, endpoint_sign_g(v, b, Endpoint::Infinity)));
    for u in roots_between(&g, &nodes, tol)? {
        let d = g_prime_probe(v, b, u);
        roots.push((u, d.value.abs() <= DEGENERACY_THRESHOLD * d.magnitude));
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(roots.into_iter().map(|(u, d)| (clamp_exp(u), d)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{eval_g, eval_g_line};
    use crate::signomial::DEFAULT_TOL;

    fn mt(a: f64, b: f64, c: f64) -> MassTriple {
        MassTriple::new(a, b, c)
    }

    fn cell2(m: MassTriple, b: f64) -> CellSolutions {
        count_cell(m, b, Cell::Two, DEFAULT_TOL).unwrap()
    }

    /// Sign changes of `f` on a log grid, skipping exact zeros.
    fn scan_changes(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> usize {
        let mut changes = 0;
        let mut last = 0.0f64;
        for i in 0..=n {
            let x = lo * (hi / lo).powf(i as f64 / n as f64);
            let y = f(x);
            if y != 0.0 {
                if last != 0.0 && (y > 0.0) != (last > 0.0) {
                    changes += 1;
                }
                last = y;
            }
        }
        changes
    }

    #[test]
    fn families() {
        assert_eq!(
            degenerate_family(mt(0.0, 0.0, 0.0), -2.0),
            Some(DegenerateFamily::I)
        );
        assert_eq!(
            degenerate_family(mt(1.0, -1.0, 1.0), 0.0),
            Some(DegenerateFamily::Ii)
        );
        assert_eq!(
            degenerate_family(mt(3.0, 1.0, 1.0), 1.0),
            Some(DegenerateFamily::Iii)
        );
        assert_eq!(
            degenerate_family(mt(2.0, 0.0, 2.0), 2.0),
            Some(DegenerateFamily::Iv)
        );
        assert_eq!(
            degenerate_family(mt(1.0, 1.0, 1.0), 3.0),
            Some(DegenerateFamily::V)
        );
        assert_eq!(degenerate_family(mt(1.0, 1.0, 1.0), -2.0), None);
        for (m, b) in [
            (mt(0.0, 0.0, 0.0), 0.4),
            (mt(1.0, -1.0, 1.0), 0.0),
            (mt(-2.0, 1.5, 0.3), 1.0),
            (mt(1.5, 0.0, 1.5), 2.0),
            (mt(-0.7, -0.7, -0.7), 3.0),
        ] {
            for s in [0.01, 0.9, 3.0, 500.0] {
                let g = eval_g(m, b, s).unwrap();
                assert!(g.abs() < 1e-9 * (1.0 + s).powi(4), "{m:?} {b} {s}: {g}");
            }
        }
    }

    #[test]
    fn mass_views() {
        let m = mt(1.0, 2.0, 3.0);
        assert_eq!(cell_mass_view(m, Cell::Two), mt(1.0, 2.0, 3.0));
        assert_eq!(cell_mass_view(m, Cell::One), mt(2.0, 1.0, 3.0));
        assert_eq!(cell_mass_view(m, Cell::Three), mt(1.0, 3.0, 2.0));
    }

    #[test]
    fn unit_masses_at_minus_two() {
        let r = cell2(mt(1.0, 1.0, 1.0), -2.0);
        assert_eq!(r.count, Count::Finite(1));
        assert!((r.solutions[0].s - 1.0).abs() < 1e-10);
        assert!(!r.solutions[0].degenerate);
    }

    #[test]
    fn three_roots_in_second_cell() {
        let m = mt(1.0, -1.2, 1.0);
        let r = cell2(m, -2.0);
        assert_eq!(r.count, Count::Finite(3));
        let s: Vec<f64> = r.solutions.iter().map(|x| x.s).collect();
        assert!(s[0] < 1.0 && (s[1] - 1.0).abs() < 1e-10 && s[2] > 1.0);
        assert!(
            (s[0] * s[2] - 1.0).abs() < 1e-9,
            "reciprocal pairing: {s:?}"
        );
        assert!(r.solutions.iter().all(|x| !x.degenerate));
        let oracle = scan_changes(|x| eval_g(m, -2.0, x).unwrap(), 1e-4, 1e4, 200_000);
        assert_eq!(oracle, 3);
    }

    #[test]
    fn infinite_at_affine_family() {
        assert_eq!(cell2(mt(1.0, -1.0, 1.0), 0.0).count, Count::Infinite);
    }

    #[test]
    fn affine_case() {
        let r = cell2(mt(1.0, 1.0, 3.0), 0.0);
        assert_eq!(r.count, Count::Finite(1));
        assert_eq!(r.solutions[0].s, 2.0);
        assert_eq!(cell2(mt(1.0, -2.0, 1.0), 0.0).count, Count::Finite(1));
        assert_eq!(cell2(mt(1.0, -2.0, 3.0), 0.0).count, Count::Finite(0));
    }

    #[test]
    fn count_all_examples() {
        let tol = DEFAULT_TOL;
        let c = count_all(mt(1.0, 1.0, 1.0), -2.0, tol).unwrap();
        assert_eq!(
            c,
            CellCount::new(Count::Finite(1), Count::Finite(1), Count::Finite(1))
        );
        let c = count_all(mt(0.0, -1.0, 1.0), -2.0, tol).unwrap();
        assert_eq!(c.total, Count::Finite(0));
        let c = count_all(mt(1.0, -0.9, 1.0), 0.5, tol).unwrap();
        assert_eq!(
            c,
            CellCount::new(Count::Finite(1), Count::Finite(3), Count::Finite(1))
        );
        let census = solve(mt(1.0, 1.0, 1.0), 1.0, tol).unwrap();
        assert_eq!(census.degenerate_family, Some(DegenerateFamily::Iii));
        assert_eq!(census.counts.total, Count::Infinite);
    }

    #[test]
    fn five_configurations_confirmed_by_scan() {
        let m = mt(1.0, -0.9, 1.0);
        let line = |s: f64| eval_g_line(m, 0.5, s).unwrap();
        let pos = scan_changes(line, 1e-5, 1e5, 200_000);
        let cell1 = scan_changes(|t| line(-1.0 - t), 1e-5, 1e5, 200_000);
        let cell3 = scan_changes(|t| line(-t / (1.0 + t)), 1e-5, 1e5, 200_000);
        assert_eq!((cell1, pos, cell3), (1, 3, 1));
    }

    #[test]
    fn views_match_the_whole_line() {
        // Cell 1 is s < -1 and Cell 3 is -1 < s < 0 for the unpermuted g
        let cases = [
            (mt(1.0, -0.9, 1.0), 0.5),
            (mt(2.0, -3.0, 0.5), -1.0),
            (mt(-1.0, 2.5, 1.5), 1.7),
            (mt(0.4, 1.0, -2.0), 2.5),
            (mt(1.0, -1.2, 1.0), -2.0),
        ];
        for (m, b) in cases {
            let line = |s: f64| eval_g_line(m, b, s).unwrap();
            let c = count_all(m, b, DEFAULT_TOL).unwrap();
            let e1 = scan_changes(|t| line(-1.0 - t), 1e-5, 1e5, 100_000);
            let e3 = scan_changes(|t| line(-t / (1.0 + t)), 1e-5, 1e5, 100_000);
            assert_eq!(c.e1, Count::Finite(e1), "{m:?} {b}");
            assert_eq!(c.e3, Count::Finite(e3), "{m:?} {b}");
        }
    }

    #[test]
    fn zero_sum_identity() {
        let m = mt(1.0, 2.0, -3.0);
        let census = solve(m, -2.0, DEFAULT_TOL).unwrap();
        assert_eq!(census.counts.total, Count::Finite(1));
        let r = celli_identity_residual(m, &census.solutions[0]).unwrap();
        assert!(r.abs() < 1e-9, "{r}");

        let m = mt(2.0, -1.0, -1.0);
        let census = solve(m, -1.0, DEFAULT_TOL).unwrap();
        assert_eq!(census.counts.total, Count::Finite(1));
        let r = celli_identity_residual(m, &census.solutions[0]).unwrap();
        assert!(r.abs() < 1e-9, "{r}");

        assert_eq!(
            count_all(mt(1.0, -1.0, 0.0), -2.0, DEFAULT_TOL)
                .unwrap()
                .total,
            Count::Finite(0)
        );
        assert!(celli_identity_residual(mt(1.0, 1.0, 1.0), &census.solutions[0]).is_err());
    }

    #[test]
    fn double_root_on_frontier_is_flagged() {
        // on the curve g'(1) = 0 the root s = 1 is triple and counted once
        let b = -2.0;
        let m2 = (2f64.powf(b) - 2.0 * b) / (b - 1.0);
        let r = cell2(mt(1.0, m2, 1.0), b);
        assert_eq!(r.count, Count::Finite(1));
        assert!(r.solutions[0].degenerate);
    }

    #[test]
    fn reflection_keeps_a_root_near_the_float_limit() {
        // the reflected root sits near s = 1e163, where (1+s)s^b overflows
        let m = mt(5.588232871468088, -5.966400570487285, 5.990984987505467);
        let b = 1.0029493208030984;
        let a = cell2(m, b);
        let r = cell2(m.reflected(), b);
        assert_eq!(a.count, Count::Finite(2));
        assert_eq!(r.count, a.count);
        assert!(r.solutions[1].s > 1e160 && r.solutions[1].s < 1e166);
    }

    #[test]
    fn breakpoint_next_to_the_structural_zero_of_h() {
        // H vanishes at y = 1; its sign change at 1 − y ≈ 1e-4 must survive
        let m = mt(-5.000609991702746, -6.780831026806373, -5.0099423294116034);
        let b = 3.351587347775325;
        let r = cell2(m, b);
        assert_eq!(r.count, Count::Finite(3));
        assert_eq!(cell2(m.reflected(), b).count, Count::Finite(3));
        assert!((r.solutions[2].s / 24048.9738853 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(count_cell(mt(1.0, 1.0, 1.0), f64::NAN, Cell::Two, 1e-12).is_err());
        assert!(count_cell(mt(1.0, 1.0, 1.0), -2.0, Cell::Two, 0.0).is_err());
        assert!(count_cell(mt(f64::INFINITY, 1.0, 1.0), -2.0, Cell::Two, 1e-12).is_err());
    }
}
