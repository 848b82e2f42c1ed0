//! Randomized oracle and property checks runnable from the command line.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deviation::{ModDevSpec, RefKind};
use crate::implication::ImplicationKind;
use crate::interval::{cmp_alpha_beta, OrderParams, UnitInterval};
use crate::iv_deviation::{IvDeviation, SignDeviation};
use crate::owa::{iv_owa, quantifier_weights, QuantifierParams};
use crate::wd_mean::{
    bisection_oracle, d_mean_generic, wd_mean, wd_mean_detailed, WdMeanConfig, DEFAULT_GRID_STEP,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn random_config(rng: &mut impl Rng) -> WdMeanConfig {
    let case = rng.random_range(1..=5);
    let spec = ModDevSpec::case(case, rng.random_range(0.1..=100.0), rng.random_range(0.1..=100.0))
        .expect("positive parameters");
    let alpha = rng.random_range(0.05..0.95);
    let beta = if rng.random_bool(0.5) { 0.0 } else { 1.0 };
    WdMeanConfig::new(IvDeviation::new(spec, OrderParams::new(alpha, beta).expect("alpha != beta")))
}

fn equal_width_tuple(rng: &mut impl Rng, n: usize) -> Vec<UnitInterval> {
    let w = rng.random_range(0.0..0.5);
    (0..n)
        .map(|_| {
            let lo = rng.random_range(0.0..=1.0 - w);
            UnitInterval::new(lo, lo + w).expect("inside [0, 1]")
        })
        .collect()
}

pub fn oracle_equivalence(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut errors = 0;
    for _ in 0..trials {
        let cfg = random_config(&mut rng);
        let n = rng.random_range(2..=7);
        let xs = equal_width_tuple(&mut rng, n);
        let alpha = cfg.order().alpha();
        match (wd_mean(&xs, &cfg), bisection_oracle(&xs, &cfg, 1e-12)) {
            (Ok(a), Ok(b)) => worst = worst.max((a.k_a(alpha) - b.k_a(alpha)).abs()),
            _ => errors += 1,
        }
    }
    CheckResult {
        name: "oracle equivalence",
        passed: errors == 0 && worst <= 1e-8,
        detail: format!("{trials} tuples, max |dK| = {worst:.3e}, {errors} errors"),
    }
}

pub fn worked_values() -> CheckResult {
    let order = OrderParams::new(0.5, 1.0).expect("valid order");
    let points = |kas: &[f64]| -> Vec<UnitInterval> {
        kas.iter().map(|&k| UnitInterval::point(k).expect("in range")).collect()
    };
    let case1 = WdMeanConfig::new(IvDeviation::new(ModDevSpec::md1(1.0, 3.0).expect("valid"), order));
    let case2 = WdMeanConfig::new(IvDeviation::new(
        ModDevSpec::new(1.0, 1.0, RefKind::AbsSqDiff, RefKind::AbsSqDiff).expect("valid"),
        order,
    ));
    let (sp, y1) = wd_mean_detailed(&points(&[0.1, 0.5, 0.9]), &case1).expect("solvable");
    let y2 = wd_mean(&points(&[0.2, 0.4]), &case2).expect("solvable");
    let e1 = (y1.k_a(0.5) - 0.66).abs();
    let e2 = (y2.k_a(0.5) - 0.1f64.sqrt()).abs();
    CheckResult {
        name: "worked values",
        passed: e1 <= 1e-10 && e2 <= 1e-10 && sp.k == 2,
        detail: format!("|0.66 - K| = {e1:.1e}, k = {}, |sqrt(0.1) - K| = {e2:.1e}", sp.k),
    }
}

pub fn aggregation_properties(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for t in 0..trials {
        let cfg = random_config(&mut rng);
        let ord = cfg.order();
        let alpha = ord.alpha();
        let n = rng.random_range(2..=7);
        let xs = equal_width_tuple(&mut rng, n);

        let x = xs[0];
        if wd_mean(&vec![x; n], &cfg).ok() != Some(x) {
            failures.push(format!("idempotency #{t}"));
        }
        let y = wd_mean(&xs, &cfg).expect("solvable");
        let mut rev = xs.clone();
        rev.reverse();
        let yr = wd_mean(&rev, &cfg).expect("solvable");
        if y.lo().to_bits() != yr.lo().to_bits() || y.hi().to_bits() != yr.hi().to_bits() {
            failures.push(format!("symmetry #{t}"));
        }
        if (y.width() - xs[0].width()).abs() > 1e-12 {
            failures.push(format!("width #{t}"));
        }
        let (sp, _) = wd_mean_detailed(&xs, &cfg).expect("solvable");
        let k = y.k_a(alpha);
        let inside = match sp.bracket() {
            Some((lo, hi)) => k >= lo && k < hi,
            None => k == sp.sorted_kas[n - 1],
        };
        if !inside {
            failures.push(format!("bracket #{t}"));
        }
        // raising one input (same width) must not lower the output
        let i = rng.random_range(0..n);
        let room = 1.0 - xs[i].hi();
        let up = rng.random_range(0.0..=room);
        let mut raised = xs.clone();
        raised[i] = UnitInterval::new(xs[i].lo() + up, (xs[i].hi() + up).min(1.0)).expect("in range");
        if raised[i].width() == xs[i].width() {
            let z = wd_mean(&raised, &cfg).expect("solvable");
            if cmp_alpha_beta(&z, &y, ord) == Ordering::Less {
                failures.push(format!("monotonicity #{t}"));
            }
        }
    }
    CheckResult {
        name: "aggregation properties",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{trials} tuples")
        } else {
            format!("{} violations, first: {}", failures.len(), failures[0])
        },
    }
}

pub fn mean_reduction(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let m = rng.random_range(0.1..=100.0);
        let alpha = rng.random_range(0.05..0.95);
        let cfg = WdMeanConfig::new(IvDeviation::new(
            ModDevSpec::md1(m, m).expect("valid"),
            OrderParams::new(alpha, 1.0).expect("valid"),
        ));
        let n = rng.random_range(2..=7);
        let xs = equal_width_tuple(&mut rng, n);
        let mean = xs.iter().map(|x| x.k_a(alpha)).sum::<f64>() / n as f64;
        let y = wd_mean(&xs, &cfg).expect("solvable");
        worst = worst.max((y.k_a(alpha) - mean).abs());
    }
    CheckResult {
        name: "mean reduction",
        passed: worst <= 1e-12,
        detail: format!("{trials} tuples, max |dK| = {worst:.3e}"),
    }
}

pub fn owa_checks(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exact = quantifier_weights(QuantifierParams::OWA2, 5).as_slice() == [0.0, 0.0, 0.2, 0.4, 0.4];
    let mut worst = 0.0f64;
    let mut idempotent = true;
    for _ in 0..trials {
        let a = rng.random_range(0.0..0.99);
        let b = rng.random_range(a + 0.001..=1.0);
        let n = rng.random_range(1..=30);
        let q = QuantifierParams::new(a, b).expect("a < b");
        let w = quantifier_weights(q, n);
        worst = worst.max((w.as_slice().iter().sum::<f64>() - 1.0).abs());
        let x = equal_width_tuple(&mut rng, 1)[0];
        idempotent &= iv_owa(&vec![x; n], &w, OrderParams::default()).ok() == Some(x);
    }
    CheckResult {
        name: "owa weights",
        passed: exact && worst <= 1e-12 && idempotent,
        detail: format!("exact example {exact}, max |sum - 1| = {worst:.1e}, idempotent {idempotent}"),
    }
}

pub fn implication_axioms() -> CheckResult {
    let g: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let mut violations = 0usize;
    for kind in ImplicationKind::ALL {
        let i = |x: f64, y: f64| kind.apply(x, y);
        for &x in &g {
            violations += usize::from(i(0.0, x) != 1.0);
            violations += usize::from(i(x, 1.0) != 1.0);
            for (j, &y) in g.iter().enumerate() {
                // adjacent steps suffice for monotonicity on the grid
                if j + 1 < g.len() {
                    violations += usize::from(i(x, g[j + 1]) < i(x, y));
                    violations += usize::from(i(y, x) < i(g[j + 1], x));
                }
            }
        }
        violations += usize::from(i(1.0, 0.0) != 0.0);
    }
    CheckResult {
        name: "implication axioms",
        passed: violations == 0,
        detail: format!("101 x 101 grid, {violations} violations"),
    }
}

pub fn median_recovery(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ord = OrderParams::default();
    let sign = SignDeviation {
        magnitude: UnitInterval::ONE,
        order: ord,
    };
    let mut worst = 0.0f64;
    let mut errors = 0;
    for _ in 0..trials {
        let mut xs = equal_width_tuple(&mut rng, 3);
        let y = match d_mean_generic(&xs, &sign, ord, DEFAULT_GRID_STEP) {
            Ok(y) => y,
            Err(_) => {
                errors += 1;
                continue;
            }
        };
        xs.sort_by(|a, b| cmp_alpha_beta(a, b, ord));
        worst = worst.max((y.k_a(ord.alpha()) - xs[1].k_a(ord.alpha())).abs());
    }
    CheckResult {
        name: "median recovery",
        passed: errors == 0 && worst <= DEFAULT_GRID_STEP,
        detail: format!("{trials} triples, max |dK| = {worst:.3e}"),
    }
}

/// Every check, `trials` random cases each.
pub fn run_all(trials: usize, seed: u64) -> Vec<CheckResult> {
    vec![
        oracle_equivalence(trials, seed),
        worked_values(),
        aggregation_properties(trials, seed.wrapping_add(1)),
        mean_reduction(trials, seed.wrapping_add(2)),
        owa_checks(trials.min(100), seed.wrapping_add(3)),
        implication_axioms(),
        median_recovery(trials.min(100), seed.wrapping_add(4)),
    ]
}
