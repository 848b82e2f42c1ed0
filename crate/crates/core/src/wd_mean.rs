//! The w-preserving interval-valued wD-mean.
//!
//! For inputs `X_1..X_n` the output `Y` has width `min_i w(X_i)` and a
//! `K_alpha` value solving
//!
//! ```text
//! F(y) = sum_i w_i D(K_alpha(X_i), y) = 0
//! ```
//!
//! `F` is strictly increasing, so the root is found by locating the switch
//! point `k` (the last sorted input at which `F <= 0`) and solving the
//! equation restricted to `[ka_k, ka_{k+1})`, where every term sits on a
//! fixed branch of `D` and the equation is at most quadratic.
//!
//! [`bisection_oracle`] solves the same equation by bracketing and is kept
//! independent of the closed-form path so the two can be cross-checked.

use std::cmp::Ordering;

use crate::deviation::{ModDevSpec, RefKind, ScalarDeviation};
use crate::error::{Error, Result};
use crate::interval::{cmp_alpha_beta, from_ka_width, sorted_indices, OrderParams, UnitInterval};
use crate::iv_deviation::{IntervalDeviation, IvModDevSpec};

pub const DEFAULT_BISECTION_TOL: f64 = 1e-10;
pub const BISECTION_MAX_ITER: usize = 200;
pub const DEFAULT_GRID_STEP: f64 = 1e-3;

/// Leading coefficients below this (relative to the total deviation scale)
/// turn the restricted quadratic into a linear equation.
const LINEAR_LEADING_TOL: f64 = 1e-12;

/// Roots found this far outside the bracket are treated as solver failures.
const BRACKET_SLACK: f64 = 1e-9;

/// Width aggregation `B`; only the minimum is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WidthAggregation {
    #[default]
    Min,
}

/// Inner aggregation `A` of the sup/inf candidates; componentwise mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BracketAggregation {
    #[default]
    Mean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WdMeanConfig {
    pub iv_spec: IvModDevSpec,
    pub width_agg: WidthAggregation,
    pub inner_agg: BracketAggregation,
    pub weights: Option<Vec<f64>>,
}

impl WdMeanConfig {
    pub fn new(iv_spec: IvModDevSpec) -> Self {
        Self {
            iv_spec,
            width_agg: WidthAggregation::Min,
            inner_agg: BracketAggregation::Mean,
            weights: None,
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    #[inline]
    pub fn scalar(&self) -> &ModDevSpec {
        &self.iv_spec.scalar
    }

    #[inline]
    pub fn order(&self) -> OrderParams {
        self.iv_spec.order
    }
}

/// The pivot of the sorted inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchPoint {
    /// One-based: inputs `1..=k` lie at or below the root.
    pub k: usize,
    pub sorted_kas: Vec<f64>,
    /// `permutation[i]` is the original position of the `i`-th sorted input.
    pub permutation: Vec<usize>,
}

impl SwitchPoint {
    /// The half-open bracket `[ka_k, ka_{k+1})`, or `None` when `k = n`.
    pub fn bracket(&self) -> Option<(f64, f64)> {
        (self.k < self.sorted_kas.len())
            .then(|| (self.sorted_kas[self.k - 1], self.sorted_kas[self.k]))
    }
}

fn validate_weights(weights: &[f64], n: usize) -> Result<()> {
    if weights.len() != n {
        return Err(Error::WeightLength {
            expected: n,
            got: weights.len(),
        });
    }
    if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) || !weights.iter().any(|w| *w > 0.0)
    {
        return Err(Error::InvalidWeights);
    }
    Ok(())
}

#[inline]
fn weight_at(weights: Option<&[f64]>, i: usize) -> f64 {
    weights.map_or(1.0, |w| w[i])
}

/// `F(y) = sum_i w_i D(kas_i, y)`.
pub fn deviation_sum<S: ScalarDeviation>(
    spec: &S,
    kas: &[f64],
    weights: Option<&[f64]>,
    y: f64,
) -> f64 {
    kas.iter()
        .enumerate()
        .map(|(i, &x)| weight_at(weights, i) * spec.deviation(x, y))
        .sum()
}

/// Greatest `j` with `sum_i w_i D(kas_i, kas_j) <= 0`; `kas` must be sorted.
pub fn switch_point(
    kas: &[f64],
    spec: &ModDevSpec,
    weights: Option<&[f64]>,
) -> Result<SwitchPoint> {
    if kas.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(w) = weights {
        validate_weights(w, kas.len())?;
    }
    debug_assert!(kas.windows(2).all(|p| p[0] <= p[1]), "kas must be sorted");
    let k = (0..kas.len())
        .rev()
        .find(|&j| deviation_sum(spec, kas, weights, kas[j]) <= 0.0)
        // j = 1 always qualifies: every term is D(x_i, x_1) <= 0
        .map_or(1, |j| j + 1);
    Ok(SwitchPoint {
        k,
        sorted_kas: kas.to_vec(),
        permutation: (0..kas.len()).collect(),
    })
}

/// Coefficients of `a t^2 + b t + c` in the shifted variable `t = y - shift`.
#[derive(Debug, Default, Clone, Copy)]
struct ShiftedQuadratic {
    a: f64,
    b: f64,
    c: f64,
}

impl ShiftedQuadratic {
    /// Adds `factor * sign * dissimilarity(x, y)` for a term on a fixed branch.
    ///
    /// On the lower branch (`x <= y`) the term is `+f * (1 - R1)`; on the
    /// upper branch (`x > y`) it is `-f * (1 - R2)`.
    fn add_term(&mut self, kind: RefKind, factor: f64, lower_branch: bool, x: f64, shift: f64) {
        let d = x - shift;
        // y - x = t - d,  y^2 - x^2 = t^2 + 2 shift t - d (d + 2 shift)
        match (kind, lower_branch) {
            (RefKind::LinearAbs, _) => {
                // +f (y - x) below, -f (x - y) above: both are f (t - d)
                self.b += factor;
                self.c -= factor * d;
            }
            (RefKind::SqDiff, true) => {
                self.a += factor;
                self.b -= 2.0 * factor * d;
                self.c += factor * d * d;
            }
            (RefKind::SqDiff, false) => {
                self.a -= factor;
                self.b += 2.0 * factor * d;
                self.c -= factor * d * d;
            }
            (RefKind::AbsSqDiff, _) => {
                // +f (y^2 - x^2) below, -f (x^2 - y^2) above
                self.a += factor;
                self.b += 2.0 * factor * shift;
                self.c -= factor * d * (d + 2.0 * shift);
            }
        }
    }

    fn roots(&self, scale: f64) -> Vec<f64> {
        let ShiftedQuadratic { a, b, c } = *self;
        if a.abs() <= LINEAR_LEADING_TOL * scale {
            return if b != 0.0 { vec![-c / b] } else { vec![] };
        }
        let mut disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            if disc >= -1e-12 * (b * b + (4.0 * a * c).abs()) {
                disc = 0.0;
            } else {
                return vec![];
            }
        }
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let mut out = vec![q / a];
        if q != 0.0 {
            out.push(c / q);
        }
        out
    }
}

/// Derivative of `F` with respect to `y` inside the bracket.
fn deviation_sum_slope(
    spec: &ModDevSpec,
    kas: &[f64],
    weights: Option<&[f64]>,
    k: usize,
    y: f64,
) -> f64 {
    kas.iter()
        .enumerate()
        .map(|(i, &x)| {
            let w = weight_at(weights, i);
            let (m, kind) = if i < k {
                (spec.m_p(), spec.r1())
            } else {
                (spec.m_n(), spec.r2())
            };
            let dd = match kind {
                RefKind::LinearAbs => 1.0,
                RefKind::SqDiff => 2.0 * (y - x).abs(),
                RefKind::AbsSqDiff => 2.0 * y,
            };
            w * m * dd
        })
        .sum()
}

/// Returns the root of the deviation sum inside the switch-point bracket.
///
/// Case `R1 = R2 = 1 - |y - x|` uses the weighted linear closed form, case
/// `R1 = R2 = 1 - |y^2 - x^2|` the square-root closed form; every other REF
/// pair gives a quadratic whose bracketed root is selected.
pub fn solve_ka(sp: &SwitchPoint, spec: &ModDevSpec, weights: Option<&[f64]>) -> Result<f64> {
    let kas = &sp.sorted_kas;
    let n = kas.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if let Some(w) = weights {
        validate_weights(w, n)?;
    }
    let k = sp.k;
    let Some((lo, hi)) = sp.bracket() else {
        return Ok(kas[n - 1]);
    };
    if lo == hi {
        return Ok(lo);
    }

    let (mut wp, mut wn) = (0.0, 0.0);
    for i in 0..n {
        if i < k {
            wp += weight_at(weights, i);
        } else {
            wn += weight_at(weights, i);
        }
    }
    let (mp, mn) = (spec.m_p(), spec.m_n());

    let root = match (spec.r1(), spec.r2()) {
        (RefKind::LinearAbs, RefKind::LinearAbs) => {
            let (mut sp_, mut sn) = (0.0, 0.0);
            for (i, &x) in kas.iter().enumerate() {
                if i < k {
                    sp_ += weight_at(weights, i) * x;
                } else {
                    sn += weight_at(weights, i) * x;
                }
            }
            (mp * sp_ + mn * sn) / (mp * wp + mn * wn)
        }
        (RefKind::AbsSqDiff, RefKind::AbsSqDiff) => {
            let (mut sp_, mut sn) = (0.0, 0.0);
            for (i, &x) in kas.iter().enumerate() {
                if i < k {
                    sp_ += weight_at(weights, i) * x * x;
                } else {
                    sn += weight_at(weights, i) * x * x;
                }
            }
            ((mp * sp_ + mn * sn) / (mp * wp + mn * wn)).sqrt()
        }
        (r1, r2) => {
            let mut poly = ShiftedQuadratic::default();
            for (i, &x) in kas.iter().enumerate() {
                let w = weight_at(weights, i);
                if i < k {
                    poly.add_term(r1, w * mp, true, x, lo);
                } else {
                    poly.add_term(r2, w * mn, false, x, lo);
                }
            }
            let span = hi - lo;
            let distance = |t: f64| {
                if t < 0.0 {
                    -t
                } else if t > span {
                    t - span
                } else {
                    0.0
                }
            };
            let t = poly
                .roots(mp * wp + mn * wn)
                .into_iter()
                .filter(|t| t.is_finite())
                .min_by(|x, y| distance(*x).total_cmp(&distance(*y)))
                .filter(|t| distance(*t) <= BRACKET_SLACK)
                .ok_or(Error::NoRootInBracket { lo, hi, k })?;
            polish(spec, kas, weights, k, lo + t.clamp(0.0, span), lo, hi)
        }
    };

    if !root.is_finite() || root < lo - BRACKET_SLACK || root > hi + BRACKET_SLACK {
        return Err(Error::NoRootInBracket { lo, hi, k });
    }
    Ok(into_bracket(root, lo, hi))
}

/// Newton refinement on the directly evaluated deviation sum; a step is kept
/// only if it stays in the bracket and lowers the residual.
fn polish(
    spec: &ModDevSpec,
    kas: &[f64],
    weights: Option<&[f64]>,
    k: usize,
    mut y: f64,
    lo: f64,
    hi: f64,
) -> f64 {
    let mut fy = deviation_sum(spec, kas, weights, y).abs();
    for _ in 0..3 {
        if fy == 0.0 {
            break;
        }
        let slope = deviation_sum_slope(spec, kas, weights, k, y);
        if !(slope > 0.0) {
            break;
        }
        let next = y - deviation_sum(spec, kas, weights, y) / slope;
        if !(next >= lo && next < hi) {
            break;
        }
        let fnext = deviation_sum(spec, kas, weights, next).abs();
        if fnext >= fy {
            break;
        }
        y = next;
        fy = fnext;
    }
    y
}

/// Forces `y` into `[lo, hi)`.
#[inline]
fn into_bracket(y: f64, lo: f64, hi: f64) -> f64 {
    let y = y.clamp(lo, hi);
    if y >= hi {
        hi.next_down().max(lo)
    } else {
        y
    }
}

/// Sorts inputs under the configured order and returns `(permutation, kas)`.
fn sort_inputs(inputs: &[UnitInterval], ord: OrderParams) -> (Vec<usize>, Vec<f64>) {
    let perm = sorted_indices(inputs, ord);
    let kas = perm.iter().map(|&i| inputs[i].k_a(ord.alpha())).collect();
    (perm, kas)
}

fn min_width(inputs: &[UnitInterval]) -> f64 {
    inputs
        .iter()
        .map(UnitInterval::width)
        .fold(f64::INFINITY, f64::min)
}

/// Materializes `(K_alpha, width)`, reusing an input with exactly that
/// representation so idempotency holds bit-for-bit.
fn materialize(inputs: &[UnitInterval], ka: f64, w: f64, alpha: f64) -> Result<UnitInterval> {
    if let Some(x) = inputs
        .iter()
        .find(|x| x.width() == w && x.k_a(alpha) == ka)
    {
        return Ok(*x);
    }
    from_ka_width(ka, w, alpha)
}

/// Full switch-point computation on `inputs` with weights aligned to the sorted order.
fn solve_sorted(
    inputs: &[UnitInterval],
    cfg: &WdMeanConfig,
    perm: Vec<usize>,
    kas: Vec<f64>,
    sorted_weights: Option<&[f64]>,
) -> Result<(SwitchPoint, UnitInterval)> {
    let spec = cfg.scalar();
    let mut sp = switch_point(&kas, spec, sorted_weights)?;
    sp.permutation = perm;
    let ka = solve_ka(&sp, spec, sorted_weights)?;
    let out = materialize(inputs, ka, min_width(inputs), cfg.order().alpha())?;
    Ok((sp, out))
}

/// The wD-mean together with the switch point used to compute it.
pub fn wd_mean_detailed(
    inputs: &[UnitInterval],
    cfg: &WdMeanConfig,
) -> Result<(SwitchPoint, UnitInterval)> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (perm, kas) = sort_inputs(inputs, cfg.order());
    let sorted_weights = match &cfg.weights {
        Some(w) => {
            validate_weights(w, inputs.len())?;
            Some(perm.iter().map(|&i| w[i]).collect::<Vec<_>>())
        }
        None => None,
    };
    solve_sorted(inputs, cfg, perm, kas, sorted_weights.as_deref())
}

/// The (weighted, when `cfg.weights` is set) interval-valued wD-mean.
///
/// Weights follow their inputs, so only the unweighted form is symmetric.
pub fn wd_mean(inputs: &[UnitInterval], cfg: &WdMeanConfig) -> Result<UnitInterval> {
    wd_mean_detailed(inputs, cfg).map(|(_, y)| y)
}

/// Ordered weighted wD-mean: weight `i` multiplies the `i`-th largest input.
pub fn wd_mean_ordered(inputs: &[UnitInterval], cfg: &WdMeanConfig) -> Result<UnitInterval> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let weights = cfg.weights.as_deref().ok_or(Error::WeightLength {
        expected: inputs.len(),
        got: 0,
    })?;
    validate_weights(weights, inputs.len())?;
    let (perm, kas) = sort_inputs(inputs, cfg.order());
    // ascending order carries the weights reversed
    let sorted_weights: Vec<f64> = weights.iter().rev().copied().collect();
    solve_sorted(inputs, cfg, perm, kas, Some(&sorted_weights)).map(|(_, y)| y)
}

/// Root of `F` over `[min ka, max ka]` by bisection, with weights aligned to `kas`.
pub fn bisect_root<S: ScalarDeviation>(
    spec: &S,
    kas: &[f64],
    weights: Option<&[f64]>,
    tol: f64,
) -> f64 {
    let mut lo = kas.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = kas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        let f = deviation_sum(spec, kas, weights, mid);
        match f.partial_cmp(&0.0) {
            Some(Ordering::Less) => lo = mid,
            Some(Ordering::Greater) => hi = mid,
            _ => return mid,
        }
    }
    lo + 0.5 * (hi - lo)
}

/// Reference solver for the wD-mean: bisection on the deviation sum with the
/// same width rule. Weights, when present, are aligned to `inputs`.
pub fn bisection_oracle(
    inputs: &[UnitInterval],
    cfg: &WdMeanConfig,
    tol: f64,
) -> Result<UnitInterval> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(w) = &cfg.weights {
        validate_weights(w, inputs.len())?;
    }
    let alpha = cfg.order().alpha();
    let kas: Vec<f64> = inputs.iter().map(|x| x.k_a(alpha)).collect();
    let ka = bisect_root(cfg.scalar(), &kas, cfg.weights.as_deref(), tol);
    materialize(inputs, ka, min_width(inputs), alpha)
}

/// Grid approximation of the interval-valued D-mean for an arbitrary
/// deviation `D`.
///
/// Candidates share the width `min_i w(X_i)` and range over `K_alpha` values
/// on the grid `{0, step, ..., 1}` (plus the inputs' own `K_alpha` values and
/// the feasible extremes). The lower point is the supremum of candidates with
/// `sum D < 0_L` and the upper point the infimum of candidates with
/// `sum D > 0_L`; a candidate with a zero sum adjacent to either set is the
/// exact boundary and is used instead. Empty sets fall back to the lowest and
/// highest candidate respectively. The result is the componentwise mean.
pub fn d_mean_generic<D: IntervalDeviation + ?Sized>(
    inputs: &[UnitInterval],
    deviation: &D,
    order: OrderParams,
    grid_step: f64,
) -> Result<UnitInterval> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(grid_step > 0.0) {
        return Err(Error::Config(format!(
            "grid step must be positive, got {grid_step}"
        )));
    }
    let alpha = order.alpha();
    let w = min_width(inputs);
    let k_min = alpha * w;
    let k_max = 1.0 - (1.0 - alpha) * w;

    let steps = (1.0 / grid_step).round() as usize;
    let mut kas: Vec<f64> = (0..=steps)
        .map(|j| (j as f64 * grid_step).min(1.0))
        .filter(|k| *k >= k_min && *k <= k_max)
        .collect();
    kas.push(k_min);
    kas.push(k_max);
    kas.sort_by(f64::total_cmp);
    kas.dedup();

    let mut candidates: Vec<UnitInterval> = kas
        .iter()
        .map(|&k| from_ka_width(k, w, alpha))
        .collect::<Result<_>>()?;
    // minimum-width inputs are exact candidates, not reconstructions
    candidates.extend(inputs.iter().filter(|x| x.width() == w).copied());
    candidates.sort_by(|a, b| cmp_alpha_beta(a, b, order));
    candidates.dedup();
    let signs: Vec<Ordering> = candidates
        .iter()
        .map(|y| {
            inputs
                .iter()
                .map(|x| deviation.eval(x, y))
                .sum::<crate::interval::RealInterval>()
                .cmp_with(&crate::interval::RealInterval::ZERO, order)
        })
        .collect();

    let last = candidates.len() - 1;
    let lower = match signs.iter().rposition(|s| *s == Ordering::Less) {
        Some(i) if i < last && signs[i + 1] == Ordering::Equal => i + 1,
        Some(i) => i,
        None => 0,
    };
    let upper = match signs.iter().position(|s| *s == Ordering::Greater) {
        Some(i) if i > 0 && signs[i - 1] == Ordering::Equal => i - 1,
        Some(i) => i,
        None => last,
    };
    let (a, b) = (candidates[lower], candidates[upper]);
    if a == b {
        return Ok(a);
    }
    let lo = 0.5 * (a.lo() + b.lo());
    let hi = 0.5 * (a.hi() + b.hi());
    UnitInterval::new(lo.clamp(0.0, 1.0), hi.clamp(lo.clamp(0.0, 1.0), 1.0))
}
