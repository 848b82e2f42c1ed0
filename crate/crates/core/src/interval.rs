//! Closed intervals, the `K_a` representative operator and the admissible
//! lexicographic order `<=_{alpha,beta}` on `L([0,1])`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Slack allowed when reconstructing an interval from `(K_alpha, width)`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Slack allowed on weight vectors that must sum to one.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// A closed subinterval `[lo, hi]` of `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitInterval {
    lo: f64,
    hi: f64,
}

impl UnitInterval {
    pub const ZERO: UnitInterval = UnitInterval { lo: 0.0, hi: 0.0 };
    pub const ONE: UnitInterval = UnitInterval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo < 0.0 || hi > 1.0 || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `K_a(X) = (1 - a) lo + a hi`.
    ///
    /// Evaluated as `lo + a (hi - lo)` so that the result is exactly `lo` on
    /// degenerate intervals and monotone in `a` under rounding.
    #[inline]
    pub fn k_a(&self, a: f64) -> f64 {
        k_a(self.lo, self.hi, a)
    }

    pub fn cmp_with(&self, other: &UnitInterval, ord: OrderParams) -> Ordering {
        cmp_alpha_beta(self, other, ord)
    }

    /// Product (componentwise) order, a partial order.
    pub fn product_le(&self, other: &UnitInterval) -> bool {
        self.lo <= other.lo && self.hi <= other.hi
    }
}

impl fmt::Display for UnitInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// An element of `L(R)`: a closed real interval with unrestricted endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealInterval {
    lo: f64,
    hi: f64,
}

impl RealInterval {
    pub const ZERO: RealInterval = RealInterval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidRealInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Builds `[ka - alpha w, ka + (1 - alpha) w]`; `w` must be nonnegative.
    pub fn from_ka_width(ka: f64, w: f64, alpha: f64) -> Self {
        debug_assert!(w >= 0.0);
        Self {
            lo: ka - alpha * w,
            hi: ka + (1.0 - alpha) * w,
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn k_a(&self, a: f64) -> f64 {
        k_a(self.lo, self.hi, a)
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// Lexicographic comparison by `(K_alpha, K_beta)`, the same rule as on `L([0,1])`.
    pub fn cmp_with(&self, other: &RealInterval, ord: OrderParams) -> Ordering {
        lexicographic(
            (self.k_a(ord.alpha()), self.k_a(ord.beta())),
            (other.k_a(ord.alpha()), other.k_a(ord.beta())),
        )
        .then_with(|| self.lo.total_cmp(&other.lo))
        .then_with(|| self.hi.total_cmp(&other.hi))
    }
}

impl From<UnitInterval> for RealInterval {
    fn from(x: UnitInterval) -> Self {
        Self { lo: x.lo, hi: x.hi }
    }
}

impl std::ops::Add for RealInterval {
    type Output = RealInterval;

    fn add(self, rhs: RealInterval) -> RealInterval {
        RealInterval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl std::iter::Sum for RealInterval {
    fn sum<I: Iterator<Item = RealInterval>>(iter: I) -> Self {
        iter.fold(RealInterval::ZERO, |acc, x| acc + x)
    }
}

/// The `(alpha, beta)` pair defining the admissible order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParams {
    alpha: f64,
    beta: f64,
}

impl OrderParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ParamOutOfRange { name, value });
            }
        }
        if alpha == beta {
            return Err(Error::DegenerateOrder(alpha));
        }
        Ok(Self { alpha, beta })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for OrderParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 1.0,
        }
    }
}

#[inline]
fn k_a(lo: f64, hi: f64, a: f64) -> f64 {
    lo + a * (hi - lo)
}

fn lexicographic(x: (f64, f64), y: (f64, f64)) -> Ordering {
    // Exact comparisons: an epsilon would break transitivity.
    match x.0.partial_cmp(&y.0).expect("K values are finite") {
        Ordering::Equal => x.1.partial_cmp(&y.1).expect("K values are finite"),
        o => o,
    }
}

/// Compares two intervals under `<=_{alpha,beta}`.
///
/// The order is lexicographic on `(K_alpha, K_beta)`. Distinct intervals
/// whose K values collide after rounding are separated by their endpoints,
/// so the result is `Equal` exactly when `x == y`.
pub fn cmp_alpha_beta(x: &UnitInterval, y: &UnitInterval, ord: OrderParams) -> Ordering {
    lexicographic(
        (x.k_a(ord.alpha), x.k_a(ord.beta)),
        (y.k_a(ord.alpha), y.k_a(ord.beta)),
    )
    .then_with(|| x.lo.total_cmp(&y.lo))
    .then_with(|| x.hi.total_cmp(&y.hi))
}

/// Inverse of `(K_alpha, width)`: returns `[ka - alpha w, ka + (1 - alpha) w]`.
///
/// Endpoints that stray outside `[0, 1]` by at most [`RECONSTRUCTION_TOL`] are
/// clamped; anything further is reported as [`Error::OutOfUnitRange`].
pub fn from_ka_width(ka: f64, w: f64, alpha: f64) -> Result<UnitInterval> {
    let w = w.max(0.0);
    let lo = ka - alpha * w;
    let hi = ka + (1.0 - alpha) * w;
    if !lo.is_finite()
        || !hi.is_finite()
        || lo < -RECONSTRUCTION_TOL
        || hi > 1.0 + RECONSTRUCTION_TOL
    {
        return Err(Error::OutOfUnitRange { lo, hi });
    }
    let lo = lo.clamp(0.0, 1.0);
    let hi = hi.clamp(lo, 1.0);
    Ok(UnitInterval { lo, hi })
}

/// `[sum w_i lo_i, sum w_i hi_i]` for weights summing to one.
///
/// Accumulated as offsets from the first positively weighted interval, so
/// equal inputs come back bit for bit whatever the rounding of the weights.
pub fn weighted_interval_sum(pairs: &[(f64, UnitInterval)]) -> Result<UnitInterval> {
    let Some((_, anchor)) = pairs.iter().find(|(w, _)| *w > 0.0).or(pairs.first()) else {
        return Err(Error::EmptyInput);
    };
    let mut total = 0.0;
    let mut d_lo = 0.0;
    let mut d_hi = 0.0;
    for (w, x) in pairs {
        if !(*w >= 0.0) {
            return Err(Error::InvalidWeights);
        }
        total += w;
        d_lo += w * (x.lo - anchor.lo);
        d_hi += w * (x.hi - anchor.hi);
    }
    let lo = anchor.lo + d_lo;
    let hi = anchor.hi + d_hi;
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::WeightSum(total));
    }
    let lo = lo.clamp(0.0, 1.0);
    Ok(UnitInterval {
        lo,
        hi: hi.clamp(lo, 1.0),
    })
}

/// Sorts indices of `xs` increasingly under `<=_{alpha,beta}`, stable on ties.
pub fn sorted_indices(xs: &[UnitInterval], ord: OrderParams) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&i, &j| cmp_alpha_beta(&xs[i], &xs[j], ord));
    idx
}

/// The `<=_{alpha,beta}`-maximum; the lowest index wins on ties.
pub fn argmax_by_order(xs: &[UnitInterval], ord: OrderParams) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, x) in xs.iter().enumerate() {
        match best {
            Some(b) if cmp_alpha_beta(x, &xs[b], ord) != Ordering::Greater => {}
            _ => best = Some(i),
        }
    }
    best
}

/// The `<=_{alpha,beta}`-minimum; the lowest index wins on ties.
pub fn argmin_by_order(xs: &[UnitInterval], ord: OrderParams) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, x) in xs.iter().enumerate() {
        match best {
            Some(b) if cmp_alpha_beta(x, &xs[b], ord) != Ordering::Less => {}
            _ => best = Some(i),
        }
    }
    best
}
