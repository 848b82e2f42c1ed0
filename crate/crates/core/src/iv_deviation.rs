//! Interval-valued moderate deviations.
//!
//! The w-preserving construction pairs a strictly monotone scalar deviation
//! with a width combiner: `K_alpha(D(X, Y)) = D(K_alpha(X), K_alpha(Y))` and
//! `w(D(X, Y)) = C(w(X), w(Y))`.

use std::cmp::Ordering;

use crate::deviation::{EpsDeltaSpec, ModDevSpec, ScalarDeviation, WidthCombiner};
use crate::interval::{cmp_alpha_beta, OrderParams, RealInterval, UnitInterval};

/// Any function `(L([0,1]))^2 -> L(R)` usable as a deviation in the generic D-mean.
pub trait IntervalDeviation {
    fn eval(&self, x: &UnitInterval, y: &UnitInterval) -> RealInterval;
}

/// Deviation output kept as `(K_alpha, width)`; endpoints are built on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvDeviationValue {
    pub ka: f64,
    pub width: f64,
    pub alpha: f64,
}

impl IvDeviationValue {
    pub fn to_interval(&self) -> RealInterval {
        RealInterval::from_ka_width(self.ka, self.width, self.alpha)
    }
}

/// The w-preserving deviation built from a scalar deviation `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvDeviation<S> {
    pub scalar: S,
    pub order: OrderParams,
    pub width_f: WidthCombiner,
}

/// The construction over the REF-based scalar family, the one the solver consumes.
pub type IvModDevSpec = IvDeviation<ModDevSpec>;

/// The construction over the discontinuous `eps/delta` family.
pub type IvEpsDeltaSpec = IvDeviation<EpsDeltaSpec>;

impl<S: ScalarDeviation> IvDeviation<S> {
    pub fn new(scalar: S, order: OrderParams) -> Self {
        Self {
            scalar,
            order,
            width_f: WidthCombiner::Identity,
        }
    }

    pub fn eval_value(&self, x: &UnitInterval, y: &UnitInterval) -> IvDeviationValue {
        let alpha = self.order.alpha();
        IvDeviationValue {
            ka: self.scalar.deviation(x.k_a(alpha), y.k_a(alpha)),
            width: self.width_f.combine(x.width(), y.width()),
            alpha,
        }
    }
}

impl<S: ScalarDeviation> IntervalDeviation for IvDeviation<S> {
    fn eval(&self, x: &UnitInterval, y: &UnitInterval) -> RealInterval {
        self.eval_value(x, y).to_interval()
    }
}

pub fn iv_md_eval(spec: &IvModDevSpec, x: &UnitInterval, y: &UnitInterval) -> RealInterval {
    spec.eval(x, y)
}

/// `Z` when `Y > X`, `-Z` when `Y < X`, `[0, 0]` when equal, for a fixed `Z > 0_L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignDeviation {
    pub magnitude: UnitInterval,
    pub order: OrderParams,
}

impl IntervalDeviation for SignDeviation {
    fn eval(&self, x: &UnitInterval, y: &UnitInterval) -> RealInterval {
        let z = RealInterval::from(self.magnitude);
        match cmp_alpha_beta(y, x, self.order) {
            Ordering::Greater => z,
            Ordering::Less => z.neg(),
            Ordering::Equal => RealInterval::ZERO,
        }
    }
}
