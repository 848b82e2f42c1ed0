//! Scalar moderate deviation functions on `[0,1]^2`.
//!
//! The main family is built from two restricted equivalence functions:
//!
//! ```text
//! D(x, y) = M_p (1 - R1(x, y))   if x <= y
//!         = M_n (R2(x, y) - 1)   if x >  y
//! ```
//!
//! which ranges over `[-M_n, M_p]`. The discontinuous `eps/delta` family is
//! provided for the generic grid-based D-mean only.

use std::fmt;

use crate::error::{Error, Result};

/// Restricted equivalence functions used to build deviations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RefKind {
    /// `1 - |y - x|`
    LinearAbs,
    /// `1 - (y - x)^2`
    SqDiff,
    /// `1 - |y^2 - x^2|`
    AbsSqDiff,
}

impl RefKind {
    pub const ALL: [RefKind; 3] = [RefKind::LinearAbs, RefKind::SqDiff, RefKind::AbsSqDiff];

    #[inline]
    pub fn eval(self, x: f64, y: f64) -> f64 {
        1.0 - self.dissimilarity(x, y)
    }

    /// `1 - R(x, y)`, computed directly to avoid cancellation.
    #[inline]
    pub fn dissimilarity(self, x: f64, y: f64) -> f64 {
        match self {
            RefKind::LinearAbs => (y - x).abs(),
            RefKind::SqDiff => (y - x) * (y - x),
            RefKind::AbsSqDiff => ((y - x) * (y + x)).abs(),
        }
    }
}

/// Anything usable as a scalar moderate deviation.
pub trait ScalarDeviation {
    /// Evaluates without checking the domain.
    fn deviation(&self, x: f64, y: f64) -> f64;

    /// Whether the function is continuous and strictly increasing in `y`,
    /// i.e. whether the deviation-sum root is unique and bisection applies.
    fn is_continuous_strict(&self) -> bool;
}

/// `(M_p, M_n, R1, R2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModDevSpec {
    m_p: f64,
    m_n: f64,
    r1: RefKind,
    r2: RefKind,
}

impl ModDevSpec {
    pub fn new(m_p: f64, m_n: f64, r1: RefKind, r2: RefKind) -> Result<Self> {
        if !(m_p > 0.0 && m_p.is_finite() && m_n > 0.0 && m_n.is_finite()) {
            return Err(Error::InvalidDeviation(format!(
                "M_p = {m_p} and M_n = {m_n} must be positive and finite"
            )));
        }
        Ok(Self { m_p, m_n, r1, r2 })
    }

    /// The five published choices of `(R1, R2)`, indexed `1..=5`.
    pub fn case(case: usize, m_p: f64, m_n: f64) -> Result<Self> {
        use RefKind::*;
        let (r1, r2) = match case {
            1 => (LinearAbs, LinearAbs),
            2 => (AbsSqDiff, AbsSqDiff),
            3 => (SqDiff, SqDiff),
            4 => (AbsSqDiff, SqDiff),
            5 => (SqDiff, AbsSqDiff),
            _ => {
                return Err(Error::InvalidDeviation(format!(
                    "unknown deviation case {case}, expected 1..=5"
                )))
            }
        };
        Self::new(m_p, m_n, r1, r2)
    }

    /// `R1 = R2 = 1 - |y - x|`.
    pub fn md1(m_p: f64, m_n: f64) -> Result<Self> {
        Self::case(1, m_p, m_n)
    }

    /// `R1 = 1 - (y - x)^2`, `R2 = 1 - |y^2 - x^2|`.
    pub fn md2(m_p: f64, m_n: f64) -> Result<Self> {
        Self::case(5, m_p, m_n)
    }

    pub fn m_p(&self) -> f64 {
        self.m_p
    }

    pub fn m_n(&self) -> f64 {
        self.m_n
    }

    pub fn r1(&self) -> RefKind {
        self.r1
    }

    pub fn r2(&self) -> RefKind {
        self.r2
    }
}

impl ScalarDeviation for ModDevSpec {
    #[inline]
    fn deviation(&self, x: f64, y: f64) -> f64 {
        if x <= y {
            self.m_p * self.r1.dissimilarity(x, y)
        } else {
            -self.m_n * self.r2.dissimilarity(x, y)
        }
    }

    fn is_continuous_strict(&self) -> bool {
        true
    }
}

impl fmt::Display for ModDevSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M_p={} M_n={} R1={:?} R2={:?}",
            self.m_p, self.m_n, self.r1, self.r2
        )
    }
}

/// `y - x + eps` above the diagonal, `y - x - delta` below, zero on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsDeltaSpec {
    eps: f64,
    delta: f64,
}

impl EpsDeltaSpec {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        if !(eps >= 0.0 && delta >= 0.0 && eps.is_finite() && delta.is_finite()) {
            return Err(Error::InvalidDeviation(format!(
                "eps = {eps} and delta = {delta} must be nonnegative"
            )));
        }
        Ok(Self { eps, delta })
    }
}

impl ScalarDeviation for EpsDeltaSpec {
    #[inline]
    fn deviation(&self, x: f64, y: f64) -> f64 {
        if y > x {
            y - x + self.eps
        } else if y < x {
            y - x - self.delta
        } else {
            0.0
        }
    }

    fn is_continuous_strict(&self) -> bool {
        self.eps == 0.0 && self.delta == 0.0
    }
}

fn check_domain(x: f64, y: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::DomainError {
            what: "deviation arguments",
            x,
            y,
        })
    }
}

pub fn md_eval(spec: &ModDevSpec, x: f64, y: f64) -> Result<f64> {
    check_domain(x, y)?;
    Ok(spec.deviation(x, y))
}

pub fn md_eval_eps_delta(spec: &EpsDeltaSpec, x: f64, y: f64) -> Result<f64> {
    check_domain(x, y)?;
    Ok(spec.deviation(x, y))
}

/// Width combiner `C(wx, wy) = max(0, min(1, f(wy) - f(wx) + wy))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WidthCombiner {
    /// `f = id`, giving `max(0, min(1, 2 wy - wx))`.
    #[default]
    Identity,
}

impl WidthCombiner {
    #[inline]
    fn f(self, w: f64) -> f64 {
        match self {
            WidthCombiner::Identity => w,
        }
    }

    #[inline]
    pub fn combine(self, wx: f64, wy: f64) -> f64 {
        if wx == wy {
            // idempotency must hold exactly
            return wy.clamp(0.0, 1.0);
        }
        (self.f(wy) - self.f(wx) + wy).clamp(0.0, 1.0)
    }
}

pub fn width_combine(f_kind: WidthCombiner, wx: f64, wy: f64) -> f64 {
    f_kind.combine(wx, wy)
}
