//! Fuzzy implication functions and the probability-to-interval mapping
//! `x -> [I(x, y), I(x, y) + y]` (upper bound cropped at 1).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interval::UnitInterval;

/// Width parameter used to build intervals from classifier probabilities.
pub const DEFAULT_Y_WIDTH: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImplicationKind {
    /// `max(1 - x, y)`
    KleeneDienes,
    /// `min(1, 1 - x + y)`
    Lukasiewicz,
    /// `1 - x + x y`
    Reichenbach,
}

impl ImplicationKind {
    pub const ALL: [ImplicationKind; 3] = [
        ImplicationKind::KleeneDienes,
        ImplicationKind::Lukasiewicz,
        ImplicationKind::Reichenbach,
    ];

    /// Evaluates the implication without validating the domain.
    #[inline]
    pub fn apply(self, x: f64, y: f64) -> f64 {
        match self {
            ImplicationKind::KleeneDienes => (1.0 - x).max(y),
            ImplicationKind::Lukasiewicz => (1.0 - x + y).min(1.0),
            // 1 - x(1 - y) equals 1 - x + xy and stays monotone under rounding
            ImplicationKind::Reichenbach => 1.0 - x * (1.0 - y),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ImplicationKind::KleeneDienes => "kleene-dienes",
            ImplicationKind::Lukasiewicz => "lukasiewicz",
            ImplicationKind::Reichenbach => "reichenbach",
        }
    }
}

impl fmt::Display for ImplicationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ImplicationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "kleene-dienes" | "kleenedienes" | "kd" => Ok(ImplicationKind::KleeneDienes),
            "lukasiewicz" | "luk" => Ok(ImplicationKind::Lukasiewicz),
            "reichenbach" | "rb" => Ok(ImplicationKind::Reichenbach),
            other => Err(Error::Config(format!("unknown implication '{other}'"))),
        }
    }
}

fn check_unit(what: &'static str, x: f64, y: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y) {
        Ok(())
    } else {
        Err(Error::DomainError { what, x, y })
    }
}

pub fn implication(kind: ImplicationKind, x: f64, y: f64) -> Result<f64> {
    check_unit("implication arguments", x, y)?;
    Ok(kind.apply(x, y).clamp(0.0, 1.0))
}

/// Maps a probability `x` to `[I(x, y), min(1, I(x, y) + y)]`.
pub fn build_interval(kind: ImplicationKind, x: f64, y_width: f64) -> Result<UnitInterval> {
    check_unit("interval construction arguments", x, y_width)?;
    let lo = kind.apply(x, y_width).clamp(0.0, 1.0);
    let hi = (lo + y_width).min(1.0);
    UnitInterval::new(lo, hi)
}
