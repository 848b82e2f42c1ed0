//! Interval-valued OWA operators with quantifier-derived weights.

use crate::error::{Error, Result};
use crate::interval::{sorted_indices, weighted_interval_sum, OrderParams, UnitInterval};

/// Parameters of the ramp quantifier `Q_{a,b}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantifierParams {
    a: f64,
    b: f64,
}

impl QuantifierParams {
    pub const OWA1: QuantifierParams = QuantifierParams { a: 0.1, b: 0.5 };
    pub const OWA2: QuantifierParams = QuantifierParams { a: 0.5, b: 1.0 };
    pub const OWA3: QuantifierParams = QuantifierParams { a: 0.3, b: 0.8 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        for (name, value) in [("a", a), ("b", b)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ParamOutOfRange { name, value });
            }
        }
        if a >= b {
            return Err(Error::Config(format!(
                "quantifier needs a < b, got a = {a}, b = {b}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `Q(x)`: 0 below `a`, 1 above `b`, linear in between.
    pub fn q(&self, x: f64) -> f64 {
        if x < self.a {
            0.0
        } else if x > self.b {
            1.0
        } else {
            (x - self.a) / (self.b - self.a)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput);
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::InvalidWeights);
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::WeightSum(total));
        }
        Ok(Self(weights))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `w_i = Q(i/n) - Q((i-1)/n)`.
///
/// The ramp is evaluated on the scaled axis `t = x n`, i.e.
/// `Q(i/n) = clamp(i - a n, 0, (b - a) n) / ((b - a) n)`, which keeps
/// rational weights such as `0.2` and `0.4` exact.
pub fn quantifier_weights(q: QuantifierParams, n: usize) -> WeightVector {
    assert!(n >= 1, "need at least one weight");
    let nf = n as f64;
    let start = q.a * nf;
    let span = (q.b - q.a) * nf;
    let ramp = |i: usize| (i as f64 - start).clamp(0.0, span);
    let weights = (1..=n).map(|i| (ramp(i) - ramp(i - 1)) / span).collect();
    WeightVector(weights)
}

/// `sum_i w_i X_(i)` with inputs sorted increasingly under `<=_{alpha,beta}`.
pub fn iv_owa(
    inputs: &[UnitInterval],
    w: &WeightVector,
    ord: OrderParams,
) -> Result<UnitInterval> {
    if inputs.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: inputs.len(),
            right: w.len(),
        });
    }
    let pairs: Vec<(f64, UnitInterval)> = sorted_indices(inputs, ord)
        .into_iter()
        .zip(w.as_slice())
        .map(|(i, &wi)| (wi, inputs[i]))
        .collect();
    weighted_interval_sum(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(lo: f64, hi: f64) -> UnitInterval {
        UnitInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(
            quantifier_weights(QuantifierParams::OWA2, 5).as_slice(),
            &[0.0, 0.0, 0.2, 0.4, 0.4]
        );
        assert_eq!(
            quantifier_weights(QuantifierParams::new(0.0, 1.0).unwrap(), 4).as_slice(),
            &[0.25; 4]
        );
        assert_eq!(
            quantifier_weights(QuantifierParams::OWA1, 2).as_slice(),
            &[1.0, 0.0]
        );
        assert!(QuantifierParams::new(0.5, 0.5).is_err());
    }

    #[test]
    fn scaled_ramp_agrees_with_direct_quantifier() {
        for q in [QuantifierParams::OWA1, QuantifierParams::OWA2, QuantifierParams::OWA3] {
            for n in 1..12 {
                let w = quantifier_weights(q, n);
                for (i, wi) in w.as_slice().iter().enumerate() {
                    let direct = q.q((i + 1) as f64 / n as f64) - q.q(i as f64 / n as f64);
                    assert!((wi - direct).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn owa_examples() {
        let ord = OrderParams::new(0.5, 1.0).unwrap();
        let x = iv(0.2, 0.6);
        let w = quantifier_weights(QuantifierParams::OWA3, 4);
        assert_eq!(iv_owa(&[x; 4], &w, ord).unwrap(), x);

        let inputs = [iv(0.6, 0.7), iv(0.1, 0.9), iv(0.3, 0.4)];
        let last = WeightVector::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(iv_owa(&inputs, &last, ord).unwrap(), iv(0.6, 0.7));

        let w = WeightVector::new(vec![0.25, 0.75]).unwrap();
        let y = iv_owa(&[iv(0.4, 0.8), iv(0.0, 0.4)], &w, ord).unwrap();
        assert!((y.lo() - 0.3).abs() < 1e-12 && (y.hi() - 0.7).abs() < 1e-12);

        assert!(matches!(
            iv_owa(&inputs, &w, ord),
            Err(Error::LengthMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn weights_sum_to_one(a in 0.0..1.0f64, d in 0.001..1.0f64, n in 1usize..40) {
            let b = (a + d).min(1.0);
            prop_assume!(a < b);
            let w = quantifier_weights(QuantifierParams::new(a, b).unwrap(), n);
            prop_assert!((w.as_slice().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(w.as_slice().iter().all(|x| *x >= 0.0));
        }

        #[test]
        fn owa_monotone_and_bounded(
            xs in prop::collection::vec((0.0..=1.0f64, 0.0..=1.0f64), 5),
            bump in 0usize..5, up in 0.0..0.3f64,
        ) {
            let ord = OrderParams::new(0.5, 1.0).unwrap();
            let inputs: Vec<_> = xs.iter().map(|(a, b)| iv(a.min(*b), a.max(*b))).collect();
            let w = quantifier_weights(QuantifierParams::OWA3, 5);
            let y = iv_owa(&inputs, &w, ord).unwrap();
            let min_lo = inputs.iter().map(|x| x.lo()).fold(1.0, f64::min);
            let max_hi = inputs.iter().map(|x| x.hi()).fold(0.0, f64::max);
            prop_assert!(y.lo() >= min_lo - 1e-12 && y.hi() <= max_hi + 1e-12);

            let mut raised = inputs.clone();
            let x = raised[bump];
            raised[bump] = iv((x.lo() + up).min(1.0), (x.hi() + up).min(1.0));
            let z = iv_owa(&raised, &w, ord).unwrap();
            prop_assert_ne!(
                crate::interval::cmp_alpha_beta(&y, &z, ord),
                std::cmp::Ordering::Greater
            );
        }
    }

    #[test]
    fn boundary_conditions() {
        let ord = OrderParams::default();
        let w = quantifier_weights(QuantifierParams::OWA1, 3);
        assert_eq!(iv_owa(&[UnitInterval::ZERO; 3], &w, ord).unwrap(), UnitInterval::ZERO);
        assert_eq!(iv_owa(&[UnitInterval::ONE; 3], &w, ord).unwrap(), UnitInterval::ONE);
    }
}
