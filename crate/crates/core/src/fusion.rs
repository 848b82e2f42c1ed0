//! Traditional and two-phase (MFF) fusion of classifier outputs.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deviation::ModDevSpec;
use crate::error::{Error, Result};
use crate::implication::{build_interval, ImplicationKind, DEFAULT_Y_WIDTH};
use crate::interval::{argmax_by_order, argmin_by_order, OrderParams, UnitInterval};
use crate::iv_deviation::IvDeviation;
use crate::owa::{iv_owa, quantifier_weights, QuantifierParams};
use crate::wd_mean::{wd_mean, WdMeanConfig};

/// Scores indexed `[sample][source][class]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreCube<T> {
    samples: usize,
    sources: usize,
    classes: usize,
    data: Vec<T>,
}

pub type ProbCube = ScoreCube<f64>;
pub type IntervalCube = ScoreCube<UnitInterval>;

impl<T: Copy> ScoreCube<T> {
    pub fn from_vec(samples: usize, sources: usize, classes: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != samples * sources * classes {
            return Err(Error::ShapeError(format!(
                "{} entries for a {samples} x {sources} x {classes} cube",
                data.len()
            )));
        }
        Ok(Self {
            samples,
            sources,
            classes,
            data,
        })
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.samples, self.sources, self.classes)
    }

    pub fn get(&self, sample: usize, source: usize, class: usize) -> T {
        self.data[(sample * self.sources + source) * self.classes + class]
    }

    /// Scores of one class across all sources, for one sample.
    pub fn column(&self, sample: usize, class: usize) -> Vec<T> {
        (0..self.sources).map(|s| self.get(sample, s, class)).collect()
    }

    pub fn map<U, F: FnMut(T) -> Result<U>>(&self, f: F) -> Result<ScoreCube<U>> {
        Ok(ScoreCube {
            samples: self.samples,
            sources: self.sources,
            classes: self.classes,
            data: self.data.iter().copied().map(f).collect::<Result<_>>()?,
        })
    }
}

impl ProbCube {
    /// Stacks per-source `samples x classes` probability matrices.
    pub fn from_sources(sources: &[DMatrix<f64>]) -> Result<Self> {
        let first = sources
            .first()
            .ok_or_else(|| Error::ShapeError("no score sources".into()))?;
        let (samples, classes) = first.shape();
        if let Some(bad) = sources.iter().find(|m| m.shape() != (samples, classes)) {
            return Err(Error::ShapeError(format!(
                "source shapes differ: {:?} vs {:?}",
                (samples, classes),
                bad.shape()
            )));
        }
        let mut data = Vec::with_capacity(samples * sources.len() * classes);
        for i in 0..samples {
            for m in sources {
                data.extend(m.row(i).iter().copied());
            }
        }
        Self::from_vec(samples, sources.len(), classes, data)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AggregatorKind {
    NumericMean,
    IvOwa1,
    IvOwa2,
    IvOwa3,
    /// `R1 = R2 = 1 - |y - x|`.
    Md1 { m_p: f64, m_n: f64 },
    /// `R1 = 1 - (y - x)^2`, `R2 = 1 - |y^2 - x^2|`.
    Md2 { m_p: f64, m_n: f64 },
}

impl AggregatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            AggregatorKind::NumericMean => "mean",
            AggregatorKind::IvOwa1 => "owa1",
            AggregatorKind::IvOwa2 => "owa2",
            AggregatorKind::IvOwa3 => "owa3",
            AggregatorKind::Md1 { .. } => "md1",
            AggregatorKind::Md2 { .. } => "md2",
        }
    }

    pub fn is_interval(&self) -> bool {
        !matches!(self, AggregatorKind::NumericMean)
    }

    pub fn is_md(&self) -> bool {
        matches!(self, AggregatorKind::Md1 { .. } | AggregatorKind::Md2 { .. })
    }

    /// The same deviation family with new `(M_p, M_n)`; other kinds unchanged.
    pub fn with_mp_mn(self, m_p: f64, m_n: f64) -> Self {
        match self {
            AggregatorKind::Md1 { .. } => AggregatorKind::Md1 { m_p, m_n },
            AggregatorKind::Md2 { .. } => AggregatorKind::Md2 { m_p, m_n },
            other => other,
        }
    }

    fn quantifier(&self) -> Option<QuantifierParams> {
        match self {
            AggregatorKind::IvOwa1 => Some(QuantifierParams::OWA1),
            AggregatorKind::IvOwa2 => Some(QuantifierParams::OWA2),
            AggregatorKind::IvOwa3 => Some(QuantifierParams::OWA3),
            _ => None,
        }
    }

    fn md_spec(&self) -> Option<Result<ModDevSpec>> {
        match *self {
            AggregatorKind::Md1 { m_p, m_n } => Some(ModDevSpec::md1(m_p, m_n)),
            AggregatorKind::Md2 { m_p, m_n } => Some(ModDevSpec::md2(m_p, m_n)),
            _ => None,
        }
    }
}

impl fmt::Display for AggregatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AggregatorKind {
    type Err = Error;

    /// MD variants parse with `M_p = M_n = 1`; override through the config.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mean" | "numeric" | "numericmean" => Ok(AggregatorKind::NumericMean),
            "owa1" => Ok(AggregatorKind::IvOwa1),
            "owa2" => Ok(AggregatorKind::IvOwa2),
            "owa3" => Ok(AggregatorKind::IvOwa3),
            "md1" => Ok(AggregatorKind::Md1 { m_p: 1.0, m_n: 1.0 }),
            "md2" => Ok(AggregatorKind::Md2 { m_p: 1.0, m_n: 1.0 }),
            other => Err(Error::Config(format!("unknown aggregator '{other}'"))),
        }
    }
}

/// Which end of the order picks the winning class for interval aggregators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecisionRule {
    #[default]
    Max,
    Min,
}

impl FromStr for DecisionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max" => Ok(DecisionRule::Max),
            "min" => Ok(DecisionRule::Min),
            other => Err(Error::Config(format!("unknown decision rule '{other}'"))),
        }
    }
}

impl fmt::Display for DecisionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecisionRule::Max => "max",
            DecisionRule::Min => "min",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Framework {
    Traditional,
    Mff,
}

impl FromStr for Framework {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "traditional" => Ok(Framework::Traditional),
            "mff" => Ok(Framework::Mff),
            other => Err(Error::Config(format!("unknown framework '{other}'"))),
        }
    }
}

impl fmt::Display for Framework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Framework::Traditional => "traditional",
            Framework::Mff => "mff",
        })
    }
}

/// Settings shared by both fusion frameworks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionConfig {
    pub implication: ImplicationKind,
    pub y_width: f64,
    pub order: OrderParams,
    /// Applies to interval aggregators; the numeric mean always takes the largest value.
    pub decision: DecisionRule,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self {
            implication: ImplicationKind::Reichenbach,
            y_width: DEFAULT_Y_WIDTH,
            order: OrderParams::default(),
            decision: DecisionRule::Max,
        }
    }
}

pub fn intervalize(probs: &ProbCube, implication: ImplicationKind, y_width: f64) -> Result<IntervalCube> {
    probs.map(|p| build_interval(implication, p, y_width))
}

/// Aggregates one tuple of intervals.
pub fn aggregate_intervals(
    inputs: &[UnitInterval],
    agg: AggregatorKind,
    order: OrderParams,
) -> Result<UnitInterval> {
    if let Some(q) = agg.quantifier() {
        return iv_owa(inputs, &quantifier_weights(q, inputs.len()), order);
    }
    if let Some(spec) = agg.md_spec() {
        return wd_mean(inputs, &WdMeanConfig::new(IvDeviation::new(spec?, order)));
    }
    Err(Error::Config(format!("{agg} is not an interval aggregator")))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn argmax_numeric(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

fn decide(values: &[UnitInterval], cfg: &FusionConfig) -> usize {
    match cfg.decision {
        DecisionRule::Max => argmax_by_order(values, cfg.order),
        DecisionRule::Min => argmin_by_order(values, cfg.order),
    }
    .expect("at least one class")
}

/// Per-sample collective vectors after aggregating across sources.
enum Collective {
    Numeric(Vec<Vec<f64>>),
    Interval(Vec<Vec<UnitInterval>>),
}

fn collapse_sources(probs: &ProbCube, agg: AggregatorKind, cfg: &FusionConfig) -> Result<Collective> {
    let (samples, sources, classes) = probs.shape();
    if sources == 0 || classes == 0 {
        return Err(Error::ShapeError("cube has no sources or classes".into()));
    }
    if !agg.is_interval() {
        return Ok(Collective::Numeric(
            (0..samples)
                .map(|s| (0..classes).map(|c| mean(&probs.column(s, c))).collect())
                .collect(),
        ));
    }
    let cube = intervalize(probs, cfg.implication, cfg.y_width)?;
    let rows = (0..samples)
        .map(|s| {
            (0..classes)
                .map(|c| aggregate_intervals(&cube.column(s, c), agg, cfg.order))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(Collective::Interval(rows))
}

fn decisions(collective: Collective, cfg: &FusionConfig) -> Vec<usize> {
    match collective {
        Collective::Numeric(rows) => rows.iter().map(|r| argmax_numeric(r)).collect(),
        Collective::Interval(rows) => rows.iter().map(|r| decide(r, cfg)).collect(),
    }
}

/// Aggregates across sources (bands) per class, then picks a class per sample.
pub fn fuse_traditional(probs: &ProbCube, agg: AggregatorKind, cfg: &FusionConfig) -> Result<Vec<usize>> {
    Ok(decisions(collapse_sources(probs, agg, cfg)?, cfg))
}

/// Phase one aggregates each classifier's cube across bands, phase two
/// aggregates the resulting collective vectors across classifiers.
pub fn fuse_mff(cubes: &[ProbCube], agg: AggregatorKind, cfg: &FusionConfig) -> Result<Vec<usize>> {
    let first = cubes
        .first()
        .ok_or_else(|| Error::ShapeError("no classifier cubes".into()))?;
    let (samples, _, classes) = first.shape();
    if let Some(bad) = cubes
        .iter()
        .find(|c| (c.shape().0, c.shape().2) != (samples, classes))
    {
        return Err(Error::ShapeError(format!(
            "classifier cubes disagree: {:?} vs {:?}",
            first.shape(),
            bad.shape()
        )));
    }
    let phase1 = cubes
        .iter()
        .map(|c| collapse_sources(c, agg, cfg))
        .collect::<Result<Vec<_>>>()?;
    let fused = if agg.is_interval() {
        let vectors: Vec<&Vec<Vec<UnitInterval>>> = phase1
            .iter()
            .map(|c| match c {
                Collective::Interval(rows) => rows,
                Collective::Numeric(_) => unreachable!("interval aggregator"),
            })
            .collect();
        let rows = (0..samples)
            .map(|s| {
                (0..classes)
                    .map(|c| {
                        let tuple: Vec<UnitInterval> = vectors.iter().map(|v| v[s][c]).collect();
                        aggregate_intervals(&tuple, agg, cfg.order)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Collective::Interval(rows)
    } else {
        let vectors: Vec<&Vec<Vec<f64>>> = phase1
            .iter()
            .map(|c| match c {
                Collective::Numeric(rows) => rows,
                Collective::Interval(_) => unreachable!("numeric aggregator"),
            })
            .collect();
        Collective::Numeric(
            (0..samples)
                .map(|s| {
                    (0..classes)
                        .map(|c| mean(&vectors.iter().map(|v| v[s][c]).collect::<Vec<_>>()))
                        .collect()
                })
                .collect(),
        )
    };
    Ok(decisions(fused, cfg))
}

/// Dispatches on the framework; Traditional uses only the first cube.
pub fn fuse(
    framework: Framework,
    cubes: &[ProbCube],
    agg: AggregatorKind,
    cfg: &FusionConfig,
) -> Result<Vec<usize>> {
    match framework {
        Framework::Traditional => fuse_traditional(
            cubes
                .first()
                .ok_or_else(|| Error::ShapeError("no classifier cubes".into()))?,
            agg,
            cfg,
        ),
        Framework::Mff => fuse_mff(cubes, agg, cfg),
    }
}

pub fn accuracy(predicted: &[usize], truth: &[usize]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    hits as f64 / truth.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpMnSearch {
    pub n_samples: usize,
    pub lo: f64,
    pub hi: f64,
    pub seed: u64,
}

impl MpMnSearch {
    pub const DEFAULT_SAMPLES: usize = 200;
    pub const DEFAULT_RANGE: (f64, f64) = (1.0, 100.0);

    pub fn new(seed: u64) -> Self {
        Self {
            n_samples: Self::DEFAULT_SAMPLES,
            lo: Self::DEFAULT_RANGE.0,
            hi: Self::DEFAULT_RANGE.1,
            seed,
        }
    }

    /// The pairs drawn, in order.
    pub fn draws(&self) -> Vec<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.n_samples)
            .map(|_| {
                let m_p = rng.random_range(self.lo..=self.hi);
                let m_n = rng.random_range(self.lo..=self.hi);
                (m_p, m_n)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpMnChoice {
    pub m_p: f64,
    pub m_n: f64,
    pub train_accuracy: f64,
}

/// Random search for `(M_p, M_n)` maximizing accuracy on precomputed
/// training-set scores; the first drawn pair wins ties.
pub fn optimize_mp_mn(
    framework: Framework,
    train_cubes: &[ProbCube],
    train_labels: &[usize],
    agg: AggregatorKind,
    cfg: &FusionConfig,
    search: &MpMnSearch,
) -> Result<MpMnChoice> {
    if !agg.is_md() {
        return Err(Error::Config(format!(
            "M_p/M_n search needs an MD aggregator, got {agg}"
        )));
    }
    if search.n_samples == 0 || !(search.lo > 0.0 && search.lo <= search.hi) {
        return Err(Error::Config(format!(
            "invalid M_p/M_n search: {} samples over [{}, {}]",
            search.n_samples, search.lo, search.hi
        )));
    }
    let mut best: Option<MpMnChoice> = None;
    for (m_p, m_n) in search.draws() {
        let predicted = fuse(framework, train_cubes, agg.with_mp_mn(m_p, m_n), cfg)?;
        let acc = accuracy(&predicted, train_labels);
        if best.is_none_or(|b| acc > b.train_accuracy) {
            best = Some(MpMnChoice {
                m_p,
                m_n,
                train_accuracy: acc,
            });
        }
    }
    Ok(best.expect("at least one draw"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    const ALL_AGGS: [AggregatorKind; 6] = [
        AggregatorKind::NumericMean,
        AggregatorKind::IvOwa1,
        AggregatorKind::IvOwa2,
        AggregatorKind::IvOwa3,
        AggregatorKind::Md1 { m_p: 2.0, m_n: 5.0 },
        AggregatorKind::Md2 { m_p: 10.0, m_n: 10.0 },
    ];

    fn cube(samples: usize, sources: usize, classes: usize, rows: &[Vec<f64>]) -> ProbCube {
        assert_eq!(rows.len(), samples * sources);
        ProbCube::from_vec(samples, sources, classes, rows.concat()).unwrap()
    }

    fn with_rule(decision: DecisionRule) -> FusionConfig {
        FusionConfig {
            decision,
            ..FusionConfig::default()
        }
    }

    #[test]
    fn intervalize_examples() {
        let probs = cube(1, 2, 2, &[vec![1.0, 0.0], vec![0.25, 0.75]]);
        let iv = intervalize(&probs, ImplicationKind::Lukasiewicz, 0.3).unwrap();
        assert_eq!(iv.shape(), probs.shape());
        let a = iv.get(0, 0, 0);
        assert!((a.lo() - 0.3).abs() < 1e-12 && (a.hi() - 0.6).abs() < 1e-12);
        for kind in ImplicationKind::ALL {
            let iv = intervalize(&probs, kind, 0.3).unwrap();
            assert_eq!(iv.get(0, 0, 1), UnitInterval::new(1.0, 1.0).unwrap());
        }
        let bad = cube(1, 1, 2, &[vec![1.5, -0.5]]);
        assert!(intervalize(&bad, ImplicationKind::Reichenbach, 0.3).is_err());
    }

    #[test]
    fn single_band_reduces_to_argmax() {
        let probs = cube(3, 1, 3, &[vec![0.2, 0.5, 0.3], vec![0.6, 0.3, 0.1], vec![0.1, 0.1, 0.8]]);
        let numeric = fuse_traditional(&probs, AggregatorKind::NumericMean, &FusionConfig::default()).unwrap();
        assert_eq!(numeric, vec![1, 0, 2]);
        // implications reverse the probability order, so the order minimum recovers it
        for agg in ALL_AGGS.iter().skip(1) {
            let got = fuse_traditional(&probs, *agg, &with_rule(DecisionRule::Min)).unwrap();
            assert_eq!(got, numeric, "{agg}");
            let flipped = fuse_traditional(&probs, *agg, &with_rule(DecisionRule::Max)).unwrap();
            assert_eq!(flipped, vec![0, 2, 0], "{agg}");
        }
    }

    #[test]
    fn ties_go_to_class_zero() {
        let probs = cube(1, 3, 3, &[vec![1.0 / 3.0; 3], vec![1.0 / 3.0; 3], vec![1.0 / 3.0; 3]]);
        for agg in ALL_AGGS {
            for rule in [DecisionRule::Max, DecisionRule::Min] {
                assert_eq!(fuse_traditional(&probs, agg, &with_rule(rule)).unwrap(), vec![0]);
            }
        }
    }

    #[test]
    fn dominance_cube() {
        let rows: Vec<Vec<f64>> = [0.9, 0.7, 0.6, 0.8, 0.95]
            .iter()
            .map(|&p| vec![1.0 - p, p])
            .collect();
        let probs = cube(1, 5, 2, &rows);
        for agg in ALL_AGGS {
            let rule = if agg.is_interval() { DecisionRule::Min } else { DecisionRule::Max };
            let cfg = with_rule(rule);
            assert_eq!(fuse_traditional(&probs, agg, &cfg).unwrap(), vec![1], "{agg}");
            let three = [probs.clone(), probs.clone(), probs.clone()];
            assert_eq!(fuse_mff(&three, agg, &cfg).unwrap(), vec![1], "{agg}");
        }
    }

    #[test]
    fn mff_reduces_and_is_symmetric() {
        let a = cube(2, 1, 2, &[vec![0.3, 0.7], vec![0.8, 0.2]]);
        for agg in ALL_AGGS {
            let cfg = FusionConfig::default();
            let single = fuse_traditional(&a, agg, &cfg).unwrap();
            let triple = fuse_mff(&[a.clone(), a.clone(), a.clone()], agg, &cfg).unwrap();
            assert_eq!(single, triple);
            let alone = fuse_mff(std::slice::from_ref(&a), agg, &cfg).unwrap();
            assert_eq!(single, alone);
        }
        let b = cube(2, 2, 2, &[vec![0.6, 0.4], vec![0.45, 0.55], vec![0.1, 0.9], vec![0.5, 0.5]]);
        let c = cube(2, 2, 2, &[vec![0.2, 0.8], vec![0.7, 0.3], vec![0.35, 0.65], vec![0.9, 0.1]]);
        let d = cube(2, 2, 2, &[vec![0.5, 0.5], vec![0.3, 0.7], vec![0.6, 0.4], vec![0.2, 0.8]]);
        for agg in ALL_AGGS {
            let cfg = FusionConfig::default();
            let base = fuse_mff(&[b.clone(), c.clone(), d.clone()], agg, &cfg).unwrap();
            let perm = fuse_mff(&[d.clone(), b.clone(), c.clone()], agg, &cfg).unwrap();
            assert_eq!(base, perm, "{agg}");
        }
        assert!(matches!(
            fuse_mff(&[a, cube(2, 1, 3, &[vec![0.2, 0.3, 0.5], vec![0.1, 0.1, 0.8]])], AggregatorKind::NumericMean, &FusionConfig::default()),
            Err(Error::ShapeError(_))
        ));
    }

    fn random_cube(seed: u64, samples: usize, sources: usize, classes: usize) -> ProbCube {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = Vec::new();
        for _ in 0..samples * sources {
            let raw: Vec<f64> = (0..classes).map(|_| rng.random_range(0.01..1.0)).collect();
            let total: f64 = raw.iter().sum();
            data.extend(raw.iter().map(|v| v / total));
        }
        ProbCube::from_vec(samples, sources, classes, data).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn numeric_mean_matches_direct_loop(seed in 0u64..10_000, classes in 2usize..5) {
            let probs = random_cube(seed, 6, 5, classes);
            let got = fuse_traditional(&probs, AggregatorKind::NumericMean, &FusionConfig::default()).unwrap();
            for (s, &g) in got.iter().enumerate() {
                let mut best = (0, f64::NEG_INFINITY);
                for c in 0..classes {
                    let mut acc = 0.0;
                    for b in 0..5 {
                        acc += probs.get(s, b, c);
                    }
                    if acc / 5.0 > best.1 {
                        best = (c, acc / 5.0);
                    }
                }
                prop_assert_eq!(g, best.0);
            }
        }

        #[test]
        fn duplicating_bands_keeps_decisions(seed in 0u64..10_000) {
            let probs = random_cube(seed, 4, 3, 3);
            let (samples, sources, classes) = probs.shape();
            let mut doubled = Vec::new();
            for s in 0..samples {
                for _ in 0..2 {
                    for b in 0..sources {
                        for c in 0..classes {
                            doubled.push(probs.get(s, b, c));
                        }
                    }
                }
            }
            let doubled = ProbCube::from_vec(samples, 2 * sources, classes, doubled).unwrap();
            // MD and the mean are idempotent and symmetric, so duplication cannot move them
            for agg in [AggregatorKind::NumericMean, ALL_AGGS[4], ALL_AGGS[5]] {
                let cfg = FusionConfig::default();
                let a = fuse_traditional(&probs, agg, &cfg).unwrap();
                let b = fuse_traditional(&doubled, agg, &cfg).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn mp_mn_search() {
        let probs = random_cube(4, 20, 3, 2);
        let labels: Vec<usize> = (0..20).map(|i| i % 2).collect();
        let cfg = FusionConfig::default();
        let agg = AggregatorKind::Md2 { m_p: 1.0, m_n: 1.0 };
        let one = MpMnSearch {
            n_samples: 1,
            ..MpMnSearch::new(9)
        };
        let got = optimize_mp_mn(Framework::Traditional, std::slice::from_ref(&probs), &labels, agg, &cfg, &one).unwrap();
        assert_eq!((got.m_p, got.m_n), one.draws()[0]);

        let search = MpMnSearch::new(3);
        let a = optimize_mp_mn(Framework::Traditional, std::slice::from_ref(&probs), &labels, agg, &cfg, &search).unwrap();
        let b = optimize_mp_mn(Framework::Traditional, std::slice::from_ref(&probs), &labels, agg, &cfg, &search).unwrap();
        assert_eq!(a, b);
        // exhaustive evaluation over the drawn set is the oracle
        let mut best = f64::NEG_INFINITY;
        for (mp, mn) in search.draws() {
            let p = fuse_traditional(&probs, agg.with_mp_mn(mp, mn), &cfg).unwrap();
            best = best.max(accuracy(&p, &labels));
        }
        assert_eq!(a.train_accuracy, best);
        assert!(search.draws().iter().all(|&(p, n)| (1.0..=100.0).contains(&p) && (1.0..=100.0).contains(&n)));

        assert!(optimize_mp_mn(
            Framework::Traditional,
            &[probs],
            &labels,
            AggregatorKind::IvOwa1,
            &cfg,
            &search
        )
        .is_err());
    }
}
