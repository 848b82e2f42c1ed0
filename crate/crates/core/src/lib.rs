//! Interval-valued moderate deviation aggregation functions and the
//! ensemble-fusion motor-imagery BCI pipelines built on them.
//!
//! The math core (`interval`, `implication`, `deviation`, `iv_deviation`,
//! `wd_mean`, `owa`) is independent of the signal-processing side
//! (`features`, `classifiers`, `fusion`, `experiment`).

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifiers;
pub mod deviation;
pub mod error;
pub mod experiment;
pub mod features;
pub mod fusion;
pub mod implication;
pub mod interval;
pub mod iv_deviation;
pub mod owa;
pub mod selftest;
pub mod wd_mean;

pub use deviation::{
    md_eval, md_eval_eps_delta, width_combine, EpsDeltaSpec, ModDevSpec, RefKind,
    ScalarDeviation, WidthCombiner,
};
pub use error::{Error, ErrorClass, Result};
pub use implication::{build_interval, implication, ImplicationKind};
pub use interval::{
    cmp_alpha_beta, from_ka_width, weighted_interval_sum, OrderParams, RealInterval,
    UnitInterval,
};
pub use iv_deviation::{iv_md_eval, IntervalDeviation, IvDeviation, IvModDevSpec, SignDeviation};
pub use owa::{iv_owa, quantifier_weights, QuantifierParams, WeightVector};
pub use wd_mean::{
    bisection_oracle, d_mean_generic, solve_ka, switch_point, wd_mean, wd_mean_ordered,
    SwitchPoint, WdMeanConfig,
};
pub use classifiers::{fit, predict_proba, ClassifierKind, TrainedModel};
pub use experiment::{
    load_dataset, partition, run_experiment, synth_generate, ExperimentConfig, ResultTable,
    SynthParams,
};
pub use features::{band_features, csp_fit, csp_transform, BandSpec, CspModel, TrialTensor};
pub use fusion::{
    fuse_mff, fuse_traditional, intervalize, optimize_mp_mn, AggregatorKind, DecisionRule,
    Framework, FusionConfig, IntervalCube, ProbCube, ScoreCube,
};
