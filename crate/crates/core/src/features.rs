//! Band-limited spectral features and Common Spatial Patterns.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: usize = 50;
pub const DEFAULT_HOP: usize = 25;

/// Variance floor applied before taking logarithms.
pub const VARIANCE_FLOOR: f64 = 1e-12;

/// Ridge added to the composite covariance, relative to its mean eigenvalue.
pub const CSP_REGULARIZATION: f64 = 1e-6;

/// EEG trials: one `channels x samples` matrix per trial, plus labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialTensor {
    trials: Vec<DMatrix<f64>>,
    sample_rate: f64,
    labels: Vec<usize>,
}

impl TrialTensor {
    pub fn new(trials: Vec<DMatrix<f64>>, sample_rate: f64, labels: Vec<usize>) -> Result<Self> {
        if !(sample_rate > 0.0) {
            return Err(Error::ShapeError(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        if labels.len() != trials.len() {
            return Err(Error::ShapeError(format!(
                "{} labels for {} trials",
                labels.len(),
                trials.len()
            )));
        }
        if let Some(first) = trials.first() {
            let shape = first.shape();
            if let Some(bad) = trials.iter().find(|t| t.shape() != shape) {
                return Err(Error::ShapeError(format!(
                    "trial shapes differ: {:?} vs {:?}",
                    shape,
                    bad.shape()
                )));
            }
        }
        Ok(Self {
            trials,
            sample_rate,
            labels,
        })
    }

    pub fn trials(&self) -> &[DMatrix<f64>] {
        &self.trials
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.trials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    pub fn n_channels(&self) -> usize {
        self.trials.first().map_or(0, |t| t.nrows())
    }

    pub fn n_samples(&self) -> usize {
        self.trials.first().map_or(0, |t| t.ncols())
    }

    pub fn n_classes(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Sub-tensor with the given trial indices, in that order.
    pub fn select(&self, idx: &[usize]) -> TrialTensor {
        TrialTensor {
            trials: idx.iter().map(|&i| self.trials[i].clone()).collect(),
            sample_rate: self.sample_rate,
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl BandSpec {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64) -> Result<Self> {
        let name = name.into();
        if !(lo > 0.0 && lo <= hi) {
            return Err(Error::BandOutOfRange {
                name,
                lo,
                hi,
                reason: "need 0 < lo <= hi".into(),
            });
        }
        Ok(Self { name, lo, hi })
    }

    pub fn delta() -> Self {
        Self::preset("delta", 1.0, 3.0)
    }
    pub fn theta() -> Self {
        Self::preset("theta", 4.0, 7.0)
    }
    pub fn alpha() -> Self {
        Self::preset("alpha", 8.0, 13.0)
    }
    pub fn beta() -> Self {
        Self::preset("beta", 14.0, 30.0)
    }
    pub fn all() -> Self {
        Self::preset("all", 1.0, 30.0)
    }
    pub fn smr() -> Self {
        Self::preset("smr", 13.0, 15.0)
    }

    fn preset(name: &str, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            lo,
            hi,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "delta" => Ok(Self::delta()),
            "theta" => Ok(Self::theta()),
            "alpha" => Ok(Self::alpha()),
            "beta" => Ok(Self::beta()),
            "all" => Ok(Self::all()),
            "smr" => Ok(Self::smr()),
            other => Err(Error::Config(format!("unknown band '{other}'"))),
        }
    }

    /// delta, theta, alpha, beta, all.
    pub fn default_set() -> Vec<BandSpec> {
        vec![
            Self::delta(),
            Self::theta(),
            Self::alpha(),
            Self::beta(),
            Self::all(),
        ]
    }

    /// The default set with SMR inserted before `all`.
    pub fn with_smr_set() -> Vec<BandSpec> {
        vec![
            Self::delta(),
            Self::theta(),
            Self::alpha(),
            Self::beta(),
            Self::smr(),
            Self::all(),
        ]
    }
}

/// Moving-window DFT band filter: every window is transformed, bins outside
/// the band are zeroed (together with their conjugate mirrors), and the
/// inverse transforms of all windows are concatenated.
pub struct BandFilter {
    window: usize,
    hop: usize,
    keep: Vec<bool>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl BandFilter {
    pub fn new(band: &BandSpec, sample_rate: f64, window: usize, hop: usize) -> Result<Self> {
        if window < 2 || hop == 0 {
            return Err(Error::Config(format!(
                "window {window} / hop {hop} must be at least 2 / 1"
            )));
        }
        let nyquist = sample_rate / 2.0;
        let out_of_range = |reason: String| Error::BandOutOfRange {
            name: band.name.clone(),
            lo: band.lo,
            hi: band.hi,
            reason,
        };
        if band.hi > nyquist {
            return Err(out_of_range(format!("above Nyquist {nyquist} Hz")));
        }
        let resolution = sample_rate / window as f64;
        let keep: Vec<bool> = (0..window)
            .map(|j| {
                let bin = j.min(window - j);
                let f = bin as f64 * resolution;
                f >= band.lo && f <= band.hi
            })
            .collect();
        if !keep.iter().any(|k| *k) {
            return Err(out_of_range(format!(
                "no DFT bin inside the band at {resolution} Hz resolution (window {window})"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            window,
            hop,
            keep,
            forward: planner.plan_fft_forward(window),
            inverse: planner.plan_fft_inverse(window),
        })
    }

    pub fn n_windows(&self, samples: usize) -> usize {
        if samples < self.window {
            0
        } else {
            (samples - self.window) / self.hop + 1
        }
    }

    /// Filters one channel; output length is `n_windows * window`.
    pub fn apply(&self, signal: &[f64]) -> Vec<f64> {
        let nw = self.n_windows(signal.len());
        let mut out = Vec::with_capacity(nw * self.window);
        let mut buf = vec![Complex::new(0.0, 0.0); self.window];
        let scale = 1.0 / self.window as f64;
        for w in 0..nw {
            let start = w * self.hop;
            for (b, &x) in buf.iter_mut().zip(&signal[start..start + self.window]) {
                *b = Complex::new(x, 0.0);
            }
            self.forward.process(&mut buf);
            for (b, keep) in buf.iter_mut().zip(&self.keep) {
                if !keep {
                    *b = Complex::new(0.0, 0.0);
                }
            }
            self.inverse.process(&mut buf);
            out.extend(buf.iter().map(|c| c.re * scale));
        }
        out
    }
}

pub fn band_features(trials: &TrialTensor, band: &BandSpec) -> Result<TrialTensor> {
    band_features_with(trials, band, DEFAULT_WINDOW, DEFAULT_HOP)
}

pub fn band_features_with(
    trials: &TrialTensor,
    band: &BandSpec,
    window: usize,
    hop: usize,
) -> Result<TrialTensor> {
    let samples = trials.n_samples();
    if samples < window {
        return Err(Error::TooShort {
            samples,
            needed: window,
        });
    }
    let filter = BandFilter::new(band, trials.sample_rate(), window, hop)?;
    let out_len = filter.n_windows(samples) * window;
    let filtered = trials
        .trials()
        .iter()
        .map(|t| {
            let mut m = DMatrix::zeros(t.nrows(), out_len);
            for (c, row) in t.row_iter().enumerate() {
                let x: Vec<f64> = row.iter().copied().collect();
                for (j, v) in filter.apply(&x).into_iter().enumerate() {
                    m[(c, j)] = v;
                }
            }
            m
        })
        .collect();
    TrialTensor::new(filtered, trials.sample_rate(), trials.labels().to_vec())
}

/// Spatial filters fitted one-vs-rest.
#[derive(Debug, Clone, PartialEq)]
pub struct CspModel {
    /// One `components x channels` projection per class pairing.
    pub projections: Vec<DMatrix<f64>>,
    /// Generalized eigenvalues of the kept components, per pairing.
    pub eigenvalues: Vec<Vec<f64>>,
    pub n_components: usize,
    pub n_channels: usize,
}

impl CspModel {
    pub fn n_features(&self) -> usize {
        self.projections.iter().map(|p| p.nrows()).sum()
    }
}

/// Splits `total` as evenly as possible over `parts`, larger shares first.
pub fn split_budget(total: usize, parts: usize) -> Vec<usize> {
    (0..parts)
        .map(|i| total / parts + usize::from(i < total % parts))
        .collect()
}

fn trial_covariance(t: &DMatrix<f64>) -> DMatrix<f64> {
    let n = t.ncols().max(1) as f64;
    let mut centered = t.clone();
    for mut row in centered.row_iter_mut() {
        let mean = row.mean();
        row.add_scalar_mut(-mean);
    }
    &centered * centered.transpose() / n
}

fn mean_covariance<'a>(trials: impl Iterator<Item = &'a DMatrix<f64>>, ch: usize) -> DMatrix<f64> {
    let mut acc = DMatrix::zeros(ch, ch);
    let mut count = 0usize;
    for t in trials {
        acc += trial_covariance(t);
        count += 1;
    }
    acc / count.max(1) as f64
}

/// Solves `C_a v = lambda (C_a + C_b) v` by whitening the composite covariance.
///
/// Returns eigenvalues in descending order and the matching filters as rows.
pub fn generalized_eigen(ca: &DMatrix<f64>, cb: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let ch = ca.nrows();
    let mut composite = ca + cb;
    let trace = composite.trace();
    if !(trace > 0.0) || !trace.is_finite() {
        return Err(Error::SingularCovariance(format!(
            "composite covariance has trace {trace}"
        )));
    }
    let ridge = CSP_REGULARIZATION * trace / ch as f64;
    for i in 0..ch {
        composite[(i, i)] += ridge;
    }
    let eig = SymmetricEigen::new(composite);
    let floor = ridge * 1e-3;
    if eig.eigenvalues.iter().any(|&l| !(l > floor)) {
        return Err(Error::SingularCovariance(
            "composite covariance not positive definite after regularization".into(),
        ));
    }
    // whitening P = Lambda^{-1/2} U^T
    let inv_sqrt = DVector::from_iterator(ch, eig.eigenvalues.iter().map(|l| 1.0 / l.sqrt()));
    let whitening = DMatrix::from_diagonal(&inv_sqrt) * eig.eigenvectors.transpose();
    let s = &whitening * ca * whitening.transpose();
    let s = (&s + s.transpose()) * 0.5;
    let inner = SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..ch).collect();
    order.sort_by(|&i, &j| inner.eigenvalues[j].total_cmp(&inner.eigenvalues[i]));
    let values = order.iter().map(|&i| inner.eigenvalues[i]).collect();
    let mut filters = DMatrix::zeros(ch, ch);
    for (r, &i) in order.iter().enumerate() {
        let w = inner.eigenvectors.column(i).transpose() * &whitening;
        filters.row_mut(r).copy_from(&w);
    }
    Ok((values, filters))
}

/// Fits CSP filters; with more than two classes one pairing per class
/// (class vs rest) shares the component budget.
pub fn csp_fit(trials: &TrialTensor, n_components: usize) -> Result<CspModel> {
    if n_components == 0 {
        return Err(Error::Config("CSP needs at least one component".into()));
    }
    let n_classes = trials.n_classes();
    let mut counts = vec![0usize; n_classes];
    for &l in trials.labels() {
        counts[l] += 1;
    }
    let present = counts.iter().filter(|&&c| c > 0).count();
    if present < 2 || counts.contains(&1) {
        return Err(Error::NotEnoughClasses(format!(
            "class counts {counts:?}"
        )));
    }
    let ch = trials.n_channels();
    let pairings: Vec<usize> = if n_classes == 2 {
        vec![0]
    } else {
        (0..n_classes).filter(|&c| counts[c] > 0).collect()
    };
    let budgets = split_budget(n_components, pairings.len());
    let mut projections = Vec::new();
    let mut eigenvalues = Vec::new();
    for (&class, &budget) in pairings.iter().zip(&budgets) {
        let ca = mean_covariance(
            trials
                .trials()
                .iter()
                .zip(trials.labels())
                .filter(|(_, &l)| l == class)
                .map(|(t, _)| t),
            ch,
        );
        let cb = mean_covariance(
            trials
                .trials()
                .iter()
                .zip(trials.labels())
                .filter(|(_, &l)| l != class)
                .map(|(t, _)| t),
            ch,
        );
        let (values, filters) = generalized_eigen(&ca, &cb)?;
        // alternate between the two ends of the spectrum
        let take = budget.min(ch);
        let picks: Vec<usize> = (0..take)
            .map(|i| if i % 2 == 0 { i / 2 } else { ch - 1 - i / 2 })
            .collect();
        let mut proj = DMatrix::zeros(take, ch);
        for (r, &p) in picks.iter().enumerate() {
            proj.row_mut(r).copy_from(&filters.row(p));
        }
        eigenvalues.push(picks.iter().map(|&p| values[p]).collect());
        projections.push(proj);
    }
    Ok(CspModel {
        projections,
        eigenvalues,
        n_components,
        n_channels: ch,
    })
}

/// Log-variance of every projected component, pairings concatenated.
pub fn csp_transform(model: &CspModel, trials: &TrialTensor) -> Result<DMatrix<f64>> {
    if trials.n_channels() != model.n_channels {
        return Err(Error::ChannelMismatch {
            expected: model.n_channels,
            got: trials.n_channels(),
        });
    }
    let nf = model.n_features();
    let mut out = DMatrix::zeros(trials.len(), nf);
    for (r, t) in trials.trials().iter().enumerate() {
        let mut col = 0;
        for proj in &model.projections {
            let z = proj * t;
            for row in z.row_iter() {
                let n = row.len().max(1) as f64;
                let mean = row.mean();
                let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
                out[(r, col)] = var.max(VARIANCE_FLOOR).ln();
                col += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;
    use std::f64::consts::PI;

    const FS: f64 = 100.0;

    fn tone(freq: f64, samples: usize, phase: f64) -> Vec<f64> {
        (0..samples)
            .map(|i| (2.0 * PI * freq * i as f64 / FS + phase).sin())
            .collect()
    }

    fn mean_power(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
    }

    fn single(signal: Vec<f64>) -> TrialTensor {
        let n = signal.len();
        TrialTensor::new(vec![DMatrix::from_row_slice(1, n, &signal)], FS, vec![0]).unwrap()
    }

    /// Mean power of the concatenated raw windows, the reference for ratios.
    fn windowed_power(x: &[f64]) -> f64 {
        let mut acc = Vec::new();
        let mut s = 0;
        while s + DEFAULT_WINDOW <= x.len() {
            acc.extend_from_slice(&x[s..s + DEFAULT_WINDOW]);
            s += DEFAULT_HOP;
        }
        mean_power(&acc)
    }

    #[test]
    fn tone_energy_in_and_out_of_band() {
        let x = tone(10.0, 1000, 0.3);
        let input = windowed_power(&x);
        let a = band_features(&single(x.clone()), &BandSpec::alpha()).unwrap();
        let ratio = mean_power(a.trials()[0].as_slice()) / input;
        assert!(ratio >= 0.9, "alpha ratio {ratio}");
        let d = band_features(&single(x), &BandSpec::delta()).unwrap();
        let ratio = mean_power(d.trials()[0].as_slice()) / input;
        assert!(ratio <= 0.05, "delta ratio {ratio}");
    }

    #[test]
    fn zero_signal_and_errors() {
        let z = band_features(&single(vec![0.0; 200]), &BandSpec::beta()).unwrap();
        assert!(z.trials()[0].iter().all(|v| *v == 0.0));
        assert!(matches!(
            band_features(&single(vec![0.0; 20]), &BandSpec::beta()),
            Err(Error::TooShort { .. })
        ));
        let high = BandSpec::new("high", 40.0, 60.0).unwrap();
        assert!(matches!(
            band_features(&single(vec![0.0; 200]), &high),
            Err(Error::BandOutOfRange { .. })
        ));
        // 5 Hz resolution at 250 Hz leaves the delta band empty
        let t = TrialTensor::new(vec![DMatrix::zeros(1, 200)], 250.0, vec![0]).unwrap();
        assert!(matches!(
            band_features(&t, &BandSpec::delta()),
            Err(Error::BandOutOfRange { .. })
        ));
        assert!(BandSpec::new("bad", 0.0, 3.0).is_err());
    }

    #[test]
    fn band_filter_is_linear_and_bands_partition_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..400).map(|_| rng.sample(StandardNormal)).collect();
        let y: Vec<f64> = (0..400).map(|_| rng.sample(StandardNormal)).collect();
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        for band in BandSpec::with_smr_set() {
            let fx = band_features(&single(x.clone()), &band).unwrap();
            let fy = band_features(&single(y.clone()), &band).unwrap();
            let fs = band_features(&single(sum.clone()), &band).unwrap();
            let diff = &fs.trials()[0] - (&fx.trials()[0] + &fy.trials()[0]);
            assert!(diff.amax() < 1e-9);
        }
        let energy = |b: BandSpec| {
            band_features(&single(x.clone()), &b).unwrap().trials()[0]
                .iter()
                .map(|v| v * v)
                .sum::<f64>()
        };
        let parts: f64 = [BandSpec::delta(), BandSpec::theta(), BandSpec::alpha(), BandSpec::beta()]
            .into_iter()
            .map(energy)
            .sum();
        assert!(parts <= energy(BandSpec::all()) + 1e-6);
    }

    fn two_class_set(seed: u64, n_per_class: usize, boost: f64) -> TrialTensor {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut trials = Vec::new();
        let mut labels = Vec::new();
        for class in 0..2 {
            for _ in 0..n_per_class {
                let mut m = DMatrix::zeros(4, 200);
                for c in 0..4 {
                    let scale = if class == 0 && c == 1 { boost.sqrt() } else { 1.0 };
                    for s in 0..200 {
                        let v: f64 = rng.sample(StandardNormal);
                        m[(c, s)] = v * scale;
                    }
                }
                trials.push(m);
                labels.push(class);
            }
        }
        TrialTensor::new(trials, FS, labels).unwrap()
    }

    #[test]
    fn csp_finds_the_high_variance_channel() {
        let data = two_class_set(11, 30, 10.0);
        let model = csp_fit(&data, 4).unwrap();
        let feats = csp_transform(&model, &data).unwrap();
        assert!(feats.iter().all(|v| v.is_finite()));
        let var = |class: usize| {
            let rows: Vec<f64> = (0..data.len())
                .filter(|&i| data.labels()[i] == class)
                .map(|i| feats[(i, 0)].exp())
                .collect();
            rows.iter().sum::<f64>() / rows.len() as f64
        };
        assert!(var(0) / var(1) >= 5.0, "ratio {}", var(0) / var(1));

        // oracle: generalized eigenvalues of C_a (C_a + C_b)^{-1} from a generic solver
        let ca = mean_covariance(data.trials()[..30].iter(), 4);
        let cb = mean_covariance(data.trials()[30..].iter(), 4);
        let composite = &ca + &cb;
        let m = composite.clone().try_inverse().unwrap() * &ca;
        let mut oracle: Vec<f64> = m.complex_eigenvalues().iter().map(|c| c.re).collect();
        oracle.sort_by(|a, b| b.total_cmp(a));
        let (values, _) = generalized_eigen(&ca, &cb).unwrap();
        for (v, o) in values.iter().zip(&oracle) {
            assert!((v - o).abs() < 1e-5, "{v} vs {o}");
        }
    }

    #[test]
    fn csp_identical_classes_and_square_projection() {
        let c = DMatrix::<f64>::identity(3, 3) * 2.0;
        let (values, _) = generalized_eigen(&c, &c).unwrap();
        assert!(values.iter().all(|v| (v - 0.5).abs() < 1e-5));

        let data = two_class_set(5, 10, 4.0);
        let model = csp_fit(&data, 4).unwrap();
        let p = &model.projections[0];
        assert_eq!(p.shape(), (4, 4));
        assert!(p.determinant().abs() > 1e-8);
    }

    #[test]
    fn csp_transform_scaling_and_floor() {
        let data = two_class_set(2, 10, 4.0);
        let model = csp_fit(&data, 2).unwrap();
        let doubled = TrialTensor::new(
            data.trials().iter().map(|t| t * 2.0).collect(),
            FS,
            data.labels().to_vec(),
        )
        .unwrap();
        let a = csp_transform(&model, &data).unwrap();
        let b = csp_transform(&model, &doubled).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((y - x - 4f64.ln()).abs() < 1e-9);
        }
        let zero = TrialTensor::new(vec![DMatrix::zeros(4, 200)], FS, vec![0]).unwrap();
        let z = csp_transform(&model, &zero).unwrap();
        assert!(z.iter().all(|v| *v == VARIANCE_FLOOR.ln()));

        let narrow = TrialTensor::new(vec![DMatrix::zeros(3, 200)], FS, vec![0]).unwrap();
        assert!(matches!(
            csp_transform(&model, &narrow),
            Err(Error::ChannelMismatch { .. })
        ));
    }

    #[test]
    fn csp_invariances() {
        let data = two_class_set(8, 12, 6.0);
        let model = csp_fit(&data, 4).unwrap();
        let feats = csp_transform(&model, &data).unwrap();

        // trial order does not change per-trial features
        let rev: Vec<usize> = (0..data.len()).rev().collect();
        let feats_rev = csp_transform(&model, &data.select(&rev)).unwrap();
        for (i, &j) in rev.iter().enumerate() {
            assert_eq!(feats.row(j), feats_rev.row(i));
        }

        // consistent channel relabeling permutes filter columns, signs aside
        let perm = [2usize, 0, 3, 1];
        let permuted = TrialTensor::new(
            data.trials()
                .iter()
                .map(|t| DMatrix::from_fn(4, t.ncols(), |r, c| t[(perm[r], c)]))
                .collect(),
            FS,
            data.labels().to_vec(),
        )
        .unwrap();
        let model_p = csp_fit(&permuted, 4).unwrap();
        let (a, b) = (&model.projections[0], &model_p.projections[0]);
        for r in 0..4 {
            let sign = if (a[(r, perm[0])] * b[(r, 0)]) < 0.0 { -1.0 } else { 1.0 };
            for c in 0..4 {
                assert!((a[(r, perm[c])] - sign * b[(r, c)]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn multiclass_budget_and_errors() {
        assert_eq!(split_budget(25, 4), vec![7, 6, 6, 6]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trials: Vec<_> = (0..16)
            .map(|_| DMatrix::from_fn(8, 100, |_, _| rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let labels: Vec<usize> = (0..16).map(|i| i % 4).collect();
        let data = TrialTensor::new(trials, FS, labels).unwrap();
        let model = csp_fit(&data, 25).unwrap();
        let sizes: Vec<usize> = model.projections.iter().map(|p| p.nrows()).collect();
        assert_eq!(sizes, vec![7, 6, 6, 6]);

        let one_class = data.select(&[0, 4, 8]);
        assert!(matches!(csp_fit(&one_class, 2), Err(Error::NotEnoughClasses(_))));
        let zeros = TrialTensor::new(vec![DMatrix::zeros(2, 60); 4], FS, vec![0, 0, 1, 1]).unwrap();
        assert!(matches!(csp_fit(&zeros, 2), Err(Error::SingularCovariance(_))));
    }
}
