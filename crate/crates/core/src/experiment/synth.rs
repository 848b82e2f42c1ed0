//! Seeded synthetic motor-imagery-like trials.
//!
//! Each class adds a sinusoid at its own frequency on its own channel pair,
//! on top of unit-variance white noise. `snr` is the linear ratio of the
//! tone's power to the noise power on the modulated channels.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::features::TrialTensor;

/// Tone frequency per class, in Hz.
pub const CLASS_FREQUENCIES: [f64; 4] = [10.0, 22.0, 6.0, 27.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub trials_per_class: usize,
    pub classes: usize,
    pub channels: usize,
    pub samples: usize,
    pub sample_rate: f64,
    /// Linear signal-to-noise power ratio; `f64::INFINITY` drops the noise.
    pub snr: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            trials_per_class: 40,
            classes: 2,
            channels: 4,
            samples: 500,
            sample_rate: 100.0,
            snr: 0.5,
            seed: 0,
        }
    }
}

/// Channels carrying class `c`'s tone: `2c` and `2c + 1`, wrapped.
pub fn class_channels(class: usize, channels: usize) -> [usize; 2] {
    [(2 * class) % channels, (2 * class + 1) % channels]
}

pub fn synth_generate(p: &SynthParams) -> Result<TrialTensor> {
    if p.trials_per_class == 0 || p.channels == 0 || p.samples == 0 {
        return Err(Error::Config("synthetic dimensions must be positive".into()));
    }
    if !(2..=CLASS_FREQUENCIES.len()).contains(&p.classes) {
        return Err(Error::Config(format!(
            "synthetic data supports 2 to {} classes, got {}",
            CLASS_FREQUENCIES.len(),
            p.classes
        )));
    }
    if !(p.snr >= 0.0) {
        return Err(Error::Config(format!("snr must be nonnegative, got {}", p.snr)));
    }
    if CLASS_FREQUENCIES[..p.classes]
        .iter()
        .any(|&f| f >= p.sample_rate / 2.0)
    {
        return Err(Error::Config(format!(
            "sample rate {} Hz cannot carry the class tones",
            p.sample_rate
        )));
    }
    let (amplitude, noise) = if p.snr.is_infinite() {
        (1.0, 0.0)
    } else {
        ((2.0 * p.snr).sqrt(), 1.0)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut trials = Vec::with_capacity(p.trials_per_class * p.classes);
    let mut labels = Vec::with_capacity(trials.capacity());
    // classes interleaved so any prefix is roughly balanced
    for _ in 0..p.trials_per_class {
        for (class, &freq) in CLASS_FREQUENCIES[..p.classes].iter().enumerate() {
            let mut m = DMatrix::zeros(p.channels, p.samples);
            for v in m.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                *v = noise * z;
            }
            for ch in class_channels(class, p.channels) {
                let phase = rng.random_range(0.0..2.0 * PI);
                for s in 0..p.samples {
                    let t = s as f64 / p.sample_rate;
                    m[(ch, s)] += amplitude * (2.0 * PI * freq * t + phase).sin();
                }
            }
            trials.push(m);
            labels.push(class);
        }
    }
    TrialTensor::new(trials, p.sample_rate, labels)
}
