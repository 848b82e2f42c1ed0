//! Flat `key = value` experiment configuration with dotted keys.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::classifiers::{ClassifierKind, DEFAULT_KNN_K, DEFAULT_QDA_REG};
use crate::error::{Error, Result};
use crate::features::{BandSpec, DEFAULT_HOP, DEFAULT_WINDOW};
use crate::fusion::{AggregatorKind, DecisionRule, Framework, FusionConfig, MpMnSearch};
use crate::implication::{ImplicationKind, DEFAULT_Y_WIDTH};
use crate::interval::OrderParams;

use super::synth::SynthParams;

pub const DEFAULT_PARTITIONS: usize = 20;
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.5;
pub const DEFAULT_CSP_COMPONENTS: usize = 25;

/// Where trials come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Manifest(PathBuf),
    Synth(SynthParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub frameworks: Vec<Framework>,
    pub aggregators: Vec<AggregatorKind>,
    pub implications: Vec<ImplicationKind>,
    pub order: OrderParams,
    pub decision: DecisionRule,
    pub y_width: f64,
    pub bands: Vec<BandSpec>,
    pub window: usize,
    pub hop: usize,
    pub n_csp: usize,
    pub partitions: usize,
    pub train_fraction: f64,
    pub seed: u64,
    /// The single classifier of the Traditional framework.
    pub classifier: ClassifierKind,
    /// Classifier types fused by MFF.
    pub mff_classifiers: Vec<ClassifierKind>,
    /// `(M_p, M_n)` used when the search is off.
    pub md_params: (f64, f64),
    pub md_search: Option<MpMnSearch>,
    /// Channel subset for manifest data, by name.
    pub channels: Option<Vec<String>>,
    pub data: DataSource,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            frameworks: vec![Framework::Traditional],
            aggregators: vec![AggregatorKind::Md2 { m_p: 1.0, m_n: 1.0 }],
            implications: vec![ImplicationKind::Reichenbach],
            order: OrderParams::default(),
            decision: DecisionRule::Max,
            y_width: DEFAULT_Y_WIDTH,
            bands: BandSpec::default_set(),
            window: DEFAULT_WINDOW,
            hop: DEFAULT_HOP,
            n_csp: DEFAULT_CSP_COMPONENTS,
            partitions: DEFAULT_PARTITIONS,
            train_fraction: DEFAULT_TRAIN_FRACTION,
            seed: 0,
            classifier: ClassifierKind::Lda,
            mff_classifiers: ClassifierKind::DEFAULT_SET.to_vec(),
            md_params: (1.0, 1.0),
            md_search: Some(MpMnSearch::new(0)),
            channels: None,
            data: DataSource::Synth(SynthParams::default()),
        }
    }
}

impl ExperimentConfig {
    pub fn fusion(&self, implication: ImplicationKind) -> FusionConfig {
        FusionConfig {
            implication,
            y_width: self.y_width,
            order: self.order,
            decision: self.decision,
        }
    }

    /// Reads a config file; relative paths resolve against its directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let entries = parse_key_values(&text, path)?;
        Self::from_entries(entries, base)
    }

    /// Builds a config from `(key, value)` pairs; later pairs override earlier ones.
    pub fn from_entries<I, K, V>(entries: I, base: &Path) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            map.insert(k.into().trim().to_string(), v.into().trim().to_string());
        }
        Builder { map, base }.build()
    }
}

/// Splits `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str, path: &Path) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::ParseError {
            path: path.to_path_buf(),
            line: i + 1,
            column: 1,
            message: format!("expected key = value, got '{line}'"),
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Parses a `key=value` command-line override.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| Error::Config(format!("override '{s}' is not key=value")))
}

struct Builder<'a> {
    map: BTreeMap<String, String>,
    base: &'a Path,
}

fn list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got '{v}'"))),
    }
}

/// A band name, or `name:lo:hi` for a custom band.
fn parse_band(s: &str) -> Result<BandSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [name] => BandSpec::by_name(name),
        [name, lo, hi] => BandSpec::new(*name, parse_num("bands", lo)?, parse_num("bands", hi)?),
        _ => Err(Error::Config(format!("bad band '{s}'"))),
    }
}

impl Builder<'_> {
    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn num<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        match self.take(key) {
            Some(v) => parse_num(key, &v),
            None => Ok(default),
        }
    }

    fn build(mut self) -> Result<ExperimentConfig> {
        let d = ExperimentConfig::default();
        let frameworks = match self.take("framework") {
            Some(v) => list(&v).map(str::parse).collect::<Result<Vec<_>>>()?,
            None => d.frameworks,
        };
        let (m_p, m_n) = (self.num("md.m_p", 1.0)?, self.num("md.m_n", 1.0)?);
        let aggregators = match self.take("aggregator") {
            Some(v) => list(&v)
                .map(|s| s.parse::<AggregatorKind>().map(|a| a.with_mp_mn(m_p, m_n)))
                .collect::<Result<Vec<_>>>()?,
            None => d.aggregators.iter().map(|a| a.with_mp_mn(m_p, m_n)).collect(),
        };
        let implications = match self.take("implication") {
            Some(v) => list(&v).map(str::parse).collect::<Result<Vec<_>>>()?,
            None => d.implications,
        };
        let order = OrderParams::new(
            self.num("order.alpha", d.order.alpha())?,
            self.num("order.beta", d.order.beta())?,
        )?;
        let decision = match self.take("decision") {
            Some(v) => v.parse()?,
            None => d.decision,
        };
        let y_width: f64 = self.num("y_width", d.y_width)?;
        if !(0.0..=1.0).contains(&y_width) {
            return Err(Error::ParamOutOfRange {
                name: "y_width",
                value: y_width,
            });
        }
        let bands = match self.take("bands") {
            Some(v) => match v.as_str() {
                "default" => BandSpec::default_set(),
                "with_smr" => BandSpec::with_smr_set(),
                _ => list(&v).map(parse_band).collect::<Result<Vec<_>>>()?,
            },
            None => d.bands,
        };
        let window = self.num("window", d.window)?;
        let hop = self.num("hop", d.hop)?;
        let n_csp = self.num("csp.components", d.n_csp)?;
        let partitions = self.num("partitions", d.partitions)?;
        let train_fraction: f64 = self.num("train_fraction", d.train_fraction)?;
        let seed = self.num("seed", d.seed)?;

        let knn_k = self.num("knn.k", DEFAULT_KNN_K)?;
        let qda_reg = self.num("qda.reg", DEFAULT_QDA_REG)?;
        let resolve = |kind: ClassifierKind| match kind {
            ClassifierKind::Knn { .. } => ClassifierKind::Knn { k: knn_k },
            ClassifierKind::Qda { .. } => ClassifierKind::Qda { reg: qda_reg },
            lda => lda,
        };
        let classifier = resolve(match self.take("classifier") {
            Some(v) => v.parse()?,
            None => d.classifier,
        });
        let mff_classifiers = match self.take("mff.classifiers") {
            Some(v) => list(&v)
                .map(|s| s.parse().map(resolve))
                .collect::<Result<Vec<_>>>()?,
            None => d.mff_classifiers.into_iter().map(resolve).collect(),
        };

        let search_on = match self.take("md.search") {
            Some(v) => parse_bool("md.search", &v)?,
            None => true,
        };
        let search = MpMnSearch {
            n_samples: self.num("md.search.samples", MpMnSearch::DEFAULT_SAMPLES)?,
            lo: self.num("md.search.lo", MpMnSearch::DEFAULT_RANGE.0)?,
            hi: self.num("md.search.hi", MpMnSearch::DEFAULT_RANGE.1)?,
            seed: self.num("md.search.seed", seed)?,
        };
        let channels = self
            .take("channels")
            .map(|v| list(&v).map(String::from).collect::<Vec<_>>());

        let sd = SynthParams::default();
        let synth = SynthParams {
            trials_per_class: self.num("synth.trials_per_class", sd.trials_per_class)?,
            classes: self.num("synth.classes", sd.classes)?,
            channels: self.num("synth.channels", sd.channels)?,
            samples: self.num("synth.samples", sd.samples)?,
            sample_rate: self.num("synth.sample_rate", sd.sample_rate)?,
            snr: self.num("synth.snr", sd.snr)?,
            seed: self.num("synth.seed", seed)?,
        };
        let data = match self.take("manifest") {
            Some(p) => DataSource::Manifest(self.base.join(p)),
            None => DataSource::Synth(synth),
        };

        if let Some(unknown) = self.map.keys().next() {
            return Err(Error::Config(format!("unknown config key '{unknown}'")));
        }
        if frameworks.is_empty() || aggregators.is_empty() || implications.is_empty() || bands.is_empty() {
            return Err(Error::Config(
                "framework, aggregator, implication and bands need at least one entry".into(),
            ));
        }
        if mff_classifiers.is_empty() {
            return Err(Error::Config("mff.classifiers is empty".into()));
        }
        if n_csp == 0 {
            return Err(Error::Config("csp.components must be at least 1".into()));
        }
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::Config(format!(
                "train_fraction must lie in (0, 1), got {train_fraction}"
            )));
        }
        if !(m_p > 0.0 && m_n > 0.0 && m_p.is_finite() && m_n.is_finite()) {
            return Err(Error::Config(format!(
                "md.m_p = {m_p} and md.m_n = {m_n} must be positive"
            )));
        }
        Ok(ExperimentConfig {
            frameworks,
            aggregators,
            implications,
            order,
            decision,
            y_width,
            bands,
            window,
            hop,
            n_csp,
            partitions,
            train_fraction,
            seed,
            classifier,
            mff_classifiers,
            md_params: (m_p, m_n),
            md_search: search_on.then_some(search),
            channels,
            data,
        })
    }
}
