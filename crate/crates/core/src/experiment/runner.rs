//! Partitioned train/test runs of both fusion frameworks.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classifiers::{fit, predict_proba, ClassifierKind};
use crate::error::{Error, Result};
use crate::features::{band_features_with, csp_fit, csp_transform, TrialTensor};
use crate::fusion::{fuse, optimize_mp_mn, Framework, ProbCube};

use super::config::ExperimentConfig;
use super::dataset::Subject;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified splits; partition `p` shuffles with seed `seed + p`.
pub fn partition(labels: &[usize], n_partitions: usize, fraction: f64, seed: u64) -> Result<Vec<Split>> {
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    if let Some((c, members)) = by_class.iter().enumerate().find(|(_, m)| m.len() < 2) {
        return Err(Error::NotEnoughTrials(format!(
            "class {c} has {} trials, need at least 2",
            members.len()
        )));
    }
    Ok((0..n_partitions)
        .map(|p| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(p as u64));
            let mut train = Vec::new();
            let mut test = Vec::new();
            for members in &by_class {
                let mut shuffled = members.clone();
                shuffled.shuffle(&mut rng);
                let n_train = ((members.len() as f64 * fraction).round() as usize).clamp(1, members.len() - 1);
                train.extend_from_slice(&shuffled[..n_train]);
                test.extend_from_slice(&shuffled[n_train..]);
            }
            train.sort_unstable();
            test.sort_unstable();
            Split { train, test }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub subject: String,
    pub framework: String,
    pub aggregator: String,
    pub implication: String,
    pub partition: usize,
    pub correct: usize,
    pub total: usize,
}

impl ResultRow {
    pub fn accuracy(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.correct as f64 / self.total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub framework: String,
    pub aggregator: String,
    pub implication: String,
    pub n: usize,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

pub const REPORT_HEADER: &str = "subject,framework,aggregator,implication,partition,accuracy";
pub const SUMMARY_HEADER: &str = "framework,aggregator,implication,n,mean,std";

impl ResultTable {
    /// Mean and sample standard deviation per (framework, aggregator, implication),
    /// in order of first appearance.
    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut keys: Vec<(String, String, String)> = Vec::new();
        for r in &self.rows {
            let k = (r.framework.clone(), r.aggregator.clone(), r.implication.clone());
            if !keys.contains(&k) {
                keys.push(k);
            }
        }
        keys.into_iter()
            .map(|(framework, aggregator, implication)| {
                let accs: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|r| r.framework == framework && r.aggregator == aggregator && r.implication == implication)
                    .map(ResultRow::accuracy)
                    .collect();
                let n = accs.len();
                let mean = accs.iter().sum::<f64>() / n as f64;
                let std = if n > 1 {
                    (accs.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
                } else {
                    0.0
                };
                SummaryRow {
                    framework,
                    aggregator,
                    implication,
                    n,
                    mean,
                    std,
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(REPORT_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.subject,
                r.framework,
                r.aggregator,
                r.implication,
                r.partition,
                r.accuracy()
            );
        }
        out.push('\n');
        out.push_str(SUMMARY_HEADER);
        out.push('\n');
        for s in self.summary() {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.6},{:.6}",
                s.framework, s.aggregator, s.implication, s.n, s.mean, s.std
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Per-partition scores: one cube per classifier type, sources = bands.
struct PartitionScores {
    train: Vec<ProbCube>,
    test: Vec<ProbCube>,
}

fn classifier_list(cfg: &ExperimentConfig) -> Vec<ClassifierKind> {
    let mut kinds = Vec::new();
    for fw in &cfg.frameworks {
        let wanted: &[ClassifierKind] = match fw {
            Framework::Traditional => std::slice::from_ref(&cfg.classifier),
            Framework::Mff => &cfg.mff_classifiers,
        };
        for k in wanted {
            if !kinds.contains(k) {
                kinds.push(*k);
            }
        }
    }
    kinds
}

fn score_partition(
    banded: &[TrialTensor],
    split: &Split,
    kinds: &[ClassifierKind],
    n_csp: usize,
) -> Result<PartitionScores> {
    let mut train_probs: Vec<Vec<DMatrix<f64>>> = vec![Vec::new(); kinds.len()];
    let mut test_probs: Vec<Vec<DMatrix<f64>>> = vec![Vec::new(); kinds.len()];
    for band in banded {
        let train = band.select(&split.train);
        let test = band.select(&split.test);
        let csp = csp_fit(&train, n_csp)?;
        let f_train = csp_transform(&csp, &train)?;
        let f_test = csp_transform(&csp, &test)?;
        for (i, &kind) in kinds.iter().enumerate() {
            let model = fit(kind, &f_train, train.labels())?;
            train_probs[i].push(predict_proba(&model, &f_train)?);
            test_probs[i].push(predict_proba(&model, &f_test)?);
        }
    }
    Ok(PartitionScores {
        train: train_probs.iter().map(|p| ProbCube::from_sources(p)).collect::<Result<_>>()?,
        test: test_probs.iter().map(|p| ProbCube::from_sources(p)).collect::<Result<_>>()?,
    })
}

fn run_subject(cfg: &ExperimentConfig, subject: &Subject, table: &mut ResultTable) -> Result<()> {
    let data = &subject.data;
    let banded = cfg
        .bands
        .iter()
        .map(|b| band_features_with(data, b, cfg.window, cfg.hop))
        .collect::<Result<Vec<_>>>()?;
    let splits = partition(data.labels(), cfg.partitions, cfg.train_fraction, cfg.seed)?;
    let kinds = classifier_list(cfg);
    for (p, split) in splits.iter().enumerate() {
        let annotate = |source: Error| Error::InPartition {
            subject: subject.name.clone(),
            partition: p,
            source: Box::new(source),
        };
        let scores = score_partition(&banded, split, &kinds, cfg.n_csp).map_err(annotate)?;
        let train_labels: Vec<usize> = split.train.iter().map(|&i| data.labels()[i]).collect();
        let test_labels: Vec<usize> = split.test.iter().map(|&i| data.labels()[i]).collect();
        for &framework in &cfg.frameworks {
            let pick = |cubes: &[ProbCube]| -> Vec<ProbCube> {
                let wanted: &[ClassifierKind] = match framework {
                    Framework::Traditional => std::slice::from_ref(&cfg.classifier),
                    Framework::Mff => &cfg.mff_classifiers,
                };
                wanted
                    .iter()
                    .map(|k| cubes[kinds.iter().position(|x| x == k).expect("scored kind")].clone())
                    .collect()
            };
            let train_cubes = pick(&scores.train);
            let test_cubes = pick(&scores.test);
            for (j, &implication) in cfg.implications.iter().enumerate() {
                let fcfg = cfg.fusion(implication);
                // the numeric mean ignores the implication
                for &agg in cfg.aggregators.iter().filter(|a| j == 0 || a.is_interval()) {
                    let agg = match (&cfg.md_search, agg.is_md()) {
                        (Some(search), true) => {
                            let choice = optimize_mp_mn(framework, &train_cubes, &train_labels, agg, &fcfg, search)
                                .map_err(annotate)?;
                            agg.with_mp_mn(choice.m_p, choice.m_n)
                        }
                        _ => agg,
                    };
                    let predicted = fuse(framework, &test_cubes, agg, &fcfg).map_err(annotate)?;
                    let correct = predicted.iter().zip(&test_labels).filter(|(a, b)| a == b).count();
                    table.rows.push(ResultRow {
                        subject: subject.name.clone(),
                        framework: framework.to_string(),
                        aggregator: agg.name().to_string(),
                        implication: if agg.is_interval() {
                            implication.to_string()
                        } else {
                            "none".to_string()
                        },
                        partition: p,
                        correct,
                        total: test_labels.len(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Runs every subject; rows are ordered by subject, partition, framework,
/// implication and aggregator.
pub fn run_experiment(cfg: &ExperimentConfig, subjects: &[Subject]) -> Result<ResultTable> {
    let mut table = ResultTable::default();
    for s in subjects {
        run_subject(cfg, s, &mut table)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stratified_splits() {
        let labels = [0, 1, 0, 1, 0, 1, 0, 1];
        let splits = partition(&labels, 5, 0.5, 3).unwrap();
        assert_eq!(splits, partition(&labels, 5, 0.5, 3).unwrap());
        for s in &splits {
            assert_eq!((s.train.len(), s.test.len()), (4, 4));
            for side in [&s.train, &s.test] {
                assert_eq!(side.iter().filter(|&&i| labels[i] == 0).count(), 2);
            }
            let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..8).collect::<Vec<_>>());
        }
        assert!(matches!(partition(&[0, 0, 1], 1, 0.5, 0), Err(Error::NotEnoughTrials(_))));
    }

    #[test]
    fn many_distinct_splits() {
        let labels: Vec<usize> = (0..288).map(|i| i % 4).collect();
        let splits = partition(&labels, 20, 0.5, 11).unwrap();
        let mut distinct: Vec<&Vec<usize>> = splits.iter().map(|s| &s.train).collect();
        distinct.sort();
        distinct.dedup();
        assert!(distinct.len() >= 19);
    }

    #[test]
    fn summary_statistics() {
        let row = |fw: &str, p: usize, correct: usize| ResultRow {
            subject: "s".into(),
            framework: fw.into(),
            aggregator: "mean".into(),
            implication: "none".into(),
            partition: p,
            correct,
            total: 4,
        };
        let t = ResultTable {
            rows: vec![row("traditional", 0, 2), row("traditional", 1, 4), row("mff", 0, 3)],
        };
        let s = t.summary();
        assert_eq!(s.len(), 2);
        assert!((s[0].mean - 0.75).abs() < 1e-15);
        assert!((s[0].std - (0.125f64).sqrt()).abs() < 1e-15);
        assert_eq!(s[1].std, 0.0);
        let csv = t.to_csv();
        assert!(csv.starts_with(REPORT_HEADER));
        assert!(csv.contains("s,traditional,mean,none,0,0.5\n"));
        assert_eq!(ResultTable::default().to_csv(), format!("{REPORT_HEADER}\n\n{SUMMARY_HEADER}\n"));
    }
}
