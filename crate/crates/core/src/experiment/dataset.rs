//! CSV trial files described by a flat manifest.
//!
//! ```text
//! sample_rate = 250
//! channels = C3,C4,CP3,CP4          # optional subset, in this order
//! classes = left,right              # optional names usable in label files
//! subject.A01.trials = trials/A01   # a directory of *.csv, or a comma list of files
//! subject.A01.labels = labels/A01.csv
//! ```
//!
//! A trial file has a header of channel names and one row per sample. A label
//! file has the header `trial_id,class`; the trial id is the trial file stem.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::features::TrialTensor;

use super::config::parse_key_values;

#[derive(Debug, Clone, PartialEq)]
pub struct Subject {
    pub name: String,
    pub channels: Vec<String>,
    pub data: TrialTensor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub sample_rate: f64,
    pub channels: Option<Vec<String>>,
    pub classes: Option<Vec<String>>,
    /// Subject name to (trial files, label file), sorted by name.
    pub subjects: BTreeMap<String, (Vec<PathBuf>, PathBuf)>,
}

fn parse_error(path: &Path, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::ParseError {
        path: path.to_path_buf(),
        line,
        column,
        message: message.into(),
    }
}

fn split_list(v: &str) -> Vec<String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn require_file(path: &Path, referenced_from: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(parse_error(
            referenced_from,
            0,
            0,
            format!("referenced file {} does not exist", path.display()),
        ))
    }
}

impl DatasetManifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            parse_error(path, 0, 0, format!("cannot read manifest: {e}"))
        })?;
        let root = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        let mut sample_rate = None;
        let mut channels = None;
        let mut classes = None;
        let mut trials: BTreeMap<String, Vec<PathBuf>> = BTreeMap::new();
        let mut labels: BTreeMap<String, PathBuf> = BTreeMap::new();
        for (key, value) in parse_key_values(&text, path)? {
            match key.as_str() {
                "sample_rate" => {
                    sample_rate = Some(value.parse::<f64>().map_err(|_| {
                        parse_error(path, 0, 0, format!("bad sample_rate '{value}'"))
                    })?)
                }
                "channels" => channels = Some(split_list(&value)),
                "classes" => classes = Some(split_list(&value)),
                _ => {
                    let rest = key.strip_prefix("subject.").ok_or_else(|| {
                        parse_error(path, 0, 0, format!("unknown manifest key '{key}'"))
                    })?;
                    let (name, field) = rest.rsplit_once('.').ok_or_else(|| {
                        parse_error(path, 0, 0, format!("malformed subject key '{key}'"))
                    })?;
                    match field {
                        "trials" => {
                            let mut files = Vec::new();
                            for entry in split_list(&value) {
                                let p = root.join(&entry);
                                if p.is_dir() {
                                    let mut found: Vec<PathBuf> = fs::read_dir(&p)
                                        .map_err(|source| Error::Io {
                                            path: p.clone(),
                                            source,
                                        })?
                                        .filter_map(|e| e.ok().map(|e| e.path()))
                                        .filter(|f| f.extension().is_some_and(|x| x == "csv"))
                                        .collect();
                                    found.sort();
                                    files.extend(found);
                                } else {
                                    require_file(&p, path)?;
                                    files.push(p);
                                }
                            }
                            trials.entry(name.to_string()).or_default().extend(files);
                        }
                        "labels" => {
                            let p = root.join(&value);
                            require_file(&p, path)?;
                            labels.insert(name.to_string(), p);
                        }
                        other => {
                            return Err(parse_error(
                                path,
                                0,
                                0,
                                format!("unknown subject field '{other}'"),
                            ))
                        }
                    }
                }
            }
        }
        let sample_rate = sample_rate.ok_or_else(|| parse_error(path, 0, 0, "missing sample_rate"))?;
        let mut subjects = BTreeMap::new();
        for (name, files) in trials {
            let label_file = labels.remove(&name).ok_or_else(|| {
                parse_error(path, 0, 0, format!("subject {name} has no labels entry"))
            })?;
            subjects.insert(name, (files, label_file));
        }
        if let Some(name) = labels.keys().next() {
            return Err(parse_error(path, 0, 0, format!("subject {name} has no trials entry")));
        }
        if subjects.is_empty() {
            return Err(parse_error(path, 0, 0, "manifest lists no subjects"));
        }
        Ok(Self {
            root,
            sample_rate,
            channels,
            classes,
            subjects,
        })
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path)
        .map_err(|e| parse_error(path, 0, 0, format!("cannot open: {e}")))?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    parse_error(path, line, 0, e.to_string())
}

/// Reads one trial file and returns `channels x samples` for the selected channels.
pub fn read_trial(path: &Path, select: Option<&[String]>) -> Result<(Vec<String>, DMatrix<f64>)> {
    let mut reader = csv_reader(path)?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(String::from)
        .collect();
    let names: Vec<String> = match select {
        Some(s) => s.to_vec(),
        None => header.clone(),
    };
    let columns: Vec<usize> = names
        .iter()
        .map(|n| {
            header
                .iter()
                .position(|h| h == n)
                .ok_or_else(|| Error::ChannelMissing(format!("{n} in {}", path.display())))
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row = columns
            .iter()
            .map(|&c| {
                let field = record.get(c).unwrap_or("");
                field.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                    parse_error(path, line, c + 1, format!("not a finite number: '{field}'"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let m = DMatrix::from_fn(names.len(), rows.len(), |ch, s| rows[s][ch]);
    Ok((names, m))
}

fn read_labels(path: &Path, classes: Option<&[String]>) -> Result<HashMap<String, usize>> {
    let mut reader = csv_reader(path)?;
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let id_col = header.iter().position(|h| h == "trial_id");
    let class_col = header.iter().position(|h| h == "class");
    let (Some(id_col), Some(class_col)) = (id_col, class_col) else {
        return Err(parse_error(path, 1, 1, "header must contain trial_id and class"));
    };
    let mut out = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let id = record.get(id_col).unwrap_or("").to_string();
        let raw = record.get(class_col).unwrap_or("");
        let class = classes
            .and_then(|names| names.iter().position(|n| n == raw))
            .or_else(|| raw.parse::<usize>().ok())
            .ok_or_else(|| parse_error(path, line, class_col + 1, format!("unknown class '{raw}'")))?;
        if let Some(names) = classes {
            if class >= names.len() {
                return Err(parse_error(
                    path,
                    line,
                    class_col + 1,
                    format!("class index {class} but only {} classes declared", names.len()),
                ));
            }
        }
        if out.insert(id.clone(), class).is_some() {
            return Err(Error::LabelMismatch(format!(
                "trial id {id} labelled twice in {}",
                path.display()
            )));
        }
    }
    Ok(out)
}

fn trial_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Loads every subject of a manifest; `channels` overrides the manifest's subset.
pub fn load_dataset(manifest_path: &Path, channels: Option<&[String]>) -> Result<Vec<Subject>> {
    let manifest = DatasetManifest::read(manifest_path)?;
    let select = channels.map(<[String]>::to_vec).or(manifest.channels.clone());
    let mut out = Vec::new();
    for (name, (files, label_file)) in &manifest.subjects {
        let labels = read_labels(label_file, manifest.classes.as_deref())?;
        let mut trials = Vec::with_capacity(files.len());
        let mut ys = Vec::with_capacity(files.len());
        let mut names: Option<Vec<String>> = None;
        for f in files {
            let (chs, m) = read_trial(f, select.as_deref())?;
            match &names {
                Some(prev) if *prev != chs => {
                    return Err(Error::ShapeError(format!(
                        "{} has channels {chs:?}, expected {prev:?}",
                        f.display()
                    )))
                }
                Some(_) => {}
                None => names = Some(chs),
            }
            let id = trial_id(f);
            let y = labels.get(&id).ok_or_else(|| {
                Error::LabelMismatch(format!("no label for trial {id} in {}", label_file.display()))
            })?;
            trials.push(m);
            ys.push(*y);
        }
        if labels.len() != files.len() {
            let known: std::collections::HashSet<String> = files.iter().map(|f| trial_id(f)).collect();
            let mut unknown: Vec<&String> = labels.keys().filter(|k| !known.contains(*k)).collect();
            unknown.sort();
            return Err(Error::LabelMismatch(format!(
                "{} labels trials with no file: {unknown:?}",
                label_file.display()
            )));
        }
        let data = TrialTensor::new(trials, manifest.sample_rate, ys)?;
        out.push(Subject {
            name: name.clone(),
            channels: names.unwrap_or_default(),
            data,
        });
    }
    Ok(out)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(contents.as_bytes()).map_err(io_err(path))
}

/// Writes subjects as a manifest plus per-trial CSV files under `dir`.
pub fn write_dataset(dir: &Path, subjects: &[Subject]) -> Result<PathBuf> {
    let first = subjects
        .first()
        .ok_or_else(|| Error::Config("nothing to write".into()))?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut manifest = format!("sample_rate = {}\n", first.data.sample_rate());
    for s in subjects {
        let trial_dir = dir.join("trials").join(&s.name);
        fs::create_dir_all(&trial_dir).map_err(io_err(&trial_dir))?;
        let label_dir = dir.join("labels");
        fs::create_dir_all(&label_dir).map_err(io_err(&label_dir))?;
        let mut labels = String::from("trial_id,class\n");
        for (i, (t, y)) in s.data.trials().iter().zip(s.data.labels()).enumerate() {
            let id = format!("{}_t{i:04}", s.name);
            let mut body = s.channels.join(",");
            body.push('\n');
            for col in t.column_iter() {
                let row: Vec<String> = col.iter().map(|v| v.to_string()).collect();
                body.push_str(&row.join(","));
                body.push('\n');
            }
            write_file(&trial_dir.join(format!("{id}.csv")), &body)?;
            labels.push_str(&format!("{id},{y}\n"));
        }
        write_file(&label_dir.join(format!("{}.csv", s.name)), &labels)?;
        manifest.push_str(&format!(
            "subject.{0}.trials = trials/{0}\nsubject.{0}.labels = labels/{0}.csv\n",
            s.name
        ));
    }
    let path = dir.join("manifest.txt");
    write_file(&path, &manifest)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subject() -> Subject {
        let data = TrialTensor::new(
            vec![
                DMatrix::from_row_slice(2, 3, &[0.1, -0.2, 0.3, 1.5, 2.5, -3.5]),
                DMatrix::from_row_slice(2, 3, &[1e-7, 0.0, 2.0, 4.0, 5.0, 6.0]),
            ],
            250.0,
            vec![1, 0],
        )
        .unwrap();
        Subject {
            name: "S1".into(),
            channels: vec!["C3".into(), "C4".into()],
            data,
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let s = subject();
        let manifest = write_dataset(dir.path(), std::slice::from_ref(&s)).unwrap();
        let loaded = load_dataset(&manifest, None).unwrap();
        assert_eq!(loaded, vec![s.clone()]);
        let only = load_dataset(&manifest, Some(&["C4".to_string()])).unwrap();
        assert_eq!(only[0].data.trials()[0].row(0), s.data.trials()[0].row(1));
        assert!(matches!(
            load_dataset(&manifest, Some(&["Cz".to_string()])),
            Err(Error::ChannelMissing(_))
        ));
    }

    #[test]
    fn reports_broken_inputs() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = write_dataset(dir.path(), &[subject()]).unwrap();
        let labels = dir.path().join("labels/S1.csv");
        fs::write(&labels, "trial_id,class\nS1_t0000,1\nS1_t0001,0\nghost,1\n").unwrap();
        assert!(matches!(load_dataset(&manifest, None), Err(Error::LabelMismatch(_))));

        fs::write(&labels, "trial_id,class\nS1_t0000,1\nS1_t0001,0\n").unwrap();
        let trial = dir.path().join("trials/S1/S1_t0001.csv");
        fs::write(&trial, "C3,C4\n1,2\n3,x\n").unwrap();
        match load_dataset(&manifest, None) {
            Err(Error::ParseError { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }

        let bad = dir.path().join("bad.txt");
        fs::write(&bad, "sample_rate = 100\nsubject.X.trials = nowhere.csv\n").unwrap();
        match load_dataset(&bad, None) {
            Err(Error::ParseError { message, .. }) => assert!(message.contains("nowhere.csv")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
