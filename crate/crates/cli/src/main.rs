use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ivdev_core::experiment::{
    config::parse_override, load_source, run_experiment, synth_generate, write_dataset,
    ExperimentConfig, Subject, SynthParams,
};
use ivdev_core::fusion::{aggregate_intervals, AggregatorKind};
use ivdev_core::selftest;
use ivdev_core::{build_interval, Error, ErrorClass, ImplicationKind, OrderParams, UnitInterval};

#[derive(Parser)]
#[command(name = "ivdev", version, about = "Interval-valued deviation aggregation and MI-BCI fusion experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a partitioned experiment and write the accuracy report.
    Run {
        /// Flat key = value config file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        /// Report CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Override a config key, e.g. --set aggregator=md2.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Write a synthetic dataset (manifest plus CSV trials).
    Synth {
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = SynthParams::default().trials_per_class)]
        trials_per_class: usize,
        #[arg(long, default_value_t = SynthParams::default().classes)]
        classes: usize,
        #[arg(long, default_value_t = SynthParams::default().channels)]
        channels: usize,
        #[arg(long, default_value_t = SynthParams::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = SynthParams::default().sample_rate)]
        sample_rate: f64,
        /// Linear signal-to-noise power ratio; `inf` for noiseless tones.
        #[arg(long, default_value_t = SynthParams::default().snr)]
        snr: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Aggregate each row of a CSV of intervals or probabilities.
    Fuse {
        /// Input CSV; `-` reads stdin.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = InputKind::Intervals)]
        kind: InputKind,
        /// mean, owa1, owa2, owa3, md1 or md2.
        #[arg(long, default_value = "md2")]
        aggregator: String,
        #[arg(long, default_value_t = 1.0)]
        m_p: f64,
        #[arg(long, default_value_t = 1.0)]
        m_n: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Used with --kind probs.
        #[arg(long, default_value = "reichenbach")]
        implication: String,
        #[arg(long, default_value_t = ivdev_core::implication::DEFAULT_Y_WIDTH)]
        y_width: f64,
        /// Output CSV; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized oracle and property checks.
    Selftest {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputKind {
    /// Each row is lo1,hi1,lo2,hi2,...
    Intervals,
    /// Each row is p1,p2,...; every value is turned into an interval first.
    Probs,
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Config => 2,
        ErrorClass::Data => 3,
        ErrorClass::Internal => 4,
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(config: Option<&Path>, seed: u64, out: &Path, overrides: &[String]) -> Result<(), Error> {
    let (mut entries, base) = match config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| Error::Io {
                path: p.to_path_buf(),
                source,
            })?;
            let base = p.parent().unwrap_or(Path::new(".")).to_path_buf();
            (ivdev_core::experiment::config::parse_key_values(&text, p)?, base)
        }
        None => (Vec::new(), PathBuf::from(".")),
    };
    for o in overrides {
        entries.push(parse_override(o)?);
    }
    entries.push(("seed".into(), seed.to_string()));
    let cfg = ExperimentConfig::from_entries(entries, &base)?;
    let subjects = load_source(&cfg)?;
    let table = run_experiment(&cfg, &subjects)?;
    table.write_csv(out)?;
    for s in table.summary() {
        eprintln!(
            "{} {} {}: {:.4} +- {:.4} over {}",
            s.framework, s.aggregator, s.implication, s.mean, s.std, s.n
        );
    }
    Ok(())
}

fn parse_row(line: &str, lineno: usize, path: &Path) -> Result<Vec<f64>, Error> {
    line.split(',')
        .enumerate()
        .map(|(i, f)| {
            f.trim().parse::<f64>().map_err(|_| Error::ParseError {
                path: path.to_path_buf(),
                line: lineno,
                column: i + 1,
                message: format!("not a number: '{}'", f.trim()),
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn fuse(
    input: &Path,
    kind: InputKind,
    aggregator: &str,
    m_p: f64,
    m_n: f64,
    order: OrderParams,
    implication: ImplicationKind,
    y_width: f64,
    out: Option<&Path>,
) -> Result<(), Error> {
    let agg = aggregator.parse::<AggregatorKind>()?.with_mp_mn(m_p, m_n);
    let text = if input == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).map_err(|source| Error::Io {
            path: input.to_path_buf(),
            source,
        })?
    } else {
        fs::read_to_string(input).map_err(|source| Error::Io {
            path: input.to_path_buf(),
            source,
        })?
    };
    let mut report = String::from(if agg.is_interval() { "lo,hi\n" } else { "value\n" });
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(|c: char| c.is_alphabetic()) {
            continue;
        }
        let values = parse_row(line, i + 1, input)?;
        let bad_row = |message: String| Error::ParseError {
            path: input.to_path_buf(),
            line: i + 1,
            column: 1,
            message,
        };
        let intervals: Vec<UnitInterval> = match kind {
            InputKind::Intervals => {
                if values.len() % 2 != 0 {
                    return Err(bad_row("interval rows need an even number of fields".into()));
                }
                values
                    .chunks(2)
                    .map(|c| UnitInterval::new(c[0], c[1]))
                    .collect::<Result<_, _>>()
                    .map_err(|e| bad_row(e.to_string()))?
            }
            InputKind::Probs => values
                .iter()
                .map(|&p| build_interval(implication, p, y_width))
                .collect::<Result<_, _>>()
                .map_err(|e| bad_row(e.to_string()))?,
        };
        if agg.is_interval() {
            let y = aggregate_intervals(&intervals, agg, order)?;
            report.push_str(&format!("{},{}\n", y.lo(), y.hi()));
        } else {
            let v: f64 = match kind {
                InputKind::Probs => values.iter().sum::<f64>() / values.len() as f64,
                InputKind::Intervals => {
                    intervals.iter().map(|x| x.k_a(order.alpha())).sum::<f64>() / intervals.len() as f64
                }
            };
            report.push_str(&format!("{v}\n"));
        }
    }
    write_out(out, &report)
}

fn synth(out: &Path, params: SynthParams) -> Result<(), Error> {
    let data = synth_generate(&params)?;
    let subject = Subject {
        name: "synth".into(),
        channels: (1..=params.channels).map(|i| format!("ch{i}")).collect(),
        data,
    };
    let manifest = write_dataset(out, &[subject])?;
    eprintln!("wrote {}", manifest.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            out,
            overrides,
        } => run(config.as_deref(), seed, &out, &overrides),
        Command::Synth {
            out,
            trials_per_class,
            classes,
            channels,
            samples,
            sample_rate,
            snr,
            seed,
        } => synth(
            &out,
            SynthParams {
                trials_per_class,
                classes,
                channels,
                samples,
                sample_rate,
                snr,
                seed,
            },
        ),
        Command::Fuse {
            input,
            kind,
            aggregator,
            m_p,
            m_n,
            alpha,
            beta,
            implication,
            y_width,
            out,
        } => OrderParams::new(alpha, beta)
            .and_then(|order| Ok((order, implication.parse::<ImplicationKind>()?)))
            .and_then(|(order, implication)| {
                fuse(&input, kind, &aggregator, m_p, m_n, order, implication, y_width, out.as_deref())
            }),
        Command::Selftest { trials, seed } => {
            let results = selftest::run_all(trials, seed);
            for r in &results {
                println!("{r}");
            }
            if results.iter().all(|r| r.passed) {
                Ok(())
            } else {
                return ExitCode::from(4);
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
