use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn ivdev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivdev")).args(args).output().unwrap()
}

fn ivdev_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ivdev"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SMALL_RUN: &str = "\
framework = traditional, mff
aggregator = mean, owa3, md2
partitions = 3
md.search.samples = 10
synth.trials_per_class = 12
synth.samples = 300
";

#[test]
fn run_is_byte_identical_across_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, SMALL_RUN).unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = ivdev(&["run", "--config", path(&cfg), "--seed", "5", "--out", path(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let report = fs::read(&a).unwrap();
    assert_eq!(report, fs::read(&b).unwrap());
    let text = String::from_utf8(report).unwrap();
    assert!(text.starts_with("subject,framework,aggregator,implication,partition,accuracy\n"));
    assert!(text.contains("\nframework,aggregator,implication,n,mean,std\n"));

    let c = dir.path().join("c.csv");
    ivdev(&["run", "--config", path(&cfg), "--seed", "6", "--out", path(&c)]);
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn set_overrides_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, SMALL_RUN).unwrap();
    let out = dir.path().join("r.csv");
    let o = ivdev(&[
        "run", "--config", path(&cfg), "--seed", "1", "--out", path(&out),
        "--set", "framework=traditional", "--set", "aggregator=md1",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).take_while(|l| !l.is_empty()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.starts_with("synth,traditional,md1,reichenbach,")));
}

#[test]
fn synth_then_run_from_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let o = ivdev(&[
        "synth", "--out", path(&data), "--trials-per-class", "8", "--samples", "200", "--seed", "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(data.join("manifest.txt").is_file());
    assert_eq!(fs::read_dir(data.join("trials/synth")).unwrap().count(), 16);
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "manifest = data/manifest.txt\npartitions = 2\nmd.search = false\n").unwrap();
    let out = dir.path().join("r.csv");
    let o = ivdev(&["run", "--config", path(&cfg), "--seed", "0", "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&out).unwrap().contains("synth,traditional,md2,reichenbach,1,"));
}

#[test]
fn fuse_intervals_and_probabilities() {
    let o = ivdev_stdin(
        &["fuse", "--input", "-", "--aggregator", "md1", "--m-p", "2", "--m-n", "2"],
        "lo1,hi1,lo2,hi2\n0.1,0.3,0.5,0.7\n0.4,0.4,0.4,0.4\n",
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let lines: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    // equal M_p and M_n: the midpoint, width kept
    assert!((lines[0][0] - 0.3).abs() < 1e-12 && (lines[0][1] - 0.5).abs() < 1e-12);
    assert_eq!(lines[1], [0.4, 0.4]);

    let o = ivdev_stdin(&["fuse", "--input", "-", "--kind", "probs", "--aggregator", "mean"], "0.2,0.6\n");
    assert_eq!(stdout(&o), "value\n0.4\n");
}

#[test]
fn fuse_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let out = dir.path().join("out.csv");
    fs::write(&input, "0.3,0.6\n").unwrap();
    let o = ivdev(&[
        "fuse", "--input", path(&input), "--kind", "probs", "--aggregator", "owa1",
        "--implication", "kleene-dienes", "--out", path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&out).unwrap().starts_with("lo,hi\n"));
}

#[test]
fn exit_codes_follow_error_class() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = ivdev(&["run", "--seed", "1", "--out", path(&out), "--set", "nope=1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ivdev(&["run", "--seed", "1", "--out", path(&out), "--set", "aggregator=md9"]);
    assert_eq!(o.status.code(), Some(2));

    let missing = dir.path().join("missing.txt");
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, format!("manifest = {}\n", path(&missing))).unwrap();
    let o = ivdev(&["run", "--config", path(&cfg), "--seed", "1", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));

    let o = ivdev_stdin(&["fuse", "--input", "-"], "0.5,0.2\n");
    assert_eq!(o.status.code(), Some(3));
    let o = ivdev_stdin(&["fuse", "--input", "-"], "0.1,x\n");
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":1:2:"));

    // clap rejects a missing mandatory --seed before any work happens
    let o = ivdev(&["run", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn selftest_passes() {
    let o = ivdev(&["selftest", "--trials", "100", "--seed", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}
