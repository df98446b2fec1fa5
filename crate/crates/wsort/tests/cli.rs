//! End-to-end checks of the `wsort` binary: exit codes, output formats, and
//! the config-file surface.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wsort(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsort"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn sort_zero_noise_reports_zero_dislocation() {
    let output = wsort(&["sort", "--n", "8", "--p", "0", "--seed", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("max_dislocation=0"), "{text}");
    assert!(text.contains("total_dislocation=0"), "{text}");
}

#[test]
fn sort_traced_run_checks_bounds() {
    let output = wsort(&[
        "sort", "--n", "64", "--p", "0.125", "--seed", "3", "--trace", "full",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("iteration 0: w=32"), "{text}");
    assert!(text.contains("max_dislocation="), "{text}");
}

#[test]
fn usage_errors_exit_one() {
    let bad_flag = wsort(&["sort", "--n", "8", "--p", "0", "--bogus"]);
    assert_eq!(bad_flag.status.code(), Some(1));
    let no_command = wsort(&[]);
    assert_eq!(no_command.status.code(), Some(1));
    let help = wsort(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn runtime_errors_exit_two() {
    // p out of the oracle's domain
    let output = wsort(&["sort", "--n", "8", "--p", "0.75", "--seed", "1"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&output.stderr).is_empty());
}

#[test]
fn experiment_writes_both_csv_files() {
    let dir = std::env::temp_dir().join("wsort-cli-test");
    fs::create_dir_all(&dir).unwrap();
    let out = dir.join("t2.csv");
    let output = wsort(&[
        "experiment",
        "--n",
        "64",
        "--p",
        "0.125,0.25",
        "--trials",
        "5",
        "--seed",
        "42",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
    let trial_csv = fs::read_to_string(&out).unwrap();
    let header = "n,p,alpha,trial,seed,max_dislocation,total_dislocation,mean_dislocation,comparisons,elapsed_ms";
    assert!(trial_csv.contains(header), "{trial_csv}");
    let rows = trial_csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("n,"))
        .count();
    assert_eq!(rows, 10);
    let agg_csv = fs::read_to_string(dir.join("t2.agg.csv")).unwrap();
    assert!(agg_csv.contains(
        "n,p,alpha,trials,mean_of_mean_dislocation,mean_max_over_log2n,stddev_mean_dislocation"
    ));
    let agg_rows = agg_csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("n,"))
        .count();
    assert_eq!(agg_rows, 2);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn experiment_accepts_config_file_and_rejects_unknown_keys() {
    let dir = std::env::temp_dir().join("wsort-cli-config-test");
    fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.conf");
    fs::write(
        &good,
        "n_values = 32\np_values = 0.125\ntrials = 3\nmaster_seed = 9\n",
    )
    .unwrap();
    let output = wsort(&["experiment", "--config", good.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
    assert!(stdout(&output).contains("32"));

    let bad = dir.join("bad.conf");
    fs::write(&bad, "n_values = 32\nwindow_cheese = 4\n").unwrap();
    let output = wsort(&["experiment", "--config", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("window_cheese"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn bounds_subcommand_prints_guarantees() {
    let output = wsort(&["bounds", "--n", "1024", "--p", "0.003"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("guarantee factor        = 6"), "{text}");
    assert!(text.contains("max dislocation bound   = 540"), "{text}");

    let no_guarantee = wsort(&["bounds", "--n", "1024", "--p", "0.2"]);
    assert_eq!(no_guarantee.status.code(), Some(0));
    assert!(stdout(&no_guarantee).contains("NoGuarantee"));
}

#[test]
fn invariants_subcommand_reports_clean_runs() {
    let output = wsort(&[
        "invariants",
        "--n",
        "64",
        "--p",
        "0.125",
        "--trials",
        "3",
        "--seed",
        "5",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
    assert!(stdout(&output).contains("3 traced runs, 0 bound violations"));
}

#[test]
fn lower_bound_subcommand_compares_to_floor() {
    let output = wsort(&[
        "lower-bound",
        "--n",
        "64",
        "--p",
        "0.25",
        "--gap",
        "1",
        "--trials",
        "200",
        "--seed",
        "11",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
    let text = stdout(&output);
    assert!(
        text.contains("universal_lower_bound=0.16666666666666666"),
        "{text}"
    );
    assert!(text.contains("empirical_inversion_rate="), "{text}");
}

#[test]
fn experiment_csv_reruns_identically_modulo_elapsed() {
    let dir = std::env::temp_dir().join("wsort-cli-determinism");
    fs::create_dir_all(&dir).unwrap();
    let strip = |path: &Path| -> String {
        fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|line| {
                if line.starts_with('#') || line.starts_with("n,") {
                    line.to_string()
                } else {
                    line.rsplit_once(',')
                        .map(|(rest, _)| rest.to_string())
                        .unwrap()
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    let args = |out: &str| {
        vec![
            "experiment".to_string(),
            "--n".into(),
            "64".into(),
            "--p".into(),
            "0.125".into(),
            "--trials".into(),
            "4".into(),
            "--seed".into(),
            "1".into(),
            "--out".into(),
            out.to_string(),
        ]
    };
    let out_a = dir.join("a.csv");
    let out_b = dir.join("b.csv");
    let run_a = wsort(
        &args(out_a.to_str().unwrap())
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    );
    let run_b = wsort(
        &args(out_b.to_str().unwrap())
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    );
    assert_eq!(run_a.status.code(), Some(0));
    assert_eq!(run_b.status.code(), Some(0));
    assert_eq!(strip(&out_a), strip(&out_b));
    assert_eq!(
        fs::read_to_string(dir.join("a.agg.csv")).unwrap(),
        fs::read_to_string(dir.join("b.agg.csv")).unwrap()
    );
    fs::remove_dir_all(&dir).ok();
}
