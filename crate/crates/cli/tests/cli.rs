//! End-to-end checks of the binary: output formats, the documented
//! exit-code contract (0 success, 1 verification failure, 2 usage/config
//! error), and byte-level determinism under a fixed seed.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lalpha_core::analytic::SineRamp;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lalpha"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}; stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process not signal-killed")
}

/// `(header, rows-of-parsed-floats)` from CSV text.
fn parse_csv(text: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().expect("header row").to_string();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|v| v.parse::<f64>().expect("numeric field"))
                .collect()
        })
        .collect();
    (header, rows)
}

fn write_sine_samples(path: &Path, xs: &[f64]) {
    let f = SineRamp::new(3.0, 2.0, 5.0);
    let mut text = String::from("x_0,f\n");
    for &x in xs {
        text.push_str(&format!("{x},{}\n", f.eval(x)));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn profile_stairs_analytic_column_is_non_increasing() {
    let out = run(&[
        "profile",
        "--function",
        "stairs",
        "--alphas",
        "0.05,0.1,0.15,0.25,0.5",
        "--grid",
        "800",
    ]);
    let (header, rows) = parse_csv(&stdout_of(&out));
    assert_eq!(header, "alpha,L_alpha_analytic,L_alpha_empirical");
    assert_eq!(rows.len(), 5);
    for pair in rows.windows(2) {
        assert!(
            pair[1][1] <= pair[0][1] + 1e-12,
            "analytic column increased: {pair:?}"
        );
    }
}

#[test]
fn profile_sine_value_matches_quoted_constant() {
    let out = run(&["profile", "--function", "sine", "--alphas", "0.5"]);
    let (_, rows) = parse_csv(&stdout_of(&out));
    assert_eq!(rows.len(), 1);
    assert!(
        (rows[0][1] - 13.29).abs() <= 0.15,
        "analytic value {} off the quoted 13.29",
        rows[0][1]
    );
}

#[test]
fn profile_usage_errors() {
    // alphas flag is required
    assert_eq!(exit_code(&run(&["profile", "--function", "sine"])), 2);
    // non-positive scale is rejected by validation
    let out = run(&["profile", "--function", "sine", "--alphas=-0.1"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn envelope_single_sample_pins_to_observation() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("one.csv");
    fs::write(&samples, "x_0,f\n0.5,1.25\n").unwrap();
    let out = run(&[
        "envelope",
        "--samples",
        samples.to_str().unwrap(),
        "--method",
        "lipschitz",
        "--l",
        "3.0",
        "--grid",
        "3",
    ]);
    let (header, rows) = parse_csv(&stdout_of(&out));
    assert_eq!(header, "x,lower,upper");
    assert_eq!(rows.len(), 3);
    let at_sample = rows
        .iter()
        .find(|r| r[0] == 0.5)
        .expect("grid hits the sample");
    assert_eq!(at_sample[1], 1.25, "lower bound at the sample");
    assert_eq!(at_sample[2], 1.25, "upper bound at the sample");
}

#[test]
fn envelope_coarse_method_is_tighter_far_from_samples() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("one.csv");
    write_sine_samples(&samples, &[1.5]);
    let f = SineRamp::new(3.0, 2.0, 5.0);
    let (l, l_alpha) = (f.lipschitz(), f.l_alpha(0.5));
    let path = samples.to_str().unwrap();
    let plain = run(&[
        "envelope",
        "--samples",
        path,
        "--method",
        "lipschitz",
        "--l",
        &l.to_string(),
        "--grid",
        "41",
    ]);
    let coarse = run(&[
        "envelope",
        "--samples",
        path,
        "--method",
        "lalpha",
        "--alpha",
        "0.5",
        "--l-alpha",
        &l_alpha.to_string(),
        "--grid",
        "41",
    ]);
    let (_, plain_rows) = parse_csv(&stdout_of(&plain));
    let (_, coarse_rows) = parse_csv(&stdout_of(&coarse));
    let width = |r: &Vec<f64>| r[2] - r[1];
    // far end of the query box: the coarse bound wins
    assert!(width(&coarse_rows[0]) < width(&plain_rows[0]));
    // at the sample itself the plain envelope collapses and wins
    let mid = plain_rows.len() / 2;
    assert_eq!(plain_rows[mid][0], 1.5);
    assert!(width(&plain_rows[mid]) < width(&coarse_rows[mid]));
}

#[test]
fn envelope_width_shrinks_with_more_samples() {
    let dir = tempfile::tempdir().unwrap();
    let five = dir.path().join("five.csv");
    let fifty = dir.path().join("fifty.csv");
    write_sine_samples(&five, &[0.0, 0.75, 1.5, 2.25, 3.0]);
    // Superset of the five sample sites, so the envelope must tighten pointwise.
    let xs: Vec<f64> = (0..=48).map(|j| 3.0 * j as f64 / 48.0).collect();
    write_sine_samples(&fifty, &xs);
    let l = SineRamp::new(3.0, 2.0, 5.0).lipschitz().to_string();
    let run_one = |path: &Path| {
        let out = run(&[
            "envelope",
            "--samples",
            path.to_str().unwrap(),
            "--method",
            "lipschitz",
            "--l",
            &l,
            "--grid",
            "101",
        ]);
        parse_csv(&stdout_of(&out)).1
    };
    let (rows5, rows50) = (run_one(&five), run_one(&fifty));
    for (a, b) in rows5.iter().zip(&rows50) {
        assert!(
            b[2] - b[1] <= a[2] - a[1] + 1e-9,
            "more samples widened the envelope at x = {}",
            a[0]
        );
    }
}

#[test]
fn envelope_multi_profile_is_pointwise_tightest() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("five.csv");
    write_sine_samples(&samples, &[0.0, 0.75, 1.5, 2.25, 3.0]);
    let f = SineRamp::new(3.0, 2.0, 5.0);
    let alphas = [0.1, 0.2, 0.4, 0.5, 0.8];
    let profile = dir.path().join("profile.json");
    let pairs: Vec<String> = alphas
        .iter()
        .map(|&a| format!("[{a}, {}]", f.l_alpha(a)))
        .collect();
    fs::write(
        &profile,
        format!(
            r#"{{"L": {}, "pairs": [{}]}}"#,
            f.lipschitz(),
            pairs.join(", ")
        ),
    )
    .unwrap();

    let path = samples.to_str().unwrap();
    let multi = run(&[
        "envelope",
        "--samples",
        path,
        "--method",
        "multi",
        "--profile",
        profile.to_str().unwrap(),
        "--grid",
        "101",
    ]);
    let (_, multi_rows) = parse_csv(&stdout_of(&multi));

    let mut singles = vec![run(&[
        "envelope",
        "--samples",
        path,
        "--method",
        "lipschitz",
        "--l",
        &f.lipschitz().to_string(),
        "--grid",
        "101",
    ])];
    for &a in &alphas {
        singles.push(run(&[
            "envelope",
            "--samples",
            path,
            "--method",
            "lalpha",
            "--alpha",
            &a.to_string(),
            "--l-alpha",
            &f.l_alpha(a).to_string(),
            "--grid",
            "101",
        ]));
    }
    for single in &singles {
        let (_, rows) = parse_csv(&stdout_of(single));
        for (m, s) in multi_rows.iter().zip(&rows) {
            assert!(m[1] >= s[1] - 1e-9, "multi lower looser at x = {}", m[0]);
            assert!(m[2] <= s[2] + 1e-9, "multi upper looser at x = {}", m[0]);
        }
    }
}

#[test]
fn envelope_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("one.csv");
    fs::write(&samples, "x_0,f\n0.5,1.25\n").unwrap();
    let path = samples.to_str().unwrap();
    for args in [
        vec!["envelope", "--samples", path, "--method", "lipschitz"], // needs --l
        vec![
            "envelope",
            "--samples",
            path,
            "--method",
            "lalpha",
            "--alpha",
            "0.1",
        ], // needs --l-alpha
        vec!["envelope", "--samples", path, "--method", "multi"],     // needs --profile
    ] {
        let out = run(&args);
        assert_eq!(exit_code(&out), 2, "args {args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
    }
    // malformed samples file is a config error, not a crash
    fs::write(&samples, "x_0,g\n0.5,1.25\n").unwrap();
    assert_eq!(
        exit_code(&run(&[
            "envelope",
            "--samples",
            path,
            "--method",
            "lipschitz",
            "--l",
            "1"
        ])),
        2
    );
}

#[test]
fn riverswim_exact_is_a_staircase() {
    let out = run(&["riverswim", "--mode", "exact", "--states", "201"]);
    let (header, rows) = parse_csv(&stdout_of(&out));
    assert_eq!(header, "s,v_star");
    assert_eq!(rows.len(), 201);
    let gamma: f64 = 0.95;
    let plateaus = [gamma.powi(3), gamma.powi(2), gamma];
    for row in &rows {
        assert!(
            plateaus.iter().any(|p| (row[1] - p).abs() < 1e-12),
            "value {} off every plateau",
            row[1]
        );
    }
    for pair in rows.windows(2) {
        assert!(pair[1][1] >= pair[0][1], "optimal value decreased with s");
    }
}

#[test]
fn riverswim_mc_without_noise_reproduces_exact_values() {
    let out = run(&[
        "riverswim",
        "--mode",
        "mc",
        "--states",
        "21",
        "--rollouts",
        "50",
        "--horizon",
        "200",
        "--seed",
        "3",
    ]);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "s,v_star,mc_mean,mc_stderr");
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(
            fields[1], fields[2],
            "mc_mean drifted from v_star in {line}"
        );
        // All rollouts return the same value; sum/n can still miss it by an ulp.
        assert!(fields[3].parse::<f64>().unwrap() < 1e-12);
    }
}

#[test]
fn riverswim_mc_with_noise_smooths_the_steps() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("noisy.json");
    fs::write(&config, r#"{"noise_sigma": 0.03}"#).unwrap();
    let out = run(&[
        "--config",
        config.to_str().unwrap(),
        "riverswim",
        "--mode",
        "mc",
        "--states",
        "41",
        "--rollouts",
        "400",
        "--horizon",
        "400",
        "--seed",
        "5",
    ]);
    let (_, rows) = parse_csv(&stdout_of(&out));
    let max_gap = rows.iter().map(|r| (r[2] - r[1]).abs()).fold(0.0, f64::max);
    assert!(max_gap > 1e-4, "noise produced no smoothing at all");
    assert!(
        max_gap < 0.05,
        "MC estimate strayed {max_gap} from the exact curve"
    );
    assert!(rows.iter().all(|r| r[3] >= 0.0));
}

#[test]
fn riverswim_rejects_current_stronger_than_stroke() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    fs::write(&config, r#"{"a_max": 0.5, "c": 0.6}"#).unwrap();
    let out = run(&[
        "--config",
        config.to_str().unwrap(),
        "riverswim",
        "--mode",
        "exact",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn sweep_single_cell_emits_one_row() {
    let out = run(&["sweep", "--values", "2.5", "--seeds", "1"]);
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "L_replacement,seed,total_reward");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("2.50000000000e0,0,"));
}

#[test]
fn sweep_is_byte_identical_under_a_fixed_seed() {
    let args = ["sweep", "--values", "0.3,1", "--seeds", "5", "--seed", "9"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(stdout_of(&first), stdout_of(&second));
    let other_seed = run(&["sweep", "--values", "0.3,1", "--seeds", "5", "--seed", "10"]);
    assert_ne!(
        stdout_of(&first),
        stdout_of(&other_seed),
        "seed has no effect"
    );
}

#[test]
fn zoom_is_deterministic_and_respects_the_radius_floor() {
    let args = [
        "zoom",
        "--mode",
        "l_alpha",
        "--episodes",
        "13",
        "--seed",
        "4",
    ];
    let first = stdout_of(&run(&args));
    assert_eq!(first, stdout_of(&run(&args)));
    let mut lines = first.lines();
    assert_eq!(
        lines.next().unwrap(),
        "episode,mode,cumulative_reward,num_balls,min_radius"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 13);
    for row in &rows {
        assert_eq!(row[1], "l_alpha");
        let min_radius: f64 = row[4].parse().unwrap();
        assert!(
            min_radius >= 3.0 * 0.05 - 1e-12,
            "radius {min_radius} under the floor in the protected window"
        );
    }
    let cumulative: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    for pair in cumulative.windows(2) {
        assert!(pair[1] >= pair[0] - 1e-12, "cumulative reward decreased");
    }
}

#[test]
fn zoom_rejects_unknown_mode() {
    assert_eq!(exit_code(&run(&["zoom", "--mode", "bogus"])), 2);
}

#[test]
fn verify_all_passes_and_reports_json_lines() {
    let out = run(&["verify"]);
    let text = stdout_of(&out);
    assert!(text.lines().count() >= 8);
    for line in text.lines() {
        assert!(
            line.starts_with('{') && line.contains(r#""passed":true"#),
            "unexpected line {line}"
        );
    }
}

#[test]
fn verify_corrupted_bounds_exit_one() {
    let out = run(&["verify", "--corrupt-bounds", "0.2"]);
    assert_eq!(exit_code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.contains(r#""passed":false"#)));
    // the hook still validates its argument
    assert_eq!(exit_code(&run(&["verify", "--corrupt-bounds", "0"])), 2);
}

#[test]
fn verify_single_suite_emits_single_line() {
    let out = run(&["verify", "--suite", "thm2"]);
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 1);
    assert_eq!(exit_code(&run(&["verify", "--suite", "nope"])), 2);
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("values.csv");
    let stdout_run = run(&["riverswim", "--mode", "exact", "--states", "11"]);
    let file_run = run(&[
        "--out",
        path.to_str().unwrap(),
        "riverswim",
        "--mode",
        "exact",
        "--states",
        "11",
    ]);
    assert!(file_run.status.success());
    assert!(file_run.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), stdout_run.stdout);
}
