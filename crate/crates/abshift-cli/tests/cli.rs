//! Black-box behavior of the `abshift` binary: output shapes, exit-code
//! contract, file emission, and environment overrides.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_abshift"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(str::to_owned)
        .collect()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn expand_prints_digits_partial_sums_and_remainder() {
    let out = run(&["expand", "--alpha", "0", "--beta", "2", "--x", "3/4", "--n", "4"]);
    let lines = stdout_lines(&out);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(lines[0], "1,1,0,0");
    assert_eq!(lines[1], "S_1 = 1/2");
    assert_eq!(lines[2], "S_2 = 3/4");
    assert!(lines[5].starts_with("remainder: 0 < 1/16"));

    let out = run(&["expand", "--alpha", "10/29", "--beta", "29/10", "--x", "0", "--n", "5"]);
    assert_eq!(stdout_lines(&out)[0], "0,1,1,1,1");

    // A top-digit first symbol with its exact remainder bound.
    let out = run(&["expand", "--alpha", "2/5", "--beta", "29/10", "--x", "7/10", "--n", "1"]);
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "2");
    assert!(lines[2].contains("43/290 < 10/29"));
}

#[test]
fn expand_rejects_bad_input_with_exit_two() {
    // Translation outside [0,1).
    let out = run(&["expand", "--alpha", "2", "--beta", "2", "--x", "0", "--n", "3"]);
    assert_eq!(exit_code(&out), 2);
    // Point outside [0,1).
    let out = run(&["expand", "--alpha", "0", "--beta", "2", "--x", "5/4", "--n", "3"]);
    assert_eq!(exit_code(&out), 2);
    // Unparseable rational (clap maps parse errors to its own exit 2).
    let out = run(&["expand", "--alpha", "x", "--beta", "2", "--x", "0", "--n", "3"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn spec_check_reports_the_full_shift_as_certified() {
    let out = run(&["spec-check", "--alpha", "0", "--beta", "2"]);
    let lines = stdout_lines(&out);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(lines[0], "SPEC_CERTIFIED");
    let report: serde_json::Value = serde_json::from_str(&lines[1]).unwrap();
    assert_eq!(report["verdict"]["kind"], "SPEC_CERTIFIED");
    assert_eq!(report["u"], "(0)");
    assert_eq!(report["v"], "(1)");
    assert_eq!(report["k_u"]["verdict"], "EMPTY_CERTIFIED");
}

#[test]
fn spec_check_certified_mode_rejects_low_slopes_with_exit_three() {
    let out = run(&["spec-check", "--alpha", "0", "--beta", "2", "--certified-only"]);
    assert_eq!(exit_code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("slope > 2"));
}

#[test]
fn spec_check_at_the_zero_orbit_witness_is_one_sided() {
    // One side certifies empty; the other carries finite hit evidence
    // only, so the verdict is "likely", not a certificate.
    let out = run(&["spec-check", "--alpha", "10/29", "--beta", "29/10"]);
    let lines = stdout_lines(&out);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(lines[0], "SPEC_LIKELY(depth=100)");
    let report: serde_json::Value = serde_json::from_str(&lines[1]).unwrap();
    assert_eq!(report["u"], "0,(1)");
    assert_eq!(report["k_u"]["verdict"], "EMPTY_CERTIFIED");
    assert_eq!(report["k_v"]["verdict"], "UNKNOWN");
}

#[test]
fn spec_check_accepts_an_explicit_critical_pair() {
    // A periodic pair decides exactly: a sequence of unbounded zero runs
    // against an all-zero floor is certified non-specified.
    let out = run(&["spec-check", "--u", "(0)", "--v", "1,(0)", "--depth", "10"]);
    let lines = stdout_lines(&out);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(lines[0], "NOT_SPEC_AT(n=10)");
    let report: serde_json::Value = serde_json::from_str(&lines[1]).unwrap();
    assert_eq!(report["k_v"]["verdict"], "INFINITE_CERTIFIED");

    // The same pair as finite truncations can only report growing
    // evidence, never a certificate.
    let u = vec!["0"; 50].join(",");
    let mut v_digits = vec!["1"];
    v_digits.extend(std::iter::repeat_n("0", 49));
    let v = v_digits.join(",");
    let out = run(&["spec-check", "--u", &u, "--v", &v, "--depth", "10"]);
    let lines = stdout_lines(&out);
    assert_eq!(lines[0], "UNKNOWN(growing=true)");
}

#[test]
fn witness_writes_nested_enclosures_and_honors_exit_contract() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    let out = run(&["witness", "--beta", "29/10", "--depth", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let chain = report["alpha"].as_array().unwrap();
    assert_eq!(chain.len(), 8);
    assert_eq!(report["ell"], 3);
    assert_eq!(report["certified"], false);
    assert_eq!(report["beta"], "29/10");
    // Every rational in the file round-trips through the p/q format.
    for pair in chain {
        for end in pair.as_array().unwrap() {
            abshift::numeric::parse_rational(end.as_str().unwrap()).unwrap();
        }
    }

    // Coarse depth still succeeds (exit 0) without certification.
    let out = run(&["witness", "--beta", "29/10", "--depth", "1"]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(report["alpha"].as_array().unwrap().len(), 1);
    assert_eq!(report["certified"], false);

    // A slope outside the certified window is bad input: exit 2.
    let out = run(&["witness", "--beta", "5/2"]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("slope_near_top=false"));
    // A stratum without at least two attractor digits is bad input too.
    let out = run(&["witness", "--beta", "3/2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn witness_cap_override_fails_searches_with_exit_four() {
    // An absurdly low interval cap turns the refinement into a capped
    // search: exit 4, and the output file must not exist.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("never.json");
    let out = bin()
        .args(["witness", "--beta", "29/10", "--depth", "8", "--out", path.to_str().unwrap()])
        .env("ABSHIFT_MAX_INTERVALS", "1")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 4);
    assert!(!path.exists());
}

#[test]
fn sweep_emits_the_documented_csv_layout() {
    let out = run(&[
        "sweep", "--ell", "3", "--start", "5/2", "--end", "3", "--steps", "5", "--depth", "2",
    ]);
    assert_eq!(exit_code(&out), 0);
    let lines = stdout_lines(&out);
    assert_eq!(
        lines[0],
        "beta,ell,tau_rigorous,tau_paper_formula,newhouse,s_min_admissible,s_max_in_unit,slope_near_top,witness_status"
    );
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("5/2,3,2,2/3,"));
    assert!(lines[1].ends_with("conditions_failed"));
    assert!(lines[5].starts_with("29/10,3,10/9,10/19,"));
    assert!(lines[5].ends_with("enclosure"));
    // Rationals in each row round-trip.
    for line in &lines[1..] {
        let beta = line.split(',').next().unwrap();
        abshift::numeric::parse_rational(beta).unwrap();
    }
}

#[test]
fn single_step_sweep_matches_single_point_commands() {
    let out = run(&[
        "sweep", "--ell", "3", "--start", "29/10", "--end", "3", "--steps", "1", "--depth", "2",
    ]);
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "29/10");
    assert_eq!(fields[2], "10/9");
    assert_eq!(fields[3], "10/19");
    // The row's witness status agrees with the witness command's outcome.
    let w = run(&["witness", "--beta", "29/10", "--depth", "2"]);
    assert_eq!(exit_code(&w), 0);
    assert_eq!(fields[8], "enclosure");
}

#[test]
fn sweep_json_round_trips_and_matches_csv_content() {
    let dir = tempfile::tempdir().unwrap();
    let jpath = dir.path().join("rows.json");
    let out = run(&[
        "sweep", "--ell", "3", "--start", "14/5", "--end", "29/10", "--steps", "3", "--depth",
        "2", "--format", "json", "--out", jpath.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let rows: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&jpath).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);
    assert_eq!(rows[0]["beta"], "14/5");
    assert_eq!(rows[0]["tau_rigorous"], "5/4");
    assert_eq!(rows[0]["conditions"]["slope_near_top"], true);
}

#[test]
fn sweep_rejects_bad_grids_and_leaves_no_file_behind() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    for args in [
        vec!["sweep", "--ell", "3", "--start", "3", "--end", "5/2", "--steps", "4"],
        vec!["sweep", "--ell", "3", "--start", "1", "--end", "2", "--steps", "4"],
        vec!["sweep", "--ell", "2", "--start", "3/2", "--end", "2", "--steps", "4"],
        vec!["sweep", "--ell", "3", "--start", "5/2", "--end", "3", "--steps", "0"],
    ] {
        let mut full = args.clone();
        let p = path.to_str().unwrap();
        full.extend(["--out", p]);
        let out = run(&full.iter().map(|s| &**s).collect::<Vec<_>>());
        assert_eq!(exit_code(&out), 2, "args: {args:?}");
        assert!(!path.exists(), "args: {args:?}");
    }
}

#[test]
fn dim_bound_prints_directed_lower_bounds() {
    let out = run(&["dim-bound", "--ell", "10"]);
    let lines = stdout_lines(&out);
    assert_eq!(exit_code(&out), 0);
    // 30 significant digits, truncated toward zero, of log2/log3 and
    // 1 + log2/log3.
    assert_eq!(lines[0], "fiber >= 0.630929753571457437099527114342");
    assert_eq!(lines[1], "product >= 1.63092975357145743709952711434");

    let out = run(&["dim-bound", "--ell", "3"]);
    let lines = stdout_lines(&out);
    assert!(lines[1].starts_with("product >= 1.4402273979"));

    let out = run(&["dim-bound", "--ell", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn closed_output_pipe_ends_the_process_quietly() {
    use std::io::Read;
    use std::process::Stdio;

    // Roughly 300 KB of partial-sum lines — far past the kernel pipe
    // buffer, so the child must block mid-write once the reader stops.
    let mut child = bin()
        .args(["expand", "--alpha", "10/29", "--beta", "29/10", "--x", "1/3", "--n", "600"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");

    let mut stdout = child.stdout.take().expect("piped stdout");
    let mut first = [0u8; 16];
    stdout.read_exact(&mut first).expect("some output arrives");
    drop(stdout); // close the read end -> EPIPE in the child

    let status = child.wait().expect("child exits");
    let mut stderr = String::new();
    child.stderr.take().expect("piped stderr").read_to_string(&mut stderr).unwrap();
    assert!(status.success(), "expected quiet exit, got {status:?}; stderr: {stderr}");
    assert!(stderr.is_empty(), "expected silent stderr, got: {stderr}");
}
