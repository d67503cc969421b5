//! End-to-end runs of the charseq binary: golden outputs, exit codes, and
//! JSON self-consistency (every output parses back through its own type).

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use charseq::{ComplexityProfile, FieldDescriptor, Method, SequenceJson};
use charseq_cli::verify::{PieceVerdict, Verdict, VerifyReport};
use charseq_cli::LcReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charseq"))
        .args(args)
        .env_remove("CHARSEQ_BUDGET")
        .output()
        .expect("binary runs")
}

fn run_with(args: &[&str], stdin: &str, envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_charseq"));
    cmd.args(args)
        .env_remove("CHARSEQ_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary spawns");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary exits")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "expected success, got {:?}; stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn tmp_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn field_golden_and_round_trip() {
    let out = run(&["field", "--p", "3", "--r", "2"]);
    let text = stdout_of(&out);
    assert_eq!(
        text.trim_end(),
        r#"{"p":3,"r":2,"modulus":[1,0,1],"alpha_index":4,"basis":[1,3]}"#
    );
    let field: FieldDescriptor = serde_json::from_str(&text).unwrap();
    assert_eq!(field.q(), 9);

    let signed = stdout_of(&run(&["field", "--p", "3", "--r", "2", "--gamma-sign=-1"]));
    let field: FieldDescriptor = serde_json::from_str(&signed).unwrap();
    assert_eq!(field.basis(), &[1, 4]);
    assert_eq!(field.alpha_index(), 3);
}

#[test]
fn field_rejects_bad_arguments() {
    assert_eq!(exit_code(&run(&["field", "--p", "4", "--r", "1"])), 2);
    assert_eq!(exit_code(&run(&["field", "--p", "3", "--r", "20"])), 2);
    // clap reports conflicting flags with exit 2 as well
    let out = run(&[
        "field",
        "--p",
        "3",
        "--r",
        "2",
        "--gamma-sign",
        "+1",
        "--gamma-index",
        "4",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(
        exit_code(&run(&[
            "field",
            "--p",
            "3",
            "--r",
            "2",
            "--gamma-sign",
            "2"
        ])),
        2
    );
}

#[test]
fn gen_goldens() {
    let char3 = stdout_of(&run(&[
        "gen",
        "--kind",
        "character",
        "--p",
        "3",
        "--r",
        "2",
    ]));
    assert_eq!(char3.trim_end(), "000011011");
    assert!(char3.starts_with('0'));

    let indexed = stdout_of(&run(&[
        "gen", "--kind", "indexed", "--p", "3", "--r", "2", "--d", "2",
    ]));
    assert_eq!(indexed, char3);

    let modified = stdout_of(&run(&["gen", "--kind", "modified", "--p", "3", "--r", "2"]));
    assert_eq!(modified.trim_end(), "001010110");

    let sidelnikov = stdout_of(&run(&[
        "gen",
        "--kind",
        "sidelnikov",
        "--p",
        "3",
        "--r",
        "2",
    ]));
    assert_eq!(sidelnikov.trim_end(), "00100111");

    let minus = stdout_of(&run(&[
        "gen",
        "--kind",
        "character",
        "--p",
        "3",
        "--r",
        "2",
        "--gamma-sign=-1",
    ]));
    assert_eq!(minus.trim_end(), "000110101");
}

#[test]
fn gen_alpha_override_changes_log_based_sequences() {
    // with d = q - 1 the symbols are the discrete logs themselves; swapping
    // the generator from 1+x (index 4) to its cube (index 7) multiplies
    // every log by 3 mod 8
    let default = stdout_of(&run(&[
        "gen", "--kind", "indexed", "--p", "3", "--r", "2", "--d", "8",
    ]));
    assert_eq!(default.trim_end(), "004617235");
    let cubed = stdout_of(&run(&[
        "gen", "--kind", "indexed", "--p", "3", "--r", "2", "--d", "8", "--alpha", "7",
    ]));
    let expected: String = default
        .trim_end()
        .chars()
        .map(|c| char::from_digit(c.to_digit(10).unwrap() * 3 % 8, 10).unwrap())
        .collect();
    assert_eq!(cubed.trim_end(), expected);
    // a non-generator is rejected
    assert_eq!(
        exit_code(&run(&[
            "gen", "--kind", "indexed", "--p", "3", "--r", "2", "--d", "8", "--alpha", "3",
        ])),
        2
    );
}

#[test]
fn gen_rejects_bad_specs() {
    assert_eq!(
        exit_code(&run(&["gen", "--kind", "modified", "--p", "3", "--r", "1"])),
        2
    );
    assert_eq!(
        exit_code(&run(&["gen", "--kind", "indexed", "--p", "3", "--r", "2"])),
        2
    );
    assert_eq!(
        exit_code(&run(&[
            "gen",
            "--kind",
            "character",
            "--p",
            "3",
            "--r",
            "2",
            "--d",
            "2"
        ])),
        2
    );
}

#[test]
fn gen_json_round_trips_and_feeds_lc() {
    let json = stdout_of(&run(&[
        "gen",
        "--kind",
        "sidelnikov",
        "--p",
        "3",
        "--r",
        "2",
        "--format",
        "json",
    ]));
    let wire: SequenceJson = serde_json::from_str(&json).unwrap();
    assert_eq!(wire.period, 8);
    assert_eq!(wire.chi_zero_positions, vec![0]);
    assert_eq!(serde_json::to_string(&wire).unwrap(), json.trim_end());

    // the JSON form is accepted back by the analysis commands
    let lc_out = run_with(&["lc", "--stdin"], &json, &[]);
    let report: LcReport = serde_json::from_str(&stdout_of(&lc_out)).unwrap();
    assert_eq!(report.period, 8);
    assert_eq!(report.lc, report.bm_crosscheck);
}

#[test]
fn gen_writes_output_file() {
    let path = tmp_path("gen_char3.txt");
    let _ = std::fs::remove_file(&path);
    stdout_of(&run(&[
        "gen",
        "--kind",
        "character",
        "--p",
        "3",
        "--r",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "000011011\n");
}

#[test]
fn lc_examples() {
    let zeros = run_with(&["lc", "--stdin"], "000000000\n", &[]);
    let report: LcReport = serde_json::from_str(&stdout_of(&zeros)).unwrap();
    assert_eq!(report.lc, 0);
    assert_eq!(report.bm_crosscheck, 0);
    assert!(report.characteristic_poly.degree() == Some(0));

    let char3 = run_with(&["lc", "--stdin"], "000011011", &[]);
    let text = stdout_of(&char3);
    assert_eq!(
        text.trim_end(),
        r#"{"period":9,"lc":6,"characteristic_poly":{"degree":6,"hex":"49"},"bm_crosscheck":6}"#
    );

    let alternating = run_with(&["lc", "--stdin"], "010101\n", &[]);
    let report: LcReport = serde_json::from_str(&stdout_of(&alternating)).unwrap();
    assert_eq!(report.lc, 2);
    assert_eq!(report.bm_crosscheck, 2);

    assert_eq!(exit_code(&run_with(&["lc", "--stdin"], "01x1\n", &[])), 2);
    assert_eq!(exit_code(&run(&["lc"])), 2); // neither --input nor --stdin
    assert_eq!(exit_code(&run(&["lc", "--input", "/nonexistent/path"])), 2);
}

#[test]
fn klc_full_profile() {
    let out = run_with(&["klc", "--stdin", "--k-max", "9"], "000011011\n", &[]);
    let profile: ComplexityProfile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(profile.period, 9);
    assert_eq!(profile.entries.len(), 10);
    let lcs: Vec<usize> = profile.entries.iter().map(|e| e.lc).collect();
    assert_eq!(lcs, vec![6, 6, 2, 2, 0, 0, 0, 0, 0, 0]);
    assert!(lcs.windows(2).all(|w| w[0] >= w[1]));

    let single = run_with(&["klc", "--stdin", "--k-max", "0"], "000011011\n", &[]);
    let profile: ComplexityProfile = serde_json::from_str(&stdout_of(&single)).unwrap();
    assert_eq!(profile.entries.len(), 1);
    assert_eq!(profile.entries[0].lc, 6);

    assert_eq!(
        exit_code(&run_with(
            &["klc", "--stdin", "--k-max", "10"],
            "000011011\n",
            &[]
        )),
        2
    );
}

#[test]
fn klc_enum_on_p7_respects_bound() {
    let seq = stdout_of(&run(&[
        "gen",
        "--kind",
        "character",
        "--p",
        "7",
        "--r",
        "2",
    ]));
    let out = run_with(
        &["klc", "--stdin", "--k-max", "2", "--method", "enum"],
        &seq,
        &[],
    );
    let profile: ComplexityProfile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(profile.period, 49);
    for e in &profile.entries {
        assert!(e.lc >= 21, "k = {}: lc = {}", e.k, e.lc);
        assert_eq!(e.method, Method::ExactEnum);
    }

    // T = 49 is over the full-enumeration cap
    let full = run_with(
        &["klc", "--stdin", "--k-max", "2", "--method", "full"],
        &seq,
        &[],
    );
    assert_eq!(exit_code(&full), 2);
}

#[test]
fn klc_budget_degrades_entries() {
    let seq = stdout_of(&run(&[
        "gen",
        "--kind",
        "character",
        "--p",
        "7",
        "--r",
        "2",
    ]));
    // budget 49 allows weight 1 (C(49,1) = 49) but not weight 2
    let out = run_with(
        &[
            "klc", "--stdin", "--k-max", "3", "--method", "enum", "--budget", "49",
        ],
        &seq,
        &[],
    );
    let profile: ComplexityProfile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(profile.entries[1].method, Method::ExactEnum);
    assert_eq!(profile.entries[2].method, Method::BoundOnly);
    assert_eq!(profile.entries[3].method, Method::BoundOnly);

    // the environment variable is an equivalent knob
    let env_out = run_with(
        &["klc", "--stdin", "--k-max", "3", "--method", "enum"],
        &seq,
        &[("CHARSEQ_BUDGET", "49")],
    );
    assert_eq!(stdout_of(&env_out), stdout_of(&out));
    let bad_env = run_with(
        &["klc", "--stdin", "--k-max", "3"],
        &seq,
        &[("CHARSEQ_BUDGET", "many")],
    );
    assert_eq!(exit_code(&bad_env), 2);
}

#[test]
fn verify_theorem_1() {
    let out = run(&["verify", "--theorem", "1", "--p", "7", "--r", "2"]);
    let report: VerifyReport = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report.verdict, Verdict::Match);
    assert_eq!(report.pieces[0].value, Some(21));
    assert!(report.pieces[0].measured_min.unwrap() >= 21);
    assert_eq!(report.pieces[0].verdict, PieceVerdict::Match);
    assert!(report.timing_ms.is_none());

    // r = 3 runs the same check on period p^3
    let cubic = run(&["verify", "--theorem", "1", "--p", "3", "--r", "3"]);
    let report: VerifyReport = serde_json::from_str(&stdout_of(&cubic)).unwrap();
    assert_eq!(report.parameters.r, 3);
    assert_eq!(report.pieces[0].value, Some(18));
    assert_eq!(report.verdict, Verdict::Match);
}

#[test]
fn verify_exact_profiles_p3_p5() {
    for (theorem, p, sign) in [
        ("3", "3", "+1"),
        ("3", "5", "+1"),
        ("4", "3", "-1"),
        ("4", "5", "-1"),
    ] {
        let out = run(&[
            "verify",
            "--theorem",
            theorem,
            "--p",
            p,
            "--gamma-sign",
            sign,
        ]);
        assert_eq!(exit_code(&out), 0, "theorem {theorem}, p = {p}");
        let report: VerifyReport = serde_json::from_str(&stdout_of(&out)).unwrap();
        assert_eq!(report.verdict, Verdict::Match);
        for piece in &report.pieces {
            match piece.kind {
                charseq::PieceKind::Exact => {
                    assert_eq!(piece.verdict, PieceVerdict::Match);
                    assert_eq!(piece.measured_min, piece.measured_max);
                    assert_eq!(piece.measured_min.map(|v| v as u64), piece.value);
                }
                _ => assert_eq!(piece.verdict, PieceVerdict::Unchecked),
            }
        }
    }
}

#[test]
fn verify_theorem_2_both_signs() {
    for (p, sign) in [("3", "+1"), ("3", "-1"), ("5", "+1"), ("5", "-1")] {
        let out = run(&["verify", "--theorem", "2", "--p", p, "--gamma-sign", sign]);
        assert_eq!(exit_code(&out), 0, "p = {p}, sign = {sign}");
        let report: VerifyReport = serde_json::from_str(&stdout_of(&out)).unwrap();
        assert_eq!(report.verdict, Verdict::Match);
        assert_eq!(report.pieces[0].verdict, PieceVerdict::Match);
    }
}

#[test]
fn verify_enum_path_with_budget() {
    // period 169 exceeds the full-enumeration cap; a small budget keeps the
    // support enumeration to weights 0 and 1, the rest stays unchecked
    let out = run_with(
        &["verify", "--theorem", "3", "--p", "13"],
        "",
        &[("CHARSEQ_BUDGET", "2000")],
    );
    assert_eq!(exit_code(&out), 0);
    let report: VerifyReport = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report.verdict, Verdict::Match);
    // k = 0 piece: LC = p^2 - 1 = 168, measured exactly
    assert_eq!(report.pieces[0].value, Some(168));
    assert_eq!(report.pieces[0].verdict, PieceVerdict::Match);
    assert_eq!(report.pieces[0].measured_min, Some(168));
    // k in [1, 11] piece: only k = 1 measured exactly, and it matches 157
    assert_eq!(report.pieces[1].value, Some(157));
    assert_eq!(report.pieces[1].verdict, PieceVerdict::Match);
    // the zero tail is out of enumeration reach
    assert_eq!(
        report.pieces.last().unwrap().verdict,
        PieceVerdict::Unchecked
    );
}

#[test]
fn verify_rejects_unmet_hypotheses_and_bad_flags() {
    let out = run(&["verify", "--theorem", "3", "--p", "7"]);
    assert_eq!(exit_code(&out), 2);
    let report: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert!(report["error"]
        .as_str()
        .unwrap()
        .contains("hypotheses not satisfied"));

    assert_eq!(
        exit_code(&run(&[
            "verify",
            "--theorem",
            "3",
            "--p",
            "5",
            "--gamma-sign=-1"
        ])),
        2
    );
    assert_eq!(
        exit_code(&run(&["verify", "--theorem", "5", "--p", "5"])),
        2
    );
    assert_eq!(
        exit_code(&run(&["verify", "--theorem", "1", "--p", "1093"])),
        2
    );
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let args = ["verify", "--theorem", "3", "--p", "3"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);

    // timing data only appears under --timing
    let timed = run(&["verify", "--theorem", "3", "--p", "3", "--timing"]);
    let report: VerifyReport = serde_json::from_str(&stdout_of(&timed)).unwrap();
    assert!(report.timing_ms.is_some());
}

#[test]
fn text_format_is_available() {
    let out = run(&["verify", "--theorem", "4", "--p", "3", "--format", "text"]);
    let text = stdout_of(&out);
    assert!(text.contains("verdict: match"));
    let out = run(&["field", "--p", "3", "--r", "2", "--format", "text"]);
    assert!(stdout_of(&out).contains("alpha_index = 4"));
    let out = run_with(&["lc", "--stdin", "--format", "text"], "000011011", &[]);
    assert!(stdout_of(&out).contains("lc = 6"));
    let out = run_with(
        &["klc", "--stdin", "--k-max", "2", "--format", "text"],
        "000011011",
        &[],
    );
    assert!(stdout_of(&out).contains("k =   2: lc ="));
}
