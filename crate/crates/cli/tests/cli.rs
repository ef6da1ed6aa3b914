use std::path::PathBuf;
use std::process::{Command, Output};

fn uniclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uniclass")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("uniclass-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn spectrum_reports_and_writes_stable_json() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    for path in [&a, &b] {
        let o = uniclass(&["spectrum", "--geometry", "PG(3,2)", "--auto", "symplectic-polarity", "--json", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        assert!(text.contains("uniclass: true"));
        assert!(text.contains("fix_diagram: ²A¹_{3;2}"));
        assert!(text.contains("theorem_a: BICONDITIONAL_OK"));
    }
    let ja = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ja, std::fs::read_to_string(&b).unwrap());
    let v: serde_json::Value = serde_json::from_str(&ja).unwrap();
    assert_eq!(v["report"]["chambers_examined"], 315);
    assert_eq!(v["report"]["position_histogram"]["d0"].as_u64().unwrap() + v["report"]["position_histogram"]["d2"].as_u64().unwrap(), 105);
}

#[test]
fn zoo_rows_all_match() {
    let o = uniclass(&["zoo"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(!text.contains("MISMATCH"));
    assert!(text.lines().filter(|l| l.ends_with(" ok")).count() >= 10);
}

#[test]
fn theorem_a_sweep_flags_only_the_non_simply_laced_case() {
    let o = uniclass(&["theorem-a", "--geometry", "PG(2,2)", "--geometry", "PQ(3,2)", "--random-autos", "5"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("PG(2,2) [A2] full group: 336 maps"));
    assert!(text.lines().any(|l| l.starts_with("PG(2,2)") && l.ends_with("BICONDITIONAL_OK")));
    assert!(text.contains("VIOLATION (expected: not simply laced)"));
}

#[test]
fn classify_22p_counts() {
    let o = uniclass(&["classify-22p"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("nontrivial {2,2'}-kangaroos 21, central 21 = 21 elations + 0 homologies, baer 0"));
    assert!(text.contains("result: ok"));
}

#[test]
fn diagram_cross_check() {
    let o = uniclass(&["diagram", "--geometry", "HQ(4,2)", "--auto", "spread"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("fix: D²_{4;2}"));
    assert!(text.contains("duality_row: match"));
}

#[test]
fn oracle_check_agrees() {
    let o = uniclass(&["oracle-check", "--geometry", "PG(2,2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("agreement: 441/441"));
    let o = uniclass(&["oracle-check", "--geometry", "HQ(4,2)", "--pairs", "300"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("agreement: 300/300"));
}

#[test]
fn config_file_with_flag_override() {
    let ini = scratch("run.ini");
    std::fs::write(
        &ini,
        "[geometry]\nlabel = PG(3,2)\n\n[automorphism]\nconstructor = spread\n\n[run]\nmode = exhaustive\nchecks = spectrum,uniclass\n",
    )
    .unwrap();
    let o = uniclass(&["spectrum", "--config", ini.to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("automorphism: spread"));
    assert!(text.contains("uniclass: true"));
    assert!(!text.contains("substructure:"));
    let o = uniclass(&["spectrum", "--config", ini.to_str().unwrap(), "--auto", "identity"]);
    assert!(stdout(&o).contains("automorphism: identity"));
}

#[test]
fn usage_and_budget_errors_exit_with_two() {
    let o = uniclass(&["spectrum", "--geometry", "PG(5,3)", "--auto", "identity"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("chamber cap"));
    assert_eq!(uniclass(&["spectrum", "--geometry", "XX(3,2)", "--auto", "identity"]).status.code(), Some(2));
    assert_eq!(uniclass(&["spectrum", "--geometry", "PG(3,2)", "--auto", "nonsense"]).status.code(), Some(2));
    assert_eq!(uniclass(&["spectrum", "--geometry", "HQ(4,2)", "--auto", "symplectic-polarity"]).status.code(), Some(2));
    assert_eq!(uniclass(&["spectrum", "--geometry", "PG(3,2)", "--mode", "fast"]).status.code(), Some(2));
}

#[test]
fn sampled_mode_is_seeded() {
    let run = || {
        stdout(&uniclass(&[
            "spectrum", "--geometry", "PG(4,3)", "--auto", "random#3", "--mode", "sample", "--samples", "200", "--seed", "5",
        ]))
    };
    let one = run();
    assert!(one.contains("chambers: 200"), "{one}");
    assert_eq!(one, run());
}
