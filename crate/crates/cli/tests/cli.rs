use std::process::{Command, Output};

use f2quo_cli::{AutJson, FixedJson, GridJson, InfoJson, ReportJson, SocleJson};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_f2quo")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn info_prints_dual_number_tables() {
    let o = run(&["info", "--n", "1", "--r", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let expected = "\
algebra F2[X]/m^2  (n = 1, r = 1, dim = 2)
basis: 1, X

+\t0\t1\tX\t1+X
0\t0\t1\tX\t1+X
1\t1\t0\t1+X\tX
X\tX\t1+X\t0\t1
1+X\t1+X\tX\t1\t0

*\t0\t1\tX\t1+X
0\t0\t0\t0\t0
1\t0\t1\tX\t1+X
X\t0\tX\t0\tX
1+X\t0\t1+X\tX\t1
";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn info_json_omits_tables_for_larger_algebras() {
    let o = run(&["info", "--n", "2", "--r", "2", "--output", "json"]);
    let info: InfoJson = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(info.dim, 6);
    assert_eq!(info.basis, ["1", "X1", "X2", "X1^2", "X1*X2", "X2^2"]);
    assert!(info.multiplication_table.is_none());

    let o = run(&["info", "--n", "1", "--field-ideal", "--output", "json"]);
    let info: InfoJson = serde_json::from_str(&stdout(&o)).unwrap();
    let mul = info.multiplication_table.unwrap();
    // X * X = X modulo X^2 + X
    assert_eq!(mul.rows[2][2], "X");
}

#[test]
fn aut_reports_order_and_generators() {
    let o = run(&["aut", "--n", "2", "--r", "1", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let aut: AutJson = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(aut.aut_order, 6);
    let gens = aut.generators.unwrap();
    assert!(!gens.is_empty() && gens.iter().all(|g| g.len() == 2));

    let o = run(&["aut", "--n", "1", "--r", "1"]);
    assert!(stdout(&o).contains("automorphism group order: 1"));
}

#[test]
fn fixed_and_socle_commands() {
    let o = run(&["fixed", "--n", "1", "--r", "2", "--output", "json"]);
    let fixed: FixedJson = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(fixed.sa_basis, ["1", "X^2"]);
    assert!(!fixed.sa_trivial);

    let o = run(&["fixed", "--n", "3", "--r", "1", "--output", "json"]);
    let fixed: FixedJson = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(fixed.aut_order, 168);
    assert!(fixed.sa_trivial);

    let o = run(&["socle", "--n", "1", "--r", "3", "--output", "json"]);
    let soc: SocleJson = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(soc.socle_basis, ["X^3"]);
    assert_eq!(soc.nilradical_dim, 3);
}

#[test]
fn grid_to_dim_six_flags_only_the_fixed_quadric() {
    let o = run(&["grid", "--max-dim", "6", "--output", "json"]);
    // (2,2) carries the fixed element X1^2+X1*X2+X2^2, so the run fails
    assert_eq!(o.status.code(), Some(1));
    let grid: GridJson = serde_json::from_str(&stdout(&o)).unwrap();
    let covered: Vec<(usize, usize)> = grid.reports.iter().map(|r| (r.n, r.r.unwrap())).collect();
    assert_eq!(
        covered,
        [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 1), (2, 2), (3, 1), (4, 1), (5, 1)]
    );
    let failing: Vec<(usize, usize)> = grid
        .reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| (r.n, r.r.unwrap()))
        .collect();
    assert_eq!(failing, [(2, 2)]);
    assert!(grid.skipped.is_empty());
}

#[test]
fn verify_exit_status() {
    assert_eq!(run(&["verify", "--n", "1", "--r", "3"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--n", "3", "--r", "1"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--n", "2", "--field-ideal"]).status.code(), Some(0));
    let o = run(&["verify", "--n", "2", "--r", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample: X1^2+X1*X2+X2^2"));
}

#[test]
fn invalid_arguments_exit_2() {
    assert_eq!(run(&["info", "--n", "0", "--r", "1"]).status.code(), Some(2));
    assert_eq!(run(&["info", "--n", "1", "--r", "0"]).status.code(), Some(2));
    assert_eq!(run(&["info", "--r", "1"]).status.code(), Some(2));
    assert_eq!(run(&["info", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["info", "--n", "1", "--r", "1", "--field-ideal"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["info", "--n", "1", "--r", "1", "--output", "xml"]).status.code(), Some(2));
}

#[test]
fn budget_and_cap_exit_3() {
    let o = run(&["aut", "--n", "2", "--r", "2", "--brute-budget", "10", "--structured-budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the budget"));
    assert_eq!(run(&["info", "--n", "3", "--r", "4"]).status.code(), Some(3));
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        &["verify", "--n", "1", "--r", "3", "--output", "json"][..],
        &["grid", "--max-dim", "4", "--output", "json"][..],
    ] {
        let text = stdout(&run(args));
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text);
        if args[0] == "verify" {
            let typed: ReportJson = serde_json::from_str(&text).unwrap();
            assert_eq!(serde_json::to_string_pretty(&typed).unwrap() + "\n", text);
        }
    }
}

#[test]
fn report_keys_and_timing() {
    let text = stdout(&run(&["verify", "--n", "2", "--r", "1", "--output", "json"]));
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
    for key in ["ideal", "n", "r", "dim", "aut_order", "sa_dim", "sa_trivial", "socle_dim", "socle_in_sa", "method", "elapsed_ms"] {
        assert!(keys.contains(&key), "missing {key}");
    }
    assert_eq!(value["ideal"], "maximal_power");
    assert!(value["elapsed_ms"].is_null());
    let timed = stdout(&run(&["verify", "--n", "2", "--r", "1", "--output", "json", "--timing"]));
    let timed: serde_json::Value = serde_json::from_str(&timed).unwrap();
    assert!(timed["elapsed_ms"].is_u64());
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        &["grid", "--max-dim", "5", "--output", "json"][..],
        &["grid", "--max-dim", "5"][..],
        &["aut", "--n", "2", "--r", "2"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
    }
}
