use std::process::{Command, Output};

use serde_json::Value;

fn ducci(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ducci"));
    cmd.args(args)
        .env_remove("DUCCI_MAX_STEPS")
        .env_remove("DUCCI_MAX_STATES")
        .env_remove("DUCCI_CACHE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn classify_outputs() {
    let out = ducci(
        &["classify", "--n", "4", "--m", "3", "--format", "json"],
        &[],
    );
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["classification"], "h-closed");
    assert_eq!(v["alpha"], 2);
    assert_eq!(v["beta_canonical"], -1);

    let out = ducci(&["classify", "--n", "2", "--m", "2"], &[]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("h-closed-trivial"));

    let out = ducci(
        &["classify", "--n", "7", "--m", "2", "--format", "csv"],
        &[],
    );
    assert_eq!(
        stdout(&out).lines().nth(1).unwrap().rsplit(',').next(),
        Some("not-weakly-h-closed")
    );
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        &["classify", "--n", "0", "--m", "5"][..],
        &["classify", "--n", "1", "--m", "5"],
        &["classify", "--n", "4", "--m", "1"],
        &["classify", "--n", "4"],
        &["verify", "--theorem", "2", "--pairs", "4:5"],
        &["verify", "--theorem", "9"],
        &["graph", "--n", "3", "--m", "6", "--start", "0,0"],
        &["graph", "--n", "3", "--m", "6", "--start", "0, 0,1"],
        &["scan", "--family", "odd"],
        &["table", "--pairs", "4:3", "--filter", "odd"],
        &["table", "--pairs", "0:3"],
        &["coeff", "--n", "3", "--r", "4"],
    ] {
        assert_eq!(code(&ducci(args, &[])), 2, "{args:?}");
    }
}

#[test]
fn resource_caps_exit_3() {
    let out = ducci(
        &["classify", "--n", "11", "--m", "17", "--max-steps", "1000"],
        &[],
    );
    assert_eq!(code(&out), 3);
    let out = ducci(
        &["oracle", "--n", "12", "--m", "3", "--max-states", "1000"],
        &[],
    );
    assert_eq!(code(&out), 3);
    let out = ducci(
        &[
            "graph",
            "--n",
            "3",
            "--m",
            "10",
            "--start",
            "0,0,1",
            "--max-nodes",
            "5",
        ],
        &[],
    );
    assert_eq!(code(&out), 3);
    let out = ducci(
        &["coeff", "--n", "3", "--r", "20000", "--mode", "exact"],
        &[],
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn environment_budgets_yield_to_flags() {
    let args = ["classify", "--n", "5", "--m", "23"];
    assert_eq!(code(&ducci(&args, &[("DUCCI_MAX_STEPS", "10")])), 3);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--max-steps", "100000"]);
    assert_eq!(code(&ducci(&with_flag, &[("DUCCI_MAX_STEPS", "10")])), 0);

    let oracle = ["oracle", "--n", "4", "--m", "3"];
    assert_eq!(code(&ducci(&oracle, &[("DUCCI_MAX_STATES", "10")])), 3);
    let mut with_flag = oracle.to_vec();
    with_flag.extend(["--max-states", "100"]);
    assert_eq!(code(&ducci(&with_flag, &[("DUCCI_MAX_STATES", "10")])), 0);
}

#[test]
fn table_sweep_resumes_and_reports_unresolved() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let cache = cache.to_str().unwrap();
    let args = [
        "table",
        "--pairs",
        "4:3,7:2,6:4,11:17",
        "--cache",
        cache,
        "--max-steps",
        "1000000",
    ];
    let first = ducci(&args, &[]);
    assert_eq!(code(&first), 3);
    let text = stdout(&first);
    assert!(text.contains("7,2,"));
    assert!(text.lines().any(|l| l == "11,17,,,,,,,unresolved"));
    let lines = std::fs::read_to_string(dir.path().join("c.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 3);

    let second = ducci(&args, &[]);
    assert_eq!(stdout(&first), stdout(&second));
    let err = String::from_utf8(second.stderr).unwrap();
    assert!(
        err.contains("1 computed") && err.contains("3 from cache"),
        "{err}"
    );

    let mut all = args.to_vec();
    let last = all.len() - 1;
    all[last] = "100000000";
    let third = ducci(&all, &[]);
    assert_eq!(code(&third), 0);
    assert!(stdout(&third).contains("11,17,0,7809208,"));
}

#[test]
fn printed_closed_block_for_n4() {
    let pairs = "4:3,4:6,4:7,4:9,4:11,4:12,4:14,4:19,4:21,4:33";
    let dir = tempfile::tempdir().unwrap();
    let expect = dir.path().join("expect.csv");
    let rows: Vec<String> = [
        (3, 2, -1),
        (6, 2, -1),
        (7, 6, -1),
        (9, 6, 1),
        (11, 10, -1),
        (12, 2, -1),
        (14, 6, -1),
        (19, 18, -1),
        (21, 12, -1),
        (33, 10, -1),
    ]
    .iter()
    .map(|(m, a, b)| format!("4,{m},h-closed,{a},{b}"))
    .collect();
    std::fs::write(
        &expect,
        format!("n,m,classification,alpha,beta\n{}\n", rows.join("\n")),
    )
    .unwrap();
    let out = ducci(
        &[
            "table",
            "--pairs",
            pairs,
            "--expect",
            expect.to_str().unwrap(),
            "--format",
            "json",
        ],
        &[],
    );
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let agreement = v["agreement"].as_array().unwrap();
    assert_eq!(agreement.len(), 10);
    for a in agreement {
        if a["expected"]["m"] == 21 {
            assert_eq!(a["status"], "disagree");
            assert_eq!(a["observed_classification"], "weakly-h-closed");
            assert_eq!(
                (a["observed_alpha"].clone(), a["observed_beta"].clone()),
                (12.into(), 2.into())
            );
        } else {
            assert_eq!(a["status"], "agree", "{a}");
        }
    }
    assert_eq!(v["sections"]["h-closed"].as_array().unwrap().len(), 9);
}

#[test]
fn tables_match_across_formats_and_jobs() {
    for format in ["csv", "json", "text"] {
        let a = ducci(
            &[
                "table",
                "--n-range",
                "4-6",
                "--m-range",
                "3-12",
                "--jobs",
                "1",
                "--format",
                format,
            ],
            &[],
        );
        let b = ducci(
            &[
                "table",
                "--n-range",
                "4-6",
                "--m-range",
                "3-12",
                "--jobs",
                "8",
                "--format",
                format,
            ],
            &[],
        );
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
    let csv = stdout(&ducci(
        &["table", "--n-range", "4-12", "--m-range", "3-12"],
        &[],
    ));
    assert_eq!(
        csv.lines().next(),
        Some("n,m,L,P,alpha,beta_canonical,betas_raw,gamma,classification")
    );
    assert_eq!(csv.lines().count(), 91);
}

#[test]
fn verify_selectors() {
    let out = ducci(
        &["verify", "--theorem", "2", "--pairs", "4:3,6:5,8:7,12:11"],
        &[],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("4 of 4 passed\n"));
    let out = ducci(&["verify", "--theorem", "1.2", "--m-max", "200"], &[]);
    assert_eq!(code(&out), 0);
    let primes = (5..=200u64)
        .filter(|&m| ducci::arith::is_prime(m) && m % 6 == 5)
        .count();
    assert!(stdout(&out).ends_with(&format!("{primes} of {primes} passed\n")));
    let out = ducci(
        &[
            "verify",
            "--theorem",
            "1.3",
            "--l-max",
            "1",
            "--primes",
            "5",
        ],
        &[],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("note D^(p-1)(w) = w: expected true, observed false"));
    let out = ducci(&["verify", "--theorem", "1.2", "--m-max", "3"], &[]);
    assert_eq!(code(&out), 2);
}

#[test]
fn graph_dot_files() {
    let dir = tempfile::tempdir().unwrap();
    for (m, nodes, cycle) in [("6", 12, 6), ("10", 24, 12)] {
        let path = dir.path().join(format!("z{m}.dot"));
        let out = ducci(
            &[
                "graph",
                "--n",
                "3",
                "--m",
                m,
                "--start",
                "0,0,1",
                "--output",
                path.to_str().unwrap(),
            ],
            &[],
        );
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).starts_with(&format!("nodes={nodes} edges={nodes} cycle={cycle} ")));
        let dot = std::fs::read_to_string(&path).unwrap();
        assert_eq!(dot.lines().filter(|l| l.contains(" -> ")).count(), nodes);
    }
    let out = ducci(&["graph", "--n", "2", "--m", "2", "--start", "0,0"], &[]);
    let dot = stdout(&out);
    assert!(dot.contains("  \"0,0\" -> \"0,0\";\n"));
    assert_eq!(
        dot.lines()
            .filter(|l| !l.contains("->") && l.ends_with("\";"))
            .count(),
        4
    );
}

#[test]
fn oracle_coeff_scan() {
    let v: Value =
        serde_json::from_str(&stdout(&ducci(&["oracle", "--n", "12", "--m", "3"], &[]))).unwrap();
    assert_eq!(v["universal_betas"], serde_json::json!([0, 3, 6, 9]));

    let v: Value = serde_json::from_str(&stdout(&ducci(
        &["coeff", "--n", "3", "--m", "100", "--r", "4"],
        &[],
    )))
    .unwrap();
    assert_eq!(v["values"], serde_json::json!([5, 5, 6]));

    let out = ducci(
        &[
            "scan",
            "--family",
            "even-prime-power",
            "--n",
            "4,6,8",
            "--p-max",
            "30",
        ],
        &[],
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let row = |n: &str, m: &str| {
        text.lines()
            .find(|l| l.split(',').nth(1) == Some(n) && l.split(',').nth(2) == Some(m))
            .unwrap_or_else(|| panic!("row {n},{m}"))
            .to_string()
    };
    assert!(row("4", "3").starts_with("even-prime-power,4,3,2,-1,true,h-closed,2,-1,true"));
    assert!(row("6", "25").contains(",20,1,true,h-closed,20,1,true"));
    assert!(row("8", "7").contains(",6,-1,true,h-closed,6,-1,true"));
}
