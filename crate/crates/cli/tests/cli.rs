use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::Parser;
use cwf_cli::{
    cmd_check, cmd_color, cmd_gen, cmd_probe, cmd_term, run, Cli, ExitStatus, Method, TermOptions,
};
use cwf_core::cw::{verify_term, CwTerm};
use cwf_core::decompose::ReportDoc;
use cwf_core::{parse_graph, Graph};
use tempfile::TempDir;

fn write_graph(dir: &TempDir, name: &str, g: &Graph) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, g.to_dimacs()).unwrap();
    p
}

fn cli(args: &[&str]) -> (ExitStatus, String) {
    let parsed = Cli::try_parse_from(std::iter::once("cwf").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    let status = run(&parsed, &mut out);
    (status, String::from_utf8(out).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reports_class_and_hexagon() {
    let dir = TempDir::new().unwrap();
    let c6 = write_graph(&dir, "c6.txt", &Graph::cycle(6));
    let c4 = write_graph(&dir, "c4.txt", &Graph::cycle(4));
    let k4 = write_graph(&dir, "k4.txt", &Graph::complete(4));

    let o = cmd_check(&c6);
    assert_eq!(o.status, ExitStatus::Success);
    assert!(o.text.contains("in class, C6 found"));

    let o = cmd_check(&c4);
    assert_eq!(o.status, ExitStatus::Negative);
    assert_eq!(o.json["class"]["pattern"], "C4");

    let o = cmd_check(&k4);
    assert_eq!(o.status, ExitStatus::Negative);
    assert!(o.text.contains("in class but no C6"));
}

#[test]
fn unreadable_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.txt");
    assert_eq!(cmd_check(&missing).status, ExitStatus::Usage);
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "p edge 2 1\ne 1 3\n").unwrap();
    assert_eq!(cmd_check(&bad).status, ExitStatus::Usage);
}

#[test]
fn term_writes_term_and_report() {
    let dir = TempDir::new().unwrap();
    let gen_out = dir.path().join("inst.txt");
    let (st, _) = cli(&[
        "gen",
        "--kind",
        "instance",
        "--preset",
        "triangle-config",
        "--seed",
        "1",
        "--out",
        s(&gen_out),
    ]);
    assert_eq!(st, ExitStatus::Success);

    let out = dir.path().join("inst.term.json");
    let o = cmd_term(
        &gen_out,
        &TermOptions {
            out: Some(out.clone()),
            verify: true,
            max_width: 27,
        },
    );
    assert_eq!(o.status, ExitStatus::Success, "{}", o.text);
    assert!(o.json["width"].as_u64().unwrap() <= 27);

    let g = parse_graph(&std::fs::read_to_string(&gen_out).unwrap()).unwrap();
    let t: CwTerm = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(verify_term(&t, &g).unwrap().is_ok());
    let report_file = dir.path().join("inst.term.json.report.json");
    let doc: ReportDoc =
        serde_json::from_str(&std::fs::read_to_string(report_file).unwrap()).unwrap();
    assert!(doc.all_pass);
}

#[test]
fn term_on_hexagon_and_outside_the_class() {
    let dir = TempDir::new().unwrap();
    let c6 = write_graph(&dir, "c6.txt", &Graph::cycle(6));
    let o = cmd_term(&c6, &TermOptions::default());
    assert_eq!(o.status, ExitStatus::Success);
    assert!(o.json["width"].as_u64().unwrap() <= 7);

    let p6 = write_graph(&dir, "p6.txt", &Graph::path(6));
    assert_eq!(
        cmd_term(&p6, &TermOptions::default()).status,
        ExitStatus::Negative
    );

    let rnd = dir.path().join("rnd.txt");
    let (st, _) = cli(&[
        "gen",
        "--kind",
        "random",
        "--n",
        "25",
        "--p",
        "0.5",
        "--seed",
        "3",
        "--out",
        s(&rnd),
    ]);
    assert_eq!(st, ExitStatus::Success);
    let o = cmd_term(&rnd, &TermOptions::default());
    assert_eq!(o.status, ExitStatus::Negative);
    assert!(o.text.starts_with("not in class"));
}

#[test]
fn max_width_is_enforced() {
    let dir = TempDir::new().unwrap();
    let c6 = write_graph(&dir, "c6.txt", &Graph::cycle(6));
    let opts = TermOptions {
        max_width: 2,
        ..TermOptions::default()
    };
    assert_eq!(cmd_term(&c6, &opts).status, ExitStatus::Negative);
}

#[test]
fn colour_methods() {
    let dir = TempDir::new().unwrap();
    let c6 = write_graph(&dir, "c6.txt", &Graph::cycle(6));
    let k4 = write_graph(&dir, "k4.txt", &Graph::complete(4));
    for m in [
        Method::Exact,
        Method::SimplicialExact,
        Method::TermDp,
        Method::All,
    ] {
        let o = cmd_color(&c6, m, 100_000);
        assert_eq!(o.status, ExitStatus::Success);
        assert_eq!(o.json["chi"], 2);
        let o = cmd_color(&k4, m, 100_000);
        assert_eq!(o.json["chi"], 4);
    }
    let o = cmd_color(&c6, Method::All, 100_000);
    assert_eq!(o.json["methods"].as_object().unwrap().len(), 3);
    assert_eq!(o.json["agree"], true);
}

#[test]
fn colour_guard_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let g = cwf_core::generators::gen_random(40, 0.5, 1).unwrap();
    let p = write_graph(&dir, "big.txt", &g);
    let o = cmd_color(&p, Method::Exact, 1000);
    assert_eq!(o.status, ExitStatus::Usage);
    assert!(o.text.contains("exceeds the limit"));
}

#[test]
fn probe_names_the_failing_check() {
    let dir = TempDir::new().unwrap();
    let c6 = write_graph(&dir, "c6.txt", &Graph::cycle(6));
    let o = cmd_probe(&c6, &[]);
    assert_eq!(o.status, ExitStatus::Success);
    assert_eq!(o.json["all_pass"], true);

    let wheel = cwf_core::pattern::with_extra_vertex(&Graph::cycle(6), &[0, 1, 2, 3, 4, 5]);
    let w = write_graph(&dir, "wheel.txt", &wheel);
    let o = cmd_probe(&w, &[(6, 0)]);
    assert_eq!(o.status, ExitStatus::Negative);
    let failed: Vec<&str> = o.json["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["pass"] == false)
        .map(|v| v["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"x6-complete-to-rest"), "{failed:?}");
    assert!(o.text.contains("x6-complete-to-rest: FAIL"));
    assert_eq!(cmd_probe(&w, &[(9, 0)]).status, ExitStatus::Usage);
}

#[test]
fn gen_ring_and_partition_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("ring.txt");
    let (st, _) = cli(&[
        "gen",
        "--kind",
        "ring",
        "--m",
        "2",
        "--profile",
        "1,1",
        "--profile",
        "1,1",
        "--profile",
        "1,1",
        "--out",
        s(&out),
    ]);
    assert_eq!(st, ExitStatus::Success);
    let g = parse_graph(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(g.n(), 6);
    assert!(dir.path().join("ring.txt.partition.json").exists());

    let (st, _) = cli(&["gen", "--kind", "ring", "--profile", "1,1"]);
    assert_eq!(st, ExitStatus::Usage);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let (st, _) = cli(&["gen", "--preset", "mixed", "--seed", "17", "--out", s(p)]);
        assert_eq!(st, ExitStatus::Success);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (_, one) = cli(&["decompose", "-i", s(&a), "--json"]);
    let (_, two) = cli(&["decompose", "-i", s(&b), "--json"]);
    let strip = |t: &str| {
        let mut v: serde_json::Value = serde_json::from_str(t).unwrap();
        v["input"] = serde_json::Value::Null;
        v
    };
    assert_eq!(strip(&one), strip(&two));
    let doc: ReportDoc = serde_json::from_value(strip(&one)["report"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&doc).unwrap(), strip(&one)["report"]);
}

#[test]
fn batches_keep_input_order() {
    let dir = TempDir::new().unwrap();
    let mut paths = Vec::new();
    for seed in 1..=6u64 {
        let mut a = Cli::try_parse_from(["cwf", "gen", "--seed", "1"]).unwrap();
        if let cwf_cli::Command::Gen(g) = &mut a.command {
            g.seed = seed;
            g.out = Some(dir.path().join(format!("g{seed}.txt")));
            assert_eq!(cmd_gen(g).status, ExitStatus::Success);
            paths.push(g.out.clone().unwrap());
        }
    }
    let mut args = vec!["term", "--json", "--jobs", "3", "--verify"];
    for p in &paths {
        args.push("-i");
        args.push(s(p));
    }
    let (st, out) = cli(&args);
    assert_eq!(st, ExitStatus::Success);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let inputs: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["input"].as_str().unwrap())
        .collect();
    let want: Vec<&str> = paths.iter().map(|p| s(p)).collect();
    assert_eq!(inputs, want);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cwf");
    let dir = TempDir::new().unwrap();
    let c4 = write_graph(&dir, "c4.txt", &Graph::cycle(4));
    let c6 = write_graph(&dir, "c6.txt", &Graph::cycle(6));
    let code = |args: &[&str]| Process::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(code(&["check", "-i", s(&c6)]), Some(0));
    assert_eq!(code(&["check", "-i", s(&c4)]), Some(1));
    assert_eq!(code(&["check"]), Some(2));
    assert_eq!(code(&["color", "-i", s(&c6), "--method", "nope"]), Some(2));

    let out = Process::new(bin)
        .args(["term", "-i", s(&c6)])
        .env("CWF_LOG", "info")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("width"));
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

    #[test]
    fn json_reports_round_trip_and_repeat(seed in 1u64..10_000, preset in 0usize..6) {
        let dir = TempDir::new().unwrap();
        let g = dir.path().join("g.txt");
        let name = cwf_core::generators::Preset::ALL[preset].name();
        let seed_s = seed.to_string();
        let (st, _) = cli(&["gen", "--preset", name, "--seed", &seed_s, "--out", s(&g)]);
        proptest::prop_assert_eq!(st, ExitStatus::Success);
        let (st, first) = cli(&["decompose", "-i", s(&g), "--json"]);
        proptest::prop_assert_eq!(st, ExitStatus::Success);
        let (_, second) = cli(&["decompose", "-i", s(&g), "--json"]);
        proptest::prop_assert_eq!(&first, &second);
        let v: serde_json::Value = serde_json::from_str(&first).unwrap();
        let doc: ReportDoc = serde_json::from_value(v["report"].clone()).unwrap();
        proptest::prop_assert_eq!(serde_json::to_value(&doc).unwrap(), v["report"].clone());

        let (st, term_json) = cli(&["term", "-i", s(&g), "--json", "--verify"]);
        proptest::prop_assert_eq!(st, ExitStatus::Success);
        let v: serde_json::Value = serde_json::from_str(&term_json).unwrap();
        let t: CwTerm = serde_json::from_value(v["term"].clone()).unwrap();
        proptest::prop_assert_eq!(serde_json::to_value(&t).unwrap(), v["term"].clone());
    }
}
