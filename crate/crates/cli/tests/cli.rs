use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sdnnf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdnnf"))
        .args(args)
        .env_remove("SDNNF_LIMIT")
        .output()
        .expect("run sdnnf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn gen(dir: &Path, name: &str, args: &[&str]) {
    let out = p(dir, name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &out]);
    let o = sdnnf(&all);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

fn dimacs_header(path: &str) -> (usize, usize) {
    let text = fs::read_to_string(path).unwrap();
    let line = text.lines().find(|l| l.starts_with("p cnf")).unwrap();
    let nums: Vec<usize> = line.split_whitespace().skip(2).map(|x| x.parse().unwrap()).collect();
    (nums[0], nums[1])
}

#[test]
fn gen_grid_writes_graph_and_cnf() {
    let d = tempfile::tempdir().unwrap();
    let o = sdnnf(&["gen", "grid", "3", "3", "--charges", "target-unsat", "--out", &p(d.path(), "g")]);
    assert_eq!(code(&o), 0);
    // corners have degree 2, sides 3, the centre 4: 4·2 + 4·4 + 8
    assert!(stdout(&o).contains("clauses 32"));
    assert!(stdout(&o).contains("satisfiable false"));
    assert_eq!(dimacs_header(&p(d.path(), "g.cnf")), (12, 32));
    assert!(fs::read_to_string(p(d.path(), "g.graph")).unwrap().starts_with("graph 9 12"));
}

#[test]
fn gen_cycle_all_zero_is_satisfiable() {
    let d = tempfile::tempdir().unwrap();
    let o = sdnnf(&["gen", "cycle", "4", "--charges", "all-zero", "--out", &p(d.path(), "c")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("satisfiable true"));
}

#[test]
fn gen_grid_defaults_to_zero_charges() {
    let d = tempfile::tempdir().unwrap();
    let o = sdnnf(&["gen", "grid", "2", "2", "--out", &p(d.path(), "g")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("satisfiable true"));
    assert_eq!(dimacs_header(&p(d.path(), "g.cnf")).0, 4);
}

#[test]
fn gen_rejects_bad_arguments() {
    let d = tempfile::tempdir().unwrap();
    let out = p(d.path(), "x");
    assert_eq!(code(&sdnnf(&["gen", "grid", "3", "--out", &out])), 1);
    assert_eq!(code(&sdnnf(&["gen", "torus", "3", "--out", &out])), 1);
    assert_eq!(code(&sdnnf(&["gen", "cycle", "4", "--charges", "odd", "--out", &out])), 1);
    // random-regular is randomized, so the seed is mandatory
    assert_eq!(code(&sdnnf(&["gen", "random-regular", "6", "3", "--out", &out])), 1);
    assert_eq!(code(&sdnnf(&["gen", "random-regular", "6", "3", "--seed", "2", "--out", &out])), 0);
}

#[test]
fn compile_refutes_the_triangle() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "t", &["cycle", "3", "--charges", "single:1"]);
    let o = sdnnf(&["compile", &p(d.path(), "t.cnf"), "--validate"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("final_size 0"));
    assert!(s.contains("final constant 0"));
    assert!(s.contains("trace valid"));
    let max: usize = s
        .lines()
        .find_map(|l| l.strip_prefix("max_intermediate "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(max >= 1);
}

#[test]
fn compile_accepts_every_strategy_flag() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "2", "3", "--charges", "target-unsat"]);
    let cnf = p(d.path(), "g.cnf");
    for v in ["linear", "balanced", "random:4"] {
        for c in ["input", "random:2", "greedy_min_size", "group_by_vertex"] {
            for a in ["sequential", "balanced_tree", "greedy_min_pair"] {
                let o = sdnnf(&["compile", &cnf, "--vtree", v, "--clauses", c, "--apply", a]);
                assert_eq!(code(&o), 0, "{v}/{c}/{a}: {}", stderr(&o));
                assert!(stdout(&o).contains("final constant 0"));
            }
        }
    }
    assert_eq!(code(&sdnnf(&["compile", &cnf, "--apply", "fastest"])), 1);
    assert_eq!(code(&sdnnf(&["compile", &cnf, "--vtree", "random"])), 1);
}

#[test]
fn compile_limit_aborts_with_a_partial_trace() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "3", "3", "--charges", "target-unsat"]);
    let tr = p(d.path(), "trace");
    let o = sdnnf(&["compile", &p(d.path(), "g.cnf"), "--limit", "50", "--trace-out", &tr]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("status aborted"));
    let header = fs::read_to_string(Path::new(&tr).join("trace.txt")).unwrap();
    assert!(header.contains("c aborted"));
    let o = sdnnf(&["check", "--trace", &tr]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("(aborted)"));
}

#[test]
fn limit_comes_from_the_environment() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "3", "3", "--charges", "target-unsat"]);
    let cnf = p(d.path(), "g.cnf");
    let run = |limit: &str| {
        Command::new(env!("CARGO_BIN_EXE_sdnnf"))
            .args(["compile", &cnf])
            .env("SDNNF_LIMIT", limit)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("50")), 2);
    assert_eq!(code(&run("100000")), 0);
}

#[test]
fn check_finds_a_tampered_circuit() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "2", "2"]);
    let tr = p(d.path(), "trace");
    let o = sdnnf(&["compile", &p(d.path(), "g.cnf"), "--trace-out", &tr]);
    assert_eq!(code(&o), 0);
    let header = fs::read_to_string(Path::new(&tr).join("trace.txt")).unwrap();
    let last = header.lines().last().unwrap().split_whitespace().last().unwrap().to_string();
    let nnf = Path::new(&tr).join(&last);
    let nnf_s = nnf.to_string_lossy().into_owned();
    let o = sdnnf(&["check", "--cnf", &p(d.path(), "g.cnf"), "--nnf", &nnf_s]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("equivalent"));
    assert_eq!(code(&sdnnf(&["check", "--trace", &tr])), 0);

    // a different formula over the same variables
    gen(d.path(), "h", &["grid", "2", "2", "--charges", "single:0"]);
    let o = sdnnf(&["check", "--cnf", &p(d.path(), "h.cnf"), "--nnf", &nnf_s]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("differ"));

    // a step that no longer matches its clause
    let text = fs::read_to_string(Path::new(&tr).join("step0.nnf")).unwrap();
    let flipped: String = text
        .lines()
        .map(|l| match l.strip_prefix("L ") {
            Some(rest) if !rest.starts_with('-') => format!("L -{rest}\n"),
            Some(rest) => format!("L {}\n", &rest[1..]),
            None => format!("{l}\n"),
        })
        .collect();
    fs::write(Path::new(&tr).join("step0.nnf"), flipped).unwrap();
    let o = sdnnf(&["check", "--trace", &tr]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("step 0"));
}

#[test]
fn check_needs_its_inputs() {
    assert_eq!(code(&sdnnf(&["check"])), 1);
    assert_eq!(code(&sdnnf(&["check", "--cnf", "x.cnf"])), 1);
}

#[test]
fn partition_grid_4x4_reports_verified_treewidths() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "4", "4"]);
    let out = p(d.path(), "blocks.txt");
    let o = sdnnf(&["partition", &p(d.path(), "g.graph"), "--mode", "theorem4", "--seed", "0", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = stdout(&o);
    let tws: Vec<usize> = s
        .lines()
        .filter(|l| l.ends_with(" verified"))
        .map(|l| l.split_whitespace().nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(tws.len(), 2);
    assert!(tws.iter().all(|&t| t >= 1));
    let blocks = fs::read_to_string(out).unwrap();
    assert!(blocks.starts_with("partition 2\n"));
    let listed: usize = blocks.lines().skip(1).map(|l| l.split_whitespace().count() - 2).sum();
    assert_eq!(listed, 16);
}

#[test]
fn partition_two_connected_mode_checks_connectivity() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "4", "3"]);
    let o = sdnnf(&["partition", &p(d.path(), "g.graph"), "--mode", "lemma4", "--seed", "0"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("A connected, B 2-connected"));
}

#[test]
fn partition_of_a_tree_has_bound_zero() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "t", &["path", "5"]);
    let o = sdnnf(&["partition", &p(d.path(), "t.graph"), "--mode", "theorem4", "--seed", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("tw 1 bound 0"));
}

#[test]
fn partition_tripartition_on_a_long_cycle() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "c", &["cycle", "60"]);
    let o = sdnnf(&["partition", &p(d.path(), "c.graph"), "--mode", "tripartition", "--seed", "5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = stdout(&o);
    let internal: Vec<usize> = s
        .lines()
        .find_map(|l| l.strip_prefix("internal "))
        .unwrap()
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    // each part keeps at least |E|/180 of the edges
    assert!(internal.iter().all(|&k| k * 180 >= 60));
    assert_eq!(s.lines().filter(|l| l.starts_with("block ") && l.contains(':')).count(), 3);
}

#[test]
fn partition_rejects_a_bad_mode_and_a_missing_seed() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "3", "3"]);
    let g = p(d.path(), "g.graph");
    assert_eq!(code(&sdnnf(&["partition", &g, "--mode", "quadrisect", "--seed", "0"])), 1);
    assert_eq!(code(&sdnnf(&["partition", &g, "--mode", "theorem4"])), 1);
}

#[test]
fn bench_writes_one_row_per_size_and_strategy() {
    let d = tempfile::tempdir().unwrap();
    let csv_path = p(d.path(), "out/b.csv");
    let svg = p(d.path(), "out/b.svg");
    let o = sdnnf(&[
        "bench", "grid-unsat", "--from", "2", "--to", "4", "--csv", &csv_path, "--svg", &svg, "--jobs", "4",
        "--strategies", "balanced/group_by_vertex/greedy_min_pair,linear/input/greedy_min_pair",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut r = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[0], "family");
    assert_eq!(header[4], "max_intermediate");
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    let ns: Vec<&str> = rows.iter().map(|x| &x[1]).collect();
    assert_eq!(ns, ["2", "2", "3", "3", "4", "4"]);
    assert!(rows.iter().all(|x| &x[5] == "0" && &x[6] == "false"));
    let plot = fs::read_to_string(svg).unwrap();
    assert!(plot.starts_with("<svg"));
    assert_eq!(plot.matches("<polyline").count(), 2);
    assert!(plot.contains("max intermediate size"));
}

#[test]
fn bench_on_a_satisfiable_family_plots_final_size() {
    let d = tempfile::tempdir().unwrap();
    let svg = p(d.path(), "b.svg");
    let o = sdnnf(&[
        "bench", "grid-sat", "--from", "2", "--to", "3", "--csv", &p(d.path(), "b.csv"), "--svg", &svg,
        "--strategies", "linear/input/sequential",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(fs::read_to_string(svg).unwrap().contains("final size"));
}

#[test]
fn bench_rejects_an_empty_strategy_list() {
    let d = tempfile::tempdir().unwrap();
    let csv_path = p(d.path(), "b.csv");
    let o = sdnnf(&["bench", "grid-unsat", "--from", "2", "--to", "3", "--csv", &csv_path, "--strategies", ""]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("empty"));
    let o = sdnnf(&["bench", "grid-unsat", "--from", "2", "--to", "3", "--csv", &csv_path, "--strategies", " , "]);
    assert_eq!(code(&o), 1);
    assert!(!Path::new(&csv_path).exists());
}

#[test]
fn witness_end_to_end_on_grid_4x3() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "4", "3", "--charges", "target-unsat"]);
    let tr = p(d.path(), "trace");
    let o = sdnnf(&[
        "compile", &p(d.path(), "g.cnf"), "--vtree", "balanced", "--clauses", "group_by_vertex", "--apply",
        "greedy_min_pair", "--trace-out", &tr,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = p(d.path(), "w");
    let o = sdnnf(&[
        "witness", "--graph", &p(d.path(), "g.graph"), "--trace", &tr, "--cnf", &p(d.path(), "g.cnf"), "--out", &out,
        "--seed", "0",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert!(first == "side=A, satisfiable, oracle-verified" || first == "side=B, satisfiable, oracle-verified");
    let report = fs::read_to_string(Path::new(&out).join("report.txt")).unwrap();
    assert!(report.contains("verification exact"));
    // the written circuit is equivalent to the written side formula
    let o = sdnnf(&["check", "--cnf", &p(&Path::new(&out), "side.cnf"), "--nnf", &p(Path::new(&out), "witness.nnf")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn witness_rejects_a_satisfiable_input() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "3", "3"]);
    let tr = p(d.path(), "trace");
    assert_eq!(code(&sdnnf(&["compile", &p(d.path(), "g.cnf"), "--trace-out", &tr])), 0);
    let o = sdnnf(&["witness", "--graph", &p(d.path(), "g.graph"), "--trace", &tr, "--out", &p(d.path(), "w"), "--seed", "0"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("not a refutation"));
}

#[test]
fn witness_without_a_trace_is_a_usage_error() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "3", "3", "--charges", "target-unsat"]);
    let g = p(d.path(), "g.graph");
    let w = p(d.path(), "w");
    assert_eq!(code(&sdnnf(&["witness", "--graph", &g, "--out", &w, "--seed", "0"])), 1);
    let o = sdnnf(&["witness", "--graph", &g, "--trace", &p(d.path(), "nowhere"), "--out", &w, "--seed", "0"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("no trace"));
}

#[test]
fn commands_are_deterministic() {
    let d = tempfile::tempdir().unwrap();
    gen(d.path(), "g", &["grid", "3", "3", "--charges", "target-unsat"]);
    let cnf = p(d.path(), "g.cnf");
    let args = ["compile", &cnf, "--vtree", "random:3", "--clauses", "random:3", "--apply", "greedy_min_pair"];
    assert_eq!(stdout(&sdnnf(&args)), stdout(&sdnnf(&args)));
    gen(d.path(), "r1", &["random-regular", "8", "3", "--seed", "9", "--charges", "random:4"]);
    gen(d.path(), "r2", &["random-regular", "8", "3", "--seed", "9", "--charges", "random:4"]);
    assert_eq!(
        fs::read_to_string(p(d.path(), "r1.cnf")).unwrap(),
        fs::read_to_string(p(d.path(), "r2.cnf")).unwrap()
    );
}

#[test]
fn help_exits_zero() {
    let o = sdnnf(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("bench"));
    assert_eq!(code(&sdnnf(&[])), 1);
}
