use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use sdnnf::cnf::{parse_dimacs, write_dimacs};
use sdnnf::compiler::{
    benchmark, compile_with, extract_satisfiable_witness, load_trace, parse_shape, reduce_to_2connected, save_trace,
    validate_trace, ApplyOrder, BenchRow, ClauseOrder, CompileError, CompileOptions, Family, Verification, WitnessError,
    DEFAULT_LIMIT,
};
use sdnnf::oracle::agree;
use sdnnf::partition::{lemma4_partition, theorem4_partition, treewidth_exact, tripartition_graph, verify_decomposition, Route, DEFAULT_TRIALS};
use sdnnf::strdnnf::{nnf_vtree_path, parse_nnf, validate, write_nnf};
use sdnnf::tseitin::{complete, cycle, grid, is_satisfiable_criterion, path, random_regular, tseitin_cnf, Charges};
use sdnnf::{ChargedGraph, FloatParams, Strategy, Vtree};

use crate::{plot, Command, Mode};

/// An error that carries its exit status.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl Exit {
    pub const USAGE: u8 = 1;
    pub const ABORT: u8 = 2;
    pub const VERIFY: u8 = 3;
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

fn exit(code: u8, message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Exit {
        code,
        message: message.into(),
    })
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
}

fn write(p: &Path, text: &str) -> Result<()> {
    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))
}

fn read_graph(p: &Path) -> Result<ChargedGraph> {
    ChargedGraph::parse(&read(p)?).with_context(|| format!("bad graph file {}", p.display()))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn trace_file(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join("trace.txt")
    } else {
        p.to_path_buf()
    }
}

pub fn parse_charges(s: &str) -> Result<Charges> {
    let num = |rest: &str| rest.parse::<u64>().map_err(|_| anyhow!("bad number in charges `{s}`"));
    Ok(match s {
        "all-zero" => Charges::AllZero,
        "target-unsat" => Charges::TargetUnsat,
        _ => match s.split_once(':') {
            Some(("single", v)) => Charges::SingleOne(num(v)? as usize),
            Some(("random", seed)) => Charges::Random(num(seed)?),
            _ => bail!("unknown charges `{s}` (all-zero, target-unsat, single:V, random:SEED)"),
        },
    })
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen {
            family,
            params,
            charges,
            seed,
            out,
        } => gen(&family, &params, &charges, seed, &out),
        Command::Compile {
            cnf,
            vtree,
            clauses,
            apply,
            limit,
            trace_out,
            validate,
            seed,
        } => {
            let strategy = Strategy::new(parse_shape(&vtree)?, clauses.parse::<ClauseOrder>()?, apply.parse::<ApplyOrder>()?);
            let opts = CompileOptions {
                limit: limit.unwrap_or(DEFAULT_LIMIT),
                seed,
                ..CompileOptions::default()
            };
            compile(&cnf, &strategy, &opts, trace_out.as_deref(), validate)
        }
        Command::Partition { graph, mode, seed, out } => partition(&graph, mode, seed, out.as_deref()),
        Command::Bench {
            family,
            from,
            to,
            strategies,
            csv,
            svg,
            limit,
            jobs,
            seed,
        } => {
            let family: Family = family.parse()?;
            if from > to {
                bail!("empty size range {from}..={to}");
            }
            let strategies = match strategies {
                None => Strategy::default_set(),
                Some(s) => s
                    .split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(str::parse)
                    .collect::<Result<Vec<Strategy>, CompileError>>()?,
            };
            if strategies.is_empty() {
                bail!("the strategy list is empty");
            }
            let opts = CompileOptions {
                limit: limit.unwrap_or(DEFAULT_LIMIT),
                seed,
                ..CompileOptions::default()
            };
            let ns: Vec<usize> = (from..=to).collect();
            bench(family, &ns, &strategies, &opts, jobs, &csv, svg.as_deref())
        }
        Command::Witness {
            graph,
            trace,
            cnf,
            out,
            seed,
        } => witness(&graph, &trace, cnf.as_deref(), &out, seed),
        Command::Check {
            cnf,
            nnf,
            vtree,
            trace,
            samples,
            seed,
        } => match (trace, cnf, nnf) {
            (Some(t), _, _) => check_trace(&t),
            (None, Some(c), Some(n)) => check_circuit(&c, &n, vtree.as_deref(), samples, seed),
            _ => bail!("give --trace, or --cnf with --nnf"),
        },
    }
}

fn gen(family: &str, params: &[usize], charges: &str, seed: Option<u64>, out: &Path) -> Result<()> {
    let charges = parse_charges(charges)?;
    let arity = |k: usize| -> Result<()> {
        if params.len() != k {
            bail!("{family} takes {k} size parameter(s), got {}", params.len());
        }
        Ok(())
    };
    let g = match family {
        "grid" => {
            arity(2)?;
            grid(params[0], params[1], charges)
        }
        "cycle" => {
            arity(1)?;
            cycle(params[0], charges)
        }
        "complete" => {
            arity(1)?;
            complete(params[0], charges)
        }
        "path" => {
            arity(1)?;
            path(params[0], charges)
        }
        "random-regular" => {
            arity(2)?;
            let seed = seed.ok_or_else(|| anyhow!("random-regular needs --seed"))?;
            random_regular(params[0], params[1], seed, charges)
        }
        _ => bail!("unknown family `{family}` (grid, cycle, complete, path, random-regular)"),
    }?;
    let f = tseitin_cnf(&g);
    write(&with_ext(out, "graph"), &g.to_text())?;
    write(&with_ext(out, "cnf"), &write_dimacs(&f))?;
    println!("vertices {}", g.num_vertices());
    println!("edges {}", g.num_edges());
    println!("clauses {}", f.len());
    println!("satisfiable {}", is_satisfiable_criterion(&g));
    Ok(())
}

fn compile(cnf: &Path, strategy: &Strategy, opts: &CompileOptions, trace_out: Option<&Path>, check: bool) -> Result<()> {
    let f = parse_dimacs(&read(cnf)?).with_context(|| format!("bad CNF {}", cnf.display()))?;
    let t = match compile_with(&f, strategy, opts) {
        Ok(t) => t,
        Err(CompileError::NotEquivalent(a)) => {
            return Err(exit(Exit::VERIFY, format!("compiled circuit differs from the input at {a}")));
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(dir) = trace_out {
        save_trace(&t, dir)?;
    }
    println!("strategy {strategy}");
    println!("steps {}", t.len());
    println!("max_intermediate {}", t.max_intermediate());
    println!("peak_live {}", t.peak_live());
    if t.aborted {
        println!("status aborted");
        return Err(exit(Exit::ABORT, format!("edge limit {} exceeded after {} steps", opts.limit, t.len())));
    }
    println!("final_size {}", t.final_size());
    let last = t.last().expect("a finished trace has steps");
    if t.is_refutation() {
        println!("final constant 0");
    } else if last.is_const() == Some(true) {
        println!("final constant 1");
    }
    match t.verified {
        Some(Verification::Exact) => println!("verified exact"),
        Some(Verification::Sampled(n)) => println!("verified sampled {n}"),
        None => {}
    }
    if check {
        validate_trace(&t).map_err(|v| exit(Exit::VERIFY, format!("invalid trace: {v}")))?;
        println!("trace valid");
    }
    Ok(())
}

fn blocks_text(blocks: &[&BTreeSet<usize>]) -> String {
    let mut out = format!("partition {}\n", blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        let _ = write!(out, "b {i}");
        for v in b.iter() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

fn list(s: &BTreeSet<usize>) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Exact treewidth of `G[s]`, checked against its decomposition.
fn verified_tw(g: &ChargedGraph, s: &BTreeSet<usize>) -> Result<usize> {
    let (h, _) = g.induced(s);
    let tw = treewidth_exact(&h)?;
    verify_decomposition(&h, &tw.decomposition, tw.width).map_err(|e| exit(Exit::VERIFY, e.to_string()))?;
    Ok(tw.width)
}

fn partition(graph: &Path, mode: Mode, seed: u64, out: Option<&Path>) -> Result<()> {
    let g = read_graph(graph)?;
    let p = FloatParams::standard();
    let blocks: Vec<BTreeSet<usize>> = match mode {
        Mode::Theorem4 => {
            let r = theorem4_partition(&g, &p, seed)?;
            println!("mode theorem4");
            match &r.route {
                Route::Improvement { rounds, .. } => println!("route improvement rounds {rounds}"),
                Route::Exhaustive { reason } => println!("route exhaustive ({reason})"),
            }
            println!("tw {} bound {}", r.tw, r.bound);
            vec![r.a, r.b]
        }
        Mode::Lemma4 => {
            let r = lemma4_partition(&g, &p, seed)?;
            println!("mode lemma4");
            println!("bound {}", r.bound);
            println!("separators {}", r.separators.len());
            let (ga, gb) = (g.induced(&r.a).0, g.induced(&r.b).0);
            if !ga.is_connected() || !gb.is_2connected() {
                return Err(exit(Exit::VERIFY, "G[A] must be connected and G[B] 2-connected"));
            }
            println!("A connected, B 2-connected");
            vec![r.a, r.b]
        }
        Mode::Tripartition => {
            let r = tripartition_graph(&g, seed, DEFAULT_TRIALS)?;
            println!("mode tripartition");
            println!("trials {} exhaustive {}", r.trials, r.exhaustive);
            println!("internal {} {} {}", r.internal[0], r.internal[1], r.internal[2]);
            r.parts.to_vec()
        }
    };
    for (i, b) in blocks.iter().enumerate() {
        println!("block {i}: {}", list(b));
        println!("block {i} tw {} verified", verified_tw(&g, b)?);
    }
    if let Some(p) = out {
        write(p, &blocks_text(&blocks.iter().collect::<Vec<_>>()))?;
    }
    Ok(())
}

fn bench(
    family: Family,
    ns: &[usize],
    strategies: &[Strategy],
    opts: &CompileOptions,
    jobs: usize,
    csv_path: &Path,
    svg: Option<&Path>,
) -> Result<()> {
    let rows = benchmark(family, ns, strategies, opts, jobs)?;
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(csv_path).with_context(|| format!("cannot write {}", csv_path.display()))?;
    w.write_record(BenchRow::HEADER)?;
    for r in &rows {
        w.write_record([
            r.family.clone(),
            r.n.to_string(),
            r.strategy.clone(),
            r.seed.to_string(),
            r.max_intermediate.to_string(),
            r.final_size.to_string(),
            r.aborted.to_string(),
            r.millis.to_string(),
        ])?;
        println!(
            "{} n={} {} max_intermediate {} final {}{}",
            r.family,
            r.n,
            r.strategy,
            r.max_intermediate,
            r.final_size,
            if r.aborted { " aborted" } else { "" }
        );
    }
    w.flush()?;
    if let Some(p) = svg {
        // satisfiable instances end in a real circuit, unsatisfiable ones in 0
        let (metric, label): (fn(&BenchRow) -> usize, &str) = if family.satisfiable() {
            (|r| r.final_size, "final size (edges)")
        } else {
            (|r| r.max_intermediate, "max intermediate size (edges)")
        };
        let series = plot::group(rows.iter().map(|r| (r.strategy.clone(), r.n as f64, metric(r) as f64)));
        write(p, &plot::log_plot(&family.to_string(), "n", label, &series))?;
    }
    Ok(())
}

fn witness(graph: &Path, trace: &Path, cnf: Option<&Path>, out: &Path, seed: u64) -> Result<()> {
    let g = read_graph(graph)?;
    let tf = trace_file(trace);
    if !tf.exists() {
        bail!("no trace at {}", trace.display());
    }
    let t = load_trace(&tf)?;
    if let Some(c) = cnf {
        let f = parse_dimacs(&read(c)?).with_context(|| format!("bad CNF {}", c.display()))?;
        let set = |x: &sdnnf::Cnf| x.clauses().iter().cloned().collect::<BTreeSet<_>>();
        if set(&f) != set(&t.input) {
            bail!("{} is not the input of the trace", c.display());
        }
    }
    let coded = |e: WitnessError| match e {
        WitnessError::Verification(_) => exit(Exit::VERIFY, e.to_string()),
        _ => exit(Exit::USAGE, e.to_string()),
    };
    let r = reduce_to_2connected(&g, &t).map_err(coded)?;
    if !r.steps.is_empty() {
        println!("reduced to {} vertices after {} cut(s)", r.graph.num_vertices(), r.steps.len());
    }
    let l = lemma4_partition(&r.graph, &FloatParams::standard(), seed)?;
    let w = extract_satisfiable_witness(&r.trace, &r.graph, &l.a, &l.b).map_err(coded)?;
    let side = format!("{:?}", w.side);
    let verified = match w.verification {
        Verification::Exact => "exact".to_string(),
        Verification::Sampled(n) => format!("sampled {n}"),
    };
    let mut report = String::new();
    let _ = writeln!(
        report,
        "side={side}, {}, oracle-verified",
        if w.satisfiable { "satisfiable" } else { "unsatisfiable" }
    );
    let _ = writeln!(report, "case {:?}{}", w.case, if w.fallback { " (fallback)" } else { "" });
    let _ = writeln!(report, "A {}", list(&l.a));
    let _ = writeln!(report, "B {}", list(&l.b));
    let _ = writeln!(report, "vertices {}", list(&w.vertices));
    let _ = writeln!(report, "assignment {}", w.assignment);
    let _ = writeln!(report, "predicted_satisfiable {}", w.predicted_satisfiable);
    let _ = writeln!(report, "verification {verified}");
    let _ = writeln!(report, "size {} left {} right {} bound {}", w.size, w.left_size, w.right_size, w.bound());
    let vt_name = "witness.vtree";
    write(&out.join(vt_name), &w.circuit.vtree().to_text())?;
    write(&out.join("witness.nnf"), &write_nnf(&w.circuit, Some(vt_name)))?;
    write(&out.join("side.graph"), &w.graph.to_text())?;
    write(&out.join("side.cnf"), &write_dimacs(&tseitin_cnf(&w.graph)))?;
    write(&out.join("report.txt"), &report)?;
    print!("{report}");
    if w.satisfiable != w.predicted_satisfiable {
        return Err(exit(Exit::VERIFY, "satisfiability differs from the parity prediction"));
    }
    if !w.within_bound() {
        return Err(exit(Exit::VERIFY, format!("size {} exceeds the bound {}", w.size, w.bound())));
    }
    Ok(())
}

fn check_trace(trace: &Path) -> Result<()> {
    let tf = trace_file(trace);
    let t = load_trace(&tf)?;
    validate_trace(&t).map_err(|v| exit(Exit::VERIFY, format!("invalid trace: {v}")))?;
    println!("trace valid: {} steps{}", t.len(), if t.aborted { " (aborted)" } else { "" });
    Ok(())
}

fn check_circuit(cnf: &Path, nnf: &Path, vtree: Option<&Path>, samples: usize, seed: u64) -> Result<()> {
    let f = parse_dimacs(&read(cnf)?).with_context(|| format!("bad CNF {}", cnf.display()))?;
    let text = read(nnf)?;
    let vp = match vtree {
        Some(p) => p.to_path_buf(),
        None => {
            let named = nnf_vtree_path(&text).ok_or_else(|| anyhow!("{} names no vtree; pass --vtree", nnf.display()))?;
            nnf.parent().unwrap_or(Path::new(".")).join(named)
        }
    };
    let vt = Arc::new(Vtree::parse(&read(&vp)?).with_context(|| format!("bad vtree {}", vp.display()))?);
    let s = parse_nnf(&text, &vt).with_context(|| format!("bad circuit {}", nnf.display()))?;
    validate(&s).map_err(|v| exit(Exit::VERIFY, format!("not a str-DNNF: {v}")))?;
    if let Some(a) = agree(&s, &f, samples, seed) {
        return Err(exit(Exit::VERIFY, format!("circuit and CNF differ at {a}")));
    }
    println!("equivalent");
    Ok(())
}
