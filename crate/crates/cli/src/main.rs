use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orient_core::brute::{brute_force_complete, count_bruteforce, DEFAULT_NODE_BUDGET};
use orient_core::classify::{classify, ClassificationReport, Problem};
use orient_core::compile::{SolutionCount, Solver};
use orient_core::digraph::{is_digraph_f_free, PartialDigraph};
use orient_core::forbidden::KfStatus;
use orient_core::forcing::{check_forcing, ForcingCertificate};
use orient_core::format::{parse_digraph, parse_forbidden, write_digraph, DigraphJson};
use orient_core::nae::{nae3sat_reduce, Formula, Literal};
use orient_core::tournament::enumerate_tournaments;
use orient_core::{Error, ForbiddenSet};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "orient", version, about = "F-free orientations of graphs")]
struct Cli {
    /// Print every result (and error) as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Node budget for the backtracking solver.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Orientation,
    Completion,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the complexity of the orientation or completion problem for F.
    Classify {
        #[arg(long)]
        forbidden: PathBuf,
        #[arg(long, value_enum, default_value = "completion")]
        problem: ProblemArg,
    },
    /// Find an F-free orientation of an undirected graph.
    Orient {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        forbidden: PathBuf,
    },
    /// Complete a partial digraph to an F-free oriented graph.
    Complete {
        #[arg(long)]
        digraph: PathBuf,
        #[arg(long)]
        forbidden: PathBuf,
    },
    /// Count F-free completions.
    Count {
        #[arg(long)]
        digraph: PathBuf,
        #[arg(long)]
        forbidden: PathBuf,
        /// Count by backtracking even when the linear system applies.
        #[arg(long)]
        brute: bool,
    },
    /// List tournaments on n vertices in compact form.
    EnumerateTournaments {
        n: usize,
        #[arg(long)]
        up_to_iso: bool,
        #[arg(long, default_value_t = 7)]
        cap: usize,
    },
    /// Build the gadget digraph of a NAE-3SAT formula.
    ReduceNae {
        /// Formula file; omit to generate a random formula.
        formula: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 2)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the terminal map as JSON to this file.
        #[arg(long)]
        terminals: Option<PathBuf>,
    },
    /// Check that an orientation extends the input and is F-free.
    Verify {
        #[arg(long)]
        digraph: PathBuf,
        #[arg(long)]
        orientation: PathBuf,
        #[arg(long)]
        forbidden: PathBuf,
    },
    /// Decide whether (x,y) forces (u,v); pairs are `i,j` with 1-based vertices.
    ForcingCheck {
        #[arg(long)]
        digraph: PathBuf,
        #[arg(long)]
        forbidden: PathBuf,
        #[arg(long, value_parser = parse_pair)]
        from: (usize, usize),
        #[arg(long, value_parser = parse_pair)]
        to: (usize, usize),
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `i,j`")?;
    let v = |t: &str| -> Result<usize, String> {
        match t.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("`{t}` is not a 1-based vertex")),
            Ok(v) => Ok(v - 1),
        }
    };
    Ok((v(a)?, v(b)?))
}

struct Failure {
    code: u8,
    file: Option<String>,
    error: Error,
}

impl Failure {
    fn in_file(path: &Path) -> impl FnOnce(Error) -> Failure + '_ {
        move |error| Failure {
            code: exit_code(&error),
            file: Some(path.display().to_string()),
            error,
        }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure {
            code: exit_code(&error),
            file: None,
            error,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Format(_) => 2,
        Error::ResourceLimit(_) => 3,
        _ => 1,
    }
}

type Out = Result<(Value, String, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure {
        code: 1,
        file: Some(path.display().to_string()),
        error: Error::Input(e.to_string()),
    })?;
    Ok(text)
}

fn load_forbidden(path: &Path) -> Result<ForbiddenSet, Failure> {
    parse_forbidden(&read(path)?).map_err(Failure::in_file(path))
}

fn load_digraph(path: &Path) -> Result<PartialDigraph, Failure> {
    parse_digraph(&read(path)?).map_err(Failure::in_file(path))
}

fn one_based(arcs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    arcs.iter().map(|&(a, b)| (a + 1, b + 1)).collect()
}

fn report_text(r: &ClassificationReport) -> String {
    let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
    let kf = match r.k_f {
        Some(k) if k.status == KfStatus::Exact => k.value.to_string(),
        Some(k) => format!(">= {} (search capped)", k.value),
        None => "unbounded".to_string(),
    };
    let mut out = format!(
        "verdict: {:?}\nproblem: {:?}\nnF: {}\nkF: {}\nmF: {}\n",
        r.verdict,
        r.problem,
        opt(r.n_f),
        kf,
        opt(r.m_f)
    );
    if let Some(case) = r.equivalence_case {
        out.push_str(&format!("equivalence case: {case}\n"));
    }
    if let Some(dims) = &r.affine_dims {
        for d in dims {
            let dim = d.dim.map_or("empty".to_string(), |e| format!("dimension {e}"));
            out.push_str(&format!("P_{}: arity {}, {}\n", d.n, d.arity, dim));
        }
    }
    if let Some(w) = &r.witness {
        out.push_str(&format!(
            "minority witness in P_{}: {} {} {} -> {} (not a member)\n",
            w.n, w.tuples[0], w.tuples[1], w.tuples[2], w.image
        ));
    }
    out
}

fn solve(d: &PartialDigraph, f: &ForbiddenSet, budget: u64) -> Out {
    let mut solver = Solver::new(f)?;
    solver.budget = budget;
    let (orientation, count, method) = match solver.solve_affine(d) {
        Ok(out) => {
            let method = if solver.is_affine() { "affine" } else { "clique-check" };
            (out.orientation, out.count, method)
        }
        Err(Error::Contract(_)) => (
            brute_force_complete(d, f, budget)?,
            SolutionCount::Unknown,
            "backtracking",
        ),
        Err(e) => return Err(e.into()),
    };
    let (count_str, exponent) = match count {
        SolutionCount::Zero => (Some("0".to_string()), None),
        SolutionCount::PowerOfTwo(e) => (Some(format!("2^{e}")), Some(e)),
        SolutionCount::Unknown => (None, None),
    };
    let Some(o) = orientation else {
        let value = json!({"status": "infeasible", "method": method, "count": count_str});
        return Ok((value, "infeasible\n".to_string(), 0));
    };
    let value = json!({
        "status": "feasible",
        "method": method,
        "count": count_str,
        "count_exponent": exponent,
        "orientation": DigraphJson::from_digraph(&o),
    });
    let mut text = format!("# feasible ({method})\n");
    if let Some(c) = &count_str {
        text.push_str(&format!("# completions: {c}\n"));
    }
    text.push_str(&write_digraph(&o));
    Ok((value, text, 0))
}

fn count(d: &PartialDigraph, f: &ForbiddenSet, budget: u64, brute: bool) -> Out {
    if !brute {
        let solver = Solver::new(f)?;
        if solver.is_affine() {
            let e = match solver.solve_affine(d)?.count {
                SolutionCount::PowerOfTwo(e) => Some(e),
                _ => None,
            };
            let shown = e.map_or("0".to_string(), |e| format!("2^{e}"));
            let value = json!({"count": shown, "exponent": e, "provenance": "affine"});
            return Ok((value, format!("{shown} (affine)\n"), 0));
        }
    }
    let c = count_bruteforce(d, f, budget)?;
    let value = json!({"count": c.to_string(), "provenance": "brute-force"});
    Ok((value, format!("{c} (brute-force)\n"), 0))
}

fn verify(input: &PartialDigraph, o: &PartialDigraph, f: &ForbiddenSet) -> Out {
    let reason = if input.n() != o.n() {
        Some(format!("vertex counts differ ({} vs {})", input.n(), o.n()))
    } else if let Some(&(a, b)) = o.sym_edges().first() {
        Some(format!("edge {{{}, {}}} is not oriented", a + 1, b + 1))
    } else if !input.is_extended_by(o) {
        Some("the orientation does not extend the input".to_string())
    } else if !is_digraph_f_free(o, f)? {
        Some("the orientation contains a forbidden tournament".to_string())
    } else {
        None
    };
    let value = json!({"valid": reason.is_none(), "reason": reason});
    match reason {
        None => Ok((value, "valid\n".to_string(), 0)),
        Some(r) => Ok((value, format!("invalid: {r}\n"), 1)),
    }
}

fn random_formula(vars: usize, clauses: usize, seed: u64) -> Result<Formula, Failure> {
    if vars == 0 && clauses > 0 {
        return Err(Error::Input("clauses need at least one variable".into()).into());
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut lit = || {
        let v = rng.gen_range(0..vars);
        if rng.gen() {
            Literal::pos(v)
        } else {
            Literal::neg(v)
        }
    };
    let cs = (0..clauses).map(|_| [lit(), lit(), lit()]).collect();
    Ok(Formula::new(vars, cs)?)
}

fn reduce(formula: &Formula, terminals: Option<&Path>) -> Out {
    let red = nae3sat_reduce(formula)?;
    let map: BTreeMap<&str, usize> = red.marked.terminals.iter().map(|(k, &v)| (k.as_str(), v + 1)).collect();
    let map_json = serde_json::to_string(&map).expect("map serializes");
    if let Some(path) = terminals {
        std::fs::write(path, format!("{map_json}\n")).map_err(|e| Failure {
            code: 1,
            file: Some(path.display().to_string()),
            error: Error::Input(e.to_string()),
        })?;
    }
    let value = json!({
        "formula": formula.to_dimacs(),
        "digraph": DigraphJson::from_digraph(&red.marked.digraph),
        "terminals": map,
        "variable_edges": one_based(&red.variable_edges),
    });
    let mut text = String::new();
    for line in formula.to_dimacs().lines() {
        text.push_str(&format!("# {line}\n"));
    }
    text.push_str(&format!("# terminals {map_json}\n"));
    text.push_str(&write_digraph(&red.marked.digraph));
    Ok((value, text, 0))
}

fn forcing(d: &PartialDigraph, f: &ForbiddenSet, budget: u64, xy: (usize, usize), uv: (usize, usize)) -> Out {
    for (a, b) in [xy, uv] {
        if a >= d.n() || b >= d.n() {
            return Err(Error::Input(format!("pair ({}, {}) outside 1..={}", a + 1, b + 1, d.n())).into());
        }
    }
    let mut solver = Solver::new(f)?;
    solver.budget = budget;
    let cert = check_forcing(&solver, d, xy, uv)?;
    let (value, text) = match &cert {
        ForcingCertificate::Forces { fixing } => (
            json!({"forces": true, "uncompletable_fixing": one_based(fixing)}),
            format!(
                "# forces: true\n# fixing {}->{} and {}->{} leaves no completion\n",
                fixing[0].0 + 1,
                fixing[0].1 + 1,
                fixing[1].0 + 1,
                fixing[1].1 + 1
            ),
        ),
        ForcingCertificate::NotFree { arc } => (
            json!({"forces": false, "not_free": [arc.0 + 1, arc.1 + 1]}),
            format!(
                "# forces: false\n# fixing {}->{} leaves no completion, so the edge is not free\n",
                arc.0 + 1,
                arc.1 + 1
            ),
        ),
        ForcingCertificate::Counterexample { arcs } => {
            let c = PartialDigraph::from_arcs(d.n(), arcs)?;
            (
                json!({"forces": false, "counterexample": DigraphJson::from_digraph(&c)}),
                format!("# forces: false\n# counterexample completion\n{}", write_digraph(&c)),
            )
        }
    };
    Ok((value, text, 0))
}

fn run(cli: &Cli) -> Out {
    match &cli.command {
        Command::Classify { forbidden, problem } => {
            let f = load_forbidden(forbidden)?;
            let p = match problem {
                ProblemArg::Orientation => Problem::Orientation,
                ProblemArg::Completion => Problem::Completion,
            };
            let r = classify(&f, p)?;
            Ok((serde_json::to_value(&r).expect("report serializes"), report_text(&r), 0))
        }
        Command::Orient { graph, forbidden } => {
            let f = load_forbidden(forbidden)?;
            let g = load_digraph(graph)?;
            if let Some(&(a, b)) = g.fixed_arcs().first() {
                let msg = format!(
                    "arc {}->{} is one-way; use `complete` for partial digraphs",
                    a + 1,
                    b + 1
                );
                return Err(Failure::in_file(graph)(Error::Input(msg)));
            }
            solve(&g, &f, cli.budget)
        }
        Command::Complete { digraph, forbidden } => {
            let f = load_forbidden(forbidden)?;
            solve(&load_digraph(digraph)?, &f, cli.budget)
        }
        Command::Count {
            digraph,
            forbidden,
            brute,
        } => {
            let f = load_forbidden(forbidden)?;
            count(&load_digraph(digraph)?, &f, cli.budget, *brute)
        }
        Command::EnumerateTournaments { n, up_to_iso, cap } => {
            let ts = enumerate_tournaments(*n, *up_to_iso, *cap)?;
            let compact: Vec<String> = ts.iter().map(|t| t.to_compact()).collect();
            let mut text = String::new();
            for c in &compact {
                text.push_str(c);
                text.push('\n');
            }
            Ok((
                json!({"n": n, "up_to_iso": up_to_iso, "count": ts.len(), "tournaments": compact}),
                text,
                0,
            ))
        }
        Command::ReduceNae {
            formula,
            vars,
            clauses,
            seed,
            terminals,
        } => {
            let formula = match formula {
                Some(path) => Formula::parse(&read(path)?).map_err(Failure::in_file(path))?,
                None => random_formula(*vars, *clauses, *seed)?,
            };
            reduce(&formula, terminals.as_deref())
        }
        Command::Verify {
            digraph,
            orientation,
            forbidden,
        } => {
            let f = load_forbidden(forbidden)?;
            verify(&load_digraph(digraph)?, &load_digraph(orientation)?, &f)
        }
        Command::ForcingCheck {
            digraph,
            forbidden,
            from,
            to,
        } => {
            let f = load_forbidden(forbidden)?;
            forcing(&load_digraph(digraph)?, &f, cli.budget, *from, *to)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, text, code)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            } else {
                print!("{text}");
            }
            ExitCode::from(code)
        }
        Err(fail) => {
            let line = match &fail.error {
                Error::Parse { line, .. } => Some(*line),
                _ => None,
            };
            if cli.json {
                let value = json!({"error": fail.error.to_string(), "file": fail.file, "line": line});
                eprintln!("{value}");
            } else {
                match &fail.file {
                    Some(file) => eprintln!("error: {file}: {}", fail.error),
                    None => eprintln!("error: {}", fail.error),
                }
            }
            ExitCode::from(fail.code)
        }
    }
}
