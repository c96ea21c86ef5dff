//! Command line for exact Tutte polynomials of three self-similar graph
//! families, their derived invariants, the graphs themselves, a
//! self-verification suite and a small benchmark harness.
//!
//! Exit codes: 0 on success, 1 on usage errors or failed checks, 2 when a
//! resource budget refuses the computation.

mod checks;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use checks::Scope;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tuttekit::families::{self, CountForm, PowerForm};
use tuttekit::poly::{parse_rational, rational_string, BiPoly, UniPoly};
use tuttekit::{farey, graph, oracle, BigRational, Error, Limits};

#[derive(Parser)]
#[command(
    name = "tuttekit",
    version,
    about = "Exact Tutte polynomials of self-similar graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    caps: CapArgs,
}

/// Resource budgets. A flag beats its environment variable, which beats
/// the built-in default; the variables carry the flag names with a
/// TUTTEKIT_ prefix.
#[derive(Args, Debug)]
struct CapArgs {
    /// Largest generation any graph generator accepts.
    #[arg(long, global = true, env = "TUTTEKIT_GRAPH_GENERATION_CAP",
          default_value_t = Limits::default().graph_generation_cap)]
    graph_generation_cap: u32,

    /// Most vertices a generator may materialise.
    #[arg(long, global = true, env = "TUTTEKIT_VERTEX_CAP",
          default_value_t = Limits::default().vertex_cap)]
    vertex_cap: u64,

    /// Edge budget for subset-enumeration oracles (work grows as 2^edges).
    #[arg(long, global = true, env = "TUTTEKIT_SUBSET_EDGE_CAP",
          default_value_t = Limits::default().subset_edge_cap)]
    subset_edge_cap: usize,

    /// Edge budget for the deletion/contraction oracle.
    #[arg(long, global = true, env = "TUTTEKIT_DELCON_EDGE_CAP",
          default_value_t = Limits::default().delcon_edge_cap)]
    delcon_edge_cap: usize,

    /// Recursion-node budget for the deletion/contraction oracle.
    #[arg(long, global = true, env = "TUTTEKIT_DELCON_NODE_CAP",
          default_value_t = Limits::default().delcon_node_cap)]
    delcon_node_cap: u64,

    /// Vertex budget for determinant-based spanning-tree counting.
    #[arg(long, global = true, env = "TUTTEKIT_MATRIX_VERTEX_CAP",
          default_value_t = Limits::default().matrix_vertex_cap)]
    matrix_vertex_cap: usize,

    /// Largest generation for the full bivariate polynomial.
    #[arg(long, global = true, env = "TUTTEKIT_POLY_GENERATION_CAP",
          default_value_t = Limits::default().poly_generation_cap)]
    poly_generation_cap: u32,

    /// Largest generation for point evaluation of the recursion.
    #[arg(long, global = true, env = "TUTTEKIT_EVAL_GENERATION_CAP",
          default_value_t = Limits::default().eval_generation_cap)]
    eval_generation_cap: u32,

    /// Largest generation for the univariate closed forms.
    #[arg(long, global = true, env = "TUTTEKIT_CLOSED_FORM_GENERATION_CAP",
          default_value_t = Limits::default().closed_form_generation_cap)]
    closed_form_generation_cap: u32,

    /// Dense-cell budget for expanding powers of polynomials.
    #[arg(long, global = true, env = "TUTTEKIT_POW_CELL_CAP",
          default_value_t = Limits::default().pow_cell_cap)]
    pow_cell_cap: u64,

    /// Bit budget for rendering counts as explicit decimal digits.
    #[arg(long, global = true, env = "TUTTEKIT_DIGIT_RENDER_BIT_CAP",
          default_value_t = Limits::default().digit_render_bit_cap)]
    digit_render_bit_cap: u64,
}

impl CapArgs {
    fn to_limits(&self) -> Limits {
        Limits {
            graph_generation_cap: self.graph_generation_cap,
            vertex_cap: self.vertex_cap,
            subset_edge_cap: self.subset_edge_cap,
            delcon_edge_cap: self.delcon_edge_cap,
            delcon_node_cap: self.delcon_node_cap,
            matrix_vertex_cap: self.matrix_vertex_cap,
            poly_generation_cap: self.poly_generation_cap,
            eval_generation_cap: self.eval_generation_cap,
            closed_form_generation_cap: self.closed_form_generation_cap,
            pow_cell_cap: self.pow_cell_cap,
            digit_render_bit_cap: self.digit_render_bit_cap,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Family {
    /// Farey graphs: two joined copies of the previous generation.
    Farey,
    /// Koch networks: (3m+1)^n triangles glued at hubs.
    Koch,
    /// Exponential small-world networks grown from a triangle.
    Exp,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Graph family.
    #[arg(long, value_enum)]
    family: Family,

    /// Generation.
    #[arg(long)]
    n: u32,

    /// Branching number for --family koch; rejected elsewhere.
    #[arg(long)]
    m: Option<u32>,
}

impl FamilyArgs {
    fn validate(&self) -> Result<u32, String> {
        match (self.family, self.m) {
            (Family::Koch, Some(m)) if m >= 1 => Ok(m),
            (Family::Koch, Some(_)) => Err("--m must be at least 1".into()),
            (Family::Koch, None) => Err("--family koch needs --m".into()),
            (_, Some(_)) => Err("--m only applies to --family koch".into()),
            (_, None) => Ok(0),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Kind {
    /// Number of spanning trees, T(1,1).
    SpanningTrees,
    /// Number of connected spanning subgraphs, T(1,2).
    Cssg,
    /// Number of spanning forests, T(2,1).
    Forests,
    /// Chromatic polynomial in λ.
    Chromatic,
    /// All-terminal reliability polynomial in p.
    Reliability,
    /// Exact value at a rational point, e.g. --point "3/2,-1".
    Eval,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Tutte polynomial of a family member.
    Tutte {
        #[command(flatten)]
        target: FamilyArgs,
        /// Expand base^exponent forms into full polynomials (budgeted).
        #[arg(long)]
        expand: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print a derived invariant of a family member.
    Invariant {
        #[command(flatten)]
        target: FamilyArgs,
        /// Which invariant to compute.
        #[arg(long, value_enum)]
        kind: Kind,
        /// Evaluation point "x0,y0" for --kind eval.
        #[arg(long)]
        point: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the underlying graph as an edge list or JSON.
    Graph {
        #[command(flatten)]
        target: FamilyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recompute results along independent routes and report PASS/FAIL.
    Verify {
        /// Which suite to run.
        #[arg(long, value_enum, default_value_t = Scope::All)]
        scope: Scope,
        /// Largest generation for the oracle-backed checks.
        #[arg(long, default_value_t = 3)]
        max_n: u32,
    },
    /// Time the family recursion against the brute-force oracle.
    Bench {
        #[command(flatten)]
        target: FamilyArgs,
        /// Timing repetitions.
        #[arg(long, default_value_t = 3)]
        reps: u32,
    },
}

/// A diagnosed failure: what to say, how to say it, and the exit code.
struct Failure {
    code: u8,
    message: String,
    as_json: bool,
}

impl Failure {
    fn usage(message: impl Into<String>, as_json: bool) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
            as_json,
        }
    }

    fn from_lib(e: Error, as_json: bool) -> Failure {
        Failure {
            code: if e.is_budget() { 2 } else { 1 },
            message: e.to_string(),
            as_json,
        }
    }

    fn emit(self) -> ExitCode {
        if self.as_json {
            println!("{}", json!({ "error": self.message, "exit": self.code }));
        } else {
            eprintln!("error: {}", self.message);
        }
        ExitCode::from(self.code)
    }
}

fn main() -> ExitCode {
    // Die quietly when output goes to a closed pipe (e.g. `| head`)
    // instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests land here too; only real parse
            // problems should exit nonzero, and with the usage code.
            let is_error = e.use_stderr();
            let _ = e.print();
            return if is_error {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let limits = cli.caps.to_limits();
    match dispatch(cli.command, &limits) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => failure.emit(),
    }
}

fn dispatch(command: Command, limits: &Limits) -> Result<(), Failure> {
    match command {
        Command::Tutte {
            target,
            expand,
            output,
        } => cmd_tutte(&target, expand, &output, limits),
        Command::Invariant {
            target,
            kind,
            point,
            output,
        } => cmd_invariant(&target, kind, point.as_deref(), &output, limits),
        Command::Graph { target, output } => cmd_graph(&target, &output, limits),
        Command::Verify { scope, max_n } => checks::run(scope, max_n, limits),
        Command::Bench { target, reps } => cmd_bench(&target, reps, limits),
    }
}

fn deliver(output: &OutputArgs, body: String) -> Result<(), Failure> {
    match &output.out {
        None => {
            println!("{body}");
            Ok(())
        }
        Some(path) => fs::write(path, body + "\n").map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
            as_json: output.format == Format::Json,
        }),
    }
}

fn power_form(family: Family, m: u32, n: u32) -> PowerForm {
    match family {
        Family::Koch => families::koch_tutte(m, n),
        Family::Exp => families::exp_tutte(n),
        Family::Farey => unreachable!("farey has no power form"),
    }
}

fn render_bipoly(p: &BiPoly, as_json: bool) -> String {
    if as_json {
        p.to_json().to_string()
    } else {
        p.to_string()
    }
}

fn render_unipoly(p: &UniPoly, as_json: bool) -> String {
    if as_json {
        p.to_json().to_string()
    } else {
        p.to_string()
    }
}

fn render_value(s: String, as_json: bool) -> String {
    if as_json {
        json!({ "value": s }).to_string()
    } else {
        s
    }
}

/// Counts print as plain digits while they fit the rendering budget and
/// stay in base^exponent form beyond it.
fn render_count(c: &CountForm, limits: &Limits, as_json: bool) -> String {
    if as_json {
        return c.to_json().to_string();
    }
    match c.digits(limits) {
        Ok(digits) => digits,
        Err(_) => c.to_string(),
    }
}

fn require_generation(n: u32, cap: u32, as_json: bool) -> Result<(), Failure> {
    if n > cap {
        Err(Failure::from_lib(
            Error::GenerationCapExceeded { n, cap },
            as_json,
        ))
    } else {
        Ok(())
    }
}

fn parse_point(s: &str, as_json: bool) -> Result<(BigRational, BigRational), Failure> {
    let (xs, ys) = s
        .split_once(',')
        .ok_or_else(|| Failure::usage(format!("--point wants \"x0,y0\", got {s:?}"), as_json))?;
    let x0 = parse_rational(xs.trim()).map_err(|e| Failure::usage(e.to_string(), as_json))?;
    let y0 = parse_rational(ys.trim()).map_err(|e| Failure::usage(e.to_string(), as_json))?;
    Ok((x0, y0))
}

fn int(i: i64) -> BigRational {
    BigRational::from_integer(i.into())
}

fn cmd_tutte(
    target: &FamilyArgs,
    expand: bool,
    output: &OutputArgs,
    limits: &Limits,
) -> Result<(), Failure> {
    let as_json = output.format == Format::Json;
    let m = target
        .validate()
        .map_err(|msg| Failure::usage(msg, as_json))?;
    let body = match target.family {
        Family::Farey => {
            let t = farey::tutte(target.n, limits).map_err(|e| Failure::from_lib(e, as_json))?;
            render_bipoly(&t, as_json)
        }
        Family::Koch | Family::Exp => {
            let form = power_form(target.family, m, target.n);
            if expand {
                let t = form
                    .expand(limits)
                    .map_err(|e| Failure::from_lib(e, as_json))?;
                render_bipoly(&t, as_json)
            } else if as_json {
                form.to_json().to_string()
            } else {
                form.to_string()
            }
        }
    };
    deliver(output, body)
}

fn cmd_invariant(
    target: &FamilyArgs,
    kind: Kind,
    point: Option<&str>,
    output: &OutputArgs,
    limits: &Limits,
) -> Result<(), Failure> {
    let as_json = output.format == Format::Json;
    let m = target
        .validate()
        .map_err(|msg| Failure::usage(msg, as_json))?;
    match (kind, point) {
        (Kind::Eval, None) => {
            return Err(Failure::usage(
                "--kind eval needs --point \"x0,y0\"",
                as_json,
            ))
        }
        (Kind::Eval, Some(_)) | (_, None) => {}
        (_, Some(_)) => {
            return Err(Failure::usage(
                "--point only applies to --kind eval",
                as_json,
            ))
        }
    }
    let body = match target.family {
        Family::Farey => farey_invariant(target.n, kind, point, limits, as_json)?,
        Family::Koch | Family::Exp => {
            let form = power_form(target.family, m, target.n);
            triangle_power_invariant(&form, kind, point, limits, as_json)?
        }
    };
    deliver(output, body)
}

fn farey_invariant(
    n: u32,
    kind: Kind,
    point: Option<&str>,
    limits: &Limits,
    as_json: bool,
) -> Result<String, Failure> {
    Ok(match kind {
        Kind::SpanningTrees => {
            require_generation(n, limits.eval_generation_cap, as_json)?;
            render_value(farey::nst(n).to_string(), as_json)
        }
        Kind::Cssg => {
            require_generation(n, limits.eval_generation_cap, as_json)?;
            render_value(farey::ncssg(n).to_string(), as_json)
        }
        Kind::Forests => {
            require_generation(n, limits.eval_generation_cap, as_json)?;
            render_value(rational_string(&farey::eval(n, &int(2), &int(1))), as_json)
        }
        Kind::Chromatic => {
            require_generation(n, limits.closed_form_generation_cap, as_json)?;
            render_unipoly(&farey::chromatic(n), as_json)
        }
        Kind::Reliability => {
            require_generation(n, limits.closed_form_generation_cap, as_json)?;
            render_unipoly(&farey::reliability(n), as_json)
        }
        Kind::Eval => {
            require_generation(n, limits.eval_generation_cap, as_json)?;
            let (x0, y0) = parse_point(point.expect("checked above"), as_json)?;
            render_value(rational_string(&farey::eval(n, &x0, &y0)), as_json)
        }
    })
}

fn triangle_power_invariant(
    form: &PowerForm,
    kind: Kind,
    point: Option<&str>,
    limits: &Limits,
    as_json: bool,
) -> Result<String, Failure> {
    let count_at = |x0: &BigRational, y0: &BigRational| -> Result<String, Failure> {
        let count = form
            .eval(x0, y0)
            .map_err(|e| Failure::from_lib(e, as_json))?;
        Ok(render_count(&count, limits, as_json))
    };
    match kind {
        Kind::SpanningTrees => count_at(&int(1), &int(1)),
        Kind::Cssg => count_at(&int(1), &int(2)),
        Kind::Forests => count_at(&int(2), &int(1)),
        Kind::Chromatic => {
            let p = families::triangle_power_chromatic(form.exponent(), limits)
                .map_err(|e| Failure::from_lib(e, as_json))?;
            Ok(render_unipoly(&p, as_json))
        }
        Kind::Reliability => {
            let p = families::triangle_power_reliability(form.exponent(), limits)
                .map_err(|e| Failure::from_lib(e, as_json))?;
            Ok(render_unipoly(&p, as_json))
        }
        Kind::Eval => {
            let (x0, y0) = parse_point(point.expect("checked above"), as_json)?;
            count_at(&x0, &y0)
        }
    }
}

fn cmd_graph(target: &FamilyArgs, output: &OutputArgs, limits: &Limits) -> Result<(), Failure> {
    let as_json = output.format == Format::Json;
    let m = target
        .validate()
        .map_err(|msg| Failure::usage(msg, as_json))?;
    let lib = |e: Error| Failure::from_lib(e, as_json);
    let body = match target.family {
        Family::Farey => {
            let g = graph::farey_graph(target.n, limits).map_err(lib)?;
            if as_json {
                g.to_json().to_string()
            } else {
                g.to_edge_list_text()
            }
        }
        Family::Koch => {
            let g = graph::koch_graph(m, target.n, limits).map_err(lib)?;
            if as_json {
                g.to_json().to_string()
            } else {
                g.to_edge_list_text()
            }
        }
        Family::Exp => {
            let g = graph::exp_graph(target.n, limits).map_err(lib)?;
            if as_json {
                g.to_json().to_string()
            } else {
                g.to_edge_list_text()
            }
        }
    };
    deliver(output, body.trim_end().to_string())
}

fn cmd_bench(target: &FamilyArgs, reps: u32, limits: &Limits) -> Result<(), Failure> {
    let m = target
        .validate()
        .map_err(|msg| Failure::usage(msg, false))?;
    if reps == 0 {
        return Err(Failure::usage("--reps must be positive", false));
    }
    let n = target.n;

    // The structured route must be feasible or the benchmark is pointless;
    // budget refusals propagate as such.
    let recursion: Box<dyn Fn() -> Result<(), Error>> = match target.family {
        Family::Farey => Box::new(move || farey::tutte(n, limits).map(drop)),
        Family::Koch | Family::Exp => {
            let family = target.family;
            Box::new(move || {
                std::hint::black_box(power_form(family, m, n));
                Ok(())
            })
        }
    };

    // The oracle column degrades to "skipped" with the reason.
    let oracle_graph = match target.family {
        Family::Farey => graph::farey_graph(n, limits).map(|g| g.graph),
        Family::Koch => graph::koch_graph(m, n, limits),
        Family::Exp => graph::exp_graph(n, limits),
    };
    let oracle_state = match oracle_graph {
        Err(e) => Err(e.to_string()),
        Ok(g) if g.num_edges() > limits.subset_edge_cap => Err(format!(
            "{} edges exceed the {}-edge subset budget",
            g.num_edges(),
            limits.subset_edge_cap
        )),
        Ok(g) => Ok(g),
    };

    match target.family {
        Family::Farey => println!("bench family=farey n={n} reps={reps}"),
        Family::Koch => println!("bench family=koch m={m} n={n} reps={reps}"),
        Family::Exp => println!("bench family=exp n={n} reps={reps}"),
    }

    // one untimed pass per column so allocator warm-up stays out of rep 1
    recursion().map_err(|e| Failure::from_lib(e, false))?;
    if let Ok(g) = &oracle_state {
        std::hint::black_box(oracle::tutte_subgraph_sum(g, limits))
            .map_err(|e| Failure::from_lib(e, false))?;
    }

    let mut rec_times = Vec::new();
    let mut oracle_times = Vec::new();
    for rep in 1..=reps {
        let rec = timed_call(&*recursion).map_err(|e| Failure::from_lib(e, false))?;
        rec_times.push(rec);

        match &oracle_state {
            Ok(g) => {
                let ora = timed_call(&|| {
                    oracle::tutte_subgraph_sum(g, limits).map(|t| {
                        std::hint::black_box(t);
                    })
                })
                .map_err(|e| Failure::from_lib(e, false))?;
                oracle_times.push(ora);
                println!("rep {rep}: recursion {rec:.2?}, oracle {ora:.2?}");
            }
            Err(why) => println!("rep {rep}: recursion {rec:.2?}, oracle skipped ({why})"),
        }
    }

    let rec_med = median(&mut rec_times);
    match oracle_times.is_empty() {
        true => println!("median: recursion {rec_med:.2?}, oracle skipped"),
        false => {
            let ora_med = median(&mut oracle_times);
            let speedup = ora_med.as_secs_f64() / rec_med.as_secs_f64().max(1e-9);
            println!(
                "median: recursion {rec_med:.2?}, oracle {ora_med:.2?}, speedup {speedup:.0}x"
            );
        }
    }
    Ok(())
}

fn median(times: &mut [Duration]) -> Duration {
    times.sort();
    times[times.len() / 2]
}

/// Wall time of one call. Sub-millisecond routines are timed as a batch
/// big enough to damp scheduler jitter; the figure is always per call.
fn timed_call(f: &dyn Fn() -> Result<(), Error>) -> Result<Duration, Error> {
    let floor = Duration::from_millis(2);
    let probe = Instant::now();
    f()?;
    let once = probe.elapsed();
    if once >= floor {
        return Ok(once);
    }
    let iters = (floor.as_nanos() / once.as_nanos().max(1)).clamp(1, 100_000) as u32;
    let start = Instant::now();
    for _ in 0..iters {
        f()?;
    }
    Ok(start.elapsed() / iters)
}
