use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gtpoly::report::{self, Budget, Status};
use gtpoly::{chains, ladder, render, skeleton, Error, GammaGrid, MultiplicityVector};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "gtpoly", version)]
#[command(about = "Ladder-diagram computations on Gelfand-Tsetlin polytopes")]
struct Cli {
    /// Output format; which ones apply depends on the subcommand
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Vertex budget for skeleton and group computations
    #[arg(long, global = true, default_value_t = 20_000, value_parser = positive)]
    max_vertices: usize,

    /// Face budget for lattice enumeration
    #[arg(long, global = true, default_value_t = 200_000, value_parser = positive)]
    max_faces: usize,

    /// Element budget for group closure and brute-force search
    #[arg(long, global = true, default_value_t = 100_000, value_parser = positive)]
    max_group: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, terminals, facet count and f-vector
    Info { partition: String },
    /// Closed-form diameter against the computed skeleton diameter
    Diameter { partition: String },
    /// Automorphism group order: formula, generated group and brute force
    Aut { partition: String },
    /// Facet chains, their adjacency tree and the boundary sequence
    Chains { partition: String },
    /// Run every invariant suite on all multiplicity vectors up to a size
    Verify {
        #[arg(long, default_value_t = 5, value_parser = positive)]
        max_n: usize,
    },
    /// Draw a grid, vertex, face, skeleton or chain tree
    Render {
        #[arg(value_enum)]
        what: Target,
        partition: String,
        /// Vertex or face number in enumeration order
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Grid,
    Vertex,
    Face,
    Skeleton,
    Chains,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Output text plus the exit status it implies.
struct Outcome {
    text: String,
    status: u8,
}

enum Failure {
    Usage(String),
    Budget(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Precondition(_) => Failure::Usage(e.to_string()),
            e if e.is_budget() => Failure::Budget(e.to_string()),
            e => Failure::Other(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = Budget { max_vertices: cli.max_vertices, max_faces: cli.max_faces, max_group: cli.max_group };
    match run(&cli, budget) {
        Ok(out) => {
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, &out.text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_FAILURE);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.status)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn parse_full(partition: &str) -> Result<(String, MultiplicityVector), Failure> {
    let p = gtpoly::parse_partition(partition).map_err(|e| Failure::Usage(format!("bad partition `{partition}`: {e}")))?;
    Ok((p.to_string(), p.normalize()))
}

fn parse(partition: &str) -> Result<MultiplicityVector, Failure> {
    parse_full(partition).map(|(_, mv)| mv)
}

fn allow(cli: &Cli, formats: &[Format]) -> Result<(), Failure> {
    if formats.contains(&cli.format) {
        Ok(())
    } else {
        let name = cli.format.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        Err(Failure::Usage(format!("format `{name}` is not available for this subcommand")))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli, budget: Budget) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Info { partition } => {
            allow(cli, &[Format::Text, Format::Json])?;
            let (label, mv) = parse_full(partition)?;
            let mut r = report::info(&mv, budget)?;
            r.partition = label;
            let text = if cli.format == Format::Json { json(&r) } else { info_text(&r) };
            Ok(Outcome { text, status: 0 })
        }
        Command::Diameter { partition } => {
            allow(cli, &[Format::Text, Format::Json])?;
            let (label, mv) = parse_full(partition)?;
            let mut r = report::diameter(&mv, budget)?;
            r.partition = label;
            let bad = r.matches == Some(false) && !r.known_exception;
            let text = if cli.format == Format::Json { json(&r) } else { diameter_text(&r) };
            Ok(Outcome { text, status: if bad { EXIT_FAILURE } else { 0 } })
        }
        Command::Aut { partition } => {
            allow(cli, &[Format::Text, Format::Json])?;
            let (label, mv) = parse_full(partition)?;
            let mut r = report::aut(&mv, budget)?;
            r.partition = label;
            let bad = r.matches == Some(false) || r.relations.iter().any(|x| !x.holds);
            let text = if cli.format == Format::Json { json(&r) } else { aut_text(&r) };
            Ok(Outcome { text, status: if bad { EXIT_FAILURE } else { 0 } })
        }
        Command::Chains { partition } => {
            allow(cli, &[Format::Text, Format::Json, Format::Dot])?;
            let (label, mv) = parse_full(partition)?;
            if cli.format == Format::Dot {
                let grid = GammaGrid::build(&mv)?;
                let list = chains::partition_chains(&grid)?;
                let graph = chains::chain_graph(&grid, &list);
                return Ok(Outcome { text: render::chains_dot(&grid, &list, &graph), status: 0 });
            }
            let mut r = report::chains(&mv, budget)?;
            r.partition = label;
            let status = if r.passes() { 0 } else { EXIT_FAILURE };
            let text = if cli.format == Format::Json { json(&r) } else { chains_text(&r) };
            Ok(Outcome { text, status })
        }
        Command::Verify { max_n } => {
            allow(cli, &[Format::Text, Format::Json])?;
            if *max_n > gtpoly::MAX_N {
                return Err(Error::TooLarge { n: *max_n, max: gtpoly::MAX_N }.into());
            }
            let start = Instant::now();
            let r = report::verify(*max_n, budget)?;
            let status = if r.failures > 0 { EXIT_FAILURE } else { 0 };
            let text = if cli.format == Format::Json {
                json(&r)
            } else {
                let mut t = verify_text(&r);
                let _ = writeln!(t, "elapsed {:.2}s", start.elapsed().as_secs_f64());
                t
            };
            Ok(Outcome { text, status })
        }
        Command::Render { what, partition, index } => render_target(cli, *what, &parse(partition)?, *index, budget),
    }
}

fn pick<T>(items: &[T], index: usize, what: &str) -> Result<usize, Failure> {
    if index < items.len() {
        Ok(index)
    } else {
        Err(Failure::Usage(format!("{what} index {index} out of range (0..{})", items.len())))
    }
}

fn render_target(cli: &Cli, what: Target, mv: &MultiplicityVector, index: usize, budget: Budget) -> Result<Outcome, Failure> {
    let grid = GammaGrid::build(mv)?;
    let label = mv.label();
    let drawing = |edges, title: String| match cli.format {
        Format::Svg => render::svg(&grid, edges, &title),
        _ => format!("{title}\n{}", render::ascii(&grid, edges)),
    };
    let text = match what {
        Target::Grid => {
            allow(cli, &[Format::Text, Format::Svg])?;
            drawing(None, format!("grid {label}"))
        }
        Target::Vertex => {
            allow(cli, &[Format::Text, Format::Svg])?;
            let vertices = ladder::enumerate_vertices(&grid, budget.max_vertices)?;
            let i = pick(&vertices, index, "vertex")?;
            drawing(Some(vertices[i].edges()), format!("vertex {i} of {label}"))
        }
        Target::Face => {
            allow(cli, &[Format::Text, Format::Svg])?;
            let lattice = ladder::enumerate_faces(&grid, budget.max_faces)?;
            let i = pick(lattice.faces(), index, "face")?;
            drawing(Some(lattice.faces()[i].edges()), format!("face {i} of {label}, dimension {}", lattice.dim(i)))
        }
        Target::Skeleton => {
            // DOT is the only drawing of a graph, so plain text gets it too
            allow(cli, &[Format::Text, Format::Dot])?;
            render::skeleton_dot(&grid, &skeleton::build_skeleton(&grid, budget.max_vertices)?)
        }
        Target::Chains => {
            allow(cli, &[Format::Text, Format::Dot])?;
            let list = chains::partition_chains(&grid)?;
            if cli.format == Format::Dot {
                render::chains_dot(&grid, &list, &chains::chain_graph(&grid, &list))
            } else {
                render::chains_ascii(&grid, &list)
            }
        }
    };
    Ok(Outcome { text, status: 0 })
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn omitted(t: &mut String, list: &[String]) {
    for o in list {
        let _ = writeln!(t, "omitted   {o}");
    }
}

fn info_text(r: &report::InfoReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "partition {}", r.partition);
    let _ = writeln!(t, "mv        {:?}", r.multiplicities);
    let _ = writeln!(t, "n={} m={} d={}", r.n, r.m, r.d);
    let terms: Vec<String> = r.terminals.iter().map(|(x, y)| format!("({x},{y})")).collect();
    let _ = writeln!(t, "terminals {}", terms.join(" "));
    let _ = writeln!(t, "facets    {}", opt(&r.facets));
    let _ = writeln!(t, "f0        {}", opt(&r.vertices));
    if let Some(f) = &r.f_vector {
        let _ = writeln!(t, "f-vector  {f:?}");
    }
    if r.d == 0 {
        let _ = writeln!(t, "the polytope is a point");
    }
    omitted(&mut t, &r.omitted);
    t
}

fn diameter_text(r: &report::DiameterReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "partition {}", r.partition);
    let _ = writeln!(t, "formula   {}", r.formula);
    let _ = writeln!(t, "bfs       {} ({})", opt(&r.bfs), r.mode);
    match (r.matches, r.known_exception) {
        (Some(true), _) => t.push_str("result    match\n"),
        (Some(false), true) => t.push_str("result    MISMATCH (known exception: the segment has diameter 1)\n"),
        (Some(false), false) => t.push_str("result    MISMATCH\n"),
        (None, _) => t.push_str("result    formula only\n"),
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(t, "z_h       {}", w.z_h.join(" "));
        let _ = writeln!(t, "z_v       {}", w.z_v.join(" "));
        let _ = writeln!(t, "d(z_h,z_v) {}", w.distance);
        let _ = writeln!(t, "walk      {} steps", w.walk_length);
    }
    omitted(&mut t, &r.omitted);
    t
}

fn aut_text(r: &report::AutReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "partition   {}", r.partition);
    let _ = writeln!(t, "generators  {}", r.generators.join(" "));
    let _ = writeln!(t, "order       {} / {} / {} (formula / generated / brute force)", r.formula_order, opt(&r.generated_order), opt(&r.brute_force_order));
    let _ = writeln!(
        t,
        "result      {}",
        match r.matches {
            Some(true) => "match",
            Some(false) => "MISMATCH",
            None => "formula only",
        }
    );
    for rel in &r.relations {
        let _ = writeln!(t, "  {:<24} {}", rel.name, if rel.holds { "ok" } else { "FAILS" });
    }
    if let Some(s) = &r.structure {
        let _ = writeln!(t, "abelian     {}", s.abelian);
        let orders: Vec<String> = s.element_orders.iter().map(|(o, c)| format!("{c}x{o}")).collect();
        let _ = writeln!(t, "elements    {}", orders.join(" "));
    }
    omitted(&mut t, &r.omitted);
    t
}

fn chains_text(r: &report::ChainsReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "partition {}", r.partition);
    for (i, c) in r.chains.iter().enumerate() {
        let _ = writeln!(t, "{i:>3} {:<6} len {} {}", c.class, c.length, c.edges.join(" "));
    }
    let _ = writeln!(t, "tree      {} (leaves are the length-2 chains: {})", r.is_tree, r.leaves_are_length_two);
    for (a, b, k) in &r.tree_edges {
        let _ = writeln!(t, "  {a} -- {b} at {k}");
    }
    if let Some(s) = &r.boundary_sequence {
        let _ = writeln!(t, "sequence  {}", s.names.join(" "));
        let _ = writeln!(t, "distances {} {}", opt(&s.low_distance), opt(&s.high_distance));
    }
    for o in &r.orientation {
        let seq = o.report.sequence.map_or("-", |s| match s {
            chains::SequenceAction::Fixed => "fixed",
            chains::SequenceAction::Reversed => "reversed",
            chains::SequenceAction::Scrambled => "SCRAMBLED",
        });
        let _ = writeln!(t, "  {:<8} lemmas {} sequence {seq}", o.generator, if o.report.all_pass() { "ok" } else { "FAIL" });
    }
    omitted(&mut t, &r.omitted);
    t
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "ok",
        Status::Fail => "FAIL",
        Status::Expected => "exc",
        Status::Skipped => "-",
    }
}

fn verify_text(r: &report::VerifyReport) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "{:<16} {:>2} {:>2} {:>7} {:>8}  euler grade facet diam  zig   aut   rel   tree  orient",
        "mv", "n", "d", "f0", "faces"
    );
    for row in &r.rows {
        let _ = write!(t, "{:<16} {:>2} {:>2} {:>7} {:>8} ", row.mv, row.n, row.d, opt(&row.vertices), opt(&row.faces));
        for s in row.statuses() {
            let _ = write!(t, " {:<5}", status(s));
        }
        t.truncate(t.trim_end().len());
        t.push('\n');
        for n in &row.notes {
            let _ = writeln!(t, "    note: {n}");
        }
    }
    let _ = writeln!(t, "{} cases, {} failures, {} documented exceptions", r.rows.len(), r.failures, r.expected);
    t
}
