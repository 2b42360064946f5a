//! Command-line front end. [`run`] does everything `main` does but takes its
//! streams as arguments so tests can drive it.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use splitlp_core::experiment::{gen_random_program, GenConfig, HeadPolicy, Ratio};
use splitlp_core::semantics::{
    reduce_indexed, stable_models_bruteforce, stable_models_hcf, stable_models_via_gsplit, stable_models_via_split,
    DEFAULT_MAX_ATOMS,
};
use splitlp_core::split::{bottom_rules, search, SplitGoal};
use splitlp_core::text::{format_atoms, parse_program_with_warnings, RuleDisplay};
use splitlp_core::{build_dep_graph, is_hcf, min_g_splitting_set, render_program, AtomSet, Program, SuperDepGraph};

use crate::dot;
use crate::sweep::{self, SweepConfig};

#[derive(Debug, Parser)]
#[command(name = "splitlp", version, about = "Split ground disjunctive logic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Program file; standard input when absent or `-`.
    input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a program and summarize it.
    Check(Input),
    /// Print the dependency graph.
    Graph {
        #[command(flatten)]
        input: Input,
        /// Strongly connected components instead of atoms.
        #[arg(long = "super")]
        super_graph: bool,
        /// Graphviz output.
        #[arg(long)]
        dot: bool,
    },
    /// Find a smallest nonempty splitting set.
    Split {
        #[command(flatten)]
        input: Input,
        /// Any nonempty splitting set (the default goal).
        #[arg(long, conflicts_with_all = ["require", "bottom_hcf", "max_bottom_rules"])]
        nonempty: bool,
        /// Atoms the splitting set must contain.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["bottom_hcf", "max_bottom_rules"])]
        require: Vec<String>,
        /// The bottom program must be head-cycle-free.
        #[arg(long, conflicts_with = "max_bottom_rules")]
        bottom_hcf: bool,
        /// The bottom program may have at most this many rules.
        #[arg(long, value_name = "N")]
        max_bottom_rules: Option<usize>,
        /// Print the search log first.
        #[arg(long)]
        trace: bool,
    },
    /// Find a smallest nonempty g-splitting set.
    Gsplit(Input),
    /// Print the stable models.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
        /// Refuse programs with more atoms than this.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_MAX_ATOMS)]
        max_atoms: usize,
        /// Split on these atoms instead of a smallest (g-)splitting set.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<String>>,
        /// Report the set used and, for gsplit, models the decomposition missed.
        #[arg(long)]
        verbose: bool,
        /// Exit 1 when there is no stable model.
        #[arg(long)]
        require_model: bool,
    },
    /// Set atoms true or false and simplify.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long = "true", value_name = "ATOMS", value_delimiter = ',')]
        true_atoms: Vec<String>,
        #[arg(long = "false", value_name = "ATOMS", value_delimiter = ',')]
        false_atoms: Vec<String>,
    },
    /// Print a random program.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        /// Rules per variable, e.g. 4.25 or 17/4.
        #[arg(long, default_value = "4.25")]
        ratio: Ratio,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Smallest splitting-set size over random programs, as CSV.
    Sweep {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value = "2")]
        from: Ratio,
        #[arg(long, default_value = "6")]
        to: Ratio,
        #[arg(long, default_value = "0.25")]
        step: Ratio,
        /// Programs per ratio point.
        #[arg(long, default_value_t = 100)]
        per_point: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the CSV here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 20)]
    vars: u32,
    /// `nonempty` or `all-8` (empty heads allowed).
    #[arg(long, default_value_t = HeadPolicy::NonEmpty)]
    head_policy: HeadPolicy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Hcf,
    Split,
    Gsplit,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

struct Streams<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Streams<'_> {
    fn load(&mut self, input: &Input) -> Result<Program, CliError> {
        let (label, text) = match &input.input {
            Some(path) if path.as_os_str() != "-" => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                (path.display().to_string(), text)
            }
            _ => {
                let mut text = String::new();
                self.stdin.read_to_string(&mut text)?;
                ("<stdin>".to_string(), text)
            }
        };
        let (p, warnings) =
            parse_program_with_warnings(&text).map_err(|e| CliError::Usage(format!("{label}:{e}")))?;
        for w in warnings {
            writeln!(self.err, "{label}:{w}")?;
        }
        Ok(p)
    }
}

fn atom_set(p: &Program, names: &[String]) -> Result<AtomSet, CliError> {
    p.atom_set(names.iter().map(String::as_str))
        .map_err(|n| CliError::Usage(format!("atom `{n}` does not occur in the program")))
}

fn rule_numbers(rules: &[usize]) -> String {
    rules.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(", ")
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Streams { stdin, out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(cmd: Command, io: &mut Streams) -> Result<i32, CliError> {
    match cmd {
        Command::Check(input) => {
            let p = io.load(&input)?;
            let sg = SuperDepGraph::of_program(&p);
            writeln!(io.out, "rules: {}", p.len())?;
            writeln!(io.out, "atoms: {}", p.atoms().len())?;
            writeln!(io.out, "components: {}", sg.len())?;
            writeln!(io.out, "negation: {}", if p.has_negation() { "yes" } else { "no" })?;
            writeln!(io.out, "disjunction: {}", if p.rules().iter().any(|r| r.is_disjunctive()) { "yes" } else { "no" })?;
            writeln!(io.out, "head-cycle-free: {}", if is_hcf(&p, &sg) { "yes" } else { "no" })?;
        }
        Command::Graph { input, super_graph, dot } => {
            let p = io.load(&input)?;
            let g = build_dep_graph(&p);
            let text = match (super_graph, dot) {
                (false, false) => dot::dependency_listing(&p, &g),
                (false, true) => dot::dependency_dot(&p, &g),
                (true, false) => dot::super_listing(&p, &SuperDepGraph::of_program(&p)),
                (true, true) => dot::super_dot(&p, &g, &SuperDepGraph::of_program(&p)),
            };
            io.out.write_all(text.as_bytes())?;
        }
        Command::Split { input, nonempty: _, require, bottom_hcf, max_bottom_rules, trace } => {
            let p = io.load(&input)?;
            let goal = if !require.is_empty() {
                SplitGoal::MustContain(atom_set(&p, &require)?)
            } else if bottom_hcf {
                SplitGoal::BottomIsHcf
            } else if let Some(n) = max_bottom_rules {
                SplitGoal::BottomRulesAtMost(n)
            } else {
                SplitGoal::NonEmpty
            };
            let sg = SuperDepGraph::of_program(&p);
            let outcome = search(&p, &sg, &goal).map_err(|e| CliError::Usage(e.to_string()))?;
            if trace {
                io.out.write_all(outcome.trace.render(p.symbols()).as_bytes())?;
            }
            let Some(found) = outcome.found else {
                return Err(CliError::Domain("no splitting set satisfies the constraints".into()));
            };
            writeln!(io.out, "splitting set: {}", format_atoms(p.symbols(), found.atoms()))?;
            writeln!(io.out, "size: {}", found.atom_count())?;
            writeln!(io.out, "bottom rules: {}", rule_numbers(&bottom_rules(&p, found.atoms())))?;
        }
        Command::Gsplit(input) => {
            let p = io.load(&input)?;
            let sg = SuperDepGraph::of_program(&p);
            let Some(s) = min_g_splitting_set(&p, &sg) else {
                return Err(CliError::Domain("the program has no atoms".into()));
            };
            writeln!(io.out, "g-splitting set: {}", format_atoms(p.symbols(), &s))?;
            writeln!(io.out, "size: {}", s.len())?;
            writeln!(io.out, "bottom rules: {}", rule_numbers(&bottom_rules(&p, &s)))?;
        }
        Command::Solve { input, method, max_atoms, set, verbose, require_model } => {
            let p = io.load(&input)?;
            let models = solve(&p, method, max_atoms, set.as_deref(), verbose, io)?;
            for m in &models {
                writeln!(io.out, "{}", format_atoms(p.symbols(), m))?;
            }
            writeln!(io.out, "models: {}", models.len())?;
            if require_model && models.is_empty() {
                return Ok(1);
            }
        }
        Command::Reduce { input, true_atoms, false_atoms } => {
            let p = io.load(&input)?;
            let x = atom_set(&p, &true_atoms)?;
            let y = atom_set(&p, &false_atoms)?;
            let (q, origin) = reduce_indexed(&p, &x, &y).map_err(|e| match e {
                splitlp_core::semantics::SemanticsError::Overlap(a) => {
                    CliError::Usage(format!("atom `{}` is both true and false", p.symbols().name(a)))
                }
                e => CliError::Usage(e.to_string()),
            })?;
            for (r, i) in q.rules().iter().zip(origin) {
                writeln!(io.out, "{}  % rule {}", RuleDisplay::new(r, q.symbols()), i + 1)?;
            }
        }
        Command::Gen { gen, ratio, seed } => {
            let cfg = GenConfig { num_vars: gen.vars, ratio, seed, head_policy: gen.head_policy };
            let p = gen_random_program(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
            writeln!(
                io.out,
                "% {} variables, ratio {}, {} rules, seed {}, head policy {}",
                cfg.num_vars,
                cfg.ratio,
                p.len(),
                cfg.seed,
                cfg.head_policy
            )?;
            io.out.write_all(render_program(&p).as_bytes())?;
        }
        Command::Sweep { gen, from, to, step, per_point, seed, output } => {
            let cfg = SweepConfig { num_vars: gen.vars, from, to, step, per_point, seed, head_policy: gen.head_policy };
            if cfg.num_vars < 3 || cfg.per_point == 0 || step.is_zero() || from > to {
                return Err(CliError::Usage("need --vars >= 3, --per-point >= 1, --step > 0 and --from <= --to".into()));
            }
            for line in sweep::assumptions(&cfg) {
                writeln!(io.err, "% {line}")?;
            }
            match output {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                    sweep::write_sweep_csv(&cfg, file).map_err(domain)?;
                }
                None => {
                    sweep::write_sweep_csv(&cfg, &mut *io.out).map_err(domain)?;
                }
            }
        }
    }
    Ok(0)
}

fn solve(
    p: &Program,
    method: Method,
    max_atoms: usize,
    set: Option<&[String]>,
    verbose: bool,
    io: &mut Streams,
) -> Result<Vec<AtomSet>, CliError> {
    let sg = SuperDepGraph::of_program(p);
    if matches!(method, Method::Hcf | Method::Gsplit) && !is_hcf(p, &sg) {
        return Err(CliError::Domain(format!("--method {} needs a head-cycle-free program", method_name(method))));
    }
    let chosen = match set {
        Some(names) => Some(atom_set(p, names)?),
        None => None,
    };
    Ok(match method {
        Method::Brute => stable_models_bruteforce(p, max_atoms).map_err(domain)?,
        Method::Hcf => stable_models_hcf(p, max_atoms).map_err(domain)?,
        Method::Split => {
            let u = match chosen {
                Some(u) => u,
                None => splitlp_core::min_splitting_set(p, &SplitGoal::NonEmpty).map_err(domain)?.unwrap_or_default(),
            };
            if verbose {
                writeln!(io.err, "% splitting set {}", format_atoms(p.symbols(), &u))?;
            }
            stable_models_via_split(p, &u, max_atoms).map_err(domain)?
        }
        Method::Gsplit => {
            let s = match chosen {
                Some(s) => s,
                None => min_g_splitting_set(p, &sg).unwrap_or_default(),
            };
            let models = stable_models_via_gsplit(p, &s, max_atoms).map_err(domain)?;
            if verbose {
                writeln!(io.err, "% g-splitting set {}", format_atoms(p.symbols(), &s))?;
                let all = stable_models_bruteforce(p, max_atoms).map_err(domain)?;
                let missed: Vec<&AtomSet> = all.iter().filter(|m| !models.contains(m)).collect();
                if missed.is_empty() {
                    writeln!(io.err, "% every stable model was recovered")?;
                }
                for m in missed {
                    writeln!(io.err, "% not recovered: {}", format_atoms(p.symbols(), m))?;
                }
            }
            models
        }
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Brute => "brute",
        Method::Hcf => "hcf",
        Method::Split => "split",
        Method::Gsplit => "gsplit",
    }
}
