use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ltlguard_core::agents::{AlignMode, RemoteBackend, Transcript};
use ltlguard_core::automata::{product, prune_with_simulation, to_dot, translate};
use ltlguard_core::inclusion::{
    check_against_rules, extract_divergence_path, render_counterexample_report, render_word,
    InclusionAutomata, InclusionOptions, RuleSet,
};
use ltlguard_core::ltl::{check_text, parse, render, render_diagnostics, Formula};
use ltlguard_core::pipeline::{
    initial_violation_survey, parse_dataset, run_benchmark, AgentPool, BenchmarkReport,
    PipelineConfig, PipelineResult, PipelineStatus, TaskEntry,
};

#[derive(Parser)]
#[command(
    name = "ltlguard",
    version,
    about = "LTL extraction with rule-compliance checking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form.
    Parse(FormulaArg),
    /// Report operator and parenthesis problems.
    CheckSyntax(FormulaArg),
    /// Translate a formula to a Büchi automaton.
    Translate {
        #[command(flatten)]
        input: FormulaArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Quotient by mutual forward simulation.
        #[arg(long)]
        prune: bool,
    },
    /// Check a formula against every rule of a rule file.
    Include {
        phi: PathBuf,
        rules: PathBuf,
        /// Print the full checking report for each failing rule.
        #[arg(long)]
        report: bool,
        /// Write phi.dot, rule-<name>.dot and product-<name>.dot here.
        #[arg(long)]
        dot_dir: Option<PathBuf>,
        #[arg(long)]
        no_minimize: bool,
    },
    /// Print the divergence path of a formula against each rule.
    Path {
        phi: PathBuf,
        rules: PathBuf,
        #[arg(long)]
        maxdepth: Option<usize>,
    },
    /// Run the repair loop on every dataset entry.
    Run(BatchArgs),
    /// Run the repair loop and report violation statistics.
    Bench(BatchArgs),
    /// Check only the initial extractions, without repair.
    Survey(BatchArgs),
}

#[derive(Args)]
struct FormulaArg {
    /// Formula text.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    formula: Option<String>,
    /// Read the formula from a file.
    #[arg(short, long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Remote,
    Scripted,
}

#[derive(Args)]
struct BatchArgs {
    dataset: PathBuf,
    rules: PathBuf,
    #[arg(long, default_value_t = 25)]
    max_iters: usize,
    #[arg(long, value_enum, default_value_t = BackendKind::Remote)]
    backend: BackendKind,
    /// Scripted responses; implies the scripted backend.
    #[arg(long)]
    transcript: Option<PathBuf>,
    #[arg(long)]
    parallel: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    no_minimize: bool,
    /// Only run the entry with this id.
    #[arg(long)]
    entry: Option<String>,
}

enum Failure {
    Usage(String),
    Engine(String),
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

impl FormulaArg {
    fn text(&self) -> Result<String, Failure> {
        match (&self.formula, &self.file) {
            (_, Some(p)) => Ok(read(p)?.trim().to_string()),
            (Some(t), None) => Ok(t.clone()),
            (None, None) => Err(Failure::Usage("no formula given".into())),
        }
    }
}

fn parse_or_usage(text: &str, what: &str) -> Result<Formula, Failure> {
    parse(text).map_err(|d| Failure::Usage(format!("{what}: {}", render_diagnostics(&d))))
}

fn load_rules(path: &Path) -> Result<RuleSet, Failure> {
    RuleSet::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_parse(input: &FormulaArg) -> Outcome {
    match parse(&input.text()?) {
        Ok(f) => {
            println!("{}", render(&f));
            Ok(true)
        }
        Err(d) => {
            println!("{}", render_diagnostics(&d));
            Ok(false)
        }
    }
}

fn cmd_check_syntax(input: &FormulaArg) -> Outcome {
    let d = check_text(&input.text()?);
    if d.is_empty() {
        println!("ok");
    } else {
        println!("{}", render_diagnostics(&d));
    }
    Ok(d.is_empty())
}

fn cmd_translate(input: &FormulaArg, format: Format, prune: bool) -> Outcome {
    let f = parse_or_usage(&input.text()?, "formula")?;
    let mut a = translate(&f);
    if prune {
        a = prune_with_simulation(&a);
    }
    match format {
        Format::Text => print!("{}", a.to_text()),
        Format::Dot => print!("{}", to_dot(&a)),
    }
    Ok(true)
}

fn cmd_include(
    phi: &Path,
    rules: &Path,
    report: bool,
    dot_dir: Option<&Path>,
    no_minimize: bool,
) -> Outcome {
    let f = parse_or_usage(read(phi)?.trim(), "phi")?;
    let rules = load_rules(rules)?;
    let options = InclusionOptions {
        minimize: !no_minimize,
        ..InclusionOptions::default()
    };
    if let Some(dir) = dot_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        write(&dir.join("phi.dot"), &to_dot(&translate(&f)))?;
    }
    let check = check_against_rules(&f, &rules, false, options);
    if let Some((name, e)) = check.first_error() {
        return Err(Failure::Engine(format!("rule {name}: {e}")));
    }
    let many = rules.len() > 1;
    for (rule, (name, verdict)) in rules.rules().iter().zip(&check.results) {
        let v = verdict.as_ref().expect("errors handled above");
        let aut = InclusionAutomata::build(&f, &rule.formula);
        if let Some(dir) = dot_dir {
            write(&dir.join(format!("rule-{name}.dot")), &to_dot(&aut.psi))?;
            write(
                &dir.join(format!("product-{name}.dot")),
                &to_dot(&product(&aut.phi, &aut.not_psi)),
            )?;
        }
        if many {
            println!("[{name}]");
        }
        if v.is_included() {
            println!("Included.");
        } else if report {
            print!("{}", render_counterexample_report(v, &aut.phi, &aut.psi));
        } else {
            let w = v
                .counterexample
                .as_ref()
                .expect("not-included verdict carries a word");
            println!("Counterexample: {}", render_word(w, &aut.phi, &aut.psi));
            println!("Not included.");
        }
    }
    Ok(check.all_included())
}

fn cmd_path(phi: &Path, rules: &Path, maxdepth: Option<usize>) -> Outcome {
    let f = parse_or_usage(read(phi)?.trim(), "phi")?;
    let rules = load_rules(rules)?;
    let mut found = true;
    for rule in rules.rules() {
        let aut = InclusionAutomata::build(&f, &rule.formula);
        let depth = maxdepth.unwrap_or(aut.phi.num_states() * aut.psi.num_states());
        let (path, stats) = extract_divergence_path(&aut.phi, &aut.psi, depth);
        match path {
            Some(p) => println!("{}: {}", rule.name, p.render()),
            None => {
                found = false;
                println!("{}: no divergence", rule.name);
            }
        }
        println!(
            "  expanded pairs {}, symbol comparisons {}",
            stats.expanded_pairs, stats.symbol_comparisons
        );
    }
    Ok(found)
}

#[derive(Clone, Copy)]
enum Batch {
    Run,
    Bench,
    Survey,
}

fn cmd_batch(kind: Batch, args: &BatchArgs) -> Outcome {
    let pool = match (&args.transcript, args.backend) {
        (Some(t), _) => {
            let text = read(t)?;
            AgentPool::scripted(
                Transcript::parse(&text)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", t.display())))?,
            )
        }
        (None, BackendKind::Scripted) => {
            return Err(Failure::Usage(
                "the scripted backend needs --transcript".into(),
            ))
        }
        (None, BackendKind::Remote) => {
            let b = RemoteBackend::from_env().map_err(|e| Failure::Usage(e.to_string()))?;
            AgentPool::remote(Arc::new(b))
        }
    };
    let mut dataset: Vec<TaskEntry> =
        parse_dataset(&read(&args.dataset)?).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(id) = &args.entry {
        dataset.retain(|e| &e.id == id);
        if dataset.is_empty() {
            return Err(Failure::Usage(format!("no entry '{id}'")));
        }
    }
    let rules = load_rules(&args.rules)?;
    if args.max_iters == 0 {
        return Err(Failure::Usage("--max-iters must be at least 1".into()));
    }
    let config = PipelineConfig {
        max_iterations: args.max_iters,
        parallel: args.parallel,
        minimize: !args.no_minimize,
        align: if args.transcript.is_some() {
            AlignMode::Similarity
        } else {
            AlignMode::Llm
        },
        seed: args.seed,
        ..PipelineConfig::default()
    };
    let (report, results) = match kind {
        Batch::Survey => initial_violation_survey(&dataset, &rules, &config, &pool),
        Batch::Run | Batch::Bench => run_benchmark(&dataset, &rules, &config, &pool),
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    if let Batch::Run = kind {
        for r in &results {
            print_trace(r);
        }
    }
    print!("{}", report.render_table());
    let out = match kind {
        Batch::Run => args.out.clone(),
        Batch::Bench | Batch::Survey => {
            Some(args.out.clone().unwrap_or_else(|| "results.json".into()))
        }
    };
    if let Some(out) = out {
        write(&out, &report.to_json())?;
    }
    Ok(match kind {
        Batch::Run => all_compliant(&report),
        Batch::Bench | Batch::Survey => true,
    })
}

fn all_compliant(report: &BenchmarkReport) -> bool {
    report
        .entries
        .iter()
        .all(|e| e.status == PipelineStatus::Compliant)
}

fn print_trace(r: &PipelineResult) {
    println!("== {} ({})", r.id, r.status.as_str());
    for t in &r.trace {
        let mut line = format!("  [{}] {:?}", t.iteration, t.phase);
        if let Some(rule) = &t.rule {
            line.push_str(&format!(" rule={rule}"));
        }
        if let Some(v) = &t.verdict {
            line.push_str(&format!(" {v}"));
        }
        if let Some(f) = &t.formula {
            line.push_str(&format!(" | {f}"));
        }
        if let Some(n) = &t.note {
            line.push_str(&format!(" ({n})"));
        }
        println!("{line}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Parse(input) => cmd_parse(input),
        Command::CheckSyntax(input) => cmd_check_syntax(input),
        Command::Translate {
            input,
            format,
            prune,
        } => cmd_translate(input, *format, *prune),
        Command::Include {
            phi,
            rules,
            report,
            dot_dir,
            no_minimize,
        } => cmd_include(phi, rules, *report, dot_dir.as_deref(), *no_minimize),
        Command::Path {
            phi,
            rules,
            maxdepth,
        } => cmd_path(phi, rules, *maxdepth),
        Command::Run(a) => cmd_batch(Batch::Run, a),
        Command::Bench(a) => cmd_batch(Batch::Bench, a),
        Command::Survey(a) => cmd_batch(Batch::Survey, a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
