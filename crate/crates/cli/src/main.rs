use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bondspan::graph::TieBreak;
use bondspan::io::{read_instance, read_matroid_instance};
use bondspan::matroid::{exact_expected_sam_matroid_with_limit, MatroidInstance};
use bondspan::stochastic::{
    analyze, mc_expected_sam, opt_tree, AnalysisOptions, LemmaCheck, McEstimate, BOUND_TOLERANCE,
    DEFAULT_EXACT_EDGE_LIMIT,
};
use bondspan::tight::{sweep_with_limit, write_sweep_csv};
use bondspan::verify::{run_suite, Suite, SuiteReport, VerifyOptions};
use bondspan::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "bondspan", version, about = "Single-sample stochastic spanning trees: exact analysis, simulation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact and/or Monte Carlo analysis of an instance file.
    Analyze {
        input: PathBuf,
        /// Evaluate E[SAM] exactly (the default when --mc-samples is absent).
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        mc_samples: Option<u64>,
        #[arg(long, env = "BONDSPAN_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EXACT_EDGE_LIMIT)]
        exact_limit: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo estimate of E[SAM] for any weight distributions.
    Simulate {
        input: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        mc_samples: u64,
        #[arg(long, env = "BONDSPAN_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sweep the worst-case rate construction over a list of scales.
    WorstCase {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        scale_list: Vec<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_EXACT_EDGE_LIMIT)]
        exact_limit: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Largest cocircuit and exact ratio for a matroid instance file.
    Matroid {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXACT_EDGE_LIMIT)]
        exact_limit: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 6)]
        max_edges: usize,
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, env = "BONDSPAN_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "counterexamples")]
        counterexample_dir: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Graphs,
    Stochastic,
    Matroids,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Graphs => vec![Suite::Graphs],
            SuiteArg::Stochastic => vec![Suite::Stochastic],
            SuiteArg::Matroids => vec![Suite::Matroids],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

/// Failure with its exit code and the one-line JSON reason for stderr.
struct Failure {
    code: u8,
    reason: serde_json::Value,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            reason: json!({"error": "usage", "message": message.into()}),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Parse { line, column, .. } => Failure {
                code: 2,
                reason: json!({"error": "parse", "line": line, "column": column, "message": message}),
            },
            Error::SizeGuard { what, limit, actual } => Failure {
                code: 4,
                reason: json!({"error": "size_guard", "what": what, "limit": limit, "actual": actual, "message": message}),
            },
            Error::Disconnected => Failure {
                code: 3,
                reason: json!({"error": "disconnected", "message": message}),
            },
            Error::NonExponential => Failure {
                code: 3,
                reason: json!({"error": "non_exponential", "message": message}),
            },
            _ => Failure {
                code: 3,
                reason: json!({"error": "invalid_instance", "message": message}),
            },
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn emit(output: Option<&Path>, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => {
            std::io::stdout().write_all(text.as_bytes()).ok();
            Ok(())
        }
    }
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_analyze(
    input: &Path,
    exact: bool,
    mc_samples: Option<u64>,
    seed: u64,
    exact_limit: usize,
    output: Option<&Path>,
) -> CmdResult {
    if mc_samples == Some(0) {
        return Err(Failure::usage("--mc-samples must be positive"));
    }
    let inst = read_instance(input)?;
    let opts = AnalysisOptions {
        exact: exact || mc_samples.is_none(),
        mc_samples,
        seed,
        exact_edge_limit: exact_limit,
        tie: TieBreak::default(),
    };
    let report = analyze(&inst, &opts)?;
    emit(output, &report)?;
    Ok(verdict(report.lemma_checks.values().all(|c| c.pass)))
}

#[derive(Serialize)]
struct SimulationReport {
    e_opt: f64,
    e_sam_mc: McEstimate,
    alpha: f64,
}

fn cmd_simulate(input: &Path, mc_samples: u64, seed: u64, output: Option<&Path>) -> CmdResult {
    if mc_samples == 0 {
        return Err(Failure::usage("--mc-samples must be positive"));
    }
    let inst = read_instance(input)?;
    let (_, e_opt) = opt_tree(&inst, &TieBreak::default())?;
    let e_sam_mc = mc_expected_sam(&inst, mc_samples, seed, &TieBreak::default())?;
    let alpha = if e_opt == 0.0 && e_sam_mc.estimate == 0.0 {
        1.0
    } else {
        e_sam_mc.estimate / e_opt
    };
    emit(output, &SimulationReport { e_opt, e_sam_mc, alpha })?;
    Ok(ExitCode::SUCCESS)
}

fn graph_name(name: &str, input: &Path) -> String {
    if name.is_empty() {
        input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    } else {
        name.to_owned()
    }
}

fn cmd_worst_case(
    input: &Path,
    scales: &[f64],
    csv: Option<&Path>,
    exact_limit: usize,
    output: Option<&Path>,
) -> CmdResult {
    if scales.is_empty() {
        return Err(Failure::usage("--scale-list is empty"));
    }
    if let Some(bad) = scales.iter().find(|m| !(m.is_finite() && **m >= 1.0)) {
        return Err(Failure::usage(format!("scale {bad} must be a finite number >= 1")));
    }
    let inst = read_instance(input)?;
    let sweep = sweep_with_limit(inst.graph(), scales, exact_limit)?;
    let name = graph_name(inst.name(), input);
    if let Some(path) = csv {
        let file = fs::File::create(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        write_sweep_csv(file, &sweep, &name)?;
    }
    let summary = json!({
        "graph": name,
        "b": sweep.b,
        "bond_witness": sweep.bond_witness,
        "rows": sweep.rows.iter().map(|r| json!({"M": r.scale, "alpha": r.alpha})).collect::<Vec<_>>(),
    });
    emit(output, &summary)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct MatroidReport {
    ground_size: usize,
    rank: usize,
    c_star: usize,
    cocircuit_witness: Vec<String>,
    e_opt: f64,
    e_sam_exact: f64,
    alpha: f64,
    lemma_checks: std::collections::BTreeMap<String, LemmaCheck>,
}

fn cmd_matroid(input: &Path, exact_limit: usize, output: Option<&Path>) -> CmdResult {
    let inst: MatroidInstance = read_matroid_instance(input)?;
    let m = inst.matroid();
    let (c_star, witness) = m.largest_cocircuit()?;
    let (_, e_opt) = inst.opt_basis(&TieBreak::default())?;
    let e_sam = exact_expected_sam_matroid_with_limit(&inst, exact_limit)?;
    let alpha = if e_opt == 0.0 && e_sam == 0.0 { 1.0 } else { e_sam / e_opt };
    let check = LemmaCheck::non_positive(alpha - c_star.max(1) as f64 - BOUND_TOLERANCE);
    let report = MatroidReport {
        ground_size: m.len(),
        rank: m.full_rank(),
        c_star,
        cocircuit_witness: (0..m.len())
            .filter(|i| witness & (1 << i) != 0)
            .map(|i| m.label(i).to_owned())
            .collect(),
        e_opt,
        e_sam_exact: e_sam,
        alpha,
        lemma_checks: [("cocircuit_upper_bound".to_owned(), check)].into_iter().collect(),
    };
    emit(output, &report)?;
    Ok(verdict(check.pass))
}

#[derive(Serialize)]
struct VerifySummary {
    passed: bool,
    suites: Vec<SuiteReport>,
    counterexample_files: Vec<PathBuf>,
}

fn cmd_verify(suites: &[Suite], opts: &VerifyOptions, dir: &Path, output: Option<&Path>) -> CmdResult {
    let mut reports = Vec::new();
    let mut files = Vec::new();
    for &suite in suites {
        let report = run_suite(suite, opts)?;
        if let Some(c) = &report.counterexample {
            fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("{}-{}.json", suite.name(), c.check));
            fs::write(&path, format!("{}\n", c.file))
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            files.push(path);
        }
        reports.push(report);
    }
    let passed = reports.iter().all(SuiteReport::passed);
    emit(
        output,
        &VerifySummary {
            passed,
            suites: reports,
            counterexample_files: files,
        },
    )?;
    Ok(verdict(passed))
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Analyze {
            input,
            exact,
            mc_samples,
            seed,
            exact_limit,
            output,
        } => cmd_analyze(&input, exact, mc_samples, seed, exact_limit, output.as_deref()),
        Command::Simulate {
            input,
            mc_samples,
            seed,
            output,
        } => cmd_simulate(&input, mc_samples, seed, output.as_deref()),
        Command::WorstCase {
            input,
            scale_list,
            csv,
            exact_limit,
            output,
        } => cmd_worst_case(&input, &scale_list, csv.as_deref(), exact_limit, output.as_deref()),
        Command::Matroid {
            input,
            exact_limit,
            output,
        } => cmd_matroid(&input, exact_limit, output.as_deref()),
        Command::Verify {
            suite,
            max_edges,
            max_vertices,
            trials,
            seed,
            counterexample_dir,
            output,
        } => {
            let opts = VerifyOptions {
                max_vertices,
                max_edges,
                trials,
                seed,
                ..VerifyOptions::default()
            };
            cmd_verify(&suite.suites(), &opts, &counterexample_dir, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_owned();
            eprintln!("{}", json!({"error": "usage", "message": first}));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", f.reason);
            ExitCode::from(f.code)
        }
    }
}
