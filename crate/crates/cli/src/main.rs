use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use surfgroup::{
    run, MonodromyData, Permutation, PipelineOptions, PipelineOutput, Strategy, TrivialBranches,
};

mod render;

const EXIT_INPUT: u8 = 2;
const EXIT_FAILURE: u8 = 3;

/// Presentations of surface groups from branched-cover monodromy.
#[derive(Debug, Parser)]
#[command(name = "surfgroup", version)]
struct Args {
    /// JSON job file: `{"degree": n, "branches": [...]}` or an array of such jobs.
    #[arg(long, conflicts_with_all = ["degree", "branch"])]
    input: Option<PathBuf>,
    /// Number of sheets.
    #[arg(long, requires = "branch")]
    degree: Option<usize>,
    /// A branch permutation in cycle notation, e.g. "(1 2)(3 4)". Repeat once per branch point.
    #[arg(long, allow_hyphen_values = true)]
    branch: Vec<String>,
    #[arg(long, value_enum, default_value_t = Transversal::Sigma1)]
    transversal: Transversal,
    /// Collect the surviving relator into a product of commutators.
    #[arg(long)]
    canonical: bool,
    /// Run every consistency check and fail with exit code 3 if one does.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print the coset representative of every sheet.
    #[arg(long)]
    dump_transversal: bool,
    /// Also write canonical pairs as words in the sigma generators.
    #[arg(long)]
    expand_definitions: bool,
    /// Drop identity branches instead of rejecting them.
    #[arg(long)]
    drop_trivial_branches: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Transversal {
    Bfs,
    Sigma1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobSpec {
    #[serde(default)]
    name: Option<String>,
    degree: usize,
    branches: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum InputDocument {
    One(JobSpec),
    Batch(Vec<JobSpec>),
}

pub struct Settings {
    pub format: Format,
    pub dump_transversal: bool,
    pub expand_definitions: bool,
}

pub enum Outcome {
    Done {
        output: Box<PipelineOutput>,
        warnings: Vec<String>,
    },
    Rejected {
        kind: String,
        message: String,
        code: u8,
    },
}

pub struct JobResult {
    pub name: Option<String>,
    pub outcome: Outcome,
}

impl JobResult {
    pub fn exit_code(&self) -> u8 {
        match &self.outcome {
            Outcome::Done { output, .. } => match &output.report {
                Some(r) if !r.pass => EXIT_FAILURE,
                _ => 0,
            },
            Outcome::Rejected { code, .. } => *code,
        }
    }
}

fn rejected(message: String, code: u8) -> Outcome {
    let kind = message
        .split(':')
        .next()
        .unwrap_or_default()
        .trim()
        .to_string();
    Outcome::Rejected {
        kind,
        message,
        code,
    }
}

fn parse_branches(spec: &JobSpec, trivial: TrivialBranches) -> Result<MonodromyData, String> {
    let mut perms = Vec::with_capacity(spec.branches.len());
    for (i, text) in spec.branches.iter().enumerate() {
        let p = Permutation::parse_cycles(text, spec.degree)
            .map_err(|e| format!("{e} (branch {})", i + 1))?;
        perms.push(p);
    }
    MonodromyData::validate_with(spec.degree, perms, trivial).map_err(|e| e.to_string())
}

fn run_job(spec: &JobSpec, opts: PipelineOptions, trivial: TrivialBranches) -> JobResult {
    let outcome = match parse_branches(spec, trivial) {
        Err(message) => rejected(message, EXIT_INPUT),
        Ok(data) => match run(&data, opts) {
            Ok(output) => {
                let mut warnings = Vec::new();
                if output.canonical_skipped {
                    warnings.push(
                        "no branch is a single n-cycle; presentation emitted, canonical form skipped".to_string(),
                    );
                }
                Outcome::Done {
                    output: Box::new(output),
                    warnings,
                }
            }
            Err(e) => {
                let code = if e.is_input_error() {
                    EXIT_INPUT
                } else {
                    EXIT_FAILURE
                };
                rejected(e.to_string(), code)
            }
        },
    };
    JobResult {
        name: spec.name.clone(),
        outcome,
    }
}

fn load_jobs(args: &Args) -> Result<(Vec<JobSpec>, bool), String> {
    if let Some(path) = &args.input {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("InputError: cannot read {}: {e}", path.display()))?;
        let doc: InputDocument = serde_json::from_str(&text)
            .map_err(|e| format!("InputError: {}: {e}", path.display()))?;
        return Ok(match doc {
            InputDocument::One(job) => (vec![job], false),
            InputDocument::Batch(jobs) => (jobs, true),
        });
    }
    match args.degree {
        Some(degree) => Ok((
            vec![JobSpec {
                name: None,
                degree,
                branches: args.branch.clone(),
            }],
            false,
        )),
        None => Err("InputError: give --input PATH or --degree N with --branch".into()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (jobs, batch) = match load_jobs(&args) {
        Ok(j) => j,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let opts = PipelineOptions {
        strategy: match args.transversal {
            Transversal::Bfs => Strategy::Bfs,
            Transversal::Sigma1 => Strategy::Sigma1Adapted,
        },
        canonical: args.canonical,
        verify: args.verify,
    };
    let trivial = if args.drop_trivial_branches {
        TrivialBranches::Drop
    } else {
        TrivialBranches::Reject
    };
    let settings = Settings {
        format: args.format,
        dump_transversal: args.dump_transversal,
        expand_definitions: args.expand_definitions,
    };

    let results: Vec<JobResult> = jobs
        .par_iter()
        .map(|job| run_job(job, opts, trivial))
        .collect();

    for (i, result) in results.iter().enumerate() {
        let label = result
            .name
            .clone()
            .unwrap_or_else(|| format!("job {}", i + 1));
        match &result.outcome {
            Outcome::Done { warnings, .. } => {
                for w in warnings {
                    eprintln!("warning: {label}: {w}");
                }
            }
            Outcome::Rejected { message, .. } => eprintln!("error: {label}: {message}"),
        }
    }
    print!("{}", render::render(&results, batch, &settings));
    let code = results.iter().map(JobResult::exit_code).max().unwrap_or(0);
    ExitCode::from(code)
}
