use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use teleport_core::bounds::{bounds_report, concentration_bounds, entanglement_of_teleportation, schmidt_entanglement};
use teleport_core::protocol::verify_conditions;
use teleport_core::sim::{random_input_sweep, simulate};
use teleport_core::{ComplexVec, InputQudit, Method, Protocol, ProtocolTable, SchmidtSpectrum, C64};

use crate::error::CliError;
use crate::problem::{parse_spectrum, spectrum_entries, ProblemSpec};
use crate::report::{BoundsDoc, ConcentrationDoc, PhasesDoc, ProtocolDoc, ReportDoc, SimulationDoc};

pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(
    name = "teleport",
    version,
    about = "Synthesize, simulate and certify faithful qudit teleportation protocols"
)]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement measures and communication-cost bounds.
    Bounds { problem: PathBuf },
    /// Phase factors, coefficient table and condition residuals.
    Synthesize {
        problem: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
        /// Include the table even when it has more than 64 outcomes.
        #[arg(long)]
        emit_table: bool,
    },
    /// Synthesize, then teleport random inputs through the protocol.
    Simulate {
        problem: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
        #[arg(long)]
        emit_table: bool,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-check a previously written report.
    Verify { report: PathBuf },
    /// Deterministic concentration of resource copies into Bell pairs.
    Concentrate {
        /// Comma-separated probabilities, e.g. `1/2,1/3,1/6`.
        #[arg(long)]
        spectrum: String,
        #[arg(long)]
        copies: usize,
        #[arg(long)]
        bells: usize,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    #[default]
    Auto,
    D2,
    General,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::D2 => Method::D2,
            MethodArg::General => Method::General,
        }
    }
}

/// What a successful command prints.
pub enum Output {
    Report(Box<ReportDoc>),
    Text(String),
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let report = |doc: ReportDoc| Output::Report(Box::new(doc));
    match &cli.command {
        Command::Bounds { problem } => bounds(&load_problem(problem)?).map(report),
        Command::Synthesize {
            problem,
            method,
            emit_table,
        } => synthesize(&load_problem(problem)?, (*method).into(), *emit_table).map(report),
        Command::Simulate {
            problem,
            method,
            emit_table,
            trials,
            seed,
        } => simulate_cmd(&load_problem(problem)?, (*method).into(), *emit_table, *trials, *seed).map(report),
        Command::Verify { report } => {
            let text = read(report)?;
            verify(&ReportDoc::from_json(&text)?).map(|lines| Output::Text(lines.join("\n")))
        }
        Command::Concentrate {
            spectrum,
            copies,
            bells,
        } => concentrate(spectrum, *copies, *bells).map(report),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<ProblemSpec, CliError> {
    ProblemSpec::from_json(&read(path)?)
}

pub fn bounds(problem: &ProblemSpec) -> Result<ReportDoc, CliError> {
    let spectrum = problem.spectrum()?;
    let mut doc = ReportDoc::new("bounds", Some(problem.clone()));
    doc.bounds = Some(BoundsDoc::from(&bounds_report(&spectrum, problem.d, None)));
    Ok(doc)
}

fn synthesized(
    problem: &ProblemSpec,
    method: Method,
    emit_table: bool,
) -> Result<(ReportDoc, SchmidtSpectrum, Protocol), CliError> {
    let spectrum = problem.spectrum()?;
    let protocol = Protocol::synthesize(&spectrum, problem.d, method)?;
    let mut doc = ReportDoc::new("synthesize", Some(problem.clone()));
    if let (Some(phases), Some(strategy)) = (&protocol.phases, protocol.strategy) {
        doc.phases = Some(PhasesDoc::new(phases, strategy, phases.residual(&spectrum)));
    }
    doc.protocol = Some(ProtocolDoc::new(&protocol, emit_table));
    doc.bounds = Some(BoundsDoc::from(&bounds_report(&spectrum, problem.d, None)));
    Ok((doc, spectrum, protocol))
}

pub fn synthesize(problem: &ProblemSpec, method: Method, emit_table: bool) -> Result<ReportDoc, CliError> {
    synthesized(problem, method, emit_table).map(|(doc, _, _)| doc)
}

/// Equal superposition, the reference input when the problem gives none.
fn reference_input(d: usize) -> InputQudit {
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    InputQudit::new(ComplexVec::new(vec![amp; d])).expect("equal superposition is normalized")
}

pub fn simulate_cmd(
    problem: &ProblemSpec,
    method: Method,
    emit_table: bool,
    trials: Option<usize>,
    seed: Option<u64>,
) -> Result<ReportDoc, CliError> {
    let input = problem.input()?;
    let (mut doc, _, protocol) = synthesized(problem, method, emit_table)?;
    doc.command = "simulate".into();
    let trials = trials.or(problem.trials).unwrap_or(DEFAULT_TRIALS);
    let seed = seed.or(problem.seed).unwrap_or(DEFAULT_SEED);
    let input = input.unwrap_or_else(|| reference_input(problem.d));
    let sweep = random_input_sweep(&protocol, trials, seed)?;
    let trace = simulate(&input, &protocol)?;
    doc.simulation = Some(SimulationDoc::new(&sweep, &input, &trace));
    Ok(doc)
}

pub fn concentrate(spectrum: &str, copies: usize, bells: usize) -> Result<ReportDoc, CliError> {
    let entries = spectrum_entries(spectrum);
    let s = parse_spectrum(&entries)?;
    let mut doc = ReportDoc::new("concentrate", None);
    doc.concentration = Some(ConcentrationDoc::new(
        entries,
        &entanglement_of_teleportation(&s),
        &schmidt_entanglement(&s),
        &concentration_bounds(&s, copies, bells),
    ));
    Ok(doc)
}

/// Re-derives every section present in `doc` and checks it against the
/// recorded tolerances. Returns one line per passed check, or every violated
/// invariant.
pub fn verify(doc: &ReportDoc) -> Result<Vec<String>, CliError> {
    let tol = doc.tolerances;
    let mut passed = Vec::new();
    let mut violations = Vec::new();

    if let Some(recorded) = &doc.concentration {
        let fresh = concentrate(&spectrum_list(recorded), recorded.copies, recorded.bells)?;
        if fresh.concentration.as_ref() == Some(recorded) {
            passed.push("concentration bounds reproduced".to_owned());
        } else {
            violations.push("concentration bounds differ from a fresh computation".to_owned());
        }
    }

    let needs_problem = doc.bounds.is_some() || doc.protocol.is_some() || doc.simulation.is_some();
    let problem = match (&doc.problem, needs_problem) {
        (Some(p), _) => Some(p),
        (None, true) => return Err(CliError::Parse("problem: missing".into())),
        (None, false) => None,
    };

    if let (Some(problem), Some(recorded)) = (problem, &doc.bounds) {
        let fresh = BoundsDoc::from(&bounds_report(&problem.spectrum()?, problem.d, None));
        if &fresh == recorded {
            passed.push("bounds reproduced".to_owned());
        } else {
            violations.push("bounds differ from a fresh computation".to_owned());
        }
    }

    let mut protocol = None;
    if let (Some(problem), Some(recorded)) = (problem, &doc.protocol) {
        let spectrum = problem.spectrum()?;
        let table = match recorded.coefficients()? {
            Some(coeffs) => ProtocolTable::explicit(recorded.d, recorded.n, coeffs)
                .map_err(|e| CliError::Parse(format!("protocol.table: {e}")))?,
            None => {
                let method = match recorded.construction.as_str() {
                    "general" => Method::General,
                    "d2" => Method::D2,
                    other => {
                        return Err(CliError::Parse(format!(
                            "protocol.construction: cannot rebuild elided {other:?} table"
                        )))
                    }
                };
                Protocol::synthesize(&spectrum, problem.d, method)?.table
            }
        };
        if table.d() != problem.d {
            violations.push(format!(
                "table is for d = {} but the problem has d = {}",
                table.d(),
                problem.d
            ));
        }
        match verify_conditions(&table, &spectrum) {
            Ok(report) => {
                check_at_most(
                    &mut passed,
                    &mut violations,
                    "orthonormality residual",
                    report.orthonormality,
                    tol.conditions,
                );
                check_at_most(
                    &mut passed,
                    &mut violations,
                    "unitarity residual",
                    report.unitarity,
                    tol.conditions,
                );
            }
            Err(e) => violations.push(format!("conditions: {e}")),
        }
        match Protocol::from_table(&spectrum, table) {
            Ok(p) => protocol = Some(p),
            Err(e) => violations.push(format!("Bob's corrections: {e}")),
        }
    }

    if let Some(recorded) = &doc.simulation {
        if let Some(protocol) = &protocol {
            let sweep = random_input_sweep(protocol, recorded.trials, recorded.seed)?;
            let input = InputQudit::new(
                recorded
                    .reference
                    .input_state
                    .iter()
                    .map(|[re, im]| C64::new(*re, *im))
                    .collect(),
            )
            .map_err(|e| CliError::Parse(format!("simulation.reference.inputState: {e}")))?;
            let trace = simulate(&input, protocol)?;
            let min_fidelity = sweep.min_fidelity.min(trace.min_fidelity);
            check_at_most(
                &mut passed,
                &mut violations,
                "fidelity deficit",
                1.0 - min_fidelity,
                tol.fidelity,
            );
            check_at_most(
                &mut passed,
                &mut violations,
                "outcome probability deviation",
                sweep.max_probability_deviation,
                tol.probability,
            );
            check_at_most(
                &mut passed,
                &mut violations,
                "total probability deviation",
                sweep.max_completeness_deviation,
                tol.probability,
            );
            let ns = sweep.max_residual_schmidt.max(trace.max_residual_schmidt());
            if ns == 1 {
                passed.push("residual Schmidt number 1 on every outcome".to_owned());
            } else {
                violations.push(format!("residual Schmidt number {ns} (expected 1)"));
            }
        } else if doc.protocol.is_none() {
            return Err(CliError::Parse(
                "protocol: missing, needed to re-run the simulation".into(),
            ));
        } else {
            violations.push("simulation could not be re-run".to_owned());
        }
    }

    if violations.is_empty() {
        Ok(passed)
    } else {
        Err(CliError::Verification(violations))
    }
}

fn check_at_most(passed: &mut Vec<String>, violations: &mut Vec<String>, what: &str, value: f64, tol: f64) {
    if value <= tol {
        passed.push(format!("{what} {value:.3e} <= {tol:.0e}"));
    } else {
        violations.push(format!("{what} {value:.3e} exceeds {tol:.0e}"));
    }
}

fn spectrum_list(doc: &ConcentrationDoc) -> String {
    doc.spectrum
        .iter()
        .map(|p| match p {
            crate::problem::Probability::Number(x) => format!("{x:e}"),
            crate::problem::Probability::Text(t) => t.clone(),
        })
        .collect::<Vec<_>>()
        .join(",")
}
