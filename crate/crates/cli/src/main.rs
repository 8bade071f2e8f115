//! Command-line driver: validate and solve instances, check schedules,
//! emit and verify flow certificates, generate hard instances from
//! 3-partition inputs, optimize bounds and workforce size, and run the
//! exhaustive search directly.
//!
//! Exit codes: 0 feasible/valid, 1 infeasible/invalid (with a witness or
//! diagnosis on stdout), 2 input or usage errors, 3 undecided (exhaustive
//! search gate exceeded).

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use dodosp::certify::build_certificate_graph;
use dodosp::classify::{classify_instance, ComplexityClass};
use dodosp::diffcon::NegativeCycle;
use dodosp::instance::Instance;
use dodosp::io::{
    self, certificate_from_file, certificate_to_file, instance_to_json, CertificateFile,
    ScheduleFile,
};
use dodosp::local_bounds::{self, CounterOutcome};
use dodosp::optimize::{self, BoundTarget, WorkforceOutcome};
use dodosp::oracle::{self, OracleError, OracleOptions};
use dodosp::reduction::{self, ReductionVariant, ThreePartition};
use dodosp::schedule::Schedule;
use dodosp::upper_bounds::{self, UpperOutcome};

#[derive(Parser)]
#[command(name = "dodosp", version, about = "Days-on/days-off scheduling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance file and report its solver class.
    Validate { instance: PathBuf },
    /// Decide an instance and emit a schedule or an infeasibility witness.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        emit: EmitArgs,
        /// Search gate (workers x days) for instances outside the
        /// polynomial classes.
        #[arg(long, default_value_t = 24)]
        limit: u64,
        /// Dump the period counters to stderr when the counter solver runs.
        #[arg(long)]
        dump_counters: bool,
    },
    /// Check a schedule file against an instance.
    Check { instance: PathBuf, schedule: PathBuf },
    /// Convert a schedule into a flow certificate.
    Certify {
        instance: PathBuf,
        schedule: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a flow certificate against an instance.
    Verify { instance: PathBuf, certificate: PathBuf },
    /// Generate a hard instance from a 3-partition input.
    Generate {
        /// JSON file with the group count and values.
        #[arg(long = "from-3partition")]
        from_3partition: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find the extremal feasible value of one bound.
    OptimizeBound {
        instance: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long, default_value_t = 24)]
        limit: u64,
    },
    /// Find the minimal workforce size; the instance's `workers` field is
    /// optional and ignored.
    OptimizeWorkers { instance: PathBuf },
    /// Run the exhaustive search directly.
    Brute {
        instance: PathBuf,
        #[arg(long, default_value_t = 24)]
        limit: u64,
        #[arg(long, value_enum, default_value_t = BruteMode::Solve)]
        mode: BruteMode,
        /// Fold worker-permutation symmetry while counting.
        #[arg(long)]
        symmetry: bool,
        #[command(flatten)]
        emit: EmitArgs,
    },
}

#[derive(Args)]
struct EmitArgs {
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Auto,
    Dense,
    Compact,
}

#[derive(Clone, Copy, ValueEnum)]
enum BruteMode {
    Decide,
    Solve,
    Count,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Uw,
    Uo,
    #[value(name = "Uw", alias = "total-work")]
    TotalWork,
    #[value(name = "Uo", alias = "total-off")]
    TotalOff,
    Lw,
    Lo,
}

impl From<TargetArg> for BoundTarget {
    fn from(value: TargetArg) -> Self {
        match value {
            TargetArg::Uw => BoundTarget::WorkPeriodMax,
            TargetArg::Uo => BoundTarget::OffPeriodMax,
            TargetArg::TotalWork => BoundTarget::TotalWorkMax,
            TargetArg::TotalOff => BoundTarget::TotalOffMax,
            TargetArg::Lw => BoundTarget::WorkPeriodMin,
            TargetArg::Lo => BoundTarget::OffPeriodMin,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "uw-lw")]
    UwLw,
    #[value(name = "uw-lo")]
    UwLo,
    #[value(name = "uo-lo")]
    UoLo,
    #[value(name = "uo-lw")]
    UoLw,
    #[value(name = "onesided-uw-uo-lw")]
    OneSidedUwUoLw,
    #[value(name = "onesided-uw-uo-lo")]
    OneSidedUwUoLo,
}

impl From<VariantArg> for ReductionVariant {
    fn from(value: VariantArg) -> Self {
        match value {
            VariantArg::UwLw => ReductionVariant::TotalWorkWorkMin,
            VariantArg::UwLo => ReductionVariant::TotalWorkOffMin,
            VariantArg::UoLo => ReductionVariant::TotalOffOffMin,
            VariantArg::UoLw => ReductionVariant::TotalOffWorkMin,
            VariantArg::OneSidedUwUoLw => ReductionVariant::OneSidedWorkMin,
            VariantArg::OneSidedUwUoLo => ReductionVariant::OneSidedOffMin,
        }
    }
}

#[derive(Debug, Deserialize)]
struct PartitionFile {
    #[serde(alias = "m")]
    groups: usize,
    #[serde(alias = "A")]
    values: Vec<u64>,
}

/// Verdicts map onto the documented exit codes.
enum Verdict {
    Ok,
    Infeasible,
    Undecided,
}

impl Verdict {
    fn code(self) -> ExitCode {
        match self {
            Verdict::Ok => ExitCode::SUCCESS,
            Verdict::Infeasible => ExitCode::from(1),
            Verdict::Undecided => ExitCode::from(3),
        }
    }
}

struct InputError(String);

impl<E: Display> From<E> for InputError {
    fn from(value: E) -> Self {
        InputError(value.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(verdict) => verdict.code(),
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Verdict, InputError> {
    match command {
        Command::Validate { instance } => {
            let inst = io::read_instance(&instance)?;
            println!(
                "instance: {} workers over {} days, class: {}",
                inst.workers(),
                inst.days(),
                classify_instance(&inst)
            );
            Ok(Verdict::Ok)
        }
        Command::Solve { instance, emit, limit, dump_counters } => {
            let inst = io::read_instance(&instance)?;
            solve(&inst, &emit, limit, dump_counters)
        }
        Command::Check { instance, schedule } => {
            let inst = io::read_instance(&instance)?;
            let sched = io::read_schedule(&schedule)?;
            let report = dodosp::check_schedule(&inst, &sched)?;
            if report.feasible() {
                println!("feasible");
                Ok(Verdict::Ok)
            } else {
                for v in &report.violations {
                    println!("violation: {v}");
                }
                Ok(Verdict::Infeasible)
            }
        }
        Command::Certify { instance, schedule, output } => {
            let inst = io::read_instance(&instance)?;
            let sched = io::read_schedule(&schedule)?;
            let graph = build_certificate_graph(&inst);
            match graph.schedule_to_flow(&sched) {
                Ok(flow) => {
                    let file = certificate_to_file(&graph, &flow, inst.workers());
                    let json = serde_json::to_string_pretty(&file).expect("certificate serializes");
                    write_out(output.as_deref(), &json)?;
                    Ok(Verdict::Ok)
                }
                Err(e) => {
                    println!("schedule admits no certificate: {e}");
                    Ok(Verdict::Infeasible)
                }
            }
        }
        Command::Verify { instance, certificate } => {
            let inst = io::read_instance(&instance)?;
            let graph = build_certificate_graph(&inst);
            let text = std::fs::read_to_string(&certificate).map_err(io::IoError::Io)?;
            let file: CertificateFile =
                serde_json::from_str(&text).map_err(io::IoError::Parse)?;
            let flow = certificate_from_file(file, &graph)?;
            let issues = graph.verify_certificate(&inst, &flow)?;
            if issues.is_empty() {
                println!("certificate valid: flow of value {}", inst.workers());
                Ok(Verdict::Ok)
            } else {
                for issue in &issues {
                    println!("invalid: {issue}");
                }
                Ok(Verdict::Infeasible)
            }
        }
        Command::Generate { from_3partition, variant, output } => {
            let text = std::fs::read_to_string(&from_3partition).map_err(io::IoError::Io)?;
            let file: PartitionFile = serde_json::from_str(&text).map_err(io::IoError::Parse)?;
            let tp = ThreePartition::new(file.groups, file.values)?;
            let variant = ReductionVariant::from(variant);
            let inst = match variant {
                ReductionVariant::OneSidedWorkMin | ReductionVariant::OneSidedOffMin => {
                    reduction::encode_onesided(&tp, variant)?
                }
                _ => reduction::encode_exact(&tp, variant)?,
            };
            write_out(output.as_deref(), &instance_to_json(&inst))?;
            eprintln!(
                "generated {} workers over {} days ({variant})",
                inst.workers(),
                inst.days()
            );
            Ok(Verdict::Ok)
        }
        Command::OptimizeBound { instance, target, limit } => {
            let inst = io::read_instance(&instance)?;
            let target = BoundTarget::from(target);
            let gate = OracleOptions::with_max_cells(limit);
            match optimize::optimize_bound_routed(&inst, target, &gate) {
                Ok(Some(value)) => {
                    let kind = if target.is_maximum_bound() { "minimal" } else { "maximal" };
                    println!("{kind} feasible {target} = {value}");
                    Ok(Verdict::Ok)
                }
                Ok(None) => {
                    println!("no feasible value of {target}");
                    Ok(Verdict::Infeasible)
                }
                Err(optimize::OptimizeError::OracleTooExpensive(e)) => {
                    println!("undecided: {e}");
                    Ok(Verdict::Undecided)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::OptimizeWorkers { instance } => {
            let text = std::fs::read_to_string(&instance).map_err(io::IoError::Io)?;
            let file: io::InstanceFile = serde_json::from_str(&text).map_err(io::IoError::Parse)?;
            let inst = file.into_instance_defaulting_workers()?;
            match optimize::minimize_workers(&inst)? {
                WorkforceOutcome::Minimum(n) => {
                    println!("minimal workforce = {n}");
                    Ok(Verdict::Ok)
                }
                WorkforceOutcome::InfeasibleForAll => {
                    println!("infeasible for every workforce size");
                    Ok(Verdict::Infeasible)
                }
            }
        }
        Command::Brute { instance, limit, mode, symmetry, emit } => {
            let inst = io::read_instance(&instance)?;
            let options = OracleOptions { max_cells: limit, symmetry };
            let outcome = match mode {
                BruteMode::Decide => oracle::decide(&inst, &options).map(|feasible| {
                    println!("{}", if feasible { "feasible" } else { "infeasible" });
                    if feasible { Verdict::Ok } else { Verdict::Infeasible }
                }),
                BruteMode::Count => oracle::enumerate_all(&inst, &options).map(|all| {
                    println!("{} feasible schedules", all.len());
                    if all.is_empty() { Verdict::Infeasible } else { Verdict::Ok }
                }),
                BruteMode::Solve => match oracle::find_one(&inst, &options) {
                    Ok(Some(schedule)) => {
                        return emit_schedule(&schedule, &emit).map(|()| Verdict::Ok)
                    }
                    Ok(None) => {
                        println!("infeasible (exhaustive search)");
                        Ok(Verdict::Infeasible)
                    }
                    Err(e) => Err(e),
                },
            };
            match outcome {
                Ok(verdict) => Ok(verdict),
                Err(e @ OracleError::TooLarge { .. }) => {
                    println!("undecided: {e}");
                    Ok(Verdict::Undecided)
                }
            }
        }
    }
}

/// Routes per classification; emits a schedule or prints the witness.
fn solve(
    instance: &Instance,
    emit: &EmitArgs,
    limit: u64,
    dump_counters: bool,
) -> Result<Verdict, InputError> {
    match classify_instance(instance) {
        ComplexityClass::UpperBoundsOnly => {
            match upper_bounds::solve(instance).expect("class was checked") {
                UpperOutcome::Feasible(schedule) => {
                    emit_schedule(&schedule, emit)?;
                    Ok(Verdict::Ok)
                }
                UpperOutcome::Infeasible(cycle) => {
                    print_witness(&cycle, instance, |v| {
                        format!("W[{v}]") // cumulative duty days over days 1..=v
                    });
                    Ok(Verdict::Infeasible)
                }
            }
        }
        ComplexityClass::LocalBoundsOnly => {
            match local_bounds::solve_counters(instance).expect("no custom tables") {
                CounterOutcome::Feasible(counters) => {
                    if dump_counters {
                        let join = |values: &[u64]| {
                            values
                                .iter()
                                .map(u64::to_string)
                                .collect::<Vec<_>>()
                                .join(" ")
                        };
                        eprintln!("started:      {}", join(&counters.started));
                        eprintln!("ended-before: {}", join(&counters.ended_before));
                    }
                    let schedule = local_bounds::counters_to_schedule(instance, &counters)?;
                    emit_schedule(&schedule, emit)?;
                    Ok(Verdict::Ok)
                }
                CounterOutcome::Infeasible(cycle) => {
                    print_witness(&cycle, instance, local_bounds::vertex_label);
                    Ok(Verdict::Infeasible)
                }
            }
        }
        ComplexityClass::TrivialAllOff => {
            emit_schedule(
                &Schedule::all_off(instance.workers(), instance.days()),
                emit,
            )?;
            Ok(Verdict::Ok)
        }
        ComplexityClass::GeneralHard => {
            let options = OracleOptions::with_max_cells(limit);
            match oracle::find_one(instance, &options) {
                Ok(Some(schedule)) => {
                    emit_schedule(&schedule, emit)?;
                    Ok(Verdict::Ok)
                }
                Ok(None) => {
                    println!("infeasible (exhaustive search)");
                    Ok(Verdict::Infeasible)
                }
                Err(e @ OracleError::TooLarge { .. }) => {
                    println!("undecided: {e}");
                    Ok(Verdict::Undecided)
                }
            }
        }
    }
}

/// Renders a negative cycle as the chain of violated inequalities.
fn print_witness<L: Display + Clone>(
    cycle: &NegativeCycle<L>,
    instance: &Instance,
    name: impl Fn(usize) -> String,
) {
    println!(
        "infeasible: conflicting constraints sum to {} = {} at N = {}",
        cycle.total, cycle.evaluated_total, instance.workers()
    );
    for edge in &cycle.edges {
        println!(
            "  {}: {} - {} <= {} (= {})",
            edge.label,
            name(edge.head),
            name(edge.tail),
            edge.weight,
            edge.weight.eval(instance.workers())
        );
    }
}

fn emit_schedule(schedule: &Schedule, emit: &EmitArgs) -> Result<(), InputError> {
    let file = match emit.format {
        FormatArg::Dense => ScheduleFile::dense(schedule),
        FormatArg::Compact => ScheduleFile::compact(schedule).ok_or_else(|| {
            InputError("schedule has no compact form: some duty set is not a cyclic interval".into())
        })?,
        FormatArg::Auto => {
            ScheduleFile::compact(schedule).unwrap_or_else(|| ScheduleFile::dense(schedule))
        }
    };
    let json = serde_json::to_string_pretty(&file).expect("schedule serializes");
    write_out(emit.output.as_deref(), &json)
}

fn write_out(path: Option<&Path>, content: &str) -> Result<(), InputError> {
    match path {
        Some(path) => std::fs::write(path, format!("{content}\n")).map_err(|e| e.into()),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout();
            match out
                .write_all(content.as_bytes())
                .and_then(|()| out.write_all(b"\n"))
            {
                Ok(()) => Ok(()),
                // A closed pipe (e.g. piping into head) is not our error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(e.into()),
            }
        }
    }
}
