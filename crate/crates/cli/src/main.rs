use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gwdeg_core::degree::Fault;
use gwdeg_core::gw::GWClass;
use gwdeg_core::multipoly::parse;
use gwdeg_core::problem::{parse_field, Problem};
use gwdeg_core::report::{self, Method, Outcome, Report, RunOptions};

/// Local A1-degrees of polynomial maps at closed points, computed two ways.
#[derive(Parser)]
#[command(name = "gwdeg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local degree at every point of a problem file.
    Degree {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
        method: MethodArg,
    },
    /// Compute both pipelines at every point and compare them.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Global form on the whole quotient algebra.
    Global {
        #[command(flatten)]
        common: Common,
    },
    /// Invariants of a diagonal form given on the command line.
    Invariants {
        /// Q, F<p>, or <base>(<generator> : <polynomial>)
        #[arg(long)]
        field: String,
        /// Comma-separated diagonal entries, e.g. "1, -2, 3/4".
        #[arg(long, allow_hyphen_values = true)]
        diag: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Common {
    file: PathBuf,
    #[arg(long)]
    json: bool,
    /// Overrides the seed in the problem file.
    #[arg(long)]
    seed: Option<u64>,
    /// Exit with status 4 when GW(k) equality cannot be decided.
    #[arg(long)]
    require_decided: bool,
    /// Record wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Trace,
}

fn exit_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Success => 0,
        Outcome::NotEqual | Outcome::Internal => 1,
        Outcome::Precondition => 3,
        Outcome::Undecided => 4,
    }
}

fn load(common: &Common) -> Result<Problem, ExitCode> {
    let text = std::fs::read_to_string(&common.file).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", common.file.display());
        ExitCode::from(2)
    })?;
    Problem::parse(&text).map_err(|e| {
        eprintln!("error: {}:{e}", common.file.display());
        ExitCode::from(if e.is_syntactic() { 2 } else { 3 })
    })
}

fn emit(r: &Report, json: bool) -> ExitCode {
    if json {
        print!("{}", report::to_json(r));
    } else {
        print!("{}", report::to_text(r));
    }
    for pt in &r.points {
        for side in [&pt.result, &pt.lhs, &pt.rhs].into_iter().flatten() {
            if let report::SideJson::Err { error } = side {
                eprintln!("error: {}: {}: {}", pt.label, error.kind, error.message);
                break;
            }
        }
    }
    if let Some(report::SideOrGlobal::Err { error }) = &r.global {
        eprintln!("error: {}: {}", error.kind, error.message);
    }
    ExitCode::from(exit_code(r.outcome))
}

fn options(common: &Common) -> RunOptions {
    RunOptions { seed: common.seed, timings: common.timings, require_decided: common.require_decided, fault: Fault::None }
}

fn invariants(field: &str, diag: &str, json: bool) -> ExitCode {
    let k = match parse_field(field) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: field `{field}`: {e}");
            return ExitCode::from(if matches!(e, gwdeg_core::problem::FieldSpecError::Field(_)) { 3 } else { 2 });
        }
    };
    let mut entries = Vec::new();
    for piece in diag.split(',') {
        let value = parse(piece.trim(), &[], &k).ok().and_then(|p| p.as_constant());
        match value {
            Some(v) => entries.push(v),
            None => {
                eprintln!("error: cannot read diagonal entry `{}` over {k}", piece.trim());
                return ExitCode::from(2);
            }
        }
    }
    match GWClass::new(&k, &entries) {
        Ok(c) => {
            let r = report::invariants_report(&c);
            if json {
                print!("{}", report::to_json(&r));
            } else {
                print!("{}", report::invariants_text(&r));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Degree { common, method } => load(&common).map(|p| {
            let method = match method {
                MethodArg::Direct => Method::Direct,
                MethodArg::Trace => Method::Trace,
            };
            emit(&report::degree_report(&p, method, options(&common)), common.json)
        }),
        Command::Verify { common, inject_fault } => load(&common).map(|p| {
            let mut opts = options(&common);
            if inject_fault {
                opts.fault = Fault::PadTraceSide;
            }
            emit(&report::verify_report(&p, opts), common.json)
        }),
        Command::Global { common } => {
            load(&common).map(|p| emit(&report::global_report(&p, options(&common)), common.json))
        }
        Command::Invariants { field, diag, json } => Ok(invariants(&field, &diag, json)),
    };
    result.unwrap_or_else(|code| code)
}
