//! Command-line front end. Results print as `EXPR | TRACE`.
//!
//! Exit codes: 0 success, 1 stuck evaluation or type error, 2 usage or parse
//! error, 3 property-suite failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bigstep::{big_step, BigStepOutcome};
use crate::bigstop::{
    annihilator_eval, bigstop_eval, derivation_to_json, ec_bigstop_eval, mnf_bigstop_eval, BigStopError,
    Derivation,
};
use crate::harness::suites::{run_property_suite, suite_names, SuiteConfig};
use crate::imp::{
    imp_bigstep, imp_bigstop, imp_bigstop_freeze, imp_multi_step, imp_small_step, parse_bindings, parse_stmt,
    ImpConfig, ImpStatus,
};
use crate::kmachine::{compile, k_run_with, unwind, KStatus};
use crate::smallstep::mnf::mnf_multi_step;
use crate::smallstep::{multi_step, small_step, NoStep, RunStatus};
use crate::syntax::mnf::{check_mnf, to_mnf};
use crate::syntax::types::{infer_type, TypeEnv};
use crate::syntax::{parse_expr, parse_mnf_expr, Expr};

pub const EXIT_OK: i32 = 0;
pub const EXIT_EVAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SUITE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bigstop", about = "Evaluators for PCF with effects and a while-language")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Work with PCF programs.
    Pcf {
        #[command(subcommand)]
        command: PcfCommand,
    },
    /// Work with while-programs.
    Imp {
        #[command(subcommand)]
        command: ImpCommand,
    },
    /// Run a property suite.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Args)]
struct Program {
    /// Program file, or the program text itself when no such file exists.
    #[arg(value_name = "PROGRAM", required_unless_present = "expr", conflicts_with = "expr")]
    program: Option<String>,
    /// Program text.
    #[arg(short = 'e', value_name = "TEXT")]
    expr: Option<String>,
}

impl Program {
    fn source(&self) -> Result<String, String> {
        match (&self.expr, &self.program) {
            (Some(text), _) => Ok(text.clone()),
            (None, Some(p)) if Path::new(p).is_file() => {
                std::fs::read_to_string(p).map_err(|err| format!("cannot read `{p}`: {err}"))
            }
            (None, Some(text)) => Ok(text.clone()),
            (None, None) => Err("no program given".to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PcfSem {
    Small,
    Multi,
    Big,
    Bigstop,
    Annihilator,
    Mnf,
    Ec,
    Kmachine,
}

#[derive(Debug, Subcommand)]
enum PcfCommand {
    /// Evaluate a program.
    Run {
        #[arg(long, value_enum)]
        sem: PcfSem,
        /// Contractions allowed (machine transitions for `kmachine`).
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Fuel for `big`.
        #[arg(long, default_value_t = 1000)]
        fuel: u64,
        /// Print intermediate terms, derivations or machine states.
        #[arg(long)]
        trace: bool,
        /// Write the derivation as JSON.
        #[arg(long, value_name = "FILE")]
        derivation: Option<String>,
        #[command(flatten)]
        program: Program,
    },
    /// Print the type of a program.
    Typecheck {
        #[command(flatten)]
        program: Program,
    },
    /// Print the monadic normal form of a program.
    Mnf {
        #[command(flatten)]
        program: Program,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ImpSem {
    Small,
    Multi,
    Big,
    Bigstop,
    Freeze,
}

#[derive(Debug, Subcommand)]
enum ImpCommand {
    /// Run a while-program.
    Run {
        #[arg(long, value_enum)]
        sem: ImpSem,
        /// Small steps allowed; fuel for `big`.
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Initial store, e.g. `x=2,y=0`.
        #[arg(long, default_value = "")]
        init: String,
        #[command(flatten)]
        program: Program,
    },
}

#[derive(Debug, Args)]
struct FuzzArgs {
    /// Suite name, or `all`.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 25)]
    max_size: usize,
    #[arg(long, default_value_t = 10)]
    max_budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also check every enumerated input up to this size.
    #[arg(long, default_value_t = 0)]
    enum_size: usize,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

/// A failure with its exit code.
struct Failure(i32, String);

type Outcome = Result<(), Failure>;

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_USAGE, msg.to_string())
}

fn eval_error(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_EVAL, msg.to_string())
}

fn io(err: std::io::Error) -> Failure {
    usage(format!("output error: {err}"))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Pcf { command } => pcf(command, out),
        Command::Imp { command } => imp(command, out),
        Command::Fuzz(args) => fuzz(args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn load_pcf(p: &Program, allow_let: bool) -> Result<Expr, Failure> {
    let src = p.source().map_err(usage)?;
    let e = if allow_let {
        parse_mnf_expr(&src)
    } else {
        parse_expr(&src)
    }
    .map_err(|e| usage(format!("parse error at {e}")))?;
    if let Some(x) = e.free_vars().into_iter().next() {
        return Err(eval_error(format!("unbound variable `{x}`")));
    }
    Ok(e)
}

fn stuck(e: &BigStopError) -> Failure {
    eval_error(e)
}

fn write_derivation(path: &Option<String>, d: &Derivation) -> Outcome {
    if let Some(path) = path {
        std::fs::write(path, derivation_to_json(d) + "\n").map_err(|e| usage(format!("cannot write `{path}`: {e}")))?;
    }
    Ok(())
}

fn pcf(cmd: PcfCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        PcfCommand::Typecheck { program } => {
            let e = load_pcf(&program, false)?;
            let t = infer_type(&TypeEnv::new(), &e).map_err(eval_error)?;
            writeln!(out, "{t}").map_err(io)
        }
        PcfCommand::Mnf { program } => {
            let e = load_pcf(&program, false)?;
            writeln!(out, "{}", to_mnf(&e)).map_err(io)
        }
        PcfCommand::Run {
            sem,
            budget,
            fuel,
            trace,
            derivation,
            program,
        } => {
            let e = load_pcf(&program, sem == PcfSem::Mnf)?;
            if derivation.is_some() && !matches!(sem, PcfSem::Bigstop | PcfSem::Annihilator | PcfSem::Mnf | PcfSem::Ec) {
                return Err(usage("--derivation needs a big-stop semantics"));
            }
            run_pcf(sem, &e, budget, fuel, trace, &derivation, out)
        }
    }
}

fn run_pcf(
    sem: PcfSem,
    e: &Expr,
    budget: u64,
    fuel: u64,
    trace: bool,
    derivation: &Option<String>,
    out: &mut dyn Write,
) -> Outcome {
    match sem {
        PcfSem::Small => match small_step(e) {
            Ok(r) => writeln!(out, "{} | {}", r.next, r.emitted).map_err(io),
            Err(NoStep::Value) => writeln!(out, "{e} is a value").map_err(io),
            Err(NoStep::Stuck) => Err(eval_error(format!("stuck at {e}"))),
        },
        PcfSem::Multi => {
            let r = multi_step(e, budget);
            if trace {
                for x in crate::smallstep::step_trace(e, budget) {
                    writeln!(out, "{x}").map_err(io)?;
                }
            }
            writeln!(out, "{} | {}", r.final_expr, r.trace).map_err(io)?;
            match r.status {
                RunStatus::Stuck => Err(eval_error(format!("stuck at {}", r.final_expr))),
                _ => Ok(()),
            }
        }
        PcfSem::Big => match big_step(e, fuel) {
            BigStepOutcome::Value(v, t) => writeln!(out, "{v} | {t}").map_err(io),
            BigStepOutcome::FuelExhausted => writeln!(out, "no value within fuel {fuel}").map_err(io),
            BigStepOutcome::Stuck(r) => Err(eval_error(format!("stuck at {r}"))),
        },
        PcfSem::Bigstop => {
            let b = bigstop_eval(e, budget).map_err(|e| stuck(&e))?;
            if trace {
                write!(out, "{}", b.derivation).map_err(io)?;
            }
            write_derivation(derivation, &b.derivation)?;
            writeln!(out, "{} | {}", b.stopped, b.trace).map_err(io)
        }
        PcfSem::Annihilator => {
            let a = annihilator_eval(e, budget).map_err(|e| stuck(&e))?;
            if trace {
                write!(out, "{}", a.derivation).map_err(io)?;
            }
            write_derivation(derivation, &a.derivation)?;
            writeln!(out, "{} | {}", a.value, a.trace).map_err(io)
        }
        PcfSem::Mnf => {
            let m = if check_mnf(e) { e.clone() } else { to_mnf(e) };
            if trace {
                for x in mnf_trajectory(&m, budget) {
                    writeln!(out, "{x}").map_err(io)?;
                }
            }
            let b = mnf_bigstop_eval(&m, budget).map_err(|e| stuck(&e))?;
            write_derivation(derivation, &b.derivation)?;
            writeln!(out, "{} | {}", b.stopped, b.trace).map_err(io)
        }
        PcfSem::Ec => {
            let b = ec_bigstop_eval(e, budget).map_err(|e| stuck(&e))?;
            if trace {
                write!(out, "{}", b.derivation).map_err(io)?;
            }
            write_derivation(derivation, &b.derivation)?;
            writeln!(out, "{} | {}", b.stopped, b.trace).map_err(io)
        }
        PcfSem::Kmachine => {
            let init = compile(e);
            writeln!(out, "{init}").map_err(io)?;
            let mut lines = Vec::new();
            let r = k_run_with(&init, budget, |_, s| lines.push(s.to_string()));
            for l in lines {
                writeln!(out, "{l}").map_err(io)?;
            }
            writeln!(out, "{} | {}", unwind(&r.final_state), r.trace).map_err(io)?;
            match r.status {
                KStatus::Stuck => Err(eval_error(format!("machine stuck at {}", r.final_state))),
                _ => Ok(()),
            }
        }
    }
}

fn mnf_trajectory(e: &Expr, budget: u64) -> Vec<Expr> {
    (0..=budget)
        .map(|n| mnf_multi_step(e, n))
        .scan(None, |last: &mut Option<u64>, r| {
            let fresh = *last != Some(r.steps);
            *last = Some(r.steps);
            Some(fresh.then_some(r.final_expr))
        })
        .flatten()
        .collect()
}

fn imp(cmd: ImpCommand, out: &mut dyn Write) -> Outcome {
    let ImpCommand::Run {
        sem,
        budget,
        init,
        program,
    } = cmd;
    let src = program.source().map_err(usage)?;
    let stmt = parse_stmt(&src).map_err(|e| usage(format!("parse error at {e}")))?;
    let state = parse_bindings(&init).map_err(|e| usage(format!("bad --init at {e}")))?;
    let c = ImpConfig::new(stmt, state);
    match sem {
        ImpSem::Small => match imp_small_step(&c) {
            Ok((next, rule)) => writeln!(out, "{next} by {}", rule.name()).map_err(io),
            Err(_) => writeln!(out, "{c} is final").map_err(io),
        },
        ImpSem::Multi => {
            let r = imp_multi_step(&c, budget);
            let status = match r.status {
                ImpStatus::Done => "done",
                ImpStatus::OutOfBudget => "out of budget",
            };
            writeln!(out, "{} after {} steps ({status})", r.config, r.steps).map_err(io)
        }
        ImpSem::Big => match imp_bigstep(&c, budget) {
            Ok(s) => writeln!(out, "{s}").map_err(io),
            Err(_) => writeln!(out, "no final state within fuel {budget}").map_err(io),
        },
        ImpSem::Bigstop => writeln!(out, "{}", imp_bigstop(&c, budget)).map_err(io),
        ImpSem::Freeze => writeln!(out, "{}", imp_bigstop_freeze(&c, budget)).map_err(io),
    }
}

fn fuzz(args: FuzzArgs, out: &mut dyn Write) -> Outcome {
    let cfg = SuiteConfig {
        seed: args.seed,
        trials: args.trials,
        max_size: args.max_size,
        enum_size: args.enum_size,
        max_budget: args.max_budget,
        ..SuiteConfig::default()
    };
    if cfg.max_size == 0 {
        return Err(usage("--max-size must be at least 1"));
    }
    if cfg.enum_size > crate::harness::enumerate::MAX_ENUMERATION_SIZE {
        return Err(usage(crate::harness::TooLarge(cfg.enum_size)));
    }
    let names: Vec<&str> = if args.suite == "all" {
        suite_names().collect()
    } else {
        vec![args.suite.as_str()]
    };
    let mut failed = false;
    let mut reports = Vec::new();
    for name in names {
        let r = run_property_suite(name, &cfg).map_err(|e| {
            let known: Vec<_> = suite_names().collect();
            usage(format!("{e}; known suites: {}", known.join(", ")))
        })?;
        failed |= !r.passed();
        reports.push(r);
    }
    if args.json {
        let v = serde_json::to_string_pretty(&reports).map_err(|e| usage(e.to_string()))?;
        writeln!(out, "{v}").map_err(io)?;
    } else {
        for r in &reports {
            write!(out, "{r}").map_err(io)?;
        }
    }
    if failed {
        Err(Failure(EXIT_SUITE, "property suite failed".to_string()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("bigstop").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn stop_at_zero_budget() {
        assert_eq!(call(&["pcf", "run", "--sem", "bigstop", "--budget", "0", "z"]).1, "z | 1\n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["pcf", "run", "--sem", "nope", "z"]).0, EXIT_USAGE);
        assert_eq!(call(&["pcf", "run", "--sem", "multi", "-e", "s("]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn type_errors() {
        let (code, _, err) = call(&["pcf", "typecheck", "z z"]);
        assert_eq!(code, EXIT_EVAL);
        assert!(err.starts_with("error: type error"), "{err}");
    }
}
