use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use jacobi_circuit::driver::{
    special_factor, validate_factorization, BmaxPolicy, ClassicalOracle, InjectedOracle, SimulatorOracle,
    SquarefreeOracle,
};
use jacobi_circuit::engine::{evaluate, EngineConfig};
use jacobi_circuit::numtheory::jacobi;
use jacobi_circuit::report::Report;
use jacobi_circuit::sim::{ell_cap_from_env, run_algorithm1, SimMode, SimParams, ZeroPhase};
use jacobi_circuit::verify::{counts_suite, gauss_suite, phases_suite, trace_suite, window_suite, SuiteResult};
use jacobi_circuit::Error;

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "jacobi-circuit", version, about = "Streamed Jacobi symbols and Jacobi-circuit factoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi symbol (x / modulus) by block streaming.
    Jacobi {
        #[arg(long)]
        x: BigUint,
        #[arg(long)]
        modulus: BigUint,
        #[arg(long, default_value_t = 64)]
        block_bits: u64,
        /// Also run the reference algorithm and fail on disagreement.
        #[arg(long)]
        check: bool,
    },
    /// Simulate the factoring circuit on N and recover its squarefree part.
    Factor {
        #[arg(long)]
        n: BigUint,
        #[arg(long)]
        bmax: BigUint,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trial-divide by primes up to this bound before simulating.
        #[arg(long, default_value_t = 0)]
        cutoff: u64,
        /// Override the register width (must satisfy 2^ell > bmax^2).
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long, value_enum, default_value_t = Phase::Plus)]
        zero_phase: Phase,
    },
    /// Completely factor an integer whose prime exponents are distinct.
    SpecialFactor {
        #[arg(long)]
        n: BigUint,
        #[arg(long, value_enum, default_value_t = OracleChoice::Classical)]
        oracle: OracleChoice,
        /// Oracle repetitions per call; defaults to ceil(log2 M) + 10.
        #[arg(long)]
        t: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Success rate of the injected oracle.
        #[arg(long, default_value_t = 0.5)]
        success_rate: f64,
    },
    /// Run an invariant sweep.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Phase {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleChoice {
    Classical,
    Sim,
    Injected,
}

#[derive(Subcommand)]
enum Suite {
    Gauss {
        #[arg(long, default_value_t = 201)]
        max_m: u64,
    },
    Window {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    Phases {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    Counts {
        #[arg(long, default_value_t = 3000)]
        max_n: u64,
    },
    Trace {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// A report plus whether the command's own checks passed.
struct Outcome {
    report: Report,
    ok: bool,
    summary: String,
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::BadModulus { .. } | Error::EvenArgument { .. } | Error::InvalidParams(_) | Error::CapExceeded { .. }
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            // A closed pipe downstream is not an error worth a panic.
            let _ = writeln!(std::io::stdout().lock(), "{}", out.report.to_json());
            eprintln!("{}", out.summary);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage_error(&e) { EXIT_USAGE } else { EXIT_FAILED })
        }
    }
}

fn run(command: Command) -> jacobi_circuit::Result<Outcome> {
    match command {
        Command::Jacobi { x, modulus, block_bits, check } => cmd_jacobi(x, modulus, block_bits, check),
        Command::Factor { n, bmax, mode, shots, seed, cutoff, ell, zero_phase } => {
            cmd_factor(n, bmax, mode, shots, seed, cutoff, ell, zero_phase)
        }
        Command::SpecialFactor { n, oracle, t, seed, success_rate } => {
            cmd_special_factor(n, oracle, t, seed, success_rate)
        }
        Command::Verify { suite } => cmd_verify(suite),
    }
}

fn cmd_jacobi(x: BigUint, modulus: BigUint, block_bits: u64, check: bool) -> jacobi_circuit::Result<Outcome> {
    let config = EngineConfig::new(block_bits)?;
    let eval = evaluate(&x, &modulus, config)?;
    let mut report = Report::new("jacobi")
        .input("x", x.to_string())
        .input("modulus", modulus.to_string())
        .input("block_bits", block_bits)
        .input("check", check)
        .with_counters(&eval.cost);
    report.output("value", eval.value);
    let mut ok = true;
    let mut summary = format!("({x} / {modulus}) = {}", eval.value);
    if check {
        let reference = jacobi(&x, &modulus)?;
        ok = reference == eval.value;
        report.output("reference", reference).output("match", ok);
        summary.push_str(if ok { ", matches reference" } else { ", MISMATCH with reference" });
    }
    Ok(Outcome { report, ok, summary })
}

#[allow(clippy::too_many_arguments)]
fn cmd_factor(
    n: BigUint,
    bmax: BigUint,
    mode: Mode,
    shots: u64,
    seed: u64,
    cutoff: u64,
    ell: Option<u32>,
    zero_phase: Phase,
) -> jacobi_circuit::Result<Outcome> {
    if n < BigUint::from(3u32) || !n.bit(0) {
        return Err(Error::BadModulus { value: n, min: 3 });
    }
    let mut params = SimParams::with_cap_limit(n.clone(), bmax.clone(), ell_cap_from_env())?
        .with_cutoff(cutoff)
        .with_zero_phase(match zero_phase {
            Phase::Plus => ZeroPhase::PlusOne,
            Phase::Minus => ZeroPhase::MinusOne,
        });
    if let Some(ell) = ell {
        params = params.with_ell(ell)?;
    }
    if let Mode::Sampled = mode {
        params = params.with_mode(SimMode::Sampled { shots, seed });
    }
    let sim = run_algorithm1(&params)?;
    let mut report = Report::new("factor")
        .input("n", n.to_string())
        .input("bmax", bmax.to_string())
        .input("ell", params.ell)
        .input("cutoff", cutoff)
        .input("zero_phase", params.zero_phase)
        .input("mode", params.mode);
    if let Mode::Sampled = mode {
        report = report.with_seed(seed);
    }
    let summary = if let Some(p) = &sim.trial_division_prime {
        format!("{n}: trial division found prime factor {p}")
    } else if sim.success_channel {
        format!("{n} = {}^2 * {}: success probability {:.6}", sim.a, sim.b, sim.success_prob)
    } else {
        format!("{n}: no success channel (A = {}, B = {}, bmax = {bmax})", sim.a, sim.b)
    };
    if let Mode::Sampled = mode {
        let mut tally: BTreeMap<BigUint, u64> = BTreeMap::new();
        for shot in sim.shots.iter().flatten() {
            *tally.entry(shot.output.clone()).or_default() += 1;
        }
        let top = tally.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map(|(v, _)| v.to_string());
        report.output("recovered_value", top);
    }
    report.output("simulation", &sim);
    Ok(Outcome { report, ok: true, summary })
}

fn cmd_special_factor(
    n: BigUint,
    choice: OracleChoice,
    t: Option<u32>,
    seed: u64,
    success_rate: f64,
) -> jacobi_circuit::Result<Outcome> {
    if t == Some(0) {
        return Err(Error::InvalidParams("T must be at least 1".into()));
    }
    let mut oracle: Box<dyn SquarefreeOracle> = match choice {
        OracleChoice::Classical => Box::new(ClassicalOracle),
        OracleChoice::Sim => Box::new(SimulatorOracle::new(BmaxPolicy::Input, seed).with_cap(ell_cap_from_env())),
        OracleChoice::Injected => Box::new(InjectedOracle::new(success_rate, seed)?),
    };
    let result = special_factor(&n, oracle.as_mut(), t)?;
    let valid = !result.aborted && validate_factorization(&n, &result.factorization);
    let mut report = Report::new("special-factor")
        .input("n", n.to_string())
        .input("oracle", oracle.kind())
        .input("t", t)
        .with_seed(seed);
    report
        .output("factorization", &result.factorization)
        .output("display", result.factorization.to_string())
        .output("oracle_calls", result.oracle_calls)
        .output("oracle_runs", result.oracle_runs)
        .output("aborted", result.aborted)
        .output("abort_reason", &result.abort_reason)
        .output("valid", valid);
    let summary = if valid {
        format!("{n} = {}", result.factorization)
    } else {
        format!("{n}: factoring failed ({})", result.abort_reason.as_deref().unwrap_or("invalid factorization"))
    };
    Ok(Outcome { report, ok: valid, summary })
}

fn cmd_verify(suite: Suite) -> jacobi_circuit::Result<Outcome> {
    let (result, report): (SuiteResult, Report) = match suite {
        Suite::Gauss { max_m } => (gauss_suite(max_m)?, Report::new("verify").input("max_m", max_m)),
        Suite::Window { trials, seed } => (
            window_suite(trials, seed)?,
            Report::new("verify").input("trials", trials).with_seed(seed),
        ),
        Suite::Phases { trials, seed } => (
            phases_suite(trials, seed)?,
            Report::new("verify").input("trials", trials).with_seed(seed),
        ),
        Suite::Counts { max_n } => (counts_suite(max_n)?, Report::new("verify").input("max_n", max_n)),
        Suite::Trace { trials, seed } => {
            let (result, samples) = trace_suite(trials, seed)?;
            let mut report = Report::new("verify").input("trials", trials).with_seed(seed);
            report.output("samples", samples);
            (result, report)
        }
    };
    let mut report = report.input("suite", &result.suite);
    report
        .output("cases", result.cases)
        .output("failures", result.failures)
        .output("counterexamples", &result.first_failures)
        .output("passed", result.passed());
    let summary = json!({ "suite": result.suite, "cases": result.cases, "failures": result.failures });
    Ok(Outcome { ok: result.passed(), summary: format!("verify {summary}"), report })
}
