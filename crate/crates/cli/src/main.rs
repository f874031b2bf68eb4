use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use episteme::calculus::mutate::mutants;
use episteme::calculus::{check_proof, parse_proof_file, write_proof_file, Enumerator, TheorySpec, Verdict};
use episteme::demo::demo_dichotomy;
use episteme::enumvm::{fixed_point, fixed_point_classical, parse_prog, Registry, Template, DEFAULT_VM_BUDGET};
use episteme::machines::{audit_factivity, machine_by_name, SlashEval, MACHINE_NAMES};
use episteme::selfref::{arithmetic, build_diagonal, build_refutation, diagonal_general};
use episteme::syntax::{decode, encode_formula, parse, Decoded};

const DEFAULT_STAGES: u64 = 10_000;
const DEFAULT_ENTRIES: usize = 1_000;

#[derive(Parser)]
#[command(name = "episteme", version, about = "Knowing machines over arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TheoryArgs {
    /// Preset name or comma-separated schema list.
    #[arg(long)]
    theory: Option<String>,
    /// Index parameter for GNum/KGNum.
    #[arg(long, default_value_t = 0)]
    e: u64,
}

impl TheoryArgs {
    fn resolve(&self, default: &str) -> Result<TheorySpec, Fail> {
        let name = self.theory.as_deref().unwrap_or(default);
        TheorySpec::parse(name, self.e).map_err(|err| Fail::Usage(err.to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it canonically.
    Parse { formula: String },
    /// Print the Gödel code of a formula.
    Code { formula: String },
    /// Print the formula or term with the given code.
    Decode { code: String },
    /// Check a proof file.
    Check {
        file: String,
        #[command(flatten)]
        theory: TheoryArgs,
        /// Also check this many random single-step mutants, which must all
        /// be rejected.
        #[arg(long, default_value_t = 0)]
        mutants: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerate the consequences of a theory.
    Enum {
        #[command(flatten)]
        theory: TheoryArgs,
        /// Enumeration stages.
        #[arg(long, default_value_t = DEFAULT_STAGES)]
        budget: u64,
    },
    /// Evaluate a sentence in the slash model of a theory.
    SlashEval {
        formula: String,
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, default_value_t = DEFAULT_STAGES)]
        budget: u64,
    },
    /// Print the diagonal sentence for index e (or a template) with its
    /// equivalence proof.
    Diag {
        #[arg(long, default_value_t = 0)]
        e: u64,
        /// Template with free variable x0.
        #[arg(long)]
        template: Option<String>,
    },
    /// Allocate a fixed point of a program template.
    Fixpoint {
        /// Program with `Param` marking the argument.
        template: String,
        /// Use the s-m-n construction instead of self-reference.
        #[arg(long)]
        classical: bool,
        /// Registry transcript to start from.
        #[arg(long)]
        registry: Option<String>,
        /// VM steps for the printed run.
        #[arg(long, default_value_t = DEFAULT_VM_BUDGET)]
        budget: u64,
        /// Print the resulting registry transcript.
        #[arg(long)]
        transcript: bool,
    },
    /// Print the refutation proof for index e.
    Refute {
        #[arg(long, default_value_t = 0)]
        e: u64,
        /// Write to a file instead of standard output.
        #[arg(short, long)]
        output: Option<String>,
    },
    /// List a machine's knowledge.
    #[command(alias = "enumerate")]
    MachineEnum {
        #[arg(long)]
        machine: String,
        /// Number of entries.
        #[arg(long, default_value_t = DEFAULT_ENTRIES)]
        budget: usize,
    },
    /// List known formulas that are false in the standard model.
    Audit {
        #[arg(long)]
        machine: String,
        #[arg(long, default_value_t = DEFAULT_ENTRIES)]
        budget: usize,
    },
    /// Verify both horns of the dichotomy.
    DemoDichotomy {
        /// Enumeration stages for the slash model.
        #[arg(long, default_value_t = DEFAULT_STAGES)]
        budget: u64,
    },
}

macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout(), $($arg)*).map_err(|_| Fail::Closed)?
    };
}

macro_rules! out_raw {
    ($($arg:tt)*) => {
        write!(io::stdout(), $($arg)*).map_err(|_| Fail::Closed)?
    };
}

enum Fail {
    /// Exit 1: a rejection or a violation.
    Negative(String),
    /// Exit 2: bad input.
    Usage(String),
    /// Standard output went away.
    Closed,
}

fn read(path: &str) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|err| Fail::Usage(format!("{path}: {err}")))
}

fn formula(text: &str) -> Result<episteme::syntax::Formula, Fail> {
    parse(text).map_err(|err| Fail::Usage(err.to_string()))
}

fn machine(name: &str) -> Result<episteme::machines::Machine, Fail> {
    machine_by_name(name)
        .ok_or_else(|| Fail::Usage(format!("unknown machine `{name}`; known: {}", MACHINE_NAMES.join(", "))))
}

fn run(cmd: Command) -> Result<(), Fail> {
    match cmd {
        Command::Parse { formula: f } => out!("{}", formula(&f)?),
        Command::Code { formula: f } => out!("{}", encode_formula(&formula(&f)?)),
        Command::Decode { code } => {
            let n: BigUint = code.trim().parse().map_err(|_| Fail::Usage(format!("not a number: {code}")))?;
            match decode(&n) {
                Ok(Decoded::Formula(f)) => out!("{f}"),
                Ok(Decoded::Term(t)) => out!("{t}"),
                Err(err) => return Err(Fail::Negative(format!("{n} is not a code: {err}"))),
            }
        }
        Command::Check { file, theory, mutants: n, seed } => {
            let pf = parse_proof_file(&read(&file)?).map_err(|err| Fail::Usage(err.to_string()))?;
            let t = match (&theory.theory, pf.theory) {
                (Some(_), _) | (None, None) => theory.resolve("logic")?,
                (None, Some(t)) => t,
            };
            let verdict = check_proof(&pf.proof, &t);
            if let Verdict::Reject { .. } = verdict {
                return Err(Fail::Negative(verdict.to_string()));
            }
            out!("{verdict}");
            if n > 0 {
                let accepted = mutants(&pf.proof, n, seed)
                    .into_iter()
                    .filter(|(m, _)| check_proof(m, &t).is_accept())
                    .count();
                out!("mutants rejected: {}/{n}", n - accepted);
                if accepted > 0 {
                    return Err(Fail::Negative(format!("{accepted} mutants accepted")));
                }
            }
        }
        Command::Enum { theory, budget } => {
            let mut en = Enumerator::new(theory.resolve("logic")?);
            en.run_to(budget);
            for f in en.stream() {
                out!("{}\t{f}", encode_formula(f));
            }
        }
        Command::SlashEval { formula: f, theory, budget } => {
            let phi = formula(&f)?;
            let mut s = SlashEval::new(theory.resolve("sigma_slash")?);
            let v = s.eval(&phi, budget).map_err(|err| Fail::Usage(err.to_string()))?;
            out!("{v}");
        }
        Command::Diag { e, template } => {
            let (r, t) = match template {
                Some(src) => (diagonal_general(&formula(&src)?), arithmetic()),
                None => (build_diagonal(e), arithmetic()),
            };
            out!("# theta: {}", r.theta);
            out!("# phi: {}", r.phi);
            out_raw!("{}", write_proof_file(Some(&t), &r.equiv_proof));
        }
        Command::Fixpoint { template, classical, registry, budget, transcript } => {
            let prog = parse_prog(&template).map_err(|err| Fail::Usage(err.to_string()))?;
            let mut reg = match registry {
                Some(path) => Registry::from_transcript(&read(&path)?).map_err(|err| Fail::Usage(err.to_string()))?,
                None => Registry::new(),
            };
            let t = Template::new(prog);
            let e = if classical {
                fixed_point_classical(&mut reg, &t).map_err(|err| Fail::Negative(err.to_string()))?
            } else {
                fixed_point(&mut reg, &t)
            };
            let out = reg.run(e, budget).map_err(|err| Fail::Negative(err.to_string()))?;
            out!("e = {e}");
            let items: Vec<String> = out.emitted.iter().map(|n| n.to_string()).collect();
            out!("W_e ({budget} steps{}): {}", if out.exhausted { ", exhausted" } else { "" }, items.join(" "));
            if transcript {
                out_raw!("{}", reg.transcript());
            }
        }
        Command::Refute { e, output } => {
            let text = write_proof_file(Some(&TheorySpec::sigma_e(e)), &build_refutation(e));
            match output {
                Some(path) => fs::write(&path, text).map_err(|err| Fail::Usage(format!("{path}: {err}")))?,
                None => out_raw!("{text}"),
            }
        }
        Command::MachineEnum { machine: name, budget } => {
            for f in machine(&name)?.knowledge(budget) {
                out!("{}\t{f}", encode_formula(&f));
            }
        }
        Command::Audit { machine: name, budget } => {
            let violations = audit_factivity(&machine(&name)?, budget);
            for v in &violations {
                out!("{}\t{}\t{}", encode_formula(&v.formula), v.formula, v.value);
            }
            if !violations.is_empty() {
                return Err(Fail::Negative(format!("{} violations", violations.len())));
            }
        }
        Command::DemoDichotomy { budget } => {
            let report = demo_dichotomy(budget).map_err(|err| Fail::Negative(err.to_string()))?;
            out_raw!("{report}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Negative(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Fail::Closed) => ExitCode::SUCCESS,
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
