//! `revtidy` command-line front end.
//!
//! Exit codes: 0 success (or tidyable), 2 proven untidyable, 1 any error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{error::ErrorKind, Parser, Subcommand};

use crate::linalg::{StateVector, DEFAULT_TOLERANCE};
use crate::qsim::{Branch, ComputationSpec, RegisterLayout};
use crate::report::{analyze, procedure_to_json};
use crate::revcirc::format::{parse_circuit, parse_program, write_circuit};
use crate::revcirc::{bennett_embed, reverse, tidy_transform, Bits, BooleanProgram, Instruction, Role};
use crate::tidy::{check_tidy_condition, clone_attempt, construct_tidier, erasure_cost, verify_tidier, TidyError};

pub const TOL_ENV: &str = "REVTIDY_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "revtidy",
    version,
    about = "Reversible circuit passes and quantum tidyability analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a boolean program (.blp) into a reversible circuit (.rvc).
    Compile {
        program: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reverse a circuit's gate order.
    Reverse {
        circuit: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Append a copy of the outputs and the reversed circuit.
    Tidy {
        circuit: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a circuit on one bitstring.
    Run {
        circuit: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Check the reversible and tidy conditions of a branch spec (.spec.json).
    Analyze {
        spec: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Construct and verify a tidying procedure.
    Tidier {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Report the erasure cost of resetting the auxiliary register.
    Energy {
        spec: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Run a scripted scenario: noclone, bennett or warehouse.
    Demo { name: String },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Compile { program, output } => {
            let prog = parse_program(&read(&program)?).with_context(|| program.display().to_string())?;
            let circuit = bennett_embed(&prog)?;
            emit(output.as_deref(), &write_circuit(&circuit), out)?;
            Ok(0)
        }
        Command::Reverse { circuit, output } => {
            let c = load_circuit(&circuit)?;
            emit(output.as_deref(), &write_circuit(&reverse(&c)), out)?;
            Ok(0)
        }
        Command::Tidy { circuit, output } => {
            let c = load_circuit(&circuit)?;
            emit(output.as_deref(), &write_circuit(&tidy_transform(&c)?), out)?;
            Ok(0)
        }
        Command::Run { circuit, input } => {
            let c = load_circuit(&circuit)?;
            let bits: Bits = input.parse().map_err(|e: String| anyhow!("--input: {e}"))?;
            writeln!(out, "{}", c.evaluate(&bits)?)?;
            Ok(0)
        }
        Command::Analyze { spec, tol, json } => {
            let (spec, tol) = load_spec(&spec, tol)?;
            let analysis = analyze(&spec, tol);
            if json {
                writeln!(out, "{}", analysis.to_json())?;
            } else {
                write!(out, "{}", analysis.to_text())?;
            }
            Ok(analysis.exit_code())
        }
        Command::Tidier { spec, output, tol } => {
            let (spec, tol) = load_spec(&spec, tol)?;
            match construct_tidier(&spec, tol) {
                Ok(proc) => {
                    let fids = verify_tidier(&spec, &proc, tol)?;
                    emit(output.as_deref(), &procedure_to_json(&proc, &fids), out)?;
                    let min = fids.iter().copied().fold(f64::INFINITY, f64::min);
                    writeln!(
                        err,
                        "{} procedure, {} step(s), minimum branch fidelity {min:.12}",
                        proc.kind.label(),
                        proc.steps.len()
                    )?;
                    Ok(0)
                }
                Err(e @ TidyError::NoTidierExists(_)) => {
                    writeln!(err, "{e}")?;
                    Ok(2)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Energy { spec, tol, json } => {
            let (spec, tol) = load_spec(&spec, tol)?;
            let possible = check_tidy_condition(&spec, tol).possible;
            let untidied = erasure_cost(&spec, false);
            let tidied = possible.then(|| erasure_cost(&spec, true));
            if json {
                let doc = serde_json::json!({
                    "erased_bits": untidied.erased_bits,
                    "landauer_cost_kTln2": untidied.landauer_cost,
                    "branch_entropy_bits": untidied.branch_entropy_bound,
                    "tidy_possible": possible,
                    "tidied_cost_kTln2": tidied.as_ref().map(|t| t.landauer_cost),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
            } else {
                writeln!(
                    out,
                    "erasing aux register: {} bits, {} kT ln2",
                    untidied.erased_bits, untidied.landauer_cost
                )?;
                for (k, h) in untidied.branch_entropy_bound.iter().enumerate() {
                    writeln!(out, "  branch {k}: output/aux entanglement entropy {h:.12} bits")?;
                }
                match tidied {
                    Some(t) => writeln!(out, "tidied: {} bits erased, {} kT ln2", t.erased_bits, t.landauer_cost)?,
                    None => writeln!(out, "no tidier exists: the erasure cost is unavoidable")?,
                }
            }
            Ok(0)
        }
        Command::Demo { name } => demo(&name, out),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn load_circuit(path: &Path) -> Result<crate::revcirc::ReversibleCircuit> {
    parse_circuit(&read(path)?).with_context(|| path.display().to_string())
}

fn env_tolerance() -> Result<f64> {
    match std::env::var(TOL_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t > 0.0)
            .ok_or_else(|| anyhow!("{TOL_ENV}: invalid tolerance `{v}`")),
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

/// Tolerance precedence: `--tol`, the spec file, `REVTIDY_TOL`, the default.
fn load_spec(path: &Path, flag: Option<f64>) -> Result<(ComputationSpec, f64)> {
    if let Some(t) = flag {
        if !(t.is_finite() && t > 0.0) {
            bail!("--tol: invalid tolerance {t}");
        }
    }
    let fallback = env_tolerance()?;
    let spec =
        ComputationSpec::from_json_with(&read(path)?, flag, fallback).with_context(|| path.display().to_string())?;
    let tol = flag.or(spec.tolerance()).unwrap_or(fallback);
    Ok((spec, tol))
}

fn demo(name: &str, out: &mut dyn Write) -> Result<i32> {
    match name {
        "noclone" => demo_noclone(out)?,
        "bennett" => demo_bennett(out)?,
        "warehouse" => demo_warehouse(out)?,
        other => bail!("unknown demo `{other}` (expected noclone, bennett or warehouse)"),
    }
    Ok(0)
}

fn demo_noclone(out: &mut dyn Write) -> Result<()> {
    let tol = DEFAULT_TOLERANCE;
    let comp = [StateVector::basis(2, 0), StateVector::basis(2, 1)];
    let states = [StateVector::basis(2, 0), StateVector::basis(2, 1), StateVector::plus()];
    let fids = clone_attempt(&states, &comp, tol)?;
    writeln!(out, "controlled-NOT copier in the computational basis:")?;
    for (name, f) in ["|0>", "|1>", "|+>"].iter().zip(&fids) {
        writeln!(out, "  copy fidelity of {name}: {f:.12}")?;
    }
    let fid = clone_attempt(
        &[StateVector::plus()],
        &[StateVector::plus(), StateVector::minus()],
        tol,
    )?;
    writeln!(out, "copier rebuilt in the {{|+>, |->}} basis:")?;
    writeln!(out, "  copy fidelity of |+>: {:.12}", fid[0])?;
    writeln!(out, "a copier only clones the orthonormal set it was built for.")?;
    Ok(())
}

fn demo_bennett(out: &mut dyn Write) -> Result<()> {
    let prog = BooleanProgram::new(2, vec![Instruction::And(0, 1)], vec![2])?;
    let f = bennett_embed(&prog)?;
    let t = tidy_transform(&f)?;
    writeln!(out, "F   = {}", gate_list(&f))?;
    writeln!(out, "F''F = {}", gate_list(&t))?;
    writeln!(out, " a b | F: a b h | tidied: a b h copy")?;
    for x in 0..4u64 {
        let input = Bits::from_index(x, 2);
        let mut fin = input.0.clone();
        fin.resize(f.width(), false);
        let mut tin = input.0.clone();
        tin.resize(t.width(), false);
        let fo = f.evaluate(&Bits(fin))?;
        let to = t.evaluate(&Bits(tin))?;
        let spaced = |b: &Bits| {
            b.0.iter()
                .map(|&v| if v { "1" } else { "0" })
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(out, " {} | {}     | {}", spaced(&input), spaced(&fo), spaced(&to))?;
    }
    let copies = t.lines_with(Role::Copy);
    writeln!(out, "history line restored to 0; copy line {copies:?} holds a AND b.")?;
    Ok(())
}

fn gate_list(c: &crate::revcirc::ReversibleCircuit) -> String {
    c.gates().iter().map(|g| g.to_string()).collect::<Vec<_>>().join("; ")
}

fn demo_warehouse(out: &mut dyn Write) -> Result<()> {
    let tol = DEFAULT_TOLERANCE;
    let zero = StateVector::basis(2, 0);
    let one = StateVector::basis(2, 1);
    let plus = StateVector::plus();
    let layout = RegisterLayout::new(2, 2)?;

    // Alice: orthogonal inputs, non-orthogonal outputs stored in the warehouse.
    let alice = ComputationSpec::new(
        layout,
        None,
        vec![
            Branch::new(zero.clone(), zero.clone(), zero.clone()),
            Branch::new(one.clone(), plus.clone(), one.clone()),
        ],
        tol,
    )?;
    let a = analyze(&alice, tol);
    writeln!(out, "Alice: |0> -> |0>|0>, |1> -> |+>|1>")?;
    writeln!(
        out,
        "  classification {}, tidy possible: {}",
        a.classification.label, a.decision.possible
    )?;
    let proc = construct_tidier(&alice, tol)?;
    let fids = verify_tidier(&alice, &proc, tol)?;
    writeln!(
        out,
        "  {} procedure with {} steps, branch fidelities {:?}",
        proc.kind.label(),
        proc.steps.len(),
        fids.iter().map(|f| format!("{f:.12}")).collect::<Vec<_>>()
    )?;

    // Bob: takes the stored |0>, |+> as inputs and applies a Hadamard.
    let bob = ComputationSpec::new(
        layout,
        None,
        vec![
            Branch::new(zero.clone(), plus.clone(), zero.clone()),
            Branch::new(plus.clone(), zero.clone(), zero.clone()),
        ],
        tol,
    )?;
    let b = analyze(&bob, tol);
    writeln!(out, "Bob: |0> -> |+>|0>, |+> -> |0>|0>")?;
    writeln!(
        out,
        "  classification {}, reversible {}, tidy possible: {}",
        b.classification.label, b.reversible, b.decision.possible
    )?;
    if let Some(c) = &b.decision.certificate {
        writeln!(
            out,
            "  certificate: pair ({}, {}) |<i|j>(1 - <O(i)|O(j)>)| = {:.12}",
            c.i,
            c.j,
            c.tidy_residual.norm()
        )?;
    }
    let e = erasure_cost(&bob, b.decision.possible);
    writeln!(
        out,
        "  Bob must erase his aux register: {} bits, {} kT ln2, and cannot restore Alice's data.",
        e.erased_bits, e.landauer_cost
    )?;
    Ok(())
}
