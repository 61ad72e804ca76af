//! Line-oriented text formats.
//!
//! `.rvc` circuits:
//!
//! ```text
//! lines 3
//! role 0 input
//! role 1 input
//! role 2 output
//! toffoli 0 1 2
//! ```
//!
//! `.blp` boolean programs:
//!
//! ```text
//! inputs 3
//! w3 = xor w0 w1
//! w4 = and w3 w2
//! outputs w4
//! ```
//!
//! `#` starts a comment. Indices are plain decimal; anything else is rejected.

use std::fmt::Write as _;

use thiserror::Error;

use super::{BooleanProgram, Gate, Instruction, ReversibleCircuit, Role};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-empty, comment-stripped lines with 1-based line numbers.
fn tokenized(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(n, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((n + 1, toks))
    })
}

fn index(line: usize, tok: &str) -> Result<usize, ParseError> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return err(line, format!("expected a decimal index, found `{tok}`"));
    }
    tok.parse()
        .or_else(|_| err(line, format!("index `{tok}` out of range")))
}

fn arity(line: usize, toks: &[&str], n: usize) -> Result<(), ParseError> {
    if toks.len() != n + 1 {
        return err(
            line,
            format!("`{}` takes {n} operand(s), found {}", toks[0], toks.len() - 1),
        );
    }
    Ok(())
}

pub fn parse_circuit(text: &str) -> Result<ReversibleCircuit, ParseError> {
    let mut width: Option<usize> = None;
    let mut roles: Vec<Option<Role>> = Vec::new();
    let mut any_role = false;
    let mut gates = Vec::new();
    let mut gate_lines = Vec::new();
    let mut last_line = 0;

    for (ln, toks) in tokenized(text) {
        last_line = ln;
        if toks[0] == "lines" {
            arity(ln, &toks, 1)?;
            if width.is_some() {
                return err(ln, "duplicate `lines` header");
            }
            let w = index(ln, toks[1])?;
            if w == 0 {
                return err(ln, "circuit width must be positive");
            }
            width = Some(w);
            roles = vec![None; w];
            continue;
        }
        let Some(w) = width else {
            return err(ln, "expected `lines <n>` header first");
        };
        let in_range = |t: &str| -> Result<usize, ParseError> {
            let v = index(ln, t)?;
            if v >= w {
                return err(ln, format!("line {v} out of range for width {w}"));
            }
            Ok(v)
        };
        let gate = match toks[0] {
            "role" => {
                arity(ln, &toks, 2)?;
                let l = in_range(toks[1])?;
                let role: Role = toks[2].parse().or_else(|m: String| err(ln, m))?;
                if roles[l].replace(role).is_some() {
                    return err(ln, format!("duplicate role for line {l}"));
                }
                any_role = true;
                continue;
            }
            "not" => {
                arity(ln, &toks, 1)?;
                Gate::Not {
                    target: in_range(toks[1])?,
                }
            }
            "cnot" => {
                arity(ln, &toks, 2)?;
                Gate::Cnot {
                    control: in_range(toks[1])?,
                    target: in_range(toks[2])?,
                }
            }
            "toffoli" => {
                arity(ln, &toks, 3)?;
                Gate::Toffoli {
                    c1: in_range(toks[1])?,
                    c2: in_range(toks[2])?,
                    target: in_range(toks[3])?,
                }
            }
            "fredkin" => {
                arity(ln, &toks, 3)?;
                Gate::Fredkin {
                    control: in_range(toks[1])?,
                    a: in_range(toks[2])?,
                    b: in_range(toks[3])?,
                }
            }
            other => return err(ln, format!("unknown token `{other}`")),
        };
        gates.push(gate);
        gate_lines.push(ln);
    }

    let Some(w) = width else {
        return err(last_line.max(1), "missing `lines <n>` header");
    };
    let roles = if any_role {
        match roles.iter().position(Option::is_none) {
            Some(l) => return err(last_line, format!("role missing for line {l}")),
            None => Some(roles.into_iter().flatten().collect()),
        }
    } else {
        None
    };
    ReversibleCircuit::new(w, gates, roles).map_err(|e| {
        let line = match e {
            super::CircuitError::RepeatedLine { gate } | super::CircuitError::LineOutOfRange { gate, .. } => {
                gate_lines[gate]
            }
            _ => last_line,
        };
        ParseError {
            line,
            message: e.to_string(),
        }
    })
}

pub fn write_circuit(c: &ReversibleCircuit) -> String {
    let mut s = String::new();
    writeln!(s, "lines {}", c.width()).unwrap();
    if let Some(roles) = c.roles() {
        for (l, r) in roles.iter().enumerate() {
            writeln!(s, "role {l} {}", r.name()).unwrap();
        }
    }
    for g in c.gates() {
        writeln!(s, "{g}").unwrap();
    }
    s
}

fn wire(line: usize, tok: &str) -> Result<usize, ParseError> {
    match tok.strip_prefix('w') {
        Some(rest) => index(line, rest),
        None => err(line, format!("expected a wire `w<k>`, found `{tok}`")),
    }
}

pub fn parse_program(text: &str) -> Result<BooleanProgram, ParseError> {
    let mut n_inputs: Option<usize> = None;
    let mut instructions = Vec::new();
    let mut outputs: Option<Vec<usize>> = None;
    let mut last_line = 0;

    for (ln, toks) in tokenized(text) {
        last_line = ln;
        if outputs.is_some() {
            return err(ln, "nothing may follow `outputs`");
        }
        match toks[0] {
            "inputs" => {
                arity(ln, &toks, 1)?;
                if n_inputs.is_some() {
                    return err(ln, "duplicate `inputs` header");
                }
                n_inputs = Some(index(ln, toks[1])?);
            }
            "outputs" => {
                let Some(n) = n_inputs else {
                    return err(ln, "expected `inputs <n>` header first");
                };
                let defined = n + instructions.len();
                let ws = toks[1..]
                    .iter()
                    .map(|t| {
                        let w = wire(ln, t)?;
                        if w >= defined {
                            return err(ln, format!("output wire w{w} is undefined"));
                        }
                        Ok(w)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                outputs = Some(ws);
            }
            first => {
                let Some(n) = n_inputs else {
                    return err(ln, "expected `inputs <n>` header first");
                };
                if toks.len() < 2 || toks[1] != "=" {
                    return err(ln, format!("unknown token `{first}`"));
                }
                let target = wire(ln, first)?;
                let expected = n + instructions.len();
                if target != expected {
                    return err(ln, format!("expected fresh wire w{expected}, found w{target}"));
                }
                let operand = |t: &str| -> Result<usize, ParseError> {
                    let w = wire(ln, t)?;
                    if w >= expected {
                        return err(ln, format!("wire w{w} read before it is defined"));
                    }
                    Ok(w)
                };
                let op = &toks[2..];
                let ins = match op.first().copied() {
                    Some("not") if op.len() == 2 => Instruction::Not(operand(op[1])?),
                    Some(bin @ ("and" | "or" | "xor")) if op.len() == 3 => {
                        let (a, b) = (operand(op[1])?, operand(op[2])?);
                        match bin {
                            "and" => Instruction::And(a, b),
                            "or" => Instruction::Or(a, b),
                            _ => Instruction::Xor(a, b),
                        }
                    }
                    Some(other @ ("not" | "and" | "or" | "xor")) => {
                        return err(ln, format!("wrong operand count for `{other}`"))
                    }
                    Some(other) => return err(ln, format!("unknown operation `{other}`")),
                    None => return err(ln, "missing operation"),
                };
                instructions.push(ins);
            }
        }
    }

    let Some(n) = n_inputs else {
        return err(last_line.max(1), "missing `inputs <n>` header");
    };
    let outputs = outputs.unwrap_or_default();
    if outputs.is_empty() {
        return err(last_line.max(1), "no outputs");
    }
    BooleanProgram::new(n, instructions, outputs).map_err(|e| ParseError {
        line: last_line,
        message: e.to_string(),
    })
}

pub fn write_program(p: &BooleanProgram) -> String {
    let mut s = String::new();
    writeln!(s, "inputs {}", p.n_inputs()).unwrap();
    for (k, ins) in p.instructions().iter().enumerate() {
        let t = p.n_inputs() + k;
        match *ins {
            Instruction::And(a, b) => writeln!(s, "w{t} = and w{a} w{b}"),
            Instruction::Or(a, b) => writeln!(s, "w{t} = or w{a} w{b}"),
            Instruction::Xor(a, b) => writeln!(s, "w{t} = xor w{a} w{b}"),
            Instruction::Not(a) => writeln!(s, "w{t} = not w{a}"),
        }
        .unwrap();
    }
    let outs: Vec<String> = p.outputs().iter().map(|w| format!("w{w}")).collect();
    writeln!(s, "outputs {}", outs.join(" ")).unwrap();
    s
}
