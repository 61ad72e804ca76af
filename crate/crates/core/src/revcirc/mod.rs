//! Classical reversible circuits over indexed bit lines, with the reverse and
//! tidy passes. Out-of-place Bennett embedding of boolean programs lives in
//! [`program`]; the `.rvc` / `.blp` text formats in [`format`].

pub mod format;
pub mod program;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use program::{bennett_embed, BooleanProgram, Instruction, TruthTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("circuit width must be positive")]
    ZeroWidth,
    #[error("gate {gate}: line {line} out of range for width {width}")]
    LineOutOfRange { gate: usize, line: usize, width: usize },
    #[error("gate {gate}: line indices must be pairwise distinct")]
    RepeatedLine { gate: usize },
    #[error("expected {expected} bits, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("line {line} is a zero/copy ancilla but starts at 1")]
    NonZeroAncilla { line: usize },
    #[error("role table has {found} entries for {expected} lines")]
    RoleCount { expected: usize, found: usize },
    #[error("circuit has no role annotations or no output lines")]
    MissingRoles,
    #[error("malformed program: {0}")]
    MalformedProgram(String),
}

/// One of the four self-inverse reversible gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Not { target: usize },
    Cnot { control: usize, target: usize },
    Toffoli { c1: usize, c2: usize, target: usize },
    Fredkin { control: usize, a: usize, b: usize },
}

impl Gate {
    pub fn lines(&self) -> Vec<usize> {
        match *self {
            Gate::Not { target } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Toffoli { c1, c2, target } => vec![c1, c2, target],
            Gate::Fredkin { control, a, b } => vec![control, a, b],
        }
    }

    /// Every gate in the set is its own inverse.
    pub fn inverse(self) -> Gate {
        self
    }

    pub fn apply(&self, bits: &mut [bool]) {
        match *self {
            Gate::Not { target } => bits[target] ^= true,
            Gate::Cnot { control, target } => bits[target] ^= bits[control],
            Gate::Toffoli { c1, c2, target } => bits[target] ^= bits[c1] & bits[c2],
            Gate::Fredkin { control, a, b } => {
                if bits[control] {
                    bits.swap(a, b);
                }
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Not { target } => write!(f, "not {target}"),
            Gate::Cnot { control, target } => write!(f, "cnot {control} {target}"),
            Gate::Toffoli { c1, c2, target } => write!(f, "toffoli {c1} {c2} {target}"),
            Gate::Fredkin { control, a, b } => write!(f, "fredkin {control} {a} {b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Input,
    History,
    Output,
    Copy,
    Zero,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Input => "input",
            Role::History => "history",
            Role::Output => "output",
            Role::Copy => "copy",
            Role::Zero => "zero",
        }
    }

    /// Lines that must hold 0 when a circuit is run.
    pub fn requires_zero(self) -> bool {
        matches!(self, Role::Copy | Role::Zero)
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "input" => Ok(Role::Input),
            "history" => Ok(Role::History),
            "output" => Ok(Role::Output),
            "copy" => Ok(Role::Copy),
            "zero" => Ok(Role::Zero),
            other => Err(format!("unknown role `{other}`")),
        }
    }
}

/// Fixed-length classical bitstring; character `k` of the text form is line `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits(pub Vec<bool>);

impl Bits {
    pub fn zeros(n: usize) -> Self {
        Bits(vec![false; n])
    }

    /// The `n`-bit pattern of `value`, most significant bit at position 0.
    pub fn from_index(value: u64, n: usize) -> Self {
        Bits((0..n).map(|k| (value >> (n - 1 - k)) & 1 == 1).collect())
    }

    pub fn to_index(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bits {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid bit `{other}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bits)
    }
}

/// Ordered gate list over `width` lines, optionally annotated with a role for
/// every line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversibleCircuit {
    width: usize,
    gates: Vec<Gate>,
    roles: Option<Vec<Role>>,
}

impl ReversibleCircuit {
    pub fn new(width: usize, gates: Vec<Gate>, roles: Option<Vec<Role>>) -> Result<Self, CircuitError> {
        if width == 0 {
            return Err(CircuitError::ZeroWidth);
        }
        for (idx, gate) in gates.iter().enumerate() {
            check_gate(idx, gate, width)?;
        }
        if let Some(r) = &roles {
            if r.len() != width {
                return Err(CircuitError::RoleCount {
                    expected: width,
                    found: r.len(),
                });
            }
        }
        Ok(Self { width, gates, roles })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn roles(&self) -> Option<&[Role]> {
        self.roles.as_deref()
    }

    /// Lines carrying `role`, ascending.
    pub fn lines_with(&self, role: Role) -> Vec<usize> {
        self.roles
            .iter()
            .flatten()
            .enumerate()
            .filter(|(_, r)| **r == role)
            .map(|(k, _)| k)
            .collect()
    }

    /// Runs every gate in order without checking ancilla preconditions.
    pub fn apply(&self, bits: &mut [bool]) {
        for g in &self.gates {
            g.apply(bits);
        }
    }

    /// Runs the circuit on `bits`; zero and copy lines must start at 0.
    pub fn evaluate(&self, bits: &Bits) -> Result<Bits, CircuitError> {
        if bits.len() != self.width {
            return Err(CircuitError::WidthMismatch {
                expected: self.width,
                found: bits.len(),
            });
        }
        if let Some(roles) = &self.roles {
            if let Some(line) = (0..self.width).find(|&k| roles[k].requires_zero() && bits.0[k]) {
                return Err(CircuitError::NonZeroAncilla { line });
            }
        }
        let mut out = bits.0.clone();
        self.apply(&mut out);
        Ok(Bits(out))
    }

    /// Gates of `self` followed by those of `next`; roles are taken from `self`.
    pub fn then(&self, next: &ReversibleCircuit) -> Result<ReversibleCircuit, CircuitError> {
        if next.width != self.width {
            return Err(CircuitError::WidthMismatch {
                expected: self.width,
                found: next.width,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&next.gates);
        Ok(Self {
            width: self.width,
            gates,
            roles: self.roles.clone(),
        })
    }
}

fn check_gate(idx: usize, gate: &Gate, width: usize) -> Result<(), CircuitError> {
    let lines = gate.lines();
    if let Some(&line) = lines.iter().find(|&&l| l >= width) {
        return Err(CircuitError::LineOutOfRange { gate: idx, line, width });
    }
    for (a, x) in lines.iter().enumerate() {
        if lines[a + 1..].contains(x) {
            return Err(CircuitError::RepeatedLine { gate: idx });
        }
    }
    Ok(())
}

/// The complementary computation: gates in reverse order, each inverted.
pub fn reverse(circuit: &ReversibleCircuit) -> ReversibleCircuit {
    ReversibleCircuit {
        width: circuit.width,
        gates: circuit.gates.iter().rev().map(|g| g.inverse()).collect(),
        roles: circuit.roles.clone(),
    }
}

/// Bennett's tidy construction: run `f`, CNOT every output line onto a fresh
/// copy line, then run `reverse(f)`. On `(i, 0…0)` the result leaves the
/// inputs intact, every other original line at 0 and `O(i)` on the copies.
pub fn tidy_transform(f: &ReversibleCircuit) -> Result<ReversibleCircuit, CircuitError> {
    let roles = f.roles.as_ref().ok_or(CircuitError::MissingRoles)?;
    let outputs = f.lines_with(Role::Output);
    if outputs.is_empty() {
        return Err(CircuitError::MissingRoles);
    }
    let width = f.width + outputs.len();
    let mut gates = f.gates.clone();
    gates.extend(outputs.iter().enumerate().map(|(m, &line)| Gate::Cnot {
        control: line,
        target: f.width + m,
    }));
    gates.extend(reverse(f).gates);
    let mut new_roles = roles.clone();
    new_roles.extend(std::iter::repeat_n(Role::Copy, outputs.len()));
    ReversibleCircuit::new(width, gates, Some(new_roles))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let tof = ReversibleCircuit::new(
            3,
            vec![Gate::Toffoli {
                c1: 0,
                c2: 1,
                target: 2,
            }],
            None,
        )
        .unwrap();
        assert_eq!(tof.evaluate(&bits("110")).unwrap(), bits("111"));
        assert_eq!(tof.evaluate(&bits("100")).unwrap(), bits("100"));
        let fred = ReversibleCircuit::new(3, vec![Gate::Fredkin { control: 0, a: 1, b: 2 }], None).unwrap();
        assert_eq!(fred.evaluate(&bits("110")).unwrap(), bits("101"));
        assert_eq!(fred.evaluate(&bits("010")).unwrap(), bits("010"));
    }

    #[test]
    fn evaluate_errors() {
        let c = ReversibleCircuit::new(
            2,
            vec![Gate::Cnot { control: 0, target: 1 }],
            Some(vec![Role::Input, Role::Zero]),
        )
        .unwrap();
        assert_eq!(
            c.evaluate(&bits("1")),
            Err(CircuitError::WidthMismatch { expected: 2, found: 1 })
        );
        assert_eq!(c.evaluate(&bits("01")), Err(CircuitError::NonZeroAncilla { line: 1 }));
        assert_eq!(c.evaluate(&bits("10")).unwrap(), bits("11"));
    }

    #[test]
    fn construction_rejects_bad_gates() {
        assert_eq!(
            ReversibleCircuit::new(2, vec![Gate::Cnot { control: 0, target: 2 }], None),
            Err(CircuitError::LineOutOfRange {
                gate: 0,
                line: 2,
                width: 2
            })
        );
        assert_eq!(
            ReversibleCircuit::new(
                3,
                vec![
                    Gate::Not { target: 0 },
                    Gate::Toffoli {
                        c1: 1,
                        c2: 1,
                        target: 2
                    }
                ],
                None
            ),
            Err(CircuitError::RepeatedLine { gate: 1 })
        );
        assert_eq!(ReversibleCircuit::new(0, vec![], None), Err(CircuitError::ZeroWidth));
        assert_eq!(
            ReversibleCircuit::new(2, vec![], Some(vec![Role::Input])),
            Err(CircuitError::RoleCount { expected: 2, found: 1 })
        );
    }

    #[test]
    fn reverse_examples() {
        let c = ReversibleCircuit::new(1, vec![Gate::Not { target: 0 }], None).unwrap();
        assert_eq!(reverse(&c), c);
        let c = ReversibleCircuit::new(
            3,
            vec![
                Gate::Toffoli {
                    c1: 0,
                    c2: 1,
                    target: 2,
                },
                Gate::Cnot { control: 0, target: 1 },
            ],
            None,
        )
        .unwrap();
        assert_eq!(
            reverse(&c).gates(),
            &[
                Gate::Cnot { control: 0, target: 1 },
                Gate::Toffoli {
                    c1: 0,
                    c2: 1,
                    target: 2
                }
            ]
        );
        assert_eq!(reverse(&reverse(&c)), c);
    }

    #[test]
    fn tidy_requires_roles() {
        let c = ReversibleCircuit::new(1, vec![Gate::Not { target: 0 }], None).unwrap();
        assert_eq!(tidy_transform(&c), Err(CircuitError::MissingRoles));
        let c = ReversibleCircuit::new(1, vec![], Some(vec![Role::Input])).unwrap();
        assert_eq!(tidy_transform(&c), Err(CircuitError::MissingRoles));
    }

    #[test]
    fn bits_round_trip_index() {
        for v in 0..16 {
            assert_eq!(Bits::from_index(v, 4).to_index(), v);
        }
        assert_eq!(Bits::from_index(6, 3).to_string(), "110");
        assert!("10x".parse::<Bits>().is_err());
    }
}
