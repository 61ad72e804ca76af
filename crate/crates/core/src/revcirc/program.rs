use super::{Bits, CircuitError, Gate, ReversibleCircuit, Role};

/// Straight-line boolean instruction. Operands are wire ids: inputs occupy
/// `0..n_inputs`, instruction `k` defines wire `n_inputs + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instruction {
    And(usize, usize),
    Or(usize, usize),
    Xor(usize, usize),
    Not(usize),
}

impl Instruction {
    fn operands(&self) -> Vec<usize> {
        match *self {
            Instruction::And(a, b) | Instruction::Or(a, b) | Instruction::Xor(a, b) => vec![a, b],
            Instruction::Not(a) => vec![a],
        }
    }

    fn eval(&self, wires: &[bool]) -> bool {
        match *self {
            Instruction::And(a, b) => wires[a] & wires[b],
            Instruction::Or(a, b) => wires[a] | wires[b],
            Instruction::Xor(a, b) => wires[a] ^ wires[b],
            Instruction::Not(a) => !wires[a],
        }
    }
}

/// Single-assignment boolean program with designated output wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanProgram {
    n_inputs: usize,
    instructions: Vec<Instruction>,
    outputs: Vec<usize>,
}

impl BooleanProgram {
    pub fn new(n_inputs: usize, instructions: Vec<Instruction>, outputs: Vec<usize>) -> Result<Self, CircuitError> {
        for (k, ins) in instructions.iter().enumerate() {
            let defined = n_inputs + k;
            if let Some(w) = ins.operands().into_iter().find(|&w| w >= defined) {
                return Err(CircuitError::MalformedProgram(format!(
                    "instruction {k} reads wire w{w} before it is defined"
                )));
            }
        }
        if outputs.is_empty() {
            return Err(CircuitError::MalformedProgram("no outputs".into()));
        }
        let n_wires = n_inputs + instructions.len();
        if let Some(w) = outputs.iter().find(|&&w| w >= n_wires) {
            return Err(CircuitError::MalformedProgram(format!("output wire w{w} is undefined")));
        }
        Ok(Self {
            n_inputs,
            instructions,
            outputs,
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Direct evaluation of the program semantics.
    pub fn eval(&self, inputs: &[bool]) -> Vec<bool> {
        assert_eq!(inputs.len(), self.n_inputs, "input arity");
        let mut wires = inputs.to_vec();
        for ins in &self.instructions {
            let v = ins.eval(&wires);
            wires.push(v);
        }
        self.outputs.iter().map(|&w| wires[w]).collect()
    }

    pub fn truth_table(&self) -> TruthTable {
        let rows = (0..1u64 << self.n_inputs)
            .map(|x| Bits(self.eval(&Bits::from_index(x, self.n_inputs).0)))
            .collect();
        TruthTable {
            n_in: self.n_inputs,
            n_out: self.outputs.len(),
            rows,
        }
    }
}

/// Output bitstring for every input; row `x` belongs to
/// `Bits::from_index(x, n_in)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub n_in: usize,
    pub n_out: usize,
    pub rows: Vec<Bits>,
}

impl TruthTable {
    pub fn row(&self, input: &Bits) -> &Bits {
        &self.rows[input.to_index() as usize]
    }
}

/// Compiles `prog` out of place: inputs keep lines `0..n`, instruction `k`
/// writes the fresh zero line `n + k`. Lines of designated outputs get role
/// `output`, remaining ancillas `history`. An output naming an input wire, a
/// repeated wire, or a wire out of ascending order is first copied onto an
/// extra line so that output lines read in ascending order give `O(i)`.
pub fn bennett_embed(prog: &BooleanProgram) -> Result<ReversibleCircuit, CircuitError> {
    let n = prog.n_inputs;
    let mut gates = Vec::new();
    for (k, ins) in prog.instructions.iter().enumerate() {
        let t = n + k;
        match *ins {
            Instruction::And(a, b) if a == b => gates.push(Gate::Cnot { control: a, target: t }),
            Instruction::And(a, b) => gates.push(Gate::Toffoli {
                c1: a,
                c2: b,
                target: t,
            }),
            Instruction::Or(a, b) if a == b => gates.push(Gate::Cnot { control: a, target: t }),
            // a ∨ b = a ⊕ b ⊕ ab, written onto t without touching a or b.
            Instruction::Or(a, b) => gates.extend([
                Gate::Cnot { control: a, target: t },
                Gate::Cnot { control: b, target: t },
                Gate::Toffoli {
                    c1: a,
                    c2: b,
                    target: t,
                },
            ]),
            Instruction::Xor(a, b) => gates.extend([
                Gate::Cnot { control: a, target: t },
                Gate::Cnot { control: b, target: t },
            ]),
            Instruction::Not(a) => gates.extend([Gate::Cnot { control: a, target: t }, Gate::Not { target: t }]),
        }
    }

    let mut width = n + prog.instructions.len();
    let mut roles = vec![Role::Input; n];
    roles.extend(std::iter::repeat_n(Role::History, prog.instructions.len()));
    let mut last: Option<usize> = None;
    for &w in &prog.outputs {
        let in_place = w >= n && last.is_none_or(|l| w > l);
        let line = if in_place {
            w
        } else {
            gates.push(Gate::Cnot {
                control: w,
                target: width,
            });
            roles.push(Role::History);
            width += 1;
            width - 1
        };
        roles[line] = Role::Output;
        last = Some(line);
    }
    ReversibleCircuit::new(width, gates, Some(roles))
}
