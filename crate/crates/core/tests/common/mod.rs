#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use revtidy::linalg::{gram_schmidt, inner_product, random_state, random_unitary};
use revtidy::qsim::{apply, tensor, Branch, ComputationSpec, RegisterLayout};
use revtidy::revcirc::{BooleanProgram, Gate, Instruction, ReversibleCircuit};
use revtidy::StateVector;

pub const TOL: f64 = 1e-9;

pub fn rotate<R: Rng>(rng: &mut R, states: Vec<StateVector>) -> Vec<StateVector> {
    let Some(dim) = states.first().map(StateVector::dim) else {
        return states;
    };
    let u = random_unitary(rng, dim);
    states.iter().map(|s| apply(&u, s).unwrap()).collect()
}

/// `n` orthonormal states in `dim`, Haar rotated.
pub fn orthonormal<R: Rng>(rng: &mut R, dim: usize, n: usize) -> Vec<StateVector> {
    rotate(rng, (0..n).map(|k| StateVector::basis(dim, k)).collect())
}

/// Input states whose Gram matrix equals that of `vectors`, embedded in
/// `dim` (needs `vectors.len() <= dim`) and Haar rotated.
pub fn gram_factor<R: Rng>(rng: &mut R, vectors: &[StateVector], dim: usize) -> Vec<StateVector> {
    let (basis, rank) = gram_schmidt(vectors, 1e-12).unwrap();
    assert!(rank <= dim);
    let coords: Vec<StateVector> = vectors
        .iter()
        .map(|v| {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            for (m, b) in basis.iter().take(rank).enumerate() {
                amps[m] = inner_product(b, v).unwrap();
            }
            StateVector::normalized(amps).unwrap()
        })
        .collect();
    rotate(rng, coords)
}

/// A reversible spec with the given outputs and aux states: inputs are
/// chosen so that `⟨i|j⟩ = ⟨O(i)|O(j)⟩⟨Aux(i)|Aux(j)⟩`.
pub fn reversible_spec<R: Rng>(
    rng: &mut R,
    layout: RegisterLayout,
    outputs: Vec<StateVector>,
    aux: Vec<StateVector>,
) -> Option<ComputationSpec> {
    let joint: Vec<StateVector> = outputs.iter().zip(&aux).map(|(o, a)| tensor(o, a)).collect();
    let inputs = gram_factor(rng, &joint, layout.out_dim);
    let branches = inputs
        .into_iter()
        .zip(outputs)
        .zip(aux)
        .map(|((i, o), a)| Branch::new(i, o, a))
        .collect();
    ComputationSpec::new(layout, None, branches, TOL).ok()
}

pub fn random_layout<R: Rng>(rng: &mut R, max: usize) -> RegisterLayout {
    RegisterLayout::new(rng.gen_range(2..=max), rng.gen_range(1..=max)).unwrap()
}

/// Reversible spec with Haar-random outputs and aux states.
pub fn general_spec<R: Rng>(rng: &mut R, layout: RegisterLayout, n: usize) -> Option<ComputationSpec> {
    let outputs = (0..n).map(|_| random_state(rng, layout.out_dim)).collect();
    let aux = (0..n).map(|_| random_state(rng, layout.aux_dim)).collect();
    reversible_spec(rng, layout, outputs, aux)
}

/// Mutually orthogonal outputs, random aux.
pub fn orthogonal_output_spec<R: Rng>(rng: &mut R, layout: RegisterLayout, n: usize) -> Option<ComputationSpec> {
    let outputs = orthonormal(rng, layout.out_dim, n);
    let aux = (0..n).map(|_| random_state(rng, layout.aux_dim)).collect();
    reversible_spec(rng, layout, outputs, aux)
}

/// Orthonormal inputs and aux, random outputs.
pub fn orthogonal_input_spec<R: Rng>(rng: &mut R, layout: RegisterLayout, n: usize) -> Option<ComputationSpec> {
    let outputs = (0..n).map(|_| random_state(rng, layout.out_dim)).collect();
    let aux = orthonormal(rng, layout.aux_dim, n);
    reversible_spec(rng, layout, outputs, aux)
}

/// Every branch produces the same output up to a global phase.
pub fn trivial_output_spec<R: Rng>(rng: &mut R, layout: RegisterLayout, n: usize) -> Option<ComputationSpec> {
    let o = random_state(rng, layout.out_dim);
    let outputs = (0..n)
        .map(|_| {
            let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            StateVector::normalized(o.amplitudes().iter().map(|a| a * phase).collect()).unwrap()
        })
        .collect();
    let aux = (0..n).map(|_| random_state(rng, layout.aux_dim)).collect();
    reversible_spec(rng, layout, outputs, aux)
}

/// Unconstrained random states; generally not reversible.
pub fn arbitrary_spec<R: Rng>(rng: &mut R, layout: RegisterLayout, n: usize) -> Option<ComputationSpec> {
    let branches = (0..n)
        .map(|_| {
            Branch::new(
                random_state(rng, layout.out_dim),
                random_state(rng, layout.out_dim),
                random_state(rng, layout.aux_dim),
            )
        })
        .collect();
    ComputationSpec::new(layout, None, branches, TOL).ok()
}

/// Basis inputs mapped to basis/plus outputs and basis aux: exact zeros and
/// exact overlaps, exercising the boundary of the tidy condition.
pub fn discrete_spec<R: Rng>(rng: &mut R, layout: RegisterLayout, n: usize) -> Option<ComputationSpec> {
    let pick = |rng: &mut R, dim: usize| -> StateVector {
        let a = rng.gen_range(0..dim);
        let b = rng.gen_range(0..dim);
        if a == b || rng.gen_bool(0.5) {
            StateVector::basis(dim, a)
        } else {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            amps[a] = Complex64::new(1.0, 0.0);
            amps[b] = Complex64::new(if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0);
            StateVector::normalized(amps).unwrap()
        }
    };
    let branches = (0..n)
        .map(|_| {
            Branch::new(
                pick(rng, layout.out_dim),
                pick(rng, layout.out_dim),
                pick(rng, layout.aux_dim),
            )
        })
        .collect();
    ComputationSpec::new(layout, None, branches, TOL).ok()
}

pub fn random_program<R: Rng>(rng: &mut R, max_inputs: usize, max_instrs: usize) -> BooleanProgram {
    let n = rng.gen_range(1..=max_inputs);
    let k = rng.gen_range(0..=max_instrs);
    let mut instrs = Vec::with_capacity(k);
    for idx in 0..k {
        let wires = n + idx;
        let a = rng.gen_range(0..wires);
        let b = rng.gen_range(0..wires);
        instrs.push(match rng.gen_range(0..4) {
            0 => Instruction::And(a, b),
            1 => Instruction::Or(a, b),
            2 => Instruction::Xor(a, b),
            _ => Instruction::Not(a),
        });
    }
    let total = n + k;
    let m = rng.gen_range(1..=3);
    let outputs = (0..m).map(|_| rng.gen_range(0..total)).collect();
    BooleanProgram::new(n, instrs, outputs).unwrap()
}

fn distinct<R: Rng>(rng: &mut R, width: usize, count: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, width, count).into_vec()
}

pub fn random_gate<R: Rng>(rng: &mut R, width: usize) -> Gate {
    let kinds = width.min(3);
    match rng.gen_range(0..kinds + usize::from(width >= 3)) {
        0 => Gate::Not {
            target: rng.gen_range(0..width),
        },
        1 => {
            let l = distinct(rng, width, 2);
            Gate::Cnot {
                control: l[0],
                target: l[1],
            }
        }
        2 => {
            let l = distinct(rng, width, 3);
            Gate::Toffoli {
                c1: l[0],
                c2: l[1],
                target: l[2],
            }
        }
        _ => {
            let l = distinct(rng, width, 3);
            Gate::Fredkin {
                control: l[0],
                a: l[1],
                b: l[2],
            }
        }
    }
}

pub fn random_circuit<R: Rng>(rng: &mut R, max_width: usize, max_gates: usize) -> ReversibleCircuit {
    let width = rng.gen_range(1..=max_width);
    let gates = (0..rng.gen_range(0..=max_gates))
        .map(|_| random_gate(rng, width))
        .collect();
    ReversibleCircuit::new(width, gates, None).unwrap()
}
