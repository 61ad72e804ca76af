//! Tidyability analysis for quantum branch mappings.
//!
//! For every pair of branches `(i, j)` two residuals decide everything:
//!
//! * reversible: `⟨i|j⟩ − ⟨O(i)|O(j)⟩⟨Aux(i)|Aux(j)⟩`, zero iff some unitary
//!   `U_C` realizes the branches;
//! * tidy: `⟨i|j⟩·(1 − ⟨O(i)|O(j)⟩)`, zero iff some unitary
//!   `|i⟩|Aux0⟩|AuxO⟩ → |i⟩|Aux0⟩|O(i)⟩` exists.
//!
//! The tidy residual does not involve the auxiliary states, so the tidy
//! decision stands on its own even for branch sets that are not reversible.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{
    complete_to_unitary, gram, gram_schmidt, inner_product, schmidt_entropy, ComplexScalar, Keep, LinalgError,
    StateVector, UnitaryMatrix,
};
use crate::qsim::{apply_on, build_computation_unitary, tensor, tensor_all, ComputationSpec, QsimError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TidyError {
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("states are not orthonormal (max Gram deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },
    #[error("copier basis is empty")]
    EmptyBasis,
    #[error("spec is not reversible: pair ({}, {}) residual {:.12}", .0.i, .0.j, .0.reversible_residual.norm())]
    NotReversible(Box<PairResidual>),
    #[error("no tidying procedure exists: pair ({}, {}) tidy residual {:.12}", .0.i, .0.j, .0.tidy_residual.norm())]
    NoTidierExists(Box<PairResidual>),
    #[error("procedure registers do not match the spec layout")]
    RegisterMismatch,
    #[error("constructed procedure failed verification on branch {branch} (fidelity {fidelity})")]
    VerificationFailed { branch: usize, fidelity: f64 },
}

/// Overlaps and residuals of one branch pair `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairResidual {
    pub i: usize,
    pub j: usize,
    pub in_overlap: ComplexScalar,
    pub out_overlap: ComplexScalar,
    pub aux_overlap: ComplexScalar,
    pub reversible_residual: ComplexScalar,
    pub tidy_residual: ComplexScalar,
}

impl PairResidual {
    pub fn from_overlaps(
        i: usize,
        j: usize,
        in_overlap: Complex64,
        out_overlap: Complex64,
        aux_overlap: Complex64,
    ) -> Self {
        Self {
            i,
            j,
            in_overlap,
            out_overlap,
            aux_overlap,
            reversible_residual: in_overlap - out_overlap * aux_overlap,
            tidy_residual: in_overlap * (Complex64::new(1.0, 0.0) - out_overlap),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TidyClass {
    OrthogonalOutputs,
    OrthogonalInputsNonOrthogonalOutputs,
    NonOrthogonalInputs,
}

impl TidyClass {
    pub fn label(self) -> &'static str {
        match self {
            TidyClass::OrthogonalOutputs => "OrthogonalOutputs",
            TidyClass::OrthogonalInputsNonOrthogonalOutputs => "OrthogonalInputsNonOrthogonalOutputs",
            TidyClass::NonOrthogonalInputs => "NonOrthogonalInputs",
        }
    }
}

impl fmt::Display for TidyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TidyClassification {
    pub label: TidyClass,
    pub pair_data: Vec<PairResidual>,
}

/// How a tidier is built once one is known to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcedureKind {
    /// Copy the outputs in their own orthonormal basis, then run `U_C†`.
    Bennett,
    /// Copy the joint output/aux states, reset the copied aux, then run `U_C†`.
    ModifiedBennett,
    /// One unitary completed directly from the tidy pair list.
    Direct,
}

impl ProcedureKind {
    pub fn label(self) -> &'static str {
        match self {
            ProcedureKind::Bennett => "Bennett",
            ProcedureKind::ModifiedBennett => "ModifiedBennett",
            ProcedureKind::Direct => "Direct",
        }
    }

    fn for_class(class: TidyClass) -> Self {
        match class {
            TidyClass::OrthogonalOutputs => ProcedureKind::Bennett,
            TidyClass::OrthogonalInputsNonOrthogonalOutputs => ProcedureKind::ModifiedBennett,
            TidyClass::NonOrthogonalInputs => ProcedureKind::Direct,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TidyDecision {
    pub possible: bool,
    /// Pair with the largest `|tidy_residual|` when impossible.
    pub certificate: Option<PairResidual>,
    /// Constructor to use when possible.
    pub procedure: Option<ProcedureKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegisterRole {
    Output,
    Aux,
    CopyOutput,
    CopyAux,
}

impl RegisterRole {
    pub fn name(self) -> &'static str {
        match self {
            RegisterRole::Output => "output",
            RegisterRole::Aux => "aux",
            RegisterRole::CopyOutput => "copy_output",
            RegisterRole::CopyAux => "copy_aux",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Register {
    pub role: RegisterRole,
    pub dim: usize,
}

/// A unitary acting on the listed registers, in the listed order.
#[derive(Debug, Clone, PartialEq)]
pub struct TidyStep {
    pub label: String,
    pub targets: Vec<usize>,
    pub unitary: UnitaryMatrix,
}

/// Ordered unitaries over `output ⊗ aux ⊗ copy…` registers. Copy registers
/// start in basis state 0; the composite should take
/// `O(k) ⊗ Aux(k) ⊗ |0…⟩` to `input_k ⊗ Aux0 ⊗ O(k)` (with the copy of the
/// auxiliary, when present, back at `Aux0`).
#[derive(Debug, Clone, PartialEq)]
pub struct TidyProcedure {
    pub kind: ProcedureKind,
    pub registers: Vec<Register>,
    pub steps: Vec<TidyStep>,
}

impl TidyProcedure {
    /// Registers used by `kind` for a given layout, with no steps.
    pub fn empty(kind: ProcedureKind, out_dim: usize, aux_dim: usize) -> Self {
        let mut registers = vec![
            Register {
                role: RegisterRole::Output,
                dim: out_dim,
            },
            Register {
                role: RegisterRole::Aux,
                dim: aux_dim,
            },
            Register {
                role: RegisterRole::CopyOutput,
                dim: out_dim,
            },
        ];
        if kind == ProcedureKind::ModifiedBennett {
            registers.push(Register {
                role: RegisterRole::CopyAux,
                dim: aux_dim,
            });
        }
        Self {
            kind,
            registers,
            steps: Vec::new(),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.registers.iter().map(|r| r.dim).collect()
    }

    /// Applies every step in order.
    pub fn run(&self, state: &StateVector) -> Result<StateVector, TidyError> {
        let dims = self.dims();
        let mut s = state.clone();
        for step in &self.steps {
            s = apply_on(&step.unitary, &s, &dims, &step.targets)?;
        }
        Ok(s)
    }

    fn branch_state(&self, spec: &ComputationSpec, k: usize, finished: bool) -> StateVector {
        let b = &spec.branches()[k];
        let parts: Vec<StateVector> = self
            .registers
            .iter()
            .map(|r| match (r.role, finished) {
                (RegisterRole::Output, false) => b.output.clone(),
                (RegisterRole::Output, true) => b.input.clone(),
                (RegisterRole::Aux, false) => b.aux.clone(),
                (RegisterRole::Aux, true) | (RegisterRole::CopyAux, true) => spec.aux0().clone(),
                (RegisterRole::CopyOutput, true) => b.output.clone(),
                (RegisterRole::CopyOutput | RegisterRole::CopyAux, false) => StateVector::basis(r.dim, 0),
            })
            .collect();
        tensor_all(&parts.iter().collect::<Vec<_>>())
    }

    /// `O(k) ⊗ Aux(k) ⊗ |0…⟩`.
    pub fn initial_state(&self, spec: &ComputationSpec, k: usize) -> StateVector {
        self.branch_state(spec, k, false)
    }

    /// `input_k ⊗ Aux0 ⊗ O(k)` (plus `Aux0` on a copied auxiliary).
    pub fn target_state(&self, spec: &ComputationSpec, k: usize) -> StateVector {
        self.branch_state(spec, k, true)
    }
}

/// Erasure bookkeeping; costs are in units of kT·ln2.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyAccount {
    pub erased_bits: f64,
    pub landauer_cost: f64,
    pub branch_entropy_bound: Vec<f64>,
}

/// All pairs `i < j` with overlaps and residuals.
pub fn check_reversibility(spec: &ComputationSpec, _tol: f64) -> Vec<PairResidual> {
    let b = spec.branches();
    let mut pairs = Vec::with_capacity(b.len() * b.len().saturating_sub(1) / 2);
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            // Dimensions are validated by ComputationSpec.
            let ip = |x: &StateVector, y: &StateVector| inner_product(x, y).expect("validated dims");
            pairs.push(PairResidual::from_overlaps(
                i,
                j,
                ip(&b[i].input, &b[j].input),
                ip(&b[i].output, &b[j].output),
                ip(&b[i].aux, &b[j].aux),
            ));
        }
    }
    pairs
}

/// Pair with the largest `|reversible_residual|` above `tol`, if any.
pub fn reversibility_violation(pairs: &[PairResidual], tol: f64) -> Option<PairResidual> {
    worst(pairs, |p| p.reversible_residual.norm()).filter(|p| p.reversible_residual.norm() > tol)
}

fn worst(pairs: &[PairResidual], key: impl Fn(&PairResidual) -> f64) -> Option<PairResidual> {
    // Strict comparison keeps the lexicographically first pair on ties.
    pairs
        .iter()
        .fold(None::<&PairResidual>, |best, p| match best {
            Some(b) if key(p) <= key(b) => Some(b),
            _ => Some(p),
        })
        .copied()
}

fn classify_pairs(pairs: &[PairResidual], tol: f64) -> TidyClass {
    if pairs.iter().all(|p| p.out_overlap.norm() <= tol) {
        TidyClass::OrthogonalOutputs
    } else if pairs.iter().all(|p| p.in_overlap.norm() <= tol) {
        TidyClass::OrthogonalInputsNonOrthogonalOutputs
    } else {
        TidyClass::NonOrthogonalInputs
    }
}

fn decide(pairs: &[PairResidual], tol: f64) -> TidyDecision {
    let cert = worst(pairs, |p| p.tidy_residual.norm()).filter(|p| p.tidy_residual.norm() > tol);
    match cert {
        Some(c) => TidyDecision {
            possible: false,
            certificate: Some(c),
            procedure: None,
        },
        None => TidyDecision {
            possible: true,
            certificate: None,
            procedure: Some(ProcedureKind::for_class(classify_pairs(pairs, tol))),
        },
    }
}

/// A tidier exists iff `max |⟨i|j⟩(1 − ⟨O(i)|O(j)⟩)| ≤ tol` over all pairs.
/// Output identity is phase-sensitive: outputs differing by a phase count
/// as distinct.
pub fn check_tidy_condition(spec: &ComputationSpec, tol: f64) -> TidyDecision {
    decide(&check_reversibility(spec, tol), tol)
}

pub fn classify(spec: &ComputationSpec, tol: f64) -> TidyClassification {
    let pair_data = check_reversibility(spec, tol);
    TidyClassification {
        label: classify_pairs(&pair_data, tol),
        pair_data,
    }
}

fn check_orthonormal(states: &[StateVector], tol: f64) -> Result<(), TidyError> {
    let g = gram(states)?;
    let mut deviation = 0.0f64;
    for i in 0..g.size() {
        for j in 0..g.size() {
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((g.entry(i, j) - Complex64::new(target, 0.0)).norm());
        }
    }
    if deviation > tol {
        return Err(TidyError::NotOrthonormal { deviation });
    }
    Ok(())
}

/// Controlled-NOT generalized to an orthonormal basis: on `dim ⊗ dim`, maps
/// `b_k ⊗ |0⟩ → b_k ⊗ b_k`, canonically completed elsewhere.
pub fn basis_controlled_copy(basis: &[StateVector], dim: usize, tol: f64) -> Result<UnitaryMatrix, TidyError> {
    if basis.is_empty() {
        return Err(TidyError::EmptyBasis);
    }
    if let Some(b) = basis.iter().find(|b| b.dim() != dim) {
        return Err(LinalgError::DimensionMismatch {
            expected: dim,
            found: b.dim(),
        }
        .into());
    }
    check_orthonormal(basis, tol)?;
    let e0 = StateVector::basis(dim, 0);
    let pairs: Vec<_> = basis.iter().map(|b| (tensor(b, &e0), tensor(b, b))).collect();
    Ok(complete_to_unitary(&pairs, dim * dim, tol)?)
}

/// `U_R: b_k ⊗ b_k → b_k ⊗ aux0` for an orthonormal basis.
pub fn conditional_reset(basis: &[StateVector], aux0: &StateVector, tol: f64) -> Result<UnitaryMatrix, TidyError> {
    controlled_reset(basis, basis, aux0, tol)
}

/// `c_k ⊗ t_k → c_k ⊗ fiducial` for orthonormal controls `c_k`.
pub fn controlled_reset(
    controls: &[StateVector],
    targets: &[StateVector],
    fiducial: &StateVector,
    tol: f64,
) -> Result<UnitaryMatrix, TidyError> {
    if controls.is_empty() {
        return Err(TidyError::EmptyBasis);
    }
    assert_eq!(controls.len(), targets.len(), "one target per control");
    check_orthonormal(controls, tol)?;
    if let Some(t) = targets.iter().find(|t| t.dim() != fiducial.dim()) {
        return Err(LinalgError::DimensionMismatch {
            expected: fiducial.dim(),
            found: t.dim(),
        }
        .into());
    }
    let pairs: Vec<_> = controls
        .iter()
        .zip(targets)
        .map(|(c, t)| (tensor(c, t), tensor(c, fiducial)))
        .collect();
    Ok(complete_to_unitary(&pairs, controls[0].dim() * fiducial.dim(), tol)?)
}

/// Distinct states under phase-sensitive equality, first occurrence kept.
fn distinct(states: impl IntoIterator<Item = StateVector>, tol: f64) -> Vec<StateVector> {
    let mut out: Vec<StateVector> = Vec::new();
    for s in states {
        let seen = out
            .iter()
            .any(|o| (inner_product(o, &s).expect("same dim") - Complex64::new(1.0, 0.0)).norm() <= tol);
        if !seen {
            out.push(s);
        }
    }
    out
}

/// Builds and verifies a tidying procedure, or proves none exists.
pub fn construct_tidier(spec: &ComputationSpec, tol: f64) -> Result<TidyProcedure, TidyError> {
    let pairs = check_reversibility(spec, tol);
    let decision = decide(&pairs, tol);
    if let Some(cert) = decision.certificate {
        return Err(TidyError::NoTidierExists(Box::new(cert)));
    }
    if let Some(p) = reversibility_violation(&pairs, tol) {
        return Err(TidyError::NotReversible(Box::new(p)));
    }
    let kind = decision.procedure.expect("possible decisions carry a kind");
    let layout = spec.layout();
    let (out_dim, aux_dim) = layout.as_pair();
    let mut proc = TidyProcedure::empty(kind, out_dim, aux_dim);
    let outputs: Vec<StateVector> = spec.branches().iter().map(|b| b.output.clone()).collect();

    match kind {
        ProcedureKind::Bennett => {
            let uc = build_computation_unitary(spec, tol)?;
            proc.steps.push(TidyStep {
                label: "copy outputs in the output basis".into(),
                targets: vec![0, 2],
                unitary: basis_controlled_copy(&outputs, out_dim, tol)?,
            });
            proc.steps.push(TidyStep {
                label: "uncompute (U_C adjoint)".into(),
                targets: vec![0, 1],
                unitary: uc.adjoint(),
            });
        }
        ProcedureKind::ModifiedBennett => {
            let uc = build_computation_unitary(spec, tol)?;
            let joint = spec.joint_outputs();
            proc.steps.push(TidyStep {
                label: "copy joint output/aux states".into(),
                targets: vec![0, 1, 2, 3],
                unitary: basis_controlled_copy(&joint, layout.total_dim(), tol)?,
            });
            let auxes: Vec<StateVector> = spec.branches().iter().map(|b| b.aux.clone()).collect();
            let aux_basis = distinct(auxes.iter().cloned(), tol);
            let reset = match conditional_reset(&aux_basis, spec.aux0(), tol) {
                Ok(u) => TidyStep {
                    label: "reset copied aux conditioned on aux".into(),
                    targets: vec![1, 3],
                    unitary: u,
                },
                // Aux states are only pairwise orthogonal where outputs
                // overlap; otherwise condition on the joint states instead.
                Err(TidyError::NotOrthonormal { .. }) => TidyStep {
                    label: "reset copied aux conditioned on output and aux".into(),
                    targets: vec![0, 1, 3],
                    unitary: controlled_reset(&joint, &auxes, spec.aux0(), tol)?,
                },
                Err(e) => return Err(e),
            };
            proc.steps.push(reset);
            proc.steps.push(TidyStep {
                label: "uncompute (U_C adjoint)".into(),
                targets: vec![0, 1],
                unitary: uc.adjoint(),
            });
        }
        ProcedureKind::Direct => {
            let pairs: Vec<_> = (0..spec.branches().len())
                .map(|k| (proc.initial_state(spec, k), proc.target_state(spec, k)))
                .collect();
            // Residuals of both conditions add up in this Gram comparison.
            let u = complete_to_unitary(&pairs, layout.total_dim() * out_dim, 2.0 * tol)?;
            proc.steps.push(TidyStep {
                label: "tidy map completed from branch pairs".into(),
                targets: vec![0, 1, 2],
                unitary: u,
            });
        }
    }

    let fids = verify_tidier(spec, &proc, tol)?;
    if let Some((branch, &fidelity)) = fids.iter().enumerate().find(|(_, f)| **f < 1.0 - tol) {
        return Err(TidyError::VerificationFailed { branch, fidelity });
    }
    Ok(proc)
}

/// Bennett's classical recipe applied verbatim: copy the outputs in the
/// orthonormal basis they span, then run `U_C†`. Only correct when the
/// outputs are mutually orthogonal.
pub fn bennett_procedure(spec: &ComputationSpec, tol: f64) -> Result<TidyProcedure, TidyError> {
    let (out_dim, aux_dim) = spec.layout().as_pair();
    let uc = build_computation_unitary(spec, tol)?;
    let outputs: Vec<StateVector> = spec.branches().iter().map(|b| b.output.clone()).collect();
    let (basis, _) = gram_schmidt(&outputs, tol)?;
    let mut proc = TidyProcedure::empty(ProcedureKind::Bennett, out_dim, aux_dim);
    proc.steps.push(TidyStep {
        label: "copy outputs in the span basis".into(),
        targets: vec![0, 2],
        unitary: basis_controlled_copy(&basis, out_dim, tol)?,
    });
    proc.steps.push(TidyStep {
        label: "uncompute (U_C adjoint)".into(),
        targets: vec![0, 1],
        unitary: uc.adjoint(),
    });
    Ok(proc)
}

/// Per-branch fidelity between the procedure's result and its target.
pub fn verify_tidier(spec: &ComputationSpec, proc: &TidyProcedure, _tol: f64) -> Result<Vec<f64>, TidyError> {
    let (out_dim, aux_dim) = spec.layout().as_pair();
    let layout_ok = proc.registers.len() >= 3
        && proc.registers[0].role == RegisterRole::Output
        && proc.registers[1].role == RegisterRole::Aux
        && proc.registers.iter().all(|r| {
            r.dim
                == match r.role {
                    RegisterRole::Output | RegisterRole::CopyOutput => out_dim,
                    RegisterRole::Aux | RegisterRole::CopyAux => aux_dim,
                }
        });
    if !layout_ok {
        return Err(TidyError::RegisterMismatch);
    }
    (0..spec.branches().len())
        .map(|k| {
            let end = proc.run(&proc.initial_state(spec, k))?;
            Ok(end.fidelity(&proc.target_state(spec, k))?)
        })
        .collect()
}

/// Copy fidelity `|⟨ψψ| U_copy |ψ0⟩|²` of each state under the
/// basis-controlled copier built on `copier_basis`.
pub fn clone_attempt(states: &[StateVector], copier_basis: &[StateVector], tol: f64) -> Result<Vec<f64>, TidyError> {
    let dim = copier_basis.first().ok_or(TidyError::EmptyBasis)?.dim();
    let u = basis_controlled_copy(copier_basis, dim, tol)?;
    let e0 = StateVector::basis(dim, 0);
    states
        .iter()
        .map(|psi| {
            if psi.dim() != dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: dim,
                    found: psi.dim(),
                }
                .into());
            }
            let copied = crate::qsim::apply(&u, &tensor(psi, &e0))?;
            Ok(tensor(psi, psi).fidelity(&copied)?)
        })
        .collect()
}

/// Erasing the auxiliary register costs `log2(aux_dim)` bits unless the
/// computation is tidied. Branch entropies are reported across the
/// output/aux cut.
pub fn erasure_cost(spec: &ComputationSpec, tidied: bool) -> EnergyAccount {
    let erased_bits = if tidied {
        0.0
    } else {
        (spec.layout().aux_dim as f64).log2()
    };
    let branch_entropy_bound = spec
        .branches()
        .iter()
        .map(|b| schmidt_entropy(&b.joint_output(), spec.layout().as_pair(), Keep::A).expect("validated dims"))
        .collect();
    EnergyAccount {
        erased_bits,
        landauer_cost: erased_bits,
        branch_entropy_bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{Branch, RegisterLayout};
    use std::f64::consts::FRAC_1_SQRT_2;

    const TOL: f64 = 1e-9;

    fn zero() -> StateVector {
        StateVector::basis(2, 0)
    }
    fn one() -> StateVector {
        StateVector::basis(2, 1)
    }
    fn plus() -> StateVector {
        StateVector::plus()
    }
    fn minus() -> StateVector {
        StateVector::minus()
    }

    fn spec(branches: Vec<(StateVector, StateVector, StateVector)>) -> ComputationSpec {
        let layout = RegisterLayout::new(2, 2).unwrap();
        ComputationSpec::new(
            layout,
            None,
            branches.into_iter().map(|(i, o, a)| Branch::new(i, o, a)).collect(),
            TOL,
        )
        .unwrap()
    }

    #[test]
    fn reversibility_examples() {
        let s = spec(vec![(zero(), zero(), zero()), (one(), plus(), one())]);
        let p = check_reversibility(&s, TOL);
        assert_eq!(p.len(), 1);
        assert!(p[0].reversible_residual.norm() < 1e-15);
        assert!(reversibility_violation(&p, TOL).is_none());

        let s = spec(vec![(zero(), zero(), zero()), (one(), plus(), zero())]);
        let p = check_reversibility(&s, TOL);
        assert!((p[0].reversible_residual - Complex64::new(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!(reversibility_violation(&p, TOL).is_some());
    }

    #[test]
    fn tidy_condition_examples() {
        let d = check_tidy_condition(&spec(vec![(zero(), zero(), zero()), (one(), plus(), one())]), TOL);
        assert!(d.possible);
        assert_eq!(d.procedure, Some(ProcedureKind::ModifiedBennett));

        // Trivial computation: both outputs |0⟩; aux overlap must equal ⟨0|+⟩.
        let d = check_tidy_condition(&spec(vec![(zero(), zero(), zero()), (plus(), zero(), plus())]), TOL);
        assert!(d.possible);
        assert_eq!(d.procedure, Some(ProcedureKind::Direct));

        let d = check_tidy_condition(&spec(vec![(zero(), zero(), zero()), (plus(), one(), zero())]), TOL);
        assert!(!d.possible);
        let cert = d.certificate.unwrap();
        assert_eq!((cert.i, cert.j), (0, 1));
        assert!((cert.tidy_residual.norm() - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn phase_differing_outputs_are_distinct() {
        let neg_zero = StateVector::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)], TOL).unwrap();
        // ⟨0|+⟩ = ⟨O0|O1⟩⟨A0|A1⟩ = −1·⟨A0|A1⟩ with A1 = −|+⟩.
        let neg_plus = StateVector::new(plus().amplitudes().iter().map(|a| -a).collect(), TOL).unwrap();
        let s = spec(vec![(zero(), zero(), zero()), (plus(), neg_zero, neg_plus)]);
        assert!(reversibility_violation(&check_reversibility(&s, TOL), TOL).is_none());
        let d = check_tidy_condition(&s, TOL);
        assert!(!d.possible);
        assert!((d.certificate.unwrap().tidy_residual.norm() - 2.0 * FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn certificate_tie_break_is_lexicographic() {
        let mk = |i, j, t: f64| PairResidual {
            tidy_residual: Complex64::new(t, 0.0),
            ..PairResidual::from_overlaps(
                i,
                j,
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            )
        };
        let d = decide(&[mk(0, 1, 0.1), mk(0, 2, 0.5), mk(1, 2, 0.5)], TOL);
        let c = d.certificate.unwrap();
        assert_eq!((c.i, c.j), (0, 2));
    }

    #[test]
    fn classify_examples() {
        let c = classify(&spec(vec![(zero(), zero(), zero()), (one(), one(), zero())]), TOL);
        assert_eq!(c.label, TidyClass::OrthogonalOutputs);
        let c = classify(&spec(vec![(zero(), zero(), zero()), (one(), plus(), one())]), TOL);
        assert_eq!(c.label, TidyClass::OrthogonalInputsNonOrthogonalOutputs);
        let c = classify(&spec(vec![(zero(), zero(), zero()), (plus(), zero(), plus())]), TOL);
        assert_eq!(c.label, TidyClass::NonOrthogonalInputs);
        assert_eq!(c.pair_data.len(), 1);
    }

    #[test]
    fn copy_examples() {
        let u = basis_controlled_copy(&[zero(), one()], 2, TOL).unwrap();
        let cnot = [1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.];
        assert!(u
            .row_major()
            .iter()
            .zip(cnot)
            .all(|(a, b)| (a - Complex64::new(b, 0.0)).norm() < 1e-12));

        let u = basis_controlled_copy(&[plus(), minus()], 2, TOL).unwrap();
        let out = crate::qsim::apply(&u, &tensor(&plus(), &zero())).unwrap();
        assert!(out.fidelity(&tensor(&plus(), &plus())).unwrap() > 1.0 - 1e-12);
        let out = crate::qsim::apply(&u, &tensor(&zero(), &zero())).unwrap();
        let layout = RegisterLayout::new(2, 2).unwrap();
        assert!(!crate::qsim::is_separable(&out, layout, TOL).unwrap());

        let u = basis_controlled_copy(&[zero()], 2, TOL).unwrap();
        let out = crate::qsim::apply(&u, &tensor(&zero(), &zero())).unwrap();
        assert!(out.fidelity(&tensor(&zero(), &zero())).unwrap() > 1.0 - 1e-12);

        assert!(matches!(
            basis_controlled_copy(&[zero(), plus()], 2, TOL),
            Err(TidyError::NotOrthonormal { .. })
        ));
        assert_eq!(basis_controlled_copy(&[], 2, TOL), Err(TidyError::EmptyBasis));
    }

    #[test]
    fn reset_examples() {
        let u = conditional_reset(&[zero(), one()], &zero(), TOL).unwrap();
        let out = crate::qsim::apply(&u, &tensor(&one(), &one())).unwrap();
        assert!(out.fidelity(&tensor(&one(), &zero())).unwrap() > 1.0 - 1e-12);
        let out = crate::qsim::apply(&u, &tensor(&zero(), &zero())).unwrap();
        assert!(out.fidelity(&tensor(&zero(), &zero())).unwrap() > 1.0 - 1e-12);

        let u = conditional_reset(&[plus(), minus()], &zero(), TOL).unwrap();
        let out = crate::qsim::apply(&u, &tensor(&minus(), &minus())).unwrap();
        assert!(out.fidelity(&tensor(&minus(), &zero())).unwrap() >= 1.0 - 1e-9);

        assert!(matches!(
            conditional_reset(&[zero(), plus()], &zero(), TOL),
            Err(TidyError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn constructs_bennett_tidier() {
        let s = spec(vec![(zero(), zero(), zero()), (one(), one(), one())]);
        let p = construct_tidier(&s, TOL).unwrap();
        assert_eq!(p.kind, ProcedureKind::Bennett);
        assert!(verify_tidier(&s, &p, TOL).unwrap().iter().all(|f| *f >= 1.0 - 1e-9));
    }

    #[test]
    fn constructs_modified_tidier() {
        let s = spec(vec![(zero(), zero(), zero()), (one(), plus(), one())]);
        let p = construct_tidier(&s, TOL).unwrap();
        assert_eq!(p.kind, ProcedureKind::ModifiedBennett);
        assert_eq!(p.steps.len(), 3);
        assert_eq!(p.steps[1].targets, vec![1, 3]);
        let end = p.run(&p.initial_state(&s, 1)).unwrap();
        let expected = tensor_all(&[&one(), &zero(), &plus(), &zero()]);
        assert!(end.fidelity(&expected).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn modified_tidier_with_overlapping_aux_falls_back_to_joint_control() {
        // Three orthogonal inputs need out_dim 3; the aux states {0, +, 1}
        // do not form an orthonormal set.
        let layout = RegisterLayout::new(3, 2).unwrap();
        let b = |k: usize| StateVector::basis(3, k);
        let h = FRAC_1_SQRT_2;
        let plus3 = StateVector::from_real(&[h, h, 0.0]).unwrap();
        let s = ComputationSpec::new(
            layout,
            None,
            vec![
                Branch::new(b(0), b(0), zero()),
                Branch::new(b(1), b(2), plus()),
                Branch::new(b(2), plus3, one()),
            ],
            TOL,
        )
        .unwrap();
        let p = construct_tidier(&s, TOL).unwrap();
        assert_eq!(p.kind, ProcedureKind::ModifiedBennett);
        assert_eq!(p.steps[1].targets, vec![0, 1, 3]);
    }

    #[test]
    fn constructs_direct_tidier_for_trivial_outputs() {
        let s = spec(vec![(zero(), zero(), zero()), (plus(), zero(), plus())]);
        let p = construct_tidier(&s, TOL).unwrap();
        assert_eq!(p.kind, ProcedureKind::Direct);
    }

    #[test]
    fn no_tidier_for_nonorthogonal_inputs() {
        let s = spec(vec![(zero(), zero(), zero()), (plus(), one(), zero())]);
        match construct_tidier(&s, TOL) {
            Err(TidyError::NoTidierExists(c)) => assert!((c.tidy_residual.norm() - FRAC_1_SQRT_2).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        let s = spec(vec![(zero(), zero(), zero()), (one(), plus(), zero())]);
        assert!(matches!(construct_tidier(&s, TOL), Err(TidyError::NotReversible(_))));
    }

    #[test]
    fn verify_detects_bad_procedures() {
        let s = spec(vec![(zero(), zero(), zero()), (one(), plus(), one())]);
        let ident = TidyProcedure::empty(ProcedureKind::Bennett, 2, 2);
        let f = verify_tidier(&s, &ident, TOL).unwrap();
        assert!(f.iter().any(|x| *x < 1.0 - 1e-9));

        let misuse = bennett_procedure(&s, TOL).unwrap();
        let f = verify_tidier(&s, &misuse, TOL).unwrap();
        assert!(f[1] < 1.0 - 1e-3, "{f:?}");

        let wrong = TidyProcedure::empty(ProcedureKind::Bennett, 3, 2);
        assert_eq!(verify_tidier(&s, &wrong, TOL), Err(TidyError::RegisterMismatch));
    }

    #[test]
    fn clone_examples() {
        let f = clone_attempt(&[zero(), one()], &[zero(), one()], TOL).unwrap();
        assert!(f.iter().all(|x| (x - 1.0).abs() < 1e-12));
        let f = clone_attempt(&[plus()], &[zero(), one()], TOL).unwrap();
        assert!((f[0] - 0.5).abs() < 1e-12);
        let f = clone_attempt(&[plus()], &[plus(), minus()], TOL).unwrap();
        assert!((f[0] - 1.0).abs() < 1e-12);
        assert_eq!(clone_attempt(&[plus()], &[], TOL), Err(TidyError::EmptyBasis));
    }

    #[test]
    fn erasure_examples() {
        let s = spec(vec![(zero(), zero(), zero())]);
        let e = erasure_cost(&s, false);
        assert_eq!(e.erased_bits, 1.0);
        assert_eq!(e.landauer_cost, 1.0);
        assert_eq!(e.branch_entropy_bound.len(), 1);
        assert!(e.branch_entropy_bound[0].abs() < 1e-12);
        assert_eq!(erasure_cost(&s, true).erased_bits, 0.0);

        let layout = RegisterLayout::new(2, 8).unwrap();
        let s = ComputationSpec::new(
            layout,
            None,
            vec![Branch::new(zero(), one(), StateVector::basis(8, 5))],
            TOL,
        )
        .unwrap();
        let e = erasure_cost(&s, false);
        assert_eq!(e.erased_bits, 3.0);
        assert_eq!(e.landauer_cost, 3.0);
    }
}
