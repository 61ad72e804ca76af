//! Dense state-vector simulation and the computation unitary
//! `U_C: |i⟩|Aux0⟩ → |O(i)⟩|Aux(i)⟩` built from a branch specification.
//!
//! Register convention: the output register is always the first tensor
//! factor and the auxiliary register the second.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    complete_to_unitary, reduced_eigenvalues, schmidt_coefficients, Keep, LinalgError, StateVector, UnitaryMatrix,
    DEFAULT_TOLERANCE, MAX_STATE_DIM,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsimError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("register dimensions must be at least 1 (out_dim {out_dim}, aux_dim {aux_dim})")]
    InvalidLayout { out_dim: usize, aux_dim: usize },
    #[error("total dimension {dim} exceeds capacity {cap}")]
    CapacityExceeded { dim: usize, cap: usize },
    #[error("spec has no branches")]
    NoBranches,
    #[error("{location}: expected dimension {expected}, found {found}")]
    StateDimension {
        location: String,
        expected: usize,
        found: usize,
    },
    #[error("{location}: {source}")]
    InvalidState { location: String, source: LinalgError },
    #[error("branches {i} and {j} have the same input state")]
    DuplicateInputs { i: usize, j: usize },
    #[error("register dimensions {dims:?} do not multiply to state dimension {found}")]
    FactorMismatch { dims: Vec<usize>, found: usize },
    #[error("invalid register targets {0:?}")]
    InvalidTargets(Vec<usize>),
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
    #[error("spec file: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub out_dim: usize,
    pub aux_dim: usize,
}

impl RegisterLayout {
    pub fn new(out_dim: usize, aux_dim: usize) -> Result<Self, QsimError> {
        if out_dim == 0 || aux_dim == 0 {
            return Err(QsimError::InvalidLayout { out_dim, aux_dim });
        }
        let dim = out_dim
            .checked_mul(aux_dim)
            .filter(|&d| d <= MAX_STATE_DIM)
            .ok_or(QsimError::CapacityExceeded {
                dim: out_dim.saturating_mul(aux_dim),
                cap: MAX_STATE_DIM,
            })?;
        debug_assert!(dim >= 1);
        Ok(Self { out_dim, aux_dim })
    }

    pub fn total_dim(&self) -> usize {
        self.out_dim * self.aux_dim
    }

    pub fn as_pair(&self) -> (usize, usize) {
        (self.out_dim, self.aux_dim)
    }
}

/// One branch of a computation: `|input⟩|Aux0⟩ → |output⟩|aux⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub input: StateVector,
    pub output: StateVector,
    pub aux: StateVector,
}

impl Branch {
    pub fn new(input: StateVector, output: StateVector, aux: StateVector) -> Self {
        Self { input, output, aux }
    }

    /// `|output⟩ ⊗ |aux⟩`.
    pub fn joint_output(&self) -> StateVector {
        tensor(&self.output, &self.aux)
    }
}

/// Branch mapping with its register layout and fiducial `|Aux0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputationSpec {
    layout: RegisterLayout,
    aux0: StateVector,
    branches: Vec<Branch>,
    tolerance: Option<f64>,
}

impl ComputationSpec {
    /// Validates dimensions, normalization and pairwise-distinct inputs.
    /// `aux0` defaults to the basis state of index 0.
    pub fn new(
        layout: RegisterLayout,
        aux0: Option<StateVector>,
        branches: Vec<Branch>,
        tol: f64,
    ) -> Result<Self, QsimError> {
        let layout = RegisterLayout::new(layout.out_dim, layout.aux_dim)?;
        if branches.is_empty() {
            return Err(QsimError::NoBranches);
        }
        let aux0 = aux0.unwrap_or_else(|| StateVector::basis(layout.aux_dim, 0));
        check_state(Location::Aux0, &aux0, layout.aux_dim, tol)?;
        for (k, b) in branches.iter().enumerate() {
            check_state(Location::Branch(k, "input"), &b.input, layout.out_dim, tol)?;
            check_state(Location::Branch(k, "output"), &b.output, layout.out_dim, tol)?;
            check_state(Location::Branch(k, "aux"), &b.aux, layout.aux_dim, tol)?;
        }
        for i in 0..branches.len() {
            for j in i + 1..branches.len() {
                if branches[i].input.fidelity(&branches[j].input)? >= 1.0 - tol {
                    return Err(QsimError::DuplicateInputs { i, j });
                }
            }
        }
        Ok(Self {
            layout,
            aux0,
            branches,
            tolerance: None,
        })
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn aux0(&self) -> &StateVector {
        &self.aux0
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Tolerance carried by the spec file, if any.
    pub fn tolerance(&self) -> Option<f64> {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tol: Option<f64>) -> Self {
        self.tolerance = tol;
        self
    }

    /// `|input_k⟩ ⊗ |Aux0⟩` for every branch.
    pub fn joint_inputs(&self) -> Vec<StateVector> {
        self.branches.iter().map(|b| tensor(&b.input, &self.aux0)).collect()
    }

    pub fn joint_outputs(&self) -> Vec<StateVector> {
        self.branches.iter().map(Branch::joint_output).collect()
    }

    pub fn from_json(text: &str) -> Result<Self, QsimError> {
        Self::from_json_with(text, None, DEFAULT_TOLERANCE)
    }

    /// Parses a spec file, validating states at `tol_override`, else the
    /// file's own tolerance, else `fallback`.
    pub fn from_json_with(text: &str, tol_override: Option<f64>, fallback: f64) -> Result<Self, QsimError> {
        let raw: SpecFile = serde_json::from_str(text).map_err(|e| QsimError::Json(e.to_string()))?;
        for t in [raw.tolerance, tol_override, Some(fallback)].into_iter().flatten() {
            if !(t.is_finite() && t > 0.0) {
                return Err(QsimError::InvalidTolerance(t));
            }
        }
        let tol = tol_override.or(raw.tolerance).unwrap_or(fallback);
        let layout = RegisterLayout::new(raw.layout.out_dim, raw.layout.aux_dim)?;
        let aux0 = raw
            .aux0
            .map(|a| to_state(Location::Aux0, a, layout.aux_dim, tol))
            .transpose()?;
        let branches = raw
            .branches
            .into_iter()
            .enumerate()
            .map(|(k, b)| {
                Ok(Branch::new(
                    to_state(Location::Branch(k, "input"), b.input, layout.out_dim, tol)?,
                    to_state(Location::Branch(k, "output"), b.output, layout.out_dim, tol)?,
                    to_state(Location::Branch(k, "aux"), b.aux, layout.aux_dim, tol)?,
                ))
            })
            .collect::<Result<Vec<_>, QsimError>>()?;
        Ok(Self::new(layout, aux0, branches, tol)?.with_tolerance(raw.tolerance))
    }

    pub fn to_json(&self) -> String {
        let amps = |s: &StateVector| s.amplitudes().iter().map(|a| [a.re, a.im]).collect();
        let file = SpecFile {
            layout: self.layout,
            aux0: Some(amps(&self.aux0)),
            branches: self
                .branches
                .iter()
                .map(|b| BranchFile {
                    input: amps(&b.input),
                    output: amps(&b.output),
                    aux: amps(&b.aux),
                })
                .collect(),
            tolerance: self.tolerance,
        };
        serde_json::to_string_pretty(&file).expect("spec serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    layout: RegisterLayout,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aux0: Option<Vec<[f64; 2]>>,
    branches: Vec<BranchFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchFile {
    input: Vec<[f64; 2]>,
    output: Vec<[f64; 2]>,
    aux: Vec<[f64; 2]>,
}

#[derive(Clone, Copy)]
enum Location {
    Aux0,
    Branch(usize, &'static str),
}

impl Location {
    fn describe(self) -> String {
        match self {
            Location::Aux0 => "aux0".to_string(),
            Location::Branch(k, field) => format!("branch {k} {field}"),
        }
    }
}

fn to_state(at: Location, amps: Vec<[f64; 2]>, dim: usize, tol: f64) -> Result<StateVector, QsimError> {
    if amps.len() != dim {
        return Err(QsimError::StateDimension {
            location: at.describe(),
            expected: dim,
            found: amps.len(),
        });
    }
    StateVector::new(amps.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(), tol).map_err(|source| {
        QsimError::InvalidState {
            location: at.describe(),
            source,
        }
    })
}

fn check_state(at: Location, s: &StateVector, dim: usize, tol: f64) -> Result<(), QsimError> {
    if s.dim() != dim {
        return Err(QsimError::StateDimension {
            location: at.describe(),
            expected: dim,
            found: s.dim(),
        });
    }
    if (s.norm() - 1.0).abs() > tol {
        return Err(QsimError::InvalidState {
            location: at.describe(),
            source: LinalgError::NotNormalized { norm: s.norm() },
        });
    }
    Ok(())
}

/// Eigenvalues of a reduced density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySpectrum {
    pub eigenvalues: Vec<f64>,
}

pub fn reduced_spectrum(s: &StateVector, layout: RegisterLayout, keep: Keep) -> Result<DensitySpectrum, QsimError> {
    Ok(DensitySpectrum {
        eigenvalues: reduced_eigenvalues(s, layout.as_pair(), keep)?,
    })
}

/// Kronecker product; the first factor is the slow index.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let amps = a
        .amplitudes()
        .iter()
        .flat_map(|x| b.amplitudes().iter().map(move |y| x * y))
        .collect();
    StateVector::from_raw(amps)
}

/// Tensor product of several factors, left to right.
pub fn tensor_all(parts: &[&StateVector]) -> StateVector {
    let mut it = parts.iter();
    let first = (*it.next().expect("at least one factor")).clone();
    it.fold(first, |acc, s| tensor(&acc, s))
}

pub fn apply(u: &UnitaryMatrix, s: &StateVector) -> Result<StateVector, QsimError> {
    if u.dim() != s.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: u.dim(),
            found: s.dim(),
        }
        .into());
    }
    Ok(StateVector::from_raw(u.apply_slice(s.amplitudes())))
}

/// Applies `u` to the registers `targets` (in the given order) of a state
/// factored as `dims`, acting as the identity on the rest.
pub fn apply_on(
    u: &UnitaryMatrix,
    s: &StateVector,
    dims: &[usize],
    targets: &[usize],
) -> Result<StateVector, QsimError> {
    let total: usize = dims.iter().product();
    if total != s.dim() {
        return Err(QsimError::FactorMismatch {
            dims: dims.to_vec(),
            found: s.dim(),
        });
    }
    let mut seen = vec![false; dims.len()];
    for &t in targets {
        if t >= dims.len() || std::mem::replace(&mut seen[t], true) {
            return Err(QsimError::InvalidTargets(targets.to_vec()));
        }
    }
    let sub: usize = targets.iter().map(|&t| dims[t]).product();
    if sub != u.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: sub,
            found: u.dim(),
        }
        .into());
    }

    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    // Offset of every sub-register index within the full vector.
    let mut sub_offsets = vec![0usize; sub];
    for (idx, off) in sub_offsets.iter_mut().enumerate() {
        let mut rem = idx;
        for &t in targets.iter().rev() {
            *off += (rem % dims[t]) * strides[t];
            rem /= dims[t];
        }
    }
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !seen[*k]).collect();
    let n_rest: usize = rest.iter().map(|&k| dims[k]).product();

    let src = s.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    let mut gathered = vec![Complex64::new(0.0, 0.0); sub];
    for r in 0..n_rest {
        let mut base = 0;
        let mut rem = r;
        for &k in rest.iter().rev() {
            base += (rem % dims[k]) * strides[k];
            rem /= dims[k];
        }
        for (g, off) in gathered.iter_mut().zip(&sub_offsets) {
            *g = src[base + off];
        }
        for (v, off) in u.apply_slice(&gathered).into_iter().zip(&sub_offsets) {
            out[base + off] = v;
        }
    }
    Ok(StateVector::from_raw(out))
}

/// `U_C` with `U_C (input_k ⊗ aux0) = output_k ⊗ aux_k`, canonically completed.
/// Fails with a Gram mismatch exactly when the pairwise reversibility
/// condition `⟨i|j⟩ = ⟨O(i)|O(j)⟩⟨Aux(i)|Aux(j)⟩` is violated beyond `tol`.
pub fn build_computation_unitary(spec: &ComputationSpec, tol: f64) -> Result<UnitaryMatrix, QsimError> {
    let pairs: Vec<(StateVector, StateVector)> = spec.joint_inputs().into_iter().zip(spec.joint_outputs()).collect();
    Ok(complete_to_unitary(&pairs, spec.layout.total_dim(), tol)?)
}

/// Separable across the layout cut iff the largest Schmidt coefficient is at
/// least `1 − tol`.
pub fn is_separable(s: &StateVector, layout: RegisterLayout, tol: f64) -> Result<bool, QsimError> {
    let coeffs = schmidt_coefficients(s, layout.as_pair())?;
    Ok(coeffs.first().copied().unwrap_or(0.0) >= 1.0 - tol)
}
