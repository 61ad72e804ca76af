//! Dense complex linear algebra: states, unitaries, Gram matrices, unitary
//! completion from partial state mappings and Schmidt entropies.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Complex amplitude / inner-product value.
pub type ComplexScalar = Complex64;

/// Global default for every approximate-equality predicate in the crate.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Largest state dimension accepted anywhere.
pub const MAX_STATE_DIM: usize = 1 << 20;

/// Largest dimension for which a dense unitary is materialized.
pub const MAX_DENSE_DIM: usize = 1 << 12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state list is empty")]
    EmptyList,
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("dimension {dim} exceeds capacity {cap}")]
    CapacityExceeded { dim: usize, cap: usize },
    #[error("amplitudes must be finite")]
    NonFinite,
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("Gram mismatch at pair ({i}, {j}): |delta| = {:.12}", .delta.norm())]
    GramMismatch { i: usize, j: usize, delta: ComplexScalar },
}

/// Normalized complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Validates finiteness and unit norm within `tol`.
    pub fn new(amps: Vec<Complex64>, tol: f64) -> Result<Self, LinalgError> {
        check_dim(amps.len(), MAX_STATE_DIM)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let norm = norm(&amps);
        if (norm - 1.0).abs() > tol {
            return Err(LinalgError::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self, LinalgError> {
        check_dim(amps.len(), MAX_STATE_DIM)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let n = norm(&amps);
        if n == 0.0 {
            return Err(LinalgError::NotNormalized { norm: 0.0 });
        }
        Ok(Self {
            amps: amps.into_iter().map(|a| a / n).collect(),
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self, LinalgError> {
        Self::new(
            amps.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
            DEFAULT_TOLERANCE,
        )
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amps: vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        }
    }

    /// `(|0⟩ − |1⟩)/√2`.
    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amps: vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        }
    }

    pub(crate) fn from_raw(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// `|⟨self|other⟩|²`; insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64, LinalgError> {
        Ok(inner_product(self, other)?.norm_sqr())
    }
}

/// Square complex matrix with `U†U = I` within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    /// Row-major entries; rejected if the unitarity deviation exceeds `tol`.
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>, tol: f64) -> Result<Self, LinalgError> {
        check_dim(dim, MAX_DENSE_DIM)?;
        if entries.len() != dim * dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let u = Self { dim, entries };
        let deviation = u.unitarity_deviation();
        if deviation > tol {
            return Err(LinalgError::NotUnitary { deviation });
        }
        Ok(u)
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![ZERO; dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = ONE;
        }
        Self { dim, entries }
    }

    /// Builds `Σ_m |outs_m⟩⟨ins_m|` from two orthonormal bases of equal length.
    fn from_basis_map(dim: usize, ins: &[Vec<Complex64>], outs: &[Vec<Complex64>]) -> Self {
        let mut entries = vec![ZERO; dim * dim];
        for (u, v) in ins.iter().zip(outs) {
            for (r, vr) in v.iter().enumerate() {
                if *vr == ZERO {
                    continue;
                }
                let row = &mut entries[r * dim..(r + 1) * dim];
                for (c, uc) in u.iter().enumerate() {
                    row[c] += vr * uc.conj();
                }
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn row_major(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        Self { dim: d, entries }
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<Self, LinalgError> {
        if self.dim != rhs.dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == ZERO {
                    continue;
                }
                let out = &mut entries[r * d..(r + 1) * d];
                for (o, b) in out.iter_mut().zip(&rhs.entries[k * d..(k + 1) * d]) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Max-entry deviation of `U†U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.entries[k * d + i].conj() * self.entries[k * d + j];
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    pub(crate) fn apply_slice(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        (0..d)
            .map(|r| {
                self.entries[r * d..(r + 1) * d]
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

/// Matrix of pairwise inner products `G[i][j] = ⟨s_i|s_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    /// Largest `|self[i][j] − other[i][j]|` and where it occurs (first in
    /// row-major order on ties, upper triangle only).
    pub fn max_deviation(&self, other: &GramMatrix) -> Option<(usize, usize, Complex64)> {
        if self.n != other.n {
            return None;
        }
        let mut best: Option<(usize, usize, Complex64)> = None;
        for i in 0..self.n {
            for j in i..self.n {
                let delta = self.entry(i, j) - other.entry(i, j);
                if best.is_none_or(|(_, _, b)| delta.norm() > b.norm()) {
                    best = Some((i, j, delta));
                }
            }
        }
        best
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| (self.entry(i, j) - self.entry(j, i).conj()).norm() <= tol))
    }
}

fn check_dim(dim: usize, cap: usize) -> Result<(), LinalgError> {
    if dim == 0 {
        Err(LinalgError::ZeroDimension)
    } else if dim > cap {
        Err(LinalgError::CapacityExceeded { dim, cap })
    } else {
        Ok(())
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Projects `v` onto the orthogonal complement of `basis` (two passes of
/// classical Gram-Schmidt) and returns the coefficients removed.
fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut coeffs = vec![ZERO; basis.len()];
    for _ in 0..2 {
        for (m, b) in basis.iter().enumerate() {
            let c = dot(b, v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
            coeffs[m] += c;
        }
    }
    coeffs
}

/// `Σ_k conj(a_k)·b_k`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<ComplexScalar, LinalgError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(dot(&a.amps, &b.amps))
}

pub fn gram(states: &[StateVector]) -> Result<GramMatrix, LinalgError> {
    let first = states.first().ok_or(LinalgError::EmptyList)?;
    for s in states {
        if s.dim() != first.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: first.dim(),
                found: s.dim(),
            });
        }
    }
    let n = states.len();
    let mut entries = vec![ZERO; n * n];
    for i in 0..n {
        for j in i..n {
            let g = dot(&states[i].amps, &states[j].amps);
            entries[i * n + j] = g;
            entries[j * n + i] = g.conj();
        }
    }
    Ok(GramMatrix { n, entries })
}

/// Orthonormalizes `states` in input order, dropping vectors whose residual
/// norm falls below `tol`. Returns the basis and its rank.
pub fn gram_schmidt(states: &[StateVector], tol: f64) -> Result<(Vec<StateVector>, usize), LinalgError> {
    let Some(first) = states.first() else {
        return Ok((Vec::new(), 0));
    };
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for s in states {
        if s.dim() != first.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: first.dim(),
                found: s.dim(),
            });
        }
        let mut r = s.amps.clone();
        project_out(&mut r, &basis);
        let n = norm(&r);
        if n < tol {
            continue;
        }
        r.iter_mut().for_each(|x| *x /= n);
        basis.push(r);
    }
    let rank = basis.len();
    Ok((basis.into_iter().map(StateVector::from_raw).collect(), rank))
}

/// Extends an orthonormal family to a full basis of `C^dim` with
/// computational basis vectors taken in index order.
fn extend_with_basis(mut family: Vec<Vec<Complex64>>, dim: usize) -> Vec<Vec<Complex64>> {
    // Any e_k skipped below has residual < tau against the final span, so
    // dim·tau² < 1 guarantees the family reaches full rank.
    let tau = 0.5 / (dim as f64).sqrt();
    let start = family.len();
    for k in 0..dim {
        if family.len() == dim {
            break;
        }
        let mut e = vec![ZERO; dim];
        e[k] = ONE;
        project_out(&mut e, &family);
        let n = norm(&e);
        if n < tau {
            continue;
        }
        e.iter_mut().for_each(|x| *x /= n);
        family.push(e);
    }
    debug_assert_eq!(family.len(), dim, "basis extension from {start} vectors fell short");
    family
}

/// Builds a unitary `U` with `U·in_k = out_k` for every pair, completed on the
/// orthogonal complement canonically (computational basis vectors in index
/// order, orthonormalized). Fails with [`LinalgError::GramMismatch`] exactly
/// when the two Gram matrices differ beyond `tol`, the case where no such
/// unitary exists.
pub fn complete_to_unitary(
    pairs: &[(StateVector, StateVector)],
    dim: usize,
    tol: f64,
) -> Result<UnitaryMatrix, LinalgError> {
    check_dim(dim, MAX_DENSE_DIM)?;
    for (a, b) in pairs {
        for s in [a, b] {
            if s.dim() != dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
        }
    }

    if !pairs.is_empty() {
        let ins: Vec<StateVector> = pairs.iter().map(|p| p.0.clone()).collect();
        let outs: Vec<StateVector> = pairs.iter().map(|p| p.1.clone()).collect();
        if let Some((i, j, delta)) = gram(&ins)?.max_deviation(&gram(&outs)?) {
            if delta.norm() > tol {
                return Err(LinalgError::GramMismatch { i, j, delta });
            }
        }
    }

    // Orthonormalize the inputs and replay the same linear combinations on the
    // outputs. Residuals below √tol are dropped: the reproduction error they
    // leave costs at most tol in fidelity.
    let drop = tol.sqrt();
    let mut us: Vec<Vec<Complex64>> = Vec::new();
    let mut vs: Vec<Vec<Complex64>> = Vec::new();
    for (a, b) in pairs {
        let mut r_in = a.amps.clone();
        let coeffs = project_out(&mut r_in, &us);
        let n = norm(&r_in);
        if n < drop {
            continue;
        }
        let mut r_out = b.amps.clone();
        for (c, v) in coeffs.iter().zip(&vs) {
            for (x, y) in r_out.iter_mut().zip(v) {
                *x -= c * y;
            }
        }
        r_in.iter_mut().for_each(|x| *x /= n);
        r_out.iter_mut().for_each(|x| *x /= n);
        us.push(r_in);
        vs.push(r_out);
    }

    // Clean up the drift that Gram mismatches within tol leave on the images.
    let mut clean: Vec<Vec<Complex64>> = Vec::with_capacity(vs.len());
    for mut v in vs {
        project_out(&mut v, &clean);
        let n = norm(&v);
        v.iter_mut().for_each(|x| *x /= n);
        clean.push(v);
    }

    let ins = extend_with_basis(us, dim);
    let outs = extend_with_basis(clean, dim);
    Ok(UnitaryMatrix::from_basis_map(dim, &ins, &outs))
}

/// Which tensor factor of a bipartite state survives the partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Eigenvalues (descending) of the reduced density matrix of the kept factor,
/// clamped at zero.
pub fn reduced_eigenvalues(state: &StateVector, layout: (usize, usize), keep: Keep) -> Result<Vec<f64>, LinalgError> {
    let (da, db) = layout;
    if da * db != state.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: da * db,
            found: state.dim(),
        });
    }
    let amps = &state.amps;
    let rho = match keep {
        Keep::A => DMatrix::from_fn(da, da, |r, c| {
            (0..db).fold(ZERO, |acc, b| acc + amps[r * db + b] * amps[c * db + b].conj())
        }),
        Keep::B => DMatrix::from_fn(db, db, |r, c| {
            (0..da).fold(ZERO, |acc, a| acc + amps[a * db + r] * amps[a * db + c].conj())
        }),
    };
    let mut eig: Vec<f64> = rho.symmetric_eigenvalues().iter().map(|&l| l.max(0.0)).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(eig)
}

/// Schmidt coefficients across the `(dimA, dimB)` cut, descending.
pub fn schmidt_coefficients(state: &StateVector, layout: (usize, usize)) -> Result<Vec<f64>, LinalgError> {
    let keep = if layout.0 <= layout.1 { Keep::A } else { Keep::B };
    Ok(reduced_eigenvalues(state, layout, keep)?
        .into_iter()
        .map(f64::sqrt)
        .collect())
}

/// Von Neumann entropy in bits of the kept factor's reduced density matrix.
pub fn schmidt_entropy(state: &StateVector, layout: (usize, usize), keep: Keep) -> Result<f64, LinalgError> {
    let eig = reduced_eigenvalues(state, layout, keep)?;
    let h = eig.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum::<f64>();
    Ok(h.max(0.0))
}

/// Haar-random unitary via Gram-Schmidt on a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> UnitaryMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        project_out(&mut v, &cols);
        let n = norm(&v);
        if n < 1e-6 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= n);
        cols.push(v);
    }
    let mut entries = vec![ZERO; dim * dim];
    for (c, col) in cols.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            entries[r * dim + c] = *x;
        }
    }
    UnitaryMatrix { dim, entries }
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(amps).expect("gaussian sample is nonzero")
}
