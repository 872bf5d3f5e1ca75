//! Quantum-state machinery: pure states, density matrices, unitaries,
//! measurements, Kraus channels, purification and the Schmidt form.
//!
//! Multipartite states carry `subsystem_dims`. The leftmost factor is
//! subsystem A and owns the slowest-varying index of the matrix.

mod channel;
mod decompose;
mod lemmas;

pub use channel::{
    apply_operation, measure, measure_nonselective, outcome_probabilities, MeasurementOutcome, MeasurementSet,
    QuantumOperation,
};
pub use decompose::{eig_hermitian, purify, schmidt_decompose, thermal_state, Schmidt, Spectrum};
pub use lemmas::{cyclic_averaging, projector_unitary_mixture, CyclicAverage, ProjectorMixture};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, C64, ONE, ZERO};
use crate::tolerance;

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Accepts vectors within `tolerance::RENORMALIZE` of unit norm and
    /// renormalizes them; anything further off is rejected.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("empty state vector".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > tolerance::RENORMALIZE {
            return Err(Error::Domain(format!("state vector has squared norm {norm_sq}")));
        }
        let n = norm_sq.sqrt();
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z / n).collect() })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n = linalg::norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    /// `(|00⟩ + |11⟩)/√2`
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { amplitudes: vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)] }
    }

    /// `|+⟩`
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { amplitudes: vec![C64::new(h, 0.0), C64::new(h, 0.0)] }
    }

    /// `|−⟩`
    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { amplitudes: vec![C64::new(h, 0.0), C64::new(-h, 0.0)] }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState { amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes) }
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        linalg::inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|ψ⟩⟨ψ|`
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_valid(ComplexMatrix::projector(&self.amplitudes), None)
    }
}

/// Positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    subsystem_dims: Option<Vec<usize>>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension("density matrix must be square".into()));
        }
        if matrix.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("non-finite density matrix entry".into()));
        }
        let defect = matrix.hermiticity_defect();
        if defect > tolerance::HERM {
            return Err(Error::Domain(format!("density matrix is not Hermitian (defect {defect:.3e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tolerance::NORM || tr.im.abs() > tolerance::NORM {
            return Err(Error::Domain(format!("density matrix trace is {tr}, expected 1")));
        }
        let eig = matrix.eig_hermitian()?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -tolerance::EIG {
            return Err(Error::Domain(format!("density matrix has negative eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix, subsystem_dims: None })
    }

    /// Skips validation; callers guarantee the result of a CPTP map.
    pub(crate) fn from_valid(matrix: ComplexMatrix, subsystem_dims: Option<Vec<usize>>) -> Self {
        Self { matrix, subsystem_dims }
    }

    pub fn with_subsystems(mut self, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != self.dim() {
            return Err(Error::Dimension(format!(
                "subsystem dims {dims:?} do not multiply to {}",
                self.dim()
            )));
        }
        self.subsystem_dims = Some(dims);
        Ok(self)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_valid(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64), None)
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        PureState::basis(dim, index).density()
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag(probs))
    }

    /// `Σ pᵢ ρᵢ`; all components must share a dimension.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Domain("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        let mut total = 0.0;
        for (p, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::Dimension("mixture components differ in dimension".into()));
            }
            if *p < 0.0 {
                return Err(Error::Domain("negative mixture weight".into()));
            }
            total += p;
            acc = &acc + &rho.matrix.scale_real(*p);
        }
        if (total - 1.0).abs() > tolerance::NORM {
            return Err(Error::Domain(format!("mixture weights sum to {total}")));
        }
        Ok(Self::from_valid(acc, first.1.subsystem_dims.clone()))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn subsystem_dims(&self) -> Option<&[usize]> {
        self.subsystem_dims.as_deref()
    }

    /// Eigenvalues, descending, with numerical dust clamped to zero.
    pub fn spectrum(&self) -> Vec<f64> {
        let eig = jacobi(&self.matrix);
        eig.values.into_iter().map(|l| l.max(0.0)).collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() < tolerance::RECON
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.subsystem_dims.clone().unwrap_or_else(|| vec![self.dim()]);
        dims.extend(other.subsystem_dims.clone().unwrap_or_else(|| vec![other.dim()]));
        Self::from_valid(self.matrix.kron(&other.matrix), Some(dims))
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// `⟨i|ρ|i⟩` for every computational basis vector.
    pub fn diagonal_probs(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    fn dims_or_err(&self) -> Result<&[usize]> {
        self.subsystem_dims
            .as_deref()
            .ok_or_else(|| Error::Dimension("state has no subsystem decomposition".into()))
    }
}

// The stored matrix is Hermitian by construction, so the eigensolver's
// validation step is unnecessary here.
fn jacobi(m: &ComplexMatrix) -> linalg::HermitianEigen {
    m.eig_hermitian().unwrap_or_else(|_| {
        let sym = &(m + &m.adjoint()).scale_real(0.5);
        sym.eig_hermitian().expect("symmetrized matrix is Hermitian")
    })
}

/// Unitary matrix, `U U† = I` within `tolerance::UNIT`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.unitarity_defect();
        if defect > tolerance::UNIT {
            return Err(Error::Domain(format!("matrix is not unitary (defect {defect:.3e})")));
        }
        Ok(Self(matrix))
    }

    pub(crate) fn from_valid(matrix: ComplexMatrix) -> Self {
        Self(matrix)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self(ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).expect("2x2"))
    }

    pub fn pauli_x() -> Self {
        Self(ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2"))
    }

    pub fn pauli_y() -> Self {
        Self(ComplexMatrix::new(2, 2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).expect("2x2"))
    }

    pub fn pauli_z() -> Self {
        Self(ComplexMatrix::diag(&[1.0, -1.0]))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        Self(self.0.adjoint())
    }

    pub fn then(&self, next: &UnitaryMatrix) -> UnitaryMatrix {
        Self(&next.0 * &self.0)
    }
}

/// Hermitian operator generating the dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian(ComplexMatrix);

impl Hamiltonian {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.is_hermitian(tolerance::HERM) {
            return Err(Error::Domain("Hamiltonian must be Hermitian".into()));
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Which half of a bipartite state survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

pub fn tensor_product(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    a.tensor(b)
}

/// Traces out one half of a bipartite state.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    let dims = rho.dims_or_err()?;
    if dims.len() != 2 {
        return Err(Error::Dimension(format!("expected a bipartite state, got dims {dims:?}")));
    }
    match keep {
        Subsystem::A => reduce(rho, &[0]),
        Subsystem::B => reduce(rho, &[1]),
    }
}

/// Keeps the listed subsystems (in the given order) and traces out the rest.
pub fn reduce(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims_or_err()?.to_vec();
    let mut seen = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() || seen[k] {
            return Err(Error::Dimension(format!("invalid subsystem selection {keep:?} for dims {dims:?}")));
        }
        seen[k] = true;
    }
    if keep.is_empty() {
        return Err(Error::Dimension("must keep at least one subsystem".into()));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !seen[*i]).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    let compose = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut digits = vec![0usize; dims.len()];
        let mut rem = kept_idx;
        for (pos, &k) in keep.iter().enumerate().rev() {
            digits[k] = rem % kept_dims[pos];
            rem /= kept_dims[pos];
        }
        let mut rem = traced_idx;
        for (pos, &k) in traced.iter().enumerate().rev() {
            digits[k] = rem % traced_dims[pos];
            rem /= traced_dims[pos];
        }
        digits.iter().zip(&dims).fold(0, |acc, (&d, &n)| acc * n + d)
    };

    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for t in 0..dt {
        let full: Vec<usize> = (0..dk).map(|i| compose(i, t)).collect();
        for i in 0..dk {
            for j in 0..dk {
                out[(i, j)] += m[(full[i], full[j])];
            }
        }
    }
    Ok(DensityMatrix::from_valid(out, Some(kept_dims)))
}

/// Reorders subsystems; `order[i]` names the old subsystem placed at slot i.
pub fn permute_subsystems(rho: &DensityMatrix, order: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims_or_err()?.to_vec();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..dims.len()).collect::<Vec<_>>() {
        return Err(Error::Dimension(format!("{order:?} is not a permutation of {} subsystems", dims.len())));
    }
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let d = rho.dim();
    // new index -> old index
    let map: Vec<usize> = (0..d)
        .map(|new_idx| {
            let mut digits = vec![0usize; dims.len()];
            let mut rem = new_idx;
            for slot in (0..order.len()).rev() {
                digits[order[slot]] = rem % new_dims[slot];
                rem /= new_dims[slot];
            }
            digits.iter().zip(&dims).fold(0, |acc, (&x, &n)| acc * n + x)
        })
        .collect();
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(d, d, |r, c| m[(map[r], map[c])]);
    Ok(DensityMatrix::from_valid(out, Some(new_dims)))
}

/// `U ρ U†`
pub fn apply_unitary(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(Error::Dimension(format!("unitary dim {} vs state dim {}", u.dim(), rho.dim())));
    }
    Ok(DensityMatrix::from_valid(u.matrix().conjugate(rho.matrix())?, rho.subsystem_dims.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_of_maximally_mixed() {
        let half = DensityMatrix::maximally_mixed(2);
        let t = tensor_product(&half, &half);
        assert!(t.max_abs_diff(&DensityMatrix::maximally_mixed(4)) < 1e-15);
        assert_eq!(t.subsystem_dims(), Some(&[2, 2][..]));
    }

    #[test]
    fn tensor_of_pure_product() {
        let t = DensityMatrix::basis_state(2, 0).tensor(&DensityMatrix::basis_state(2, 1));
        assert!(t.max_abs_diff(&DensityMatrix::basis_state(4, 1)) < 1e-15);
    }

    #[test]
    fn araki_lieb_fixture_state() {
        let t = DensityMatrix::basis_state(2, 0).tensor(&DensityMatrix::maximally_mixed(2));
        let expected = DensityMatrix::diagonal(&[0.5, 0.5, 0.0, 0.0]).unwrap();
        assert!(t.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let ket01 = DensityMatrix::basis_state(4, 1).with_subsystems(vec![2, 2]).unwrap();
        let b = partial_trace(&ket01, Subsystem::B).unwrap();
        assert!(b.max_abs_diff(&DensityMatrix::basis_state(2, 1)) < 1e-15);

        let bell = PureState::bell().density().with_subsystems(vec![2, 2]).unwrap();
        let a = partial_trace(&bell, Subsystem::A).unwrap();
        assert!(a.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-15);

        let rho = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let sigma = DensityMatrix::maximally_mixed(3);
        let back = partial_trace(&rho.tensor(&sigma), Subsystem::A).unwrap();
        assert!(back.max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn partial_trace_needs_dims() {
        let r = DensityMatrix::maximally_mixed(4);
        assert!(matches!(partial_trace(&r, Subsystem::A), Err(Error::Dimension(_))));
    }

    #[test]
    fn hadamard_makes_plus() {
        let out = apply_unitary(&DensityMatrix::basis_state(2, 0), &UnitaryMatrix::hadamard()).unwrap();
        assert!(out.max_abs_diff(&PureState::plus().density()) < 1e-15);
        assert!(apply_unitary(&out, &UnitaryMatrix::identity(3)).is_err());
    }

    #[test]
    fn rejects_invalid_density() {
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[0.5, 0.6])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[1.5, -0.5])).is_err());
        let nonherm = ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(nonherm).is_err());
        // dust below the clamp threshold is accepted
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[1.0 + 5e-10, -5e-10])).is_ok());
    }

    #[test]
    fn pure_state_normalization() {
        let nearly = PureState::from_real(&[1.0 + 1e-7, 0.0]).unwrap();
        assert!((linalg::norm(nearly.amplitudes()) - 1.0).abs() < 1e-15);
        // the unnormalized ½(|00⟩+|11⟩) form is rejected
        assert!(PureState::from_real(&[0.5, 0.0, 0.0, 0.5]).is_err());
    }

    #[test]
    fn permutation_swaps_factors() {
        let a = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let b = DensityMatrix::maximally_mixed(3);
        let ab = a.tensor(&b);
        let ba = permute_subsystems(&ab, &[1, 0]).unwrap();
        assert!(ba.max_abs_diff(&b.tensor(&a)) < 1e-15);
    }

    #[test]
    fn reduce_tripartite() {
        let a = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let b = PureState::plus().density();
        let c = DensityMatrix::maximally_mixed(2);
        let abc = a.tensor(&b).tensor(&c);
        let ac = reduce(&abc, &[0, 2]).unwrap();
        assert!(ac.max_abs_diff(&a.tensor(&c)) < 1e-15);
        let ca = reduce(&abc, &[2, 0]).unwrap();
        assert!(ca.max_abs_diff(&c.tensor(&a)) < 1e-15);
    }
}
