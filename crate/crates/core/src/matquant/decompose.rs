use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::tolerance;

use super::{DensityMatrix, Hamiltonian, PureState, UnitaryMatrix};

/// Eigenvalues in descending order with the eigenvectors as unitary columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: UnitaryMatrix,
}

pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Spectrum> {
    let eig = m.eig_hermitian()?;
    Ok(Spectrum { values: eig.values, vectors: UnitaryMatrix::from_valid(eig.vectors) })
}

/// Canonical purification `Σ_i √λ_i |i⟩_R |v_i⟩_Q` on `R ⊗ Q`, both of
/// dimension `d`. The reference system is the left factor.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let d = rho.dim();
    let eig = rho.matrix().eig_hermitian().expect("density matrices are Hermitian");
    let mut amps = vec![ZERO; d * d];
    for (i, &lambda) in eig.values.iter().enumerate() {
        let w = lambda.max(0.0).sqrt();
        if w == 0.0 {
            continue;
        }
        for q in 0..d {
            amps[i * d + q] = eig.vectors[(q, i)] * w;
        }
    }
    PureState::normalized(amps).expect("purification of a unit-trace state has unit norm")
}

/// Schmidt form `|ψ⟩ = Σ_i c_i |a_i⟩|b_i⟩`, coefficients descending and
/// strictly positive.
#[derive(Debug, Clone)]
pub struct Schmidt {
    pub coefficients: Vec<f64>,
    pub basis_a: Vec<Vec<C64>>,
    pub basis_b: Vec<Vec<C64>>,
}

impl Schmidt {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reconstruct(&self) -> Vec<C64> {
        let da = self.basis_a.first().map_or(0, Vec::len);
        let db = self.basis_b.first().map_or(0, Vec::len);
        let mut out = vec![ZERO; da * db];
        for ((c, a), b) in self.coefficients.iter().zip(&self.basis_a).zip(&self.basis_b) {
            for i in 0..da {
                for j in 0..db {
                    out[i * db + j] += a[i] * b[j] * *c;
                }
            }
        }
        out
    }
}

pub fn schmidt_decompose(psi: &PureState, dims: [usize; 2]) -> Result<Schmidt> {
    let [da, db] = dims;
    if da == 0 || db == 0 || da * db != psi.dim() {
        return Err(Error::Dimension(format!("dims {dims:?} do not factor state of dim {}", psi.dim())));
    }
    let psi = PureState::new(psi.amplitudes().to_vec())?;
    let amp = ComplexMatrix::new(da, db, psi.amplitudes().to_vec())?;
    // ρ_A = M M†
    let rho_a = &amp * &amp.adjoint();
    let eig = rho_a.eig_hermitian()?;
    let mut out = Schmidt { coefficients: Vec::new(), basis_a: Vec::new(), basis_b: Vec::new() };
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= tolerance::EIG {
            continue;
        }
        let c = lambda.sqrt();
        let a = eig.vector(k);
        // b_j = (1/c) Σ_i conj(a_i) M_ij
        let b: Vec<C64> = (0..db).map(|j| (0..da).map(|i| a[i].conj() * amp[(i, j)]).sum::<C64>() / c).collect();
        out.coefficients.push(c);
        out.basis_a.push(a);
        out.basis_b.push(b);
    }
    Ok(out)
}

/// Gibbs state `e^{−βH} / tr e^{−βH}`.
pub fn thermal_state(h: &Hamiltonian, beta: f64) -> Result<DensityMatrix> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("inverse temperature {beta} must be finite and nonnegative")));
    }
    let eig = h.matrix().eig_hermitian()?;
    let ground = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = eig.values.iter().map(|&e| (-beta * (e - ground)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let normalized = crate::linalg::HermitianEigen {
        values: weights.iter().map(|w| w / z).collect(),
        vectors: eig.vectors,
    };
    Ok(DensityMatrix::from_valid(normalized.reconstruct(), None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matquant::{partial_trace, Subsystem};

    #[test]
    fn paper_mixture_eigenvalues() {
        let p: f64 = 0.5;
        let m = ComplexMatrix::from_real(2, 2, &[p + (1.0 - p) / 2.0, (1.0 - p) / 2.0, (1.0 - p) / 2.0, (1.0 - p) / 2.0]).unwrap();
        let s = eig_hermitian(&m).unwrap();
        let root = (1.0 + 2.0 * p * p - 2.0 * p).sqrt();
        assert!((s.values[0] - (1.0 + root) / 2.0).abs() < 1e-12);
        assert!((s.values[1] - (1.0 - root) / 2.0).abs() < 1e-12);
        assert!((s.values[0] - 0.853_553_390_593_273_8).abs() < 1e-12);
    }

    #[test]
    fn purify_examples() {
        let pure = purify(&DensityMatrix::basis_state(2, 0));
        assert!((pure.amplitudes()[0].norm() - 1.0).abs() < 1e-12);

        let mixed = purify(&DensityMatrix::maximally_mixed(2));
        let rho = mixed.density().with_subsystems(vec![2, 2]).unwrap();
        let q = partial_trace(&rho, Subsystem::B).unwrap();
        assert!(q.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-12);
        let sch = schmidt_decompose(&mixed, [2, 2]).unwrap();
        assert_eq!(sch.rank(), 2);
        assert!((sch.coefficients[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn schmidt_examples() {
        let ket01 = PureState::basis(4, 1);
        let s = schmidt_decompose(&ket01, [2, 2]).unwrap();
        assert_eq!(s.coefficients.len(), 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);

        let bell = schmidt_decompose(&PureState::bell(), [2, 2]).unwrap();
        assert_eq!(bell.rank(), 2);
        for c in &bell.coefficients {
            assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }
        let back = bell.reconstruct();
        for (x, y) in back.iter().zip(PureState::bell().amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }

        assert!(matches!(schmidt_decompose(&PureState::bell(), [3, 2]), Err(Error::Dimension(_))));
    }

    #[test]
    fn thermal_examples() {
        let h = Hamiltonian::new(ComplexMatrix::diag(&[0.0, 1.0])).unwrap();
        let hot = thermal_state(&h, 0.0).unwrap();
        assert!(hot.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-15);

        let warm = thermal_state(&h, 1.0).unwrap();
        let p0 = 1.0 / (1.0 + (-1.0f64).exp());
        assert!((warm.matrix()[(0, 0)].re - p0).abs() < 1e-12);
        assert!((p0 - 0.731_058_578_630_004_9).abs() < 1e-12);

        let cold = thermal_state(&h, 200.0).unwrap();
        assert!(cold.max_abs_diff(&DensityMatrix::basis_state(2, 0)) < 1e-12);

        assert!(thermal_state(&h, -1.0).is_err());
    }
}
