use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::tolerance;

use super::{DensityMatrix, PureState, UnitaryMatrix};

/// Generalized measurement `{M_m}` with `Σ M_m† M_m = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    operators: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl MeasurementSet {
    pub fn new(operators: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::Domain("measurement needs at least one operator".into()));
        }
        if labels.len() != operators.len() {
            return Err(Error::Length { expected: operators.len(), got: labels.len() });
        }
        let defect = completeness_defect(&operators)?;
        if defect > tolerance::UNIT {
            return Err(Error::IncompleteMeasurement(defect));
        }
        Ok(Self { operators, labels })
    }

    /// Labels outcomes `0..m`.
    pub fn unlabeled(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let labels = (0..operators.len()).map(|i| i.to_string()).collect();
        Self::new(operators, labels)
    }

    /// Projective measurement onto an orthonormal basis.
    pub fn projective(basis: &[PureState]) -> Result<Self> {
        Self::unlabeled(basis.iter().map(|v| ComplexMatrix::projector(v.amplitudes())).collect())
    }

    pub fn computational(dim: usize) -> Self {
        let ops = (0..dim).map(|i| PureState::basis(dim, i).density().into_matrix()).collect();
        Self::unlabeled(ops).expect("computational basis is complete")
    }

    /// `{|+⟩⟨+|, |−⟩⟨−|}`
    pub fn hadamard_basis() -> Self {
        Self::projective(&[PureState::plus(), PureState::minus()]).expect("hadamard basis is complete")
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.operators[0].cols()
    }
}

fn completeness_defect(ops: &[ComplexMatrix]) -> Result<f64> {
    let dim_in = ops[0].cols();
    let dim_out = ops[0].rows();
    let mut acc = ComplexMatrix::zeros(dim_in, dim_in);
    for op in ops {
        if op.cols() != dim_in || op.rows() != dim_out {
            return Err(Error::Dimension("operators differ in shape".into()));
        }
        acc = &acc + &(&op.adjoint() * op);
    }
    Ok(acc.max_abs_diff(&ComplexMatrix::identity(dim_in)))
}

#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub label: String,
    pub probability: f64,
    /// `None` when the outcome has probability below `tolerance::PROB`.
    pub post_state: Option<DensityMatrix>,
}

/// Born-rule statistics and post-measurement states.
pub fn measure(rho: &DensityMatrix, ms: &MeasurementSet) -> Result<Vec<MeasurementOutcome>> {
    if ms.dim() != rho.dim() {
        return Err(Error::Dimension(format!("measurement dim {} vs state dim {}", ms.dim(), rho.dim())));
    }
    ms.operators
        .iter()
        .zip(&ms.labels)
        .map(|(m, label)| {
            let unnormalized = m.conjugate(rho.matrix())?;
            let p = unnormalized.trace().re;
            let post_state = (p >= tolerance::PROB)
                .then(|| DensityMatrix::from_valid(unnormalized.scale_real(1.0 / p), rho.subsystem_dims.clone()));
            Ok(MeasurementOutcome { label: label.clone(), probability: p.max(0.0), post_state })
        })
        .collect()
}

/// Outcome probabilities only.
pub fn outcome_probabilities(rho: &DensityMatrix, ms: &MeasurementSet) -> Result<Vec<f64>> {
    if ms.dim() != rho.dim() {
        return Err(Error::Dimension(format!("measurement dim {} vs state dim {}", ms.dim(), rho.dim())));
    }
    ms.operators
        .iter()
        .map(|m| Ok((&m.adjoint() * m).try_mul(rho.matrix())?.trace().re.max(0.0)))
        .collect()
}

/// `Σ_m M_m ρ M_m†`, the state when the outcome is discarded.
pub fn measure_nonselective(rho: &DensityMatrix, ms: &MeasurementSet) -> Result<DensityMatrix> {
    let dim = rho.dim();
    if ms.dim() != dim {
        return Err(Error::Dimension(format!("measurement dim {} vs state dim {}", ms.dim(), dim)));
    }
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for m in &ms.operators {
        acc = &acc + &m.conjugate(rho.matrix())?;
    }
    Ok(DensityMatrix::from_valid(acc, rho.subsystem_dims.clone()))
}

/// Trace-preserving channel in Kraus form, `ρ ↦ Σ E_i ρ E_i†`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumOperation {
    kraus: Vec<ComplexMatrix>,
}

impl QuantumOperation {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Domain("channel needs at least one Kraus operator".into()));
        }
        let defect = completeness_defect(&kraus)?;
        if defect > tolerance::UNIT {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(Self { kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self { kraus: vec![ComplexMatrix::identity(dim)] }
    }

    pub fn unitary(u: &UnitaryMatrix) -> Self {
        Self { kraus: vec![u.matrix().clone()] }
    }

    /// `ρ ↦ (1−f)ρ + f·I/d`, built from the Weyl–Heisenberg operators.
    pub fn depolarizing(dim: usize, f: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::Domain(format!("depolarizing parameter {f} outside [0, 1]")));
        }
        let d2 = (dim * dim) as f64;
        let mut kraus = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let weight = if a == 0 && b == 0 { 1.0 - f + f / d2 } else { f / d2 };
                if weight == 0.0 {
                    continue;
                }
                kraus.push(weyl(dim, a, b).scale_real(weight.sqrt()));
            }
        }
        Ok(Self { kraus })
    }

    /// `ρ ↦ (1−f)ρ + f·I/2` with the Pauli Kraus set
    /// `{√(1−3f/4) I, √(f/4) X, √(f/4) Y, √(f/4) Z}`.
    pub fn qubit_depolarizing(f: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::Domain(format!("depolarizing parameter {f} outside [0, 1]")));
        }
        let side = (f / 4.0).sqrt();
        Ok(Self {
            kraus: vec![
                ComplexMatrix::identity(2).scale_real((1.0 - 3.0 * f / 4.0).sqrt()),
                UnitaryMatrix::pauli_x().matrix().scale_real(side),
                UnitaryMatrix::pauli_y().matrix().scale_real(side),
                UnitaryMatrix::pauli_z().matrix().scale_real(side),
            ],
        })
    }

    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!("damping parameter {gamma} outside [0, 1]")));
        }
        let e0 = ComplexMatrix::diag(&[1.0, (1.0 - gamma).sqrt()]);
        let e1 = ComplexMatrix::from_real(2, 2, &[0.0, gamma.sqrt(), 0.0, 0.0]).expect("2x2");
        Ok(Self { kraus: vec![e0, e1] })
    }

    /// Flips the computational-basis value with probability `p`.
    pub fn bit_flip(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("flip probability {p} outside [0, 1]")));
        }
        Ok(Self {
            kraus: vec![
                ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
                UnitaryMatrix::pauli_x().matrix().scale_real(p.sqrt()),
            ],
        })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.kraus[0].cols()
    }

    pub fn dim_out(&self) -> usize {
        self.kraus[0].rows()
    }

    /// `next ∘ self`
    pub fn then(&self, next: &QuantumOperation) -> Result<QuantumOperation> {
        if next.dim_in() != self.dim_out() {
            return Err(Error::Dimension("channel composition dimension mismatch".into()));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * next.kraus.len());
        for f in &next.kraus {
            for e in &self.kraus {
                kraus.push(f * e);
            }
        }
        Ok(Self { kraus })
    }

    /// `I_d ⊗ 𝓔`: acts on the right factor of a `d × dim_in` system.
    pub fn extend_left(&self, dim: usize) -> QuantumOperation {
        let id = ComplexMatrix::identity(dim);
        Self { kraus: self.kraus.iter().map(|e| id.kron(e)).collect() }
    }

    /// `𝓔 ⊗ I_d`
    pub fn extend_right(&self, dim: usize) -> QuantumOperation {
        let id = ComplexMatrix::identity(dim);
        Self { kraus: self.kraus.iter().map(|e| e.kron(&id)).collect() }
    }

    pub fn trace_preservation_defect(&self) -> f64 {
        completeness_defect(&self.kraus).unwrap_or(f64::INFINITY)
    }
}

fn weyl(dim: usize, shift: usize, clock: usize) -> ComplexMatrix {
    let omega = 2.0 * std::f64::consts::PI / dim as f64;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for j in 0..dim {
        let phase = C64::from_polar(1.0, omega * (clock * j) as f64);
        m[((j + shift) % dim, j)] = phase;
    }
    m
}

/// `Σ E_i ρ E_i†`
pub fn apply_operation(rho: &DensityMatrix, op: &QuantumOperation) -> Result<DensityMatrix> {
    if op.dim_in() != rho.dim() {
        return Err(Error::Dimension(format!("channel input dim {} vs state dim {}", op.dim_in(), rho.dim())));
    }
    let defect = op.trace_preservation_defect();
    if defect > tolerance::UNIT {
        return Err(Error::NotTracePreserving(defect));
    }
    let dim = op.dim_out();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for e in &op.kraus {
        acc = &acc + &e.conjugate(rho.matrix())?;
    }
    let dims = if dim == rho.dim() { rho.subsystem_dims.clone() } else { None };
    Ok(DensityMatrix::from_valid(acc, dims))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_uniform_outcomes() {
        let comp = MeasurementSet::computational(2);
        let out = measure(&DensityMatrix::basis_state(2, 0), &comp).unwrap();
        assert!((out[0].probability - 1.0).abs() < 1e-15);
        assert!(out[1].probability.abs() < 1e-15);
        assert!(out[1].post_state.is_none());
        let post = out[0].post_state.as_ref().unwrap();
        assert!(post.max_abs_diff(&DensityMatrix::basis_state(2, 0)) < 1e-15);

        let plus = measure(&PureState::plus().density(), &comp).unwrap();
        assert!((plus[0].probability - 0.5).abs() < 1e-15);
        assert!((plus[1].probability - 0.5).abs() < 1e-15);
    }

    #[test]
    fn general_measurement_purifies_mixed_state() {
        let m1 = DensityMatrix::basis_state(2, 0).into_matrix();
        let m2 = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let ms = MeasurementSet::unlabeled(vec![m1, m2]).unwrap();
        let after = measure_nonselective(&DensityMatrix::maximally_mixed(2), &ms).unwrap();
        assert!(after.max_abs_diff(&DensityMatrix::basis_state(2, 0)) < 1e-15);
    }

    #[test]
    fn incomplete_measurement_rejected() {
        let m1 = DensityMatrix::basis_state(2, 0).into_matrix();
        assert!(matches!(MeasurementSet::unlabeled(vec![m1]), Err(Error::IncompleteMeasurement(_))));
    }

    #[test]
    fn depolarizing_examples() {
        let rho = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let full = QuantumOperation::qubit_depolarizing(1.0).unwrap();
        assert!(apply_operation(&rho, &full).unwrap().max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-15);

        let f = 0.3;
        let out = apply_operation(&DensityMatrix::basis_state(2, 0), &QuantumOperation::qubit_depolarizing(f).unwrap()).unwrap();
        let expected = DensityMatrix::diagonal(&[1.0 - f / 2.0, f / 2.0]).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-15);

        let id = apply_operation(&rho, &QuantumOperation::identity(2)).unwrap();
        assert_eq!(id, rho);
    }

    #[test]
    fn weyl_depolarizing_matches_closed_form() {
        for dim in 2..=4 {
            let rho = DensityMatrix::basis_state(dim, 1);
            let f = 0.4;
            let out = apply_operation(&rho, &QuantumOperation::depolarizing(dim, f).unwrap()).unwrap();
            let expected = &rho.matrix().scale_real(1.0 - f) + &ComplexMatrix::identity(dim).scale_real(f / dim as f64);
            assert!(out.matrix().max_abs_diff(&expected) < 1e-12);
        }
    }

    #[test]
    fn non_trace_preserving_rejected() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(QuantumOperation::new(vec![half]), Err(Error::NotTracePreserving(_))));
        let op = QuantumOperation::identity(3);
        assert!(apply_operation(&DensityMatrix::maximally_mixed(2), &op).is_err());
    }
}
