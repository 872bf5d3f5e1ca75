//! Von Neumann entropy and the quantum measures built on it: relative,
//! conditional and mutual entropy, Holevo χ, entropy exchange, coherent
//! information, the quantum Fano bound and the fidelity family.

use crate::centropy::{binary_entropy, ProbDist};
use crate::error::{Error, Result};
use crate::linalg::{xlog2x, ComplexMatrix, C64};
use crate::matquant::{
    apply_operation, partial_trace, purify, schmidt_decompose, DensityMatrix, PureState, QuantumOperation, Subsystem,
};
use crate::random;
use crate::tolerance;

/// `S(ρ) = −Σ λ log₂ λ`
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.spectrum())
}

pub(crate) fn entropy_of_spectrum(values: &[f64]) -> f64 {
    (-values.iter().map(|&l| xlog2x(l.max(0.0))).sum::<f64>()).max(0.0)
}

/// `S(ρ‖σ) = tr ρ log ρ − tr ρ log σ`, evaluated in σ's eigenbasis.
/// Returns `+∞` when the support of ρ is not inside the support of σ.
pub fn q_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!("state dims {} and {} differ", rho.dim(), sigma.dim())));
    }
    let neg_entropy = -von_neumann_entropy(rho);
    let eig = sigma.matrix().eig_hermitian()?;
    let mut cross = 0.0;
    for (k, &mu) in eig.values.iter().enumerate() {
        let w = eig.vector(k);
        let weight = quadratic_form(rho.matrix(), &w);
        if weight <= tolerance::EIG {
            continue;
        }
        if mu <= tolerance::EIG {
            return Ok(f64::INFINITY);
        }
        cross += weight * mu.log2();
    }
    Ok((neg_entropy - cross).max(0.0))
}

fn quadratic_form(m: &ComplexMatrix, v: &[C64]) -> f64 {
    let mv = m.mul_vec(v).expect("dims checked by caller");
    v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<C64>().re
}

/// A density matrix split as `A ⊗ B`.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    rho: DensityMatrix,
}

impl BipartiteState {
    pub fn new(rho: DensityMatrix) -> Result<Self> {
        match rho.subsystem_dims() {
            Some(d) if d.len() == 2 => Ok(Self { rho }),
            Some(d) => Err(Error::Dimension(format!("expected 2 subsystems, got {}", d.len()))),
            None => Err(Error::Dimension("state has no subsystem decomposition".into())),
        }
    }

    pub fn from_dims(rho: DensityMatrix, dims: [usize; 2]) -> Result<Self> {
        Self::new(rho.with_subsystems(dims.to_vec())?)
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn entropy_a(&self) -> f64 {
        von_neumann_entropy(&partial_trace(&self.rho, Subsystem::A).expect("bipartite"))
    }

    pub fn entropy_b(&self) -> f64 {
        von_neumann_entropy(&partial_trace(&self.rho, Subsystem::B).expect("bipartite"))
    }
}

/// `S(A,B)`
pub fn q_joint(b: &BipartiteState) -> f64 {
    von_neumann_entropy(&b.rho)
}

/// `S(A|B) = S(A,B) − S(B)`; negative values signal entanglement.
pub fn q_conditional(b: &BipartiteState) -> f64 {
    q_joint(b) - b.entropy_b()
}

/// `S(A:B) = S(A) + S(B) − S(A,B)`
pub fn q_mutual(b: &BipartiteState) -> f64 {
    b.entropy_a() + b.entropy_b() - q_joint(b)
}

/// Entropy of the listed subsystems of a multipartite state.
pub fn subsystem_entropy(rho: &DensityMatrix, keep: &[usize]) -> Result<f64> {
    Ok(von_neumann_entropy(&crate::matquant::reduce(rho, keep)?))
}

/// A pure bipartite state is entangled iff its Schmidt rank exceeds one,
/// equivalently iff `S(A|B) < 0`.
pub fn is_entangled_pure(psi: &PureState, dims: [usize; 2]) -> Result<bool> {
    let norm_sq: f64 = psi.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > tolerance::NORM {
        return Err(Error::Domain(format!("state has squared norm {norm_sq}")));
    }
    Ok(schmidt_decompose(psi, dims)?.rank() > 1)
}

/// `{(p_x, ρ_x)}`, all states of one dimension.
#[derive(Debug, Clone)]
pub struct Ensemble {
    entries: Vec<(f64, DensityMatrix)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let first = entries.first().ok_or_else(|| Error::Domain("empty ensemble".into()))?;
        let dim = first.1.dim();
        if entries.iter().any(|(_, r)| r.dim() != dim) {
            return Err(Error::Dimension("ensemble states differ in dimension".into()));
        }
        ProbDist::new(entries.iter().map(|(p, _)| *p).collect())?;
        Ok(Self { entries })
    }

    pub fn from_pure(entries: &[(f64, PureState)]) -> Result<Self> {
        Self::new(entries.iter().map(|(p, s)| (*p, s.density())).collect())
    }

    pub fn entries(&self) -> &[(f64, DensityMatrix)] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }

    pub fn probabilities(&self) -> ProbDist {
        ProbDist::new(self.entries.iter().map(|(p, _)| *p).collect()).expect("validated at construction")
    }

    /// Pushes every member through a channel.
    pub fn map(&self, op: &QuantumOperation) -> Result<Ensemble> {
        let entries = self
            .entries
            .iter()
            .map(|(p, r)| Ok((*p, apply_operation(r, op)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }
}

/// `Σ p_x ρ_x`
pub fn ensemble_state(e: &Ensemble) -> DensityMatrix {
    let parts: Vec<(f64, &DensityMatrix)> = e.entries.iter().map(|(p, r)| (*p, r)).collect();
    DensityMatrix::mixture(&parts).expect("ensemble validated at construction")
}

/// `χ = S(Σ p_x ρ_x) − Σ p_x S(ρ_x)`
pub fn holevo_chi(e: &Ensemble) -> f64 {
    let avg = von_neumann_entropy(&ensemble_state(e));
    let mean: f64 = e.entries.iter().map(|(p, r)| p * von_neumann_entropy(r)).sum();
    (avg - mean).max(0.0)
}

fn check_channel(rho: &DensityMatrix, op: &QuantumOperation) -> Result<()> {
    if op.dim_in() != rho.dim() {
        return Err(Error::Dimension(format!("channel input dim {} vs state dim {}", op.dim_in(), rho.dim())));
    }
    let defect = op.trace_preservation_defect();
    if defect > tolerance::UNIT {
        return Err(Error::NotTracePreserving(defect));
    }
    Ok(())
}

/// `(I_R ⊗ 𝓔)(|RQ⟩⟨RQ|)` for the canonical purification of ρ.
fn purified_output(rho: &DensityMatrix, op: &QuantumOperation) -> Result<(PureState, DensityMatrix)> {
    check_channel(rho, op)?;
    let psi = purify(rho);
    let joint = psi.density().with_subsystems(vec![rho.dim(), rho.dim()])?;
    let out = apply_operation(&joint, &op.extend_left(rho.dim()))?;
    Ok((psi, out))
}

/// `S(ρ, 𝓔) = S(R′Q′)`: entropy of reference plus output after the channel
/// acts on half of a purification.
pub fn entropy_exchange(rho: &DensityMatrix, op: &QuantumOperation) -> Result<f64> {
    let (_, out) = purified_output(rho, op)?;
    Ok(von_neumann_entropy(&out))
}

/// `I(ρ, 𝓔) = S(𝓔(ρ)) − S(ρ, 𝓔)`
pub fn coherent_information(rho: &DensityMatrix, op: &QuantumOperation) -> Result<f64> {
    let exchange = entropy_exchange(rho, op)?;
    Ok(von_neumann_entropy(&apply_operation(rho, op)?) - exchange)
}

/// `H(F) + (1−F)·log₂(d²−1) − S(ρ,𝓔)`, nonnegative by the quantum Fano
/// inequality.
pub fn quantum_fano_gap(rho: &DensityMatrix, op: &QuantumOperation) -> Result<f64> {
    let f = entanglement_fidelity(rho, op)?.clamp(0.0, 1.0);
    let d = rho.dim() as f64;
    let bound = binary_entropy(f) + (1.0 - f) * (d * d - 1.0).log2();
    Ok(bound - entropy_exchange(rho, op)?)
}

/// `F(ρ,σ) = tr √(√ρ σ √ρ)`
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!("state dims {} and {} differ", rho.dim(), sigma.dim())));
    }
    let sqrt_rho = rho.matrix().hermitian_fn(|l| l.max(0.0).sqrt())?;
    let inner = &(&sqrt_rho * sigma.matrix()) * &sqrt_rho;
    let inner = (&inner + &inner.adjoint()).scale_real(0.5);
    let eig = inner.eig_hermitian()?;
    Ok(eig.values.iter().map(|l| l.max(0.0).sqrt()).sum::<f64>().min(1.0))
}

/// `F(|ψ⟩, σ) = √⟨ψ|σ|ψ⟩`
pub fn pure_fidelity(psi: &PureState, sigma: &DensityMatrix) -> Result<f64> {
    if psi.dim() != sigma.dim() {
        return Err(Error::Dimension(format!("state dims {} and {} differ", psi.dim(), sigma.dim())));
    }
    Ok(quadratic_form(sigma.matrix(), psi.amplitudes()).max(0.0).sqrt().min(1.0))
}

/// `⟨RQ|(I_R ⊗ 𝓔)(|RQ⟩⟨RQ|)|RQ⟩`, via an explicit purification.
pub fn entanglement_fidelity(rho: &DensityMatrix, op: &QuantumOperation) -> Result<f64> {
    let (psi, out) = purified_output(rho, op)?;
    Ok(quadratic_form(out.matrix(), psi.amplitudes()).clamp(0.0, 1.0))
}

/// `Σ_i |tr(ρ E_i)|²`, the Kraus-form expression of the same quantity.
pub fn entanglement_fidelity_kraus(rho: &DensityMatrix, op: &QuantumOperation) -> Result<f64> {
    check_channel(rho, op)?;
    op.kraus().iter().map(|e| rho.matrix().try_mul(e).map(|m| m.trace().norm_sqr())).sum::<Result<f64>>()
}

/// `F̄ = Σ_j p_j F(ρ_j, 𝓔(ρ_j))²`
pub fn ensemble_average_fidelity(e: &Ensemble, op: &QuantumOperation) -> Result<f64> {
    let mut acc = 0.0;
    for (p, r) in e.entries() {
        check_channel(r, op)?;
        let f = fidelity(r, &apply_operation(r, op)?)?;
        acc += p * f * f;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy)]
pub struct MinFidelityConfig {
    pub samples: usize,
    pub refine_steps: usize,
    pub initial_step: f64,
    pub seed: u64,
}

impl Default for MinFidelityConfig {
    fn default() -> Self {
        Self { samples: 256, refine_steps: 32, initial_step: 0.5, seed: 0 }
    }
}

/// Upper estimate of `F_min(𝓔) = min_ψ F(|ψ⟩, 𝓔(|ψ⟩⟨ψ|))`.
///
/// Samples unitarily-invariant pure states from a fixed stream. Whenever a
/// sample improves the running minimum it is refined by coordinate descent;
/// the reported value is the smallest refined value seen, so it can only
/// decrease as more samples are drawn.
pub fn min_fidelity_estimate(op: &QuantumOperation, trials: usize, seed: u64) -> Result<f64> {
    min_fidelity_estimate_with(op, MinFidelityConfig { samples: trials, seed, ..Default::default() })
}

pub fn min_fidelity_estimate_with(op: &QuantumOperation, cfg: MinFidelityConfig) -> Result<f64> {
    let d = op.dim_in();
    if op.dim_out() != d {
        return Err(Error::Dimension("fidelity needs matching input and output dims".into()));
    }
    let objective = |amps: &[f64]| -> f64 {
        let v: Vec<C64> = amps.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
        match PureState::normalized(v) {
            Ok(psi) => apply_operation(&psi.density(), op)
                .and_then(|out| pure_fidelity(&psi, &out))
                .unwrap_or(f64::INFINITY),
            Err(_) => f64::INFINITY,
        }
    };
    let mut rng = random::seeded(cfg.seed);
    let mut sample_best = f64::INFINITY;
    let mut best = f64::INFINITY;
    for _ in 0..cfg.samples.max(1) {
        let psi = random::pure_state(d, &mut rng);
        let params: Vec<f64> = psi.amplitudes().iter().flat_map(|z| [z.re, z.im]).collect();
        let value = objective(&params);
        if value < sample_best {
            sample_best = value;
            let refined = coordinate_descent(&objective, params, value, cfg.refine_steps, cfg.initial_step);
            best = best.min(refined);
        }
    }
    Ok(best)
}

fn coordinate_descent(f: &dyn Fn(&[f64]) -> f64, mut x: Vec<f64>, mut fx: f64, steps: usize, step0: f64) -> f64 {
    let mut step = step0;
    for _ in 0..steps {
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let old = x[i];
                x[i] = old + dir * step;
                let trial = f(&x);
                if trial < fx {
                    fx = trial;
                    break;
                }
                x[i] = old;
            }
        }
        step *= 0.5;
    }
    fx
}
