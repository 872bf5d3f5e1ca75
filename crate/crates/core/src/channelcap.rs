//! Classical capacity of discrete memoryless channels, product-state
//! (Holevo) capacity estimates for quantum channels, and the square-root
//! measurement.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centropy::{mutual_information, JointDist, ProbDist, Transition};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::matquant::{apply_operation, DensityMatrix, PureState, QuantumOperation};
use crate::qentropy::{holevo_chi, Ensemble};
use crate::random;
use crate::tolerance;

pub const DEFAULT_CAPACITY_TOL: f64 = 1e-9;
pub const CAPACITY_MAX_ITERATIONS: usize = 10_000;
pub const DEFAULT_RESTARTS: usize = 16;
pub const MAX_MEASUREMENT_DIM: usize = 16;

/// Discrete memoryless channel `p(y|x)`, rows indexed by `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassicalChannel {
    transition: Transition,
}

impl ClassicalChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        Ok(Self { transition: Transition::new(rows)? })
    }

    pub fn identity(n: usize) -> Self {
        Self { transition: Transition::identity(n) }
    }

    pub fn bsc(f: f64) -> Result<Self> {
        Ok(Self { transition: Transition::bsc(f)? })
    }

    /// Binary erasure channel with outputs `0`, `?`, `1`.
    pub fn bec(e: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - e, e, 0.0], vec![0.0, e, 1.0 - e]])
    }

    pub fn transition(&self) -> &Transition {
        &self.transition
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        self.transition.rows()
    }

    pub fn inputs(&self) -> usize {
        self.transition.inputs()
    }

    pub fn outputs(&self) -> usize {
        self.transition.outputs()
    }
}

impl From<Transition> for ClassicalChannel {
    fn from(transition: Transition) -> Self {
        Self { transition }
    }
}

/// `H(X:Y)` for `p(x)·p(y|x)`.
pub fn channel_mutual_info(px: &ProbDist, ch: &ClassicalChannel) -> Result<f64> {
    if px.len() != ch.inputs() {
        return Err(Error::Dimension(format!("input dist has {} letters, channel {}", px.len(), ch.inputs())));
    }
    let rows: Vec<Vec<f64>> = ch.rows().iter().zip(px.probs()).map(|(r, p)| r.iter().map(|w| w * p).collect()).collect();
    mutual_information(&JointDist::from_rows(&rows)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub capacity: f64,
    pub input: ProbDist,
    pub iterations: usize,
    /// `max_x D(p(·|x) ‖ q) − I`, an upper bound on the distance to the
    /// true capacity.
    pub gap: f64,
}

/// Blahut–Arimoto iteration. Stops once the certified gap
/// `max_x D(p(·|x)‖q) − I(p)` is at most `tol`, which bounds the distance
/// of the returned value from the capacity.
pub fn capacity(ch: &ClassicalChannel, tol: f64) -> Result<CapacityResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let live: Vec<usize> = (0..ch.outputs()).filter(|&y| ch.rows().iter().any(|r| r[y] > 0.0)).collect();
    let w: Vec<Vec<f64>> = ch.rows().iter().map(|r| live.iter().map(|&y| r[y]).collect()).collect();
    let nx = w.len();
    let mut p = vec![1.0 / nx as f64; nx];
    let mut best = f64::NEG_INFINITY;
    for it in 1..=CAPACITY_MAX_ITERATIONS {
        let q: Vec<f64> = (0..live.len()).map(|y| (0..nx).map(|x| p[x] * w[x][y]).sum()).collect();
        let d: Vec<f64> = w
            .iter()
            .map(|row| row.iter().zip(&q).filter(|(wy, _)| **wy > 0.0).map(|(wy, qy)| wy * (wy / qy).log2()).sum())
            .collect();
        let info: f64 = p.iter().zip(&d).map(|(pi, di)| pi * di).sum();
        let upper = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        best = best.max(info);
        if upper - info <= tol {
            let input = ProbDist::from_weights(&p)?;
            let capacity = channel_mutual_info(&input, ch)?;
            return Ok(CapacityResult { capacity, input, iterations: it, gap: (upper - info).max(0.0) });
        }
        let weights: Vec<f64> = p.iter().zip(&d).map(|(pi, di)| pi * (di - upper).exp2()).collect();
        let total: f64 = weights.iter().sum();
        p = weights.iter().map(|v| v / total).collect();
    }
    Err(Error::Convergence { iterations: CAPACITY_MAX_ITERATIONS, best })
}

/// Pure-state input ensemble `{(p_j, |ψ_j⟩)}`.
#[derive(Debug, Clone)]
pub struct ChannelEnsembleCandidate {
    entries: Vec<(f64, PureState)>,
}

impl ChannelEnsembleCandidate {
    pub fn new(entries: Vec<(f64, PureState)>) -> Result<Self> {
        let first = entries.first().ok_or_else(|| Error::Domain("empty ensemble".into()))?;
        let d = first.1.dim();
        if entries.iter().any(|(_, s)| s.dim() != d) {
            return Err(Error::Dimension("ensemble states differ in dimension".into()));
        }
        ProbDist::new(entries.iter().map(|(p, _)| *p).collect())?;
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(f64, PureState)] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }
}

/// `S(𝓔(Σ p_j ρ_j)) − Σ p_j S(𝓔(ρ_j))`
pub fn hsw_chi_of_ensemble(op: &QuantumOperation, e: &ChannelEnsembleCandidate) -> Result<f64> {
    if op.dim_in() != e.dim() {
        return Err(Error::Dimension(format!("channel input dim {} vs ensemble dim {}", op.dim_in(), e.dim())));
    }
    let defect = op.trace_preservation_defect();
    if defect > tolerance::UNIT {
        return Err(Error::NotTracePreserving(defect));
    }
    let outputs = e
        .entries
        .iter()
        .map(|(p, s)| Ok((*p, apply_operation(&s.density(), op)?)))
        .collect::<Result<Vec<(f64, DensityMatrix)>>>()?;
    Ok(holevo_chi(&Ensemble::new(outputs)?))
}

#[derive(Debug, Clone)]
pub struct HswEstimate {
    pub chi: f64,
    pub ensemble: ChannelEnsembleCandidate,
    /// Best value reached by each restart, in restart order.
    pub restart_values: Vec<f64>,
}

/// Lower bound on the product-state capacity: the best Holevo quantity
/// over `d²`-member pure-state ensembles found by Nelder–Mead from
/// `restarts` random starting points. Restart `i` uses a seed derived from
/// `(seed, i)`, so adding restarts never lowers the estimate.
pub fn hsw_capacity_estimate(op: &QuantumOperation, restarts: usize, tol: f64, seed: u64) -> Result<HswEstimate> {
    let d = op.dim_in();
    if op.dim_out() == 0 || d == 0 {
        return Err(Error::Dimension("empty channel".into()));
    }
    let defect = op.trace_preservation_defect();
    if defect > tolerance::UNIT {
        return Err(Error::NotTracePreserving(defect));
    }
    let members = d * d;
    let params = members * (2 * d + 1);
    let objective = |x: &[f64]| -> f64 {
        decode_ensemble(x, d).and_then(|e| hsw_chi_of_ensemble(op, &e)).map_or(f64::INFINITY, |chi| -chi)
    };
    let runs: Vec<(f64, Vec<f64>)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = random::seeded(random::derive_seed(seed, i as u64));
            let x0: Vec<f64> = (0..params).map(|_| rng.random_range(-1.0..1.0)).collect();
            let (x, fx) = nelder_mead(&objective, x0, 0.5, 400 * params, tol);
            (-fx, x)
        })
        .collect();
    let restart_values: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let (chi, x) = runs.into_iter().fold((f64::NEG_INFINITY, Vec::new()), |acc, r| if r.0 > acc.0 { r } else { acc });
    Ok(HswEstimate { chi: chi.max(0.0), ensemble: decode_ensemble(&x, d)?, restart_values })
}

// Layout per member: one softmax weight, then d complex amplitudes.
fn decode_ensemble(x: &[f64], d: usize) -> Result<ChannelEnsembleCandidate> {
    let stride = 2 * d + 1;
    let logits: Vec<f64> = x.chunks(stride).map(|c| c[0]).collect();
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let probs = ProbDist::from_weights(&weights)?;
    let entries = x
        .chunks(stride)
        .zip(probs.probs())
        .map(|(c, &p)| {
            let amps: Vec<C64> = c[1..].chunks(2).map(|z| C64::new(z[0], z[1])).collect();
            Ok((p, PureState::normalized(amps)?))
        })
        .collect::<Result<Vec<_>>>()?;
    ChannelEnsembleCandidate::new(entries)
}

/// Minimizes `f` with the Nelder–Mead simplex method, rebuilding the
/// simplex around the best point whenever it collapses until that stops
/// helping.
fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: Vec<f64>, step: f64, max_evals: usize, ftol: f64) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut evals = 0;
    let eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let mut best_x = x0;
    let mut best_f = eval(&best_x, &mut evals);
    let mut scale = step;
    while evals < max_evals {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_f));
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] += scale;
            let fx = eval(&x, &mut evals);
            simplex.push((x, fx));
        }
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if (simplex[n].1 - simplex[0].1).abs() <= ftol || evals >= max_evals {
                break;
            }
            let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|v| v.0[j]).sum::<f64>() / n as f64).collect();
            let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (c - w)).collect() };
            let xr = along(1.0);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(2.0);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let t = if fr < simplex[n].1 { 0.5 } else { -0.5 };
                let xc = along(t);
                let fc = eval(&xc, &mut evals);
                if fc < simplex[n].1.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let anchor = simplex[0].0.clone();
                    for v in simplex.iter_mut().skip(1) {
                        v.0 = anchor.iter().zip(&v.0).map(|(a, b)| a + 0.5 * (b - a)).collect();
                        v.1 = eval(&v.0, &mut evals);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let improved = simplex[0].1 < best_f - ftol;
        if simplex[0].1 < best_f {
            best_x = simplex[0].0.clone();
            best_f = simplex[0].1;
        }
        if !improved {
            if scale < 1e-3 {
                break;
            }
            scale *= 0.25;
        }
    }
    (best_x, best_f)
}

/// POVM `{E_M}` plus the completion `I − Π`, `Π` the projector onto the
/// support of `Σ P P_M P`.
#[derive(Debug, Clone)]
pub struct SquareRootMeasurement {
    pub elements: Vec<ComplexMatrix>,
    pub completion: ComplexMatrix,
}

impl SquareRootMeasurement {
    /// Elements followed by the completion.
    pub fn povm(&self) -> Vec<ComplexMatrix> {
        let mut all = self.elements.clone();
        all.push(self.completion.clone());
        all
    }

    /// `Σ_M prior_M · tr(E_M ρ_M)`
    pub fn success_probability(&self, priors: &[f64], states: &[DensityMatrix]) -> Result<f64> {
        if priors.len() != self.elements.len() || states.len() != self.elements.len() {
            return Err(Error::Length { expected: self.elements.len(), got: priors.len().min(states.len()) });
        }
        let mut acc = 0.0;
        for ((p, e), rho) in priors.iter().zip(&self.elements).zip(states) {
            acc += p * e.try_mul(rho.matrix())?.trace().re;
        }
        Ok(acc)
    }
}

/// `E_M = (Σ P P_{M'} P)^{−½} P P_M P (Σ P P_{M'} P)^{−½}`, with the
/// inverse square root taken on the support.
pub fn square_root_measurement(p: &ComplexMatrix, signals: &[ComplexMatrix]) -> Result<SquareRootMeasurement> {
    let d = p.rows();
    if !p.is_square() || d > MAX_MEASUREMENT_DIM {
        return Err(Error::Dimension(format!("projector must be square with dim ≤ {MAX_MEASUREMENT_DIM}")));
    }
    if signals.is_empty() {
        return Err(Error::Domain("no signal projectors".into()));
    }
    let mut sandwiched = Vec::with_capacity(signals.len());
    let mut total = ComplexMatrix::zeros(d, d);
    for s in signals {
        if s.rows() != d || s.cols() != d {
            return Err(Error::Dimension("signal projector dims differ from P".into()));
        }
        let m = p.try_mul(s)?.try_mul(p)?;
        let m = (&m + &m.adjoint()).scale_real(0.5);
        total = &total + &m;
        sandwiched.push(m);
    }
    let eig = total.eig_hermitian()?;
    let cutoff = tolerance::EIG * eig.values.first().copied().unwrap_or(0.0).max(1.0);
    let inv_sqrt = eig.rebuild_with(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
    let support = eig.rebuild_with(|l| if l > cutoff { 1.0 } else { 0.0 });
    let elements = sandwiched.iter().map(|m| &(&inv_sqrt * m) * &inv_sqrt).collect();
    Ok(SquareRootMeasurement { elements, completion: &ComplexMatrix::identity(d) - &support })
}
