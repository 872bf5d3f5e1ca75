//! Seeded random generators for states, unitaries, channels and
//! measurements. All samplers take an explicit RNG so results are
//! reproducible from a master seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, ComplexMatrix, C64};
use crate::matquant::{DensityMatrix, MeasurementSet, PureState, QuantumOperation, UnitaryMatrix};

pub type SeededRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer; derives independent child seeds.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Unitarily invariant pure state.
pub fn pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_normal(rng)).collect();
        if linalg::norm(&v) > 1e-8 {
            return PureState::normalized(v).expect("nonzero vector");
        }
    }
}

/// Full-rank mixed state `G G† / tr(G G†)`.
pub fn density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    density_matrix_of_rank(dim, dim, rng)
}

pub fn density_matrix_of_rank<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, rank.max(1), rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    let m = m.scale_real(1.0 / tr);
    let m = (&m + &m.adjoint()).scale_real(0.5);
    DensityMatrix::new(m).expect("Wishart sample is a valid state")
}

/// Haar unitary via Gram–Schmidt on a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryMatrix {
    UnitaryMatrix::new(orthonormal_columns(dim, dim, rng)).expect("Gram-Schmidt output is unitary")
}

fn orthonormal_columns<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    while basis.len() < cols {
        let mut v: Vec<C64> = (0..rows).map(|_| complex_normal(rng)).collect();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let overlap = linalg::inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= overlap * y;
                }
            }
        }
        let n = linalg::norm(&v);
        if n > 1e-8 {
            basis.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(rows, cols, |r, c| basis[c][r])
}

/// Random channel from a random isometry `V : ℂ^d → ℂ^{d·k}` cut into `k`
/// Kraus blocks.
pub fn channel<R: Rng + ?Sized>(dim: usize, kraus_count: usize, rng: &mut R) -> QuantumOperation {
    let k = kraus_count.max(1);
    let v = orthonormal_columns(dim * k, dim, rng);
    let kraus = (0..k).map(|b| ComplexMatrix::from_fn(dim, dim, |r, c| v[(b * dim + r, c)])).collect();
    QuantumOperation::new(kraus).expect("isometry blocks are trace preserving")
}

/// Random generalized measurement with `outcomes` operators.
pub fn measurement<R: Rng + ?Sized>(dim: usize, outcomes: usize, rng: &mut R) -> MeasurementSet {
    let k = outcomes.max(1);
    let v = orthonormal_columns(dim * k, dim, rng);
    let ops = (0..k).map(|b| ComplexMatrix::from_fn(dim, dim, |r, c| v[(b * dim + r, c)])).collect();
    MeasurementSet::unlabeled(ops).expect("isometry blocks form a complete measurement")
}

/// Orthogonal projector of the given rank onto a random subspace.
pub fn projector<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let u = unitary(dim, rng);
    let mut p = ComplexMatrix::zeros(dim, dim);
    for k in 0..rank.min(dim) {
        p = &p + &ComplexMatrix::projector(&u.matrix().column(k));
    }
    p
}

pub fn hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, dim, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// `U diag(z) U†` with complex eigenvalues `z`.
pub fn normal_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let u = unitary(dim, rng);
    let mut d = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        d[(i, i)] = complex_normal(rng);
    }
    u.matrix().conjugate(&d).expect("square")
}

/// Point on the probability simplex, flat Dirichlet.
pub fn simplex_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(rand_distr::Exp1) + 1e-12).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance;

    #[test]
    fn samplers_satisfy_invariants() {
        let mut rng = seeded(7);
        for dim in 2..=5 {
            assert!(unitary(dim, &mut rng).matrix().unitarity_defect() < tolerance::UNIT);
            let ch = channel(dim, 3, &mut rng);
            assert!(ch.trace_preservation_defect() < tolerance::UNIT);
            let p = projector(dim, 1, &mut rng);
            assert!((&p * &p).max_abs_diff(&p) < 1e-12);
            assert!(normal_matrix(dim, &mut rng).is_normal(1e-10));
        }
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(5, 9), derive_seed(5, 9));
    }
}
