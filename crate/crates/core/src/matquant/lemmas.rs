//! Two operator identities used in the entropy arguments: averaging a
//! normal operator over cyclic relabelings of its eigenbasis, and writing a
//! projective pinching as a mixture of two unitaries.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ONE};
use crate::tolerance;

use super::UnitaryMatrix;

#[derive(Debug, Clone)]
pub struct CyclicAverage {
    pub unitaries: Vec<UnitaryMatrix>,
    /// `Σ_i U_i A U_i†`, which equals `tr(A)·I`.
    pub average: ComplexMatrix,
}

/// Builds `d` unitaries `U_i = W Xⁱ W†`, where `W` diagonalizes the normal
/// matrix `a` and `X` cyclically shifts basis vectors, so each diagonal
/// entry visits every position once.
pub fn cyclic_averaging(a: &ComplexMatrix) -> Result<CyclicAverage> {
    if !a.is_square() {
        return Err(Error::Dimension("cyclic averaging needs a square matrix".into()));
    }
    let scale = a.frobenius_norm().max(1.0);
    if !a.is_normal(tolerance::HERM * scale) {
        return Err(Error::Domain("matrix is not normal".into()));
    }
    let d = a.rows();
    let w = unitary_diagonalizer(a)?;
    let mut shift = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        shift[((j + 1) % d, j)] = ONE;
    }
    let mut power = ComplexMatrix::identity(d);
    let mut unitaries = Vec::with_capacity(d);
    let mut average = ComplexMatrix::zeros(d, d);
    for _ in 0..d {
        let u = w.conjugate(&power)?;
        average = &average + &u.conjugate(a)?;
        unitaries.push(UnitaryMatrix::from_valid(u));
        power = &shift * &power;
    }
    Ok(CyclicAverage { unitaries, average })
}

// A normal matrix splits as H + iK with commuting Hermitian H, K. Diagonalize
// H, then diagonalize K inside each degenerate eigenspace of H.
fn unitary_diagonalizer(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = a.rows();
    let adj = a.adjoint();
    let herm = (a + &adj).scale_real(0.5);
    let anti = (a - &adj).scale(C64::new(0.0, -0.5));
    let eig = herm.eig_hermitian()?;
    let mut w = eig.vectors.clone();
    let gap = 1e-7 * eig.values.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (eig.values[end - 1] - eig.values[end]).abs() <= gap {
            end += 1;
        }
        if end - start > 1 {
            let block = ComplexMatrix::from_fn(d, end - start, |r, c| w[(r, start + c)]);
            let restricted = &(&block.adjoint() * &anti) * &block;
            let sym = (&restricted + &restricted.adjoint()).scale_real(0.5);
            let inner = sym.eig_hermitian()?;
            let rotated = &block * &inner.vectors;
            for r in 0..d {
                for c in 0..end - start {
                    w[(r, start + c)] = rotated[(r, c)];
                }
            }
        }
        start = end;
    }
    Ok(w)
}

#[derive(Debug, Clone)]
pub struct ProjectorMixture {
    /// `Q − P`
    pub u1: UnitaryMatrix,
    /// `Q + P = I`
    pub u2: UnitaryMatrix,
    pub weight: f64,
}

/// `PρP + QρQ = ½ U₁ρU₁† + ½ U₂ρU₂†` with `Q = I − P`.
pub fn projector_unitary_mixture(p: &ComplexMatrix) -> Result<ProjectorMixture> {
    if !p.is_square() {
        return Err(Error::Dimension("projector must be square".into()));
    }
    if !p.is_hermitian(tolerance::HERM) || (p * p).max_abs_diff(p) > tolerance::RECON {
        return Err(Error::Domain("matrix is not an orthogonal projector".into()));
    }
    let id = ComplexMatrix::identity(p.rows());
    let q = &id - p;
    Ok(ProjectorMixture {
        u1: UnitaryMatrix::from_valid(&q - p),
        u2: UnitaryMatrix::from_valid(&q + p),
        weight: 0.5,
    })
}
