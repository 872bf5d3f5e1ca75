use super::linear::SyndromeDecoder;
use super::{dual_code, BitString, Gf2Matrix, LinearCode};
use crate::centropy::binary_entropy;
use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};
use crate::tolerance;

/// Largest block length for which basis states are built densely.
pub const BASIS_STATE_MAX_N: usize = 16;
/// Largest block length for the correction simulation.
pub const SIMULATION_MAX_N: usize = 10;

/// `CSS_{u,v}(C₁, C₂)` with `C₂ ⊆ C₁`, correcting `t` bit flips through
/// `C₁` and `t` phase flips through `C₂⊥`.
#[derive(Debug, Clone)]
pub struct CssCode {
    c1: LinearCode,
    c2: LinearCode,
    c2_dual: LinearCode,
    u: BitString,
    v: BitString,
    t: usize,
    // Solving G₁·m = w: rows of G₁ forming an invertible block, and its inverse.
    solve_rows: Vec<usize>,
    solve_inv: Gf2Matrix,
    // Row-reduced messages of C₂'s generator columns, with pivot positions.
    reducer: Gf2Matrix,
    reducer_pivots: Vec<usize>,
    free: Vec<usize>,
}

pub fn css_construct(c1: &LinearCode, c2: &LinearCode, u: &BitString, v: &BitString, t: usize) -> Result<CssCode> {
    let n = c1.n();
    if c2.n() != n {
        return Err(Error::Code(format!("block lengths {} and {} differ", n, c2.n())));
    }
    for w in [u, v] {
        if w.len() != n {
            return Err(Error::Length { expected: n, got: w.len() });
        }
    }
    if !c2.is_subcode_of(c1) {
        return Err(Error::Code("C2 is not contained in C1".into()));
    }
    let c2_dual = dual_code(c2);
    let t1 = c1.correctable_errors()?;
    let t2 = c2_dual.correctable_errors()?;
    if t > t1.min(t2) {
        return Err(Error::Code(format!(
            "insufficient distance: C1 corrects {t1} and the dual of C2 corrects {t2}, {t} required"
        )));
    }

    let g1 = c1.generator();
    let (_, solve_rows) = g1.transpose().rref();
    let mut block = Gf2Matrix::zeros(c1.k(), c1.k());
    for (i, &r) in solve_rows.iter().enumerate() {
        for c in 0..c1.k() {
            block.set(i, c, g1.get(r, c));
        }
    }
    let solve_inv = block.inverse()?;

    let mut code = CssCode {
        c1: c1.clone(),
        c2: c2.clone(),
        c2_dual,
        u: u.clone(),
        v: v.clone(),
        t,
        solve_rows,
        solve_inv,
        reducer: Gf2Matrix::zeros(0, c1.k()),
        reducer_pivots: Vec::new(),
        free: Vec::new(),
    };
    let messages = c2.generator().columns().iter().map(|g| code.message_of(g)).collect::<Result<Vec<_>>>()?;
    let a = if messages.is_empty() { Gf2Matrix::zeros(0, c1.k()) } else { Gf2Matrix::from_rows(&messages)? };
    let (reduced, pivots) = a.rref();
    code.free = (0..c1.k()).filter(|c| !pivots.contains(c)).collect();
    code.reducer = reduced;
    code.reducer_pivots = pivots;
    Ok(code)
}

impl CssCode {
    /// The `[7,1]` Steane code: Hamming over its simplex dual, `t = 1`.
    pub fn steane() -> Self {
        let z = BitString::zeros(7);
        css_construct(&LinearCode::hamming7(), &LinearCode::simplex7(), &z, &z, 1).expect("fixture")
    }

    pub fn n(&self) -> usize {
        self.c1.n()
    }

    /// `k₁ − k₂`
    pub fn logical_bits(&self) -> usize {
        self.c1.k() - self.c2.k()
    }

    pub fn c1(&self) -> &LinearCode {
        &self.c1
    }

    pub fn c2(&self) -> &LinearCode {
        &self.c2
    }

    pub fn c2_dual(&self) -> &LinearCode {
        &self.c2_dual
    }

    pub fn u(&self) -> &BitString {
        &self.u
    }

    pub fn v(&self) -> &BitString {
        &self.v
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn c1_decoder(&self) -> Result<SyndromeDecoder> {
        self.c1.decoder(self.t)
    }

    pub fn c2_dual_decoder(&self) -> Result<SyndromeDecoder> {
        self.c2_dual.decoder(self.t)
    }

    /// The message `m` with `G₁·m = word`.
    pub fn message_of(&self, word: &BitString) -> Result<BitString> {
        if word.len() != self.n() {
            return Err(Error::Length { expected: self.n(), got: word.len() });
        }
        let picked = BitString::new(self.solve_rows.iter().map(|&r| word.get(r)).collect())?;
        let m = self.solve_inv.mul_vec_unchecked(&picked);
        if self.c1.generator().mul_vec_unchecked(&m) != *word {
            return Err(Error::Code(format!("{word} is not a codeword of C1")));
        }
        Ok(m)
    }

    /// Canonical `k₁ − k₂` bit label of the coset `word + C₂`: the message
    /// of `word` reduced against the row-reduced messages of `C₂`, read off
    /// at the non-pivot positions.
    pub fn coset_label(&self, word: &BitString) -> Result<BitString> {
        let mut m = self.message_of(word)?;
        for (i, &p) in self.reducer_pivots.iter().enumerate() {
            if m.get(p) == 1 {
                m.xor_assign(&self.reducer.row(i));
            }
        }
        BitString::new(self.free.iter().map(|&f| m.get(f)).collect())
    }

    /// The codeword of `C₁` whose message is zero at the pivots and equal
    /// to `label` elsewhere. Inverse of [`CssCode::coset_label`].
    pub fn coset_representative(&self, label: &BitString) -> Result<BitString> {
        if label.len() != self.logical_bits() {
            return Err(Error::Length { expected: self.logical_bits(), got: label.len() });
        }
        let mut m = BitString::zeros(self.c1.k());
        for (i, &f) in self.free.iter().enumerate() {
            m.set(f, label.get(i));
        }
        Ok(self.c1.generator().mul_vec_unchecked(&m))
    }

    pub fn bounds(&self) -> CssBounds {
        let n = self.n();
        let k = self.logical_bits();
        let d = [self.c1.distance(), self.c2_dual.distance()].into_iter().flatten().min().unwrap_or(2 * self.t + 1);
        let tn = 2.0 * self.t as f64 / n as f64;
        let gv = if tn <= 1.0 { 1.0 - 2.0 * binary_entropy(tn) } else { f64::NEG_INFINITY };
        CssBounds {
            n,
            k,
            t: self.t,
            d,
            quantum_singleton_ok: n - k + 2 >= 2 * d,
            quantum_gv_rate: gv,
            meets_quantum_gv: k as f64 / n as f64 >= gv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CssBounds {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    /// `min(d(C₁), d(C₂⊥))`
    pub d: usize,
    /// `n − k ≥ 2(d − 1)`
    pub quantum_singleton_ok: bool,
    /// `1 − 2·H_bin(2t/n)`, reported only.
    pub quantum_gv_rate: f64,
    pub meets_quantum_gv: bool,
}

/// `|x + C₂⟩ = |C₂|^{−½} Σ_{y∈C₂} (−1)^{u·y} |x + y + v⟩` over `2ⁿ`
/// amplitudes; bit 0 of a string is the most significant index bit.
pub fn css_basis_state(code: &CssCode, x: &BitString) -> Result<Vec<C64>> {
    let n = code.n();
    if n > BASIS_STATE_MAX_N {
        return Err(Error::SizeCap(format!("dense state for n = {n} > {BASIS_STATE_MAX_N}")));
    }
    if !code.c1.contains(x)? {
        return Err(Error::Code(format!("{x} is not a codeword of C1")));
    }
    let words = code.c2.codewords()?;
    let amp = 1.0 / (words.len() as f64).sqrt();
    let shift = x.xor_unchecked(&code.v);
    let mut state = vec![ZERO; 1 << n];
    for y in &words {
        let sign = if code.u.dot_unchecked(y) == 1 { -amp } else { amp };
        state[index(&shift.xor_unchecked(y))] += sign;
    }
    Ok(state)
}

fn index(b: &BitString) -> usize {
    b.to_index().expect("block length is capped") as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct CssCorrection {
    pub input_label: BitString,
    pub recovered_label: BitString,
    /// `|⟨recovered|final⟩|²`
    pub fidelity: f64,
    pub success: bool,
    /// Largest deviation of the Hadamard-transformed state from
    /// `√(|C₂|/2ⁿ) Σ_{z∈C₂⊥} (−1)^{x·z} |z + e₂⟩`; present when `u = v = 0`
    /// and the bit-flip stage removed `e₁` exactly.
    pub hadamard_form_defect: Option<f64>,
}

/// Runs the CSS recovery on a dense statevector: phase errors `e₂` and bit
/// flips `e₁` hit `|x + C₂⟩`, the `C₁` syndrome fixes the flips, Hadamards
/// turn phase errors into flips that the `C₂⊥` syndrome fixes, and a final
/// Hadamard layer returns to the code basis.
pub fn simulate_css_correction(code: &CssCode, x: &BitString, e1: &BitString, e2: &BitString) -> Result<CssCorrection> {
    let n = code.n();
    if n > SIMULATION_MAX_N {
        return Err(Error::SizeCap(format!("simulation for n = {n} > {SIMULATION_MAX_N}")));
    }
    for e in [e1, e2] {
        if e.len() != n {
            return Err(Error::Length { expected: n, got: e.len() });
        }
    }
    let mut state = css_basis_state(code, x)?;
    let dim = state.len();

    for (w, a) in state.iter_mut().enumerate() {
        if BitString::from_index(w as u64, n).dot_unchecked(e2) == 1 {
            *a = -*a;
        }
    }
    flip_all(&mut state, index(e1));

    let bit_fix = correction(&state, n, code.c1.parity_check(), &code.v, &code.c1_decoder()?);
    if let Some(fix) = &bit_fix {
        flip_all(&mut state, index(fix));
    }

    walsh_hadamard(&mut state);
    let zero = BitString::zeros(n);
    let hadamard_form_defect = (code.u == zero && code.v == zero && bit_fix.as_ref() == Some(e1)).then(|| {
        let scale = (code.c2.codewords().map_or(0, |w| w.len()) as f64 / dim as f64).sqrt();
        let mut expected = vec![ZERO; dim];
        for z in code.c2_dual.codewords().unwrap_or_default() {
            let sign = if x.dot_unchecked(&z) == 1 { -scale } else { scale };
            expected[index(&z.xor_unchecked(e2))] = C64::new(sign, 0.0);
        }
        state.iter().zip(&expected).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    });

    let phase_fix = correction(&state, n, code.c2_dual.parity_check(), &code.u, &code.c2_dual_decoder()?);
    if let Some(fix) = &phase_fix {
        flip_all(&mut state, index(fix));
    }
    walsh_hadamard(&mut state);

    let input_label = code.coset_label(x)?;
    let mut best = (f64::NEG_INFINITY, BitString::zeros(code.logical_bits()));
    for l in 0..1u64 << code.logical_bits() {
        let label = BitString::from_index(l, code.logical_bits());
        let basis = css_basis_state(code, &code.coset_representative(&label)?)?;
        let overlap = basis.iter().zip(&state).map(|(b, s)| b.conj() * s).sum::<C64>().norm_sqr();
        if overlap > best.0 {
            best = (overlap, label);
        }
    }
    let (fidelity, recovered_label) = best;
    let success = recovered_label == input_label && fidelity >= 1.0 - tolerance::RECON;
    Ok(CssCorrection { input_label, recovered_label, fidelity, success, hadamard_form_defect })
}

// Every basis state in the support shares one syndrome once the known
// offset is removed; that syndrome is what an ancilla readout would give.
fn correction(state: &[C64], n: usize, check: &Gf2Matrix, offset: &BitString, dec: &SyndromeDecoder) -> Option<BitString> {
    let w = state.iter().position(|a| a.norm() > 1e-12)?;
    let word = BitString::from_index(w as u64, n).xor_unchecked(offset);
    dec.correct_syndrome(&check.mul_vec_unchecked(&word))
}

fn flip_all(state: &mut [C64], mask: usize) {
    if mask == 0 {
        return;
    }
    for w in 0..state.len() {
        let partner = w ^ mask;
        if w < partner {
            state.swap(w, partner);
        }
    }
}

/// `H^{⊗n}` in place.
fn walsh_hadamard(state: &mut [C64]) {
    let mut h = 1;
    while h < state.len() {
        for block in (0..state.len()).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (state[i], state[i + h]);
                state[i] = a + b;
                state[i + h] = a - b;
            }
        }
        h *= 2;
    }
    let norm = 1.0 / (state.len() as f64).sqrt();
    for a in state.iter_mut() {
        *a *= norm;
    }
}
