//! Typical sequences and subspaces at enumerable block lengths: exact
//! typical sets, a Shannon compression scheme with exact reliability,
//! multinomial counting, and Schumacher compression of i.i.d. quantum
//! sources.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::centropy::{shannon_entropy, ProbDist};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::matquant::DensityMatrix;
use crate::qentropy::von_neumann_entropy;

/// Largest number of sequences `aⁿ` that is enumerated.
pub const MAX_SEQUENCES: u64 = 1 << 24;
/// Largest ambient dimension `dⁿ` for quantum sources.
pub const MAX_QUANTUM_DIM: usize = 256;

/// An i.i.d. source emitting blocks of `n` symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceModel {
    dist: ProbDist,
    n: usize,
    epsilon: f64,
}

impl SourceModel {
    pub fn new(dist: ProbDist, n: usize, epsilon: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("block length must be at least 1".into()));
        }
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Domain(format!("epsilon {epsilon} must be positive")));
        }
        Ok(Self { dist, n, epsilon })
    }

    pub fn dist(&self) -> &ProbDist {
        &self.dist
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.dist)
    }

    pub fn alphabet(&self) -> usize {
        self.dist.len()
    }

    /// `aⁿ`, or an error past [`MAX_SEQUENCES`].
    pub fn sequence_count(&self) -> Result<u64> {
        (self.alphabet() as u64)
            .checked_pow(self.n as u32)
            .filter(|&c| c <= MAX_SEQUENCES)
            .ok_or_else(|| Error::SizeCap(format!("{}^{} sequences", self.alphabet(), self.n)))
    }

    /// `log₂ p(seq)`; `−∞` when a symbol has probability zero.
    pub fn log2_probability(&self, seq: &[usize]) -> Result<f64> {
        if seq.len() != self.n {
            return Err(Error::Length { expected: self.n, got: seq.len() });
        }
        let p = self.dist.probs();
        seq.iter()
            .map(|&s| p.get(s).map(|q| q.log2()).ok_or_else(|| Error::Domain(format!("symbol {s} outside alphabet"))))
            .sum()
    }

    fn typical_log2(&self, log2p: f64) -> bool {
        log2p.is_finite() && (-log2p / self.n as f64 - self.entropy()).abs() <= self.epsilon
    }

    /// Sequence with lexicographic rank `index`.
    pub fn sequence_of(&self, index: u64) -> Vec<usize> {
        let a = self.alphabet() as u64;
        let mut out = vec![0; self.n];
        let mut rest = index;
        for slot in out.iter_mut().rev() {
            *slot = (rest % a) as usize;
            rest /= a;
        }
        out
    }

    pub fn index_of(&self, seq: &[usize]) -> Result<u64> {
        if seq.len() != self.n {
            return Err(Error::Length { expected: self.n, got: seq.len() });
        }
        let a = self.alphabet();
        let mut idx = 0u64;
        for &s in seq {
            if s >= a {
                return Err(Error::Domain(format!("symbol {s} outside alphabet")));
            }
            idx = idx * a as u64 + s as u64;
        }
        Ok(idx)
    }
}

/// `|−(1/n) log₂ p(seq) − H(X)| ≤ ε`
pub fn is_eps_typical(seq: &[usize], s: &SourceModel) -> Result<bool> {
    Ok(s.typical_log2(s.log2_probability(seq)?))
}

/// `T(n, ε)` as lexicographic sequence ranks, ascending.
#[derive(Debug, Clone)]
pub struct TypicalSet {
    model: SourceModel,
    members: Vec<u64>,
    log2_probs: Vec<f64>,
}

impl TypicalSet {
    pub fn model(&self) -> &SourceModel {
        &self.model
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn indices(&self) -> &[u64] {
        &self.members
    }

    pub fn sequences(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.members.iter().map(|&i| self.model.sequence_of(i))
    }

    pub fn contains(&self, seq: &[usize]) -> Result<bool> {
        Ok(self.members.binary_search(&self.model.index_of(seq)?).is_ok())
    }

    /// `Σ_{y∈T} p(y)`
    pub fn probability_mass(&self) -> f64 {
        self.log2_probs.iter().map(|l| l.exp2()).sum()
    }

    /// `((1−δ)·2^{n(H−ε)}, 2^{n(H+ε)})` with `1−δ` the exact mass.
    pub fn size_bounds(&self) -> (f64, f64) {
        let nh = self.model.n as f64 * self.model.entropy();
        let ne = self.model.n as f64 * self.model.epsilon;
        (self.probability_mass() * (nh - ne).exp2(), (nh + ne).exp2())
    }

    /// The `limit` most probable members, returned in lexicographic order.
    /// Equal probabilities are broken toward the lexicographically smaller
    /// sequence.
    fn most_probable(&self, limit: usize) -> (Vec<u64>, Vec<f64>) {
        let mut order: Vec<usize> = (0..self.members.len()).collect();
        order.sort_by(|&a, &b| self.log2_probs[b].total_cmp(&self.log2_probs[a]).then(a.cmp(&b)));
        order.truncate(limit);
        order.sort_unstable();
        (order.iter().map(|&i| self.members[i]).collect(), order.iter().map(|&i| self.log2_probs[i]).collect())
    }
}

/// Exhaustive enumeration of `T(n, ε)`.
pub fn typical_set(s: &SourceModel) -> Result<TypicalSet> {
    let total = s.sequence_count()?;
    let logs: Vec<f64> = s.dist.probs().iter().map(|p| p.log2()).collect();
    let lo_len = s.n / 2;
    let lo_table = log2_table(&logs, lo_len);
    let hi_table = log2_table(&logs, s.n - lo_len);
    let lo_size = lo_table.len() as u64;
    debug_assert_eq!(lo_size * hi_table.len() as u64, total);
    let chunks: Vec<Vec<(u64, f64)>> = hi_table
        .par_iter()
        .enumerate()
        .map(|(hi, &lh)| {
            lo_table
                .iter()
                .enumerate()
                .filter_map(|(lo, &ll)| {
                    let l = lh + ll;
                    s.typical_log2(l).then_some((hi as u64 * lo_size + lo as u64, l))
                })
                .collect()
        })
        .collect();
    let (members, log2_probs) = chunks.into_iter().flatten().unzip();
    Ok(TypicalSet { model: s.clone(), members, log2_probs })
}

// log₂ p of every sequence of length `len`, in lexicographic order.
fn log2_table(logs: &[f64], len: usize) -> Vec<f64> {
    let mut table = vec![0.0];
    for _ in 0..len {
        table = table.iter().flat_map(|&t| logs.iter().map(move |&l| t + l)).collect();
    }
    table
}

/// Exact and approximate counts of sequences with the most likely
/// composition.
#[derive(Debug, Clone, PartialEq)]
pub struct MultinomialCount {
    /// Symbol counts `≈ n·p(x)`, summing to `n`.
    pub composition: Vec<usize>,
    pub exact: BigUint,
    pub log2_exact: f64,
    /// `n·H(X)`, the exponent of the `2^{nH}` approximation.
    pub log2_approx: f64,
    /// `log₂(exact) / (nH)`
    pub log_ratio: f64,
    /// `(nH − log₂ exact) / n`, which shrinks as `n` grows.
    pub rate_gap: f64,
}

pub fn multinomial_typical_count(s: &SourceModel) -> MultinomialCount {
    let n = s.n;
    let composition = round_composition(s.dist.probs(), n);
    let mut exact = BigUint::from(1u32);
    for i in 2..=n {
        exact *= i;
    }
    for &c in &composition {
        let mut f = BigUint::from(1u32);
        for i in 2..=c {
            f *= i;
        }
        exact /= f;
    }
    let log2_fact = |m: usize| (2..=m).map(|i| (i as f64).log2()).sum::<f64>();
    let log2_exact = log2_fact(n) - composition.iter().map(|&c| log2_fact(c)).sum::<f64>();
    let log2_approx = n as f64 * s.entropy();
    MultinomialCount {
        composition,
        exact,
        log2_exact,
        log2_approx,
        log_ratio: if log2_approx > 0.0 { log2_exact / log2_approx } else { 1.0 },
        rate_gap: (log2_approx - log2_exact) / n as f64,
    }
}

// Largest-remainder rounding of n·p.
fn round_composition(p: &[f64], n: usize) -> Vec<usize> {
    let raw: Vec<f64> = p.iter().map(|q| q * n as f64).collect();
    let mut counts: Vec<usize> = raw.iter().map(|r| r.floor() as usize).collect();
    let short = n.saturating_sub(counts.iter().sum());
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| (raw[b] - raw[b].floor()).total_cmp(&(raw[a] - raw[a].floor())).then(a.cmp(&b)));
    for &i in order.iter().take(short) {
        counts[i] += 1;
    }
    counts
}

/// A block code on typical sequences with `⌊nR⌋`-bit indices. The last
/// index is reserved for failure.
#[derive(Debug, Clone)]
pub struct ShannonScheme {
    model: SourceModel,
    rate: f64,
    index_bits: u32,
    encoded: Vec<u64>,
    reliability: f64,
    typical_count: usize,
    truncated: bool,
}

/// Builds the scheme. When the typical set needs more than `2^{⌊nR⌋} − 1`
/// indices the call fails if `R > H`; for `R ≤ H` only the most probable
/// typical sequences are encoded and [`ShannonScheme::truncated`] is set.
pub fn shannon_scheme(s: &SourceModel, rate: f64) -> Result<ShannonScheme> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::Domain(format!("rate {rate} must be positive")));
    }
    let bits = (s.n as f64 * rate + 1e-9).floor();
    if bits < 1.0 {
        return Err(Error::Domain(format!("n·R = {} gives no index bits", s.n as f64 * rate)));
    }
    if bits > 63.0 {
        return Err(Error::SizeCap(format!("{bits} index bits")));
    }
    let index_bits = bits as u32;
    let slots = ((1u64 << index_bits) - 1) as usize;
    let set = typical_set(s)?;
    let truncated = set.len() > slots;
    if truncated && rate > s.entropy() {
        return Err(Error::Domain(format!(
            "typical set has {} members but rate {rate} above the entropy leaves only {slots} indices",
            set.len()
        )));
    }
    let (encoded, logs) = set.most_probable(slots);
    Ok(ShannonScheme {
        model: s.clone(),
        rate,
        index_bits,
        reliability: logs.iter().map(|l| l.exp2()).sum(),
        encoded,
        typical_count: set.len(),
        truncated,
    })
}

impl ShannonScheme {
    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn index_bits(&self) -> u32 {
        self.index_bits
    }

    pub fn failure_index(&self) -> u64 {
        (1u64 << self.index_bits) - 1
    }

    /// Probability that `decompress(compress(y)) = y`.
    pub fn reliability(&self) -> f64 {
        self.reliability
    }

    pub fn typical_count(&self) -> usize {
        self.typical_count
    }

    pub fn encoded_count(&self) -> usize {
        self.encoded.len()
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn compress(&self, seq: &[usize]) -> Result<u64> {
        let idx = self.model.index_of(seq)?;
        Ok(self.encoded.binary_search(&idx).map_or(self.failure_index(), |pos| pos as u64))
    }

    /// `None` for the failure index.
    pub fn decompress(&self, index: u64) -> Result<Option<Vec<usize>>> {
        if index == self.failure_index() {
            return Ok(None);
        }
        let seq = self
            .encoded
            .get(index as usize)
            .ok_or_else(|| Error::Domain(format!("index {index} is not assigned")))?;
        Ok(Some(self.model.sequence_of(*seq)))
    }
}

/// `n` copies of a single-system source `ρ`.
#[derive(Debug, Clone)]
pub struct QuantumSourceModel {
    rho: DensityMatrix,
    n: usize,
    epsilon: f64,
}

impl QuantumSourceModel {
    pub fn new(rho: DensityMatrix, n: usize, epsilon: f64) -> Result<Self> {
        let d = rho.dim();
        let total = d.checked_pow(n as u32).filter(|&t| t <= MAX_QUANTUM_DIM);
        if total.is_none() {
            return Err(Error::SizeCap(format!("{d}^{n} exceeds {MAX_QUANTUM_DIM}")));
        }
        if n == 0 || !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Domain(format!("need n ≥ 1 and epsilon > 0, got n = {n}, epsilon = {epsilon}")));
        }
        Ok(Self { rho, n, epsilon })
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn ambient_dim(&self) -> usize {
        self.rho.dim().pow(self.n as u32)
    }

    /// The classical source over `ρ`'s eigenvalues.
    pub fn eigen_source(&self) -> SourceModel {
        let spectrum = self.rho.spectrum();
        let dist = ProbDist::from_weights(&spectrum).expect("a density matrix has a valid spectrum");
        SourceModel::new(dist, self.n, self.epsilon).expect("validated at construction")
    }

    /// `ρ^{⊗n}`
    pub fn tensor_power(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::identity(1);
        for _ in 0..self.n {
            out = out.kron(self.rho.matrix());
        }
        out
    }
}

/// Projector onto the span of the product eigenvectors in `sequences`.
fn eigen_projector(q: &QuantumSourceModel, sequences: &[u64]) -> Result<ComplexMatrix> {
    let eig = q.rho.matrix().eig_hermitian()?;
    let source = q.eigen_source();
    let dim = q.ambient_dim();
    let mut p = ComplexMatrix::zeros(dim, dim);
    for &idx in sequences {
        let mut v = vec![C64::new(1.0, 0.0)];
        for &s in &source.sequence_of(idx) {
            v = crate::linalg::kron_vec(&v, &eig.vector(s));
        }
        p = &p + &ComplexMatrix::projector(&v);
    }
    Ok(p)
}

/// `P(n, ε) = Σ_{typical} |x₁⟩⟨x₁| ⊗ … ⊗ |xₙ⟩⟨xₙ|` in the eigenbasis of `ρ`.
pub fn typical_subspace_projector(q: &QuantumSourceModel) -> Result<ComplexMatrix> {
    let set = typical_set(&q.eigen_source())?;
    eigen_projector(q, set.indices())
}

/// Projector used by a rate-`R` scheme: the typical subspace when its
/// dimension is at most `2^{⌊nR⌋}`, otherwise (only allowed for
/// `R ≤ S(ρ)`) the span of its most probable eigen-sequences.
pub fn compression_projector(q: &QuantumSourceModel, rate: f64) -> Result<ComplexMatrix> {
    let source = q.eigen_source();
    let set = typical_set(&source)?;
    let bits = (q.n as f64 * rate + 1e-9).floor();
    if !(bits >= 0.0) {
        return Err(Error::Domain(format!("rate {rate} must be nonnegative")));
    }
    let room = if bits >= 63.0 { usize::MAX } else { 1usize << bits as u32 };
    if set.len() > room && rate > von_neumann_entropy(&q.rho) {
        return Err(Error::Domain(format!(
            "typical subspace of dimension {} exceeds 2^{bits} at a rate above S(ρ)",
            set.len()
        )));
    }
    let (kept, _) = set.most_probable(room);
    eigen_projector(q, &kept)
}

/// `𝓒ₙ(σ) = PσP + Σ_i ⟨i|σ|i⟩ |0⟩⟨0|`, `{|i⟩}` spanning the orthocomplement
/// of the typical subspace and `|0⟩` the first computational basis state.
/// Decompression is the identity.
pub fn schumacher_compress(q: &QuantumSourceModel, sigma: &DensityMatrix) -> Result<DensityMatrix> {
    let p = typical_subspace_projector(q)?;
    compress_with(&p, sigma)
}

fn compress_with(p: &ComplexMatrix, sigma: &DensityMatrix) -> Result<DensityMatrix> {
    if sigma.dim() != p.rows() {
        return Err(Error::Dimension(format!("state dim {} vs code space {}", sigma.dim(), p.rows())));
    }
    let kept = p.conjugate(sigma.matrix())?;
    let lost = 1.0 - kept.trace().re;
    let mut out = kept;
    out[(0, 0)] += C64::new(lost.max(0.0), 0.0);
    let out = (&out + &out.adjoint()).scale_real(0.5);
    DensityMatrix::new(out)
}

/// Entanglement fidelity of `𝓓ₙ ∘ 𝓒ₙ` on `ρ^{⊗n}`:
/// `tr(Pρ^{⊗n})² + ⟨0|ρ^{⊗n}(I−P)ρ^{⊗n}|0⟩`.
pub fn schumacher_fidelity(q: &QuantumSourceModel) -> Result<f64> {
    fidelity_with(q, &typical_subspace_projector(q)?)
}

/// [`schumacher_fidelity`] for the rate-limited projector of
/// [`compression_projector`].
pub fn schumacher_fidelity_at_rate(q: &QuantumSourceModel, rate: f64) -> Result<f64> {
    fidelity_with(q, &compression_projector(q, rate)?)
}

fn fidelity_with(q: &QuantumSourceModel, p: &ComplexMatrix) -> Result<f64> {
    let rho_n = q.tensor_power();
    let kept = rho_n.try_mul(p)?.trace().re;
    let col0: Vec<C64> = rho_n.column(0);
    let projected = p.mul_vec(&col0)?;
    let outside: Vec<C64> = col0.iter().zip(&projected).map(|(a, b)| a - b).collect();
    let leak: f64 = outside.iter().map(|z| z.norm_sqr()).sum();
    Ok((kept * kept + leak).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matquant::PureState;

    fn skewed(n: usize, eps: f64) -> SourceModel {
        SourceModel::new(ProbDist::new(vec![0.75, 0.25]).unwrap(), n, eps).unwrap()
    }

    #[test]
    fn typicality_examples() {
        let fair = SourceModel::new(ProbDist::uniform(2), 5, 0.01).unwrap();
        assert!(is_eps_typical(&[1, 0, 0, 1, 1], &fair).unwrap());
        let s = skewed(4, 0.01);
        assert!(is_eps_typical(&[0, 0, 0, 1], &s).unwrap());
        assert!(!is_eps_typical(&[1, 1, 1, 1], &skewed(4, 0.5)).unwrap());
        assert!(is_eps_typical(&[0, 0, 2, 1], &s).is_err());
        assert!(is_eps_typical(&[0, 0], &s).is_err());
        let with_zero = SourceModel::new(ProbDist::new(vec![1.0, 0.0]).unwrap(), 3, 5.0).unwrap();
        assert!(!is_eps_typical(&[0, 1, 0], &with_zero).unwrap());
    }

    #[test]
    fn typical_set_examples() {
        let fair = SourceModel::new(ProbDist::uniform(2), 6, 0.1).unwrap();
        assert_eq!(typical_set(&fair).unwrap().len(), 64);
        let s = skewed(8, 0.2);
        let t = typical_set(&s).unwrap();
        let (lo, hi) = t.size_bounds();
        assert!((t.len() as f64) <= hi && (t.len() as f64) >= lo);
        for i in 0..256u64 {
            let seq = s.sequence_of(i);
            assert_eq!(t.contains(&seq).unwrap(), is_eps_typical(&seq, &s).unwrap());
        }
    }

    #[test]
    fn mass_grows_with_n() {
        let masses: Vec<f64> = [4, 8, 12].iter().map(|&n| typical_set(&skewed(n, 0.3)).unwrap().probability_mass()).collect();
        assert!(masses[0] < masses[1] && masses[1] < masses[2], "{masses:?}");
    }

    #[test]
    fn multinomial_examples() {
        let half = |n| SourceModel::new(ProbDist::uniform(2), n, 0.1).unwrap();
        assert_eq!(multinomial_typical_count(&half(4)).exact, BigUint::from(6u32));
        let big = multinomial_typical_count(&half(64));
        assert!((big.log2_exact - 60.67).abs() < 0.01);
        assert!(big.log_ratio > 0.94);
        assert!(big.rate_gap < multinomial_typical_count(&half(32)).rate_gap);
        let three = SourceModel::new(ProbDist::new(vec![0.5, 0.25, 0.25]).unwrap(), 8, 0.1).unwrap();
        let c = multinomial_typical_count(&three);
        assert_eq!(c.composition, vec![4, 2, 2]);
        assert_eq!(c.exact, BigUint::from(420u32));
        assert!((c.log2_exact - 420f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn composition_rounding_sums_to_n() {
        assert_eq!(round_composition(&[1.0 / 3.0; 3], 4).iter().sum::<usize>(), 4);
        assert_eq!(round_composition(&[0.75, 0.25], 5), vec![4, 1]);
    }

    #[test]
    fn shannon_scheme_examples() {
        let det = SourceModel::new(ProbDist::new(vec![1.0]).unwrap(), 6, 0.1).unwrap();
        let scheme = shannon_scheme(&det, 1.0 / 6.0).unwrap();
        assert!((scheme.reliability() - 1.0).abs() < 1e-15);

        let s = skewed(12, 0.3);
        let high = shannon_scheme(&s, 0.95).unwrap();
        assert!(!high.truncated());
        assert!(high.reliability() > 0.8);
        let low = shannon_scheme(&s, 0.5).unwrap();
        assert!(low.truncated());
        assert!(low.reliability() < 0.5);
        let low8 = shannon_scheme(&skewed(8, 0.3), 0.5).unwrap();
        assert!(low.reliability() < low8.reliability());

        assert!(shannon_scheme(&s, 0.05).is_err());
    }

    #[test]
    fn shannon_roundtrip_exactly_on_encoded_set() {
        let s = skewed(10, 0.3);
        let scheme = shannon_scheme(&s, 0.95).unwrap();
        let t = typical_set(&s).unwrap();
        let mut mass = 0.0;
        for i in 0..1024u64 {
            let seq = s.sequence_of(i);
            let idx = scheme.compress(&seq).unwrap();
            let back = scheme.decompress(idx).unwrap();
            let typical = t.contains(&seq).unwrap();
            assert_eq!(back.as_deref() == Some(&seq[..]), typical);
            if typical {
                mass += s.log2_probability(&seq).unwrap().exp2();
            }
        }
        assert!((mass - scheme.reliability()).abs() < 1e-12);
    }

    #[test]
    fn pure_source_projector() {
        let rho = PureState::plus().density();
        let q = QuantumSourceModel::new(rho.clone(), 3, 0.1).unwrap();
        let p = typical_subspace_projector(&q).unwrap();
        assert!((p.trace().re - 1.0).abs() < 1e-12);
        assert!((q.tensor_power().try_mul(&p).unwrap().trace().re - 1.0).abs() < 1e-12);
        let q1 = QuantumSourceModel::new(rho, 1, 0.1).unwrap();
        assert!((schumacher_fidelity(&q1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projector_matches_classical_typical_set() {
        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        for n in [4, 8] {
            let q = QuantumSourceModel::new(rho.clone(), n, 0.2).unwrap();
            let p = typical_subspace_projector(&q).unwrap();
            assert!((&p * &p).max_abs_diff(&p) < 1e-10);
            assert!(p.is_hermitian(1e-12));
            let t = typical_set(&q.eigen_source()).unwrap();
            assert!((p.trace().re - t.len() as f64).abs() < 1e-9);
            let mass = q.tensor_power().try_mul(&p).unwrap().trace().re;
            assert!((mass - t.probability_mass()).abs() < 1e-10);
        }
    }

    #[test]
    fn schumacher_fidelity_grows() {
        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let f4 = schumacher_fidelity(&QuantumSourceModel::new(rho.clone(), 4, 0.2).unwrap()).unwrap();
        let f8 = schumacher_fidelity(&QuantumSourceModel::new(rho, 8, 0.2).unwrap()).unwrap();
        assert!(f8 > f4, "{f4} {f8}");
    }

    #[test]
    fn compressed_state_is_valid() {
        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let q = QuantumSourceModel::new(rho, 4, 0.2).unwrap();
        let sigma = DensityMatrix::new(q.tensor_power()).unwrap();
        let out = schumacher_compress(&q, &sigma).unwrap();
        assert_eq!(out.dim(), 16);
    }

    #[test]
    fn maximally_mixed_source_below_rate_one() {
        let q = QuantumSourceModel::new(DensityMatrix::maximally_mixed(2), 6, 0.1).unwrap();
        let f = schumacher_fidelity_at_rate(&q, 0.5).unwrap();
        assert!(f < 0.1, "{f}");
        assert!((schumacher_fidelity_at_rate(&q, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }
}
