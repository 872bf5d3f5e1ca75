//! Monte-Carlo simulation of BB84 with CSS-based information
//! reconciliation and privacy amplification.
//!
//! Each qubit is carried as its own 2×2 density matrix. Randomness comes
//! from ChaCha20 keyed by a per-trial seed, with a separate stream for each
//! party and purpose, so any trial can be replayed from its seed alone.

mod config;
mod stats;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2codes::{BitString, CssCode, SyndromeDecoder};
use crate::matquant::{
    apply_operation, outcome_probabilities, DensityMatrix, MeasurementSet, PureState, QuantumOperation,
};
use crate::qentropy::coherent_information;
use crate::random::{self, SeededRng};

pub use config::{parse_qkd_config, CssSpec, QkdConfigFile, MAX_KEY_BLOCK, MAX_OVERHEAD};
pub use stats::{
    eve_information_estimate, run_batch, summarize, summary_csv, BatchSummary, EveInformation, TrialSummary,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Computational,
    Hadamard,
}

impl Basis {
    pub fn from_bit(b: u8) -> Self {
        if b == 0 {
            Basis::Computational
        } else {
            Basis::Hadamard
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Basis::Computational => 0,
            Basis::Hadamard => 1,
        }
    }

    pub fn measurement(self) -> MeasurementSet {
        match self {
            Basis::Computational => MeasurementSet::computational(2),
            Basis::Hadamard => MeasurementSet::hadamard_basis(),
        }
    }
}

/// `|ψ_{ab}⟩`: `|0⟩, |1⟩` for `b = 0` and `|+⟩, |−⟩` for `b = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bb84State {
    pub a_bit: u8,
    pub b_basis: Basis,
}

impl Bb84State {
    pub fn new(a_bit: u8, b_basis: Basis) -> Result<Self> {
        if a_bit > 1 {
            return Err(Error::Domain(format!("bit value {a_bit}")));
        }
        Ok(Self { a_bit, b_basis })
    }

    pub fn pure_state(self) -> PureState {
        match (self.b_basis, self.a_bit) {
            (Basis::Computational, b) => PureState::basis(2, b as usize),
            (Basis::Hadamard, 0) => PureState::plus(),
            (Basis::Hadamard, _) => PureState::minus(),
        }
    }

    pub fn density(self) -> DensityMatrix {
        self.pure_state().density()
    }

    fn index(self) -> usize {
        2 * self.b_basis.bit() as usize + self.a_bit as usize
    }

    fn all() -> [Bb84State; 4] {
        [Basis::Computational, Basis::Hadamard].map(|b| [0, 1].map(|a| Bb84State { a_bit: a, b_basis: b })).concat()
            .try_into()
            .expect("four states")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelModel {
    Ideal,
    /// `ρ ↦ (1−f)ρ + f·I/2`
    Depolarizing { f: f64 },
    /// Eve intercepts each qubit with probability `fraction`, measures it
    /// in a uniformly random basis and resends the eigenstate she saw.
    InterceptResend { fraction: f64 },
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        let p = match *self {
            ChannelModel::Ideal => return Ok(()),
            ChannelModel::Depolarizing { f } => f,
            ChannelModel::InterceptResend { fraction } => fraction,
        };
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("channel parameter {p} outside [0, 1]")));
        }
        Ok(())
    }

    /// The noise applied on the wire, apart from any eavesdropper.
    pub fn operation(&self) -> Result<QuantumOperation> {
        self.validate()?;
        match *self {
            ChannelModel::Depolarizing { f } => QuantumOperation::qubit_depolarizing(f),
            _ => Ok(QuantumOperation::identity(2)),
        }
    }

    fn intercept_fraction(&self) -> f64 {
        match *self {
            ChannelModel::InterceptResend { fraction } => fraction,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    pub n: usize,
    pub delta: f64,
    pub threshold_t: usize,
    pub css: CssCode,
    pub master_seed: u64,
}

impl ProtocolConfig {
    /// Threshold defaults to `⌊0.11·n⌋`.
    pub fn new(n: usize, delta: f64, threshold_t: Option<usize>, css: CssCode, master_seed: u64) -> Result<Self> {
        let cfg = Self { n, delta, threshold_t: threshold_t.unwrap_or((0.11 * n as f64) as usize), css, master_seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_KEY_BLOCK {
            return Err(Error::Config(format!("n = {} outside 1..={MAX_KEY_BLOCK}", self.n)));
        }
        if !self.delta.is_finite() || !(0.0..=MAX_OVERHEAD).contains(&self.delta) {
            return Err(Error::Config(format!("delta = {} outside [0, {MAX_OVERHEAD}]", self.delta)));
        }
        if self.threshold_t >= self.n {
            return Err(Error::Config(format!("threshold {} must be below n = {}", self.threshold_t, self.n)));
        }
        if self.css.n() > self.n {
            return Err(Error::Config(format!("code length {} exceeds n = {}", self.css.n(), self.n)));
        }
        Ok(())
    }

    /// `⌈(4+δ)n⌉`
    pub fn qubit_count(&self) -> usize {
        ((4.0 + self.delta) * self.n as f64).ceil() as usize
    }

    pub fn blocks(&self) -> usize {
        self.n / self.css.n()
    }

    pub fn key_length(&self) -> usize {
        self.blocks() * self.css.logical_bits()
    }

    pub fn trial_seed(&self, trial: u64) -> u64 {
        random::derive_seed(self.master_seed, trial)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum AbortReason {
    InsufficientSifted { sifted: usize, required: usize },
    TooManyDisagreements { disagreements: usize, threshold: usize },
}

/// Eve's bases and outcomes; positions she left alone hold 0 in both and
/// are marked in `intercepted`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveRecord {
    pub intercepted: BitString,
    pub bases: BitString,
    pub bits: BitString,
}

/// Complete record of one run. Bases are bit strings with 1 for Hadamard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolTranscript {
    pub trial: u64,
    pub seed: u64,
    pub alice_bits: BitString,
    pub alice_bases: BitString,
    pub bob_bases: BitString,
    pub bob_bits: BitString,
    pub sift_mask: BitString,
    pub sifted_count: usize,
    pub check_indices: Vec<usize>,
    pub key_indices: Vec<usize>,
    pub disagreements: usize,
    pub qber_estimate: Option<f64>,
    pub aborted: bool,
    pub abort_reason: Option<AbortReason>,
    pub announced_offset: BitString,
    pub alice_key: BitString,
    pub bob_key: BitString,
    pub reconciled_blocks: usize,
    pub failed_blocks: usize,
    pub eve: Option<EveRecord>,
}

/// What Alice and Bob say over the public channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublicRecord {
    pub alice_bases: BitString,
    pub bob_bases: BitString,
    pub check_indices: Vec<usize>,
    pub alice_check_bits: BitString,
    pub bob_check_bits: BitString,
    pub key_indices: Vec<usize>,
    pub announced_offset: BitString,
}

impl ProtocolTranscript {
    pub fn keys_match(&self) -> bool {
        !self.aborted && self.alice_key == self.bob_key
    }

    pub fn key_len(&self) -> usize {
        self.alice_key.len()
    }

    pub fn public_record(&self) -> PublicRecord {
        let pick = |s: &BitString, idx: &[usize]| BitString::from_bools(&idx.iter().map(|&i| s.get(i) == 1).collect::<Vec<_>>());
        PublicRecord {
            alice_bases: self.alice_bases.clone(),
            bob_bases: self.bob_bases.clone(),
            check_indices: self.check_indices.clone(),
            alice_check_bits: pick(&self.alice_bits, &self.check_indices),
            bob_check_bits: pick(&self.bob_bits, &self.check_indices),
            key_indices: self.key_indices.clone(),
            announced_offset: self.announced_offset.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcripts always serialize")
    }

    /// Parses a transcript and checks that its fields are mutually
    /// consistent.
    pub fn from_json(text: &str) -> Result<Self> {
        let t: Self = serde_json::from_str(text)?;
        t.check_consistency()?;
        Ok(t)
    }

    pub fn check_consistency(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Parse(format!("inconsistent transcript: {what}")));
        let len = self.alice_bits.len();
        if [&self.alice_bases, &self.bob_bases, &self.bob_bits, &self.sift_mask].iter().any(|s| s.len() != len) {
            return bad("per-qubit fields differ in length");
        }
        for i in 0..len {
            if self.sift_mask.get(i) != (self.alice_bases.get(i) == self.bob_bases.get(i)) as u8 {
                return bad("sift mask disagrees with the bases");
            }
        }
        if self.sifted_count != self.sift_mask.weight() {
            return bad("sifted count");
        }
        let mut seen = vec![false; len];
        for &i in self.check_indices.iter().chain(&self.key_indices) {
            if i >= len || self.sift_mask.get(i) == 0 || std::mem::replace(&mut seen[i], true) {
                return bad("selected positions");
            }
        }
        if self.check_indices.len() != self.key_indices.len() {
            return bad("check and key selections differ in size");
        }
        let counted = self.check_indices.iter().filter(|&&i| self.alice_bits.get(i) != self.bob_bits.get(i)).count();
        if counted != self.disagreements {
            return bad("disagreement count");
        }
        if self.aborted != self.abort_reason.is_some() {
            return bad("abort flag");
        }
        if self.alice_key.len() != self.bob_key.len() || (self.aborted && !self.alice_key.is_empty()) {
            return bad("key lengths");
        }
        if let Some(eve) = &self.eve {
            if [&eve.intercepted, &eve.bases, &eve.bits].iter().any(|s| s.len() != len) {
                return bad("eavesdropper record length");
            }
        }
        Ok(())
    }
}

// Stream numbers for the per-purpose generators.
const STREAM_ALICE_BITS: u64 = 1;
const STREAM_ALICE_BASES: u64 = 2;
const STREAM_BOB_BASES: u64 = 3;
const STREAM_EVE: u64 = 4;
const STREAM_WIRE: u64 = 5;
const STREAM_BOB_MEASURE: u64 = 6;
const STREAM_SELECTION: u64 = 7;
const STREAM_CODEWORDS: u64 = 8;

fn stream(seed: u64, id: u64) -> SeededRng {
    let mut rng = random::seeded(seed);
    rng.set_stream(id);
    rng
}

/// Born-rule sample: outcome 1 with probability `p_one`.
fn sample<R: Rng + ?Sized>(p_one: f64, rng: &mut R) -> u8 {
    (rng.random::<f64>() < p_one) as u8
}

/// Measures one qubit in `basis`, returning 0 for `|0⟩`/`|+⟩` and 1 for
/// `|1⟩`/`|−⟩`.
pub fn measure_qubit<R: Rng + ?Sized>(rho: &DensityMatrix, basis: Basis, rng: &mut R) -> Result<u8> {
    Ok(sample(outcome_probabilities(rho, &basis.measurement())?[1], rng))
}

/// `P(outcome 1)` for each prepared state (by index) and each basis, after
/// the wire noise.
struct OutcomeTable {
    wire: [[f64; 2]; 4],
    clean: [[f64; 2]; 4],
}

impl OutcomeTable {
    fn new(ch: &ChannelModel) -> Result<Self> {
        let op = ch.operation()?;
        let mut wire = [[0.0; 2]; 4];
        let mut clean = [[0.0; 2]; 4];
        for s in Bb84State::all() {
            let noisy = apply_operation(&s.density(), &op)?;
            for m in [Basis::Computational, Basis::Hadamard] {
                wire[s.index()][m.bit() as usize] = outcome_probabilities(&noisy, &m.measurement())?[1];
                clean[s.index()][m.bit() as usize] = outcome_probabilities(&s.density(), &m.measurement())?[1];
            }
        }
        Ok(Self { wire, clean })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconciliation {
    pub key_a: BitString,
    pub key_b: BitString,
    pub success: bool,
}

/// One block of steps 9 and 10: Alice announces `x_A ⊕ v_k`, Bob decodes
/// `x_B ⊕ x_A ⊕ v_k` with `C₁`, and each side keeps the coset label of
/// its `v_k` in `C₁/C₂`.
pub fn reconcile_and_amplify(code: &CssCode, x_alice: &BitString, x_bob: &BitString, v_k: &BitString) -> Result<Reconciliation> {
    reconcile_with(code, &code.c1_decoder()?, x_alice, x_bob, v_k).map(|(r, _)| r)
}

fn reconcile_with(
    code: &CssCode,
    decoder: &SyndromeDecoder,
    x_alice: &BitString,
    x_bob: &BitString,
    v_k: &BitString,
) -> Result<(Reconciliation, BitString)> {
    let announced = x_alice.xor(v_k)?;
    let key_a = code.coset_label(v_k)?;
    let received = x_bob.xor(&announced)?;
    let (key_b, success) = match decoder.decode(&received)? {
        Some(d) => {
            let key = code.coset_label(&d.codeword)?;
            let ok = d.codeword == *v_k;
            (key, ok)
        }
        None => (BitString::zeros(key_a.len()), false),
    };
    Ok((Reconciliation { key_a, key_b, success }, announced))
}

/// `I(ρ, 𝓔)`, a lower bound on the privacy of the channel.
pub fn privacy_lower_bound(rho: &DensityMatrix, op: &QuantumOperation) -> Result<f64> {
    coherent_information(rho, op)
}

/// Runs trial `trial` of the protocol with seed derived from the master
/// seed.
pub fn run_bb84(cfg: &ProtocolConfig, ch: &ChannelModel, trial: u64) -> Result<ProtocolTranscript> {
    cfg.validate()?;
    let table = OutcomeTable::new(ch)?;
    let decoder = cfg.css.c1_decoder()?;
    run_prepared(cfg, ch, &table, &decoder, trial)
}

fn run_prepared(
    cfg: &ProtocolConfig,
    ch: &ChannelModel,
    table: &OutcomeTable,
    decoder: &SyndromeDecoder,
    trial: u64,
) -> Result<ProtocolTranscript> {
    let seed = cfg.trial_seed(trial);
    let count = cfg.qubit_count();
    let n = cfg.n;

    // 1–2. Alice's bits and bases
    let alice_bits = BitString::random(count, &mut stream(seed, STREAM_ALICE_BITS));
    let alice_bases = BitString::random(count, &mut stream(seed, STREAM_ALICE_BASES));
    // 5. Bob's bases, chosen independently of everything on the wire
    let bob_bases = BitString::random(count, &mut stream(seed, STREAM_BOB_BASES));

    // 3, 5. Transmission and measurement
    let fraction = ch.intercept_fraction();
    let mut eve_rng = stream(seed, STREAM_EVE);
    let mut wire_rng = stream(seed, STREAM_WIRE);
    let mut bob_rng = stream(seed, STREAM_BOB_MEASURE);
    let mut eve = (fraction > 0.0).then(|| EveRecord {
        intercepted: BitString::zeros(count),
        bases: BitString::zeros(count),
        bits: BitString::zeros(count),
    });
    let mut bob_bits = BitString::zeros(count);
    for i in 0..count {
        let mut sent = Bb84State { a_bit: alice_bits.get(i), b_basis: Basis::from_bit(alice_bases.get(i)) };
        if let Some(rec) = eve.as_mut() {
            if eve_rng.random::<f64>() < fraction {
                let basis = Basis::from_bit(eve_rng.random::<bool>() as u8);
                let bit = sample(table.clean[sent.index()][basis.bit() as usize], &mut wire_rng);
                rec.intercepted.set(i, 1);
                rec.bases.set(i, basis.bit());
                rec.bits.set(i, bit);
                sent = Bb84State { a_bit: bit, b_basis: basis };
            }
        }
        bob_bits.set(i, sample(table.wire[sent.index()][bob_bases.get(i) as usize], &mut bob_rng));
    }

    // 6–7. Sifting and selection
    let sift_mask = BitString::from_bools(&(0..count).map(|i| alice_bases.get(i) == bob_bases.get(i)).collect::<Vec<_>>());
    let sifted: Vec<usize> = (0..count).filter(|&i| sift_mask.get(i) == 1).collect();
    let sifted_count = sifted.len();
    let mut transcript = ProtocolTranscript {
        trial,
        seed,
        alice_bits,
        alice_bases,
        bob_bases,
        bob_bits,
        sift_mask,
        sifted_count,
        check_indices: Vec::new(),
        key_indices: Vec::new(),
        disagreements: 0,
        qber_estimate: None,
        aborted: false,
        abort_reason: None,
        announced_offset: BitString::zeros(0),
        alice_key: BitString::zeros(0),
        bob_key: BitString::zeros(0),
        reconciled_blocks: 0,
        failed_blocks: 0,
        eve,
    };
    if sifted_count < 2 * n {
        transcript.aborted = true;
        transcript.abort_reason = Some(AbortReason::InsufficientSifted { sifted: sifted_count, required: 2 * n });
        return Ok(transcript);
    }
    let mut chosen = sifted;
    chosen.shuffle(&mut stream(seed, STREAM_SELECTION));
    chosen.truncate(2 * n);
    let mut key_indices = chosen.split_off(n);
    let mut check_indices = chosen;
    check_indices.sort_unstable();
    key_indices.sort_unstable();

    // 8. Error estimate
    let t = &mut transcript;
    t.disagreements = check_indices.iter().filter(|&&i| t.alice_bits.get(i) != t.bob_bits.get(i)).count();
    t.qber_estimate = Some(t.disagreements as f64 / n as f64);
    t.check_indices = check_indices;
    t.key_indices = key_indices;
    if t.disagreements > cfg.threshold_t {
        t.aborted = true;
        t.abort_reason = Some(AbortReason::TooManyDisagreements { disagreements: t.disagreements, threshold: cfg.threshold_t });
        return Ok(transcript);
    }

    // 4, 9–10. Random codewords, reconciliation and privacy amplification
    let code = &cfg.css;
    let block = code.n();
    let mut code_rng = stream(seed, STREAM_CODEWORDS);
    let pick = |s: &BitString, idx: &[usize]| BitString::from_bools(&idx.iter().map(|&i| s.get(i) == 1).collect::<Vec<_>>());
    let mut announced = Vec::with_capacity(cfg.blocks() * block);
    let (mut key_a, mut key_b) = (Vec::new(), Vec::new());
    for chunk in t.key_indices.chunks_exact(block) {
        let v_k = code.c1().encode(&BitString::random(code.c1().k(), &mut code_rng))?;
        let (r, offset) = reconcile_with(code, decoder, &pick(&t.alice_bits, chunk), &pick(&t.bob_bits, chunk), &v_k)?;
        announced.extend_from_slice(offset.bits());
        key_a.extend_from_slice(r.key_a.bits());
        key_b.extend_from_slice(r.key_b.bits());
        t.reconciled_blocks += 1;
        t.failed_blocks += usize::from(!r.success);
    }
    t.announced_offset = BitString::new(announced)?;
    t.alice_key = BitString::new(key_a)?;
    t.bob_key = BitString::new(key_b)?;
    Ok(transcript)
}
