use std::collections::HashMap;

use num_bigint::BigUint;

use super::{for_each_subset, BitString, Gf2Matrix};
use crate::centropy::binary_entropy;
use crate::error::{Error, Result};

/// Codes with at most this many message bits get an exhaustive distance.
pub const EXHAUSTIVE_DISTANCE_MAX_K: usize = 16;
/// Largest block length a syndrome table is built for.
pub const SYNDROME_TABLE_MAX_N: usize = 24;
const ENUMERATE_MAX_K: usize = 20;

/// An `[n, k, d]` binary linear code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    generator: Gf2Matrix,
    parity_check: Gf2Matrix,
    distance: Option<usize>,
}

impl LinearCode {
    /// Builds a code from its `n×k` generator; the parity check is derived.
    pub fn from_generator(generator: Gf2Matrix) -> Result<Self> {
        let rows = generator.transpose().null_space();
        let h = if rows.is_empty() { Gf2Matrix::zeros(0, generator.rows()) } else { Gf2Matrix::from_rows(&rows)? };
        Self::with_parity_check(generator, h)
    }

    pub fn with_parity_check(generator: Gf2Matrix, parity_check: Gf2Matrix) -> Result<Self> {
        let (n, k) = (generator.rows(), generator.cols());
        if n == 0 {
            return Err(Error::Code("block length must be positive".into()));
        }
        if k > n {
            return Err(Error::Code(format!("k = {k} exceeds n = {n}")));
        }
        if generator.rank() != k {
            return Err(Error::Code("generator columns are linearly dependent".into()));
        }
        if parity_check.cols() != n || parity_check.rows() != n - k {
            return Err(Error::Code(format!(
                "parity check must be {}x{n}, got {}x{}",
                n - k,
                parity_check.rows(),
                parity_check.cols()
            )));
        }
        if parity_check.rank() != n - k {
            return Err(Error::Code("parity check rows are linearly dependent".into()));
        }
        if !parity_check.mul(&generator)?.is_zero() {
            return Err(Error::Code("H·G is not zero".into()));
        }
        let mut code = Self { n, k, generator, parity_check, distance: None };
        if k > 0 && k <= EXHAUSTIVE_DISTANCE_MAX_K {
            code.distance = Some(code.min_weight());
        }
        Ok(code)
    }

    /// Columns of the generator given as `0`/`1` strings.
    pub fn from_generator_columns(columns: &[&str]) -> Result<Self> {
        let cols = columns.iter().map(|s| s.parse()).collect::<Result<Vec<BitString>>>()?;
        let n = cols.first().map_or(0, BitString::len);
        Self::from_generator(Gf2Matrix::from_columns(n, &cols)?)
    }

    /// `[3,1,3]`
    pub fn repetition3() -> Self {
        let g = Gf2Matrix::from_strs(&["1", "1", "1"]).expect("fixture");
        let h = Gf2Matrix::from_strs(&["110", "011"]).expect("fixture");
        Self::with_parity_check(g, h).expect("fixture")
    }

    /// `[3,2,2]`, the dual of the repetition code.
    pub fn parity3() -> Self {
        dual_code(&Self::repetition3())
    }

    /// `[7,4,3]` with parity-check column `i` equal to `i+1` in binary, so a
    /// single flip at position `i` has syndrome `i+1`.
    ///
    /// Generator columns: `1110000`, `1001100`, `0101010`, `1101001`.
    pub fn hamming7() -> Self {
        let cols: Vec<BitString> =
            ["1110000", "1001100", "0101010", "1101001"].iter().map(|s| s.parse().expect("fixture")).collect();
        let g = Gf2Matrix::from_columns(7, &cols).expect("fixture");
        let h = Gf2Matrix::from_strs(&["0001111", "0110011", "1010101"]).expect("fixture");
        Self::with_parity_check(g, h).expect("fixture")
    }

    /// `[7,3,4]` simplex code, the dual of [`LinearCode::hamming7`].
    pub fn simplex7() -> Self {
        dual_code(&Self::hamming7())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &Gf2Matrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &Gf2Matrix {
        &self.parity_check
    }

    /// Minimum nonzero codeword weight; `None` for the zero code and for
    /// codes too large to enumerate.
    pub fn distance(&self) -> Option<usize> {
        self.distance
    }

    /// Largest `t` with `2t + 1 ≤ d`. The zero code corrects everything.
    pub fn correctable_errors(&self) -> Result<usize> {
        if self.k == 0 {
            return Ok(self.n);
        }
        let d = self.distance.ok_or_else(|| Error::Code("distance unavailable".into()))?;
        Ok((d - 1) / 2)
    }

    pub fn encode(&self, msg: &BitString) -> Result<BitString> {
        self.generator.mul_vec(msg)
    }

    pub fn syndrome(&self, received: &BitString) -> Result<BitString> {
        self.parity_check.mul_vec(received)
    }

    pub fn contains(&self, word: &BitString) -> Result<bool> {
        Ok(self.syndrome(word)?.is_zero())
    }

    /// Every generator column of `self` is a codeword of `other`.
    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.generator.columns().iter().all(|c| other.syndrome(c).is_ok_and(|s| s.is_zero()))
    }

    /// `C ⊆ C⊥`
    pub fn is_weakly_self_dual(&self) -> bool {
        self.is_subcode_of(&dual_code(self))
    }

    /// All `2^k` codewords, in Gray-code order starting from zero.
    pub fn codewords(&self) -> Result<Vec<BitString>> {
        if self.k > ENUMERATE_MAX_K {
            return Err(Error::SizeCap(format!("2^{} codewords", self.k)));
        }
        let mut out = Vec::with_capacity(1 << self.k);
        self.for_each_codeword(|w| out.push(w.clone()));
        Ok(out)
    }

    fn for_each_codeword(&self, mut f: impl FnMut(&BitString)) {
        let cols = self.generator.columns();
        let mut word = BitString::zeros(self.n);
        f(&word);
        for i in 1u64..(1u64 << self.k) {
            word.xor_assign(&cols[i.trailing_zeros() as usize]);
            f(&word);
        }
    }

    fn min_weight(&self) -> usize {
        let mut best = usize::MAX;
        let mut first = true;
        self.for_each_codeword(|w| {
            if !std::mem::take(&mut first) {
                best = best.min(w.weight());
            }
        });
        best
    }

    pub fn decoder(&self, t: usize) -> Result<SyndromeDecoder> {
        SyndromeDecoder::new(self.clone(), t)
    }
}

/// `G·msg`
pub fn encode(c: &LinearCode, msg: &BitString) -> Result<BitString> {
    c.encode(msg)
}

/// `H·received`
pub fn syndrome(c: &LinearCode, received: &BitString) -> Result<BitString> {
    c.syndrome(received)
}

/// Nearest codeword within radius `t`, or `None` when there is none.
pub fn decode(c: &LinearCode, received: &BitString, t: usize) -> Result<Option<Decoding>> {
    c.decoder(t)?.decode(received)
}

/// Generator `Hᵀ`, parity check `Gᵀ`.
pub fn dual_code(c: &LinearCode) -> LinearCode {
    LinearCode::with_parity_check(c.parity_check.transpose(), c.generator.transpose())
        .expect("the dual of a valid code is valid")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoding {
    pub codeword: BitString,
    pub error: BitString,
}

/// Lookup table from syndromes to minimum-weight error patterns of weight
/// at most `t`.
#[derive(Debug, Clone)]
pub struct SyndromeDecoder {
    code: LinearCode,
    t: usize,
    // `None` marks a syndrome shared by two patterns of equal minimal weight
    table: HashMap<BitString, Option<BitString>>,
}

impl SyndromeDecoder {
    pub fn new(code: LinearCode, t: usize) -> Result<Self> {
        if code.n > SYNDROME_TABLE_MAX_N {
            return Err(Error::SizeCap(format!("syndrome table for n = {} > {SYNDROME_TABLE_MAX_N}", code.n)));
        }
        let max_t = code.correctable_errors()?;
        if t > max_t {
            return Err(Error::Code(format!(
                "t = {t} needs distance {} but the code has distance {:?}",
                2 * t + 1,
                code.distance
            )));
        }
        let mut table: HashMap<BitString, Option<BitString>> = HashMap::new();
        for w in 0..=t {
            let mut fresh: HashMap<BitString, Option<BitString>> = HashMap::new();
            for_each_subset(code.n, w, |positions| {
                let mut e = BitString::zeros(code.n);
                for &p in positions {
                    e.set(p, 1);
                }
                let s = code.parity_check.mul_vec_unchecked(&e);
                if table.contains_key(&s) {
                    return;
                }
                fresh.entry(s).and_modify(|slot| *slot = None).or_insert(Some(e));
            });
            table.extend(fresh);
        }
        Ok(Self { code, t, table })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn decode(&self, received: &BitString) -> Result<Option<Decoding>> {
        let s = self.code.syndrome(received)?;
        Ok(self.correct_syndrome(&s).map(|error| Decoding { codeword: received.xor_unchecked(&error), error }))
    }

    /// The error pattern for a syndrome, if one is uniquely correctable.
    pub fn correct_syndrome(&self, s: &BitString) -> Option<BitString> {
        self.table.get(s).cloned().flatten()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub t: usize,
    /// `n − k ≥ d − 1`
    pub singleton_ok: bool,
    /// `1 − H_bin(t/n)`, the asymptotic rate guaranteed to exist.
    pub gv_rate: f64,
    pub meets_asymptotic_gv: bool,
    /// Largest `k` for which a length-`n`, distance-`d` code is guaranteed
    /// by the Varshamov construction.
    pub gv_guaranteed_k: usize,
    /// `k` is at least the guaranteed dimension.
    pub gv_ok: bool,
}

pub fn code_bounds(c: &LinearCode) -> Result<BoundsReport> {
    let d = c.distance.ok_or_else(|| Error::Code("distance unavailable".into()))?;
    let t = (d - 1) / 2;
    let gv_rate = 1.0 - binary_entropy(t as f64 / c.n as f64);
    let k_gv = varshamov_dimension(c.n, d);
    Ok(BoundsReport {
        n: c.n,
        k: c.k,
        d,
        t,
        singleton_ok: c.n - c.k + 1 >= d,
        gv_rate,
        meets_asymptotic_gv: c.k as f64 / c.n as f64 >= gv_rate,
        gv_guaranteed_k: k_gv,
        gv_ok: c.k >= k_gv,
    })
}

/// Largest `k` with `Σ_{i<d−1} C(n−1, i) < 2^{n−k}`.
pub(crate) fn varshamov_dimension(n: usize, d: usize) -> usize {
    let mut sum = BigUint::from(0u32);
    let mut binom = BigUint::from(1u32);
    for i in 0..d.saturating_sub(1) {
        if i > n - 1 {
            break;
        }
        sum += &binom;
        binom = binom * (n - 1 - i) / (i + 1);
    }
    n.saturating_sub(sum.bits() as usize)
}
