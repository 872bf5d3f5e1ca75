//! Linear block codes over GF(2), their bounds, and CSS quantum codes.
//!
//! Generators are `n×k` and act on column messages, so a codeword is `G·x`.

mod css;
mod linear;
mod text;

pub use css::{css_basis_state, css_construct, simulate_css_correction, CssBounds, CssCode, CssCorrection};
pub use linear::{
    code_bounds, decode, dual_code, encode, syndrome, BoundsReport, Decoding, LinearCode, SyndromeDecoder,
};
pub use text::{format_code, parse_code};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A string of bits stored one per byte. Serialized as a `0`/`1` string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Parse("bits must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n] }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut b = Self::zeros(n);
        b.bits[i] = 1;
        b
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self { bits: bits.iter().map(|&b| b as u8).collect() }
    }

    /// The low `n` bits of `value`, most significant first.
    pub fn from_index(value: u64, n: usize) -> Self {
        Self { bits: (0..n).map(|i| ((value >> (n - 1 - i)) & 1) as u8).collect() }
    }

    /// Inverse of [`BitString::from_index`]; `None` past 64 bits.
    pub fn to_index(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self { bits: (0..n).map(|_| rng.random::<bool>() as u8).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, bit: u8) {
        self.bits[i] = bit & 1;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] ^= 1;
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    fn check_len(&self, other: &BitString) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Length { expected: self.len(), got: other.len() });
        }
        Ok(())
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        self.check_len(other)?;
        Ok(self.xor_unchecked(other))
    }

    pub(crate) fn xor_unchecked(&self, other: &BitString) -> BitString {
        BitString { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect() }
    }

    pub(crate) fn xor_assign(&mut self, other: &BitString) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitString) -> Result<u8> {
        self.check_len(other)?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &BitString) -> u8 {
        self.bits.iter().zip(&other.bits).fold(0, |acc, (a, b)| acc ^ (a & b))
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString { bits: self.bits[start..end].to_vec() }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self { bits })
    }
}

impl TryFrom<String> for BitString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.to_string()
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &BitString, b: &BitString) -> Result<usize> {
    a.check_len(b)?;
    Ok(a.bits.iter().zip(&b.bits).filter(|(x, y)| x != y).count())
}

/// Whether `s` lies in the Hamming sphere of the given radius around `c`.
pub fn in_sphere(c: &BitString, s: &BitString, radius: usize) -> Result<bool> {
    Ok(hamming_distance(c, s)? <= radius)
}

/// Dense GF(2) matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[BitString]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitString::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Length { expected: cols, got: r.len() });
            }
            data.extend_from_slice(&r.bits);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given strings. `rows` fixes
    /// the height when there are no columns.
    pub fn from_columns(rows: usize, columns: &[BitString]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Length { expected: rows, got: c.len() });
            }
            for i in 0..rows {
                m.data[i * m.cols + j] = c.bits[i];
            }
        }
        Ok(m)
    }

    /// Parses rows written as `0`/`1` strings.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let rows = rows.iter().map(|s| s.parse()).collect::<Result<Vec<BitString>>>()?;
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, bit: u8) {
        self.data[r * self.cols + c] = bit & 1;
    }

    pub fn row(&self, r: usize) -> BitString {
        BitString { bits: self.data[r * self.cols..(r + 1) * self.cols].to_vec() }
    }

    pub fn column(&self, c: usize) -> BitString {
        BitString { bits: (0..self.rows).map(|r| self.get(r, c)).collect() }
    }

    pub fn columns(&self) -> Vec<BitString> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&b| b == 0)
    }

    pub fn mul_vec(&self, v: &BitString) -> Result<BitString> {
        if v.len() != self.cols {
            return Err(Error::Length { expected: self.cols, got: v.len() });
        }
        Ok(self.mul_vec_unchecked(v))
    }

    pub(crate) fn mul_vec_unchecked(&self, v: &BitString) -> BitString {
        let bits = (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].iter().zip(&v.bits).fold(0, |acc, (a, b)| acc ^ (a & b)))
            .collect();
        BitString { bits }
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) == 1 {
                    for c in 0..other.cols {
                        out.data[r * other.cols + c] ^= other.get(k, c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, col) == 1) else { continue };
            m.swap_rows(row, p);
            for r in 0..m.rows {
                if r != row && m.get(r, col) == 1 {
                    m.add_row(row, r);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    // row[dst] ^= row[src]
    fn add_row(&mut self, src: usize, dst: usize) {
        for c in 0..self.cols {
            self.data[dst * self.cols + c] ^= self.data[src * self.cols + c];
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M·x = 0}`.
    pub fn null_space(&self) -> Vec<BitString> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = BitString::zeros(self.cols);
                x.bits[f] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    x.bits[p] = r.get(i, f);
                }
                x
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Gf2Matrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("only square matrices are invertible".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Domain("matrix is singular over GF(2)".into()));
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c));
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{}", self.row(r))?;
        }
        Ok(())
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
