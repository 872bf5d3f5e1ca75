//! Classical information measures over finite distributions.
//!
//! Joint distributions are dense row-major tables over any number of axes.
//! Every entropy goes through the `0·log0 = 0` convention, and conditional
//! quantities are defined as differences of joint entropies.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::xlog2x;
use crate::tolerance;

/// A probability vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbDist {
    probs: Vec<f64>,
    #[serde(skip)]
    labels: Option<Vec<String>>,
}

impl ProbDist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate_probs(&probs)?;
        Ok(Self { probs, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.probs.len() {
            return Err(Error::Length { expected: self.probs.len(), got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n], labels: None }
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::Domain("weights must be nonnegative with positive sum".into()));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

impl TryFrom<Vec<f64>> for ProbDist {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ProbDist> for Vec<f64> {
    fn from(p: ProbDist) -> Vec<f64> {
        p.probs
    }
}

fn validate_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::Domain("empty distribution".into()));
    }
    if let Some(bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::Domain(format!("invalid probability {bad}")));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > tolerance::NORM {
        return Err(Error::Domain(format!("probabilities sum to {total}")));
    }
    Ok(())
}

/// Joint distribution over several finite variables. The first axis is the
/// slowest-varying index of `table`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    cards: Vec<usize>,
    table: Vec<f64>,
}

impl JointDist {
    pub fn new(cards: Vec<usize>, table: Vec<f64>) -> Result<Self> {
        if cards.is_empty() || cards.contains(&0) {
            return Err(Error::Dimension("cardinalities must be positive".into()));
        }
        let size: usize = cards.iter().product();
        if table.len() != size {
            return Err(Error::Length { expected: size, got: table.len() });
        }
        validate_probs(&table)?;
        Ok(Self { cards, table })
    }

    /// Two-variable joint from a row-per-x table.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged joint table".into()));
        }
        Self::new(vec![rows.len(), cols], rows.concat())
    }

    /// `p(x)·q(y)·…` for independent variables.
    pub fn product(marginals: &[&ProbDist]) -> Self {
        let cards = marginals.iter().map(|m| m.len()).collect();
        let mut table = vec![1.0];
        for m in marginals {
            table = table.iter().flat_map(|&a| m.probs().iter().map(move |&b| a * b)).collect();
        }
        Self { cards, table }
    }

    /// Full-support random joint: exponential cells, normalized.
    pub fn random<R: Rng + ?Sized>(cards: &[usize], rng: &mut R) -> Self {
        let size: usize = cards.iter().product();
        let raw: Vec<f64> = (0..size).map(|_| rng.sample::<f64, _>(rand_distr::Exp1) + 1e-12).collect();
        let total: f64 = raw.iter().sum();
        Self { cards: cards.to_vec(), table: raw.into_iter().map(|x| x / total).collect() }
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn axes(&self) -> usize {
        self.cards.len()
    }

    /// Probability at a multi-index.
    pub fn get(&self, index: &[usize]) -> f64 {
        self.table[self.flat(index)]
    }

    fn flat(&self, index: &[usize]) -> usize {
        index.iter().zip(&self.cards).fold(0, |acc, (&i, &c)| acc * c + i)
    }

    fn unflat(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.cards.len()];
        for (slot, &c) in idx.iter_mut().zip(&self.cards).rev() {
            *slot = flat % c;
            flat /= c;
        }
        idx
    }

    fn check_axes(&self, axes: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.axes()];
        for &a in axes {
            if a >= self.axes() || seen[a] {
                return Err(Error::Dimension(format!("axis selection {axes:?} invalid for {} axes", self.axes())));
            }
            seen[a] = true;
        }
        Ok(())
    }

    /// Marginal over the listed axes, in the listed order.
    pub fn marginal(&self, axes: &[usize]) -> Result<JointDist> {
        self.check_axes(axes)?;
        if axes.is_empty() {
            return Ok(JointDist { cards: vec![1], table: vec![1.0] });
        }
        let cards: Vec<usize> = axes.iter().map(|&a| self.cards[a]).collect();
        let mut table = vec![0.0; cards.iter().product()];
        for (flat, &p) in self.table.iter().enumerate() {
            let idx = self.unflat(flat);
            let out = axes.iter().fold(0, |acc, &a| acc * self.cards[a] + idx[a]);
            table[out] += p;
        }
        Ok(JointDist { cards, table })
    }

    pub fn marginal_dist(&self, axis: usize) -> Result<ProbDist> {
        let m = self.marginal(&[axis])?;
        Ok(ProbDist { probs: m.table, labels: None })
    }

    /// `H` of the listed axes jointly.
    pub fn entropy_of(&self, axes: &[usize]) -> Result<f64> {
        Ok(entropy_of_slice(&self.marginal(axes)?.table))
    }

    /// `H(A | B) = H(A,B) − H(B)`.
    pub fn conditional_entropy_of(&self, a: &[usize], given: &[usize]) -> Result<f64> {
        let joint: Vec<usize> = a.iter().chain(given).copied().collect();
        Ok(self.entropy_of(&joint)? - self.entropy_of(given)?)
    }

    /// `H(A : B) = H(A) + H(B) − H(A,B)`.
    pub fn mutual_information_of(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        let joint: Vec<usize> = a.iter().chain(b).copied().collect();
        Ok(self.entropy_of(a)? + self.entropy_of(b)? - self.entropy_of(&joint)?)
    }

    /// `H(A : B | C) = H(A,C) + H(B,C) − H(A,B,C) − H(C)`.
    pub fn conditional_mutual_information_of(&self, a: &[usize], b: &[usize], c: &[usize]) -> Result<f64> {
        let ac: Vec<usize> = a.iter().chain(c).copied().collect();
        let bc: Vec<usize> = b.iter().chain(c).copied().collect();
        let abc: Vec<usize> = a.iter().chain(b).chain(c).copied().collect();
        Ok(self.entropy_of(&ac)? + self.entropy_of(&bc)? - self.entropy_of(&abc)? - self.entropy_of(c)?)
    }
}

fn entropy_of_slice(probs: &[f64]) -> f64 {
    let h: f64 = -probs.iter().map(|&p| xlog2x(p)).sum::<f64>();
    h.max(0.0)
}

/// `H(p) = −Σ p log₂ p`
pub fn shannon_entropy(p: &ProbDist) -> f64 {
    entropy_of_slice(&p.probs)
}

/// `H(p, 1−p)`
pub fn binary_entropy(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    -(xlog2x(p) + xlog2x(1.0 - p))
}

/// `Σ p log₂(p/q)`; `+∞` when `p` is not supported inside `q`.
pub fn relative_entropy(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Length { expected: p.len(), got: q.len() });
    }
    let mut acc = 0.0;
    for (&pi, &qi) in p.probs.iter().zip(&q.probs) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return Ok(f64::INFINITY);
        }
        acc += pi * (pi / qi).log2();
    }
    Ok(acc.max(0.0))
}

pub fn joint_entropy(j: &JointDist) -> f64 {
    entropy_of_slice(&j.table)
}

/// `H(other axis | given)` for a two-axis joint.
pub fn conditional_entropy(j: &JointDist, given: usize) -> Result<f64> {
    if j.axes() != 2 {
        return Err(Error::Dimension(format!("expected 2 axes, got {}", j.axes())));
    }
    if given > 1 {
        return Err(Error::Dimension(format!("axis {given} out of range")));
    }
    j.conditional_entropy_of(&[1 - given], &[given])
}

pub fn mutual_information(j: &JointDist) -> Result<f64> {
    if j.axes() != 2 {
        return Err(Error::Dimension(format!("expected 2 axes, got {}", j.axes())));
    }
    j.mutual_information_of(&[0], &[1])
}

/// `H(p_e) + p_e·log₂(|X|−1)`.
pub fn fano_bound(p_error: f64, alphabet_size: usize) -> Result<f64> {
    if alphabet_size < 2 {
        return Err(Error::Domain(format!("alphabet size {alphabet_size} < 2")));
    }
    if !(0.0..=1.0).contains(&p_error) {
        return Err(Error::Domain(format!("error probability {p_error} outside [0, 1]")));
    }
    Ok(binary_entropy(p_error) + p_error * ((alphabet_size - 1) as f64).log2())
}

/// Row-stochastic matrix `p(y|x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTransition")]
pub struct Transition {
    rows: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransition {
    rows: Vec<Vec<f64>>,
}

impl TryFrom<RawTransition> for Transition {
    type Error = Error;

    fn try_from(raw: RawTransition) -> Result<Self> {
        Self::new(raw.rows)
    }
}

impl Transition {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("transition matrix must be rectangular and nonempty".into()));
        }
        for r in &rows {
            validate_probs(r)?;
        }
        Ok(Self { rows })
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect() }
    }

    /// Binary symmetric channel.
    pub fn bsc(f: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - f, f], vec![f, 1.0 - f]])
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }
}

/// `X → Y → Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChainSpec {
    pub dist_x: ProbDist,
    pub transition_xy: Transition,
    pub transition_yz: Transition,
}

/// `p(x,y,z) = p(x) p(y|x) p(z|y)` over axes (X, Y, Z).
pub fn markov_joint(m: &MarkovChainSpec) -> Result<JointDist> {
    let nx = m.dist_x.len();
    if m.transition_xy.inputs() != nx {
        return Err(Error::Dimension("p(y|x) rows do not match |X|".into()));
    }
    let ny = m.transition_xy.outputs();
    if m.transition_yz.inputs() != ny {
        return Err(Error::Dimension("p(z|y) rows do not match |Y|".into()));
    }
    let nz = m.transition_yz.outputs();
    let mut table = Vec::with_capacity(nx * ny * nz);
    for x in 0..nx {
        for y in 0..ny {
            for z in 0..nz {
                table.push(m.dist_x.probs[x] * m.transition_xy.rows[x][y] * m.transition_yz.rows[y][z]);
            }
        }
    }
    Ok(JointDist { cards: vec![nx, ny, nz], table })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&ProbDist::new(vec![1.0, 0.0]).unwrap()), 0.0);
        assert!((shannon_entropy(&ProbDist::uniform(2)) - 1.0).abs() < 1e-15);
        let p = ProbDist::new(vec![0.75, 0.125, 0.0625, 0.0625]).unwrap();
        // −¾log₂¾ + ⅛·3 + 2·(1/16)·4
        let direct = -0.75 * 0.75f64.log2() + 0.375 + 0.5;
        assert!((shannon_entropy(&p) - direct).abs() < 1e-15);
        assert!((shannon_entropy(&p) - 1.186_278_124_459_132_8).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_examples() {
        let p = ProbDist::new(vec![0.3, 0.7]).unwrap();
        assert_eq!(relative_entropy(&p, &p).unwrap(), 0.0);
        let point = ProbDist::new(vec![1.0, 0.0]).unwrap();
        assert!((relative_entropy(&point, &ProbDist::uniform(2)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(relative_entropy(&ProbDist::uniform(2), &point).unwrap(), f64::INFINITY);
        assert!(relative_entropy(&p, &ProbDist::uniform(3)).is_err());
    }

    #[test]
    fn joint_measures() {
        let indep = JointDist::product(&[&ProbDist::uniform(2), &ProbDist::uniform(2)]);
        assert!((joint_entropy(&indep) - 2.0).abs() < 1e-15);
        assert!((conditional_entropy(&indep, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!(mutual_information(&indep).unwrap().abs() < 1e-15);

        let copy = JointDist::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!((joint_entropy(&copy) - 1.0).abs() < 1e-15);
        assert!((mutual_information(&copy).unwrap() - 1.0).abs() < 1e-15);

        assert!(conditional_entropy(&copy, 2).is_err());
    }

    #[test]
    fn fano_examples() {
        assert_eq!(fano_bound(0.0, 4).unwrap(), 0.0);
        let expected = binary_entropy(0.25) + 0.25 * 3f64.log2();
        assert!((fano_bound(0.25, 4).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 1.207_518_749_639_422).abs() < 1e-9);
        assert!(fano_bound(0.1, 1).is_err());
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(0.5), 1.0);
        assert!((binary_entropy(0.11) - 0.499_915_958_164_528_1).abs() < 1e-12);
    }

    #[test]
    fn markov_identity_chain() {
        let m = MarkovChainSpec {
            dist_x: ProbDist::new(vec![0.2, 0.8]).unwrap(),
            transition_xy: Transition::identity(2),
            transition_yz: Transition::identity(2),
        };
        let j = markov_joint(&m).unwrap();
        assert!((j.get(&[0, 0, 0]) - 0.2).abs() < 1e-15);
        assert!((j.get(&[1, 1, 1]) - 0.8).abs() < 1e-15);
        assert_eq!(j.get(&[0, 1, 1]), 0.0);
    }

    #[test]
    fn bsc_chain_flip_probability() {
        let f = 0.1;
        let m = MarkovChainSpec {
            dist_x: ProbDist::uniform(2),
            transition_xy: Transition::bsc(f).unwrap(),
            transition_yz: Transition::bsc(f).unwrap(),
        };
        let xz = markov_joint(&m).unwrap().marginal(&[0, 2]).unwrap();
        let flip = xz.get(&[0, 1]) + xz.get(&[1, 0]);
        assert!((flip - 2.0 * f * (1.0 - f)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ProbDist::new(vec![0.5, 0.6]).is_err());
        assert!(ProbDist::new(vec![-0.1, 1.1]).is_err());
        assert!(JointDist::new(vec![2, 2], vec![0.25; 3]).is_err());
        assert!(Transition::new(vec![vec![0.5, 0.4]]).is_err());
    }

    #[test]
    fn serde_round_trip_validates() {
        let p: ProbDist = serde_json::from_str("[0.25, 0.75]").unwrap();
        assert_eq!(p.probs(), &[0.25, 0.75]);
        assert!(serde_json::from_str::<ProbDist>("[0.25, 0.5]").is_err());
    }
}
