#![allow(dead_code)]

use qkit::centropy::{
    binary_entropy, markov_joint, mutual_information, shannon_entropy, JointDist, MarkovChainSpec, ProbDist,
    Transition,
};
use qkit::linalg::{ComplexMatrix, C64};
use qkit::matquant::{apply_unitary, permute_subsystems, reduce, DensityMatrix, QuantumOperation};
use qkit::qentropy::{coherent_information, q_relative_entropy, subsystem_entropy, von_neumann_entropy};
use qkit::random;
use rand::Rng;

pub const TOL: f64 = qkit::tolerance::RECON;

/// One inequality or identity evaluated on an instance. `margin ≥ 0` means
/// it holds; identities report `−|lhs − rhs|`.
#[derive(Debug, Clone, Copy)]
pub struct Check {
    pub name: &'static str,
    pub margin: f64,
}

pub fn le(name: &'static str, lhs: f64, rhs: f64) -> Check {
    Check { name, margin: rhs - lhs }
}

pub fn eq(name: &'static str, lhs: f64, rhs: f64) -> Check {
    Check { name, margin: -(lhs - rhs).abs() }
}

pub fn assert_checks(checks: &[Check]) {
    for c in checks {
        assert!(c.margin >= -TOL, "{} violated by {:e}", c.name, -c.margin);
    }
}

/// Worst margin seen for each named check.
#[derive(Debug, Default)]
pub struct Tally {
    pub instances: usize,
    pub worst: Vec<(&'static str, f64)>,
}

impl Tally {
    pub fn add(&mut self, checks: &[Check]) {
        self.instances += 1;
        for c in checks {
            match self.worst.iter_mut().find(|(n, _)| *n == c.name) {
                Some((_, w)) => *w = w.min(c.margin),
                None => self.worst.push((c.name, c.margin)),
            }
        }
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.worst.iter().all(|(_, w)| *w >= -tol)
    }

    pub fn failures(&self, tol: f64) -> Vec<String> {
        self.worst.iter().filter(|(_, w)| *w < -tol).map(|(n, w)| format!("{n} ({w:e})")).collect()
    }
}

pub fn card<R: Rng>(rng: &mut R) -> usize {
    rng.random_range(2..=4)
}

fn transpose_xy(j: &JointDist) -> JointDist {
    let (nx, ny) = (j.cards()[0], j.cards()[1]);
    let rows: Vec<Vec<f64>> = (0..ny).map(|y| (0..nx).map(|x| j.get(&[x, y])).collect()).collect();
    JointDist::from_rows(&rows).unwrap()
}

/// The listed Shannon entropy properties on one random `(X, Y, Z)`.
pub fn shannon_checks<R: Rng>(rng: &mut R) -> Vec<Check> {
    let cards = [card(rng), card(rng), card(rng)];
    let j = JointDist::random(&cards, rng);
    let h = |a: &[usize]| j.entropy_of(a).unwrap();
    let hc = |a: &[usize], b: &[usize]| j.conditional_entropy_of(a, b).unwrap();
    let mi = |a: &[usize], b: &[usize]| j.mutual_information_of(a, b).unwrap();
    let xy = j.marginal(&[0, 1]).unwrap();
    let yx = transpose_xy(&xy);

    let mut out = vec![
        eq("joint entropy is symmetric", shannon_entropy_joint(&xy), shannon_entropy_joint(&yx)),
        eq("mutual information is symmetric", mutual_information(&xy).unwrap(), mutual_information(&yx).unwrap()),
        le("conditional entropy is nonnegative", 0.0, hc(&[1], &[0])),
        le("H(X:Y) <= H(Y)", mi(&[0], &[1]), h(&[1])),
        le("H(X) <= H(X,Y)", h(&[0]), h(&[0, 1])),
        le("subadditivity", h(&[0, 1]), h(&[0]) + h(&[1])),
        le("conditioning on X reduces H(Y)", hc(&[1], &[0]), h(&[1])),
        le("mutual information is nonnegative", 0.0, mi(&[0], &[1])),
        le("strong subadditivity", h(&[0, 1, 2]) + h(&[1]), h(&[0, 1]) + h(&[1, 2])),
        le("conditioning reduces entropy", hc(&[0], &[1, 2]), hc(&[0], &[1])),
        eq("chain rule", hc(&[0, 1], &[2]), hc(&[0], &[2]) + hc(&[1], &[2, 0])),
    ];

    // Concavity: H(Σ p_i q_i) ≥ Σ p_i H(q_i)
    let k = card(rng);
    let n = card(rng);
    let p = random::simplex_point(k, rng);
    let qs: Vec<Vec<f64>> = (0..k).map(|_| random::simplex_point(n, rng)).collect();
    let mix: Vec<f64> = (0..n).map(|y| (0..k).map(|i| p[i] * qs[i][y]).sum()).collect();
    let avg: f64 = (0..k).map(|i| p[i] * shannon_entropy(&ProbDist::from_weights(&qs[i]).unwrap())).sum();
    out.push(le("concavity", avg, shannon_entropy(&ProbDist::from_weights(&mix).unwrap())));

    // Equality cases
    let px = ProbDist::new(random::simplex_point(cards[0], rng)).unwrap();
    let py = ProbDist::new(random::simplex_point(cards[1], rng)).unwrap();
    let indep = JointDist::product(&[&px, &py]);
    out.push(eq(
        "subadditivity is tight for independent variables",
        indep.entropy_of(&[0, 1]).unwrap(),
        shannon_entropy(&px) + shannon_entropy(&py),
    ));
    let f: Vec<usize> = (0..cards[0]).map(|_| rng.random_range(0..cards[1])).collect();
    let func_rows: Vec<Vec<f64>> =
        (0..cards[0]).map(|x| (0..cards[1]).map(|y| if f[x] == y { px.probs()[x] } else { 0.0 }).collect()).collect();
    let func = JointDist::from_rows(&func_rows).unwrap();
    out.push(eq("Y = f(X) gives H(X) = H(X,Y)", func.entropy_of(&[0]).unwrap(), func.entropy_of(&[0, 1]).unwrap()));
    out.push(eq("Y = f(X) gives H(X:Y) = H(Y)", mutual_information(&func).unwrap(), func.entropy_of(&[1]).unwrap()));
    let chain = markov_joint(&random_chain(rng)).unwrap();
    out.push(eq(
        "strong subadditivity is tight on a Markov chain",
        chain.entropy_of(&[0, 1, 2]).unwrap() + chain.entropy_of(&[1]).unwrap(),
        chain.entropy_of(&[0, 1]).unwrap() + chain.entropy_of(&[1, 2]).unwrap(),
    ));
    out
}

fn shannon_entropy_joint(j: &JointDist) -> f64 {
    qkit::centropy::joint_entropy(j)
}

pub fn random_transition<R: Rng>(inputs: usize, outputs: usize, rng: &mut R) -> Transition {
    Transition::new((0..inputs).map(|_| random::simplex_point(outputs, rng)).collect()).unwrap()
}

pub fn random_chain<R: Rng>(rng: &mut R) -> MarkovChainSpec {
    let (nx, ny, nz) = (card(rng), card(rng), card(rng));
    MarkovChainSpec {
        dist_x: ProbDist::new(random::simplex_point(nx, rng)).unwrap(),
        transition_xy: random_transition(nx, ny, rng),
        transition_yz: random_transition(ny, nz, rng),
    }
}

pub fn random_state<R: Rng>(dims: &[usize], rng: &mut R) -> DensityMatrix {
    let d = dims.iter().product();
    random::density_matrix(d, rng).with_subsystems(dims.to_vec()).unwrap()
}

pub fn random_channel<R: Rng>(d: usize, rng: &mut R) -> QuantumOperation {
    let k = rng.random_range(1..=4);
    random::channel(d, k, rng)
}

/// The listed von Neumann entropy properties on random states.
pub fn von_neumann_checks<R: Rng>(rng: &mut R) -> Vec<Check> {
    let (da, db) = (card(rng), card(rng));
    let ab = random_state(&[da, db], rng);
    let s = |rho: &DensityMatrix, keep: &[usize]| subsystem_entropy(rho, keep).unwrap();
    let (s_ab, s_a, s_b) = (von_neumann_entropy(&ab), s(&ab, &[0]), s(&ab, &[1]));
    let ba = permute_subsystems(&ab, &[1, 0]).unwrap();
    let mut out = vec![
        eq("joint entropy is symmetric", s_ab, von_neumann_entropy(&ba)),
        eq("mutual information is symmetric", s_a + s_b - s_ab, s(&ba, &[0]) + s(&ba, &[1]) - von_neumann_entropy(&ba)),
        le("subadditivity", s_ab, s_a + s_b),
        le("Araki-Lieb", (s_a - s_b).abs(), s_ab),
    ];

    let d = card(rng);
    let rho = random::density_matrix(d, rng);
    let u = random::unitary(d, rng);
    out.push(eq("unitaries preserve entropy", von_neumann_entropy(&apply_unitary(&rho, &u).unwrap()), von_neumann_entropy(&rho)));

    // Mixtures: concavity and the H(p) upper bound
    let k = card(rng);
    let p = random::simplex_point(k, rng);
    let parts: Vec<DensityMatrix> = (0..k).map(|_| random::density_matrix(d, rng)).collect();
    let refs: Vec<(f64, &DensityMatrix)> = p.iter().copied().zip(&parts).collect();
    let mix = DensityMatrix::mixture(&refs).unwrap();
    let avg: f64 = p.iter().zip(&parts).map(|(pi, r)| pi * von_neumann_entropy(r)).sum();
    let hp = shannon_entropy(&ProbDist::from_weights(&p).unwrap());
    out.push(le("concavity", avg, von_neumann_entropy(&mix)));
    out.push(le("mixture upper bound", von_neumann_entropy(&mix), avg + hp));
    let orth = orthogonal_mixture(&p, d, rng);
    out.push(eq("mixture bound is tight on orthogonal supports", von_neumann_entropy(&orth.0), orth.1 + hp));

    // Tripartite properties
    let dims = [card(rng), card(rng), 2];
    let abc = random_state(&dims, rng);
    let h = |keep: &[usize]| s(&abc, keep);
    out.push(le("strong subadditivity", h(&[0, 1, 2]) + h(&[1]), h(&[0, 1]) + h(&[1, 2])));
    out.push(le("strong subadditivity, second form", h(&[0]) + h(&[1]), h(&[0, 2]) + h(&[1, 2])));
    out.push(le("conditioning reduces entropy", h(&[0, 1, 2]) - h(&[1, 2]), h(&[0, 1]) - h(&[1])));
    out.push(le("discarding a system", h(&[0]) + h(&[1]) - h(&[0, 1]), h(&[0]) + h(&[1, 2]) - h(&[0, 1, 2])));

    // A channel on B
    let op = random_channel(db, rng).extend_left(da);
    let after = qkit::matquant::apply_operation(&ab, &op).unwrap().with_subsystems(vec![da, db]).unwrap();
    out.push(le(
        "channels on B do not increase S(A:B)",
        s(&after, &[0]) + s(&after, &[1]) - von_neumann_entropy(&after),
        s_a + s_b - s_ab,
    ));

    // Relative entropy
    let lambda: f64 = rng.random();
    let (a1, a2, b1, b2) = (
        random::density_matrix(d, rng),
        random::density_matrix(d, rng),
        random::density_matrix(d, rng),
        random::density_matrix(d, rng),
    );
    let mixed = |x: &DensityMatrix, y: &DensityMatrix| DensityMatrix::mixture(&[(lambda, x), (1.0 - lambda, y)]).unwrap();
    let rel = |x: &DensityMatrix, y: &DensityMatrix| q_relative_entropy(x, y).unwrap();
    out.push(le(
        "relative entropy is jointly convex",
        rel(&mixed(&a1, &b1), &mixed(&a2, &b2)),
        lambda * rel(&a1, &a2) + (1.0 - lambda) * rel(&b1, &b2),
    ));
    let sigma = random_state(&[da, db], rng);
    out.push(le(
        "relative entropy is monotonic",
        rel(&reduce(&ab, &[0]).unwrap(), &reduce(&sigma, &[0]).unwrap()),
        rel(&ab, &sigma),
    ));
    out
}

/// `Σ p_i ρ_i` with the `ρ_i` on mutually orthogonal blocks of a
/// `k·d`-dimensional space, and `Σ p_i S(ρ_i)`.
fn orthogonal_mixture<R: Rng>(p: &[f64], d: usize, rng: &mut R) -> (DensityMatrix, f64) {
    let k = p.len();
    let mut m = ComplexMatrix::zeros(k * d, k * d);
    let mut avg = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        let r = random::density_matrix(d, rng);
        avg += pi * von_neumann_entropy(&r);
        for a in 0..d {
            for b in 0..d {
                m[(i * d + a, i * d + b)] = r.matrix()[(a, b)] * pi;
            }
        }
    }
    (DensityMatrix::new(m).unwrap(), avg)
}

/// Entropy exchange from `W_ij = tr(E_i ρ E_j†)`, independent of the
/// purification route.
pub fn w_matrix_entropy_exchange(rho: &DensityMatrix, op: &QuantumOperation) -> f64 {
    let k = op.kraus();
    let w = ComplexMatrix::from_fn(k.len(), k.len(), |i, j| (&(&k[i] * rho.matrix()) * &k[j].adjoint()).trace());
    let eig = w.eig_hermitian().unwrap();
    -eig.values.iter().filter(|&&l| l > 1e-15).map(|&l| l * l.log2()).sum::<f64>()
}

/// Classical chain `H(X) ≥ H(X:Y) ≥ H(X:Z)`.
pub fn classical_processing_checks<R: Rng>(rng: &mut R) -> Vec<Check> {
    let j = markov_joint(&random_chain(rng)).unwrap();
    let hx = j.entropy_of(&[0]).unwrap();
    let ixy = j.mutual_information_of(&[0], &[1]).unwrap();
    let ixz = j.mutual_information_of(&[0], &[2]).unwrap();
    vec![le("H(X) >= H(X:Y)", ixy, hx), le("H(X:Y) >= H(X:Z)", ixz, ixy)]
}

/// Quantum chain `S(ρ) ≥ I(ρ,𝓔₁) ≥ I(ρ,𝓔₂∘𝓔₁)`.
pub fn quantum_processing_checks<R: Rng>(rng: &mut R) -> Vec<Check> {
    let d = card(rng);
    let rho = random::density_matrix(d, rng);
    let e1 = random_channel(d, rng);
    let e2 = random_channel(d, rng);
    let i1 = coherent_information(&rho, &e1).unwrap();
    let i2 = coherent_information(&rho, &e1.then(&e2).unwrap()).unwrap();
    vec![le("S(rho) >= I(rho,E1)", i1, von_neumann_entropy(&rho)), le("I(rho,E1) >= I(rho,E2 E1)", i2, i1)]
}

/// `H(X:Y)` for ensemble `{p_x, ρ_x}` measured with POVM `{M_y}`.
pub fn measured_mutual_information(probs: &[f64], states: &[DensityMatrix], povm: &[ComplexMatrix]) -> f64 {
    let rows: Vec<Vec<f64>> = probs
        .iter()
        .zip(states)
        .map(|(p, rho)| povm.iter().map(|m| p * (&m.adjoint() * m).try_mul(rho.matrix()).unwrap().trace().re.max(0.0)).collect())
        .collect();
    let total: f64 = rows.iter().flatten().sum();
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v / total).collect()).collect();
    mutual_information(&JointDist::from_rows(&rows).unwrap()).unwrap()
}

pub fn hbin(p: f64) -> f64 {
    binary_entropy(p)
}

/// Independent 2×2 Hermitian spectrum, for cross-checking the solver.
pub fn eigenvalues_2x2(m: &ComplexMatrix) -> (f64, f64) {
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let b: C64 = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (mean + r, mean - r)
}
