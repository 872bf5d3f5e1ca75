//! Batches of independent trials and their statistics.

use rayon::prelude::*;
use serde::Serialize;

use super::{run_prepared, ChannelModel, OutcomeTable, ProtocolConfig, ProtocolTranscript};
use crate::centropy::{mutual_information, JointDist};
use crate::error::{Error, Result};
use crate::io::format_number;
use crate::matquant::DensityMatrix;
use crate::qentropy::{holevo_chi, Ensemble};

/// Runs trials `0..trials` in parallel; transcript `i` is trial `i`.
pub fn run_batch(cfg: &ProtocolConfig, ch: &ChannelModel, trials: usize) -> Result<Vec<ProtocolTranscript>> {
    cfg.validate()?;
    let table = OutcomeTable::new(ch)?;
    let decoder = cfg.css.c1_decoder()?;
    (0..trials as u64).into_par_iter().map(|i| run_prepared(cfg, ch, &table, &decoder, i)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trial: u64,
    pub aborted: bool,
    pub sifted_count: usize,
    pub qber: Option<f64>,
    pub key_len: usize,
    pub keys_match: bool,
}

impl From<&ProtocolTranscript> for TrialSummary {
    fn from(t: &ProtocolTranscript) -> Self {
        Self {
            trial: t.trial,
            aborted: t.aborted,
            sifted_count: t.sifted_count,
            qber: t.qber_estimate,
            key_len: t.key_len(),
            keys_match: t.keys_match(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub trials: usize,
    pub aborts: usize,
    pub abort_rate: f64,
    /// Mean over the trials that reached the error estimate.
    pub mean_qber: f64,
    /// Fraction of completed trials whose keys agree; 1 when none completed.
    pub key_match_rate: f64,
    pub mean_sifted_fraction: f64,
}

pub fn summarize(transcripts: &[ProtocolTranscript]) -> BatchSummary {
    let trials = transcripts.len();
    let aborts = transcripts.iter().filter(|t| t.aborted).count();
    let qbers: Vec<f64> = transcripts.iter().filter_map(|t| t.qber_estimate).collect();
    let completed = trials - aborts;
    let matched = transcripts.iter().filter(|t| t.keys_match()).count();
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    BatchSummary {
        trials,
        aborts,
        abort_rate: ratio(aborts, trials),
        mean_qber: if qbers.is_empty() { f64::NAN } else { qbers.iter().sum::<f64>() / qbers.len() as f64 },
        key_match_rate: if completed == 0 { 1.0 } else { ratio(matched, completed) },
        mean_sifted_fraction: if trials == 0 {
            f64::NAN
        } else {
            transcripts.iter().map(|t| ratio(t.sifted_count, t.alice_bits.len())).sum::<f64>() / trials as f64
        },
    }
}

/// Header `trial,aborted,sifted_count,qber,key_len,keys_match`, one row
/// per trial in trial order. Trials that aborted before the error
/// estimate have an empty `qber`.
pub fn summary_csv(rows: &[TrialSummary]) -> String {
    let mut out = String::from("trial,aborted,sifted_count,qber,key_len,keys_match\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.trial,
            r.aborted,
            r.sifted_count,
            r.qber.map(format_number).unwrap_or_default(),
            r.key_len,
            r.keys_match
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EveInformation {
    /// Plug-in `H(A : E)` in bits per sifted bit, where Eve's view is her
    /// outcome together with whether her basis matched the announced one.
    pub estimate: f64,
    /// Holevo quantity of Eve's conditional states at the observed
    /// interception rate.
    pub chi_e: f64,
    /// `2/√samples`
    pub tau_stat: f64,
    pub samples: usize,
    pub intercept_rate: f64,
}

// Eve's view of one sifted position: untouched, or (basis matched, bit).
fn eve_symbol(t: &ProtocolTranscript, i: usize) -> usize {
    match &t.eve {
        Some(e) if e.intercepted.get(i) == 1 => {
            1 + 2 * usize::from(e.bases.get(i) == t.alice_bases.get(i)) + e.bits.get(i) as usize
        }
        _ => 0,
    }
}

pub fn eve_information_estimate(transcripts: &[ProtocolTranscript]) -> Result<EveInformation> {
    let mut counts = [[0usize; 5]; 2];
    for t in transcripts {
        for i in (0..t.sift_mask.len()).filter(|&i| t.sift_mask.get(i) == 1) {
            counts[t.alice_bits.get(i) as usize][eve_symbol(t, i)] += 1;
        }
    }
    let samples: usize = counts.iter().flatten().sum();
    if samples == 0 {
        return Err(Error::Domain("no sifted positions to estimate from".into()));
    }
    let rows: Vec<Vec<f64>> = counts.iter().map(|r| r.iter().map(|&c| c as f64 / samples as f64).collect()).collect();
    let estimate = mutual_information(&JointDist::from_rows(&rows)?)?.max(0.0);
    let intercepted: usize = counts.iter().map(|r| r[1..].iter().sum::<usize>()).sum();
    let rate = intercepted as f64 / samples as f64;
    Ok(EveInformation {
        estimate,
        chi_e: eve_holevo(rate)?,
        tau_stat: 2.0 / (samples as f64).sqrt(),
        samples,
        intercept_rate: rate,
    })
}

// Eve's register given Alice's bit a: untouched with probability 1 − r;
// otherwise a matched basis (½) reveals a and a mismatched one gives a
// uniform bit.
fn eve_holevo(rate: f64) -> Result<f64> {
    let conditional = |a: usize| {
        let mut p = [1.0 - rate, 0.0, 0.0, rate / 4.0, rate / 4.0];
        p[3 + a - 2] = rate / 2.0;
        DensityMatrix::diagonal(&p)
    };
    Ok(holevo_chi(&Ensemble::new(vec![(0.5, conditional(0)?), (0.5, conditional(1)?)])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2codes::CssCode;

    #[test]
    fn eve_holevo_values() {
        assert!(eve_holevo(0.0).unwrap().abs() < 1e-12);
        assert!((eve_holevo(1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((eve_holevo(0.5).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn batch_is_ordered_and_reproducible() {
        let cfg = ProtocolConfig::new(32, 0.2, None, CssCode::steane(), 77).unwrap();
        let ch = ChannelModel::Depolarizing { f: 0.1 };
        let a = run_batch(&cfg, &ch, 12).unwrap();
        assert!(a.iter().enumerate().all(|(i, t)| t.trial == i as u64));
        let rows: Vec<TrialSummary> = a.iter().map(TrialSummary::from).collect();
        let again: Vec<TrialSummary> = run_batch(&cfg, &ch, 12).unwrap().iter().map(TrialSummary::from).collect();
        assert_eq!(summary_csv(&rows), summary_csv(&again));
        assert_eq!(summary_csv(&rows).lines().count(), 13);
    }

    #[test]
    fn no_eve_means_no_information() {
        let cfg = ProtocolConfig::new(64, 2.0, None, CssCode::steane(), 1).unwrap();
        let runs = run_batch(&cfg, &ChannelModel::Ideal, 20).unwrap();
        let info = eve_information_estimate(&runs).unwrap();
        assert_eq!(info.estimate, 0.0);
        assert_eq!(info.chi_e, 0.0);
        let s = summarize(&runs);
        assert_eq!(s.aborts, 0);
        assert_eq!(s.key_match_rate, 1.0);
        assert_eq!(s.mean_qber, 0.0);
    }

    #[test]
    fn intercept_resend_information() {
        let cfg = ProtocolConfig::new(128, 0.0, Some(127), CssCode::steane(), 4).unwrap();
        let runs = run_batch(&cfg, &ChannelModel::InterceptResend { fraction: 1.0 }, 60).unwrap();
        let info = eve_information_estimate(&runs).unwrap();
        assert!(info.samples >= 10_000, "{}", info.samples);
        assert!((info.estimate - 0.5).abs() < 0.02, "{}", info.estimate);
        assert!(info.estimate <= info.chi_e + info.tau_stat);
    }
}
