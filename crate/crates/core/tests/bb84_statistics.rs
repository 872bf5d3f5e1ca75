use qkit::bb84sim::{run_batch, summarize, ChannelModel, ProtocolConfig, ProtocolTranscript};
use qkit::gf2codes::CssCode;

fn batch(n: usize, delta: f64, ch: ChannelModel, trials: usize, seed: u64) -> Vec<ProtocolTranscript> {
    let cfg = ProtocolConfig::new(n, delta, None, CssCode::steane(), seed).unwrap();
    run_batch(&cfg, &ch, trials).unwrap()
}

#[test]
fn sifting_keeps_about_half() {
    let runs = batch(128, 0.5, ChannelModel::Ideal, 200, 11);
    for t in &runs {
        let m = t.alice_bits.len() as f64;
        let sigma = (m * 0.25).sqrt();
        assert!((t.sifted_count as f64 - m / 2.0).abs() <= 4.0 * sigma, "{} of {m}", t.sifted_count);
    }
    let f = summarize(&runs).mean_sifted_fraction;
    assert!((f - 0.5).abs() < 0.01, "{f}");
}

#[test]
fn key_length_matches_code_rate() {
    let cfg = ProtocolConfig::new(100, 1.0, None, CssCode::steane(), 5).unwrap();
    for t in run_batch(&cfg, &ChannelModel::Depolarizing { f: 0.05 }, 40).unwrap() {
        if t.aborted {
            assert_eq!(t.key_len(), 0);
        } else {
            assert_eq!(t.key_len(), cfg.key_length());
            assert_eq!(cfg.key_length(), 100 / 7);
            assert_eq!(t.reconciled_blocks, cfg.blocks());
            assert!(t.failed_blocks <= t.reconciled_blocks);
        }
    }
}

#[test]
fn public_record_is_consistent() {
    for t in batch(64, 1.0, ChannelModel::Depolarizing { f: 0.2 }, 30, 3) {
        let p = t.public_record();
        assert_eq!(p.check_indices.len(), p.alice_check_bits.len());
        let sifted = |i: usize| t.sift_mask.get(i) == 1 && p.alice_bases.get(i) == p.bob_bases.get(i);
        assert!(p.check_indices.iter().chain(&p.key_indices).all(|&i| sifted(i)));
        assert!(p.check_indices.iter().all(|i| !p.key_indices.contains(i)));
        if t.qber_estimate.is_some() {
            let seen = (0..p.alice_check_bits.len()).filter(|&i| p.alice_check_bits.get(i) != p.bob_check_bits.get(i)).count();
            assert_eq!(seen, t.disagreements);
        }
        let back = ProtocolTranscript::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}

#[test]
fn depolarizing_qber_scales_with_strength() {
    let mut last = -1.0;
    for f in [0.0, 0.05, 0.1, 0.2] {
        let q = summarize(&batch(256, 0.5, ChannelModel::Depolarizing { f }, 100, 8)).mean_qber;
        assert!((q - f / 2.0).abs() < 0.01, "f={f}: {q}");
        assert!(q > last || f == 0.0);
        last = q;
    }
}
