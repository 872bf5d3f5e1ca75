//! QKD configuration files.
//!
//! ```json
//! {
//!   "n": 512,
//!   "delta": 0.1,
//!   "threshold_t": 76,
//!   "css": "steane",
//!   "channel": {"kind": "intercept_resend", "fraction": 1.0},
//!   "seed": 42,
//!   "trials": 1000
//! }
//! ```
//!
//! `css` is either `"steane"` or `{"c1": <code file text>, "c2": <code
//! file text>, "t": 1}`. `threshold_t`, `seed` and `trials` are optional.

use serde::{Deserialize, Serialize};

use super::{ChannelModel, ProtocolConfig};
use crate::error::{Error, Result};
use crate::gf2codes::{css_construct, parse_code, BitString, CssCode};

/// Largest accepted key-block length `n`.
pub const MAX_KEY_BLOCK: usize = 1 << 20;
/// Largest accepted overhead `δ`.
pub const MAX_OVERHEAD: f64 = 16.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CssSpec {
    Named(String),
    Codes { c1: String, c2: String, t: usize },
}

impl CssSpec {
    pub fn build(&self) -> Result<CssCode> {
        match self {
            CssSpec::Named(name) if name == "steane" => Ok(CssCode::steane()),
            CssSpec::Named(name) => Err(Error::Config(format!("unknown CSS code {name:?}"))),
            CssSpec::Codes { c1, c2, t } => {
                let (c1, c2) = (parse_code(c1)?, parse_code(c2)?);
                let z = BitString::zeros(c1.n());
                css_construct(&c1, &c2, &z, &z, *t)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QkdConfigFile {
    pub n: usize,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub threshold_t: Option<usize>,
    pub css: CssSpec,
    pub channel: ChannelModel,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub trials: Option<usize>,
}

impl QkdConfigFile {
    /// Builds the protocol configuration; `seed` overrides the file's seed
    /// and one of the two must be present.
    pub fn resolve(&self, seed: Option<u64>) -> Result<(ProtocolConfig, ChannelModel)> {
        let seed = seed.or(self.seed).ok_or_else(|| Error::Config("no seed given".into()))?;
        if self.n == 0 || self.n > MAX_KEY_BLOCK {
            return Err(Error::Config(format!("n = {} outside 1..={MAX_KEY_BLOCK}", self.n)));
        }
        self.channel.validate()?;
        let cfg = ProtocolConfig::new(self.n, self.delta, self.threshold_t, self.css.build()?, seed)?;
        Ok((cfg, self.channel))
    }
}

pub fn parse_qkd_config(text: &str) -> Result<QkdConfigFile> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steane_config() {
        let f = parse_qkd_config(r#"{"n": 70, "delta": 0.5, "css": "steane", "channel": {"kind": "ideal"}, "seed": 3}"#).unwrap();
        let (cfg, ch) = f.resolve(None).unwrap();
        assert_eq!(cfg.threshold_t, 7);
        assert_eq!(cfg.qubit_count(), 315);
        assert_eq!(cfg.key_length(), 10);
        assert_eq!(ch, ChannelModel::Ideal);
        assert_eq!(f.resolve(Some(9)).unwrap().0.master_seed, 9);
    }

    #[test]
    fn explicit_codes() {
        let hamming = "7 4\n1110000\n1001100\n0101010\n1101001\n";
        let simplex = "7 3\n0001111\n0110011\n1010101\n";
        let text = serde_json::json!({
            "n": 14, "css": {"c1": hamming, "c2": simplex, "t": 1},
            "channel": {"kind": "depolarizing", "f": 0.1}, "seed": 1
        })
        .to_string();
        let (cfg, _) = parse_qkd_config(&text).unwrap().resolve(None).unwrap();
        assert_eq!(cfg.css.logical_bits(), 1);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            r#"{"n": 70, "css": "steane", "channel": {"kind": "ideal"}}"#,
            r#"{"n": 70, "css": "golay", "channel": {"kind": "ideal"}, "seed": 1}"#,
            r#"{"n": 70, "css": "steane", "channel": {"kind": "depolarizing", "f": 2}, "seed": 1}"#,
            r#"{"n": 70, "css": "steane", "channel": {"kind": "lossy"}, "seed": 1}"#,
            r#"{"n": 70, "threshold_t": 70, "css": "steane", "channel": {"kind": "ideal"}, "seed": 1}"#,
            r#"{"n": 70, "delta": -1, "css": "steane", "channel": {"kind": "ideal"}, "seed": 1}"#,
            r#"{"n": 0, "css": "steane", "channel": {"kind": "ideal"}, "seed": 1}"#,
            r#"{"n": 99999999999, "css": "steane", "channel": {"kind": "ideal"}, "seed": 1}"#,
        ] {
            let r = parse_qkd_config(text).and_then(|f| f.resolve(None));
            assert!(r.is_err(), "{text}");
        }
    }
}
