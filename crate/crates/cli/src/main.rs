//! `qkit` command-line tool.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qkit::bb84sim::{eve_information_estimate, parse_qkd_config, run_batch, summarize, TrialSummary};
use qkit::centropy::shannon_entropy;
use qkit::channelcap::{capacity, hsw_capacity_estimate, DEFAULT_CAPACITY_TOL, DEFAULT_RESTARTS};
use qkit::gf2codes::{code_bounds, css_construct, parse_code, BitString};
use qkit::io::{parse_channel, parse_density, parse_dist, parse_operation};
use qkit::matquant::{apply_operation, DensityMatrix, QuantumOperation};
use qkit::qentropy::{
    coherent_information, entanglement_fidelity, entropy_exchange, fidelity, q_conditional, q_joint, q_mutual,
    q_relative_entropy, quantum_fano_gap, von_neumann_entropy, BipartiteState,
};
use qkit::typicality::{
    schumacher_fidelity, schumacher_fidelity_at_rate, shannon_scheme, typical_set, QuantumSourceModel, SourceModel,
};

use output::{Pairs, Report, Value};

#[derive(Parser, Debug)]
#[command(name = "qkit", version, about = "Quantum information toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Seed for randomized commands
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Number of Monte-Carlo trials
    #[arg(long, global = true)]
    trials: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shannon entropy of a distribution or von Neumann entropy of a
    /// density matrix (with subsystem measures when it has two parts)
    Entropy { file: PathBuf },
    /// Fidelity, relative entropy and channel measures of a state
    Qinfo {
        state: PathBuf,
        /// Second state for fidelity and relative entropy
        #[arg(long)]
        sigma: Option<PathBuf>,
        /// Kraus operators of a channel
        #[arg(long, conflicts_with = "depolarizing")]
        kraus: Option<PathBuf>,
        /// Depolarizing channel with this parameter
        #[arg(long)]
        depolarizing: Option<f64>,
    },
    /// Distance, Singleton and Gilbert–Varshamov checks for a code file,
    /// and CSS bounds when a subcode is given
    Codes {
        file: PathBuf,
        /// Code file of C2 ⊆ C1 to build a CSS code
        #[arg(long)]
        css: Option<PathBuf>,
        /// Errors the CSS code must correct; defaults to the most possible
        #[arg(long, requires = "css")]
        t: Option<usize>,
    },
    /// Typical-set compression sweep over block lengths
    Compress {
        #[arg(long, conflicts_with = "density", required_unless_present = "density")]
        dist: Option<PathBuf>,
        #[arg(long)]
        density: Option<PathBuf>,
        /// Block lengths, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Compression rate in bits per symbol
        #[arg(long)]
        rate: Option<f64>,
    },
    /// Capacity of a classical channel, or a product-state capacity
    /// estimate for a quantum channel
    Capacity {
        #[arg(conflicts_with = "kraus", required_unless_present = "kraus")]
        file: Option<PathBuf>,
        #[arg(long)]
        kraus: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Batch of BB84 runs
    Qkd {
        config: PathBuf,
        /// Also write each trial's transcript as JSON into this directory
        #[arg(long)]
        transcript_dir: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> qkit::Result<T>) -> Outcome<T> {
    parse(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn require_seed(common: &Common) -> Outcome<u64> {
    common.seed.ok_or_else(|| usage("this command needs --seed"))
}

fn cmd_entropy(file: &Path) -> Outcome<Report> {
    let text = read(file)?;
    let mut out = Pairs::default();
    if text.trim_start().starts_with('[') {
        let p = parse_dist(&text).map_err(usage)?;
        out.push("letters", p.len());
        out.push("entropy", shannon_entropy(&p));
        return Ok(out.into_report());
    }
    let rho = parse_density(&text).map_err(usage)?;
    out.push("dim", rho.dim());
    out.push("entropy", von_neumann_entropy(&rho));
    out.push("purity", rho.purity());
    if rho.subsystem_dims().is_some_and(|d| d.len() == 2) {
        let b = BipartiteState::new(rho).map_err(usage)?;
        out.push("entropy_a", b.entropy_a());
        out.push("entropy_b", b.entropy_b());
        out.push("joint_entropy", q_joint(&b));
        out.push("conditional_entropy", q_conditional(&b));
        out.push("mutual_information", q_mutual(&b));
    }
    Ok(out.into_report())
}

fn cmd_qinfo(state: &Path, sigma: Option<&Path>, kraus: Option<&Path>, depolarizing: Option<f64>) -> Outcome<Report> {
    let rho = load(state, parse_density)?;
    let mut out = Pairs::default();
    out.push("entropy", von_neumann_entropy(&rho));
    out.push("purity", rho.purity());
    if let Some(path) = sigma {
        let sigma = load(path, parse_density)?;
        out.push("fidelity", fidelity(&rho, &sigma).map_err(usage)?);
        out.push("relative_entropy", q_relative_entropy(&rho, &sigma).map_err(usage)?);
    }
    let op = match (kraus, depolarizing) {
        (Some(path), _) => Some(load(path, parse_operation)?),
        (None, Some(f)) => Some(QuantumOperation::depolarizing(rho.dim(), f).map_err(usage)?),
        (None, None) => None,
    };
    if let Some(op) = op {
        if op.dim_in() != rho.dim() {
            return Err(usage(format!("channel acts on dimension {}, state has {}", op.dim_in(), rho.dim())));
        }
        let output: DensityMatrix = apply_operation(&rho, &op).map_err(usage)?;
        out.push("output_entropy", von_neumann_entropy(&output));
        out.push("entropy_exchange", entropy_exchange(&rho, &op).map_err(runtime)?);
        out.push("coherent_information", coherent_information(&rho, &op).map_err(runtime)?);
        out.push("entanglement_fidelity", entanglement_fidelity(&rho, &op).map_err(runtime)?);
        out.push("fano_gap", quantum_fano_gap(&rho, &op).map_err(runtime)?);
    }
    Ok(out.into_report())
}

fn cmd_codes(file: &Path, css: Option<&Path>, t: Option<usize>) -> Outcome<Report> {
    let c1 = load(file, parse_code)?;
    let mut out = Pairs::default();
    out.push("n", c1.n());
    out.push("k", c1.k());
    match code_bounds(&c1) {
        Ok(b) => {
            out.push("d", b.d);
            out.push("t", b.t);
            out.push("singleton_ok", b.singleton_ok);
            out.push("gv_rate", b.gv_rate);
            out.push("meets_asymptotic_gv", b.meets_asymptotic_gv);
            out.push("gv_guaranteed_k", b.gv_guaranteed_k);
            out.push("gv_ok", b.gv_ok);
        }
        Err(_) => out.push("d", Value::Missing),
    }
    if let Some(path) = css {
        let c2 = load(path, parse_code)?;
        let z = BitString::zeros(c1.n());
        let t = match t {
            Some(t) => t,
            None => {
                let dual = qkit::gf2codes::dual_code(&c2);
                c1.correctable_errors().map_err(usage)?.min(dual.correctable_errors().map_err(usage)?)
            }
        };
        let code = css_construct(&c1, &c2, &z, &z, t).map_err(usage)?;
        let b = code.bounds();
        out.push("css_logical_bits", b.k);
        out.push("css_t", b.t);
        out.push("css_d", b.d);
        out.push("quantum_singleton_ok", b.quantum_singleton_ok);
        out.push("quantum_gv_rate", b.quantum_gv_rate);
        out.push("meets_quantum_gv", b.meets_quantum_gv);
    }
    Ok(out.into_report())
}

fn cmd_compress(dist: Option<&Path>, density: Option<&Path>, ns: &[usize], eps: f64, rate: Option<f64>) -> Outcome<Report> {
    let mut rows = Vec::with_capacity(ns.len());
    let header: Vec<&str>;
    if let Some(path) = dist {
        let p = load(path, parse_dist)?;
        header = vec!["n", "epsilon", "typical_count", "mass", "reliability", "truncated"];
        for &n in ns {
            let s = SourceModel::new(p.clone(), n, eps).map_err(usage)?;
            let set = typical_set(&s).map_err(usage)?;
            let (reliability, truncated) = match rate {
                Some(r) => {
                    let scheme = shannon_scheme(&s, r).map_err(usage)?;
                    (Value::Num(scheme.reliability()), Value::Bool(scheme.truncated()))
                }
                None => (Value::Missing, Value::Missing),
            };
            rows.push(vec![n.into(), eps.into(), set.len().into(), set.probability_mass().into(), reliability, truncated]);
        }
    } else {
        let rho = load(density.expect("clap requires one source"), parse_density)?;
        header = vec!["n", "epsilon", "typical_dim", "mass", "fidelity", "fidelity_at_rate"];
        for &n in ns {
            let q = QuantumSourceModel::new(rho.clone(), n, eps).map_err(usage)?;
            let set = typical_set(&q.eigen_source()).map_err(usage)?;
            let at_rate = match rate {
                Some(r) => Value::Num(schumacher_fidelity_at_rate(&q, r).map_err(usage)?),
                None => Value::Missing,
            };
            let f = schumacher_fidelity(&q).map_err(usage)?;
            rows.push(vec![n.into(), eps.into(), set.len().into(), set.probability_mass().into(), f.into(), at_rate]);
        }
    }
    Ok(Report::Table { header: header.into_iter().map(String::from).collect(), rows, summary: Vec::new() })
}

fn cmd_capacity(common: &Common, file: Option<&Path>, kraus: Option<&Path>, tol: Option<f64>, restarts: usize) -> Outcome<Report> {
    if let Some(path) = kraus {
        let seed = require_seed(common)?;
        let op = load(path, parse_operation)?;
        let est = hsw_capacity_estimate(&op, restarts, tol.unwrap_or(1e-12), seed).map_err(usage)?;
        let worst = est.restart_values.iter().copied().fold(f64::INFINITY, f64::min);
        return Ok(Report::Table {
            header: vec!["chi".into(), "restarts".into(), "worst_restart".into()],
            rows: vec![vec![est.chi.into(), est.restart_values.len().into(), worst.into()]],
            summary: Vec::new(),
        });
    }
    let ch = load(file.expect("clap requires one source"), parse_channel)?;
    let r = capacity(&ch, tol.unwrap_or(DEFAULT_CAPACITY_TOL)).map_err(runtime)?;
    let mut header = vec!["capacity".to_string()];
    header.extend((0..r.input.len()).map(|i| format!("p{i}")));
    let mut row = vec![Value::Num(r.capacity)];
    row.extend(r.input.probs().iter().map(|&p| Value::Num(p)));
    Ok(Report::Table { header, rows: vec![row], summary: Vec::new() })
}

fn cmd_qkd(common: &Common, config: &Path, transcript_dir: Option<&Path>) -> Outcome<Report> {
    let file = load(config, parse_qkd_config)?;
    let (cfg, ch) = file.resolve(common.seed).map_err(usage)?;
    let trials = common.trials.or(file.trials).unwrap_or(100);
    let transcripts = run_batch(&cfg, &ch, trials).map_err(runtime)?;
    if let Some(dir) = transcript_dir {
        fs::create_dir_all(dir).map_err(runtime)?;
        for t in &transcripts {
            fs::write(dir.join(format!("trial_{:06}.json", t.trial)), t.to_json()).map_err(runtime)?;
        }
    }
    let header = ["trial", "aborted", "sifted_count", "qber", "key_len", "keys_match"].map(String::from).to_vec();
    let rows = transcripts
        .iter()
        .map(|t| {
            let s = TrialSummary::from(t);
            vec![s.trial.into(), s.aborted.into(), s.sifted_count.into(), s.qber.into(), s.key_len.into(), s.keys_match.into()]
        })
        .collect();
    let s = summarize(&transcripts);
    let mut summary: Vec<(String, Value)> = vec![
        ("trials".into(), s.trials.into()),
        ("mean_qber".into(), s.mean_qber.into()),
        ("abort_rate".into(), s.abort_rate.into()),
        ("key_match_rate".into(), s.key_match_rate.into()),
    ];
    if let Ok(eve) = eve_information_estimate(&transcripts) {
        summary.push(("eve_information".into(), eve.estimate.into()));
        summary.push(("eve_holevo".into(), eve.chi_e.into()));
    }
    Ok(Report::Table { header, rows, summary })
}

fn run(cli: &Cli) -> Outcome<String> {
    let report = match &cli.command {
        Command::Entropy { file } => cmd_entropy(file)?,
        Command::Qinfo { state, sigma, kraus, depolarizing } => {
            cmd_qinfo(state, sigma.as_deref(), kraus.as_deref(), *depolarizing)?
        }
        Command::Codes { file, css, t } => cmd_codes(file, css.as_deref(), *t)?,
        Command::Compress { dist, density, n, eps, rate } => {
            cmd_compress(dist.as_deref(), density.as_deref(), n, *eps, *rate)?
        }
        Command::Capacity { file, kraus, tol, restarts } => {
            cmd_capacity(&cli.common, file.as_deref(), kraus.as_deref(), *tol, *restarts)?
        }
        Command::Qkd { config, transcript_dir } => cmd_qkd(&cli.common, config, transcript_dir.as_deref())?,
    };
    Ok(match cli.common.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match run(&cli) {
        Ok(text) => text,
        Err(Failure::Usage(msg)) => {
            eprintln!("qkit: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("qkit: {msg}");
            return ExitCode::from(1);
        }
    };
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("qkit: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
