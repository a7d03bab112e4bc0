//! `tfcert`: norms, certificates, and frame diagnostics from the command
//! line. Every numeric result is produced by a single library call with
//! the resolved configuration; the binary only parses, dispatches, and
//! formats.
//!
//! Exit codes: 0 success, 2 parse/validation error, 3 mathematical
//! precondition failure (the lattice is too sparse or the window does not
//! generate a frame).

mod config;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use config::{parse_exps_flag, parse_lattice_flag, Overrides, PermSpec, RunConfig, WindowSpec};
use io::Table;
use report::{certificate_json, emit_json, envelope, TextTable};
use tfcert_core::gabor::{GaborFrameData, Lattice};
use tfcert_core::kernel::{certify_all_mp, certify_all_mpq, fourier_gap_experiment, gabor_matrix};
use tfcert_core::modspace::{gaussian_window, mod_norm_kernel, mod_norm_signal};
use tfcert_core::oracle::{mixed_opnorm_lower, SearchConfig};
use tfcert_core::tensor::ExponentVector;
use tfcert_core::{Error as CoreError, Signal64};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Math(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Math(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NotAFrame { lower, upper } => CliError::Math(format!(
                "not a frame: frame bounds A = {lower:.6e}, B = {upper:.6e}"
            )),
            CoreError::DensityTooLow { ab, n } => CliError::Math(format!(
                "lattice density too low: a*b = {ab} exceeds N = {n}"
            )),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Args, Debug)]
struct CommonFlags {
    /// JSON configuration file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Modulus N (for `gap`: comma-separated list of moduli)
    #[arg(long = "N", value_name = "N")]
    n: Option<String>,
    /// Lattice steps
    #[arg(long, value_name = "A,B")]
    lattice: Option<String>,
    /// Axis shuffle: a catalog name c0..c6 or a 1-based tuple like 2,1,4,3
    #[arg(long, value_name = "PERM")]
    perm: Option<String>,
    /// Exponents, `inf` for the sup norm
    #[arg(long, value_name = "P1,P2[,P3,P4]")]
    exps: Option<String>,
    /// RNG seed, recorded in every report
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (JSON report, CSV table, or dual window)
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_usize(s: &str) -> Result<usize, CliError> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| CliError::Validation(format!("N: cannot parse {s:?}")))
}

impl CommonFlags {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let over = Overrides {
            n: self.n.as_deref().map(parse_usize).transpose()?,
            lattice: self
                .lattice
                .as_deref()
                .map(parse_lattice_flag)
                .transpose()?,
            perm: self.perm.as_deref().map(PermSpec::parse_flag).transpose()?,
            exps: self.exps.as_deref().map(parse_exps_flag).transpose()?,
            seed: self.seed,
            output: self.output.clone(),
        };
        RunConfig::resolve(self.config.as_deref(), over)
    }
}

#[derive(Parser)]
#[command(
    name = "tfcert",
    version,
    about = "Mixed modulation norms, boundedness certificates, and Gabor frame diagnostics on Z_N"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mixed modulation norm of a signal (N rows) or kernel (N^2 rows)
    Modnorm {
        #[command(flatten)]
        flags: CommonFlags,
        /// Input CSV with header re,im
        #[arg(long)]
        input: PathBuf,
    },
    /// Boundedness certificates and searched lower bounds for a kernel
    Certify {
        #[command(flatten)]
        flags: CommonFlags,
        /// Kernel CSV with header re,im, N^2 rows, axis 1 fastest
        #[arg(long)]
        input: PathBuf,
    },
    /// Schur bound vs certified bound on the Fourier family, one row per N
    Gap {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Frame bounds, condition number, and canonical dual window
    Gabor {
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn load_window(cfg: &RunConfig) -> Result<Signal64, CliError> {
    match &cfg.window {
        WindowSpec::Gaussian => Ok(gaussian_window::<f64>(cfg.n)?),
        WindowSpec::File(p) => io::read_signal(p, cfg.n),
    }
}

fn build_frame(cfg: &RunConfig) -> Result<GaborFrameData<f64>, CliError> {
    let g = load_window(cfg)?;
    let lattice = Lattice::new(cfg.n, cfg.lattice.0, cfg.lattice.1)?;
    Ok(GaborFrameData::new(g, lattice)?)
}

fn cmd_modnorm(flags: CommonFlags, input: PathBuf) -> Result<(), CliError> {
    let cfg = flags.resolve()?;
    let table = io::read_table(&input, cfg.n)?;
    let g = load_window(&cfg)?;
    let rank = match table {
        Table::Signal(_) => 2,
        Table::Kernel(_) => 4,
    };
    let perm = cfg.axis_permutation(rank)?;
    let exps = cfg.exponent_vector(rank)?;
    let norm = match &table {
        Table::Signal(f) => mod_norm_signal(f, &g, &perm, &exps)?,
        Table::Kernel(k) => mod_norm_kernel(k, &g, &g, &perm, &exps)?,
    };
    let mut text = TextTable::new("modnorm", &cfg);
    text.row("input", input.display().to_string());
    text.row("kind", table.kind().to_string());
    text.row("norm", format!("{norm}"));
    text.print();
    let mut rep = envelope("modnorm", &cfg);
    rep["input"] = json!(input.display().to_string());
    rep["kind"] = json!(table.kind());
    rep["norm"] = json!(norm);
    emit_json(&rep, cfg.output.as_deref())
}

fn cmd_certify(flags: CommonFlags, input: PathBuf) -> Result<(), CliError> {
    let cfg = flags.resolve()?;
    let k = match io::read_table(&input, cfg.n)? {
        Table::Kernel(k) => k,
        Table::Signal(_) => {
            return Err(CliError::Validation(format!(
                "{}: certify needs a kernel (N^2 = {} rows)",
                input.display(),
                cfg.n * cfg.n
            )));
        }
    };
    let frame = build_frame(&cfg)?;
    let mp = certify_all_mp(&k, &frame)?;
    let mpq = certify_all_mpq(&k, &frame)?;
    let gm = gabor_matrix(&k, &frame)?;
    let scfg = SearchConfig::new(4, cfg.seed);
    let pairs: [(&str, [f64; 2]); 5] = [
        ("(1,1)", [1.0, 1.0]),
        ("(2,2)", [2.0, 2.0]),
        ("(inf,inf)", [f64::INFINITY, f64::INFINITY]),
        ("(inf,1)", [f64::INFINITY, 1.0]),
        ("(1,inf)", [1.0, f64::INFINITY]),
    ];
    let mut lower_bounds = Vec::new();
    for (label, exps) in pairs {
        let e = ExponentVector::from_values(&exps)?;
        let v = mixed_opnorm_lower(gm.values(), &e, &e, &scfg)?;
        lower_bounds.push((label, v));
    }

    let mut text = TextTable::new("certify", &cfg);
    text.row("input", input.display().to_string());
    for cert in [&mp, &mpq] {
        text.row("space pair", cert.space_pair.clone());
        text.row("bound", format!("{}", cert.bound));
        text.row("method", cert.method.clone());
        for (name, v) in &cert.ingredients {
            text.row(name, format!("{v}"));
        }
        text.row("bounded", cert.bounded.to_string());
    }
    for (label, v) in &lower_bounds {
        text.row(&format!("lower bound l{label}"), format!("{v}"));
    }
    text.print();

    let mut rep = envelope("certify", &cfg);
    rep["input"] = json!(input.display().to_string());
    rep["certificates"] = json!([certificate_json(&mp), certificate_json(&mpq)]);
    rep["lower_bounds"] = json!(lower_bounds
        .iter()
        .map(|(label, v)| json!({"space_pair": format!("l{label} -> l{label}"), "value": v}))
        .collect::<Vec<_>>());
    emit_json(&rep, cfg.output.as_deref())
}

fn cmd_gap(flags: CommonFlags) -> Result<(), CliError> {
    let n_flag = flags.n.clone();
    let flags = CommonFlags { n: None, ..flags };
    let cfg = flags.resolve()?;
    let ns: Vec<usize> = match n_flag {
        Some(list) => list
            .split(',')
            .map(parse_usize)
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![4, 9, 16, 25],
    };
    for &n in &ns {
        if n < 2 {
            return Err(CliError::Validation(format!("N: need N >= 2, got {n}")));
        }
    }
    let scfg = SearchConfig::new(8, cfg.seed);
    let mut rows = Vec::new();
    for &n in &ns {
        rows.push(fourier_gap_experiment::<f64>(n, &scfg)?);
    }

    let mut text = TextTable::new("gap", &cfg);
    text.row("columns", "n, schur, certified, lower, ratio".to_string());
    for r in &rows {
        text.row(
            &format!("n={}", r.n),
            format!(
                "schur {} certified {} lower {} ratio {}",
                r.schur,
                r.certified,
                r.lower,
                r.schur / r.certified
            ),
        );
    }
    text.print();

    let mut csv = format!(
        "# tool={} version={}\n# seed={}\n# config={}\n",
        report::TOOL,
        report::VERSION,
        cfg.seed,
        cfg.echo()
    );
    csv.push_str("n,schur,certified,lower,ratio\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            r.schur,
            r.certified,
            r.lower,
            r.schur / r.certified
        ));
    }
    match cfg.output.as_deref() {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display()))),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn cmd_gabor(flags: CommonFlags) -> Result<(), CliError> {
    let cfg = flags.resolve()?;
    let frame = build_frame(&cfg)?;
    let mut text = TextTable::new("gabor", &cfg);
    text.row("frame bound A", format!("{}", frame.lower()));
    text.row("frame bound B", format!("{}", frame.upper()));
    text.row("condition B/A", format!("{}", frame.condition()));
    if let Some(path) = cfg.output.as_deref() {
        io::write_signal_csv(path, frame.dual())?;
        text.row("dual window", path.display().to_string());
    }
    text.print();
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Modnorm { flags, input } => cmd_modnorm(flags, input),
        Cmd::Certify { flags, input } => cmd_certify(flags, input),
        Cmd::Gap { flags } => cmd_gap(flags),
        Cmd::Gabor { flags } => cmd_gabor(flags),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
