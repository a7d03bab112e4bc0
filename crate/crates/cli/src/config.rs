//! Run configuration: JSON file plus flag overrides, validated before any
//! computation. The JSON schema has exactly the fields of [`RunConfig`];
//! the infinite exponent is spelled `"inf"`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tfcert_core::modspace::CatalogPerm;
use tfcert_core::tensor::{AxisPermutation, Exponent, ExponentVector};

use crate::CliError;

pub const DEFAULT_N: usize = 8;
pub const DEFAULT_SEED: u64 = 42;

/// A permutation named from the catalog (`c0`..`c6`) or written out as a
/// tuple of 1-based axis images.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PermSpec {
    Name(String),
    Tuple(Vec<usize>),
}

impl PermSpec {
    pub fn parse_flag(s: &str) -> Result<Self, CliError> {
        if s.contains(',') {
            let images = s
                .split(',')
                .map(|t| {
                    t.trim().parse::<usize>().map_err(|_| {
                        CliError::Validation(format!("permutation: cannot parse {t:?}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PermSpec::Tuple(images))
        } else {
            Ok(PermSpec::Name(s.trim().to_string()))
        }
    }

    pub fn to_axis_permutation(&self) -> Result<AxisPermutation, CliError> {
        match self {
            PermSpec::Name(name) => CatalogPerm::parse(name)
                .map(|c| c.axis_permutation())
                .ok_or_else(|| {
                    CliError::Validation(format!(
                        "permutation: unknown name {name:?} (expected c0..c6)"
                    ))
                }),
            PermSpec::Tuple(images) => {
                if images.iter().any(|&i| i == 0) {
                    return Err(CliError::Validation(
                        "permutation: tuple entries are 1-based axis images".to_string(),
                    ));
                }
                let zero_based: Vec<usize> = images.iter().map(|&i| i - 1).collect();
                AxisPermutation::new(&zero_based).map_err(|e| {
                    CliError::Validation(format!("permutation: {e}"))
                })
            }
        }
    }
}

/// One exponent as it appears in JSON and flags: a number or `"inf"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ExpSpec {
    Num(f64),
    Word(String),
}

impl ExpSpec {
    pub fn parse_flag(s: &str) -> Result<Self, CliError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") {
            Ok(ExpSpec::Word("inf".to_string()))
        } else {
            t.parse::<f64>()
                .map(ExpSpec::Num)
                .map_err(|_| CliError::Validation(format!("exponents: cannot parse {t:?}")))
        }
    }

    fn to_exponent(&self) -> Result<Exponent<f64>, CliError> {
        match self {
            ExpSpec::Num(v) => Exponent::new(*v)
                .map_err(|e| CliError::Validation(format!("exponents: {e}"))),
            ExpSpec::Word(w) if w.eq_ignore_ascii_case("inf") => Ok(Exponent::infinity()),
            ExpSpec::Word(w) => Err(CliError::Validation(format!(
                "exponents: expected a number or \"inf\", got {w:?}"
            ))),
        }
    }
}

/// The configuration file schema. Every field is optional; flags override
/// file values and defaults fill the rest.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<PermSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<ExpSpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}

/// Where the analysis window comes from.
#[derive(Clone, Debug)]
pub enum WindowSpec {
    Gaussian,
    File(PathBuf),
}

impl WindowSpec {
    fn parse(s: &str) -> Self {
        if s == "gaussian" {
            WindowSpec::Gaussian
        } else {
            WindowSpec::File(PathBuf::from(s))
        }
    }

    pub fn label(&self) -> String {
        match self {
            WindowSpec::Gaussian => "gaussian".to_string(),
            WindowSpec::File(p) => p.display().to_string(),
        }
    }
}

/// Flag-level overrides, parsed by the command layer.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub lattice: Option<(usize, usize)>,
    pub perm: Option<PermSpec>,
    pub exps: Option<Vec<ExpSpec>>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

/// The fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub lattice: (usize, usize),
    pub window: WindowSpec,
    pub permutation: Option<PermSpec>,
    pub exponents: Option<Vec<ExpSpec>>,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, over: Overrides) -> Result<Self, CliError> {
        let base = match file {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let n = over.n.or(base.n).unwrap_or(DEFAULT_N);
        if n == 0 {
            return Err(CliError::Validation("N: must be positive".to_string()));
        }
        let lattice = over
            .lattice
            .or(base.lattice.map(|[a, b]| (a, b)))
            .unwrap_or((1, 1));
        let window = WindowSpec::parse(base.window.as_deref().unwrap_or("gaussian"));
        Ok(RunConfig {
            n,
            lattice,
            window,
            permutation: over.perm.or(base.permutation),
            exponents: over.exps.or(base.exponents),
            seed: over.seed.or(base.seed).unwrap_or(DEFAULT_SEED),
            output: over.output.or(base.output.map(PathBuf::from)),
        })
    }

    /// The permutation to use on a table of the given rank, defaulting to
    /// the identity axis order for signals and the kernel catalog entry
    /// `c1` for rank-4 tables.
    pub fn axis_permutation(&self, rank: usize) -> Result<AxisPermutation, CliError> {
        let perm = match &self.permutation {
            Some(spec) => spec.to_axis_permutation()?,
            None if rank == 2 => AxisPermutation::identity(2)
                .map_err(|e| CliError::Validation(e.to_string()))?,
            None => CatalogPerm::C1.axis_permutation(),
        };
        if perm.len() != rank {
            return Err(CliError::Validation(format!(
                "permutation: acts on {} axes but the table has rank {rank}",
                perm.len()
            )));
        }
        Ok(perm)
    }

    /// The exponent vector for the given rank, defaulting to all 2.
    pub fn exponent_vector(&self, rank: usize) -> Result<ExponentVector<f64>, CliError> {
        let exps = match &self.exponents {
            Some(list) => list
                .iter()
                .map(ExpSpec::to_exponent)
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![Exponent::two(); rank],
        };
        if exps.len() != rank {
            return Err(CliError::Validation(format!(
                "exponents: got {} entries but the table has rank {rank}",
                exps.len()
            )));
        }
        ExponentVector::new(exps).map_err(|e| CliError::Validation(format!("exponents: {e}")))
    }

    /// Echo with exactly the configuration-file fields, for reports.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::json!({
            "N": self.n,
            "lattice": [self.lattice.0, self.lattice.1],
            "window": self.window.label(),
            "permutation": self.permutation,
            "exponents": self.exponents,
            "seed": self.seed,
            "output": self.output.as_ref().map(|p| p.display().to_string()),
        })
    }
}

/// Parses the `--lattice a,b` flag.
pub fn parse_lattice_flag(s: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Validation(format!(
            "lattice: expected a,b but got {s:?}"
        )));
    }
    let a = parts[0].trim().parse::<usize>();
    let b = parts[1].trim().parse::<usize>();
    match (a, b) {
        (Ok(a), Ok(b)) => Ok((a, b)),
        _ => Err(CliError::Validation(format!(
            "lattice: expected two nonnegative integers, got {s:?}"
        ))),
    }
}

/// Parses the `--exps p1,p2[,p3,p4]` flag.
pub fn parse_exps_flag(s: &str) -> Result<Vec<ExpSpec>, CliError> {
    s.split(',').map(ExpSpec::parse_flag).collect()
}
