//! CSV reading and writing for signals and kernels.
//!
//! Format: header line `re,im`, then one complex entry per line. Tables
//! are stored row-major with axis 1 fastest, which is exactly the library
//! tensor's storage order, so a kernel file is the flat entry list of its
//! matrix. Values are written with Rust's shortest round-trip formatting,
//! so read(write(x)) is bit-exact.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use tfcert_core::tensor::ComplexTensor;
use tfcert_core::{Kernel64, Signal64};

use crate::CliError;

/// The parsed contents of an input file, classified by entry count.
pub enum Table {
    Signal(Signal64),
    Kernel(Kernel64),
}

impl Table {
    pub fn kind(&self) -> &'static str {
        match self {
            Table::Signal(_) => "signal",
            Table::Kernel(_) => "kernel",
        }
    }
}

/// Reads raw complex entries; errors cite the 1-based file row (the
/// header is row 1).
pub fn read_complex_csv(path: &Path) -> Result<Vec<Complex<f64>>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "re,im" => {}
        Some((_, header)) => {
            return Err(CliError::Validation(format!(
                "{}: row 1: expected header \"re,im\", got {:?}",
                path.display(),
                header.trim()
            )));
        }
        None => {
            return Err(CliError::Validation(format!(
                "{}: empty file",
                path.display()
            )));
        }
    }
    let mut entries = Vec::new();
    for (i, line) in lines {
        let row = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split(',');
        let (re, im) = match (fields.next(), fields.next(), fields.next()) {
            (Some(re), Some(im), None) => (re.trim(), im.trim()),
            _ => {
                return Err(CliError::Validation(format!(
                    "{}: row {row}: expected two comma-separated fields",
                    path.display()
                )));
            }
        };
        let parse = |field: &str, name: &str| {
            field.parse::<f64>().map_err(|_| {
                CliError::Validation(format!(
                    "{}: row {row}: cannot parse {name} value {field:?}",
                    path.display()
                ))
            })
        };
        entries.push(Complex::new(parse(re, "re")?, parse(im, "im")?));
    }
    Ok(entries)
}

/// Classifies a file as a signal (N entries) or kernel (N^2 entries) for
/// the configured modulus.
pub fn read_table(path: &Path, n: usize) -> Result<Table, CliError> {
    let entries = read_complex_csv(path)?;
    if entries.len() == n {
        let signal = Signal64::new(entries)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        return Ok(Table::Signal(signal));
    }
    if entries.len() == n * n {
        let values = ComplexTensor::new(&[n, n], entries)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let kernel = Kernel64::new(values)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        return Ok(Table::Kernel(kernel));
    }
    Err(CliError::Validation(format!(
        "{}: {} entries fit neither a signal (N = {n}) nor a kernel (N^2 = {})",
        path.display(),
        entries.len(),
        n * n
    )))
}

/// Reads a file that must be a signal of the configured modulus.
pub fn read_signal(path: &Path, n: usize) -> Result<Signal64, CliError> {
    match read_table(path, n)? {
        Table::Signal(s) => Ok(s),
        Table::Kernel(_) => Err(CliError::Validation(format!(
            "{}: expected a signal of {n} entries",
            path.display()
        ))),
    }
}

fn render_csv(entries: &[Complex<f64>]) -> String {
    let mut out = String::from("re,im\n");
    for z in entries {
        out.push_str(&format!("{},{}\n", z.re, z.im));
    }
    out
}

pub fn write_signal_csv(path: &Path, signal: &Signal64) -> Result<(), CliError> {
    fs::write(path, render_csv(signal.values()))
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}
