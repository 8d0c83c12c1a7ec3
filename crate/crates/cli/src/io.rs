//! JSON files: matrices in the shared `{"dim", "entries"}` format and any
//! serializable report.

use std::fs;
use std::path::Path;

use minuncert_core::{ComplexMatrix, HermitianOperator};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliError;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = to_json(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    read_json(path)
}

/// Reads a matrix and checks it is hermitian within the default tolerance.
pub fn read_observable(path: &Path) -> Result<HermitianOperator, CliError> {
    let matrix = read_matrix(path)?;
    HermitianOperator::new(matrix).map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn write_matrix(path: &Path, matrix: &ComplexMatrix) -> Result<(), CliError> {
    write_json(path, matrix)
}
