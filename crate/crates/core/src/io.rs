//! JSON file formats read by the command-line tool.
//!
//! ```text
//! density matrix   {"dim": 2, "re": [0.5, 0, 0, 0.5], "im": [0, 0, 0, 0], "subsystem_dims": [2]}
//! kraus operators  {"kraus": [{"rows": 2, "cols": 2, "re": [...], "im": [...]}, ...]}
//! distribution     [0.25, 0.75]
//! channel          {"rows": [[0.89, 0.11], [0.11, 0.89]]}
//! ```
//!
//! Matrices are row-major; `im` may be omitted for real matrices.

use serde::{Deserialize, Serialize};

use crate::centropy::ProbDist;
use crate::channelcap::ClassicalChannel;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::matquant::{DensityMatrix, QuantumOperation};

/// Largest matrix dimension accepted from a file.
pub const MAX_FILE_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsystem_dims: Option<Vec<usize>>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let square = rows == cols;
        Self {
            dim: square.then_some(rows),
            rows: (!square).then_some(rows),
            cols: (!square).then_some(cols),
            re: m.data().iter().map(|z| z.re).collect(),
            im: Some(m.data().iter().map(|z| z.im).collect()),
            subsystem_dims: None,
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self { subsystem_dims: rho.subsystem_dims().map(<[usize]>::to_vec), ..Self::from_matrix(rho.matrix()) }
    }

    fn shape(&self) -> Result<(usize, usize)> {
        let (rows, cols) = match (self.dim, self.rows, self.cols) {
            (Some(d), None, None) => (d, d),
            (None, Some(r), Some(c)) => (r, c),
            (Some(d), Some(r), Some(c)) if r == d && c == d => (d, d),
            _ => return Err(Error::Parse("give either \"dim\" or both \"rows\" and \"cols\"".into())),
        };
        if rows == 0 || cols == 0 || rows > MAX_FILE_DIM || cols > MAX_FILE_DIM {
            return Err(Error::Parse(format!("matrix shape {rows}x{cols} outside 1..={MAX_FILE_DIM}")));
        }
        Ok((rows, cols))
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let (rows, cols) = self.shape()?;
        let len = rows * cols;
        if self.re.len() != len {
            return Err(Error::Parse(format!("\"re\" has {} entries, expected {len}", self.re.len())));
        }
        let zeros;
        let im = match &self.im {
            Some(im) if im.len() != len => {
                return Err(Error::Parse(format!("\"im\" has {} entries, expected {len}", im.len())));
            }
            Some(im) => im,
            None => {
                zeros = vec![0.0; len];
                &zeros
            }
        };
        if self.re.iter().chain(im).any(|v| !v.is_finite()) {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }
        ComplexMatrix::new(rows, cols, self.re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect())
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let rho = DensityMatrix::new(self.to_matrix()?)?;
        match &self.subsystem_dims {
            Some(dims) => rho.with_subsystems(dims.clone()),
            None => Ok(rho),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationRecord {
    pub kraus: Vec<MatrixRecord>,
}

impl OperationRecord {
    pub fn from_operation(op: &QuantumOperation) -> Self {
        Self { kraus: op.kraus().iter().map(MatrixRecord::from_matrix).collect() }
    }

    pub fn to_operation(&self) -> Result<QuantumOperation> {
        if self.kraus.is_empty() || self.kraus.len() > MAX_FILE_DIM * MAX_FILE_DIM {
            return Err(Error::Parse("kraus list must be nonempty and at most dim² long".into()));
        }
        let ops = self.kraus.iter().map(MatrixRecord::to_matrix).collect::<Result<Vec<_>>>()?;
        QuantumOperation::new(ops)
    }
}

pub fn parse_density(text: &str) -> Result<DensityMatrix> {
    serde_json::from_str::<MatrixRecord>(text)?.to_density()
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&MatrixRecord::from_density(rho)).expect("matrix records always serialize")
}

pub fn parse_operation(text: &str) -> Result<QuantumOperation> {
    serde_json::from_str::<OperationRecord>(text)?.to_operation()
}

pub fn operation_to_json(op: &QuantumOperation) -> String {
    serde_json::to_string(&OperationRecord::from_operation(op)).expect("operation records always serialize")
}

pub fn parse_dist(text: &str) -> Result<ProbDist> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_channel(text: &str) -> Result<ClassicalChannel> {
    Ok(serde_json::from_str(text)?)
}

/// Decimal rendering rounded to 12 significant digits, without exponent.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".into()
    } else {
        rounded.to_string()
    }
}
