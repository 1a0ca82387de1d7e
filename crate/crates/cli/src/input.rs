use std::path::Path;

use serde::Deserialize;

use qheat_core::densmat::c;
use qheat_core::{ComplexMatrix, DensityMatrix, Error, Factor, Result, SubsystemLayout};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum StateFile {
    Matrix(Vec<Vec<Entry>>),
    Labeled {
        matrix: Vec<Vec<Entry>>,
        layout: Option<Vec<Factor>>,
    },
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A bipartite state; without a layout A is a qubit and B gets the rest.
pub fn read_state(path: &Path) -> Result<(DensityMatrix, SubsystemLayout)> {
    let text = read_text(path)?;
    let file: StateFile = serde_json::from_str(&text).map_err(|e| {
        Error::Parse(format!("{}: expected a matrix of numbers or [re, im] pairs ({e})", path.display()))
    })?;
    let (rows, layout) = match file {
        StateFile::Matrix(m) => (m, None),
        StateFile::Labeled { matrix, layout } => (matrix, layout),
    };
    let rows: Vec<Vec<_>> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|e| match e {
                    Entry::Real(x) => c(x, 0.0),
                    Entry::Complex([re, im]) => c(re, im),
                })
                .collect()
        })
        .collect();
    let m = ComplexMatrix::from_rows(&rows).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
    let rho = DensityMatrix::new(m).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
    let layout = match layout {
        Some(f) => SubsystemLayout::new(f).map_err(|e| Error::Parse(format!("layout: {e}")))?,
        None => {
            let d = rho.dim();
            if d < 4 || d % 2 != 0 {
                return Err(Error::Parse(format!("matrix: dimension {d} is not 2 x d_B; give a layout")));
            }
            SubsystemLayout::from_pairs(&[("A", 2), ("B", d / 2)])?
        }
    };
    if layout.total_dim() != rho.dim() {
        return Err(Error::Parse(format!("layout: total dimension {} vs matrix {}", layout.total_dim(), rho.dim())));
    }
    Ok((rho, layout))
}
