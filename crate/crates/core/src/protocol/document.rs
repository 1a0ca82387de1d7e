//! JSON protocol documents.
//!
//! ```json
//! {
//!   "layout": [{"label": "A", "dim": 2}, ...],
//!   "beta": 1.0,
//!   "bath_mode": "ledger",
//!   "stages": [
//!     {"kind": "thermal_init", "memory": ["A", "B"], "system": "S",
//!      "rho_memory": [[[re, im], ...], ...], "h_s": [[...]]},
//!     {"kind": "unitary", "targets": ["A", "B", "S"], "operator": [[...]]},
//!     {"kind": "measure", "target": "A", "projectors": [[[...]], [[...]]]},
//!     {"kind": "feedback", "control": "A", "targets": ["S"], "unitaries": [...],
//!      "expansion": {"system": "S", "volume_ratios": [2.0, 2.0]}}
//!   ]
//! }
//! ```
//!
//! Matrices are row lists of `[re, im]` pairs. Floats are written in the
//! shortest form that parses back to the same bits.

use serde::{Deserialize, Serialize};

use super::stage::{BathMode, Feedback, IsothermalExpansion, StageSpec, ThermalInit, UnitaryStage};
use super::Protocol;
use crate::densmat::{c, ComplexMatrix, DensityMatrix, Factor, Hamiltonian, HamiltonianRole, SubsystemLayout};
use crate::error::{Error, Result};
use crate::infomeasures::ProjectiveMeasurement;

pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolDocument {
    pub layout: Vec<Factor>,
    pub beta: f64,
    pub bath_mode: BathMode,
    pub stages: Vec<StageDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StageDocument {
    ThermalInit {
        memory: [String; 2],
        system: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reservoir: Option<String>,
        rho_memory: MatrixDoc,
        h_s: MatrixDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h_s_final: Option<MatrixDoc>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h_r: Option<MatrixDoc>,
    },
    Unitary {
        targets: Vec<String>,
        operator: MatrixDoc,
    },
    Measure {
        target: String,
        projectors: Vec<MatrixDoc>,
    },
    Feedback {
        control: String,
        targets: Vec<String>,
        unitaries: Vec<MatrixDoc>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expansion: Option<IsothermalExpansion>,
    },
}

fn at(path: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {e}"))
}

fn matrix_from_doc(doc: &MatrixDoc, path: &str) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<_>> = doc.iter().map(|r| r.iter().map(|&[re, im]| c(re, im)).collect()).collect();
    if let Some((i, j)) = doc
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, z)| (i, j, z)))
        .find(|(_, _, z)| !(z[0].is_finite() && z[1].is_finite()))
        .map(|(i, j, _)| (i, j))
    {
        return Err(at(&format!("{path}[{i}][{j}]"), "entry is not finite"));
    }
    ComplexMatrix::from_rows(&rows).map_err(|e| at(path, e))
}

fn matrix_to_doc(m: &ComplexMatrix) -> MatrixDoc {
    m.to_rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn single_layout(label: &str, layout: &SubsystemLayout, path: &str) -> Result<SubsystemLayout> {
    let d = layout.dim_of(label).map_err(|e| at(path, e))?;
    SubsystemLayout::from_pairs(&[(label, d)]).map_err(|e| at(path, e))
}

fn hamiltonian(doc: &MatrixDoc, label: &str, layout: &SubsystemLayout, role: HamiltonianRole, path: &str) -> Result<Hamiltonian> {
    let m = matrix_from_doc(doc, path)?;
    Hamiltonian::new(single_layout(label, layout, path)?, m, role).map_err(|e| at(path, e))
}

fn stage_from_doc(doc: &StageDocument, layout: &SubsystemLayout, path: &str) -> Result<StageSpec> {
    Ok(match doc {
        StageDocument::ThermalInit { memory, system, reservoir, rho_memory, h_s, h_s_final, h_r } => {
            let rho = DensityMatrix::new(matrix_from_doc(rho_memory, &format!("{path}.rho_memory"))?)
                .map_err(|e| at(&format!("{path}.rho_memory"), e))?;
            let hs = hamiltonian(h_s, system, layout, HamiltonianRole::Initial, &format!("{path}.h_s"))?;
            let hs_f = match h_s_final {
                Some(m) => hamiltonian(m, system, layout, HamiltonianRole::Final, &format!("{path}.h_s_final"))?,
                None => hs.with_role(HamiltonianRole::Final),
            };
            let hr = match (h_r, reservoir) {
                (Some(m), Some(r)) => Some(hamiltonian(m, r, layout, HamiltonianRole::Constant, &format!("{path}.h_r"))?),
                (Some(_), None) => return Err(at(&format!("{path}.h_r"), "H_R given without a reservoir factor")),
                (None, _) => None,
            };
            StageSpec::ThermalInit(Box::new(ThermalInit {
                memory: memory.clone(),
                system: system.clone(),
                reservoir: reservoir.clone(),
                rho_memory: rho,
                h_s: hs,
                h_s_final: hs_f,
                h_r: hr,
            }))
        }
        StageDocument::Unitary { targets, operator } => {
            let op_path = format!("{path}.operator");
            let m = matrix_from_doc(operator, &op_path)?;
            let sub = layout.select(targets).map_err(|e| at(&format!("{path}.targets"), e))?;
            if m.rows() != sub.total_dim() || !m.is_square() {
                return Err(at(&op_path, format!("expected {0}x{0}, got {1}x{2}", sub.total_dim(), m.rows(), m.cols())));
            }
            StageSpec::Unitary(UnitaryStage::new(targets.clone(), m).map_err(|e| at(&op_path, e))?)
        }
        StageDocument::Measure { target, projectors } => {
            let ps = projectors
                .iter()
                .enumerate()
                .map(|(k, p)| matrix_from_doc(p, &format!("{path}.projectors[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            StageSpec::Measure(
                ProjectiveMeasurement::new(layout.clone(), target, ps).map_err(|e| at(&format!("{path}.projectors"), e))?,
            )
        }
        StageDocument::Feedback { control, targets, unitaries, expansion } => {
            layout.position(control).map_err(|e| at(&format!("{path}.control"), e))?;
            if targets.is_empty() {
                return Err(at(&format!("{path}.targets"), "feedback needs at least one target factor"));
            }
            let sub = layout.select(targets).map_err(|e| at(&format!("{path}.targets"), e))?;
            let mut us = Vec::with_capacity(unitaries.len());
            for (k, u) in unitaries.iter().enumerate() {
                let p = format!("{path}.unitaries[{k}]");
                let m = matrix_from_doc(u, &p)?;
                if m.rows() != sub.total_dim() || !m.is_square() {
                    return Err(at(&p, format!("expected {0}x{0}, got {1}x{2}", sub.total_dim(), m.rows(), m.cols())));
                }
                let defect = m.unitarity_defect();
                if defect > crate::densmat::VALIDATION_TOL {
                    return Err(at(&p, Error::NotUnitary(defect)));
                }
                us.push(m);
            }
            StageSpec::Feedback(
                Feedback::new(control.clone(), targets.clone(), us, expansion.clone()).map_err(|e| at(path, e))?,
            )
        }
    })
}

impl ProtocolDocument {
    pub fn into_protocol(&self) -> Result<Protocol> {
        let layout = SubsystemLayout::new(self.layout.clone()).map_err(|e| at("layout", e))?;
        let stages = self
            .stages
            .iter()
            .enumerate()
            .map(|(i, s)| stage_from_doc(s, &layout, &format!("stages[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Protocol::new(layout, stages, self.beta, self.bath_mode).map_err(|e| match e {
            Error::OrderViolation(_) => e,
            other => at("protocol", other),
        })
    }
}

/// Parses and validates a JSON protocol document.
pub fn parse_protocol(text: &str) -> Result<Protocol> {
    let doc: ProtocolDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_protocol()
}

pub fn to_document(p: &Protocol) -> ProtocolDocument {
    let stages = p
        .stages
        .iter()
        .map(|s| match s {
            StageSpec::ThermalInit(init) => StageDocument::ThermalInit {
                memory: init.memory.clone(),
                system: init.system.clone(),
                reservoir: init.reservoir.clone(),
                rho_memory: matrix_to_doc(init.rho_memory.matrix()),
                h_s: matrix_to_doc(init.h_s.matrix()),
                h_s_final: (init.h_s_final.matrix() != init.h_s.matrix()).then(|| matrix_to_doc(init.h_s_final.matrix())),
                h_r: init.h_r.as_ref().map(|h| matrix_to_doc(h.matrix())),
            },
            StageSpec::Unitary(u) => StageDocument::Unitary { targets: u.targets.clone(), operator: matrix_to_doc(&u.operator) },
            StageSpec::Measure(m) => StageDocument::Measure {
                target: m.target().to_owned(),
                projectors: m.projectors().iter().map(matrix_to_doc).collect(),
            },
            StageSpec::Feedback(f) => StageDocument::Feedback {
                control: f.control.clone(),
                targets: f.targets.clone(),
                unitaries: f.unitaries.iter().map(matrix_to_doc).collect(),
                expansion: f.expansion.clone(),
            },
        })
        .collect();
    ProtocolDocument { layout: p.layout.factors().to_vec(), beta: p.beta, bath_mode: p.bath_mode, stages }
}

pub fn to_json(p: &Protocol) -> String {
    serde_json::to_string_pretty(&to_document(p)).expect("documents always serialize")
}
