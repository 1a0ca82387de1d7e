use serde::{Deserialize, Serialize};

use crate::densmat::{ComplexMatrix, DensityMatrix, Hamiltonian, VALIDATION_TOL};
use crate::error::{Error, Result};
use crate::infomeasures::ProjectiveMeasurement;

/// How the heat reservoir is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BathMode {
    /// Finite-dimensional reservoir inside the density matrix; heat from tr[ρ H_R].
    Explicit,
    /// Ideal reservoir kept outside the state; isothermal steps declare heat and work.
    Ledger,
}

/// Preparation of ρ_AB ⊗ γ_S ⊗ γ_R.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalInit {
    /// The two memory factors; the first is the one that gets measured.
    pub memory: [String; 2],
    pub system: String,
    pub reservoir: Option<String>,
    /// Memory state on `memory[0] ⊗ memory[1]`, in that order.
    pub rho_memory: DensityMatrix,
    pub h_s: Hamiltonian,
    pub h_s_final: Hamiltonian,
    pub h_r: Option<Hamiltonian>,
}

/// A unitary acting on `targets` (taken in layout order).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryStage {
    pub targets: Vec<String>,
    pub operator: ComplexMatrix,
}

impl UnitaryStage {
    pub fn new(targets: Vec<String>, operator: ComplexMatrix) -> Result<Self> {
        let defect = operator.unitarity_defect();
        if defect > VALIDATION_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { targets, operator })
    }
}

/// Branch-conditional isothermal expansion of the system against the ideal bath.
///
/// Outcome k contributes work k_BT ln(volume_ratios[k]) with probability p_k.
/// The system then relaxes to the Gibbs state of the final Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsothermalExpansion {
    pub system: String,
    pub volume_ratios: Vec<f64>,
}

/// Outcome-conditioned control U = Σ_k |k⟩⟨k|_control ⊗ U^k_targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Feedback {
    pub control: String,
    pub targets: Vec<String>,
    pub unitaries: Vec<ComplexMatrix>,
    pub expansion: Option<IsothermalExpansion>,
}

impl Feedback {
    pub fn new(
        control: String,
        targets: Vec<String>,
        unitaries: Vec<ComplexMatrix>,
        expansion: Option<IsothermalExpansion>,
    ) -> Result<Self> {
        for (k, u) in unitaries.iter().enumerate() {
            let defect = u.unitarity_defect();
            if defect > VALIDATION_TOL {
                return Err(Error::InvalidStage(format!("feedback unitary {k} is not unitary (deviation {defect:.3e})")));
            }
        }
        if targets.contains(&control) {
            return Err(Error::InvalidStage(format!("feedback targets include the control factor `{control}`")));
        }
        if let Some(e) = &expansion {
            if e.volume_ratios.len() != unitaries.len() {
                return Err(Error::InvalidStage(format!(
                    "{} volume ratios for {} outcomes",
                    e.volume_ratios.len(),
                    unitaries.len()
                )));
            }
            if let Some(v) = e.volume_ratios.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::InvalidStage(format!("volume ratio {v} must be positive and finite")));
            }
        }
        Ok(Self { control, targets, unitaries, expansion })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StageSpec {
    ThermalInit(Box<ThermalInit>),
    Unitary(UnitaryStage),
    Measure(ProjectiveMeasurement),
    Feedback(Feedback),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageKind {
    ThermalInit,
    Unitary,
    Measure,
    Feedback,
}

impl StageSpec {
    pub fn kind(&self) -> StageKind {
        match self {
            StageSpec::ThermalInit(_) => StageKind::ThermalInit,
            StageSpec::Unitary(_) => StageKind::Unitary,
            StageSpec::Measure(_) => StageKind::Measure,
            StageSpec::Feedback(_) => StageKind::Feedback,
        }
    }
}

/// Checks init → unitaries → (measure → feedback?) → unitaries.
pub fn validate_order(kinds: &[StageKind]) -> Result<()> {
    use StageKind::*;
    match kinds.first() {
        Some(ThermalInit) => {}
        Some(k) => return Err(Error::OrderViolation(format!("first stage is {k:?}, expected thermal_init"))),
        None => return Err(Error::OrderViolation("protocol has no stages".into())),
    }
    let mut measured = false;
    let mut fed_back = false;
    for (i, k) in kinds.iter().enumerate().skip(1) {
        match k {
            ThermalInit => return Err(Error::OrderViolation(format!("stage {i}: thermal_init may only be the first stage"))),
            Measure if measured => return Err(Error::OrderViolation(format!("stage {i}: at most one measure stage"))),
            Measure => measured = true,
            Feedback if !measured => return Err(Error::OrderViolation(format!("stage {i}: feedback before measure"))),
            Feedback if fed_back => return Err(Error::OrderViolation(format!("stage {i}: at most one feedback stage"))),
            Feedback if kinds[i - 1] != Measure => {
                return Err(Error::OrderViolation(format!("stage {i}: feedback must directly follow the measurement")))
            }
            Feedback => fed_back = true,
            Unitary => {}
        }
    }
    Ok(())
}
