//! The four-stage measurement-feedback engine.
//!
//! A [`Protocol`] is a validated stage list: thermal preparation, unitaries,
//! one projective measurement of memory factor A, outcome-conditioned
//! feedback, then optional further unitaries. Running it yields the chain of
//! [`ProtocolState`]s from which the [`ThermoLedger`] and the
//! [`BoundReport`] are computed.

mod document;
mod ledger;
mod stage;
mod state;
pub mod sweep;

pub use document::{parse_protocol, to_document, to_json, MatrixDoc, ProtocolDocument, StageDocument};
pub use ledger::{
    compute_ledger, compute_ledger_with_grid, verify_bounds, BoundEntry, BoundReport, EntropyPair, ThermoLedger,
    BOUND_TOL, DISCORD_BOUND, MEASUREMENT_ENTROPY, MUTUAL_INFORMATION_BOUND, QC_BOUND,
};
pub use stage::{validate_order, BathMode, Feedback, IsothermalExpansion, StageKind, StageSpec, ThermalInit, UnitaryStage};
pub use state::{feedback_operator, stage0_init, ProtocolState, Roles};

use crate::densmat::SubsystemLayout;
use crate::error::{Error, Result};
use crate::infomeasures::qc_mutual_information;

#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub layout: SubsystemLayout,
    pub stages: Vec<StageSpec>,
    pub beta: f64,
    pub bath_mode: BathMode,
}

impl Protocol {
    pub fn new(layout: SubsystemLayout, stages: Vec<StageSpec>, beta: f64, bath_mode: BathMode) -> Result<Self> {
        validate_order(&stages.iter().map(StageSpec::kind).collect::<Vec<_>>())?;
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta = {beta}; need 0 < beta < inf")));
        }
        Ok(Self { layout, stages, beta, bath_mode })
    }

    /// Same protocol at a different inverse temperature.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.layout.clone(), self.stages.clone(), beta, self.bath_mode)
    }

    pub fn run(&self) -> Result<ProtocolRun> {
        let StageSpec::ThermalInit(init) = &self.stages[0] else {
            unreachable!("order validated at construction");
        };
        let mut states = vec![stage0_init(&self.layout, init, self.beta, self.bath_mode)?];
        for stage in &self.stages[1..] {
            let next = states.last().unwrap().run_stage(stage)?;
            states.push(next);
        }
        Ok(ProtocolRun { states, kinds: self.stages.iter().map(StageSpec::kind).collect() })
    }
}

/// All intermediate states of one run; `states[k]` follows stage `k`.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub states: Vec<ProtocolState>,
    pub kinds: Vec<StageKind>,
}

impl ProtocolRun {
    pub fn initial(&self) -> &ProtocolState {
        &self.states[0]
    }

    pub fn final_state(&self) -> &ProtocolState {
        self.states.last().unwrap()
    }

    pub fn ledger(&self, grid_n: usize) -> Result<ThermoLedger> {
        let init = self.initial();
        compute_ledger_with_grid(init, self.final_state(), init.h_s_initial(), init.h_s_final(), grid_n)
    }

    /// I_QC(S:X) with X the outcomes of the measurement stage, if there was one.
    pub fn qc_mutual_information(&self) -> Result<Option<f64>> {
        let Some(record) = self.final_state().record() else {
            return Ok(None);
        };
        let s = self.initial().roles().system.as_str();
        let rho_s = self.initial().marginal(&[s])?;
        qc_mutual_information(&rho_s, record, s).map(Some)
    }
}
