use super::stage::{BathMode, Feedback, StageSpec, ThermalInit, UnitaryStage};
use crate::densmat::{
    embed_local, embed_operator, partial_trace, reorder, tensor, thermal_state, ComplexMatrix, DensityMatrix,
    Hamiltonian, SubsystemLayout, UNITARY_TOL,
};
use crate::error::{Error, Result};
use crate::infomeasures::{measure_subsystem, von_neumann_entropy, MeasurementRecord, ProjectiveMeasurement};

/// Which layout factor plays which part in the engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roles {
    /// Measured memory factor A.
    pub memory_a: String,
    /// Unmeasured memory factor B.
    pub memory_b: String,
    pub system: String,
    pub reservoir: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Initialized,
    Measured,
    FedBack,
}

/// The engine between stages. Immutable: [`ProtocolState::run_stage`] returns a new value.
#[derive(Debug, Clone)]
pub struct ProtocolState {
    layout: SubsystemLayout,
    roles: Roles,
    rho: DensityMatrix,
    record: Option<MeasurementRecord>,
    measurement: Option<ProjectiveMeasurement>,
    pre_measurement_entropy: Option<f64>,
    bath_mode: BathMode,
    beta: f64,
    h_s_initial: Hamiltonian,
    h_s_final: Hamiltonian,
    h_r: Option<Hamiltonian>,
    heat_ledger: f64,
    work_ledger: f64,
    phase: Phase,
}

/// Builds ρ_AB ⊗ γ_S ⊗ γ_R (or ρ_AB ⊗ γ_S in ledger mode) in layout order.
pub fn stage0_init(layout: &SubsystemLayout, init: &ThermalInit, beta: f64, bath_mode: BathMode) -> Result<ProtocolState> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta = {beta}; the engine needs 0 < beta < inf")));
    }
    let [a, b] = &init.memory;
    let mut order: Vec<&str> = vec![a, b, &init.system];
    match (bath_mode, &init.reservoir, &init.h_r) {
        (BathMode::Explicit, Some(r), Some(_)) => order.push(r),
        (BathMode::Explicit, _, _) => {
            return Err(Error::InvalidStage("explicit bath mode needs a reservoir factor and H_R".into()))
        }
        (BathMode::Ledger, None, None) => {}
        (BathMode::Ledger, _, _) => {
            return Err(Error::InvalidStage("ledger bath mode takes no reservoir factor or H_R".into()))
        }
    }
    for (i, l) in order.iter().enumerate() {
        layout.position(l)?;
        if order[..i].contains(l) {
            return Err(Error::InvalidLayout(format!("factor `{l}` assigned two roles")));
        }
    }
    if order.len() != layout.len() {
        return Err(Error::InvalidLayout(format!(
            "layout has {} factors but the roles cover {}",
            layout.len(),
            order.len()
        )));
    }
    let d_mem = layout.dim_of(a)? * layout.dim_of(b)?;
    if init.rho_memory.dim() != d_mem {
        return Err(Error::DimensionMismatch(format!(
            "memory state has dimension {}, memory factors span {d_mem}",
            init.rho_memory.dim()
        )));
    }
    let d_s = layout.dim_of(&init.system)?;
    for h in [&init.h_s, &init.h_s_final] {
        if h.dim() != d_s {
            return Err(Error::DimensionMismatch(format!("H_S has dimension {}, system has {d_s}", h.dim())));
        }
    }
    let mut product = tensor(init.rho_memory.matrix(), thermal_state(&init.h_s, beta)?.matrix());
    if let (Some(r), Some(h_r)) = (&init.reservoir, &init.h_r) {
        let d_r = layout.dim_of(r)?;
        if h_r.dim() != d_r {
            return Err(Error::DimensionMismatch(format!("H_R has dimension {}, reservoir has {d_r}", h_r.dim())));
        }
        product = tensor(&product, thermal_state(h_r, beta)?.matrix());
    }
    let role_layout = SubsystemLayout::from_pairs(
        &order.iter().map(|l| (*l, layout.dim_of(l).unwrap())).collect::<Vec<_>>(),
    )?;
    let layout_order: Vec<&str> = layout.labels().collect();
    let rho = DensityMatrix::from_matrix_unchecked(reorder(&product, &role_layout, &layout_order)?);
    Ok(ProtocolState {
        layout: layout.clone(),
        roles: Roles {
            memory_a: a.clone(),
            memory_b: b.clone(),
            system: init.system.clone(),
            reservoir: init.reservoir.clone(),
        },
        rho,
        record: None,
        measurement: None,
        pre_measurement_entropy: None,
        bath_mode,
        beta,
        h_s_initial: init.h_s.clone(),
        h_s_final: init.h_s_final.clone(),
        h_r: init.h_r.clone(),
        heat_ledger: 0.0,
        work_ledger: 0.0,
        phase: Phase::Initialized,
    })
}

impl ProtocolState {
    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn roles(&self) -> &Roles {
        &self.roles
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn record(&self) -> Option<&MeasurementRecord> {
        self.record.as_ref()
    }

    pub fn measurement(&self) -> Option<&ProjectiveMeasurement> {
        self.measurement.as_ref()
    }

    /// S[ρ] right before the measurement stage, once one has run.
    pub fn pre_measurement_entropy(&self) -> Option<f64> {
        self.pre_measurement_entropy
    }

    pub fn bath_mode(&self) -> BathMode {
        self.bath_mode
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn h_s_initial(&self) -> &Hamiltonian {
        &self.h_s_initial
    }

    pub fn h_s_final(&self) -> &Hamiltonian {
        &self.h_s_final
    }

    pub fn h_r(&self) -> Option<&Hamiltonian> {
        self.h_r.as_ref()
    }

    /// Accumulated heat drawn from the ideal bath (ledger mode only).
    pub fn heat_ledger(&self) -> f64 {
        self.heat_ledger
    }

    /// Accumulated declared isothermal work (ledger mode only).
    pub fn work_ledger(&self) -> f64 {
        self.work_ledger
    }

    /// Reduced state on the given factors, in layout order.
    pub fn marginal(&self, labels: &[&str]) -> Result<DensityMatrix> {
        partial_trace(&self.rho, &self.layout, labels)
    }

    /// Memory state on A ⊗ B, A first regardless of layout order.
    pub fn memory_state(&self) -> Result<(DensityMatrix, SubsystemLayout)> {
        let (a, b) = (self.roles.memory_a.as_str(), self.roles.memory_b.as_str());
        let reduced = partial_trace(&self.rho, &self.layout, &[a, b])?;
        let natural = self.layout.select(&[a, b])?;
        let ordered = SubsystemLayout::from_pairs(&[(a, self.layout.dim_of(a)?), (b, self.layout.dim_of(b)?)])?;
        if natural == ordered {
            return Ok((reduced, ordered));
        }
        let m = reorder(reduced.matrix(), &natural, &[a, b])?;
        Ok((DensityMatrix::from_matrix_unchecked(m), ordered))
    }

    /// Advances the engine by one stage.
    pub fn run_stage(&self, stage: &StageSpec) -> Result<ProtocolState> {
        match stage {
            StageSpec::ThermalInit(_) => {
                Err(Error::OrderViolation("thermal_init may only start a protocol".into()))
            }
            StageSpec::Unitary(u) => self.unitary(u),
            StageSpec::Measure(m) => self.measure(m),
            StageSpec::Feedback(f) => self.feedback(f),
        }
    }

    fn unitary(&self, stage: &UnitaryStage) -> Result<ProtocolState> {
        if self.phase == Phase::Measured {
            return Err(Error::OrderViolation("unitary stage between measure and feedback".into()));
        }
        let u = embed_operator(&stage.operator, &self.layout, &stage.targets)?;
        Ok(ProtocolState { rho: conjugate(&self.rho, &u)?, ..self.clone() })
    }

    fn measure(&self, meas: &ProjectiveMeasurement) -> Result<ProtocolState> {
        if self.phase != Phase::Initialized {
            return Err(Error::OrderViolation("at most one measure stage".into()));
        }
        if meas.layout() != &self.layout {
            return Err(Error::InvalidMeasurement("measurement layout differs from the protocol layout".into()));
        }
        if meas.target() != self.roles.memory_a {
            return Err(Error::InvalidMeasurement(format!(
                "measurement acts on `{}`, the measured memory factor is `{}`",
                meas.target(),
                self.roles.memory_a
            )));
        }
        let record = measure_subsystem(&self.rho, meas)?;
        Ok(ProtocolState {
            rho: record.post_state.clone(),
            pre_measurement_entropy: Some(von_neumann_entropy(&self.rho)),
            record: Some(record),
            measurement: Some(meas.clone()),
            phase: Phase::Measured,
            ..self.clone()
        })
    }

    fn feedback(&self, fb: &Feedback) -> Result<ProtocolState> {
        let (Phase::Measured, Some(meas), Some(record)) = (self.phase, &self.measurement, &self.record) else {
            return Err(Error::OrderViolation("feedback requires a preceding measure stage".into()));
        };
        if fb.control != meas.target() {
            return Err(Error::InvalidStage(format!(
                "feedback is controlled by `{}`, but `{}` was measured",
                fb.control,
                meas.target()
            )));
        }
        if fb.unitaries.len() != meas.outcomes() {
            return Err(Error::InvalidStage(format!(
                "{} feedback unitaries for {} measurement outcomes",
                fb.unitaries.len(),
                meas.outcomes()
            )));
        }
        let u = feedback_operator(&self.layout, meas, fb)?;
        let mut rho = conjugate(&self.rho, &u)?;
        let mut heat = self.heat_ledger;
        let mut work = self.work_ledger;
        if let Some(exp) = &fb.expansion {
            if self.bath_mode != BathMode::Ledger {
                return Err(Error::InvalidStage("isothermal expansion needs the ledger bath mode".into()));
            }
            if exp.system != self.roles.system {
                return Err(Error::InvalidStage(format!(
                    "expansion acts on `{}`, the system factor is `{}`",
                    exp.system, self.roles.system
                )));
            }
            let k_t = 1.0 / self.beta;
            let w: f64 = record.probabilities.iter().zip(&exp.volume_ratios).map(|(p, v)| p * k_t * v.ln()).sum();
            let s = self.roles.system.as_str();
            let before = partial_trace(&rho, &self.layout, &[s])?;
            let relaxed = thermal_state(&self.h_s_final, self.beta)?;
            rho = replace_factor(&rho, &self.layout, s, &relaxed)?;
            let d_e = relaxed.expectation(self.h_s_final.matrix()) - before.expectation(self.h_s_final.matrix());
            work += w;
            heat += w + d_e;
        }
        Ok(ProtocolState { rho, heat_ledger: heat, work_ledger: work, phase: Phase::FedBack, ..self.clone() })
    }
}

/// Σ_k (Π_k on the control) · (U^k on the targets), checked unitary.
pub fn feedback_operator(layout: &SubsystemLayout, meas: &ProjectiveMeasurement, fb: &Feedback) -> Result<ComplexMatrix> {
    let d = layout.total_dim();
    let mut u = ComplexMatrix::zeros(d, d);
    for (p, uk) in meas.projectors().iter().zip(&fb.unitaries) {
        let block = embed_local(p, layout, &fb.control)?.matmul(&embed_operator(uk, layout, &fb.targets)?);
        u = &u + &block;
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary(defect));
    }
    Ok(u)
}

fn conjugate(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    if u.rows() != rho.dim() {
        return Err(Error::DimensionMismatch("operator and state differ in dimension".into()));
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary(defect));
    }
    Ok(DensityMatrix::from_matrix_unchecked(u.matmul(rho.matrix()).matmul(&u.adjoint())))
}

/// tr_label(ρ) ⊗ σ, put back in layout order.
fn replace_factor(rho: &DensityMatrix, layout: &SubsystemLayout, label: &str, sigma: &DensityMatrix) -> Result<DensityMatrix> {
    let rest = layout.without(&[label])?;
    let rest_labels: Vec<&str> = rest.labels().collect();
    let reduced = partial_trace(rho, layout, &rest_labels)?;
    let mut pairs: Vec<(&str, usize)> = rest.factors().iter().map(|f| (f.label.as_str(), f.dim)).collect();
    pairs.push((label, sigma.dim()));
    let joined = SubsystemLayout::from_pairs(&pairs)?;
    let order: Vec<&str> = layout.labels().collect();
    let m = reorder(&tensor(reduced.matrix(), sigma.matrix()), &joined, &order)?;
    Ok(DensityMatrix::from_matrix_unchecked(m))
}
