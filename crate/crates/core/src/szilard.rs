//! Szilard engine with a two-atom molecule whose internal states A and B form
//! the memory, and semi-permeable walls that see only A.
//!
//! Factor layout is `A ⊗ B ⊗ S` with |↑⟩ = index 0, |↓⟩ = index 1 for the
//! memory qubits and |L⟩ = 0, |R⟩ = 1 for the side of the box. The reservoir
//! is ideal (ledger bath mode) because the expansion is continuous.
//!
//! Stages:
//! 1. thermal preparation with a fully degenerate H_S, so ρ_S = ½(|L⟩⟨L| + |R⟩⟨R|);
//! 2. the coupling |L⟩⟨L| ⊗ U_L + |R⟩⟨R| ⊗ U_R with U_L|Ψ⁺⟩ = |↑↑⟩, U_R|Ψ⁺⟩ = |↓↓⟩;
//! 3. measurement of A in {|↑⟩, |↓⟩};
//! 4. the walls move apart: each branch expands isothermally by `volume_ratio`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Complex;

use crate::densmat::{c, tensor, ComplexMatrix, DensityMatrix, Hamiltonian, HamiltonianRole, SubsystemLayout};
use crate::error::{Error, Result};
use crate::infomeasures::{discord_along, von_neumann_entropy, BlochAngles, ProjectiveMeasurement, DEFAULT_GRID_N};
use crate::protocol::{
    verify_bounds, BathMode, BoundReport, Feedback, IsothermalExpansion, Protocol, StageSpec, ThermalInit, ThermoLedger,
    UnitaryStage,
};

pub const MEMORY_A: &str = "A";
pub const MEMORY_B: &str = "B";
pub const SYSTEM: &str = "S";

#[derive(Debug, Clone, PartialEq)]
pub struct SzilardScenario {
    /// State of the memory on A ⊗ B.
    pub memory_initial: DensityMatrix,
    /// k_BT in energy units.
    pub temperature: f64,
    /// Volume ratio of each branch's isothermal expansion.
    pub volume_ratio: f64,
    /// Also spend the classical correlation left in the memory afterwards.
    pub include_classical_extraction: bool,
}

impl SzilardScenario {
    /// Memory prepared in |Ψ⁺⟩ = (|↑↑⟩ + |↓↓⟩)/√2, unit temperature, ratio 2.
    pub fn bell() -> Self {
        Self {
            memory_initial: bell_state(),
            temperature: 1.0,
            volume_ratio: 2.0,
            include_classical_extraction: false,
        }
    }

    /// Memory prepared in the product state |↑↑⟩.
    pub fn product() -> Self {
        Self { memory_initial: DensityMatrix::diagonal(&[1.0, 0.0, 0.0, 0.0]).unwrap(), ..Self::bell() }
    }

    pub fn with_classical_extraction(mut self) -> Self {
        self.include_classical_extraction = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.memory_initial.dim() != 4 {
            return Err(Error::InvalidScenario(format!(
                "memory must live on two qubits, got dimension {}",
                self.memory_initial.dim()
            )));
        }
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::InvalidScenario(format!("temperature {} must be positive", self.temperature)));
        }
        if !(self.volume_ratio >= 1.0 && self.volume_ratio.is_finite()) {
            return Err(Error::InvalidScenario(format!("volume ratio {} must be at least 1", self.volume_ratio)));
        }
        Ok(())
    }
}

pub fn bell_state() -> DensityMatrix {
    DensityMatrix::pure(&bell_ket()).unwrap()
}

fn bell_ket() -> [Complex<f64>; 4] {
    let h = c(FRAC_1_SQRT_2, 0.0);
    let z = c(0.0, 0.0);
    [h, z, z, h]
}

fn basis(n: usize, k: usize) -> Vec<Complex<f64>> {
    (0..n).map(|i| c(if i == k { 1.0 } else { 0.0 }, 0.0)).collect()
}

/// Gram–Schmidt: `first` followed by the standard basis vectors that survive
/// orthogonalization, in index order.
fn orthonormal_completion(first: &[Complex<f64>]) -> Vec<Vec<Complex<f64>>> {
    let n = first.len();
    let norm = first.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut out: Vec<Vec<Complex<f64>>> = vec![first.iter().map(|z| z / norm).collect()];
    for k in 0..n {
        if out.len() == n {
            break;
        }
        let mut v = basis(n, k);
        for u in &out {
            let overlap: Complex<f64> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= overlap * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            out.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    out
}

/// The unitary sending `from` to `to`, completed deterministically on the
/// orthogonal complements by Gram–Schmidt against the standard basis.
pub fn completed_unitary(from: &[Complex<f64>], to: &[Complex<f64>]) -> Result<ComplexMatrix> {
    if from.len() != to.len() || from.is_empty() {
        return Err(Error::DimensionMismatch("input and output kets differ in dimension".into()));
    }
    let ins = orthonormal_completion(from);
    let outs = orthonormal_completion(to);
    let n = from.len();
    let mut u = ComplexMatrix::zeros(n, n);
    for (o, i) in outs.iter().zip(&ins) {
        u = &u + &ComplexMatrix::outer(o, i);
    }
    Ok(u)
}

/// U_L with U_L|Ψ⁺⟩ = |↑↑⟩.
pub fn u_left() -> ComplexMatrix {
    completed_unitary(&bell_ket(), &basis(4, 0)).unwrap()
}

/// U_R with U_R|Ψ⁺⟩ = |↓↓⟩.
pub fn u_right() -> ComplexMatrix {
    completed_unitary(&bell_ket(), &basis(4, 3)).unwrap()
}

/// |L⟩⟨L| ⊗ U_L + |R⟩⟨R| ⊗ U_R written on A ⊗ B ⊗ S.
pub fn coupling_operator() -> ComplexMatrix {
    let p_l = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
    let p_r = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
    &tensor(&u_left(), &p_l) + &tensor(&u_right(), &p_r)
}

pub fn layout() -> SubsystemLayout {
    SubsystemLayout::from_pairs(&[(MEMORY_A, 2), (MEMORY_B, 2), (SYSTEM, 2)]).unwrap()
}

pub fn build_szilard(scenario: &SzilardScenario) -> Result<(SubsystemLayout, Vec<StageSpec>)> {
    scenario.validate()?;
    let layout = layout();
    let s_layout = SubsystemLayout::from_pairs(&[(SYSTEM, 2)])?;
    let h_s = Hamiltonian::zero(s_layout, HamiltonianRole::Initial);
    let init = ThermalInit {
        memory: [MEMORY_A.into(), MEMORY_B.into()],
        system: SYSTEM.into(),
        reservoir: None,
        rho_memory: scenario.memory_initial.clone(),
        h_s_final: h_s.with_role(HamiltonianRole::Final),
        h_s,
        h_r: None,
    };
    let coupling = UnitaryStage::new(vec![MEMORY_A.into(), MEMORY_B.into(), SYSTEM.into()], coupling_operator())?;
    let measure = ProjectiveMeasurement::computational(layout.clone(), MEMORY_A)?;
    let walls = Feedback::new(
        MEMORY_A.into(),
        vec![SYSTEM.into()],
        vec![ComplexMatrix::identity(2); 2],
        Some(IsothermalExpansion { system: SYSTEM.into(), volume_ratios: vec![scenario.volume_ratio; 2] }),
    )?;
    let stages = vec![
        StageSpec::ThermalInit(Box::new(init)),
        StageSpec::Unitary(coupling),
        StageSpec::Measure(measure),
        StageSpec::Feedback(walls),
    ];
    Ok((layout, stages))
}

pub fn szilard_protocol(scenario: &SzilardScenario) -> Result<Protocol> {
    let (layout, stages) = build_szilard(scenario)?;
    Protocol::new(layout, stages, 1.0 / scenario.temperature, BathMode::Ledger)
}

/// The Bell-memory engine as a protocol document.
pub const BUNDLED_PROTOCOL: &str = include_str!("../scenarios/szilard.protocol");

pub fn bundled_protocol() -> Result<Protocol> {
    crate::protocol::parse_protocol(BUNDLED_PROTOCOL)
}

#[derive(Debug, Clone)]
pub struct SzilardReport {
    pub ledger: ThermoLedger,
    pub bounds: BoundReport,
    pub outcome_probabilities: Vec<f64>,
    /// I_QC(S:X) with X the outcome of measuring A. Not a bound input: the
    /// whole-memory bound is stated for a measurement of S itself.
    pub qc_mutual_information: f64,
    /// Memory right after the measurement.
    pub memory_post_measurement: DensityMatrix,
    /// Discord of the post-measurement memory along the measured axis.
    pub post_measurement_discord: f64,
    pub memory_initial: DensityMatrix,
    /// Memory at the end, after the classical extraction if it was included.
    pub memory_final: DensityMatrix,
    pub work_quantum: f64,
    pub work_classical: f64,
    pub reset_cost: f64,
}

impl SzilardReport {
    /// Extracted work minus the cost of restoring the memory.
    pub fn net_cycle_work(&self) -> f64 {
        self.work_quantum + self.work_classical - self.reset_cost
    }
}

/// k_BT (S[ρ_f] - S[ρ_i]): the work needed to bring the memory back.
pub fn reset_cost(temperature: f64, rho_memory_i: &DensityMatrix, rho_memory_f: &DensityMatrix) -> f64 {
    temperature * (von_neumann_entropy(rho_memory_f) - von_neumann_entropy(rho_memory_i))
}

pub fn run_szilard(scenario: &SzilardScenario) -> Result<SzilardReport> {
    run_szilard_with_grid(scenario, DEFAULT_GRID_N)
}

pub fn run_szilard_with_grid(scenario: &SzilardScenario, grid_n: usize) -> Result<SzilardReport> {
    let protocol = szilard_protocol(scenario)?;
    let run = protocol.run()?;
    let ledger = run.ledger(grid_n)?;
    let bounds = verify_bounds(&ledger);
    let qc_mutual_information = run.qc_mutual_information()?.unwrap_or(0.0);

    let measured = &run.states[2];
    let record = measured.record().expect("stage 3 measures A");
    let (memory_post_measurement, mem_layout) = measured.memory_state()?;
    let post_measurement_discord = discord_along(&memory_post_measurement, &mem_layout, BlochAngles::z_axis())?;

    let (after_protocol, _) = run.final_state().memory_state()?;
    let (work_classical, memory_final) = if scenario.include_classical_extraction {
        // Spending J(B:A) leaves the product of the marginals.
        let a = crate::densmat::partial_trace(&after_protocol, &mem_layout, &[MEMORY_A])?;
        let b = crate::densmat::partial_trace(&after_protocol, &mem_layout, &[MEMORY_B])?;
        let decorrelated = DensityMatrix::new(tensor(a.matrix(), b.matrix()))?;
        (scenario.temperature * ledger.classical_corr_f, decorrelated)
    } else {
        (0.0, after_protocol)
    };
    let reset = reset_cost(scenario.temperature, &scenario.memory_initial, &memory_final);
    Ok(SzilardReport {
        work_quantum: ledger.w_ext,
        work_classical,
        reset_cost: reset,
        outcome_probabilities: record.probabilities.clone(),
        qc_mutual_information,
        memory_post_measurement,
        post_measurement_discord,
        memory_initial: scenario.memory_initial.clone(),
        memory_final,
        ledger,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::LN_2;

    use super::*;
    use crate::protocol::DISCORD_BOUND;

    #[test]
    fn coupling_pieces_act_as_specified() {
        let ul = u_left();
        let ur = u_right();
        assert!(ul.is_unitary(1e-12) && ur.is_unitary(1e-12));
        let bell = bell_ket();
        let apply = |u: &ComplexMatrix| -> Vec<Complex<f64>> {
            (0..4).map(|i| (0..4).map(|j| u.get(i, j) * bell[j]).sum()).collect()
        };
        let l = apply(&ul);
        let r = apply(&ur);
        for k in 0..4 {
            assert!((l[k] - basis(4, 0)[k]).norm() < 1e-12);
            assert!((r[k] - basis(4, 3)[k]).norm() < 1e-12);
        }
        assert!(coupling_operator().is_unitary(1e-12));
    }

    #[test]
    fn explicit_completion_on_up_up() {
        // in-basis {Ψ⁺, Ψ⁻, |↑↓⟩, |↓↑⟩} → out-basis {|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩} for U_L, so
        // U_L|↑↑⟩ = (|↑↑⟩ + |↑↓⟩)/√2 and U_R|↑↑⟩ = (|↓↓⟩ + |↑↑⟩)/√2.
        let ul = u_left();
        let ur = u_right();
        let h = FRAC_1_SQRT_2;
        let col_l: Vec<f64> = (0..4).map(|i| ul.get(i, 0).re).collect();
        let col_r: Vec<f64> = (0..4).map(|i| ur.get(i, 0).re).collect();
        for (got, want) in col_l.iter().zip([h, h, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in col_r.iter().zip([h, 0.0, 0.0, h]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_build_has_four_stages_and_fair_outcomes() {
        let (_, stages) = build_szilard(&SzilardScenario::bell()).unwrap();
        assert_eq!(stages.len(), 4);
        let r = run_szilard(&SzilardScenario::bell()).unwrap();
        assert!((r.qc_mutual_information - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((r.outcome_probabilities[0] - 0.5).abs() < 1e-12);
        assert!((r.outcome_probabilities[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_memory_outcomes_follow_the_completion() {
        // From the explicit completion: ½ U_L|↑↑⟩⟨↑↑|U_L† ⊗ |L⟩⟨L| + ½ U_R|↑↑⟩⟨↑↑|U_R† ⊗ |R⟩⟨R|
        // gives P(A = ↑) = ½·1 + ½·½ = ¾.
        let r = run_szilard(&SzilardScenario::product()).unwrap();
        assert!((r.outcome_probabilities[0] - 0.75).abs() < 1e-12);
        assert!((r.outcome_probabilities[1] - 0.25).abs() < 1e-12);
        assert!(r.ledger.discord_i.abs() < 1e-9);
        let e = r.bounds.get(DISCORD_BOUND).unwrap();
        assert!(e.slack >= -1e-9, "{e:?}");
    }

    #[test]
    fn unit_volume_ratio_extracts_nothing() {
        let s = SzilardScenario { volume_ratio: 1.0, ..SzilardScenario::bell() };
        let r = run_szilard(&s).unwrap();
        assert_eq!(r.work_quantum, 0.0);
    }

    #[test]
    fn invalid_scenarios() {
        let bad_dim = SzilardScenario { memory_initial: DensityMatrix::maximally_mixed(2), ..SzilardScenario::bell() };
        assert!(matches!(build_szilard(&bad_dim), Err(Error::InvalidScenario(_))));
        let bad_ratio = SzilardScenario { volume_ratio: 0.5, ..SzilardScenario::bell() };
        assert!(build_szilard(&bad_ratio).is_err());
        let bad_t = SzilardScenario { temperature: 0.0, ..SzilardScenario::bell() };
        assert!(build_szilard(&bad_t).is_err());
    }

    #[test]
    fn reset_cost_examples() {
        let bell = bell_state();
        let classical = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((reset_cost(1.0, &bell, &classical) - LN_2).abs() < 1e-12);
        assert_eq!(reset_cost(1.0, &bell, &bell), 0.0);
        assert!((reset_cost(1.0, &bell, &DensityMatrix::maximally_mixed(4)) - 2.0 * LN_2).abs() < 1e-12);
        assert!((reset_cost(0.5, &bell, &classical) - 0.5 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn bundled_document_matches_the_builder() {
        let built = szilard_protocol(&SzilardScenario::bell()).unwrap();
        let bundled = bundled_protocol().unwrap();
        let a = built.run().unwrap().ledger(DEFAULT_GRID_N).unwrap();
        let b = bundled.run().unwrap().ledger(DEFAULT_GRID_N).unwrap();
        for (x, y) in [
            (a.w_ext, b.w_ext),
            (a.q, b.q),
            (a.ds_a, b.ds_a),
            (a.ds_b, b.ds_b),
            (a.di, b.di),
            (a.dj, b.dj),
            (a.discord_i, b.discord_i),
            (a.discord_f, b.discord_f),
        ] {
            assert!((x - y).abs() <= 1e-12);
        }
        assert_eq!(crate::protocol::to_document(&built), crate::protocol::to_document(&bundled));
    }

    #[test]
    fn temperature_scales_work() {
        let s = SzilardScenario { temperature: 2.5, ..SzilardScenario::bell() };
        let r = run_szilard(&s).unwrap();
        assert!((r.work_quantum - 2.5 * LN_2).abs() < 1e-12);
        assert!(r.bounds.all_satisfied());
    }
}
