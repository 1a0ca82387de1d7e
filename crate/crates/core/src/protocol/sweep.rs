//! Random explicit-bath protocols for checking the work bounds.
//!
//! Each protocol lives on `A ⊗ B ⊗ S ⊗ R` with qubit memory and system and a
//! reservoir of configurable dimension. Every stage is drawn at random: the
//! memory state, diagonal Hamiltonians for R and (optionally) S, a
//! unitary on S R, a coupling on A S R, a measurement of A along a random
//! axis, feedback unitaries on S R, and a closing unitary on S R.

use rand::Rng;

use super::{verify_bounds, BathMode, Feedback, Protocol, StageKind, StageSpec, ThermalInit, UnitaryStage};
use super::{DISCORD_BOUND, MEASUREMENT_ENTROPY, MUTUAL_INFORMATION_BOUND, QC_BOUND};
use crate::densmat::{embed_local, Hamiltonian, HamiltonianRole, SubsystemLayout};
use crate::error::{Error, Result};
use crate::infomeasures::{discord_along, von_neumann_entropy, BlochAngles, ProjectiveMeasurement, DEFAULT_GRID_N};
use crate::random::{random_bloch, random_state, random_unitary, seeded};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub count: usize,
    pub seed: u64,
    pub reservoir_dim: usize,
    pub beta: f64,
    pub max_energy: f64,
    pub grid_n: usize,
    /// H_S = 0 throughout; otherwise H_S and its final form are random.
    pub degenerate_system: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { count: 200, seed: 42, reservoir_dim: 2, beta: 1.0, max_energy: 2.0, grid_n: DEFAULT_GRID_N, degenerate_system: true }
    }
}

/// Checks for one random protocol. Slacks are rhs - lhs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub index: usize,
    pub seed: u64,
    pub mutual_information_slack: f64,
    pub discord_slack: f64,
    pub qc_slack: f64,
    pub measurement_entropy_slack: f64,
    /// Largest change of the global entropy across a unitary or feedback stage.
    pub unitary_entropy_drift: f64,
    /// |Q from the ledger - Q from tr[(1 ⊗ H_R)(ρ_i - ρ_f)]|.
    pub heat_residual: f64,
    /// Discord of the post-measurement memory along the measured axis.
    pub post_measurement_discord: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub outcomes: Vec<SweepOutcome>,
}

impl SweepSummary {
    fn min_of(&self, f: impl Fn(&SweepOutcome) -> f64) -> f64 {
        self.outcomes.iter().map(f).fold(f64::INFINITY, f64::min)
    }

    fn max_of(&self, f: impl Fn(&SweepOutcome) -> f64) -> f64 {
        self.outcomes.iter().map(f).fold(0.0, f64::max)
    }

    pub fn min_mutual_information_slack(&self) -> f64 {
        self.min_of(|o| o.mutual_information_slack)
    }

    pub fn min_discord_slack(&self) -> f64 {
        self.min_of(|o| o.discord_slack)
    }

    pub fn min_qc_slack(&self) -> f64 {
        self.min_of(|o| o.qc_slack)
    }

    pub fn min_measurement_entropy_slack(&self) -> f64 {
        self.min_of(|o| o.measurement_entropy_slack)
    }

    pub fn max_unitary_entropy_drift(&self) -> f64 {
        self.max_of(|o| o.unitary_entropy_drift)
    }

    pub fn max_heat_residual(&self) -> f64 {
        self.max_of(|o| o.heat_residual)
    }

    pub fn max_post_measurement_discord(&self) -> f64 {
        self.max_of(|o| o.post_measurement_discord)
    }
}

pub fn sweep_layout(reservoir_dim: usize) -> Result<SubsystemLayout> {
    SubsystemLayout::from_pairs(&[("A", 2), ("B", 2), ("S", 2), ("R", reservoir_dim)])
}

fn random_diagonal<R: Rng + ?Sized>(
    rng: &mut R,
    label: &str,
    dim: usize,
    max_energy: f64,
    role: HamiltonianRole,
) -> Result<Hamiltonian> {
    let energies: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..max_energy)).collect();
    Hamiltonian::diagonal(SubsystemLayout::from_pairs(&[(label, dim)])?, &energies, role)
}

fn strings(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

/// A random protocol and the axis its measurement uses.
pub fn random_protocol<R: Rng + ?Sized>(rng: &mut R, config: &SweepConfig) -> Result<(Protocol, BlochAngles)> {
    if config.reservoir_dim < 2 {
        return Err(Error::InvalidParameter(format!("reservoir dimension {} < 2", config.reservoir_dim)));
    }
    let layout = sweep_layout(config.reservoir_dim)?;
    let dr = config.reservoir_dim;
    let (h_s, h_s_final) = if config.degenerate_system {
        let h = Hamiltonian::zero(SubsystemLayout::from_pairs(&[("S", 2)])?, HamiltonianRole::Initial);
        (h.clone(), h.with_role(HamiltonianRole::Final))
    } else {
        (
            random_diagonal(rng, "S", 2, config.max_energy, HamiltonianRole::Initial)?,
            random_diagonal(rng, "S", 2, config.max_energy, HamiltonianRole::Final)?,
        )
    };
    let init = ThermalInit {
        memory: ["A".into(), "B".into()],
        system: "S".into(),
        reservoir: Some("R".into()),
        rho_memory: random_state(rng, 4),
        h_s,
        h_s_final,
        h_r: Some(random_diagonal(rng, "R", dr, config.max_energy, HamiltonianRole::Constant)?),
    };
    let angles = random_bloch(rng);
    let stages = vec![
        StageSpec::ThermalInit(Box::new(init)),
        StageSpec::Unitary(UnitaryStage::new(strings(&["S", "R"]), random_unitary(rng, 2 * dr))?),
        StageSpec::Unitary(UnitaryStage::new(strings(&["A", "S", "R"]), random_unitary(rng, 4 * dr))?),
        StageSpec::Measure(ProjectiveMeasurement::along(layout.clone(), "A", angles)?),
        StageSpec::Feedback(Feedback::new(
            "A".into(),
            strings(&["S", "R"]),
            vec![random_unitary(rng, 2 * dr), random_unitary(rng, 2 * dr)],
            None,
        )?),
        StageSpec::Unitary(UnitaryStage::new(strings(&["S", "R"]), random_unitary(rng, 2 * dr))?),
    ];
    Ok((Protocol::new(layout, stages, config.beta, BathMode::Explicit)?, angles))
}

pub fn evaluate(protocol: &Protocol, angles: BlochAngles, grid_n: usize) -> Result<SweepOutcome> {
    let run = protocol.run()?;
    let mut ledger = run.ledger(grid_n)?;
    if let Some(qc) = run.qc_mutual_information()? {
        ledger = ledger.with_qc_mutual_info(qc);
    }
    let report = verify_bounds(&ledger);
    let slack = |name: &str| report.get(name).map(|e| e.slack).unwrap_or(f64::NAN);

    let mut unitary_entropy_drift: f64 = 0.0;
    let mut post_measurement_discord = f64::NAN;
    for (k, kind) in run.kinds.iter().enumerate().skip(1) {
        match kind {
            StageKind::Unitary | StageKind::Feedback => {
                let before = von_neumann_entropy(run.states[k - 1].rho());
                let after = von_neumann_entropy(run.states[k].rho());
                unitary_entropy_drift = unitary_entropy_drift.max((after - before).abs());
            }
            StageKind::Measure => {
                let (mem, mem_layout) = run.states[k].memory_state()?;
                post_measurement_discord = discord_along(&mem, &mem_layout, angles)?;
            }
            StageKind::ThermalInit => {}
        }
    }

    let init = run.initial();
    let h_r = init.h_r().ok_or_else(|| Error::InvalidParameter("sweep needs an explicit reservoir".into()))?;
    let r = init.roles().reservoir.as_deref().unwrap_or("R");
    let h_r_full = embed_local(h_r.matrix(), init.layout(), r)?;
    let q_oracle = init.rho().expectation(&h_r_full) - run.final_state().rho().expectation(&h_r_full);

    Ok(SweepOutcome {
        index: 0,
        seed: 0,
        mutual_information_slack: slack(MUTUAL_INFORMATION_BOUND),
        discord_slack: slack(DISCORD_BOUND),
        qc_slack: slack(QC_BOUND),
        measurement_entropy_slack: slack(MEASUREMENT_ENTROPY),
        unitary_entropy_drift,
        heat_residual: (ledger.q - q_oracle).abs(),
        post_measurement_discord,
    })
}

/// Protocol `i` is drawn from its own generator seeded with `seed + i`.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    let mut outcomes = Vec::with_capacity(config.count);
    for index in 0..config.count {
        let seed = config.seed.wrapping_add(index as u64);
        let mut rng = seeded(seed);
        let (protocol, angles) = random_protocol(&mut rng, config)?;
        let outcome = evaluate(&protocol, angles, config.grid_n)?;
        outcomes.push(SweepOutcome { index, seed, ..outcome });
    }
    Ok(SweepSummary { outcomes })
}
