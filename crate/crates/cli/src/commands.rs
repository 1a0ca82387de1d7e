use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use qheat_core::infomeasures::{analyze_correlations, discord_oracle};
use qheat_core::properties::{decomposition, inequality_suites, INEQUALITY_TOL};
use qheat_core::protocol::sweep::{run_sweep, SweepConfig};
use qheat_core::protocol::{parse_protocol, verify_bounds, BOUND_TOL};
use qheat_core::szilard::run_szilard_with_grid;
use qheat_core::{BoundReport, DensityMatrix, Error, Result, SzilardScenario, ThermoLedger};

use crate::format::{csv_line, sig12, Table};
use crate::input::{read_state, read_text};
use crate::{CommonArgs, DiscordArgs, OutputFormat, RunArgs, Scenario, SweepArgs, VerifyArgs};

const POST_MEASUREMENT_DISCORD_TOL: f64 = 1e-6;

fn emit(common: &CommonArgs, content: &str) -> Result<()> {
    match &common.output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn checked_beta(beta: Option<f64>) -> Result<Option<f64>> {
    match beta {
        Some(b) if !(b > 0.0 && b.is_finite()) => Err(Error::InvalidParameter(format!("--beta {b}: need 0 < beta < inf"))),
        other => Ok(other),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize") + "\n"
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SzilardSummary {
    pub outcome_probabilities: Vec<f64>,
    pub qc_mutual_information: f64,
    pub post_measurement_discord: f64,
    pub work_quantum: f64,
    pub work_classical: f64,
    pub reset_cost: f64,
    pub net_cycle_work: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub source: String,
    /// "k_BT" or "absolute"; applies to every energy in the ledger and summary.
    pub units: String,
    pub ledger: ThermoLedger,
    pub bounds: BoundReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub szilard: Option<SzilardSummary>,
    pub all_satisfied: bool,
}

fn scale_energies(l: &mut ThermoLedger, factor: f64) {
    for e in [&mut l.e_s_i, &mut l.e_s_f, &mut l.e_r_i, &mut l.e_r_f, &mut l.f_s_i, &mut l.f_s_f, &mut l.q, &mut l.w_ext] {
        *e *= factor;
    }
}

fn ledger_rows(l: &ThermoLedger) -> Vec<(&'static str, f64)> {
    let mut rows = vec![
        ("beta", l.beta),
        ("E_S_initial", l.e_s_i),
        ("E_S_final", l.e_s_f),
        ("E_R_initial", l.e_r_i),
        ("E_R_final", l.e_r_f),
        ("F_S_initial", l.f_s_i),
        ("F_S_final", l.f_s_f),
        ("delta_F_S", l.f_s_f - l.f_s_i),
        ("Q", l.q),
        ("W_ext", l.w_ext),
        ("delta_S_A", l.ds_a),
        ("delta_S_B", l.ds_b),
        ("I_initial", l.mutual_info_i),
        ("I_final", l.mutual_info_f),
        ("delta_I", l.di),
        ("J_initial", l.classical_corr_i),
        ("J_final", l.classical_corr_f),
        ("delta_J", l.dj),
        ("discord_initial", l.discord_i),
        ("discord_final", l.discord_f),
    ];
    if let Some(m) = l.measurement_entropy {
        rows.push(("S_before_measurement", m.before));
        rows.push(("S_after_measurement", m.after));
    }
    if let Some(qc) = l.qc_mutual_info {
        rows.push(("I_QC", qc));
    }
    rows
}

fn summary_rows(s: &SzilardSummary) -> Vec<(String, f64)> {
    let mut rows: Vec<(String, f64)> =
        s.outcome_probabilities.iter().enumerate().map(|(k, p)| (format!("p_outcome_{k}"), *p)).collect();
    rows.extend([
        ("I_QC_of_A_outcome".to_owned(), s.qc_mutual_information),
        ("post_measurement_discord".to_owned(), s.post_measurement_discord),
        ("work_quantum".to_owned(), s.work_quantum),
        ("work_classical".to_owned(), s.work_classical),
        ("reset_cost".to_owned(), s.reset_cost),
        ("net_cycle_work".to_owned(), s.net_cycle_work),
    ]);
    rows
}

fn render_run_text(r: &RunReport) -> String {
    let mut out = format!("source: {}\nbath mode: {:?}\nunits: {}\n\nledger\n", r.source, r.ledger.bath_mode, r.units);
    let mut t = Table::default();
    for (n, v) in ledger_rows(&r.ledger) {
        t.num(n, v);
    }
    t.render(&mut out, "  ");
    out.push_str("\nbounds (lhs <= rhs)\n");
    let mut t = Table::default();
    for e in &r.bounds.entries {
        t.row(
            format!("{} [{}]", e.name, e.units),
            format!(
                "lhs {}  rhs {}  slack {}  {}",
                sig12(e.lhs),
                sig12(e.rhs),
                sig12(e.slack),
                if e.satisfied { "ok" } else { "VIOLATED" }
            ),
        );
    }
    t.render(&mut out, "  ");
    if let Some(s) = &r.szilard {
        out.push_str("\nszilard engine\n");
        let mut t = Table::default();
        for (n, v) in summary_rows(s) {
            t.num(n, v);
        }
        t.render(&mut out, "  ");
    }
    out.push_str(if r.all_satisfied { "\nstatus: all bounds satisfied\n" } else { "\nstatus: bound violated\n" });
    out
}

fn render_run_csv(r: &RunReport) -> String {
    let mut out = csv_line(&["quantity".into(), "value".into()]);
    for (n, v) in ledger_rows(&r.ledger) {
        out += &csv_line(&[n.into(), v.to_string()]);
    }
    for e in &r.bounds.entries {
        out += &csv_line(&[format!("{}_slack", e.name), e.slack.to_string()]);
    }
    if let Some(s) = &r.szilard {
        for (n, v) in summary_rows(s) {
            out += &csv_line(&[n, v.to_string()]);
        }
    }
    out
}

pub fn run_report(a: &RunArgs) -> Result<RunReport> {
    let beta = checked_beta(a.common.beta)?;
    let grid_n = a.common.grid_n;
    let (source, mut ledger, bounds, mut szilard) = match (a.scenario, &a.input) {
        (Some(s), None) => {
            let mut scenario = match s {
                Scenario::SzilardBell => SzilardScenario::bell(),
                Scenario::SzilardProduct => SzilardScenario::product(),
                Scenario::SzilardClassical => SzilardScenario::bell().with_classical_extraction(),
            };
            if let Some(b) = beta {
                scenario.temperature = 1.0 / b;
            }
            let r = run_szilard_with_grid(&scenario, grid_n)?;
            let summary = SzilardSummary {
                outcome_probabilities: r.outcome_probabilities.clone(),
                qc_mutual_information: r.qc_mutual_information,
                post_measurement_discord: r.post_measurement_discord,
                work_quantum: r.work_quantum,
                work_classical: r.work_classical,
                reset_cost: r.reset_cost,
                net_cycle_work: r.net_cycle_work(),
            };
            (s.name().to_owned(), r.ledger, r.bounds, Some(summary))
        }
        (None, Some(path)) => {
            let mut protocol = parse_protocol(&read_text(path)?)?;
            if let Some(b) = beta {
                protocol = protocol.with_beta(b)?;
            }
            let run = protocol.run()?;
            let ledger = run.ledger(grid_n)?;
            let bounds = verify_bounds(&ledger);
            (path.display().to_string(), ledger, bounds, None)
        }
        _ => return Err(Error::InvalidParameter("give exactly one of --scenario and --input".into())),
    };
    let units = if beta.is_some() { "absolute" } else { "k_BT" };
    if beta.is_none() {
        let factor = ledger.beta;
        scale_energies(&mut ledger, factor);
        if let Some(s) = &mut szilard {
            for e in [&mut s.work_quantum, &mut s.work_classical, &mut s.reset_cost, &mut s.net_cycle_work] {
                *e *= factor;
            }
        }
    }
    let all_satisfied = bounds.all_satisfied();
    Ok(RunReport { source, units: units.into(), ledger, bounds, szilard, all_satisfied })
}

pub fn run(a: &RunArgs) -> Result<bool> {
    let report = run_report(a)?;
    let text = match a.common.format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Text => render_run_text(&report),
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => render_run_csv(&report),
    };
    emit(&a.common, &text)?;
    Ok(report.all_satisfied)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantClass {
    pub name: String,
    pub instances: usize,
    /// Smallest slack, or largest defect for the `max_` checks.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn verify_classes(a: &VerifyArgs) -> Result<Vec<InvariantClass>> {
    let beta = checked_beta(a.common.beta)?.unwrap_or(1.0);
    let seed = a.common.seed;
    let mut classes: Vec<InvariantClass> = inequality_suites(a.trials, seed)?
        .into_iter()
        .chain([decomposition(a.trials.div_ceil(10), seed.wrapping_add(4 << 20))?])
        .map(|s| InvariantClass {
            name: s.name.into(),
            instances: s.trials,
            worst: s.min_slack,
            tolerance: s.tolerance,
            passed: s.passed(),
        })
        .collect();
    let cfg = SweepConfig {
        count: a.count,
        seed,
        reservoir_dim: a.reservoir_dim,
        beta,
        grid_n: a.common.grid_n,
        ..SweepConfig::default()
    };
    let sweep = run_sweep(&cfg)?;
    let n = sweep.outcomes.len();
    let min_class = |name: &str, worst: f64, tol: f64| InvariantClass {
        name: name.into(),
        instances: n,
        worst,
        tolerance: tol,
        passed: n == 0 || worst >= -tol,
    };
    let max_class = |name: &str, worst: f64, tol: f64| InvariantClass {
        name: name.into(),
        instances: n,
        worst,
        tolerance: tol,
        passed: worst <= tol,
    };
    classes.extend([
        min_class("protocol_mutual_information_bound", sweep.min_mutual_information_slack(), BOUND_TOL),
        min_class("protocol_discord_bound", sweep.min_discord_slack(), BOUND_TOL),
        min_class("protocol_measurement_entropy", sweep.min_measurement_entropy_slack(), BOUND_TOL),
        max_class("max_protocol_unitary_entropy_drift", sweep.max_unitary_entropy_drift(), INEQUALITY_TOL),
        max_class("max_protocol_heat_residual", sweep.max_heat_residual(), INEQUALITY_TOL),
        max_class("max_post_measurement_discord", sweep.max_post_measurement_discord(), POST_MEASUREMENT_DISCORD_TOL),
    ]);
    Ok(classes)
}

pub fn verify(a: &VerifyArgs) -> Result<bool> {
    let classes = verify_classes(a)?;
    let ok = classes.iter().all(|c| c.passed);
    let text = match a.common.format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Text => {
            let mut t = Table::default();
            for c in &classes {
                t.row(
                    format!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name),
                    format!("n = {}  worst = {}  tol = {:e}", c.instances, sig12(c.worst), c.tolerance),
                );
            }
            let mut out = String::new();
            t.render(&mut out, "");
            out + if ok { "status: all invariants hold\n" } else { "status: invariant violated\n" }
        }
        OutputFormat::Json => to_json(&classes),
        OutputFormat::Csv => {
            let mut out = csv_line(&["class", "instances", "worst", "tolerance", "passed"].map(String::from));
            for c in &classes {
                out += &csv_line(&[
                    c.name.clone(),
                    c.instances.to_string(),
                    c.worst.to_string(),
                    c.tolerance.to_string(),
                    c.passed.to_string(),
                ]);
            }
            out
        }
    };
    emit(&a.common, &text)?;
    Ok(ok)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscordReport {
    pub discord: f64,
    pub classical_correlation: f64,
    pub mutual_information: f64,
    pub theta: f64,
    pub phi: f64,
    pub oracle_grid_n: usize,
    pub oracle_discord: f64,
    pub oracle_minus_refined: f64,
    /// The oracle never undercuts the refined minimum.
    pub consistent: bool,
}

pub fn discord(a: &DiscordArgs) -> Result<bool> {
    let (rho, layout) = read_state(&a.input)?;
    let c = analyze_correlations(&rho, &layout, a.common.grid_n)?;
    let oracle = discord_oracle(&rho, &layout, a.oracle_grid_n)?;
    let r = DiscordReport {
        discord: c.discord,
        classical_correlation: c.classical_correlation,
        mutual_information: c.mutual_information,
        theta: c.angles.theta,
        phi: c.angles.phi,
        oracle_grid_n: a.oracle_grid_n,
        oracle_discord: oracle,
        oracle_minus_refined: oracle - c.discord,
        consistent: oracle >= c.discord - BOUND_TOL,
    };
    let text = match a.common.format.unwrap_or(OutputFormat::Text) {
        OutputFormat::Text => {
            let mut t = Table::default();
            t.num("discord", r.discord)
                .num("classical_correlation", r.classical_correlation)
                .num("mutual_information", r.mutual_information)
                .num("theta", r.theta)
                .num("phi", r.phi)
                .num(format!("oracle_discord (grid {})", r.oracle_grid_n), r.oracle_discord)
                .num("oracle_minus_refined", r.oracle_minus_refined)
                .row("consistent", r.consistent.to_string());
            let mut out = String::new();
            t.render(&mut out, "");
            out
        }
        OutputFormat::Json => to_json(&r),
        OutputFormat::Csv => {
            csv_line(&["discord", "classical_corr", "mutual_info", "theta", "phi", "oracle_discord"].map(String::from))
                + &csv_line(&[
                    r.discord.to_string(),
                    r.classical_correlation.to_string(),
                    r.mutual_information.to_string(),
                    r.theta.to_string(),
                    r.phi.to_string(),
                    r.oracle_discord.to_string(),
                ])
        }
    };
    emit(&a.common, &text)?;
    Ok(r.consistent)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub discord: f64,
    pub classical_corr: f64,
    pub mutual_info: f64,
    /// k_BT δ: the extra work a discord-aware demon can draw from the memory.
    pub work_bound: f64,
}

pub fn werner(p: f64) -> Result<DensityMatrix> {
    let bell = DensityMatrix::pure_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2])?;
    DensityMatrix::mixture(&[p, 1.0 - p], &[bell, DensityMatrix::maximally_mixed(4)])
}

pub fn werner_rows(steps: usize, grid_n: usize, k_t: f64) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!("--steps {steps}: need at least 2")));
    }
    let layout = qheat_core::SubsystemLayout::from_pairs(&[("A", 2), ("B", 2)])?;
    (0..steps)
        .map(|k| {
            let p = k as f64 / (steps - 1) as f64;
            let c = analyze_correlations(&werner(p)?, &layout, grid_n)?;
            Ok(SweepRow {
                param: p,
                discord: c.discord,
                classical_corr: c.classical_correlation,
                mutual_info: c.mutual_information,
                work_bound: k_t * c.discord,
            })
        })
        .collect()
}

pub fn sweep(a: &SweepArgs) -> Result<bool> {
    debug_assert!(a.werner);
    let k_t = checked_beta(a.common.beta)?.map_or(1.0, |b| 1.0 / b);
    let rows = werner_rows(a.steps, a.common.grid_n, k_t)?;
    let header = ["param", "discord", "classical_corr", "mutual_info", "work_bound"].map(String::from);
    let text = match a.common.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => {
            let mut out = csv_line(&header);
            for r in &rows {
                out += &csv_line(&[r.param, r.discord, r.classical_corr, r.mutual_info, r.work_bound].map(|x| x.to_string()));
            }
            out
        }
        OutputFormat::Json => to_json(&rows),
        OutputFormat::Text => {
            let mut out = header.join("  ") + "\n";
            for r in &rows {
                out += &[r.param, r.discord, r.classical_corr, r.mutual_info, r.work_bound].map(sig12).join("  ");
                out.push('\n');
            }
            out
        }
    };
    emit(&a.common, &text)?;
    Ok(true)
}
