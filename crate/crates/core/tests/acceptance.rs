//! Acceptance run: every criterion at its stated tolerance, one line each.

use std::f64::consts::LN_2;
use std::process::ExitCode;

use qheat_core::densmat::DensityMatrix;
use qheat_core::infomeasures::{analyze_correlations, discord_oracle, DEFAULT_GRID_N};
use qheat_core::properties::inequality_suites;
use qheat_core::protocol::sweep::{run_sweep, SweepConfig};
use qheat_core::protocol::{parse_protocol, DISCORD_BOUND};
use qheat_core::random::{random_state_with_rank, seeded};
use qheat_core::szilard::{bundled_protocol, run_szilard, szilard_protocol};
use qheat_core::{Error, SubsystemLayout, SzilardScenario};

struct Check {
    failures: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        if !((got - want).abs() <= tol) {
            self.failures.push(format!("{what}: got {got:.15e}, want {want:.15e} (tol {tol:e})"));
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_owned());
        }
    }
}

fn bell_szilard(c: &mut Check) -> qheat_core::Result<String> {
    let r = run_szilard(&SzilardScenario::bell())?;
    let l = &r.ledger;
    c.close("W_ext", l.w_ext, LN_2, 1e-9);
    c.close("dF_S", l.delta_f_s(), 0.0, 1e-9);
    c.close("dS_A", l.ds_a, 0.0, 1e-9);
    c.close("dS_B", l.ds_b, 0.0, 1e-9);
    c.close("dJ", l.dj, 0.0, 1e-9);
    c.close("discord_i", l.discord_i, LN_2, 1e-6);
    let e = r.bounds.get(DISCORD_BOUND).expect("discord bound entry");
    c.close("discord-bound |rhs - lhs|", e.rhs - e.lhs, 0.0, 1e-6);
    Ok(format!("W_ext = {:.12}, discord_i = {:.12}, slack = {:.3e}", l.w_ext, l.discord_i, e.slack))
}

fn classical_extraction(c: &mut Check) -> qheat_core::Result<String> {
    let quantum = run_szilard(&SzilardScenario::bell())?;
    let r = run_szilard(&SzilardScenario::bell().with_classical_extraction())?;
    c.close("additional work", r.work_classical, LN_2, 1e-9);
    // ΔJ of the follow-on step: J of the memory it consumes minus J of I/4
    let mem_layout = SubsystemLayout::from_pairs(&[("A", 2), ("B", 2)])?;
    let j_after = analyze_correlations(&r.memory_final, &mem_layout, DEFAULT_GRID_N)?.classical_correlation;
    let dj = quantum.ledger.classical_corr_f - j_after;
    c.close("dJ of the classical step", dj, LN_2, 1e-9);
    let mixed = DensityMatrix::maximally_mixed(4);
    c.close("final memory vs I/4", r.memory_final.matrix().max_abs_diff(mixed.matrix()), 0.0, 1e-9);
    Ok(format!("W_classical = {:.12}, dJ = {:.12}", r.work_classical, dj))
}

fn reset_cost(c: &mut Check) -> qheat_core::Result<String> {
    let r = run_szilard(&SzilardScenario::bell())?;
    let classical = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5])?;
    c.close("memory after the engine vs classical mixture", r.memory_final.matrix().max_abs_diff(classical.matrix()), 0.0, 1e-9);
    c.close("reset cost", r.reset_cost, LN_2, 1e-9);
    c.close("net work, quantum only", r.net_cycle_work(), 0.0, 1e-9);
    let full = run_szilard(&SzilardScenario::bell().with_classical_extraction())?;
    c.close("net work, both extractions", full.net_cycle_work(), 0.0, 1e-9);
    Ok(format!("reset = {:.12}, net = {:.3e} / {:.3e}", r.reset_cost, r.net_cycle_work(), full.net_cycle_work()))
}

fn discord_cross_validation(c: &mut Check) -> qheat_core::Result<String> {
    let layout = SubsystemLayout::from_pairs(&[("A", 2), ("B", 2)])?;
    let mut worst_oracle: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    let mut worst_state = None;
    let mut rng = seeded(42);
    for i in 0..100 {
        let rank = 1 + i % 4;
        let rho = random_state_with_rank(&mut rng, 4, rank);
        let a = analyze_correlations(&rho, &layout, 32)?;
        let oracle = discord_oracle(&rho, &layout, 128)?;
        let gap = (a.discord - oracle).abs();
        let sum = (a.mutual_information - a.classical_correlation - a.discord).abs();
        c.close(&format!("state {i}: refined vs oracle"), a.discord, oracle, 1e-4);
        c.close(&format!("state {i}: I - J - discord"), sum, 0.0, 1e-6);
        c.holds(&format!("state {i}: oracle below refined"), oracle >= a.discord - 1e-9);
        if gap > worst_oracle {
            worst_oracle = gap;
            worst_state = Some((i, rho, a.discord));
        }
        worst_sum = worst_sum.max(sum);
    }
    // Grid convergence of the oracle on the worst state, for the record.
    let mut convergence = Vec::new();
    if let Some((i, rho, refined)) = worst_state {
        for n in [256, 512] {
            convergence.push(format!("grid {n}: {:.2e}", discord_oracle(&rho, &layout, n)? - refined));
        }
        convergence.insert(0, format!("worst is state {i}, oracle - refined at"));
    }
    Ok(format!(
        "max |refined - oracle| = {worst_oracle:.3e}, max |I - J - discord| = {worst_sum:.3e}; {}",
        convergence.join(", ")
    ))
}

fn inequality_properties(c: &mut Check) -> qheat_core::Result<String> {
    let suites = inequality_suites(1000, 42)?;
    let mut parts = Vec::new();
    for s in &suites {
        c.holds(&format!("{}: {} violations, min slack {:e}", s.name, s.violations, s.min_slack), s.passed() && s.trials == 1000);
        parts.push(format!("{} {}/{}", s.name, s.trials - s.violations, s.trials));
    }
    Ok(parts.join(", "))
}

fn protocol_sweep(c: &mut Check, summary: &qheat_core::protocol::sweep::SweepSummary) -> String {
    c.holds("200 protocols", summary.outcomes.len() == 200);
    for o in &summary.outcomes {
        c.holds(
            &format!("protocol {} (seed {}): slack {:e}", o.index, o.seed, o.mutual_information_slack),
            o.mutual_information_slack >= -1e-9,
        );
    }
    format!(
        "min mutual-information slack = {:.3e}, min discord slack = {:.3e}",
        summary.min_mutual_information_slack(),
        summary.min_discord_slack()
    )
}

fn post_measurement_discord(c: &mut Check, summary: &qheat_core::protocol::sweep::SweepSummary) -> String {
    for o in &summary.outcomes {
        c.holds(
            &format!("protocol {}: post-measurement discord {:e}", o.index, o.post_measurement_discord),
            o.post_measurement_discord <= 1e-6,
        );
    }
    format!("max = {:.3e}", summary.max_post_measurement_discord())
}

fn parser_round_trip(c: &mut Check) -> qheat_core::Result<String> {
    let built = szilard_protocol(&SzilardScenario::bell())?.run()?.ledger(DEFAULT_GRID_N)?;
    let bundled = bundled_protocol()?.run()?.ledger(DEFAULT_GRID_N)?;
    let pairs = [
        ("W_ext", built.w_ext, bundled.w_ext),
        ("Q", built.q, bundled.q),
        ("E_S_i", built.e_s_i, bundled.e_s_i),
        ("E_S_f", built.e_s_f, bundled.e_s_f),
        ("F_S_i", built.f_s_i, bundled.f_s_i),
        ("F_S_f", built.f_s_f, bundled.f_s_f),
        ("dS_A", built.ds_a, bundled.ds_a),
        ("dS_B", built.ds_b, bundled.ds_b),
        ("I_i", built.mutual_info_i, bundled.mutual_info_i),
        ("I_f", built.mutual_info_f, bundled.mutual_info_f),
        ("J_i", built.classical_corr_i, bundled.classical_corr_i),
        ("J_f", built.classical_corr_f, bundled.classical_corr_f),
        ("discord_i", built.discord_i, bundled.discord_i),
        ("discord_f", built.discord_f, bundled.discord_f),
    ];
    let mut worst: f64 = 0.0;
    for (name, a, b) in pairs {
        c.close(name, b, a, 1e-12);
        worst = worst.max((a - b).abs());
    }
    let broken = qheat_core::szilard::BUNDLED_PROTOCOL.replacen("\"dim\": 2", "\"dim\": 3", 1);
    match parse_protocol(&broken) {
        Err(Error::Parse(msg)) => c.holds(&format!("diagnostic names a field: {msg}"), msg.starts_with("stages[")),
        other => c.holds(&format!("malformed document accepted: {other:?}"), false),
    }
    Ok(format!("max ledger difference = {worst:.3e}"))
}

fn report(n: usize, title: &str, c: Check, detail: qheat_core::Result<String>) -> bool {
    let (ok, detail) = match detail {
        Ok(d) => (c.failures.is_empty(), d),
        Err(e) => (false, format!("error: {e}")),
    };
    println!("[{}] criterion {n}: {title} ({detail})", if ok { "PASS" } else { "FAIL" });
    for f in c.failures.iter().take(10) {
        println!("       {f}");
    }
    ok
}

fn main() -> ExitCode {
    let mut all = true;
    let mut c = Check::new();
    let d = bell_szilard(&mut c);
    all &= report(1, "Bell-memory Szilard engine", c, d);
    let mut c = Check::new();
    let d = classical_extraction(&mut c);
    all &= report(2, "classical follow-on extraction", c, d);
    let mut c = Check::new();
    let d = reset_cost(&mut c);
    all &= report(3, "memory reset cost and cyclic net work", c, d);
    let mut c = Check::new();
    let d = discord_cross_validation(&mut c);
    all &= report(4, "discord cross-validation against the exhaustive oracle", c, d);
    let mut c = Check::new();
    let d = inequality_properties(&mut c);
    all &= report(5, "entropy inequality suites", c, d);

    let sweep = run_sweep(&SweepConfig::default());
    let mut c = Check::new();
    let d = sweep.as_ref().map(|s| protocol_sweep(&mut c, s)).map_err(Clone::clone);
    all &= report(6, "randomized protocol sweep, mutual-information bound", c, d);
    let mut c = Check::new();
    let d = sweep.as_ref().map(|s| post_measurement_discord(&mut c, s)).map_err(Clone::clone);
    all &= report(7, "post-measurement discord along the measured axis", c, d);

    let mut c = Check::new();
    let d = parser_round_trip(&mut c);
    all &= report(8, "bundled protocol document round-trip", c, d);

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
