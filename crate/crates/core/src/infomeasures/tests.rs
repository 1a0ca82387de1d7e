use std::f64::consts::LN_2;

use proptest::prelude::*;

use super::*;
use crate::densmat::{apply_unitary, c, tensor, ComplexMatrix, DensityMatrix, SubsystemLayout};
use crate::error::Error;
use crate::random::{random_bloch, random_pure, random_state, random_unitary, seeded};

fn ab() -> SubsystemLayout {
    SubsystemLayout::from_pairs(&[("A", 2), ("B", 2)]).unwrap()
}

fn bell() -> DensityMatrix {
    DensityMatrix::pure_real(&[1.0, 0.0, 0.0, 1.0]).unwrap()
}

fn classical_pair() -> DensityMatrix {
    DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap()
}

fn werner(p: f64) -> DensityMatrix {
    let m = &bell().matrix().scale(p) + &ComplexMatrix::identity(4).scale((1.0 - p) / 4.0);
    DensityMatrix::new(m).unwrap()
}

fn product(seed: u64) -> DensityMatrix {
    let mut rng = seeded(seed);
    let a = random_state(&mut rng, 2);
    let b = random_state(&mut rng, 2);
    DensityMatrix::new(tensor(a.matrix(), b.matrix())).unwrap()
}

#[test]
fn von_neumann_examples() {
    assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(2)) - LN_2).abs() < 1e-12);
    assert!(von_neumann_entropy(&bell()).abs() < 1e-12);
    let s = von_neumann_entropy(&DensityMatrix::diagonal(&[0.75, 0.25]).unwrap());
    assert!((s - 0.5623351446188083).abs() < 1e-12);
}

#[test]
fn shannon_examples_and_errors() {
    assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
    assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - LN_2).abs() < 1e-15);
    assert!((shannon_entropy(&[0.9, 0.1]).unwrap() - 0.3250829733914482).abs() < 1e-12);
    assert!(matches!(shannon_entropy(&[1.2, -0.2]), Err(Error::InvalidDistribution(_))));
    assert!(matches!(shannon_entropy(&[0.5, 0.4]), Err(Error::InvalidDistribution(_))));
}

#[test]
fn mutual_information_examples() {
    assert!(mutual_information(&product(1), &ab()).unwrap().abs() < 1e-12);
    assert!((mutual_information(&bell(), &ab()).unwrap() - 2.0 * LN_2).abs() < 1e-12);
    assert!((mutual_information(&classical_pair(), &ab()).unwrap() - LN_2).abs() < 1e-12);
    let three = SubsystemLayout::from_pairs(&[("A", 2), ("B", 2), ("C", 1)]).unwrap();
    assert!(matches!(mutual_information(&bell(), &three), Err(Error::InvalidLayout(_))));
}

#[test]
fn measuring_the_example_memory() {
    // ½(|↑↑⟩⟨↑↑|⊗|L⟩⟨L| + |↓↓⟩⟨↓↓|⊗|R⟩⟨R|) on A, B, S.
    let layout = SubsystemLayout::from_pairs(&[("A", 2), ("B", 2), ("S", 2)]).unwrap();
    let mut diag = [0.0; 8];
    diag[0] = 0.5; // ↑↑L
    diag[7] = 0.5; // ↓↓R
    let rho = DensityMatrix::diagonal(&diag).unwrap();
    let meas = ProjectiveMeasurement::computational(layout.clone(), "A").unwrap();
    let rec = measure_subsystem(&rho, &meas).unwrap();
    assert_eq!(rec.probabilities, vec![0.5, 0.5]);
    assert_eq!(rec.conditional_layout.labels().collect::<Vec<_>>(), ["B", "S"]);
    let up_l = DensityMatrix::diagonal(&[1.0, 0.0, 0.0, 0.0]).unwrap();
    let down_r = DensityMatrix::diagonal(&[0.0, 0.0, 0.0, 1.0]).unwrap();
    assert!(rec.conditional_states[0].as_ref().unwrap().matrix().max_abs_diff(up_l.matrix()) < 1e-15);
    assert!(rec.conditional_states[1].as_ref().unwrap().matrix().max_abs_diff(down_r.matrix()) < 1e-15);
    assert_eq!(rec.post_state.matrix(), rho.matrix());
}

#[test]
fn measuring_a_product_leaves_b_untouched() {
    let mut rng = seeded(2);
    let a = random_state(&mut rng, 2);
    let b = random_state(&mut rng, 3);
    let rho = DensityMatrix::new(tensor(a.matrix(), b.matrix())).unwrap();
    let layout = SubsystemLayout::from_pairs(&[("A", 2), ("B", 3)]).unwrap();
    let meas = ProjectiveMeasurement::along(layout, "A", random_bloch(&mut rng)).unwrap();
    let rec = measure_subsystem(&rho, &meas).unwrap();
    for s in rec.conditional_states.iter().flatten() {
        assert!(s.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }
}

#[test]
fn measurement_matches_projector_sandwich_oracle() {
    let mut rng = seeded(3);
    let layout = SubsystemLayout::from_pairs(&[("A", 2), ("B", 3)]).unwrap();
    let rho = random_state(&mut rng, 6);
    let angles = random_bloch(&mut rng);
    let meas = ProjectiveMeasurement::along(layout, "A", angles).unwrap();
    let rec = measure_subsystem(&rho, &meas).unwrap();
    assert!((rec.probabilities.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    // Oracle: rotate into the measurement basis and zero the off-diagonal A blocks.
    let [k0, k1] = angles.kets();
    let v = ComplexMatrix::from_fn(2, 2, |i, j| if j == 0 { k0[i] } else { k1[i] });
    let vfull = tensor(&v, &ComplexMatrix::identity(3));
    let rotated = vfull.adjoint().matmul(rho.matrix()).matmul(&vfull);
    let dephased = ComplexMatrix::from_fn(6, 6, |i, j| if i / 3 == j / 3 { rotated.get(i, j) } else { c(0.0, 0.0) });
    let expected = vfull.matmul(&dephased).matmul(&vfull.adjoint());
    assert!(rec.post_state.matrix().max_abs_diff(&expected) < 1e-12);
    // Block-diagonal in the measurement basis.
    let back = vfull.adjoint().matmul(rec.post_state.matrix()).matmul(&vfull);
    for i in 0..6 {
        for j in 0..6 {
            if i / 3 != j / 3 {
                assert!(back.get(i, j).norm() < 1e-12);
            }
        }
    }
    for k in 0..2 {
        let diag_block: f64 = (0..3).map(|i| rotated.get(k * 3 + i, k * 3 + i).re).sum();
        assert!((diag_block - rec.probabilities[k]).abs() < 1e-12);
    }
}

#[test]
fn measurement_validation() {
    let layout = ab();
    let half = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
    let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
    assert!(ProjectiveMeasurement::new(layout.clone(), "A", vec![p0.clone()]).is_err());
    assert!(ProjectiveMeasurement::new(layout.clone(), "A", vec![half.clone(), half]).is_err());
    assert!(ProjectiveMeasurement::new(layout.clone(), "A", vec![p0.clone(), p0.clone()]).is_err());
    assert!(ProjectiveMeasurement::new(layout.clone(), "Z", vec![]).is_err());
    let three = SubsystemLayout::from_pairs(&[("A", 3), ("B", 2)]).unwrap();
    assert!(matches!(ProjectiveMeasurement::along(three, "A", BlochAngles::z_axis()), Err(Error::NotQubit(3))));
    // State of the wrong size.
    let meas = ProjectiveMeasurement::computational(layout, "A").unwrap();
    assert!(measure_subsystem(&DensityMatrix::maximally_mixed(2), &meas).is_err());
}

#[test]
fn negligible_outcomes_have_no_conditional_state() {
    let meas = ProjectiveMeasurement::computational(ab(), "A").unwrap();
    let rho = DensityMatrix::diagonal(&[0.25, 0.75, 0.0, 0.0]).unwrap();
    let rec = measure_subsystem(&rho, &meas).unwrap();
    assert!(rec.conditional_states[0].is_some());
    assert!(rec.conditional_states[1].is_none());
}

#[test]
fn bloch_angles_canonicalize() {
    let a = BlochAngles::new(3.0 * std::f64::consts::PI / 2.0, 0.25);
    assert!((a.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!((a.phi - (0.25 + std::f64::consts::PI)).abs() < 1e-12);
    let b = BlochAngles::new(0.3, -0.1);
    assert!(b.phi >= 0.0 && b.phi < 2.0 * std::f64::consts::PI);
    // Same direction, same projectors.
    let raw = qubit_basis(3.0 * std::f64::consts::PI / 2.0, 0.25);
    let canon = a.kets();
    for k in 0..2 {
        let p = ComplexMatrix::projector(&raw[k]);
        let q0 = ComplexMatrix::projector(&canon[0]);
        let q1 = ComplexMatrix::projector(&canon[1]);
        assert!(p.max_abs_diff(&q0) < 1e-12 || p.max_abs_diff(&q1) < 1e-12);
    }
}

#[test]
fn classical_correlation_examples() {
    let (j, _) = classical_correlation(&product(4), &ab(), DEFAULT_GRID_N).unwrap();
    assert!(j.abs() < 1e-9);
    let (j, angles) = classical_correlation(&classical_pair(), &ab(), DEFAULT_GRID_N).unwrap();
    assert!((j - LN_2).abs() < 1e-9);
    assert!(angles.theta.abs() < 1e-6 || (angles.theta - std::f64::consts::PI).abs() < 1e-6);
    let (j, _) = classical_correlation(&bell(), &ab(), DEFAULT_GRID_N).unwrap();
    assert!((j - LN_2).abs() < 1e-9);
}

#[test]
fn discord_examples() {
    assert!((discord(&bell(), &ab(), DEFAULT_GRID_N).unwrap().0 - LN_2).abs() < 1e-9);
    assert!(discord(&classical_pair(), &ab(), DEFAULT_GRID_N).unwrap().0.abs() < 1e-9);
    assert!(discord(&product(5), &ab(), DEFAULT_GRID_N).unwrap().0.abs() < 1e-9);
}

#[test]
fn werner_half_matches_oracle_and_frozen_value() {
    let w = werner(0.5);
    let (d, _) = discord(&w, &ab(), DEFAULT_GRID_N).unwrap();
    let oracle = discord_oracle(&w, &ab(), 64).unwrap();
    assert!((d - oracle).abs() <= 1e-6, "{d} vs {oracle}");
    // Frozen from an external numpy brute force + simplex polish.
    assert!((d - 0.18193947877023048).abs() <= 1e-9);
    let (j, _) = classical_correlation(&w, &ab(), DEFAULT_GRID_N).unwrap();
    assert!((j - 0.13081203594113744).abs() <= 1e-9);
}

#[test]
fn oracle_examples() {
    assert!((discord_oracle(&bell(), &ab(), 64).unwrap() - LN_2).abs() <= 2e-4);
    assert!(discord_oracle(&product(6), &ab(), 64).unwrap().abs() <= 1e-9);
    assert!(matches!(discord_oracle(&bell(), &ab(), 4), Err(Error::InvalidParameter(_))));
    let three = SubsystemLayout::from_pairs(&[("A", 3), ("B", 2)]).unwrap();
    assert!(matches!(discord_oracle(&DensityMatrix::maximally_mixed(6), &three, 16), Err(Error::NotQubit(3))));
    assert!(matches!(discord(&DensityMatrix::maximally_mixed(6), &three, 16), Err(Error::NotQubit(3))));
}

#[test]
fn oracle_handles_larger_b() {
    let mut rng = seeded(7);
    let layout = SubsystemLayout::from_pairs(&[("A", 2), ("B", 3)]).unwrap();
    let rho = random_state(&mut rng, 6);
    let (d, _) = discord(&rho, &layout, DEFAULT_GRID_N).unwrap();
    let oracle = discord_oracle(&rho, &layout, DEFAULT_GRID_N).unwrap();
    assert!(oracle >= d - 1e-9);
    assert!(oracle - d < 1e-3);
}

#[test]
fn qc_mutual_information_examples() {
    let layout = SubsystemLayout::from_pairs(&[("A", 2), ("S", 2)]).unwrap();
    let rho_s = DensityMatrix::maximally_mixed(2);
    let correlated = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
    let meas = ProjectiveMeasurement::computational(layout.clone(), "A").unwrap();
    let rec = measure_subsystem(&correlated, &meas).unwrap();
    assert!((qc_mutual_information(&rho_s, &rec, "S").unwrap() - LN_2).abs() < 1e-12);

    let uncorrelated = DensityMatrix::maximally_mixed(4);
    let rec = measure_subsystem(&uncorrelated, &meas).unwrap();
    assert!(qc_mutual_information(&rho_s, &rec, "S").unwrap().abs() < 1e-12);
    assert!(qc_mutual_information(&DensityMatrix::maximally_mixed(3), &rec, "S").is_err());
    assert!(qc_mutual_information(&rho_s, &rec, "Q").is_err());
}

#[test]
fn grid_size_is_checked() {
    assert!(matches!(discord(&bell(), &ab(), 7), Err(Error::InvalidParameter(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_within_bounds(seed in any::<u64>(), d in 1usize..6) {
        let s = von_neumann_entropy(&random_state(&mut seeded(seed), d));
        prop_assert!(s >= 0.0 && s <= (d as f64).ln() + 1e-9);
    }

    #[test]
    fn decomposition_and_oracle_ordering(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let rho = random_state(&mut rng, 4);
        let r = analyze_correlations(&rho, &ab(), 16).unwrap();
        prop_assert!(r.discord >= -1e-9);
        prop_assert!((r.mutual_information - r.classical_correlation - r.discord).abs() <= 1e-6);
        let oracle = discord_oracle(&rho, &ab(), 16).unwrap();
        prop_assert!(r.discord <= oracle + 1e-9);
    }

    #[test]
    fn post_measurement_discord_vanishes_along_basis(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let rho = random_state(&mut rng, 4);
        let angles = random_bloch(&mut rng);
        let meas = ProjectiveMeasurement::along(ab(), "A", angles).unwrap();
        let post = measure_subsystem(&rho, &meas).unwrap().post_state;
        prop_assert!(discord_along(&post, &ab(), angles).unwrap() <= 1e-6);
    }

    #[test]
    fn qc_information_bounded_by_outcome_entropy(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let layout = SubsystemLayout::from_pairs(&[("A", 2), ("S", 2)]).unwrap();
        let memory = random_pure(&mut rng, 2);
        let rho_s = random_state(&mut rng, 2);
        let coupled = apply_unitary(
            &DensityMatrix::new(tensor(memory.matrix(), rho_s.matrix())).unwrap(),
            &random_unitary(&mut rng, 4),
        ).unwrap();
        let meas = ProjectiveMeasurement::along(layout, "A", random_bloch(&mut rng)).unwrap();
        let rec = measure_subsystem(&coupled, &meas).unwrap();
        // Holevo-type bound: the outcome-averaged S state is the reference.
        let averaged = crate::densmat::partial_trace(&coupled, meas.layout(), &["S"]).unwrap();
        let value = qc_mutual_information(&averaged, &rec, "S").unwrap();
        let h = shannon_entropy(&rec.probabilities).unwrap();
        prop_assert!(value >= -1e-9 && value <= h + 1e-9);
    }
}
