//! Composite-pulse algebra against brute-force products and numerical derivatives.

use std::f64::consts::{PI, TAU};

use cstirap::composite::{
    angle_samples, compose, first_order_coefficient, infidelity, infidelity_scaling, log_grid, mat2_mul, solve_u5_phases,
    PhaseSet, Su2Propagator,
};
use cstirap::pulse::SequenceFamily;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

type M2 = [[C64; 2]; 2];

/// Single-pulse matrix written out independently of the library.
fn pulse(eps: f64, alpha: f64, beta: f64) -> M2 {
    let s = (1.0 - eps * eps).sqrt();
    [
        [eps * C64::cis(alpha), s * C64::cis(beta)],
        [-s * C64::cis(-beta), eps * C64::cis(-alpha)],
    ]
}

fn brute_force(eps: f64, alpha: f64, beta: f64, phases: &[f64]) -> M2 {
    let mut u = [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    for &phi in phases {
        let p = pulse(eps, alpha, beta + phi);
        let mut next = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                next[i][j] = p[i][0] * u[0][j] + p[i][1] * u[1][j];
            }
        }
        u = next;
    }
    u
}

#[test]
fn first_order_coefficient_matches_numerical_derivative() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let h = 1e-5;
    for _ in 0..100 {
        let (alpha, phi2, phi3) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        let phases = [0.0, phi2, phi3, phi2, 0.0];
        let u11 = |eps: f64| brute_force(eps, alpha, 0.0, &phases)[0][0];
        let derivative = (u11(h) - u11(-h)) / (2.0 * h);
        let coefficient = first_order_coefficient(phi2, phi3, alpha);
        assert!(
            (derivative - coefficient).norm() < 1e-8,
            "α = {alpha}, φ = ({phi2}, {phi3}): {derivative} vs {coefficient}"
        );
    }
}

#[test]
fn library_composition_matches_brute_force() {
    let phases = [0.0, 0.3, 2.1, -1.0, 4.0];
    let p = Su2Propagator::new(0.3, 0.7, -0.4).unwrap();
    let lib = compose(&p, &PhaseSet::new(phases.to_vec()));
    let oracle = brute_force(0.3, 0.7, -0.4, &phases);
    for i in 0..2 {
        for j in 0..2 {
            assert!((lib[i][j] - oracle[i][j]).norm() < 1e-14);
        }
    }
}

#[test]
fn all_zero_phases_at_large_error() {
    // With ε = 0.3 and α = β = 0, U₁₁ of five identical pulses follows from
    // the matrix power; compare against the closed 2×2 recursion.
    let u = compose(&Su2Propagator::new(0.3, 0.0, 0.0).unwrap(), &PhaseSet::new(vec![0.0; 5]));
    let oracle = brute_force(0.3, 0.0, 0.0, &[0.0; 5]);
    assert!((u[0][0] - oracle[0][0]).norm() < 1e-14);
    // The single pulse is a real rotation by θ with cos θ = 0.3, so five
    // pulses give cos 5θ.
    let theta = 0.3f64.acos();
    assert!((u[0][0].re - (5.0 * theta).cos()).abs() < 1e-12);
}

fn worst_slope(phases: &PhaseSet) -> f64 {
    let angles = angle_samples(8);
    infidelity_scaling(phases, &log_grid(1e-3, 1e-2, 10), &angles, &angles).unwrap().slope
}

#[test]
fn all_zero_five_pulse_slope_is_two() {
    let slope = worst_slope(&PhaseSet::new(vec![0.0; 5]));
    assert!((slope - 2.0).abs() < 0.05, "{slope}");
}

#[test]
fn universal_sets_scale_at_least_fifth_order_for_every_angle() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for family in [SequenceFamily::U5a, SequenceFamily::U5b] {
        let phases = PhaseSet::from_family(family).unwrap();
        assert!((worst_slope(&phases) - 6.0).abs() < 0.1);
        for _ in 0..20 {
            let (alpha, beta) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
            let inf = |eps: f64| infidelity(&compose(&Su2Propagator::new(eps, alpha, beta).unwrap(), &phases));
            let slope = (inf(1e-2).ln() - inf(1e-3).ln()) / (1e-2f64.ln() - 1e-3f64.ln());
            assert!(slope >= 5.5, "{family:?} at α = {alpha}, β = {beta}: slope {slope}");
        }
    }
}

#[test]
fn solver_reproduces_tabulated_universal_phases() {
    let sets = solve_u5_phases(1e-12);
    assert_eq!(sets.len(), 2);
    let expected = [(5.0 * PI / 6.0, PI / 3.0), (11.0 * PI / 6.0, PI / 3.0)];
    for set in &sets {
        assert!(set.is_symmetric() && set.is_gauge_fixed());
    }
    for (phi2, phi3) in expected {
        assert!(
            sets.iter().any(|s| (s.phases[1] - phi2).abs() < 1e-6 && (s.phases[2] - phi3).abs() < 1e-6),
            "({phi2}, {phi3}) missing from {sets:?}"
        );
    }
}

proptest! {
    #[test]
    fn compositions_stay_special_unitary(
        eps in 0.0..=1.0f64,
        alpha in 0.0..TAU,
        beta in 0.0..TAU,
        phases in prop::collection::vec(0.0..TAU, 1..8),
    ) {
        let u = compose(&Su2Propagator::new(eps, alpha, beta).unwrap(), &PhaseSet::new(phases));
        let adj = [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]];
        let prod = mat2_mul(&adj, &u);
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((prod[i][j] - C64::new(target, 0.0)).norm() < 1e-12);
            }
        }
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        prop_assert!((det - C64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
