mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use teleport_core::bounds::{
    entanglement_of_teleportation, schmidt_entanglement, teleport_ccc_bound, teleport_feasible,
};
use teleport_core::linalg::{partial_trace, schmidt_decompose, tensor, Subsystem};
use teleport_core::phases::{check_feasible, solve_d2, solve_general};
use teleport_core::sim::{simulate, InputQudit};
use teleport_core::{BipartiteShape, ComplexMat, ComplexVec, Error, Method, Protocol, C64};

fn synthesize_or_skip(probs: Vec<f64>, d: usize) -> Option<Protocol> {
    match Protocol::synthesize(&spectrum(probs), d, Method::Auto) {
        Ok(p) => Some(p),
        // Feasible spectra may still lack phases once d > 2.
        Err(Error::PhaseFactorsNotFound { .. }) if d > 2 => None,
        Err(e) => panic!("unexpected synthesis error: {e}"),
    }
}

fn feasible_case() -> impl Strategy<Value = (Vec<f64>, usize)> {
    prop_oneof![Just(2usize), Just(3usize)].prop_flat_map(|d| {
        (d..=6).prop_flat_map(move |n| {
            prop::collection::vec(0.05..1.0f64, n).prop_map(move |w| (feasible_probs(&w, d), d))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tensor_is_bilinear(
        a in complex_vec(3), a2 in complex_vec(3), b in complex_vec(4), b2 in complex_vec(4),
        (x, y) in (-2.0..2.0f64, -2.0..2.0f64),
    ) {
        let c = C64::new(x, y);
        let left = tensor(&a.scale(c).add(&a2), &b);
        let right = tensor(&a, &b).scale(c).add(&tensor(&a2, &b));
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
        let left = tensor(&a, &b.scale(c).add(&b2));
        let right = tensor(&a, &b).scale(c).add(&tensor(&a, &b2));
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn schmidt_reconstructs_state((da, db) in (1usize..5, 1usize..5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = InputQudit::random(&mut rng, da * db).amps().clone();
        let dec = schmidt_decompose(&psi, BipartiteShape::new(da, db)).unwrap();
        prop_assert!(dec.reconstruct().max_abs_diff(&psi) < 1e-10);
        let sum: f64 = dec.spectrum.probs().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-10);
    }

    #[test]
    fn schmidt_spectrum_matches_reduced_state_eigenvalues((da, db) in (1usize..5, 1usize..5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = InputQudit::random(&mut rng, da * db).amps().clone();
        let shape = BipartiteShape::new(da, db);
        let dec = schmidt_decompose(&psi, shape).unwrap();
        let rho_a = partial_trace(&ComplexMat::outer(&psi), shape, Subsystem::A).unwrap();
        let eig = hermitian_eigenvalues(&rho_a);
        for (i, lambda) in eig.iter().enumerate() {
            let p = dec.spectrum.probs().get(i).copied().unwrap_or(0.0);
            prop_assert!((lambda - p).abs() < 1e-10, "eigenvalue {i}: {lambda} vs {p}");
        }
    }

    #[test]
    fn product_states_have_schmidt_rank_one(a in unit_vec(3), b in unit_vec(4)) {
        let dec = schmidt_decompose(&tensor(&a, &b), BipartiteShape::new(3, 4)).unwrap();
        prop_assert_eq!(dec.rank(), 1);
    }

    #[test]
    fn gate_and_monotonicity(weights in prop::collection::vec(0.01..1.0f64, 1..7), d in 2usize..5) {
        let s = spectrum(normalize(&weights));
        let feasible = s.max() <= 1.0 / d as f64 + 1e-12;
        prop_assert_eq!(teleport_feasible(&s, d), feasible);
        prop_assert_eq!(check_feasible(&s, d).is_ok(), feasible);
        if teleport_feasible(&s, d) {
            for dp in 1..d {
                prop_assert!(teleport_feasible(&s, dp));
            }
        }
        match Protocol::synthesize(&s, d, Method::Auto) {
            Ok(p) => {
                prop_assert!(feasible);
                prop_assert!(p.conditions().passes(1e-10));
            }
            Err(Error::InfeasibleSpectrum { .. }) => prop_assert!(!feasible),
            Err(Error::PhaseFactorsNotFound { .. }) => prop_assert!(feasible && d > 2),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn teleportation_entanglement_never_exceeds_schmidt(weights in prop::collection::vec(0.01..1.0f64, 1..8)) {
        let s = spectrum(normalize(&weights));
        let et = entanglement_of_teleportation(&s).value;
        let esch = schmidt_entanglement(&s).value;
        prop_assert!(et <= esch + 1e-12);
        prop_assert_eq!((esch - et).abs() < 1e-12, s.is_uniform(1e-12));
    }

    #[test]
    fn row_shift_keeps_phases_valid((probs, d) in feasible_case(), shift in -10.0..10.0f64, m in 0usize..3) {
        let s = spectrum(probs);
        let Ok(phases) = solve_general(&s, d) else { return Ok(()) };
        prop_assert!(phases.residual(&s) < 1e-9);
        let shifted = phases.shift_row(m % d, shift);
        prop_assert!(shifted.residual(&s) < 1e-9);
    }

    #[test]
    fn synthesized_tables_satisfy_conditions((probs, d) in feasible_case(), seed in any::<u64>()) {
        let Some(protocol) = synthesize_or_skip(probs.clone(), d) else { return Ok(()) };
        let s = protocol.outcomes();
        prop_assert_eq!(s, probs.len() * d);
        let flat = 1.0 / (s as f64).sqrt();
        for v in protocol.table.coefficients() {
            prop_assert!((v.norm() - flat).abs() < 1e-12);
        }
        let report = protocol.conditions();
        prop_assert!(report.passes(1e-10), "{report:?}");
        prop_assert!(protocol.basis.completeness_residual() < 1e-10);
        prop_assert!(protocol.unitaries.max_unitarity_residual() < 1e-10);
        prop_assert_eq!(protocol.classical_bits(), teleport_ccc_bound(probs.len(), d, true).bits.value);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = InputQudit::random(&mut rng, d);
        let trace = simulate(&psi, &protocol).unwrap();
        let oracle = brute_force_probabilities(&protocol.table, &probs, psi.amps());
        for (o, expected) in trace.outcomes.iter().zip(&oracle) {
            prop_assert!((o.probability - expected).abs() < 1e-12);
            prop_assert!((o.probability - 1.0 / s as f64).abs() < 1e-10);
            prop_assert!(o.fidelity >= 1.0 - 1e-10);
            prop_assert_eq!(o.residual_schmidt, 1);
        }
        prop_assert_eq!(trace.classical_bits, teleport_ccc_bound(probs.len(), d, true).bits.value);
    }

    #[test]
    fn teleportation_is_linear((probs, d) in feasible_case(), seed in any::<u64>(), (x, y) in (-1.0..1.0f64, -1.0..1.0f64)) {
        let Some(protocol) = synthesize_or_skip(probs, d) else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = InputQudit::random(&mut rng, d);
        let b = InputQudit::random(&mut rng, d);
        let alpha = C64::new(x, y);
        let raw = a.amps().scale(alpha).add(b.amps());
        prop_assume!(raw.norm_sqr() > 1e-6);
        let norm = raw.norm();
        let sup = InputQudit::new(raw.normalized().unwrap()).unwrap();
        let unnormalized = |psi: &InputQudit| -> Vec<ComplexVec> {
            simulate(psi, &protocol).unwrap().outcomes.iter()
                .map(|o| o.corrected.scale(C64::new(o.probability.sqrt(), 0.0)))
                .collect()
        };
        let (ta, tb, ts) = (unnormalized(&a), unnormalized(&b), unnormalized(&sup));
        for j in 0..protocol.outcomes() {
            let combined = ta[j].scale(alpha).add(&tb[j]).scale(C64::new(1.0 / norm, 0.0));
            prop_assert!(ts[j].max_abs_diff(&combined) < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn qubit_phases_always_found(weights in prop::collection::vec(0.05..1.0f64, 2..=8)) {
        let s = spectrum(feasible_probs(&weights, 2));
        let phases = solve_d2(&s).unwrap();
        prop_assert!(phases.residual(&s) < 1e-9);
    }
}
