//! Exact statevector simulation of the protocol.
//!
//! The register is `1 ⊗ 2 ⊗ 3` with dimensions `(d, n, n)`. Every outcome
//! `j` is enumerated: Alice's projector `P^(j) ⊗ I₃` is applied to
//! `|ψ⟩₁|χ⟩₂₃`, the branch is renormalized, Bob applies `û^(j)†` to system 3
//! and the result is compared with `|M^(j)⟩₁₂ ⊗ |ψ⟩₃`.

use alloc::vec::Vec;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{apply_on, permute_subsystems, schmidt_number, tensor, BipartiteShape, ComplexVec, C64};
use crate::protocol::{BobUnitarySet, MeasurementBasis, Protocol, ProtocolTable};
use crate::spectrum::SchmidtSpectrum;

pub const FIDELITY_TOLERANCE: f64 = 1e-10;
pub const PROBABILITY_TOLERANCE: f64 = 1e-10;

/// The state `Σ_m a_m |m⟩` to be teleported.
#[derive(Debug, Clone, PartialEq)]
pub struct InputQudit {
    amps: ComplexVec,
}

impl InputQudit {
    pub fn new(amps: ComplexVec) -> Result<Self> {
        if !amps.is_normalized(crate::linalg::NORM_TOLERANCE) {
            return Err(Error::NotNormalized {
                norm_sqr: amps.norm_sqr(),
            });
        }
        Ok(Self { amps })
    }

    pub fn basis(d: usize, m: usize) -> Self {
        Self {
            amps: ComplexVec::basis(d, m),
        }
    }

    /// Haar-random qudit: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Self {
        loop {
            let raw: ComplexVec = (0..d)
                .map(|_| {
                    C64::new(
                        rng.sample::<f64, _>(StandardNormal),
                        rng.sample::<f64, _>(StandardNormal),
                    )
                })
                .collect();
            if let Ok(amps) = raw.normalized() {
                return Self { amps };
            }
        }
    }

    pub fn amps(&self) -> &ComplexVec {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.dim()
    }
}

/// One measurement branch.
#[derive(Debug, Clone)]
pub struct OutcomeRecord {
    pub j: usize,
    /// `‖P^(j)|I⟩‖²`.
    pub probability: f64,
    /// `N^j`, the squared norm divided out of the branch; equal to the
    /// probability for a projective measurement.
    pub normalization: f64,
    /// `(P^(j) ⊗ I₃)|I⟩`, unnormalized.
    pub post_measurement: ComplexVec,
    /// `(I₁₂ ⊗ û^(j)†)` applied to the normalized branch.
    pub corrected: ComplexVec,
    /// `|⟨M^(j)|⊗⟨ψ| corrected⟩|²`.
    pub fidelity: f64,
    /// Schmidt number of `corrected` across `(1,2) | 3`.
    pub residual_schmidt: usize,
}

#[derive(Debug, Clone)]
pub struct SimulationTrace {
    pub outcomes: Vec<OutcomeRecord>,
    pub total_probability: f64,
    pub min_fidelity: f64,
    /// `log₂ s`.
    pub classical_bits: f64,
}

impl SimulationTrace {
    pub fn probabilities(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.probability).collect()
    }

    pub fn max_residual_schmidt(&self) -> usize {
        self.outcomes.iter().map(|o| o.residual_schmidt).max().unwrap_or(0)
    }
}

pub fn run_protocol(
    psi: &InputQudit,
    spectrum: &SchmidtSpectrum,
    table: &ProtocolTable,
    basis: &MeasurementBasis,
    ubob: &BobUnitarySet,
) -> Result<SimulationTrace> {
    let (d, n, s) = (table.d(), table.n(), table.outcomes());
    let mismatch = |what, expected, found| Err(Error::DimensionMismatch { what, expected, found });
    if psi.dim() != d {
        return mismatch("input qudit", d, psi.dim());
    }
    if spectrum.len() != n {
        return mismatch("spectrum", n, spectrum.len());
    }
    if basis.len() != s {
        return mismatch("measurement basis", s, basis.len());
    }
    if ubob.len() != s {
        return mismatch("Bob unitaries", s, ubob.len());
    }

    let initial = tensor(psi.amps(), &spectrum.resource_state());
    let target = psi.amps().embed(n);
    let dims = [d * n, n];
    let mut outcomes = Vec::with_capacity(s);
    for j in 0..s {
        let m_state = &basis.states()[j];
        let post_measurement = apply_on(&basis.projector(j), &initial, &dims, 0)?;
        let probability = post_measurement.norm_sqr();
        let (corrected, fidelity, residual) = if probability > 0.0 {
            let branch = post_measurement.scale(C64::new(1.0 / Float::sqrt(probability), 0.0));
            let corrected = apply_on(&ubob.get(j).adjoint(), &branch, &dims, 1)?;
            let expected = tensor(m_state, &target);
            let fidelity = expected.inner(&corrected).norm_sqr();
            let residual = residual_schmidt(&corrected, d * n, n)?;
            (corrected, fidelity, residual)
        } else {
            (ComplexVec::zeros(initial.dim()), 0.0, 0)
        };
        outcomes.push(OutcomeRecord {
            j,
            probability,
            normalization: probability,
            post_measurement,
            corrected,
            fidelity,
            residual_schmidt: residual,
        });
    }
    let total_probability = outcomes.iter().map(|o| o.probability).sum();
    let min_fidelity = outcomes.iter().map(|o| o.fidelity).fold(f64::INFINITY, f64::min);
    Ok(SimulationTrace {
        outcomes,
        total_probability,
        min_fidelity,
        classical_bits: Float::log2(s as f64),
    })
}

pub fn simulate(psi: &InputQudit, protocol: &Protocol) -> Result<SimulationTrace> {
    run_protocol(
        psi,
        &protocol.spectrum,
        &protocol.table,
        &protocol.basis,
        &protocol.unitaries,
    )
}

/// Schmidt number of a final state across Alice's registers (`alice_dim`)
/// and Bob's (`bob_dim`).
pub fn residual_schmidt(state: &ComplexVec, alice_dim: usize, bob_dim: usize) -> Result<usize> {
    schmidt_number(&state.normalized()?, BipartiteShape::new(alice_dim, bob_dim))
}

/// Worst-case figures over a batch of random input states.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub trials: usize,
    pub seed: u64,
    pub min_fidelity: f64,
    /// `max |f − 1|` over trials and outcomes.
    pub max_fidelity_deviation: f64,
    /// `max |p_j − 1/s|` over trials and outcomes.
    pub max_probability_deviation: f64,
    /// `max |Σ_j p_j − 1|` over trials.
    pub max_completeness_deviation: f64,
    pub max_residual_schmidt: usize,
    pub classical_bits: f64,
}

/// Teleports `trials` Haar-random qudits drawn from a ChaCha8 stream seeded
/// with `seed`. Identical arguments give identical reports.
pub fn random_input_sweep(protocol: &Protocol, trials: usize, seed: u64) -> Result<SweepReport> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform = 1.0 / protocol.outcomes() as f64;
    let mut report = SweepReport {
        trials,
        seed,
        min_fidelity: f64::INFINITY,
        max_fidelity_deviation: 0.0,
        max_probability_deviation: 0.0,
        max_completeness_deviation: 0.0,
        max_residual_schmidt: 0,
        classical_bits: protocol.classical_bits(),
    };
    for _ in 0..trials {
        let psi = InputQudit::random(&mut rng, protocol.d());
        let trace = simulate(&psi, protocol)?;
        report.min_fidelity = report.min_fidelity.min(trace.min_fidelity);
        report.max_completeness_deviation = report
            .max_completeness_deviation
            .max((trace.total_probability - 1.0).abs());
        report.max_residual_schmidt = report.max_residual_schmidt.max(trace.max_residual_schmidt());
        for o in &trace.outcomes {
            report.max_fidelity_deviation = report.max_fidelity_deviation.max((o.fidelity - 1.0).abs());
            report.max_probability_deviation = report.max_probability_deviation.max((o.probability - uniform).abs());
        }
    }
    Ok(report)
}

/// Outcome of teleporting with an extra idle entangled pair left untouched.
#[derive(Debug, Clone)]
pub struct IdleOutcome {
    pub j: usize,
    pub probability: f64,
    /// Overlap with `|M^(j)⟩₁₂ ⊗ |ψ⟩₃ ⊗ |χ'⟩₂'₃'`.
    pub fidelity: f64,
    /// Schmidt number across `(1,2,2') | (3,3')`.
    pub residual_schmidt: usize,
}

#[derive(Debug, Clone)]
pub struct IdleResourceTrace {
    pub outcomes: Vec<IdleOutcome>,
    /// Schmidt number of the whole shared resource `χ ⊗ χ'`.
    pub resource_schmidt: usize,
    pub classical_bits: f64,
}

/// Teleports `psi` with `protocol` while Alice and Bob also share an idle
/// pair `Σ_k √q_k |k⟩₂'|k⟩₃'` that nobody touches. With two Bell pairs this
/// is the four-level resource where one pair does the work and the other
/// survives as residual entanglement.
pub fn run_with_idle_pair(psi: &InputQudit, protocol: &Protocol, idle: &SchmidtSpectrum) -> Result<IdleResourceTrace> {
    let (d, n, s) = (protocol.d(), protocol.n(), protocol.outcomes());
    let ni = idle.len();
    if psi.dim() != d {
        return Err(Error::DimensionMismatch {
            what: "input qudit",
            expected: d,
            found: psi.dim(),
        });
    }
    let idle_state = idle.resource_state();
    // Register order 1, 2, 3, 2', 3'.
    let initial = tensor(&tensor(psi.amps(), &protocol.spectrum.resource_state()), &idle_state);
    let grouped = [d * n, n, ni * ni];
    let split = [d, n, n, ni, ni];
    let to_cut = [0, 1, 3, 2, 4];
    let target = psi.amps().embed(n);

    let resource = permute_subsystems(
        &tensor(&protocol.spectrum.resource_state(), &idle_state),
        &[n, n, ni, ni],
        &[0, 2, 1, 3],
    )?;
    let resource_schmidt = schmidt_number(&resource, BipartiteShape::new(n * ni, n * ni))?;

    let mut outcomes = Vec::with_capacity(s);
    for j in 0..s {
        let branch = apply_on(&protocol.basis.projector(j), &initial, &grouped, 0)?;
        let probability = branch.norm_sqr();
        let branch = branch.normalized()?;
        let corrected = apply_on(&protocol.unitaries.get(j).adjoint(), &branch, &grouped, 1)?;
        let expected = tensor(&tensor(&protocol.basis.states()[j], &target), &idle_state);
        let fidelity = expected.inner(&corrected).norm_sqr();
        let reordered = permute_subsystems(&corrected, &split, &to_cut)?;
        let residual_schmidt = residual_schmidt(&reordered, d * n * ni, n * ni)?;
        outcomes.push(IdleOutcome {
            j,
            probability,
            fidelity,
            residual_schmidt,
        });
    }
    Ok(IdleResourceTrace {
        outcomes,
        resource_schmidt,
        classical_bits: Float::log2(s as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::Method;
    use crate::spectrum::Rational;
    use alloc::vec;

    fn worked_example() -> Protocol {
        let s = SchmidtSpectrum::from_rationals(vec![Rational::new(1, 2), Rational::new(1, 3), Rational::new(1, 6)])
            .unwrap();
        Protocol::synthesize(&s, 2, Method::Auto).unwrap()
    }

    #[test]
    fn input_must_be_normalized() {
        assert!(InputQudit::new(ComplexVec::from_real(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn bennett_outcomes_are_uniform_and_faithful() {
        let proto = Protocol::synthesize(&SchmidtSpectrum::uniform(2), 2, Method::Auto).unwrap();
        let psi = InputQudit::new(ComplexVec::new(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)])).unwrap();
        let trace = simulate(&psi, &proto).unwrap();
        assert_eq!(trace.outcomes.len(), 4);
        for o in &trace.outcomes {
            assert!((o.probability - 0.25).abs() < 1e-12);
            assert!((o.fidelity - 1.0).abs() < 1e-10);
            assert_eq!(o.residual_schmidt, 1);
        }
        assert_eq!(trace.classical_bits, 2.0);
    }

    #[test]
    fn worked_example_is_faithful() {
        let proto = worked_example();
        for m in 0..2 {
            let trace = simulate(&InputQudit::basis(2, m), &proto).unwrap();
            assert!(trace.min_fidelity > 1.0 - 1e-10);
            assert!((trace.total_probability - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let proto = worked_example();
        let err = simulate(&InputQudit::basis(3, 0), &proto).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                what: "input qudit",
                ..
            }
        ));
    }

    #[test]
    fn sweep_is_deterministic() {
        let proto = worked_example();
        let a = random_input_sweep(&proto, 20, 7).unwrap();
        let b = random_input_sweep(&proto, 20, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.min_fidelity >= 1.0 - 1e-10);
        assert!(matches!(random_input_sweep(&proto, 0, 7), Err(Error::NoTrials)));
    }

    #[test]
    fn idle_bell_pair_survives() {
        let proto = Protocol::synthesize(&SchmidtSpectrum::uniform(2), 2, Method::Auto).unwrap();
        let psi = InputQudit::new(ComplexVec::new(vec![C64::new(0.0, 0.6), C64::new(0.8, 0.0)])).unwrap();
        let trace = run_with_idle_pair(&psi, &proto, &SchmidtSpectrum::uniform(2)).unwrap();
        assert_eq!(trace.resource_schmidt, 4);
        assert_eq!(trace.classical_bits, 2.0);
        for o in &trace.outcomes {
            assert_eq!(o.residual_schmidt, 2);
            assert!((o.fidelity - 1.0).abs() < 1e-10);
            assert!((o.probability - 0.25).abs() < 1e-12);
        }
    }
}
