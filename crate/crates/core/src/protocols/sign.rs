//! Nonlinear sign shift and the post-selected controlled sign flips built on it.

use num_complex::Complex;

use super::{controlled_sign, dual_rail_basis, real, teleport, LogicalAction, Procedure, ProtocolRun};
use crate::detector::{protocol_stats, reported_acceptance_probability, Acceptance, DetectorModel, ProtocolStats};
use crate::measure::OutcomeTable;
use crate::error::{Error, Result};
use crate::fock::{fidelity_up_to_phase, DualRailQubit, FockState, SparseKet};
use crate::optics::{apply, beam_splitter, embed, ns_matrix};
use crate::scalar::Real;

/// Sign shift `|n⟩ ↦ (-1)^{n(n-1)/2}|n⟩` on span{|0⟩, |1⟩, |2⟩}.
///
/// Register: mode 0 carries the input, modes 1 and 2 the ancilla `|1,0⟩`;
/// success is heralded by `(1, 0)` on the ancillas.
pub fn run_ns<T: Real>(input: &SparseKet<T>) -> Result<ProtocolRun<T>> {
    if input.mode_count() != 1 {
        return Err(Error::Precondition(format!("sign shift acts on one mode, got {}", input.mode_count())));
    }
    if input.max_photons() > 2 {
        return Err(Error::Precondition(format!(
            "sign shift is defined for at most 2 photons, input has {}",
            input.max_photons()
        )));
    }
    let one = real(T::one());
    Procedure {
        name: "ns".into(),
        ancilla: SparseKet::basis(FockState::new(vec![1, 0])),
        steps: vec![ns_matrix()],
        measured: vec![1, 2],
        acceptance: Acceptance::Pattern(vec![1, 0]),
        action: LogicalAction {
            basis: (0..=2).map(|n| SparseKet::basis(FockState::new(vec![n]))).collect(),
            signs: vec![one, one, -one],
            qubits: 0,
        },
        mode_labels: (0..3).map(|m| m.to_string()).collect(),
    }
    .run(input)
}

fn check_dual_rail<T: Real>(name: &str, q: &SparseKet<T>) -> Result<()> {
    let rail = DualRailQubit::standard(0, 2).expect("two modes");
    if q.mode_count() != 2 || q.is_empty() || !rail.holds(q) {
        return Err(Error::Precondition(format!("{name} is not a dual-rail qubit state: {q}")));
    }
    Ok(())
}

/// Controlled sign flip from two sign-shift gates between balanced beam
/// splitters, heralded with probability 1/16.
///
/// Register (0-based): qubit one on modes 0-1, qubit two on modes 2-3,
/// ancillas `|1,0,1,0⟩` on modes 4-7.
pub fn run_cz_1_16<T: Real>(q1: &SparseKet<T>, q2: &SparseKet<T>) -> Result<ProtocolRun<T>> {
    check_dual_rail("first qubit", q1)?;
    check_dual_rail("second qubit", q2)?;
    let quarter = T::FRAC_PI_4();
    let modes = 8;
    let steps = vec![
        embed(&beam_splitter(quarter, T::zero()), &[0, 2], modes)?,
        embed(&ns_matrix(), &[0, 4, 5], modes)?,
        embed(&ns_matrix(), &[2, 6, 7], modes)?,
        embed(&beam_splitter(-quarter, T::zero()), &[0, 2], modes)?,
    ];
    Procedure {
        name: "cz16".into(),
        ancilla: SparseKet::basis(FockState::new(vec![1, 0, 1, 0])),
        steps,
        measured: vec![4, 5, 6, 7],
        acceptance: Acceptance::Pattern(vec![1, 0, 1, 0]),
        action: LogicalAction { basis: dual_rail_basis(2), signs: controlled_sign(), qubits: 2 },
        mode_labels: (1..=modes).map(|m| m.to_string()).collect(),
    }
    .run(&q1.tensor(q2))
}

/// `(|0⟩_L + |1⟩_L)/√2`, made by a balanced beam splitter on `|1,0⟩`.
pub fn plus_state<T: Real>() -> SparseKet<T> {
    let bs = beam_splitter(T::FRAC_PI_4(), T::zero());
    apply(&bs, &SparseKet::basis(FockState::new(vec![1, 0]))).expect("two-mode beam splitter")
}

/// Two-stage controlled sign flip: prepare the four-mode resource with one
/// `c-z_{1/16}` on two `|+⟩` qubits, then teleport both inputs through it.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeRun<T: Real> {
    pub preparation: ProtocolRun<T>,
    /// The resource handed to the second stage, in teleportation mode order.
    pub resource: SparseKet<T>,
    pub teleportation: ProtocolRun<T>,
    /// Second-stage outcome tables for every preparation outcome, including
    /// the ones whose heralding would be a false positive.
    pub followups: Vec<Followup<T>>,
}

/// Second stage run on whatever a given preparation outcome leaves behind.
#[derive(Debug, Clone, PartialEq)]
pub struct Followup<T: Real> {
    pub pattern: Vec<u32>,
    pub probability: T,
    pub outcomes: OutcomeTable<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeStats<T: Real> {
    pub preparation: ProtocolStats<T>,
    /// Second stage alone, fed the ideal resource.
    pub teleportation: ProtocolStats<T>,
    pub composite: ProtocolStats<T>,
}

impl<T: Real> CompositeRun<T> {
    pub fn ideal_probability(&self) -> T {
        self.preparation.ideal_probability() * self.teleportation.ideal_probability()
    }

    /// Stage and end-to-end statistics.
    ///
    /// The composite `p_d` follows each preparation outcome into the second
    /// stage: a falsely heralded resource is teleported through as it is, and
    /// only then do the second-stage detectors report.
    pub fn stats(&self, model: &DetectorModel<T>) -> Result<CompositeStats<T>> {
        let preparation = self.preparation.stats(model)?;
        let teleportation = self.teleportation.stats(model)?;
        let mut p_d = T::zero();
        for f in &self.followups {
            let heralded = reported_acceptance_probability(&f.pattern, &self.preparation.acceptance, model)?;
            if heralded > T::zero() {
                let second = protocol_stats(&f.outcomes, &self.teleportation.acceptance, model)?;
                p_d += f.probability * heralded * second.p_d;
            }
        }
        let composite = ProtocolStats::from_parts(preparation.p_s * teleportation.p_s, p_d);
        Ok(CompositeStats { preparation, teleportation, composite })
    }
}

// The gate leaves the sign on |11⟩_L; the teleportation resource carries it on
// the term whose first-of-pair modes are empty, so swap within each pair.
const RESOURCE_ORDER: [usize; 4] = [1, 0, 3, 2];

/// The `c-z_{1/4}` pipeline on two dual-rail qubits.
pub fn run_cz_quarter<T: Real>(q1: &SparseKet<T>, q2: &SparseKet<T>) -> Result<CompositeRun<T>> {
    let plus: SparseKet<T> = plus_state();
    let preparation = run_cz_1_16(&plus, &plus)?;
    let heralded = preparation
        .branch(&[1, 0, 1, 0])
        .ok_or_else(|| Error::Precondition("resource preparation never heralds".into()))?;
    let resource = heralded.corrected.permute_modes(&RESOURCE_ORDER)?;
    let expected = teleport::build_cs_n(1)?;
    let fidelity = fidelity_up_to_phase(&resource, &expected)?;
    if fidelity < T::one() - T::lit(super::FIDELITY_TOL) {
        return Err(Error::CorrectionFailed { pattern: vec![1, 0, 1, 0], fidelity: fidelity.to_f64().unwrap_or(f64::NAN) });
    }
    // align the global phase with the canonical resource
    let phase = resource.inner(&expected)?;
    let resource = resource.scale(phase / Complex::new(phase.norm(), T::zero()));
    let teleportation = teleport::run_cz_teleported_with(q1, q2, 1, &resource)?;
    let followups = preparation
        .outcomes
        .entries()
        .iter()
        .map(|e| {
            let leftover = e.collapsed.permute_modes(&RESOURCE_ORDER)?;
            Ok(Followup {
                pattern: e.pattern.clone(),
                probability: e.probability,
                outcomes: teleport::cz_teleport_outcomes(q1, q2, 1, &leftover)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompositeRun { preparation, resource, teleportation, followups })
}
