//! Heralded linear-optical procedures and their post-selection bookkeeping.
//!
//! Every procedure here has the same shape: the logical input is tensored with
//! an ancilla register, a fixed sequence of interferometers is applied, a set
//! of modes is measured, and the run is accepted when the measured pattern
//! satisfies an [`Acceptance`] rule. For each accepted pattern the collapsed
//! state may still need local phase shifters; those corrections are derived by
//! running the same circuit on each logical basis input and are verified to
//! restore the intended gate action on every basis state at once.

mod sign;
mod teleport;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::detector::{protocol_stats, Acceptance, DetectorModel, ProtocolStats};
use crate::error::{invalid, Error, Result};
use crate::fock::{fidelity_up_to_phase, FockState, SparseKet};
use crate::measure::{branch, measure_modes, OutcomeTable};
use crate::optics::{apply, ModeUnitary};
use crate::scalar::Real;

pub use sign::{plus_state, run_cz_1_16, run_cz_quarter, run_ns, CompositeRun, CompositeStats, Followup};
pub use teleport::{
    build_cs_n, build_t_n, cs_prep_gate_count, run_cz_teleported, run_cz_teleported_with, run_teleport_basic,
    run_teleport_n,
};

/// Fidelity below `1 - FIDELITY_TOL` after correction is a failed protocol.
pub const FIDELITY_TOL: f64 = 1e-9;

/// Protocols addressable by name from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolName {
    Ns,
    Cz16,
    Cz4,
    Teleport1,
    TeleportN,
    CzN,
}

impl ProtocolName {
    pub const ALL: [ProtocolName; 6] = [
        ProtocolName::Ns,
        ProtocolName::Cz16,
        ProtocolName::Cz4,
        ProtocolName::Teleport1,
        ProtocolName::TeleportN,
        ProtocolName::CzN,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ProtocolName::Ns => "ns",
            ProtocolName::Cz16 => "cz16",
            ProtocolName::Cz4 => "cz4",
            ProtocolName::Teleport1 => "teleport1",
            ProtocolName::TeleportN => "teleportn",
            ProtocolName::CzN => "czn",
        }
    }

    /// Number of logical qubits the protocol takes (the sign-shift gate takes
    /// a single mode instead).
    pub fn qubits(&self) -> usize {
        match self {
            ProtocolName::Ns | ProtocolName::Teleport1 | ProtocolName::TeleportN => 1,
            ProtocolName::Cz16 | ProtocolName::Cz4 | ProtocolName::CzN => 2,
        }
    }

    pub fn uses_n(&self) -> bool {
        matches!(self, ProtocolName::TeleportN | ProtocolName::CzN)
    }
}

impl fmt::Display for ProtocolName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown protocol '{s}' (expected one of ns, cz16, cz4, teleport1, teleportn, czn)")))
    }
}

/// Phase shifter `P_phase` applied to one surviving mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCorrection<T: Real> {
    /// Index in the full register.
    pub mode: usize,
    /// Index among the unmeasured modes, i.e. in the collapsed ket.
    pub collapsed_mode: usize,
    pub phase: T,
}

/// One accepted measurement pattern and what it leaves behind.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptedBranch<T: Real> {
    pub pattern: Vec<u32>,
    pub probability: T,
    /// Normalized collapsed state before correction.
    pub collapsed: SparseKet<T>,
    pub corrections: Vec<PhaseCorrection<T>>,
    /// Normalized collapsed state after the corrections.
    pub corrected: SparseKet<T>,
    /// Ideal gate output in the same register.
    pub target: SparseKet<T>,
    pub fidelity: T,
}

/// Ideal simulation of one protocol on one input.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRun<T: Real> {
    pub name: String,
    pub final_state: SparseKet<T>,
    pub outcomes: OutcomeTable<T>,
    pub acceptance: Acceptance,
    pub accepted: Vec<AcceptedBranch<T>>,
    /// Label of each register mode in the conventional 1-based numbering.
    pub mode_labels: Vec<String>,
}

impl<T: Real> ProtocolRun<T> {
    pub fn measured_modes(&self) -> &[usize] {
        self.outcomes.measured_modes()
    }

    /// Acceptance probability with perfect detectors.
    pub fn ideal_probability(&self) -> T {
        self.accepted.iter().map(|b| b.probability).sum()
    }

    pub fn branch(&self, pattern: &[u32]) -> Option<&AcceptedBranch<T>> {
        self.accepted.iter().find(|b| b.pattern == pattern)
    }

    pub fn stats(&self, model: &DetectorModel<T>) -> Result<ProtocolStats<T>> {
        protocol_stats(&self.outcomes, &self.acceptance, model)
    }

    /// Worst post-correction fidelity over accepted branches.
    pub fn min_fidelity(&self) -> T {
        self.accepted.iter().map(|b| b.fidelity).fold(T::one(), T::min)
    }
}

/// Ideal action on a logical basis: `basis[x] ↦ signs[x] · basis[x]`.
pub(crate) struct LogicalAction<T: Real> {
    pub basis: Vec<SparseKet<T>>,
    pub signs: Vec<Complex<T>>,
    /// Qubits whose `|1⟩` component may receive a correcting phase; basis
    /// index bits are most-significant-first. Zero disables corrections.
    pub qubits: usize,
}

/// Circuit description shared by every protocol.
pub(crate) struct Procedure<T: Real> {
    pub name: String,
    pub ancilla: SparseKet<T>,
    pub steps: Vec<ModeUnitary<T>>,
    pub measured: Vec<usize>,
    pub acceptance: Acceptance,
    pub action: LogicalAction<T>,
    pub mode_labels: Vec<String>,
}

impl<T: Real> Procedure<T> {
    fn evolve(&self, input: &SparseKet<T>) -> Result<SparseKet<T>> {
        let mut state = input.tensor(&self.ancilla);
        for step in &self.steps {
            state = apply(step, &state)?;
        }
        Ok(state)
    }

    /// Logical coefficients of `input`; fails if it leaves the logical span.
    fn decompose(&self, input: &SparseKet<T>) -> Result<Vec<Complex<T>>> {
        let mut residual = input.clone();
        let mut coeffs = Vec::with_capacity(self.action.basis.len());
        for b in &self.action.basis {
            let c = b.inner(input)?;
            residual = residual.add(&b.scale(-c))?;
            coeffs.push(c);
        }
        if residual.norm_squared() > T::lit(FIDELITY_TOL) * input.norm_squared().max(T::one()) {
            return Err(Error::Precondition(format!(
                "{} input has weight {} outside its logical basis",
                self.name,
                residual.norm_squared()
            )));
        }
        if input.is_empty() {
            return Err(Error::Precondition(format!("{} input is the zero vector", self.name)));
        }
        Ok(coeffs)
    }

    /// Outcome table of the measured modes without deriving corrections, for
    /// inputs or ancillas outside the protocol's intended span.
    fn outcomes(&self, input: &SparseKet<T>) -> Result<OutcomeTable<T>> {
        measure_modes(&self.evolve(input)?, &self.measured)
    }

    pub fn run(&self, input: &SparseKet<T>) -> Result<ProtocolRun<T>> {
        let coeffs = self.decompose(input)?;
        let final_state = self.evolve(input)?;
        let outcomes = measure_modes(&final_state, &self.measured)?;
        self.acceptance.validate(self.measured.len())?;
        let references = self
            .action
            .basis
            .iter()
            .map(|b| self.evolve(b))
            .collect::<Result<Vec<_>>>()?;

        let mut accepted = Vec::new();
        for entry in outcomes.entries() {
            if !self.acceptance.accepts(&entry.pattern) {
                continue;
            }
            let raw = branch(&final_state, &self.measured, &entry.pattern)?;
            let ref_terms = references
                .iter()
                .map(|r| single_term(&branch(r, &self.measured, &entry.pattern)?, &entry.pattern))
                .collect::<Result<Vec<_>>>()?;
            let corrections = self.corrections(&ref_terms, &entry.pattern, outcomes.remaining_modes())?;
            let phases: Vec<(usize, T)> = corrections.iter().map(|c| (c.collapsed_mode, c.phase)).collect();
            let corrected = raw.apply_phases(&phases)?.normalized()?;
            let target_terms = ref_terms
                .iter()
                .zip(&coeffs)
                .zip(&self.action.signs)
                .map(|(((state, _), c), s)| (state.clone(), *c * s));
            let target = SparseKet::from_terms(raw.mode_count(), target_terms)?.normalized()?;
            let fidelity = fidelity_up_to_phase(&corrected, &target)?;
            if fidelity < T::one() - T::lit(FIDELITY_TOL) {
                return Err(correction_failed(&entry.pattern, fidelity));
            }
            accepted.push(AcceptedBranch {
                pattern: entry.pattern.clone(),
                probability: entry.probability,
                collapsed: entry.collapsed.clone(),
                corrections,
                corrected,
                target,
                fidelity,
            });
        }
        Ok(ProtocolRun {
            name: self.name.clone(),
            final_state,
            outcomes,
            acceptance: self.acceptance.clone(),
            accepted,
            mode_labels: self.mode_labels.clone(),
        })
    }

    /// Phases that make every basis branch equal `sign · common amplitude`.
    fn corrections(
        &self,
        refs: &[(FockState, Complex<T>)],
        pattern: &[u32],
        remaining: &[usize],
    ) -> Result<Vec<PhaseCorrection<T>>> {
        let signs = &self.action.signs;
        let q = self.action.qubits;
        let mut out = Vec::with_capacity(q);
        for bit in 0..q {
            let e = 1usize << (q - 1 - bit);
            let (f0, a0) = &refs[0];
            let (fe, ae) = &refs[e];
            let mode = (0..f0.mode_count())
                .find(|&m| fe.get(m) == f0.get(m) + 1)
                .ok_or_else(|| correction_failed(pattern, T::zero()))?;
            let phase = (*a0 * signs[e]).arg() - (*ae * signs[0]).arg();
            out.push(PhaseCorrection { mode: remaining[mode], collapsed_mode: mode, phase });
        }

        // one common amplitude across the basis, up to the ideal signs
        let corrected: Vec<Complex<T>> = refs
            .iter()
            .zip(signs)
            .map(|((state, amp), s)| {
                let angle = out
                    .iter()
                    .fold(T::zero(), |acc, c| acc + c.phase * T::from_count(state.get(c.collapsed_mode) as usize));
                *amp * Complex::from_polar(T::one(), angle) / s
            })
            .collect();
        let reference = corrected[0];
        let tol = T::lit(1e-9).max(T::UNITARY_TOL);
        if let Some(bad) = corrected.iter().find(|a| (**a - reference).norm() > tol * reference.norm().max(T::one())) {
            let overlap = (bad.conj() * reference).norm() / (bad.norm() * reference.norm());
            return Err(correction_failed(pattern, overlap * overlap));
        }
        Ok(out)
    }
}

fn correction_failed<T: Real>(pattern: &[u32], fidelity: T) -> Error {
    Error::CorrectionFailed { pattern: pattern.to_vec(), fidelity: fidelity.to_f64().unwrap_or(f64::NAN) }
}

/// The unique basis term of a reference branch.
fn single_term<T: Real>(k: &SparseKet<T>, pattern: &[u32]) -> Result<(FockState, Complex<T>)> {
    let mut it = k.iter();
    match (it.next(), it.next()) {
        (Some((s, a)), None) => Ok((s.clone(), *a)),
        _ => Err(correction_failed(pattern, T::zero())),
    }
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Dual-rail logical basis `|x_1 x_2 ...⟩_L`, qubit `q` on modes `(2q, 2q+1)`
/// with logical 1 in the first of the pair.
pub(crate) fn dual_rail_basis<T: Real>(qubits: usize) -> Vec<SparseKet<T>> {
    (0..1usize << qubits)
        .map(|x| {
            let mut occ = Vec::with_capacity(2 * qubits);
            for bit in (0..qubits).rev() {
                let one = (x >> bit) & 1 == 1;
                occ.push(u32::from(one));
                occ.push(u32::from(!one));
            }
            SparseKet::basis(FockState::new(occ))
        })
        .collect()
}

/// `+1` on every basis state except `|11⟩`.
pub(crate) fn controlled_sign<T: Real>() -> Vec<Complex<T>> {
    let one = real(T::one());
    vec![one, one, one, -one]
}
