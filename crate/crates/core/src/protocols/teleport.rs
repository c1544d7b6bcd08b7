//! Teleportation through `|t_n⟩` and the teleported controlled sign flip
//! through `|cs_n⟩`.

use super::{controlled_sign, dual_rail_basis, real, LogicalAction, Procedure, ProtocolRun};
use crate::detector::{Acceptance, GroupRule};
use crate::error::{invalid, Error, Result};
use crate::fock::{DualRailQubit, FockState, SparseKet};
use crate::measure::OutcomeTable;
use crate::optics::{beam_splitter, embed, fourier_network};
use crate::scalar::Real;

fn single_rail_action<T: Real>() -> LogicalAction<T> {
    let one = real(T::one());
    LogicalAction {
        basis: (0..=1).map(|n| SparseKet::basis(FockState::new(vec![n]))).collect(),
        signs: vec![one, one],
        qubits: 1,
    }
}

fn check_single_rail<T: Real>(input: &SparseKet<T>) -> Result<()> {
    if input.mode_count() != 1 {
        return Err(Error::Precondition(format!("teleportation input must be one mode, got {}", input.mode_count())));
    }
    Ok(())
}

/// Occupations `1^i 0^{n-i} 0^i 1^{n-i}` of one `|t_n⟩` term.
fn t_block(n: usize, i: usize) -> Vec<u32> {
    let mut occ = Vec::with_capacity(2 * n);
    occ.extend(std::iter::repeat_n(1, i));
    occ.extend(std::iter::repeat_n(0, n - i));
    occ.extend(std::iter::repeat_n(0, i));
    occ.extend(std::iter::repeat_n(1, n - i));
    occ
}

/// Single-photon teleportation from mode 0 to mode 2 with one beam-splitter
/// resource, heralded by one photon across modes 0 and 1 (probability 1/2).
pub fn run_teleport_basic<T: Real>(input: &SparseKet<T>) -> Result<ProtocolRun<T>> {
    check_single_rail(input)?;
    let quarter = T::FRAC_PI_4();
    let steps = vec![
        embed(&beam_splitter(quarter, T::zero()), &[1, 2], 3)?,
        embed(&beam_splitter(-quarter, T::zero()), &[0, 1], 3)?,
    ];
    Procedure {
        name: "teleport1".into(),
        ancilla: SparseKet::basis(FockState::new(vec![1, 0])),
        steps,
        measured: vec![0, 1],
        acceptance: Acceptance::GroupTotals(vec![GroupRule { positions: vec![0, 1], min: 1, max: 1 }]),
        action: single_rail_action(),
        mode_labels: (0..3).map(|m| m.to_string()).collect(),
    }
    .run(input)
}

/// `|t_n⟩ = Σ_i |1⟩^i|0⟩^{n-i}|0⟩^i|1⟩^{n-i} / √(n+1)` on `2n` modes.
pub fn build_t_n<T: Real>(n: usize) -> Result<SparseKet<T>> {
    if n < 1 {
        return Err(invalid("|t_n⟩ needs n >= 1"));
    }
    let amp = real(T::one() / T::from_count(n + 1).sqrt());
    SparseKet::from_terms(2 * n, (0..=n).map(|i| (FockState::new(t_block(n, i)), amp)))
}

/// Teleportation of mode 0 through `|t_n⟩` on modes `1..=2n`.
///
/// The Fourier network mixes modes `0..=n`, which are then measured. A total
/// of `m ∈ [1, n]` detected photons heralds success with the input found in
/// mode `n + m`.
pub fn run_teleport_n<T: Real>(input: &SparseKet<T>, n: usize) -> Result<ProtocolRun<T>> {
    check_single_rail(input)?;
    let resource = build_t_n(n)?;
    let modes = 2 * n + 1;
    let front: Vec<usize> = (0..=n).collect();
    Procedure {
        name: "teleportn".into(),
        ancilla: resource,
        steps: vec![embed(&fourier_network(n)?, &front, modes)?],
        measured: front.clone(),
        acceptance: Acceptance::GroupTotals(vec![GroupRule { positions: front, min: 1, max: n as u32 }]),
        action: single_rail_action(),
        mode_labels: (0..modes).map(|m| m.to_string()).collect(),
    }
    .run(input)
}

/// `|cs_n⟩ = Σ_{i,j} (-1)^{(n-i)(n-j)} |t-block_i⟩|t-block_j⟩ / (n+1)` on `4n` modes.
pub fn build_cs_n<T: Real>(n: usize) -> Result<SparseKet<T>> {
    if n < 1 {
        return Err(invalid("|cs_n⟩ needs n >= 1"));
    }
    let norm = T::one() / T::from_count(n + 1);
    let mut terms = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            let mut occ = t_block(n, i);
            occ.extend(t_block(n, j));
            let sign = if ((n - i) * (n - j)) % 2 == 0 { norm } else { -norm };
            terms.push((FockState::new(occ), real(sign)));
        }
    }
    SparseKet::from_terms(4 * n, terms)
}

/// Controlled phase operations the recursive preparation of `|cs_n⟩` uses.
pub fn cs_prep_gate_count(n: usize) -> Result<usize> {
    if n < 1 {
        return Err(invalid("gate count needs n >= 1"));
    }
    Ok(6 * n - 3)
}

/// Controlled sign flip by teleporting both qubits through an ideal `|cs_n⟩`.
pub fn run_cz_teleported<T: Real>(q1: &SparseKet<T>, q2: &SparseKet<T>, n: usize) -> Result<ProtocolRun<T>> {
    run_cz_teleported_with(q1, q2, n, &build_cs_n(n)?)
}

/// As [`run_cz_teleported`] with a caller-supplied `4n`-mode resource.
///
/// Register (0-based): `q1..q4` on modes 0-3, resource modes `1..=4n` on
/// `4..4n+3`. The first Fourier network mixes `q1` with resource modes
/// `1..=n`, the second mixes `q3` with resource modes `2n+1..=3n`.
pub fn run_cz_teleported_with<T: Real>(
    q1: &SparseKet<T>,
    q2: &SparseKet<T>,
    n: usize,
    resource: &SparseKet<T>,
) -> Result<ProtocolRun<T>> {
    cz_teleport_procedure(q1, q2, n, resource)?.run(&q1.tensor(q2))
}

/// Outcome table of the teleported controlled sign flip for an arbitrary
/// `4n`-mode resource, such as one left by a falsely heralded preparation.
pub(crate) fn cz_teleport_outcomes<T: Real>(
    q1: &SparseKet<T>,
    q2: &SparseKet<T>,
    n: usize,
    resource: &SparseKet<T>,
) -> Result<OutcomeTable<T>> {
    cz_teleport_procedure(q1, q2, n, resource)?.outcomes(&q1.tensor(q2))
}

fn cz_teleport_procedure<T: Real>(
    q1: &SparseKet<T>,
    q2: &SparseKet<T>,
    n: usize,
    resource: &SparseKet<T>,
) -> Result<Procedure<T>> {
    let rail = DualRailQubit::standard(0, 2).expect("two modes");
    for (name, q) in [("first qubit", q1), ("second qubit", q2)] {
        if q.mode_count() != 2 || q.is_empty() || !rail.holds(q) {
            return Err(Error::Precondition(format!("{name} is not a dual-rail qubit state: {q}")));
        }
    }
    if n < 1 {
        return Err(invalid("teleported controlled sign needs n >= 1"));
    }
    if resource.mode_count() != 4 * n {
        return Err(Error::DimensionMismatch { expected: 4 * n, actual: resource.mode_count() });
    }
    let modes = 4 + 4 * n;
    let resource_mode = |k: usize| 3 + k;
    let first: Vec<usize> = std::iter::once(0).chain((1..=n).map(resource_mode)).collect();
    let second: Vec<usize> = std::iter::once(2).chain((2 * n + 1..=3 * n).map(resource_mode)).collect();
    let fourier = fourier_network(n)?;
    let steps = vec![embed(&fourier, &first, modes)?, embed(&fourier, &second, modes)?];
    let measured: Vec<usize> = first.iter().chain(&second).copied().collect();
    let groups = vec![
        GroupRule { positions: (0..=n).collect(), min: 1, max: n as u32 },
        GroupRule { positions: (n + 1..=2 * n + 1).collect(), min: 1, max: n as u32 },
    ];
    let mut mode_labels: Vec<String> = (1..=4).map(|q| format!("q{q}")).collect();
    mode_labels.extend((1..=4 * n).map(|m| m.to_string()));
    Ok(Procedure {
        name: "czn".into(),
        ancilla: resource.clone(),
        steps,
        measured,
        acceptance: Acceptance::GroupTotals(groups),
        action: LogicalAction { basis: dual_rail_basis(2), signs: controlled_sign(), qubits: 2 },
        mode_labels,
    })
}
