//! Ideal photon-number-resolving measurement of a subset of modes.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex;

use crate::error::{invalid, Result};
use crate::fock::{FockState, SparseKet};
use crate::scalar::Real;

/// One row of an [`OutcomeTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T: Real> {
    /// Photon counts on the measured modes, in the order they were requested.
    pub pattern: Vec<u32>,
    pub probability: T,
    /// Normalized post-measurement state of the unmeasured modes.
    pub collapsed: SparseKet<T>,
}

/// Every non-zero measurement outcome, sorted lexicographically by pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable<T: Real> {
    measured: Vec<usize>,
    remaining: Vec<usize>,
    entries: Vec<Outcome<T>>,
}

impl<T: Real> OutcomeTable<T> {
    pub fn measured_modes(&self) -> &[usize] {
        &self.measured
    }

    /// Original indices of the modes kept in each collapsed ket.
    pub fn remaining_modes(&self) -> &[usize] {
        &self.remaining
    }

    pub fn entries(&self) -> &[Outcome<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, pattern: &[u32]) -> Option<&Outcome<T>> {
        self.entries
            .binary_search_by(|e| e.pattern.as_slice().cmp(pattern))
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn total_probability(&self) -> T {
        self.entries.iter().map(|e| e.probability).sum()
    }

    /// CSV with columns `pattern,probability,collapsed_state`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "pattern,probability,collapsed_state")?;
        for e in &self.entries {
            let pattern = e.pattern.iter().map(u32::to_string).collect::<Vec<_>>().join(";");
            let json = serde_json::to_string(&e.collapsed.to_json()).map_err(std::io::Error::other)?;
            let p = crate::format::significant(e.probability.to_f64().unwrap_or(f64::NAN), 12);
            writeln!(out, "{pattern},{p},\"{}\"", json.replace('"', "\"\""))?;
        }
        Ok(())
    }
}

fn split_modes(mode_count: usize, modes: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; mode_count];
    for &m in modes {
        if m >= mode_count || std::mem::replace(&mut seen[m], true) {
            return Err(invalid(format!("measured mode {m} repeated or outside {mode_count} modes")));
        }
    }
    Ok((0..mode_count).filter(|&m| !seen[m]).collect())
}

/// Groups terms by their pattern on `modes` without renormalizing.
fn branches<T: Real>(
    k: &SparseKet<T>,
    modes: &[usize],
    remaining: &[usize],
) -> BTreeMap<Vec<u32>, SparseKet<T>> {
    let mut groups: BTreeMap<Vec<u32>, SparseKet<T>> = BTreeMap::new();
    for (state, amp) in k.iter() {
        let pattern: Vec<u32> = modes.iter().map(|&m| state.get(m)).collect();
        let rest = FockState::new(remaining.iter().map(|&m| state.get(m)).collect());
        groups
            .entry(pattern)
            .or_insert_with(|| SparseKet::zero(remaining.len()))
            .accumulate(rest, *amp);
    }
    groups
}

/// Full outcome table for measuring `modes` of `k`.
pub fn measure_modes<T: Real>(k: &SparseKet<T>, modes: &[usize]) -> Result<OutcomeTable<T>> {
    if k.is_empty() {
        return Err(invalid("cannot measure an empty ket"));
    }
    let remaining = split_modes(k.mode_count(), modes)?;
    let entries = branches(k, modes, &remaining)
        .into_iter()
        .filter_map(|(pattern, mut branch)| {
            branch.prune();
            let probability = branch.norm_squared();
            let collapsed = branch.normalized().ok()?;
            Some(Outcome { pattern, probability, collapsed })
        })
        .collect();
    Ok(OutcomeTable { measured: modes.to_vec(), remaining, entries })
}

/// Unnormalized component of `k` with `pattern` on `modes`, as a ket on the
/// remaining modes.
pub fn branch<T: Real>(k: &SparseKet<T>, modes: &[usize], pattern: &[u32]) -> Result<SparseKet<T>> {
    if pattern.len() != modes.len() {
        return Err(invalid(format!("pattern of length {} for {} measured modes", pattern.len(), modes.len())));
    }
    let remaining = split_modes(k.mode_count(), modes)?;
    let terms = k.iter().filter_map(|(state, amp)| {
        modes.iter().zip(pattern).all(|(&m, &n)| state.get(m) == n).then(|| {
            (FockState::new(remaining.iter().map(|&m| state.get(m)).collect()), *amp)
        })
    });
    SparseKet::from_terms(remaining.len(), terms)
}

/// Probability of one pattern and the renormalized collapsed state.
///
/// A pattern that never occurs yields probability 0 and an empty ket.
pub fn project_pattern<T: Real>(k: &SparseKet<T>, modes: &[usize], pattern: &[u32]) -> Result<(T, SparseKet<T>)> {
    let b = branch(k, modes, pattern)?;
    let p = b.norm_squared();
    if b.is_empty() {
        return Ok((T::zero(), b));
    }
    Ok((p, b.scale(Complex::new(T::one() / p.sqrt(), T::zero()))))
}
