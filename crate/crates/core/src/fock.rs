//! Fock-basis states of a multimode bosonic register.
//!
//! A [`FockState`] assigns a photon count to every optical mode; a
//! [`SparseKet`] is a superposition of such basis states with complex
//! amplitudes. Kets are stored in a `BTreeMap`, so iteration (and every
//! serialized form) follows lexicographic order on the occupation tuple.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Occupation-number basis vector `|n_0, n_1, ..., n_{m-1}⟩`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FockState(Vec<u32>);

impl FockState {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self(occupations)
    }

    pub fn vacuum(mode_count: usize) -> Self {
        Self(vec![0; mode_count])
    }

    /// Builds a state from signed counts, rejecting negative entries.
    pub fn try_from_signed(occupations: &[i64]) -> Result<Self> {
        occupations
            .iter()
            .map(|&n| u32::try_from(n).map_err(|_| invalid(format!("negative or oversized occupation {n}"))))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    pub fn total_photons(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Concatenation `|self⟩ ⊗ |other⟩`.
    pub fn concat(&self, other: &FockState) -> FockState {
        let mut occ = Vec::with_capacity(self.0.len() + other.0.len());
        occ.extend_from_slice(&self.0);
        occ.extend_from_slice(&other.0);
        FockState(occ)
    }
}

impl From<Vec<u32>> for FockState {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Superposition of Fock basis states over a fixed number of modes.
///
/// Amplitudes smaller than [`Real::PRUNE`] are never stored. Kets need not be
/// normalized: post-selected branches carry their acceptance amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseKet<T: Real> {
    mode_count: usize,
    terms: BTreeMap<FockState, Complex<T>>,
}

impl<T: Real> SparseKet<T> {
    /// The zero vector on `mode_count` modes.
    pub fn zero(mode_count: usize) -> Self {
        Self { mode_count, terms: BTreeMap::new() }
    }

    pub fn vacuum(mode_count: usize) -> Self {
        Self::basis(FockState::vacuum(mode_count))
    }

    pub fn basis(state: FockState) -> Self {
        let mode_count = state.mode_count();
        let mut terms = BTreeMap::new();
        terms.insert(state, Complex::new(T::one(), T::zero()));
        Self { mode_count, terms }
    }

    /// Collects `(state, amplitude)` pairs, summing duplicates and pruning.
    pub fn from_terms<I>(mode_count: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FockState, Complex<T>)>,
    {
        let mut ket = Self::zero(mode_count);
        for (state, amp) in terms {
            if state.mode_count() != mode_count {
                return Err(Error::DimensionMismatch { expected: mode_count, actual: state.mode_count() });
            }
            ket.accumulate(state, amp);
        }
        ket.prune();
        Ok(ket)
    }

    /// Adds `amp` to the coefficient of `state` without pruning.
    pub(crate) fn accumulate(&mut self, state: FockState, amp: Complex<T>) {
        *self.terms.entry(state).or_default() += amp;
    }

    pub(crate) fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() >= T::PRUNE);
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic occupation order.
    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, state: &FockState) -> Complex<T> {
        self.terms.get(state).copied().unwrap_or_default()
    }

    pub fn norm_squared(&self) -> T {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// Largest photon number over all terms; 0 for the empty ket.
    pub fn max_photons(&self) -> u32 {
        self.terms.keys().map(FockState::total_photons).max().unwrap_or(0)
    }

    /// Total photon number if every term carries the same count.
    pub fn photon_number(&self) -> Option<u32> {
        let mut counts = self.terms.keys().map(FockState::total_photons);
        let first = counts.next()?;
        counts.all(|c| c == first).then_some(first)
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let mut out = Self {
            mode_count: self.mode_count,
            terms: self.terms.iter().map(|(s, a)| (s.clone(), *a * factor)).collect(),
        };
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_modes(other)?;
        let mut out = self.clone();
        for (s, a) in &other.terms {
            out.accumulate(s.clone(), *a);
        }
        out.prune();
        Ok(out)
    }

    /// Unit-norm copy; fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_squared();
        if n <= T::zero() {
            return Err(invalid("cannot normalize a zero-norm ket"));
        }
        Ok(self.scale(Complex::new(T::one() / n.sqrt(), T::zero())))
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_modes(other)?;
        let (small, large, conj_small) = if self.len() <= other.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex::default();
        for (s, a) in &small.terms {
            if let Some(b) = large.terms.get(s) {
                acc += if conj_small { a.conj() * b } else { b.conj() * a };
            }
        }
        Ok(acc)
    }

    /// Tensor product; the modes of `other` follow those of `self`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.mode_count + other.mode_count);
        for (sa, a) in &self.terms {
            for (sb, b) in &other.terms {
                out.accumulate(sa.concat(sb), *a * b);
            }
        }
        out.prune();
        out
    }

    /// Reorders modes: mode `i` of the result is mode `order[i]` of `self`.
    pub fn permute_modes(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.mode_count)?;
        let terms = self.terms.iter().map(|(s, a)| {
            let occ = order.iter().map(|&m| s.get(m)).collect::<Vec<_>>();
            (FockState(occ), *a)
        });
        Self::from_terms(self.mode_count, terms)
    }

    /// Multiplies each term by `exp(i Σ phase_k · n_{mode_k})`.
    pub fn apply_phases(&self, phases: &[(usize, T)]) -> Result<Self> {
        if let Some(&(m, _)) = phases.iter().find(|(m, _)| *m >= self.mode_count) {
            return Err(invalid(format!("phase on mode {m} outside {} modes", self.mode_count)));
        }
        let terms = self.terms.iter().map(|(s, a)| {
            let angle = phases
                .iter()
                .fold(T::zero(), |acc, &(m, phi)| acc + phi * T::from_count(s.get(m) as usize));
            (s.clone(), *a * Complex::from_polar(T::one(), angle))
        });
        Self::from_terms(self.mode_count, terms)
    }

    fn check_modes(&self, other: &Self) -> Result<()> {
        if self.mode_count != other.mode_count {
            return Err(Error::DimensionMismatch { expected: self.mode_count, actual: other.mode_count });
        }
        Ok(())
    }

    /// JSON form `{"modes": m, "terms": [{"occ": [..], "re": x, "im": y}, ...]}`.
    pub fn to_json(&self) -> KetJson {
        KetJson {
            modes: self.mode_count,
            terms: self
                .terms
                .iter()
                .map(|(s, a)| TermJson {
                    occ: s.0.clone(),
                    re: a.re.to_f64().unwrap_or(f64::NAN),
                    im: a.im.to_f64().unwrap_or(f64::NAN),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &KetJson) -> Result<Self> {
        let terms = json.terms.iter().map(|t| {
            let amp = Complex::new(T::lit(t.re), T::lit(t.im));
            (FockState(t.occ.clone()), amp)
        });
        Self::from_terms(json.modes, terms)
    }
}

impl<T: Real> fmt::Display for SparseKet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", a.re, a.im, s)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KetJson {
    pub modes: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub occ: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// Single-term ket from signed occupations.
pub fn ket_basis<T: Real>(occupations: &[i64]) -> Result<SparseKet<T>> {
    FockState::try_from_signed(occupations).map(SparseKet::basis)
}

pub fn tensor<T: Real>(a: &SparseKet<T>, b: &SparseKet<T>) -> SparseKet<T> {
    a.tensor(b)
}

pub fn norm_squared<T: Real>(k: &SparseKet<T>) -> T {
    k.norm_squared()
}

/// `|⟨a|b⟩|² / (‖a‖²‖b‖²)`: 1 exactly when the kets agree up to a complex scalar.
pub fn fidelity_up_to_phase<T: Real>(a: &SparseKet<T>, b: &SparseKet<T>) -> Result<T> {
    let (na, nb) = (a.norm_squared(), b.norm_squared());
    if na <= T::zero() || nb <= T::zero() {
        return Err(invalid("fidelity of a zero-norm ket"));
    }
    let ov = a.inner(b)?.norm_sqr() / (na * nb);
    Ok(ov.min(T::one()))
}

pub(crate) fn check_permutation(order: &[usize], mode_count: usize) -> Result<()> {
    if order.len() != mode_count {
        return Err(invalid(format!("permutation of length {} for {mode_count} modes", order.len())));
    }
    let mut seen = vec![false; mode_count];
    for &m in order {
        if m >= mode_count || std::mem::replace(&mut seen[m], true) {
            return Err(invalid(format!("mode {m} repeated or out of range")));
        }
    }
    Ok(())
}

/// Dual-rail qubit: one photon shared between two modes.
///
/// Logical 0 puts the photon in `mode_zero`, logical 1 in `mode_one`. In the
/// conventional two-mode layout `(first, second)`, logical 1 occupies the
/// first mode and logical 0 the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualRailQubit {
    mode_zero: usize,
    mode_one: usize,
}

impl DualRailQubit {
    pub fn new(mode_zero: usize, mode_one: usize, mode_count: usize) -> Result<Self> {
        if mode_zero == mode_one {
            return Err(invalid("dual-rail modes must differ"));
        }
        if mode_zero >= mode_count || mode_one >= mode_count {
            return Err(invalid(format!("dual-rail modes ({mode_zero}, {mode_one}) outside {mode_count} modes")));
        }
        Ok(Self { mode_zero, mode_one })
    }

    /// Layout `(first, second)` with logical 1 in `first`.
    pub fn standard(first: usize, mode_count: usize) -> Result<Self> {
        Self::new(first + 1, first, mode_count)
    }

    pub fn mode_zero(&self) -> usize {
        self.mode_zero
    }

    pub fn mode_one(&self) -> usize {
        self.mode_one
    }

    /// Logical value of a Fock state, if it holds exactly one photon on this rail pair.
    pub fn read(&self, state: &FockState) -> Option<bool> {
        match (state.get(self.mode_zero), state.get(self.mode_one)) {
            (1, 0) => Some(false),
            (0, 1) => Some(true),
            _ => None,
        }
    }

    /// Whether every term of `ket` is a valid logical state of this qubit.
    pub fn holds(&self, ket: &SparseKet<impl Real>) -> bool {
        ket.iter().all(|(s, _)| self.read(s).is_some())
    }

    /// `a|0⟩_L + b|1⟩_L` on a standalone two-mode register `(first, second)`.
    pub fn encode<T: Real>(a: Complex<T>, b: Complex<T>) -> SparseKet<T> {
        let terms = [(FockState(vec![0, 1]), a), (FockState(vec![1, 0]), b)];
        SparseKet::from_terms(2, terms).expect("two-mode terms")
    }
}
