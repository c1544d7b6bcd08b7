//! Passive linear optics: phase shifters, beam splitters and general
//! interferometers acting on photon creation operators.
//!
//! A [`ModeUnitary`] `G` maps `a†_i ↦ Σ_j g_ij a†_j`. A Fock state is then
//! transformed as
//!
//! ```text
//! G|n_1..n_m⟩ = Π_i (Σ_j g_ij a†_j)^{n_i} / √(n_i!) |0..0⟩
//! ```
//!
//! Under this row convention, applying `u1` and then `u2` equals applying the
//! matrix product `u1 · u2` (see [`ModeUnitary::then`]).

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::fock::{FockState, SparseKet};
use crate::scalar::Real;

/// `m × m` unitary on mode creation operators.
///
/// Only the modes listed in `active` are mixed; the matrix is the identity on
/// every other mode. `block` is the row-major restriction to `active`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary<T: Real> {
    dim: usize,
    active: Vec<usize>,
    block: Vec<Complex<T>>,
}

impl<T: Real> ModeUnitary<T> {
    pub fn identity(dim: usize) -> Self {
        Self { dim, active: Vec::new(), block: Vec::new() }
    }

    /// Full `dim × dim` matrix in row-major order; checked for unitarity.
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("unitary needs at least one mode"));
        }
        if entries.len() != dim * dim {
            return Err(invalid(format!("{} entries for a {dim}x{dim} matrix", entries.len())));
        }
        let u = Self { dim, active: (0..dim).collect(), block: entries };
        let dev = u.unitarity_deviation();
        if !(dev <= T::UNITARY_TOL) {
            return Err(invalid(format!("matrix is not unitary (max |G†G - I| = {dev})")));
        }
        Ok(u)
    }

    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Modes on which the operator may act non-trivially.
    pub fn active_modes(&self) -> &[usize] {
        &self.active
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        let k = self.active.len();
        match (self.local(i), self.local(j)) {
            (Some(a), Some(b)) => self.block[a * k + b],
            _ if i == j => Complex::new(T::one(), T::zero()),
            _ => Complex::default(),
        }
    }

    /// Dense row-major matrix.
    pub fn to_dense(&self) -> Vec<Complex<T>> {
        let mut out = Vec::with_capacity(self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.push(self.entry(i, j));
            }
        }
        out
    }

    /// Max elementwise `|G†G - I|` over the active block.
    pub fn unitarity_deviation(&self) -> T {
        let k = self.active.len();
        let mut worst = T::zero();
        for i in 0..k {
            for j in 0..k {
                let mut acc = Complex::<T>::default();
                for r in 0..k {
                    acc += self.block[r * k + i].conj() * self.block[r * k + j];
                }
                if i == j {
                    acc -= Complex::new(T::one(), T::zero());
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn adjoint(&self) -> Self {
        let k = self.active.len();
        let mut block = vec![Complex::default(); k * k];
        for i in 0..k {
            for j in 0..k {
                block[j * k + i] = self.block[i * k + j].conj();
            }
        }
        Self { dim: self.dim, active: self.active.clone(), block }
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: rhs.dim });
        }
        let mut active: Vec<usize> = self.active.iter().chain(&rhs.active).copied().collect();
        active.sort_unstable();
        active.dedup();
        let k = active.len();
        let mut block = vec![Complex::default(); k * k];
        for (a, &i) in active.iter().enumerate() {
            for (b, &j) in active.iter().enumerate() {
                block[a * k + b] = active.iter().map(|&r| self.entry(i, r) * rhs.entry(r, j)).sum();
            }
        }
        Ok(Self { dim: self.dim, active, block })
    }

    /// Operator that applies `self` first and `next` afterwards.
    pub fn then(&self, next: &Self) -> Result<Self> {
        self.matmul(next)
    }

    fn local(&self, mode: usize) -> Option<usize> {
        self.active.iter().position(|&m| m == mode)
    }
}

/// Single-mode phase shifter: `|n⟩ ↦ e^{inφ}|n⟩`.
pub fn phase_shifter<T: Real>(phi: T) -> ModeUnitary<T> {
    ModeUnitary { dim: 1, active: vec![0], block: vec![Complex::from_polar(T::one(), phi)] }
}

/// Two-mode beam splitter `[[cos θ, e^{iφ} sin θ], [-e^{-iφ} sin θ, cos θ]]`.
pub fn beam_splitter<T: Real>(theta: T, phi: T) -> ModeUnitary<T> {
    let (s, c) = theta.sin_cos();
    let e = Complex::from_polar(T::one(), phi);
    let re = |x: T| Complex::new(x, T::zero());
    ModeUnitary { dim: 2, active: vec![0, 1], block: vec![re(c), e * s, -(e.conj() * s), re(c)] }
}

/// Three-mode network realizing the nonlinear sign shift on mode 0 when the
/// two ancilla modes start in `|1,0⟩` and are post-selected on `|1,0⟩`.
pub fn ns_matrix<T: Real>() -> ModeUnitary<T> {
    let two = T::lit(2.0);
    let r2 = two.sqrt();
    let half = T::lit(0.5);
    let a = T::one() - r2;
    let b = two.powf(T::lit(-0.25));
    let c = (T::lit(3.0) / r2 - two).sqrt();
    let d = half - T::one() / r2;
    let e = r2 - half;
    let entries = [a, b, c, b, half, d, c, d, e];
    ModeUnitary::from_real(3, &entries).expect("sign-shift network is unitary")
}

/// `(n+1)`-mode discrete Fourier interferometer `ω^{jk}/√(n+1)`, `ω = e^{2πi/(n+1)}`.
pub fn fourier_network<T: Real>(n: usize) -> Result<ModeUnitary<T>> {
    if n < 1 {
        return Err(invalid("Fourier network needs n >= 1"));
    }
    let size = n + 1;
    let norm = T::one() / T::from_count(size).sqrt();
    let step = T::TAU() / T::from_count(size);
    let mut entries = Vec::with_capacity(size * size);
    for j in 0..size {
        for k in 0..size {
            // reduce jk mod (n+1) so the angle stays small
            let angle = step * T::from_count((j * k) % size);
            entries.push(Complex::from_polar(norm, angle));
        }
    }
    Ok(ModeUnitary { dim: size, active: (0..size).collect(), block: entries })
}

/// Places `u` on `target_modes` of a `total_modes` register, identity elsewhere.
pub fn embed<T: Real>(u: &ModeUnitary<T>, target_modes: &[usize], total_modes: usize) -> Result<ModeUnitary<T>> {
    if target_modes.len() != u.dim {
        return Err(invalid(format!("{} target modes for a {}-mode unitary", target_modes.len(), u.dim)));
    }
    let mut seen = vec![false; total_modes];
    for &m in target_modes {
        if m >= total_modes || std::mem::replace(&mut seen[m], true) {
            return Err(invalid(format!("target mode {m} repeated or outside {total_modes} modes")));
        }
    }
    let active = u.active.iter().map(|&a| target_modes[a]).collect();
    Ok(ModeUnitary { dim: total_modes, active, block: u.block.clone() })
}

/// Transforms every term of `k` through `u` by expanding the creation-operator
/// polynomial of each occupied active mode.
pub fn apply<T: Real>(u: &ModeUnitary<T>, k: &SparseKet<T>) -> Result<SparseKet<T>> {
    if u.dim != k.mode_count() {
        return Err(Error::DimensionMismatch { expected: u.dim, actual: k.mode_count() });
    }
    let width = u.active.len();
    let mut expander = Expander::new(u);
    let mut out = SparseKet::zero(k.mode_count());
    for (state, amp) in k.iter() {
        let key: Vec<u32> = u.active.iter().map(|&m| state.get(m)).collect();
        let image = expander.image(&key);
        for (active_occ, coeff) in image {
            let mut occ = state.occupations().to_vec();
            for c in 0..width {
                occ[u.active[c]] = active_occ[c];
            }
            out.accumulate(FockState::new(occ), *amp * coeff);
        }
    }
    out.prune();
    Ok(out)
}

/// Per-invocation cache of the images of active-mode occupation patterns.
struct Expander<'a, T: Real> {
    u: &'a ModeUnitary<T>,
    sqrt: Vec<T>,
    images: HashMap<Vec<u32>, Vec<(Vec<u32>, Complex<T>)>>,
}

impl<'a, T: Real> Expander<'a, T> {
    fn new(u: &'a ModeUnitary<T>) -> Self {
        Self { u, sqrt: vec![T::zero()], images: HashMap::new() }
    }

    fn sqrt_of(&mut self, n: usize) -> T {
        while self.sqrt.len() <= n {
            let next = self.sqrt.len();
            self.sqrt.push(T::from_count(next).sqrt());
        }
        self.sqrt[n]
    }

    fn image(&mut self, input: &[u32]) -> &[(Vec<u32>, Complex<T>)] {
        if !self.images.contains_key(input) {
            let expanded = self.expand(input);
            self.images.insert(input.to_vec(), expanded);
        }
        &self.images[input]
    }

    fn expand(&mut self, input: &[u32]) -> Vec<(Vec<u32>, Complex<T>)> {
        let width = input.len();
        let mut poly: BTreeMap<Vec<u32>, Complex<T>> = BTreeMap::new();
        poly.insert(vec![0; width], Complex::new(T::one(), T::zero()));
        for (row, &n) in input.iter().enumerate() {
            for _ in 0..n {
                let mut next: BTreeMap<Vec<u32>, Complex<T>> = BTreeMap::new();
                for (occ, amp) in &poly {
                    for col in 0..width {
                        let g = self.u.block[row * width + col];
                        if g.re == T::zero() && g.im == T::zero() {
                            continue;
                        }
                        let mut raised = occ.clone();
                        raised[col] += 1;
                        let factor = self.sqrt_of(raised[col] as usize);
                        *next.entry(raised).or_default() += *amp * g * factor;
                    }
                }
                poly = next;
            }
            // 1/√(n!)
            let mut norm = T::one();
            for j in 2..=n as usize {
                norm /= self.sqrt_of(j);
            }
            if n > 1 {
                for amp in poly.values_mut() {
                    *amp *= norm;
                }
            }
        }
        poly.into_iter().filter(|(_, a)| a.norm() >= T::PRUNE).collect()
    }
}
