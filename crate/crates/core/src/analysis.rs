//! Closed-form success and false-positive rates for teleportation through
//! `|t_n⟩` with lossy detectors, the squared variants for the teleported
//! controlled sign flip, and searches over the resource size `n`.

use std::fmt;
use std::str::FromStr;

use crate::detector::ProtocolStats;
use crate::error::{invalid, Error, Result};
use crate::format::significant;
use crate::scalar::Real;

/// Default bound on `n` for critical-point and threshold searches.
pub const DEFAULT_N_MAX: usize = 1000;

/// Whether a quantity refers to one teleportation or to the controlled sign
/// flip built from two independent ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Teleport,
    Cz,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Teleport => "teleport",
            Mode::Cz => "cz",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "teleport" => Ok(Mode::Teleport),
            "cz" => Ok(Mode::Cz),
            other => Err(invalid(format!("unknown analysis mode `{other}` (expected teleport or cz)"))),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 1 {
        return Err(invalid("resource size n must be at least 1"));
    }
    Ok(())
}

fn check_probability<T: Real>(name: &str, p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(invalid(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// `p_s(n, l) = Σ_{i=1}^{n} (1-l)^i / (n+1)` summed term by term.
pub fn ps_teleport_sum<T: Real>(n: usize, l: T) -> Result<T> {
    check_n(n)?;
    check_probability("loss", l)?;
    let q = T::one() - l;
    let mut power = T::one();
    let mut total = T::zero();
    for _ in 0..n {
        power *= q;
        total += power;
    }
    Ok(total / T::from_count(n + 1))
}

/// `p_s(n, l)` through the geometric closed form `(1-l)(1-(1-l)^n) / (l(n+1))`.
///
/// At `l = 0` the closed form is `0/0`, so the sum is used instead.
pub fn ps_teleport<T: Real>(n: usize, l: T) -> Result<T> {
    check_n(n)?;
    check_probability("loss", l)?;
    if l == T::zero() {
        return ps_teleport_sum(n, l);
    }
    let q = T::one() - l;
    let one_minus_qn = -(T::from_count(n) * (-l).ln_1p()).exp_m1();
    Ok(q * one_minus_qn / (l * T::from_count(n + 1)))
}

/// `p_d(n, l)` evaluated as the double sum
/// `Σ_{i=1}^{n} Σ_{j=0}^{n+1-i} C(j+i, j) l^j (1-l)^i / (n+1)`.
///
/// Each inner term is built from the previous one by the ratio
/// `l (j+i) / j`, so no binomial coefficient is formed explicitly.
pub fn pd_teleport<T: Real>(n: usize, l: T) -> Result<T> {
    check_n(n)?;
    check_probability("loss", l)?;
    let q = T::one() - l;
    let mut total = T::zero();
    for i in 1..=n {
        let mut term = q.powi(i as i32);
        let mut inner = term;
        for j in 1..=(n + 1 - i) {
            term = term * l * T::from_count(j + i) / T::from_count(j);
            inner += term;
        }
        total += inner;
    }
    Ok(total / T::from_count(n + 1))
}

/// `p_f(n, l) = 1 - p_s/p_d`, reported as 0 when `p_d = 0`.
pub fn pf_teleport<T: Real>(n: usize, l: T) -> Result<T> {
    Ok(TeleportAnalysis::new(n, l)?.p_f)
}

/// Success probability of the teleported controlled sign flip, `p_s²`.
pub fn ps_cz<T: Real>(n: usize, l: T) -> Result<T> {
    let p = ps_teleport(n, l)?;
    Ok(p * p)
}

/// False-positive rate of the teleported controlled sign flip, `1 - (p_s/p_d)²`.
pub fn pf_cz<T: Real>(n: usize, l: T) -> Result<T> {
    Ok(TeleportAnalysis::new(n, l)?.cz_stats().p_f)
}

/// Closed-form probabilities for one `(n, l)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportAnalysis<T: Real> {
    pub n: usize,
    pub l: T,
    pub p_s: T,
    pub p_d: T,
    pub p_f: T,
    pub degenerate: bool,
}

impl<T: Real> TeleportAnalysis<T> {
    pub fn new(n: usize, l: T) -> Result<Self> {
        let p_s = ps_teleport(n, l)?;
        let p_d = pd_teleport(n, l)?;
        let stats = ProtocolStats::from_parts(p_s, p_d);
        Ok(Self { n, l, p_s, p_d, p_f: stats.p_f, degenerate: stats.degenerate })
    }

    pub fn stats(&self) -> ProtocolStats<T> {
        ProtocolStats::from_parts(self.p_s, self.p_d)
    }

    /// Both teleportations of the controlled sign flip succeed independently.
    pub fn cz_stats(&self) -> ProtocolStats<T> {
        self.stats().compose(&self.stats())
    }

    pub fn for_mode(&self, mode: Mode) -> ProtocolStats<T> {
        match mode {
            Mode::Teleport => self.stats(),
            Mode::Cz => self.cz_stats(),
        }
    }
}

/// Resource size maximizing the success probability at fixed loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint<T: Real> {
    pub n_c: usize,
    pub p_s_max: T,
    pub p_f_at_nc: T,
    /// False when the maximum sits on the scan boundary `n_max`.
    pub converged: bool,
}

/// Scans `n = 1..=n_max` for the largest success probability in `mode`.
/// Ties go to the smaller `n`.
pub fn find_nc<T: Real>(l: T, n_max: usize, mode: Mode) -> Result<CriticalPoint<T>> {
    if !(l > T::zero() && l <= T::one()) {
        return Err(invalid(format!("critical-point search needs 0 < l <= 1, got {l}")));
    }
    check_n(n_max)?;
    let mut best_n = 1;
    let mut best = TeleportAnalysis::new(1, l)?.for_mode(mode);
    for n in 2..=n_max {
        let p_s = match mode {
            Mode::Teleport => ps_teleport(n, l)?,
            Mode::Cz => ps_cz(n, l)?,
        };
        if p_s > best.p_s {
            best_n = n;
            best = TeleportAnalysis::new(n, l)?.for_mode(mode);
        }
    }
    Ok(CriticalPoint { n_c: best_n, p_s_max: best.p_s, p_f_at_nc: best.p_f, converged: best_n < n_max || n_max == 1 })
}

/// Loss and resource size needed to reach a target success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub target: f64,
    pub mode: Mode,
    /// Largest loss at which some `n <= n_max` reaches the target.
    pub l_required: f64,
    /// `l_required` rounded to two significant figures.
    pub l_reported: f64,
    /// Critical `n` at `l_reported`.
    pub n_required: usize,
    /// Critical `n` at `l_required` itself.
    pub n_at_l_required: usize,
}

fn best_ps(l: f64, n_max: usize, mode: Mode) -> Result<f64> {
    if l == 0.0 {
        let p = n_max as f64 / (n_max as f64 + 1.0);
        return Ok(if mode == Mode::Cz { p * p } else { p });
    }
    Ok(find_nc(l, n_max, mode)?.p_s_max)
}

/// Bisects on `l` for the largest loss whose optimal `n` still reaches
/// `target`, to an absolute tolerance of `1e-7` or better.
pub fn threshold(target: f64, mode: Mode, n_max: usize) -> Result<Threshold> {
    if !(target > 0.0 && target < 1.0) {
        return Err(invalid(format!("target must lie in (0, 1), got {target}")));
    }
    check_n(n_max)?;
    if best_ps(0.0, n_max, mode)? < target {
        return Err(Error::Unreachable { target, n_max });
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-7 * lo.max(1e-3) {
        let mid = 0.5 * (lo + hi);
        if best_ps(mid, n_max, mode)? >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let l_required = lo;
    let l_reported: f64 = significant(l_required, 2).parse().expect("formatted float parses");
    let n_at = |l: f64| -> Result<usize> { if l > 0.0 { Ok(find_nc(l, n_max, mode)?.n_c) } else { Ok(n_max) } };
    Ok(Threshold {
        target,
        mode,
        l_required,
        l_reported,
        n_required: n_at(l_reported)?,
        n_at_l_required: n_at(l_required)?,
    })
}

/// Effect of a second detection stage that catches lost photons with
/// per-detector loss probability `p`: returns the reduced teleportation
/// success rate `(1-p)^{2n}` and the rejected fraction `1-(1-p)^{n-1}`.
pub fn second_stage_tradeoff<T: Real>(p: T, n: usize) -> Result<(T, T)> {
    check_n(n)?;
    check_probability("detector loss", p)?;
    let q = T::one() - p;
    Ok((q.powi(2 * n as i32), T::one() - q.powi(n as i32 - 1)))
}
