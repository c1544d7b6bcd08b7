//! Imperfect photon-number-resolving detectors.
//!
//! Each detector misses every arriving photon independently with probability
//! `l` and adds Poisson-distributed spurious counts with mean `g`. These are
//! applied classically to the ideal outcome table of a measurement to obtain
//! the probability that an operation succeeds and is correctly registered
//! (`p_s`), the probability that the detectors report success (`p_d`), and the
//! fraction of reported successes that are false (`p_f`).

use crate::error::{invalid, Result};
use crate::measure::OutcomeTable;
use crate::scalar::Real;

/// Loss and noise parameters shared by every detector in a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel<T: Real> {
    loss: T,
    noise: T,
    poisson_cutoff_mass: T,
}

impl<T: Real> DetectorModel<T> {
    pub fn new(loss: T, noise: T) -> Result<Self> {
        Self::with_cutoff(loss, noise, T::lit(1e-12))
    }

    pub fn with_cutoff(loss: T, noise: T, poisson_cutoff_mass: T) -> Result<Self> {
        if !(loss >= T::zero() && loss <= T::one()) {
            return Err(invalid(format!("loss {loss} outside [0, 1]")));
        }
        if !(noise >= T::zero()) || !noise.is_finite() {
            return Err(invalid(format!("noise {noise} must be finite and non-negative")));
        }
        if !(poisson_cutoff_mass > T::zero() && poisson_cutoff_mass < T::one()) {
            return Err(invalid(format!("cutoff mass {poisson_cutoff_mass} outside (0, 1)")));
        }
        Ok(Self { loss, noise, poisson_cutoff_mass })
    }

    pub fn perfect() -> Self {
        Self::new(T::zero(), T::zero()).expect("valid")
    }

    pub fn loss(&self) -> T {
        self.loss
    }

    pub fn noise(&self) -> T {
        self.noise
    }

    pub fn poisson_cutoff_mass(&self) -> T {
        self.poisson_cutoff_mass
    }

    /// Smallest `K` whose Poisson tail `P(k > K)` is below the cutoff mass.
    pub fn poisson_cutoff(&self) -> usize {
        let mut cdf = T::zero();
        let mut k = 0;
        loop {
            cdf += p_noise(k, self.noise);
            if T::one() - cdf < self.poisson_cutoff_mass || k >= 10_000 {
                return k;
            }
            k += 1;
        }
    }
}

fn binomial<T: Real>(n: usize, k: usize) -> T {
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, i| acc * T::from_count(n - i) / T::from_count(i + 1))
}

/// Probability that `registered` of `arrived` photons are seen, each missed with probability `l`.
pub fn p_loss<T: Real>(registered: usize, arrived: usize, l: T) -> T {
    if registered > arrived {
        return T::zero();
    }
    let kept = (T::one() - l).powi(registered as i32);
    let lost = l.powi((arrived - registered) as i32);
    binomial::<T>(arrived, registered) * kept * lost
}

/// Poisson probability of exactly `n` noise counts with mean `g`.
pub fn p_noise<T: Real>(n: usize, g: T) -> T {
    (1..=n).fold((-g).exp(), |acc, k| acc * g / T::from_count(k))
}

/// Distribution of the count a detector reports, indexed by registered count.
#[derive(Debug, Clone, PartialEq)]
pub struct RegistrationDistribution<T: Real> {
    probabilities: Vec<T>,
}

impl<T: Real> RegistrationDistribution<T> {
    pub fn probability(&self, registered: usize) -> T {
        self.probabilities.get(registered).copied().unwrap_or_else(T::zero)
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    /// Largest count with stored probability.
    pub fn max_count(&self) -> usize {
        self.probabilities.len().saturating_sub(1)
    }

    pub fn total(&self) -> T {
        self.probabilities.iter().copied().sum()
    }

    /// Distribution of the sum of two independent counts.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.probabilities.len() + other.probabilities.len() - 1];
        for (i, &a) in self.probabilities.iter().enumerate() {
            for (j, &b) in other.probabilities.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { probabilities: out }
    }

    fn point(count: usize) -> Self {
        let mut probabilities = vec![T::zero(); count + 1];
        probabilities[count] = T::one();
        Self { probabilities }
    }
}

/// Loss and noise convolved for a detector hit by `arrived` photons.
pub fn registration_distribution<T: Real>(arrived: usize, model: &DetectorModel<T>) -> RegistrationDistribution<T> {
    registration_with_cutoff(arrived, model, model.poisson_cutoff())
}

fn registration_with_cutoff<T: Real>(arrived: usize, model: &DetectorModel<T>, cutoff: usize) -> RegistrationDistribution<T> {
    let kept: Vec<T> = (0..=arrived).map(|n| p_loss(n, arrived, model.loss)).collect();
    let noise: Vec<T> = (0..=cutoff).map(|k| p_noise(k, model.noise)).collect();
    let mut probabilities = vec![T::zero(); arrived + cutoff + 1];
    for (n, &a) in kept.iter().enumerate() {
        for (k, &b) in noise.iter().enumerate() {
            probabilities[n + k] += a * b;
        }
    }
    RegistrationDistribution { probabilities }
}

/// A set of detector positions whose summed registered count must lie in `[min, max]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRule {
    pub positions: Vec<usize>,
    pub min: u32,
    pub max: u32,
}

/// Which registered patterns a protocol treats as success.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acceptance {
    /// Exactly this count on every measured mode.
    Pattern(Vec<u32>),
    /// Every group's total count within its bounds; positions outside all
    /// groups are unconstrained.
    GroupTotals(Vec<GroupRule>),
}

impl Acceptance {
    pub fn accepts(&self, pattern: &[u32]) -> bool {
        match self {
            Acceptance::Pattern(p) => p.as_slice() == pattern,
            Acceptance::GroupTotals(groups) => groups.iter().all(|g| {
                let total: u32 = g.positions.iter().map(|&i| pattern.get(i).copied().unwrap_or(0)).sum();
                (g.min..=g.max).contains(&total)
            }),
        }
    }

    /// Checks that the rule addresses exactly `width` detector positions.
    pub fn validate(&self, width: usize) -> Result<()> {
        match self {
            Acceptance::Pattern(p) if p.len() != width => {
                Err(invalid(format!("accepted pattern of length {} for {width} detectors", p.len())))
            }
            Acceptance::Pattern(_) => Ok(()),
            Acceptance::GroupTotals(groups) => {
                let mut seen = vec![false; width];
                for g in groups {
                    if g.min > g.max {
                        return Err(invalid(format!("empty range {}..={}", g.min, g.max)));
                    }
                    for &i in &g.positions {
                        if i >= width || std::mem::replace(&mut seen[i], true) {
                            return Err(invalid(format!("group position {i} repeated or outside {width} detectors")));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// Success, reported-success and false-positive probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolStats<T: Real> {
    pub p_s: T,
    pub p_d: T,
    pub p_f: T,
    /// Set when `p_d = 0`, in which case `p_f` is reported as 0.
    pub degenerate: bool,
}

impl<T: Real> ProtocolStats<T> {
    pub fn from_parts(p_s: T, p_d: T) -> Self {
        if p_d > T::zero() {
            let p_f = (T::one() - p_s / p_d).max(T::zero());
            Self { p_s, p_d, p_f, degenerate: false }
        } else {
            Self { p_s, p_d, p_f: T::zero(), degenerate: true }
        }
    }

    /// Two stages with disjoint detectors run back to back.
    pub fn compose(&self, next: &Self) -> Self {
        Self::from_parts(self.p_s * next.p_s, self.p_d * next.p_d)
    }
}

/// Applies the detector model to every ideal outcome.
///
/// `p_s` sums outcomes whose arrived pattern is accepted and is registered
/// exactly; `p_d` sums the probability that the registered pattern is accepted
/// regardless of what arrived.
pub fn protocol_stats<T: Real>(
    outcomes: &OutcomeTable<T>,
    acceptance: &Acceptance,
    model: &DetectorModel<T>,
) -> Result<ProtocolStats<T>> {
    let width = outcomes.measured_modes().len();
    acceptance.validate(width)?;
    let max_arrived = outcomes
        .entries()
        .iter()
        .flat_map(|e| e.pattern.iter().copied())
        .max()
        .unwrap_or(0) as usize;
    let cutoff = model.poisson_cutoff();
    let dists: Vec<_> = (0..=max_arrived).map(|n| registration_with_cutoff(n, model, cutoff)).collect();

    let mut p_s = T::zero();
    let mut p_d = T::zero();
    for e in outcomes.entries() {
        if acceptance.accepts(&e.pattern) {
            let exact: T = e.pattern.iter().map(|&n| dists[n as usize].probability(n as usize)).product();
            p_s += e.probability * exact;
        }
        p_d += e.probability * reported_acceptance(&e.pattern, acceptance, &dists);
    }
    Ok(ProtocolStats::from_parts(p_s, p_d))
}

/// `protocol_stats` for a single accepted pattern.
pub fn pattern_stats<T: Real>(
    outcomes: &OutcomeTable<T>,
    accepted_pattern: &[u32],
    model: &DetectorModel<T>,
) -> Result<ProtocolStats<T>> {
    protocol_stats(outcomes, &Acceptance::Pattern(accepted_pattern.to_vec()), model)
}

/// Probability that detectors receiving `arrived` register a pattern that
/// `acceptance` accepts.
pub fn reported_acceptance_probability<T: Real>(
    arrived: &[u32],
    acceptance: &Acceptance,
    model: &DetectorModel<T>,
) -> Result<T> {
    acceptance.validate(arrived.len())?;
    let max_arrived = arrived.iter().copied().max().unwrap_or(0) as usize;
    let cutoff = model.poisson_cutoff();
    let dists: Vec<_> = (0..=max_arrived).map(|n| registration_with_cutoff(n, model, cutoff)).collect();
    Ok(reported_acceptance(arrived, acceptance, &dists))
}

fn reported_acceptance<T: Real>(arrived: &[u32], acceptance: &Acceptance, dists: &[RegistrationDistribution<T>]) -> T {
    match acceptance {
        Acceptance::Pattern(target) => arrived
            .iter()
            .zip(target)
            .map(|(&a, &t)| dists[a as usize].probability(t as usize))
            .product(),
        Acceptance::GroupTotals(groups) => groups
            .iter()
            .map(|g| {
                let total = g
                    .positions
                    .iter()
                    .fold(RegistrationDistribution::point(0), |acc, &i| acc.convolve(&dists[arrived[i] as usize]));
                (g.min..=g.max).map(|t| total.probability(t as usize)).sum::<T>()
            })
            .product(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockState, SparseKet};
    use crate::measure::measure_modes;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex;
    use proptest::prelude::*;

    type M = DetectorModel<f64>;

    #[test]
    fn loss_examples() {
        assert_eq!(p_loss(2, 2, 0.0), 1.0);
        assert_eq!(p_loss(3, 2, 0.4), 0.0);
        // C(2,1)·0.9·0.1
        assert_abs_diff_eq!(p_loss(1, 2, 0.1), 0.18, epsilon = 1e-15);
        assert_eq!(p_loss(0, 0, 0.5), 1.0);
    }

    #[test]
    fn noise_examples() {
        assert_eq!(p_noise(0, 0.0), 1.0);
        assert_eq!(p_noise(3, 0.0), 0.0);
        assert_abs_diff_eq!(p_noise(0, 0.3), (-0.3f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(p_noise(2, 0.1), 0.01 * (-0.1f64).exp() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p_noise(2, 0.1), 0.004524, epsilon = 1e-6);
    }

    #[test]
    fn registration_examples() {
        let perfect = M::perfect();
        let d = registration_distribution(1, &perfect);
        assert_eq!(d.probability(1), 1.0);
        assert_eq!(d.total(), 1.0);

        let d = registration_distribution(0, &M::new(0.7, 0.0).unwrap());
        assert_eq!(d.probability(0), 1.0);

        // 0.9·e^{-0.1} + 0.1·0.1·e^{-0.1}
        let d = registration_distribution(1, &M::new(0.1, 0.1).unwrap());
        let e = (-0.1f64).exp();
        assert_abs_diff_eq!(d.probability(1), 0.9 * e + 0.01 * e, epsilon = 1e-15);
        assert_abs_diff_eq!(d.probability(1), 0.8233, epsilon = 2e-4);
    }

    #[test]
    fn cutoff_is_minimal() {
        let m = M::new(0.0, 0.1).unwrap();
        let k = m.poisson_cutoff();
        let tail = |k: usize| 1.0 - (0..=k).map(|i| p_noise(i, 0.1)).sum::<f64>();
        assert!(tail(k) < 1e-12);
        assert!(tail(k - 1) >= 1e-12);
        assert_eq!(M::perfect().poisson_cutoff(), 0);
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(M::new(-0.1, 0.0).is_err());
        assert!(M::new(1.1, 0.0).is_err());
        assert!(M::new(0.1, -1.0).is_err());
        assert!(M::new(f64::NAN, 0.0).is_err());
    }

    fn table(terms: &[(&[u32], f64)], modes: usize) -> OutcomeTable<f64> {
        let ket = SparseKet::from_terms(
            modes,
            terms.iter().map(|(o, a)| (FockState::new(o.to_vec()), Complex::new(a.sqrt(), 0.0))),
        )
        .unwrap();
        measure_modes(&ket, &(0..modes).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn perfect_detectors_never_misreport() {
        let t = table(&[(&[1, 0], 0.25), (&[0, 1], 0.25), (&[2, 0], 0.5)], 2);
        let s = pattern_stats(&t, &[1, 0], &M::perfect()).unwrap();
        assert_abs_diff_eq!(s.p_s, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(s.p_d, 0.25, epsilon = 1e-15);
        assert_eq!(s.p_f, 0.0);
        assert!(!s.degenerate);
    }

    #[test]
    fn degenerate_acceptance_flagged() {
        let t = table(&[(&[1, 0], 1.0)], 2);
        let s = pattern_stats(&t, &[3, 3], &M::perfect()).unwrap();
        assert_eq!(s.p_d, 0.0);
        assert_eq!(s.p_f, 0.0);
        assert!(s.degenerate);
    }

    #[test]
    fn acceptance_shape_checked() {
        let t = table(&[(&[1, 0], 1.0)], 2);
        assert!(pattern_stats(&t, &[1], &M::perfect()).is_err());
        let bad = Acceptance::GroupTotals(vec![GroupRule { positions: vec![0, 0], min: 1, max: 1 }]);
        assert!(protocol_stats(&t, &bad, &M::perfect()).is_err());
    }

    #[test]
    fn group_totals_match_pattern_enumeration() {
        // total in [1,1] over two detectors == patterns (1,0) or (0,1)
        let t = table(&[(&[1, 0], 0.3), (&[0, 1], 0.2), (&[1, 1], 0.4), (&[0, 0], 0.1)], 2);
        let m = M::new(0.2, 0.05).unwrap();
        let group = Acceptance::GroupTotals(vec![GroupRule { positions: vec![0, 1], min: 1, max: 1 }]);
        let g = protocol_stats(&t, &group, &m).unwrap();
        let a = pattern_stats(&t, &[1, 0], &m).unwrap();
        let b = pattern_stats(&t, &[0, 1], &m).unwrap();
        assert_abs_diff_eq!(g.p_d, a.p_d + b.p_d, epsilon = 1e-14);
        assert_abs_diff_eq!(g.p_s, a.p_s + b.p_s, epsilon = 1e-14);
    }

    /// Joint probability of a registered pattern by explicit enumeration of
    /// every (kept, noise) split on every detector.
    fn brute_force_joint(arrived: &[usize], registered: &[usize], l: f64, g: f64) -> f64 {
        fn rec(i: usize, arrived: &[usize], registered: &[usize], l: f64, g: f64) -> f64 {
            if i == arrived.len() {
                return 1.0;
            }
            let mut p = 0.0;
            for kept in 0..=arrived[i] {
                if kept > registered[i] {
                    break;
                }
                let noise = registered[i] - kept;
                let binom = (0..kept).fold(1.0, |a, j| a * (arrived[i] - j) as f64 / (j + 1) as f64);
                let pl = binom * (1.0 - l).powi(kept as i32) * l.powi((arrived[i] - kept) as i32);
                let fact: f64 = (1..=noise).map(|j| j as f64).product();
                let pn = g.powi(noise as i32) * (-g).exp() / fact;
                p += pl * pn * rec(i + 1, arrived, registered, l, g);
            }
            p
        }
        rec(0, arrived, registered, l, g)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn registration_normalized(n in 0usize..=10, l in 0.0f64..=1.0, g in 0.0f64..=1.0) {
            let m = M::new(l, g).unwrap();
            let d = registration_distribution(n, &m);
            prop_assert!((d.total() - 1.0).abs() <= 1e-12 + 1e-12);
            prop_assert!(d.probabilities().iter().all(|&p| p >= 0.0));
        }

        #[test]
        fn noiseless_never_gains_lossless_never_drops(n in 0usize..=10, x in 0.0f64..=1.0) {
            let d = registration_distribution(n, &M::new(x, 0.0).unwrap());
            prop_assert!(d.probabilities().iter().skip(n + 1).all(|&p| p == 0.0));
            let d = registration_distribution(n, &M::new(0.0, x).unwrap());
            prop_assert!(d.probabilities().iter().take(n).all(|&p| p == 0.0));
        }

        // Holds for l, g <= 0.2 when no detector sees more than 3 photons; at
        // higher loss a noise count can restore a lost photon and raise p_s.
        #[test]
        fn success_monotone_in_loss_and_noise(l in 0.0f64..0.19, g in 0.0f64..0.19, dl in 0.0f64..0.01, dg in 0.0f64..0.01) {
            let t = table(&[(&[1, 0, 1, 0], 0.0625), (&[1, 1, 0, 0], 0.3), (&[0, 0, 1, 0], 0.2), (&[2, 0, 1, 0], 0.4375)], 4);
            let acc = [1, 0, 1, 0];
            let base = pattern_stats(&t, &acc, &M::new(l, g).unwrap()).unwrap();
            let more_loss = pattern_stats(&t, &acc, &M::new(l + dl, g).unwrap()).unwrap();
            let more_noise = pattern_stats(&t, &acc, &M::new(l, g + dg).unwrap()).unwrap();
            prop_assert!(more_loss.p_s <= base.p_s + 1e-15);
            prop_assert!(more_noise.p_s <= base.p_s + 1e-15);
            prop_assert!(base.p_s <= base.p_d + 1e-15);
        }

        #[test]
        fn independence_factorization(
            arrived in prop::collection::vec(0usize..3, 2..=3),
            registered in prop::collection::vec(0usize..4, 3),
            l in 0.0f64..=1.0,
            g in 0.0f64..=0.5,
        ) {
            let m = M::new(l, g).unwrap();
            let registered = &registered[..arrived.len()];
            let factored: f64 = arrived
                .iter()
                .zip(registered)
                .map(|(&a, &r)| registration_distribution(a, &m).probability(r))
                .product();
            let joint = brute_force_joint(&arrived, registered, l, g);
            prop_assert!((factored - joint).abs() < 1e-12);
        }
    }
}
