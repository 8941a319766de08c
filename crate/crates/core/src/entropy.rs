//! Base-2 Shannon entropy, even mixtures, KL divergence, and the Pinsker-type
//! exceedance bound `P(x > y) ≤ 1/2 + 2√(2H(γ) − H(α) − H(β))`.
//!
//! Laws are finitely supported on ℕ. Probabilities are either exact
//! ([`ExactLaw`]) or `f64` ([`FloatLaw`]); entropies are always `f64`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Tolerance for normalization in float mode.
pub const FLOAT_MASS_TOLERANCE: f64 = 1e-12;

/// Numeric type for probability masses.
pub trait Mass:
    Clone + Debug + PartialOrd + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn ratio(num: u64, den: u64) -> Self;
    fn half(&self) -> Self;
    fn as_f64(&self) -> f64;
    fn is_unit_total(total: &Self) -> bool;
}

impl Mass for f64 {
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }
    fn half(&self) -> Self {
        self / 2.0
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn is_unit_total(total: &Self) -> bool {
        (total - 1.0).abs() <= FLOAT_MASS_TOLERANCE
    }
}

impl Mass for BigRational {
    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn half(&self) -> Self {
        self / BigInt::from(2)
    }
    fn as_f64(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.to_f64().unwrap_or(f64::NAN)
        }
    }
    fn is_unit_total(total: &Self) -> bool {
        total.is_one()
    }
}

/// A probability law on a finite subset of ℕ: atoms sorted by outcome, each
/// with positive mass.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLaw<P> {
    atoms: Vec<(usize, P)>,
}

pub type ExactLaw = FiniteLaw<BigRational>;
pub type FloatLaw = FiniteLaw<f64>;

impl<P: Mass> FiniteLaw<P> {
    /// Validates nonnegativity and normalization; repeated outcomes are summed
    /// and zero atoms dropped.
    pub fn new(mut atoms: Vec<(usize, P)>) -> Result<Self> {
        if atoms.iter().any(|(_, p)| *p < P::zero()) {
            return Err(Error::param("negative probability"));
        }
        atoms.sort_by_key(|(k, _)| *k);
        let mut merged: Vec<(usize, P)> = Vec::with_capacity(atoms.len());
        for (k, p) in atoms {
            match merged.last_mut() {
                Some((last, acc)) if *last == k => *acc = acc.clone() + p,
                _ => merged.push((k, p)),
            }
        }
        merged.retain(|(_, p)| !p.is_zero());
        let law = FiniteLaw { atoms: merged };
        if !P::is_unit_total(&law.total()) {
            return Err(Error::param(format!("masses sum to {:?}, not 1", law.total())));
        }
        Ok(law)
    }

    pub fn point_mass(outcome: usize) -> Self {
        FiniteLaw { atoms: vec![(outcome, P::one())] }
    }

    /// Uniform on `0..k`.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("uniform law needs a nonempty support"));
        }
        Ok(FiniteLaw { atoms: (0..k).map(|i| (i, P::ratio(1, k as u64))).collect() })
    }

    /// Empirical law of a list of values.
    pub fn empirical(values: &[usize]) -> Result<Self> {
        let mut counts = std::collections::BTreeMap::new();
        for &v in values {
            *counts.entry(v).or_insert(0u64) += 1;
        }
        Self::from_counts(counts.into_iter(), values.len() as u64)
    }

    /// Law with `P(k) = count_k / total`.
    pub fn from_counts(counts: impl Iterator<Item = (usize, u64)>, total: u64) -> Result<Self> {
        if total == 0 {
            return Err(Error::param("empirical law of an empty sample"));
        }
        Self::new(counts.map(|(k, c)| (k, P::ratio(c, total))).collect())
    }

    pub fn atoms(&self) -> &[(usize, P)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.atoms.iter().map(|(k, _)| *k)
    }

    pub fn mass(&self, outcome: usize) -> P {
        self.atoms
            .binary_search_by_key(&outcome, |(k, _)| *k)
            .map(|i| self.atoms[i].1.clone())
            .unwrap_or_else(|_| P::zero())
    }

    pub fn total(&self) -> P {
        self.atoms.iter().fold(P::zero(), |acc, (_, p)| acc + p.clone())
    }

    pub fn to_float(&self) -> FloatLaw {
        FiniteLaw { atoms: self.atoms.iter().map(|(k, p)| (*k, p.as_f64())).collect() }
    }
}

/// `H(μ) = −Σ μ(i) log₂ μ(i)`, with `0 log 0 = 0`.
pub fn shannon_entropy<P: Mass>(law: &FiniteLaw<P>) -> f64 {
    law.atoms.iter().map(|(_, p)| p.as_f64()).filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

/// `H(x) = −x log₂ x − (1 − x) log₂(1 − x)`; 0 at both endpoints.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::param(format!("binary entropy argument {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// `(α + β)/2`, the law of `f ⊔ g`.
pub fn mixture<P: Mass>(a: &FiniteLaw<P>, b: &FiniteLaw<P>) -> FiniteLaw<P> {
    let (mut i, mut j) = (0, 0);
    let mut atoms = Vec::with_capacity(a.atoms.len() + b.atoms.len());
    while i < a.atoms.len() || j < b.atoms.len() {
        let ka = a.atoms.get(i).map(|x| x.0);
        let kb = b.atoms.get(j).map(|x| x.0);
        match (ka, kb) {
            (Some(x), Some(y)) if x == y => {
                atoms.push((x, (a.atoms[i].1.clone() + b.atoms[j].1.clone()).half()));
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                atoms.push((x, a.atoms[i].1.half()));
                i += 1;
            }
            (Some(x), None) => {
                atoms.push((x, a.atoms[i].1.half()));
                i += 1;
            }
            (_, Some(y)) => {
                atoms.push((y, b.atoms[j].1.half()));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    FiniteLaw { atoms }
}

/// `D(α‖γ) = Σ α(i) log₂(α(i)/γ(i))`. Errors when `α` charges an outcome `γ`
/// does not.
pub fn kl_divergence<P: Mass>(a: &FiniteLaw<P>, c: &FiniteLaw<P>) -> Result<f64> {
    let mut total = 0.0;
    for (k, p) in &a.atoms {
        let q = c.mass(*k);
        if q.is_zero() {
            return Err(Error::Domain(*k));
        }
        let (p, q) = (p.as_f64(), q.as_f64());
        total += p * (p / q).log2();
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PinskerGap {
    /// `2H(γ) − H(α) − H(β)` for `γ = (α + β)/2`.
    pub gap: f64,
    /// `1/2 + 2√gap`.
    pub bound: f64,
}

pub fn pinsker_gap<P: Mass>(a: &FiniteLaw<P>, b: &FiniteLaw<P>) -> PinskerGap {
    let gamma = mixture(a, b);
    let gap = 2.0 * shannon_entropy(&gamma) - shannon_entropy(a) - shannon_entropy(b);
    PinskerGap { gap, bound: 0.5 + 2.0 * gap.max(0.0).sqrt() }
}

/// `(α × β)({(x, y) : x > y}) = Σ_{i > j} α(i) β(j)`, by a merge over the two
/// sorted supports with a running prefix sum of `β`.
pub fn exceedance_probability<P: Mass>(a: &FiniteLaw<P>, b: &FiniteLaw<P>) -> P {
    let mut below = P::zero();
    let mut j = 0;
    let mut total = P::zero();
    for (i, pa) in &a.atoms {
        while j < b.atoms.len() && b.atoms[j].0 < *i {
            below = below + b.atoms[j].1.clone();
            j += 1;
        }
        total = total + pa.clone() * below.clone();
    }
    total
}

/// `‖α − β‖₁`.
pub fn l1_distance<P: Mass + Signed>(a: &FiniteLaw<P>, b: &FiniteLaw<P>) -> P {
    let support: std::collections::BTreeSet<usize> = a.support().chain(b.support()).collect();
    support.into_iter().fold(P::zero(), |acc, k| acc + (a.mass(k) - b.mass(k)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn entropy_examples() {
        assert!((shannon_entropy(&FloatLaw::uniform(8).unwrap()) - 3.0).abs() < 1e-12);
        assert_eq!(shannon_entropy(&FloatLaw::point_mass(4)), 0.0);
        let law = ExactLaw::new(vec![(0, q(1, 4)), (1, q(3, 4))]).unwrap();
        let direct = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((shannon_entropy(&law) - direct).abs() < 1e-12);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
        let third = ExactLaw::new(vec![(0, q(1, 3)), (1, q(2, 3))]).unwrap();
        assert!((binary_entropy(1.0 / 3.0).unwrap() - shannon_entropy(&third)).abs() < 1e-12);
        assert!((binary_entropy(0.2).unwrap() - binary_entropy(0.8).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn law_validation() {
        assert!(ExactLaw::new(vec![(0, q(1, 2))]).is_err());
        assert!(ExactLaw::new(vec![(0, q(3, 2)), (1, q(-1, 2))]).is_err());
        let merged = ExactLaw::new(vec![(1, q(1, 4)), (0, q(1, 2)), (1, q(1, 4)), (5, q(0, 1))]).unwrap();
        assert_eq!(merged.atoms(), &[(0, q(1, 2)), (1, q(1, 2))]);
        assert!(FloatLaw::new(vec![(0, 0.5), (1, 0.5 + 1e-13)]).is_ok());
        assert!(FloatLaw::new(vec![(0, 0.5), (1, 0.5 + 1e-9)]).is_err());
    }

    #[test]
    fn mixture_examples() {
        let m = mixture(&ExactLaw::point_mass(0), &ExactLaw::point_mass(1));
        assert_eq!(m, ExactLaw::uniform(2).unwrap());
        let a = ExactLaw::new(vec![(0, q(1, 3)), (2, q(2, 3))]).unwrap();
        assert_eq!(mixture(&a, &a), a);
    }

    #[test]
    fn kl_examples() {
        let a = FloatLaw::new(vec![(0, 0.3), (1, 0.7)]).unwrap();
        assert_eq!(kl_divergence(&a, &a).unwrap(), 0.0);
        let kl = kl_divergence(&FloatLaw::point_mass(0), &FloatLaw::uniform(2).unwrap()).unwrap();
        assert!((kl - 1.0).abs() < 1e-12);
        assert_eq!(kl_divergence(&FloatLaw::point_mass(3), &FloatLaw::uniform(2).unwrap()), Err(Error::Domain(3)));
    }

    #[test]
    fn pinsker_examples() {
        let a = FloatLaw::new(vec![(0, 0.2), (3, 0.8)]).unwrap();
        let same = pinsker_gap(&a, &a);
        assert!(same.gap.abs() < 1e-12);
        assert!((same.bound - 0.5).abs() < 1e-6);
        let apart = pinsker_gap(&FloatLaw::point_mass(0), &FloatLaw::point_mass(1));
        assert!((apart.gap - 2.0).abs() < 1e-12);
        assert!((apart.bound - (0.5 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn exceedance_examples() {
        let u = ExactLaw::uniform(2).unwrap();
        assert_eq!(exceedance_probability(&u, &u), q(1, 4));
        assert_eq!(exceedance_probability(&ExactLaw::point_mass(5), &ExactLaw::point_mass(3)), q(1, 1));
        assert_eq!(exceedance_probability(&ExactLaw::point_mass(3), &ExactLaw::point_mass(5)), q(0, 1));
    }

    #[test]
    fn l1_between_point_masses() {
        assert_eq!(l1_distance(&ExactLaw::point_mass(0), &ExactLaw::point_mass(1)), q(2, 1));
    }
}
