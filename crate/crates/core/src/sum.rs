//! Formal sums with nonnegative integer multiplicities.
//!
//! A [`FormalSum`] is the semisimplified Grothendieck-group element: a map
//! from basis elements to multiplicities. Multiplicities are unsigned, so
//! negative coefficients are unrepresentable, and zero-multiplicity entries
//! are never stored. Basis kinds are distinguished statically by the type
//! parameter, which makes mixed-kind addition a compile error rather than a
//! runtime one.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use crate::model::{GLClass, SpClass};

/// A finite formal sum `sum_i c_i * b_i` with `c_i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalSum<B: Ord> {
    terms: BTreeMap<B, u64>,
}

/// Sum over `pi_1 (x) pi_2` tensors in R(GL) (x) R(GL).
pub type GlPairSum = FormalSum<(GLClass, GLClass)>;
/// Sum over triple tensors in R(GL) (x) R(GL) (x) R(GL).
pub type GlTripleSum = FormalSum<(GLClass, GLClass, GLClass)>;
/// Sum over `pi (x) (pi' |x sigma)` tensors in R(GL) (x) R(Sp).
pub type LeviSum = FormalSum<(GLClass, SpClass)>;

impl<B: Ord> FormalSum<B> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn singleton(basis: B) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(basis, 1);
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct basis elements.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Sum of all multiplicities.
    pub fn total_multiplicity(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn multiplicity(&self, basis: &B) -> u64 {
        self.terms.get(basis).copied().unwrap_or(0)
    }

    /// Largest multiplicity occurring in the sum (0 for the zero sum).
    pub fn max_multiplicity(&self) -> u64 {
        self.terms.values().copied().max().unwrap_or(0)
    }

    /// Add `mult` copies of a basis element; adding 0 is a no-op.
    pub fn insert(&mut self, basis: B, mult: u64) {
        if mult > 0 {
            *self.terms.entry(basis).or_insert(0) += mult;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, u64)> {
        self.terms.iter().map(|(b, &m)| (b, m))
    }

    /// Transform every basis element, accumulating coincidences.
    pub fn map_basis<C: Ord>(&self, mut f: impl FnMut(&B) -> C) -> FormalSum<C>
    where
        B: Clone,
    {
        let mut out = FormalSum::zero();
        for (b, m) in self.iter() {
            out.insert(f(b), m);
        }
        out
    }

    /// Keep only the terms satisfying the predicate.
    pub fn filter(&self, mut pred: impl FnMut(&B) -> bool) -> Self
    where
        B: Clone,
    {
        let mut out = Self::zero();
        for (b, m) in self.iter() {
            if pred(b) {
                out.insert(b.clone(), m);
            }
        }
        out
    }

    /// Multiply every multiplicity by a nonnegative scalar.
    pub fn scaled(&self, k: u64) -> Self
    where
        B: Clone,
    {
        if k == 0 {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(b, m)| (b.clone(), m * k)).collect(),
        }
    }
}

impl<B: Ord> FromIterator<(B, u64)> for FormalSum<B> {
    fn from_iter<I: IntoIterator<Item = (B, u64)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (b, m) in iter {
            out.insert(b, m);
        }
        out
    }
}

impl<B: Ord> IntoIterator for FormalSum<B> {
    type Item = (B, u64);
    type IntoIter = std::collections::btree_map::IntoIter<B, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<B: Ord + Clone> Add for &FormalSum<B> {
    type Output = FormalSum<B>;

    fn add(self, rhs: &FormalSum<B>) -> FormalSum<B> {
        let mut out = self.clone();
        out += rhs.clone();
        out
    }
}

impl<B: Ord> AddAssign for FormalSum<B> {
    fn add_assign(&mut self, rhs: Self) {
        for (b, m) in rhs.terms {
            self.insert(b, m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GLClass, Segment, Universe};

    fn fixtures() -> (Universe, GLClass, GLClass) {
        let mut u = Universe::new();
        let (rho, rho_bar) = u.declare_gl("rho", 1).unwrap();
        let x = GLClass::from_segment(Segment::new(rho, 0, 0).unwrap());
        let y = GLClass::from_segment(Segment::new(rho_bar, 0, 0).unwrap());
        (u, x, y)
    }

    #[test]
    fn addition_accumulates_multiplicities() {
        let (_, x, y) = fixtures();
        let a = FormalSum::singleton(x.clone());
        let b = FormalSum::singleton(y.clone());
        let s = &a + &b;
        assert_eq!(s.num_terms(), 2);
        assert_eq!(s.multiplicity(&x), 1);
        assert_eq!(s.multiplicity(&y), 1);

        let doubled = &a + &a;
        assert_eq!(doubled.num_terms(), 1);
        assert_eq!(doubled.multiplicity(&x), 2);
    }

    #[test]
    fn zero_is_the_identity() {
        let (_, x, _) = fixtures();
        let a = FormalSum::singleton(x);
        assert_eq!(&a + &FormalSum::zero(), a);
        assert_eq!(&FormalSum::zero() + &a, a);
        assert!(FormalSum::<GLClass>::zero().is_zero());
    }

    #[test]
    fn commutative_and_associative() {
        let (_, x, y) = fixtures();
        let a = FormalSum::singleton(x.clone());
        let b = FormalSum::singleton(y).scaled(3);
        let c = FormalSum::singleton(x).scaled(2);
        assert_eq!(&a + &b, &b + &a);
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn zero_multiplicity_is_never_stored() {
        let (_, x, _) = fixtures();
        let mut s = FormalSum::zero();
        s.insert(x.clone(), 0);
        assert!(s.is_zero());
        assert_eq!(FormalSum::singleton(x).scaled(0), FormalSum::zero());
    }

    #[test]
    fn map_basis_merges_coincidences() {
        let (_, x, y) = fixtures();
        let s = &FormalSum::singleton(x.clone()) + &FormalSum::singleton(y);
        let collapsed = s.map_basis(|_| x.clone());
        assert_eq!(collapsed.num_terms(), 1);
        assert_eq!(collapsed.multiplicity(&x), 2);
    }
}
