//! Arithmetic in `Z_n x Z_n` with `n = p^m`.
//!
//! Elements are residue pairs indexed row-major (`x1 * n + x2`); every set
//! this crate produces is ordered by that index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::SubsetBits;

/// Largest `n` accepted by [`GroupContext::new`].
pub const MAX_MODULUS: u64 = 1 << 12;

/// The ambient group `Z_{p^m} x Z_{p^m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupContext {
    p: u32,
    m: u32,
    n: u32,
}

/// A residue pair `(x1, x2)`, both reduced mod `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub x1: u32,
    pub x2: u32,
}

impl Element {
    pub const ZERO: Element = Element { x1: 0, x2: 0 };

    pub const fn new(x1: u32, x2: u32) -> Self {
        Element { x1, x2 }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

impl From<(u32, u32)> for Element {
    fn from((x1, x2): (u32, u32)) -> Self {
        Element { x1, x2 }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - a.div_euclid(b) * t)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Inverse of `value` modulo `modulus`, or an error for non-units.
pub fn mod_inverse(value: i64, modulus: u32) -> Result<u32> {
    let n = modulus as i64;
    let (g, s, _) = ext_gcd(value.rem_euclid(n), n);
    if g != 1 {
        return Err(Error::NotInvertible { value, modulus });
    }
    Ok(s.rem_euclid(n) as u32)
}

impl GroupContext {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::ZeroExponent);
        }
        let mut n: u64 = 1;
        for _ in 0..m {
            n *= p as u64;
            if n > MAX_MODULUS {
                return Err(Error::GroupTooLarge { n });
            }
        }
        Ok(GroupContext { p, m, n: n as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The cyclic modulus `p^m`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// `n^2`, the number of group elements.
    pub fn order(&self) -> usize {
        (self.n as usize) * (self.n as usize)
    }

    /// Builds an element, rejecting coordinates outside `[0, n)`.
    pub fn element(&self, x1: i64, x2: i64) -> Result<Element> {
        let n = self.n as i64;
        if !(0..n).contains(&x1) || !(0..n).contains(&x2) {
            return Err(Error::CoordinateOutOfRange { x1, x2, n: self.n });
        }
        Ok(Element::new(x1 as u32, x2 as u32))
    }

    /// Builds an element from arbitrary integers, reducing them mod `n`.
    pub fn reduce(&self, x1: i64, x2: i64) -> Element {
        let n = self.n as i64;
        Element::new(x1.rem_euclid(n) as u32, x2.rem_euclid(n) as u32)
    }

    pub fn contains(&self, u: Element) -> bool {
        u.x1 < self.n && u.x2 < self.n
    }

    pub fn index(&self, u: Element) -> usize {
        debug_assert!(self.contains(u));
        u.x1 as usize * self.n as usize + u.x2 as usize
    }

    pub fn element_at(&self, index: usize) -> Element {
        debug_assert!(index < self.order());
        let n = self.n as usize;
        Element::new((index / n) as u32, (index % n) as u32)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    pub fn add(&self, u: Element, v: Element) -> Element {
        let n = self.n;
        Element::new((u.x1 + v.x1) % n, (u.x2 + v.x2) % n)
    }

    pub fn neg(&self, u: Element) -> Element {
        let n = self.n;
        Element::new((n - u.x1) % n, (n - u.x2) % n)
    }

    pub fn sub(&self, u: Element, v: Element) -> Element {
        self.add(u, self.neg(v))
    }

    pub fn scale(&self, k: i64, u: Element) -> Element {
        let n = self.n as i64;
        let k = k.rem_euclid(n);
        self.reduce(k * u.x1 as i64, k * u.x2 as i64)
    }

    /// `x1*y2 - x2*y1 mod n`.
    pub fn symplectic_form(&self, u: Element, v: Element) -> u32 {
        let n = self.n as u64;
        let a = (u.x1 as u64 * v.x2 as u64) % n;
        let b = (u.x2 as u64 * v.x1 as u64) % n;
        ((a + n - b) % n) as u32
    }

    /// Euclidean pairing `x1*y1 + x2*y2 mod n`.
    pub fn dot(&self, u: Element, v: Element) -> u32 {
        let n = self.n as u64;
        ((u.x1 as u64 * v.x1 as u64 + u.x2 as u64 * v.x2 as u64) % n) as u32
    }

    /// Additive order of `u`; always a power of `p`.
    pub fn element_order(&self, u: Element) -> u32 {
        let mut order = 1;
        let mut x = u;
        while !x.is_zero() {
            x = self.scale(self.p as i64, x);
            order *= self.p;
        }
        order
    }

    /// Largest `t <= m` with `p^t` dividing both coordinates.
    pub fn valuation(&self, u: Element) -> u32 {
        self.m - self.element_order(u).ilog(self.p)
    }

    /// Checks that `u` belongs to this group.
    pub fn check(&self, u: Element) -> Result<Element> {
        if self.contains(u) {
            Ok(u)
        } else {
            Err(Error::CoordinateOutOfRange {
                x1: u.x1 as i64,
                x2: u.x2 as i64,
                n: self.n,
            })
        }
    }

    pub fn full_set(&self) -> SubsetBits {
        SubsetBits::full(*self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> GroupContext {
        GroupContext::new(2, 2).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let g = z4();
        assert_eq!(g.add(Element::new(3, 2), Element::new(2, 3)), Element::new(1, 1));
        assert_eq!(g.neg(Element::new(1, 0)), Element::new(3, 0));
        assert_eq!(g.scale(3, Element::new(1, 2)), Element::new(3, 2));
    }

    #[test]
    fn symplectic_form_examples() {
        let g = z4();
        assert_eq!(g.symplectic_form(Element::new(1, 0), Element::new(0, 1)), 1);
        assert_eq!(g.symplectic_form(Element::new(1, 2), Element::new(3, 1)), 3);
        for u in g.elements() {
            assert_eq!(g.symplectic_form(u, u), 0);
        }
    }

    #[test]
    fn orders() {
        let g = z4();
        assert_eq!(g.element_order(Element::ZERO), 1);
        assert_eq!(g.element_order(Element::new(2, 0)), 2);
        assert_eq!(g.element_order(Element::new(1, 2)), 4);
        assert_eq!(g.valuation(Element::new(2, 2)), 1);
        assert_eq!(g.valuation(Element::new(1, 2)), 0);
        assert_eq!(g.valuation(Element::ZERO), 2);
    }

    #[test]
    fn rejects_composite_and_out_of_range() {
        assert!(matches!(GroupContext::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(GroupContext::new(1, 1), Err(Error::NotPrime(1))));
        assert!(matches!(GroupContext::new(2, 0), Err(Error::ZeroExponent)));
        assert!(z4().element(4, 0).is_err());
        assert!(z4().element(-1, 0).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(3, 4).unwrap(), 3);
        assert_eq!(mod_inverse(-2, 9).unwrap(), 4);
        assert!(mod_inverse(3, 9).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = GroupContext::new(3, 2).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.index(g.element_at(i)), i);
        }
    }
}
