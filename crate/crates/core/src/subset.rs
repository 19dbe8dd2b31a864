//! Fixed-width bit vectors over the group elements.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, GroupContext};

/// A subset of `Z_n x Z_n`, one bit per element in canonical order.
///
/// Ordering compares the bit vectors as unsigned integers with element 0 as
/// the least significant bit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetBits {
    ctx: GroupContext,
    words: Vec<u64>,
}

fn word_count(ctx: &GroupContext) -> usize {
    ctx.order().div_ceil(64)
}

impl SubsetBits {
    pub fn empty(ctx: GroupContext) -> Self {
        SubsetBits {
            ctx,
            words: vec![0; word_count(&ctx)],
        }
    }

    pub fn full(ctx: GroupContext) -> Self {
        let mut s = Self::empty(ctx);
        for i in 0..ctx.order() {
            s.words[i / 64] |= 1 << (i % 64);
        }
        s
    }

    pub fn singleton(ctx: GroupContext, u: Element) -> Self {
        let mut s = Self::empty(ctx);
        s.insert(u);
        s
    }

    /// Builds a set from elements, rejecting coordinates outside the group.
    pub fn from_elements<I>(ctx: GroupContext, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = Element>,
    {
        let mut s = Self::empty(ctx);
        for u in elements {
            s.insert(ctx.check(u)?);
        }
        Ok(s)
    }

    /// Builds a set from integer pairs, rejecting coordinates outside `[0, n)`.
    pub fn from_pairs(ctx: GroupContext, pairs: &[(i64, i64)]) -> Result<Self> {
        let mut s = Self::empty(ctx);
        for &(x1, x2) in pairs {
            s.insert(ctx.element(x1, x2)?);
        }
        Ok(s)
    }

    /// Interprets the low `n^2` bits of `mask` as a subset (groups with at most 64 elements).
    pub fn from_mask(ctx: GroupContext, mask: u64) -> Self {
        assert!(ctx.order() <= 64, "from_mask needs a group of at most 64 elements");
        let mut s = Self::empty(ctx);
        let keep = if ctx.order() == 64 {
            u64::MAX
        } else {
            (1u64 << ctx.order()) - 1
        };
        s.words[0] = mask & keep;
        s
    }

    /// Low word of the bit vector; the whole set when `n^2 <= 64`.
    pub fn mask(&self) -> u64 {
        self.words[0]
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(ctx: GroupContext, indices: I) -> Self {
        let mut s = Self::empty(ctx);
        for i in indices {
            s.insert_index(i);
        }
        s
    }

    pub fn ctx(&self) -> GroupContext {
        self.ctx
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert(&mut self, u: Element) -> bool {
        let i = self.ctx.index(u);
        self.insert_index(i)
    }

    pub fn insert_index(&mut self, i: usize) -> bool {
        let fresh = !self.contains_index(i);
        self.words[i / 64] |= 1 << (i % 64);
        fresh
    }

    pub fn remove(&mut self, u: Element) -> bool {
        let i = self.ctx.index(u);
        let present = self.contains_index(i);
        self.words[i / 64] &= !(1 << (i % 64));
        present
    }

    pub fn contains(&self, u: Element) -> bool {
        self.ctx.contains(u) && self.contains_index(self.ctx.index(u))
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Member indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.indices().map(move |i| self.ctx.element_at(i))
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<Element> {
        self.iter().next()
    }

    fn same_ctx(&self, other: &SubsetBits) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn check_same_group(&self, other: &SubsetBits) -> Result<()> {
        self.same_ctx(other)
    }

    fn zip_with(&self, other: &SubsetBits, f: impl Fn(u64, u64) -> u64) -> SubsetBits {
        assert_eq!(self.ctx, other.ctx, "set operation across different groups");
        SubsetBits {
            ctx: self.ctx,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn union(&self, other: &SubsetBits) -> SubsetBits {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &SubsetBits) -> SubsetBits {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &SubsetBits) -> SubsetBits {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> SubsetBits {
        SubsetBits::full(self.ctx).difference(self)
    }

    pub fn is_disjoint(&self, other: &SubsetBits) -> bool {
        assert_eq!(self.ctx, other.ctx, "set operation across different groups");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &SubsetBits) -> bool {
        assert_eq!(self.ctx, other.ctx, "set operation across different groups");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &SubsetBits) -> bool {
        !self.is_disjoint(other)
    }

    pub fn intersection_len(&self, other: &SubsetBits) -> usize {
        assert_eq!(self.ctx, other.ctx, "set operation across different groups");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `{a + t : a in self}`.
    pub fn translate(&self, t: Element) -> SubsetBits {
        self.map(|u| self.ctx.add(u, t))
    }

    /// `{-a : a in self}`.
    pub fn negate(&self) -> SubsetBits {
        self.map(|u| self.ctx.neg(u))
    }

    /// Image of the set under `f` (duplicates collapse).
    pub fn map(&self, f: impl Fn(Element) -> Element) -> SubsetBits {
        let mut out = SubsetBits::empty(self.ctx);
        for u in self.iter() {
            out.insert(f(u));
        }
        out
    }

    /// The set `A + B`, ignoring multiplicities.
    pub fn sumset(&self, other: &SubsetBits) -> SubsetBits {
        assert_eq!(self.ctx, other.ctx, "set operation across different groups");
        let mut out = SubsetBits::empty(self.ctx);
        for a in self.iter() {
            for b in other.iter() {
                out.insert(self.ctx.add(a, b));
            }
        }
        out
    }

    /// `A + B` when every sum is distinct, `None` otherwise.
    pub fn direct_sum(&self, other: &SubsetBits) -> Option<SubsetBits> {
        let s = self.sumset(other);
        (s.len() == self.len() * other.len()).then_some(s)
    }
}

impl Ord for SubsetBits {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for SubsetBits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|u| (u.x1, u.x2))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership() {
        let g = GroupContext::new(3, 2).unwrap();
        let mut s = SubsetBits::empty(g);
        assert!(s.insert(Element::new(8, 8)));
        assert!(!s.insert(Element::new(8, 8)));
        s.insert(Element::new(0, 1));
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_vec(), vec![Element::new(0, 1), Element::new(8, 8)]);
        assert!(s.remove(Element::new(0, 1)));
        assert_eq!(s.len(), 1);
        assert_eq!(SubsetBits::full(g).len(), 81);
    }

    #[test]
    fn rejects_out_of_range_pairs() {
        let g = GroupContext::new(2, 2).unwrap();
        assert!(SubsetBits::from_pairs(g, &[(0, 4)]).is_err());
    }

    #[test]
    fn ordering_is_numeric() {
        let g = GroupContext::new(3, 2).unwrap();
        let low = SubsetBits::from_indices(g, [0, 1, 2]);
        let high = SubsetBits::from_indices(g, [70]);
        assert!(low < high);
        let a = SubsetBits::from_indices(g, [0, 5]);
        let b = SubsetBits::from_indices(g, [1, 5]);
        assert!(a < b);
    }

    #[test]
    fn direct_sums() {
        let g = GroupContext::new(2, 2).unwrap();
        let a = SubsetBits::from_pairs(g, &[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        let k = SubsetBits::from_pairs(g, &[(0, 0), (2, 0), (0, 2), (2, 2)]).unwrap();
        assert_eq!(a.direct_sum(&k).unwrap().len(), 16);
        assert!(k.direct_sum(&k).is_none());
    }
}
