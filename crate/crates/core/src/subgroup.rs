//! Subgroups, symplectic orthogonals and subgroup enumeration.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{Element, GroupContext};
use crate::subset::SubsetBits;

/// A subgroup together with a generating list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: SubsetBits,
    generators: Vec<Element>,
}

impl Subgroup {
    /// Validates that `members` is a subgroup.
    pub fn from_members(members: SubsetBits) -> Result<Self> {
        if !is_closed(&members) {
            return Err(Error::NotASubgroup);
        }
        let generators = minimal_generators(&members);
        Ok(Subgroup { members, generators })
    }

    /// The subgroup generated by `generators`.
    pub fn generated_by(ctx: GroupContext, generators: &[Element]) -> Result<Self> {
        let mut members = SubsetBits::singleton(ctx, Element::ZERO);
        for &g in generators {
            ctx.check(g)?;
            let cyclic = cyclic_members(ctx, g);
            members = members.sumset(&cyclic);
        }
        Ok(Subgroup {
            members,
            generators: generators.to_vec(),
        })
    }

    pub fn trivial(ctx: GroupContext) -> Self {
        Subgroup {
            members: SubsetBits::singleton(ctx, Element::ZERO),
            generators: Vec::new(),
        }
    }

    pub fn whole(ctx: GroupContext) -> Self {
        Subgroup {
            members: SubsetBits::full(ctx),
            generators: vec![Element::new(1, 0), Element::new(0, 1)],
        }
    }

    pub fn members(&self) -> &SubsetBits {
        &self.members
    }

    pub fn into_members(self) -> SubsetBits {
        self.members
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn ctx(&self) -> GroupContext {
        self.members.ctx()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, u: Element) -> bool {
        self.members.contains(u)
    }

    pub fn is_cyclic(&self) -> bool {
        let ctx = self.ctx();
        self.members.iter().any(|u| ctx.element_order(u) as usize == self.len())
    }

    /// Sum `H + H'` of two subgroups.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut generators = self.generators.clone();
        generators.extend_from_slice(&other.generators);
        Subgroup {
            members: self.members.sumset(&other.members),
            generators,
        }
    }
}

fn cyclic_members(ctx: GroupContext, u: Element) -> SubsetBits {
    let mut s = SubsetBits::empty(ctx);
    let mut x = Element::ZERO;
    loop {
        s.insert(x);
        x = ctx.add(x, u);
        if x.is_zero() {
            break;
        }
    }
    s
}

fn is_closed(set: &SubsetBits) -> bool {
    let ctx = set.ctx();
    if !set.contains(Element::ZERO) {
        return false;
    }
    // Finite sets closed under addition are subgroups.
    let members = set.to_vec();
    members
        .iter()
        .all(|&a| members.iter().all(|&b| set.contains(ctx.add(a, b))))
}

/// Greedy generating list: repeatedly adjoin the highest-order element not yet covered.
fn minimal_generators(members: &SubsetBits) -> Vec<Element> {
    let ctx = members.ctx();
    let mut covered = SubsetBits::singleton(ctx, Element::ZERO);
    let mut generators = Vec::new();
    while covered.len() < members.len() {
        let g = members
            .difference(&covered)
            .iter()
            .max_by_key(|&u| (ctx.element_order(u), std::cmp::Reverse(ctx.index(u))))
            .expect("uncovered member exists");
        covered = covered.sumset(&cyclic_members(ctx, g));
        generators.push(g);
    }
    generators
}

/// `<u> = {k u : 0 <= k < ord(u)}`.
pub fn cyclic_subgroup(ctx: GroupContext, u: Element) -> Subgroup {
    Subgroup {
        members: cyclic_members(ctx, u),
        generators: if u.is_zero() { Vec::new() } else { vec![u] },
    }
}

/// Elements pairing to zero with every element of `set` under the symplectic form.
pub fn symplectic_orthogonal_of_set(set: &SubsetBits) -> SubsetBits {
    let ctx = set.ctx();
    let members = set.to_vec();
    SubsetBits::from_indices(
        ctx,
        (0..ctx.order()).filter(|&i| {
            let g = ctx.element_at(i);
            members.iter().all(|&h| ctx.symplectic_form(g, h) == 0)
        }),
    )
}

/// `H^{perp_s}`; it is itself a subgroup of order `n^2 / |H|`.
pub fn symplectic_orthogonal(h: &Subgroup) -> Subgroup {
    let ctx = h.ctx();
    let gens = if h.generators().is_empty() {
        SubsetBits::singleton(ctx, Element::ZERO)
    } else {
        SubsetBits::from_elements(ctx, h.generators().iter().copied()).expect("generators lie in the group")
    };
    let members = symplectic_orthogonal_of_set(&gens);
    let generators = minimal_generators(&members);
    Subgroup { members, generators }
}

/// Same as [`symplectic_orthogonal`] for a raw set, validating closure first.
pub fn symplectic_orthogonal_checked(members: &SubsetBits) -> Result<Subgroup> {
    let h = Subgroup::from_members(members.clone())?;
    Ok(symplectic_orthogonal(&h))
}

/// All cyclic subgroups, deduplicated, in canonical order.
pub fn cyclic_subgroups(ctx: GroupContext) -> Vec<Subgroup> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for u in ctx.elements() {
        let h = cyclic_subgroup(ctx, u);
        if seen.insert(h.members.clone()) {
            out.push(h);
        }
    }
    out.sort_by(|a, b| a.members.cmp(&b.members));
    out
}

/// Every subgroup (optionally of one order), sorted by bit representation.
///
/// Subgroups of `Z_n x Z_n` have rank at most two, so sums of pairs of cyclic
/// subgroups reach all of them.
pub fn enumerate_subgroups(ctx: GroupContext, order: Option<usize>) -> Vec<Subgroup> {
    let cyclic = cyclic_subgroups(ctx);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, a) in cyclic.iter().enumerate() {
        for b in &cyclic[i..] {
            let h = a.join(b);
            if order.is_some_and(|o| h.len() != o) {
                continue;
            }
            if seen.insert(h.members.clone()) {
                let generators = minimal_generators(&h.members);
                out.push(Subgroup {
                    members: h.members,
                    generators,
                });
            }
        }
    }
    out.sort_by(|a, b| a.members.cmp(&b.members));
    out
}

/// Given `h` of order `n` and a complement `H'` of `<h>`, returns `h' in H'`
/// with `<h, h'> = 1`.
pub fn find_symplectic_partner(h: Element, complement: &Subgroup) -> Result<Element> {
    let ctx = complement.ctx();
    ctx.check(h)?;
    if ctx.element_order(h) != ctx.n() {
        return Err(Error::NoSymplecticPartner("generator does not have order n"));
    }
    let hh = cyclic_subgroup(ctx, h);
    if hh.members.intersection_len(complement.members()) != 1 || hh.len() * complement.len() != ctx.order() {
        return Err(Error::NoSymplecticPartner("subgroups do not complement each other"));
    }
    complement
        .members()
        .iter()
        .find(|&x| ctx.symplectic_form(h, x) == 1)
        .ok_or(Error::NoSymplecticPartner("no element pairs to 1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> GroupContext {
        GroupContext::new(2, 2).unwrap()
    }

    fn set(ctx: GroupContext, pairs: &[(i64, i64)]) -> SubsetBits {
        SubsetBits::from_pairs(ctx, pairs).unwrap()
    }

    #[test]
    fn cyclic_examples() {
        let g = z4();
        assert_eq!(cyclic_subgroup(g, Element::ZERO).members().len(), 1);
        assert_eq!(
            cyclic_subgroup(g, Element::new(2, 0)).members(),
            &set(g, &[(0, 0), (2, 0)])
        );
        assert_eq!(
            cyclic_subgroup(g, Element::new(1, 2)).members(),
            &set(g, &[(0, 0), (1, 2), (2, 0), (3, 2)])
        );
    }

    #[test]
    fn orthogonal_examples() {
        let g = z4();
        let row = Subgroup::from_members(set(g, &[(0, 0), (1, 0), (2, 0), (3, 0)])).unwrap();
        assert_eq!(symplectic_orthogonal(&row).members(), row.members());
        let whole = Subgroup::whole(g);
        assert_eq!(symplectic_orthogonal(&whole).members(), &set(g, &[(0, 0)]));
        let k = Subgroup::from_members(set(g, &[(0, 0), (2, 0), (0, 2), (2, 2)])).unwrap();
        assert_eq!(symplectic_orthogonal(&k).members(), k.members());
        assert_eq!(symplectic_orthogonal(&Subgroup::trivial(g)).len(), 16);
    }

    #[test]
    fn rejects_non_subgroups() {
        let g = z4();
        assert!(matches!(
            Subgroup::from_members(set(g, &[(0, 0), (1, 0)])),
            Err(Error::NotASubgroup)
        ));
        assert!(symplectic_orthogonal_checked(&set(g, &[(1, 0)])).is_err());
    }

    #[test]
    fn enumeration_counts_z4() {
        let g = z4();
        let order4 = enumerate_subgroups(g, Some(4));
        assert_eq!(order4.len(), 7);
        assert_eq!(order4.iter().filter(|h| h.is_cyclic()).count(), 6);
        assert_eq!(enumerate_subgroups(g, Some(2)).len(), 3);
        assert_eq!(enumerate_subgroups(g, Some(1)).len(), 1);
        // 1 + 3 + 7 + 3 + 1 subgroups of Z_4 x Z_4 by order 1, 2, 4, 8, 16.
        assert_eq!(enumerate_subgroups(g, None).len(), 15);
        let all = enumerate_subgroups(g, None);
        assert!(all.windows(2).all(|w| w[0].members() < w[1].members()));
    }

    #[test]
    fn enumeration_counts_z9() {
        let g = GroupContext::new(3, 2).unwrap();
        let order9 = enumerate_subgroups(g, Some(9));
        assert_eq!(order9.iter().filter(|h| h.is_cyclic()).count(), 12);
        assert_eq!(order9.len(), 13);
        assert_eq!(enumerate_subgroups(g, Some(3)).len(), 4);
    }

    #[test]
    fn partner_examples() {
        let g = z4();
        let col = Subgroup::from_members(set(g, &[(0, 0), (0, 1), (0, 2), (0, 3)])).unwrap();
        let row = Subgroup::from_members(set(g, &[(0, 0), (1, 0), (2, 0), (3, 0)])).unwrap();
        assert_eq!(
            find_symplectic_partner(Element::new(1, 0), &col).unwrap(),
            Element::new(0, 1)
        );
        assert_eq!(
            find_symplectic_partner(Element::new(0, 1), &row).unwrap(),
            Element::new(3, 0)
        );
        assert_eq!(
            find_symplectic_partner(Element::new(1, 2), &col).unwrap(),
            Element::new(0, 1)
        );
        assert!(find_symplectic_partner(Element::new(2, 0), &col).is_err());
        assert!(find_symplectic_partner(Element::new(1, 0), &row).is_err());
    }
}
