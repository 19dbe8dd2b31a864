//! The subgroup catalog of `Z_{p^2} x Z_{p^2}`.
//!
//! `K` is the p-torsion subgroup. Its `p + 1` cyclic subgroups of order `p`
//! are labelled by the projective line: `K_k` is generated by `(p, kp)` for a
//! finite `k` and by `(0, p)` for `k = inf`. Each `K_k` lies in exactly `p`
//! cyclic Lagrangians `H_{j,k} = <h_{j,k}>` with
//!
//! ```text
//! h_{j,k} = (1, jp + k)   k finite
//! h_{j,inf} = (jp, 1)
//! ```
//!
//! `E_{j,k}` is the generator set of `H_{j,k}` and `C_{j,k} = {c h_{j,k} : c < p}`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{mod_inverse, Element, GroupContext};
use crate::spectral::{difference_set, generator_class};
use crate::subgroup::{cyclic_subgroup, symplectic_orthogonal, Subgroup};
use crate::subset::SubsetBits;
use crate::symplecto::Symplectomorphism;

/// A point of the projective line over `Z_p`; `Infinity` sorts last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectiveIndex {
    Finite(u32),
    Infinity,
}

impl ProjectiveIndex {
    /// All `p + 1` indices in order `0, 1, ..., p-1, inf`.
    pub fn all(p: u32) -> impl Iterator<Item = ProjectiveIndex> {
        (0..p)
            .map(ProjectiveIndex::Finite)
            .chain(std::iter::once(ProjectiveIndex::Infinity))
    }

    /// Position in [`ProjectiveIndex::all`].
    pub fn position(self, p: u32) -> usize {
        match self {
            ProjectiveIndex::Finite(k) => k as usize,
            ProjectiveIndex::Infinity => p as usize,
        }
    }

    pub fn from_position(p: u32, pos: usize) -> Self {
        if pos == p as usize {
            ProjectiveIndex::Infinity
        } else {
            ProjectiveIndex::Finite(pos as u32)
        }
    }

    /// Direction of a nonzero vector `(a, b)` over `Z_p`: `b / a`, or `inf` when `a = 0`.
    pub fn of_direction(p: u32, a: u32, b: u32) -> Self {
        let (a, b) = (a % p, b % p);
        if a == 0 {
            ProjectiveIndex::Infinity
        } else {
            let inv = mod_inverse(a as i64, p).expect("nonzero residue mod a prime");
            ProjectiveIndex::Finite(b * inv % p)
        }
    }

    /// A representative direction `(1, k)` or `(0, 1)`.
    pub fn direction(self) -> (u32, u32) {
        match self {
            ProjectiveIndex::Finite(k) => (1, k),
            ProjectiveIndex::Infinity => (0, 1),
        }
    }
}

impl fmt::Display for ProjectiveIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveIndex::Finite(k) => write!(f, "{k}"),
            ProjectiveIndex::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ProjectiveIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ProjectiveIndex::Finite(k) => serializer.serialize_u32(*k),
            ProjectiveIndex::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// The catalog objects for one `Z_{p^2} x Z_{p^2}`.
#[derive(Clone, Debug)]
pub struct StructureCatalog {
    ctx: GroupContext,
    k: Subgroup,
    k_sub: Vec<Subgroup>,
    // Indexed [position(k)][j].
    h: Vec<Vec<Element>>,
    lagrangians: Vec<Vec<Subgroup>>,
    e: Vec<Vec<SubsetBits>>,
    c: Vec<Vec<SubsetBits>>,
}

impl StructureCatalog {
    pub fn new(ctx: GroupContext) -> Result<Self> {
        if ctx.m() != 2 {
            return Err(Error::RequiresSquareGroup(ctx.m()));
        }
        let p = ctx.p();
        let k = Subgroup::from_members(SubsetBits::from_indices(
            ctx,
            ctx.elements()
                .filter(|&u| u.x1 % p == 0 && u.x2 % p == 0)
                .map(|u| ctx.index(u)),
        ))?;

        let mut k_sub = Vec::new();
        let mut h = Vec::new();
        let mut lagrangians = Vec::new();
        let mut e = Vec::new();
        let mut c = Vec::new();
        for idx in ProjectiveIndex::all(p) {
            let (a, b) = idx.direction();
            k_sub.push(cyclic_subgroup(ctx, Element::new(a * p, b * p)));
            let hs: Vec<Element> = (0..p)
                .map(|j| match idx {
                    ProjectiveIndex::Finite(kk) => Element::new(1, j * p + kk),
                    ProjectiveIndex::Infinity => Element::new(j * p, 1),
                })
                .collect();
            lagrangians.push(hs.iter().map(|&g| cyclic_subgroup(ctx, g)).collect());
            e.push(hs.iter().map(|&g| generator_class(ctx, g)).collect());
            c.push(
                hs.iter()
                    .map(|&g| SubsetBits::from_indices(ctx, (0..p).map(|cc| ctx.index(ctx.scale(cc as i64, g)))))
                    .collect(),
            );
            h.push(hs);
        }
        let catalog = StructureCatalog {
            ctx,
            k,
            k_sub,
            h,
            lagrangians,
            e,
            c,
        };
        catalog.verify()?;
        Ok(catalog)
    }

    fn verify(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::ConstructionFailed(format!("catalog invariant failed: {what}")));
        let p = self.ctx.p() as usize;
        if self.k_sub.len() != p + 1 || self.lagrangian_count() != p * p + p {
            return fail("counts");
        }
        for idx in self.indices() {
            let mut meet = SubsetBits::full(self.ctx);
            let mut union = self.k.members().clone();
            for j in 0..self.ctx.p() {
                let hjk = self.lagrangian(j, idx).members();
                meet = meet.intersection(hjk);
                union = union.union(hjk);
                if !difference_set(self.c(j, idx)).is_subset(self.e(j, idx)) {
                    return fail("difference set of C_{j,k} inside E_{j,k}");
                }
                if self.lagrangian(j, idx).len() != self.ctx.n() as usize {
                    return fail("H_{j,k} has order n");
                }
            }
            if &meet != self.k_sub(idx).members() {
                return fail("intersection of H_{j,k} over j");
            }
            if symplectic_orthogonal(self.k_sub(idx)).members() != &union {
                return fail("orthogonal of K_k");
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> GroupContext {
        self.ctx
    }

    pub fn indices(&self) -> impl Iterator<Item = ProjectiveIndex> {
        ProjectiveIndex::all(self.ctx.p())
    }

    /// The p-torsion subgroup `K`.
    pub fn k(&self) -> &Subgroup {
        &self.k
    }

    pub fn k_sub(&self, idx: ProjectiveIndex) -> &Subgroup {
        &self.k_sub[idx.position(self.ctx.p())]
    }

    /// `ΔK_k`, the generators of `K_k`.
    pub fn k_sub_generators(&self, idx: ProjectiveIndex) -> SubsetBits {
        let mut s = self.k_sub(idx).members().clone();
        s.remove(Element::ZERO);
        s
    }

    pub fn h(&self, j: u32, idx: ProjectiveIndex) -> Element {
        self.h[idx.position(self.ctx.p())][j as usize]
    }

    pub fn lagrangian(&self, j: u32, idx: ProjectiveIndex) -> &Subgroup {
        &self.lagrangians[idx.position(self.ctx.p())][j as usize]
    }

    pub fn e(&self, j: u32, idx: ProjectiveIndex) -> &SubsetBits {
        &self.e[idx.position(self.ctx.p())][j as usize]
    }

    pub fn c(&self, j: u32, idx: ProjectiveIndex) -> &SubsetBits {
        &self.c[idx.position(self.ctx.p())][j as usize]
    }

    /// `⋃_j E_{j,k}`: the order-`p^2` elements whose `p`-multiple lies in `K_k`.
    pub fn e_union(&self, idx: ProjectiveIndex) -> SubsetBits {
        (0..self.ctx.p()).fold(SubsetBits::empty(self.ctx), |acc, j| acc.union(self.e(j, idx)))
    }

    pub fn lagrangian_count(&self) -> usize {
        self.lagrangians.iter().map(Vec::len).sum()
    }

    /// `K` followed by every `H_{j,k}`, sorted by bit representation.
    pub fn all_lagrangians(&self) -> Vec<SubsetBits> {
        let mut out: Vec<SubsetBits> = std::iter::once(self.k.members().clone())
            .chain(self.lagrangians.iter().flatten().map(|h| h.members().clone()))
            .collect();
        out.sort();
        out
    }

    /// Projective index of `K_k` containing `p u` (or `u` itself when `ord(u) = p`).
    pub fn class_index_of(&self, u: Element) -> Option<ProjectiveIndex> {
        let p = self.ctx.p();
        match self.ctx.element_order(u) {
            1 => None,
            o if o == p => Some(ProjectiveIndex::of_direction(p, u.x1 / p, u.x2 / p)),
            _ => Some(ProjectiveIndex::of_direction(p, u.x1, u.x2)),
        }
    }

    /// `(j, k)` with `u ∈ E_{j,k}` for an element of order `p^2`.
    pub fn lagrangian_label(&self, u: Element) -> Option<(u32, ProjectiveIndex)> {
        let (p, n) = (self.ctx.p(), self.ctx.n());
        if self.ctx.element_order(u) != n {
            return None;
        }
        let idx = self.class_index_of(u)?;
        let ratio = match idx {
            ProjectiveIndex::Finite(_) => {
                let inv = mod_inverse(u.x1 as i64, n).ok()? as u64;
                (u.x2 as u64 * inv % n as u64) as u32
            }
            ProjectiveIndex::Infinity => {
                let inv = mod_inverse(u.x2 as i64, n).ok()? as u64;
                (u.x1 as u64 * inv % n as u64) as u32
            }
        };
        Some((ratio / p, idx))
    }

    /// Symplectomorphism sending `K_from0` onto `K_0` and `K_from_inf` onto `K_inf`.
    pub fn pair_normalization(&self, to_zero: ProjectiveIndex, to_inf: ProjectiveIndex) -> Result<Symplectomorphism> {
        if to_zero == to_inf {
            return Err(Error::Precondition("normalization needs two distinct indices".into()));
        }
        let (a, b) = to_zero.direction();
        let (c, d) = to_inf.direction();
        let forward = Symplectomorphism::from_columns_rescaled(self.ctx, Element::new(a, b), Element::new(c, d))?;
        Ok(forward.inverse())
    }

    /// Zero-set profile of a set against the catalog.
    pub fn profile(&self, zero_set: &SubsetBits, size: usize) -> ZeroSetProfile {
        let p = self.ctx.p();
        let (mut in_zero, mut outside) = (Vec::new(), Vec::new());
        let mut e_membership = Vec::new();
        for idx in self.indices() {
            if self.k_sub_generators(idx).is_subset(zero_set) {
                in_zero.push(idx);
            } else {
                outside.push(idx);
            }
            for j in 0..p {
                e_membership.push(EMembership {
                    j,
                    k: idx,
                    in_zero_set: self.e(j, idx).is_subset(zero_set),
                });
            }
        }
        let p2 = (p * p) as usize;
        ZeroSetProfile {
            m: in_zero,
            m_prime: outside,
            e_membership,
            d: size.is_multiple_of(p2).then_some(size / p2),
        }
    }

    /// Same partition, but driven by a difference set: `k` lands in `m` when
    /// `ΔK_k` meets `diff`, and `e_membership` records whether `E_{j,k}` meets it.
    pub fn difference_profile(&self, diff: &SubsetBits, size: usize) -> ZeroSetProfile {
        let p = self.ctx.p();
        let (mut meets, mut misses) = (Vec::new(), Vec::new());
        let mut e_membership = Vec::new();
        for idx in self.indices() {
            if self.k_sub_generators(idx).intersects(diff) {
                meets.push(idx);
            } else {
                misses.push(idx);
            }
            for j in 0..p {
                e_membership.push(EMembership {
                    j,
                    k: idx,
                    in_zero_set: self.e(j, idx).intersects(diff),
                });
            }
        }
        let p2 = (p * p) as usize;
        ZeroSetProfile {
            m: meets,
            m_prime: misses,
            e_membership,
            d: size.is_multiple_of(p2).then_some(size / p2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EMembership {
    pub j: u32,
    pub k: ProjectiveIndex,
    pub in_zero_set: bool,
}

/// Partition of the projective line by how `ΔK_k` meets a zero set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroSetProfile {
    /// Indices with `ΔK_k` inside the zero set.
    pub m: Vec<ProjectiveIndex>,
    /// The remaining indices.
    pub m_prime: Vec<ProjectiveIndex>,
    pub e_membership: Vec<EMembership>,
    /// `|A| / p^2` when integral.
    pub d: Option<usize>,
}

impl ZeroSetProfile {
    pub fn e_in(&self, j: u32, k: ProjectiveIndex) -> bool {
        self.e_membership.iter().any(|e| e.j == j && e.k == k && e.in_zero_set)
    }
}

/// Profile of `A`'s symplectic zero set.
pub fn profile_zero_set(a: &SubsetBits, catalog: &StructureCatalog) -> Result<ZeroSetProfile> {
    let z = crate::spectral::symplectic_zero_set(a)?;
    Ok(catalog.profile(&z, a.len()))
}

/// ASCII grid with `x1` across and `x2` up; row 0 is printed last.
pub fn render_grid(s: &SubsetBits) -> String {
    let n = s.ctx().n();
    let mut out = String::new();
    for x2 in (0..n).rev() {
        for x1 in 0..n {
            out.push(if s.contains(Element::new(x1, x2)) { '#' } else { '.' });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::enumerate_subgroups;

    fn z4() -> GroupContext {
        GroupContext::new(2, 2).unwrap()
    }

    fn set(pairs: &[(i64, i64)]) -> SubsetBits {
        SubsetBits::from_pairs(z4(), pairs).unwrap()
    }

    const INF: ProjectiveIndex = ProjectiveIndex::Infinity;
    const fn fin(k: u32) -> ProjectiveIndex {
        ProjectiveIndex::Finite(k)
    }

    #[test]
    fn catalog_p2() {
        let cat = StructureCatalog::new(z4()).unwrap();
        assert_eq!(cat.k().members(), &set(&[(0, 0), (2, 0), (0, 2), (2, 2)]));
        assert_eq!(cat.indices().count(), 3);
        assert_eq!(cat.lagrangian_count(), 6);
        assert_eq!(
            cat.lagrangian(1, fin(0)).members(),
            &set(&[(0, 0), (1, 2), (2, 0), (3, 2)])
        );
        assert_eq!(
            cat.lagrangian(0, fin(0)).members(),
            &set(&[(0, 0), (1, 0), (2, 0), (3, 0)])
        );
        assert_eq!(
            cat.lagrangian(0, fin(1)).members(),
            &set(&[(0, 0), (1, 1), (2, 2), (3, 3)])
        );
        assert_eq!(
            cat.lagrangian(1, fin(1)).members(),
            &set(&[(0, 0), (1, 3), (2, 2), (3, 1)])
        );
        assert_eq!(
            cat.lagrangian(0, INF).members(),
            &set(&[(0, 0), (0, 1), (0, 2), (0, 3)])
        );
        assert_eq!(
            cat.lagrangian(1, INF).members(),
            &set(&[(0, 0), (2, 1), (0, 2), (2, 3)])
        );
        assert_eq!(cat.k_sub(fin(1)).members(), &set(&[(0, 0), (2, 2)]));
        assert_eq!(cat.e_union(fin(0)), set(&[(1, 0), (3, 0), (1, 2), (3, 2)]));
        assert_eq!(cat.e_union(INF), set(&[(0, 1), (0, 3), (2, 1), (2, 3)]));
    }

    #[test]
    fn catalog_counts_p3_p5() {
        let cat = StructureCatalog::new(GroupContext::new(3, 2).unwrap()).unwrap();
        assert_eq!(cat.lagrangian_count(), 12);
        assert_eq!(cat.indices().count(), 4);
        let cat = StructureCatalog::new(GroupContext::new(5, 2).unwrap()).unwrap();
        assert_eq!(cat.lagrangian_count(), 30);
        assert!(matches!(
            StructureCatalog::new(GroupContext::new(2, 3).unwrap()),
            Err(Error::RequiresSquareGroup(3))
        ));
    }

    #[test]
    fn lagrangians_match_enumeration() {
        let g = GroupContext::new(3, 2).unwrap();
        let cat = StructureCatalog::new(g).unwrap();
        let enumerated: Vec<SubsetBits> = enumerate_subgroups(g, Some(9))
            .into_iter()
            .map(Subgroup::into_members)
            .collect();
        assert_eq!(cat.all_lagrangians(), enumerated);
    }

    #[test]
    fn labels_round_trip() {
        let g = GroupContext::new(3, 2).unwrap();
        let cat = StructureCatalog::new(g).unwrap();
        for idx in cat.indices() {
            for j in 0..3 {
                for u in cat.e(j, idx).iter() {
                    assert_eq!(cat.lagrangian_label(u), Some((j, idx)));
                }
            }
            for u in cat.k_sub_generators(idx).iter() {
                assert_eq!(cat.class_index_of(u), Some(idx));
            }
        }
    }

    #[test]
    fn pair_normalization_moves_k_subgroups() {
        let g = GroupContext::new(3, 2).unwrap();
        let cat = StructureCatalog::new(g).unwrap();
        for a in cat.indices() {
            for b in cat.indices().filter(|&b| b != a) {
                let m = cat.pair_normalization(a, b).unwrap();
                assert_eq!(&m.apply_set(cat.k_sub(a).members()), cat.k_sub(fin(0)).members());
                assert_eq!(&m.apply_set(cat.k_sub(b).members()), cat.k_sub(INF).members());
            }
        }
    }

    #[test]
    fn profile_examples() {
        let cat = StructureCatalog::new(z4()).unwrap();
        let k = profile_zero_set(cat.k().members(), &cat).unwrap();
        assert!(k.m.is_empty());
        let square = profile_zero_set(&set(&[(0, 0), (1, 0), (0, 1), (1, 1)]), &cat).unwrap();
        assert_eq!(square.m, vec![fin(0), fin(1), INF]);
        assert_eq!(square.d, Some(1));
        let row = profile_zero_set(&set(&[(0, 0), (1, 0), (2, 0), (3, 0)]), &cat).unwrap();
        assert_eq!(row.m, vec![fin(1), INF]);
        assert_eq!(row.m_prime, vec![fin(0)]);
        assert!(row.e_in(0, INF));
    }

    #[test]
    fn render_examples() {
        let cat = StructureCatalog::new(z4()).unwrap();
        assert_eq!(
            render_grid(cat.lagrangian(0, fin(0)).members()),
            "....\n....\n....\n####\n"
        );
        assert_eq!(render_grid(cat.k().members()), "....\n#.#.\n....\n#.#.\n");
        assert_eq!(
            render_grid(cat.lagrangian(1, fin(0)).members()),
            "....\n.#.#\n....\n#.#.\n"
        );
        assert_eq!(render_grid(&SubsetBits::empty(z4())), "....\n....\n....\n....\n");
    }

    #[test]
    fn projective_index_json() {
        assert_eq!(serde_json::to_string(&INF).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&fin(2)).unwrap(), "2");
        assert!(fin(4) < INF);
    }
}
