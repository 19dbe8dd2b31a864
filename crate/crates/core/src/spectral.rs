//! Subset predicates: difference sets, zero sets, tiling and spectral pairs.

use crate::cyclotomic::{exponent_vector, is_vanishing_sum, Form};
use crate::error::{Error, Result};
use crate::group::{gcd, Element, GroupContext};
use crate::subgroup::Subgroup;
use crate::subset::SubsetBits;

/// `{a - a' : a, a' in A, a != a'}`.
pub fn difference_set(a: &SubsetBits) -> SubsetBits {
    let ctx = a.ctx();
    let members = a.to_vec();
    let mut out = SubsetBits::empty(ctx);
    for &x in &members {
        for &y in &members {
            if x != y {
                out.insert(ctx.sub(x, y));
            }
        }
    }
    out
}

/// Frequencies at which the transform of an indicator vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSet {
    members: SubsetBits,
    form: Form,
}

impl ZeroSet {
    pub fn members(&self) -> &SubsetBits {
        &self.members
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn contains(&self, xi: Element) -> bool {
        self.members.contains(xi)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Complement of the zero set, i.e. the support of the transform.
    pub fn support(&self) -> SubsetBits {
        self.members.complement()
    }
}

/// Whether the character sum of `set` at `xi` vanishes.
pub fn transform_vanishes(set: &SubsetBits, xi: Element, form: Form) -> bool {
    is_vanishing_sum(&exponent_vector(set, xi, form))
}

/// Exact zero set over all `n^2 - 1` nonzero frequencies.
pub fn zero_set(set: &SubsetBits, form: Form) -> Result<ZeroSet> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let ctx = set.ctx();
    let members = SubsetBits::from_indices(
        ctx,
        (1..ctx.order()).filter(|&i| transform_vanishes(set, ctx.element_at(i), form)),
    );
    Ok(ZeroSet { members, form })
}

/// Symplectic zero set of a nonempty set.
pub fn symplectic_zero_set(set: &SubsetBits) -> Result<SubsetBits> {
    Ok(zero_set(set, Form::Symplectic)?.members)
}

/// Outcome of a tiling check with both routes reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingCheck {
    pub tiles: bool,
    pub sizes_match: bool,
    pub differences_disjoint: bool,
    /// Elements covered other than exactly once by `A + B`.
    pub miscovered: usize,
}

/// Decides `A ⊕ B = G` by the difference-set criterion and by direct
/// coverage counting; the two must agree.
pub fn is_tiling_pair(a: &SubsetBits, b: &SubsetBits) -> Result<TilingCheck> {
    a.check_same_group(b)?;
    let ctx = a.ctx();
    let sizes_match = a.len() * b.len() == ctx.order();
    let differences_disjoint = difference_set(a).is_disjoint(&difference_set(b));
    let by_difference = sizes_match && differences_disjoint;

    let mut hits = vec![0u32; ctx.order()];
    for x in a.iter() {
        for y in b.iter() {
            hits[ctx.index(ctx.add(x, y))] += 1;
        }
    }
    let miscovered = hits.iter().filter(|&&h| h != 1).count();
    let by_coverage = miscovered == 0;

    if by_difference != by_coverage {
        return Err(Error::RouteDisagreement {
            by_difference,
            by_coverage,
        });
    }
    Ok(TilingCheck {
        tiles: by_coverage,
        sizes_match,
        differences_disjoint,
        miscovered,
    })
}

/// Convenience wrapper returning only the verdict.
pub fn tiles(a: &SubsetBits, b: &SubsetBits) -> Result<bool> {
    Ok(is_tiling_pair(a, b)?.tiles)
}

/// `|A| = |S|` and `ΔS ⊆ Z(1_A)`.
pub fn is_spectral_pair(a: &SubsetBits, s: &SubsetBits, form: Form) -> Result<bool> {
    a.check_same_group(s)?;
    if a.len() != s.len() {
        return Ok(false);
    }
    if a.is_empty() {
        return Ok(true);
    }
    // Only the differences of S need testing.
    let ds = difference_set(s);
    let ok = ds.iter().all(|xi| transform_vanishes(a, xi, form));
    Ok(ok)
}

/// `{q a : a in A}`.
pub fn dilate(a: &SubsetBits, q: i64) -> SubsetBits {
    let ctx = a.ctx();
    a.map(|u| ctx.scale(q, u))
}

/// Partition of the group into generator sets of cyclic subgroups.
#[derive(Clone, Debug)]
pub struct EquivalenceClasses {
    classes: Vec<SubsetBits>,
    class_of: Vec<usize>,
}

impl EquivalenceClasses {
    /// Classes ordered by their smallest member.
    pub fn classes(&self) -> &[SubsetBits] {
        &self.classes
    }

    pub fn class_index(&self, ctx: &GroupContext, u: Element) -> usize {
        self.class_of[ctx.index(u)]
    }

    pub fn class_of(&self, ctx: &GroupContext, u: Element) -> &SubsetBits {
        &self.classes[self.class_index(ctx, u)]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Nontrivial classes, i.e. all but `{(0,0)}`.
    pub fn nontrivial(&self) -> impl Iterator<Item = &SubsetBits> {
        self.classes.iter().filter(|c| !c.contains(Element::ZERO))
    }
}

/// Generators of `<u>`: the multiples `k u` with `gcd(k, p) = 1`.
pub fn generator_class(ctx: GroupContext, u: Element) -> SubsetBits {
    let order = ctx.element_order(u) as u64;
    let mut out = SubsetBits::empty(ctx);
    for k in (1..=order).filter(|&k| gcd(k, ctx.p() as u64) == 1) {
        out.insert(ctx.scale(k as i64, u));
    }
    out
}

pub fn equivalence_classes(ctx: GroupContext) -> EquivalenceClasses {
    let mut class_of = vec![usize::MAX; ctx.order()];
    let mut classes = Vec::new();
    for i in 0..ctx.order() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let class = generator_class(ctx, ctx.element_at(i));
        for j in class.indices() {
            class_of[j] = classes.len();
        }
        classes.push(class);
    }
    EquivalenceClasses { classes, class_of }
}

/// Stabilizer `{h : A + h = A}`, returned only when nontrivial.
pub fn is_periodic(a: &SubsetBits) -> Option<Subgroup> {
    let stabilizer = stabilizer(a);
    (stabilizer.len() > 1).then(|| Subgroup::from_members(stabilizer).expect("stabilizers are subgroups"))
}

pub fn stabilizer(a: &SubsetBits) -> SubsetBits {
    let ctx = a.ctx();
    let Some(a0) = a.first() else {
        return SubsetBits::full(ctx);
    };
    // Any period h maps a0 into A, so h ranges over A - a0.
    let mut out = SubsetBits::empty(ctx);
    for x in a.iter() {
        let h = ctx.sub(x, a0);
        if a.iter().all(|y| a.contains(ctx.add(y, h))) {
            out.insert(h);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::{enumerate_subgroups, symplectic_orthogonal};

    fn z4() -> GroupContext {
        GroupContext::new(2, 2).unwrap()
    }

    fn set(pairs: &[(i64, i64)]) -> SubsetBits {
        SubsetBits::from_pairs(z4(), pairs).unwrap()
    }

    fn square() -> SubsetBits {
        set(&[(0, 0), (1, 0), (0, 1), (1, 1)])
    }

    fn k() -> SubsetBits {
        set(&[(0, 0), (2, 0), (0, 2), (2, 2)])
    }

    fn row() -> SubsetBits {
        set(&[(0, 0), (1, 0), (2, 0), (3, 0)])
    }

    fn col() -> SubsetBits {
        set(&[(0, 0), (0, 1), (0, 2), (0, 3)])
    }

    #[test]
    fn difference_examples() {
        assert!(difference_set(&set(&[(0, 0)])).is_empty());
        assert_eq!(difference_set(&set(&[(0, 0), (1, 0)])), set(&[(1, 0), (3, 0)]));
        assert_eq!(difference_set(&k()), set(&[(2, 0), (0, 2), (2, 2)]));
    }

    #[test]
    fn zero_set_examples() {
        let g = z4();
        for h in enumerate_subgroups(g, None) {
            let z = symplectic_zero_set(h.members()).unwrap();
            assert_eq!(z, symplectic_orthogonal(&h).members().complement());
        }
        assert!(symplectic_zero_set(&set(&[(0, 0)])).unwrap().is_empty());
        assert!(difference_set(&k()).is_subset(&symplectic_zero_set(&square()).unwrap()));
        assert!(matches!(
            zero_set(&SubsetBits::empty(g), Form::Symplectic),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn tiling_examples() {
        assert!(is_tiling_pair(&square(), &k()).unwrap().tiles);
        let kk = is_tiling_pair(&k(), &k()).unwrap();
        assert!(!kk.tiles && kk.sizes_match && !kk.differences_disjoint);
        assert!(is_tiling_pair(&SubsetBits::full(z4()), &set(&[(0, 0)])).unwrap().tiles);
        let other = SubsetBits::from_pairs(GroupContext::new(3, 1).unwrap(), &[(0, 0)]).unwrap();
        assert!(matches!(is_tiling_pair(&k(), &other), Err(Error::ContextMismatch)));
    }

    #[test]
    fn spectral_examples() {
        assert!(is_spectral_pair(&row(), &col(), Form::Symplectic).unwrap());
        assert!(is_spectral_pair(&square(), &k(), Form::Symplectic).unwrap());
        assert!(is_spectral_pair(&k(), &square(), Form::Symplectic).unwrap());
        assert!(!is_spectral_pair(&square(), &set(&[(0, 0)]), Form::Symplectic).unwrap());
        // Euclidean spectra are quarter turns of symplectic ones.
        assert!(is_spectral_pair(&row(), &row(), Form::Euclidean).unwrap());
    }

    #[test]
    fn dilation_examples() {
        assert_eq!(dilate(&square(), 1), square());
        let d = dilate(&square(), 3);
        assert_eq!(d, set(&[(0, 0), (3, 0), (0, 3), (3, 3)]));
        assert!(is_tiling_pair(&d, &k()).unwrap().tiles);
        assert_eq!(dilate(&k(), 3), k());
    }

    #[test]
    fn class_examples() {
        let g = z4();
        let classes = equivalence_classes(g);
        assert_eq!(classes.len(), 10);
        assert_eq!(classes.class_of(&g, Element::new(2, 0)), &set(&[(2, 0)]));
        assert_eq!(classes.class_of(&g, Element::new(1, 0)), &set(&[(1, 0), (3, 0)]));
        let sizes: usize = classes.classes().iter().map(|c| c.len()).sum();
        assert_eq!(sizes, 16);
        let g9 = GroupContext::new(3, 2).unwrap();
        // 1 + 4 classes of size 2 + 12 classes of size 6.
        assert_eq!(equivalence_classes(g9).len(), 17);
    }

    #[test]
    fn periodicity_examples() {
        assert_eq!(is_periodic(&k()).unwrap().members(), &k());
        assert!(is_periodic(&set(&[(0, 0), (1, 0)])).is_none());
        let strip = set(&[(0, 0), (0, 1), (0, 2), (0, 3), (2, 0), (2, 1), (2, 2), (2, 3)]);
        assert_eq!(is_periodic(&strip).unwrap().members(), &strip);
        assert!(is_periodic(&square()).is_none());
    }
}
