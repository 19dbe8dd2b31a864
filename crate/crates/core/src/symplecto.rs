//! Determinant-one changes of basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{mod_inverse, Element, GroupContext};
use crate::subset::SubsetBits;

/// A 2x2 matrix `[[a, b], [c, d]]` over `Z_n` with `ad - bc = 1`, acting on
/// column vectors: `(x1, x2) -> (a x1 + b x2, c x1 + d x2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symplectomorphism {
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    n: u32,
}

impl Symplectomorphism {
    pub fn new(ctx: GroupContext, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let n = ctx.n() as i64;
        let [a, b, c, d] = [a, b, c, d].map(|x| x.rem_euclid(n));
        let det = (a * d - b * c).rem_euclid(n);
        if det != 1 % n {
            return Err(Error::DeterminantNotOne {
                det: det as u32,
                n: ctx.n(),
            });
        }
        Ok(Symplectomorphism {
            a: a as u32,
            b: b as u32,
            c: c as u32,
            d: d as u32,
            n: ctx.n(),
        })
    }

    pub fn identity(ctx: GroupContext) -> Self {
        Self::new(ctx, 1, 0, 0, 1).expect("identity has determinant 1")
    }

    /// Quarter turn `[[0, 1], [-1, 0]]`.
    pub fn rotation(ctx: GroupContext) -> Self {
        Self::new(ctx, 0, 1, -1, 0).expect("rotation has determinant 1")
    }

    /// Matrix whose columns are `u` and `v`; requires `<u, v> = 1`.
    pub fn from_columns(ctx: GroupContext, u: Element, v: Element) -> Result<Self> {
        Self::new(ctx, u.x1 as i64, v.x1 as i64, u.x2 as i64, v.x2 as i64)
    }

    /// Matrix columns `u` and `s v`, where `s` rescales `det` to 1.
    pub fn from_columns_rescaled(ctx: GroupContext, u: Element, v: Element) -> Result<Self> {
        let det = ctx.symplectic_form(u, v) as i64;
        let s = mod_inverse(det, ctx.n())? as i64;
        Self::from_columns(ctx, u, ctx.scale(s, v))
    }

    pub fn entries(&self) -> [[u32; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn is_identity(&self) -> bool {
        self.entries() == [[1 % self.n, 0], [0, 1 % self.n]]
    }

    pub fn apply(&self, u: Element) -> Element {
        let n = self.n as u64;
        let (x1, x2) = (u.x1 as u64, u.x2 as u64);
        Element::new(
            ((self.a as u64 * x1 + self.b as u64 * x2) % n) as u32,
            ((self.c as u64 * x1 + self.d as u64 * x2) % n) as u32,
        )
    }

    pub fn apply_set(&self, s: &SubsetBits) -> SubsetBits {
        debug_assert_eq!(s.ctx().n(), self.n);
        s.map(|u| self.apply(u))
    }

    pub fn inverse(&self) -> Self {
        let n = self.n;
        Symplectomorphism {
            a: self.d,
            b: (n - self.b) % n,
            c: (n - self.c) % n,
            d: self.a,
            n,
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Symplectomorphism) -> Self {
        let n = self.n as u64;
        let [[a, b], [c, d]] = self.entries().map(|r| r.map(|x| x as u64));
        let [[e, f], [g, h]] = other.entries().map(|r| r.map(|x| x as u64));
        Symplectomorphism {
            a: ((a * e + b * g) % n) as u32,
            b: ((a * f + b * h) % n) as u32,
            c: ((c * e + d * g) % n) as u32,
            d: ((c * f + d * h) % n) as u32,
            n: self.n,
        }
    }
}

/// A symplectomorphism sending `target` to `(p^v, 0)`, where `p^v` is the
/// largest power of `p` dividing both coordinates.
///
/// Writing `target = p^v g` with `g` of order `n`, the partner `y` with
/// `<g, y> = 1` is read off a unit coordinate of `g`; the columns `(g, y)`
/// form the inverse map.
pub fn normalizing_symplectomorphism(ctx: GroupContext, target: Element) -> Result<Symplectomorphism> {
    ctx.check(target)?;
    if target.is_zero() {
        return Err(Error::Precondition("cannot normalize the identity".into()));
    }
    let scale = ctx.p().pow(ctx.valuation(target));
    let g = Element::new(target.x1 / scale, target.x2 / scale);
    let y = if !g.x1.is_multiple_of(ctx.p()) {
        Element::new(0, mod_inverse(g.x1 as i64, ctx.n())?)
    } else {
        ctx.neg(Element::new(mod_inverse(g.x2 as i64, ctx.n())?, 0))
    };
    Ok(Symplectomorphism::from_columns(ctx, g, y)?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> GroupContext {
        GroupContext::new(2, 2).unwrap()
    }

    #[test]
    fn rejects_bad_determinant() {
        assert!(matches!(
            Symplectomorphism::new(z4(), 2, 0, 0, 1),
            Err(Error::DeterminantNotOne { det: 2, n: 4 })
        ));
    }

    #[test]
    fn examples() {
        let g = z4();
        let row = SubsetBits::from_pairs(g, &[(0, 0), (1, 0), (2, 0), (3, 0)]).unwrap();
        let col = SubsetBits::from_pairs(g, &[(0, 0), (0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(Symplectomorphism::identity(g).apply_set(&row), row);
        assert_eq!(Symplectomorphism::rotation(g).apply_set(&row), col);
        let shear = Symplectomorphism::new(g, 1, 0, -2, 1).unwrap();
        assert_eq!(shear.apply(Element::new(1, 2)), Element::new(1, 0));
    }

    #[test]
    fn normalization_examples() {
        let g = z4();
        assert!(normalizing_symplectomorphism(g, Element::new(1, 0))
            .unwrap()
            .is_identity());
        let m = normalizing_symplectomorphism(g, Element::new(0, 1)).unwrap();
        assert_eq!(m, Symplectomorphism::rotation(g));
        let m = normalizing_symplectomorphism(g, Element::new(1, 2)).unwrap();
        assert_eq!(m.entries(), [[1, 0], [2, 1]]);
        assert!(normalizing_symplectomorphism(g, Element::ZERO).is_err());
    }

    #[test]
    fn normalization_hits_axis_everywhere() {
        for (p, m) in [(2, 2), (3, 2), (5, 1), (2, 3)] {
            let g = GroupContext::new(p, m).unwrap();
            for u in g.elements().filter(|u| !u.is_zero()) {
                let map = normalizing_symplectomorphism(g, u).unwrap();
                let target = Element::new(p.pow(g.valuation(u)), 0);
                assert_eq!(map.apply(u), target, "{u:?}");
            }
        }
    }

    #[test]
    fn inverse_and_compose() {
        let g = GroupContext::new(3, 2).unwrap();
        let m = Symplectomorphism::new(g, 2, 3, 1, 2).unwrap();
        assert!(m.compose(&m.inverse()).is_identity());
        for u in g.elements() {
            assert_eq!(m.inverse().apply(m.apply(u)), u);
        }
    }
}
