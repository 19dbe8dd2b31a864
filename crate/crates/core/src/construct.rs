//! Spectra from tiles, tiling complements from spectral sets, and periodic
//! replacement in tiling pairs.
//!
//! Every construction translates its input so that it contains `(0, 0)`,
//! optionally moves to normalized coordinates by a symplectomorphism, builds
//! the witness there and maps it back. The result is revalidated before a
//! [`Certificate`] is returned.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::Form;
use crate::error::{Error, Result};
use crate::group::{Element, GroupContext};
use crate::oracle;
use crate::spectral::{
    difference_set, equivalence_classes, is_periodic, is_spectral_pair, is_tiling_pair, symplectic_zero_set,
};
use crate::structure::{ProjectiveIndex, StructureCatalog, ZeroSetProfile};
use crate::subgroup::symplectic_orthogonal;
use crate::subset::SubsetBits;
use crate::symplecto::{normalizing_symplectomorphism, Symplectomorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupParams {
    pub p: u32,
    pub m: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    /// `witness` is a tiling complement of `set`.
    Tile,
    /// `witness` is a symplectic spectrum of `set`.
    Spectral,
}

/// How a witness was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "LmTSp")]
    SmallTileSpectrum,
    #[serde(rename = "LmTSq")]
    LargeTileSpectrum,
    #[serde(rename = "LmSTq")]
    LargeSpectralComplement,
    #[serde(rename = "LmKC")]
    KComplementSpectrum,
    #[serde(rename = "LmP2i")]
    PairSpectrum,
    #[serde(rename = "LmP2ii")]
    PairComplement,
    #[serde(rename = "ThmMain-case-i")]
    TorsionSpectrum,
    #[serde(rename = "ThmMain-case-iii-a")]
    LagrangianSpectrum,
    #[serde(rename = "ThmMain-case-1")]
    CatalogComplement,
    #[serde(rename = "ThmMain-case-2.1")]
    SpectrumAsComplement,
    #[serde(rename = "ThmMain-case-small-2.1")]
    LagrangianExtension,
    #[serde(rename = "ThmMain-case-small-2.2.2")]
    SubgroupTransversal,
    #[serde(rename = "ThmMain-case-cor-1a")]
    ReplaceByTorsionLine,
    #[serde(rename = "ThmMain-case-cor-1b")]
    ReplaceByOrthogonal,
    #[serde(rename = "ThmMain-case-cor-2a")]
    ReplaceByTorsion,
    #[serde(rename = "ThmMain-case-cor-2b")]
    ReplaceTileByLagrangian,
    #[serde(rename = "ThmMain-case-cor-2c")]
    ReplaceComplementByLagrangian,
    #[serde(rename = "oracle-fallback")]
    OracleFallback,
}

impl Method {
    pub fn tag(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    /// Map into the coordinates where the witness was built.
    pub matrix: [[u32; 2]; 2],
    /// Element subtracted from `set` to bring `(0, 0)` into it.
    pub shift: [u32; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub group: GroupParams,
    pub claim: Claim,
    pub set: Vec<[u32; 2]>,
    pub witness: Vec<[u32; 2]>,
    pub method: Method,
    pub normalization: Normalization,
    pub verified: bool,
}

pub fn pairs(s: &SubsetBits) -> Vec<[u32; 2]> {
    s.iter().map(|u| [u.x1, u.x2]).collect()
}

impl Certificate {
    pub fn ctx(&self) -> Result<GroupContext> {
        GroupContext::new(self.group.p, self.group.m)
    }

    pub fn set_bits(&self) -> Result<SubsetBits> {
        to_bits(self.ctx()?, &self.set)
    }

    pub fn witness_bits(&self) -> Result<SubsetBits> {
        to_bits(self.ctx()?, &self.witness)
    }

    /// Rechecks the claim from the serialized sets alone.
    pub fn recheck(&self) -> Result<bool> {
        let (a, w) = (self.set_bits()?, self.witness_bits()?);
        match self.claim {
            Claim::Tile => Ok(is_tiling_pair(&a, &w)?.tiles),
            Claim::Spectral => is_spectral_pair(&a, &w, Form::Symplectic),
        }
    }
}

fn to_bits(ctx: GroupContext, pairs: &[[u32; 2]]) -> Result<SubsetBits> {
    let mut s = SubsetBits::empty(ctx);
    for &[x1, x2] in pairs {
        s.insert(ctx.element(x1 as i64, x2 as i64)?);
    }
    Ok(s)
}

struct Draft {
    witness: SubsetBits,
    method: Method,
    matrix: Symplectomorphism,
}

impl Draft {
    fn plain(witness: SubsetBits, method: Method) -> Self {
        let matrix = Symplectomorphism::identity(witness.ctx());
        Draft {
            witness,
            method,
            matrix,
        }
    }
}

fn finish(original: &SubsetBits, shift: Element, claim: Claim, draft: Draft) -> Result<Certificate> {
    let ctx = original.ctx();
    let verified = match claim {
        Claim::Tile => is_tiling_pair(original, &draft.witness)?.tiles,
        Claim::Spectral => is_spectral_pair(original, &draft.witness, Form::Symplectic)?,
    };
    if !verified {
        return Err(Error::ConstructionFailed(format!(
            "{} witness failed revalidation",
            draft.method.tag()
        )));
    }
    Ok(Certificate {
        group: GroupParams { p: ctx.p(), m: ctx.m() },
        claim,
        set: pairs(original),
        witness: pairs(&draft.witness),
        method: draft.method,
        normalization: Normalization {
            matrix: draft.matrix.entries(),
            shift: [shift.x1, shift.x2],
        },
        verified,
    })
}

/// Translate so that the first element becomes `(0, 0)`.
fn to_origin(a: &SubsetBits) -> Result<(SubsetBits, Element)> {
    let shift = a.first().ok_or(Error::EmptySet)?;
    Ok((a.translate(a.ctx().neg(shift)), shift))
}

fn exponent_of(ctx: GroupContext, size: usize) -> Option<u32> {
    let p = ctx.p() as usize;
    let mut k = 0;
    let mut s = size;
    while s > 1 {
        if !s.is_multiple_of(p) {
            return None;
        }
        s /= p;
        k += 1;
    }
    (size >= 1).then_some(k)
}

/// Nontrivial generator classes in canonical order.
fn nontrivial_classes(ctx: GroupContext) -> Vec<SubsetBits> {
    let mut classes: Vec<SubsetBits> = equivalence_classes(ctx).nontrivial().cloned().collect();
    classes.sort();
    classes
}

/// `C_t = {c p^{m-t} : c < p}` inside `Z_n`.
fn c_t(ctx: GroupContext, t: u32) -> Vec<u32> {
    let step = ctx.p().pow(ctx.m() - t);
    (0..ctx.p()).map(|c| c * step).collect()
}

/// Residues whose base-`p` digit of weight `p^{t-1}` vanishes. The transform
/// of `{0} x D` at `(a, 0)` is then a product of `p`-term geometric sums that
/// vanishes exactly when `ord(a)` is neither 1 nor `p^t`.
fn d_t(ctx: GroupContext, t: u32) -> Vec<u32> {
    let w = ctx.p().pow(t - 1);
    (0..ctx.n()).filter(|y| (y / w).is_multiple_of(ctx.p())).collect()
}

/// Symplectomorphism sending the class `e` onto `E_{(p^{m-t}, 0)}`, with `p^t` the order.
fn normalize_class(ctx: GroupContext, e: &SubsetBits) -> Result<(Symplectomorphism, u32)> {
    let u = e.first().ok_or(Error::EmptySet)?;
    let map = normalizing_symplectomorphism(ctx, u)?;
    Ok((map, ctx.element_order(u).ilog(ctx.p())))
}

fn axis_set(ctx: GroupContext, xs: &[u32], ys: &[u32]) -> SubsetBits {
    let mut s = SubsetBits::empty(ctx);
    for &x in xs {
        for &y in ys {
            s.insert(Element::new(x, y));
        }
    }
    s
}

/// Spectrum of a tile of size `p`.
pub fn spectrum_for_small_tile(a: &SubsetBits) -> Result<Certificate> {
    let ctx = a.ctx();
    if a.len() != ctx.p() as usize {
        return Err(Error::Precondition(format!("expected |A| = {}", ctx.p())));
    }
    let (a0, shift) = to_origin(a)?;
    let zero = symplectic_zero_set(&a0)?;
    let class = nontrivial_classes(ctx)
        .into_iter()
        .find(|e| e.is_subset(&zero))
        .ok_or(Error::NotATile)?;
    let (map, t) = normalize_class(ctx, &class)?;
    let normalized = axis_set(ctx, &c_t(ctx, t), &[0]);
    let witness = map.inverse().apply_set(&normalized);
    finish(
        a,
        shift,
        Claim::Spectral,
        Draft {
            witness,
            method: Method::SmallTileSpectrum,
            matrix: map,
        },
    )
}

/// Spectrum of a tile of size `p^{2m-1}`.
pub fn spectrum_for_large_tile(a: &SubsetBits) -> Result<Certificate> {
    let ctx = a.ctx();
    if a.len() * ctx.p() as usize != ctx.order() {
        return Err(Error::Precondition("expected |A| = p^(2m-1)".into()));
    }
    let (a0, shift) = to_origin(a)?;
    let diff = difference_set(&a0);
    let class = nontrivial_classes(ctx)
        .into_iter()
        .find(|e| e.is_disjoint(&diff))
        .ok_or(Error::NotATile)?;
    let (map, t) = normalize_class(ctx, &class)?;
    let all: Vec<u32> = (0..ctx.n()).collect();
    let normalized = axis_set(ctx, &all, &d_t(ctx, t));
    let witness = map.inverse().apply_set(&normalized);
    finish(
        a,
        shift,
        Claim::Spectral,
        Draft {
            witness,
            method: Method::LargeTileSpectrum,
            matrix: map,
        },
    )
}

/// Tiling complement of a spectral set of size at least `p^{2m-1}`.
pub fn complement_for_large_spectral(a: &SubsetBits, s: &SubsetBits) -> Result<Certificate> {
    let ctx = a.ctx();
    if !is_spectral_pair(a, s, Form::Symplectic)? {
        return Err(Error::NotSpectral);
    }
    let order = ctx.order();
    if a.len() * (ctx.p() as usize) < order || a.len() >= order {
        return Err(Error::Precondition("expected p^(2m-1) <= |A| < p^(2m)".into()));
    }
    if a.len() * ctx.p() as usize != order {
        return Err(Error::SizeObstruction {
            size: a.len(),
            p: ctx.p(),
        });
    }
    let (a0, shift) = to_origin(a)?;
    let diff = difference_set(&a0);
    let class = nontrivial_classes(ctx)
        .into_iter()
        .find(|e| e.is_disjoint(&diff))
        .ok_or_else(|| Error::Precondition("every generator class meets the difference set".into()))?;
    let (map, t) = normalize_class(ctx, &class)?;
    let normalized = axis_set(ctx, &c_t(ctx, t), &[0]);
    let witness = map.inverse().apply_set(&normalized);
    finish(
        a,
        shift,
        Claim::Tile,
        Draft {
            witness,
            method: Method::LargeSpectralComplement,
            matrix: map,
        },
    )
}

fn trivial_witness(ctx: GroupContext, size: usize) -> SubsetBits {
    if size == 1 {
        SubsetBits::singleton(ctx, Element::ZERO)
    } else {
        SubsetBits::full(ctx)
    }
}

fn contradiction(case: &'static str, profile: ZeroSetProfile) -> Error {
    Error::Contradiction {
        case,
        profile: Some(Box::new(profile)),
    }
}

/// `K_0 ⊕ C_{0,inf}` in normalized coordinates: `{(a p, c) : a, c < p}`.
fn torsion_plus_column(ctx: GroupContext) -> SubsetBits {
    let p = ctx.p();
    let xs: Vec<u32> = (0..p).map(|a| a * p).collect();
    let ys: Vec<u32> = (0..p).collect();
    axis_set(ctx, &xs, &ys)
}

fn pair_draft(cat: &StructureCatalog, k: ProjectiveIndex, k_prime: ProjectiveIndex, method: Method) -> Result<Draft> {
    let map = cat.pair_normalization(k, k_prime)?;
    let witness = map.inverse().apply_set(&torsion_plus_column(cat.ctx()));
    Ok(Draft {
        witness,
        method,
        matrix: map,
    })
}

/// Spectrum of a tile, dispatching on `|A|`. `b` is an optional tiling complement.
pub fn spectrum_for_tile(a: &SubsetBits, b: Option<&SubsetBits>) -> Result<Certificate> {
    let ctx = a.ctx();
    if let Some(b) = b {
        if !is_tiling_pair(a, b)?.tiles {
            return Err(Error::NotATilingPair);
        }
    }
    let size = a.len();
    let k = exponent_of(ctx, size).ok_or(Error::SizeObstruction { size, p: ctx.p() })?;
    let (a0, shift) = to_origin(a)?;
    if size == 1 || size == ctx.order() {
        return finish(
            a,
            shift,
            Claim::Spectral,
            Draft::plain(trivial_witness(ctx, size), Method::Trivial),
        );
    }
    if k == 1 {
        return spectrum_for_small_tile(a);
    }
    if k == 2 * ctx.m() - 1 {
        return spectrum_for_large_tile(a);
    }
    if ctx.m() != 2 {
        return Err(Error::RequiresSquareGroup(ctx.m()));
    }

    let cat = StructureCatalog::new(ctx)?;
    let zero = symplectic_zero_set(&a0)?;
    let profile = cat.profile(&zero, size);
    let delta_k = difference_set(cat.k().members());

    if delta_k.is_subset(&zero) {
        let draft = Draft::plain(cat.k().members().clone(), Method::TorsionSpectrum);
        return finish(a, shift, Claim::Spectral, draft);
    }
    if delta_k.is_disjoint(&zero) {
        let (complement, method) = match b {
            Some(b) => (b.clone(), Method::KComplementSpectrum),
            None => (
                oracle::find_tiling_complements(&a0, 1)
                    .into_iter()
                    .next()
                    .ok_or(Error::NotATile)?,
                Method::OracleFallback,
            ),
        };
        let (complement, _) = to_origin(&complement)?;
        return finish(a, shift, Claim::Spectral, Draft::plain(complement, method));
    }

    let mut lagrangians: Vec<&SubsetBits> = profile
        .m
        .iter()
        .flat_map(|&m| (0..ctx.p()).map(move |j| (j, m)))
        .filter(|&(j, m)| cat.e(j, m).is_subset(&zero))
        .map(|(j, m)| cat.lagrangian(j, m).members())
        .collect();
    lagrangians.sort();
    if let Some(h) = lagrangians.first() {
        let draft = Draft::plain((*h).clone(), Method::LagrangianSpectrum);
        return finish(a, shift, Claim::Spectral, draft);
    }
    if let Some(&k_prime) = profile.m_prime.iter().find(|&&mp| cat.e_union(mp).is_subset(&zero)) {
        let draft = pair_draft(&cat, profile.m[0], k_prime, Method::PairSpectrum)?;
        return finish(a, shift, Claim::Spectral, draft);
    }
    if b.is_none() && oracle::find_tiling_complements(&a0, 1).is_empty() {
        return Err(Error::NotATile);
    }
    Err(contradiction("tile-p2-final", profile))
}

/// Tiling complement of a spectral set with spectrum `s`, dispatching on `|A|`.
pub fn complement_for_spectral(a: &SubsetBits, s: &SubsetBits) -> Result<Certificate> {
    let ctx = a.ctx();
    if !is_spectral_pair(a, s, Form::Symplectic)? {
        return Err(Error::NotSpectral);
    }
    let size = a.len();
    let k = exponent_of(ctx, size).ok_or(Error::SizeObstruction { size, p: ctx.p() })?;
    let (a0, shift) = to_origin(a)?;
    if size == 1 || size == ctx.order() {
        let witness = trivial_witness(ctx, ctx.order() / size);
        return finish(a, shift, Claim::Tile, Draft::plain(witness, Method::Trivial));
    }
    if k >= 2 * ctx.m() - 1 {
        return complement_for_large_spectral(a, s);
    }
    if ctx.m() != 2 {
        return Err(Error::RequiresSquareGroup(ctx.m()));
    }
    let cat = StructureCatalog::new(ctx)?;
    let (s0, _) = to_origin(s)?;
    let draft = if k == 2 {
        square_complement(&cat, &a0, &s0)?
    } else {
        linear_complement(&cat, &a0)?
    };
    finish(a, shift, Claim::Tile, draft)
}

/// Candidate complements of size `p^2` built from the catalog, in a fixed order.
fn catalog_candidates(cat: &StructureCatalog) -> Vec<SubsetBits> {
    let ctx = cat.ctx();
    let mut out = cat.all_lagrangians();
    for k in cat.indices() {
        for k_prime in cat.indices().filter(|&kp| kp != k) {
            for j in 0..ctx.p() {
                if let Some(s) = cat.k_sub(k).members().direct_sum(cat.c(j, k_prime)) {
                    out.push(s);
                }
            }
        }
    }
    for (ta, tb) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        out.push(axis_set(ctx, &c_t(ctx, ta), &c_t(ctx, tb)));
    }
    out
}

/// Extends a partial choice of `C_{j_k,k}` over the projective line, keeping
/// the union's difference set away from `diff`.
fn transversal_search(cat: &StructureCatalog, diff: &SubsetBits, pos: usize, acc: &SubsetBits) -> Option<SubsetBits> {
    let p = cat.ctx().p();
    if pos == p as usize + 1 {
        return Some(acc.clone());
    }
    let k = ProjectiveIndex::from_position(p, pos);
    for j in 0..p {
        let next = acc.union(cat.c(j, k));
        if difference_set(&next).is_disjoint(diff) {
            if let Some(found) = transversal_search(cat, diff, pos + 1, &next) {
                return Some(found);
            }
        }
    }
    None
}

fn square_complement(cat: &StructureCatalog, a0: &SubsetBits, s0: &SubsetBits) -> Result<Draft> {
    let ctx = cat.ctx();
    let diff = difference_set(a0);
    let p2 = (ctx.p() * ctx.p()) as usize;
    if let Some(b) = catalog_candidates(cat)
        .into_iter()
        .find(|b| b.len() == p2 && difference_set(b).is_disjoint(&diff))
    {
        return Ok(Draft::plain(b, Method::CatalogComplement));
    }
    let origin = SubsetBits::singleton(ctx, Element::ZERO);
    if let Some(b) = transversal_search(cat, &diff, 0, &origin) {
        return Ok(Draft::plain(b, Method::CatalogComplement));
    }

    let profile = cat.difference_profile(&diff, a0.len());
    if profile.m_prime.is_empty() {
        if a0.len() == p2 && is_tiling_pair(a0, s0)?.tiles {
            return Ok(Draft::plain(s0.clone(), Method::SpectrumAsComplement));
        }
        return Err(contradiction("spectral-p2-2.1", profile));
    }
    for &k in &profile.m_prime {
        if let Some(&k_prime) = profile.m.iter().find(|&&m| cat.e_union(m).is_disjoint(&diff)) {
            return pair_draft(cat, k, k_prime, Method::PairComplement);
        }
    }
    Err(contradiction("spectral-p2-2.2", profile))
}

fn linear_complement(cat: &StructureCatalog, a0: &SubsetBits) -> Result<Draft> {
    let ctx = cat.ctx();
    let diff = difference_set(a0);
    for l in cat
        .all_lagrangians()
        .iter()
        .filter(|l| difference_set(l).is_disjoint(&diff))
    {
        let sum = a0.direct_sum(l).expect("difference sets are disjoint");
        let sum_diff = difference_set(&sum);
        let torsion = cat.indices().map(|k| cat.k_sub(k).members());
        let lines = cat.indices().flat_map(|k| (0..ctx.p()).map(move |j| cat.c(j, k)));
        for extra in torsion.chain(lines) {
            if difference_set(extra).is_disjoint(&sum_diff) {
                if let Some(b) = l.direct_sum(extra) {
                    return Ok(Draft::plain(b, Method::LagrangianExtension));
                }
            }
        }
    }
    for k_star in cat.indices() {
        let ambient = symplectic_orthogonal(cat.k_sub(k_star));
        if !a0.is_subset(ambient.members()) {
            continue;
        }
        let k_other = cat.indices().find(|&k| k != k_star).expect("p + 1 >= 3 indices");
        for j_star in 0..ctx.p() {
            let h = cat.lagrangian(j_star, k_star).members();
            if !difference_set(h).is_disjoint(&diff) {
                continue;
            }
            if let Some(b) = h.direct_sum(cat.c(0, k_other)) {
                return Ok(Draft::plain(b, Method::SubgroupTransversal));
            }
        }
    }
    Err(contradiction("spectral-small", cat.difference_profile(&diff, a0.len())))
}

/// Which component of a tiling pair was replaced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

/// A tiling pair with one periodic component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replacement {
    /// `set` is the (possibly new) first component, `witness` the second.
    pub certificate: Certificate,
    pub replaced: Side,
    /// The stabilizer of the replaced component.
    pub period: Vec<[u32; 2]>,
}

/// Replaces one component of a non-periodic tiling pair by a periodic set.
pub fn periodic_replacement(a: &SubsetBits, b: &SubsetBits) -> Result<Replacement> {
    let ctx = a.ctx();
    if !is_tiling_pair(a, b)?.tiles {
        return Err(Error::NotATilingPair);
    }
    if is_periodic(a).is_some() {
        return Err(Error::AlreadyPeriodic("A"));
    }
    if is_periodic(b).is_some() {
        return Err(Error::AlreadyPeriodic("B"));
    }
    if ctx.m() != 2 {
        return Err(Error::RequiresSquareGroup(ctx.m()));
    }
    let cat = StructureCatalog::new(ctx)?;
    let swapped = a.len() < b.len();
    let (big, small) = if swapped { (b, a) } else { (a, b) };

    let (new_big, new_small, method, replaced_big) = replace_sorted(&cat, big, small)?;
    let (first, second) = if swapped {
        (new_small, new_big)
    } else {
        (new_big, new_small)
    };
    let replaced = match (swapped, replaced_big) {
        (false, true) | (true, false) => Side::A,
        _ => Side::B,
    };
    let periodic = if replaced == Side::A { &first } else { &second };
    let period =
        is_periodic(periodic).ok_or_else(|| Error::ConstructionFailed("replacement is not periodic".into()))?;
    let certificate = finish(&first, Element::ZERO, Claim::Tile, Draft::plain(second.clone(), method))?;
    Ok(Replacement {
        certificate,
        replaced,
        period: pairs(period.members()),
    })
}

/// Returns `(big', small', method, whether big was replaced)`, with `|big| >= |small|`.
fn replace_sorted(
    cat: &StructureCatalog,
    big: &SubsetBits,
    small: &SubsetBits,
) -> Result<(SubsetBits, SubsetBits, Method, bool)> {
    let ctx = cat.ctx();
    let p = ctx.p() as usize;
    let diff = difference_set(big);
    let tiles_with = |x: &SubsetBits, y: &SubsetBits| is_tiling_pair(x, y).map(|c| c.tiles);
    let profile = cat.difference_profile(&diff, big.len());

    if big.len() == p * p * p && small.len() == p {
        for k in cat.indices() {
            let line = cat.k_sub(k).members();
            if tiles_with(big, line)? {
                return Ok((big.clone(), line.clone(), Method::ReplaceByTorsionLine, false));
            }
        }
        for k in cat.indices() {
            let ortho = symplectic_orthogonal(cat.k_sub(k)).into_members();
            if tiles_with(&ortho, small)? {
                return Ok((ortho, small.clone(), Method::ReplaceByOrthogonal, true));
            }
        }
        return Err(contradiction("periodic-p3-p", profile));
    }
    if big.len() == p * p && small.len() == p * p {
        let k_members = cat.k().members();
        if profile.m_prime.is_empty() && tiles_with(k_members, small)? {
            return Ok((k_members.clone(), small.clone(), Method::ReplaceByTorsion, true));
        }
        for k in cat.indices() {
            let meets_k = cat.k_sub_generators(k).intersects(&diff);
            for j in 0..ctx.p() {
                let meets_e = cat.e(j, k).intersects(&diff);
                let h = cat.lagrangian(j, k).members();
                if meets_k && meets_e && tiles_with(h, small)? {
                    return Ok((h.clone(), small.clone(), Method::ReplaceTileByLagrangian, true));
                }
                if !meets_k && !meets_e && tiles_with(big, h)? {
                    return Ok((big.clone(), h.clone(), Method::ReplaceComplementByLagrangian, false));
                }
            }
        }
        for &k in &profile.m_prime {
            if let Some(&k_prime) = profile.m.iter().find(|&&m| cat.e_union(m).is_disjoint(&diff)) {
                let draft = pair_draft(cat, k, k_prime, Method::PairComplement)?;
                if tiles_with(big, &draft.witness)? {
                    return Ok((big.clone(), draft.witness, draft.method, false));
                }
            }
        }
        return Err(contradiction("periodic-p2-p2", profile));
    }
    Err(Error::Precondition(format!(
        "no non-periodic tiling pair has sizes ({}, {})",
        big.len(),
        small.len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn witness(c: &Certificate) -> SubsetBits {
        c.witness_bits().unwrap()
    }

    #[test]
    fn small_tile_examples() {
        let c = spectrum_for_small_tile(&set(&[(0, 0), (1, 0)])).unwrap();
        assert_eq!(witness(&c), set(&[(0, 0), (0, 2)]));
        assert_eq!(c.method, Method::SmallTileSpectrum);
        let c = spectrum_for_small_tile(&set(&[(0, 0), (0, 1)])).unwrap();
        assert_eq!(witness(&c), set(&[(0, 0), (2, 0)]));
        let a = set(&[(0, 0), (2, 0)]);
        let c = spectrum_for_small_tile(&a).unwrap();
        assert!(is_spectral_pair(&a, &witness(&c), Form::Symplectic).unwrap());
    }

    #[test]
    fn large_tile_examples() {
        let a = set(&[(0, 0), (0, 1), (0, 2), (0, 3), (2, 0), (2, 1), (2, 2), (2, 3)]);
        let c = spectrum_for_large_tile(&a).unwrap();
        assert_eq!(
            witness(&c),
            set(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1), (3, 1)])
        );
        let band = set(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 2), (1, 2), (2, 2), (3, 2)]);
        assert!(!is_spectral_pair(&a, &band, Form::Symplectic).unwrap());
        let a = set(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1), (3, 1)]);
        assert!(spectrum_for_large_tile(&a).unwrap().verified);
    }

    #[test]
    fn large_spectral_examples() {
        let strip = set(&[(0, 0), (0, 1), (0, 2), (0, 3), (2, 0), (2, 1), (2, 2), (2, 3)]);
        let band = set(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 2), (1, 2), (2, 2), (3, 2)]);
        let low_rows = set(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1), (3, 1)]);
        let low_cols = set(&[(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (1, 3)]);
        let c = complement_for_large_spectral(&strip, &low_rows).unwrap();
        assert_eq!(witness(&c), set(&[(0, 0), (1, 0)]));
        let c = complement_for_large_spectral(&band, &low_cols).unwrap();
        assert_eq!(witness(&c), set(&[(0, 0), (0, 1)]));
        assert!(matches!(
            complement_for_large_spectral(&strip, &square()),
            Err(Error::NotSpectral)
        ));
    }

    #[test]
    fn tile_case_examples() {
        let c = spectrum_for_tile(&square(), None).unwrap();
        assert_eq!(witness(&c), k());
        assert_eq!(c.method.tag(), "ThmMain-case-i");
        let c = spectrum_for_tile(&k(), Some(&square())).unwrap();
        assert_eq!(witness(&c), square());
        assert_eq!(c.method, Method::KComplementSpectrum);
        let c = spectrum_for_tile(&k(), None).unwrap();
        assert_eq!(c.method, Method::OracleFallback);
        let row = set(&[(0, 0), (1, 0), (2, 0), (3, 0)]);
        let c = spectrum_for_tile(&row, None).unwrap();
        assert_eq!(witness(&c), set(&[(0, 0), (0, 1), (0, 2), (0, 3)]));
        assert_eq!(c.method.tag(), "ThmMain-case-iii-a");
    }

    #[test]
    fn spectral_case_examples() {
        let c = complement_for_spectral(&square(), &k()).unwrap();
        assert_eq!(witness(&c), k());
        let c = complement_for_spectral(&k(), &square()).unwrap();
        assert!(c.verified);
        let c = complement_for_spectral(&set(&[(0, 0), (1, 0)]), &set(&[(0, 0), (0, 2)])).unwrap();
        assert_eq!(
            witness(&c),
            set(&[(0, 0), (0, 1), (0, 2), (0, 3), (2, 0), (2, 1), (2, 2), (2, 3)])
        );
    }

    #[test]
    fn shifted_inputs() {
        let a = square().translate(Element::new(3, 2));
        let c = spectrum_for_tile(&a, None).unwrap();
        assert_eq!(c.normalization.shift, [0, 2]);
        assert!(c.recheck().unwrap());
    }

    #[test]
    fn size_obstruction() {
        let a = set(&[(0, 0), (1, 1), (2, 0)]);
        assert!(matches!(
            spectrum_for_tile(&a, None),
            Err(Error::SizeObstruction { size: 3, p: 2 })
        ));
    }

    #[test]
    fn periodic_rejected() {
        assert!(matches!(
            periodic_replacement(&square(), &k()),
            Err(Error::AlreadyPeriodic("B"))
        ));
    }

    #[test]
    fn certificate_json_shape() {
        let c = spectrum_for_tile(&square(), None).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["claim"], "spectral");
        assert_eq!(v["method"], "ThmMain-case-i");
        assert_eq!(v["group"]["p"], 2);
        assert_eq!(v["normalization"]["matrix"], serde_json::json!([[1, 0], [0, 1]]));
        let back: Certificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }

    /// The case analysis also applies when the inputs happen to be periodic.
    #[test]
    fn replacement_cases_on_periodic_pairs() {
        use rand::SeedableRng;
        let mut pairs_seen = Vec::new();
        let tables = oracle::exhaustive_tables(z4(), 4).unwrap();
        for (a, b) in oracle::all_tiling_pairs(&tables, 8) {
            if (a.len(), b.len()) == (8, 2) || (a.len(), b.len()) == (4, 4) {
                pairs_seen.push((a, b));
            }
        }
        let g9 = GroupContext::new(3, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for h in crate::subgroup::enumerate_subgroups(g9, None) {
            if h.len() == 3 || h.len() == 9 {
                for _ in 0..20 {
                    let t = oracle::random_transversal(&h, &mut rng);
                    pairs_seen.push(if h.len() == 3 {
                        (t, h.members().clone())
                    } else {
                        (h.members().clone(), t)
                    });
                }
            }
        }
        let mut replaced_count = 0;
        for (big, small) in &pairs_seen {
            let cat = StructureCatalog::new(big.ctx()).unwrap();
            match replace_sorted(&cat, big, small) {
                Ok((x, y, method, replaced_big)) => {
                    assert!(is_tiling_pair(&x, &y).unwrap().tiles, "{method:?}");
                    assert!(is_periodic(if replaced_big { &x } else { &y }).is_some(), "{method:?}");
                    replaced_count += 1;
                }
                // Complements equal to K fall outside the non-periodic case analysis.
                Err(Error::Contradiction { .. }) => assert_eq!(small, cat.k().members()),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(replaced_count * 10 > pairs_seen.len() * 9);
    }
}
