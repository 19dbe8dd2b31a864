use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fuglede_core::construct::{complement_for_spectral, spectrum_for_tile};
use fuglede_core::cyclotomic::Form;
use fuglede_core::group::{Element, GroupContext};
use fuglede_core::oracle::{
    exhaustive_tables, find_spectra, find_tiling_complements, lemma_check, verify_fuglede, Mode,
};
use fuglede_core::spectral::symplectic_zero_set;
use fuglede_core::subset::SubsetBits;

fn z4() -> GroupContext {
    GroupContext::new(2, 2).unwrap()
}

fn square() -> SubsetBits {
    SubsetBits::from_pairs(z4(), &[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap()
}

/// Translate of a 16-bit mask over Z_4 x Z_4 (bit `4 x1 + x2`).
fn shift_mask(mask: u16, t: usize) -> u16 {
    let mut out = 0u16;
    for i in (0..16).filter(|i| mask >> i & 1 == 1) {
        let (x1, x2) = ((i / 4 + t / 4) % 4, (i % 4 + t % 4) % 4);
        out |= 1 << (4 * x1 + x2);
    }
    out
}

/// Complements of `a` containing 0, by trying every mask.
fn brute_complements(a: u16) -> Vec<u16> {
    let k = 16 / a.count_ones();
    (0..=u16::MAX)
        .filter(|&b| b & 1 == 1 && b.count_ones() == k)
        .filter(|&b| {
            let mut covered = 0u16;
            for t in (0..16).filter(|t| b >> t & 1 == 1) {
                let piece = shift_mask(a, t);
                if covered & piece != 0 {
                    return false;
                }
                covered |= piece;
            }
            covered == u16::MAX
        })
        .collect()
}

fn float_sum(a: &SubsetBits, xi: Element) -> (f64, f64) {
    let g = a.ctx();
    let n = g.n() as f64;
    a.iter().fold((0.0, 0.0), |(re, im), u| {
        let angle = TAU * g.symplectic_form(u, xi) as f64 / n;
        (re + angle.cos(), im + angle.sin())
    })
}

fn float_vanishes(a: &SubsetBits, xi: Element) -> bool {
    let (re, im) = float_sum(a, xi);
    re.hypot(im) < 1e-9
}

#[test]
fn exact_cover_count_matches_bitmask_search() {
    let a = square();
    let brute = brute_complements(a.mask() as u16);
    let found: Vec<u16> = find_tiling_complements(&a, usize::MAX)
        .iter()
        .map(|b| b.mask() as u16)
        .collect();
    let mut sorted = found.clone();
    sorted.sort();
    assert_eq!(sorted, brute);
    assert!(found.contains(
        &(SubsetBits::from_pairs(z4(), &[(0, 0), (2, 0), (0, 2), (2, 2)])
            .unwrap()
            .mask() as u16)
    ));
}

#[test]
fn complements_match_bitmask_search_on_every_size_four_set() {
    let tables = exhaustive_tables(z4(), 2).unwrap();
    for mask in tables.masks().filter(|m| m.count_ones() == 4 && m & 1 == 1) {
        let found = find_tiling_complements(&tables.set(mask), usize::MAX).len();
        assert_eq!(found, brute_complements(mask as u16).len(), "mask {mask:#06x}");
    }
}

#[test]
fn spectra_match_floating_point_search() {
    let g = z4();
    let a = square();
    let mut brute = Vec::new();
    for mask in (0..=u16::MAX as u64).filter(|m| m & 1 == 1 && m.count_ones() == 4) {
        let s = SubsetBits::from_mask(g, mask);
        let ok = s
            .iter()
            .all(|x| s.iter().all(|y| x == y || float_vanishes(&a, g.sub(x, y))));
        if ok {
            brute.push(s);
        }
    }
    let mut found = find_spectra(&a, usize::MAX, Form::Symplectic);
    found.sort();
    brute.sort();
    assert_eq!(found, brute);
}

#[test]
fn search_examples() {
    let g = z4();
    let full = SubsetBits::full(g);
    let origin = SubsetBits::singleton(g, Element::ZERO);
    assert_eq!(find_tiling_complements(&full, 10), vec![origin.clone()]);
    assert_eq!(find_spectra(&full, 10, Form::Symplectic), vec![full.clone()]);
    assert_eq!(find_spectra(&origin, 10, Form::Symplectic), vec![origin.clone()]);
    let three = SubsetBits::from_pairs(g, &[(0, 0), (1, 1), (2, 0)]).unwrap();
    assert!(find_tiling_complements(&three, 10).is_empty());
    assert!(find_spectra(&three, 10, Form::Symplectic).is_empty());
}

#[test]
fn exact_zero_sets_match_floating_point() {
    let g = GroupContext::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let size = rng.gen_range(1..=30);
        let a = SubsetBits::from_indices(g, (0..size).map(|_| rng.gen_range(0..g.order())));
        let zero = symplectic_zero_set(&a).unwrap();
        for xi in g.elements().skip(1) {
            assert_eq!(zero.contains(xi), float_vanishes(&a, xi), "{xi:?}");
        }
    }
}

/// Translates of `w` that contain the origin.
fn origin_translates(w: &SubsetBits) -> Vec<SubsetBits> {
    let g = w.ctx();
    w.iter().map(|u| w.translate(g.neg(u))).collect()
}

#[test]
fn constructor_witnesses_appear_in_oracle_output() {
    let tables = exhaustive_tables(z4(), 4).unwrap();
    for mask in tables.masks().skip(1) {
        let a = tables.set(mask);
        if tables.tile[mask as usize] {
            let witness = spectrum_for_tile(&a, None).unwrap().witness_bits().unwrap();
            let spectra = find_spectra(&a, usize::MAX, Form::Symplectic);
            assert!(
                origin_translates(&witness).iter().any(|w| spectra.contains(w)),
                "mask {mask:#06x}"
            );
        }
        if tables.spectral[mask as usize] {
            let s = find_spectra(&a, 1, Form::Symplectic).remove(0);
            let witness = complement_for_spectral(&a, &s).unwrap().witness_bits().unwrap();
            let complements = find_tiling_complements(&a, usize::MAX);
            assert!(
                origin_translates(&witness).iter().any(|w| complements.contains(w)),
                "mask {mask:#06x}"
            );
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let g9 = GroupContext::new(3, 2).unwrap();
    let first = verify_fuglede(g9, Mode::Sampled, 20, 5, 1).unwrap();
    let second = verify_fuglede(g9, Mode::Sampled, 20, 5, 1).unwrap();
    assert!(first.passed());
    assert_eq!(first.without_timing(), second.without_timing());
    for tag in ["counting", "uncertainty", "gen-closure"] {
        let a = lemma_check(tag, 50, 9).unwrap();
        let b = lemma_check(tag, 50, 9).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
    }
}

#[test]
fn tables_do_not_depend_on_thread_count() {
    assert_eq!(exhaustive_tables(z4(), 1).unwrap(), exhaustive_tables(z4(), 3).unwrap());
    let report = verify_fuglede(z4(), Mode::Exhaustive, 0, 0, 2).unwrap();
    assert!(report.passed());
    assert_eq!(report.examined, 65535);
}
