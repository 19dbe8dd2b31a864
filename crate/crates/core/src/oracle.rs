//! Brute-force ground truth: complement and spectrum searches, whole-group
//! verification of the tile/spectral equivalence, and a battery of lemma checks.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construct::{self, pairs};
use crate::cyclotomic::{exponent_vector, is_vanishing_sum, Form};
use crate::error::{Error, Result};
use crate::group::{gcd, Element, GroupContext};
use crate::spectral::{difference_set, dilate, equivalence_classes, is_tiling_pair, symplectic_zero_set, zero_set};
use crate::structure::{ProjectiveIndex, StructureCatalog};
use crate::subgroup::{enumerate_subgroups, symplectic_orthogonal, Subgroup};
use crate::subset::SubsetBits;

/// Recognized `lemma_check` tags.
pub const LEMMA_TAGS: &[&str] = &[
    "counting",
    "poisson",
    "zero-set",
    "uncertainty",
    "dilation",
    "diff-classes",
    "gen-closure",
    "annihilation-bound",
    "rotation",
    "pl2-premises",
];

struct Cover<'a> {
    ctx: GroupContext,
    shape: &'a [Element],
    covered: Vec<bool>,
    chosen: Vec<Element>,
    out: Vec<SubsetBits>,
    limit: usize,
}

impl Cover<'_> {
    fn fits(&self, b: Element) -> bool {
        self.shape
            .iter()
            .all(|&a| !self.covered[self.ctx.index(self.ctx.add(a, b))])
    }

    fn mark(&mut self, b: Element, value: bool) {
        for &a in self.shape {
            let i = self.ctx.index(self.ctx.add(a, b));
            self.covered[i] = value;
        }
    }

    fn search(&mut self) {
        if self.out.len() >= self.limit {
            return;
        }
        // Branch on the uncovered cell with the fewest placements.
        let mut best: Option<Vec<Element>> = None;
        for cell in 0..self.ctx.order() {
            if self.covered[cell] {
                continue;
            }
            let g = self.ctx.element_at(cell);
            let options: Vec<Element> = self
                .shape
                .iter()
                .map(|&a| self.ctx.sub(g, a))
                .filter(|&b| self.fits(b))
                .collect();
            if options.is_empty() {
                return;
            }
            if best.as_ref().is_none_or(|b| options.len() < b.len()) {
                let single = options.len() == 1;
                best = Some(options);
                if single {
                    break;
                }
            }
        }
        let Some(options) = best else {
            let found = SubsetBits::from_elements(self.ctx, self.chosen.iter().copied())
                .expect("chosen translates lie in the group");
            self.out.push(found);
            return;
        };
        for b in options {
            self.mark(b, true);
            self.chosen.push(b);
            self.search();
            self.chosen.pop();
            self.mark(b, false);
            if self.out.len() >= self.limit {
                return;
            }
        }
    }
}

/// Up to `limit` tiling complements of `a` containing `(0, 0)`, sorted.
pub fn find_tiling_complements(a: &SubsetBits, limit: usize) -> Vec<SubsetBits> {
    let ctx = a.ctx();
    if a.is_empty() || !ctx.order().is_multiple_of(a.len()) || limit == 0 {
        return Vec::new();
    }
    let shape = a.to_vec();
    let mut cover = Cover {
        ctx,
        shape: &shape,
        covered: vec![false; ctx.order()],
        chosen: vec![Element::ZERO],
        out: Vec::new(),
        limit,
    };
    cover.mark(Element::ZERO, true);
    cover.search();
    let mut out = cover.out;
    out.sort();
    out
}

/// Result of a spectrum search with a node budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSearch {
    pub found: Vec<SubsetBits>,
    /// False when the budget ran out before the search space was exhausted.
    pub complete: bool,
}

struct Clique<'a> {
    ctx: GroupContext,
    zero: &'a SubsetBits,
    target: usize,
    chosen: Vec<Element>,
    found: Vec<SubsetBits>,
    limit: usize,
    nodes: u64,
    budget: u64,
}

impl Clique<'_> {
    fn search(&mut self, candidates: &[Element]) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        if self.chosen.len() == self.target {
            let s = SubsetBits::from_elements(self.ctx, self.chosen.iter().copied())
                .expect("clique members lie in the group");
            self.found.push(s);
            return true;
        }
        for (i, &v) in candidates.iter().enumerate() {
            if self.chosen.len() + candidates.len() - i < self.target || self.found.len() >= self.limit {
                break;
            }
            let next: Vec<Element> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| self.zero.contains(self.ctx.sub(w, v)))
                .collect();
            self.chosen.push(v);
            let ok = self.search(&next);
            self.chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Spectra of `a` containing `(0, 0)`: cliques of size `|A|` in the graph
/// joining `s, s'` when `s - s'` lies in the zero set.
pub fn find_spectra_budgeted(a: &SubsetBits, limit: usize, form: Form, budget: u64) -> SpectrumSearch {
    let ctx = a.ctx();
    if a.is_empty() || limit == 0 {
        return SpectrumSearch {
            found: Vec::new(),
            complete: true,
        };
    }
    let zero = zero_set(a, form).expect("nonempty").members().clone();
    let mut vertices = zero.to_vec();
    // High-degree vertices first; ties by canonical index.
    let degree = |v: Element| vertices.iter().filter(|&&w| zero.contains(ctx.sub(w, v))).count();
    let mut keyed: Vec<(usize, Element)> = vertices.iter().map(|&v| (degree(v), v)).collect();
    keyed.sort_by(|x, y| y.0.cmp(&x.0).then(ctx.index(x.1).cmp(&ctx.index(y.1))));
    vertices = keyed.into_iter().map(|(_, v)| v).collect();
    let mut clique = Clique {
        ctx,
        zero: &zero,
        target: a.len(),
        chosen: vec![Element::ZERO],
        found: Vec::new(),
        limit,
        nodes: 0,
        budget,
    };
    let complete = clique.search(&vertices);
    let mut found = clique.found;
    found.sort();
    SpectrumSearch { found, complete }
}

/// Up to `limit` spectra of `a` containing `(0, 0)`, sorted.
pub fn find_spectra(a: &SubsetBits, limit: usize, form: Form) -> Vec<SubsetBits> {
    find_spectra_budgeted(a, limit, form, u64::MAX).found
}

pub fn is_tile(a: &SubsetBits) -> bool {
    !find_tiling_complements(a, 1).is_empty()
}

pub fn is_spectral(a: &SubsetBits) -> bool {
    !find_spectra(a, 1, Form::Symplectic).is_empty()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeCount {
    pub size: usize,
    pub examined: u64,
    pub tiles: u64,
    pub spectral: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub set: Vec<[u32; 2]>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub population: String,
    pub counts: Vec<SizeCount>,
    pub examined: u64,
    pub elapsed_ms: u64,
    pub failures: Vec<Failure>,
    /// Set when a check's premise never occurred in the sampled population.
    pub vacuous: bool,
    pub notes: Vec<String>,
}

impl SearchReport {
    fn new(population: impl Into<String>) -> Self {
        SearchReport {
            population: population.into(),
            counts: Vec::new(),
            examined: 0,
            elapsed_ms: 0,
            failures: Vec::new(),
            vacuous: false,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Copy with the timing zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        SearchReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

#[derive(Default)]
struct Tally {
    by_size: BTreeMap<usize, SizeCount>,
    examined: u64,
    failures: Vec<Failure>,
}

impl Tally {
    fn record(&mut self, size: usize, tile: bool, spectral: bool) {
        let c = self.by_size.entry(size).or_insert_with(|| SizeCount {
            size,
            ..SizeCount::default()
        });
        c.examined += 1;
        c.tiles += tile as u64;
        c.spectral += spectral as u64;
        self.examined += 1;
    }

    fn fail(&mut self, set: &SubsetBits, detail: impl Into<String>) {
        self.failures.push(Failure {
            set: pairs(set),
            detail: detail.into(),
        });
    }

    fn into_report(self, mut report: SearchReport, start: Instant) -> SearchReport {
        report.counts = self.by_size.into_values().collect();
        report.examined = self.examined;
        report.failures = self.failures;
        report.elapsed_ms = start.elapsed().as_millis() as u64;
        report
    }
}

/// Tile and spectral status of every subset of a group with at most 16 elements,
/// indexed by bit mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatusTables {
    pub ctx: GroupContext,
    pub tile: Vec<bool>,
    pub spectral: Vec<bool>,
}

impl StatusTables {
    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        0..self.tile.len() as u64
    }

    pub fn set(&self, mask: u64) -> SubsetBits {
        SubsetBits::from_mask(self.ctx, mask)
    }
}

/// Fills both status tables, splitting the mask range over `threads` workers.
pub fn exhaustive_tables(ctx: GroupContext, threads: usize) -> Result<StatusTables> {
    if ctx.order() > 16 {
        return Err(Error::Precondition(
            "exhaustive mode needs a group of at most 16 elements".into(),
        ));
    }
    let total = 1u64 << ctx.order();
    let threads = threads.max(1) as u64;
    let chunk = total.div_ceil(threads);
    let parts: Vec<Vec<(bool, bool)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                scope.spawn(move || {
                    (w * chunk..((w + 1) * chunk).min(total))
                        .map(|mask| {
                            let a = SubsetBits::from_mask(ctx, mask);
                            if a.is_empty() {
                                (false, false)
                            } else {
                                (is_tile(&a), is_spectral(&a))
                            }
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let (tile, spectral) = parts.into_iter().flatten().unzip();
    Ok(StatusTables { ctx, tile, spectral })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "sampled" => Ok(Mode::Sampled),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Node budget per spectrum search in sampled mode.
const SAMPLED_NODE_BUDGET: u64 = 2_000_000;

/// Compares tile status with spectral status over a population of subsets.
pub fn verify_fuglede(ctx: GroupContext, mode: Mode, budget: usize, seed: u64, threads: usize) -> Result<SearchReport> {
    let start = Instant::now();
    match mode {
        Mode::Exhaustive => {
            let tables = exhaustive_tables(ctx, threads)?;
            let mut tally = Tally::default();
            for mask in tables.masks().skip(1) {
                let (t, s) = (tables.tile[mask as usize], tables.spectral[mask as usize]);
                tally.record(mask.count_ones() as usize, t, s);
                if t != s {
                    tally.fail(&tables.set(mask), format!("tile={t} spectral={s}"));
                }
            }
            let population = format!("all {} nonempty subsets of Z_{n} x Z_{n}", tally.examined, n = ctx.n());
            Ok(tally.into_report(SearchReport::new(population), start))
        }
        Mode::Sampled => {
            if ctx.m() != 2 {
                return Err(Error::RequiresSquareGroup(ctx.m()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut tally = Tally::default();
            let mut undecided = 0u64;
            let mut check = |a: &SubsetBits, known_tile: Option<bool>, tally: &mut Tally| {
                let tile = known_tile.unwrap_or_else(|| is_tile(a));
                let search = find_spectra_budgeted(a, 1, Form::Symplectic, SAMPLED_NODE_BUDGET);
                if !search.complete && search.found.is_empty() {
                    undecided += 1;
                    return;
                }
                let spectral = !search.found.is_empty();
                tally.record(a.len(), tile, spectral);
                if tile != spectral {
                    tally.fail(a, format!("tile={tile} spectral={spectral}"));
                }
                if tile {
                    match construct::spectrum_for_tile(a, None) {
                        Ok(c) if c.verified => {}
                        Ok(_) => tally.fail(a, "unverified certificate"),
                        Err(e) => tally.fail(a, format!("constructor: {e}")),
                    }
                }
            };

            let p = ctx.p() as usize;
            let others: Vec<Element> = ctx.elements().skip(1).collect();
            for combo in combinations(others.len(), p - 1) {
                let mut a = SubsetBits::singleton(ctx, Element::ZERO);
                for i in combo {
                    a.insert(others[i]);
                }
                check(&a, None, &mut tally);
            }
            let exhaustive_small = tally.examined;

            let subgroups: Vec<Subgroup> = enumerate_subgroups(ctx, None)
                .into_iter()
                .filter(|h| h.len() > 1 && h.len() < ctx.order())
                .collect();
            for _ in 0..budget {
                let h = subgroups.choose(&mut rng).expect("proper subgroups exist");
                let a = random_transversal(h, &mut rng);
                check(&a, Some(true), &mut tally);
            }
            for _ in 0..budget {
                let size = rng.gen_range(1..=3 * p * p);
                let a = random_subset(ctx, size, &mut rng);
                check(&a, None, &mut tally);
            }
            let mut report = SearchReport::new(format!(
                "Z_{n} x Z_{n}: all {exhaustive_small} size-{p} subsets containing (0,0), \
                 {budget} random subgroup transversals, {budget} random subsets",
                n = ctx.n()
            ));
            report
                .notes
                .push("sampled mode is regression evidence, not a proof".into());
            if undecided > 0 {
                report
                    .notes
                    .push(format!("{undecided} spectrum searches exceeded the node budget"));
            }
            Ok(tally.into_report(report, start))
        }
    }
}

/// All `k`-element index subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Uniform subset of the given size.
pub fn random_subset(ctx: GroupContext, size: usize, rng: &mut impl Rng) -> SubsetBits {
    let indices = rand::seq::index::sample(rng, ctx.order(), size.min(ctx.order()));
    SubsetBits::from_indices(ctx, indices)
}

/// One random representative from every coset of `h`; it tiles with `h`.
pub fn random_transversal(h: &Subgroup, rng: &mut impl Rng) -> SubsetBits {
    let ctx = h.ctx();
    let members = h.members().to_vec();
    let mut seen = vec![false; ctx.order()];
    let mut out = SubsetBits::empty(ctx);
    for g in 0..ctx.order() {
        if seen[g] {
            continue;
        }
        let base = ctx.element_at(g);
        for &x in &members {
            seen[ctx.index(ctx.add(base, x))] = true;
        }
        let pick = members.choose(rng).expect("subgroups are nonempty");
        out.insert(ctx.add(base, *pick));
    }
    out
}

/// Disjoint translates of one `p`-term progression `{c y : c < p}`; such sets
/// have nonempty zero sets far more often than uniform ones.
pub fn random_progression_union(ctx: GroupContext, pieces: usize, rng: &mut impl Rng) -> SubsetBits {
    let p = ctx.p() as i64;
    let y = ctx.element_at(rng.gen_range(1..ctx.order()));
    let progression: Vec<Element> = (0..p).map(|c| ctx.scale(c, y)).collect();
    let mut out = SubsetBits::empty(ctx);
    for _ in 0..pieces {
        let t = ctx.element_at(rng.gen_range(0..ctx.order()));
        let piece: Vec<Element> = progression.iter().map(|&u| ctx.add(u, t)).collect();
        if piece.iter().all(|&u| !out.contains(u)) {
            for u in piece {
                out.insert(u);
            }
        }
    }
    out
}

/// Mixture of uniform subsets and progression unions.
fn random_test_set(ctx: GroupContext, rng: &mut impl Rng) -> SubsetBits {
    loop {
        let s = if rng.gen_bool(0.5) {
            let size = rng.gen_range(1..=ctx.order());
            random_subset(ctx, size, rng)
        } else {
            let pieces = rng.gen_range(1..=ctx.order() / ctx.p() as usize);
            random_progression_union(ctx, pieces, rng)
        };
        if !s.is_empty() {
            return s;
        }
    }
}

/// Every tiling pair `(A, B)` with `0 ∈ B`, over all subsets `A` of a group of at most 16 elements.
pub fn all_tiling_pairs(tables: &StatusTables, max_size: usize) -> Vec<(SubsetBits, SubsetBits)> {
    let mut out = Vec::new();
    for mask in tables.masks().filter(|&m| tables.tile[m as usize]) {
        if mask.count_ones() as usize > max_size {
            continue;
        }
        let a = tables.set(mask);
        for b in find_tiling_complements(&a, usize::MAX) {
            out.push((a.clone(), b));
        }
    }
    out
}

/// Runs the property named by `tag`.
pub fn lemma_check(tag: &str, trials: usize, seed: u64) -> Result<SearchReport> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z4 = GroupContext::new(2, 2)?;
    let z9 = GroupContext::new(3, 2)?;
    let z25 = GroupContext::new(5, 2)?;
    let mut tally = Tally::default();
    let mut report = SearchReport::new(tag);
    match tag {
        "poisson" | "zero-set" => {
            let mut population: Vec<Subgroup> = [z4, z9]
                .into_iter()
                .flat_map(|g| enumerate_subgroups(g, None))
                .collect();
            for _ in 0..trials {
                let gens = [random_element(z25, &mut rng), random_element(z25, &mut rng)];
                population.push(Subgroup::generated_by(z25, &gens)?);
            }
            for h in &population {
                let ok = if tag == "poisson" {
                    poisson_holds(h)
                } else {
                    subgroup_zero_set_holds(h)?
                };
                tally.record(h.len(), false, false);
                if !ok {
                    tally.fail(h.members(), tag);
                }
            }
            report.population =
                format!("all subgroups of Z_4 x Z_4 and Z_9 x Z_9, {trials} random subgroups of Z_25 x Z_25");
        }
        "counting" => {
            let mut empty_draws = 0u64;
            let mut done = 0;
            while done < trials {
                let a = random_test_set(z9, &mut rng);
                let zero = symplectic_zero_set(&a)?;
                let Some(&x) = zero.to_vec().choose(&mut rng) else {
                    empty_draws += 1;
                    continue;
                };
                done += 1;
                tally.record(a.len(), false, false);
                let p = z9.p() as i64;
                let px = z9.scale(p, x);
                let lhs = a.iter().filter(|&u| z9.symplectic_form(u, px) == 0).count();
                let rhs = a.iter().filter(|&u| z9.symplectic_form(u, x) == 0).count();
                if lhs != p as usize * rhs {
                    tally.fail(&a, format!("x = ({}, {}): {lhs} != {p} * {rhs}", x.x1, x.x2));
                }
            }
            report.population = format!("{trials} random (A, x) in Z_9 x Z_9 with x in the zero set");
            report
                .notes
                .push(format!("{empty_draws} draws had an empty zero set and were redrawn"));
        }
        "uncertainty" => {
            for _ in 0..trials {
                let a = random_test_set(z9, &mut rng);
                let support = z9.order() - symplectic_zero_set(&a)?.len();
                tally.record(a.len(), false, false);
                if a.len() * support < z9.order() {
                    tally.fail(&a, format!("|A| * |supp| = {} * {support}", a.len()));
                }
            }
            report.population = format!("{trials} random nonempty subsets of Z_9 x Z_9");
        }
        "gen-closure" => {
            for g in [z4, z9] {
                let classes = equivalence_classes(g);
                for _ in 0..trials {
                    let a = random_test_set(g, &mut rng);
                    let zero = symplectic_zero_set(&a)?;
                    tally.record(a.len(), false, false);
                    if let Some(e) = classes
                        .classes()
                        .iter()
                        .find(|e| e.intersects(&zero) && !e.is_subset(&zero))
                    {
                        tally.fail(&a, format!("class of {:?} split", e.first()));
                    }
                }
            }
            report.population = format!("{trials} random subsets each of Z_4 x Z_4 and Z_9 x Z_9");
        }
        "annihilation-bound" => {
            let subgroups = enumerate_subgroups(z9, None);
            for _ in 0..trials {
                let a = random_test_set(z9, &mut rng);
                let zero = symplectic_zero_set(&a)?;
                tally.record(a.len(), false, false);
                for h in subgroups.iter().filter(|h| h.len() > a.len()) {
                    if difference_set(h.members()).is_subset(&zero) {
                        tally.fail(&a, format!("annihilated by a subgroup of order {}", h.len()));
                    }
                }
            }
            report.population = format!("{trials} random subsets of Z_9 x Z_9 against all its subgroups");
        }
        "rotation" => {
            for g in [z4, z9] {
                for _ in 0..trials {
                    let a = random_test_set(g, &mut rng);
                    let euc = zero_set(&a, Form::Euclidean)?;
                    let sym = zero_set(&a, Form::Symplectic)?;
                    tally.record(a.len(), false, false);
                    let rotated_ok = g.elements().all(|s| {
                        let r = g.reduce(-(s.x2 as i64), s.x1 as i64);
                        euc.contains(s) == sym.contains(r)
                    });
                    if !rotated_ok {
                        tally.fail(&a, "rotation relation broken");
                    }
                }
            }
            report.population = format!("{trials} random subsets each of Z_4 x Z_4 and Z_9 x Z_9");
        }
        "dilation" | "diff-classes" => {
            let tables = exhaustive_tables(z4, 1)?;
            let max_size = if tag == "dilation" { 4 } else { 16 };
            let mut pairs_list = all_tiling_pairs(&tables, max_size);
            let exhaustive = pairs_list.len();
            let subgroups: Vec<Subgroup> = enumerate_subgroups(z9, None);
            for _ in 0..trials {
                let h = subgroups.choose(&mut rng).expect("nonempty");
                let t = random_transversal(h, &mut rng);
                if rng.gen_bool(0.5) {
                    pairs_list.push((t, h.members().clone()));
                } else {
                    pairs_list.push((h.members().clone(), t));
                }
            }
            for (a, b) in &pairs_list {
                tally.record(a.len(), true, false);
                if tag == "dilation" {
                    check_dilation(a, b, &mut tally)?;
                } else {
                    check_diff_classes(a, b, &mut tally);
                }
            }
            report.population = format!(
                "{exhaustive} tiling pairs of Z_4 x Z_4 (|A| <= {max_size}), {trials} random subgroup/transversal pairs in Z_9 x Z_9"
            );
        }
        "pl2-premises" => {
            let (hits, attempts) = pl2_premises(z9, 2, trials, &mut rng, &mut tally)?;
            report.population = format!("{attempts} structured subsets of Z_9 x Z_9 of size 18");
            report.notes.push(format!("{hits} sets met all three premises"));
            report.vacuous = hits == 0;
        }
        other => return Err(Error::UnknownLemma(other.to_string())),
    }
    Ok(tally.into_report(report, start))
}

fn random_element(ctx: GroupContext, rng: &mut impl Rng) -> Element {
    ctx.element_at(rng.gen_range(0..ctx.order()))
}

/// Transform of `1_H` is `|H|` on `H^⊥` and zero elsewhere.
fn poisson_holds(h: &Subgroup) -> bool {
    let ctx = h.ctx();
    let ortho = symplectic_orthogonal(h);
    let holds = ctx.elements().all(|xi| {
        let v = exponent_vector(h.members(), xi, Form::Symplectic);
        if ortho.contains(xi) {
            v.counts()[0] == h.len() as i64
        } else {
            is_vanishing_sum(&v)
        }
    });
    holds
}

fn subgroup_zero_set_holds(h: &Subgroup) -> Result<bool> {
    Ok(symplectic_zero_set(h.members())? == symplectic_orthogonal(h).members().complement())
}

fn check_dilation(a: &SubsetBits, b: &SubsetBits, tally: &mut Tally) -> Result<()> {
    let n = a.ctx().n() as u64;
    for q in (1..=n).filter(|&q| gcd(q, a.len() as u64) == 1) {
        if !is_tiling_pair(&dilate(a, q as i64), b)?.tiles {
            tally.fail(a, format!("q = {q} breaks the tiling"));
        }
    }
    Ok(())
}

fn check_diff_classes(a: &SubsetBits, b: &SubsetBits, tally: &mut Tally) {
    let (da, db) = (difference_set(a), difference_set(b));
    if let Some(e) = equivalence_classes(a.ctx())
        .nontrivial()
        .find(|e| e.intersects(&da) && e.intersects(&db))
    {
        tally.fail(a, format!("class of {:?} meets both difference sets", e.first()));
    }
}

/// Searches for sets of size `d p^2` in normalized position with
/// `ΔH_{0,0}`, `⋃_j E_{j,inf}` and some `ΔK_{k2}` inside the zero set, and
/// checks the consequences `K ∩ Z = K \ K_inf`, `A ∩ E_{j,inf} ≠ ∅` and
/// `|K_k^⊥ ∩ A| = d p` for finite `k`. Returns `(hits, attempts)`.
fn pl2_premises(
    ctx: GroupContext,
    d: usize,
    attempts: usize,
    rng: &mut impl Rng,
    tally: &mut Tally,
) -> Result<(u64, usize)> {
    let cat = StructureCatalog::new(ctx)?;
    let p = ctx.p();
    let inf = ProjectiveIndex::Infinity;
    let h00 = difference_set(cat.lagrangian(0, ProjectiveIndex::Finite(0)).members());
    let e_inf = cat.e_union(inf);
    let mut hits = 0;
    for _ in 0..attempts {
        // Residue class m of the second coordinate, d progressions each.
        let mut a = SubsetBits::empty(ctx);
        let mut clash = false;
        for m in 0..p {
            for _ in 0..d {
                let start: u32 = rng.gen_range(0..p);
                let mut perm: Vec<u32> = (0..p).collect();
                perm.shuffle(rng);
                for c in 0..p {
                    clash |= !a.insert(Element::new(start + c * p, m + perm[c as usize] * p));
                }
            }
        }
        if clash {
            continue;
        }
        let zero = symplectic_zero_set(&a)?;
        let k2 = (0..p)
            .map(ProjectiveIndex::Finite)
            .find(|&k| k != ProjectiveIndex::Finite(0) && cat.k_sub_generators(k).is_subset(&zero));
        if !(h00.is_subset(&zero) && e_inf.is_subset(&zero)) || k2.is_none() {
            continue;
        }
        hits += 1;
        tally.record(a.len(), false, false);
        let k = cat.k().members();
        let expected = k.difference(cat.k_sub(inf).members());
        if k.intersection(&zero) != expected {
            tally.fail(&a, "K ∩ Z differs from K \\ K_inf");
        }
        if !every_origin_translate_meets(&a, &cat) {
            tally.fail(&a, "some E_{j,inf} misses a translate of A through the origin");
        }
        for kk in (0..p).map(ProjectiveIndex::Finite) {
            let ortho = symplectic_orthogonal(cat.k_sub(kk));
            if ortho.members().intersection_len(&a) != d * p as usize {
                tally.fail(&a, format!("|K_{kk}^⊥ ∩ A| != {}", d * p as usize));
            }
        }
    }
    Ok((hits, attempts))
}

/// `(A - t) ∩ E_{j,inf} ≠ ∅` for every `j` and every `t ∈ A`.
fn every_origin_translate_meets(a: &SubsetBits, cat: &StructureCatalog) -> bool {
    let ctx = a.ctx();
    a.iter().all(|t| {
        let shifted = a.translate(ctx.neg(t));
        (0..ctx.p()).all(|j| shifted.intersects(cat.e(j, ProjectiveIndex::Infinity)))
    })
}
