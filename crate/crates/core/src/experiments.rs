//! Spectrum scans, the growth-tightness comparison on `BS(2,3) * Z`, random
//! surjection sweeps and the end-to-end construction audit.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constants::ActionConstants;
use crate::constructions::{
    build_free_pair, build_primitive_u, build_separators, find_hyperbolic, large_displacement_element,
    lower_bound_audit, phi_injectivity_check, FreePairReport, LargeDisplacementSummary, LowerBoundOptions,
    LowerBoundReport, PhiReport, PrimitiveOptions, PrimitiveReport, SeparatorOptions, SeparatorReport,
};
use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Group, GroupModel, Homomorphism, Order};
use crate::growth::{ball, enumerate_balls, growth_estimate, GrowthEstimate, GrowthTable};
use crate::limit::BallComparison;
use crate::space::Space;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanBounds {
    pub max_cardinality: usize,
    /// Word length of each entry in the standard generators.
    pub max_length: usize,
    /// BFS depth for the β columns.
    pub depth: usize,
    /// Products of at most this many letters of `S` are searched for the standard generators.
    pub generation_depth: usize,
    /// Sets visited per canonicalisation search.
    pub plateau_budget: usize,
    pub lower_bounds: bool,
    pub cap: usize,
}

impl Default for ScanBounds {
    fn default() -> Self {
        ScanBounds {
            max_cardinality: 2,
            max_length: 2,
            depth: 8,
            generation_depth: 4,
            plateau_budget: 64,
            lower_bounds: true,
            cap: 1 << 22,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerSummary {
    pub certificate: String,
    pub bound: f64,
    /// `A |S|^A`.
    pub weak_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    /// Canonical representative, one entry per inverse pair.
    pub set: Vec<String>,
    pub class_id: usize,
    pub members: Vec<Vec<String>>,
    pub balls: Vec<u64>,
    pub estimate: GrowthEstimate,
    pub lower: Option<LowerSummary>,
    pub lower_error: Option<String>,
    /// `A|S|^A <= lower <= point <= upper`, when a lower bound exists.
    pub consistent: Option<bool>,
    /// Other classes with the same β column were folded into this row.
    pub merged: bool,
    pub truncated: bool,
    pub minimum: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub model: String,
    pub kind: String,
    pub bounds: ScanBounds,
    pub candidates: usize,
    pub excluded: Vec<(Vec<String>, String)>,
    pub rows: Vec<SpectrumRow>,
    /// Members of one class share their β column.
    pub dedup_sound: bool,
    pub partial: bool,
}

impl SpectrumTable {
    pub fn minimum(&self) -> Option<&SpectrumRow> {
        self.rows.iter().find(|r| r.minimum)
    }
}

enum Move {
    Map(Homomorphism),
    Inner(Element),
}

/// Automorphisms used for deduplication: inner automorphisms by generators, inversions of
/// generators, swaps of isomorphic factors and transvections of free `Z` factors.
fn automorphism_moves(group: &Group) -> Vec<Move> {
    let gens = group.generators();
    let n = gens.len();
    let mut moves: Vec<Move> = Vec::new();
    for g in &gens {
        moves.push(Move::Inner(g.clone()));
        moves.push(Move::Inner(group.inv(g)));
    }
    let with = |i: usize, img: Element| {
        let mut im = gens.clone();
        im[i] = img;
        Move::Map(Homomorphism::new(group, im))
    };
    let free_factor = |i: usize| -> bool {
        match group.model() {
            GroupModel::Free { .. } => true,
            GroupModel::FreeProduct { orders } => orders[i] == Order::Infinite,
            GroupModel::BaumslagSolitar { .. } => i >= 2,
        }
    };
    // t is not sent to t^-1: that would swap p and q
    let invertible = |i: usize| -> bool {
        match group.model() {
            GroupModel::BaumslagSolitar { .. } => i != 1,
            GroupModel::FreeProduct { orders } => orders[i] != Order::Finite(2),
            GroupModel::Free { .. } => true,
        }
    };
    for i in 0..n {
        if invertible(i) {
            moves.push(with(i, group.inv(&gens[i])));
        }
        if free_factor(i) {
            for j in (0..n).filter(|&j| j != i) {
                for y in [gens[j].clone(), group.inv(&gens[j])] {
                    moves.push(with(i, group.mul(&gens[i], &y)));
                    moves.push(with(i, group.mul(&y, &gens[i])));
                }
            }
        }
    }
    let swappable = |i: usize, j: usize| match group.model() {
        GroupModel::Free { .. } => true,
        GroupModel::FreeProduct { orders } => orders[i] == orders[j],
        GroupModel::BaumslagSolitar { .. } => i >= 2 && j >= 2,
    };
    for i in 0..n {
        for j in i + 1..n {
            if swappable(i, j) {
                let mut im = gens.clone();
                im.swap(i, j);
                moves.push(Move::Map(Homomorphism::new(group, im)));
            }
        }
    }
    moves
}

fn rep(group: &Group, e: &Element) -> Element {
    let i = group.inv(e);
    if group.shortlex_cmp(&i, e) == Ordering::Less {
        i
    } else {
        e.clone()
    }
}

/// Sorted inverse-pair representatives of a set, identity removed.
fn normal_set(group: &Group, items: impl IntoIterator<Item = Element>) -> Vec<Element> {
    let mut v: Vec<Element> = items.into_iter().filter(|e| !e.is_identity()).map(|e| rep(group, &e)).collect();
    v.sort_by(|a, b| group.shortlex_cmp(a, b));
    v.dedup();
    v
}

fn set_cost(group: &Group, set: &[Element]) -> usize {
    set.iter().map(|e| group.word_length(e)).sum()
}

fn set_cmp(group: &Group, a: &[Element], b: &[Element]) -> Ordering {
    set_cost(group, a)
        .cmp(&set_cost(group, b))
        .then(a.len().cmp(&b.len()))
        .then_with(|| {
            a.iter()
                .zip(b)
                .map(|(x, y)| group.shortlex_cmp(x, y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

/// Length non-increasing search over automorphic images, returning the least image seen.
pub fn canonical_set(group: &Group, set: &[Element], budget: usize) -> Vec<Element> {
    let moves = automorphism_moves(group);
    let start = normal_set(group, set.iter().cloned());
    let key = |s: &[Element]| s.iter().map(|e| group.encode(e)).collect::<Vec<_>>();
    let mut seen = HashSet::from([key(&start)]);
    let mut best = start.clone();
    let mut frontier = vec![start];
    while let Some(cur) = frontier.pop() {
        let cost = set_cost(group, &best);
        for mv in &moves {
            let img = normal_set(
                group,
                cur.iter().map(|e| match mv {
                    Move::Map(h) => h.apply(group, e),
                    Move::Inner(g) => group.conj(g, e),
                }),
            );
            if set_cost(group, &img) > cost || seen.len() >= budget || !seen.insert(key(&img)) {
                continue;
            }
            if set_cmp(group, &img, &best) == Ordering::Less {
                best = img.clone();
            }
            frontier.push(img);
        }
    }
    best
}

fn render_set(group: &Group, set: &[Element]) -> Vec<String> {
    set.iter().map(|e| group.format_compact(e)).collect()
}

fn candidates(group: &Group, bounds: &ScanBounds) -> Result<Vec<Vec<Element>>> {
    let std = GeneratingSet::standard(group);
    let pool = normal_set(group, ball(group, &std, bounds.max_length, bounds.cap)?);
    let mut out = Vec::new();
    let mut idx: Vec<usize> = Vec::new();
    fn rec(pool: &[Element], k: usize, start: usize, idx: &mut Vec<usize>, out: &mut Vec<Vec<Element>>) {
        if !idx.is_empty() {
            out.push(idx.iter().map(|&i| pool[i].clone()).collect());
        }
        if idx.len() == k {
            return;
        }
        for i in start..pool.len() {
            idx.push(i);
            rec(pool, k, i + 1, idx, out);
            idx.pop();
        }
    }
    rec(&pool, bounds.max_cardinality, 0, &mut idx, &mut out);
    Ok(out)
}

fn generates(group: &Group, s: &GeneratingSet, depth: usize, cap: usize) -> Result<bool> {
    let b: HashSet<Element> = ball(group, s, depth, cap)?.into_iter().collect();
    Ok(group.generators().iter().all(|g| b.contains(g)))
}

/// Applies `f` to every item on `shards` threads; results keep the input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], shards: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let shards = shards.clamp(1, items.len().max(1));
    if shards == 1 {
        return items.iter().map(f).collect();
    }
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    (w..items.len())
                        .step_by(shards)
                        .map(|i| (i, f(&items[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every slot filled")).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ScanKind {
    Xi,
    Theta { require_hyperbolic: bool },
}

struct Scanned {
    canonical: Vec<Element>,
    table: GrowthTable,
}

fn lower_summary(report: &LowerBoundReport) -> LowerSummary {
    LowerSummary {
        certificate: report.certificate.id.clone(),
        bound: report.bound,
        weak_bound: report.weak_bound,
    }
}

fn scan(
    space: &Space,
    kind: ScanKind,
    bounds: &ScanBounds,
    constants: &ActionConstants,
    shards: usize,
) -> Result<SpectrumTable> {
    let group = space.group();
    let cands = candidates(group, bounds)?;
    let results = par_map(&cands, shards, |c| -> Result<std::result::Result<Scanned, String>> {
        let s = GeneratingSet::new(group, c.iter().cloned())?;
        match kind {
            ScanKind::Xi => {
                if !generates(group, &s, bounds.generation_depth, bounds.cap)? {
                    return Ok(Err(format!("no standard generator witness within {} letters", bounds.generation_depth)));
                }
            }
            ScanKind::Theta { require_hyperbolic } => {
                match find_hyperbolic(space, &s, constants.m_power as usize, bounds.cap) {
                    Ok(_) => {}
                    Err(Error::Elementary(why)) => {
                        let reason = if require_hyperbolic { "no hyperbolic element" } else { "e(H,S) = 1" };
                        return Ok(Err(format!("{reason}: {why}")));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        let table = enumerate_balls(group, &s, bounds.depth, bounds.cap, 1);
        if matches!(kind, ScanKind::Theta { .. }) && growth_estimate(&table, None).degenerate {
            return Ok(Err("e(H,S) = 1".into()));
        }
        Ok(Ok(Scanned {
            canonical: canonical_set(group, c, bounds.plateau_budget),
            table,
        }))
    });
    let mut excluded = Vec::new();
    let mut classes: BTreeMap<Vec<Box<[u8]>>, Vec<(usize, Scanned)>> = BTreeMap::new();
    for (i, r) in results.into_iter().enumerate() {
        match r? {
            Ok(sc) => {
                let key = sc.canonical.iter().map(|e| group.encode(e)).collect();
                classes.entry(key).or_default().push((i, sc));
            }
            Err(why) => excluded.push((render_set(group, &cands[i]), why)),
        }
    }
    let mut dedup_sound = true;
    let mut folded: Vec<(Vec<Element>, Vec<Vec<String>>, GrowthTable)> = Vec::new();
    let mut merged_cols: Vec<bool> = Vec::new();
    for (_, members) in classes {
        let first = &members[0].1;
        dedup_sound &= members.iter().all(|(_, m)| m.table.balls == first.table.balls);
        let names: Vec<Vec<String>> = members.iter().map(|(i, _)| render_set(group, &cands[*i])).collect();
        match folded.iter().position(|f| f.2.balls == first.table.balls && f.2.truncated.is_none()) {
            Some(j) => {
                folded[j].1.extend(names);
                merged_cols[j] = true;
                if set_cmp(group, &first.canonical, &folded[j].0) == Ordering::Less {
                    folded[j].0 = first.canonical.clone();
                }
            }
            None => {
                folded.push((first.canonical.clone(), names, first.table.clone()));
                merged_cols.push(false);
            }
        }
    }
    let lowers = par_map(&folded, shards, |(canon, _, _)| -> Option<std::result::Result<LowerBoundReport, String>> {
        if !bounds.lower_bounds {
            return None;
        }
        let s = GeneratingSet::new(group, canon.iter().cloned()).ok()?;
        let opts = LowerBoundOptions {
            cap: bounds.cap,
            ..LowerBoundOptions::default()
        };
        Some(lower_bound_audit(space, &s, constants, &opts).map_err(|e| e.to_string()))
    });
    let mut rows: Vec<SpectrumRow> = folded
        .into_iter()
        .zip(merged_cols)
        .zip(lowers)
        .map(|(((canon, members, table), merged), lower)| {
            let (lower, lower_error) = match lower {
                Some(Ok(r)) => (Some(lower_summary(&r)), None),
                Some(Err(e)) => (None, Some(e)),
                None => (None, None),
            };
            let estimate = growth_estimate(&table, lower.as_ref().map(|l| l.bound));
            let consistent = lower.as_ref().map(|l| {
                l.weak_bound <= l.bound && l.bound <= estimate.point_estimate && estimate.point_estimate <= estimate.certified_upper
            });
            SpectrumRow {
                set: render_set(group, &canon),
                class_id: 0,
                members,
                truncated: table.truncated.is_some(),
                balls: table.balls,
                estimate,
                lower,
                lower_error,
                consistent,
                merged,
                minimum: false,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        a.estimate
            .point_estimate
            .total_cmp(&b.estimate.point_estimate)
            .then_with(|| a.set.len().cmp(&b.set.len()))
            .then_with(|| a.set.cmp(&b.set))
    });
    for (i, r) in rows.iter_mut().enumerate() {
        r.class_id = i;
    }
    if let Some(r) = rows.first_mut() {
        r.minimum = true;
    }
    Ok(SpectrumTable {
        model: group.model().to_string(),
        kind: match kind {
            ScanKind::Xi => "xi".into(),
            ScanKind::Theta { require_hyperbolic: false } => "theta".into(),
            ScanKind::Theta { require_hyperbolic: true } => "theta_x".into(),
        },
        bounds: bounds.clone(),
        candidates: cands.len(),
        partial: rows.iter().any(|r| r.truncated),
        excluded,
        rows,
        dedup_sound,
    })
}

/// Growth rates of generating sets of the whole group within `bounds`.
pub fn xi_scan(space: &Space, bounds: &ScanBounds, constants: &ActionConstants, shards: usize) -> Result<SpectrumTable> {
    scan(space, ScanKind::Xi, bounds, constants, shards)
}

/// Growth rates `e(<S>, S) > 1` of arbitrary finite sets within `bounds`.
pub fn theta_scan(
    space: &Space,
    bounds: &ScanBounds,
    require_hyperbolic: bool,
    constants: &ActionConstants,
    shards: usize,
) -> Result<SpectrumTable> {
    scan(space, ScanKind::Theta { require_hyperbolic }, bounds, constants, shards)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightRow {
    pub k: usize,
    pub source: u64,
    pub image: u64,
    pub strict: bool,
    /// Least `k' <= 2k` with `β_k'(S) >= β_k(f(S))`; then `β_k(f(S)) <= β_2k(S)` by monotonicity.
    pub witness_radius: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TightReport {
    pub model: String,
    pub source_set: Vec<String>,
    pub image_set: Vec<String>,
    pub depth: usize,
    pub rows: Vec<TightRow>,
    pub source_estimate: GrowthEstimate,
    pub image_estimate: GrowthEstimate,
    /// First `k` with `β_k(f(S)) < β_k(S)` and the deficit there.
    pub first_strict: Option<(usize, u64)>,
    pub doubling_bound_holds: bool,
    pub unresolved: Vec<usize>,
    pub truncated: bool,
}

/// `H = BS(2,3) * Z`, `S = {a, t, z}` and `f: a -> a^2, t -> t, z -> z`.
pub fn growth_tight_experiment(depth: usize, cap: usize, shards: usize) -> Result<TightReport> {
    let h = Group::new(GroupModel::bs(2, 3, 1))?;
    let s = GeneratingSet::standard(&h);
    let gens = h.generators();
    let f = Homomorphism::new(&h, vec![h.pow(&gens[0], 2), gens[1].clone(), gens[2].clone()]);
    let image = GeneratingSet::new(&h, gens.iter().map(|g| f.apply(&h, g)))?;
    let src = enumerate_balls(&h, &s, depth, cap, shards);
    let img = enumerate_balls(&h, &image, depth, cap, shards);
    let n = src.balls.len().min(img.balls.len());
    let rows: Vec<TightRow> = (0..n)
        .map(|k| TightRow {
            k,
            source: src.balls[k],
            image: img.balls[k],
            strict: img.balls[k] < src.balls[k],
            witness_radius: (0..=(2 * k).min(src.balls.len() - 1)).find(|&j| src.balls[j] >= img.balls[k]),
        })
        .collect();
    let unresolved: Vec<usize> = rows.iter().filter(|r| r.witness_radius.is_none()).map(|r| r.k).collect();
    Ok(TightReport {
        model: h.model().to_string(),
        source_set: s.render(&h),
        image_set: image.render(&h),
        depth,
        first_strict: rows.iter().find(|r| r.strict).map(|r| (r.k, r.source - r.image)),
        doubling_bound_holds: unresolved.is_empty(),
        unresolved,
        truncated: src.truncated.is_some() || img.truncated.is_some(),
        source_estimate: growth_estimate(&src, None),
        image_estimate: growth_estimate(&img, None),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCase {
    pub model: String,
    pub images: Vec<String>,
    pub set: Vec<String>,
    pub comparison: BallComparison,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seed: u64,
    pub depth: usize,
    pub cases: Vec<SweepCase>,
    pub violations: usize,
}

fn random_element(group: &Group, rng: &mut ChaCha8Rng, max_len: usize) -> Element {
    let n = group.rank();
    let len = rng.gen_range(1..=max_len);
    let mut e = group.identity();
    for _ in 0..len {
        let g = group.generator(rng.gen_range(0..n));
        let g = if rng.gen_bool(0.5) { group.inv(&g) } else { g };
        group.mul_assign(&mut e, &g);
    }
    e
}

/// Image of a generator under a random endomorphism: anything in a free factor,
/// a conjugate of a power for a finite cyclic factor.
fn random_image(group: &Group, i: usize, rng: &mut ChaCha8Rng) -> Element {
    match group.factor_order(i) {
        Some(order) => {
            let c = random_element(group, rng, 2);
            let p = group.pow(&group.generator(i), rng.gen_range(0..order as i64));
            group.conj(&c, &p)
        }
        None => random_element(group, rng, 3),
    }
}

/// `β_k(h(S)) <= β_k(S)` for `cases` seeded random endomorphisms `h` and sets `S`.
pub fn surjection_sweep(cases: usize, depth: usize, seed: u64, cap: usize, shards: usize) -> Result<SweepReport> {
    let models = [Group::new(GroupModel::free(2))?, Group::new(GroupModel::free_product(&[2, 3]))?];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut specs = Vec::new();
    for i in 0..cases {
        let g = &models[i % models.len()];
        let images: Vec<Element> = (0..g.rank()).map(|j| random_image(g, j, &mut rng)).collect();
        let mut set = Vec::new();
        while set.len() < 2 {
            let e = random_element(g, &mut rng, 3);
            if !e.is_identity() {
                set.push(e);
            }
        }
        specs.push((i % models.len(), images, set));
    }
    let results = par_map(&specs, shards, |(mi, images, set)| -> Result<SweepCase> {
        let g = &models[*mi];
        let h = Homomorphism::new(g, images.clone());
        let s = GeneratingSet::new(g, set.iter().cloned())?;
        crate::limit::image_ball_comparison(g, &s, &h, depth, cap, 1).map(|comparison| SweepCase {
            model: g.model().to_string(),
            images: images.iter().map(|e| g.format_compact(e)).collect(),
            set: s.render(g),
            comparison,
        })
    });
    let cases = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        seed,
        depth,
        violations: cases.iter().filter(|c| !c.comparison.holds).count(),
        cases,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub model: String,
    pub set: Vec<String>,
    pub stages: Vec<Stage>,
    pub large_displacement: Option<LargeDisplacementSummary>,
    pub free_pair: Option<FreePairReport>,
    pub primitive: Option<PrimitiveReport>,
    pub separators: Option<SeparatorReport>,
    pub phi: Vec<PhiReport>,
    pub lower_bound: Option<LowerBoundReport>,
    pub growth: Option<GrowthEstimate>,
    pub failed_stage: Option<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub pair_depth: usize,
    pub ball_radius: usize,
    pub phi_cases: Vec<(usize, usize)>,
    pub growth_depth: usize,
    pub cap: usize,
    pub shards: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            pair_depth: 8,
            ball_radius: 3,
            phi_cases: vec![(2, 1), (2, 2), (3, 1)],
            growth_depth: 8,
            cap: 1 << 22,
            shards: 1,
        }
    }
}

/// Runs every construction in order; the first failing stage stops the run.
pub fn full_pipeline_audit(
    space: &Space,
    s: &GeneratingSet,
    constants: &ActionConstants,
    options: &PipelineOptions,
) -> PipelineReport {
    let group = space.group();
    let mut r = PipelineReport {
        model: group.model().to_string(),
        set: s.render(group),
        stages: Vec::new(),
        large_displacement: None,
        free_pair: None,
        primitive: None,
        separators: None,
        phi: Vec::new(),
        lower_bound: None,
        growth: None,
        failed_stage: None,
        passed: false,
    };
    let stage = |r: &mut PipelineReport, name: &str, out: Result<String>, ok: bool| -> bool {
        let (passed, detail) = match out {
            Ok(d) => (ok, d),
            Err(e) => (false, e.to_string()),
        };
        r.stages.push(Stage {
            name: name.into(),
            passed,
            detail,
        });
        if !passed {
            r.failed_stage = Some(name.into());
        }
        passed
    };

    let hyp = find_hyperbolic(space, s, constants.m_power as usize, options.cap);
    let ok = hyp.is_ok();
    let detail = hyp.map(|h| format!("{} at level {}", group.format_compact(&h.element.element), h.level));
    if !stage(&mut r, "non-elementary", detail, ok) {
        return r;
    }

    let ld = match large_displacement_element(space, s) {
        Ok(ld) => ld,
        Err(e) => {
            stage(&mut r, "large-displacement", Err(e), false);
            return r;
        }
    };
    let sum = ld.summary(group);
    let ok = sum.joint <= sum.displacement && sum.displacement <= sum.translation;
    let detail = format!("{} with L = {} <= d = {} <= λ = {}", sum.element, sum.joint, sum.displacement, sum.translation);
    r.large_displacement = Some(sum);
    if !stage(&mut r, "large-displacement", Ok(detail), ok) {
        return r;
    }

    let pair = match build_free_pair(space, s, &ld.element, &ld.point, constants, options.pair_depth) {
        Ok(p) => p,
        Err(e) => {
            stage(&mut r, "free-pair", Err(e), false);
            return r;
        }
    };
    r.free_pair = Some(pair.report.clone());
    let detail = format!("{} words, min translation {}", pair.report.words_checked, pair.report.min_translation);
    if !stage(&mut r, "free-pair", Ok(detail), pair.report.passed) {
        return r;
    }

    let prim_opts = PrimitiveOptions {
        ball_radius: options.ball_radius.min(4),
        cap: options.cap,
    };
    match build_primitive_u(space, s, &pair, constants, &prim_opts) {
        Ok(u) => {
            let ok = u.report.passed;
            let detail = format!("λ(u) = {}, |u|_S = {}", u.report.translation, u.report.spelled_length);
            r.primitive = Some(u.report);
            if !stage(&mut r, "primitive-u", Ok(detail), ok) {
                return r;
            }
        }
        Err(e) => {
            stage(&mut r, "primitive-u", Err(e), false);
            return r;
        }
    }

    let sep_opts = SeparatorOptions {
        ball_radius: options.ball_radius,
        cap: options.cap,
    };
    let seps = match build_separators(space, s, constants, &sep_opts) {
        Ok(x) => x,
        Err(e) => {
            stage(&mut r, "separators", Err(e), false);
            return r;
        }
    };
    r.separators = seps.report.clone();
    let detail = seps
        .report
        .as_ref()
        .map(|x| format!("Δ = {}, lengths {:?}", x.delta_n, x.lengths))
        .unwrap_or_default();
    if !stage(&mut r, "separators", Ok(detail), seps.passed()) {
        return r;
    }

    for &(m, q) in &options.phi_cases {
        let name = format!("phi-m{m}-q{q}");
        match phi_injectivity_check(space, s, &seps, constants.delta, constants.d, m, q, options.cap) {
            Ok(p) => {
                let ok = p.passed;
                let detail = format!("{} tuples, {} images", p.tuples, p.distinct_images);
                r.phi.push(p);
                if !stage(&mut r, &name, Ok(detail), ok) {
                    return r;
                }
            }
            Err(e) => {
                stage(&mut r, &name, Err(e), false);
                return r;
            }
        }
    }

    let lb_opts = LowerBoundOptions {
        cap: options.cap,
        ..LowerBoundOptions::default()
    };
    let lb = match lower_bound_audit(space, s, constants, &lb_opts) {
        Ok(x) => x,
        Err(e) => {
            stage(&mut r, "lower-bound", Err(e), false);
            return r;
        }
    };
    let ok = lb.passed;
    let detail = format!("{} >= A|S|^A = {}", lb.bound, lb.weak_bound);
    let bound = lb.bound;
    let weak = lb.weak_bound;
    r.lower_bound = Some(lb);
    if !stage(&mut r, "lower-bound", Ok(detail), ok) {
        return r;
    }

    let table = enumerate_balls(group, s, options.growth_depth, options.cap, options.shards);
    let est = growth_estimate(&table, Some(bound));
    let ok = weak <= bound && bound <= est.point_estimate && est.point_estimate <= est.certified_upper;
    let detail = format!("{} <= {} <= {}", bound, est.point_estimate, est.certified_upper);
    r.growth = Some(est);
    if !stage(&mut r, "growth-brackets", Ok(detail), ok) {
        return r;
    }
    r.passed = true;
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Space {
        Space::new(&Group::new(GroupModel::free(2)).unwrap()).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let x = f2();
        let g = x.group();
        let p = |t: &str| GeneratingSet::parse(g, t).unwrap().representatives();
        let a = canonical_set(g, &p("a,ab"), 64);
        let b = canonical_set(g, &p("a,b"), 64);
        assert_eq!(a, b);
        assert_eq!(render_set(g, &b), vec!["a", "b"]);
        assert_eq!(canonical_set(g, &p("aB"), 64).len(), 1);
    }

    #[test]
    fn free_group_xi_scan() {
        let x = f2();
        let bounds = ScanBounds {
            lower_bounds: false,
            depth: 6,
            ..ScanBounds::default()
        };
        let t = xi_scan(&x, &bounds, &ActionConstants::trees(), 2).unwrap();
        let min = t.minimum().unwrap();
        assert_eq!(min.set, vec!["a", "b"]);
        assert!((min.estimate.point_estimate - 3.0).abs() < 1e-12);
        assert!(t.dedup_sound);
        assert!(t.excluded.iter().any(|(s, _)| s == &vec!["a".to_string()]));
        assert!(t.rows.iter().all(|r| r.estimate.certified_upper >= 3.0 - 1e-9));
        assert_eq!(t, xi_scan(&x, &bounds, &ActionConstants::trees(), 1).unwrap());
    }

    #[test]
    fn theta_drops_elementary_sets() {
        let x = f2();
        let bounds = ScanBounds {
            max_cardinality: 1,
            max_length: 2,
            depth: 5,
            lower_bounds: false,
            ..ScanBounds::default()
        };
        let t = theta_scan(&x, &bounds, false, &ActionConstants::trees(), 1).unwrap();
        assert!(t.rows.is_empty());
        let fp = Space::new(&Group::new(GroupModel::free_product(&[2, 3])).unwrap()).unwrap();
        let t = theta_scan(&fp, &bounds, true, &ActionConstants::trees(), 1).unwrap();
        assert!(t.excluded.iter().any(|(s, _)| s == &vec!["s".to_string()]));
    }

    #[test]
    fn pipeline_gate() {
        let x = f2();
        let s = GeneratingSet::parse(x.group(), "a").unwrap();
        let r = full_pipeline_audit(&x, &s, &ActionConstants::trees(), &PipelineOptions::default());
        assert_eq!(r.failed_stage.as_deref(), Some("non-elementary"));
        assert!(!r.passed);
    }

    #[test]
    fn small_sweep() {
        let r = surjection_sweep(6, 5, 7, 1 << 20, 2).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r, surjection_sweep(6, 5, 7, 1 << 20, 1).unwrap());
    }
}
