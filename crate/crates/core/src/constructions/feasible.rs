use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::germ::{germ_opposite, Germ};
use crate::group::{Element, GeneratingSet, Group};
use crate::growth::ball;
use crate::space::Space;

use super::separators::SeparatorSet;

/// Germ of `[wy, y]` and germ of `[wy, wuy]` at `wy` are opposite; vacuous when `|y - wy| < 10Δ`.
pub fn admissible_for(space: &Space, set: &SeparatorSet, w: &Element, u: &Element) -> Result<bool> {
    let ctx = &set.context;
    let y = &ctx.y;
    let wy = space.act(w, y);
    if space.dist(y, &wy) < 10 * ctx.delta_n {
        return Ok(true);
    }
    let wuy = space.act(&space.group().mul(w, u), y);
    let back = Germ::new(wy.clone(), y.clone(), ctx.delta_n);
    let fwd = Germ::new(wy, wuy, ctx.delta_n);
    if fwd.is_empty(space) {
        return Ok(false);
    }
    germ_opposite(space, &back, &fwd)
}

/// `u` admissible for `w`, and `u^-1` admissible for `w'^-1`.
pub fn admissible_pair(space: &Space, set: &SeparatorSet, w: &Element, w2: &Element, u: &Element) -> Result<bool> {
    let g = space.group();
    Ok(admissible_for(space, set, w, u)? && admissible_for(space, set, &g.inv(w2), &g.inv(u))?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleChoice {
    /// Zero-based separator index.
    pub index: usize,
    /// `|y - wy| < 10Δ`, so every separator qualifies on the `w` side.
    pub vacuous: bool,
    /// `|y - wuy| - (|y - wy| + |wy - wuy| - 4Δ)`, checked when not vacuous.
    pub concatenation_slack: Option<i64>,
}

/// Lowest-index separator admissible for `(w, w')`, with the concatenation bound checked.
pub fn choose_admissible(space: &Space, set: &SeparatorSet, w: &Element, w2: &Element) -> Result<AdmissibleChoice> {
    let g = space.group();
    let ctx = &set.context;
    let y = &ctx.y;
    let wy = space.act(w, y);
    let d_w = space.dist(y, &wy);
    let vacuous = d_w < 10 * ctx.delta_n;
    for (index, sep) in set.separators.iter().enumerate() {
        if !admissible_pair(space, set, w, w2, &sep.u.element)? {
            continue;
        }
        let concatenation_slack = if vacuous {
            None
        } else {
            let wuy = space.act(&g.mul(w, &sep.u.element), y);
            let lhs = space.dist(y, &wuy) as i64;
            let rhs = (d_w + space.dist(&wy, &wuy)) as i64 - 4 * ctx.delta_n as i64;
            if lhs < rhs {
                return Err(Error::Audit(format!(
                    "concatenation bound fails for w = {}, u{}: {lhs} < {rhs}",
                    g.format_compact(w),
                    index + 1
                )));
            }
            Some(lhs - rhs)
        };
        return Ok(AdmissibleChoice {
            index,
            vacuous,
            concatenation_slack,
        });
    }
    Err(Error::Audit(format!(
        "no separator is admissible for ({}, {}); the separator set is broken",
        g.format_compact(w),
        g.format_compact(w2)
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tail {
    /// Index into the ball of the approaching element `w`.
    pub approached_by: usize,
    pub separator: usize,
}

/// `w'` is forbidden if `5 |wy - w'uy| <= |y - uy|` for some `w` in the ball and `u` admissible for `w'`.
pub fn forbidden_test(space: &Space, set: &SeparatorSet, ball_m: &[Element], w2: &Element) -> Result<Option<Tail>> {
    let g = space.group();
    let y = &set.context.y;
    let points: Vec<_> = ball_m.iter().map(|w| space.act(w, y)).collect();
    for (si, sep) in set.separators.iter().enumerate() {
        if !admissible_for(space, set, w2, &sep.u.element)? {
            continue;
        }
        let len = space.displacement(&sep.u.element, y);
        let tip = space.act(&g.mul(w2, &sep.u.element), y);
        if let Some(wi) = points.iter().position(|p| 5 * space.dist(p, &tip) <= len) {
            return Ok(Some(Tail {
                approached_by: wi,
                separator: si,
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdequateReport {
    pub m: usize,
    pub ball_size: usize,
    pub forbidden: usize,
    pub non_forbidden: usize,
    pub adequate: usize,
    /// First forbidden element with its tail.
    pub forbidden_witness: Option<(String, Tail)>,
    /// `#forbidden <= D #non-forbidden`.
    pub ratio_bound: bool,
    /// `|B_m| <= D^4 (D + 1) #adequate`.
    pub adequate_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdequateSet {
    pub ball: Vec<Element>,
    pub forbidden: Vec<bool>,
    pub adequate: Vec<Element>,
    pub report: AdequateReport,
}

/// Classifies `B_m(S)` and greedily keeps non-forbidden elements in distinct `F(u_i)` cosets.
/// Fails hard when either counting bound is violated.
pub fn adequate_selection(space: &Space, s: &GeneratingSet, set: &SeparatorSet, d: u64, m: usize, cap: usize) -> Result<AdequateSet> {
    let g = space.group();
    let b = ball(g, s, m, cap)?;
    let mut forbidden = Vec::with_capacity(b.len());
    let mut witness = None;
    for w in &b {
        let t = forbidden_test(space, set, &b, w)?;
        if witness.is_none() {
            if let Some(t) = &t {
                witness = Some((g.format_compact(w), t.clone()));
            }
        }
        forbidden.push(t.is_some());
    }
    let mut adequate: Vec<Element> = Vec::new();
    for (w, _) in b.iter().zip(&forbidden).filter(|(_, &f)| !f) {
        let separated = adequate.iter().all(|a| {
            let q = g.mul(&g.inv(a), w);
            set.separators.iter().all(|sep| !sep.in_finite_part(space, &q))
        });
        if separated {
            adequate.push(w.clone());
        }
    }
    let nf = forbidden.iter().filter(|&&f| !f).count();
    let fb = b.len() - nf;
    let ratio_bound = fb as u64 <= d * nf as u64;
    let adequate_bound = b.len() as u64 <= d.pow(4) * (d + 1) * adequate.len() as u64;
    let report = AdequateReport {
        m,
        ball_size: b.len(),
        forbidden: fb,
        non_forbidden: nf,
        adequate: adequate.len(),
        forbidden_witness: witness,
        ratio_bound,
        adequate_bound,
    };
    if !ratio_bound {
        return Err(Error::Audit(format!("forbidden ratio: {fb} > {d} * {nf}")));
    }
    if !adequate_bound {
        return Err(Error::Audit(format!(
            "adequate bound: |B_{m}| = {} > {} * {}",
            b.len(),
            d.pow(4) * (d + 1),
            adequate.len()
        )));
    }
    Ok(AdequateSet {
        ball: b,
        forbidden,
        adequate,
        report,
    })
}

/// `Φ(w_1, ..., w_q) = w_1 u_1 ... w_q u_q` with `u_i` admissible for `(w_i, w_{i+1})`, `w_{q+1} = 1`.
pub fn phi_map(space: &Space, set: &SeparatorSet, tuple: &[Element]) -> Result<(Element, Vec<usize>)> {
    let g = space.group();
    let mut out = Element::identity();
    let mut chosen = Vec::with_capacity(tuple.len());
    let e = Element::identity();
    for (i, w) in tuple.iter().enumerate() {
        let next = tuple.get(i + 1).unwrap_or(&e);
        let c = choose_admissible(space, set, w, next)?;
        out = g.mul(&g.mul(&out, w), &set.separators[c.index].u.element);
        chosen.push(c.index);
    }
    Ok((out, chosen))
}

/// Largest distance from a junction of the broken geodesic `y, w_1 y, w_1 u_1 y, ...` to the geodesic.
fn broken_geodesic_defect(space: &Space, set: &SeparatorSet, tuple: &[Element], chosen: &[usize]) -> u64 {
    let g = space.group();
    let y = &set.context.y;
    let mut prefix = Element::identity();
    let mut junctions = vec![y.clone()];
    for (w, &c) in tuple.iter().zip(chosen) {
        prefix = g.mul(&prefix, w);
        junctions.push(space.act(&prefix, y));
        prefix = g.mul(&prefix, &set.separators[c].u.element);
        junctions.push(space.act(&prefix, y));
    }
    let end = junctions.last().expect("non-empty").clone();
    junctions.iter().map(|p| space.gromov_product(p, y, &end)).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiReport {
    pub m: usize,
    pub q: usize,
    pub adequate: AdequateReport,
    pub tuples: u64,
    pub distinct_images: u64,
    pub collision: Option<(Vec<String>, Vec<String>)>,
    pub max_hausdorff: u64,
    /// `2Δ + 100δ`.
    pub hausdorff_bound: u64,
    pub passed: bool,
}

fn render(g: &Group, t: &[Element]) -> Vec<String> {
    t.iter().map(|e| g.format_compact(e)).collect()
}

/// All `q`-tuples of adequate elements of `B_m` have distinct `Φ` images.
pub fn phi_injectivity_check(
    space: &Space,
    s: &GeneratingSet,
    set: &SeparatorSet,
    delta: u64,
    d: u64,
    m: usize,
    q: usize,
    cap: usize,
) -> Result<PhiReport> {
    let g = space.group();
    let adequate = adequate_selection(space, s, set, d, m, cap)?;
    let a = &adequate.adequate;
    let mut seen: HashMap<Box<[u8]>, Vec<Element>> = HashMap::new();
    let total = (a.len() as u64)
        .checked_pow(q as u32)
        .ok_or_else(|| Error::Precondition(format!("{}^{q} tuples", a.len())))?;
    let mut max_h = 0;
    let mut collision = None;
    for n in 0..total {
        let mut rest = n;
        let idx: Vec<usize> = (0..q)
            .map(|_| {
                let i = (rest % a.len() as u64) as usize;
                rest /= a.len() as u64;
                i
            })
            .collect();
        let tuple: Vec<Element> = idx.iter().rev().map(|&i| a[i].clone()).collect();
        let (img, chosen) = phi_map(space, set, &tuple)?;
        max_h = max_h.max(broken_geodesic_defect(space, set, &tuple, &chosen));
        if let Some(prev) = seen.insert(g.encode(&img), tuple.clone()) {
            if collision.is_none() {
                collision = Some((render(g, &prev), render(g, &tuple)));
            }
        }
    }
    let tuples = total;
    let bound = 2 * set.context.delta_n + 100 * delta;
    let report = PhiReport {
        m,
        q,
        adequate: adequate.report,
        tuples,
        distinct_images: seen.len() as u64,
        passed: collision.is_none() && max_h <= bound,
        collision,
        max_hausdorff: max_h,
        hausdorff_bound: bound,
    };
    Ok(report)
}
