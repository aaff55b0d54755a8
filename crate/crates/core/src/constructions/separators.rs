use serde::{Deserialize, Serialize};

use crate::constants::ActionConstants;
use crate::error::{Error, Result};
use crate::germ::{germ_equivalent, germ_opposite, Germ};
use crate::group::{Element, GeneratingSet, Spelled};
use crate::growth::ball;
use crate::space::{Axis, Point, Space};

use super::displacement::{large_displacement_in, spelled_power};
use super::free_pair::independent_conjugator;

/// Base point `y` realising `L(S^2DM)` and the germ scale `Δ = 100δ + 4D L(S^2DM)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermContext {
    pub power: usize,
    pub set: Vec<Spelled>,
    pub joint: u64,
    pub y: Point,
    pub delta_n: u64,
}

impl GermContext {
    /// Germ of `[y, g y]` at `y`.
    pub fn germ(&self, space: &Space, g: &Element) -> Germ {
        Germ::new(self.y.clone(), space.act(g, &self.y), self.delta_n)
    }
}

pub fn germ_context(space: &Space, s: &GeneratingSet, constants: &ActionConstants, cap: usize) -> Result<GermContext> {
    let power = (2 * constants.d * constants.m_power) as usize;
    let set = spelled_power(space.group(), s, power, cap)?;
    let elements: Vec<Element> = set.iter().map(|x| x.element.clone()).collect();
    let (joint, y) = space.joint_displacement(&elements);
    if joint == 0 {
        return Err(Error::Elementary(format!("S^{power} has a global fixed point")));
    }
    Ok(GermContext {
        power,
        set,
        joint,
        y,
        delta_n: 100 * constants.delta + 4 * constants.d * joint,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub u: Spelled,
    pub axis: Option<Axis>,
}

impl Separator {
    /// `h` fixes the axis of `u` pointwise.
    pub fn in_finite_part(&self, space: &Space, h: &Element) -> bool {
        match &self.axis {
            Some(a) => {
                let end = space.act(&a.element, &a.base);
                space.act(h, &a.base) == a.base && space.act(h, &end) == end
            }
            None => h.is_identity(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorSet {
    pub context: GermContext,
    pub separators: Vec<Separator>,
    /// `None` for hand-made fixtures.
    pub report: Option<SeparatorReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorOptions {
    /// Radius in `S` of the ball of translates used for small cancellation.
    pub ball_radius: usize,
    pub cap: usize,
}

impl Default for SeparatorOptions {
    fn default() -> Self {
        SeparatorOptions {
            ball_radius: 3,
            cap: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorReport {
    pub g: String,
    pub g_spelled_length: usize,
    pub conjugator: String,
    pub power: usize,
    pub joint: u64,
    pub y: String,
    pub delta_n: u64,
    pub k: u64,
    pub b: u64,
    pub spelled_lengths: Vec<usize>,
    pub lengths: Vec<u64>,
    pub translations: Vec<u64>,
    pub axis_distances: Vec<u64>,
    pub finite_parts: Vec<usize>,
    pub germs_opposite: Vec<Check>,
    pub property_i: Vec<Check>,
    pub property_ii: Vec<Check>,
    pub ball_radius: usize,
    pub ball_size: usize,
    pub pairs_checked: u64,
    /// Largest `10 * overlap - min length` over the checked pairs; must stay `<= 0`.
    pub worst_excess: i64,
    pub property_iii_witness: Option<String>,
    pub primitivity_witness: Option<String>,
    pub word_length: bool,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Exponent blocks of the four words in `w` and `z`: `(leading z, w-exponents, trailing z)`.
/// After each `w^e` except the last of `u1, u3` comes a `z`.
fn blocks() -> [(bool, std::ops::RangeInclusive<u64>, bool); 4] {
    [(false, 1..=20, false), (false, 21..=40, true), (true, 41..=60, false), (true, 61..=80, true)]
}

fn assemble(s: &GeneratingSet, space: &Space, w: &Spelled, z: &Spelled) -> Vec<Spelled> {
    let group = space.group();
    blocks()
        .into_iter()
        .map(|(lead, range, trail)| {
            let last = *range.end();
            let mut u = Spelled {
                element: Element::identity(),
                spelling: Vec::new(),
            };
            if lead {
                u = z.clone();
            }
            for e in range {
                u = s.spelled_mul(group, &u, &s.spelled_pow(group, w, e as i64));
                if e != last || trail {
                    u = s.spelled_mul(group, &u, z);
                }
            }
            u
        })
        .collect()
}

pub fn build_separators(
    space: &Space,
    s: &GeneratingSet,
    constants: &ActionConstants,
    options: &SeparatorOptions,
) -> Result<SeparatorSet> {
    let group = space.group();
    let ctx = germ_context(space, s, constants, options.cap)?;
    let ld = large_displacement_in(space, s, &ctx.set)?;
    let c = independent_conjugator(space, s, &ld.element.element)?;
    let k = constants.k();
    let w = s.spelled_pow(group, &ld.element, k as i64);
    let sc = s.spelled(c);
    let z = s.spelled_mul(group, &s.spelled_mul(group, &sc, &w), &s.spelled_inv(group, &sc));
    let words = assemble(s, space, &w, &z);
    let separators: Vec<Separator> = words
        .into_iter()
        .map(|u| Separator {
            axis: space.axis(&u.element),
            u,
        })
        .collect();
    let y = ctx.y.clone();
    let delta = ctx.delta_n;
    let mut failures = Vec::new();

    let gammas = [
        ctx.germ(space, &w.element),
        ctx.germ(space, &z.element),
        ctx.germ(space, &group.inv(&w.element)),
        ctx.germ(space, &group.inv(&z.element)),
    ];
    let mut germs_opposite = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            let ok = germ_opposite(space, &gammas[a], &gammas[b]).unwrap_or(false);
            let label = format!("gamma{} opposite gamma{}", a + 1, b + 1);
            if !ok {
                failures.push(label.clone());
            }
            germs_opposite.push(Check { label, passed: ok });
        }
    }

    // forward germ of u_i, then backward germ u_i^-1 germ[u_i y, y]
    let expected = [(0, 2), (0, 3), (1, 2), (1, 3)];
    let mut property_i = Vec::new();
    for (i, sep) in separators.iter().enumerate() {
        let fwd = ctx.germ(space, &sep.u.element);
        let bwd = ctx.germ(space, &group.inv(&sep.u.element));
        for (germ, gi, dir) in [(&fwd, expected[i].0, "forward"), (&bwd, expected[i].1, "backward")] {
            let ok = germ_equivalent(space, germ, &gammas[gi]).unwrap_or(false);
            let label = format!("(i) u{} {} germ ~ gamma{}", i + 1, dir, gi + 1);
            if !ok {
                failures.push(label.clone());
            }
            property_i.push(Check { label, passed: ok });
        }
    }

    let mut property_ii = Vec::new();
    let mut translations = Vec::new();
    let mut axis_distances = Vec::new();
    for (i, sep) in separators.iter().enumerate() {
        let (t, d) = match &sep.axis {
            Some(a) => (a.translation, space.dist_to_axis(a, &y)),
            None => (0, u64::MAX),
        };
        translations.push(t);
        axis_distances.push(d);
        for (label, ok) in [
            (format!("(ii) lambda(u{}) >= 100 Delta", i + 1), t >= 100 * delta),
            (format!("(ii) d(y, axis u{}) <= Delta", i + 1), d <= delta),
        ] {
            if !ok {
                failures.push(label.clone());
            }
            property_ii.push(Check { label, passed: ok });
        }
    }

    let translates = ball(group, s, options.ball_radius, options.cap)?;
    let ends: Vec<Point> = separators.iter().map(|sep| space.act(&sep.u.element, &y)).collect();
    let lengths: Vec<u64> = ends.iter().map(|e| space.dist(&y, e)).collect();
    let mut pairs = 0u64;
    let mut worst = i64::MIN;
    let mut witness3 = None;
    for h in &translates {
        let hy = space.act(h, &y);
        for j in 0..4 {
            let hend = space.act(h, &ends[j]);
            for i in 0..4 {
                if i == j && separators[i].in_finite_part(space, h) {
                    continue;
                }
                pairs += 1;
                let overlap = space.segment_overlap(&y, &ends[i], &hy, &hend) as i64;
                let excess = 10 * overlap - lengths[i].min(lengths[j]) as i64;
                if excess > worst {
                    worst = excess;
                }
                if excess > 0 && witness3.is_none() {
                    let label = format!("(iii) i={} j={} w={}", i + 1, j + 1, group.format_compact(h));
                    failures.push(label.clone());
                    witness3 = Some(label);
                }
            }
        }
    }

    let mut primitivity_witness = None;
    'outer: for (i, sep) in separators.iter().enumerate() {
        let Some(axis) = &sep.axis else { continue };
        for h in &translates {
            if space.stabilises_axis(axis, h) && !sep.in_finite_part(space, h) {
                let label = format!("u{} axis preserved by {}", i + 1, group.format_compact(h));
                failures.push(label.clone());
                primitivity_witness = Some(label);
                break 'outer;
            }
        }
    }

    let spelled_lengths: Vec<usize> = separators.iter().map(|sep| sep.u.len()).collect();
    let word_length = spelled_lengths.iter().all(|&l| l as u64 <= constants.b())
        && separators.iter().all(|sep| s.check_spelling(group, &sep.u));
    if !word_length {
        failures.push(format!("word length above b = {}", constants.b()));
    }
    let finite_parts = separators
        .iter()
        .map(|sep| translates.iter().filter(|h| sep.in_finite_part(space, h)).count())
        .collect();

    let report = SeparatorReport {
        g: group.format_compact(&ld.element.element),
        g_spelled_length: ld.element.len(),
        conjugator: group.format_compact(s.get(c)),
        power: ctx.power,
        joint: ctx.joint,
        y: space.format_point(&y),
        delta_n: delta,
        k,
        b: constants.b(),
        spelled_lengths,
        lengths,
        translations,
        axis_distances,
        finite_parts,
        germs_opposite,
        property_i,
        property_ii,
        ball_radius: options.ball_radius,
        ball_size: translates.len(),
        pairs_checked: pairs,
        worst_excess: worst,
        property_iii_witness: witness3,
        primitivity_witness,
        word_length,
        passed: failures.is_empty(),
        failures,
    };
    Ok(SeparatorSet {
        context: ctx,
        separators,
        report: Some(report),
    })
}

impl SeparatorSet {
    /// Hand-made separators over a given context, without any property check.
    pub fn fixture(space: &Space, context: GermContext, words: Vec<Spelled>) -> Self {
        SeparatorSet {
            context,
            separators: words
                .into_iter()
                .map(|u| Separator {
                    axis: space.axis(&u.element),
                    u,
                })
                .collect(),
            report: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Group;

    #[test]
    fn word_shapes() {
        let g = Group::new("f2".parse().unwrap()).unwrap();
        let x = Space::new(&g).unwrap();
        let s = GeneratingSet::standard(&g);
        let w = s.spelled(0);
        let z = s.spelled(2);
        let us = assemble(&s, &x, &w, &z);
        let lens: Vec<usize> = us.iter().map(|u| u.len()).collect();
        // w-exponent sums 210, 610, 1010, 1410 and z counts 19, 20, 20, 21
        assert_eq!(lens, vec![229, 630, 1030, 1431]);
        assert!(g.format_compact(&us[0].element).starts_with("abaab"));
        assert!(g.format_compact(&us[3].element).ends_with("a^80b"));
    }

    #[test]
    fn standard_models_pass() {
        for (m, g0, delta) in [("f2", "a^4", 16), ("fp:2,3", "stst", 16)] {
            let g = Group::new(m.parse().unwrap()).unwrap();
            let x = Space::new(&g).unwrap();
            let s = GeneratingSet::standard(&g);
            let set = build_separators(&x, &s, &ActionConstants::trees(), &SeparatorOptions::default()).unwrap();
            let r = set.report.unwrap();
            assert!(r.passed, "{m}: {:?}", r.failures);
            assert_eq!((r.g.as_str(), r.delta_n), (g0, delta), "{m}");
            assert!(r.translations.iter().all(|&t| t >= 100 * r.delta_n));
        }
    }
}
