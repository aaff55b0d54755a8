use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constants::ActionConstants;
use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Spelled};
use crate::growth::ball;
use crate::space::{Axis, Point, Space};

use super::free_pair::FreePair;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveOptions {
    /// Radius of the ball searched for elements of `E(u)` and `F(u)`.
    pub ball_radius: usize,
    pub cap: usize,
}

impl Default for PrimitiveOptions {
    fn default() -> Self {
        PrimitiveOptions {
            ball_radius: 4,
            cap: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveElement {
    pub u: Spelled,
    pub axis: Axis,
    /// Ball elements fixing `[p, u p]` pointwise, `p` the axis base point.
    pub finite_part: Vec<Element>,
    pub report: PrimitiveReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveReport {
    pub u: String,
    pub translation: u64,
    pub required_translation: u64,
    pub axis_distance: u64,
    pub axis_bound: u64,
    /// Length of the recorded spelling of `u` over `S`.
    pub spelled_length: usize,
    /// `m |g|_S`.
    pub length_bound: u64,
    /// `m` alone, reported for comparison.
    pub literal_bound: u64,
    pub ball_radius: usize,
    pub ball_size: usize,
    pub axis_stabilisers: usize,
    pub finite_part: Vec<String>,
    /// First ball element preserving the axis without fixing it.
    pub primitivity_witness: Option<String>,
    pub checks: BTreeMap<String, bool>,
    pub passed: bool,
}

/// `u = g^k (s g^2k s^-1) g^3k (s g^k s^-1) g^k`, spelled letter for letter.
pub fn primitive_word(s: &GeneratingSet, space: &Space, pair: &FreePair) -> Spelled {
    let group = space.group();
    let (x, y) = (&pair.x, &pair.y);
    let c = s.spelled(pair.conjugator);
    let y2 = s.spelled_mul(group, &s.spelled_mul(group, &c, &s.spelled_pow(group, x, 2)), &s.spelled_inv(group, &c));
    let parts = [
        x.clone(),
        y2,
        s.spelled_pow(group, x, 3),
        y.clone(),
        x.clone(),
    ];
    let mut u = parts[0].clone();
    for p in &parts[1..] {
        u = s.spelled_mul(group, &u, p);
    }
    u
}

/// Elements of `candidates` fixing both ends of `[p, q]`.
pub fn segment_fixers(space: &Space, candidates: &[Element], p: &Point, q: &Point) -> Vec<Element> {
    candidates
        .iter()
        .filter(|h| space.act(h, p) == *p && space.act(h, q) == *q)
        .cloned()
        .collect()
}

pub fn build_primitive_u(
    space: &Space,
    s: &GeneratingSet,
    pair: &FreePair,
    constants: &ActionConstants,
    options: &PrimitiveOptions,
) -> Result<PrimitiveElement> {
    if !pair.report.passed {
        return Err(Error::Precondition("the free pair certificate did not pass".into()));
    }
    let group = space.group();
    let u = primitive_word(s, space, pair);
    if !s.check_spelling(group, &u) {
        return Err(Error::Audit("spelling of u does not multiply out to u".into()));
    }
    let axis = space
        .axis(&u.element)
        .ok_or_else(|| Error::Audit(format!("u = {} is not hyperbolic", group.format_compact(&u.element))))?;
    let required = pair.report.required_translation;
    let axis_distance = space.dist_to_axis(&axis, &pair.point);
    let axis_bound = 50 * constants.delta;
    let length_bound = constants.m() * pair.g.len() as u64;

    let std = GeneratingSet::standard(group);
    let candidates = ball(group, &std, options.ball_radius, options.cap)?;
    let end = space.act(&u.element, &axis.base);
    let finite_part = segment_fixers(space, &candidates, &axis.base, &end);
    let mut stabilisers = 0;
    let mut witness = None;
    for h in &candidates {
        if space.stabilises_axis(&axis, h) {
            stabilisers += 1;
            if witness.is_none() && !finite_part.contains(h) {
                witness = Some(group.format_compact(h));
            }
        }
    }

    let mut checks = BTreeMap::new();
    checks.insert("translation".to_string(), axis.translation >= required);
    checks.insert("axis_distance".to_string(), axis_distance <= axis_bound);
    checks.insert("word_length".to_string(), u.len() as u64 <= length_bound);
    checks.insert("primitive".to_string(), witness.is_none());
    checks.insert("finite_part".to_string(), finite_part.len() as u64 <= constants.d);
    let passed = checks.values().all(|&b| b);
    let report = PrimitiveReport {
        u: group.format_compact(&u.element),
        translation: axis.translation,
        required_translation: required,
        axis_distance,
        axis_bound,
        spelled_length: u.len(),
        length_bound,
        literal_bound: constants.m(),
        ball_radius: options.ball_radius,
        ball_size: candidates.len(),
        axis_stabilisers: stabilisers,
        finite_part: finite_part.iter().map(|e| group.format_compact(e)).collect(),
        primitivity_witness: witness,
        checks,
        passed,
    };
    Ok(PrimitiveElement {
        u,
        axis,
        finite_part,
        report,
    })
}
