use serde::{Deserialize, Serialize};

use crate::constants::ActionConstants;
use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Spelled};
use crate::pingpong::{for_each_reduced_word, junction_certificate, JunctionCertificate};
use crate::space::{Point, Space};

/// `x = g^k`, `y = s g^k s^-1` with the verification record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreePair {
    pub g: Spelled,
    pub conjugator: usize,
    pub k: u64,
    pub x: Spelled,
    pub y: Spelled,
    pub point: Point,
    pub report: FreePairReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreePairReport {
    pub g: String,
    pub conjugator: String,
    pub k: u64,
    pub x: String,
    pub y: String,
    pub translation_g: u64,
    pub depth: usize,
    pub words_checked: u64,
    /// `10 (2 D L(g) + 100 δ)`.
    pub required_translation: u64,
    pub min_translation: u64,
    pub min_translation_word: Vec<(usize, bool)>,
    pub relation: Option<Vec<(usize, bool)>>,
    pub junction: JunctionCertificate,
    pub passed: bool,
}

/// Conjugator index: the first `s` in `S` whose conjugate axis is not parallel to that of `g`.
pub fn independent_conjugator(space: &Space, s: &GeneratingSet, g: &Element) -> Result<usize> {
    let group = space.group();
    let axis = space
        .axis(g)
        .ok_or_else(|| Error::Precondition(format!("{} is not hyperbolic", group.format_compact(g))))?;
    (0..s.len()).find(|&i| !space.stabilises_axis(&axis, s.get(i))).ok_or_else(|| {
        Error::Elementary(format!(
            "every element of S preserves the axis of {}; the subgroup is virtually cyclic",
            group.format_compact(g)
        ))
    })
}

/// Builds the pair from `g` (spelled over `s`) and checks every reduced word of
/// length at most `depth` for non-triviality and translation length.
pub fn build_free_pair(
    space: &Space,
    s: &GeneratingSet,
    g: &Spelled,
    point: &Point,
    constants: &ActionConstants,
    depth: usize,
) -> Result<FreePair> {
    let group = space.group();
    let c = independent_conjugator(space, s, &g.element)?;
    let k = constants.k();
    let x = s.spelled_pow(group, g, k as i64);
    let sc = s.spelled(c);
    let y = s.spelled_mul(group, &s.spelled_mul(group, &sc, &x), &s.spelled_inv(group, &sc));
    let lg = space.translation_length(&g.element);
    let required = 10 * (2 * constants.d * lg + 100 * constants.delta);
    let basis = [x.element.clone(), y.element.clone()];
    let mut relation = None;
    let mut min_t = u64::MAX;
    let mut min_word = Vec::new();
    let decode = |w: &[usize]| w.iter().map(|&l| (l / 2, l % 2 == 1)).collect::<Vec<_>>();
    let words = for_each_reduced_word(group, &basis, depth, |w, v| {
        if v.is_identity() {
            relation = Some(decode(w));
            return false;
        }
        let t = space.translation_length(v);
        if t < min_t {
            min_t = t;
            min_word = decode(w);
        }
        true
    });
    let junction = junction_certificate(space, &basis, point);
    let passed = relation.is_none() && min_t >= required && junction.passed;
    let report = FreePairReport {
        g: group.format_compact(&g.element),
        conjugator: group.format_compact(s.get(c)),
        k,
        x: group.format_compact(&x.element),
        y: group.format_compact(&y.element),
        translation_g: lg,
        depth,
        words_checked: words,
        required_translation: required,
        min_translation: if relation.is_some() { 0 } else { min_t },
        min_translation_word: min_word,
        relation,
        junction,
        passed,
    };
    Ok(FreePair {
        g: g.clone(),
        conjugator: c,
        k,
        x,
        y,
        point: point.clone(),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::large_displacement_element;
    use crate::Group;

    #[test]
    fn free_group_pair() {
        let g = Group::new("f2".parse().unwrap()).unwrap();
        let x = Space::new(&g).unwrap();
        let s = GeneratingSet::standard(&g);
        let w = large_displacement_element(&x, &s).unwrap();
        let p = build_free_pair(&x, &s, &w.element, &w.point, &ActionConstants::trees(), 8).unwrap();
        assert!(p.report.passed);
        assert_eq!(p.report.x, "a^60");
        assert_eq!(p.report.y, "ba^60B");
        assert_eq!(p.report.words_checked, 13120);
        assert_eq!(p.report.required_translation, 20);
        assert_eq!(p.report.min_translation, 60);
    }

    #[test]
    fn cyclic_set_is_rejected() {
        let g = Group::new("f2".parse().unwrap()).unwrap();
        let x = Space::new(&g).unwrap();
        let s = GeneratingSet::parse(&g, "a, a^3").unwrap();
        let a = s.spelled(0);
        let r = build_free_pair(&x, &s, &a, &x.basepoint(), &ActionConstants::trees(), 4);
        assert!(matches!(r, Err(Error::Elementary(_))));
    }
}
