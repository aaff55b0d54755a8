use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{power_set, Element, GeneratingSet, Group, Spelled};
use crate::space::{Point, Space};

/// Output of the large-displacement selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargeDisplacement {
    pub element: Spelled,
    /// 1 when the element lies in the scanned set, 2 for a product of two members.
    pub level: usize,
    pub point: Point,
    /// `L(S)` at `point`.
    pub joint: u64,
    /// `d(point, g point)`.
    pub displacement: u64,
    pub translation: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeDisplacementSummary {
    pub element: String,
    pub level: usize,
    pub joint: u64,
    pub displacement: u64,
    pub translation: u64,
    pub spelled_length: usize,
}

impl LargeDisplacement {
    pub fn summary(&self, group: &Group) -> LargeDisplacementSummary {
        LargeDisplacementSummary {
            element: group.format_compact(&self.element.element),
            level: self.level,
            joint: self.joint,
            displacement: self.displacement,
            translation: self.translation,
            spelled_length: self.element.len(),
        }
    }
}

/// Members of `S^p` with spellings in `s`.
pub fn spelled_power(group: &Group, s: &GeneratingSet, p: usize, cap: usize) -> Result<Vec<Spelled>> {
    let ps = power_set(group, s, p, cap)?;
    let mut out: Vec<Spelled> = ps.iter().cloned().collect();
    out.sort_by(|a, b| group.shortlex_cmp(&a.element, &b.element));
    Ok(out)
}

/// First hyperbolic `g` in `S`, then in `S^2 \ S` (shortlex), with
/// `L(S) <= d(x, g x) <= L(g)` at the joint-displacement minimiser `x`.
pub fn large_displacement_element(space: &Space, s: &GeneratingSet) -> Result<LargeDisplacement> {
    let set: Vec<Spelled> = (0..s.len()).map(|i| s.spelled(i)).collect();
    large_displacement_in(space, s, &set)
}

/// The same selection for a symmetric family `set` spelled over `base`.
pub fn large_displacement_in(space: &Space, base: &GeneratingSet, set: &[Spelled]) -> Result<LargeDisplacement> {
    let group = space.group();
    let elements: Vec<Element> = set.iter().map(|x| x.element.clone()).collect();
    let (joint, x) = space.joint_displacement(&elements);
    if joint == 0 {
        return Err(Error::Elementary("the set has a common fixed point".into()));
    }
    let test = |g: &Element| -> Option<(u64, u64)> {
        let lambda = space.translation_length(g);
        let d = space.displacement(g, &x);
        (lambda > 0 && joint <= d && d <= lambda).then_some((d, lambda))
    };
    let mut sorted: Vec<&Spelled> = set.iter().collect();
    sorted.sort_by(|a, b| group.shortlex_cmp(&a.element, &b.element));
    for g in &sorted {
        if let Some((d, lambda)) = test(&g.element) {
            return Ok(LargeDisplacement {
                element: (*g).clone(),
                level: 1,
                point: x,
                joint,
                displacement: d,
                translation: lambda,
            });
        }
    }
    let members: HashSet<&Element> = elements.iter().collect();
    let mut products: Vec<(crate::Word, Spelled)> = Vec::new();
    let mut seen: HashSet<Element> = HashSet::new();
    for a in &sorted {
        for b in &sorted {
            let p = base.spelled_mul(group, a, b);
            if p.element.is_identity() || members.contains(&p.element) || !seen.insert(p.element.clone()) {
                continue;
            }
            products.push((group.to_word(&p.element), p));
        }
    }
    products.sort_by(|a, b| a.0.cmp(&b.0));
    for (_, g) in products {
        if let Some((d, lambda)) = test(&g.element) {
            return Ok(LargeDisplacement {
                element: g,
                level: 2,
                point: x,
                joint,
                displacement: d,
                translation: lambda,
            });
        }
    }
    Err(Error::NotFound("no hyperbolic element of large displacement in S or S^2".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicWitness {
    pub element: Spelled,
    pub level: usize,
    pub translation: u64,
    /// First member of `S` moving the axis off itself.
    pub non_elementary_witness: Element,
}

/// First hyperbolic element of `S^M` in level and shortlex order, together with
/// an element of `S` outside its elementary closure.
pub fn find_hyperbolic(space: &Space, s: &GeneratingSet, m_power: usize, cap: usize) -> Result<HyperbolicWitness> {
    let group = space.group();
    let ps = power_set(group, s, m_power, cap)?;
    for level in 1..=ps.depth() {
        for g in ps.level(level) {
            let lambda = space.translation_length(&g.element);
            if lambda == 0 {
                continue;
            }
            let axis = space.axis(&g.element).expect("hyperbolic");
            let Some(w) = s.elements().iter().find(|h| !space.stabilises_axis(&axis, h)) else {
                return Err(Error::Elementary(format!(
                    "every generator preserves the axis of {}",
                    group.format_compact(&g.element)
                )));
            };
            return Ok(HyperbolicWitness {
                element: g.clone(),
                level,
                translation: lambda,
                non_elementary_witness: w.clone(),
            });
        }
    }
    Err(Error::Elementary(format!("S^{m_power} contains no hyperbolic element")))
}
