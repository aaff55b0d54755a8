use serde::{Deserialize, Serialize};

use crate::constants::ActionConstants;
use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Spelled};
use crate::pingpong::{junction_certificate, relation_search, JunctionCertificate, RelationSearch};
use crate::space::{Point, Space};

use super::displacement::{find_hyperbolic, large_displacement_in, spelled_power};
use super::free_pair::build_free_pair;
use super::primitive::{build_primitive_u, PrimitiveOptions};

/// Free-basis certificate turned into a lower bound `|basis|^(1/p)` for `e(G, S)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerCertificate {
    pub id: String,
    pub rank: usize,
    pub p: u64,
    pub max_spelled_length: usize,
    pub junction: JunctionCertificate,
    pub relations: RelationSearch,
    pub bound: f64,
}

/// Certifies that `basis` (spelled over `S`, each of length at most `p`) freely
/// generates a free group, and returns `|basis|^(1/p)`.
pub fn certified_lower_bound(
    space: &Space,
    s: &GeneratingSet,
    basis: &[Spelled],
    p: u64,
    point: &Point,
    relation_depth: usize,
    node_budget: u64,
) -> Result<LowerCertificate> {
    let group = space.group();
    if basis.is_empty() {
        return Err(Error::Precondition("empty basis".into()));
    }
    if p == 0 {
        return Err(Error::Precondition("p must be positive".into()));
    }
    let max_len = basis.iter().map(|b| b.len()).max().unwrap_or(0);
    if max_len as u64 > p {
        return Err(Error::Audit(format!("basis element of S-length {max_len} is not in S^{p}")));
    }
    if let Some(b) = basis.iter().find(|b| !s.check_spelling(group, b)) {
        return Err(Error::Audit(format!("spelling of {} is wrong", group.format_compact(&b.element))));
    }
    let elements: Vec<Element> = basis.iter().map(|b| b.element.clone()).collect();
    let junction = junction_certificate(space, &elements, point);
    let relations = relation_search(group, &elements, relation_depth, node_budget);
    if let Some(r) = &relations.relation {
        return Err(Error::Audit(format!("basis satisfies the relation {r:?}")));
    }
    if !junction.passed {
        return Err(Error::Audit(format!(
            "ping-pong certificate fails at letters {:?} with slack {}",
            junction.worst, junction.min_slack
        )));
    }
    Ok(LowerCertificate {
        id: format!("pingpong-r{}-p{}-d{}", elements.len(), p, relations.depth),
        rank: elements.len(),
        p,
        max_spelled_length: max_len,
        bound: (elements.len() as f64).powf(1.0 / p as f64),
        junction,
        relations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundOptions {
    /// Depth of the exhaustive check on the pair `g^k, s g^k s^-1`.
    pub pair_depth: usize,
    /// Ball radius for `F(u)` and the primitivity check.
    pub ball_radius: usize,
    pub relation_depth: usize,
    pub node_budget: u64,
    pub cap: usize,
}

impl Default for LowerBoundOptions {
    fn default() -> Self {
        LowerBoundOptions {
            pair_depth: 4,
            ball_radius: 2,
            relation_depth: 8,
            node_budget: 200_000,
            cap: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub hyperbolic: String,
    pub hyperbolic_level: usize,
    pub power: usize,
    pub g: String,
    pub u_translation: u64,
    pub u_spelled_length: usize,
    pub w: Vec<String>,
    pub s_size: usize,
    pub w_size: usize,
    /// `|W| >= |S| / D`.
    pub w_bound: bool,
    pub big_u_power: u64,
    /// `20 M D^2 m + 2`.
    pub exponent: u64,
    pub max_basis_length: usize,
    /// The exponent bounds the measured basis length.
    pub exponent_valid: bool,
    pub certificate: LowerCertificate,
    /// `A |S|^A`.
    pub weak_bound: f64,
    pub bound: f64,
    pub passed: bool,
}

/// `Set U = u^20D, B = {w U w^-1 : w in W}`; certifies `B` free and reports `|W|^(1/p)`.
pub fn lower_bound_audit(
    space: &Space,
    s: &GeneratingSet,
    constants: &ActionConstants,
    options: &LowerBoundOptions,
) -> Result<LowerBoundReport> {
    let group = space.group();
    let hyp = find_hyperbolic(space, s, constants.m_power as usize, options.cap)?;
    let power = (constants.m_power * constants.d) as usize;
    let set = spelled_power(group, s, power, options.cap)?;
    let ld = large_displacement_in(space, s, &set)?;
    let pair = build_free_pair(space, s, &ld.element, &ld.point, constants, options.pair_depth)?;
    if !pair.report.passed {
        return Err(Error::Audit("free pair certificate failed".into()));
    }
    let prim = build_primitive_u(
        space,
        s,
        &pair,
        constants,
        &PrimitiveOptions {
            ball_radius: options.ball_radius,
            cap: options.cap,
        },
    )?;
    if !prim.report.passed {
        return Err(Error::Audit(format!("u checks failed: {:?}", prim.report.checks)));
    }
    let end = space.act(&prim.u.element, &prim.axis.base);
    let in_f = |h: &Element| space.act(h, &prim.axis.base) == prim.axis.base && space.act(h, &end) == end;
    let mut w: Vec<usize> = Vec::new();
    for i in 0..s.len() {
        if w.iter().all(|&j| !in_f(&group.mul(&group.inv(s.get(j)), s.get(i)))) {
            w.push(i);
        }
    }
    let big_u_power = 20 * constants.d;
    let big_u = s.spelled_pow(group, &prim.u, big_u_power as i64);
    let basis: Vec<Spelled> = w
        .iter()
        .map(|&i| {
            let c = s.spelled(i);
            s.spelled_mul(group, &s.spelled_mul(group, &c, &big_u), &s.spelled_inv(group, &c))
        })
        .collect();
    let exponent = constants.a_denominator();
    let max_len = basis.iter().map(|b| b.len()).max().unwrap_or(0);
    let exponent_valid = max_len as u64 <= exponent;
    let p = if exponent_valid { exponent } else { max_len as u64 };
    let certificate =
        certified_lower_bound(space, s, &basis, p, &ld.point, options.relation_depth, options.node_budget)?;
    let a = constants.a();
    let weak = a * (s.len() as f64).powf(a);
    let w_bound = w.len() as u64 * constants.d >= s.len() as u64;
    Ok(LowerBoundReport {
        hyperbolic: group.format_compact(&hyp.element.element),
        hyperbolic_level: hyp.level,
        power,
        g: group.format_compact(&ld.element.element),
        u_translation: prim.axis.translation,
        u_spelled_length: prim.u.len(),
        w: w.iter().map(|&i| group.format_compact(s.get(i))).collect(),
        s_size: s.len(),
        w_size: w.len(),
        w_bound,
        big_u_power,
        exponent,
        max_basis_length: max_len,
        exponent_valid,
        bound: certificate.bound,
        passed: w_bound && weak <= certificate.bound,
        certificate,
        weak_bound: weak,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Group;

    #[test]
    fn certified_bounds() {
        let g = Group::new("f2".parse().unwrap()).unwrap();
        let x = Space::new(&g).unwrap();
        let s = GeneratingSet::standard(&g);
        let ab: Vec<Spelled> = [0, 2].iter().map(|&i| s.spelled(i)).collect();
        let c = certified_lower_bound(&x, &s, &ab, 1, &x.basepoint(), 8, 1 << 20).unwrap();
        assert_eq!(c.bound, 2.0);
        let a60 = s.spelled_pow(&g, &s.spelled(0), 60);
        let b = s.spelled(2);
        let conj = s.spelled_mul(&g, &s.spelled_mul(&g, &b, &a60), &s.spelled_inv(&g, &b));
        let c = certified_lower_bound(&x, &s, &[a60, conj], 122, &x.basepoint(), 8, 1 << 20).unwrap();
        assert_eq!(c.bound, 2f64.powf(1.0 / 122.0));
        assert!(matches!(
            certified_lower_bound(&x, &s, &[], 1, &x.basepoint(), 8, 100),
            Err(Error::Precondition(_))
        ));
        let sq = s.spelled_pow(&g, &s.spelled(0), 2);
        let r = certified_lower_bound(&x, &s, &[s.spelled(0), sq], 2, &x.basepoint(), 4, 1000);
        assert!(matches!(r, Err(Error::Audit(_))));
    }

    #[test]
    fn free_group_audit() {
        let g = Group::new("f2".parse().unwrap()).unwrap();
        let x = Space::new(&g).unwrap();
        let s = GeneratingSet::standard(&g);
        let r = lower_bound_audit(&x, &s, &ActionConstants::trees(), &LowerBoundOptions::default()).unwrap();
        assert!(r.passed);
        assert_eq!((r.g.as_str(), r.u_spelled_length, r.w_size), ("aa", 964, 4));
        assert_eq!((r.max_basis_length, r.exponent), (19282, 33762));
        assert_eq!(r.bound, 4f64.powf(1.0 / 33762.0));
    }
}
