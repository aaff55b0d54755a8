//! Ball enumeration, growth-rate estimates and cone-type automata.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Group};

type Key = Box<[u8]>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub radius: usize,
    pub elements: usize,
    pub cap: usize,
}

/// Sphere and ball sizes `σ_n`, `β_n` for `n = 0..=radius`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub spheres: Vec<u64>,
    pub balls: Vec<u64>,
    pub truncated: Option<Truncation>,
}

impl GrowthTable {
    pub fn radius(&self) -> usize {
        self.spheres.len() - 1
    }

    pub fn beta(&self, n: usize) -> Option<u64> {
        self.balls.get(n).copied()
    }
}

fn expand_chunk(group: &Group, gens: &[Element], chunk: &[Key], prev: &HashSet<Key>, cur: &HashSet<Key>) -> HashSet<Key> {
    let mut out = HashSet::new();
    for k in chunk {
        let x = group.decode(k);
        for s in gens {
            let y = group.encode(&group.mul(&x, s));
            if !prev.contains(&y) && !cur.contains(&y) {
                out.insert(y);
            }
        }
    }
    out
}

/// Breadth-first sphere enumeration; `visit` sees each sphere as it is completed.
/// Stops early when the ball would exceed `cap` elements.
pub fn bfs_spheres(
    group: &Group,
    s: &GeneratingSet,
    n_max: usize,
    cap: usize,
    shards: usize,
    mut visit: impl FnMut(usize, &HashSet<Key>),
) -> GrowthTable {
    let gens = s.elements();
    let shards = shards.max(1);
    let mut prev: HashSet<Key> = HashSet::new();
    let mut cur: HashSet<Key> = HashSet::new();
    cur.insert(group.encode(&Element::identity()));
    visit(0, &cur);
    let mut spheres = vec![1u64];
    let mut balls = vec![1u64];
    let mut truncated = None;
    for n in 1..=n_max {
        let frontier: Vec<&Key> = cur.iter().collect();
        let next: HashSet<Key> = if shards == 1 || frontier.len() < 64 {
            let owned: Vec<Key> = frontier.iter().map(|k| (*k).clone()).collect();
            expand_chunk(group, gens, &owned, &prev, &cur)
        } else {
            let owned: Vec<Key> = frontier.iter().map(|k| (*k).clone()).collect();
            let size = owned.len().div_ceil(shards);
            let parts: Vec<HashSet<Key>> = std::thread::scope(|scope| {
                let handles: Vec<_> = owned
                    .chunks(size)
                    .map(|chunk| {
                        let (prev, cur) = (&prev, &cur);
                        scope.spawn(move || expand_chunk(group, gens, chunk, prev, cur))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            });
            let mut merged = HashSet::new();
            for p in parts {
                merged.extend(p);
            }
            merged
        };
        let ball = balls[n - 1] + next.len() as u64;
        if ball as usize > cap {
            truncated = Some(Truncation {
                radius: n,
                elements: ball as usize,
                cap,
            });
            break;
        }
        visit(n, &next);
        spheres.push(next.len() as u64);
        balls.push(ball);
        prev = std::mem::replace(&mut cur, next);
    }
    GrowthTable {
        spheres,
        balls,
        truncated,
    }
}

pub fn enumerate_balls(group: &Group, s: &GeneratingSet, n_max: usize, cap: usize, shards: usize) -> GrowthTable {
    bfs_spheres(group, s, n_max, cap, shards, |_, _| {})
}

/// Spheres of the ball of radius `radius`, each sorted shortlex.
pub fn ball_spheres(group: &Group, s: &GeneratingSet, radius: usize, cap: usize) -> Result<Vec<Vec<Element>>> {
    let mut out = Vec::new();
    let table = bfs_spheres(group, s, radius, cap, 1, |_, sphere| {
        let mut v: Vec<(crate::Word, Element)> = sphere
            .iter()
            .map(|k| {
                let e = group.decode(k);
                (group.to_word(&e), e)
            })
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        out.push(v.into_iter().map(|x| x.1).collect());
    });
    match table.truncated {
        Some(t) => Err(Error::Truncated {
            radius: t.radius,
            elements: t.elements,
            cap,
        }),
        None => Ok(out),
    }
}

/// Elements of the ball of radius `radius`, identity first, then shortlex within spheres.
pub fn ball(group: &Group, s: &GeneratingSet, radius: usize, cap: usize) -> Result<Vec<Element>> {
    Ok(ball_spheres(group, s, radius, cap)?.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    pub n_max: usize,
    pub point_estimate: f64,
    /// `min_n β_n^(1/n)`, an upper bound by sub-multiplicativity.
    pub certified_upper: f64,
    /// `(n, β_n)` realising the upper bound.
    pub upper_witness: (usize, u64),
    pub certified_lower: Option<f64>,
    /// Sphere sizes stopped growing: the growth rate is 1.
    pub degenerate: bool,
}

pub fn growth_estimate(table: &GrowthTable, certified_lower: Option<f64>) -> GrowthEstimate {
    let n = table.radius();
    let mut upper = f64::INFINITY;
    let mut witness = (0, 1);
    for k in 1..=n {
        let v = (table.balls[k] as f64).powf(1.0 / k as f64);
        if v < upper {
            upper = v;
            witness = (k, table.balls[k]);
        }
    }
    let sp = &table.spheres;
    let degenerate = n >= 1 && (sp[n] == 0 || (n >= 2 && sp[n] == sp[n - 1]));
    let point = if degenerate {
        1.0
    } else if n >= 2 && sp[n - 2] > 0 {
        (sp[n] as f64 / sp[n - 2] as f64).sqrt()
    } else if n >= 1 {
        sp[n] as f64
    } else {
        1.0
    };
    let point = point.min(upper).max(1.0);
    GrowthEstimate {
        n_max: n,
        point_estimate: point,
        certified_upper: upper.max(1.0),
        upper_witness: witness,
        certified_lower,
        degenerate,
    }
}

/// Finite automaton whose paths from `start` are in bijection with group elements,
/// built from cone types of a shortlex breadth-first spanning tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeAutomaton {
    pub start: usize,
    /// `transitions[state]` lists `(generator index, target state)`.
    pub transitions: Vec<Vec<(u32, usize)>>,
    pub radius: usize,
    pub signature_depth: usize,
}

pub fn cone_automaton(group: &Group, s: &GeneratingSet, cutoff_radius: usize, cap: usize) -> Result<ConeAutomaton> {
    if cutoff_radius < 2 {
        return Err(Error::Precondition("cutoff radius must be at least 2".into()));
    }
    let depth = cutoff_radius / 2;
    let scan = cutoff_radius - depth - 1;
    // shortlex breadth-first tree
    let mut index: HashMap<Element, usize> = HashMap::new();
    let mut level: Vec<usize> = vec![0];
    let mut children: Vec<Vec<(u32, usize)>> = vec![Vec::new()];
    let mut elements = vec![Element::identity()];
    index.insert(Element::identity(), 0);
    let mut frontier = vec![0usize];
    for r in 1..=cutoff_radius {
        let mut next = Vec::new();
        for &x in &frontier {
            for (gi, g) in s.elements().iter().enumerate() {
                let y = group.mul(&elements[x], g);
                if index.contains_key(&y) {
                    continue;
                }
                let id = elements.len();
                index.insert(y.clone(), id);
                elements.push(y);
                level.push(r);
                children.push(Vec::new());
                children[x].push((gi as u32, id));
                next.push(id);
            }
        }
        if elements.len() > cap {
            return Err(Error::Truncated {
                radius: r,
                elements: elements.len(),
                cap,
            });
        }
        let mut keyed: Vec<(crate::Word, usize)> = next.iter().map(|&i| (group.to_word(&elements[i]), i)).collect();
        keyed.sort();
        frontier = keyed.into_iter().map(|k| k.1).collect();
    }
    // signatures, interned bottom-up
    let n = elements.len();
    let mut sig = vec![0usize; n];
    for d in 1..=depth {
        let mut table: HashMap<Vec<(u32, usize)>, usize> = HashMap::new();
        let mut next_sig = vec![usize::MAX; n];
        for x in 0..n {
            if level[x] + d > cutoff_radius {
                continue;
            }
            let key: Vec<(u32, usize)> = children[x].iter().map(|&(g, y)| (g, sig[y])).collect();
            let l = table.len();
            next_sig[x] = *table.entry(key).or_insert(l);
        }
        sig = next_sig;
    }
    let mut state_of: HashMap<usize, usize> = HashMap::new();
    let mut transitions: Vec<Vec<(u32, usize)>> = Vec::new();
    let mut order: Vec<usize> = (0..n).filter(|&x| level[x] <= scan).collect();
    order.sort_by_key(|&x| level[x]);
    for &x in &order {
        let l = state_of.len();
        state_of.entry(sig[x]).or_insert(l);
    }
    transitions.resize(state_of.len(), Vec::new());
    let mut filled = vec![false; state_of.len()];
    for &x in &order {
        let st = state_of[&sig[x]];
        let mut row = Vec::new();
        for &(g, y) in &children[x] {
            let Some(&t) = state_of.get(&sig[y]) else {
                return Err(Error::NonStabilization(format!(
                    "cone type at radius {} not seen within radius {scan}; increase the cutoff",
                    level[y]
                )));
            };
            row.push((g, t));
        }
        if filled[st] {
            if transitions[st] != row {
                return Err(Error::NonStabilization(format!(
                    "signature depth {depth} does not determine cone types; increase the cutoff"
                )));
            }
        } else {
            transitions[st] = row;
            filled[st] = true;
        }
    }
    Ok(ConeAutomaton {
        start: state_of[&sig[0]],
        transitions,
        radius: cutoff_radius,
        signature_depth: depth,
    })
}

impl ConeAutomaton {
    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    /// Number of accepted paths of each length `0..=n`.
    pub fn path_counts(&self, n: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.state_count()];
        v[self.start] = 1;
        let mut out = vec![1];
        for _ in 0..n {
            let mut w = vec![0u64; v.len()];
            for (st, row) in self.transitions.iter().enumerate() {
                if v[st] == 0 {
                    continue;
                }
                for &(_, t) in row {
                    w[t] += v[st];
                }
            }
            out.push(w.iter().sum());
            v = w;
        }
        out
    }

    /// Perron root of the transition matrix, by power iteration on `A + I`.
    pub fn spectral_radius(&self) -> f64 {
        let n = self.state_count();
        let mut v = vec![1.0f64; n];
        let mut estimate = 0.0f64;
        for _ in 0..1_000_000 {
            let mut w = v.clone();
            for (st, row) in self.transitions.iter().enumerate() {
                for &(_, t) in row {
                    w[t] += v[st];
                }
            }
            let norm: f64 = w.iter().cloned().fold(0.0, f64::max);
            let prev_norm: f64 = v.iter().cloned().fold(0.0, f64::max);
            let ratio = norm / prev_norm;
            for x in &mut w {
                *x /= norm;
            }
            v = w;
            if (ratio - estimate).abs() <= 1e-13 * ratio {
                return ratio - 1.0;
            }
            estimate = ratio;
        }
        estimate - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std(m: &str) -> (Group, GeneratingSet) {
        let g = Group::new(m.parse().unwrap()).unwrap();
        let s = GeneratingSet::standard(&g);
        (g, s)
    }

    #[test]
    fn free_group_balls() {
        let (g, s) = std("f2");
        let t = enumerate_balls(&g, &s, 6, 1 << 20, 1);
        let closed: Vec<u64> = (0..=6).map(|n| 2 * 3u64.pow(n) - 1).collect();
        assert_eq!(t.balls, closed);
        assert_eq!(t, enumerate_balls(&g, &s, 6, 1 << 20, 4));
    }

    #[test]
    fn truncation_marker() {
        let (g, s) = std("f2");
        let t = enumerate_balls(&g, &s, 10, 100, 1);
        assert_eq!(t.radius(), 3);
        assert_eq!(t.truncated.as_ref().unwrap().radius, 4);
    }

    #[test]
    fn estimates_for_z() {
        let (g, s) = std("z");
        let t = enumerate_balls(&g, &s, 8, 1000, 1);
        let e = growth_estimate(&t, None);
        assert!(e.degenerate);
        assert_eq!(e.point_estimate, 1.0);
    }

    #[test]
    fn automata() {
        let (g, s) = std("f2");
        let a = cone_automaton(&g, &s, 4, 1 << 16).unwrap();
        assert_eq!(a.state_count(), 5);
        assert!((a.spectral_radius() - 3.0).abs() < 1e-9);
        let (g, s) = std("fp:2,3");
        let a = cone_automaton(&g, &s, 6, 1 << 16).unwrap();
        assert!((a.spectral_radius() - 2f64.sqrt()).abs() < 1e-9);
        let t = enumerate_balls(&g, &s, 12, 1 << 20, 1);
        assert_eq!(a.path_counts(12), t.spheres);
        let (g, s) = std("z");
        let a = cone_automaton(&g, &s, 4, 1 << 10).unwrap();
        assert!((a.spectral_radius() - 1.0).abs() < 1e-9);
    }
}
