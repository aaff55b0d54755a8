//! Certificates that a finite family freely generates a free group.
//!
//! Two independent routes:
//! * [`relation_search`] walks every reduced word up to a depth and checks that
//!   none evaluates to the identity;
//! * [`junction_certificate`] checks a local condition on Gromov products at a
//!   point which, on a tree, forces `d(x, w x) > 0` for every reduced word `w`.

use serde::{Deserialize, Serialize};

use crate::group::{Element, Group, Syllable};
use crate::space::{Point, Space};

/// Letter `2i` is `basis[i]`, letter `2i + 1` its inverse.
fn letters(group: &Group, basis: &[Element]) -> Vec<Element> {
    basis.iter().flat_map(|b| [b.clone(), group.inv(b)]).collect()
}

/// Number of non-empty reduced words of length at most `depth` on `rank` letters.
pub fn reduced_word_count(rank: usize, depth: usize) -> u64 {
    let r = 2 * rank as u64;
    let mut level = r;
    let mut total = 0u64;
    for _ in 0..depth {
        total = total.saturating_add(level);
        level = level.saturating_mul(r.saturating_sub(1));
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSearch {
    pub requested_depth: usize,
    /// Depth actually exhausted, limited by the node budget.
    pub depth: usize,
    pub nodes: u64,
    /// A reduced word `(basis index, inverse)` evaluating to the identity.
    pub relation: Option<Vec<(usize, bool)>>,
}

#[derive(Clone)]
struct Frame {
    letter: usize,
    lo: usize,
    hi: usize,
    tail: Option<Syllable>,
}

struct Undo {
    keep: usize,
    saved: Vec<Frame>,
}

struct Rope<'a> {
    group: &'a Group,
    arrays: Vec<&'a [Syllable]>,
    stack: Vec<Frame>,
}

impl Rope<'_> {
    fn last(&self, f: &Frame) -> Syllable {
        f.tail.clone().unwrap_or_else(|| self.arrays[f.letter][f.hi - 1].clone())
    }

    fn append(&mut self, letter: usize) -> Undo {
        let g = self.arrays[letter];
        let mut keep = self.stack.len();
        let mut saved = Vec::new();
        let mut i = 0;
        while i < g.len() {
            let Some(top) = self.stack.last() else { break };
            let last = self.last(top);
            if last.factor() != g[i].factor() {
                break;
            }
            let mut top = self.stack.pop().expect("non-empty");
            if self.stack.len() < keep {
                saved.push(top.clone());
                keep = self.stack.len();
            }
            let merged = self.group.merge(last, &g[i]).expect("exponent overflow");
            i += 1;
            match merged {
                None => {
                    top.tail = None;
                    top.hi -= 1;
                    if top.lo < top.hi {
                        self.stack.push(top);
                    }
                }
                Some(s) => {
                    top.tail = Some(s);
                    self.stack.push(top);
                    break;
                }
            }
        }
        if i < g.len() {
            self.stack.push(Frame {
                letter,
                lo: i,
                hi: g.len(),
                tail: None,
            });
        }
        Undo { keep, saved }
    }

    fn restore(&mut self, undo: Undo) {
        self.stack.truncate(undo.keep);
        self.stack.extend(undo.saved.into_iter().rev());
    }
}

/// Exhaustive search for a relation among reduced words of length at most
/// `depth`, lowered so that at most `node_budget` words are visited.
pub fn relation_search(group: &Group, basis: &[Element], depth: usize, node_budget: u64) -> RelationSearch {
    let mut d = depth;
    while d > 1 && reduced_word_count(basis.len(), d) > node_budget {
        d -= 1;
    }
    let letters = letters(group, basis);
    let mut rope = Rope {
        group,
        arrays: letters.iter().map(|e| e.syllables()).collect(),
        stack: Vec::new(),
    };
    let mut word = Vec::new();
    let mut nodes = 0u64;
    let relation = dfs(&mut rope, &mut word, None, d, &mut nodes);
    RelationSearch {
        requested_depth: depth,
        depth: d,
        nodes,
        relation: relation.map(|w| w.iter().map(|&l| (l / 2, l % 2 == 1)).collect()),
    }
}

fn dfs(rope: &mut Rope, word: &mut Vec<usize>, last: Option<usize>, left: usize, nodes: &mut u64) -> Option<Vec<usize>> {
    for l in 0..rope.arrays.len() {
        if last == Some(l ^ 1) {
            continue;
        }
        *nodes += 1;
        word.push(l);
        let undo = rope.append(l);
        if rope.stack.is_empty() {
            return Some(word.clone());
        }
        if left > 1 {
            if let Some(w) = dfs(rope, word, Some(l), left - 1, nodes) {
                return Some(w);
            }
        }
        rope.restore(undo);
        word.pop();
    }
    None
}

/// Visits every non-empty reduced word of length at most `depth` with its value.
pub fn for_each_reduced_word(
    group: &Group,
    basis: &[Element],
    depth: usize,
    mut visit: impl FnMut(&[usize], &Element) -> bool,
) -> u64 {
    let letters = letters(group, basis);
    let mut values = vec![Element::identity()];
    let mut word: Vec<usize> = Vec::new();
    let mut nodes = 0u64;
    // iterative DFS over (letter choice) with explicit stack
    let mut next: Vec<usize> = vec![0];
    while let Some(choice) = next.last_mut() {
        let l = *choice;
        if l >= letters.len() {
            next.pop();
            if word.pop().is_some() {
                values.pop();
            }
            continue;
        }
        *choice += 1;
        if word.last().map(|&p| p ^ 1) == Some(l) {
            continue;
        }
        let v = group.mul(values.last().expect("root value"), &letters[l]);
        word.push(l);
        nodes += 1;
        if !visit(&word, &v) {
            return nodes;
        }
        values.push(v);
        if word.len() < depth {
            next.push(0);
        } else {
            word.pop();
            values.pop();
        }
    }
    nodes
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JunctionCertificate {
    pub passed: bool,
    /// Displacements `d(x, b x)` of the basis elements.
    pub lengths: Vec<u64>,
    /// Minimum of `|σ| - c(ρ, σ) - c(σ, τ)` over reduced triples.
    pub min_slack: i64,
    /// Triple of letters realising the minimum.
    pub worst: Option<(usize, usize, usize)>,
}

/// With `c(σ, τ) = (|σ| + |τ| - |στ|) / 2` measured at `x`, checks
/// `c(ρ, σ) + c(σ, τ) < |σ|` for all letters with `ρσ`, `στ` reduced.
pub fn junction_certificate(space: &Space, basis: &[Element], x: &Point) -> JunctionCertificate {
    let group = space.group();
    let letters = letters(group, basis);
    let n = letters.len();
    let len: Vec<i64> = letters.iter().map(|g| space.displacement(g, x) as i64).collect();
    let mut c = vec![vec![0i64; n]; n];
    for a in 0..n {
        for b in 0..n {
            if b == a ^ 1 {
                continue;
            }
            // d(x, σ τ x) = d(σ^-1 x, τ x)
            let abx = space.act(&letters[a], &space.act(&letters[b], x));
            let d = space.dist(x, &abx) as i64;
            c[a][b] = (len[a] + len[b] - d) / 2;
        }
    }
    let mut min_slack = i64::MAX;
    let mut worst = None;
    for s in 0..n {
        for r in 0..n {
            if r == s ^ 1 {
                continue;
            }
            for t in 0..n {
                if t == s ^ 1 {
                    continue;
                }
                let slack = len[s] - c[r][s] - c[s][t];
                if slack < min_slack {
                    min_slack = slack;
                    worst = Some((r, s, t));
                }
            }
        }
    }
    JunctionCertificate {
        passed: n > 0 && min_slack > 0,
        lengths: len.iter().step_by(2).map(|&l| l as u64).collect(),
        min_slack,
        worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupModel;

    #[test]
    fn counts() {
        assert_eq!(reduced_word_count(2, 8), 4 * (3u64.pow(8) - 1) / 2);
        assert_eq!(reduced_word_count(2, 8), 13120);
    }

    #[test]
    fn free_basis_and_relations() {
        let g = Group::new(GroupModel::free(2)).unwrap();
        let x = Space::new(&g).unwrap();
        let basis = vec![g.parse("a").unwrap(), g.parse("b").unwrap()];
        let r = relation_search(&g, &basis, 8, 1 << 20);
        assert!(r.relation.is_none());
        assert_eq!(r.nodes, 13120);
        assert!(junction_certificate(&x, &basis, &x.basepoint()).passed);
        let commuting = vec![g.parse("ab").unwrap(), g.parse("abab").unwrap()];
        let r = relation_search(&g, &commuting, 6, 1 << 20);
        assert!(r.relation.is_some());
        assert!(!junction_certificate(&x, &commuting, &x.basepoint()).passed);
    }

    #[test]
    fn torsion_is_a_relation() {
        let g = Group::new(GroupModel::free_product(&[2, 3])).unwrap();
        let r = relation_search(&g, &[g.parse("s").unwrap()], 4, 100);
        assert_eq!(r.relation, Some(vec![(0, false), (0, false)]));
        let basis = vec![g.parse("(st)^3").unwrap(), g.parse("(ts)^3").unwrap()];
        let r = relation_search(&g, &basis, 6, 1 << 20);
        assert!(r.relation.is_none());
        let x = Space::new(&g).unwrap();
        assert!(junction_certificate(&x, &basis, &x.basepoint()).passed);
    }

    #[test]
    fn budget_limits_depth() {
        let g = Group::new(GroupModel::free(2)).unwrap();
        let basis = vec![g.parse("a").unwrap(), g.parse("b").unwrap()];
        let r = relation_search(&g, &basis, 10, 10_000);
        assert_eq!(r.depth, 7);
    }

    #[test]
    fn materialised_walk_matches_count() {
        let g = Group::new(GroupModel::free(2)).unwrap();
        let basis = vec![g.parse("a").unwrap(), g.parse("b").unwrap()];
        let mut seen = std::collections::HashSet::new();
        let n = for_each_reduced_word(&g, &basis, 5, |_, v| {
            seen.insert(v.clone());
            true
        });
        assert_eq!(n, reduced_word_count(2, 5));
        assert_eq!(seen.len() as u64, n);
    }
}
