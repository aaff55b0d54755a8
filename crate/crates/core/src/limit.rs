//! Sequences of homomorphisms out of a free group: stable kernels at a finite
//! horizon, factoring of finite relation sets, and ball comparisons with a
//! supplied limit model.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Group, GroupModel, Homomorphism};
use crate::growth::{enumerate_balls, growth_estimate, GrowthEstimate, GrowthTable};
use crate::word::{parse_template, parse_word, Expr, Letter, Word};

type RuleFn = Arc<dyn Fn(u64) -> Result<Vec<Element>> + Send + Sync>;

#[derive(Clone)]
enum Rule {
    Templates(Vec<Expr>),
    Function(RuleFn),
}

/// `n -> f_n : F_l -> target`.
#[derive(Clone)]
pub struct HomomorphismSequence {
    source: Group,
    target: Group,
    rule: Rule,
}

impl fmt::Debug for HomomorphismSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomomorphismSequence")
            .field("source", self.source.model())
            .field("target", self.target.model())
            .finish()
    }
}

impl HomomorphismSequence {
    /// One template per source generator, e.g. `["a", "A^n b a^n"]`.
    pub fn from_templates(target: &Group, templates: &[&str]) -> Result<Self> {
        if templates.is_empty() || templates.len() > 26 {
            return Err(Error::Precondition("between 1 and 26 templates are needed".into()));
        }
        let exprs = templates
            .iter()
            .map(|t| parse_template(target.symbols(), t))
            .collect::<Result<Vec<_>>>()?;
        Ok(HomomorphismSequence {
            source: Group::new(GroupModel::free(templates.len() as u8))?,
            target: target.clone(),
            rule: Rule::Templates(exprs),
        })
    }

    /// Arbitrary rule, e.g. for fixtures that are not expressible as templates.
    pub fn from_fn(
        target: &Group,
        rank: u8,
        f: impl Fn(u64) -> Result<Vec<Element>> + Send + Sync + 'static,
    ) -> Result<Self> {
        Ok(HomomorphismSequence {
            source: Group::new(GroupModel::free(rank))?,
            target: target.clone(),
            rule: Rule::Function(Arc::new(f)),
        })
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn at(&self, n: u64) -> Result<Homomorphism> {
        let images = match &self.rule {
            Rule::Templates(exprs) => exprs
                .iter()
                .map(|e| self.target.from_word(&e.expand(n as i64)))
                .collect::<Result<Vec<_>>>()?,
            Rule::Function(f) => f(n)?,
        };
        if images.len() != self.source.rank() {
            return Err(Error::Precondition(format!(
                "rule returned {} images for rank {}",
                images.len(),
                self.source.rank()
            )));
        }
        Ok(Homomorphism::new(&self.target, images))
    }
}

/// `1, 2, 3, 4, 5, 8, 9, 16, 17, ...` up to `horizon`: powers of two and their successors.
pub fn horizon_samples(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 1u64;
    while p <= horizon {
        out.push(p);
        if p + 1 <= horizon {
            out.push(p + 1);
        }
        match p.checked_mul(2) {
            Some(q) => p = q,
            None => break,
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Reduced words of length `1..=max_len` in `rank` letters, shortlex.
pub fn reduced_words(rank: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (0..rank as u8).flat_map(|i| [Letter::pos(i), Letter::neg(i)]).collect();
    let mut out = Vec::new();
    let mut level = vec![Word::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for &l in &letters {
                if w.letters().last() == Some(&l.inv()) {
                    continue;
                }
                let mut v = w.clone();
                v.0.push(l);
                next.push(v);
            }
        }
        next.sort();
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelClass {
    EventuallyTrivial,
    EventuallyNontrivial,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelRow {
    pub word: String,
    pub class: KernelClass,
    /// First sample from which the value no longer changes.
    pub stable_from: Option<u64>,
    pub flips: usize,
    pub last_flip: Option<u64>,
}

/// Classifications are claims at the sampled horizon, not proofs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableKernelReport {
    pub length_cap: usize,
    pub horizon: u64,
    pub samples: Vec<u64>,
    pub claims_at_horizon: bool,
    pub rows: Vec<KernelRow>,
    pub eventually_trivial: usize,
    pub eventually_nontrivial: usize,
    pub undecided: usize,
}

fn triviality(seq: &HomomorphismSequence, samples: &[u64], words: &[Word]) -> Result<Vec<Vec<bool>>> {
    let maps = samples.iter().map(|&n| seq.at(n)).collect::<Result<Vec<_>>>()?;
    words
        .iter()
        .map(|w| maps.iter().map(|f| Ok(f.evaluate(w)?.is_identity())).collect())
        .collect()
}

fn classify(samples: &[u64], values: &[bool]) -> KernelRow {
    let flips = values.windows(2).filter(|p| p[0] != p[1]).count();
    let last_change = values.windows(2).rposition(|p| p[0] != p[1]).map(|i| i + 1);
    let start = last_change.unwrap_or(0);
    let run = values.len() - start;
    let stable = run >= 2 && 2 * run >= values.len();
    let class = match (stable, values.last()) {
        (true, Some(true)) => KernelClass::EventuallyTrivial,
        (true, Some(false)) => KernelClass::EventuallyNontrivial,
        _ => KernelClass::Undecided,
    };
    KernelRow {
        word: String::new(),
        class,
        stable_from: stable.then(|| samples[start]),
        flips,
        last_flip: last_change.map(|i| samples[i]),
    }
}

/// Classifies every reduced word of length at most `length_cap` by its images under
/// `f_n` for `n` in [`horizon_samples`].
pub fn stable_kernel_scan(seq: &HomomorphismSequence, length_cap: usize, horizon: u64) -> Result<StableKernelReport> {
    if length_cap == 0 || horizon == 0 {
        return Err(Error::Precondition("length cap and horizon must be positive".into()));
    }
    let samples = horizon_samples(horizon);
    let words = reduced_words(seq.source.rank(), length_cap);
    let values = triviality(seq, &samples, &words)?;
    let rows: Vec<KernelRow> = words
        .iter()
        .zip(&values)
        .map(|(w, v)| KernelRow {
            word: seq.source.render(w),
            ..classify(&samples, v)
        })
        .collect();
    let count = |c: KernelClass| rows.iter().filter(|r| r.class == c).count();
    Ok(StableKernelReport {
        length_cap,
        horizon,
        claims_at_horizon: true,
        eventually_trivial: count(KernelClass::EventuallyTrivial),
        eventually_nontrivial: count(KernelClass::EventuallyNontrivial),
        undecided: count(KernelClass::Undecided),
        samples,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoringReport {
    pub horizon: u64,
    pub samples: Vec<u64>,
    pub relations: Vec<String>,
    /// Least sample from which every relation dies at every later sample.
    pub n0: Option<u64>,
}

/// Relations are words in the source letters, e.g. `"abAB"`.
pub fn factoring_check(seq: &HomomorphismSequence, relations: &[&str], horizon: u64) -> Result<FactoringReport> {
    let samples = horizon_samples(horizon.max(1));
    let words = relations
        .iter()
        .map(|r| parse_word(seq.source.symbols(), r))
        .collect::<Result<Vec<_>>>()?;
    let values = triviality(seq, &samples, &words)?;
    let all_dead: Vec<bool> = (0..samples.len()).map(|i| values.iter().all(|v| v[i])).collect();
    let n0 = match all_dead.iter().rposition(|&d| !d) {
        None => samples.first().copied(),
        Some(i) if i + 1 < samples.len() => Some(samples[i + 1]),
        Some(_) => None,
    };
    Ok(FactoringReport {
        horizon,
        relations: words.iter().map(|w| seq.source.render(w)).collect(),
        samples,
        n0,
    })
}

/// `β_k(target, h(S)) <= β_k(source, S)` termwise, with both columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallComparison {
    pub source: Vec<u64>,
    pub image: Vec<u64>,
    pub holds: bool,
    pub truncated: bool,
}

pub fn compare_balls(source: &[u64], image: &[u64], truncated: bool) -> BallComparison {
    let n = source.len().min(image.len());
    BallComparison {
        holds: (0..n).all(|k| image[k] <= source[k]),
        source: source[..n].to_vec(),
        image: image[..n].to_vec(),
        truncated,
    }
}

/// Balls of `h(S)` against balls of `S` for a homomorphism out of `source`.
pub fn image_ball_comparison(
    source: &Group,
    s: &GeneratingSet,
    h: &Homomorphism,
    depth: usize,
    cap: usize,
    shards: usize,
) -> Result<BallComparison> {
    let target = &h.target;
    let images: Vec<Element> = s.elements().iter().map(|e| h.apply(source, e)).collect();
    let src = enumerate_balls(source, s, depth, cap, shards);
    let img = match GeneratingSet::new(target, images) {
        Ok(t) => enumerate_balls(target, &t, depth, cap, shards).balls,
        // all of S maps to the identity
        Err(_) => vec![1; depth + 1],
    };
    Ok(compare_balls(&src.balls, &img, src.truncated.is_some()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub n: u64,
    pub balls: Vec<u64>,
    pub estimate: GrowthEstimate,
    /// `β_k(target, f_n(S)) <= β_k(limit, η(S))` for every computed `k`.
    pub below_limit: bool,
    pub strict_somewhere: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub depth: usize,
    pub limit_model: String,
    pub limit_balls: Vec<u64>,
    pub limit_estimate: GrowthEstimate,
    pub rows: Vec<ContinuityRow>,
    pub inequality_holds: bool,
}

/// Growth brackets of `f_n(S)`, `S` the standard basis of the source, against the
/// supplied limit model with `η(S)`.
pub fn growth_continuity_probe(
    seq: &HomomorphismSequence,
    limit: Option<(&Group, &GeneratingSet)>,
    depth: usize,
    horizon: u64,
    cap: usize,
    shards: usize,
) -> Result<ContinuityReport> {
    let (lg, ls) = limit.ok_or_else(|| Error::Precondition("a limit model with eta(S) is required".into()))?;
    let lt = enumerate_balls(lg, ls, depth, cap, shards);
    let mut rows = Vec::new();
    for n in horizon_samples(horizon) {
        let f = seq.at(n)?;
        let t = match GeneratingSet::new(&seq.target, f.images.clone()) {
            Ok(t) => enumerate_balls(&seq.target, &t, depth, cap, shards),
            Err(_) => GrowthTable {
                spheres: (0..=depth).map(|k| (k == 0) as u64).collect(),
                balls: vec![1; depth + 1],
                truncated: None,
            },
        };
        let k = t.balls.len().min(lt.balls.len());
        rows.push(ContinuityRow {
            n,
            below_limit: (0..k).all(|i| t.balls[i] <= lt.balls[i]),
            strict_somewhere: (0..k).any(|i| t.balls[i] < lt.balls[i]),
            estimate: growth_estimate(&t, None),
            balls: t.balls,
        });
    }
    Ok(ContinuityReport {
        depth,
        limit_model: lg.model().to_string(),
        limit_estimate: growth_estimate(&lt, None),
        limit_balls: lt.balls,
        inequality_holds: rows.iter().all(|r| r.below_limit),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples() {
        assert_eq!(horizon_samples(16), vec![1, 2, 3, 4, 5, 8, 9, 16]);
        assert_eq!(reduced_words(2, 2).len(), 4 + 12);
    }

    #[test]
    fn abelian_target_kills_commutators() {
        let z = Group::new("z".parse().unwrap()).unwrap();
        let seq = HomomorphismSequence::from_templates(&z, &["a", "a^n"]).unwrap();
        let r = stable_kernel_scan(&seq, 4, 32).unwrap();
        let row = r.rows.iter().find(|r| r.word == "abAB").unwrap();
        assert_eq!(row.class, KernelClass::EventuallyTrivial);
        assert_eq!(factoring_check(&seq, &["abAB"], 32).unwrap().n0, Some(1));
        assert_eq!(factoring_check(&seq, &[], 32).unwrap().n0, Some(1));
    }

    #[test]
    fn injective_sequence() {
        let f2 = Group::new("f2".parse().unwrap()).unwrap();
        let seq = HomomorphismSequence::from_templates(&f2, &["a", "a^n b A^n"]).unwrap();
        let r = stable_kernel_scan(&seq, 4, 32).unwrap();
        assert_eq!(r.eventually_nontrivial, r.rows.len());
        assert_eq!(factoring_check(&seq, &["babAA"], 32).unwrap().n0, None);
    }

    #[test]
    fn parity_fixture_is_undecided() {
        let f2 = Group::new("f2".parse().unwrap()).unwrap();
        let g = f2.clone();
        let seq = HomomorphismSequence::from_fn(&f2, 2, move |n| {
            let a = if n % 2 == 0 { g.identity() } else { g.generator(0) };
            Ok(vec![a, g.generator(1)])
        })
        .unwrap();
        let r = stable_kernel_scan(&seq, 1, 64).unwrap();
        let row = r.rows.iter().find(|r| r.word == "a").unwrap();
        assert_eq!(row.class, KernelClass::Undecided);
        assert!(row.flips >= 8);
    }

    #[test]
    fn continuity_against_limit() {
        let f2 = Group::new("f2".parse().unwrap()).unwrap();
        let s = GeneratingSet::standard(&f2);
        let seq = HomomorphismSequence::from_templates(&f2, &["a", "a^n b A^n"]).unwrap();
        let r = growth_continuity_probe(&seq, Some((&f2, &s)), 6, 8, 1 << 20, 1).unwrap();
        assert!(r.inequality_holds);
        let fp = Group::new("fp:2,3".parse().unwrap()).unwrap();
        let quotient = HomomorphismSequence::from_templates(&fp, &["s", "t"]).unwrap();
        let r = growth_continuity_probe(&quotient, Some((&f2, &s)), 6, 4, 1 << 20, 1).unwrap();
        assert!(r.inequality_holds && r.rows.iter().all(|row| row.strict_somewhere));
        assert!(growth_continuity_probe(&seq, None, 4, 4, 100, 1).is_err());
    }
}
