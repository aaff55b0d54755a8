//! Group models with exact normal forms.
//!
//! Every model is a free product of factors: infinite or finite cyclic groups
//! and at most one Baumslag–Solitar group. An [`Element`] is its reduced
//! sequence of syllables, so equality of elements is equality of values.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bs::{Bs, BsWord};
use crate::error::{Error, Result};
use crate::word::{parse_word, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupModel {
    Free { rank: u8 },
    FreeProduct { orders: Vec<Order> },
    /// BS(p, q) * F_r, generators `a, t` then `z, y, x, ...`.
    BaumslagSolitar { p: u32, q: u32, free_rank: u8 },
}

impl GroupModel {
    pub fn free(rank: u8) -> Self {
        GroupModel::Free { rank }
    }

    pub fn free_product(orders: &[u32]) -> Self {
        GroupModel::FreeProduct {
            orders: orders
                .iter()
                .map(|&n| if n == 0 { Order::Infinite } else { Order::Finite(n) })
                .collect(),
        }
    }

    pub fn bs(p: u32, q: u32, free_rank: u8) -> Self {
        GroupModel::BaumslagSolitar { p, q, free_rank }
    }
}

impl FromStr for GroupModel {
    type Err = Error;

    /// Accepts `f2`, `free:3`, `z`, `fp:2,3`, `fp:2,inf`, `bs:2,3,1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = |m: &str| Error::InvalidModel(format!("'{s}': {m}"));
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad("expected an integer"));
        if s == "z" {
            return Ok(GroupModel::free(1));
        }
        if let Some(r) = s.strip_prefix("free:").or_else(|| s.strip_prefix('f').filter(|r| !r.starts_with('p'))) {
            let rank = num(r)?;
            return Ok(GroupModel::free(u8::try_from(rank).map_err(|_| bad("rank too large"))?));
        }
        if let Some(r) = s.strip_prefix("fp:") {
            let orders = r
                .split(',')
                .map(|t| match t.trim() {
                    "inf" | "z" | "0" => Ok(Order::Infinite),
                    t => num(t).map(Order::Finite),
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(GroupModel::FreeProduct { orders });
        }
        if let Some(r) = s.strip_prefix("bs:") {
            let parts: Vec<u32> = r.split(',').map(num).collect::<Result<_>>()?;
            return match parts[..] {
                [p, q] => Ok(GroupModel::bs(p, q, 0)),
                [p, q, f] => Ok(GroupModel::bs(p, q, f as u8)),
                _ => Err(bad("expected bs:p,q[,free_rank]")),
            };
        }
        Err(bad("unknown model kind"))
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupModel::Free { rank } => write!(f, "f{rank}"),
            GroupModel::FreeProduct { orders } => {
                let o: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
                write!(f, "fp:{}", o.join(","))
            }
            GroupModel::BaumslagSolitar { p, q, free_rank } => write!(f, "bs:{p},{q},{free_rank}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Factor {
    Cyclic(Option<i64>),
    Bs(Bs),
}

/// One syllable of the free-product normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Syllable {
    Cyclic { factor: u8, exp: i64 },
    Bs(Box<BsWord>),
}

impl Syllable {
    #[inline]
    pub fn factor(&self) -> u8 {
        match self {
            Syllable::Cyclic { factor, .. } => *factor,
            Syllable::Bs(_) => 0,
        }
    }
}

/// Group element in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    syl: Vec<Syllable>,
}

impl Element {
    pub fn identity() -> Self {
        Element { syl: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.syl.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syl
    }

    pub fn syllable_count(&self) -> usize {
        self.syl.len()
    }

    pub(crate) fn from_syllables(syl: Vec<Syllable>) -> Self {
        Element { syl }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    model: GroupModel,
    factors: Vec<Factor>,
    gens: Vec<(u8, u8)>,
    factor_gen: Vec<u8>,
    symbols: Vec<char>,
}

const PRODUCT_SYMBOLS: &str = "stuvwxyz";
const BS_EXTRA_SYMBOLS: &str = "zyxwvu";

impl Group {
    pub fn new(model: GroupModel) -> Result<Self> {
        let mut factors = Vec::new();
        let mut gens = Vec::new();
        let symbols: Vec<char>;
        match &model {
            GroupModel::Free { rank } => {
                if *rank == 0 || *rank > 26 {
                    return Err(Error::InvalidModel(format!("free rank {rank} not in 1..=26")));
                }
                for i in 0..*rank {
                    factors.push(Factor::Cyclic(None));
                    gens.push((i, 0));
                }
                symbols = (0..*rank).map(|i| (b'a' + i) as char).collect();
            }
            GroupModel::FreeProduct { orders } => {
                if orders.len() < 2 || orders.len() > PRODUCT_SYMBOLS.len() {
                    return Err(Error::InvalidModel(format!(
                        "free product needs 2..={} factors",
                        PRODUCT_SYMBOLS.len()
                    )));
                }
                for (i, o) in orders.iter().enumerate() {
                    let n = match o {
                        Order::Finite(n) if *n < 2 => {
                            return Err(Error::InvalidModel(format!("factor order {n} < 2")))
                        }
                        Order::Finite(n) => Some(*n as i64),
                        Order::Infinite => None,
                    };
                    factors.push(Factor::Cyclic(n));
                    gens.push((i as u8, 0));
                }
                symbols = PRODUCT_SYMBOLS.chars().take(orders.len()).collect();
            }
            GroupModel::BaumslagSolitar { p, q, free_rank } => {
                if *p == 0 || *q == 0 {
                    return Err(Error::InvalidModel("BS parameters must be non-zero".into()));
                }
                if *free_rank as usize > BS_EXTRA_SYMBOLS.len() {
                    return Err(Error::InvalidModel("too many free factors".into()));
                }
                factors.push(Factor::Bs(Bs {
                    p: *p as i64,
                    q: *q as i64,
                }));
                gens.push((0, 0));
                gens.push((0, 1));
                for j in 0..*free_rank {
                    factors.push(Factor::Cyclic(None));
                    gens.push((j + 1, 0));
                }
                symbols = "at"
                    .chars()
                    .chain(BS_EXTRA_SYMBOLS.chars().take(*free_rank as usize))
                    .collect();
            }
        }
        let mut factor_gen = vec![0; factors.len()];
        for (g, &(f, local)) in gens.iter().enumerate() {
            if local == 0 {
                factor_gen[f as usize] = g as u8;
            }
        }
        Ok(Group {
            model,
            factors,
            gens,
            factor_gen,
            symbols,
        })
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// Order of factor `i`, `None` for infinite groups.
    pub fn factor_order(&self, i: usize) -> Option<u64> {
        match self.factors[i] {
            Factor::Cyclic(n) => n.map(|n| n as u64),
            Factor::Bs(_) => None,
        }
    }

    pub fn identity(&self) -> Element {
        Element::identity()
    }

    pub fn letter(&self, l: Letter) -> Result<Element> {
        let &(f, local) = self
            .gens
            .get(l.index as usize)
            .ok_or(Error::LetterOutOfRange(l.index))?;
        let sign = if l.inverse { -1 } else { 1 };
        let syl = match self.factors[f as usize] {
            Factor::Cyclic(n) => Syllable::Cyclic {
                factor: f,
                exp: reduce_exp(sign, n),
            },
            Factor::Bs(bs) => {
                let mut w = BsWord::default();
                if local == 0 {
                    bs.mul_a(&mut w, sign)?;
                } else {
                    bs.mul_t(&mut w, sign as i8)?;
                }
                Syllable::Bs(Box::new(w))
            }
        };
        Ok(Element { syl: vec![syl] })
    }

    /// Standard generator `i`.
    pub fn generator(&self, i: usize) -> Element {
        self.letter(Letter::pos(i as u8)).expect("generator index in range")
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    pub fn from_word(&self, w: &Word) -> Result<Element> {
        let mut e = Element::identity();
        for &l in &w.0 {
            let x = self.letter(l)?;
            self.try_push(&mut e.syl, &x.syl)?;
        }
        Ok(e)
    }

    pub fn parse(&self, text: &str) -> Result<Element> {
        self.from_word(&parse_word(&self.symbols, text)?)
    }

    /// Canonical word: balanced exponents in finite factors, Britton form in BS.
    pub fn to_word(&self, e: &Element) -> Word {
        let mut out = Vec::new();
        for s in &e.syl {
            match s {
                Syllable::Cyclic { factor, exp } => {
                    let g = self.factor_gen[*factor as usize];
                    let l = Letter::new(g, *exp < 0);
                    out.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
                }
                Syllable::Bs(w) => {
                    for (g, exp) in Bs::runs(w) {
                        let l = Letter::new(g, exp < 0);
                        out.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
                    }
                }
            }
        }
        Word(out)
    }

    pub fn normalize(&self, w: &Word) -> Result<Word> {
        Ok(self.to_word(&self.from_word(w)?))
    }

    pub fn format(&self, e: &Element) -> String {
        self.to_word(e).render(&self.symbols)
    }

    /// Normal form with runs written as powers, e.g. `a^60ba^60B`.
    pub fn format_compact(&self, e: &Element) -> String {
        self.to_word(e).render_compact(&self.symbols)
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(&self.symbols)
    }

    /// Number of letters of the canonical word.
    pub fn word_length(&self, e: &Element) -> usize {
        e.syl
            .iter()
            .map(|s| match s {
                Syllable::Cyclic { exp, .. } => exp.unsigned_abs() as usize,
                Syllable::Bs(w) => Bs::runs(w).iter().map(|r| r.1.unsigned_abs() as usize).sum(),
            })
            .sum()
    }

    pub fn shortlex_cmp(&self, a: &Element, b: &Element) -> Ordering {
        self.to_word(a).cmp(&self.to_word(b))
    }

    pub fn try_mul(&self, a: &Element, b: &Element) -> Result<Element> {
        let mut out = a.clone();
        self.try_push(&mut out.syl, &b.syl)?;
        Ok(out)
    }

    /// # Panics
    /// On i64 overflow of a normal-form exponent.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.try_mul(a, b).expect("exponent overflow")
    }

    pub fn mul_assign(&self, a: &mut Element, b: &Element) {
        self.try_push(&mut a.syl, &b.syl).expect("exponent overflow")
    }

    pub fn mul_all<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Element {
        let mut out = Element::identity();
        for x in items {
            self.mul_assign(&mut out, x);
        }
        out
    }

    pub fn inv(&self, a: &Element) -> Element {
        let syl = a
            .syl
            .iter()
            .rev()
            .map(|s| match s {
                Syllable::Cyclic { factor, exp } => Syllable::Cyclic {
                    factor: *factor,
                    exp: reduce_exp(-exp, self.cyclic_order(*factor)),
                },
                Syllable::Bs(w) => Syllable::Bs(Box::new(
                    self.bs().inverse(w).expect("exponent overflow"),
                )),
            })
            .collect();
        Element { syl }
    }

    pub fn pow(&self, a: &Element, n: i64) -> Element {
        let base = if n < 0 { self.inv(a) } else { a.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Element::identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                self.mul_assign(&mut acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// `g h g^-1`.
    pub fn conj(&self, g: &Element, h: &Element) -> Element {
        self.mul_all([g, h, &self.inv(g)])
    }

    /// `[x, y] = x y x^-1 y^-1`.
    pub fn commutator(&self, x: &Element, y: &Element) -> Element {
        self.mul_all([x, y, &self.inv(x), &self.inv(y)])
    }

    /// First/last syllable factor, used by the Bass–Serre distance.
    pub(crate) fn first_factor(&self, e: &Element) -> Option<u8> {
        e.syl.first().map(Syllable::factor)
    }

    /// `e` with a trailing syllable from factor `f` removed.
    pub(crate) fn strip_factor(&self, mut e: Element, f: u8) -> Element {
        if e.syl.last().map(Syllable::factor) == Some(f) {
            e.syl.pop();
        }
        e
    }

    pub(crate) fn prefix(&self, e: &Element, n: usize) -> Element {
        Element {
            syl: e.syl[..n].to_vec(),
        }
    }

    /// Encoding as letter codes, used as compact hash keys during enumeration.
    pub fn encode(&self, e: &Element) -> Box<[u8]> {
        self.to_word(e).0.iter().map(|l| l.code()).collect()
    }

    pub fn decode(&self, key: &[u8]) -> Element {
        let w = Word(key.iter().map(|&c| Letter::from_code(c)).collect());
        self.from_word(&w).expect("valid key")
    }

    fn cyclic_order(&self, f: u8) -> Option<i64> {
        match self.factors[f as usize] {
            Factor::Cyclic(n) => n,
            Factor::Bs(_) => unreachable!("BS factor has no cyclic order"),
        }
    }

    fn bs(&self) -> Bs {
        match self.factors[0] {
            Factor::Bs(bs) => bs,
            _ => unreachable!("model has no BS factor"),
        }
    }

    pub(crate) fn merge(&self, last: Syllable, next: &Syllable) -> Result<Option<Syllable>> {
        match (last, next) {
            (Syllable::Cyclic { factor, exp }, Syllable::Cyclic { exp: e2, .. }) => {
                let sum = exp.checked_add(*e2).ok_or(Error::Overflow)?;
                let r = reduce_exp(sum, self.cyclic_order(factor));
                Ok((r != 0).then_some(Syllable::Cyclic { factor, exp: r }))
            }
            (Syllable::Bs(mut w), Syllable::Bs(w2)) => {
                self.bs().mul(&mut w, w2)?;
                Ok((!Bs::is_identity(&w)).then_some(Syllable::Bs(w)))
            }
            _ => unreachable!("syllables of one factor share a kind"),
        }
    }

    fn try_push(&self, out: &mut Vec<Syllable>, rhs: &[Syllable]) -> Result<()> {
        let mut i = 0;
        while i < rhs.len() {
            match out.last() {
                Some(last) if last.factor() == rhs[i].factor() => {
                    let last = out.pop().expect("non-empty");
                    let merged = self.merge(last, &rhs[i])?;
                    i += 1;
                    if let Some(s) = merged {
                        out.push(s);
                        break;
                    }
                }
                _ => break,
            }
        }
        out.extend_from_slice(&rhs[i..]);
        Ok(())
    }
}

fn reduce_exp(e: i64, order: Option<i64>) -> i64 {
    match order {
        None => e,
        Some(n) => {
            let r = e.rem_euclid(n);
            if 2 * r > n {
                r - n
            } else {
                r
            }
        }
    }
}

/// Element together with a spelling as a product of members of a symmetric set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spelled {
    pub element: Element,
    pub spelling: Vec<u32>,
}

impl Spelled {
    pub fn len(&self) -> usize {
        self.spelling.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spelling.is_empty()
    }
}

/// Finite symmetric generating set: identity removed, sorted shortlex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    elements: Vec<Element>,
    inverse: Vec<usize>,
}

impl GeneratingSet {
    pub fn new(group: &Group, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let elements = symmetrize(group, elements);
        if elements.is_empty() {
            return Err(Error::Precondition("generating set has no non-trivial element".into()));
        }
        let inverse = elements
            .iter()
            .map(|e| {
                let i = group.inv(e);
                elements.iter().position(|x| *x == i).expect("symmetric")
            })
            .collect();
        Ok(GeneratingSet { elements, inverse })
    }

    pub fn standard(group: &Group) -> Self {
        Self::new(group, group.generators()).expect("models have generators")
    }

    /// Comma separated words, e.g. `a, b, ab`.
    pub fn parse(group: &Group, text: &str) -> Result<Self> {
        let mut items = Vec::new();
        let mut offset = 0;
        for part in text.split(',') {
            let e = group.parse(part).map_err(|err| match err {
                Error::Parse { position, message } => Error::Parse {
                    position: position + offset,
                    message,
                },
                other => other,
            })?;
            items.push(e);
            offset += part.len() + 1;
        }
        Self::new(group, items)
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn get(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.elements.iter().position(|x| x == e)
    }

    /// One representative per inverse pair (the shortlex smaller one).
    pub fn representatives(&self) -> Vec<Element> {
        (0..self.len())
            .filter(|&i| self.inverse[i] >= i)
            .map(|i| self.elements[i].clone())
            .collect()
    }

    pub fn max_word_length(&self, group: &Group) -> usize {
        self.elements.iter().map(|e| group.word_length(e)).max().unwrap_or(0)
    }

    pub fn render(&self, group: &Group) -> Vec<String> {
        self.elements.iter().map(|e| group.format(e)).collect()
    }

    pub fn spelled(&self, i: usize) -> Spelled {
        Spelled {
            element: self.elements[i].clone(),
            spelling: vec![i as u32],
        }
    }

    pub fn spelled_mul(&self, group: &Group, a: &Spelled, b: &Spelled) -> Spelled {
        let mut spelling = a.spelling.clone();
        spelling.extend_from_slice(&b.spelling);
        Spelled {
            element: group.mul(&a.element, &b.element),
            spelling,
        }
    }

    pub fn spelled_inv(&self, group: &Group, a: &Spelled) -> Spelled {
        Spelled {
            element: group.inv(&a.element),
            spelling: a
                .spelling
                .iter()
                .rev()
                .map(|&i| self.inverse[i as usize] as u32)
                .collect(),
        }
    }

    pub fn spelled_pow(&self, group: &Group, a: &Spelled, n: i64) -> Spelled {
        let base = if n < 0 { self.spelled_inv(group, a) } else { a.clone() };
        let mut spelling = Vec::with_capacity(base.spelling.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            spelling.extend_from_slice(&base.spelling);
        }
        Spelled {
            element: group.pow(&a.element, n),
            spelling,
        }
    }

    /// Recomputes the product of the spelling; used by word-length audits.
    pub fn check_spelling(&self, group: &Group, s: &Spelled) -> bool {
        let e = group.mul_all(s.spelling.iter().map(|&i| &self.elements[i as usize]));
        e == s.element
    }
}

/// Adds inverses, removes the identity and duplicates, sorts shortlex.
pub fn symmetrize(group: &Group, elements: impl IntoIterator<Item = Element>) -> Vec<Element> {
    let mut keyed: Vec<(Word, Element)> = Vec::new();
    for e in elements {
        if e.is_identity() {
            continue;
        }
        let i = group.inv(&e);
        keyed.push((group.to_word(&e), e));
        keyed.push((group.to_word(&i), i));
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, e)| e).collect()
}

/// Elements of S^k (products of at most k members of S), by first-appearance level.
#[derive(Clone, Debug)]
pub struct PowerSet {
    levels: Vec<Vec<Spelled>>,
}

impl PowerSet {
    /// Level `j` for `1 <= j <= k`: elements of S-length exactly `j`, shortlex sorted.
    pub fn level(&self, j: usize) -> &[Spelled] {
        &self.levels[j - 1]
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Spelled> {
        self.levels.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> Vec<Element> {
        self.iter().map(|s| s.element.clone()).collect()
    }

    pub fn as_generating_set(&self, group: &Group) -> GeneratingSet {
        GeneratingSet::new(group, self.elements()).expect("non-empty power set")
    }
}

/// Breadth-first S^k with shortest spellings; errors past `cap` elements.
pub fn power_set(group: &Group, s: &GeneratingSet, k: usize, cap: usize) -> Result<PowerSet> {
    use std::collections::HashSet;
    let mut seen: HashSet<Element> = HashSet::new();
    seen.insert(Element::identity());
    let mut levels: Vec<Vec<Spelled>> = Vec::new();
    let mut frontier = vec![Spelled {
        element: Element::identity(),
        spelling: Vec::new(),
    }];
    for radius in 1..=k {
        let mut next: Vec<(Word, Spelled)> = Vec::new();
        for x in &frontier {
            for (i, g) in s.elements().iter().enumerate() {
                let y = group.mul(&x.element, g);
                if seen.insert(y.clone()) {
                    let mut spelling = x.spelling.clone();
                    spelling.push(i as u32);
                    next.push((group.to_word(&y), Spelled { element: y, spelling }));
                }
            }
        }
        if seen.len() > cap {
            return Err(Error::Truncated {
                radius,
                elements: seen.len(),
                cap,
            });
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        let level: Vec<Spelled> = next.into_iter().map(|x| x.1).collect();
        frontier = level.clone();
        levels.push(level);
    }
    Ok(PowerSet { levels })
}

/// Homomorphism from the free group on `images.len()` letters into `target`.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    pub target: Group,
    pub images: Vec<Element>,
}

impl Homomorphism {
    pub fn new(target: &Group, images: Vec<Element>) -> Self {
        Homomorphism {
            target: target.clone(),
            images,
        }
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    pub fn evaluate(&self, w: &Word) -> Result<Element> {
        let mut out = Element::identity();
        for &l in &w.0 {
            let img = self
                .images
                .get(l.index as usize)
                .ok_or(Error::LetterOutOfRange(l.index))?;
            if l.inverse {
                self.target.mul_assign(&mut out, &self.target.inv(img));
            } else {
                self.target.mul_assign(&mut out, img);
            }
        }
        Ok(out)
    }

    /// Applies the map to an element of a group whose standard generators are the source letters.
    pub fn apply(&self, source: &Group, g: &Element) -> Element {
        self.evaluate(&source.to_word(g)).expect("arity matches source rank")
    }

    pub fn compose(&self, source: &Group, inner: &Homomorphism) -> Homomorphism {
        Homomorphism {
            target: self.target.clone(),
            images: inner.images.iter().map(|x| self.apply(source, x)).collect(),
        }
    }
}

/// Evaluates `w` under the homomorphism `phi`.
pub fn evaluate(phi: &Homomorphism, w: &Word) -> Result<Element> {
    phi.evaluate(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Group {
        Group::new(GroupModel::free(2)).unwrap()
    }

    fn fp23() -> Group {
        Group::new(GroupModel::free_product(&[2, 3])).unwrap()
    }

    #[test]
    fn free_reduction() {
        let g = f2();
        let w = parse_word(g.symbols(), "abBA").unwrap();
        assert!(g.normalize(&w).unwrap().is_empty());
        assert_eq!(g.format(&g.parse("abBa").unwrap()), "aa");
    }

    #[test]
    fn finite_factor_powers() {
        let g = fp23();
        assert_eq!(g.format(&g.parse("tt").unwrap()), "T");
        assert!(g.parse("ttt").unwrap().is_identity());
        assert!(g.parse("ss").unwrap().is_identity());
        assert_eq!(g.format(&g.parse("S").unwrap()), "s");
        let st = g.parse("st").unwrap();
        assert_eq!(g.format(&g.pow(&st, 2)), "stst");
        assert_eq!(g.format(&g.inv(&st)), "Ts");
    }

    #[test]
    fn bs_commutator_in_kernel() {
        let g = Group::new(GroupModel::bs(2, 3, 1)).unwrap();
        let x = g.parse("taT").unwrap();
        assert_eq!(g.format(&x), "taT");
        let c = g.commutator(&x, &g.parse("a").unwrap());
        assert!(!c.is_identity());
        let phi = Homomorphism::new(&g, vec![g.parse("aa").unwrap(), g.parse("t").unwrap(), g.parse("z").unwrap()]);
        assert!(phi.apply(&g, &c).is_identity());
        assert_eq!(g.format(&g.parse("taaT").unwrap()), "aaa");
    }

    #[test]
    fn generating_set_symmetric() {
        let g = fp23();
        let s = GeneratingSet::standard(&g);
        assert_eq!(s.render(&g), vec!["s", "t", "T"]);
        assert_eq!(s.representatives().len(), 2);
        let f = f2();
        let s = GeneratingSet::parse(&f, "a, ab").unwrap();
        assert_eq!(s.render(&f), vec!["a", "A", "ab", "BA"]);
        assert!(GeneratingSet::parse(&f, "a,x").is_err());
        assert!(GeneratingSet::parse(&f, "1").is_err());
    }

    #[test]
    fn power_set_counts() {
        let g = f2();
        let s = GeneratingSet::standard(&g);
        let p = power_set(&g, &s, 3, 1000).unwrap();
        assert_eq!(p.level(1).len(), 4);
        assert_eq!(p.level(2).len(), 12);
        assert_eq!(p.level(3).len(), 36);
        for x in p.iter() {
            assert!(s.check_spelling(&g, x));
        }
        assert!(matches!(power_set(&g, &s, 3, 20), Err(Error::Truncated { .. })));
    }

    #[test]
    fn model_strings() {
        for m in ["f2", "fp:2,3", "fp:2,inf", "bs:2,3,1"] {
            let model: GroupModel = m.parse().unwrap();
            assert_eq!(model.to_string(), m);
        }
        assert!("q5".parse::<GroupModel>().is_err());
        assert!(Group::new("fp:1,3".parse().unwrap()).is_err());
        assert!(Group::new("fp:3".parse().unwrap()).is_err());
        assert!(Group::new(GroupModel::free(0)).is_err());
    }
}
