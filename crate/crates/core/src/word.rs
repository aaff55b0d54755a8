//! Letters, words and the small expression language used to type them.
//!
//! A word is written as a sequence of generator symbols; an upper-case symbol
//! is the inverse letter. `^` raises the preceding atom to an integer power and
//! parentheses group, so `(st)^3`, `a^-2 b` and `A^n b a^n` (in templates) all
//! parse. The identity is written `1`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its inverse. Ordered by index first, positive before negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub index: u8,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(index: u8, inverse: bool) -> Self {
        Letter { index, inverse }
    }

    pub const fn pos(index: u8) -> Self {
        Letter::new(index, false)
    }

    pub const fn neg(index: u8) -> Self {
        Letter::new(index, true)
    }

    pub fn inv(self) -> Self {
        Letter::new(self.index, !self.inverse)
    }

    pub(crate) fn code(self) -> u8 {
        self.index * 2 + self.inverse as u8
    }

    pub(crate) fn from_code(code: u8) -> Self {
        Letter::new(code / 2, code % 2 == 1)
    }
}

/// A word in the standard generators. `Ord` is shortlex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Free reduction only; group relations are applied by [`crate::Group::normalize`].
    pub fn freely_reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn render(&self, symbols: &[char]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0.iter().map(|l| symbol_of(symbols, *l)).collect()
    }

    /// Like [`Word::render`] with runs of three or more equal letters written `x^n`.
    pub fn render_compact(&self, symbols: &[char]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let c = symbol_of(symbols, l);
            if j - i >= 3 {
                out.push(c);
                out.push('^');
                out.push_str(&(j - i).to_string());
            } else {
                (i..j).for_each(|_| out.push(c));
            }
            i = j;
        }
        out
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self
            .0
            .iter()
            .map(|l| format!("{}{}", l.index, if l.inverse { "-" } else { "+" }))
            .collect();
        write!(f, "[{}]", letters.join(" "))
    }
}

pub(crate) fn symbol_of(symbols: &[char], l: Letter) -> char {
    let c = symbols[l.index as usize];
    if l.inverse {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

/// Exponent `coeff * n + constant`. Plain words only use `constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exponent {
    pub coeff: i64,
    pub constant: i64,
}

impl Exponent {
    pub const ONE: Exponent = Exponent {
        coeff: 0,
        constant: 1,
    };

    pub fn at(self, n: i64) -> i64 {
        self.coeff * n + self.constant
    }
}

/// Parsed word expression: letters, groups and powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expr {
    Letter(Letter),
    Seq(Vec<Expr>),
    Pow(Box<Expr>, Exponent),
}

impl Expr {
    pub fn has_parameter(&self) -> bool {
        match self {
            Expr::Letter(_) => false,
            Expr::Seq(v) => v.iter().any(Expr::has_parameter),
            Expr::Pow(e, x) => x.coeff != 0 || e.has_parameter(),
        }
    }

    /// Expands into a (not necessarily reduced) word for the parameter value `n`.
    pub fn expand(&self, n: i64) -> Word {
        let mut out = Vec::new();
        self.expand_into(n, &mut out);
        Word(out)
    }

    fn expand_into(&self, n: i64, out: &mut Vec<Letter>) {
        match self {
            Expr::Letter(l) => out.push(*l),
            Expr::Seq(v) => v.iter().for_each(|e| e.expand_into(n, out)),
            Expr::Pow(e, x) => {
                let k = x.at(n);
                let mut base = Vec::new();
                e.expand_into(n, &mut base);
                if k < 0 {
                    base = base.iter().rev().map(|l| l.inv()).collect();
                }
                for _ in 0..k.unsigned_abs() {
                    out.extend_from_slice(&base);
                }
            }
        }
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    symbols: &'a [char],
    allow_parameter: bool,
}

/// Parses a word over `symbols`. Position in errors is a character offset.
pub fn parse_word(symbols: &[char], text: &str) -> Result<Word> {
    let expr = parse_expr(symbols, text, false)?;
    Ok(expr.expand(0))
}

/// Parses a word template whose exponents may mention `n` (`n`, `-n`, `2n+1`).
pub fn parse_template(symbols: &[char], text: &str) -> Result<Expr> {
    parse_expr(symbols, text, true)
}

fn parse_expr(symbols: &[char], text: &str, allow_parameter: bool) -> Result<Expr> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        symbols,
        allow_parameter,
    };
    let e = p.seq()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        let (at, c) = p.chars[p.pos];
        return Err(Error::parse(at, format!("unexpected '{c}'")));
    }
    Ok(e)
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len()
            && (self.chars[self.pos].1.is_whitespace() || self.chars[self.pos].1 == '*')
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|c| c.0)
            .unwrap_or_else(|| self.chars.last().map(|c| c.0 + 1).unwrap_or(0))
    }

    fn seq(&mut self) -> Result<Expr> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == ')' {
                break;
            }
            let atom = self.atom()?;
            items.push(self.postfix(atom)?);
        }
        Ok(Expr::Seq(items))
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        let c = self.chars[self.pos].1;
        self.pos += 1;
        if c == '(' {
            let inner = self.seq()?;
            if self.peek() != Some(')') {
                return Err(Error::parse(self.offset(), "expected ')'"));
            }
            self.pos += 1;
            return Ok(inner);
        }
        if c == '1' {
            return Ok(Expr::Seq(Vec::new()));
        }
        let lower = c.to_ascii_lowercase();
        match self.symbols.iter().position(|&s| s == lower) {
            Some(i) => Ok(Expr::Letter(Letter::new(i as u8, c.is_ascii_uppercase()))),
            None => Err(Error::parse(at, format!("unknown generator '{c}'"))),
        }
    }

    fn postfix(&mut self, mut e: Expr) -> Result<Expr> {
        while self.peek() == Some('^') {
            self.pos += 1;
            let x = self.exponent()?;
            e = Expr::Pow(Box::new(e), x);
        }
        Ok(e)
    }

    fn exponent(&mut self) -> Result<Exponent> {
        let paren = self.peek() == Some('(');
        if paren {
            self.pos += 1;
        }
        let mut x = Exponent {
            coeff: 0,
            constant: 0,
        };
        let mut first = true;
        loop {
            let at = self.offset();
            let mut sign = 1i64;
            match self.peek() {
                Some('-') => {
                    sign = -1;
                    self.pos += 1;
                }
                Some('+') if !first => self.pos += 1,
                _ if !first => break,
                _ => {}
            }
            let digits_start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
                self.pos += 1;
            }
            let digits: String = self.chars[digits_start..self.pos].iter().map(|c| c.1).collect();
            let value = if digits.is_empty() {
                None
            } else {
                Some(
                    digits
                        .parse::<i64>()
                        .map_err(|_| Error::parse(at, "exponent out of range"))?,
                )
            };
            let is_n = self.pos < self.chars.len() && self.chars[self.pos].1 == 'n';
            if is_n {
                if !self.allow_parameter {
                    return Err(Error::parse(self.offset(), "parameter 'n' not allowed here"));
                }
                self.pos += 1;
                x.coeff += sign * value.unwrap_or(1);
            } else if let Some(v) = value {
                x.constant += sign * v;
            } else {
                return Err(Error::parse(at, "expected exponent"));
            }
            first = false;
            // only parenthesised exponents may contain several terms
            if !paren {
                break;
            }
        }
        if paren {
            if self.peek() != Some(')') {
                return Err(Error::parse(self.offset(), "expected ')' after exponent"));
            }
            self.pos += 1;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AB: [char; 2] = ['a', 'b'];

    #[test]
    fn parses_powers_and_groups() {
        let w = parse_word(&AB, "(ab)^2 A^-1").unwrap();
        let expect = vec![
            Letter::pos(0),
            Letter::pos(1),
            Letter::pos(0),
            Letter::pos(1),
            Letter::pos(0),
        ];
        assert_eq!(w.0, expect);
        assert_eq!(parse_word(&AB, "1").unwrap(), Word::new());
        assert_eq!(parse_word(&AB, "a^-2").unwrap().0, vec![Letter::neg(0); 2]);
    }

    #[test]
    fn reports_positions() {
        match parse_word(&AB, "ab c") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_word(&AB, "(ab").is_err());
        assert!(parse_word(&AB, "a^n").is_err());
    }

    #[test]
    fn templates() {
        let t = parse_template(&AB, "A^n b a^n").unwrap();
        assert!(t.has_parameter());
        assert_eq!(t.expand(2).render(&AB), "AAbaa");
        let t = parse_template(&AB, "a^(2n+1)").unwrap();
        assert_eq!(t.expand(3).len(), 7);
    }

    #[test]
    fn shortlex() {
        let a = parse_word(&AB, "b").unwrap();
        let b = parse_word(&AB, "aa").unwrap();
        let c = parse_word(&AB, "A").unwrap();
        assert!(a < b);
        assert!(parse_word(&AB, "a").unwrap() < c);
        assert!(c < a);
    }
}
