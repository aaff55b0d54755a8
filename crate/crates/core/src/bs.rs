//! Britton normal form for BS(p, q) = <a, t | t a^p t^-1 = a^q>.
//!
//! An element is `a^r1 t^e1 a^r2 t^e2 ... a^rn t^en a^tail` with `0 <= ri < q`
//! when `ei = +1`, `0 <= ri < p` when `ei = -1`, and no pinch `t^-1 a^0 t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BsWord {
    pub syllables: Vec<(i64, i8)>,
    pub tail: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bs {
    pub p: i64,
    pub q: i64,
}

impl Bs {
    pub fn is_identity(w: &BsWord) -> bool {
        w.syllables.is_empty() && w.tail == 0
    }

    pub fn mul_a(&self, w: &mut BsWord, e: i64) -> Result<()> {
        w.tail = w.tail.checked_add(e).ok_or(Error::Overflow)?;
        Ok(())
    }

    pub fn mul_t(&self, w: &mut BsWord, eps: i8) -> Result<()> {
        let (num, den) = if eps > 0 { (self.p, self.q) } else { (self.q, self.p) };
        if let Some(&(r, last)) = w.syllables.last() {
            if last == -eps && w.tail % den == 0 {
                w.syllables.pop();
                let shifted = (w.tail / den).checked_mul(num).ok_or(Error::Overflow)?;
                w.tail = shifted.checked_add(r).ok_or(Error::Overflow)?;
                return Ok(());
            }
        }
        let r = w.tail.rem_euclid(den);
        let k = (w.tail - r) / den;
        w.syllables.push((r, eps));
        w.tail = k.checked_mul(num).ok_or(Error::Overflow)?;
        Ok(())
    }

    pub fn mul(&self, w: &mut BsWord, rhs: &BsWord) -> Result<()> {
        for &(r, e) in &rhs.syllables {
            self.mul_a(w, r)?;
            self.mul_t(w, e)?;
        }
        self.mul_a(w, rhs.tail)
    }

    pub fn inverse(&self, w: &BsWord) -> Result<BsWord> {
        let mut out = BsWord::default();
        self.mul_a(&mut out, -w.tail)?;
        for &(r, e) in w.syllables.iter().rev() {
            self.mul_t(&mut out, -e)?;
            self.mul_a(&mut out, -r)?;
        }
        Ok(out)
    }

    /// Letters of the normal form as (generator, exponent sign) runs: 0 = a, 1 = t.
    pub fn runs(w: &BsWord) -> Vec<(u8, i64)> {
        let mut out = Vec::new();
        for &(r, e) in &w.syllables {
            if r != 0 {
                out.push((0, r));
            }
            out.push((1, e as i64));
        }
        if w.tail != 0 {
            out.push((0, w.tail));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(bs: &Bs, letters: &[(u8, i64)]) -> BsWord {
        let mut w = BsWord::default();
        for &(g, e) in letters {
            if g == 0 {
                bs.mul_a(&mut w, e).unwrap();
            } else {
                for _ in 0..e.abs() {
                    bs.mul_t(&mut w, e.signum() as i8).unwrap();
                }
            }
        }
        w
    }

    #[test]
    fn relation_holds() {
        let bs = Bs { p: 2, q: 3 };
        let lhs = word(&bs, &[(1, 1), (0, 2), (1, -1)]);
        assert_eq!(lhs, word(&bs, &[(0, 3)]));
        let conj = word(&bs, &[(1, -1), (0, 3), (1, 1)]);
        assert_eq!(conj, word(&bs, &[(0, 2)]));
    }

    #[test]
    fn non_pinch_stays() {
        let bs = Bs { p: 2, q: 3 };
        let w = word(&bs, &[(1, 1), (0, 1), (1, -1)]);
        assert_eq!(w.syllables.len(), 2);
        let inv = bs.inverse(&w).unwrap();
        let mut prod = w.clone();
        bs.mul(&mut prod, &inv).unwrap();
        assert!(Bs::is_identity(&prod));
    }
}
