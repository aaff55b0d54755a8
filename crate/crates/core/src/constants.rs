//! Numerical constants of the construction, recomputed from `(δ, D, M)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs: hyperbolicity `delta`, uniform WPD constant `d`, and `m_power`, the
/// power `M` such that `S^M` contains a hyperbolic element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionConstants {
    pub delta: u64,
    pub d: u64,
    pub m_power: u64,
}

/// Snapshot of every derived constant, attached to output records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsLedger {
    pub delta: u64,
    #[serde(rename = "D")]
    pub d: u64,
    #[serde(rename = "M")]
    pub m_power: u64,
    pub t_num: u64,
    pub t_den: u64,
    pub k: u64,
    pub m: u64,
    pub b: u64,
    pub a_den: u64,
    pub a: f64,
}

impl ActionConstants {
    pub fn new(delta: u64, d: u64, m_power: u64) -> Result<Self> {
        if d == 0 || m_power == 0 {
            return Err(Error::Precondition("D and M must be positive".into()));
        }
        Ok(ActionConstants { delta, d, m_power })
    }

    /// Trees, with the default `D = 1`, `M = 2`.
    pub fn trees() -> Self {
        ActionConstants {
            delta: 0,
            d: 1,
            m_power: 2,
        }
    }

    /// `T = 50δ / D` as a fraction.
    pub fn t(&self) -> (u64, u64) {
        (50 * self.delta, self.d)
    }

    pub fn k(&self) -> u64 {
        60 * self.d
    }

    /// Word-length bound for `u`, `844 D`; at least `14k + 4`.
    pub fn m(&self) -> u64 {
        844 * self.d
    }

    /// Word-length bound for the separators.
    pub fn b(&self) -> u64 {
        343_640 * self.d * self.d * self.m_power + 22
    }

    /// `20 M D^2 m + 2 = 16880 M D^3 + 2`; the exponent `A` is its reciprocal.
    pub fn a_denominator(&self) -> u64 {
        20 * self.m_power * self.d * self.d * self.m() + 2
    }

    pub fn a(&self) -> f64 {
        1.0 / self.a_denominator() as f64
    }

    pub fn ledger(&self) -> ConstantsLedger {
        let (t_num, t_den) = self.t();
        ConstantsLedger {
            delta: self.delta,
            d: self.d,
            m_power: self.m_power,
            t_num,
            t_den,
            k: self.k(),
            m: self.m(),
            b: self.b(),
            a_den: self.a_denominator(),
            a: self.a(),
        }
    }
}

impl Default for ActionConstants {
    fn default() -> Self {
        Self::trees()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_values() {
        let c = ActionConstants::trees();
        assert_eq!(c.k(), 60);
        assert_eq!(c.m(), 844);
        assert_eq!(c.m(), 14 * c.k() + 4);
        assert_eq!(c.b(), 687_302);
        assert_eq!(c.a_denominator(), 33_762);
    }

    #[test]
    fn consistent_for_all_d() {
        for d in 1..20 {
            for mp in 1..5 {
                let c = ActionConstants::new(3, d, mp).unwrap();
                assert!(c.m() >= 14 * c.k() + 4);
                assert_eq!(c.a_denominator(), 16880 * mp * d * d * d + 2);
                assert_eq!(c.t(), (150, d));
            }
        }
        assert!(ActionConstants::new(0, 0, 2).is_err());
    }
}
