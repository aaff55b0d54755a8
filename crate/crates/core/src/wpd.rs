//! Sampling estimate of the uniform WPD constant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{Element, GeneratingSet};
use crate::growth::ball;
use crate::space::Space;
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WpdParams {
    pub samples: usize,
    /// Maximal length of the sampled words.
    pub word_length: usize,
    /// Radius of the searched ball in the standard generators.
    pub ball_radius: usize,
    pub epsilon: u64,
    /// Power `D` used for the second point `g^D x`.
    pub power: u64,
    pub seed: u64,
}

impl Default for WpdParams {
    fn default() -> Self {
        WpdParams {
            samples: 32,
            word_length: 6,
            ball_radius: 4,
            epsilon: 0,
            power: 1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WpdEstimate {
    pub max_count: usize,
    pub hyperbolic_samples: usize,
    pub witness: Option<String>,
}

/// Largest number of ball elements moving `x` and `g^D x` by at most ε, over
/// sampled hyperbolic `g` and points `x` on their axes.
pub fn estimate_uniform_wpd_d(space: &Space, params: &WpdParams) -> Result<WpdEstimate> {
    let group = space.group();
    let s = GeneratingSet::standard(group);
    let candidates = ball(group, &s, params.ball_radius, 1 << 22)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let rank = group.rank() as u8;
    let mut out = WpdEstimate {
        max_count: 0,
        hyperbolic_samples: 0,
        witness: None,
    };
    let mut attempts = 0;
    while out.hyperbolic_samples < params.samples && attempts < params.samples * 50 {
        attempts += 1;
        let len = rng.gen_range(1..=params.word_length.max(1));
        let mut w: Vec<Letter> = Vec::with_capacity(len);
        while w.len() < len {
            let l = Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5));
            if w.last() != Some(&l.inv()) {
                w.push(l);
            }
        }
        let g: Element = group.from_word(&Word(w))?;
        let Some(axis) = space.axis(&g) else { continue };
        out.hyperbolic_samples += 1;
        let offset = rng.gen_range(0..axis.translation) as i64;
        let x = space.axis_point(&axis, offset);
        let y = space.act(&group.pow(&g, params.power as i64), &x);
        let count = candidates
            .iter()
            .filter(|h| {
                space.displacement(h, &x) <= params.epsilon && space.displacement(h, &y) <= params.epsilon
            })
            .count();
        if count > out.max_count {
            out.max_count = count;
            out.witness = Some(group.format(&g));
        }
    }
    Ok(out)
}
