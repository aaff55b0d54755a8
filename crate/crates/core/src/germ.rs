//! Germs: initial pieces of geodesics at a common origin, at a fixed scale `Δ`.

use crate::error::{Error, Result};
use crate::space::{Point, Space};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    pub origin: Point,
    pub endpoint: Point,
    pub scale: u64,
}

impl Germ {
    pub fn new(origin: Point, endpoint: Point, scale: u64) -> Self {
        Germ {
            origin,
            endpoint,
            scale,
        }
    }

    /// A germ exists only for geodesics of length at least `10Δ`.
    pub fn is_empty(&self, space: &Space) -> bool {
        space.dist(&self.origin, &self.endpoint) < 10 * self.scale
    }
}

fn terms(space: &Space, a: &Germ, b: &Germ) -> Result<(i64, i64, i64, i64)> {
    if a.origin != b.origin {
        return Err(Error::GermMismatch("different origins".into()));
    }
    if a.scale != b.scale {
        return Err(Error::GermMismatch(format!("scales {} and {}", a.scale, b.scale)));
    }
    if a.is_empty(space) || b.is_empty(space) {
        return Err(Error::GermMismatch("empty germ".into()));
    }
    let xy = space.dist(&a.origin, &a.endpoint) as i64;
    let xz = space.dist(&a.origin, &b.endpoint) as i64;
    let yz = space.dist(&a.endpoint, &b.endpoint) as i64;
    Ok((xy, xz, yz, a.scale as i64))
}

/// `|y - z| <= |x - y| + |x - z| - 8Δ`.
pub fn germ_equivalent(space: &Space, a: &Germ, b: &Germ) -> Result<bool> {
    let (xy, xz, yz, delta) = terms(space, a, b)?;
    Ok(yz <= xy + xz - 8 * delta)
}

/// `|y - z| >= |x - y| + |x - z| - 4Δ`.
pub fn germ_opposite(space: &Space, a: &Germ, b: &Germ) -> Result<bool> {
    let (xy, xz, yz, delta) = terms(space, a, b)?;
    Ok(yz >= xy + xz - 4 * delta)
}
