//! Exact growth and ping-pong computations for groups acting on trees.

pub mod bs;
pub mod constants;
pub mod constructions;
pub mod error;
pub mod experiments;
pub mod germ;
pub mod limit;
pub mod group;
pub mod pingpong;
pub mod growth;
pub mod space;
pub mod word;
pub mod wpd;

pub use error::{Error, Result};
pub use group::{
    evaluate, power_set, symmetrize, Element, GeneratingSet, Group, GroupModel, Homomorphism,
    Order, PowerSet, Spelled,
};
pub use word::{Letter, Word};
pub use space::{Axis, Classification, Overlap, Point, Space, TreeKind};
pub use growth::{ball, cone_automaton, enumerate_balls, growth_estimate, ConeAutomaton, GrowthEstimate, GrowthTable};
pub use constants::{ActionConstants, ConstantsLedger};
pub use germ::{germ_equivalent, germ_opposite, Germ};
pub use wpd::{estimate_uniform_wpd_d, WpdEstimate, WpdParams};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/growth.md")]
    mod growth {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/limits.md")]
    mod limits {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
