//! The constructive steps: a hyperbolic element of large displacement, a free
//! pair of conjugate powers, the primitive element `u`, the four separators, the
//! map `Φ` on adequate tuples, and the lower bound on the growth rate.

mod displacement;
mod feasible;
mod free_pair;
mod lower_bound;
mod primitive;
mod separators;

pub use displacement::{
    find_hyperbolic, large_displacement_element, large_displacement_in, spelled_power, HyperbolicWitness,
    LargeDisplacement, LargeDisplacementSummary,
};
pub use free_pair::{build_free_pair, independent_conjugator, FreePair, FreePairReport};
pub use primitive::{build_primitive_u, primitive_word, segment_fixers, PrimitiveElement, PrimitiveOptions, PrimitiveReport};
pub use separators::{
    build_separators, germ_context, Check, GermContext, Separator, SeparatorOptions, SeparatorReport, SeparatorSet,
};
pub use feasible::{
    adequate_selection, admissible_for, admissible_pair, choose_admissible, forbidden_test, phi_injectivity_check, phi_map,
    AdequateReport, AdequateSet, AdmissibleChoice, PhiReport, Tail,
};
pub use lower_bound::{
    certified_lower_bound, lower_bound_audit, LowerBoundOptions, LowerBoundReport, LowerCertificate,
};
