//! Transition monoids and syntactic complexity of circular semi-flower
//! automata (CSFA).
//!
//! A semi-flower automaton is a trim deterministic automaton whose unique
//! initial state is also its unique final state and through which every
//! cycle passes. It is circular when some letter permutes the states in a
//! single cycle. This crate classifies such automata by their branch points
//! going in (states of indegree at least two), generates their transition
//! monoids, decomposes them into orbits of the cyclic group of the circular
//! letter, and checks the closed-form sizes `n`, `2n` and `2n(n+1)`.

pub mod automaton;
pub mod error;
pub mod families;
pub mod format;
pub mod monoid;
pub mod transform;
pub mod two_bpi;
pub mod verify;

pub use automaton::{validate, AnalysisReport, Automaton, BpiClass, RawAutomaton, SfaViolation};
pub use error::{Error, Result};
pub use families::{
    enumerate_two_bpi_binary, figure_1, figure_2_ternary, one_bpi_csfa, unary_cycle,
    witness_aprime, EnumerationResult, FamilySpec, FamilyTag, InstanceRecord,
};
pub use monoid::{
    generate_monoid, group_part, orbits, syntactic_complexity, GroupPart, MonoidElement,
    OrbitPartition, TransitionMonoid, DEFAULT_BUDGET,
};
pub use transform::{Transformation, Word};
pub use two_bpi::{
    basic_idempotents, rank2_form, verify_canonical_form, BasicIdempotents, CanonicalFormCheck,
    Rank2Classifier, Rank2Form, Rank2Tag, TwoBpiProfile,
};
pub use verify::{two_bpi_bound, verify_paper, Check, VerificationReport};
