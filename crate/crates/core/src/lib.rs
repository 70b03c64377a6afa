//! Finite implication zroupoids and the subvarieties of the symmetric
//! variety defined by weak associative laws of length at most four.
//!
//! * [`term`] and [`identity`]: the term language and identities.
//! * [`waid`]: words, bracketings and the `nmXpq` inventory.
//! * [`algebra`]: finite algebras, satisfaction and variety membership.
//! * [`lemmas`]: a registry of identities known to hold under hypotheses.
//! * [`search`]: finite model enumeration up to isomorphism.
//! * [`classify`]: partitions, inclusion posets and Hasse diagrams.
//! * [`cli`]: the `zlab` command line.

pub mod algebra;
pub mod classify;
pub mod cli;
mod compiled;
pub mod identity;
pub mod lemmas;
pub mod search;
pub mod term;
pub mod waid;

pub use algebra::{catalog, member_of, satisfies, FiniteZroupoid, SatisfactionReport, VarietyDescriptor};
pub use identity::Identity;
pub use term::{Style, Term, Var};
pub use waid::{bracketings, enumerate_waids, identity_from_name, name_of, words};
