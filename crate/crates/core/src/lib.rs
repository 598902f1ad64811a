//! Finite fans of real semigroups and their spectra.
//!
//! A fan is modelled either by an explicit multiplication table
//! ([`ternary::TernaryTable`]) or, compactly, by a chain of GF(2) spaces
//! ([`chain::FanChain`]). On top of the chain model sit the specialization
//! order ([`space::CharSpace`], [`order::Forest`]), the GF(2) matroid of each
//! level ([`aos`]), standard generating systems ([`genesis`]), isomorphisms
//! ([`iso`]), evaluation maps ([`represent`]) and realizability of candidate
//! orders ([`realize`]).

pub mod aos;
pub mod chain;
pub mod error;
pub mod genesis;
pub mod gf2;
pub mod iso;
pub mod order;
pub mod realize;
pub mod report;
pub mod represent;
pub mod sign;
pub mod space;
pub mod ternary;

pub use chain::{ChainCharacter, Element, FanChain, Level};
pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Gf2Vec};
pub use order::Forest;
pub use sign::Sign3;
pub use space::{CharId, CharSpace};
pub use ternary::{Character, TernaryTable};
