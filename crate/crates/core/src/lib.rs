//! Context-free grammar toolkit.
//!
//! * [`grammar`]: grammar types and the `.cfg` text format
//! * [`transform`]: reduction and Chomsky normal form
//! * [`trees`]: derivation trees and yields
//! * [`decide`]: membership (CYK), emptiness, finiteness, bounded enumeration
//! * [`pumping`]: pumping decompositions and refutation certificates
//! * [`closure`]: union, concatenation, star, substitution, homomorphism
//!
//! Split enumeration and CYK table fills run on rayon when the `parallel`
//! feature is enabled (the default); see [`exec::Strategy`].

pub mod closure;
pub mod decide;
pub mod exec;
pub mod grammar;
pub mod pumping;
pub mod transform;
pub mod trees;

pub use grammar::{parse_grammar, serialize_grammar, validate, Grammar, Production, Symbol, SymbolKind, Word};
pub use transform::{to_cnf, CnfGrammar};
pub use trees::DerivationTree;
