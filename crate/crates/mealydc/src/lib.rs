//! Finite-model workbench for the double category of Mealy machines over
//! finite sets.
//!
//! A Mealy machine `A ⇸ B` is a state set `E` with a transition table
//! `d : A×E → E` and an output table `s : A×E → B`, read as a loose morphism
//! between the sets `A` and `B`; plain functions are the tight morphisms, and
//! squares between them are cells witnessed by a state map. On top of that
//! structure the crate builds and verifies:
//!
//! - cells and their horizontal/vertical compositions, the cascade product of
//!   machines, and the coherence cells (associators, unitors) as concrete
//!   state bijections ([`mealy`]);
//! - monads carried by endo machines, their enumeration at small sizes, and
//!   the induced bicrossed product `E ⋈ A*` of the state monoid with the free
//!   monoid on the alphabet ([`monad`], [`monoid`]);
//! - modules over a monad and their equivalence with representations of the
//!   bicrossed product ([`monad`]);
//! - free monads on a machine, with the interpretation of the defining
//!   recursions kept configurable and a law search over the alternatives
//!   ([`monad::freemonad`]);
//! - companions, conjoints, cotabulators, terminal cells, double pullbacks,
//!   interchange, and loose adjunctions, plus bounded refutations of the
//!   constructions that do not exist (initial objects, tabulators)
//!   ([`doublecat`]);
//! - a JSON document model and a CLI front end ([`doc`], [`cli`]).
//!
//! Everything is exact: carriers are index sets `0..n`, tables are dense, and
//! every law is checked by exhaustion over its (bounded) argument space, with
//! the lexicographically first counterexample reported on failure.

pub mod cli;
pub mod doc;
pub mod doublecat;
pub mod finset;
pub mod gen;
pub mod mealy;
pub mod monad;
pub mod monoid;
pub mod verdict;

pub use verdict::{Error, Result, Verdict};
