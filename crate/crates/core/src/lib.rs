//! Rule synthesis from truth tables, proof checking, proof search and proof
//! transformation for Sheffer-stroke style calculi.

pub mod formula;
pub mod rules;
pub mod sequent;
pub mod kernel;
pub mod matching;
pub mod semantics;
pub mod prover;
pub mod translate;
pub mod normalize;
pub mod io;
pub mod cli;
