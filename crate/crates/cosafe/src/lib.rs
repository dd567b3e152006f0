//! Safety and co-safety fragments of linear temporal logic over finite and
//! infinite words: parsing, evaluation, fragment classification,
//! translations between temporal and first-order presentations, and a
//! normal form for the co-safety first-order fragment.

pub mod check;
pub mod cli;
pub mod corpus;
pub mod fragments;
pub mod semantics;
pub mod syntax;
pub mod translate;

pub use cli::run;
