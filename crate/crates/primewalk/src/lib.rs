//! Prime residue-class walks for Dirichlet characters: exact character
//! arithmetic, the cosine series B_N(t) and its block/randomized ensembles,
//! numerical L-function evaluation on and off the critical line, and the
//! statistics (frequencies, transitions, variance scaling, normality) that
//! probe whether the walk stays diffusive.

pub mod block_ensemble;
pub mod characters;
pub mod error;
pub mod kac;
pub mod lfunc;
pub mod manifest;
pub mod primes;
pub mod random_ensemble;
pub mod residue_stats;
pub mod series;
pub mod stats_core;

pub use characters::{enumerate_characters, CharValue, DirichletCharacter};
pub use error::{Error, Result};
pub use primes::PrimeStore;
pub use series::{b_series, SeriesTrace};
