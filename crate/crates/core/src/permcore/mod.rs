//! Permutation arithmetic and permutation-group machinery.

pub mod chain;
pub mod factor;
pub mod perm;
pub mod radix;
pub mod structure;

pub use chain::{GeneratorSet, Level, StabilizerChain};
pub use factor::{factor_integer, is_probable_prime, PrimeFactorization};
pub use perm::Permutation;
pub use structure::{derived_series, derived_subgroup, is_solvable, normal_closure};
