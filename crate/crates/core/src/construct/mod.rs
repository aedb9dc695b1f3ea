//! Constructions of logarithmic signatures.
//!
//! * [`chain_ls`]: one transversal block per stabilizer level.
//! * [`mls_cyclic`]: minimal signature of a cyclic set `{x^i : 0 <= i < s}`.
//! * [`mls_solvable`]: minimal signature from a prime-index composition series.
//! * [`refine_block`] / [`refine_ls`]: replace a composite transversal by a
//!   product of cyclic sets whose product set is sharply transitive on the
//!   level orbit.
//! * [`build_mls`]: solvable shortcut, otherwise chain then refinement.

mod chain_ls;
mod cyclic;
mod refine;
mod solvable;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::logsig::{is_minimal, LogSignature};
use crate::permcore::{factor_integer, is_solvable, Permutation, StabilizerChain};

pub use chain_ls::{chain_ls, sharply_transitive_check};
pub use cyclic::{cyclic_weights, mls_cyclic};
pub(crate) use refine::aligned_chain;
pub use refine::{refine_block, refine_ls, RefineOptions};
pub use solvable::{composition_series_solvable, mls_solvable, CompositionSeries, SeriesStep};

/// The cyclic set `{x^0, ..., x^(s-1)}`; `s` never exceeds the order of `x`,
/// so the listed powers are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSetSpec {
    generator: Permutation,
    size: usize,
}

impl CyclicSetSpec {
    pub fn new(generator: Permutation, size: usize) -> Result<Self> {
        if size < 1 {
            return Err(Error::InvalidCyclicSet("size must be at least 1".into()));
        }
        let order = generator.order();
        if BigUint::from(size) > order {
            return Err(Error::InvalidCyclicSet(format!(
                "size {size} exceeds the generator order {order}"
            )));
        }
        Ok(CyclicSetSpec { generator, size })
    }

    pub fn generator(&self) -> &Permutation {
        &self.generator
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `[x^0, x^1, ..., x^(s-1)]`.
    pub fn powers(&self) -> Vec<Permutation> {
        let mut out = Vec::with_capacity(self.size);
        let mut p = Permutation::identity(self.generator.degree());
        for _ in 0..self.size {
            let next = &p * &self.generator;
            out.push(p);
            p = next;
        }
        out
    }
}

/// Cyclic sets `A_1, ..., A_m` whose product set `A_1 * ... * A_m` is a
/// transversal of a stabilizer level: it maps the level's base point onto
/// every orbit point exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDecomposition {
    pub factors: Vec<CyclicSetSpec>,
    pub level: usize,
    pub base_point: usize,
    pub orbit_size: usize,
}

impl ProductDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.factors.iter().map(CyclicSetSpec::size).collect()
    }

    pub fn blocks(&self) -> Vec<Vec<Permutation>> {
        self.factors.iter().map(CyclicSetSpec::powers).collect()
    }
}

/// Result of [`build_mls`].
#[derive(Clone, Debug)]
pub struct MlsOutcome {
    pub ls: LogSignature,
    /// Whether the length meets `sum a_j p_j`.
    pub minimal: bool,
}

/// Solvable groups go through the composition series; everything else
/// through the stabilizer chain followed by refinement.
pub fn build_mls(chain: &StabilizerChain, opts: &RefineOptions) -> Result<MlsOutcome> {
    let ls = if is_solvable(chain) {
        mls_solvable(chain)?
    } else {
        refine_ls(&chain_ls(chain), chain, opts)?
    };
    let minimal = is_minimal(&ls, &factor_integer(chain.order()))?;
    Ok(MlsOutcome { ls, minimal })
}

/// Prime multiset of `n`, ascending.
pub(crate) fn prime_multiset(n: usize) -> Vec<usize> {
    factor_integer(&BigUint::from(n))
        .prime_multiset()
        .iter()
        .map(|p| p.to_usize().unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_set_spec_bounds() {
        let x = Permutation::parse_cycles("(1,2,3,4)", 4).unwrap();
        assert!(CyclicSetSpec::new(x.clone(), 0).is_err());
        assert!(CyclicSetSpec::new(x.clone(), 5).is_err());
        let s = CyclicSetSpec::new(x.clone(), 3).unwrap();
        assert_eq!(s.powers(), vec![Permutation::identity(4), x.clone(), x.pow(2)]);
    }

    #[test]
    fn prime_multisets() {
        assert_eq!(prime_multiset(1), Vec::<usize>::new());
        assert_eq!(prime_multiset(12), vec![2, 2, 3]);
        assert_eq!(prime_multiset(11), vec![11]);
    }
}
