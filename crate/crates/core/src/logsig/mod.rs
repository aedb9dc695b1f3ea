//! Logarithmic signatures: ordered blocks `[A_1, ..., A_s]` of group elements
//! such that every element of `G` is a unique product `a_1 * a_2 * ... * a_s`
//! with `a_i` taken from `A_i`.
//!
//! Products use the crate-wide convention `(g * h)(x) = g(h(x))`: block `A_s`
//! acts first. Under the mirrored convention the same factorization reads
//! with the blocks in reverse order.

mod io;
mod verify;

pub(crate) use verify::{ordinal_digits, product_of};

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::permcore::{Permutation, PrimeFactorization};

pub use io::{read_ls, write_ls};
pub(crate) use io::{read_ls_value, write_ls_indented};
pub use verify::{
    verify_exhaustive, verify_exhaustive_with_budget, verify_structural, Method, Verdict,
    VerificationReport, Witness, DEFAULT_BUDGET,
};

/// How a signature was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProvenanceTag {
    Chain,
    Refined,
    Solvable,
    Cyclic,
    Manual,
}

impl ProvenanceTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ProvenanceTag::Chain => "chain",
            ProvenanceTag::Refined => "refined",
            ProvenanceTag::Solvable => "solvable",
            ProvenanceTag::Cyclic => "cyclic",
            ProvenanceTag::Manual => "manual",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "chain" => ProvenanceTag::Chain,
            "refined" => ProvenanceTag::Refined,
            "solvable" => ProvenanceTag::Solvable,
            "cyclic" => ProvenanceTag::Cyclic,
            "manual" => ProvenanceTag::Manual,
            _ => return None,
        })
    }

    /// Chain and refined signatures carry one annotation per block.
    pub fn is_transversal(self) -> bool {
        matches!(self, ProvenanceTag::Chain | ProvenanceTag::Refined)
    }
}

/// What a block is with respect to its stabilizer level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockRole {
    /// A full transversal of the next level group.
    Transversal,
    /// One cyclic factor `[x^0, ..., x^(q-1)]` of a refined transversal.
    Cyclic,
    /// A composite transversal that refinement could not split.
    Unrefined,
}

impl BlockRole {
    pub fn as_str(self) -> &'static str {
        match self {
            BlockRole::Transversal => "transversal",
            BlockRole::Cyclic => "cyclic",
            BlockRole::Unrefined => "unrefined",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "transversal" => BlockRole::Transversal,
            "cyclic" => BlockRole::Cyclic,
            "unrefined" => BlockRole::Unrefined,
            _ => return None,
        })
    }
}

/// Stabilizer level a block belongs to. Consecutive blocks with the same
/// level multiply to a transversal of that level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockAnnotation {
    pub level: usize,
    /// 0-based base point of the level.
    pub base_point: usize,
    pub orbit_size: usize,
    pub role: BlockRole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub tag: ProvenanceTag,
    pub annotations: Vec<BlockAnnotation>,
}

impl Provenance {
    pub fn plain(tag: ProvenanceTag) -> Self {
        Provenance {
            tag,
            annotations: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogSignature {
    degree: usize,
    group: Option<String>,
    provenance: Provenance,
    blocks: Vec<Vec<Permutation>>,
}

impl LogSignature {
    /// Checks the structural invariants: nonempty blocks, a common degree,
    /// pairwise distinct entries within each block, and one annotation per
    /// block for chain/refined provenance.
    pub fn new(
        degree: usize,
        blocks: Vec<Vec<Permutation>>,
        provenance: Provenance,
        group: Option<String>,
    ) -> Result<Self> {
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidLs(format!("block {i} is empty")));
            }
            let mut seen = HashSet::with_capacity(block.len());
            for (j, e) in block.iter().enumerate() {
                if e.degree() != degree {
                    return Err(Error::InvalidLs(format!(
                        "block {i} entry {j} has degree {}, expected {degree}",
                        e.degree()
                    )));
                }
                if !seen.insert(e) {
                    return Err(Error::InvalidLs(format!("block {i} entry {j} is repeated")));
                }
            }
        }
        let annotated = !provenance.annotations.is_empty();
        if annotated && provenance.annotations.len() != blocks.len() {
            return Err(Error::InvalidLs(format!(
                "{} annotations for {} blocks",
                provenance.annotations.len(),
                blocks.len()
            )));
        }
        if annotated && !provenance.tag.is_transversal() {
            return Err(Error::InvalidLs(format!(
                "`{}` signatures carry no level annotations",
                provenance.tag.as_str()
            )));
        }
        if provenance.tag.is_transversal() && !annotated && !blocks.is_empty() {
            return Err(Error::MissingProvenance);
        }
        Ok(LogSignature {
            degree,
            group,
            provenance,
            blocks,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> Option<&str> {
        self.group.as_deref()
    }

    pub fn with_group(mut self, group: Option<String>) -> Self {
        self.group = group;
        self
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn blocks(&self) -> &[Vec<Permutation>] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Vec<Permutation>> {
        self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// `l(alpha) = sum r_i`.
    pub fn length(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// `prod r_i`, the number of products.
    pub fn size_product(&self) -> BigUint {
        self.blocks.iter().map(|b| BigUint::from(b.len())).product()
    }

    /// Annotated levels as `(level, base point, orbit size, block range)`.
    pub(crate) fn level_groups(&self) -> Vec<(usize, usize, usize, std::ops::Range<usize>)> {
        let ann = &self.provenance.annotations;
        let mut out = Vec::new();
        let mut start = 0;
        while start < ann.len() {
            let mut end = start + 1;
            while end < ann.len() && ann[end].level == ann[start].level {
                end += 1;
            }
            out.push((ann[start].level, ann[start].base_point, ann[start].orbit_size, start..end));
            start = end;
        }
        out
    }
}

/// Digit tuple `[j_1, ..., j_s]` selecting entry `j_i` (0-based) of block `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorizationIndex {
    pub digits: Vec<usize>,
}

impl FactorizationIndex {
    pub fn new(digits: Vec<usize>) -> Self {
        FactorizationIndex { digits }
    }

    pub fn check(&self, ls: &LogSignature) -> Result<()> {
        if self.digits.len() != ls.blocks.len() {
            return Err(Error::DigitCount {
                expected: ls.blocks.len(),
                found: self.digits.len(),
            });
        }
        for (i, (&d, b)) in self.digits.iter().zip(&ls.blocks).enumerate() {
            if d >= b.len() {
                return Err(Error::DigitOutOfRange {
                    block: i,
                    digit: d,
                    size: b.len(),
                });
            }
        }
        Ok(())
    }
}

pub fn ls_length(ls: &LogSignature) -> usize {
    ls.length()
}

/// `sum a_j p_j` over `|G| = prod p_j^a_j`; every LS of `G` is at least
/// this long.
pub fn minimal_length(f: &PrimeFactorization) -> BigUint {
    f.weighted_sum()
}

/// Whether `ls` meets the lower bound. `f` must factor the block-size
/// product.
pub fn is_minimal(ls: &LogSignature, f: &PrimeFactorization) -> Result<bool> {
    let product = ls.size_product();
    if &product != f.value() {
        return Err(Error::SizeMismatch {
            product,
            expected: f.value().clone(),
        });
    }
    Ok(BigUint::from(ls.length()) == minimal_length(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::factor_integer;

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn invariants_are_enforced() {
        let id = Permutation::identity(3);
        let t = perm("(1,2)", 3);
        let manual = Provenance::plain(ProvenanceTag::Manual);
        assert!(LogSignature::new(3, vec![vec![]], manual.clone(), None).is_err());
        assert!(LogSignature::new(3, vec![vec![id.clone(), id.clone()]], manual.clone(), None).is_err());
        assert!(LogSignature::new(3, vec![vec![Permutation::identity(4)]], manual.clone(), None).is_err());
        assert_eq!(
            LogSignature::new(3, vec![vec![id.clone(), t.clone()]], Provenance::plain(ProvenanceTag::Chain), None),
            Err(Error::MissingProvenance)
        );
        let ls = LogSignature::new(3, vec![vec![id, t]], manual, None).unwrap();
        assert_eq!(ls.length(), 2);
        assert_eq!(ls.size_product(), BigUint::from(2u32));
    }

    #[test]
    fn minimal_lengths() {
        assert_eq!(minimal_length(&factor_integer(&BigUint::from(2u32))), BigUint::from(2u32));
        assert_eq!(minimal_length(&factor_integer(&BigUint::from(7920u32))), BigUint::from(30u32));
        let co1: BigUint = "4157776806543360000".parse().unwrap();
        assert_eq!(minimal_length(&factor_integer(&co1)), BigUint::from(150u32));
    }

    #[test]
    fn minimality_against_order() {
        let empty = LogSignature::new(0, vec![], Provenance::plain(ProvenanceTag::Chain), None).unwrap();
        assert!(is_minimal(&empty, &factor_integer(&BigUint::from(1u32))).unwrap());
        let id = Permutation::identity(2);
        let ls = LogSignature::new(2, vec![vec![id, perm("(1,2)", 2)]], Provenance::plain(ProvenanceTag::Manual), None)
            .unwrap();
        assert!(is_minimal(&ls, &factor_integer(&BigUint::from(2u32))).unwrap());
        assert!(is_minimal(&ls, &factor_integer(&BigUint::from(3u32))).is_err());
    }

    #[test]
    fn digit_bounds() {
        let ls = LogSignature::new(
            2,
            vec![vec![Permutation::identity(2), perm("(1,2)", 2)]],
            Provenance::plain(ProvenanceTag::Manual),
            None,
        )
        .unwrap();
        assert!(FactorizationIndex::new(vec![1]).check(&ls).is_ok());
        assert!(FactorizationIndex::new(vec![2]).check(&ls).is_err());
        assert!(FactorizationIndex::new(vec![0, 0]).check(&ls).is_err());
    }
}
