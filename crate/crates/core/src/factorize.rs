//! Recovering the digits `[j_1, ..., j_s]` of `g = a_(1,j_1) * ... * a_(s,j_s)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::logsig::{ordinal_digits, product_of, FactorizationIndex, LogSignature, DEFAULT_BUDGET};
use crate::permcore::Permutation;

/// Largest half stored by [`factorize_generic`].
pub const GENERIC_HALF_CAP: u64 = 100_000;

struct LevelTable {
    base_point: usize,
    blocks: std::ops::Range<usize>,
    /// Indexed by the image of the base point.
    entries: Vec<Option<(Vec<usize>, Permutation)>>,
}

/// Per-level lookup from a base-point image to the block digits of a chain
/// or refined signature.
pub struct TameIndexer {
    ls: LogSignature,
    levels: Vec<LevelTable>,
}

impl TameIndexer {
    /// Expands every level's product set once. Fails with `CorruptedLs` if
    /// two products send the base point to the same place or the images do
    /// not match the annotated orbit size.
    pub fn new(ls: &LogSignature) -> Result<TameIndexer> {
        if !ls.provenance().tag.is_transversal() || ls.provenance().annotations.len() != ls.blocks().len() {
            return Err(Error::MissingProvenance);
        }
        let n = ls.degree();
        let mut levels = Vec::new();
        for (_, base_point, orbit_size, range) in ls.level_groups() {
            let blocks = &ls.blocks()[range.clone()];
            let radices: Vec<usize> = blocks.iter().map(Vec::len).collect();
            let count: usize = radices.iter().product();
            if count != orbit_size {
                return Err(Error::CorruptedLs);
            }
            let mut entries = vec![None; n];
            for ordinal in 0..count as u64 {
                let digits = ordinal_digits(ordinal, &radices);
                let p = product_of(blocks, &digits, n);
                let slot = &mut entries[p.apply(base_point)];
                if slot.is_some() {
                    return Err(Error::CorruptedLs);
                }
                *slot = Some((digits, p));
            }
            levels.push(LevelTable {
                base_point,
                blocks: range,
                entries,
            });
        }
        Ok(TameIndexer { ls: ls.clone(), levels })
    }

    pub fn ls(&self) -> &LogSignature {
        &self.ls
    }
}

/// Reads each level's digits off the current image of its base point and
/// strips the chosen product, `O(k n)` per element.
pub fn factorize_tame(g: &Permutation, indexer: &TameIndexer) -> Result<FactorizationIndex> {
    if g.degree() != indexer.ls.degree() {
        return Err(Error::DegreeMismatch {
            expected: indexer.ls.degree(),
            found: g.degree(),
        });
    }
    let mut digits = vec![0; indexer.ls.blocks().len()];
    let mut rest = g.clone();
    for level in &indexer.levels {
        let (d, p) = level.entries[rest.apply(level.base_point)]
            .as_ref()
            .ok_or(Error::NotMember)?;
        digits[level.blocks.clone()].copy_from_slice(d);
        rest = p.inv_mul(&rest);
    }
    if !rest.is_identity() {
        return Err(Error::NotMember);
    }
    Ok(FactorizationIndex::new(digits))
}

/// Meet in the middle over the most balanced split of the blocks; the
/// smaller half is stored. Works for any signature with at most
/// `DEFAULT_BUDGET` products.
pub fn factorize_generic(g: &Permutation, ls: &LogSignature) -> Result<FactorizationIndex> {
    factorize_generic_with_budget(g, ls, DEFAULT_BUDGET)
}

pub fn factorize_generic_with_budget(g: &Permutation, ls: &LogSignature, budget: u64) -> Result<FactorizationIndex> {
    let n = ls.degree();
    if g.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, found: g.degree() });
    }
    let radices: Vec<usize> = ls.blocks().iter().map(Vec::len).collect();
    let total = ls.size_product();
    let exceeded = |products| Error::BudgetExceeded { products, budget };
    let total_u64 = u64::try_from(&total).map_err(|_| exceeded(total.clone()))?;
    if total_u64 > budget {
        return Err(exceeded(total));
    }
    // split k minimizing the larger half
    let s = radices.len();
    let mut prefix = vec![1u64; s + 1];
    for i in 0..s {
        prefix[i + 1] = prefix[i] * radices[i] as u64;
    }
    let k = (0..=s)
        .min_by_key(|&k| prefix[k].max(total_u64 / prefix[k]))
        .unwrap();
    let (left, right) = ls.blocks().split_at(k);
    let (lr, rr) = radices.split_at(k);
    let (left_count, right_count) = (prefix[k], total_u64 / prefix[k]);
    if left_count.min(right_count) > GENERIC_HALF_CAP {
        return Err(exceeded(total));
    }

    // g = L * R
    let mut found: Option<Vec<usize>> = None;
    let mut record = |l: Vec<usize>, r: Vec<usize>| -> Result<()> {
        if found.is_some() {
            return Err(Error::CorruptedLs);
        }
        found = Some([l, r].concat());
        Ok(())
    };
    if left_count <= right_count {
        let table = half_table(left, lr, n)?;
        for o in 0..right_count {
            let rd = ordinal_digits(o, rr);
            let r = product_of(right, &rd, n);
            let l = g.mul_unchecked(&r.inverse());
            if let Some(&lo) = table.get(&l) {
                record(ordinal_digits(lo, lr), rd)?;
            }
        }
    } else {
        let table = half_table(right, rr, n)?;
        for o in 0..left_count {
            let ld = ordinal_digits(o, lr);
            let l = product_of(left, &ld, n);
            let r = l.inv_mul(g);
            if let Some(&ro) = table.get(&r) {
                record(ld, ordinal_digits(ro, rr))?;
            }
        }
    }
    found.map(FactorizationIndex::new).ok_or(Error::NotMember)
}

fn half_table(blocks: &[Vec<Permutation>], radices: &[usize], n: usize) -> Result<HashMap<Permutation, u64>> {
    let count: u64 = radices.iter().map(|&r| r as u64).product();
    let mut table = HashMap::with_capacity(count as usize);
    for o in 0..count {
        let p = product_of(blocks, &ordinal_digits(o, radices), n);
        if table.insert(p, o).is_some() {
            return Err(Error::CorruptedLs);
        }
    }
    Ok(table)
}

/// `a_(1,j_1) * ... * a_(s,j_s)`, leftmost block outermost.
pub fn reconstruct(ls: &LogSignature, index: &FactorizationIndex) -> Result<Permutation> {
    index.check(ls)?;
    Ok(product_of(ls.blocks(), &index.digits, ls.degree()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{chain_ls, mls_solvable};
    use crate::permcore::{GeneratorSet, StabilizerChain};

    fn chain(n: usize, cycles: &[&str]) -> StabilizerChain {
        let g = cycles.iter().map(|c| Permutation::parse_cycles(c, n).unwrap()).collect();
        StabilizerChain::build(&GeneratorSet::new(n, g, None).unwrap(), &[])
    }

    #[test]
    fn c2_generic() {
        let c2 = chain(2, &["(1,2)"]);
        let ls = mls_solvable(&c2).unwrap();
        let t = Permutation::parse_cycles("(1,2)", 2).unwrap();
        assert_eq!(factorize_generic(&t, &ls).unwrap().digits, vec![1]);
    }

    #[test]
    fn identity_and_block_entries() {
        let a5 = chain(5, &["(1,2,3)", "(1,2,3,4,5)"]);
        let ls = chain_ls(&a5);
        let ix = TameIndexer::new(&ls).unwrap();
        assert_eq!(factorize_tame(&Permutation::identity(5), &ix).unwrap().digits, vec![0, 0, 0]);
        for (j, e) in ls.blocks()[0].iter().enumerate() {
            assert_eq!(factorize_tame(e, &ix).unwrap().digits, vec![j, 0, 0]);
        }
        let odd = Permutation::parse_cycles("(1,2)", 5).unwrap();
        assert_eq!(factorize_tame(&odd, &ix), Err(Error::NotMember));
        assert_eq!(factorize_generic(&odd, &ls), Err(Error::NotMember));
    }

    #[test]
    fn s4_all_elements() {
        let s4 = chain(4, &["(1,2,3,4)", "(1,2)"]);
        let ls = mls_solvable(&s4).unwrap();
        let mut seen = std::collections::HashSet::new();
        for g in s4.elements() {
            let d = factorize_generic(&g, &ls).unwrap();
            assert_eq!(reconstruct(&ls, &d).unwrap(), g);
            assert!(seen.insert(d));
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn tame_needs_annotations() {
        let s4 = chain(4, &["(1,2,3,4)", "(1,2)"]);
        assert!(matches!(
            TameIndexer::new(&mls_solvable(&s4).unwrap()),
            Err(Error::MissingProvenance)
        ));
    }

    #[test]
    fn generic_budget() {
        let s4 = chain(4, &["(1,2,3,4)", "(1,2)"]);
        let ls = chain_ls(&s4);
        assert!(matches!(
            factorize_generic_with_budget(&Permutation::identity(4), &ls, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn reconstruct_checks_digits() {
        let s4 = chain(4, &["(1,2,3,4)", "(1,2)"]);
        let ls = chain_ls(&s4);
        assert!(reconstruct(&ls, &FactorizationIndex::new(vec![0, 0])).is_err());
        assert!(reconstruct(&ls, &FactorizationIndex::new(vec![4, 0, 0])).is_err());
        assert!(reconstruct(&ls, &FactorizationIndex::new(vec![0, 0, 0])).unwrap().is_identity());
    }
}
