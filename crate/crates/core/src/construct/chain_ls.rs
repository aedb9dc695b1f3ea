use crate::error::{Error, Result};
use crate::logsig::{BlockAnnotation, BlockRole, LogSignature, Provenance, ProvenanceTag};
use crate::permcore::{Permutation, StabilizerChain};

use num_bigint::BigUint;

/// One transversal block per stabilizer level, identity first and the other
/// representatives by increasing image of the base point.
///
/// The block-`i` digit of `g` is determined by where the remaining factor
/// sends `b_i`, so every element factors uniquely.
pub fn chain_ls(chain: &StabilizerChain) -> LogSignature {
    let blocks: Vec<Vec<Permutation>> = chain.levels().iter().map(|l| l.transversal()).collect();
    let annotations = chain
        .levels()
        .iter()
        .enumerate()
        .map(|(i, l)| BlockAnnotation {
            level: i,
            base_point: l.base_point(),
            orbit_size: l.orbit_len(),
            role: BlockRole::Transversal,
        })
        .collect();
    LogSignature::new(
        chain.degree(),
        blocks,
        Provenance {
            tag: ProvenanceTag::Chain,
            annotations,
        },
        None,
    )
    .expect("chain transversals form a valid signature")
}

/// Whether the product set `A_1 * ... * A_n` of `factors` sends `w` to every
/// point of its orbit under the level-`level` group exactly once.
///
/// All entries must lie in the level group and the product of the factor
/// sizes must equal the orbit size.
pub fn sharply_transitive_check(
    factors: &[Vec<Permutation>],
    chain: &StabilizerChain,
    level: usize,
    w: usize,
) -> Result<bool> {
    for (i, f) in factors.iter().enumerate() {
        for (j, e) in f.iter().enumerate() {
            if !chain.contains_from(level, e) {
                return Err(Error::NonMemberEntry { block: i, entry: j });
            }
        }
    }
    let orbit = level_orbit(chain, level, w);
    let size: usize = factors.iter().map(Vec::len).product();
    if size != orbit.len() {
        return Err(Error::SizeMismatch {
            product: BigUint::from(size),
            expected: BigUint::from(orbit.len()),
        });
    }
    let mut hit = vec![false; chain.degree()];
    let mut images = vec![w];
    for f in factors.iter().rev() {
        let mut next = Vec::with_capacity(images.len() * f.len());
        for e in f {
            for &y in &images {
                let z = e.apply(y);
                next.push(z);
            }
        }
        images = next;
    }
    for y in images {
        if hit[y] {
            return Ok(false);
        }
        hit[y] = true;
    }
    Ok(true)
}

/// Orbit of `w` under the level-`level` group.
pub(crate) fn level_orbit(chain: &StabilizerChain, level: usize, w: usize) -> Vec<usize> {
    let gens: &[Permutation] = chain
        .levels()
        .get(level)
        .map(|l| l.generators())
        .unwrap_or(&[]);
    let mut seen = vec![false; chain.degree()];
    seen[w] = true;
    let mut orbit = vec![w];
    let mut head = 0;
    while head < orbit.len() {
        let x = orbit[head];
        head += 1;
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
            }
        }
    }
    orbit
}
