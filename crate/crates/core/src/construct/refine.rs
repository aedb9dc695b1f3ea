//! Refinement of transversal blocks into products of cyclic sets.
//!
//! A level with base point `w` and orbit of size `L = q_1 * ... * q_m` is
//! refined by finding elements `x_1, ..., x_m` of the level group such that
//! `x_1^(j_1) * ... * x_m^(j_m)`, `0 <= j_t < q_t`, sends `w` to every orbit
//! point exactly once. The blocks `[x_t^0, ..., x_t^(q_t - 1)]` then replace
//! the transversal and contribute `sum q_t` instead of `L` to the length.
//!
//! The search first looks for a single element whose cycle through `w` has
//! length `L` (the whole transversal is then one cyclic set, split by
//! mixed-radix weights). Otherwise it backtracks over tuples, placing the
//! innermost factor `x_m` first: after placing `x_m, ..., x_t` the set of
//! reached points is `x_t^(<q_t)( ... x_m^(<q_m)(w))`, and each new factor
//! must map that set onto `q_t` pairwise disjoint copies. Feasibility of the
//! remaining factors depends only on the reached set, so failed sets are
//! memoized per depth.
//!
//! Candidates are level-group elements in index order whose order is
//! divisible by the factor size; tuples are tried lexicographically in
//! `(x_m, x_(m-1), ..., x_1)` and the first success wins. Candidate lists
//! may be partitioned across workers as long as the reduction keeps this
//! order; the implementation here is sequential.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{prime_multiset, CyclicSetSpec, ProductDecomposition};
use crate::error::{Error, Result};
use crate::logsig::{BlockAnnotation, BlockRole, LogSignature, Provenance, ProvenanceTag};
use crate::permcore::{Permutation, StabilizerChain};

#[derive(Clone, Debug)]
pub struct RefineOptions {
    /// Level-group elements scanned for candidates (in index order).
    pub candidate_cap: usize,
    /// Placements tried per search before giving up.
    pub step_cap: u64,
    /// Orderings of a block's prime multiset tried before the block is
    /// left unrefined; the ascending ordering comes first.
    pub max_orderings: usize,
    /// Draw `candidate_cap` uniformly random level-group elements from this
    /// seed instead of taking the first ones in index order. Index order
    /// starts inside the point stabilizer, so large levels need this.
    pub seed: Option<u64>,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            candidate_cap: 500_000,
            step_cap: 20_000_000,
            max_orderings: 24,
            seed: None,
        }
    }
}

/// Searches the level-`level` group of `chain` for cyclic sets of sizes
/// `targets` (in that order) whose product set is a transversal of the next
/// level. `Ok(None)` means nothing was found within the caps.
pub fn refine_block(
    chain: &StabilizerChain,
    level: usize,
    targets: &[usize],
    opts: &RefineOptions,
) -> Result<Option<ProductDecomposition>> {
    let lvl = chain.levels().get(level).ok_or_else(|| {
        Error::InvalidLs(format!("chain has no level {level}"))
    })?;
    let orbit_len = lvl.orbit_len();
    let w = lvl.base_point();
    let product: usize = targets.iter().product();
    if product != orbit_len || targets.contains(&0) {
        return Err(Error::SizeMismatch {
            product: BigUint::from(product),
            expected: BigUint::from(orbit_len),
        });
    }
    let decomposition = |factors: Vec<CyclicSetSpec>| ProductDecomposition {
        factors,
        level,
        base_point: w,
        orbit_size: orbit_len,
    };

    let sub = chain.subchain(level);
    let pool: Vec<Permutation> = match opts.seed {
        None => sub.elements().take(opts.candidate_cap).collect(),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..opts.candidate_cap).map(|_| sub.random_element(&mut rng)).collect()
        }
    };

    // single cyclic transversal
    if let Some(x) = pool.iter().find(|x| x.cycle_length_of(w) == orbit_len) {
        let mut weight = 1i64;
        let mut factors = Vec::with_capacity(targets.len());
        for &q in targets {
            factors.push(CyclicSetSpec::new(x.pow(weight), q)?);
            weight *= q as i64;
        }
        return Ok(Some(decomposition(factors)));
    }
    if targets.len() == 1 {
        return Ok(None);
    }

    let candidates: Vec<Vec<&Permutation>> = targets
        .iter()
        .map(|&q| pool.iter().filter(|x| divides_order(x, q)).collect())
        .collect();
    let mut search = TupleSearch {
        targets,
        candidates: &candidates,
        degree: chain.degree(),
        steps: 0,
        step_cap: opts.step_cap,
        failed: vec![HashSet::new(); targets.len()],
        chosen: vec![None; targets.len()],
    };
    if search.place(targets.len(), vec![w]) != Some(true) {
        return Ok(None);
    }
    let factors = search
        .chosen
        .iter()
        .zip(targets)
        .map(|(x, &q)| CyclicSetSpec::new((*x.unwrap()).clone(), q))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(decomposition(factors)))
}

fn divides_order(x: &Permutation, q: usize) -> bool {
    if q == 1 {
        return true;
    }
    if prime_multiset(q).len() == 1 {
        x.order_divisible_by(q)
    } else {
        (x.order() % BigUint::from(q)) == BigUint::from(0u32)
    }
}

struct TupleSearch<'a> {
    targets: &'a [usize],
    candidates: &'a [Vec<&'a Permutation>],
    degree: usize,
    steps: u64,
    step_cap: u64,
    failed: Vec<HashSet<Vec<u64>>>,
    chosen: Vec<Option<&'a Permutation>>,
}

impl<'a> TupleSearch<'a> {
    /// Places factors `remaining - 1, ..., 0`. `None` when the step cap is
    /// exhausted.
    fn place(&mut self, remaining: usize, reached: Vec<usize>) -> Option<bool> {
        if remaining == 0 {
            return Some(true);
        }
        let t = remaining - 1;
        let key = bitset(&reached, self.degree);
        if self.failed[t].contains(&key) {
            return Some(false);
        }
        let q = self.targets[t];
        let candidates = self.candidates;
        let mut mark = vec![false; self.degree];
        for &x in &candidates[t] {
            self.steps += 1;
            if self.steps > self.step_cap {
                return None;
            }
            if let Some(next) = spread(x, q, &reached, &mut mark) {
                self.chosen[t] = Some(x);
                match self.place(t, next)? {
                    true => return Some(true),
                    false => continue,
                }
            }
        }
        self.chosen[t] = None;
        self.failed[t].insert(key);
        Some(false)
    }
}

/// `{x^j(y) : y in reached, 0 <= j < q}` if these points are pairwise
/// distinct.
fn spread(x: &Permutation, q: usize, reached: &[usize], mark: &mut [bool]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(reached.len() * q);
    let mut ok = true;
    'outer: for &y in reached {
        let mut z = y;
        for _ in 0..q {
            if mark[z] {
                ok = false;
                break 'outer;
            }
            mark[z] = true;
            out.push(z);
            z = x.apply(z);
        }
    }
    for &z in &out {
        mark[z] = false;
    }
    ok.then_some(out)
}

fn bitset(points: &[usize], degree: usize) -> Vec<u64> {
    let mut bits = vec![0u64; degree.div_ceil(64)];
    for &p in points {
        bits[p / 64] |= 1 << (p % 64);
    }
    bits
}

/// Distinct orderings of a multiset in lexicographic order, starting from
/// the ascending one.
fn orderings(mut items: Vec<usize>, limit: usize) -> Vec<Vec<usize>> {
    items.sort_unstable();
    let mut out = vec![items.clone()];
    while out.len() < limit {
        // next permutation
        let n = items.len();
        let Some(i) = (1..n).rev().find(|&i| items[i - 1] < items[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| items[j] > items[i - 1]).unwrap();
        items.swap(i - 1, j);
        items[i..].reverse();
        out.push(items.clone());
    }
    out
}

/// `chain` rebuilt so that its base matches the annotated base points of
/// `ls`.
pub(crate) fn aligned_chain(ls: &LogSignature, chain: &StabilizerChain) -> Result<StabilizerChain> {
    let hint: Vec<usize> = ls.level_groups().iter().map(|g| g.1).collect();
    let aligned = if chain.base() == hint {
        chain.clone()
    } else {
        StabilizerChain::from_generators(chain.degree(), chain.generators(), &hint)
    };
    if aligned.base() != hint {
        return Err(Error::InvalidLs(
            "signature levels do not match the group's stabilizer chain".into(),
        ));
    }
    Ok(aligned)
}

/// Refines every composite block of a chain signature.
///
/// Blocks whose size is prime (or 4, where `2 + 2 = 4`) already contribute
/// their minimal amount and are kept. Other blocks are split with
/// [`refine_block`], trying the ascending prime ordering first; blocks that
/// cannot be split stay as they are with role `unrefined`.
pub fn refine_ls(ls: &LogSignature, chain: &StabilizerChain, opts: &RefineOptions) -> Result<LogSignature> {
    if ls.provenance().tag != ProvenanceTag::Chain {
        return Err(Error::MissingProvenance);
    }
    let groups = ls.level_groups();
    let aligned = aligned_chain(ls, chain)?;

    let mut blocks = Vec::new();
    let mut annotations = Vec::new();
    for (level, base_point, orbit_size, range) in groups {
        let annotate = |role| BlockAnnotation {
            level,
            base_point,
            orbit_size,
            role,
        };
        let originals = &ls.blocks()[range.clone()];
        let size: usize = originals.iter().map(Vec::len).product();
        let primes = prime_multiset(size);
        let composite_gain = primes.iter().sum::<usize>() < size;
        if !composite_gain || range.len() != 1 {
            for (b, a) in originals.iter().zip(&ls.provenance().annotations[range.clone()]) {
                blocks.push(b.clone());
                annotations.push(a.clone());
            }
            continue;
        }
        let mut found = None;
        for targets in orderings(primes, opts.max_orderings) {
            if let Some(d) = refine_block(&aligned, level, &targets, opts)? {
                found = Some(d);
                break;
            }
        }
        match found {
            Some(d) => {
                for b in d.blocks() {
                    blocks.push(b);
                    annotations.push(annotate(BlockRole::Cyclic));
                }
            }
            None => {
                blocks.push(originals[0].clone());
                annotations.push(annotate(BlockRole::Unrefined));
            }
        }
    }
    LogSignature::new(
        ls.degree(),
        blocks,
        Provenance {
            tag: ProvenanceTag::Refined,
            annotations,
        },
        ls.group().map(str::to_string),
    )
}
