use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{prime_multiset, CyclicSetSpec};
use crate::error::{Error, Result};
use crate::logsig::{LogSignature, Provenance, ProvenanceTag};
use crate::permcore::{derived_series, Permutation, StabilizerChain};

/// One step `G_(i-1) > G_i` of a composition series.
#[derive(Clone, Debug)]
pub struct SeriesStep {
    /// The smaller group `G_i`.
    pub subgroup: StabilizerChain,
    /// Prime index `|G_(i-1)| / |G_i|`.
    pub index: usize,
    /// Element of `G_(i-1)` whose powers `t^0..t^(q-1)` form a transversal
    /// of `G_i`.
    pub witness: Permutation,
}

/// `G = G_0 > G_1 > ... > G_m = 1` with prime indices, outermost first.
#[derive(Clone, Debug)]
pub struct CompositionSeries {
    pub group: StabilizerChain,
    pub steps: Vec<SeriesStep>,
}

impl CompositionSeries {
    pub fn indices(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.index).collect()
    }
}

/// Derived series refined to prime steps.
///
/// Each abelian layer `T / K` is built bottom-up from `K`: at every stage the
/// generator of `T` and prime `q` with the largest `q` (ties: earlier
/// generator) among the orders of generators modulo the current subgroup
/// `H` gives the next subgroup `<H, g^(m/q)>`. Read top-down, each layer
/// therefore lists its primes in ascending order. Every subgroup in between
/// contains `T'`, hence is normal in `T`.
pub fn composition_series_solvable(chain: &StabilizerChain) -> Result<CompositionSeries> {
    let series = derived_series(chain);
    if !series.last().unwrap().is_trivial() {
        return Err(Error::NotSolvable);
    }
    let mut steps = Vec::new();
    for pair in series.windows(2) {
        let (top, bottom) = (&pair[0], &pair[1]);
        let mut layer: Vec<SeriesStep> = Vec::new();
        let mut current = bottom.clone();
        while current.order() < top.order() {
            let mut best: Option<(usize, Permutation)> = None;
            for g in top.generators() {
                let m = order_modulo(g, &current);
                if m == 1 {
                    continue;
                }
                let q = *prime_multiset(m).last().unwrap();
                if best.as_ref().is_none_or(|(bq, _)| q > *bq) {
                    best = Some((q, g.pow((m / q) as i64)));
                }
            }
            let (q, t) = best.expect("generators of the top group escape the current subgroup");
            let mut gens = current.generators().to_vec();
            gens.push(t.clone());
            let next = StabilizerChain::from_generators(chain.degree(), &gens, &current.base());
            debug_assert_eq!(next.order(), &(current.order() * BigUint::from(q)));
            layer.push(SeriesStep {
                subgroup: current,
                index: q,
                witness: t,
            });
            current = next;
        }
        steps.extend(layer.into_iter().rev());
    }
    Ok(CompositionSeries {
        group: chain.clone(),
        steps,
    })
}

/// Least `m >= 1` with `g^m` in the group of `sub`.
fn order_modulo(g: &Permutation, sub: &StabilizerChain) -> usize {
    let order = g.order().to_usize().expect("element order fits in usize");
    let mut p = g.clone();
    for m in 1..order {
        if sub.contains_from(0, &p) {
            return m;
        }
        p = &p * g;
    }
    order
}

/// Blocks `[t_i^0, ..., t_i^(q_i - 1)]` for each series step, outermost
/// first; the length is `sum q_i`, which is minimal.
pub fn mls_solvable(chain: &StabilizerChain) -> Result<LogSignature> {
    let series = composition_series_solvable(chain)?;
    let blocks = series
        .steps
        .iter()
        .map(|s| CyclicSetSpec::new(s.witness.clone(), s.index).map(|c| c.powers()))
        .collect::<Result<Vec<_>>>()?;
    LogSignature::new(chain.degree(), blocks, Provenance::plain(ProvenanceTag::Solvable), None)
}
