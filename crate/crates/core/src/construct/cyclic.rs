use super::{prime_multiset, CyclicSetSpec};
use crate::error::Result;
use crate::logsig::{LogSignature, Provenance, ProvenanceTag};

/// Mixed-radix weights for a cyclic set of size `s`: pairs `(q_t, w_t)` with
/// primes ascending, `w_1 = 1` and `w_(t+1) = w_t * q_t`.
///
/// Every `0 <= i < s` is uniquely `sum j_t * w_t` with `0 <= j_t < q_t`, and
/// the largest such sum is `s - 1`.
pub fn cyclic_weights(s: usize) -> Vec<(usize, usize)> {
    let mut w = 1;
    prime_multiset(s)
        .into_iter()
        .map(|q| {
            let pair = (q, w);
            w *= q;
            pair
        })
        .collect()
}

/// Minimal signature of `{x^i : 0 <= i < s}`: block `t` is
/// `[x^(j * w_t) : 0 <= j < q_t]`.
pub fn mls_cyclic(spec: &CyclicSetSpec) -> Result<LogSignature> {
    let x = spec.generator();
    let blocks = cyclic_weights(spec.size())
        .into_iter()
        .map(|(q, w)| {
            let step = x.pow(w as i64);
            CyclicSetSpec::new(step, q).map(|c| c.powers())
        })
        .collect::<Result<Vec<_>>>()?;
    LogSignature::new(x.degree(), blocks, Provenance::plain(ProvenanceTag::Cyclic), None)
}
