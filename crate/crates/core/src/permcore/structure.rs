//! Normal closures, derived subgroups and solvability.

use super::chain::StabilizerChain;
use super::perm::Permutation;

/// Normal closure of `elems` in the group of `chain`.
pub fn normal_closure(chain: &StabilizerChain, elems: &[Permutation]) -> StabilizerChain {
    let degree = chain.degree();
    let mut gens: Vec<Permutation> = Vec::new();
    for e in elems {
        if !e.is_identity() && !gens.contains(e) {
            gens.push(e.clone());
        }
    }
    let mut closure = StabilizerChain::from_generators(degree, &gens, &chain.base());
    let mut next = 0;
    while next < gens.len() {
        let n = gens[next].clone();
        next += 1;
        for g in chain.generators() {
            let conj = &(g * &n) * &g.inverse();
            if !closure.contains_from(0, &conj) {
                gens.push(conj);
                closure = StabilizerChain::from_generators(degree, &gens, &closure.base());
            }
        }
    }
    closure
}

/// `[a, b] = a^-1 b^-1 a b`.
pub fn commutator(a: &Permutation, b: &Permutation) -> Permutation {
    &(&a.inverse() * &b.inverse()) * &(a * b)
}

/// Normal closure of the commutators of generator pairs.
pub fn derived_subgroup(chain: &StabilizerChain) -> StabilizerChain {
    let gens = chain.generators();
    let mut comms = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = commutator(a, b);
            if !c.is_identity() && !comms.contains(&c) {
                comms.push(c);
            }
        }
    }
    normal_closure(chain, &comms)
}

/// `G = G^(0) > G^(1) > ...` until the series stabilizes; the last entry is
/// the perfect residuum (trivial iff `G` is solvable).
pub fn derived_series(chain: &StabilizerChain) -> Vec<StabilizerChain> {
    let mut series = vec![chain.clone()];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            break;
        }
        let next = derived_subgroup(last);
        if next.order() == last.order() {
            break;
        }
        series.push(next);
    }
    series
}

pub fn is_solvable(chain: &StabilizerChain) -> bool {
    derived_series(chain).last().unwrap().is_trivial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::chain::GeneratorSet;
    use num_bigint::BigUint;

    fn chain(n: usize, cycles: &[&str]) -> StabilizerChain {
        let g = cycles
            .iter()
            .map(|c| Permutation::parse_cycles(c, n).unwrap())
            .collect();
        StabilizerChain::build(&GeneratorSet::new(n, g, None).unwrap(), &[])
    }

    fn orders(series: &[StabilizerChain]) -> Vec<BigUint> {
        series.iter().map(|c| c.order().clone()).collect()
    }

    #[test]
    fn s4_series() {
        let s4 = chain(4, &["(1,2,3,4)", "(1,2)"]);
        let d = derived_subgroup(&s4);
        assert_eq!(d.order(), &BigUint::from(12u32));
        let series = derived_series(&s4);
        let expected: Vec<BigUint> = [24u32, 12, 4, 1].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(orders(&series), expected);
        assert!(is_solvable(&s4));
    }

    #[test]
    fn a5_is_perfect() {
        let a5 = chain(5, &["(1,2,3)", "(1,2,3,4,5)"]);
        assert_eq!(derived_subgroup(&a5).order(), &BigUint::from(60u32));
        assert!(!is_solvable(&a5));
    }

    #[test]
    fn cyclic_and_trivial() {
        assert!(is_solvable(&chain(12, &["(1,2,3,4,5,6,7,8,9,10,11,12)"])));
        assert!(derived_subgroup(&chain(12, &["(1,2,3,4,5,6,7,8,9,10,11,12)"])).is_trivial());
        assert!(is_solvable(&chain(3, &["()"])));
    }

    #[test]
    fn normal_closure_of_transposition_in_s5() {
        let s5 = chain(5, &["(1,2,3,4,5)", "(1,2)"]);
        let t = Permutation::parse_cycles("(1,2)", 5).unwrap();
        assert_eq!(normal_closure(&s5, &[t]).order(), &BigUint::from(120u32));
        let c = Permutation::parse_cycles("(1,2,3)", 5).unwrap();
        assert_eq!(normal_closure(&s5, &[c]).order(), &BigUint::from(60u32));
    }

    #[test]
    fn series_strictly_decreases_for_solvable() {
        let sl23 = chain(8, &["(1,4,7)(2,8,5)", "(1,6,2,3)(4,7,8,5)"]);
        let series = derived_series(&sl23);
        assert!(series.last().unwrap().is_trivial());
        for w in series.windows(2) {
            assert!(w[1].order() < w[0].order());
        }
        let expected: Vec<BigUint> = [24u32, 8, 2, 1].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(orders(&series), expected);
    }
}
