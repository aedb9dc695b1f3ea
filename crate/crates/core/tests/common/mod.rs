//! Naive reference implementations shared by the integration tests. None of
//! these go through the library's group algorithms.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use mls_core::catalog::group_spec;
use mls_core::logsig::LogSignature;
use mls_core::permcore::{Permutation, StabilizerChain};

pub type Images = Vec<usize>;

pub fn images(p: &Permutation) -> Images {
    (0..p.degree()).map(|x| p.apply(x)).collect()
}

/// `(a b)(x) = a(b(x))`.
pub fn compose(a: &[usize], b: &[usize]) -> Images {
    b.iter().map(|&y| a[y]).collect()
}

/// Every element generated by `gens`, by breadth-first closure.
pub fn closure(degree: usize, gens: &[Permutation]) -> HashSet<Images> {
    let gens: Vec<Images> = gens.iter().map(images).collect();
    let id: Images = (0..degree).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in &gens {
            let h = compose(&g, s);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

/// All block products, last block fastest.
pub fn all_products(ls: &LogSignature) -> Vec<Images> {
    let id: Images = (0..ls.degree()).collect();
    let mut acc = vec![id];
    for block in ls.blocks() {
        let entries: Vec<Images> = block.iter().map(images).collect();
        acc = acc
            .iter()
            .flat_map(|p| entries.iter().map(move |e| compose(p, e)))
            .collect();
    }
    acc
}

pub fn prime_multiset(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `sum a_j p_j` by trial division.
pub fn weighted_prime_sum(n: u64) -> u64 {
    prime_multiset(n).iter().sum()
}

pub fn chain(name: &str) -> StabilizerChain {
    group_spec(name).unwrap().chain().unwrap()
}

pub fn perm(cycles: &str, degree: usize) -> Permutation {
    Permutation::parse_cycles(cycles, degree).unwrap()
}
