mod common;

use std::collections::HashSet;

use common::*;
use mls_core::construct::{chain_ls, mls_cyclic, mls_solvable, refine_ls, CyclicSetSpec, RefineOptions};
use mls_core::logsig::{
    is_minimal, ls_length, minimal_length, read_ls, verify_exhaustive, verify_exhaustive_with_budget,
    verify_structural, write_ls, LogSignature, Provenance, ProvenanceTag, Witness,
};
use mls_core::permcore::{factor_integer, Permutation, StabilizerChain};
use mls_core::Error;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Naive oracle: the products are pairwise distinct and as many as the
/// closure of the generators.
fn is_ls(ls: &LogSignature, chain: &StabilizerChain) -> bool {
    let products = all_products(ls);
    let distinct: HashSet<Images> = products.iter().cloned().collect();
    distinct.len() == products.len() && distinct == closure(chain.degree(), chain.generators())
}

#[test]
fn c2_passes() {
    let c2 = chain("C2");
    let ls = LogSignature::new(2, vec![vec![Permutation::identity(2), perm("(1,2)", 2)]], Provenance::plain(ProvenanceTag::Manual), None).unwrap();
    let r = verify_exhaustive(&ls, &c2).unwrap();
    assert!(r.passed());
    assert_eq!(r.products_checked, 2);
    assert_eq!(ls_length(&ls), 2);
}

#[test]
fn m12_chain_passes_exhaustively() {
    let m12 = chain("M12");
    let ls = chain_ls(&m12);
    let r = verify_exhaustive(&ls, &m12).unwrap();
    assert!(r.passed());
    assert_eq!(r.products_checked, 95040);
    assert_eq!(ls.length(), 50);
}

/// Replaces entry `j` of block `i` by `t_k * h`, `h` a nontrivial element of
/// the next level group: two entries now lie in the coset of `t_k`.
fn duplicate_coset(ls: &LogSignature, c: &StabilizerChain, i: usize, j: usize, k: usize) -> LogSignature {
    let h = c.levels()[i + 1].generators()[0].clone();
    assert!(!h.is_identity());
    let mut blocks = ls.blocks().to_vec();
    blocks[i][j] = &blocks[i][k] * &h;
    LogSignature::new(ls.degree(), blocks, ls.provenance().clone(), None).unwrap()
}

#[test]
fn duplicated_representative_collides() {
    let m11 = chain("M11");
    let ls = chain_ls(&m11);
    let bad = duplicate_coset(&ls, &m11, 0, 3, 5);
    let r = verify_exhaustive(&bad, &m11).unwrap();
    assert!(!r.passed());
    let Some(Witness::Collision { first, second, element }) = r.witness else { panic!("{r:?}") };
    assert!(first < second);
    let a = mls_core::factorize::reconstruct(&bad, &mls_core::logsig::FactorizationIndex::new(first.clone())).unwrap();
    let b = mls_core::factorize::reconstruct(&bad, &mls_core::logsig::FactorizationIndex::new(second)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, element);
    // the lexicographically first colliding tuple, found naively
    let products = all_products(&bad);
    let mut seen = HashSet::new();
    let dup = products.iter().position(|p| !seen.insert(p.clone())).unwrap();
    let radices = bad.block_sizes();
    let first_of_dup = products.iter().position(|p| p == &products[dup]).unwrap();
    let mut digits = vec![0; radices.len()];
    let mut o = first_of_dup;
    for (d, r) in digits.iter_mut().zip(&radices).rev() {
        *d = o % r;
        o /= r;
    }
    assert_eq!(first, digits);
    assert!(!verify_structural(&bad, &m11).unwrap().passed());
}

#[test]
fn size_mismatch_and_budget() {
    let a5 = chain("A5");
    let mut blocks = chain_ls(&a5).into_blocks();
    blocks[2].pop();
    let short = LogSignature::new(5, blocks, Provenance::plain(ProvenanceTag::Manual), None).unwrap();
    let r = verify_exhaustive(&short, &a5).unwrap();
    assert!(matches!(r.witness, Some(Witness::SizeMismatch { .. })));
    assert!(matches!(
        verify_exhaustive_with_budget(&chain_ls(&a5), &a5, 59),
        Err(Error::BudgetExceeded { .. })
    ));
    let m24 = chain("M24");
    assert!(matches!(verify_exhaustive(&chain_ls(&m24), &m24), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn non_member_entry_is_an_error() {
    let a5 = chain("A5");
    let mut blocks = chain_ls(&a5).into_blocks();
    blocks[0][1] = perm("(1,2)", 5);
    let ls = LogSignature::new(5, blocks, Provenance::plain(ProvenanceTag::Manual), None).unwrap();
    assert!(matches!(verify_exhaustive(&ls, &a5), Err(Error::NonMemberEntry { block: 0, entry: 1 })));
}

#[test]
fn structural_checks() {
    let m24 = chain("M24");
    let r = verify_structural(&chain_ls(&m24), &m24).unwrap();
    assert!(r.passed());

    // an entry with the right base-point image that is outside its level group
    let m11 = chain("M11");
    let ls = chain_ls(&m11);
    let mut blocks = ls.blocks().to_vec();
    let t = blocks[1][1].clone();
    let b2 = m11.base()[1];
    let s = m11
        .elements()
        .find(|g| g.apply(b2) == b2 && g.apply(m11.base()[0]) != m11.base()[0])
        .unwrap();
    blocks[1][1] = &t * &s;
    assert_eq!(blocks[1][1].apply(b2), t.apply(b2));
    let bad = LogSignature::new(11, blocks, ls.provenance().clone(), None).unwrap();
    let r = verify_structural(&bad, &m11).unwrap();
    assert!(matches!(r.witness, Some(Witness::Membership { block: 1, entry: 1, level: 1 })), "{r:?}");

    let trivial = StabilizerChain::from_generators(4, &[Permutation::identity(4)], &[]);
    let empty = chain_ls(&trivial);
    assert!(empty.blocks().is_empty());
    assert!(verify_structural(&empty, &trivial).unwrap().passed());
    assert!(verify_exhaustive(&empty, &trivial).unwrap().passed());

    let s4 = chain("S4");
    assert!(matches!(verify_structural(&mls_solvable(&s4).unwrap(), &s4), Err(Error::MissingProvenance)));
}

#[test]
fn structural_implies_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for name in ["A5", "S4", "S5", "A6", "PSL(2,7)", "PSL(2,11)", "M11", "SL(2,3)", "D6"] {
        let c = chain(name);
        let base = chain_ls(&c);
        let refined = refine_ls(&base, &c, &RefineOptions::default()).unwrap();
        for ls in [&base, &refined] {
            assert!(verify_structural(ls, &c).unwrap().passed(), "{name}");
            assert!(verify_exhaustive(ls, &c).unwrap().passed(), "{name}");
        }
        // random replacements: a structural pass implies an exhaustive one,
        // and the exhaustive verdict matches the naive oracle
        for _ in 0..5 {
            let mut blocks = base.blocks().to_vec();
            let i = rng.gen_range(0..blocks.len());
            let j = rng.gen_range(0..blocks[i].len());
            let g = c.random_element(&mut rng);
            if blocks[i].contains(&g) {
                continue;
            }
            blocks[i][j] = g;
            let ls = LogSignature::new(c.degree(), blocks, base.provenance().clone(), None).unwrap();
            let s = verify_structural(&ls, &c).unwrap().passed();
            let e = verify_exhaustive(&ls, &c).unwrap().passed();
            assert!(!s || e, "{name}");
            assert_eq!(e, is_ls(&ls, &c), "{name}");
        }
    }
}

#[test]
fn verdict_ignores_order_within_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let m11 = chain("M11");
    let ls = refine_ls(&chain_ls(&m11), &m11, &RefineOptions::default()).unwrap();
    for _ in 0..5 {
        let mut blocks = ls.blocks().to_vec();
        for b in &mut blocks {
            b.shuffle(&mut rng);
        }
        let shuffled = LogSignature::new(11, blocks, ls.provenance().clone(), None).unwrap();
        assert!(verify_exhaustive(&shuffled, &m11).unwrap().passed());
    }
}

#[test]
fn coset_representatives_are_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m11 = chain("M11");
    let ls = chain_ls(&m11);
    for i in 0..ls.blocks().len() - 1 {
        let next = m11.subchain(i + 1);
        let mut blocks = ls.blocks().to_vec();
        for t in &mut blocks[i] {
            *t = &*t * &next.random_element(&mut rng);
        }
        let moved = LogSignature::new(11, blocks, ls.provenance().clone(), None).unwrap();
        assert!(verify_exhaustive(&moved, &m11).unwrap().passed());
        assert!(verify_structural(&moved, &m11).unwrap().passed());
    }
}

#[test]
fn length_and_minimality() {
    let a5 = chain_ls(&chain("A5"));
    let m11 = chain_ls(&chain("M11"));
    assert_eq!(m11.length(), 38);
    assert!(is_minimal(&a5, &factor_integer(&60u32.into())).unwrap());
    assert!(!is_minimal(&m11, &factor_integer(&7920u32.into())).unwrap());
    assert_eq!(minimal_length(&factor_integer(&7920u32.into())), 30u32.into());
    assert!(matches!(is_minimal(&m11, &factor_integer(&60u32.into())), Err(Error::SizeMismatch { .. })));
    let empty = LogSignature::new(3, vec![], Provenance::plain(ProvenanceTag::Manual), None).unwrap();
    assert!(is_minimal(&empty, &factor_integer(&1u32.into())).unwrap());
}

#[test]
fn serialization_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut made = Vec::new();
    for name in ["A5", "S4", "M11", "PSL(2,7)", "C12", "Q8", "SL(2,3)", "D6", "A6", "C2^3"] {
        let c = chain(name);
        made.push(chain_ls(&c).with_group(Some(name.into())));
        made.push(refine_ls(&chain_ls(&c), &c, &RefineOptions::default()).unwrap());
        if let Ok(s) = mls_solvable(&c) {
            made.push(s);
        }
        let x = c.random_element(&mut rng);
        let s = rng.gen_range(1..=usize::try_from(&x.order()).unwrap());
        made.push(mls_cyclic(&CyclicSetSpec::new(x, s).unwrap()).unwrap());
    }
    while made.len() < 50 {
        let c = chain("M12");
        made.push(mls_core::pgm::randomize_ls(&chain_ls(&c), &c, made.len() as u64).unwrap());
    }
    for ls in &made {
        let text = write_ls(ls);
        let back = read_ls(&text).unwrap();
        assert_eq!(&back, ls);
        assert_eq!(write_ls(&back), text);
        assert!(text.lines().all(|l| !l.ends_with(' ')));
    }
}

#[test]
fn malformed_files() {
    let good = write_ls(&chain_ls(&chain("S4")));
    let not_bijective = good.replacen("[1, 2, 3, 4]", "[1, 1, 3, 4]", 1);
    assert!(matches!(read_ls(&not_bijective), Err(Error::Parse(_))));
    let wrong_degree = good.replacen("[1, 2, 3, 4]", "[1, 2, 3]", 1);
    assert!(matches!(read_ls(&wrong_degree), Err(Error::Parse(_))));
    let Err(Error::Parse(msg)) = read_ls("{\n  \"degree\": 4,\n  oops\n}") else { panic!() };
    assert!(msg.contains("line 3"), "{msg}");
    assert!(read_ls(&good.replace("\"chain\"", "\"mystery\"")).is_err());
}
