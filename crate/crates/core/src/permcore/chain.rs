//! Stabilizer chains built by deterministic Schreier–Sims.
//!
//! Level `i` holds the group `G^(i)`, the pointwise stabilizer of the first
//! `i` base points, together with the orbit of base point `b_i` under it and a
//! transversal `u_x` with `u_x(b_i) = x` for every orbit point `x`.
//!
//! Orbits are listed with the base point first and the remaining points in
//! increasing order; that listing defines the digits of the canonical
//! element indexing. The last level is the least significant digit.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::perm::Permutation;
use crate::error::{Error, Result};

/// Generators of a permutation group together with their common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    degree: usize,
    gens: Vec<Permutation>,
    name: Option<String>,
}

impl GeneratorSet {
    pub fn new(degree: usize, gens: Vec<Permutation>, name: Option<String>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        Ok(GeneratorSet { degree, gens, name })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Parses the group file format: `degree N` on the first meaningful
    /// line, then one generator per line in cycle notation. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str, name: Option<String>) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (lno, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("group file is empty".into()))?;
        let degree = header
            .strip_prefix("degree")
            .and_then(|rest| rest.trim().parse::<usize>().ok())
            .ok_or_else(|| {
                Error::Parse(format!("line {lno}: expected `degree N`, found `{header}`"))
            })?;
        let mut gens = Vec::new();
        for (lno, line) in lines {
            let g = Permutation::parse_cycles(line, degree)
                .map_err(|e| Error::Parse(format!("line {lno}: {e}")))?;
            gens.push(g);
        }
        GeneratorSet::new(degree, gens, name)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        for g in &self.gens {
            out.push_str(&g.format_cycles());
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Level {
    base_point: usize,
    orbit: Vec<usize>,
    position: Vec<Option<u32>>,
    reps: Vec<Option<Permutation>>,
    generators: Vec<Permutation>,
}

impl Level {
    fn new(degree: usize, base_point: usize, generators: Vec<Permutation>) -> Self {
        let mut reps: Vec<Option<Permutation>> = vec![None; degree];
        reps[base_point] = Some(Permutation::identity(degree));
        let mut queue = vec![base_point];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for s in &generators {
                let y = s.apply(x);
                if reps[y].is_none() {
                    let u = s.mul_unchecked(reps[x].as_ref().unwrap());
                    reps[y] = Some(u);
                    queue.push(y);
                }
            }
        }
        let mut orbit = vec![base_point];
        orbit.extend((0..degree).filter(|&x| x != base_point && reps[x].is_some()));
        let mut position = vec![None; degree];
        for (i, &x) in orbit.iter().enumerate() {
            position[x] = Some(i as u32);
        }
        Level {
            base_point,
            orbit,
            position,
            reps,
            generators,
        }
    }

    pub fn base_point(&self) -> usize {
        self.base_point
    }

    /// Orbit of the base point: the base point first, then ascending.
    pub fn orbit(&self) -> &[usize] {
        &self.orbit
    }

    pub fn orbit_len(&self) -> usize {
        self.orbit.len()
    }

    /// Digit of `x` in the orbit listing.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.position.get(x).copied().flatten().map(|p| p as usize)
    }

    /// Transversal element mapping the base point to `x`.
    pub fn representative(&self, x: usize) -> Option<&Permutation> {
        self.reps.get(x).and_then(Option::as_ref)
    }

    /// Transversal listed in orbit order (identity first).
    pub fn transversal(&self) -> Vec<Permutation> {
        self.orbit
            .iter()
            .map(|&x| self.reps[x].clone().unwrap())
            .collect()
    }

    /// Strong generators of the level group.
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
}

impl StabilizerChain {
    /// Runs Schreier–Sims on `gens`.
    ///
    /// The base starts with the hint points (duplicates and out-of-range
    /// points dropped) and is extended by the smallest point moved by the
    /// element that forces the extension. Levels with trivial orbits are
    /// removed at the end.
    pub fn build(gens: &GeneratorSet, base_hint: &[usize]) -> StabilizerChain {
        Self::from_generators(gens.degree(), gens.generators(), base_hint)
    }

    pub fn from_generators(
        degree: usize,
        gens: &[Permutation],
        base_hint: &[usize],
    ) -> StabilizerChain {
        let mut strong: Vec<Permutation> = Vec::new();
        for g in gens {
            debug_assert_eq!(g.degree(), degree);
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut base: Vec<usize> = Vec::new();
        for &b in base_hint {
            if b < degree && !base.contains(&b) {
                base.push(b);
            }
        }
        for g in &strong {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.smallest_moved_point().unwrap());
            }
        }

        let level_gens = |k: usize, base: &[usize]| -> Vec<Permutation> {
            strong
                .iter()
                .filter(|g| base[..k].iter().all(|&b| g.apply(b) == b))
                .cloned()
                .collect()
        };
        let mut levels: Vec<Level> = (0..base.len())
            .map(|k| Level::new(degree, base[k], level_gens(k, &base)))
            .collect();

        let mut i = levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            match Self::schreier_residue(&levels, iu) {
                None => i -= 1,
                Some((h, j)) => {
                    if j == levels.len() {
                        let b = h.smallest_moved_point().unwrap();
                        levels.push(Level::new(degree, b, Vec::new()));
                    }
                    for lvl in &mut levels[iu + 1..=j] {
                        let mut g = std::mem::take(&mut lvl.generators);
                        g.push(h.clone());
                        *lvl = Level::new(degree, lvl.base_point, g);
                    }
                    i = j as isize;
                }
            }
        }

        levels.retain(|l| l.orbit.len() > 1);
        let order = levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        StabilizerChain {
            degree,
            generators: strong,
            levels,
            order,
        }
    }

    /// First Schreier generator of level `i` that does not sift through the
    /// levels below, together with the level at which sifting stopped.
    fn schreier_residue(levels: &[Level], i: usize) -> Option<(Permutation, usize)> {
        let level = &levels[i];
        for &beta in &level.orbit {
            let u_beta = level.reps[beta].as_ref().unwrap();
            for s in &level.generators {
                let image = s.apply(beta);
                let su = s.mul_unchecked(u_beta);
                let g = level.reps[image].as_ref().unwrap().inv_mul(&su);
                let (residue, stop) = sift_levels(levels, i + 1, g);
                if stop < levels.len() || !residue.is_identity() {
                    return Some((residue, stop));
                }
            }
        }
        None
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Group order as `u64`, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Level::orbit_len).collect()
    }

    /// Non-identity input generators (deduplicated).
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The chain of the level-`level` group `G^(level)`; `level == len`
    /// gives the trivial group.
    pub fn subchain(&self, level: usize) -> StabilizerChain {
        let levels = self.levels[level..].to_vec();
        let order = levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()));
        let generators = levels
            .first()
            .map(|l| l.generators.clone())
            .unwrap_or_default();
        StabilizerChain {
            degree: self.degree,
            generators,
            levels,
            order,
        }
    }

    fn check_degree(&self, g: &Permutation) -> Result<()> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: g.degree(),
            });
        }
        Ok(())
    }

    /// Sifts `g` through the chain; returns the residue and the level where
    /// sifting stopped (`levels().len()` when it passed every level).
    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        sift_levels(&self.levels, 0, g.clone())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        self.check_degree(g)?;
        Ok(self.contains_from(0, g))
    }

    /// Membership in the level group `G^(level)`.
    pub fn contains_from(&self, level: usize, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (res, stop) = sift_levels(&self.levels, level, g.clone());
        stop == self.levels.len() && res.is_identity()
    }

    /// Per-level digits of a member, or `None` for non-members.
    pub fn digits_of(&self, g: &Permutation) -> Option<Vec<usize>> {
        if g.degree() != self.degree {
            return None;
        }
        let mut g = g.clone();
        let mut digits = Vec::with_capacity(self.levels.len());
        for level in &self.levels {
            let x = g.apply(level.base_point);
            let d = level.position(x)?;
            digits.push(d);
            g = level.reps[x].as_ref().unwrap().inv_mul(&g);
        }
        g.is_identity().then_some(digits)
    }

    /// `u_1(d_1) * u_2(d_2) * ... * u_k(d_k)`.
    pub fn element_from_digits(&self, digits: &[usize]) -> Result<Permutation> {
        if digits.len() != self.levels.len() {
            return Err(Error::DigitCount {
                expected: self.levels.len(),
                found: digits.len(),
            });
        }
        let mut g = Permutation::identity(self.degree);
        for (i, (level, &d)) in self.levels.iter().zip(digits).enumerate() {
            let x = *level.orbit.get(d).ok_or(Error::DigitOutOfRange {
                block: i,
                digit: d,
                size: level.orbit.len(),
            })?;
            g = g.mul_unchecked(level.reps[x].as_ref().unwrap());
        }
        Ok(g)
    }

    /// Canonical bijection `[0, |G|) -> G`; the last level varies fastest.
    pub fn element_at(&self, index: &BigUint) -> Result<Permutation> {
        if index >= &self.order {
            return Err(Error::IndexOutOfRange {
                index: index.clone(),
                order: self.order.clone(),
            });
        }
        let radices = self.orbit_sizes();
        let digits = crate::permcore::radix::to_digits(index, &radices);
        self.element_from_digits(&digits)
    }

    /// Inverse of [`StabilizerChain::element_at`].
    pub fn index_of(&self, g: &Permutation) -> Result<BigUint> {
        self.check_degree(g)?;
        let digits = self.digits_of(g).ok_or(Error::NotMember)?;
        Ok(crate::permcore::radix::from_digits(&digits, &self.orbit_sizes()))
    }

    /// All elements in index order.
    pub fn elements(&self) -> Elements<'_> {
        Elements::new(self)
    }

    /// Uniformly random element (uniform digits at every level).
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in &self.levels {
            let x = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.mul_unchecked(level.reps[x].as_ref().unwrap());
        }
        g
    }

    pub fn is_trivial(&self) -> bool {
        self.order.is_one() || self.order.is_zero()
    }
}

fn sift_levels(levels: &[Level], from: usize, mut g: Permutation) -> (Permutation, usize) {
    for (l, level) in levels.iter().enumerate().skip(from) {
        let beta = g.apply(level.base_point);
        match &level.reps[beta] {
            None => return (g, l),
            Some(u) => g = u.inv_mul(&g),
        }
    }
    (g, levels.len())
}

/// Odometer over the elements of a chain in index order, reusing prefix
/// products.
pub struct Elements<'a> {
    chain: &'a StabilizerChain,
    digits: Vec<usize>,
    prefix: Vec<Permutation>,
    done: bool,
}

impl<'a> Elements<'a> {
    fn new(chain: &'a StabilizerChain) -> Self {
        let k = chain.levels.len();
        let mut prefix = Vec::with_capacity(k + 1);
        prefix.push(Permutation::identity(chain.degree));
        for level in &chain.levels {
            let next = prefix.last().unwrap().mul_unchecked(level.reps[level.base_point].as_ref().unwrap());
            prefix.push(next);
        }
        Elements {
            chain,
            digits: vec![0; k],
            prefix,
            done: false,
        }
    }
}

impl Iterator for Elements<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let k = self.digits.len();
        let out = self.prefix[k].clone();
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.chain.levels[i].orbit.len() {
                break;
            }
            self.digits[i] = 0;
        }
        if !self.done {
            for j in i..k {
                let level = &self.chain.levels[j];
                let x = level.orbit[self.digits[j]];
                let next = self.prefix[j].mul_unchecked(level.reps[x].as_ref().unwrap());
                self.prefix[j + 1] = next;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn gens(n: usize, cycles: &[&str]) -> GeneratorSet {
        let g = cycles
            .iter()
            .map(|c| Permutation::parse_cycles(c, n).unwrap())
            .collect();
        GeneratorSet::new(n, g, None).unwrap()
    }

    /// Brute-force closure: all products of generators.
    fn closure(gs: &GeneratorSet) -> HashSet<Permutation> {
        let mut seen = HashSet::new();
        let id = Permutation::identity(gs.degree());
        seen.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gs.generators() {
                let y = g * &x;
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    #[test]
    fn single_transposition() {
        let c = StabilizerChain::build(&gens(2, &["(1,2)"]), &[]);
        assert_eq!(c.base(), vec![0]);
        assert_eq!(c.order(), &BigUint::from(2u32));
    }

    #[test]
    fn trivial_groups() {
        let c = StabilizerChain::build(&GeneratorSet::new(0, vec![], None).unwrap(), &[]);
        assert!(c.levels().is_empty());
        assert_eq!(c.order(), &BigUint::one());
        let c = StabilizerChain::build(&gens(1, &["()"]), &[]);
        assert_eq!(c.order(), &BigUint::one());
        assert!(c.element_at(&BigUint::zero()).unwrap().is_identity());
    }

    #[test]
    fn orders_match_closure_and_invariants_hold() {
        let cases = [
            gens(4, &["(1,2,3,4)", "(1,2)"]),
            gens(5, &["(1,2,3)", "(3,4,5)"]),
            gens(6, &["(1,2,3,4,5,6)", "(1,6)(2,5)(3,4)"]),
            gens(7, &["(1,2,3,4,5,6,7)", "(2,3,5)(4,7,6)"]),
            gens(8, &["(1,3,2,4)(5,7,6,8)", "(1,5,2,6)(3,8,4,7)"]),
        ];
        for gs in &cases {
            let chain = StabilizerChain::build(gs, &[]);
            let all = closure(gs);
            assert_eq!(chain.order(), &BigUint::from(all.len()));
            for (i, level) in chain.levels().iter().enumerate() {
                for &x in level.orbit() {
                    assert_eq!(level.representative(x).unwrap().apply(level.base_point()), x);
                }
                for g in level.generators() {
                    for prev in &chain.levels()[..i] {
                        assert_eq!(g.apply(prev.base_point()), prev.base_point());
                    }
                }
            }
            for g in &all {
                assert!(chain.contains(g).unwrap());
            }
            let enumerated: HashSet<Permutation> = chain.elements().collect();
            assert_eq!(&enumerated, &all);
        }
    }

    #[test]
    fn membership_rejects_odd_permutation_in_a4() {
        let chain = StabilizerChain::build(&gens(4, &["(1,2,3)", "(2,3,4)"]), &[]);
        assert_eq!(chain.order(), &BigUint::from(12u32));
        assert!(!chain.contains(&Permutation::parse_cycles("(1,2)", 4).unwrap()).unwrap());
        assert!(chain.contains(&Permutation::identity(4)).unwrap());
        assert!(chain.contains(&Permutation::identity(5)).is_err());
    }

    #[test]
    fn indexing_roundtrip_exhaustive() {
        let gs = gens(6, &["(1,2,3,4,5,6)", "(1,2)"]);
        let chain = StabilizerChain::build(&gs, &[]);
        assert!(chain.element_at(&BigUint::zero()).unwrap().is_identity());
        for (i, g) in chain.elements().enumerate() {
            let idx = BigUint::from(i);
            assert_eq!(chain.element_at(&idx).unwrap(), g);
            assert_eq!(chain.index_of(&g).unwrap(), idx);
        }
        assert!(chain.element_at(&BigUint::from(720u32)).is_err());
    }

    #[test]
    fn base_hint_is_respected() {
        let gs = gens(5, &["(1,2,3,4,5)", "(1,2)"]);
        let chain = StabilizerChain::build(&gs, &[4, 2, 4, 99]);
        assert_eq!(&chain.base()[..2], &[4, 2]);
        assert_eq!(chain.order(), &BigUint::from(120u32));
    }

    #[test]
    fn random_words_are_members() {
        let gs = gens(7, &["(1,2,3,4,5,6,7)", "(2,3,5)(4,7,6)"]);
        let chain = StabilizerChain::build(&gs, &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut w = Permutation::identity(7);
            for _ in 0..rng.gen_range(0..30) {
                let g = &gs.generators()[rng.gen_range(0..2)];
                w = &w * g;
            }
            assert!(chain.contains(&w).unwrap());
            let r = chain.random_element(&mut rng);
            assert!(chain.contains(&r).unwrap());
        }
    }

    #[test]
    fn group_file_parsing() {
        let gs = GeneratorSet::parse("# comment\ndegree 4\n\n(1,2,3,4)\n(1,2)\n", None).unwrap();
        assert_eq!(gs.degree(), 4);
        assert_eq!(gs.generators().len(), 2);
        assert_eq!(GeneratorSet::parse(&gs.to_text(), None).unwrap(), gs);
        assert!(GeneratorSet::parse("deg 4\n(1,2)", None).is_err());
        assert!(GeneratorSet::parse("degree 3\n(1,5)", None).is_err());
        assert!(GeneratorSet::parse("", None).is_err());
    }
}
