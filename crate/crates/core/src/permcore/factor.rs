//! Integer factorization: trial division to 10^6, then Miller–Rabin and
//! Brent's variant of Pollard rho with a fixed starting point.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime-power decomposition `value = prod p_j^a_j`, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFactorization {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl PrimeFactorization {
    /// Builds a factorization from `(prime, exponent)` pairs without
    /// checking primality; pairs are merged and sorted.
    pub fn from_factors<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (BigUint, u32)>,
    {
        let mut factors: Vec<(BigUint, u32)> = Vec::new();
        for (p, a) in pairs {
            if a == 0 {
                continue;
            }
            match factors.iter_mut().find(|(q, _)| *q == p) {
                Some(entry) => entry.1 += a,
                None => factors.push((p, a)),
            }
        }
        factors.sort();
        let value = factors
            .iter()
            .fold(BigUint::one(), |acc, (p, a)| acc * p.pow(*a));
        PrimeFactorization { value, factors }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Primes repeated by multiplicity, ascending.
    pub fn prime_multiset(&self) -> Vec<BigUint> {
        self.factors
            .iter()
            .flat_map(|(p, a)| std::iter::repeat_n(p.clone(), *a as usize))
            .collect()
    }

    /// `sum a_j * p_j`, the length of a minimal logarithmic signature.
    pub fn weighted_sum(&self) -> BigUint {
        self.factors
            .iter()
            .map(|(p, a)| p * BigUint::from(*a))
            .sum()
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, a)| if *a == 1 { p.to_string() } else { format!("{p}^{a}") })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

pub fn factor_integer(n: &BigUint) -> PrimeFactorization {
    assert!(!n.is_zero(), "factor_integer requires n >= 1");
    let mut primes: Vec<BigUint> = Vec::new();
    let mut n = n.clone();

    let push_small = |n: &mut BigUint, p: u64, primes: &mut Vec<BigUint>| {
        let bp = BigUint::from(p);
        while (&*n % &bp).is_zero() {
            *n /= &bp;
            primes.push(bp.clone());
        }
    };
    push_small(&mut n, 2, &mut primes);
    let mut d = 3u64;
    while d <= TRIAL_LIMIT {
        if let Some(small) = n.to_u64() {
            if d.saturating_mul(d) > small {
                break;
            }
        }
        push_small(&mut n, d, &mut primes);
        d += 2;
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            primes.push(m);
            continue;
        }
        let f = pollard_brent(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    PrimeFactorization::from_factors(primes.into_iter().map(|p| (p, 1)))
}

const MR_BASES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller–Rabin over the first twenty primes; deterministic below
/// 3.3 * 10^24 and overwhelmingly reliable above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigUint::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of the odd composite `n`.
fn pollard_brent(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        if let Some(f) = brent_attempt(n, &c) {
            return f;
        }
        c += 1u32;
    }
}

fn brent_attempt(n: &BigUint, c: &BigUint) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let m: u64 = 64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pairs(f: &PrimeFactorization) -> Vec<(u64, u32)> {
        f.factors()
            .iter()
            .map(|(p, a)| (p.to_u64().unwrap(), *a))
            .collect()
    }

    #[test]
    fn small_values() {
        assert_eq!(pairs(&factor_integer(&BigUint::from(7920u32))), vec![(2, 4), (3, 2), (5, 1), (11, 1)]);
        assert!(factor_integer(&BigUint::one()).factors().is_empty());
        assert_eq!(factor_integer(&BigUint::one()).weighted_sum(), BigUint::zero());
    }

    #[test]
    fn conway_two_order() {
        let f = factor_integer(&BigUint::from(42_305_421_312_000u64));
        assert_eq!(pairs(&f), vec![(2, 18), (3, 6), (5, 3), (7, 1), (11, 1), (23, 1)]);
    }

    #[test]
    fn large_prime_factors_use_rho() {
        // (10^6 + 3) * (10^9 + 7) * (2^61 - 1)
        let p1 = BigUint::from(1_000_003u64);
        let p2 = BigUint::from(1_000_000_007u64);
        let p3 = BigUint::from((1u64 << 61) - 1);
        let n = &p1 * &p2 * &p3 * &p2;
        let f = factor_integer(&n);
        assert_eq!(f.factors(), &[(p1, 1), (p2, 2), (p3, 1)]);
        assert!(is_probable_prime(&BigUint::from((1u64 << 61) - 1)));
        assert!(!is_probable_prime(&BigUint::from(3_215_031_751u64)));
    }

    #[test]
    fn display() {
        assert_eq!(factor_integer(&BigUint::from(7920u32)).to_string(), "2^4 * 3^2 * 5 * 11");
    }

    proptest! {
        #[test]
        fn remultiplies_large(n in 1u64..u64::MAX) {
            let f = factor_integer(&BigUint::from(n));
            prop_assert_eq!(f.value(), &BigUint::from(n));
            prop_assert!(f.factors().iter().all(|(p, _)| is_probable_prime(p)));
        }

        #[test]
        fn remultiplies_and_primes_are_prime(n in 1u64..1_000_000_000_000) {
            let f = factor_integer(&BigUint::from(n));
            prop_assert_eq!(f.value(), &BigUint::from(n));
            let mut prev = BigUint::zero();
            for (p, a) in f.factors() {
                prop_assert!(*a >= 1);
                prop_assert!(p > &prev);
                prev = p.clone();
                let p64 = p.to_u64().unwrap();
                prop_assert!((2..).take_while(|d| d * d <= p64).all(|d| p64 % d != 0));
            }
        }
    }
}
