//! Mixed-radix conversions; the last digit is least significant.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Digits of `value` under `radices`. `value` must be below their product.
pub fn to_digits(value: &BigUint, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    let mut v = value.clone();
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        let (q, rem) = v.div_rem(&BigUint::from(r));
        *d = rem.to_usize().unwrap();
        v = q;
    }
    debug_assert!(v.is_zero());
    digits
}

pub fn from_digits(digits: &[usize], radices: &[usize]) -> BigUint {
    digits
        .iter()
        .zip(radices)
        .fold(BigUint::zero(), |acc, (&d, &r)| acc * BigUint::from(r) + BigUint::from(d))
}

pub fn product(radices: &[usize]) -> BigUint {
    radices.iter().map(|&r| BigUint::from(r)).product()
}
