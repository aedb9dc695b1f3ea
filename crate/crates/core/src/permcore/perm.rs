//! Permutations stored as image arrays.
//!
//! Points are 0-based in this API. Cycle notation is 1-based, as in the
//! group and LS file formats.
//!
//! Composition is function composition: `(g * h)(x) = g(h(x))`, so in a
//! product written left to right the rightmost factor acts first.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || seen[y] {
                return Err(Error::NotBijective { degree: n });
            }
            seen[y] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|y| y as u32).collect(),
        })
    }

    /// Builds a permutation from 1-based images (the file representation).
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if images.iter().any(|&y| y == 0 || y > n) {
            return Err(Error::NotBijective { degree: n });
        }
        Self::from_images(images.iter().map(|&y| y - 1).collect())
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    #[inline]
    pub fn raw_images(&self) -> &[u32] {
        &self.images
    }

    /// 1-based image array, as written to files.
    pub fn one_based_images(&self) -> Vec<usize> {
        self.images.iter().map(|&y| y as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i as u32 == y)
    }

    /// `self * h`, i.e. `x -> self(h(x))`.
    pub fn compose(&self, h: &Permutation) -> Result<Permutation> {
        if self.degree() != h.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: h.degree(),
            });
        }
        Ok(self.mul_unchecked(h))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, h: &Permutation) -> Permutation {
        Permutation {
            images: h.images.iter().map(|&y| self.images[y as usize]).collect(),
        }
    }

    /// Writes `self * h` into `out` without allocating.
    #[inline]
    pub(crate) fn mul_into(&self, h: &Permutation, out: &mut Permutation) {
        out.images.clear();
        out.images
            .extend(h.images.iter().map(|&y| self.images[y as usize]));
    }

    /// `self^-1 * h`, the stripping step of a sift.
    pub(crate) fn inv_mul(&self, h: &Permutation) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation {
            images: h.images.iter().map(|&y| inv[y as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Permutation { images: inv }
    }

    /// `self^k` for any integer exponent.
    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            sq = sq.mul_unchecked(&sq);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length at least two, in canonical order: each cycle
    /// starts at its least point and cycles are sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Length of the cycle through `x` (1 for a fixed point).
    pub fn cycle_length_of(&self, x: usize) -> usize {
        let mut len = 1;
        let mut y = self.apply(x);
        while y != x {
            y = self.apply(y);
            len += 1;
        }
        len
    }

    /// Least `t >= 1` with `self^t = 1`: the lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.sort_unstable();
        lengths.dedup();
        lengths
            .into_iter()
            .fold(BigUint::one(), |acc, l| acc.lcm(&BigUint::from(l)))
    }

    /// True iff the element order is divisible by the prime `p`.
    pub fn order_divisible_by(&self, p: usize) -> bool {
        self.cycles().iter().any(|c| c.len() % p == 0)
    }

    pub fn moved_points(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.degree()).filter(move |&x| self.apply(x) != x)
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.moved_points().next()
    }

    /// Parses disjoint-cycle notation with 1-based points, e.g.
    /// `"(1,4,3,8)(2,5,6,9)"`. `"()"` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        if s.is_empty() {
            return Err(Error::CycleSyntax("empty input".into()));
        }
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let body_end = match (rest.strip_prefix('('), rest.find(')')) {
                (Some(_), Some(end)) => end,
                _ => return Err(Error::CycleSyntax(format!("malformed parentheses near `{rest}`"))),
            };
            let body = &rest[1..body_end];
            if body.contains('(') {
                return Err(Error::CycleSyntax(format!("nested parenthesis in `{body}`")));
            }
            rest = &rest[body_end + 1..];
            if body.is_empty() {
                continue;
            }
            let mut cycle = Vec::new();
            for tok in body.split(',') {
                let p: usize = tok
                    .parse()
                    .map_err(|_| Error::CycleSyntax(format!("bad point `{tok}`")))?;
                if p == 0 || p > degree {
                    return Err(Error::CycleSyntax(format!(
                        "point {p} outside 1..{degree}"
                    )));
                }
                if used[p - 1] {
                    return Err(Error::CycleSyntax(format!("point {p} repeated")));
                }
                used[p - 1] = true;
                cycle.push(p - 1);
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    /// Canonical 1-based disjoint-cycle notation; `"()"` for the identity.
    pub fn format_cycles(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut out = String::new();
        for c in cycles {
            out.push('(');
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            out.push_str(&pts.join(","));
            out.push(')');
        }
        out
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Panics on degree mismatch; use [`Permutation::compose`] for the
    /// checked form.
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_cycles())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self.format_cycles())
    }
}
