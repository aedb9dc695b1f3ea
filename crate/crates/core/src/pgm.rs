//! A demonstration PGM cipher: messages are integers below `|G|`, mapped to
//! a group element through one signature and read back through another.
//!
//! Digits and integers convert in mixed radix with the last block least
//! significant, the same order in which verification enumerates products.
//! No security claims are made.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::construct::{aligned_chain, chain_ls};
use crate::error::{Error, Result};
use crate::factorize::{factorize_tame, reconstruct, TameIndexer};
use crate::logsig::{read_ls_value, verify_structural, write_ls_indented, LogSignature, Provenance, ProvenanceTag};
use crate::permcore::radix::{from_digits, to_digits};
use crate::permcore::StabilizerChain;

pub const KEY_FORMAT: u64 = 1;

pub struct PgmKey {
    group: Option<String>,
    seed: u64,
    order: BigUint,
    alpha: TameIndexer,
    beta: TameIndexer,
}

impl PgmKey {
    /// Builds a key from two signatures, checking both against `chain`.
    pub fn from_parts(
        chain: &StabilizerChain,
        alpha: LogSignature,
        beta: LogSignature,
        group: Option<String>,
        seed: u64,
    ) -> Result<PgmKey> {
        for ls in [&alpha, &beta] {
            let report = verify_structural(ls, chain)?;
            if !report.passed() {
                return Err(Error::InvalidLs(format!(
                    "key signature fails verification: {}",
                    report.witness.map(|w| w.to_string()).unwrap_or_default()
                )));
            }
        }
        Ok(PgmKey {
            group,
            seed,
            order: chain.order().clone(),
            alpha: TameIndexer::new(&alpha)?,
            beta: TameIndexer::new(&beta)?,
        })
    }

    pub fn alpha(&self) -> &LogSignature {
        self.alpha.ls()
    }

    pub fn beta(&self) -> &LogSignature {
        self.beta.ls()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn group(&self) -> Option<&str> {
        self.group.as_deref()
    }

    /// Size of the message space.
    pub fn order(&self) -> &BigUint {
        &self.order
    }
}

/// Shuffles every block and replaces each entry `t` of level `i` by `t * h`
/// with `h` a random element of the level-`(i+1)` group. The base-point
/// images, and so the annotations, are unchanged.
pub fn randomize_ls(ls: &LogSignature, chain: &StabilizerChain, seed: u64) -> Result<LogSignature> {
    if ls.provenance().tag != ProvenanceTag::Chain {
        return Err(Error::MissingProvenance);
    }
    let chain = aligned_chain(ls, chain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::with_capacity(ls.blocks().len());
    for (block, ann) in ls.blocks().iter().zip(&ls.provenance().annotations) {
        let next = chain.subchain((ann.level + 1).min(chain.levels().len()));
        let mut entries = block.clone();
        entries.shuffle(&mut rng);
        for t in &mut entries {
            *t = &*t * &next.random_element(&mut rng);
        }
        blocks.push(entries);
    }
    LogSignature::new(
        ls.degree(),
        blocks,
        Provenance {
            tag: ProvenanceTag::Chain,
            annotations: ls.provenance().annotations.clone(),
        },
        ls.group().map(str::to_string),
    )
}

/// Two randomized chain signatures under seeds derived from `seed`.
pub fn keygen(chain: &StabilizerChain, seed: u64, group: Option<String>) -> Result<PgmKey> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s1, s2) = (rng.next_u64(), rng.next_u64());
    let base = chain_ls(chain).with_group(group.clone());
    let alpha = randomize_ls(&base, chain, s1)?;
    let beta = randomize_ls(&base, chain, s2)?;
    PgmKey::from_parts(chain, alpha, beta, group, seed)
}

fn map(m: &BigUint, key: &PgmKey, from: &TameIndexer, to: &TameIndexer) -> Result<BigUint> {
    if m >= &key.order {
        return Err(Error::MessageOutOfRange {
            message: m.clone(),
            order: key.order.clone(),
        });
    }
    let digits = to_digits(m, &from.ls().block_sizes());
    let g = reconstruct(from.ls(), &crate::logsig::FactorizationIndex::new(digits))?;
    let d = factorize_tame(&g, to).map_err(|_| Error::CorruptedLs)?;
    Ok(from_digits(&d.digits, &to.ls().block_sizes()))
}

pub fn encrypt(key: &PgmKey, m: &BigUint) -> Result<BigUint> {
    map(m, key, &key.alpha, &key.beta)
}

pub fn decrypt(key: &PgmKey, c: &BigUint) -> Result<BigUint> {
    map(c, key, &key.beta, &key.alpha)
}

/// Key file: header fields, then both signatures in canonical LS form.
pub fn write_key(key: &PgmKey) -> String {
    let group = match &key.group {
        Some(g) => serde_json::to_string(g).unwrap(),
        None => "null".into(),
    };
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"format\": {KEY_FORMAT},");
    let _ = writeln!(out, "  \"group\": {group},");
    let _ = writeln!(out, "  \"seed\": {},", key.seed);
    out.push_str("  \"alpha\": ");
    write_ls_indented(key.alpha(), 2, &mut out);
    out.push_str(",\n  \"beta\": ");
    write_ls_indented(key.beta(), 2, &mut out);
    out.push_str("\n}\n");
    out
}

/// Group name recorded in a key file, if any.
pub fn key_group(text: &str) -> Result<Option<String>> {
    let v = parse_key_value(text)?;
    Ok(v.get("group").and_then(Value::as_str).map(str::to_string))
}

fn parse_key_value(text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    match v.get("format").and_then(Value::as_u64) {
        Some(KEY_FORMAT) => Ok(v),
        Some(f) => Err(Error::Parse(format!("unsupported key format {f}"))),
        None => Err(Error::Parse("key file has no `format` field".into())),
    }
}

pub fn read_key(text: &str, chain: &StabilizerChain) -> Result<PgmKey> {
    let mut v = parse_key_value(text)?;
    let obj = v.as_object_mut().ok_or_else(|| Error::Parse("key file is not an object".into()))?;
    for k in obj.keys() {
        if !["format", "group", "seed", "alpha", "beta"].contains(&k.as_str()) {
            return Err(Error::Parse(format!("unknown key field `{k}`")));
        }
    }
    let group = match obj.get("group") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(Error::Parse("`group` must be a string or null".into())),
    };
    let seed = obj
        .get("seed")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("`seed` must be a non-negative integer".into()))?;
    let mut take = |k: &str| -> Result<LogSignature> {
        let ls = obj.remove(k).ok_or_else(|| Error::Parse(format!("missing `{k}`")))?;
        read_ls_value(ls).map_err(|e| Error::Parse(format!("{k}: {e}")))
    };
    let alpha = take("alpha")?;
    let beta = take("beta")?;
    PgmKey::from_parts(chain, alpha, beta, group, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::{GeneratorSet, Permutation};

    fn chain(n: usize, cycles: &[&str]) -> StabilizerChain {
        let g = cycles.iter().map(|c| Permutation::parse_cycles(c, n).unwrap()).collect();
        StabilizerChain::build(&GeneratorSet::new(n, g, None).unwrap(), &[])
    }

    #[test]
    fn s4_bijection() {
        let s4 = chain(4, &["(1,2,3,4)", "(1,2)"]);
        let key = keygen(&s4, 7, Some("S4".into())).unwrap();
        let mut seen = std::collections::HashSet::new();
        for m in 0u32..24 {
            let m = BigUint::from(m);
            let c = encrypt(&key, &m).unwrap();
            assert!(c < BigUint::from(24u32));
            assert!(seen.insert(c.clone()));
            assert_eq!(decrypt(&key, &c).unwrap(), m);
        }
        assert!(matches!(encrypt(&key, &BigUint::from(24u32)), Err(Error::MessageOutOfRange { .. })));
    }

    #[test]
    fn equal_signatures_give_identity() {
        let s4 = chain(4, &["(1,2,3,4)", "(1,2)"]);
        let ls = randomize_ls(&chain_ls(&s4), &s4, 3).unwrap();
        let key = PgmKey::from_parts(&s4, ls.clone(), ls, None, 0).unwrap();
        for m in 0u32..24 {
            assert_eq!(encrypt(&key, &BigUint::from(m)).unwrap(), BigUint::from(m));
        }
    }

    #[test]
    fn trivial_group_key() {
        let one = chain(3, &["()"]);
        let key = keygen(&one, 1, None).unwrap();
        assert_eq!(key.order(), &BigUint::from(1u32));
        assert_eq!(encrypt(&key, &BigUint::from(0u32)).unwrap(), BigUint::from(0u32));
    }

    #[test]
    fn key_file_roundtrip() {
        let s4 = chain(4, &["(1,2,3,4)", "(1,2)"]);
        let key = keygen(&s4, 11, Some("S4".into())).unwrap();
        let text = write_key(&key);
        assert_eq!(key_group(&text).unwrap().as_deref(), Some("S4"));
        let back = read_key(&text, &s4).unwrap();
        assert_eq!(write_key(&back), text);
        assert!(read_key(&text.replace("\"format\": 1", "\"format\": 2"), &s4).is_err());
    }

    #[test]
    fn randomize_requires_chain_tag() {
        let s4 = chain(4, &["(1,2,3,4)", "(1,2)"]);
        let ls = crate::construct::mls_solvable(&s4).unwrap();
        assert_eq!(randomize_ls(&ls, &s4, 1), Err(Error::MissingProvenance));
    }
}
