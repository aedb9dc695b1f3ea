use std::path::Path;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::permcore::{GeneratorSet, Permutation, StabilizerChain};

/// A bundled or parametric group.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub name: String,
    pub generators: GeneratorSet,
    pub expected_order: Option<BigUint>,
    pub source: &'static str,
}

impl GroupSpec {
    pub fn degree(&self) -> usize {
        self.generators.degree()
    }

    /// Builds the chain and checks it against the expected order.
    pub fn chain(&self) -> Result<StabilizerChain> {
        let chain = StabilizerChain::build(&self.generators, &[]);
        if let Some(expected) = &self.expected_order {
            if chain.order() != expected {
                return Err(Error::OrderMismatch {
                    name: self.name.clone(),
                    expected: expected.clone(),
                    found: chain.order().clone(),
                });
            }
        }
        Ok(chain)
    }
}

struct Bundled {
    names: &'static [&'static str],
    text: &'static str,
    order: u64,
    source: &'static str,
}

const BUNDLED: &[Bundled] = &[
    Bundled {
        names: &["M11"],
        text: include_str!("../../data/M11.grp"),
        order: 7920,
        source: "standard generators, natural action",
    },
    Bundled {
        names: &["M12"],
        text: include_str!("../../data/M12.grp"),
        order: 95040,
        source: "M11 generators plus an involution, natural action",
    },
    Bundled {
        names: &["M22"],
        text: include_str!("../../data/M22.grp"),
        order: 443520,
        source: "natural action on 22 points",
    },
    Bundled {
        names: &["M23"],
        text: include_str!("../../data/M23.grp"),
        order: 10200960,
        source: "natural action on 23 points",
    },
    Bundled {
        names: &["M24"],
        text: include_str!("../../data/M24.grp"),
        order: 244823040,
        source: "M23 generators plus an involution, natural action",
    },
    Bundled {
        names: &["PSL(2,7)", "PSL2_7", "L2(7)"],
        text: include_str!("../../data/PSL2_7.grp"),
        order: 168,
        source: "projective line over GF(7)",
    },
    Bundled {
        names: &["PSL(2,11)", "PSL2_11", "L2(11)"],
        text: include_str!("../../data/PSL2_11.grp"),
        order: 660,
        source: "projective line over GF(11)",
    },
    Bundled {
        names: &["SL(2,3)", "SL2_3"],
        text: include_str!("../../data/SL2_3.grp"),
        order: 24,
        source: "regular-orbit action on the nonzero vectors of GF(3)^2",
    },
    Bundled {
        names: &["Q8"],
        text: include_str!("../../data/Q8.grp"),
        order: 8,
        source: "regular action",
    },
    Bundled {
        names: &["C2^3", "C2x3", "E8"],
        text: include_str!("../../data/C2x3.grp"),
        order: 8,
        source: "three disjoint transpositions",
    },
    Bundled {
        names: &["S4"],
        text: include_str!("../../data/S4.grp"),
        order: 24,
        source: "natural action",
    },
    Bundled {
        names: &["A4"],
        text: include_str!("../../data/A4.grp"),
        order: 12,
        source: "natural action",
    },
    Bundled {
        names: &["A5"],
        text: include_str!("../../data/A5.grp"),
        order: 60,
        source: "natural action",
    },
    Bundled {
        names: &["A6"],
        text: include_str!("../../data/A6.grp"),
        order: 360,
        source: "natural action",
    },
];

/// Names of the bundled data files (parametric families excluded).
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|b| b.names[0]).collect()
}

/// Looks up a bundled group or one of the families `Cn`, `Dn` (dihedral of
/// degree `n`, order `2n`), `Sn`, `An`.
pub fn group_spec(name: &str) -> Result<GroupSpec> {
    if let Some(b) = BUNDLED.iter().find(|b| b.names.iter().any(|n| n.eq_ignore_ascii_case(name))) {
        return Ok(GroupSpec {
            name: b.names[0].to_string(),
            generators: GeneratorSet::parse(b.text, Some(b.names[0].to_string()))?,
            expected_order: Some(BigUint::from(b.order)),
            source: b.source,
        });
    }
    family(name).ok_or_else(|| Error::UnknownGroup(name.to_string()))
}

/// Resolves a group name or, when the argument names an existing file or
/// ends in `.grp`, reads generators from that file.
pub fn load_group(name_or_path: &str) -> Result<GeneratorSet> {
    let spec = load_spec(name_or_path)?;
    spec.chain()?;
    Ok(spec.generators)
}

/// Like [`load_group`], keeping the expected order and source note.
pub fn load_spec(name_or_path: &str) -> Result<GroupSpec> {
    let path = Path::new(name_or_path);
    if name_or_path.ends_with(".grp") || path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{name_or_path}: {e}")))?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        return Ok(GroupSpec {
            name: stem.clone(),
            generators: GeneratorSet::parse(&text, Some(stem))
                .map_err(|e| Error::Parse(format!("{name_or_path}: {e}")))?,
            expected_order: None,
            source: "file",
        });
    }
    group_spec(name_or_path)
}

fn family(name: &str) -> Option<GroupSpec> {
    let mut chars = name.chars();
    let kind = chars.next()?.to_ascii_uppercase();
    let n: usize = chars.as_str().parse().ok()?;
    if n == 0 || n > 4096 {
        return None;
    }
    let cycle = |pts: Vec<usize>| {
        let mut images: Vec<usize> = (0..n).collect();
        for w in 0..pts.len() {
            images[pts[w]] = pts[(w + 1) % pts.len()];
        }
        Permutation::from_images(images).unwrap()
    };
    let factorial = |k: usize| (1..=k).fold(BigUint::from(1u32), |acc, i| acc * i);
    let (gens, order, source) = match kind {
        'C' => (vec![cycle((0..n).collect())], BigUint::from(n), "regular action"),
        'D' if n >= 3 => {
            let mut images: Vec<usize> = (0..n).collect();
            images.reverse();
            (
                vec![cycle((0..n).collect()), Permutation::from_images(images).unwrap()],
                BigUint::from(2 * n),
                "symmetries of the n-gon",
            )
        }
        'S' => {
            let gens = if n >= 2 {
                vec![cycle((0..n).collect()), cycle(vec![0, 1])]
            } else {
                vec![Permutation::identity(n)]
            };
            (gens, factorial(n), "natural action")
        }
        'A' => {
            let gens = if n >= 3 {
                let long = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
                vec![cycle(vec![0, 1, 2]), cycle(long)]
            } else {
                vec![Permutation::identity(n)]
            };
            let order = if n >= 2 { factorial(n) / 2u32 } else { BigUint::from(1u32) };
            (gens, order, "natural action")
        }
        _ => return None,
    };
    let canonical = format!("{kind}{n}");
    Some(GroupSpec {
        name: canonical.clone(),
        generators: GeneratorSet::new(n, gens, Some(canonical)).ok()?,
        expected_order: Some(order),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        let orders = [("C12", 12u64), ("D6", 12), ("S5", 120), ("A5", 60), ("A6", 360), ("A7", 2520), ("C1", 1), ("S1", 1), ("A2", 1)];
        for (name, order) in orders {
            let spec = group_spec(name).unwrap();
            assert_eq!(spec.chain().unwrap().order(), &BigUint::from(order), "{name}");
        }
        for name in ["A8", "S6", "D9", "C100"] {
            family(name).unwrap().chain().unwrap();
        }
    }

    #[test]
    fn unknown_names() {
        for name in ["", "X5", "M13", "C0", "Cx"] {
            assert!(matches!(group_spec(name), Err(Error::UnknownGroup(_))), "{name}");
        }
    }

    #[test]
    fn small_bundled_orders() {
        for name in ["PSL(2,7)", "PSL(2,11)", "SL(2,3)", "Q8", "C2^3", "S4", "A4", "A5", "A6", "M11", "M12"] {
            group_spec(name).unwrap().chain().unwrap();
        }
        assert_eq!(group_spec("psl2_7").unwrap().name, "PSL(2,7)");
    }
}
