//! LS file format.
//!
//! ```text
//! {
//!   "degree": 3,
//!   "group": "S3",
//!   "provenance": {
//!     "tag": "chain",
//!     "annotations": [
//!       {"level": 0, "base_point": 1, "orbit_size": 3, "role": "transversal"},
//!       {"level": 1, "base_point": 2, "orbit_size": 2, "role": "transversal"}
//!     ]
//!   },
//!   "blocks": [
//!     [
//!       [1, 2, 3],
//!       [2, 3, 1],
//!       [3, 2, 1]
//!     ],
//!     [
//!       [1, 2, 3],
//!       [1, 3, 2]
//!     ]
//!   ]
//! }
//! ```
//!
//! Elements are 1-based image arrays; base points are 1-based. The writer
//! output is canonical: two-space indent, keys in the order above, one
//! element per line, no trailing whitespace, final newline.

use std::fmt::Write as _;

use serde::Deserialize;

use super::{BlockAnnotation, BlockRole, LogSignature, Provenance, ProvenanceTag};
use crate::error::{Error, Result};
use crate::permcore::Permutation;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLs {
    degree: usize,
    #[serde(default)]
    group: Option<String>,
    provenance: RawProvenance,
    blocks: Vec<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProvenance {
    tag: String,
    #[serde(default)]
    annotations: Vec<RawAnnotation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnnotation {
    level: usize,
    base_point: usize,
    orbit_size: usize,
    role: String,
}

pub fn write_ls(ls: &LogSignature) -> String {
    let mut out = String::new();
    write_ls_indented(ls, 0, &mut out);
    out.push('\n');
    out
}

/// Writes the LS object with every line indented by `indent` spaces (the
/// opening brace is not indented); used for embedding in key files.
pub(crate) fn write_ls_indented(ls: &LogSignature, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let group = match ls.group() {
        Some(g) => serde_json::to_string(g).unwrap(),
        None => "null".to_string(),
    };
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "{pad}  \"degree\": {},", ls.degree());
    let _ = writeln!(out, "{pad}  \"group\": {group},");
    let _ = writeln!(out, "{pad}  \"provenance\": {{");
    let _ = writeln!(out, "{pad}    \"tag\": \"{}\",", ls.provenance().tag.as_str());
    let anns = &ls.provenance().annotations;
    if anns.is_empty() {
        let _ = writeln!(out, "{pad}    \"annotations\": []");
    } else {
        let _ = writeln!(out, "{pad}    \"annotations\": [");
        for (i, a) in anns.iter().enumerate() {
            let comma = if i + 1 < anns.len() { "," } else { "" };
            let _ = writeln!(
                out,
                "{pad}      {{\"level\": {}, \"base_point\": {}, \"orbit_size\": {}, \"role\": \"{}\"}}{comma}",
                a.level,
                a.base_point + 1,
                a.orbit_size,
                a.role.as_str()
            );
        }
        let _ = writeln!(out, "{pad}    ]");
    }
    let _ = writeln!(out, "{pad}  }},");
    if ls.blocks().is_empty() {
        let _ = writeln!(out, "{pad}  \"blocks\": []");
    } else {
        let _ = writeln!(out, "{pad}  \"blocks\": [");
        for (i, block) in ls.blocks().iter().enumerate() {
            let _ = writeln!(out, "{pad}    [");
            for (j, e) in block.iter().enumerate() {
                let images: Vec<String> = e.one_based_images().iter().map(usize::to_string).collect();
                let comma = if j + 1 < block.len() { "," } else { "" };
                let _ = writeln!(out, "{pad}      [{}]{comma}", images.join(", "));
            }
            let comma = if i + 1 < ls.blocks().len() { "," } else { "" };
            let _ = writeln!(out, "{pad}    ]{comma}");
        }
        let _ = writeln!(out, "{pad}  ]");
    }
    let _ = write!(out, "{pad}}}");
}

pub fn read_ls(text: &str) -> Result<LogSignature> {
    let raw: RawLs = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    from_raw(raw)
}

pub(crate) fn read_ls_value(value: serde_json::Value) -> Result<LogSignature> {
    let raw: RawLs = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    from_raw(raw)
}

fn from_raw(raw: RawLs) -> Result<LogSignature> {
    let degree = raw.degree;
    let tag = ProvenanceTag::parse(&raw.provenance.tag)
        .ok_or_else(|| Error::Parse(format!("unknown provenance tag `{}`", raw.provenance.tag)))?;
    let mut annotations = Vec::with_capacity(raw.provenance.annotations.len());
    for (i, a) in raw.provenance.annotations.into_iter().enumerate() {
        let role = BlockRole::parse(&a.role)
            .ok_or_else(|| Error::Parse(format!("annotation {i}: unknown role `{}`", a.role)))?;
        if a.base_point == 0 || a.base_point > degree {
            return Err(Error::Parse(format!(
                "annotation {i}: base point {} outside 1..{degree}",
                a.base_point
            )));
        }
        annotations.push(BlockAnnotation {
            level: a.level,
            base_point: a.base_point - 1,
            orbit_size: a.orbit_size,
            role,
        });
    }
    let mut blocks = Vec::with_capacity(raw.blocks.len());
    for (i, block) in raw.blocks.into_iter().enumerate() {
        let mut entries = Vec::with_capacity(block.len());
        for (j, images) in block.into_iter().enumerate() {
            if images.len() != degree {
                return Err(Error::Parse(format!(
                    "block {i} entry {j}: {} images for degree {degree}",
                    images.len()
                )));
            }
            let p = Permutation::from_one_based(&images)
                .map_err(|e| Error::Parse(format!("block {i} entry {j}: {e}")))?;
            entries.push(p);
        }
        blocks.push(entries);
    }
    LogSignature::new(degree, blocks, Provenance { tag, annotations }, raw.group)
        .map_err(|e| Error::Parse(e.to_string()))
}
