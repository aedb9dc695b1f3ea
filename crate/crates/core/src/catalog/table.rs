use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permcore::{is_probable_prime, PrimeFactorization};

pub const ROWS_TEXT: &str = include_str!("../../data/table1.json");

/// One sporadic-group row: printed order, point stabilizer and the index
/// claimed for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremRow {
    pub group: String,
    /// `(base, exponent)` pairs exactly as printed.
    pub order: Vec<(BigUint, u32)>,
    pub stabilizer: String,
    /// Factors whose orders multiply to the stabilizer order: integers,
    /// prime powers `p^a`, or group names.
    pub constituents: Vec<String>,
    pub claimed_index: BigUint,
    /// The `H = A B ...` block orders.
    pub index_factorization: Vec<(BigUint, u32)>,
    /// A second factorization stated alongside the claimed index, if any.
    pub stated_index_factorization: Option<Vec<(BigUint, u32)>>,
    pub note: Option<String>,
}

impl TheoremRow {
    pub fn claimed_order(&self) -> BigUint {
        power_product(&self.order)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub group: String,
    /// The block orders multiply to the claimed index.
    pub index_factorization_ok: bool,
    /// Claimed index times stabilizer order equals the printed order.
    pub index_times_stabilizer_ok: bool,
    /// The printed order lists distinct primes, ascending, with positive
    /// exponents.
    pub order_well_formed: bool,
    pub passed: bool,
    pub discrepancies: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format: u32,
    rows: Vec<RawRow>,
    printed_orders: Vec<RawOrder>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    group: String,
    order: String,
    stabilizer: String,
    constituents: Vec<String>,
    claimed_index: String,
    index_factorization: String,
    stated_index_factorization: Option<String>,
    note: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrder {
    group: String,
    order: String,
}

struct Table {
    rows: Vec<TheoremRow>,
    printed: Vec<(String, Vec<(BigUint, u32)>)>,
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(ROWS_TEXT).expect("bundled rows file parses"))
}

fn parse_table(text: &str) -> Result<Table> {
    let raw: RawFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if raw.format != 1 {
        return Err(Error::Parse(format!("unsupported rows format {}", raw.format)));
    }
    let rows = raw
        .rows
        .into_iter()
        .map(|r| {
            let claimed_index = r
                .claimed_index
                .parse()
                .map_err(|_| Error::Parse(format!("{}: bad index `{}`", r.group, r.claimed_index)))?;
            Ok(TheoremRow {
                order: parse_power_product(&r.order)?,
                index_factorization: parse_power_product(&r.index_factorization)?,
                stated_index_factorization: r
                    .stated_index_factorization
                    .as_deref()
                    .map(parse_power_product)
                    .transpose()?,
                group: r.group,
                stabilizer: r.stabilizer,
                constituents: r.constituents,
                claimed_index,
                note: r.note,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let printed = raw
        .printed_orders
        .into_iter()
        .map(|o| Ok((o.group, parse_power_product(&o.order)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { rows, printed })
}

/// Parses rows from a file in the bundled format.
pub fn parse_rows(text: &str) -> Result<Vec<TheoremRow>> {
    parse_table(text).map(|t| t.rows)
}

/// The thirteen bundled rows, in file order.
pub fn table1_rows() -> Vec<TheoremRow> {
    table().rows.clone()
}

pub fn row(group: &str) -> Option<TheoremRow> {
    table().rows.iter().find(|r| r.group.eq_ignore_ascii_case(group)).cloned()
}

/// Parses `2^21.3^9.11` (also accepting `*` as separator).
pub fn parse_power_product(text: &str) -> Result<Vec<(BigUint, u32)>> {
    text.split(['.', '*'])
        .map(str::trim)
        .map(|term| {
            let (base, exp) = term.split_once('^').unwrap_or((term, "1"));
            let base = base.trim().parse::<BigUint>();
            let exp = exp.trim().parse::<u32>();
            match (base, exp) {
                (Ok(b), Ok(e)) => Ok((b, e)),
                _ => Err(Error::Parse(format!("bad prime-power term `{term}` in `{text}`"))),
            }
        })
        .collect()
}

fn power_product(pairs: &[(BigUint, u32)]) -> BigUint {
    pairs.iter().fold(BigUint::one(), |acc, (b, e)| acc * b.pow(*e))
}

/// Checks (a), (b) and (c) for one row. Never fails: problems, including
/// unresolvable stabilizer constituents, are reported.
pub fn check_theorem_arithmetic(row: &TheoremRow) -> RowReport {
    let mut discrepancies = Vec::new();

    let h = power_product(&row.index_factorization);
    let mut a = h == row.claimed_index;
    if !a {
        discrepancies.push(format!(
            "block orders multiply to {h}, claimed index is {}",
            row.claimed_index
        ));
    }
    if let Some(stated) = &row.stated_index_factorization {
        let p = power_product(stated);
        if p != row.claimed_index {
            a = false;
            discrepancies.push(format!(
                "stated index factorization gives {p}, claimed index is {}",
                row.claimed_index
            ));
        }
    }

    let claimed = row.claimed_order();
    let b = match stabilizer_order(&row.constituents) {
        Ok(stab) => {
            let product = &row.claimed_index * &stab;
            let ok = product == claimed;
            if !ok {
                discrepancies.push(format!(
                    "index * |{}| = {} * {stab} = {product} [{}], printed order is {claimed} [{}]",
                    row.stabilizer,
                    row.claimed_index,
                    describe(&product),
                    describe(&claimed),
                ));
                if product > claimed || !(&claimed % &product).is_zero() {
                    let (q, r) = claimed.div_rem(&stab);
                    if r.is_zero() {
                        discrepancies.push(format!("order / stabilizer = {q} [{}]", describe(&q)));
                    }
                }
            }
            ok
        }
        Err(e) => {
            discrepancies.push(format!("stabilizer order unavailable: {e}"));
            false
        }
    };

    let c = well_formed(&row.order, &mut discrepancies);
    RowReport {
        group: row.group.clone(),
        index_factorization_ok: a,
        index_times_stabilizer_ok: b,
        order_well_formed: c,
        passed: a && b && c,
        discrepancies,
    }
}

fn describe(n: &BigUint) -> String {
    crate::permcore::factor_integer(n).to_string()
}

fn well_formed(pairs: &[(BigUint, u32)], notes: &mut Vec<String>) -> bool {
    let mut ok = true;
    for (i, (p, e)) in pairs.iter().enumerate() {
        if !is_probable_prime(p) {
            ok = false;
            notes.push(format!("order base {p} is not prime"));
        }
        if *e == 0 {
            ok = false;
            notes.push(format!("order term {p}^0"));
        }
        if i > 0 && pairs[i - 1].0 >= *p {
            ok = false;
            notes.push(format!("order bases not strictly ascending at {p}"));
        }
    }
    ok
}

/// Product of the constituent orders.
pub fn stabilizer_order(constituents: &[String]) -> Result<BigUint> {
    constituents
        .iter()
        .try_fold(BigUint::one(), |acc, c| Ok(acc * constituent_order(c)?))
}

/// Order of a named constituent: an integer or prime power, `An`/`Sn`, a
/// Mathieu group, a Lie-type group `PSL(n,q)`, `PSU(n,q)`, `G2(q)`,
/// `3D4(q)`, `2E6(q)`, or a group whose order is printed in the rows file.
pub fn constituent_order(name: &str) -> Result<BigUint> {
    let name = name.trim();
    let unknown = || Error::UnknownGroup(name.to_string());
    if let Ok(pairs) = parse_power_product(name) {
        return Ok(power_product(&pairs));
    }
    let mathieu = [("M11", 7920u64), ("M12", 95040), ("M22", 443520), ("M23", 10200960), ("M24", 244823040)];
    if let Some((_, o)) = mathieu.iter().find(|(n, _)| *n == name) {
        return Ok(BigUint::from(*o));
    }
    if let Some(rest) = name.strip_prefix('A').or_else(|| name.strip_prefix('S')) {
        if let Ok(n) = rest.parse::<u32>() {
            let f = (1..=n).fold(BigUint::one(), |acc, i| acc * i);
            return Ok(if name.starts_with('A') && n >= 2 { f / 2u32 } else { f });
        }
    }
    let call = |prefix: &str| -> Option<Vec<u64>> {
        let inner = name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
        inner.split(',').map(|s| s.trim().parse().ok()).collect()
    };
    if let Some(args) = call("PSL") {
        let [n, q] = args[..] else { return Err(unknown()) };
        return Ok(psl_order(n as u32, q));
    }
    if let Some(args) = call("PSU") {
        let [n, q] = args[..] else { return Err(unknown()) };
        return Ok(psu_order(n as u32, q));
    }
    if let Some(&[q]) = call("G2").as_deref() {
        let q = BigUint::from(q);
        return Ok(q.pow(6) * (q.pow(6) - 1u32) * (q.pow(2) - 1u32));
    }
    if let Some(&[q]) = call("3D4").as_deref() {
        let q = BigUint::from(q);
        return Ok(q.pow(12) * (q.pow(8) + q.pow(4) + 1u32) * (q.pow(6) - 1u32) * (q.pow(2) - 1u32));
    }
    if let Some(&[q]) = call("2E6").as_deref() {
        let d = (q + 1).gcd(&3);
        let q = BigUint::from(q);
        let n = q.pow(36)
            * (q.pow(12) - 1u32)
            * (q.pow(9) + 1u32)
            * (q.pow(8) - 1u32)
            * (q.pow(6) - 1u32)
            * (q.pow(5) + 1u32)
            * (q.pow(2) - 1u32);
        return Ok(n / d);
    }
    let t = table();
    if let Some(r) = t.rows.iter().find(|r| r.group == name) {
        return Ok(r.claimed_order());
    }
    if let Some((_, o)) = t.printed.iter().find(|(g, _)| g == name) {
        return Ok(power_product(o));
    }
    Err(unknown())
}

fn psl_order(n: u32, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    let mut o = qb.pow(n * (n - 1) / 2);
    for i in 2..=n {
        o *= qb.pow(i) - 1u32;
    }
    o / (q - 1).gcd(&(n as u64))
}

fn psu_order(n: u32, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    let mut o = qb.pow(n * (n - 1) / 2);
    for i in 2..=n {
        o *= if i % 2 == 0 { qb.pow(i) - 1u32 } else { qb.pow(i) + 1u32 };
    }
    o / (q + 1).gcd(&(n as u64))
}

/// `(group, printed order, sum a_j p_j)` for every group whose order the
/// rows file prints.
pub fn sporadic_minimal_lengths() -> Vec<(String, BigUint, BigUint)> {
    let t = table();
    t.rows
        .iter()
        .map(|r| (r.group.clone(), &r.order))
        .chain(t.printed.iter().map(|(g, o)| (g.clone(), o)))
        .map(|(g, pairs)| {
            let f = PrimeFactorization::from_factors(pairs.iter().cloned());
            (g, f.value().clone(), f.weighted_sum())
        })
        .collect()
}
