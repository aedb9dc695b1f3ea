//! `mls`: build, verify and use logarithmic signatures of permutation groups.
//!
//! Exit codes: 0 success, 1 semantic failure (verification fails, a row is
//! flagged, an element is not a member), 2 usage or input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use mls_core::catalog::{self, check_theorem_arithmetic, table1_rows};
use mls_core::construct::{build_mls, chain_ls, mls_cyclic, mls_solvable, CyclicSetSpec, RefineOptions};
use mls_core::factorize::{factorize_generic_with_budget, factorize_tame, reconstruct, TameIndexer};
use mls_core::logsig::{
    is_minimal, minimal_length, read_ls, verify_exhaustive_with_budget, verify_structural, write_ls,
    LogSignature, Method, VerificationReport, DEFAULT_BUDGET,
};
use mls_core::permcore::{factor_integer, GeneratorSet, Permutation, StabilizerChain};
use mls_core::{pgm, Error};

#[derive(Parser)]
#[command(name = "mls", version, about = "Logarithmic signatures for permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, order, factorization, minimal length and orbit sizes.
    Info {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        json: bool,
    },
    /// Build a signature and write it.
    Construct {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = ConstructMethod::Auto)]
        method: ConstructMethod,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Random candidate sampling for refinement.
        #[arg(long)]
        seed: Option<u64>,
        /// Elements scanned per refinement search.
        #[arg(long)]
        candidate_cap: Option<usize>,
        /// Generator of the cyclic set for `--method cyclic` (cycle notation).
        #[arg(long)]
        element: Option<String>,
        /// Size of the cyclic set for `--method cyclic`.
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Check that a signature factors every group element uniquely.
    Verify {
        #[arg(long)]
        ls: PathBuf,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = VerifyMode::Auto)]
        mode: VerifyMode,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Digits of an element with respect to a signature.
    Factorize {
        #[arg(long)]
        ls: PathBuf,
        #[command(flatten)]
        group: GroupArgs,
        /// Element in cycle notation, e.g. "(1,2,3)(4,5)".
        element: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Arithmetic checks of the bundled sporadic-group rows.
    TableCheck {
        /// Check a single row.
        #[arg(long)]
        row: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// PGM key generation and message mapping.
    Pgm {
        #[command(subcommand)]
        action: PgmAction,
    },
}

#[derive(Subcommand)]
enum PgmAction {
    Keygen {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[command(flatten)]
        group: GroupArgs,
        message: String,
    },
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[command(flatten)]
        group: GroupArgs,
        ciphertext: String,
    },
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Bundled group (M11, A5, PSL(2,7), ...) or family member (C12, D6, S5, A7).
    #[arg(long, conflicts_with = "group_file")]
    group: Option<String>,
    /// Generator file: `degree N` then one permutation per line.
    #[arg(long)]
    group_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructMethod {
    Auto,
    Chain,
    Solvable,
    Cyclic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Auto,
    Exhaustive,
    Structural,
}

enum Failure {
    /// Exit code 1.
    Semantic(String),
    /// Exit code 2.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotMember => Failure::Semantic(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic(msg)) => {
            if !msg.is_empty() {
                eprintln!("mls: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("mls: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Info { group, json } => info(&group, json),
        Command::Construct {
            group,
            method,
            out,
            seed,
            candidate_cap,
            element,
            size,
            json,
        } => {
            let mut opts = RefineOptions {
                seed,
                ..RefineOptions::default()
            };
            if let Some(cap) = candidate_cap {
                opts.candidate_cap = cap;
            }
            construct(&group, method, out, &opts, element.as_deref(), size, json)
        }
        Command::Verify {
            ls,
            group,
            mode,
            budget,
            json,
        } => verify(&ls, &group, mode, budget, json),
        Command::Factorize {
            ls,
            group,
            element,
            budget,
            json,
        } => factorize(&ls, &group, &element, budget, json),
        Command::TableCheck { row, json } => table_check(row.as_deref(), json),
        Command::Pgm { action } => pgm_command(action),
    }
}

fn read_file(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Loads the group from the flags, falling back to `default_name` (the
/// group recorded in an LS or key file).
fn load(args: &GroupArgs, default_name: Option<&str>) -> CliResult<(String, GeneratorSet, StabilizerChain)> {
    if let Some(path) = &args.group_file {
        let text = read_file(path)?;
        let gens = GeneratorSet::parse(&text, None)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let chain = StabilizerChain::build(&gens, &[]);
        return Ok((name, gens, chain));
    }
    let name = args
        .group
        .as_deref()
        .or(default_name)
        .ok_or_else(|| Failure::Input("no group given: use --group or --group-file".into()))?;
    let spec = catalog::group_spec(name)?;
    let chain = spec.chain()?;
    Ok((spec.name, spec.generators, chain))
}

fn info(args: &GroupArgs, json: bool) -> CliResult {
    let (name, gens, chain) = load(args, None)?;
    let f = factor_integer(chain.order());
    let min = minimal_length(&f);
    let chain_len = chain_ls(&chain).length();
    if json {
        let rec = json!({
            "group": name,
            "degree": gens.degree(),
            "order": chain.order().to_string(),
            "factorization": f.to_string(),
            "minimal_length": min.to_string(),
            "orbit_sizes": chain.orbit_sizes(),
            "chain_length": chain_len,
        });
        println!("{rec}");
    } else {
        println!("group: {name}");
        println!("degree: {}", gens.degree());
        if f.factors().is_empty() {
            println!("order: 1");
        } else {
            println!("order: {} = {f}", chain.order());
        }
        println!("minimal length: {min}");
        let orbits: Vec<String> = chain.orbit_sizes().iter().map(usize::to_string).collect();
        println!("orbit sizes: {}", orbits.join(" "));
        println!("chain length: {chain_len}");
    }
    Ok(())
}

fn construct(
    args: &GroupArgs,
    method: ConstructMethod,
    out: Option<PathBuf>,
    opts: &RefineOptions,
    element: Option<&str>,
    size: Option<usize>,
    json: bool,
) -> CliResult {
    let (name, gens, chain) = load(args, None)?;
    let ls = match method {
        ConstructMethod::Auto => build_mls(&chain, opts)?.ls,
        ConstructMethod::Chain => chain_ls(&chain),
        ConstructMethod::Solvable => mls_solvable(&chain).map_err(|e| match e {
            Error::NotSolvable => Failure::Input(format!("{name} is not solvable")),
            e => e.into(),
        })?,
        ConstructMethod::Cyclic => {
            let x = match element {
                Some(text) => Permutation::parse_cycles(text, gens.degree())?,
                None => gens
                    .generators()
                    .iter()
                    .find(|g| &g.order() == chain.order())
                    .cloned()
                    .ok_or_else(|| {
                        Failure::Input(format!("{name} has no generator of order |G|; pass --element"))
                    })?,
            };
            let s = match size {
                Some(s) => s,
                None => usize::try_from(&x.order()).map_err(|_| Failure::Input("element order too large".into()))?,
            };
            mls_cyclic(&CyclicSetSpec::new(x, s)?)?
        }
    };
    let ls = ls.with_group(Some(name.clone()));
    let f = factor_integer(&ls.size_product());
    let minimal = is_minimal(&ls, &f)?;
    let unrefined = ls
        .provenance()
        .annotations
        .iter()
        .filter(|a| a.role == mls_core::logsig::BlockRole::Unrefined)
        .count();
    write_output(out.as_ref(), &write_ls(&ls))?;
    let sizes: Vec<String> = ls.block_sizes().iter().map(usize::to_string).collect();
    if json {
        let rec = json!({
            "group": name,
            "provenance": ls.provenance().tag.as_str(),
            "length": ls.length(),
            "minimal_length": minimal_length(&f).to_string(),
            "minimal": minimal,
            "block_sizes": ls.block_sizes(),
            "unrefined_blocks": unrefined,
        });
        eprintln!("{rec}");
    } else {
        eprintln!(
            "{name}: {} signature, blocks {}, length {}, minimal: {minimal}",
            ls.provenance().tag.as_str(),
            sizes.join(" "),
            ls.length()
        );
        if unrefined > 0 {
            eprintln!("{unrefined} block(s) could not be refined");
        }
    }
    Ok(())
}

fn report_json(r: &VerificationReport) -> Value {
    json!({
        "verdict": if r.passed() { "pass" } else { "fail" },
        "method": match r.method { Method::Exhaustive => "exhaustive", Method::Structural => "structural" },
        "products_checked": r.products_checked,
        "witness": r.witness.as_ref().map(|w| w.to_string()),
    })
}

fn load_ls(path: &PathBuf) -> CliResult<LogSignature> {
    read_ls(&read_file(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn verify(path: &PathBuf, args: &GroupArgs, mode: VerifyMode, budget: u64, json: bool) -> CliResult {
    let ls = load_ls(path)?;
    let (_, _, chain) = load(args, ls.group())?;
    let structural = match mode {
        VerifyMode::Structural => true,
        VerifyMode::Exhaustive => false,
        VerifyMode::Auto => ls.provenance().tag.is_transversal(),
    };
    let report = if structural {
        verify_structural(&ls, &chain)?
    } else {
        verify_exhaustive_with_budget(&ls, &chain, budget).map_err(|e| match e {
            Error::BudgetExceeded { products, budget } => Failure::Input(format!(
                "{products} products exceed the exhaustive budget {budget}; use --mode structural"
            )),
            e => e.into(),
        })?
    };
    if json {
        println!("{}", report_json(&report));
    } else {
        let method = match report.method {
            Method::Exhaustive => "exhaustive",
            Method::Structural => "structural",
        };
        let verdict = if report.passed() { "pass" } else { "fail" };
        println!("{verdict} ({method}, {} products checked)", report.products_checked);
        if let Some(w) = &report.witness {
            println!("{w}");
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Semantic(String::new()))
    }
}

fn factorize(path: &PathBuf, args: &GroupArgs, element: &str, budget: u64, json: bool) -> CliResult {
    let ls = load_ls(path)?;
    let g = Permutation::parse_cycles(element, ls.degree())?;
    if args.group.is_some() || args.group_file.is_some() {
        let (_, _, chain) = load(args, None)?;
        if !chain.contains(&g)? {
            return Err(Failure::Semantic(format!("{g} is not in the group")));
        }
    }
    let (index, method) = if ls.provenance().tag.is_transversal() {
        (factorize_tame(&g, &TameIndexer::new(&ls)?), "tame")
    } else {
        (factorize_generic_with_budget(&g, &ls, budget), "generic")
    };
    let index = index.map_err(|e| match e {
        Error::NotMember => Failure::Semantic(format!("{g} has no factorization over this signature")),
        e => e.into(),
    })?;
    let ok = reconstruct(&ls, &index)? == g;
    if json {
        println!("{}", json!({ "digits": index.digits, "method": method, "reconstructs": ok }));
    } else {
        println!("digits: {:?}", index.digits);
        println!("reconstruction: {}", if ok { "ok" } else { "MISMATCH" });
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Semantic("reconstruction mismatch".into()))
    }
}

fn table_check(only: Option<&str>, json: bool) -> CliResult {
    let rows = match only {
        Some(name) => vec![catalog::row(name).ok_or_else(|| Failure::Input(format!("no row named `{name}`")))?],
        None => table1_rows(),
    };
    let mut flagged = 0;
    for row in &rows {
        let r = check_theorem_arithmetic(row);
        if !r.passed {
            flagged += 1;
        }
        if json {
            println!("{}", serde_json::to_string(&r).unwrap());
        } else {
            let mark = |b: bool| if b { "ok" } else { "FAIL" };
            println!(
                "{:6} {:7} index-factorization {:4} index*stabilizer {:4} order-form {}",
                r.group,
                if r.passed { "pass" } else { "FLAGGED" },
                mark(r.index_factorization_ok),
                mark(r.index_times_stabilizer_ok),
                mark(r.order_well_formed),
            );
            for d in &r.discrepancies {
                println!("         {d}");
            }
        }
    }
    if !json {
        println!("{} of {} rows pass", rows.len() - flagged, rows.len());
    }
    if flagged == 0 {
        Ok(())
    } else {
        Err(Failure::Semantic(String::new()))
    }
}

fn parse_big(text: &str) -> CliResult<BigUint> {
    text.parse().map_err(|_| Failure::Input(format!("`{text}` is not a non-negative integer")))
}

fn pgm_command(action: PgmAction) -> CliResult {
    match action {
        PgmAction::Keygen { group, seed, out } => {
            let (name, _, chain) = load(&group, None)?;
            let key = pgm::keygen(&chain, seed, Some(name))?;
            write_output(out.as_ref(), &pgm::write_key(&key))
        }
        PgmAction::Encrypt { key, group, message } => {
            let key = load_key(&key, &group)?;
            println!("{}", pgm::encrypt(&key, &parse_big(&message)?)?);
            Ok(())
        }
        PgmAction::Decrypt { key, group, ciphertext } => {
            let key = load_key(&key, &group)?;
            println!("{}", pgm::decrypt(&key, &parse_big(&ciphertext)?)?);
            Ok(())
        }
    }
}

fn load_key(path: &PathBuf, args: &GroupArgs) -> CliResult<pgm::PgmKey> {
    let text = read_file(path)?;
    let recorded = pgm::key_group(&text)?;
    let (_, _, chain) = load(args, recorded.as_deref())?;
    Ok(pgm::read_key(&text, &chain)?)
}
