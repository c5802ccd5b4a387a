//! Command-line front end: poke at the codecs, synthesize witnesses for
//! finite tables, replay saved witnesses, and classify coordinate patterns.
//!
//! Exit codes: 0 success, 1 verification found mismatches, 2 bad input,
//! 3 internal invariant breach (a fresh synthesis failed its own replay).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use univfn_core::combinators::{
    pair_tables, product_universal, sigma_synth32, sigma_synth42, synth_32_from_42,
    synth_42_from_32, synth_additive, synth_dim3, synth_dim_n, synth_sigma,
};
use univfn_core::pairing::{pair, unpair};
use univfn_core::seqcodec::rho;
use univfn_core::sigma::classify;
use univfn_core::universal::{synth_two, to_single};
use univfn_core::verifier::check;
use univfn_core::{Classification, Error, FinTable, Nat, SigmaSpec, Synthesis};

#[derive(Parser)]
#[command(
    name = "univfn",
    version,
    about = "Witness synthesis and verification for finite tables"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Interleave two naturals into one code (decimal in, decimal out).
    Pair { a: String, b: String },
    /// Split a code into its even and odd halves, printed as "a b".
    Unpair { c: String },
    /// Entry i of the sequence coded by alpha; 0 when absent.
    Rho { alpha: String, i: String },
    /// Synthesize witnesses for a table and replay them cell by cell.
    Synth(SynthArgs),
    /// Replay a saved synthesis against a table.
    Verify {
        /// Table JSON: {"dims": [...], "values": ["...", ...]}.
        #[arg(long)]
        table: PathBuf,
        /// Synthesis JSON, as written by `synth --out`.
        #[arg(long)]
        witness: PathBuf,
    },
    /// Decide what a coordinate-pattern family can express.
    Classify {
        /// Pattern JSON: {"n": ..., "family": [[...], ...]}.
        #[arg(long)]
        sigma: PathBuf,
    },
}

#[derive(Args)]
struct SynthArgs {
    /// Construction to run.
    #[arg(value_enum)]
    kind: Kind,
    /// Table JSON: {"dims": [...], "values": ["...", ...]}.
    #[arg(long)]
    table: PathBuf,
    /// Second table (product only); the target is the cellwise pair.
    #[arg(long)]
    table2: Option<PathBuf>,
    /// Pattern JSON (sigma only).
    #[arg(long)]
    sigma: Option<PathBuf>,
    /// Write the synthesis JSON here on success.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Two unary witnesses for a square table.
    Two,
    /// One shared unary witness for a square table.
    Single,
    /// Per-coordinate witnesses for a cube.
    Dim3,
    /// Per-coordinate witnesses for any hypercube; arity comes from dims.
    Dimn,
    /// One witness per pattern member (needs --sigma).
    Sigma,
    /// Shared binary map for a 4-cube, lifted from the cube form.
    S42,
    /// Shared binary map for a cube, routed through the 4-cube form.
    S32,
    /// Witnesses answering two squares at once (needs --table2).
    Product,
    /// Order-respecting split: witness values add without carries.
    Additive,
}

enum Failure {
    User(String),
    /// Refused pattern; carries the uncovered coordinate for the certificate.
    NonCovering(usize),
    Internal(String),
}

fn user(e: Error) -> Failure {
    Failure::User(e.to_string())
}

fn parse_nat(s: &str) -> Result<Nat, Failure> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Failure::User(format!(
            "expected a decimal natural, got {s:?}"
        )));
    }
    Ok(Nat::from_str(s).expect("digit strings parse"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::User(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports and witnesses serialize");
    s.push('\n');
    s
}

fn synthesize(args: &SynthArgs, g: FinTable) -> Result<(Synthesis, FinTable), Failure> {
    let syn = match args.kind {
        Kind::Two => synth_two(&g).map_err(user)?.into_synthesis(),
        Kind::Single => {
            let tw = synth_two(&g).map_err(user)?;
            to_single(&tw.w_row, &tw.w_col)
                .map_err(user)?
                .into_synthesis()
        }
        Kind::Dim3 => synth_dim3(&g).map_err(user)?.into_synthesis(),
        Kind::Dimn => {
            let k = g.dims().len();
            synth_dim_n(&g, k).map_err(user)?.into_synthesis()
        }
        Kind::Sigma => {
            let path = args
                .sigma
                .as_ref()
                .ok_or_else(|| Failure::User("synth sigma needs --sigma".into()))?;
            let spec: SigmaSpec = read_json(path)?;
            match synth_sigma(&spec, &g) {
                Ok(s) => s.into_synthesis(),
                Err(Error::NonCoveringSigma { uncovered }) => {
                    return Err(Failure::NonCovering(uncovered))
                }
                Err(e) => return Err(user(e)),
            }
        }
        Kind::S42 => synth_42_from_32(sigma_synth32, &g)
            .map_err(user)?
            .into_synthesis(),
        Kind::S32 => synth_32_from_42(sigma_synth42, &g)
            .map_err(user)?
            .into_synthesis(),
        Kind::Product => {
            let path = args
                .table2
                .as_ref()
                .ok_or_else(|| Failure::User("synth product needs --table2".into()))?;
            let g2: FinTable = read_json(path)?;
            let target = pair_tables(&g, &g2).map_err(user)?;
            let syn = product_universal(&g, &g2).map_err(user)?.into_synthesis();
            return Ok((syn, target));
        }
        Kind::Additive => synth_additive(&g).map_err(user)?.into_synthesis(),
    };
    Ok((syn, g))
}

fn synth_cmd(args: SynthArgs) -> Result<u8, Failure> {
    if args.table2.is_some() && args.kind != Kind::Product {
        return Err(Failure::User("--table2 only applies to synth product".into()));
    }
    if args.sigma.is_some() && args.kind != Kind::Sigma {
        return Err(Failure::User("--sigma only applies to synth sigma".into()));
    }
    let g: FinTable = read_json(&args.table)?;
    let (syn, target) = synthesize(&args, g)?;
    let report = check(&syn.evaluator, &syn.witnesses, &target)
        .map_err(|e| Failure::Internal(format!("self-check could not run: {e}")))?;
    print!("{}", pretty(&report));
    if !report.ok() {
        return Err(Failure::Internal(
            "freshly synthesized witnesses failed their replay".into(),
        ));
    }
    if let Some(path) = &args.out {
        std::fs::write(path, pretty(&syn))
            .map_err(|e| Failure::User(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Pair { a, b } => {
            println!("{}", pair(&parse_nat(&a)?, &parse_nat(&b)?));
            Ok(0)
        }
        Cmd::Unpair { c } => {
            let (a, b) = unpair(&parse_nat(&c)?);
            println!("{a} {b}");
            Ok(0)
        }
        Cmd::Rho { alpha, i } => {
            println!("{}", rho(&parse_nat(&alpha)?, &parse_nat(&i)?));
            Ok(0)
        }
        Cmd::Synth(args) => synth_cmd(args),
        Cmd::Verify { table, witness } => {
            let g: FinTable = read_json(&table)?;
            let syn: Synthesis = read_json(&witness)?;
            let report = check(&syn.evaluator, &syn.witnesses, &g).map_err(user)?;
            print!("{}", pretty(&report));
            Ok(if report.ok() { 0 } else { 1 })
        }
        Cmd::Classify { sigma } => {
            let spec: SigmaSpec = read_json(&sigma)?;
            print!("{}", pretty(&classify(&spec)));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::NonCovering(uncovered)) => {
            eprint!("{}", pretty(&Classification::TriviallyFalse { uncovered }));
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
