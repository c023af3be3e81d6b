use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod input;
mod verbs;

use verbs::{CliError, Output};

/// Finite models for inverse-semigroup equivariant KK-theory.
///
/// Exit status is 0 when every requested check passes, 1 when a
/// verification fails and 2 when the input is malformed.
#[derive(Parser, Debug)]
#[command(name = "iskk", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Built-in semigroup, e.g. `chain:3`, `symmetric_inverse:2`, `cyclic:2*chain:2`.
    #[arg(long, global = true, value_name = "SPEC")]
    pub builder: Option<String>,
    /// Semigroup as a JSON table {elements, table, unit, zero}.
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "builder")]
    pub semigroup: Option<PathBuf>,
    /// `unit`, `idempotents`, `whole` or comma-separated element names.
    #[arg(long, global = true, value_name = "SPEC")]
    pub subsemigroup: Option<String>,
    /// Second subsemigroup `L` for the splitting and B′ suites.
    #[arg(long = "l", global = true, value_name = "SPEC")]
    pub l: Option<String>,
    /// Projections `P` adjoined to `L` for B′, comma-separated.
    #[arg(long, global = true, value_name = "NAMES")]
    pub projections: Option<String>,
    /// Chain of subsemigroups for ci0, separated by `;`.
    #[arg(long, global = true, value_name = "SPECS")]
    pub chain: Option<String>,
    /// Coefficient algebra: `trivial`, `c0x`, `matrix:N` or an algebra JSON file.
    #[arg(long, global = true, value_name = "SPEC")]
    pub coeff: Option<String>,
    /// Coefficient over the associated groupoid: `res`, `units` or any `--coeff` spec.
    #[arg(long, global = true, value_name = "SPEC")]
    pub groupoid_coeff: Option<String>,
    /// Crossed product: `universal`, `sieben` or `groupoid`.
    #[arg(long, global = true, value_name = "KIND")]
    pub crossed: Option<String>,
    /// Seed for the numeric block fallback.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Verb {
    /// Check the semigroup axioms, and the coefficient algebra if given.
    Validate,
    Idempotents,
    /// Natural partial order.
    Order,
    /// Characters of the idempotent semilattice.
    Characters,
    /// Suprema of idempotents below each element.
    Econt,
    /// Gram matrix of the compatible ℓ̂² module.
    Gram,
    /// Positivity and independence of the Gram matrix.
    Psd,
    /// Induced algebra from the groupoid of `--subsemigroup`.
    Induce,
    /// Crossed product and its semisimple structure.
    Crossed,
    /// K₀ of the coefficient algebra or of its crossed product.
    K0,
    /// Run one verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Run the acceptance corpus.
    Corpus,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Suite {
    ThetaResInd,
    ThetaTensor,
    TechnicalSplit,
    ResIndSplit,
    Ci0,
    Bprime,
    Imprimitivity,
    GreenJulg,
    Remark,
}

fn dispatch(verb: Verb, opts: &Opts) -> Result<Output, CliError> {
    match verb {
        Verb::Validate => verbs::validate(opts),
        Verb::Idempotents => verbs::idempotents(opts),
        Verb::Order => verbs::order(opts),
        Verb::Characters => verbs::characters(opts),
        Verb::Econt => verbs::econt(opts),
        Verb::Gram => verbs::gram(opts),
        Verb::Psd => verbs::psd(opts),
        Verb::Induce => verbs::induce(opts),
        Verb::Crossed => verbs::crossed(opts),
        Verb::K0 => verbs::k0(opts),
        Verb::Verify { suite } => verbs::verify(suite, opts),
        Verb::Corpus => Ok(verbs::corpus(opts)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match dispatch(cli.verb, &cli.opts) {
        Ok(out) => out,
        Err(CliError::Input(msg)) => {
            eprintln!("iskk: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut text =
        if cli.opts.json { serde_json::to_string_pretty(&out.json).expect("JSON values serialize") } else { out.text };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("iskk: --out: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if out.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
