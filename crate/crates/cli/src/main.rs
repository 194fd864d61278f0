mod cache;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use steenrod::basis_theorem::{gf_dims_bo, gf_dims_bu, ModuleTag};
use steenrod::milnor::{admissible_to_milnor, antipode, MilnorElement};
use steenrod::parse::{parse_element, parse_sw_polynomial};
use steenrod::quotients::{QuotientContext, SubalgebraKind, SubalgebraSpec};
use steenrod::serre_cartan::{Element, Word};
use steenrod::thom_sw::{sq_word_on_polynomial, sq_word_on_thom, Model, ThomElement};

use suites::{Ranges, Suite};

#[derive(Parser)]
#[command(
    name = "steenrod",
    version,
    about = "Mod-2 Steenrod algebra computations and checks"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Adem cache file.
    #[arg(long, env = "STEENROD_ADEM_CACHE", global = true)]
    cache: Option<PathBuf>,
    /// Neither read nor write the Adem cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Admissible,
    Milnor,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Bo,
    Bso,
}

#[derive(Subcommand)]
enum Command {
    /// Print the admissible normal form.
    Normalize {
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        expr: Vec<String>,
    },
    /// Apply the antipode.
    Antipode {
        #[arg(long, value_enum, default_value_t = Basis::Admissible)]
        to: Basis,
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        expr: Vec<String>,
    },
    /// Rewrite in the admissible or Milnor basis.
    Convert {
        #[arg(long, value_enum)]
        to: Basis,
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        expr: Vec<String>,
    },
    /// Per-degree candidate count, generating-function dimension and quotient dimension.
    Dims {
        /// bo, bu or an(n).
        #[arg(long, default_value = "bo")]
        module: ModuleTag,
        #[arg(long, default_value_t = 20)]
        max_degree: u32,
    },
    /// Run a verification suite; exit status 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        ranges: Ranges,
    },
    /// Apply a word Sq[a,b,...] to a Stiefel–Whitney polynomial or to U times it.
    Act {
        #[arg(long, value_enum, default_value_t = ModelArg::Bo)]
        model: ModelArg,
        /// Act on the Thom class times the polynomial.
        #[arg(long)]
        thom: bool,
        /// The operation, e.g. `Sq[2,1]`.
        op: String,
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        poly: Vec<String>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Checks,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn default_cache_path() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("steenrod").join("adem.cache"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j as usize)
            .build_global()
        {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    let cache_path = if cli.no_cache {
        None
    } else {
        cli.cache.clone().or_else(default_cache_path)
    };
    let loaded = cache_path.as_deref().map_or(0, cache::load);

    let outcome = run(&cli);

    if let Some(path) = &cache_path {
        if let Err(e) = cache::store(path, loaded) {
            eprintln!(
                "warning: could not write Adem cache {}: {e}",
                path.display()
            );
        }
    }
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            report_error(&e);
            ExitCode::from(2)
        }
    }
}

fn report_error(e: &anyhow::Error) {
    if let Some(Input {
        text,
        source: steenrod::Error::Parse { position, message },
    }) = e.downcast_ref::<Input>()
    {
        let col = text[..*position].chars().count();
        eprintln!("error: {message} (column {})", col + 1);
        eprintln!("  {text}");
        eprintln!("  {}^", " ".repeat(col));
        return;
    }
    eprintln!("error: {e:#}");
}

/// A core error together with the text it refers to.
#[derive(Debug)]
struct Input {
    text: String,
    source: steenrod::Error,
}

impl std::fmt::Display for Input {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.source)
    }
}

impl std::error::Error for Input {}

fn with_text<T>(text: &str, r: steenrod::Result<T>) -> Result<T> {
    r.map_err(|source| {
        Input {
            text: text.to_string(),
            source,
        }
        .into()
    })
}

/// Parses `Sq[a,b,...]` as an unreduced word.
fn parse_word(text: &str) -> steenrod::Result<Word> {
    let parse_err = |position: usize, message: &str| steenrod::Error::Parse {
        position,
        message: message.to_string(),
    };
    let trimmed = text.trim_start();
    let offset = text.len() - trimmed.len();
    let inner = trimmed
        .strip_prefix("Sq[")
        .ok_or_else(|| parse_err(offset, "expected Sq[...]"))?;
    let inner = inner.trim_end();
    let inner = inner
        .strip_suffix(']')
        .ok_or_else(|| parse_err(offset + 3 + inner.len(), "expected ']'"))?;
    let mut entries = Vec::new();
    let mut pos = offset + 3;
    for part in inner.split(',') {
        let lead = part.len() - part.trim_start().len();
        match part.trim().parse::<u32>() {
            Ok(0) => return Err(parse_err(pos + lead, "exponents must be positive")),
            Ok(n) => entries.push(n),
            Err(_) if inner.trim().is_empty() => break,
            Err(_) => return Err(parse_err(pos + lead, "expected a number")),
        }
        pos += part.len() + 1;
    }
    Word::new(&entries)
}

fn element_output(cli: &Cli, input: &str, x: &Element, basis: Basis) -> Result<()> {
    let (text, terms): (String, Vec<Vec<u32>>) = match basis {
        Basis::Admissible => (
            x.to_string(),
            x.terms().map(|t| t.entries().to_vec()).collect(),
        ),
        Basis::Milnor => {
            let m: MilnorElement = admissible_to_milnor(x);
            (
                m.to_string(),
                m.terms().map(|t| t.entries().to_vec()).collect(),
            )
        }
    };
    let basis_name = match basis {
        Basis::Admissible => "admissible",
        Basis::Milnor => "milnor",
    };
    match cli.format {
        Format::Text => println!("{text}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "input": input,
                "basis": basis_name,
                "degree": x.degree(),
                "result": text,
                "terms": terms,
            }))?
        ),
        Format::Tsv => {
            println!("degree\tbasis\tterm");
            for t in &terms {
                let t: Vec<String> = t.iter().map(u32::to_string).collect();
                println!("{}\t{basis_name}\t{}", x.degree(), t.join(","));
            }
        }
    }
    Ok(())
}

fn context_for(module: &ModuleTag, max: u32) -> QuotientContext {
    let spec = match module.subalgebra() {
        SubalgebraKind::A(n) => SubalgebraSpec::a(n),
        SubalgebraKind::E1 => SubalgebraSpec::e1(),
        SubalgebraKind::Trivial => SubalgebraSpec::trivial(),
    };
    QuotientContext::new(spec, max)
}

fn run(cli: &Cli) -> std::result::Result<(), Failure> {
    match &cli.command {
        Command::Normalize { expr } => {
            let text = expr.join(" ");
            let x = with_text(&text, parse_element(&text))?;
            element_output(cli, &text, &x, Basis::Admissible)?;
        }
        Command::Antipode { to, expr } => {
            let text = expr.join(" ");
            let x = with_text(&text, parse_element(&text))?;
            element_output(cli, &text, &antipode(&x), *to)?;
        }
        Command::Convert { to, expr } => {
            let text = expr.join(" ");
            let x = with_text(&text, parse_element(&text))?;
            element_output(cli, &text, &x, *to)?;
        }
        Command::Dims { module, max_degree } => dims(cli, module, *max_degree)?,
        Command::Verify { suite, ranges } => {
            let outcome = suites::run(*suite, ranges)?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome).context("serializing report")?
                ),
                Format::Tsv => {
                    println!("{}", outcome.tsv_header);
                    for r in &outcome.results {
                        println!("{}", r.tsv);
                    }
                }
                Format::Text => {
                    for r in outcome.results.iter().filter(|r| !r.passed) {
                        eprintln!("FAIL {}: {}", r.check, r.detail);
                    }
                    let tag = if outcome.passed { "PASS" } else { "FAIL" };
                    let mut line = format!(
                        "{}: {tag} ({} checks, {} failed)",
                        suite.name(),
                        outcome.checks,
                        outcome.failures
                    );
                    if !outcome.summary.is_empty() {
                        line.push_str(&format!("; {}", outcome.summary));
                    }
                    println!("{line}");
                }
            }
            if !outcome.passed {
                return Err(Failure::Checks);
            }
        }
        Command::Act {
            model,
            thom,
            op,
            poly,
        } => {
            let model = match model {
                ModelArg::Bo => Model::Bo,
                ModelArg::Bso => Model::Bso,
            };
            let word = with_text(op, parse_word(op))?;
            let text = poly.join(" ");
            let p = with_text(&text, parse_sw_polynomial(&text))?.restrict(model);
            let result = if *thom {
                sq_word_on_thom(&word, &ThomElement(p), model).to_string()
            } else {
                sq_word_on_polynomial(word.entries(), &p, model).to_string()
            };
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "operation": op,
                        "input": text,
                        "thom": thom,
                        "result": result,
                    }))
                    .context("serializing result")?
                ),
                Format::Tsv => println!("operation\tinput\tresult\n{op}\t{text}\t{result}"),
                Format::Text => println!("{result}"),
            }
        }
    }
    Ok(())
}

fn dims(cli: &Cli, module: &ModuleTag, max: u32) -> Result<()> {
    let ctx = context_for(module, max);
    let oracle = match module {
        ModuleTag::Bo | ModuleTag::AnConjecture(1) => Some(gf_dims_bo(max)),
        ModuleTag::Bu => Some(gf_dims_bu(max)),
        ModuleTag::AnConjecture(_) => None,
    };
    let mut rows = Vec::new();
    for d in 0..=max {
        let dim = ctx.quotient_dim(d)?;
        rows.push((
            d,
            module.candidates(d).len(),
            oracle.as_ref().map(|o| o[d as usize]),
            dim,
        ));
    }
    let show = |o: Option<u64>| o.map_or("-".to_string(), |v| v.to_string());
    match cli.format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(d, c, o, q)| json!({ "degree": d, "candidates": c, "oracle": o, "dim": q }))
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(
                    &json!({ "module": module, "max_degree": max, "rows": rows })
                )?
            );
        }
        Format::Tsv => {
            println!("degree\tcandidates\toracle\tdim");
            for (d, c, o, q) in rows {
                println!("{d}\t{c}\t{}\t{q}", show(o));
            }
        }
        Format::Text => {
            println!(
                "{:>6} {:>10} {:>6} {:>6}",
                "degree", "candidates", "oracle", "dim"
            );
            for (d, c, o, q) in rows {
                println!("{d:>6} {c:>10} {:>6} {q:>6}", show(o));
            }
        }
    }
    Ok(())
}
