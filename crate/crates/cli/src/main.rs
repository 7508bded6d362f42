use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hseries_core::numeric::{self, EvalPoint};
use hseries_core::rational::{parse_rational, render_rational, Rational};
use hseries_core::registry::{self, Registry};
use hseries_core::sequences::{SeqName, SequenceParams, Sequences, StirlingRule};
use hseries_core::special::{Family, PolyFamily};
use hseries_core::transforms::{binomial_transform_prefix, euler_transform, CoeffSeq};
use hseries_core::{Error, MPoly, TSeries};
use serde_json::json;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CONTRACT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hseries", version, about = "Hermite series transformations and identity checks")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a member of a polynomial family.
    Expand {
        /// hermite, laguerre, exp-poly, geom-poly, r-exp-poly, r-geom-poly
        family: String,
        n: u64,
        #[arg(long)]
        r: Option<u64>,
    },
    /// Print the first values of a sequence, or a Stirling triangle.
    Seq {
        /// harmonic, harmonic2, fibonacci, lucas, bell, fubini, stirling, r-stirling
        name: String,
        count: usize,
        #[arg(long)]
        r: Option<u64>,
        #[command(flatten)]
        perturb: Perturb,
    },
    /// Transform a sequence of rationals read one per line.
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        /// Input file; stdin when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        mu: String,
    },
    /// Verify registered identities exactly.
    Verify {
        #[arg(long, default_value = "all")]
        ids: String,
        #[arg(short = 'n', long, default_value_t = 12)]
        order: usize,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Report wall-clock times instead of 0.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        perturb: Perturb,
    },
    /// Evaluate both sides of identities in floating point.
    Eval {
        #[arg(long, default_value = "all")]
        ids: String,
        #[arg(long, default_value = "0.3,0.2,0.5,0.1", allow_hyphen_values = true)]
        point: String,
        #[arg(short = 'n', long, default_value_t = numeric::DEFAULT_TRUNCATION)]
        order: usize,
        /// Value of the parameter symbol p.
        #[arg(long, default_value_t = numeric::DEFAULT_P, allow_hyphen_values = true)]
        p: f64,
        /// Real exponent for the Stirling-function series; replaces --ids.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Measure how many terms each side needs to reach a tolerance.
    Accel {
        #[arg(long, default_value = "all")]
        ids: String,
        #[arg(long, default_value = "0.3,0.2,0.5,0.1", allow_hyphen_values = true)]
        point: String,
        #[arg(short = 'n', long, default_value_t = numeric::DEFAULT_TRUNCATION)]
        order: usize,
        #[arg(long, default_value_t = numeric::DEFAULT_P, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// List registered identities.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformKind {
    Binomial,
    InverseBinomial,
    Euler,
}

/// Fault injection: replace sequence seeds or Stirling weights.
#[derive(clap::Args, Debug, Default)]
struct Perturb {
    /// KEY=VALUE with KEY one of fibonacci, lucas (two seeds "a,b"),
    /// bell, fubini (one seed) or stirling (weights "a,b,c").
    #[arg(long = "perturb", value_name = "KEY=VALUE")]
    items: Vec<String>,
}

impl Perturb {
    fn params(&self) -> Result<SequenceParams, Error> {
        let mut p = SequenceParams::default();
        for item in &self.items {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("perturbation {item:?}: expected KEY=VALUE")))?;
            let ints: Vec<i64> = value
                .split(',')
                .map(|v| v.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Error::Parse(format!("perturbation {item:?}: {e}")))?;
            match (key, ints.as_slice()) {
                ("fibonacci", [a, b]) => p.fibonacci_seeds = ((*a).into(), (*b).into()),
                ("lucas", [a, b]) => p.lucas_seeds = ((*a).into(), (*b).into()),
                ("bell", [a]) => p.bell_seed = (*a).into(),
                ("fubini", [a]) => p.fubini_seed = (*a).into(),
                ("stirling", [a, b, c]) => {
                    p.stirling = StirlingRule {
                        k_factor: *a,
                        offset: *b,
                        carry: *c,
                    }
                }
                _ => return Err(Error::Parse(format!("perturbation {item:?} not understood"))),
            }
        }
        Ok(p)
    }
}

enum Failure {
    Verification,
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if e.is_contract_violation() {
                ExitCode::from(EXIT_CONTRACT)
            } else {
                ExitCode::from(EXIT_INPUT)
            }
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Expand { family, n, r } => {
            let fam = Family::parse(family, *r)?;
            let poly = PolyFamily::build(fam, *n)?;
            match cli.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({"family": family, "n": n, "polynomial": poly.to_string()})
                )?,
                _ => writeln!(out, "{poly}")?,
            }
        }
        Command::Seq {
            name,
            count,
            r,
            perturb,
        } => seq(cli.format, name, *count, *r, &perturb.params()?, out)?,
        Command::Transform {
            kind,
            input,
            lambda,
            mu,
        } => {
            let text = match input {
                Some(path) => std::fs::read_to_string(path)?,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let values = read_rationals(&text)?;
            let result = transform(*kind, &values, &parse_rational(lambda)?, &parse_rational(mu)?)?;
            write_rationals(cli.format, &result, out)?;
        }
        Command::Verify {
            ids,
            order,
            parallelism,
            timing,
            perturb,
        } => {
            let reg = registry::register_all_with(perturb.params()?)?;
            let selected = select_ids(&reg, ids)?;
            let mut suite = reg.verify_all(Some(&selected), *order, *parallelism)?;
            if !timing {
                suite = suite.without_timing();
            }
            match cli.format {
                Format::Text => write!(out, "{}", suite.to_text())?,
                Format::Json => write!(out, "{}", suite.to_json_lines())?,
                Format::Csv => {
                    writeln!(out, "identity,paper_eq,order,compared_order,status,mismatch_power,millis")?;
                    for o in &suite.outcomes {
                        let status = serde_json::to_value(o.status).unwrap();
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{}",
                            o.identity,
                            o.paper_eq,
                            o.order,
                            o.compared_order.map(|c| c.to_string()).unwrap_or_default(),
                            status.as_str().unwrap_or_default(),
                            o.first_mismatch.as_ref().map(|m| m.power.to_string()).unwrap_or_default(),
                            o.millis
                        )?;
                    }
                }
            }
            if !suite.all_passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Eval {
            ids,
            point,
            order,
            p,
            alpha,
        } => {
            let mut pt = EvalPoint::parse(point)?.with_truncation(*order);
            pt.p = *p;
            let rows = match alpha {
                Some(a) => vec![numeric::eval_stirling_function_series(*a, &pt)?],
                None => {
                    let reg = registry::register_all()?;
                    select_ids(&reg, ids)?
                        .iter()
                        .map(|id| numeric::eval_identity(&reg, id, &pt))
                        .collect::<Result<Vec<_>, _>>()?
                }
            };
            match cli.format {
                Format::Csv => write!(out, "{}", numeric::eval_csv(&rows))?,
                Format::Json => {
                    for r in &rows {
                        writeln!(out, "{}", serde_json::to_string(r).unwrap())?;
                    }
                }
                Format::Text => {
                    for r in &rows {
                        writeln!(
                            out,
                            "{:<18} lhs {:.15e} rhs {:.15e} absdiff {:.3e}",
                            r.identity, r.lhs, r.rhs, r.absdiff
                        )?;
                    }
                }
            }
        }
        Command::Accel {
            ids,
            point,
            order,
            p,
            tol,
        } => {
            let mut pt = EvalPoint::parse(point)?.with_truncation(*order);
            pt.p = *p;
            let reg = registry::register_all()?;
            let rows = select_ids(&reg, ids)?
                .iter()
                .map(|id| numeric::measure_acceleration(&reg, id, &pt, *tol))
                .collect::<Result<Vec<_>, _>>()?;
            match cli.format {
                Format::Csv => write!(out, "{}", numeric::accel_csv(&rows))?,
                Format::Json => {
                    for r in &rows {
                        writeln!(out, "{}", serde_json::to_string(r).unwrap())?;
                    }
                }
                Format::Text => {
                    for r in &rows {
                        let mark = |ok: bool| if ok { "" } else { " (not converged)" };
                        writeln!(
                            out,
                            "{:<18} lhs {}{} rhs {}{}",
                            r.identity,
                            r.lhs_terms_to_tol,
                            mark(r.lhs_converged),
                            r.rhs_terms_to_tol,
                            mark(r.rhs_converged)
                        )?;
                    }
                }
            }
        }
        Command::List => {
            let reg = registry::register_all()?;
            for rec in reg.records() {
                let symbols: Vec<&str> = rec.symbols.iter().map(|s| s.name()).collect();
                match cli.format {
                    Format::Json => writeln!(
                        out,
                        "{}",
                        json!({
                            "identity": rec.id,
                            "paper_eq": rec.paper_eq,
                            "kind": rec.kind.as_str(),
                            "symbols": symbols,
                            "notes": rec.notes,
                        })
                    )?,
                    Format::Csv => writeln!(
                        out,
                        "{},{},{},{}",
                        rec.id,
                        rec.paper_eq,
                        rec.kind,
                        symbols.join(" ")
                    )?,
                    Format::Text => writeln!(
                        out,
                        "{:<18} {:<10} {:<20} {{{}}}",
                        rec.id,
                        rec.paper_eq,
                        rec.kind,
                        symbols.join(",")
                    )?,
                }
            }
        }
    }
    Ok(())
}

/// Expands "all" or a comma list; every id must exist.
fn select_ids(reg: &Registry, ids: &str) -> Result<Vec<String>, Error> {
    if ids.trim() == "all" {
        return Ok(reg.ids());
    }
    let picked: Vec<String> = ids
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    if picked.is_empty() {
        return Err(Error::Parse("no identity ids given".into()));
    }
    for id in &picked {
        reg.lookup(id)?;
    }
    Ok(picked)
}

/// One rational per line; blank lines and '#' comments are skipped.
fn read_rationals(text: &str) -> Result<Vec<Rational>, Error> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_rational)
        .collect()
}

fn transform(kind: TransformKind, values: &[Rational], lambda: &Rational, mu: &Rational) -> Result<Vec<Rational>, Error> {
    let as_scalars = |polys: Vec<MPoly>| -> Vec<Rational> {
        polys
            .into_iter()
            .map(|p| p.as_constant().expect("rational input gives rational output"))
            .collect()
    };
    match kind {
        TransformKind::Binomial | TransformKind::InverseBinomial => {
            let a = CoeffSeq::from_rationals("input", values);
            Ok(as_scalars(binomial_transform_prefix(&a, values.len())))
        }
        TransformKind::Euler => {
            if values.is_empty() {
                return Ok(Vec::new());
            }
            let f = TSeries::from_rationals(values, values.len() - 1);
            Ok(as_scalars(euler_transform(&f, lambda, mu)?.into_coeffs()))
        }
    }
}

fn write_rationals(format: Format, values: &[Rational], out: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Json => {
            let v: Vec<String> = values.iter().map(render_rational).collect();
            writeln!(out, "{}", json!(v))
        }
        _ => {
            for v in values {
                writeln!(out, "{}", render_rational(v))?;
            }
            Ok(())
        }
    }
}

fn seq(
    format: Format,
    name: &str,
    count: usize,
    r: Option<u64>,
    params: &SequenceParams,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let seqs = Sequences::new(params.clone());
    if name == "stirling" || name == "r-stirling" {
        let r = if name == "stirling" {
            0
        } else {
            r.ok_or_else(|| Error::Parse("r-stirling needs --r".into()))?
        };
        let table = seqs.r_stirling_table(r);
        let mut rows = Vec::new();
        for n in r..r + count as u64 {
            rows.push(table.row(n)?);
        }
        match format {
            Format::Json => {
                let v: Vec<Vec<String>> = rows
                    .iter()
                    .map(|row| row.iter().map(render_rational).collect())
                    .collect();
                writeln!(out, "{}", json!(v))?;
            }
            _ => {
                let sep = if format == Format::Csv { "," } else { "\t" };
                for row in &rows {
                    let cells: Vec<String> = row.iter().map(render_rational).collect();
                    writeln!(out, "{}", cells.join(sep))?;
                }
            }
        }
        return Ok(());
    }
    let which = SeqName::parse(name).ok_or_else(|| Error::Parse(format!("unknown sequence {name:?}")))?;
    let values = seqs.by_name(which).prefix(count);
    write_rationals(format, &values, out)?;
    Ok(())
}
