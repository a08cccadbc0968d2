//! `cm2` — primes of potentially decomposable reduction for squares of CM
//! elliptic curves, exact intersection multiplicities, discriminant
//! exponents, and the closed logarithmic formula.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification mismatch,
//! 3 unhandled dyadic Gross–Keating configuration.

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use cm2::error::Error;
use cm2::formula::{closed_q, evaluate_closed_formula, CharConvention, FactoredProduct};
use cm2::gross::gross_lattice;
use cm2::intersection::{conjecture_scan, discriminant_factor, pdr_report};
use cm2::order::CmOrder;
use cm2::polarization::{enumerate_polarizations, HermitianForm};
use cm2::report::{bundled_rows, parse_rows, verify_tables};
use cm2::sieve::{candidate_primes, enumerate_extensions};
use cm2::Result;

#[derive(Parser)]
#[command(
    name = "cm2",
    version,
    about = "Decomposable-reduction primes and intersection numbers for E² with CM by √−d",
    disable_help_subcommand = true
)]
struct Cli {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the indecomposable principal polarization classes of O².
    Polarizations {
        /// Positive d with −d a fundamental discriminant.
        #[arg(long)]
        disc: i64,
    },
    /// Print the rank-3 Gram matrix of the norm form on self-adjoint
    /// endomorphisms for one polarization.
    Gram {
        #[arg(long)]
        disc: i64,
        /// Polarization as "a,c,b1,b2" with b = b1 + b2·w.
        #[arg(long)]
        pol: String,
    },
    /// Run the determinant sieve: rank-4 extensions before and after the
    /// mod-4 congruence filter, and the resulting candidate primes.
    Sieve {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        pol: String,
    },
    /// Per-prime intersection multiplicities with embedding contributions.
    Pdr {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        pol: String,
    },
    /// Factored reduction discriminant (12e for inert or p = d/4, 6e for
    /// other ramified primes).
    Discriminant {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        pol: String,
    },
    /// Evaluate the closed logarithmic formula (odd d only).
    ClosedFormula {
        #[arg(long)]
        disc: i64,
        #[arg(long)]
        pol: String,
        /// Character convention: minus_d_over_n (default) or n_over_d.
        #[arg(long, default_value = "minus_d_over_n")]
        char_convention: String,
    },
    /// Recompute both columns of the bundled ground-truth tables and diff.
    VerifyTables {
        /// Only rows with d ≤ this bound.
        #[arg(long, default_value_t = 200)]
        disc_max: i64,
        /// Alternative table data file (JSON array of rows).
        #[arg(long)]
        data: Option<std::path::PathBuf>,
    },
    /// Compare determinant-supported sieve primes against actual positive
    /// multiplicity over all fundamental discriminants up to a bound.
    ConjectureScan {
        #[arg(long, default_value_t = 200)]
        disc_max: i64,
    },
}

fn parse_pol(order: &CmOrder, text: &str) -> Result<HermitianForm> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::InvalidInput(format!(
            "polarization must be \"a,c,b1,b2\" (got {text:?})"
        )));
    }
    let mut nums = [0i64; 4];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|_| {
            Error::InvalidInput(format!("polarization component {part:?} is not an integer"))
        })?;
    }
    HermitianForm::new(order, nums[0], nums[1], nums[2], nums[3])
}

fn factored_json(map: &FactoredProduct) -> serde_json::Value {
    json!(map)
}

fn format_factored(map: &FactoredProduct) -> String {
    if map.is_empty() {
        return "1".to_string();
    }
    map.iter()
        .map(|(p, e)| format!("{p}^{e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn pol_array(form: &HermitianForm) -> serde_json::Value {
    json!([form.a, form.c, form.b1, form.b2])
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Polarizations { disc } => {
            let order = CmOrder::new(disc)?;
            let pols = enumerate_polarizations(&order);
            if cli.json {
                let items: Vec<_> = pols
                    .iter()
                    .map(|p| json!({"pol": pol_array(p), "display": p.to_string()}))
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "disc": disc,
                        "count": pols.len(),
                        "polarizations": items,
                    }))
                    .unwrap()
                );
            } else {
                for p in &pols {
                    println!("{p}");
                }
            }
            Ok(0)
        }
        Cmd::Gram { disc, pol } => {
            let order = CmOrder::new(disc)?;
            let form = parse_pol(&order, &pol)?;
            let l = gross_lattice(&order, &form);
            if cli.json {
                let rows: Vec<Vec<String>> = l
                    .gram
                    .iter()
                    .map(|r| r.iter().map(|v| v.to_string()).collect())
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "disc": disc,
                        "pol": pol_array(&form),
                        "gram": rows,
                    }))
                    .unwrap()
                );
            } else {
                for row in &l.gram {
                    let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                    println!("[{}]", cells.join(", "));
                }
            }
            Ok(0)
        }
        Cmd::Sieve { disc, pol } => {
            let order = CmOrder::new(disc)?;
            let form = parse_pol(&order, &pol)?;
            let l = gross_lattice(&order, &form);
            let pre = enumerate_extensions(&l, false);
            let post = enumerate_extensions(&l, true);
            let sixteenth = |t: &cm2::sieve::ExtensionMatrix| (&t.det / 16i64).to_string();
            let pre16: Vec<String> = pre.iter().map(&sixteenth).collect();
            let post16: Vec<String> = post.iter().map(&sixteenth).collect();
            let primes = candidate_primes(&order, &l);
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "disc": disc,
                        "pol": pol_array(&form),
                        "pre_congruence": pre.len(),
                        "post_congruence": post.len(),
                        "pre_det16": pre16,
                        "post_det16": post16,
                        "candidate_primes": primes,
                    }))
                    .unwrap()
                );
            } else {
                println!("pre-congruence extensions: {}", pre.len());
                println!("  det/16: {}", pre16.join(" "));
                println!("post-congruence extensions: {}", post.len());
                println!("  det/16: {}", post16.join(" "));
                let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                println!("candidate primes: {}", ps.join(" "));
            }
            Ok(0)
        }
        Cmd::Pdr { disc, pol } => {
            let order = CmOrder::new(disc)?;
            let form = parse_pol(&order, &pol)?;
            let report = pdr_report(&order, &form)?;
            if cli.json {
                let entries: Vec<_> = report
                    .entries
                    .iter()
                    .map(|e| json!({"p": e.p, "e": e.e.to_string().parse::<i64>().unwrap()}))
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "disc": disc,
                        "pol": pol_array(&form),
                        "entries": entries,
                        "exponents": factored_json(&report.exponents),
                    }))
                    .unwrap()
                );
            } else {
                for e in &report.entries {
                    let gks: Vec<String> = e
                        .contributions
                        .iter()
                        .map(|c| format!("{:?}", c.gk))
                        .collect();
                    println!("p={} e={} gk={}", e.p, e.e, gks.join(" "));
                }
                println!("discriminant: {}", format_factored(&report.exponents));
            }
            Ok(0)
        }
        Cmd::Discriminant { disc, pol } => {
            let order = CmOrder::new(disc)?;
            let form = parse_pol(&order, &pol)?;
            let report = pdr_report(&order, &form)?;
            if cli.json {
                let factors: Vec<_> = report
                    .entries
                    .iter()
                    .map(|e| json!({"p": e.p, "factor": discriminant_factor(&order, e.p)}))
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "disc": disc,
                        "pol": pol_array(&form),
                        "exponents": factored_json(&report.exponents),
                        "factors": factors,
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", format_factored(&report.exponents));
            }
            Ok(0)
        }
        Cmd::ClosedFormula {
            disc,
            pol,
            char_convention,
        } => {
            let order = CmOrder::new(disc)?;
            let form = parse_pol(&order, &pol)?;
            let convention: CharConvention = char_convention.parse()?;
            let q = closed_q(&order, &form)?;
            let value = evaluate_closed_formula(&order, &form, convention)?;
            if cli.json {
                let qrows: Vec<Vec<String>> = q
                    .iter()
                    .map(|r| r.iter().map(|v| v.to_string()).collect())
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "disc": disc,
                        "pol": pol_array(&form),
                        "convention": convention.to_string(),
                        "q": qrows,
                        "formula": factored_json(&value),
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", format_factored(&value));
            }
            Ok(0)
        }
        Cmd::VerifyTables { disc_max, data } => {
            let rows = match data {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| {
                        Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
                    })?;
                    parse_rows(&text)?
                }
                None => bundled_rows(),
            };
            let report = verify_tables(&rows, disc_max)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                for o in &report.outcomes {
                    let status = if o.ok() { "ok" } else { "MISMATCH" };
                    println!("d={} pol={:?}: {status}", o.d, o.pol);
                    for detail in &o.details {
                        println!("  {detail}");
                    }
                }
                println!(
                    "{} rows checked, {} mismatches, {} skipped (d > {disc_max})",
                    report.outcomes.len(),
                    report.mismatches(),
                    report.skipped
                );
            }
            Ok(if report.all_ok() { 0 } else { 2 })
        }
        Cmd::ConjectureScan { disc_max } => {
            let outcome = conjecture_scan(disc_max);
            let gk2 = outcome
                .errors
                .iter()
                .filter(|(.., msg)| msg.contains("Gross-Keating invariants at p=2 unhandled"))
                .count();
            if cli.json {
                let exceptions: Vec<_> = outcome
                    .exceptions
                    .iter()
                    .map(|ex| {
                        json!({
                            "d": ex.d,
                            "pol": pol_array(&ex.pol),
                            "p": ex.p,
                            "divides_d": ex.divides_d,
                        })
                    })
                    .collect();
                let errors: Vec<String> = outcome
                    .errors
                    .iter()
                    .map(|(d, pol, p, msg)| format!("d={d} pol={pol} p={p}: {msg}"))
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "disc_max": disc_max,
                        "exceptions": exceptions,
                        "errors": errors,
                        "gk2_unhandled": gk2,
                    }))
                    .unwrap()
                );
            } else {
                for ex in &outcome.exceptions {
                    println!(
                        "exception: d={} pol={} p={} (p {} d)",
                        ex.d,
                        ex.pol,
                        ex.p,
                        if ex.divides_d { "divides" } else { "does not divide" }
                    );
                }
                for (d, pol, p, msg) in &outcome.errors {
                    println!("error: d={d} pol={pol} p={p}: {msg}");
                }
                println!(
                    "{} exceptions, {} errors ({} unhandled dyadic cases)",
                    outcome.exceptions.len(),
                    outcome.errors.len(),
                    gk2
                );
            }
            Ok(if outcome.errors.is_empty() { 0 } else { 3 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // Help/version go to stdout, diagnostics to stderr.
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::GK2Unhandled(_) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
