//! `frobsf`: constants and experiments for squarefree values of
//! `f(a_p(E), p)`.
//!
//! Constants come out as JSON by default, tables (`ap`, `pi-sf`) as CSV.
//! With CSV output the echoed inputs and the wall-clock time go to stderr.
//!
//! User polynomials are assumed squarefree in `Z[x, y]`; this is not checked.

mod poly;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use frobsf::frobenius::{
    ap_series, family_average, pi_sf_with, FamilyMode, Sample, SfOptions, AP_SERIES_LIMIT,
};
use frobsf::serre::{constant_generic, constant_serre, serre_data, Curve, SerreConstant};
use frobsf::BiPoly;
use serde_json::{json, Value};

use report::{float, float_field, rational};

const DEFAULT_ELL_MAX: u64 = 101;

#[derive(Parser)]
#[command(name = "frobsf", version, about)]
struct Cli {
    /// Worker threads for data-parallel stages (default: all cores).
    #[arg(long, global = true, env = "FROBSF_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated generic constant C_f.
    ConstantGeneric {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        ell: EllArg,
        #[command(flatten)]
        out: Output,
    },
    /// Truncated constant C_{E,f}, assuming E is a Serre curve.
    ConstantSerre {
        #[command(flatten)]
        curve: CurveArg,
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        ell: EllArg,
        #[command(flatten)]
        out: Output,
    },
    /// Frobenius traces a_p for good primes 5 <= p <= x_max.
    Ap {
        #[command(flatten)]
        curve: CurveArg,
        #[command(flatten)]
        x: XArg,
        #[command(flatten)]
        out: Output,
    },
    /// Count primes with f(a_p, p) squarefree and compare with C_{E,f}.
    PiSf {
        #[command(flatten)]
        curve: CurveArg,
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        x: XArg,
        #[command(flatten)]
        ell: EllArg,
        /// Comma-separated squarefree n for the n^2 | f_p rows
        /// (default: squarefree n in 2..=20).
        #[arg(long, value_delimiter = ',')]
        moduli: Option<Vec<u64>>,
        #[command(flatten)]
        out: Output,
    },
    /// Average C_{E,f} (or the empirical ratio) over |a| <= A, |b| <= B.
    FamilyAverage {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long = "a-bound", visible_alias = "A", value_name = "A")]
        a_bound: i64,
        #[arg(long = "b-bound", visible_alias = "B", value_name = "B")]
        b_bound: i64,
        #[arg(long, value_enum, default_value_t = ModeArg::Constants)]
        mode: ModeArg,
        /// Prime bound for `--mode empirical`.
        #[arg(long, required_if_eq("mode", "empirical"))]
        x_max: Option<u64>,
        #[command(flatten)]
        ell: EllArg,
        /// Evaluate a seeded random subset of this many curves.
        #[arg(long)]
        sample_size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Run the built-in oracle suite; prints PASS/FAIL per check.
    Verify,
}

#[derive(Args)]
struct PolyArg {
    /// Polynomial f(x, y), e.g. "x^2-4*y", or `koblitz` / `frobdisc`.
    #[arg(long = "f", value_name = "POLY", allow_hyphen_values = true)]
    f: String,
}

#[derive(Args)]
struct CurveArg {
    /// Weierstrass coefficients "a,b" of y^2 = x^3 + a x + b.
    #[arg(long, value_name = "A,B", allow_hyphen_values = true, value_parser = parse_curve)]
    curve: Curve,
}

#[derive(Args)]
struct EllArg {
    /// Truncation point of the Euler product.
    #[arg(long, default_value_t = DEFAULT_ELL_MAX)]
    ell_max: u64,
}

#[derive(Args)]
struct XArg {
    /// Prime bound, at most 10^6.
    #[arg(long)]
    x_max: u64,
}

#[derive(Args)]
struct Output {
    /// Report format (default: json for constants, csv for tables).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Constants,
    Empirical,
}

fn parse_curve(text: &str) -> Result<Curve, String> {
    let inner = text.trim();
    let inner = inner
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(inner);
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| format!("expected `a,b`, got `{text}`"))?;
    let coeff = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|e| format!("bad coefficient `{}`: {e}", s.trim()))
    };
    Curve::new(coeff(a)?, coeff(b)?).map_err(|e| e.to_string())
}

fn parse_f(arg: &PolyArg) -> Result<BiPoly> {
    poly::parse_poly(&arg.f).with_context(|| format!("--f {:?}", arg.f))
}

fn check_x_max(x_max: u64) -> Result<()> {
    if x_max > AP_SERIES_LIMIT {
        bail!("--x-max {x_max} is above the limit {AP_SERIES_LIMIT}");
    }
    Ok(())
}

fn curve_json(curve: &Curve) -> Value {
    json!({"a": curve.a(), "b": curve.b()})
}

/// A finished report: the text to write plus, for CSV, a metadata line for stderr.
struct Rendered {
    text: String,
    meta: Option<String>,
}

fn finish(
    format: Format,
    mut json_report: Value,
    csv: impl FnOnce() -> String,
    start: Instant,
) -> Rendered {
    let secs = start.elapsed().as_secs_f64();
    match format {
        Format::Json => {
            json_report["wall_clock_seconds"] = float(secs);
            Rendered {
                text: report::render_json(&json_report),
                meta: None,
            }
        }
        Format::Csv => {
            json_report["wall_clock_seconds"] = float(secs);
            let meta = json!({
                "command": json_report["command"],
                "inputs": json_report["inputs"],
                "wall_clock_seconds": json_report["wall_clock_seconds"],
            });
            Rendered {
                text: csv(),
                meta: Some(meta.to_string()),
            }
        }
    }
}

fn constant_json(c: &SerreConstant) -> Value {
    json!({
        "constant": rational(&c.value),
        "constant_decimal": float(c.value_f64()),
        "ell_max": c.ell_max,
        "tail_estimate": float(c.tail_estimate),
        "decay_constant": float(c.decay_constant),
    })
}

fn local_factor_json(c: &SerreConstant) -> Vec<Value> {
    c.local_factors
        .iter()
        .map(|d| {
            json!({
                "ell": d.modulus,
                "density": rational(&d.ratio()),
                "density_decimal": float(d.value::<f64>()),
                "factor": rational(&d.complement()),
            })
        })
        .collect()
}

fn local_factor_rows(c: &SerreConstant) -> Vec<Vec<String>> {
    c.local_factors
        .iter()
        .map(|d| {
            vec![
                "euler".into(),
                d.modulus.to_string(),
                String::new(),
                rational(&d.ratio()),
                float_field(d.value::<f64>()),
            ]
        })
        .collect()
}

const CONSTANT_CSV_HEADER: [&str; 5] = ["part", "n", "mu", "density", "density_decimal"];

fn run(command: Command) -> Result<(Rendered, Option<PathBuf>)> {
    let start = Instant::now();
    let (rendered, output) = match command {
        Command::ConstantGeneric { poly, ell, out } => {
            let f = parse_f(&poly)?;
            let c = constant_generic(&f, ell.ell_max)?;
            let mut value = json!({
                "command": "constant-generic",
                "inputs": {"f": f.to_string(), "ell_max": ell.ell_max},
            });
            merge(&mut value, constant_json(&c));
            value["local_factors"] = Value::from(local_factor_json(&c));
            let csv = || report::render_csv(&CONSTANT_CSV_HEADER, &local_factor_rows(&c));
            (
                finish(out.format.unwrap_or(Format::Json), value, csv, start),
                out.output,
            )
        }
        Command::ConstantSerre {
            curve: CurveArg { curve },
            poly,
            ell,
            out,
        } => {
            let f = parse_f(&poly)?;
            let sd = serre_data(&curve)?;
            let c = constant_serre(&curve, &f, ell.ell_max)?;
            let mut value = json!({
                "command": "constant-serre",
                "inputs": {"curve": curve_json(&curve), "f": f.to_string(), "ell_max": ell.ell_max},
                "hypothesis": "the mod-m Galois images are those of a Serre curve",
                "serre_data": {
                    "delta": sd.delta,
                    "delta_sf": sd.delta_sf,
                    "d_fund": sd.d_fund,
                    "m_e": sd.m_e,
                },
            });
            merge(&mut value, constant_json(&c));
            value["finite_part"] = Value::from(rational(&c.finite_part));
            value["generic_part"] = Value::from(rational(&c.generic_part));
            value["finite_terms"] = c
                .finite_terms
                .iter()
                .map(|(n, mu, d)| {
                    json!({
                        "n": n,
                        "mu": mu,
                        "density": rational(&d.ratio()),
                        "density_decimal": float(d.value::<f64>()),
                        "kind": report::kind(d),
                    })
                })
                .collect();
            value["local_factors"] = Value::from(local_factor_json(&c));
            let csv = || {
                let mut rows: Vec<Vec<String>> = c
                    .finite_terms
                    .iter()
                    .map(|(n, mu, d)| {
                        vec![
                            "finite".into(),
                            n.to_string(),
                            mu.to_string(),
                            rational(&d.ratio()),
                            float_field(d.value::<f64>()),
                        ]
                    })
                    .collect();
                rows.extend(local_factor_rows(&c));
                report::render_csv(&CONSTANT_CSV_HEADER, &rows)
            };
            (
                finish(out.format.unwrap_or(Format::Json), value, csv, start),
                out.output,
            )
        }
        Command::Ap {
            curve: CurveArg { curve },
            x,
            out,
        } => {
            check_x_max(x.x_max)?;
            let series = ap_series(&curve, x.x_max)?;
            let value = json!({
                "command": "ap",
                "inputs": {"curve": curve_json(&curve), "x_max": x.x_max},
                "excluded_primes": series.skipped,
                "hasse_violations": series.hasse_violations().len(),
                "entries": series.entries.iter().map(|&(p, a)| json!([p, a])).collect::<Vec<_>>(),
            });
            let csv = || {
                let rows: Vec<Vec<String>> = series
                    .entries
                    .iter()
                    .map(|(p, a)| vec![p.to_string(), a.to_string()])
                    .collect();
                report::render_csv(&["p", "a_p"], &rows)
            };
            (
                finish(out.format.unwrap_or(Format::Csv), value, csv, start),
                out.output,
            )
        }
        Command::PiSf {
            curve: CurveArg { curve },
            poly,
            x,
            ell,
            moduli,
            out,
        } => {
            check_x_max(x.x_max)?;
            let f = parse_f(&poly)?;
            let mut options = SfOptions {
                ell_max: ell.ell_max,
                ..SfOptions::default()
            };
            if let Some(moduli) = moduli {
                options.moduli = moduli;
            }
            let r = pi_sf_with(&ap_series(&curve, x.x_max)?, &f, &options)?;
            let expected_sf = r
                .constant
                .as_ref()
                .ok()
                .map(|c| c.value_f64() * r.pi_x as f64);
            let constant = match &r.constant {
                Ok(c) => constant_json(c),
                Err(e) => json!({"error": e.to_string()}),
            };
            let value = json!({
                "command": "pi-sf",
                "inputs": {
                    "curve": curve_json(&curve),
                    "f": f.to_string(),
                    "x_max": x.x_max,
                    "ell_max": ell.ell_max,
                    "moduli": options.moduli,
                },
                "hypothesis": "expected values assume the mod-m Galois images of a Serre curve",
                "pi_x": r.pi_x,
                "good_primes": r.good_primes,
                "excluded_primes": r.excluded,
                "sf_count": r.sf_count,
                "zero_count": r.zero_count,
                "empirical_ratio": float(r.empirical_ratio),
                "expected_sf_count": expected_sf.map_or(Value::Null, float),
                "constant": constant,
                "divisibility": r.divisibility.iter().map(|row| json!({
                    "n": row.n,
                    "observed": row.observed,
                    "expected": float(row.expected),
                    "ratio": rational(&row.ratio),
                    "std_dev": float(row.std_dev),
                    "z_score": float(row.z_score()),
                })).collect::<Vec<_>>(),
            });
            let csv = || {
                let mut rows: Vec<Vec<String>> = r
                    .divisibility
                    .iter()
                    .map(|row| {
                        vec![
                            row.n.to_string(),
                            row.observed.to_string(),
                            float_field(row.expected),
                            rational(&row.ratio),
                            float_field(row.z_score()),
                        ]
                    })
                    .collect();
                rows.push(vec![
                    "squarefree".into(),
                    r.sf_count.to_string(),
                    expected_sf.map_or_else(String::new, float_field),
                    r.constant
                        .as_ref()
                        .map_or_else(|_| String::new(), |c| rational(&c.value)),
                    String::new(),
                ]);
                report::render_csv(&["n", "observed", "expected", "ratio", "z_score"], &rows)
            };
            (
                finish(out.format.unwrap_or(Format::Csv), value, csv, start),
                out.output,
            )
        }
        Command::FamilyAverage {
            poly,
            a_bound,
            b_bound,
            mode,
            x_max,
            ell,
            sample_size,
            seed,
            out,
        } => {
            let f = parse_f(&poly)?;
            let mode = match (mode, x_max) {
                (ModeArg::Constants, _) => FamilyMode::Constants,
                (ModeArg::Empirical, Some(x_max)) => {
                    check_x_max(x_max)?;
                    FamilyMode::Empirical { x_max }
                }
                (ModeArg::Empirical, None) => bail!("--mode empirical needs --x-max"),
            };
            if sample_size == Some(0) {
                bail!("--sample-size must be positive");
            }
            let sample = sample_size.map(|size| Sample { size, seed });
            let r = family_average(a_bound, b_bound, &f, mode, ell.ell_max, sample)?;
            let value = json!({
                "command": "family-average",
                "inputs": {
                    "f": f.to_string(),
                    "a_bound": a_bound,
                    "b_bound": b_bound,
                    "mode": match mode { FamilyMode::Constants => "constants", FamilyMode::Empirical { .. } => "empirical" },
                    "x_max": x_max,
                    "ell_max": ell.ell_max,
                    "sample_size": sample_size,
                    "seed": sample_size.map(|_| seed),
                },
                "family_size": r.family_size,
                "selected": r.selected,
                "evaluated": r.evaluated,
                "skipped_fraction": float(r.skipped_fraction()),
                "average": float(r.average),
                "generic": float(r.generic),
                "difference": float(r.difference()),
                "skipped": r.skipped.iter().map(|s| json!({"a": s.a, "b": s.b, "reason": s.reason})).collect::<Vec<_>>(),
            });
            let csv = || {
                let rows = [
                    ("family_size", r.family_size.to_string()),
                    ("selected", r.selected.to_string()),
                    ("evaluated", r.evaluated.to_string()),
                    ("skipped", r.skipped.len().to_string()),
                    ("average", float_field(r.average)),
                    ("generic", float_field(r.generic)),
                    ("difference", float_field(r.difference())),
                ]
                .into_iter()
                .map(|(k, v)| vec![k.to_string(), v])
                .collect::<Vec<_>>();
                report::render_csv(&["statistic", "value"], &rows)
            };
            (
                finish(out.format.unwrap_or(Format::Json), value, csv, start),
                out.output,
            )
        }
        Command::Verify => unreachable!("handled in main"),
    };
    Ok((rendered, output))
}

/// Appends the fields of `extra` (an object) to `value`, keeping order.
fn merge(value: &mut Value, extra: Value) {
    if let (Value::Object(target), Value::Object(source)) = (value, extra) {
        target.extend(source);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    if let Command::Verify = cli.command {
        return match verify::run(&mut std::io::stdout().lock()) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::FAILURE,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        };
    }
    let outcome = run(cli.command).and_then(|(rendered, path)| {
        report::emit(&rendered.text, path.as_deref())?;
        if let Some(meta) = rendered.meta {
            eprintln!("{meta}");
        }
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
