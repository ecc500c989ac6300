//! Command-line front end.
//!
//! Exit status: 0 on success, 1 on domain or input errors, 2 on
//! conditioning or accuracy failures (including a `validate` run in which
//! some case misses its tolerance).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_coeffs::{shared_table, ClosedFormVariant};
use crate::gram::{gram_matrix_with, orthonormalize_gram, GsMode, OrderingKind};
use crate::oracle::{verify_closed_forms, QuadratureSettings};
use crate::potential::LaurentPoly;
use crate::rational::{format_float, format_rational, parse_rational, ExactRational};
use crate::serialize::{self, BasisJson, CoeffsJson, GramJson, HamiltonianJson, RitzJson};
use crate::spectra::{convergence_scan, hamiltonian_matrix, ritz_solve, HamiltonianSpec};

#[derive(Debug, Parser)]
#[command(
    name = "singular-basis",
    version,
    about = "Exact inner products, Gram matrices and Rayleigh-Ritz spectra for the basis x^n exp(-a(x^2 + x^-2)/2)"
)]
pub struct RunConfig {
    /// Worker threads for matrix assembly and quadrature (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long = "output", short = 'o')]
    pub output_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    Interleaved,
    Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tables of a_k(l), b_k(n) and the polynomials Λ_n.
    Coeffs {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Prefactor-stripped Gram matrix.
    Gram {
        #[arg(short = 'N', long = "N")]
        size: usize,
        #[arg(long, value_parser = parse_scale)]
        a: ExactRational,
        #[arg(long, value_enum, default_value_t = OrderingArg::Interleaved)]
        ordering: OrderingArg,
        /// Digits used for CSV output.
        #[arg(long, default_value_t = 128)]
        precision: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Gram-Schmidt over the interleaved ordering.
    Orthonormalize {
        #[arg(short = 'N', long = "N")]
        size: usize,
        #[arg(long, value_parser = parse_scale)]
        a: ExactRational,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, default_value_t = 256)]
        precision: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact Hamiltonian matrix elements.
    Matelem {
        #[arg(long, value_parser = parse_potential)]
        potential: LaurentPoly,
        #[arg(short = 'N', long = "N")]
        size: usize,
        #[arg(long, value_parser = parse_scale)]
        a: ExactRational,
        /// Coefficient of -d²/dx².
        #[arg(long, value_parser = parse_scale, default_value = "1/2")]
        kinetic: ExactRational,
        #[arg(long, default_value_t = 128)]
        precision: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rayleigh-Ritz eigenvalues; several comma-separated values of a give a sweep.
    Ritz {
        #[arg(long, value_parser = parse_potential)]
        potential: LaurentPoly,
        #[arg(short = 'N', long = "N")]
        size: usize,
        #[arg(long, value_parser = parse_scale, value_delimiter = ',', required = true)]
        a: Vec<ExactRational>,
        #[arg(long, value_parser = parse_scale, default_value = "1/2")]
        kinetic: ExactRational,
        #[arg(long, default_value_t = 128)]
        precision: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Convergence of the lowest Ritz values over a list of basis sizes.
    Scan {
        #[arg(long, value_parser = parse_potential)]
        potential: LaurentPoly,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_parser = parse_scale)]
        a: ExactRational,
        #[arg(long, value_parser = parse_scale, default_value = "1/2")]
        kinetic: ExactRational,
        #[arg(long, default_value_t = 128)]
        precision: u32,
        /// Eigenvalues per row in the CSV table.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed form against quadrature over a grid of n and a.
    Validate {
        /// Inclusive range such as -8..8.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range, default_value = "-8..8")]
        n_range: (i64, i64),
        #[arg(long, value_parser = parse_scale, value_delimiter = ',', default_value = "1/2,1,2,5")]
        a: Vec<ExactRational>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 128)]
        precision: u32,
        /// Check the form with the extra factor 2 instead (expected to fail).
        #[arg(long)]
        as_printed: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn parse_scale(s: &str) -> std::result::Result<ExactRational, String> {
    let v = parse_rational(s).map_err(|e| e.to_string())?;
    if v <= 0 {
        return Err(format!("must be positive, got {s}"));
    }
    Ok(v)
}

fn parse_potential(s: &str) -> std::result::Result<LaurentPoly, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound in {s:?}"))?;
    let hi: i64 = hi
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| format!("bad upper bound in {s:?}"))?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

fn spec_for(potential: &LaurentPoly, kinetic: &ExactRational) -> HamiltonianSpec {
    HamiltonianSpec {
        kinetic_coeff: kinetic.clone(),
        ..HamiltonianSpec::new(potential.clone())
    }
}

fn sink<'a>(out: &OutputArgs, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match &out.output_path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    })
}

fn write_json<T: Serialize>(value: &T, mut w: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct RitzRunJson {
    kind: &'static str,
    potential: String,
    kinetic_coeff: String,
    results: Vec<RitzJson>,
}

#[derive(Serialize)]
struct ScanRow {
    basis_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<RitzJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Executes one command, writing to `stdout` unless an output path is given.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    if let Some(threads) = config.threads {
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match &config.command {
        Command::Coeffs { max_n, out } => {
            let table = shared_table(*max_n);
            let w = sink(out, stdout)?;
            match out.format {
                Format::Json => write_json(&CoeffsJson::new(&table, *max_n), w),
                Format::Csv => serialize::write_coeffs_csv(&table, *max_n, w),
            }
        }
        Command::Gram {
            size,
            a,
            ordering,
            precision,
            out,
        } => {
            let kind = match ordering {
                OrderingArg::Interleaved => OrderingKind::Interleaved,
                OrderingArg::Parity => OrderingKind::Parity,
            };
            let g = gram_matrix_with(*size, a, kind)?;
            let w = sink(out, stdout)?;
            match out.format {
                Format::Json => write_json(&GramJson::from(&g), w),
                Format::Csv => serialize::write_gram_csv(&g, *precision, w),
            }
        }
        Command::Orthonormalize {
            size,
            a,
            mode,
            precision,
            out,
        } => {
            let g = gram_matrix_with(*size, a, OrderingKind::Interleaved)?;
            let mode = match mode {
                ModeArg::Exact => GsMode::Exact,
                ModeArg::Float => GsMode::Float {
                    precision_bits: *precision,
                },
            };
            let basis = orthonormalize_gram(&g, mode)?;
            let w = sink(out, stdout)?;
            match out.format {
                Format::Json => write_json(&BasisJson::from(&basis), w),
                Format::Csv => serialize::write_basis_csv(&basis, *precision, w),
            }
        }
        Command::Matelem {
            potential,
            size,
            a,
            kinetic,
            precision,
            out,
        } => {
            let spec = spec_for(potential, kinetic);
            let h = hamiltonian_matrix(&spec, *size, a)?;
            let ordering = crate::gram::ordering(*size, OrderingKind::Interleaved);
            let w = sink(out, stdout)?;
            match out.format {
                Format::Json => write_json(
                    &HamiltonianJson::new(&h, &ordering, a, kinetic, potential.to_string()),
                    w,
                ),
                Format::Csv => serialize::write_complex_matrix_csv(&h, &ordering, *precision, w),
            }
        }
        Command::Ritz {
            potential,
            size,
            a,
            kinetic,
            precision,
            out,
        } => {
            let spec = spec_for(potential, kinetic);
            let results = a
                .iter()
                .map(|a| ritz_solve(&spec, *size, a, *precision))
                .collect::<Result<Vec<_>>>()?;
            let mut w = sink(out, stdout)?;
            match out.format {
                Format::Json => write_json(
                    &RitzRunJson {
                        kind: "ritz",
                        potential: potential.to_string(),
                        kinetic_coeff: format_rational(kinetic),
                        results: results.iter().map(RitzJson::from).collect(),
                    },
                    w,
                ),
                Format::Csv => {
                    let mut csv = csv::Writer::from_writer(&mut w);
                    csv.write_record(["a", "N", "k", "eigenvalue", "residual"])?;
                    for r in &results {
                        for (k, (e, res)) in r.eigenvalues.iter().zip(&r.residual_norms).enumerate() {
                            csv.write_record([
                                format_rational(&r.scale_a),
                                r.basis_size.to_string(),
                                k.to_string(),
                                format_float(e),
                                format_float(res),
                            ])?;
                        }
                    }
                    csv.flush()?;
                    Ok(())
                }
            }
        }
        Command::Scan {
            potential,
            sizes,
            a,
            kinetic,
            precision,
            levels,
            out,
        } => {
            let spec = spec_for(potential, kinetic);
            let results = convergence_scan(&spec, sizes, a, *precision)?;
            let w = sink(out, stdout)?;
            match out.format {
                Format::Json => {
                    let rows: Vec<ScanRow> = sizes
                        .iter()
                        .zip(&results)
                        .map(|(&n, r)| match r {
                            Ok(r) => ScanRow {
                                basis_size: n,
                                result: Some(r.into()),
                                error: None,
                            },
                            Err(e) => ScanRow {
                                basis_size: n,
                                result: None,
                                error: Some(e.to_string()),
                            },
                        })
                        .collect();
                    write_json(&rows, w)
                }
                Format::Csv => serialize::write_scan_csv(sizes, &results, *levels, w),
            }
        }
        Command::Validate {
            n_range,
            a,
            tol,
            precision,
            as_printed,
            out,
        } => {
            let variant = if *as_printed {
                ClosedFormVariant::AsPrinted
            } else {
                ClosedFormVariant::Corrected
            };
            let n_values: Vec<i64> = (n_range.0..=n_range.1).collect();
            let settings = QuadratureSettings::for_precision(*precision);
            let report = verify_closed_forms(&n_values, a, *tol, variant, &settings)?;
            let mut w = sink(out, stdout)?;
            match out.format {
                Format::Json => write_json(&report, &mut w)?,
                Format::Csv => {
                    let mut csv = csv::Writer::from_writer(&mut w);
                    csv.write_record(["n", "a", "closed_form", "oracle", "relative_deviation", "pass"])?;
                    for c in &report.cases {
                        csv.write_record([
                            c.n.to_string(),
                            c.a.clone(),
                            c.closed_form.clone(),
                            c.oracle.clone(),
                            c.relative_deviation.clone(),
                            c.pass.to_string(),
                        ])?;
                    }
                    csv.flush()?;
                }
            }
            if report.all_pass {
                Ok(())
            } else {
                let worst = report
                    .cases
                    .iter()
                    .filter_map(|c| c.relative_deviation.parse::<f64>().ok())
                    .fold(0.0, f64::max);
                Err(Error::Accuracy {
                    achieved: worst,
                    target: *tol,
                })
            }
        }
    }
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&config, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_string(args: &[&str]) -> (Result<()>, String) {
        let config = RunConfig::try_parse_from(args).unwrap();
        let mut buf = Vec::new();
        let r = run(&config, &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn range_parser() {
        assert_eq!(parse_range("-8..8").unwrap(), (-8, 8));
        assert_eq!(parse_range("0..=3").unwrap(), (0, 3));
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("3").is_err());
    }

    #[test]
    fn gram_csv_has_parity_zeros() {
        let (r, text) = run_to_string(&["sb", "gram", "--N", "6", "--a", "1", "--format", "csv"]);
        r.unwrap();
        let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), 6);
        let ordering = [0i64, 1, -1, 2, -2, 3];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), 7);
            for (j, cell) in row[1..].iter().enumerate() {
                if (ordering[i] + ordering[j]) % 2 != 0 {
                    assert_eq!(*cell, "0");
                }
            }
        }
    }

    #[test]
    fn bad_potential_is_rejected_at_parse() {
        assert!(RunConfig::try_parse_from(["sb", "ritz", "--potential", "x^2 + y", "--N", "4", "--a", "1"]).is_err());
        assert_eq!(
            main_with_args(["sb", "ritz", "--potential", "x^2 + y", "--N", "4", "--a", "1"]),
            1
        );
    }

    #[test]
    fn nonpositive_scale_is_rejected() {
        assert_eq!(main_with_args(["sb", "gram", "--N", "3", "--a", "0"]), 1);
        assert_eq!(main_with_args(["sb", "gram", "--N", "0", "--a", "1", "-o", "/dev/null"]), 1);
    }

    #[test]
    fn printed_variant_validation_fails_with_status_two() {
        let (r, text) = run_to_string(&["sb", "validate", "--n-range", "0..1", "--a", "1", "--as-printed"]);
        let err = r.unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(text.contains("\"all_pass\": false"));
    }
}
