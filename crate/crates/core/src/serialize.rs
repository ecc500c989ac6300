//! JSON and CSV layouts.
//!
//! Exact rationals are written as `"p/q"` strings (always with a
//! denominator). Floats are written as decimal strings carrying as many
//! digits as their precision supports, so nothing is lost to `f64`.

use std::io::Write;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::basis::{ComplexRational, Scale};
use crate::error::{Error, Result};
use crate::exact_coeffs::CoeffTable;
use crate::gram::{BasisVectors, GramMatrix, OrthonormalBasis};
use crate::rational::{format_float, format_rational, parse_rational};
use crate::spectra::{ComplexMatrix, RitzResult};

pub const PREFACTOR: &str = "sqrt(pi/a)*exp(-2*a)";

fn rationals(row: &[rug::Rational]) -> Vec<String> {
    row.iter().map(format_rational).collect()
}

fn floats(row: &[Float]) -> Vec<String> {
    row.iter().map(format_float).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramJson {
    pub kind: String,
    pub a: String,
    pub prefactor: String,
    pub ordering: Vec<i64>,
    pub entries: Vec<Vec<String>>,
}

impl From<&GramMatrix> for GramJson {
    fn from(g: &GramMatrix) -> Self {
        GramJson {
            kind: "gram".into(),
            a: format_rational(g.scale.a()),
            prefactor: PREFACTOR.into(),
            ordering: g.ordering.clone(),
            entries: g.entries.iter().map(|r| rationals(r)).collect(),
        }
    }
}

impl TryFrom<GramJson> for GramMatrix {
    type Error = Error;

    fn try_from(j: GramJson) -> Result<GramMatrix> {
        let n = j.ordering.len();
        if j.entries.len() != n || j.entries.iter().any(|r| r.len() != n) {
            return Err(Error::domain("Gram entries do not match the ordering length"));
        }
        let entries = j
            .entries
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(GramMatrix {
            ordering: j.ordering,
            entries,
            scale: Scale::new(parse_rational(&j.a)?)?,
        })
    }
}

pub fn gram_from_json(text: &str) -> Result<GramMatrix> {
    serde_json::from_str::<GramJson>(text)?.try_into()
}

/// Gram matrix as CSV: header `m\n,<exponents…>`, one row per exponent.
pub fn write_gram_csv<W: Write>(g: &GramMatrix, precision_bits: u32, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["m\\n".to_string()];
    header.extend(g.ordering.iter().map(|n| n.to_string()));
    w.write_record(&header)?;
    for (m, row) in g.ordering.iter().zip(g.to_float(precision_bits)) {
        let mut record = vec![m.to_string()];
        record.extend(floats(&row));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisJson {
    pub kind: &'static str,
    pub mode: &'static str,
    pub a: String,
    pub prefactor: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    pub ordering: Vec<i64>,
    /// Coefficient rows over `ordering`; unnormalized in exact mode.
    pub vectors: Vec<Vec<String>>,
    pub norms_squared: Vec<String>,
}

impl From<&OrthonormalBasis> for BasisJson {
    fn from(b: &OrthonormalBasis) -> Self {
        let (mode, precision_bits, vectors, norms_squared) = match &b.vectors {
            BasisVectors::Exact {
                vectors,
                norms_squared,
            } => (
                "exact",
                None,
                vectors
                    .iter()
                    .map(|v| {
                        b.ordering
                            .iter()
                            .map(|&n| {
                                v.coeff(n)
                                    .map_or_else(|| "0/1".to_string(), |c| format_rational(&c.re))
                            })
                            .collect()
                    })
                    .collect(),
                rationals(norms_squared),
            ),
            BasisVectors::Float {
                coefficients,
                norms_squared,
                precision_bits,
            } => (
                "float",
                Some(*precision_bits),
                coefficients.iter().map(|r| floats(r)).collect(),
                floats(norms_squared),
            ),
        };
        BasisJson {
            kind: "orthonormal_basis",
            mode,
            a: format_rational(b.scale.a()),
            prefactor: PREFACTOR,
            precision_bits,
            ordering: b.ordering.clone(),
            vectors,
            norms_squared,
        }
    }
}

/// Normalized basis vectors as CSV rows over the ordering.
pub fn write_basis_csv<W: Write>(b: &OrthonormalBasis, precision_bits: u32, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["k".to_string()];
    header.extend(b.ordering.iter().map(|n| format!("b_{n}")));
    w.write_record(&header)?;
    for (k, row) in b.normalized_coefficients(precision_bits).iter().enumerate() {
        let mut record = vec![k.to_string()];
        record.extend(floats(row));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct RitzJson {
    pub basis_size: usize,
    pub a: String,
    pub precision_bits: u32,
    pub eigenvalues: Vec<String>,
    pub residual_norms: Vec<String>,
    pub gram_condition: String,
}

impl From<&RitzResult> for RitzJson {
    fn from(r: &RitzResult) -> Self {
        RitzJson {
            basis_size: r.basis_size,
            a: format_rational(&r.scale_a),
            precision_bits: r.precision_bits,
            eigenvalues: floats(&r.eigenvalues),
            residual_norms: floats(&r.residual_norms),
            gram_condition: format_float(&r.gram_condition),
        }
    }
}

/// Convergence table: `N, eigenvalue_0..eigenvalue_{levels-1}, residual, condition, status`.
pub fn write_scan_csv<W: Write>(
    sizes: &[usize],
    results: &[Result<RitzResult>],
    levels: usize,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["N".to_string()];
    header.extend((0..levels).map(|k| format!("eigenvalue_{k}")));
    header.extend(["residual", "condition", "status"].map(String::from));
    w.write_record(&header)?;
    for (n, r) in sizes.iter().zip(results) {
        let mut record = vec![n.to_string()];
        match r {
            Ok(r) => {
                record.extend((0..levels).map(|k| r.eigenvalues.get(k).map(format_float).unwrap_or_default()));
                let worst = r
                    .residual_norms
                    .iter()
                    .take(levels)
                    .max_by(|a, b| a.partial_cmp(b).expect("finite"))
                    .map(format_float)
                    .unwrap_or_default();
                record.push(worst);
                record.push(format_float(&r.gram_condition));
                record.push("ok".into());
            }
            Err(e) => {
                record.extend(std::iter::repeat_n(String::new(), levels + 2));
                record.push(e.to_string().replace('\n', " "));
            }
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct HamiltonianJson {
    pub kind: &'static str,
    pub a: String,
    pub prefactor: &'static str,
    pub kinetic_coeff: String,
    pub potential: String,
    pub ordering: Vec<i64>,
    /// `[re, im]` pairs.
    pub entries: Vec<Vec<[String; 2]>>,
}

impl HamiltonianJson {
    pub fn new(
        matrix: &ComplexMatrix,
        ordering: &[i64],
        a: &rug::Rational,
        kinetic_coeff: &rug::Rational,
        potential: String,
    ) -> Self {
        let cell = |z: &ComplexRational| [format_rational(&z.re), format_rational(&z.im)];
        HamiltonianJson {
            kind: "hamiltonian",
            a: format_rational(a),
            prefactor: PREFACTOR,
            kinetic_coeff: format_rational(kinetic_coeff),
            potential,
            ordering: ordering.to_vec(),
            entries: matrix.iter().map(|row| row.iter().map(cell).collect()).collect(),
        }
    }
}

pub fn write_complex_matrix_csv<W: Write>(
    matrix: &ComplexMatrix,
    ordering: &[i64],
    precision_bits: u32,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["m\\n".to_string()];
    header.extend(ordering.iter().map(|n| n.to_string()));
    w.write_record(&header)?;
    for (m, row) in ordering.iter().zip(matrix) {
        let mut record = vec![m.to_string()];
        record.extend(row.iter().map(|z| {
            let re = format_float(&Float::with_val(precision_bits, &z.re));
            if z.is_real() {
                re
            } else {
                format!("{re}{:+}i", Float::with_val(precision_bits, &z.im))
            }
        }));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaJson {
    pub n: i64,
    pub coeffs: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoeffsJson {
    pub kind: &'static str,
    pub max_n: usize,
    /// `a_table[l][k] = a_k(l)`.
    pub a_table: Vec<Vec<String>>,
    /// `b_table[n][k-1] = b_k(n)`.
    pub b_table: Vec<Vec<String>>,
    pub lambda: Vec<LambdaJson>,
}

impl CoeffsJson {
    pub fn new(table: &CoeffTable, max_n: usize) -> Self {
        CoeffsJson {
            kind: "coefficients",
            max_n,
            a_table: (0..=max_n)
                .map(|l| (0..=l).map(|k| table.a(k, l).expect("in range").to_string()).collect())
                .collect(),
            b_table: (0..=max_n)
                .map(|n| (1..=n).map(|k| table.b(k, n).expect("in range").to_string()).collect())
                .collect(),
            lambda: (0..=max_n)
                .map(|n| LambdaJson {
                    n: n as i64,
                    coeffs: rationals(table.lambda(n).expect("in range").coeffs()),
                })
                .collect(),
        }
    }
}

/// Long-format coefficient table: `n, k, a_k(n), b_k(n), lambda_coeff`.
pub fn write_coeffs_csv<W: Write>(table: &CoeffTable, max_n: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "k", "a_k(n)", "b_k(n)", "lambda_coeff"])?;
    for n in 0..=max_n {
        let lambda = table.lambda(n).expect("in range");
        for k in 0..=n {
            let b = if k == 0 {
                String::new()
            } else {
                table.b(k, n).expect("in range").to_string()
            };
            w.write_record([
                n.to_string(),
                k.to_string(),
                table.a(k, n).expect("in range").to_string(),
                b,
                lambda.coeffs().get(k).map(format_rational).unwrap_or_else(|| "0/1".into()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::gram_matrix;
    use rug::Rational;

    #[test]
    fn gram_json_round_trip() {
        let g = gram_matrix(7, &Rational::from((2, 3))).unwrap();
        let text = serde_json::to_string(&GramJson::from(&g)).unwrap();
        assert_eq!(gram_from_json(&text).unwrap(), g);
    }

    #[test]
    fn gram_json_rejects_ragged() {
        let text = r#"{"kind":"gram","a":"1/1","prefactor":"","ordering":[0,1],"entries":[["1/1"]]}"#;
        assert!(gram_from_json(text).is_err());
    }

    #[test]
    fn gram_csv_shape() {
        let g = gram_matrix(3, &Rational::from(1)).unwrap();
        let mut buf = Vec::new();
        write_gram_csv(&g, 64, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "m\\n,0,1,-1");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,1.0"));
    }
}
