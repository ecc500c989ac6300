//! Gram matrices of the basis and their orthonormalization.
//!
//! Every inner product carries the same transcendental factor
//! `sqrt(π/a) e^{-2a}`:
//!
//! ```text
//! ⟨b_m, b_n⟩ = sqrt(π/a) e^{-2a} Λ_{(m+n)/2}(1/a)   (m + n even),   0 otherwise.
//! ```
//!
//! Everything here works with that factor divided out, which keeps the Gram
//! matrix, and Gram-Schmidt over it, in exact rational arithmetic.

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::basis::{ComplexRational, LaurentState, Scale};
use crate::error::{Error, Result};
use crate::exact_coeffs::{lambda_poly, prefactor, reflected_index};
use crate::linalg::{self, bilinear, exact_ldl, symmetric_eigen, to_float_matrix, Ldl};
use crate::rational::ExactRational;

/// Order in which basis exponents enter the Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderingKind {
    /// `0, 1, -1, 2, -2, …`; each prefix spans a nested subspace.
    #[default]
    Interleaved,
    /// The same exponents as [`OrderingKind::Interleaved`], even ones first.
    Parity,
}

/// First `size` exponents of the chosen ordering.
pub fn ordering(size: usize, kind: OrderingKind) -> Vec<i64> {
    let interleaved: Vec<i64> = (0..size as i64)
        .map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) })
        .collect();
    match kind {
        OrderingKind::Interleaved => interleaved,
        OrderingKind::Parity => {
            let (mut even, odd): (Vec<i64>, Vec<i64>) =
                interleaved.into_iter().partition(|n| n % 2 == 0);
            even.extend(odd);
            even
        }
    }
}

/// `Λ_k(1/a)` for every `k` with `|k|` up to `max_index`, by reflected index.
struct LambdaValues(Vec<ExactRational>);

impl LambdaValues {
    fn new(max_index: u64, scale: &Scale) -> Self {
        let t = scale.inverse();
        LambdaValues(
            (0..=max_index as i64)
                .map(|k| lambda_poly(k).eval(&t))
                .collect(),
        )
    }

    /// Prefactor-stripped `⟨b_m, b_n⟩`.
    fn pair(&self, m: i64, n: i64) -> ExactRational {
        if (m + n).rem_euclid(2) == 1 {
            return Rational::new();
        }
        self.0[reflected_index((m + n) / 2) as usize].clone()
    }
}

fn max_reflected(exponents: impl Iterator<Item = i64> + Clone) -> u64 {
    let hi = exponents.clone().max().unwrap_or(0);
    let lo = exponents.min().unwrap_or(0);
    reflected_index(hi.max(0)).max(reflected_index(lo.min(0)))
}

/// Prefactor-stripped Gram matrix over an ordering of exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    pub ordering: Vec<i64>,
    pub entries: Vec<Vec<ExactRational>>,
    pub scale: Scale,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.ordering.len()
    }

    pub fn to_float(&self, precision_bits: u32) -> linalg::FloatMatrix {
        to_float_matrix(&self.entries, precision_bits)
    }

    /// Exact `LDLᵀ` without pivoting; succeeds iff the matrix is positive definite.
    pub fn ldl(&self) -> Result<Ldl> {
        exact_ldl(&self.entries, false)
    }

    /// The matrix with its rows and columns regrouped into even and odd
    /// exponents, plus the size of the even block.
    pub fn parity_permuted(&self) -> (Vec<Vec<ExactRational>>, usize) {
        let mut idx: Vec<usize> = (0..self.size()).collect();
        idx.sort_by_key(|&i| self.ordering[i].rem_euclid(2));
        let even = idx
            .iter()
            .filter(|&&i| self.ordering[i].rem_euclid(2) == 0)
            .count();
        let permuted = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        (permuted, even)
    }
}

pub fn gram_matrix(size: usize, a: &ExactRational) -> Result<GramMatrix> {
    gram_matrix_with(size, a, OrderingKind::Interleaved)
}

pub fn gram_matrix_with(size: usize, a: &ExactRational, kind: OrderingKind) -> Result<GramMatrix> {
    if size == 0 {
        return Err(Error::domain("basis size must be at least 1"));
    }
    let scale = Scale::new(a.clone())?;
    let ordering = ordering(size, kind);
    let values = LambdaValues::new(max_reflected(ordering.iter().map(|n| 2 * n)), &scale);
    let entries = ordering
        .par_iter()
        .map(|&m| ordering.iter().map(|&n| values.pair(m, n)).collect())
        .collect();
    Ok(GramMatrix {
        ordering,
        entries,
        scale,
    })
}

/// Inner product with the common prefactor kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerValue {
    /// Rational part; the full value is this times `sqrt(π/a) e^{-2a}`.
    pub stripped: ComplexRational,
    pub scale: Scale,
}

impl InnerValue {
    /// Real and imaginary parts including the prefactor.
    pub fn to_float(&self, precision_bits: u32) -> (Float, Float) {
        let p = prefactor(self.scale.a(), precision_bits);
        (
            Float::with_val(precision_bits, &p * &self.stripped.re),
            Float::with_val(precision_bits, &p * &self.stripped.im),
        )
    }
}

/// `⟨s1, s2⟩`, antilinear in the first argument.
pub fn inner_product(s1: &LaurentState, s2: &LaurentState) -> Result<InnerValue> {
    if s1.scale() != s2.scale() {
        return Err(Error::domain(format!(
            "states live on different scales ({} vs {})",
            s1.scale().a(),
            s2.scale().a()
        )));
    }
    let stripped = if s1.is_empty() || s2.is_empty() {
        ComplexRational::zero()
    } else {
        let span: Vec<i64> = s1.terms().chain(s2.terms()).map(|(n, _)| n).collect();
        let lo = span.iter().copied().min().unwrap_or(0);
        let hi = span.iter().copied().max().unwrap_or(0);
        let values = LambdaValues::new(max_reflected([2 * lo, 2 * hi].into_iter()), s1.scale());
        let mut acc = ComplexRational::zero();
        for (m, c) in s1.terms() {
            let c_bar = c.conj();
            for (n, d) in s2.terms() {
                let g = values.pair(m, n);
                if g != 0 {
                    acc += &(&c_bar * d).scale(&g);
                }
            }
        }
        acc
    };
    Ok(InnerValue {
        stripped,
        scale: s1.scale().clone(),
    })
}

/// Arithmetic used by [`orthonormalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsMode {
    /// Classical Gram-Schmidt in exact rationals, normalization deferred.
    Exact,
    /// Modified Gram-Schmidt with one reorthogonalization pass.
    Float { precision_bits: u32 },
}

#[derive(Debug, Clone)]
pub enum BasisVectors {
    /// Orthogonal, not normalized; `norms_squared[k] = ⟨o_k, o_k⟩` (stripped).
    Exact {
        vectors: Vec<LaurentState>,
        norms_squared: Vec<ExactRational>,
    },
    /// Orthonormal coefficient rows over the ordering; `norms_squared` holds
    /// the squared norms before normalization.
    Float {
        coefficients: Vec<Vec<Float>>,
        norms_squared: Vec<Float>,
        precision_bits: u32,
    },
}

/// Result of Gram-Schmidt over a basis ordering.
///
/// Vector `k` only involves the first `k + 1` exponents of `ordering`.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    pub ordering: Vec<i64>,
    pub scale: Scale,
    pub vectors: BasisVectors,
}

impl OrthonormalBasis {
    pub fn len(&self) -> usize {
        self.ordering.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordering.is_empty()
    }

    /// Normalized coefficient rows over `ordering` at the given precision.
    pub fn normalized_coefficients(&self, precision_bits: u32) -> Vec<Vec<Float>> {
        match &self.vectors {
            BasisVectors::Exact {
                vectors,
                norms_squared,
            } => vectors
                .iter()
                .zip(norms_squared)
                .map(|(v, n2)| {
                    let norm = Float::with_val(precision_bits, n2).sqrt();
                    self.ordering
                        .iter()
                        .map(|&n| match v.coeff(n) {
                            Some(c) => Float::with_val(precision_bits, &c.re) / &norm,
                            None => Float::new(precision_bits),
                        })
                        .collect()
                })
                .collect(),
            BasisVectors::Float { coefficients, .. } => coefficients
                .iter()
                .map(|row| row.iter().map(|c| Float::with_val(precision_bits, c)).collect())
                .collect(),
        }
    }

    /// Largest `|⟨o_i, o_j⟩|` over `i ≠ j` and largest `|⟨o_i, o_i⟩ - 1|`,
    /// using the exact Gram matrix rounded to `precision_bits`.
    pub fn orthonormality_defect(&self, gram: &GramMatrix, precision_bits: u32) -> (Float, Float) {
        let g = gram.to_float(precision_bits);
        let rows = self.normalized_coefficients(precision_bits);
        let mut off = Float::new(precision_bits);
        let mut diag = Float::new(precision_bits);
        for i in 0..rows.len() {
            for j in 0..=i {
                let v = bilinear(&g, &rows[i], &rows[j]);
                if i == j {
                    diag.max_mut(&Float::with_val(precision_bits, v - 1u32).abs());
                } else {
                    off.max_mut(&v.abs());
                }
            }
        }
        (off, diag)
    }
}

/// Gram-Schmidt over the first `size` exponents of the interleaved ordering.
pub fn orthonormalize(size: usize, a: &ExactRational, mode: GsMode) -> Result<OrthonormalBasis> {
    let gram = gram_matrix(size, a)?;
    orthonormalize_gram(&gram, mode)
}

pub fn orthonormalize_gram(gram: &GramMatrix, mode: GsMode) -> Result<OrthonormalBasis> {
    let vectors = match mode {
        GsMode::Exact => exact_gram_schmidt(gram)?,
        GsMode::Float { precision_bits } => {
            if precision_bits < 53 {
                return Err(Error::domain(format!(
                    "precision must be at least 53 bits, got {precision_bits}"
                )));
            }
            float_gram_schmidt(gram, precision_bits)?
        }
    };
    Ok(OrthonormalBasis {
        ordering: gram.ordering.clone(),
        scale: gram.scale.clone(),
        vectors,
    })
}

fn exact_bilinear(g: &[Vec<ExactRational>], u: &[ExactRational], v: &[ExactRational]) -> ExactRational {
    let mut acc = Rational::new();
    for (i, ui) in u.iter().enumerate() {
        if *ui == 0 {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if *vj != 0 && g[i][j] != 0 {
                acc += Rational::from(ui * vj) * &g[i][j];
            }
        }
    }
    acc
}

fn exact_gram_schmidt(gram: &GramMatrix) -> Result<BasisVectors> {
    let n = gram.size();
    let g = &gram.entries;
    let mut rows: Vec<Vec<ExactRational>> = Vec::with_capacity(n);
    let mut norms: Vec<ExactRational> = Vec::with_capacity(n);
    for k in 0..n {
        let mut e_k = vec![Rational::new(); n];
        e_k[k] = Rational::from(1);
        let mut v = e_k.clone();
        for (o, norm) in rows.iter().zip(&norms) {
            // classical: project the original vector
            let coeff = exact_bilinear(g, o, &e_k) / norm;
            if coeff != 0 {
                for (vi, oi) in v.iter_mut().zip(o) {
                    *vi -= Rational::from(&coeff * oi);
                }
            }
        }
        let norm = exact_bilinear(g, &v, &v);
        if norm <= 0 {
            return Err(Error::Conditioning {
                pivot: k,
                message: "exact Gram-Schmidt produced a non-positive norm".into(),
            });
        }
        rows.push(v);
        norms.push(norm);
    }
    let vectors = rows
        .into_iter()
        .map(|row| {
            LaurentState::from_terms(
                gram.ordering
                    .iter()
                    .zip(row)
                    .map(|(&e, c)| (e, ComplexRational::real(c))),
                gram.scale.clone(),
            )
        })
        .collect();
    Ok(BasisVectors::Exact {
        vectors,
        norms_squared: norms,
    })
}

fn float_gram_schmidt(gram: &GramMatrix, precision_bits: u32) -> Result<BasisVectors> {
    let n = gram.size();
    let g = gram.to_float(precision_bits);
    let threshold = Float::with_val(
        precision_bits,
        Float::i_exp(1, -(precision_bits as i32) + (n as i32).max(1).ilog2() as i32 + 4),
    );
    let mut basis: Vec<Vec<Float>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for k in 0..n {
        let mut v: Vec<Float> = (0..n)
            .map(|i| Float::with_val(precision_bits, u32::from(i == k)))
            .collect();
        for _pass in 0..2 {
            for o in &basis {
                let proj = bilinear(&g, o, &v);
                for (vi, oi) in v.iter_mut().zip(o) {
                    *vi -= Float::with_val(precision_bits, &proj * oi);
                }
            }
        }
        let norm_sq = bilinear(&g, &v, &v);
        let relative = Float::with_val(precision_bits, &norm_sq / &g[k][k]);
        if relative <= threshold {
            return Err(Error::Conditioning {
                pivot: k,
                message: format!(
                    "basis vector {k} is numerically dependent at {precision_bits} bits; \
                     raise the precision or shrink the basis"
                ),
            });
        }
        let norm = Float::with_val(precision_bits, norm_sq.sqrt_ref());
        for vi in v.iter_mut() {
            *vi /= &norm;
        }
        basis.push(v);
        norms.push(norm_sq);
    }
    Ok(BasisVectors::Float {
        coefficients: basis,
        norms_squared: norms,
        precision_bits,
    })
}

/// Conditioning diagnostics for a Gram matrix.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    /// Smallest and largest pivot of the exact diagonally pivoted `LDLᵀ`.
    pub min_pivot: ExactRational,
    pub max_pivot: ExactRational,
    /// Estimate of the 2-norm condition number `λ_max / λ_min`.
    pub condition: Float,
    /// Smallest precision (bits) advised for float-mode Gram-Schmidt.
    pub recommended_precision_bits: u32,
}

/// Margin added on top of `log2(condition)` when recommending a precision.
const PRECISION_MARGIN_BITS: u32 = 64;

pub fn condition_report(gram: &GramMatrix, precision_bits: u32) -> Result<ConditionReport> {
    let ldl = exact_ldl(&gram.entries, true)?;
    let min_pivot = ldl.d.iter().min().cloned().expect("non-empty Gram matrix");
    let max_pivot = ldl.d.iter().max().cloned().expect("non-empty Gram matrix");

    // Pivot spread bounds the bits lost by the eigensolver; carry enough
    // extra precision that the smallest eigenvalue stays resolved.
    let spread = Float::with_val(64, &max_pivot) / Float::with_val(64, &min_pivot);
    let spread_bits = spread.log2().to_f64().ceil().max(0.0) as u32;
    let work = precision_bits.max(53) + spread_bits + 64;
    let eig = symmetric_eigen(&gram.to_float(work), work)?;
    let lo = eig.values.first().expect("non-empty");
    let hi = eig.values.last().expect("non-empty");
    if *lo <= 0 {
        return Err(Error::Conditioning {
            pivot: 0,
            message: "Gram matrix has a non-positive eigenvalue".into(),
        });
    }
    let condition = Float::with_val(precision_bits.max(53), hi / lo);
    let cond_bits = Float::with_val(64, condition.log2_ref()).to_f64().ceil().max(0.0) as u32;
    let recommended = (cond_bits + PRECISION_MARGIN_BITS).div_ceil(32) * 32;
    Ok(ConditionReport {
        min_pivot,
        max_pivot,
        condition,
        recommended_precision_bits: recommended.max(64),
    })
}
