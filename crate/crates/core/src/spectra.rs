//! Hamiltonians `H = P²/(2m) + V(Q)` on the basis span and their
//! Rayleigh-Ritz spectra.
//!
//! Matrix elements are exact. The generalized problem `H c = λ S c` is
//! reduced exactly, `A = L⁻¹ H L⁻ᵀ` with `S = L D Lᵀ`, and only the final
//! scaling by `D^{-1/2}` and the symmetric eigensolve happen in floating
//! point. The transcendental prefactor is common to `H` and `S` and cancels.
//!
//! Every trial function vanishes faster than any power at the origin, so the
//! variational limit of a regular potential is its Dirichlet-at-zero problem:
//! for `½P² + ½x²` the Ritz values approach `3/2`, not `1/2`.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::basis::{apply_expr, ComplexRational, LaurentState, OperatorExpr};
use crate::error::{Error, Result};
use crate::gram::{condition_report, gram_matrix, inner_product, GramMatrix};
use crate::linalg::{exact_ldl, mat_vec, norm2, symmetric_eigen, to_float_matrix, unit_lower_inverse};
use crate::potential::LaurentPoly;
use crate::rational::ExactRational;

/// Dimensionless Hamiltonian `kinetic_coeff · (-d²/dx²) + V(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianSpec {
    pub kinetic_coeff: ExactRational,
    pub potential: LaurentPoly,
    pub hbar_eff: ExactRational,
    pub mass: ExactRational,
}

impl HamiltonianSpec {
    /// `½P² + V` with `ħ = m = 1`.
    pub fn new(potential: LaurentPoly) -> Self {
        HamiltonianSpec {
            kinetic_coeff: Rational::from((1, 2)),
            potential,
            hbar_eff: Rational::from(1),
            mass: Rational::from(1),
        }
    }

    /// `P²/(2m) + V` with `P = iħ d/dx`, so the kinetic coefficient is `ħ²/(2m)`.
    pub fn with_units(hbar: ExactRational, mass: ExactRational, potential: LaurentPoly) -> Result<Self> {
        if mass <= 0 || hbar <= 0 {
            return Err(Error::domain("hbar and mass must be positive"));
        }
        let kinetic_coeff = Rational::from(&hbar * &hbar) / (2 * Rational::from(&mass));
        Ok(HamiltonianSpec {
            kinetic_coeff,
            potential,
            hbar_eff: hbar,
            mass,
        })
    }

    /// Rewrites `P²/(2m) + V(y)` in the dimensionless coordinate `x = y/r`.
    ///
    /// For an oscillator length `l² = ħ/(mω)` and a singular length `L`, the
    /// natural choice is `r² = lL` with basis scale `a = L/l`; `r` has to be
    /// rational here, so pick units in which it is.
    pub fn from_physical(
        hbar: ExactRational,
        mass: ExactRational,
        r: ExactRational,
        potential_in_y: &LaurentPoly,
    ) -> Result<Self> {
        if r <= 0 {
            return Err(Error::domain("length scale r must be positive"));
        }
        let potential = LaurentPoly::from_terms(potential_in_y.terms().map(|(p, c)| {
            let rp = Rational::from((&r).pow(p as i32));
            (p, Rational::from(c * &rp))
        }));
        let mut spec = Self::with_units(hbar, mass, potential)?;
        spec.kinetic_coeff /= Rational::from(&r * &r);
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kinetic_coeff <= 0 {
            return Err(Error::domain("kinetic coefficient must be positive"));
        }
        if self.hbar_eff <= 0 || self.mass <= 0 {
            return Err(Error::domain("hbar and mass must be positive"));
        }
        Ok(())
    }

    /// `H` as a word sum: `(kinetic_coeff/ħ²) P·P + Σ c_p Q^p`.
    pub fn operator(&self) -> OperatorExpr {
        let p = OperatorExpr::momentum(&self.hbar_eff);
        let kinetic_scale = Rational::from(&self.kinetic_coeff / &self.hbar_eff) / &self.hbar_eff;
        let mut h = (&p * &p).scaled(&ComplexRational::real(kinetic_scale));
        for (power, c) in self.potential.terms() {
            h = h + OperatorExpr::power(power).scaled(&ComplexRational::real(c.clone()));
        }
        h
    }
}

pub type ComplexMatrix = Vec<Vec<ComplexRational>>;

/// Prefactor-stripped `⟨b_{o_i}, H b_{o_j}⟩` over the interleaved ordering.
pub fn hamiltonian_matrix(spec: &HamiltonianSpec, size: usize, a: &ExactRational) -> Result<ComplexMatrix> {
    spec.validate()?;
    let gram = gram_matrix(size, a)?;
    hamiltonian_on(spec, &gram)
}

fn hamiltonian_on(spec: &HamiltonianSpec, gram: &GramMatrix) -> Result<ComplexMatrix> {
    let h = spec.operator();
    let basis: Vec<LaurentState> = gram
        .ordering
        .iter()
        .map(|&n| LaurentState::basis(n, gram.scale.clone()))
        .collect();
    let images: Vec<LaurentState> = basis.par_iter().map(|b| apply_expr(&h, b)).collect();
    basis
        .par_iter()
        .map(|bi| {
            images
                .iter()
                .map(|image| inner_product(bi, image).map(|v| v.stripped))
                .collect()
        })
        .collect()
}

/// Variational eigenvalues for one basis size.
#[derive(Debug, Clone)]
pub struct RitzResult {
    pub basis_size: usize,
    pub scale_a: ExactRational,
    /// Ascending.
    pub eigenvalues: Vec<Float>,
    pub precision_bits: u32,
    /// `‖H c - λ S c‖ / ‖c‖` per eigenpair.
    pub residual_norms: Vec<Float>,
    /// 2-norm condition number of the Gram matrix.
    pub gram_condition: Float,
}

/// Solves `H c = λ S c` on the first `size` basis functions.
pub fn ritz_solve(
    spec: &HamiltonianSpec,
    size: usize,
    a: &ExactRational,
    precision_bits: u32,
) -> Result<RitzResult> {
    if precision_bits < 53 {
        return Err(Error::domain(format!(
            "precision must be at least 53 bits, got {precision_bits}"
        )));
    }
    spec.validate()?;
    let gram = gram_matrix(size, a)?;
    let h = hamiltonian_on(spec, &gram)?;
    if h.iter().flatten().any(|z| !z.is_real()) {
        return Err(Error::domain("Hamiltonian matrix is not real symmetric"));
    }
    let h: Vec<Vec<ExactRational>> = h
        .into_iter()
        .map(|row| row.into_iter().map(|z| z.re).collect())
        .collect();

    let ldl = exact_ldl(&gram.entries, false)?;
    check_pivots(&ldl.d, precision_bits)?;
    let m = unit_lower_inverse(&ldl.l);
    let reduced = congruence(&m, &h);

    let work = precision_bits + 32;
    let inv_sqrt_d: Vec<Float> = ldl
        .d
        .iter()
        .map(|d| Float::with_val(work, d).sqrt().recip())
        .collect();
    let scaled: Vec<Vec<Float>> = reduced
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| Float::with_val(work, v) * &inv_sqrt_d[i] * &inv_sqrt_d[j])
                .collect()
        })
        .collect();
    let eig = symmetric_eigen(&scaled, work)?;

    // back-transform c = M^T D^{-1/2} y and measure residuals
    let h_f = to_float_matrix(&h, work);
    let s_f = gram.to_float(work);
    let m_t: Vec<Vec<Float>> = (0..size)
        .map(|i| (0..size).map(|j| Float::with_val(work, &m[j][i])).collect())
        .collect();
    let mut residual_norms = Vec::with_capacity(size);
    for (lambda, y) in eig.values.iter().zip(&eig.vectors) {
        let z: Vec<Float> = y.iter().zip(&inv_sqrt_d).map(|(v, s)| Float::with_val(work, v * s)).collect();
        let c = mat_vec(&m_t, &z);
        let hc = mat_vec(&h_f, &c);
        let sc = mat_vec(&s_f, &c);
        let r: Vec<Float> = hc
            .iter()
            .zip(&sc)
            .map(|(a, b)| Float::with_val(work, a - Float::with_val(work, b * lambda)))
            .collect();
        let res = norm2(&r) / norm2(&c);
        residual_norms.push(Float::with_val(precision_bits, res));
    }

    let report = condition_report(&gram, precision_bits)?;
    Ok(RitzResult {
        basis_size: size,
        scale_a: a.clone(),
        eigenvalues: eig
            .values
            .into_iter()
            .map(|v| Float::with_val(precision_bits, v))
            .collect(),
        precision_bits,
        residual_norms,
        gram_condition: report.condition,
    })
}

/// A rounded `S = L̃ L̃ᵀ` at `precision_bits` stops being positive definite
/// once the pivot spread exceeds the available bits.
fn check_pivots(d: &[ExactRational], precision_bits: u32) -> Result<()> {
    let max = d.iter().max().cloned().unwrap_or_else(|| Rational::from(1));
    let floor = Float::with_val(64, Float::i_exp(1, -(precision_bits as i32)));
    for (k, pivot) in d.iter().enumerate() {
        let ratio = Float::with_val(64, pivot) / Float::with_val(64, &max);
        if ratio <= floor {
            return Err(Error::Conditioning {
                pivot: k,
                message: format!(
                    "Gram pivot {k} is below the resolution of {precision_bits}-bit floats; \
                     raise --precision or reduce the basis size"
                ),
            });
        }
    }
    Ok(())
}

/// `M H Mᵀ` for lower triangular `M`, exactly.
fn congruence(m: &[Vec<ExactRational>], h: &[Vec<ExactRational>]) -> Vec<Vec<ExactRational>> {
    let n = m.len();
    // rows of M H
    let mh: Vec<Vec<ExactRational>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Rational::new();
                    for k in 0..=i {
                        if m[i][k] != 0 && h[k][j] != 0 {
                            acc += Rational::from(&m[i][k] * &h[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let upper: Vec<Vec<ExactRational>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j < i {
                        return Rational::new();
                    }
                    let mut acc = Rational::new();
                    for k in 0..=j {
                        if mh[i][k] != 0 && m[j][k] != 0 {
                            acc += Rational::from(&mh[i][k] * &m[j][k]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if j >= i { upper[i][j].clone() } else { upper[j][i].clone() })
                .collect()
        })
        .collect()
}

/// One [`ritz_solve`] per size; a failure at one size does not stop the scan.
pub fn convergence_scan(
    spec: &HamiltonianSpec,
    sizes: &[usize],
    a: &ExactRational,
    precision_bits: u32,
) -> Result<Vec<Result<RitzResult>>> {
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain("basis sizes must be ascending"));
    }
    Ok(sizes
        .par_iter()
        .map(|&n| ritz_solve(spec, n, a, precision_bits))
        .collect())
}
