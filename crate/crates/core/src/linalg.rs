//! Dense linear algebra over exact rationals and MPFR floats.
//!
//! Matrices are small (tens of rows) and badly conditioned, so the routines
//! favour exactness and robustness over speed: an exact `LDLᵀ` and a cyclic
//! Jacobi eigensolver at arbitrary precision.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::rational::ExactRational;

pub type RationalMatrix = Vec<Vec<ExactRational>>;
pub type FloatMatrix = Vec<Vec<Float>>;

/// `P S Pᵀ = L D Lᵀ` with `L` unit lower triangular.
#[derive(Debug, Clone)]
pub struct Ldl {
    /// `perm[i]` is the original row placed at position `i`.
    pub perm: Vec<usize>,
    pub l: RationalMatrix,
    pub d: Vec<ExactRational>,
}

/// Exact `LDLᵀ` of a symmetric matrix. With `pivoting`, the largest
/// remaining diagonal entry is eliminated first.
///
/// Fails with [`Error::Conditioning`] at the first non-positive pivot, so
/// success certifies positive definiteness.
pub fn exact_ldl(s: &[Vec<ExactRational>], pivoting: bool) -> Result<Ldl> {
    let n = s.len();
    let mut work: RationalMatrix = s.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = vec![vec![Rational::new(); n]; n];
    let mut d = Vec::with_capacity(n);

    for k in 0..n {
        if pivoting {
            let best = (k..n)
                .max_by(|&i, &j| work[i][i].cmp(&work[j][j]))
                .unwrap_or(k);
            if best != k {
                work.swap(k, best);
                for row in work.iter_mut() {
                    row.swap(k, best);
                }
                l.swap(k, best);
                for row in l.iter_mut() {
                    row.swap(k, best);
                }
                perm.swap(k, best);
            }
        }
        let pivot = work[k][k].clone();
        if pivot <= 0 {
            return Err(Error::Conditioning {
                pivot: perm[k],
                message: format!("non-positive pivot {pivot} in exact LDLᵀ"),
            });
        }
        l[k][k] = Rational::from(1);
        for i in k + 1..n {
            let factor = Rational::from(&work[i][k] / &pivot);
            if factor != 0 {
                for j in k + 1..=i {
                    let delta = Rational::from(&factor * &work[k][j]);
                    work[i][j] -= delta;
                }
            }
            l[i][k] = factor;
        }
        // keep the trailing block symmetric
        for i in k + 1..n {
            for j in k + 1..i {
                let v = work[i][j].clone();
                work[j][i] = v;
            }
        }
        d.push(pivot);
    }
    Ok(Ldl { perm, l, d })
}

/// Inverse of a unit lower triangular matrix, exactly.
pub fn unit_lower_inverse(l: &[Vec<ExactRational>]) -> RationalMatrix {
    let n = l.len();
    let mut inv = vec![vec![Rational::new(); n]; n];
    for j in 0..n {
        inv[j][j] = Rational::from(1);
        for i in j + 1..n {
            let mut acc = Rational::new();
            for k in j..i {
                if l[i][k] != 0 && inv[k][j] != 0 {
                    acc += Rational::from(&l[i][k] * &inv[k][j]);
                }
            }
            inv[i][j] = -acc;
        }
    }
    inv
}

pub fn to_float_matrix(m: &[Vec<ExactRational>], precision_bits: u32) -> FloatMatrix {
    m.iter()
        .map(|row| row.iter().map(|v| Float::with_val(precision_bits, v)).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<Float>], v: &[Float]) -> Vec<Float> {
    let prec = v.first().map_or(53, Float::prec);
    m.iter()
        .map(|row| {
            let mut acc = Float::new(prec);
            for (a, b) in row.iter().zip(v) {
                acc += Float::with_val(prec, a * b);
            }
            acc
        })
        .collect()
}

pub fn dot(u: &[Float], v: &[Float]) -> Float {
    let prec = u.first().map_or(53, Float::prec);
    let mut acc = Float::new(prec);
    for (a, b) in u.iter().zip(v) {
        acc += Float::with_val(prec, a * b);
    }
    acc
}

/// `uᵀ G v`
pub fn bilinear(g: &[Vec<Float>], u: &[Float], v: &[Float]) -> Float {
    dot(u, &mat_vec(g, v))
}

pub fn norm2(v: &[Float]) -> Float {
    dot(v, v).sqrt()
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending.
    pub values: Vec<Float>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<Float>>,
}

const MAX_SWEEPS: usize = 100;

pub fn symmetric_eigen(a: &[Vec<Float>], precision_bits: u32) -> Result<SymmetricEigen> {
    let n = a.len();
    let mut m: FloatMatrix = a
        .iter()
        .map(|row| row.iter().map(|v| Float::with_val(precision_bits, v)).collect())
        .collect();
    let mut v: FloatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Float::with_val(precision_bits, u32::from(i == j)))
                .collect()
        })
        .collect();
    let eps = Float::with_val(precision_bits, Float::i_exp(1, -(precision_bits as i32)));

    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        let mut off = Float::new(precision_bits);
        let mut diag = Float::new(precision_bits);
        for i in 0..n {
            diag += Float::with_val(precision_bits, m[i][i].square_ref());
            for j in 0..n {
                if i != j {
                    off += Float::with_val(precision_bits, m[i][j].square_ref());
                }
            }
        }
        if off <= Float::with_val(precision_bits, eps.square_ref()) * &diag {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].is_zero() {
                    continue;
                }
                rotate(&mut m, &mut v, p, q, precision_bits);
            }
        }
    }
    if !converged {
        return Err(Error::Conditioning {
            pivot: 0,
            message: "Jacobi eigensolver did not converge".into(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| m[i][i].clone()).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i][k].clone()).collect())
        .collect();
    Ok(SymmetricEigen { values, vectors })
}

fn rotate(m: &mut FloatMatrix, v: &mut FloatMatrix, p: usize, q: usize, prec: u32) {
    let apq = m[p][q].clone();
    let theta = Float::with_val(prec, &m[q][q] - &m[p][p]) / Float::with_val(prec, 2 * &apq);
    let root = (Float::with_val(prec, theta.square_ref()) + 1u32).sqrt();
    let denom = Float::with_val(prec, theta.abs_ref()) + root;
    let mut t = Float::with_val(prec, denom.recip_ref());
    if theta.is_sign_negative() {
        t = -t;
    }
    let c = (Float::with_val(prec, t.square_ref()) + 1u32).sqrt().recip();
    let s = Float::with_val(prec, &t * &c);
    let n = m.len();

    for k in 0..n {
        let mkp = m[k][p].clone();
        let mkq = m[k][q].clone();
        m[k][p] = Float::with_val(prec, &c * &mkp) - Float::with_val(prec, &s * &mkq);
        m[k][q] = Float::with_val(prec, &s * &mkp) + Float::with_val(prec, &c * &mkq);
    }
    for k in 0..n {
        let mpk = m[p][k].clone();
        let mqk = m[q][k].clone();
        m[p][k] = Float::with_val(prec, &c * &mpk) - Float::with_val(prec, &s * &mqk);
        m[q][k] = Float::with_val(prec, &s * &mpk) + Float::with_val(prec, &c * &mqk);
    }
    m[p][q] = Float::new(prec);
    m[q][p] = Float::new(prec);
    for row in v.iter_mut() {
        let vp = row[p].clone();
        let vq = row[q].clone();
        row[p] = Float::with_val(prec, &c * &vp) - Float::with_val(prec, &s * &vq);
        row[q] = Float::with_val(prec, &s * &vp) + Float::with_val(prec, &c * &vq);
    }
}
