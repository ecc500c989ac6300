//! Exact combinatorial coefficients behind the closed-form integrals
//!
//! ```text
//! I_n(a) = ∫_ℝ x^{2n} exp(-a (x^2 + x^-2)) dx = sqrt(π/a) e^{-2a} Λ_n(1/a).
//! ```
//!
//! The substitution `z = x - 1/x` maps `(0, ∞)` onto `ℝ`, turns the weight
//! into `e^{-2a} e^{-a z^2}` and has Jacobian `1 + x^-2`. Pairing `x^{2n}`
//! with its reflection `x^{-2(n+1)}` gives
//!
//! ```text
//! (x^{2n} + x^{-2(n+1)}) / (1 + x^-2) = 1 + Σ_{k=1..n} b_k(n) u^{2k},   u = z/2,
//! q_l(x) = x^{2l} + x^{-2l}           = Σ_{k=0..l} a_k(l) u^{2k},
//! ```
//!
//! so `Λ_n(t) = 1 + Σ_k b_k(n) · (2k)!/(16^k k!) · t^k`.
//!
//! Erratum: the commonly printed form of this result carries an extra factor
//! of 2 on every `k ≥ 1` term (it comes from taking the constant term
//! `a_0(l)` to be 1 when it is 2). That form is available as
//! [`ClosedFormVariant::AsPrinted`] so it can be shown to disagree with
//! quadrature; everything else uses [`ClosedFormVariant::Corrected`].

use std::sync::{Arc, RwLock};

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Polynomial in `t = 1/a` with exact coefficients, `coeffs[k]` multiplying `t^k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InversePoly {
    coeffs: Vec<ExactRational>,
}

impl InversePoly {
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        InversePoly { coeffs }
    }

    pub fn one() -> Self {
        InversePoly::new(vec![Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Degree of the polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, t: &ExactRational) -> ExactRational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, t: &Float) -> Float {
        let mut acc = Float::new(t.prec());
        for c in self.coeffs.iter().rev() {
            acc *= t;
            acc += c;
        }
        acc
    }

    /// `self + scale · t · other`, the shape of the three-term recurrence.
    pub fn add_scaled_shift(&self, scale: &ExactRational, other: &InversePoly) -> InversePoly {
        let len = self.coeffs.len().max(other.coeffs.len() + 1);
        let mut out = vec![Rational::new(); len];
        for (o, c) in out.iter_mut().zip(&self.coeffs) {
            *o += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k + 1] += Rational::from(scale * c);
        }
        InversePoly::new(out)
    }
}

/// Which closed form to use for `Λ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosedFormVariant {
    #[default]
    Corrected,
    /// Extra factor 2 on every `k ≥ 1` term. Known to be wrong; kept so the
    /// quadrature suite can demonstrate the discrepancy.
    AsPrinted,
}

/// `I_n(a)` held as `sqrt(π/scale) · e^{-2 scale} · poly(1/scale)`.
///
/// The transcendental prefactor is never evaluated here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormInner {
    pub scale: ExactRational,
    pub poly: InversePoly,
}

impl ClosedFormInner {
    /// The rational factor `poly(1/scale)`.
    pub fn stripped_value(&self) -> ExactRational {
        self.poly.eval(&Rational::from(self.scale.recip_ref()))
    }

    /// Full numeric value including the prefactor.
    pub fn to_float(&self, precision_bits: u32) -> Float {
        prefactor(&self.scale, precision_bits) * self.stripped_value()
    }
}

/// `sqrt(π/a) · e^{-2a}` at the requested precision.
pub fn prefactor(a: &ExactRational, precision_bits: u32) -> Float {
    let prec = precision_bits + 16;
    let a_f = Float::with_val(prec, a);
    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let root = Float::with_val(prec, &pi / &a_f).sqrt();
    let decay = Float::with_val(prec, -2 * a_f).exp();
    Float::with_val(precision_bits, root * decay)
}

/// Memoized triangular tables of `a_k(l)`, `b_k(n)` and the polynomials `Λ_n`.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    max_n: usize,
    a_table: Vec<Vec<Integer>>,
    b_table: Vec<Vec<Integer>>,
    lambda: Vec<InversePoly>,
}

impl CoeffTable {
    pub fn build(max_n: usize) -> Self {
        let a_table: Vec<Vec<Integer>> = (0..=max_n)
            .map(|l| (0..=l).map(|k| a_entry(k as u32, l as u32)).collect())
            .collect();
        // b_table[n][k - 1] = b_k(n), 1 ≤ k ≤ n
        let b_table: Vec<Vec<Integer>> = (0..=max_n)
            .map(|n| {
                (1..=n)
                    .map(|k| {
                        let mut sum = Integer::new();
                        for (l, row) in a_table.iter().enumerate().take(n + 1).skip(k) {
                            if (n + l) % 2 == 0 {
                                sum += &row[k];
                            } else {
                                sum -= &row[k];
                            }
                        }
                        sum
                    })
                    .collect()
            })
            .collect();
        let lambda = (0..=max_n)
            .map(|n| {
                let mut coeffs = vec![Rational::from(1)];
                for k in 1..=n {
                    let weight = moment_ratio_unchecked(k as u32) / Integer::from(Integer::u_pow_u(4, k as u32));
                    coeffs.push(weight * &b_table[n][k - 1]);
                }
                InversePoly::new(coeffs)
            })
            .collect();
        CoeffTable {
            max_n,
            a_table,
            b_table,
            lambda,
        }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn a(&self, k: usize, l: usize) -> Option<&Integer> {
        self.a_table.get(l)?.get(k)
    }

    pub fn b(&self, k: usize, n: usize) -> Option<&Integer> {
        if k == 0 {
            return None;
        }
        self.b_table.get(n)?.get(k - 1)
    }

    /// `Λ_n` for `0 ≤ n ≤ max_n`.
    pub fn lambda(&self, n: usize) -> Option<&InversePoly> {
        self.lambda.get(n)
    }
}

static SHARED: RwLock<Option<Arc<CoeffTable>>> = RwLock::new(None);

/// A table covering at least `max_n`, built once and then shared. Growing
/// the table swaps in a new `Arc`; readers holding the old one are unaffected.
pub fn shared_table(max_n: usize) -> Arc<CoeffTable> {
    if let Some(t) = SHARED.read().unwrap().as_ref() {
        if t.max_n >= max_n {
            return Arc::clone(t);
        }
    }
    let mut guard = SHARED.write().unwrap();
    match guard.as_ref() {
        Some(t) if t.max_n >= max_n => Arc::clone(t),
        current => {
            let target = max_n.max(current.map_or(0, |t| 2 * t.max_n)).max(16);
            let table = Arc::new(CoeffTable::build(target));
            *guard = Some(Arc::clone(&table));
            table
        }
    }
}

fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

fn a_entry(k: u32, l: u32) -> Integer {
    let mut sum = Integer::new();
    for r in (l - k)..=l {
        sum += binomial(2 * l, 2 * r) * binomial(r, l - k);
    }
    2 * sum
}

/// `a_k(l) = 2 Σ_{r=l-k..l} C(2l, 2r) C(r, l-k)`, the coefficient of
/// `u^{2k}` in `q_l = x^{2l} + x^{-2l}`.
///
/// `a_0(l) = 2` for every `l`, including the convention `q_0 = 2`.
pub fn coeff_a(k: i64, l: i64) -> Result<Integer> {
    if k < 0 || l < 0 || k > l {
        return Err(Error::domain(format!("coeff_a needs 0 <= k <= l, got k={k}, l={l}")));
    }
    let (k, l) = (to_u32(k)?, to_u32(l)?);
    Ok(a_entry(k, l))
}

/// `b_k(n) = Σ_{l=k..n} (-1)^{n+l} a_k(l)`.
pub fn coeff_b(k: i64, n: i64) -> Result<Integer> {
    if k < 1 || k > n {
        return Err(Error::domain(format!("coeff_b needs 1 <= k <= n, got k={k}, n={n}")));
    }
    let mut sum = Integer::new();
    for l in k..=n {
        let term = coeff_a(k, l)?;
        if (n + l) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

fn moment_ratio_unchecked(k: u32) -> Rational {
    // (2k)! / (4^k k!) = Π_{j=1..k} (2j - 1)/2
    let mut r = Rational::from(1);
    for j in 1..=k {
        r *= Rational::from((2 * j - 1, 2));
    }
    r
}

/// Gaussian moment ratio `J_k / J_0 = (2k)! / (4^k k!)` with
/// `J_k = ∫ z^{2k} e^{-z^2} dz`.
pub fn moment_ratio(k: i64) -> Result<ExactRational> {
    if k < 0 {
        return Err(Error::domain(format!("moment_ratio needs k >= 0, got {k}")));
    }
    Ok(moment_ratio_unchecked(to_u32(k)?))
}

/// Index in `n ≥ 0` carrying the same integral: `I_{-(n+1)} = I_n`.
pub fn reflected_index(n: i64) -> u64 {
    if n >= 0 {
        n as u64
    } else {
        (-(n + 1)) as u64
    }
}

/// `Λ_n(t)` with `I_n(a) = sqrt(π/a) e^{-2a} Λ_n(1/a)`.
///
/// Negative `n` is reflected onto `-n - 1`, so the result has degree
/// `max(n, -n - 1)`.
pub fn lambda_poly(n: i64) -> InversePoly {
    let m = reflected_index(n) as usize;
    shared_table(m).lambda(m).cloned().expect("table covers index")
}

/// `Λ_n` for either closed-form variant.
pub fn lambda_poly_variant(n: i64, variant: ClosedFormVariant) -> InversePoly {
    let poly = lambda_poly(n);
    match variant {
        ClosedFormVariant::Corrected => poly,
        ClosedFormVariant::AsPrinted => {
            let coeffs = poly
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| if k == 0 { c.clone() } else { Rational::from(2 * c) })
                .collect();
            InversePoly::new(coeffs)
        }
    }
}

/// Closed form of `I_n(a)` with the prefactor left symbolic.
pub fn inner_closed_form(n: i64, a: &ExactRational) -> Result<ClosedFormInner> {
    inner_closed_form_variant(n, a, ClosedFormVariant::Corrected)
}

pub fn inner_closed_form_variant(
    n: i64,
    a: &ExactRational,
    variant: ClosedFormVariant,
) -> Result<ClosedFormInner> {
    if *a <= 0 {
        return Err(Error::domain(format!("scale a must be positive, got {a}")));
    }
    Ok(ClosedFormInner {
        scale: a.clone(),
        poly: lambda_poly_variant(n, variant),
    })
}

/// Checks `Λ_{n+1} = Λ_{n-1} + ((2n+1)/2) t Λ_n` exactly for `1 ≤ n < n_max`.
///
/// The recurrence follows from integrating `d/dx[x^{2n+1} e^{-a(x²+x⁻²)}]`
/// over the line (equivalently `I_n(a) = 2 K_{n+1/2}(2a)`), so it shares
/// nothing with the combinatorial route of [`lambda_poly`].
pub fn recurrence_check(n_max: u32) -> bool {
    let n_max = i64::from(n_max);
    (1..n_max).all(|n| {
        let factor = Rational::from((2 * n + 1, 2));
        lambda_poly(n - 1).add_scaled_shift(&factor, &lambda_poly(n)) == lambda_poly(n + 1)
    })
}

fn to_u32(v: i64) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::domain(format!("index {v} out of range")))
}
