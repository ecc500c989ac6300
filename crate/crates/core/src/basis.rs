//! States in the span of `b_n(x) = x^n exp(-a(x² + x⁻²)/2)` and the action of
//! `Q`, `Q⁻¹` and `d/dx` on them:
//!
//! ```text
//! x b_n = b_{n+1},   x⁻¹ b_n = b_{n-1},   b_n' = n b_{n-1} - a b_{n+1} + a b_{n-3}.
//! ```
//!
//! Momentum follows the convention `(Pψ)(x) = +iħ ψ'(x)`, so `[P, Q] = iħ`.
//! The sign is opposite to the usual `-iħ`; Hermiticity and spectra do not
//! depend on it.
//!
//! All of this runs in the dimensionless variable `x = y/r`, with
//! `r⁴ = l²L²` and `a = L/l` for a Gaussian length `l` and a singular length
//! `L`. Conversion from physical units lives in
//! [`HamiltonianSpec::from_physical`](crate::spectra::HamiltonianSpec::from_physical).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// The dimensionless ratio `a = L/l > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scale(ExactRational);

impl Scale {
    pub fn new(a: ExactRational) -> Result<Self> {
        if a <= 0 {
            return Err(Error::domain(format!("scale a must be positive, got {a}")));
        }
        Ok(Scale(a))
    }

    pub fn a(&self) -> &ExactRational {
        &self.0
    }

    /// `t = 1/a`, the argument of the `Λ_n` polynomials.
    pub fn inverse(&self) -> ExactRational {
        Rational::from(self.0.recip_ref())
    }
}

/// Complex number with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ComplexRational {
    pub re: ExactRational,
    pub im: ExactRational,
}

impl ComplexRational {
    pub fn new(re: ExactRational, im: ExactRational) -> Self {
        ComplexRational { re, im }
    }

    pub fn real(re: impl Into<ExactRational>) -> Self {
        ComplexRational {
            re: re.into(),
            im: Rational::new(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(1)
    }

    pub fn i() -> Self {
        ComplexRational::new(Rational::new(), Rational::from(1))
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_real(&self) -> bool {
        self.im == 0
    }

    pub fn conj(&self) -> Self {
        ComplexRational::new(self.re.clone(), Rational::from(-&self.im))
    }

    pub fn scale(&self, r: &ExactRational) -> Self {
        ComplexRational::new(Rational::from(&self.re * r), Rational::from(&self.im * r))
    }

    /// `|z|²`
    pub fn norm_sqr(&self) -> ExactRational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }
}

impl From<ExactRational> for ComplexRational {
    fn from(re: ExactRational) -> Self {
        ComplexRational::real(re)
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else if self.re == 0 {
            write!(f, "{}i", self.im)
        } else if self.im < 0 {
            write!(f, "{} - {}i", self.re, Rational::from(-&self.im))
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add<&ComplexRational> for &ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational::new(
            Rational::from(&self.re + &rhs.re),
            Rational::from(&self.im + &rhs.im),
        )
    }
}

impl AddAssign<&ComplexRational> for ComplexRational {
    fn add_assign(&mut self, rhs: &ComplexRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub<&ComplexRational> for &ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational::new(
            Rational::from(&self.re - &rhs.re),
            Rational::from(&self.im - &rhs.im),
        )
    }
}

impl Mul<&ComplexRational> for &ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: &ComplexRational) -> ComplexRational {
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        ComplexRational::new(re, im)
    }
}

impl Neg for ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational::new(-self.re, -self.im)
    }
}

/// Finite combination `Σ c_n b_n` keyed by the Laurent exponent `n`.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentState {
    coeffs: BTreeMap<i64, ComplexRational>,
    scale: Scale,
}

impl LaurentState {
    pub fn zero(scale: Scale) -> Self {
        LaurentState {
            coeffs: BTreeMap::new(),
            scale,
        }
    }

    /// The single basis function `b_n`.
    pub fn basis(n: i64, scale: Scale) -> Self {
        let mut s = Self::zero(scale);
        s.add_term(n, &ComplexRational::one());
        s
    }

    pub fn from_terms<I>(terms: I, scale: Scale) -> Self
    where
        I: IntoIterator<Item = (i64, ComplexRational)>,
    {
        let mut s = Self::zero(scale);
        for (n, c) in terms {
            s.add_term(n, &c);
        }
        s
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn coeff(&self, n: i64) -> Option<&ComplexRational> {
        self.coeffs.get(&n)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ComplexRational)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `c · b_n`, dropping the entry if it cancels.
    pub fn add_term(&mut self, n: i64, c: &ComplexRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(n).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn add_scaled(&mut self, other: &LaurentState, c: &ComplexRational) {
        for (n, d) in other.terms() {
            self.add_term(n, &(c * d));
        }
    }

    pub fn scaled(&self, c: &ComplexRational) -> LaurentState {
        let mut out = LaurentState::zero(self.scale.clone());
        out.add_scaled(self, c);
        out
    }

    fn shifted(&self, by: i64) -> LaurentState {
        LaurentState {
            coeffs: self.coeffs.iter().map(|(n, c)| (n + by, c.clone())).collect(),
            scale: self.scale.clone(),
        }
    }
}

/// Multiplication by `x`.
pub fn apply_q(s: &LaurentState) -> LaurentState {
    s.shifted(1)
}

/// Multiplication by `1/x`.
pub fn apply_qinv(s: &LaurentState) -> LaurentState {
    s.shifted(-1)
}

/// `d/dx`, from `b_n' = n b_{n-1} - a b_{n+1} + a b_{n-3}`.
pub fn apply_dx(s: &LaurentState) -> LaurentState {
    let a = ComplexRational::real(s.scale.a().clone());
    let minus_a = -a.clone();
    let mut out = LaurentState::zero(s.scale.clone());
    for (n, c) in s.terms() {
        out.add_term(n - 1, &c.scale(&Rational::from(n)));
        out.add_term(n + 1, &(c * &minus_a));
        out.add_term(n - 3, &(c * &a));
    }
    out
}

/// Generators of the operator algebra acting on the span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Q,
    Qinv,
    Dx,
}

impl Symbol {
    fn apply(self, s: &LaurentState) -> LaurentState {
        match self {
            Symbol::Q => apply_q(s),
            Symbol::Qinv => apply_qinv(s),
            Symbol::Dx => apply_dx(s),
        }
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" | "x" => Ok(Symbol::Q),
            "Qinv" | "Q^-1" | "x^-1" => Ok(Symbol::Qinv),
            "Dx" | "d/dx" => Ok(Symbol::Dx),
            "Pinv" | "P^-1" => Err(Error::domain(
                "inverse momentum maps b_0 out of L², so it has no representation on this span",
            )),
            other => Err(Error::domain(format!("unknown operator symbol {other:?}"))),
        }
    }
}

/// Formal sum of words over [`Symbol`] with complex-rational coefficients.
///
/// A word `[A, B, C]` denotes the product `A·B·C`, so `C` acts first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorExpr {
    terms: Vec<(ComplexRational, Vec<Symbol>)>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(ComplexRational::one())
    }

    pub fn scalar(c: ComplexRational) -> Self {
        Self::term(c, Vec::new())
    }

    pub fn symbol(sym: Symbol) -> Self {
        Self::term(ComplexRational::one(), vec![sym])
    }

    pub fn term(c: ComplexRational, word: Vec<Symbol>) -> Self {
        OperatorExpr {
            terms: vec![(c, word)],
        }
    }

    /// `P = iħ d/dx`.
    pub fn momentum(hbar: &ExactRational) -> Self {
        Self::term(
            ComplexRational::new(Rational::new(), hbar.clone()),
            vec![Symbol::Dx],
        )
    }

    /// `x^p` for any integer `p`, as a word in `Q` or `Qinv`.
    pub fn power(p: i64) -> Self {
        let sym = if p >= 0 { Symbol::Q } else { Symbol::Qinv };
        Self::term(ComplexRational::one(), vec![sym; p.unsigned_abs() as usize])
    }

    pub fn terms(&self) -> &[(ComplexRational, Vec<Symbol>)] {
        &self.terms
    }

    pub fn scaled(mut self, c: &ComplexRational) -> Self {
        for (coeff, _) in &mut self.terms {
            *coeff = &*coeff * c;
        }
        self
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;
    fn add(mut self, rhs: OperatorExpr) -> OperatorExpr {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: OperatorExpr) -> OperatorExpr {
        self + rhs.scaled(&-ComplexRational::one())
    }
}

/// Operator product; words concatenate.
impl Mul for &OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (c1, w1) in &self.terms {
            for (c2, w2) in &rhs.terms {
                let mut word = w1.clone();
                word.extend_from_slice(w2);
                terms.push((c1 * c2, word));
            }
        }
        OperatorExpr { terms }
    }
}

/// Applies each word right to left and sums the results.
pub fn apply_expr(e: &OperatorExpr, s: &LaurentState) -> LaurentState {
    let mut out = LaurentState::zero(s.scale.clone());
    for (c, word) in &e.terms {
        let image = word
            .iter()
            .rev()
            .fold(s.clone(), |state, sym| sym.apply(&state));
        out.add_scaled(&image, c);
    }
    out
}

/// Complex value at arbitrary precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFloat {
    pub re: Float,
    pub im: Float,
}

/// Extra bits used for the exponent near the origin, where `x⁻²` is huge.
const SMALL_X_GUARD_BITS: u32 = 64;

/// Point value `Σ c_n x^n exp(-a(x² + x⁻²)/2)`; zero at `x = 0`.
pub fn evaluate_state(s: &LaurentState, x: &Float, precision_bits: u32) -> Result<ComplexFloat> {
    if precision_bits < 53 {
        return Err(Error::domain(format!(
            "precision must be at least 53 bits, got {precision_bits}"
        )));
    }
    let zero = ComplexFloat {
        re: Float::new(precision_bits),
        im: Float::new(precision_bits),
    };
    if x.is_zero() {
        return Ok(zero);
    }
    let tiny = Float::with_val(53, 1e-4);
    let work = if x.clone().abs() < tiny {
        precision_bits + SMALL_X_GUARD_BITS
    } else {
        precision_bits + 16
    };
    let x = Float::with_val(work, x);
    let x2 = Float::with_val(work, x.square_ref());
    let inv_x2 = Float::with_val(work, x2.recip_ref());
    let exponent: Float =
        -Float::with_val(work, &x2 + &inv_x2) * Float::with_val(work, s.scale.a()) / 2u32;
    let envelope = exponent.exp();
    if envelope.is_zero() {
        return Ok(zero);
    }
    let mut re = Float::new(work);
    let mut im = Float::new(work);
    for (n, c) in s.terms() {
        let monomial = Float::with_val(work, (&x).pow(n as i32)) * &envelope;
        re += Float::with_val(work, &monomial * &c.re);
        im += Float::with_val(work, &monomial * &c.im);
    }
    Ok(ComplexFloat {
        re: Float::with_val(precision_bits, re),
        im: Float::with_val(precision_bits, im),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Scale {
        Scale::new(Rational::from(1)).unwrap()
    }

    fn state(terms: &[(i64, i64)]) -> LaurentState {
        LaurentState::from_terms(
            terms.iter().map(|&(n, c)| (n, ComplexRational::real(c))),
            unit(),
        )
    }

    #[test]
    fn scale_must_be_positive() {
        assert!(Scale::new(Rational::new()).is_err());
        assert!(Scale::new(Rational::from(-3)).is_err());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(apply_q(&state(&[(0, 1)])), state(&[(1, 1)]));
        assert!(apply_q(&state(&[])).is_empty());
        assert_eq!(apply_q(&state(&[(-2, 3), (5, -1)])), state(&[(-1, 3), (6, -1)]));
        assert_eq!(apply_qinv(&state(&[(0, 1)])), state(&[(-1, 1)]));
        assert_eq!(apply_qinv(&state(&[(1, 2)])), state(&[(0, 2)]));
    }

    #[test]
    fn dx_examples() {
        assert_eq!(apply_dx(&state(&[(0, 1)])), state(&[(1, -1), (-3, 1)]));
        assert_eq!(apply_dx(&state(&[(1, 1)])), state(&[(0, 1), (2, -1), (-2, 1)]));
    }

    #[test]
    fn dx_uses_state_scale() {
        let half = Scale::new(Rational::from((1, 2))).unwrap();
        let out = apply_dx(&LaurentState::basis(0, half));
        assert_eq!(out.coeff(1).unwrap().re, Rational::from((-1, 2)));
        assert_eq!(out.coeff(-3).unwrap().re, Rational::from((1, 2)));
    }

    #[test]
    fn cancelling_terms_are_dropped() {
        let mut s = state(&[(3, 2)]);
        s.add_term(3, &ComplexRational::real(-2));
        assert!(s.is_empty());
    }

    #[test]
    fn q_qinv_word_is_identity() {
        let e = OperatorExpr::term(ComplexRational::one(), vec![Symbol::Q, Symbol::Qinv]);
        let s = state(&[(-4, 1), (0, 7), (3, -2)]);
        assert_eq!(apply_expr(&e, &s), s);
    }

    #[test]
    fn dx_x_commutator_is_identity() {
        let dx = OperatorExpr::symbol(Symbol::Dx);
        let q = OperatorExpr::symbol(Symbol::Q);
        let comm = &dx * &q - &q * &dx;
        for n in -5..=5 {
            assert_eq!(apply_expr(&comm, &state(&[(n, 1)])), state(&[(n, 1)]));
        }
    }

    #[test]
    fn kinetic_term_is_minus_half_second_derivative() {
        let p = OperatorExpr::momentum(&Rational::from(1));
        let kinetic = (&p * &p).scaled(&ComplexRational::real(Rational::from((1, 2))));
        let s = state(&[(0, 1)]);
        let expected = apply_dx(&apply_dx(&s)).scaled(&ComplexRational::real(Rational::from((-1, 2))));
        assert_eq!(apply_expr(&kinetic, &s), expected);
    }

    #[test]
    fn power_words() {
        let s = state(&[(0, 1)]);
        assert_eq!(apply_expr(&OperatorExpr::power(3), &s), state(&[(3, 1)]));
        assert_eq!(apply_expr(&OperatorExpr::power(-2), &s), state(&[(-2, 1)]));
        assert_eq!(apply_expr(&OperatorExpr::power(0), &s), s);
    }

    #[test]
    fn inverse_momentum_is_rejected() {
        assert!("Pinv".parse::<Symbol>().is_err());
        assert!("P^-1".parse::<Symbol>().is_err());
        assert_eq!("Qinv".parse::<Symbol>().unwrap(), Symbol::Qinv);
    }

    #[test]
    fn evaluate_examples() {
        let e_inv = Float::with_val(128, -1).exp();
        let one = Float::with_val(128, 1);
        let v = evaluate_state(&state(&[(0, 1)]), &one, 128).unwrap();
        assert_eq!(v.re, e_inv);
        assert!(v.im.is_zero());

        let v = evaluate_state(&state(&[(2, 1)]), &Float::with_val(128, -1), 128).unwrap();
        assert_eq!(v.re, e_inv);

        let near_zero = Float::with_val(128, 1e-6);
        let v = evaluate_state(&state(&[(0, 1)]), &near_zero, 128).unwrap();
        assert!(v.re.is_zero());
        let v = evaluate_state(&state(&[(0, 1)]), &Float::new(128), 128).unwrap();
        assert!(v.re.is_zero());
    }

    #[test]
    fn evaluate_rejects_low_precision() {
        assert!(evaluate_state(&state(&[(0, 1)]), &Float::with_val(64, 1), 52).is_err());
    }

    #[test]
    fn complex_display() {
        assert_eq!(ComplexRational::i().to_string(), "1i");
        let z = ComplexRational::new(Rational::from(1), Rational::from(-2));
        assert_eq!(z.to_string(), "1 - 2i");
    }
}
