#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use rug::{Float, Rational};
use singular_basis::basis::{apply_dx, evaluate_state, OperatorExpr, Symbol};
use singular_basis::exact_coeffs::coeff_b;
use singular_basis::{ComplexRational, HamiltonianSpec, LaurentState, Scale};

/// Ground-state gap `E_0(N=32) - 5/2` of the spiked oscillator at `a = 1`,
/// first computed at 256 bits.
pub const SPIKED_GAP_N32: &str = "0.008867311639640172102518082423766807639";
/// `⟨b_{0,0}, b_{0,0}⟩` for singular points {0, 4}, `a = 1`.
pub const MULTIPOINT_0_4: &str = "2.278923036377476496746970117463794759062e-4";
/// Recommended float precision for the `N = 24`, `a = 1` Gram matrix.
pub const RECOMMENDED_BITS_N24: u32 = 128;
pub const CONDITION_N24: f64 = 7.870898227755842e13;

pub fn q(p: i64, d: i64) -> Rational {
    Rational::from((p, d))
}

pub fn unit_scale() -> Scale {
    Scale::new(q(1, 1)).unwrap()
}

pub fn spiked(g: i64) -> HamiltonianSpec {
    HamiltonianSpec::new(format!("0.5*x^2 + {g}*x^-2").parse().unwrap())
}

pub fn random_nonzero_rational(rng: &mut StdRng) -> Rational {
    loop {
        let p: i64 = rng.gen_range(-60..=60);
        let d: i64 = rng.gen_range(1..=60);
        if p != 0 {
            return q(p, d);
        }
    }
}

/// `(1 + x⁻²)(1 + Σ_k (z/2)^{2k} b_k(n)) == x^{2n} + x^{-2(n+1)}` with `z = x - 1/x`.
pub fn telescopic_holds(n: i64, x: &Rational) -> bool {
    let inv = Rational::from(x.recip_ref());
    let z = Rational::from(x - &inv);
    let half_z_sq = Rational::from(z.square_ref()) / 4;
    let mut bracket = Rational::from(1);
    let mut power = Rational::from(1);
    for k in 1..=n {
        power *= &half_z_sq;
        bracket += Rational::from(&power * &Rational::from(coeff_b(k, n).unwrap()));
    }
    let inv_sq = Rational::from(inv.square_ref());
    let lhs = (Rational::from(1) + &inv_sq) * bracket;
    let x_sq = Rational::from(x.square_ref());
    let mut rhs_pos = Rational::from(1);
    let mut rhs_neg = Rational::from(1);
    for _ in 0..n {
        rhs_pos *= &x_sq;
        rhs_neg *= &inv_sq;
    }
    rhs_neg *= &inv_sq;
    lhs == rhs_pos + rhs_neg
}

pub fn random_state(rng: &mut StdRng, scale: Scale, lo: i64, hi: i64, terms: usize) -> LaurentState {
    let mut s = LaurentState::zero(scale);
    for _ in 0..terms {
        let n = rng.gen_range(lo..=hi);
        let c = ComplexRational::new(random_nonzero_rational(rng), q(rng.gen_range(-5..=5), 7));
        s.add_term(n, &c);
    }
    s
}

/// Relative deviation between the symbolic derivative of `s` at `x` and a
/// fourth-order central difference with step `1e-5`.
pub fn finite_difference_deviation(s: &LaurentState, x: f64) -> f64 {
    const PREC: u32 = 128;
    let at = |dx: f64| {
        let xx = Float::with_val(PREC, x) + dx;
        evaluate_state(s, &xx, PREC).unwrap()
    };
    let h = 1e-5;
    let (p1, m1, p2, m2) = (at(h), at(-h), at(2.0 * h), at(-2.0 * h));
    let fd = |a: &Float, b: &Float, c: &Float, d: &Float| -> Float {
        (Float::with_val(PREC, a - b) * 8u32 - Float::with_val(PREC, c - d)) / (12.0 * h)
    };
    let fd_re = fd(&p1.re, &m1.re, &p2.re, &m2.re);
    let fd_im = fd(&p1.im, &m1.im, &p2.im, &m2.im);
    let sym = evaluate_state(&apply_dx(s), &Float::with_val(PREC, x), PREC).unwrap();
    let diff = Float::with_val(PREC, (fd_re - &sym.re).hypot(&(fd_im - &sym.im)));
    let size = Float::with_val(PREC, sym.re.hypot(&sym.im));
    (diff / size).to_f64()
}

/// `[P, Q] b_n == iħ b_n` exactly, with `P = iħ d/dx`.
pub fn commutator_holds(n: i64, hbar: &Rational, scale: Scale) -> bool {
    let p = OperatorExpr::momentum(hbar);
    let x = OperatorExpr::symbol(Symbol::Q);
    let comm = (&p * &x) - (&x * &p);
    let b = LaurentState::basis(n, scale.clone());
    let lhs = singular_basis::basis::apply_expr(&comm, &b);
    let rhs = b.scaled(&ComplexRational::new(q(0, 1), hbar.clone()));
    lhs == rhs
}
