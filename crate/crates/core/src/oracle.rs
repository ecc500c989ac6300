//! Independent quadrature checks.
//!
//! Nothing here calls into the combinatorial closed form: the integrands are
//! evaluated from their definitions and integrated with the trapezoid rule
//! after a substitution that makes them decay doubly exponentially. For the
//! one-point integrals, `x = e^u` turns
//!
//! ```text
//! 2 ∫_0^∞ x^{2n} e^{-a(x² + x⁻²)} dx   into   2 ∫_ℝ e^{(2n+1)u - 2a cosh 2u} du,
//! ```
//!
//! an entire function, so the trapezoid rule converges geometrically in the
//! step size.

use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_coeffs::{inner_closed_form_variant, lambda_poly, ClosedFormVariant};
use crate::potential::LaurentPoly;
use crate::rational::{format_float, format_rational, ExactRational};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub precision_bits: u32,
    pub target_rel_error: f64,
    pub max_levels: u32,
}

impl QuadratureSettings {
    pub fn new(precision_bits: u32, target_rel_error: f64, max_levels: u32) -> Result<Self> {
        if precision_bits < 53 {
            return Err(Error::domain(format!(
                "precision must be at least 53 bits, got {precision_bits}"
            )));
        }
        let floor = 2f64.powi(8 - precision_bits as i32);
        if target_rel_error.is_nan() || target_rel_error < floor {
            return Err(Error::domain(format!(
                "target relative error {target_rel_error:e} is below what {precision_bits} bits can deliver ({floor:e})"
            )));
        }
        Ok(QuadratureSettings {
            precision_bits,
            target_rel_error,
            max_levels,
        })
    }

    /// Target of about `2^-(precision - 24)` with room for eight refinements.
    pub fn for_precision(precision_bits: u32) -> Self {
        let target = 2f64.powi(24 - precision_bits.max(53) as i32);
        QuadratureSettings {
            precision_bits: precision_bits.max(53),
            target_rel_error: target,
            max_levels: 10,
        }
    }
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self::for_precision(128)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadEstimate {
    pub value: Float,
    /// Absolute difference between the last two refinement levels.
    pub error_estimate: Float,
    pub levels: u32,
}

const INITIAL_STEP: f64 = 0.5;
const SCAN_STEP: f64 = 0.25;
const MIN_HALF_WIDTH: f64 = 2.0;
const MAX_HALF_WIDTH: f64 = 60.0;

/// Trapezoid rule on `ℝ` for an integrand that decays doubly exponentially
/// in both directions.
fn trapezoid<F>(f: F, settings: &QuadratureSettings) -> Result<QuadEstimate>
where
    F: Fn(&Float) -> Float + Sync,
{
    trapezoid_with_floor(f, settings, None)
}

/// As [`trapezoid`], also accepting convergence once the level difference
/// falls below the absolute `floor`.
fn trapezoid_with_floor<F>(f: F, settings: &QuadratureSettings, floor: Option<&Float>) -> Result<QuadEstimate>
where
    F: Fn(&Float) -> Float + Sync,
{
    let prec = settings.precision_bits + 32;
    let (lo, hi, _) = truncation(&f, prec, settings.precision_bits)?;

    let eval_range = |h: f64, stride: i64, offset: i64| -> Float {
        // points u = k h with k ≡ offset (mod stride) inside [lo, hi]
        let k_lo = (lo / h).floor() as i64;
        let k_hi = (hi / h).ceil() as i64;
        let ks: Vec<i64> = (k_lo..=k_hi)
            .filter(|k| (k - offset).rem_euclid(stride) == 0)
            .collect();
        let parts: Vec<Float> = ks
            .par_iter()
            .map(|&k| f(&Float::with_val(prec, k as f64 * h)))
            .collect();
        let mut acc = Float::new(prec);
        for p in parts {
            acc += p;
        }
        acc
    };

    let mut h = INITIAL_STEP;
    let mut sum = eval_range(h, 1, 0);
    let mut estimate = Float::with_val(prec, &sum * h);
    let target = Float::with_val(prec, settings.target_rel_error);
    for level in 1..=settings.max_levels {
        h /= 2.0;
        sum += eval_range(h, 2, 1);
        let next = Float::with_val(prec, &sum * h);
        let err = Float::with_val(prec, &next - &estimate).abs();
        estimate = next;
        let scale = Float::with_val(prec, estimate.abs_ref());
        let below_floor = floor.is_some_and(|fl| err <= *fl);
        if level >= 2 && (err <= Float::with_val(prec, &target * &scale) || err.is_zero() || below_floor) {
            return Ok(QuadEstimate {
                value: Float::with_val(settings.precision_bits, &estimate),
                error_estimate: Float::with_val(settings.precision_bits, err),
                levels: level,
            });
        }
        if level == settings.max_levels {
            let achieved = if scale.is_zero() {
                f64::INFINITY
            } else {
                (err / scale).to_f64()
            };
            return Err(Error::Accuracy {
                achieved,
                target: settings.target_rel_error,
            });
        }
    }
    Err(Error::Accuracy {
        achieved: f64::INFINITY,
        target: settings.target_rel_error,
    })
}

/// Walks outward from the origin until the integrand is negligible relative
/// to the largest value seen and still decreasing. Returns the bounds and
/// that largest magnitude.
fn truncation<F>(f: &F, prec: u32, bits: u32) -> Result<(f64, f64, Float)>
where
    F: Fn(&Float) -> Float,
{
    let tiny = Float::with_val(prec, Float::i_exp(1, -(bits as i32) - 40));
    let mut peak = Float::with_val(prec, f(&Float::with_val(prec, 0)).abs());
    let mut bounds = [0.0f64; 2];
    for (slot, dir) in bounds.iter_mut().zip([-1.0f64, 1.0]) {
        let mut prev = peak.clone();
        let mut u = 0.0;
        loop {
            u += SCAN_STEP;
            if u > MAX_HALF_WIDTH {
                return Err(Error::Accuracy {
                    achieved: f64::INFINITY,
                    target: 0.0,
                });
            }
            let v = f(&Float::with_val(prec, dir * u)).abs();
            if v > peak {
                peak = v.clone();
            }
            let negligible = v <= Float::with_val(prec, &tiny * &peak);
            if u >= MIN_HALF_WIDTH && negligible && v <= prev {
                break;
            }
            prev = v;
        }
        *slot = dir * u;
    }
    Ok((bounds[0], bounds[1], peak))
}

fn check_scale(a: &ExactRational) -> Result<()> {
    if *a <= 0 {
        return Err(Error::domain(format!("scale a must be positive, got {a}")));
    }
    Ok(())
}

/// Numerical `I_n(a) = ∫ x^{2n} e^{-a(x² + x⁻²)} dx`.
pub fn quad_inner(n: i64, a: &ExactRational, settings: &QuadratureSettings) -> Result<QuadEstimate> {
    check_scale(a)?;
    let prec = settings.precision_bits + 32;
    let a_f = Float::with_val(prec, a);
    let growth = Float::with_val(prec, 2 * n + 1);
    trapezoid(
        |u| {
            let cosh = Float::with_val(prec, u * 2u32).cosh();
            let exponent = Float::with_val(prec, &growth * u) - Float::with_val(prec, &a_f * &cosh) * 2u32;
            exponent.exp() * 2u32
        },
        settings,
    )
}

/// Operator `κ · (-d²/dx²) + V(x)` whose matrix elements the oracle integrates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OracleOperator {
    pub kinetic: ExactRational,
    pub potential: LaurentPoly,
}

/// `log|b_m(x) b_n(x)| + sign`, plus the bracket `-κ (g² + g') + V(x)` where
/// `g = n/x - a x + a/x³` is the logarithmic derivative of `b_n`.
fn matrix_element_integrand(
    x: &Float,
    m: i64,
    n: i64,
    a: &Float,
    op: &OracleOperator,
    prec: u32,
) -> Float {
    let x2 = Float::with_val(prec, x.square_ref());
    let inv = Float::with_val(prec, x.recip_ref());
    let inv2 = Float::with_val(prec, inv.square_ref());
    let log_abs = Float::with_val(prec, x.abs_ref()).ln() * (m + n)
        - Float::with_val(prec, &x2 + &inv2) * a;
    let magnitude = log_abs.exp();
    if magnitude.is_zero() {
        return magnitude;
    }
    let sign = if x.is_sign_negative() && (m + n).rem_euclid(2) == 1 { -1 } else { 1 };

    let mut bracket = Float::new(prec);
    for (p, c) in op.potential.terms() {
        let mut xp = Float::with_val(prec, 1);
        let base = if p >= 0 { x } else { &inv };
        for _ in 0..p.unsigned_abs() {
            xp *= base;
        }
        bracket += xp * c;
    }
    if op.kinetic != 0 {
        let inv3 = Float::with_val(prec, &inv2 * &inv);
        let g = Float::with_val(prec, &inv * n) - Float::with_val(prec, x * a)
            + Float::with_val(prec, &inv3 * a);
        let inv4 = Float::with_val(prec, inv2.square_ref());
        let g_prime = -Float::with_val(prec, &inv2 * n) - a.clone() - Float::with_val(prec, &inv4 * a) * 3u32;
        let second = Float::with_val(prec, g.square_ref()) + g_prime;
        bracket -= second * &op.kinetic;
    }
    magnitude * bracket * sign
}

/// Numerical `⟨b_m, O b_n⟩` over the whole line for `O = κ(-d²/dx²) + V`.
pub fn quad_matrix_element(
    m: i64,
    n: i64,
    op: &OracleOperator,
    a: &ExactRational,
    settings: &QuadratureSettings,
) -> Result<QuadEstimate> {
    check_scale(a)?;
    let prec = settings.precision_bits + 32;
    let a_f = Float::with_val(prec, a);
    trapezoid(
        |u| {
            let x = Float::with_val(prec, u.exp_ref());
            let jac = x.clone();
            let pos = matrix_element_integrand(&x, m, n, &a_f, op, prec);
            let neg = matrix_element_integrand(&(-x), m, n, &a_f, op, prec);
            (pos + neg) * jac
        },
        settings,
    )
}

/// Exponents attached to a set of singular points, for products
/// `Π_k b_{n_k}(x - x_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPointBasisIndex {
    pub points: Vec<ExactRational>,
    pub exponents: Vec<i64>,
}

impl MultiPointBasisIndex {
    pub fn new(points: Vec<ExactRational>, exponents: Vec<i64>) -> Result<Self> {
        if points.is_empty() || points.len() != exponents.len() {
            return Err(Error::domain("need one exponent per point and at least one point"));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::domain(format!("point {p} is repeated")));
            }
        }
        Ok(MultiPointBasisIndex { points, exponents })
    }
}

/// Numerical `⟨b_{m⃗}, b_{n⃗}⟩` for multi-point products, integrating
/// separately between consecutive singular points.
///
/// `scales` holds one `a` per point, or a single value shared by all.
pub fn quad_multipoint_gram(
    i1: &MultiPointBasisIndex,
    i2: &MultiPointBasisIndex,
    scales: &[ExactRational],
    settings: &QuadratureSettings,
) -> Result<QuadEstimate> {
    if i1.points != i2.points {
        return Err(Error::domain("both indices must share the same points"));
    }
    let count = i1.points.len();
    if !(scales.len() == 1 || scales.len() == count) {
        return Err(Error::domain("give one scale per point or a single shared scale"));
    }
    scales.iter().try_for_each(check_scale)?;
    let prec = settings.precision_bits + 64;

    // (point, combined exponent, scale), sorted by position
    let mut factors: Vec<(Float, i64, Float)> = (0..count)
        .map(|k| {
            let a = if scales.len() == 1 { &scales[0] } else { &scales[k] };
            (
                Float::with_val(prec, &i1.points[k]),
                i1.exponents[k] + i2.exponents[k],
                Float::with_val(prec, a),
            )
        })
        .collect();
    factors.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite points"));

    // integrand given the offsets x - x_k for every point
    let integrand = |offsets: &[Float]| -> Float {
        let mut log_abs = Float::new(prec);
        let mut negative = false;
        for (d, (_, e, a)) in offsets.iter().zip(&factors) {
            if d.is_zero() {
                return Float::new(prec);
            }
            let d2 = Float::with_val(prec, d.square_ref());
            let inv2 = Float::with_val(prec, d2.recip_ref());
            log_abs += Float::with_val(prec, d.abs_ref()).ln() * e;
            log_abs -= Float::with_val(prec, &d2 + &inv2) * a;
            if d.is_sign_negative() && e.rem_euclid(2) == 1 {
                negative = !negative;
            }
        }
        let v = log_abs.exp();
        if negative {
            -v
        } else {
            v
        }
    };
    let offsets_at = |x: &Float| -> Vec<Float> {
        factors
            .iter()
            .map(|(p, _, _)| Float::with_val(prec, x - p))
            .collect()
    };

    let first = factors[0].0.clone();
    let last = factors[count - 1].0.clone();
    // segment 0 is left of all points, 1 right of all points, 2 + k between
    // points k and k + 1
    let segment = |seg: usize, u: &Float| -> Float {
        match seg {
            0 | 1 => {
                let step = Float::with_val(prec, u.exp_ref());
                let (x, slot, d) = if seg == 0 {
                    (Float::with_val(prec, &first - &step), 0, -step.clone())
                } else {
                    (Float::with_val(prec, &last + &step), count - 1, step.clone())
                };
                let mut offsets = offsets_at(&x);
                offsets[slot] = d;
                integrand(&offsets) * step
            }
            _ => {
                let k = seg - 2;
                let left = &factors[k].0;
                let width = Float::with_val(prec, &factors[k + 1].0 - left);
                // logistic map onto (left, left + width); both end distances
                // are formed directly so neither loses digits near its end
                let e = Float::with_val(prec, (-u.clone()).exp());
                let sigma = Float::with_val(prec, 1u32 + &e).recip();
                let tail = Float::with_val(prec, &sigma * &e);
                let to_left = Float::with_val(prec, &width * &sigma);
                let to_right = Float::with_val(prec, &width * &tail);
                let x = Float::with_val(prec, left + &to_left);
                let mut offsets = offsets_at(&x);
                offsets[k] = to_left.clone();
                offsets[k + 1] = -to_right;
                let jac = Float::with_val(prec, &to_left * &tail);
                integrand(&offsets) * jac
            }
        }
    };
    let segments = count + 1;

    // Rough size of the whole integral, so a segment whose contribution is
    // far below the target need not converge on its own scale.
    let mut magnitude = Float::new(prec);
    for seg in 0..segments {
        let f = |u: &Float| segment(seg, u);
        let (lo, hi, peak) = truncation(&f, prec, settings.precision_bits)?;
        magnitude += peak * (hi - lo);
    }
    let floor = Float::with_val(prec, &magnitude * settings.target_rel_error) >> 8u32;

    let mut total = Float::new(prec);
    let mut error = Float::new(prec);
    let mut levels = 0;
    for seg in 0..segments {
        let q = trapezoid_with_floor(|u: &Float| segment(seg, u), settings, Some(&floor))?;
        total += q.value;
        error += q.error_estimate;
        levels = levels.max(q.levels);
    }
    Ok(QuadEstimate {
        value: Float::with_val(settings.precision_bits, total),
        error_estimate: Float::with_val(settings.precision_bits, error),
        levels,
    })
}

/// Prefactor-stripped inner product of tensor-product basis functions
/// `Π_d b_{n_d}(x^d)`; the full value carries the 1-D prefactor to the power `D`.
pub fn tensor_gram_entry(exponents1: &[i64], exponents2: &[i64], a: &ExactRational) -> Result<ExactRational> {
    if exponents1.len() != exponents2.len() {
        return Err(Error::domain(format!(
            "dimension mismatch: {} vs {}",
            exponents1.len(),
            exponents2.len()
        )));
    }
    check_scale(a)?;
    let t = Rational::from(a.recip_ref());
    let mut product = Rational::from(1);
    for (m, n) in exponents1.iter().zip(exponents2) {
        if (m + n).rem_euclid(2) == 1 {
            return Ok(Rational::new());
        }
        product *= lambda_poly((m + n) / 2).eval(&t);
    }
    Ok(product)
}

/// One closed form vs quadrature comparison.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationCase {
    pub n: i64,
    pub a: String,
    pub closed_form: String,
    pub oracle: String,
    pub relative_deviation: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub variant: &'static str,
    pub precision_bits: u32,
    pub tolerance: f64,
    pub all_pass: bool,
    pub cases: Vec<VerificationCase>,
}

/// Compares `sqrt(π/a) e^{-2a} Λ_n(1/a)` with [`quad_inner`] over a grid.
pub fn verify_closed_forms(
    n_values: &[i64],
    scales: &[ExactRational],
    tolerance: f64,
    variant: ClosedFormVariant,
    settings: &QuadratureSettings,
) -> Result<VerificationReport> {
    let grid: Vec<(i64, &ExactRational)> = scales
        .iter()
        .flat_map(|a| n_values.iter().map(move |&n| (n, a)))
        .collect();
    let prec = settings.precision_bits;
    let cases = grid
        .par_iter()
        .map(|&(n, a)| {
            let closed = inner_closed_form_variant(n, a, variant)?.to_float(prec);
            let quad = quad_inner(n, a, settings)?;
            let deviation = Float::with_val(prec, &closed - &quad.value).abs() / &quad.value;
            Ok(VerificationCase {
                n,
                a: format_rational(a),
                closed_form: format_float(&closed),
                oracle: format_float(&quad.value),
                relative_deviation: format!("{:e}", deviation.to_f64()),
                pass: deviation.to_f64() < tolerance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        variant: match variant {
            ClosedFormVariant::Corrected => "corrected",
            ClosedFormVariant::AsPrinted => "as-printed",
        },
        precision_bits: prec,
        tolerance,
        all_pass: cases.iter().all(|c| c.pass),
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from((p, d))
    }

    fn rel(a: &Float, b: &Float) -> f64 {
        (Float::with_val(a.prec(), a - b).abs() / b.clone().abs()).to_f64()
    }

    fn sqrt_pi_e2(prec: u32) -> Float {
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        pi.sqrt() * Float::with_val(prec, -2).exp()
    }

    #[test]
    fn settings_validation() {
        assert!(QuadratureSettings::new(128, 1e-30, 10).is_ok());
        assert!(QuadratureSettings::new(128, 1e-60, 10).is_err());
        assert!(QuadratureSettings::new(40, 1e-5, 10).is_err());
    }

    #[test]
    fn inner_known_values() {
        let s = QuadratureSettings::default();
        let i0 = quad_inner(0, &q(1, 1), &s).unwrap();
        assert!(rel(&i0.value, &sqrt_pi_e2(128)) < 1e-30);
        let i1 = quad_inner(1, &q(1, 1), &s).unwrap();
        assert!(rel(&i1.value, &(sqrt_pi_e2(128) * 3u32 / 2u32)) < 1e-30);
        let im1 = quad_inner(-1, &q(1, 1), &s).unwrap();
        assert!(rel(&im1.value, &i0.value) < 1e-30);
    }

    #[test]
    fn refinement_is_self_consistent() {
        let coarse = QuadratureSettings::new(128, 1e-25, 6).unwrap();
        let fine = QuadratureSettings::new(128, 1e-25, 12).unwrap();
        for n in [-5, 0, 3, 8] {
            let a = quad_inner(n, &q(1, 2), &coarse).unwrap();
            let b = quad_inner(n, &q(1, 2), &fine).unwrap();
            let diff = Float::with_val(128, &a.value - &b.value).abs();
            assert!(diff <= a.error_estimate, "n={n}: {diff} > {}", a.error_estimate);
        }
    }

    #[test]
    fn insufficient_levels_is_accuracy_error() {
        let s = QuadratureSettings::new(256, 1e-70, 2).unwrap();
        assert!(matches!(quad_inner(4, &q(1, 5), &s), Err(Error::Accuracy { .. })));
    }

    #[test]
    fn matrix_element_cases() {
        let s = QuadratureSettings::default();
        let x2 = OracleOperator {
            kinetic: q(0, 1),
            potential: "x^2".parse().unwrap(),
        };
        let v = quad_matrix_element(0, 0, &x2, &q(1, 1), &s).unwrap();
        assert!(rel(&v.value, &(sqrt_pi_e2(128) * 3u32 / 2u32)) < 1e-30);

        let one = OracleOperator {
            kinetic: q(0, 1),
            potential: "1".parse().unwrap(),
        };
        assert!(quad_matrix_element(0, 1, &one, &q(1, 1), &s).unwrap().value.is_zero());

        // reflection pairs x^-2 with x^0 (I_-1 = I_0) and x^-4 with x^2 (I_-2 = I_1)
        let xm2 = OracleOperator {
            kinetic: q(0, 1),
            potential: "x^-2".parse().unwrap(),
        };
        let w = quad_matrix_element(0, 0, &xm2, &q(1, 1), &s).unwrap();
        let i0 = quad_matrix_element(0, 0, &one, &q(1, 1), &s).unwrap();
        assert!(rel(&w.value, &i0.value) < 1e-30);
        let xm4 = OracleOperator {
            kinetic: q(0, 1),
            potential: "x^-4".parse().unwrap(),
        };
        let w = quad_matrix_element(0, 0, &xm4, &q(1, 1), &s).unwrap();
        assert!(rel(&w.value, &v.value) < 1e-30);
    }

    #[test]
    fn kinetic_element_matches_hand_value() {
        // ⟨b_0, -½ b_0''⟩ = (11/8) sqrt(π) e^-2 at a = 1
        let s = QuadratureSettings::default();
        let op = OracleOperator {
            kinetic: q(1, 2),
            potential: LaurentPoly::new(),
        };
        let v = quad_matrix_element(0, 0, &op, &q(1, 1), &s).unwrap();
        assert!(rel(&v.value, &(sqrt_pi_e2(128) * 11u32 / 8u32)) < 1e-30);
    }

    #[test]
    fn single_point_multipoint_matches_inner() {
        let s = QuadratureSettings::default();
        let i1 = MultiPointBasisIndex::new(vec![q(0, 1)], vec![1]).unwrap();
        let i2 = MultiPointBasisIndex::new(vec![q(0, 1)], vec![3]).unwrap();
        let v = quad_multipoint_gram(&i1, &i2, &[q(1, 1)], &s).unwrap();
        let w = quad_inner(2, &q(1, 1), &s).unwrap();
        assert!(rel(&v.value, &w.value) < 1e-28);
    }

    #[test]
    fn multipoint_symmetry_and_validation() {
        let s = QuadratureSettings::default();
        let pts = vec![q(0, 1), q(4, 1)];
        let i1 = MultiPointBasisIndex::new(pts.clone(), vec![1, 0]).unwrap();
        let i2 = MultiPointBasisIndex::new(pts.clone(), vec![-1, 2]).unwrap();
        let ab = quad_multipoint_gram(&i1, &i2, &[q(1, 1)], &s).unwrap();
        let ba = quad_multipoint_gram(&i2, &i1, &[q(1, 1)], &s).unwrap();
        assert_eq!(ab.value, ba.value);

        assert!(MultiPointBasisIndex::new(vec![q(1, 1), q(1, 1)], vec![0, 0]).is_err());
        assert!(MultiPointBasisIndex::new(vec![q(1, 1)], vec![0, 0]).is_err());
        let other = MultiPointBasisIndex::new(vec![q(0, 1), q(5, 1)], vec![0, 0]).unwrap();
        assert!(quad_multipoint_gram(&i1, &other, &[q(1, 1)], &s).is_err());
        assert!(quad_multipoint_gram(&i1, &i2, &[q(1, 1), q(1, 1), q(1, 1)], &s).is_err());
    }

    #[test]
    fn tensor_entries() {
        assert_eq!(tensor_gram_entry(&[0, 0], &[0, 0], &q(1, 1)).unwrap(), 1);
        assert_eq!(tensor_gram_entry(&[1, 0], &[1, 0], &q(1, 1)).unwrap(), q(3, 2));
        assert_eq!(tensor_gram_entry(&[1, 0], &[0, 0], &q(1, 1)).unwrap(), 0);
        assert!(tensor_gram_entry(&[1], &[1, 0], &q(1, 1)).is_err());
    }
}
