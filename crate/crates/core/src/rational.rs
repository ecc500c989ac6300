//! Exact rational scalars and their conversions.

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Arbitrary-size signed rational in canonical form (positive denominator,
/// coprime parts). GMP keeps it canonical after every operation.
pub type ExactRational = Rational;

/// Parses `"p/q"`, a plain integer, or a decimal such as `"-0.125"` or
/// `"2.5e-3"` into an exact rational.
pub fn parse_rational(input: &str) -> Result<ExactRational> {
    let s = input.trim();
    let err = |position: usize, message: &str| Error::Parse {
        input: input.to_string(),
        position,
        message: message.to_string(),
    };
    if s.is_empty() {
        return Err(err(0, "expected a number"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: Integer = p
            .trim()
            .parse()
            .map_err(|_| err(0, "invalid numerator"))?;
        let den: Integer = q
            .trim()
            .parse()
            .map_err(|_| err(p.len() + 1, "invalid denominator"))?;
        if den == 0 {
            return Err(err(p.len() + 1, "zero denominator"));
        }
        return Ok(Rational::from((num, den)));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|_| err(i + 1, "invalid exponent"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err(0, "expected digits"));
    }
    if let Some(bad) = int_part
        .chars()
        .chain(frac_part.chars())
        .position(|c| !c.is_ascii_digit())
    {
        return Err(err(bad, "unexpected character in number"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(all_digits.parse::<Integer>().unwrap_or_default());
    let scale = exponent - frac_part.len() as i64;
    let ten_pow = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs() as u32));
    if scale >= 0 {
        value *= ten_pow;
    } else {
        value /= ten_pow;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Renders a rational as `"p/q"`, always with an explicit denominator.
pub fn format_rational(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_float(r: &ExactRational, precision_bits: u32) -> Float {
    Float::with_val(precision_bits, r)
}

/// Number of significant decimal digits carried by `precision_bits` bits.
pub fn decimal_digits(precision_bits: u32) -> usize {
    (f64::from(precision_bits) * std::f64::consts::LOG10_2).floor() as usize
}

/// Deterministic scientific rendering of a float with precision-matched digits.
pub fn format_float(x: &Float) -> String {
    let digits = decimal_digits(x.prec()).max(1);
    x.to_string_radix(10, Some(digits))
}
