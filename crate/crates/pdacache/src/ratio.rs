//! Exact rational arithmetic and display helpers.
//!
//! Memory ratios and transmission rates are always carried as exact
//! rationals so that closed-form comparisons need no tolerances.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

/// Exact rational used for memory ratios and rates.
pub type Rational = Ratio<i128>;

/// Shorthand constructor.
pub fn ratio(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

/// Exact display: `15/4`, or just `2` for integers.
pub fn exact_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde helper: serialize a rational as its exact string form.
pub fn serde_exact<S>(r: &Rational, serializer: S) -> std::result::Result<S::Ok, S::Error>
where
    S: serde::Serializer,
{
    serializer.serialize_str(&exact_string(r))
}

/// Decimal display with four significant digits, e.g. `0.7143`, `45.18`.
pub fn decimal_string(r: &Rational) -> String {
    let value = r.to_f64().unwrap_or(f64::NAN);
    if !value.is_finite() {
        return value.to_string();
    }
    if r.is_zero() {
        return "0.000".to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).clamp(0, 12) as usize;
    format!("{value:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_strings() {
        assert_eq!(exact_string(&ratio(15, 4)), "15/4");
        assert_eq!(exact_string(&ratio(4, 2)), "2");
        assert_eq!(exact_string(&ratio(0, 5)), "0");
    }

    #[test]
    fn four_significant_digits() {
        assert_eq!(decimal_string(&ratio(5, 7)), "0.7143");
        assert_eq!(decimal_string(&ratio(2, 1)), "2.000");
        assert_eq!(decimal_string(&ratio(2304, 51)), "45.18");
        assert_eq!(decimal_string(&ratio(8281, 74)), "111.9");
        assert_eq!(decimal_string(&ratio(0, 1)), "0.000");
    }
}
