//! Fixed-precision number rendering for CSV and reports.

/// Significant digits of every emitted number.
pub const SIG_DIGITS: usize = 12;

/// `%.12g`-style rendering: fixed notation for decimal exponents in
/// `[-4, 12)`, scientific otherwise, trailing zeros removed.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // rounding first fixes the exponent (9.9999999999999 → 1e1)
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_like_printf_g() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(0.3), "0.3");
        assert_eq!(fmt_g(0.1 * 3.0), "0.3");
        assert_eq!(fmt_g(5.682693225725498), "5.68269322573");
        assert_eq!(fmt_g(-12.5), "-12.5");
        assert_eq!(fmt_g(1e-6), "1e-6");
        assert_eq!(fmt_g(1.5e-5), "1.5e-5");
        assert_eq!(fmt_g(1.5e-4), "0.00015");
        assert_eq!(fmt_g(123456789012.0), "123456789012");
        assert_eq!(fmt_g(1234567890123.0), "1.23456789012e12");
        assert_eq!(fmt_g(9.9999999999999), "10");
        assert_eq!(fmt_g(f64::INFINITY), "inf");
        assert_eq!(fmt_g(f64::NAN), "nan");
    }
}
