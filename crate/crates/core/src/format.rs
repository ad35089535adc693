//! Locale-independent number formatting for CSV and JSON artifacts.

/// Formats `x` with 9 significant digits, `%g` style: fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros removed.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig9;

    #[test]
    fn formats() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(1.5), "1.5");
        assert_eq!(sig9(-2.0), "-2");
        assert_eq!(sig9(7.923_456_789_123), "7.92345679");
        assert_eq!(sig9(123_456_789_012.0), "1.23456789e11");
        assert_eq!(sig9(0.000_012_345), "1.2345e-5");
        assert_eq!(sig9(0.000_123_45), "0.00012345");
        assert_eq!(sig9(9.999_999_999_9), "10");
        assert_eq!(sig9(100_000_000.0), "100000000");
    }
}
