//! Number formatting shared by the CSV and CLI output.

/// Six significant digits in the style of C's `%g`: fixed notation for
/// decimal exponents in -4..6, scientific otherwise, trailing zeros removed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig6;

    #[test]
    fn matches_percent_g() {
        assert_eq!(sig6(4.495012345), "4.49501");
        assert_eq!(sig6(0.0160004), "0.0160004");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(0.00001234567), "1.23457e-5");
        assert_eq!(sig6(2.0), "2");
        assert_eq!(sig6(-0.5), "-0.5");
        assert_eq!(sig6(0.0), "0");
        // rounding that carries into a new digit
        assert_eq!(sig6(9.9999999), "10");
    }
}
