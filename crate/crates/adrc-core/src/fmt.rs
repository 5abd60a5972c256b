//! Fixed-width numeric formatting shared by the CSV and JSON emitters.

/// Format with 17 significant digits, `%.17g` style: fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros stripped.
/// 17 digits guarantee exact f64 round-trips.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x < 0.0 { "-inf".into() } else { "inf".into() };
    }

    let sci = format!("{:.16e}", x);
    let (mantissa, exp_str) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp_str.parse().expect("exponent");

    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if neg { "-" } else { "" };

    // C %g rule with precision 17: fixed for -4 <= exp < 17, else scientific.
    if (-4..17).contains(&exp) {
        if exp >= digits.len() as i32 - 1 {
            let zeros = exp - (digits.len() as i32 - 1);
            format!("{sign}{digits}{}", "0".repeat(zeros as usize))
        } else if exp >= 0 {
            let split = (exp + 1) as usize;
            format!("{sign}{}.{}", &digits[..split], &digits[split..])
        } else {
            format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
        }
    } else if digits.len() == 1 {
        format!("{sign}{digits}e{exp:+03}")
    } else {
        format!("{sign}{}.{}e{exp:+03}", &digits[..1], &digits[1..])
    }
}
