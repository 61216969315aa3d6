//! Number formatting for CLI and data-file output.

/// `x` with `sig` significant digits, trailing zeros trimmed.
///
/// Plain notation is used for moderate exponents, scientific otherwise.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -5 || exp >= sig as i32 {
        return format!("{}e{}", trim(mantissa), exp);
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    trim(&format!("{:.*}", decimals, x)).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_csv(x: f64) -> String {
    fmt_sig(x, 17)
}

/// `a,b` CSV with LF line endings.
pub fn points_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("a,b\n");
    for &(a, b) in points {
        out.push_str(&fmt_csv(a));
        out.push(',');
        out.push_str(&fmt_csv(b));
        out.push('\n');
    }
    out
}
