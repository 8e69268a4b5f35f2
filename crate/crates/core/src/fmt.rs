//! Significant-digit float formatting for the CSV / table outputs.

/// Format with 12 significant digits, `%g`-style: fixed notation for moderate
/// exponents, scientific otherwise, trailing zeros trimmed.
pub(crate) fn sig12(x: f64) -> String {
    sig(x, 12)
}

pub(crate) fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if exp >= -4 && exp < digits as i32 {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", digits - 1, x);
        // "{:e}" renders e.g. 1.25e2; trim zeros in the mantissa only.
        match s.split_once('e') {
            Some((mant, e)) => {
                let mant = if mant.contains('.') {
                    mant.trim_end_matches('0').trim_end_matches('.')
                } else {
                    mant
                };
                format!("{mant}e{e}")
            }
            None => s,
        }
    }
}
