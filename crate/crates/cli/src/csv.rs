//! Long-format CSV traces.

use std::fmt::Write;

use objectivity::MIProfile;

pub const HEADER: &str = "t,k,f,mi_bits,mi_rescaled,entropy_s_bits,coherence_s,coherence_a1";

/// Twelve significant digits, C `%.12g` style.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One row per fragment size with a defined rescaled information.
pub fn write_profile(out: &mut String, profile: &MIProfile) {
    let n = profile.records.len();
    for r in &profile.records {
        let Some(rescaled) = r.rescaled else { continue };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_g12(profile.step_or_time),
            r.k,
            format_g12(r.k as f64 / n as f64),
            format_g12(r.mi_bits),
            format_g12(rescaled),
            format_g12(r.entropy_s_bits),
            format_g12(profile.coherence_s),
            format_g12(profile.coherence_a1),
        )
        .expect("writing to a String");
    }
}
