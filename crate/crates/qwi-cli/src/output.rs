//! Output writers with byte-stable formatting: 17 significant digits,
//! `.` decimal separator, `\n` line endings.

use qwi::{BoundStateSet, Spectrum};

/// 17 significant digits, locale-free.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn transmission_csv(units_label: &str, spectrum: &Spectrum) -> String {
    let mut out = String::new();
    out.push_str(&format!("# units={units_label}\n"));
    out.push_str("energy,transmission\n");
    for (e, t) in spectrum.energies.iter().zip(&spectrum.transmission) {
        out.push_str(&fmt_f64(*e));
        out.push(',');
        out.push_str(&fmt_f64(*t));
        out.push('\n');
    }
    out
}

pub fn impedance_csv(units_label: &str, rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# units={units_label}\n"));
    out.push_str("energy,impedance_re,impedance_im\n");
    for (e, re, im) in rows {
        out.push_str(&fmt_f64(*e));
        out.push(',');
        out.push_str(&fmt_f64(*re));
        out.push(',');
        out.push_str(&fmt_f64(*im));
        out.push('\n');
    }
    out
}

pub fn resonances_json(units_label: &str, spectrum: &Spectrum) -> String {
    let resonances: Vec<serde_json::Value> = spectrum
        .resonances
        .iter()
        .map(|r| {
            serde_json::json!({
                "energy": r.energy,
                "transmission": r.transmission,
                "fwhm": r.fwhm,
            })
        })
        .collect();
    let doc = serde_json::json!({
        "units": units_label,
        "resonances": resonances,
    });
    format!("{}\n", serde_json::to_string_pretty(&doc).expect("static json"))
}

pub fn bound_states_json(units_label: &str, set: &BoundStateSet) -> String {
    let doc = serde_json::json!({
        "units": units_label,
        "energies": set.energies,
        "residuals": set.residuals,
        "warnings": set.warnings,
    });
    format!("{}\n", serde_json::to_string_pretty(&doc).expect("static json"))
}

/// Sidecar path for resonance JSON: the output's extension replaced by
/// `resonances.json`.
pub fn sidecar_path(output: &std::path::Path) -> std::path::PathBuf {
    output.with_extension("resonances.json")
}
