//! The profile text format: flat key/value lines plus one `region` line per
//! region, hand-editable and diffable.
//!
//! ```text
//! # GaAs double barrier
//! units nano_ev
//! effective_mass 0.067
//! left_lead 0.0
//! right_lead 0.0
//! region 0.3 3.0
//! region 0.0 5.0
//! region 0.3 3.0
//! ```
//!
//! Regions are listed in spatial order, from the left (input) lead to the
//! right (load) lead. `units` is `natural` or `nano_ev`; `effective_mass`
//! (m*/m_e) is accepted only with `nano_ev` and defaults to 1.

use std::fs;
use std::path::Path;

use qwi::{PotentialProfile, Region, UnitSystem};

#[derive(Debug, Clone)]
pub struct ParsedProfile {
    pub profile: PotentialProfile,
    pub units: UnitSystem,
    /// Echoed into output headers, e.g. `natural` or `nano_ev effective_mass=0.067`.
    pub units_label: String,
}

pub fn load(path: &Path) -> Result<ParsedProfile, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read profile {}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse(text: &str) -> Result<ParsedProfile, String> {
    let mut units_mode: Option<(usize, String)> = None;
    let mut effective_mass: Option<(usize, f64)> = None;
    let mut left_lead: Option<(usize, f64)> = None;
    let mut right_lead: Option<(usize, f64)> = None;
    let mut regions: Vec<Region> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let key = fields.next().unwrap();
        let rest: Vec<&str> = fields.collect();
        match key {
            "units" => {
                if units_mode.is_some() {
                    return Err(format!("line {line_no}: duplicate `units`"));
                }
                let v = one_value(line_no, "units", &rest)?;
                if v != "natural" && v != "nano_ev" {
                    return Err(format!(
                        "line {line_no}: units must be `natural` or `nano_ev`, got `{v}`"
                    ));
                }
                units_mode = Some((line_no, v.to_string()));
            }
            "effective_mass" => {
                if effective_mass.is_some() {
                    return Err(format!("line {line_no}: duplicate `effective_mass`"));
                }
                let v = parse_f64(line_no, "effective_mass", one_value(line_no, "effective_mass", &rest)?)?;
                if !v.is_finite() || v <= 0.0 {
                    return Err(format!("line {line_no}: effective_mass must be positive, got {v}"));
                }
                effective_mass = Some((line_no, v));
            }
            "left_lead" | "right_lead" => {
                let slot = if key == "left_lead" { &mut left_lead } else { &mut right_lead };
                if slot.is_some() {
                    return Err(format!("line {line_no}: duplicate `{key}`"));
                }
                let v = parse_f64(line_no, key, one_value(line_no, key, &rest)?)?;
                *slot = Some((line_no, v));
            }
            "region" => {
                if rest.len() != 2 {
                    return Err(format!(
                        "line {line_no}: region needs `region <potential> <width>`"
                    ));
                }
                let v = parse_f64(line_no, "region potential", rest[0])?;
                let w = parse_f64(line_no, "region width", rest[1])?;
                let region = Region::new(v, w).map_err(|_| {
                    format!("line {line_no}: region width must be positive, got {w}")
                })?;
                regions.push(region);
            }
            other => {
                return Err(format!("line {line_no}: unknown directive `{other}`"));
            }
        }
    }

    let (units_line, mode) = units_mode.ok_or("missing `units` line")?;
    let (units, units_label) = match mode.as_str() {
        "natural" => {
            if let Some((l, _)) = effective_mass {
                return Err(format!(
                    "line {l}: effective_mass is only meaningful with `units nano_ev` (units set on line {units_line})"
                ));
            }
            (UnitSystem::Natural, "natural".to_string())
        }
        _ => {
            let m = effective_mass.map(|(_, v)| v).unwrap_or(1.0);
            (
                UnitSystem::NanoElectronVolt { effective_mass_ratio: m },
                format!("nano_ev effective_mass={m}"),
            )
        }
    };
    let left = left_lead.ok_or("missing `left_lead` line")?.1;
    let right = right_lead.ok_or("missing `right_lead` line")?.1;
    if !left.is_finite() || !right.is_finite() {
        return Err("lead potentials must be finite".to_string());
    }
    Ok(ParsedProfile {
        profile: PotentialProfile::from_spatial(left, regions, right),
        units,
        units_label,
    })
}

fn one_value<'a>(line_no: usize, key: &str, rest: &[&'a str]) -> Result<&'a str, String> {
    if rest.len() != 1 {
        return Err(format!("line {line_no}: `{key}` takes exactly one value"));
    }
    Ok(rest[0])
}

fn parse_f64(line_no: usize, what: &str, s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .map_err(|_| format!("line {line_no}: cannot parse {what} `{s}` as a number"))
}
