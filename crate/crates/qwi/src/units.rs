//! Unit conventions shared by all engines.

/// hbar^2 / (2 m_e) in eV nm^2.
pub const HBAR_SQ_OVER_2ME_EV_NM2: f64 = 0.0380998211383624;

/// hbar / m_e in (m/s) nm, i.e. the conversion from a wavenumber in 1/nm to
/// the velocity hbar k / m_e in m/s.
pub const HBAR_OVER_ME_MS_NM: f64 = 115_767.636_050_542_96;

/// Unit system fixing the numeric values of hbar and the particle mass.
///
/// `Natural` sets hbar = 1 and 2m = 1, so gamma = sqrt(V - E) and the
/// characteristic impedance of a propagating region is 2 sqrt(E - V).
/// `NanoElectronVolt` works in nm and eV with mass
/// `effective_mass_ratio * m_e`; impedances come out in m/s.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum UnitSystem {
    #[default]
    Natural,
    NanoElectronVolt { effective_mass_ratio: f64 },
}

impl UnitSystem {
    /// 2m / hbar^2 in the system's (energy, length) units, the factor in
    /// gamma^2 = (2m/hbar^2)(V - E).
    pub fn two_m_over_hbar_sq(&self) -> f64 {
        match self {
            UnitSystem::Natural => 1.0,
            UnitSystem::NanoElectronVolt { effective_mass_ratio } => {
                effective_mass_ratio / HBAR_SQ_OVER_2ME_EV_NM2
            }
        }
    }

    /// hbar / m, the factor turning gamma into an impedance z = -i (hbar/m) gamma.
    pub fn hbar_over_m(&self) -> f64 {
        match self {
            UnitSystem::Natural => 2.0,
            UnitSystem::NanoElectronVolt { effective_mass_ratio } => {
                HBAR_OVER_ME_MS_NM / effective_mass_ratio
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_constants() {
        let u = UnitSystem::Natural;
        assert_eq!(u.two_m_over_hbar_sq(), 1.0);
        assert_eq!(u.hbar_over_m(), 2.0);
    }

    #[test]
    fn nano_ev_scales_with_effective_mass() {
        let light = UnitSystem::NanoElectronVolt { effective_mass_ratio: 0.067 };
        let bare = UnitSystem::NanoElectronVolt { effective_mass_ratio: 1.0 };
        assert!((bare.two_m_over_hbar_sq() - 1.0 / HBAR_SQ_OVER_2ME_EV_NM2).abs() < 1e-12);
        // lighter mass -> smaller gamma^2 factor, larger velocity factor
        assert!(light.two_m_over_hbar_sq() < bare.two_m_over_hbar_sq());
        assert!(light.hbar_over_m() > bare.hbar_over_m());
    }
}
