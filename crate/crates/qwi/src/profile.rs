//! Potential profiles: a cascade of constant-potential regions between two
//! semi-infinite leads.

use crate::error::SolverError;

/// One constant-potential region of the cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    /// Potential V_j of the region.
    pub potential: f64,
    /// Width l_j of the region, strictly positive.
    pub width: f64,
}

impl Region {
    pub fn new(potential: f64, width: f64) -> Result<Self, SolverError> {
        if !width.is_finite() || width <= 0.0 || !potential.is_finite() {
            return Err(SolverError::InvalidRegion { width });
        }
        Ok(Region { potential, width })
    }
}

/// A piecewise-constant potential: `left_lead <- region N .. region 1 -> right lead`.
///
/// Orientation contract: `regions[0]` is region 1, adjacent to the right
/// (load) lead where the impedance recursion starts; the index increases
/// toward the left lead, beyond which the input impedance Z(x_N) is
/// evaluated. Spatially the structure reads left-to-right as
/// `left lead, regions[N-1], ..., regions[0], right lead`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    /// Potential of the left lead (input side, the `z_out` region).
    pub left_lead_potential: f64,
    /// Regions in load-first order (index 0 touches the right lead).
    regions: Vec<Region>,
    /// Potential of the right lead (load side, the `z_0` region).
    pub right_lead_potential: f64,
}

impl PotentialProfile {
    /// Builds a profile from regions given in load-first order
    /// (`regions[0]` adjacent to the right lead).
    pub fn new(
        left_lead_potential: f64,
        regions: Vec<Region>,
        right_lead_potential: f64,
    ) -> Self {
        PotentialProfile { left_lead_potential, regions, right_lead_potential }
    }

    /// Builds a profile from regions listed in spatial order, left lead to
    /// right lead — the natural reading order of a structure sketch. The
    /// list is reversed into the internal load-first indexing.
    pub fn from_spatial(
        left_lead_potential: f64,
        mut regions_left_to_right: Vec<Region>,
        right_lead_potential: f64,
    ) -> Self {
        regions_left_to_right.reverse();
        PotentialProfile {
            left_lead_potential,
            regions: regions_left_to_right,
            right_lead_potential,
        }
    }

    /// Number of regions N; zero means a bare potential step between leads.
    pub fn num_regions(&self) -> usize {
        self.regions.len()
    }

    /// Regions in load-first order (region 1 first).
    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// The left-right mirror image: leads swapped, region order reversed.
    pub fn mirrored(&self) -> PotentialProfile {
        let mut regions = self.regions.clone();
        regions.reverse();
        PotentialProfile {
            left_lead_potential: self.right_lead_potential,
            regions,
            right_lead_potential: self.left_lead_potential,
        }
    }

    /// All distinct potential values of the profile (leads and regions),
    /// used by sweep drivers to dodge band edges.
    pub fn potential_values(&self) -> Vec<f64> {
        let mut vs = vec![self.left_lead_potential, self.right_lead_potential];
        vs.extend(self.regions.iter().map(|r| r.potential));
        vs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_and_negative_widths() {
        assert!(Region::new(1.0, 0.0).is_err());
        assert!(Region::new(1.0, -0.5).is_err());
        assert!(Region::new(1.0, f64::NAN).is_err());
        assert!(Region::new(1.0, 2.0).is_ok());
    }

    #[test]
    fn spatial_constructor_reverses_into_load_first_order() {
        let a = Region::new(1.0, 1.0).unwrap();
        let b = Region::new(2.0, 1.0).unwrap();
        let p = PotentialProfile::from_spatial(0.0, vec![a, b], 0.0);
        // `a` was listed first (leftmost), so it is region N, i.e. last.
        assert_eq!(p.regions()[0], b);
        assert_eq!(p.regions()[1], a);
    }

    #[test]
    fn mirror_swaps_leads_and_reverses() {
        let a = Region::new(1.0, 1.0).unwrap();
        let b = Region::new(2.0, 3.0).unwrap();
        let p = PotentialProfile::new(-1.0, vec![a, b], 4.0);
        let m = p.mirrored();
        assert_eq!(m.left_lead_potential, 4.0);
        assert_eq!(m.right_lead_potential, -1.0);
        assert_eq!(m.regions()[0], b);
        assert_eq!(m.mirrored(), p);
    }
}
