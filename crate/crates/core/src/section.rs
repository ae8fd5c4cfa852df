//! Rectangular beam cross-sections.
//!
//! Every elastic element in the model — the boundary ribbon, the discrete
//! ribbons, the mesh ribbons — is a thin rectangular strip cut or printed
//! from the sheet, bending about its weak axis. A section is therefore
//! fully described by its width `w` (in-plane) and thickness `t`
//! (out-of-plane), with
//!
//! ```text
//! I = w t^3 / 12      (second moment of area, m^4)
//! A = w t             (area, m^2)
//! ```
//!
//! The derived properties are computed once at construction so they cannot
//! drift out of sync with the dimensions.

use crate::error::{Error, Result};

/// A rectangular cross-section with its derived section properties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSection {
    width: f64,
    thickness: f64,
    second_moment: f64,
    area: f64,
}

impl CrossSection {
    /// Build a rectangular section from `width` and `thickness`, both in
    /// metres and both required positive and finite.
    pub fn rectangular(width: f64, thickness: f64) -> Result<Self> {
        for (label, v) in [("width", width), ("thickness", thickness)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "cross-section {label} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(CrossSection {
            width,
            thickness,
            second_moment: width * thickness.powi(3) / 12.0,
            area: width * thickness,
        })
    }

    /// In-plane width, m.
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Out-of-plane thickness, m.
    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    /// Second moment of area about the weak (in-sheet) axis, m^4.
    pub fn second_moment(&self) -> f64 {
        self.second_moment
    }

    /// Cross-sectional area, m^2.
    pub fn area(&self) -> f64 {
        self.area
    }
}
