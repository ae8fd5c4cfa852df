//! Mesh ribbons: deflection propagation through the gaps and the
//! resulting tensile component.
//!
//! The mesh ribbons tie neighbouring discrete ribbons together, so the
//! actuation displacement has to be carried gap by gap from the boundary
//! attachment to the sheet center. Treating each mesh ribbon as an
//! inextensible, simply supported beam with a center load, gap `i`
//! (holding `n_m,i` parallel ribbons) deflects by `δ_m,i = δ_m,1 / n_m,i`,
//! and the per-gap deflections must add up to the full displacement:
//!
//! ```text
//! Σᵢ δ_m,i = δx    ⇒    δ_m,1 = δx / Σᵢ (1/n_m,i)
//! ```
//!
//! The force follows from beam theory on the first gap's single ribbon:
//!
//! ```text
//! F_mesh = Q₁ = 48 E I δ_m,1 / l_m³
//! ```
//!
//! By convention the first gap has exactly one central mesh ribbon
//! (`n_m,1 = 1`, as the boundary connects to the first discrete ribbon
//! through a single link); the presets follow this, though it is not
//! enforced on custom sheets.

use crate::error::{Error, Result};
use crate::sheet::SheetSpec;

/// How the actuation displacement distributes over the mesh gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshLoadPath {
    /// Deflection of the first gap `δ_m,1`, m.
    pub first_deflection: f64,
    /// Per-gap deflections `δ_m,i = δ_m,1 / n_m,i`, m.
    pub per_ribbon_deflection: Vec<f64>,
    /// Center load on the first gap's ribbon `Q₁ = F_mesh`, N.
    pub first_load: f64,
}

fn check_displacement(delta_x: f64) -> Result<()> {
    if !(delta_x.is_finite() && delta_x >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "displacement must be non-negative and finite, got {delta_x}"
        )));
    }
    Ok(())
}

/// First-gap deflection `δ_m,1 = δx / Σ(1/n_m,i)`.
pub fn first_section_deflection(delta_x: f64, mesh_counts: &[u32]) -> Result<f64> {
    check_displacement(delta_x)?;
    if mesh_counts.is_empty() {
        return Err(Error::InvalidArgument(
            "mesh_counts must not be empty".into(),
        ));
    }
    if mesh_counts.contains(&0) {
        return Err(Error::InvalidArgument(
            "mesh_counts entries must all be at least 1".into(),
        ));
    }
    let inverse_sum: f64 = mesh_counts.iter().map(|&c| 1.0 / c as f64).sum();
    Ok(delta_x / inverse_sum)
}

/// Full deflection distribution and first-gap load at a displacement.
pub fn mesh_load_path(sheet: &SheetSpec, delta_x: f64) -> Result<MeshLoadPath> {
    let first_deflection = first_section_deflection(delta_x, sheet.mesh_counts())?;
    let per_ribbon_deflection = sheet
        .mesh_counts()
        .iter()
        .map(|&c| first_deflection / c as f64)
        .collect();
    let l_m = sheet.mesh_section_length();
    let first_load = 48.0 * sheet.ribbon_flexural_rigidity() * first_deflection / l_m.powi(3);
    Ok(MeshLoadPath {
        first_deflection,
        per_ribbon_deflection,
        first_load,
    })
}

/// Mesh contribution to the tensile force, N.
pub fn mesh_force(sheet: &SheetSpec, delta_x: f64) -> Result<f64> {
    Ok(mesh_load_path(sheet, delta_x)?.first_load)
}
