//! Sheet descriptions: geometry, cut pattern, material, and the presets
//! for the four reference sheets.
//!
//! A kirigami sheet here is a circular sheet of radius `r` cut into three
//! families of elements, each of which resists actuation in its own way:
//!
//! * the *boundary ribbon* — the uncut rim, which deforms from a circle
//!   into an ellipse as the sheet is pulled;
//! * `n_d` *discrete ribbons* — parallel strips spanning the sheet, which
//!   arch out of plane;
//! * *mesh ribbons* — short links tying neighbouring discrete ribbons
//!   together, `n_m,i` of them in gap `i` (gap 1 touches the boundary
//!   attachment).
//!
//! Table-style presets A–D give the measured reference sheets. The source
//! data lists only radius, thickness, ribbon width and material; the cut
//! counts (`n_discrete`, `mesh_counts`), mesh ribbon length and attachment
//! half-width are engineering defaults chosen here, clearly overridable,
//! and reported as defaults by the CLI's `--explain`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::material::Material;
use crate::section::CrossSection;
use crate::units::mm;

/// Default number of discrete ribbons when a sheet doesn't specify one.
pub const DEFAULT_N_DISCRETE: usize = 9;

/// Default attachment half-width (`b_min`), m. The rigid clamps that grip
/// the sheet at the two pull points are modelled as 10 mm wide.
pub const DEFAULT_ATTACHMENT_HALF_WIDTH: f64 = 5.0e-3;

/// Default mesh layout: one central mesh ribbon in the gap adjacent to the
/// attachment, two in every other gap.
pub fn default_mesh_counts(n_discrete: usize) -> Vec<u32> {
    let mut counts = vec![2u32; n_discrete];
    if let Some(first) = counts.first_mut() {
        *first = 1;
    }
    counts
}

/// Default mesh ribbon length: the central (longest) discrete ribbon spans
/// the full diameter, and the densest gap divides it into
/// `max(mesh_counts) + 1` spans.
pub fn default_mesh_section_length(radius: f64, mesh_counts: &[u32]) -> f64 {
    let max = mesh_counts.iter().copied().max().unwrap_or(1);
    2.0 * radius / (max as f64 + 1.0)
}

/// Complete description of one kirigami sheet. Immutable once built; use
/// [`SheetBuilder`] (or [`SheetSpec::preset`]) to construct one.
#[derive(Debug, Clone, PartialEq)]
pub struct SheetSpec {
    radius: f64,
    boundary_section: CrossSection,
    ribbon_section: CrossSection,
    n_discrete: usize,
    mesh_counts: Vec<u32>,
    mesh_section_length: f64,
    attachment_half_width: f64,
    material: Material,
}

impl SheetSpec {
    /// Sheet radius `r`, m.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Cross-section of the boundary ribbon.
    pub fn boundary_section(&self) -> CrossSection {
        self.boundary_section
    }

    /// Cross-section of the discrete and mesh ribbons.
    pub fn ribbon_section(&self) -> CrossSection {
        self.ribbon_section
    }

    /// Number of discrete ribbons `n_d` (always odd, so a central ribbon
    /// exists).
    pub fn n_discrete(&self) -> usize {
        self.n_discrete
    }

    /// Mesh ribbon count per gap, `n_m,i`; entry 0 is the gap adjacent to
    /// the boundary attachment.
    pub fn mesh_counts(&self) -> &[u32] {
        &self.mesh_counts
    }

    /// Mesh ribbon length `l_m`, m.
    pub fn mesh_section_length(&self) -> f64 {
        self.mesh_section_length
    }

    /// Attachment half-width `b_min`, m — the ellipse's semi-minor axis can
    /// never shrink below this because the rigid clamp holds it open.
    pub fn attachment_half_width(&self) -> f64 {
        self.attachment_half_width
    }

    pub fn material(&self) -> &Material {
        &self.material
    }

    /// Flexural rigidity `E·I` of the boundary ribbon, N·m².
    pub fn boundary_flexural_rigidity(&self) -> f64 {
        self.material.youngs_modulus() * self.boundary_section.second_moment()
    }

    /// Axial stiffness `E·A` of the boundary ribbon, N.
    pub fn boundary_axial_stiffness(&self) -> f64 {
        self.material.youngs_modulus() * self.boundary_section.area()
    }

    /// Flexural rigidity `E·I` of a discrete/mesh ribbon, N·m².
    pub fn ribbon_flexural_rigidity(&self) -> f64 {
        self.material.youngs_modulus() * self.ribbon_section.second_moment()
    }

    /// One of the four measured reference sheets.
    pub fn preset(id: Preset) -> SheetSpec {
        Self::preset_builder(id)
            .build()
            .expect("presets satisfy all sheet invariants")
    }

    /// The builder a preset starts from, for callers that want to tweak a
    /// reference sheet (sweeps, CLI overrides) before building.
    pub fn preset_builder(id: Preset) -> SheetBuilder {
        // radius, thickness, ribbon width (mm); material
        let (r, t, w, material) = match id {
            Preset::A => (22.24, 1.0, 1.0, Material::tpu()),
            Preset::B => (22.24, 1.5, 1.0, Material::tpu()),
            Preset::C => (16.68, 1.0, 0.75, Material::tpu()),
            Preset::D => (22.14, 0.25, 0.8, Material::pet()),
        };
        SheetBuilder::new(mm(r), mm(t), mm(w), material)
    }
}

/// Identifier of a reference sheet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// TPU, r = 22.24 mm, 1 mm thick, 1 mm ribbons.
    A,
    /// Same as A but 1.5 mm thick.
    B,
    /// TPU, r = 16.68 mm, 1 mm thick, 0.75 mm ribbons.
    C,
    /// PET film, r = 22.14 mm, 0.25 mm thick, 0.8 mm ribbons.
    D,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::A, Preset::B, Preset::C, Preset::D];

    pub fn id(self) -> &'static str {
        match self {
            Preset::A => "A",
            Preset::B => "B",
            Preset::C => "C",
            Preset::D => "D",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Preset::A),
            "B" | "b" => Ok(Preset::B),
            "C" | "c" => Ok(Preset::C),
            "D" | "d" => Ok(Preset::D),
            _ => Err(Error::NotFound {
                kind: "sheet preset",
                name: s.to_owned(),
                available: Preset::ALL.iter().map(|p| p.id().to_owned()).collect(),
            }),
        }
    }
}

/// Builder for [`SheetSpec`].
///
/// Radius, thickness, ribbon width and material are required up front;
/// everything else falls back to the documented defaults. The builder
/// remembers which fields were set explicitly so the CLI can report the
/// rest as assumptions (`--explain`).
#[derive(Debug, Clone)]
pub struct SheetBuilder {
    radius: f64,
    thickness: f64,
    ribbon_width: f64,
    material: Material,
    boundary_width: Option<f64>,
    n_discrete: Option<usize>,
    mesh_counts: Option<Vec<u32>>,
    mesh_section_length: Option<f64>,
    attachment_half_width: Option<f64>,
}

impl SheetBuilder {
    /// Start a sheet description. All lengths in metres.
    pub fn new(radius: f64, thickness: f64, ribbon_width: f64, material: Material) -> Self {
        SheetBuilder {
            radius,
            thickness,
            ribbon_width,
            material,
            boundary_width: None,
            n_discrete: None,
            mesh_counts: None,
            mesh_section_length: None,
            attachment_half_width: None,
        }
    }

    pub fn radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn thickness(mut self, thickness: f64) -> Self {
        self.thickness = thickness;
        self
    }

    pub fn ribbon_width(mut self, width: f64) -> Self {
        self.ribbon_width = width;
        self
    }

    pub fn material(mut self, material: Material) -> Self {
        self.material = material;
        self
    }

    /// Boundary ribbon width, if different from the ribbon width.
    pub fn boundary_width(mut self, width: f64) -> Self {
        self.boundary_width = Some(width);
        self
    }

    pub fn n_discrete(mut self, n: usize) -> Self {
        self.n_discrete = Some(n);
        self
    }

    pub fn mesh_counts(mut self, counts: Vec<u32>) -> Self {
        self.mesh_counts = Some(counts);
        self
    }

    pub fn mesh_section_length(mut self, length: f64) -> Self {
        self.mesh_section_length = Some(length);
        self
    }

    pub fn attachment_half_width(mut self, half_width: f64) -> Self {
        self.attachment_half_width = Some(half_width);
        self
    }

    /// Names of the fields that will be filled with defaults by `build`.
    pub fn defaulted_fields(&self) -> Vec<&'static str> {
        let mut fields = Vec::new();
        if self.boundary_width.is_none() {
            fields.push("boundary_width");
        }
        if self.n_discrete.is_none() {
            fields.push("n_discrete");
        }
        if self.mesh_counts.is_none() {
            fields.push("mesh_counts");
        }
        if self.mesh_section_length.is_none() {
            fields.push("mesh_section_length");
        }
        if self.attachment_half_width.is_none() {
            fields.push("attachment_half_width");
        }
        fields
    }

    /// Validate everything and produce the immutable spec.
    pub fn build(&self) -> Result<SheetSpec> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sheet radius must be positive and finite, got {}",
                self.radius
            )));
        }
        let boundary_section = CrossSection::rectangular(
            self.boundary_width.unwrap_or(self.ribbon_width),
            self.thickness,
        )?;
        let ribbon_section = CrossSection::rectangular(self.ribbon_width, self.thickness)?;

        let n_discrete = self.n_discrete.unwrap_or(DEFAULT_N_DISCRETE);
        if n_discrete == 0 || n_discrete.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "n_discrete must be odd and at least 1 so a central ribbon exists, got {n_discrete}"
            )));
        }

        let mesh_counts = match &self.mesh_counts {
            Some(counts) => counts.clone(),
            None => default_mesh_counts(n_discrete),
        };
        if mesh_counts.len() != n_discrete {
            return Err(Error::InvalidArgument(format!(
                "mesh_counts must have one entry per discrete ribbon ({} expected, got {})",
                n_discrete,
                mesh_counts.len()
            )));
        }
        if mesh_counts.contains(&0) {
            return Err(Error::InvalidArgument(
                "mesh_counts entries must all be at least 1".into(),
            ));
        }

        let mesh_section_length = self
            .mesh_section_length
            .unwrap_or_else(|| default_mesh_section_length(self.radius, &mesh_counts));
        if !(mesh_section_length.is_finite() && mesh_section_length > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "mesh_section_length must be positive and finite, got {mesh_section_length}"
            )));
        }

        let attachment_half_width = self
            .attachment_half_width
            .unwrap_or(DEFAULT_ATTACHMENT_HALF_WIDTH);
        if !(attachment_half_width.is_finite() && attachment_half_width > 0.0)
            || attachment_half_width >= self.radius
        {
            return Err(Error::InvalidArgument(format!(
                "attachment half-width must lie in (0, radius); got {} for radius {}",
                attachment_half_width, self.radius
            )));
        }

        Ok(SheetSpec {
            radius: self.radius,
            boundary_section,
            ribbon_section,
            n_discrete,
            mesh_counts,
            mesh_section_length,
            attachment_half_width,
            material: self.material.clone(),
        })
    }
}
