//! TOML config files defining custom materials and sheets.
//!
//! The on-disk schema uses workshop units — lengths in millimetres,
//! moduli in megapascals — and is converted to SI at load time:
//!
//! ```toml
//! [materials.nylon]
//! youngs_modulus_mpa = 2620.0
//!
//! [sheets.wide]
//! material = "nylon"        # or a built-in: "TPU", "PET"
//! radius_mm = 30.0
//! thickness_mm = 1.0
//! ribbon_width_mm = 1.0
//! # Optional; defaults as documented in the sheet module:
//! boundary_width_mm = 1.5
//! n_discrete = 7
//! mesh_counts = [1, 2, 2, 2, 2, 2, 2]
//! mesh_section_length_mm = 12.0
//! attachment_half_width_mm = 5.0
//! ```
//!
//! Loading validates everything eagerly — a broken sheet definition fails
//! at startup with its name in the message, not mid-sweep. The full schema
//! is documented in `docs/config.md`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result, ResultExt};
use crate::material::{Material, MaterialRegistry};
use crate::sheet::{Preset, SheetBuilder};
use crate::units::mm;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    materials: BTreeMap<String, RawMaterial>,
    #[serde(default)]
    sheets: BTreeMap<String, RawSheet>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    youngs_modulus_mpa: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSheet {
    material: String,
    radius_mm: f64,
    thickness_mm: f64,
    ribbon_width_mm: f64,
    boundary_width_mm: Option<f64>,
    n_discrete: Option<usize>,
    mesh_counts: Option<Vec<u32>>,
    mesh_section_length_mm: Option<f64>,
    attachment_half_width_mm: Option<f64>,
}

/// Materials and sheet definitions available to a run: the built-ins plus
/// whatever a config file added.
#[derive(Debug, Clone)]
pub struct Catalog {
    materials: MaterialRegistry,
    sheets: BTreeMap<String, SheetBuilder>,
}

impl Catalog {
    /// Catalog with only the built-in materials and presets.
    pub fn builtin() -> Catalog {
        Catalog {
            materials: MaterialRegistry::builtin(),
            sheets: BTreeMap::new(),
        }
    }

    /// Load a config file on top of the built-ins.
    pub fn from_path(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Catalog::from_toml(&text).map_err(|e| match e {
            // Attach the file path to bare parse errors.
            Error::Config {
                path: _, message, ..
            } => Error::Config {
                path: path.to_owned(),
                message,
            },
            other => other.context(format!("loading {}", path.display())),
        })
    }

    /// Parse config text on top of the built-ins.
    pub fn from_toml(text: &str) -> Result<Catalog> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config {
            path: "<config>".into(),
            message: e.to_string(),
        })?;

        let mut materials = MaterialRegistry::builtin();
        for (name, m) in &raw.materials {
            materials
                .register(Material::new(
                    name.clone(),
                    crate::units::mpa(m.youngs_modulus_mpa),
                )?)
                .context(format!("material `{name}`"))?;
        }

        let mut sheets = BTreeMap::new();
        for (name, s) in &raw.sheets {
            if name.parse::<Preset>().is_ok() {
                return Err(Error::InvalidArgument(format!(
                    "sheet name `{name}` collides with a built-in preset"
                )));
            }
            let material = materials
                .lookup(&s.material)
                .context(format!("sheet `{name}`"))?
                .clone();
            let mut builder = SheetBuilder::new(
                mm(s.radius_mm),
                mm(s.thickness_mm),
                mm(s.ribbon_width_mm),
                material,
            );
            if let Some(w) = s.boundary_width_mm {
                builder = builder.boundary_width(mm(w));
            }
            if let Some(n) = s.n_discrete {
                builder = builder.n_discrete(n);
            }
            if let Some(counts) = &s.mesh_counts {
                builder = builder.mesh_counts(counts.clone());
            }
            if let Some(l) = s.mesh_section_length_mm {
                builder = builder.mesh_section_length(mm(l));
            }
            if let Some(b) = s.attachment_half_width_mm {
                builder = builder.attachment_half_width(mm(b));
            }
            // Validate now so config errors surface at load, with the
            // sheet's name attached.
            builder.build().context(format!("sheet `{name}`"))?;
            sheets.insert(name.clone(), builder);
        }

        Ok(Catalog { materials, sheets })
    }

    pub fn materials(&self) -> &MaterialRegistry {
        &self.materials
    }

    /// Resolve a sheet name: config-defined sheets first, then the
    /// built-in presets A–D.
    pub fn sheet_builder(&self, name: &str) -> Result<SheetBuilder> {
        if let Some(builder) = self.sheets.get(name) {
            return Ok(builder.clone());
        }
        if let Ok(preset) = name.parse::<Preset>() {
            return Ok(crate::sheet::SheetSpec::preset_builder(preset));
        }
        Err(Error::NotFound {
            kind: "sheet",
            name: name.to_owned(),
            available: self.sheet_names(),
        })
    }

    /// All resolvable sheet names: presets, then config sheets.
    pub fn sheet_names(&self) -> Vec<String> {
        Preset::ALL
            .iter()
            .map(|p| p.id().to_owned())
            .chain(self.sheets.keys().cloned())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
        [materials.nylon]
        youngs_modulus_mpa = 2620.0

        [sheets.wide]
        material = "nylon"
        radius_mm = 30.0
        thickness_mm = 1.0
        ribbon_width_mm = 1.0
        n_discrete = 7

        [sheets.stock]
        material = "TPU"
        radius_mm = 22.24
        thickness_mm = 1.0
        ribbon_width_mm = 1.0
    "#;

    #[test]
    fn loads_materials_and_sheets() {
        let catalog = Catalog::from_toml(EXAMPLE).unwrap();
        assert_eq!(
            catalog
                .materials()
                .lookup("nylon")
                .unwrap()
                .youngs_modulus(),
            2.62e9
        );
        let wide = catalog.sheet_builder("wide").unwrap().build().unwrap();
        assert_eq!(wide.radius(), 0.03);
        assert_eq!(wide.n_discrete(), 7);
        assert_eq!(wide.material().name(), "nylon");
        assert_eq!(
            catalog.sheet_names(),
            vec!["A", "B", "C", "D", "stock", "wide"]
        );
    }

    #[test]
    fn presets_resolve_without_config() {
        let catalog = Catalog::builtin();
        let sheet = catalog.sheet_builder("A").unwrap().build().unwrap();
        assert_eq!(sheet.radius(), 0.02224);
        let err = catalog.sheet_builder("wide").unwrap_err();
        assert_eq!(
            err.to_string(),
            "unknown sheet `wide` (available: A, B, C, D)"
        );
    }

    #[test]
    fn rejects_misspelled_keys() {
        let err = Catalog::from_toml(
            "[sheets.x]\nmaterial = \"TPU\"\nradius_m = 1.0\nthickness_mm = 1\nribbon_width_mm = 1",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config { .. }), "{err}");
        assert!(err.to_string().contains("radius_m"), "{err}");
    }

    #[test]
    fn rejects_duplicate_and_colliding_names() {
        let err = Catalog::from_toml("[materials.TPU]\nyoungs_modulus_mpa = 1.0").unwrap_err();
        assert!(err.to_string().contains("already registered"), "{err}");

        let err = Catalog::from_toml(
            "[sheets.A]\nmaterial = \"TPU\"\nradius_mm = 10\nthickness_mm = 1\nribbon_width_mm = 1",
        )
        .unwrap_err();
        assert!(err.to_string().contains("collides"), "{err}");
    }

    #[test]
    fn sheet_errors_carry_the_sheet_name() {
        // Unknown material.
        let err = Catalog::from_toml(
            "[sheets.x]\nmaterial = \"unobtanium\"\nradius_mm = 10\nthickness_mm = 1\nribbon_width_mm = 1",
        )
        .unwrap_err();
        let text = err.to_string();
        assert!(text.contains("sheet `x`"), "{text}");
        assert!(text.contains("unobtanium"), "{text}");

        // Invalid geometry (even ribbon count).
        let err = Catalog::from_toml(
            "[sheets.x]\nmaterial = \"TPU\"\nradius_mm = 10\nthickness_mm = 1\nribbon_width_mm = 1\nn_discrete = 4",
        )
        .unwrap_err();
        assert!(err.to_string().contains("sheet `x`"), "{err}");
    }

    #[test]
    fn empty_config_is_fine() {
        let catalog = Catalog::from_toml("").unwrap();
        assert_eq!(catalog.sheet_names().len(), 4);
    }
}
