//! Sheet materials and the registry used to look them up by name.
//!
//! Only the Young's modulus enters the force model: every term is linear
//! elasticity (beam bending or axial stretch), so density, yield strength
//! and the like never appear. Two materials ship built in, matching the
//! sheets we characterised: a printable TPU (E = 14.77 MPa) and PET film
//! (E = 3.57 GPa). Config files can add more.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::units;

/// A linear-elastic sheet material.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    name: String,
    youngs_modulus: f64,
}

impl Material {
    /// Create a material. `youngs_modulus` is in pascals and must be a
    /// positive finite number; `name` must be non-empty.
    pub fn new(name: impl Into<String>, youngs_modulus: f64) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidArgument("material name is empty".into()));
        }
        if !(youngs_modulus.is_finite() && youngs_modulus > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "material `{name}`: Young's modulus must be positive and finite, got {youngs_modulus}"
            )));
        }
        Ok(Material {
            name,
            youngs_modulus,
        })
    }

    /// The thermoplastic polyurethane the reference sheets were printed from.
    pub fn tpu() -> Material {
        Material {
            name: "TPU".into(),
            youngs_modulus: units::mpa(14.77),
        }
    }

    /// PET film, for laser-cut sheets; roughly 240x stiffer than the TPU.
    pub fn pet() -> Material {
        Material {
            name: "PET".into(),
            youngs_modulus: units::mpa(3570.0),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Young's modulus in pascals.
    pub fn youngs_modulus(&self) -> f64 {
        self.youngs_modulus
    }
}

/// Named materials, looked up when a sheet description references one.
///
/// The map is ordered so listings (and the `available:` part of lookup
/// errors) come out alphabetical regardless of insertion order.
#[derive(Debug, Clone, Default)]
pub struct MaterialRegistry {
    materials: BTreeMap<String, Material>,
}

impl MaterialRegistry {
    /// Empty registry.
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding the built-in materials (TPU, PET).
    pub fn builtin() -> Self {
        let mut reg = Self::new();
        reg.register(Material::tpu())
            .expect("built-in materials have distinct names");
        reg.register(Material::pet())
            .expect("built-in materials have distinct names");
        reg
    }

    /// Add a material. Names are unique: registering a name twice is an
    /// error rather than a silent overwrite, so a config file cannot
    /// accidentally shadow a built-in.
    pub fn register(&mut self, material: Material) -> Result<()> {
        if self.materials.contains_key(material.name()) {
            return Err(Error::InvalidArgument(format!(
                "material `{}` is already registered",
                material.name()
            )));
        }
        self.materials.insert(material.name().to_owned(), material);
        Ok(())
    }

    /// Look a material up by name.
    pub fn lookup(&self, name: &str) -> Result<&Material> {
        self.materials.get(name).ok_or_else(|| Error::NotFound {
            kind: "material",
            name: name.to_owned(),
            available: self.names().map(str::to_owned).collect(),
        })
    }

    /// Registered names in alphabetical order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.materials.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_moduli() {
        let reg = MaterialRegistry::builtin();
        assert_eq!(reg.lookup("TPU").unwrap().youngs_modulus(), 14.77e6);
        assert_eq!(reg.lookup("PET").unwrap().youngs_modulus(), 3.57e9);
    }

    #[test]
    fn pet_to_tpu_stiffness_ratio() {
        // The stiffness gap is what lets a 0.25 mm PET sheet out-pull a
        // 1 mm TPU one; keep the built-ins honest about it.
        let ratio = Material::pet().youngs_modulus() / Material::tpu().youngs_modulus();
        assert!((ratio - 241.706).abs() < 1e-3, "ratio {ratio}");
    }

    #[test]
    fn register_then_lookup_round_trips() {
        let mut reg = MaterialRegistry::builtin();
        let nylon = Material::new("nylon", units::mpa(2620.0)).unwrap();
        reg.register(nylon.clone()).unwrap();
        assert_eq!(reg.lookup("nylon").unwrap(), &nylon);
    }

    #[test]
    fn duplicate_name_is_rejected() {
        let mut reg = MaterialRegistry::builtin();
        let err = reg.register(Material::tpu()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)), "{err}");
    }

    #[test]
    fn lookup_error_lists_names_alphabetically() {
        let reg = MaterialRegistry::builtin();
        let err = reg.lookup("nylon").unwrap_err();
        assert_eq!(
            err.to_string(),
            "unknown material `nylon` (available: PET, TPU)"
        );
    }

    #[test]
    fn invalid_materials_are_rejected() {
        assert!(Material::new("", 1e6).is_err());
        assert!(Material::new("x", 0.0).is_err());
        assert!(Material::new("x", -5.0).is_err());
        assert!(Material::new("x", f64::NAN).is_err());
        assert!(Material::new("x", f64::INFINITY).is_err());
    }
}
