//! Force model for actuated kirigami sheets.
//!
//! A circular sheet is laser-cut into three cooperating ribbon systems: a
//! closed **boundary ribbon** around the rim, a fan of parallel **discrete
//! ribbons** bridging the two halves, and short **mesh ribbons**
//! subdividing the remaining material. Pulling two opposite rim points
//! apart by a displacement `δx` deforms the boundary into an ellipse
//! (its perimeter is conserved — the ribbon bends but barely stretches),
//! bows each discrete ribbon out of plane into a catenary-like arch, and
//! bends the mesh ribbons like little guided beams.
//!
//! The crate computes, from first principles, the tensile force an
//! actuator must supply to hold a sheet open at a given `δx`:
//!
//! * [`boundary`] — ellipse geometry from perimeter conservation and the
//!   bend/stretch force of the rim ribbon,
//! * [`discrete`] — catenary arch geometry, per-ribbon compression, and
//!   the four-bar-linkage force balance that sums them,
//! * [`mesh`] — series-spring load path through the mesh subdivisions,
//! * [`model`] — the combined force breakdown, force–displacement curves,
//!   actuator sizing, and CSV round-tripping,
//! * [`oracle`] — a brute-force inextensible-ring simulation certifying
//!   that the analytic bend force is a lower bound on the true force.
//!
//! Supporting modules: [`material`] and [`section`] for stiffness inputs,
//! [`sheet`] for validated sheet descriptions and the four built-in
//! presets, [`config`] for TOML catalogs of custom materials and sheets,
//! [`units`] for the millimetre/SI boundary conversions, and [`error`]
//! for the shared error type.
//!
//! All physics is strict SI internally (metres, newtons, pascals);
//! human-facing units (mm, MPa) are converted exactly once at the
//! boundaries via [`units`].
//!
//! ```
//! use kirigami_core::{Preset, SheetSpec, evaluate, units::mm};
//!
//! let sheet = SheetSpec::preset(Preset::A);
//! let sample = evaluate(&sheet, mm(10.0)).unwrap();
//! assert!(sample.forces.f_tensile > 0.0);
//! ```

pub mod boundary;
pub mod config;
pub mod discrete;
pub mod error;
pub mod material;
pub mod mesh;
pub mod model;
pub mod oracle;
pub mod section;
pub mod sheet;
pub mod units;

pub use boundary::{
    boundary_force, boundary_response, boundary_state, BoundaryRegime, BoundaryResponse,
    BoundaryState,
};
pub use config::Catalog;
pub use discrete::{discrete_force, LinkageState, RibbonArch};
pub use error::{Error, Result};
pub use material::{Material, MaterialRegistry};
pub use mesh::{mesh_force, MeshLoadPath};
pub use model::{
    actuator_margin, evaluate, force_curve, tensile_force, validate_against_measurements,
    ActuatorReport, CurveSample, ForceBreakdown, ForceCurve, Measurement, ValidationReport,
};
pub use oracle::{
    check_lower_bound, check_lower_bound_with_nodes, simulate_ring_bend, LowerBoundPoint,
    LowerBoundReport, PointOutcome, RingModel, SolveStats, DEFAULT_RING_NODES,
};
pub use section::CrossSection;
pub use sheet::{Preset, SheetBuilder, SheetSpec};
