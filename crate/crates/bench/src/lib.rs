//! Shared fixtures for the benchmark suite.

use kirigami_core::{Preset, SheetSpec};

/// The reference sheet every benchmark runs against, so numbers stay
/// comparable across benchmarks and over time.
pub fn reference_sheet() -> SheetSpec {
    SheetSpec::preset(Preset::A)
}
