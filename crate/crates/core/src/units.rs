//! Unit conversions for the crate's I/O boundaries.
//!
//! All physics in this crate is strict SI: lengths in metres, moduli in
//! pascals, forces in newtons. Sheets are described in millimetres and
//! megapascals in config files and on the command line, so those layers
//! convert on the way in and out with the helpers below.
//!
//! Both directions multiply by a constant (`* 1e-3` in, `* 1e3` out) rather
//! than dividing, so each conversion rounds exactly once and the pipeline
//! `format -> parse -> convert` is reproducible bit for bit.

/// Millimetres to metres.
#[inline]
pub fn mm(value_mm: f64) -> f64 {
    value_mm * 1e-3
}

/// Metres to millimetres.
#[inline]
pub fn to_mm(value_m: f64) -> f64 {
    value_m * 1e3
}

/// Megapascals to pascals.
#[inline]
pub fn mpa(value_mpa: f64) -> f64 {
    value_mpa * 1e6
}

/// Pascals to megapascals.
#[inline]
pub fn to_mpa(value_pa: f64) -> f64 {
    value_pa * 1e-6
}
