//! The assembled force model: total tensile force, displacement curves,
//! actuator sizing, and validation against measurement tables.
//!
//! The three resistance mechanisms simply add,
//!
//! ```text
//! F_tensile = F_boundary + F_discrete + F_mesh
//! ```
//!
//! and every term is itself a lower bound on the corresponding physical
//! resistance, so `F_tensile` is a lower bound on the real actuation
//! force. Downstream output (curves, actuator reports, validation prints)
//! carries that caveat explicitly.
//!
//! # Curve CSV format
//!
//! [`write_curve_csv`] emits exactly this header:
//!
//! ```text
//! delta_x_mm,a_mm,b_mm,regime,F_boundary_N,F_discrete_N,F_mesh_N,F_tensile_N
//! ```
//!
//! with one newline-terminated row per sample, `.` decimal separator, and
//! full (shortest round-trip) float precision. Measurement tables read by
//! [`read_measurements_csv`] are also comma-separated with a header row;
//! the displacement column must be `delta_x_mm`, forces are taken from
//! `force_N` (or `F_tensile_N`, so a curve file can be fed straight back
//! in) and half-widths from `half_width_mm` (or `b_mm`). Missing cells are
//! allowed and skipped per metric.
//!
//! # Bit-exact round trips
//!
//! A curve written to CSV and re-read as measurements must validate with
//! a mean absolute error of exactly zero — this is how the pipeline is
//! checked end to end. Multiplying by `1e3` and then by `1e-3` does *not*
//! reproduce every f64 bit for bit, so the curve grid is generated in
//! millimetre space: each sample stores the millimetre value that will be
//! printed, and its physics is evaluated at `value_mm * 1e-3`. A reader
//! that parses the printed value and applies the same conversion lands on
//! the identical displacement, and identical inputs give identical
//! predictions.

use std::io;
use std::path::Path;

use crate::boundary::{boundary_response, BoundaryRegime, BoundaryState};
use crate::discrete::discrete_force;
use crate::error::{Error, Result, ResultExt};
use crate::mesh::mesh_force;
use crate::sheet::SheetSpec;
use crate::units::{mm, to_mm};

/// Force components at one displacement. All newtons; the sum is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceBreakdown {
    /// Displacement `δx`, m.
    pub displacement: f64,
    pub f_boundary: f64,
    pub f_discrete: f64,
    pub f_mesh: f64,
    /// `f_boundary + f_discrete + f_mesh`, computed once.
    pub f_tensile: f64,
}

/// One force-curve sample: geometry, active regime, and forces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    /// The displacement in millimetres exactly as it is (or would be)
    /// printed in CSV output. The physics in `state`/`forces` is evaluated
    /// at `displacement_mm * 1e-3` so emitted files re-validate exactly.
    pub displacement_mm: f64,
    pub state: BoundaryState,
    pub regime: BoundaryRegime,
    pub forces: ForceBreakdown,
}

/// A force–displacement curve for one sheet.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceCurve {
    /// Label for output (preset id or config sheet name).
    pub sheet_id: String,
    /// Displacement step between samples, m.
    pub step: f64,
    /// Samples in strictly increasing displacement order, starting at 0.
    pub samples: Vec<CurveSample>,
}

impl ForceCurve {
    /// The sample with the largest tensile force (ties: first).
    pub fn peak(&self) -> &CurveSample {
        self.samples
            .iter()
            .reduce(|best, s| {
                if s.forces.f_tensile > best.forces.f_tensile {
                    s
                } else {
                    best
                }
            })
            .expect("force curves have at least two samples")
    }
}

/// Evaluate boundary, discrete and mesh contributions at one displacement.
pub fn evaluate(sheet: &SheetSpec, delta_x: f64) -> Result<CurveSample> {
    let resp = boundary_response(sheet, delta_x).context("boundary ribbon")?;
    let f_discrete = discrete_force(sheet, delta_x).context("discrete ribbons")?;
    let f_mesh = mesh_force(sheet, delta_x).context("mesh ribbons")?;
    let forces = ForceBreakdown {
        displacement: delta_x,
        f_boundary: resp.force,
        f_discrete,
        f_mesh,
        f_tensile: resp.force + f_discrete + f_mesh,
    };
    Ok(CurveSample {
        displacement_mm: to_mm(delta_x),
        state: resp.state,
        regime: resp.regime,
        forces,
    })
}

/// Total tensile force (with components) at one displacement.
pub fn tensile_force(sheet: &SheetSpec, delta_x: f64) -> Result<ForceBreakdown> {
    Ok(evaluate(sheet, delta_x)?.forces)
}

/// Sample the model at 0, step, 2·step, … ≤ `max_displacement`.
///
/// The grid is laid out in millimetres (see the module notes on bit-exact
/// round trips); `step` and `max_displacement` are still metres like every
/// other length in the crate.
pub fn force_curve(
    sheet: &SheetSpec,
    sheet_id: &str,
    max_displacement: f64,
    step: f64,
) -> Result<ForceCurve> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "curve step must be positive and finite, got {step}"
        )));
    }
    if !(max_displacement.is_finite() && max_displacement >= step) {
        return Err(Error::InvalidArgument(format!(
            "curve maximum ({max_displacement}) must be at least one step ({step})"
        )));
    }
    let step_mm = to_mm(step);
    let max_mm = to_mm(max_displacement);
    // Tiny slack so 25/5 counts as 5 steps even if the quotient lands a
    // few ulps under the integer.
    let n_steps = (max_mm / step_mm + 1e-9).floor() as usize;
    if n_steps > 1_000_000 {
        return Err(Error::InvalidArgument(format!(
            "curve would have {n_steps} samples; displacement step is too small"
        )));
    }

    let mut samples = Vec::with_capacity(n_steps + 1);
    for k in 0..=n_steps {
        let v_mm = k as f64 * step_mm;
        let mut sample = evaluate(sheet, mm(v_mm)).context(format!("curve sample at {v_mm} mm"))?;
        sample.displacement_mm = v_mm;
        samples.push(sample);
    }
    Ok(ForceCurve {
        sheet_id: sheet_id.to_owned(),
        step,
        samples,
    })
}

/// Actuator sizing result: does `rating` cover the sheet's peak demand?
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuatorReport {
    /// Actuator rating, N.
    pub rating: f64,
    /// Largest model force over the actuation range, N.
    pub peak_force: f64,
    /// Displacement at which the peak occurs, m.
    pub peak_displacement: f64,
    /// `rating − peak_force`, N. Negative margin fails.
    pub margin: f64,
    pub pass: bool,
    /// Number of grid points examined.
    pub samples: usize,
}

/// Size an actuator: scan `[0, max_displacement]` for the peak tensile
/// force and compare against the rating.
///
/// The model force is a lower bound on the real demand, so a passing
/// margin is a necessary condition, not a guarantee; reports should (and
/// the CLI does) say so.
pub fn actuator_margin(
    sheet: &SheetSpec,
    rating: f64,
    max_displacement: f64,
) -> Result<ActuatorReport> {
    if !(rating.is_finite() && rating > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "actuator rating must be positive and finite, got {rating}"
        )));
    }
    if !(max_displacement.is_finite() && max_displacement > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "actuation range must be positive and finite, got {max_displacement}"
        )));
    }
    const GRID: usize = 250;
    let mut peak_force = 0.0;
    let mut peak_displacement = 0.0;
    for j in 0..=GRID {
        let delta_x = max_displacement * j as f64 / GRID as f64;
        let forces = tensile_force(sheet, delta_x)
            .context(format!("actuator scan at {} mm", to_mm(delta_x)))?;
        if forces.f_tensile > peak_force {
            peak_force = forces.f_tensile;
            peak_displacement = delta_x;
        }
    }
    let margin = rating - peak_force;
    Ok(ActuatorReport {
        rating,
        peak_force,
        peak_displacement,
        margin,
        pass: margin >= 0.0,
        samples: GRID + 1,
    })
}

/// One measurement row, holding the raw file values (mm and N). Cells a
/// dataset doesn't have are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub delta_x_mm: f64,
    pub force_n: Option<f64>,
    pub half_width_mm: Option<f64>,
}

/// Mean absolute errors of the model against a measurement table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// Mean |predicted − measured| tensile force, N. `None` if no row had
    /// a force value.
    pub mae_force: Option<f64>,
    /// Mean |predicted − measured| half-width, m. `None` if no row had a
    /// half-width value.
    pub mae_half_width: Option<f64>,
    /// Rows that contributed to at least one metric.
    pub n_points: usize,
    /// Rows contributing to the force metric.
    pub n_force: usize,
    /// Rows contributing to the half-width metric.
    pub n_half_width: usize,
    /// Rows with no usable cell at all.
    pub n_skipped: usize,
}

/// Compare model predictions against measurements.
///
/// Each row is predicted at `delta_x_mm * 1e-3` — the same conversion the
/// curve generator uses — and compared in the measurement's native units,
/// so re-validating a model-generated table gives exactly zero error.
pub fn validate_against_measurements(
    sheet: &SheetSpec,
    measurements: &[Measurement],
) -> Result<ValidationReport> {
    if measurements.is_empty() {
        return Err(Error::InvalidArgument("measurement table is empty".into()));
    }
    let mut force_abs_sum = 0.0;
    let mut width_abs_sum_mm = 0.0;
    let mut n_force = 0usize;
    let mut n_half_width = 0usize;
    let mut n_skipped = 0usize;
    let mut n_points = 0usize;

    for m in measurements {
        if m.force_n.is_none() && m.half_width_mm.is_none() {
            n_skipped += 1;
            continue;
        }
        let sample = evaluate(sheet, mm(m.delta_x_mm))
            .context(format!("measurement at {} mm", m.delta_x_mm))?;
        n_points += 1;
        if let Some(measured) = m.force_n {
            force_abs_sum += (sample.forces.f_tensile - measured).abs();
            n_force += 1;
        }
        if let Some(measured_mm) = m.half_width_mm {
            width_abs_sum_mm += (to_mm(sample.state.semi_minor) - measured_mm).abs();
            n_half_width += 1;
        }
    }

    if n_points == 0 {
        return Err(Error::InvalidArgument(
            "measurement table has no row with a force or half-width value".into(),
        ));
    }
    Ok(ValidationReport {
        mae_force: (n_force > 0).then(|| force_abs_sum / n_force as f64),
        mae_half_width: (n_half_width > 0).then(|| mm(width_abs_sum_mm / n_half_width as f64)),
        n_points,
        n_force,
        n_half_width,
        n_skipped,
    })
}

/// Exact header of the curve CSV format.
pub const CURVE_CSV_HEADER: &str =
    "delta_x_mm,a_mm,b_mm,regime,F_boundary_N,F_discrete_N,F_mesh_N,F_tensile_N";

/// Write a curve in the documented CSV format.
pub fn write_curve_csv<W: io::Write>(curve: &ForceCurve, writer: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CURVE_CSV_HEADER.split(','))?;
    for s in &curve.samples {
        w.write_record(&[
            format_full(s.displacement_mm),
            format_full(to_mm(s.state.semi_major)),
            format_full(to_mm(s.state.semi_minor)),
            s.regime.as_str().to_owned(),
            format_full(s.forces.f_boundary),
            format_full(s.forces.f_discrete),
            format_full(s.forces.f_mesh),
            format_full(s.forces.f_tensile),
        ])?;
    }
    w.flush()
}

/// Curve CSV as a string (for stdout emission and tests).
pub fn curve_csv_string(curve: &ForceCurve) -> String {
    let mut buf = Vec::new();
    write_curve_csv(curve, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// Shortest round-trip decimal representation — parses back to the same
/// f64, which the validation round trip depends on.
fn format_full(value: f64) -> String {
    format!("{value}")
}

/// Read a measurement table. See the module docs for accepted columns.
pub fn read_measurements_csv<R: io::Read>(reader: R) -> Result<Vec<Measurement>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    let headers = r
        .headers()
        .map_err(|e| Error::Format {
            row: 1,
            message: e.to_string(),
        })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let delta_col = col("delta_x_mm").ok_or_else(|| Error::Format {
        row: 1,
        message: "missing required column `delta_x_mm`".into(),
    })?;
    let force_col = col("force_N").or_else(|| col("F_tensile_N"));
    let width_col = col("half_width_mm").or_else(|| col("b_mm"));
    if force_col.is_none() && width_col.is_none() {
        return Err(Error::Format {
            row: 1,
            message: "need a `force_N` (or `F_tensile_N`) or `half_width_mm` (or `b_mm`) column"
                .into(),
        });
    }

    let parse_cell = |record: &csv::StringRecord, idx: usize, name: &str, row: usize| match record
        .get(idx)
        .map(str::trim)
    {
        None | Some("") => Ok(None),
        Some(text) => text.parse::<f64>().map(Some).map_err(|_| Error::Format {
            row,
            message: format!("column `{name}`: cannot parse `{text}` as a number"),
        }),
    };

    let mut measurements = Vec::new();
    for (i, record) in r.records().enumerate() {
        let row = i + 2; // 1-based file line; header is line 1
        let record = record.map_err(|e| Error::Format {
            row,
            message: e.to_string(),
        })?;
        if record.iter().all(|cell| cell.trim().is_empty()) {
            continue; // blank line
        }
        let delta_x_mm =
            parse_cell(&record, delta_col, "delta_x_mm", row)?.ok_or_else(|| Error::Format {
                row,
                message: "missing displacement value".into(),
            })?;
        if !(delta_x_mm.is_finite() && delta_x_mm >= 0.0) {
            return Err(Error::Format {
                row,
                message: format!("displacement must be non-negative, got {delta_x_mm}"),
            });
        }
        let force_n = match force_col {
            Some(idx) => parse_cell(&record, idx, "force_N", row)?,
            None => None,
        };
        let half_width_mm = match width_col {
            Some(idx) => parse_cell(&record, idx, "half_width_mm", row)?,
            None => None,
        };
        measurements.push(Measurement {
            delta_x_mm,
            force_n,
            half_width_mm,
        });
    }
    Ok(measurements)
}

/// [`read_measurements_csv`] from a file path, with the path in any error.
pub fn read_measurements_path(path: &Path) -> Result<Vec<Measurement>> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    read_measurements_csv(io::BufReader::new(file)).context(format!("reading {}", path.display()))
}
