//! `kirigami` — command-line front end for the kirigami sheet force model.
//!
//! Thin argument-parsing and formatting layer over `kirigami-core`: all
//! physics lives in the library. Lengths cross this boundary in
//! millimetres and moduli in megapascals; everything internal is SI.
//! Human-readable numbers are printed with six significant digits, CSV
//! cells with full round-trip precision.
//!
//! Subcommands: `geometry` (deformed shape at one displacement), `curve`
//! (force–displacement CSV, optional SVG plot), `sweep` (one curve per
//! value of a swept parameter), `actuator` (rating check), `validate`
//! (model vs. measurement table), `oracle` (independent elastic-ring
//! lower-bound check).
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when an
//! iterative solver fails to converge. `--explain` prints defaulted
//! parameters and modeling conventions to stderr, keeping stdout clean
//! for data.

mod svg;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kirigami_core::boundary::regime_switch_displacement;
use kirigami_core::discrete::loaded_layout;
use kirigami_core::model::{curve_csv_string, read_measurements_csv, write_curve_csv};
use kirigami_core::units::{mm, mpa, to_mm};
use kirigami_core::{
    actuator_margin, check_lower_bound_with_nodes, evaluate, force_curve, simulate_ring_bend,
    validate_against_measurements, Catalog, Error, ForceCurve, Material, PointOutcome, Result,
    RingModel, SheetBuilder, SheetSpec, DEFAULT_RING_NODES,
};

/// Caveat attached to every force report.
const LOWER_BOUND_NOTE: &str = "note: model forces are lower bounds on the real actuation force";

#[derive(Parser)]
#[command(
    name = "kirigami",
    version,
    about = "Analyse actuated kirigami sheets: deformed geometry, tensile force \
             curves, parameter sweeps, actuator sizing, and an independent \
             elastic-ring lower-bound check",
    after_help = "Lengths are given in millimetres, moduli in megapascals, forces in \
                  newtons.\nExit codes: 0 success, 1 usage or input error, 2 numerical \
                  failure."
)]
struct Cli {
    /// TOML file adding custom materials and sheets (see docs/config.md)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Print defaulted parameters and modeling conventions to stderr
    #[arg(long, global = true)]
    explain: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SheetArg {
    /// Sheet to analyse: preset A–D or a config-defined name
    #[arg(long, value_name = "NAME")]
    sheet: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the deformed boundary ellipse and per-ribbon arch geometry
    Geometry {
        #[command(flatten)]
        sheet: SheetArg,
        /// Boundary displacement, mm
        #[arg(long, value_name = "MM", allow_negative_numbers = true)]
        dx: f64,
    },

    /// Write a force–displacement curve as CSV, optionally with an SVG plot
    Curve {
        #[command(flatten)]
        sheet: SheetArg,
        /// Largest displacement, mm
        #[arg(
            long,
            default_value_t = 25.0,
            value_name = "MM",
            allow_negative_numbers = true
        )]
        max: f64,
        /// Displacement step, mm
        #[arg(
            long,
            default_value_t = 5.0,
            value_name = "MM",
            allow_negative_numbers = true
        )]
        step: f64,
        /// Write the CSV here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Also render the curve as a standalone SVG plot
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },

    /// Evaluate one curve per value of a swept parameter (in parallel)
    Sweep {
        #[command(flatten)]
        sheet: SheetArg,
        /// Which sheet parameter to sweep
        #[arg(long, value_enum)]
        param: SweepParam,
        /// First parameter value (mm, or MPa for youngs-modulus)
        #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
        from: f64,
        /// Last parameter value, inclusive when the grid lands on it
        #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
        to: f64,
        /// Spacing between parameter values
        #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
        step: f64,
        /// Largest displacement of each curve, mm
        #[arg(
            long,
            default_value_t = 25.0,
            value_name = "MM",
            allow_negative_numbers = true
        )]
        max: f64,
        /// Displacement step of each curve, mm
        #[arg(
            long,
            default_value_t = 5.0,
            value_name = "MM",
            allow_negative_numbers = true
        )]
        curve_step: f64,
        /// Directory for the sweep_<param>_<value>.csv files
        /// [default: $KIRIGAMI_OUT_DIR, or the current directory]
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },

    /// Check an actuator rating against the peak model force
    Actuator {
        #[command(flatten)]
        sheet: SheetArg,
        /// Actuator force rating, N
        #[arg(long, value_name = "N", allow_negative_numbers = true)]
        rating: f64,
        /// Largest displacement of the actuation range, mm
        #[arg(
            long,
            default_value_t = 25.0,
            value_name = "MM",
            allow_negative_numbers = true
        )]
        max: f64,
    },

    /// Compare model predictions against a measurement CSV
    Validate {
        #[command(flatten)]
        sheet: SheetArg,
        /// Measurement table: a delta_x_mm column plus force_N (or
        /// F_tensile_N) and/or half_width_mm (or b_mm) columns
        #[arg(long, value_name = "PATH")]
        data: PathBuf,
    },

    /// Run the elastic-ring reference simulation and check the lower bound
    Oracle {
        #[command(flatten)]
        sheet: SheetArg,
        /// Displacements to check, mm (comma-separated, strictly ascending)
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "5,10,15,20",
            value_name = "MM"
        )]
        dx: Vec<f64>,
        /// Ring resolution: node count (even, at least 64)
        #[arg(long, default_value_t = DEFAULT_RING_NODES, value_name = "N")]
        nodes: usize,
        /// Dump the converged ring shape at the largest displacement as
        /// x_mm,y_mm CSV
        #[arg(long, value_name = "PATH")]
        dump_shape: Option<PathBuf>,
    },
}

/// Sheet parameter a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepParam {
    /// Sheet thickness, mm
    Thickness,
    /// Boundary radius, mm
    Radius,
    /// Ribbon width, mm
    RibbonWidth,
    /// Young's modulus, MPa
    YoungsModulus,
}

impl SweepParam {
    fn slug(self) -> &'static str {
        match self {
            SweepParam::Thickness => "thickness",
            SweepParam::Radius => "radius",
            SweepParam::RibbonWidth => "ribbon-width",
            SweepParam::YoungsModulus => "youngs-modulus",
        }
    }

    fn unit(self) -> &'static str {
        match self {
            SweepParam::YoungsModulus => "MPa",
            _ => "mm",
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when the consumer closes the pipe (`kirigami ... | head`),
    // like any other line-oriented tool, instead of panicking on EPIPE.
    // SAFETY: restoring the default SIGPIPE disposition, before any other
    // thread exists.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests land on stdout and succeed; real
            // usage errors go to stderr and exit 1 (clap's default of 2 is
            // reserved here for numerical failures).
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(failure_code(&err))
        }
    }
}

/// Exit code for a failed run: 2 when a solver failed to converge, 1 for
/// everything else (bad input, missing files, malformed tables).
fn failure_code(err: &Error) -> u8 {
    if err.is_numerical() {
        2
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let catalog = match &cli.config {
        Some(path) => Catalog::from_path(path)?,
        None => Catalog::builtin(),
    };
    match cli.command {
        Command::Geometry { sheet, dx } => {
            let (spec, builder) = resolve(&catalog, &sheet.sheet)?;
            maybe_explain(cli.explain, &sheet.sheet, &builder, &spec)?;
            cmd_geometry(&spec, dx)
        }
        Command::Curve {
            sheet,
            max,
            step,
            out,
            svg,
        } => {
            let (spec, builder) = resolve(&catalog, &sheet.sheet)?;
            maybe_explain(cli.explain, &sheet.sheet, &builder, &spec)?;
            cmd_curve(
                &spec,
                &sheet.sheet,
                max,
                step,
                out.as_deref(),
                svg.as_deref(),
            )
        }
        Command::Sweep {
            sheet,
            param,
            from,
            to,
            step,
            max,
            curve_step,
            out_dir,
        } => {
            let (spec, builder) = resolve(&catalog, &sheet.sheet)?;
            maybe_explain(cli.explain, &sheet.sheet, &builder, &spec)?;
            cmd_sweep(&builder, param, from, to, step, max, curve_step, out_dir)
        }
        Command::Actuator { sheet, rating, max } => {
            let (spec, builder) = resolve(&catalog, &sheet.sheet)?;
            maybe_explain(cli.explain, &sheet.sheet, &builder, &spec)?;
            cmd_actuator(&spec, &sheet.sheet, rating, max)
        }
        Command::Validate { sheet, data } => {
            let (spec, builder) = resolve(&catalog, &sheet.sheet)?;
            maybe_explain(cli.explain, &sheet.sheet, &builder, &spec)?;
            cmd_validate(&spec, &sheet.sheet, &data)
        }
        Command::Oracle {
            sheet,
            dx,
            nodes,
            dump_shape,
        } => {
            let (spec, builder) = resolve(&catalog, &sheet.sheet)?;
            maybe_explain(cli.explain, &sheet.sheet, &builder, &spec)?;
            cmd_oracle(&spec, &sheet.sheet, &dx, nodes, dump_shape.as_deref())
        }
    }
}

/// Resolve a sheet name against the catalog and build its spec.
fn resolve(catalog: &Catalog, name: &str) -> Result<(SheetSpec, SheetBuilder)> {
    let builder = catalog.sheet_builder(name)?;
    let spec = builder
        .build()
        .map_err(|e| e.context(format!("sheet `{name}`")))?;
    Ok((spec, builder))
}

/// Print the `--explain` block to stderr: which parameters were filled
/// with documented defaults rather than given explicitly, and the modeling
/// conventions that shape the output.
fn maybe_explain(on: bool, name: &str, builder: &SheetBuilder, sheet: &SheetSpec) -> Result<()> {
    if !on {
        return Ok(());
    }
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "explain: sheet `{name}`");
    let defaulted = builder.defaulted_fields();
    if defaulted.is_empty() {
        let _ = writeln!(
            out,
            "  every parameter was given explicitly; no defaults in effect"
        );
    } else {
        let _ = writeln!(
            out,
            "  defaulted parameters (documented conventions, not measured values):"
        );
        for field in defaulted {
            let line = match field {
                "boundary_width" => format!(
                    "boundary_width = {} mm (defaults to the ribbon width)",
                    fmt_trim(to_mm(sheet.boundary_section().width()))
                ),
                "n_discrete" => format!("n_discrete = {}", sheet.n_discrete()),
                "mesh_counts" => format!("mesh_counts = {:?}", sheet.mesh_counts()),
                "mesh_section_length" => format!(
                    "mesh_section_length = {} mm (central ribbon length / (max mesh count + 1))",
                    fmt_trim(to_mm(sheet.mesh_section_length()))
                ),
                "attachment_half_width" => format!(
                    "attachment_half_width = {} mm",
                    fmt_trim(to_mm(sheet.attachment_half_width()))
                ),
                other => format!("{other} (defaulted)"),
            };
            let _ = writeln!(out, "    {line}");
        }
    }
    let b_min_mm = fmt_trim(to_mm(sheet.attachment_half_width()));
    let switch = regime_switch_displacement(sheet)?;
    let _ = writeln!(out, "  conventions:");
    let _ = writeln!(
        out,
        "    boundary force: bend regime while half-width b > b_min = {b_min_mm} mm, \
         stretch regime once b <= b_min"
    );
    let _ = writeln!(
        out,
        "    regime switch at dx = {} mm for this sheet; the piecewise force is \
         discontinuous there",
        sig6(to_mm(switch))
    );
    let _ = writeln!(
        out,
        "    link angle: b is clamped to at least b_min from the switch on, keeping \
         the discrete-ribbon force finite as the ellipse flattens"
    );
    let _ = writeln!(out, "    {LOWER_BOUND_NOTE}");
    eprint!("{out}");
    Ok(())
}

fn cmd_geometry(sheet: &SheetSpec, dx_mm: f64) -> Result<ExitCode> {
    let delta_x = mm(dx_mm);
    let sample = evaluate(sheet, delta_x)?;
    let arches = loaded_layout(sheet, delta_x)?;
    println!("displacement dx = {} mm", fmt_trim(dx_mm));
    println!("semi-major a = {} mm", sig6(to_mm(sample.state.semi_major)));
    println!("semi-minor b = {} mm", sig6(to_mm(sample.state.semi_minor)));
    println!(
        "regime: {} (attachment half-width b_min = {} mm)",
        sample.regime.as_str(),
        fmt_trim(to_mm(sheet.attachment_half_width()))
    );
    println!(
        "discrete ribbon arches (one half; i = {} is central, pairs mirror about the \
         minor axis):",
        arches.len()
    );
    println!(
        "{:>4} {:>14} {:>14} {:>14} {:>14}",
        "i", "l (mm)", "d_y (mm)", "d_z (mm)", "P (N)"
    );
    for arch in &arches {
        println!(
            "{:>4} {:>14} {:>14} {:>14} {:>14}",
            arch.index,
            sig6(to_mm(arch.rest_length)),
            sig6(to_mm(arch.endpoint_gap)),
            sig6(to_mm(arch.depth)),
            sig6(arch.compression),
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_curve(
    sheet: &SheetSpec,
    name: &str,
    max: f64,
    step: f64,
    out: Option<&Path>,
    svg_path: Option<&Path>,
) -> Result<ExitCode> {
    let curve = force_curve(sheet, name, mm(max), mm(step))?;
    // When the CSV itself goes to stdout, keep stdout clean for piping and
    // push every note to stderr.
    let notes_to_stderr = out.is_none();
    let note = |line: String| {
        if notes_to_stderr {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    };
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_err(path, e))?;
            let mut w = BufWriter::new(file);
            write_curve_csv(&curve, &mut w).map_err(|e| io_err(path, e))?;
            w.flush().map_err(|e| io_err(path, e))?;
            let last = curve.samples.last().expect("curves have samples");
            note(format!(
                "wrote {} ({} samples, dx = 0 to {} mm in {} mm steps)",
                path.display(),
                curve.samples.len(),
                fmt_trim(last.displacement_mm),
                fmt_trim(step)
            ));
        }
        None => print!("{}", curve_csv_string(&curve)),
    }
    if let Some(path) = svg_path {
        svg::write_svg(&curve, path)?;
        note(format!("wrote {}", path.display()));
    }
    let peak = curve.peak();
    note(format!(
        "peak model force {} N at dx = {} mm",
        sig6(peak.forces.f_tensile),
        fmt_trim(peak.displacement_mm)
    ));
    note(LOWER_BOUND_NOTE.to_owned());
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    base: &SheetBuilder,
    param: SweepParam,
    from: f64,
    to: f64,
    step: f64,
    max: f64,
    curve_step: f64,
    out_dir: Option<PathBuf>,
) -> Result<ExitCode> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sweep step must be positive and finite, got {step}"
        )));
    }
    if !(from.is_finite() && to.is_finite() && from > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sweep range must be positive and finite, got {from} to {to}"
        )));
    }
    if to < from {
        return Err(Error::InvalidArgument(format!(
            "sweep range is empty: --from {from} is beyond --to {to}"
        )));
    }
    // Tiny slack so an endpoint that lands on the grid is included even if
    // the quotient sits a few ulps under the integer.
    let n_values = ((to - from) / step + 1e-9).floor() as usize + 1;
    if n_values > 10_000 {
        return Err(Error::InvalidArgument(format!(
            "sweep would evaluate {n_values} curves; the step is too small"
        )));
    }
    let values: Vec<f64> = (0..n_values).map(|k| from + k as f64 * step).collect();

    let dir = out_dir
        .or_else(|| std::env::var_os("KIRIGAMI_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;

    // File names carry the value at six significant digits; reject grids
    // too fine for that to stay unique.
    let names: Vec<String> = values
        .iter()
        .map(|&v| format!("sweep_{}_{}.csv", param.slug(), fmt_trim(v)))
        .collect();
    for pair in names.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::InvalidArgument(format!(
                "sweep step {step} makes consecutive values share the file name \
                 `{}`; use a coarser grid",
                pair[0]
            )));
        }
    }

    // The curves are pure functions of their value, so evaluate them across
    // worker threads; files are then written by this thread in grid order,
    // making output and error reporting deterministic.
    let slots: Mutex<Vec<Option<Result<ForceCurve>>>> =
        Mutex::new((0..n_values).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(n_values);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n_values {
                    break;
                }
                let label = format!("{}={}", param.slug(), fmt_trim(values[i]));
                let result = sweep_curve(base, param, values[i], &label, max, curve_step);
                slots.lock().expect("a sweep worker panicked")[i] = Some(result);
            });
        }
    });
    let results = slots.into_inner().expect("a sweep worker panicked");

    for (i, slot) in results.into_iter().enumerate() {
        let value = fmt_trim(values[i]);
        let curve = slot.expect("every sweep slot is filled").map_err(|e| {
            e.context(format!(
                "sweep value {} = {value} {}",
                param.slug(),
                param.unit()
            ))
        })?;
        let path = dir.join(&names[i]);
        let file = File::create(&path).map_err(|e| io_err(&path, e))?;
        let mut w = BufWriter::new(file);
        write_curve_csv(&curve, &mut w).map_err(|e| io_err(&path, e))?;
        w.flush().map_err(|e| io_err(&path, e))?;
        println!(
            "wrote {} ({} = {value} {}, peak force {} N)",
            path.display(),
            param.slug(),
            param.unit(),
            sig6(curve.peak().forces.f_tensile)
        );
    }
    println!("{LOWER_BOUND_NOTE}");
    Ok(ExitCode::SUCCESS)
}

/// Build the sheet for one sweep value and evaluate its curve.
fn sweep_curve(
    base: &SheetBuilder,
    param: SweepParam,
    value: f64,
    label: &str,
    max: f64,
    curve_step: f64,
) -> Result<ForceCurve> {
    let builder = base.clone();
    let builder = match param {
        SweepParam::Thickness => builder.thickness(mm(value)),
        SweepParam::Radius => builder.radius(mm(value)),
        SweepParam::RibbonWidth => builder.ribbon_width(mm(value)),
        SweepParam::YoungsModulus => builder.material(Material::new(
            format!("E={} MPa", fmt_trim(value)),
            mpa(value),
        )?),
    };
    let sheet = builder.build()?;
    force_curve(&sheet, label, mm(max), mm(curve_step))
}

fn cmd_actuator(sheet: &SheetSpec, name: &str, rating: f64, max: f64) -> Result<ExitCode> {
    let report = actuator_margin(sheet, rating, mm(max))?;
    println!(
        "sheet {name}: actuation range 0 to {} mm ({} samples)",
        fmt_trim(max),
        report.samples
    );
    println!(
        "peak model force {} N at dx = {} mm",
        sig6(report.peak_force),
        sig6(to_mm(report.peak_displacement))
    );
    println!(
        "actuator rating {} N, margin {} N",
        fmt_trim(rating),
        sig6(report.margin)
    );
    println!("verdict: {}", if report.pass { "PASS" } else { "FAIL" });
    println!("{LOWER_BOUND_NOTE}; a passing margin is necessary, not sufficient");
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(sheet: &SheetSpec, name: &str, data: &Path) -> Result<ExitCode> {
    let file = File::open(data).map_err(|e| io_err(data, e))?;
    let rows = read_measurements_csv(file)?;
    let report = validate_against_measurements(sheet, &rows)?;
    println!("validated sheet {name} against {}", data.display());
    println!(
        "rows: {} used ({} with force, {} with half-width, {} skipped)",
        report.n_points, report.n_force, report.n_half_width, report.n_skipped
    );
    match report.mae_force {
        Some(v) => println!("MAE force: {} N", sig6(v)),
        None => println!("MAE force: n/a (no force column values)"),
    }
    match report.mae_half_width {
        Some(v) => println!("MAE half-width: {} mm", sig6(to_mm(v))),
        None => println!("MAE half-width: n/a (no half-width column values)"),
    }
    println!("{LOWER_BOUND_NOTE}; real measurements should sit at or above predictions");
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(
    sheet: &SheetSpec,
    name: &str,
    dx_mm: &[f64],
    nodes: usize,
    dump: Option<&Path>,
) -> Result<ExitCode> {
    // Built up front so invalid resolutions fail before any solve, and the
    // header can state the discretization being used.
    let probe = RingModel::for_sheet(sheet, nodes)?;
    println!(
        "elastic-ring check, sheet {name}: r = {} mm, EI = {} N m^2, {} nodes \
         (segment {} mm)",
        sig6(to_mm(probe.radius())),
        sig6(probe.bending_stiffness()),
        probe.n_nodes(),
        sig6(to_mm(probe.segment_rest_length()))
    );

    let displacements: Vec<f64> = dx_mm.iter().map(|&v| mm(v)).collect();
    let report = check_lower_bound_with_nodes(sheet, &displacements, nodes)?;

    println!(
        "{:>8} {:>14} {:>14} {:>14}  outcome",
        "dx (mm)", "model (N)", "ring (N)", "slack (N)"
    );
    let mut failures = 0usize;
    for point in &report.points {
        let dx = fmt_trim(to_mm(point.displacement));
        match &point.outcome {
            PointOutcome::Solved {
                oracle_force,
                slack,
            } => println!(
                "{:>8} {:>14} {:>14} {:>14}  {}",
                dx,
                sig6(point.model_force),
                sig6(*oracle_force),
                sig6(*slack),
                if *slack >= -report.tolerance {
                    "ok"
                } else {
                    "BOUND VIOLATED"
                }
            ),
            PointOutcome::Failed { error } => {
                failures += 1;
                println!(
                    "{:>8} {:>14} {:>14} {:>14}  FAILED: {error}",
                    dx,
                    sig6(point.model_force),
                    "-",
                    "-"
                );
            }
        }
    }
    println!(
        "lower bound holds: {} (tolerance {:e} N)",
        if report.pass { "yes" } else { "no" },
        report.tolerance
    );

    if let Some(path) = dump {
        let &last = dx_mm.last().expect("the displacement grid is non-empty");
        let mut ring = RingModel::for_sheet(sheet, nodes)?;
        simulate_ring_bend(&mut ring, mm(last))?;
        let file = File::create(path).map_err(|e| io_err(path, e))?;
        let mut w = BufWriter::new(file);
        ring.write_nodes_csv(&mut w).map_err(|e| io_err(path, e))?;
        w.flush().map_err(|e| io_err(path, e))?;
        println!(
            "wrote {} (converged shape at dx = {} mm)",
            path.display(),
            fmt_trim(last)
        );
    }

    if failures > 0 {
        eprintln!(
            "error: {failures} of {} ring solves failed; see the report above",
            report.points.len()
        );
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

/// Wrap a std I/O failure with the path it happened on.
fn io_err(path: &Path, source: io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Six significant digits: positional notation for moderate magnitudes,
/// scientific otherwise. Used for every human-readable number.
fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..=5).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

/// [`sig6`] with trailing zeros (and a bare trailing point) trimmed —
/// for values that are usually round, like grid steps and sweep values.
fn fmt_trim(x: f64) -> String {
    let s = sig6(x);
    if s.contains('.') && !s.contains('e') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}
