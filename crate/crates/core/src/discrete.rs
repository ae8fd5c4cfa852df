//! Discrete ribbons: catenary arch geometry and the tensile resistance
//! they produce.
//!
//! The parallel strips spanning the sheet cannot change length, so when
//! actuation narrows the boundary ellipse their endpoints approach each
//! other and the strips buckle out of plane. Each arch is modelled as a
//! catenary: with endpoint gap `d_y` and shape parameter `α`,
//!
//! ```text
//! l_ribbon = 2α sinh(d_y / 2α)                 (rest length)
//! d_z² + 2α d_z − (l/2)² = 0                   (center depth)
//! ```
//!
//! Treating each half-ribbon as a cantilever gives the compressive force
//! the arch exerts on the boundary,
//!
//! ```text
//! P sin φ = 3 E I d_z / (l/2)³,    φ = atan(d_z / (d_y/2))
//! ```
//!
//! and a four-bar linkage view of the quarter sheet (rigid links from the
//! minor-axis joint to the major-axis joints, at angle `θ` to the pull
//! direction) converts those compressions into the tensile component:
//!
//! ```text
//! F_discrete = 2 Σᵢ (Pᵢ / tan θ) · i/(⌊n_d/2⌋ + 1)
//! ```
//!
//! The sum runs over half the ribbons (plus the central one); symmetry
//! doubles it. Ribbon `i` sits at parametric station `tᵢ = i/(⌊n_d/2⌋+1)`
//! along the link, which sets both its moment arm and its size: rest
//! length `lᵢ = 2r·tᵢ`, gap `d_y,ᵢ = 2b·tᵢ`. The central ribbon (`tᵢ = 1`)
//! is the longest and, compressing as `1/tᵢ²`, pushes back the least.

use crate::boundary::{boundary_state, BoundaryState};
use crate::error::{Error, Result};
use crate::sheet::SheetSpec;

/// One discrete ribbon buckled into a catenary arch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RibbonArch {
    /// 1-based ribbon index; 1 is nearest the attachment, ⌈n_d/2⌉ central.
    pub index: usize,
    /// Rest length `l_ribbon`, m.
    pub rest_length: f64,
    /// Distance between the arch endpoints `d_y`, m.
    pub endpoint_gap: f64,
    /// Catenary shape parameter `α`, m. `f64::INFINITY` marks a flat
    /// (unbuckled) ribbon, `0` a fully folded one (`endpoint_gap` = 0).
    pub shape_param: f64,
    /// Out-of-plane depth at the arch center `d_z`, m.
    pub depth: f64,
    /// Angle `φ` between the endpoint force and the sheet plane, rad.
    pub force_angle: f64,
    /// Compressive force `P` the arch exerts on the boundary, N. Zero in a
    /// plain geometry layout; filled by [`loaded_layout`].
    pub compression: f64,
}

/// The rigid-link state of the four-bar model at one displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkageState {
    /// Joint-to-joint link length `√(a² + b_eff²)`, m.
    pub link_length: f64,
    /// Link angle `θ = atan(b_eff / a)` to the pull direction, rad.
    pub link_angle: f64,
}

/// Four-bar linkage state for a boundary ellipse.
///
/// Uses `b_eff = max(b, b_min)`: the rigid attachment stops the minor
/// axis from collapsing, which also keeps `1/tan θ` finite as the solved
/// `b` heads to zero.
pub fn linkage_state(sheet: &SheetSpec, state: &BoundaryState) -> LinkageState {
    let b_eff = state.semi_minor.max(sheet.attachment_half_width());
    LinkageState {
        link_length: state.semi_major.hypot(b_eff),
        link_angle: b_eff.atan2(state.semi_major),
    }
}

/// Solve the catenary equations for `(shape_param, depth)` given the rest
/// length and endpoint gap.
///
/// `sinh(u)/u` with `u = d_y/2α` is strictly increasing, so bisection on
/// `u ∈ (0, 50]` is bracketed and cannot diverge. Two degenerate gaps are
/// closed-form limits rather than solves: a flat ribbon (`d_y = l`) has
/// `α = ∞, d_z = 0`, and a fully folded one (`d_y = 0`) is a hairpin with
/// `α = 0, d_z = l/2`.
pub fn solve_catenary(rest_length: f64, endpoint_gap: f64) -> Result<(f64, f64)> {
    if !(rest_length.is_finite() && rest_length > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "catenary rest length must be positive and finite, got {rest_length}"
        )));
    }
    if !(endpoint_gap.is_finite() && endpoint_gap >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "catenary endpoint gap must be non-negative and finite, got {endpoint_gap}"
        )));
    }
    if endpoint_gap > rest_length {
        return Err(Error::InvalidArgument(format!(
            "catenary endpoint gap {endpoint_gap} exceeds rest length {rest_length}"
        )));
    }
    if endpoint_gap == 0.0 {
        return Ok((0.0, rest_length / 2.0));
    }
    let ratio = rest_length / endpoint_gap;
    if ratio <= 1.0 {
        // Flat to within f64: sinh(u)/u → 1 only as u → 0 (α → ∞).
        return Ok((f64::INFINITY, 0.0));
    }

    // sinh(u)/u − ratio is negative at u → 0 and must turn positive by
    // u = 50 (sinh(50)/50 ≈ 2.6e19); gaps small enough to violate that are
    // caught by the d_y = 0 branch long before.
    let residual = |u: f64| u.sinh() / u - ratio;
    if residual(50.0) < 0.0 {
        return Err(Error::NumericalFailure {
            context: "catenary shape solve",
            residual: residual(50.0),
        });
    }
    let (mut lo, mut hi) = (0.0f64, 50.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    let alpha = endpoint_gap / (2.0 * u);

    // Verify the rest length is reproduced before trusting the root.
    let rebuilt = 2.0 * alpha * (endpoint_gap / (2.0 * alpha)).sinh();
    let rel = ((rebuilt - rest_length) / rest_length).abs();
    if rel > 1e-10 {
        return Err(Error::NumericalFailure {
            context: "catenary shape solve",
            residual: rel,
        });
    }

    // Positive root of d_z² + 2α d_z = (l/2)², written divisionally so a
    // huge α (nearly flat arch) doesn't cancel catastrophically.
    let half = rest_length / 2.0;
    let depth = half * half / (alpha + alpha.hypot(half));
    Ok((alpha, depth))
}

fn arch_at_station(index: usize, t: f64, radius: f64, semi_minor: f64) -> Result<RibbonArch> {
    let rest_length = 2.0 * radius * t;
    let endpoint_gap = 2.0 * semi_minor * t;
    let (shape_param, depth) = solve_catenary(rest_length, endpoint_gap)?;
    let force_angle = depth.atan2(endpoint_gap / 2.0);
    Ok(RibbonArch {
        index,
        rest_length,
        endpoint_gap,
        shape_param,
        depth,
        force_angle,
        compression: 0.0,
    })
}

fn layout_with_state(sheet: &SheetSpec, delta_x: f64) -> Result<(BoundaryState, Vec<RibbonArch>)> {
    let state = boundary_state(sheet.radius(), delta_x)?;
    let half_count = sheet.n_discrete() / 2; // ⌊n_d/2⌋
    let denom = (half_count + 1) as f64;
    let arches = (1..=half_count + 1)
        .map(|i| arch_at_station(i, i as f64 / denom, sheet.radius(), state.semi_minor))
        .collect::<Result<Vec<_>>>()?;
    Ok((state, arches))
}

/// Arch geometry for ribbons 1..⌈n_d/2⌉ at a displacement (compression
/// left at zero; see [`loaded_layout`]).
pub fn ribbon_layout(sheet: &SheetSpec, delta_x: f64) -> Result<Vec<RibbonArch>> {
    Ok(layout_with_state(sheet, delta_x)?.1)
}

/// Compressive endpoint force of one arch: `P = 3EI·d_z / ((l/2)³ sin φ)`,
/// with the flat arch returning the `P → 0` limit outright.
pub fn ribbon_compression(sheet: &SheetSpec, arch: &RibbonArch) -> f64 {
    if arch.depth == 0.0 {
        return 0.0;
    }
    let ei = sheet.ribbon_flexural_rigidity();
    let half = arch.rest_length / 2.0;
    3.0 * ei * arch.depth / (half.powi(3) * arch.force_angle.sin())
}

/// [`ribbon_layout`] with each arch's compression filled in.
pub fn loaded_layout(sheet: &SheetSpec, delta_x: f64) -> Result<Vec<RibbonArch>> {
    let mut arches = ribbon_layout(sheet, delta_x)?;
    for arch in &mut arches {
        arch.compression = ribbon_compression(sheet, arch);
    }
    Ok(arches)
}

/// Total tensile resistance of the discrete ribbons,
/// `F = 2 Σ (Pᵢ/tan θ)·tᵢ`, N.
pub fn discrete_force(sheet: &SheetSpec, delta_x: f64) -> Result<f64> {
    let (state, arches) = layout_with_state(sheet, delta_x)?;
    let link = linkage_state(sheet, &state);
    let denom = (sheet.n_discrete() / 2 + 1) as f64;
    let tan_theta = link.link_angle.tan();
    let mut total = 0.0;
    for arch in &arches {
        let p = ribbon_compression(sheet, arch);
        total += p / tan_theta * (arch.index as f64 / denom);
    }
    Ok(2.0 * total)
}

/// The same force assembled the long way round, through the four-bar
/// moment balance, as a structural cross-check on [`discrete_force`].
///
/// Each arch pushes on the link with moment arm `l_link·tᵢ`, producing a
/// clockwise moment `M_{i,2} = Pᵢ·l_link·tᵢ·cos θ` about the minor-axis
/// joint. The horizontal reaction at the major-axis joint balances the
/// total, `R_cx = Σ M_{i,2} / (l_link·sin θ)`, and the two symmetric
/// halves pull with `F = 2·R_cx`. The link length cancels; it is kept in
/// the arithmetic precisely so this route exercises the full derivation.
pub fn discrete_force_from_moments(sheet: &SheetSpec, delta_x: f64) -> Result<f64> {
    let (state, arches) = layout_with_state(sheet, delta_x)?;
    let link = linkage_state(sheet, &state);
    let denom = (sheet.n_discrete() / 2 + 1) as f64;
    let mut moment = 0.0; // M₂, N·m
    for arch in &arches {
        let p = ribbon_compression(sheet, arch);
        moment += p * link.link_length * (arch.index as f64 / denom) * link.link_angle.cos();
    }
    let reaction = moment / (link.link_length * link.link_angle.sin());
    Ok(2.0 * reaction)
}
