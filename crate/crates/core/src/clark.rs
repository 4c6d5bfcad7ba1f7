//! Aleksandrov-Clark measures of a symbol.
//!
//! For `alpha` on the circle, `tau_{phi, alpha}` is the positive measure
//! whose Poisson integral is `Re((alpha + phi) / (alpha - phi))`. Its
//! absolutely continuous density is `(1 - |phi*|^2) / |alpha - phi*|^2`, its
//! atoms sit at the points where `phi` has a finite angular derivative and
//! `phi = alpha`, with mass `1 / |phi'|`.
//!
//! Boundary values are computed once per symbol on a [`BoundaryProfile`]
//! and reused for every base point.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CirclePoint;
use crate::measure::{ArcSet, BoundaryMeasure, CantorMeasure};
use crate::quadrature::GaussLegendre;
use crate::symbol::{RadialSchedule, Symbol};

/// Node layout of the boundary profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileConfig {
    /// Cantor gaps of levels `1..=gap_levels` carry Gauss-Legendre panels;
    /// the remaining cells are represented by their midpoints.
    pub gap_levels: u32,
    /// Panels per gap half, shrinking geometrically toward the endpoints.
    pub graded_panels: u32,
    /// Longest panel, in turns.
    pub max_panel: f64,
    /// Panels on the whole circle for symbols without a singular support.
    pub uniform_panels: usize,
    /// A panel is bisected while the boundary values at its nodes travel
    /// farther than this (summed distance between consecutive nodes).
    pub max_variation: f64,
    /// Bisections allowed per initial panel.
    pub max_refine: u32,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            gap_levels: 10,
            graded_panels: 3,
            max_panel: 1.0 / 64.0,
            uniform_panels: 256,
            max_variation: 0.25,
            max_refine: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AtomDetection {
    /// Candidate points on the circle.
    pub grid: usize,
    /// Smallest reported mass.
    pub threshold: f64,
    /// Deepest radius `1 - 2^-k_max` used in refinement.
    pub k_max: u32,
    /// Refinement stops once successive estimates differ by less.
    pub tolerance: f64,
}

impl Default for AtomDetection {
    fn default() -> Self {
        AtomDetection { grid: 4096, threshold: 1e-2, k_max: 40, tolerance: 1e-7 }
    }
}

/// Radii `1 - 2^-k` with `2^(k+5)` trapezoid nodes for weak* approximants,
/// enough to keep the aliasing term `r^M` near `e^-32`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeakStarSchedule {
    pub k_min: u32,
    pub k_max: u32,
    pub tolerance: f64,
}

impl Default for WeakStarSchedule {
    fn default() -> Self {
        WeakStarSchedule { k_min: 4, k_max: 12, tolerance: 1e-4 }
    }
}

impl WeakStarSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.k_min == 0 || self.k_min > self.k_max || self.k_max > 16 || !(self.tolerance > 0.0) {
            return Err(Error::Config(format!("weak* schedule needs 1 <= k_min <= k_max <= 16, got {self:?}")));
        }
        Ok(())
    }

    pub fn radius(k: u32) -> f64 {
        1.0 - (-(k as f64)).exp2()
    }

    pub fn nodes(k: u32) -> usize {
        1usize << (k + 5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClarkConfig {
    pub profile: ProfileConfig,
    pub atoms: AtomDetection,
    pub weak_star: WeakStarSchedule,
    pub radial: RadialSchedule,
    /// Singular masses down to `-negative_clamp` are clamped to zero.
    pub negative_clamp: f64,
    /// Number of density samples in a report.
    pub density_samples: usize,
}

impl Default for ClarkConfig {
    fn default() -> Self {
        ClarkConfig {
            profile: ProfileConfig::default(),
            atoms: AtomDetection::default(),
            weak_star: WeakStarSchedule::default(),
            radial: RadialSchedule::default(),
            negative_clamp: 1e-6,
            density_samples: 64,
        }
    }
}

/// `n` equispaced base points starting at `alpha = 1`.
pub fn alpha_grid(n: usize) -> Vec<CirclePoint> {
    (0..n.max(1)).map(|k| CirclePoint::from_turns(k as f64 / n.max(1) as f64)).collect()
}

/// `(1 - |w|^2) / |alpha - w|^2` for a boundary value `w`.
fn density_at(alpha: Complex64, w: Complex64, angle: f64) -> Result<f64> {
    let den = (alpha - w).norm_sqr();
    let num = 1.0 - w.norm_sqr();
    if den == 0.0 {
        return Err(Error::Indeterminate { angle });
    }
    // unimodular boundary values carry no absolutely continuous mass
    if num <= 1e-12 {
        return Ok(0.0);
    }
    Ok(num / den)
}

/// `Re((alpha + w) / (alpha - w))` for interior `w`.
#[inline]
fn poisson_value(alpha: Complex64, w: Complex64) -> f64 {
    (1.0 - w.norm_sqr()) / (alpha - w).norm_sqr()
}

pub fn clark_total_mass(phi: &Symbol, alpha: CirclePoint) -> Result<f64> {
    let w = phi.at_zero();
    let d = (alpha.value() - w).norm_sqr();
    if d == 0.0 {
        return Err(Error::Indeterminate { angle: alpha.angle() });
    }
    Ok(poisson_value(alpha.value(), w))
}

pub fn clark_ac_density(phi: &Symbol, alpha: CirclePoint, theta: f64) -> Result<f64> {
    density_at(alpha.value(), phi.boundary_value(theta)?, theta)
}

/// Boundary values of a symbol at fixed quadrature nodes.
///
/// For symbols whose inducing measure has a Cantor part, nodes sit on the
/// Cantor gaps of levels `1..=L`, tagged with their level, on panels bisected
/// until the boundary values vary slowly across each. The mass of the
/// deeper gaps is extrapolated per level-4 block from the last level sums
/// and spread over the level-`L` cells in proportion to the density at their
/// midpoints.
#[derive(Debug, Clone)]
pub struct BoundaryProfile {
    turns: Vec<f64>,
    weights: Vec<f64>,
    levels: Vec<u8>,
    /// Index of the enclosing Cantor cell of level `block_level` for nodes
    /// deeper than that level.
    blocks: Vec<u32>,
    block_count: usize,
    values: Vec<Complex64>,
    gap_levels: u8,
}

/// Block tag of nodes that belong to no block.
const NO_BLOCK: u32 = u32::MAX;

/// Level tag of nodes on uniform panels.
const UNIFORM: u8 = 0;

impl BoundaryProfile {
    pub fn build(phi: &Symbol, cfg: &ProfileConfig, radial: &RadialSchedule) -> Result<Self> {
        if !(cfg.max_variation > 0.0) || cfg.max_refine > 30 {
            return Err(Error::Config(format!("invalid profile refinement {cfg:?}")));
        }
        let singular = phi.clark_datum().is_some_and(BoundaryMeasure::has_singular_continuous_part);
        let (panels, leftover, gap_levels) = if singular {
            let (panels, leftover) = gap_panels(cfg)?;
            (panels, leftover, cfg.gap_levels as u8)
        } else {
            (uniform_panels(cfg.uniform_panels.max(1)), Vec::new(), 0)
        };
        let rule = GaussLegendre::order8();
        let mut nodes: Vec<(f64, f64, u8, Complex64)> = Vec::new();
        for (a, b, level) in panels {
            refine_panel(phi, radial, cfg, rule, a, b, level, 0, &mut nodes)?;
        }
        for (x, w, level) in leftover {
            nodes.push((x, w, level, phi.boundary_value_with(TAU * x, radial)?));
        }
        nodes.sort_by(|p, q| p.0.total_cmp(&q.0));
        let values = nodes.iter().map(|n| n.3).collect();
        let mut turns = Vec::with_capacity(nodes.len());
        let mut weights = Vec::with_capacity(nodes.len());
        let mut levels = Vec::with_capacity(nodes.len());
        for (x, w, l, _) in nodes {
            turns.push(x);
            weights.push(w);
            levels.push(l);
        }
        let (blocks, block_count) = if gap_levels > 0 {
            let block_level = (gap_levels as u32).saturating_sub(5).min(4);
            let cells = CantorMeasure::cells(block_level);
            let blocks = turns
                .iter()
                .zip(&levels)
                .map(|(&x, &l)| {
                    if (l as u32) <= block_level {
                        return NO_BLOCK;
                    }
                    cells.partition_point(|c| c.1 < x).min(cells.len() - 1) as u32
                })
                .collect();
            (blocks, cells.len())
        } else {
            (vec![NO_BLOCK; turns.len()], 0)
        };
        Ok(BoundaryProfile { turns, weights, levels, blocks, block_count, values, gap_levels })
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    pub fn turns(&self) -> &[f64] {
        &self.turns
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Number of Cantor gap levels carrying nodes (0 for uniform panels).
    pub fn gap_levels(&self) -> u32 {
        self.gap_levels as u32
    }

    /// Node level tags: 0 for uniform panels, `n` for nodes in gaps of
    /// level `n`, `gap_levels + 1` for the unresolved cells.
    pub fn levels(&self) -> &[u8] {
        &self.levels
    }

    pub fn densities(&self, alpha: CirclePoint) -> Result<Vec<f64>> {
        let a = alpha.value();
        self.turns.iter().zip(&self.values).map(|(x, w)| density_at(a, *w, TAU * x)).collect()
    }

    /// Quadrature weights for the density of `tau_{phi, alpha}`: fixed on
    /// the resolved gaps, rescaled on the leftover cells so that they carry
    /// the extrapolated tail.
    pub fn weights_for(&self, densities: &[f64]) -> Vec<f64> {
        if self.gap_levels == 0 {
            return self.weights.clone();
        }
        let top = self.gap_levels as usize;
        let width = top + 2;
        let mut sums = vec![0.0; self.block_count * width];
        for i in 0..densities.len() {
            let b = self.blocks[i];
            if b != NO_BLOCK {
                sums[b as usize * width + self.levels[i] as usize] += densities[i] * self.weights[i];
            }
        }
        let scales: Vec<f64> = sums
            .chunks(width)
            .map(|g| {
                let leftover = g[top + 1];
                if leftover <= 0.0 {
                    return 0.0;
                }
                projected_tail(&g[top - 3..=top]) / leftover
            })
            .collect();
        self.weights
            .iter()
            .zip(self.levels.iter().zip(&self.blocks))
            .map(|(w, (l, b))| if *l as usize == top + 1 { w * scales[*b as usize] } else { *w })
            .collect()
    }

    /// `∫ tau^a dm`.
    pub fn ac_mass(&self, alpha: CirclePoint) -> Result<f64> {
        let d = self.densities(alpha)?;
        Ok(d.iter().zip(self.weights_for(&d)).map(|(d, w)| d * w).sum())
    }

    /// `(angle, weight * density)` pairs discretizing `tau^a`.
    pub fn discretized(&self, alpha: CirclePoint) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let d = self.densities(alpha)?;
        let w = self.weights_for(&d);
        Ok((self.turns.iter().map(|x| TAU * x).collect(), w, d))
    }

    /// Absolutely continuous mass of the closed arcs of normalized length
    /// `length` centered at each of `centers` (turns). A node counts when
    /// it lies in the arc, so nested arcs give nested sums.
    pub fn arc_masses(&self, alpha: CirclePoint, centers: &[f64], length: f64) -> Result<Vec<f64>> {
        Ok(self.arc_masses_multi(alpha, centers, &[length])?.remove(0))
    }

    /// [`Self::arc_masses`] for several lengths, sharing the densities.
    pub fn arc_masses_multi(&self, alpha: CirclePoint, centers: &[f64], lengths: &[f64]) -> Result<Vec<Vec<f64>>> {
        let d = self.densities(alpha)?;
        let weights = self.weights_for(&d);
        let mut prefix = Vec::with_capacity(d.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for (di, wi) in d.iter().zip(&weights) {
            acc += di * wi;
            prefix.push(acc);
        }
        // mass of the nodes with turns <= x, and with turns < x
        let upto = |x: f64| prefix[self.turns.partition_point(|&t| t <= x)];
        let below = |x: f64| prefix[self.turns.partition_point(|&t| t < x)];
        Ok(lengths
            .iter()
            .map(|length| {
                let half = 0.5 * length.clamp(0.0, 1.0);
                centers
                    .iter()
                    .map(|&c| {
                        if half >= 0.5 {
                            return acc;
                        }
                        let lo = (c - half).rem_euclid(1.0);
                        let hi = (c + half).rem_euclid(1.0);
                        if lo <= hi {
                            upto(hi) - below(lo)
                        } else {
                            upto(hi) + (acc - below(lo))
                        }
                    })
                    .collect()
            })
            .collect())
    }
}

/// Mass of the levels beyond the last, from the sums `g` of the last four
/// levels. Successive ratios are assumed to converge geometrically; the
/// density is bounded, so no ratio may exceed the gap length ratio 2/3.
fn projected_tail(g: &[f64]) -> f64 {
    const CAP: f64 = 2.0 / 3.0;
    let last = g[g.len() - 1];
    if last <= 0.0 || g.iter().any(|v| !(*v > 0.0)) {
        return 0.0;
    }
    let r: Vec<f64> = g.windows(2).map(|w| w[1] / w[0]).collect();
    let (d_prev, d) = (r[1] - r[0], r[2] - r[1]);
    let q = if d_prev != 0.0 { d / d_prev } else { 0.0 };
    let mut ratio = r[2].min(CAP);
    if !(0.0..1.0).contains(&q) {
        return last * ratio / (1.0 - ratio);
    }
    let mut step = d;
    let mut term = last;
    let mut tail = 0.0;
    for _ in 0..4000 {
        step *= q;
        ratio = (ratio + step).clamp(0.0, CAP);
        term *= ratio;
        tail += term;
        if term <= 1e-17 * tail {
            break;
        }
    }
    tail
}

fn uniform_panels(panels: usize) -> Vec<(f64, f64, u8)> {
    (0..panels).map(|p| (p as f64 / panels as f64, (p + 1) as f64 / panels as f64, UNIFORM)).collect()
}

/// Gauss-Legendre nodes on `[a, b]` with boundary values, bisecting while the
/// boundary values vary too much across the panel.
#[allow(clippy::too_many_arguments)]
fn refine_panel(
    phi: &Symbol,
    radial: &RadialSchedule,
    cfg: &ProfileConfig,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    level: u8,
    depth: u32,
    out: &mut Vec<(f64, f64, u8, Complex64)>,
) -> Result<()> {
    let mut local = Vec::with_capacity(rule.len());
    for (x, w) in rule.mapped(a, b) {
        local.push((x, w, level, phi.boundary_value_with(TAU * x, radial)?));
    }
    let variation: f64 = local.windows(2).map(|p| (p[1].3 - p[0].3).norm()).sum();
    if variation > cfg.max_variation && depth < cfg.max_refine {
        let m = 0.5 * (a + b);
        refine_panel(phi, radial, cfg, rule, a, m, level, depth + 1, out)?;
        return refine_panel(phi, radial, cfg, rule, m, b, level, depth + 1, out);
    }
    out.extend(local);
    Ok(())
}

type Panels = Vec<(f64, f64, u8)>;

/// Graded panels on the Cantor gaps of levels `1..=L`, plus one midpoint
/// node `(x, weight, L + 1)` per level-`L` cell.
fn gap_panels(cfg: &ProfileConfig) -> Result<(Panels, Panels)> {
    if !(5..=16).contains(&cfg.gap_levels) || cfg.graded_panels == 0 || !(cfg.max_panel > 0.0) {
        return Err(Error::Config(format!("invalid profile configuration {cfg:?}")));
    }
    let mut panels = Vec::new();
    for level in 1..=cfg.gap_levels {
        for (c, d) in CantorMeasure::cells(level - 1) {
            let third = (d - c) / 3.0;
            let (a, b) = (c + third, c + 2.0 * third);
            let half = 0.5 * (b - a);
            let mut breaks = vec![a];
            for k in (1..=cfg.graded_panels).rev() {
                breaks.push(a + half * 0.25f64.powi(k as i32));
            }
            breaks.push(a + half);
            for k in 1..=cfg.graded_panels {
                breaks.push(b - half * 0.25f64.powi(k as i32));
            }
            breaks.push(b);
            for w in breaks.windows(2) {
                let pieces = ((w[1] - w[0]) / cfg.max_panel).ceil().max(1.0) as usize;
                let h = (w[1] - w[0]) / pieces as f64;
                panels.extend((0..pieces).map(|i| (w[0] + i as f64 * h, w[0] + (i + 1) as f64 * h, level as u8)));
            }
        }
    }
    let leftover = CantorMeasure::cells(cfg.gap_levels)
        .into_iter()
        .map(|(a, b)| (0.5 * (a + b), b - a, cfg.gap_levels as u8 + 1))
        .collect();
    Ok((panels, leftover))
}

/// An atom of a Clark measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomFinding {
    pub location: CirclePoint,
    pub mass: f64,
    /// `|phi'(location)| = 1 / mass`.
    pub angular_derivative: f64,
    /// Deepest radius used.
    pub radius: f64,
}

/// `((1 - r) / (1 + r)) * u(r e^{i theta})`, whose radial limit is the
/// mass of `tau_{phi, alpha}` at `e^{i theta}`.
fn atom_statistic(phi: &Symbol, alpha: Complex64, r: f64, theta: f64) -> Result<f64> {
    let w = phi.eval_raw(Complex64::from_polar(r, theta))?;
    Ok((1.0 - r) / (1.0 + r) * poisson_value(alpha, w))
}

/// Golden-section maximization of `f` on `[lo, hi]`.
fn maximize<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64, iterations: usize) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..iterations {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Finds atoms of `tau_{phi, alpha}`: the statistic is screened on a grid
/// at radius `1 - 2pi/grid`, runs of firing candidates are merged, and each
/// run is refined by local maximization on radii `1 - 2^-k`.
pub fn detect_atoms(phi: &Symbol, alpha: CirclePoint, cfg: &AtomDetection) -> Result<Vec<AtomFinding>> {
    if cfg.grid < 8 || !(cfg.threshold > 0.0) || cfg.k_max > 52 {
        return Err(Error::Config(format!("invalid atom detection settings {cfg:?}")));
    }
    if phi.is_constant() {
        return Ok(Vec::new());
    }
    let a = alpha.value();
    let n = cfg.grid;
    let spacing = TAU / n as f64;
    let r0 = 1.0 - spacing;
    let stats = (0..n).map(|j| atom_statistic(phi, a, r0, j as f64 * spacing)).collect::<Result<Vec<_>>>()?;
    let fire = 0.5 * cfg.threshold;
    let fired: Vec<bool> = stats.iter().map(|&s| s > fire).collect();
    if fired.iter().all(|&f| f) {
        log::warn!("every candidate fired at alpha = {}; the grid cannot separate atoms", alpha.angle());
    }
    // runs of consecutive firing indices, with wrap-around
    let start = fired.iter().position(|&f| !f).unwrap_or_default();
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for step in 0..n {
        let j = (start + step) % n;
        if fired[j] {
            current.push(j);
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        runs.push(current);
    }
    let k0 = (1.0 / (1.0 - r0)).log2().ceil() as u32 + 1;
    let mut findings: Vec<AtomFinding> = Vec::new();
    for run in runs {
        if run.len() > 1 {
            log::debug!("{} adjacent candidates fired near angle {}", run.len(), run[0] as f64 * spacing);
        }
        let best = *run.iter().max_by(|&&i, &&j| stats[i].total_cmp(&stats[j])).expect("nonempty run");
        let mut theta = best as f64 * spacing;
        let mut width = 2.0 * spacing;
        let mut prev = stats[best];
        let mut found = None;
        for k in k0..=cfg.k_max.max(k0) {
            let r = 1.0 - (-(k as f64)).exp2();
            let (t, s) = maximize(|x| atom_statistic(phi, a, r, x), theta - width, theta + width, 40)?;
            theta = t;
            width = (4.0 * (1.0 - r)).max(width * 0.25).min(width);
            if s < fire && s <= prev {
                break;
            }
            let change = (s - prev).abs();
            prev = s;
            if change < cfg.tolerance {
                found = Some((theta, s, r));
                break;
            }
            if k == cfg.k_max {
                log::warn!("atom refinement near angle {theta} stopped at k = {k} with change {change:e}");
                found = Some((theta, s, r));
            }
        }
        if let Some((theta, mass, radius)) = found {
            if mass > cfg.threshold {
                if (mass - cfg.threshold).abs() < 0.1 * cfg.threshold {
                    log::warn!("atom mass {mass} at angle {theta} is marginal against threshold {}", cfg.threshold);
                }
                let location = CirclePoint::from_angle(theta);
                match findings.iter_mut().find(|f| angular_distance(f.location.angle(), theta) < 1e-6) {
                    Some(f) if f.mass < mass => {
                        *f = AtomFinding { location, mass, angular_derivative: 1.0 / mass, radius }
                    }
                    Some(_) => {}
                    None => findings.push(AtomFinding { location, mass, angular_derivative: 1.0 / mass, radius }),
                }
            }
        }
    }
    findings.sort_by(|p, q| p.location.angle().total_cmp(&q.location.angle()));
    Ok(findings)
}

/// Radial limit of the atom statistic at a given point, for comparing the
/// mass two symbols put at the same location.
pub fn atom_mass_at(phi: &Symbol, alpha: CirclePoint, zeta: CirclePoint, cfg: &AtomDetection) -> Result<f64> {
    let a = alpha.value();
    let mut prev = f64::NAN;
    let mut change = f64::INFINITY;
    for k in 8..=cfg.k_max.max(9) {
        let r = 1.0 - (-(k as f64)).exp2();
        let s = atom_statistic(phi, a, r, zeta.angle())?;
        change = (s - prev).abs();
        if change < cfg.tolerance || s < 1e-3 * cfg.tolerance {
            return Ok(s);
        }
        prev = s;
    }
    Err(Error::NonConvergence { what: "atom mass at a point", last_change: change })
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Density samples of a report, as parallel arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySamples {
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClarkDiagnostics {
    pub profile_nodes: usize,
    pub gap_levels: Option<u32>,
    pub detection_grid: usize,
    pub detection_threshold: f64,
    /// Deepest radius reached by atom refinement.
    pub deepest_radius: Option<f64>,
}

/// The Lebesgue decomposition data of one Clark measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClarkReport {
    pub symbol: String,
    pub alpha: CirclePoint,
    pub total_mass: f64,
    pub ac_mass: f64,
    pub singular_mass: f64,
    pub atoms: Vec<AtomFinding>,
    pub density_samples: DensitySamples,
    pub diagnostics: ClarkDiagnostics,
}

impl ClarkReport {
    /// Atoms plus a tabulated absolutely continuous part; singular mass not
    /// carried by atoms is dropped.
    pub fn reconstructed_measure(&self, profile: &BoundaryProfile) -> Result<BoundaryMeasure> {
        let (angles, weights, d) = profile.discretized(self.alpha)?;
        let ac = BoundaryMeasure::tabulated(angles, weights, d)?;
        Ok(ac.add(&BoundaryMeasure::atoms_from(self.atoms.iter().map(|f| (f.location, f.mass)))))
    }
}

/// Clark measures of one symbol at arbitrary base points, sharing a
/// boundary profile.
#[derive(Debug, Clone)]
pub struct ClarkFamily<'a> {
    phi: &'a Symbol,
    cfg: ClarkConfig,
    profile: BoundaryProfile,
}

impl<'a> ClarkFamily<'a> {
    pub fn new(phi: &'a Symbol, cfg: ClarkConfig) -> Result<Self> {
        let profile = BoundaryProfile::build(phi, &cfg.profile, &cfg.radial)?;
        Ok(ClarkFamily { phi, cfg, profile })
    }

    pub fn symbol(&self) -> &Symbol {
        self.phi
    }

    pub fn config(&self) -> &ClarkConfig {
        &self.cfg
    }

    pub fn profile(&self) -> &BoundaryProfile {
        &self.profile
    }

    pub fn total_mass(&self, alpha: CirclePoint) -> Result<f64> {
        clark_total_mass(self.phi, alpha)
    }

    pub fn ac_mass(&self, alpha: CirclePoint) -> Result<f64> {
        self.profile.ac_mass(alpha)
    }

    /// `total - ∫ tau^a dm`, clamped at zero; an error when the deficit is
    /// more negative than the configured clamp.
    pub fn singular_mass(&self, alpha: CirclePoint) -> Result<f64> {
        let total = self.total_mass(alpha)?;
        let ac = self.ac_mass(alpha)?;
        let s = total - ac;
        if s < -self.cfg.negative_clamp {
            return Err(Error::Resolution { requested: self.cfg.negative_clamp, achieved: -s });
        }
        Ok(s.clamp(0.0, total))
    }

    /// Mass of the arcs of length `length` centered at `centers` (turns).
    /// At `alpha = 1` a Herglotz symbol's Clark measure is its inducing
    /// measure and is used exactly; elsewhere the absolutely continuous
    /// part is summed on the profile.
    pub fn arc_masses(&self, alpha: CirclePoint, centers: &[f64], length: f64) -> Result<Vec<f64>> {
        Ok(self.arc_masses_multi(alpha, centers, &[length])?.remove(0))
    }

    /// [`Self::arc_masses`] for several lengths.
    pub fn arc_masses_multi(&self, alpha: CirclePoint, centers: &[f64], lengths: &[f64]) -> Result<Vec<Vec<f64>>> {
        if let (Some(tau), true) = (self.phi.clark_datum(), alpha.angle() == 0.0) {
            return Ok(lengths
                .iter()
                .map(|&length| {
                    centers
                        .iter()
                        .map(|&c| tau.arc_mass(&crate::measure::Arc::centered(CirclePoint::from_turns(c), length)))
                        .collect()
                })
                .collect());
        }
        self.profile.arc_masses_multi(alpha, centers, lengths)
    }

    pub fn report(&self, alpha: CirclePoint) -> Result<ClarkReport> {
        let total_mass = self.total_mass(alpha)?;
        let ac_mass = self.ac_mass(alpha)?;
        let singular_mass = self.singular_mass(alpha)?;
        let atoms = detect_atoms(self.phi, alpha, &self.cfg.atoms)?;
        let atom_total: f64 = atoms.iter().map(|a| a.mass).sum();
        if atom_total > singular_mass + 1e-3 {
            log::warn!("atom masses {atom_total} exceed the singular mass {singular_mass}");
        }
        let count = self.cfg.density_samples.max(1);
        let step = (self.profile.len() / count).max(1);
        let mut angles = Vec::with_capacity(count);
        let mut values = Vec::with_capacity(count);
        let a = alpha.value();
        for i in (step / 2..self.profile.len()).step_by(step).take(count) {
            let theta = TAU * self.profile.turns[i];
            angles.push(theta);
            values.push(density_at(a, self.profile.values[i], theta)?);
        }
        let singular = self.phi.clark_datum().is_some_and(BoundaryMeasure::has_singular_continuous_part);
        Ok(ClarkReport {
            symbol: self.phi.name(),
            alpha,
            total_mass,
            ac_mass,
            singular_mass,
            diagnostics: ClarkDiagnostics {
                profile_nodes: self.profile.len(),
                gap_levels: singular.then_some(self.cfg.profile.gap_levels),
                detection_grid: self.cfg.atoms.grid,
                detection_threshold: self.cfg.atoms.threshold,
                deepest_radius: atoms.iter().map(|a| a.radius).reduce(f64::max),
            },
            atoms,
            density_samples: DensitySamples { angles, values },
        })
    }

    /// `max_alpha sqrt(singular mass)` over the grid. Base points whose
    /// quadrature fails are skipped with a warning.
    pub fn essential_norm(&self, alphas: &[CirclePoint]) -> Result<EssentialNormEstimate> {
        if alphas.is_empty() {
            return Err(Error::InvalidParameter("empty alpha grid".into()));
        }
        let mut best = (-1.0, CirclePoint::one());
        let mut skipped = Vec::new();
        let mut masses = Vec::with_capacity(alphas.len());
        for &alpha in alphas {
            match self.singular_mass(alpha) {
                Ok(s) => {
                    masses.push((alpha, s));
                    if s > best.0 {
                        best = (s, alpha);
                    }
                }
                Err(e) => {
                    log::warn!("skipping alpha = {}: {e}", alpha.angle());
                    skipped.push(alpha);
                }
            }
        }
        if best.0 < 0.0 {
            return Err(Error::Resolution { requested: self.cfg.negative_clamp, achieved: f64::NAN });
        }
        Ok(EssentialNormEstimate { value: best.0.sqrt(), alpha: best.1, singular_masses: masses, skipped })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssentialNormEstimate {
    pub value: f64,
    /// Base point attaining the maximum.
    pub alpha: CirclePoint,
    pub singular_masses: Vec<(CirclePoint, f64)>,
    pub skipped: Vec<CirclePoint>,
}

pub fn clark_singular_mass(phi: &Symbol, alpha: CirclePoint, cfg: &ClarkConfig) -> Result<f64> {
    ClarkFamily::new(phi, *cfg)?.singular_mass(alpha)
}

pub fn clark_report(phi: &Symbol, alpha: CirclePoint, cfg: &ClarkConfig) -> Result<ClarkReport> {
    ClarkFamily::new(phi, *cfg)?.report(alpha)
}

pub fn essential_norm_estimate(
    phi: &Symbol,
    alphas: &[CirclePoint],
    cfg: &ClarkConfig,
) -> Result<EssentialNormEstimate> {
    ClarkFamily::new(phi, *cfg)?.essential_norm(alphas)
}

/// Samples `phi(r_k e^{2 pi i j / M_k})` for the weak* schedule.
#[derive(Debug, Clone)]
pub struct RadialSamples {
    levels: Vec<(u32, Vec<Complex64>)>,
}

impl RadialSamples {
    pub fn new(phi: &Symbol, schedule: &WeakStarSchedule) -> Result<Self> {
        schedule.validate()?;
        let levels = (schedule.k_min..=schedule.k_max)
            .map(|k| Ok((k, phi.circle_samples(WeakStarSchedule::nodes(k), WeakStarSchedule::radius(k))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(RadialSamples { levels })
    }

    fn level(&self, k: u32) -> Option<&[Complex64]> {
        self.levels.iter().find(|(kk, _)| *kk == k).map(|(_, v)| v.as_slice())
    }
}

/// Weight of each trapezoid node: the length of `E` within the node's cell.
fn node_weights(set: &ArcSet, nodes: usize) -> Vec<(usize, f64)> {
    let h = 1.0 / nodes as f64;
    (0..nodes)
        .filter_map(|j| {
            let c = j as f64 * h;
            let (lo, hi) = (c - 0.5 * h, c + 0.5 * h);
            let w = if lo < 0.0 {
                set.overlap_length(0.0, hi) + set.overlap_length(1.0 + lo, 1.0)
            } else {
                set.overlap_length(lo, hi.min(1.0))
            };
            (w > 0.0).then_some((j, w))
        })
        .collect()
}

/// Outcome of a supremum over base points of weak* approximants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakStarEstimate {
    pub value: f64,
    pub alpha: CirclePoint,
    pub radius: f64,
    pub last_change: f64,
    pub converged: bool,
    /// Set when the estimates oscillate along the schedule, which suggests
    /// mass on the boundary of the set.
    pub boundary_mass_warning: bool,
    pub history: Vec<f64>,
}

fn weak_star_sup<F>(
    schedule: &WeakStarSchedule,
    alphas: &[CirclePoint],
    set: &ArcSet,
    mut level: F,
) -> Result<WeakStarEstimate>
where
    F: FnMut(u32, Complex64, &[(usize, f64)]) -> f64,
{
    schedule.validate()?;
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("empty alpha grid".into()));
    }
    let mut history: Vec<f64> = Vec::new();
    let mut best_alpha = alphas[0];
    let mut radius = 0.0;
    let mut change = f64::INFINITY;
    let mut converged = false;
    for k in schedule.k_min..=schedule.k_max {
        let weights = node_weights(set, WeakStarSchedule::nodes(k));
        let mut best = f64::NEG_INFINITY;
        for &alpha in alphas {
            let v = level(k, alpha.value(), &weights);
            if v > best {
                best = v;
                best_alpha = alpha;
            }
        }
        radius = WeakStarSchedule::radius(k);
        if let Some(&last) = history.last() {
            change = (best - last).abs();
        }
        history.push(best);
        if change < schedule.tolerance * best.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    let diffs: Vec<f64> = history.windows(2).map(|w| w[1] - w[0]).collect();
    let sign_changes = diffs.windows(2).filter(|d| d[0] * d[1] < 0.0).count();
    let boundary_mass_warning = !converged && sign_changes >= 2;
    if boundary_mass_warning {
        log::warn!("weak* estimates oscillate along the schedule; the set may carry boundary mass");
    }
    Ok(WeakStarEstimate {
        value: *history.last().expect("schedule has a level"),
        alpha: best_alpha,
        radius,
        last_change: change,
        converged,
        boundary_mass_warning,
        history,
    })
}

/// `sup_alpha tau_{phi, alpha}(E)` through `∫_E (1 - |phi_r|^2) / |alpha - phi_r|^2 dm`.
pub fn restricted_norm(
    phi: &Symbol,
    set: &ArcSet,
    alphas: &[CirclePoint],
    schedule: &WeakStarSchedule,
) -> Result<WeakStarEstimate> {
    let samples = RadialSamples::new(phi, schedule)?;
    restricted_norm_from(&samples, set, alphas, schedule)
}

pub fn restricted_norm_from(
    samples: &RadialSamples,
    set: &ArcSet,
    alphas: &[CirclePoint],
    schedule: &WeakStarSchedule,
) -> Result<WeakStarEstimate> {
    weak_star_sup(schedule, alphas, set, |k, a, weights| {
        let v = samples.level(k).expect("sampled level");
        weights.iter().map(|&(j, w)| w * poisson_value(a, v[j])).sum()
    })
}

/// `sup_alpha |tau_{phi, alpha} - tau_{psi, alpha}|(E)` through radial
/// approximants.
pub fn clark_difference_on_set(
    phi: &Symbol,
    psi: &Symbol,
    set: &ArcSet,
    alphas: &[CirclePoint],
    schedule: &WeakStarSchedule,
) -> Result<WeakStarEstimate> {
    let sp = RadialSamples::new(phi, schedule)?;
    let sq = RadialSamples::new(psi, schedule)?;
    clark_difference_from(&sp, &sq, set, alphas, schedule)
}

pub fn clark_difference_from(
    phi: &RadialSamples,
    psi: &RadialSamples,
    set: &ArcSet,
    alphas: &[CirclePoint],
    schedule: &WeakStarSchedule,
) -> Result<WeakStarEstimate> {
    weak_star_sup(schedule, alphas, set, |k, a, weights| {
        let (u, v) = (phi.level(k).expect("sampled level"), psi.level(k).expect("sampled level"));
        weights.iter().map(|&(j, w)| w * (poisson_value(a, u[j]) - poisson_value(a, v[j])).abs()).sum()
    })
}

/// `sum_j m_j tau_{phi, alpha_j}`, represented by atoms and a tabulated
/// density. Singular mass not found in atoms is reported separately.
#[derive(Debug, Clone, PartialEq)]
pub struct Pushforward {
    pub measure: BoundaryMeasure,
    pub residual_singular_mass: f64,
}

pub fn pushforward_atomic(phi: &Symbol, mu: &[(CirclePoint, f64)], cfg: &ClarkConfig) -> Result<Pushforward> {
    if let Some((_, m)) = mu.iter().find(|(_, m)| !(m.is_finite() && *m >= 0.0)) {
        return Err(Error::InvalidParameter(format!("atomic mass {m} must be finite and nonnegative")));
    }
    let family = ClarkFamily::new(phi, *cfg)?;
    let profile = family.profile();
    // node masses, tabulated against unit weights
    let mut node_mass = vec![0.0; profile.len()];
    let mut atoms = Vec::new();
    let mut residual = 0.0;
    for &(alpha, m) in mu {
        let (_, weights, d) = profile.discretized(alpha)?;
        for ((acc, d), w) in node_mass.iter_mut().zip(d).zip(weights) {
            *acc += m * d * w;
        }
        let found = detect_atoms(phi, alpha, &cfg.atoms)?;
        let atom_mass: f64 = found.iter().map(|a| a.mass).sum();
        residual += m * (family.singular_mass(alpha)? - atom_mass).max(0.0);
        atoms.extend(found.into_iter().map(|a| (a.location, m * a.mass)));
    }
    let angles = profile.turns().iter().map(|x| TAU * x).collect();
    let measure = BoundaryMeasure::tabulated(angles, vec![1.0; profile.len()], node_mass)?
        .add(&BoundaryMeasure::atoms_from(atoms));
    Ok(Pushforward { measure, residual_singular_mass: residual })
}
