//! The middle-thirds Cantor measure pushed to the circle by `x -> e^{2 pi i x}`.
//!
//! Integrals against the measure (or a restriction of it to a finite union of
//! arcs) walk the ternary cell tree. A generation-`k` cell carries mass
//! `2^-k`; once the cell is small relative to its distance from the
//! evaluation point it is replaced by a two-node rule placed one standard
//! deviation (`h / (2 sqrt 2)`) either side of the cell center. Within a cell
//! the Cantor measure is symmetric with variance `h^2 / 8`, so the rule is
//! exact for cubic polynomials and its error decays like `(h / d)^4`.

use std::f64::consts::{PI, TAU};
use std::ops::{AddAssign, Mul};
use std::sync::{Arc as Shared, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::arc::ArcSet;
use crate::error::{Error, Result};

/// Deepest ternary level visited by the quadrature (`3^-34 ~ 6e-17`).
pub const QUADRATURE_MAX_DEPTH: u32 = 34;

/// Cells down to this depth are precomputed once per measure.
const CACHED_DEPTH: u32 = 12;

const NODE_OFFSET: f64 = 0.353_553_390_593_273_8;

/// The Cantor function (devil's staircase) on `[0, 1]`.
///
/// The input double is a dyadic rational, so its ternary digits are
/// generated exactly with integer arithmetic; 64 digits are used.
pub fn cantor_cdf(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain { value: x, domain: "[0, 1]" });
    }
    Ok(cdf(x))
}

pub(crate) fn cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    // x = mantissa * 2^-shift exactly
    let bits = x.to_bits();
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let (mantissa, shift) = if exponent == 0 {
        (bits & ((1 << 52) - 1), 1074i64)
    } else {
        ((bits & ((1 << 52) - 1)) | (1 << 52), 1075 - exponent)
    };
    if shift > 120 {
        return cdf_float(x);
    }
    let shift = shift as u32;
    let mask: u128 = (1u128 << shift) - 1;
    let mut n = mantissa as u128;
    let mut value = 0.0;
    let mut scale = 0.5;
    for _ in 0..64 {
        n *= 3;
        let digit = n >> shift;
        n &= mask;
        match digit {
            0 => {}
            1 => return value + scale,
            _ => value += scale,
        }
        scale *= 0.5;
    }
    value
}

fn cdf_float(mut x: f64) -> f64 {
    let mut value = 0.0;
    let mut scale = 0.5;
    for _ in 0..64 {
        x *= 3.0;
        if x >= 2.0 {
            value += scale;
            x -= 2.0;
        } else if x >= 1.0 {
            return value + scale;
        }
        scale *= 0.5;
    }
    value
}

/// Distance on the circle, in turns, from `x` to the interval `[lo, hi]`.
pub(crate) fn circular_distance_to_interval(x: f64, lo: f64, hi: f64) -> f64 {
    let x = x.rem_euclid(1.0);
    if lo <= x && x <= hi {
        return 0.0;
    }
    (lo - x).rem_euclid(1.0).min((x - hi).rem_euclid(1.0))
}

/// The Cantor measure on the circle, with a sampling resolution.
///
/// `generation` sets how finely boundary sample grids resolve the
/// complement of the support: gap midpoints down to this level are used as
/// evaluation points, each at distance at least `3^-generation / 2` turns
/// from the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorMeasure {
    pub generation: u32,
}

impl Default for CantorMeasure {
    fn default() -> Self {
        CantorMeasure { generation: 12 }
    }
}

impl CantorMeasure {
    pub fn new(generation: u32) -> Result<Self> {
        if !(1..=30).contains(&generation) {
            return Err(Error::InvalidParameter(format!("Cantor generation {generation} outside 1..=30")));
        }
        Ok(CantorMeasure { generation })
    }

    /// Mass of the arc `[lo, hi]` given in turns, `0 <= lo <= hi <= 1`.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> f64 {
        (cdf(hi) - cdf(lo)).max(0.0)
    }

    /// Removed open intervals of levels `1..=level`, sorted by position.
    pub fn gaps(level: u32) -> Vec<(f64, f64)> {
        fn walk(a: f64, h: f64, depth: u32, level: u32, out: &mut Vec<(f64, f64)>) {
            if depth >= level {
                return;
            }
            let third = h / 3.0;
            walk(a, third, depth + 1, level, out);
            out.push((a + third, a + 2.0 * third));
            walk(a + 2.0 * third, third, depth + 1, level, out);
        }
        let mut out = Vec::with_capacity((1usize << level.min(30)) - 1);
        walk(0.0, 1.0, 0, level, &mut out);
        out
    }

    /// The `2^level` closed cells of the given level, sorted by position.
    pub fn cells(level: u32) -> Vec<(f64, f64)> {
        let mut cells = vec![(0.0, 1.0)];
        for _ in 0..level {
            cells = cells
                .iter()
                .flat_map(|&(a, b)| {
                    let h = (b - a) / 3.0;
                    [(a, a + h), (b - h, b)]
                })
                .collect();
        }
        cells
    }

    /// Midpoints of the gaps of levels `1..=generation`.
    pub fn gap_midpoints(&self) -> Vec<f64> {
        Self::gaps(self.generation).into_iter().map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Circular distance in turns from `x` to the Cantor set.
    pub fn support_distance(&self, x: f64) -> f64 {
        CantorPart::new(1.0, ArcSet::full(), *self).support_distance(x)
    }
}

/// `weight * chi_window * lambda` for the Cantor measure `lambda`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorPart {
    weight: f64,
    window: ArcSet,
    #[serde(default)]
    generation: CantorMeasure,
    #[serde(skip)]
    tree: OnceLock<Shared<CellTree>>,
}

impl std::fmt::Debug for CantorPart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CantorPart")
            .field("weight", &self.weight)
            .field("window", &self.window)
            .field("generation", &self.generation.generation)
            .finish()
    }
}

impl PartialEq for CantorPart {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight && self.window == other.window && self.generation == other.generation
    }
}

/// Accumulated integral plus the mass that could not be resolved at the
/// maximum depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSum<T> {
    pub value: T,
    pub unresolved_mass: f64,
}

#[derive(Debug)]
struct Cell {
    a: f64,
    h: f64,
    depth: u32,
    mass: f64,
    full: bool,
    center: Complex64,
    nodes: [Complex64; 2],
    children: [u32; 2],
}

const NO_CHILD: u32 = u32::MAX;

#[derive(Debug)]
struct CellTree {
    cells: Vec<Cell>,
}

#[derive(Clone, Copy)]
enum Work {
    Cached(u32),
    Fresh { a: f64, h: f64, depth: u32, mass: f64, full: bool },
}

impl CantorPart {
    pub fn new(weight: f64, window: ArcSet, generation: CantorMeasure) -> Self {
        CantorPart { weight, window, generation, tree: OnceLock::new() }
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn window(&self) -> &ArcSet {
        &self.window
    }

    pub fn generation(&self) -> CantorMeasure {
        self.generation
    }

    pub fn total_mass(&self) -> f64 {
        self.window_mass(0.0, 1.0)
    }

    /// Mass of `[lo, hi]` (turns inside `[0, 1]`).
    pub fn window_mass(&self, lo: f64, hi: f64) -> f64 {
        let raw: f64 = self
            .window
            .intervals()
            .iter()
            .map(|&(a, b)| {
                let (l, h) = (a.max(lo), b.min(hi));
                if l < h {
                    cdf(h) - cdf(l)
                } else {
                    0.0
                }
            })
            .sum();
        self.weight * raw.max(0.0)
    }

    pub fn set_mass(&self, set: &ArcSet) -> f64 {
        set.intervals().iter().map(|&(lo, hi)| self.window_mass(lo, hi)).sum()
    }

    pub fn restrict(&self, set: &ArcSet) -> CantorPart {
        CantorPart::new(self.weight, self.window.intersect(set), self.generation)
    }

    pub fn scaled(&self, factor: f64) -> CantorPart {
        CantorPart::new(self.weight * factor, self.window.clone(), self.generation)
    }

    /// Window status of the cell `[a, a + h]`: `None` when it carries no
    /// mass, otherwise `(fully covered, mass)`.
    fn cell_status(&self, a: f64, h: f64, depth: u32) -> Option<(bool, f64)> {
        let b = a + h;
        let full = self.window.intervals().iter().any(|&(lo, hi)| lo <= a && b <= hi);
        if full {
            return Some((true, self.weight * 0.5f64.powi(depth as i32)));
        }
        let mass = self.window_mass(a, b);
        (mass > 0.0).then_some((false, mass))
    }

    fn tree(&self) -> &CellTree {
        self.tree.get_or_init(|| Shared::new(self.build_tree()))
    }

    fn build_tree(&self) -> CellTree {
        let mut cells = Vec::new();
        if let Some((full, mass)) = self.cell_status(0.0, 1.0, 0) {
            self.push_cell(&mut cells, 0.0, 1.0, 0, full, mass);
        }
        CellTree { cells }
    }

    fn push_cell(&self, cells: &mut Vec<Cell>, a: f64, h: f64, depth: u32, full: bool, mass: f64) -> u32 {
        let index = cells.len();
        cells.push(cell(a, h, depth, full, mass));
        let mut children = [NO_CHILD; 2];
        if depth < CACHED_DEPTH {
            for (slot, start) in [a, a + 2.0 * h / 3.0].into_iter().enumerate() {
                let child = if full { Some((true, 0.5 * mass)) } else { self.cell_status(start, h / 3.0, depth + 1) };
                if let Some((f, m)) = child {
                    children[slot] = self.push_cell(cells, start, h / 3.0, depth + 1, f, m);
                }
            }
        }
        cells[index].children = children;
        index as u32
    }

    /// `∫ kernel(zeta) d(this part)(zeta)` for an evaluation point `target`
    /// (inside the disc or on the circle off the support).
    ///
    /// A fully covered cell of angular radius `pi h` is accepted once
    /// `pi h <= ratio * (|target - center| - pi h)`.
    pub fn integrate<T, K>(&self, target: Complex64, ratio: f64, max_depth: u32, mut kernel: K) -> CellSum<T>
    where
        T: Copy + Default + AddAssign + Mul<f64, Output = T>,
        K: FnMut(Complex64) -> T,
    {
        let mut value = T::default();
        let mut unresolved = 0.0;
        let tree = self.tree();
        if tree.cells.is_empty() {
            return CellSum { value, unresolved_mass: 0.0 };
        }
        let mut stack = Vec::with_capacity(64);
        stack.push(Work::Cached(0));
        while let Some(work) = stack.pop() {
            let (a, h, depth, mass, full, cached) = match work {
                Work::Cached(i) => {
                    let c = &tree.cells[i as usize];
                    (c.a, c.h, c.depth, c.mass, c.full, Some(c))
                }
                Work::Fresh { a, h, depth, mass, full } => (a, h, depth, mass, full, None),
            };
            let radius = PI * h;
            let center = cached.map_or_else(|| Complex64::cis(TAU * (a + 0.5 * h)), |c| c.center);
            let clearance = (target - center).norm() - radius;
            let acceptable = clearance > 0.0 && radius <= ratio * clearance;
            if full && acceptable {
                let nodes = cached.map_or_else(|| cell_nodes(a, h), |c| c.nodes);
                value += kernel(nodes[0]) * (0.5 * mass);
                value += kernel(nodes[1]) * (0.5 * mass);
                continue;
            }
            if depth >= max_depth {
                let x = if full { a + 0.5 * h } else { self.overlap_midpoint(a, h) };
                value += kernel(Complex64::cis(TAU * x)) * mass;
                if !acceptable {
                    unresolved += mass;
                }
                continue;
            }
            match cached {
                Some(c) if c.depth < CACHED_DEPTH => {
                    for &child in c.children.iter().rev() {
                        if child != NO_CHILD {
                            stack.push(Work::Cached(child));
                        }
                    }
                }
                _ => {
                    let third = h / 3.0;
                    for start in [a + 2.0 * third, a] {
                        let status =
                            if full { Some((true, 0.5 * mass)) } else { self.cell_status(start, third, depth + 1) };
                        if let Some((f, m)) = status {
                            stack.push(Work::Fresh { a: start, h: third, depth: depth + 1, mass: m, full: f });
                        }
                    }
                }
            }
        }
        CellSum { value, unresolved_mass: unresolved }
    }

    fn overlap_midpoint(&self, a: f64, h: f64) -> f64 {
        let b = a + h;
        self.window
            .intervals()
            .iter()
            .find_map(|&(lo, hi)| {
                let (l, r) = (lo.max(a), hi.min(b));
                (l <= r).then_some(0.5 * (l + r))
            })
            .unwrap_or(a + 0.5 * h)
    }

    /// Circular distance in turns from `x` to the support of this part.
    pub fn support_distance(&self, x: f64) -> f64 {
        let mut best = f64::INFINITY;
        let mut stack: Vec<(f64, f64, u32, bool)> = Vec::with_capacity(128);
        if let Some((full, _)) = self.cell_status(0.0, 1.0, 0) {
            stack.push((0.0, 1.0, 0, full));
        }
        while let Some((a, h, depth, full)) = stack.pop() {
            let b = a + h;
            let bound = if full {
                circular_distance_to_interval(x, a, b)
            } else {
                self.window
                    .intervals()
                    .iter()
                    .filter_map(|&(lo, hi)| {
                        let (l, r) = (lo.max(a), hi.min(b));
                        (l <= r).then(|| circular_distance_to_interval(x, l, r))
                    })
                    .fold(f64::INFINITY, f64::min)
            };
            if bound >= best {
                continue;
            }
            if depth >= 40 {
                best = bound;
                continue;
            }
            let third = h / 3.0;
            let mut children = Vec::with_capacity(2);
            for start in [a, a + 2.0 * third] {
                let status = if full { Some((true, 0.0)) } else { self.cell_status(start, third, depth + 1) };
                if let Some((f, _)) = status {
                    children.push((start, third, depth + 1, f));
                }
            }
            // visit the nearer child first so pruning bites early
            children.sort_by(|p, q| {
                let dp = circular_distance_to_interval(x, p.0, p.0 + p.1);
                let dq = circular_distance_to_interval(x, q.0, q.0 + q.1);
                dq.total_cmp(&dp)
            });
            stack.extend(children);
        }
        best
    }
}

fn cell_nodes(a: f64, h: f64) -> [Complex64; 2] {
    let c = a + 0.5 * h;
    [Complex64::cis(TAU * (c - NODE_OFFSET * h)), Complex64::cis(TAU * (c + NODE_OFFSET * h))]
}

fn cell(a: f64, h: f64, depth: u32, full: bool, mass: f64) -> Cell {
    Cell {
        a,
        h,
        depth,
        mass,
        full,
        center: Complex64::cis(TAU * (a + 0.5 * h)),
        nodes: cell_nodes(a, h),
        children: [NO_CHILD; 2],
    }
}
