//! Image-source specular ray tracing and the free-space link budget.
//!
//! The transmitter is mirrored across every ordered wall sequence of length
//! `1..=max_order` (no wall twice in a row). For a receiver, each image is
//! connected back to the receiver and unfolded into bounce points; the path
//! survives only if every bounce lands on its finite wall and every leg is
//! unobstructed by the other walls. Path powers are summed incoherently.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{is_visible, mirror_point, Point2, Segment, EPSILON};
use crate::scene::{Bounds, Transmitter, Wall};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// How per-path powers combine at a receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Summation {
    /// Sum of per-path linear powers, no phase.
    #[default]
    Incoherent,
}

impl Summation {
    pub fn as_str(self) -> &'static str {
        match self {
            Summation::Incoherent => "incoherent",
        }
    }

    pub fn parse(s: &str) -> Option<Summation> {
        match s {
            "incoherent" => Some(Summation::Incoherent),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationParams {
    /// Maximum number of bounces per path.
    pub max_order: usize,
    /// Reported when no path reaches a point; results never go below it.
    pub power_floor_dbm: f64,
    pub summation: Summation,
}

impl Default for PropagationParams {
    fn default() -> Self {
        Self {
            max_order: 3,
            power_floor_dbm: -150.0,
            summation: Summation::Incoherent,
        }
    }
}

/// One specular path from the transmitter to a point.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationPath {
    /// Bounce points in travel order (transmitter side first).
    pub bounce_points: Vec<Point2>,
    /// Index into the wall list for each bounce.
    pub wall_refs: Vec<usize>,
    /// Unfolded length, meters.
    pub total_length: f64,
    pub total_reflection_loss_db: f64,
}

impl PropagationPath {
    pub fn order(&self) -> usize {
        self.wall_refs.len()
    }
}

#[derive(Debug, Clone, Copy)]
struct ImageNode {
    wall: usize,
    parent: Option<usize>,
    image: Point2,
}

/// Image tree of one transmitter in one wall set. Building it is independent
/// of the receiver, so a power map builds it once and reuses it per cell.
#[derive(Debug, Clone)]
pub struct ImageTracer {
    source: Point2,
    walls: Vec<Wall>,
    segments: Vec<Segment>,
    nodes: Vec<ImageNode>,
    max_order: usize,
}

impl ImageTracer {
    pub fn new(source: Point2, walls: &[Wall], params: &PropagationParams) -> Self {
        let segments: Vec<Segment> = walls.iter().map(|w| w.segment).collect();
        let mut nodes = Vec::new();
        let mut stack: Vec<(Option<usize>, Point2, usize, Option<usize>)> = Vec::new();
        // Depth-first, walls in declaration order, so path order is stable.
        stack.push((None, source, 0, None));
        while let Some((parent, image, depth, last_wall)) = stack.pop() {
            if depth == params.max_order {
                continue;
            }
            let mut children = Vec::new();
            for (w, seg) in segments.iter().enumerate() {
                if Some(w) == last_wall {
                    continue;
                }
                // An image on the wall's line reflects onto itself: no path.
                if (image - seg.a).dot(seg.normal()).abs() <= EPSILON {
                    continue;
                }
                let child = ImageNode {
                    wall: w,
                    parent,
                    image: mirror_point(image, seg),
                };
                nodes.push(child);
                children.push((Some(nodes.len() - 1), child.image, depth + 1, Some(w)));
            }
            stack.extend(children.into_iter().rev());
        }
        Self {
            source,
            walls: walls.to_vec(),
            segments,
            nodes,
            max_order: params.max_order,
        }
    }

    pub fn source(&self) -> Point2 {
        self.source
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Number of image sources in the tree (excluding the transmitter).
    pub fn image_count(&self) -> usize {
        self.nodes.len()
    }

    /// Every valid path to `rx`: direct first, then images in tree order.
    pub fn paths_to(&self, rx: Point2) -> Vec<PropagationPath> {
        let mut out = Vec::new();
        self.for_each_path(rx, |p| out.push(p));
        out
    }

    fn for_each_path(&self, rx: Point2, mut f: impl FnMut(PropagationPath)) {
        let direct = self.source.distance(rx);
        if direct > EPSILON && is_visible(self.source, rx, &self.segments, &[]) {
            f(PropagationPath {
                bounce_points: Vec::new(),
                wall_refs: Vec::new(),
                total_length: direct,
                total_reflection_loss_db: 0.0,
            });
        }
        let mut bounces = Vec::with_capacity(self.max_order);
        let mut walls = Vec::with_capacity(self.max_order);
        for idx in 0..self.nodes.len() {
            if self.trace_node(idx, rx, &mut bounces, &mut walls) {
                bounces.reverse();
                walls.reverse();
                let mut length = 0.0;
                let mut prev = self.source;
                for &b in bounces.iter() {
                    length += prev.distance(b);
                    prev = b;
                }
                length += prev.distance(rx);
                let loss = walls
                    .iter()
                    .map(|&w| self.walls[w].reflection_loss_db)
                    .sum();
                f(PropagationPath {
                    bounce_points: bounces.clone(),
                    wall_refs: walls.clone(),
                    total_length: length,
                    total_reflection_loss_db: loss,
                });
            }
        }
    }

    /// Unfolds the node's image path back from `rx`. Fills `bounces` and
    /// `walls` receiver side first.
    fn trace_node(
        &self,
        idx: usize,
        rx: Point2,
        bounces: &mut Vec<Point2>,
        walls: &mut Vec<usize>,
    ) -> bool {
        bounces.clear();
        walls.clear();
        let mut target = rx;
        let mut target_wall: Option<usize> = None;
        let mut node = Some(idx);
        while let Some(i) = node {
            let n = &self.nodes[i];
            let seg = &self.segments[n.wall];
            let Some(bounce) = unfold_bounce(n.image, target, seg) else {
                return false;
            };
            if bounce.distance(target) <= EPSILON {
                return false;
            }
            let skip = [n.wall, target_wall.unwrap_or(n.wall)];
            if !is_visible(bounce, target, &self.segments, &skip) {
                return false;
            }
            bounces.push(bounce);
            walls.push(n.wall);
            target = bounce;
            target_wall = Some(n.wall);
            node = n.parent;
        }
        let first_wall = target_wall.expect("image node has at least one wall");
        self.source.distance(target) > EPSILON
            && is_visible(self.source, target, &self.segments, &[first_wall])
    }
}

/// Where the straight line `image -> target` crosses `seg`, if it crosses
/// the finite segment strictly between the two points.
fn unfold_bounce(image: Point2, target: Point2, seg: &Segment) -> Option<Point2> {
    let d = target - image;
    let e = seg.b - seg.a;
    let denom = d.cross(e);
    if denom == 0.0 {
        return None;
    }
    let w = seg.a - image;
    let t = w.cross(e) / denom;
    let s = w.cross(d) / denom;
    if t <= 0.0 || t >= 1.0 || !(0.0..=1.0).contains(&s) {
        return None;
    }
    Some(seg.a + e * s)
}

/// Every specular path from `tx` to `rx` with at most `params.max_order`
/// bounces.
pub fn enumerate_paths(
    tx: Point2,
    rx: Point2,
    walls: &[Wall],
    params: &PropagationParams,
) -> Vec<PropagationPath> {
    ImageTracer::new(tx, walls, params).paths_to(rx)
}

/// Free-space path loss in dB over `distance_m` at `frequency_hz`.
pub fn fspl_db(distance_m: f64, frequency_hz: f64) -> f64 {
    20.0 * libm::log10(4.0 * core::f64::consts::PI * distance_m * frequency_hz / SPEED_OF_LIGHT)
}

/// Received power of one path with isotropic 0 dBi antennas.
pub fn path_power(path: &PropagationPath, tx_power_dbm: f64, frequency_hz: f64) -> Result<f64> {
    if !(path.total_length > EPSILON) {
        return Err(Error::DegeneratePath);
    }
    Ok(tx_power_dbm - fspl_db(path.total_length, frequency_hz) - path.total_reflection_loss_db)
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    libm::pow(10.0, dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * libm::log10(mw)
}

/// Combines per-path powers and clamps at the floor.
fn combine(powers: impl Iterator<Item = f64>, params: &PropagationParams) -> f64 {
    match params.summation {
        Summation::Incoherent => {
            let total: f64 = powers.map(dbm_to_mw).sum();
            if total > 0.0 {
                mw_to_dbm(total).max(params.power_floor_dbm)
            } else {
                params.power_floor_dbm
            }
        }
    }
}

/// Total received power at `point` from the tracer's source.
pub fn received_power_with(
    tracer: &ImageTracer,
    tx: &Transmitter,
    point: Point2,
    params: &PropagationParams,
) -> Result<f64> {
    if tx.position.distance(point) <= EPSILON {
        return Err(Error::CollocatedReceiver);
    }
    let paths = tracer.paths_to(point);
    let mut powers = Vec::with_capacity(paths.len());
    for p in &paths {
        powers.push(path_power(p, tx.power_dbm, tx.frequency_hz)?);
    }
    Ok(combine(powers.into_iter(), params))
}

/// Total received power at `point`, dBm, never below the floor.
pub fn received_power(
    tx: &Transmitter,
    point: Point2,
    walls: &[Wall],
    params: &PropagationParams,
) -> Result<f64> {
    let tracer = ImageTracer::new(tx.position, walls, params);
    received_power_with(&tracer, tx, point, params)
}

/// Cell layout of a power map over `bounds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapGrid {
    pub origin: Point2,
    pub resolution: f64,
    pub nx: usize,
    pub ny: usize,
}

impl MapGrid {
    pub fn new(bounds: &Bounds, resolution: f64) -> Result<Self> {
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(Error::InvalidParameter("map resolution must be > 0"));
        }
        if bounds.is_degenerate() {
            return Err(Error::InvalidParameter("map bounds are degenerate"));
        }
        let cells = |extent: f64| (libm::ceil(extent / resolution - 1e-9) as usize).max(1);
        Ok(Self {
            origin: bounds.min,
            resolution,
            nx: cells(bounds.width()),
            ny: cells(bounds.height()),
        })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Center of the cell at row-major `index` (`index = j·nx + i`).
    pub fn cell_center(&self, index: usize) -> Point2 {
        let (i, j) = (index % self.nx, index / self.nx);
        Point2::new(
            self.origin.x + (i as f64 + 0.5) * self.resolution,
            self.origin.y + (j as f64 + 0.5) * self.resolution,
        )
    }
}

/// Evaluates single map cells. Each call is independent of every other, so
/// cells can be computed in any order or in parallel with identical results.
#[derive(Debug, Clone)]
pub struct CellEvaluator {
    tracer: ImageTracer,
    tx: Transmitter,
    params: PropagationParams,
}

impl CellEvaluator {
    pub fn new(tx: &Transmitter, walls: &[Wall], params: &PropagationParams) -> Self {
        Self {
            tracer: ImageTracer::new(tx.position, walls, params),
            tx: *tx,
            params: *params,
        }
    }

    pub fn value_at(&self, p: Point2) -> f64 {
        let floor = self.params.power_floor_dbm;
        if self.tx.position.distance(p) <= EPSILON
            || self
                .tracer
                .segments
                .iter()
                .any(|s| s.distance_to(p) <= EPSILON)
        {
            return floor;
        }
        received_power_with(&self.tracer, &self.tx, p, &self.params).unwrap_or(floor)
    }
}

/// Received power sampled at cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerMap {
    pub origin: Point2,
    pub resolution: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `values[j * nx + i]`, row 0 at the lowest y.
    pub values: Vec<f64>,
}

impl PowerMap {
    pub fn from_values(grid: MapGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "value count must match the grid");
        Self {
            origin: grid.origin,
            resolution: grid.resolution,
            nx: grid.nx,
            ny: grid.ny,
            values,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.nx..(j + 1) * self.nx]
    }
}

/// Received power at every cell center of `bounds`.
pub fn power_map(
    tx: &Transmitter,
    walls: &[Wall],
    bounds: &Bounds,
    resolution: f64,
    params: &PropagationParams,
) -> Result<PowerMap> {
    let grid = MapGrid::new(bounds, resolution)?;
    let eval = CellEvaluator::new(tx, walls, params);
    let values = (0..grid.len())
        .map(|k| eval.value_at(grid.cell_center(k)))
        .collect();
    Ok(PowerMap::from_values(grid, values))
}
