//! Rate regions as downward-closed convex polytopes in `R0, R1, R2` space.
//!
//! A region is stored by its extreme points together with the halfspaces that
//! cut it out. Every constructor goes through [`RateRegion::from_points`],
//! which forms the convex hull of the points and all their coordinate
//! projections, so the stored region is always downward-closed.

mod hull;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundSet;
use crate::error::{Error, Result};

/// Default box, in bits per channel use, used to clip infinite bounds.
pub const DEFAULT_CLIP: f64 = 64.0;

/// Default per-facet slack for containment queries.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Coordinates whose largest value over a point set is below this are treated as zero.
const SUPPORT_TOL: f64 = 1e-12;

/// Points may dip this far below zero before they are rejected.
const NEG_TOL: f64 = 1e-9;

/// How the common-message rate `R0` is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum R0Mode {
    /// Full `(R0, R1, R2)` region.
    #[default]
    Full,
    /// Two-dimensional `(R1, R2)` slice at `R0 = 0`.
    ZeroCommon,
}

impl R0Mode {
    pub fn dim(self) -> usize {
        match self {
            R0Mode::Full => 3,
            R0Mode::ZeroCommon => 2,
        }
    }
}

/// Resolution of the parameter grids that are unioned into a region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSpec {
    /// Points per power-split axis.
    pub power_points: usize,
    /// Points per free coordinate of an input-distribution simplex.
    pub simplex_points: usize,
    /// Points per free coordinate of a test-channel simplex.
    pub test_channel_points: usize,
    /// Levels per axis in the encoder-conferencing scan.
    pub cme_scan: usize,
    /// Box used to clip infinite bounds.
    pub clip: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { power_points: 33, simplex_points: 9, test_channel_points: 5, cme_scan: 257, clip: DEFAULT_CLIP }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("power_points", self.power_points),
            ("simplex_points", self.simplex_points),
            ("test_channel_points", self.test_channel_points),
            ("cme_scan", self.cme_scan),
        ] {
            if n == 0 {
                return Err(Error::Usage(format!("grid count {name} must be >= 1")));
            }
        }
        if !(self.clip > 0.0 && self.clip.is_finite()) {
            return Err(Error::Usage(format!("clip box must be positive and finite, got {}", self.clip)));
        }
        Ok(())
    }
}

/// The constraint `normal · x <= offset`. Normals are scaled so their largest
/// absolute component is 1, which keeps facet slack in bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    fn normalized(normal: Vec<f64>, offset: f64) -> Self {
        let scale = normal.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Self { normal: normal.iter().map(|v| v / scale).collect(), offset: offset / scale }
    }

    /// Signed slack `normal · x - offset`; positive means outside.
    pub fn excess(&self, point: &[f64]) -> f64 {
        self.normal.iter().zip(point).map(|(a, x)| a * x).sum::<f64>() - self.offset
    }
}

/// Provenance attached to a region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionMeta {
    /// Box used to clip infinite bounds.
    pub clip: f64,
    /// Known approximation error of the construction (bits), e.g. a scan cell.
    pub approx_error: f64,
}

impl Default for RegionMeta {
    fn default() -> Self {
        Self { clip: DEFAULT_CLIP, approx_error: 0.0 }
    }
}

/// A downward-closed convex polytope in the non-negative orthant.
///
/// In two dimensions the coordinates are `(R1, R2)` and vertices run
/// counterclockwise from the origin. In three dimensions they are
/// `(R0, R1, R2)` and vertices are sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Halfspace>,
    meta: RegionMeta,
}

/// Result of a region containment check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Containment {
    pub contained: bool,
    /// Largest facet excess of any inner vertex (0 when all are inside).
    pub worst_violation: f64,
}

impl RateRegion {
    /// Downward-closed convex hull of `points`.
    pub fn from_points(dim: usize, points: &[Vec<f64>], meta: RegionMeta) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::Usage(format!("regions must be 2D or 3D, got dimension {dim}")));
        }
        let mut pts = Vec::with_capacity(points.len() + 1);
        pts.push(vec![0.0; dim]);
        for p in points {
            if p.len() != dim {
                return Err(Error::Usage(format!("point {p:?} does not have dimension {dim}")));
            }
            if p.iter().any(|v| !v.is_finite() || *v < -NEG_TOL) {
                return Err(Error::Validation(format!("rate point {p:?} must be finite and non-negative")));
            }
            pts.push(p.iter().map(|v| v.max(0.0)).collect());
        }
        let (vertices, facets) = downward_hull(dim, &pts);
        Ok(Self { dim, vertices, facets, meta })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn meta(&self) -> RegionMeta {
        self.meta
    }

    pub fn with_meta(mut self, meta: RegionMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Largest facet excess of `point` (non-positive when inside).
    pub fn excess(&self, point: &[f64]) -> f64 {
        self.facets.iter().map(|h| h.excess(point)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `true` when `point` violates no facet by more than `tol`.
    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        point.len() == self.dim && self.facets.iter().all(|h| h.excess(point) <= tol)
    }

    /// `max_v direction · v` over the vertices.
    pub fn support(&self, direction: &[f64]) -> Result<f64> {
        if direction.len() != self.dim {
            return Err(Error::Usage(format!("direction has {} entries, region is {}D", direction.len(), self.dim)));
        }
        if direction.iter().all(|d| *d == 0.0) {
            return Err(Error::Usage("support direction must be nonzero".into()));
        }
        Ok(self
            .vertices
            .iter()
            .map(|v| v.iter().zip(direction).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Largest `R1 + R2` in the region.
    pub fn max_sum_rate(&self) -> f64 {
        let dir: Vec<f64> = if self.dim == 2 { vec![1.0, 1.0] } else { vec![0.0, 1.0, 1.0] };
        self.support(&dir).expect("nonzero direction")
    }

    /// The `(R1, R2)` slice at `R0 = 0`. Because the region is downward-closed,
    /// this equals the projection onto the private-rate plane.
    pub fn zero_common_slice(&self) -> RateRegion {
        if self.dim == 2 {
            return self.clone();
        }
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|v| vec![v[1], v[2]]).collect();
        RateRegion::from_points(2, &pts, self.meta).expect("projected vertices are valid")
    }

    /// Writes one vertex per row with a `R0,R1,R2` or `R1,R2` header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header: &[&str] = if self.dim == 2 { &["R1", "R2"] } else { &["R0", "R1", "R2"] };
        let io = |e: csv::Error| Error::Usage(format!("csv write failed: {e}"));
        w.write_record(header).map_err(io)?;
        for v in &self.vertices {
            w.write_record(v.iter().map(|x| format!("{x:.12}"))).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Usage(format!("csv write failed: {e}")))?;
        Ok(())
    }
}

/// Vertices of `{R >= 0 : R1 <= b1, R2 <= b2, R1+R2 <= b12, R0+R1+R2 <= b012}`,
/// with infinite bounds clipped at [`DEFAULT_CLIP`].
pub fn polytope_from_bounds(bs: &BoundSet, r0_mode: R0Mode) -> RateRegion {
    polytope_from_bounds_clipped(bs, r0_mode, DEFAULT_CLIP)
}

/// As [`polytope_from_bounds`] with an explicit clip box.
pub fn polytope_from_bounds_clipped(bs: &BoundSet, r0_mode: R0Mode, clip: f64) -> RateRegion {
    let meta = RegionMeta { clip, approx_error: 0.0 };
    let points = bound_vertices(bs, r0_mode, clip);
    RateRegion::from_points(r0_mode.dim(), &points, meta).expect("bound vertices are valid points")
}

/// Candidate extreme points of a bound polytope, found by intersecting every
/// pair (2D) or triple (3D) of constraint lines/planes.
pub(crate) fn bound_vertices(bs: &BoundSet, r0_mode: R0Mode, clip: f64) -> Vec<Vec<f64>> {
    let c = |v: f64| v.min(clip);
    let (rows, rhs): (Vec<Vec<f64>>, Vec<f64>) = match r0_mode {
        R0Mode::ZeroCommon => {
            let sum = c(bs.b12.min(bs.b012));
            (
                vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
                vec![0.0, 0.0, c(bs.b1), c(bs.b2), sum],
            )
        }
        R0Mode::Full => (
            vec![
                vec![-1.0, 0.0, 0.0],
                vec![0.0, -1.0, 0.0],
                vec![0.0, 0.0, -1.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![0.0, 1.0, 1.0],
                vec![1.0, 1.0, 1.0],
                vec![1.0, 0.0, 0.0],
            ],
            vec![0.0, 0.0, 0.0, c(bs.b1), c(bs.b2), c(bs.b12), c(bs.b012), clip],
        ),
    };
    let feasible = |x: &[f64]| {
        rows.iter()
            .zip(&rhs)
            .all(|(a, b)| a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() <= b + 1e-12 * (1.0 + b.abs()))
    };
    let mut out = Vec::new();
    let m = rows.len();
    if r0_mode == R0Mode::ZeroCommon {
        for i in 0..m {
            for j in i + 1..m {
                if let Some(x) = solve2([&rows[i], &rows[j]], [rhs[i], rhs[j]]) {
                    if feasible(&x) {
                        out.push(x);
                    }
                }
            }
        }
    } else {
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    if let Some(x) = solve3([&rows[i], &rows[j], &rows[k]], [rhs[i], rhs[j], rhs[k]]) {
                        if feasible(&x) {
                            out.push(x);
                        }
                    }
                }
            }
        }
    }
    for p in &mut out {
        for v in p.iter_mut() {
            *v = v.max(0.0);
        }
    }
    out
}

/// The Pareto-maximal vertices of a bound polytope. Their downward closure is
/// the whole polytope, so they are all a union needs.
pub(crate) fn bound_maxima(bs: &BoundSet, r0_mode: R0Mode, clip: f64) -> Vec<Vec<f64>> {
    let all = bound_vertices(bs, r0_mode, clip);
    all.iter()
        .filter(|v| !all.iter().any(|w| w != *v && w.iter().zip(v.iter()).all(|(a, b)| a >= b)))
        .cloned()
        .collect()
}

fn solve2(a: [&Vec<f64>; 2], b: [f64; 2]) -> Option<Vec<f64>> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() < 1e-12 {
        return None;
    }
    Some(vec![(b[0] * a[1][1] - a[0][1] * b[1]) / det, (a[0][0] * b[1] - b[0] * a[1][0]) / det])
}

fn solve3(a: [&Vec<f64>; 3], b: [f64; 3]) -> Option<Vec<f64>> {
    let m = |r: usize, c: usize| a[r][c];
    let det3 = |c0: [f64; 3], c1: [f64; 3], c2: [f64; 3]| {
        c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) - c1[0] * (c0[1] * c2[2] - c0[2] * c2[1])
            + c2[0] * (c0[1] * c1[2] - c0[2] * c1[1])
    };
    let col = |c: usize| [m(0, c), m(1, c), m(2, c)];
    let det = det3(col(0), col(1), col(2));
    if det.abs() < 1e-12 {
        return None;
    }
    Some(vec![det3(b, col(1), col(2)) / det, det3(col(0), b, col(2)) / det, det3(col(0), col(1), b) / det])
}

/// Convex hull of the union of several regions of equal dimension.
pub fn hull_union(regions: &[RateRegion]) -> Result<RateRegion> {
    let first = regions.first().ok_or_else(|| Error::Usage("hull_union needs at least one region".into()))?;
    if let Some(r) = regions.iter().find(|r| r.dim != first.dim) {
        return Err(Error::Usage(format!("cannot union a {}D region with a {}D region", first.dim, r.dim)));
    }
    let meta = RegionMeta {
        clip: regions.iter().map(|r| r.meta.clip).fold(0.0, f64::max),
        approx_error: regions.iter().map(|r| r.meta.approx_error).fold(0.0, f64::max),
    };
    let pts: Vec<Vec<f64>> = regions.iter().flat_map(|r| r.vertices.iter().cloned()).collect();
    RateRegion::from_points(first.dim, &pts, meta)
}

/// Checks every vertex of `inner` against the facets of `outer`.
pub fn region_containment(inner: &RateRegion, outer: &RateRegion, tol: f64) -> Result<Containment> {
    if inner.dim != outer.dim {
        return Err(Error::Usage(format!("cannot compare a {}D region with a {}D region", inner.dim, outer.dim)));
    }
    let worst = inner.vertices.iter().map(|v| outer.excess(v)).fold(0.0, f64::max);
    Ok(Containment { contained: worst <= tol, worst_violation: worst })
}

const PREHULL_MIN: usize = 64;

fn sort_dedup(points: &mut Vec<[f64; 3]>) {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])).then(a[2].total_cmp(&b[2])));
    points.dedup();
}

/// Hull of `points` and all their coordinate projections, returned as
/// (vertices, facets). `points` must contain the origin.
fn downward_hull(dim: usize, points: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Halfspace>) {
    let support: Vec<usize> =
        (0..dim).filter(|&k| points.iter().map(|p| p[k]).fold(0.0, f64::max) > SUPPORT_TOL).collect();
    let m = support.len();

    let mut base: Vec<[f64; 3]> = points
        .iter()
        .map(|p| {
            let mut q = [0.0; 3];
            for (j, &k) in support.iter().enumerate() {
                q[j] = p[k];
            }
            q
        })
        .collect();
    sort_dedup(&mut base);
    // Projections of interior points are interior, so thin large inputs to
    // their own hull vertices first.
    if base.len() > PREHULL_MIN {
        match m {
            2 => {
                let pts: Vec<[f64; 2]> = base.iter().map(|q| [q[0], q[1]]).collect();
                base = hull::hull2(&pts).into_iter().map(|p| [p[0], p[1], 0.0]).collect();
            }
            3 => {
                if let Some(h) = hull::hull3(&base) {
                    base = h.vertices;
                }
            }
            _ => {}
        }
    }

    // Every coordinate-zeroing projection of the remaining points.
    let mut reduced: Vec<[f64; 3]> = Vec::with_capacity(base.len() << m);
    for q in &base {
        for mask in 0..(1usize << m) {
            let mut r = [0.0; 3];
            for j in 0..m {
                if mask & (1 << j) != 0 {
                    r[j] = q[j];
                }
            }
            reduced.push(r);
        }
    }
    sort_dedup(&mut reduced);

    let (red_vertices, red_facets): (Vec<Vec<f64>>, Vec<(Vec<f64>, f64)>) = match m {
        0 => (vec![vec![]], vec![]),
        1 => {
            let hi = reduced.iter().map(|q| q[0]).fold(0.0, f64::max);
            (vec![vec![0.0], vec![hi]], vec![(vec![1.0], hi), (vec![-1.0], 0.0)])
        }
        2 => {
            let pts: Vec<[f64; 2]> = reduced.iter().map(|q| [q[0], q[1]]).collect();
            let poly = hull::hull2(&pts);
            let n = poly.len();
            let facets = (0..n)
                .map(|i| {
                    let (a, b) = (poly[i], poly[(i + 1) % n]);
                    let normal = vec![b[1] - a[1], a[0] - b[0]];
                    let offset = normal[0] * a[0] + normal[1] * a[1];
                    (normal, offset)
                })
                .collect();
            (poly.iter().map(|p| p.to_vec()).collect(), facets)
        }
        _ => {
            let h = hull::hull3(&reduced).expect("downward closure of a 3-coordinate support is full-dimensional");
            (
                h.vertices.iter().map(|p| p.to_vec()).collect(),
                h.planes.iter().map(|pl| (pl.normal.to_vec(), pl.offset)).collect(),
            )
        }
    };

    let lift = |v: &[f64]| {
        let mut full = vec![0.0; dim];
        for (j, &k) in support.iter().enumerate() {
            full[k] = v[j];
        }
        full
    };
    let mut vertices: Vec<Vec<f64>> = red_vertices.iter().map(|v| lift(v)).collect();
    if dim == 3 {
        vertices.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])).then(a[2].total_cmp(&b[2])));
    }
    let mut facets: Vec<Halfspace> = red_facets.iter().map(|(n, b)| Halfspace::normalized(lift(n), *b)).collect();
    for k in (0..dim).filter(|k| !support.contains(k)) {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        facets.push(Halfspace { normal: e.clone(), offset: 0.0 });
        e[k] = -1.0;
        facets.push(Halfspace { normal: e, offset: 0.0 });
    }
    (vertices, facets)
}
