//! Convex hulls of small point sets in two and three dimensions.
//!
//! The 2D hull is Andrew's monotone chain. The 3D hull is a quickhull with
//! per-face outside sets; faces are triangles, and coplanar triangles are
//! merged into a single supporting plane afterwards.

use std::collections::{HashMap, HashSet};

pub(crate) type P2 = [f64; 2];
pub(crate) type P3 = [f64; 3];

/// Distance below which a 2D hull vertex counts as lying on its neighbours' chord.
pub(crate) const CHORD_TOL: f64 = 1e-12;

fn cross2(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counterclockwise hull vertices, starting from the lexicographically smallest point.
/// Collinear points are dropped. Input must contain at least three non-collinear points.
pub(crate) fn hull2(points: &[P2]) -> Vec<P2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<P2> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross2(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross2(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    prune_flat(lower)
}

/// Drops vertices within `CHORD_TOL` of the segment joining their neighbours.
/// The pop test above is exact, so near-duplicate inputs can leave such slivers.
fn prune_flat(mut poly: Vec<P2>) -> Vec<P2> {
    let mut changed = true;
    while changed && poly.len() > 3 {
        changed = false;
        let n = poly.len();
        for i in 0..n {
            let (a, p, b) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            let dist = if len > 0.0 { cross2(a, b, p).abs() / len } else { (p[0] - a[0]).hypot(p[1] - a[1]) };
            if dist <= CHORD_TOL {
                poly.remove(i);
                changed = true;
                break;
            }
        }
    }
    poly
}

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: P3) -> f64 {
    dot(a, a).sqrt()
}

/// A supporting plane `normal · x <= offset` with unit normal.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Plane {
    pub normal: P3,
    pub offset: f64,
}

impl Plane {
    fn through(a: P3, b: P3, c: P3) -> Option<Plane> {
        let n = cross(sub(b, a), sub(c, a));
        let len = norm(n);
        if !(len > 0.0) {
            return None;
        }
        let normal = [n[0] / len, n[1] / len, n[2] / len];
        Some(Plane { normal, offset: dot(normal, a) })
    }

    fn dist(&self, p: P3) -> f64 {
        dot(self.normal, p) - self.offset
    }
}

struct Face {
    v: [usize; 3],
    plane: Plane,
    outside: Vec<usize>,
    alive: bool,
}

pub(crate) struct Hull3 {
    pub vertices: Vec<P3>,
    pub planes: Vec<Plane>,
}

/// Quickhull over a full-dimensional point set. Returns `None` if the points are
/// (numerically) contained in a plane.
pub(crate) fn hull3(points: &[P3]) -> Option<Hull3> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])).then(a[2].total_cmp(&b[2])));
    pts.dedup();
    if pts.len() < 4 {
        return None;
    }
    let scale = pts.iter().flat_map(|p| p.iter()).fold(1.0f64, |m, v| m.max(v.abs()));
    let eps = 1e-11 * scale;

    let simplex = initial_simplex(&pts, eps)?;
    let mut faces: Vec<Face> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();

    let [i0, i1, i2, i3] = simplex;
    let centroid = {
        let s = [pts[i0], pts[i1], pts[i2], pts[i3]];
        [0, 1, 2].map(|k| s.iter().map(|p| p[k]).sum::<f64>() / 4.0)
    };
    for tri in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        let mut v = tri;
        let mut plane = Plane::through(pts[v[0]], pts[v[1]], pts[v[2]])?;
        if plane.dist(centroid) > 0.0 {
            v.swap(1, 2);
            plane = Plane::through(pts[v[0]], pts[v[1]], pts[v[2]])?;
        }
        add_face(&mut faces, &mut edges, v, plane);
    }

    let in_simplex: HashSet<usize> = simplex.into_iter().collect();
    for i in 0..pts.len() {
        if in_simplex.contains(&i) {
            continue;
        }
        if let Some(f) = (0..4).find(|&f| faces[f].plane.dist(pts[i]) > eps) {
            faces[f].outside.push(i);
        }
    }

    let mut stack: Vec<usize> = (0..4).filter(|&f| !faces[f].outside.is_empty()).collect();
    while let Some(fi) = stack.pop() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        let apex = *faces[fi]
            .outside
            .iter()
            .max_by(|&&a, &&b| faces[fi].plane.dist(pts[a]).total_cmp(&faces[fi].plane.dist(pts[b])))
            .expect("non-empty outside set");
        let p = pts[apex];

        // Visible faces: connected component of faces that see the apex.
        let mut visible = vec![fi];
        let mut seen: HashSet<usize> = HashSet::from([fi]);
        let mut k = 0;
        while k < visible.len() {
            let f = visible[k];
            k += 1;
            let v = faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                if let Some(&g) = edges.get(&(b, a)) {
                    if seen.insert(g) && faces[g].plane.dist(p) > eps {
                        visible.push(g);
                    }
                }
            }
        }
        let visible_set: HashSet<usize> = visible.iter().copied().collect();

        let mut horizon = Vec::new();
        for &f in &visible {
            let v = faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                match edges.get(&(b, a)) {
                    Some(g) if visible_set.contains(g) => {}
                    _ => horizon.push((a, b)),
                }
            }
        }

        let mut orphans = Vec::new();
        for &f in &visible {
            let face = &mut faces[f];
            face.alive = false;
            orphans.append(&mut face.outside);
            let v = face.v;
            for e in 0..3 {
                edges.remove(&(v[e], v[(e + 1) % 3]));
            }
        }

        let mut created = Vec::with_capacity(horizon.len());
        for (a, b) in horizon {
            let plane = match Plane::through(pts[a], pts[b], p) {
                Some(pl) => pl,
                None => continue,
            };
            created.push(add_face(&mut faces, &mut edges, [a, b, apex], plane));
        }

        for i in orphans {
            if i == apex {
                continue;
            }
            if let Some(&f) = created.iter().find(|&&f| faces[f].plane.dist(pts[i]) > eps) {
                faces[f].outside.push(i);
            }
        }
        stack.extend(created.into_iter().filter(|&f| !faces[f].outside.is_empty()));
    }

    Some(finish(&pts, &faces, scale))
}

fn add_face(faces: &mut Vec<Face>, edges: &mut HashMap<(usize, usize), usize>, v: [usize; 3], plane: Plane) -> usize {
    let id = faces.len();
    for e in 0..3 {
        edges.insert((v[e], v[(e + 1) % 3]), id);
    }
    faces.push(Face { v, plane, outside: Vec::new(), alive: true });
    id
}

fn initial_simplex(pts: &[P3], eps: f64) -> Option<[usize; 4]> {
    // Farthest pair among the axis extremes.
    let mut extremes = Vec::with_capacity(6);
    for k in 0..3 {
        let lo = (0..pts.len()).min_by(|&a, &b| pts[a][k].total_cmp(&pts[b][k]))?;
        let hi = (0..pts.len()).max_by(|&a, &b| pts[a][k].total_cmp(&pts[b][k]))?;
        extremes.push(lo);
        extremes.push(hi);
    }
    let mut best = (0.0, 0, 0);
    for &a in &extremes {
        for &b in &extremes {
            let d = norm(sub(pts[a], pts[b]));
            if d > best.0 {
                best = (d, a, b);
            }
        }
    }
    let (len, i0, i1) = best;
    if len <= eps {
        return None;
    }
    let dir = sub(pts[i1], pts[i0]);
    let line_dist = |p: P3| norm(cross(sub(p, pts[i0]), dir)) / len;
    let i2 = (0..pts.len()).max_by(|&a, &b| line_dist(pts[a]).total_cmp(&line_dist(pts[b])))?;
    if line_dist(pts[i2]) <= eps {
        return None;
    }
    let plane = Plane::through(pts[i0], pts[i1], pts[i2])?;
    let i3 = (0..pts.len()).max_by(|&a, &b| plane.dist(pts[a]).abs().total_cmp(&plane.dist(pts[b]).abs()))?;
    if plane.dist(pts[i3]).abs() <= eps {
        return None;
    }
    Some([i0, i1, i2, i3])
}

/// Merges coplanar triangles and keeps only points where at least three
/// independent supporting planes meet.
fn finish(pts: &[P3], faces: &[Face], scale: f64) -> Hull3 {
    const NORMAL_TOL: f64 = 1e-9;
    const RANK_TOL: f64 = 1e-10;
    let offset_tol = 1e-9 * scale;

    let mut planes: Vec<Plane> = Vec::new();
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for face in faces.iter().filter(|f| f.alive) {
        let pl = face.plane;
        let id = match planes.iter().position(|q| {
            (0..3).all(|k| (q.normal[k] - pl.normal[k]).abs() <= NORMAL_TOL)
                && (q.offset - pl.offset).abs() <= offset_tol
        }) {
            Some(id) => id,
            None => {
                planes.push(pl);
                planes.len() - 1
            }
        };
        for &v in &face.v {
            let list = incident.entry(v).or_default();
            if !list.contains(&id) {
                list.push(id);
            }
        }
    }

    let mut vertices: Vec<P3> =
        incident.into_iter().filter(|(_, ids)| spans_space(ids, &planes, RANK_TOL)).map(|(v, _)| pts[v]).collect();
    vertices.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])).then(a[2].total_cmp(&b[2])));
    Hull3 { vertices, planes }
}

fn spans_space(ids: &[usize], planes: &[Plane], tol: f64) -> bool {
    if ids.len() < 3 {
        return false;
    }
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let c = cross(planes[ids[i]].normal, planes[ids[j]].normal);
            for k in j + 1..ids.len() {
                if dot(c, planes[ids[k]].normal).abs() > tol {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_interior_and_edge_points() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.0], [1.0, 0.3]];
        let h = hull2(&pts);
        assert_eq!(h, vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
    }

    #[test]
    fn near_duplicate_points_keep_the_true_corner() {
        let x: f64 = 0.230101274429298;
        let pts =
            [[0.0, 0.0], [x, 0.0], [x, 1.02], [0.0786, 1.02], [0.0, 1.02], [f64::from_bits(x.to_bits() + 1), 0.0]];
        let h = hull2(&pts);
        assert_eq!(h.len(), 4);
        assert!(h.contains(&[x, 1.02]));
    }

    #[test]
    fn cube_hull_has_eight_vertices_six_planes() {
        let mut pts = Vec::new();
        for i in 0..=4 {
            for j in 0..=4 {
                for k in 0..=4 {
                    pts.push([i as f64 / 4.0, j as f64 / 4.0, k as f64 / 4.0]);
                }
            }
        }
        let h = hull3(&pts).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.planes.len(), 6);
        for p in &pts {
            for pl in &h.planes {
                assert!(pl.dist(*p) <= 1e-12);
            }
        }
    }

    #[test]
    fn planar_input_is_rejected() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]];
        assert!(hull3(&pts).is_none());
    }

    #[test]
    fn random_points_are_inside_hull() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<P3> = (0..500).map(|_| [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()]).collect();
        let h = hull3(&pts).unwrap();
        for p in &pts {
            assert!(h.planes.iter().all(|pl| pl.dist(*p) <= 1e-9));
        }
        // Every reported vertex is tight on at least three planes.
        for v in &h.vertices {
            let tight = h.planes.iter().filter(|pl| pl.dist(*v).abs() <= 1e-9).count();
            assert!(tight >= 3);
        }
    }
}
