//! Conferencing encoders on top of conferencing decoders.
//!
//! With encoder links of capacity `C̄12` and `C̄21`, transmitter `i` can share
//! up to `C̄ij` bits of its message with the other transmitter, which then
//! behaves as common-message rate. A private-rate pair `(R1, R2)` is
//! supported when
//! `(R12 + R21, R1 - R12, R2 - R21)` lies in the three-dimensional
//! common-message region, where `R12 = min(R1, C̄12)` and `R21 = min(R2, C̄21)`.
//!
//! The map is affine on each of the four boxes cut out by `R1 = C̄12` and
//! `R2 = C̄21`, so the feasible set is a union of four polygons, each the
//! preimage of the 3D polytope under an affine map. [`cme_transform`]
//! computes these polygons exactly by clipping. [`cme_transform_scan`] is
//! the grid-scan alternative, an inner approximation within one cell.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dm::{dm_region, DmChannel, DmOptions, DEGRADED_TOL};
use crate::error::{Error, Result};
use crate::gaussian::{gaussian_region, GaussianCmChannel, Scheme};
use crate::geometry::{GridSpec, R0Mode, RateRegion, RegionMeta};

/// Encoder conferencing capacities, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EncoderConferencing {
    pub cbar12: f64,
    pub cbar21: f64,
}

impl EncoderConferencing {
    pub const NONE: EncoderConferencing = EncoderConferencing { cbar12: 0.0, cbar21: 0.0 };

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("cbar12", self.cbar12), ("cbar21", self.cbar21)] {
            if v.is_nan() || v < 0.0 {
                return Err(Error::Validation(format!("{name} must be >= 0 (or +inf), got {v}")));
            }
        }
        Ok(())
    }
}

/// Affine map from a private-rate pair to `(R0, R1, R2)` on one branch box.
struct Branch {
    lo: [f64; 2],
    hi: [f64; 2],
    /// `(R0, R1, R2) = M (R1, R2) + k`.
    m: [[f64; 2]; 3],
    k: [f64; 3],
}

fn branches(enc: &EncoderConferencing, box_hi: [f64; 2]) -> Vec<Branch> {
    let caps = [enc.cbar12, enc.cbar21];
    let mut out = Vec::new();
    // For each user: `false` means R_i <= C̄ (all of R_i becomes common),
    // `true` means R_i >= C̄ (C̄ becomes common, the rest stays private).
    for over1 in [false, true] {
        for over2 in [false, true] {
            let over = [over1, over2];
            let mut lo = [0.0; 2];
            let mut hi = [0.0; 2];
            let mut m = [[0.0; 2]; 3];
            let mut k = [0.0; 3];
            let mut empty = false;
            for i in 0..2 {
                if over[i] {
                    if caps[i] >= box_hi[i] {
                        empty = true;
                    }
                    lo[i] = caps[i];
                    hi[i] = box_hi[i];
                    k[0] += caps[i];
                    m[1 + i][i] = 1.0;
                    k[1 + i] = -caps[i];
                } else {
                    hi[i] = caps[i].min(box_hi[i]);
                    m[0][i] = 1.0;
                }
            }
            if !empty {
                out.push(Branch { lo, hi, m, k });
            }
        }
    }
    out
}

/// Clips a convex polygon (counterclockwise or clockwise) by `a · x <= b`.
fn clip(poly: &[[f64; 2]], a: [f64; 2], b: f64) -> Vec<[f64; 2]> {
    const EPS: f64 = 1e-12;
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let fp = a[0] * p[0] + a[1] * p[1] - b;
        let fq = a[0] * q[0] + a[1] * q[1] - b;
        if fp <= EPS {
            out.push(p);
        }
        if (fp <= EPS) != (fq <= EPS) && (fp - fq).abs() > 0.0 {
            let t = fp / (fp - fq);
            if (0.0..=1.0).contains(&t) {
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
    }
    out
}

fn check_3d(region3d: &RateRegion) -> Result<()> {
    if region3d.dim() != 3 {
        return Err(Error::Usage(format!(
            "encoder conferencing needs a 3D common-message region, got a {}D region",
            region3d.dim()
        )));
    }
    Ok(())
}

/// Largest private rates any encoder configuration could reach: `max R0 + R1` and `max R0 + R2`.
fn bounding_box(region3d: &RateRegion) -> [f64; 2] {
    [
        region3d.support(&[1.0, 1.0, 0.0]).expect("nonzero direction"),
        region3d.support(&[1.0, 0.0, 1.0]).expect("nonzero direction"),
    ]
}

/// Private-rate region supported by encoder conferencing on top of `region3d`.
pub fn cme_transform(region3d: &RateRegion, enc: &EncoderConferencing) -> Result<RateRegion> {
    check_3d(region3d)?;
    enc.validate()?;
    let box_hi = bounding_box(region3d);
    let mut points: Vec<Vec<f64>> = Vec::new();
    for br in branches(enc, box_hi) {
        let mut poly = vec![br.lo, [br.hi[0], br.lo[1]], br.hi, [br.lo[0], br.hi[1]]];
        for h in region3d.facets() {
            let n = &h.normal;
            let a = [
                n[0] * br.m[0][0] + n[1] * br.m[1][0] + n[2] * br.m[2][0],
                n[0] * br.m[0][1] + n[1] * br.m[1][1] + n[2] * br.m[2][1],
            ];
            let b = h.offset - (n[0] * br.k[0] + n[1] * br.k[1] + n[2] * br.k[2]);
            poly = clip(&poly, a, b);
            if poly.is_empty() {
                break;
            }
        }
        points.extend(poly.iter().map(|p| vec![p[0].max(0.0), p[1].max(0.0)]));
    }
    RateRegion::from_points(2, &points, region3d.meta())
}

/// `true` when `(r1, r2)` maps into `region3d`.
pub fn cme_feasible(region3d: &RateRegion, enc: &EncoderConferencing, r: [f64; 2], tol: f64) -> bool {
    let r12 = r[0].min(enc.cbar12);
    let r21 = r[1].min(enc.cbar21);
    region3d.contains(&[r12 + r21, r[0] - r12, r[1] - r21], tol)
}

/// Grid-scan version of [`cme_transform`]: for `levels` values of each rate
/// the largest feasible value of the other is found by bisection, and the
/// hull of those boundary points is returned. The result lies inside the
/// exact region; the scan cell is recorded as the approximation error.
pub fn cme_transform_scan(region3d: &RateRegion, enc: &EncoderConferencing, levels: usize) -> Result<RateRegion> {
    check_3d(region3d)?;
    enc.validate()?;
    if levels < 2 {
        return Err(Error::Usage("scan needs at least 2 levels per axis".into()));
    }
    const TOL: f64 = 1e-12;
    let box_hi = bounding_box(region3d);
    let feasible = |r: [f64; 2]| cme_feasible(region3d, enc, r, TOL);
    let scan = |axis: usize| -> Vec<Vec<f64>> {
        (0..levels)
            .into_par_iter()
            .filter_map(|i| {
                let x = box_hi[axis] * (i as f64 / (levels - 1) as f64);
                let at = |y: f64| if axis == 0 { [x, y] } else { [y, x] };
                if !feasible(at(0.0)) {
                    return None;
                }
                let (mut lo, mut hi) = (0.0, box_hi[1 - axis]);
                if feasible(at(hi)) {
                    lo = hi;
                } else {
                    for _ in 0..64 {
                        let mid = 0.5 * (lo + hi);
                        if feasible(at(mid)) {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                }
                Some(at(lo).to_vec())
            })
            .collect()
    };
    let mut points = scan(0);
    points.extend(scan(1));
    let cell = box_hi[0].max(box_hi[1]) / (levels - 1) as f64;
    let meta = RegionMeta { clip: region3d.meta().clip, approx_error: region3d.meta().approx_error.max(cell) };
    RateRegion::from_points(2, &points, meta)
}

/// Channel models whose common-message outer bound feeds the encoder transform.
#[derive(Debug, Clone)]
pub enum CmeSource<'a> {
    Gaussian(&'a GaussianCmChannel),
    Dm {
        channel: &'a DmChannel,
        c12: f64,
        c21: f64,
        /// Physically degraded channel: the `C21` link is dropped.
        degraded: bool,
        opts: DmOptions,
    },
}

/// Encoder-conferencing outer bound for a channel.
pub fn cme_outer(source: &CmeSource<'_>, enc: &EncoderConferencing, grid: &GridSpec) -> Result<RateRegion> {
    let region3d = match source {
        CmeSource::Gaussian(ch) => gaussian_region(ch, Scheme::Outer, grid, R0Mode::Full)?,
        CmeSource::Dm { channel, c12, c21, degraded, opts } => {
            let c21 = if *degraded {
                if !channel.is_physically_degraded(DEGRADED_TOL) {
                    return Err(Error::Precondition("channel does not factor as p(y1|x1,x2) p(y2|y1)".into()));
                }
                0.0
            } else {
                *c21
            };
            dm_region(channel, Scheme::Outer, *c12, c21, grid, R0Mode::Full, opts)?
        }
    };
    cme_transform(&region3d, enc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundSet;
    use crate::geometry::{polytope_from_bounds, region_containment};

    fn sample() -> RateRegion {
        polytope_from_bounds(&BoundSet::new(1.0, 1.0, 1.5, 2.0).unwrap(), R0Mode::Full)
    }

    #[test]
    fn no_encoder_links_give_the_private_slice() {
        let r = sample();
        let t = cme_transform(&r, &EncoderConferencing::NONE).unwrap();
        assert_eq!(t, r.zero_common_slice());
    }

    #[test]
    fn unlimited_encoder_links_convert_all_rate_to_common() {
        let enc = EncoderConferencing { cbar12: f64::INFINITY, cbar21: f64::INFINITY };
        let t = cme_transform(&sample(), &enc).unwrap();
        assert_eq!(t.vertices(), &[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]]);
    }

    #[test]
    fn rejects_two_dimensional_input() {
        let flat = sample().zero_common_slice();
        assert!(matches!(cme_transform(&flat, &EncoderConferencing::NONE), Err(Error::Usage(_))));
    }

    #[test]
    fn scan_agrees_with_exact_transform() {
        let r = sample();
        for enc in [
            EncoderConferencing { cbar12: 0.3, cbar21: 0.0 },
            EncoderConferencing { cbar12: 0.2, cbar21: 0.45 },
            EncoderConferencing { cbar12: f64::INFINITY, cbar21: 0.1 },
        ] {
            let exact = cme_transform(&r, &enc).unwrap();
            let scan = cme_transform_scan(&r, &enc, 257).unwrap();
            let cell = scan.meta().approx_error;
            assert!(region_containment(&scan, &exact, 1e-9).unwrap().contained);
            for d in [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 2.0], [2.0, 1.0]] {
                let gap = exact.support(&d).unwrap() - scan.support(&d).unwrap();
                assert!(gap >= -1e-9 && gap <= 2.0 * cell * (d[0] + d[1]), "gap {gap} in {d:?}");
            }
            for v in exact.vertices() {
                assert!(cme_feasible(&r, &enc, [v[0], v[1]], 1e-9), "{v:?} infeasible for {enc:?}");
            }
        }
    }

    #[test]
    fn larger_encoder_links_never_shrink() {
        let r = sample();
        let mut prev = cme_transform(&r, &EncoderConferencing::NONE).unwrap();
        for c in [0.1, 0.25, 0.5, 1.0, 4.0] {
            let next = cme_transform(&r, &EncoderConferencing { cbar12: c, cbar21: c / 2.0 }).unwrap();
            assert!(region_containment(&prev, &next, 1e-9).unwrap().contained);
            prev = next;
        }
    }
}
