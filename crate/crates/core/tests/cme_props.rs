use cmac_core::cme::{cme_outer, cme_transform, cme_transform_scan, CmeSource};
use cmac_core::geometry::{hull_union, polytope_from_bounds, region_containment};
use cmac_core::{BoundSet, EncoderConferencing, Error, GaussianCmChannel, GridSpec, R0Mode, RateRegion, RegionMeta};
use proptest::prelude::*;

/// Unions of common-message polytopes. Arbitrary downward-closed sets are not
/// enough: the transform relies on rate moving freely from private to common.
fn region3() -> impl Strategy<Value = RateRegion> {
    prop::collection::vec(prop::array::uniform4(0.0f64..3.0), 1..4).prop_map(|sets| {
        let parts: Vec<RateRegion> = sets
            .iter()
            .map(|b| polytope_from_bounds(&BoundSet::new(b[0], b[1], b[2], b[3]).unwrap(), R0Mode::Full))
            .collect();
        hull_union(&parts).unwrap()
    })
}

fn enc() -> impl Strategy<Value = EncoderConferencing> {
    (0.0f64..3.0, 0.0f64..3.0).prop_map(|(a, b)| EncoderConferencing { cbar12: a, cbar21: b })
}

proptest! {
    #[test]
    fn output_is_downward_closed_and_holds_the_origin(r in region3(), e in enc(), t in (0.0f64..=1.0, 0.0f64..=1.0)) {
        let out = cme_transform(&r, &e).unwrap();
        prop_assert_eq!(out.dim(), 2);
        prop_assert!(out.contains(&[0.0, 0.0], 0.0));
        for v in out.vertices() {
            prop_assert!(out.contains(&[v[0] * t.0, v[1] * t.1], 1e-9));
        }
    }

    #[test]
    fn common_rate_does_not_create_sum_rate(r in region3(), e in enc()) {
        let out = cme_transform(&r, &e).unwrap();
        prop_assert!(out.support(&[1.0, 1.0]).unwrap() <= r.support(&[1.0, 1.0, 1.0]).unwrap() + 1e-9);
    }

    #[test]
    fn larger_links_give_larger_regions(r in region3(), e in enc(), d in (0.0f64..2.0, 0.0f64..2.0)) {
        let small = cme_transform(&r, &e).unwrap();
        let big = cme_transform(&r, &EncoderConferencing { cbar12: e.cbar12 + d.0, cbar21: e.cbar21 + d.1 }).unwrap();
        prop_assert!(region_containment(&small, &big, 1e-9).unwrap().contained);
    }

    #[test]
    fn every_vertex_maps_into_the_source_region(r in region3(), e in enc()) {
        let out = cme_transform(&r, &e).unwrap();
        for v in out.vertices() {
            let r12 = v[0].min(e.cbar12);
            let r21 = v[1].min(e.cbar21);
            prop_assert!(r.contains(&[r12 + r21, v[0] - r12, v[1] - r21], 1e-9));
        }
    }

    #[test]
    fn scan_is_an_inner_approximation(r in region3(), e in enc()) {
        let exact = cme_transform(&r, &e).unwrap();
        let scan = cme_transform_scan(&r, &e, 65).unwrap();
        prop_assert!(region_containment(&scan, &exact, 1e-9).unwrap().contained);
        let cell = scan.meta().approx_error;
        for d in [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]] {
            prop_assert!(exact.support(&d).unwrap() - scan.support(&d).unwrap() <= 2.0 * cell + 1e-9);
        }
    }
}

#[test]
fn unlimited_links_turn_private_rate_into_common_rate() {
    let r = polytope_from_bounds(&BoundSet::new(1.0, 1.0, 1.5, 2.0).unwrap(), R0Mode::Full);
    let all = EncoderConferencing { cbar12: f64::INFINITY, cbar21: f64::INFINITY };
    let out = cme_transform(&r, &all).unwrap();
    let tri = RateRegion::from_points(2, &[vec![2.0, 0.0], vec![0.0, 2.0]], RegionMeta::default()).unwrap();
    assert!(region_containment(&out, &tri, 1e-12).unwrap().contained);
    assert!(region_containment(&tri, &out, 1e-12).unwrap().contained);
}

#[test]
fn gaussian_source_without_links_is_the_private_slice() {
    let ch = GaussianCmChannel { g11: 1.0, g12: 0.5, g21: 0.5, g22: 1.0, p1: 3.0, p2: 3.0, c12: 0.3, c21: 0.3 };
    let grid = GridSpec { power_points: 9, ..GridSpec::default() };
    let out = cme_outer(&CmeSource::Gaussian(&ch), &EncoderConferencing::NONE, &grid).unwrap();
    let slice = cmac_core::gaussian::gaussian_region(&ch, cmac_core::Scheme::Outer, &grid, R0Mode::ZeroCommon).unwrap();
    assert!(region_containment(&out, &slice, 1e-9).unwrap().contained);
    assert!(region_containment(&slice, &out, 1e-9).unwrap().contained);
}

#[test]
fn planar_input_is_rejected() {
    let r = RateRegion::from_points(2, &[vec![1.0, 1.0]], RegionMeta::default()).unwrap();
    assert!(matches!(cme_transform(&r, &EncoderConferencing::NONE), Err(Error::Usage(_))));
}
