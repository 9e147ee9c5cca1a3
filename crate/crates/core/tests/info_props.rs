use cmac_core::info::{binary_entropy, capacity_fn, entropy, mutual_information, JointPmf, Pmf};
use proptest::prelude::*;

fn joint(shape: Vec<usize>) -> impl Strategy<Value = JointPmf> {
    let n: usize = shape.iter().product();
    prop::collection::vec(0.0f64..1.0, n).prop_filter_map("nonzero mass", move |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-6).then(|| JointPmf::new(shape.clone(), w.iter().map(|x| x / total).collect()).unwrap())
    })
}

proptest! {
    #[test]
    fn chain_rule(j in joint(vec![2, 3, 2])) {
        // I(A;BC) = I(A;B) + I(A;C|B)
        let whole = mutual_information(&j, &[0], &[1, 2], &[]).unwrap();
        let parts = mutual_information(&j, &[0], &[1], &[]).unwrap() + mutual_information(&j, &[0], &[2], &[1]).unwrap();
        prop_assert!((whole - parts).abs() < 1e-9);
    }

    #[test]
    fn mutual_information_is_symmetric_and_bounded(j in joint(vec![3, 2, 2])) {
        let ab = mutual_information(&j, &[0], &[1], &[2]).unwrap();
        let ba = mutual_information(&j, &[1], &[0], &[2]).unwrap();
        prop_assert!((ab - ba).abs() < 1e-9);
        prop_assert!(ab >= 0.0);
        prop_assert!(ab <= j.entropy_of(&[1]).unwrap() + 1e-9);
    }

    #[test]
    fn data_processing(
        px in prop::collection::vec(0.01f64..1.0, 3),
        k1 in prop::collection::vec(0.01f64..1.0, 6),
        k2 in prop::collection::vec(0.01f64..1.0, 6),
    ) {
        // X -> Y -> Z with |X| = 3, |Y| = 2, |Z| = 3.
        let norm = |v: &[f64]| { let t: f64 = v.iter().sum(); v.iter().map(|x| x / t).collect::<Vec<_>>() };
        let px = norm(&px);
        let rows1: Vec<Vec<f64>> = k1.chunks(2).map(norm).collect();
        let rows2: Vec<Vec<f64>> = k2.chunks(3).map(norm).collect();
        let mut probs = Vec::new();
        for x in 0..3 { for y in 0..2 { for z in 0..3 { probs.push(px[x] * rows1[x][y] * rows2[y][z]); } } }
        let j = JointPmf::new(vec![3, 2, 3], probs).unwrap();
        let ixy = mutual_information(&j, &[0], &[1], &[]).unwrap();
        let ixz = mutual_information(&j, &[0], &[2], &[]).unwrap();
        prop_assert!(ixz <= ixy + 1e-9);
        prop_assert!(mutual_information(&j, &[0], &[2], &[1]).unwrap() < 1e-9);
    }

    #[test]
    fn capacity_is_concave_and_increasing(x in 0.0f64..1e4, y in 0.0f64..1e4, t in 0.0f64..1.0) {
        let mid = capacity_fn(t * x + (1.0 - t) * y).unwrap();
        let chord = t * capacity_fn(x).unwrap() + (1.0 - t) * capacity_fn(y).unwrap();
        prop_assert!(mid >= chord - 1e-12);
        if x < y {
            prop_assert!(capacity_fn(x).unwrap() <= capacity_fn(y).unwrap());
        }
    }

    #[test]
    fn entropy_is_at_most_log_alphabet(w in prop::collection::vec(0.0f64..1.0, 1..8)) {
        let total: f64 = w.iter().sum();
        prop_assume!(total > 1e-6);
        let p = Pmf::new(w.iter().map(|x| x / total).collect()).unwrap();
        let h = entropy(&p);
        prop_assert!(h >= 0.0 && h <= (w.len() as f64).log2() + 1e-12);
    }
}

#[test]
fn reference_values() {
    assert_eq!(capacity_fn(0.0).unwrap(), 0.0);
    assert!((capacity_fn(3.0).unwrap() - 1.0).abs() < 1e-15);
    assert!(capacity_fn(-1.0).is_err());
    assert!((binary_entropy(0.11) - 0.4999).abs() < 1e-4);
    assert!((entropy(&Pmf::uniform(4).unwrap()) - 2.0).abs() < 1e-15);
}
