mod common;

use common::{betti_at, random_cloud, rank_oracle};
use proptest::prelude::*;
use topoperiod::persistence::betti_curve;
use topoperiod::{
    persistent_homology, rips_filtration, rips_persistence, Interval, MaxEps, PersistenceDiagram, PointCloud,
    SplitMix64,
};

fn triples(d: &PersistenceDiagram) -> Vec<(usize, f64, f64)> {
    d.intervals().iter().map(|i| (i.dim, i.birth, i.death)).collect()
}

fn square() -> PointCloud {
    PointCloud::from_points(2, &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap()
}

#[test]
fn square_matches_rank_oracle() {
    let oracle = rank_oracle(&square());
    let s2 = 2f64.sqrt();
    assert_eq!(
        oracle,
        vec![
            (0, 0.0, 1.0),
            (0, 0.0, 1.0),
            (0, 0.0, 1.0),
            (0, 0.0, f64::INFINITY),
            (1, 1.0, s2)
        ]
    );
    let d = persistent_homology(&rips_filtration(&square(), 2, MaxEps::Auto).unwrap());
    assert_eq!(triples(&d), oracle);
}

#[test]
fn square_betti_curve() {
    let d = persistent_homology(&rips_filtration(&square(), 2, MaxEps::Auto).unwrap());
    assert_eq!(d.betti(0, 1.2), 1);
    assert_eq!(d.betti(1, 1.2), 1);
    assert_eq!(d.betti(0, -0.5), 0);
    assert_eq!(d.betti(1, 2f64.sqrt()), 0);
    assert_eq!(betti_curve(&d, 1).value_at(3.0), 0);
}

#[test]
fn circle_bar_agrees_with_rank_oracle() {
    let n = 64;
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            [t.cos(), t.sin()]
        })
        .collect();
    let cloud = PointCloud::from_points(2, &pts).unwrap();
    let d = rips_persistence(&cloud, MaxEps::Auto).unwrap();
    let bars: Vec<Interval> = d.in_dim(1).copied().collect();
    assert_eq!(bars.len(), 1);
    let bar = bars[0];
    assert!((bar.birth - 2.0 * (std::f64::consts::PI / n as f64).sin()).abs() < 1e-12);
    assert!(bar.death.is_finite());

    let below = |v: f64| v * (1.0 - 1e-9);
    assert_eq!(betti_at(&cloud, below(bar.birth)).1, 0);
    assert_eq!(betti_at(&cloud, bar.birth).1, 1);
    assert_eq!(betti_at(&cloud, below(bar.death)).1, 1);
    assert_eq!(betti_at(&cloud, bar.death).1, 0);
}

#[test]
fn explicit_and_implicit_routes_agree_on_larger_clouds() {
    let mut rng = SplitMix64::new(99);
    for n in [30, 45, 60] {
        let c = random_cloud(&mut rng, n, 2);
        let explicit = persistent_homology(&rips_filtration(&c, 2, MaxEps::Auto).unwrap());
        assert_eq!(rips_persistence(&c, MaxEps::Auto).unwrap(), explicit);
    }
}

#[test]
fn diagram_json_schema() {
    let d = persistent_homology(&rips_filtration(&square(), 2, MaxEps::Auto).unwrap());
    let v: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 5);
    assert!(arr.iter().any(|i| i["death"].is_null()));
    assert_eq!(PersistenceDiagram::from_json(&d.to_json()).unwrap(), d);
}

fn small_cloud() -> impl Strategy<Value = PointCloud> {
    (1usize..=8)
        .prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, 2 * n).prop_map(|c| PointCloud::new(2, c).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_rank_oracle(cloud in small_cloud()) {
        let d = persistent_homology(&rips_filtration(&cloud, 2, MaxEps::Auto).unwrap());
        prop_assert_eq!(triples(&d), rank_oracle(&cloud));
    }

    #[test]
    fn h0_counts_points_and_decreases(cloud in small_cloud()) {
        let d = rips_persistence(&cloud, MaxEps::Auto).unwrap();
        prop_assert_eq!(d.betti(0, 0.0), cloud.len());
        let mut prev = usize::MAX;
        for k in 0..=40 {
            let b = d.betti(0, k as f64 * 0.1);
            prop_assert!(b <= prev);
            prev = b;
        }
        prop_assert_eq!(d.in_dim(0).filter(|i| !i.is_finite()).count(), 1);
    }

    #[test]
    fn order_independent(cloud in small_cloud(), seed in any::<u64>()) {
        let mut idx: Vec<usize> = (0..cloud.len()).collect();
        let mut rng = SplitMix64::new(seed);
        for i in (1..idx.len()).rev() {
            idx.swap(i, rng.below(i + 1));
        }
        let a = rips_persistence(&cloud, MaxEps::Auto).unwrap();
        let b = rips_persistence(&cloud.select(&idx), MaxEps::Auto).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn euler_characteristic_is_consistent(
        coords in (1usize..=6).prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, 2 * n)),
    ) {
        let cloud = PointCloud::new(2, coords).unwrap();
        let f = rips_filtration(&cloud, 6, MaxEps::Auto).unwrap();
        let d = persistent_homology(&f);
        let mut values: Vec<f64> = f.simplices.iter().map(|s| s.value).collect();
        values.dedup();
        for eps in values {
            let chain: i64 = f
                .simplices
                .iter()
                .filter(|s| s.value <= eps)
                .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
                .sum();
            let homology: i64 = (0..6)
                .map(|k| d.betti(k, eps) as i64 * if k % 2 == 0 { 1 } else { -1 })
                .sum();
            prop_assert_eq!(chain, homology);
        }
    }
}
