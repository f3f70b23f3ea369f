mod common;

use common::{dist, random_cloud};
use proptest::prelude::*;
use topoperiod::subsample::{covering_radius, maxmin_indices, random_indices};
use topoperiod::{maxmin, random_subsample, subsample, SplitMix64, SubsampleMethod};

fn min_dist_to(cloud: &topoperiod::PointCloud, p: &[f64], chosen: &[usize]) -> f64 {
    chosen
        .iter()
        .map(|&j| dist(p, cloud.point(j)))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn maxmin_covers_no_worse_than_random_on_average() {
    let mut rng = SplitMix64::new(11);
    for _ in 0..5 {
        let cloud = random_cloud(&mut rng, 600, 2);
        let mm = covering_radius(&cloud, &maxmin(&cloud, 40, 3).unwrap());
        let random: f64 = (0..20)
            .map(|seed| covering_radius(&cloud, &random_subsample(&cloud, 40, seed).unwrap()))
            .sum::<f64>()
            / 20.0;
        assert!(mm <= random, "{mm} > {random}");
    }
}

#[test]
fn errors_have_kinds() {
    let cloud = random_cloud(&mut SplitMix64::new(0), 5, 2);
    assert_eq!(maxmin(&cloud, 0, 0).unwrap_err().kind(), "ZeroCount");
    assert_eq!(random_subsample(&cloud, 6, 0).unwrap_err().kind(), "NTooLarge");
    assert_eq!(maxmin_indices(&cloud, 2, 5).unwrap_err().kind(), "BadStart");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every pick is a farthest remaining point, recomputed from scratch.
    #[test]
    fn maxmin_is_greedy(seed in any::<u64>(), len in 2usize..60, frac in 0.0f64..1.0, start_frac in 0.0f64..1.0) {
        let cloud = random_cloud(&mut SplitMix64::new(seed), len, 2);
        let n = 1 + ((len - 1) as f64 * frac) as usize;
        let start = ((len as f64 * start_frac) as usize).min(len - 1);
        let idx = maxmin_indices(&cloud, n, start).unwrap();
        prop_assert_eq!(idx[0], start);
        for k in 1..idx.len() {
            let chosen = &idx[..k];
            let best = (0..len)
                .filter(|i| !chosen.contains(i))
                .map(|i| min_dist_to(&cloud, cloud.point(i), chosen))
                .fold(0.0, f64::max);
            prop_assert_eq!(min_dist_to(&cloud, cloud.point(idx[k]), chosen), best);
        }
    }

    #[test]
    fn subsamples_are_distinct_subsets(seed in any::<u64>(), len in 1usize..80, frac in 0.0f64..1.0, maxmin_method in any::<bool>()) {
        let n = 1 + ((len - 1) as f64 * frac) as usize;
        let idx = if maxmin_method {
            let cloud = random_cloud(&mut SplitMix64::new(seed), len, 3);
            maxmin_indices(&cloud, n, 0).unwrap()
        } else {
            random_indices(len, n, seed).unwrap()
        };
        prop_assert_eq!(idx.len(), n);
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), n);
        prop_assert!(idx.iter().all(|&i| i < len));
    }

    #[test]
    fn same_seed_same_sample(seed in any::<u64>(), maxmin_method in any::<bool>()) {
        let cloud = random_cloud(&mut SplitMix64::new(seed ^ 0x5555), 50, 2);
        let method = if maxmin_method { SubsampleMethod::Maxmin } else { SubsampleMethod::Random };
        prop_assert_eq!(subsample(&cloud, 10, seed, method).unwrap(), subsample(&cloud, 10, seed, method).unwrap());
    }

    #[test]
    fn full_subsample_is_a_permutation(seed in any::<u64>(), len in 1usize..40) {
        let mut idx = random_indices(len, len, seed).unwrap();
        idx.sort_unstable();
        prop_assert_eq!(idx, (0..len).collect::<Vec<_>>());
    }
}
