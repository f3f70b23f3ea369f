//! Independent oracles and fixture generators shared by the integration
//! tests. Nothing here calls into the code paths it is used to check.

#![allow(dead_code)]

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use topoperiod::synth::{Envelope, EnvelopePoint, PiecewiseSinusoidModel};
use topoperiod::{PointCloud, Signal, SplitMix64};

pub const RATE: f64 = 44_100.0;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn random_cloud(rng: &mut SplitMix64, n: usize, dim: usize) -> PointCloud {
    PointCloud::new(dim, (0..n * dim).map(|_| rng.uniform(-1.0, 1.0)).collect()).unwrap()
}

/// Rank of a set of GF(2) vectors stored as bit masks.
fn rank(columns: impl IntoIterator<Item = u128>) -> usize {
    let mut basis = [0u128; 128];
    let mut r = 0;
    for mut v in columns {
        while v != 0 {
            let top = 127 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                r += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    r
}

/// `(dim, birth, death)` for every interval in dimensions 0 and 1 of the
/// full Rips filtration (up to triangles), from persistent Betti numbers
/// computed as boundary-matrix ranks at every pair of filtration values.
/// Deaths of essential classes are `f64::INFINITY`.
pub fn rank_oracle(cloud: &PointCloud) -> Vec<(usize, f64, f64)> {
    let n = cloud.len();
    assert!(n <= 10, "oracle sized for tiny clouds");
    let d = |i: usize, j: usize| dist(cloud.point(i), cloud.point(j));

    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b, d(a, b)));
        }
    }
    let edge_index = |a: usize, b: usize| edges.iter().position(|e| e.0 == a && e.1 == b).unwrap();
    let mut triangles = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let value = d(a, b).max(d(a, c)).max(d(b, c));
                let mask = (1u128 << edge_index(a, b)) | (1u128 << edge_index(a, c)) | (1u128 << edge_index(b, c));
                triangles.push((mask, value));
            }
        }
    }

    let mut values: Vec<f64> = std::iter::once(0.0)
        .chain(edges.iter().map(|e| e.2))
        .chain(triangles.iter().map(|t| t.1))
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let r = values.len();

    let edge_cols = |eps: f64| {
        edges
            .iter()
            .filter(move |e| e.2 <= eps)
            .map(|e| (1u128 << e.0) | (1u128 << e.1))
    };
    let edges_in = |eps: f64| {
        edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.2 <= eps)
            .fold(0u128, |m, (k, _)| m | (1u128 << k))
    };
    let tri_cols = |eps: f64| triangles.iter().filter(move |t| t.1 <= eps).map(|t| t.0);

    // persistent Betti number of classes alive from values[a] through values[b]
    let beta = |dim: usize, a: usize, b: usize| -> i64 {
        let (ea, eb) = (values[a], values[b]);
        match dim {
            0 => n as i64 - rank(edge_cols(eb)) as i64,
            _ => {
                let cycles = edges_in(ea).count_ones() as i64 - rank(edge_cols(ea)) as i64;
                let outside = !edges_in(ea);
                let bounded = rank(tri_cols(eb)) as i64 - rank(tri_cols(eb).map(|c| c & outside)) as i64;
                cycles - bounded
            }
        }
    };

    let mut out = Vec::new();
    for dim in 0..2 {
        let b = |a: isize, c: usize| if a < 0 { 0 } else { beta(dim, a as usize, c) };
        for i in 0..r {
            let ii = i as isize;
            for j in i + 1..r {
                let mult = b(ii, j - 1) - b(ii, j) - b(ii - 1, j - 1) + b(ii - 1, j);
                assert!(mult >= 0);
                for _ in 0..mult {
                    out.push((dim, values[i], values[j]));
                }
            }
            let mult = b(ii, r - 1) - b(ii - 1, r - 1);
            for _ in 0..mult {
                out.push((dim, values[i], f64::INFINITY));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.total_cmp(&y.2)));
    out
}

/// Bottleneck distance between finite diagrams by trying every partial
/// matching.
pub fn exhaustive_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    fn diag(p: (f64, f64)) -> f64 {
        (p.1 - p.0) / 2.0
    }
    fn go(a: &[(f64, f64)], b: &[(f64, f64)], i: usize, used: &mut Vec<bool>, worst: f64, best: &mut f64) {
        if worst >= *best {
            return;
        }
        if i == a.len() {
            let rest = b
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(&q, _)| diag(q))
                .fold(worst, f64::max);
            *best = best.min(rest);
            return;
        }
        go(a, b, i + 1, used, worst.max(diag(a[i])), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                let c = (a[i].0 - b[j].0).abs().max((a[i].1 - b[j].1).abs());
                go(a, b, i + 1, used, worst.max(c), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(a, b, 0, &mut vec![false; b.len()], 0.0, &mut best);
    best
}

#[derive(Debug, Clone, Copy)]
pub struct Ellipse {
    pub center: (f64, f64),
    /// Orientation of the first principal axis in degrees, in `[0, 180)`.
    pub angle_deg: f64,
    pub major: f64,
    pub minor: f64,
}

/// Algebraic least-squares conic `ax² + bxy + cy² + dx + ey + f = 0`
/// through the points, read off as an ellipse.
pub fn fit_conic(cloud: &PointCloud) -> Ellipse {
    let n = cloud.len();
    let design = DMatrix::from_fn(n, 6, |i, k| {
        let p = cloud.point(i);
        let (x, y) = (p[0], p[1]);
        [x * x, x * y, y * y, x, y, 1.0][k]
    });
    let svd = design.svd(false, true);
    let vt = svd.v_t.unwrap();
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .unwrap()
        .0;
    let v: Vec<f64> = (0..6).map(|j| vt[(k, j)]).collect();
    let (a, b, c, d, e, f) = (v[0], v[1], v[2], v[3], v[4], v[5]);

    let det = 4.0 * a * c - b * b;
    let x0 = (b * e - 2.0 * c * d) / det;
    let y0 = (b * d - 2.0 * a * e) / det;
    let f0 = f + (d * x0 + e * y0) / 2.0;

    let theta = 0.5 * b.atan2(a - c);
    let (s, co) = theta.sin_cos();
    let l1 = a * co * co + b * co * s + c * s * s;
    let l2 = a * s * s - b * co * s + c * co * co;
    let r1 = (-f0 / l1).sqrt();
    let r2 = (-f0 / l2).sqrt();
    Ellipse {
        center: (x0, y0),
        angle_deg: theta.to_degrees().rem_euclid(180.0),
        major: r1.max(r2),
        minor: r1.min(r2),
    }
}

pub fn sinusoid(amplitude: f64, period_samples: f64, phase: f64, len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| amplitude * (TAU * i as f64 / period_samples + phase).sin())
        .collect()
}

/// Largest distance between consecutive points of an embedding.
pub fn sample_step(cloud: &PointCloud) -> f64 {
    (1..cloud.len())
        .map(|i| dist(cloud.point(i - 1), cloud.point(i)))
        .fold(0.0, f64::max)
}

/// Frequencies for `segments` pieces starting in `[320, 380]` Hz and
/// alternately stepping up and down by a factor in `[1.35, 1.5]`.
pub fn wheeze_frequencies(rng: &mut SplitMix64, segments: usize) -> Vec<f64> {
    let mut f = vec![rng.uniform(320.0, 380.0)];
    for k in 1..segments {
        let ratio = rng.uniform(1.35, 1.5);
        f.push(if k % 2 == 1 { f[k - 1] * ratio } else { f[k - 1] / ratio });
    }
    f
}

/// A random wheeze-like model: 2 to 5 segments of 20 to 40 ms and an
/// envelope through breakpoints in `[0.5, 1]` every 8 to 20 ms, the last
/// one at or past the end.
pub fn random_wheeze(rng: &mut SplitMix64, segments: usize) -> (PiecewiseSinusoidModel, Vec<f64>) {
    let freqs = wheeze_frequencies(rng, segments);
    let mut bounds = vec![0.0];
    for _ in 0..segments {
        let last = *bounds.last().unwrap();
        bounds.push(last + rng.uniform(0.020, 0.040));
    }
    let end = *bounds.last().unwrap();
    let mut env = Vec::new();
    let mut t = 0.0;
    loop {
        env.push(EnvelopePoint {
            t,
            a: rng.uniform(0.5, 1.0),
        });
        if t >= end {
            break;
        }
        t += rng.uniform(0.008, 0.020);
    }
    let periods: Vec<f64> = freqs.iter().map(|f| 1.0 / f).collect();
    let phase0 = rng.uniform(0.0, TAU);
    let model =
        PiecewiseSinusoidModel::with_continuous_phases(&bounds, &periods, phase0, Envelope::new(env).unwrap()).unwrap();
    (model, freqs)
}

pub fn white_noise(seed: u64, len: usize) -> Signal {
    let mut rng = SplitMix64::new(seed);
    Signal::new((0..len).map(|_| rng.normal()).collect(), RATE).unwrap()
}

pub fn with_noise(s: &Signal, level: f64, seed: u64) -> Signal {
    let mut rng = SplitMix64::new(seed);
    let peak = s.peak();
    Signal::new(
        s.samples().iter().map(|x| x + level * peak * rng.normal()).collect(),
        s.sample_rate_hz(),
    )
    .unwrap()
}

/// Betti numbers `(β0, β1)` of the Rips complex at scale `eps`, from ranks
/// of the boundary matrices stored as bitset columns. Slower than
/// [`rank_oracle`] per call but not limited to tiny clouds.
pub fn betti_at(cloud: &PointCloud, eps: f64) -> (usize, usize) {
    let n = cloud.len();
    let d = |i: usize, j: usize| dist(cloud.point(i), cloud.point(j));
    let mut edge_id = std::collections::HashMap::new();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if d(a, b) <= eps {
                edge_id.insert((a, b), edges.len());
                edges.push((a, b));
            }
        }
    }
    let words = |bits: usize| bits.div_ceil(64);
    let column = |bits: usize, ones: &[usize]| {
        let mut c = vec![0u64; words(bits)];
        for &k in ones {
            c[k / 64] ^= 1 << (k % 64);
        }
        c
    };
    let rank_of = |bits: usize, cols: Vec<Vec<u64>>| {
        let mut pivots: std::collections::HashMap<usize, Vec<u64>> = std::collections::HashMap::new();
        for mut c in cols {
            loop {
                let top = (0..c.len())
                    .rev()
                    .find(|&w| c[w] != 0)
                    .map(|w| w * 64 + 63 - c[w].leading_zeros() as usize);
                let Some(top) = top else { break };
                match pivots.get(&top) {
                    Some(p) => c.iter_mut().zip(p).for_each(|(x, y)| *x ^= y),
                    None => {
                        pivots.insert(top, c);
                        break;
                    }
                }
            }
        }
        let _ = bits;
        pivots.len()
    };
    let r1 = rank_of(n, edges.iter().map(|&(a, b)| column(n, &[a, b])).collect());
    let mut tris = Vec::new();
    for &(a, b) in &edges {
        for c in b + 1..n {
            if let (Some(&ac), Some(&bc)) = (edge_id.get(&(a, c)), edge_id.get(&(b, c))) {
                tris.push(column(edges.len(), &[edge_id[&(a, b)], ac, bc]));
            }
        }
    }
    let r2 = rank_of(edges.len(), tris);
    (n - r1, edges.len() - r1 - r2)
}
