mod common;

use std::f64::consts::TAU;

use common::{fit_conic, sample_step, sinusoid, RATE};
use proptest::prelude::*;
use topoperiod::embedding::{delay_embed_samples, ellipse_radii};
use topoperiod::synth::{Envelope, PiecewiseSinusoidModel};
use topoperiod::{acl, delay_embed, hausdorff, select_delay, synthesize, DelayStrategy, Signal};

/// Residual of `(x, y)` against the curve traced by
/// `(A·sin θ, A·sin(θ + δ))`, i.e. `x² − 2xy·cos δ + y² − A²·sin² δ`.
fn ellipse_residual(x: f64, y: f64, amplitude: f64, delta: f64) -> f64 {
    x * x - 2.0 * x * y * delta.cos() + y * y - (amplitude * delta.sin()).powi(2)
}

#[test]
fn quarter_period_delay_gives_a_circle() {
    let x = sinusoid(0.7, 100.0, 0.3, 1000);
    let cloud = delay_embed_samples(&x, 25, 2).unwrap();
    for p in cloud.points() {
        assert!((p[0].hypot(p[1]) - 0.7).abs() < 1e-12);
    }
    assert_eq!(ellipse_radii(0.7, 100.0, 25.0).0, 0.7);
}

#[test]
fn circumscribed_square() {
    for (amp, period, delay) in [(1.0, 80.3, 13), (2.5, 211.7, 40), (0.4, 57.0, 31)] {
        let x = sinusoid(amp, period, 0.0, 5000);
        let cloud = delay_embed_samples(&x, delay, 2).unwrap();
        let max = cloud.coords().iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let step = TAU / period;
        assert!(max <= amp && max >= amp * (step / 2.0).cos(), "{max}");
    }
}

#[test]
fn transition_points_are_few() {
    let periods = [1.0 / 340.0, 1.0 / 470.0, 1.0 / 330.0];
    let model = PiecewiseSinusoidModel::with_continuous_phases(
        &[0.0, 0.03, 0.06, 0.095],
        &periods,
        0.2,
        Envelope::constant(1.0).unwrap(),
    )
    .unwrap();
    let s = synthesize(&model, RATE).unwrap();
    let j = select_delay(&acl(&s), DelayStrategy::FirstZero).unwrap();
    let cloud = delay_embed(&s, j, 2).unwrap();
    let tau = j as f64 / RATE;
    let stray = cloud
        .points()
        .filter(|p| {
            periods
                .iter()
                .all(|t| ellipse_residual(p[0], p[1], 1.0, TAU * tau / t).abs() > 1e-2)
        })
        .count();
    let fraction = stray as f64 / cloud.len() as f64;
    assert!(fraction > 0.0 && fraction <= 0.05, "{fraction}");
}

/// `(amplitude, period in samples, delay in samples)` with the delay away
/// from multiples of half a period.
fn ellipse_case() -> impl Strategy<Value = (f64, f64, usize)> {
    (0.2f64..3.0, 40.0f64..400.0, 0.05f64..0.45).prop_filter_map("delay rounds onto a degenerate ratio", |(a, n, r)| {
        let j = (r * n).round() as usize;
        let ratio = j as f64 / n;
        let c = (TAU * ratio).cos();
        (j >= 1 && c.abs() > 0.1 && c.abs() < 0.98).then_some((a, n, j))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn embedding_is_the_predicted_ellipse((amp, period, delay) in ellipse_case(), phase in 0.0f64..TAU) {
        let x = sinusoid(amp, period, phase, 3 * period as usize + delay + 10);
        let cloud = delay_embed_samples(&x, delay, 2).unwrap();
        let e = fit_conic(&cloud);
        let (big, small) = ellipse_radii(amp, period, delay as f64);
        prop_assert!(((e.angle_deg % 90.0) - 45.0).abs() <= 0.5, "angle {}", e.angle_deg);
        prop_assert!((e.major - big).abs() <= 1e-3 * amp);
        prop_assert!((e.minor - small).abs() <= 1e-3 * amp);
        prop_assert!(e.center.0.abs() < 1e-6 * amp && e.center.1.abs() < 1e-6 * amp);
    }

    #[test]
    fn phase_shift_does_not_move_the_embedding(
        period in 30.0f64..200.0,
        phase in 0.0f64..TAU,
        ratio in 0.05f64..0.45,
    ) {
        let delay = ((ratio * period).round() as usize).max(1);
        let len = (10.0 * period) as usize + delay + 1;
        let a = delay_embed_samples(&sinusoid(1.0, period, 0.0, len), delay, 2).unwrap();
        let b = delay_embed_samples(&sinusoid(1.0, period, phase, len), delay, 2).unwrap();
        let bound = 2.0 * (std::f64::consts::PI / period).sin();
        prop_assert!(hausdorff(&a, &b).unwrap() <= bound);
    }

    /// Equal delay-to-period ratios give the same curve.
    #[test]
    fn equal_delay_ratio_gives_equal_embeddings(
        j1 in 5usize..60,
        j2 in 5usize..60,
        ratio in 0.05f64..0.45,
    ) {
        let (n1, n2) = (j1 as f64 / ratio, j2 as f64 / ratio);
        let a = delay_embed_samples(&sinusoid(1.0, n1, 0.0, (3.0 * n1) as usize + j1), j1, 2).unwrap();
        let b = delay_embed_samples(&sinusoid(1.0, n2, 0.0, (3.0 * n2) as usize + j2), j2, 2).unwrap();
        let step = sample_step(&a).max(sample_step(&b));
        prop_assert!(hausdorff(&a, &b).unwrap() <= step);
    }

    #[test]
    fn first_zero_is_a_quarter_period(period in 40usize..160) {
        let s = Signal::new(sinusoid(1.0, period as f64, 0.0, 20 * period), 1000.0).unwrap();
        let j = select_delay(&acl(&s), DelayStrategy::FirstZero).unwrap() as f64;
        prop_assert!((j - period as f64 / 4.0).abs() <= 1.0);
    }
}
