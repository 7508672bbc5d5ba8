use norcode::channel::{read_density, sample_read, sample_read_conditioned, LevelGrid, NoiseModel, RngStream};
use proptest::prelude::*;

/// Composite Simpson over [lo, hi] with `n` (even) panels. Endpoints are
/// nudged inward so a jump at either end contributes its one-sided value.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let eps = h * 1e-9;
    let mut s = f(lo + eps) + f(hi - eps);
    for i in 1..n {
        let x = lo + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

/// Quadrature of the read law for one level, split at the window edges.
/// With W = 0 the window collapses to an atom of mass 1 - T, added here.
/// Returns (total, mass above the window).
fn quadrature(level: usize, grid: &LevelGrid, noise: &NoiseModel) -> (f64, f64) {
    let center = grid.level(level).unwrap();
    let half = grid.w() / 2.0;
    let reach = 25.0 / noise.a;
    let f = |v: f64| read_density(v, level, grid, noise).unwrap();
    let below = simpson(f, center - half - reach, center - half, 200_000);
    let above = simpson(f, center + half, center + half + reach, 200_000);
    let inside = if half > 0.0 { simpson(f, center - half, center + half, 2_000) } else { 1.0 - noise.tail };
    (below + inside + above, above)
}

#[test]
fn density_integrates_to_one() {
    for &(a, tail, w) in &[(1.0, 1.0, 0.0), (2.0, 0.3, 1.0), (0.5, 1e-3, 4.0), (7.0, 0.0, 0.25)] {
        let noise = NoiseModel::new(a, tail, w).unwrap();
        let grid = LevelGrid::five_level(-1.0, 3.0, w).unwrap();
        for level in 0..5 {
            let (total, above) = quadrature(level, &grid, &noise);
            assert!((total - 1.0).abs() < 1e-9, "a={a} T={tail} W={w} level={level}: {total}");
            assert!((above - tail / 2.0).abs() < 1e-9, "upper tail mass {above} vs {}", tail / 2.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalization_holds_for_any_valid_model(
        a in 0.2f64..20.0,
        tail in 0.0f64..=1.0,
        w in 0.0f64..3.0,
        delta0 in 0.5f64..5.0,
        l0 in -10.0f64..10.0,
        level in 0usize..5,
    ) {
        prop_assume!(3.0 * delta0 > w);
        let noise = NoiseModel::new(a, tail, w).unwrap();
        let grid = LevelGrid::five_level(l0, delta0, w).unwrap();
        let (total, above) = quadrature(level, &grid, &noise);
        prop_assert!((total - 1.0).abs() < 1e-9, "total {}", total);
        prop_assert!((above - tail / 2.0).abs() < 1e-9, "above {}", above);
    }
}

#[test]
fn decision_boundaries_sit_mid_gap() {
    let grid = LevelGrid::five_level(0.5, 2.0, 0.8).unwrap();
    let delta = grid.margin();
    for x in 0..4 {
        let expected = grid.level(x).unwrap() + grid.w() / 2.0 + delta / 2.0;
        assert!((grid.decision_boundary(x).unwrap() - expected).abs() < 1e-12);
    }
}

#[test]
fn tail_excess_is_memoryless() {
    let (a, tail, w) = (2.0, 0.3, 1.0);
    let noise = NoiseModel::new(a, tail, w).unwrap();
    let grid = LevelGrid::five_level(0.0, 3.0, w).unwrap();
    let center = grid.level(2).unwrap();
    let mut rng = RngStream::new(11, 0);
    let excess: Vec<f64> = (0..1_000_000)
        .map(|_| (sample_read(2, &grid, &noise, &mut rng).unwrap() - center).abs() - w / 2.0)
        .filter(|e| *e > 0.0)
        .collect();
    let mean = 1.0 / (2.0 * a);
    for t in [0.0, 0.25, 0.5, 1.0] {
        let beyond: Vec<f64> = excess.iter().filter(|e| **e > t).map(|e| e - t).collect();
        let n = beyond.len() as f64;
        let observed = beyond.iter().sum::<f64>() / n;
        let sigma = mean / n.sqrt();
        assert!((observed - mean).abs() < 3.0 * sigma, "t={t}: {observed} vs {mean} (n={n})");
    }
}

#[test]
fn forced_tail_always_leaves_window() {
    let noise = NoiseModel::new(1.5, 1e-6, 0.6).unwrap();
    let grid = LevelGrid::five_level(0.0, 2.0, 0.6).unwrap();
    let mut rng = RngStream::new(3, 1);
    for i in 0..20_000 {
        let level = i % 5;
        let (v, _) = sample_read_conditioned(level, &grid, &noise, true, &mut rng).unwrap();
        assert!((v - grid.level(level).unwrap()).abs() > 0.3);
    }
}

#[test]
fn window_reads_are_centered() {
    let w = 0.6;
    let noise = NoiseModel::new(1.5, 0.5, w).unwrap();
    let grid = LevelGrid::five_level(0.0, 2.0, w).unwrap();
    let center = grid.level(3).unwrap();
    let mut rng = RngStream::new(5, 2);
    let n = 200_000;
    let mut sum = 0.0;
    for _ in 0..n {
        let (v, _) = sample_read_conditioned(3, &grid, &noise, false, &mut rng).unwrap();
        assert!((v - center).abs() <= w / 2.0);
        sum += v;
    }
    let sigma = w / 12f64.sqrt() / (n as f64).sqrt();
    assert!((sum / n as f64 - center).abs() < 3.0 * sigma);
}

#[test]
fn mixture_matches_density_ks() {
    let (a, tail, w) = (1.0, 0.4, 1.5);
    let noise = NoiseModel::new(a, tail, w).unwrap();
    let grid = LevelGrid::five_level(0.0, 3.0, w).unwrap();
    let level = 1;
    let center = grid.level(level).unwrap();
    let mut rng = RngStream::new(2024, 0);
    let n = 1_000_000;
    let mut xs: Vec<f64> = (0..n).map(|_| sample_read(level, &grid, &noise, &mut rng).unwrap()).collect();
    xs.sort_by(f64::total_cmp);

    // CDF by quadrature between consecutive sorted samples, split at the
    // window edges where the density jumps.
    let f = |v: f64| read_density(v, level, &grid, &noise).unwrap();
    let edges = [center - w / 2.0, center + w / 2.0];
    let start = xs[0].min(center - w / 2.0 - 30.0 / a);
    let mut cdf = 0.0;
    let mut prev = start;
    let mut ks: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let mut lo = prev;
        for &e in &edges {
            if lo < e && e < x {
                cdf += simpson(f, lo, e, 8);
                lo = e;
            }
        }
        cdf += simpson(f, lo, x, 8);
        prev = x;
        let below = i as f64 / n as f64;
        let at = (i + 1) as f64 / n as f64;
        ks = ks.max((cdf - below).abs()).max((at - cdf).abs());
    }
    assert!(ks < 0.002, "KS statistic {ks}");
}

#[test]
fn streams_reproduce() {
    let mut a = RngStream::new(99, 7);
    let mut b = RngStream::new(99, 7);
    let mut c = RngStream::new(99, 8);
    let xa: Vec<f64> = (0..100).map(|_| a.uniform()).collect();
    let xb: Vec<f64> = (0..100).map(|_| b.uniform()).collect();
    let xc: Vec<f64> = (0..100).map(|_| c.uniform()).collect();
    assert_eq!(xa, xb);
    assert_ne!(xa, xc);
}
