use norcode::montecarlo::{confidence_interval, run, run_stratified, run_trials, DataMode, ErrorClass, SimConfig};

fn config(protected: bool, trials: u64, seed: u64) -> SimConfig {
    let mut c = SimConfig::dimensionless(6.0, 0.0, 1.0);
    c.protected = protected;
    c.trials = trials;
    c.seed = seed;
    c
}

#[test]
fn same_config_is_bit_identical() {
    for protected in [false, true] {
        let mut c = config(protected, 200_000, 5);
        c.shards = 3;
        assert_eq!(run_trials(&c).unwrap(), run_trials(&c).unwrap());
    }
    let mut s = SimConfig::dimensionless(6.9, 6.9, 1e-2);
    s.trials = 20_000;
    s.stratified = true;
    s.seed = 8;
    assert_eq!(run_stratified(&s).unwrap(), run_stratified(&s).unwrap());
}

#[test]
fn shard_count_only_reassigns_trials() {
    let mut one = config(true, 2_000_000, 17);
    let mut eight = one.clone();
    one.shards = 1;
    eight.shards = 8;
    let a = run_trials(&one).unwrap();
    let b = run_trials(&eight).unwrap();
    assert_eq!(a.trials, b.trials);
    let sigma = |p: f64, n: u64| (p * (1.0 - p) / n as f64).sqrt();
    let (pa, pb) = (a.word_error_rate(), b.word_error_rate());
    let combined = (sigma(pa, a.trials).powi(2) + sigma(pb, b.trials).powi(2)).sqrt();
    assert!((pa - pb).abs() < 3.0 * combined, "{pa} vs {pb}");
}

#[test]
fn voltage_units_do_not_matter() {
    let base = config(true, 300_000, 23);
    let mut scaled = base.clone();
    scaled.a = 4.0;
    scaled.delta0 = base.delta0 / 4.0;
    scaled.w = base.w / 4.0;
    scaled.l0 = base.l0 / 4.0;
    let x = run_trials(&base).unwrap();
    let y = run_trials(&scaled).unwrap();
    assert_eq!(x.word_error_events, y.word_error_events);
    assert_eq!(x.per_class, y.per_class);
}

#[test]
fn class_counts_partition_errors() {
    for mode in [DataMode::Uniform, DataMode::Interior] {
        let mut c = config(true, 300_000, 2);
        c.data_mode = mode;
        let e = run(&c).unwrap();
        assert_eq!(e.per_class.total(), e.word_error_events);
        assert!(e.ci95.contains(e.event_rate_per_bit));
        assert!(e.event_rate_per_bit <= e.hamming_rate * 8.0);
        assert_eq!(e.per_class.get(ErrorClass::None), 0.0);
    }
}

#[test]
fn unprotected_has_no_classes() {
    let e = run_trials(&config(false, 100_000, 4)).unwrap();
    assert!(e.word_error_events > 0.0);
    assert!(e.ci95.contains(e.event_rate_per_bit));
}

#[test]
fn wilson_examples() {
    let zero = confidence_interval(0, 1_000_000).unwrap();
    assert!(zero.contains(0.0) && zero.hi < 4e-6);
    let half = confidence_interval(500_000, 1_000_000).unwrap();
    assert!((half.lo - 0.499).abs() < 5e-4 && (half.hi - 0.501).abs() < 5e-4);
    assert!(confidence_interval(1_000_000, 1_000_000).unwrap().contains(1.0));
}

#[test]
fn invalid_configs_are_rejected() {
    let mut c = config(true, 0, 1);
    assert!(run(&c).is_err());
    c.trials = 10;
    c.shards = 0;
    assert!(run(&c).is_err());
    let mut s = SimConfig::dimensionless(6.0, 0.0, 0.5);
    s.stratified = true;
    s.trials = 10;
    assert!(run(&s).is_err());
}
