//! Write -> noisy read -> decode simulation of stored words.
//!
//! A plain run draws every cell from the full read law. A stratified run
//! conditions on the number `k` of cells that land in a tail, simulates each
//! `k >= 1` separately and recombines with the binomial weights
//! `C(4,k) T^k (1-T)^(4-k)`. With no tail cell every read stays inside its
//! program window, which is closer to its level than the decision boundary,
//! so `k = 0` never errs and costs nothing.
//!
//! Trial `t` of a plain run belongs to shard `t mod shards` and each shard
//! draws from stream `(seed, shard)`; shard tallies are integer counts merged
//! by addition, so results do not depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, ChannelPoint};
use crate::channel::{sample_around, sample_conditioned_around, LevelGrid, NoiseModel, RngStream};
use crate::codec::{read_byte, CodeBook, Codeword, DecodeOutcome, ReadVector, N_CELLS};
use crate::error::{Error, Result};

/// Bits carried by one simulated word (4 cells x 2 bits).
pub const BITS_PER_WORD: f64 = 8.0;

/// 95% two-sided normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataMode {
    /// Uniformly random bytes.
    #[default]
    Uniform,
    /// Only words whose cells all sit on inner levels, so every cell has a
    /// neighbour on both sides.
    Interior,
}

impl std::str::FromStr for DataMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(DataMode::Uniform),
            "interior" => Ok(DataMode::Interior),
            other => Err(Error::Config(format!("unknown data mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Tail slope parameter, 1/V.
    pub a: f64,
    /// Margin of the 4-level grid, V. The 5-level margin is derived from it.
    pub delta0: f64,
    /// Program window width, V.
    pub w: f64,
    /// Voltage of level 0.
    pub l0: f64,
    pub tail: f64,
    /// 5-level coded word when true, plain 4-level word otherwise.
    pub protected: bool,
    /// Words to simulate; per stratum for stratified runs.
    pub trials: u64,
    pub seed: u64,
    pub shards: u32,
    pub stratified: bool,
    pub data_mode: DataMode,
    /// Per-stratum sub-trial counts for `k = 1..=4` tail cells; overrides
    /// `trials` in stratified runs.
    pub stratum_trials: Option<[u64; 4]>,
}

impl SimConfig {
    /// Configuration with `a = 1`, so margins and widths are the
    /// dimensionless products `a*D0` and `a*W`.
    pub fn dimensionless(a_delta0: f64, a_w: f64, tail: f64) -> Self {
        Self {
            a: 1.0,
            delta0: a_delta0,
            w: a_w,
            l0: 0.0,
            tail,
            protected: true,
            trials: 1_000_000,
            seed: 0,
            shards: 1,
            stratified: false,
            data_mode: DataMode::Uniform,
            stratum_trials: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.shards == 0 {
            return Err(Error::Config("shards must be >= 1".into()));
        }
        if let Some(st) = self.stratum_trials {
            if st.iter().all(|&n| n == 0) {
                return Err(Error::Config("stratum trial counts are all zero".into()));
            }
        }
        self.noise()?;
        self.grid()?;
        Ok(())
    }

    pub fn noise(&self) -> Result<NoiseModel> {
        NoiseModel::new(self.a, self.tail, self.w)
    }

    pub fn grid(&self) -> Result<LevelGrid> {
        if self.protected {
            LevelGrid::five_level(self.l0, self.delta0, self.w)
        } else {
            LevelGrid::four_level(self.l0, self.delta0, self.w)
        }
    }

    /// The same channel as a dimensionless analytic operating point.
    pub fn channel_point(&self) -> Result<ChannelPoint> {
        ChannelPoint::from_dimensional(self.a, self.delta0, self.w, self.tail)
    }
}

/// Error patterns of the coded word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    None,
    /// Parity passed on a wrong word.
    #[serde(rename = "type_i")]
    TypeI,
    /// Correction landed two levels away in a single cell.
    #[serde(rename = "type_ii")]
    TypeII,
    /// Correction moved one cell up and another down by one level.
    #[serde(rename = "type_iii")]
    TypeIII,
    Other,
}

pub fn classify_error(written: &Codeword, outcome: &DecodeOutcome) -> ErrorClass {
    let decoded = outcome.decoded();
    let written = written.symbols();
    if decoded == written {
        return ErrorClass::None;
    }
    if outcome.parity_passed {
        return ErrorClass::TypeI;
    }
    let diffs: Vec<i16> =
        decoded.iter().zip(written.iter()).map(|(&d, &w)| d as i16 - w as i16).filter(|&d| d != 0).collect();
    match diffs.as_slice() {
        [d] if d.abs() == 2 => ErrorClass::TypeII,
        [a, b] if (*a == 1 && *b == -1) || (*a == -1 && *b == 1) => ErrorClass::TypeIII,
        _ => ErrorClass::Other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn scaled(&self, k: f64) -> Interval {
        Interval { lo: self.lo * k, hi: self.hi * k }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// Wilson score 95% interval for a binomial proportion.
pub fn confidence_interval(events: u64, trials: u64) -> Result<Interval> {
    if trials == 0 {
        return Err(Error::Precondition("confidence interval over zero trials".into()));
    }
    if events > trials {
        return Err(Error::Precondition(format!("{events} events exceed {trials} trials")));
    }
    let n = trials as f64;
    let p = events as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the bounds are exact at the extremes; keep rounding from excluding them
    let lo = if events == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if events == trials { 1.0 } else { (center + half).min(1.0) };
    Ok(Interval { lo, hi })
}

/// One stratum of a stratified estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    pub tail_cells: u32,
    pub weight: f64,
    pub trials: u64,
    pub errors: u64,
}

impl Stratum {
    pub fn error_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.errors as f64 / self.trials as f64
        }
    }

    fn variance(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.error_rate();
        self.weight * self.weight * p * (1.0 - p) / self.trials as f64
    }
}

/// Normal-approximation 95% interval of a stratified proportion estimate.
pub fn stratified_interval(strata: &[Stratum]) -> Result<Interval> {
    if strata.iter().all(|s| s.trials == 0) {
        return Err(Error::Precondition("stratified interval over zero trials".into()));
    }
    let p: f64 = strata.iter().map(|s| s.weight * s.error_rate()).sum();
    let var: f64 = strata.iter().map(Stratum::variance).sum();
    let half = Z95 * var.sqrt();
    Ok(Interval { lo: (p - half).max(0.0), hi: (p + half).min(1.0) })
}

/// Word-error counts by class; real-valued for weighted (stratified) runs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub type_i: f64,
    pub type_ii: f64,
    pub type_iii: f64,
    pub other: f64,
}

impl ClassCounts {
    pub fn get(&self, class: ErrorClass) -> f64 {
        match class {
            ErrorClass::None => 0.0,
            ErrorClass::TypeI => self.type_i,
            ErrorClass::TypeII => self.type_ii,
            ErrorClass::TypeIII => self.type_iii,
            ErrorClass::Other => self.other,
        }
    }

    pub fn total(&self) -> f64 {
        self.type_i + self.type_ii + self.type_iii + self.other
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerEstimate {
    pub word_error_events: f64,
    pub bit_errors_hamming: f64,
    pub trials: u64,
    /// `events / (trials * N * B0)`, one bit error per word-error event.
    pub event_rate_per_bit: f64,
    /// Bit flips of the stored byte per stored bit.
    pub hamming_rate: f64,
    /// 95% interval on `event_rate_per_bit`.
    pub ci95: Interval,
    pub per_class: ClassCounts,
    /// Reads that sensed outside the level range and were clamped.
    pub clamped_reads: f64,
    /// Variance of the per-word error-probability estimate.
    pub word_rate_variance: f64,
    pub weighted: bool,
    /// Empty for plain runs.
    pub strata: Vec<Stratum>,
}

impl BerEstimate {
    pub fn word_error_rate(&self) -> f64 {
        self.word_error_events / self.trials as f64
    }

    /// Per-bit rate of one error class.
    pub fn class_rate_per_bit(&self, class: ErrorClass) -> f64 {
        self.per_class.get(class) / (self.trials as f64 * BITS_PER_WORD)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    trials: u64,
    errors: u64,
    bit_errors: u64,
    classes: [u64; 4],
    clamped: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.trials += other.trials;
        self.errors += other.errors;
        self.bit_errors += other.bit_errors;
        for (a, b) in self.classes.iter_mut().zip(other.classes) {
            *a += b;
        }
        self.clamped += other.clamped;
        self
    }

    fn record(&mut self, class: ErrorClass, bit_errors: u32) {
        self.trials += 1;
        let slot = match class {
            ErrorClass::None => return,
            ErrorClass::TypeI => 0,
            ErrorClass::TypeII => 1,
            ErrorClass::TypeIII => 2,
            ErrorClass::Other => 3,
        };
        self.errors += 1;
        self.bit_errors += bit_errors as u64;
        self.classes[slot] += 1;
    }
}

/// Everything a trial needs, built once per run.
struct Simulator {
    grid: LevelGrid,
    noise: NoiseModel,
    book: Option<CodeBook>,
    /// Allowed data bytes; `None` means all 256.
    pool: Option<Vec<u8>>,
}

fn unpack_symbols(byte: u8) -> [u8; N_CELLS] {
    [byte >> 6, (byte >> 4) & 3, (byte >> 2) & 3, byte & 3]
}

fn pack_symbols(symbols: &[u8; N_CELLS]) -> u8 {
    symbols.iter().fold(0u8, |acc, &s| (acc << 2) | s)
}

impl Simulator {
    fn new(config: &SimConfig) -> Result<Self> {
        let grid = config.grid()?;
        let noise = config.noise()?;
        let top = grid.n_levels() as u8 - 1;
        let interior = |s: &[u8; N_CELLS]| s.iter().all(|&x| x > 0 && x < top);
        let (book, pool) = if config.protected {
            let book = CodeBook::five_level();
            let pool = match config.data_mode {
                DataMode::Uniform => None,
                DataMode::Interior => Some(
                    (0..=255u8)
                        .filter(|&b| interior(&book.encode(b).expect("5-level book stores bytes").symbols()))
                        .collect(),
                ),
            };
            (Some(book), pool)
        } else {
            let pool = match config.data_mode {
                DataMode::Uniform => None,
                DataMode::Interior => Some((0..=255u8).filter(|&b| interior(&unpack_symbols(b))).collect()),
            };
            (None, pool)
        };
        Ok(Self { grid, noise, book, pool })
    }

    fn draw_byte(&self, rng: &mut RngStream) -> u8 {
        match &self.pool {
            None => rng.byte(),
            Some(p) => p[rng.below(p.len())],
        }
    }

    fn written(&self, byte: u8) -> [u8; N_CELLS] {
        match &self.book {
            Some(book) => book.encode(byte).expect("5-level book stores bytes").symbols(),
            None => unpack_symbols(byte),
        }
    }

    /// Decode `read` of the word storing `byte` and tally the outcome.
    fn finish(&self, byte: u8, written: [u8; N_CELLS], read: ReadVector, tally: &mut Tally) {
        let top = self.grid.n_levels() as i64 - 1;
        tally.clamped += read.0.iter().filter(|&&v| !(0..=top).contains(&self.grid.sense_raw(v))).count() as u64;
        match &self.book {
            Some(book) => {
                let outcome = read_byte(&read, &self.grid, book).expect("grid matches book");
                let word = Codeword::new(written).expect("encoded words are even");
                let class = classify_error(&word, &outcome);
                let flips = match outcome.byte {
                    Some(b) => (b ^ byte).count_ones(),
                    None => 8,
                };
                tally.record(class, flips);
            }
            None => {
                let sensed = read.0.map(|v| self.grid.sense(v) as u8);
                let decoded = pack_symbols(&sensed);
                let class = if decoded == byte { ErrorClass::None } else { ErrorClass::Other };
                tally.record(class, (decoded ^ byte).count_ones());
            }
        }
    }

    fn plain_trial(&self, rng: &mut RngStream, tally: &mut Tally) {
        let byte = self.draw_byte(rng);
        let written = self.written(byte);
        let levels = self.grid.levels();
        let mut v = [0.0; N_CELLS];
        for (slot, &s) in v.iter_mut().zip(written.iter()) {
            *slot = sample_around(levels[s as usize], &self.noise, rng).0;
        }
        self.finish(byte, written, ReadVector(v), tally);
    }

    fn stratified_trial(&self, tail_cells: usize, rng: &mut RngStream, tally: &mut Tally) {
        let byte = self.draw_byte(rng);
        let written = self.written(byte);
        // uniformly random subset of `tail_cells` cells: partial Fisher-Yates
        let mut order = [0usize, 1, 2, 3];
        for i in 0..tail_cells {
            let j = i + rng.below(N_CELLS - i);
            order.swap(i, j);
        }
        let mut in_tail = [false; N_CELLS];
        for &c in &order[..tail_cells] {
            in_tail[c] = true;
        }
        let levels = self.grid.levels();
        let mut v = [0.0; N_CELLS];
        for j in 0..N_CELLS {
            v[j] = sample_conditioned_around(levels[written[j] as usize], &self.noise, in_tail[j], rng).0;
        }
        self.finish(byte, written, ReadVector(v), tally);
    }
}

fn shard_share(trials: u64, shards: u64, shard: u64) -> u64 {
    trials / shards + u64::from(shard < trials % shards)
}

fn run_sharded<F>(trials: u64, shards: u32, seed: u64, stream_base: u64, trial: F) -> Tally
where
    F: Fn(&mut RngStream, &mut Tally) + Sync,
{
    let shards = shards as u64;
    let tallies: Vec<Tally> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = RngStream::new(seed, stream_base | s);
            let mut tally = Tally::default();
            for _ in 0..shard_share(trials, shards, s) {
                trial(&mut rng, &mut tally);
            }
            tally
        })
        .collect();
    tallies.into_iter().fold(Tally::default(), Tally::merge)
}

/// Plain Monte Carlo estimate.
pub fn run_trials(config: &SimConfig) -> Result<BerEstimate> {
    config.validate()?;
    if config.stratified {
        return Err(Error::Config("run_trials takes a plain configuration; use run_stratified".into()));
    }
    let sim = Simulator::new(config)?;
    let tally = run_sharded(config.trials, config.shards, config.seed, 0, |rng, t| sim.plain_trial(rng, t));
    debug_assert_eq!(tally.trials, config.trials);
    let n = tally.trials as f64;
    let p = tally.errors as f64 / n;
    let ci = confidence_interval(tally.errors, tally.trials)?;
    Ok(BerEstimate {
        word_error_events: tally.errors as f64,
        bit_errors_hamming: tally.bit_errors as f64,
        trials: tally.trials,
        event_rate_per_bit: p / BITS_PER_WORD,
        hamming_rate: tally.bit_errors as f64 / (n * BITS_PER_WORD),
        ci95: ci.scaled(1.0 / BITS_PER_WORD),
        per_class: ClassCounts {
            type_i: tally.classes[0] as f64,
            type_ii: tally.classes[1] as f64,
            type_iii: tally.classes[2] as f64,
            other: tally.classes[3] as f64,
        },
        clamped_reads: tally.clamped as f64,
        word_rate_variance: p * (1.0 - p) / n,
        weighted: false,
        strata: Vec::new(),
    })
}

/// Probability that exactly `k` of the 4 cells read in a tail.
pub fn stratum_weight(k: u32, tail: f64) -> f64 {
    const BINOM: [f64; 5] = [1.0, 4.0, 6.0, 4.0, 1.0];
    BINOM[k as usize] * tail.powi(k as i32) * (1.0 - tail).powi(4 - k as i32)
}

/// Stratified estimate over the number of tail cells.
pub fn run_stratified(config: &SimConfig) -> Result<BerEstimate> {
    config.validate()?;
    if !config.stratified {
        return Err(Error::Config("run_stratified needs stratified = true".into()));
    }
    if !config.protected {
        return Err(Error::Config("stratified runs simulate the protected word only".into()));
    }
    let sim = Simulator::new(config)?;
    // window reads sit within W/2 of their level, the boundary is pitch/2 away
    assert!(sim.grid.w() < sim.grid.pitch(), "window reads must stay inside their decision region");
    let allocation = config.stratum_trials.unwrap_or([config.trials; 4]);

    let mut strata = vec![Stratum { tail_cells: 0, weight: stratum_weight(0, config.tail), trials: 0, errors: 0 }];
    let mut tallies = Vec::new();
    for k in 1..=4u32 {
        let weight = stratum_weight(k, config.tail);
        let n = if weight > 0.0 { allocation[k as usize - 1] } else { 0 };
        if n > 0 && k < 4 && config.w == 0.0 {
            return Err(Error::Domain("stratified sampling needs W > 0 unless every cell is in a tail (T = 1)".into()));
        }
        let tally = if n > 0 {
            run_sharded(n, config.shards, config.seed, (k as u64) << 32, |rng, t| {
                sim.stratified_trial(k as usize, rng, t)
            })
        } else {
            Tally::default()
        };
        strata.push(Stratum { tail_cells: k, weight, trials: tally.trials, errors: tally.errors });
        tallies.push((weight, tally));
    }

    let total: u64 = tallies.iter().map(|(_, t)| t.trials).sum();
    if total == 0 {
        return Err(Error::Config("no stratum has both positive weight and sub-trials".into()));
    }
    let weighted = |f: &dyn Fn(&Tally) -> u64| -> f64 {
        tallies.iter().filter(|(_, t)| t.trials > 0).map(|(w, t)| w * f(t) as f64 / t.trials as f64).sum()
    };
    let p = weighted(&|t| t.errors);
    let n = total as f64;
    let ci = stratified_interval(&strata)?;
    Ok(BerEstimate {
        word_error_events: p * n,
        bit_errors_hamming: weighted(&|t| t.bit_errors) * n,
        trials: total,
        event_rate_per_bit: p / BITS_PER_WORD,
        hamming_rate: weighted(&|t| t.bit_errors) / BITS_PER_WORD,
        ci95: ci.scaled(1.0 / BITS_PER_WORD),
        per_class: ClassCounts {
            type_i: weighted(&|t| t.classes[0]) * n,
            type_ii: weighted(&|t| t.classes[1]) * n,
            type_iii: weighted(&|t| t.classes[2]) * n,
            other: weighted(&|t| t.classes[3]) * n,
        },
        clamped_reads: weighted(&|t| t.clamped) * n,
        word_rate_variance: strata.iter().map(Stratum::variance).sum(),
        weighted: true,
        strata,
    })
}

/// Dispatch on `config.stratified`.
pub fn run(config: &SimConfig) -> Result<BerEstimate> {
    if config.stratified {
        run_stratified(config)
    } else {
        run_trials(config)
    }
}

/// Analytic rates matching a simulation configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub e0: f64,
    pub e2_i: f64,
    pub e2_ii: f64,
    pub e2_iii: f64,
    pub e2_total: f64,
}

pub fn prediction(config: &SimConfig) -> Result<Prediction> {
    let b = analytic::protected_rates(&config.channel_point()?);
    Ok(Prediction { e0: b.e0, e2_i: b.e2_i, e2_ii: b.e2_ii, e2_iii: b.e2_iii, e2_total: b.e2_total })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn written(s: [u8; 4]) -> Codeword {
        Codeword::new(s).unwrap()
    }

    fn corrected(sensed: [u8; 4], word: [u8; 4]) -> DecodeOutcome {
        DecodeOutcome {
            sensed,
            parity_passed: false,
            corrected: Some(written(word)),
            byte: None,
            decoder_distance: Some(1.0),
        }
    }

    #[test]
    fn classification_examples() {
        let w = written([0, 0, 1, 1]);
        let same = DecodeOutcome {
            sensed: [0, 0, 1, 1],
            parity_passed: true,
            corrected: None,
            byte: Some(3),
            decoder_distance: None,
        };
        assert_eq!(classify_error(&w, &same), ErrorClass::None);
        assert_eq!(classify_error(&w, &corrected([1, 0, 1, 1], [2, 0, 1, 1])), ErrorClass::TypeII);
        assert_eq!(classify_error(&w, &corrected([1, 0, 1, 1], [1, 0, 0, 1])), ErrorClass::TypeIII);
        assert_eq!(classify_error(&w, &corrected([1, 0, 1, 1], [1, 1, 1, 1])), ErrorClass::Other);
        assert_eq!(classify_error(&w, &corrected([1, 0, 1, 1], [0, 0, 1, 1])), ErrorClass::None);
        let undetected = DecodeOutcome { sensed: [1, 1, 1, 1], ..same };
        assert_eq!(classify_error(&w, &undetected), ErrorClass::TypeI);
    }

    #[test]
    fn wilson_examples() {
        let ci = confidence_interval(0, 1_000_000).unwrap();
        assert!(ci.contains(0.0) && ci.hi < 4e-6);
        let ci = confidence_interval(500_000, 1_000_000).unwrap();
        assert!((ci.lo - 0.499).abs() < 2e-4 && (ci.hi - 0.501).abs() < 2e-4);
        let ci = confidence_interval(1_000_000, 1_000_000).unwrap();
        assert!(ci.contains(1.0));
        assert!(confidence_interval(0, 0).is_err());
        assert!(confidence_interval(3, 2).is_err());
    }

    #[test]
    fn stratum_weights_sum_to_one() {
        for &t in &[0.0, 1e-3, 0.3, 1.0] {
            let s: f64 = (0..=4).map(|k| stratum_weight(k, t)).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn shard_shares_cover_all_trials() {
        for &(n, s) in &[(10u64, 3u64), (7, 8), (1_000_001, 8)] {
            assert_eq!((0..s).map(|i| shard_share(n, s, i)).sum::<u64>(), n);
        }
    }

    #[test]
    fn symbol_packing() {
        for b in 0..=255u8 {
            assert_eq!(pack_symbols(&unpack_symbols(b)), b);
        }
    }

    #[test]
    fn noiseless_channel_has_no_errors() {
        for protected in [true, false] {
            let mut c = SimConfig::dimensionless(6.0, 1.0, 0.0);
            c.protected = protected;
            c.trials = 20_000;
            let est = run_trials(&c).unwrap();
            assert_eq!(est.word_error_events, 0.0);
            assert!(est.ci95.contains(0.0));
        }
    }

    #[test]
    fn config_errors() {
        let mut c = SimConfig::dimensionless(6.0, 0.0, 1.0);
        c.trials = 0;
        assert!(run_trials(&c).is_err());
        let mut c = SimConfig::dimensionless(6.0, 0.0, 1.0);
        c.shards = 0;
        assert!(run_trials(&c).is_err());
        let mut c = SimConfig::dimensionless(6.0, 0.0, 1.0);
        c.stratified = true;
        assert!(run_trials(&c).is_err());
        let c = SimConfig::dimensionless(6.0, 0.0, 1.0);
        assert!(run_stratified(&c).is_err());
        let mut c = SimConfig::dimensionless(1.0, 3.0, 0.5);
        c.trials = 10;
        assert!(run_trials(&c).is_err());
    }

    #[test]
    fn stratified_rejects_zero_width_below_full_tail() {
        let mut c = SimConfig::dimensionless(6.0, 0.0, 0.5);
        c.stratified = true;
        c.trials = 100;
        assert!(matches!(run_stratified(&c), Err(Error::Domain(_))));
        c.tail = 1.0;
        let est = run_stratified(&c).unwrap();
        assert_eq!(est.strata[4].trials, 100);
        assert_eq!(est.strata[1].trials, 0);
    }
}
