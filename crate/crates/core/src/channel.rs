//! Voltage geometry of multi-level cells and the read-voltage law.
//!
//! A cell programmed to level `x` reads back with a density that is flat over
//! the program window `[L_x - W/2, L_x + W/2]` (mass `1 - T`) and decays
//! exponentially outside it with slope `1/2a` (mass `T/2` on each side).
//! Every level carries both tails, the edge levels included.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Read-noise parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Tail slope parameter in 1/volt; tail density decays as `exp(-2a x)`.
    pub a: f64,
    /// Fraction of reads falling in the tails.
    pub tail: f64,
    /// Program window width in volts.
    pub w: f64,
}

impl NoiseModel {
    pub fn new(a: f64, tail: f64, w: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Domain(format!("tail slope a must be > 0, got {a}")));
        }
        if !(0.0..=1.0).contains(&tail) {
            return Err(Error::Domain(format!("tail fraction must be in [0, 1], got {tail}")));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::Domain(format!("program width must be >= 0, got {w}")));
        }
        Ok(Self { a, tail, w })
    }

    /// Mean excess of a tail read beyond the program window edge.
    pub fn tail_mean_excess(&self) -> f64 {
        1.0 / (2.0 * self.a)
    }
}

/// Evenly spaced program levels `L_x = L0 + x * (margin + W)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelGrid {
    n_levels: usize,
    l0: f64,
    margin: f64,
    w: f64,
    levels: Vec<f64>,
}

impl LevelGrid {
    pub fn new(n_levels: usize, l0: f64, margin: f64, w: f64) -> Result<Self> {
        if n_levels < 2 {
            return Err(Error::Domain(format!("need at least 2 levels, got {n_levels}")));
        }
        if !(margin.is_finite() && margin > 0.0) {
            return Err(Error::Domain(format!("margin must be > 0, got {margin}")));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::Domain(format!("program width must be >= 0, got {w}")));
        }
        if !l0.is_finite() {
            return Err(Error::Domain("base level must be finite".into()));
        }
        let pitch = margin + w;
        let levels = (0..n_levels).map(|x| l0 + x as f64 * pitch).collect();
        Ok(Self { n_levels, l0, margin, w, levels })
    }

    /// The uncoded 4-level grid with margin `delta0`.
    pub fn four_level(l0: f64, delta0: f64, w: f64) -> Result<Self> {
        Self::new(4, l0, delta0, w)
    }

    /// The 5-level grid squeezed into the same window as the 4-level grid
    /// with margin `delta0`.
    pub fn five_level(l0: f64, delta0: f64, w: f64) -> Result<Self> {
        let margin = derive_5level_margin(delta0, w)?;
        Self::new(5, l0, margin, w)
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn l0(&self) -> f64 {
        self.l0
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn pitch(&self) -> f64 {
        self.margin + self.w
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn level(&self, index: usize) -> Result<f64> {
        self.levels.get(index).copied().ok_or(Error::LevelIndex { index, n_levels: self.n_levels })
    }

    /// Total span from the lowest to the highest level.
    pub fn span(&self) -> f64 {
        (self.n_levels - 1) as f64 * self.pitch()
    }

    /// Unclamped margin-sense decision: nearest level index, exact half-way
    /// reads resolve to the lower level.
    pub fn sense_raw(&self, v: f64) -> i64 {
        ((v - self.l0) / self.pitch() - 0.5).ceil() as i64
    }

    /// Margin-sense decision clamped into `[0, n_levels - 1]`.
    pub fn sense(&self, v: f64) -> usize {
        self.sense_raw(v).clamp(0, self.n_levels as i64 - 1) as usize
    }

    /// Reference voltage between level `x` and `x + 1`.
    pub fn decision_boundary(&self, x: usize) -> Result<f64> {
        if x + 1 >= self.n_levels {
            return Err(Error::LevelIndex { index: x + 1, n_levels: self.n_levels });
        }
        Ok(self.levels[x] + 0.5 * self.pitch())
    }
}

/// Margin of the 5-level grid spanning the same window as a 4-level grid:
/// `4 (D + W) = 3 (D0 + W)`.
pub fn derive_5level_margin(delta0: f64, w: f64) -> Result<f64> {
    if !(delta0.is_finite() && delta0 > 0.0) {
        return Err(Error::Domain(format!("4-level margin must be > 0, got {delta0}")));
    }
    if !(w.is_finite() && w >= 0.0) {
        return Err(Error::Domain(format!("program width must be >= 0, got {w}")));
    }
    if 3.0 * delta0 <= w {
        return Err(Error::Domain(format!("5-level margin (3*{delta0} - {w})/4 is not positive")));
    }
    Ok((3.0 * delta0 - w) / 4.0)
}

/// Density of the read voltage of a cell programmed to `level_index`.
///
/// With `W = 0` the window collapses to a point mass of weight `1 - T` at the
/// level; that atom is not representable as a density, so only the tail part
/// is returned there.
pub fn read_density(v: f64, level_index: usize, grid: &LevelGrid, noise: &NoiseModel) -> Result<f64> {
    let center = grid.level(level_index)?;
    let half = noise.w / 2.0;
    let hi = center + half;
    let lo = center - half;
    let tail_density = |excess: f64| noise.a * noise.tail * (-2.0 * noise.a * excess).exp();
    Ok(if v > hi {
        tail_density(v - hi)
    } else if v < lo {
        tail_density(lo - v)
    } else if noise.w > 0.0 {
        (1.0 - noise.tail) / noise.w
    } else {
        // v == L_x exactly with W = 0: tail part only.
        noise.a * noise.tail
    })
}

/// Which part of the read law a sample came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Below,
    Window,
    Above,
}

impl Side {
    pub fn sign(self) -> i8 {
        match self {
            Side::Below => -1,
            Side::Window => 0,
            Side::Above => 1,
        }
    }
}

/// Reproducible random stream keyed by `(seed, stream)`.
///
/// Backed by ChaCha8 with the stream index selecting an independent keystream,
/// so sequences are identical on every platform.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Exponential with the given rate, by inversion.
    pub fn exponential(&mut self, rate: f64) -> f64 {
        -(1.0 - self.uniform()).ln() / rate
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn byte(&mut self) -> u8 {
        self.rng.random::<u8>()
    }

    pub fn coin(&mut self) -> bool {
        self.uniform() < 0.5
    }
}

/// Draw a read voltage for a cell programmed to `level_index`.
///
/// A single uniform picks the branch and, inside the window, the position;
/// tails take one more draw for the exponential excess.
pub fn sample_read(level_index: usize, grid: &LevelGrid, noise: &NoiseModel, rng: &mut RngStream) -> Result<f64> {
    let center = grid.level(level_index)?;
    Ok(sample_around(center, noise, rng).0)
}

pub(crate) fn sample_around(center: f64, noise: &NoiseModel, rng: &mut RngStream) -> (f64, Side) {
    let half = noise.w / 2.0;
    let u = rng.uniform();
    let t = noise.tail;
    if u < 0.5 * t {
        (center - half - rng.exponential(2.0 * noise.a), Side::Below)
    } else if u < t {
        (center + half + rng.exponential(2.0 * noise.a), Side::Above)
    } else {
        // (u - T)/(1 - T) is uniform on [0, 1) given this branch.
        let frac = (u - t) / (1.0 - t);
        (center - half + noise.w * frac, Side::Window)
    }
}

/// Draw a read voltage conditioned on landing in a tail (`force_tail`) or in
/// the program window. Mixing the two with weights `T` and `1 - T`
/// reproduces [`sample_read`] in law.
pub fn sample_read_conditioned(
    level_index: usize,
    grid: &LevelGrid,
    noise: &NoiseModel,
    force_tail: bool,
    rng: &mut RngStream,
) -> Result<(f64, Side)> {
    let center = grid.level(level_index)?;
    if !force_tail && noise.w == 0.0 {
        return Err(Error::Domain("window-conditioned read is undefined for a zero-width program window".into()));
    }
    Ok(sample_conditioned_around(center, noise, force_tail, rng))
}

pub(crate) fn sample_conditioned_around(
    center: f64,
    noise: &NoiseModel,
    force_tail: bool,
    rng: &mut RngStream,
) -> (f64, Side) {
    let half = noise.w / 2.0;
    if force_tail {
        let excess = half + rng.exponential(2.0 * noise.a);
        if rng.coin() {
            (center + excess, Side::Above)
        } else {
            (center - excess, Side::Below)
        }
    } else {
        (center - half + noise.w * rng.uniform(), Side::Window)
    }
}
