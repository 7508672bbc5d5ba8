//! Even-parity code over four multi-level cells.
//!
//! A byte is stored as one of the words `x1..x4` with `x1 + x2 + x3 + x4`
//! even, which puts distinct codewords at Manhattan distance at least 2.
//! Reading is a hard margin sense followed, only when parity fails, by a
//! soft search for the L1-nearest codeword among the words whose symbol sum
//! is one above or one below the sensed sum.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::LevelGrid;
use crate::error::{Error, Result};

pub const N_CELLS: usize = 4;

/// Four-cell word satisfying even parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Codeword([u8; N_CELLS]);

impl Codeword {
    pub fn new(symbols: [u8; N_CELLS]) -> Result<Self> {
        if !parity_ok(&symbols) {
            return Err(Error::Precondition(format!("{symbols:?} has odd symbol sum")));
        }
        Ok(Self(symbols))
    }

    pub fn symbols(&self) -> [u8; N_CELLS] {
        self.0
    }

    pub fn sum(&self) -> usize {
        symbol_sum(&self.0)
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// One memory word as sensed: four read voltages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadVector(pub [f64; N_CELLS]);

impl ReadVector {
    pub fn new(voltages: [f64; N_CELLS]) -> Result<Self> {
        if voltages.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite read voltage in {voltages:?}")));
        }
        Ok(Self(voltages))
    }

    /// Voltages sitting exactly on the levels of `symbols`.
    pub fn at_levels(symbols: [u8; N_CELLS], grid: &LevelGrid) -> Result<Self> {
        let mut v = [0.0; N_CELLS];
        for (slot, &s) in v.iter_mut().zip(symbols.iter()) {
            *slot = grid.level(s as usize)?;
        }
        Ok(Self(v))
    }

    pub fn voltages(&self) -> [f64; N_CELLS] {
        self.0
    }
}

fn symbol_sum(symbols: &[u8]) -> usize {
    symbols.iter().map(|&s| s as usize).sum()
}

pub fn parity_ok(symbols: &[u8]) -> bool {
    symbol_sum(symbols).is_multiple_of(2)
}

/// All even-parity words over `0..n_levels`, lexicographic.
pub fn enumerate_codewords(n_levels: usize) -> Vec<Codeword> {
    assert!((2..=256).contains(&n_levels), "n_levels must be in 2..=256");
    let n = n_levels as u16;
    let mut out = Vec::with_capacity(n_levels.pow(4).div_ceil(2));
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let w = [a as u8, b as u8, c as u8, d as u8];
                    if parity_ok(&w) {
                        out.push(Codeword(w));
                    }
                }
            }
        }
    }
    out
}

/// Codeword table with the byte mapping and sum-class index used by the decoder.
#[derive(Debug, Clone)]
pub struct CodeBook {
    n_levels: usize,
    words: Vec<Codeword>,
    /// Indices into `words`, grouped by symbol sum.
    by_sum: Vec<Vec<usize>>,
    /// Mixed-radix word index -> byte, for words in the byte map.
    inverse: Vec<Option<u8>>,
}

impl CodeBook {
    pub fn new(n_levels: usize) -> Result<Self> {
        if !(2..=64).contains(&n_levels) {
            return Err(Error::Domain(format!("n_levels must be in 2..=64, got {n_levels}")));
        }
        let words = enumerate_codewords(n_levels);
        let max_sum = N_CELLS * (n_levels - 1);
        let mut by_sum = vec![Vec::new(); max_sum + 1];
        for (i, w) in words.iter().enumerate() {
            by_sum[w.sum()].push(i);
        }
        let mut inverse = vec![None; n_levels.pow(N_CELLS as u32)];
        if words.len() >= 256 {
            for (byte, w) in words.iter().take(256).enumerate() {
                inverse[radix_index(&w.0, n_levels)] = Some(byte as u8);
            }
        }
        Ok(Self { n_levels, words, by_sum, inverse })
    }

    /// The book used for byte storage in five-level cells.
    pub fn five_level() -> Self {
        Self::new(5).expect("5 levels is a valid book")
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn supports_bytes(&self) -> bool {
        self.words.len() >= 256
    }

    /// Words whose symbol sum equals `sum`, lexicographic.
    pub fn sum_class(&self, sum: usize) -> impl Iterator<Item = &Codeword> + '_ {
        self.by_sum.get(sum).into_iter().flatten().map(move |&i| &self.words[i])
    }

    pub fn encode(&self, byte: u8) -> Result<Codeword> {
        if !self.supports_bytes() {
            return Err(Error::CodebookTooSmall { words: self.words.len() });
        }
        Ok(self.words[byte as usize])
    }

    /// Byte stored by `word`, or `None` if the word is outside the byte map.
    pub fn byte_of(&self, symbols: &[u8; N_CELLS]) -> Option<u8> {
        if symbols.iter().any(|&s| s as usize >= self.n_levels) {
            return None;
        }
        self.inverse[radix_index(symbols, self.n_levels)]
    }
}

fn radix_index(symbols: &[u8; N_CELLS], n: usize) -> usize {
    symbols.iter().fold(0, |acc, &s| acc * n + s as usize)
}

/// Hard read: nearest level per cell, clamped into the grid.
pub fn margin_sense(read: &ReadVector, grid: &LevelGrid) -> [u8; N_CELLS] {
    read.0.map(|v| grid.sense(v) as u8)
}

/// L1 distance between the read voltages and the levels of `symbols`.
pub fn l1_distance(read: &ReadVector, symbols: &[u8; N_CELLS], grid: &LevelGrid) -> f64 {
    let levels = grid.levels();
    read.0.iter().zip(symbols.iter()).map(|(v, &s)| (v - levels[s as usize]).abs()).sum()
}

fn nearest_of<'a>(
    read: &ReadVector,
    grid: &LevelGrid,
    candidates: impl Iterator<Item = &'a Codeword>,
) -> Option<(Codeword, f64)> {
    let mut best: Option<(Codeword, f64)> = None;
    for w in candidates {
        let d = l1_distance(read, &w.0, grid);
        best = match best {
            Some((bw, bd)) if bd < d || (bd == d && bw < *w) => Some((bw, bd)),
            _ => Some((*w, d)),
        };
    }
    best
}

/// Soft correction of a parity-failing read.
///
/// Searches the even-parity words whose symbol sum differs from the sensed sum
/// by exactly one and returns the L1-nearest one with its distance. Exact ties
/// go to the lexicographically smallest word.
pub fn soft_correct(
    read: &ReadVector,
    sensed: &[u8; N_CELLS],
    grid: &LevelGrid,
    book: &CodeBook,
) -> Result<(Codeword, f64)> {
    if parity_ok(sensed) {
        return Err(Error::Precondition(format!("soft correction needs a parity-failing sense, got {sensed:?}")));
    }
    check_book(grid, book)?;
    let s = symbol_sum(sensed);
    // s is odd, hence >= 1
    let below = book.sum_class(s - 1);
    let above = book.sum_class(s + 1);
    let found = nearest_of(read, grid, below.chain(above));
    assert!(found.is_some(), "empty candidate set for sensed sum {s}");
    Ok(found.unwrap())
}

/// Reference decoder: the L1-nearest even-parity word over the whole book.
pub fn oracle_nearest(read: &ReadVector, grid: &LevelGrid, book: &CodeBook) -> Result<(Codeword, f64)> {
    check_book(grid, book)?;
    Ok(nearest_of(read, grid, book.words().iter()).expect("book is never empty"))
}

fn check_book(grid: &LevelGrid, book: &CodeBook) -> Result<()> {
    if grid.n_levels() != book.n_levels() {
        return Err(Error::Precondition(format!(
            "grid has {} levels but the codebook {}",
            grid.n_levels(),
            book.n_levels()
        )));
    }
    Ok(())
}

/// Result of reading one stored byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub sensed: [u8; N_CELLS],
    pub parity_passed: bool,
    /// Present when soft correction ran.
    pub corrected: Option<Codeword>,
    /// Absent when the decoded word is outside the byte map.
    pub byte: Option<u8>,
    /// L1 distance of the corrected word, when correction ran.
    pub decoder_distance: Option<f64>,
}

impl DecodeOutcome {
    /// The word the decoder settled on.
    pub fn decoded(&self) -> [u8; N_CELLS] {
        match self.corrected {
            Some(w) => w.0,
            None => self.sensed,
        }
    }
}

pub fn read_byte(read: &ReadVector, grid: &LevelGrid, book: &CodeBook) -> Result<DecodeOutcome> {
    check_book(grid, book)?;
    let sensed = margin_sense(read, grid);
    if parity_ok(&sensed) {
        return Ok(DecodeOutcome {
            sensed,
            parity_passed: true,
            corrected: None,
            byte: book.byte_of(&sensed),
            decoder_distance: None,
        });
    }
    let (word, dist) = soft_correct(read, &sensed, grid, book)?;
    Ok(DecodeOutcome {
        sensed,
        parity_passed: false,
        corrected: Some(word),
        byte: book.byte_of(&word.0),
        decoder_distance: Some(dist),
    })
}
