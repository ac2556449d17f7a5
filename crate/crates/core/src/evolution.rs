//! Bit-packed evolution of elementary rules.
//!
//! A [`Row`] stores a finite window of cells packed 64 per word. Cells
//! outside the window are 0. One [`step`] widens the window by one cell on
//! each side; [`evolve_window`] narrows it instead and never looks outside.
//!
//! The update is evaluated word-parallel straight from the ANF: each monomial
//! is an AND of shifted copies of the row and the result is their XOR.
//! Rules with `g(0,0,0) = 1` would turn the infinite zero background into
//! ones; here the background is kept at zero and only the window is updated.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::rule_algebra::RuleSpec;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

fn tail_mask(words: &mut [u64], len: usize) {
    let rem = len % WORD;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

/// `out[j] = src[j - s]`, zero where `j < s` or past the source.
fn shift_up(src: &[u64], s: usize, out_len: usize) -> Vec<u64> {
    let n = words_for(out_len);
    let (ws, bs) = (s / WORD, s % WORD);
    let mut out = vec![0u64; n];
    for (w, slot) in out.iter_mut().enumerate() {
        if w < ws {
            continue;
        }
        let i = w - ws;
        let lo = src.get(i).copied().unwrap_or(0);
        *slot = if bs == 0 {
            lo
        } else {
            let carry = if i > 0 {
                src.get(i - 1).copied().unwrap_or(0) >> (WORD - bs)
            } else {
                0
            };
            (lo << bs) | carry
        };
    }
    tail_mask(&mut out, out_len);
    out
}

/// `out[j] = src[j + s]`.
fn shift_down(src: &[u64], s: usize, out_len: usize) -> Vec<u64> {
    let n = words_for(out_len);
    let (ws, bs) = (s / WORD, s % WORD);
    let mut out = vec![0u64; n];
    for (w, slot) in out.iter_mut().enumerate() {
        let lo = src.get(w + ws).copied().unwrap_or(0);
        *slot = if bs == 0 {
            lo
        } else {
            let hi = src.get(w + ws + 1).copied().unwrap_or(0);
            (lo >> bs) | (hi << (WORD - bs))
        };
    }
    tail_mask(&mut out, out_len);
    out
}

/// Word-parallel rule evaluation on aligned left/centre/right neighbour rows.
fn apply_anf(rule: &RuleSpec, a: &[u64], b: &[u64], c: &[u64], len: usize) -> Vec<u64> {
    let mut out = vec![0u64; words_for(len)];
    for subset in rule.anf.subsets() {
        for (w, slot) in out.iter_mut().enumerate() {
            let mut term = u64::MAX;
            if subset & 4 != 0 {
                term &= a[w];
            }
            if subset & 2 != 0 {
                term &= b[w];
            }
            if subset & 1 != 0 {
                term &= c[w];
            }
            *slot ^= term;
        }
    }
    tail_mask(&mut out, len);
    out
}

/// One generation: a window of cells starting at `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    offset: i64,
    len: usize,
    words: Vec<u64>,
    generation: u64,
}

impl Row {
    /// Generation 0 with a single active cell at position 0.
    pub fn seed() -> Row {
        Row {
            offset: 0,
            len: 1,
            words: vec![1],
            generation: 0,
        }
    }

    pub fn empty(offset: i64, len: usize, generation: u64) -> Row {
        Row {
            offset,
            len,
            words: vec![0; words_for(len)],
            generation,
        }
    }

    /// Cell `i` of `cells` sits at position `offset + i`.
    pub fn from_cells(offset: i64, cells: &[bool], generation: u64) -> Row {
        let mut row = Row::empty(offset, cells.len(), generation);
        for (i, &on) in cells.iter().enumerate() {
            if on {
                row.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        row
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Number of stored cells.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Position one past the last stored cell.
    pub fn end(&self) -> i64 {
        self.offset + self.len as i64
    }

    pub fn get(&self, pos: i64) -> bool {
        if pos < self.offset || pos >= self.end() {
            return false;
        }
        let i = (pos - self.offset) as usize;
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, pos: i64, value: bool) {
        assert!(
            pos >= self.offset && pos < self.end(),
            "position {pos} outside the stored window"
        );
        let i = (pos - self.offset) as usize;
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Active positions in increasing order.
    pub fn active_positions(&self) -> impl Iterator<Item = i64> + '_ {
        self.words.iter().enumerate().flat_map(move |(w, &word)| {
            let base = self.offset + (w * WORD) as i64;
            BitIter(word).map(move |b| base + b as i64)
        })
    }

    /// Same cells translated by `d`.
    pub fn shifted(&self, d: i64) -> Row {
        Row {
            offset: self.offset + d,
            ..self.clone()
        }
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz)
    }
}

/// Applies `rule` once, growing the window by one cell on each side.
pub fn step(row: &Row, rule: &RuleSpec) -> Row {
    let len = row.len + 2;
    let a = shift_up(&row.words, 2, len);
    let b = shift_up(&row.words, 1, len);
    let c = shift_up(&row.words, 0, len);
    Row {
        offset: row.offset - 1,
        len,
        words: apply_anf(rule, &a, &b, &c, len),
        generation: row.generation + 1,
    }
}

/// Streams generations 0, 1, 2, ... from a single seed.
#[derive(Debug, Clone)]
pub struct SeedEvolution {
    rule: RuleSpec,
    next: Option<Row>,
}

impl SeedEvolution {
    pub fn new(rule: RuleSpec) -> Self {
        SeedEvolution {
            rule,
            next: Some(Row::seed()),
        }
    }
}

impl Iterator for SeedEvolution {
    type Item = Row;

    fn next(&mut self) -> Option<Row> {
        let current = self.next.take()?;
        self.next = Some(step(&current, &self.rule));
        Some(current)
    }
}

/// Generations `0..=steps` from a single seed at position 0.
pub fn evolve_single_seed(rule: &RuleSpec, steps: usize) -> Vec<Row> {
    SeedEvolution::new(*rule).take(steps + 1).collect()
}

/// Evolves `initial` for `steps` generations keeping only cells whose whole
/// dependence cone lies inside the initial window.
pub fn evolve_window(rule: &RuleSpec, initial: &Row, steps: usize) -> Result<Row> {
    if initial.len < 2 * steps + 1 {
        return domain(format!(
            "window of width {} is too small for {steps} steps (needs {})",
            initial.len,
            2 * steps + 1
        ));
    }
    let mut row = initial.clone();
    for _ in 0..steps {
        let len = row.len - 2;
        let a = shift_down(&row.words, 0, len);
        let b = shift_down(&row.words, 1, len);
        let c = shift_down(&row.words, 2, len);
        row = Row {
            offset: row.offset + 1,
            len,
            words: apply_anf(rule, &a, &b, &c, len),
            generation: row.generation + 1,
        };
    }
    Ok(row)
}

/// Which positions a [`SupportSet`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum View {
    /// Every active cell.
    #[value(name = "full")]
    FullRow,
    /// Active cells at positions `>= 0`.
    #[value(name = "right")]
    RightHalf,
}

/// Sorted positions of active cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    pub positions: Vec<i64>,
    pub view: View,
}

impl SupportSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, pos: i64) -> bool {
        self.positions.binary_search(&pos).is_ok()
    }

    pub fn max(&self) -> Option<i64> {
        self.positions.last().copied()
    }
}

pub fn support(row: &Row, view: View) -> SupportSet {
    let positions = match view {
        View::FullRow => row.active_positions().collect(),
        View::RightHalf => row.active_positions().filter(|&p| p >= 0).collect(),
    };
    SupportSet { positions, view }
}

/// `eta_t(0)` for `t = 0..=steps` from a single seed.
pub fn center_column(rule: &RuleSpec, steps: usize) -> Vec<bool> {
    SeedEvolution::new(*rule)
        .take(steps + 1)
        .map(|row| row.get(0))
        .collect()
}

/// Which half of the row a diagonal convention reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalSide {
    /// `t` is looked up at position `t`.
    Right,
    /// `t` is looked up at position `-t`.
    LeftMirrored,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalConvention {
    pub side: DiagonalSide,
    /// Generation read is `t + 1 + index_offset`.
    pub index_offset: i64,
    pub matches: u64,
    pub total: u64,
    pub fraction: f64,
    pub first_mismatch: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalReport {
    pub rule: u8,
    pub max_t: u64,
    pub conventions: Vec<DiagonalConvention>,
}

/// Compares the centre column `c(t)` with diagonal membership
/// `[t in S_{t+1+offset}]` for `1 <= t <= max_t` under each convention.
///
/// Nothing here asserts that any convention is the right one; an empty range
/// counts as a full match.
pub fn diagonal_identity_scan(rule: &RuleSpec, max_t: u64) -> DiagonalReport {
    let rows: Vec<Row> = SeedEvolution::new(*rule).take(max_t as usize + 3).collect();
    let mut conventions = Vec::new();
    for side in [DiagonalSide::Right, DiagonalSide::LeftMirrored] {
        for index_offset in [-1i64, 0, 1] {
            let mut matches = 0;
            let mut first_mismatch = None;
            for t in 1..=max_t {
                let center = rows[t as usize].get(0);
                let gen = (t as i64 + 1 + index_offset) as usize;
                let pos = match side {
                    DiagonalSide::Right => t as i64,
                    DiagonalSide::LeftMirrored => -(t as i64),
                };
                if rows[gen].get(pos) == center {
                    matches += 1;
                } else if first_mismatch.is_none() {
                    first_mismatch = Some(t);
                }
            }
            let fraction = if max_t == 0 {
                1.0
            } else {
                matches as f64 / max_t as f64
            };
            conventions.push(DiagonalConvention {
                side,
                index_offset,
                matches,
                total: max_t,
                fraction,
                first_mismatch,
            });
        }
    }
    DiagonalReport {
        rule: rule.code,
        max_t,
        conventions,
    }
}

/// Encodes rows as a binary (P4) portable bitmap on their common window.
/// Active cells are black.
pub fn encode_pbm(rows: &[Row]) -> Result<Vec<u8>> {
    if rows.is_empty() {
        return domain("cannot render an empty list of rows");
    }
    let left = rows.iter().map(Row::offset).min().unwrap_or(0);
    let right = rows.iter().map(Row::end).max().unwrap_or(0);
    let width = (right - left) as usize;
    let mut out = format!("P4\n{} {}\n", width, rows.len()).into_bytes();
    let row_bytes = width.div_ceil(8);
    for row in rows {
        let mut line = vec![0u8; row_bytes];
        for pos in row.active_positions() {
            let x = (pos - left) as usize;
            line[x / 8] |= 0x80 >> (x % 8);
        }
        out.extend_from_slice(&line);
    }
    Ok(out)
}

pub fn render_pbm(rows: &[Row], path: &Path) -> std::io::Result<()> {
    let bytes = encode_pbm(rows)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e.to_string()))?;
    std::fs::write(path, bytes)
}

/// Text rendering on the rows' common window, `#` for active cells.
pub fn render_ascii(rows: &[Row]) -> String {
    let left = rows.iter().map(Row::offset).min().unwrap_or(0);
    let right = rows.iter().map(Row::end).max().unwrap_or(0);
    let mut s = String::new();
    for row in rows {
        for pos in left..right {
            s.push(if row.get(pos) { '#' } else { '.' });
        }
        let _ = writeln!(s);
    }
    s
}
