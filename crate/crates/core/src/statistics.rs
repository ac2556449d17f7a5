//! Empirical measurements comparing rule 30 against rule 22.
//!
//! Random-initial-condition experiments evaluate only the dependence cone of
//! the observed cells: a window of width `2t + 1` (or `2t + 3` for the
//! three-cell mutual-information observable) evolved with the shrinking
//! evaluator, so no boundary condition ever enters.
//!
//! Windows are processed 64 at a time, bit-sliced: word `i` holds cell `i`
//! of 64 independent windows. Trial `k` draws its cells from a ChaCha8
//! stream keyed by the master seed with stream number `k`, so every trial is
//! a function of `(seed, k)` alone and all aggregates are integer counts.
//! Results are therefore identical for any number of worker threads.
//!
//! When the window has at most [`EXHAUSTIVE_MAX_WIDTH`] cells, every one of
//! the `2^width` windows can be enumerated instead, which turns the estimates
//! into exact probabilities under i.i.d. fair cells.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, EcaError, Result};
use crate::evolution::{SeedEvolution, View};
use crate::rule22::{cardinality22, right_half_count22};
use crate::rule_algebra::RuleSpec;

/// Largest window enumerated exhaustively (`2^24` windows).
pub const EXHAUSTIVE_MAX_WIDTH: usize = 24;

/// How the initial windows are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Sampling {
    /// `trials` i.i.d. fair-coin windows from `seed`.
    Random { trials: u64, seed: u64 },
    /// Every window of the given width exactly once.
    Exhaustive,
}

impl Sampling {
    fn trials(self, width: usize) -> u64 {
        match self {
            Sampling::Random { trials, .. } => trials,
            Sampling::Exhaustive => 1u64 << width,
        }
    }

    fn seed(self) -> Option<u64> {
        match self {
            Sampling::Random { seed, .. } => Some(seed),
            Sampling::Exhaustive => None,
        }
    }
}

// Lane patterns for the low six bits of an enumerated window index.
const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Up to 64 bit-sliced windows.
struct Batch {
    cells: Vec<u64>,
    valid: u64,
}

fn batch_count(sampling: Sampling, width: usize) -> u64 {
    match sampling {
        Sampling::Random { trials, .. } => trials.div_ceil(64),
        Sampling::Exhaustive => {
            if width <= 6 {
                1
            } else {
                1 << (width - 6)
            }
        }
    }
}

fn make_batch(sampling: Sampling, width: usize, index: u64) -> Batch {
    match sampling {
        Sampling::Random { trials, seed } => {
            let first = index * 64;
            let lanes = (trials - first).min(64) as usize;
            let mut cells = vec![0u64; width];
            let mut draws = vec![0u64; width.div_ceil(64)];
            for lane in 0..lanes {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(first + lane as u64);
                for d in draws.iter_mut() {
                    *d = rng.next_u64();
                }
                for (i, cell) in cells.iter_mut().enumerate() {
                    *cell |= ((draws[i / 64] >> (i % 64)) & 1) << lane;
                }
            }
            let valid = if lanes == 64 {
                u64::MAX
            } else {
                (1u64 << lanes) - 1
            };
            Batch { cells, valid }
        }
        Sampling::Exhaustive => {
            let cells = (0..width)
                .map(|i| {
                    if i < 6 {
                        LANE_PATTERNS[i]
                    } else if (index >> (i - 6)) & 1 == 1 {
                        u64::MAX
                    } else {
                        0
                    }
                })
                .collect();
            let valid = if width >= 6 {
                u64::MAX
            } else {
                (1u64 << (1u32 << width)) - 1
            };
            Batch { cells, valid }
        }
    }
}

/// Shrinking-window evolution of bit-sliced cells.
fn evolve_lanes(rule: &RuleSpec, cells: &[u64], steps: usize) -> Vec<u64> {
    let subsets: Vec<u8> = rule.anf.subsets().collect();
    let mut cur = cells.to_vec();
    for _ in 0..steps {
        cur = cur
            .windows(3)
            .map(|w| {
                subsets.iter().fold(0u64, |acc, &s| {
                    let mut term = u64::MAX;
                    if s & 4 != 0 {
                        term &= w[0];
                    }
                    if s & 2 != 0 {
                        term &= w[1];
                    }
                    if s & 1 != 0 {
                        term &= w[2];
                    }
                    acc ^ term
                })
            })
            .collect();
    }
    cur
}

fn check_sampling(sampling: Sampling, width: usize) -> Result<()> {
    match sampling {
        Sampling::Random { trials: 0, .. } => domain("trials must be >= 1"),
        Sampling::Exhaustive if width > EXHAUSTIVE_MAX_WIDTH => domain(format!(
            "exhaustive mode needs a window of at most {EXHAUSTIVE_MAX_WIDTH} cells, got {width}"
        )),
        _ => Ok(()),
    }
}

fn check_t(t: usize) -> Result<()> {
    if t == 0 {
        return domain("time t must be >= 1");
    }
    Ok(())
}

fn sum_vecs(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Probability, per initial offset `j`, that flipping cell `j` changes `eta_t(0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityProfile {
    pub rule_code: u8,
    pub t: usize,
    pub offsets: Vec<i64>,
    pub estimates: Vec<f64>,
    /// Trials in which the flip changed the output, per offset.
    pub flips: Vec<u64>,
    pub trials: u64,
    pub sampling: Sampling,
    pub seed: Option<u64>,
    pub sigma_left: f64,
    pub sigma_right: f64,
}

impl SensitivityProfile {
    pub fn estimate(&self, j: i64) -> Option<f64> {
        let idx = j + self.t as i64;
        (0..self.estimates.len() as i64)
            .contains(&idx)
            .then(|| self.estimates[idx as usize])
    }

    /// `sigma_left / sigma_right`; infinite when the right side is insensitive.
    pub fn asymmetry_ratio(&self) -> f64 {
        self.sigma_left / self.sigma_right
    }

    /// Mean estimate over `-t < j < 0`.
    pub fn interior_left_mean(&self) -> f64 {
        let t = self.t as i64;
        if t < 2 {
            return f64::NAN;
        }
        let vals: Vec<f64> = (-t + 1..0).filter_map(|j| self.estimate(j)).collect();
        vals.iter().sum::<f64>() / vals.len() as f64
    }
}

pub fn sensitivity_profile(
    rule: &RuleSpec,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<SensitivityProfile> {
    sensitivity_with(rule, t, Sampling::Random { trials, seed })
}

pub fn sensitivity_profile_exhaustive(rule: &RuleSpec, t: usize) -> Result<SensitivityProfile> {
    sensitivity_with(rule, t, Sampling::Exhaustive)
}

pub fn sensitivity_with(
    rule: &RuleSpec,
    t: usize,
    sampling: Sampling,
) -> Result<SensitivityProfile> {
    check_t(t)?;
    let width = 2 * t + 1;
    check_sampling(sampling, width)?;
    let flips = (0..batch_count(sampling, width))
        .into_par_iter()
        .map(|b| {
            let mut batch = make_batch(sampling, width, b);
            let base = evolve_lanes(rule, &batch.cells, t)[0];
            (0..width)
                .map(|j| {
                    batch.cells[j] = !batch.cells[j];
                    let flipped = evolve_lanes(rule, &batch.cells, t)[0];
                    batch.cells[j] = !batch.cells[j];
                    ((flipped ^ base) & batch.valid).count_ones() as u64
                })
                .collect::<Vec<u64>>()
        })
        .reduce(|| vec![0; width], sum_vecs);
    let trials = sampling.trials(width);
    let estimates: Vec<f64> = flips.iter().map(|&f| f as f64 / trials as f64).collect();
    let sigma_left = estimates[..t].iter().sum();
    let sigma_right = estimates[t + 1..].iter().sum();
    Ok(SensitivityProfile {
        rule_code: rule.code,
        t,
        offsets: (-(t as i64)..=t as i64).collect(),
        estimates,
        flips,
        trials,
        sampling,
        seed: sampling.seed(),
        sigma_left,
        sigma_right,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equidistribution {
    pub rule_code: u8,
    pub t: usize,
    pub trials: u64,
    pub sampling: Sampling,
    pub seed: Option<u64>,
    pub ones: u64,
    pub p_hat: f64,
    pub z_score: f64,
    /// Set when the rule is not left-permutive, so no equidistribution is implied.
    pub warning: Option<String>,
}

pub fn equidistribution_test(
    rule: &RuleSpec,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<Equidistribution> {
    equidistribution_with(rule, t, Sampling::Random { trials, seed })
}

pub fn equidistribution_with(
    rule: &RuleSpec,
    t: usize,
    sampling: Sampling,
) -> Result<Equidistribution> {
    check_t(t)?;
    let width = 2 * t + 1;
    check_sampling(sampling, width)?;
    let ones: u64 = (0..batch_count(sampling, width))
        .into_par_iter()
        .map(|b| {
            let batch = make_batch(sampling, width, b);
            (evolve_lanes(rule, &batch.cells, t)[0] & batch.valid).count_ones() as u64
        })
        .sum();
    let trials = sampling.trials(width);
    let p_hat = ones as f64 / trials as f64;
    let z_score = (p_hat - 0.5) / (0.25 / trials as f64).sqrt();
    let warning = (!rule.flags.left_permutive).then(|| {
        format!(
            "rule {} is not left-permutive; P(eta_t(0) = 1) = 1/2 is not implied",
            rule.code
        )
    });
    Ok(Equidistribution {
        rule_code: rule.code,
        t,
        trials,
        sampling,
        seed: sampling.seed(),
        ones,
        p_hat,
        z_score,
        warning,
    })
}

/// Plug-in mutual information, in bits, of a contingency table of counts.
pub fn plug_in_mutual_information<const X: usize, const Y: usize>(counts: &[[u64; Y]; X]) -> f64 {
    let n: u64 = counts.iter().flatten().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let px: Vec<f64> = counts
        .iter()
        .map(|row| row.iter().sum::<u64>() as f64 / n)
        .collect();
    let py: Vec<f64> = (0..Y)
        .map(|y| counts.iter().map(|row| row[y]).sum::<u64>() as f64 / n)
        .collect();
    let mut mi = 0.0;
    for (x, row) in counts.iter().enumerate() {
        for (y, &c) in row.iter().enumerate() {
            if c > 0 {
                let pxy = c as f64 / n;
                mi += pxy * (pxy / (px[x] * py[y])).log2();
            }
        }
    }
    mi.max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MutualInformation {
    pub rule_code: u8,
    pub t: usize,
    pub trials: u64,
    pub sampling: Sampling,
    pub seed: Option<u64>,
    /// `joint[x][2 * y0 + y1]` with `x = eta_t(-1)`, `y0 = eta_t(0)`, `y1 = eta_t(1)`.
    pub joint: [[u64; 4]; 2],
    pub bits: f64,
}

/// `I(eta_t(-1); (eta_t(0), eta_t(1)))` from random windows over `[-t-1, t+1]`.
pub fn mutual_information(
    rule: &RuleSpec,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<MutualInformation> {
    mutual_information_with(rule, t, Sampling::Random { trials, seed })
}

pub fn mutual_information_with(
    rule: &RuleSpec,
    t: usize,
    sampling: Sampling,
) -> Result<MutualInformation> {
    check_t(t)?;
    let width = 2 * t + 3;
    check_sampling(sampling, width)?;
    let flat = (0..batch_count(sampling, width))
        .into_par_iter()
        .map(|b| {
            let batch = make_batch(sampling, width, b);
            let out = evolve_lanes(rule, &batch.cells, t);
            let (x, y0, y1) = (out[0], out[1], out[2]);
            (0..8)
                .map(|code| {
                    let pick = |w: u64, bit: u32| if (code >> bit) & 1 == 1 { w } else { !w };
                    (pick(x, 2) & pick(y0, 1) & pick(y1, 0) & batch.valid).count_ones() as u64
                })
                .collect::<Vec<u64>>()
        })
        .reduce(|| vec![0; 8], sum_vecs);
    let mut joint = [[0u64; 4]; 2];
    for (code, &c) in flat.iter().enumerate() {
        joint[code >> 2][code & 3] = c;
    }
    Ok(MutualInformation {
        rule_code: rule.code,
        t,
        trials: sampling.trials(width),
        sampling,
        seed: sampling.seed(),
        joint,
        bits: plug_in_mutual_information(&joint),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockStats {
    pub n: usize,
    /// Shannon entropy in bits of the overlapping `n`-block distribution.
    pub entropy: f64,
    pub normalized_entropy: f64,
    /// Number of distinct `n`-blocks.
    pub distinct: u64,
    pub complexity_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub sequence_length: usize,
    pub max_n: usize,
    pub blocks: Vec<BlockStats>,
}

impl EntropyReport {
    pub fn block(&self, n: usize) -> Option<&BlockStats> {
        self.blocks.get(n.checked_sub(1)?)
    }
}

/// Block entropy and block complexity of the `N - n + 1` overlapping `n`-blocks, `1 <= n <= max_n`.
pub fn block_entropy(sequence: &[bool], max_n: usize) -> Result<EntropyReport> {
    if max_n == 0 || max_n > 64 {
        return domain(format!("max_n = {max_n} must lie in 1..=64"));
    }
    if sequence.len() < max_n {
        return domain(format!(
            "sequence of length {} is shorter than max_n = {max_n}",
            sequence.len()
        ));
    }
    let blocks = (1..=max_n)
        .map(|n| {
            let mut codes: Vec<u64> = sequence
                .windows(n)
                .map(|w| w.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
                .collect();
            codes.sort_unstable();
            let total = codes.len() as f64;
            let mut entropy = 0.0;
            let mut distinct = 0u64;
            for run in codes.chunk_by(|a, b| a == b) {
                let p = run.len() as f64 / total;
                entropy -= p * p.log2();
                distinct += 1;
            }
            let entropy = entropy.max(0.0);
            BlockStats {
                n,
                entropy,
                normalized_entropy: entropy / n as f64,
                distinct,
                complexity_ratio: distinct as f64 / 2f64.powi(n as i32),
            }
        })
        .collect();
    Ok(EntropyReport {
        sequence_length: sequence.len(),
        max_n,
        blocks,
    })
}

/// Which cells the deviation counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CountView {
    /// All active cells of the row.
    Total,
    /// Active cells at positions `>= 0`.
    Right,
}

impl From<CountView> for View {
    fn from(v: CountView) -> View {
        match v {
            CountView::Total => View::FullRow,
            CountView::Right => View::RightHalf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeviationPoint {
    pub m: u64,
    pub rule30: u64,
    pub rule22: u64,
    pub epsilon: i64,
}

/// `epsilon(m) = |S_m(30)| - |S_m(22)|` for `1 <= m <= max_m`; rule 30 by
/// simulation, rule 22 by its closed form, both counted under `view`.
pub fn deviation(max_m: u64, view: CountView) -> Vec<DeviationPoint> {
    SeedEvolution::new(RuleSpec::new(30))
        .take(max_m as usize + 1)
        .skip(1)
        .map(|row| {
            let m = row.generation();
            let rule30 = match view {
                CountView::Total => row.count_ones(),
                CountView::Right => row.active_positions().filter(|&p| p >= 0).count() as u64,
            };
            let rule22 = match view {
                CountView::Total => cardinality22(m),
                CountView::Right => right_half_count22(m),
            }
            .expect("m >= 1") as u64;
            DeviationPoint {
                m,
                rule30,
                rule22,
                epsilon: rule30 as i64 - rule22 as i64,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    /// Exponent `b` of `y ~ x^b`.
    pub slope: f64,
    /// Natural-log intercept.
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
    /// `x` values dropped because `x <= 0` or `y <= 0`.
    pub excluded: Vec<f64>,
    pub filter_note: String,
}

/// Ordinary least squares of `ln y` on `ln x` over the points with `x, y > 0`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult> {
    let (kept, dropped): (Vec<_>, Vec<_>) = points
        .iter()
        .copied()
        .partition(|&(x, y)| x > 0.0 && y > 0.0);
    if kept.len() < 2 {
        return Err(EcaError::InsufficientData(format!(
            "power-law fit needs at least 2 positive points, got {}",
            kept.len()
        )));
    }
    let logs: Vec<(f64, f64)> = kept.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(EcaError::InsufficientData(
            "all points share the same x".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    let excluded: Vec<f64> = dropped.iter().map(|p| p.0).collect();
    let filter_note = if excluded.is_empty() {
        "no points excluded".to_string()
    } else {
        let list: Vec<String> = excluded.iter().map(|x| format!("{x}")).collect();
        format!(
            "excluded {} non-positive points at x = {}",
            excluded.len(),
            list.join(", ")
        )
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        n_points: kept.len(),
        excluded,
        filter_note,
    })
}

/// Power-law fit of `epsilon(m)` against `m`.
pub fn fit_deviation(points: &[DeviationPoint]) -> Result<FitResult> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.m as f64, p.epsilon as f64))
        .collect();
    fit_power_law(&xy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{center_column, evolve_window, Row};

    fn rule(code: u8) -> RuleSpec {
        RuleSpec::new(code)
    }

    /// Per-window reference using the packed-row evaluator.
    fn brute_sensitivity(r: &RuleSpec, t: usize) -> Vec<u64> {
        let width = 2 * t + 1;
        let mut flips = vec![0u64; width];
        for w in 0..(1u64 << width) {
            let cells: Vec<bool> = (0..width).map(|i| (w >> i) & 1 == 1).collect();
            let base = evolve_window(r, &Row::from_cells(-(t as i64), &cells, 0), t)
                .unwrap()
                .get(0);
            for j in 0..width {
                let mut c = cells.clone();
                c[j] = !c[j];
                let out = evolve_window(r, &Row::from_cells(-(t as i64), &c, 0), t)
                    .unwrap()
                    .get(0);
                flips[j] += (out != base) as u64;
            }
        }
        flips
    }

    #[test]
    fn exhaustive_matches_brute_force() {
        for code in [22u8, 30, 110, 90] {
            for t in 1..=3 {
                let p = sensitivity_profile_exhaustive(&rule(code), t).unwrap();
                assert_eq!(
                    p.flips,
                    brute_sensitivity(&rule(code), t),
                    "rule {code} t {t}"
                );
                assert_eq!(p.trials, 1 << (2 * t + 1));
            }
        }
    }

    #[test]
    fn left_permutive_edge_is_deterministic() {
        for code in (0..=255u8).filter(|&c| rule(c).flags.left_permutive) {
            for t in 1..=4 {
                let p = sensitivity_profile_exhaustive(&rule(code), t).unwrap();
                assert_eq!(p.estimate(-(t as i64)), Some(1.0), "rule {code} t {t}");
            }
        }
        for code in (0..=255u8).filter(|&c| rule(c).flags.right_permutive) {
            let p = sensitivity_profile_exhaustive(&rule(code), 4).unwrap();
            assert_eq!(p.estimate(4), Some(1.0));
        }
    }

    #[test]
    fn identity_rule_sensitivity() {
        let p = sensitivity_profile(&rule(204), 5, 300, 9).unwrap();
        for (&j, &e) in p.offsets.iter().zip(&p.estimates) {
            assert_eq!(e, if j == 0 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn rule22_profile_is_mirror_symmetric() {
        let p = sensitivity_profile_exhaustive(&rule(22), 6).unwrap();
        for j in 0..=6 {
            assert_eq!(p.estimate(j), p.estimate(-j));
        }
    }

    #[test]
    fn random_sampling_is_reproducible_and_partial_batches_work() {
        let a = sensitivity_profile(&rule(30), 6, 130, 42).unwrap();
        let b = sensitivity_profile(&rule(30), 6, 130, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials, 130);
        assert!(a.estimates.iter().all(|e| (0.0..=1.0).contains(e)));
        let c = sensitivity_profile(&rule(30), 6, 130, 43).unwrap();
        assert_ne!(a.flips, c.flips);
        assert!(sensitivity_profile(&rule(30), 0, 10, 1).is_err());
        assert!(sensitivity_profile(&rule(30), 3, 0, 1).is_err());
        assert!(sensitivity_profile_exhaustive(&rule(30), 12).is_err());
    }

    #[test]
    fn random_windows_match_row_evaluator() {
        // Rebuild trial k's window from its stream and evaluate it with the packed-row engine.
        let (t, seed, trials) = (7usize, 5u64, 100u64);
        let width = 2 * t + 1;
        let r = rule(30);
        let mut ones = 0;
        for k in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let bits = rng.next_u64();
            let cells: Vec<bool> = (0..width).map(|i| (bits >> i) & 1 == 1).collect();
            ones += evolve_window(&r, &Row::from_cells(-(t as i64), &cells, 0), t)
                .unwrap()
                .get(0) as u64;
        }
        assert_eq!(
            equidistribution_test(&r, t, trials, seed).unwrap().ones,
            ones
        );
    }

    #[test]
    fn equidistribution_exact_and_warning() {
        for code in [30u8, 45, 150] {
            for t in 1..=3 {
                let e = equidistribution_with(&rule(code), t, Sampling::Exhaustive).unwrap();
                assert_eq!(e.p_hat, 0.5);
                assert_eq!(e.z_score, 0.0);
                assert!(e.warning.is_none());
            }
        }
        // Rule 22 is not left-permutive; exact values from direct enumeration.
        let exact22: Vec<u64> = (1..=3)
            .map(|t| {
                equidistribution_with(&rule(22), t, Sampling::Exhaustive)
                    .unwrap()
                    .ones
            })
            .collect();
        assert_eq!(exact22, [3, 11, 49]);
        assert!(equidistribution_with(&rule(22), 1, Sampling::Exhaustive)
            .unwrap()
            .warning
            .is_some());
        let e = equidistribution_test(&rule(0), 1, 1000, 3).unwrap();
        assert_eq!(e.p_hat, 0.0);
        assert!(e.warning.is_some());
    }

    #[test]
    fn plug_in_mi_synthetic() {
        let n = 100_000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut indep = [[0u64; 4]; 2];
        let mut dep = [[0u64; 4]; 2];
        for _ in 0..n {
            let r = rng.next_u32();
            let (x, y) = ((r & 1) as usize, ((r >> 1) & 3) as usize);
            indep[x][y] += 1;
            dep[x][3 * x] += 1;
        }
        let bias = 3.0 / (2.0 * n as f64 * std::f64::consts::LN_2);
        assert!(plug_in_mutual_information(&indep) < 10.0 * bias);
        assert!((plug_in_mutual_information(&dep) - 1.0).abs() < 1e-2);
        assert_eq!(plug_in_mutual_information(&[[0u64; 4]; 2]), 0.0);
    }

    #[test]
    fn mutual_information_exhaustive_is_small_table() {
        let mi = mutual_information_with(&rule(30), 2, Sampling::Exhaustive).unwrap();
        assert_eq!(mi.joint.iter().flatten().sum::<u64>(), 1 << 7);
        assert!(mi.bits >= 0.0);
    }

    #[test]
    fn block_entropy_examples() {
        let zeros = vec![false; 100];
        let r = block_entropy(&zeros, 5).unwrap();
        assert!(r.blocks.iter().all(|b| b.entropy == 0.0 && b.distinct == 1));

        let alt: Vec<bool> = (0..1000).map(|i| i % 2 == 1).collect();
        let b3 = *block_entropy(&alt, 3).unwrap().block(3).unwrap();
        assert_eq!(b3.distinct, 2);
        assert!((b3.entropy - 1.0).abs() < 1e-5);

        assert!(block_entropy(&[true, false], 3).is_err());
        assert!(block_entropy(&alt, 0).is_err());
    }

    #[test]
    fn rule30_center_column_blocks() {
        let column = center_column(&rule(30), 4096);
        let r = block_entropy(&column, 8).unwrap();
        assert!(r.block(8).unwrap().normalized_entropy > 0.99);
        for n in 1..=6 {
            assert_eq!(r.block(n).unwrap().distinct, 1 << n);
        }
    }

    #[test]
    fn deviation_examples() {
        let d = deviation(3, CountView::Total);
        assert_eq!(d.iter().map(|p| p.epsilon).collect::<Vec<_>>(), [0, 1, 0]);
        assert_eq!((d[1].rule30, d[1].rule22), (3, 2));
    }

    #[test]
    fn deviation_uses_same_counts_as_simulation() {
        let sim22: Vec<_> = SeedEvolution::new(rule(22)).take(129).skip(1).collect();
        for view in [CountView::Total, CountView::Right] {
            for (p, row) in deviation(128, view).iter().zip(&sim22) {
                let count = match view {
                    CountView::Total => row.count_ones(),
                    CountView::Right => row.active_positions().filter(|&x| x >= 0).count() as u64,
                };
                assert_eq!(p.rule22, count, "m = {}", p.m);
            }
        }
    }

    #[test]
    fn power_law_fits() {
        let sq: Vec<(f64, f64)> = (1..=10).map(|m| (m as f64, (m * m) as f64)).collect();
        let f = fit_power_law(&sq).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && f.intercept.abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);

        let lin: Vec<(f64, f64)> = (1..=10).map(|m| (m as f64, 3.0 * m as f64)).collect();
        let f = fit_power_law(&lin).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12 && (f.intercept - 3f64.ln()).abs() < 1e-12);

        let f = fit_power_law(&[(1.0, 0.0), (2.0, 4.0), (4.0, 16.0), (3.0, -1.0)]).unwrap();
        assert_eq!(f.excluded, [1.0, 3.0]);
        assert_eq!(f.n_points, 2);
        assert!(matches!(
            fit_power_law(&[(1.0, 1.0), (2.0, 0.0)]),
            Err(EcaError::InsufficientData(_))
        ));
        assert!(fit_power_law(&[(2.0, 1.0), (2.0, 3.0)]).is_err());
    }

    #[test]
    fn deviation_fit_matches_reference() {
        // Reference slope from an independent set-based simulation and numpy polyfit.
        let f = fit_deviation(&deviation(128, CountView::Total)).unwrap();
        assert_eq!(f.n_points, 121);
        assert!((f.slope - 1.1122021).abs() < 1e-6, "{}", f.slope);
        assert!((f.intercept - -0.88024899).abs() < 1e-6);
    }
}
