//! Closed forms for rule 22 (`g = a + b + c + abc`) from a single seed.
//!
//! Two cardinalities are exposed:
//!
//! * `total`: active cells in the whole row at generation `m`, given by
//!   `2^popcount(m/2) * 3^(m mod 2)`;
//! * `right_half`: active cells at positions `>= 0`.
//!
//! The pattern is mirror symmetric, so `total = 2 * right_half - [0 in S_m]`.
//! Position 0 is active only at `m <= 1`, hence `right_half = total / 2` for
//! every `m >= 2`.
//!
//! The right-half support obeys a two-step recursion from `S_1 = {0, 1}`,
//! `S_2 = {2}`: odd `m` thickens `S_{m-1}` (every cell spawns `c-1, c, c+1`),
//! even `m = 2k` keeps the cells of `S_k` with the parity of `k` and doubles
//! them. [`support22`] walks that recursion in `O(log m)` levels.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::evolution::{support, SeedEvolution, SupportSet, View};
use crate::rule_algebra::RuleSpec;

pub const RULE_22: u8 = 22;

/// Polynomial over F2, stored as its strictly increasing exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct PolyF2 {
    exponents: Vec<u64>,
}

impl PolyF2 {
    pub fn zero() -> Self {
        PolyF2::default()
    }

    pub fn one() -> Self {
        PolyF2 { exponents: vec![0] }
    }

    pub fn monomial(exp: u64) -> Self {
        PolyF2 {
            exponents: vec![exp],
        }
    }

    /// Builds a polynomial from exponents; repeated exponents cancel in pairs.
    pub fn from_exponents(exps: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = exps.into_iter().collect();
        v.sort_unstable();
        let mut exponents: Vec<u64> = Vec::with_capacity(v.len());
        for e in v {
            if exponents.last() == Some(&e) {
                exponents.pop();
            } else {
                exponents.push(e);
            }
        }
        PolyF2 { exponents }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.exponents.last().copied()
    }

    pub fn term_count(&self) -> usize {
        self.exponents.len()
    }

    /// Sum over F2: symmetric difference of exponent sets.
    pub fn add(&self, other: &PolyF2) -> PolyF2 {
        let (a, b) = (&self.exponents, &other.exponents);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        PolyF2 { exponents: out }
    }

    pub fn mul(&self, other: &PolyF2) -> PolyF2 {
        let mut acc = PolyF2::zero();
        for &e in &other.exponents {
            let shifted = PolyF2 {
                exponents: self.exponents.iter().map(|x| x + e).collect(),
            };
            acc = acc.add(&shifted);
        }
        acc
    }
}

impl fmt::Display for PolyF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.exponents.iter().map(|e| format!("x^{e}")).collect();
        f.write_str(&terms.join(" + "))
    }
}

fn check_m(m: u64) -> Result<()> {
    if m == 0 {
        return domain("generation m must be >= 1");
    }
    Ok(())
}

/// Total active cells of rule 22 at generation `m`: `2^popcount(m/2) * 3^(m mod 2)`.
///
/// Exact for every `u64` input: the result is below `3 * 2^63`.
pub fn cardinality22(m: u64) -> Result<u128> {
    check_m(m)?;
    let pow2 = 1u128 << (m / 2).count_ones();
    Ok(if m % 2 == 1 { 3 * pow2 } else { pow2 })
}

/// Active cells of rule 22 at positions `>= 0` at generation `m`.
pub fn right_half_count22(m: u64) -> Result<u128> {
    let total = cardinality22(m)?;
    Ok(if m == 1 { 2 } else { total / 2 })
}

/// Right-half support of rule 22 at generation `m`, built by the recursion alone.
pub fn support22(m: u64) -> Result<SupportSet> {
    check_m(m)?;
    let positions = support22_positions(m)
        .into_iter()
        .map(|p| p as i64)
        .collect();
    Ok(SupportSet {
        positions,
        view: View::RightHalf,
    })
}

fn support22_positions(m: u64) -> Vec<u64> {
    match m {
        1 => vec![0, 1],
        2 => vec![2],
        _ if m % 2 == 1 => thicken(&support22_positions(m - 1), m),
        _ => {
            let k = m / 2;
            support22_positions(k)
                .into_iter()
                .filter(|r| r % 2 == k % 2)
                .map(|r| 2 * r)
                .collect()
        }
    }
}

/// Merged union of `{c-1, c, c+1}` over a sorted input, clipped at 0.
fn thicken(prev: &[u64], m: u64) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(prev.len() * 3);
    for &c in prev {
        debug_assert!(c > 0 || m < 3, "thickening reached below 0 at m = {m}");
        let lo = c.saturating_sub(1);
        for p in lo..=c + 1 {
            if out.last().is_none_or(|&l| p > l) {
                out.push(p);
            }
        }
    }
    out
}

/// Generating polynomial `P_m(x) = sum over r in S_m of x^r`.
pub fn poly22(m: u64) -> Result<PolyF2> {
    check_m(m)?;
    Ok(PolyF2 {
        exponents: support22_positions(m),
    })
}

/// `x (1 + x + x^2) * prod_{j=2}^{n-1} (1 + x^(2^j))`, expanded over F2.
pub fn mersenne_poly(n: u32) -> Result<PolyF2> {
    if n < 2 {
        return domain(format!("Mersenne index n = {n} must be >= 2"));
    }
    if n > 63 {
        return domain(format!("Mersenne index n = {n} exceeds 63"));
    }
    let mut p = PolyF2::from_exponents([1, 2, 3]);
    for j in 2..n {
        p = p.mul(&PolyF2::from_exponents([0, 1u64 << j]));
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Simulated full-row count against [`cardinality22`].
    Cardinality,
    /// Simulated right-half support against [`support22`].
    Recursion,
    /// Rightmost simulated cell at position `m`.
    Degree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub m: u64,
    pub check: Check,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub max_m: u64,
    pub checked: u64,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Cross-checks all closed forms against direct simulation for `1 <= m <= max_m`.
pub fn verify_closed_forms(max_m: u64) -> VerifyReport {
    let mut mismatches = Vec::new();
    let rule = RuleSpec::new(RULE_22);
    for row in SeedEvolution::new(rule).take(max_m as usize + 1).skip(1) {
        let m = row.generation();
        let total = row.count_ones() as u128;
        let expected_total = cardinality22(m).expect("m >= 1");
        if total != expected_total {
            mismatches.push(Mismatch {
                m,
                check: Check::Cardinality,
                detail: format!("simulated {total}, formula {expected_total}"),
            });
        }
        let simulated = support(&row, View::RightHalf);
        let recursive = support22(m).expect("m >= 1");
        if simulated != recursive {
            mismatches.push(Mismatch {
                m,
                check: Check::Recursion,
                detail: format!(
                    "simulated {:?}, recursion {:?}",
                    simulated.positions, recursive.positions
                ),
            });
        }
        if simulated.max() != Some(m as i64) {
            mismatches.push(Mismatch {
                m,
                check: Check::Degree,
                detail: format!("rightmost active cell {:?}", simulated.max()),
            });
        }
    }
    VerifyReport {
        max_m,
        checked: max_m,
        mismatches,
    }
}
