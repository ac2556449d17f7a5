//! Boolean-function algebra for radius-1 binary rules.
//!
//! A rule is a map `g(a, b, c)` where `a` is the left neighbour, `b` the cell
//! itself and `c` the right neighbour. The neighbourhood index is
//! `k = 4a + 2b + c`, so bit `k` of the Wolfram code is `g` at that
//! neighbourhood.
//!
//! The algebraic normal form (ANF) is stored as an 8-bit mask whose bit `i`
//! is the coefficient of the `i`-th monomial in the fixed order
//! `1, a, b, c, ab, ac, bc, abc` (see [`MONOMIALS`]).

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};

/// Monomial labels in mask-bit order.
pub const MONOMIALS: [&str; 8] = ["1", "a", "b", "c", "a*b", "a*c", "b*c", "a*b*c"];

/// Variable subset of each monomial, in neighbourhood-index bit layout (a = 4, b = 2, c = 1).
const MONOMIAL_SUBSET: [u8; 8] = [0b000, 0b100, 0b010, 0b001, 0b110, 0b101, 0b011, 0b111];

/// One of the three rule inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    /// Left neighbour.
    A,
    /// The cell itself.
    B,
    /// Right neighbour.
    C,
}

impl Variable {
    pub const ALL: [Variable; 3] = [Variable::A, Variable::B, Variable::C];

    /// Bit of this variable inside a neighbourhood index.
    pub const fn index_bit(self) -> u8 {
        match self {
            Variable::A => 4,
            Variable::B => 2,
            Variable::C => 1,
        }
    }
}

/// Möbius transform over F2 on the subset lattice of {a, b, c}.
///
/// Input and output are indexed by neighbourhood index / variable subset.
/// The transform is its own inverse.
pub fn mobius_transform(table: u8) -> u8 {
    let mut f = table;
    for var in [1u8, 2, 4] {
        for k in 0..8u8 {
            if k & var != 0 && (f >> (k ^ var)) & 1 == 1 {
                f ^= 1 << k;
            }
        }
    }
    f
}

/// ANF coefficients as an 8-bit monomial mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AnfMask(u8);

impl AnfMask {
    pub const ZERO: AnfMask = AnfMask(0);

    pub const fn from_bits(bits: u8) -> Self {
        AnfMask(bits)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Builds a mask from a truth table (bit `k` = value at `k = 4a+2b+c`).
    pub fn from_truth_table(table: u8) -> Self {
        let coeffs = mobius_transform(table);
        let mut bits = 0u8;
        for (pos, subset) in MONOMIAL_SUBSET.iter().enumerate() {
            if (coeffs >> subset) & 1 == 1 {
                bits |= 1 << pos;
            }
        }
        AnfMask(bits)
    }

    /// Variable subsets (neighbourhood bit layout) of the monomials present.
    pub fn subsets(self) -> impl Iterator<Item = u8> {
        (0..8)
            .filter(move |pos| (self.0 >> pos) & 1 == 1)
            .map(|pos| MONOMIAL_SUBSET[pos])
    }

    /// Monomial labels present, in mask order.
    pub fn monomials(self) -> impl Iterator<Item = &'static str> {
        (0..8)
            .filter(move |pos| (self.0 >> pos) & 1 == 1)
            .map(|pos| MONOMIALS[pos])
    }

    /// Largest monomial degree, `None` for the zero polynomial.
    pub fn degree(self) -> Option<u32> {
        self.subsets().map(u8::count_ones).max()
    }

    pub fn eval(self, a: bool, b: bool, c: bool) -> bool {
        let k = (a as u8) << 2 | (b as u8) << 1 | c as u8;
        self.subsets().filter(|s| s & !k == 0).count() % 2 == 1
    }

    /// Zeta transform back to a truth table.
    pub fn truth_table(self) -> u8 {
        let mut coeffs = 0u8;
        for s in self.subsets() {
            coeffs |= 1 << s;
        }
        mobius_transform(coeffs)
    }
}

impl fmt::Display for AnfMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<&str> = self.monomials().collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Symmetry and permutivity classification of a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RuleFlags {
    pub s3_symmetric: bool,
    pub left_permutive: bool,
    pub right_permutive: bool,
    pub center_permutive: bool,
    /// No monomial of degree two or more; a constant term is allowed.
    pub linear: bool,
}

/// A fully classified elementary rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSpec {
    pub code: u8,
    pub truth_table: u8,
    pub anf: AnfMask,
    pub flags: RuleFlags,
}

impl RuleSpec {
    pub fn new(code: u8) -> Self {
        let truth_table = code;
        let anf = AnfMask::from_truth_table(truth_table);
        let flags = RuleFlags {
            s3_symmetric: is_s3_symmetric(truth_table),
            left_permutive: permutive_in(truth_table, Variable::A),
            right_permutive: permutive_in(truth_table, Variable::C),
            center_permutive: permutive_in(truth_table, Variable::B),
            linear: anf.degree().is_none_or(|d| d <= 1),
        };
        RuleSpec {
            code,
            truth_table,
            anf,
            flags,
        }
    }

    #[inline]
    pub fn output(&self, a: bool, b: bool, c: bool) -> bool {
        let k = (a as u8) << 2 | (b as u8) << 1 | c as u8;
        (self.truth_table >> k) & 1 == 1
    }

    /// Permutivity read off the ANF: `g = v + h(others)`.
    pub fn permutive_by_anf(&self, var: Variable) -> bool {
        let bit = var.index_bit();
        let mut has_linear = false;
        for s in self.anf.subsets() {
            if s == bit {
                has_linear = true;
            } else if s & bit != 0 {
                return false;
            }
        }
        has_linear
    }

    /// The rule with left and right inputs exchanged.
    pub fn mirror(&self) -> RuleSpec {
        RuleSpec::new(mirror_code(self.code))
    }

    pub fn binary(&self) -> String {
        format!("{:08b}", self.code)
    }
}

impl From<u8> for RuleSpec {
    fn from(code: u8) -> Self {
        RuleSpec::new(code)
    }
}

fn check_code(code: i64) -> Result<u8> {
    u8::try_from(code).or_else(|_| domain(format!("rule code {code} is outside 0..=255")))
}

/// ANF monomial mask of a Wolfram code.
pub fn anf_of_rule(code: i64) -> Result<AnfMask> {
    Ok(AnfMask::from_truth_table(check_code(code)?))
}

/// Full classification of a Wolfram code.
pub fn classify(code: i64) -> Result<RuleSpec> {
    Ok(RuleSpec::new(check_code(code)?))
}

/// Wolfram code of the rule with `a` and `c` exchanged.
pub fn mirror_code(code: u8) -> u8 {
    permute_table(code, [2, 1, 0])
}

/// Applies a permutation of input positions to a truth table.
///
/// `perm[i]` is the bit position (0 = c, 1 = b, 2 = a) that input bit `i`
/// moves to.
fn permute_table(table: u8, perm: [u8; 3]) -> u8 {
    let mut out = 0u8;
    for k in 0..8u8 {
        let mut k2 = 0u8;
        for (i, &p) in perm.iter().enumerate() {
            k2 |= ((k >> i) & 1) << p;
        }
        out |= ((table >> k) & 1) << k2;
    }
    out
}

fn is_s3_symmetric(table: u8) -> bool {
    const PERMS: [[u8; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    PERMS.iter().all(|&p| permute_table(table, p) == table)
}

fn permutive_in(table: u8, var: Variable) -> bool {
    let bit = var.index_bit();
    (0..8u8)
        .filter(|k| k & bit == 0)
        .all(|k| (table >> k) & 1 != (table >> (k | bit)) & 1)
}

/// Summary counts over all 256 rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub total: usize,
    pub s3_symmetric: usize,
    pub s3_symmetric_nonlinear: usize,
    pub linear: usize,
    pub left_permutive: usize,
    pub right_permutive: usize,
    pub center_permutive: usize,
}

#[derive(Debug, Clone)]
pub struct Census {
    pub rules: Vec<RuleSpec>,
    pub summary: CensusSummary,
}

pub fn census() -> Census {
    let rules: Vec<RuleSpec> = (0..=255u8).map(RuleSpec::new).collect();
    let count = |pred: &dyn Fn(&RuleFlags) -> bool| rules.iter().filter(|r| pred(&r.flags)).count();
    let summary = CensusSummary {
        total: rules.len(),
        s3_symmetric: count(&|f| f.s3_symmetric),
        s3_symmetric_nonlinear: count(&|f| f.s3_symmetric && !f.linear),
        linear: count(&|f| f.linear),
        left_permutive: count(&|f| f.left_permutive),
        right_permutive: count(&|f| f.right_permutive),
        center_permutive: count(&|f| f.center_permutive),
    };
    Census { rules, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monos(code: i64) -> Vec<&'static str> {
        anf_of_rule(code).unwrap().monomials().collect()
    }

    #[test]
    fn anf_examples() {
        assert_eq!(monos(22), ["a", "b", "c", "a*b*c"]);
        assert_eq!(monos(30), ["a", "b", "c", "b*c"]);
        assert_eq!(monos(150), ["a", "b", "c"]);
        assert!(monos(0).is_empty());
        assert_eq!(monos(135), ["1", "a", "b*c"]);
        assert_eq!(anf_of_rule(22).unwrap().to_string(), "a + b + c + a*b*c");
        assert_eq!(anf_of_rule(0).unwrap().to_string(), "0");
    }

    #[test]
    fn out_of_range_codes() {
        assert!(matches!(anf_of_rule(256), Err(crate::EcaError::Domain(_))));
        assert!(classify(-1).is_err());
    }

    #[test]
    fn classify_examples() {
        // g(0,1,1) = g(1,1,1) = 0: the abc term stops rule 22 from being permutive in any input.
        let r22 = classify(22).unwrap();
        assert!(r22.flags.s3_symmetric && !r22.flags.linear);
        assert!(!r22.output(false, true, true) && !r22.output(true, true, true));
        assert!(
            !r22.flags.left_permutive && !r22.flags.right_permutive && !r22.flags.center_permutive
        );
        // Rule 150 is the symmetric rule that is permutive in all three inputs.
        let r150 = classify(150).unwrap().flags;
        assert!(r150.left_permutive && r150.right_permutive && r150.center_permutive);

        let r30 = classify(30).unwrap().flags;
        assert!(!r30.s3_symmetric && r30.left_permutive && !r30.right_permutive);

        let r204 = classify(204).unwrap().flags;
        assert!(r204.center_permutive && !r204.left_permutive && !r204.right_permutive);
    }

    #[test]
    fn mobius_round_trip_all_codes() {
        for code in 0..=255u8 {
            let anf = AnfMask::from_truth_table(code);
            assert_eq!(anf.truth_table(), code);
            assert_eq!(mobius_transform(mobius_transform(code)), code);
            for k in 0..8u8 {
                let got = anf.eval(k & 4 != 0, k & 2 != 0, k & 1 != 0);
                assert_eq!(got, (code >> k) & 1 == 1, "code {code} k {k}");
            }
        }
    }

    #[test]
    fn permutivity_agrees_with_anf_criterion() {
        for code in 0..=255u8 {
            let r = RuleSpec::new(code);
            assert_eq!(
                r.flags.left_permutive,
                r.permutive_by_anf(Variable::A),
                "{code}"
            );
            assert_eq!(
                r.flags.center_permutive,
                r.permutive_by_anf(Variable::B),
                "{code}"
            );
            assert_eq!(
                r.flags.right_permutive,
                r.permutive_by_anf(Variable::C),
                "{code}"
            );
        }
    }

    #[test]
    fn symmetric_rules_are_equally_permutive() {
        for r in census().rules.iter().filter(|r| r.flags.s3_symmetric) {
            let f = r.flags;
            assert_eq!(f.left_permutive, f.right_permutive);
            assert_eq!(f.left_permutive, f.center_permutive);
        }
    }

    #[test]
    fn mirror_swaps_left_and_right() {
        for code in 0..=255u8 {
            let r = RuleSpec::new(code);
            let m = r.mirror();
            assert_eq!(mirror_code(m.code), code);
            assert_eq!(r.flags.left_permutive, m.flags.right_permutive);
            assert_eq!(r.flags.right_permutive, m.flags.left_permutive);
            assert_eq!(r.flags.center_permutive, m.flags.center_permutive);
        }
        // 30 and 86 are a mirror pair.
        assert_eq!(mirror_code(30), 86);
    }

    #[test]
    fn census_counts() {
        let c = census();
        assert_eq!(c.summary.total, 256);
        assert_eq!(c.summary.s3_symmetric, 16);
        assert_eq!(c.summary.s3_symmetric_nonlinear, 12);
        let r150 = c.rules[150].flags;
        assert!(r150.s3_symmetric && r150.linear);
        // Symmetric functions are fixed by their values on input weights 0..=3.
        for r in c.rules.iter().filter(|r| r.flags.s3_symmetric) {
            for k in 0..8u8 {
                let w = (k as u32).count_ones();
                let rep = (1u8 << w) - 1;
                assert_eq!((r.code >> k) & 1, (r.code >> rep) & 1);
            }
        }
    }
}
