//! One-shot regeneration of every figure and table data file.
//!
//! All outputs are pure functions of the seed; no timestamps or host data are
//! written, so reruns and different thread counts give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::output::fmt_f64;
use super::{rule_json, Failure};
use crate::evolution::{self, SeedEvolution, View};
use crate::rule22;
use crate::rule_algebra::RuleSpec;
use crate::statistics::{self, CountView};
use crate::VERSION;

pub const PATTERN_GENERATIONS: usize = 64;
pub const CARDINALITY_MAX_M: u64 = 128;
pub const DEVIATION_MAX_M: u64 = 128;
pub const SENSITIVITY_T: usize = 20;
pub const SENSITIVITY_TRIALS: u64 = 5000;
pub const GROWTH_T: std::ops::RangeInclusive<usize> = 5..=20;
pub const ENTROPY_STEPS: usize = 4095;
pub const ENTROPY_MAX_N: usize = 16;
pub const VERIFY_MAX_M: u64 = 256;
pub const TABLE_RULES: [u8; 4] = [22, 30, 135, 150];

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub file: String,
    pub bytes: usize,
    pub parameters: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub version: String,
    pub seed: u64,
    pub files: Vec<ManifestEntry>,
    pub verification_passed: bool,
}

struct Writer<'a> {
    dir: &'a Path,
    entries: Vec<ManifestEntry>,
}

impl Writer<'_> {
    fn put(&mut self, name: &str, bytes: &[u8], parameters: Value) -> Result<(), Failure> {
        fs::write(self.dir.join(name), bytes)?;
        self.entries.push(ManifestEntry {
            file: name.into(),
            bytes: bytes.len(),
            parameters,
        });
        Ok(())
    }

    fn put_json(&mut self, name: &str, value: &Value, parameters: Value) -> Result<(), Failure> {
        let mut s =
            serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
        s.push('\n');
        self.put(name, s.as_bytes(), parameters)
    }
}

/// Writes all artifacts into `dir` (created if missing) and returns the manifest.
pub fn reproduce(dir: &Path, seed: u64) -> Result<Manifest, Failure> {
    fs::create_dir_all(dir)?;
    let mut w = Writer {
        dir,
        entries: Vec::new(),
    };

    for code in [22u8, 150, 30] {
        let rows = evolution::evolve_single_seed(&RuleSpec::new(code), PATTERN_GENERATIONS);
        let pbm = evolution::encode_pbm(&rows)?;
        w.put(
            &format!("fig1_{code}.pbm"),
            &pbm,
            json!({ "rule": code, "generations": PATTERN_GENERATIONS }),
        )?;
    }

    let mut csv =
        String::from("m,closed_form_total,closed_form_right,simulated_total,simulated_right\n");
    for row in SeedEvolution::new(RuleSpec::new(22))
        .take(CARDINALITY_MAX_M as usize + 1)
        .skip(1)
    {
        let m = row.generation();
        let right = evolution::support(&row, View::RightHalf).len();
        writeln!(
            csv,
            "{m},{},{},{},{right}",
            rule22::cardinality22(m)?,
            rule22::right_half_count22(m)?,
            row.count_ones()
        )
        .expect("string write");
    }
    w.put(
        "fig2_cardinality.csv",
        csv.as_bytes(),
        json!({ "rule": 22, "max_m": CARDINALITY_MAX_M }),
    )?;

    let points = statistics::deviation(DEVIATION_MAX_M, CountView::Total);
    let mut csv = String::from("m,rule30,rule22,epsilon\n");
    for p in &points {
        writeln!(csv, "{},{},{},{}", p.m, p.rule30, p.rule22, p.epsilon).expect("string write");
    }
    let params = json!({ "max_m": DEVIATION_MAX_M, "view": CountView::Total });
    w.put("fig3_deviation.csv", csv.as_bytes(), params.clone())?;
    let fit = statistics::fit_deviation(&points)?;
    w.put_json("fit.json", &json!({ "version": VERSION, "view": CountView::Total, "max_m": DEVIATION_MAX_M, "fit": fit }), params)?;

    let r30 = RuleSpec::new(30);
    let r22 = RuleSpec::new(22);
    let p30 = statistics::sensitivity_profile(&r30, SENSITIVITY_T, SENSITIVITY_TRIALS, seed)?;
    let p22 = statistics::sensitivity_profile(&r22, SENSITIVITY_T, SENSITIVITY_TRIALS, seed)?;
    let mut csv = String::from("offset,rule30,rule22\n");
    for ((j, a), b) in p30.offsets.iter().zip(&p30.estimates).zip(&p22.estimates) {
        writeln!(csv, "{j},{},{}", fmt_f64(*a), fmt_f64(*b)).expect("string write");
    }
    w.put(
        "fig5_sensitivity.csv",
        csv.as_bytes(),
        json!({ "rules": [30, 22], "t": SENSITIVITY_T, "trials": SENSITIVITY_TRIALS, "seed": seed }),
    )?;

    let mut csv = String::from("t,sigma_left,sigma_right,ratio,interior_left_mean\n");
    for t in GROWTH_T {
        let p = statistics::sensitivity_profile(&r30, t, SENSITIVITY_TRIALS, seed)?;
        writeln!(
            csv,
            "{t},{},{},{},{}",
            fmt_f64(p.sigma_left),
            fmt_f64(p.sigma_right),
            fmt_f64(p.asymmetry_ratio()),
            fmt_f64(p.interior_left_mean())
        )
        .expect("string write");
    }
    w.put(
        "growth.csv",
        csv.as_bytes(),
        json!({ "rule": 30, "t": [GROWTH_T.start(), GROWTH_T.end()], "trials": SENSITIVITY_TRIALS, "seed": seed }),
    )?;

    let mut csv = String::from("rule,n,H_n,H_n_over_n,p_n,p_n_over_2n\n");
    for code in [30u8, 22] {
        let column = evolution::center_column(&RuleSpec::new(code), ENTROPY_STEPS);
        let report = statistics::block_entropy(&column, ENTROPY_MAX_N)?;
        for b in &report.blocks {
            writeln!(
                csv,
                "{code},{},{},{},{},{}",
                b.n,
                fmt_f64(b.entropy),
                fmt_f64(b.normalized_entropy),
                b.distinct,
                fmt_f64(b.complexity_ratio)
            )
            .expect("string write");
        }
    }
    w.put(
        "fig6_entropy.csv",
        csv.as_bytes(),
        json!({ "rules": [30, 22], "sequence_length": ENTROPY_STEPS + 1, "max_n": ENTROPY_MAX_N }),
    )?;

    let rules: Vec<Value> = TABLE_RULES
        .iter()
        .map(|&c| rule_json(&RuleSpec::new(c)))
        .collect();
    w.put_json(
        "table1_rules.json",
        &json!({ "version": VERSION, "rules": rules }),
        json!({ "rules": TABLE_RULES }),
    )?;

    let report = rule22::verify_closed_forms(VERIFY_MAX_M);
    let verification_passed = report.passed();
    w.put_json(
        "verify_report.json",
        &json!({ "version": VERSION, "passed": verification_passed, "report": report }),
        json!({ "max_m": VERIFY_MAX_M }),
    )?;

    let manifest = Manifest {
        version: VERSION.into(),
        seed,
        files: w.entries,
        verification_passed,
    };
    let mut s =
        serde_json::to_string_pretty(&manifest).map_err(|e| Failure::Runtime(e.to_string()))?;
    s.push('\n');
    fs::write(dir.join("manifest.json"), s)?;
    Ok(manifest)
}
