use eca_core::continuum::{pde_integrate, Boundary, PdeGrid};
use eca_core::evolution::{center_column, evolve_single_seed, evolve_window, step, Row};
use eca_core::rule22::{cardinality22, poly22, right_half_count22, support22};
use eca_core::rule_algebra::{mirror_code, mobius_transform, AnfMask, RuleSpec};
use eca_core::statistics::{block_entropy, sensitivity_profile};
use eca_core::PolyF2;
use proptest::prelude::*;

fn cells(max: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 1..max)
}

fn naive_step(rule: &RuleSpec, row: &Row) -> Vec<bool> {
    (row.offset() - 1..row.end() + 1)
        .map(|i| rule.output(row.get(i - 1), row.get(i), row.get(i + 1)))
        .collect()
}

fn symmetric_codes() -> Vec<u8> {
    (0..=255u8)
        .filter(|&c| RuleSpec::new(c).flags.s3_symmetric)
        .collect()
}

fn poly(max_exp: u64) -> impl Strategy<Value = PolyF2> {
    prop::collection::vec(0..max_exp, 0..12).prop_map(PolyF2::from_exponents)
}

proptest! {
    #[test]
    fn mobius_is_an_involution(t in any::<u8>()) {
        prop_assert_eq!(mobius_transform(mobius_transform(t)), t);
        prop_assert_eq!(AnfMask::from_truth_table(t).truth_table(), t);
    }

    #[test]
    fn mirror_is_an_involution(code in any::<u8>()) {
        prop_assert_eq!(mirror_code(mirror_code(code)), code);
        let r = RuleSpec::new(code);
        let m = r.mirror();
        prop_assert_eq!(r.flags.left_permutive, m.flags.right_permutive);
        prop_assert_eq!(r.flags.s3_symmetric, m.flags.s3_symmetric);
    }

    #[test]
    fn step_matches_direct_lookup(code in any::<u8>(), c in cells(200), offset in -300i64..300) {
        let rule = RuleSpec::new(code);
        let row = Row::from_cells(offset, &c, 0);
        let next = step(&row, &rule);
        prop_assert_eq!(next.offset(), offset - 1);
        let got: Vec<bool> = (next.offset()..next.end()).map(|i| next.get(i)).collect();
        prop_assert_eq!(got, naive_step(&rule, &row));
    }

    #[test]
    fn step_commutes_with_shift(code in any::<u8>(), c in cells(150), d in -100i64..100) {
        let rule = RuleSpec::new(code);
        let row = Row::from_cells(0, &c, 0);
        prop_assert_eq!(step(&row.shifted(d), &rule), step(&row, &rule).shifted(d));
    }

    #[test]
    fn light_cone(code in any::<u8>(), c in cells(80), steps in 0usize..30, flip_at in 0usize..80) {
        // Changing one cell only affects cells within distance `steps`.
        prop_assume!(flip_at < c.len());
        let rule = RuleSpec::new(code);
        let mut flipped = c.clone();
        flipped[flip_at] = !flipped[flip_at];
        let (mut a, mut b) = (Row::from_cells(0, &c, 0), Row::from_cells(0, &flipped, 0));
        for _ in 0..steps {
            a = step(&a, &rule);
            b = step(&b, &rule);
        }
        let p = flip_at as i64;
        for i in a.offset()..a.end() {
            if (i - p).abs() > steps as i64 {
                prop_assert_eq!(a.get(i), b.get(i));
            }
        }
    }

    #[test]
    fn window_evolution_agrees_with_growing_rows(code in any::<u8>(), c in cells(120), steps in 0usize..40) {
        prop_assume!(c.len() > 2 * steps);
        let rule = RuleSpec::new(code);
        let start = Row::from_cells(-7, &c, 0);
        let w = evolve_window(&rule, &start, steps).unwrap();
        let mut full = start.clone();
        for _ in 0..steps {
            full = step(&full, &rule);
        }
        for i in w.offset()..w.end() {
            prop_assert_eq!(w.get(i), full.get(i));
        }
    }

    #[test]
    fn symmetric_rules_give_mirror_symmetric_patterns(code in prop::sample::select(symmetric_codes()), steps in 0usize..100) {
        let rule = RuleSpec::new(code);
        let rows = evolve_single_seed(&rule, steps);
        for row in &rows {
            for i in 0..=row.generation() as i64 {
                prop_assert_eq!(row.get(i), row.get(-i));
            }
        }
    }

    #[test]
    fn rule_150_is_trinomial_parity(m in 0u64..64, i in -64i64..64) {
        // Coefficient of x^(i+m) in (1 + x + x^2)^m mod 2.
        let base = PolyF2::from_exponents([0, 1, 2]);
        let mut p = PolyF2::one();
        for _ in 0..m {
            p = p.mul(&base);
        }
        let rows = evolve_single_seed(&RuleSpec::new(150), m as usize);
        let expected = i + m as i64 >= 0 && p.exponents().contains(&((i + m as i64) as u64));
        prop_assert_eq!(rows[m as usize].get(i), expected);
    }

    #[test]
    fn poly_addition_is_a_group(p in poly(40), q in poly(40), r in poly(40)) {
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
        prop_assert!(p.add(&p).is_zero());
        prop_assert_eq!(p.add(&PolyF2::zero()), p.clone());
    }

    #[test]
    fn poly_multiplication_is_a_ring(p in poly(30), q in poly(30), r in poly(30)) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&PolyF2::one()), p.clone());
        // Frobenius: squaring is additive in characteristic 2.
        let s = p.add(&q);
        prop_assert_eq!(s.mul(&s), p.mul(&p).add(&q.mul(&q)));
    }

    #[test]
    fn rule22_forms_are_consistent(m in 1u64..2000) {
        let s = support22(m).unwrap();
        prop_assert_eq!(s.len() as u128, right_half_count22(m).unwrap());
        prop_assert_eq!(s.max(), Some(m as i64));
        let p = poly22(m).unwrap();
        prop_assert_eq!(p.exponents().iter().map(|&e| e as i64).collect::<Vec<_>>(), s.positions);
        let total = cardinality22(m).unwrap();
        prop_assert!(total == 2 * right_half_count22(m).unwrap() || m == 1);
    }

    #[test]
    fn cardinality_under_doubling(a in 1u64..1 << 20, k in 1u32..20) {
        // An odd generation trades its factor 3 for a 2 once shifted left; an even one is unchanged.
        let base = cardinality22(a).unwrap();
        let expected = if a % 2 == 1 { base / 3 * 2 } else { base };
        prop_assert_eq!(cardinality22(a << k).unwrap(), expected);
    }

    #[test]
    fn block_statistics_bounds(seq in prop::collection::vec(any::<bool>(), 2..300), max_n in 1usize..10) {
        let max_n = max_n.min(seq.len());
        let r = block_entropy(&seq, max_n).unwrap();
        for b in &r.blocks {
            let n = b.n as f64;
            prop_assert!(b.entropy >= -1e-12 && b.entropy <= n + 1e-12);
            prop_assert!(b.entropy <= (b.distinct as f64).log2() + 1e-9);
            prop_assert!(b.distinct as u128 <= (1u128 << b.n).min((seq.len() - b.n + 1) as u128));
        }
        for w in r.blocks.windows(2) {
            // Each length-n block extends to at least one length-(n+1) block,
            // except possibly the final one, and to at most two.
            prop_assert!(w[1].distinct + 1 >= w[0].distinct);
            prop_assert!(w[1].distinct <= 2 * w[0].distinct);
        }
    }

    #[test]
    fn even_initial_data_stays_even(amp in 0.0f64..1.0, width in 0.2f64..2.0, half in 3usize..30, periodic in any::<bool>()) {
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Zero };
        let n = 2 * half + 1;
        let g = PdeGrid::bump(n, amp, width, 0.1, 0.004).with_boundary(boundary);
        let out = pde_integrate(g, 0.2).unwrap();
        for i in 0..n {
            prop_assert_eq!(out.values[i].to_bits(), out.values[n - 1 - i].to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sampled_sensitivity_is_thread_count_independent(seed in any::<u64>(), t in 1usize..8, trials in 1u64..400) {
        let rule = RuleSpec::new(30);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| sensitivity_profile(&rule, t, trials, seed).unwrap())
        };
        prop_assert_eq!(run(1), run(5));
    }
}

#[test]
fn rule30_centre_column_block_statistics_increase() {
    let column = center_column(&RuleSpec::new(30), 4095);
    let r = block_entropy(&column, 12).unwrap();
    for w in r.blocks.windows(2) {
        assert!(w[0].entropy <= w[1].entropy);
        assert!(w[0].distinct <= w[1].distinct);
    }
}
