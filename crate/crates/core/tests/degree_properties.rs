//! Degree bookkeeping: summation oracle, rescaling, and split-bundle
//! consistency.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;

use orbidisc::degree::{
    enumerate_split_decompositions, line_connection_exists, trivial_decomposition,
    weil_atiyah_check, LineData, ParabolicBundle, PointDatum, SplitBundle,
};
use orbidisc::parabolic::ParabolicLocalDatum;
use orbidisc::rational::{rat, rat_int, Rational};
use orbidisc::sample;

#[test]
fn par_deg_matches_a_direct_sum() {
    let mut g = sample::rng(300);
    for _ in 0..40 {
        let rank = g.gen_range(1..=4);
        let degree: i64 = g.gen_range(-5..=5);
        let n_points = g.gen_range(0..=3);
        let mut points = Vec::new();
        let mut oracle = rat_int(degree);
        for i in 0..n_points {
            let r = g.gen_range(2..=6);
            let datum = sample::random_datum(&mut g, rank, r);
            for &w in datum.weights() {
                oracle += rat(i64::from(w), i64::from(r));
            }
            points.push(PointDatum { label: format!("p{i}"), datum });
        }
        let bundle = ParabolicBundle::new(rank, degree, points).unwrap();
        assert_eq!(bundle.par_deg(), oracle);
    }
}

#[test]
fn rescaling_the_denominator_changes_nothing() {
    let datum = ParabolicLocalDatum::new(4, vec![3, 1, 1, 0]).unwrap();
    for factor in [2u32, 3, 5] {
        let finer = datum.rescaled(4 * factor).unwrap();
        assert_eq!(finer.flag(), datum.flag());
        let b1 = ParabolicBundle::new(4, -2, vec![PointDatum { label: "q".into(), datum: datum.clone() }])
            .unwrap();
        let b2 = ParabolicBundle::new(4, -2, vec![PointDatum { label: "q".into(), datum: finer }])
            .unwrap();
        assert_eq!(b1.par_deg(), b2.par_deg());
    }
}

#[test]
fn line_reports_match_par_deg() {
    let mut g = sample::rng(301);
    for _ in 0..30 {
        let degree: i64 = g.gen_range(-3..=3);
        let n_points = g.gen_range(0..=3);
        let points: Vec<PointDatum> = (0..n_points)
            .map(|i| {
                let r = g.gen_range(2..=6);
                PointDatum {
                    label: format!("p{i}"),
                    datum: sample::random_datum(&mut g, 1, r),
                }
            })
            .collect();
        let bundle = ParabolicBundle::new(1, degree, points).unwrap();
        let report = line_connection_exists(&bundle).unwrap();
        assert_eq!(report.par_deg, bundle.par_deg());
        assert_eq!(report.exists, report.par_deg.is_zero());
    }
}

fn random_split(g: &mut rand_chacha::ChaCha8Rng, k: usize, flat: bool) -> SplitBundle {
    let pool = [rat_int(0), rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3), rat(3, 4)];
    let lines: Vec<LineData> = (0..k)
        .map(|i| {
            let mut weights = BTreeMap::new();
            let mut total = Rational::zero();
            for pt in ["a", "b"] {
                let w = pool[g.gen_range(0..pool.len())].clone();
                total += w.clone();
                weights.insert(pt.to_string(), w);
            }
            // with `flat`, cancel each line's weight sum by its degree when possible
            let degree = if flat && total.is_integer() {
                -i64::try_from(total.to_integer()).unwrap()
            } else {
                g.gen_range(-2..=2)
            };
            LineData { label: format!("L{i}"), degree, weights }
        })
        .collect();
    SplitBundle::new(lines).unwrap()
}

#[test]
fn split_bundle_degrees_are_consistent() {
    let mut g = sample::rng(302);
    for k in 1..=4usize {
        for _ in 0..10 {
            let split = random_split(&mut g, k, false);
            let ambient = split.ambient().unwrap();
            let sum: Rational = (0..k).map(|i| split.line_par_deg(i)).sum();
            assert_eq!(ambient.par_deg(), sum);

            let decomps = enumerate_split_decompositions(&split).unwrap();
            for d in &decomps {
                d.validate(&ambient).unwrap();
            }
            let trivial = trivial_decomposition(&ambient);
            trivial.validate(&ambient).unwrap();
        }
    }
}

#[test]
fn criterion_is_decided_by_the_line_par_degs() {
    let mut g = sample::rng(303);
    for k in 2..=4usize {
        for round in 0..12 {
            let split = random_split(&mut g, k, round % 2 == 0);
            let ambient = split.ambient().unwrap();
            let decomps = enumerate_split_decompositions(&split).unwrap();
            let report = weil_atiyah_check(&ambient, &decomps, Some(0)).unwrap();
            let all_lines_flat = (0..k).all(|i| split.line_par_deg(i).is_zero());
            assert_eq!(report.connection_exists(), all_lines_flat);
            if !all_lines_flat {
                let witness = report.failures().next().unwrap();
                assert!(!witness.degree.is_zero());
            }
        }
    }
}
