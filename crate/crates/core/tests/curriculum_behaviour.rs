mod common;

use std::collections::{HashMap, HashSet};

use common::mean;
use curriculum_lab::curriculum::{
    order_examples, train_standard, train_with_curriculum, train_with_curriculum_observed,
    CurriculumConfig, Order, TrainSettings,
};
use curriculum_lab::data::{gen_synthetic, split, Dataset, SplitFractions, SyntheticSpec};
use curriculum_lab::nn::ArchSpec;
use curriculum_lab::pacing::{PacingFamily, PacingSpec};
use curriculum_lab::scoring::{oracle_score, ScoreTable};

fn task(margin: (f64, f64), per_class: usize) -> (Dataset, Dataset, Dataset) {
    let ds = gen_synthetic(&SyntheticSpec {
        num_classes: 4,
        examples_per_class: per_class,
        input_dim: 8,
        margin_range: margin,
        noise_std: 1.0,
        seed: 31,
    })
    .unwrap();
    split(&ds, SplitFractions::new(0.6, 0.2, 0.2), 1).unwrap()
}

fn config(order: Order, family: PacingFamily, a: f64, b: f64, n: usize, steps: usize, seed: u64) -> CurriculumConfig {
    CurriculumConfig {
        order,
        pacing: PacingSpec::new(family, a, b, n, steps).unwrap(),
        settings: TrainSettings::new(ArchSpec::mlp(&[8, 16, 4]), steps, 8, seed),
    }
}

/// Batch ids seen at each step, plus the pool size in force.
fn observe(cfg: &CurriculumConfig, scores: &ScoreTable, d: &(Dataset, Dataset, Dataset)) -> Vec<(usize, Vec<u64>)> {
    let mut seen = Vec::new();
    train_with_curriculum_observed(cfg, scores, &d.0, &d.1, &d.2, |t, ids| {
        seen.push((cfg.pacing.eval(t).unwrap(), ids.to_vec()));
    })
    .unwrap();
    seen
}

#[test]
fn batches_come_from_the_pool_prefix() {
    let d = task((0.5, 3.0), 60);
    let scores = oracle_score(&d.0).unwrap();
    for order in Order::ALL {
        for family in [PacingFamily::Linear, PacingFamily::Step, PacingFamily::Exp] {
            let cfg = config(order, family, 0.6, 0.1, d.0.len(), 80, 4);
            let index = order_examples(&d.0, &scores, order, 4).unwrap();
            for (size, ids) in observe(&cfg, &scores, &d) {
                let pool: HashSet<u64> = index.ids[..size].iter().copied().collect();
                assert!(ids.iter().all(|id| pool.contains(id)), "{order:?} {family:?}");
            }
        }
    }
}

#[test]
fn step_pacing_withholds_the_hardest_examples() {
    let d = task((0.5, 3.0), 100);
    let scores = oracle_score(&d.0).unwrap();
    let n = d.0.len();
    let cfg = config(Order::Ascending, PacingFamily::Step, 0.8, 0.2, n, 100, 9);
    let floor = cfg.pacing.floor();
    assert_eq!(floor, (0.2 * n as f64).round() as usize);

    let score_of: HashMap<u64, f64> = scores.ids.iter().copied().zip(scores.scores.iter().copied()).collect();
    let label_of: HashMap<u64, usize> = d.0.ids().iter().copied().zip(d.0.labels().iter().copied()).collect();
    // Per-class 20% easiest threshold.
    let mut per_class: Vec<Vec<f64>> = vec![Vec::new(); 4];
    for (id, s) in &score_of {
        per_class[label_of[id]].push(*s);
    }
    let cutoffs: Vec<f64> = per_class
        .iter_mut()
        .map(|v| {
            v.sort_by(f64::total_cmp);
            v[(v.len() as f64 * 0.2).ceil() as usize]
        })
        .collect();

    let early: Vec<u64> = observe(&cfg, &scores, &d)
        .into_iter()
        .take_while(|(size, _)| *size == floor)
        .flat_map(|(_, ids)| ids)
        .collect();
    assert!(!early.is_empty());
    for id in early {
        assert!(score_of[&id] <= cutoffs[label_of[&id]], "hard example {id} seen early");
    }
}

#[test]
fn runs_are_reproducible_and_order_sensitive() {
    let d = task((0.5, 3.0), 60);
    let scores = oracle_score(&d.0).unwrap();
    let n = d.0.len();
    let run = |order| {
        let cfg = config(order, PacingFamily::Linear, 0.8, 0.1, n, 60, 2);
        train_with_curriculum(&cfg, &scores, &d.0, &d.1, &d.2).unwrap()
    };
    let (r1, m1) = run(Order::Ascending);
    let (r2, m2) = run(Order::Ascending);
    assert_eq!(m1.params(), m2.params());
    assert_eq!(r1.series, r2.series);
    let (_, m3) = run(Order::Descending);
    assert_ne!(m1.params(), m3.params());
}

#[test]
fn easy_first_beats_hard_first_on_a_short_budget() {
    let d = task((0.3, 4.0), 150);
    let scores = oracle_score(&d.0).unwrap();
    let n = d.0.len();
    let mut asc = vec![];
    let mut desc = vec![];
    for seed in 0..3 {
        for (order, out) in [(Order::Ascending, &mut asc), (Order::Descending, &mut desc)] {
            let mut cfg = config(order, PacingFamily::Exp, 0.3, 0.1, n, 60, seed);
            cfg.settings.optimizer.lr = 0.02;
            let (r, _) = train_with_curriculum(&cfg, &scores, &d.0, &d.1, &d.2).unwrap();
            out.push(r.test_accuracy_at_best_val.unwrap());
        }
    }
    assert!(mean(&asc) > mean(&desc), "asc {asc:?} desc {desc:?}");
}

#[test]
fn separable_task_is_learned() {
    let ds = gen_synthetic(&SyntheticSpec {
        num_classes: 4,
        examples_per_class: 100,
        input_dim: 8,
        margin_range: (5.0, 5.0),
        noise_std: 1.0,
        seed: 2,
    })
    .unwrap();
    let (tr, va, te) = split(&ds, SplitFractions::new(0.6, 0.2, 0.2), 0).unwrap();
    let mut s = TrainSettings::new(ArchSpec::mlp(&[8, 4]), 200, 16, 0);
    s.optimizer.lr = 0.05;
    let (r, _) = train_standard(&s, &tr, &va, &te).unwrap();
    assert!(r.test_accuracy_at_best_val.unwrap() > 0.95, "{r:?}");
}
