#![allow(dead_code)]

use curriculum_lab::nn::{ArchSpec, Batch, Model};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_batch(arch: &ArchSpec, rows: usize, seed: u64) -> Batch {
    let mut r = rng(seed);
    let dim = arch.input_dim();
    let inputs = (0..rows * dim).map(|_| r.random_range(-1.0..1.0)).collect();
    let labels = (0..rows).map(|_| r.random_range(0..arch.num_classes())).collect();
    Batch::new((0..rows as u64).collect(), inputs, labels, dim).unwrap()
}

/// Relative error `|g - fd| / max(|g|, |fd|)` between the analytic gradient
/// and central differences with step `h`, over every parameter. The step is
/// shrunk for parameters whose window straddles a kink.
pub fn gradient_rel_error(arch: &ArchSpec, seed: u64, rows: usize, h: f64) -> f64 {
    let mut model = Model::init(arch, seed).unwrap();
    // Nonzero biases so that bias gradients are exercised off the origin.
    let mut r = rng(seed ^ 0xb1a5);
    for p in model.params_mut() {
        *p += r.random_range(-0.05..0.05);
    }
    let batch = random_batch(arch, rows, seed.wrapping_add(1));
    let analytic = model.loss_and_grad(&batch).unwrap().grad;
    let mut num = 0.0;
    let mut den_a = 0.0;
    let mut den_f = 0.0;
    let centre = model.loss_and_grad(&batch).unwrap().mean_loss;
    for i in 0..model.num_params() {
        let orig = model.params()[i];
        let mut step = h;
        let fd = loop {
            model.params_mut()[i] = orig + step;
            let up = model.loss_and_grad(&batch).unwrap().mean_loss;
            model.params_mut()[i] = orig - step;
            let down = model.loss_and_grad(&batch).unwrap().mean_loss;
            model.params_mut()[i] = orig;
            // A ReLU or max-pool kink inside the window shows up as a second
            // difference of order `step` rather than `step^2`.
            let kinked = (up - 2.0 * centre + down).abs() > 1e-3 * step;
            if !kinked || step < h * 1e-2 {
                break (up - down) / (2.0 * step);
            }
            step /= 10.0;
        };
        num += (analytic[i] - fd).powi(2);
        den_a += analytic[i].powi(2);
        den_f += fd.powi(2);
    }
    num.sqrt() / den_a.sqrt().max(den_f.sqrt()).max(1e-300)
}

/// Twenty-four architectures covering dense, conv, ReLU and max-pool layers.
pub fn gradient_check_archs() -> Vec<ArchSpec> {
    let mut archs = vec![
        ArchSpec::mlp(&[3, 2]),
        ArchSpec::mlp(&[5, 4, 3]),
        ArchSpec::mlp(&[8, 16, 10]),
        ArchSpec::mlp(&[6, 7, 5, 4]),
        ArchSpec::mlp(&[4, 3, 3, 3, 2]),
        ArchSpec::mlp(&[10, 32, 2]),
        ArchSpec::mlp(&[2, 9, 9, 7]),
        ArchSpec::mlp(&[12, 1, 3]),
    ];
    let convs: [([usize; 3], &[usize], usize, &[bool]); 16] = [
        ([1, 4, 4], &[2], 3, &[false]),
        ([1, 4, 4], &[2], 3, &[true]),
        ([1, 5, 5], &[3], 1, &[false]),
        ([1, 5, 5], &[3], 5, &[true]),
        ([2, 4, 4], &[3], 3, &[true]),
        ([3, 6, 6], &[2, 2], 3, &[true, false]),
        ([1, 6, 6], &[2, 3], 3, &[false, true]),
        ([1, 8, 8], &[2, 2], 3, &[true, true]),
        ([2, 3, 5], &[2], 3, &[true]),
        ([1, 7, 7], &[4], 3, &[true]),
        ([1, 3, 3], &[1], 3, &[false]),
        ([2, 6, 4], &[3, 2], 1, &[true, true]),
        ([1, 4, 6], &[2, 2, 2], 3, &[false, false, false]),
        ([3, 4, 4], &[4], 5, &[false]),
        ([1, 9, 9], &[2], 3, &[true]),
        ([2, 2, 2], &[3], 3, &[true]),
    ];
    for (i, (shape, ch, k, pool)) in convs.into_iter().enumerate() {
        archs.push(ArchSpec::small_conv(shape, ch, k, pool, 2 + i % 4));
    }
    archs
}

/// Average ranks by counting: rank = #less + (#equal + 1) / 2.
pub fn oracle_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&w| w < v).count() as f64;
            let equal = x.iter().filter(|&&w| w == v).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// O(n^2) Spearman: Pearson on pairwise-counted ranks. NaN when undefined.
pub fn oracle_spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (oracle_ranks(x), oracle_ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// `(values, standard1, standard2, standard3)` for group size 3. Dyadic
/// inputs keep every sum exact, so the expected values are the correctly
/// rounded rationals.
pub const BASELINE_CASES: [(&[f64], f64, f64, f64); 10] = [
    (&[0.5, 0.5, 0.5], 0.5, 0.5, 0.5),
    (&[0.0, 0.0, 0.75], 0.25, 0.25, 0.25),
    (&[1.0, 0.0, 0.0, 0.0, 0.5, 0.5], 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0),
    (&[0.25, 0.5, 0.75, 1.0, 1.0, 1.0], 0.75, 1.0, 1.0),
    (&[0.5, 0.25, 0.75, 0.5, 0.25, 0.75], 0.5, 0.5, 2.0 / 3.0),
    (&[0.125, 0.25, 0.375, 0.5], 0.3125, 0.25, 0.375),
    (&[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0], 3.0 / 7.0, 2.0 / 3.0, 1.0),
    (&[0.75, 0.25, 0.5, 0.5, 0.5, 0.5, 0.25, 0.75, 1.0], 5.0 / 9.0, 2.0 / 3.0, 2.5 / 3.0),
    (&[0.125, 0.25, 0.375, 0.5, 0.625, 0.75], 0.4375, 0.625, 0.625),
    (&[0.875, 0.5, 0.625, 0.25, 1.0, 0.0, 0.375, 0.75], 0.546875, 2.0 / 3.0, 0.875),
];

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sample variance (n - 1 denominator).
pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)
}

/// Standard error of a difference of means under a pooled variance.
pub fn pooled_se(a: &[f64], b: &[f64]) -> f64 {
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let sp2 = ((n1 - 1.0) * variance(a) + (n2 - 1.0) * variance(b)) / (n1 + n2 - 2.0);
    (sp2 * (1.0 / n1 + 1.0 / n2)).sqrt()
}

/// Fraction of masked examples whose score is at or above the median.
pub fn masked_top_half_fraction(scores: &[f64], mask: &[bool]) -> f64 {
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let masked = mask.iter().filter(|&&m| m).count();
    let top = scores.iter().zip(mask).filter(|(s, &m)| m && **s >= median).count();
    top as f64 / masked as f64
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}
