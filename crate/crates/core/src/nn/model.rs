use rand::Rng;
use serde::{Deserialize, Serialize};

use super::arch::{ArchSpec, Op};
use super::batch::Batch;
use crate::error::{Error, Result};
use crate::rng::{self, Stream};

/// Row-major `rows × cols` logit matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Logits {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Logits {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossAndGrad {
    pub mean_loss: f64,
    pub per_example_losses: Vec<f64>,
    pub grad: Vec<f64>,
}

/// A network: architecture plus flat parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    arch: ArchSpec,
    params: Vec<f64>,
    init_seed: u64,
    #[serde(skip)]
    plan: Vec<Op>,
}

impl Model {
    /// Weights uniform in `±sqrt(6 / fan_in)`, biases zero, drawn from the
    /// `Init` stream of `seed` in layer order.
    pub fn init(arch: &ArchSpec, seed: u64) -> Result<Self> {
        arch.validate()?;
        let plan = arch.plan();
        let total = plan
            .iter()
            .filter_map(Op::param_blocks)
            .map(|(_, w, b)| w + b)
            .sum();
        let mut params = vec![0.0; total];
        let mut rng = rng::stream(seed, Stream::Init);
        for op in &plan {
            let (offset, (fan_in, weights, _)) = match (op, op.param_blocks()) {
                (Op::Dense { weights, .. }, Some(b)) | (Op::Conv { weights, .. }, Some(b)) => {
                    (*weights, b)
                }
                _ => continue,
            };
            let limit = (6.0 / fan_in as f64).sqrt();
            for p in &mut params[offset..offset + weights] {
                *p = rng.random_range(-limit..limit);
            }
        }
        Ok(Model {
            arch: arch.clone(),
            params,
            init_seed: seed,
            plan,
        })
    }

    pub fn from_params(arch: &ArchSpec, params: Vec<f64>) -> Result<Self> {
        let expected = arch.num_params()?;
        if params.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "expected {expected} parameters, got {}",
                params.len()
            )));
        }
        Ok(Model {
            arch: arch.clone(),
            params,
            init_seed: 0,
            plan: arch.plan(),
        })
    }

    /// Rebuilds derived state after deserialization.
    pub fn restore(mut self) -> Result<Self> {
        self.arch.validate()?;
        self.plan = self.arch.plan();
        Ok(self)
    }

    pub fn arch(&self) -> &ArchSpec {
        &self.arch
    }

    pub fn init_seed(&self) -> u64 {
        self.init_seed
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn input_dim(&self) -> usize {
        self.arch.input_dim()
    }

    pub fn num_classes(&self) -> usize {
        self.arch.num_classes()
    }

    /// Per-layer `(weights, bias)` views for layers that own parameters.
    pub fn layer_views(&self) -> Vec<(&[f64], &[f64])> {
        self.plan
            .iter()
            .filter_map(|op| match (op, op.param_blocks()) {
                (Op::Dense { weights, bias, .. }, Some((_, w, b)))
                | (Op::Conv { weights, bias, .. }, Some((_, w, b))) => Some((
                    &self.params[*weights..*weights + w],
                    &self.params[*bias..*bias + b],
                )),
                _ => None,
            })
            .collect()
    }

    fn check_batch(&self, batch: &Batch) -> Result<()> {
        batch.check()?;
        if batch.input_dim != self.input_dim() {
            return Err(Error::ShapeMismatch(format!(
                "batch input dim {} != model input dim {}",
                batch.input_dim,
                self.input_dim()
            )));
        }
        if let Some(&bad) = batch.labels.iter().find(|&&y| y >= self.num_classes()) {
            return Err(Error::ShapeMismatch(format!(
                "label {bad} outside [0, {})",
                self.num_classes()
            )));
        }
        Ok(())
    }

    pub fn forward(&self, batch: &Batch) -> Result<Logits> {
        batch.check()?;
        if batch.input_dim != self.input_dim() {
            return Err(Error::ShapeMismatch(format!(
                "batch input dim {} != model input dim {}",
                batch.input_dim,
                self.input_dim()
            )));
        }
        let classes = self.num_classes();
        let mut acts = self.activation_buffers();
        let mut data = Vec::with_capacity(batch.len() * classes);
        for i in 0..batch.len() {
            self.forward_one(batch.row(i), &mut acts);
            data.extend_from_slice(acts.last().unwrap());
        }
        Ok(Logits {
            rows: batch.len(),
            cols: classes,
            data,
        })
    }

    /// Mean softmax cross-entropy over the batch, per-example losses, and the
    /// gradient of the mean with respect to every parameter.
    pub fn loss_and_grad(&self, batch: &Batch) -> Result<LossAndGrad> {
        self.check_batch(batch)?;
        let n = batch.len();
        let scale = 1.0 / n as f64;
        let mut acts = self.activation_buffers();
        let mut deltas = self.activation_buffers();
        let mut grad = vec![0.0; self.params.len()];
        let mut losses = Vec::with_capacity(n);
        for i in 0..n {
            self.forward_one(batch.row(i), &mut acts);
            let logits = acts.last().unwrap();
            let (loss, probs) = softmax_cross_entropy(logits, batch.labels[i]);
            losses.push(loss);
            let top = deltas.last_mut().unwrap();
            for (d, p) in top.iter_mut().zip(&probs) {
                *d = p * scale;
            }
            top[batch.labels[i]] -= scale;
            self.backward_one(&acts, &mut deltas, &mut grad);
        }
        let mean_loss = losses.iter().sum::<f64>() * scale;
        Ok(LossAndGrad {
            mean_loss,
            per_example_losses: losses,
            grad,
        })
    }

    fn activation_buffers(&self) -> Vec<Vec<f64>> {
        let mut bufs = Vec::with_capacity(self.plan.len() + 1);
        bufs.push(vec![0.0; self.plan[0].input_len()]);
        for op in &self.plan {
            bufs.push(vec![0.0; op.output_len()]);
        }
        bufs
    }

    fn forward_one(&self, input: &[f64], acts: &mut [Vec<f64>]) {
        acts[0].copy_from_slice(input);
        for (k, op) in self.plan.iter().enumerate() {
            let (before, after) = acts.split_at_mut(k + 1);
            let x = &before[k];
            let y = &mut after[0];
            match *op {
                Op::Dense {
                    inputs,
                    outputs,
                    weights,
                    bias,
                    relu,
                } => {
                    let w = &self.params[weights..weights + inputs * outputs];
                    let b = &self.params[bias..bias + outputs];
                    for o in 0..outputs {
                        let row = &w[o * inputs..(o + 1) * inputs];
                        let z = b[o] + dot(row, x);
                        y[o] = if relu { z.max(0.0) } else { z };
                    }
                }
                Op::Conv {
                    in_channels,
                    out_channels,
                    height,
                    width,
                    kernel,
                    weights,
                    bias,
                } => {
                    let pad = kernel / 2;
                    let plane = height * width;
                    for co in 0..out_channels {
                        let b = self.params[bias + co];
                        let out = &mut y[co * plane..(co + 1) * plane];
                        out.fill(b);
                        for ci in 0..in_channels {
                            let src = &x[ci * plane..(ci + 1) * plane];
                            let kbase = weights + (co * in_channels + ci) * kernel * kernel;
                            for ky in 0..kernel {
                                for kx in 0..kernel {
                                    let wv = self.params[kbase + ky * kernel + kx];
                                    let (y0, y1) = valid_range(ky, pad, height);
                                    let (x0, x1) = valid_range(kx, pad, width);
                                    for r in y0..y1 {
                                        let sr = r + ky - pad;
                                        let orow = &mut out[r * width..(r + 1) * width];
                                        let srow = &src[sr * width..(sr + 1) * width];
                                        for c in x0..x1 {
                                            orow[c] += wv * srow[c + kx - pad];
                                        }
                                    }
                                }
                            }
                        }
                        for v in out.iter_mut() {
                            *v = v.max(0.0);
                        }
                    }
                }
                Op::MaxPool {
                    channels,
                    height,
                    width,
                } => {
                    let (oh, ow) = (height / 2, width / 2);
                    for c in 0..channels {
                        for r in 0..oh {
                            for q in 0..ow {
                                let (_, v) = pool_argmax(x, c, r, q, height, width);
                                y[(c * oh + r) * ow + q] = v;
                            }
                        }
                    }
                }
            }
        }
    }

    /// Accumulates into `grad`; expects `deltas.last()` to hold dLoss/dlogits.
    fn backward_one(&self, acts: &[Vec<f64>], deltas: &mut [Vec<f64>], grad: &mut [f64]) {
        for k in (0..self.plan.len()).rev() {
            let (before, after) = deltas.split_at_mut(k + 1);
            let d_in = &mut before[k];
            let d_out = &mut after[0];
            let x = &acts[k];
            let y = &acts[k + 1];
            let need_input_grad = k > 0;
            match self.plan[k] {
                Op::Dense {
                    inputs,
                    outputs,
                    weights,
                    bias,
                    relu,
                } => {
                    if relu {
                        for (d, &v) in d_out.iter_mut().zip(y.iter()) {
                            if v <= 0.0 {
                                *d = 0.0;
                            }
                        }
                    }
                    if need_input_grad {
                        d_in.fill(0.0);
                    }
                    for o in 0..outputs {
                        let g = d_out[o];
                        if g == 0.0 {
                            continue;
                        }
                        grad[bias + o] += g;
                        let base = weights + o * inputs;
                        for (gw, &xv) in grad[base..base + inputs].iter_mut().zip(x.iter()) {
                            *gw += g * xv;
                        }
                        if need_input_grad {
                            let row = &self.params[base..base + inputs];
                            for (di, &wv) in d_in.iter_mut().zip(row) {
                                *di += g * wv;
                            }
                        }
                    }
                }
                Op::Conv {
                    in_channels,
                    out_channels,
                    height,
                    width,
                    kernel,
                    weights,
                    bias,
                } => {
                    for (d, &v) in d_out.iter_mut().zip(y.iter()) {
                        if v <= 0.0 {
                            *d = 0.0;
                        }
                    }
                    if need_input_grad {
                        d_in.fill(0.0);
                    }
                    let pad = kernel / 2;
                    let plane = height * width;
                    for co in 0..out_channels {
                        let dplane = &d_out[co * plane..(co + 1) * plane];
                        grad[bias + co] += dplane.iter().sum::<f64>();
                        for ci in 0..in_channels {
                            let src = &x[ci * plane..(ci + 1) * plane];
                            let kbase = weights + (co * in_channels + ci) * kernel * kernel;
                            for ky in 0..kernel {
                                for kx in 0..kernel {
                                    let widx = kbase + ky * kernel + kx;
                                    let wv = self.params[widx];
                                    let (y0, y1) = valid_range(ky, pad, height);
                                    let (x0, x1) = valid_range(kx, pad, width);
                                    let mut gw = 0.0;
                                    for r in y0..y1 {
                                        let sr = r + ky - pad;
                                        for c in x0..x1 {
                                            let d = dplane[r * width + c];
                                            let sc = c + kx - pad;
                                            gw += d * src[sr * width + sc];
                                            if need_input_grad {
                                                d_in[ci * plane + sr * width + sc] += d * wv;
                                            }
                                        }
                                    }
                                    grad[widx] += gw;
                                }
                            }
                        }
                    }
                }
                Op::MaxPool {
                    channels,
                    height,
                    width,
                } => {
                    if !need_input_grad {
                        continue;
                    }
                    d_in.fill(0.0);
                    let (oh, ow) = (height / 2, width / 2);
                    for c in 0..channels {
                        for r in 0..oh {
                            for q in 0..ow {
                                let (idx, _) = pool_argmax(x, c, r, q, height, width);
                                d_in[idx] += d_out[(c * oh + r) * ow + q];
                            }
                        }
                    }
                }
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Output rows/cols `r` for which `r + k - pad` lies inside `[0, len)`.
fn valid_range(k: usize, pad: usize, len: usize) -> (usize, usize) {
    let lo = pad.saturating_sub(k);
    let hi = (len + pad).saturating_sub(k).min(len);
    (lo, hi.max(lo))
}

/// Index and value of the maximum in a 2×2 window; first maximum wins.
fn pool_argmax(x: &[f64], c: usize, r: usize, q: usize, h: usize, w: usize) -> (usize, f64) {
    let base = c * h * w;
    let mut best = (base + 2 * r * w + 2 * q, f64::NEG_INFINITY);
    for dy in 0..2 {
        for dx in 0..2 {
            let idx = base + (2 * r + dy) * w + 2 * q + dx;
            if x[idx] > best.1 {
                best = (idx, x[idx]);
            }
        }
    }
    best
}

/// Cross-entropy in log space with max subtraction; returns the loss and the
/// softmax probabilities.
pub(crate) fn softmax_cross_entropy(logits: &[f64], label: usize) -> (f64, Vec<f64>) {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = probs.iter().sum();
    let log_sum = sum.ln() + max;
    for p in &mut probs {
        *p /= sum;
    }
    (log_sum - logits[label], probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_batch(n: usize, dim: usize, classes: usize, seed: u64) -> Batch {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inputs = (0..n * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let labels = (0..n).map(|_| rng.random_range(0..classes)).collect();
        Batch::new((0..n as u64).collect(), inputs, labels, dim).unwrap()
    }

    #[test]
    fn init_is_deterministic_in_seed() {
        let arch = ArchSpec::mlp(&[4, 3]);
        let a = Model::init(&arch, 7).unwrap();
        let b = Model::init(&arch, 7).unwrap();
        let c = Model::init(&arch, 8).unwrap();
        assert_eq!(a.params(), b.params());
        assert_ne!(a.params(), c.params());
    }

    #[test]
    fn init_respects_fan_in_bound() {
        let arch = ArchSpec::mlp(&[50, 20, 5]);
        let m = Model::init(&arch, 1).unwrap();
        let views = m.layer_views();
        let bound0 = (6.0f64 / 50.0).sqrt();
        assert!(views[0].0.iter().all(|w| w.abs() <= bound0));
        assert!(views[0].1.iter().all(|&b| b == 0.0));
        let bound1 = (6.0f64 / 20.0).sqrt();
        assert!(views[1].0.iter().all(|w| w.abs() <= bound1));
    }

    #[test]
    fn zero_model_gives_zero_logits() {
        let arch = ArchSpec::mlp(&[5, 4, 3]);
        let m = Model::from_params(&arch, vec![0.0; arch.num_params().unwrap()]).unwrap();
        let logits = m.forward(&random_batch(6, 5, 3, 1)).unwrap();
        assert!(logits.data.iter().all(|&z| z == 0.0));
    }

    #[test]
    fn identical_rows_give_identical_logits() {
        let arch = ArchSpec::small_conv([1, 6, 6], &[3], 3, &[true], 4);
        let m = Model::init(&arch, 3).unwrap();
        let mut b = random_batch(3, 36, 4, 2);
        let first = b.row(0).to_vec();
        b.inputs[72..108].copy_from_slice(&first);
        let logits = m.forward(&b).unwrap();
        assert_eq!(logits.row(0), logits.row(2));
        assert_eq!((logits.rows, logits.cols), (3, 4));
        assert!(logits.data.iter().all(|z| z.is_finite()));
    }

    #[test]
    fn uniform_logits_loss_is_ln_c() {
        let (loss, probs) = softmax_cross_entropy(&[0.3; 10], 4);
        assert!((loss - 10f64.ln()).abs() < 1e-12);
        assert!((loss - 2.302585).abs() < 1e-6);
        assert!(probs.iter().all(|p| (p - 0.1).abs() < 1e-15));
    }

    #[test]
    fn softmax_is_stable_for_large_logits() {
        let (loss, _) = softmax_cross_entropy(&[1000.0, 0.0, -1000.0], 0);
        assert!(loss.is_finite() && (0.0..1e-12).contains(&loss));
        let (loss, _) = softmax_cross_entropy(&[1000.0, 0.0, -1000.0], 2);
        assert!((loss - 2000.0).abs() < 1e-9);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let m = Model::init(&ArchSpec::mlp(&[4, 3]), 0).unwrap();
        assert!(matches!(
            m.forward(&random_batch(2, 5, 3, 0)),
            Err(Error::ShapeMismatch(_))
        ));
        let bad_label = Batch::new(vec![0], vec![0.0; 4], vec![3], 4).unwrap();
        assert!(m.loss_and_grad(&bad_label).is_err());
        assert!(Batch::new(vec![0, 1], vec![0.0; 4], vec![0], 4).is_err());
        assert!(Batch::new(vec![], vec![], vec![], 4).is_err());
    }

    #[test]
    fn duplicated_batch_has_same_loss_and_grad() {
        let arch = ArchSpec::mlp(&[3, 5, 4]);
        let m = Model::init(&arch, 11).unwrap();
        let b = random_batch(4, 3, 4, 5);
        let mut dup = b.clone();
        dup.example_ids.extend(b.example_ids.iter().map(|i| i + 100));
        dup.inputs.extend_from_slice(&b.inputs);
        dup.labels.extend_from_slice(&b.labels);
        let a = m.loss_and_grad(&b).unwrap();
        let d = m.loss_and_grad(&dup).unwrap();
        assert!((a.mean_loss - d.mean_loss).abs() <= 1e-14 * a.mean_loss.abs().max(1.0));
        for (x, y) in a.grad.iter().zip(&d.grad) {
            assert!((x - y).abs() <= 1e-14 * x.abs().max(1e-3));
        }
    }

    #[test]
    fn mean_loss_is_mean_of_per_example() {
        let m = Model::init(&ArchSpec::mlp(&[3, 4]), 2).unwrap();
        let out = m.loss_and_grad(&random_batch(7, 3, 4, 9)).unwrap();
        let mean = out.per_example_losses.iter().sum::<f64>() / 7.0;
        assert!((out.mean_loss - mean).abs() < 1e-15);
        assert!(out.per_example_losses.iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn valid_range_covers_padding() {
        // kernel 3, pad 1, len 5: ky=0 reads r-1 -> r in 1..5; ky=2 reads r+1 -> r in 0..4
        assert_eq!(valid_range(0, 1, 5), (1, 5));
        assert_eq!(valid_range(1, 1, 5), (0, 5));
        assert_eq!(valid_range(2, 1, 5), (0, 4));
    }
}
