use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    #[default]
    Relu,
}

/// Network architecture.
///
/// `Mlp::layer_widths` includes the input width, so `[784, 100, 10]` is one
/// hidden layer of 100 units. `SmallConv` stacks same-padded stride-1
/// convolutions (each followed by ReLU and an optional 2×2 max-pool) and ends
/// in a dense layer to `num_classes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ArchSpec {
    Mlp {
        layer_widths: Vec<usize>,
        num_classes: usize,
        #[serde(default)]
        activation: Activation,
    },
    SmallConv {
        /// Channels, height, width.
        input_shape: [usize; 3],
        conv_channels: Vec<usize>,
        kernel_size: usize,
        pool: Vec<bool>,
        num_classes: usize,
        #[serde(default)]
        activation: Activation,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Op {
    Dense {
        inputs: usize,
        outputs: usize,
        weights: usize,
        bias: usize,
        relu: bool,
    },
    Conv {
        in_channels: usize,
        out_channels: usize,
        height: usize,
        width: usize,
        kernel: usize,
        weights: usize,
        bias: usize,
    },
    MaxPool {
        channels: usize,
        height: usize,
        width: usize,
    },
}

impl Op {
    pub(crate) fn input_len(&self) -> usize {
        match *self {
            Op::Dense { inputs, .. } => inputs,
            Op::Conv {
                in_channels,
                height,
                width,
                ..
            } => in_channels * height * width,
            Op::MaxPool {
                channels,
                height,
                width,
            } => channels * height * width,
        }
    }

    pub(crate) fn output_len(&self) -> usize {
        match *self {
            Op::Dense { outputs, .. } => outputs,
            Op::Conv {
                out_channels,
                height,
                width,
                ..
            } => out_channels * height * width,
            Op::MaxPool {
                channels,
                height,
                width,
            } => channels * (height / 2) * (width / 2),
        }
    }

    /// Fan-in and parameter block sizes for layers that own parameters.
    pub(crate) fn param_blocks(&self) -> Option<(usize, usize, usize)> {
        match *self {
            Op::Dense {
                inputs, outputs, ..
            } => Some((inputs, inputs * outputs, outputs)),
            Op::Conv {
                in_channels,
                out_channels,
                kernel,
                ..
            } => {
                let fan_in = in_channels * kernel * kernel;
                Some((fan_in, out_channels * fan_in, out_channels))
            }
            Op::MaxPool { .. } => None,
        }
    }
}

impl ArchSpec {
    pub fn mlp(layer_widths: &[usize]) -> Self {
        ArchSpec::Mlp {
            layer_widths: layer_widths.to_vec(),
            num_classes: layer_widths.last().copied().unwrap_or(0),
            activation: Activation::Relu,
        }
    }

    pub fn small_conv(
        input_shape: [usize; 3],
        conv_channels: &[usize],
        kernel_size: usize,
        pool: &[bool],
        num_classes: usize,
    ) -> Self {
        ArchSpec::SmallConv {
            input_shape,
            conv_channels: conv_channels.to_vec(),
            kernel_size,
            pool: pool.to_vec(),
            num_classes,
            activation: Activation::Relu,
        }
    }

    pub fn num_classes(&self) -> usize {
        match self {
            ArchSpec::Mlp { num_classes, .. } | ArchSpec::SmallConv { num_classes, .. } => {
                *num_classes
            }
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            ArchSpec::Mlp { layer_widths, .. } => layer_widths.first().copied().unwrap_or(0),
            ArchSpec::SmallConv { input_shape, .. } => input_shape.iter().product(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ArchSpec::Mlp {
                layer_widths,
                num_classes,
                ..
            } => {
                if layer_widths.len() < 2 {
                    return Err(Error::InvalidArch(
                        "mlp needs at least an input and an output width".into(),
                    ));
                }
                if layer_widths.iter().any(|&w| w == 0) {
                    return Err(Error::InvalidArch("layer widths must be >= 1".into()));
                }
                if layer_widths.last() != Some(num_classes) {
                    return Err(Error::InvalidArch(format!(
                        "last layer width {} != num_classes {num_classes}",
                        layer_widths.last().unwrap()
                    )));
                }
            }
            ArchSpec::SmallConv {
                input_shape,
                conv_channels,
                kernel_size,
                pool,
                num_classes,
                ..
            } => {
                if input_shape.iter().any(|&d| d == 0) {
                    return Err(Error::InvalidArch("input shape entries must be >= 1".into()));
                }
                if conv_channels.is_empty() || conv_channels.iter().any(|&c| c == 0) {
                    return Err(Error::InvalidArch(
                        "conv_channels must be nonempty with entries >= 1".into(),
                    ));
                }
                if *kernel_size == 0 || kernel_size % 2 == 0 {
                    return Err(Error::InvalidArch(format!(
                        "kernel_size must be odd and >= 1, got {kernel_size}"
                    )));
                }
                if pool.len() != conv_channels.len() {
                    return Err(Error::InvalidArch(format!(
                        "pool flags ({}) must match conv layers ({})",
                        pool.len(),
                        conv_channels.len()
                    )));
                }
                if *num_classes == 0 {
                    return Err(Error::InvalidArch("num_classes must be >= 1".into()));
                }
                let (mut h, mut w) = (input_shape[1], input_shape[2]);
                for &p in pool {
                    if p {
                        if h < 2 || w < 2 {
                            return Err(Error::InvalidArch(
                                "max-pool applied to a map smaller than 2x2".into(),
                            ));
                        }
                        h /= 2;
                        w /= 2;
                    }
                }
            }
        }
        Ok(())
    }

    /// Layer program with parameter offsets. Assumes `validate` passed.
    pub(crate) fn plan(&self) -> Vec<Op> {
        let mut ops = Vec::new();
        let mut offset = 0;
        match self {
            ArchSpec::Mlp { layer_widths, .. } => {
                let layers = layer_widths.len() - 1;
                for (i, pair) in layer_widths.windows(2).enumerate() {
                    let (inputs, outputs) = (pair[0], pair[1]);
                    let weights = offset;
                    let bias = weights + inputs * outputs;
                    offset = bias + outputs;
                    ops.push(Op::Dense {
                        inputs,
                        outputs,
                        weights,
                        bias,
                        relu: i + 1 < layers,
                    });
                }
            }
            ArchSpec::SmallConv {
                input_shape,
                conv_channels,
                kernel_size,
                pool,
                num_classes,
                ..
            } => {
                let [mut c, mut h, mut w] = *input_shape;
                for (&out_channels, &p) in conv_channels.iter().zip(pool) {
                    let weights = offset;
                    let bias = weights + out_channels * c * kernel_size * kernel_size;
                    offset = bias + out_channels;
                    ops.push(Op::Conv {
                        in_channels: c,
                        out_channels,
                        height: h,
                        width: w,
                        kernel: *kernel_size,
                        weights,
                        bias,
                    });
                    c = out_channels;
                    if p {
                        ops.push(Op::MaxPool {
                            channels: c,
                            height: h,
                            width: w,
                        });
                        h /= 2;
                        w /= 2;
                    }
                }
                let inputs = c * h * w;
                let weights = offset;
                let bias = weights + inputs * num_classes;
                ops.push(Op::Dense {
                    inputs,
                    outputs: *num_classes,
                    weights,
                    bias,
                    relu: false,
                });
            }
        }
        ops
    }

    /// Total parameter count; a pure function of the architecture.
    pub fn num_params(&self) -> Result<usize> {
        self.validate()?;
        Ok(self
            .plan()
            .iter()
            .filter_map(Op::param_blocks)
            .map(|(_, w, b)| w + b)
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mnist_mlp_parameter_count() {
        // 784*100 + 100 + 100*10 + 10
        assert_eq!(ArchSpec::mlp(&[784, 100, 10]).num_params().unwrap(), 79510);
    }

    #[test]
    fn conv_parameter_count() {
        // conv 1->4 k3: 36+4; pool 8x8->4x4; conv 4->8 k3: 288+8; dense 8*4*4 -> 3: 384+3
        let arch = ArchSpec::small_conv([1, 8, 8], &[4, 8], 3, &[true, false], 3);
        assert_eq!(arch.num_params().unwrap(), 40 + 296 + 387);
    }

    #[test]
    fn rejects_bad_widths() {
        assert!(ArchSpec::mlp(&[4, 0, 3]).validate().is_err());
        assert!(ArchSpec::mlp(&[4]).validate().is_err());
        let mismatched = ArchSpec::Mlp {
            layer_widths: vec![4, 3],
            num_classes: 5,
            activation: Activation::Relu,
        };
        assert!(mismatched.validate().is_err());
        assert!(ArchSpec::small_conv([1, 8, 8], &[0], 3, &[false], 2)
            .validate()
            .is_err());
        assert!(ArchSpec::small_conv([1, 8, 8], &[4], 2, &[false], 2)
            .validate()
            .is_err());
    }
}
