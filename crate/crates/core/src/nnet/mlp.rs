//! Dense multilayer perceptron with explicit reverse-mode gradients.

use ndarray::{Array1, Array2, ArrayView2};
use rand::Rng;

use super::{Activation, NnetError};
use crate::rng::stage_rng;

/// Fully connected network. Parameters live in one flat vector laid out as
/// `[W0 (out×in, row-major), b0, W1, b1, ...]`; the output layer is linear.
#[derive(Debug, Clone)]
pub struct Mlp {
    widths: Vec<usize>,
    activation: Activation,
    params: Vec<f64>,
    seed: u64,
}

/// Forward records needed for the backward pass.
pub struct MlpCache {
    /// Input to each linear layer (post-activation of the previous one).
    layer_inputs: Vec<Array2<f64>>,
    /// Pre-activation outputs of each layer.
    pre_acts: Vec<Array2<f64>>,
}

pub struct MlpGradients {
    /// Gradient w.r.t. the flat parameter vector.
    pub params: Vec<f64>,
    /// Gradient w.r.t. the batch input.
    pub input: Array2<f64>,
}

impl Mlp {
    /// Glorot-uniform initialization, biases zero.
    pub fn new(widths: &[usize], activation: Activation, seed: u64) -> Result<Mlp, NnetError> {
        Self::build(widths, activation, seed, false)
    }

    /// Same, but the final layer is zeroed so the network starts as the
    /// constant zero function.
    pub fn new_zero_head(
        widths: &[usize],
        activation: Activation,
        seed: u64,
    ) -> Result<Mlp, NnetError> {
        Self::build(widths, activation, seed, true)
    }

    fn build(
        widths: &[usize],
        activation: Activation,
        seed: u64,
        zero_head: bool,
    ) -> Result<Mlp, NnetError> {
        if widths.len() < 2 {
            return Err(NnetError::BadDescription(
                "an MLP needs at least input and output widths".into(),
            ));
        }
        if widths.iter().any(|&w| w == 0) {
            return Err(NnetError::BadDescription("zero layer width".into()));
        }
        let mut rng = stage_rng(seed);
        let mut params = Vec::with_capacity(Self::count_params(widths));
        let n_layers = widths.len() - 1;
        for l in 0..n_layers {
            let (fan_in, fan_out) = (widths[l], widths[l + 1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let last = l == n_layers - 1;
            for _ in 0..fan_in * fan_out {
                if zero_head && last {
                    params.push(0.0);
                } else {
                    params.push(rng.random_range(-bound..bound));
                }
            }
            params.extend(std::iter::repeat(0.0).take(fan_out));
        }
        Ok(Mlp {
            widths: widths.to_vec(),
            activation,
            params,
            seed,
        })
    }

    fn count_params(widths: &[usize]) -> usize {
        widths
            .windows(2)
            .map(|w| w[0] * w[1] + w[1])
            .sum()
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn input_dim(&self) -> usize {
        self.widths[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.widths.last().unwrap()
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<(), NnetError> {
        if params.len() != self.params.len() {
            return Err(NnetError::ShapeMismatch {
                expected: format!("{} parameters", self.params.len()),
                got: format!("{}", params.len()),
            });
        }
        self.params.copy_from_slice(params);
        Ok(())
    }

    fn weight_view(&self, layer: usize) -> ArrayView2<'_, f64> {
        let (fan_in, fan_out) = (self.widths[layer], self.widths[layer + 1]);
        let off = self.offset_of(layer);
        ArrayView2::from_shape((fan_out, fan_in), &self.params[off..off + fan_in * fan_out])
            .unwrap()
    }

    fn bias_slice(&self, layer: usize) -> &[f64] {
        let (fan_in, fan_out) = (self.widths[layer], self.widths[layer + 1]);
        let off = self.offset_of(layer) + fan_in * fan_out;
        &self.params[off..off + fan_out]
    }

    fn offset_of(&self, layer: usize) -> usize {
        let mut off = 0;
        for l in 0..layer {
            off += self.widths[l] * self.widths[l + 1] + self.widths[l + 1];
        }
        off
    }

    fn check_input(&self, batch: &Array2<f64>) -> Result<(), NnetError> {
        if batch.ncols() != self.input_dim() {
            return Err(NnetError::ShapeMismatch {
                expected: format!("{} input columns", self.input_dim()),
                got: format!("{}", batch.ncols()),
            });
        }
        Ok(())
    }

    /// Batch forward pass; rows map independently.
    pub fn forward(&self, batch: &Array2<f64>) -> Result<Array2<f64>, NnetError> {
        Ok(self.forward_cached(batch)?.0)
    }

    pub fn forward_cached(
        &self,
        batch: &Array2<f64>,
    ) -> Result<(Array2<f64>, MlpCache), NnetError> {
        self.check_input(batch)?;
        let n_layers = self.widths.len() - 1;
        let mut layer_inputs = Vec::with_capacity(n_layers);
        let mut pre_acts = Vec::with_capacity(n_layers);
        let mut x = batch.clone();
        for l in 0..n_layers {
            layer_inputs.push(x.clone());
            let w = self.weight_view(l);
            let mut z = x.dot(&w.t());
            let b = self.bias_slice(l);
            for mut row in z.rows_mut() {
                for (v, &bv) in row.iter_mut().zip(b) {
                    *v += bv;
                }
            }
            pre_acts.push(z.clone());
            if l + 1 < n_layers {
                z.mapv_inplace(|v| self.activation.apply(v));
            }
            x = z;
        }
        Ok((
            x,
            MlpCache {
                layer_inputs,
                pre_acts,
            },
        ))
    }

    /// Reverse pass from `output_grad` (same shape as the forward output).
    pub fn backward(
        &self,
        cache: &MlpCache,
        output_grad: &Array2<f64>,
    ) -> Result<MlpGradients, NnetError> {
        let n_layers = self.widths.len() - 1;
        if output_grad.ncols() != self.output_dim()
            || output_grad.nrows() != cache.layer_inputs[0].nrows()
        {
            return Err(NnetError::ShapeMismatch {
                expected: format!(
                    "gradient of shape {}×{}",
                    cache.layer_inputs[0].nrows(),
                    self.output_dim()
                ),
                got: format!("{}×{}", output_grad.nrows(), output_grad.ncols()),
            });
        }
        let mut grads = vec![0.0; self.params.len()];
        let mut g = output_grad.clone();
        for l in (0..n_layers).rev() {
            if l + 1 < n_layers {
                // chain through the activation applied after layer l
                let pre = &cache.pre_acts[l];
                g.zip_mut_with(pre, |gv, &pv| *gv *= self.activation.derivative(pv));
            }
            let input = &cache.layer_inputs[l];
            let w_grad = g.t().dot(input); // fan_out × fan_in
            let off = self.offset_of(l);
            let (fan_in, fan_out) = (self.widths[l], self.widths[l + 1]);
            grads[off..off + fan_in * fan_out].copy_from_slice(w_grad.as_slice().unwrap());
            let bias_grad: Array1<f64> = g.sum_axis(ndarray::Axis(0));
            grads[off + fan_in * fan_out..off + fan_in * fan_out + fan_out]
                .copy_from_slice(bias_grad.as_slice().unwrap());
            g = g.dot(&self.weight_view(l));
        }
        Ok(MlpGradients {
            params: grads,
            input: g,
        })
    }

    /// Versioned text snapshot: a JSON header line, then one parameter per
    /// line in shortest round-trip decimal form.
    pub fn save_to_string(&self) -> String {
        let header = serde_json::json!({
            "format": "mvica-mlp-v1",
            "widths": self.widths,
            "activation": self.activation.tag(),
            "seed": self.seed,
        });
        let mut out = header.to_string();
        out.push('\n');
        for p in &self.params {
            out.push_str(&crate::tableio::fmt_f64(*p));
            out.push('\n');
        }
        out
    }

    pub fn load_from_str(text: &str) -> Result<Mlp, NnetError> {
        let mut lines = text.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| NnetError::Snapshot("empty snapshot".into()))?;
        let header: serde_json::Value = serde_json::from_str(header_line)
            .map_err(|e| NnetError::Snapshot(format!("bad header: {e}")))?;
        if header["format"] != "mvica-mlp-v1" {
            return Err(NnetError::Snapshot(format!(
                "unsupported format {}",
                header["format"]
            )));
        }
        let widths: Vec<usize> = header["widths"]
            .as_array()
            .ok_or_else(|| NnetError::Snapshot("missing widths".into()))?
            .iter()
            .map(|v| v.as_u64().map(|u| u as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| NnetError::Snapshot("bad widths".into()))?;
        let activation = Activation::parse(
            header["activation"]
                .as_str()
                .ok_or_else(|| NnetError::Snapshot("missing activation".into()))?,
        )
        .map_err(|e| NnetError::Snapshot(e.to_string()))?;
        let seed = header["seed"]
            .as_u64()
            .ok_or_else(|| NnetError::Snapshot("missing seed".into()))?;
        let params: Vec<f64> = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| NnetError::Snapshot(format!("bad parameter: {e}")))?;
        if params.len() != Self::count_params(&widths) {
            return Err(NnetError::Snapshot(format!(
                "expected {} parameters, got {}",
                Self::count_params(&widths),
                params.len()
            )));
        }
        Ok(Mlp {
            widths,
            activation,
            params,
            seed,
        })
    }
}
