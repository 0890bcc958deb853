//! Additive coupling flow: an invertible-by-construction feature extractor.
//!
//! Each layer passes one block of coordinates through unchanged and shifts
//! the other block by a learned function of the first, alternating blocks
//! between layers. The map is exactly invertible whatever the conditioner
//! networks do, which matches the invertibility the identifiability theorems
//! assume of the feature extractor.

use ndarray::{s, Array2};

use super::{Activation, Mlp, MlpCache, NnetError};
use crate::rng::split_seed;

#[derive(Debug, Clone)]
pub struct CouplingFlow {
    dim: usize,
    split: usize,
    conditioners: Vec<Mlp>,
}

pub struct CouplingCache {
    layer_caches: Vec<MlpCache>,
    layer_inputs: Vec<Array2<f64>>,
}

impl CouplingFlow {
    pub fn new(
        dim: usize,
        n_layers: usize,
        hidden: &[usize],
        activation: Activation,
        seed: u64,
    ) -> Result<CouplingFlow, NnetError> {
        if dim < 2 {
            return Err(NnetError::BadDescription(
                "coupling flow needs dimension >= 2".into(),
            ));
        }
        if n_layers == 0 {
            return Err(NnetError::BadDescription(
                "coupling flow needs at least one layer".into(),
            ));
        }
        let split = dim / 2;
        let mut conditioners = Vec::with_capacity(n_layers);
        for l in 0..n_layers {
            let (from, to) = Self::block_dims(dim, split, l);
            let mut widths = vec![from];
            widths.extend_from_slice(hidden);
            widths.push(to);
            conditioners.push(Mlp::new(&widths, activation, split_seed(seed, l as u64))?);
        }
        Ok(CouplingFlow {
            dim,
            split,
            conditioners,
        })
    }

    // Even layers condition on the first block and shift the second; odd
    // layers do the reverse.
    fn block_dims(dim: usize, split: usize, layer: usize) -> (usize, usize) {
        if layer % 2 == 0 {
            (split, dim - split)
        } else {
            (dim - split, split)
        }
    }

    fn blocks(&self, layer: usize) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
        if layer % 2 == 0 {
            (0..self.split, self.split..self.dim)
        } else {
            (self.split..self.dim, 0..self.split)
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_layers(&self) -> usize {
        self.conditioners.len()
    }

    pub fn param_count(&self) -> usize {
        self.conditioners.iter().map(Mlp::param_count).sum()
    }

    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for c in &self.conditioners {
            out.extend_from_slice(c.params());
        }
        out
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<(), NnetError> {
        if params.len() != self.param_count() {
            return Err(NnetError::ShapeMismatch {
                expected: format!("{} parameters", self.param_count()),
                got: format!("{}", params.len()),
            });
        }
        let mut off = 0;
        for c in &mut self.conditioners {
            let n = c.param_count();
            c.set_params(&params[off..off + n])?;
            off += n;
        }
        Ok(())
    }

    pub fn forward(&self, batch: &Array2<f64>) -> Result<Array2<f64>, NnetError> {
        Ok(self.forward_cached(batch)?.0)
    }

    pub fn forward_cached(
        &self,
        batch: &Array2<f64>,
    ) -> Result<(Array2<f64>, CouplingCache), NnetError> {
        if batch.ncols() != self.dim {
            return Err(NnetError::ShapeMismatch {
                expected: format!("{} columns", self.dim),
                got: format!("{}", batch.ncols()),
            });
        }
        let mut x = batch.clone();
        let mut layer_caches = Vec::with_capacity(self.conditioners.len());
        let mut layer_inputs = Vec::with_capacity(self.conditioners.len());
        for (l, cond) in self.conditioners.iter().enumerate() {
            layer_inputs.push(x.clone());
            let (keep, shift) = self.blocks(l);
            let a = x.slice(s![.., keep.clone()]).to_owned();
            let (delta, cache) = cond.forward_cached(&a)?;
            let mut b = x.slice(s![.., shift.clone()]).to_owned();
            b += &delta;
            x.slice_mut(s![.., shift]).assign(&b);
            layer_caches.push(cache);
        }
        Ok((
            x,
            CouplingCache {
                layer_caches,
                layer_inputs,
            },
        ))
    }

    /// Exact inverse of the forward map.
    pub fn inverse(&self, y: &Array2<f64>) -> Result<Array2<f64>, NnetError> {
        if y.ncols() != self.dim {
            return Err(NnetError::ShapeMismatch {
                expected: format!("{} columns", self.dim),
                got: format!("{}", y.ncols()),
            });
        }
        let mut x = y.clone();
        for l in (0..self.conditioners.len()).rev() {
            let (keep, shift) = self.blocks(l);
            let a = x.slice(s![.., keep]).to_owned();
            let delta = self.conditioners[l].forward(&a)?;
            let mut b = x.slice(s![.., shift.clone()]).to_owned();
            b -= &delta;
            x.slice_mut(s![.., shift]).assign(&b);
        }
        Ok(x)
    }

    /// Gradient w.r.t. all conditioner parameters (concatenated in layer
    /// order) and the batch input.
    pub fn backward(
        &self,
        cache: &CouplingCache,
        output_grad: &Array2<f64>,
    ) -> Result<(Vec<f64>, Array2<f64>), NnetError> {
        let mut g = output_grad.clone();
        let mut param_grads: Vec<Vec<f64>> = vec![Vec::new(); self.conditioners.len()];
        for l in (0..self.conditioners.len()).rev() {
            let (keep, shift) = self.blocks(l);
            let g_shift = g.slice(s![.., shift]).to_owned();
            let grads = self.conditioners[l].backward(&cache.layer_caches[l], &g_shift)?;
            param_grads[l] = grads.params;
            // pass-through block also feeds the conditioner
            let mut g_keep = g.slice(s![.., keep.clone()]).to_owned();
            g_keep += &grads.input;
            g.slice_mut(s![.., keep]).assign(&g_keep);
            let _ = &cache.layer_inputs[l];
        }
        Ok((param_grads.concat(), g))
    }
}
