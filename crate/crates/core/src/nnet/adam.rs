//! Adaptive-moment optimizer.

use super::NnetError;

/// Standard Adam with bias correction. State is per-parameter, updates are
/// elementwise and deterministic.
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    step: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Adam {
    pub fn new(lr: f64, n_params: usize) -> Adam {
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// One update in place. Rejects non-finite gradients (naming the index)
    /// and guards the updated parameters against NaN/Inf.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) -> Result<(), NnetError> {
        assert_eq!(params.len(), self.m.len(), "optimizer/parameter size mismatch");
        assert_eq!(grads.len(), self.m.len(), "gradient/parameter size mismatch");
        if let Some(index) = grads.iter().position(|g| !g.is_finite()) {
            return Err(NnetError::NonFiniteGradient { index });
        }
        self.step += 1;
        let t = self.step as f64;
        let bc1 = 1.0 - self.beta1.powf(t);
        let bc2 = 1.0 - self.beta2.powf(t);
        for i in 0..params.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grads[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grads[i] * grads[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
            if !params[i].is_finite() {
                return Err(NnetError::NonFiniteParameter { index: i });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        let mut adam = Adam::new(0.05, 3);
        let mut params = vec![1.0, -2.0, 0.5];
        adam.step(&mut params, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(params, vec![1.0, -2.0, 0.5]);
        assert_eq!(adam.step_count(), 1);
    }

    #[test]
    fn converges_on_a_quadratic() {
        // loss = (θ - 3)², gradient = 2(θ - 3)
        let mut adam = Adam::new(0.05, 1);
        let mut theta = vec![0.0];
        for _ in 0..500 {
            let g = 2.0 * (theta[0] - 3.0);
            adam.step(&mut theta, &[g]).unwrap();
        }
        assert!((theta[0] - 3.0).abs() < 1e-2, "theta = {}", theta[0]);
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let run = || {
            let mut adam = Adam::new(0.01, 2);
            let mut p = vec![0.3, -0.7];
            let mut trace = Vec::new();
            for k in 0..100 {
                let g = [p[0] * 2.0 + (k as f64 * 0.1).sin(), p[1] - 0.2];
                adam.step(&mut p, &g).unwrap();
                trace.push((p[0].to_bits(), p[1].to_bits()));
            }
            trace
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn non_finite_gradient_names_the_index() {
        let mut adam = Adam::new(0.01, 3);
        let mut p = vec![0.0; 3];
        match adam.step(&mut p, &[0.0, f64::NAN, 0.0]) {
            Err(NnetError::NonFiniteGradient { index }) => assert_eq!(index, 1),
            other => panic!("expected gradient error, got {other:?}"),
        }
    }
}
