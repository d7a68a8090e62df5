use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Real, RngStream};

/// Fully connected layer; `weights` is `outputs × inputs`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dense<T> {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<T>,
    pub biases: Vec<T>,
}

impl<T: Real> Dense<T> {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            weights: vec![T::zero(); inputs * outputs],
            biases: vec![T::zero(); outputs],
        }
    }

    /// He-uniform weights, `U(−√(6/fan_in), √(6/fan_in))`, zero biases.
    pub fn he_uniform(inputs: usize, outputs: usize, stream: &mut RngStream) -> Self {
        let limit = (6.0 / inputs as f64).sqrt();
        let weights = (0..inputs * outputs)
            .map(|_| T::lit((2.0 * stream.uniform() - 1.0) * limit))
            .collect();
        Self {
            inputs,
            outputs,
            weights,
            biases: vec![T::zero(); outputs],
        }
    }

    fn apply(&self, x: &[T], out: &mut Vec<T>) {
        out.clear();
        out.extend(self.biases.iter().zip(self.weights.chunks_exact(self.inputs)).map(|(&b, row)| {
            b + row.iter().zip(x).fold(T::zero(), |acc, (&w, &v)| acc + w * v)
        }));
    }

    fn check(&self) -> Result<()> {
        if self.inputs == 0 || self.outputs == 0 {
            return Err(Error::invalid("dense layer with zero width"));
        }
        if self.weights.len() != self.inputs * self.outputs || self.biases.len() != self.outputs {
            return Err(Error::invalid(format!(
                "dense layer {}x{} has {} weights and {} biases",
                self.outputs,
                self.inputs,
                self.weights.len(),
                self.biases.len()
            )));
        }
        Ok(())
    }
}

/// Regression loss on the selected Q-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Loss {
    #[default]
    Mse,
    /// Huber with unit threshold.
    Huber,
}

impl Loss {
    fn value<T: Real>(self, e: T) -> T {
        match self {
            Loss::Mse => e * e,
            Loss::Huber if e.abs() <= T::one() => T::lit(0.5) * e * e,
            Loss::Huber => e.abs() - T::lit(0.5),
        }
    }

    fn derivative<T: Real>(self, e: T) -> T {
        match self {
            Loss::Mse => T::lit(2.0) * e,
            Loss::Huber => e.max(-T::one()).min(T::one()),
        }
    }
}

/// One regression sample: push `Q(state, action)` towards `target`.
#[derive(Debug, Clone, Copy)]
pub struct Sample<'a, T> {
    pub state: &'a [T],
    pub action: usize,
    pub target: T,
}

/// Per-layer gradients, same shapes as the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<T> {
    pub weights: Vec<Vec<T>>,
    pub biases: Vec<Vec<T>>,
}

/// Multilayer perceptron with ReLU hidden layers and a linear output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp<T> {
    layers: Vec<Dense<T>>,
}

impl<T: Real> Mlp<T> {
    pub fn from_layers(layers: Vec<Dense<T>>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::invalid("network needs at least one layer"));
        }
        for l in &layers {
            l.check()?;
        }
        for w in layers.windows(2) {
            if w[0].outputs != w[1].inputs {
                return Err(Error::dims("layer input", w[0].outputs, w[1].inputs));
            }
        }
        Ok(Self { layers })
    }

    /// `sizes = [input, hidden…, output]`.
    pub fn he_uniform(sizes: &[usize], stream: &mut RngStream) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::invalid("network needs input and output sizes"));
        }
        Self::from_layers(sizes.windows(2).map(|w| Dense::he_uniform(w[0], w[1], stream)).collect())
    }

    pub fn zeros(sizes: &[usize]) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::invalid("network needs input and output sizes"));
        }
        Self::from_layers(sizes.windows(2).map(|w| Dense::zeros(w[0], w[1])).collect())
    }

    pub fn layers(&self) -> &[Dense<T>] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Dense<T>] {
        &mut self.layers
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![self.layers[0].inputs];
        s.extend(self.layers.iter().map(|l| l.outputs));
        s
    }

    pub fn input_len(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn output_len(&self) -> usize {
        self.layers[self.layers.len() - 1].outputs
    }

    fn check_input(&self, x: &[T]) -> Result<()> {
        if x.len() != self.input_len() {
            return Err(Error::dims("network input", self.input_len(), x.len()));
        }
        Ok(())
    }

    /// Activations of every layer, input first, output last.
    fn activations(&self, x: &[T]) -> Vec<Vec<T>> {
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(x.to_vec());
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut out = Vec::with_capacity(layer.outputs);
            layer.apply(&acts[i], &mut out);
            if i < last {
                for v in &mut out {
                    *v = v.max(T::zero());
                }
            }
            acts.push(out);
        }
        acts
    }

    pub fn forward(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_input(x)?;
        Ok(self.activations(x).pop().expect("output layer"))
    }

    pub fn zero_gradients(&self) -> Gradients<T> {
        Gradients {
            weights: self.layers.iter().map(|l| vec![T::zero(); l.weights.len()]).collect(),
            biases: self.layers.iter().map(|l| vec![T::zero(); l.outputs]).collect(),
        }
    }

    /// Mean loss over `batch` and its gradient with respect to every parameter.
    pub fn loss_and_gradients(&self, batch: &[Sample<'_, T>], loss: Loss) -> Result<(T, Gradients<T>)> {
        if batch.is_empty() {
            return Err(Error::invalid("empty training batch"));
        }
        let scale = T::one() / T::lit(batch.len() as f64);
        let mut grads = self.zero_gradients();
        let mut total = T::zero();
        for sample in batch {
            self.check_input(sample.state)?;
            if sample.action >= self.output_len() {
                return Err(Error::invalid(format!("action {} outside network output", sample.action)));
            }
            let acts = self.activations(sample.state);
            let q = acts[acts.len() - 1][sample.action];
            let err = q - sample.target;
            total += loss.value(err);
            let mut delta = vec![T::zero(); self.output_len()];
            delta[sample.action] = loss.derivative(err) * scale;
            for (li, layer) in self.layers.iter().enumerate().rev() {
                let input = &acts[li];
                let gw = &mut grads.weights[li];
                for (o, &d) in delta.iter().enumerate() {
                    if d == T::zero() {
                        continue;
                    }
                    grads.biases[li][o] += d;
                    for (g, &a) in gw[o * layer.inputs..(o + 1) * layer.inputs].iter_mut().zip(input) {
                        *g += d * a;
                    }
                }
                if li == 0 {
                    break;
                }
                let mut prev = vec![T::zero(); layer.inputs];
                for (o, &d) in delta.iter().enumerate() {
                    if d == T::zero() {
                        continue;
                    }
                    for (p, &w) in prev.iter_mut().zip(&layer.weights[o * layer.inputs..(o + 1) * layer.inputs]) {
                        *p += d * w;
                    }
                }
                for (p, &a) in prev.iter_mut().zip(input) {
                    if a <= T::zero() {
                        *p = T::zero();
                    }
                }
                delta = prev;
            }
        }
        Ok((total * scale, grads))
    }
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax<T: Real>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scalar_net(w: [f64; 3], b: [f64; 3]) -> Mlp<f64> {
        let layer = |w: f64, b: f64| Dense {
            inputs: 1,
            outputs: 1,
            weights: vec![w],
            biases: vec![b],
        };
        Mlp::from_layers(vec![layer(w[0], b[0]), layer(w[1], b[1]), layer(w[2], b[2])]).unwrap()
    }

    #[test]
    fn zero_network_outputs_zero() {
        let net = Mlp::<f64>::zeros(&[66, 70, 100, 128]).unwrap();
        assert_eq!(net.forward(&[0.3; 66]).unwrap(), vec![0.0; 128]);
        assert!(net.forward(&[0.0; 65]).is_err());
    }

    #[test]
    fn hand_forward_pass() {
        // relu(2·1.5 − 1) = 2; relu(−0.5·2 + 3) = 2; 4·2 + 0.25
        let net = scalar_net([2.0, -0.5, 4.0], [-1.0, 3.0, 0.25]);
        assert_eq!(net.forward(&[1.5]).unwrap(), vec![8.25]);
        // hidden unit clipped: relu(2·(−1) − 1) = 0; relu(3) = 3; 4·3 + 0.25
        assert_eq!(net.forward(&[-1.0]).unwrap(), vec![12.25]);
    }

    #[test]
    fn paper_shapes_build() {
        let mut s = RngStream::from_seed(0);
        for sizes in [[66, 70, 100, 128], [66, 40, 30, 16], [66, 70, 70, 81]] {
            let net = Mlp::<f64>::he_uniform(&sizes, &mut s).unwrap();
            assert_eq!(net.sizes(), sizes.to_vec());
            assert_eq!(net.forward(&[0.5; 66]).unwrap().len(), sizes[3]);
        }
    }

    #[test]
    fn he_uniform_respects_fan_in_bound() {
        let net = Mlp::<f64>::he_uniform(&[24, 10, 5], &mut RngStream::from_seed(1)).unwrap();
        let limit = (6.0f64 / 24.0).sqrt();
        assert!(net.layers()[0].weights.iter().all(|w| w.abs() <= limit));
        assert!(net.layers()[0].weights.iter().any(|w| w.abs() > 0.5 * limit));
    }

    #[test]
    fn argmax_prefers_lowest_index() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0, 2.0]), 1);
        assert_eq!(argmax(&[0.0; 4]), 0);
    }

    fn fd_check(seed: u64, loss: Loss) -> std::result::Result<(), TestCaseError> {
        let mut s = RngStream::from_seed(seed);
        let net = Mlp::<f64>::he_uniform(&[4, 8, 8, 3], &mut s).unwrap();
        let mut net = net;
        for l in net.layers_mut() {
            for b in &mut l.biases {
                *b = 0.1 * s.standard_normal();
            }
        }
        let states: Vec<Vec<f64>> = (0..5).map(|_| (0..4).map(|_| s.standard_normal()).collect()).collect();
        let batch: Vec<Sample<f64>> = states
            .iter()
            .map(|x| Sample {
                state: x,
                action: s.index(3),
                target: s.standard_normal(),
            })
            .collect();
        let (_, grads) = net.loss_and_gradients(&batch, loss).unwrap();
        let h = 1e-5;
        let eval = |n: &Mlp<f64>| n.loss_and_gradients(&batch, loss).unwrap().0;
        for li in 0..3 {
            for wi in 0..net.layers()[li].weights.len() {
                let mut plus = net.clone();
                plus.layers_mut()[li].weights[wi] += h;
                let mut minus = net.clone();
                minus.layers_mut()[li].weights[wi] -= h;
                let numeric = (eval(&plus) - eval(&minus)) / (2.0 * h);
                let analytic = grads.weights[li][wi];
                prop_assert!(
                    (numeric - analytic).abs() <= 1e-4 * numeric.abs().max(analytic.abs()) + 1e-9,
                    "layer {li} weight {wi}: {analytic} vs {numeric}"
                );
            }
            for bi in 0..net.layers()[li].biases.len() {
                let mut plus = net.clone();
                plus.layers_mut()[li].biases[bi] += h;
                let mut minus = net.clone();
                minus.layers_mut()[li].biases[bi] -= h;
                let numeric = (eval(&plus) - eval(&minus)) / (2.0 * h);
                let analytic = grads.biases[li][bi];
                prop_assert!(
                    (numeric - analytic).abs() <= 1e-4 * numeric.abs().max(analytic.abs()) + 1e-9,
                    "layer {li} bias {bi}: {analytic} vs {numeric}"
                );
            }
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn backprop_matches_finite_differences(seed in 0u64..10_000) {
            fd_check(seed, Loss::Mse)?;
        }

        #[test]
        fn huber_backprop_matches_finite_differences(seed in 0u64..10_000) {
            fd_check(seed, Loss::Huber)?;
        }
    }
}
