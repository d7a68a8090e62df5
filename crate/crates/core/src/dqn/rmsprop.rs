use crate::numerics::Real;

use super::mlp::{Gradients, Mlp};

/// RMSProp: `c ← ρc + (1−ρ)g²`, `w ← w − η·g/(√c + ε)`.
#[derive(Debug, Clone)]
pub struct RmsProp<T> {
    pub learning_rate: T,
    pub decay: T,
    pub epsilon: T,
    cache: Gradients<T>,
}

impl<T: Real> RmsProp<T> {
    pub fn new(net: &Mlp<T>, learning_rate: T, decay: T, epsilon: T) -> Self {
        Self {
            learning_rate,
            decay,
            epsilon,
            cache: net.zero_gradients(),
        }
    }

    pub fn step(&mut self, net: &mut Mlp<T>, grads: &Gradients<T>) {
        let keep = T::one() - self.decay;
        for (li, layer) in net.layers_mut().iter_mut().enumerate() {
            let params = layer.weights.iter_mut().chain(layer.biases.iter_mut());
            let g = grads.weights[li].iter().chain(&grads.biases[li]);
            let c = self.cache.weights[li].iter_mut().chain(self.cache.biases[li].iter_mut());
            for ((w, &g), c) in params.zip(g).zip(c) {
                *c = self.decay * *c + keep * g * g;
                *w -= self.learning_rate * g / (c.sqrt() + self.epsilon);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    #[test]
    fn zero_gradient_leaves_weights() {
        let mut net = Mlp::<f64>::he_uniform(&[3, 4, 2], &mut RngStream::from_seed(0)).unwrap();
        let before = net.clone();
        let mut opt = RmsProp::new(&net, 1e-3, 0.9, 1e-8);
        let zero = net.zero_gradients();
        for _ in 0..10 {
            opt.step(&mut net, &zero);
        }
        assert_eq!(net, before);
    }

    #[test]
    fn first_step_magnitude() {
        // c = 0.1·g², so the first step is η·g/(√0.1·|g|) = η/√0.1
        let mut net = Mlp::<f64>::zeros(&[1, 1]).unwrap();
        let mut opt = RmsProp::new(&net, 1e-3, 0.9, 0.0);
        let mut g = net.zero_gradients();
        g.weights[0][0] = 4.0;
        opt.step(&mut net, &g);
        assert!((net.layers()[0].weights[0] + 1e-3 / 0.1f64.sqrt()).abs() < 1e-15);
    }
}
