//! Three-layer perceptron with unipolar sigmoid units, trained by
//! per-instance gradient descent on squared error with momentum.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BatchLearner, BatchModel};
use crate::dataset::{Dataset, Instance};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MlpConfig {
    /// `None` means `ceil((inputs + classes) / 2)`.
    pub hidden_units: Option<usize>,
    pub learning_rate: f64,
    pub momentum: f64,
    pub epochs: usize,
    pub seed: u64,
    pub sigmoid_slope: f64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden_units: None,
            learning_rate: 0.3,
            momentum: 0.2,
            epochs: 10,
            seed: 1,
            sigmoid_slope: 1.0,
        }
    }
}

impl MlpConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_units == Some(0) {
            return Err(Error::Config("hidden_units must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::Config("learning_rate must be positive".into()));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config("momentum must lie in [0, 1)".into()));
        }
        Ok(())
    }
}

/// Network weights stored flat: hidden layer rows of `inputs + 1` (bias
/// last), then output rows of `hidden + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    inputs: usize,
    hidden: usize,
    outputs: usize,
    slope: f64,
    weights: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl Mlp {
    pub fn zeros(inputs: usize, hidden: usize, outputs: usize, slope: f64) -> Self {
        let n = hidden * (inputs + 1) + outputs * (hidden + 1);
        Mlp {
            inputs,
            hidden,
            outputs,
            slope,
            weights: vec![0.0; n],
        }
    }

    /// Weights drawn uniformly from `[-0.05, 0.05]`.
    pub fn random<R: Rng>(inputs: usize, hidden: usize, outputs: usize, slope: f64, rng: &mut R) -> Self {
        let mut m = Mlp::zeros(inputs, hidden, outputs, slope);
        for w in &mut m.weights {
            *w = rng.gen_range(-0.05..=0.05);
        }
        m
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    fn output_offset(&self) -> usize {
        self.hidden * (self.inputs + 1)
    }

    /// Hidden and output activations.
    pub fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        debug_assert_eq!(x.len(), self.inputs);
        let s = self.slope;
        let row = self.inputs + 1;
        let hidden: Vec<f64> = self
            .weights
            .chunks_exact(row)
            .take(self.hidden)
            .map(|w| {
                let z = w[..self.inputs].iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + w[self.inputs];
                sigmoid(s * z)
            })
            .collect();
        let out: Vec<f64> = self.weights[self.output_offset()..]
            .chunks_exact(self.hidden + 1)
            .map(|w| {
                let z = w[..self.hidden].iter().zip(&hidden).map(|(a, b)| a * b).sum::<f64>() + w[self.hidden];
                sigmoid(s * z)
            })
            .collect();
        (hidden, out)
    }

    /// Half the squared error against a 1-of-C target.
    pub fn loss(&self, x: &[f64], class: usize) -> f64 {
        let (_, out) = self.forward(x);
        out.iter()
            .enumerate()
            .map(|(c, o)| {
                let t = if c == class { 1.0 } else { 0.0 };
                0.5 * (o - t) * (o - t)
            })
            .sum()
    }

    /// Gradient of [`Mlp::loss`] with respect to every weight, plus the loss.
    pub fn gradient(&self, x: &[f64], class: usize) -> (Vec<f64>, f64) {
        let (hidden, out) = self.forward(x);
        let s = self.slope;
        let mut grad = vec![0.0; self.weights.len()];
        let off = self.output_offset();
        let hrow = self.hidden + 1;
        let mut loss = 0.0;
        let mut back = vec![0.0; self.hidden];
        for (c, &o) in out.iter().enumerate() {
            let t = if c == class { 1.0 } else { 0.0 };
            loss += 0.5 * (o - t) * (o - t);
            let delta = (o - t) * s * o * (1.0 - o);
            let w = &self.weights[off + c * hrow..off + (c + 1) * hrow];
            let g = &mut grad[off + c * hrow..off + (c + 1) * hrow];
            for j in 0..self.hidden {
                g[j] = delta * hidden[j];
                back[j] += delta * w[j];
            }
            g[self.hidden] = delta;
        }
        let irow = self.inputs + 1;
        for (j, &h) in hidden.iter().enumerate() {
            let delta = back[j] * s * h * (1.0 - h);
            let g = &mut grad[j * irow..(j + 1) * irow];
            for (gi, xi) in g.iter_mut().zip(x) {
                *gi = delta * xi;
            }
            g[self.inputs] = delta;
        }
        (grad, loss)
    }

    /// Trains on an all-numeric dataset.
    pub fn train(ds: &Dataset, cfg: &MlpConfig) -> Result<Self> {
        cfg.validate()?;
        if !ds.schema().all_numeric() {
            return Err(Error::Config("MLP input must be all-numeric; one-hot encode first".into()));
        }
        let inputs = ds.schema().len();
        let outputs = ds.num_classes();
        let hidden = cfg.hidden_units.unwrap_or((inputs + outputs).div_ceil(2)).max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut net = Mlp::random(inputs, hidden, outputs, cfg.sigmoid_slope, &mut rng);
        let mut velocity = vec![0.0; net.weights.len()];
        let mut order: Vec<usize> = (0..ds.len()).collect();
        for epoch in 0..cfg.epochs {
            order.shuffle(&mut rng);
            let mut total = 0.0;
            for &i in &order {
                let x = ds.instance(i);
                let (grad, loss) = net.gradient(&x.values, x.label);
                total += loss;
                for ((w, v), g) in net.weights.iter_mut().zip(&mut velocity).zip(&grad) {
                    *v = cfg.momentum * *v - cfg.learning_rate * g;
                    *w += *v;
                }
            }
            if !total.is_finite() {
                return Err(Error::Training(format!(
                    "non-finite loss in epoch {}; lower the learning rate",
                    epoch + 1
                )));
            }
        }
        Ok(net)
    }
}

impl BatchModel for Mlp {
    /// Output activations renormalized to sum to one.
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        let (_, out) = self.forward(&x.values);
        let z: f64 = out.iter().sum();
        if z > 0.0 {
            out.iter().map(|o| o / z).collect()
        } else {
            out
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct MlpLearner {
    pub config: MlpConfig,
}

impl BatchLearner for MlpLearner {
    fn name(&self) -> &str {
        "mlp"
    }

    fn fit(&self, train: &Dataset) -> Result<Box<dyn BatchModel>> {
        Ok(Box::new(Mlp::train(train, &self.config)?))
    }
}
