use std::collections::VecDeque;

use super::StreamModel;
use crate::batch::{knn_nearest, knn_vote};
use crate::dataset::{AttributeSchema, Instance};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WindowKnnConfig {
    pub window_size: usize,
    pub k: usize,
}

impl Default for WindowKnnConfig {
    fn default() -> Self {
        WindowKnnConfig { window_size: 5000, k: 3 }
    }
}

/// k-NN over a FIFO window of the most recent labelled instances, with the
/// batch k-NN distance and tie rules. Older instances count as lower
/// indices for neighbour ties.
#[derive(Debug, Clone)]
pub struct WindowKnn {
    cfg: WindowKnnConfig,
    nominal: Vec<bool>,
    num_classes: usize,
    window: VecDeque<Instance>,
}

impl WindowKnn {
    pub fn new(schema: &AttributeSchema, cfg: WindowKnnConfig) -> Result<Self> {
        if cfg.k == 0 || cfg.window_size < cfg.k {
            return Err(Error::Config(format!(
                "window k-NN needs window_size >= k >= 1, got W = {}, k = {}",
                cfg.window_size, cfg.k
            )));
        }
        Ok(WindowKnn {
            cfg,
            nominal: (0..schema.len()).map(|i| schema.is_nominal(i)).collect(),
            num_classes: schema.num_classes(),
            window: VecDeque::new(),
        })
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    fn neighbours(&self, x: &Instance) -> Vec<(f64, usize)> {
        let k = self.cfg.k.min(self.window.len());
        let candidates = self.window.iter().enumerate().map(|(i, t)| (i, t.values.as_slice()));
        knn_nearest(&self.nominal, &x.values, candidates, k)
    }
}

impl StreamModel for WindowKnn {
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        let mut scores = vec![0.0; self.num_classes];
        let n = self.neighbours(x);
        for &(_, i) in &n {
            scores[self.window[i].label] += 1.0 / n.len() as f64;
        }
        scores
    }

    fn predict(&self, x: &Instance) -> usize {
        if self.window.is_empty() {
            return 0;
        }
        knn_vote(&self.neighbours(x), |i| self.window[i].label, self.num_classes)
    }

    fn learn(&mut self, x: &Instance) {
        self.window.push_back(x.clone());
        if self.window.len() > self.cfg.window_size {
            self.window.pop_front();
        }
    }
}
