//! Online boosting: each member sees each instance a Poisson(λ) number of
//! times, with λ raised for instances earlier members got wrong.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::StreamModel;
use crate::dataset::Instance;
use crate::{argmax, Error, Result};

/// Cap on Poisson draws, bounding per-instance work.
pub const MAX_POISSON: u32 = 20;

/// Knuth's multiplication method, capped at [`MAX_POISSON`].
pub fn poisson<R: Rng>(lambda: f64, rng: &mut R) -> u32 {
    if lambda <= 0.0 {
        return 0;
    }
    let limit = (-lambda).exp();
    let mut k = 0;
    let mut p = 1.0;
    loop {
        p *= rng.gen::<f64>();
        if p <= limit || k >= MAX_POISSON {
            return k;
        }
        k += 1;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OzaBoostConfig {
    pub members: usize,
    pub seed: u64,
}

impl Default for OzaBoostConfig {
    fn default() -> Self {
        OzaBoostConfig { members: 10, seed: 1 }
    }
}

pub struct BoostMember {
    pub model: Box<dyn StreamModel>,
    /// Weight mass of instances the member handled correctly.
    pub lambda_correct: f64,
    /// Weight mass of instances the member got wrong.
    pub lambda_wrong: f64,
    /// Total λ routed to this member.
    pub lambda_routed: f64,
}

impl BoostMember {
    /// Member error estimate, `None` before any instance was routed.
    pub fn error(&self) -> Option<f64> {
        let total = self.lambda_correct + self.lambda_wrong;
        (total > 0.0).then(|| self.lambda_wrong / total)
    }

    /// `ln((1 - e) / e)` with `e` clamped to `[1e-10, 1 - 1e-10]`. Members no
    /// better than chance get weight 0 rather than a negative vote.
    pub fn vote_weight(&self) -> f64 {
        match self.error() {
            None => 0.0,
            Some(e) => {
                let e = e.clamp(1e-10, 1.0 - 1e-10);
                ((1.0 - e) / e).ln().max(0.0)
            }
        }
    }
}

pub struct OzaBoost {
    members: Vec<BoostMember>,
    num_classes: usize,
    rng: ChaCha8Rng,
}

impl OzaBoost {
    /// Builds `cfg.members` members with `factory`.
    pub fn new(
        num_classes: usize,
        cfg: &OzaBoostConfig,
        mut factory: impl FnMut() -> Result<Box<dyn StreamModel>>,
    ) -> Result<Self> {
        if cfg.members == 0 {
            return Err(Error::Config("ensemble needs at least one member".into()));
        }
        let members = (0..cfg.members)
            .map(|_| {
                Ok(BoostMember {
                    model: factory()?,
                    lambda_correct: 0.0,
                    lambda_wrong: 0.0,
                    lambda_routed: 0.0,
                })
            })
            .collect::<Result<_>>()?;
        Ok(OzaBoost {
            members,
            num_classes,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        })
    }

    pub fn members(&self) -> &[BoostMember] {
        &self.members
    }
}

impl StreamModel for OzaBoost {
    /// Summed vote weights per class.
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        let mut scores = vec![0.0; self.num_classes];
        for m in &self.members {
            let w = m.vote_weight();
            if w > 0.0 {
                scores[m.model.predict(x)] += w;
            }
        }
        scores
    }

    /// A single member votes with its own prediction, even before its
    /// weight is established.
    fn predict(&self, x: &Instance) -> usize {
        if let [only] = self.members.as_slice() {
            return only.model.predict(x);
        }
        argmax(&self.predict_scores(x))
    }

    fn learn(&mut self, x: &Instance) {
        let mut lambda = 1.0;
        for m in &mut self.members {
            m.lambda_routed += lambda;
            let k = poisson(lambda, &mut self.rng);
            for _ in 0..k {
                m.model.learn(x);
            }
            if m.model.predict(x) == x.label {
                m.lambda_correct += lambda;
                lambda *= (m.lambda_correct + m.lambda_wrong) / (2.0 * m.lambda_correct);
            } else {
                m.lambda_wrong += lambda;
                lambda *= (m.lambda_correct + m.lambda_wrong) / (2.0 * m.lambda_wrong);
            }
        }
    }
}
