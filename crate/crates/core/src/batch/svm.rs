//! Linear soft-margin SVM trained with Platt's sequential minimal
//! optimization. Binary problems only: class 0 is -1, class 1 is +1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BatchLearner, BatchModel};
use crate::dataset::{Dataset, Instance};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SvmConfig {
    pub c: f64,
    /// KKT violation tolerance.
    pub tolerance: f64,
    /// Upper bound on outer-loop sweeps.
    pub max_passes: usize,
    /// Seeds the start positions of second-choice scans.
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            c: 1.0,
            tolerance: 1e-3,
            max_passes: 200,
            seed: 1,
        }
    }
}

/// Smallest multiplier change that counts as progress.
const EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvm {
    w: Vec<f64>,
    b: f64,
    alphas: Vec<f64>,
    passes: usize,
}

impl LinearSvm {
    pub fn train(ds: &Dataset, cfg: &SvmConfig) -> Result<Self> {
        if !(cfg.c > 0.0) {
            return Err(Error::Config("C must be positive".into()));
        }
        if ds.num_classes() != 2 {
            return Err(Error::Config(format!(
                "SVM needs exactly two classes, found {}; use variant v2",
                ds.num_classes()
            )));
        }
        if !ds.schema().all_numeric() {
            return Err(Error::Config("SVM input must be all-numeric; one-hot encode first".into()));
        }
        if let Some(c) = ds.class_counts().iter().position(|&n| n == 0) {
            return Err(Error::Training(format!(
                "class '{}' has no training instances",
                ds.schema().class_labels()[c]
            )));
        }
        let mut smo = Smo::new(ds, cfg);
        smo.run();
        Ok(LinearSvm {
            w: smo.w,
            b: smo.b,
            alphas: smo.alpha,
            passes: smo.passes,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn bias(&self) -> f64 {
        self.b
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn passes(&self) -> usize {
        self.passes
    }

    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.w, x) + self.b
    }
}

impl BatchModel for LinearSvm {
    /// `[-f(x), f(x)]` for decision value `f`.
    fn predict_scores(&self, x: &Instance) -> Vec<f64> {
        let f = self.decision(&x.values);
        vec![-f, f]
    }

    /// A zero decision value goes to class 1.
    fn predict(&self, x: &Instance) -> usize {
        usize::from(self.decision(&x.values) >= 0.0)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SvmLearner {
    pub config: SvmConfig,
}

impl BatchLearner for SvmLearner {
    fn name(&self) -> &str {
        "svm"
    }

    fn fit(&self, train: &Dataset) -> Result<Box<dyn BatchModel>> {
        Ok(Box::new(LinearSvm::train(train, &self.config)?))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Smo<'a> {
    x: Vec<&'a [f64]>,
    y: Vec<f64>,
    sq_norm: Vec<f64>,
    alpha: Vec<f64>,
    w: Vec<f64>,
    b: f64,
    c: f64,
    tol: f64,
    max_passes: usize,
    passes: usize,
    /// Indices with `0 < alpha < C`, plus each index's slot in that list.
    non_bound: Vec<usize>,
    slot: Vec<Option<usize>>,
    rng: ChaCha8Rng,
}

impl<'a> Smo<'a> {
    fn new(ds: &'a Dataset, cfg: &SvmConfig) -> Self {
        let x: Vec<&[f64]> = ds.instances().iter().map(|i| i.values.as_slice()).collect();
        let y = ds
            .instances()
            .iter()
            .map(|i| if i.label == 1 { 1.0 } else { -1.0 })
            .collect();
        let sq_norm = x.iter().map(|v| dot(v, v)).collect();
        let n = x.len();
        Smo {
            x,
            y,
            sq_norm,
            alpha: vec![0.0; n],
            w: vec![0.0; ds.schema().len()],
            b: 0.0,
            c: cfg.c,
            tol: cfg.tolerance,
            max_passes: cfg.max_passes,
            passes: 0,
            non_bound: Vec::new(),
            slot: vec![None; n],
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        }
    }

    fn error(&self, i: usize) -> f64 {
        dot(&self.w, self.x[i]) + self.b - self.y[i]
    }

    fn run(&mut self) {
        let n = self.x.len();
        let mut examine_all = true;
        let mut changed = 0;
        while (changed > 0 || examine_all) && self.passes < self.max_passes {
            changed = 0;
            if examine_all {
                for i in 0..n {
                    changed += usize::from(self.examine(i));
                }
            } else {
                let snapshot = self.non_bound.clone();
                for i in snapshot {
                    changed += usize::from(self.examine(i));
                }
            }
            if examine_all {
                examine_all = false;
            } else if changed == 0 {
                examine_all = true;
            }
            self.passes += 1;
        }
    }

    fn examine(&mut self, i2: usize) -> bool {
        let y2 = self.y[i2];
        let a2 = self.alpha[i2];
        let e2 = self.error(i2);
        let r2 = e2 * y2;
        if !((r2 < -self.tol && a2 < self.c) || (r2 > self.tol && a2 > 0.0)) {
            return false;
        }
        if self.non_bound.len() > 1 {
            let mut best = None;
            let mut gap = -1.0;
            for &i1 in &self.non_bound {
                let d = (self.error(i1) - e2).abs();
                if d > gap {
                    gap = d;
                    best = Some(i1);
                }
            }
            if let Some(i1) = best {
                if self.take_step(i1, i2, e2) {
                    return true;
                }
            }
        }
        if !self.non_bound.is_empty() {
            let m = self.non_bound.len();
            let start = self.rng.gen_range(0..m);
            for k in 0..m {
                let i1 = self.non_bound[(start + k) % m];
                if self.take_step(i1, i2, e2) {
                    return true;
                }
            }
        }
        let n = self.x.len();
        let start = self.rng.gen_range(0..n);
        for k in 0..n {
            if self.take_step((start + k) % n, i2, e2) {
                return true;
            }
        }
        false
    }

    fn take_step(&mut self, i1: usize, i2: usize, e2: f64) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1, a2) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let e1 = self.error(i1);
        let s = y1 * y2;
        let c = self.c;
        let (lo, hi) = if y1 != y2 {
            ((a2 - a1).max(0.0), (c + a2 - a1).min(c))
        } else {
            ((a1 + a2 - c).max(0.0), (a1 + a2).min(c))
        };
        if lo >= hi {
            return false;
        }
        let k11 = self.sq_norm[i1];
        let k22 = self.sq_norm[i2];
        let k12 = dot(self.x[i1], self.x[i2]);
        let eta = k11 + k22 - 2.0 * k12;
        let mut a2n = if eta > 0.0 {
            (a2 + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            // Objective at both ends of the segment.
            let f1 = y1 * (e1 - self.b) - a1 * k11 - s * a2 * k12;
            let f2 = y2 * (e2 - self.b) - s * a1 * k12 - a2 * k22;
            let obj = |a2x: f64| {
                let a1x = a1 + s * (a2 - a2x);
                a1x * f1 + a2x * f2 + 0.5 * a1x * a1x * k11 + 0.5 * a2x * a2x * k22 + s * a2x * a1x * k12
            };
            let (lobj, hobj) = (obj(lo), obj(hi));
            if lobj < hobj - 1e-3 {
                lo
            } else if lobj > hobj + 1e-3 {
                hi
            } else {
                a2
            }
        };
        if a2n < 1e-8 {
            a2n = 0.0;
        } else if a2n > c - 1e-8 {
            a2n = c;
        }
        if (a2n - a2).abs() < EPS * (a2n + a2 + EPS) {
            return false;
        }
        let mut a1n = a1 + s * (a2 - a2n);
        if a1n < 1e-8 {
            a1n = 0.0;
        } else if a1n > c - 1e-8 {
            a1n = c;
        }
        let (d1, d2) = (y1 * (a1n - a1), y2 * (a2n - a2));
        let b1 = self.b - e1 - d1 * k11 - d2 * k12;
        let b2 = self.b - e2 - d1 * k12 - d2 * k22;
        self.b = if a1n > 0.0 && a1n < c {
            b1
        } else if a2n > 0.0 && a2n < c {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        for (w, (&x1, &x2)) in self.w.iter_mut().zip(self.x[i1].iter().zip(self.x[i2])) {
            *w += d1 * x1 + d2 * x2;
        }
        self.set_alpha(i1, a1n);
        self.set_alpha(i2, a2n);
        true
    }

    fn set_alpha(&mut self, i: usize, a: f64) {
        self.alpha[i] = a;
        let inside = a > 0.0 && a < self.c;
        match (inside, self.slot[i]) {
            (true, None) => {
                self.slot[i] = Some(self.non_bound.len());
                self.non_bound.push(i);
            }
            (false, Some(pos)) => {
                self.non_bound.swap_remove(pos);
                if let Some(&moved) = self.non_bound.get(pos) {
                    self.slot[moved] = Some(pos);
                }
                self.slot[i] = None;
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Attribute, AttributeSchema};

    fn ds(points: &[([f64; 2], usize)], classes: usize) -> Dataset {
        let schema = AttributeSchema::new(
            vec![Attribute::numeric("a"), Attribute::numeric("b")],
            (0..classes).map(|c| format!("c{c}")).collect(),
        )
        .unwrap();
        let inst = points.iter().map(|(p, l)| Instance::new(p.to_vec(), *l)).collect();
        Dataset::new(schema, inst, vec![]).unwrap()
    }

    fn dual_objective(points: &[([f64; 2], usize)], alpha: &[f64]) -> f64 {
        let y: Vec<f64> = points.iter().map(|p| if p.1 == 1 { 1.0 } else { -1.0 }).collect();
        let mut quad = 0.0;
        for i in 0..points.len() {
            for j in 0..points.len() {
                quad += alpha[i] * alpha[j] * y[i] * y[j] * dot(&points[i].0, &points[j].0);
            }
        }
        alpha.iter().sum::<f64>() - 0.5 * quad
    }

    #[test]
    fn two_separable_points() {
        let pts = [([0.0, 0.0], 0), ([1.0, 0.0], 1)];
        let svm = LinearSvm::train(&ds(&pts, 2), &SvmConfig::default()).unwrap();
        assert_eq!(svm.predict(&Instance::new(vec![0.0, 0.0], 0)), 0);
        assert_eq!(svm.predict(&Instance::new(vec![1.0, 0.0], 0)), 1);
        let boundary = -svm.bias() / svm.weights()[0];
        assert!(boundary > 0.0 && boundary < 1.0, "{boundary}");
    }

    #[test]
    fn four_points_match_grid_search_of_dual() {
        let pts = [([0.0, 0.0], 0), ([1.0, 1.0], 1), ([2.0, 0.0], 1), ([-1.0, 1.0], 0)];
        let c = 1.0;
        let svm = LinearSvm::train(&ds(&pts, 2), &SvmConfig::default()).unwrap();

        // Grid over three multipliers; the fourth follows from sum(alpha*y) = 0.
        let h = 0.01;
        let steps = (c / h) as usize;
        let mut best = (f64::NEG_INFINITY, vec![]);
        for i in 0..=steps {
            for j in 0..=steps {
                for k in 0..=steps {
                    let a = [i as f64 * h, j as f64 * h, k as f64 * h];
                    // y = (-1, +1, +1, -1): a4 = -a1 + a2 + a3.
                    let a4 = -a[0] + a[1] + a[2];
                    if !(-1e-12..=c + 1e-12).contains(&a4) {
                        continue;
                    }
                    let alpha = [a[0], a[1], a[2], a4];
                    let obj = dual_objective(&pts, &alpha);
                    if obj > best.0 {
                        best = (obj, alpha.to_vec());
                    }
                }
            }
        }
        assert!(dual_objective(&pts, svm.alphas()) >= best.0 - 1e-6);
        for (a, g) in svm.alphas().iter().zip(&best.1) {
            assert!((a - g).abs() <= 2.0 * h, "{:?} vs {:?}", svm.alphas(), best.1);
        }
        for (p, l) in pts {
            assert_eq!(svm.predict(&Instance::new(p.to_vec(), 0)), l);
        }
    }

    #[test]
    fn zero_margin_maps_to_positive_class() {
        let svm = LinearSvm {
            w: vec![0.0, 0.0],
            b: 0.0,
            alphas: vec![],
            passes: 0,
        };
        assert_eq!(svm.predict(&Instance::new(vec![3.0, 4.0], 0)), 1);
    }

    #[test]
    fn rejects_multiclass_and_empty_class() {
        let three = ds(&[([0.0, 0.0], 0), ([1.0, 0.0], 1), ([2.0, 0.0], 2)], 3);
        assert!(LinearSvm::train(&three, &SvmConfig::default()).is_err());
        let one_sided = ds(&[([0.0, 0.0], 0), ([1.0, 0.0], 0)], 2);
        assert!(matches!(
            LinearSvm::train(&one_sided, &SvmConfig::default()),
            Err(Error::Training(_))
        ));
    }

    #[test]
    fn overlapping_classes_converge_deterministically() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts: Vec<([f64; 2], usize)> = (0..200)
            .map(|i| {
                let l = i % 2;
                let shift = if l == 1 { 0.6 } else { 0.0 };
                ([rng.gen::<f64>() + shift, rng.gen::<f64>()], l)
            })
            .collect();
        let data = ds(&pts, 2);
        let a = LinearSvm::train(&data, &SvmConfig::default()).unwrap();
        let b = LinearSvm::train(&data, &SvmConfig::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.passes() < SvmConfig::default().max_passes);
        let correct = pts
            .iter()
            .filter(|(p, l)| a.predict(&Instance::new(p.to_vec(), 0)) == *l)
            .count();
        // Bayes rate for this overlap is 80%.
        assert!(correct > 150, "{correct}");
    }
}
