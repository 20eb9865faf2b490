use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::prequential::PrequentialTrace;
use crate::dataset::{Attribute, AttributeSchema, Dataset, Instance};
use crate::{Error, Result};

pub const DEFAULT_DROP_THRESHOLD: f64 = 0.02;
pub const DEFAULT_DRIFT_WINDOW: usize = 500;

/// 1-based indices of drops in faded accuracy.
///
/// The faded curve is first averaged over a trailing `window`; an index is
/// in a drop episode while that average sits more than `drop_threshold`
/// below its own maximum over the previous `window` indices. Each episode
/// is reported at the lowest raw faded accuracy between `window` before its
/// start and its end. Reports closer than `window` are merged, keeping the
/// deeper one, so the output is sorted and spaced by more than `window`.
pub fn annotate_drifts(trace: &PrequentialTrace, drop_threshold: f64, window: usize) -> Result<Vec<usize>> {
    if trace.is_empty() {
        return Err(Error::Config("cannot annotate an empty trace".into()));
    }
    if !(drop_threshold > 0.0) || window == 0 {
        return Err(Error::Config("drop threshold and window must be positive".into()));
    }
    let f = trace.faded_series();
    let n = f.len();
    if n < window {
        return Ok(Vec::new());
    }

    // Trailing mean, defined from the first full window on.
    let mut smooth = vec![f64::NAN; n];
    let mut sum: f64 = f[..window].iter().sum();
    smooth[window - 1] = sum / window as f64;
    for i in window..n {
        sum += f[i] - f[i - window];
        smooth[i] = sum / window as f64;
    }

    // Sliding maximum of the smoothed curve via a monotone deque.
    let mut episodes: Vec<(usize, usize)> = Vec::new();
    let mut deque: VecDeque<usize> = VecDeque::new();
    let mut open: Option<usize> = None;
    for i in window - 1..n {
        while deque.back().is_some_and(|&j| smooth[j] <= smooth[i]) {
            deque.pop_back();
        }
        deque.push_back(i);
        while deque.front().is_some_and(|&j| j + window <= i) {
            deque.pop_front();
        }
        let peak = smooth[*deque.front().expect("non-empty")];
        let dropping = peak - smooth[i] > drop_threshold;
        match (dropping, open) {
            (true, None) => open = Some(i),
            (false, Some(start)) => {
                episodes.push((start, i - 1));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        episodes.push((start, n - 1));
    }

    let mut marks: Vec<usize> = Vec::new();
    for (start, end) in episodes {
        let from = start.saturating_sub(window);
        let lowest = (from..=end).fold(from, |best, j| if f[j] < f[best] { j } else { best });
        match marks.last_mut() {
            Some(prev) if lowest <= *prev + window => {
                if f[lowest] < f[*prev] {
                    *prev = lowest;
                }
            }
            _ => marks.push(lowest),
        }
    }
    // Replacing a mark can bring it within `window` of the one before.
    let mut merged: Vec<usize> = Vec::with_capacity(marks.len());
    for m in marks {
        match merged.last_mut() {
            Some(prev) if m <= *prev + window => {
                if f[m] < f[*prev] {
                    *prev = m;
                }
            }
            _ => merged.push(m),
        }
    }
    Ok(merged.into_iter().map(|i| i + 1).collect())
}

/// A stream whose class is set by one nominal attribute `key` (4 symbols):
/// before `switch_at` odd symbols are class `pos`, afterwards the mapping is
/// inverted. A second, uniform numeric attribute carries no signal.
pub fn gen_drift_stream(n: usize, switch_at: usize, seed: u64) -> Result<Dataset> {
    if !(switch_at > 0 && switch_at < n) {
        return Err(Error::Config(format!("switch index {switch_at} must lie strictly inside 0..{n}")));
    }
    let schema = AttributeSchema::new(
        vec![Attribute::nominal("key", ["a", "b", "c", "d"]), Attribute::numeric("noise")],
        vec!["neg".into(), "pos".into()],
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = (0..n)
        .map(|i| {
            let key = rng.gen_range(0..4usize);
            let odd = key % 2;
            let label = if i < switch_at { odd } else { 1 - odd };
            Instance::new(vec![key as f64, rng.gen()], label)
        })
        .collect();
    let mut ds = Dataset::new(schema, instances, vec![])?;
    ds.add_provenance(format!("synthetic drift stream: n = {n}, switch at {switch_at}, seed {seed}"));
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{prequential_run, ConfusionMatrix, PrequentialRecord};
    use crate::stream::{StreamModel, WindowKnn, WindowKnnConfig};
    use proptest::prelude::*;

    fn trace_from(outcomes: &[bool], alpha: f64) -> PrequentialTrace {
        let (mut s, mut b) = (0.0, 0.0);
        let mut ok = 0;
        let records = outcomes
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let (s2, b2, acc) = crate::eval::faded_update(s, b, c, alpha);
                s = s2;
                b = b2;
                ok += usize::from(c);
                PrequentialRecord {
                    index: i + 1,
                    correct: c,
                    faded_accuracy: acc,
                    cumulative_accuracy: ok as f64 / (i + 1) as f64,
                }
            })
            .collect();
        PrequentialTrace {
            alpha,
            records,
            confusion: ConfusionMatrix::new(&["a".to_string()]),
        }
    }

    #[test]
    fn constant_trace_has_no_drift() {
        let t = trace_from(&vec![true; 5000], 0.95);
        assert!(annotate_drifts(&t, DEFAULT_DROP_THRESHOLD, DEFAULT_DRIFT_WINDOW).unwrap().is_empty());
    }

    #[test]
    fn sparse_isolated_errors_are_not_drift() {
        let outcomes: Vec<bool> = (0..20_000).map(|i| i % 250 != 0).collect();
        let t = trace_from(&outcomes, 0.95);
        assert!(annotate_drifts(&t, DEFAULT_DROP_THRESHOLD, DEFAULT_DRIFT_WINDOW).unwrap().is_empty());
    }

    #[test]
    fn oracle_for_concept_a_flips_at_switch() {
        let ds = gen_drift_stream(2000, 700, 5).unwrap();
        let oracle = |x: &Instance| x.nominal(0) % 2;
        for (i, x) in ds.instances().iter().enumerate() {
            assert_eq!(oracle(x) == x.label, i < 700);
        }
        assert_eq!(ds.instances(), gen_drift_stream(2000, 700, 5).unwrap().instances());
    }

    #[test]
    fn abrupt_switch_detected_once_near_switch() {
        let switch = 6000;
        let ds = gen_drift_stream(12_000, switch, 1).unwrap();
        let mut model = WindowKnn::new(ds.schema(), WindowKnnConfig { window_size: 200, k: 3 }).unwrap();
        let t = prequential_run(ds.instances(), &mut model as &mut dyn StreamModel, 0.95, ds.schema().class_labels())
            .unwrap();
        let marks = annotate_drifts(&t, DEFAULT_DROP_THRESHOLD, DEFAULT_DRIFT_WINDOW).unwrap();
        assert_eq!(marks.len(), 1, "{marks:?}");
        assert!(marks[0].abs_diff(switch) <= DEFAULT_DRIFT_WINDOW, "{marks:?}");
    }

    #[test]
    fn bad_arguments() {
        assert!(gen_drift_stream(10, 0, 1).is_err());
        assert!(gen_drift_stream(10, 10, 1).is_err());
        let t = trace_from(&[true], 0.95);
        assert!(annotate_drifts(&t, 0.0, 10).is_err());
        assert!(annotate_drifts(&t, 0.1, 0).is_err());
    }

    proptest! {
        #[test]
        fn output_sorted_and_spaced(outcomes in prop::collection::vec(prop::bool::weighted(0.9), 100..3000), window in 5usize..200) {
            let t = trace_from(&outcomes, 0.95);
            let marks = annotate_drifts(&t, 0.02, window).unwrap();
            for w in marks.windows(2) {
                prop_assert!(w[1] > w[0] + window);
            }
            prop_assert!(marks.iter().all(|&m| m >= 1 && m <= outcomes.len()));
        }
    }
}
