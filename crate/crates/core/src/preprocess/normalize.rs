use crate::dataset::{AttributeSchema, Dataset, Instance};
use crate::{Error, Result};

/// Per-attribute min-max scaling fitted on training data. Nominal
/// attributes pass through untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalizer {
    names: Vec<String>,
    ranges: Vec<Option<(f64, f64)>>,
}

pub fn fit_normalizer(ds: &Dataset) -> Normalizer {
    Normalizer::fit_instances(ds.schema(), ds.instances())
}

impl Normalizer {
    pub fn fit_instances(schema: &AttributeSchema, instances: &[Instance]) -> Self {
        let mut ranges: Vec<Option<(f64, f64)>> = (0..schema.len())
            .map(|i| (!schema.is_nominal(i)).then_some((f64::INFINITY, f64::NEG_INFINITY)))
            .collect();
        for inst in instances {
            for (r, &v) in ranges.iter_mut().zip(&inst.values) {
                if let Some((lo, hi)) = r {
                    *lo = lo.min(v);
                    *hi = hi.max(v);
                }
            }
        }
        for r in ranges.iter_mut().flatten() {
            if r.0 > r.1 {
                *r = (0.0, 0.0);
            }
        }
        Normalizer {
            names: schema.attributes().iter().map(|a| a.name.clone()).collect(),
            ranges,
        }
    }

    /// Fitted (min, max) of a numeric attribute.
    pub fn range(&self, index: usize) -> Option<(f64, f64)> {
        self.ranges[index]
    }

    #[inline]
    pub fn scale(&self, index: usize, x: f64) -> f64 {
        match self.ranges[index] {
            Some((lo, hi)) if hi > lo => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Some(_) => 0.0,
            None => x,
        }
    }

    pub fn transform_instance(&self, inst: &Instance) -> Instance {
        let values = inst.values.iter().enumerate().map(|(i, &v)| self.scale(i, v)).collect();
        Instance::new(values, inst.label)
    }

    fn check_schema(&self, schema: &AttributeSchema) -> Result<()> {
        let same = schema.len() == self.names.len()
            && schema
                .attributes()
                .iter()
                .zip(&self.names)
                .zip(&self.ranges)
                .all(|((a, n), r)| &a.name == n && a.is_nominal() == r.is_none());
        if same {
            Ok(())
        } else {
            Err(Error::SchemaMismatch("normalizer was fitted on a different schema".into()))
        }
    }

    pub fn apply(&self, ds: &Dataset) -> Result<Dataset> {
        self.check_schema(ds.schema())?;
        let instances = ds.instances().iter().map(|i| self.transform_instance(i)).collect();
        let mut provenance = ds.provenance().to_vec();
        provenance.push("normalize: min-max".into());
        Ok(Dataset::from_parts(ds.schema().clone(), instances, provenance))
    }
}
