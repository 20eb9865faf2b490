//! Connection-record schema, instances and datasets.

mod fetch;
mod kdd;
mod parse;

pub use fetch::{fetch_dataset, sha256_file, DatasetName};
pub use kdd::{kdd99_schema, KDD99_ATTRIBUTES};
pub use parse::{load_dataset, parse_kdd_line, read_kdd_records, write_kdd_records};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttributeKind {
    Numeric,
    /// Symbols in first-seen order; an instance stores the symbol's index.
    Nominal(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn numeric(name: impl Into<String>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Numeric,
        }
    }

    pub fn nominal<S: Into<String>>(name: impl Into<String>, domain: impl IntoIterator<Item = S>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Nominal(domain.into_iter().map(Into::into).collect()),
        }
    }

    pub fn is_nominal(&self) -> bool {
        matches!(self.kind, AttributeKind::Nominal(_))
    }

    pub fn domain(&self) -> Option<&[String]> {
        match &self.kind {
            AttributeKind::Nominal(d) => Some(d),
            AttributeKind::Numeric => None,
        }
    }
}

/// Ordered attribute descriptors plus the class label set.
///
/// Nominal domains and class labels grow while records are parsed and are
/// treated as frozen once a [`Dataset`] is built from them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeSchema {
    attributes: Vec<Attribute>,
    class_labels: Vec<String>,
}

impl AttributeSchema {
    pub fn new(attributes: Vec<Attribute>, class_labels: Vec<String>) -> Result<Self> {
        for (i, a) in attributes.iter().enumerate() {
            if attributes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::SchemaMismatch(format!("duplicate attribute name {:?}", a.name)));
            }
        }
        for (i, c) in class_labels.iter().enumerate() {
            if class_labels[..i].contains(c) {
                return Err(Error::SchemaMismatch(format!("duplicate class label {c:?}")));
            }
        }
        Ok(AttributeSchema {
            attributes,
            class_labels,
        })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &Attribute {
        &self.attributes[index]
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn num_classes(&self) -> usize {
        self.class_labels.len()
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.class_labels.iter().position(|l| l == label)
    }

    pub fn is_nominal(&self, index: usize) -> bool {
        self.attributes[index].is_nominal()
    }

    /// Domain size of a nominal attribute, 0 for numeric ones.
    pub fn domain_len(&self, index: usize) -> usize {
        self.attributes[index].domain().map_or(0, <[String]>::len)
    }

    pub fn all_numeric(&self) -> bool {
        self.attributes.iter().all(|a| !a.is_nominal())
    }

    /// Index of `symbol` in the attribute's domain, appending it if new.
    ///
    /// Panics when the attribute is numeric.
    pub fn intern_symbol(&mut self, index: usize, symbol: &str) -> usize {
        match &mut self.attributes[index].kind {
            AttributeKind::Nominal(domain) => match domain.iter().position(|s| s == symbol) {
                Some(i) => i,
                None => {
                    domain.push(symbol.to_owned());
                    domain.len() - 1
                }
            },
            AttributeKind::Numeric => panic!("attribute {index} is numeric"),
        }
    }

    pub fn intern_label(&mut self, label: &str) -> usize {
        match self.class_index(label) {
            Some(i) => i,
            None => {
                self.class_labels.push(label.to_owned());
                self.class_labels.len() - 1
            }
        }
    }

    pub(crate) fn with_class_labels(&self, class_labels: Vec<String>) -> Self {
        AttributeSchema {
            attributes: self.attributes.clone(),
            class_labels,
        }
    }

    pub(crate) fn with_attributes(&self, attributes: Vec<Attribute>) -> Self {
        AttributeSchema {
            attributes,
            class_labels: self.class_labels.clone(),
        }
    }

    fn check_instance(&self, inst: &Instance) -> Result<()> {
        if inst.values.len() != self.attributes.len() {
            return Err(Error::SchemaMismatch(format!(
                "instance has {} values, schema has {} attributes",
                inst.values.len(),
                self.attributes.len()
            )));
        }
        if inst.label >= self.class_labels.len() {
            return Err(Error::SchemaMismatch(format!("class index {} out of range", inst.label)));
        }
        for (i, (&v, a)) in inst.values.iter().zip(&self.attributes).enumerate() {
            let ok = match &a.kind {
                AttributeKind::Numeric => v.is_finite(),
                AttributeKind::Nominal(d) => v >= 0.0 && v.fract() == 0.0 && (v as usize) < d.len(),
            };
            if !ok {
                return Err(Error::SchemaMismatch(format!("value {v} invalid for attribute {i} ({})", a.name)));
            }
        }
        Ok(())
    }
}

/// A view of one attribute value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value<'a> {
    Numeric(f64),
    Nominal(&'a str),
}

impl fmt::Display for Value<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Numeric(x) => write!(f, "{x}"),
            Value::Nominal(s) => f.write_str(s),
        }
    }
}

/// One connection record.
///
/// Values are stored as `f64`; nominal attributes hold the index of their
/// symbol in the schema domain. `label` indexes the schema's class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub values: Vec<f64>,
    pub label: usize,
}

impl Instance {
    pub fn new(values: Vec<f64>, label: usize) -> Self {
        Instance { values, label }
    }

    /// Domain index of a nominal attribute value.
    #[inline]
    pub fn nominal(&self, index: usize) -> usize {
        self.values[index] as usize
    }

    pub fn value<'s>(&self, schema: &'s AttributeSchema, index: usize) -> Value<'s> {
        match &schema.attribute(index).kind {
            AttributeKind::Numeric => Value::Numeric(self.values[index]),
            AttributeKind::Nominal(d) => Value::Nominal(&d[self.nominal(index)]),
        }
    }
}

/// A schema, its conforming instances and a record of how they were produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: AttributeSchema,
    instances: Vec<Instance>,
    provenance: Vec<String>,
}

impl Dataset {
    /// Builds a dataset, checking every instance against the schema.
    pub fn new(schema: AttributeSchema, instances: Vec<Instance>, provenance: Vec<String>) -> Result<Self> {
        for inst in &instances {
            schema.check_instance(inst)?;
        }
        Ok(Dataset {
            schema,
            instances,
            provenance,
        })
    }

    /// Skips validation; callers guarantee conformance.
    pub(crate) fn from_parts(schema: AttributeSchema, instances: Vec<Instance>, provenance: Vec<String>) -> Self {
        Dataset {
            schema,
            instances,
            provenance,
        }
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn instance(&self, i: usize) -> &Instance {
        &self.instances[i]
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.schema.num_classes()
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn add_provenance(&mut self, step: impl Into<String>) {
        self.provenance.push(step.into());
    }

    /// Instances per class, indexed like the schema's class labels.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.schema.num_classes()];
        for inst in &self.instances {
            counts[inst.label] += 1;
        }
        counts
    }

    /// (label, count) pairs in schema order.
    pub fn class_distribution(&self) -> Vec<(String, usize)> {
        self.schema
            .class_labels()
            .iter()
            .cloned()
            .zip(self.class_counts())
            .collect()
    }

    /// Copy of the instances at `indices`, in that order, sharing the schema.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            instances: indices.iter().map(|&i| self.instances[i].clone()).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn into_instances(self) -> Vec<Instance> {
        self.instances
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_schema() -> AttributeSchema {
        AttributeSchema::new(
            vec![Attribute::numeric("x"), Attribute::nominal("p", ["tcp", "udp"])],
            vec!["normal".into(), "attack".into()],
        )
        .unwrap()
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = AttributeSchema::new(vec![Attribute::numeric("a"), Attribute::numeric("a")], vec![]);
        assert!(err.is_err());
    }

    #[test]
    fn dataset_rejects_nonconforming_instances() {
        let s = toy_schema();
        assert!(Dataset::new(s.clone(), vec![Instance::new(vec![1.0, 1.0], 0)], vec![]).is_ok());
        assert!(Dataset::new(s.clone(), vec![Instance::new(vec![1.0], 0)], vec![]).is_err());
        assert!(Dataset::new(s.clone(), vec![Instance::new(vec![1.0, 2.0], 0)], vec![]).is_err());
        assert!(Dataset::new(s.clone(), vec![Instance::new(vec![f64::NAN, 0.0], 0)], vec![]).is_err());
        assert!(Dataset::new(s, vec![Instance::new(vec![1.0, 0.0], 2)], vec![]).is_err());
    }

    #[test]
    fn interning_appends_new_symbols() {
        let mut s = toy_schema();
        assert_eq!(s.intern_symbol(1, "udp"), 1);
        assert_eq!(s.intern_symbol(1, "icmp"), 2);
        assert_eq!(s.domain_len(1), 3);
        assert_eq!(s.intern_label("smurf"), 2);
    }

    #[test]
    fn value_view_resolves_symbols() {
        let s = toy_schema();
        let inst = Instance::new(vec![3.5, 1.0], 0);
        assert_eq!(inst.value(&s, 0), Value::Numeric(3.5));
        assert_eq!(inst.value(&s, 1), Value::Nominal("udp"));
    }

    #[test]
    fn class_counts_follow_label_order() {
        let s = toy_schema();
        let ds = Dataset::new(
            s,
            vec![
                Instance::new(vec![0.0, 0.0], 1),
                Instance::new(vec![0.0, 0.0], 1),
                Instance::new(vec![0.0, 1.0], 0),
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(ds.class_counts(), vec![1, 2]);
        assert_eq!(ds.subset(&[2, 0]).class_counts(), vec![1, 1]);
    }
}
