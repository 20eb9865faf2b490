use crate::dataset::{Attribute, AttributeSchema, Dataset, Instance};
use crate::{Error, Result};

/// Expands nominal attributes into indicator columns.
///
/// Each nominal attribute contributes one column per known symbol, in domain
/// order. A symbol the encoder does not know encodes as an all-zero block.
#[derive(Debug, Clone, PartialEq)]
pub struct OneHotEncoder {
    names: Vec<String>,
    /// Known symbols per nominal attribute, `None` for numeric ones.
    symbols: Vec<Option<Vec<String>>>,
    /// Output slot per source-schema symbol code.
    slots: Vec<Option<Vec<Option<usize>>>>,
    offsets: Vec<usize>,
    width: usize,
}

/// Encodes with the full frozen domains of `ds`'s schema.
pub fn one_hot_encode(ds: &Dataset) -> Result<Dataset> {
    OneHotEncoder::from_schema(ds.schema()).encode(ds)
}

impl OneHotEncoder {
    /// Encoder covering every symbol in the schema's domains.
    pub fn from_schema(schema: &AttributeSchema) -> Self {
        let symbols = schema.attributes().iter().map(|a| a.domain().map(<[String]>::to_vec)).collect();
        Self::build(schema, symbols)
    }

    /// Encoder covering only the symbols that occur in `ds`, so that values
    /// unseen in training encode as zero blocks.
    pub fn fit(ds: &Dataset) -> Self {
        let schema = ds.schema();
        let symbols = (0..schema.len())
            .map(|a| {
                schema.attribute(a).domain().map(|domain| {
                    let mut seen = vec![false; domain.len()];
                    for inst in ds.instances() {
                        seen[inst.nominal(a)] = true;
                    }
                    domain
                        .iter()
                        .zip(seen)
                        .filter(|(_, keep)| *keep)
                        .map(|(s, _)| s.clone())
                        .collect()
                })
            })
            .collect();
        Self::build(schema, symbols)
    }

    fn build(schema: &AttributeSchema, symbols: Vec<Option<Vec<String>>>) -> Self {
        let mut offsets = Vec::with_capacity(symbols.len());
        let mut width = 0;
        for s in &symbols {
            offsets.push(width);
            width += s.as_ref().map_or(1, Vec::len);
        }
        let mut enc = OneHotEncoder {
            names: schema.attributes().iter().map(|a| a.name.clone()).collect(),
            symbols,
            slots: Vec::new(),
            offsets,
            width,
        };
        enc.slots = enc.slot_table(schema);
        enc
    }

    fn slot_table(&self, schema: &AttributeSchema) -> Vec<Option<Vec<Option<usize>>>> {
        schema
            .attributes()
            .iter()
            .zip(&self.symbols)
            .map(|(a, known)| {
                let known = known.as_ref()?;
                let domain = a.domain().unwrap_or(&[]);
                Some(domain.iter().map(|s| known.iter().position(|k| k == s)).collect())
            })
            .collect()
    }

    /// Number of output columns.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn output_schema(&self, class_labels: &[String]) -> AttributeSchema {
        let mut attrs = Vec::with_capacity(self.width);
        for (name, known) in self.names.iter().zip(&self.symbols) {
            match known {
                Some(symbols) => attrs.extend(symbols.iter().map(|s| Attribute::numeric(format!("{name}={s}")))),
                None => attrs.push(Attribute::numeric(name.clone())),
            }
        }
        AttributeSchema::new(attrs, class_labels.to_vec()).expect("indicator names are unique")
    }

    fn encode_with(&self, slots: &[Option<Vec<Option<usize>>>], inst: &Instance, unseen: &mut usize) -> Instance {
        let mut out = vec![0.0; self.width];
        for (a, &v) in inst.values.iter().enumerate() {
            let base = self.offsets[a];
            match &slots[a] {
                Some(table) => match table.get(v as usize).copied().flatten() {
                    Some(slot) => out[base + slot] = 1.0,
                    None => *unseen += 1,
                },
                None => out[base] = v,
            }
        }
        Instance::new(out, inst.label)
    }

    /// Encodes an instance of the schema the encoder was built from.
    pub fn encode_instance(&self, inst: &Instance) -> Instance {
        let mut unseen = 0;
        self.encode_with(&self.slots, inst, &mut unseen)
    }

    /// Encodes a dataset, matching symbols by name so its schema may have
    /// grown since the encoder was built.
    pub fn encode(&self, ds: &Dataset) -> Result<Dataset> {
        let schema = ds.schema();
        let same_layout = schema.len() == self.names.len()
            && schema
                .attributes()
                .iter()
                .zip(&self.names)
                .zip(&self.symbols)
                .all(|((a, n), s)| &a.name == n && a.is_nominal() == s.is_some());
        if !same_layout {
            return Err(Error::SchemaMismatch("encoder was built for a different schema".into()));
        }
        let slots = self.slot_table(schema);
        let mut unseen = 0;
        let instances = ds
            .instances()
            .iter()
            .map(|i| self.encode_with(&slots, i, &mut unseen))
            .collect();
        let mut provenance = ds.provenance().to_vec();
        provenance.push(format!("one-hot: {} columns, {unseen} unseen symbols encoded as zero blocks", self.width));
        Ok(Dataset::from_parts(self.output_schema(schema.class_labels()), instances, provenance))
    }
}
