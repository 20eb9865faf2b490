use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Instance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttackCategory {
    Dos,
    Probe,
    U2r,
    R2l,
}

impl AttackCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            AttackCategory::Dos => "dos",
            AttackCategory::Probe => "probe",
            AttackCategory::U2r => "u2r",
            AttackCategory::R2l => "r2l",
        }
    }
}

/// Attack label → category, following the category file shipped with the
/// KDD Cup 1999 data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackCategoryMap {
    entries: Vec<(String, AttackCategory)>,
}

impl AttackCategoryMap {
    pub fn kdd99() -> Self {
        use AttackCategory::*;
        let table: [(&str, AttackCategory); 22] = [
            ("back", Dos),
            ("land", Dos),
            ("neptune", Dos),
            ("pod", Dos),
            ("smurf", Dos),
            ("teardrop", Dos),
            ("ipsweep", Probe),
            ("nmap", Probe),
            ("portsweep", Probe),
            ("satan", Probe),
            ("ftp_write", R2l),
            ("guess_passwd", R2l),
            ("imap", R2l),
            ("multihop", R2l),
            ("phf", R2l),
            ("spy", R2l),
            ("warezclient", R2l),
            ("warezmaster", R2l),
            ("buffer_overflow", U2r),
            ("loadmodule", U2r),
            ("perl", U2r),
            ("rootkit", U2r),
        ];
        AttackCategoryMap {
            entries: table.iter().map(|&(l, c)| (l.to_owned(), c)).collect(),
        }
    }

    pub fn category(&self, label: &str) -> Option<AttackCategory> {
        self.entries.iter().find(|(l, _)| l == label).map(|&(_, c)| c)
    }

    /// Attack labels in table order.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for AttackCategoryMap {
    fn default() -> Self {
        Self::kdd99()
    }
}

/// The three class relabeling schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreprocessVariant {
    /// normal plus the four attack categories.
    V1,
    /// normal versus attack.
    V2,
    /// the 23 raw labels.
    V3,
}

impl PreprocessVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            PreprocessVariant::V1 => "v1",
            PreprocessVariant::V2 => "v2",
            PreprocessVariant::V3 => "v3",
        }
    }

    pub fn target_labels(self, map: &AttackCategoryMap) -> Vec<String> {
        match self {
            PreprocessVariant::V1 => ["normal", "dos", "probe", "u2r", "r2l"].map(String::from).to_vec(),
            PreprocessVariant::V2 => vec!["normal".into(), "attack".into()],
            PreprocessVariant::V3 => {
                let mut labels = vec!["normal".to_owned()];
                let mut attacks: Vec<&str> = map.labels().collect();
                attacks.sort_unstable();
                labels.extend(attacks.into_iter().map(String::from));
                labels
            }
        }
    }
}

impl fmt::Display for PreprocessVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PreprocessVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "v1" | "1" => Ok(PreprocessVariant::V1),
            "v2" | "2" => Ok(PreprocessVariant::V2),
            "v3" | "3" => Ok(PreprocessVariant::V3),
            _ => Err(Error::Config(format!("unknown variant {s:?}"))),
        }
    }
}

/// Relabels every instance under `variant`; features and order are kept.
///
/// Under V3, labels outside the 23 known ones are appended after them in
/// first-seen order.
pub fn apply_variant(ds: &Dataset, variant: PreprocessVariant, map: &AttackCategoryMap) -> Result<Dataset> {
    let mut targets = variant.target_labels(map);
    let mut remap = Vec::with_capacity(ds.num_classes());
    for label in ds.schema().class_labels() {
        let target = match variant {
            PreprocessVariant::V3 => label.as_str(),
            _ if label == "normal" => "normal",
            PreprocessVariant::V1 => match map.category(label) {
                Some(c) => c.as_str(),
                None => return Err(Error::UnknownLabel(label.clone())),
            },
            PreprocessVariant::V2 => match map.category(label) {
                Some(_) => "attack",
                None => return Err(Error::UnknownLabel(label.clone())),
            },
        };
        let idx = match targets.iter().position(|t| t == target) {
            Some(i) => i,
            None => {
                targets.push(target.to_owned());
                targets.len() - 1
            }
        };
        remap.push(idx);
    }
    let instances = ds
        .instances()
        .iter()
        .map(|inst| Instance::new(inst.values.clone(), remap[inst.label]))
        .collect();
    let mut provenance = ds.provenance().to_vec();
    provenance.push(format!("variant: {variant}"));
    Ok(Dataset::from_parts(ds.schema().with_class_labels(targets), instances, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Attribute, AttributeSchema};

    fn labelled(labels: &[&str]) -> Dataset {
        let mut schema = AttributeSchema::new(vec![Attribute::numeric("x")], vec![]).unwrap();
        let instances = labels
            .iter()
            .enumerate()
            .map(|(i, l)| Instance::new(vec![i as f64], schema.intern_label(l)))
            .collect();
        Dataset::new(schema, instances, vec![]).unwrap()
    }

    fn labels_of(ds: &Dataset) -> Vec<&str> {
        ds.instances()
            .iter()
            .map(|i| ds.schema().class_labels()[i.label].as_str())
            .collect()
    }

    #[test]
    fn map_covers_22_attacks_in_four_categories() {
        let m = AttackCategoryMap::kdd99();
        assert_eq!(m.len(), 22);
        assert_eq!(m.category("normal"), None);
        assert_eq!(m.category("smurf"), Some(AttackCategory::Dos));
        assert_eq!(m.category("satan"), Some(AttackCategory::Probe));
        assert_eq!(m.category("perl"), Some(AttackCategory::U2r));
        assert_eq!(m.category("spy"), Some(AttackCategory::R2l));
    }

    #[test]
    fn relabels_per_variant() {
        let ds = labelled(&["smurf", "normal", "perl"]);
        let m = AttackCategoryMap::kdd99();
        let v1 = apply_variant(&ds, PreprocessVariant::V1, &m).unwrap();
        assert_eq!(labels_of(&v1), ["dos", "normal", "u2r"]);
        assert_eq!(v1.schema().class_labels(), ["normal", "dos", "probe", "u2r", "r2l"]);
        let v2 = apply_variant(&ds, PreprocessVariant::V2, &m).unwrap();
        assert_eq!(labels_of(&v2), ["attack", "normal", "attack"]);
        let v3 = apply_variant(&ds, PreprocessVariant::V3, &m).unwrap();
        assert_eq!(labels_of(&v3), ["smurf", "normal", "perl"]);
        assert_eq!(v3.num_classes(), 23);
        assert_eq!(v3.instances()[0].values, ds.instances()[0].values);
    }

    #[test]
    fn unknown_attack_rejected_for_v1_v2_only() {
        let ds = labelled(&["mailbomb"]);
        let m = AttackCategoryMap::kdd99();
        assert!(matches!(apply_variant(&ds, PreprocessVariant::V1, &m), Err(Error::UnknownLabel(_))));
        assert!(matches!(apply_variant(&ds, PreprocessVariant::V2, &m), Err(Error::UnknownLabel(_))));
        let v3 = apply_variant(&ds, PreprocessVariant::V3, &m).unwrap();
        assert_eq!(v3.num_classes(), 24);
        assert_eq!(labels_of(&v3), ["mailbomb"]);
    }

    #[test]
    fn v1_collapsed_equals_v2() {
        let m = AttackCategoryMap::kdd99();
        let mut all: Vec<&str> = m.labels().collect();
        all.push("normal");
        all.extend(["normal", "smurf", "back"]);
        let ds = labelled(&all);
        let v1 = apply_variant(&ds, PreprocessVariant::V1, &m).unwrap();
        let v2 = apply_variant(&ds, PreprocessVariant::V2, &m).unwrap();
        let collapsed: Vec<&str> = labels_of(&v1)
            .into_iter()
            .map(|l| if l == "normal" { "normal" } else { "attack" })
            .collect();
        assert_eq!(collapsed, labels_of(&v2));
    }

    #[test]
    fn parse_variant_ids() {
        assert_eq!("v2".parse::<PreprocessVariant>().unwrap(), PreprocessVariant::V2);
        assert!("v4".parse::<PreprocessVariant>().is_err());
    }
}
