//! JSON file formats. Every arbitrary-precision integer is written as a
//! decimal string; output ordering is deterministic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abgroup::FinGenAbGroup;
use crate::fields::{FieldSpec, SyntheticSpec};
use crate::kdelta::Label;
use crate::reconstruct::{Discrepancy, FieldComparison, InvariantBundle, ReconstructionReport};
use crate::{Error, Result};

pub const BUNDLE_VERSION: &str = "kclass-bundle/1";
pub const REPORT_VERSION: &str = "kclass-report/1";
pub const COMPARISON_VERSION: &str = "kclass-comparison/1";

/// Big integers as decimal strings. Plain JSON integers are accepted on input.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum Repr {
        Str(String),
        Int(i64),
    }

    impl Repr {
        pub(crate) fn into_bigint<E: serde::de::Error>(self) -> Result<BigInt, E> {
            match self {
                Repr::Str(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| E::custom(format!("invalid decimal integer {s:?}"))),
                Repr::Int(i) => Ok(BigInt::from(i)),
            }
        }
    }

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Repr::deserialize(d)?.into_bigint()
    }
}

pub mod decimal_vec {
    use num_bigint::BigInt;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::decimal::Repr;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(Repr::into_bigint)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleEntry {
    pub labels: Vec<Label>,
    #[serde(with = "decimal_vec")]
    pub factors: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleFile {
    pub version: String,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Label>>,
    pub entries: Vec<BundleEntry>,
}

impl BundleFile {
    /// Entries ordered by size, then lexicographically.
    pub fn from_bundle(b: &InvariantBundle) -> Self {
        let mut entries: Vec<BundleEntry> = b
            .snapshot()
            .into_iter()
            .map(|(labels, g)| BundleEntry {
                labels,
                factors: g.factors().to_vec(),
            })
            .collect();
        entries.sort_by(|x, y| (x.labels.len(), &x.labels).cmp(&(y.labels.len(), &y.labels)));
        BundleFile {
            version: BUNDLE_VERSION.into(),
            rank: b.rank(),
            labels: Some(b.labels().to_vec()),
            entries,
        }
    }

    /// A closed bundle. When `labels` is absent the label set is read off
    /// the singleton entries.
    pub fn into_bundle(self) -> Result<InvariantBundle> {
        if self.version != BUNDLE_VERSION {
            return Err(Error::MalformedBundle(format!(
                "unsupported version {:?}, expected {BUNDLE_VERSION:?}",
                self.version
            )));
        }
        let labels = self.labels.unwrap_or_else(|| {
            self.entries
                .iter()
                .filter(|e| e.labels.len() == 1)
                .map(|e| e.labels[0])
                .collect()
        });
        let mut map = BTreeMap::new();
        for e in self.entries {
            let g = FinGenAbGroup::new(e.factors)
                .map_err(|err| Error::MalformedBundle(format!("entry {:?}: {err}", e.labels)))?;
            if map.insert(e.labels.clone(), g).is_some() {
                return Err(Error::MalformedBundle(format!("duplicate entry {:?}", e.labels)));
            }
        }
        InvariantBundle::from_entries(self.rank, labels, map)
    }
}

pub fn bundle_to_json(b: &InvariantBundle) -> String {
    serde_json::to_string_pretty(&BundleFile::from_bundle(b)).expect("bundle serializes")
}

pub fn bundle_from_json(s: &str) -> Result<InvariantBundle> {
    let file: BundleFile =
        serde_json::from_str(s).map_err(|e| Error::MalformedBundle(e.to_string()))?;
    file.into_bundle()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormEntry {
    pub label: Label,
    #[serde(with = "decimal")]
    pub norm: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaEntry {
    pub bound: usize,
    #[serde(with = "decimal_vec")]
    pub norms: Vec<BigInt>,
    pub coefficients: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub name: String,
    pub passed: bool,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: String,
    pub class_number: usize,
    #[serde(with = "decimal_vec")]
    pub class_group: Vec<BigInt>,
    pub norms: Vec<NormEntry>,
    pub zeta: ZetaEntry,
    pub verdicts: Vec<VerdictEntry>,
    pub passed: bool,
}

impl From<&ReconstructionReport> for ReportFile {
    fn from(r: &ReconstructionReport) -> Self {
        ReportFile {
            version: REPORT_VERSION.into(),
            class_number: r.class_number,
            class_group: r.class_group.factors().to_vec(),
            norms: r
                .norms
                .iter()
                .map(|(l, n)| NormEntry {
                    label: *l,
                    norm: n.clone(),
                })
                .collect(),
            zeta: ZetaEntry {
                bound: r.zeta.bound,
                norms: r.zeta.norms.clone(),
                coefficients: r.zeta.coefficients.clone(),
            },
            verdicts: r
                .verdicts
                .iter()
                .map(|v| VerdictEntry {
                    name: v.name.clone(),
                    passed: v.passed,
                    message: v.message.clone(),
                })
                .collect(),
            passed: r.passed(),
        }
    }
}

pub fn report_to_json(r: &ReconstructionReport) -> String {
    serde_json::to_string_pretty(&ReportFile::from(r)).expect("report serializes")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiscrepancyEntry {
    Zeta {
        n: usize,
        left: u64,
        right: u64,
    },
    ClassGroup {
        #[serde(with = "decimal_vec")]
        left: Vec<BigInt>,
        #[serde(with = "decimal_vec")]
        right: Vec<BigInt>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonFile {
    pub version: String,
    pub bound: usize,
    pub equivalent: bool,
    pub discrepancy: Option<DiscrepancyEntry>,
    pub left: ReportFile,
    pub right: ReportFile,
}

impl From<&FieldComparison> for ComparisonFile {
    fn from(c: &FieldComparison) -> Self {
        ComparisonFile {
            version: COMPARISON_VERSION.into(),
            bound: c.bound,
            equivalent: c.equivalent(),
            discrepancy: c.discrepancy.as_ref().map(|d| match d {
                Discrepancy::Zeta { n, left, right } => DiscrepancyEntry::Zeta {
                    n: *n,
                    left: *left,
                    right: *right,
                },
                Discrepancy::ClassGroup { left, right } => DiscrepancyEntry::ClassGroup {
                    left: left.factors().to_vec(),
                    right: right.factors().to_vec(),
                },
            }),
            left: ReportFile::from(&c.left),
            right: ReportFile::from(&c.right),
        }
    }
}

pub fn synthetic_spec_from_json(s: &str) -> Result<FieldSpec> {
    let spec: SyntheticSpec = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(FieldSpec::Synthetic(spec))
}

pub fn synthetic_spec_to_json(spec: &SyntheticSpec) -> String {
    serde_json::to_string_pretty(spec).expect("spec serializes")
}
