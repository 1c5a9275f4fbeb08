use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::abgroup::FinGenAbGroup;
use crate::kdelta::{quotient_delta, ClassGroupModel, Label, PrimeIdealDatum};
use crate::{Error, Result};

type Source = Arc<dyn Fn(&[Label]) -> Result<FinGenAbGroup> + Send + Sync>;

/// Opaque map from finite label sets `F` to the isomorphism type of `Δ/Δ_F`.
///
/// Labels carry no arithmetic meaning. A bundle is either closed (every
/// entry was supplied up front, e.g. read from a file) or lazy: it keeps a
/// hidden evaluator and memoizes entries as they are requested. Reads take a
/// shared lock and inserts an exclusive one, so a bundle may be queried from
/// several threads.
pub struct InvariantBundle {
    rank: usize,
    labels: Vec<Label>,
    entries: RwLock<BTreeMap<Vec<Label>, FinGenAbGroup>>,
    source: Option<Source>,
}

impl fmt::Debug for InvariantBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantBundle")
            .field("rank", &self.rank)
            .field("labels", &self.labels)
            .field("entries", &self.snapshot().len())
            .field("lazy", &self.source.is_some())
            .finish()
    }
}

impl InvariantBundle {
    /// A closed bundle. Checks that `rank ≥ 1`, that every entry only uses
    /// declared labels, and that the `∅` entry and every singleton are present.
    pub fn from_entries(
        rank: usize,
        labels: Vec<Label>,
        entries: BTreeMap<Vec<Label>, FinGenAbGroup>,
    ) -> Result<Self> {
        let labels = normalize(&labels);
        let known: BTreeSet<Label> = labels.iter().copied().collect();
        let mut normalized = BTreeMap::new();
        for (set, group) in entries {
            let key = normalize(&set);
            if key.len() != set.len() {
                return Err(Error::MalformedBundle(format!("label set {set:?} repeats a label")));
            }
            if let Some(l) = key.iter().find(|l| !known.contains(l)) {
                return Err(Error::UnknownLabel(l.to_string()));
            }
            if normalized.insert(key, group).is_some() {
                return Err(Error::MalformedBundle(format!("duplicate entry for {set:?}")));
            }
        }
        let bundle = InvariantBundle {
            rank,
            labels,
            entries: RwLock::new(normalized),
            source: None,
        };
        bundle.check_shape()?;
        Ok(bundle)
    }

    fn check_shape(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::MalformedBundle("rank must be at least 1".into()));
        }
        let entries = self.entries.read().expect("bundle lock poisoned");
        if !entries.contains_key(&Vec::new()) {
            return Err(Error::MissingEntry(Vec::new()));
        }
        if let Some(l) = self.labels.iter().find(|l| !entries.contains_key(&vec![**l])) {
            return Err(Error::MissingEntry(vec![*l]));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn is_lazy(&self) -> bool {
        self.source.is_some()
    }

    /// The entry for `F`, computing and memoizing it in a lazy bundle.
    pub fn entry(&self, f: &[Label]) -> Result<FinGenAbGroup> {
        let key = normalize(f);
        if let Some(l) = key.iter().find(|l| self.labels.binary_search(l).is_err()) {
            return Err(Error::UnknownLabel(l.to_string()));
        }
        if let Some(g) = self.entries.read().expect("bundle lock poisoned").get(&key) {
            return Ok(g.clone());
        }
        let source = self.source.as_ref().ok_or_else(|| Error::MissingEntry(key.clone()))?;
        let g = source(&key)?;
        self.entries
            .write()
            .expect("bundle lock poisoned")
            .entry(key)
            .or_insert(g.clone());
        Ok(g)
    }

    /// Every entry computed so far.
    pub fn snapshot(&self) -> BTreeMap<Vec<Label>, FinGenAbGroup> {
        self.entries.read().expect("bundle lock poisoned").clone()
    }

    /// A closed copy holding exactly the entries computed so far.
    pub fn freeze(&self) -> InvariantBundle {
        InvariantBundle {
            rank: self.rank,
            labels: self.labels.clone(),
            entries: RwLock::new(self.snapshot()),
            source: None,
        }
    }
}

pub(crate) fn normalize(f: &[Label]) -> Vec<Label> {
    let mut v = f.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Evaluates `Δ/Δ_F` by brute force for `∅`, every singleton and every
/// requested subset, then hides the arithmetic behind opaque labels. The
/// returned bundle stays lazy: further subsets are evaluated on request.
pub fn build_bundle(
    cl: &ClassGroupModel,
    primes: &[PrimeIdealDatum],
    subsets: &[Vec<Label>],
) -> Result<InvariantBundle> {
    let mut by_label = HashMap::new();
    for p in primes {
        if by_label.insert(p.label, p.clone()).is_some() {
            return Err(Error::InvalidArgument(format!("label {} used twice", p.label)));
        }
    }
    let hidden = Arc::new((cl.clone(), by_label));
    let source: Source = {
        let hidden = Arc::clone(&hidden);
        Arc::new(move |f: &[Label]| {
            let (cl, by_label) = &*hidden;
            let data = f
                .iter()
                .map(|l| by_label.get(l).cloned().ok_or_else(|| Error::UnknownLabel(l.to_string())))
                .collect::<Result<Vec<_>>>()?;
            Ok(quotient_delta(cl, &data)?.group)
        })
    };
    let labels = normalize(&primes.iter().map(|p| p.label).collect::<Vec<_>>());
    let bundle = InvariantBundle {
        rank: cl.order(),
        labels,
        entries: RwLock::new(BTreeMap::new()),
        source: Some(source),
    };
    bundle.entry(&[])?;
    for l in bundle.labels.clone() {
        bundle.entry(&[l])?;
    }
    for s in subsets {
        bundle.entry(s)?;
    }
    Ok(bundle)
}
