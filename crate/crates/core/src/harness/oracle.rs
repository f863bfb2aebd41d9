//! Reference semantics: an ordered set of `(key, insert ordinal)`.

use std::collections::BTreeSet;

use super::trace::TraceOp;
use super::HarnessError;

/// An extracted or peeked element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub key: i64,
    pub reference: usize,
}

#[derive(Clone, Debug, Default)]
pub struct OracleHeap {
    set: BTreeSet<(i64, usize)>,
    current: Vec<Option<i64>>,
}

impl OracleHeap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// Key of a live reference.
    pub fn current_key(&self, reference: usize) -> Option<i64> {
        self.current.get(reference).copied().flatten()
    }

    pub fn min(&self) -> Option<Entry> {
        self.set
            .first()
            .map(|&(key, reference)| Entry { key, reference })
    }

    /// Applies one op; delete-min and find-min return the minimum entry.
    pub fn apply(&mut self, op: &TraceOp) -> Result<Option<Entry>, HarnessError> {
        match *op {
            TraceOp::Insert(key) => {
                let reference = self.current.len();
                self.current.push(Some(key));
                self.set.insert((key, reference));
                Ok(None)
            }
            TraceOp::Decrease { reference, key } => {
                let cur = self
                    .current_key(reference)
                    .ok_or(HarnessError::InvalidRef { reference })?;
                if key >= cur {
                    return Err(HarnessError::KeyNotSmaller { reference });
                }
                self.set.remove(&(cur, reference));
                self.set.insert((key, reference));
                self.current[reference] = Some(key);
                Ok(None)
            }
            TraceOp::DeleteMin => {
                let Some((key, reference)) = self.set.pop_first() else {
                    return Ok(None);
                };
                self.current[reference] = None;
                Ok(Some(Entry { key, reference }))
            }
            TraceOp::FindMin => Ok(self.min()),
        }
    }
}
