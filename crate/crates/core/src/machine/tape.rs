use std::collections::BTreeMap;

use crate::semiring::{SemiringId, Value};

/// Sparse bi-infinite tape. Logical coordinate `i` is stored under key
/// `i + offset`, so a shift only moves the offset. Zeros are never stored,
/// which keeps structural equality meaningful.
#[derive(Debug, Clone)]
pub struct Tape {
    semiring: SemiringId,
    offset: i64,
    cells: BTreeMap<i64, Value>,
    zero: Value,
}

impl Tape {
    pub fn new(semiring: SemiringId) -> Tape {
        Tape {
            semiring,
            offset: 0,
            cells: BTreeMap::new(),
            zero: semiring.zero(),
        }
    }

    pub fn semiring(&self) -> SemiringId {
        self.semiring
    }

    pub fn get(&self, i: i64) -> &Value {
        self.cells.get(&(i + self.offset)).unwrap_or(&self.zero)
    }

    pub fn set(&mut self, i: i64, v: Value) {
        let key = i + self.offset;
        if v.is_zero() {
            self.cells.remove(&key);
        } else {
            self.cells.insert(key, v);
        }
    }

    /// σℓ: the new cell i holds the old cell i+1.
    pub fn shift_left(&mut self) {
        self.offset += 1;
    }

    /// σr: the new cell i holds the old cell i-1.
    pub fn shift_right(&mut self) {
        self.offset -= 1;
    }

    /// Nonzero cells in logical coordinates, ascending.
    pub fn nonzero(&self) -> Vec<(i64, Value)> {
        self.cells
            .iter()
            .map(|(k, v)| (k - self.offset, v.clone()))
            .collect()
    }

    /// Smallest window `[lo, hi]` holding every nonzero cell.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = self.cells.keys().next()?;
        let hi = self.cells.keys().next_back()?;
        Some((lo - self.offset, hi - self.offset))
    }

    /// Cells `lo..=hi` as a dense vector.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<Value> {
        (lo..=hi).map(|i| self.get(i).clone()).collect()
    }

    pub fn values(&self) -> impl Iterator<Item = &Value> {
        self.cells.values()
    }
}

impl PartialEq for Tape {
    fn eq(&self, other: &Tape) -> bool {
        self.semiring == other.semiring && self.nonzero() == other.nonzero()
    }
}

impl Eq for Tape {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifts_reindex_lazily() {
        let mut t = Tape::new(SemiringId::Natural);
        t.set(1, Value::nat(5));
        t.set(-1, Value::nat(1));
        let before = t.clone();
        t.shift_left();
        assert_eq!(t.get(0), &Value::nat(5));
        assert_eq!(t.get(-2), &Value::nat(1));
        t.shift_right();
        assert_eq!(t, before);
    }

    #[test]
    fn zeros_are_not_stored() {
        let mut t = Tape::new(SemiringId::Natural);
        t.set(3, Value::nat(2));
        t.set(3, Value::nat(0));
        assert_eq!(t, Tape::new(SemiringId::Natural));
        assert_eq!(t.support(), None);
    }
}
