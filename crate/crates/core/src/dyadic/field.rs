use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{check_dim, DyadicIndex, TruncationWindow};
use crate::error::{HerzError, Result};

/// Finite sparse coefficient map `(v, m) ↦ λ_{v,m}`.
///
/// Values are signed reals; absent entries are zero and explicit zeros are
/// never stored. Iteration order is the sorted index order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffField {
    dim: usize,
    entries: BTreeMap<DyadicIndex, f64>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct Record {
    v: u32,
    m: Vec<i64>,
    val: f64,
}

impl CoeffField {
    pub fn new(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(CoeffField { dim, entries: BTreeMap::new() })
    }

    pub fn from_entries<I: IntoIterator<Item = (DyadicIndex, f64)>>(dim: usize, it: I) -> Result<Self> {
        let mut f = Self::new(dim)?;
        for (idx, val) in it {
            f.insert(idx, val)?;
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stores `val` at `idx`, replacing any previous value. Zero removes the entry.
    pub fn insert(&mut self, idx: DyadicIndex, val: f64) -> Result<()> {
        if !val.is_finite() {
            return Err(HerzError::Data(format!("non-finite coefficient {val} at {idx:?}")));
        }
        if self.dim == 1 && idx.m[1] != 0 {
            return Err(HerzError::Data(format!("index {idx:?} has a second coordinate in dimension 1")));
        }
        if val == 0.0 {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, val);
        }
        Ok(())
    }

    pub fn get(&self, idx: &DyadicIndex) -> f64 {
        self.entries.get(idx).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DyadicIndex, &f64)> + '_ {
        self.entries.iter()
    }

    /// Entries at level `v`, in position order.
    pub fn level(&self, v: u32) -> impl Iterator<Item = (&DyadicIndex, &f64)> + '_ {
        let lo = DyadicIndex { v, m: [i64::MIN, i64::MIN] };
        let hi = DyadicIndex { v, m: [i64::MAX, i64::MAX] };
        self.entries.range(lo..=hi)
    }

    pub fn levels(&self) -> BTreeSet<u32> {
        self.entries.keys().map(|k| k.v).collect()
    }

    pub fn max_level(&self) -> Option<u32> {
        self.entries.keys().next_back().map(|k| k.v)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_entries(self.dim, self.entries.iter().map(|(k, v)| (*k, c * v)))
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(HerzError::Data("dimension mismatch in field sum".into()));
        }
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.insert(*k, out.get(k) + v)?;
        }
        Ok(out)
    }

    /// Fails with a window error naming the first index outside `win`.
    pub fn check_window(&self, win: &TruncationWindow) -> Result<()> {
        for idx in self.entries.keys() {
            if !win.contains(idx, self.dim) {
                return Err(HerzError::Window(format!(
                    "index (v = {}, m = {:?}) lies outside the window",
                    idx.v,
                    idx.position(self.dim)
                )));
            }
        }
        Ok(())
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        let header = serde_json::to_string(&Header { dim: self.dim }).expect("header serializes");
        writeln!(w, "{header}")?;
        for (idx, val) in &self.entries {
            let rec = Record { v: idx.v, m: idx.position(self.dim).to_vec(), val: *val };
            writeln!(w, "{}", serde_json::to_string(&rec).expect("record serializes"))?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate().filter(|(_, l)| match l {
            Ok(s) => !s.trim().is_empty(),
            Err(_) => true,
        });
        let (_, first) = lines.next().ok_or_else(|| HerzError::Parse("empty coefficient file".into()))?;
        let header: Header = serde_json::from_str(&first?)
            .map_err(|e| HerzError::Parse(format!("line 1: bad header: {e}")))?;
        let mut field = Self::new(header.dim).map_err(|e| HerzError::Parse(e.to_string()))?;
        for (no, line) in lines {
            let rec: Record = serde_json::from_str(&line?)
                .map_err(|e| HerzError::Parse(format!("line {}: {e}", no + 1)))?;
            if rec.m.len() != header.dim {
                return Err(HerzError::Parse(format!(
                    "line {}: position has {} coordinates, expected {}",
                    no + 1,
                    rec.m.len(),
                    header.dim
                )));
            }
            let idx = DyadicIndex::from_slice(rec.v, &rec.m).expect("length checked");
            field.insert(idx, rec.val).map_err(|e| HerzError::Parse(format!("line {}: {e}", no + 1)))?;
        }
        Ok(field)
    }
}
