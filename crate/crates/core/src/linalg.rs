//! Sparse exact row reduction.
//!
//! Vectors are `BTreeMap<K, Rational>` with no stored zeros. An [`Echelon`]
//! keeps one row per pivot key, where the pivot is the smallest key of the row
//! and carries coefficient 1. Reducing a vector against it removes every
//! pivot key, so the surviving keys are coordinates in the quotient by the
//! row span.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Bound;

use crate::rational::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

/// `acc += c * v`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(acc: &mut SparseVec<K>, c: &Rational, v: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        add_term(acc, k.clone(), c * x);
    }
}

/// `acc[k] += c`, removing the entry if it cancels.
pub fn add_term<K: Ord>(acc: &mut SparseVec<K>, k: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    use alloc::collections::btree_map::Entry;
    match acc.entry(k) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn scale<K: Ord + Clone>(v: &SparseVec<K>, c: &Rational) -> SparseVec<K> {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (k.clone(), c * x)).collect()
}

#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn row(&self, pivot: &K) -> Option<&SparseVec<K>> {
        self.rows.get(pivot)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&K, &SparseVec<K>)> {
        self.rows.iter()
    }

    /// Adds `v` to the span. Returns `true` if the rank grew.
    pub fn insert(&mut self, mut v: SparseVec<K>) -> bool {
        loop {
            let (lead, c) = match v.iter().next() {
                None => return false,
                Some((k, c)) => (k.clone(), c.clone()),
            };
            match self.rows.get(&lead) {
                Some(row) => axpy(&mut v, &-c, row),
                None => {
                    let inv = c.recip();
                    let row = scale(&v, &inv);
                    self.rows.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Removes every pivot key from `v` by subtracting multiples of rows.
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        let mut cursor: Option<K> = None;
        loop {
            let next = {
                let range = match &cursor {
                    None => v.range::<K, (Bound<&K>, Bound<&K>)>((Bound::Unbounded, Bound::Unbounded)),
                    Some(k) => v.range::<K, (Bound<&K>, Bound<&K>)>((Bound::Excluded(k), Bound::Unbounded)),
                };
                range.filter(|(k, _)| self.rows.contains_key(*k)).map(|(k, c)| (k.clone(), c.clone())).next()
            };
            match next {
                None => return v,
                Some((k, c)) => {
                    axpy(&mut v, &-c, &self.rows[&k]);
                    cursor = Some(k);
                }
            }
        }
    }

    pub fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Back-substitutes so that no row mentions another row's pivot
    /// (reduced row echelon form).
    pub fn fully_reduce(&mut self) {
        let keys: Vec<K> = self.rows.keys().rev().cloned().collect();
        for k in keys {
            let row = self.rows.remove(&k).expect("pivot row");
            let (lead, rest): (SparseVec<K>, SparseVec<K>) = row.into_iter().partition(|(key, _)| *key == k);
            let mut reduced = self.reduce(rest);
            for (key, c) in lead {
                reduced.insert(key, c);
            }
            self.rows.insert(k, reduced);
        }
    }
}

/// Unknown or constant column of an affine system.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AffineKey {
    Var(usize),
    Const,
}

/// Solves `sum_j a_ij x_j + b_i = 0` exactly. Variables are ordered by index;
/// those left free after elimination are set to zero. Returns `None` when the
/// system is inconsistent.
pub fn solve_affine(n_vars: usize, equations: &[(SparseVec<usize>, Rational)]) -> Option<Vec<Rational>> {
    let mut ech: Echelon<AffineKey> = Echelon::new();
    for (lhs, b) in equations {
        let mut row: SparseVec<AffineKey> = lhs.iter().map(|(j, c)| (AffineKey::Var(*j), c.clone())).collect();
        add_term(&mut row, AffineKey::Const, b.clone());
        ech.insert(row);
    }
    if ech.is_pivot(&AffineKey::Const) {
        return None;
    }
    ech.fully_reduce();
    let mut x = alloc::vec![Rational::zero(); n_vars];
    for (p, row) in ech.rows() {
        if let AffineKey::Var(i) = p {
            x[*i] = row.get(&AffineKey::Const).map(|c| -c).unwrap_or_else(Rational::zero);
        }
    }
    Some(x)
}
