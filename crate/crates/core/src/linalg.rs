//! Exact sparse Gaussian elimination over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::scalar::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

fn axpy(target: &mut SparseVec, factor: &Rational, source: &SparseVec) {
    for (&j, v) in source {
        let entry = target.entry(j).or_insert_with(Rational::zero);
        *entry += factor * v;
        if entry.is_zero() {
            target.remove(&j);
        }
    }
}

fn dot(a: &SparseVec, b: &SparseVec) -> Rational {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut acc = Rational::zero();
    for (j, v) in small {
        if let Some(w) = large.get(j) {
            acc += v * w;
        }
    }
    acc
}

/// Reduced row echelon form of a sparse matrix together with the row
/// operations that produced it (`E·M = R`).
#[derive(Clone, Debug)]
pub struct RowReduction {
    rows: usize,
    cols: usize,
    /// Pivot column of the `k`-th reduced row.
    pivots: Vec<usize>,
    reduced: Vec<SparseVec>,
    transform: Vec<SparseVec>,
}

impl RowReduction {
    /// `matrix[i]` is row `i`, keyed by column.
    pub fn new(rows: usize, cols: usize, matrix: Vec<SparseVec>) -> Self {
        assert_eq!(matrix.len(), rows);
        let mut work: Vec<(SparseVec, SparseVec)> = matrix
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let mut e = SparseVec::new();
                e.insert(i, Rational::one());
                (row, e)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            // sparsest row with an entry in this column
            let pick = (rank..rows)
                .filter(|&i| work[i].0.contains_key(&col))
                .min_by_key(|&i| work[i].0.len() + work[i].1.len());
            let Some(p) = pick else { continue };
            work.swap(rank, p);
            let inv = Rational::one() / work[rank].0[&col].clone();
            let (prow, pe) = {
                let (r, e) = &mut work[rank];
                for v in r.values_mut() {
                    *v *= &inv;
                }
                for v in e.values_mut() {
                    *v *= &inv;
                }
                (r.clone(), e.clone())
            };
            for (i, (r, e)) in work.iter_mut().enumerate() {
                if i == rank {
                    continue;
                }
                if let Some(f) = r.get(&col).cloned() {
                    let f = -f;
                    axpy(r, &f, &prow);
                    axpy(e, &f, &pe);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows {
                break;
            }
        }
        let (reduced, transform): (Vec<_>, Vec<_>) = work.into_iter().unzip();
        RowReduction { rows, cols, pivots, reduced, transform }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// A solution of `M x = b` with all free variables zero, or the index
    /// of a transformed row witnessing inconsistency.
    pub fn solve(&self, b: &SparseVec) -> Result<SparseVec, usize> {
        for k in self.rank()..self.rows {
            if !dot(&self.transform[k], b).is_zero() {
                return Err(k);
            }
        }
        let mut x = SparseVec::new();
        for (k, &col) in self.pivots.iter().enumerate() {
            let v = dot(&self.transform[k], b);
            if !v.is_zero() {
                x.insert(col, v);
            }
        }
        Ok(x)
    }

    /// Left-null vector (combination of original rows) behind an
    /// inconsistency reported by [`solve`](Self::solve).
    pub fn certificate(&self, row: usize) -> &SparseVec {
        &self.transform[row]
    }

    pub fn kernel(&self) -> Vec<SparseVec> {
        let pivot_set: BTreeMap<usize, usize> = self.pivots.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_set.contains_key(c)) {
            let mut v = SparseVec::new();
            v.insert(free, Rational::one());
            for (k, &col) in self.pivots.iter().enumerate() {
                if let Some(a) = self.reduced[k].get(&free) {
                    v.insert(col, -a.clone());
                }
            }
            basis.push(v);
        }
        basis
    }
}
