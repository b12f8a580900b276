//! Exact walk counting in the graph of a multifunction.
//!
//! A `k`-path from `x` to `y` is a sequence of `k` edges, not necessarily
//! distinct, so the number of them is entry `(x, y)` of the `k`-th power of
//! the 0/1 adjacency matrix. Counts use arbitrary precision integers.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::mf::{GroundSet, Multifunction};
use crate::{Error, Execution, PointSet, Result};

/// Powers up to this exponent are built by direct multiplication; larger ones
/// by repeated squaring.
const DIRECT_POWER_MAX: u64 = 4;

/// Number of `k`-paths between every ordered pair of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCountMatrix {
    k: u64,
    ground: Arc<GroundSet>,
    entries: Vec<Vec<BigUint>>,
}

impl PathCountMatrix {
    pub fn identity(ground: Arc<GroundSet>) -> Self {
        let n = ground.size();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect())
            .collect();
        PathCountMatrix { k: 0, ground, entries }
    }

    pub fn adjacency(f: &Multifunction) -> Self {
        let n = f.size();
        let entries = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| if f.image_of(x).contains(y) { BigUint::one() } else { BigUint::zero() })
                    .collect()
            })
            .collect();
        PathCountMatrix { k: 1, ground: f.ground().clone(), entries }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn ground(&self) -> &Arc<GroundSet> {
        &self.ground
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// `#P_F(x, y; k)`.
    pub fn entry(&self, x: usize, y: usize) -> &BigUint {
        &self.entries[x][y]
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.entries
    }

    /// `#P_F(x, X; k)`.
    pub fn row_sum(&self, x: usize) -> BigUint {
        self.entries[x].iter().sum()
    }

    /// `#P_F(X, y; k)`.
    pub fn column_sum(&self, y: usize) -> BigUint {
        self.entries.iter().map(|row| &row[y]).sum()
    }

    /// `#P_F(A, B; k)`.
    pub fn block_sum(&self, from: &PointSet, to: &PointSet) -> BigUint {
        from.iter()
            .flat_map(|x| to.iter().map(move |y| (x, y)))
            .map(|(x, y)| &self.entries[x][y])
            .sum()
    }

    /// Matrix product; the path length of the result is the sum of the two.
    pub fn multiply(&self, other: &PathCountMatrix, exec: Execution) -> PathCountMatrix {
        assert_eq!(self.size(), other.size(), "matrix dimensions differ");
        let n = self.size();
        let entries = exec.map_range(0..n, |i| {
            let mut row = vec![BigUint::zero(); n];
            for (l, a) in self.entries[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in other.entries[l].iter().enumerate() {
                    if !b.is_zero() {
                        row[j] += a * b;
                    }
                }
            }
            row
        });
        PathCountMatrix { k: self.k + other.k, ground: self.ground.clone(), entries }
    }
}

/// The `k`-th power of the adjacency matrix of `F`.
pub fn path_matrix(f: &Multifunction, k: u64) -> PathCountMatrix {
    path_matrix_with(f, k, Execution::default())
}

pub fn path_matrix_with(f: &Multifunction, k: u64, exec: Execution) -> PathCountMatrix {
    let adjacency = PathCountMatrix::adjacency(f);
    if k == 0 {
        return PathCountMatrix::identity(f.ground().clone());
    }
    if k <= DIRECT_POWER_MAX {
        let mut acc = adjacency.clone();
        for _ in 1..k {
            acc = acc.multiply(&adjacency, exec);
        }
        return acc;
    }
    let mut result: Option<PathCountMatrix> = None;
    let mut base = adjacency;
    let mut e = k;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.multiply(&base, exec),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.multiply(&base, exec);
    }
    result.expect("k > 0")
}

/// `#P_F(A, B; k)` for `k ≥ 1`.
pub fn count_paths(f: &Multifunction, from: &PointSet, to: &PointSet, k: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::ZeroCount("path length"));
    }
    f.ground().check_set(from)?;
    f.ground().check_set(to)?;
    Ok(path_matrix(f, k).block_sum(from, to))
}
