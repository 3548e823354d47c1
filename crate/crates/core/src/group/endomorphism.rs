use std::sync::Arc;

use super::{FiniteAbelianGroup, GroupElement, Subgroup};
use crate::error::{Error, Result};

/// An endomorphism given by an integer matrix acting on coordinates:
/// `(a x)_i = sum_j a_ij x_j mod n_i`.
///
/// The matrix is well defined on residues iff `n_j * a_ij = 0 mod n_i`.
/// The induced map on element indices is tabulated at construction, which
/// also settles whether the map is a bijection.
#[derive(Clone, Debug)]
pub struct Endomorphism {
    group: FiniteAbelianGroup,
    matrix: Vec<Vec<u64>>,
    table: Arc<Vec<u32>>,
    is_auto: bool,
}

impl PartialEq for Endomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.matrix == other.matrix
    }
}

impl Eq for Endomorphism {}

impl Endomorphism {
    /// Reduces row `i` modulo `n_i` and checks the compatibility congruences.
    pub fn new(group: &FiniteAbelianGroup, matrix: &[Vec<i64>]) -> Result<Self> {
        let k = group.rank();
        if matrix.len() != k || matrix.iter().any(|r| r.len() != k) {
            return Err(Error::MatrixShape {
                rows: matrix.len(),
                cols: matrix.first().map_or(0, |r| r.len()),
                factors: k,
            });
        }
        let n = group.cyclic_orders();
        let mut reduced = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let a = matrix[i][j].rem_euclid(n[i] as i64) as u64;
                if (n[j] as u128 * a as u128) % n[i] as u128 != 0 {
                    return Err(Error::IncompatibleEntry { i, j, value: a });
                }
                reduced[i][j] = a;
            }
        }
        Ok(Self::from_reduced(group, reduced))
    }

    fn from_reduced(group: &FiniteAbelianGroup, matrix: Vec<Vec<u64>>) -> Self {
        let order = group.order() as usize;
        let mut table = Vec::with_capacity(order);
        let mut hit = vec![false; order];
        let mut image_size = 0usize;
        for x in group.elements() {
            let y = apply_matrix(group, &matrix, &x);
            let yi = group.index_of(&y);
            if !hit[yi] {
                hit[yi] = true;
                image_size += 1;
            }
            table.push(yi as u32);
        }
        Self {
            group: group.clone(),
            matrix,
            table: Arc::new(table),
            is_auto: image_size == order,
        }
    }

    pub fn identity(group: &FiniteAbelianGroup) -> Self {
        Self::scalar(group, 1)
    }

    /// Multiplication by the integer `n`.
    pub fn scalar(group: &FiniteAbelianGroup, n: i64) -> Self {
        let k = group.rank();
        let matrix = (0..k)
            .map(|i| {
                let mut row = vec![0u64; k];
                row[i] = n.rem_euclid(group.cyclic_orders()[i] as i64) as u64;
                row
            })
            .collect();
        Self::from_reduced(group, matrix)
    }

    pub fn negation(group: &FiniteAbelianGroup) -> Self {
        Self::scalar(group, -1)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    /// Whether the induced map on elements is a bijection.
    pub fn is_automorphism(&self) -> bool {
        self.is_auto
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.group.check(x)?;
        Ok(self.group.element_at(self.apply_idx(self.group.index_of(x))))
    }

    pub fn apply_idx(&self, x: usize) -> usize {
        self.table[x] as usize
    }

    pub fn image_size(&self) -> usize {
        let mut hit = vec![false; self.group.order() as usize];
        self.table.iter().for_each(|&y| hit[y as usize] = true);
        hit.iter().filter(|&&h| h).count()
    }

    /// `{ x : a x = 0 }` by enumeration.
    pub fn kernel(&self) -> Subgroup {
        let members = self
            .table
            .iter()
            .enumerate()
            .filter(|(_, &y)| y == 0)
            .map(|(x, _)| x);
        Subgroup::from_indices(&self.group, members).expect("kernel is a subgroup")
    }

    /// Image `a(X)` as a subgroup.
    pub fn image(&self) -> Subgroup {
        let members: std::collections::BTreeSet<usize> = self.table.iter().map(|&y| y as usize).collect();
        Subgroup::from_indices(&self.group, members).expect("image is a subgroup")
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `self . other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let k = self.group.rank();
        let n = self.group.cyclic_orders();
        let mut m = vec![vec![0u64; k]; k];
        for (i, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                let mut acc: u128 = 0;
                for j in 0..k {
                    acc += self.matrix[i][j] as u128 * other.matrix[j][c] as u128;
                }
                *entry = (acc % n[i] as u128) as u64;
            }
        }
        Ok(Self::from_reduced(&self.group, m))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let n = self.group.cyclic_orders();
        let m = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .enumerate()
            .map(|(i, (r, s))| r.iter().zip(s).map(|(&a, &b)| (a + b) % n[i]).collect())
            .collect();
        Ok(Self::from_reduced(&self.group, m))
    }

    /// Multiplies every entry by `c`.
    pub fn scaled(&self, c: i64) -> Self {
        let n = self.group.cyclic_orders();
        let m = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let f = c.rem_euclid(n[i] as i64) as u128;
                r.iter().map(|&a| ((a as u128 * f) % n[i] as u128) as u64).collect()
            })
            .collect();
        Self::from_reduced(&self.group, m)
    }

    /// The inverse automorphism, read off from the inverse permutation at the
    /// standard generators.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_auto {
            return Err(Error::NotAutomorphism);
        }
        let g = &self.group;
        let mut inverse = vec![0usize; g.order() as usize];
        for (x, &y) in self.table.iter().enumerate() {
            inverse[y as usize] = x;
        }
        let k = g.rank();
        let mut m = vec![vec![0u64; k]; k];
        for c in 0..k {
            let mut e = vec![0u64; k];
            e[c] = 1;
            let pre = g.element_at(inverse[g.index_of(&GroupElement(e))]);
            for (i, row) in m.iter_mut().enumerate() {
                row[c] = pre.coords()[i];
            }
        }
        Ok(Self::from_reduced(g, m))
    }

    /// The adjoint on the dual, characterised by `(a x, y) = (x, a~ y)`.
    ///
    /// Entry-wise `a~_ji = a_ij * n_j / n_i mod n_j`; compatibility makes the
    /// division exact.
    pub fn adjoint(&self) -> Self {
        let n = self.group.cyclic_orders();
        let k = n.len();
        let mut m = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let num = self.matrix[i][j] as u128 * n[j] as u128;
                debug_assert_eq!(num % n[i] as u128, 0);
                m[j][i] = ((num / n[i] as u128) % n[j] as u128) as u64;
            }
        }
        Self::from_reduced(&self.group, m)
    }
}

fn apply_matrix(group: &FiniteAbelianGroup, matrix: &[Vec<u64>], x: &GroupElement) -> GroupElement {
    let n = group.cyclic_orders();
    GroupElement(
        matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let acc: u128 = row.iter().zip(x.coords()).map(|(&a, &c)| a as u128 * c as u128).sum();
                (acc % n[i] as u128) as u64
            })
            .collect(),
    )
}
