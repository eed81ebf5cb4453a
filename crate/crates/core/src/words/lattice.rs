use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent-sum vector of a word; one coordinate per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianVector(Vec<i64>);

impl AbelianVector {
    pub fn new(coords: Vec<i64>) -> Self {
        AbelianVector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        AbelianVector(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        AbelianVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        AbelianVector(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add for &AbelianVector {
    type Output = AbelianVector;
    fn add(self, rhs: &AbelianVector) -> AbelianVector {
        assert_eq!(self.dim(), rhs.dim());
        AbelianVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &AbelianVector {
    type Output = AbelianVector;
    fn sub(self, rhs: &AbelianVector) -> AbelianVector {
        assert_eq!(self.dim(), rhs.dim());
        AbelianVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AbelianVector {
    type Output = AbelianVector;
    fn neg(self) -> AbelianVector {
        AbelianVector(self.0.iter().map(|a| -a).collect())
    }
}

/// Integer lattice spanned by a list of vectors, kept alongside its Hermite
/// normal form.
///
/// The normal form is stored row-wise (each spanning vector is a row): rows are
/// in echelon form with positive pivots, and entries above each pivot are
/// reduced into `[0, pivot)`. This is the transpose of the column form and
/// spans the same lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerLattice {
    dim: usize,
    basis_vectors: Vec<AbelianVector>,
    normal_form: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl IntegerLattice {
    pub fn new(dim: usize, basis_vectors: Vec<AbelianVector>) -> Result<Self> {
        for v in &basis_vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        let rows: Vec<Vec<i128>> = basis_vectors
            .iter()
            .map(|v| v.coords().iter().map(|&c| c as i128).collect())
            .collect();
        let echelon = hermite_rows(rows, dim, None);
        let pivots = echelon
            .iter()
            .map(|r| r.iter().position(|&c| c != 0).unwrap())
            .collect();
        let normal_form = echelon
            .into_iter()
            .map(|r| r.into_iter().map(to_i64).collect())
            .collect();
        Ok(IntegerLattice {
            dim,
            basis_vectors,
            normal_form,
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.normal_form.len()
    }

    pub fn basis_vectors(&self) -> &[AbelianVector] {
        &self.basis_vectors
    }

    pub fn normal_form(&self) -> &[Vec<i64>] {
        &self.normal_form
    }

    /// Exact membership test by reduction against the normal form.
    pub fn contains(&self, v: &AbelianVector) -> Result<bool> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        let mut rem: Vec<i128> = v.coords().iter().map(|&c| c as i128).collect();
        for (row, &p) in self.normal_form.iter().zip(&self.pivots) {
            // Entries left of this pivot are already zero.
            if rem[..p].iter().any(|&c| c != 0) {
                return Ok(false);
            }
            let pivot = row[p] as i128;
            if rem[p] % pivot != 0 {
                return Ok(false);
            }
            let q = rem[p] / pivot;
            for (r, &c) in rem.iter_mut().zip(row) {
                *r -= q * c as i128;
            }
        }
        Ok(rem.iter().all(|&c| c == 0))
    }

    /// Lattice of vectors lying in both `self` and `other`.
    pub fn intersection(&self, other: &IntegerLattice) -> Result<IntegerLattice> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let k1 = self.normal_form.len();
        let k2 = other.normal_form.len();
        let mut rows: Vec<Vec<i128>> = Vec::with_capacity(k1 + k2);
        for r in &self.normal_form {
            rows.push(r.iter().map(|&c| c as i128).collect());
        }
        for r in &other.normal_form {
            rows.push(r.iter().map(|&c| -(c as i128)).collect());
        }
        // Kernel of (c1, c2) ↦ c1·L1 − c2·L2; each kernel vector yields c1·L1.
        let mut transform = Some(identity(k1 + k2));
        let echelon = hermite_rows(rows, self.dim, transform.as_mut());
        let transform = transform.unwrap();
        let kernel = &transform[echelon.len()..];
        let mut vecs = Vec::with_capacity(kernel.len());
        for coeffs in kernel {
            let mut v = vec![0i128; self.dim];
            for (c, row) in coeffs[..k1].iter().zip(&self.normal_form) {
                for (vi, &ri) in v.iter_mut().zip(row) {
                    *vi += c * ri as i128;
                }
            }
            vecs.push(AbelianVector::new(v.into_iter().map(to_i64).collect()));
        }
        IntegerLattice::new(self.dim, vecs)
    }
}

fn to_i64(c: i128) -> i64 {
    i64::try_from(c).expect("lattice entry overflowed i64")
}

fn identity(k: usize) -> Vec<Vec<i128>> {
    (0..k)
        .map(|i| (0..k).map(|j| (i == j) as i128).collect())
        .collect()
}

/// Row-style Hermite reduction. Returns the nonzero echelon rows. When a
/// transform is supplied, it is updated in lockstep so that row `i` of the
/// transform times the input equals row `i` of the reduced matrix; its rows
/// past the returned length span the integer kernel.
fn hermite_rows(
    mut rows: Vec<Vec<i128>>,
    dim: usize,
    mut transform: Option<&mut Vec<Vec<i128>>>,
) -> Vec<Vec<i128>> {
    let m = rows.len();
    let mut pivot_row = 0;
    for col in 0..dim {
        if pivot_row == m {
            break;
        }
        loop {
            // Smallest nonzero |entry| at or below pivot_row.
            let best = (pivot_row..m)
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].abs());
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            if let Some(t) = transform.as_deref_mut() {
                t.swap(pivot_row, best);
            }
            let p = rows[pivot_row][col];
            let mut done = true;
            for r in pivot_row + 1..m {
                let q = rows[r][col] / p;
                if q != 0 {
                    add_row(&mut rows, r, pivot_row, -q);
                    if let Some(t) = transform.as_deref_mut() {
                        add_row(t, r, pivot_row, -q);
                    }
                }
                if rows[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < m && rows[pivot_row][col] != 0 {
            if rows[pivot_row][col] < 0 {
                for c in rows[pivot_row].iter_mut() {
                    *c = -*c;
                }
                if let Some(t) = transform.as_deref_mut() {
                    for c in t[pivot_row].iter_mut() {
                        *c = -*c;
                    }
                }
            }
            let p = rows[pivot_row][col];
            for r in 0..pivot_row {
                let q = rows[r][col].div_euclid(p);
                if q != 0 {
                    add_row(&mut rows, r, pivot_row, -q);
                    if let Some(t) = transform.as_deref_mut() {
                        add_row(t, r, pivot_row, -q);
                    }
                }
            }
            pivot_row += 1;
        }
    }
    rows.truncate(pivot_row);
    rows
}

fn add_row(rows: &mut [Vec<i128>], target: usize, source: usize, k: i128) {
    let (src, tgt) = if source < target {
        let (a, b) = rows.split_at_mut(target);
        (&a[source], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(source);
        (&b[0], &mut a[target])
    };
    for (t, s) in tgt.iter_mut().zip(src) {
        *t += k * s;
    }
}
