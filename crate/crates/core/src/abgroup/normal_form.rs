//! Smith and Hermite normal forms over `Z`, and the lattice computations
//! built on them (cokernels, membership).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::group::{FinGenAbGroup, GroupElement};
use super::matrix::IntMatrix;
use crate::{Error, Result};

/// `u * a * v == s` with `u`, `v` unimodular and `s` diagonal, its nonzero
/// diagonal entries positive and forming a divisibility chain, zeros last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `s[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

fn min_abs_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some(b) if s[b].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&s, t) else {
                return SmithForm { s, u, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s[(t, t)].clone();
            let mut remainder = false;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&s[(i, t)] / &pivot);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                remainder |= !s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&s[(t, j)] / &pivot);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                remainder |= !s[(t, j)].is_zero();
            }
            if remainder {
                continue;
            }

            // The pivot must divide the whole trailing block; otherwise pull
            // an offending row up and reduce again.
            let offending = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { s, u, v }
}

/// Column-style Hermite normal form of the lattice spanned by the columns of
/// `a`.
///
/// The result has one column per rank; column `k` has a positive pivot at
/// row `r_k` (strictly increasing in `k`), zeros above it, and every entry of
/// an earlier column in row `r_k` lies in `[0, pivot_k)`.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let m = a.rows();
    let mut cols = a.columns();
    cols.retain(|c| c.iter().any(|x| !x.is_zero()));
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_rows: Vec<usize> = Vec::new();

    for r in 0..m {
        // Euclid across the remaining columns on row r.
        loop {
            let mut nonzero: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j][r].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            nonzero.sort_by(|&x, &y| cols[x][r].abs().cmp(&cols[y][r].abs()));
            let p = nonzero[0];
            let pv = cols[p][r].clone();
            let pcol = cols[p].clone();
            for &j in &nonzero[1..] {
                let q = &cols[j][r] / &pv;
                for (x, y) in cols[j].iter_mut().zip(&pcol) {
                    *x -= &q * y;
                }
            }
            cols.retain(|c| c.iter().any(|x| !x.is_zero()));
        }
        let Some(p) = (0..cols.len()).find(|&j| !cols[j][r].is_zero()) else {
            continue;
        };
        let mut pcol = cols.swap_remove(p);
        if pcol[r].is_negative() {
            pcol.iter_mut().for_each(|x| *x = -std::mem::take(x));
        }
        for earlier in basis.iter_mut() {
            let q = earlier[r].div_floor(&pcol[r]);
            if !q.is_zero() {
                for (x, y) in earlier.iter_mut().zip(&pcol) {
                    *x -= &q * y;
                }
            }
        }
        basis.push(pcol);
        pivot_rows.push(r);
        if cols.is_empty() {
            break;
        }
    }
    debug_assert!(cols.iter().all(|c| c.iter().all(Zero::is_zero)));
    IntMatrix::from_columns(m, &basis).expect("basis columns have ambient length")
}

/// `Z^ambient_rank / span(columns)` together with the image of each standard
/// basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cokernel {
    pub group: FinGenAbGroup,
    pub images: Vec<GroupElement>,
}

impl Cokernel {
    /// Image of an arbitrary integer vector of the ambient lattice.
    pub fn project(&self, v: &[BigInt]) -> Result<GroupElement> {
        if v.len() != self.images.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient rank {}",
                v.len(),
                self.images.len()
            )));
        }
        let mut acc = self.group.zero();
        for (c, img) in v.iter().zip(&self.images) {
            if !c.is_zero() {
                acc = self.group.add(&acc, &self.group.scale(img, c));
            }
        }
        Ok(acc)
    }
}

pub fn cokernel_of_columns(ambient_rank: usize, columns: &[Vec<BigInt>]) -> Result<Cokernel> {
    let a = IntMatrix::from_columns(ambient_rank, columns)?;
    let snf = smith_normal_form(&a);
    let diag = snf.diagonal();
    let orders: Vec<BigInt> = (0..ambient_rank)
        .map(|i| diag.get(i).cloned().unwrap_or_else(BigInt::zero))
        .collect();
    let kept: Vec<usize> = (0..ambient_rank).filter(|&i| !orders[i].is_one()).collect();
    let group = FinGenAbGroup::new(kept.iter().map(|&i| orders[i].clone()).collect())?;
    let images = (0..ambient_rank)
        .map(|j| {
            let coords = kept.iter().map(|&i| snf.u[(i, j)].clone()).collect();
            group.element(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Cokernel { group, images })
}

/// Decides `v ∈ span_Z(columns)`; on success returns coefficients `x` with
/// `Σ x_j columns[j] = v`.
pub fn lattice_membership(columns: &[Vec<BigInt>], v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let m = v.len();
    let a = IntMatrix::from_columns(m, columns)?;
    let snf = smith_normal_form(&a);
    let y = snf.u.mul_vec(v)?;
    let diag = snf.diagonal();
    let mut z = vec![BigInt::zero(); columns.len()];
    for (i, yi) in y.iter().enumerate() {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                let (q, r) = yi.div_rem(d);
                if !r.is_zero() {
                    return Ok(None);
                }
                z[i] = q;
            }
            _ => {
                if !yi.is_zero() {
                    return Ok(None);
                }
            }
        }
    }
    let x = snf.v.mul_vec(&z)?;
    debug_assert_eq!(a.mul_vec(&x)?, v);
    Ok(Some(x))
}
