//! Exact rank computations.
//!
//! Mod-p ranks use an incremental row reducer that keeps pivot rows in panels
//! of 32. Rows in a panel are mutually reduced, so reducing an incoming row
//! against one panel is a single pass with up to 32 fused multiply-adds per
//! entry and one reduction at the end; this is what makes the large graded
//! Koszul slices affordable. Integer and rational ranks are small-scale and
//! use fraction-free or big-rational elimination.

use crate::error::{Error, Result};
use crate::ring::PrimeField;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

const PANEL: usize = 32;

struct Panel {
    /// Pivot column of each row, strictly the first nonzero entry; rows are
    /// normalized (pivot = 1) and reduced against one another.
    pivots: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

/// Streaming rank over F_p: feed rows, read off the rank. Rank of a matrix
/// equals the rank of its transpose, so callers may feed either orientation.
pub struct RankAccumulator {
    p: u64,
    cols: usize,
    sealed: Vec<Panel>,
    open: Panel,
}

impl RankAccumulator {
    pub fn new(field: &PrimeField, cols: usize) -> Self {
        RankAccumulator {
            p: field.modulus(),
            cols,
            sealed: Vec::new(),
            open: Panel {
                pivots: Vec::new(),
                rows: Vec::new(),
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.sealed.iter().map(|p| p.rows.len()).sum::<usize>() + self.open.rows.len()
    }

    pub fn full_column_rank(&self) -> bool {
        self.rank() == self.cols
    }

    /// Offers a row (entries already reduced mod p). Returns true when the
    /// row was independent of everything seen so far.
    pub fn offer(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        if self.full_column_rank() {
            return false;
        }
        for panel in &self.sealed {
            reduce_against(&mut row, panel, self.p);
        }
        reduce_against(&mut row, &self.open, self.p);
        let pivot = match row.iter().position(|&x| x != 0) {
            Some(c) => c,
            None => return false,
        };
        // Normalize and back-eliminate the new pivot column inside the open
        // panel so the panel stays mutually reduced.
        let inv = mod_inv(row[pivot], self.p);
        let norm: Vec<u32> = row
            .iter()
            .map(|&x| (x * inv % self.p) as u32)
            .collect();
        for r in 0..self.open.rows.len() {
            let f = self.open.rows[r][pivot] as u64;
            if f != 0 {
                let neg = self.p - f;
                let row_r = &mut self.open.rows[r];
                for j in 0..self.cols {
                    let v = row_r[j] as u64 + neg * norm[j] as u64 % self.p;
                    row_r[j] = (v % self.p) as u32;
                }
            }
        }
        self.open.pivots.push(pivot);
        self.open.rows.push(norm);
        if self.open.rows.len() == PANEL {
            let full = std::mem::replace(
                &mut self.open,
                Panel {
                    pivots: Vec::new(),
                    rows: Vec::new(),
                },
            );
            self.sealed.push(full);
        }
        true
    }
}

/// One pass: gather the row's coefficients at the panel's pivot columns, then
/// subtract the combination. Panel rows are mutually reduced, so the
/// coefficients do not change as the combination is applied.
fn reduce_against(row: &mut [u64], panel: &Panel, p: u64) {
    let coefs: Vec<u64> = panel.pivots.iter().map(|&c| row[c]).collect();
    if coefs.iter().all(|&f| f == 0) {
        return;
    }
    let negs: Vec<u64> = coefs.iter().map(|&f| if f == 0 { 0 } else { p - f }).collect();
    for j in 0..row.len() {
        // Up to 32 products of values < 2^25 each: fits u64 with room.
        let mut acc = row[j];
        for (r, &f) in negs.iter().enumerate() {
            if f != 0 {
                acc += f * panel.rows[r][j] as u64;
            }
        }
        row[j] = acc % p;
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p prime.
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn rank_mod_p(field: &PrimeField, rows: &[Vec<u64>], cols: usize) -> usize {
    let mut acc = RankAccumulator::new(field, cols);
    for r in rows {
        acc.offer(r.clone());
        if acc.full_column_rank() {
            break;
        }
    }
    acc.rank()
}

/// Exact rank of an integer matrix by fraction-free elimination in i128.
/// Errors instead of overflowing, which at the weight magnitudes this toolkit
/// handles does not occur.
pub fn rank_int(rows: &[Vec<i64>]) -> Result<usize> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0usize;
    let mut prev = 1i128;
    for col in 0..ncols {
        let piv = (rank..nrows).find(|&r| m[r][col] != 0);
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        m.swap(rank, piv);
        for r in (rank + 1)..nrows {
            for c in (col + 1)..ncols {
                let a = m[rank][col]
                    .checked_mul(m[r][c])
                    .ok_or(Error::IntOverflow("rank_int"))?;
                let b = m[r][col]
                    .checked_mul(m[rank][c])
                    .ok_or(Error::IntOverflow("rank_int"))?;
                let num = a.checked_sub(b).ok_or(Error::IntOverflow("rank_int"))?;
                debug_assert_eq!(num % prev, 0, "fraction-free step must divide exactly");
                m[r][c] = num / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    Ok(rank)
}

/// Exact rank over the rationals; no size constraints.
pub fn rank_rational(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0usize;
    for col in 0..ncols {
        let piv = (rank..nrows).find(|&r| !m[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        m.swap(rank, piv);
        let inv = m[rank][col].recip();
        for c in col..ncols {
            let v = &m[rank][c] * &inv;
            m[rank][c] = v;
        }
        for r in (rank + 1)..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..ncols {
                let v = &m[r][c] - &f * &m[rank][c];
                m[r][c] = v;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

pub fn big_rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn fp() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    #[test]
    fn rank_of_small_matrices() {
        let f = fp();
        let id3: Vec<Vec<u64>> = (0..3)
            .map(|i| (0..3).map(|j| u64::from(i == j)).collect())
            .collect();
        assert_eq!(rank_mod_p(&f, &id3, 3), 3);
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod_p(&f, &rows, 3), 2);
        assert_eq!(rank_int(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]).unwrap(), 2);
    }

    #[test]
    fn rank_agrees_with_rational_elimination_on_random_matrices() {
        let f = fp();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..40 {
            let rows = rng.gen_range(1..=8);
            let cols = rng.gen_range(1..=8);
            let m: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-5..=5)).collect())
                .collect();
            let modp: Vec<Vec<u64>> = m
                .iter()
                .map(|r| r.iter().map(|&x| f.reduce_i64(x)).collect())
                .collect();
            let rat: Vec<Vec<BigRational>> = m
                .iter()
                .map(|r| r.iter().map(|&x| big_rational(x, 1)).collect())
                .collect();
            let expected = rank_rational(&rat);
            // Entries are tiny, so no rank drop mod 32003.
            assert_eq!(rank_mod_p(&f, &modp, cols), expected);
            assert_eq!(rank_int(&m).unwrap(), expected);
        }
    }

    #[test]
    fn panel_boundary_is_exercised() {
        // A rank-70 matrix crosses two sealed panels.
        let f = fp();
        let n = 70;
        let mut rng = StdRng::seed_from_u64(11);
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for i in 0..n {
            let mut r: Vec<u64> = (0..n).map(|_| rng.gen_range(0..32003u64)).collect();
            r[i] = 1 + r[i] % 32002; // keep a nonzero diagonal bias
            rows.push(r);
        }
        // Duplicate some rows; rank must not change.
        for i in 0..10 {
            rows.push(rows[i].clone());
        }
        let rank = rank_mod_p(&f, &rows, n);
        assert_eq!(rank, n);
    }
}
