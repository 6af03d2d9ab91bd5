//! Exact linear-programming feasibility over the rationals.
//!
//! Everything is reduced to phase one of the simplex method in standard form
//! {x >= 0 : A x = b} with Bland's rule, so termination is guaranteed and no
//! floating point enters any verdict. Feasible instances return an exact
//! feasible point.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Feasibility of {x >= 0 : A x = b}; returns an exact feasible point.
pub fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    assert_eq!(b.len(), m);
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }

    // Tableau over columns [original 0..n | artificial n..n+m | rhs].
    let total = n + m;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<BigRational> = Vec::with_capacity(total + 1);
        let flip = b[i].is_negative();
        for j in 0..n {
            row.push(if flip { -&a[i][j] } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        row.push(if flip { -&b[i] } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..total).collect();

    // Phase-one objective: minimize the sum of artificials. Reduced-cost row
    // starts as sum of the artificial rows, negated below the basic columns.
    let mut cost: Vec<BigRational> = vec![BigRational::zero(); total + 1];
    for j in n..total {
        cost[j] = BigRational::one();
    }
    for row in &t {
        for j in 0..=total {
            let v = &cost[j] - &row[j];
            cost[j] = v;
        }
    }

    loop {
        // Bland: entering column = smallest index with negative reduced cost.
        let entering = (0..total).find(|&j| cost[j].is_negative());
        let entering = match entering {
            Some(j) => j,
            None => break,
        };
        // Ratio test; ties by smallest basis index (Bland).
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if t[i][entering].is_positive() {
                let ratio = &t[i][total] / &t[i][entering];
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        ratio < *cur || (ratio == *cur && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("phase-one objective is bounded below by zero");
        pivot(&mut t, &mut cost, leave, entering, total);
        basis[leave] = entering;
    }

    // Objective value is -cost[rhs]; zero iff feasible.
    if !cost[total].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = t[i][total].clone();
        }
        // Artificials still basic must sit at value zero here.
    }
    debug_assert!(check_solution(a, b, &x));
    Some(x)
}

fn pivot(
    t: &mut [Vec<BigRational>],
    cost: &mut [BigRational],
    row: usize,
    col: usize,
    total: usize,
) {
    let inv = t[row][col].recip();
    for j in 0..=total {
        let v = &t[row][j] * &inv;
        t[row][j] = v;
    }
    for i in 0..t.len() {
        if i != row && !t[i][col].is_zero() {
            let f = t[i][col].clone();
            for j in 0..=total {
                let v = &t[i][j] - &f * &t[row][j];
                t[i][j] = v;
            }
        }
    }
    if !cost[col].is_zero() {
        let f = cost[col].clone();
        for j in 0..=total {
            let v = &cost[j] - &f * &t[row][j];
            cost[j] = v;
        }
    }
}

fn check_solution(a: &[Vec<BigRational>], b: &[BigRational], x: &[BigRational]) -> bool {
    if x.iter().any(|v| v.is_negative()) {
        return false;
    }
    for (row, rhs) in a.iter().zip(b) {
        let mut acc = BigRational::zero();
        for (c, v) in row.iter().zip(x) {
            acc += c * v;
        }
        if acc != *rhs {
            return false;
        }
    }
    true
}

/// Feasibility of {lambda free : M lambda >= rhs} via the split
/// lambda = u - w, slack subtraction, and phase one. Returns an exact lambda.
pub fn feasible_geq(m: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = m.len();
    let k = m.first().map(|r| r.len()).unwrap_or(0);
    // Columns: u (k), w (k), slack (rows).
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = Vec::with_capacity(2 * k + rows);
        for j in 0..k {
            row.push(m[i][j].clone());
        }
        for j in 0..k {
            row.push(-&m[i][j]);
        }
        for j in 0..rows {
            row.push(if i == j {
                -BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        a.push(row);
    }
    let x = feasible_point(&a, rhs)?;
    Some((0..k).map(|j| &x[j] - &x[j + k]).collect())
}
