//! Fraction-free row reduction over the integers.
//!
//! Rows are combined as `p * row - v * pivot_row` and divided by their
//! content after every step, so entries stay integral and small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

pub(crate) struct Echelon {
    /// Reduced rows; row `i` has its pivot in column `pivots[i]` and zeros
    /// in every other pivot column.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Reduces the first `cols` columns of `rows`; extra trailing columns (an
/// augmented right-hand side) are carried along.
pub(crate) fn row_reduce(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        let pv = pivot_row[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let v = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &pv - &v * y;
            }
            make_primitive(row);
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots }
}

/// Integer basis of `{x : A x = 0}`, one primitive vector per free column
/// in increasing column order.
pub(crate) fn nullspace(rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let ech = row_reduce(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            // x_f = L, x_pc = -row[f] * L / row[pc], L = lcm of pivot values
            let l = ech
                .pivots
                .iter()
                .enumerate()
                .fold(BigInt::from(1), |l, (i, &pc)| l.lcm(&ech.rows[i][pc]));
            let mut x = vec![BigInt::zero(); cols];
            x[f] = l.clone();
            for (i, &pc) in ech.pivots.iter().enumerate() {
                let row = &ech.rows[i];
                x[pc] = -(&row[f] * &l) / &row[pc];
            }
            make_primitive(&mut x);
            x
        })
        .collect()
}

/// Solutions of `A x = b`: a particular solution (free variables zero) and
/// a nullspace basis, or `None` if inconsistent.
pub(crate) fn solve(
    a: &[Vec<BigInt>],
    b: &[BigInt],
) -> Option<(Vec<BigRational>, Vec<Vec<BigInt>>)> {
    let cols = a.first().map_or(0, Vec::len);
    let aug: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let ech = row_reduce(aug, cols);
    let consistent = ech.rows.iter().enumerate().all(|(i, row)| {
        i < ech.pivots.len() || row[cols].is_zero()
    });
    if !consistent {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &pc) in ech.pivots.iter().enumerate() {
        let row = &ech.rows[i];
        x[pc] = BigRational::new(row[cols].clone(), row[pc].clone());
    }
    let basis = nullspace(a.to_vec(), cols);
    Some((x, basis))
}
