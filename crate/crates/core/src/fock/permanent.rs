use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Largest matrix order accepted by [`permanent_ryser`].
pub const MAX_PERMANENT_ORDER: usize = 30;

/// Permanent by Ryser's inclusion-exclusion formula, visiting column subsets in
/// Gray-code order so each step updates the row sums with a single column.
///
/// Cost is `O(2^N · N)`.
pub fn permanent_ryser(a: &ComplexMatrix) -> Result<Complex64> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "permanent of non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n > MAX_PERMANENT_ORDER {
        return Err(Error::CostGuard {
            what: "permanent order",
            value: n as u128,
            limit: MAX_PERMANENT_ORDER as u128,
        });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }

    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut in_subset = vec![false; n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut size = 0usize;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        if in_subset[j] {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a[(i, j)];
            }
            size -= 1;
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[(i, j)];
            }
            size += 1;
        }
        in_subset[j] = !in_subset[j];
        let prod: Complex64 = row_sums.iter().product();
        if size.is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n.is_multiple_of(2) { total } else { -total })
}
