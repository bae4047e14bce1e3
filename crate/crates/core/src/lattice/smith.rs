use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{FinAbGroup, IntMatrix, LatticeError};

/// Result of a Smith decomposition `left · M · right = diagonal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries d₁ | d₂ | … (length `min(rows, cols)`), zeros last.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal.diagonal()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().take_while(|d| !d.is_zero()).count()
    }
}

/// Position of the nonzero entry of least absolute value in the trailing
/// block starting at `(t, t)`, scanning row-major; ties keep the first hit.
fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            if best.as_ref().map_or(true, |(_, b)| abs < *b) {
                best = Some(((i, j), abs));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form over ℤ.
///
/// Pivoting always picks the nonzero entry of minimal absolute value in the
/// remaining block (row-major scan), so the transforms are reproducible.
/// Empty matrices are accepted and give empty factors.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_pivot(&a, t) else {
                return finish(a, left, right);
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&pivot);
                let neg = -q;
                a.add_row_multiple(i, t, &neg);
                left.add_row_multiple(i, t, &neg);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&pivot);
                let neg = -q;
                a.add_col_multiple(j, t, &neg);
                right.add_col_multiple(j, t, &neg);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            // Row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }
    finish(a, left, right)
}

fn finish(diagonal: IntMatrix, left: IntMatrix, right: IntMatrix) -> SmithForm {
    debug_assert!(diagonal.is_diagonal());
    SmithForm { left, diagonal, right }
}

/// Invariant factors of ℤⁿ / (column span of `relations`), where n is the
/// number of rows. A 0-row presentation gives the trivial group.
pub fn cokernel(relations: &IntMatrix) -> FinAbGroup {
    let snf = smith_normal_form(relations);
    let diag = snf.invariant_factors();
    let factors = (0..relations.rows()).map(|i| {
        diag.get(i).map(|d| d.abs().to_biguint().expect("nonnegative")).unwrap_or_default()
    });
    FinAbGroup::from_sorted_chain(factors.collect())
}

/// Outcome of an integer linear system with a checkable certificate either way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IntegerSolution {
    /// `M · x = v`.
    Solvable {
        #[serde(with = "crate::serde_util::bigint_seq")]
        witness: Vec<BigInt>,
    },
    /// The row `functional` of the left transform maps every column of `M`
    /// into `modulus · ℤ` but sends `v` to `value`, which is not a multiple.
    Infeasible {
        #[serde(with = "crate::serde_util::bigint_seq")]
        functional: Vec<BigInt>,
        value: String,
        modulus: String,
    },
}

impl IntegerSolution {
    pub fn witness(&self) -> Option<&[BigInt]> {
        match self {
            IntegerSolution::Solvable { witness } => Some(witness),
            IntegerSolution::Infeasible { .. } => None,
        }
    }
}

/// Decides `M · x = v` over ℤ through the Smith form, with a certificate.
pub fn solve_integer_certified(
    m: &IntMatrix,
    v: &[BigInt],
) -> Result<IntegerSolution, LatticeError> {
    if v.len() != m.rows() {
        return Err(LatticeError::DimensionMismatch { expected: m.rows(), found: v.len() });
    }
    let snf = smith_normal_form(m);
    let uv = snf.left.mul_vec(v)?;
    let diag = snf.invariant_factors();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, value) in uv.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_default();
        let ok = if d.is_zero() { value.is_zero() } else { value.is_multiple_of(&d) };
        if !ok {
            return Ok(IntegerSolution::Infeasible {
                functional: snf.left.row(i).to_vec(),
                value: value.to_string(),
                modulus: d.to_string(),
            });
        }
        if !d.is_zero() {
            y[i] = value / &d;
        }
    }
    let x = snf.right.mul_vec(&y)?;
    debug_assert_eq!(m.mul_vec(&x)?, v);
    Ok(IntegerSolution::Solvable { witness: x })
}

/// Returns `x` with `M · x = v` if one exists over the integers.
pub fn solve_integer(m: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
    Ok(match solve_integer_certified(m, v)? {
        IntegerSolution::Solvable { witness } => Some(witness),
        IntegerSolution::Infeasible { .. } => None,
    })
}
