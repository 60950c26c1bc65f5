use crate::algebra::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::IntLike;

/// Result of a Smith normal form computation: `u * m * v = diag(d)`.
#[derive(Clone, PartialEq)]
pub struct Snf<T> {
    /// Invariant factors, `min(rows, cols)` of them, nonnegative, each dividing the next
    /// (trailing zeros included).
    pub d: Vec<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: IntLike> std::fmt::Debug for Snf<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Snf").field("d", &self.d).field("u", &self.u).field("v", &self.v).finish()
    }
}

impl<T: IntLike> Snf<T> {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with smallest-absolute-value pivoting; ties go to the
/// lowest row-major index so `u` and `v` are reproducible.
pub fn smith_normal_form<T: IntLike>(m: &Matrix<T>) -> Snf<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);
    let n = rows.min(cols);

    'outer: for t in 0..n {
        loop {
            let Some((pi, pj)) = smallest_pivot(&a, t) else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row(t, i, &T::one());
                    u.add_row(t, i, &T::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let d = (0..n).map(|t| a[(t, t)].clone()).collect();
    Snf { d, u, v }
}

fn smallest_pivot<T: IntLike>(a: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, _, b)| x < *b) {
                best = Some((i, j, x));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Free rank and torsion of `Z^cols / rowspace(rel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel<T> {
    pub free_rank: usize,
    pub torsion: Vec<T>,
}

pub fn cokernel_of_rows<T: IntLike>(rel: &Matrix<T>) -> Cokernel<T> {
    if rel.rows() == 0 {
        return Cokernel { free_rank: rel.cols(), torsion: Vec::new() };
    }
    let snf = smith_normal_form(rel);
    Cokernel {
        free_rank: rel.cols() - snf.rank(),
        torsion: snf.d.iter().filter(|x| !x.is_zero() && !x.is_one()).cloned().collect(),
    }
}

/// Rank of the sublattice of `Z^n` fixed by every matrix in `mats`.
pub fn solve_fixed_lattice<T: IntLike>(mats: &[Matrix<T>]) -> Result<usize> {
    let Some(first) = mats.first() else {
        return Err(Error::DimensionMismatch("no matrices given".into()));
    };
    let n = first.rows();
    let mut stacked: Option<Matrix<T>> = None;
    for m in mats {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!("expected {n}x{n}, got {}x{}", m.rows(), m.cols())));
        }
        let mut block = m.clone();
        for i in 0..n {
            let v = block[(i, i)].clone() - T::one();
            block[(i, i)] = v;
        }
        stacked = Some(match stacked {
            None => block,
            Some(s) => s.vstack(&block)?,
        });
    }
    let stacked = stacked.expect("at least one matrix");
    Ok(n - smith_normal_form(&stacked).rank())
}
