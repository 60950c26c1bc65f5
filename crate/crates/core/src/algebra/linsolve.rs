use crate::scalar::Scalar;

/// Finds one solution of `a x = b` by Gauss–Jordan elimination, free variables set to zero.
/// `a` is given as rows. Returns `None` when the system is inconsistent.
pub fn solve_affine<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let ncols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=ncols {
                    let v = m[i][j].clone() - f.clone() * m[r][j].clone();
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![S::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][ncols].clone();
    }
    Some(x)
}

/// Rank of a list of row vectors over the field `S`.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = m[i][c].clone() / m[r][c].clone();
                for j in c..ncols {
                    let v = m[i][j].clone() - f.clone() * m[r][j].clone();
                    m[i][j] = v;
                }
            }
        }
        r += 1;
    }
    r
}
