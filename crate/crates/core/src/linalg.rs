//! Row reduction helpers for small dense matrices.

/// Gaussian elimination with partial pivoting. A pivot counts when its
/// magnitude exceeds `rel_tol * max|a_ij|` of the input matrix.
pub fn row_rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let scale = rows
        .iter()
        .flatten()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let threshold = rel_tol * scale;
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..width {
        if rank == m.len() {
            break;
        }
        let (piv, val) = (rank..m.len())
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if val <= threshold {
            continue;
        }
        m.swap(rank, piv);
        let pivot_row = m[rank].clone();
        for r in (rank + 1)..m.len() {
            let f = m[r][col] / pivot_row[col];
            if f != 0.0 {
                for (x, p) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `a x = b` for square `a`; `None` when a pivot falls below `tol`.
pub fn solve_square(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col].abs() <= tol {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        m[r][c] -= f * m[col][c];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// A unit vector spanning the null space of an `(k) x (k+1)` system of full
/// row rank, or `None` when the rank is deficient.
pub fn null_vector(rows: &[Vec<f64>], tol: f64) -> Option<Vec<f64>> {
    let k = rows.len();
    let w = k + 1;
    debug_assert!(rows.iter().all(|r| r.len() == w));
    // fix each coordinate in turn to 1 and solve for the rest
    let mut best: Option<(f64, Vec<f64>)> = None;
    for free in 0..w {
        let a: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| (0..w).filter(|&c| c != free).map(|c| r[c]).collect())
            .collect();
        let b: Vec<f64> = rows.iter().map(|r| -r[free]).collect();
        if let Some(sol) = solve_square(&a, &b, tol) {
            let mut v = Vec::with_capacity(w);
            let mut it = sol.into_iter();
            for c in 0..w {
                v.push(if c == free { 1.0 } else { it.next().unwrap() });
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            // prefer the best-conditioned choice
            let size = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            if best.as_ref().map_or(true, |(s, _)| size < *s) {
                best = Some((size, v.iter().map(|x| x / norm).collect()));
            }
        }
    }
    let v = best?.1;
    let residual = rows
        .iter()
        .map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>().abs())
        .fold(0.0, f64::max);
    (residual <= 1e-7).then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_basics() {
        assert_eq!(row_rank(&[vec![1.0, 0.0], vec![0.0, 1.0]], 1e-9), 2);
        assert_eq!(row_rank(&[vec![1.0, 2.0], vec![1.0, 2.0]], 1e-9), 1);
        assert_eq!(row_rank(&[vec![0.0, 0.0]], 1e-9), 0);
        assert_eq!(row_rank(&[], 1e-9), 0);
    }

    #[test]
    fn rank_uses_relative_threshold() {
        let tiny = [vec![1e-12, 0.0], vec![0.0, 2e-12]];
        assert_eq!(row_rank(&tiny, 1e-9), 2);
        let nearly = [vec![1.0, 1.0], vec![1.0, 1.0 + 1e-12]];
        assert_eq!(row_rank(&nearly, 1e-9), 1);
    }

    #[test]
    fn solve_and_null() {
        let x = solve_square(&[vec![2.0, 1.0], vec![1.0, 3.0]], &[3.0, 5.0], 1e-12).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
        assert!(solve_square(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[1.0, 1.0], 1e-12).is_none());

        let v = null_vector(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]], 1e-12).unwrap();
        assert!((v[0] - v[2]).abs() < 1e-12 && (v[0] + v[1]).abs() < 1e-12);
        assert!(null_vector(&[vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0]], 1e-12).is_none());
    }
}
