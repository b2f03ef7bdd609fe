use crate::scalar::Scalar;

/// Inverse by Gauss–Jordan elimination with partial pivoting. `None` when
/// the matrix is singular to working precision.
pub fn invert<T: Scalar>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let norm = a
        .iter()
        .map(|row| row.iter().fold(T::zero(), |s, v| s + v.abs()))
        .fold(T::zero(), T::max);
    if !(norm > T::zero()) || !norm.is_finite() {
        return None;
    }
    let threshold = norm * T::epsilon() * T::lit(n as f64);
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut inv: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| m[r][col].abs().partial_cmp(&m[s][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col].abs() <= threshold {
            return None;
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] = m[col][j] / p;
            inv[col][j] = inv[col][j] / p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r][col];
            if f == T::zero() {
                continue;
            }
            for j in 0..n {
                m[r][j] = m[r][j] - f * m[col][j];
                inv[r][j] = inv[r][j] - f * inv[col][j];
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let inv = invert(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(inv, vec![vec![1.0, -1.0], vec![-1.0, 2.0]]);
    }

    #[test]
    fn needs_pivoting() {
        let inv = invert(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(inv, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn singular() {
        assert!(invert(&[vec![1.0, 2.0], vec![2.0, 4.0]]).is_none());
        assert!(invert(&[vec![0.0f32]]).is_none());
    }
}
