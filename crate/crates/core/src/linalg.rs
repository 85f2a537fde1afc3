//! Exact rational row reduction for small integer matrices.

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Q {
    n: i128,
    d: i128,
}

impl Q {
    fn new(n: i128, d: i128) -> Q {
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Q {
            n: s * n / g,
            d: s * d / g,
        }
    }

    fn int(n: i64) -> Q {
        Q { n: n as i128, d: 1 }
    }

    fn is_zero(self) -> bool {
        self.n == 0
    }

    fn sub(self, o: Q) -> Q {
        Q::new(self.n * o.d - o.n * self.d, self.d * o.d)
    }

    fn mul(self, o: Q) -> Q {
        Q::new(self.n * o.n, self.d * o.d)
    }

    fn div(self, o: Q) -> Q {
        Q::new(self.n * o.d, self.d * o.n)
    }
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(rows: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][col];
        for x in rows[r].iter_mut() {
            *x = x.div(lead);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col];
                for k in 0..ncols {
                    let v = rows[r][k];
                    rows[i][k] = rows[i][k].sub(f.mul(v));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(matrix: &[Vec<i64>]) -> usize {
    let ncols = matrix.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Q>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| Q::int(x)).collect())
        .collect();
    rref(&mut rows, ncols).len()
}

/// Integer vectors spanning the rational kernel of `matrix` (with `ncols` columns).
pub fn kernel(matrix: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<Q>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| Q::int(x)).collect())
        .collect();
    let pivots = rref(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::int(0); ncols];
            v[f] = Q::int(1);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = Q::int(0).sub(rows[r][f]);
            }
            let l = v.iter().fold(1i128, |acc, q| acc / gcd(acc, q.d) * q.d);
            v.iter().map(|q| (q.n * (l / q.d)) as i64).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        assert_eq!(rank(&m), 2);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        for row in &m {
            assert_eq!(row.iter().zip(&k[0]).map(|(a, b)| a * b).sum::<i64>(), 0);
        }
    }
}
