//! Exact linear algebra over Q, Z and F_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduce an integer into `[0, p)`.
pub fn reduce(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

pub fn reduce_big(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    u64::try_from(r).expect("residue fits in u64")
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Echelon basis of a subspace of F_p^n, grown one vector at a time.
#[derive(Clone, Debug)]
pub struct EchelonModP {
    p: u64,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl EchelonModP {
    pub fn new(p: u64, width: usize) -> Self {
        EchelonModP { p, width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduce `v` against the current basis. The result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut v: Vec<u64> = v.iter().map(|x| x % p).collect();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if f != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = (*x + p - mul_mod(f, r, p)) % p;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Insert `v`; returns true when the rank increased.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut v = self.reduce(v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[c], p);
        for x in v.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for row in self.rows.iter_mut() {
            let f = row[c];
            if f != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    if r != 0 {
                        *x = (*x + p - mul_mod(f, r, p)) % p;
                    }
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(c);
        true
    }
}

/// Rank of a matrix over F_p.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut e = EchelonModP::new(p, width);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Rank over F_p of an integer matrix.
pub fn rank_mod_p_int(rows: &[Vec<i128>], p: u64) -> usize {
    let red: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| reduce(x, p)).collect()).collect();
    rank_mod_p(&red, p)
}

/// Basis of the right kernel `{x : M x = 0}` over F_p, where `rows` are the rows of M
/// and `ncols` its number of columns.
pub fn nullspace_mod_p(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..m.len()).find(|&k| m[k][c] != 0) else {
            continue;
        };
        m.swap(r, k);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - mul_mod(f, y, p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u64; ncols];
            x[f] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                x[c] = (p - m[i][f]) % p;
            }
            x
        })
        .collect()
}

/// Solve `Σ c_i cols[i] = target` over F_p. Returns one solution when it exists.
pub fn solve_mod_p(cols: &[Vec<u64>], target: &[u64], p: u64) -> Option<Vec<u64>> {
    let n = cols.len();
    let height = target.len();
    // Augmented system with columns cols[0..n] and -target; look for kernel vectors with last entry 1.
    let rows: Vec<Vec<u64>> = (0..height)
        .map(|i| {
            let mut r: Vec<u64> = cols.iter().map(|c| c[i] % p).collect();
            r.push((p - target[i] % p) % p);
            r
        })
        .collect();
    let ker = nullspace_mod_p(&rows, n + 1, p);
    let v = ker.into_iter().find(|v| v[n] != 0)?;
    let inv = inv_mod(v[n], p);
    Some(v[..n].iter().map(|&x| mul_mod(x, inv, p)).collect())
}

/// Rank over Q of an integer matrix, by fraction-free elimination.
pub fn rank_q(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        let Some(k) = (rank..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(rank, k);
        let pivot = m[rank][c].clone();
        for i in rank + 1..m.len() {
            let f = m[i][c].clone();
            for j in c..ncols {
                let v = &pivot * &m[i][j] - &f * &m[rank][j];
                m[i][j] = v / &prev;
            }
        }
        prev = pivot;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

pub fn rank_q_int(rows: &[Vec<i128>]) -> usize {
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    rank_q(&big)
}

/// Basis of the right kernel over Q.
pub fn nullspace_q(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); ncols];
            x[f] = BigRational::one();
            for (i, &c) in pivots.iter().enumerate() {
                x[c] = -m[i][f].clone();
            }
            x
        })
        .collect()
}

/// Row-style Hermite normal form: the nonzero rows of an echelon Z-basis of the row lattice,
/// with positive pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            // Bring the smallest nonzero entry of column c (rows r..) to row r.
            let best = (r..m.len()).filter(|&k| !m[k][c].is_zero()).min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(k) = best else { break };
            m.swap(r, k);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = m[r].clone();
        for i in 0..r {
            let q = m[i][c].div_floor(&pivot_row[c]);
            if !q.is_zero() {
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}

/// Integer coordinates of `v` in an HNF basis produced by [`hermite_normal_form`],
/// or `None` when `v` is outside the lattice.
pub fn hnf_coordinates(hnf: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest: Vec<BigInt> = v.to_vec();
    let mut coords = Vec::with_capacity(hnf.len());
    for row in hnf {
        let c = row.iter().position(|x| !x.is_zero()).expect("hnf rows are nonzero");
        if rest[..c].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[c].div_rem(&row[c]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
        coords.push(q);
    }
    if rest.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// Determinant over Z by fraction-free elimination.
pub fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(k) = (c..n).find(|&k| !m[k][c].is_zero()) else {
            return BigInt::zero();
        };
        if k != c {
            m.swap(k, c);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let v = &m[c][c] * &m[i][j] - &m[i][c] * &m[c][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    sign * prev
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn ranks_agree_on_small_matrix() {
        let m = big(&[&[2, 4, 6], &[1, 2, 3], &[0, 1, 5]]);
        assert_eq!(rank_q(&m), 2);
        let red: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| reduce_big(x, 2)).collect()).collect();
        assert_eq!(rank_mod_p(&red, 2), 2);
        let m2 = big(&[&[3, 0], &[0, 3]]);
        let red2: Vec<Vec<u64>> = m2.iter().map(|r| r.iter().map(|x| reduce_big(x, 3)).collect()).collect();
        assert_eq!(rank_mod_p(&red2, 3), 0);
        assert_eq!(rank_q(&m2), 2);
    }

    #[test]
    fn nullspace_mod_p_is_kernel() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let ker = nullspace_mod_p(&rows, 3, 7);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for r in &rows {
                let s: u64 = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert_eq!(s % 7, 0);
            }
        }
    }

    #[test]
    fn hnf_of_lattice() {
        let h = hermite_normal_form(&big(&[&[2, 4], &[3, 5], &[4, 8]]));
        assert_eq!(h, big(&[&[1, 1], &[0, 2]]));
        assert_eq!(hnf_coordinates(&h, &big(&[&[3, 5]])[0]), Some(vec![BigInt::from(3), BigInt::from(1)]));
        assert_eq!(hnf_coordinates(&h, &big(&[&[0, 1]])[0]), None);
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&big(&[&[2, 1], &[1, 2]])), BigInt::from(3));
        assert_eq!(det(&big(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])), BigInt::from(-5));
    }

    #[test]
    fn solve_mod_p_finds_combination() {
        let cols = vec![vec![1, 0, 1], vec![0, 1, 1]];
        let x = solve_mod_p(&cols, &[2, 3, 5], 7).unwrap();
        assert_eq!(x, vec![2, 3]);
        assert!(solve_mod_p(&cols, &[1, 1, 0], 7).is_none());
    }
}
