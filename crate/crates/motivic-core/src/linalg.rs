//! Exact dense linear algebra: Gaussian elimination over the rationals and
//! Hermite/Smith normal forms over the integers.
//!
//! Everything here is small and deterministic; matrices at play have at
//! most a handful of rows and columns.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

/// Row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rat>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        QMat { rows: r, cols: c, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    /// In-place reduced row echelon form; returns the pivot column per
    /// pivot row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pr = 0;
        for pc in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(sel) = (pr..self.rows).find(|&i| !self.at(i, pc).is_zero()) else {
                continue;
            };
            self.swap_rows(pr, sel);
            let inv = Rat::one() / self.at(pr, pc).clone();
            for j in pc..self.cols {
                let v = self.at(pr, j).clone() * inv.clone();
                *self.at_mut(pr, j) = v;
            }
            for i in 0..self.rows {
                if i != pr && !self.at(i, pc).is_zero() {
                    let f = self.at(i, pc).clone();
                    for j in pc..self.cols {
                        let v = self.at(i, j).clone() - f.clone() * self.at(pr, j).clone();
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

pub fn rat_rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m = QMat::from_rows(rows.to_vec());
    m.rref().len()
}

/// Solve `A x = b` over Q; returns one solution or None when inconsistent.
pub fn rat_solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug = QMat::zero(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            *aug.at_mut(i, j) = a[i][j].clone();
        }
        *aug.at_mut(i, cols) = b[i].clone();
    }
    let pivots = aug.rref();
    if pivots.contains(&cols) {
        return None; // pivot in the constant column
    }
    let mut x = vec![Rat::zero(); cols];
    for (pr, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.at(pr, cols).clone();
    }
    Some(x)
}

/// Basis of the rational kernel `{x : A x = 0}`.
pub fn rat_kernel(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    if rows == 0 {
        return (0..cols)
            .map(|k| {
                (0..cols)
                    .map(|j| if j == k { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
    }
    let mut m = QMat::from_rows(a.to_vec());
    let pivots = m.rref();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (pr, &pc) in pivots.iter().enumerate() {
            v[pc] = -m.at(pr, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Scale a rational vector to a primitive integer vector (gcd 1); the zero
/// vector maps to itself. Orientation is preserved.
pub fn primitive_int_vector(v: &[Rat]) -> Vec<Int> {
    let mut lcm = Int::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<Int> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut g = Int::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|c| c / &g).collect()
}

// ---- integer lattice routines ----

/// Row-style Hermite normal form of the lattice spanned by `gens`; returns
/// an independent basis (nonzero rows, echelon shape, positive pivots).
pub fn hnf_basis(gens: &[Vec<Int>]) -> Vec<Vec<Int>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let cols = gens[0].len();
    let mut m: Vec<Vec<Int>> = gens.to_vec();
    let mut pr = 0;
    for pc in 0..cols {
        loop {
            let mut best: Option<usize> = None;
            for i in pr..m.len() {
                if !m[i][pc].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(b) => {
                            if m[i][pc].abs() < m[b][pc].abs() {
                                Some(i)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            m.swap(pr, b);
            let mut done = true;
            for i in pr + 1..m.len() {
                if m[i][pc].is_zero() {
                    continue;
                }
                let q = m[i][pc].div_floor(&m[pr][pc]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let s = &m[pr][j] * &q;
                        m[i][j] -= s;
                    }
                }
                if !m[i][pc].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pr < m.len() && !m[pr][pc].is_zero() {
            if m[pr][pc].is_negative() {
                for j in 0..cols {
                    m[pr][j] = -m[pr][j].clone();
                }
            }
            for i in 0..pr {
                let q = m[i][pc].div_floor(&m[pr][pc]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let s = &m[pr][j] * &q;
                        m[i][j] -= s;
                    }
                }
            }
            pr += 1;
            if pr == m.len() {
                break;
            }
        }
    }
    m.truncate(pr);
    m
}

/// Smith normal form: returns `(u, s, v)` with `u * a * v = s` diagonal,
/// `u`, `v` unimodular, and each diagonal entry dividing the next.
pub fn smith_normal_form(
    a: &[Vec<Int>],
) -> (Vec<Vec<Int>>, Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut s: Vec<Vec<Int>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !s[i][j].is_zero() {
                    pivot = match pivot {
                        None => Some((i, j)),
                        Some((pi, pj)) => {
                            if s[i][j].abs() < s[pi][pj].abs() {
                                Some((i, j))
                            } else {
                                Some((pi, pj))
                            }
                        }
                    };
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows_tracked(&mut s, &mut u, t, pi);
        swap_cols_tracked(&mut s, &mut v, t, pj);

        let mut clean = false;
        while !clean {
            clean = true;
            for i in t + 1..rows {
                if !s[i][t].is_zero() {
                    let q = s[i][t].div_floor(&s[t][t]);
                    row_op(&mut s, &mut u, i, t, &q);
                    if !s[i][t].is_zero() {
                        swap_rows_tracked(&mut s, &mut u, t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !s[t][j].is_zero() {
                    let q = s[t][j].div_floor(&s[t][t]);
                    col_op(&mut s, &mut v, j, t, &q);
                    if !s[t][j].is_zero() {
                        swap_cols_tracked(&mut s, &mut v, t, j);
                        clean = false;
                    }
                }
            }
        }

        // The pivot must divide every remaining entry; if not, merge the
        // offending row into row t and redo the cleaning.
        let mut adjusted = false;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&s[i][j] % &s[t][t]).is_zero() {
                    for k in 0..cols {
                        let add = s[i][k].clone();
                        s[t][k] += add;
                    }
                    for k in 0..rows {
                        let add = u[i][k].clone();
                        u[t][k] += add;
                    }
                    adjusted = true;
                    break 'outer;
                }
            }
        }
        if adjusted {
            continue;
        }
        if s[t][t].is_negative() {
            for j in 0..cols {
                s[t][j] = -s[t][j].clone();
            }
            for j in 0..rows {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    (u, s, v)
}

fn identity(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

fn swap_rows_tracked(s: &mut [Vec<Int>], u: &mut [Vec<Int>], a: usize, b: usize) {
    if a != b {
        s.swap(a, b);
        u.swap(a, b);
    }
}

fn swap_cols_tracked(s: &mut [Vec<Int>], v: &mut [Vec<Int>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in s.iter_mut() {
        row.swap(a, b);
    }
    for row in v.iter_mut() {
        row.swap(a, b);
    }
}

/// row[i] -= q * row[t], tracked in u.
fn row_op(s: &mut [Vec<Int>], u: &mut [Vec<Int>], i: usize, t: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    for k in 0..s[0].len() {
        let sub = &s[t][k] * q;
        s[i][k] -= sub;
    }
    for k in 0..u[0].len() {
        let sub = &u[t][k] * q;
        u[i][k] -= sub;
    }
}

/// col[j] -= q * col[t], tracked in v.
fn col_op(s: &mut [Vec<Int>], v: &mut [Vec<Int>], j: usize, t: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    for row in s.iter_mut() {
        let sub = &row[t] * q;
        row[j] -= sub;
    }
    for row in v.iter_mut() {
        let sub = &row[t] * q;
        row[j] -= sub;
    }
}

/// Integer solutions of `A x = b`: one particular solution plus a basis of
/// the integer kernel, or None when no integer solution exists.
pub fn solve_integer_system(
    a: &[Vec<Int>],
    b: &[Int],
) -> Option<(Vec<Int>, Vec<Vec<Int>>)> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    if rows == 0 {
        return Some((vec![Int::zero(); cols], identity(cols)));
    }
    let (u, s, v) = smith_normal_form(a);
    // s = u a v; solve s z = u b, then x = v z.
    let ub: Vec<Int> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|k| &u[i][k] * &b[k])
                .fold(Int::zero(), |acc, t| acc + t)
        })
        .collect();
    let mut z = vec![Int::zero(); cols];
    let mut free = Vec::new();
    for i in 0..rows.max(cols) {
        let diag = if i < rows && i < cols {
            s[i][i].clone()
        } else {
            Int::zero()
        };
        if diag.is_zero() {
            if i < rows && !ub[i].is_zero() {
                return None;
            }
            if i < cols {
                free.push(i);
            }
        } else {
            let (q, r) = ub[i].div_rem(&diag);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    let x: Vec<Int> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|k| &v[i][k] * &z[k])
                .fold(Int::zero(), |acc, t| acc + t)
        })
        .collect();
    let kernel: Vec<Vec<Int>> = free
        .iter()
        .map(|&k| (0..cols).map(|i| v[i][k].clone()).collect())
        .collect();
    Some((x, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&c| int(c)).collect()
    }

    #[test]
    fn rref_solve() {
        let a = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(3, 1), rat(4, 1)]];
        let x = rat_solve(&a, &[rat(5, 1), rat(6, 1)]).unwrap();
        assert_eq!(x, vec![rat(-4, 1), rat(9, 2)]);
        assert!(rat_solve(
            &[vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1), rat(2, 1)]],
            &[rat(0, 1), rat(1, 1)]
        )
        .is_none());
    }

    #[test]
    fn kernel() {
        let a = vec![vec![rat(1, 1), rat(1, 1), rat(0, 1)]];
        let k = rat_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((v[0].clone() + v[1].clone()).is_zero());
        }
    }

    #[test]
    fn hnf_lattice_membership() {
        // (2,0),(1,1),(0,2) generate {(a,b): a+b even}.
        let basis = hnf_basis(&[iv(&[2, 0]), iv(&[1, 1]), iv(&[0, 2])]);
        assert_eq!(basis.len(), 2);
        let in_lat = |x: i64, y: i64| -> bool {
            let a: Vec<Vec<Rat>> = (0..2)
                .map(|coord| {
                    basis
                        .iter()
                        .map(|b| Rat::from_integer(b[coord].clone()))
                        .collect()
                })
                .collect();
            match rat_solve(&a, &[rat(x, 1), rat(y, 1)]) {
                Some(c) => c.iter().all(|q| q.is_integer()),
                None => false,
            }
        };
        assert!(in_lat(2, 0));
        assert!(in_lat(1, 1));
        assert!(in_lat(3, 1));
        assert!(!in_lat(1, 0));
    }

    #[test]
    fn snf_solver() {
        // x + 2y = 5, solvable over Z.
        let (x, k) = solve_integer_system(&[iv(&[1, 2])], &iv(&[5])).unwrap();
        assert_eq!(&x[0] + int(2) * &x[1], int(5));
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] + int(2) * &k[0][1], int(0));

        // 2x = 1 has no integer solution.
        assert!(solve_integer_system(&[iv(&[2])], &iv(&[1])).is_none());

        // 3x + 6y = 3.
        let (x, k) = solve_integer_system(&[iv(&[3, 6])], &iv(&[3])).unwrap();
        assert_eq!(int(3) * &x[0] + int(6) * &x[1], int(3));
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn snf_divisibility_chain() {
        let a = vec![iv(&[2, 4, 4]), iv(&[-6, 6, 12]), iv(&[10, 4, 16])];
        let (u, s, v) = smith_normal_form(&a);
        // Check u*a*v == s.
        let mul = |x: &[Vec<Int>], y: &[Vec<Int>]| -> Vec<Vec<Int>> {
            let n = x.len();
            let m = y[0].len();
            let k = y.len();
            (0..n)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            (0..k)
                                .map(|l| &x[i][l] * &y[l][j])
                                .fold(Int::zero(), |acc, t| acc + t)
                        })
                        .collect()
                })
                .collect()
        };
        assert_eq!(mul(&mul(&u, &a), &v), s);
        // Diagonal divisibility.
        let mut prev = Int::one();
        for i in 0..3 {
            if s[i][i].is_zero() {
                continue;
            }
            assert!((&s[i][i] % &prev).is_zero());
            prev = s[i][i].clone();
        }
    }
}
