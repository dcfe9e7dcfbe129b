//! Independent reference computations used only by tests. Nothing here calls
//! into the library's linear algebra or face code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn moment(t: &BigInt, d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for _ in 0..d {
        let next = out.last().unwrap() * t;
        out.push(next);
    }
    out
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form over the rationals; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn to_q(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Primitive integer generator of a one-dimensional kernel.
pub fn kernel_line(rows: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    let cols = rows[0].len();
    let mut m = to_q(rows);
    let pivots = rref(&mut m);
    if pivots.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![BigRational::zero(); cols];
    v[free] = BigRational::one();
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[i][free].clone();
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.iter().map(|x| x / &g).collect())
}

pub fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut m = to_q(rows);
    let mut acc = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc *= m[c][c].clone();
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    acc.to_integer()
}

/// gcd of all maximal minors of a `r x (r+1)` matrix.
pub fn maximal_minor_gcd(rows: &[Vec<BigInt>]) -> BigInt {
    let cols = rows[0].len();
    let mut g = BigInt::zero();
    for skip in 0..cols {
        let sub: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, x)| x.clone()).collect())
            .collect();
        g = g.gcd(&det(&sub));
    }
    g
}

/// Exact solution of a square nonsingular system.
pub fn solve(rows: &[Vec<BigInt>], rhs: &[BigInt]) -> Option<Vec<BigRational>> {
    let aug: Vec<Vec<BigInt>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect())
        .collect();
    let mut m = to_q(&aug);
    let n = rows[0].len();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Facets found by testing every `d`-subset: the hyperplane through it must
/// leave all other vertices strictly on one side. Normals point inward.
pub fn brute_facets(d: usize, tau: &[BigInt]) -> Vec<(Vec<usize>, Vec<BigInt>)> {
    let verts: Vec<Vec<BigInt>> = tau.iter().map(|t| moment(t, d)).collect();
    let mut out = Vec::new();
    for w in subsets(tau.len(), d) {
        let rows: Vec<Vec<BigInt>> = w.iter().map(|&i| verts[i - 1].clone()).collect();
        let Some(mut normal) = kernel_line(&rows) else {
            continue;
        };
        let vals: Vec<BigInt> = (1..=tau.len())
            .filter(|i| !w.contains(i))
            .map(|j| dot(&normal, &verts[j - 1]))
            .collect();
        if vals.iter().all(Signed::is_negative) {
            normal.iter_mut().for_each(|x| *x = -x.clone());
        } else if !vals.iter().all(Signed::is_positive) {
            continue;
        }
        out.push((w, normal));
    }
    out
}

pub fn strictly_inside(normals: &[(Vec<usize>, Vec<BigInt>)], x: &[BigInt]) -> bool {
    normals.iter().all(|(_, n)| dot(n, x).is_positive())
}

pub fn inside(normals: &[(Vec<usize>, Vec<BigInt>)], x: &[BigInt]) -> bool {
    normals.iter().all(|(_, n)| !dot(n, x).is_negative())
}

/// Complete homogeneous symmetric polynomial `h_m(xs)`.
pub fn complete_h(m: usize, xs: &[BigInt]) -> BigInt {
    // dp[j] = h_j of the variables seen so far
    let mut dp = vec![BigInt::zero(); m + 1];
    dp[0] = BigInt::one();
    for x in xs {
        for j in 1..=m {
            let t = &dp[j - 1] * x;
            dp[j] += t;
        }
    }
    dp[m].clone()
}

/// `b_S[m] = (-1)^{q-1} h_{m-q+1}(tau_S)`, zero below index `q - 1`.
pub fn bvec_oracle(d: usize, tau_s: &[BigInt]) -> Vec<BigInt> {
    let q = tau_s.len();
    (0..=d)
        .map(|m| {
            if m + 1 < q {
                BigInt::zero()
            } else {
                let h = complete_h(m + 1 - q, tau_s);
                if q % 2 == 1 {
                    h
                } else {
                    -h
                }
            }
        })
        .collect()
}

/// Lattice points of `kP` by scanning the bounding box of the dilated vertices.
pub fn box_points(d: usize, tau: &[BigInt], k: i64) -> Vec<Vec<BigInt>> {
    let normals = brute_facets(d, tau);
    let verts: Vec<Vec<BigInt>> = tau.iter().map(|t| moment(t, d)).collect();
    let kk = BigInt::from(k);
    let bounds: Vec<(i64, i64)> = (1..=d)
        .map(|c| {
            let lo = verts.iter().map(|v| &v[c] * &kk).min().unwrap();
            let hi = verts.iter().map(|v| &v[c] * &kk).max().unwrap();
            (lo.try_into().unwrap(), hi.try_into().unwrap())
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![kk.clone()];
    fn go(
        c: usize,
        bounds: &[(i64, i64)],
        cur: &mut Vec<BigInt>,
        normals: &[(Vec<usize>, Vec<BigInt>)],
        out: &mut Vec<Vec<BigInt>>,
    ) {
        if c == bounds.len() {
            if inside(normals, cur) {
                out.push(cur.clone());
            }
            return;
        }
        for v in bounds[c].0..=bounds[c].1 {
            cur.push(BigInt::from(v));
            go(c + 1, bounds, cur, normals, out);
            cur.pop();
        }
    }
    go(0, &bounds, &mut cur, &normals, &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Every tuple in `[1, max]^len`, lexicographic.
pub fn gap_tuples(len: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (1..=max).map(move |g| {
                    let mut v = p.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn tau_from_gaps(gaps: &[i64]) -> Vec<BigInt> {
    let mut t = vec![0i64];
    for g in gaps {
        t.push(t.last().unwrap() + g);
    }
    ints(&t)
}
