//! Rank, kernels and column spaces by exact elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, PrimInt, Signed, Zero};

use super::{ExactMatrix, GaussianRational, Rational};

fn lcm_of_denominators(row: &[GaussianRational]) -> BigInt {
    row.iter()
        .flat_map(|z| [z.re.denom(), z.im.denom()])
        .fold(BigInt::one(), |acc, d| acc.lcm(&d))
}

/// Gaussian integers over a fixed-width signed integer type, with every
/// operation checked for overflow.
trait Word: PrimInt + Signed {
    fn from_i64(x: i64) -> Option<Self>;
}

impl Word for i64 {
    fn from_i64(x: i64) -> Option<Self> {
        Some(x)
    }
}

impl Word for i128 {
    fn from_i64(x: i64) -> Option<Self> {
        Some(x as i128)
    }
}

fn gi_mul<T: Word>(a: (T, T), b: (T, T)) -> Option<(T, T)> {
    let re = a.0.checked_mul(&b.0)?.checked_sub(&a.1.checked_mul(&b.1)?)?;
    let im = a.0.checked_mul(&b.1)?.checked_add(&a.1.checked_mul(&b.0)?)?;
    Some((re, im))
}

/// Exact quotient of Gaussian integers known to divide.
fn gi_div_exact<T: Word>(a: (T, T), b: (T, T)) -> Option<(T, T)> {
    if b.1.is_zero() {
        return Some((a.0 / b.0, a.1 / b.0));
    }
    let num = gi_mul(a, (b.0, -b.1))?;
    let norm = b.0.checked_mul(&b.0)?.checked_add(&b.1.checked_mul(&b.1)?)?;
    Some((num.0 / norm, num.1 / norm))
}

/// The matrix with each row scaled to Gaussian integers, row-major, if
/// every entry fits in `T`.
fn integer_rows<T: Word>(m: &ExactMatrix) -> Option<Vec<(T, T)>> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        let row = m.row(i);
        let mut lcm: i64 = 1;
        for z in row {
            for part in [&z.re, &z.im] {
                let (_, d) = part.as_small()?;
                lcm = lcm.checked_mul(d / lcm.gcd(&d))?;
            }
        }
        let lcm = T::from_i64(lcm)?;
        for z in row {
            let scale = |r: &Rational| -> Option<T> {
                let (n, d) = r.as_small()?;
                T::from_i64(n)?.checked_mul(&(lcm / T::from_i64(d)?))
            };
            out.push((scale(&z.re)?, scale(&z.im)?));
        }
    }
    Some(out)
}

/// Pivot columns of a fraction-free elimination in `T`; `None` on overflow.
fn pivots_small<T: Word>(mut a: Vec<(T, T)>, rows: usize, cols: usize) -> Option<Vec<usize>> {
    let zero = (T::zero(), T::zero());
    let mut prev = (T::one(), T::zero());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i * cols + c] != zero) else {
            continue;
        };
        if p != r {
            for j in c..cols {
                a.swap(r * cols + j, p * cols + j);
            }
        }
        let pivot = a[r * cols + c];
        for i in r + 1..rows {
            let factor = std::mem::replace(&mut a[i * cols + c], zero);
            for j in c + 1..cols {
                let x = a[i * cols + j];
                let y = a[r * cols + j];
                let lhs = if x == zero { zero } else { gi_mul(pivot, x)? };
                let rhs = if factor == zero || y == zero { zero } else { gi_mul(factor, y)? };
                let num = (lhs.0.checked_sub(&rhs.0)?, lhs.1.checked_sub(&rhs.1)?);
                a[i * cols + j] = if num == zero { num } else { gi_div_exact(num, prev)? };
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    Some(pivots)
}

fn pivots_fixed<T: Word>(m: &ExactMatrix) -> Option<Vec<usize>> {
    pivots_small(integer_rows::<T>(m)?, m.rows(), m.cols())
}

type BigGauss = (BigInt, BigInt);

fn big_mul(a: &BigGauss, b: &BigGauss) -> BigGauss {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn big_div_exact(a: BigGauss, b: &BigGauss) -> BigGauss {
    if b.1.is_zero() {
        return (a.0 / &b.0, a.1 / &b.0);
    }
    let num = big_mul(&a, &(b.0.clone(), -&b.1));
    let norm = &b.0 * &b.0 + &b.1 * &b.1;
    (num.0 / &norm, num.1 / &norm)
}

/// Pivot columns by fraction-free elimination in arbitrary precision.
fn pivots_general(m: &ExactMatrix) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigGauss>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let k = lcm_of_denominators(row);
            let scale = |r: &Rational| r.numer() * (&k / r.denom());
            row.iter().map(|z| (scale(&z.re), scale(&z.im))).collect()
        })
        .collect();
    let is_zero = |z: &BigGauss| z.0.is_zero() && z.1.is_zero();
    let mut prev: BigGauss = (BigInt::one(), BigInt::zero());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut num = if is_zero(&row[j]) { BigGauss::default() } else { big_mul(&pivot, &row[j]) };
                if !is_zero(&factor) && !is_zero(&pivot_row[j]) {
                    let rhs = big_mul(&factor, &pivot_row[j]);
                    num = (num.0 - rhs.0, num.1 - rhs.1);
                }
                row[j] = if is_zero(&num) { num } else { big_div_exact(num, &prev) };
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Pivot columns of row echelon form: the first linearly independent
/// columns, in order.
///
/// Fraction-free (Bareiss) elimination after scaling each row by the lcm of
/// its denominators, so every entry is a Gaussian integer and each update
/// divides exactly by the previous pivot. Runs in checked `i64`, then `i128`,
/// and falls back to arbitrary precision when both overflow.
pub fn pivot_columns(m: &ExactMatrix) -> Vec<usize> {
    pivots_fixed::<i64>(m)
        .or_else(|| pivots_fixed::<i128>(m))
        .unwrap_or_else(|| pivots_general(m))
}

/// Rank over Q(i).
pub fn rank(m: &ExactMatrix) -> usize {
    pivot_columns(m).len()
}

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
pub fn rref(m: &ExactMatrix) -> (ExactMatrix, Vec<usize>) {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..cols {
            if !a[(r, j)].is_zero() {
                a[(r, j)] = &a[(r, j)] * &inv;
            }
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let factor = a[(i, c)].clone();
            for j in c..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let delta = &factor * &a[(r, j)];
                a[(i, j)] -= &delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of the right kernel, each vector scaled so its first nonzero coordinate is 1.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<GaussianRational>> {
    let cols = m.cols();
    let (red, pivots) = rref(m);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![GaussianRational::ZERO; cols];
            v[f] = GaussianRational::ONE;
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -&red[(k, f)];
            }
            let lead = v.iter().find(|x| !x.is_zero()).cloned().expect("free column is nonzero");
            if !lead.is_one() {
                let inv = lead.recip();
                for x in &mut v {
                    if !x.is_zero() {
                        *x = &*x * &inv;
                    }
                }
            }
            v
        })
        .collect()
}

/// Kernel basis as the columns of a `cols × nullity` matrix.
pub fn kernel_matrix(m: &ExactMatrix) -> ExactMatrix {
    ExactMatrix::from_columns(m.cols(), &kernel_basis(m))
}

/// A maximal linearly independent subset of the columns of `m`, in order.
pub fn column_basis(m: &ExactMatrix) -> ExactMatrix {
    let cols: Vec<_> = pivot_columns(m).into_iter().map(|j| m.column(j)).collect();
    ExactMatrix::from_columns(m.rows(), &cols)
}

/// Exact inverse by Gauss–Jordan on `[m | I]`; `None` if `m` is singular or not square.
pub fn inverse(m: &ExactMatrix) -> Option<ExactMatrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let aug = m.hstack(&ExactMatrix::identity(n)).expect("same row count");
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.submatrix(0..n, n..2 * n))
}
