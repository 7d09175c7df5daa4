//! Exact linear algebra: fraction-free echelon form and nullspace vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

/// Row echelon form produced by Bareiss elimination over the integers.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

/// Each row scaled by the lcm of its denominators.
fn integer_rows(m: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let lr = Rational::from_integer(l);
            row.iter().map(|c| (c * &lr).to_integer()).collect()
        })
        .collect()
}

fn bareiss(mut a: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // Smallest pivot by bit length keeps intermediate growth down.
        let Some(pr) = (r..nrows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits())
        else {
            continue;
        };
        a.swap(r, pr);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss division must be exact");
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

pub fn rank(m: &[Vec<Rational>], ncols: usize) -> usize {
    bareiss(integer_rows(m), ncols).pivots.len()
}

/// Some nonzero `v` with `m·v = 0`, or `None` when the kernel is trivial.
pub fn nullspace_vector(m: &[Vec<Rational>], ncols: usize) -> Option<Vec<Rational>> {
    let ech = bareiss(integer_rows(m), ncols);
    let free = (0..ncols).find(|c| !ech.pivots.contains(c))?;
    let mut x = vec![Rational::zero(); ncols];
    x[free] = Rational::one();
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots).rev() {
        let s = (pc + 1..ncols)
            .filter(|&j| !row[j].is_zero() && !x[j].is_zero())
            .map(|j| Rational::from_integer(row[j].clone()) * &x[j])
            .fold(Rational::zero(), |a, b| a + b);
        x[pc] = -s / Rational::from_integer(row[pc].clone());
    }
    Some(primitive(x))
}

/// Scales to coprime integers with a positive first nonzero entry.
fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v;
    }
    let sign = match ints.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|c| Rational::from_integer(c / &g * &sign))
        .collect()
}

/// Some solution of `m·x = rhs`, or `None` when the system is inconsistent.
pub fn solve(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = m.first().map_or(0, Vec::len);
    let aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let ech = bareiss(integer_rows(&aug), ncols + 1);
    if ech.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots).rev() {
        let s = (pc + 1..ncols)
            .map(|j| Rational::from_integer(row[j].clone()) * &x[j])
            .fold(Rational::zero(), |a, b| a + b);
        x[pc] = (Rational::from_integer(row[ncols].clone()) - s) / Rational::from_integer(row[pc].clone());
    }
    Some(x)
}
