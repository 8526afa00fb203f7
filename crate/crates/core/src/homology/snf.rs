//! Smith normal form over `Z`.
//!
//! Sparse phase: repeatedly pick a `±1` entry (fewest-entries column first,
//! then the shortest row) and take the Schur complement, which leaves the
//! invariant factors of the rest unchanged. Entries start as checked `i64`;
//! on overflow the whole elimination restarts over `BigInt`. Whatever has no
//! unit entries left is finished by a dense `BigInt` reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Rank and invariant factors `d_1 | d_2 | ... | d_rank` (all positive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    pub factors: Vec<BigInt>,
}

impl SmithForm {
    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    smith_normal_form_within(m, &Budget::unlimited()).expect("an unlimited budget never expires")
}

/// [`smith_normal_form`] under a time budget.
pub fn smith_normal_form_within(m: &IntMatrix, budget: &Budget) -> Result<SmithForm> {
    let ncols = m.ncols();
    let small = match m.to_small_rows() {
        Some(rows) => eliminate(rows, ncols, budget),
        None => Err(Halt::Overflow),
    };
    let (units, residual) = match small {
        Ok((units, residual)) => (units, residual.iter().map(|r| widen(r)).collect()),
        Err(Halt::TimedOut) => return Err(Error::TimedOut),
        Err(Halt::Overflow) => match eliminate(m.to_big_rows(), ncols, budget) {
            Ok(done) => done,
            Err(Halt::TimedOut) => return Err(Error::TimedOut),
            Err(Halt::Overflow) => unreachable!("BigInt arithmetic cannot overflow"),
        },
    };
    let mut factors = vec![BigInt::one(); units];
    factors.extend(dense_diagonal(residual, budget)?);
    normalize_chain(&mut factors);
    Ok(SmithForm {
        rank: factors.len(),
        factors,
    })
}

/// Why the sparse phase stopped early.
enum Halt {
    Overflow,
    TimedOut,
}

fn widen(row: &[(u32, i64)]) -> Vec<(u32, BigInt)> {
    row.iter().map(|(c, v)| (*c, BigInt::from(*v))).collect()
}

trait Coeff: Clone {
    fn is_unit(&self) -> bool;
    fn is_nil(&self) -> bool;
    /// `self - f * x`, `None` on overflow.
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self>;
    fn mul(&self, x: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
}

impl Coeff for i64 {
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(f.checked_mul(*x)?)
    }
    fn mul(&self, x: &Self) -> Option<Self> {
        self.checked_mul(*x)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl Coeff for BigInt {
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        Some(self - f * x)
    }
    fn mul(&self, x: &Self) -> Option<Self> {
        Some(self * x)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

type Row<T> = Vec<(u32, T)>;

fn entry<T>(row: &[(u32, T)], c: u32) -> Option<&T> {
    row.binary_search_by_key(&c, |&(k, _)| k)
        .ok()
        .map(|i| &row[i].1)
}

/// `target - f * pivot` as a sorted sparse row; also reports columns that
/// were absent in `target` and are now present.
fn axpy<T: Coeff>(target: &[(u32, T)], f: &T, pivot: &[(u32, T)]) -> Option<(Row<T>, Vec<u32>)> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let mut fresh = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ci = target.get(i).map_or(u32::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i].clone());
            i += 1;
        } else if cj < ci {
            let v = pivot[j].1.mul(f)?.neg()?;
            out.push((cj, v));
            fresh.push(cj);
            j += 1;
        } else {
            let v = target[i].1.sub_mul(f, &pivot[j].1)?;
            if !v.is_nil() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some((out, fresh))
}

/// Unit-pivot elimination. Returns the number of unit pivots taken and the
/// residual rows (restricted to surviving columns, empty rows dropped).
fn eliminate<T: Coeff>(
    rows: Vec<Row<T>>,
    ncols: usize,
    budget: &Budget,
) -> std::result::Result<(usize, Vec<Row<T>>), Halt> {
    let mut ticks = 0u32;
    let mut rows: Vec<Option<Row<T>>> = rows.into_iter().map(Some).collect();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row.as_ref().expect("fresh") {
            col_rows[*c as usize].push(r as u32);
        }
    }
    let mut done = vec![false; ncols];
    let mut order: Vec<usize> = (0..ncols).collect();
    order.sort_by_key(|&c| col_rows[c].len());

    let mut units = 0;
    let mut progress = true;
    while progress {
        progress = false;
        for &c in &order {
            if done[c] {
                continue;
            }
            budget.tick(&mut ticks).map_err(|_| Halt::TimedOut)?;
            let cc = c as u32;
            // refresh the (possibly stale) occupancy list
            let mut live: Vec<u32> = std::mem::take(&mut col_rows[c]);
            live.sort_unstable();
            live.dedup();
            live.retain(|&r| {
                rows[r as usize]
                    .as_ref()
                    .is_some_and(|row| entry(row, cc).is_some())
            });
            if live.is_empty() {
                done[c] = true;
                continue;
            }
            let pivot = live
                .iter()
                .copied()
                .filter(|&r| {
                    entry(rows[r as usize].as_ref().unwrap(), cc)
                        .unwrap()
                        .is_unit()
                })
                .min_by_key(|&r| rows[r as usize].as_ref().unwrap().len());
            let Some(p) = pivot else {
                col_rows[c] = live;
                continue;
            };
            let prow = rows[p as usize].take().expect("live pivot row");
            let pval = entry(&prow, cc).unwrap().clone();
            for &r in &live {
                if r == p {
                    continue;
                }
                let target = rows[r as usize].as_ref().unwrap();
                // pval is ±1, so its inverse is itself
                let f = entry(target, cc)
                    .unwrap()
                    .mul(&pval)
                    .ok_or(Halt::Overflow)?;
                let (updated, fresh) = axpy(target, &f, &prow).ok_or(Halt::Overflow)?;
                for k in fresh {
                    col_rows[k as usize].push(r);
                }
                rows[r as usize] = Some(updated);
            }
            done[c] = true;
            units += 1;
            progress = true;
        }
    }

    let mut remap = vec![u32::MAX; ncols];
    let mut next = 0u32;
    for c in 0..ncols {
        if !done[c] {
            remap[c] = next;
            next += 1;
        }
    }
    let residual = rows
        .into_iter()
        .flatten()
        .filter(|row| !row.is_empty())
        .map(|row| {
            row.into_iter()
                .map(|(c, v)| {
                    debug_assert!(!done[c as usize], "eliminated column reappeared");
                    (remap[c as usize], v)
                })
                .collect()
        })
        .collect();
    Ok((units, residual))
}

/// Diagonalizes a (small) residual matrix over `BigInt`; returns the nonzero
/// diagonal entries in absolute value, not yet in divisibility order.
fn dense_diagonal(rows: Vec<Row<BigInt>>, budget: &Budget) -> Result<Vec<BigInt>> {
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let ncols = rows
        .iter()
        .flat_map(|r| r.iter().map(|(c, _)| *c as usize + 1))
        .max()
        .unwrap_or(0);
    let mut a: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| {
            let mut dense = vec![BigInt::zero(); ncols];
            for (c, v) in r {
                dense[c as usize] = v;
            }
            dense
        })
        .collect();
    dense_snf(&mut a, budget)
}

/// In-place diagonalization by unimodular row and column operations.
fn dense_snf(a: &mut [Vec<BigInt>], budget: &Budget) -> Result<Vec<BigInt>> {
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..nr.min(nc) {
        budget.check()?;
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..nr {
                let (head, tail) = a.split_at_mut(i);
                let (pivot, row) = (&head[t], &mut tail[0]);
                if row[t].is_zero() {
                    continue;
                }
                let q = row[t].div_floor(&pivot[t]);
                for (x, y) in row[t..nc].iter_mut().zip(&pivot[t..nc]) {
                    *x -= &q * y;
                }
                if !row[t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // a remainder is smaller than the pivot; move the smallest one in
            let mut best = (t, t);
            for i in t..nr {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..nc {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            } else if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
    }
    Ok(diag)
}

/// Turns any list of nonzero diagonal entries into the invariant-factor chain
/// via `(a, b) -> (gcd, lcm)`.
fn normalize_chain(d: &mut [BigInt]) {
    for x in d.iter_mut() {
        *x = x.abs();
    }
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[i].is_one() {
                break;
            }
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d.sort();
    debug_assert!(d.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
}

/// Rank only, for callers that do not need torsion; same exact arithmetic.
pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn snf(rows: &[Vec<i64>]) -> (usize, Vec<i64>) {
        let s = smith_normal_form(&IntMatrix::from_dense(rows));
        (
            s.rank,
            s.factors.iter().map(|f| f.to_i64().unwrap()).collect(),
        )
    }

    /// Invariant factors from determinantal divisors: d_k = gcd of all k×k minors.
    fn determinantal_factors(a: &[Vec<i64>]) -> Vec<i64> {
        fn det(m: Vec<Vec<i128>>) -> i128 {
            // Bareiss fraction-free elimination
            let n = m.len();
            let mut m = m;
            let mut sign = 1;
            let mut prev = 1i128;
            for k in 0..n {
                if m[k][k] == 0 {
                    match (k + 1..n).find(|&i| m[i][k] != 0) {
                        Some(i) => {
                            m.swap(k, i);
                            sign = -sign;
                        }
                        None => return 0,
                    }
                }
                for i in k + 1..n {
                    for j in k + 1..n {
                        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                    }
                }
                prev = m[k][k];
            }
            sign * m[n - 1][n - 1]
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
                .collect()
        }
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let (nr, nc) = (a.len(), a[0].len());
        let mut dets = vec![1i128];
        for k in 1..=nr.min(nc) {
            let mut g = 0;
            for rs in subsets(nr, k) {
                for cs in subsets(nc, k) {
                    let m = rs
                        .iter()
                        .map(|&r| cs.iter().map(|&c| a[r][c] as i128).collect())
                        .collect();
                    g = gcd(g, det(m));
                }
            }
            if g == 0 {
                break;
            }
            dets.push(g);
        }
        dets.windows(2).map(|w| (w[1] / w[0]) as i64).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(snf(&[vec![2, 0], vec![0, 0]]), (1, vec![2]));
        assert_eq!(
            snf(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            (3, vec![1, 1, 1])
        );
        let a = vec![vec![1, 1], vec![1, -1]];
        assert_eq!(determinantal_factors(&a), vec![1, 2]);
        assert_eq!(snf(&a), (2, vec![1, 2]));
        assert_eq!(snf(&[vec![0, 0], vec![0, 0]]), (0, vec![]));
        assert_eq!(snf(&[vec![6, 0], vec![0, 4]]), (2, vec![2, 12]));
        assert_eq!(
            snf(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
            (3, vec![2, 6, 12])
        );
    }

    #[test]
    fn empty_shapes() {
        let s = smith_normal_form(&IntMatrix::zeros(0, 5));
        assert_eq!(s.rank, 0);
        let s = smith_normal_form(&IntMatrix::zeros(4, 0));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn agrees_with_determinantal_divisors() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let nr = rng.gen_range(1..=4);
            let nc = rng.gen_range(1..=4);
            let a: Vec<Vec<i64>> = (0..nr)
                .map(|_| {
                    (0..nc)
                        .map(|_| {
                            if rng.gen_bool(0.4) {
                                0
                            } else {
                                rng.gen_range(-6..=6)
                            }
                        })
                        .collect()
                })
                .collect();
            let (rank, factors) = snf(&a);
            let expect = determinantal_factors(&a);
            assert_eq!(rank, expect.len(), "{a:?}");
            assert_eq!(factors, expect, "{a:?}");
        }
    }

    #[test]
    fn invariant_under_shuffles() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let nr = rng.gen_range(2..=9);
            let nc = rng.gen_range(2..=9);
            let a: Vec<Vec<i64>> = (0..nr)
                .map(|_| {
                    (0..nc)
                        .map(|_| {
                            if rng.gen_bool(0.5) {
                                0
                            } else {
                                rng.gen_range(-4..=4)
                            }
                        })
                        .collect()
                })
                .collect();
            let base = snf(&a);
            let mut rperm: Vec<usize> = (0..nr).collect();
            let mut cperm: Vec<usize> = (0..nc).collect();
            rperm.shuffle(&mut rng);
            cperm.shuffle(&mut rng);
            let b: Vec<Vec<i64>> = rperm
                .iter()
                .map(|&r| cperm.iter().map(|&c| a[r][c]).collect())
                .collect();
            assert_eq!(snf(&b), base);
        }
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        // unit pivot at (0,0) forces big * big into the other row
        let a = vec![vec![1, big], vec![big, 3]];
        let s = smith_normal_form(&IntMatrix::from_dense(&a));
        let det = BigInt::from(3) - BigInt::from(big) * BigInt::from(big);
        assert_eq!(s.rank, 2);
        assert_eq!(s.factors, vec![BigInt::one(), det.abs()]);
    }

    #[test]
    fn huge_entries_stay_exact() {
        let mut m = IntMatrix::zeros(2, 2);
        let p = BigInt::parse_bytes(b"170141183460469231731687303715884105727", 10).unwrap();
        m.set(0, 0, p.clone() * 2);
        m.set(1, 1, p.clone() * 3);
        let s = smith_normal_form(&m);
        assert_eq!(s.factors, vec![p.clone(), p * 6]);
    }
}
