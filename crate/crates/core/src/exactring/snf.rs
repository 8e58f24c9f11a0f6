use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseMatrix;
use super::ring::{CoefficientRing, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero diagonal entries, each dividing the next. Unit factors of the
    /// ring are stripped, so over `Z[1/S]` they contain no inverted prime.
    pub invariants: Vec<BigInt>,
    pub left: SparseMatrix,
    pub right: SparseMatrix,
    pub left_inv: SparseMatrix,
    pub right_inv: SparseMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

type Dense = Vec<Vec<BigInt>>;

fn ident(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn to_sparse(d: &Dense, rows: usize, cols: usize) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(rows, cols);
    for (i, r) in d.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            if !v.is_zero() {
                m.set(i, j, BigRational::from_integer(v.clone()));
            }
        }
    }
    m
}

/// Working state: `a = L * input * R` with inverses kept in step.
struct State {
    a: Dense,
    l: Dense,
    li: Dense,
    r: Dense,
    ri: Dense,
}

impl State {
    // row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.l] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(src.iter()) {
                *x += c * y;
            }
        }
        // inverse: column_j -= c * column_i
        for row in self.li.iter_mut() {
            let t = c * &row[i];
            row[j] -= t;
        }
    }

    // col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.r] {
            for row in m.iter_mut() {
                let t = c * &row[j];
                row[i] += t;
            }
        }
        // inverse: row_j -= c * row_i
        let src = self.ri[i].clone();
        for (x, y) in self.ri[j].iter_mut().zip(src.iter()) {
            *x -= c * y;
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.l.swap(i, j);
        for row in self.li.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut().chain(self.r.iter_mut()) {
            row.swap(i, j);
        }
        self.ri.swap(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for v in self.a[i].iter_mut().chain(self.l[i].iter_mut()) {
            *v = -&*v;
        }
        for row in self.li.iter_mut() {
            row[i] = -&row[i];
        }
    }
}

/// Smith normal form over `Z` of an integer matrix, with unimodular transforms.
/// Pivots are the entries of smallest absolute value, ties broken by the lowest
/// `(row, col)` position.
fn integer_snf(a: Dense, rows: usize, cols: usize) -> (Vec<BigInt>, Dense, Dense, Dense, Dense) {
    let mut s = State { a, l: ident(rows), li: ident(rows), r: ident(cols), ri: ident(cols) };
    let mut invariants = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = &s.a[i][j];
                if v.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if s.a[bi][bj].abs() <= v.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        let mut dirty = false;
        for i in t + 1..rows {
            if s.a[i][t].is_zero() {
                continue;
            }
            let q = s.a[i][t].div_floor(&s.a[t][t]);
            s.add_row(i, t, &-q);
            dirty |= !s.a[i][t].is_zero();
        }
        for j in t + 1..cols {
            if s.a[t][j].is_zero() {
                continue;
            }
            let q = s.a[t][j].div_floor(&s.a[t][t]);
            s.add_col(j, t, &-q);
            dirty |= !s.a[t][j].is_zero();
        }
        if dirty {
            continue;
        }
        // enforce divisibility on the remaining block
        let p = s.a[t][t].clone();
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.a[i][j].is_multiple_of(&p)));
        if let Some(i) = bad {
            s.add_row(t, i, &BigInt::one());
            continue;
        }
        if p.is_negative() {
            s.negate_row(t);
        }
        invariants.push(s.a[t][t].clone());
        t += 1;
    }
    (invariants, s.l, s.li, s.r, s.ri)
}

/// Smith normal form over `Z` or `Z[1/S]`.
pub fn snf(m: &SparseMatrix, ring: &CoefficientRing) -> Result<SnfResult> {
    match ring {
        CoefficientRing::Integers | CoefficientRing::LocalizedIntegers(_) => {}
        other => return Err(Error::UnsupportedRing(format!("Smith normal form needs Z or Z[1/S], got {other}"))),
    }
    let (rows, cols) = (m.rows, m.cols);
    // clear denominators column by column; the scaling is a unit over Z[1/S]
    let mut col_scale = vec![BigInt::one(); cols];
    for ((_, j), v) in m.entries() {
        ring.try_normalize(v)?;
        col_scale[*j] = col_scale[*j].lcm(v.denom());
    }
    let mut a: Dense = vec![vec![BigInt::zero(); cols]; rows];
    for ((i, j), v) in m.entries() {
        a[*i][*j] = (v * BigRational::from_integer(col_scale[*j].clone())).to_integer();
    }
    let (inv, mut l, mut li, r, ri) = integer_snf(a, rows, cols);
    // right = diag(scale) * R, right_inv = R^-1 * diag(1/scale)
    let mut right = to_sparse(&r, cols, cols);
    let mut right_inv = to_sparse(&ri, cols, cols);
    for ((i, j), v) in right.clone().entries() {
        right.set(*i, *j, v * BigRational::from_integer(col_scale[*i].clone()));
    }
    for ((i, j), v) in right_inv.clone().entries() {
        right_inv.set(*i, *j, v / BigRational::from_integer(col_scale[*j].clone()));
    }
    // strip unit parts of invariants by rescaling rows of L
    let mut invariants = Vec::with_capacity(inv.len());
    let mut row_scale: Vec<Scalar> = vec![Scalar::one(); rows];
    for (k, d) in inv.iter().enumerate() {
        let stripped = ring.strip_units(d);
        row_scale[k] = BigRational::new(stripped.clone(), d.clone());
        invariants.push(stripped);
    }
    let mut left = SparseMatrix::zeros(rows, rows);
    let mut left_inv = SparseMatrix::zeros(rows, rows);
    for i in 0..rows {
        for j in 0..rows {
            let x = std::mem::take(&mut l[i][j]);
            if !x.is_zero() {
                left.set(i, j, BigRational::from_integer(x) * &row_scale[i]);
            }
            let y = std::mem::take(&mut li[i][j]);
            if !y.is_zero() {
                left_inv.set(i, j, BigRational::from_integer(y) / &row_scale[j]);
            }
        }
    }
    Ok(SnfResult { invariants, left, right, left_inv, right_inv })
}

/// Invariant factors (stripped of units, including the unit ones as `1`) of a
/// possibly large sparse integer matrix. Unit pivots are eliminated sparsely with
/// a Markowitz choice; the leftover block goes through the dense algorithm.
pub fn invariant_factors(m: &SparseMatrix, ring: &CoefficientRing) -> Result<Vec<BigInt>> {
    let is_unit = |v: &BigInt| ring.strip_units(v).is_one();
    let mut col_scale: BTreeMap<usize, BigInt> = BTreeMap::new();
    for ((_, j), v) in m.entries() {
        ring.try_normalize(v)?;
        let e = col_scale.entry(*j).or_insert_with(BigInt::one);
        *e = e.lcm(v.denom());
    }
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for ((i, j), v) in m.entries() {
        let x = (v * BigRational::from_integer(col_scale[j].clone())).to_integer();
        rows[*i].insert(*j, x);
        cols[*j].insert(*i);
    }
    let mut units = 0usize;
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        'scan: for (i, r) in rows.iter().enumerate() {
            if r.is_empty() {
                continue;
            }
            for (j, v) in r {
                if is_unit(v) {
                    let cost = (r.len() - 1) * (cols[*j].len() - 1);
                    if best.is_none_or(|b| cost < b.2) {
                        best = Some((i, *j, cost));
                        if cost == 0 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        units += 1;
        let prow = std::mem::take(&mut rows[pi]);
        for j in prow.keys() {
            cols[*j].remove(&pi);
        }
        let pv = prow[&pj].clone();
        let others: Vec<usize> = cols[pj].iter().copied().collect();
        for r in others {
            let a = rows[r][&pj].clone();
            // row_r := pv*row_r - a*prow; pv is a unit so this keeps the lattice up to a unit
            for x in rows[r].values_mut() {
                *x *= &pv;
            }
            for (j, y) in &prow {
                let e = rows[r].entry(*j).or_insert_with(BigInt::zero);
                *e -= &a * y;
                if e.is_zero() {
                    rows[r].remove(j);
                    cols[*j].remove(&r);
                } else {
                    cols[*j].insert(r);
                }
            }
            // strip unit content from the row to keep numbers small
            let g = rows[r].values().fold(BigInt::zero(), |g, x| g.gcd(x));
            if g.is_zero() {
                continue;
            }
            let u = &g / ring.strip_units(&g);
            if !u.is_zero() && !u.is_one() {
                for x in rows[r].values_mut() {
                    *x /= &u;
                }
            }
        }
        cols[pj].clear();
    }
    // dense remainder
    let live_rows: Vec<usize> = (0..rows.len()).filter(|i| !rows[*i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..cols.len()).filter(|j| !cols[*j].is_empty()).collect();
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, j)| (*j, k)).collect();
    let mut dense: Dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (k, i) in live_rows.iter().enumerate() {
        for (j, v) in &rows[*i] {
            dense[k][col_pos[j]] = v.clone();
        }
    }
    let (inv, ..) = integer_snf(dense, live_rows.len(), live_cols.len());
    let mut out = vec![BigInt::one(); units];
    out.extend(inv.iter().map(|d| ring.strip_units(d)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &SparseMatrix, ring: &CoefficientRing) -> Vec<i64> {
        let s = snf(m, ring).unwrap();
        let diag = s.left.mul(m).unwrap().mul(&s.right).unwrap();
        for ((i, j), v) in diag.entries() {
            assert_eq!(i, j, "off-diagonal entry");
            assert_eq!(v.to_integer(), s.invariants[*i]);
        }
        assert_eq!(diag.nnz(), s.invariants.len());
        assert_eq!(s.left.mul(&s.left_inv).unwrap(), SparseMatrix::identity(m.rows));
        assert_eq!(s.right.mul(&s.right_inv).unwrap(), SparseMatrix::identity(m.cols));
        let fast = invariant_factors(m, ring).unwrap();
        assert_eq!(fast, s.invariants);
        s.invariants.iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn diag_2_3() {
        let m = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(check(&m, &CoefficientRing::Integers), vec![1, 6]);
    }

    #[test]
    fn zero_matrix() {
        let m = SparseMatrix::zeros(2, 2);
        assert!(check(&m, &CoefficientRing::Integers).is_empty());
    }

    #[test]
    fn two_by_two() {
        let m = SparseMatrix::from_dense(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(check(&m, &CoefficientRing::Integers), vec![2, 4]);
    }

    #[test]
    fn localized_strips_units() {
        let z2 = CoefficientRing::localized([2]).unwrap();
        let m = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(check(&m, &z2), vec![1, 3]);
        let mut h = SparseMatrix::zeros(1, 2);
        h.set(0, 0, crate::exactring::ring::ratio(3, 4));
        h.set(0, 1, crate::exactring::ring::ratio(9, 1));
        assert_eq!(check(&h, &z2), vec![3]);
    }
}
