use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::echelon::{kernel_of, rank_of, FVec, FieldHomology};
use super::field::{Field, FieldKind};
use super::matrix::{SparseMatrix, SparseVec};
use super::module::FGModule;
use super::ring::CoefficientRing;
use super::snf::{invariant_factors, snf};
use crate::error::{Error, Result};
use crate::with_field;

/// Above this many basis elements integral homology skips witnesses and only
/// computes invariant factors by sparse elimination.
pub const DENSE_WITNESS_LIMIT: usize = 120;

pub fn field_columns<F: Field>(f: &F, m: &SparseMatrix) -> Vec<FVec<F::Elem>> {
    m.columns()
        .into_iter()
        .map(|c| c.iter().map(|(i, v)| (*i, f.from_scalar(v))).filter(|(_, v)| !f.is_zero(v)).collect())
        .collect()
}

pub fn to_scalar_vec<F: Field>(f: &F, v: &[(usize, F::Elem)]) -> SparseVec {
    v.iter().map(|(i, x)| (*i, f.to_scalar(x))).collect()
}

pub fn from_scalar_vec<F: Field>(f: &F, v: &[(usize, BigRational)]) -> FVec<F::Elem> {
    v.iter().map(|(i, x)| (*i, f.from_scalar(x))).filter(|(_, x)| !f.is_zero(x)).collect()
}

/// Kernel basis of a matrix over a field.
pub fn kernel_basis(m: &SparseMatrix, ring: &CoefficientRing) -> Result<Vec<SparseVec>> {
    let kind = FieldKind::of(ring)?;
    Ok(with_field!(kind, f => {
        kernel_of(&f, &field_columns(&f, m)).iter().map(|v| to_scalar_vec(&f, v)).collect()
    }))
}

/// Rank of a matrix over a field, or the rank over the fraction field for `Z`, `Z[1/S]`.
pub fn rank(m: &SparseMatrix, ring: &CoefficientRing) -> Result<usize> {
    match ring {
        CoefficientRing::Rationals | CoefficientRing::PrimeField(_) => {
            let kind = FieldKind::of(ring)?;
            Ok(with_field!(kind, f => rank_of(&f, field_columns(&f, m))))
        }
        CoefficientRing::Integers | CoefficientRing::LocalizedIntegers(_) => {
            let f = super::field::RationalField;
            Ok(rank_of(&f, field_columns(&f, m)))
        }
        CoefficientRing::CyclicRing(m_) => Err(Error::UnsupportedRing(format!("rank over Z/{m_} is not defined"))),
    }
}

fn check_pair(ring: &CoefficientRing, d_out: &SparseMatrix, d_in: &SparseMatrix) -> Result<()> {
    if d_out.cols != d_in.rows {
        return Err(Error::Shape(format!(
            "d_out has {} columns but d_in has {} rows",
            d_out.cols, d_in.rows
        )));
    }
    let comp = d_out.mul(d_in)?;
    if !comp.is_zero_in(ring) {
        return Err(Error::NotAComplex("d_out * d_in is nonzero".into()));
    }
    Ok(())
}

/// `ker(d_out) / im(d_in)` as a finitely generated module.
pub fn homology_at(ring: &CoefficientRing, d_out: &SparseMatrix, d_in: &SparseMatrix) -> Result<FGModule> {
    check_pair(ring, d_out, d_in)?;
    match ring {
        CoefficientRing::Rationals | CoefficientRing::PrimeField(_) => {
            let kind = FieldKind::of(ring)?;
            Ok(with_field!(kind, f => {
                let h = FieldHomology::new(&f, &field_columns(&f, d_out), &field_columns(&f, d_in));
                let w: Vec<SparseVec> = h.witnesses.iter().map(|v| to_scalar_vec(&f, v)).collect();
                FGModule { ring: ring.clone(), free_rank: w.len(), torsion: Vec::new(), witnesses: Some(w) }
            }))
        }
        CoefficientRing::Integers | CoefficientRing::LocalizedIntegers(_) => {
            if d_out.cols <= DENSE_WITNESS_LIMIT {
                integral_with_witnesses(ring, d_out, d_in)
            } else {
                integral_invariants(ring, d_out, d_in)
            }
        }
        CoefficientRing::CyclicRing(m) => cyclic_lattice(*m, d_out, d_in),
    }
}

fn integral_invariants(ring: &CoefficientRing, d_out: &SparseMatrix, d_in: &SparseMatrix) -> Result<FGModule> {
    let r_out = invariant_factors(d_out, ring)?.len();
    let inv_in = invariant_factors(d_in, ring)?;
    let free_rank = d_out.cols - r_out - inv_in.len();
    let torsion: Vec<BigInt> = inv_in.into_iter().filter(|d| !d.is_one()).collect();
    Ok(FGModule { ring: ring.clone(), free_rank, torsion, witnesses: None })
}

fn columns_range(m: &SparseMatrix, from: usize) -> Vec<SparseVec> {
    m.columns().into_iter().skip(from).collect()
}

fn integral_with_witnesses(ring: &CoefficientRing, d_out: &SparseMatrix, d_in: &SparseMatrix) -> Result<FGModule> {
    let c = d_out.cols;
    let s1 = snf(d_out, ring)?;
    let r1 = s1.rank();
    let k = c - r1;
    let kernel = SparseMatrix::from_columns(c, &columns_range(&s1.right, r1));
    // coordinates of boundaries in the kernel basis
    let coords_full = s1.right_inv.mul(d_in)?;
    let mut coords = SparseMatrix::zeros(k, d_in.cols);
    for ((i, j), v) in coords_full.entries() {
        if *i >= r1 {
            coords.set(i - r1, *j, v.clone());
        }
    }
    let s2 = snf(&coords, ring)?;
    let gens = kernel.mul(&s2.left_inv)?;
    let gen_cols = gens.columns();
    let mut torsion = Vec::new();
    let mut witnesses = Vec::new();
    for (t, d) in s2.invariants.iter().enumerate() {
        if !d.is_one() {
            torsion.push(d.clone());
            witnesses.push(gen_cols[t].clone());
        }
    }
    for col in gen_cols.iter().skip(s2.rank()) {
        witnesses.push(col.clone());
    }
    Ok(FGModule { ring: ring.clone(), free_rank: k - s2.rank(), torsion, witnesses: Some(witnesses) })
}

/// Homology of `C ⊗ Z/m` from integral lifts: the cycles mod m form the lattice
/// `K = {y : d_out y ∈ m Z}` and the answer is `K / (im d_in + m Z^c)`.
fn cyclic_lattice(m: u64, d_out: &SparseMatrix, d_in: &SparseMatrix) -> Result<FGModule> {
    let ring = CoefficientRing::CyclicRing(m);
    let z = CoefficientRing::Integers;
    let (rows, c) = (d_out.rows, d_out.cols);
    let mb = BigRational::from_integer(BigInt::from(m));
    for ((_, _), v) in d_out.entries().chain(d_in.entries()) {
        if !v.is_integer() {
            return Err(Error::Precondition("Z/m homology needs integral lifts".into()));
        }
    }
    let m_id = SparseMatrix::identity(rows).scale(&mb);
    let a = SparseMatrix::block(rows, 0, c, rows, [Some(d_out), Some(&m_id), None, None]);
    let sa = snf(&a, &z)?;
    let mut gens = Vec::new();
    for col in columns_range(&sa.right, sa.rank()) {
        let y: SparseVec = col.into_iter().filter(|(i, _)| *i < c).collect();
        gens.push(y);
    }
    let g = SparseMatrix::from_columns(c, &gens);
    let sg = snf(&g, &z)?;
    debug_assert_eq!(sg.rank(), c);
    // basis B = L^-1 * diag(d); B^-1 = diag(1/d) * L
    let mut diag = SparseMatrix::zeros(c, c);
    let mut diag_inv = SparseMatrix::zeros(c, c);
    for (t, d) in sg.invariants.iter().enumerate() {
        diag.set(t, t, BigRational::from_integer(d.clone()));
        diag_inv.set(t, t, BigRational::new(BigInt::one(), d.clone()));
    }
    let basis = sg.left_inv.mul(&diag)?;
    let basis_inv = diag_inv.mul(&sg.left)?;
    let m_c = SparseMatrix::identity(c).scale(&mb);
    let sub = SparseMatrix::block(c, 0, d_in.cols, c, [Some(d_in), Some(&m_c), None, None]);
    let coords = basis_inv.mul(&sub)?;
    let s2 = snf(&coords, &z)?;
    let gen_cols = basis.mul(&s2.left_inv)?.columns();
    let mut free_rank = 0;
    let mut torsion = Vec::new();
    let mut free_w = Vec::new();
    let mut tors_w = Vec::new();
    for (t, d) in s2.invariants.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        if *d == BigInt::from(m) {
            free_rank += 1;
            free_w.push(gen_cols[t].clone());
        } else {
            torsion.push(d.clone());
            tors_w.push(gen_cols[t].clone());
        }
    }
    tors_w.extend(free_w);
    Ok(FGModule { ring, free_rank, torsion, witnesses: Some(tors_w) })
}

/// Homology of `C ⊗ Z/m` at a degree of a complex given by integral lifts,
/// computed over `Z` as the homology of the cone of multiplication by `m`.
/// `d_prev: C_{j-1} → C_{j-2}`, `d_out: C_j → C_{j-1}`, `d_in: C_{j+1} → C_j`.
pub fn cyclic_via_cone(
    m: u64,
    d_prev: &SparseMatrix,
    d_out: &SparseMatrix,
    d_in: &SparseMatrix,
) -> Result<FGModule> {
    let z = CoefficientRing::Integers;
    let mb = BigRational::from_integer(BigInt::from(m));
    let (c_prev, c, c_next) = (d_out.rows, d_out.cols, d_in.cols);
    // Cone_j = C_{j-1} ⊕ C_j, D(x, y) = (-dx, m x + dy)
    let mi = |n: usize| SparseMatrix::identity(n).scale(&mb);
    let neg_prev = d_prev.scale(&-BigRational::one());
    let dj = SparseMatrix::block(
        d_prev.rows,
        c_prev,
        c_prev,
        c,
        [Some(&neg_prev), None, Some(&mi(c_prev)), Some(d_out)],
    );
    let neg_out = d_out.scale(&-BigRational::one());
    let dj1 = SparseMatrix::block(c_prev, c, c, c_next, [Some(&neg_out), None, Some(&mi(c)), Some(d_in)]);
    let h = integral_invariants(&z, &dj, &dj1)?;
    debug_assert_eq!(h.free_rank, 0);
    let mut free_rank = 0;
    let mut torsion = Vec::new();
    for d in h.torsion {
        if d == BigInt::from(m) {
            free_rank += 1;
        } else {
            torsion.push(d);
        }
    }
    Ok(FGModule { ring: CoefficientRing::CyclicRing(m), free_rank, torsion, witnesses: None })
}

/// Textbook dense elimination over a field, kept deliberately naive as a reference.
pub fn reference_field_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][col].is_zero() {
                let f = &a[i][col] / &a[rank][col];
                let prow = a[rank].clone();
                for (x, y) in a[i].iter_mut().zip(prow.iter()) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::ring::int;

    #[test]
    fn torsion_from_multiplication_by_two() {
        let d_out = SparseMatrix::zeros(0, 1);
        let d_in = SparseMatrix::from_dense(&[vec![2]]);
        let h = homology_at(&CoefficientRing::Integers, &d_out, &d_in).unwrap();
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion, vec![BigInt::from(2)]);
        let q = homology_at(&CoefficientRing::Rationals, &d_out, &d_in).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn f2_kernel_line() {
        let d_out = SparseMatrix::from_dense(&[vec![1, 1]]);
        let d_in = SparseMatrix::zeros(2, 0);
        let h = homology_at(&CoefficientRing::PrimeField(2), &d_out, &d_in).unwrap();
        assert_eq!(h.free_rank, 1);
        assert_eq!(h.witnesses.unwrap(), vec![vec![(0, int(1)), (1, int(1))]]);
    }

    #[test]
    fn rejects_non_complex() {
        let one = SparseMatrix::from_dense(&[vec![1]]);
        let err = homology_at(&CoefficientRing::PrimeField(2), &one, &one).unwrap_err();
        assert!(matches!(err, Error::NotAComplex(_)));
    }

    #[test]
    fn cyclic_ring_homology() {
        // Z --2--> Z tensored with Z/4: H_0 = Z/2, H_1 = Z/2
        let two = SparseMatrix::from_dense(&[vec![2]]);
        let zero_out = SparseMatrix::zeros(0, 1);
        let none_in = SparseMatrix::zeros(1, 0);
        let z4 = CoefficientRing::CyclicRing(4);
        let h0 = homology_at(&z4, &zero_out, &two).unwrap();
        assert_eq!((h0.free_rank, h0.torsion.clone()), (0, vec![BigInt::from(2)]));
        let h1 = homology_at(&z4, &two, &none_in).unwrap();
        assert_eq!((h1.free_rank, h1.torsion.clone()), (0, vec![BigInt::from(2)]));
        let prev = SparseMatrix::zeros(0, 1);
        let c0 = cyclic_via_cone(4, &SparseMatrix::zeros(0, 0), &zero_out, &two).unwrap();
        assert!(c0.same_class(&h0));
        let c1 = cyclic_via_cone(4, &prev, &two, &none_in).unwrap();
        assert!(c1.same_class(&h1));
    }

    #[test]
    fn integral_witnesses_match_invariants() {
        let d_out = SparseMatrix::zeros(0, 2);
        let d_in = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 0]]);
        let h = homology_at(&CoefficientRing::Integers, &d_out, &d_in).unwrap();
        let fast = integral_invariants(&CoefficientRing::Integers, &d_out, &d_in).unwrap();
        assert!(h.same_class(&fast));
        assert_eq!(h.free_rank, 1);
        assert_eq!(h.witnesses.unwrap().len(), 2);
    }
}
