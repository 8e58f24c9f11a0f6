//! The Hopf inclusions `i_Λ: Λ(V[2i+1]) → B̄S(V[2i])`, `i_Γ: Γ(V[2i+2]) → B̄Λ(V[2i+1])`
//! and the rational identification `Γ(V[d]) ≅ S(V[d])`.

use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;

use crate::barlab::dga::Structure;
use crate::barlab::map::AlgebraMap;
use crate::barlab::{BasedDGA, FreeKind};
use crate::error::{Error, Result};
use crate::exactring::{int, CoefficientRing, Scalar};

fn free_input(bar: &BasedDGA, kind: FreeKind) -> Result<(usize, usize, Arc<BasedDGA>)> {
    let input = bar.bar_input().ok_or_else(|| Error::Shape("target must be a bar construction".into()))?;
    match &input.structure {
        Structure::Free { kind: k, rank, gen_degree, .. } if *k == kind => Ok((*rank, *gen_degree, input.clone())),
        _ => Err(Error::Shape(format!("target must be the bar of a free {} algebra", kind.symbol()))),
    }
}

fn generator_letters(input: &BasedDGA, rank: usize) -> Vec<usize> {
    (0..rank)
        .map(|j| {
            let mut e = vec![0; rank];
            e[j] = 1;
            input.find_monomial(&e).expect("generators are represented")
        })
        .collect()
}

/// Sign of a permutation given as a sequence of distinct indices.
fn perm_sign(p: &[usize]) -> i64 {
    let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `i_Λ` into a given bar of `S(V[2i])`: `x_{j_1}…x_{j_p} ↦ Σ_σ sgn(σ) [x_{j_σ(1)}|…|x_{j_σ(p)}]`.
pub fn i_lambda_into(bar: Arc<BasedDGA>) -> Result<AlgebraMap> {
    let (rank, deg, input) = free_input(&bar, FreeKind::Symmetric)?;
    let source = Arc::new(BasedDGA::free(FreeKind::Exterior, rank, deg + 1, &bar.ring, bar.n, None)?);
    let letters = generator_letters(&input, rank);
    let mut images = Vec::with_capacity(source.len());
    for x in 0..source.len() {
        let m = source.monomial(x).expect("free basis");
        let gens: Vec<usize> = (0..rank).filter(|j| m[*j] == 1).collect();
        let mut img = Vec::new();
        for perm in (0..gens.len()).permutations(gens.len()) {
            let w: Vec<usize> = perm.iter().map(|k| letters[gens[*k]]).collect();
            let z = bar.find_word(&w).ok_or_else(|| Error::Truncation("antisymmetrized word outside the bar".into()))?;
            img.push((z, int(perm_sign(&perm))));
        }
        images.push(img);
    }
    AlgebraMap::new("i_Λ", source, bar, images)
}

/// `i_Λ` for `V = k^rank`, `S(V[2i])` truncated at `n_top - 1` (weight `≤ n_top` when `i = 0`).
pub fn i_lambda(rank: usize, i: usize, ring: &CoefficientRing, n_top: usize) -> Result<AlgebraMap> {
    let s = Arc::new(BasedDGA::free(FreeKind::Symmetric, rank, 2 * i, ring, n_top.saturating_sub(1), if i == 0 { Some(n_top) } else { None })?);
    i_lambda_into(Arc::new(BasedDGA::bar(s, n_top)?))
}

/// Distinct orderings of the multiset with multiplicities `e`.
fn arrangements(e: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = e.iter().sum();
    let mut left = e.to_vec();
    let mut cur = Vec::with_capacity(total);
    let mut out = Vec::new();
    fn rec(left: &mut Vec<usize>, total: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for j in 0..left.len() {
            if left[j] > 0 {
                left[j] -= 1;
                cur.push(j);
                rec(left, total, cur, out);
                cur.pop();
                left[j] += 1;
            }
        }
    }
    rec(&mut left, total, &mut cur, &mut out);
    out
}

/// `i_Γ` into a given bar of `Λ(V[2i+1])`: `γ_e ↦ ±` the sum of all distinct words
/// with letter `x_j` repeated `e_j` times; the sign is `(-1)^{p(p+1)/2}` for `|e| = p`.
pub fn i_gamma_into(bar: Arc<BasedDGA>) -> Result<AlgebraMap> {
    let (rank, deg, input) = free_input(&bar, FreeKind::Exterior)?;
    let source = Arc::new(BasedDGA::free(FreeKind::DividedPower, rank, deg + 1, &bar.ring, bar.n, None)?);
    let letters = generator_letters(&input, rank);
    let mut images = Vec::with_capacity(source.len());
    for x in 0..source.len() {
        let e = source.monomial(x).expect("free basis");
        let p: usize = e.iter().sum();
        let sign = if (p * (p + 1) / 2).is_multiple_of(2) { 1 } else { -1 };
        let mut img = Vec::new();
        for arr in arrangements(e) {
            let w: Vec<usize> = arr.iter().map(|j| letters[*j]).collect();
            let z = bar.find_word(&w).ok_or_else(|| Error::Truncation("invariant word outside the bar".into()))?;
            img.push((z, int(sign)));
        }
        images.push(img);
    }
    AlgebraMap::new("i_Γ", source, bar, images)
}

/// `i_Γ` for `V = k^rank`, `Λ(V[2i+1])` truncated at `n_top - 1`.
pub fn i_gamma(rank: usize, i: usize, ring: &CoefficientRing, n_top: usize) -> Result<AlgebraMap> {
    let l = Arc::new(BasedDGA::free(FreeKind::Exterior, rank, 2 * i + 1, ring, n_top.saturating_sub(1), None)?);
    i_gamma_into(Arc::new(BasedDGA::bar(l, n_top)?))
}

/// `Γ(V[d]) → S(V[d])`, `γ_e ↦ Π x_j^{e_j} / e_j!`. Needs the factorials to be units.
pub fn divided_to_symmetric(gamma: Arc<BasedDGA>) -> Result<AlgebraMap> {
    let (rank, deg) = match &gamma.structure {
        Structure::Free { kind: FreeKind::DividedPower, rank, gen_degree, .. } => (*rank, *gen_degree),
        _ => return Err(Error::Shape("source must be a divided power algebra".into())),
    };
    let ring = gamma.ring.clone();
    let sym = Arc::new(BasedDGA::free(FreeKind::Symmetric, rank, deg, &ring, gamma.n, gamma.max_weight)?);
    let mut images = Vec::with_capacity(gamma.len());
    for x in 0..gamma.len() {
        let e = gamma.monomial(x).expect("free basis");
        let mut denom = BigInt::one();
        for &a in e {
            for m in 2..=a as u64 {
                if let Some(p) = ring.non_invertible_prime(m) {
                    return Err(Error::Precondition(format!("γ_{a} ↦ x^{a}/{a}! needs {p} invertible in {ring}")));
                }
                denom *= m;
            }
        }
        let z = sym.find_monomial(e).expect("same monomials");
        images.push(vec![(z, Scalar::new(BigInt::one(), denom))]);
    }
    AlgebraMap::new("Γ≅S", gamma, sym, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::ratio;

    #[test]
    fn rank_two_lambda_image() {
        let f = i_lambda(2, 0, &CoefficientRing::Rationals, 4).unwrap();
        let x = f.source.find_monomial(&[1, 1]).unwrap();
        let labels: Vec<(String, Scalar)> = f.images[x].iter().map(|(z, c)| (f.target.label(*z).to_string(), c.clone())).collect();
        assert_eq!(labels, vec![("[x1|x2]".to_string(), int(1)), ("[x2|x1]".to_string(), int(-1))]);
    }

    #[test]
    fn gamma_signs() {
        let f = i_gamma(1, 0, &CoefficientRing::PrimeField(2), 6).unwrap();
        let v = f.source.find_monomial(&[1]).unwrap();
        assert_eq!(f.images[v].len(), 1);
        let f = i_gamma(1, 0, &CoefficientRing::Rationals, 6).unwrap();
        let v = f.source.find_monomial(&[1]).unwrap();
        assert_eq!(f.images[v][0].1, int(-1));
    }

    #[test]
    fn inclusions_are_hopf_quasi_isos() {
        for ring in [CoefficientRing::Rationals, CoefficientRing::PrimeField(2)] {
            for rank in 1..=2 {
                for f in [i_lambda(rank, 0, &ring, 5).unwrap(), i_gamma(rank, 0, &ring, 5).unwrap()] {
                    let r = f.check();
                    assert!(r.chain_ok() && r.algebra_ok() && r.coalgebra_ok(), "{} rank {rank} {ring}: {r:?}", f.name);
                    assert!(f.to_chain_map().quasi_iso(4).unwrap().is_quasi_iso, "{} rank {rank} {ring}", f.name);
                }
            }
        }
    }

    #[test]
    fn divided_powers_rationally() {
        let g = Arc::new(BasedDGA::free(FreeKind::DividedPower, 1, 2, &CoefficientRing::Rationals, 6, None).unwrap());
        let f = divided_to_symmetric(g).unwrap();
        let x = f.source.find_monomial(&[3]).unwrap();
        assert_eq!(f.images[x][0].1, ratio(1, 6));
        let r = f.check();
        assert!(r.chain_ok() && r.algebra_ok() && r.coalgebra_ok(), "{r:?}");
        let g2 = Arc::new(BasedDGA::free(FreeKind::DividedPower, 1, 2, &CoefficientRing::PrimeField(2), 6, None).unwrap());
        assert!(divided_to_symmetric(g2).is_err());
    }
}
