use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_traits::Zero;

use super::Coeff;

/// An augmented algebra seen through its non-unit basis elements ("letters").
///
/// Products and differentials report only non-unit components: the normalized
/// bar construction kills every word containing the unit.
pub trait LetterAlgebra {
    type Letter: Clone + Eq + Hash + Ord + Debug;

    fn letter_degree(&self, x: &Self::Letter) -> usize;
    fn letter_epsilon(&self, x: &Self::Letter) -> Coeff;
    /// `None` when the product leaves the represented range.
    fn letter_product(&self, x: &Self::Letter, y: &Self::Letter) -> Option<Vec<(Self::Letter, Coeff)>>;
    fn letter_differential(&self, x: &Self::Letter) -> Option<Vec<(Self::Letter, Coeff)>>;
}

pub type Word<L> = Vec<L>;

fn sign(odd: bool) -> Coeff {
    if odd {
        -1
    } else {
        1
    }
}

pub fn word_degree<A: LetterAlgebra>(a: &A, w: &[A::Letter]) -> usize {
    w.len() + w.iter().map(|x| a.letter_degree(x)).sum::<usize>()
}

/// Accumulates a linear combination of keys, dropping zeros.
pub struct Acc<K: Ord> {
    map: BTreeMap<K, Coeff>,
}

impl<K: Ord> Default for Acc<K> {
    fn default() -> Self {
        Acc { map: BTreeMap::new() }
    }
}

impl<K: Ord> Acc<K> {
    pub fn add(&mut self, k: K, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let e = self.map.entry(k).or_insert(0);
        *e += c;
    }

    pub fn finish(self) -> Vec<(K, Coeff)> {
        self.map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// Bar differential of a normalized word.
///
/// `d[x_1|…|x_p] = ε(x_1)[x_2|…|x_p] + (-1)^p ε(x_p)[x_1|…|x_{p-1}]
///   + Σ_{i<p} (-1)^i [x_1|…|x_i x_{i+1}|…|x_p] + Σ_i (-1)^{p+σ_{i-1}} [x_1|…|d x_i|…|x_p]`.
pub fn bar_differential<A: LetterAlgebra>(a: &A, w: &[A::Letter]) -> Option<Vec<(Word<A::Letter>, Coeff)>> {
    let p = w.len();
    let mut acc: Vec<(Word<A::Letter>, Coeff)> = Vec::with_capacity(2 * p + 2);
    if p == 0 {
        return Some(Vec::new());
    }
    let e1 = a.letter_epsilon(&w[0]);
    if !e1.is_zero() {
        acc.push((w[1..].to_vec(), e1));
    }
    let ep = a.letter_epsilon(&w[p - 1]);
    if !ep.is_zero() {
        acc.push((w[..p - 1].to_vec(), ep * sign(p % 2 == 1)));
    }
    for i in 1..p {
        // merge letters i and i+1 (1-based)
        let prod = a.letter_product(&w[i - 1], &w[i])?;
        for (z, c) in prod {
            let mut v = Vec::with_capacity(p - 1);
            v.extend_from_slice(&w[..i - 1]);
            v.push(z);
            v.extend_from_slice(&w[i + 1..]);
            acc.push((v, c * sign(i % 2 == 1)));
        }
    }
    let mut sigma = 0usize;
    for i in 1..=p {
        for (z, c) in a.letter_differential(&w[i - 1])? {
            let mut v = w.to_vec();
            v[i - 1] = z;
            acc.push((v, c * sign((p + sigma) % 2 == 1)));
        }
        sigma += a.letter_degree(&w[i - 1]);
    }
    merge_terms(&mut acc);
    Some(acc)
}

/// Shuffle product
/// `[x_1|…|x_p] * [x_{p+1}|…|x_{p+q}] = Σ_t (-1)^{q σ_p} ε_t ε'_t [x_{t^{-1}(1)}|…]`.
///
/// `ε_t` is the signature of the shuffle and `ε'_t` the Koszul sign of the same
/// reordering with letters weighted by their degree in `A`; both only see pairs
/// (left letter, right letter) that the shuffle swaps.
pub fn shuffle_product<A: LetterAlgebra>(a: &A, u: &[A::Letter], v: &[A::Letter]) -> Vec<(Word<A::Letter>, Coeff)> {
    let q = v.len();
    let sigma_p: usize = u.iter().map(|x| a.letter_degree(x)).sum();
    let dv: Vec<usize> = v.iter().map(|x| a.letter_degree(x)).collect();
    // suffix[i] = deg u_i + ... + deg u_{p-1}; placing v_j before u_i..u_{p-1}
    // swaps it past p - i letters of total degree suffix[i]
    let mut suffix = vec![0usize; u.len() + 1];
    for i in (0..u.len()).rev() {
        suffix[i] = suffix[i + 1] + a.letter_degree(&u[i]);
    }
    let mut word = Vec::with_capacity(u.len() + q);
    #[allow(clippy::too_many_arguments)]
    fn rec<L: Clone>(
        u: &[L],
        v: &[L],
        suffix: &[usize],
        dv: &[usize],
        i: usize,
        j: usize,
        parity: usize,
        word: &mut Vec<L>,
        out: &mut Vec<(Vec<L>, usize)>,
    ) {
        if i == u.len() && j == v.len() {
            out.push((word.clone(), parity));
            return;
        }
        if i < u.len() {
            word.push(u[i].clone());
            rec(u, v, suffix, dv, i + 1, j, parity, word, out);
            word.pop();
        }
        if j < v.len() {
            let add = (u.len() - i) + dv[j] * suffix[i];
            word.push(v[j].clone());
            rec(u, v, suffix, dv, i, j + 1, parity + add, word, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    rec(u, v, &suffix, &dv, 0, 0, 0, &mut word, &mut out);
    let global = q * sigma_p;
    let mut terms: Vec<(Word<A::Letter>, Coeff)> = out.into_iter().map(|(w, par)| (w, sign((par + global) % 2 == 1))).collect();
    merge_terms(&mut terms);
    terms
}

/// Sorts and merges equal keys, dropping zero coefficients.
pub fn merge_terms<K: Ord>(terms: &mut Vec<(K, Coeff)>) {
    terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(K, Coeff)> = Vec::with_capacity(terms.len());
    for (k, c) in terms.drain(..) {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| *c != 0);
    *terms = out;
}

/// Deconcatenation `Δ[x_1|…|x_p] = Σ_i (-1)^{(p-i) σ_i} [x_1|…|x_i] ⊗ [x_{i+1}|…|x_p]`.
pub fn deconcatenation<A: LetterAlgebra>(a: &A, w: &[A::Letter]) -> Vec<(Word<A::Letter>, Word<A::Letter>, Coeff)> {
    let p = w.len();
    let mut out = Vec::with_capacity(p + 1);
    let mut sigma = 0usize;
    for i in 0..=p {
        if i > 0 {
            sigma += a.letter_degree(&w[i - 1]);
        }
        out.push((w[..i].to_vec(), w[i..].to_vec(), sign(((p - i) * sigma) % 2 == 1)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Group algebra of Z/m: letters 1..m-1.
    struct Cyclic(i64);

    impl LetterAlgebra for Cyclic {
        type Letter = i64;
        fn letter_degree(&self, _: &i64) -> usize {
            0
        }
        fn letter_epsilon(&self, _: &i64) -> Coeff {
            1
        }
        fn letter_product(&self, x: &i64, y: &i64) -> Option<Vec<(i64, Coeff)>> {
            let s = (x + y) % self.0;
            Some(if s == 0 { vec![] } else { vec![(s, 1)] })
        }
        fn letter_differential(&self, _: &i64) -> Option<Vec<(i64, Coeff)>> {
            Some(vec![])
        }
    }

    #[test]
    fn two_letter_differential() {
        // d[b_g|b_h] = [b_h] - [b_{g+h}] + [b_g]
        let a = Cyclic(5);
        let d = bar_differential(&a, &[1, 2]).unwrap();
        assert_eq!(d, vec![(vec![1], 1), (vec![2], 1), (vec![3], -1)]);
        // g + h = 0 drops the middle term
        let d = bar_differential(&a, &[2, 3]).unwrap();
        assert_eq!(d, vec![(vec![2], 1), (vec![3], 1)]);
    }

    #[test]
    fn degree_zero_shuffle() {
        let a = Cyclic(5);
        let p = shuffle_product(&a, &[1], &[2]);
        assert_eq!(p, vec![(vec![1, 2], 1), (vec![2, 1], -1)]);
        assert!(shuffle_product(&a, &[1], &[1]).is_empty());
    }

    #[test]
    fn two_letter_coproduct() {
        let a = Cyclic(5);
        let c = deconcatenation(&a, &[1, 2]);
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|(_, _, s)| *s == 1));
    }
}
