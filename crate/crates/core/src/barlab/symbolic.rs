//! Bounded-support mode: bar constructions on `k[G]` for groups with a free part,
//! where only group elements in a box `|free coordinate| ≤ B` are represented.
//! Nothing here is degreewise finite, so only identities are checked; homology
//! is never reported.

use std::hash::Hash;

use serde::Serialize;

use super::bar::{bar_differential, deconcatenation, merge_terms, shuffle_product, word_degree, LetterAlgebra, Word};
use super::group::FGAbGroup;
use super::{coeff_is_zero, Coeff};
use crate::exactring::CoefficientRing;

/// `k[G]` restricted to the box of radius `bound`. Products leaving the box overflow.
#[derive(Clone, Debug)]
pub struct BoundedGroupAlgebra {
    pub group: FGAbGroup,
    pub bound: i64,
    /// Letters of bar words are drawn from the smaller box of this radius.
    pub letter_bound: i64,
}

impl BoundedGroupAlgebra {
    pub fn new(group: FGAbGroup, bound: i64, letter_bound: i64) -> Self {
        BoundedGroupAlgebra { group, bound, letter_bound }
    }

    pub fn contains(&self, g: &[i64]) -> bool {
        self.group.in_box(g, self.bound)
    }
}

impl LetterAlgebra for BoundedGroupAlgebra {
    type Letter = Vec<i64>;

    fn letter_degree(&self, _: &Vec<i64>) -> usize {
        0
    }

    fn letter_epsilon(&self, _: &Vec<i64>) -> Coeff {
        1
    }

    fn letter_product(&self, x: &Vec<i64>, y: &Vec<i64>) -> Option<Vec<(Vec<i64>, Coeff)>> {
        let s = self.group.add(x, y);
        if !self.contains(&s) {
            return None;
        }
        Some(if s.iter().all(|c| *c == 0) { Vec::new() } else { vec![(s, 1)] })
    }

    fn letter_differential(&self, _: &Vec<i64>) -> Option<Vec<(Vec<i64>, Coeff)>> {
        Some(Vec::new())
    }
}

/// Letter algebras with a finite alphabet in each degree.
pub trait FiniteLetters: LetterAlgebra {
    /// Letters of degree at most `max_degree`.
    fn letters(&self, max_degree: usize) -> Vec<Self::Letter>;
}

impl FiniteLetters for BoundedGroupAlgebra {
    fn letters(&self, _: usize) -> Vec<Vec<i64>> {
        self.group.box_elements(self.letter_bound).into_iter().filter(|g| g.iter().any(|c| *c != 0)).collect()
    }
}

/// The bar construction of `A`, viewed as a letter algebra for the next bar.
/// Its letters are the nonempty words; it is connected, so `ε` vanishes on them.
#[derive(Clone, Debug)]
pub struct Bar<A>(pub A);

impl<A: LetterAlgebra> LetterAlgebra for Bar<A> {
    type Letter = Word<A::Letter>;

    fn letter_degree(&self, x: &Self::Letter) -> usize {
        word_degree(&self.0, x)
    }

    fn letter_epsilon(&self, _: &Self::Letter) -> Coeff {
        0
    }

    fn letter_product(&self, x: &Self::Letter, y: &Self::Letter) -> Option<Vec<(Self::Letter, Coeff)>> {
        Some(shuffle_product(&self.0, x, y))
    }

    fn letter_differential(&self, x: &Self::Letter) -> Option<Vec<(Self::Letter, Coeff)>> {
        let mut d = bar_differential(&self.0, x)?;
        d.retain(|(w, _)| !w.is_empty());
        Some(d)
    }
}

impl<A: FiniteLetters> FiniteLetters for Bar<A> {
    fn letters(&self, max_degree: usize) -> Vec<Self::Letter> {
        words(&self.0, max_degree).into_iter().filter(|w| !w.is_empty()).collect()
    }
}

/// All bar words over `a` of degree at most `max_degree`, graded lexicographic.
pub fn words<A: FiniteLetters>(a: &A, max_degree: usize) -> Vec<Word<A::Letter>> {
    if max_degree == 0 {
        return vec![Vec::new()];
    }
    let letters = a.letters(max_degree - 1);
    let costs: Vec<usize> = letters.iter().map(|x| a.letter_degree(x) + 1).collect();
    let mut out = vec![Vec::new()];
    let mut cur = Vec::new();
    fn rec<L: Clone>(letters: &[L], costs: &[usize], left: usize, cur: &mut Vec<L>, out: &mut Vec<Vec<L>>) {
        for (x, &c) in letters.iter().zip(costs) {
            if c <= left {
                cur.push(x.clone());
                out.push(cur.clone());
                rec(letters, costs, left - c, cur, out);
                cur.pop();
            }
        }
    }
    rec(&letters, &costs, max_degree, &mut cur, &mut out);
    out.sort_by(|u, v| word_degree(a, u).cmp(&word_degree(a, v)).then_with(|| u.cmp(v)));
    out
}

/// Failure counts of the bar identities on words, for one ring.
#[derive(Clone, Debug, Default, Serialize)]
pub struct WordReport {
    pub d_squared: usize,
    pub leibniz: usize,
    pub commutativity: usize,
    pub augmentation: usize,
    pub coassociativity: usize,
    pub counit: usize,
    pub coproduct_multiplicative: usize,
    pub coproduct_chain_map: usize,
    pub words_checked: usize,
    pub pairs_checked: usize,
    /// Identities that needed a product outside the box.
    pub skipped: usize,
}

impl WordReport {
    pub fn ok(&self) -> bool {
        self.d_squared
            + self.leibniz
            + self.commutativity
            + self.augmentation
            + self.coassociativity
            + self.counit
            + self.coproduct_multiplicative
            + self.coproduct_chain_map
            == 0
    }
}

fn sign(odd: bool) -> Coeff {
    if odd {
        -1
    } else {
        1
    }
}

fn nonzero_in<K: Ord>(rings: &[CoefficientRing], mut terms: Vec<(K, Coeff)>) -> Vec<bool> {
    merge_terms(&mut terms);
    rings.iter().map(|r| !terms.iter().all(|(_, c)| coeff_is_zero(r, *c))).collect()
}

type Lin<L> = Vec<(Word<L>, Coeff)>;

fn d_lin<A: LetterAlgebra>(a: &A, x: &[(Word<A::Letter>, Coeff)]) -> Option<Lin<A::Letter>> {
    let mut out = Vec::new();
    for (w, c) in x {
        for (z, e) in bar_differential(a, w)? {
            out.push((z, c * e));
        }
    }
    Some(out)
}

fn mul_lin<A: LetterAlgebra>(a: &A, x: &[(Word<A::Letter>, Coeff)], y: &[(Word<A::Letter>, Coeff)]) -> Lin<A::Letter> {
    let mut out = Vec::new();
    for (u, c) in x {
        for (v, e) in y {
            for (z, f) in shuffle_product(a, u, v) {
                out.push((z, c * e * f));
            }
        }
    }
    out
}

/// Checks every bar identity on the words over `a` of degree `≤ n_top` and on
/// all pairs of such words with total degree `≤ n_top`.
pub fn check_bar_words<A: FiniteLetters>(a: &A, rings: &[CoefficientRing], n_top: usize) -> Vec<WordReport>
where
    A::Letter: Hash,
{
    let ws = words(a, n_top);
    let mut reps = vec![WordReport::default(); rings.len()];
    let record = |reps: &mut Vec<WordReport>, flags: Option<Vec<bool>>, field: fn(&mut WordReport) -> &mut usize| match flags {
        Some(f) => {
            for (r, bad) in reps.iter_mut().zip(f) {
                if bad {
                    *field(r) += 1;
                }
            }
        }
        None => reps.iter_mut().for_each(|r| r.skipped += 1),
    };
    for w in &ws {
        let one = vec![(w.clone(), 1)];
        let dd = d_lin(a, &one).and_then(|d| d_lin(a, &d)).map(|t| nonzero_in(rings, t));
        record(&mut reps, dd, |r| &mut r.d_squared);

        let delta = deconcatenation(a, w);
        let mut t = Vec::new();
        for (u, v, c) in &delta {
            for (u1, u2, e) in deconcatenation(a, u) {
                t.push(((u1, u2, v.clone()), c * e));
            }
            for (v1, v2, e) in deconcatenation(a, v) {
                t.push(((u.clone(), v1, v2), -c * e));
            }
        }
        record(&mut reps, Some(nonzero_in(rings, t)), |r| &mut r.coassociativity);

        let mut left = vec![(w.clone(), -1)];
        let mut right = vec![(w.clone(), -1)];
        for (u, v, c) in &delta {
            if u.is_empty() {
                left.push((v.clone(), *c));
            }
            if v.is_empty() {
                right.push((u.clone(), *c));
            }
        }
        let (l, r) = (nonzero_in(rings, left), nonzero_in(rings, right));
        record(&mut reps, Some(l.iter().zip(&r).map(|(x, y)| *x || *y).collect()), |r| &mut r.counit);

        let chain = (|| {
            let mut t = Vec::new();
            for (z, c) in bar_differential(a, w)? {
                for (u, v, e) in deconcatenation(a, &z) {
                    t.push(((u, v), c * e));
                }
            }
            for (u, v, c) in &delta {
                for (z, e) in bar_differential(a, u)? {
                    t.push(((z, v.clone()), -c * e));
                }
                let s = sign(word_degree(a, u) % 2 == 1);
                for (z, e) in bar_differential(a, v)? {
                    t.push(((u.clone(), z), -c * s * e));
                }
            }
            Some(nonzero_in(rings, t))
        })();
        record(&mut reps, chain, |r| &mut r.coproduct_chain_map);
    }
    for r in reps.iter_mut() {
        r.words_checked = ws.len();
    }

    let degs: Vec<usize> = ws.iter().map(|w| word_degree(a, w)).collect();
    for (i, u) in ws.iter().enumerate() {
        for (j, v) in ws.iter().enumerate() {
            if degs[i] + degs[j] > n_top {
                continue;
            }
            for r in reps.iter_mut() {
                r.pairs_checked += 1;
            }
            let (du, dv) = (degs[i], degs[j]);
            let uv = shuffle_product(a, u, v);

            let mut t = uv.clone();
            t.extend(shuffle_product(a, v, u).into_iter().map(|(z, c)| (z, -c * sign(du * dv % 2 == 1))));
            record(&mut reps, Some(nonzero_in(rings, t)), |r| &mut r.commutativity);

            let leib = (|| {
                let mut t = d_lin(a, &uv)?;
                let d_u = bar_differential(a, u)?;
                let d_v = bar_differential(a, v)?;
                t.extend(mul_lin(a, &d_u, &[(v.clone(), 1)]).into_iter().map(|(z, c)| (z, -c)));
                let s = sign(du % 2 == 1);
                t.extend(mul_lin(a, &[(u.clone(), 1)], &d_v).into_iter().map(|(z, c)| (z, -c * s)));
                Some(nonzero_in(rings, t))
            })();
            record(&mut reps, leib, |r| &mut r.leibniz);

            let e_uv: Coeff = uv.iter().filter(|(z, _)| z.is_empty()).map(|(_, c)| *c).sum();
            let e = Coeff::from(u.is_empty() && v.is_empty());
            record(&mut reps, Some(nonzero_in(rings, vec![((), e_uv - e)])), |r| &mut r.augmentation);

            let mut t = Vec::new();
            for (z, c) in &uv {
                for (x1, x2, e) in deconcatenation(a, z) {
                    t.push(((x1, x2), c * e));
                }
            }
            for (u1, u2, c) in deconcatenation(a, u) {
                for (v1, v2, e) in deconcatenation(a, v) {
                    let s = sign(word_degree(a, &u2) * word_degree(a, &v1) % 2 == 1);
                    let p1 = shuffle_product(a, &u1, &v1);
                    let p2 = shuffle_product(a, &u2, &v2);
                    for (y1, f) in &p1 {
                        for (y2, g) in &p2 {
                            t.push(((y1.clone(), y2.clone()), -c * e * s * f * g));
                        }
                    }
                }
            }
            record(&mut reps, Some(nonzero_in(rings, t)), |r| &mut r.coproduct_multiplicative);
        }
    }
    reps
}

/// Runs [`check_bar_words`] on `B̄ⁿ k[G]` in bounded mode for heights 1 to 3.
pub fn check_bounded_bar(alg: &BoundedGroupAlgebra, n: usize, rings: &[CoefficientRing], n_top: usize) -> Vec<WordReport> {
    match n {
        1 => check_bar_words(alg, rings, n_top),
        2 => check_bar_words(&Bar(alg.clone()), rings, n_top),
        3 => check_bar_words(&Bar(Bar(alg.clone())), rings, n_top),
        _ => panic!("bounded mode supports heights 1 to 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_is_flagged() {
        let a = BoundedGroupAlgebra::new(FGAbGroup::free(1), 2, 2);
        assert_eq!(a.letter_product(&vec![1], &vec![1]), Some(vec![(vec![2], 1)]));
        assert_eq!(a.letter_product(&vec![2], &vec![1]), None);
        assert_eq!(a.letter_product(&vec![2], &vec![-2]), Some(vec![]));
    }

    #[test]
    fn integers_bounded_identities() {
        let a = BoundedGroupAlgebra::new(FGAbGroup::free(1), 4, 1);
        let rings = [CoefficientRing::Integers, CoefficientRing::PrimeField(2)];
        for n in 1..=2 {
            let reps = check_bounded_bar(&a, n, &rings, 4);
            assert!(reps.iter().all(|r| r.ok() && r.skipped == 0), "{reps:?}");
        }
    }
}
