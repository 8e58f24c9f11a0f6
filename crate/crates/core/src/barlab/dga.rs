use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use rustc_hash::FxHashMap as HashMap;
use serde_json::{json, Value};

use super::bar::{bar_differential, deconcatenation, shuffle_product, Acc, LetterAlgebra};
use super::free::{mono_coproduct, mono_label, mono_product, monomials, FreeKind};
use super::group::FGAbGroup;
use crate::chainkit::ChainComplex;
use crate::error::{Error, Result};
use super::Coeff;
use crate::exactring::{int, CoefficientRing, SparseMatrix};

pub type LinComb = Vec<(usize, Coeff)>;
pub type Tensor = Vec<((usize, usize), Coeff)>;

#[derive(Clone, Debug)]
pub struct BasisElt {
    pub label: String,
    pub degree: usize,
    pub weight: usize,
}

#[derive(Clone, Debug)]
pub enum Structure {
    Group { group: FGAbGroup, elements: Vec<Vec<i64>>, index: HashMap<Vec<i64>, usize> },
    Free { kind: FreeKind, rank: usize, gen_degree: usize, monos: Vec<Vec<usize>>, index: HashMap<Vec<usize>, usize> },
    Bar { input: Arc<BasedDGA>, words: Vec<Vec<usize>>, index: HashMap<Vec<usize>, usize> },
}

/// Graded-commutative augmented dg algebra with a fixed basis, complete through
/// degree `n` (and through weight `max_weight` when set). Products that leave
/// that range are reported as `None`.
#[derive(Clone, Debug)]
pub struct BasedDGA {
    pub ring: CoefficientRing,
    pub n: usize,
    pub max_weight: Option<usize>,
    pub elems: Vec<BasisElt>,
    /// `starts[d]..starts[d+1]` are the basis elements of degree `d`.
    starts: Vec<usize>,
    pub unit: usize,
    pub structure: Structure,
    pub warnings: Vec<String>,
    /// Degree through which the algebra is complete; exceeds `n` when nothing lives above `n`.
    pub complete_through: usize,
    d_cache: OnceLock<Vec<LinComb>>,
    delta_cache: OnceLock<Vec<Tensor>>,
}

impl BasedDGA {
    fn assemble(ring: CoefficientRing, n: usize, max_weight: Option<usize>, elems: Vec<BasisElt>, unit: usize, structure: Structure) -> Self {
        let mut starts = vec![0; n + 2];
        for d in 0..=n {
            starts[d + 1] = starts[d] + elems[starts[d]..].iter().take_while(|e| e.degree == d).count();
        }
        debug_assert_eq!(starts[n + 1], elems.len());
        BasedDGA { ring, n, max_weight, elems, starts, unit, structure, warnings: Vec::new(), complete_through: n, d_cache: OnceLock::new(), delta_cache: OnceLock::new() }
    }

    /// `k[G]` for a finite group, concentrated in degree 0 with `Δ b_g = b_g ⊗ b_g`.
    pub fn group_algebra(group: &FGAbGroup, ring: &CoefficientRing) -> Result<Self> {
        let elements = group.elements()?;
        let index: HashMap<Vec<i64>, usize> = elements.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let elems = elements
            .iter()
            .map(|g| BasisElt { label: group_label(g), degree: 0, weight: 0 })
            .collect();
        let unit = index[&group.zero()];
        let mut a = Self::assemble(ring.clone(), 0, None, elems, unit, Structure::Group { group: group.clone(), elements, index });
        a.complete_through = usize::MAX;
        Ok(a)
    }

    /// `S`, `Λ` or `Γ` on `rank` generators of degree `gen_degree`, through degree `n`.
    /// Generators of degree 0 need a weight bound; it defaults to `n`.
    pub fn free(kind: FreeKind, rank: usize, gen_degree: usize, ring: &CoefficientRing, n: usize, max_weight: Option<usize>) -> Result<Self> {
        let odd = gen_degree % 2 == 1;
        let parity_ok = match kind {
            FreeKind::Exterior => odd,
            FreeKind::Symmetric | FreeKind::DividedPower => !odd,
        };
        if !parity_ok && ring.characteristic() != 2 {
            return Err(Error::Precondition(format!(
                "{} needs {} generators outside characteristic 2, got degree {gen_degree}",
                kind.symbol(),
                if kind == FreeKind::Exterior { "odd" } else { "even" }
            )));
        }
        let max_weight = if gen_degree == 0 { Some(max_weight.unwrap_or(n)) } else { max_weight };
        let top_w = match (gen_degree, max_weight) {
            (0, Some(w)) => w,
            (g, Some(w)) => w.min(n / g),
            (g, None) => n / g,
        };
        let mut monos = Vec::new();
        for w in 0..=top_w {
            monos.extend(monomials(kind, rank, w));
        }
        monos.sort_by_key(|m| m.iter().sum::<usize>() * gen_degree);
        let index: HashMap<Vec<usize>, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let elems = monos
            .iter()
            .map(|m| {
                let w: usize = m.iter().sum();
                BasisElt { label: mono_label(kind, m), degree: w * gen_degree, weight: w }
            })
            .collect();
        let unit = index[&vec![0; rank]];
        Ok(Self::assemble(ring.clone(), n, max_weight, elems, unit, Structure::Free { kind, rank, gen_degree, monos, index }))
    }

    /// Normalized bar construction through degree `n`. Needs `input` complete through `n - 1`.
    pub fn bar(input: Arc<BasedDGA>, n: usize) -> Result<Self> {
        if n > 0 && input.complete_through < n - 1 {
            return Err(Error::Truncation(format!(
                "bar through degree {n} needs input through degree {}, have {}",
                n - 1,
                input.complete_through
            )));
        }
        let letters: Vec<usize> = (0..input.elems.len()).filter(|&i| i != input.unit).collect();
        let wmax = input.max_weight;
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut cur = Vec::new();
        fn rec(a: &BasedDGA, letters: &[usize], left: usize, wleft: Option<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            for &x in letters {
                let e = &a.elems[x];
                let cost = e.degree + 1;
                if cost > left || wleft.is_some_and(|w| e.weight > w) {
                    continue;
                }
                cur.push(x);
                out.push(cur.clone());
                rec(a, letters, left - cost, wleft.map(|w| w - e.weight), cur, out);
                cur.pop();
            }
        }
        rec(&input, &letters, n, wmax, &mut cur, &mut words);
        let deg = |w: &Vec<usize>| w.len() + w.iter().map(|x| input.elems[*x].degree).sum::<usize>();
        words.sort_by(|a, b| deg(a).cmp(&deg(b)).then_with(|| a.cmp(b)));
        let index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let elems = words
            .iter()
            .map(|w| BasisElt {
                label: format!("[{}]", w.iter().map(|x| input.elems[*x].label.as_str()).collect::<Vec<_>>().join("|")),
                degree: deg(w),
                weight: w.iter().map(|x| input.elems[*x].weight).sum(),
            })
            .collect();
        let mut out = Self::assemble(input.ring.clone(), n, wmax, elems, 0, Structure::Bar { input, words, index });
        if n == 0 {
            out.warnings.push("truncation 0 holds no word of positive degree".into());
        }
        Ok(out)
    }

    /// `B̄ⁿ k[G]` through degree `n_top`; stage `k` is built through `n_top - (n - k)`.
    pub fn iterated_bar(group: &FGAbGroup, ring: &CoefficientRing, n: usize, n_top: usize) -> Result<Self> {
        if n == 0 {
            return Self::group_algebra(group, ring);
        }
        if n_top < n {
            return Err(Error::Truncation(format!("height {n} needs truncation at least {n}")));
        }
        let mut a = Arc::new(Self::group_algebra(group, ring)?);
        for k in 1..n {
            a = Arc::new(Self::bar(a, n_top - (n - k))?);
        }
        Self::bar(a, n_top)
    }

    pub fn with_ring(&self, ring: &CoefficientRing) -> Self {
        let mut out = self.clone();
        out.ring = ring.clone();
        if let Structure::Bar { input, .. } = &mut out.structure {
            *input = Arc::new(input.with_ring(ring));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn degree(&self, x: usize) -> usize {
        self.elems[x].degree
    }

    pub fn label(&self, x: usize) -> &str {
        &self.elems[x].label
    }

    pub fn dim(&self, d: usize) -> usize {
        if d > self.n {
            return 0;
        }
        self.starts[d + 1] - self.starts[d]
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.n).map(|d| self.dim(d)).collect()
    }

    pub fn in_degree(&self, d: usize) -> std::ops::Range<usize> {
        if d > self.n {
            return 0..0;
        }
        self.starts[d]..self.starts[d + 1]
    }

    /// Position of `x` inside its degree.
    pub fn local(&self, x: usize) -> usize {
        x - self.starts[self.elems[x].degree]
    }

    pub fn is_connected(&self) -> bool {
        self.dim(0) == 1
    }

    pub fn within(&self, degree: usize, weight: usize) -> bool {
        degree <= self.n && self.max_weight.is_none_or(|w| weight <= w)
    }

    pub fn bar_input(&self) -> Option<&Arc<BasedDGA>> {
        match &self.structure {
            Structure::Bar { input, .. } => Some(input),
            _ => None,
        }
    }

    pub fn word(&self, x: usize) -> Option<&[usize]> {
        match &self.structure {
            Structure::Bar { words, .. } => Some(&words[x]),
            _ => None,
        }
    }

    pub fn find_word(&self, w: &[usize]) -> Option<usize> {
        match &self.structure {
            Structure::Bar { index, .. } => index.get(w).copied(),
            _ => None,
        }
    }

    pub fn find_monomial(&self, e: &[usize]) -> Option<usize> {
        match &self.structure {
            Structure::Free { index, .. } => index.get(e).copied(),
            _ => None,
        }
    }

    pub fn group_element(&self, x: usize) -> Option<&[i64]> {
        match &self.structure {
            Structure::Group { elements, .. } => Some(&elements[x]),
            _ => None,
        }
    }

    pub fn monomial(&self, x: usize) -> Option<&[usize]> {
        match &self.structure {
            Structure::Free { monos, .. } => Some(&monos[x]),
            _ => None,
        }
    }

    pub fn find_group_element(&self, g: &[i64]) -> Option<usize> {
        match &self.structure {
            Structure::Group { index, .. } => index.get(g).copied(),
            _ => None,
        }
    }

    /// `x · y`, or `None` if the product leaves the represented range.
    pub fn product(&self, x: usize, y: usize) -> Option<LinComb> {
        let (ex, ey) = (&self.elems[x], &self.elems[y]);
        if !self.within(ex.degree + ey.degree, ex.weight + ey.weight) {
            return None;
        }
        match &self.structure {
            Structure::Group { group, elements, index } => Some(vec![(index[&group.add(&elements[x], &elements[y])], 1)]),
            Structure::Free { kind, gen_degree, monos, index, .. } => {
                Some(match mono_product(*kind, *gen_degree, &monos[x], &monos[y]) {
                    Some((m, c)) if !c.is_zero() => vec![(index[&m], c)],
                    _ => Vec::new(),
                })
            }
            Structure::Bar { input, words, index } => Some(
                shuffle_product(input.as_ref(), &words[x], &words[y])
                    .into_iter()
                    .map(|(w, c)| (index[&w], c))
                    .collect(),
            ),
        }
    }

    pub fn differential(&self, x: usize) -> &[(usize, Coeff)] {
        &self.d_cache.get_or_init(|| (0..self.len()).map(|x| self.compute_differential(x)).collect())[x]
    }

    fn compute_differential(&self, x: usize) -> LinComb {
        match &self.structure {
            Structure::Group { .. } | Structure::Free { .. } => Vec::new(),
            Structure::Bar { input, words, index } => bar_differential(input.as_ref(), &words[x])
                .expect("bar input is complete through the needed degree")
                .into_iter()
                .map(|(w, c)| (index[&w], c))
                .collect(),
        }
    }

    pub fn augmentation(&self, x: usize) -> Coeff {
        match &self.structure {
            Structure::Group { .. } => 1,
            _ if x == self.unit => 1,
            _ => 0,
        }
    }

    pub fn coproduct(&self, x: usize) -> &[((usize, usize), Coeff)] {
        &self.delta_cache.get_or_init(|| (0..self.len()).map(|x| self.compute_coproduct(x)).collect())[x]
    }

    fn compute_coproduct(&self, x: usize) -> Tensor {
        match &self.structure {
            Structure::Group { .. } => vec![((x, x), 1)],
            Structure::Free { kind, gen_degree, monos, index, .. } => mono_coproduct(*kind, *gen_degree, &monos[x])
                .into_iter()
                .filter(|(_, _, c)| !c.is_zero())
                .map(|(a, b, c)| ((index[&a], index[&b]), c))
                .collect(),
            Structure::Bar { input, words, index } => deconcatenation(input.as_ref(), &words[x])
                .into_iter()
                .map(|(a, b, c)| ((index[&a], index[&b]), c))
                .collect(),
        }
    }

    pub fn mul_lin(&self, a: &[(usize, Coeff)], b: &[(usize, Coeff)]) -> Option<LinComb> {
        let mut acc = Acc::default();
        for (x, c) in a {
            for (y, e) in b {
                for (z, f) in self.product(*x, *y)? {
                    acc.add(z, c * e * f);
                }
            }
        }
        Some(acc.finish())
    }

    pub fn d_lin(&self, a: &[(usize, Coeff)]) -> LinComb {
        let mut acc = Acc::default();
        for (x, c) in a {
            for &(z, f) in self.differential(*x) {
                acc.add(z, c * f);
            }
        }
        acc.finish()
    }

    /// Underlying chain complex. Entries are reduced into the ring's normal form.
    pub fn to_complex(&self) -> ChainComplex {
        let basis: Vec<Vec<String>> = (0..=self.n).map(|d| self.in_degree(d).map(|x| self.elems[x].label.clone()).collect()).collect();
        let mut higher = Vec::with_capacity(self.n);
        for d in 1..=self.n {
            let mut m = SparseMatrix::zeros(self.dim(d - 1), self.dim(d));
            for x in self.in_degree(d) {
                for &(z, c) in self.differential(x) {
                    m.set(self.local(z), self.local(x), self.ring.normalize(&int(c)));
                }
            }
            higher.push(m);
        }
        ChainComplex::new(self.ring.clone(), basis, higher).expect("bar differential shapes")
    }

    /// Complex JSON plus product and coproduct tables on basis pairs within the truncation.
    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self.to_complex()).expect("complex serializes");
        let lin = |l: &[(usize, Coeff)]| -> Value {
            Value::Array(l.iter().map(|(z, c)| json!([self.elems[*z].label, c.to_string()])).collect())
        };
        let mut product = Vec::new();
        for x in 0..self.len() {
            for y in 0..self.len() {
                if let Some(p) = self.product(x, y) {
                    if !p.is_empty() {
                        product.push(json!([self.elems[x].label, self.elems[y].label, lin(&p)]));
                    }
                }
            }
        }
        let coproduct: Vec<Value> = (0..self.len())
            .map(|x| {
                let terms: Vec<Value> = self
                    .coproduct(x)
                    .iter()
                    .map(|((a, b), c)| json!([self.elems[*a].label, self.elems[*b].label, c.to_string()]))
                    .collect();
                json!([self.elems[x].label, terms])
            })
            .collect();
        v["product"] = Value::Array(product);
        v["coproduct"] = Value::Array(coproduct);
        v
    }
}

fn group_label(g: &[i64]) -> String {
    if g.len() == 1 {
        format!("b{}", g[0])
    } else {
        format!("b{}", FGAbGroup::label(g))
    }
}

/// Letters are the non-unit basis elements.
impl LetterAlgebra for BasedDGA {
    type Letter = usize;

    fn letter_degree(&self, x: &usize) -> usize {
        self.elems[*x].degree
    }

    fn letter_epsilon(&self, x: &usize) -> Coeff {
        self.augmentation(*x)
    }

    fn letter_product(&self, x: &usize, y: &usize) -> Option<Vec<(usize, Coeff)>> {
        let mut p = self.product(*x, *y)?;
        p.retain(|(z, _)| *z != self.unit);
        Some(p)
    }

    fn letter_differential(&self, x: &usize) -> Option<Vec<(usize, Coeff)>> {
        Some(self.differential(*x).iter().filter(|(z, _)| *z != self.unit).copied().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> CoefficientRing {
        CoefficientRing::PrimeField(2)
    }

    #[test]
    fn group_algebra_basics() {
        let a = BasedDGA::group_algebra(&FGAbGroup::cyclic(2), &f2()).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a.product(1, 1).unwrap(), vec![(0, 1)]);
        let q3 = BasedDGA::group_algebra(&FGAbGroup::cyclic(3), &CoefficientRing::Rationals).unwrap();
        assert!((0..3).all(|x| q3.augmentation(x) == 1));
    }

    #[test]
    fn free_dimensions() {
        let q = CoefficientRing::Rationals;
        let l = BasedDGA::free(FreeKind::Exterior, 2, 1, &q, 4, None).unwrap();
        assert_eq!(l.dims(), vec![1, 2, 1, 0, 0]);
        let g = BasedDGA::free(FreeKind::DividedPower, 1, 2, &f2(), 8, None).unwrap();
        assert_eq!(g.dims(), vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
        let s = BasedDGA::free(FreeKind::Symmetric, 1, 2, &q, 6, None).unwrap();
        assert_eq!(s.dims(), vec![1, 0, 1, 0, 1, 0, 1]);
        assert!(BasedDGA::free(FreeKind::Exterior, 1, 2, &q, 4, None).is_err());
        assert!(BasedDGA::free(FreeKind::Exterior, 1, 2, &f2(), 4, None).is_ok());
    }

    #[test]
    fn one_word_per_degree() {
        let b = BasedDGA::iterated_bar(&FGAbGroup::cyclic(2), &f2(), 1, 6).unwrap();
        assert_eq!(b.dims(), vec![1; 7]);
        let h = b.to_complex().betti().unwrap();
        assert_eq!(h, vec![1; 6]);
    }
}
