//! Normalized simplicial replacement, category homology and the homotopy-colimit
//! spectral sequence.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::category::{Chain, FinCategory};
use super::diagram::{Diagram, ModuleFunctor};
use crate::chainkit::complex::labels;
use crate::chainkit::{pages_consistent, spectral_pages, Bicomplex, ChainComplex, SpectralPage};
use crate::error::{Error, Result};
use crate::exactring::homology::rank;
use crate::exactring::{int, CoefficientRing, FGModule, SparseMatrix};

/// Nondegenerate chains by length, with the number of columns actually used and
/// whether they exhaust the nerve.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub chains: Vec<Vec<Chain>>,
    index: Vec<HashMap<Chain, usize>>,
    /// All nondegenerate chains have length at most `chains.len() - 1`.
    pub complete: bool,
}

impl Nerve {
    /// Columns `0..=p_max`; the default is the full nerve, which must then be finite.
    pub fn new(shape: &FinCategory, p_max: Option<usize>) -> Result<Self> {
        let dim = shape.nerve_dimension();
        let cols = match (dim, p_max) {
            (Some(l), Some(p)) => l.min(p),
            (Some(l), None) => l,
            (None, Some(p)) => p,
            (None, None) => return Err(Error::Precondition("the nerve is unbounded; give pMax".into())),
        };
        if dim.is_none() && cols == 0 {
            return Err(Error::Precondition("pMax must be at least 1".into()));
        }
        let chains: Vec<Vec<Chain>> = (0..=cols).map(|p| shape.chains(p)).collect();
        let index = chains.iter().map(|cs| cs.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect()).collect();
        Ok(Nerve { chains, index, complete: dim.is_some_and(|l| l <= cols) })
    }

    pub fn p_max(&self) -> usize {
        self.chains.len() - 1
    }

    /// Total degrees `≤` this bound see every column they need.
    pub fn complete_through(&self, top: usize) -> usize {
        if self.complete {
            top
        } else {
            top.min(self.p_max())
        }
    }

    fn offsets(&self, p: usize, dims: &[usize]) -> (Vec<usize>, usize) {
        let mut offs = Vec::with_capacity(self.chains[p].len());
        let mut acc = 0;
        for c in &self.chains[p] {
            offs.push(acc);
            acc += dims[c.object];
        }
        (offs, acc)
    }

    /// `Σ (-1)^i d_i` from column `p` to column `p - 1` with coefficients in `f`.
    pub fn face_matrix(&self, shape: &FinCategory, p: usize, f: &ModuleFunctor) -> SparseMatrix {
        let (src_off, src_dim) = self.offsets(p, &f.dims);
        let (dst_off, dst_dim) = self.offsets(p - 1, &f.dims);
        let mut m = SparseMatrix::zeros(dst_dim, src_dim);
        for (k, c) in self.chains[p].iter().enumerate() {
            let d = f.dims[c.object];
            for (i, face, arrow) in shape.faces(c) {
                let t = dst_off[self.index[p - 1][&face]];
                let sign = if i % 2 == 0 { int(1) } else { int(-1) };
                match arrow {
                    None => {
                        for j in 0..d {
                            m.add_to(t + j, src_off[k] + j, &sign);
                        }
                    }
                    Some(a) => {
                        for ((r, j), v) in f.maps[a].entries() {
                            m.add_to(t + r, src_off[k] + j, &(v * &sign));
                        }
                    }
                }
            }
        }
        m
    }

    fn basis(&self, shape: &FinCategory, p: usize, dims: &[usize], tag: &str) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.chains[p] {
            let name = chain_label(shape, c);
            out.extend(labels(&format!("{name}{tag}"), dims[c.object]));
        }
        out
    }
}

pub fn chain_label(shape: &FinCategory, c: &Chain) -> String {
    if c.is_empty() {
        return format!("[{}]", shape.objects[c.object]);
    }
    let names: Vec<&str> = c.maps.iter().map(|m| shape.names[*m].as_str()).collect();
    format!("[{}]", names.join(","))
}

/// The normalized simplicial replacement as a bicomplex.
#[derive(Clone, Debug)]
pub struct Srep {
    pub bicomplex: Bicomplex,
    pub nerve: Nerve,
}

/// Column `p` is `⊕_σ C_*(D(c_p))` over nondegenerate `p`-chains; the horizontal
/// differential is `Σ (-1)^i d_i`, the last face applying `D(c_p → c_{p-1})`.
pub fn simplicial_replacement(d: &Diagram, p_max: Option<usize>) -> Result<Srep> {
    d.verify()?;
    let nerve = Nerve::new(&d.shape, p_max)?;
    let degrees: Vec<ModuleFunctor> = (0..=d.top).map(|q| d.degree(q)).collect();
    let mut columns = Vec::new();
    let mut horizontal = vec![Vec::new()];
    for p in 0..=nerve.p_max() {
        let basis: Vec<Vec<String>> = (0..=d.top).map(|q| nerve.basis(&d.shape, p, &degrees[q].dims, &format!("_{q}_"))).collect();
        let mut higher = Vec::new();
        for q in 1..=d.top {
            let (so, sd) = nerve.offsets(p, &degrees[q].dims);
            let (to, td) = nerve.offsets(p, &degrees[q - 1].dims);
            let mut m = SparseMatrix::zeros(td, sd);
            for (k, c) in nerve.chains[p].iter().enumerate() {
                for ((r, j), v) in d.objects[c.object].d[q].entries() {
                    m.set(to[k] + r, so[k] + j, v.clone());
                }
            }
            higher.push(m);
        }
        columns.push(ChainComplex::new(d.ring.clone(), basis, higher)?);
        if p > 0 {
            horizontal.push(degrees.iter().map(|f| nerve.face_matrix(&d.shape, p, f)).collect());
        }
    }
    let b = Bicomplex::new(d.ring.clone(), columns, horizontal, nerve.complete_through(d.top))?;
    if let Some((kind, p, q)) = b.verify().into_iter().next() {
        return Err(Error::NotAComplex(format!("simplicial replacement fails the {kind} identity at ({p},{q})")));
    }
    Ok(Srep { bicomplex: b, nerve })
}

/// `H_*(C; F)`: homology of `⊕_{p-chains} F(c_p)` with the alternating face sum.
/// Every degree is returned for a finite nerve, degrees `< pMax` otherwise.
pub fn category_homology(shape: &FinCategory, f: &ModuleFunctor, ring: &CoefficientRing, p_max: Option<usize>) -> Result<Vec<FGModule>> {
    f.verify(shape, ring)?;
    let nerve = Nerve::new(shape, p_max)?;
    let mut basis: Vec<Vec<String>> = (0..=nerve.p_max()).map(|p| nerve.basis(shape, p, &f.dims, "_")).collect();
    let mut higher: Vec<SparseMatrix> = (1..=nerve.p_max()).map(|p| nerve.face_matrix(shape, p, f)).collect();
    if nerve.complete {
        higher.push(SparseMatrix::zeros(basis[nerve.p_max()].len(), 0));
        basis.push(Vec::new());
    }
    ChainComplex::new(ring.clone(), basis, higher)?.homology_all()
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentialWitness {
    pub r: usize,
    pub p: usize,
    pub q: usize,
    pub rank: usize,
}

/// Page dimensions keyed by `(p, q)`, serialized as `"p,q"`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PageDims(pub BTreeMap<(usize, usize), usize>);

impl Serialize for PageDims {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for ((p, q), d) in &self.0 {
            m.serialize_entry(&format!("{p},{q}"), d)?;
        }
        m.end()
    }
}

impl PageDims {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.0.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total(&self, n: usize) -> usize {
        self.0.iter().filter(|((p, q), _)| p + q == n).map(|(_, d)| d).sum()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    pub ring: String,
    #[serde(rename = "pMax")]
    pub p_max: usize,
    /// Entries and total homology are exact for total degrees up to this bound.
    pub reliable: usize,
    pub e1: PageDims,
    pub e2: PageDims,
    #[serde(rename = "eInf")]
    pub e_inf: PageDims,
    #[serde(rename = "totalHomology")]
    pub total_homology: Vec<usize>,
    #[serde(rename = "collapseAtTwo")]
    pub collapse_at_two: bool,
    #[serde(rename = "firstNonzeroDifferential")]
    pub first_nonzero_differential: Option<DifferentialWitness>,
    /// `E¹_{p,q} = ⊕_σ H_q(D(c_p))`.
    #[serde(rename = "e1MatchesChains")]
    pub e1_matches_chains: bool,
    /// `E²_{p,q} = H_p(C; H_q(D))`.
    #[serde(rename = "e2MatchesCategoryHomology")]
    pub e2_matches_category_homology: bool,
    /// `Σ_{p+q=n} E^∞_{p,q} = H_n(Tot)`.
    pub converges: bool,
    #[serde(rename = "pagesConsistent")]
    pub pages_consistent: bool,
}

fn dims_of(page: &SpectralPage) -> PageDims {
    PageDims(page.entries.clone())
}

/// Runs the spectral sequence of the column filtration on the simplicial replacement.
pub fn hocolim_ss(d: &Diagram, p_max: Option<usize>) -> Result<CollapseReport> {
    if !d.ring.is_field() {
        return Err(Error::UnsupportedRing(format!("the spectral sequence needs a field, got {}", d.ring)));
    }
    let srep = simplicial_replacement(d, p_max)?;
    let b = &srep.bicomplex;
    let ct = b.complete_through;
    // d^r leaves the first quadrant once r exceeds the last column
    let r_max = (b.p_max() + 1).max(2);
    let pages = spectral_pages(b, r_max)?;
    let tot = b.totalize();
    let total_homology = tot.betti()?;

    let e1 = dims_of(&pages[0]);
    let e2 = dims_of(&pages[1]);
    let e_inf = dims_of(pages.last().expect("pages"));

    let betti: Vec<Vec<usize>> = d.objects.iter().map(|c| c.betti()).collect::<Result<_>>()?;
    let e1_matches_chains = e1.0.iter().all(|(&(p, q), &v)| srep.nerve.chains[p].iter().map(|c| betti[c.object][q]).sum::<usize>() == v);

    let mut e2_matches_category_homology = true;
    for q in 0..ct {
        let hq = d.homology_functor(q)?;
        let ch = category_homology(&d.shape, &hq, &d.ring, Some(srep.nerve.p_max()))?;
        for p in 0..ct - q {
            let want = ch.get(p).map_or(0, |m| m.num_generators());
            if e2.get(p, q) != want {
                e2_matches_category_homology = false;
            }
        }
    }

    let converges = (0..ct).all(|n| e_inf.total(n) == total_homology[n]);
    let mut first = None;
    'outer: for page in &pages[1..] {
        for (&(p, q), m) in &page.differentials {
            let r = rank(m, &d.ring)?;
            if r > 0 {
                first = Some(DifferentialWitness { r: page.r, p, q, rank: r });
                break 'outer;
            }
        }
    }
    Ok(CollapseReport {
        ring: d.ring.to_string(),
        p_max: b.p_max(),
        reliable: ct.saturating_sub(1),
        collapse_at_two: e2 == e_inf,
        e1,
        e2,
        e_inf,
        total_homology,
        first_nonzero_differential: first,
        e1_matches_chains,
        e2_matches_category_homology,
        converges,
        pages_consistent: pages_consistent(&pages),
    })
}

/// `⊕_{p+q=n} srep_p H_q(D)` with `d¹` as its only differential.
pub fn e1_total_complex(d: &Diagram, p_max: Option<usize>) -> Result<ChainComplex> {
    if d.top == 0 {
        return Err(Error::Truncation("E¹ needs complexes through degree 1".into()));
    }
    let nerve = Nerve::new(&d.shape, p_max)?;
    let top = d.top - 1;
    let hs: Vec<ModuleFunctor> = (0..=top).map(|q| d.homology_functor(q)).collect::<Result<_>>()?;
    let mut columns = Vec::new();
    let mut horizontal = vec![Vec::new()];
    for p in 0..=nerve.p_max() {
        let basis = (0..=top).map(|q| nerve.basis(&d.shape, p, &hs[q].dims, &format!("_H{q}_"))).collect();
        columns.push(ChainComplex::zero_differential(d.ring.clone(), basis));
        if p > 0 {
            horizontal.push(hs.iter().map(|f| nerve.face_matrix(&d.shape, p, f)).collect());
        }
    }
    Ok(Bicomplex::new(d.ring.clone(), columns, horizontal, nerve.complete_through(top))?.totalize())
}

impl CollapseReport {
    /// Plain-text grids of `E²` and `E^∞`, rows `q` from the top.
    pub fn table(&self) -> String {
        let mut s = String::new();
        for (name, page) in [("E2", &self.e2), ("Einf", &self.e_inf)] {
            let pm = page.0.keys().map(|k| k.0).max().unwrap_or(0);
            let qm = page.0.keys().map(|k| k.1).max().unwrap_or(0);
            let _ = writeln!(s, "{name}");
            for q in (0..=qm).rev() {
                let row: Vec<String> = (0..=pm)
                    .map(|p| match page.0.get(&(p, q)) {
                        Some(v) => format!("{v:>3}"),
                        None => "  .".into(),
                    })
                    .collect();
                let _ = writeln!(s, "q={q:<2}|{}", row.join(""));
            }
            let ps: Vec<String> = (0..=pm).map(|p| format!("{p:>3}")).collect();
            let _ = writeln!(s, "    +{}", ps.join(""));
        }
        let _ = writeln!(s, "H(Tot) = {:?}", self.total_homology);
        let _ = writeln!(s, "collapse at E2: {}", self.collapse_at_two);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hocolim::category::Arrow;

    fn s(x: &str) -> String {
        x.to_string()
    }

    fn point(ring: &CoefficientRing, top: usize) -> ChainComplex {
        let mut basis = vec![vec![s("pt")]];
        basis.extend((1..=top).map(|_| Vec::new()));
        ChainComplex::zero_differential(ring.clone(), basis)
    }

    fn ones(top: usize) -> Vec<SparseMatrix> {
        (0..=top).map(|i| if i == 0 { SparseMatrix::identity(1) } else { SparseMatrix::zeros(0, 0) }).collect()
    }

    fn span() -> FinCategory {
        FinCategory::poset(vec![s("a"), s("b"), s("c")], &[(s("c"), s("a")), (s("c"), s("b"))]).unwrap()
    }

    #[test]
    fn single_object() {
        let q = CoefficientRing::Rationals;
        let c = FinCategory::new(vec![s("x")], vec![], vec![]).unwrap();
        let d = Diagram::new(c, vec![point(&q, 3)], vec![]).unwrap();
        let r = simplicial_replacement(&d, None).unwrap();
        assert_eq!(r.bicomplex.p_max(), 0);
        assert_eq!(r.bicomplex.columns[0].dims(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn span_columns() {
        let q = CoefficientRing::Rationals;
        let d = Diagram::new(span(), vec![point(&q, 2); 3], vec![ones(2), ones(2)]).unwrap();
        let r = simplicial_replacement(&d, Some(5)).unwrap();
        let dims: Vec<usize> = (0..=2).map(|p| r.bicomplex.dim(p, 0)).collect();
        assert_eq!(dims, vec![3, 2, 0]);
    }

    #[test]
    fn isomorphism_shape_is_contractible() {
        let q = CoefficientRing::Rationals;
        let c = FinCategory::new(
            vec![s("a"), s("b")],
            vec![Arrow { id: s("f"), src: s("a"), dst: s("b") }, Arrow { id: s("g"), src: s("b"), dst: s("a") }],
            vec![[s("f"), s("g"), s("id_a")], [s("g"), s("f"), s("id_b")]],
        )
        .unwrap();
        let d = Diagram::new(c, vec![point(&q, 6); 2], vec![ones(6), ones(6)]).unwrap();
        let r = hocolim_ss(&d, Some(5)).unwrap();
        assert_eq!(r.reliable, 4);
        assert_eq!(r.total_homology, vec![1, 0, 0, 0, 0]);
        assert!(r.converges && r.e2_matches_category_homology);
        assert!(simplicial_replacement(&d, None).is_err());
    }

    #[test]
    fn category_homology_examples() {
        let q = CoefficientRing::Rationals;
        let ab = FinCategory::poset(vec![s("a"), s("b")], &[(s("a"), s("b"))]).unwrap();
        let h = category_homology(&ab, &ModuleFunctor::constant(&ab, 1), &q, None).unwrap();
        assert_eq!(h.iter().map(|m| m.num_generators()).collect::<Vec<_>>(), vec![1, 0]);

        let sp = span();
        let h = category_homology(&sp, &ModuleFunctor::constant(&sp, 1), &q, None).unwrap();
        assert_eq!(h.iter().map(|m| m.num_generators()).collect::<Vec<_>>(), vec![1, 0]);

        let mut f = ModuleFunctor { dims: vec![0, 0, 1], maps: Vec::new() };
        for m in 0..sp.num_morphisms() {
            let (t, u) = (f.dims[sp.dst[m]], f.dims[sp.src[m]]);
            f.maps.push(if t == u { SparseMatrix::identity(t) } else { SparseMatrix::zeros(t, u) });
        }
        let h = category_homology(&sp, &f, &q, None).unwrap();
        assert_eq!(h.iter().map(|m| m.num_generators()).collect::<Vec<_>>(), vec![0, 1]);

        // over Z with c→a doubling and c→b zero: relations c = 2a, c = 0
        let z = CoefficientRing::Integers;
        let mut g = ModuleFunctor::constant(&sp, 1);
        g.maps[sp.morphism("c<a").unwrap()] = SparseMatrix::from_dense(&[vec![2]]);
        g.maps[sp.morphism("c<b").unwrap()] = SparseMatrix::from_dense(&[vec![0]]);
        let h = category_homology(&sp, &g, &z, None).unwrap();
        assert_eq!(h[0].free_rank, 1);
        assert_eq!(h[0].torsion.len(), 1);
        assert!(h[1].is_zero());
    }

    #[test]
    fn non_functorial_input_is_rejected() {
        let q = CoefficientRing::Rationals;
        let sp = span();
        let mut f = ModuleFunctor::constant(&sp, 1);
        f.maps[0] = SparseMatrix::from_dense(&[vec![2]]);
        assert!(matches!(category_homology(&sp, &f, &q, None), Err(Error::DiagramInvalid(_))));
    }

    #[test]
    fn terminal_object_collapses_to_column_zero() {
        let q = CoefficientRing::Rationals;
        let c = FinCategory::poset(vec![s("a"), s("b"), s("t")], &[(s("a"), s("t")), (s("b"), s("t"))]).unwrap();
        let d = Diagram::new(c, vec![point(&q, 4); 3], vec![ones(4), ones(4)]).unwrap();
        let r = hocolim_ss(&d, None).unwrap();
        assert!(r.collapse_at_two && r.converges && r.e1_matches_chains && r.e2_matches_category_homology);
        assert!(r.e2.0.iter().all(|(&(p, _), &v)| p == 0 || v == 0));
        assert_eq!(r.total_homology, vec![1, 0, 0, 0]);
    }
}
