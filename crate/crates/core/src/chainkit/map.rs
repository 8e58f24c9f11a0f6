use serde::Serialize;

use super::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::exactring::echelon::FieldHomology;
use crate::exactring::field::{Field, FieldKind};
use crate::exactring::homology::{field_columns, from_scalar_vec, to_scalar_vec};
use crate::exactring::{CoefficientRing, SparseMatrix};
use crate::with_field;

/// Degreewise linear map between two complexes over the same ring.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub components: Vec<SparseMatrix>,
}

/// Result of a quasi-isomorphism test. Over a field the certificate holds the
/// matrices of `H_i(f)` in the witness bases of source and target.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiIsoReport {
    #[serde(rename = "isQuasiIso")]
    pub is_quasi_iso: bool,
    #[serde(rename = "upTo")]
    pub up_to: usize,
    /// First degree where the test failed.
    #[serde(rename = "failsAt")]
    pub fails_at: Option<usize>,
    pub certificate: Vec<SparseMatrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, components: Vec<SparseMatrix>) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::Shape(format!("rings differ: {} vs {}", source.ring, target.ring)));
        }
        let top = source.n.min(target.n);
        if components.len() <= top {
            return Err(Error::Shape(format!("map needs components in degrees 0..={top}")));
        }
        for (i, f) in components.iter().enumerate().take(top + 1) {
            if f.rows != target.dim(i) || f.cols != source.dim(i) {
                return Err(Error::Shape(format!(
                    "component {i} is {}x{}, expected {}x{}",
                    f.rows,
                    f.cols,
                    target.dim(i),
                    source.dim(i)
                )));
            }
        }
        Ok(ChainMap { source, target, components })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let comps = (0..=c.n).map(|i| SparseMatrix::identity(c.dim(i))).collect();
        ChainMap { source: c.clone(), target: c.clone(), components: comps }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        let top = source.n.min(target.n);
        let comps = (0..=top).map(|i| SparseMatrix::zeros(target.dim(i), source.dim(i))).collect();
        ChainMap { source: source.clone(), target: target.clone(), components: comps }
    }

    pub fn top(&self) -> usize {
        self.source.n.min(self.target.n).min(self.components.len() - 1)
    }

    /// Degrees `i` where `d f_i ≠ f_{i-1} d`.
    pub fn chain_map_failures(&self) -> Vec<usize> {
        let ring = &self.source.ring;
        (1..=self.top())
            .filter(|&i| {
                let lhs = self.target.d[i].mul(&self.components[i]);
                let rhs = self.components[i - 1].mul(&self.source.d[i]);
                match (lhs, rhs) {
                    (Ok(a), Ok(b)) => !a.sub(&b).map(|x| x.is_zero_in(ring)).unwrap_or(false),
                    _ => true,
                }
            })
            .collect()
    }

    pub fn is_chain_map(&self) -> bool {
        self.chain_map_failures().is_empty()
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &ChainMap) -> Result<ChainMap> {
        let top = self.top().min(first.top());
        let comps = (0..=top).map(|i| self.components[i].mul(&first.components[i])).collect::<Result<Vec<_>>>()?;
        Ok(ChainMap {
            source: first.source.truncate(top),
            target: self.target.truncate(top),
            components: comps,
        })
    }

    /// Mapping cone: `Cone_j = S_{j-1} ⊕ T_j`, `D(x, y) = (-dx, f x + dy)`.
    pub fn cone(&self) -> ChainComplex {
        let top = self.top();
        let (s, t) = (&self.source, &self.target);
        let mut basis = Vec::new();
        for j in 0..=top {
            let mut b: Vec<String> = if j == 0 { Vec::new() } else { s.basis[j - 1].iter().map(|x| format!("s:{x}")).collect() };
            b.extend(t.basis[j].iter().map(|x| format!("t:{x}")));
            basis.push(b);
        }
        let neg = -crate::exactring::int(1);
        let mut higher = Vec::new();
        for j in 1..=top {
            let s_prev = if j >= 2 { s.dim(j - 2) } else { 0 };
            let ds = if j >= 2 { Some(s.d[j - 1].scale(&neg)) } else { None };
            let m = SparseMatrix::block(
                s_prev,
                t.dim(j - 1),
                s.dim(j - 1),
                t.dim(j),
                [ds.as_ref(), None, Some(&self.components[j - 1]), Some(&t.d[j])],
            );
            higher.push(m);
        }
        ChainComplex::new(s.ring.clone(), basis, higher).expect("cone shapes")
    }

    /// Whether `H_i(f)` is an isomorphism for every `i ≤ up_to`.
    ///
    /// Over a field this compares witness bases directly. Over other rings it
    /// checks that the mapping cone is acyclic through degree `up_to + 1`, which
    /// certifies the isomorphisms (and surjectivity one degree higher).
    pub fn quasi_iso(&self, up_to: usize) -> Result<QuasiIsoReport> {
        let reliable = self.source.reliable().min(self.target.reliable()).min(self.top().saturating_sub(1));
        if up_to > reliable {
            return Err(Error::Truncation(format!("quasi-iso check up to {up_to} exceeds reliable degree {reliable}")));
        }
        match &self.source.ring {
            CoefficientRing::Rationals | CoefficientRing::PrimeField(_) => {
                let kind = FieldKind::of(&self.source.ring)?;
                with_field!(kind, f => self.field_quasi_iso(&f, up_to))
            }
            _ => {
                if up_to + 2 > self.top() {
                    return Err(Error::Truncation("cone test needs one extra degree".into()));
                }
                let cone = self.cone();
                for j in 0..=up_to + 1 {
                    if !cone.homology(j)?.is_zero() {
                        return Ok(QuasiIsoReport {
                            is_quasi_iso: false,
                            up_to,
                            fails_at: Some(j.min(up_to)),
                            certificate: Vec::new(),
                        });
                    }
                }
                Ok(QuasiIsoReport { is_quasi_iso: true, up_to, fails_at: None, certificate: Vec::new() })
            }
        }
    }

    fn field_quasi_iso<F: Field>(&self, f: &F, up_to: usize) -> Result<QuasiIsoReport> {
        let mut cert = Vec::new();
        let mut fails_at = None;
        for i in 0..=up_to {
            let m = self.induced_matrix(f, i)?;
            let iso = m.rows == m.cols && crate::exactring::homology::rank(&m, &self.source.ring)? == m.rows;
            cert.push(m);
            if !iso && fails_at.is_none() {
                fails_at = Some(i);
            }
        }
        Ok(QuasiIsoReport { is_quasi_iso: fails_at.is_none(), up_to, fails_at, certificate: cert })
    }

    /// Matrix of `H_i(f)` in witness bases (columns: source witnesses).
    pub fn induced_matrix<F: Field>(&self, f: &F, i: usize) -> Result<SparseMatrix> {
        let hs = field_homology(f, &self.source, i)?;
        let ht = field_homology(f, &self.target, i)?;
        induced_on(f, &hs, &ht, &self.components[i])
    }
}

pub fn field_homology<F: Field>(f: &F, c: &ChainComplex, i: usize) -> Result<FieldHomology<F>> {
    if i + 1 > c.n {
        return Err(Error::Truncation(format!("H_{i} needs degree {}", i + 1)));
    }
    Ok(FieldHomology::new(f, &field_columns(f, &c.d[i]), &field_columns(f, &c.d[i + 1])))
}

/// Matrix of the map induced by `comp` between two field homologies.
pub fn induced_on<F: Field>(
    f: &F,
    hs: &FieldHomology<F>,
    ht: &FieldHomology<F>,
    comp: &SparseMatrix,
) -> Result<SparseMatrix> {
    let mut m = SparseMatrix::zeros(ht.dim(), hs.dim());
    for (k, w) in hs.witnesses.iter().enumerate() {
        let img = comp.apply(&to_scalar_vec(f, w));
        let img = from_scalar_vec(f, &img);
        let coords = ht
            .coordinates(&img)
            .ok_or_else(|| Error::NotAComplex("image of a cycle is not a cycle".into()))?;
        for (r, v) in coords {
            m.set(r, k, f.to_scalar(&v));
        }
    }
    Ok(m)
}
