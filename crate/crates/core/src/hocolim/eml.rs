//! Diagrams of Eilenberg-MacLane models: iterated bars or their formal replacements.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Deserialize;

use super::category::{Arrow, FinCategory};
use super::diagram::Diagram;
use crate::barlab::free::{mono_product, monomials, FreeKind};
use crate::barlab::map::AlgebraMap;
use crate::barlab::{BasedDGA, FGAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::exactring::{int, CoefficientRing, Scalar};
use crate::formality::check_hypotheses;
use crate::formality::emap::wedge;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// `B̄ⁿk[G]` with letterwise maps.
    Bar,
    /// `Λ(G⊗k[n])` for odd `n`, `Γ(G⊗k[n])` for even `n`, zero differential.
    Formal,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bar" => Ok(Model::Bar),
            "formal" => Ok(Model::Formal),
            _ => Err(Error::Parse(format!("unknown model '{s}' (bar or formal)"))),
        }
    }
}

type Comb = BTreeMap<Vec<usize>, Scalar>;

fn mul(kind: FreeKind, deg: usize, a: &Comb, b: &Comb) -> Comb {
    let mut out = Comb::new();
    for (m, c) in a {
        for (n, e) in b {
            if let Some((p, s)) = mono_product(kind, deg, m, n) {
                *out.entry(p).or_insert_with(Scalar::zero) += c * e * int(s);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `γ_m(Σ a_i y_i) = Σ_{|α|=m} Π a_i^{α_i} γ_α`.
fn divided_power_of(v: &[i64], m: usize) -> Comb {
    monomials(FreeKind::Symmetric, v.len(), m)
        .into_iter()
        .filter_map(|alpha| {
            let c: i64 = v.iter().zip(&alpha).map(|(a, e)| a.pow(*e as u32)).product();
            (c != 0).then(|| (alpha, int(c)))
        })
        .collect()
}

/// `Λ(f)` or `Γ(f)` for the linear map with integer matrix `matrix` (target × source).
pub fn free_functor(matrix: &[Vec<i64>], source: Arc<BasedDGA>, target: Arc<BasedDGA>) -> Result<AlgebraMap> {
    use crate::barlab::Structure;
    let (kind, r, deg) = match &source.structure {
        Structure::Free { kind, rank, gen_degree, .. } => (*kind, *rank, *gen_degree),
        _ => return Err(Error::Shape("free functor needs a free algebra".into())),
    };
    let r2 = match &target.structure {
        Structure::Free { rank, .. } => *rank,
        _ => return Err(Error::Shape("free functor needs a free algebra".into())),
    };
    let cols: Vec<Vec<i64>> = (0..r).map(|j| (0..r2).map(|i| matrix[i][j]).collect()).collect();
    let mut images = Vec::with_capacity(source.len());
    for x in 0..source.len() {
        let e = source.monomial(x).expect("free basis");
        let comb: Comb = match kind {
            FreeKind::Exterior => {
                let vs: Vec<Vec<i64>> = (0..r).filter(|j| e[*j] == 1).map(|j| cols[j].clone()).collect();
                wedge(&vs, r2).into_iter().collect()
            }
            FreeKind::DividedPower => {
                let mut acc: Comb = [(vec![0; r2], Scalar::one())].into_iter().collect();
                for j in 0..r {
                    if e[j] > 0 {
                        acc = mul(kind, deg, &acc, &divided_power_of(&cols[j], e[j]));
                    }
                }
                acc
            }
            FreeKind::Symmetric => return Err(Error::Shape("symmetric algebras are not used as formal models".into())),
        };
        let mut img = Vec::new();
        for (m, c) in comb {
            let z = target.find_monomial(&m).ok_or_else(|| Error::Truncation("image monomial outside the target".into()))?;
            img.push((z, c));
        }
        images.push(img);
    }
    AlgebraMap::new(format!("{}(f)", kind.symbol()), source, target, images)
}

fn formal_object(group: &FGAbGroup, ring: &CoefficientRing, n: usize, n_top: usize) -> Result<Arc<BasedDGA>> {
    let kind = if n % 2 == 1 { FreeKind::Exterior } else { FreeKind::DividedPower };
    Ok(Arc::new(BasedDGA::free(kind, group.free_rank, n, ring, n_top, None)?))
}

/// Diagram of models of `K(G_c, n)` over `shape`; `homs` gives one homomorphism per
/// non-identity morphism, in morphism order.
pub fn eml_diagram(shape: FinCategory, groups: Vec<FGAbGroup>, homs: Vec<GroupHom>, ring: &CoefficientRing, n: usize, n_top: usize, model: Model) -> Result<Diagram> {
    let n_obj = shape.objects.len();
    if groups.len() != n_obj || homs.len() != shape.num_morphisms() - n_obj {
        return Err(Error::DiagramInvalid("one group per object and one homomorphism per arrow required".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("height must be at least 1".into()));
    }
    let hom = |m: usize| if shape.is_identity(m) { GroupHom::identity(&groups[m]) } else { homs[m - n_obj].clone() };
    for m in n_obj..shape.num_morphisms() {
        let h = &homs[m - n_obj];
        if h.source != groups[shape.src[m]] || h.target != groups[shape.dst[m]] {
            return Err(Error::DiagramInvalid(format!("homomorphism for {} has the wrong groups", shape.names[m])));
        }
    }
    for f in 0..shape.num_morphisms() {
        for g in 0..shape.num_morphisms() {
            let Some(h) = shape.compose(f, g) else { continue };
            let (gf, hh) = (hom(g).compose_after(&hom(f)), hom(h));
            let src = &groups[shape.src[f]];
            let ok = (0..src.rank()).all(|j| {
                let mut e = src.zero();
                e[j] = 1;
                gf.apply(&e) == hh.apply(&e)
            });
            if !ok {
                return Err(Error::DiagramInvalid(format!("φ({}) ≠ φ({}) φ({})", shape.names[h], shape.names[g], shape.names[f])));
            }
        }
    }
    let (objects, maps) = match model {
        Model::Bar => {
            if let Some(g) = groups.iter().find(|g| !g.is_finite()) {
                return Err(Error::UnsupportedRing(format!("{g} is infinite; bar models need finite groups")));
            }
            let objects = groups.iter().map(|g| Ok(BasedDGA::iterated_bar(g, ring, n, n_top)?.to_complex())).collect::<Result<Vec<_>>>()?;
            let maps = homs
                .iter()
                .map(|h| Ok(AlgebraMap::iterated_group_map(h, ring, n, n_top)?.to_chain_map().components))
                .collect::<Result<Vec<_>>>()?;
            (objects, maps)
        }
        Model::Formal => {
            for g in &groups {
                check_hypotheses(g, ring)?;
            }
            if n > 2 && !ring.is_q_algebra() {
                return Err(Error::Precondition(format!("formal models at height {n} need a Q-algebra, got {ring}")));
            }
            let algs: Vec<Arc<BasedDGA>> = groups.iter().map(|g| formal_object(g, ring, n, n_top)).collect::<Result<_>>()?;
            let mut maps = Vec::new();
            for (k, h) in homs.iter().enumerate() {
                let m = n_obj + k;
                let f = free_functor(&h.matrix, algs[shape.src[m]].clone(), algs[shape.dst[m]].clone())?;
                maps.push(f.to_chain_map().components);
            }
            (algs.iter().map(|a| a.to_complex()).collect(), maps)
        }
    };
    Diagram::new(shape, objects, maps)
}

#[derive(Clone, Debug, Deserialize)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct ShapeSpec {
    #[serde(default)]
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    pub poset: Option<PosetSpec>,
}

fn default_ring() -> String {
    "Q".into()
}
fn default_n() -> usize {
    1
}
fn default_model() -> String {
    "formal".into()
}
fn default_top() -> usize {
    8
}

/// JSON description of an EML diagram. Poset shapes name their arrows `a<b`;
/// maps of composite arrows and of arrows touching the trivial group may be omitted.
#[derive(Clone, Debug, Deserialize)]
pub struct DiagramSpec {
    pub shape: ShapeSpec,
    pub groups: BTreeMap<String, String>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default = "default_ring")]
    pub ring: String,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_model")]
    pub model: String,
    #[serde(rename = "N", default = "default_top")]
    pub n_top: usize,
    #[serde(rename = "pMax")]
    pub p_max: Option<usize>,
}

impl DiagramSpec {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn category(&self) -> Result<FinCategory> {
        match &self.shape.poset {
            Some(p) => {
                let covers: Vec<(String, String)> = p.covers.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
                FinCategory::poset(p.elements.clone(), &covers)
            }
            None => FinCategory::new(self.shape.objects.clone(), self.shape.arrows.clone(), self.shape.compose.clone()),
        }
    }

    pub fn ring(&self) -> Result<CoefficientRing> {
        self.ring.parse()
    }

    pub fn build(&self) -> Result<Diagram> {
        let shape = self.category()?;
        let ring = self.ring()?;
        let groups: Vec<FGAbGroup> = shape
            .objects
            .iter()
            .map(|o| self.groups.get(o).ok_or_else(|| Error::Parse(format!("no group for object {o}")))?.parse())
            .collect::<Result<_>>()?;
        let n_obj = shape.objects.len();
        let mut homs: Vec<Option<GroupHom>> = vec![None; shape.num_morphisms()];
        for m in 0..n_obj {
            homs[m] = Some(GroupHom::identity(&groups[m]));
        }
        for m in n_obj..shape.num_morphisms() {
            let (s, t) = (&groups[shape.src[m]], &groups[shape.dst[m]]);
            if let Some(mat) = self.maps.get(&shape.names[m]) {
                let mat = if t.rank() == 0 { vec![] } else { mat.clone() };
                homs[m] = Some(GroupHom::new(s.clone(), t.clone(), mat)?);
            } else if s.rank() == 0 || t.rank() == 0 {
                homs[m] = Some(GroupHom::new(s.clone(), t.clone(), vec![vec![0; s.rank()]; t.rank()])?);
            }
        }
        for name in self.maps.keys() {
            if shape.morphism(name).is_none() {
                return Err(Error::Parse(format!("map given for unknown arrow {name}")));
            }
        }
        loop {
            let mut changed = false;
            for f in 0..shape.num_morphisms() {
                for g in 0..shape.num_morphisms() {
                    let Some(h) = shape.compose(f, g) else { continue };
                    if homs[h].is_none() {
                        if let (Some(a), Some(b)) = (&homs[f], &homs[g]) {
                            let c = b.compose_after(a);
                            homs[h] = Some(GroupHom::new(c.source, c.target, c.matrix)?);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let arrows = (n_obj..shape.num_morphisms())
            .map(|m| homs[m].clone().ok_or_else(|| Error::Parse(format!("no map for arrow {}", shape.names[m]))))
            .collect::<Result<Vec<_>>>()?;
        eml_diagram(shape, groups, arrows, &ring, self.n, self.n_top, self.model.parse()?)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::hocolim::srep::{e1_total_complex, hocolim_ss};

    fn load(name: &str) -> DiagramSpec {
        let path = format!("{}/data/diagrams/{name}.json", env!("CARGO_MANIFEST_DIR"));
        DiagramSpec::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn sphere_from_span() {
        let d = load("span_sphere").build().unwrap();
        let r = hocolim_ss(&d, None).unwrap();
        assert_eq!(r.total_homology, vec![1, 0, 1, 0, 0, 0]);
        assert_eq!((r.e2.get(0, 0), r.e2.get(1, 1)), (1, 1));
        assert!(r.collapse_at_two && r.converges && r.e1_matches_chains && r.e2_matches_category_homology);
        let e1 = e1_total_complex(&d, None).unwrap();
        assert_eq!(e1.betti().unwrap()[..3], [1, 0, 1]);
    }

    #[test]
    fn corpus() {
        for (name, want) in [
            ("fan_c2", vec![1, 0, 0, 0, 0, 0]),
            ("chain3", vec![1, 0, 0, 0, 0, 0]),
            ("fan_p2", vec![1, 0, 1, 0, 1, 0, 0]),
            ("fan_p1xp1", vec![1, 0, 2, 0, 1, 0, 0]),
        ] {
            let d = load(name).build().unwrap();
            let r = hocolim_ss(&d, None).unwrap();
            assert_eq!(r.total_homology, want, "{name}");
            assert!(r.collapse_at_two && r.converges && r.e1_matches_chains && r.e2_matches_category_homology, "{name}: {r:?}");
            let e1 = e1_total_complex(&d, None).unwrap().betti().unwrap();
            assert_eq!(e1[..want.len() - 1], want[..want.len() - 1], "{name}");
        }
    }

    #[test]
    fn formal_and_bar_agree_rationally() {
        let spec = load("span_z2");
        let formal = hocolim_ss(&spec.build().unwrap(), None).unwrap();
        let mut bar = spec.clone();
        bar.model = "bar".into();
        let bar = hocolim_ss(&bar.build().unwrap(), None).unwrap();
        assert_eq!(formal.total_homology, bar.total_homology);
        assert_eq!(formal.total_homology, vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn bar_model_mod_two() {
        let mut spec = load("span_z2");
        spec.ring = "F2".into();
        spec.n = 1;
        spec.model = "bar".into();
        spec.groups.insert("b".into(), "Z/2".into());
        spec.maps.insert("c<b".into(), vec![vec![1, 0]]);
        spec.n_top = 5;
        let d = spec.build().unwrap();
        let r = hocolim_ss(&d, None).unwrap();
        assert!(r.converges && r.e1_matches_chains && r.e2_matches_category_homology, "{r:?}");
        // formal models are refused here
        spec.model = "formal".into();
        assert!(matches!(spec.build(), Err(Error::Precondition(_))));
    }

    #[test]
    fn divided_power_functor() {
        let q = CoefficientRing::Rationals;
        let s = Arc::new(BasedDGA::free(FreeKind::DividedPower, 1, 2, &q, 6, None).unwrap());
        let t = Arc::new(BasedDGA::free(FreeKind::DividedPower, 2, 2, &q, 6, None).unwrap());
        let f = free_functor(&[vec![1], vec![2]], s.clone(), t.clone()).unwrap();
        let r = f.check();
        assert!(r.chain_ok() && r.algebra_ok() && r.coalgebra_ok(), "{r:?}");
        // γ_2(y1 + 2 y2) = γ_2(y1) + 2 y1 y2 + 4 γ_2(y2)
        let x = s.find_monomial(&[2]).unwrap();
        let mut img: Vec<(Vec<usize>, Scalar)> = f.images[x].iter().map(|(z, c)| (t.monomial(*z).unwrap().to_vec(), c.clone())).collect();
        img.sort();
        assert_eq!(img, vec![(vec![0, 2], int(4)), (vec![1, 1], int(2)), (vec![2, 0], int(1))]);
    }

    #[test]
    fn non_functorial_maps_are_rejected() {
        let mut spec = load("fan_c2");
        spec.maps.insert("o<s".into(), vec![]);
        assert!(spec.build().is_ok());
        let mut spec = load("chain3");
        spec.groups.insert("c".into(), "Z".into());
        spec.maps.insert("b<c".into(), vec![vec![1]]);
        spec.maps.insert("a<c".into(), vec![vec![1, 1]]);
        assert!(matches!(spec.build(), Err(Error::DiagramInvalid(_))));
    }
}
