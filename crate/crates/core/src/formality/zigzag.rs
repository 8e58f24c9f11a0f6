//! Zig-zags of quasi-isomorphisms from `B̄ⁿk[G]` to `Λ` or `Γ` of `G⊗k[n]`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::emap::e_map_from;
use super::inclusions::{divided_to_symmetric, i_gamma_into, i_lambda_into};
use super::check_hypotheses;
use crate::barlab::dga::Structure;
use crate::barlab::map::AlgebraMap;
use crate::barlab::{BasedDGA, FGAbGroup, FreeKind};
use crate::error::{Error, Result};
use crate::exactring::CoefficientRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// From object `k` to object `k + 1`.
    Forward,
    /// From object `k + 1` to object `k`.
    Backward,
}

#[derive(Clone, Debug)]
pub struct Arrow {
    pub map: AlgebraMap,
    pub direction: Direction,
}

/// Objects `O_0 = B̄ⁿk[G], …, O_m` joined by one arrow between each consecutive pair.
#[derive(Clone, Debug)]
pub struct ZigZag {
    pub group: FGAbGroup,
    pub n: usize,
    pub objects: Vec<Arc<BasedDGA>>,
    pub arrows: Vec<Arrow>,
    /// Homology is trusted through this degree on every object.
    pub reliable: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrowReport {
    pub name: String,
    pub direction: Direction,
    #[serde(rename = "chainMapOk")]
    pub chain_map_ok: bool,
    #[serde(rename = "algebraMapOk")]
    pub algebra_map_ok: bool,
    #[serde(rename = "coalgebraMapOk")]
    pub coalgebra_map_ok: bool,
    /// Largest `d` with `H_i(f)` an isomorphism for all `i ≤ d`; `None` if it fails in degree 0.
    #[serde(rename = "quasiIsoUpTo")]
    pub quasi_iso_up_to: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZigZagReport {
    pub group: String,
    pub ring: String,
    pub n: usize,
    #[serde(rename = "N")]
    pub n_top: usize,
    pub reliable: usize,
    pub arrows: Vec<ArrowReport>,
    pub endpoint: String,
    #[serde(rename = "endpointDims")]
    pub endpoint_dims: Vec<usize>,
    #[serde(rename = "barBetti")]
    pub bar_betti: Vec<usize>,
    pub verdict: String,
}

fn key(a: &Arc<BasedDGA>) -> usize {
    Arc::as_ptr(a) as usize
}

/// Bars every object through `n_top` once and every arrow letterwise.
fn bar_all(z: &ZigZag, n_top: usize) -> Result<(Vec<Arc<BasedDGA>>, Vec<Arrow>)> {
    let mut bars: HashMap<usize, Arc<BasedDGA>> = HashMap::new();
    let mut objects = Vec::new();
    for o in &z.objects {
        let b = Arc::new(BasedDGA::bar(o.clone(), n_top)?);
        bars.insert(key(o), b.clone());
        objects.push(b);
    }
    let mut arrows = Vec::new();
    for a in &z.arrows {
        let (s, t) = (&bars[&key(&a.map.source)], &bars[&key(&a.map.target)]);
        arrows.push(Arrow { map: a.map.bar_of_map(s.clone(), t.clone())?, direction: a.direction });
    }
    Ok((objects, arrows))
}

fn end_kind(a: &BasedDGA) -> Option<FreeKind> {
    match &a.structure {
        Structure::Free { kind, .. } => Some(*kind),
        _ => None,
    }
}

/// The formality zig-zag of height `n` through degree `n_top`.
///
/// Height 1 is the single map `e`; height 2 is `B̄(e)` followed by `i_Γ` backwards;
/// each further height bars the previous zig-zag and closes it with `i_Γ`, or with
/// `B̄(Γ≅S)` and `i_Λ`, which needs a `Q`-algebra.
pub fn formality_zigzag(group: &FGAbGroup, ring: &CoefficientRing, n: usize, n_top: usize) -> Result<ZigZag> {
    check_hypotheses(group, ring)?;
    if n == 0 {
        return Err(Error::Precondition("height must be at least 1".into()));
    }
    if n >= 3 && !ring.is_q_algebra() {
        return Err(Error::Precondition(format!("height {n} needs a Q-algebra, got {ring}")));
    }
    if !group.is_finite() {
        return Err(Error::UnsupportedRing(format!("{group} is infinite; zig-zags need degreewise finite bars")));
    }
    if n_top < n + 1 {
        return Err(Error::Truncation(format!("height {n} needs N ≥ {}", n + 1)));
    }
    let b1 = Arc::new(BasedDGA::iterated_bar(group, ring, 1, n_top)?);
    let e = e_map_from(group, b1.clone())?;
    let mut z = ZigZag { group: group.clone(), n: 1, objects: vec![b1, e.target.clone()], arrows: vec![Arrow { map: e, direction: Direction::Forward }], reliable: n_top - 1 };
    for h in 2..=n {
        let (mut objects, mut arrows) = bar_all(&z, n_top)?;
        let last = objects.last().expect("nonempty").clone();
        let inner = last.bar_input().expect("bar").clone();
        match end_kind(&inner) {
            Some(FreeKind::Exterior) => {
                let ig = i_gamma_into(last)?;
                objects.push(ig.source.clone());
                arrows.push(Arrow { map: ig, direction: Direction::Backward });
            }
            Some(FreeKind::DividedPower) => {
                let iso = divided_to_symmetric(inner)?;
                let sym_bar = Arc::new(BasedDGA::bar(iso.target.clone(), n_top)?);
                let biso = iso.bar_of_map(last, sym_bar.clone())?;
                objects.push(sym_bar.clone());
                arrows.push(Arrow { map: biso, direction: Direction::Forward });
                let il = i_lambda_into(sym_bar)?;
                objects.push(il.source.clone());
                arrows.push(Arrow { map: il, direction: Direction::Backward });
            }
            _ => return Err(Error::Shape("unexpected zig-zag endpoint".into())),
        }
        z = ZigZag { group: group.clone(), n: h, objects, arrows, reliable: n_top - 1 };
    }
    Ok(z)
}

impl ZigZag {
    pub fn endpoint(&self) -> &Arc<BasedDGA> {
        self.objects.last().expect("nonempty")
    }

    pub fn verify(&self) -> Result<Vec<ArrowReport>> {
        let mut out = Vec::new();
        for a in &self.arrows {
            let r = a.map.check();
            let qi = a.map.to_chain_map().quasi_iso(self.reliable)?;
            let up_to = match qi.fails_at {
                None => Some(self.reliable),
                Some(0) => None,
                Some(d) => Some(d - 1),
            };
            out.push(ArrowReport {
                name: a.map.name.clone(),
                direction: a.direction,
                chain_map_ok: r.chain_ok(),
                algebra_map_ok: r.algebra_ok(),
                coalgebra_map_ok: r.coalgebra_ok(),
                quasi_iso_up_to: up_to,
            });
        }
        Ok(out)
    }

    pub fn report(&self, n_top: usize) -> Result<ZigZagReport> {
        let arrows = self.verify()?;
        let end = self.endpoint();
        let ring = end.ring.clone();
        let all = arrows.iter().all(|a| a.chain_map_ok && a.algebra_map_ok && a.quasi_iso_up_to == Some(self.reliable));
        let endpoint = match &end.structure {
            Structure::Free { kind, rank, gen_degree, .. } => format!("{}(k^{rank}[{gen_degree}])", kind.symbol()),
            _ => end.label(end.unit).to_string(),
        };
        let bar_betti = self.objects[0].to_complex().truncate(self.reliable + 1).betti()?;
        let endpoint_dims = end.dims().into_iter().take(self.reliable + 1).collect();
        Ok(ZigZagReport {
            group: self.group.to_string(),
            ring: ring.to_string(),
            n: self.n,
            n_top,
            reliable: self.reliable,
            arrows,
            endpoint,
            endpoint_dims,
            bar_betti,
            verdict: if all { "all-quasi-iso".into() } else { "failed".into() },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_two_z3() {
        let z = formality_zigzag(&FGAbGroup::cyclic(3), &CoefficientRing::Rationals, 2, 6).unwrap();
        assert_eq!(z.arrows.len(), 2);
        let r = z.report(6).unwrap();
        assert_eq!(r.verdict, "all-quasi-iso", "{r:?}");
        assert_eq!(r.endpoint_dims, vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn height_three_z2() {
        let z = formality_zigzag(&FGAbGroup::cyclic(2), &CoefficientRing::Rationals, 3, 6).unwrap();
        assert_eq!(z.arrows.len(), 4);
        let r = z.report(6).unwrap();
        assert_eq!(r.verdict, "all-quasi-iso", "{r:?}");
        assert!(r.endpoint.starts_with("Λ"));
    }

    #[test]
    fn preconditions() {
        let e = formality_zigzag(&FGAbGroup::cyclic(2), &CoefficientRing::PrimeField(2), 2, 6).unwrap_err();
        assert!(e.to_string().contains("torsion"));
        let e = formality_zigzag(&FGAbGroup::cyclic(3), &CoefficientRing::localized([3]).unwrap(), 3, 6).unwrap_err();
        assert!(e.to_string().contains("Q-algebra"));
    }
}
