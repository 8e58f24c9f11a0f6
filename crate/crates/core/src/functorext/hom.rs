//! Natural transformations, projective resolutions by representables, and Ext.

use std::collections::HashMap;

use super::functor::{FunctorRep, Mat, Variance, Vector};
use super::site::Site;
use crate::error::{Error, Result};
use crate::exactring::echelon::{kernel_of, unit_vec, Echelon, Solver};
use crate::exactring::field::{Field, PrimeField};

fn compatible(f: &FunctorRep, g: &FunctorRep) -> Result<()> {
    if !std::sync::Arc::ptr_eq(&f.site, &g.site) || f.p != g.p || f.variance != g.variance {
        return Err(Error::Shape(format!("{} and {} live on different sites", f.name, g.name)));
    }
    Ok(())
}

/// A natural transformation, one matrix per object.
pub type NatTrans = Vec<Mat>;

/// Basis of `Hom(F, G)`, imposing the naturality squares of the site's chosen morphisms.
pub fn hom_space(f: &FunctorRep, g: &FunctorRep) -> Result<Vec<NatTrans>> {
    compatible(f, g)?;
    let fld = f.field();
    let site = &f.site;
    let objects = site.r + 1;
    let mut off = vec![0; objects + 1];
    for a in 0..objects {
        off[a + 1] = off[a] + f.dims[a] * g.dims[a];
    }
    let mut eq_off = Vec::with_capacity(site.naturality.len());
    let mut rows = 0;
    for &m in &site.naturality {
        let (from, to) = f.variance.ends(&site.morphisms[m]);
        eq_off.push(rows);
        rows += g.dims[to] * f.dims[from];
    }
    // unknown (a, i, k) is entry (i, k) of η_a
    let mut columns: Vec<Vec<(usize, u64)>> = vec![Vec::new(); off[objects]];
    let f_rows: Vec<Mat> = site.naturality.iter().map(|&m| f.action[m].transpose()).collect();
    for (e, &m) in site.naturality.iter().enumerate() {
        let (from, to) = f.variance.ends(&site.morphisms[m]);
        let (df_from, base) = (f.dims[from], eq_off[e]);
        // G(m) η_from
        for i in 0..g.dims[from] {
            for k in 0..df_from {
                let col = &mut columns[off[from] + i * df_from + k];
                for (j, v) in &g.action[m].columns[i] {
                    col.push((base + j * df_from + k, *v));
                }
            }
        }
        // − η_to F(m)
        for i in 0..g.dims[to] {
            for k in 0..f.dims[to] {
                let col = &mut columns[off[to] + i * f.dims[to] + k];
                for (l, v) in &f_rows[e].columns[k] {
                    col.push((base + i * df_from + l, fld.neg(v)));
                }
            }
        }
    }
    let columns: Vec<Vector> = columns.into_iter().map(|c| crate::exactring::echelon::collect_vec(&fld, c)).collect();
    let kernel = kernel_of(&fld, &columns);
    Ok(kernel
        .into_iter()
        .map(|v| {
            (0..objects)
                .map(|a| {
                    let (df, dg) = (f.dims[a], g.dims[a]);
                    let mut cols: Vec<Vector> = vec![Vec::new(); df];
                    for (idx, x) in v.iter().filter(|(idx, _)| (off[a]..off[a + 1]).contains(idx)) {
                        let local = idx - off[a];
                        cols[local % df].push((local / df, *x));
                    }
                    for c in &mut cols {
                        c.sort_unstable();
                    }
                    Mat::from_columns(dg, cols)
                })
                .collect()
        })
        .collect())
}

/// Checks `G(m) η = η F(m)` on every listed morphism.
pub fn is_natural(f: &FunctorRep, g: &FunctorRep, eta: &NatTrans) -> bool {
    let fld = f.field();
    f.site.morphisms.iter().enumerate().all(|(m, mor)| {
        let (from, to) = f.variance.ends(mor);
        g.action[m].mul(&fld, &eta[from]) == eta[to].mul(&fld, &f.action[m])
    })
}

/// `⊕_j P^{X_j}` with coordinates `(j, g)` at each object.
#[derive(Clone, Debug)]
struct Free {
    objects: Vec<usize>,
    coords: Vec<Vec<(usize, usize)>>,
    lookup: Vec<HashMap<(usize, usize), usize>>,
}

impl Free {
    fn new(site: &Site, variance: Variance, objects: Vec<usize>, from_list: &[Vec<usize>]) -> Self {
        let mut coords = vec![Vec::new(); site.r + 1];
        for (j, &x) in objects.iter().enumerate() {
            for &g in &from_list[x] {
                let (_, to) = variance.ends(&site.morphisms[g]);
                coords[to].push((j, g));
            }
        }
        let lookup = coords.iter().map(|c| c.iter().enumerate().map(|(i, k)| (*k, i)).collect()).collect();
        Free { objects, coords, lookup }
    }

    fn apply(&self, site: &Site, variance: Variance, fld: &PrimeField, m: usize, v: &[(usize, u64)]) -> Vector {
        let (from, to) = variance.ends(&site.morphisms[m]);
        let entries = v.iter().map(|(i, c)| {
            let (j, g) = self.coords[from][*i];
            let h = match variance {
                Variance::Co => site.compose(g, m),
                Variance::Contra => site.compose(m, g),
            }
            .expect("complete site");
            (self.lookup[to][&(j, h)], *c)
        });
        crate::exactring::echelon::collect_vec(fld, entries)
    }
}

#[derive(Clone, Debug)]
struct Level {
    free: Free,
    /// Generator `j` as an element of the previous free module at `X_j` (of `F` at level 0).
    gens: Vec<Vector>,
}

/// A projective resolution `… → P_1 → P_0 → F` by sums of representables.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub variance: Variance,
    levels: Vec<Level>,
}

impl Resolution {
    /// Generator objects at each level.
    pub fn generators(&self) -> Vec<Vec<usize>> {
        self.levels.iter().map(|l| l.free.objects.clone()).collect()
    }
}

fn morphisms_from(site: &Site, variance: Variance) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); site.r + 1];
    for (i, m) in site.morphisms.iter().enumerate() {
        out[variance.ends(m).0].push(i);
    }
    out
}

/// Greedy generators of `F`, cheapest objects first.
fn cover(f: &FunctorRep, from_list: &[Vec<usize>]) -> Vec<(usize, Vector)> {
    let fld = f.field();
    let site = &f.site;
    let mut spans: Vec<Echelon<PrimeField>> = (0..=site.r).map(|_| Echelon::new(fld)).collect();
    let order: Vec<usize> = match f.variance {
        Variance::Co => (0..=site.r).collect(),
        Variance::Contra => (0..=site.r).rev().collect(),
    };
    let mut gens = Vec::new();
    for x in order {
        for i in 0..f.dims[x] {
            let e = unit_vec(&fld, i);
            if spans[x].contains(e.clone()) {
                continue;
            }
            for &g in &from_list[x] {
                let (_, to) = f.variance.ends(&site.morphisms[g]);
                spans[to].insert(f.action[g].apply(&fld, &e), Vec::new());
            }
            gens.push((x, e));
        }
    }
    gens
}

/// Resolves `F` through `P_levels`; `F` must have the variance the resolution uses.
pub fn resolve(f: &FunctorRep, levels: usize) -> Result<Resolution> {
    let site = f.site.clone();
    if !site.complete {
        return Err(Error::Budget(format!("resolutions need the full site; q={}, r={} is too large", site.q, site.r)));
    }
    let fld = f.field();
    let var = f.variance;
    let from_list = morphisms_from(&site, var);
    let mut target = f.clone();
    let mut embed: Option<Vec<Vec<Vector>>> = None;
    let mut out = Vec::new();
    for t in 0..=levels {
        let gens = cover(&target, &from_list);
        let free = Free::new(&site, var, gens.iter().map(|g| g.0).collect(), &from_list);
        let gen_elems = gens
            .iter()
            .map(|(x, v)| match &embed {
                None => v.clone(),
                Some(b) => v.iter().fold(Vec::new(), |acc, (i, c)| crate::exactring::echelon::axpy(&fld, &acc, c, &b[*x][*i])),
            })
            .collect();
        if t == levels {
            out.push(Level { free, gens: gen_elems });
            break;
        }
        // kernel of P_t → target
        let bases: Vec<Vec<Vector>> = (0..=site.r)
            .map(|a| {
                let cols: Vec<Vector> = free.coords[a].iter().map(|&(j, g)| target.action[g].apply(&fld, &gens[j].1)).collect();
                kernel_of(&fld, &cols)
            })
            .collect();
        let solvers: Vec<Solver<PrimeField>> = bases.iter().map(|b| Solver::new(&fld, b)).collect();
        let mut action = Vec::with_capacity(site.len());
        for m in 0..site.len() {
            let (from, to) = var.ends(&site.morphisms[m]);
            let cols = bases[from]
                .iter()
                .map(|v| solvers[to].solve(&free.apply(&site, var, &fld, m, v)).expect("kernel is a subfunctor"))
                .collect();
            action.push(Mat::from_columns(bases[to].len(), cols));
        }
        target = FunctorRep {
            name: format!("K{t}"),
            site: site.clone(),
            p: f.p,
            variance: var,
            dims: bases.iter().map(|b| b.len()).collect(),
            action,
        };
        embed = Some(bases);
        out.push(Level { free, gens: gen_elems });
    }
    Ok(Resolution { variance: var, levels: out })
}

/// `H^t Hom(P_•, T)` for `t ≤ t_max`; needs `t_max + 1` resolution levels.
pub fn ext_from_resolution(res: &Resolution, t: &FunctorRep, t_max: usize) -> Result<Vec<usize>> {
    if res.variance != t.variance {
        return Err(Error::Shape("resolution and coefficients have different variance".into()));
    }
    if res.levels.len() < t_max + 2 {
        return Err(Error::Precondition(format!("{} levels do not reach degree {t_max}", res.levels.len())));
    }
    let fld = t.field();
    let offsets = |l: &Level| {
        let mut o = vec![0];
        for &x in &l.free.objects {
            o.push(o.last().unwrap() + t.dims[x]);
        }
        o
    };
    // δ^s : C^s → C^{s+1}
    let delta = |s: usize| -> Vec<Vector> {
        let (lo, hi) = (&res.levels[s], &res.levels[s + 1]);
        let (o_lo, o_hi) = (offsets(lo), offsets(hi));
        let mut cols: Vec<Vector> = vec![Vec::new(); *o_lo.last().unwrap()];
        for (jp, v) in hi.gens.iter().enumerate() {
            let xp = hi.free.objects[jp];
            for (i, c) in v {
                let (j, g) = lo.free.coords[xp][*i];
                for k in 0..t.dims[lo.free.objects[j]] {
                    let img = &t.action[g].columns[k];
                    let col = &mut cols[o_lo[j] + k];
                    for (r, x) in img {
                        col.push((o_hi[jp] + r, fld.mul(c, x)));
                    }
                }
            }
        }
        cols.into_iter().map(|c| crate::exactring::echelon::collect_vec(&fld, c)).collect()
    };
    let mut out = Vec::with_capacity(t_max + 1);
    let mut prev_rank = 0;
    for s in 0..=t_max {
        let d = delta(s);
        let rank = crate::exactring::echelon::rank_of(&fld, d.iter().cloned());
        out.push(d.len() - rank - prev_rank);
        prev_rank = rank;
    }
    Ok(out)
}

/// `Ext^t(F, G)` for `t ≤ t_max` by resolving `F`.
pub fn ext_groups(f: &FunctorRep, g: &FunctorRep, t_max: usize) -> Result<Vec<usize>> {
    compatible(f, g)?;
    ext_from_resolution(&resolve(f, t_max + 1)?, g, t_max)
}

/// `Ext^t(F, G)` through an injective coresolution of `G`, i.e. a resolution of `G^∨`.
pub fn ext_via_injectives(f: &FunctorRep, g: &FunctorRep, t_max: usize) -> Result<Vec<usize>> {
    compatible(f, g)?;
    ext_from_resolution(&resolve(&g.dual(), t_max + 1)?, &f.dual(), t_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn setup() -> (Arc<Site>, FunctorRep, FunctorRep) {
        let s = Arc::new(Site::new(2, 2).unwrap());
        let bar = FunctorRep::representable(&s, 2, 1).unwrap().reduced_part().unwrap();
        let a = FunctorRep::additive(&s, 2).unwrap();
        (s, bar, a)
    }

    #[test]
    fn hom_into_additive() {
        let (s, bar, a) = setup();
        let h = hom_space(&bar, &a).unwrap();
        assert_eq!(h.len(), 1);
        assert!(is_natural(&bar, &a, &h[0]));
        for k in [0, 2, 3] {
            assert_eq!(hom_space(&bar.tensor_power(k).unwrap(), &a).unwrap().len(), 0, "k = {k}");
        }
        let k1 = FunctorRep::constant(&s, 2, 1).unwrap();
        assert_eq!(hom_space(&k1, &k1).unwrap().len(), 1);
        // Yoneda
        for x in 0..=2 {
            let px = FunctorRep::representable(&s, 2, x).unwrap();
            assert_eq!(hom_space(&px, &a).unwrap().len(), a.dims[x]);
        }
    }

    #[test]
    fn ext_of_projectives() {
        let (s, bar, a) = setup();
        assert_eq!(ext_groups(&bar, &a, 2).unwrap(), vec![1, 0, 0]);
        assert_eq!(ext_via_injectives(&bar, &a, 2).unwrap(), vec![1, 0, 0]);
        let k1 = FunctorRep::constant(&s, 2, 1).unwrap();
        assert_eq!(ext_groups(&k1, &a, 1).unwrap(), vec![0, 0]);
    }

    #[test]
    fn two_routes_agree() {
        let (s, bar, a) = setup();
        let sq = bar.tensor(&bar).unwrap();
        let k1 = FunctorRep::constant(&s, 2, 1).unwrap();
        let cube = sq.tensor(&bar).unwrap();
        for (f, g) in [(&a, &a), (&sq, &a), (&a, &sq), (&a, &k1), (&cube, &a)] {
            let x = ext_groups(f, g, 2).unwrap();
            let y = ext_via_injectives(f, g, 2).unwrap();
            assert_eq!(x, y, "{} vs {}", f.name, g.name);
            assert_eq!(x[0], hom_space(f, g).unwrap().len());
        }
        assert_eq!(ext_groups(&a, &a, 2).unwrap(), vec![1, 0, 1]);
        // not projective once the tensor power exceeds the rank bound
        assert_eq!(ext_groups(&cube, &a, 1).unwrap(), vec![0, 3]);
    }
}
