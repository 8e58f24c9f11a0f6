//! Finite categories, posets and their nondegenerate nerves.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// A finite category. Morphism `i` runs `src[i] → dst[i]`; identities come first,
/// one per object, in object order.
#[derive(Clone, Debug)]
pub struct FinCategory {
    pub objects: Vec<String>,
    pub names: Vec<String>,
    pub src: Vec<usize>,
    pub dst: Vec<usize>,
    /// `(f, g) ↦ g ∘ f` for `dst f = src g`.
    compose: HashMap<(usize, usize), usize>,
}

/// A nondegenerate `p`-chain `c_0 ← c_1 ← … ← c_p`: `maps[i-1]: c_i → c_{i-1}`,
/// none of them an identity. Zero-chains are bare objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub object: usize,
    pub maps: Vec<usize>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

impl FinCategory {
    /// From generating arrows and a composition table; `[f, g, h]` declares `g ∘ f = h`.
    /// Every composable pair of non-identity arrows needs an entry.
    pub fn new(objects: Vec<String>, arrows: Vec<Arrow>, compose: Vec<[String; 3]>) -> Result<Self> {
        let obj: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        if obj.len() != objects.len() {
            return Err(Error::DiagramInvalid("duplicate object names".into()));
        }
        let mut names: Vec<String> = objects.iter().map(|o| format!("id_{o}")).collect();
        let mut src: Vec<usize> = (0..objects.len()).collect();
        let mut dst = src.clone();
        for a in &arrows {
            let s = *obj.get(a.src.as_str()).ok_or_else(|| Error::DiagramInvalid(format!("arrow {} has unknown source {}", a.id, a.src)))?;
            let t = *obj.get(a.dst.as_str()).ok_or_else(|| Error::DiagramInvalid(format!("arrow {} has unknown target {}", a.id, a.dst)))?;
            if names.contains(&a.id) {
                return Err(Error::DiagramInvalid(format!("duplicate arrow id {}", a.id)));
            }
            names.push(a.id.clone());
            src.push(s);
            dst.push(t);
        }
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let look = |n: &str| index.get(n).copied().ok_or_else(|| Error::DiagramInvalid(format!("unknown arrow {n} in composition table")));
        let n_obj = objects.len();
        let mut table = HashMap::new();
        for f in 0..names.len() {
            for g in 0..names.len() {
                if dst[f] != src[g] {
                    continue;
                }
                if f < n_obj {
                    table.insert((f, g), g);
                } else if g < n_obj {
                    table.insert((f, g), f);
                }
            }
        }
        for [f, g, h] in &compose {
            let (f, g, h) = (look(f)?, look(g)?, look(h)?);
            if dst[f] != src[g] || src[h] != src[f] || dst[h] != dst[g] {
                return Err(Error::DiagramInvalid(format!("{} ∘ {} = {} has mismatched ends", names[g], names[f], names[h])));
            }
            if let Some(prev) = table.insert((f, g), h) {
                if prev != h {
                    return Err(Error::DiagramInvalid(format!("conflicting composites for {} ∘ {}", names[g], names[f])));
                }
            }
        }
        let cat = FinCategory { objects, names, src, dst, compose: table };
        cat.verify()?;
        Ok(cat)
    }

    /// The category of a poset given by cover relations `a < b`; one arrow `a→b` per `a ≤ b`.
    pub fn poset(elements: Vec<String>, covers: &[(String, String)]) -> Result<Self> {
        let idx: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let n = elements.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in covers {
            let (i, j) = (
                *idx.get(a.as_str()).ok_or_else(|| Error::DiagramInvalid(format!("unknown element {a}")))?,
                *idx.get(b.as_str()).ok_or_else(|| Error::DiagramInvalid(format!("unknown element {b}")))?,
            );
            le[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i][j] && le[j][i] {
                    return Err(Error::DiagramInvalid(format!("{} and {} form a cycle", elements[i], elements[j])));
                }
            }
        }
        let name = |i: usize, j: usize| format!("{}<{}", elements[i], elements[j]);
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i][j] {
                    arrows.push(Arrow { id: name(i, j), src: elements[i].clone(), dst: elements[j].clone() });
                }
            }
        }
        let mut compose = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i != j && j != k && le[i][j] && le[j][k] {
                        compose.push([name(i, j), name(j, k), name(i, k)]);
                    }
                }
            }
        }
        Self::new(elements, arrows, compose)
    }

    pub fn num_morphisms(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self, object: usize) -> usize {
        object
    }

    pub fn is_identity(&self, m: usize) -> bool {
        m < self.objects.len()
    }

    pub fn morphism(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|n| n == name)
    }

    /// `g ∘ f`.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.compose.get(&(f, g)).copied()
    }

    /// Composites of every composable pair, associativity and unit laws.
    pub fn verify(&self) -> Result<()> {
        let m = self.num_morphisms();
        for f in 0..m {
            for g in 0..m {
                if self.dst[f] == self.src[g] && self.compose(f, g).is_none() {
                    return Err(Error::DiagramInvalid(format!("missing composite {} ∘ {}", self.names[g], self.names[f])));
                }
            }
        }
        for f in 0..m {
            for g in 0..m {
                let Some(gf) = self.compose(f, g) else { continue };
                for h in 0..m {
                    let Some(hg) = self.compose(g, h) else { continue };
                    if self.compose(gf, h) != self.compose(f, hg) {
                        return Err(Error::DiagramInvalid(format!(
                            "composition is not associative at {}, {}, {}",
                            self.names[f], self.names[g], self.names[h]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Nondegenerate chains of length `p`, lexicographic in their maps.
    pub fn chains(&self, p: usize) -> Vec<Chain> {
        if p == 0 {
            return (0..self.objects.len()).map(|o| Chain { object: o, maps: vec![] }).collect();
        }
        let arrows: Vec<usize> = (self.objects.len()..self.num_morphisms()).collect();
        let mut out: Vec<Vec<usize>> = arrows.iter().map(|a| vec![*a]).collect();
        for _ in 1..p {
            let mut next = Vec::new();
            for c in &out {
                let last = *c.last().expect("nonempty");
                // maps[i]: c_{i+1} → c_i, so the next map must land on src(last)
                for &a in &arrows {
                    if self.dst[a] == self.src[last] {
                        let mut d = c.clone();
                        d.push(a);
                        next.push(d);
                    }
                }
            }
            out = next;
        }
        out.into_iter().map(|maps| Chain { object: self.src[*maps.last().expect("nonempty")], maps }).collect()
    }

    /// Longest nondegenerate chain, or `None` when chains of every length exist.
    pub fn nerve_dimension(&self) -> Option<usize> {
        let bound = self.num_morphisms() + 1;
        (1..=bound).find(|p| self.chains(*p).is_empty()).map(|p| p - 1)
    }

    /// Faces `d_i` of a chain as `(i, face, Some(morphism))` where the last face carries
    /// `c_p → c_{p-1}`; faces that land on degenerate chains are omitted.
    pub fn faces(&self, c: &Chain) -> Vec<(usize, Chain, Option<usize>)> {
        let p = c.len();
        let mut out = Vec::new();
        if p == 0 {
            return out;
        }
        let mk = |maps: Vec<usize>, fallback: usize| {
            let object = maps.last().map_or(fallback, |m| self.src[*m]);
            Chain { object, maps }
        };
        out.push((0, mk(c.maps[1..].to_vec(), self.src[c.maps[0]]), None));
        for i in 1..p {
            // c_{i+1} → c_i → c_{i-1}
            let comp = self.compose(c.maps[i], c.maps[i - 1]).expect("composable");
            if self.is_identity(comp) {
                continue;
            }
            let mut maps = c.maps.clone();
            maps.splice(i - 1..=i, [comp]);
            out.push((i, mk(maps, 0), None));
        }
        let last = c.maps[p - 1];
        out.push((p, mk(c.maps[..p - 1].to_vec(), self.dst[last]), Some(last)));
        out
    }

    pub fn describe(&self) -> BTreeMap<String, String> {
        (self.objects.len()..self.num_morphisms())
            .map(|m| (self.names[m].clone(), format!("{}→{}", self.objects[self.src[m]], self.objects[self.dst[m]])))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn span_nerve() {
        let c = FinCategory::poset(vec![s("a"), s("b"), s("c")], &[(s("c"), s("a")), (s("c"), s("b"))]).unwrap();
        assert_eq!(c.chains(0).len(), 3);
        assert_eq!(c.chains(1).len(), 2);
        assert_eq!(c.chains(2).len(), 0);
        assert_eq!(c.nerve_dimension(), Some(1));
    }

    #[test]
    fn chain_poset_faces() {
        let c = FinCategory::poset(vec![s("a"), s("b"), s("c")], &[(s("a"), s("b")), (s("b"), s("c"))]).unwrap();
        let two = c.chains(2);
        assert_eq!(two.len(), 1);
        let faces = c.faces(&two[0]);
        assert_eq!(faces.len(), 3);
        assert_eq!(c.objects[two[0].object], "a");
        assert_eq!(faces[2].2.map(|m| c.names[m].clone()), Some(s("a<b")));
    }

    #[test]
    fn isomorphism_has_unbounded_nerve() {
        let c = FinCategory::new(
            vec![s("a"), s("b")],
            vec![Arrow { id: s("f"), src: s("a"), dst: s("b") }, Arrow { id: s("g"), src: s("b"), dst: s("a") }],
            vec![[s("f"), s("g"), s("id_a")], [s("g"), s("f"), s("id_b")]],
        )
        .unwrap();
        assert_eq!(c.nerve_dimension(), None);
        assert_eq!(c.chains(3).len(), 2);
        // d_1 of (f, g) composes to an identity and is dropped
        let ch = c.chains(2);
        assert!(ch.iter().all(|x| c.faces(x).len() == 2));
    }

    #[test]
    fn missing_composite_is_rejected() {
        let r = FinCategory::new(
            vec![s("a"), s("b"), s("c")],
            vec![Arrow { id: s("f"), src: s("a"), dst: s("b") }, Arrow { id: s("g"), src: s("b"), dst: s("c") }],
            vec![],
        );
        assert!(matches!(r, Err(Error::DiagramInvalid(_))));
    }
}
