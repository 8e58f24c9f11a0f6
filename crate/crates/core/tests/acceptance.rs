//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

use std::sync::Arc;
use std::time::Instant;

use emlkit::barlab::oracle::{cyclic_group_homology, uct_prediction};
use emlkit::barlab::suspension::suspension_report;
use emlkit::barlab::symbolic::{check_bounded_bar, BoundedGroupAlgebra};
use emlkit::barlab::{BasedDGA, FGAbGroup, GroupHom};
use emlkit::exactring::CoefficientRing;
use emlkit::formality::emap::{e_naturality_finite, e_report, presentation_check, BoundedEMap};
use emlkit::formality::inclusions::{i_gamma, i_lambda};
use emlkit::formality::zigzag::formality_zigzag;
use emlkit::functorext::*;
use emlkit::hocolim::eml::DiagramSpec;
use emlkit::hocolim::srep::{e1_total_complex, hocolim_ss};

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ring(s: &str) -> CoefficientRing {
    s.parse().unwrap()
}

fn group(s: &str) -> FGAbGroup {
    s.parse().unwrap()
}

const RINGS: [&str; 5] = ["Q", "Z", "F2", "F3", "Z[1/2]"];
const FINITE: [&str; 4] = ["Z/2", "Z/3", "Z/4", "(Z/2)^2"];

fn c1_bar_well_formed() -> Check {
    let rings: Vec<CoefficientRing> = RINGS.iter().map(|r| ring(r)).collect();
    for g in FINITE {
        for n in 1..=3 {
            let b = BasedDGA::iterated_bar(&group(g), &CoefficientRing::Integers, n, 8).map_err(|e| e.to_string())?;
            for (r, rep) in RINGS.iter().zip(b.check_structure_over(&rings)) {
                ensure!(rep.ok(), "{g} over {r}, n={n}: {rep:?}");
            }
        }
    }
    for (g, top) in [("Z", 5), ("Z^2", 4), ("Z x Z/2", 4)] {
        let alg = BoundedGroupAlgebra::new(group(g), 2, 1);
        for n in 1..=3 {
            for rep in check_bounded_bar(&alg, n, &rings, top) {
                ensure!(rep.ok(), "bounded {g}, n={n}: {rep:?}");
            }
        }
    }
    Ok(())
}

fn c2_oracle() -> Check {
    for q in [2u64, 3, 4] {
        for r in ["Z", "Q", "F2", "F3"] {
            let k = ring(r);
            let c = BasedDGA::iterated_bar(&FGAbGroup::cyclic(q), &k, 1, 7).unwrap().to_complex();
            let want = cyclic_group_homology(q, &k, 6).map_err(|e| e.to_string())?;
            for (i, w) in want.iter().enumerate() {
                let h = c.homology(i).map_err(|e| e.to_string())?;
                ensure!(h.same_class(w), "Z/{q} over {r}, H_{i}: {h} vs {w}");
            }
        }
    }
    Ok(())
}

/// Units of each corpus ring, decided without the library.
fn unit(r: &str, m: u64) -> bool {
    match r {
        "Q" => true,
        "Z" => m == 1,
        "F2" => m % 2 == 1,
        "F3" => !m.is_multiple_of(3),
        "Z[1/2]" => m.is_power_of_two(),
        _ => unreachable!(),
    }
}

fn hypotheses(g: &FGAbGroup, r: &str) -> bool {
    g.torsion.iter().all(|t| unit(r, *t)) && (2..=g.free_rank as u64).all(|m| unit(r, m))
}

fn c3_e_map() -> Check {
    for g in FINITE {
        let grp = group(g);
        for r in RINGS {
            let expect = hypotheses(&grp, r);
            match e_report(&grp, &ring(r), 6) {
                Ok(rep) => {
                    ensure!(expect, "{g} over {r} should be rejected");
                    ensure!(rep.chain_map_ok && rep.algebra_map_ok && rep.quasi_iso.is_quasi_iso, "{g} over {r}: {rep:?}");
                }
                Err(e) => ensure!(!expect, "{g} over {r} rejected: {e}"),
            }
        }
    }
    let homs = [("Z/4", "Z/2", vec![vec![1]]), ("Z/2", "Z/4", vec![vec![2]]), ("(Z/2)^2", "Z/2", vec![vec![1, 1]]), ("Z/3", "Z/3", vec![vec![2]])];
    for (s, t, m) in homs {
        let phi = GroupHom::new(group(s), group(t), m).unwrap();
        for r in RINGS {
            if hypotheses(&phi.source, r) && hypotheses(&phi.target, r) {
                let bad = e_naturality_finite(&phi, &ring(r), 5).map_err(|e| e.to_string())?;
                ensure!(bad.is_empty(), "naturality {s} -> {t} over {r}: {bad:?}");
            }
        }
    }
    for g in ["Z", "Z^2", "Z x Z/2"] {
        let grp = group(g);
        for r in RINGS {
            let expect = hypotheses(&grp, r);
            let Ok(e) = BoundedEMap::new(&grp, &ring(r), 2, 1) else {
                ensure!(!expect, "bounded {g} over {r} rejected");
                continue;
            };
            ensure!(expect, "bounded {g} over {r} should be rejected");
            let rep = e.check(3);
            ensure!(rep.chain_failures + rep.algebra_failures == 0, "bounded {g} over {r}: {rep:?}");
            let m = match g {
                "Z" => vec![vec![-1]],
                "Z^2" => vec![vec![0, 1], vec![1, 1]],
                _ => vec![vec![-1, 0], vec![1, 1]],
            };
            let auto = GroupHom::new(grp.clone(), grp.clone(), m).map_err(|e| e.to_string())?;
            let bad = e.naturality_failures(&auto, 3).map_err(|e| e.to_string())?;
            ensure!(bad == 0, "bounded naturality {g} over {r}: {bad} failures");
            let checks: Vec<bool> = [2, 3, 4].iter().map(|b| presentation_check(&grp, &ring(r), *b).map(|p| p.exact()).unwrap_or(false)).collect();
            ensure!(checks.iter().all(|x| *x), "presentation {g} over {r}: {checks:?}");
        }
    }
    Ok(())
}

fn c4_inclusions() -> Check {
    for r in ["Q", "F2"] {
        for rank in 1..=2 {
            for i in 0..=1 {
                for f in [i_lambda(rank, i, &ring(r), 8), i_gamma(rank, i, &ring(r), 8)] {
                    let f = f.map_err(|e| e.to_string())?;
                    let rep = f.check();
                    ensure!(rep.chain_ok() && rep.algebra_ok() && rep.coalgebra_ok(), "{} rank {rank} i={i} over {r}", f.name);
                    let q = f.to_chain_map().quasi_iso(7).map_err(|e| e.to_string())?;
                    ensure!(q.is_quasi_iso, "{} rank {rank} i={i} over {r} fails at {:?}", f.name, q.fails_at);
                }
            }
        }
    }
    Ok(())
}

fn c5_zigzag() -> Check {
    for n in [2, 3] {
        for g in FINITE {
            let z = formality_zigzag(&group(g), &ring("Q"), n, 6).map_err(|e| e.to_string())?;
            let rep = z.report(6).map_err(|e| e.to_string())?;
            ensure!(rep.verdict == "all-quasi-iso", "{g}, n={n}: {rep:?}");
            // G ⊗ Q = 0, so the endpoint is the free algebra on nothing
            ensure!(rep.endpoint_dims.iter().skip(1).all(|d| *d == 0) && rep.endpoint_dims[0] == 1, "{g}, n={n}: endpoint {:?}", rep.endpoint_dims);
            ensure!(rep.endpoint.contains("k^0"), "{g}, n={n}: endpoint {}", rep.endpoint);
        }
    }
    let e = BoundedEMap::new(&group("Z^2"), &ring("Q"), 2, 1).unwrap();
    ensure!(e.check(3).coalgebra_witness.is_some(), "no word on which e fails to respect coproducts");
    Ok(())
}

const DIAGRAMS: [(&str, &[usize]); 6] = [
    ("span_sphere", &[1, 0, 1, 0, 0, 0]),
    ("square", &[1, 1, 0, 0, 0, 0]),
    ("chain3", &[1, 0, 0, 0, 0, 0]),
    ("fan_c2", &[1, 0, 0, 0, 0, 0]),
    ("fan_p2", &[1, 0, 1, 0, 1, 0, 0]),
    ("fan_p1xp1", &[1, 0, 2, 0, 1, 0, 0]),
];

fn load(name: &str) -> DiagramSpec {
    let path = format!("{}/data/diagrams/{name}.json", env!("CARGO_MANIFEST_DIR"));
    DiagramSpec::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn c6_spectral() -> Check {
    for (name, want) in DIAGRAMS {
        let d = load(name).build().map_err(|e| e.to_string())?;
        let r = hocolim_ss(&d, None).map_err(|e| e.to_string())?;
        ensure!(r.e1_matches_chains && r.e2_matches_category_homology && r.converges, "{name}: {r:?}");
        ensure!(r.collapse_at_two, "{name} does not collapse at E²");
        ensure!(r.total_homology == want, "{name}: total homology {:?}", r.total_homology);
    }
    Ok(())
}

fn c7_e1_model() -> Check {
    for (name, _) in DIAGRAMS {
        let d = load(name).build().map_err(|e| e.to_string())?;
        let r = hocolim_ss(&d, None).map_err(|e| e.to_string())?;
        let e1 = e1_total_complex(&d, None).map_err(|e| e.to_string())?.betti().map_err(|e| e.to_string())?;
        let k = (r.reliable + 1).min(e1.len());
        ensure!(k >= 4 && e1[..k] == r.total_homology[..k], "{name}: {e1:?} vs {:?}", r.total_homology);
    }
    Ok(())
}

fn c8_functors() -> Check {
    let site = Arc::new(Site::new(2, 2).unwrap());
    let err = |e: emlkit::Error| e.to_string();
    let a = FunctorRep::additive(&site, 2).map_err(err)?;
    let p1 = FunctorRep::representable(&site, 2, 1).map_err(err)?;
    let bar = p1.reduced_part().map_err(err)?;
    ensure!(hom_space(&bar, &a).map_err(err)?.len() == 1, "Hom(P̄, A) ≠ 1");
    for k in [0, 2, 3] {
        let t = bar.tensor_power(k).map_err(err)?;
        ensure!(hom_space(&t, &a).map_err(err)?.is_empty(), "Hom(P̄^⊗{k}, A) ≠ 0");
    }
    ensure!(ext_groups(&bar, &a, 2).map_err(err)? == vec![1, 0, 0], "Ext(P̄, A)");
    ensure!(ext_via_injectives(&bar, &a, 2).map_err(err)? == vec![1, 0, 0], "Ext(P̄, A) via injectives");

    let g2 = divided_power(&site, 2, 2).map_err(err)?;
    let l2 = exterior_power(&site, 2, 2).map_err(err)?;
    let k1 = FunctorRep::constant(&site, 2, 1).map_err(err)?;
    let corpus = [a.clone(), bar.clone(), bar.tensor(&bar).map_err(err)?, k1, p1, g2.clone(), l2.clone()];
    for x in 0..=2 {
        let px = FunctorRep::representable(&site, 2, x).map_err(err)?;
        for f in &corpus {
            ensure!(hom_space(&px, f).map_err(err)?.len() == f.dims[x], "Yoneda fails for P^{x} and {}", f.name);
        }
    }
    let reduced = [a.clone(), bar, g2, l2];
    for f1 in &reduced {
        for f2 in &reduced {
            let t = f1.tensor(f2).map_err(err)?;
            ensure!(hom_space(&t, &a).map_err(err)?.is_empty(), "Hom({}, A) ≠ 0", t.name);
            ensure!(hom_space(&a, &t).map_err(err)?.is_empty(), "Hom(A, {}) ≠ 0", t.name);
        }
    }
    for p in [2u64, 3] {
        let s = Arc::new(Site::new(p, 3).map_err(err)?);
        let k = KoszulComplex::new(&s, p).map_err(err)?;
        ensure!(k.squares_to_zero() && k.is_natural(), "Koszul p={p} is not a natural complex");
        ensure!((0..=3).all(|a| k.is_exact_at(a)), "Koszul p={p} is not exact");
    }
    Ok(())
}

fn c9_obstruction() -> Check {
    let err = |e: emlkit::Error| e.to_string();
    let one = obstruction_report(&ObstructionParams { n: 1, n_top: 6, ..Default::default() }).map_err(err)?;
    ensure!(one.column_total == 1 && one.column_table.get(1, 0) == 1, "n=1 column table {:?}", one.column_table);
    ensure!(one.homology_total >= 2 && one.homology_row[&1] >= 1 && one.homology_row[&4] >= 1, "n=1 row {:?}", one.homology_row);
    ensure!(one.verdict == "obstructed", "n=1 verdict {}", one.verdict);
    let degrees: Vec<usize> = one.witnesses.iter().filter(|w| w.natural).map(|w| w.degree).collect();
    ensure!(degrees == vec![1, 4], "n=1 witnesses {degrees:?}");
    let two = obstruction_report(&ObstructionParams { n: 2, n_top: 7, ..Default::default() }).map_err(err)?;
    ensure!(two.homology_total >= 2 && two.homology_row[&2] >= 1 && two.homology_row[&5] >= 1, "n=2 row {:?}", two.homology_row);
    let degrees: Vec<usize> = two.witnesses.iter().filter(|w| w.natural).map(|w| w.degree).collect();
    ensure!(degrees == vec![2, 5], "n=2 witnesses {degrees:?}");
    ensure!(two.verdict == "obstructed", "n=2 verdict {}", two.verdict);
    Ok(())
}

fn c10_suspension() -> Check {
    for (n, top) in [(1, 5), (2, 7)] {
        let r = suspension_report(&FGAbGroup::cyclic(2), &ring("F2"), n, top).map_err(|e| e.to_string())?;
        ensure!(r.stable_checked_through + 1 >= 2 * n, "n={n}: stable range checked only through {}", r.stable_checked_through);
        ensure!(r.stable_iso && r.products_killed, "n={n}: {r:?}");
    }
    Ok(())
}

fn c11_uct() -> Check {
    for g in ["Z/2", "Z/4"] {
        let integral = BasedDGA::iterated_bar(&group(g), &CoefficientRing::Integers, 1, 7).unwrap().to_complex().homology_all().map_err(|e| e.to_string())?;
        for r in ["F2", "Z/4"] {
            let k = ring(r);
            let pred = uct_prediction(&integral, &k).map_err(|e| e.to_string())?;
            let c = BasedDGA::iterated_bar(&group(g), &k, 1, 7).unwrap().to_complex();
            for (j, p) in pred.iter().enumerate().take(7) {
                let h = c.homology(j).map_err(|e| e.to_string())?;
                ensure!(h.same_class(p), "{g} over {r}, H_{j}: {h} vs {p}");
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("bar-complex well-formedness", c1_bar_well_formed),
        ("group-homology oracle equivalence", c2_oracle),
        ("e-map contract", c3_e_map),
        ("i_Λ and i_Γ quasi-isomorphisms", c4_inclusions),
        ("zig-zag formality", c5_zigzag),
        ("homotopy-colimit spectral sequence", c6_spectral),
        ("E¹ model", c7_e1_model),
        ("functor-category computations", c8_functors),
        ("obstruction reproduction", c9_obstruction),
        ("suspension", c10_suspension),
        ("universal coefficients", c11_uct),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
