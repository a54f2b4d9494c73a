//! Named self-check suites for the `verify` subcommand. Each suite is a list
//! of independent checks run across the worker pool; a suite passes when
//! every check does.

use hyperbarrier::constructions::{equal_mod_three, even_first_coordinate, gen_pikhurko};
use hyperbarrier::density::count_by_index;
use hyperbarrier::lattice::classify;
use hyperbarrier::solver::perfect_clique_packing;
use hyperbarrier::{KGraph, VertexPartition};
use itertools::Itertools;
use rayon::prelude::*;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

type CheckFn = Box<dyn Fn() -> Check + Send + Sync>;

fn check(name: &'static str, f: impl Fn() -> (bool, String) + Send + Sync + 'static) -> CheckFn {
    Box::new(move || {
        let (pass, detail) = f();
        Check { name, pass, detail }
    })
}

pub fn run_suite(name: &str) -> Option<Vec<Check>> {
    let checks = match name {
        "pikhurko" => pikhurko_suite(),
        "lattice-examples" => lattice_examples_suite(),
        _ => return None,
    };
    Some(checks.into_par_iter().map(|f| f()).collect())
}

pub fn suite_names() -> &'static [&'static str] {
    &["pikhurko", "lattice-examples"]
}

/// All 4-sets whose four triples are all edges.
fn tetrahedra(g: &KGraph) -> Vec<Vec<usize>> {
    (0..g.n())
        .combinations(4)
        .filter(|x| x.iter().cloned().combinations(3).all(|t| g.contains(&t)))
        .collect()
}

fn odd_first_part_tetrahedra(g: &KGraph, p: &VertexPartition) -> usize {
    let tets = tetrahedra(g);
    count_by_index(tets.iter(), p)
        .into_iter()
        .filter(|(ix, _)| ix.0[0] % 2 == 1)
        .map(|(_, c)| c)
        .sum()
}

fn pikhurko_suite() -> Vec<CheckFn> {
    vec![
        check("codegree n=8", || {
            let (g, _) = gen_pikhurko(8).unwrap();
            let d = g.min_codegree();
            (d == 3, format!("min codegree {d}, expected 3"))
        }),
        check("codegree n=12", || {
            let (g, _) = gen_pikhurko(12).unwrap();
            let d = g.min_codegree();
            (d == 7, format!("min codegree {d}, expected 7"))
        }),
        check("no tetrahedron packing n=8", || {
            let (g, _) = gen_pikhurko(8).unwrap();
            let packing = perfect_clique_packing(&g, 4).unwrap();
            (packing.is_none(), format!("packing found: {}", packing.is_some()))
        }),
        check("no tetrahedron packing n=12", || {
            let (g, _) = gen_pikhurko(12).unwrap();
            let packing = perfect_clique_packing(&g, 4).unwrap();
            (packing.is_none(), format!("packing found: {}", packing.is_some()))
        }),
        check("tetrahedra meet part 1 evenly", || {
            let mut odd = 0;
            for n in [8, 12] {
                let (g, p) = gen_pikhurko(n).unwrap();
                odd += odd_first_part_tetrahedra(&g, &p);
            }
            (odd == 0, format!("{odd} tetrahedra with odd first-part count"))
        }),
    ]
}

fn lattice_examples_suite() -> Vec<CheckFn> {
    vec![
        check("even-first-coordinate membership", || {
            let l = even_first_coordinate();
            let bad = (-4i64..=4)
                .cartesian_product(-4i64..=4)
                .filter(|&(x, y)| l.contains_i64(&[x, y]) != (x % 2 == 0))
                .count();
            (bad == 0, format!("{bad} mismatches on [-4,4]^2"))
        }),
        check("even-first-coordinate flags", || {
            let c = classify(&even_first_coordinate(), 3);
            (!c.complete && c.minimal, format!("complete={} minimal={}", c.complete, c.minimal))
        }),
        check("equal-mod-three membership", || {
            let l = equal_mod_three();
            let mut bad = 0;
            for x in -3i64..=3 {
                for y in -3i64..=3 {
                    for z in -3i64..=3 {
                        if l.contains_i64(&[x, y, z]) != ((y - z).rem_euclid(3) == 0) {
                            bad += 1;
                        }
                    }
                }
            }
            (bad == 0, format!("{bad} mismatches on [-3,3]^3"))
        }),
        check("equal-mod-three flags", || {
            let c = classify(&equal_mod_three(), 4);
            (!c.complete && c.minimal, format!("complete={} minimal={}", c.complete, c.minimal))
        }),
    ]
}
