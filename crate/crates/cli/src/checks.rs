//! The `verify` subcommand: recompute family results along independent
//! routes and print one PASS/FAIL line per check.

use std::fmt::Display;

use clap::ValueEnum;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tuttekit::families;
use tuttekit::poly::{BiPoly, PolyVar, UniPoly};
use tuttekit::{farey, graph, oracle, BigInt, BigRational, Error, Limits};

use crate::Failure;

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum Scope {
    /// Farey-family checks up to --max-n.
    Farey,
    /// Koch-family checks.
    Koch,
    /// Exponential-family checks.
    Exp,
    /// Polynomial ring laws and serialization round-trips.
    Polys,
    /// Everything.
    All,
}

pub fn run(scope: Scope, max_n: u32, limits: &Limits) -> Result<(), Failure> {
    if matches!(scope, Scope::Farey | Scope::All) {
        guard_farey_budgets(max_n, limits)?;
    }
    let mut h = Harness {
        passed: 0,
        failed: 0,
    };
    match scope {
        Scope::Farey => farey_suite(&mut h, max_n, limits),
        Scope::Koch => koch_suite(&mut h, limits),
        Scope::Exp => exp_suite(&mut h, limits),
        Scope::Polys => polys_suite(&mut h, limits),
        Scope::All => {
            farey_suite(&mut h, max_n, limits);
            koch_suite(&mut h, limits);
            exp_suite(&mut h, limits);
            polys_suite(&mut h, limits);
        }
    }
    let total = h.passed + h.failed;
    if h.failed == 0 {
        println!("all {total} checks passed");
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: format!("{} of {total} checks failed", h.failed),
            as_json: false,
        })
    }
}

/// The oracle-backed checks enumerate subsets and run determinants; refuse
/// up front if --max-n outruns those budgets.
fn guard_farey_budgets(max_n: u32, limits: &Limits) -> Result<(), Failure> {
    let budget = |e: Error| Failure {
        code: 2,
        message: format!("verify --max-n {max_n}: {e}"),
        as_json: false,
    };
    if max_n > limits.graph_generation_cap {
        return Err(budget(Error::GenerationCapExceeded {
            n: max_n,
            cap: limits.graph_generation_cap,
        }));
    }
    let edges: u128 = if max_n >= 60 {
        u128::MAX
    } else {
        (1u128 << (max_n + 1)) - 1
    };
    let cap = limits.subset_edge_cap.min(limits.delcon_edge_cap);
    if edges > cap as u128 {
        return Err(budget(Error::TooManyEdges {
            edges: edges.min(usize::MAX as u128) as usize,
            limit: cap,
        }));
    }
    let vertices: u128 = if max_n >= 60 {
        u128::MAX
    } else {
        (1u128 << max_n) + 1
    };
    if vertices > limits.matrix_vertex_cap as u128 {
        return Err(budget(Error::MatrixTooLarge {
            vertices: vertices.min(usize::MAX as u128) as usize,
            limit: limits.matrix_vertex_cap,
        }));
    }
    Ok(())
}

struct Harness {
    passed: u32,
    failed: u32,
}

impl Harness {
    fn check(&mut self, name: &str, run: impl FnOnce() -> Result<(), String>) {
        match run() {
            Ok(()) => {
                println!("PASS {name}");
                self.passed += 1;
            }
            Err(why) => {
                println!("FAIL {name}: {why}");
                self.failed += 1;
            }
        }
    }
}

fn lib<T>(r: Result<T, Error>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn same<T: PartialEq + Display>(ctx: &str, got: &T, want: &T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{ctx}: got {got}, want {want}"))
    }
}

fn int(i: i64) -> BigRational {
    BigRational::from_integer(i.into())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn farey_suite(h: &mut Harness, max_n: u32, limits: &Limits) {
    h.check(
        &format!("farey recursion equals the subgraph-sum oracle (n <= {max_n})"),
        || {
            for n in 0..=max_n {
                let t = lib(farey::tutte(n, limits))?;
                let g = lib(graph::farey_graph(n, limits))?;
                let brute = lib(oracle::tutte_subgraph_sum(&g.graph, limits))?;
                same(&format!("generation {n}"), &t, &brute)?;
            }
            Ok(())
        },
    );

    h.check(
        &format!("farey recursion equals the deletion-contraction oracle (n <= {max_n})"),
        || {
            for n in 0..=max_n {
                let t = lib(farey::tutte(n, limits))?;
                let g = lib(graph::farey_graph(n, limits))?;
                let brute = lib(oracle::tutte_del_con(&g.graph, limits))?;
                same(&format!("generation {n}"), &t, &brute)?;
            }
            Ok(())
        },
    );

    h.check(
        &format!("spanning-tree closed form equals matrix-tree counts (n <= {max_n})"),
        || {
            for n in 0..=max_n {
                let g = lib(graph::farey_graph(n, limits))?;
                let count = lib(oracle::spanning_tree_count(&g.graph, limits))?;
                same(&format!("generation {n}"), &farey::nst(n), &count)?;
            }
            Ok(())
        },
    );

    h.check(
        &format!("connected-spanning-subgraph closed form equals brute counts (n <= {max_n})"),
        || {
            for n in 0..=max_n {
                let g = lib(graph::farey_graph(n, limits))?;
                let count = lib(oracle::cssg_count_brute(&g.graph, limits))?;
                same(&format!("generation {n}"), &farey::ncssg(n), &count)?;
            }
            Ok(())
        },
    );

    h.check(
        &format!("reliability polynomial equals brute enumeration (n <= {max_n})"),
        || {
            for n in 0..=max_n {
                let g = lib(graph::farey_graph(n, limits))?;
                let brute = lib(oracle::reliability_brute(&g.graph, limits))?;
                same(&format!("generation {n}"), &farey::reliability(n), &brute)?;
            }
            Ok(())
        },
    );

    let color_n = max_n.min(3);
    h.check(
        &format!("chromatic polynomial counts proper 3-colorings (n <= {color_n})"),
        || {
            for n in 0..=color_n {
                let g = lib(graph::farey_graph(n, limits))?;
                let brute = lib(oracle::coloring_count_brute(&g.graph, 3, limits))?;
                let claimed = farey::chromatic(n).eval(&int(3));
                same(
                    &format!("generation {n}"),
                    &claimed,
                    &BigRational::from_integer(brute),
                )?;
            }
            Ok(())
        },
    );

    h.check(
        "chromatic polynomial matches the Tutte substitution route (n <= 8)",
        || {
            for n in 0..=8u32 {
                let via_tutte = lib(farey::tutte(n, limits))?
                    .substitute_x_affine(&int(1), &int(-1), PolyVar::Lambda)
                    .shift(1);
                let signed = if n == 0 {
                    via_tutte.scale(&int(-1))
                } else {
                    via_tutte
                };
                same(&format!("generation {n}"), &farey::chromatic(n), &signed)?;
            }
            Ok(())
        },
    );

    h.check(
        "T(1,y) product form equals the x = 1 restriction (n <= 8)",
        || {
            for n in 0..=8u32 {
                let restriction = lib(farey::tutte(n, limits))?.partial_eval_x(&int(1));
                same(&format!("generation {n}"), &farey::t1y(n), &restriction)?;
            }
            Ok(())
        },
    );

    h.check(
        "successor ratio obeys a' = (2+y) - 2y/a, with y = 2 special case (n <= 20)",
        || {
            for y in [1i64, 3, 4, 5] {
                let y0 = int(y);
                for n in 1..=20u32 {
                    let a_n = lib(farey::ratio(n, &y0))?;
                    let a_next = lib(farey::ratio(n + 1, &y0))?;
                    let step = &(int(2) + &y0) - &(int(2) * &y0 / &a_n);
                    same(&format!("n = {n}, y = {y}"), &a_next, &step)?;
                }
            }
            for n in 1..=20u32 {
                let special = rat(2 * (i64::from(n) + 1), i64::from(n));
                same(
                    &format!("n = {n}, y = 2"),
                    &lib(farey::ratio(n, &int(2)))?,
                    &special,
                )?;
            }
            Ok(())
        },
    );

    h.check(
        "point specializations count trees and connected subgraphs (n <= 12)",
        || {
            for n in 0..=12u32 {
                let trees = BigRational::from_integer(farey::nst(n));
                same(
                    &format!("T(1,1), n = {n}"),
                    &farey::eval(n, &int(1), &int(1)),
                    &trees,
                )?;
                let connected = BigRational::from_integer(farey::ncssg(n));
                same(
                    &format!("T(1,2), n = {n}"),
                    &farey::eval(n, &int(1), &int(2)),
                    &connected,
                )?;
                let all = BigRational::from_integer(BigInt::from(1) << ((1u64 << (n + 1)) - 1));
                same(
                    &format!("T(2,2), n = {n}"),
                    &farey::eval(n, &int(2), &int(2)),
                    &all,
                )?;
            }
            Ok(())
        },
    );

    h.check(
        "reliability product form agrees away from its poles (n <= 8)",
        || {
            let points = [rat(1, 3), rat(2, 5), rat(-1, 1), rat(3, 1), rat(1, 7)];
            for n in 1..=8u32 {
                let poly = farey::reliability(n);
                for p0 in &points {
                    let direct = lib(farey::reliability_direct_eval(n, p0))?;
                    same(&format!("n = {n}, p = {p0}"), &poly.eval(p0), &direct)?;
                }
            }
            Ok(())
        },
    );

    h.check("y = 0 restriction is x(x+1)^(2^n - 1) (n <= 8)", || {
        for n in 0..=8u32 {
            let restriction = BiPoly::from_terms(
                lib(farey::tutte(n, limits))?
                    .iter()
                    .filter(|&(_, j, _)| j == 0)
                    .map(|(i, j, c)| (i, j, c.clone())),
            );
            same(&format!("generation {n}"), &farey::t_x0(n), &restriction)?;
        }
        Ok(())
    });
}

fn triangle_count_forms(form: &families::PowerForm, ctx: &str) -> Result<(), String> {
    // Counting points of the triangle: trees, connected spanning
    // subgraphs, spanning forests.
    for (x, y, base) in [(1i64, 1i64, 3i64), (1, 2, 4), (2, 1, 7)] {
        let count = form.eval(&int(x), &int(y)).map_err(|e| e.to_string())?;
        same(
            &format!("{ctx} at ({x},{y})"),
            count.base(),
            &BigInt::from(base),
        )?;
        same(
            &format!("{ctx} at ({x},{y})"),
            count.exponent(),
            form.exponent(),
        )?;
    }
    Ok(())
}

fn koch_suite(h: &mut Harness, limits: &Limits) {
    h.check(
        "koch expansion equals the deletion-contraction oracle at (m,n) = (1,1)",
        || {
            let expanded = lib(families::koch_tutte(1, 1).expand(limits))?;
            let g = lib(graph::koch_graph(1, 1, limits))?;
            same("(1,1)", &expanded, &lib(oracle::tutte_del_con(&g, limits))?)
        },
    );

    h.check(
        "koch generation 0 equals the subgraph-sum oracle (m <= 2)",
        || {
            for m in 1..=2u32 {
                let expanded = lib(families::koch_tutte(m, 0).expand(limits))?;
                let g = lib(graph::koch_graph(m, 0, limits))?;
                same(
                    &format!("m = {m}"),
                    &expanded,
                    &lib(oracle::tutte_subgraph_sum(&g, limits))?,
                )?;
            }
            Ok(())
        },
    );

    h.check(
        "koch spanning-tree count at (1,1) is 81 by both routes",
        || {
            let count = lib(families::koch_tutte(1, 1).eval(&int(1), &int(1)))?;
            same(
                "closed form",
                &lib(count.to_integer(limits))?,
                &BigInt::from(81),
            )?;
            let g = lib(graph::koch_graph(1, 1, limits))?;
            same(
                "matrix-tree",
                &lib(oracle::spanning_tree_count(&g, limits))?,
                &BigInt::from(81),
            )
        },
    );

    h.check(
        "koch count forms keep base and exponent (m <= 3, n <= 5)",
        || {
            for m in 1..=3u32 {
                for n in 0..=5u32 {
                    let form = families::koch_tutte(m, n);
                    let triangles = BigInt::from((3 * u64::from(m) + 1).pow(n));
                    same(
                        &format!("triangles at (m,n) = ({m},{n})"),
                        form.exponent(),
                        &triangles,
                    )?;
                    triangle_count_forms(&form, &format!("(m,n) = ({m},{n})"))?;
                }
            }
            Ok(())
        },
    );

    h.check(
        "koch chromatic power counts proper colorings at (1,1)",
        || {
            let g = lib(graph::koch_graph(1, 1, limits))?;
            let p = lib(families::triangle_power_chromatic(&BigInt::from(4), limits))?;
            for colors in [3u32, 4] {
                let brute = lib(oracle::coloring_count_brute(&g, colors, limits))?;
                same(
                    &format!("{colors} colors"),
                    &p.eval(&int(i64::from(colors))),
                    &BigRational::from_integer(brute),
                )?;
            }
            Ok(())
        },
    );

    h.check(
        "koch reliability power equals brute enumeration at (1,1)",
        || {
            let g = lib(graph::koch_graph(1, 1, limits))?;
            let power = lib(families::triangle_power_reliability(
                &BigInt::from(4),
                limits,
            ))?;
            same(
                "(1,1)",
                &power,
                &lib(oracle::reliability_brute(&g, limits))?,
            )
        },
    );
}

fn exp_suite(h: &mut Harness, limits: &Limits) {
    h.check(
        "exp expansion equals the deletion-contraction oracle at n = 1",
        || {
            let expanded = lib(families::exp_tutte(1).expand(limits))?;
            let g = lib(graph::exp_graph(1, limits))?;
            same("n = 1", &expanded, &lib(oracle::tutte_del_con(&g, limits))?)
        },
    );

    h.check("exp generation 0 equals the subgraph-sum oracle", || {
        let expanded = lib(families::exp_tutte(0).expand(limits))?;
        let g = lib(graph::exp_graph(0, limits))?;
        same(
            "n = 0",
            &expanded,
            &lib(oracle::tutte_subgraph_sum(&g, limits))?,
        )
    });

    h.check("exp count forms keep base and exponent (n <= 5)", || {
        for n in 0..=5u32 {
            let form = families::exp_tutte(n);
            let triangles = BigInt::from((3u64.pow(n + 1) - 1) / 2);
            same(
                &format!("triangles at n = {n}"),
                form.exponent(),
                &triangles,
            )?;
            triangle_count_forms(&form, &format!("n = {n}"))?;
        }
        Ok(())
    });

    h.check(
        "exp spanning-tree count at n = 1 is 81 by both routes",
        || {
            let count = lib(families::exp_tutte(1).eval(&int(1), &int(1)))?;
            same(
                "closed form",
                &lib(count.to_integer(limits))?,
                &BigInt::from(81),
            )?;
            let g = lib(graph::exp_graph(1, limits))?;
            same(
                "matrix-tree",
                &lib(oracle::spanning_tree_count(&g, limits))?,
                &BigInt::from(81),
            )
        },
    );

    h.check(
        "exp chromatic and reliability powers match brute enumeration at n = 1",
        || {
            let g = lib(graph::exp_graph(1, limits))?;
            let u = BigInt::from(4);
            let chrom = lib(families::triangle_power_chromatic(&u, limits))?;
            let brute = lib(oracle::coloring_count_brute(&g, 3, limits))?;
            same(
                "3 colors",
                &chrom.eval(&int(3)),
                &BigRational::from_integer(brute),
            )?;
            let rel = lib(families::triangle_power_reliability(&u, limits))?;
            same(
                "reliability",
                &rel,
                &lib(oracle::reliability_brute(&g, limits))?,
            )
        },
    );
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_bipoly(r: &mut ChaCha8Rng) -> BiPoly {
    let terms: Vec<(u32, u32, i64)> = (0..r.gen_range(0..10))
        .map(|_| (r.gen_range(0..5), r.gen_range(0..5), r.gen_range(-9..=9)))
        .collect();
    BiPoly::from_terms(terms)
}

fn random_unipoly(r: &mut ChaCha8Rng) -> UniPoly {
    let terms: Vec<(u32, BigRational)> = (0..r.gen_range(0..8))
        .map(|_| {
            (
                r.gen_range(0..8),
                rat(r.gen_range(-9..=9), r.gen_range(1..=3)),
            )
        })
        .collect();
    UniPoly::from_terms(PolyVar::Y, terms)
}

fn random_rat(r: &mut ChaCha8Rng) -> BigRational {
    rat(r.gen_range(-9..=9), r.gen_range(1..=7))
}

fn polys_suite(h: &mut Harness, limits: &Limits) {
    h.check(
        "bivariate multiplication commutes and distributes (120 random triples)",
        || {
            for seed in 0..120u64 {
                let mut r = rng(seed);
                let a = random_bipoly(&mut r);
                let b = random_bipoly(&mut r);
                let c = random_bipoly(&mut r);
                same(&format!("commute, seed {seed}"), &a.mul(&b), &b.mul(&a))?;
                let lhs = a.mul(&b.add(&c));
                let rhs = a.mul(&b).add(&a.mul(&c));
                same(&format!("distribute, seed {seed}"), &lhs, &rhs)?;
            }
            Ok(())
        },
    );

    h.check(
        "evaluation is a ring homomorphism (120 random pairs)",
        || {
            for seed in 200..320u64 {
                let mut r = rng(seed);
                let a = random_bipoly(&mut r);
                let b = random_bipoly(&mut r);
                let (x0, y0) = (random_rat(&mut r), random_rat(&mut r));
                let (va, vb) = (a.eval(&x0, &y0), b.eval(&x0, &y0));
                same(
                    &format!("product, seed {seed}"),
                    &a.mul(&b).eval(&x0, &y0),
                    &(&va * &vb),
                )?;
                same(
                    &format!("sum, seed {seed}"),
                    &a.add(&b).eval(&x0, &y0),
                    &(&va + &vb),
                )?;
            }
            Ok(())
        },
    );

    h.check("powers match repeated multiplication (k <= 4)", || {
        for seed in 400..440u64 {
            let mut r = rng(seed);
            let a = random_bipoly(&mut r);
            let mut by_mul = BiPoly::one();
            for k in 0..=4u64 {
                let by_pow = a.pow(k, limits.pow_cell_cap).map_err(|e| e.to_string())?;
                same(&format!("seed {seed}, k = {k}"), &by_pow, &by_mul)?;
                by_mul = by_mul.mul(&a);
            }
        }
        Ok(())
    });

    h.check(
        "JSON round-trips polynomials, graphs, and power forms",
        || {
            for seed in 500..560u64 {
                let mut r = rng(seed);
                let a = random_bipoly(&mut r);
                let back = BiPoly::from_json(&a.to_json()).map_err(|e| e.to_string())?;
                same(&format!("bivariate, seed {seed}"), &back, &a)?;
                let u = random_unipoly(&mut r);
                let back = UniPoly::from_json(&u.to_json()).map_err(|e| e.to_string())?;
                same(&format!("univariate, seed {seed}"), &back, &u)?;
            }
            let marked = lib(graph::farey_graph(4, limits))?;
            let v = marked.to_json();
            let back = lib(graph::MarkedGraph::from_json(&v))?;
            same("marked graph", &back.to_json(), &v)?;
            let plain = lib(graph::koch_graph(2, 1, limits))?;
            let v = plain.to_json();
            let back = lib(graph::MultiGraph::from_json(&v))?;
            same("plain graph", &back.to_json(), &v)?;
            let form = families::koch_tutte(2, 3);
            let back = lib(families::PowerForm::from_json(&form.to_json()))?;
            same("power form", &back.to_json(), &form.to_json())?;
            let count = lib(families::exp_tutte(4).eval(&int(2), &int(1)))?;
            let back = lib(families::CountForm::from_json(&count.to_json()))?;
            same("count form", &back.to_json(), &count.to_json())?;
            Ok(())
        },
    );

    h.check(
        "affine substitution composes with evaluation (80 random cases)",
        || {
            for seed in 600..680u64 {
                let mut r = rng(seed);
                let a = random_unipoly(&mut r);
                let (c0, c1, t) = (random_rat(&mut r), random_rat(&mut r), random_rat(&mut r));
                let composed = a.substitute_affine(&c0, &c1, PolyVar::Y).eval(&t);
                let direct = a.eval(&(&c0 + &c1 * &t));
                same(&format!("seed {seed}"), &composed, &direct)?;
            }
            Ok(())
        },
    );

    h.check(
        "reciprocal transform is an involution on full-support polynomials",
        || {
            for seed in 700..740u64 {
                let mut r = rng(seed);
                // a nonzero constant term keeps the degree reversal exact; the
                // transform always lands in q, so start there too
                let base = random_unipoly(&mut r);
                let u =
                    UniPoly::from_terms(PolyVar::Q, base.iter().map(|(d, c)| (d, c.clone()))).add(
                        &UniPoly::constant(PolyVar::Q, int(i64::from(r.gen_range(1..5u32)))),
                    );
                let d = u.degree();
                let once = u.reciprocal_transform(d).map_err(|e| e.to_string())?;
                let twice = once.reciprocal_transform(d).map_err(|e| e.to_string())?;
                same(&format!("seed {seed}"), &twice, &u)?;
            }
            Ok(())
        },
    );

    // Tutte coefficients are counts, so none may come out negative.
    h.check(
        "farey polynomial coefficients are nonnegative (n <= 7)",
        || {
            for n in 0..=7u32 {
                let t = lib(farey::tutte(n, limits))?;
                let bad = t
                    .iter()
                    .find(|(_, _, c)| c.is_negative())
                    .map(|(i, j, c)| (i, j, c.clone()));
                if let Some((i, j, c)) = bad {
                    return Err(format!("generation {n}: coefficient of x^{i} y^{j} is {c}"));
                }
            }
            Ok(())
        },
    );
}
