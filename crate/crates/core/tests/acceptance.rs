//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use plurikp::cell_complex::{cubic_flower, decompose_flower, flower, root_flower};
use plurikp::dkp::{free_vertices, golden_field, max_relative_residual, random_field, Branch, Field};
use plurikp::lagrangian::{action, conditioning, corner_gradient, corner_quantities, exterior_derivative, three_form};
use plurikp::special::{dilog, golden};
use plurikp::verifier::sampling::{random_cell, random_point, sample_conditioned_field, sample_solution, trial_rng};
use plurikp::verifier::{classify_branch, component_sign, BranchClass, Tolerances};
use plurikp::{CellKind, Chain, LatticeKind, OrientedCell, Point};

const SEED: u64 = 20_240_501;
const TRIALS: u64 = 1000;
const QUARTER: f64 = PI * PI / 4.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn ambo(kind: CellKind) -> OrientedCell {
    let level = kind.level().unwrap() as i64;
    OrientedCell::new(kind, Point::zeros(5).shifted(0, -level), &[0, 1, 2, 3, 4]).unwrap()
}

/// Central difference of `f` in the value at `p`, written out here rather
/// than taken from the library.
fn fd(field: &Field<f64>, p: &Point, h: f64, f: impl Fn(&Field<f64>) -> f64) -> f64 {
    let x = field.get(p).unwrap();
    let mut up = field.clone();
    up.insert(p.clone(), x + h).unwrap();
    let mut down = field.clone();
    down.insert(p.clone(), x - h).unwrap();
    (f(&up) - f(&down)) / (2.0 * h)
}

fn criterion_1() -> Outcome {
    let a: f64 = golden();
    let l2 = (-a).ln().powi(2);
    let p2 = PI * PI;
    let table = [
        ("Li2(a^2)", a * a, p2 / 15.0 - l2),
        ("Li2(-a)", -a, p2 / 10.0 - l2),
        ("Li2(a)", a, -p2 / 15.0 + 0.5 * l2),
        ("Li2(1/a)", 1.0 / a, -p2 / 10.0 - l2),
    ];
    let mut worst = (0.0_f64, "");
    for (label, z, closed) in table {
        let dev = (dilog(z).unwrap() - closed).abs();
        if !(dev <= worst.0) {
            worst = (dev, label);
        }
    }
    outcome(worst.0 <= 1e-11, format!("max |Li2 - closed form| = {:.2e} at {} (tol 1e-11)", worst.0, worst.1))
}

fn criterion_2() -> Outcome {
    let cell = ambo(CellKind::BlackAmbo4);
    let g = golden_field::<f64>(&cell, Branch::Dkp).unwrap();
    let mut oct_dev = 0.0_f64;
    let mut octs = 0;
    for (facet, k) in cell.facets().unwrap().oriented_terms() {
        if facet.kind() == CellKind::Octahedron {
            octs += 1;
            let v = three_form(&g, &facet).unwrap() * k as f64;
            oct_dev = oct_dev.max((v + PI * PI / 20.0).abs());
        }
    }
    let s = exterior_derivative(&g, &cell).unwrap();
    let s_inv = exterior_derivative(&g.inverted(), &cell).unwrap();
    let d1 = (s + QUARTER).abs();
    let d2 = (s_inv - QUARTER).abs();
    let pass = octs == 5 && oct_dev <= 1e-10 && d1 <= 1e-9 && d2 <= 1e-9;
    outcome(
        pass,
        format!(
            "{octs} octahedra, max |L + pi^2/20| = {oct_dev:.2e}; |S + pi^2/4| = {d1:.2e}; inverted |S - pi^2/4| = {d2:.2e}"
        ),
    )
}

/// Worst deviations over random solutions of one cell kind.
#[derive(Default)]
struct SolutionStats {
    residual: f64,
    corner: f64,
    corner_inv: f64,
    closure: f64,
    closure_inv: f64,
    off_nominal: usize,
    component_closure: f64,
}

fn solution_stats(kind: CellKind, stream: u64) -> SolutionStats {
    let mut st = SolutionStats::default();
    for t in 0..TRIALS {
        let mut rng = trial_rng(SEED, stream, t);
        let cell = random_cell(kind, 4, &mut rng).unwrap();
        assert_eq!(free_vertices(&cell).unwrap().len(), if kind == CellKind::Cube4 { 9 } else { 7 });
        let f = sample_solution(&cell, Branch::Dkp, 1e-6, &mut rng).unwrap();
        st.residual = st.residual.max(max_relative_residual(&f, &cell, Branch::Dkp).unwrap());
        let inv = f.inverted();
        for (field, target, slot) in [(&f, -1.0, &mut st.corner), (&inv, 1.0, &mut st.corner_inv)] {
            for q in corner_quantities(field, &cell).unwrap() {
                for x in q.factors {
                    *slot = slot.max((x - target).abs());
                }
            }
        }
        let s = exterior_derivative(&f, &cell).unwrap();
        let s_inv = exterior_derivative(&inv, &cell).unwrap();
        let (nominal, nominal_inv, component) = match kind {
            CellKind::Cube4 => {
                let (b, w) = plurikp::lagrangian::cube_ambo_pair(&cell).unwrap();
                let lifted = plurikp::lagrangian::lifted_cube_field(&f, &cell).unwrap();
                let sb = component_sign(&lifted, &b).unwrap();
                let sw = component_sign(&lifted, &w).unwrap();
                (0.0, 0.0, -(sb - sw) * QUARTER)
            }
            _ => (-QUARTER, QUARTER, -component_sign(&f, &cell).unwrap() * QUARTER),
        };
        let dev = (s - nominal).abs().max((s_inv - nominal_inv).abs());
        if dev > 1e-8 {
            st.off_nominal += 1;
        }
        st.closure = st.closure.max((s - nominal).abs());
        st.closure_inv = st.closure_inv.max((s_inv - nominal_inv).abs());
        st.component_closure = st.component_closure.max((s - component).abs()).max((s_inv + component).abs());
    }
    st
}

fn criterion_3() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (s, kind) in [CellKind::BlackAmbo4, CellKind::WhiteAmbo4].into_iter().enumerate() {
        let st = solution_stats(kind, 30 + s as u64);
        pass &= st.residual <= 1e-10
            && st.corner <= 1e-8
            && st.corner_inv <= 1e-8
            && st.closure <= 1e-8
            && st.closure_inv <= 1e-8;
        parts.push(format!(
            "{}: max |E+1| = {:.1e}, inverted max |E-1| = {:.1e}, max |S + pi^2/4| = {:.2e}, inverted max |S - pi^2/4| = {:.2e}, \
             {}/{TRIALS} trials off the stated constant; S = -sign(prod x)*pi^2/4 holds to {:.1e}",
            kind.token(),
            st.corner,
            st.corner_inv,
            st.closure,
            st.closure_inv,
            st.off_nominal,
            st.component_closure,
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_4() -> Outcome {
    let st = solution_stats(CellKind::Cube4, 40);
    let pass = st.residual <= 1e-10 && st.corner <= 1e-8 && st.corner_inv <= 1e-8 && st.closure <= 1e-8 && st.closure_inv <= 1e-8;
    outcome(
        pass,
        format!(
            "14 corners: max |E+1| = {:.1e}, inverted max |E-1| = {:.1e}; max |S| = {:.2e}, inverted {:.2e}, \
             {}/{TRIALS} trials with S != 0; S = (sign of white lift - sign of black lift)*pi^2/4 holds to {:.1e}",
            st.corner, st.corner_inv, st.closure, st.closure_inv, st.off_nominal, st.component_closure
        ),
    )
}

fn criterion_5() -> Outcome {
    let tol = Tolerances::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (s, kind) in CellKind::FOUR_CELLS.into_iter().enumerate() {
        let mut worst = 0.0_f64;
        for t in 0..TRIALS {
            let mut rng = trial_rng(SEED, 50 + s as u64, t);
            let cell = random_cell(kind, 4, &mut rng).unwrap();
            let pts: Vec<Point> = cell.vertices().into_iter().collect();
            let field = sample_conditioned_field(&pts, std::slice::from_ref(&cell), None, tol.fd_conditioning, &mut rng).unwrap();
            for v in &pts {
                let analytic = corner_gradient(&field, &cell, v).unwrap();
                let numeric = fd(&field, v, 1e-6, |f| exterior_derivative(f, &cell).unwrap());
                worst = worst.max((analytic - numeric).abs());
            }
        }
        pass &= worst <= 1e-6;
        parts.push(format!("{} {worst:.1e}", kind.token()));
    }
    outcome(pass, format!("max |(1/x)log|E| - FD| per kind: {} (tol 1e-6, step 1e-6)", parts.join(", ")))
}

/// Facet tables of the root-lattice cells: sign, facet kind, position of the
/// shift direction (if any) and position of the dropped index.
fn facet_table(kind: CellKind) -> Vec<(i64, CellKind, Option<usize>, usize)> {
    use CellKind::*;
    let alt = |n: usize, k: CellKind, shift: bool| -> Vec<(i64, CellKind, Option<usize>, usize)> {
        (0..n).rev().map(|p| (if (n - 1 - p) % 2 == 0 { 1 } else { -1 }, k, shift.then_some(p), p)).collect()
    };
    match kind {
        BlackTetrahedron => alt(4, BlackTriangle, false),
        Octahedron => [alt(4, BlackTriangle, true), alt(4, WhiteTriangle, false)].concat(),
        WhiteTetrahedron => alt(4, WhiteTriangle, true),
        BlackSimplex4 => alt(5, BlackTetrahedron, false),
        BlackAmbo4 => [alt(5, BlackTetrahedron, true), alt(5, Octahedron, false)].concat(),
        WhiteAmbo4 => [alt(5, Octahedron, true), alt(5, WhiteTetrahedron, false)].concat(),
        WhiteSimplex4 => alt(5, WhiteTetrahedron, true),
        _ => unreachable!(),
    }
}

fn table_chain(cell: &OrientedCell) -> Chain {
    let mut out = Chain::new();
    for (sign, k, shift, drop) in facet_table(cell.kind()) {
        let idx: Vec<usize> = cell.indices().iter().enumerate().filter(|&(q, _)| q != drop).map(|(_, &d)| d).collect();
        let base = match shift {
            Some(q) => cell.base().shifted(cell.indices()[q], 1),
            None => cell.base().clone(),
        };
        out.add_oriented(&OrientedCell::new(k, base, &idx).unwrap(), sign);
    }
    out
}

fn criterion_6() -> Outcome {
    use CellKind::*;
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut rng = trial_rng(SEED, 60, 0);
    for n in 3..=6 {
        let mut kinds = vec![BlackTetrahedron, Octahedron, WhiteTetrahedron, Cube3];
        if n >= 4 {
            kinds.extend(CellKind::FOUR_CELLS);
        }
        for kind in kinds {
            for _ in 0..20 {
                let cell = random_cell(kind, n, &mut rng).unwrap();
                let facets = cell.facets().unwrap();
                checked += 1;
                if kind.dim() == 4 && !facets.boundary().unwrap().is_empty() {
                    failures.push(format!("dd != 0 on {cell}"));
                }
                let verts = cell.vertices();
                if facets.cells().any(|f| !f.vertices().is_subset(&verts)) {
                    failures.push(format!("facet outside {cell}"));
                }
                let expected_count = match kind {
                    BlackAmbo4 | WhiteAmbo4 => 10,
                    Cube4 => 8,
                    Cube3 | Octahedron => 8 - 2 * (kind == Cube3) as usize,
                    BlackSimplex4 | WhiteSimplex4 => 5,
                    _ => 4,
                };
                let mult: i64 = facets.iter().map(|(_, k)| k.abs()).sum();
                if mult as usize != expected_count || facets.len() != expected_count {
                    failures.push(format!("{cell}: {mult} facets, expected {expected_count}"));
                }
                if kind.lattice() == LatticeKind::RootA && facets != table_chain(&cell) {
                    failures.push(format!("facets of {cell} differ from the table"));
                }
                if kind.dim() == 4 {
                    for v in &verts {
                        let fl = cell.corner(v).unwrap();
                        let d = decompose_flower(&fl, v).unwrap();
                        if d.chain_sum().unwrap() != fl.padded(d.extra_dims) {
                            failures.push(format!("boundary flower of {cell} at {v}"));
                        }
                    }
                }
            }
        }
    }
    for t in 0..20 {
        let mut rng = trial_rng(SEED, 61, t);
        let center = random_point(LatticeKind::RootA, 3, &mut rng);
        let fl = root_flower(&center, [0, 1, 2, 3]).unwrap();
        let count = |k: CellKind| fl.iter().filter(|(c, _)| c.kind() == k).count();
        if (count(BlackTetrahedron), count(WhiteTetrahedron), count(Octahedron), fl.len()) != (4, 4, 6, 14) {
            failures.push(format!("root flower at {center} has the wrong cells"));
        }
        if !fl.boundary().unwrap().iter().all(|(c, _)| !c.contains_vertex(&center)) {
            failures.push(format!("root flower at {center}: center not interior"));
        }
        let d = decompose_flower(&fl, &center).unwrap();
        if d.chain_sum().unwrap() != fl.padded(d.extra_dims) {
            failures.push(format!("root flower at {center} not reproduced"));
        }
        let center = random_point(LatticeKind::Cubic, 3, &mut rng);
        let fl = cubic_flower(&center, [0, 1, 2]).unwrap();
        let d = decompose_flower(&fl, &center).unwrap();
        if fl.len() != 8 || d.chain_sum().unwrap() != fl.padded(d.extra_dims) {
            failures.push(format!("cube flower at {center} not reproduced"));
        }
        checked += 2;
    }
    let detail = match failures.first() {
        None => format!("{checked} cells and flowers exact"),
        Some(f) => format!("{} failures, first: {f}", failures.len()),
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_7() -> Outcome {
    let tol = Tolerances::default();
    let mut cases: Vec<(String, Chain, Point)> = Vec::new();
    cases.push(("root flower".into(), root_flower(&Point::zeros(4), [0, 1, 2, 3]).unwrap(), Point::zeros(4)));
    cases.push(("cube flower".into(), cubic_flower(&Point::zeros(3), [0, 1, 2]).unwrap(), Point::zeros(3)));
    let mut rng = trial_rng(SEED, 70, 0);
    for kind in CellKind::FOUR_CELLS {
        let cell = random_cell(kind, 4, &mut rng).unwrap();
        for v in cell.vertices() {
            cases.push((format!("{} boundary", kind.token()), cell.facets().unwrap(), v));
        }
    }
    let mut worst = (0.0_f64, String::new());
    let mut evaluations = 0;
    for (c, (label, manifold, vertex)) in cases.iter().enumerate() {
        let fl = flower(manifold, vertex).unwrap();
        let d = decompose_flower(&fl, vertex).unwrap();
        let embedded = fl.padded(d.extra_dims);
        let center = d.center(vertex);
        let mut pts: Vec<Point> = d.corners.iter().flat_map(|k| k.cell.vertices()).collect();
        pts.sort();
        pts.dedup();
        let cells: Vec<OrientedCell> = d.corners.iter().map(|k| k.cell.clone()).collect();
        let trials = if c < 2 { 200 } else { 10 };
        for t in 0..trials {
            let mut rng = trial_rng(SEED, 71 + c as u64, t);
            let field = sample_conditioned_field(&pts, &cells, Some(&center), tol.fd_conditioning, &mut rng).unwrap();
            let lhs = fd(&field, &center, 1e-6, |f| action(f, &embedded).unwrap());
            let rhs: f64 = d
                .corners
                .iter()
                .map(|k| k.multiplicity as f64 * corner_gradient(&field, &k.cell, &center).unwrap())
                .sum();
            evaluations += 1;
            let dev = (lhs - rhs).abs();
            if !(dev <= worst.0) {
                worst = (dev, label.clone());
            }
        }
    }
    outcome(worst.0 <= 1e-6, format!("{evaluations} evaluations, max |FD - sum of corners| = {:.1e} ({})", worst.0, worst.1))
}

fn criterion_8() -> Outcome {
    let tol = Tolerances::default();
    let mut wrong = 0;
    let mut total = 0;
    let mut closest = f64::INFINITY;
    for (s, kind) in [CellKind::BlackAmbo4, CellKind::WhiteAmbo4, CellKind::Cube4].into_iter().enumerate() {
        for t in 0..TRIALS {
            let mut rng = trial_rng(SEED, 80 + s as u64, t);
            let cell = random_cell(kind, 4, &mut rng).unwrap();
            let pts: Vec<Point> = cell.vertices().into_iter().collect();
            let field = loop {
                let f: Field<f64> = random_field(&pts, &mut rng);
                if conditioning(&f, &cell, None).unwrap() >= 1e-6 {
                    break f;
                }
            };
            total += 1;
            match classify_branch(&field, &cell, &tol) {
                Ok(r) if r.branch == BranchClass::Neither => closest = closest.min(r.max_dev_minus.min(r.max_dev_plus)),
                _ => wrong += 1,
            }
        }
    }
    outcome(wrong == 0, format!("{wrong}/{total} random fields not classified as neither; smallest max |E -/+ 1| = {closest:.2e}"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("dilogarithm special values", Duration::from_secs(1), criterion_1),
        ("golden closure", Duration::from_secs(1), criterion_2),
        ("randomized branch and closure on Q(A_N)", Duration::from_secs(10), criterion_3),
        ("randomized closure on Z^N", Duration::from_secs(10), criterion_4),
        ("gradient identity", Duration::from_secs(30), criterion_5),
        ("combinatorial exactness", Duration::from_secs(5), criterion_6),
        ("Euler-Lagrange decomposition", Duration::from_secs(10), criterion_7),
        ("negative control", Duration::from_secs(5), criterion_8),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    let start = Instant::now();
    for (n, (title, budget, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let took = t.elapsed();
        let in_time = took <= *budget;
        let pass = o.pass && in_time;
        let timing = if in_time { format!("{took:.2?}") } else { format!("{took:.2?}, over the {budget:?} budget") };
        writeln!(out, "criterion {} {} {title}: {} [{timing}]", n + 1, if pass { "PASS" } else { "FAIL" }, o.detail).unwrap();
        if !pass {
            failed.push(n + 1);
        }
    }
    writeln!(out, "acceptance: {}/8 criteria pass in {:.2?}", 8 - failed.len(), start.elapsed()).unwrap();
    if !failed.is_empty() {
        writeln!(out, "failed criteria: {failed:?}").unwrap();
        std::process::exit(1);
    }
}
