//! Acceptance gate: runs every criterion, prints one PASS/FAIL line for
//! each, and exits with status 1 if any failed. Built without the libtest
//! harness so that all verdicts are printed; run alone with
//! `cargo test --test verify_acceptance`.

use std::process::Command;

use operadlab::config_space::PlanePoint;
use operadlab::homotopy_map::mu_disks;
use operadlab::little_disks::{Disk, DiskConfiguration};
use operadlab::random::{
    random_collar_sample, random_colored_chart, random_decorated_tree, random_decorations,
    random_disks, random_normalized, random_sc, seeded, DEFAULT_MAX_ATTEMPTS,
};
use operadlab::suites::run_suite;
use operadlab::*;
use rand::Rng;

fn verdict(n: u32, name: &str, pass: bool, detail: String) -> bool {
    println!(
        "criterion {n} ({name}): {} | {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Independent check of containment and pairwise disjointness.
fn valid(d: &[Disk], eps: f64) -> bool {
    d.iter()
        .all(|a| a.radius > 0.0 && a.center.norm() + a.radius <= 1.0 + eps)
        && d.iter().enumerate().all(|(i, a)| {
            d[i + 1..]
                .iter()
                .all(|b| (a.center - b.center).norm() >= a.radius + b.radius - eps)
        })
}

/// `a ∘_i b` written out from the definition.
fn compose_oracle(a: &[Disk], i: usize, b: &[Disk]) -> Vec<Disk> {
    let h = a[i];
    let mut out = a[..i].to_vec();
    out.extend(
        b.iter()
            .map(|x| Disk::new(h.center + x.center * h.radius, h.radius * x.radius)),
    );
    out.extend_from_slice(&a[i + 1..]);
    out
}

fn max_gap(a: &[Disk], b: &[Disk]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            (x.center - y.center)
                .norm()
                .max((x.radius - y.radius).abs())
        })
        .fold(0.0, f64::max)
}

fn criterion_1_little_disks_axioms() -> bool {
    let report = run_suite("d2-axioms", 1, 1000, &tol()).unwrap();
    let mut rng = seeded(101);
    let mut oracle_err: f64 = 0.0;
    let mut invalid = 0;
    for _ in 0..1000 {
        let (n, m) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = random_disks(&mut rng, n, DEFAULT_MAX_ATTEMPTS).unwrap();
        let b = random_disks(&mut rng, m, DEFAULT_MAX_ATTEMPTS).unwrap();
        let i = rng.gen_range(0..n);
        let c = a.compose(i, &b).unwrap();
        oracle_err = oracle_err.max(max_gap(c.disks(), &compose_oracle(a.disks(), i, b.disks())));
        invalid += usize::from(!valid(c.disks(), 1e-9));
    }
    let pass = report.failures.is_empty() && oracle_err <= 1e-9 && invalid == 0;
    verdict(
        1,
        "little disks operad axioms",
        pass,
        format!(
            "{} suite cases, {} failures, max error {:.2e}; oracle composition error {:.2e}, {} invalid composites",
            report.cases,
            report.failures.len(),
            report.max_error,
            oracle_err,
            invalid
        ),
    )
}

/// Number of reduced rooted trees on `n` labeled leaves, indexed by the
/// number of internal vertices. With `f(S)` the generating polynomial of
/// trees on the leaf set `S` and `g(S)` that of forests on `S`,
/// `f(S) = x·(g(S) − f(S))` for `|S| ≥ 2`, the root's children forming a
/// partition of `S` into at least two blocks.
fn tree_counts(n: usize) -> Vec<u64> {
    type Poly = Vec<u64>;
    let mul = |a: &Poly, b: &Poly| {
        let mut c = vec![0; n + 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j <= n {
                    c[i + j] += x * y;
                }
            }
        }
        c
    };
    let full = (1usize << n) - 1;
    let mut f: Vec<Poly> = vec![vec![0; n + 1]; full + 1];
    let mut g: Vec<Poly> = vec![vec![0; n + 1]; full + 1];
    g[0][0] = 1;
    // masks in increasing order visit every subset before its supersets
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        // forests on s whose block through `low` is a proper subset
        let mut proper = vec![0; n + 1];
        let mut sub = rest;
        loop {
            let block = sub | low;
            if block != s {
                let term = mul(&f[block], &g[s & !block]);
                proper.iter_mut().zip(term).for_each(|(x, y)| *x += y);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        if s.count_ones() == 1 {
            f[s][0] = 1;
        } else {
            f[s][1..].copy_from_slice(&proper[..n]);
        }
        g[s] = proper.iter().zip(&f[s]).map(|(x, y)| x + y).collect();
    }
    f[full].clone()
}

fn double_factorial(k: i64) -> u64 {
    (1..=k).rev().step_by(2).map(|x| x as u64).product()
}

fn criterion_2_strata_combinatorics() -> bool {
    let count = |n: usize, k: usize| enumerate_trees(n, k).map(|t| t.len()).unwrap_or(0);
    let mut lines = Vec::new();
    let mut pass = true;
    for (n, k, want) in [(3, 1, 3), (3, 2, 3), (4, 1, 10), (4, 2, 15), (4, 3, 15)] {
        let got = count(n, k);
        pass &= got == want;
        lines.push(format!("({n},{k})={got} want {want}"));
    }
    for n in 2..=6 {
        let want = double_factorial(2 * n as i64 - 3) as usize;
        let got = count(n, n - 2);
        pass &= got == want;
        if got != want {
            lines.push(format!("({n},{})={got} want {want}", n - 2));
        }
        let oracle = tree_counts(n);
        for k in 0..=n - 2 {
            let ok = count(n, k) as u64 == oracle[k + 1];
            pass &= ok;
            if !ok {
                lines.push(format!(
                    "({n},{k}) disagrees with partition oracle {}",
                    oracle[k + 1]
                ));
            }
        }
        pass &= LabeledTree::corolla(n).unwrap().stratum_dimension() == 2 * n - 3;
        for k in 0..=n - 2 {
            for t in enumerate_trees(n, k).unwrap() {
                let ok = t.stratum_dimension() + t.internal_edge_count() == 2 * n - 3;
                pass &= ok;
            }
        }
    }
    let t31 = enumerate_trees(3, 1).unwrap();
    pass &= t31.iter().all(|t| t.stratum_dimension() == 2);
    verdict(2, "strata combinatorics", pass, lines.join(", "))
}

fn criterion_3_charts() -> bool {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pair = NormalizedConfiguration::new(
        vec![PlanePoint::new(-s, 0.0), PlanePoint::new(s, 0.0)],
        &tol(),
    )
    .unwrap();
    let want = [-s, s - 0.1 * s, s + 0.1 * s];
    let gamma_err = match gamma_insert(&pair, &pair, 1, 0.1, &tol()).unwrap() {
        GammaResult::Interior(c) => c
            .points()
            .iter()
            .zip(want)
            .map(|(z, w)| (z - PlanePoint::new(w, 0.0)).norm())
            .fold(0.0, f64::max),
        GammaResult::Boundary { .. } => f64::INFINITY,
    };

    let mut rng = seeded(303);
    let mut staged_err: f64 = 0.0;
    for _ in 0..500 {
        let size = rng.gen_range(2..=5);
        let cp = random_collar_sample(&mut rng, size, DEFAULT_MAX_ATTEMPTS).unwrap();
        let d = cp
            .evaluate(&tol())
            .unwrap()
            .distance(&cp.evaluate_staged(&tol()).unwrap());
        staged_err = staged_err.max(d);
    }

    let mut equi_err: f64 = 0.0;
    let mut checked = 0;
    for n in 2..=4 {
        for k in 0..=n - 2 {
            for tree in enumerate_trees(n, k).unwrap() {
                let p = random_decorations(&mut rng, &tree, DEFAULT_MAX_ATTEMPTS).unwrap();
                let eps = p.default_epsilon();
                let t = (0..k).map(|_| eps * rng.gen_range(0.01..1.0)).collect();
                let cp = ChartPoint::new(p, t, eps).unwrap();
                for sigma in Permutation::all(n) {
                    let lhs = cp
                        .act_permutation(&sigma)
                        .unwrap()
                        .evaluate(&tol())
                        .unwrap();
                    let rhs = cp
                        .evaluate(&tol())
                        .unwrap()
                        .act_permutation(&sigma)
                        .unwrap();
                    equi_err = equi_err.max(lhs.distance(&rhs));
                    checked += 1;
                }
            }
        }
    }
    let pass = gamma_err <= 1e-12 && staged_err <= 1e-9 && equi_err <= 1e-12;
    verdict(
        3,
        "chart correctness",
        pass,
        format!(
            "gamma error {gamma_err:.2e}; staged vs one-pass {staged_err:.2e} on 500; equivariance {equi_err:.2e} on {checked} (tree, sigma) pairs"
        ),
    )
}

fn criterion_4_nu_morphism() -> bool {
    let mut rng = seeded(404);
    let (mut exact, mut max_dist) = (0, 0.0f64);
    let mut root_slot = (0, 0);
    for _ in 0..500 {
        let (n1, n2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let p = random_decorated_tree(&mut rng, n1, DEFAULT_MAX_ATTEMPTS).unwrap();
        let q = random_decorated_tree(&mut rng, n2, DEFAULT_MAX_ATTEMPTS).unwrap();
        let i = rng.gen_range(0..n1);
        let lhs = nu_boundary(&graft_decorated(&p, i, &q).unwrap());
        let rhs = nu_boundary(&p).compose(i, &nu_boundary(&q)).unwrap();
        let at_root = p.tree().is_unit() || p.tree().leaf_position(i).is_some_and(|(v, _)| v == 0);
        if lhs == rhs {
            exact += 1;
            root_slot.0 += usize::from(at_root);
        }
        root_slot.1 += usize::from(at_root);
        max_dist = max_dist.max(lhs.distance(&rhs));
    }
    verdict(
        4,
        "nu morphism, bit-exact",
        exact == 500,
        format!(
            "{exact}/500 bit-exact ({}/{} with leaf i at the root of P), max distance {max_dist:.2e}",
            root_slot.0, root_slot.1
        ),
    )
}

fn criterion_5_nu_validity_and_continuity() -> bool {
    let mut rng = seeded(505);
    let mut bad = 0;
    for _ in 0..10_000 {
        let size = rng.gen_range(2..=6);
        let cp = random_collar_sample(&mut rng, size, DEFAULT_MAX_ATTEMPTS).unwrap();
        match nu(&cp, &CollarParams::for_chart(&cp), &tol()) {
            Ok(d) if valid(d.disks(), 1e-9) => {}
            _ => bad += 1,
        }
    }

    let mut rng = seeded(555);
    let mut monotone_breaks = 0;
    let mut worst_final: f64 = 0.0;
    let mut corpus = 0;
    while corpus < 20 {
        let size = rng.gen_range(3..=6);
        let p = random_decorated_tree(&mut rng, size, DEFAULT_MAX_ATTEMPTS).unwrap();
        if p.tree().internal_edge_count() == 0 {
            continue;
        }
        corpus += 1;
        let eps = p.default_epsilon();
        let target = nu_boundary(&p);
        let mut prev = f64::INFINITY;
        for k in 1..=10 {
            let t = eps * 2f64.powi(-k);
            let cp =
                ChartPoint::new(p.clone(), vec![t; p.tree().internal_edge_count()], eps).unwrap();
            let d = nu(&cp, &CollarParams::for_chart(&cp), &tol())
                .unwrap()
                .distance(&target);
            monotone_breaks += usize::from(d > prev);
            prev = d;
        }
        worst_final = worst_final.max(prev);
    }
    let pass = bad == 0 && monotone_breaks == 0 && worst_final < 1e-2;
    verdict(
        5,
        "nu validity and continuity",
        pass,
        format!(
            "{bad} invalid of 10000 collar samples; continuity corpus of {corpus}: {monotone_breaks} increases, largest distance at k=10 {worst_final:.2e}"
        ),
    )
}

fn criterion_6_section_and_convexity() -> bool {
    let mut rng = seeded(606);
    let mut section_err: f64 = 0.0;
    for _ in 0..1000 {
        let size = rng.gen_range(2..=6);
        let c = random_normalized(&mut rng, size, DEFAULT_MAX_ATTEMPTS).unwrap();
        section_err = section_err.max(nu_interior(&c).project_centers().unwrap().distance(&c));
    }
    let mut failures = 0;
    for _ in 0..1000 {
        let size = rng.gen_range(2..=6);
        let c = random_normalized(&mut rng, size, DEFAULT_MAX_ATTEMPTS).unwrap();
        let d1 = nu_interior(&c);
        // a fiber-mate: an affine image of the centers, each radius shrunk independently
        let a = rng.gen_range(0.1..0.9);
        let b = PlanePoint::from_polar(
            rng.gen_range(0.0..(1.0 - a)),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let disks = d1
            .disks()
            .iter()
            .map(|x| Disk::new(x.center * a + b, x.radius * a * rng.gen_range(0.05..=1.0)))
            .collect();
        let d2 = DiskConfiguration::validated(disks, 1e-9).unwrap();
        assert!(d2.project_centers().unwrap().distance(&c) <= 1e-12);
        for k in 0..=20 {
            let delta = f64::from(k) / 20.0;
            match convex_blend(&d1, &d2, delta, &tol()) {
                Ok(d) if valid(d.disks(), 1e-9) => {}
                _ => failures += 1,
            }
        }
    }
    let pass = section_err <= 1e-12 && failures == 0;
    verdict(
        6,
        "section and projection",
        pass,
        format!("section error {section_err:.2e} on 1000; {failures} invalid blends over 1000 fiber-mate pairs x 21 weights"),
    )
}

fn criterion_7_swiss_cheese() -> bool {
    let report = run_suite("sc-axioms", 7, 1000, &tol()).unwrap();

    let mut rng = seeded(707);
    let mut flat_err: f64 = 0.0;
    for _ in 0..1000 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(0..=2));
        let a = random_sc(&mut rng, n, m, DEFAULT_MAX_ATTEMPTS).unwrap();
        let size = rng.gen_range(1..=3);
        let d = random_disks(&mut rng, size, DEFAULT_MAX_ATTEMPTS).unwrap();
        let i = rng.gen_range(0..n);
        let glued = a.compose_closed(i, &d).unwrap().to_disks();
        // two-step oracle: d into closed disk i, conj(d) into its mirror
        let flat = a.to_disks();
        let conj: Vec<Disk> = d
            .disks()
            .iter()
            .map(|x| Disk::new(x.center.conj(), x.radius))
            .collect();
        let step = compose_oracle(flat.disks(), i, d.disks());
        let step = compose_oracle(&step, n + d.len() - 1 + i, &conj);
        flat_err = flat_err.max(max_gap(glued.disks(), &step));
    }

    let mut sym_err: f64 = 0.0;
    let mut errors = 0;
    for _ in 0..1000 {
        let (p, q) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        if p + q == 0 {
            continue;
        }
        let cp = random_colored_chart(&mut rng, p, q, 0.3, DEFAULT_MAX_ATTEMPTS).unwrap();
        let params = CollarParams::for_chart(&cp.double().unwrap());
        let Ok(d) = mu_disks(&cp, &params, &tol()) else {
            errors += 1;
            continue;
        };
        let x = d.disks();
        for k in 0..p {
            let (a, b) = (x[k], x[k + p]);
            sym_err = sym_err
                .max((a.center - b.center.conj()).norm())
                .max((a.radius - b.radius).abs());
        }
        for o in &x[2 * p..] {
            sym_err = sym_err.max(o.center.im.abs());
        }
    }
    let pass = report.failures.is_empty() && flat_err <= 1e-12 && sym_err <= 1e-12 && errors == 0;
    verdict(
        7,
        "Swiss-cheese",
        pass,
        format!(
            "axiom suite {} cases, {} failures, max error {:.2e}; flattening error {flat_err:.2e}; mu symmetry defect {sym_err:.2e}, {errors} errors",
            report.cases,
            report.failures.len(),
            report.max_error
        ),
    )
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!(
        "{}/tests/fixtures/{name}",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap()
}

fn round_trips<T>(text: &str) -> bool
where
    T: serde::Serialize + serde::de::DeserializeOwned + PartialEq,
{
    let x: T = serde_json::from_str(text).unwrap();
    let s = serde_json::to_string(&x).unwrap();
    let y: T = serde_json::from_str(&s).unwrap();
    x == y && serde_json::to_string(&y).unwrap() == s
}

fn cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_operadlab"))
        .args(args)
        .env_remove("OPERADLAB_SEED")
        .env_remove("OPERADLAB_TOL_GEO")
        .output()
        .unwrap();
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn criterion_8_cli_and_formats() -> bool {
    let checks: Vec<(&str, bool)> = vec![
        (
            "points.json",
            round_trips::<PointConfiguration>(&fixture("points.json")),
        ),
        (
            "normalized.json",
            round_trips::<NormalizedConfiguration>(&fixture("normalized.json")),
        ),
        (
            "half_plane.json",
            round_trips::<HalfPlaneConfiguration>(&fixture("half_plane.json")),
        ),
        (
            "disks.json",
            round_trips::<DiskConfiguration>(&fixture("disks.json")),
        ),
        (
            "sc.json",
            round_trips::<SCConfiguration>(&fixture("sc.json")),
        ),
        (
            "permutation.json",
            round_trips::<Permutation>(&fixture("permutation.json")),
        ),
        (
            "tree.json",
            round_trips::<LabeledTree>(&fixture("tree.json")),
        ),
        (
            "colored_tree.json",
            round_trips::<ColoredTree>(&fixture("colored_tree.json")),
        ),
        (
            "decorated_tree.json",
            round_trips::<DecoratedTree>(&fixture("decorated_tree.json")),
        ),
        (
            "chart.json",
            round_trips::<ChartPoint>(&fixture("chart.json")),
        ),
        (
            "colored_chart.json",
            round_trips::<ColoredChartPoint>(&fixture("colored_chart.json")),
        ),
    ];
    let broken: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();

    let (count, code) = cli(&["enumerate-strata", "3", "1", "--count-only"]);
    let count_ok = code == 0 && count == b"3\n";

    let runs = [
        vec!["random", "sc", "3", "--open", "2", "--seed", "11"],
        vec!["random", "decorated-tree", "5", "--seed", "11"],
        vec!["check", "--suite", "charts", "--cases", "50", "--seed", "3"],
    ];
    let deterministic = runs.iter().all(|r| {
        let (a, ca) = cli(r);
        let (b, cb) = cli(r);
        ca == 0 && cb == 0 && !a.is_empty() && a == b
    });
    let pass = broken.is_empty() && count_ok && deterministic;
    verdict(
        8,
        "CLI and formats",
        pass,
        format!(
            "{} fixtures, round-trip failures {broken:?}; enumerate-strata 3 1 --count-only -> {:?}; deterministic {deterministic}",
            checks.len(),
            String::from_utf8_lossy(&count).trim()
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> bool);

fn main() {
    let criteria: [Criterion; 8] = [
        (
            1,
            "little disks operad axioms",
            criterion_1_little_disks_axioms,
        ),
        (2, "strata combinatorics", criterion_2_strata_combinatorics),
        (3, "chart correctness", criterion_3_charts),
        (4, "nu morphism, bit-exact", criterion_4_nu_morphism),
        (
            5,
            "nu validity and continuity",
            criterion_5_nu_validity_and_continuity,
        ),
        (
            6,
            "section and projection",
            criterion_6_section_and_convexity,
        ),
        (7, "Swiss-cheese", criterion_7_swiss_cheese),
        (8, "CLI and formats", criterion_8_cli_and_formats),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        let pass = std::panic::catch_unwind(run)
            .unwrap_or_else(|_| verdict(n, name, false, "panicked".into()));
        failed += usize::from(!pass);
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
