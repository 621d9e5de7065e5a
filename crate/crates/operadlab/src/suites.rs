//! Randomized property suites, run by the `check` command.
//!
//! Each suite draws its cases from a seeded generator and reports the
//! number of cases, every failing case with a witness, and the largest
//! numerical error it saw.

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config_space::Tolerances;
use crate::error::{Error, Result};
use crate::fm_operad::check_equivariance;
use crate::homotopy_map::{mu_disks, nu, nu_boundary, nu_interior, CollarParams};
use crate::little_disks::{convex_blend, DiskConfiguration};
use crate::permutation::Permutation;
use crate::random::{
    random_collar_sample, random_colored_chart, random_decorated_tree, random_disks,
    random_normalized, random_sc, seeded, DEFAULT_MAX_ATTEMPTS,
};
use crate::swiss_cheese::SCConfiguration;

pub const SUITES: &[&str] = &[
    "d2-axioms",
    "sc-axioms",
    "charts",
    "nu-morphism",
    "nu-validity",
    "section",
    "mu-symmetry",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<Value>,
    pub max_error: f64,
}

struct Tracker {
    report: SuiteReport,
}

impl Tracker {
    fn new(suite: &str, seed: u64) -> Self {
        Tracker {
            report: SuiteReport {
                suite: suite.into(),
                seed,
                cases: 0,
                failures: Vec::new(),
                max_error: 0.0,
            },
        }
    }

    /// Records `error` against `bound`; `witness` is built only on failure.
    fn check(&mut self, property: &str, error: f64, bound: f64, witness: impl FnOnce() -> Value) {
        if error.is_finite() {
            self.report.max_error = self.report.max_error.max(error);
        }
        if !(error <= bound) {
            self.fail(
                property,
                json!({ "error": error, "bound": bound, "case": witness() }),
            );
        }
    }

    fn fail(&mut self, property: &str, detail: Value) {
        self.report
            .failures
            .push(json!({ "property": property, "detail": detail }));
    }

    fn outcome<T>(&mut self, property: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(
                    property,
                    serde_json::to_value(e.report()).unwrap_or(Value::Null),
                );
                None
            }
        }
    }
}

/// Default number of cases per suite.
pub fn default_cases(suite: &str) -> usize {
    match suite {
        "nu-validity" => 10_000,
        "charts" | "nu-morphism" => 500,
        _ => 1000,
    }
}

pub fn run_suite(suite: &str, seed: u64, cases: usize, tol: &Tolerances) -> Result<SuiteReport> {
    let mut t = Tracker::new(suite, seed);
    let mut rng = seeded(seed);
    for _ in 0..cases {
        t.report.cases += 1;
        match suite {
            "d2-axioms" => d2_case(&mut t, &mut rng, tol)?,
            "sc-axioms" => sc_case(&mut t, &mut rng, tol)?,
            "charts" => chart_case(&mut t, &mut rng, tol)?,
            "nu-morphism" => morphism_case(&mut t, &mut rng)?,
            "nu-validity" => validity_case(&mut t, &mut rng, tol)?,
            "section" => section_case(&mut t, &mut rng, tol)?,
            "mu-symmetry" => mu_case(&mut t, &mut rng, tol)?,
            other => {
                return Err(Error::Parameter(format!(
                    "unknown suite '{other}'; expected one of {}",
                    SUITES.join(", ")
                )))
            }
        }
    }
    Ok(t.report)
}

fn disks<R: Rng>(rng: &mut R, max: usize) -> Result<DiskConfiguration> {
    let n = rng.gen_range(1..=max);
    random_disks(rng, n, DEFAULT_MAX_ATTEMPTS)
}

fn d2_case<R: Rng>(t: &mut Tracker, rng: &mut R, tol: &Tolerances) -> Result<()> {
    const BOUND: f64 = 1e-9;
    let (a, b, c) = (disks(rng, 5)?, disks(rng, 3)?, disks(rng, 3)?);
    let w = || json!({ "a": a, "b": b, "c": c });
    let i = rng.gen_range(0..a.len());
    let j = rng.gen_range(0..b.len());

    let ab = a.compose(i, &b)?;
    let lhs = ab.compose(i + j, &c)?;
    let rhs = a.compose(i, &b.compose(j, &c)?)?;
    t.check("sequential associativity", lhs.distance(&rhs), BOUND, w);
    for d in [&ab, &lhs, &rhs] {
        let v = d.violations(tol.geo);
        if !v.is_empty() {
            t.fail(
                "composite validity",
                json!({ "violations": v, "a": a, "b": b, "c": c }),
            );
        }
    }

    if a.len() >= 2 {
        let k = (i + 1 + rng.gen_range(0..a.len() - 1)) % a.len();
        let (lo, hi) = (i.min(k), i.max(k));
        let lhs = a.compose(lo, &b)?.compose(hi + b.len() - 1, &c)?;
        let rhs = a.compose(hi, &c)?.compose(lo, &b)?;
        t.check("parallel commutativity", lhs.distance(&rhs), BOUND, w);
    }

    let id = DiskConfiguration::identity();
    t.check("right unit", a.compose(i, &id)?.distance(&a), BOUND, w);
    t.check("left unit", id.compose(0, &a)?.distance(&a), BOUND, w);

    let sigma = Permutation::random(a.len(), rng);
    let tau = Permutation::random(b.len(), rng);
    let lhs = a.act_permutation(&sigma)?.compose(i, &b)?;
    let rhs = a
        .compose(sigma.apply(i), &b)?
        .act_permutation(&sigma.block_insert(i, b.len())?)?;
    t.check("equivariance (outer)", lhs.distance(&rhs), BOUND, w);
    let lhs = a.compose(i, &b.act_permutation(&tau)?)?;
    let rhs = a
        .compose(i, &b)?
        .act_permutation(&Permutation::inner_block(a.len(), i, &tau)?)?;
    t.check("equivariance (inner)", lhs.distance(&rhs), BOUND, w);
    Ok(())
}

fn sc<R: Rng>(rng: &mut R) -> Result<SCConfiguration> {
    loop {
        let (n, m) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        if n + m > 0 {
            return random_sc(rng, n, m, DEFAULT_MAX_ATTEMPTS);
        }
    }
}

fn sc_case<R: Rng>(t: &mut Tracker, rng: &mut R, tol: &Tolerances) -> Result<()> {
    const BOUND: f64 = 1e-9;
    let a = sc(rng)?;
    let (n, m) = a.arity();
    let d = disks(rng, 2)?;
    let w = || json!({ "a": a, "d": d });

    if n > 0 {
        let i = rng.gen_range(0..n);
        // flattening identity against the two-step 𝒟₂ composition
        let glued = a.compose_closed(i, &d)?;
        let flat = a.to_disks().compose(i, &d)?;
        let flat = flat.compose(n + d.len() - 1 + i, &d.conjugate())?;
        t.check(
            "flattening of closed composition",
            glued.to_disks().distance(&flat),
            1e-12,
            w,
        );
        t.check(
            "closed unit",
            a.compose_closed(i, &DiskConfiguration::identity())?
                .distance(&a),
            BOUND,
            w,
        );
    }
    if m > 0 {
        let b = sc(rng)?;
        let i = rng.gen_range(0..m);
        let ab = a.compose_open(i, &b)?;
        t.check(
            "open unit",
            a.compose_open(i, &SCConfiguration::open_identity())?
                .distance(&a),
            BOUND,
            w,
        );
        let defect =
            crate::config_space::conjugation_defect(&ab.to_disks().centers(), &ab.pairing());
        t.check(
            "symmetry of open composite",
            defect,
            tol.geo,
            || json!({ "a": a, "b": b }),
        );
        let (bn, bm) = b.arity();
        if bm > 0 {
            let c = sc(rng)?;
            let j = rng.gen_range(0..bm);
            let lhs = ab.compose_open(i + j, &c)?;
            let rhs = a.compose_open(i, &b.compose_open(j, &c)?)?;
            t.check(
                "open associativity",
                lhs.distance(&rhs),
                BOUND,
                || json!({ "a": a, "b": b, "c": c }),
            );
        }
        if bn > 0 {
            let j = rng.gen_range(0..bn);
            let lhs = ab.compose_closed(n + j, &d)?;
            let rhs = a.compose_open(i, &b.compose_closed(j, &d)?)?;
            t.check(
                "mixed associativity",
                lhs.distance(&rhs),
                BOUND,
                || json!({ "a": a, "b": b, "d": d }),
            );
        }
        if bm > 0 {
            let sigma = Permutation::random(n, rng);
            let tau = Permutation::random(m, rng);
            let lhs = a.act(&sigma, &tau)?.compose_open(i, &b)?;
            let rhs = a.compose_open(tau.apply(i), &b)?.act(
                &sigma.direct_sum(&Permutation::identity(bn)),
                &tau.block_insert(i, bm)?,
            )?;
            t.check(
                "colored equivariance",
                lhs.distance(&rhs),
                BOUND,
                || json!({ "a": a, "b": b }),
            );
        }
    }
    Ok(())
}

fn chart_case<R: Rng>(t: &mut Tracker, rng: &mut R, tol: &Tolerances) -> Result<()> {
    let n = rng.gen_range(2..=5);
    let cp = random_collar_sample(rng, n, DEFAULT_MAX_ATTEMPTS)?;
    let w = || serde_json::to_value(&cp).unwrap_or(Value::Null);
    let (Some(one), Some(staged)) = (
        t.outcome("one-pass evaluation", cp.evaluate(tol)),
        t.outcome("staged evaluation", cp.evaluate_staged(tol)),
    ) else {
        return Ok(());
    };
    t.check("staged = one-pass", one.distance(&staged), 1e-9, w);
    let sigma = Permutation::random(n, rng);
    if let Some(r) = t.outcome(
        "equivariance",
        check_equivariance(std::slice::from_ref(&cp), &sigma, tol),
    ) {
        t.check("equivariance", r.max_error, 1e-12, w);
    }
    Ok(())
}

fn morphism_case<R: Rng>(t: &mut Tracker, rng: &mut R) -> Result<()> {
    let (n1, n2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let p = random_decorated_tree(rng, n1, DEFAULT_MAX_ATTEMPTS)?;
    let q = random_decorated_tree(rng, n2, DEFAULT_MAX_ATTEMPTS)?;
    let i = rng.gen_range(0..n1);
    let lhs = nu_boundary(&p.graft(i, &q)?);
    let rhs = nu_boundary(&p).compose(i, &nu_boundary(&q))?;
    if lhs != rhs {
        t.fail(
            "bit-exact morphism",
            json!({ "p": p, "i": i + 1, "q": q, "distance": lhs.distance(&rhs) }),
        );
    }
    t.report.max_error = t.report.max_error.max(lhs.distance(&rhs));
    Ok(())
}

fn validity_case<R: Rng>(t: &mut Tracker, rng: &mut R, tol: &Tolerances) -> Result<()> {
    let n = rng.gen_range(2..=6);
    let cp = random_collar_sample(rng, n, DEFAULT_MAX_ATTEMPTS)?;
    if t.outcome("nu validity", nu(&cp, &CollarParams::for_chart(&cp), tol))
        .is_none()
    {
        if let Some(last) = t.report.failures.last_mut() {
            last["case"] = serde_json::to_value(&cp).unwrap_or(Value::Null);
        }
    }
    Ok(())
}

fn section_case<R: Rng>(t: &mut Tracker, rng: &mut R, tol: &Tolerances) -> Result<()> {
    let n = rng.gen_range(2..=6);
    let c = random_normalized(rng, n, DEFAULT_MAX_ATTEMPTS)?;
    let w = || json!({ "points": c });
    let d1 = nu_interior(&c);
    t.check(
        "projection of the section",
        d1.project_centers()?.distance(&c),
        1e-12,
        w,
    );
    // a fiber-mate: same projected centers, after a random dilation and translation
    let a = rng.gen_range(0.2..0.6);
    let b =
        crate::config_space::PlanePoint::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
    let d2 = DiskConfiguration::from_disks_unchecked(
        d1.disks()
            .iter()
            .map(|d| {
                crate::little_disks::Disk::new(
                    d.center * a + b,
                    d.radius * a * rng.gen_range(0.5..=1.0),
                )
            })
            .collect(),
    );
    if d2.is_valid(tol.geo) {
        for k in 0..=20 {
            let delta = k as f64 / 20.0;
            t.outcome(
                "convex blend of fiber-mates",
                convex_blend(&d1, &d2, delta, tol),
            );
        }
    }
    Ok(())
}

fn mu_case<R: Rng>(t: &mut Tracker, rng: &mut R, tol: &Tolerances) -> Result<()> {
    let (p, q) = loop {
        let (p, q) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        if p + q > 0 {
            break (p, q);
        }
    };
    let cp = random_colored_chart(rng, p, q, 0.3, DEFAULT_MAX_ATTEMPTS)?;
    let params = CollarParams::for_chart(&cp.double()?);
    let w = || serde_json::to_value(&cp).unwrap_or(Value::Null);
    let Some(d) = t.outcome("mu", mu_disks(&cp, &params, tol)) else {
        return Ok(());
    };
    let pairing = crate::swiss_cheese::flattened_pairing(p, q);
    let defect = (0..d.len())
        .map(|k| {
            let (a, b) = (d.disks()[k], d.disks()[pairing.partner(k)]);
            (a.center - b.center.conj())
                .norm()
                .max((a.radius - b.radius).abs())
        })
        .fold(0.0, f64::max);
    t.check("conjugation symmetry", defect, 1e-12, w);
    Ok(())
}
