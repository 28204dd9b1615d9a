//! Named verification suites. Each suite returns a [`SuiteReport`] whose
//! checks are sorted by name; the `crit*` checks mirror the acceptance
//! battery and the remaining ones exercise the worked examples.

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::affine::{self, FieldError};
use crate::algebra::{AlgebraError, Element, GroupUnitary};
use crate::asymptotics::{self, AsymptoticsError, LemmaInput, WitnessTarget, HORIZON_SLACK};
use crate::matrix::{self, MatrixError, Scene};
use crate::report::{rational_value, CheckReport, SuiteReport};
use crate::scalar::GaussRat;
use crate::stallings::{self, CyclicSubgroup, Subgroup, SubgroupGraph};
use crate::words::{enumerate_ball, Word, WordError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; expected one of sec2, sec3, sec6, sec7, affine")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

type Result<T> = std::result::Result<T, SuiteError>;

pub const SUITES: [&str; 5] = ["affine", "sec2", "sec3", "sec6", "sec7"];

/// Parameters shared by all suites; each suite reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub rank: usize,
    /// Radius for scans and sampled supports.
    pub radius: usize,
    /// Length bound for the exhaustive witness sweep.
    pub witness_radius: usize,
    /// Random samples for the exact suites.
    pub samples: usize,
    /// Random unitary pairs per dimension for the matrix suites.
    pub matrix_samples: usize,
    pub seed: u64,
    /// Largest field order in the affine suite.
    pub field_bound: u64,
    /// Matrix dimensions; empty means the suite default.
    pub dims: Vec<usize>,
    pub restarts: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            rank: 2,
            radius: 3,
            witness_radius: 6,
            samples: 200,
            matrix_samples: 100,
            seed: 0,
            field_bound: 64,
            dims: Vec::new(),
            restarts: 4,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rank", self.rank),
            ("radius", self.radius),
            ("witness-radius", self.witness_radius),
            ("samples", self.samples),
            ("matrix-samples", self.matrix_samples),
            ("restarts", self.restarts),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(SuiteError::Config(format!("{name} must be positive")));
            }
        }
        if self.rank < 2 {
            return Err(SuiteError::Config("rank must be at least 2".into()));
        }
        if self.field_bound < 2 {
            return Err(SuiteError::Config("field bound must be at least 2".into()));
        }
        if self.dims.iter().any(|&n| n == 0 || n > 16) {
            return Err(SuiteError::Config("matrix dimensions must lie in 1..=16".into()));
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let checks = match name {
        "sec2" => sec2(config)?,
        "sec3" => sec3(config)?,
        "sec6" => sec6(config)?,
        "sec7" => sec7(config)?,
        "affine" => affine_suite(config)?,
        other => return Err(SuiteError::UnknownSuite(other.into())),
    };
    Ok(SuiteReport::new(name, config.seed, config.to_json(), checks))
}

fn summary(check: &str, equation: &str, inputs: Value, tested: usize, failures: &[Value]) -> CheckReport {
    CheckReport::new(check, equation)
        .inputs(inputs)
        .sides(json!(failures.len()), json!(0))
        .witness(json!({
            "tested": tested,
            "failures": failures.iter().take(10).cloned().collect::<Vec<_>>(),
        }))
        .pass(failures.is_empty() && tested > 0)
}

fn word(s: &str, rank: usize) -> Result<Word> {
    Ok(Word::parse(s, rank)?)
}

fn el(s: &str, rank: usize) -> Result<Element> {
    Ok(Element::parse(s, rank)?)
}

/// A random element supported on at most four words of length at most
/// `radius`, with small Gaussian-rational coefficients.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, rank: usize, radius: usize) -> Element {
    let terms = rng.random_range(1..=4);
    let mut x = Element::zero(rank);
    for _ in 0..terms {
        let len = rng.random_range(0..=radius);
        let w = Word::random(rng, rank, len);
        let re = GaussRat::from_ratio(rng.random_range(-3..=3), rng.random_range(1..=3));
        let im = if rng.random_bool(0.3) {
            GaussRat::from_ratio(rng.random_range(-2..=2), rng.random_range(1..=2))
        } else {
            GaussRat::zero()
        };
        let coef = &re + &(&im * &GaussRat::i());
        x = x.add(&Element::term(coef, w)).expect("same rank");
    }
    x
}

// ---------------------------------------------------------------- sec3

fn sec3(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let rank = cfg.rank;
    let a = Word::generator(rank, 1)?;
    let gp_a = CyclicSubgroup::new(a.clone());
    let mut checks = Vec::new();

    // exhaustive witness sweep over γ ∉ ⟨a⟩
    let one = rational_value(&BigRational::one());
    let mut failures = Vec::new();
    let mut tested = 0;
    for gamma in enumerate_ball(rank, cfg.witness_radius) {
        if gp_a.contains(&gamma)? {
            continue;
        }
        tested += 1;
        let r = asymptotics::check_thm33(&gamma, &gp_a)?;
        if !(r.pass && r.lhs == one && r.rhs == one) {
            failures.push(json!(gamma.to_string()));
        }
    }
    checks.push(summary(
        "crit01_witness_exhaustive",
        "3.13",
        json!({ "rank": rank, "max_length": cfg.witness_radius }),
        tested,
        &failures,
    ));

    // closed-form exceptional sets against brute force
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failures = Vec::new();
    let mut tested = 0;
    while tested < cfg.samples.max(500) {
        let (hl, kl) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let h = Word::random(&mut rng, rank, hl);
        let k = Word::random(&mut rng, rank, kl);
        if gp_a.contains(&h)? || gp_a.contains(&k)? {
            continue;
        }
        tested += 1;
        let closed = asymptotics::exceptional_exponents(&h, &k, &a)?;
        let mut brute = std::collections::BTreeSet::new();
        for m in -20i64..=20 {
            if gp_a.contains(&h.multiply(&a.pow(m))?.multiply(&k)?)? {
                brute.insert(m);
            }
        }
        if closed.len() > 1 || closed != brute {
            failures.push(json!({ "h": h.to_string(), "k": k.to_string() }));
        }
    }
    checks.push(summary(
        "crit02_exceptional_singleton",
        "3.1",
        json!({ "pairs": tested, "max_length": 5, "window": 20 }),
        tested,
        &failures,
    ));

    // scans
    let mut scan_fail = Vec::new();
    for p in 1..=3 {
        let found = stallings::normalizer_scan(&a, p, cfg.radius)?;
        if !found.is_empty() {
            scan_fail.push(json!({ "a": a.to_string(), "p": p, "found": found.len() }));
        }
    }
    let bb = word("bb", rank)?;
    let detected = stallings::normalizer_scan(&bb, 1, cfg.radius)?;
    let b = word("b", rank)?;
    if !detected.contains(&b) {
        scan_fail.push(json!({ "a": "bb", "p": 1, "missing": "b" }));
    }
    let mal_a = stallings::malnormal_violations(&gp_a, cfg.radius)?;
    if !mal_a.violations.is_empty() {
        scan_fail.push(json!({ "malnormal": "a", "violations": mal_a.violations.len() }));
    }
    let mal_bb = stallings::malnormal_violations(&CyclicSubgroup::new(bb.clone()), 1)?;
    if mal_bb.violations.is_empty() {
        scan_fail.push(json!({ "malnormal": "bb", "violations": 0 }));
    }
    checks.push(summary(
        "crit11_scans",
        "3.5",
        json!({ "radius": cfg.radius, "window": mal_a.window_formula }),
        6,
        &scan_fail,
    ));

    // confluence of folding and containment of generator products
    let mut failures = Vec::new();
    let mut tested = 0;
    for _ in 0..cfg.samples.min(100) {
        let count = rng.random_range(1..=3);
        let gens: Vec<Word> = (0..count)
            .map(|_| {
                let len = rng.random_range(1..=4);
                Word::random(&mut rng, rank, len)
            })
            .collect();
        let base = SubgroupGraph::build(rank, &gens)?;
        tested += 1;
        for _ in 0..20 {
            let mut shuffled: Vec<Word> = gens
                .iter()
                .map(|g| if rng.random_bool(0.5) { g.invert() } else { g.clone() })
                .collect();
            for i in (1..shuffled.len()).rev() {
                shuffled.swap(i, rng.random_range(0..=i));
            }
            if SubgroupGraph::build(rank, &shuffled)? != base {
                failures.push(json!(gens.iter().map(|g| g.to_string()).collect::<Vec<_>>()));
                break;
            }
        }
        let mut products = vec![Word::identity(rank)];
        for _ in 0..3 {
            let mut next = Vec::new();
            for p in &products {
                for g in &gens {
                    next.push(p.multiply(g)?);
                    next.push(p.multiply(&g.invert())?);
                }
            }
            products = next;
        }
        for p in &products {
            if !base.contains(p)? {
                failures.push(json!({ "product": p.to_string() }));
                break;
            }
        }
    }
    checks.push(summary(
        "stallings_confluence",
        "3.7",
        json!({ "subgroups": tested, "orders": 20 }),
        tested,
        &failures,
    ));

    // witness inequalities on the worked examples
    let unitary = |s: &str| -> Result<LemmaInput> { Ok(LemmaInput::Unitary(GroupUnitary::word(word(s, rank)?))) };
    let mut r = asymptotics::check_lemma32(&unitary("b")?, &el("B", rank)?, WitnessTarget::Generator(&a))?;
    r.check = "lemma32_unitary_b".into();
    checks.push(r);
    let mut r = asymptotics::check_lemma32(
        &LemmaInput::General(el("b + a", rank)?),
        &el("B + 2*b", rank)?,
        WitnessTarget::Generator(&a),
    )?;
    r.check = "lemma32_general".into();
    checks.push(r);

    // F_2 inside F_3: the free factor ⟨a, b⟩ and a witness off it
    let f3 = |s: &str| Word::parse(s, 3);
    let h = SubgroupGraph::build(3, &[f3("a")?, f3("b")?])?;
    let mut r = asymptotics::check_thm33(&f3("c")?, &h)?;
    r.check = "thm33_free_factor".into();
    checks.push(r);
    let mut r = asymptotics::check_lemma32(
        &LemmaInput::Unitary(GroupUnitary::word(f3("c")?)),
        &Element::parse("C + ab", 3)?,
        WitnessTarget::Graph { subgroup: &h, window: 4 },
    )?;
    r.check = "lemma32_free_factor".into();
    checks.push(r);
    Ok(checks)
}

// ---------------------------------------------------------------- sec6

fn sec6(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let rank = cfg.rank;
    let a = Word::generator(rank, 1)?;
    let gp_a = CyclicSubgroup::new(a.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();

    let samples: Vec<(Element, Element)> = (0..cfg.samples)
        .map(|_| {
            (
                random_element(&mut rng, rank, cfg.radius),
                random_element(&mut rng, rank, cfg.radius),
            )
        })
        .collect();

    let mut decay_fail = Vec::new();
    let mut bound_fail = Vec::new();
    let mut witness_fail = Vec::new();
    for (x, y) in &samples {
        let cert = asymptotics::decay_horizon(x, y, &a)?;
        if !cert.verify(x, y, &a, HORIZON_SLACK)? {
            decay_fail.push(json!({ "x": x.to_string(), "y": y.to_string() }));
        }
        for k in -(cert.horizon as i64 + 2)..=(cert.horizon as i64 + 2) {
            let (first, second) = asymptotics::phi_norm_bounds_hold(x, y, &a, k)?;
            if !(first && second) {
                bound_fail.push(json!({ "x": x.to_string(), "y": y.to_string(), "k": k }));
                break;
            }
        }
        let r = asymptotics::check_prop65(x, y, &a)?;
        if !r.pass {
            witness_fail.push(json!({ "x": x.to_string(), "y": y.to_string() }));
        }
    }
    checks.push(summary(
        "crit03_phi_decay",
        "6.6",
        json!({ "samples": samples.len(), "radius": cfg.radius, "slack": HORIZON_SLACK }),
        samples.len(),
        &decay_fail,
    ));
    checks.push(summary(
        "crit03_phi_bounds",
        "6.10",
        json!({ "samples": samples.len(), "operator_norm_surrogate": "l1" }),
        samples.len(),
        &bound_fail,
    ));
    checks.push(summary(
        "crit04_prop65_samples",
        "6.11",
        json!({ "samples": samples.len() }),
        samples.len(),
        &witness_fail,
    ));
    let mut r = asymptotics::check_prop65(&el("B", rank)?, &el("b", rank)?, &a)?;
    r.check = "crit04_prop65_equality".into();
    checks.push(r);

    // Cesàro surrogate: ‖n⁻¹Σ a⁻ʲgaʲ‖₂² = 1/n
    let mut failures = Vec::new();
    let mut tested = 0;
    for g in enumerate_ball(rank, cfg.radius + 1) {
        if gp_a.contains(&g)? {
            continue;
        }
        let x = Element::from_word(g.clone());
        for n in 1..=64usize {
            tested += 1;
            let avg = x.cesaro_average(&a, n)?;
            if avg.norm2_sq() != BigRational::new(1.into(), (n as i64).into()) {
                failures.push(json!({ "g": g.to_string(), "n": n }));
            }
        }
    }
    checks.push(summary(
        "crit05_cesaro",
        "6.2",
        json!({ "radius": cfg.radius + 1, "max_n": 64 }),
        tested,
        &failures,
    ));

    // successive and same-power limits
    let mut multi_fail = Vec::new();
    let mut free_fail = Vec::new();
    let count = cfg.samples.min(20);
    for _ in 0..count {
        let xs: Vec<Element> = (0..3).map(|_| random_element(&mut rng, rank, 2)).collect();
        let m = asymptotics::multivar_decay(&xs, &a, 2)?;
        if !m.pass() {
            multi_fail.push(json!(xs.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
        }
        let f = asymptotics::freeness_decay(&xs, &a, 12)?;
        // past the last nonzero exponent the defect stays zero up to kmax
        if f.horizon > 10 {
            free_fail.push(json!({
                "xs": xs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "horizon": f.horizon,
            }));
        }
    }
    checks.push(summary("rem68_successive", "6.19", json!({ "samples": count }), count, &multi_fail));
    checks.push(summary("rem68_same_power", "6.20", json!({ "samples": count, "kmax": 12 }), count, &free_fail));

    let mut r = asymptotics::check_rem66(
        &[el("B", rank)?, el("a", rank)?],
        &[el("b", rank)?, el("bb", rank)?],
        &a,
    )?;
    r.check = "rem66_family".into();
    checks.push(r);

    let (x, y) = (el("B", rank)?, el("b", rank)?);
    let phi0 = asymptotics::phi_k(&x, &y, &a, 0)?;
    let mut vanishes = true;
    for k in 1..=5 {
        vanishes &= asymptotics::phi_k(&x, &y, &a, k)?.is_zero();
        vanishes &= asymptotics::phi_k(&x, &y, &a, -k)?.is_zero();
    }
    checks.push(
        CheckReport::new("thm62_phi_example", "6.6")
            .inputs(json!({ "x": "B", "y": "b", "k": 0 }))
            .sides(json!(phi0.to_string()), json!("e"))
            .witness(json!({ "vanishes_for_0_lt_abs_k_le_5": vanishes }))
            .pass(phi0 == Element::identity(rank) && vanishes),
    );
    Ok(checks)
}

// ---------------------------------------------------------------- sec2

fn dims(cfg: &SuiteConfig, default: &[usize]) -> Vec<usize> {
    if cfg.dims.is_empty() {
        default.to_vec()
    } else {
        cfg.dims.clone()
    }
}

fn sec2(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failures = Vec::new();
    let mut tested = 0;
    let mut worst_chain: f64 = 0.0;
    for n in dims(cfg, &[2, 3, 4, 5, 6, 7, 8]) {
        let scene = Scene::new(n)?;
        for k in 0..cfg.matrix_samples {
            let u = matrix::haar_unitary(n, &mut rng);
            let v = matrix::haar_unitary(n, &mut rng);
            let r = scene.check_prop21(&u, &[v], 1, cfg.seed ^ (k as u64))?;
            tested += 1;
            worst_chain = worst_chain.max(
                r.witness["chain_max"].as_f64().unwrap_or(f64::NAN)
                    - r.rhs.as_f64().unwrap_or(f64::NAN),
            );
            if !r.pass {
                failures.push(json!({ "n": n, "sample": k }));
            }
        }
    }
    let mut r = summary(
        "crit06_prop21",
        "2.6",
        json!({ "pairs_per_dimension": cfg.matrix_samples }),
        tested,
        &failures,
    )
    .matrix_model(matrix::OPT_TOL);
    r.witness["worst_chain_margin"] = json!(worst_chain);
    checks.push(r);

    // δ bound on generated partial isometries plus the two certificates
    let mut failures = Vec::new();
    let mut tested = 0;
    for n in dims(cfg, &[2, 4, 6, 8]).into_iter().filter(|n| n % 2 == 0) {
        let scene = Scene::new(n)?;
        for (_, _, v) in matrix::chain_configurations(n, cfg.seed) {
            tested += 1;
            let (_, r) = scene.delta_estimate(&v, cfg.seed)?;
            if !r.pass {
                failures.push(json!({ "n": n, "v": r.inputs["v"].clone() }));
            }
        }
    }
    // odd dimensions admit no flip with equal corners
    if tested > 0 {
        checks.push(
            summary("crit08_delta_bound", "2.10", json!({}), tested, &failures).matrix_model(matrix::OPT_TOL),
        );
    }
    let s4 = Scene::new(4)?;
    let h = matrix::partial_isometry(4, &[0, 1], &[2, 3], &matrix::hadamard());
    let (delta, mut r) = s4.delta_estimate(&h, cfg.seed)?;
    r.check = "crit08_delta_hadamard".into();
    r.pass &= (delta - 0.5f64.sqrt()).abs() <= matrix::OPT_TOL;
    checks.push(r);
    let plain = matrix::unit(4, 0, 2) + matrix::unit(4, 1, 3);
    let (delta, mut r) = s4.delta_estimate(&plain, cfg.seed)?;
    r.check = "crit08_delta_cartan".into();
    r.pass &= delta == 0.0;
    checks.push(r);

    for n in dims(cfg, &[2, 4]).into_iter().filter(|n| n % 2 == 0) {
        let (_, _, mut r) = Scene::new(n)?.flip_unitary(&(0..n / 2).collect::<Vec<_>>())?;
        r.check = format!("flip_unitary_n{n}");
        checks.push(r);
    }
    for n in dims(cfg, &[2, 3, 4]) {
        let (_, mut r) = Scene::new(n)?.alpha_probe(cfg.matrix_samples.min(200), cfg.restarts, cfg.seed);
        r.check = format!("alpha_probe_n{n}");
        checks.push(r);
    }
    Ok(checks)
}

// ---------------------------------------------------------------- sec7

fn sec7(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    let mut tested = 0;
    for n in dims(cfg, &[2, 4, 6, 8]).into_iter().filter(|n| n % 2 == 0) {
        let scene = Scene::new(n)?;
        for (k, (p, q, v)) in matrix::chain_configurations(n, cfg.seed).into_iter().enumerate() {
            tested += 1;
            let r = scene.check_thm71_chain(&p, &q, &v, cfg.restarts, cfg.seed.wrapping_add(k as u64))?;
            if !r.pass {
                failures.push(json!({ "n": n, "p": p, "q": q, "witness": r.witness }));
            }
        }
    }
    if tested > 0 {
        checks.push(
            summary("crit07_thm71_chain", "7.13", json!({}), tested, &failures).matrix_model(matrix::EXACT_TOL),
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for n in dims(cfg, &[2, 3, 4]) {
        let d = matrix::diagonal_generators(n);
        let mut r = matrix::check_lemma53(n, &d, &d, cfg.restarts, cfg.seed);
        r.check = format!("lemma53_equal_n{n}");
        checks.push(r);
        let u = matrix::haar_unitary(n, &mut rng);
        let b: Vec<_> = d.iter().map(|e| &u * e * u.adjoint()).collect();
        let mut r = matrix::check_lemma53(n, &d, &b, cfg.restarts, cfg.seed);
        r.check = format!("lemma53_rotated_n{n}");
        checks.push(r);

        let x = matrix::ginibre(n, &mut rng);
        let run = matrix::dixmier_average(&d, &x, 80, cfg.seed);
        let last = *run.distances.last().expect("at least one distance");
        checks.push(
            CheckReport::new(format!("dixmier_n{n}"), "5.18")
                .inputs(json!({ "n": n, "iterations": 80 }))
                .sides(json!(last), json!(1e-6))
                .witness(json!({ "monotone": run.monotone(), "initial": run.distances[0] }))
                .pass(run.monotone() && last < 1e-6)
                .matrix_model(1e-6),
        );

        let e = matrix::LinearMap::diag_expectation(n);
        let samples: Vec<_> = (0..6).map(|_| matrix::ginibre(n, &mut rng)).collect();
        let mut r = matrix::check_lemma71_maps(&e, &e.complement(), &samples, cfg.restarts, cfg.seed)?;
        r.check = format!("lemma71_diag_n{n}");
        checks.push(r);
    }
    Ok(checks)
}

// ---------------------------------------------------------------- affine

fn affine_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let mut checks = Vec::new();
    let mut mal_fail = Vec::new();
    let mut icc_fail = Vec::new();
    let stages = affine::stages_up_to(cfg.field_bound);
    let mut polys = Vec::new();
    for &(p, d) in &stages {
        let r = affine::check_malnormal(p, d)?;
        polys.push(json!({ "stage": format!("{p}^{d}"), "polynomial": r.inputs["polynomial"].clone() }));
        if !r.pass {
            mal_fail.push(json!(format!("{p}^{d}")));
        }
        let group = affine::AffineGroup::new(p, d)?;
        let f = &group.field;
        let t = group.map(f.one(), f.one())?;
        let size = group.conjugacy_class_size(&t)?;
        if size != f.order() as usize - 1 {
            icc_fail.push(json!({ "stage": format!("{p}^{d}"), "class": size }));
        }
    }
    let mut r = summary(
        "crit09_affine_malnormal",
        "3.8",
        json!({ "bound": cfg.field_bound, "stages": stages.len() }),
        stages.len(),
        &mal_fail,
    );
    r.witness["polynomials"] = json!(polys);
    checks.push(r);
    checks.push(summary(
        "crit09_affine_translation_class",
        "3.8",
        json!({ "bound": cfg.field_bound }),
        stages.len(),
        &icc_fail,
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            witness_radius: 3,
            samples: 20,
            matrix_samples: 5,
            field_bound: 16,
            dims: vec![2, 4],
            restarts: 2,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn suites_pass_small() {
        for name in SUITES {
            let r = run_suite(name, &small()).unwrap();
            assert!(r.pass, "{name}: {}", r.to_json_pretty());
            let names: Vec<_> = r.checks.iter().map(|c| c.check.clone()).collect();
            let mut sorted = names.clone();
            sorted.sort();
            assert_eq!(names, sorted);
        }
    }

    #[test]
    fn byte_stable() {
        let a = run_suite("sec6", &small()).unwrap().to_json_pretty();
        let b = run_suite("sec6", &small()).unwrap().to_json_pretty();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(matches!(run_suite("sec9", &small()), Err(SuiteError::UnknownSuite(_))));
        let bad = SuiteConfig { rank: 1, ..small() };
        assert!(matches!(run_suite("sec3", &bad), Err(SuiteError::Config(_))));
    }
}
