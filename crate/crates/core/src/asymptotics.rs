//! Exceptional exponent sets, decay horizons of the asymptotic-homomorphism
//! defect, and exact witness checks for the strong-singularity inequalities,
//! all over the cyclic subgroup generated by a free generator `a` (or, where
//! noted, an arbitrary finitely generated subgroup).

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{AlgebraError, Element};
use crate::report::{bracket_value, rational_value, CheckReport};
use crate::scalar::sqrt_bounds;
use crate::stallings::{CyclicSubgroup, Subgroup, SubgroupGraph};
use crate::words::{Letter, Word, WordError};

/// Extra exponents beyond the horizon checked by [`DecayCertificate::verify`].
pub const HORIZON_SLACK: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0} is not a single free generator")]
    NotAGenerator(String),
    #[error("{which} = {word} lies in the subgroup; its exceptional set is all of Z")]
    InSubgroup { which: &'static str, word: String },
    #[error("{0}")]
    Precondition(String),
}

impl From<WordError> for AsymptoticsError {
    fn from(e: WordError) -> Self {
        AsymptoticsError::Algebra(AlgebraError::Word(e))
    }
}

type Result<T> = std::result::Result<T, AsymptoticsError>;

fn generator_letter(a: &Word) -> Result<Letter> {
    match a.letters() {
        [l] if !l.is_inverse() => Ok(*l),
        _ => Err(AsymptoticsError::NotAGenerator(a.to_string())),
    }
}

fn cyclic(a: &Word) -> Result<CyclicSubgroup> {
    generator_letter(a)?;
    Ok(CyclicSubgroup::new(a.clone()))
}

fn signed_run(letter: Letter, gen: Letter) -> Option<i64> {
    if letter == gen {
        Some(1)
    } else if letter == gen.inverse() {
        Some(-1)
    } else {
        None
    }
}

/// Splits `h = h₀·aˢ` with `h₀` not ending in `a±¹`.
pub fn a_run_decompose(h: &Word, a: &Word) -> Result<(Word, i64)> {
    let gen = generator_letter(a)?;
    let letters = h.letters();
    let mut s = 0;
    let mut cut = letters.len();
    while cut > 0 {
        match signed_run(letters[cut - 1], gen) {
            Some(step) => {
                s += step;
                cut -= 1;
            }
            None => break,
        }
    }
    Ok((Word::from_letters(letters[..cut].iter().copied(), h.rank())?, s))
}

/// Splits `k = aᵗ·k₀` with `k₀` not starting with `a±¹`.
pub fn a_run_prefix(k: &Word, a: &Word) -> Result<(i64, Word)> {
    let (tail, t) = a_run_decompose(&k.invert(), a)?;
    Ok((-t, tail.invert()))
}

/// All `m` with `h·aᵐ·k ∈ Gp(a)`, by the closed form: writing `h = h₀aˢ` and
/// `k = aᵗk₀`, the set is `{−s−t}` when `h₀k₀ ∈ Gp(a)` and empty otherwise.
pub fn exceptional_exponents(h: &Word, k: &Word, a: &Word) -> Result<BTreeSet<i64>> {
    let group = cyclic(a)?;
    if group.contains(h)? {
        return Err(AsymptoticsError::InSubgroup {
            which: "h",
            word: h.to_string(),
        });
    }
    if group.contains(k)? {
        return Err(AsymptoticsError::InSubgroup {
            which: "k",
            word: k.to_string(),
        });
    }
    let (h0, s) = a_run_decompose(h, a)?;
    let (t, k0) = a_run_prefix(k, a)?;
    let mut set = BTreeSet::new();
    if group.contains(&h0.multiply(&k0)?)? {
        set.insert(-s - t);
    }
    Ok(set)
}

/// All `g ∈ H` with `|g| ≤ window` and `h·g·k ∈ H`, for `h, k ∉ H`, by
/// bounded search. Malnormality of `H` caps the answer at one element.
pub fn exceptional_elements<S: Subgroup + ?Sized>(
    h: &Word,
    k: &Word,
    subgroup: &S,
    window: usize,
) -> Result<Vec<Word>> {
    if subgroup.contains(h)? {
        return Err(AsymptoticsError::InSubgroup {
            which: "h",
            word: h.to_string(),
        });
    }
    if subgroup.contains(k)? {
        return Err(AsymptoticsError::InSubgroup {
            which: "k",
            word: k.to_string(),
        });
    }
    let mut out = Vec::new();
    for g in subgroup.elements_up_to(window) {
        if subgroup.contains(&h.multiply(&g)?.multiply(k)?)? {
            out.push(g);
        }
    }
    Ok(out)
}

fn power_element(a: &Word, k: i64) -> Element {
    Element::from_word(a.pow(k))
}

/// `φ_k(x, y) = E(x aᵏ y) − E(x)E(y)aᵏ` with `E` onto the algebra of `Gp(a)`.
pub fn phi_k(x: &Element, y: &Element, a: &Word, k: i64) -> Result<Element> {
    let group = cyclic(a)?;
    let ak = power_element(a, k);
    let first = x.multiply(&ak)?.multiply(y)?.expect(&group)?;
    let second = x
        .expect(&group)?
        .multiply(&y.expect(&group)?)?
        .multiply(&ak)?;
    Ok(first.sub(&second)?)
}

/// One support pair `(h, k)` and the exponent at which `h·aᵐ·k ∈ Gp(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionWitness {
    pub left: Word,
    pub right: Word,
    pub exponent: i64,
}

/// Exact finite decay horizon: `φ_k(x, y) = 0` for every `|k| ≥ horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecayCertificate {
    pub horizon: u64,
    pub exceptions: BTreeSet<i64>,
    pub witnesses: Vec<ExceptionWitness>,
}

impl DecayCertificate {
    /// Recomputes `φ_k` for `horizon ≤ |k| ≤ horizon + slack`.
    pub fn verify(&self, x: &Element, y: &Element, a: &Word, slack: u64) -> Result<bool> {
        for m in self.horizon..=self.horizon + slack {
            for k in [m as i64, -(m as i64)] {
                if !phi_k(x, y, a, k)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "K": self.horizon,
            "exceptions": self.exceptions.iter().collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(|w| json!({
                "left": w.left.to_string(),
                "right": w.right.to_string(),
                "m": w.exponent,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `K = 1 + max |m|` over the exceptional exponents of support pairs outside
/// `Gp(a)`, or `0` when there are none.
pub fn decay_horizon(x: &Element, y: &Element, a: &Word) -> Result<DecayCertificate> {
    let group = cyclic(a)?;
    let mut exceptions = BTreeSet::new();
    let mut witnesses = Vec::new();
    for h in x.support() {
        if group.contains(h)? {
            continue;
        }
        for k in y.support() {
            if group.contains(k)? {
                continue;
            }
            for m in exceptional_exponents(h, k, a)? {
                exceptions.insert(m);
                witnesses.push(ExceptionWitness {
                    left: h.clone(),
                    right: k.clone(),
                    exponent: m,
                });
            }
        }
    }
    let horizon = exceptions
        .iter()
        .map(|m| m.unsigned_abs() + 1)
        .max()
        .unwrap_or(0);
    Ok(DecayCertificate {
        horizon,
        exceptions,
        witnesses,
    })
}

/// `x₁ a^{k₁} x₂ ⋯ a^{kₙ} x_{n+1}`.
pub fn interleave(xs: &[Element], a: &Word, ks: &[i64]) -> Result<Element> {
    debug_assert_eq!(xs.len(), ks.len() + 1);
    let mut acc = xs[0].clone();
    for (x, &k) in xs[1..].iter().zip(ks) {
        acc = acc.multiply(&power_element(a, k))?.multiply(x)?;
    }
    Ok(acc)
}

/// `E(x₁a^{k₁}⋯a^{kₙ}x_{n+1}) − E(x₁)⋯E(x_{n+1}) a^{Σk}`.
pub fn multivar_defect(xs: &[Element], a: &Word, ks: &[i64]) -> Result<Element> {
    let group = cyclic(a)?;
    let first = interleave(xs, a, ks)?.expect(&group)?;
    let mut second = Element::identity(a.rank());
    for x in xs {
        second = second.multiply(&x.expect(&group)?)?;
    }
    let second = second.multiply(&power_element(a, ks.iter().sum()))?;
    Ok(first.sub(&second)?)
}

/// Successive horizons for the iterated limit: the outermost exponent
/// vanishes beyond `horizons[0]`, and for every tested prefix the next
/// exponent vanishes beyond the recorded inner horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivarReport {
    /// Largest horizon observed at each depth over the tested prefixes.
    pub horizons: Vec<u64>,
    pub prefixes_tested: usize,
    pub failures: Vec<Vec<i64>>,
}

impl MultivarReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies the iterated-limit decay exactly on a window of `window + 1`
/// exponents of each sign past every horizon.
pub fn multivar_decay(xs: &[Element], a: &Word, window: u64) -> Result<MultivarReport> {
    if xs.len() < 2 {
        return Err(AsymptoticsError::Precondition(
            "multivariable decay needs at least two elements".into(),
        ));
    }
    cyclic(a)?;
    let mut report = MultivarReport {
        horizons: vec![0; xs.len() - 1],
        prefixes_tested: 0,
        failures: Vec::new(),
    };
    multivar_level(xs, a, window, &mut Vec::new(), &mut report)?;
    Ok(report)
}

fn multivar_level(
    xs: &[Element],
    a: &Word,
    window: u64,
    prefix: &mut Vec<i64>,
    report: &mut MultivarReport,
) -> Result<()> {
    let depth = prefix.len();
    let head = interleave(&xs[..depth + 1], a, prefix)?;
    let horizon = decay_horizon(&head, &xs[depth + 1], a)?.horizon;
    report.horizons[depth] = report.horizons[depth].max(horizon);
    report.prefixes_tested += 1;
    for m in horizon..=horizon + window {
        for k in [m as i64, -(m as i64)] {
            prefix.push(k);
            if depth + 2 == xs.len() {
                if !multivar_defect(xs, a, prefix)?.is_zero() {
                    report.failures.push(prefix.clone());
                }
            } else {
                multivar_level(xs, a, window, prefix, report)?;
            }
            prefix.pop();
        }
    }
    Ok(())
}

/// Same-power freeness defect over `1 ≤ |k| ≤ kmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreenessReport {
    /// Smallest `K` with zero defect for all `K ≤ |k| ≤ kmax`.
    pub horizon: u64,
    pub kmax: u64,
    pub nonzero: Vec<i64>,
}

pub fn freeness_decay(xs: &[Element], a: &Word, kmax: u64) -> Result<FreenessReport> {
    if xs.len() < 2 {
        return Err(AsymptoticsError::Precondition(
            "freeness decay needs at least two elements".into(),
        ));
    }
    let n = xs.len() - 1;
    let mut nonzero = Vec::new();
    for m in 0..=kmax as i64 {
        for k in if m == 0 { vec![0] } else { vec![-m, m] } {
            if !multivar_defect(xs, a, &vec![k; n])?.is_zero() {
                nonzero.push(k);
            }
        }
    }
    let horizon = nonzero
        .iter()
        .map(|k| k.unsigned_abs() + 1)
        .max()
        .unwrap_or(0);
    Ok(FreenessReport {
        horizon,
        kmax,
        nonzero,
    })
}

fn real_trace(x: &Element) -> Result<BigRational> {
    let t = x.trace();
    if !t.im.is_zero() {
        return Err(AsymptoticsError::Precondition(format!(
            "expected a real trace, found {t}"
        )));
    }
    Ok(t.re)
}

/// `g = aᵐ` satisfying both `E(ugv) = E(u)gE(v)` and
/// `E(u*u g vv*) = E(u*u)gE(vv*)`; `m` is the first of `0, 1, −1, 2, −2, …`
/// outside both exceptional sets and is then checked directly.
pub fn witness_g(u: &Element, v: &Element, a: &Word) -> Result<(Word, i64)> {
    let group = cyclic(a)?;
    let uu = u.adjoint().multiply(u)?;
    let vv = v.multiply(&v.adjoint())?;
    let mut avoid = decay_horizon(u, v, a)?.exceptions;
    avoid.extend(decay_horizon(&uu, &vv, a)?.exceptions);
    let bound = avoid.iter().map(|m| m.unsigned_abs()).max().unwrap_or(0) as i64 + 1;
    for m in (0..=bound).flat_map(|j| if j == 0 { vec![0] } else { vec![j, -j] }) {
        if avoid.contains(&m) {
            continue;
        }
        let g = a.pow(m);
        if multiplicative_at(u, v, &g, &group)? && multiplicative_at(&uu, &vv, &g, &group)? {
            return Ok((g, m));
        }
    }
    Err(AsymptoticsError::Precondition(
        "no admissible power found past the exceptional sets".into(),
    ))
}

/// `E(x g y) == E(x) g E(y)`.
fn multiplicative_at<S: Subgroup + ?Sized>(x: &Element, y: &Element, g: &Word, h: &S) -> Result<bool> {
    let ge = Element::from_word(g.clone());
    let lhs = x.multiply(&ge)?.multiply(y)?.expect(h)?;
    let rhs = x.expect(h)?.multiply(&ge)?.multiply(&y.expect(h)?)?;
    Ok(lhs == rhs)
}

/// Bounded search for `g ∈ H`, `|g| ≤ window`, satisfying both witness equations.
pub fn witness_in_subgroup<S: Subgroup + ?Sized>(
    u: &Element,
    v: &Element,
    subgroup: &S,
    window: usize,
) -> Result<Word> {
    let uu = u.adjoint().multiply(u)?;
    let vv = v.multiply(&v.adjoint())?;
    for g in subgroup.elements_up_to(window) {
        if multiplicative_at(u, v, &g, subgroup)? && multiplicative_at(&uu, &vv, &g, subgroup)? {
            return Ok(g);
        }
    }
    Err(AsymptoticsError::Precondition(format!(
        "no witness of length ≤ {window} in the subgroup"
    )))
}

/// The subgroup whose algebra is the relative commutant `N' ∩ M` of
/// `N = VN(H)` in the free group factor. Centralizers in free groups are
/// cyclic, so a nonabelian `H` has scalar relative commutant, a cyclic
/// `H = ⟨w⟩` has relative commutant generated by the root of `w`, and the
/// trivial subgroup has the whole algebra.
pub fn relative_commutant(h: &SubgroupGraph) -> Result<SubgroupGraph> {
    let basis = h.free_basis();
    let rank = h.rank();
    let gens = match basis.len() {
        0 => (1..=rank)
            .map(|i| Word::generator(rank, i))
            .collect::<std::result::Result<Vec<_>, _>>()?,
        1 => vec![basis[0].root_power()?.0],
        _ => Vec::new(),
    };
    Ok(SubgroupGraph::build(rank, &gens)?)
}

/// Left argument of the witness inequality for the strong-singularity lemma.
#[derive(Debug, Clone)]
pub enum LemmaInput {
    /// A group-element unitary; the right-hand side drops the correction term.
    Unitary(crate::algebra::GroupUnitary),
    General(Element),
}

/// Where the witness `g` is searched for.
pub enum WitnessTarget<'a> {
    /// `Gp(a)` for a free generator `a`, with closed-form exceptional sets.
    Generator(&'a Word),
    /// Any finitely generated subgroup; bounded search up to `window`.
    Graph { subgroup: &'a SubgroupGraph, window: usize },
}

/// Verifies the witness form of the lemma: for the selected `g`,
/// `‖(I−E)(u g v)‖₂²` is compared with
/// `tr[E(vv*) − E(v)E(v)*]` (unitary `u`) or with the general right-hand
/// side involving `E_{N'∩M}(u*u)` (arbitrary `u`, certified brackets for the
/// square roots).
pub fn check_lemma32(u: &LemmaInput, v: &Element, target: WitnessTarget<'_>) -> Result<CheckReport> {
    let u_el = match u {
        LemmaInput::Unitary(w) => w.to_element(),
        LemmaInput::General(x) => x.clone(),
    };
    let (g, subgroup, commutant, target_json): (Word, Box<dyn Subgroup>, Box<dyn Subgroup>, Value) =
        match target {
            WitnessTarget::Generator(a) => {
                let (g, m) = witness_g(&u_el, v, a)?;
                // a free generator is prime, so ⟨a⟩ is its own centralizer
                (
                    g,
                    Box::new(cyclic(a)?),
                    Box::new(cyclic(a)?),
                    json!({ "generator": a.to_string(), "m": m }),
                )
            }
            WitnessTarget::Graph { subgroup, window } => {
                let g = witness_in_subgroup(&u_el, v, subgroup, window)?;
                let gens: Vec<String> = subgroup.generators().iter().map(|w| w.to_string()).collect();
                (
                    g,
                    Box::new(subgroup.clone()),
                    Box::new(relative_commutant(subgroup)?),
                    json!({ "subgroup": gens, "window": window }),
                )
            }
        };
    let ge = Element::from_word(g.clone());
    let ugv = u_el.multiply(&ge)?.multiply(v)?;
    let lhs = ugv.expect_complement(subgroup.as_ref())?.norm2_sq();

    let vv = v.multiply(&v.adjoint())?;
    let ev = v.expect(subgroup.as_ref())?;
    let ev_ev = ev.multiply(&ev.adjoint())?;
    let defect = vv.expect(subgroup.as_ref())?.sub(&ev_ev)?;

    let inputs = json!({
        "u": u_el.to_string(),
        "v": v.to_string(),
        "target": target_json,
    });
    let report = match u {
        LemmaInput::Unitary(_) => {
            let rhs = real_trace(&defect)?;
            let pass = lhs >= rhs;
            CheckReport::new("lemma32_unitary", "3.4")
                .inputs(inputs)
                .sides(rational_value(&lhs), rational_value(&rhs))
                .witness(json!({ "g": g.to_string() }))
                .pass(pass)
        }
        LemmaInput::General(_) => {
            let uu = u_el.adjoint().multiply(&u_el)?;
            let a_part = uu.expect(commutant.as_ref())?;
            let b_part = uu.sub(&a_part)?;
            let main = real_trace(&a_part.expect(subgroup.as_ref())?.multiply(&defect)?)?;
            let (b_lo, b_hi) = b_part.norm2_bounds();
            let (vv_lo, vv_hi) = vv.norm2_bounds();
            let (ee_lo, ee_hi) = ev_ev.norm2_bounds();
            let rhs_hi = &main - &b_lo * (&vv_lo + &ee_lo);
            let rhs_lo = &main - &b_hi * (&vv_hi + &ee_hi);
            let exact = rhs_hi == rhs_lo;
            CheckReport::new("lemma32_general", "3.3")
                .inputs(inputs)
                .sides(rational_value(&lhs), bracket_value(&rhs_lo, &rhs_hi))
                .witness(json!({ "g": g.to_string() }))
                .exact(exact)
                .pass(lhs >= rhs_hi)
        }
    };
    Ok(report)
}

/// Witness check for `‖u − E_N(u)‖₂ ≤ ‖E_{uNu*} − E_N‖_{∞,2}` with `u = γ` a
/// group element: the unitary `x = γgγ⁻¹` (shortest nontrivial `g ∈ H`) gives
/// the lower bound `‖E_{uNu*}(x) − E_N(x)‖₂` for the right-hand side.
pub fn check_thm33<S: Subgroup + ?Sized>(gamma: &Word, subgroup: &S) -> Result<CheckReport> {
    let u = Element::from_word(gamma.clone());
    let target_sq = u.expect_complement(subgroup)?.norm2_sq();
    let inputs = json!({ "gamma": gamma.to_string() });
    let Some(g) = subgroup.shortest_nontrivial() else {
        return Err(AsymptoticsError::Precondition("subgroup is trivial".into()));
    };
    let x = Element::from_word(g.conjugate(gamma)?);
    // E_{uNu*}(x) = u E_N(u* x u) u*
    let u_star = u.adjoint();
    let conj_expect = u
        .multiply(&u_star.multiply(&x)?.multiply(&u)?.expect(subgroup)?)?
        .multiply(&u_star)?;
    let witness_sq = conj_expect.sub(&x.expect(subgroup)?)?.norm2_sq();
    // the chain's middle term ‖(I − E_N)(u E_N(g) u*)‖₂²
    let ge = Element::from_word(g.clone());
    let chain_sq = u
        .multiply(&ge.expect(subgroup)?)?
        .multiply(&u_star)?
        .expect_complement(subgroup)?
        .norm2_sq();
    let pass = target_sq <= witness_sq;
    Ok(CheckReport::new("thm33_witness", "3.11")
        .inputs(inputs)
        .sides(rational_value(&target_sq), rational_value(&witness_sq))
        .witness(json!({
            "x": g.conjugate(gamma)?.to_string(),
            "g": g.to_string(),
            "chain_sq": rational_value(&chain_sq),
            "squared": true,
        }))
        .pass(pass))
}

/// Exact form of the witness inequality for asymptotic homomorphisms:
/// `u = aᵏ` with `k` past the horizons of `(x, y)` and `(x*x, yy*)`.
pub fn check_prop65(x: &Element, y: &Element, a: &Word) -> Result<CheckReport> {
    check_rem66(std::slice::from_ref(x), std::slice::from_ref(y), a).map(|r| {
        let mut r = r;
        r.check = "prop65_witness".into();
        r.equation = "6.11".into();
        r
    })
}

/// Family version: `‖(I−E)(Σ x_j u y_j)‖₂²` against
/// `tr Σ_{i,j} [E(x_i*x_j)E(y_j y_i*) − E(x_i)*E(x_j)E(y_j)E(y_i)*]`.
pub fn check_rem66(xs: &[Element], ys: &[Element], a: &Word) -> Result<CheckReport> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(AsymptoticsError::Precondition(
            "families must be non-empty and of equal length".into(),
        ));
    }
    let group = cyclic(a)?;
    let rank = a.rank();
    let mut k = 0u64;
    for xi in xs {
        for (j, xj) in xs.iter().enumerate() {
            for yi in ys {
                k = k.max(decay_horizon(xi, &ys[j], a)?.horizon);
                let xx = xi.adjoint().multiply(xj)?;
                let yy = ys[j].multiply(&yi.adjoint())?;
                k = k.max(decay_horizon(&xx, &yy, a)?.horizon);
            }
        }
    }
    let u = power_element(a, k as i64);
    let mut sum = Element::zero(rank);
    for (xj, yj) in xs.iter().zip(ys) {
        sum = sum.add(&xj.multiply(&u)?.multiply(yj)?)?;
    }
    let lhs = sum.expect_complement(&group)?.norm2_sq();

    let mut rhs_el = Element::zero(rank);
    for (xi, yi) in xs.iter().zip(ys) {
        for (xj, yj) in xs.iter().zip(ys) {
            let t1 = xi
                .adjoint()
                .multiply(xj)?
                .expect(&group)?
                .multiply(&yj.multiply(&yi.adjoint())?.expect(&group)?)?;
            let t2 = xi
                .expect(&group)?
                .adjoint()
                .multiply(&xj.expect(&group)?)?
                .multiply(&yj.expect(&group)?)?
                .multiply(&yi.expect(&group)?.adjoint())?;
            rhs_el = rhs_el.add(&t1.sub(&t2)?)?;
        }
    }
    let rhs = real_trace(&rhs_el)?;
    Ok(CheckReport::new("rem66_witness", "6.16")
        .inputs(json!({
            "xs": xs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "ys": ys.iter().map(|y| y.to_string()).collect::<Vec<_>>(),
            "generator": a.to_string(),
        }))
        .sides(rational_value(&lhs), rational_value(&rhs))
        .witness(json!({ "k": k }))
        .pass(lhs >= rhs))
}

/// Certified check of `‖φ_k(x,y)‖₂ ≤ 2‖x‖₂‖y‖₁` and `≤ 2‖x‖₁‖y‖₂`, with the
/// ℓ¹ norm standing in for the operator norm. Squared forms are compared
/// against the certified lower brackets, so a pass is sound.
pub fn phi_norm_bounds_hold(x: &Element, y: &Element, a: &Word, k: i64) -> Result<(bool, bool)> {
    let phi = phi_k(x, y, a, k)?.norm2_sq();
    let four = BigRational::from_integer(4.into());
    let (y1_lo, _) = y.norm1_bounds();
    let (x1_lo, _) = x.norm1_bounds();
    let first = phi <= &four * x.norm2_sq() * &y1_lo * &y1_lo;
    let second = phi <= &four * &x1_lo * &x1_lo * y.norm2_sq();
    Ok((first, second))
}

/// Convenience: `‖x‖₂` as a certified bracket JSON value.
pub fn norm2_json(x: &Element) -> Value {
    let (lo, hi) = sqrt_bounds(&x.norm2_sq());
    bracket_value(&lo, &hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupUnitary;
    use crate::scalar::rat;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn el(s: &str) -> Element {
        Element::parse(s, 2).unwrap()
    }

    fn set(v: &[i64]) -> BTreeSet<i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn run_decomposition() {
        assert_eq!(a_run_decompose(&w("baa"), &w("a")).unwrap(), (w("b"), 2));
        assert_eq!(a_run_decompose(&w("AAA"), &w("a")).unwrap(), (w("e"), -3));
        assert_eq!(a_run_decompose(&w("b"), &w("a")).unwrap(), (w("b"), 0));
        assert_eq!(a_run_prefix(&w("aaaB"), &w("a")).unwrap(), (3, w("B")));
        assert!(matches!(
            a_run_decompose(&w("b"), &w("ab")),
            Err(AsymptoticsError::NotAGenerator(_))
        ));
    }

    #[test]
    fn exceptional_sets() {
        let a = w("a");
        assert_eq!(exceptional_exponents(&w("B"), &w("b"), &a).unwrap(), set(&[0]));
        assert_eq!(exceptional_exponents(&w("b"), &w("b"), &a).unwrap(), set(&[]));
        assert_eq!(
            exceptional_exponents(&w("baa"), &w("aaaB"), &a).unwrap(),
            set(&[-5])
        );
        assert!(matches!(
            exceptional_exponents(&w("aa"), &w("b"), &a),
            Err(AsymptoticsError::InSubgroup { which: "h", .. })
        ));
    }

    #[test]
    fn phi_examples() {
        let a = w("a");
        assert_eq!(phi_k(&el("B"), &el("b"), &a, 0).unwrap(), el("e"));
        for k in [-3, -1, 1, 2, 7] {
            assert!(phi_k(&el("B"), &el("b"), &a, k).unwrap().is_zero());
        }
        let x = el("b + 2*ab - i*Ba");
        assert!(phi_k(&el("aa"), &x, &a, 5).unwrap().is_zero());
    }

    #[test]
    fn horizons() {
        let a = w("a");
        let c = decay_horizon(&el("B"), &el("b"), &a).unwrap();
        assert_eq!((c.horizon, c.exceptions.clone()), (1, set(&[0])));
        assert!(c.verify(&el("B"), &el("b"), &a, HORIZON_SLACK).unwrap());
        assert_eq!(decay_horizon(&el("b"), &el("b"), &a).unwrap().horizon, 0);
        let c = decay_horizon(&el("baa"), &el("aaaB"), &a).unwrap();
        assert_eq!((c.horizon, c.exceptions), (6, set(&[-5])));
    }

    #[test]
    fn multivariable_and_freeness() {
        let a = w("a");
        let xs = [el("b"), el("b"), el("b")];
        let free = freeness_decay(&xs, &a, 10).unwrap();
        assert!(free.nonzero.is_empty());
        assert_eq!(free.horizon, 0);
        let pair = [el("B"), el("b")];
        assert_eq!(freeness_decay(&pair, &a, 10).unwrap().horizon, 1);
        let report = multivar_decay(&pair, &a, 5).unwrap();
        assert!(report.pass());
        assert_eq!(report.horizons, vec![1]);
        // b a^{k1} e a^{k2} B sits in Gp(a) when k1 = −k2: successive limits still vanish
        let tri = [el("b"), el("e"), el("B")];
        let report = multivar_decay(&tri, &a, 3).unwrap();
        assert!(report.pass());
        assert!(report.horizons[1] > report.horizons[0]);
        // interleaving a subalgebra element is absorbed
        let absorbed = [el("aa"), el("b"), el("A")];
        assert!(freeness_decay(&absorbed, &a, 6).unwrap().nonzero.is_empty());
    }

    #[test]
    fn witnesses() {
        let a = w("a");
        assert_eq!(witness_g(&el("b"), &el("b"), &a).unwrap().1, 0);
        assert_ne!(witness_g(&el("B"), &el("b"), &a).unwrap().1, 0);
        assert_eq!(witness_g(&el("a"), &el("aa"), &a).unwrap().1, 0);
    }

    #[test]
    fn lemma32_examples() {
        let a = w("a");
        let unitary = |s: &str| LemmaInput::Unitary(GroupUnitary::word(w(s)));
        let r = check_lemma32(&unitary("b"), &el("B"), WitnessTarget::Generator(&a)).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, rational_value(&rat(1, 1)));
        assert_eq!(r.rhs, rational_value(&rat(1, 1)));
        let r = check_lemma32(&unitary("a"), &el("A"), WitnessTarget::Generator(&a)).unwrap();
        assert!(r.pass);
        assert_eq!(r.rhs, rational_value(&rat(0, 1)));
        let r = check_lemma32(&unitary("b"), &el("1/2*e"), WitnessTarget::Generator(&a)).unwrap();
        assert!(r.pass);
        assert_eq!(r.rhs, rational_value(&rat(0, 1)));
        let general = LemmaInput::General(el("b + a"));
        let r = check_lemma32(&general, &el("B + 2*b"), WitnessTarget::Generator(&a)).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn lemma32_over_free_factor() {
        let f3 = |s: &str| Word::parse(s, 3).unwrap();
        let h = SubgroupGraph::build(3, &[f3("a"), f3("b")]).unwrap();
        let u = LemmaInput::Unitary(GroupUnitary::word(f3("c")));
        let v = Element::parse("C + ab", 3).unwrap();
        let r = check_lemma32(&u, &v, WitnessTarget::Graph { subgroup: &h, window: 4 }).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(relative_commutant(&h).unwrap().elements_up_to(3).len() == 1);
    }

    #[test]
    fn thm33_examples() {
        let h = CyclicSubgroup::new(w("a"));
        let r = check_thm33(&w("b"), &h).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, r.rhs);
        let r = check_thm33(&w("aaa"), &h).unwrap();
        assert_eq!(r.lhs, rational_value(&rat(0, 1)));
        assert_eq!(r.rhs, rational_value(&rat(0, 1)));
        let r = check_thm33(&w("baB"), &h).unwrap();
        assert!(r.pass);
        assert_eq!(r.rhs, rational_value(&rat(1, 1)));
        // ⟨b²⟩ is not malnormal and b normalizes it
        let r = check_thm33(&w("b"), &CyclicSubgroup::new(w("bb"))).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn prop65_examples() {
        let a = w("a");
        let r = check_prop65(&el("B"), &el("b"), &a).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, rational_value(&rat(1, 1)));
        assert_eq!(r.rhs, rational_value(&rat(1, 1)));
        let y = el("2*b + a - 1/3*i*Ab");
        let r = check_prop65(&el("e"), &y, &a).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, r.rhs);
        let r = check_prop65(&el("a"), &el("A"), &a).unwrap();
        assert_eq!(r.rhs, rational_value(&rat(0, 1)));
        assert!(r.pass);
        let r = check_rem66(&[el("B"), el("a")], &[el("b"), el("bb")], &a).unwrap();
        assert!(r.pass);
    }
}
