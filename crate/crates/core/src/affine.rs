//! The affine group `x ↦ αx + β` over finite fields `GF(p^d)`, with the
//! homothety subgroup `{x ↦ αx}`.
//!
//! Field elements are packed as base-`p` integers: the coefficient of `xⁱ`
//! in the polynomial basis is the `i`-th base-`p` digit. Each stage uses the
//! first monic irreducible polynomial of degree `d` in that same packing of
//! its lower coefficients, and multiplication goes through exp/log tables
//! built from the smallest primitive element.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::report::CheckReport;

/// Largest field order accepted by [`Field::new`].
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{d} exceeds the bound {bound}")]
    TooLarge { p: u64, d: u32, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements from GF({left}) and GF({right}) cannot be combined")]
    StageMismatch { left: String, right: String },
    #[error("degree {small} does not divide degree {large}")]
    NotDivisible { small: u32, large: u32 },
    #[error("{0}")]
    Precondition(String),
}

type Result<T> = std::result::Result<T, FieldError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    pub p: u32,
    pub d: u32,
    pub code: u32,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    /// Polynomial-basis coordinates, constant term first.
    pub fn coordinates(&self) -> Vec<u32> {
        digits(self.code, self.p, self.d)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            return write!(f, "{}", self.code);
        }
        write!(f, "{}", poly_string(&self.coordinates(), 'x'))
    }
}

fn digits(mut code: u32, p: u32, len: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(len as usize);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// `c₀ + c₁x + …` printed highest degree first, e.g. `x^2+x+1`.
fn poly_string(coeffs: &[u32], var: char) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// Multiplies two polynomials over `GF(p)` and reduces modulo the monic
/// `modulus` (given without its leading coefficient).
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let d = modulus.len();
    let mut prod = vec![0u32; 2 * d];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (d..2 * d).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        // x^d = −modulus
        for (i, &m) in modulus.iter().enumerate() {
            prod[k - d + i] = (prod[k - d + i] + (p - m % p) * c) % p;
        }
    }
    prod.truncate(d);
    prod
}

/// Trial division of `x^d + modulus` by every monic polynomial of degree
/// at most `d/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let d = modulus.len() as u32;
    // A polynomial of degree d is reducible iff it has a factor of degree ≤ d/2.
    for deg in 1..=d / 2 {
        for lower in 0..p.pow(deg) {
            let mut factor = digits(lower, p, deg);
            factor.push(1);
            if poly_divides(&factor, modulus, p) {
                return false;
            }
        }
    }
    true
}

/// Whether the monic `factor` divides `x^d + modulus`.
fn poly_divides(factor: &[u32], modulus: &[u32], p: u32) -> bool {
    let mut rem: Vec<u32> = modulus.to_vec();
    rem.push(1);
    let fd = factor.len() - 1;
    for k in (fd..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        for (i, &f) in factor.iter().enumerate() {
            rem[k - fd + i] = (rem[k - fd + i] + (p - f) * c) % p;
        }
    }
    rem.iter().all(|&c| c == 0)
}

/// One finite stage `GF(p^d)`.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    d: u32,
    order: u32,
    /// Lower coefficients of the monic irreducible modulus.
    modulus: Vec<u32>,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        self.p == other.p && self.d == other.d
    }
}

impl Field {
    pub fn new(p: u64, d: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if d == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = p.checked_pow(d).filter(|&q| q <= MAX_ORDER);
        let Some(order) = order else {
            return Err(FieldError::TooLarge {
                p,
                d,
                bound: MAX_ORDER,
            });
        };
        let (p, order) = (p as u32, order as u32);
        let modulus = (0..p.pow(d))
            .map(|code| digits(code, p, d))
            .find(|m| is_irreducible(m, p))
            .expect("irreducible polynomials exist in every degree");
        let mut field = Field {
            p,
            d,
            order,
            modulus,
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let r = poly_mulmod(
            &digits(a, self.p, self.d),
            &digits(b, self.p, self.d),
            &self.modulus,
            self.p,
        );
        pack(&r, self.p)
    }

    fn build_tables(&mut self) {
        let n = self.order - 1;
        for g in 1..self.order {
            let mut exp = Vec::with_capacity(n as usize);
            let mut x = 1;
            loop {
                exp.push(x);
                x = self.slow_mul(x, g);
                if x == 1 {
                    break;
                }
            }
            if exp.len() as u32 == n {
                let mut log = vec![0; self.order as usize];
                for (i, &v) in exp.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                self.primitive = g;
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn name(&self) -> String {
        format!("{}^{}", self.p, self.d)
    }

    /// The modulus, e.g. `x^2+x+1`.
    pub fn polynomial(&self) -> String {
        let mut full = self.modulus.clone();
        full.push(1);
        poly_string(&full, 'x')
    }

    pub fn primitive_element(&self) -> FieldElement {
        self.element(self.primitive)
    }

    pub fn element(&self, code: u32) -> FieldElement {
        assert!(code < self.order, "code {code} outside GF({})", self.name());
        FieldElement {
            p: self.p,
            d: self.d,
            code,
        }
    }

    /// The image of an integer under `ℤ → GF(p)`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.element(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coordinates(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.d as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::Precondition(format!(
                "coordinates {coeffs:?} do not describe an element of GF({})",
                self.name()
            )));
        }
        Ok(self.element(pack(coeffs, self.p)))
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// The class of `x` in the polynomial basis. In a prime field `x` is
    /// meaningless and the primitive element is returned.
    pub fn generator(&self) -> FieldElement {
        if self.d == 1 {
            self.primitive_element()
        } else {
            self.element(self.p)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(|c| self.element(c))
    }

    fn check(&self, x: &FieldElement) -> Result<()> {
        if x.p == self.p && x.d == self.d {
            Ok(())
        } else {
            Err(FieldError::StageMismatch {
                left: self.name(),
                right: format!("{}^{}", x.p, x.d),
            })
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(self.add_unchecked(a.code, b.code))
    }

    fn add_unchecked(&self, a: u32, b: u32) -> FieldElement {
        let (da, db) = (digits(a, self.p, self.d), digits(b, self.p, self.d));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.element(pack(&sum, self.p))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(&a)?;
        let neg: Vec<u32> = a
            .coordinates()
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        Ok(self.element(pack(&neg, self.p)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.add(a, self.neg(b)?)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(self.mul_unchecked(a.code, b.code))
    }

    fn mul_unchecked(&self, a: u32, b: u32) -> FieldElement {
        if a == 0 || b == 0 {
            return self.zero();
        }
        let n = self.order - 1;
        let e = (self.log[a as usize] + self.log[b as usize]) % n;
        self.element(self.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(&a)?;
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.order - 1;
        Ok(self.element(self.exp[((n - self.log[a.code as usize]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.mul(a, self.inv(b)?)
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> Result<FieldElement> {
        self.check(&a)?;
        if a.is_zero() {
            return Ok(if e == 0 { self.one() } else { self.zero() });
        }
        let n = (self.order - 1) as u64;
        let l = (self.log[a.code as usize] as u64 * (e % n)) % n;
        Ok(self.element(self.exp[l as usize]))
    }

    pub fn frobenius(&self, a: FieldElement) -> Result<FieldElement> {
        self.pow(a, self.p as u64)
    }

    /// Evaluates the polynomial with coefficients `coeffs ⊂ GF(p)` (constant
    /// first) at `x`.
    fn eval_prime_poly(&self, coeffs: &[u32], x: FieldElement) -> FieldElement {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.mul_unchecked(acc.code, x.code);
            acc = self.add_unchecked(acc.code, c);
        }
        acc
    }

    /// The embedding `GF(p^d) → GF(p^{d'})` sending the class of `x` to the
    /// smallest-code root of this stage's modulus in `target`.
    pub fn embedding(&self, target: &Field) -> Result<Embedding> {
        if self.p != target.p {
            return Err(FieldError::StageMismatch {
                left: self.name(),
                right: target.name(),
            });
        }
        if !target.d.is_multiple_of(self.d) {
            return Err(FieldError::NotDivisible {
                small: self.d,
                large: target.d,
            });
        }
        let mut full = self.modulus.clone();
        full.push(1);
        let image_of_x = if self.d == 1 {
            // GF(p) embeds as the prime field; x is not a field generator here
            target.zero()
        } else {
            target
                .elements()
                .find(|&r| target.eval_prime_poly(&full, r).is_zero())
                .expect("a degree-dividing extension splits the modulus")
        };
        let images = self
            .elements()
            .map(|a| {
                if self.d == 1 {
                    target.element(a.code)
                } else {
                    target.eval_prime_poly(&a.coordinates(), image_of_x)
                }
            })
            .collect();
        Ok(Embedding {
            source: self.clone(),
            target: target.clone(),
            image_of_x,
            images,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Embedding {
    pub source: Field,
    pub target: Field,
    pub image_of_x: FieldElement,
    images: Vec<FieldElement>,
}

impl Embedding {
    pub fn apply(&self, a: FieldElement) -> Result<FieldElement> {
        self.source.check(&a)?;
        Ok(self.images[a.code as usize])
    }
}

/// `x ↦ αx + β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineMap {
    pub alpha: FieldElement,
    pub beta: FieldElement,
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// The affine group of one stage.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineGroup {
    pub field: Field,
}

impl AffineGroup {
    pub fn new(p: u64, d: u32) -> Result<AffineGroup> {
        Ok(AffineGroup {
            field: Field::new(p, d)?,
        })
    }

    pub fn order(&self) -> u64 {
        let q = self.field.order() as u64;
        q * (q - 1)
    }

    pub fn map(&self, alpha: FieldElement, beta: FieldElement) -> Result<AffineMap> {
        self.field.check(&alpha)?;
        self.field.check(&beta)?;
        if alpha.is_zero() {
            return Err(FieldError::Precondition(
                "an affine map needs a nonzero linear part".into(),
            ));
        }
        Ok(AffineMap { alpha, beta })
    }

    pub fn identity(&self) -> AffineMap {
        AffineMap {
            alpha: self.field.one(),
            beta: self.field.zero(),
        }
    }

    pub fn is_identity(&self, g: &AffineMap) -> bool {
        *g == self.identity()
    }

    /// Whether `g` is a homothety `x ↦ αx`.
    pub fn in_homotheties(&self, g: &AffineMap) -> bool {
        g.beta.is_zero()
    }

    pub fn elements(&self) -> impl Iterator<Item = AffineMap> + '_ {
        let f = &self.field;
        (1..f.order()).flat_map(move |a| {
            (0..f.order()).map(move |b| AffineMap {
                alpha: f.element(a),
                beta: f.element(b),
            })
        })
    }

    pub fn homotheties(&self) -> impl Iterator<Item = AffineMap> + '_ {
        let f = &self.field;
        (1..f.order()).map(move |a| AffineMap {
            alpha: f.element(a),
            beta: f.zero(),
        })
    }

    /// `(α,β)∘(γ,δ) = (αγ, αδ + β)`.
    pub fn compose(&self, f: &AffineMap, g: &AffineMap) -> Result<AffineMap> {
        let fld = &self.field;
        Ok(AffineMap {
            alpha: fld.mul(f.alpha, g.alpha)?,
            beta: fld.add(fld.mul(f.alpha, g.beta)?, f.beta)?,
        })
    }

    /// `(α,β)⁻¹ = (α⁻¹, −α⁻¹β)`.
    pub fn invert(&self, f: &AffineMap) -> Result<AffineMap> {
        let fld = &self.field;
        let ai = fld.inv(f.alpha)?;
        Ok(AffineMap {
            alpha: ai,
            beta: fld.neg(fld.mul(ai, f.beta)?)?,
        })
    }

    /// `t∘g∘t⁻¹`.
    pub fn conjugate(&self, t: &AffineMap, g: &AffineMap) -> Result<AffineMap> {
        self.compose(&self.compose(t, g)?, &self.invert(t)?)
    }

    /// Exact size of the conjugacy class of `g ≠ e`.
    pub fn conjugacy_class_size(&self, g: &AffineMap) -> Result<usize> {
        if self.is_identity(g) {
            return Err(FieldError::Precondition(
                "the identity has a trivial conjugacy class".into(),
            ));
        }
        let mut class = BTreeSet::new();
        for t in self.elements() {
            class.insert(self.conjugate(&t, g)?);
        }
        Ok(class.len())
    }

    /// Runs over all `t ∈ Γ`, `g ∈ G`. Records the pairs with `t ∉ G`,
    /// `g ≠ e` and `tgt⁻¹ ∈ G`, and counts the pairs where the composition
    /// disagrees with the closed form `tgt⁻¹ = (γ, β(1−γ))`.
    pub fn malnormal_scan(&self) -> Result<MalnormalStage> {
        let fld = &self.field;
        let mut violations = Vec::new();
        let mut closed_form_mismatches = 0;
        let mut pairs = 0u64;
        for t in self.elements() {
            for g in self.homotheties() {
                pairs += 1;
                let c = self.conjugate(&t, &g)?;
                let expected = AffineMap {
                    alpha: g.alpha,
                    beta: fld.mul(t.beta, fld.sub(fld.one(), g.alpha)?)?,
                };
                if c != expected {
                    closed_form_mismatches += 1;
                }
                if !self.in_homotheties(&t) && !self.is_identity(&g) && self.in_homotheties(&c) {
                    violations.push((t, g));
                }
            }
        }
        Ok(MalnormalStage {
            pairs,
            violations,
            closed_form_mismatches,
        })
    }

    /// Whether every pair of homotheties commutes.
    pub fn homotheties_commute(&self) -> Result<bool> {
        for f in self.homotheties() {
            for g in self.homotheties() {
                if self.compose(&f, &g)? != self.compose(&g, &f)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MalnormalStage {
    pub pairs: u64,
    pub violations: Vec<(AffineMap, AffineMap)>,
    pub closed_form_mismatches: u64,
}

/// Exhaustive malnormality of the homotheties in the affine group of
/// `GF(p^d)`, plus abelianness of the homotheties.
pub fn check_malnormal(p: u64, d: u32) -> Result<CheckReport> {
    let group = AffineGroup::new(p, d)?;
    let scan = group.malnormal_scan()?;
    let abelian = group.homotheties_commute()?;
    let pass = scan.violations.is_empty() && scan.closed_form_mismatches == 0 && abelian;
    let shown: Vec<_> = scan
        .violations
        .iter()
        .take(10)
        .map(|(t, g)| json!({ "t": t.to_string(), "g": g.to_string() }))
        .collect();
    Ok(CheckReport::new(format!("affine_malnormal_{}_{}", p, d), "3.8")
        .inputs(json!({
            "p": p,
            "d": d,
            "polynomial": group.field.polynomial(),
            "group_order": group.order(),
        }))
        .sides(json!(scan.violations.len()), json!(0))
        .witness(json!({
            "pairs_checked": scan.pairs,
            "closed_form_mismatches": scan.closed_form_mismatches,
            "homotheties_abelian": abelian,
            "violations": shown,
        }))
        .pass(pass))
}

/// Class sizes of the translation `(1, 1)` and of a homothety at every stage
/// `GF(p^e)`, `e | d`; translations must have class size `p^e − 1`.
pub fn check_icc_trend(p: u64, d: u32) -> Result<CheckReport> {
    let mut stages = Vec::new();
    let mut pass = true;
    let mut polynomial = String::new();
    for e in (1..=d).filter(|e| d.is_multiple_of(*e)) {
        let group = AffineGroup::new(p, e)?;
        let f = &group.field;
        let q = f.order() as usize;
        let translation = group.map(f.one(), f.one())?;
        let t_size = group.conjugacy_class_size(&translation)?;
        let homothety = if q > 2 {
            let h = group.map(f.primitive_element(), f.zero())?;
            Some(group.conjugacy_class_size(&h)?)
        } else {
            None
        };
        pass &= t_size == q - 1;
        if e == d {
            polynomial = f.polynomial();
        }
        stages.push(json!({
            "stage": f.name(),
            "order": q,
            "polynomial": f.polynomial(),
            "translation_class": t_size,
            "expected": q - 1,
            "homothety_class": homothety,
        }));
    }
    let sizes: Vec<_> = stages.iter().map(|s| s["translation_class"].clone()).collect();
    let expected: Vec<_> = stages.iter().map(|s| s["expected"].clone()).collect();
    Ok(CheckReport::new(format!("affine_icc_trend_{}_{}", p, d), "3.8")
        .inputs(json!({ "p": p, "d": d, "polynomial": polynomial }))
        .sides(json!(sizes), json!(expected))
        .witness(json!({ "stages": stages }))
        .pass(pass))
}

/// Every `(p, d)` with `p^d ≤ bound`, ordered by `(p, d)`.
pub fn stages_up_to(bound: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in (2..=bound).filter(|&p| is_prime(p)) {
        let mut d = 1;
        while p.pow(d) <= bound {
            out.push((p, d));
            d += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.mul(f.from_int(2), f.from_int(2)).unwrap(), f.one());
        assert_eq!(f.polynomial(), "x");
        assert!(Field::new(4, 1).is_err());
        assert!(matches!(
            f.inv(f.zero()),
            Err(FieldError::DivisionByZero)
        ));
    }

    #[test]
    fn gf4_convention() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.polynomial(), "x^2+x+1");
        let x = f.generator();
        let x_plus_1 = f.add(x, f.one()).unwrap();
        assert_eq!(f.mul(x, x).unwrap(), x_plus_1);
        assert_eq!(x_plus_1.to_string(), "x+1");
    }

    #[test]
    fn gf9_polynomial() {
        assert_eq!(Field::new(3, 2).unwrap().polynomial(), "x^2+1");
    }

    #[test]
    fn field_axioms_small_stages() {
        for (p, d) in [(2, 3), (3, 2), (5, 1), (2, 4)] {
            let f = Field::new(p, d).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a).unwrap()).unwrap(), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()).unwrap(), f.one());
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b).unwrap().code, f.slow_mul(a.code, b.code));
                    let fa = f.frobenius(a).unwrap();
                    let fb = f.frobenius(b).unwrap();
                    assert_eq!(f.frobenius(f.add(a, b).unwrap()).unwrap(), f.add(fa, fb).unwrap());
                }
            }
        }
    }

    #[test]
    fn embeddings() {
        let small = Field::new(2, 1).unwrap();
        let big = Field::new(2, 2).unwrap();
        let e = small.embedding(&big).unwrap();
        assert_eq!(e.apply(small.one()).unwrap(), big.one());
        let f4 = Field::new(2, 2).unwrap();
        let f16 = Field::new(2, 4).unwrap();
        let e = f4.embedding(&f16).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(
                    e.apply(f4.mul(a, b).unwrap()).unwrap(),
                    f16.mul(e.apply(a).unwrap(), e.apply(b).unwrap()).unwrap()
                );
                assert_eq!(
                    e.apply(f4.add(a, b).unwrap()).unwrap(),
                    f16.add(e.apply(a).unwrap(), e.apply(b).unwrap()).unwrap()
                );
            }
        }
        let images: BTreeSet<_> = f4.elements().map(|a| e.apply(a).unwrap()).collect();
        assert_eq!(images.len(), 4);
        assert!(matches!(
            Field::new(2, 2).unwrap().embedding(&Field::new(2, 3).unwrap()),
            Err(FieldError::NotDivisible { .. })
        ));
    }

    #[test]
    fn affine_examples() {
        let g = AffineGroup::new(3, 1).unwrap();
        let f = &g.field;
        let a = g.map(f.from_int(2), f.from_int(1)).unwrap();
        let b = g.map(f.from_int(2), f.zero()).unwrap();
        assert_eq!(g.compose(&a, &b).unwrap(), g.map(f.one(), f.one()).unwrap());
        assert_eq!(g.conjugate(&a, &g.identity()).unwrap(), g.identity());
        let t = g.map(f.one(), f.one()).unwrap();
        let h = g.map(f.from_int(2), f.zero()).unwrap();
        let expected = g.map(f.from_int(2), f.from_int(1 - 2)).unwrap();
        assert_eq!(g.conjugate(&t, &h).unwrap(), expected);
        assert_eq!(g.compose(&a, &g.invert(&a).unwrap()).unwrap(), g.identity());
    }

    #[test]
    fn class_sizes() {
        let g3 = AffineGroup::new(3, 1).unwrap();
        let f = &g3.field;
        assert_eq!(g3.conjugacy_class_size(&g3.map(f.one(), f.one()).unwrap()).unwrap(), 2);
        assert_eq!(g3.conjugacy_class_size(&g3.map(f.from_int(2), f.zero()).unwrap()).unwrap(), 3);
        let g9 = AffineGroup::new(3, 2).unwrap();
        let f = &g9.field;
        assert_eq!(g9.conjugacy_class_size(&g9.map(f.one(), f.one()).unwrap()).unwrap(), 8);
        assert!(g9.conjugacy_class_size(&g9.identity()).is_err());
    }

    #[test]
    fn malnormal_small() {
        let r = check_malnormal(3, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.witness["pairs_checked"], json!(12));
        assert!(check_malnormal(2, 2).unwrap().pass);
        assert!(check_icc_trend(3, 2).unwrap().pass);
    }

    #[test]
    fn stage_list() {
        let s = stages_up_to(64);
        assert!(s.contains(&(2, 6)) && s.contains(&(61, 1)) && !s.contains(&(3, 4)));
    }
}
