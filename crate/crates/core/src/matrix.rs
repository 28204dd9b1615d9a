//! Finite-dimensional analogues in `M_n` with the normalized trace and the
//! diagonal masa. Linear maps on `M_n` are stored as `n² × n²` matrices acting
//! on column-major vectorizations.
//!
//! The `‖·‖∞,2` norm of a map `φ` is bracketed. The upper end is the largest
//! singular value of `φ` on `L²(M_n, tr)`, which dominates `‖φ‖∞,2` because
//! `‖x‖₂ ≤ ‖x‖`. The lower end is `‖φ(u)‖₂` at a unitary `u` found by ascent.
//! Restricting to unitaries loses nothing: the operator-norm unit ball is the
//! convex hull of the unitary group and `x ↦ ‖φ(x)‖₂` is convex, so the
//! supremum over the ball is attained at a unitary.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::CheckReport;

pub type Mat = DMatrix<Complex64>;

/// Tolerance for identities that hold exactly.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for inequalities whose lower side comes from the optimizer.
pub const OPT_TOL: f64 = 1e-9;
/// Unitarity tolerance on inputs.
pub const UNITARY_TOL: f64 = 1e-10;
/// Default number of ascent restarts.
pub const DEFAULT_RESTARTS: usize = 32;

const ASCENT_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("{0}")]
    Precondition(String),
}

type Result<T> = std::result::Result<T, MatrixError>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

/// Matrix unit `e_{ij}` (0-based).
pub fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m[(i, j)] = c(1.0);
    m
}

/// Diagonal projection onto the coordinates in `support`.
pub fn diag_projection(n: usize, support: &[usize]) -> Mat {
    let mut m = Mat::zeros(n, n);
    for &i in support {
        m[(i, i)] = c(1.0);
    }
    m
}

/// Normalized trace `Tr(x)/n`.
pub fn trace(x: &Mat) -> Complex64 {
    x.trace() / c(x.nrows() as f64)
}

/// `‖x‖₂ = tr(x*x)^{1/2}`.
pub fn norm2(x: &Mat) -> f64 {
    (x.norm_squared() / x.nrows() as f64).sqrt()
}

/// `⟨x, y⟩ = tr(y*x)`.
pub fn inner(x: &Mat, y: &Mat) -> Complex64 {
    (y.adjoint() * x).trace() / c(x.nrows() as f64)
}

pub fn unitarity_defect(u: &Mat) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - identity(n)).camax()
}

fn require_unitary(u: &Mat) -> Result<()> {
    if !u.is_square() {
        return Err(MatrixError::Precondition("a unitary must be square".into()));
    }
    let deviation = unitarity_defect(u);
    if deviation > UNITARY_TOL {
        return Err(MatrixError::NotUnitary { deviation });
    }
    Ok(())
}

/// `E_A`: the diagonal part.
pub fn expect_diag(x: &Mat) -> Mat {
    Mat::from_diagonal(&x.diagonal())
}

/// `E_{uAu*}(x) = uE_A(u*xu)u*`.
pub fn expect_conjugated(u: &Mat, x: &Mat) -> Result<Mat> {
    require_unitary(u)?;
    Ok(conj_expect(u, x))
}

fn conj_expect(u: &Mat, x: &Mat) -> Mat {
    let us = u.adjoint();
    u * expect_diag(&(&us * x * u)) * us
}

/// `E_{pA}(x) = pE_A(x)p` for a diagonal projection `p`.
pub fn expect_corner(p: &Mat, x: &Mat) -> Mat {
    p * expect_diag(x) * p
}

/// `E_{vAv*}(x) = vE_A(v*xv)v*` for a partial isometry `v` with diagonal
/// initial projection.
pub fn expect_twisted(v: &Mat, x: &Mat) -> Mat {
    let vs = v.adjoint();
    v * expect_diag(&(&vs * x * v)) * vs
}

fn vectorize(x: &Mat) -> DVector<Complex64> {
    DVector::from_column_slice(x.as_slice())
}

fn unvectorize(n: usize, v: &DVector<Complex64>) -> Mat {
    Mat::from_column_slice(n, n, v.as_slice())
}

/// Serializes a matrix as rows of `[re, im]` pairs.
pub fn matrix_json(x: &Mat) -> Value {
    let rows: Vec<Value> = (0..x.nrows())
        .map(|i| {
            Value::Array(
                (0..x.ncols())
                    .map(|j| json!([x[(i, j)].re, x[(i, j)].im]))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

/// A linear map on `M_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    n: usize,
    matrix: Mat,
}

impl LinearMap {
    pub fn from_fn(n: usize, f: impl Fn(&Mat) -> Mat) -> LinearMap {
        let mut matrix = Mat::zeros(n * n, n * n);
        for j in 0..n {
            for i in 0..n {
                let image = f(&unit(n, i, j));
                matrix.set_column(j * n + i, &vectorize(&image));
            }
        }
        LinearMap { n, matrix }
    }

    pub fn identity(n: usize) -> LinearMap {
        LinearMap {
            n,
            matrix: Mat::identity(n * n, n * n),
        }
    }

    pub fn zero(n: usize) -> LinearMap {
        LinearMap {
            n,
            matrix: Mat::zeros(n * n, n * n),
        }
    }

    pub fn diag_expectation(n: usize) -> LinearMap {
        LinearMap::from_fn(n, expect_diag)
    }

    pub fn conjugated_expectation(u: &Mat) -> Result<LinearMap> {
        require_unitary(u)?;
        Ok(LinearMap::from_fn(u.nrows(), |x| conj_expect(u, x)))
    }

    /// Orthogonal projection onto the span of the given orthonormal
    /// vectorized columns.
    fn projection(n: usize, basis: &Mat) -> LinearMap {
        LinearMap {
            n,
            matrix: basis * basis.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn apply(&self, x: &Mat) -> Mat {
        unvectorize(self.n, &(&self.matrix * vectorize(x)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            n: self.n,
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            n: self.n,
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            n: self.n,
            matrix: &self.matrix - &other.matrix,
        }
    }

    /// `I − self`.
    pub fn complement(&self) -> LinearMap {
        LinearMap::identity(self.n).sub(self)
    }

    /// Largest entry of `self − other`.
    pub fn distance(&self, other: &LinearMap) -> f64 {
        (&self.matrix - &other.matrix).camax()
    }

    /// Operator norm on `L²(M_n, tr)`; an upper bound for `‖·‖∞,2`.
    pub fn norm2_operator(&self) -> f64 {
        self.matrix
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    /// Largest entry of `self* ∘ other`, zero when the ranges are orthogonal.
    pub fn range_overlap(&self, other: &LinearMap) -> f64 {
        (self.matrix.adjoint() * &other.matrix).camax()
    }
}

/// `lower ≤ ‖φ‖∞,2 ≤ upper`, with the unitary attaining `lower`.
#[derive(Debug, Clone)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    pub witness: Mat,
}

impl Bracket {
    pub fn to_json(&self) -> Value {
        json!({ "lower": self.lower, "upper": self.upper })
    }
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let z = ginibre(n, rng);
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = Mat::from_diagonal(&DVector::from_iterator(
        n,
        (0..n).map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                c(1.0)
            } else {
                d / c(d.norm())
            }
        }),
    ));
    q * phases
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Unitary part of the polar decomposition, or `None` for the zero matrix.
fn polar_unitary(w: &Mat) -> Option<Mat> {
    if w.camax() < 1e-300 {
        return None;
    }
    let svd = w.clone().svd(true, true);
    Some(svd.u.unwrap() * svd.v_t.unwrap())
}

/// Brackets `‖φ‖∞,2`. The lower end comes from ascent over the unitary
/// group started at `I`, at every unitary in `seeds`, and at `restarts`
/// Haar-random unitaries: each step replaces `u` by the unitary part of
/// `φ*φ(u)`, the maximizer over the unit ball of the linearization of the
/// convex function `‖φ(·)‖₂²`, so the objective never decreases.
pub fn norm_inf2_bracket(phi: &LinearMap, restarts: usize, seed: u64, seeds: &[Mat]) -> Bracket {
    let n = phi.n;
    let gram = phi.matrix.adjoint() * &phi.matrix;
    let value = |u: &Mat| norm2(&phi.apply(u));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![identity(n)];
    starts.extend(seeds.iter().cloned());
    let mut best = (value(&starts[0]), starts[0].clone());
    let run = |mut u: Mat, best: &mut (f64, Mat)| {
        let mut current = value(&u);
        for _ in 0..ASCENT_STEPS {
            let g = unvectorize(n, &(&gram * vectorize(&u)));
            let Some(next) = polar_unitary(&g) else { break };
            let v = value(&next);
            if v <= current + 1e-15 {
                if v > current {
                    u = next;
                    current = v;
                }
                break;
            }
            u = next;
            current = v;
        }
        if current > best.0 {
            *best = (current, u);
        }
    };
    for u in starts {
        run(u, &mut best);
    }
    for _ in 0..restarts {
        let u = haar_unitary(n, &mut rng);
        run(u, &mut best);
    }
    Bracket {
        lower: best.0,
        upper: phi.norm2_operator().max(best.0),
        witness: best.1,
    }
}

/// Scene: `M_n` with the normalized trace and the diagonal masa `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scene {
    pub n: usize,
}

impl Scene {
    pub fn new(n: usize) -> Result<Scene> {
        if n == 0 {
            return Err(MatrixError::Precondition("dimension must be positive".into()));
        }
        Ok(Scene { n })
    }

    fn check_dim(&self, x: &Mat) -> Result<()> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(MatrixError::Dimension {
                expected: self.n,
                found: x.nrows(),
            });
        }
        Ok(())
    }

    /// Checks the inequality `‖E_A − E_{uAu*}‖∞,2 ≤ 4‖u − E_A(u)‖₂` through
    /// its bracket, and for each `v` the chain step
    /// `‖E_A(uv)u − uE_A(vu)‖₂ ≤ 4‖u − E_A(u)‖₂`.
    pub fn check_prop21(&self, u: &Mat, vs: &[Mat], restarts: usize, seed: u64) -> Result<CheckReport> {
        self.check_dim(u)?;
        require_unitary(u)?;
        for v in vs {
            self.check_dim(v)?;
            require_unitary(v)?;
        }
        let rhs = 4.0 * norm2(&(u - expect_diag(u)));
        let phi = LinearMap::diag_expectation(self.n).sub(&LinearMap::conjugated_expectation(u)?);
        let bracket = norm_inf2_bracket(&phi, restarts, seed, &[]);
        let mut chain_max: f64 = 0.0;
        for v in vs {
            let lhs = norm2(&(expect_diag(&(u * v)) * u - u * expect_diag(&(v * u))));
            chain_max = chain_max.max(lhs);
        }
        let pass = bracket.lower <= rhs + OPT_TOL && chain_max <= rhs + OPT_TOL;
        Ok(CheckReport::new("prop21", "2.2")
            .inputs(json!({ "n": self.n, "u": matrix_json(u), "chain_samples": vs.len() }))
            .sides(bracket.to_json(), json!(rhs))
            .witness(json!({
                "chain_max": chain_max,
                "maximizer": matrix_json(&bracket.witness),
            }))
            .pass(pass)
            .matrix_model(OPT_TOL))
    }

    /// `v` maps the range of `p⊥` onto the range of `p`; `u = v + v*`.
    pub fn flip_unitary(&self, p_support: &[usize]) -> Result<(Mat, Mat, CheckReport)> {
        let n = self.n;
        if !n.is_multiple_of(2) {
            return Err(MatrixError::Precondition("the flip needs even dimension".into()));
        }
        let mut support: Vec<usize> = p_support.to_vec();
        support.sort_unstable();
        support.dedup();
        if support.len() * 2 != n || support.iter().any(|&i| i >= n) {
            return Err(MatrixError::Precondition(
                "p must be a diagonal projection of trace 1/2".into(),
            ));
        }
        let complement: Vec<usize> = (0..n).filter(|i| !support.contains(i)).collect();
        let mut v = Mat::zeros(n, n);
        for (&i, &j) in support.iter().zip(&complement) {
            v[(i, j)] = c(1.0);
        }
        let u = &v + v.adjoint();
        let p = diag_projection(n, &support);
        let p_perp = identity(n) - &p;
        let flip_err = (&u * &p * &u - &p_perp).camax();
        let ea = expect_diag(&u);
        let dist = norm2(&(&u - &ea));
        let phi = LinearMap::conjugated_expectation(&u)?.sub(&LinearMap::diag_expectation(n));
        let upper = phi.norm2_operator();
        let pass = flip_err <= EXACT_TOL
            && ea.camax() <= EXACT_TOL
            && (dist - 1.0).abs() <= EXACT_TOL
            && upper <= 1.0 + EXACT_TOL;
        let report = CheckReport::new("flip_unitary", "2.7c")
            .inputs(json!({ "n": n, "p": support }))
            .sides(json!(dist), json!(1.0))
            .witness(json!({
                "upu_minus_p_perp": flip_err,
                "expectation_of_u": ea.camax(),
                "difference_upper": upper,
                "v": matrix_json(&v),
            }))
            .pass(pass)
            .matrix_model(EXACT_TOL);
        Ok((v, u, report))
    }

    /// Verifies the unitary-conjugation identities of the `√5` chain for a
    /// nilpotent partial isometry `v` with `vv* = p`, `v*v = q`.
    pub fn check_thm71_chain(
        &self,
        p_support: &[usize],
        q_support: &[usize],
        v: &Mat,
        restarts: usize,
        seed: u64,
    ) -> Result<CheckReport> {
        let n = self.n;
        self.check_dim(v)?;
        if p_support.is_empty()
            || p_support.len() != q_support.len()
            || p_support.iter().any(|i| q_support.contains(i) || *i >= n)
            || q_support.iter().any(|&i| i >= n)
        {
            return Err(MatrixError::Precondition(
                "p and q must be orthogonal diagonal projections of equal trace".into(),
            ));
        }
        let p = diag_projection(n, p_support);
        let q = diag_projection(n, q_support);
        let vs = v.adjoint();
        let iso_err = (v * &vs - &p).camax().max((&vs * v - &q).camax());
        if iso_err > UNITARY_TOL {
            return Err(MatrixError::Precondition(format!(
                "v is not a partial isometry from q onto p (deviation {iso_err:.3e})"
            )));
        }
        let one = identity(n);
        let u = v + &vs + &one - &p - &q;
        let unitary_err = unitarity_defect(&u);
        let nilpotent_err = (v * v).camax();
        let ev = expect_diag(v).camax();
        let eu_err = (expect_diag(&u) - (&one - &p - &q)).camax();
        let tr_p = trace(&p).re;
        let dist_sq = norm2(&(&u - expect_diag(&u))).powi(2);
        let identity_7_10 = (dist_sq - 2.0 * tr_p).abs();

        let e_a = LinearMap::diag_expectation(n);
        let e_uau = LinearMap::from_fn(n, |x| conj_expect(&u, x));
        let e_pa = LinearMap::from_fn(n, |x| expect_corner(&p, x));
        let e_qa = LinearMap::from_fn(n, |x| expect_corner(&q, x));
        let e_vav = LinearMap::from_fn(n, |x| expect_twisted(v, x));
        let e_vsav = LinearMap::from_fn(n, |x| expect_twisted(&vs, x));
        let total = e_a.sub(&e_uau);
        let d1 = e_pa.sub(&e_vav);
        let d2 = e_qa.sub(&e_vsav);
        // E_A − E_{uAu*} splits into the p- and q-corner pieces
        let split_err = total.distance(&d1.add(&d2));
        let corner_overlap = d1.range_overlap(&d2);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<Mat> = (0..8)
            .map(|k| if k % 2 == 0 { haar_unitary(n, &mut rng) } else { ginibre(n, &mut rng) })
            .collect();
        let mut pythagoras_7_7: f64 = 0.0;
        for x in &samples {
            let lhs = norm2(&total.apply(x)).powi(2);
            let rhs = norm2(&d1.apply(x)).powi(2) + norm2(&d2.apply(x)).powi(2);
            pythagoras_7_7 = pythagoras_7_7.max((lhs - rhs).abs());
        }

        let phi = e_pa.compose(&e_vav.complement());
        let psi = e_pa.complement().compose(&e_vav);
        let lemma71 = check_lemma71_maps(&phi, &psi, &samples, restarts, seed)?;
        let b_d1 = norm_inf2_bracket(&d1, restarts, seed, &[]);
        let b_psi = norm_inf2_bracket(&psi, restarts, seed, &[]);
        let b_phi = norm_inf2_bracket(&phi, restarts, seed, &[]);
        let sqrt5 = 5f64.sqrt();
        let ineq_7_13 = b_d1.lower <= sqrt5 * b_psi.upper + OPT_TOL;
        let ineq_7_12 = b_phi.lower <= 2.0 * b_psi.upper + OPT_TOL;

        let pass = unitary_err <= EXACT_TOL
            && nilpotent_err <= EXACT_TOL
            && ev <= EXACT_TOL
            && eu_err <= EXACT_TOL
            && identity_7_10 <= EXACT_TOL
            && split_err <= EXACT_TOL
            && corner_overlap <= EXACT_TOL
            && pythagoras_7_7 <= EXACT_TOL
            && lemma71.pass
            && ineq_7_13
            && ineq_7_12;
        Ok(CheckReport::new("thm71_chain", "7.13")
            .inputs(json!({
                "n": n,
                "p": p_support,
                "q": q_support,
                "v": matrix_json(v),
            }))
            .sides(b_d1.to_json(), json!({ "sqrt5_times_upper": sqrt5 * b_psi.upper }))
            .witness(json!({
                "u_unitary": unitary_err,
                "v_nilpotent": nilpotent_err,
                "E_A(v)": ev,
                "7.9": eu_err,
                "7.10": { "lhs": dist_sq, "rhs": 2.0 * tr_p, "error": identity_7_10 },
                "7.6": split_err,
                "7.7": { "corner_overlap": corner_overlap, "pythagoras": pythagoras_7_7 },
                "7.12": { "lhs": b_phi.to_json(), "rhs_upper": 2.0 * b_psi.upper, "pass": ineq_7_12 },
                "lemma71": lemma71.witness,
            }))
            .pass(pass)
            .matrix_model(EXACT_TOL))
    }

    /// `δ(vAv*, A) = sup ‖x − E_A(x)‖₂` over `x = vdv*`, `d` diagonal with
    /// `‖d‖ ≤ 1`. The objective is a convex quadratic form in the diagonal
    /// entries on the support of `v*v`, so the supremum is attained at
    /// unimodular entries; all sign patterns are tried (up to 2¹² of them)
    /// together with phase-by-phase ascent from seeded starts.
    pub fn delta_estimate(&self, v: &Mat, seed: u64) -> Result<(f64, CheckReport)> {
        let n = self.n;
        self.check_dim(v)?;
        let vs = v.adjoint();
        let p = v * &vs;
        let q = &vs * v;
        let diag_err = (&p - expect_diag(&p))
            .camax()
            .max((&q - expect_diag(&q)).camax());
        let proj_err = (&p * &p - &p).camax().max((&q * &q - &q).camax());
        if diag_err > UNITARY_TOL || proj_err > UNITARY_TOL || (&p * &q).camax() > UNITARY_TOL {
            return Err(MatrixError::Precondition(
                "vv* and v*v must be orthogonal diagonal projections".into(),
            ));
        }
        let support: Vec<usize> = (0..n).filter(|&i| q[(i, i)].re > 0.5).collect();
        let images: Vec<Mat> = support
            .iter()
            .map(|&j| {
                let x = v * unit(n, j, j) * &vs;
                &x - expect_diag(&x)
            })
            .collect();
        let r = support.len();
        let gram = Mat::from_fn(r, r, |i, j| inner(&images[j], &images[i]));
        let form = |d: &[Complex64]| -> f64 {
            let dv = DVector::from_column_slice(d);
            (dv.adjoint() * &gram * &dv)[(0, 0)].re
        };
        let mut best: (f64, Vec<Complex64>) = (0.0, vec![c(1.0); r]);
        let consider = |d: Vec<Complex64>, best: &mut (f64, Vec<Complex64>)| {
            let d = ascend_phases(&gram, d);
            let val = form(&d);
            if val > best.0 {
                *best = (val, d);
            }
        };
        if r <= 12 {
            for mask in 0..(1u32 << r) {
                let d = (0..r)
                    .map(|i| if mask >> i & 1 == 1 { c(-1.0) } else { c(1.0) })
                    .collect();
                consider(d, &mut best);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..DEFAULT_RESTARTS {
            let d = (0..r)
                .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
                .collect();
            consider(d, &mut best);
        }
        let delta = best.0.max(0.0).sqrt();
        let bound = norm2(&q);
        let mut d_full = Mat::zeros(n, n);
        for (k, &j) in support.iter().enumerate() {
            d_full[(j, j)] = best.1[k];
        }
        let report = CheckReport::new("delta_estimate", "2.10")
            .inputs(json!({ "n": n, "v": matrix_json(v) }))
            .sides(json!(delta), json!(bound))
            .witness(json!({ "d": matrix_json(&d_full) }))
            .pass(delta <= bound + OPT_TOL)
            .matrix_model(OPT_TOL);
        Ok((delta, report))
    }

    /// Minimum over sampled unitaries of
    /// `upper(‖E_{uAu*} − E_A‖∞,2) / ‖u − E_A(u)‖₂`, an upper bound for the
    /// scene's `α`. The sample always includes the coordinate swaps and
    /// permutations, which normalize `A`. Also checks that the ratio with the
    /// lower bracket never exceeds `4`.
    pub fn alpha_probe(&self, samples: usize, restarts: usize, seed: u64) -> (f64, CheckReport) {
        let n = self.n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut unitaries = vec![identity(n)];
        if n >= 2 {
            let mut swap = identity(n);
            swap.swap_columns(0, 1);
            unitaries.push(swap);
            let mut cycle = Mat::zeros(n, n);
            for i in 0..n {
                cycle[((i + 1) % n, i)] = c(1.0);
            }
            unitaries.push(cycle);
        }
        for _ in 0..samples {
            unitaries.push(haar_unitary(n, &mut rng));
        }
        let e_a = LinearMap::diag_expectation(n);
        let mut best: Option<(f64, Mat)> = None;
        let mut max_ratio: f64 = 0.0;
        let mut excluded = 0;
        for (k, u) in unitaries.iter().enumerate() {
            let den = norm2(&(u - expect_diag(u)));
            if den <= 1e-6 {
                excluded += 1;
                continue;
            }
            let phi = LinearMap::from_fn(n, |x| conj_expect(u, x)).sub(&e_a);
            let b = norm_inf2_bracket(&phi, restarts, seed.wrapping_add(k as u64), &[]);
            max_ratio = max_ratio.max(b.lower / den);
            let ratio = b.upper / den;
            if best.as_ref().is_none_or(|(r, _)| ratio < *r) {
                best = Some((ratio, u.clone()));
            }
        }
        let (alpha, witness) = best.unwrap_or((f64::INFINITY, identity(n)));
        let report = CheckReport::new("alpha_probe", "2.7")
            .inputs(json!({ "n": n, "samples": samples, "seed": seed }))
            .sides(json!(max_ratio), json!(4.0))
            .witness(json!({
                "alpha_upper": alpha,
                "excluded": excluded,
                "u": matrix_json(&witness),
            }))
            .pass(max_ratio <= 4.0 + OPT_TOL)
            .matrix_model(OPT_TOL);
        (alpha, report)
    }
}

/// Coordinate ascent of `d*Gd` over unimodular `d`: each phase is set to
/// the phase of `Σ_{k≠i} G_ik d_k`, which never decreases the form.
fn ascend_phases(gram: &Mat, mut d: Vec<Complex64>) -> Vec<Complex64> {
    let r = d.len();
    for _ in 0..ASCENT_STEPS {
        let mut changed = false;
        for i in 0..r {
            let mut s = c(0.0);
            for k in (0..r).filter(|&k| k != i) {
                s += gram[(i, k)] * d[k];
            }
            if s.norm() > 1e-15 {
                let target = s / c(s.norm());
                if (target - d[i]).norm() > 1e-14 {
                    d[i] = target;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d
}

/// Pythagoras `‖φ(x) ± ψ(x)‖₂² = ‖φ(x)‖₂² + ‖ψ(x)‖₂²` on the samples and the
/// bracketed `‖φ ± ψ‖∞,2 ≤ (‖φ‖²∞,2 + ‖ψ‖²∞,2)^{1/2}`. The ranges must be
/// orthogonal.
pub fn check_lemma71_maps(
    phi: &LinearMap,
    psi: &LinearMap,
    samples: &[Mat],
    restarts: usize,
    seed: u64,
) -> Result<CheckReport> {
    let overlap = phi.range_overlap(psi);
    if overlap > 1e-10 {
        return Err(MatrixError::Precondition(format!(
            "ranges are not orthogonal (overlap {overlap:.3e})"
        )));
    }
    let mut worst: f64 = 0.0;
    for x in samples {
        let (a, b) = (phi.apply(x), psi.apply(x));
        let pieces = norm2(&a).powi(2) + norm2(&b).powi(2);
        for s in [&a + &b, &a - &b] {
            worst = worst.max((norm2(&s).powi(2) - pieces).abs());
        }
    }
    let bp = norm_inf2_bracket(phi, restarts, seed, &[]);
    let bq = norm_inf2_bracket(psi, restarts, seed, &[]);
    let bound = (bp.upper.powi(2) + bq.upper.powi(2)).sqrt();
    let plus = norm_inf2_bracket(&phi.add(psi), restarts, seed, &[]);
    let minus = norm_inf2_bracket(&phi.sub(psi), restarts, seed, &[]);
    let pass = worst <= EXACT_TOL && plus.lower <= bound + OPT_TOL && minus.lower <= bound + OPT_TOL;
    Ok(CheckReport::new("lemma71", "7.1a")
        .inputs(json!({ "n": phi.n, "samples": samples.len() }))
        .sides(
            json!({ "plus": plus.to_json(), "minus": minus.to_json() }),
            json!(bound),
        )
        .witness(json!({ "pythagoras": worst, "range_overlap": overlap }))
        .pass(pass)
        .matrix_model(EXACT_TOL))
}

/// Orthonormal (in the standard inner product on vectorizations) basis of
/// the unital *-algebra generated by `gens`.
pub fn algebra_basis(n: usize, gens: &[Mat]) -> Mat {
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    let mut elements: Vec<Mat> = Vec::new();
    let push = |x: &Mat, basis: &mut Vec<DVector<Complex64>>, elements: &mut Vec<Mat>| {
        let mut v = vectorize(x);
        for b in basis.iter() {
            let coef = b.dotc(&v);
            v -= b * coef;
        }
        // second pass for numerical orthogonality
        for b in basis.iter() {
            let coef = b.dotc(&v);
            v -= b * coef;
        }
        let norm = v.norm();
        if norm > 1e-9 * x.norm().max(1.0) {
            let v = v / c(norm);
            elements.push(unvectorize(n, &v));
            basis.push(v);
            true
        } else {
            false
        }
    };
    push(&identity(n), &mut basis, &mut elements);
    for g in gens {
        push(g, &mut basis, &mut elements);
        push(&g.adjoint(), &mut basis, &mut elements);
    }
    let mut start = 0;
    loop {
        let len = elements.len();
        let mut added = false;
        for i in 0..len {
            for j in 0..len {
                if i < start && j < start {
                    continue;
                }
                let prod = &elements[i] * &elements[j];
                added |= push(&prod, &mut basis, &mut elements);
            }
        }
        if !added {
            break;
        }
        start = len;
    }
    Mat::from_columns(&basis)
}

/// `E_B` for the unital *-algebra generated by `gens`.
pub fn algebra_expectation(n: usize, gens: &[Mat]) -> LinearMap {
    LinearMap::projection(n, &algebra_basis(n, gens))
}

/// `E_{B'∩M}`: orthogonal projection onto the commutant of `gens`.
pub fn commutant_expectation(n: usize, gens: &[Mat]) -> LinearMap {
    let nn = n * n;
    let id = identity(n);
    let mut s = Mat::zeros(nn, nn);
    for g in gens.iter().flat_map(|g| [g.clone(), g.adjoint()]) {
        // vec(gx − xg) = (I⊗g − gᵀ⊗I) vec(x)
        let l = id.kronecker(&g) - g.transpose().kronecker(&id);
        s += l.adjoint() * &l;
    }
    let eig = nalgebra::SymmetricEigen::new(s);
    let scale = eig.eigenvalues.iter().cloned().fold(1.0, f64::max);
    let cols: Vec<DVector<Complex64>> = (0..nn)
        .filter(|&k| eig.eigenvalues[k] <= 1e-9 * scale)
        .map(|k| eig.eigenvectors.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        return LinearMap::zero(n);
    }
    LinearMap::projection(n, &Mat::from_columns(&cols))
}

/// The diagonal matrix units, generating the diagonal masa.
pub fn diagonal_generators(n: usize) -> Vec<Mat> {
    (0..n).map(|i| unit(n, i, i)).collect()
}

/// Result of Dixmier averaging.
#[derive(Debug, Clone)]
pub struct DixmierRun {
    pub result: Mat,
    /// `‖x_k − E_{B'}(x)‖₂` before the first step and after each step.
    pub distances: Vec<f64>,
}

impl DixmierRun {
    pub fn monotone(&self) -> bool {
        self.distances.windows(2).all(|w| w[1] <= w[0] + EXACT_TOL)
    }
}

/// Iterates `x ↦ (x + Σ_j u_j x u_j*)/(m + 1)` with `m = 8` Cayley
/// unitaries `u = (h − i)(h + i)⁻¹` of random self-adjoint `h ∈ B`.
pub fn dixmier_average(gens: &[Mat], x: &Mat, iterations: usize, seed: u64) -> DixmierRun {
    const PER_STEP: usize = 8;
    let n = x.nrows();
    let basis = algebra_basis(n, gens);
    let elements: Vec<Mat> = basis
        .column_iter()
        .map(|col| unvectorize(n, &col.into_owned()))
        .collect();
    let target = commutant_expectation(n, gens).apply(x);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i_n = identity(n) * Complex64::i();
    let mut current = x.clone();
    let mut distances = vec![norm2(&(&current - &target))];
    for _ in 0..iterations {
        let mut acc = current.clone();
        for _ in 0..PER_STEP {
            let mut h = Mat::zeros(n, n);
            for b in &elements {
                let coef: f64 = rng.sample(StandardNormal);
                h += (b + b.adjoint()) * c(coef);
            }
            h *= c(rng.random_range(0.5..5.0));
            let inv = (&h + &i_n).try_inverse().expect("h + i is invertible for self-adjoint h");
            let u = (&h - &i_n) * inv;
            acc += &u * &current * u.adjoint();
        }
        current = acc / c((PER_STEP + 1) as f64);
        distances.push(norm2(&(&current - &target)));
    }
    DixmierRun {
        result: current,
        distances,
    }
}

/// `‖E_{A'}(I − E_{B'})‖∞,2 ≤ 2‖(I − E_A)E_B‖∞,2` via brackets, with the
/// exact-zero case when `A = B`.
pub fn check_lemma53(n: usize, a_gens: &[Mat], b_gens: &[Mat], restarts: usize, seed: u64) -> CheckReport {
    let e_ac = commutant_expectation(n, a_gens);
    let e_bc = commutant_expectation(n, b_gens);
    let e_a = algebra_expectation(n, a_gens);
    let e_b = algebra_expectation(n, b_gens);
    let lhs_map = e_ac.compose(&e_bc.complement());
    let rhs_map = e_a.complement().compose(&e_b);
    let lhs = norm_inf2_bracket(&lhs_map, restarts, seed, &[]);
    let rhs = norm_inf2_bracket(&rhs_map, restarts, seed, &[]);
    let same = e_a.distance(&e_b) <= EXACT_TOL;
    let pass = if same {
        lhs.upper <= EXACT_TOL && rhs.upper <= EXACT_TOL
    } else {
        lhs.lower <= 2.0 * rhs.upper + OPT_TOL
    };
    CheckReport::new("lemma53", "5.18")
        .inputs(json!({ "n": n, "a_generators": a_gens.len(), "b_generators": b_gens.len() }))
        .sides(lhs.to_json(), json!({ "twice_upper": 2.0 * rhs.upper, "bracket": rhs.to_json() }))
        .witness(json!({ "same_algebra": same, "maximizer": matrix_json(&lhs.witness) }))
        .pass(pass)
        .matrix_model(if same { EXACT_TOL } else { OPT_TOL })
}

/// The partial isometry `Σ_{a,b} W_ab e_{p_a q_b}` with `vv* = p`, `v*v = q`
/// for a unitary `W`.
pub fn partial_isometry(n: usize, p_support: &[usize], q_support: &[usize], w: &Mat) -> Mat {
    let mut v = Mat::zeros(n, n);
    for (a, &i) in p_support.iter().enumerate() {
        for (b, &j) in q_support.iter().enumerate() {
            v[(i, j)] = w[(a, b)];
        }
    }
    v
}

/// `W = [[1, 1], [1, −1]]/√2`.
pub fn hadamard() -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)])
}

/// Generated `(p, q, v)` triples in `M_n`: for each rank `r ≤ n/2`,
/// consecutive and interleaved supports, with `W` the identity, a Hadamard
/// block when `r = 2`, and a Haar-random unitary.
pub fn chain_configurations(n: usize, seed: u64) -> Vec<(Vec<usize>, Vec<usize>, Mat)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for r in 1..=n / 2 {
        let layouts = [
            ((0..r).collect::<Vec<_>>(), (r..2 * r).collect::<Vec<_>>()),
            ((0..r).map(|k| 2 * k).collect(), (0..r).map(|k| 2 * k + 1).collect()),
        ];
        for (p, q) in layouts {
            let mut ws = vec![identity(r), haar_unitary(r, &mut rng)];
            if r == 2 {
                ws.push(hadamard());
            }
            for w in ws {
                let v = partial_isometry(n, &p, &q, &w);
                out.push((p.clone(), q.clone(), v));
            }
        }
    }
    out
}
