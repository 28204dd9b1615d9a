//! Exact Gaussian rationals and certified square-root brackets.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

/// `re + im·i` with both parts exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> GaussRat {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> GaussRat {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> GaussRat {
        GaussRat::real(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> GaussRat {
        GaussRat::real(rat(num, den))
    }

    pub fn i() -> GaussRat {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn zero() -> GaussRat {
        GaussRat::default()
    }

    pub fn one() -> GaussRat {
        GaussRat::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> GaussRat {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `|z|²`, exact.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Certified bracket `lo ≤ |z| ≤ hi`; `lo == hi` when `|z|` is rational.
    pub fn abs_bounds(&self) -> (BigRational, BigRational) {
        sqrt_bounds(&self.abs_sq())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// `[[re_num, re_den], [im_num, im_den]]`.
    pub fn to_json(&self) -> Value {
        json!([ratio_json(&self.re), ratio_json(&self.im)])
    }
}

/// `[numerator, denominator]`, as JSON numbers when they fit in 64 bits and
/// as decimal strings otherwise.
pub fn ratio_json(r: &BigRational) -> Value {
    let part = |n: &BigInt| match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    };
    json!([part(r.numer()), part(r.denom())])
}

/// Bits of precision used for irrational square-root brackets.
pub const SQRT_BITS: u32 = 96;

/// Certified bracket for `√r`, `r ≥ 0`, tight to `2⁻⁹⁶` relative to the
/// denominator; exact when `r` is the square of a rational.
pub fn sqrt_bounds(r: &BigRational) -> (BigRational, BigRational) {
    assert!(!r.is_negative(), "square root of a negative rational");
    let (n, d) = (r.numer(), r.denom());
    let nd = n * d;
    let root = nd.sqrt();
    if &root * &root == nd {
        let exact = BigRational::new(root, d.clone());
        return (exact.clone(), exact);
    }
    let scale = BigInt::one() << SQRT_BITS;
    let scaled = &nd * &scale * &scale;
    let s = scaled.sqrt();
    let den = d * &scale;
    (
        BigRational::new(s.clone(), den.clone()),
        BigRational::new(s + BigInt::one(), den),
    )
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        &self * &rhs
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl From<BigRational> for GaussRat {
    fn from(re: BigRational) -> GaussRat {
        GaussRat::real(re)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", self.re, sign, self.im.abs())
            }
        }
    }
}
