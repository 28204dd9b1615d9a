//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's reduction, folding or algebra code;
//! words are plain `Vec<i32>` (±i for generator i) and elements are maps
//! from reduced words to pairs of rationals.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use masa_core::{Element, Word};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Raw = Vec<i32>;

/// Free reduction with a stack.
pub fn reduce(raw: &[i32]) -> Raw {
    let mut out: Raw = Vec::with_capacity(raw.len());
    for &x in raw {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn mul(u: &[i32], v: &[i32]) -> Raw {
    let mut w = u.to_vec();
    w.extend_from_slice(v);
    reduce(&w)
}

pub fn inv(u: &[i32]) -> Raw {
    u.iter().rev().map(|x| -x).collect()
}

pub fn power(g: i32, m: i64) -> Raw {
    let letter = if m >= 0 { g } else { -g };
    vec![letter; m.unsigned_abs() as usize]
}

/// Member of the cyclic subgroup generated by generator `g`.
pub fn in_gen_subgroup(w: &[i32], g: i32) -> bool {
    w.iter().all(|&x| x == g) || w.iter().all(|&x| x == -g)
}

/// All reduced words up to `len` in rank `rank`, by brute force over
/// every letter sequence (no pruning, so it is obviously complete).
pub fn ball(rank: i32, len: usize) -> Vec<Raw> {
    let letters: Vec<i32> = (1..=rank).flat_map(|i| [i, -i]).collect();
    let mut seen = HashSet::new();
    let mut frontier = vec![Vec::new()];
    seen.insert(Vec::new());
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for &x in &letters {
                let mut raw: Raw = w.clone();
                raw.push(x);
                let r = reduce(&raw);
                if seen.insert(r.clone()) {
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    let mut all: Vec<Raw> = seen.into_iter().collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    all
}

pub fn raw_of(w: &Word) -> Raw {
    w.letters().iter().map(|l| l.signed_index()).collect()
}

pub fn word_of(raw: &[i32], rank: usize) -> Word {
    Word::reduce(raw, rank).expect("letters within rank")
}

/// `re + i·im`.
pub type Coef = (BigRational, BigRational);

/// Group-algebra element over the Gaussian rationals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Alg(pub BTreeMap<Raw, Coef>);

fn cmul(x: &Coef, y: &Coef) -> Coef {
    (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

impl Alg {
    pub fn word(w: Raw) -> Alg {
        let one = BigRational::from_integer(1.into());
        Alg(BTreeMap::from([(w, (one, BigRational::zero()))]))
    }

    pub fn from_element(x: &Element) -> Alg {
        let mut map = BTreeMap::new();
        for (w, c) in x.terms() {
            map.insert(raw_of(w), (c.re.clone(), c.im.clone()));
        }
        Alg(map).clean()
    }

    fn clean(mut self) -> Alg {
        self.0.retain(|_, c| !(c.0.is_zero() && c.1.is_zero()));
        self
    }

    fn accumulate(map: &mut BTreeMap<Raw, Coef>, w: Raw, c: Coef) {
        let e = map
            .entry(w)
            .or_insert_with(|| (BigRational::zero(), BigRational::zero()));
        e.0 += c.0;
        e.1 += c.1;
    }

    pub fn add(&self, other: &Alg) -> Alg {
        let mut map = self.0.clone();
        for (w, c) in &other.0 {
            Alg::accumulate(&mut map, w.clone(), c.clone());
        }
        Alg(map).clean()
    }

    pub fn neg(&self) -> Alg {
        Alg(self.0.iter().map(|(w, c)| (w.clone(), (-&c.0, -&c.1))).collect())
    }

    pub fn sub(&self, other: &Alg) -> Alg {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Alg) -> Alg {
        let mut map = BTreeMap::new();
        for (u, c) in &self.0 {
            for (v, d) in &other.0 {
                Alg::accumulate(&mut map, mul(u, v), cmul(c, d));
            }
        }
        Alg(map).clean()
    }

    pub fn adjoint(&self) -> Alg {
        Alg(self.0.iter().map(|(w, c)| (inv(w), (c.0.clone(), -&c.1))).collect())
    }

    /// Expectation onto the cyclic subgroup of generator `g`.
    pub fn expect_gen(&self, g: i32) -> Alg {
        Alg(self
            .0
            .iter()
            .filter(|(w, _)| in_gen_subgroup(w, g))
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect())
    }

    pub fn trace(&self) -> Coef {
        self.0
            .get(&Vec::new())
            .cloned()
            .unwrap_or((BigRational::zero(), BigRational::zero()))
    }

    pub fn norm2_sq(&self) -> BigRational {
        self.0.values().map(|c| &c.0 * &c.0 + &c.1 * &c.1).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ |c|` in floating point.
    pub fn norm1_f64(&self) -> f64 {
        self.0
            .values()
            .map(|c| {
                let re = f(&c.0);
                let im = f(&c.1);
                re.hypot(im)
            })
            .sum()
    }
}

pub fn f(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(r: &BigRational) -> BigRational {
    r.abs()
}

/// Rank-two words packed as two bits per letter (`a, A, b, B` = 0..3, so
/// inversion flips the low bit) plus the length in bits 40 and up.
pub mod packed {
    use std::collections::HashSet;

    pub type P = u64;

    pub const E: P = 0;

    pub fn len(w: P) -> usize {
        (w >> 40) as usize
    }

    fn letter(w: P, i: usize) -> u64 {
        (w >> (2 * i)) & 3
    }

    pub fn from_raw(raw: &[i32]) -> P {
        let mut w = 0u64;
        for (i, &x) in raw.iter().enumerate() {
            let code = match x {
                1 => 0,
                -1 => 1,
                2 => 2,
                -2 => 3,
                _ => panic!("rank two only"),
            };
            w |= code << (2 * i);
        }
        w | ((raw.len() as u64) << 40)
    }

    pub fn inv(w: P) -> P {
        let n = len(w);
        let mut out = 0u64;
        for i in 0..n {
            out |= (letter(w, n - 1 - i) ^ 1) << (2 * i);
        }
        out | ((n as u64) << 40)
    }

    pub fn mul(u: P, v: P) -> P {
        let (mut nu, nv) = (len(u), len(v));
        let mut j = 0;
        while nu > 0 && j < nv && letter(u, nu - 1) == letter(v, j) ^ 1 {
            nu -= 1;
            j += 1;
        }
        let mut out = u & ((1u64 << (2 * nu)) - 1);
        for k in j..nv {
            out |= letter(v, k) << (2 * (nu + k - j));
        }
        out | (((nu + nv - j) as u64) << 40)
    }

    /// Closure of `gens` under products of two members, keeping only
    /// results of length at most `bound`.
    pub fn pair_closure(gens: &[P], bound: usize) -> Vec<P> {
        let mut set: HashSet<P> = gens.iter().flat_map(|&g| [g, inv(g)]).collect();
        loop {
            let items: Vec<P> = set.iter().copied().collect();
            let mut grew = false;
            for &x in &items {
                for &y in &items {
                    let z = mul(x, y);
                    if len(z) <= bound && set.insert(z) {
                        grew = true;
                    }
                }
            }
            if !grew {
                let mut out: Vec<P> = set.into_iter().filter(|&w| w != E).collect();
                out.sort_unstable();
                return out;
            }
        }
    }

    /// Elements reachable from the identity by right multiplication with
    /// `steps` while every partial product has length at most `bound`.
    pub fn reach(steps: &[P], bound: usize) -> HashSet<P> {
        let mut seen = HashSet::from([E]);
        let mut stack = vec![E];
        while let Some(w) = stack.pop() {
            for &s in steps {
                let next = mul(w, s);
                if len(next) <= bound && seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        seen
    }
}

/// Membership oracle for subgroups of the rank-two free group generated by
/// words of length at most `gen_len`, valid for queries of length at most
/// `query_len`.
///
/// Nielsen reduction only ever replaces a generator by a product of two
/// current generators of no greater length, so the closure of the
/// generators under products of length `≤ gen_len` contains a Nielsen
/// reduced basis. Any `w` in the subgroup is a reduced product of basis
/// elements, and each partial product keeps the prefix of `w` up to the
/// middle of its last factor, so its length is at most
/// `|w| + gen_len/2 + 1`. Reaching `w` with those partial lengths is
/// therefore complete.
pub fn membership_oracle(gens: &[Raw], gen_len: usize, query_len: usize) -> HashSet<packed::P> {
    let gens: Vec<packed::P> = gens.iter().map(|g| packed::from_raw(g)).collect();
    let steps = packed::pair_closure(&gens, gen_len);
    packed::reach(&steps, query_len + gen_len / 2 + 1)
        .into_iter()
        .filter(|&w| packed::len(w) <= query_len)
        .collect()
}
