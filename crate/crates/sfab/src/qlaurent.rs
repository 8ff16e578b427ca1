//! Exact coefficient arithmetic: Laurent polynomials in the formal
//! parameter square roots `z_i = q_i^(1/2)`, one variable per conjugacy
//! class of building parameters, with rational coefficients.
//!
//! All symbolic identities in the crate bottom out in this ring. Division
//! is exact division with a mandatory zero-remainder check; nothing here
//! ever rounds.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational scalar.
pub type Rat = num_rational::BigRational;

/// `n` as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// `n/d` as a rational.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Parse a rational from `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<num_bigint::BigInt> {
        t.trim()
            .parse()
            .map_err(|_| Error::BadInput(format!("invalid rational: {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::BadInput(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
    }
}

/// Laurent polynomial in the variables `z_0, .., z_{nvars-1}` over the
/// rationals. Exponent vectors are kept in lexicographic (`Vec` ordering)
/// order and no zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QLaurent {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Rat>,
}

impl QLaurent {
    pub fn zero(nvars: usize) -> Self {
        QLaurent {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    /// Single term `c * z^exps`.
    pub fn monomial(exps: Vec<i32>, c: Rat) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        QLaurent { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    /// True if the polynomial is a single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    fn insert(&mut self, exps: Vec<i32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }

    /// Multiply by a single term `c * z^exps` in place.
    pub fn mul_monomial(&self, exps: &[i32], c: &Rat) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            let ne: Vec<i32> = e.iter().zip(exps).map(|(x, y)| x + y).collect();
            out.insert(ne, v * c);
        }
        out
    }

    /// Lexicographically largest term.
    pub fn lead(&self) -> Option<(&Vec<i32>, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Substitute `z_i -> z_i^(-1)` (negate all exponents).
    pub fn invert_vars(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.insert(e.iter().map(|&x| -x).collect(), c.clone());
        }
        out
    }

    /// Exact division; `Err(NonzeroRemainder)` when `den` does not divide.
    ///
    /// Reduction strips the lexicographically leading term of the running
    /// remainder. The candidate quotient exponents of an exact quotient are
    /// confined to the per-coordinate Newton box `[min(num)-min(den),
    /// max(num)-max(den)]`, so any candidate outside it certifies failure;
    /// this also bounds the iteration count.
    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        debug_assert_eq!(self.nvars, den.nvars);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        let (lo, hi) = quotient_box(self, den);
        let (dl_exp, dl_coeff) = den.lead().expect("nonzero");
        let dl_exp = dl_exp.clone();
        let dl_coeff = dl_coeff.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rl_exp, rl_coeff)) = rem.lead() {
            let q_exp: Vec<i32> = rl_exp.iter().zip(&dl_exp).map(|(a, b)| a - b).collect();
            if q_exp
                .iter()
                .zip(lo.iter().zip(&hi))
                .any(|(&e, (&l, &h))| e < l || e > h)
            {
                return Err(Error::NonzeroRemainder);
            }
            let q_coeff = rl_coeff / &dl_coeff;
            for (e, c) in &den.terms {
                let ne: Vec<i32> = e.iter().zip(&q_exp).map(|(x, y)| x + y).collect();
                rem.insert(ne, -(c * &q_coeff));
            }
            quot.insert(q_exp, q_coeff);
        }
        Ok(quot)
    }

    /// Evaluate at concrete values for the `z_i`.
    pub fn eval_f64(&self, z: &[f64]) -> f64 {
        debug_assert_eq!(z.len(), self.nvars);
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (zi, &ei) in z.iter().zip(e) {
                t *= zi.powi(ei);
            }
            acc += t;
        }
        acc
    }

    /// True when every exponent of every variable is even, i.e. the value
    /// is a Laurent polynomial in the `q_i = z_i^2` themselves.
    pub fn all_exponents_even(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|x| x % 2 == 0))
    }

    /// Exact evaluation at the rational parameter values `q_i = z_i^2`.
    /// Returns `None` if some exponent is odd (the value would involve a
    /// genuine square root).
    pub fn eval_at_q(&self, q: &[Rat]) -> Option<Rat> {
        debug_assert_eq!(q.len(), self.nvars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (qi, &ei) in q.iter().zip(e) {
                if ei % 2 != 0 {
                    return None;
                }
                let half = ei / 2;
                t *= rat_pow(qi, half);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Render with a custom variable-name table (one per class).
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (e, c) in self.terms.iter().rev() {
            let mut s = String::new();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], x)
                    }
                })
                .collect();
            if vars.is_empty() {
                s.push_str(&c.to_string());
            } else if c.is_one() {
                s.push_str(&vars.join("*"));
            } else if (-c.clone()).is_one() {
                s.push('-');
                s.push_str(&vars.join("*"));
            } else {
                s.push_str(&c.to_string());
                s.push('*');
                s.push_str(&vars.join("*"));
            }
            parts.push(s);
        }
        let mut out = String::new();
        for (k, p) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

/// Per-coordinate Newton box that must contain every exponent of an exact
/// quotient `num/den` (Minkowski additivity of Newton polytopes).
fn quotient_box(num: &QLaurent, den: &QLaurent) -> (Vec<i32>, Vec<i32>) {
    let n = num.nvars;
    let minmax = |p: &QLaurent| -> (Vec<i32>, Vec<i32>) {
        let mut lo = vec![i32::MAX; n];
        let mut hi = vec![i32::MIN; n];
        for (e, _) in p.terms() {
            for i in 0..n {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        (lo, hi)
    };
    let (nlo, nhi) = minmax(num);
    let (dlo, dhi) = minmax(den);
    let lo: Vec<i32> = nlo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
    let hi: Vec<i32> = nhi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
    (lo, hi)
}

fn rat_pow(base: &Rat, exp: i32) -> Rat {
    if exp == 0 {
        return Rat::one();
    }
    let mut acc = Rat::one();
    let b = if exp > 0 {
        base.clone()
    } else {
        base.recip()
    };
    for _ in 0..exp.unsigned_abs() {
        acc *= &b;
    }
    acc
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("z{i}")).collect();
        f.write_str(&self.to_string_with(&names))
    }
}

/// Quotient of two [`QLaurent`] values. Equality is tested by
/// cross-multiplication; reduction to a polynomial only ever happens through
/// exact division.
#[derive(Clone, Debug)]
pub struct QRatio {
    pub num: QLaurent,
    pub den: QLaurent,
}

impl QRatio {
    pub fn new(num: QLaurent, den: QLaurent) -> Self {
        assert!(!den.is_zero(), "QRatio with zero denominator");
        QRatio { num, den }
    }

    pub fn from_poly(p: QLaurent) -> Self {
        let n = p.nvars();
        QRatio {
            num: p,
            den: QLaurent::one(n),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(QLaurent::one(nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        QRatio::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn mul_poly(&self, p: &QLaurent) -> Self {
        QRatio::new(self.num.mul(p), self.den.clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        QRatio::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        QRatio::new(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    /// Exact equality via cross-multiplication.
    pub fn eq_ratio(&self, rhs: &Self) -> bool {
        self.num.mul(&rhs.den) == rhs.num.mul(&self.den)
    }

    /// Reduce to a polynomial, failing if the quotient is a true fraction.
    pub fn reduce_to_poly(&self) -> Result<QLaurent> {
        self.num.div_exact(&self.den)
    }

    pub fn eval_f64(&self, z: &[f64]) -> f64 {
        self.num.eval_f64(z) / self.den.eval_f64(z)
    }

    /// Exact rational value at `q_i = z_i^2`, when both parts have even
    /// exponents and the denominator does not vanish there.
    pub fn eval_at_q(&self, q: &[Rat]) -> Option<Rat> {
        let n = self.num.eval_at_q(q)?;
        let d = self.den.eval_at_q(q)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }

    /// Canonical display form: denominator normalized to leading
    /// coefficient one, `num` alone when the denominator is trivial.
    pub fn canonical(&self) -> (QLaurent, QLaurent) {
        let lead = self
            .den
            .lead()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::one);
        let inv = lead.recip();
        (self.num.scale(&inv), self.den.scale(&inv))
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        let (num, den) = self.canonical();
        if den.is_one() {
            num.to_string_with(names)
        } else {
            format!(
                "({}) / ({})",
                num.to_string_with(names),
                den.to_string_with(names)
            )
        }
    }
}

impl fmt::Display for QRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nv = self.num.nvars();
        let names: Vec<String> = (0..nv).map(|i| format!("z{i}")).collect();
        f.write_str(&self.to_string_with(&names))
    }
}

/// Small deterministic PRNG for randomized exactness tests.
#[derive(Clone)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.below((hi - lo + 1) as u64) as i64)
    }

    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
