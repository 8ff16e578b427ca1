//! The group algebra of the coweight lattice: Laurent polynomials in the
//! formal exponentials `x^lambda` with [`QLaurent`] coefficients, the Weyl
//! action `w x^lambda = x^{w lambda}`, exact division (used to clear Weyl
//! denominators), and numeric evaluation at points of `Hom(P, C*)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use crate::qlaurent::{QLaurent, Rat};
use crate::root_datum::Coweight;
use crate::{Error, Result};

/// Element of `C[P]` with symbolic-parameter coefficients. Exponent vectors
/// are coweight coordinates in the fundamental-coweight basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusPoly {
    rank: usize,
    nvars: usize,
    terms: BTreeMap<Vec<i64>, QLaurent>,
}

impl TorusPoly {
    pub fn zero(rank: usize, nvars: usize) -> Self {
        TorusPoly {
            rank,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize, nvars: usize) -> Self {
        Self::monomial(vec![0; rank], QLaurent::one(nvars))
    }

    /// `c * x^mu`.
    pub fn monomial(mu: Vec<i64>, c: QLaurent) -> Self {
        let rank = mu.len();
        let nvars = c.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mu, c);
        }
        TorusPoly {
            rank,
            nvars,
            terms,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &QLaurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mu: &[i64]) -> QLaurent {
        self.terms
            .get(mu)
            .cloned()
            .unwrap_or_else(|| QLaurent::zero(self.nvars))
    }

    pub fn insert(&mut self, mu: Vec<i64>, c: QLaurent) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mu) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.rank, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert(e, ca.mul(cb));
            }
        }
        out
    }

    /// Multiply by `c * x^mu`.
    pub fn mul_monomial(&self, mu: &[i64], c: &QLaurent) -> Self {
        let mut out = Self::zero(self.rank, self.nvars);
        for (e, v) in &self.terms {
            let ne: Vec<i64> = e.iter().zip(mu).map(|(x, y)| x + y).collect();
            out.insert(ne, v.mul(c));
        }
        out
    }

    pub fn scale_q(&self, c: &QLaurent) -> Self {
        let mut out = Self::zero(self.rank, self.nvars);
        for (e, v) in &self.terms {
            out.insert(e.clone(), v.mul(c));
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.rank, self.nvars);
        for (e, v) in &self.terms {
            out.insert(e.clone(), v.scale(c));
        }
        out
    }

    /// Divide every coefficient by `d` exactly.
    pub fn div_coeff_exact(&self, d: &QLaurent) -> Result<Self> {
        let mut out = Self::zero(self.rank, self.nvars);
        for (e, v) in &self.terms {
            out.insert(e.clone(), v.div_exact(d)?);
        }
        Ok(out)
    }

    /// Apply an integer matrix to all exponents: `x^mu -> x^{M mu}`.
    /// With `M` a Weyl element matrix this is the Weyl action on `C[P]`.
    pub fn apply_matrix(&self, m: &[i64]) -> Self {
        let n = self.rank;
        debug_assert_eq!(m.len(), n * n);
        let mut out = Self::zero(n, self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0i64; n];
            for (r, slot) in ne.iter_mut().enumerate() {
                let mut acc = 0i64;
                for (cidx, &ec) in e.iter().enumerate() {
                    acc += m[r * n + cidx] * ec;
                }
                *slot = acc;
            }
            out.insert(ne, c.clone());
        }
        out
    }

    /// Exact division in the two-level Laurent ring. The monomial order is
    /// lexicographic on torus exponents; coefficient quotients are computed
    /// by exact [`QLaurent`] division, which fails (with
    /// `Error::NonzeroRemainder`) whenever the division is not exact.
    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.rank, self.nvars));
        }
        let (lo, hi) = quotient_box(self, den);
        let (dl_exp, dl_coeff) = den.terms.iter().next_back().expect("nonzero");
        let dl_exp = dl_exp.clone();
        let dl_coeff = dl_coeff.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.rank, self.nvars);
        while let Some((rl_exp, rl_coeff)) = rem.terms.iter().next_back() {
            let q_exp: Vec<i64> = rl_exp.iter().zip(&dl_exp).map(|(a, b)| a - b).collect();
            if q_exp
                .iter()
                .zip(lo.iter().zip(&hi))
                .any(|(&e, (&l, &h))| e < l || e > h)
            {
                return Err(Error::NonzeroRemainder);
            }
            let q_coeff = rl_coeff.div_exact(&dl_coeff)?;
            for (e, c) in &den.terms {
                let ne: Vec<i64> = e.iter().zip(&q_exp).map(|(x, y)| x + y).collect();
                rem.insert(ne, c.mul(&q_coeff).neg());
            }
            quot.insert(q_exp, q_coeff);
        }
        Ok(quot)
    }

    /// Numeric evaluation at `u` with parameter square roots `z`.
    pub fn eval(&self, u: &UPoint, z: &[f64]) -> Complex64 {
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            acc += u.pow(e) * c.eval_f64(z);
        }
        acc
    }

    /// Support as coweights.
    pub fn support(&self) -> Vec<Coweight> {
        self.terms.keys().map(|e| Coweight(e.clone())).collect()
    }
}

/// Formal quotient of two torus polynomials. Reduction is only performed by
/// exact division with an asserted zero remainder.
#[derive(Clone, Debug)]
pub struct TorusRational {
    pub num: TorusPoly,
    pub den: TorusPoly,
}

impl TorusRational {
    pub fn new(num: TorusPoly, den: TorusPoly) -> Self {
        assert!(!den.is_zero(), "TorusRational with zero denominator");
        TorusRational { num, den }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        TorusRational::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    /// Reduce to a polynomial; the remainder must vanish.
    pub fn reduce_exact(&self) -> Result<TorusPoly> {
        self.num.div_exact(&self.den)
    }

    pub fn eval(&self, u: &UPoint, z: &[f64]) -> Complex64 {
        self.num.eval(u, z) / self.den.eval(u, z)
    }
}

fn quotient_box(num: &TorusPoly, den: &TorusPoly) -> (Vec<i64>, Vec<i64>) {
    let n = num.rank;
    let minmax = |p: &TorusPoly| -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
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
    let lo: Vec<i64> = nlo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
    let hi: Vec<i64> = nhi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
    (lo, hi)
}

/// A point `u` of `Hom(P, C*)`, stored through its values `u_i = u^{lambda_i}`
/// on the fundamental coweights.
#[derive(Clone, Debug)]
pub struct UPoint {
    pub u: Vec<Complex64>,
}

impl UPoint {
    pub fn new(u: Vec<Complex64>) -> Self {
        UPoint { u }
    }

    pub fn from_reals(vals: &[f64]) -> Self {
        UPoint {
            u: vals.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    /// Torus point with angles `theta_i`: `u_i = exp(i theta_i)`.
    pub fn from_angles(theta: &[f64]) -> Self {
        UPoint {
            u: theta
                .iter()
                .map(|&t| Complex64::new(t.cos(), t.sin()))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.u.len()
    }

    /// `u^mu` for a coweight with coordinates `mu`.
    pub fn pow(&self, mu: &[i64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (ui, &m) in self.u.iter().zip(mu) {
            if m != 0 {
                acc *= ui.powi(m as i32);
            }
        }
        acc
    }

    /// The point `w u` defined by `(w u)^lambda = u^{w lambda}`; `m` is the
    /// coweight-coordinate matrix of `w`.
    pub fn apply_matrix(&self, m: &[i64]) -> Self {
        let n = self.u.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            // (wu)_i = u^{w lambda_i}; the coordinates of w lambda_i form
            // column i of the matrix.
            let mut acc = Complex64::new(1.0, 0.0);
            for (j, uj) in self.u.iter().enumerate() {
                let p = m[j * n + i];
                if p != 0 {
                    acc *= uj.powi(p as i32);
                }
            }
            out.push(acc);
        }
        UPoint { u: out }
    }

    /// The inverse point `u^{-1}`.
    pub fn inverse(&self) -> Self {
        UPoint {
            u: self.u.iter().map(|z| 1.0 / z).collect(),
        }
    }
}
