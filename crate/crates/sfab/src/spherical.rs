//! Spherical functions `P_lambda`: the `c`-function, the exact
//! Weyl-symmetrized monomial expansion, numeric evaluation (with automatic
//! fallback to the expansion at singular points), and values at `u = 1`,
//! which are the operator norms.
//!
//! The normalized expansion stored here is `P'_lambda`, the rescaling of
//! `P_lambda` with unit leading coefficient in the monomial basis
//! (`P_lambda = q_{t_lambda}^(1/2) / N_lambda * P'_lambda`); triangularity
//! makes `P'` the convenient basis for structure-constant reduction.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::context::Context;
use crate::parameters::ZExps;
use crate::qlaurent::{QLaurent, QRatio, Rat};
use crate::root_datum::Coweight;
use crate::torus::{TorusPoly, TorusRational, UPoint};
use crate::{Error, Result};

/// One factor of the `c`-function, as exact torus polynomials.
pub struct CFactor {
    /// Index of the positive root this factor belongs to.
    pub root_idx: usize,
    /// `1 - tau_a^{-1} tau_{a/2}^{-1/2} x^{-a^vee}`.
    pub num: TorusPoly,
    /// `1 - tau_{a/2}^{-1/2} x^{-a^vee}`.
    pub den: TorusPoly,
    /// Numeric coefficients and the coroot exponent, for fast evaluation.
    pub num_coeff: f64,
    pub den_coeff: f64,
    pub coroot: Vec<i64>,
}

/// The `c`-function as an ordered factor list over the positive roots.
pub struct CFunction {
    pub factors: Vec<CFactor>,
}

impl CFunction {
    /// Evaluate at `u`; errors when a denominator factor vanishes.
    pub fn eval(&self, u: &UPoint) -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for (k, f) in self.factors.iter().enumerate() {
            let x = u.pow(&f.coroot);
            let den = Complex64::new(1.0, 0.0) - f.den_coeff * x.inv();
            if den.norm() < 1e-9 {
                return Err(Error::SingularPoint(k));
            }
            let num = Complex64::new(1.0, 0.0) - f.num_coeff * x.inv();
            acc *= num / den;
        }
        Ok(acc)
    }

    /// The full product as a formal rational function.
    pub fn as_rational(&self, rank: usize, nvars: usize) -> TorusRational {
        let mut num = TorusPoly::one(rank, nvars);
        let mut den = TorusPoly::one(rank, nvars);
        for f in &self.factors {
            num = num.mul(&f.num);
            den = den.mul(&f.den);
        }
        TorusRational::new(num, den)
    }
}

/// Exact monomial expansion of a spherical function.
pub struct SphericalExpansion {
    pub lambda: Coweight,
    /// `P'_lambda` as a full Weyl-invariant Laurent polynomial.
    pub full: TorusPoly,
    /// Coefficients on the monomial symmetric functions `m_mu`, dominant
    /// `mu` only; the coefficient at `lambda` is exactly 1.
    pub coeffs: BTreeMap<Coweight, QLaurent>,
    /// Exponents of `q_{t_lambda}` (always even).
    pub q_trans_exps: ZExps,
    /// `N_lambda`, symbolically.
    pub n_lambda: QLaurent,
}

impl SphericalExpansion {
    /// The scalar `P_lambda / P'_lambda = q_{t_lambda}^(1/2) / N_lambda`.
    pub fn scale(&self) -> QRatio {
        let half: ZExps = self.q_trans_exps.iter().map(|x| x / 2).collect();
        QRatio::new(
            QLaurent::monomial(half, Rat::from_integer(1.into())),
            self.n_lambda.clone(),
        )
    }

    /// Coefficient of `x^mu` in `P_lambda` (any `mu`, via its dominant
    /// representative), as an exact ratio.
    pub fn p_coeff(&self, dominant_rep: &Coweight) -> QRatio {
        let c = self
            .coeffs
            .get(dominant_rep)
            .cloned()
            .unwrap_or_else(|| QLaurent::zero(self.n_lambda.nvars()));
        self.scale().mul_poly(&c)
    }

    /// Evaluate `P'_lambda` numerically.
    pub fn eval_prime(&self, u: &UPoint, z: &[f64]) -> Complex64 {
        self.full.eval(u, z)
    }

    /// Evaluate `P_lambda` numerically.
    pub fn eval(&self, u: &UPoint, z: &[f64]) -> Complex64 {
        let scale = self.scale_f64(z);
        self.eval_prime(u, z) * scale
    }

    pub fn scale_f64(&self, z: &[f64]) -> f64 {
        let mut s = 1.0;
        for (c, &e) in z.iter().zip(&self.q_trans_exps) {
            s *= c.powi(e / 2);
        }
        s / self.n_lambda.eval_f64(z)
    }
}

impl Context {
    /// Build the `c`-function factor list.
    pub fn c_function(&self) -> CFunction {
        let rank = self.rs.rank;
        let nv = self.ps.nclasses;
        let z = self.ps.z_values();
        let mut factors = Vec::new();
        for (idx, root) in self.rs.positive_roots.iter().enumerate() {
            let tau_half: ZExps = match self.rs.half_index(root) {
                Some(h) => self.ps.tau[h].clone(),
                None => vec![0; nv],
            };
            // Exponents of tau_a^{-1} tau_{a/2}^{-1/2} and tau_{a/2}^{-1/2}.
            let num_exps: ZExps = self.ps.tau[idx]
                .iter()
                .zip(&tau_half)
                .map(|(t, h)| -t - h / 2)
                .collect();
            let den_exps: ZExps = tau_half.iter().map(|h| -h / 2).collect();
            let minus_coroot: Vec<i64> = root.coroot_coords.iter().map(|x| -x).collect();
            let one = TorusPoly::one(rank, nv);
            let num = one.sub(&TorusPoly::monomial(
                minus_coroot.clone(),
                self.ps.zmono(num_exps.clone()),
            ));
            let den = one.sub(&TorusPoly::monomial(
                minus_coroot,
                self.ps.zmono(den_exps.clone()),
            ));
            let num_coeff = QLaurent::monomial(num_exps, Rat::from_integer(1.into())).eval_f64(&z);
            let den_coeff = QLaurent::monomial(den_exps, Rat::from_integer(1.into())).eval_f64(&z);
            factors.push(CFactor {
                root_idx: idx,
                num,
                den,
                num_coeff,
                den_coeff,
                coroot: root.coroot_coords.clone(),
            });
        }
        CFunction { factors }
    }

    /// Exact monomial expansion of `P'_lambda` (cached).
    ///
    /// Every Weyl term of the symmetrization is put over the common
    /// denominator `prod_a den_a(x) den_a(x^{-1})`, the numerators are
    /// summed over the group, and the quotient is recovered by exact
    /// division with an asserted zero remainder.
    pub fn spherical(&self, lambda: &Coweight) -> Result<Arc<SphericalExpansion>> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        if let Some(hit) = self.spherical_cache.lock().unwrap().get(lambda) {
            return Ok(hit.clone());
        }
        let exp = Arc::new(self.expand_spherical(lambda)?);
        self.spherical_cache
            .lock()
            .unwrap()
            .insert(lambda.clone(), exp.clone());
        Ok(exp)
    }

    fn expand_spherical(&self, lambda: &Coweight) -> Result<SphericalExpansion> {
        let rank = self.rs.rank;
        let nv = self.ps.nclasses;
        let weyl = self.weyl()?;
        let cf = self.c_function();

        // base = x^lambda * prod_a num_a(x) * prod_a den_a(x^{-1});
        // summing w(base) over the group and dividing by
        // D = prod_a den_a(x) den_a(x^{-1}) recovers sum_w w(x^l prod num/den).
        let mut base = TorusPoly::monomial(lambda.0.clone(), QLaurent::one(nv));
        let mut d_all = TorusPoly::one(rank, nv);
        for f in &cf.factors {
            base = base.mul(&f.num);
            let mirror = mirror_den(&f.den, rank, nv);
            base = base.mul(&mirror);
            d_all = d_all.mul(&f.den);
            d_all = d_all.mul(&mirror);
        }
        let mut numerator = TorusPoly::zero(rank, nv);
        for w in &weyl.elements {
            numerator = numerator.add(&base.apply_matrix(&w.matrix));
        }
        let symmetrized = numerator.div_exact(&d_all).map_err(|_| Error::Inconsistent {
            identity: "spherical symmetrization",
            detail: format!("Weyl denominator does not divide at lambda={lambda}"),
        })?;

        // P' = symmetrized / W_{0 lambda}(q^{-1}).
        let stab = self.rs.subgroup(&self.rs.stabilizer_gens(lambda));
        let w0l_inv = self.ps.poincare(&stab, true);
        let full = symmetrized
            .div_coeff_exact(&w0l_inv)
            .map_err(|_| Error::Inconsistent {
                identity: "spherical normalization",
                detail: format!("stabilizer Poincare polynomial does not divide at lambda={lambda}"),
            })?;

        // Group coefficients by dominant representative; verify symmetry and
        // triangularity along the way.
        let mut coeffs: BTreeMap<Coweight, QLaurent> = BTreeMap::new();
        for (e, c) in full.terms() {
            let mu = Coweight(e.clone());
            let rep = self.rs.dominant_rep(&mu);
            match coeffs.get(&rep) {
                None => {
                    coeffs.insert(rep, c.clone());
                }
                Some(prev) => {
                    if prev != c {
                        return Err(Error::Inconsistent {
                            identity: "spherical Weyl invariance",
                            detail: format!("coefficients differ within the orbit of {rep}"),
                        });
                    }
                }
            }
        }
        for rep in coeffs.keys() {
            if !self.rs.dominance_leq(rep, lambda) {
                return Err(Error::Inconsistent {
                    identity: "spherical triangularity",
                    detail: format!("support contains {rep} not below {lambda}"),
                });
            }
        }
        let lead = coeffs.get(lambda).cloned().unwrap_or_else(|| QLaurent::zero(nv));
        if !lead.is_one() {
            return Err(Error::Inconsistent {
                identity: "spherical triangularity",
                detail: format!("leading coefficient at {lambda} is {lead}, expected 1"),
            });
        }

        let q_trans_exps = self.ps.q_translation_exps(&self.rs, lambda)?;
        let n_lambda = self.n_lambda(lambda)?.as_ref().clone();
        Ok(SphericalExpansion {
            lambda: lambda.clone(),
            full,
            coeffs,
            q_trans_exps,
            n_lambda,
        })
    }

    /// Direct evaluation of `P_lambda(u)` by the Weyl sum over `c(wu) u^{w
    /// lambda}`; falls back to the exact expansion when some denominator
    /// factor vanishes at a `wu`.
    pub fn spherical_eval(&self, lambda: &Coweight, u: &UPoint) -> Result<Complex64> {
        match self.spherical_eval_direct(lambda, u) {
            Ok(v) => Ok(v),
            Err(Error::SingularPoint(_)) => {
                let exp = self.spherical(lambda)?;
                Ok(exp.eval(u, &self.ps.z_values()))
            }
            Err(e) => Err(e),
        }
    }

    /// The Weyl-sum formula only; errors at singular points.
    pub fn spherical_eval_direct(&self, lambda: &Coweight, u: &UPoint) -> Result<Complex64> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        let weyl = self.weyl()?;
        let cf = self.c_function();
        let z = self.ps.z_values();
        let mut acc = Complex64::new(0.0, 0.0);
        for w in &weyl.elements {
            let wu = u.apply_matrix(&w.matrix);
            let c = cf.eval(&wu)?;
            let wl = w.apply(lambda);
            acc += c * u.pow(&wl.0);
        }
        let qtr = self.ps.q_translation_exps(&self.rs, lambda)?;
        let mut pref = 1.0;
        for (zc, &e) in z.iter().zip(&qtr) {
            pref *= zc.powi(-e / 2);
        }
        let w0inv = self
            .ps
            .poincare(&weyl.elements, true)
            .eval_f64(&z);
        Ok(acc * pref / w0inv)
    }

    /// Algebra-homomorphism view: `h_u(A_lambda) = P_lambda(u)`.
    pub fn hom_value(&self, lambda: &Coweight, u: &UPoint) -> Result<Complex64> {
        self.spherical_eval(lambda, u)
    }

    /// `P_lambda(1)`, the operator norm of `A_lambda`: exact ratio and
    /// numeric value.
    pub fn norm_at_one(&self, lambda: &Coweight) -> Result<(QRatio, f64)> {
        let exp = self.spherical(lambda)?;
        let weyl = self.weyl()?;
        let order = weyl.order() as i64;
        let mut total = QLaurent::zero(self.ps.nclasses);
        for (mu, c) in &exp.coeffs {
            let stab = self.rs.subgroup(&self.rs.stabilizer_gens(mu));
            let orbit = order / stab.len() as i64;
            total = total.add(&c.scale(&Rat::from_integer(orbit.into())));
        }
        let exact = exp.scale().mul_poly(&total);
        let value = exact.eval_f64(&self.ps.z_values());
        Ok((exact, value))
    }
}

/// `1 - c x^{+a^vee}` from `1 - c x^{-a^vee}`.
fn mirror_den(den: &TorusPoly, rank: usize, nvars: usize) -> TorusPoly {
    let mut out = TorusPoly::zero(rank, nvars);
    for (e, c) in den.terms() {
        let ne: Vec<i64> = e.iter().map(|x| -x).collect();
        out.insert(ne, c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::{rat, SplitMix64};
    use crate::root_datum::RsType;

    fn ctx(kind: RsType, rank: usize, q: &[i64]) -> Context {
        Context::with_integer_q(kind, rank, q).unwrap()
    }

    #[test]
    fn c_function_a1() {
        // A1, q = 4, u = 2: c(u) = (1 - 1/4 * 1/4) / (1 - 1/4) = 5/4.
        let c = ctx(RsType::A, 1, &[4, 4]);
        let cf = c.c_function();
        let u = UPoint::from_reals(&[2.0]);
        let v = cf.eval(&u).unwrap();
        assert!((v - Complex64::new(1.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn c_function_all_tau_one() {
        // Thin building: all q_i = 1 makes c identically 1.
        let c = ctx(RsType::A, 2, &[1, 1, 1]);
        let cf = c.c_function();
        let mut rng = SplitMix64(2);
        for _ in 0..5 {
            let u = UPoint::from_angles(&[rng.f64() * 6.0, rng.f64() * 6.0]);
            let v = cf.eval(&u).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn c_function_bc1_two_block_form() {
        // BC1 (q0, q1) = (4, 2): c(u) = (1 - a^{-1} t^{-1})(1 + b^{-1} t^{-1}) / (1 - t^{-2})
        // with a = sqrt(8), b = sqrt(1/2).
        let c = ctx(RsType::BC, 1, &[4, 2]);
        let cf = c.c_function();
        let a = 8f64.sqrt();
        let b = 0.5f64.sqrt();
        let mut rng = SplitMix64(9);
        for _ in 0..8 {
            let t = Complex64::new(rng.f64() * 2.0 - 1.0, rng.f64() * 2.0 - 1.0);
            if t.norm() < 0.3 {
                continue;
            }
            let u = UPoint::new(vec![t]);
            let got = match cf.eval(&u) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let ti = 1.0 / t;
            let expect = (1.0 - ti / a) * (1.0 + ti / b) / (1.0 - ti * ti);
            assert!((got - expect).norm() < 1e-10 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn expansion_a1_hand_values() {
        let c = ctx(RsType::A, 1, &[4, 4]);
        // P'_{lambda_1} = m_{lambda_1} exactly.
        let e = c.spherical(&Coweight(vec![1])).unwrap();
        assert_eq!(e.coeffs.len(), 1);
        assert!(e.coeffs[&Coweight(vec![1])].is_one());
        // P'_{2 lambda_1} = m_2 + (1 - q^{-1}) m_0.
        let e = c.spherical(&Coweight(vec![2])).unwrap();
        assert_eq!(e.coeffs.len(), 2);
        assert!(e.coeffs[&Coweight(vec![2])].is_one());
        let expect = QLaurent::one(1).sub(&QLaurent::monomial(vec![-2], rat(1)));
        assert_eq!(e.coeffs[&Coweight(vec![0])], expect);
        // P'_{4 lambda_1} = m_4 + (1-q^{-1})(m_2 + m_0).
        let e = c.spherical(&Coweight(vec![4])).unwrap();
        assert_eq!(e.coeffs[&Coweight(vec![2])], expect);
        assert_eq!(e.coeffs[&Coweight(vec![0])], expect);
        // P_0 = 1.
        let e = c.spherical(&Coweight(vec![0])).unwrap();
        assert!(e.coeffs[&Coweight(vec![0])].is_one());
        assert_eq!(e.coeffs.len(), 1);
    }

    #[test]
    fn eval_a1_tree_eigenvalue() {
        // A1, q = 4: P_{lambda_1}(u) = (sqrt(q)/(q+1)) (u + 1/u); at u = 2
        // this is (2/5)(2 + 1/2) = 1.
        let c = ctx(RsType::A, 1, &[4, 4]);
        let u = UPoint::from_reals(&[2.0]);
        let v = c.spherical_eval(&Coweight(vec![1]), &u).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // lambda = 0 evaluates to 1 anywhere.
        let v0 = c.spherical_eval(&Coweight(vec![0]), &u).unwrap();
        assert!((v0 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn direct_vs_expansion_generic_points() {
        let mut rng = SplitMix64(31);
        for (kind, rank, q) in [
            (RsType::A, 2, vec![3i64, 3, 3]),
            (RsType::C, 2, vec![2, 3, 2]),
            (RsType::BC, 1, vec![4, 2]),
        ] {
            let c = ctx(kind, rank, &q);
            let z = c.ps.z_values();
            for lam in [Coweight(vec![1; rank]), {
                let mut v = vec![0; rank];
                v[0] = 2;
                Coweight(v)
            }] {
                let exp = c.spherical(&lam).unwrap();
                for _ in 0..6 {
                    let th: Vec<f64> = (0..rank).map(|_| rng.f64() * 6.283).collect();
                    let u = UPoint::from_angles(&th);
                    let direct = match c.spherical_eval_direct(&lam, &u) {
                        Ok(v) => v,
                        Err(_) => continue,
                    };
                    let via_exp = exp.eval(&u, &z);
                    assert!(
                        (direct - via_exp).norm() < 1e-9 * (1.0 + direct.norm()),
                        "{kind} {lam}: {direct} vs {via_exp}"
                    );
                }
            }
        }
    }

    #[test]
    fn singular_points_fall_back() {
        // u = 1 is singular for the direct formula; the expansion covers it.
        let c = ctx(RsType::A, 2, &[3, 3, 3]);
        let u = UPoint::from_reals(&[1.0, 1.0]);
        let lam = Coweight(vec![1, 1]);
        assert!(matches!(
            c.spherical_eval_direct(&lam, &u),
            Err(Error::SingularPoint(_))
        ));
        let v = c.spherical_eval(&lam, &u).unwrap();
        let (_, norm) = c.norm_at_one(&lam).unwrap();
        assert!((v.re - norm).abs() < 1e-12 && v.im.abs() < 1e-14);
    }

    #[test]
    fn norm_at_one_a1() {
        // P_{lambda_1}(1) = 2 sqrt(q) / (q + 1) = 4/5 at q = 4.
        let c = ctx(RsType::A, 1, &[4, 4]);
        let (_, v) = c.norm_at_one(&Coweight(vec![1])).unwrap();
        assert!((v - 0.8).abs() < 1e-12);
        let (_, v0) = c.norm_at_one(&Coweight(vec![0])).unwrap();
        assert!((v0 - 1.0).abs() < 1e-15);
        // Norms never exceed 1 and are positive.
        for k in 0..=4 {
            let (_, vk) = c.norm_at_one(&Coweight(vec![k])).unwrap();
            assert!(vk > 0.0 && vk <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn hom_is_weyl_invariant() {
        let c = ctx(RsType::A, 2, &[3, 3, 3]);
        let w = c.weyl().unwrap();
        let mut rng = SplitMix64(77);
        let lam = Coweight(vec![2, 1]);
        for _ in 0..4 {
            let u = UPoint::from_angles(&[rng.f64() * 6.283, rng.f64() * 6.283]);
            let base = c.hom_value(&lam, &u).unwrap();
            for e in w.elements.iter() {
                let wu = u.apply_matrix(&e.matrix);
                let v = c.hom_value(&lam, &wu).unwrap();
                assert!((v - base).norm() < 1e-10 * (1.0 + base.norm()));
            }
        }
        // A1: values at u and 1/u agree.
        let c1 = ctx(RsType::A, 1, &[4, 4]);
        let u = UPoint::from_reals(&[1.7]);
        let vi = c1
            .hom_value(&Coweight(vec![3]), &u.inverse())
            .unwrap();
        let v = c1.hom_value(&Coweight(vec![3]), &u).unwrap();
        assert!((v - vi).norm() < 1e-12);
    }

    #[test]
    fn bc1_closed_form() {
        // From counting ends on the (q0+1, q1+1) tree:
        // P'_{e1} = m_1 + (q0 - 1)(q0 q1)^{-1/2} m_0, so
        // P_{e1}(u) = (sqrt(q0 q1)(u + 1/u) + q0 - 1) / ((q1+1) q0).
        let c = ctx(RsType::BC, 1, &[4, 2]);
        let e = c.spherical(&Coweight(vec![1])).unwrap();
        assert!(e.coeffs[&Coweight(vec![1])].is_one());
        // (q0 - 1)(q0 q1)^{-1/2} = z0 z1^{-1} - z0^{-1} z1^{-1}.
        let expect = QLaurent::monomial(vec![1, -1], rat(1))
            .sub(&QLaurent::monomial(vec![-1, -1], rat(1)));
        assert_eq!(e.coeffs[&Coweight(vec![0])], expect);
        assert!((e.coeffs[&Coweight(vec![0])].eval_f64(&c.ps.z_values())
            - 3.0 / 8f64.sqrt())
            .abs()
            < 1e-12);
        let u = UPoint::from_reals(&[1.5]);
        let direct = c.spherical_eval(&Coweight(vec![1]), &u).unwrap();
        let r = 8f64.sqrt();
        let hand = (r * (1.5 + 1.0 / 1.5) + 3.0) / 12.0;
        assert!((direct.re - hand).abs() < 1e-12 && direct.im.abs() < 1e-14);
    }

    #[test]
    fn d4_sanity() {
        // D4: one parameter class, star involution trivial, and the
        // smallest sphere counts match (W0 q^{l} sums are exercised).
        let c = ctx(RsType::D, 4, &[2, 2, 2, 2, 2]);
        let lam = Coweight(vec![1, 0, 0, 0]);
        assert_eq!(c.rs.lambda_star(&lam).unwrap(), lam);
        let n = c.n_lambda_value(&lam).unwrap();
        assert!(n > crate::qlaurent::rat(1));
        // Orbit of the first fundamental coweight has 8 elements
        // (the 2n vectors +-e_i).
        assert_eq!(c.rs.weyl_orbit(&lam).len(), 8);
    }

    #[test]
    fn weyl_action_group_law() {
        // (vw) p = v (w p) on torus polynomials, for all pairs in C2.
        let c = ctx(RsType::C, 2, &[3, 2, 3]);
        let w = c.weyl().unwrap();
        let p = c.spherical(&Coweight(vec![1, 1])).unwrap().full.clone();
        let shifted = p.mul_monomial(&[1, -2], &QLaurent::one(c.ps.nclasses));
        for a in w.elements.iter().step_by(3) {
            for b in w.elements.iter().step_by(2) {
                let ab = crate::root_datum::mat_mul(&a.matrix, &b.matrix, 2);
                let lhs = shifted.apply_matrix(&ab);
                let rhs = shifted.apply_matrix(&b.matrix).apply_matrix(&a.matrix);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn symmetrization_invariance_full() {
        for (kind, rank, q, lam) in [
            (RsType::A, 2, vec![3i64, 3, 3], vec![2, 1]),
            (RsType::BC, 2, vec![2, 3, 5], vec![1, 1]),
            (RsType::G2, 2, vec![2, 7, 2], vec![1, 1]),
        ] {
            let c = ctx(kind, rank, &q);
            let e = c.spherical(&Coweight(lam)).unwrap();
            for i in 0..rank {
                let refl = e.full.apply_matrix(&c.rs.simple_refl[i]);
                assert_eq!(refl, e.full, "{kind}: expansion not s_{i}-invariant");
            }
        }
    }
}
