//! Vertex counts, saturated coweight sets, structure constants of the
//! averaging-operator algebra, the boundary-integral homomorphism
//! `phi_lambda`, and horocycle count distributions.
//!
//! Structure constants are computed by expanding products `P'_lambda
//! P'_mu` in the `P'` basis; triangularity (unit leading coefficient)
//! makes the reduction a pure subtraction cascade, so every `e`
//! coefficient stays a Laurent polynomial and every `a` value an exact
//! ratio of such.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Signed;

use crate::context::Context;
use crate::parameters::ZExps;
use crate::qlaurent::{QLaurent, QRatio, Rat};
use crate::root_datum::Coweight;
use crate::{Error, Result};

/// The saturated set with highest coweight `lambda`.
pub struct SaturatedSet {
    pub lambda: Coweight,
    /// Dominant members, sorted.
    pub dominant_part: Vec<Coweight>,
    /// The full Weyl-stable set, sorted.
    pub full: Vec<Coweight>,
}

/// One row `A_lambda A_mu = sum_nu a_{lambda,mu;nu} A_nu`.
pub struct StructureRow {
    pub lambda: Coweight,
    pub mu: Coweight,
    /// Exact structure constants, keyed by `nu`.
    pub entries: BTreeMap<Coweight, QRatio>,
    /// The `P'`-basis coefficients `e_{lambda,mu;nu}`.
    pub e_coeffs: BTreeMap<Coweight, QLaurent>,
}

/// Horocycle count distribution of a sphere: for each `mu` in the
/// saturated set, the number of `y` at distance `lambda` with horocycle
/// coweight `mu`.
pub struct HorocycleDistribution {
    pub lambda: Coweight,
    /// Symbolic count (a Laurent polynomial in the `q_i`) and its exact
    /// value at the context parameters.
    pub counts: BTreeMap<Coweight, (QLaurent, Rat)>,
}

/// The boundary-integral eigenvalue `phi_lambda(u) = sum_mu r^{-mu}
/// a_{lambda, nu - mu; nu} u^mu` over the saturated set.
pub struct PhiExpansion {
    pub lambda: Coweight,
    /// The auxiliary far coweight `nu` used.
    pub nu: Coweight,
    pub coeffs: BTreeMap<Coweight, QRatio>,
}

impl Context {
    /// `N_lambda`, symbolically, via the inverted Poincare formula
    /// `(W_0(q^{-1}) / W_{0 lambda}(q^{-1})) q_{t_lambda}`, cross-checked
    /// against the minimal-coset-representative formula
    /// `(W_0(q) / W_{0 lambda}(q)) q_{w_lambda}` with
    /// `q_{w_lambda} = q_{t_lambda} q_{w_0}^{-1} q_{w_{0 lambda}}`.
    pub fn n_lambda(&self, lambda: &Coweight) -> Result<Arc<QLaurent>> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        if let Some(hit) = self.nlambda_cache.lock().unwrap().get(lambda) {
            return Ok(hit.clone());
        }
        let weyl = self.weyl()?;
        let stab = self.rs.subgroup(&self.rs.stabilizer_gens(lambda));
        let qt = self.ps.q_translation_exps(&self.rs, lambda)?;

        let w0_inv = self.ps.poincare(&weyl.elements, true);
        let w0l_inv = self.ps.poincare(&stab, true);
        let ratio_b = w0_inv.div_exact(&w0l_inv).map_err(|_| Error::Inconsistent {
            identity: "parabolic Poincare factorization",
            detail: format!("W0(1/q) not divisible by stabilizer polynomial at {lambda}"),
        })?;
        let n_b = ratio_b.mul_monomial(&qt, &Rat::from_integer(1.into()));

        let w0_q = self.ps.poincare(&weyl.elements, false);
        let w0l_q = self.ps.poincare(&stab, false);
        let ratio_a = w0_q.div_exact(&w0l_q).map_err(|_| Error::Inconsistent {
            identity: "parabolic Poincare factorization",
            detail: format!("W0(q) not divisible by stabilizer polynomial at {lambda}"),
        })?;
        let q_w0 = self.ps.q_word_exps(&weyl.longest_element().word);
        let stab_longest = stab.iter().max_by_key(|e| e.len()).expect("nonempty");
        let q_w0l = self.ps.q_word_exps(&stab_longest.word);
        let q_wl: ZExps = qt
            .iter()
            .zip(q_w0.iter().zip(&q_w0l))
            .map(|(t, (a, b))| t - a + b)
            .collect();
        let n_a = ratio_a.mul_monomial(&q_wl, &Rat::from_integer(1.into()));

        if n_a != n_b {
            return Err(Error::Inconsistent {
                identity: "dual vertex-count formulas",
                detail: format!("lambda={lambda}: {n_a} vs {n_b}"),
            });
        }
        debug_assert!(n_b.all_exponents_even());
        let arc = Arc::new(n_b);
        self.nlambda_cache
            .lock()
            .unwrap()
            .insert(lambda.clone(), arc.clone());
        Ok(arc)
    }

    /// Exact numeric `N_lambda` at the context parameters.
    pub fn n_lambda_value(&self, lambda: &Coweight) -> Result<Rat> {
        let n = self.n_lambda(lambda)?;
        n.eval_at_q(&self.ps.class_q).ok_or(Error::Inconsistent {
            identity: "vertex count rationality",
            detail: format!("N_{lambda} has odd parameter exponents"),
        })
    }

    /// All dominant `mu` with `mu` below `lambda` in the dominance order.
    pub fn dominant_below(&self, lambda: &Coweight) -> Result<Vec<Coweight>> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        let n = self.rs.rank;
        let bounds = self.rs.qplus_box(lambda);
        let mut out = Vec::new();
        let mut k = vec![0i64; n];
        'outer: loop {
            // mu = lambda - sum k_i g_i
            let mut mu = lambda.clone();
            for i in 0..n {
                for (c, g) in mu.0.iter_mut().zip(&self.rs.qplus_gens[i]) {
                    *c -= k[i] * g;
                }
            }
            if mu.is_dominant() {
                out.push(mu);
            }
            // increment the counter
            for i in 0..n {
                k[i] += 1;
                if k[i] <= bounds[i] {
                    continue 'outer;
                }
                k[i] = 0;
            }
            break;
        }
        out.sort();
        Ok(out)
    }

    /// The saturated set with highest coweight `lambda`.
    pub fn saturated_set(&self, lambda: &Coweight) -> Result<SaturatedSet> {
        let dominant_part = self.dominant_below(lambda)?;
        let mut full: Vec<Coweight> = Vec::new();
        for mu in &dominant_part {
            full.extend(self.rs.weyl_orbit(mu));
        }
        full.sort();
        full.dedup();
        Ok(SaturatedSet {
            lambda: lambda.clone(),
            dominant_part,
            full,
        })
    }

    /// Minimal `nu = N (lambda_1 + .. + lambda_n)` with `nu - mu` strongly
    /// dominant for every `mu` in the saturated set of `lambda`.
    pub fn choose_nu_far(&self, lambda: &Coweight) -> Result<Coweight> {
        let sat = self.saturated_set(lambda)?;
        let mut need: i64 = 1;
        for mu in &sat.full {
            for &c in &mu.0 {
                need = need.max(c + 1);
            }
        }
        Ok(Coweight(vec![need; self.rs.rank]))
    }

    /// Full structure-constant row for `A_lambda A_mu`.
    pub fn structure_row(&self, lambda: &Coweight, mu: &Coweight) -> Result<StructureRow> {
        self.structure_row_with_order(lambda, mu, false)
    }

    /// As [`structure_row`], with the tie-break between incomparable
    /// maximal exponents reversed (used to verify order independence).
    pub fn structure_row_with_order(
        &self,
        lambda: &Coweight,
        mu: &Coweight,
        reverse_tie: bool,
    ) -> Result<StructureRow> {
        let pl = self.spherical(lambda)?;
        let pm = self.spherical(mu)?;
        let mut prod = pl.full.mul(&pm.full);
        let mut e_coeffs: BTreeMap<Coweight, QLaurent> = BTreeMap::new();
        let guard = self.dominant_below(&lambda.add(mu))?.len() + 8;
        let mut steps = 0;
        while !prod.is_zero() {
            steps += 1;
            if steps > guard {
                return Err(Error::Inconsistent {
                    identity: "structure-constant reduction",
                    detail: "reduction did not terminate within the dominance bound".into(),
                });
            }
            let pick = self.max_dominant_exponent(&prod, reverse_tie)?;
            let e = prod.coeff(&pick.0);
            let p_pick = self.spherical(&pick)?;
            prod = prod.sub(&p_pick.full.scale_q(&e));
            e_coeffs.insert(pick, e);
        }
        // Top coefficient is exactly 1.
        let top = lambda.add(mu);
        if !e_coeffs.get(&top).map(|c| c.is_one()).unwrap_or(false) {
            return Err(Error::Inconsistent {
                identity: "structure top coefficient",
                detail: format!("e at {top} is not 1"),
            });
        }
        // Assemble the exact a-values and verify the row sums to one:
        // sum_nu z^((qt(l)+qt(m)-qt(nu))/2) N_nu e_nu = N_lambda N_mu.
        let qt_l = self.ps.q_translation_exps(&self.rs, lambda)?;
        let qt_m = self.ps.q_translation_exps(&self.rs, mu)?;
        let n_l = self.n_lambda(lambda)?;
        let n_m = self.n_lambda(mu)?;
        let den = n_l.mul(&n_m);
        let mut entries = BTreeMap::new();
        let mut row_sum = QLaurent::zero(self.ps.nclasses);
        for (nu, e) in &e_coeffs {
            let qt_n = self.ps.q_translation_exps(&self.rs, nu)?;
            let half: ZExps = qt_l
                .iter()
                .zip(qt_m.iter().zip(&qt_n))
                .map(|(a, (b, c))| (a + b - c) / 2)
                .collect();
            let n_nu = self.n_lambda(nu)?;
            let num = n_nu.mul(e).mul(&self.ps.zmono(half));
            row_sum = row_sum.add(&num);
            if !e.is_zero() {
                entries.insert(nu.clone(), QRatio::new(num, den.clone()));
            }
        }
        if row_sum != den {
            return Err(Error::Inconsistent {
                identity: "structure row sum",
                detail: format!("sum of a at ({lambda},{mu}) is {row_sum} over {den}"),
            });
        }
        Ok(StructureRow {
            lambda: lambda.clone(),
            mu: mu.clone(),
            entries,
            e_coeffs,
        })
    }

    /// Largest dominant exponent in the support (all maximal support
    /// exponents of a Weyl-invariant polynomial are dominant).
    fn max_dominant_exponent(
        &self,
        p: &crate::torus::TorusPoly,
        reverse_tie: bool,
    ) -> Result<Coweight> {
        let doms: Vec<Coweight> = p
            .terms()
            .map(|(e, _)| Coweight(e.clone()))
            .filter(|c| c.is_dominant())
            .collect();
        if doms.is_empty() {
            return Err(Error::Inconsistent {
                identity: "structure-constant reduction",
                detail: "nonzero invariant polynomial without dominant exponent".into(),
            });
        }
        let mut maximal: Vec<&Coweight> = Vec::new();
        'cand: for c in &doms {
            for d in &doms {
                if d != c && self.rs.dominance_leq(c, d) {
                    continue 'cand;
                }
            }
            maximal.push(c);
        }
        let pick = if reverse_tie {
            maximal.iter().min().expect("nonempty")
        } else {
            maximal.iter().max().expect("nonempty")
        };
        Ok((*pick).clone())
    }

    /// `e_{lambda,kappa;nu}` via the reduction restricted to the upward
    /// cone of `nu` (exponents `eta` with `eta - nu` in `Q^+`). The cone is
    /// upward closed, so the restricted cascade reproduces exactly the
    /// cone-indexed coefficients of the full reduction.
    fn e_at_target(&self, lambda: &Coweight, kappa: &Coweight, nu: &Coweight) -> Result<QLaurent> {
        let pl = self.spherical(lambda)?;
        let pk = self.spherical(kappa)?;
        let nv = self.ps.nclasses;
        let mut cone = crate::torus::TorusPoly::zero(self.rs.rank, nv);
        for (e1, c1) in pl.full.terms() {
            for (e2, c2) in pk.full.terms() {
                let eta: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let diff = Coweight(eta.iter().zip(&nu.0).map(|(a, b)| a - b).collect());
                if self.rs.qplus_coefficients(&diff).is_some() {
                    cone.insert(eta, c1.mul(c2));
                }
            }
        }
        let mut steps = 0usize;
        loop {
            if cone.is_zero() {
                return Ok(QLaurent::zero(nv));
            }
            steps += 1;
            if steps > 4096 {
                return Err(Error::Inconsistent {
                    identity: "structure-constant reduction",
                    detail: "cone reduction did not terminate".into(),
                });
            }
            let pick = self.max_dominant_exponent(&cone, false)?;
            let e = cone.coeff(&pick.0);
            if &pick == nu {
                return Ok(e);
            }
            // Subtract e * P'_pick, restricted to the cone.
            let p_pick = self.spherical(&pick)?;
            for (eta, c) in p_pick.full.terms() {
                let diff = Coweight(eta.iter().zip(&nu.0).map(|(a, b)| a - b).collect());
                if self.rs.qplus_coefficients(&diff).is_some() {
                    cone.insert(eta.clone(), c.mul(&e).neg());
                }
            }
        }
    }

    /// Single structure constant `a_{lambda,kappa;nu}`.
    pub fn structure_constant(
        &self,
        lambda: &Coweight,
        kappa: &Coweight,
        nu: &Coweight,
    ) -> Result<QRatio> {
        let e = self.e_at_target(lambda, kappa, nu)?;
        let qt_l = self.ps.q_translation_exps(&self.rs, lambda)?;
        let qt_k = self.ps.q_translation_exps(&self.rs, kappa)?;
        let qt_n = self.ps.q_translation_exps(&self.rs, nu)?;
        let half: ZExps = qt_l
            .iter()
            .zip(qt_k.iter().zip(&qt_n))
            .map(|(a, (b, c))| (a + b - c) / 2)
            .collect();
        let num = self.n_lambda(nu)?.mul(&e).mul(&self.ps.zmono(half));
        let den = self.n_lambda(lambda)?.mul(self.n_lambda(kappa)?.as_ref());
        Ok(QRatio::new(num, den))
    }

    /// The boundary-integral eigenvalue expansion `phi_lambda`, computed at
    /// the given far coweight (or the minimal admissible one).
    pub fn phi_lambda(&self, lambda: &Coweight, nu: Option<Coweight>) -> Result<PhiExpansion> {
        let sat = self.saturated_set(lambda)?;
        let nu = match nu {
            Some(v) => v,
            None => self.choose_nu_far(lambda)?,
        };
        for mu in &sat.full {
            if !nu.sub(mu).is_strongly_dominant() {
                return Err(Error::BadInput(format!(
                    "far coweight {nu} is not strongly dominant past the saturated set of {lambda}"
                )));
            }
        }
        let mut coeffs = BTreeMap::new();
        for mu in &sat.full {
            let kappa = nu.sub(mu);
            let a = self.structure_constant(lambda, &kappa, &nu)?;
            let r_neg = self.ps.zmono(
                self.ps
                    .r_exps(&self.rs, mu)
                    .iter()
                    .map(|x| -x)
                    .collect::<Vec<_>>(),
            );
            coeffs.insert(mu.clone(), a.mul_poly(&r_neg));
        }
        Ok(PhiExpansion {
            lambda: lambda.clone(),
            nu,
            coeffs,
        })
    }

    /// Verify `phi_lambda = P_lambda` coefficientwise (exactly), including
    /// independence of the far coweight under `nu -> nu + rho`.
    pub fn verify_phi_equals_spherical(&self, lambda: &Coweight) -> Result<()> {
        let exp = self.spherical(lambda)?;
        let nu0 = self.choose_nu_far(lambda)?;
        let rho = Coweight(vec![1; self.rs.rank]);
        for nu in [nu0.clone(), nu0.add(&rho)] {
            let phi = self.phi_lambda(lambda, Some(nu.clone()))?;
            for (mu, c_phi) in &phi.coeffs {
                let rep = self.rs.dominant_rep(mu);
                let c_p = exp.p_coeff(&rep);
                if !c_phi.eq_ratio(&c_p) {
                    return Err(Error::Inconsistent {
                        identity: "boundary-integral vs spherical expansion",
                        detail: format!(
                            "lambda={lambda}, mu={mu}, nu={nu}: {c_phi} vs {c_p}"
                        ),
                    });
                }
            }
            // The spherical support must not exceed the saturated set.
            for rep in exp.coeffs.keys() {
                if !phi.coeffs.contains_key(rep) && !exp.coeffs[rep].is_zero() {
                    return Err(Error::Inconsistent {
                        identity: "boundary-integral vs spherical expansion",
                        detail: format!("spherical support {rep} missing from saturated set"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Horocycle counts `n_lambda(mu) = N_lambda r^{-2 mu}
    /// a_{lambda, nu - mu; nu}`: exact Laurent polynomials in the `q_i`
    /// whose values are nonnegative integers summing to `N_lambda`.
    pub fn horocycle_distribution(&self, lambda: &Coweight) -> Result<HorocycleDistribution> {
        let sat = self.saturated_set(lambda)?;
        let nu = self.choose_nu_far(lambda)?;
        let n_l = self.n_lambda(lambda)?;
        let mut counts = BTreeMap::new();
        let mut total = QLaurent::zero(self.ps.nclasses);
        for mu in &sat.full {
            let kappa = nu.sub(mu);
            let a = self.structure_constant(lambda, &kappa, &nu)?;
            let r2_neg: ZExps = self
                .ps
                .r_exps(&self.rs, mu)
                .iter()
                .map(|x| -2 * x)
                .collect();
            let sym = a
                .mul_poly(&n_l)
                .mul_poly(&self.ps.zmono(r2_neg))
                .reduce_to_poly()
                .map_err(|_| Error::Inconsistent {
                    identity: "horocycle count integrality",
                    detail: format!("count at lambda={lambda}, mu={mu} is not polynomial"),
                })?;
            if !sym.all_exponents_even() {
                return Err(Error::Inconsistent {
                    identity: "horocycle count integrality",
                    detail: format!("count at {mu} carries half powers"),
                });
            }
            let value = sym.eval_at_q(&self.ps.class_q).expect("even exponents");
            if !value.is_integer() || value.is_negative() {
                return Err(Error::NonIntegerCount(
                    value.to_string(),
                    "horocycle count integrality",
                ));
            }
            total = total.add(&sym);
            counts.insert(mu.clone(), (sym, value));
        }
        if &total != n_l.as_ref() {
            return Err(Error::Inconsistent {
                identity: "horocycle count total",
                detail: format!("counts sum to {total}, expected N_{lambda}"),
            });
        }
        Ok(HorocycleDistribution {
            lambda: lambda.clone(),
            counts,
        })
    }

    /// `prod_i (<lambda, alpha_i> + 1)`: the size of the dominance interval
    /// below `lambda` in the partial order `mu <= lambda iff lambda - mu`
    /// dominant, equivalently the good-vertex count of a geodesic hull.
    pub fn convex_hull_count(&self, lambda: &Coweight) -> Result<u64> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        Ok(lambda.0.iter().map(|&c| (c + 1) as u64).product())
    }

    /// Independent enumeration of `{mu dominant : lambda - mu dominant}`.
    pub fn dominant_interval_count(&self, lambda: &Coweight) -> Result<u64> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        let n = self.rs.rank;
        let mut count = 0u64;
        let mut mu = vec![0i64; n];
        'outer: loop {
            count += 1;
            for i in 0..n {
                mu[i] += 1;
                if mu[i] <= lambda.0[i] {
                    continue 'outer;
                }
                mu[i] = 0;
            }
            break;
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::{rat, ratio};
    use crate::root_datum::RsType;

    fn ctx(kind: RsType, rank: usize, q: &[i64]) -> Context {
        Context::with_integer_q(kind, rank, q).unwrap()
    }

    #[test]
    fn n_lambda_a1() {
        // N_{k lambda_1} = (q+1) q^{k-1} on the (q+1)-regular tree.
        let c = ctx(RsType::A, 1, &[4, 4]);
        assert_eq!(c.n_lambda_value(&Coweight(vec![0])).unwrap(), rat(1));
        for k in 1..=6i64 {
            let expect = rat(5) * rat(4).pow((k - 1) as i32);
            assert_eq!(c.n_lambda_value(&Coweight(vec![k])).unwrap(), expect);
        }
        // `nlambda --type A --rank 1 --q 4 --lambda 3` = 80.
        assert_eq!(c.n_lambda_value(&Coweight(vec![3])).unwrap(), rat(80));
    }

    #[test]
    fn n_lambda_bc1() {
        // N_{k e_1} = (q1+1) q0^k q1^{k-1} on the (q0+1, q1+1) tree.
        let c = ctx(RsType::BC, 1, &[4, 2]);
        for k in 1..=5i64 {
            let expect = rat(3) * rat(4).pow(k as i32) * rat(2).pow((k - 1) as i32);
            assert_eq!(c.n_lambda_value(&Coweight(vec![k])).unwrap(), expect);
        }
    }

    #[test]
    fn n_lambda_star_symmetry() {
        let c = ctx(RsType::A, 2, &[3, 3, 3]);
        for lam in [vec![2, 0], vec![1, 2], vec![3, 1]] {
            let l = Coweight(lam);
            let star = c.rs.lambda_star(&l).unwrap();
            assert_eq!(
                c.n_lambda(&l).unwrap().as_ref(),
                c.n_lambda(&star).unwrap().as_ref()
            );
        }
    }

    #[test]
    fn strongly_dominant_count_form() {
        // N_lambda = W0(q^{-1}) q_{t_lambda} for strongly dominant lambda.
        let c = ctx(RsType::C, 2, &[3, 2, 3]);
        let w = c.weyl().unwrap();
        let lam = Coweight(vec![2, 1]);
        let lhs = c.n_lambda(&lam).unwrap();
        let rhs = c
            .ps
            .poincare(&w.elements, true)
            .mul(&c.ps.q_translation(&c.rs, &lam).unwrap());
        assert_eq!(lhs.as_ref(), &rhs);
    }

    #[test]
    fn quotient_ratio_identity() {
        // N_lambda / N_{lambda - mu} = prod tau_alpha^{<mu, alpha>} for
        // strongly dominant pairs.
        let c = ctx(RsType::BC, 2, &[2, 3, 5]);
        let lam = Coweight(vec![3, 2]);
        for mu in [vec![1, 0], vec![0, 1], vec![2, 1]] {
            let mu = Coweight(mu);
            let rest = lam.sub(&mu);
            assert!(rest.is_strongly_dominant());
            let n_top = c.n_lambda(&lam).unwrap();
            let n_bot = c.n_lambda(&rest).unwrap();
            let ratio = n_top.div_exact(&n_bot).unwrap();
            let mut expect = vec![0i32; c.ps.nclasses];
            for (idx, root) in c.rs.positive_roots.iter().enumerate() {
                let p = c.rs.pair(&mu, root) as i32;
                for (x, t) in expect.iter_mut().zip(&c.ps.tau[idx]) {
                    *x += t * p;
                }
            }
            assert_eq!(ratio, c.ps.zmono(expect));
            // (r^mu)^2 = N_lambda / N_{lambda - mu}.
            let r2: Vec<i32> = c.ps.r_exps(&c.rs, &mu).iter().map(|x| 2 * x).collect();
            assert_eq!(ratio, c.ps.zmono(r2));
        }
    }

    #[test]
    fn saturated_sets() {
        // A1: lambda = 2 lambda_1 has dominant part {2, 0}; 1 is not in Q.
        let c = ctx(RsType::A, 1, &[4, 4]);
        let s = c.saturated_set(&Coweight(vec![2])).unwrap();
        assert_eq!(s.dominant_part, vec![Coweight(vec![0]), Coweight(vec![2])]);
        assert_eq!(
            s.full,
            vec![Coweight(vec![-2]), Coweight(vec![0]), Coweight(vec![2])]
        );
        // BC1: P = Q, so the full ladder appears.
        let c = ctx(RsType::BC, 1, &[4, 2]);
        let s = c.saturated_set(&Coweight(vec![2])).unwrap();
        assert_eq!(
            s.dominant_part,
            vec![Coweight(vec![0]), Coweight(vec![1]), Coweight(vec![2])]
        );
        // lambda = 0.
        let c = ctx(RsType::A, 2, &[3, 3, 3]);
        let s = c.saturated_set(&Coweight(vec![0, 0])).unwrap();
        assert_eq!(s.full, vec![Coweight(vec![0, 0])]);
    }

    #[test]
    fn saturated_root_string_closure() {
        // Brute-force the defining closure property on small rank-2 sets.
        for (kind, rank, q) in [(RsType::A, 2, vec![3i64, 3, 3]), (RsType::BC, 2, vec![2, 3, 5])] {
            let c = ctx(kind, rank, &q);
            let s = c.saturated_set(&Coweight(vec![1, 1])).unwrap();
            let set: std::collections::HashSet<_> = s.full.iter().cloned().collect();
            for mu in &s.full {
                for root in c.rs.positive_roots.iter() {
                    let p = c.rs.pair(mu, root);
                    let lo = 0.min(p);
                    let hi = 0.max(p);
                    for i in lo..=hi {
                        let shifted = Coweight(
                            mu.0.iter()
                                .zip(&root.coroot_coords)
                                .map(|(m, k)| m - i * k)
                                .collect(),
                        );
                        assert!(set.contains(&shifted), "{kind}: string break at {mu}");
                    }
                }
            }
        }
    }

    #[test]
    fn saturated_additivity_spot() {
        let c = ctx(RsType::C, 2, &[3, 2, 3]);
        let a = c.saturated_set(&Coweight(vec![1, 0])).unwrap();
        let b = c.saturated_set(&Coweight(vec![0, 1])).unwrap();
        let ab = c.saturated_set(&Coweight(vec![1, 1])).unwrap();
        let set: std::collections::HashSet<_> = ab.full.iter().cloned().collect();
        for x in &a.full {
            for y in &b.full {
                assert!(set.contains(&x.add(y)));
            }
        }
    }

    #[test]
    fn dominant_below_box_scan_oracle() {
        // Independent larger box scan on rank <= 2.
        for (kind, rank, q) in [
            (RsType::A, 2, vec![3i64, 3, 3]),
            (RsType::C, 2, vec![3, 2, 3]),
            (RsType::BC, 2, vec![2, 3, 5]),
        ] {
            let c = ctx(kind, rank, &q);
            let lam = Coweight(vec![2, 2]);
            let fast: std::collections::HashSet<_> =
                c.dominant_below(&lam).unwrap().into_iter().collect();
            let mut brute = std::collections::HashSet::new();
            for a in -10i64..=10 {
                for b in -10i64..=10 {
                    let mu = Coweight(vec![a, b]);
                    if mu.is_dominant() && c.rs.dominance_leq(&mu, &lam) {
                        brute.insert(mu);
                    }
                }
            }
            assert_eq!(fast, brute, "{kind}");
        }
    }

    #[test]
    fn choose_nu_far_examples() {
        let c = ctx(RsType::A, 1, &[4, 4]);
        assert_eq!(c.choose_nu_far(&Coweight(vec![0])).unwrap(), Coweight(vec![1]));
        assert_eq!(c.choose_nu_far(&Coweight(vec![2])).unwrap(), Coweight(vec![3]));
        let c = ctx(RsType::A, 2, &[3, 3, 3]);
        let nu = c.choose_nu_far(&Coweight(vec![1, 1])).unwrap();
        let sat = c.saturated_set(&Coweight(vec![1, 1])).unwrap();
        for mu in &sat.full {
            assert!(nu.sub(mu).is_strongly_dominant());
        }
        // Minimality: one step down fails.
        let smaller = Coweight(vec![nu.0[0] - 1; 2]);
        assert!(sat.full.iter().any(|mu| !smaller.sub(mu).is_strongly_dominant()));
    }

    #[test]
    fn structure_constants_a1_tree_values() {
        // a_{l1,l1;0} = 1/(q+1), a_{l1,l1;2l1} = q/(q+1) -- the tree counts.
        let c = ctx(RsType::A, 1, &[4, 4]);
        let row = c.structure_row(&Coweight(vec![1]), &Coweight(vec![1])).unwrap();
        let a0 = &row.entries[&Coweight(vec![0])];
        let a2 = &row.entries[&Coweight(vec![2])];
        assert_eq!(a0.eval_at_q(&c.ps.class_q).unwrap(), ratio(1, 5));
        assert_eq!(a2.eval_at_q(&c.ps.class_q).unwrap(), ratio(4, 5));
        // a_{l,0;l} = 1.
        let row = c.structure_row(&Coweight(vec![3]), &Coweight(vec![0])).unwrap();
        assert_eq!(
            row.entries[&Coweight(vec![3])].eval_at_q(&c.ps.class_q).unwrap(),
            rat(1)
        );
    }

    #[test]
    fn structure_row_sums_and_ties() {
        let c = ctx(RsType::A, 2, &[3, 3, 3]);
        let l = Coweight(vec![1, 0]);
        let m = Coweight(vec![0, 1]);
        // Row sum identity is asserted inside structure_row; also check
        // numeric values sum to 1.
        let row = c.structure_row(&l, &m).unwrap();
        let total: Rat = row
            .entries
            .values()
            .map(|a| a.eval_at_q(&c.ps.class_q).unwrap())
            .sum();
        assert_eq!(total, rat(1));
        // Nonnegative at the given parameters.
        for a in row.entries.values() {
            assert!(!a.eval_at_q(&c.ps.class_q).unwrap().is_negative());
        }
        // Tie-break order does not change the answer.
        let row_rev = c.structure_row_with_order(&l, &m, true).unwrap();
        assert_eq!(row.e_coeffs, row_rev.e_coeffs);

        // Support lives below lambda + mu.
        for nu in row.entries.keys() {
            assert!(c.rs.dominance_leq(nu, &l.add(&m)));
        }
    }

    #[test]
    fn structure_top_term_identity() {
        // a_{l,m;l+m} N_l N_m = N_{l+m} exactly.
        for (kind, rank, q, l, m) in [
            (RsType::A, 2, vec![3i64, 3, 3], vec![1, 0], vec![0, 1]),
            (RsType::C, 2, vec![3, 2, 3], vec![1, 0], vec![1, 1]),
            (RsType::BC, 1, vec![4, 2], vec![1], vec![2]),
        ] {
            let c = ctx(kind, rank, &q);
            let l = Coweight(l);
            let m = Coweight(m);
            let row = c.structure_row(&l, &m).unwrap();
            let top = row.entries[&l.add(&m)].clone();
            let lhs = top.mul_poly(&c.n_lambda(&l).unwrap()).mul_poly(&c.n_lambda(&m).unwrap());
            let rhs = QRatio::from_poly(c.n_lambda(&l.add(&m)).unwrap().as_ref().clone());
            assert!(lhs.eq_ratio(&rhs), "{kind}");
        }
    }

    #[test]
    fn delta_identity() {
        // a_{mu, nu*; 0} = delta_{mu,nu} / N_mu.
        let c = ctx(RsType::A, 2, &[3, 3, 3]);
        for (mu, nu) in [
            (vec![1, 0], vec![1, 0]),
            (vec![1, 0], vec![0, 1]),
            (vec![1, 1], vec![1, 1]),
        ] {
            let mu = Coweight(mu);
            let nu = Coweight(nu);
            let nu_star = c.rs.lambda_star(&nu).unwrap();
            let row = c.structure_row(&mu, &nu_star).unwrap();
            let zero = c.zero_cw();
            match row.entries.get(&zero) {
                None => assert_ne!(mu, nu),
                Some(a) => {
                    assert_eq!(mu, nu);
                    let expect = c.n_lambda_value(&mu).unwrap().recip();
                    assert_eq!(a.eval_at_q(&c.ps.class_q).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn cone_restricted_matches_full_row() {
        let c = ctx(RsType::C, 2, &[3, 2, 3]);
        let l = Coweight(vec![1, 1]);
        let m = Coweight(vec![2, 0]);
        let row = c.structure_row(&l, &m).unwrap();
        for (nu, a_full) in &row.entries {
            let a_single = c.structure_constant(&l, &m, nu).unwrap();
            assert!(a_full.eq_ratio(&a_single));
        }
        // A nu outside the support gives zero.
        let outside = Coweight(vec![30, 30]);
        assert!(c.structure_constant(&l, &m, &outside).unwrap().is_zero());
    }

    #[test]
    fn structure_associativity_numeric() {
        let c = ctx(RsType::A, 2, &[2, 2, 2]);
        let l = Coweight(vec![1, 0]);
        let m = Coweight(vec![0, 1]);
        let k = Coweight(vec![1, 0]);
        // sum_eta a_{l,m;eta} a_{eta,k;nu} = sum_eta a_{m,k;eta} a_{l,eta;nu}
        let row_lm = c.structure_row(&l, &m).unwrap();
        let row_mk = c.structure_row(&m, &k).unwrap();
        let mut lhs: BTreeMap<Coweight, f64> = BTreeMap::new();
        let z = c.ps.z_values();
        for (eta, a1) in &row_lm.entries {
            let row2 = c.structure_row(eta, &k).unwrap();
            for (nu, a2) in &row2.entries {
                *lhs.entry(nu.clone()).or_insert(0.0) += a1.eval_f64(&z) * a2.eval_f64(&z);
            }
        }
        let mut rhs: BTreeMap<Coweight, f64> = BTreeMap::new();
        for (eta, a1) in &row_mk.entries {
            let row2 = c.structure_row(&l, eta).unwrap();
            for (nu, a2) in &row2.entries {
                *rhs.entry(nu.clone()).or_insert(0.0) += a1.eval_f64(&z) * a2.eval_f64(&z);
            }
        }
        for (nu, v) in &lhs {
            let w = rhs.get(nu).copied().unwrap_or(0.0);
            assert!((v - w).abs() < 1e-10, "assoc at {nu}: {v} vs {w}");
        }
    }

    #[test]
    fn phi_matches_spherical_small() {
        // The headline identity on the smallest interesting cases.
        let c = ctx(RsType::A, 1, &[4, 4]);
        for k in 0..=3 {
            c.verify_phi_equals_spherical(&Coweight(vec![k])).unwrap();
        }
        let c = ctx(RsType::BC, 1, &[4, 2]);
        for k in 0..=2 {
            c.verify_phi_equals_spherical(&Coweight(vec![k])).unwrap();
        }
    }

    #[test]
    fn phi_a1_explicit() {
        // A1: phi_{l1}(u) = (sqrt(q)/(q+1)) (u + 1/u).
        let c = ctx(RsType::A, 1, &[4, 4]);
        let phi = c.phi_lambda(&Coweight(vec![1]), None).unwrap();
        let plus = phi.coeffs[&Coweight(vec![1])].eval_f64(&c.ps.z_values());
        let minus = phi.coeffs[&Coweight(vec![-1])].eval_f64(&c.ps.z_values());
        assert!((plus - 0.4).abs() < 1e-12);
        assert!((minus - 0.4).abs() < 1e-12);
    }

    #[test]
    fn horocycle_distribution_a1() {
        // Counts on the (q+1)-regular tree: 1 for the top value, (q-1)q^{j-1}
        // for the middle ladder, q^k at the bottom.
        let c = ctx(RsType::A, 1, &[4, 4]);
        let k = 3i64;
        let d = c.horocycle_distribution(&Coweight(vec![k])).unwrap();
        // h = 2j - k for confluence depth j: count 1 at j=k, (q-1)q^{k-j-1}
        // for 0 < j < k, q^k at j=0.
        let get = |h: i64| d.counts[&Coweight(vec![h])].1.clone();
        assert_eq!(get(3), rat(1));
        assert_eq!(get(1), rat(3));
        assert_eq!(get(-1), rat(12));
        assert_eq!(get(-3), rat(64));
        let total: Rat = d.counts.values().map(|(_, v)| v.clone()).sum();
        assert_eq!(total, c.n_lambda_value(&Coweight(vec![k])).unwrap());
        // lambda = 0.
        let d0 = c.horocycle_distribution(&Coweight(vec![0])).unwrap();
        assert_eq!(d0.counts.len(), 1);
        assert_eq!(d0.counts[&Coweight(vec![0])].1, rat(1));
    }

    #[test]
    fn algebra_homomorphism_property() {
        // P_lambda(u) P_mu(u) = sum_nu a_{lambda,mu;nu} P_nu(u) at random
        // points: multiplication in the algebra matches pointwise values.
        use crate::qlaurent::SplitMix64;
        use crate::torus::UPoint;
        let c = ctx(RsType::C, 2, &[3, 2, 3]);
        let z = c.ps.z_values();
        let l = Coweight(vec![1, 0]);
        let m = Coweight(vec![1, 1]);
        let row = c.structure_row(&l, &m).unwrap();
        let mut rng = SplitMix64(99);
        for _ in 0..6 {
            let u = UPoint::from_angles(&[rng.f64() * 6.283, rng.f64() * 6.283]);
            let lhs = c.spherical(&l).unwrap().eval(&u, &z)
                * c.spherical(&m).unwrap().eval(&u, &z);
            let mut rhs = num_complex::Complex64::new(0.0, 0.0);
            for (nu, a) in &row.entries {
                rhs += c.spherical(nu).unwrap().eval(&u, &z) * a.eval_f64(&z);
            }
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn convex_hull_counts() {
        let c = ctx(RsType::A, 2, &[3, 3, 3]);
        assert_eq!(c.convex_hull_count(&Coweight(vec![2, 1])).unwrap(), 6);
        assert_eq!(c.dominant_interval_count(&Coweight(vec![2, 1])).unwrap(), 6);
        assert_eq!(c.convex_hull_count(&Coweight(vec![0, 0])).unwrap(), 1);
        let c1 = ctx(RsType::A, 1, &[2, 2]);
        for k in 0..=5 {
            assert_eq!(c1.convex_hull_count(&Coweight(vec![k])).unwrap() as i64, k + 1);
        }
    }
}
