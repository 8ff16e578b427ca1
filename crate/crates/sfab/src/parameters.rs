//! Building parameter systems `{q_i}` and everything derived from them:
//! the per-root `tau` table, word weights `q_w`, Poincare polynomials,
//! translation lengths `q_{t_lambda}`, and the modular homomorphism `r`.
//!
//! Parameters are validated against the constraints a regular building
//! imposes: `q_i = q_j` whenever the simple affine generators `s_i, s_j`
//! are conjugate, and equality across the good-type orbit. Each resulting
//! parameter class gets one formal variable `z_c = q_c^(1/2)`; all
//! symbolic computation happens in the Laurent ring over these.

use num_traits::{One, ToPrimitive};

use crate::qlaurent::{QLaurent, Rat};
use crate::root_datum::{Coweight, RootSystem, RsType, WeylElement};
use crate::{Error, Result};

/// Standard vs exceptional spectral regime.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// `tau_alpha >= 1` for every root.
    Standard,
    /// Type `BC_n` with `q_n < q_0`: an extra boundary component appears in
    /// the Plancherel measure.
    Exceptional,
}

/// Exponent vector over the parameter classes; represents the monomial
/// `prod_c z_c^(e_c)`.
pub type ZExps = Vec<i32>;

/// Validated parameter system for a root system.
#[derive(Debug)]
pub struct ParamSystem {
    /// `q_i` for `i = 0..=n`.
    pub q: Vec<Rat>,
    /// Conjugacy class id of each node `i in I`; ids run `0..nclasses`.
    pub classes: Vec<usize>,
    pub nclasses: usize,
    /// Human-readable label per class, e.g. `"q0=q2"`.
    pub class_labels: Vec<String>,
    /// Value of `q` on each class.
    pub class_q: Vec<Rat>,
    /// `tau_alpha` exponent vector per positive root (indexed like
    /// `RootSystem::positive_roots`). All entries are even.
    pub tau: Vec<ZExps>,
    pub mode: Mode,
    /// Set when a `BC_n` (`n >= 2`) system with `q_1 > 1` violates the
    /// thick-quadrangle inequality `q_1^2 >= q_0`. Formal computation is
    /// still meaningful; no building realizes such parameters.
    pub higman_warning: bool,
}

/// Conjugacy classes of the affine generators `s_0..s_n`, merged across the
/// good-type orbit. Two generators are conjugate iff they are connected by
/// a path of odd-labelled edges in the affine Coxeter diagram.
fn affine_classes(rs: &RootSystem) -> (Vec<usize>, usize) {
    let n = rs.rank;
    // Linear parts of the affine generators: s_0 reflects in the highest
    // root, s_i in alpha_i.
    let amb = |i: usize| -> &Vec<Rat> {
        if i == 0 {
            &rs.highest_root().ambient
        } else {
            &rs.simple_root(i - 1).ambient
        }
    };
    let len2 = |i: usize| -> Rat {
        if i == 0 {
            rs.highest_root().len2.clone()
        } else {
            rs.simple_root(i - 1).len2.clone()
        }
    };
    let dot = |a: &[Rat], b: &[Rat]| -> Rat { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    // Union-find over nodes 0..=n.
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            parent[hi] = lo;
        }
    };

    for i in 0..=n {
        for j in (i + 1)..=n {
            let two = Rat::from_integer(2.into());
            let cij = dot(amb(i), amb(j)) * &two / len2(j);
            let cji = dot(amb(j), amb(i)) * &two / len2(i);
            let prod = (cij * cji).to_integer().to_i64().unwrap();
            // Coxeter label from the crystallographic bound:
            // 0 -> 2, 1 -> 3, 2 -> 4, 3 -> 6, 4 -> infinity.
            let odd = prod == 1; // only label 3 is odd
            if odd {
                union(&mut parent, i, j);
            }
        }
    }
    // Good-type orbit: type-rotating automorphisms act transitively on
    // I_P = {0} + {i : m_i = 1}, carrying node 0 to each good node.
    for (i, &m) in rs.marks.iter().enumerate() {
        if m == 1 {
            union(&mut parent, 0, i + 1);
        }
    }

    let mut ids = vec![usize::MAX; n + 1];
    let mut next = 0;
    for i in 0..=n {
        let root = find(&mut parent, i);
        if ids[root] == usize::MAX {
            ids[root] = next;
            next += 1;
        }
        ids[i] = ids[root];
    }
    (ids, next)
}

/// Validate raw parameters `q_0..q_n` against the building constraints and
/// derive the `tau` table.
pub fn validate_params(rs: &RootSystem, raw_q: &[Rat]) -> Result<ParamSystem> {
    let n = rs.rank;
    if raw_q.len() != n + 1 {
        return Err(Error::BadInput(format!(
            "expected {} parameters, got {}",
            n + 1,
            raw_q.len()
        )));
    }
    for (i, qi) in raw_q.iter().enumerate() {
        if qi < &Rat::one() {
            return Err(Error::ParamOutOfRange(i, qi.to_string()));
        }
    }
    let (classes, nclasses) = affine_classes(rs);
    for c in 0..nclasses {
        let members: Vec<usize> = (0..=n).filter(|&i| classes[i] == c).collect();
        let q0 = &raw_q[members[0]];
        for &m in &members[1..] {
            if &raw_q[m] != q0 {
                return Err(Error::ParamClassMismatch {
                    i: members[0],
                    j: m,
                    qi: q0.to_string(),
                    qj: raw_q[m].to_string(),
                    class: members.clone(),
                });
            }
        }
    }
    if rs.kind == RsType::BC && raw_q[0] == raw_q[n] {
        let redirect = if n == 1 {
            "A_1".to_string()
        } else {
            format!("C_{n}")
        };
        return Err(Error::BcEqualParameters(redirect));
    }

    let class_labels: Vec<String> = (0..nclasses)
        .map(|c| {
            (0..=n)
                .filter(|&i| classes[i] == c)
                .map(|i| format!("q{i}"))
                .collect::<Vec<_>>()
                .join("=")
        })
        .collect();
    let class_q: Vec<Rat> = (0..nclasses)
        .map(|c| raw_q[(0..=n).find(|&i| classes[i] == c).unwrap()].clone())
        .collect();

    // tau table per positive root.
    let mut tau = Vec::with_capacity(rs.positive_roots.len());
    for root in &rs.positive_roots {
        let mut e = vec![0i32; nclasses];
        if root.in_r3() {
            let lc = root
                .length_class
                .expect("R3 root matches a simple-root length");
            e[classes[lc + 1]] += 2;
        } else if root.in_r1 {
            // R1 minus R3: tau = q_0.
            e[classes[0]] += 2;
        } else {
            // R2 minus R3: tau = q_alpha / q_0.
            let lc = root
                .length_class
                .expect("R2 root matches a simple-root length");
            e[classes[lc + 1]] += 2;
            e[classes[0]] -= 2;
        }
        tau.push(e);
    }

    let mode = if rs.kind == RsType::BC && raw_q[n] < raw_q[0] {
        Mode::Exceptional
    } else {
        Mode::Standard
    };
    let higman_warning = rs.kind == RsType::BC
        && n >= 2
        && raw_q[1] > Rat::one()
        && &raw_q[1] * &raw_q[1] < raw_q[0];

    Ok(ParamSystem {
        q: raw_q.to_vec(),
        classes,
        nclasses,
        class_labels,
        class_q,
        tau,
        mode,
        higman_warning,
    })
}

impl ParamSystem {
    /// Monomial `1 * z^e` in the class variables.
    pub fn zmono(&self, e: ZExps) -> QLaurent {
        QLaurent::monomial(e, Rat::one())
    }

    /// Numeric values of the class variables `z_c = sqrt(q_c)`.
    pub fn z_values(&self) -> Vec<f64> {
        self.class_q
            .iter()
            .map(|q| q.to_f64().unwrap().sqrt())
            .collect()
    }

    /// Exact rational value of a monomial with even exponents.
    pub fn eval_even(&self, e: &[i32]) -> Rat {
        let mut acc = Rat::one();
        for (c, &ec) in e.iter().enumerate() {
            debug_assert!(ec % 2 == 0);
            let half = ec / 2;
            let q = &self.class_q[c];
            let step = if half >= 0 { q.clone() } else { q.recip() };
            for _ in 0..half.unsigned_abs() {
                acc *= &step;
            }
        }
        acc
    }

    /// `tau_alpha` as an exact rational.
    pub fn tau_value(&self, root_idx: usize) -> Rat {
        self.eval_even(&self.tau[root_idx])
    }

    /// Exponent vector of `q_w` for a reduced word over the finite
    /// generators (word letters index `s_1..s_n` as `0..n-1`).
    pub fn q_word_exps(&self, word: &[u8]) -> ZExps {
        let mut e = vec![0i32; self.nclasses];
        for &i in word {
            e[self.classes[i as usize + 1]] += 2;
        }
        e
    }

    /// `q_w` as a monomial.
    pub fn q_w(&self, w: &WeylElement) -> QLaurent {
        self.zmono(self.q_word_exps(&w.word))
    }

    /// Poincare polynomial `U(q) = sum_{w in U} q_w`, or `U(q^{-1})` when
    /// `inverted`.
    pub fn poincare(&self, elements: &[WeylElement], inverted: bool) -> QLaurent {
        let mut acc = QLaurent::zero(self.nclasses);
        for w in elements {
            let mut e = self.q_word_exps(&w.word);
            if inverted {
                for x in e.iter_mut() {
                    *x = -*x;
                }
            }
            acc = acc.add(&self.zmono(e));
        }
        acc
    }

    /// Exponents of the translation length `q_{t_lambda} =
    /// prod_{alpha > 0} tau_alpha^{<lambda, alpha>}` for dominant `lambda`.
    pub fn q_translation_exps(&self, rs: &RootSystem, lambda: &Coweight) -> Result<ZExps> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        let mut e = vec![0i32; self.nclasses];
        for (idx, root) in rs.positive_roots.iter().enumerate() {
            let p = rs.pair(lambda, root) as i32;
            for (c, t) in e.iter_mut().zip(&self.tau[idx]) {
                *c += t * p;
            }
        }
        Ok(e)
    }

    /// `q_{t_lambda}` as a monomial.
    pub fn q_translation(&self, rs: &RootSystem, lambda: &Coweight) -> Result<QLaurent> {
        Ok(self.zmono(self.q_translation_exps(rs, lambda)?))
    }

    /// Exponents of `r^mu = prod_{alpha > 0} tau_alpha^{<mu, alpha>/2}`
    /// (any coweight `mu`; the result is always integral).
    pub fn r_exps(&self, rs: &RootSystem, mu: &Coweight) -> ZExps {
        let mut doubled = vec![0i32; self.nclasses];
        for (idx, root) in rs.positive_roots.iter().enumerate() {
            let p = rs.pair(mu, root) as i32;
            for (c, t) in doubled.iter_mut().zip(&self.tau[idx]) {
                *c += t * p;
            }
        }
        doubled
            .into_iter()
            .map(|x| {
                debug_assert!(x % 2 == 0);
                x / 2
            })
            .collect()
    }

    /// `r^mu` as a monomial.
    pub fn r_mono(&self, rs: &RootSystem, mu: &Coweight) -> QLaurent {
        self.zmono(self.r_exps(rs, mu))
    }

    /// Numeric `r^mu`.
    pub fn r_value(&self, rs: &RootSystem, mu: &Coweight) -> f64 {
        self.r_mono(rs, mu).eval_f64(&self.z_values())
    }

    /// Check `q_{w_0} = prod_{alpha > 0} tau_alpha` with both sides built
    /// independently (word product vs tau table).
    pub fn longest_element_identity(&self, w0: &WeylElement) -> Result<()> {
        let lhs = self.q_word_exps(&w0.word);
        let mut rhs = vec![0i32; self.nclasses];
        for t in &self.tau {
            for (c, x) in rhs.iter_mut().zip(t) {
                *c += x;
            }
        }
        if lhs == rhs {
            Ok(())
        } else {
            Err(Error::Inconsistent {
                identity: "longest-element parameter product",
                detail: format!("q_w0 exponents {lhs:?} vs tau product {rhs:?}"),
            })
        }
    }

    /// Verify both product expressions for `r` on the fundamental
    /// coweights: `r^{lambda_i} = prod_j q_{t_{lambda_j}}^{delta/2}` form.
    pub fn r_consistency(&self, rs: &RootSystem) -> Result<()> {
        for i in 0..rs.rank {
            let mut li = Coweight::zero(rs.rank);
            li.0[i] = 1;
            let via_tau = self.r_exps(rs, &li);
            // r^{lambda_i} = prod_j q_{t_{lambda_j}}^{<lambda_i, alpha_j>/2}
            //             = q_{t_{lambda_i}}^{1/2}.
            let tr = self.q_translation_exps(rs, &li)?;
            let via_translation: ZExps = tr.iter().map(|x| x / 2).collect();
            if via_tau != via_translation {
                return Err(Error::Inconsistent {
                    identity: "r-homomorphism product forms",
                    detail: format!("lambda_{i}: {via_tau:?} vs {via_translation:?}"),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::rat;
    use crate::root_datum::{build_root_system, WEYL_CAP};

    fn ps_for(kind: RsType, rank: usize, q: &[i64]) -> (RootSystem, ParamSystem) {
        let rs = build_root_system(kind, rank).unwrap();
        let raw: Vec<Rat> = q.iter().map(|&x| rat(x)).collect();
        let ps = validate_params(&rs, &raw).unwrap();
        (rs, ps)
    }

    #[test]
    fn classes_by_type() {
        // A1 (infinite bond, good-type swap): one class.
        let rs = build_root_system(RsType::A, 1).unwrap();
        let (cls, n) = affine_classes(&rs);
        assert_eq!((cls, n), (vec![0, 0], 1));
        // A2: cycle of 3-bonds: one class.
        let rs = build_root_system(RsType::A, 2).unwrap();
        assert_eq!(affine_classes(&rs).1, 1);
        // C2: {q0=q2, q1}.
        let rs = build_root_system(RsType::C, 2).unwrap();
        let (cls, n) = affine_classes(&rs);
        assert_eq!(n, 2);
        assert_eq!(cls[0], cls[2]);
        assert_ne!(cls[0], cls[1]);
        // BC2: three independent parameters.
        let rs = build_root_system(RsType::BC, 2).unwrap();
        assert_eq!(affine_classes(&rs).1, 3);
        // B3: {q0=q1=q2, q3}.
        let rs = build_root_system(RsType::B, 3).unwrap();
        let (cls, n) = affine_classes(&rs);
        assert_eq!(n, 2);
        assert_eq!(cls[0], cls[1]);
        assert_eq!(cls[1], cls[2]);
        assert_ne!(cls[0], cls[3]);
        // G2: the affine node attaches to the long end: {q0=q2, q1}.
        let rs = build_root_system(RsType::G2, 2).unwrap();
        let (cls, n) = affine_classes(&rs);
        assert_eq!(n, 2);
        assert_eq!(cls[0], cls[2]);
        assert_ne!(cls[0], cls[1]);
        // F4: {q0=q1=q2, q3=q4}.
        let rs = build_root_system(RsType::F4, 4).unwrap();
        let (cls, n) = affine_classes(&rs);
        assert_eq!(n, 2);
        assert_eq!(cls[0], cls[2]);
        assert_eq!(cls[3], cls[4]);
        assert_ne!(cls[0], cls[3]);
    }

    #[test]
    fn validation_errors() {
        let rs = build_root_system(RsType::A, 2).unwrap();
        // Conjugate class mismatch is named.
        match validate_params(&rs, &[rat(2), rat(2), rat(3)]) {
            Err(Error::ParamClassMismatch { class, .. }) => {
                assert_eq!(class, vec![0, 1, 2]);
            }
            other => panic!("expected class mismatch, got {other:?}"),
        }
        // BC with q_0 = q_n is rejected toward type C / A1.
        let bc2 = build_root_system(RsType::BC, 2).unwrap();
        match validate_params(&bc2, &[rat(2), rat(3), rat(2)]) {
            Err(Error::BcEqualParameters(t)) => assert_eq!(t, "C_2"),
            other => panic!("{other:?}"),
        }
        let bc1 = build_root_system(RsType::BC, 1).unwrap();
        match validate_params(&bc1, &[rat(2), rat(2)]) {
            Err(Error::BcEqualParameters(t)) => assert_eq!(t, "A_1"),
            other => panic!("{other:?}"),
        }
        // q < 1 rejected.
        let a1 = build_root_system(RsType::A, 1).unwrap();
        assert!(matches!(
            validate_params(&a1, &[crate::qlaurent::ratio(1, 2), crate::qlaurent::ratio(1, 2)]),
            Err(Error::ParamOutOfRange(..))
        ));
    }

    #[test]
    fn tau_tables() {
        // BC1 (q0=3, q1=2): tau_{e1} = 2/3, tau_{2e1} = 3, exceptional.
        let (rs, ps) = ps_for(RsType::BC, 1, &[3, 2]);
        assert_eq!(ps.mode, Mode::Exceptional);
        let short = rs.root_index(&[1]).unwrap();
        let long = rs.root_index(&[2]).unwrap();
        assert_eq!(ps.tau_value(short), crate::qlaurent::ratio(2, 3));
        assert_eq!(ps.tau_value(long), rat(3));
        // A2 equal q: tau = q for every root.
        let (rs, ps) = ps_for(RsType::A, 2, &[4, 4, 4]);
        for i in 0..rs.positive_roots.len() {
            assert_eq!(ps.tau_value(i), rat(4));
        }
        // BC2 (2,3,5): standard since q_n >= q_0.
        let (_, ps) = ps_for(RsType::BC, 2, &[2, 3, 5]);
        assert_eq!(ps.mode, Mode::Standard);
        assert!(!ps.higman_warning);
        // Higman warning: q1 > 1 and q1^2 < q0.
        let (_, ps) = ps_for(RsType::BC, 2, &[5, 2, 2]);
        assert!(ps.higman_warning);
        let (_, ps) = ps_for(RsType::BC, 2, &[4, 2, 2]);
        assert!(!ps.higman_warning);
    }

    #[test]
    fn q_word_and_poincare() {
        // A1: W0(q^-1) = 1 + q^-1.
        let (rs, ps) = ps_for(RsType::A, 1, &[4, 4]);
        let w = rs.weyl_group(WEYL_CAP).unwrap();
        let p = ps.poincare(&w.elements, true);
        let expect = QLaurent::one(1).add(&QLaurent::monomial(vec![-2], rat(1)));
        assert_eq!(p, expect);

        // A2 equal q: 1 + 2q^-1 + 2q^-2 + q^-3.
        let (rs, ps) = ps_for(RsType::A, 2, &[3, 3, 3]);
        let w = rs.weyl_group(WEYL_CAP).unwrap();
        let p = ps.poincare(&w.elements, true);
        let mut expect = QLaurent::one(1);
        expect = expect.add(&QLaurent::monomial(vec![-2], rat(2)));
        expect = expect.add(&QLaurent::monomial(vec![-4], rat(2)));
        expect = expect.add(&QLaurent::monomial(vec![-6], rat(1)));
        assert_eq!(p, expect);

        // C2 with distinct class values: the 8-term sum, exps in (z_{q0=q2}, z_{q1}).
        let (rs, ps) = ps_for(RsType::C, 2, &[5, 3, 5]);
        let w = rs.weyl_group(WEYL_CAP).unwrap();
        let p = ps.poincare(&w.elements, true);
        // 1 + q1^-1 + q2^-1 + 2 q1^-1 q2^-1 + q1^-2 q2^-1 + q1^-1 q2^-2 + q1^-2 q2^-2
        // where q2 lives in class {q0,q2} (variable 0) and q1 in class {q1} (variable 1).
        let mono = |a: i32, b: i32, c: i64| QLaurent::monomial(vec![a, b], rat(c));
        let expect = QLaurent::one(2)
            .add(&mono(0, -2, 1))
            .add(&mono(-2, 0, 1))
            .add(&mono(-2, -2, 2))
            .add(&mono(-2, -4, 1))
            .add(&mono(-4, -2, 1))
            .add(&mono(-4, -4, 1));
        assert_eq!(p, expect);

        // q_w for w = s1 s2 s1 in C2 is q1^2 q2.
        let target_word = [0u8, 1, 0];
        let e = ps.q_word_exps(&target_word);
        assert_eq!(e, vec![2, 4]);
    }

    #[test]
    fn q_w_reduced_word_independent() {
        // q_w by stored word vs the inversion-set product of tau, which is
        // independent of the chosen reduced expression.
        for (kind, rank, q) in [
            (RsType::C, 2, vec![5i64, 3, 5]),
            (RsType::G2, 2, vec![2, 7, 2]),
            (RsType::BC, 2, vec![2, 3, 5]),
        ] {
            let (rs, ps) = ps_for(kind, rank, &q);
            let w = rs.weyl_group(WEYL_CAP).unwrap();
            for e in &w.elements {
                let word_exps = ps.q_word_exps(&e.word);
                let winv: Vec<u8> = e.word.iter().rev().copied().collect();
                let mut inv_exps = vec![0i32; ps.nclasses];
                for (idx, root) in rs.positive_roots.iter().enumerate() {
                    let img = rs.act_on_root(&winv, &root.simple_coords);
                    if img.iter().any(|&x| x < 0) {
                        for (c, t) in inv_exps.iter_mut().zip(&ps.tau[idx]) {
                            *c += t;
                        }
                    }
                }
                assert_eq!(word_exps, inv_exps, "word {:?}", e.word);
            }
        }
    }

    #[test]
    fn translation_lengths() {
        // lambda = 0 -> 1.
        let (rs, ps) = ps_for(RsType::A, 1, &[4, 4]);
        assert!(ps
            .q_translation(&rs, &Coweight(vec![0]))
            .unwrap()
            .is_one());
        // A1: q_{t_{lambda_1}} = q.
        assert_eq!(
            ps.q_translation_exps(&rs, &Coweight(vec![1])).unwrap(),
            vec![2]
        );
        // BC1: q_{t_{k e_1}} = (q0 q1)^k.
        let (rs, ps) = ps_for(RsType::BC, 1, &[4, 2]);
        for k in 1..=3i64 {
            let e = ps
                .q_translation_exps(&rs, &Coweight(vec![k]))
                .unwrap();
            assert_eq!(e, vec![2 * k as i32, 2 * k as i32]);
        }
        // Multiplicativity on dominant sums.
        let (rs, ps) = ps_for(RsType::C, 2, &[5, 3, 5]);
        let a = Coweight(vec![1, 2]);
        let b = Coweight(vec![2, 0]);
        let ea = ps.q_translation_exps(&rs, &a).unwrap();
        let eb = ps.q_translation_exps(&rs, &b).unwrap();
        let eab = ps.q_translation_exps(&rs, &a.add(&b)).unwrap();
        let sum: ZExps = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
        assert_eq!(eab, sum);
        // Non-dominant input is refused.
        assert!(ps.q_translation(&rs, &Coweight(vec![-1, 0])).is_err());
    }

    #[test]
    fn longest_element_and_r() {
        for (kind, rank, q) in [
            (RsType::A, 1, vec![4i64, 4]),
            (RsType::BC, 2, vec![2, 3, 5]),
            (RsType::G2, 2, vec![2, 7, 2]),
        ] {
            let (rs, ps) = ps_for(kind, rank, &q);
            let w = rs.weyl_group(WEYL_CAP).unwrap();
            ps.longest_element_identity(w.longest_element()).unwrap();
            ps.r_consistency(&rs).unwrap();
        }
        // A1: r^{lambda_1} = q^(1/2) = z.
        let (rs, ps) = ps_for(RsType::A, 1, &[4, 4]);
        assert_eq!(ps.r_exps(&rs, &Coweight(vec![1])), vec![1]);
        assert_eq!(ps.r_exps(&rs, &Coweight(vec![0])), vec![0]);
        // BC1: r^{e_1} = sqrt(q0 q1).
        let (rs, ps) = ps_for(RsType::BC, 1, &[4, 2]);
        assert_eq!(ps.r_exps(&rs, &Coweight(vec![1])), vec![1, 1]);
        assert!((ps.r_value(&rs, &Coweight(vec![1])) - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tau_constant_on_orbits() {
        for (kind, rank, q) in [(RsType::BC, 2, vec![2i64, 3, 5]), (RsType::G2, 2, vec![2, 7, 2])] {
            let (rs, ps) = ps_for(kind, rank, &q);
            let w = rs.weyl_group(WEYL_CAP).unwrap();
            for (idx, root) in rs.positive_roots.iter().enumerate() {
                for e in w.elements.iter().step_by(3) {
                    let img = rs.act_on_root(&e.word, &root.simple_coords);
                    let img_pos: Vec<i64> = if img.iter().any(|&x| x < 0) {
                        img.iter().map(|x| -x).collect()
                    } else {
                        img
                    };
                    let j = rs.root_index(&img_pos).unwrap();
                    assert_eq!(ps.tau[idx], ps.tau[j]);
                }
            }
        }
    }
}
