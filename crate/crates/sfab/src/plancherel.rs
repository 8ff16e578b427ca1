//! Plancherel densities and torus quadrature: orthogonality and
//! triple-product integrals of the spherical functions against the
//! spectral measure, in both the standard and the exceptional regime.
//!
//! The standard density on the torus is `W_0(q^{-1})/|W_0| * |c(u)|^{-2}`,
//! evaluated in the pole-free form `prod |den|^2 / |num|^2` over the roots
//! with `tau != 1`. In the exceptional regime (`BC_n` with `q_n < q_0`)
//! the measure acquires a component on `{t_1 = -b} x T^{n-1}` with density
//! `W_0(q^{-1})/|W_0'| / phi_1`, where `phi_1` is `phi_0 = c(u) c(u^{-1})`
//! with its vanishing factor `1 + b^{-1} t_1` deleted before evaluation.
//!
//! Quadrature is the equispaced tensor rule, spectrally accurate for these
//! smooth periodic integrands. Node work is parallelized over rows of the
//! grid with a fixed reduction order, so results are reproducible
//! regardless of thread count.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::context::Context;
use crate::parameters::Mode;
use crate::qlaurent::Rat;
use crate::root_datum::{Coweight, RsType};
use crate::torus::UPoint;
use crate::{Error, Result};

/// Equispaced tensor-product grid on the torus; `n` points per dimension.
#[derive(Clone, Copy, Debug)]
pub struct Grid {
    pub n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Grid {
        Grid { n }
    }
}

/// A spherical function flattened to chart exponents with `f64`
/// coefficients, ready for grid evaluation.
struct PreparedPoly {
    terms: Vec<(Vec<i64>, f64)>,
}

impl PreparedPoly {
    fn eval_grid(&self, table: &[Complex64], n: usize, k: &[usize]) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            v += eval_mono(table, n, k, e) * *c;
        }
        v
    }

    fn eval_chart(&self, chart: &[Complex64]) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = Complex64::new(1.0, 0.0);
            for (d, &ed) in e.iter().enumerate() {
                if ed != 0 {
                    m *= chart[d].powi(ed as i32);
                }
            }
            v += m * *c;
        }
        v
    }
}

/// One `c`-function factor reduced to numeric data in chart exponents.
struct DensityFactor {
    num_c: f64,
    den_c: f64,
    coroot: Vec<i64>,
}

impl Context {
    /// True when the spectral measure has the extra boundary component.
    pub fn is_exceptional(&self) -> bool {
        self.ps.mode == Mode::Exceptional
    }

    /// `b = sqrt(q_n / q_0)` for BC systems.
    pub fn boundary_b(&self) -> Option<f64> {
        if self.rs.kind != RsType::BC {
            return None;
        }
        let qn = self.ps.q[self.rs.rank].to_f64().unwrap();
        let q0 = self.ps.q[0].to_f64().unwrap();
        Some((qn / q0).sqrt())
    }

    /// Chart exponents of a coweight: `u^mu` as a monomial in the grid
    /// coordinates. For `BC_n` the chart is `t_j = u^{e_j}`; elsewhere
    /// the coordinates are `u_i = u^{lambda_i}` themselves.
    fn chart_exps(&self, mu: &[i64]) -> Vec<i64> {
        if self.rs.kind == RsType::BC {
            // lambda_i = e_1 + .. + e_i, so mu = sum_j (c_j + .. + c_n) e_j.
            let n = mu.len();
            (0..n).map(|j| mu[j..n].iter().sum()).collect()
        } else {
            mu.to_vec()
        }
    }

    fn prepare_poly(&self, lambda: &Coweight) -> Result<PreparedPoly> {
        let exp = self.spherical(lambda)?;
        let z = self.ps.z_values();
        let scale = exp.scale_f64(&z);
        let terms = exp
            .full
            .terms()
            .map(|(e, c)| (self.chart_exps(e), c.eval_f64(&z) * scale))
            .collect();
        Ok(PreparedPoly { terms })
    }

    /// Factors of `|c(u)|^{-2}` with `tau_alpha != 1`, in chart exponents.
    fn density_factors(&self) -> Vec<DensityFactor> {
        let one = Rat::from_integer(1.into());
        self.c_function()
            .factors
            .iter()
            .filter(|f| self.ps.tau_value(f.root_idx) != one)
            .map(|f| DensityFactor {
                num_c: f.num_coeff,
                den_c: f.den_coeff,
                coroot: self.chart_exps(&f.coroot),
            })
            .collect()
    }

    /// `W_0(q^{-1})` as an exact rational.
    pub fn w0_inv_value(&self) -> Result<Rat> {
        let w = self.weyl()?;
        self.ps
            .poincare(&w.elements, true)
            .eval_at_q(&self.ps.class_q)
            .ok_or(Error::Inconsistent {
                identity: "Poincare polynomial rationality",
                detail: "odd exponents in W0(1/q)".into(),
            })
    }

    /// Standard-component Plancherel density at a torus point, in the
    /// pole-free form.
    pub fn density_at(&self, u: &UPoint) -> Result<f64> {
        let w = self.weyl()?;
        let pref = self.w0_inv_value()?.to_f64().unwrap() / w.order() as f64;
        let one = Rat::from_integer(1.into());
        let mut acc = pref;
        for f in &self.c_function().factors {
            if self.ps.tau_value(f.root_idx) == one {
                continue;
            }
            let x = u.pow(&f.coroot).inv();
            let den = Complex64::new(1.0, 0.0) - f.den_coeff * x;
            let num = Complex64::new(1.0, 0.0) - f.num_coeff * x;
            acc *= den.norm_sqr() / num.norm_sqr();
        }
        Ok(acc)
    }

    /// Orthogonality pairing `int P_lambda conj(P_mu) d pi_0` over the
    /// full spectrum (boundary included in the exceptional regime).
    pub fn integrate_pairing(
        &self,
        lambda: &Coweight,
        mu: &Coweight,
        grid: Grid,
    ) -> Result<Complex64> {
        let m = self.pairing_matrix(&[lambda.clone(), mu.clone()], grid, true)?;
        Ok(m[0][1])
    }

    /// The torus part only (negative control for the exceptional regime).
    pub fn integrate_pairing_torus_only(
        &self,
        lambda: &Coweight,
        mu: &Coweight,
        grid: Grid,
    ) -> Result<Complex64> {
        let m = self.pairing_matrix(&[lambda.clone(), mu.clone()], grid, false)?;
        Ok(m[0][1])
    }

    /// Full pairing matrix `int P_i conj(P_j) d pi_0` for a list of
    /// dominant coweights, in one sweep over the grid.
    pub fn pairing_matrix(
        &self,
        lams: &[Coweight],
        grid: Grid,
        include_boundary: bool,
    ) -> Result<Vec<Vec<Complex64>>> {
        let rank = self.rs.rank;
        let count = lams.len();
        let polys: Vec<PreparedPoly> = lams
            .iter()
            .map(|l| self.prepare_poly(l))
            .collect::<Result<_>>()?;
        let factors = self.density_factors();
        let w = self.weyl()?;
        let pref = self.w0_inv_value()?.to_f64().unwrap() / w.order() as f64;
        let n = grid.n;
        let table = roots_of_unity(n);

        // Parallel over the first chart coordinate; row results are folded
        // in index order, keeping the reduction deterministic.
        let rows: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|k0| {
                let mut acc = vec![Complex64::new(0.0, 0.0); count * count];
                let inner = n.pow(rank as u32 - 1);
                let mut vals = vec![Complex64::new(0.0, 0.0); count];
                let mut k = vec![0usize; rank];
                k[0] = k0;
                for rest in 0..inner {
                    let mut r = rest;
                    for d in 1..rank {
                        k[d] = r % n;
                        r /= n;
                    }
                    let mut dens = pref;
                    for f in &factors {
                        let x = eval_mono(&table, n, &k, &f.coroot).conj();
                        let den = Complex64::new(1.0, 0.0) - f.den_c * x;
                        let num = Complex64::new(1.0, 0.0) - f.num_c * x;
                        dens *= den.norm_sqr() / num.norm_sqr();
                    }
                    for (i, p) in polys.iter().enumerate() {
                        vals[i] = p.eval_grid(&table, n, &k);
                    }
                    for i in 0..count {
                        for j in 0..count {
                            acc[i * count + j] += vals[i] * vals[j].conj() * dens;
                        }
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![Complex64::new(0.0, 0.0); count * count];
        for row in rows {
            for (t, v) in total.iter_mut().zip(row) {
                *t += v;
            }
        }
        let volume = (n as f64).powi(rank as i32);
        for t in total.iter_mut() {
            *t /= volume;
        }

        if include_boundary && self.is_exceptional() {
            let boundary = self.boundary_pairing_matrix(&polys, count, grid)?;
            for (t, b) in total.iter_mut().zip(boundary) {
                *t += b;
            }
        }

        Ok((0..count)
            .map(|i| total[i * count..(i + 1) * count].to_vec())
            .collect())
    }

    /// Numerator and denominator of the `BC` two-block `c`-function in the
    /// chart coordinates `t_i = u^{e_i}`; `delete_first` removes the
    /// `1 + b^{-1}/t_1` factor (used to build `c(u^{-1})` with its zero
    /// deleted). Keeping the parts separate lets callers form either
    /// `c` or `1/c` without meeting an intermediate pole.
    fn bc_c_parts(&self, t: &[Complex64], delete_first: bool) -> (Complex64, Complex64) {
        let n = self.rs.rank;
        let q0 = self.ps.q[0].to_f64().unwrap();
        let qn = self.ps.q[n].to_f64().unwrap();
        let a = (qn * q0).sqrt();
        let b = (qn / q0).sqrt();
        let one = Complex64::new(1.0, 0.0);
        let mut num = one;
        let mut den = one;
        for (i, ti) in t.iter().enumerate() {
            let inv = one / ti;
            num *= if delete_first && i == 0 {
                one - inv / a
            } else {
                (one - inv / a) * (one + inv / b)
            };
            den *= one - inv * inv;
        }
        if n >= 2 {
            let q1 = self.ps.q[1].to_f64().unwrap();
            if q1 != 1.0 {
                for j in 0..n {
                    for kk in (j + 1)..n {
                        let (tj, tk) = (t[j], t[kk]);
                        num *= (one - tk / (tj * q1)) * (one - one / (tj * tk * q1));
                        den *= (one - tk / tj) * (one - one / (tj * tk));
                    }
                }
            }
        }
        (num, den)
    }

    /// `phi_0 = c(u) c(u^{-1})` in the t-chart (generic points).
    pub fn phi_zero(&self, t: &[Complex64]) -> Complex64 {
        let t_inv: Vec<Complex64> = t.iter().map(|z| Complex64::new(1.0, 0.0) / z).collect();
        let (n1, d1) = self.bc_c_parts(t, false);
        let (n2, d2) = self.bc_c_parts(&t_inv, false);
        (n1 * n2) / (d1 * d2)
    }

    fn phi_one_parts(&self, t_rest: &[Complex64]) -> Result<(Complex64, Complex64)> {
        if self.rs.kind != RsType::BC {
            return Err(Error::BadInput(
                "the boundary density only exists for BC systems".into(),
            ));
        }
        let b = self.boundary_b().unwrap();
        let mut t = Vec::with_capacity(self.rs.rank);
        t.push(Complex64::new(-b, 0.0));
        t.extend_from_slice(t_rest);
        // c(u^{-1}) in the t-chart is the same product evaluated at
        // s = t^{-1}; its factor (1 + b^{-1} s_1^{-1}) = (1 + b^{-1} t_1)
        // is the one deleted.
        let t_inv: Vec<Complex64> = t.iter().map(|z| Complex64::new(1.0, 0.0) / z).collect();
        let (n1, d1) = self.bc_c_parts(&t, false);
        let (n2, d2) = self.bc_c_parts(&t_inv, true);
        Ok((n1 * n2, d1 * d2))
    }

    /// `phi_1` at a boundary point `(-b, t_2, .., t_n)` (generic points;
    /// poles of `phi_1` are legitimate and make the density vanish there).
    pub fn phi_one(&self, t_rest: &[Complex64]) -> Result<f64> {
        let (num, den) = self.phi_one_parts(t_rest)?;
        let v = num / den;
        if v.im.abs() > 1e-8 * (1.0 + v.re.abs()) {
            return Err(Error::Inconsistent {
                identity: "boundary density realness",
                detail: format!("phi_1 = {v}"),
            });
        }
        Ok(v.re)
    }

    /// `1 / phi_1` in the pole-free form `den / num`: the numerator
    /// factors have no zeros on the boundary component, while denominator
    /// zeros (grid nodes such as `t_j = 1`) now contribute an exact 0.
    pub fn phi_one_inv(&self, t_rest: &[Complex64]) -> Result<f64> {
        let (num, den) = self.phi_one_parts(t_rest)?;
        if num.norm() < 1e-250 {
            return Err(Error::Inconsistent {
                identity: "boundary density positivity",
                detail: "numerator factor vanished on the boundary component".into(),
            });
        }
        let v = den / num;
        if v.im.abs() > 1e-8 * (1.0 + v.re.abs()) {
            return Err(Error::Inconsistent {
                identity: "boundary density realness",
                detail: format!("1/phi_1 = {v}"),
            });
        }
        Ok(v.re)
    }

    /// `|W_0'| = |C_{n-1}|` with `C_1 = A_1` and `C_0` trivial.
    fn boundary_group_order(&self) -> f64 {
        let n = self.rs.rank;
        if n == 1 {
            1.0
        } else {
            (1u64 << (n - 1)) as f64 * (1..n as u64).product::<u64>() as f64
        }
    }

    fn boundary_pairing_matrix(
        &self,
        polys: &[PreparedPoly],
        count: usize,
        grid: Grid,
    ) -> Result<Vec<Complex64>> {
        let rank = self.rs.rank;
        let b = self.boundary_b().unwrap();
        let pref = self.w0_inv_value()?.to_f64().unwrap() / self.boundary_group_order();
        let n = grid.n;
        let table = roots_of_unity(n);
        let inner = n.pow(rank as u32 - 1);
        let mut acc = vec![Complex64::new(0.0, 0.0); count * count];
        let mut chart = vec![Complex64::new(0.0, 0.0); rank];
        chart[0] = Complex64::new(-b, 0.0);
        let mut vals = vec![Complex64::new(0.0, 0.0); count];
        for rest in 0..inner {
            let mut r = rest;
            for d in 1..rank {
                chart[d] = table[r % n];
                r /= n;
            }
            let dens = pref * self.phi_one_inv(&chart[1..])?;
            for (i, p) in polys.iter().enumerate() {
                vals[i] = p.eval_chart(&chart);
            }
            for i in 0..count {
                for j in 0..count {
                    acc[i * count + j] += vals[i] * vals[j].conj() * dens;
                }
            }
        }
        let volume = (n as f64).powi(rank as i32 - 1);
        for t in acc.iter_mut() {
            *t /= volume;
        }
        Ok(acc)
    }

    /// Triple-product integral `N_nu int P_lambda P_mu conj(P_nu) d pi_0`,
    /// the spectral route to the structure constant `a_{lambda,mu;nu}`.
    pub fn integrate_triple(
        &self,
        lambda: &Coweight,
        mu: &Coweight,
        nu: &Coweight,
        grid: Grid,
    ) -> Result<Complex64> {
        let rank = self.rs.rank;
        let polys = [self.prepare_poly(lambda)?,
            self.prepare_poly(mu)?,
            self.prepare_poly(nu)?];
        let factors = self.density_factors();
        let w = self.weyl()?;
        let pref = self.w0_inv_value()?.to_f64().unwrap() / w.order() as f64;
        let n = grid.n;
        let table = roots_of_unity(n);
        let rows: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|k0| {
                let mut acc = Complex64::new(0.0, 0.0);
                let inner = n.pow(rank as u32 - 1);
                let mut k = vec![0usize; rank];
                k[0] = k0;
                for rest in 0..inner {
                    let mut r = rest;
                    for d in 1..rank {
                        k[d] = r % n;
                        r /= n;
                    }
                    let mut dens = pref;
                    for f in &factors {
                        let x = eval_mono(&table, n, &k, &f.coroot).conj();
                        let den = Complex64::new(1.0, 0.0) - f.den_c * x;
                        let num = Complex64::new(1.0, 0.0) - f.num_c * x;
                        dens *= den.norm_sqr() / num.norm_sqr();
                    }
                    let v0 = polys[0].eval_grid(&table, n, &k);
                    let v1 = polys[1].eval_grid(&table, n, &k);
                    let v2 = polys[2].eval_grid(&table, n, &k);
                    acc += v0 * v1 * v2.conj() * dens;
                }
                acc
            })
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for r in rows {
            total += r;
        }
        total /= (n as f64).powi(rank as i32);

        if self.is_exceptional() {
            let b = self.boundary_b().unwrap();
            let pref_b = self.w0_inv_value()?.to_f64().unwrap() / self.boundary_group_order();
            let inner = n.pow(rank as u32 - 1);
            let mut chart = vec![Complex64::new(0.0, 0.0); rank];
            chart[0] = Complex64::new(-b, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for rest in 0..inner {
                let mut r = rest;
                for d in 1..rank {
                    chart[d] = table[r % n];
                    r /= n;
                }
                let dens = pref_b * self.phi_one_inv(&chart[1..])?;
                let v0 = polys[0].eval_chart(&chart);
                let v1 = polys[1].eval_chart(&chart);
                let v2 = polys[2].eval_chart(&chart);
                acc += v0 * v1 * v2.conj() * dens;
            }
            total += acc / (n as f64).powi(rank as i32 - 1);
        }

        let n_nu = self.n_lambda_value(nu)?.to_f64().unwrap();
        Ok(total * n_nu)
    }

    /// All triple products `N_{nu_k} int P_i P_j conj(P_k) d pi_0` over a
    /// list of dominant coweights, in one sweep over the grid; entry
    /// `[i][j][k]` is the spectral value of `a_{i,j;k}`.
    pub fn triple_tensor(&self, lams: &[Coweight], grid: Grid) -> Result<Vec<Vec<Vec<Complex64>>>> {
        let rank = self.rs.rank;
        let count = lams.len();
        let polys: Vec<PreparedPoly> = lams
            .iter()
            .map(|l| self.prepare_poly(l))
            .collect::<Result<_>>()?;
        let factors = self.density_factors();
        let w = self.weyl()?;
        let pref = self.w0_inv_value()?.to_f64().unwrap() / w.order() as f64;
        let n = grid.n;
        let table = roots_of_unity(n);
        let rows: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|k0| {
                let mut acc = vec![Complex64::new(0.0, 0.0); count * count * count];
                let inner = n.pow(rank as u32 - 1);
                let mut vals = vec![Complex64::new(0.0, 0.0); count];
                let mut k = vec![0usize; rank];
                k[0] = k0;
                for rest in 0..inner {
                    let mut r = rest;
                    for d in 1..rank {
                        k[d] = r % n;
                        r /= n;
                    }
                    let mut dens = pref;
                    for f in &factors {
                        let x = eval_mono(&table, n, &k, &f.coroot).conj();
                        let den = Complex64::new(1.0, 0.0) - f.den_c * x;
                        let num = Complex64::new(1.0, 0.0) - f.num_c * x;
                        dens *= den.norm_sqr() / num.norm_sqr();
                    }
                    for (i, p) in polys.iter().enumerate() {
                        vals[i] = p.eval_grid(&table, n, &k);
                    }
                    for i in 0..count {
                        for j in 0..count {
                            let vij = vals[i] * vals[j] * dens;
                            for kk in 0..count {
                                acc[(i * count + j) * count + kk] += vij * vals[kk].conj();
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![Complex64::new(0.0, 0.0); count * count * count];
        for row in rows {
            for (t, v) in total.iter_mut().zip(row) {
                *t += v;
            }
        }
        let volume = (n as f64).powi(rank as i32);
        for t in total.iter_mut() {
            *t /= volume;
        }

        if self.is_exceptional() {
            let b = self.boundary_b().unwrap();
            let pref_b = self.w0_inv_value()?.to_f64().unwrap() / self.boundary_group_order();
            let inner = n.pow(rank as u32 - 1);
            let mut chart = vec![Complex64::new(0.0, 0.0); rank];
            chart[0] = Complex64::new(-b, 0.0);
            let mut vals = vec![Complex64::new(0.0, 0.0); count];
            let volume_b = (n as f64).powi(rank as i32 - 1);
            for rest in 0..inner {
                let mut r = rest;
                for d in 1..rank {
                    chart[d] = table[r % n];
                    r /= n;
                }
                let dens = pref_b * self.phi_one_inv(&chart[1..])? / volume_b;
                for (i, p) in polys.iter().enumerate() {
                    vals[i] = p.eval_chart(&chart);
                }
                for i in 0..count {
                    for j in 0..count {
                        let vij = vals[i] * vals[j] * dens;
                        for kk in 0..count {
                            total[(i * count + j) * count + kk] += vij * vals[kk].conj();
                        }
                    }
                }
            }
        }

        let mut out = vec![vec![vec![Complex64::new(0.0, 0.0); count]; count]; count];
        for i in 0..count {
            for j in 0..count {
                for kk in 0..count {
                    let n_nu = self.n_lambda_value(&lams[kk])?.to_f64().unwrap();
                    out[i][j][kk] = total[(i * count + j) * count + kk] * n_nu;
                }
            }
        }
        Ok(out)
    }

    /// Pairing with automatic grid doubling until two successive grids
    /// agree within `tol`; errors with the residual after the cap.
    pub fn integrate_pairing_auto(
        &self,
        lambda: &Coweight,
        mu: &Coweight,
        tol: f64,
        max_grid: usize,
    ) -> Result<(Complex64, usize)> {
        let mut n = 65;
        let mut prev = self.integrate_pairing(lambda, mu, Grid::new(n))?;
        loop {
            let next_n = (n - 1) * 2 + 1;
            if next_n > max_grid {
                return Err(Error::NoConvergence {
                    residual: f64::NAN,
                    grid: n,
                });
            }
            let next = self.integrate_pairing(lambda, mu, Grid::new(next_n))?;
            let residual = (next - prev).norm();
            if residual <= tol {
                return Ok((next, next_n));
            }
            prev = next;
            n = next_n;
        }
    }

    /// Spectrum description: component list, the boundary point in the
    /// exceptional regime, and sampled norm checks.
    pub fn spectrum_description(&self, sample: usize) -> Result<SpectrumReport> {
        let mut components = vec![format!("T^{} / W0", self.rs.rank)];
        let mut boundary_point = None;
        if self.is_exceptional() {
            let b = self.boundary_b().unwrap();
            components.push(format!(
                "{{t1 = {:.6}}} x T^{} / W0'",
                -b,
                self.rs.rank - 1
            ));
            boundary_point = Some(-b);
        }
        let mut rng = crate::qlaurent::SplitMix64(0x5eed);
        let mut norm_checks = Vec::new();
        for lam in [Coweight(vec![1; self.rs.rank]), {
            let mut v = vec![0; self.rs.rank];
            v[0] = 1;
            Coweight(v)
        }] {
            let exp = self.spherical(&lam)?;
            let z = self.ps.z_values();
            let mut sup: f64 = 0.0;
            for _ in 0..sample {
                let th: Vec<f64> = (0..self.rs.rank)
                    .map(|_| rng.f64() * std::f64::consts::TAU)
                    .collect();
                let u = UPoint::from_angles(&th);
                sup = sup.max(exp.eval(&u, &z).norm());
            }
            let (_, p1) = self.norm_at_one(&lam)?;
            norm_checks.push(NormCheck {
                lambda: lam.clone(),
                sampled_sup: sup,
                norm: p1,
            });
        }
        Ok(SpectrumReport {
            mode: if self.is_exceptional() {
                "exceptional"
            } else {
                "standard"
            },
            components,
            boundary_point,
            higman_warning: self.ps.higman_warning,
            norm_checks,
        })
    }
}

/// Sampled norm comparison for the spectrum report.
pub struct NormCheck {
    pub lambda: Coweight,
    pub sampled_sup: f64,
    pub norm: f64,
}

/// Spectrum description report.
pub struct SpectrumReport {
    pub mode: &'static str,
    pub components: Vec<String>,
    pub boundary_point: Option<f64>,
    pub higman_warning: bool,
    pub norm_checks: Vec<NormCheck>,
}

fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let th = std::f64::consts::TAU * (k as f64) / (n as f64);
            Complex64::new(th.cos(), th.sin())
        })
        .collect()
}

/// `prod_j table[(k_j e_j) mod n]`.
fn eval_mono(table: &[Complex64], n: usize, k: &[usize], exps: &[i64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (kj, &ej) in k.iter().zip(exps) {
        if ej != 0 {
            let idx = ((*kj as i64) * ej).rem_euclid(n as i64) as usize;
            acc *= table[idx];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::{rat, ratio};

    fn ctx(kind: RsType, rank: usize, q: &[i64]) -> Context {
        Context::with_integer_q(kind, rank, q).unwrap()
    }

    #[test]
    fn density_pointwise_a1() {
        // A1 q=4 at u = i: density = (5/4)/2 * |1+1|^2/|1+1/4|^2 = 8/5.
        let c = ctx(RsType::A, 1, &[4, 4]);
        let u = UPoint::new(vec![Complex64::new(0.0, 1.0)]);
        let d = c.density_at(&u).unwrap();
        assert!((d - 1.6).abs() < 1e-12, "{d}");
        // All tau = 1: density is identically 1.
        let thin = ctx(RsType::A, 2, &[1, 1, 1]);
        let u = UPoint::from_angles(&[0.3, 1.1]);
        assert!((thin.density_at(&u).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalization_and_orthogonality_a1() {
        let c = ctx(RsType::A, 1, &[4, 4]);
        let g = Grid::new(257);
        let zero = Coweight(vec![0]);
        let one = Coweight(vec![1]);
        let norm = c.integrate_pairing(&zero, &zero, g).unwrap();
        assert!((norm - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        let p11 = c.integrate_pairing(&one, &one, g).unwrap();
        assert!((p11 - Complex64::new(0.2, 0.0)).norm() < 1e-10);
        let p10 = c.integrate_pairing(&one, &zero, g).unwrap();
        assert!(p10.norm() < 1e-10);
    }

    #[test]
    fn grid_doubling_converges() {
        let c = ctx(RsType::A, 1, &[4, 4]);
        let (v, grid) = c
            .integrate_pairing_auto(&Coweight(vec![2]), &Coweight(vec![2]), 1e-10, 1025)
            .unwrap();
        assert!(grid <= 1025);
        let expect = c.n_lambda_value(&Coweight(vec![2])).unwrap().recip();
        assert!((v.re - expect.to_f64().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn grid_doubling_residual_ratio() {
        // Against the exact value, each doubling at least halves the
        // residual until it reaches the floating-point floor.
        let c = ctx(RsType::A, 2, &[2, 2, 2]);
        let lam = Coweight(vec![1, 0]);
        let exact = c.n_lambda_value(&lam).unwrap().recip().to_f64().unwrap();
        let mut prev: Option<f64> = None;
        for n in [65usize, 129, 257] {
            let v = c.integrate_pairing(&lam, &lam, Grid::new(n)).unwrap();
            let res = (v - Complex64::new(exact, 0.0)).norm();
            if let Some(p) = prev {
                assert!(res <= (0.5 * p).max(1e-12), "residual {res} after {p}");
            }
            prev = Some(res);
        }
    }

    #[test]
    fn exceptional_bc1_needs_boundary() {
        // BC1 (4,2) is exceptional: without the point mass the pairing
        // <P_1, P_0> misses by order one; with it, orthogonality holds.
        let c = ctx(RsType::BC, 1, &[4, 2]);
        assert!(c.is_exceptional());
        let g = Grid::new(257);
        let zero = Coweight(vec![0]);
        let one = Coweight(vec![1]);
        let full = c.integrate_pairing(&one, &zero, g).unwrap();
        assert!(full.norm() < 1e-9, "with boundary: {full}");
        let torus_only = c.integrate_pairing_torus_only(&one, &zero, g).unwrap();
        assert!(torus_only.norm() > 1e-3, "negative control: {torus_only}");
        let total = c.integrate_pairing(&zero, &zero, g).unwrap();
        assert!((total - Complex64::new(1.0, 0.0)).norm() < 1e-9, "{total}");
        let p11 = c.integrate_pairing(&one, &one, g).unwrap();
        let expect = c.n_lambda_value(&one).unwrap().recip().to_f64().unwrap();
        assert!((p11.re - expect).abs() < 1e-9);
    }

    #[test]
    fn phi_one_limit_cross_check() {
        // phi_1 at the boundary equals the numeric limit of
        // phi_0 / (1 + b^{-1} t_1) as t_1 -> -b, and the closed form
        // (q_n+1)(q_0+1)/(q_n (q_0 - q_n)) in rank one.
        let c = ctx(RsType::BC, 1, &[4, 2]);
        let b = c.boundary_b().unwrap();
        let phi1 = c.phi_one(&[]).unwrap();
        let eps = 1e-6;
        let t1 = Complex64::new(-b * (1.0 + eps), 0.0);
        let phi0 = c.phi_zero(&[t1]);
        let approx = phi0 / (Complex64::new(1.0, 0.0) + t1 / b);
        assert!(
            (approx.re - phi1).abs() < 1e-4 * phi1.abs(),
            "{approx} vs {phi1}"
        );
        let expect = (2.0 + 1.0) * (4.0 + 1.0) / (2.0 * (4.0 - 2.0));
        assert!((phi1 - expect).abs() < 1e-12);
    }

    #[test]
    fn triple_product_matches_structure_constant() {
        let c = ctx(RsType::A, 1, &[4, 4]);
        let g = Grid::new(257);
        let one = Coweight(vec![1]);
        let two = Coweight(vec![2]);
        // a_{1,1;2} = q/(q+1) = 4/5.
        let t = c.integrate_triple(&one, &one, &two, g).unwrap();
        assert!((t - Complex64::new(0.8, 0.0)).norm() < 1e-9, "{t}");
        // a_{1,1;1} = 0 by parity.
        let t0 = c.integrate_triple(&one, &one, &one, g).unwrap();
        assert!(t0.norm() < 1e-10);
        let zero = Coweight(vec![0]);
        let tz = c.integrate_triple(&zero, &zero, &zero, g).unwrap();
        assert!((tz - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn exceptional_bc2_boundary_line() {
        // The boundary line of BC2 contains grid nodes where phi_1 has a
        // pole (t_2 = +-1); the density extends by zero there and every
        // matrix entry stays finite.
        let c = ctx(RsType::BC, 2, &[4, 2, 2]);
        let lams = vec![
            Coweight(vec![0, 0]),
            Coweight(vec![1, 0]),
            Coweight(vec![0, 1]),
        ];
        let m = c.pairing_matrix(&lams, Grid::new(65), true).unwrap();
        for (i, li) in lams.iter().enumerate() {
            for (j, entry) in m[i].iter().enumerate() {
                assert!(entry.re.is_finite() && entry.im.is_finite());
                let expect = if i == j {
                    c.n_lambda_value(li).unwrap().recip().to_f64().unwrap()
                } else {
                    0.0
                };
                assert!(
                    (entry - Complex64::new(expect, 0.0)).norm() < 1e-9,
                    "entry ({i},{j}) = {entry}"
                );
            }
        }
        // phi_1 at a pole node: inverse is exactly 0.
        let inv = c.phi_one_inv(&[Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(inv, 0.0);
    }

    #[test]
    fn spectrum_report_modes() {
        let c = ctx(RsType::A, 2, &[3, 3, 3]);
        let rep = c.spectrum_description(200).unwrap();
        assert_eq!(rep.mode, "standard");
        assert_eq!(rep.components.len(), 1);
        for nc in &rep.norm_checks {
            assert!(nc.sampled_sup <= nc.norm + 1e-12);
        }
        let c = ctx(RsType::BC, 1, &[4, 2]);
        let rep = c.spectrum_description(200).unwrap();
        assert_eq!(rep.mode, "exceptional");
        assert_eq!(rep.components.len(), 2);
        assert!((rep.boundary_point.unwrap() + (0.5f64).sqrt()).abs() < 1e-12);
        // Standard BC2 stays single-component.
        let c = ctx(RsType::BC, 2, &[2, 3, 5]);
        let rep = c.spectrum_description(50).unwrap();
        assert_eq!(rep.mode, "standard");
        assert_eq!(rep.components.len(), 1);
    }

    #[test]
    fn rationality_of_w0_inv() {
        let c = ctx(RsType::C, 2, &[3, 2, 3]);
        let v = c.w0_inv_value().unwrap();
        // Words of C2's eight elements weigh 1, q1, q2, 2 q1 q2, q1^2 q2,
        // q1 q2^2, q1^2 q2^2 with q1 = 2, q2 = 3 here.
        let expect = rat(1)
            + ratio(1, 2)
            + ratio(1, 3)
            + ratio(2, 6)
            + ratio(1, 12)
            + ratio(1, 18)
            + ratio(1, 36);
        assert_eq!(v, expect);
    }
}
