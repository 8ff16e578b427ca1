//! Python bindings: an in-process `Engine` wrapping one parameter system,
//! module-level tree oracles, and the verification suite.
//!
//! Scalar results come back as native Python values; structured reports
//! come back as JSON strings (stable field order, exact values as
//! strings), matching the CLI report schemas.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sfab::plancherel::Grid;
use sfab::qlaurent::parse_rat;
use sfab::selftest::{self, Suite};
use sfab::torus::UPoint;
use sfab::tree::TreeBuilding;
use sfab::{Context, Coweight, Rat, RsType};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn coweight(v: Vec<i64>, rank: usize) -> PyResult<Coweight> {
    if v.len() != rank {
        return Err(PyValueError::new_err(format!(
            "coweight has {} coordinates, rank is {rank}",
            v.len()
        )));
    }
    Ok(Coweight(v))
}

/// One root system with a validated parameter system.
#[pyclass]
struct Engine {
    ctx: Context,
}

#[pymethods]
impl Engine {
    /// Engine(type, rank, q) where q maps node index to an exact rational
    /// string, e.g. Engine("BC", 2, {"0": "3", "1": "2", "2": "2"}).
    #[new]
    fn new(
        type_tag: &str,
        rank: usize,
        q: std::collections::BTreeMap<String, String>,
    ) -> PyResult<Self> {
        let kind = RsType::parse(type_tag).map_err(err)?;
        let mut raw: Vec<Rat> = Vec::with_capacity(rank + 1);
        for i in 0..=rank {
            let key = i.to_string();
            let s = q
                .get(&key)
                .ok_or_else(|| PyValueError::new_err(format!("q is missing node {key}")))?;
            raw.push(parse_rat(s).map_err(err)?);
        }
        let ctx = Context::new(kind, rank, &raw).map_err(err)?;
        Ok(Engine { ctx })
    }

    fn rank(&self) -> usize {
        self.ctx.rank()
    }

    fn mode(&self) -> &'static str {
        if self.ctx.is_exceptional() {
            "exceptional"
        } else {
            "standard"
        }
    }

    fn higman_warning(&self) -> bool {
        self.ctx.ps.higman_warning
    }

    /// Exact vertex count as a decimal string.
    fn n_lambda(&self, lam: Vec<i64>) -> PyResult<String> {
        let lam = coweight(lam, self.ctx.rank())?;
        Ok(self.ctx.n_lambda_value(&lam).map_err(err)?.to_string())
    }

    /// Symbolic vertex count in the class variables `z_i`.
    fn n_lambda_symbolic(&self, lam: Vec<i64>) -> PyResult<String> {
        let lam = coweight(lam, self.ctx.rank())?;
        let names: Vec<String> = (0..self.ctx.ps.nclasses).map(|i| format!("z{i}")).collect();
        Ok(self.ctx.n_lambda(&lam).map_err(err)?.to_string_with(&names))
    }

    /// Spherical expansion as a JSON report (monomial-basis coefficients
    /// of the unit-leading-coefficient normalization).
    fn spherical_json(&self, lam: Vec<i64>) -> PyResult<String> {
        let lam = coweight(lam, self.ctx.rank())?;
        let exp = self.ctx.spherical(&lam).map_err(err)?;
        let names: Vec<String> = (0..self.ctx.ps.nclasses).map(|i| format!("z{i}")).collect();
        let coeffs: Vec<serde_json::Value> = exp
            .coeffs
            .iter()
            .map(|(mu, c)| serde_json::json!({"mu": mu.0, "value": c.to_string_with(&names)}))
            .collect();
        let report = serde_json::json!({
            "lambda": lam.0,
            "basis": "monomial",
            "scale": exp.scale().to_string_with(&names),
            "coeffs": coeffs,
        });
        serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    /// Structure constants of `A_lambda A_mu` as JSON rows.
    fn structure_json(&self, lam: Vec<i64>, mu: Vec<i64>) -> PyResult<String> {
        let lam = coweight(lam, self.ctx.rank())?;
        let mu = coweight(mu, self.ctx.rank())?;
        let row = self.ctx.structure_row(&lam, &mu).map_err(err)?;
        let names: Vec<String> = (0..self.ctx.ps.nclasses).map(|i| format!("z{i}")).collect();
        let rows: Vec<serde_json::Value> = row
            .entries
            .iter()
            .map(|(nu, a)| {
                let numeric = a
                    .eval_at_q(&self.ctx.ps.class_q)
                    .map(|r| r.to_f64().unwrap_or(f64::NAN))
                    .unwrap_or(f64::NAN);
                serde_json::json!({
                    "lambda": lam.0, "mu": mu.0, "nu": nu.0,
                    "a": a.to_string_with(&names), "a_numeric": numeric,
                })
            })
            .collect();
        serde_json::to_string(&rows).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    /// Exact numeric structure constant `a_{lambda,mu;nu}` as a rational
    /// string.
    fn structure_constant(&self, lam: Vec<i64>, mu: Vec<i64>, nu: Vec<i64>) -> PyResult<String> {
        let lam = coweight(lam, self.ctx.rank())?;
        let mu = coweight(mu, self.ctx.rank())?;
        let nu = coweight(nu, self.ctx.rank())?;
        let a = self.ctx.structure_constant(&lam, &mu, &nu).map_err(err)?;
        let v = a
            .eval_at_q(&self.ctx.ps.class_q)
            .ok_or_else(|| PyRuntimeError::new_err("non-rational structure constant"))?;
        Ok(v.to_string())
    }

    /// Verify the boundary-integral expansion against the spherical one;
    /// raises on any mismatch.
    fn phi_check(&self, lam: Vec<i64>) -> PyResult<()> {
        let lam = coweight(lam, self.ctx.rank())?;
        self.ctx.verify_phi_equals_spherical(&lam).map_err(err)
    }

    /// `P_lambda(u)` at a point given by its coordinates `u_i` as
    /// `(re, im)` pairs; returns `(re, im)`.
    fn spherical_eval(&self, lam: Vec<i64>, u: Vec<(f64, f64)>) -> PyResult<(f64, f64)> {
        let lam = coweight(lam, self.ctx.rank())?;
        if u.len() != self.ctx.rank() {
            return Err(PyValueError::new_err("point has wrong rank"));
        }
        let pt = UPoint::new(u.iter().map(|&(re, im)| Complex64::new(re, im)).collect());
        let v = self.ctx.spherical_eval(&lam, &pt).map_err(err)?;
        Ok((v.re, v.im))
    }

    /// Operator norm `P_lambda(1)`.
    fn norm_at_one(&self, lam: Vec<i64>) -> PyResult<f64> {
        let lam = coweight(lam, self.ctx.rank())?;
        Ok(self.ctx.norm_at_one(&lam).map_err(err)?.1)
    }

    /// Orthogonality pairing against the Plancherel measure; `(re, im)`.
    #[pyo3(signature = (lam, mu, grid = 129, include_boundary = true))]
    fn pairing(
        &self,
        lam: Vec<i64>,
        mu: Vec<i64>,
        grid: usize,
        include_boundary: bool,
    ) -> PyResult<(f64, f64)> {
        let lam = coweight(lam, self.ctx.rank())?;
        let mu = coweight(mu, self.ctx.rank())?;
        let m = self
            .ctx
            .pairing_matrix(&[lam, mu], Grid::new(grid), include_boundary)
            .map_err(err)?;
        Ok((m[0][1].re, m[0][1].im))
    }

    /// Triple-product (spectral) route to `a_{lambda,mu;nu}`; `(re, im)`.
    #[pyo3(signature = (lam, mu, nu, grid = 129))]
    fn triple(
        &self,
        lam: Vec<i64>,
        mu: Vec<i64>,
        nu: Vec<i64>,
        grid: usize,
    ) -> PyResult<(f64, f64)> {
        let lam = coweight(lam, self.ctx.rank())?;
        let mu = coweight(mu, self.ctx.rank())?;
        let nu = coweight(nu, self.ctx.rank())?;
        let v = self
            .ctx
            .integrate_triple(&lam, &mu, &nu, Grid::new(grid))
            .map_err(err)?;
        Ok((v.re, v.im))
    }

    /// Spectrum description as JSON.
    #[pyo3(signature = (samples = 1000))]
    fn spectrum_json(&self, samples: usize) -> PyResult<String> {
        let rep = self.ctx.spectrum_description(samples).map_err(err)?;
        let norm_checks: Vec<serde_json::Value> = rep
            .norm_checks
            .iter()
            .map(|nc| {
                serde_json::json!({
                    "lambda": nc.lambda.0,
                    "sampled_sup": nc.sampled_sup,
                    "norm": nc.norm,
                })
            })
            .collect();
        let report = serde_json::json!({
            "mode": rep.mode,
            "components": rep.components,
            "boundary_point": rep.boundary_point,
            "higman_warning": rep.higman_warning,
            "norm_checks": norm_checks,
        });
        serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Engine({}, rank={}, mode={})",
            self.ctx.rs.kind.name(),
            self.ctx.rank(),
            self.mode()
        )
    }
}

/// Sphere count `|V_k(root)|` on the truncated `(q0+1, q1+1)` tree.
#[pyfunction]
fn tree_sphere_count(q0: u32, q1: u32, depth: u32, k: i64) -> PyResult<u64> {
    let t = TreeBuilding::build(q0, q1, depth).map_err(err)?;
    t.sphere_count(t.root(), k).map_err(err)
}

/// Horocycle census of `V_k(root)` toward the first end, as a JSON map.
#[pyfunction]
fn tree_horocycle_census(q0: u32, q1: u32, depth: u32, k: i64) -> PyResult<String> {
    let t = TreeBuilding::build(q0, q1, depth).map_err(err)?;
    let end = t.ends().start;
    let census = t.horocycle_census(k, end).map_err(err)?;
    let map: serde_json::Map<String, serde_json::Value> = census
        .iter()
        .map(|(h, c)| (h.to_string(), serde_json::json!(c)))
        .collect();
    serde_json::to_string(&map).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Power-iteration estimate of the averaging-operator norm at lattice
/// radius `k` on the depth-truncated tree.
#[pyfunction]
#[pyo3(signature = (q0, q1, k, depth = 12, iters = 600))]
fn tree_power_iteration(q0: u32, q1: u32, k: i64, depth: u32, iters: usize) -> f64 {
    sfab::tree::radial_power_iteration(q0, q1, k, depth, iters)
}

/// Run the verification suite ("quick" or "full"); returns JSON results.
#[pyfunction]
#[pyo3(signature = (suite = "quick"))]
fn run_selftest(suite: &str) -> PyResult<String> {
    let kind = Suite::parse(suite)
        .ok_or_else(|| PyValueError::new_err(format!("unknown suite {suite:?}")))?;
    let results: Vec<serde_json::Value> = selftest::run_suite(kind)
        .iter()
        .map(|r| {
            serde_json::json!({
                "id": r.id,
                "name": r.name,
                "passed": r.passed,
                "seconds": r.seconds,
                "details": r.details,
            })
        })
        .collect();
    serde_json::to_string(&results).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn sfab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Engine>()?;
    m.add_function(wrap_pyfunction!(tree_sphere_count, m)?)?;
    m.add_function(wrap_pyfunction!(tree_horocycle_census, m)?)?;
    m.add_function(wrap_pyfunction!(tree_power_iteration, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
