//! Shared computation context: a root system, its Weyl group, a validated
//! parameter system, and read-mostly caches for spherical expansions and
//! vertex counts.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::parameters::{validate_params, ParamSystem};
use crate::qlaurent::{QLaurent, Rat};
use crate::root_datum::{build_root_system, Coweight, RootSystem, RsType, WeylGroup, WEYL_CAP};
use crate::spherical::SphericalExpansion;
use crate::Result;

pub struct Context {
    pub rs: Arc<RootSystem>,
    pub ps: ParamSystem,
    weyl: OnceLock<Arc<WeylGroup>>,
    pub(crate) spherical_cache: Mutex<HashMap<Coweight, Arc<SphericalExpansion>>>,
    pub(crate) nlambda_cache: Mutex<HashMap<Coweight, Arc<QLaurent>>>,
}

impl Context {
    pub fn new(kind: RsType, rank: usize, q: &[Rat]) -> Result<Context> {
        let rs = Arc::new(build_root_system(kind, rank)?);
        let ps = validate_params(&rs, q)?;
        Ok(Context {
            rs,
            ps,
            weyl: OnceLock::new(),
            spherical_cache: Mutex::new(HashMap::new()),
            nlambda_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Convenience constructor with integer parameters.
    pub fn with_integer_q(kind: RsType, rank: usize, q: &[i64]) -> Result<Context> {
        let raw: Vec<Rat> = q.iter().map(|&x| crate::qlaurent::rat(x)).collect();
        Context::new(kind, rank, &raw)
    }

    /// The fully enumerated Weyl group (built once, shared).
    pub fn weyl(&self) -> Result<Arc<WeylGroup>> {
        if let Some(w) = self.weyl.get() {
            return Ok(w.clone());
        }
        let w = Arc::new(self.rs.weyl_group(WEYL_CAP)?);
        let _ = self.weyl.set(w);
        Ok(self.weyl.get().unwrap().clone())
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn nvars(&self) -> usize {
        self.ps.nclasses
    }

    pub fn zero_cw(&self) -> Coweight {
        Coweight::zero(self.rs.rank)
    }
}
