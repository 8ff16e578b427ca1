//! Extended exact checks beyond the acceptance sweeps: the
//! boundary-integral identity on rank-two non-reduced systems (both
//! spectral regimes) and on G2.

use sfab::{Context, Coweight, RsType};

#[test]
fn phi_identity_bc2_standard() {
    let c = Context::with_integer_q(RsType::BC, 2, &[2, 3, 5]).unwrap();
    c.verify_phi_equals_spherical(&Coweight(vec![1, 0])).unwrap();
}

#[test]
fn phi_identity_bc2_exceptional() {
    let c = Context::with_integer_q(RsType::BC, 2, &[4, 2, 2]).unwrap();
    c.verify_phi_equals_spherical(&Coweight(vec![1, 0])).unwrap();
}

#[test]
fn phi_identity_g2() {
    let c = Context::with_integer_q(RsType::G2, 2, &[3, 2, 3]).unwrap();
    c.verify_phi_equals_spherical(&Coweight(vec![0, 1])).unwrap();
}

#[test]
fn horocycle_integrality_bc2_g2() {
    for (kind, q) in [
        (RsType::BC, vec![2i64, 3, 5]),
        (RsType::G2, vec![3, 2, 3]),
    ] {
        let c = Context::with_integer_q(kind, 2, &q).unwrap();
        // Integrality, nonnegativity and the total are asserted inside.
        c.horocycle_distribution(&Coweight(vec![1, 0])).unwrap();
    }
}
