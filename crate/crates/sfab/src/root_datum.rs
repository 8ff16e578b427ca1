//! Irreducible root systems (reduced types and the non-reduced `BC_n`),
//! their coweight lattices, and the finite Weyl group acting on coweight
//! coordinates by integer matrices.
//!
//! Roots are stored both in exact rational ambient coordinates (following
//! the standard plate realizations) and in integer simple-root coordinates,
//! so that every pairing `<mu, alpha>` with a coweight is plain integer
//! arithmetic: if `mu = sum c_i lambda_i` and `alpha = sum a_j alpha_j`
//! then `<mu, alpha> = sum a_j c_j`.
//!
//! For `D_n` we follow the realization with `alpha_{n-1} = e_{n-1} - e_n`
//! and `alpha_n = e_{n-1} + e_n`; everything downstream computes the
//! involution `lambda -> lambda*` directly from the Weyl action, so no
//! node-labelling bookkeeping enters the results.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use crate::qlaurent::Rat;
use crate::{Error, Result};

/// Supported irreducible types.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum RsType {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
    BC,
}

impl RsType {
    pub fn parse(s: &str) -> Result<RsType> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(RsType::A),
            "B" => Ok(RsType::B),
            "C" => Ok(RsType::C),
            "D" => Ok(RsType::D),
            "E6" => Ok(RsType::E6),
            "E7" => Ok(RsType::E7),
            "E8" => Ok(RsType::E8),
            "F4" => Ok(RsType::F4),
            "G2" => Ok(RsType::G2),
            "BC" => Ok(RsType::BC),
            other => Err(Error::BadInput(format!("unknown root system type {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RsType::A => "A",
            RsType::B => "B",
            RsType::C => "C",
            RsType::D => "D",
            RsType::E6 => "E6",
            RsType::E7 => "E7",
            RsType::E8 => "E8",
            RsType::F4 => "F4",
            RsType::G2 => "G2",
            RsType::BC => "BC",
        }
    }

    /// Classical Weyl group order.
    pub fn weyl_order(&self, n: usize) -> u64 {
        fn fact(k: usize) -> u64 {
            (1..=k as u64).product()
        }
        match self {
            RsType::A => fact(n + 1),
            RsType::B | RsType::C | RsType::BC => (1u64 << n) * fact(n),
            RsType::D => (1u64 << (n - 1)) * fact(n),
            RsType::G2 => 12,
            RsType::F4 => 1152,
            RsType::E6 => 51_840,
            RsType::E7 => 2_903_040,
            RsType::E8 => 696_729_600,
        }
    }
}

impl fmt::Display for RsType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coweight in fundamental-coweight coordinates: `c_i = <mu, alpha_i>`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Coweight(pub Vec<i64>);

impl Coweight {
    pub fn zero(rank: usize) -> Self {
        Coweight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_strongly_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 1)
    }

    /// Sum of simple-root pairings; the sweep parameter used in tests.
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Coweight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Coweight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Coweight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scaled(&self, k: i64) -> Self {
        Coweight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// One root of the system, with every representation the rest of the crate
/// needs precomputed.
#[derive(Clone, Debug)]
pub struct Root {
    /// Integer coordinates in the simple-root basis.
    pub simple_coords: Vec<i64>,
    /// Exact ambient coordinates.
    pub ambient: Vec<Rat>,
    /// Squared Euclidean length.
    pub len2: Rat,
    /// Coordinates of the coroot `alpha^vee` in the fundamental-coweight
    /// basis, i.e. `<alpha^vee, alpha_j>` for each `j`.
    pub coroot_coords: Vec<i64>,
    /// `alpha` is in `R_1` (no doubled root `2 alpha` in `R`).
    pub in_r1: bool,
    /// `alpha` is in `R_2` (no halved root `alpha/2` in `R`).
    pub in_r2: bool,
    /// Index of a simple root with the same length, when one exists.
    pub length_class: Option<usize>,
}

impl Root {
    pub fn in_r3(&self) -> bool {
        self.in_r1 && self.in_r2
    }
}

/// An exact realization of an irreducible root system.
#[derive(Debug)]
pub struct RootSystem {
    pub kind: RsType,
    pub rank: usize,
    pub ambient_dim: usize,
    /// Ambient coordinates of the simple roots.
    pub simple_ambient: Vec<Vec<Rat>>,
    /// Gram matrix `<alpha_i, alpha_j>` of the simple roots.
    pub gram: Vec<Vec<Rat>>,
    /// All positive roots; the first `rank` entries are the simple roots.
    pub positive_roots: Vec<Root>,
    /// Index of the highest root in `positive_roots`.
    pub highest: usize,
    /// Marks `m_i`, `i = 1..n`, of the highest root (`m_0 = 1` implicitly).
    pub marks: Vec<i64>,
    /// Ambient coordinates of the fundamental coweights.
    pub fundamental_coweights: Vec<Vec<Rat>>,
    /// Coweight-coordinate matrices of the simple reflections.
    pub simple_refl: Vec<Vec<i64>>,
    /// Generators of `Q^+` (positive-coroot monoid) in coweight coordinates.
    pub qplus_gens: Vec<Vec<i64>>,
    /// Scaled inverse of the generator matrix: `qplus_inv[r*n+c] / qplus_den`
    /// is entry `(r, c)` of the inverse, all entries nonnegative.
    qplus_inv: Vec<i64>,
    qplus_den: i64,
    /// Lookup from simple coordinates to positive-root index.
    index: HashMap<Vec<i64>, usize>,
}

/// Cap on full Weyl group enumeration.
pub const WEYL_CAP: usize = 100_000;

fn rvec(v: Vec<i64>) -> Vec<Rat> {
    v.into_iter().map(|x| Rat::from_integer(x.into())).collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve the square rational system `m x = rhs` by Gaussian elimination.
fn solve(m: &[Vec<Rat>], rhs: &[Rat]) -> Vec<Rat> {
    let n = rhs.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular system");
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=n {
                    let sub = &a[col][c] * &f;
                    a[r][c] -= sub;
                }
            }
        }
    }
    (0..n).map(|r| a[r][n].clone()).collect()
}

/// Build a root system of the given type and rank.
pub fn build_root_system(kind: RsType, rank: usize) -> Result<RootSystem> {
    let bad = || Err(Error::UnsupportedType(kind.name().to_string(), rank));
    let simple_ambient: Vec<Vec<Rat>> = match kind {
        RsType::A => {
            if rank < 1 {
                return bad();
            }
            (0..rank)
                .map(|i| {
                    let mut v = vec![0i64; rank + 1];
                    v[i] = 1;
                    v[i + 1] = -1;
                    rvec(v)
                })
                .collect()
        }
        RsType::B => {
            if rank < 2 {
                return bad();
            }
            (0..rank)
                .map(|i| {
                    let mut v = vec![0i64; rank];
                    if i + 1 < rank {
                        v[i] = 1;
                        v[i + 1] = -1;
                    } else {
                        v[i] = 1;
                    }
                    rvec(v)
                })
                .collect()
        }
        RsType::C => {
            if rank < 2 {
                return bad();
            }
            (0..rank)
                .map(|i| {
                    let mut v = vec![0i64; rank];
                    if i + 1 < rank {
                        v[i] = 1;
                        v[i + 1] = -1;
                    } else {
                        v[i] = 2;
                    }
                    rvec(v)
                })
                .collect()
        }
        RsType::D => {
            if rank < 4 {
                return bad();
            }
            (0..rank)
                .map(|i| {
                    let mut v = vec![0i64; rank];
                    if i + 1 < rank {
                        v[i] = 1;
                        v[i + 1] = -1;
                    } else {
                        v[rank - 2] = 1;
                        v[rank - 1] = 1;
                    }
                    rvec(v)
                })
                .collect()
        }
        RsType::BC => {
            if rank < 1 {
                return bad();
            }
            (0..rank)
                .map(|i| {
                    let mut v = vec![0i64; rank];
                    if i + 1 < rank {
                        v[i] = 1;
                        v[i + 1] = -1;
                    } else {
                        v[i] = 1;
                    }
                    rvec(v)
                })
                .collect()
        }
        RsType::G2 => {
            if rank != 2 {
                return bad();
            }
            vec![rvec(vec![1, -1, 0]), rvec(vec![-2, 1, 1])]
        }
        RsType::F4 => {
            if rank != 4 {
                return bad();
            }
            let half = Rat::new(1.into(), 2.into());
            vec![
                rvec(vec![0, 1, -1, 0]),
                rvec(vec![0, 0, 1, -1]),
                rvec(vec![0, 0, 0, 1]),
                vec![half.clone(), -half.clone(), -half.clone(), -half],
            ]
        }
        RsType::E6 | RsType::E7 | RsType::E8 => {
            let need = match kind {
                RsType::E6 => 6,
                RsType::E7 => 7,
                _ => 8,
            };
            if rank != need {
                return bad();
            }
            let half = Rat::new(1.into(), 2.into());
            let mut alpha1 = vec![-half.clone(); 8];
            alpha1[0] = half.clone();
            alpha1[7] = half;
            let mut out = vec![alpha1, rvec(vec![1, 1, 0, 0, 0, 0, 0, 0])];
            for i in 0..(need - 2) {
                let mut v = vec![0i64; 8];
                v[i] = -1;
                v[i + 1] = 1;
                out.push(rvec(v));
            }
            out
        }
    };

    let n = rank;
    let ambient_dim = simple_ambient[0].len();
    let gram: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| dot(&simple_ambient[i], &simple_ambient[j]))
                .collect()
        })
        .collect();

    // Cartan integers c[i][j] = <alpha_i, alpha_j^vee>.
    let cartan: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = &gram[i][j] * Rat::from_integer(2.into()) / &gram[j][j];
                    assert!(v.is_integer(), "Cartan entry not integral");
                    v.to_integer().to_i64().unwrap()
                })
                .collect()
        })
        .collect();

    // Closure of the simple roots under the simple reflections, in
    // simple-root coordinates. For reduced systems this is all of R.
    let mut all: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut v = vec![0i64; n];
        v[i] = 1;
        all.insert(v.clone());
        all.insert(v.iter().map(|x| -x).collect());
        queue.push_back(v);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..n {
            // s_i(beta) = beta - <beta, alpha_i^vee> alpha_i
            let pair: i64 = beta.iter().enumerate().map(|(j, &b)| b * cartan[j][i]).sum();
            let mut nb = beta.clone();
            nb[i] -= pair;
            if all.insert(nb.clone()) {
                all.insert(nb.iter().map(|x| -x).collect());
                queue.push_back(nb);
            }
        }
    }
    // BC_n: adjoin doubled short roots (length^2 == 1 in this realization).
    if kind == RsType::BC {
        let amb_of = |coords: &[i64]| -> Vec<Rat> {
            let mut v = vec![Rat::zero(); ambient_dim];
            for (j, &c) in coords.iter().enumerate() {
                for (d, slot) in v.iter_mut().enumerate() {
                    *slot += &simple_ambient[j][d] * Rat::from_integer(c.into());
                }
            }
            v
        };
        let doubled: Vec<Vec<i64>> = all
            .iter()
            .filter(|coords| {
                let a = amb_of(coords);
                dot(&a, &a).is_one()
            })
            .map(|coords| coords.iter().map(|x| x * 2).collect())
            .collect();
        for d in doubled {
            all.insert(d);
        }
    }

    let mut positives: Vec<Vec<i64>> = all
        .iter()
        .filter(|v| v.iter().all(|&x| x >= 0) && v.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    // Simple roots first, the rest sorted by (height, coords) for stable order.
    positives.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));

    let set: HashSet<Vec<i64>> = all;
    let mut roots = Vec::with_capacity(positives.len());
    for coords in &positives {
        let ambient: Vec<Rat> = {
            let mut v = vec![Rat::zero(); ambient_dim];
            for (j, &c) in coords.iter().enumerate() {
                for (d, slot) in v.iter_mut().enumerate() {
                    *slot += &simple_ambient[j][d] * Rat::from_integer(c.into());
                }
            }
            v
        };
        let len2 = dot(&ambient, &ambient);
        let coroot_coords: Vec<i64> = (0..n)
            .map(|j| {
                let ip = dot(&ambient, &simple_ambient[j]);
                let v = ip * Rat::from_integer(2.into()) / &len2;
                assert!(v.is_integer(), "coroot coordinate not integral");
                v.to_integer().to_i64().unwrap()
            })
            .collect();
        let twice: Vec<i64> = coords.iter().map(|x| x * 2).collect();
        let in_r1 = !set.contains(&twice);
        let in_r2 = if coords.iter().all(|&x| x % 2 == 0) {
            let half: Vec<i64> = coords.iter().map(|x| x / 2).collect();
            !set.contains(&half)
        } else {
            true
        };
        let length_class = (0..n).find(|&i| gram[i][i] == len2);
        roots.push(Root {
            simple_coords: coords.clone(),
            ambient,
            len2,
            coroot_coords,
            in_r1,
            in_r2,
            length_class,
        });
    }

    let index: HashMap<Vec<i64>, usize> = roots
        .iter()
        .enumerate()
        .map(|(k, r)| (r.simple_coords.clone(), k))
        .collect();

    // Highest root: dominates every positive root coordinatewise.
    let highest = roots
        .iter()
        .enumerate()
        .max_by_key(|(_, r)| (r.simple_coords.iter().sum::<i64>(), r.simple_coords.clone()))
        .map(|(k, _)| k)
        .expect("nonempty root list");
    for r in &roots {
        assert!(
            roots[highest]
                .simple_coords
                .iter()
                .zip(&r.simple_coords)
                .all(|(h, c)| h >= c),
            "highest root must dominate"
        );
    }
    let marks = roots[highest].simple_coords.clone();

    // Fundamental coweights: lambda_i = sum_k x_k alpha_k with G x = e_i.
    let fundamental_coweights: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut rhs = vec![Rat::zero(); n];
            rhs[i] = Rat::one();
            let x = solve(&gram, &rhs);
            let mut v = vec![Rat::zero(); ambient_dim];
            for (k, xk) in x.iter().enumerate() {
                for (d, slot) in v.iter_mut().enumerate() {
                    *slot += &simple_ambient[k][d] * xk;
                }
            }
            v
        })
        .collect();

    // Simple reflection matrices on coweight coordinates.
    let simple_refl: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let k = &roots[index[&{
                let mut v = vec![0i64; n];
                v[i] = 1;
                v
            }]]
                .coroot_coords;
            let mut m = vec![0i64; n * n];
            for r in 0..n {
                for c in 0..n {
                    m[r * n + c] = i64::from(r == c) - if c == i { k[r] } else { 0 };
                }
            }
            m
        })
        .collect();

    // Q^+ generators: the indecomposable positive coroots. For reduced
    // systems these are the simple coroots; for BC_n the coroot set equals
    // the root set and the generators are the simple roots themselves.
    let qplus_gens: Vec<Vec<i64>> = if kind == RsType::BC {
        (0..n)
            .map(|i| {
                let simple = &roots[index[&{
                    let mut v = vec![0i64; n];
                    v[i] = 1;
                    v
                }]];
                // Coordinates of alpha_i as a coweight: <alpha_i, alpha_j>
                // ... alpha_i = (2 alpha_i / len2) * (len2 / 2) = alpha_i^vee * len2/2.
                (0..n)
                    .map(|j| {
                        let ip = dot(&simple.ambient, &simple_ambient[j]);
                        assert!(ip.is_integer());
                        ip.to_integer().to_i64().unwrap()
                    })
                    .collect()
            })
            .collect()
    } else {
        (0..n)
            .map(|i| {
                roots[index[&{
                    let mut v = vec![0i64; n];
                    v[i] = 1;
                    v
                }]]
                    .coroot_coords
                    .clone()
            })
            .collect()
    };

    // Invert the generator matrix (columns = generators) over the
    // rationals and scale to a common integer denominator. The inverse of
    // a finite-type Cartan-like matrix has nonnegative entries; this is
    // what makes the bounded dominance search below exhaustive.
    let (qplus_inv, qplus_den) = {
        let m: Vec<Vec<Rat>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| Rat::from_integer(qplus_gens[c][r].into()))
                    .collect()
            })
            .collect();
        let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut rhs = vec![Rat::zero(); n];
            rhs[i] = Rat::one();
            cols.push(solve(&m, &rhs));
        }
        let mut den: num_bigint::BigInt = 1.into();
        for col in &cols {
            for v in col {
                den = num_integer::lcm(den.clone(), v.denom().clone());
            }
        }
        let mut flat = vec![0i64; n * n];
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                let scaled = v * Rat::from_integer(den.clone());
                assert!(scaled.is_integer());
                let x = scaled.to_integer().to_i64().unwrap();
                assert!(x >= 0, "inverse generator matrix must be nonnegative");
                flat[r * n + c] = x;
            }
        }
        (flat, den.to_i64().unwrap())
    };

    let rs = RootSystem {
        kind,
        rank,
        ambient_dim,
        simple_ambient,
        gram,
        positive_roots: roots,
        highest,
        marks,
        fundamental_coweights,
        simple_refl,
        qplus_gens,
        qplus_inv,
        qplus_den,
        index,
    };
    rs.check_invariants();
    Ok(rs)
}

impl RootSystem {
    fn check_invariants(&self) {
        // <lambda_i, alpha_j> = delta_ij exactly.
        for i in 0..self.rank {
            for j in 0..self.rank {
                let ip = dot(&self.fundamental_coweights[i], &self.simple_ambient[j]);
                let expect = if i == j { Rat::one() } else { Rat::zero() };
                assert_eq!(ip, expect, "coweight duality failed");
            }
        }
        // Positive-root counts for R1/R2 in the BC case.
        if self.kind == RsType::BC {
            let n = self.rank;
            let r1 = self.positive_roots.iter().filter(|r| r.in_r1).count();
            let r2 = self.positive_roots.iter().filter(|r| r.in_r2).count();
            assert_eq!(r1, n * n, "R1+ of BC_n has n^2 roots");
            assert_eq!(r2, n * n, "R2+ of BC_n has n^2 roots");
        }
    }

    /// `<mu, alpha>` for a coweight and a root of this system.
    pub fn pair(&self, mu: &Coweight, root: &Root) -> i64 {
        root.simple_coords
            .iter()
            .zip(&mu.0)
            .map(|(a, c)| a * c)
            .sum()
    }

    pub fn simple_root(&self, i: usize) -> &Root {
        &self.positive_roots[self.index[&{
            let mut v = vec![0i64; self.rank];
            v[i] = 1;
            v
        }]]
    }

    pub fn highest_root(&self) -> &Root {
        &self.positive_roots[self.highest]
    }

    /// Index of `alpha/2` within the positive roots, when it is a root.
    pub fn half_index(&self, root: &Root) -> Option<usize> {
        if root.simple_coords.iter().all(|&x| x % 2 == 0) {
            let half: Vec<i64> = root.simple_coords.iter().map(|x| x / 2).collect();
            self.index.get(&half).copied()
        } else {
            None
        }
    }

    /// Apply the simple reflection `s_i` to a coweight.
    pub fn reflect(&self, i: usize, mu: &Coweight) -> Coweight {
        apply_matrix(&self.simple_refl[i], &mu.0)
    }

    /// The dominant representative of the Weyl orbit of `mu`.
    pub fn dominant_rep(&self, mu: &Coweight) -> Coweight {
        let mut v = mu.clone();
        loop {
            match v.0.iter().position(|&c| c < 0) {
                None => return v,
                Some(i) => v = self.reflect(i, &v),
            }
        }
    }

    /// Full Weyl orbit of `mu` (no global group enumeration needed).
    pub fn weyl_orbit(&self, mu: &Coweight) -> Vec<Coweight> {
        let mut seen: HashSet<Coweight> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(mu.clone());
        queue.push_back(mu.clone());
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank {
                let w = self.reflect(i, &v);
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        let mut out: Vec<Coweight> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// `lambda* = -w_0 lambda` for dominant `lambda`.
    pub fn lambda_star(&self, lambda: &Coweight) -> Result<Coweight> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        Ok(self.dominant_rep(&lambda.neg()))
    }

    /// Membership of `v` (coweight coordinates) in the positive-coroot cone
    /// `Q^+`; returns the nonnegative generator coefficients when inside.
    pub fn qplus_coefficients(&self, v: &Coweight) -> Option<Vec<i64>> {
        let n = self.rank;
        let mut out = Vec::with_capacity(n);
        for r in 0..n {
            let mut acc: i64 = 0;
            for c in 0..n {
                acc += self.qplus_inv[r * n + c] * v.0[c];
            }
            if acc < 0 || acc % self.qplus_den != 0 {
                return None;
            }
            out.push(acc / self.qplus_den);
        }
        Some(out)
    }

    /// Upper bounds for the generator coefficients of `lambda - mu` over
    /// all dominant `mu`; the exhaustive search box for dominance sweeps.
    pub fn qplus_box(&self, lambda: &Coweight) -> Vec<i64> {
        let n = self.rank;
        (0..n)
            .map(|r| {
                let mut acc: i64 = 0;
                for c in 0..n {
                    acc += self.qplus_inv[r * n + c] * lambda.0[c];
                }
                acc.div_euclid(self.qplus_den)
            })
            .collect()
    }

    /// Dominance order: `mu <= lambda` iff `lambda - mu` lies in `Q^+`.
    pub fn dominance_leq(&self, mu: &Coweight, lambda: &Coweight) -> bool {
        self.qplus_coefficients(&lambda.sub(mu)).is_some()
    }

    /// Generate the full Weyl group; errors when the classical order
    /// exceeds `cap`.
    pub fn weyl_group(&self, cap: usize) -> Result<WeylGroup> {
        let order = self.kind.weyl_order(self.rank);
        if order > cap as u64 {
            return Err(Error::EnumerationCap {
                cap,
                order: order as usize,
            });
        }
        let n = self.rank;
        let ident: Vec<i64> = identity_matrix(n);
        let mut elements = vec![WeylElement {
            matrix: ident.clone(),
            word: Vec::new(),
        }];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        index.insert(ident, 0);
        let mut head = 0;
        while head < elements.len() {
            let (mat, word) = (elements[head].matrix.clone(), elements[head].word.clone());
            for i in 0..n {
                // Left multiplication by s_i.
                let nm = mat_mul(&self.simple_refl[i], &mat, n);
                if !index.contains_key(&nm) {
                    let mut w = vec![i as u8];
                    w.extend_from_slice(&word);
                    index.insert(nm.clone(), elements.len());
                    elements.push(WeylElement {
                        matrix: nm,
                        word: w,
                    });
                }
            }
            head += 1;
        }
        assert_eq!(elements.len() as u64, order, "Weyl group order mismatch");
        let longest = elements
            .iter()
            .enumerate()
            .max_by_key(|(_, e)| e.word.len())
            .map(|(k, _)| k)
            .unwrap();
        let max_len = elements[longest].word.len();
        assert_eq!(
            elements.iter().filter(|e| e.word.len() == max_len).count(),
            1,
            "longest element must be unique"
        );
        Ok(WeylGroup {
            rank: n,
            elements,
            index,
            longest,
        })
    }

    /// Enumerate the (parabolic) subgroup generated by the listed simple
    /// reflections; lengths within the subgroup agree with lengths in the
    /// full group.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<WeylElement> {
        let n = self.rank;
        let ident = identity_matrix(n);
        let mut elements = vec![WeylElement {
            matrix: ident.clone(),
            word: Vec::new(),
        }];
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        seen.insert(ident);
        let mut head = 0;
        while head < elements.len() {
            let (mat, word) = (elements[head].matrix.clone(), elements[head].word.clone());
            for &i in gens {
                let nm = mat_mul(&self.simple_refl[i], &mat, n);
                if seen.insert(nm.clone()) {
                    let mut w = vec![i as u8];
                    w.extend_from_slice(&word);
                    elements.push(WeylElement {
                        matrix: nm,
                        word: w,
                    });
                }
            }
            head += 1;
        }
        elements
    }

    /// Generators `{s_i : <lambda, alpha_i> = 0}` of the stabilizer of a
    /// dominant coweight.
    pub fn stabilizer_gens(&self, lambda: &Coweight) -> Vec<usize> {
        (0..self.rank).filter(|&i| lambda.0[i] == 0).collect()
    }

    /// Reflect a root through `s_i` (simple-root coordinates).
    pub fn reflect_root_coords(&self, i: usize, coords: &[i64]) -> Vec<i64> {
        // s_i(beta) = beta - <beta, alpha_i^vee> alpha_i
        let pair: i64 = coords
            .iter()
            .enumerate()
            .map(|(j, &b)| {
                b * {
                    // Cartan integer <alpha_j, alpha_i^vee>
                    let g = &self.gram[j][i] * Rat::from_integer(2.into()) / &self.gram[i][i];
                    g.to_integer().to_i64().unwrap()
                }
            })
            .sum();
        let mut nb = coords.to_vec();
        nb[i] -= pair;
        nb
    }

    /// Apply a Weyl element (by word) to root coordinates.
    pub fn act_on_root(&self, word: &[u8], coords: &[i64]) -> Vec<i64> {
        let mut v = coords.to_vec();
        for &i in word.iter().rev() {
            v = self.reflect_root_coords(i as usize, &v);
        }
        v
    }

    /// Positive-root index lookup by simple coordinates.
    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }
}

/// Finite Weyl group element: an integer matrix on coweight coordinates
/// plus one reduced word.
#[derive(Clone, Debug)]
pub struct WeylElement {
    pub matrix: Vec<i64>,
    pub word: Vec<u8>,
}

impl WeylElement {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn apply(&self, mu: &Coweight) -> Coweight {
        apply_matrix(&self.matrix, &mu.0)
    }
}

/// Fully enumerated finite Weyl group.
#[derive(Debug)]
pub struct WeylGroup {
    pub rank: usize,
    pub elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
    pub longest: usize,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn longest_element(&self) -> &WeylElement {
        &self.elements[self.longest]
    }

    pub fn index_of(&self, matrix: &[i64]) -> Option<usize> {
        self.index.get(matrix).copied()
    }

    /// Compose two elements (index arithmetic through matrices).
    pub fn compose(&self, a: usize, b: usize) -> usize {
        let n = self.rank;
        let m = mat_mul(&self.elements[a].matrix, &self.elements[b].matrix, n);
        self.index[&m]
    }
}

pub fn identity_matrix(n: usize) -> Vec<i64> {
    let mut m = vec![0i64; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

pub fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n * n];
    for r in 0..n {
        for k in 0..n {
            let ark = a[r * n + k];
            if ark == 0 {
                continue;
            }
            for c in 0..n {
                out[r * n + c] += ark * b[k * n + c];
            }
        }
    }
    out
}

pub fn apply_matrix(m: &[i64], v: &[i64]) -> Coweight {
    let n = v.len();
    let mut out = vec![0i64; n];
    for (r, slot) in out.iter_mut().enumerate() {
        let mut acc = 0i64;
        for (c, &vc) in v.iter().enumerate() {
            acc += m[r * n + c] * vc;
        }
        *slot = acc;
    }
    Coweight(out)
}
