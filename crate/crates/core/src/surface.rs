//! The cubic surface of a rank-5 configuration of six pairs.
//!
//! The null space of `Z_6` is a 4-dimensional space of 3x3 matrices `M(z)`. Its singular
//! members form a cubic surface carrying twelve exceptional lines: `M(z) x_i = 0` and
//! `y_j^T M(z) = 0`. These form a double six.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::facesplit::{build_z, unvec, Config};
use crate::linalg::{primitive, QMatrix, Rat};
use crate::projective::PointP2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("the configuration is not rank deficient")]
    NotDeficient,
    #[error("null space has dimension {0}, expected 4")]
    WrongNullity(usize),
    #[error("the linear system does not have rank two")]
    RankNotTwo,
    #[error("the point is not on the surface")]
    NotOnSurface,
}

/// `M(z) = z0 M0 + z1 M1 + z2 M2 + z3 M3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pencil {
    pub basis: [QMatrix; 4],
}

/// Pencil from the null space of `Z_k`, which must be 4-dimensional (rank 5 for five or
/// six pairs).
pub fn pencil_from_config(c: &Config) -> Result<Pencil, SurfaceError> {
    let ns = build_z(c).z.null_space_rat();
    match ns.len() {
        4 => {}
        n if c.k() == 6 && n < 4 => return Err(SurfaceError::NotDeficient),
        n => return Err(SurfaceError::WrongNullity(n)),
    }
    Ok(Pencil {
        basis: std::array::from_fn(|k| unvec(&ns[k])),
    })
}

impl Pencil {
    pub fn eval(&self, z: &[Rat; 4]) -> QMatrix {
        (1..4).fold(self.basis[0].scale(&z[0]), |acc, k| {
            acc.add(&self.basis[k].scale(&z[k]))
        })
    }

    pub fn transpose(&self) -> Pencil {
        Pencil {
            basis: std::array::from_fn(|k| self.basis[k].transpose()),
        }
    }

    /// Whether two pencils span the same space of matrices.
    pub fn same_span(&self, other: &Pencil) -> bool {
        let rows = |p: &Pencil| {
            p.basis
                .iter()
                .map(|m| m.entries().to_vec())
                .collect::<Vec<_>>()
        };
        let mut all = rows(self);
        all.extend(rows(other));
        QMatrix::from_rows(rows(self)).rank() == 4 && QMatrix::from_rows(all).rank() == 4
    }

    /// `A[r][k] = (M_k x)_r`, so that `A z = M(z) x`.
    fn right_system(&self, x: &PointP2) -> QMatrix {
        let xr = x.to_rats();
        let cols: Vec<Vec<Rat>> = self.basis.iter().map(|m| m.mul_vec(&xr)).collect();
        QMatrix::from_rows(
            (0..3)
                .map(|r| cols.iter().map(|c| c[r].clone()).collect())
                .collect(),
        )
    }
}

/// Degree-3 monomials in `z0..z3` as sorted index triples, `z0^3, z0^2 z1, ..., z3^3`.
pub fn monomials() -> Vec<[usize; 3]> {
    (0..4)
        .combinations_with_replacement(3)
        .map(|v| [v[0], v[1], v[2]])
        .collect()
}

/// A cubic form in four variables, coefficients indexed by [`monomials`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicForm {
    pub coeffs: Vec<Rat>,
}

impl CubicForm {
    pub fn eval(&self, z: &[Rat; 4]) -> Rat {
        monomials()
            .iter()
            .zip(&self.coeffs)
            .map(|(m, c)| c * &z[m[0]] * &z[m[1]] * &z[m[2]])
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn gradient(&self, z: &[Rat; 4]) -> [Rat; 4] {
        let mut g: [Rat; 4] = std::array::from_fn(|_| Rat::zero());
        for (m, c) in monomials().iter().zip(&self.coeffs) {
            for pos in 0..3 {
                let rest: Rat = (0..3).filter(|&q| q != pos).map(|q| &z[m[q]]).product();
                g[m[pos]] += c * rest;
            }
        }
        g
    }
}

/// Expansion of `det M(z)` over the permutations of the three columns.
pub fn cubic_form(p: &Pencil) -> CubicForm {
    let mons = monomials();
    let mut coeffs = vec![Rat::zero(); mons.len()];
    for perm in (0..3).permutations(3) {
        let inversions = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let sign = if inversions % 2 == 0 {
            Rat::from_integer(1.into())
        } else {
            Rat::from_integer((-1).into())
        };
        for ks in (0..3).map(|_| 0..4).multi_cartesian_product() {
            let term: Rat = (0..3).map(|r| p.basis[ks[r]].get(r, perm[r])).product();
            if term.is_zero() {
                continue;
            }
            let mut key = [ks[0], ks[1], ks[2]];
            key.sort_unstable();
            let idx = mons.iter().position(|m| *m == key).expect("monomial");
            coeffs[idx] += &sign * term;
        }
    }
    CubicForm { coeffs }
}

/// A line in P^3 by Plücker coordinates `(p01, p02, p03, p12, p13, p23)`, primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LineP3 {
    pub plucker: [BigInt; 6],
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl LineP3 {
    /// The line through two distinct points.
    pub fn through(a: &[Rat; 4], b: &[Rat; 4]) -> Option<LineP3> {
        let p: Vec<Rat> = PAIRS
            .iter()
            .map(|&(i, j)| &a[i] * &b[j] - &a[j] * &b[i])
            .collect();
        let v = primitive(&p);
        if v.iter().all(Zero::is_zero) {
            return None;
        }
        Some(LineP3 {
            plucker: std::array::from_fn(|i| v[i].clone()),
        })
    }

    fn p(&self, i: usize, j: usize) -> Rat {
        let (idx, sign) = match PAIRS.iter().position(|&q| q == (i.min(j), i.max(j))) {
            Some(idx) => (idx, if i < j { 1 } else { -1 }),
            None => return Rat::zero(),
        };
        Rat::from_integer(&self.plucker[idx] * sign)
    }

    /// `p01 p23 - p02 p13 + p03 p12`; zero for every genuine line.
    pub fn plucker_relation(&self) -> BigInt {
        let q = &self.plucker;
        &q[0] * &q[5] - &q[1] * &q[4] + &q[2] * &q[3]
    }

    /// Two points spanning the line, taken from the columns of the matrix `(p_ij)`.
    pub fn points(&self) -> [[Rat; 4]; 2] {
        let cols: Vec<[Rat; 4]> = (0..4)
            .map(|j| std::array::from_fn(|i| self.p(i, j)))
            .filter(|c: &[Rat; 4]| c.iter().any(|v| !v.is_zero()))
            .collect();
        let first = cols[0].clone();
        let second = cols
            .iter()
            .find(|c| QMatrix::from_rows(vec![first.to_vec(), c.to_vec()]).rank() == 2)
            .expect("a line has two independent columns")
            .clone();
        [first, second]
    }

    /// `s a + t b` for the spanning points `a`, `b`.
    pub fn point_at(&self, s: i64, t: i64) -> [Rat; 4] {
        let [a, b] = self.points();
        let (s, t) = (Rat::from_integer(s.into()), Rat::from_integer(t.into()));
        std::array::from_fn(|i| &s * &a[i] + &t * &b[i])
    }
}

/// `a01 b23 - a02 b13 + a03 b12 + a23 b01 - a13 b02 + a12 b03`; zero iff the lines meet.
pub fn plucker_meet(a: &LineP3, b: &LineP3) -> BigInt {
    let (a, b) = (&a.plucker, &b.plucker);
    &a[0] * &b[5] - &a[1] * &b[4] + &a[2] * &b[3] + &a[5] * &b[0] - &a[4] * &b[1] + &a[3] * &b[2]
}

fn line_from_system(a: &QMatrix) -> Result<LineP3, SurfaceError> {
    let ns = a.null_space_rat();
    if ns.len() != 2 {
        return Err(SurfaceError::RankNotTwo);
    }
    let v = |i: usize| -> [Rat; 4] { std::array::from_fn(|j| ns[i][j].clone()) };
    Ok(LineP3::through(&v(0), &v(1)).expect("independent kernel vectors"))
}

/// The line `{z : M(z) x = 0}`.
pub fn line_x(p: &Pencil, x: &PointP2) -> Result<LineP3, SurfaceError> {
    line_from_system(&p.right_system(x))
}

/// The line `{z : y^T M(z) = 0}`.
pub fn line_y(p: &Pencil, y: &PointP2) -> Result<LineP3, SurfaceError> {
    line_from_system(&p.transpose().right_system(y))
}

/// Lines within each family are pairwise skew, `lx[i]` and `ly[j]` meet exactly when
/// `i != j`. Families of equal length of any size are accepted.
pub fn verify_double_six(lx: &[LineP3], ly: &[LineP3]) -> bool {
    if lx.len() != ly.len() {
        return false;
    }
    let skew = |f: &[LineP3]| {
        f.iter()
            .tuple_combinations()
            .all(|(a, b)| !plucker_meet(a, b).is_zero())
    };
    skew(lx)
        && skew(ly)
        && lx.iter().enumerate().all(|(i, a)| {
            ly.iter()
                .enumerate()
                .all(|(j, b)| plucker_meet(a, b).is_zero() == (i != j))
        })
}

fn kernel_point(m: &QMatrix) -> Result<PointP2, SurfaceError> {
    let ns = m.null_space();
    if ns.len() != 1 {
        return Err(SurfaceError::RankNotTwo);
    }
    Ok(PointP2::from_ints(&ns[0]).expect("nonzero kernel"))
}

fn on_surface(p: &Pencil, z: &[Rat; 4]) -> Result<QMatrix, SurfaceError> {
    let m = p.eval(z);
    if !m.det().expect("square").is_zero() {
        return Err(SurfaceError::NotOnSurface);
    }
    Ok(m)
}

/// The right kernel of `M(z)`, a point of the x plane.
pub fn blow_down_right(p: &Pencil, z: &[Rat; 4]) -> Result<PointP2, SurfaceError> {
    kernel_point(&on_surface(p, z)?)
}

/// The left kernel of `M(z)`, a point of the y plane.
pub fn blow_down_left(p: &Pencil, z: &[Rat; 4]) -> Result<PointP2, SurfaceError> {
    kernel_point(&on_surface(p, z)?.transpose())
}

/// The surface point `z` with `M(z) u = 0`, for `u` away from the blown-up points.
pub fn blow_up_right(p: &Pencil, u: &PointP2) -> Result<[Rat; 4], SurfaceError> {
    let ns = p.right_system(u).null_space_rat();
    if ns.len() != 1 {
        return Err(SurfaceError::RankNotTwo);
    }
    Ok(std::array::from_fn(|i| ns[0][i].clone()))
}
