//! Projective points, brackets, cross-ratios, conics and homographies over Q.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{primitive, primitive_int, QMatrix, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("five points do not determine a unique conic")]
    NotUnique,
    #[error("conic is degenerate")]
    DegenerateConic,
    #[error("point is not on the conic")]
    PointNotOnConic,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("homography matrix is singular")]
    Singular,
}

/// A point of P^(N-1), stored as its canonical integer representative:
/// coprime coordinates, first nonzero coordinate positive.
/// Equality is therefore equality up to scale.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint<const N: usize> {
    coords: [BigInt; N],
}

pub type PointP2 = ProjPoint<3>;
pub type PointP1 = ProjPoint<2>;

impl<const N: usize> ProjPoint<N> {
    pub fn new(coords: [Rat; N]) -> Result<Self, ProjError> {
        Self::from_slice(&coords)
    }

    pub fn from_slice(coords: &[Rat]) -> Result<Self, ProjError> {
        assert_eq!(coords.len(), N, "wrong coordinate count");
        if coords.iter().all(Zero::is_zero) {
            return Err(ProjError::ZeroVector);
        }
        let p = primitive(coords);
        Ok(ProjPoint {
            coords: std::array::from_fn(|i| p[i].clone()),
        })
    }

    pub fn from_ints(coords: &[BigInt]) -> Result<Self, ProjError> {
        assert_eq!(coords.len(), N, "wrong coordinate count");
        if coords.iter().all(Zero::is_zero) {
            return Err(ProjError::ZeroVector);
        }
        let p = primitive_int(coords);
        Ok(ProjPoint {
            coords: std::array::from_fn(|i| p[i].clone()),
        })
    }

    /// Convenience constructor for literals. Panics on the zero vector.
    pub fn of(coords: [i64; N]) -> Self {
        let v: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_ints(&v).expect("nonzero literal")
    }

    pub fn coords(&self) -> &[BigInt; N] {
        &self.coords
    }

    pub fn to_rats(&self) -> [Rat; N] {
        std::array::from_fn(|i| Rat::from_integer(self.coords[i].clone()))
    }
}

impl<const N: usize> fmt::Debug for ProjPoint<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<const N: usize> fmt::Display for ProjPoint<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub(crate) fn det3(a: &[BigInt; 3], b: &[BigInt; 3], c: &[BigInt; 3]) -> BigInt {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Cross product of integer 3-vectors; the line through two points or the meet of two lines.
pub fn cross(a: &[BigInt; 3], b: &[BigInt; 3]) -> [BigInt; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Determinant of the three canonical representatives stacked as rows.
pub fn bracket3(a: &PointP2, b: &PointP2, c: &PointP2) -> BigInt {
    det3(&a.coords, &b.coords, &c.coords)
}

/// Determinant of two canonical P^1 representatives.
pub fn bracket2(a: &PointP1, b: &PointP1) -> BigInt {
    &a.coords[0] * &b.coords[1] - &a.coords[1] * &b.coords[0]
}

/// A rational, infinity, or the indeterminate form 0/0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(Rat),
    Infinity,
    Indeterminate,
}

impl ExtRat {
    pub fn ratio(num: BigInt, den: BigInt) -> Self {
        match (num.is_zero(), den.is_zero()) {
            (true, true) => ExtRat::Indeterminate,
            (false, true) => ExtRat::Infinity,
            _ => ExtRat::Finite(Rat::new(num, den)),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => write!(f, "{}", crate::linalg::format_rat(r)),
            ExtRat::Infinity => write!(f, "inf"),
            ExtRat::Indeterminate => write!(f, "0/0"),
        }
    }
}

/// `([13][24]) / ([14][23])`.
pub fn cross_ratio_p1(p: [&PointP1; 4]) -> ExtRat {
    let [p1, p2, p3, p4] = p;
    ExtRat::ratio(
        bracket2(p1, p3) * bracket2(p2, p4),
        bracket2(p1, p4) * bracket2(p2, p3),
    )
}

/// Cross-ratio of the four lines through `p[4]`: `([135][245]) / ([145][235])`.
pub fn planar_cross_ratio(p: [&PointP2; 5]) -> ExtRat {
    let [p1, p2, p3, p4, p5] = p;
    ExtRat::ratio(
        bracket3(p1, p3, p5) * bracket3(p2, p4, p5),
        bracket3(p1, p4, p5) * bracket3(p2, p3, p5),
    )
}

/// True iff the six points lie on a common conic.
pub fn six_on_conic(p: [&PointP2; 6]) -> bool {
    let b = |i: usize, j: usize, k: usize| bracket3(p[i - 1], p[j - 1], p[k - 1]);
    b(1, 3, 5) * b(2, 4, 5) * b(1, 4, 6) * b(2, 3, 6)
        == b(1, 3, 6) * b(2, 4, 6) * b(1, 4, 5) * b(2, 3, 5)
}

/// True iff all points lie on one line (every triple bracket vanishes).
pub fn collinear(points: &[&PointP2]) -> bool {
    coordinate_matrix(points).rank() <= 2
}

fn coordinate_matrix(points: &[&PointP2]) -> QMatrix {
    QMatrix::from_rows(points.iter().map(|p| p.to_rats().to_vec()).collect())
}

/// No three collinear and, for six points, not all on a conic.
pub fn general_position_p2(points: &[&PointP2]) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if bracket3(points[i], points[j], points[k]).is_zero() {
                    return false;
                }
            }
        }
    }
    !(n == 6
        && six_on_conic([
            points[0], points[1], points[2], points[3], points[4], points[5],
        ]))
}

/// A line containing all the points, as an integer covector. Errors if they span P^2.
pub fn line_through(points: &[&PointP2]) -> Result<[BigInt; 3], ProjError> {
    let ns = coordinate_matrix(points).null_space();
    match ns.first() {
        Some(l) if ns.len() < 3 => Ok([l[0].clone(), l[1].clone(), l[2].clone()]),
        Some(_) => Err(ProjError::DegenerateInput("no points given")),
        None => Err(ProjError::NotCollinear),
    }
}

/// Coordinates of collinear points on their line as points of P^1.
///
/// The coordinate with the last nonzero entry of the line covector is dropped. When the line
/// is a coordinate line this is exactly the coordinate that vanishes on every point, so data
/// given on `z = 0` keeps its usual P^1 coordinates. Any such choice changes all 2x2
/// brackets by one common nonzero factor.
pub fn reduce_to_line(points: &[&PointP2]) -> Result<Vec<PointP1>, ProjError> {
    let l = line_through(points)?;
    let drop = (0..3)
        .rev()
        .find(|&i| !l[i].is_zero())
        .expect("nonzero line");
    points
        .iter()
        .map(|p| {
            let kept: Vec<BigInt> = (0..3)
                .filter(|&i| i != drop)
                .map(|i| p.coords[i].clone())
                .collect();
            PointP1::from_ints(&kept)
        })
        .collect()
}

/// A plane conic `p^T S p = 0`, with `S` symmetric and canonical up to scale.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Conic {
    sym: QMatrix,
}

fn conic_monomials(p: &PointP2) -> Vec<Rat> {
    let [a, b, c] = p.to_rats();
    vec![&a * &a, &a * &b, &b * &b, &a * &c, &b * &c, &c * &c]
}

impl Conic {
    /// Builds a conic from a symmetric matrix. Panics if `m` is not symmetric 3x3 or is zero.
    pub fn from_symmetric(m: &QMatrix) -> Self {
        assert!(
            m.rows() == 3 && m.cols() == 3 && *m == m.transpose(),
            "symmetric 3x3 expected"
        );
        let entries: Vec<Rat> = [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2)]
            .iter()
            .map(|&(r, c)| m.get(r, c).clone())
            .collect();
        let p = primitive(&entries);
        assert!(p.iter().any(|x| !x.is_zero()), "zero conic");
        let v = |i: usize| Rat::from_integer(p[i].clone());
        let sym = QMatrix::from_rows(vec![
            vec![v(0), v(1), v(3)],
            vec![v(1), v(2), v(4)],
            vec![v(3), v(4), v(5)],
        ]);
        Conic { sym }
    }

    pub fn sym(&self) -> &QMatrix {
        &self.sym
    }

    pub fn eval(&self, p: &[Rat; 3]) -> Rat {
        let sp = self.sym.mul_vec(p);
        p.iter().zip(&sp).map(|(a, b)| a * b).sum()
    }

    pub fn contains(&self, p: &PointP2) -> bool {
        self.eval(&p.to_rats()).is_zero()
    }

    pub fn is_degenerate(&self) -> bool {
        self.sym.det().expect("square").is_zero()
    }

    /// `p^T S q`.
    pub fn bilinear(&self, p: &[Rat; 3], q: &[Rat; 3]) -> Rat {
        let sq = self.sym.mul_vec(q);
        p.iter().zip(&sq).map(|(a, b)| a * b).sum()
    }

    /// Second intersection of the conic with the line through `q` (on the conic) in direction `d`:
    /// `(d^T S d) q - 2 (q^T S d) d`. Returns `None` when that vector vanishes.
    pub fn second_point(&self, q: &PointP2, d: &[Rat; 3]) -> Option<PointP2> {
        let qr = q.to_rats();
        let a = self.bilinear(d, d);
        let b = self.bilinear(&qr, d) * Rat::from_integer(BigInt::from(2));
        let r: Vec<Rat> = (0..3).map(|i| &a * &qr[i] - &b * &d[i]).collect();
        PointP2::from_slice(&r).ok()
    }

    /// Image under a homography: `H^-T S H^-1`.
    pub fn transform(&self, h: &Homography) -> Conic {
        let inv = h.inverse().matrix().clone();
        Conic::from_symmetric(&inv.transpose().mul(&self.sym).mul(&inv))
    }

    /// Rational points of the conic other than `avoid`, obtained by projecting from `seed`
    /// along integer directions of increasing height. Deterministic.
    pub fn rational_points(
        &self,
        seed: &PointP2,
        avoid: &[&PointP2],
        count: usize,
    ) -> Vec<PointP2> {
        let mut out: Vec<PointP2> = Vec::new();
        for d in small_directions(6) {
            if out.len() == count {
                break;
            }
            if let Some(r) = self.second_point(seed, &d) {
                if r != *seed && !avoid.contains(&&r) && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out
    }
}

/// Integer 3-vectors with entries in `[-h, h]`, ordered by max-norm then lexicographically.
pub(crate) fn small_directions(h: i64) -> impl Iterator<Item = [Rat; 3]> {
    (1..=h).flat_map(move |n| {
        let range = move || -n..=n;
        range().flat_map(move |a| {
            range().flat_map(move |b| {
                range()
                    .filter(move |c| a.abs().max(b.abs()).max(c.abs()) == n)
                    .map(move |c| [a, b, c].map(|v| Rat::from_integer(BigInt::from(v))))
            })
        })
    })
}

/// The conic through five points, from the kernel of the 5x6 monomial matrix.
pub fn conic_through_5(p: [&PointP2; 5]) -> Result<Conic, ProjError> {
    let m = QMatrix::from_rows(p.iter().map(|q| conic_monomials(q)).collect());
    let ns = m.null_space();
    if ns.len() != 1 {
        return Err(ProjError::NotUnique);
    }
    let k: Vec<Rat> = ns[0].iter().cloned().map(Rat::from_integer).collect();
    let two = Rat::from_integer(BigInt::from(2));
    let sym = QMatrix::from_rows(vec![
        vec![k[0].clone() * &two, k[1].clone(), k[3].clone()],
        vec![k[1].clone(), k[2].clone() * &two, k[4].clone()],
        vec![k[3].clone(), k[4].clone(), k[5].clone() * &two],
    ]);
    Ok(Conic::from_symmetric(&sym))
}

/// Cross-ratio of four points on a nondegenerate conic, seen from the first rational point
/// of the conic that differs from them.
pub fn conic_cross_ratio(w: &Conic, p: [&PointP2; 4]) -> Result<ExtRat, ProjError> {
    if w.is_degenerate() {
        return Err(ProjError::DegenerateConic);
    }
    if p.iter().any(|q| !w.contains(q)) {
        return Err(ProjError::PointNotOnConic);
    }
    let aux = w
        .rational_points(p[0], &p, 1)
        .pop()
        .ok_or(ProjError::DegenerateInput("no auxiliary conic point found"))?;
    conic_cross_ratio_from(w, p, &aux)
}

/// Conic cross-ratio seen from a given auxiliary point of the conic.
pub fn conic_cross_ratio_from(
    w: &Conic,
    p: [&PointP2; 4],
    aux: &PointP2,
) -> Result<ExtRat, ProjError> {
    if !w.contains(aux) || p.iter().any(|q| !w.contains(q)) {
        return Err(ProjError::PointNotOnConic);
    }
    Ok(planar_cross_ratio([p[0], p[1], p[2], p[3], aux]))
}

/// An invertible 3x3 matrix up to scale, stored as coprime integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Homography {
    h: QMatrix,
}

impl Homography {
    pub fn new(m: &QMatrix) -> Result<Self, ProjError> {
        assert!(m.rows() == 3 && m.cols() == 3, "3x3 expected");
        if m.det().expect("square").is_zero() {
            return Err(ProjError::Singular);
        }
        let p = primitive(m.entries());
        let h = QMatrix::new(3, 3, p.into_iter().map(Rat::from_integer).collect()).expect("3x3");
        Ok(Homography { h })
    }

    pub fn identity() -> Self {
        Homography {
            h: QMatrix::identity(3),
        }
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.h
    }

    pub fn apply(&self, p: &PointP2) -> PointP2 {
        PointP2::from_slice(&self.h.mul_vec(&p.to_rats())).expect("invertible map")
    }

    /// Applies the transpose inverse, mapping line covectors along with points.
    pub fn apply_line(&self, l: &[BigInt; 3]) -> [BigInt; 3] {
        let lr: Vec<Rat> = l.iter().cloned().map(Rat::from_integer).collect();
        let v = self.inverse().h.transpose().mul_vec(&lr);
        let p = primitive(&v);
        [p[0].clone(), p[1].clone(), p[2].clone()]
    }

    /// Inverse via the adjugate, so it stays integral.
    pub fn inverse(&self) -> Homography {
        let m = &self.h;
        let c = |r: usize, k: usize| {
            let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
            let cols: Vec<usize> = (0..3).filter(|&j| j != k).collect();
            let d = m.select(&rows, &cols).det().expect("square");
            if (r + k).is_multiple_of(2) {
                d
            } else {
                -d
            }
        };
        let adj = QMatrix::from_rows((0..3).map(|i| (0..3).map(|j| c(j, i)).collect()).collect());
        Homography::new(&adj).expect("adjugate of invertible matrix")
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Homography) -> Homography {
        Homography::new(&self.h.mul(&first.h)).expect("product of invertible maps")
    }
}

/// The standard projective frame e1, e2, e3, e1+e2+e3.
pub fn frame() -> [PointP2; 4] {
    [
        PointP2::of([1, 0, 0]),
        PointP2::of([0, 1, 0]),
        PointP2::of([0, 0, 1]),
        PointP2::of([1, 1, 1]),
    ]
}

/// The unique homography with `H src_i ~ dst_i`, from the kernel of the stacked
/// cross-product equations `dst_i x (H src_i) = 0`.
pub fn homography_from_4(src: [&PointP2; 4], dst: [&PointP2; 4]) -> Result<Homography, ProjError> {
    if !general_position_p2(&src) || !general_position_p2(&dst) {
        return Err(ProjError::DegenerateInput("three of four points collinear"));
    }
    let mut rows = Vec::with_capacity(12);
    for (s, d) in src.iter().zip(dst.iter()) {
        let s = s.to_rats();
        let d = d.to_rats();
        // Coefficient of h[3r+c] in (H s)_r is s_c.
        let wrow = |r: usize, scale: &Rat| {
            let mut row = vec![Rat::zero(); 9];
            for c in 0..3 {
                row[3 * r + c] = scale * &s[c];
            }
            row
        };
        // Components of d x (H s): d_i w_j - d_j w_i.
        for (i, j) in [(1, 2), (2, 0), (0, 1)] {
            let a = wrow(j, &d[i]);
            let b = wrow(i, &d[j]);
            rows.push(a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<Rat>>());
        }
    }
    let ns = QMatrix::from_rows(rows).null_space();
    if ns.len() != 1 {
        return Err(ProjError::DegenerateInput("homography not unique"));
    }
    let h =
        QMatrix::new(3, 3, ns[0].iter().cloned().map(Rat::from_integer).collect()).expect("3x3");
    Homography::new(&h)
}

/// True if every point of `src` maps to the matching point of `dst` under `h`.
pub fn maps_all(h: &Homography, src: &[&PointP2], dst: &[&PointP2]) -> bool {
    src.iter().zip(dst).all(|(s, d)| h.apply(s) == **d)
}

impl PointP2 {
    pub fn is_finite(&self) -> bool {
        !self.coords[2].is_zero()
    }
}

impl PointP1 {
    /// Embeds a P^1 point on the line `z = 0` of P^2.
    pub fn embed(&self) -> PointP2 {
        let c = &self.coords;
        PointP2::from_ints(&[c[0].clone(), c[1].clone(), BigInt::zero()]).expect("nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use proptest::prelude::*;

    fn p2(a: i64, b: i64, c: i64) -> PointP2 {
        PointP2::of([a, b, c])
    }

    fn p1(a: i64, b: i64) -> PointP1 {
        PointP1::of([a, b])
    }

    #[test]
    fn canonical_representative() {
        let p = PointP2::new([rat(-1, 2), int(0), rat(3, 4)]).unwrap();
        assert_eq!(
            p.coords(),
            &[BigInt::from(2), BigInt::from(0), BigInt::from(-3)]
        );
        assert_eq!(p, p2(-4, 0, 6));
        assert!(matches!(
            PointP2::new([int(0), int(0), int(0)]),
            Err(ProjError::ZeroVector)
        ));
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(
            bracket3(&p2(1, 0, 0), &p2(0, 1, 0), &p2(0, 0, 1)),
            BigInt::from(1)
        );
        assert_eq!(
            bracket3(&p2(0, 0, 1), &p2(1, 0, 1), &p2(0, 1, 1)),
            BigInt::from(1)
        );
        assert!(bracket3(&p2(1, 2, 3), &p2(4, 5, 6), &p2(1, 2, 3)).is_zero());
        assert_eq!(bracket2(&p1(8, 1), &p1(2, 1)), BigInt::from(6));
        assert_eq!(bracket2(&p1(2, 1), &p1(8, 1)), BigInt::from(-6));
        assert!(bracket2(&p1(3, 5), &p1(3, 5)).is_zero());
    }

    #[test]
    fn cross_ratio_examples() {
        let y = [p1(8, 1), p1(4, 1), p1(2, 1), p1(5, 1)];
        assert_eq!(
            cross_ratio_p1([&y[0], &y[1], &y[2], &y[3]]),
            ExtRat::Finite(int(-1))
        );
        let x = [p1(1, 1), p1(1, 1), p1(1, 1), p1(3, 1)];
        assert_eq!(
            cross_ratio_p1([&x[0], &x[1], &x[2], &x[3]]),
            ExtRat::Indeterminate
        );
        let z = [p1(0, 1), p1(1, 1), p1(0, 1), p1(2, 1)];
        assert_eq!(
            cross_ratio_p1([&z[0], &z[1], &z[2], &z[3]]),
            ExtRat::Finite(int(0))
        );
    }

    #[test]
    fn planar_cross_ratio_matches_transversal() {
        let f = frame();
        let p5 = p2(2, 3, 1);
        let v = planar_cross_ratio([&f[0], &f[1], &f[2], &f[3], &p5]);
        // Meet the four lines through p5 with the transversal x - 2y + 5z = 0.
        let t = [BigInt::from(1), BigInt::from(-2), BigInt::from(5)];
        let meets: Vec<PointP2> = f
            .iter()
            .map(|q| {
                let l = cross(q.coords(), p5.coords());
                PointP2::from_ints(&cross(&l, &t)).unwrap()
            })
            .collect();
        let refs: Vec<&PointP2> = meets.iter().collect();
        let on_line = reduce_to_line(&refs).unwrap();
        let w = cross_ratio_p1([&on_line[0], &on_line[1], &on_line[2], &on_line[3]]);
        assert_eq!(v, w);
        let collinear5 = planar_cross_ratio([&f[0], &f[1], &f[2], &f[3], &p2(1, 0, 1)]);
        assert_eq!(collinear5, ExtRat::Finite(int(0)));
    }

    #[test]
    fn conic_examples() {
        let f = frame();
        let q = p2(2, 3, 1);
        let c = conic_through_5([&f[0], &f[1], &f[2], &f[3], &q]).unwrap();
        for p in f.iter().chain([&q]) {
            assert!(c.contains(p));
        }
        assert!(!c.is_degenerate());
        let d = conic_through_5([&f[0], &f[1], &f[2], &f[3], &p2(1, 2, 0)]).unwrap();
        assert!(d.is_degenerate());
        assert!(matches!(
            conic_through_5([&f[0], &f[1], &f[2], &f[3], &f[3]]),
            Err(ProjError::NotUnique)
        ));
    }

    #[test]
    fn six_on_conic_examples() {
        let par: Vec<PointP2> = (0..6).map(|t| p2(t * t, t, 1)).collect();
        assert!(six_on_conic([
            &par[0], &par[1], &par[2], &par[3], &par[4], &par[5]
        ]));
        let f = frame();
        let (a, b) = (p2(2, 3, 1), p2(3, 7, 1));
        assert!(!six_on_conic([&f[0], &f[1], &f[2], &f[3], &a, &b]));
        assert!(general_position_p2(&[&f[0], &f[1], &f[2], &f[3], &a, &b]));
        assert!(six_on_conic([&f[0], &f[1], &f[2], &f[3], &a, &f[1]]));
        let pr: Vec<&PointP2> = par.iter().collect();
        assert!(!general_position_p2(&pr));
    }

    #[test]
    fn conic_cross_ratio_on_parabola() {
        let pts: Vec<PointP2> = (0..4).map(|t| p2(t * t, t, 1)).collect();
        let extra = p2(16, 4, 1);
        let w = conic_through_5([&pts[0], &pts[1], &pts[2], &pts[3], &extra]).unwrap();
        let v = conic_cross_ratio(&w, [&pts[0], &pts[1], &pts[2], &pts[3]]).unwrap();
        let line: Vec<PointP1> = (0..4).map(|t| p1(t, 1)).collect();
        assert_eq!(v, cross_ratio_p1([&line[0], &line[1], &line[2], &line[3]]));
        let aux = w.rational_points(&pts[0], &[&pts[0], &pts[1], &pts[2], &pts[3]], 10);
        assert_eq!(aux.len(), 10);
        for a in &aux {
            assert_eq!(
                conic_cross_ratio_from(&w, [&pts[0], &pts[1], &pts[2], &pts[3]], a).unwrap(),
                v
            );
        }
        let z = conic_cross_ratio(&w, [&pts[0], &pts[1], &pts[0], &pts[3]]).unwrap();
        assert_eq!(z, ExtRat::Finite(int(0)));
    }

    #[test]
    fn homography_examples() {
        let f = frame();
        let fr: [&PointP2; 4] = [&f[0], &f[1], &f[2], &f[3]];
        assert_eq!(homography_from_4(fr, fr).unwrap(), Homography::identity());
        let perm: [&PointP2; 4] = [&f[1], &f[2], &f[0], &f[3]];
        let h = homography_from_4(fr, perm).unwrap();
        assert!(maps_all(&h, &fr, &perm));
        let back = h.inverse().compose(&h);
        assert_eq!(back, Homography::identity());
        let bad = [&f[0], &f[1], &p2(1, 1, 0), &f[3]];
        assert!(homography_from_4(bad, fr).is_err());
    }

    #[test]
    fn reduce_to_coordinate_line_keeps_coordinates() {
        let ys = [p2(0, 0, 1), p2(1, 0, 1), p2(3, 0, 1), p2(-4, 0, 1)];
        let r: Vec<&PointP2> = ys.iter().collect();
        let red = reduce_to_line(&r).unwrap();
        assert_eq!(red, vec![p1(0, 1), p1(1, 1), p1(3, 1), p1(-4, 1)]);
        let zs = [p2(2942, 918, 0), p2(1, 1, 0)];
        let red = reduce_to_line(&[&zs[0], &zs[1]]).unwrap();
        assert_eq!(red, vec![p1(2942, 918), p1(1, 1)]);
        assert!(matches!(
            reduce_to_line(&[&ys[0], &ys[1], &p2(0, 1, 1)]),
            Err(ProjError::NotCollinear)
        ));
    }

    fn point() -> impl Strategy<Value = PointP2> {
        prop::array::uniform3(-9i64..=9)
            .prop_filter("nonzero", |c| c.iter().any(|&v| v != 0))
            .prop_map(PointP2::of)
    }

    fn point1() -> impl Strategy<Value = PointP1> {
        prop::array::uniform2(-9i64..=9)
            .prop_filter("nonzero", |c| c.iter().any(|&v| v != 0))
            .prop_map(PointP1::of)
    }

    fn homography() -> impl Strategy<Value = Homography> {
        prop::array::uniform9(-5i64..=5).prop_filter_map("invertible", |v| {
            Homography::new(&QMatrix::new(3, 3, v.iter().map(|&x| int(x)).collect()).unwrap()).ok()
        })
    }

    fn h1(m: [i64; 4]) -> impl Fn(&PointP1) -> PointP1 {
        move |p| {
            let c = p.coords();
            PointP1::from_ints(&[
                &c[0] * BigInt::from(m[0]) + &c[1] * BigInt::from(m[1]),
                &c[0] * BigInt::from(m[2]) + &c[1] * BigInt::from(m[3]),
            ])
            .unwrap()
        }
    }

    proptest! {
        #[test]
        fn bracket_is_alternating(a in point(), b in point(), c in point()) {
            let v = bracket3(&a, &b, &c);
            prop_assert_eq!(bracket3(&b, &a, &c), -v.clone());
            prop_assert_eq!(bracket3(&a, &c, &b), -v.clone());
            prop_assert_eq!(bracket3(&c, &b, &a), -v.clone());
            prop_assert_eq!(bracket3(&b, &c, &a), v);
        }

        #[test]
        fn brackets_on_a_line_scale_uniformly(
            ts in prop::collection::vec((-9i64..=9, -9i64..=9), 4),
            u in point(),
        ) {
            // Points on z = 0, u off it: [iju] = u3 [ij].
            prop_assume!(!u.coords()[2].is_zero());
            prop_assume!(ts.iter().all(|&(a, b)| a != 0 || b != 0));
            let line: Vec<PointP1> = ts.iter().map(|&(a, b)| PointP1::of([a, b])).collect();
            let pts: Vec<PointP2> = line.iter().map(PointP1::embed).collect();
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert_eq!(bracket3(&pts[i], &pts[j], &u), bracket2(&line[i], &line[j]) * &u.coords()[2]);
                }
            }
        }

        #[test]
        fn cross_ratio_invariant_under_p1_homography(
            p in prop::array::uniform4(point1()),
            m in prop::array::uniform4(-5i64..=5),
        ) {
            prop_assume!(m[0] * m[3] - m[1] * m[2] != 0);
            let f = h1(m);
            let q: Vec<PointP1> = p.iter().map(&f).collect();
            prop_assert_eq!(cross_ratio_p1([&p[0], &p[1], &p[2], &p[3]]), cross_ratio_p1([&q[0], &q[1], &q[2], &q[3]]));
        }

        #[test]
        fn cross_ratio_permutation_equivariance(
            p in prop::array::uniform4(point1()),
            m in prop::array::uniform4(-5i64..=5),
            perm in Just([0usize, 1, 2, 3]).prop_shuffle(),
        ) {
            prop_assume!(m[0] * m[3] - m[1] * m[2] != 0);
            let distinct = (0..4).all(|i| (0..i).all(|j| p[i] != p[j]));
            prop_assume!(distinct);
            let q: Vec<PointP1> = p.iter().map(h1(m)).collect();
            let cp = cross_ratio_p1([&p[perm[0]], &p[perm[1]], &p[perm[2]], &p[perm[3]]]);
            let cq = cross_ratio_p1([&q[perm[0]], &q[perm[1]], &q[perm[2]], &q[perm[3]]]);
            prop_assert_eq!(cp, cq);
        }

        #[test]
        fn planar_cross_ratio_invariant(p in prop::array::uniform5(point()), h in homography()) {
            let q: Vec<PointP2> = p.iter().map(|x| h.apply(x)).collect();
            prop_assert_eq!(
                planar_cross_ratio([&p[0], &p[1], &p[2], &p[3], &p[4]]),
                planar_cross_ratio([&q[0], &q[1], &q[2], &q[3], &q[4]])
            );
        }

        #[test]
        fn six_on_conic_agrees_with_fitted_conic(p in prop::array::uniform6(point())) {
            if let Ok(c) = conic_through_5([&p[0], &p[1], &p[2], &p[3], &p[4]]) {
                prop_assert_eq!(six_on_conic([&p[0], &p[1], &p[2], &p[3], &p[4], &p[5]]), c.contains(&p[5]));
            }
        }

        #[test]
        fn homography_fit_roundtrip(h in homography(), src in prop::array::uniform4(point())) {
            prop_assume!(general_position_p2(&[&src[0], &src[1], &src[2], &src[3]]));
            let dst: Vec<PointP2> = src.iter().map(|s| h.apply(s)).collect();
            let fit = homography_from_4([&src[0], &src[1], &src[2], &src[3]], [&dst[0], &dst[1], &dst[2], &dst[3]]).unwrap();
            prop_assert_eq!(fit, h);
        }

        #[test]
        fn conic_image_under_homography(p in prop::array::uniform5(point()), h in homography()) {
            if let Ok(c) = conic_through_5([&p[0], &p[1], &p[2], &p[3], &p[4]]) {
                let img = c.transform(&h);
                for q in &p {
                    prop_assert!(img.contains(&h.apply(q)));
                }
            }
        }
    }
}
