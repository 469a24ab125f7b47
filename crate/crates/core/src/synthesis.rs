//! Constructions of rank-deficient configurations.
//!
//! Everything is exact and every output is checked against the rank oracle or the defining
//! incidences before it is returned.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::facesplit::{z_rank, Config, PointPair};
use crate::invariants::{covariant_cubics, joubert, line_case_form, six};
use crate::linalg::{QMatrix, Rat};
use crate::projective::{
    collinear, conic_through_5, frame, general_position_p2, homography_from_4, reduce_to_line,
    Conic, ExtRat, Homography, PointP1, PointP2,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("wrong number of pairs: got {got}, need {want}")]
    WrongSize { got: usize, want: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("the pairs are related by a homography")]
    HomographyRelated,
    #[error("the conics have no common further point")]
    NoCommonPoint,
    #[error("center is not a further point of the conic through the x points")]
    CenterNotOnConic,
    #[error("the configuration is not rank deficient")]
    NotDeficient,
    #[error("no rational center exists")]
    NoRationalCenter,
    #[error("the y points are not distinct and collinear")]
    NotCollinear,
    #[error("degenerate construction: {0}")]
    Degenerate(&'static str),
}

fn need(c: &Config, want: usize) -> Result<(), SynthError> {
    if c.k() == want {
        Ok(())
    } else {
        Err(SynthError::WrongSize { got: c.k(), want })
    }
}

fn c(v: &PointP2, i: usize) -> &BigInt {
    &v.coords()[i]
}

/// The sixth pair for five pairs whose first four points are the standard frame on both
/// sides, with fifth pair `(a, b)`. Cleared of denominators.
fn sixth_in_frame(a: &PointP2, b: &PointP2) -> Result<(PointP2, PointP2), SynthError> {
    let d1 = c(b, 2) * c(a, 1) - c(a, 2) * c(b, 1);
    let d2 = c(b, 2) * c(a, 0) - c(a, 2) * c(b, 0);
    let d3 = c(b, 0) * c(a, 1) - c(a, 0) * c(b, 1);
    match (d1.is_zero(), d2.is_zero(), d3.is_zero()) {
        (true, true, true) => return Err(SynthError::HomographyRelated),
        (false, false, false) => {}
        _ => {
            return Err(SynthError::DegenerateInput(
                "a denominator of the sixth-pair formula vanishes",
            ))
        }
    }
    let scaled = |n: [BigInt; 3]| {
        let [n1, n2, n3] = n;
        PointP2::from_ints(&[n1 * &d2 * &d3, n2 * &d1 * &d3, n3 * &d1 * &d2]).map_err(|_| {
            SynthError::DegenerateInput("the sixth-pair formula gives the zero vector")
        })
    };
    let x6 = scaled([c(b, 2) - c(b, 1), c(b, 2) - c(b, 0), c(b, 0) - c(b, 1)])?;
    let y6 = scaled([c(a, 2) - c(a, 1), c(a, 2) - c(a, 0), c(a, 0) - c(a, 1)])?;
    Ok((x6, y6))
}

fn frame_homography(p: [&PointP2; 4]) -> Result<Homography, SynthError> {
    let f = frame();
    homography_from_4([&f[0], &f[1], &f[2], &f[3]], p)
        .map_err(|_| SynthError::DegenerateInput("first four points are not a projective frame"))
}

fn pick4<'a>(v: &[&'a PointP2], idx: &[usize]) -> [&'a PointP2; 4] {
    [v[idx[0]], v[idx[1]], v[idx[2]], v[idx[3]]]
}

fn first_four<'a>(v: &[&'a PointP2]) -> [&'a PointP2; 4] {
    [v[0], v[1], v[2], v[3]]
}

/// The unique sixth pair making `Z_6` rank deficient, for five pairs in general position.
///
/// Both sides are moved so their first four points become the standard frame, the closed
/// formula is applied there and the result is pulled back.
///
/// ```
/// use rankdrop::facesplit::Config;
/// use rankdrop::projective::PointP2;
/// use rankdrop::synthesis::sixth_pair;
///
/// let c = Config::of(
///     &[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [3, 5, 1]],
///     &[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [8, 2, 1]],
/// );
/// let p = sixth_pair(&c).unwrap();
/// // (-1/3, 7/5, 3/17) and (-4/3, 2/5, -1/17), cleared of denominators.
/// assert_eq!(p.x, PointP2::of([-85, 357, 45]));
/// assert_eq!(p.y, PointP2::of([-340, 102, -15]));
/// ```
pub fn sixth_pair(c: &Config) -> Result<PointPair, SynthError> {
    need(c, 5)?;
    if z_rank(c) < 5 {
        return Err(SynthError::DegenerateInput(
            "the five pairs are already rank deficient",
        ));
    }
    let a = frame_homography(first_four(&c.xs()))?;
    let b = frame_homography(first_four(&c.ys()))?;
    let (x6, y6) = sixth_in_frame(&a.inverse().apply(c.x(4)), &b.inverse().apply(c.y(4)))?;
    let pair = PointPair::new(a.apply(&x6), b.apply(&y6));
    let full = c.with_pair(pair.clone()).expect("six pairs");
    if z_rank(&full) != 5 {
        return Err(SynthError::DegenerateInput(
            "the pairs are not in general position",
        ));
    }
    Ok(pair)
}

/// Six y points, unique up to a homography of the y plane, that make `Z_6` rank deficient
/// together with the given x points. The first four y points are the standard frame.
pub fn completion_y(xs: &[PointP2]) -> Result<Vec<PointP2>, SynthError> {
    if xs.len() != 6 {
        return Err(SynthError::WrongSize {
            got: xs.len(),
            want: 6,
        });
    }
    let refs: Vec<&PointP2> = xs.iter().collect();
    if !general_position_p2(&refs) {
        return Err(SynthError::DegenerateInput(
            "x points are not in general position",
        ));
    }
    let a = frame_homography(first_four(&refs))?.inverse();
    let x5 = a.apply(&xs[4]);
    let x6 = a.apply(&xs[5]);
    // For a fixed fifth x point the x-part of the closed formula is an involution, so the
    // fifth y point is that same formula applied to the sixth x point.
    let (y5, _) = sixth_in_frame(&x5, &x6)?;
    let (_, y6) = sixth_in_frame(&x5, &y5)?;
    let mut ys: Vec<PointP2> = frame().to_vec();
    ys.push(y5);
    ys.push(y6);
    let cfg = Config::from_sides(xs, &ys).expect("six pairs");
    if z_rank(&cfg) != 5 {
        return Err(SynthError::DegenerateInput(
            "x points admit no rank-deficient completion",
        ));
    }
    Ok(ys)
}

fn rats(p: &PointP2) -> [Rat; 3] {
    p.to_rats()
}

fn lin(terms: &[(&Rat, &[Rat; 3])]) -> [Rat; 3] {
    std::array::from_fn(|i| terms.iter().map(|(s, v)| *s * &v[i]).sum())
}

/// The conics `H_i(C)` for `i = 1..5`, where `C` passes through the x points and `H_i` maps
/// the four x points other than `x_i` to their partners.
pub fn sturm_conics(c: &Config) -> Result<Vec<Conic>, SynthError> {
    need(c, 5)?;
    let xs = c.xs();
    let ys = c.ys();
    let conic = conic_through_5([xs[0], xs[1], xs[2], xs[3], xs[4]])
        .map_err(|_| SynthError::DegenerateInput("x points do not determine a conic"))?;
    (0..5)
        .map(|i| {
            let idx: Vec<usize> = (0..5).filter(|&j| j != i).collect();
            let (px, py) = (pick4(&xs, &idx), pick4(&ys, &idx));
            let h = homography_from_4(px, py).map_err(|_| {
                SynthError::DegenerateInput("four pairs do not determine a homography")
            })?;
            Ok(conic.transform(&h))
        })
        .collect()
}

/// The common point of the five Sturm conics in the y plane.
///
/// The first conic contains `y2..y5`. It is parametrized by lines through `y5` meeting the
/// chord `y3 y4`. On the second conic this gives a binary quartic whose known roots are
/// `y3`, `y4` and the tangent direction at `y5`; the remaining root is the answer.
fn sturm_y(c: &Config) -> Result<PointP2, SynthError> {
    let conics = sturm_conics(c)?;
    let (s1, s2) = (&conics[0], &conics[1]);
    let (y3, y4, y5) = (rats(c.y(2)), rats(c.y(3)), rats(c.y(4)));
    let beta = s1.bilinear(&y3, &y4);
    let p = s1.bilinear(&y5, &y3);
    let q = s1.bilinear(&y5, &y4);
    let neg = |r: &Rat| -r;
    let a = lin(&[(&neg(&p), &y3)]);
    let b = lin(&[(&beta, &y5), (&neg(&q), &y3), (&neg(&p), &y4)]);
    let cc = lin(&[(&neg(&q), &y4)]);
    let c1 = s2.bilinear(&a, &b);
    let c3 = s2.bilinear(&b, &cc);
    let s = &c3 * &p;
    let t = -(&c1 * &q);
    let r = lin(&[(&(&s * &s), &a), (&(&s * &t), &b), (&(&t * &t), &cc)]);
    let y6 = PointP2::new(r).map_err(|_| SynthError::NoCommonPoint)?;
    if conics.iter().all(|k| k.contains(&y6)) {
        Ok(y6)
    } else {
        Err(SynthError::NoCommonPoint)
    }
}

/// The sixth pair as the common point of five conics on each side. Agrees with
/// [`sixth_pair`] on general-position input.
pub fn sturm_sixth_pair(c: &Config) -> Result<PointPair, SynthError> {
    need(c, 5)?;
    let y6 = sturm_y(c)?;
    let x6 = sturm_y(&c.swap_sides())?;
    Ok(PointPair::new(x6, y6))
}

/// A rank-2 map `P^2 -> P^1` into the P^1 coordinates of the y line, with its center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionMap {
    /// 2x3, primitive integer entries with a positive leading entry.
    pub t: QMatrix,
    pub center: PointP2,
}

impl ProjectionMap {
    fn from_kernel(v: &[BigInt]) -> Result<ProjectionMap, SynthError> {
        let t =
            QMatrix::new(2, 3, v.iter().cloned().map(Rat::from_integer).collect()).expect("2x3");
        if t.rank() != 2 {
            return Err(SynthError::Degenerate("map has rank below two"));
        }
        let ns = t.null_space();
        let center = PointP2::from_ints(&ns[0]).expect("nonzero kernel");
        Ok(ProjectionMap { t, center })
    }

    /// Image of `x`, or `None` for the center.
    pub fn apply(&self, x: &PointP2) -> Option<PointP1> {
        PointP1::from_slice(&self.t.mul_vec(&x.to_rats())).ok()
    }
}

/// Incidence row for `T x ~ y`: `(T x)_1 y_2 - (T x)_2 y_1`, in the entries of T row by row.
fn incidence_row(x: &PointP2, y: &PointP1) -> Vec<Rat> {
    let xr = x.to_rats();
    let [y1, y2] = y.to_rats();
    xr.iter()
        .map(|v| v * &y2)
        .chain(xr.iter().map(|v| -(v * &y1)))
        .collect()
}

fn center_rows(center: &PointP2) -> [Vec<Rat>; 2] {
    let cr = center.to_rats();
    let z = || vec![Rat::zero(); 3];
    [
        cr.clone().into_iter().chain(z()).collect(),
        z().into_iter().chain(cr).collect(),
    ]
}

fn line_side(c: &Config) -> Result<Vec<PointP1>, SynthError> {
    let ys = c.ys();
    let distinct = (0..ys.len()).all(|i| (0..i).all(|j| ys[i] != ys[j]));
    if !distinct || !collinear(&ys) {
        return Err(SynthError::NotCollinear);
    }
    reduce_to_line(&ys).map_err(|_| SynthError::NotCollinear)
}

fn check_images(m: &ProjectionMap, xs: &[&PointP2], ys: &[PointP1]) -> Result<(), SynthError> {
    for (x, y) in xs.iter().zip(ys) {
        match m.apply(x) {
            Some(img) if img == *y => {}
            _ => return Err(SynthError::Degenerate("map does not send every x to its y")),
        }
    }
    Ok(())
}

fn k5_checks(c: &Config) -> Result<Vec<PointP1>, SynthError> {
    need(c, 5)?;
    let ys = line_side(c)?;
    if !general_position_p2(&c.xs()) {
        return Err(SynthError::DegenerateInput(
            "x points are not in general position",
        ));
    }
    if z_rank(c) == 5 {
        return Err(SynthError::NotDeficient);
    }
    Ok(ys)
}

/// For five pairs with the y points on a line, the map centered at `center` (a further
/// point of the conic through the x points) sending each `x_i` to `y_i`.
pub fn k5_projection(c: &Config, center: &PointP2) -> Result<ProjectionMap, SynthError> {
    let ys = k5_checks(c)?;
    let xs = c.xs();
    let omega = conic_through_5([xs[0], xs[1], xs[2], xs[3], xs[4]])
        .map_err(|_| SynthError::DegenerateInput("x points do not determine a conic"))?;
    if !omega.contains(center) || xs.contains(&center) {
        return Err(SynthError::CenterNotOnConic);
    }
    let mut rows: Vec<Vec<Rat>> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| incidence_row(x, y))
        .collect();
    rows.extend(center_rows(center));
    let ns = QMatrix::from_rows(rows).null_space();
    if ns.len() != 1 {
        return Err(SynthError::Degenerate("projection is not unique"));
    }
    let m = ProjectionMap::from_kernel(&ns[0])?;
    check_images(&m, &xs, &ys)?;
    Ok(m)
}

/// The two-dimensional family `T0 + lambda T1` of maps satisfying the five incidences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionPencil {
    pub t0: QMatrix,
    pub t1: QMatrix,
}

impl ProjectionPencil {
    pub fn member(&self, lambda: &Rat) -> QMatrix {
        self.t0.add(&self.t1.scale(lambda))
    }

    /// Whether `m` lies in the span of the two basis maps.
    pub fn contains(&self, m: &QMatrix) -> bool {
        let rows = vec![
            self.t0.entries().to_vec(),
            self.t1.entries().to_vec(),
            m.entries().to_vec(),
        ];
        QMatrix::from_rows(rows).rank() == 2
    }

    /// Re-expresses the family in another basis, if both maps belong to it.
    pub fn with_basis(&self, t0: QMatrix, t1: QMatrix) -> Option<ProjectionPencil> {
        let independent =
            QMatrix::from_rows(vec![t0.entries().to_vec(), t1.entries().to_vec()]).rank() == 2;
        (independent && self.contains(&t0) && self.contains(&t1))
            .then_some(ProjectionPencil { t0, t1 })
    }

    /// The parameter whose member kills `x`, or `None` if no member does.
    pub fn parameter_killing(&self, x: &PointP2) -> Option<ExtRat> {
        let xr = x.to_rats();
        let u = self.t0.mul_vec(&xr);
        let v = self.t1.mul_vec(&xr);
        if v.iter().all(Zero::is_zero) {
            return Some(if u.iter().all(Zero::is_zero) {
                ExtRat::Indeterminate
            } else {
                ExtRat::Infinity
            });
        }
        if !(&u[0] * &v[1] - &u[1] * &v[0]).is_zero() {
            return None;
        }
        let i = if v[0].is_zero() { 1 } else { 0 };
        Some(ExtRat::Finite(-&u[i] / &v[i]))
    }
}

/// The family of maps behind [`k5_projection`], before a center is chosen.
pub fn k5_projection_pencil(c: &Config) -> Result<ProjectionPencil, SynthError> {
    let ys = k5_checks(c)?;
    let rows: Vec<Vec<Rat>> = c
        .xs()
        .iter()
        .zip(&ys)
        .map(|(x, y)| incidence_row(x, y))
        .collect();
    let ns = QMatrix::from_rows(rows).null_space();
    if ns.len() != 2 {
        return Err(SynthError::Degenerate(
            "incidence system does not have a two-dimensional kernel",
        ));
    }
    let m = |v: &Vec<BigInt>| {
        QMatrix::new(2, 3, v.iter().cloned().map(Rat::from_integer).collect()).expect("2x3")
    };
    Ok(ProjectionPencil {
        t0: m(&ns[0]),
        t1: m(&ns[1]),
    })
}

/// For six pairs with the y points on a line and vanishing Coble-Joubert pairing, the map
/// sending each `x_i` to `y_i`.
///
/// The map is the kernel of the six incidence equations, whose matrix has the line-case
/// determinant. Its center `u` is then checked to satisfy `cov(u) ~ joubert(y)`.
pub fn k6_line_projection(c: &Config) -> Result<ProjectionMap, SynthError> {
    need(c, 6)?;
    let ys = line_side(c)?;
    let xs = c.xs();
    if !general_position_p2(&xs) {
        return Err(SynthError::DegenerateInput(
            "x points are not in general position",
        ));
    }
    if !line_case_form(six(&xs).map(|p| *p), six(&ys)).is_zero() {
        return Err(SynthError::NotDeficient);
    }
    let rows: Vec<Vec<Rat>> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| incidence_row(x, y))
        .collect();
    let ns = QMatrix::from_rows(rows).null_space();
    if ns.len() != 1 {
        return Err(SynthError::Degenerate("projection is not unique"));
    }
    let m = ProjectionMap::from_kernel(&ns[0])?;
    check_images(&m, &xs, &ys)?;
    let cov = covariant_cubics(six(&xs).map(|p| *p), &m.center);
    if !cov.proportional(&joubert(six(&ys))) {
        return Err(SynthError::Degenerate("center fails the invariant check"));
    }
    Ok(m)
}

/// Whether two maps agree up to a nonzero scalar.
pub fn same_map(a: &QMatrix, b: &QMatrix) -> bool {
    QMatrix::from_rows(vec![a.entries().to_vec(), b.entries().to_vec()]).rank() == 1
}
