//! Point-pair configurations and the face-splitting matrix Z_k.
//!
//! Column convention: entry `(i, 3a + b)` of `Z_k` is `x_{i,a} * y_{i,b}`, so row `i` is
//! `vec(y_i x_i^T)` with column-major `vec`. Every other module reads the convention from
//! [`kron_row`], [`vec_of`] and [`unvec`].

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{QMatrix, Rat};
use crate::projective::{Homography, PointP1, PointP2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("configuration has {0} pairs, expected between {1} and {2}")]
    Size(usize, usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointPair {
    pub x: PointP2,
    pub y: PointP2,
}

impl PointPair {
    pub fn new(x: PointP2, y: PointP2) -> Self {
        PointPair { x, y }
    }
}

impl fmt::Debug for PointPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <-> {}", self.x, self.y)
    }
}

pub const MIN_PAIRS: usize = 2;
pub const MAX_PAIRS: usize = 6;

/// An ordered list of 2 to 6 point pairs in P^2 x P^2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Config {
    pairs: Vec<PointPair>,
}

impl Config {
    pub fn new(pairs: Vec<PointPair>) -> Result<Self, ConfigError> {
        if !(MIN_PAIRS..=MAX_PAIRS).contains(&pairs.len()) {
            return Err(ConfigError::Size(pairs.len(), MIN_PAIRS, MAX_PAIRS));
        }
        Ok(Config { pairs })
    }

    /// Builds a configuration from integer literals. Panics on bad input.
    pub fn of(xs: &[[i64; 3]], ys: &[[i64; 3]]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let pairs = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| PointPair::new(PointP2::of(*x), PointP2::of(*y)))
            .collect();
        Config::new(pairs).expect("valid size")
    }

    pub fn from_sides(xs: &[PointP2], ys: &[PointP2]) -> Result<Self, ConfigError> {
        assert_eq!(xs.len(), ys.len());
        Config::new(
            xs.iter()
                .zip(ys)
                .map(|(x, y)| PointPair::new(x.clone(), y.clone()))
                .collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[PointPair] {
        &self.pairs
    }

    pub fn xs(&self) -> Vec<&PointP2> {
        self.pairs.iter().map(|p| &p.x).collect()
    }

    pub fn ys(&self) -> Vec<&PointP2> {
        self.pairs.iter().map(|p| &p.y).collect()
    }

    pub fn x(&self, i: usize) -> &PointP2 {
        &self.pairs[i].x
    }

    pub fn y(&self, i: usize) -> &PointP2 {
        &self.pairs[i].y
    }

    /// The pairs at the given indices, in the given order.
    pub fn subset(&self, idx: &[usize]) -> Result<Config, ConfigError> {
        Config::new(idx.iter().map(|&i| self.pairs[i].clone()).collect())
    }

    /// Exchanges the roles of the two sides. The rank of Z_k is unchanged.
    pub fn swap_sides(&self) -> Config {
        Config {
            pairs: self
                .pairs
                .iter()
                .map(|p| PointPair::new(p.y.clone(), p.x.clone()))
                .collect(),
        }
    }

    pub fn with_pair(&self, pair: PointPair) -> Result<Config, ConfigError> {
        let mut pairs = self.pairs.clone();
        pairs.push(pair);
        Config::new(pairs)
    }
}

/// The row `x^T (x) y^T`.
pub fn kron_row<const N: usize, const M: usize>(x: &[Rat; N], y: &[Rat; M]) -> Vec<Rat> {
    x.iter()
        .flat_map(|a| y.iter().map(move |b| a * b))
        .collect()
}

/// Column-major vectorization of a 3x3 matrix.
pub fn vec_of(m: &QMatrix) -> Vec<Rat> {
    (0..3)
        .flat_map(|c| (0..3).map(move |r| (r, c)))
        .map(|(r, c)| m.get(r, c).clone())
        .collect()
}

/// Inverse of [`vec_of`]: `M[r][c] = v[3c + r]`.
pub fn unvec(v: &[Rat]) -> QMatrix {
    assert_eq!(v.len(), 9);
    let mut m = QMatrix::zeros(3, 3);
    for r in 0..3 {
        for c in 0..3 {
            m.set(r, c, v[3 * c + r].clone());
        }
    }
    m
}

/// A configuration together with its k x 9 matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSplit {
    pub config: Config,
    pub z: QMatrix,
}

pub fn build_z(c: &Config) -> FaceSplit {
    let rows = c
        .pairs
        .iter()
        .map(|p| kron_row(&p.x.to_rats(), &p.y.to_rats()))
        .collect();
    FaceSplit {
        config: c.clone(),
        z: QMatrix::from_rows(rows),
    }
}

pub fn z_rank(c: &Config) -> usize {
    build_z(c).z.rank()
}

/// Applies `h1` to every x and `h2` to every y.
pub fn transform(c: &Config, h1: &Homography, h2: &Homography) -> Config {
    Config {
        pairs: c
            .pairs
            .iter()
            .map(|p| PointPair::new(h1.apply(&p.x), h2.apply(&p.y)))
            .collect(),
    }
}

/// Moves every point off the line at infinity by one homography used on both sides.
/// The avoiding line is the first integer line, by increasing height, missing every point.
pub fn move_to_finite(c: &Config) -> (Config, Homography, Homography) {
    let all: Vec<&PointP2> = c.xs().into_iter().chain(c.ys()).collect();
    if all.iter().all(|p| p.is_finite()) {
        return (c.clone(), Homography::identity(), Homography::identity());
    }
    for l in crate::projective::small_directions(4) {
        if all.iter().any(|p| {
            p.to_rats()
                .iter()
                .zip(&l)
                .map(|(a, b)| a * b)
                .sum::<Rat>()
                .is_zero()
        }) {
            continue;
        }
        // Complete l to an invertible matrix with two unit rows.
        let keep = (0..3).rev().find(|&i| !l[i].is_zero()).expect("nonzero");
        let unit = |i: usize| {
            (0..3)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        };
        let mut rows: Vec<Vec<Rat>> = (0..3).filter(|&i| i != keep).map(unit).collect();
        rows.push(l.to_vec());
        let h = Homography::new(&QMatrix::from_rows(rows)).expect("invertible by construction");
        return (transform(c, &h, &h), h.clone(), h);
    }
    unreachable!("finitely many points always admit an avoiding line of small height")
}

/// Pairs of points of P^1 x P^1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ConfigP1 {
    pairs: Vec<(PointP1, PointP1)>,
}

impl ConfigP1 {
    pub const MAX: usize = 4;

    pub fn new(pairs: Vec<(PointP1, PointP1)>) -> Result<Self, ConfigError> {
        if !(MIN_PAIRS..=Self::MAX).contains(&pairs.len()) {
            return Err(ConfigError::Size(pairs.len(), MIN_PAIRS, Self::MAX));
        }
        Ok(ConfigP1 { pairs })
    }

    pub fn of(xs: &[[i64; 2]], ys: &[[i64; 2]]) -> Self {
        assert_eq!(xs.len(), ys.len());
        ConfigP1::new(
            xs.iter()
                .zip(ys)
                .map(|(x, y)| (PointP1::of(*x), PointP1::of(*y)))
                .collect(),
        )
        .expect("valid size")
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(PointP1, PointP1)] {
        &self.pairs
    }

    pub fn subset(&self, idx: &[usize]) -> Result<ConfigP1, ConfigError> {
        ConfigP1::new(idx.iter().map(|&i| self.pairs[i].clone()).collect())
    }

    /// The k x 4 matrix with rows `x_i (x) y_i`.
    pub fn z(&self) -> QMatrix {
        QMatrix::from_rows(
            self.pairs
                .iter()
                .map(|(x, y)| kron_row(&x.to_rats(), &y.to_rats()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, proportional};
    use proptest::prelude::*;

    pub(crate) fn collinear_images_five() -> Config {
        Config::of(
            &[[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1], [50, 98, 113]],
            &[[0, 0, 1], [1, 0, 1], [3, 0, 1], [-4, 0, 1], [8, 0, 1]],
        )
    }

    #[test]
    fn single_row_layout() {
        let c = Config::of(&[[0, 0, 1], [1, 1, 1]], &[[0, 0, 1], [1, 1, 1]]);
        let z = build_z(&c).z;
        let ints = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert_eq!(z.row(0), ints(&[0, 0, 0, 0, 0, 0, 0, 0, 1]).as_slice());
        assert_eq!(z.row(1), ints(&[1; 9]).as_slice());
    }

    #[test]
    fn collinear_images_matrix() {
        let z = build_z(&collinear_images_five()).z;
        let expect = QMatrix::from_i64(&[
            &[0, 0, 0, 0, 0, 0, 0, 0, 1],
            &[1, 0, 1, 0, 0, 0, 1, 0, 1],
            &[0, 0, 0, 3, 0, 1, 3, 0, 1],
            &[-4, 0, 1, -4, 0, 1, -4, 0, 1],
            &[400, 0, 50, 784, 0, 98, 904, 0, 113],
        ]);
        // y4 = (-4,0,1) is stored as its canonical representative (4,0,-1), which negates row 4.
        for r in 0..5 {
            let sign = if r == 3 { int(-1) } else { int(1) };
            let want: Vec<Rat> = expect.row(r).iter().map(|v| v * &sign).collect();
            assert_eq!(z.row(r), want.as_slice());
        }
        assert_eq!(z.rank(), 4);
        assert!(z.maximal_minors().unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn vec_convention_pins_orientation() {
        let x = [int(1), int(2), int(3)];
        let y = [int(5), int(7), int(11)];
        let yxt = QMatrix::from_rows(
            (0..3)
                .map(|r| (0..3).map(|c| &y[r] * &x[c]).collect())
                .collect(),
        );
        assert_eq!(kron_row(&x, &y), vec_of(&yxt));
        assert_eq!(unvec(&vec_of(&yxt)), yxt);
    }

    #[test]
    fn move_to_finite_examples() {
        let c = collinear_images_five();
        let (d, h1, h2) = move_to_finite(&c);
        assert_eq!(d, c);
        assert_eq!((h1, h2), (Homography::identity(), Homography::identity()));

        let c = Config::of(
            &[[1, 2, 0], [0, 1, 0], [1, 0, 0]],
            &[[1, 0, 0], [0, 1, 0], [3, 1, 1]],
        );
        let (d, _, _) = move_to_finite(&c);
        assert!(d.xs().iter().chain(d.ys().iter()).all(|p| p.is_finite()));
        assert_eq!(z_rank(&d), z_rank(&c));
    }

    fn point() -> impl Strategy<Value = PointP2> {
        prop::array::uniform3(-9i64..=9)
            .prop_filter("nonzero", |c| c.iter().any(|&v| v != 0))
            .prop_map(PointP2::of)
    }

    fn config() -> impl Strategy<Value = Config> {
        (2..=6usize).prop_flat_map(|k| {
            prop::collection::vec((point(), point()), k).prop_map(|v| {
                Config::new(v.into_iter().map(|(x, y)| PointPair::new(x, y)).collect()).unwrap()
            })
        })
    }

    fn homography() -> impl Strategy<Value = Homography> {
        prop::array::uniform9(-5i64..=5).prop_filter_map("invertible", |v| {
            Homography::new(&QMatrix::new(3, 3, v.iter().map(|&x| int(x)).collect()).unwrap()).ok()
        })
    }

    fn kron3(a: &QMatrix, b: &QMatrix) -> QMatrix {
        let mut out = QMatrix::zeros(9, 9);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        out.set(3 * i + k, 3 * j + l, a.get(i, j) * b.get(k, l));
                    }
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn rank_is_invariant(c in config(), h1 in homography(), h2 in homography()) {
            prop_assert_eq!(z_rank(&transform(&c, &h1, &h2)), z_rank(&c));
        }

        #[test]
        fn mixed_product_rows(c in config(), h1 in homography(), h2 in homography()) {
            let z = build_z(&c).z;
            let z2 = build_z(&transform(&c, &h1, &h2)).z;
            let k = kron3(&h1.matrix().transpose(), &h2.matrix().transpose());
            let zk = z.mul(&k);
            for i in 0..c.k() {
                prop_assert!(proportional(z2.row(i), zk.row(i)));
            }
        }

        #[test]
        fn move_to_finite_preserves_rank(c in config()) {
            let (d, h1, h2) = move_to_finite(&c);
            prop_assert!(d.xs().iter().chain(d.ys().iter()).all(|p| p.is_finite()));
            prop_assert_eq!(z_rank(&d), z_rank(&c));
            prop_assert_eq!(transform(&c, &h1, &h2), d);
        }
    }
}
