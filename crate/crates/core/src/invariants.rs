//! Coble scalars, Joubert invariants, covariant cubics and the hexahedral form.
//!
//! All three families share one index table: entry `s` of row `n` lists the three point pairs
//! of the `s`-th summand of the `n`-th invariant. Indices are 0-based.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::linalg::{primitive_int, proportional, QMatrix};
use crate::projective::{bracket2, bracket3, PointP1, PointP2};

type Summand = [[usize; 2]; 3];

const fn s(a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Summand {
    [[a - 1, b - 1], [c - 1, d - 1], [e - 1, f - 1]]
}

/// Pair structure of the six invariants a..f, five summands each.
pub const TABLE: [[Summand; 5]; 6] = [
    [
        s(2, 5, 1, 3, 4, 6),
        s(5, 1, 4, 2, 3, 6),
        s(1, 4, 3, 5, 2, 6),
        s(4, 3, 2, 1, 5, 6),
        s(3, 2, 5, 4, 1, 6),
    ],
    [
        s(5, 3, 1, 2, 4, 6),
        s(1, 4, 2, 3, 5, 6),
        s(2, 5, 3, 4, 1, 6),
        s(3, 1, 4, 5, 2, 6),
        s(4, 2, 5, 1, 3, 6),
    ],
    [
        s(5, 3, 4, 1, 2, 6),
        s(3, 4, 2, 5, 1, 6),
        s(4, 2, 1, 3, 5, 6),
        s(2, 1, 5, 4, 3, 6),
        s(1, 5, 3, 2, 4, 6),
    ],
    [
        s(4, 5, 3, 1, 2, 6),
        s(5, 3, 2, 4, 1, 6),
        s(4, 1, 2, 5, 3, 6),
        s(3, 2, 1, 5, 4, 6),
        s(2, 1, 4, 3, 5, 6),
    ],
    [
        s(3, 1, 2, 4, 5, 6),
        s(1, 2, 5, 3, 4, 6),
        s(2, 5, 4, 1, 3, 6),
        s(5, 4, 3, 2, 1, 6),
        s(4, 3, 1, 5, 2, 6),
    ],
    [
        s(4, 2, 3, 5, 1, 6),
        s(2, 3, 1, 4, 5, 6),
        s(3, 1, 5, 2, 4, 6),
        s(1, 5, 4, 3, 2, 6),
        s(5, 4, 2, 1, 3, 6),
    ],
];

pub const LABELS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Six labelled values (a..f), usually considered up to scale.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sextuple(pub [BigInt; 6]);

impl Sextuple {
    pub fn of(v: [i64; 6]) -> Self {
        Sextuple(v.map(BigInt::from))
    }

    pub fn values(&self) -> &[BigInt; 6] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Equality up to scale: all fifteen 2x2 cross products vanish.
    pub fn proportional(&self, other: &Sextuple) -> bool {
        proportional(&self.0, &other.0)
    }

    pub fn dot(&self, other: &Sextuple) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn sum(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn cube_sum(&self) -> BigInt {
        self.0.iter().map(|v| v * v * v).sum()
    }

    /// Coprime integers with a positive leading entry; zero stays zero.
    pub fn canonical(&self) -> Sextuple {
        let p = primitive_int(&self.0);
        Sextuple(std::array::from_fn(|i| p[i].clone()))
    }
}

impl fmt::Debug for Sextuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `[(ij)(kl)(rs)] = [ijr][kls] - [ijs][klr]`; zero iff the lines p_i p_j, p_k p_l and
/// p_r p_s are concurrent.
pub fn triple_invariant(
    p: [&PointP2; 6],
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    r: usize,
    s: usize,
) -> BigInt {
    bracket3(p[i], p[j], p[r]) * bracket3(p[k], p[l], p[s])
        - bracket3(p[i], p[j], p[s]) * bracket3(p[k], p[l], p[r])
}

fn sum_table(f: impl Fn(&Summand) -> BigInt) -> Sextuple {
    Sextuple(std::array::from_fn(|n| TABLE[n].iter().map(&f).sum()))
}

/// The six Coble scalars of six points of P^2.
pub fn coble_bar(p: [&PointP2; 6]) -> Sextuple {
    sum_table(|t| triple_invariant(p, t[0][0], t[0][1], t[1][0], t[1][1], t[2][0], t[2][1]))
}

/// The six Joubert invariants of six points of P^1.
pub fn joubert(p: [&PointP1; 6]) -> Sextuple {
    sum_table(|t| t.iter().map(|&[i, j]| bracket2(p[i], p[j])).product())
}

/// The six covariant cubics of six points of P^2, evaluated at `u`.
pub fn covariant_cubics(p: [&PointP2; 6], u: &PointP2) -> Sextuple {
    sum_table(|t| t.iter().map(|&[i, j]| bracket3(p[i], p[j], u)).product())
}

/// `(sum z^3, sum z, bar . z)` with the Coble scalars of `p`.
pub fn hexahedral_residuals(p: [&PointP2; 6], z: &Sextuple) -> (BigInt, BigInt, BigInt) {
    (z.cube_sum(), z.sum(), coble_bar(p).dot(z))
}

/// The pairing of the Coble scalars of `xs` with the Joubert invariants of `ys`.
pub fn line_case_form(xs: [&PointP2; 6], ys: [&PointP1; 6]) -> BigInt {
    coble_bar(xs).dot(&joubert(ys))
}

/// The 6x6 matrix with rows `x_i (x) y_i`, columns `(x1y1, x1y2, x2y1, x2y2, x3y1, x3y2)`.
/// It is the only maximal minor of Z_6 that can be nonzero when every y lies on `z = 0`.
pub fn line_case_matrix(xs: [&PointP2; 6], ys: [&PointP1; 6]) -> QMatrix {
    QMatrix::from_rows(
        xs.iter()
            .zip(ys.iter())
            .map(|(x, y)| crate::facesplit::kron_row(&x.to_rats(), &y.to_rats()))
            .collect(),
    )
}

/// Convenience: borrow six points from a slice.
pub fn six<T>(v: &[T]) -> [&T; 6] {
    assert_eq!(v.len(), 6, "six points expected");
    std::array::from_fn(|i| &v[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, Rat};
    use crate::projective::{collinear, Homography};
    use proptest::prelude::*;

    const INDEX_PATTERNS: [&str; 6] = [
        "(25)(13)(46) (51)(42)(36) (14)(35)(26) (43)(21)(56) (32)(54)(16)",
        "(53)(12)(46) (14)(23)(56) (25)(34)(16) (31)(45)(26) (42)(51)(36)",
        "(53)(41)(26) (34)(25)(16) (42)(13)(56) (21)(54)(36) (15)(32)(46)",
        "(45)(31)(26) (53)(24)(16) (41)(25)(36) (32)(15)(46) (21)(43)(56)",
        "(31)(24)(56) (12)(53)(46) (25)(41)(36) (54)(32)(16) (43)(15)(26)",
        "(42)(35)(16) (23)(14)(56) (31)(52)(46) (15)(43)(26) (54)(21)(36)",
    ];

    fn parse_pattern(line: &str) -> Vec<Vec<(usize, usize)>> {
        line.split_whitespace()
            .map(|term| {
                let digits: Vec<usize> = term
                    .chars()
                    .filter(char::is_ascii_digit)
                    .map(|c| c.to_digit(10).unwrap() as usize - 1)
                    .collect();
                digits.chunks(2).map(|d| (d[0], d[1])).collect()
            })
            .collect()
    }

    #[test]
    fn table_matches_index_patterns() {
        for (n, line) in INDEX_PATTERNS.iter().enumerate() {
            let parsed = parse_pattern(line);
            assert_eq!(parsed.len(), 5);
            for (k, term) in parsed.iter().enumerate() {
                let t = TABLE[n][k];
                assert_eq!(
                    term,
                    &vec![(t[0][0], t[0][1]), (t[1][0], t[1][1]), (t[2][0], t[2][1])]
                );
            }
        }
    }

    #[test]
    fn every_summand_is_a_perfect_matching() {
        for row in TABLE {
            for t in row {
                let mut seen: Vec<usize> = t.iter().flatten().copied().collect();
                seen.sort();
                assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);
            }
        }
    }

    fn pts(v: &[[i64; 3]]) -> Vec<PointP2> {
        v.iter().map(|c| PointP2::of(*c)).collect()
    }

    fn pts1(v: &[[i64; 2]]) -> Vec<PointP1> {
        v.iter().map(|c| PointP1::of(*c)).collect()
    }

    const TARGET: [i64; 6] = [48079, -55599, -88559, -17265, 22529, 90815];

    fn final_example_x() -> Vec<PointP2> {
        pts(&[
            [0, 0, 1],
            [1, 0, 1],
            [0, 1, 1],
            [1, 1, 1],
            [3, 5, 1],
            [2, 11, 1],
        ])
    }

    fn final_example_y() -> Vec<PointP1> {
        pts1(&[[0, 1], [1, 1], [3, 1], [-4, 1], [8, 1], [2942, 918]])
    }

    #[test]
    fn final_example_invariants() {
        let x = final_example_x();
        let y = final_example_y();
        let target = Sextuple::of(TARGET);
        let j = joubert(six(&y));
        assert!(j.proportional(&target));
        assert!(!j.is_zero());
        let u = PointP2::of([-1617, -803, 11888]);
        let cov = covariant_cubics(six(&x), &u);
        assert!(cov.proportional(&target));
        assert!(!cov.is_zero());
        assert_eq!(line_case_form(six(&x), six(&y)), BigInt::zero());
        assert_eq!(
            hexahedral_residuals(six(&x), &j),
            (BigInt::zero(), BigInt::zero(), BigInt::zero())
        );
        let mut y1 = y.clone();
        y1[5] = PointP1::of([1, 1]);
        assert!(!line_case_form(six(&x), six(&y1)).is_zero());
    }

    #[test]
    fn triple_invariant_examples() {
        let p = pts(&[
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 1, 1],
            [2, 3, 1],
            [3, 7, 1],
        ]);
        let pp = six(&p);
        let direct = bracket3(&p[0], &p[1], &p[4]) * bracket3(&p[2], &p[3], &p[5])
            - bracket3(&p[0], &p[1], &p[5]) * bracket3(&p[2], &p[3], &p[4]);
        assert_eq!(triple_invariant(pp, 0, 1, 2, 3, 4, 5), direct);
        assert_eq!(
            triple_invariant(pp, 0, 1, 2, 3, 4, 5),
            triple_invariant(pp, 2, 3, 0, 1, 5, 4)
        );
        assert_eq!(
            triple_invariant(pp, 0, 1, 2, 3, 4, 5),
            -triple_invariant(pp, 0, 1, 2, 3, 5, 4)
        );
        // The lines p1p2, p3p4 and p5p6 all pass through (1,1,0).
        let q = pts(&[
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 1, 1],
            [1, 0, 1],
            [0, 1, -1],
        ]);
        assert!(triple_invariant(six(&q), 0, 1, 2, 3, 4, 5).is_zero());
    }

    #[test]
    fn hexahedral_direct_substitution() {
        let p = pts(&[
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 1, 1],
            [2, 3, 1],
            [3, 7, 1],
        ]);
        let bar = coble_bar(six(&p));
        let (r1, r2, r3) = hexahedral_residuals(six(&p), &Sextuple::of([1, -1, 0, 0, 0, 0]));
        assert!(r1.is_zero() && r2.is_zero());
        assert_eq!(r3, &bar.0[0] - &bar.0[1]);
    }

    #[test]
    fn line_case_sign_on_worked_configuration() {
        // The exact identity is pairing = -24 det(M) with the natural column order.
        let x = final_example_x();
        let y = final_example_y();
        for t in [0i64, 1, 5] {
            let mut yt = y.clone();
            yt[5] = PointP1::of([t, 1]);
            let form = Rat::from_integer(line_case_form(six(&x), six(&yt)));
            let det = line_case_matrix(six(&x), six(&yt)).det().unwrap();
            assert_eq!(form, det * int(-24));
        }
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

    fn collinear_six() -> impl Strategy<Value = Vec<PointP2>> {
        (
            point(),
            point(),
            prop::collection::vec((-6i64..=6, -6i64..=6), 6),
        )
            .prop_filter_map("spanning", |(a, b, st)| {
                let out: Option<Vec<PointP2>> = st
                    .iter()
                    .map(|&(s, t)| {
                        let c: Vec<BigInt> = (0..3)
                            .map(|i| {
                                &a.coords()[i] * BigInt::from(s) + &b.coords()[i] * BigInt::from(t)
                            })
                            .collect();
                        PointP2::from_ints(&c).ok()
                    })
                    .collect();
                out
            })
    }

    proptest! {
        #[test]
        fn joubert_sum_and_cube_sum_vanish(p in prop::array::uniform6(point1())) {
            let j = joubert(six(&p));
            prop_assert!(j.sum().is_zero());
            prop_assert!(j.cube_sum().is_zero());
        }

        #[test]
        fn collinear_points_have_zero_coble_scalars(p in collinear_six()) {
            let refs: Vec<&PointP2> = p.iter().collect();
            prop_assert!(collinear(&refs));
            prop_assert!(coble_bar(six(&p)).is_zero());
        }

        #[test]
        fn covariant_cubics_vanish_at_the_points(p in prop::array::uniform6(point())) {
            for q in &p {
                prop_assert!(covariant_cubics(six(&p), q).is_zero());
            }
        }

        #[test]
        fn covariant_cubic_images_lie_on_the_surface(p in prop::array::uniform6(point()), u in point()) {
            let z = covariant_cubics(six(&p), &u);
            let r = hexahedral_residuals(six(&p), &z);
            prop_assert!(r.0.is_zero() && r.1.is_zero() && r.2.is_zero());
        }

        #[test]
        fn covariant_cubics_specialize_to_joubert(line in prop::array::uniform6(point1()), u in point()) {
            // Points on z = 0 and u off the line: every bracket [iju] equals u3 [ij].
            prop_assume!(!u.coords()[2].is_zero());
            let embedded: Vec<PointP2> = line.iter().map(PointP1::embed).collect();
            let cov = covariant_cubics(six(&embedded), &u);
            let j = joubert(six(&line));
            let u3 = &u.coords()[2];
            let scaled: Vec<BigInt> = j.0.iter().map(|v| v * u3 * u3 * u3).collect();
            prop_assert_eq!(cov.0.to_vec(), scaled);
        }

        #[test]
        fn coble_scalars_are_covariant(p in prop::array::uniform6(point()), m in prop::array::uniform9(-4i64..=4)) {
            let Ok(h) = Homography::new(&QMatrix::new(3, 3, m.iter().map(|&v| int(v)).collect()).unwrap()) else {
                return Ok(());
            };
            let q: Vec<PointP2> = p.iter().map(|x| h.apply(x)).collect();
            prop_assert!(coble_bar(six(&p)).proportional(&coble_bar(six(&q))));
        }

        #[test]
        fn line_case_form_is_minus_24_det(x in prop::array::uniform6(point()), y in prop::array::uniform6(point1())) {
            let form = Rat::from_integer(line_case_form(six(&x), six(&y)));
            let det = line_case_matrix(six(&x), six(&y)).det().unwrap();
            prop_assert_eq!(form, det * int(-24));
        }

        #[test]
        fn fifteen_line_family(p in prop::array::uniform6(point()), a in -9i64..=9, b in -9i64..=9, c in -9i64..=9) {
            let z = Sextuple::of([a, b, c, -a, -b, -c]);
            let bar = coble_bar(six(&p));
            let (r1, r2, r3) = hexahedral_residuals(six(&p), &z);
            prop_assert!(r1.is_zero() && r2.is_zero());
            let weighted = (&bar.0[0] - &bar.0[3]) * a + (&bar.0[1] - &bar.0[4]) * b + (&bar.0[2] - &bar.0[5]) * c;
            prop_assert_eq!(r3, weighted);
        }
    }
}
