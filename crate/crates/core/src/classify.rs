//! Decides rank deficiency of Z_k and explains it by geometric conditions.
//!
//! The exact rank is always computed and is the verdict. Conditions are explanations; each one
//! carries a witness that [`Condition::verify`] re-evaluates from scratch. A rank drop that no
//! condition explains sets [`Report::unexplained`], and a deficiency-implying condition on a
//! full-rank configuration sets [`Report::contradicted`]. Both indicate a bug.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::facesplit::{z_rank, Config, ConfigP1};
use crate::invariants::{coble_bar, line_case_form, six, Sextuple};
use crate::projective::{
    bracket2, bracket3, collinear, general_position_p2, homography_from_4, maps_all,
    reduce_to_line, Homography, PointP1, PointP2,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("the {0} side is not collinear")]
    SideNotCollinear(Side),
    #[error("configuration has {got} pairs, this check needs {want}")]
    WrongSize { got: usize, want: usize },
    #[error("points are not in general position")]
    NotGeneralPosition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::X => "x",
            Side::Y => "y",
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionKind {
    RepeatedPair,
    CoincidentTripleOppositeLine,
    AllCoincident,
    BothSidesCollinearCrossRatio,
    K5LineAndBrackets,
    K6Brackets,
    K6LineJoubert,
    K6InvariantProportional,
    HomographyRelated,
    AsymmetricDoubleTriangle,
    Inherited,
}

impl ConditionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConditionKind::RepeatedPair => "RepeatedPair",
            ConditionKind::CoincidentTripleOppositeLine => "CoincidentTripleOppositeLine",
            ConditionKind::AllCoincident => "AllCoincident",
            ConditionKind::BothSidesCollinearCrossRatio => "BothSidesCollinearCrossRatio",
            ConditionKind::K5LineAndBrackets => "K5LineAndBrackets",
            ConditionKind::K6Brackets => "K6Brackets",
            ConditionKind::K6LineJoubert => "K6LineJoubert",
            ConditionKind::K6InvariantProportional => "K6InvariantProportional",
            ConditionKind::HomographyRelated => "HomographyRelated",
            ConditionKind::AsymmetricDoubleTriangle => "AsymmetricDoubleTriangle",
            ConditionKind::Inherited => "Inherited",
        }
    }
}

/// A geometric condition with the data needed to re-check it. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// `x_i = x_j` and `y_i = y_j`.
    RepeatedPair { i: usize, j: usize },
    /// Three pairs: one side is a single point, the other side is collinear.
    CoincidentTripleOppositeLine { coincident: Side },
    /// Every point on one side coincides.
    AllCoincident { side: Side },
    /// Four pairs, both sides collinear, and the line bracket residual vanishes.
    BothSidesCollinearCrossRatio { residual: BigInt },
    /// Five pairs, one side collinear, and the five bracket residuals vanish.
    K5LineAndBrackets {
        line_side: Side,
        residuals: Vec<BigInt>,
    },
    /// Six pairs, neither side collinear, the thirty bracket residuals vanish and the
    /// configuration is not an asymmetric double triangle.
    K6Brackets { residuals: Vec<BigInt> },
    /// Six pairs, one side collinear, and the Coble-Joubert pairing vanishes.
    K6LineJoubert { line_side: Side, form: BigInt },
    /// Six pairs, both sides in general position, proportional Coble scalars and not all
    /// six pairs related by one homography.
    K6InvariantProportional {
        coble_x: Sextuple,
        coble_y: Sextuple,
    },
    /// All pairs satisfy `y_i = H x_i`. Does not imply deficiency.
    HomographyRelated { homography: Homography },
    /// The thirty bracket residuals vanish on an asymmetric double triangle. Does not imply
    /// deficiency; `order` is a reordering exhibiting the pattern.
    AsymmetricDoubleTriangle { order: [usize; 6] },
    /// The rows in `subset` are already dependent, for the reason `inner` (stated with
    /// indices relative to the subset).
    Inherited {
        subset: Vec<usize>,
        inner: Box<Condition>,
    },
}

impl Condition {
    pub fn kind(&self) -> ConditionKind {
        match self {
            Condition::RepeatedPair { .. } => ConditionKind::RepeatedPair,
            Condition::CoincidentTripleOppositeLine { .. } => {
                ConditionKind::CoincidentTripleOppositeLine
            }
            Condition::AllCoincident { .. } => ConditionKind::AllCoincident,
            Condition::BothSidesCollinearCrossRatio { .. } => {
                ConditionKind::BothSidesCollinearCrossRatio
            }
            Condition::K5LineAndBrackets { .. } => ConditionKind::K5LineAndBrackets,
            Condition::K6Brackets { .. } => ConditionKind::K6Brackets,
            Condition::K6LineJoubert { .. } => ConditionKind::K6LineJoubert,
            Condition::K6InvariantProportional { .. } => ConditionKind::K6InvariantProportional,
            Condition::HomographyRelated { .. } => ConditionKind::HomographyRelated,
            Condition::AsymmetricDoubleTriangle { .. } => ConditionKind::AsymmetricDoubleTriangle,
            Condition::Inherited { .. } => ConditionKind::Inherited,
        }
    }

    /// Whether the condition forces a rank drop.
    pub fn implies_deficiency(&self) -> bool {
        !matches!(
            self,
            Condition::HomographyRelated { .. } | Condition::AsymmetricDoubleTriangle { .. }
        )
    }

    /// Re-evaluates the condition and its witness directly on `c`.
    pub fn verify(&self, c: &Config) -> bool {
        let k = c.k();
        match self {
            Condition::RepeatedPair { i, j } => {
                i != j && *i < k && *j < k && c.x(*i) == c.x(*j) && c.y(*i) == c.y(*j)
            }
            Condition::CoincidentTripleOppositeLine { coincident } => {
                k == 3
                    && all_equal(&side(c, *coincident))
                    && collinear(&side(c, coincident.other()))
            }
            Condition::AllCoincident { side: s } => k == 4 && all_equal(&side(c, *s)),
            Condition::BothSidesCollinearCrossRatio { residual } => {
                residual.is_zero() && check_k4_bracket(c).is_ok_and(|r| r == *residual)
            }
            Condition::K5LineAndBrackets {
                line_side,
                residuals,
            } => {
                residuals.iter().all(Zero::is_zero)
                    && check_k5_brackets(c, *line_side).is_ok_and(|r| r == *residuals)
            }
            Condition::K6Brackets { residuals } => {
                k == 6
                    && !collinear(&c.xs())
                    && !collinear(&c.ys())
                    && residuals.iter().all(Zero::is_zero)
                    && check_k6_brackets(c).is_ok_and(|r| r == *residuals)
                    && asymmetric_double_triangle(c).is_none()
            }
            Condition::K6LineJoubert { line_side, form } => {
                form.is_zero() && k6_line_form(c, *line_side).is_ok_and(|f| f == *form)
            }
            Condition::K6InvariantProportional { coble_x, coble_y } => {
                k == 6
                    && general_position_p2(&c.xs())
                    && general_position_p2(&c.ys())
                    && coble_bar(six(&c.xs()).map(|p| *p)) == *coble_x
                    && coble_bar(six(&c.ys()).map(|p| *p)) == *coble_y
                    && coble_x.proportional(coble_y)
                    && !maps_all_pairs(c)
            }
            Condition::HomographyRelated { homography } => maps_all(homography, &c.xs(), &c.ys()),
            Condition::AsymmetricDoubleTriangle { order } => {
                k == 6
                    && is_adt_order(c, order)
                    && check_k6_brackets(c).is_ok_and(|r| r.iter().all(Zero::is_zero))
            }
            Condition::Inherited { subset, inner } => {
                subset.len() < k
                    && subset.iter().all(|&i| i < k)
                    && subset.iter().all_unique()
                    && c.subset(subset)
                        .is_ok_and(|s| z_rank(&s) < s.k() && inner.verify(&s))
            }
        }
    }
}

fn side(c: &Config, s: Side) -> Vec<&PointP2> {
    match s {
        Side::X => c.xs(),
        Side::Y => c.ys(),
    }
}

fn all_equal<T: PartialEq>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

/// Classification of one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub k: usize,
    pub rank: usize,
    pub deficient: bool,
    pub conditions: Vec<Condition>,
    /// Rank dropped but no deficiency-implying condition was found.
    pub unexplained: bool,
    /// Rank is full but a deficiency-implying condition holds.
    pub contradicted: bool,
    /// Coble scalars of the two sides, for six pairs.
    pub invariant_summary: Option<(Sextuple, Sextuple)>,
}

impl Report {
    fn assemble(
        k: usize,
        rank: usize,
        conditions: Vec<Condition>,
        subset_unexplained: bool,
    ) -> Report {
        let deficient = rank < k;
        let implying = conditions.iter().any(Condition::implies_deficiency);
        Report {
            k,
            rank,
            deficient,
            unexplained: (deficient && !implying) || subset_unexplained,
            contradicted: !deficient && implying,
            conditions,
            invariant_summary: None,
        }
    }

    /// True when the verdict and the listed conditions agree.
    pub fn consistent(&self) -> bool {
        !self.unexplained && !self.contradicted
    }

    pub fn has_kind(&self, kind: ConditionKind) -> bool {
        self.conditions.iter().any(|c| c.kind() == kind)
    }
}

/// Options for [`classify_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Report every deficient proper subset, not only the minimal ones.
    pub all_subsets: bool,
}

pub fn classify(c: &Config) -> Report {
    classify_with(c, ClassifyOptions::default())
}

pub fn classify_with(c: &Config, opts: ClassifyOptions) -> Report {
    let (mut conditions, subset_unexplained) = inherited(c, opts.all_subsets);
    conditions.extend(direct_conditions(c));
    let mut report = Report::assemble(c.k(), z_rank(c), conditions, subset_unexplained);
    if c.k() == 6 {
        report.invariant_summary = Some((
            coble_bar(six(&c.xs()).map(|p| *p)),
            coble_bar(six(&c.ys()).map(|p| *p)),
        ));
    }
    report
}

/// Conditions inherited from minimal deficient proper subsets.
pub fn inherited_conditions(c: &Config) -> Vec<Condition> {
    inherited(c, false).0
}

fn inherited(c: &Config, all: bool) -> (Vec<Condition>, bool) {
    let mut deficient: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    let mut unexplained = false;
    for size in 2..c.k() {
        for subset in (0..c.k()).combinations(size) {
            let has_deficient_part = deficient
                .iter()
                .any(|d| d.iter().all(|i| subset.contains(i)));
            if has_deficient_part && !all {
                continue;
            }
            let sub = c.subset(&subset).expect("size in range");
            if z_rank(&sub) == size {
                continue;
            }
            deficient.push(subset.clone());
            let inner = if has_deficient_part {
                let (mut nested, _) = inherited(&sub, false);
                nested.retain(Condition::implies_deficiency);
                nested.into_iter().next()
            } else {
                direct_conditions(&sub)
                    .into_iter()
                    .find(Condition::implies_deficiency)
            };
            match inner {
                Some(inner) => out.push(Condition::Inherited {
                    subset,
                    inner: Box::new(inner),
                }),
                None => unexplained = true,
            }
        }
    }
    (out, unexplained)
}

/// Conditions stated for exactly this number of pairs, ignoring subsets.
pub fn direct_conditions(c: &Config) -> Vec<Condition> {
    let mut out = Vec::new();
    match c.k() {
        2 => {
            if c.x(0) == c.x(1) && c.y(0) == c.y(1) {
                out.push(Condition::RepeatedPair { i: 0, j: 1 });
            }
        }
        3 => {
            for s in [Side::X, Side::Y] {
                if all_equal(&side(c, s)) && collinear(&side(c, s.other())) {
                    out.push(Condition::CoincidentTripleOppositeLine { coincident: s });
                }
            }
        }
        4 => {
            for s in [Side::X, Side::Y] {
                if all_equal(&side(c, s)) {
                    out.push(Condition::AllCoincident { side: s });
                }
            }
            if let Ok(residual) = check_k4_bracket(c) {
                if residual.is_zero() {
                    out.push(Condition::BothSidesCollinearCrossRatio { residual });
                }
            }
        }
        5 => {
            if let Some(line_side) = [Side::Y, Side::X]
                .into_iter()
                .find(|&s| collinear(&side(c, s)))
            {
                let residuals = check_k5_brackets(c, line_side).expect("side is collinear");
                if residuals.iter().all(Zero::is_zero) {
                    out.push(Condition::K5LineAndBrackets {
                        line_side,
                        residuals,
                    });
                }
            }
        }
        6 => out.extend(k6_conditions(c)),
        _ => {}
    }
    out
}

fn k6_conditions(c: &Config) -> Vec<Condition> {
    let mut out = Vec::new();
    let line_side = [Side::Y, Side::X]
        .into_iter()
        .find(|&s| collinear(&side(c, s)));
    match line_side {
        Some(s) => {
            let form = k6_line_form(c, s).expect("side is collinear");
            if form.is_zero() {
                out.push(Condition::K6LineJoubert { line_side: s, form });
            }
        }
        None => {
            let residuals = check_k6_brackets(c).expect("six pairs");
            if residuals.iter().all(Zero::is_zero) {
                match asymmetric_double_triangle(c) {
                    Some(order) => out.push(Condition::AsymmetricDoubleTriangle { order }),
                    None => out.push(Condition::K6Brackets { residuals }),
                }
            }
        }
    }
    if general_position_p2(&c.xs()) && general_position_p2(&c.ys()) {
        let coble_x = coble_bar(six(&c.xs()).map(|p| *p));
        let coble_y = coble_bar(six(&c.ys()).map(|p| *p));
        match all_pairs_homography(c) {
            Some(homography) => out.push(Condition::HomographyRelated { homography }),
            None if coble_x.proportional(&coble_y) => {
                out.push(Condition::K6InvariantProportional { coble_x, coble_y })
            }
            None => {}
        }
    }
    out
}

fn need(c_k: usize, want: usize) -> Result<(), ClassifyError> {
    if c_k == want {
        Ok(())
    } else {
        Err(ClassifyError::WrongSize { got: c_k, want })
    }
}

fn line_coords(c: &Config, s: Side) -> Result<Vec<PointP1>, ClassifyError> {
    reduce_to_line(&side(c, s)).map_err(|_| ClassifyError::SideNotCollinear(s))
}

/// Line residual `[13]x[24]x[14]y[23]y - [14]x[23]x[13]y[24]y` of four pairs of P^1 points.
pub fn k4_residual_p1(x: [&PointP1; 4], y: [&PointP1; 4]) -> BigInt {
    let bx = |i: usize, j: usize| bracket2(x[i], x[j]);
    let by = |i: usize, j: usize| bracket2(y[i], y[j]);
    bx(0, 2) * bx(1, 3) * by(0, 3) * by(1, 2) - bx(0, 3) * bx(1, 2) * by(0, 2) * by(1, 3)
}

/// The four-pair residual on the two lines' P^1 coordinates. Both sides must be collinear.
pub fn check_k4_bracket(c: &Config) -> Result<BigInt, ClassifyError> {
    need(c.k(), 4)?;
    let x = line_coords(c, Side::X)?;
    let y = line_coords(c, Side::Y)?;
    Ok(k4_residual_p1(
        [&x[0], &x[1], &x[2], &x[3]],
        [&y[0], &y[1], &y[2], &y[3]],
    ))
}

/// One residual per `j`, with the other four indices ascending, brackets with `j` taken on
/// the side opposite to the line.
pub fn check_k5_brackets(c: &Config, line_side: Side) -> Result<Vec<BigInt>, ClassifyError> {
    need(c.k(), 5)?;
    let line = line_coords(c, line_side)?;
    let plane = side(c, line_side.other());
    Ok((0..5)
        .map(|j| {
            let r: Vec<usize> = (0..5).filter(|&i| i != j).collect();
            let (i1, i2, i3, i4) = (r[0], r[1], r[2], r[3]);
            let bp = |a: usize, b: usize| bracket3(plane[a], plane[b], plane[j]);
            let bl = |a: usize, b: usize| bracket2(&line[a], &line[b]);
            bp(i1, i3) * bp(i2, i4) * bl(i1, i4) * bl(i2, i3)
                - bp(i1, i4) * bp(i2, i3) * bl(i1, i3) * bl(i2, i4)
        })
        .collect())
}

/// Thirty residuals, one per ordered pair `(p, s)` with `p != s` in lexicographic order,
/// `i < j < k < r` the remaining indices.
pub fn check_k6_brackets(c: &Config) -> Result<Vec<BigInt>, ClassifyError> {
    need(c.k(), 6)?;
    Ok((0..6)
        .cartesian_product(0..6)
        .filter(|(p, s)| p != s)
        .map(|(p, s)| {
            let r: Vec<usize> = (0..6).filter(|&t| t != p && t != s).collect();
            k6_residual(c, [r[0], r[1], r[2], r[3]], p, s)
        })
        .collect())
}

/// `[ikp]x[jrp]x[irs]y[jks]y - [irp]x[jkp]x[iks]y[jrs]y` for an explicit index assignment.
pub fn k6_residual(c: &Config, ijkr: [usize; 4], p: usize, s: usize) -> BigInt {
    let [i, j, k, r] = ijkr;
    let bx = |a: usize, b: usize, d: usize| bracket3(c.x(a), c.x(b), c.x(d));
    let by = |a: usize, b: usize, d: usize| bracket3(c.y(a), c.y(b), c.y(d));
    bx(i, k, p) * bx(j, r, p) * by(i, r, s) * by(j, k, s)
        - bx(i, r, p) * bx(j, k, p) * by(i, k, s) * by(j, r, s)
}

/// Pairing of the plane side's Coble scalars with the line side's Joubert invariants.
pub fn k6_line_form(c: &Config, line_side: Side) -> Result<BigInt, ClassifyError> {
    need(c.k(), 6)?;
    let line = line_coords(c, line_side)?;
    let plane = side(c, line_side.other());
    Ok(line_case_form(six(&plane).map(|p| *p), six(&line)))
}

fn is_adt_order(c: &Config, o: &[usize; 6]) -> bool {
    let mut seen = [false; 6];
    for &i in o {
        if i >= 6 || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    let x = |i: usize| c.x(o[i]);
    let y = |i: usize| c.y(o[i]);
    y(0) == y(1)
        && y(2) == y(3)
        && y(4) == y(5)
        && x(0) == x(3)
        && x(1) == x(4)
        && x(2) == x(5)
        && x(0) != x(1)
        && x(0) != x(2)
        && x(1) != x(2)
        && y(0) != y(2)
        && y(0) != y(4)
        && y(2) != y(4)
}

/// A reordering exhibiting the asymmetric double triangle pattern, if any.
pub fn asymmetric_double_triangle(c: &Config) -> Option<[usize; 6]> {
    if c.k() != 6 {
        return None;
    }
    (0..6)
        .permutations(6)
        .map(|p| [p[0], p[1], p[2], p[3], p[4], p[5]])
        .find(|o| is_adt_order(c, o))
}

pub fn is_asymmetric_double_triangle(c: &Config) -> bool {
    asymmetric_double_triangle(c).is_some()
}

/// A homography fitted on the first four pairs that maps every x to its y.
pub fn all_pairs_homography(c: &Config) -> Option<Homography> {
    let xs = c.xs();
    let ys = c.ys();
    let h = homography_from_4([xs[0], xs[1], xs[2], xs[3]], [ys[0], ys[1], ys[2], ys[3]]).ok()?;
    maps_all(&h, &xs, &ys).then_some(h)
}

fn maps_all_pairs(c: &Config) -> bool {
    all_pairs_homography(c).is_some()
}

/// Both sides in general position and no five pairs related by one homography.
pub fn general_position_pairs(c: &Config) -> bool {
    if c.k() != 6 || !general_position_p2(&c.xs()) || !general_position_p2(&c.ys()) {
        return false;
    }
    (0..6)
        .combinations(5)
        .all(|s| !maps_all_pairs(&c.subset(&s).expect("five pairs")))
}

/// Whether the Coble scalars of the two sides are proportional.
pub fn check_invariant_proportionality(c: &Config) -> Result<bool, ClassifyError> {
    need(c.k(), 6)?;
    if !general_position_p2(&c.xs()) || !general_position_p2(&c.ys()) {
        return Err(ClassifyError::NotGeneralPosition);
    }
    let bx = coble_bar(six(&c.xs()).map(|p| *p));
    let by = coble_bar(six(&c.ys()).map(|p| *p));
    Ok(bx.proportional(&by))
}

/// Classification of pairs in P^1 x P^1 (up to four pairs).
pub fn classify_p1(c: &ConfigP1) -> Report {
    let k = c.k();
    let rank = c.z().rank();
    let mut conditions = Vec::new();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut subset_unexplained = false;
    for size in 2..k {
        for subset in (0..k).combinations(size) {
            if found.iter().any(|d| d.iter().all(|i| subset.contains(i))) {
                continue;
            }
            let sub = c.subset(&subset).expect("size in range");
            if sub.z().rank() == size {
                continue;
            }
            found.push(subset.clone());
            match direct_conditions_p1(&sub).into_iter().next() {
                Some(inner) => conditions.push(Condition::Inherited {
                    subset,
                    inner: Box::new(inner),
                }),
                None => subset_unexplained = true,
            }
        }
    }
    conditions.extend(direct_conditions_p1(c));
    Report::assemble(k, rank, conditions, subset_unexplained)
}

fn direct_conditions_p1(c: &ConfigP1) -> Vec<Condition> {
    let p = c.pairs();
    let xs: Vec<&PointP1> = p.iter().map(|(x, _)| x).collect();
    let ys: Vec<&PointP1> = p.iter().map(|(_, y)| y).collect();
    let mut out = Vec::new();
    match c.k() {
        2 => {
            if xs[0] == xs[1] && ys[0] == ys[1] {
                out.push(Condition::RepeatedPair { i: 0, j: 1 });
            }
        }
        3 => {
            if all_equal(&xs) {
                out.push(Condition::AllCoincident { side: Side::X });
            }
            if all_equal(&ys) {
                out.push(Condition::AllCoincident { side: Side::Y });
            }
        }
        4 => {
            let residual =
                k4_residual_p1([xs[0], xs[1], xs[2], xs[3]], [ys[0], ys[1], ys[2], ys[3]]);
            if residual.is_zero() {
                out.push(Condition::BothSidesCollinearCrossRatio { residual });
            }
        }
        _ => {}
    }
    out
}
