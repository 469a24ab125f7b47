//! Seeded random configurations for fuzzing the classifier against the rank.
//!
//! Each configuration gets its own ChaCha stream derived from `(seed, index)`, so a batch is
//! reproducible regardless of how it is split across threads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::facesplit::{z_rank, Config};
use crate::linalg::{int, QMatrix, Rat};
use crate::projective::{conic_through_5, general_position_p2, Homography, PointP2};
use crate::synthesis::sixth_pair;

const COORD: i64 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Generic,
    CollinearSide,
    PlantedCoincidence,
    PlantedHomography,
    PlantedDegenerate,
}

impl Regime {
    pub const ALL: [Regime; 5] = [
        Regime::Generic,
        Regime::CollinearSide,
        Regime::PlantedCoincidence,
        Regime::PlantedHomography,
        Regime::PlantedDegenerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::Generic => "generic",
            Regime::CollinearSide => "collinear-side",
            Regime::PlantedCoincidence => "planted-coincidence",
            Regime::PlantedHomography => "planted-homography",
            Regime::PlantedDegenerate => "planted-degenerate",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Regime::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown regime `{s}`"))
    }
}

/// The random stream for configuration number `index` of a run seeded with `seed`.
pub fn config_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Configuration number `index` of a seeded run.
pub fn sample_indexed(regime: Regime, k: usize, seed: u64, index: u64) -> Config {
    sample(regime, k, &mut config_rng(seed, index))
}

fn point<R: Rng>(rng: &mut R) -> PointP2 {
    loop {
        let c: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-COORD..=COORD));
        if c.iter().any(|&v| v != 0) {
            return PointP2::of(c);
        }
    }
}

fn points<R: Rng>(rng: &mut R, k: usize) -> Vec<PointP2> {
    (0..k).map(|_| point(rng)).collect()
}

fn combo(a: &PointP2, b: &PointP2, s: i64, t: i64) -> Option<PointP2> {
    let v: Vec<BigInt> = (0..3)
        .map(|i| &a.coords()[i] * s + &b.coords()[i] * t)
        .collect();
    PointP2::from_ints(&v).ok()
}

fn two_distinct<R: Rng>(rng: &mut R) -> (PointP2, PointP2) {
    loop {
        let (a, b) = (point(rng), point(rng));
        if a != b {
            return (a, b);
        }
    }
}

/// `k` points on a random line.
fn on_line<R: Rng>(rng: &mut R, k: usize) -> Vec<PointP2> {
    let (a, b) = two_distinct(rng);
    (0..k)
        .map(|_| loop {
            let (s, t) = (rng.gen_range(-5..=5), rng.gen_range(-5..=5));
            if let Some(p) = combo(&a, &b, s, t) {
                break p;
            }
        })
        .collect()
}

fn build(xs: &[PointP2], ys: &[PointP2]) -> Config {
    Config::from_sides(xs, ys).expect("size in range")
}

fn homography<R: Rng>(rng: &mut R) -> Homography {
    loop {
        let m =
            QMatrix::new(3, 3, (0..9).map(|_| int(rng.gen_range(-4..=4))).collect()).expect("3x3");
        if let Ok(h) = Homography::new(&m) {
            return h;
        }
    }
}

/// A random configuration of `k` pairs (2 to 6) in the given regime.
pub fn sample<R: Rng>(regime: Regime, k: usize, rng: &mut R) -> Config {
    assert!((2..=6).contains(&k), "k out of range");
    match regime {
        Regime::Generic => build(&points(rng, k), &points(rng, k)),
        Regime::CollinearSide => {
            let c = build(&points(rng, k), &on_line(rng, k));
            if rng.gen_bool(0.5) {
                c.swap_sides()
            } else {
                c
            }
        }
        Regime::PlantedCoincidence => planted_coincidence(rng, k),
        Regime::PlantedHomography => {
            let h = homography(rng);
            let xs = points(rng, k);
            let mut ys: Vec<PointP2> = xs.iter().map(|x| h.apply(x)).collect();
            if rng.gen_bool(0.3) {
                let i = rng.gen_range(0..k);
                ys[i] = point(rng);
            }
            build(&xs, &ys)
        }
        Regime::PlantedDegenerate => planted_degenerate(rng, k),
    }
}

fn planted_coincidence<R: Rng>(rng: &mut R, k: usize) -> Config {
    let mut xs = points(rng, k);
    let mut ys = if rng.gen_bool(0.3) {
        on_line(rng, k)
    } else {
        points(rng, k)
    };
    let mut idx: Vec<usize> = (0..k).collect();
    idx.shuffle(rng);
    match rng.gen_range(0..4) {
        0 => {
            xs[idx[1]] = xs[idx[0]].clone();
            ys[idx[1]] = ys[idx[0]].clone();
        }
        1 => {
            let n = rng.gen_range(2..=k);
            for &i in &idx[1..n] {
                xs[i] = xs[idx[0]].clone();
            }
        }
        2 => {
            for &i in &idx[1..k.min(3)] {
                xs[i] = xs[idx[0]].clone();
            }
            let line = on_line(rng, k);
            for &i in &idx[..k.min(3)] {
                ys[i] = line[i].clone();
            }
        }
        _ => {
            xs[idx[1]] = xs[idx[0]].clone();
            if k > 2 {
                ys[idx[2]] = ys[idx[0]].clone();
            }
        }
    }
    let c = build(&xs, &ys);
    if rng.gen_bool(0.5) {
        c.swap_sides()
    } else {
        c
    }
}

/// A configuration that is rank deficient by construction.
pub fn planted_degenerate<R: Rng>(rng: &mut R, k: usize) -> Config {
    for _ in 0..64 {
        let c = match k {
            2 => {
                let (x, y) = (point(rng), point(rng));
                build(&[x.clone(), x], &[y.clone(), y])
            }
            3 => {
                let x = point(rng);
                build(&[x.clone(), x.clone(), x], &on_line(rng, 3))
            }
            4 => {
                // Both sides on lines, matched by a homography of P^1.
                let (a, b) = two_distinct(rng);
                let (p, q) = two_distinct(rng);
                let m: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-4..=4));
                let params: Vec<(i64, i64)> = (0..4)
                    .map(|_| (rng.gen_range(-5..=5), rng.gen_range(-5..=5)))
                    .collect();
                let xs: Option<Vec<PointP2>> =
                    params.iter().map(|&(s, t)| combo(&a, &b, s, t)).collect();
                let ys: Option<Vec<PointP2>> = params
                    .iter()
                    .map(|&(s, t)| combo(&p, &q, m[0] * s + m[1] * t, m[2] * s + m[3] * t))
                    .collect();
                match (xs, ys) {
                    (Some(xs), Some(ys)) => build(&xs, &ys),
                    _ => continue,
                }
            }
            5 => match planted_k5(rng) {
                Some(c) => c,
                None => continue,
            },
            _ => match planted_k6(rng) {
                Some(c) => c,
                None => continue,
            },
        };
        let c = if rng.gen_bool(0.5) { c.swap_sides() } else { c };
        if z_rank(&c) < k {
            return c;
        }
    }
    // Practically unreachable; a repeated pair is always deficient.
    let mut xs = points(rng, k);
    let mut ys = points(rng, k);
    xs[1] = xs[0].clone();
    ys[1] = ys[0].clone();
    build(&xs, &ys)
}

/// Rows of a random 2x3 map with kernel `c`.
fn map_with_center<R: Rng>(rng: &mut R, c: &PointP2) -> Option<QMatrix> {
    let perp = QMatrix::from_rows(vec![c.to_rats().to_vec()]).null_space();
    let row = |rng: &mut R| -> Vec<Rat> {
        let (s, t) = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        (0..3)
            .map(|i| Rat::from_integer(&perp[0][i] * s + &perp[1][i] * t))
            .collect()
    };
    let t = QMatrix::from_rows(vec![row(rng), row(rng)]);
    (t.rank() == 2).then_some(t)
}

/// Sends the P^1 image of `x` under `t` to the line through `a` and `b`.
fn image_on_line(t: &QMatrix, x: &PointP2, a: &PointP2, b: &PointP2) -> Option<PointP2> {
    let v = t.mul_vec(&x.to_rats());
    let r: Vec<Rat> = (0..3)
        .map(|i| {
            &v[0] * Rat::from_integer(a.coords()[i].clone())
                + &v[1] * Rat::from_integer(b.coords()[i].clone())
        })
        .collect();
    PointP2::from_slice(&r).ok()
}

fn planted_k5<R: Rng>(rng: &mut R) -> Option<Config> {
    // A projection centered at a further point of the conic through the x points.
    let mut xs = points(rng, 4);
    let c = point(rng);
    let refs: Vec<&PointP2> = xs.iter().chain([&c]).collect();
    if !general_position_p2(&refs) {
        return None;
    }
    let omega = conic_through_5([refs[0], refs[1], refs[2], refs[3], refs[4]]).ok()?;
    let extra = omega.rational_points(&c, &refs, 3);
    xs.push(extra.get(rng.gen_range(0..extra.len().max(1)))?.clone());
    let t = map_with_center(rng, &c)?;
    let (a, b) = two_distinct(rng);
    let ys: Option<Vec<PointP2>> = xs.iter().map(|x| image_on_line(&t, x, &a, &b)).collect();
    Some(build(&xs, &ys?))
}

fn planted_k6<R: Rng>(rng: &mut R) -> Option<Config> {
    if rng.gen_bool(0.5) {
        let c = build(&points(rng, 5), &points(rng, 5));
        let p = sixth_pair(&c).ok()?;
        return c.with_pair(p).ok();
    }
    // Line case: y_i = T x_i on a line for any rank-2 map T.
    let xs = points(rng, 6);
    let center = point(rng);
    let t = map_with_center(rng, &center)?;
    let (a, b) = two_distinct(rng);
    let ys: Option<Vec<PointP2>> = xs.iter().map(|x| image_on_line(&t, x, &a, &b)).collect();
    Some(build(&xs, &ys?))
}

/// Outcome of checking one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzOutcome {
    pub index: u64,
    pub config: Config,
    pub deficient: bool,
    pub unexplained: bool,
    pub contradicted: bool,
    /// Some listed condition failed to re-verify.
    pub unverified: bool,
}

impl FuzzOutcome {
    pub fn violation(&self) -> bool {
        self.unexplained || self.contradicted || self.unverified
    }
}

/// Classifies configuration number `index` and compares with the rank.
pub fn fuzz_one(regime: Regime, k: usize, seed: u64, index: u64) -> FuzzOutcome {
    let config = sample_indexed(regime, k, seed, index);
    let r = crate::classify::classify(&config);
    let unverified = !r.conditions.iter().all(|c| c.verify(&config));
    FuzzOutcome {
        index,
        deficient: r.deficient,
        unexplained: r.unexplained,
        contradicted: r.contradicted,
        unverified,
        config,
    }
}
