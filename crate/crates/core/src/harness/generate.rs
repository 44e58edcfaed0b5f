use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{orient, Point, PointSet, MAX_POINTS};

/// Half-width of the coordinate box used by every mode.
pub const SPAN: i64 = 1000;

/// Rejected draws allowed per point before giving up.
const ATTEMPTS_PER_POINT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Points `(x, x^2)` with distinct `x` in `[-SPAN, SPAN]`. The parabola is
    /// strictly convex, so every point is a hull vertex.
    Convex,
    /// Uniform in `[-SPAN, SPAN]^2`.
    Random,
    /// Distinct cells of a square grid, each jittered by up to a third of
    /// the spacing.
    GridJitter,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Convex, Mode::Random, Mode::GridJitter];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Convex => "convex",
            Mode::Random => "random",
            Mode::GridJitter => "grid-jitter",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| GenerateError::UnknownMode(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("n = {n} is outside 3..={max}")]
    SizeOutOfRange { n: usize, max: usize },
    #[error("no general-position placement found after {0} draws")]
    BudgetExhausted(usize),
    #[error("unknown mode {0:?}; expected convex, random or grid-jitter")]
    UnknownMode(String),
}

/// Deterministic point set for `(n, seed, mode)`, in general position.
pub fn generate_instance(n: usize, seed: u64, mode: Mode) -> Result<PointSet, GenerateError> {
    if !(3..=MAX_POINTS).contains(&n) {
        return Err(GenerateError::SizeOutOfRange { n, max: MAX_POINTS });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = match mode {
        Mode::Convex => {
            let mut xs: Vec<i64> = sample(&mut rng, (2 * SPAN + 1) as usize, n).into_iter().map(|i| i as i64 - SPAN).collect();
            xs.sort_unstable();
            xs.into_iter().map(|x| Point::new(x, x * x)).collect()
        }
        Mode::Random => place(n, &mut rng, |rng, _| {
            Point::new(rng.random_range(-SPAN..=SPAN), rng.random_range(-SPAN..=SPAN))
        })?,
        Mode::GridJitter => {
            let side = (n as f64).sqrt().ceil() as usize;
            let spacing = 2 * SPAN / side as i64;
            let jitter = spacing / 3;
            let mut cells = sample(&mut rng, side * side, n).into_vec();
            cells.sort_unstable();
            place(n, &mut rng, |rng, i| {
                let (row, col) = ((cells[i] / side) as i64, (cells[i] % side) as i64);
                Point::new(
                    -SPAN + spacing / 2 + col * spacing + rng.random_range(-jitter..=jitter),
                    -SPAN + spacing / 2 + row * spacing + rng.random_range(-jitter..=jitter),
                )
            })?
        }
    };
    Ok(PointSet::new(points).expect("generated points are valid by construction"))
}

/// Draws point `i` until it is distinct from and not collinear with any
/// pair of the points placed so far.
fn place<F>(n: usize, rng: &mut ChaCha8Rng, mut draw: F) -> Result<Vec<Point>, GenerateError>
where
    F: FnMut(&mut ChaCha8Rng, usize) -> Point,
{
    let mut points: Vec<Point> = Vec::with_capacity(n);
    let mut draws = 0;
    for i in 0..n {
        loop {
            draws += 1;
            if draws > ATTEMPTS_PER_POINT * n {
                return Err(GenerateError::BudgetExhausted(draws - 1));
            }
            let p = draw(rng, i);
            let clash = points.contains(&p)
                || points.iter().enumerate().any(|(j, &a)| points[j + 1..].iter().any(|&b| orient(a, b, p) == 0));
            if !clash {
                points.push(p);
                break;
            }
        }
    }
    Ok(points)
}
