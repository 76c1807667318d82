use faer::Mat;
use rand_xoshiro::rand_core::{Rng, SeedableRng};

use super::{NareProblem, ProblemKind, ProblemMetadata};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// splitmix64 stream; doubles take the top 53 bits of each output.
#[derive(Clone, Debug)]
pub struct SplitMix64(rand_xoshiro::SplitMix64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self(rand_xoshiro::SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-1, 1)`.
    pub fn next_signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    /// `rows × cols` matrix filled column by column with `scale · U[-1, 1)`.
    pub fn fill(&mut self, rows: usize, cols: usize, scale: f64) -> Mat<f64> {
        let mut m = Mat::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = scale * self.next_signed();
            }
        }
        m
    }
}

/// Semi-discretized 1-D heat model on both sides of the equation.
///
/// `A = (n+1)²·tridiag(1, −2, 1)`, `E = tridiag(1/6, 4/6, 1/6)`, likewise `Â, Ê` on n̂.
/// `B, C, B̂, Ĉ` are drawn in that order from one splitmix64 stream, each column-major,
/// scaled by `1/√n` (`B`, `C`) or `1/√n̂` (`B̂`, `Ĉ`).
pub fn gen_heat(n: usize, nh: usize, m: usize, p: usize, seed: u64) -> Result<NareProblem> {
    if n < 2 || nh < 2 || m < 1 || p < 1 {
        return Err(Error::InvalidInput(format!(
            "gen_heat needs n, nh >= 2 and m, p >= 1 (got n={n}, nh={nh}, m={m}, p={p})"
        )));
    }
    let stiffness = |k: usize| {
        let h2 = ((k + 1) * (k + 1)) as f64;
        SparseMatrix::tridiagonal(k, h2, -2.0 * h2, h2)
    };
    let mass = |k: usize| SparseMatrix::tridiagonal(k, 1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0);

    let mut rng = SplitMix64::new(seed);
    let sn = 1.0 / (n as f64).sqrt();
    let snh = 1.0 / (nh as f64).sqrt();
    let b = rng.fill(n, m, sn);
    let c = rng.fill(p, n, sn);
    let bh = rng.fill(nh, p, snh);
    let ch = rng.fill(m, nh, snh);

    Ok(NareProblem {
        e: mass(n),
        a: stiffness(n),
        b,
        c,
        eh: mass(nh),
        ah: stiffness(nh),
        bh,
        ch,
        meta: ProblemMetadata {
            kind: ProblemKind::GeneratedHeat,
            seed: Some(seed),
            note: format!("heat n={n} nh={nh} m={m} p={p}"),
        },
    })
}
