//! Seeded corpus generation.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`). A
//! uniform real in `[0, 1)` is `(next_u64() >> 11) * 2^-53`, and every draw
//! consumes values in the order written below, so corpora can be
//! reproduced by any implementation of the same generator.

use std::f64::consts::TAU;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use symdisc::polydisc::{symmetrize, PreimagePoint};
use symdisc::{binomial, Complex64, SymPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    /// `π_n` of a uniform point of the open polydisc.
    Interior,
    /// `π_n` of a uniform point of the torus.
    Torus,
    /// `π_n` of a polydisc point with one coordinate pushed to modulus in (1, 2].
    Exterior,
    /// Coordinates uniform in the box `|Re w_j|, |Im w_j| <= C(n, j)`.
    UniformBox,
}

impl SampleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleKind::Interior => "interior",
            SampleKind::Torus => "torus",
            SampleKind::Exterior => "exterior",
            SampleKind::UniformBox => "uniform-box",
        }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }

    /// Uniform (by area) in the disc of the given radius: radius first, then angle.
    pub fn disc(&mut self, radius: f64) -> Complex64 {
        let r = radius * self.unit().sqrt();
        Complex64::from_polar(r, TAU * self.unit())
    }

    pub fn circle(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.unit())
    }

    pub fn polydisc(&mut self, n: usize, radius: f64) -> Vec<Complex64> {
        (0..n).map(|_| self.disc(radius)).collect()
    }

    pub fn torus(&mut self, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| self.circle()).collect()
    }

    /// A polydisc point with one coordinate replaced by modulus `2 - u` in
    /// `(1, 2]`: draws the polydisc point, then the index, then `u`, then the
    /// angle.
    pub fn exterior_preimage(&mut self, n: usize) -> Vec<Complex64> {
        let mut z = self.polydisc(n, 1.0);
        let k = self.index(n);
        let modulus = 2.0 - self.unit();
        z[k] = Complex64::from_polar(modulus, TAU * self.unit());
        z
    }

    pub fn uniform_box(&mut self, n: usize) -> Vec<Complex64> {
        (1..=n)
            .map(|j| {
                let bound = binomial(n as u32, j as u32).expect("n is at most 16") as f64;
                let re = self.uniform(-bound, bound);
                let im = self.uniform(-bound, bound);
                Complex64::new(re, im)
            })
            .collect()
    }

    pub fn point(&mut self, kind: SampleKind, n: usize) -> SymPoint {
        let coords = match kind {
            SampleKind::Interior => return sym(self.polydisc(n, 1.0)),
            SampleKind::Torus => return sym(self.torus(n)),
            SampleKind::Exterior => return sym(self.exterior_preimage(n)),
            SampleKind::UniformBox => self.uniform_box(n),
        };
        SymPoint::new(coords).expect("box coordinates are finite")
    }
}

/// `π_n(z)` for a freshly drawn preimage.
pub fn sym(z: Vec<Complex64>) -> SymPoint {
    symmetrize(&PreimagePoint::new(z).expect("sampled preimage is valid")).expect("sampled preimage is valid")
}
