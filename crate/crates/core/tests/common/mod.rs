//! Independent dense-matrix oracle shared by the integration tests.
//!
//! Deliberately avoids the library's linear algebra: plain row-major
//! vectors, Kronecker products by index arithmetic and a Taylor
//! scaling-and-squaring exponential.

#![allow(dead_code)]

use num_complex::Complex64 as C64;
use objectivity::{ComplexMatrix, DensityMatrix, TensorSpace};
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<C64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[[C64; 2]; 2]) -> Self {
        Self { n: 2, a: vec![rows[0][0], rows[0][1], rows[1][0], rows[1][1]] }
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += x * o.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { n: self.n, a: self.a.iter().map(|x| x * s).collect() }
    }

    pub fn dagger(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.a[j * n + i] = self.a[i * n + j].conj();
            }
        }
        out
    }

    pub fn kron(&self, o: &Self) -> Self {
        let (n, m) = (self.n, o.n);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        out.a[(i * m + k) * n * m + j * m + l] = self.a[i * n + j] * o.a[k * m + l];
                    }
                }
            }
        }
        out
    }

    fn norm1(&self) -> f64 {
        (0..self.n).map(|i| (0..self.n).map(|j| self.at(i, j).norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// `exp(-i h t)` by Taylor series after scaling, then repeated squaring.
    pub fn exp_minus_i(h: &Self, t: f64) -> Self {
        let x = h.scale(C64::new(0.0, -t));
        let mut squarings = 0;
        let mut scale = 1.0;
        while x.norm1() * scale > 0.25 {
            scale *= 0.5;
            squarings += 1;
        }
        let x = x.scale(C64::new(scale, 0.0));
        let mut term = Self::identity(h.n);
        let mut sum = Self::identity(h.n);
        for k in 1..=24 {
            term = term.mul(&x).scale(C64::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum);
        }
        sum
    }

    /// Trace out the trailing factor of dimension `d_tail`.
    pub fn trace_tail(&self, d_tail: usize) -> Self {
        let keep = self.n / d_tail;
        let mut out = Self::zeros(keep);
        for i in 0..keep {
            for j in 0..keep {
                let mut s = C64::new(0.0, 0.0);
                for k in 0..d_tail {
                    s += self.a[(i * d_tail + k) * self.n + j * d_tail + k];
                }
                out.a[i * keep + j] = s;
            }
        }
        out
    }

    pub fn max_diff(&self, m: &ComplexMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self.at(i, j) - m.get(i, j)).norm());
            }
        }
        worst
    }

    pub fn from_library(m: &ComplexMatrix) -> Self {
        let n = m.rows();
        Self { n, a: (0..n * n).map(|k| m.get(k / n, k % n)).collect() }
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn sx() -> Dense {
    Dense::from_rows(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn sy() -> Dense {
    Dense::from_rows(&[[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn sz() -> Dense {
    Dense::from_rows(&[[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
}

/// Single-qubit operators placed on chosen sites of an `n_sites`-qubit
/// register (site 0 is the leftmost, slowest index).
pub fn on_sites(n_sites: usize, ops: &[(usize, Dense)]) -> Dense {
    let mut out = Dense::identity(1);
    for site in 0..n_sites {
        let factor = ops.iter().find(|(s, _)| *s == site).map_or_else(|| Dense::identity(2), |(_, o)| o.clone());
        out = out.kron(&factor);
    }
    out
}

/// Random density matrix `G G† / tr` on `space`; `rank` columns of `G`.
pub fn random_state<R: Rng>(rng: &mut R, space: TensorSpace, rank: usize) -> DensityMatrix {
    let d = space.total_dim();
    let g: Vec<C64> = (0..d * rank).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let mut m = ComplexMatrix::from_fn(d, d, |i, j| (0..rank).map(|k| g[i * rank + k] * g[j * rank + k].conj()).sum());
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr);
    DensityMatrix::new(space, m.hermitian_part()).expect("random state is valid")
}

/// Random Hermitian matrix with entries in the unit square.
pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    m.hermitian_part()
}
