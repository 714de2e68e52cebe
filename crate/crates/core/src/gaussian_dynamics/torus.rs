//! Popa's deformation of `L^∞(𝕋²)`: `u = e^{2πix}`, `v = e^{2πiy}`,
//! `w = ūv = e^{πih}` with `h ∈ [−1, 1)`. The flow `α_t(f) = f∘φ_t`,
//! `φ_t(x, y) = (x + th/2, y + th/2)`, gives `α_t(u) = w^t u`, `α_t(v) = w^t v`;
//! the symmetry `β(f) = f∘ψ`, `ψ(x, y) = (x, 2x − y)`, gives `β(u) = u`,
//! `β(v) = u²v̄`.
//!
//! Samples sit at `x_i = i/n`, `y_j = (j + ½)/n`, so `y − x` is never `½`
//! modulo 1 and no sample lies on the cut `w = −1` of `h`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TorusGrid {
    n: usize,
}

impl TorusGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!("torus grid size must be a power of two ≥ 64, got {n}")));
        }
        Ok(TorusGrid { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n as f64;
        (0..self.n).flat_map(move |i| (0..self.n).map(move |j| (i as f64 / n, (j as f64 + 0.5) / n)))
    }
}

/// `h(x, y) = 2(y − x)` reduced to `[−1, 1)`.
fn h(x: f64, y: f64) -> f64 {
    let r = (2.0 * (y - x)).rem_euclid(2.0);
    if r >= 1.0 {
        r - 2.0
    } else {
        r
    }
}

fn phi(t: f64, (x, y): (f64, f64)) -> (f64, f64) {
    let shift = t * h(x, y) / 2.0;
    (x + shift, y + shift)
}

fn psi((x, y): (f64, f64)) -> (f64, f64) {
    (x, 2.0 * x - y)
}

/// `u^a v^b` at a point.
fn monomial(a: i32, b: i32, (x, y): (f64, f64)) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (a as f64 * x + b as f64 * y))
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusReport {
    pub n: usize,
    pub t: f64,
    /// `max |β²(f) − f|` over sampled monomials.
    pub beta_involution: f64,
    /// `max |α_t(β(f)) − β(α_{−t}(f))|` over monomials `u^a v^b`, `|a|, |b| ≤ 2`.
    pub alpha_beta: f64,
    /// `max |α_1(u) − v|`.
    pub alpha_one_u_is_v: f64,
    /// `max_{x, 1 ≤ n ≤ 4} |mean_y α_1(uⁿ)(x, y)|`; zero iff `α_1(uⁿ)` is
    /// orthogonal to every function of `x`.
    pub alpha_one_orthogonality: f64,
    /// `max |mean(w^t uⁿ)|` over `1 ≤ n ≤ 3`, plus `n = 0` when `t` is a
    /// non-zero integer (the mean of `w^t` is `sin(πt)/(πt)`).
    pub haar_mean: f64,
}

impl TorusReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.beta_involution,
            self.alpha_beta,
            self.alpha_one_u_is_v,
            self.alpha_one_orthogonality,
            self.haar_mean,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn torus_deformation(grid: TorusGrid, t: f64) -> TorusReport {
    let monomials: Vec<(i32, i32)> = (-2..=2).flat_map(|a| (-2..=2).map(move |b| (a, b))).collect();
    let mut beta_involution: f64 = 0.0;
    let mut alpha_beta: f64 = 0.0;
    let mut alpha_one_u_is_v: f64 = 0.0;
    for p in grid.points() {
        for &(a, b) in &monomials {
            let f = monomial(a, b, p);
            beta_involution = beta_involution.max((monomial(a, b, psi(psi(p))) - f).norm());
            // α_t(β f) = f∘ψ∘φ_t and β(α_{−t} f) = f∘φ_{−t}∘ψ
            let lhs = monomial(a, b, psi(phi(t, p)));
            let rhs = monomial(a, b, phi(-t, psi(p)));
            alpha_beta = alpha_beta.max((lhs - rhs).norm());
        }
        alpha_one_u_is_v = alpha_one_u_is_v.max((monomial(1, 0, phi(1.0, p)) - monomial(0, 1, p)).norm());
    }

    let n = grid.n;
    let mut alpha_one_orthogonality: f64 = 0.0;
    for power in 1..=4 {
        for i in 0..n {
            let x = i as f64 / n as f64;
            let mean: Complex64 = (0..n)
                .map(|j| monomial(power, 0, phi(1.0, (x, (j as f64 + 0.5) / n as f64))))
                .sum::<Complex64>()
                / n as f64;
            alpha_one_orthogonality = alpha_one_orthogonality.max(mean.norm());
        }
    }

    let w_t = |p: (f64, f64)| Complex64::from_polar(1.0, PI * t * h(p.0, p.1));
    let count = (n * n) as f64;
    let mut haar_mean: f64 = 0.0;
    let mut powers: Vec<i32> = vec![1, 2, 3];
    if t != 0.0 && t.fract() == 0.0 {
        powers.push(0);
    }
    for power in powers {
        let mean: Complex64 = grid.points().map(|p| w_t(p) * monomial(power, 0, p)).sum::<Complex64>() / count;
        haar_mean = haar_mean.max(mean.norm());
    }

    TorusReport {
        n,
        t,
        beta_involution,
        alpha_beta,
        alpha_one_u_is_v,
        alpha_one_orthogonality,
        haar_mean,
    }
}
