//! One- and two-variable real polynomials, the difference quotient
//! `δ(f)(x, y) = (f(x) − f(y))/(x − y)`, and the Ornstein–Uhlenbeck semigroup
//! on polynomials through the Hermite basis.

use serde::{Deserialize, Serialize};

/// `Σ c_k x^k`; trailing zeros are trimmed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyFunction {
    coeffs: Vec<f64>,
}

impl PolyFunction {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        PolyFunction { coeffs }
    }

    pub fn monomial(n: usize) -> Self {
        let mut c = vec![0.0; n + 1];
        c[n] = 1.0;
        PolyFunction { coeffs: c }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree, with `0` for constants and the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &PolyFunction) -> PolyFunction {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + other.coeffs.get(i).unwrap_or(&0.0))
            .collect();
        PolyFunction::new(c)
    }

    pub fn scale(&self, s: f64) -> PolyFunction {
        PolyFunction::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &PolyFunction) -> PolyFunction {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return PolyFunction::default();
        }
        let mut c = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        PolyFunction::new(c)
    }
}

/// `Σ c[a][b] x^a y^b`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Poly2 {
    coeffs: Vec<Vec<f64>>,
}

impl Poly2 {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Poly2 {
            coeffs: vec![vec![0.0; ny]; nx],
        }
    }

    pub fn in_x(f: &PolyFunction) -> Self {
        Poly2 {
            coeffs: f.coeffs.iter().map(|&c| vec![c]).collect(),
        }
    }

    pub fn in_y(f: &PolyFunction) -> Self {
        Poly2 {
            coeffs: vec![f.coeffs.clone()],
        }
    }

    pub fn coeff(&self, a: usize, b: usize) -> f64 {
        self.coeffs.get(a).and_then(|r| r.get(b)).copied().unwrap_or(0.0)
    }

    fn shape(&self) -> (usize, usize) {
        (self.coeffs.len(), self.coeffs.iter().map(Vec::len).max().unwrap_or(0))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, row| acc * x + row.iter().rev().fold(0.0, |r, c| r * y + c))
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let (ax, ay) = self.shape();
        let (bx, by) = other.shape();
        let mut out = Poly2::zeros(ax.max(bx), ay.max(by));
        for (a, row) in out.coeffs.iter_mut().enumerate() {
            for (b, c) in row.iter_mut().enumerate() {
                *c = self.coeff(a, b) + other.coeff(a, b);
            }
        }
        out
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let (ax, ay) = self.shape();
        let (bx, by) = other.shape();
        if ax * ay == 0 || bx * by == 0 {
            return Poly2::default();
        }
        let mut out = Poly2::zeros(ax + bx - 1, ay + by - 1);
        for a in 0..ax {
            for b in 0..ay {
                let c = self.coeff(a, b);
                if c == 0.0 {
                    continue;
                }
                for p in 0..bx {
                    for q in 0..by {
                        out.coeffs[a + p][b + q] += c * other.coeff(p, q);
                    }
                }
            }
        }
        out
    }

    /// `max |c_self − c_other|` over all coefficients.
    pub fn max_abs_diff(&self, other: &Poly2) -> f64 {
        let (ax, ay) = self.shape();
        let (bx, by) = other.shape();
        let mut m: f64 = 0.0;
        for a in 0..ax.max(bx) {
            for b in 0..ay.max(by) {
                m = m.max((self.coeff(a, b) - other.coeff(a, b)).abs());
            }
        }
        m
    }
}

/// `xⁿ ↦ Σ_{a+b=n−1} x^a y^b`, extended linearly.
pub fn difference_quotient(f: &PolyFunction) -> Poly2 {
    let n = f.coeffs.len();
    if n <= 1 {
        return Poly2::default();
    }
    let mut out = Poly2::zeros(n - 1, n - 1);
    for (k, &c) in f.coeffs.iter().enumerate().skip(1) {
        for a in 0..k {
            out.coeffs[a][k - 1 - a] += c;
        }
    }
    out
}

/// `max` coefficient gap in `δ(fg) = f(x)δ(g) + δ(f)g(y)`.
pub fn leibniz_residual(f: &PolyFunction, g: &PolyFunction) -> f64 {
    let lhs = difference_quotient(&f.mul(g));
    let rhs = Poly2::in_x(f)
        .mul(&difference_quotient(g))
        .add(&difference_quotient(f).mul(&Poly2::in_y(g)));
    lhs.max_abs_diff(&rhs)
}

/// The probabilists' Hermite polynomial `He_n`.
pub fn hermite(n: usize) -> PolyFunction {
    let mut prev = PolyFunction::constant(1.0);
    if n == 0 {
        return prev;
    }
    let mut cur = PolyFunction::monomial(1);
    for k in 1..n {
        let next = PolyFunction::monomial(1).mul(&cur).add(&prev.scale(-(k as f64)));
        prev = cur;
        cur = next;
    }
    cur
}

/// `Φ^t f` with `Φ^t He_k = e^{−kt} He_k`.
pub fn ou_poly(f: &PolyFunction, t: f64) -> PolyFunction {
    // peel off the leading Hermite component degree by degree
    let mut rest = f.clone();
    let mut out = PolyFunction::default();
    for k in (0..=f.degree()).rev() {
        let c = rest.coeffs.get(k).copied().unwrap_or(0.0);
        if c == 0.0 {
            continue;
        }
        let he = hermite(k).scale(c);
        rest = rest.add(&he.scale(-1.0));
        rest.coeffs.truncate(k);
        rest = PolyFunction::new(rest.coeffs);
        out = out.add(&he.scale((-(k as f64) * t).exp()));
    }
    out
}
