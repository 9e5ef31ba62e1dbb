//! Dense real polynomials in one and two variables.
//!
//! Bivariate polynomials are stored as a full (n+1)×(n+1) coefficient grid
//! (degrees here never exceed ~18, so the quadratic storage is irrelevant).
//! Evaluation is Horner in one variable at a time, and differentiation is
//! exact coefficient shifting. Products of linear factors are expanded by
//! iterated multiply-accumulate, optionally with compensated (two-product /
//! two-sum) accumulation.

use crate::error::Error;
use crate::Result;

/// Accumulation mode for product expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    /// Error-free transformation (fma two-product + Knuth two-sum) carried
    /// through the whole expansion; the compensation is folded in at the end.
    Compensated,
}

impl std::str::FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(Precision::Double),
            "compensated" => Ok(Precision::Compensated),
            other => Err(Error::Parse(format!("unknown precision mode `{other}`"))),
        }
    }
}

/// A linear form `a·x + b·y + c`, kept exactly as constructed (the arrangement
/// products are scale-sensitive, so no normalization happens here).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LinearForm {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        LinearForm { a, b, c }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.a * x + self.b * y + self.c
    }

    /// Substitute `(u, v) = M·(x, y) + t` into this form (read as a form in
    /// `(u, v)`), producing the composed form in `(x, y)`.
    pub fn compose_affine(&self, m: [[f64; 2]; 2], t: (f64, f64)) -> LinearForm {
        LinearForm {
            a: self.a * m[0][0] + self.b * m[1][0],
            b: self.a * m[0][1] + self.b * m[1][1],
            c: self.a * t.0 + self.b * t.1 + self.c,
        }
    }
}

// ---------------------------------------------------------------------------
// Bivariate polynomials
// ---------------------------------------------------------------------------

/// Dense bivariate polynomial; `coeff(i, j)` multiplies `x^i y^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BivarPoly {
    order: usize,
    c: Vec<f64>,
}

impl BivarPoly {
    pub fn zero(order: usize) -> Self {
        BivarPoly {
            order,
            c: vec![0.0; (order + 1) * (order + 1)],
        }
    }

    pub fn constant(v: f64) -> Self {
        let mut p = BivarPoly::zero(0);
        p.c[0] = v;
        p
    }

    /// Build from explicit terms; order is the max power seen.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Self {
        let order = terms.iter().map(|&(i, j, _)| i.max(j)).max().unwrap_or(0);
        let mut p = BivarPoly::zero(order);
        for &(i, j, v) in terms {
            *p.coeff_mut(i, j) += v;
        }
        p
    }

    /// Expand `prefactor · Π factors` by iterated multiply-accumulate.
    pub fn from_linear_factors(
        prefactor: f64,
        factors: &[LinearForm],
        precision: Precision,
    ) -> Self {
        match precision {
            Precision::Double => Self::expand_double(prefactor, factors),
            Precision::Compensated => Self::expand_compensated(prefactor, factors),
        }
    }

    fn expand_double(prefactor: f64, factors: &[LinearForm]) -> Self {
        let n = factors.len();
        let mut p = BivarPoly::zero(n);
        p.c[0] = prefactor;
        let w = n + 1;
        for f in factors {
            // In-place multiply by a·x + b·y + c, descending so sources are
            // still untouched when read.
            for i in (0..w).rev() {
                for j in (0..w).rev() {
                    let mut v = f.c * p.c[i * w + j];
                    if i > 0 {
                        v += f.a * p.c[(i - 1) * w + j];
                    }
                    if j > 0 {
                        v += f.b * p.c[i * w + j - 1];
                    }
                    p.c[i * w + j] = v;
                }
            }
        }
        p
    }

    fn expand_compensated(prefactor: f64, factors: &[LinearForm]) -> Self {
        let n = factors.len();
        let w = n + 1;
        let mut s = vec![0.0f64; w * w];
        let mut e = vec![0.0f64; w * w];
        s[0] = prefactor;
        for f in factors {
            let mut ns = vec![0.0f64; w * w];
            let mut ne = vec![0.0f64; w * w];
            for i in 0..w {
                for j in 0..w {
                    let idx = i * w + j;
                    let mut acc = 0.0f64;
                    let mut err = 0.0f64;
                    let mut push = |coef: f64, src: usize| {
                        let (p, pe) = two_prod(coef, s[src]);
                        let (t, te) = two_sum(acc, p);
                        acc = t;
                        err += te + pe + coef * e[src];
                    };
                    push(f.c, idx);
                    if i > 0 {
                        push(f.a, idx - w);
                    }
                    if j > 0 {
                        push(f.b, idx - 1);
                    }
                    ns[idx] = acc;
                    ne[idx] = err;
                }
            }
            s = ns;
            e = ne;
        }
        let c = s.iter().zip(&e).map(|(a, b)| a + b).collect();
        BivarPoly { order: n, c }
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i <= self.order && j <= self.order {
            self.c[i * (self.order + 1) + j]
        } else {
            0.0
        }
    }

    pub fn coeff_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        assert!(i <= self.order && j <= self.order);
        &mut self.c[i * (self.order + 1) + j]
    }

    /// Largest total degree carrying a coefficient above 1e-9 of the largest.
    pub fn degree(&self) -> usize {
        let cutoff = 1e-9 * self.coeff_scale();
        let w = self.order + 1;
        let mut deg = 0;
        for i in 0..w {
            for j in 0..w {
                if self.c[i * w + j].abs() > cutoff && i + j > deg {
                    deg = i + j;
                }
            }
        }
        deg
    }

    /// Max absolute coefficient.
    pub fn coeff_scale(&self) -> f64 {
        self.c.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Horner evaluation, outer in x, inner in y.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let w = self.order + 1;
        let mut acc = 0.0;
        for i in (0..w).rev() {
            let row = &self.c[i * w..(i + 1) * w];
            let mut r = 0.0;
            for &cj in row.iter().rev() {
                r = r * y + cj;
            }
            acc = acc * x + r;
        }
        acc
    }

    pub fn dx(&self) -> BivarPoly {
        let w = self.order + 1;
        let mut q = BivarPoly::zero(self.order);
        for i in 1..w {
            for j in 0..w {
                q.c[(i - 1) * w + j] = i as f64 * self.c[i * w + j];
            }
        }
        q
    }

    pub fn dy(&self) -> BivarPoly {
        let w = self.order + 1;
        let mut q = BivarPoly::zero(self.order);
        for i in 0..w {
            for j in 1..w {
                q.c[i * w + j - 1] = j as f64 * self.c[i * w + j];
            }
        }
        q
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        (self.dx().eval(x, y), self.dy().eval(x, y))
    }

    pub fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let dx = self.dx();
        let dy = self.dy();
        let hxx = dx.dx().eval(x, y);
        let hxy = dx.dy().eval(x, y);
        let hyy = dy.dy().eval(x, y);
        [[hxx, hxy], [hxy, hyy]]
    }

    pub fn scale(&self, k: f64) -> BivarPoly {
        let mut q = self.clone();
        for v in &mut q.c {
            *v *= k;
        }
        q
    }

    pub fn add(&self, other: &BivarPoly) -> BivarPoly {
        let order = self.order.max(other.order);
        let mut q = BivarPoly::zero(order);
        for i in 0..=order {
            for j in 0..=order {
                *q.coeff_mut(i, j) = self.coeff(i, j) + other.coeff(i, j);
            }
        }
        q
    }

    pub fn sub(&self, other: &BivarPoly) -> BivarPoly {
        self.add(&other.scale(-1.0))
    }

    pub fn add_constant(&self, k: f64) -> BivarPoly {
        let mut q = self.clone();
        q.c[0] += k;
        q
    }

    /// `p(x, -y)`: negate coefficients of odd y-powers.
    pub fn flip_y(&self) -> BivarPoly {
        let w = self.order + 1;
        let mut q = self.clone();
        for i in 0..w {
            for j in (1..w).step_by(2) {
                q.c[i * w + j] = -q.c[i * w + j];
            }
        }
        q
    }

    /// Restriction to the x-axis as a univariate polynomial in x.
    pub fn restrict_y0(&self) -> UnivarPoly {
        let w = self.order + 1;
        UnivarPoly::new((0..w).map(|i| self.c[i * w]).collect())
    }

    /// Restriction to the line through the origin with direction `angle`:
    /// `t ↦ p(t cos θ, t sin θ)`.
    pub fn restrict_direction(&self, angle: f64) -> UnivarPoly {
        let (s, c) = angle.sin_cos();
        let w = self.order + 1;
        let mut out = vec![0.0; 2 * self.order + 1];
        let mut cp = vec![1.0; w];
        let mut sp = vec![1.0; w];
        for k in 1..w {
            cp[k] = cp[k - 1] * c;
            sp[k] = sp[k - 1] * s;
        }
        for i in 0..w {
            for j in 0..w {
                let v = self.c[i * w + j];
                if v != 0.0 {
                    out[i + j] += v * cp[i] * sp[j];
                }
            }
        }
        UnivarPoly::new(out)
    }

    /// Iterate non-zero terms `(i, j, coeff)` in (i, j) order, pruning below
    /// `rel_cutoff` of the largest coefficient. This pruning is export-only;
    /// internal arithmetic always keeps everything.
    pub fn terms(&self, rel_cutoff: f64) -> Vec<(usize, usize, f64)> {
        let cut = rel_cutoff * self.coeff_scale();
        let w = self.order + 1;
        let mut out = Vec::new();
        for i in 0..w {
            for j in 0..w {
                let v = self.c[i * w + j];
                if v.abs() > cut {
                    out.push((i, j, v));
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Univariate polynomials
// ---------------------------------------------------------------------------

/// Coefficients by ascending power.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivarPoly {
    pub c: Vec<f64>,
}

impl UnivarPoly {
    pub fn new(c: Vec<f64>) -> Self {
        UnivarPoly { c }
    }

    pub fn zero() -> Self {
        UnivarPoly { c: vec![0.0] }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
    }

    pub fn derivative(&self) -> UnivarPoly {
        if self.c.len() <= 1 {
            return UnivarPoly::zero();
        }
        UnivarPoly::new(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(k, &v)| (k + 1) as f64 * v)
                .collect(),
        )
    }

    /// Degree with the leading coefficient required to be non-negligible
    /// relative to the largest (1e-12 relative).
    pub fn degree(&self) -> usize {
        let scale = self.coeff_scale();
        if scale == 0.0 {
            return 0;
        }
        for k in (0..self.c.len()).rev() {
            if self.c[k].abs() > 1e-12 * scale {
                return k;
            }
        }
        0
    }

    pub fn coeff_scale(&self) -> f64 {
        self.c.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, k: f64) -> UnivarPoly {
        UnivarPoly::new(self.c.iter().map(|v| v * k).collect())
    }

    pub fn add_constant(&self, k: f64) -> UnivarPoly {
        let mut q = self.clone();
        if q.c.is_empty() {
            q.c.push(k);
        } else {
            q.c[0] += k;
        }
        q
    }

    /// Cauchy bound on the magnitude of real roots.
    pub fn root_bound(&self) -> f64 {
        let d = self.degree();
        if d == 0 {
            return 1.0;
        }
        let lead = self.c[d].abs();
        let m = self.c[..d].iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        1.0 + m / lead
    }

    /// All real roots inside `[lo, hi]`, located by sign changes on a dense
    /// grid and polished by bisection. Intended for well-separated simple
    /// roots (derivatives of the polynomials in this crate).
    pub fn roots_in(&self, lo: f64, hi: f64, grid_n: usize) -> Vec<f64> {
        let mut out = Vec::new();
        let step = (hi - lo) / grid_n as f64;
        let mut prev_x = lo;
        let mut prev_v = self.eval(lo);
        for k in 1..=grid_n {
            let x = lo + k as f64 * step;
            let v = self.eval(x);
            if prev_v == 0.0 {
                out.push(prev_x);
            } else if prev_v * v < 0.0 {
                let (mut a, mut b) = (prev_x, x);
                let mut fa = prev_v;
                for _ in 0..100 {
                    let mid = 0.5 * (a + b);
                    let fm = self.eval(mid);
                    if fm == 0.0 {
                        a = mid;
                        b = mid;
                        break;
                    }
                    if fa * fm < 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                out.push(0.5 * (a + b));
            }
            prev_x = x;
            prev_v = v;
        }
        if self.eval(hi) == 0.0 {
            out.push(hi);
        }
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + a.abs()));
        out
    }
}

/// Chebyshev polynomial of the first kind, by the three-term recurrence.
/// Coefficients are integers (stored as f64, exact up to degree ~50).
pub fn chebyshev_t(m: usize) -> UnivarPoly {
    match m {
        0 => UnivarPoly::new(vec![1.0]),
        1 => UnivarPoly::new(vec![0.0, 1.0]),
        _ => {
            let mut t0 = vec![1.0];
            let mut t1 = vec![0.0, 1.0];
            for _ in 2..=m {
                let mut t2 = vec![0.0; t1.len() + 1];
                for (k, &v) in t1.iter().enumerate() {
                    t2[k + 1] += 2.0 * v;
                }
                for (k, &v) in t0.iter().enumerate() {
                    t2[k] -= v;
                }
                t0 = t1;
                t1 = t2;
            }
            UnivarPoly::new(t1)
        }
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}
