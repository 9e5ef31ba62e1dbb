//! Critical-point machinery: damped Newton polishing with Hessian
//! classification, a grid-seeded brute-force oracle, and the three-level
//! critical spectrum (saddles at the arrangement vertices, one minimum per
//! triangle, maxima in the bounded non-triangular faces).

pub mod candidates;
pub mod spectrum;

pub use candidates::{
    candidate_maxima, candidate_minima, chord_line, concurrence_report, generated_maxima,
    generated_minima, maxima_line_set, minima_line_set, xaxis_minima,
};
pub use spectrum::{c_spectrum, folding_spectrum, sigma_d_spectrum};

use crate::error::Error;
use crate::exec;
use crate::poly::BivarPoly;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Morse {
    Min,
    Saddle,
    Max,
}

impl Morse {
    pub fn as_str(&self) -> &'static str {
        match self {
            Morse::Min => "min",
            Morse::Saddle => "saddle",
            Morse::Max => "max",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CriticalPoint {
    pub location: (f64, f64),
    pub value: f64,
    pub morse: Morse,
    pub grad_norm: f64,
    pub hessian_det: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct PolishParams {
    pub max_iter: usize,
    /// Convergence when |∇p| < grad_tol_factor × (1 + coefficient scale).
    pub grad_tol_factor: f64,
}

impl Default for PolishParams {
    fn default() -> Self {
        PolishParams {
            max_iter: 50,
            grad_tol_factor: 1e-11,
        }
    }
}

/// Axis-aligned 2D box.
#[derive(Clone, Copy, Debug)]
pub struct Window2 {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window2 {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn around_points(points: impl IntoIterator<Item = (f64, f64)>, inflate: f64) -> Window2 {
        let mut x0 = f64::INFINITY;
        let mut x1 = f64::NEG_INFINITY;
        let mut y0 = f64::INFINITY;
        let mut y1 = f64::NEG_INFINITY;
        for (x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let cx = 0.5 * (x0 + x1);
        let cy = 0.5 * (y0 + y1);
        let hx = (0.5 * (x1 - x0)) * inflate + 1e-3;
        let hy = (0.5 * (y1 - y0)) * inflate + 1e-3;
        Window2 {
            x0: cx - hx,
            x1: cx + hx,
            y0: cy - hy,
            y1: cy + hy,
        }
    }
}

/// Cached first and second derivatives of a polynomial, for repeated
/// gradient/Hessian evaluation.
pub struct CriticalFinder<'a> {
    pub p: &'a BivarPoly,
    px: BivarPoly,
    py: BivarPoly,
    pxx: BivarPoly,
    pxy: BivarPoly,
    pyy: BivarPoly,
    scale: f64,
}

impl<'a> CriticalFinder<'a> {
    pub fn new(p: &'a BivarPoly) -> Self {
        let px = p.dx();
        let py = p.dy();
        CriticalFinder {
            pxx: px.dx(),
            pxy: px.dy(),
            pyy: py.dy(),
            px,
            py,
            scale: 1.0 + p.coeff_scale(),
            p,
        }
    }

    pub fn grad(&self, x: f64, y: f64) -> (f64, f64) {
        (self.px.eval(x, y), self.py.eval(x, y))
    }

    pub fn hessian(&self, x: f64, y: f64) -> (f64, f64, f64) {
        (
            self.pxx.eval(x, y),
            self.pxy.eval(x, y),
            self.pyy.eval(x, y),
        )
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Damped Newton iteration on ∇p. The step is halved while |∇p| fails to
    /// decrease (high-degree products have steep walls near the lines).
    pub fn polish(&self, guess: (f64, f64), params: &PolishParams) -> Result<CriticalPoint> {
        let tol = params.grad_tol_factor * self.scale;
        let (mut x, mut y) = guess;
        let (mut gx, mut gy) = self.grad(x, y);
        let mut gn = gx.hypot(gy);
        for iter in 0..params.max_iter {
            if gn <= tol {
                return self.classify(x, y, gn);
            }
            let (hxx, hxy, hyy) = self.hessian(x, y);
            let det = hxx * hyy - hxy * hxy;
            let hscale = hxx.abs().max(hxy.abs()).max(hyy.abs()).max(1e-300);
            let (sx, sy) = if det.abs() > 1e-14 * hscale * hscale {
                ((hyy * gx - hxy * gy) / det, (hxx * gy - hxy * gx) / det)
            } else {
                // gradient fallback when the Hessian is numerically singular
                (gx / hscale, gy / hscale)
            };
            let mut t = 1.0;
            let mut advanced = false;
            for _ in 0..30 {
                let (nx, ny) = (x - t * sx, y - t * sy);
                let (ngx, ngy) = self.grad(nx, ny);
                let ngn = ngx.hypot(ngy);
                if ngn < gn {
                    x = nx;
                    y = ny;
                    gx = ngx;
                    gy = ngy;
                    gn = ngn;
                    advanced = true;
                    break;
                }
                t *= 0.5;
            }
            if !advanced {
                return Err(Error::NoConvergence {
                    iters: iter + 1,
                    x,
                    y,
                    grad_norm: gn,
                });
            }
        }
        if gn <= tol {
            return self.classify(x, y, gn);
        }
        Err(Error::NoConvergence {
            iters: params.max_iter,
            x,
            y,
            grad_norm: gn,
        })
    }

    fn classify(&self, x: f64, y: f64, gn: f64) -> Result<CriticalPoint> {
        let (hxx, hxy, hyy) = self.hessian(x, y);
        let det = hxx * hyy - hxy * hxy;
        let threshold = 1e-8 * self.scale * self.scale;
        if det.abs() <= threshold {
            return Err(Error::DegeneratePoint {
                x,
                y,
                det,
                threshold,
            });
        }
        let morse = if det > 0.0 {
            if hxx > 0.0 {
                Morse::Min
            } else {
                Morse::Max
            }
        } else {
            Morse::Saddle
        };
        Ok(CriticalPoint {
            location: (x, y),
            value: self.p.eval(x, y),
            morse,
            grad_norm: gn,
            hessian_det: det,
        })
    }
}

/// Convenience wrapper around [`CriticalFinder::polish`].
pub fn polish_critical(p: &BivarPoly, guess: (f64, f64)) -> Result<CriticalPoint> {
    CriticalFinder::new(p).polish(guess, &PolishParams::default())
}

/// Polish a batch of guesses (parallel when enabled), results in input order.
pub fn polish_batch(
    p: &BivarPoly,
    guesses: &[(f64, f64)],
    params: &PolishParams,
) -> Vec<Result<CriticalPoint>> {
    let finder = CriticalFinder::new(p);
    exec::map_slice(guesses, |&g| finder.polish(g, params))
}

/// Grid-seeded brute-force critical-point oracle: Newton is started from
/// every grid cell whose corner gradient signs admit a zero of ∇p, converged
/// points inside the window are deduplicated within 1e-7 and returned sorted
/// by location.
pub fn brute_force_critical(
    p: &BivarPoly,
    window: Window2,
    grid_n: usize,
) -> Result<Vec<CriticalPoint>> {
    if grid_n < 64 {
        return Err(Error::Domain(format!(
            "brute_force_critical needs grid_n >= 64, got {grid_n}"
        )));
    }
    let finder = CriticalFinder::new(p);
    let nx = grid_n + 1;
    let xs: Vec<f64> = (0..nx)
        .map(|i| window.x0 + (window.x1 - window.x0) * i as f64 / grid_n as f64)
        .collect();
    let ys: Vec<f64> = (0..nx)
        .map(|j| window.y0 + (window.y1 - window.y0) * j as f64 / grid_n as f64)
        .collect();
    // corner gradients, by row
    let rows = exec::map_range(nx, |i| {
        let x = xs[i];
        ys.iter().map(|&y| finder.grad(x, y)).collect::<Vec<_>>()
    });
    let mut seeds = Vec::new();
    for i in 0..grid_n {
        for j in 0..grid_n {
            let corners = [rows[i][j], rows[i + 1][j], rows[i][j + 1], rows[i + 1][j + 1]];
            let sign_change = |pick: fn((f64, f64)) -> f64| {
                let mut pos = false;
                let mut neg = false;
                for &c in &corners {
                    let v = pick(c);
                    pos |= v > 0.0;
                    neg |= v < 0.0;
                }
                pos && neg
            };
            if sign_change(|g| g.0) && sign_change(|g| g.1) {
                seeds.push((0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])));
            }
        }
    }
    let params = PolishParams::default();
    let polished = exec::map_slice(&seeds, |&s| finder.polish(s, &params));
    let mut found: Vec<CriticalPoint> = polished
        .into_iter()
        .flatten()
        .filter(|cp| window.contains(cp.location.0, cp.location.1))
        .collect();
    found.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap());
    let mut out: Vec<CriticalPoint> = Vec::new();
    'next: for cp in found {
        for kept in &out {
            let d = (cp.location.0 - kept.location.0).hypot(cp.location.1 - kept.location.1);
            if d < 1e-7 * (1.0 + cp.location.0.hypot(cp.location.1)) {
                continue 'next;
            }
        }
        out.push(cp);
    }
    Ok(out)
}

/// The set of values a polynomial attains at its critical points, grouped
/// into levels, with per-level counts.
#[derive(Clone, Debug)]
pub struct CriticalSpectrum {
    pub levels: Vec<f64>,
    pub counts: Vec<usize>,
    pub points: Vec<CriticalPoint>,
}

impl CriticalSpectrum {
    pub fn count_at(&self, level: f64, tol: f64) -> usize {
        self.levels
            .iter()
            .zip(&self.counts)
            .filter(|(l, _)| (**l - level).abs() <= tol * (1.0 + level.abs()))
            .map(|(_, c)| *c)
            .sum()
    }
}

/// Group critical points into value levels with a scale-aware tolerance.
pub fn group_levels(points: Vec<CriticalPoint>, rel_tol: f64) -> CriticalSpectrum {
    let scale = 1.0
        + points
            .iter()
            .map(|p| p.value.abs())
            .fold(0.0f64, f64::max);
    let mut levels: Vec<(f64, usize)> = Vec::new();
    for p in &points {
        match levels
            .iter_mut()
            .find(|(l, _)| (*l - p.value).abs() <= rel_tol * scale)
        {
            Some(slot) => slot.1 += 1,
            None => levels.push((p.value, 1)),
        }
    }
    levels.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    CriticalSpectrum {
        levels: levels.iter().map(|&(l, _)| l).collect(),
        counts: levels.iter().map(|&(_, c)| c).collect(),
        points,
    }
}

/// 1D local minima of the restriction of `p` to the line through the origin
/// at `angle`, scanned over `t ∈ [-radius, radius]`. Returns `(t, value)`.
pub fn minima_along_direction(p: &BivarPoly, angle: f64, radius: f64) -> Vec<(f64, f64)> {
    let r = p.restrict_direction(angle);
    let d = r.derivative();
    let dd = d.derivative();
    d.roots_in(-radius, radius, 4096)
        .into_iter()
        .filter(|&t| dd.eval(t) > 0.0)
        .map(|t| (t, r.eval(t)))
        .collect()
}
