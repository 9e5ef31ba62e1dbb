//! Assembly of the full three-level critical spectrum for the normalized
//! C-family polynomials (combinatorial candidates, polished), and measured
//! spectra for the Σ_D products and folding polynomials (grid oracle).

use super::candidates::{candidate_maxima, candidate_minima};
use super::{
    brute_force_critical, group_levels, CriticalFinder, CriticalPoint, CriticalSpectrum, Morse,
    PolishParams, Window2,
};
use crate::arrangements::{sigma_d, vertex_clusters};
use crate::construct::{
    arrangement_poly, folding_inverse, folding_poly, mirrored_c_poly, normalized_c_arrangement,
    normalized_c_poly,
};
use crate::error::Error;
use crate::exec;
use crate::{Config, Result};

/// Polished value must sit within this distance of its nominal level
/// (anything further is a spectrum violation).
const LEVEL_TOL: f64 = 1e-5;

fn polish_all(
    finder: &CriticalFinder,
    guesses: &[(f64, f64)],
    expect: Morse,
    level: f64,
    what: &str,
) -> Result<Vec<CriticalPoint>> {
    let params = PolishParams::default();
    let polished = exec::map_slice(guesses, |&g| finder.polish(g, &params));
    let mut out = Vec::with_capacity(guesses.len());
    for r in polished {
        let cp = r?;
        if cp.morse != expect {
            return Err(Error::SpectrumViolation(format!(
                "{what}: expected {} at ({:.6}, {:.6}), classified {}",
                expect.as_str(),
                cp.location.0,
                cp.location.1,
                cp.morse.as_str()
            )));
        }
        if (cp.value - level).abs() > LEVEL_TOL * (1.0 + level.abs()) {
            return Err(Error::SpectrumViolation(format!(
                "{what}: value {:.8} at ({:.6}, {:.6}) is off level {level}",
                cp.value, cp.location.0, cp.location.1
            )));
        }
        out.push(cp);
    }
    Ok(out)
}

/// The spectrum of the normalized (or mirrored) polynomial of degree m = 3q:
/// C(m,2) saddles at 0, 1 + m(m−3)/3 minima at −1, m(m−3)/6 maxima at 8.
pub fn c_spectrum(m: u32, mirrored: bool, cfg: &Config) -> Result<CriticalSpectrum> {
    let poly = if mirrored {
        mirrored_c_poly(m, cfg)?
    } else {
        normalized_c_poly(m, cfg)?
    };
    let finder = CriticalFinder::new(&poly);
    let maybe_mirror = |pts: Vec<(f64, f64)>| -> Vec<(f64, f64)> {
        if mirrored {
            pts.into_iter().map(|(x, y)| (x, -y)).collect()
        } else {
            pts
        }
    };

    let arr = normalized_c_arrangement(m, cfg)?;
    let saddle_guesses = maybe_mirror(
        vertex_clusters(&arr, cfg.tol)?
            .into_iter()
            .map(|c| (c.x, c.y))
            .collect(),
    );
    let min_guesses = maybe_mirror(candidate_minima(m, cfg.tol)?);
    let max_guesses = maybe_mirror(candidate_maxima(m, cfg.tol)?);

    let expected_saddles = (m * (m - 1) / 2) as usize;
    let expected_minima = (1 + m * (m - 3) / 3) as usize;
    let expected_maxima = (m * (m - 3) / 6) as usize;
    if saddle_guesses.len() != expected_saddles {
        return Err(Error::CountMismatch {
            what: format!("normalized arrangement vertices at m={m}"),
            expected: expected_saddles,
            found: saddle_guesses.len(),
        });
    }

    let saddles = polish_all(&finder, &saddle_guesses, Morse::Saddle, 0.0, "saddle")?;
    let minima = polish_all(&finder, &min_guesses, Morse::Min, -1.0, "minimum")?;
    let maxima = polish_all(&finder, &max_guesses, Morse::Max, 8.0, "maximum")?;
    if minima.len() != expected_minima || maxima.len() != expected_maxima {
        return Err(Error::CountMismatch {
            what: format!("critical counts at m={m}"),
            expected: expected_minima + expected_maxima,
            found: minima.len() + maxima.len(),
        });
    }

    let mean = |pts: &[CriticalPoint]| {
        if pts.is_empty() {
            0.0
        } else {
            pts.iter().map(|p| p.value).sum::<f64>() / pts.len() as f64
        }
    };
    let mut points = minima.clone();
    points.extend(saddles.iter().cloned());
    points.extend(maxima.iter().cloned());
    Ok(CriticalSpectrum {
        levels: vec![mean(&minima), mean(&saddles), mean(&maxima)],
        counts: vec![minima.len(), saddles.len(), maxima.len()],
        points,
    })
}

/// Window enclosing all vertices of the Σ_D arrangement of degree m
/// (all critical points sit inside the vertex hull).
pub fn sigma_d_window(m: u32, cfg: &Config) -> Result<Window2> {
    let arr = sigma_d(m)?;
    let pts = vertex_clusters(&arr, cfg.tol)?
        .into_iter()
        .map(|c| (c.x, c.y));
    Ok(Window2::around_points(pts, 1.15))
}

/// Measured spectrum of the Σ_D product, via the brute-force oracle.
pub fn sigma_d_spectrum(m: u32, grid_n: usize, cfg: &Config) -> Result<CriticalSpectrum> {
    let arr = sigma_d(m)?;
    let p = arrangement_poly(&arr, cfg.precision)?;
    let window = sigma_d_window(m, cfg)?;
    let crit = brute_force_critical(&p, window, grid_n)?;
    Ok(group_levels(crit, LEVEL_TOL))
}

/// Measured spectrum of the folding polynomial, via the brute-force oracle
/// over the Σ_D vertex window carried into the folding frame.
pub fn folding_spectrum(m: u32, grid_n: usize, cfg: &Config) -> Result<CriticalSpectrum> {
    let f = folding_poly(m, cfg)?;
    let w = sigma_d_window(m, cfg)?;
    let (x0, y0) = folding_inverse(m, (w.x0, w.y0));
    let (x1, y1) = folding_inverse(m, (w.x1, w.y1));
    let window = Window2 {
        x0: x0.min(x1),
        x1: x0.max(x1),
        y0: y0.min(y1),
        y1: y0.max(y1),
    };
    let crit = brute_force_critical(&f, window, grid_n)?;
    Ok(group_levels(crit, LEVEL_TOL))
}
