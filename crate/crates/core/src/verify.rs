//! The full regression suite: every check the artifact must pass, one
//! criterion per entry, with pinned tolerances. Used by the `verify` CLI
//! subcommand and by the acceptance test target.

use crate::arrangements::{sigma_c, sigma_d, triangular_faces, vertex_clusters, vertices};
use crate::construct::{
    arrangement_poly, barycenter_abscissa, folding_poly, folding_poly_identity_route,
    lambda_closed_form, mirrored_c_poly, normalization_data, normalized_c_arrangement,
    normalized_c_factors, normalized_c_poly,
};
use crate::critical::{
    brute_force_critical, c_spectrum, candidate_maxima, candidate_minima, xaxis_minima, Window2,
};
use crate::error::Error;
use crate::export::fmt_f64;
use crate::render::{
    bounded_black_components, differing_pixel_fraction, flip_vertical, render_sign_plot,
    render_surface, RenderConfig, RenderMode, RenderWindow, Window3,
};
use crate::surfaces::{build_surface, enumerate_nodes, hypersurface_node_count, Family};
use crate::{Config, Result};
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {} — {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

pub fn all_passed(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.passed)
}

fn run_one(id: u8, name: &'static str, f: impl FnOnce() -> Result<String>) -> CriterionResult {
    match f() {
        Ok(detail) => CriterionResult {
            id,
            name,
            passed: true,
            detail,
        },
        Err(e) => CriterionResult {
            id,
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn filter_degrees(all: &[u32], only: Option<u32>) -> Vec<u32> {
    match only {
        None => all.to_vec(),
        Some(m) => all.iter().copied().filter(|&x| x == m).collect(),
    }
}

const SKIPPED: &str = "skipped: not applicable to the requested degree";

fn fail(msg: String) -> Error {
    Error::Certification(msg)
}

fn rel_ok(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * 1.0f64.max(a.abs()).max(b.abs())
}

/// Run the whole suite (or the subset applicable to one degree).
pub fn run_criteria(only: Option<u32>, cfg: &Config) -> Vec<CriterionResult> {
    vec![
        run_one(1, "node-count regression", || node_counts(only, cfg)),
        run_one(2, "printed-coefficient regression", || {
            printed_coefficients(only, cfg)
        }),
        run_one(3, "lambda regression", || lambda_regression(only, cfg)),
        run_one(4, "combinatorial censuses", || censuses(only, cfg)),
        run_one(5, "identity suite", || identities(only, cfg)),
        run_one(6, "node certification and mirror pairing", || {
            certification(only, cfg)
        }),
        run_one(7, "oracle equivalence", || oracle_equivalence(only, cfg)),
        run_one(8, "hypersurface excess", || hypersurface(only, cfg)),
        run_one(9, "figure reproduction", || figures(only, cfg)),
    ]
}

// --- criterion 1 -----------------------------------------------------------

fn node_counts(only: Option<u32>, cfg: &Config) -> Result<String> {
    let table: [(u32, usize); 5] = [(6, 59), (9, 220), (12, 581), (15, 1162), (18, 2105)];
    let degrees = filter_degrees(&[6, 9, 12, 15, 18], only);
    if degrees.is_empty() {
        return Ok(SKIPPED.into());
    }
    let start = Instant::now();
    let mut detail = String::new();
    for &m in &degrees {
        let expect = table.iter().find(|&&(mm, _)| mm == m).unwrap().1;
        let s = build_surface(Family::PC, m, cfg)?;
        let (nodes, report) = enumerate_nodes(&s, cfg)?;
        if nodes.len() != expect || report.formula != expect {
            return Err(fail(format!(
                "P_C m={m}: enumerated {} / formula {} / expected {expect}",
                nodes.len(),
                report.formula
            )));
        }
        write!(detail, "m={m}:{} ", nodes.len()).unwrap();
    }
    let elapsed = start.elapsed().as_secs_f64();
    if degrees.len() == 5 && elapsed > 60.0 {
        return Err(fail(format!(
            "all five degrees enumerated correctly but took {elapsed:.1}s (> 60s target)"
        )));
    }
    write!(detail, "({elapsed:.1}s)").unwrap();
    Ok(detail)
}

// --- criterion 2 -----------------------------------------------------------

fn printed_restriction(m: u32) -> Vec<f64> {
    match m {
        9 => vec![-1.0, 0.0, 27.0, -9.0, -54.0, 36.0, 21.0, -27.0, 9.0, -1.0],
        15 => vec![
            -1.0, 0.0, 75.0, -25.0, -450.0, 300.0, 895.0, -945.0, -495.0, 1045.0, -297.0, -285.0,
            260.0, -90.0, 15.0, -1.0,
        ],
        18 => vec![
            -1.0, 0.0, 108.0, -36.0, -945.0, 630.0, 2919.0, -3024.0, -3366.0, 5720.0, 0.0,
            -4212.0, 2457.0, 378.0, -1035.0, 528.0, -135.0, 18.0, -1.0,
        ],
        _ => unreachable!(),
    }
}

/// Monomial coefficients of the polynomial interpolating (xs, ys), via
/// Newton divided differences.
fn interpolate_monomial(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    let mut coef = vec![0.0; n];
    coef[0] = dd[n - 1];
    let mut deg = 0usize;
    for i in (0..n - 1).rev() {
        for k in (1..=deg + 1).rev() {
            coef[k] = coef[k - 1] - xs[i] * coef[k];
        }
        coef[0] = -xs[i] * coef[0] + dd[i];
        deg += 1;
    }
    coef
}

fn printed_coefficients(only: Option<u32>, cfg: &Config) -> Result<String> {
    let degrees = filter_degrees(&[9, 15, 18], only);
    if degrees.is_empty() {
        return Ok(SKIPPED.into());
    }
    let mut detail = String::new();
    for &m in &degrees {
        let printed = printed_restriction(m);
        let nd = normalization_data(m, cfg)?;
        // route A: restriction of the direct expansion
        let expanded = normalized_c_poly(m, cfg)?.restrict_y0();
        // route B: sample the factored form on the axis and interpolate
        let (sign, factors) = normalized_c_factors(&nd)?;
        let n = m as usize + 1;
        let xs: Vec<f64> = (0..n)
            .map(|i| ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
            .collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| {
                sign * factors.iter().map(|f| f.eval(x, 0.0)).product::<f64>() / nd.lambda
            })
            .collect();
        let interpolated = interpolate_monomial(&xs, &ys);
        let mut errata = 0;
        for k in 0..n {
            let a = expanded.c.get(k).copied().unwrap_or(0.0);
            let b = interpolated[k];
            if !rel_ok(a, b, 1e-6) {
                return Err(fail(format!(
                    "m={m} x^{k}: independent routes disagree (expansion {}, interpolation {})",
                    fmt_f64(a),
                    fmt_f64(b)
                )));
            }
            if !rel_ok(a, printed[k], 1e-6) {
                errata += 1;
                write!(
                    detail,
                    "[erratum m={m} x^{k}: printed {} vs expansion {} / interpolation {}] ",
                    printed[k],
                    fmt_f64(a),
                    fmt_f64(b)
                )
                .unwrap();
            }
        }
        write!(detail, "m={m}: routes agree, {errata} errata vs print. ").unwrap();
    }
    Ok(detail)
}

// --- criterion 3 -----------------------------------------------------------

fn lambda_regression(only: Option<u32>, cfg: &Config) -> Result<String> {
    let degrees = filter_degrees(&[9, 15, 18], only);
    if degrees.is_empty() {
        return Ok(SKIPPED.into());
    }
    let mut detail = String::new();
    for &m in &degrees {
        let nd = normalization_data(m, cfg)?;
        // the defining barycenter evaluation must agree with the polished value
        let arr = sigma_c(m)?;
        let p = arrangement_poly(&arr, cfg.precision)?;
        let at_barycenter = -p.eval(nd.c, 0.25);
        if !rel_ok(nd.lambda, at_barycenter, 1e-6) {
            return Err(fail(format!(
                "m={m}: polished lambda {} vs barycenter evaluation {}",
                fmt_f64(nd.lambda),
                fmt_f64(at_barycenter)
            )));
        }
        match m {
            9 => {
                // printed closed form says c9^9/2; the paper's own numeric
                // value 13.28 matches a9^9/2 instead, so the c-form is
                // recorded as an erratum and the a-form is enforced.
                let a_form = lambda_closed_form(9);
                if !rel_ok(nd.lambda, a_form, 1e-6) {
                    return Err(fail(format!(
                        "m=9: lambda {} vs a9^9/2 {}",
                        fmt_f64(nd.lambda),
                        fmt_f64(a_form)
                    )));
                }
                if !rel_ok(nd.lambda, 13.28, 5e-3) {
                    return Err(fail(format!("m=9: lambda {} vs printed 13.28", nd.lambda)));
                }
                let c_form = barycenter_abscissa(3).powi(9) / 2.0;
                write!(
                    detail,
                    "m=9: {:.6} = a^9/2, = J(c,1/4) [erratum: printed c9^9/2 = {:.6} disagrees] ",
                    nd.lambda, c_form
                )
                .unwrap();
            }
            15 => {
                if !rel_ok(nd.lambda, 2.4e5, 0.05) {
                    return Err(fail(format!("m=15: lambda {} vs 2.4e5 (5%)", nd.lambda)));
                }
                write!(detail, "m=15: {:.4e} ≈ 2.4e5 ", nd.lambda).unwrap();
            }
            18 => {
                if !rel_ok(nd.lambda, 4.8e6, 0.05) {
                    return Err(fail(format!("m=18: lambda {} vs 4.8e6 (5%)", nd.lambda)));
                }
                let a_form = lambda_closed_form(18);
                if !rel_ok(nd.lambda, a_form, 1e-6) {
                    return Err(fail(format!(
                        "m=18: lambda {} vs a18^18/36 {}",
                        fmt_f64(nd.lambda),
                        fmt_f64(a_form)
                    )));
                }
                write!(detail, "m=18: {:.5e} = a^18/36 ", nd.lambda).unwrap();
            }
            _ => unreachable!(),
        }
    }
    Ok(detail)
}

// --- criterion 4 -----------------------------------------------------------

fn censuses(only: Option<u32>, cfg: &Config) -> Result<String> {
    let degrees = filter_degrees(&[6, 9, 12, 15, 18], only);
    if degrees.is_empty() {
        return Ok(SKIPPED.into());
    }
    let start = Instant::now();
    let printed_triangles = [(9u32, 19usize), (15, 61), (18, 91)];
    for &m in &degrees {
        let sc = sigma_c(m)?;
        let rep = vertices(&sc, cfg.tol)?;
        let expect_v = (m * (m - 1) / 2) as usize;
        if rep.points.len() != expect_v || !rep.simple {
            return Err(fail(format!(
                "Sigma_C m={m}: {} vertices (simple={}), expected {expect_v}",
                rep.points.len(),
                rep.simple
            )));
        }
        let tris = triangular_faces(&sc, cfg.tol)?;
        let expect_t = (1 + m * (m - 3) / 3) as usize;
        if tris.len() != expect_t {
            return Err(fail(format!(
                "Sigma_C m={m}: {} triangles, expected {expect_t}",
                tris.len()
            )));
        }
        if let Some(&(_, t)) = printed_triangles.iter().find(|&&(mm, _)| mm == m) {
            if tris.len() != t {
                return Err(fail(format!("Sigma_C m={m}: printed triangle count {t}")));
            }
        }
        let minima = candidate_minima(m, cfg.tol)?;
        if minima.len() != expect_t {
            return Err(fail(format!(
                "minima census m={m}: {} vs {expect_t}",
                minima.len()
            )));
        }
        let maxima = candidate_maxima(m, cfg.tol)?;
        if maxima.len() != (m * (m - 3) / 6) as usize {
            return Err(fail(format!("maxima census m={m}: {}", maxima.len())));
        }
        let axis = xaxis_minima(m)?;
        if axis.len() != (1 + (m - 3) / 2) as usize {
            return Err(fail(format!("x-axis minima m={m}: {}", axis.len())));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 10.0 {
        return Err(fail(format!("census suite took {elapsed:.1}s (> 10s)")));
    }
    Ok(format!("degrees {degrees:?} ({elapsed:.1}s)"))
}

// --- criterion 5 -----------------------------------------------------------

fn identities(only: Option<u32>, cfg: &Config) -> Result<String> {
    let degrees = filter_degrees(&[3, 6, 9, 12, 15, 18], only);
    if degrees.is_empty() {
        return Ok(SKIPPED.into());
    }
    for &m in &degrees {
        let j = normalized_c_poly(m, cfg)?;
        let jbar = mirrored_c_poly(m, cfg)?;
        let scale = j.coeff_scale();
        let flipped = j.flip_y();
        let f_sub = folding_poly(m, cfg)?;
        let f_id = folding_poly_identity_route(m, cfg)?;
        for i in 0..=m as usize {
            for jj in 0..=m as usize {
                // mirror identity
                if (jbar.coeff(i, jj) - flipped.coeff(i, jj)).abs() > 1e-6 * scale {
                    return Err(fail(format!("mirror identity fails at m={m} ({i},{jj})")));
                }
                // route agreement
                let scale_f = f_sub.coeff_scale();
                if (f_sub.coeff(i, jj) - f_id.coeff(i, jj)).abs() > 1e-6 * scale_f {
                    return Err(fail(format!("folding routes disagree at m={m} ({i},{jj})")));
                }
                // integer coefficients of the folding polynomial
                let c = f_sub.coeff(i, jj);
                if (c - c.round()).abs() > 1e-6 * (1.0 + c.abs()) {
                    return Err(fail(format!(
                        "non-integer folding coefficient {c} at m={m} ({i},{jj})"
                    )));
                }
                // non-integer coefficients of J only at odd y powers
                if jj % 2 == 0 {
                    let cj = j.coeff(i, jj);
                    if cj.abs() > 1e-7 * scale && (cj - cj.round()).abs() > 1e-6 * (1.0 + cj.abs())
                    {
                        return Err(fail(format!(
                            "non-integer coefficient {cj} at even y-power ({i},{jj}) m={m}"
                        )));
                    }
                }
            }
        }
    }
    Ok(format!("degrees {degrees:?}"))
}

// --- criterion 6 -----------------------------------------------------------

fn certification(only: Option<u32>, cfg: &Config) -> Result<String> {
    let degrees = filter_degrees(&[6, 9], only);
    if degrees.is_empty() {
        return Ok(SKIPPED.into());
    }
    let mut detail = String::new();
    for &m in &degrees {
        // enumerate_nodes certifies gradient, nondegeneracy and signature;
        // a certification failure surfaces as an error here.
        let sp = build_surface(Family::PC, m, cfg)?;
        let (nodes, _) = enumerate_nodes(&sp, cfg)?;
        for n in &nodes {
            if !(n.signature == (2, 1) || n.signature == (1, 2)) {
                return Err(fail(format!("non-conical node at m={m}")));
            }
        }
        // mirror pairing of Q and Qbar node sets under y negation
        let (nq, _) = enumerate_nodes(&build_surface(Family::QC, m, cfg)?, cfg)?;
        let (nqb, _) = enumerate_nodes(&build_surface(Family::QbarC, m, cfg)?, cfg)?;
        if nq.len() != nqb.len() {
            return Err(fail(format!(
                "mirror node count mismatch at m={m}: {} vs {}",
                nq.len(),
                nqb.len()
            )));
        }
        for n in &nq {
            let (x, y, z) = n.location;
            let found = nqb.iter().any(|n2| {
                let (x2, y2, z2) = n2.location;
                ((x - x2).powi(2) + (y + y2).powi(2) + (z - z2).powi(2)).sqrt()
                    <= 1e-6 * (1.0 + x.hypot(y))
            });
            if !found {
                return Err(fail(format!(
                    "no mirror partner for node ({x:.6}, {y:.6}, {z:.6}) at m={m}"
                )));
            }
        }
        write!(detail, "m={m}: {} nodes conical, mirror pairing ok. ", nodes.len()).unwrap();
    }
    Ok(detail)
}

// --- criterion 7 -----------------------------------------------------------

fn oracle_equivalence(only: Option<u32>, cfg: &Config) -> Result<String> {
    let degrees = filter_degrees(&[6, 9], only);
    if degrees.is_empty() {
        return Ok(SKIPPED.into());
    }
    let mut detail = String::new();
    for &m in &degrees {
        let spec = c_spectrum(m, false, cfg)?;
        let predicted: Vec<(f64, f64)> = spec.points.iter().map(|p| p.location).collect();
        let poly = normalized_c_poly(m, cfg)?;
        let window = Window2::around_points(predicted.iter().copied(), 1.15);
        let oracle = brute_force_critical(&poly, window, 512)?;
        if oracle.len() != predicted.len() {
            return Err(fail(format!(
                "m={m}: oracle found {} critical points, prediction has {}",
                oracle.len(),
                predicted.len()
            )));
        }
        for cp in &oracle {
            let (x, y) = cp.location;
            let found = predicted
                .iter()
                .any(|&(px, py)| (x - px).hypot(y - py) <= 1e-6 * (1.0 + x.hypot(y)));
            if !found {
                return Err(fail(format!(
                    "m={m}: oracle point ({x:.8}, {y:.8}) missing from prediction"
                )));
            }
            let on_level = [-1.0, 0.0, 8.0]
                .iter()
                .any(|&l| (cp.value - l).abs() <= 1e-6 * (1.0 + l.abs()));
            if !on_level {
                return Err(fail(format!(
                    "m={m}: oracle value {:.9} off the three levels",
                    cp.value
                )));
            }
        }
        // level counts match the spectrum
        for (level, count) in spec.levels.iter().zip(&spec.counts) {
            let oracle_count = oracle
                .iter()
                .filter(|cp| (cp.value - level).abs() <= 1e-6 * (1.0 + level.abs()))
                .count();
            if oracle_count != *count {
                return Err(fail(format!(
                    "m={m}: level {level:.3} count {oracle_count} vs {count}"
                )));
            }
        }
        write!(detail, "m={m}: {} points match bijectively. ", oracle.len()).unwrap();
    }
    Ok(detail)
}

// --- criterion 8 -----------------------------------------------------------

fn hypersurface(only: Option<u32>, cfg: &Config) -> Result<String> {
    let degrees = filter_degrees(&[6, 9], only);
    if degrees.is_empty() {
        return Ok(SKIPPED.into());
    }
    let mut detail = String::new();
    for &m in &degrees {
        let h = hypersurface_node_count(m, cfg)?;
        if h.excess != h.expected_excess {
            return Err(fail(format!(
                "m={m}: excess {} vs expected {}",
                h.excess, h.expected_excess
            )));
        }
        if m == 6 && h.count_j != 283 {
            return Err(fail(format!("m=6: count_J {} vs 283", h.count_j)));
        }
        write!(
            detail,
            "m={m}: J {} − Chmutov {} = {}. ",
            h.count_j, h.count_chmutov, h.excess
        )
        .unwrap();
    }
    Ok(detail)
}

// --- criterion 9 -----------------------------------------------------------

fn figures(only: Option<u32>, cfg: &Config) -> Result<String> {
    if matches!(only, Some(m) if m != 9 && m != 6) {
        return Ok(SKIPPED.into());
    }
    let mut detail = String::new();
    let do_m9 = only.is_none() || only == Some(9);
    let do_m6 = only.is_none() || only == Some(6);
    if do_m9 {
        // black-region topology of the two degree-9 sign plots
        for (system, expect) in [("C", 19usize), ("D", 18)] {
            let arr = if system == "C" { sigma_c(9)? } else { sigma_d(9)? };
            let pts: Vec<(f64, f64)> = vertex_clusters(&arr, cfg.tol)?
                .into_iter()
                .map(|c| (c.x, c.y))
                .collect();
            let ymax = pts.iter().map(|p| p.1.abs()).fold(0.0f64, f64::max) * 1.25;
            let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let xmid = 0.5 * (xs.iter().cloned().fold(f64::INFINITY, f64::min)
                + xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
            let xhalf = (xs.iter().map(|x| (x - xmid).abs()).fold(0.0f64, f64::max)) * 1.25;
            let window = Window2 {
                x0: xmid - xhalf,
                x1: xmid + xhalf,
                y0: -ymax,
                y1: ymax,
            };
            let p = arrangement_poly(&arr, cfg.precision)?;
            let img = render_sign_plot(
                &p,
                &RenderConfig {
                    width: 768,
                    height: 768,
                    window: RenderWindow::Plane(window),
                    mode: RenderMode::SignPlot,
                    iso: 0.0,
                    samples: 0,
                },
                &[],
            )?;
            let components = bounded_black_components(&img);
            if components != expect {
                return Err(fail(format!(
                    "Sigma_{system} m=9 sign plot: {components} bounded black regions, expected {expect}"
                )));
            }
            if system == "D" {
                // the D-family picture is mirror symmetric about the x-axis
                let w = img.width as usize;
                let h = img.height as usize;
                let mut mismatched = 0usize;
                for y in 0..h {
                    for x in 0..w {
                        if img.pixels[y * w + x] != img.pixels[(h - 1 - y) * w + x] {
                            mismatched += 1;
                        }
                    }
                }
                if (mismatched as f64) / (w * h) as f64 > 1e-3 {
                    return Err(fail(format!(
                        "Sigma_D m=9 sign plot not mirror symmetric: {mismatched} pixels differ"
                    )));
                }
            }
            write!(detail, "Sigma_{system}: {components} black triangles. ").unwrap();
        }
    }
    if do_m6 {
        // raymarched mirror sextics differ only on silhouette pixels
        let arr = normalized_c_arrangement(6, cfg)?;
        let r = vertex_clusters(&arr, cfg.tol)?
            .iter()
            .map(|c| c.x.hypot(c.y))
            .fold(0.0f64, f64::max)
            * 1.15;
        let vcfg = RenderConfig {
            width: 192,
            height: 192,
            window: RenderWindow::Volume(Window3::cube((0.0, 0.0, 0.0), r)),
            mode: RenderMode::Raymarch,
            iso: 0.0,
            samples: 256,
        };
        let img_q = render_surface(&build_surface(Family::QC, 6, cfg)?, &vcfg)?;
        let img_qb = render_surface(&build_surface(Family::QbarC, 6, cfg)?, &vcfg)?;
        let frac = differing_pixel_fraction(&flip_vertical(&img_q), &img_qb);
        if frac > 0.005 {
            return Err(fail(format!(
                "raymarched mirror images differ on {:.3}% of pixels",
                100.0 * frac
            )));
        }
        write!(
            detail,
            "Q/Qbar m=6 raymarch mirror: {:.3}% differing pixels.",
            100.0 * frac
        )
        .unwrap();
    }
    Ok(detail)
}
