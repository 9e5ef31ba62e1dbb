//! Expansion of the subsystem products, the normalization that pins all
//! local minima at −1 and maxima at 8, the mirrored polynomial built from
//! chord lines, and the integer-coefficient folding polynomial with its two
//! construction routes.

use crate::arrangements::{
    sigma_c, sigma_d, triangular_faces, Arrangement, LineForm, LineKind, System,
};
use crate::critical::{chord_line, CriticalFinder, Morse, PolishParams};
use crate::error::Error;
use crate::poly::{BivarPoly, LinearForm, Precision};
use crate::{Config, Result};
use std::f64::consts::PI;

/// Sign prefactor of the subsystem product.
fn sigma_sign(system: System, m: u32) -> Result<f64> {
    match system {
        System::SigmaD => Ok(if (m / 2) % 2 == 0 { 1.0 } else { -1.0 }),
        System::SigmaC => Ok(if ((m + 1) / 2 + 1) % 2 == 0 { 1.0 } else { -1.0 }),
        other => Err(Error::Domain(format!(
            "subsystem product is defined for Sigma_C / Sigma_D, not {}",
            other.as_str()
        ))),
    }
}

/// Expand the subsystem product (axis factors included, sign prefactor
/// applied). The arrangement's lines are exactly the factor list.
pub fn arrangement_poly(arr: &Arrangement, precision: Precision) -> Result<BivarPoly> {
    let sign = sigma_sign(arr.system, arr.m())?;
    let factors: Vec<LinearForm> = arr.lines.iter().map(|l| l.linear_form()).collect();
    Ok(BivarPoly::from_linear_factors(sign, &factors, precision))
}

/// Scaling coefficient a_m of the variable change relating the subsystem
/// products to the folding polynomials.
pub fn scale_factor_a(m: u32) -> f64 {
    let mf = m as f64;
    if m % 2 == 0 {
        (PI * (mf + 2.0) / (4.0 * mf)).sin() * (PI * (mf - 2.0) / (4.0 * mf)).sin()
            * (PI / mf).sin()
            / ((PI / (2.0 * mf)).sin() * (2.0 * PI / mf).sin())
    } else {
        2.0 * (PI / (2.0 * mf)).cos() * (PI / mf).sin().powi(2)
            / (3.0 * (PI / mf).sin() - (3.0 * PI / mf).sin())
    }
}

/// Companion coefficient b_m (2/a^m for even m, 2m/a^m for odd m).
pub fn scale_factor_b(m: u32) -> f64 {
    let a = scale_factor_a(m);
    if m % 2 == 0 {
        2.0 / a.powi(m as i32)
    } else {
        2.0 * m as f64 / a.powi(m as i32)
    }
}

/// Barycenter abscissa of the unique equilateral triangle of Σ_C (its
/// ordinate is exactly 1/4).
pub fn barycenter_abscissa(q: u32) -> f64 {
    let qf = q as f64;
    3f64.sqrt() / 4.0 + ((qf - 1.0) * PI / (6.0 * qf)).sin() / (2.0 * (PI / (6.0 * qf)).sin())
}

/// Measured λ: polish every triangle barycenter of the arrangement on `p`,
/// keep the minima, demand a common value (1e-6 relative spread) and return
/// its magnitude together with the count of minima found.
pub fn measure_lambda(arr: &Arrangement, p: &BivarPoly, tol: f64) -> Result<(f64, usize)> {
    let tris = triangular_faces(arr, tol)?;
    let finder = CriticalFinder::new(p);
    let params = PolishParams::default();
    let mut values = Vec::new();
    for t in &tris {
        let cp = finder.polish(t.barycenter, &params)?;
        if cp.morse == Morse::Min {
            values.push(cp.value);
        }
    }
    if values.is_empty() {
        return Err(Error::SpectrumViolation(
            "no triangle carries a minimum".into(),
        ));
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo >= 0.0 {
        return Err(Error::SpectrumViolation(format!(
            "triangle minima are not negative (min value {lo:.3e})"
        )));
    }
    if (hi - lo).abs() > 1e-6 * lo.abs() {
        return Err(Error::SpectrumViolation(format!(
            "triangle minima values spread {:.3e} exceeds 1e-6 relative",
            (hi - lo).abs() / lo.abs()
        )));
    }
    Ok((-lo, values.len()))
}

/// Normalization constants for degree m = 3q.
#[derive(Clone, Copy, Debug)]
pub struct NormalizationData {
    pub m: u32,
    pub q: u32,
    /// Barycenter abscissa of the central equilateral triangle.
    pub c: f64,
    /// Rotation angle Θ_m = π/(6m).
    pub theta: f64,
    /// Scale coefficient a_m.
    pub a: f64,
    /// Positive magnitude of the common triangle minimum of the Σ_C product,
    /// measured by barycenter polishing.
    pub lambda: f64,
    /// Companion coefficient b_m of the Σ_D relation.
    pub b: f64,
}

pub fn normalization_data(m: u32, cfg: &Config) -> Result<NormalizationData> {
    if m < 3 || m % 3 != 0 {
        return Err(Error::Domain(format!(
            "normalization needs m = 3q, got m={m}"
        )));
    }
    let q = m / 3;
    let arr = sigma_c(m)?;
    let p = arrangement_poly(&arr, cfg.precision)?;
    let (lambda, n_minima) = measure_lambda(&arr, &p, cfg.tol)?;
    let expected = (1 + m * (m - 3) / 3) as usize;
    if n_minima != expected {
        return Err(Error::CountMismatch {
            what: format!("Sigma_C triangle minima at m={m}"),
            expected,
            found: n_minima,
        });
    }
    Ok(NormalizationData {
        m,
        q,
        c: barycenter_abscissa(q),
        theta: PI / (6.0 * m as f64),
        a: scale_factor_a(m),
        lambda,
        b: scale_factor_b(m),
    })
}

/// The rotate-scale-translate substitution carrying the normalized frame
/// into the arrangement frame: `(u, v) = M·(x, y) + t`.
pub fn normalizing_map(nd: &NormalizationData) -> ([[f64; 2]; 2], (f64, f64)) {
    let (s, c) = nd.theta.sin_cos();
    (
        [[nd.a * c, nd.a * s], [-nd.a * s, nd.a * c]],
        (nd.c, 0.25),
    )
}

/// The normalized polynomial: all local minima at −1, all local maxima at 8,
/// saddles at 0. Built by composing the substitution into each linear factor
/// and expanding, then dividing by λ.
pub fn normalized_c_poly(m: u32, cfg: &Config) -> Result<BivarPoly> {
    let nd = normalization_data(m, cfg)?;
    normalized_c_poly_with(&nd, cfg)
}

pub fn normalized_c_poly_with(nd: &NormalizationData, cfg: &Config) -> Result<BivarPoly> {
    let (sign, factors) = normalized_c_factors(nd)?;
    Ok(BivarPoly::from_linear_factors(sign, &factors, cfg.precision).scale(1.0 / nd.lambda))
}

/// Sign prefactor and composed linear factors of the normalized polynomial
/// (before the division by λ). Evaluating the factored product directly
/// gives a route to values of the normalized polynomial that never touches
/// expansion.
pub fn normalized_c_factors(nd: &NormalizationData) -> Result<(f64, Vec<LinearForm>)> {
    let arr = sigma_c(nd.m)?;
    let sign = sigma_sign(System::SigmaC, nd.m)?;
    let (mat, t) = normalizing_map(nd);
    let factors: Vec<LinearForm> = arr
        .lines
        .iter()
        .map(|l| l.linear_form().compose_affine(mat, t))
        .collect();
    Ok((sign, factors))
}

/// The Σ_C lines carried into the normalized frame (geometry only: the
/// stored forms are rescaled by the mapping, which is irrelevant for vertex
/// computation). Their pairwise intersections are the saddles of the
/// normalized polynomial.
pub fn normalized_c_arrangement(m: u32, cfg: &Config) -> Result<Arrangement> {
    let nd = normalization_data(m, cfg)?;
    let arr = sigma_c(m)?;
    let (mat, t) = normalizing_map(&nd);
    let lines = arr
        .lines
        .iter()
        .map(|l| {
            let f = l.linear_form().compose_affine(mat, t);
            let kind = if f.b.abs() > 1e-12 * f.a.hypot(f.b) {
                LineKind::NonVertical {
                    slope_tan: -f.a / f.b,
                    offset: -f.c / f.b,
                }
            } else {
                LineKind::VerticalX { c: -f.c / f.a }
            };
            LineForm {
                kind,
                label: l.label,
            }
        })
        .collect();
    Ok(Arrangement {
        lines,
        system: System::Custom,
        d: arr.d,
    })
}

/// The mirrored normalized polynomial, built directly as the chord-line
/// product with its stated prefactor (√3 for odd m) and sign. Satisfies
/// `mirrored(x, y) = normalized(x, −y)` coefficientwise.
pub fn mirrored_c_poly(m: u32, cfg: &Config) -> Result<BivarPoly> {
    if m < 3 || m % 3 != 0 {
        return Err(Error::Domain(format!("mirrored poly needs m = 3q, got {m}")));
    }
    let q = m / 3;
    let root3 = if m % 2 == 1 { 3f64.sqrt() } else { 1.0 };
    let sign = if ((q + 1) / 2 + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let factors: Vec<LinearForm> = (0..m as i64)
        .map(|nu| chord_line(6 * nu + 1, m).linear_form())
        .collect();
    Ok(BivarPoly::from_linear_factors(
        root3 * sign,
        &factors,
        cfg.precision,
    ))
}

/// The real folding polynomial of degree m, via the Σ_D substitution route
/// `b_m · J(a_m x + a_m, a_m y)` (valid for every m ≥ 3). Its coefficients
/// are integers.
pub fn folding_poly(m: u32, cfg: &Config) -> Result<BivarPoly> {
    if m < 3 {
        return Err(Error::Domain(format!("folding poly needs m >= 3, got {m}")));
    }
    let arr = sigma_d(m)?;
    let sign = sigma_sign(System::SigmaD, m)?;
    let a = scale_factor_a(m);
    let b = scale_factor_b(m);
    let mat = [[a, 0.0], [0.0, a]];
    let t = (a, 0.0);
    let factors: Vec<LinearForm> = arr
        .lines
        .iter()
        .map(|l| l.linear_form().compose_affine(mat, t))
        .collect();
    Ok(BivarPoly::from_linear_factors(sign * b, &factors, cfg.precision))
}

/// The identity route `6 − normalized − mirrored`, defined for m = 3q. Both
/// routes agree coefficientwise.
pub fn folding_poly_identity_route(m: u32, cfg: &Config) -> Result<BivarPoly> {
    let j = normalized_c_poly(m, cfg)?;
    let jbar = mirrored_c_poly(m, cfg)?;
    Ok(j.add(&jbar).scale(-1.0).add_constant(6.0))
}

/// Affine map from the folding frame into the Σ_D arrangement frame, and its
/// inverse (for carrying critical-point candidates across).
pub fn folding_forward(m: u32, p: (f64, f64)) -> (f64, f64) {
    let a = scale_factor_a(m);
    (a * p.0 + a, a * p.1)
}

pub fn folding_inverse(m: u32, p: (f64, f64)) -> (f64, f64) {
    let a = scale_factor_a(m);
    (p.0 / a - 1.0, p.1 / a)
}

/// Measured λ with the closed-form cross-check values (a_m^m/2 for odd m,
/// a_m^m/(2m) for even m).
pub fn lambda_closed_form(m: u32) -> f64 {
    let a = scale_factor_a(m);
    if m % 2 == 1 {
        a.powi(m as i32) / 2.0
    } else {
        a.powi(m as i32) / (2.0 * m as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangements::vertices;

    fn cfg() -> Config {
        Config::default()
    }

    fn assert_rel(a: f64, b: f64, rel: f64, what: &str) {
        let scale = 1.0f64.max(a.abs()).max(b.abs());
        assert!(
            (a - b).abs() <= rel * scale,
            "{what}: {a} vs {b} (rel {})",
            (a - b).abs() / scale
        );
    }

    #[test]
    fn sigma_c_9_factors_match_printed_product() {
        // the nine factors of the degree-9 product, written out explicitly
        let d = 18.0;
        let s = |k: f64| (k * PI / d).sin();
        let t = |k: f64| (k * PI / d).tan();
        let expected: Vec<LinearForm> = vec![
            LinearForm::new(-t(2.0), 1.0, s(7.0) + s(5.0)),
            LinearForm::new(-t(4.0), 1.0, s(7.0) + s(5.0) + s(3.0) + s(1.0)),
            LinearForm::new(-t(6.0), 1.0, s(7.0) + s(5.0)),
            LinearForm::new(-t(8.0), 1.0, 0.0),
            LinearForm::new(-t(10.0), 1.0, -(s(9.0) + s(7.0))),
            LinearForm::new(-t(12.0), 1.0, -(s(9.0) + s(7.0) + s(5.0) + s(3.0))),
            LinearForm::new(-t(14.0), 1.0, -(s(9.0) + s(7.0) + s(5.0) + s(3.0))),
            LinearForm::new(-t(16.0), 1.0, -(s(9.0) + s(7.0))),
            LinearForm::new(0.0, 1.0, 0.0),
        ];
        let arr = sigma_c(9).unwrap();
        let got: Vec<LinearForm> = arr.lines.iter().map(|l| l.linear_form()).collect();
        for e in &expected {
            assert!(
                got.iter().any(|g| (g.a - e.a).abs() < 1e-12
                    && (g.b - e.b).abs() < 1e-12
                    && (g.c - e.c).abs() < 1e-12),
                "factor {e:?} not found"
            );
        }
        assert_eq!(got.len(), 9);
    }

    #[test]
    fn sigma_d_3_is_a_clean_cubic() {
        let arr = sigma_d(3).unwrap();
        let p = arrangement_poly(&arr, Precision::Double).unwrap();
        assert_eq!(p.degree(), 3);
        // D3-symmetric zero set: rotating a zero by 2π/3 about the triangle
        // barycenter lands on the zero set again
        let t = equilateral_triangle(&arr, 1e-9).unwrap();
        let (cx, cy) = t.barycenter;
        let (s, c) = (2.0 * PI / 3.0).sin_cos();
        for &(x0, y0) in &[(0.0, 0.0), (0.0, -0.8660254037844386)] {
            assert!(p.eval(x0, y0).abs() < 1e-12);
            let (dx, dy) = (x0 - cx, y0 - cy);
            let (rx, ry) = (cx + c * dx - s * dy, cy + s * dx + c * dy);
            assert!(p.eval(rx, ry).abs() < 1e-10, "rotation image of zero");
        }
    }

    #[test]
    fn product_vanishes_at_all_vertices() {
        for m in [6u32, 9] {
            let arr = sigma_c(m).unwrap();
            let p = arrangement_poly(&arr, Precision::Double).unwrap();
            let scale = p.coeff_scale();
            for (x, y, _) in vertices(&arr, 1e-9).unwrap().points {
                assert!(p.eval(x, y).abs() <= 1e-9 * scale, "vertex ({x}, {y}) m={m}");
            }
        }
    }

    #[test]
    fn degree_is_exactly_m() {
        for m in [3u32, 6, 9, 12] {
            let arr = sigma_c(m).unwrap();
            assert_eq!(arrangement_poly(&arr, Precision::Double).unwrap().degree(), m as usize);
            let arr = sigma_d(m).unwrap();
            assert_eq!(arrangement_poly(&arr, Precision::Double).unwrap().degree(), m as usize);
        }
    }

    #[test]
    fn barycenter_formula_matches_geometry() {
        for m in [3u32, 6, 9, 12, 15, 18] {
            let arr = sigma_c(m).unwrap();
            let t = equilateral_triangle(&arr, 1e-9).unwrap();
            assert_rel(t.barycenter.0, barycenter_abscissa(m / 3), 1e-9, "abscissa");
            assert_rel(t.barycenter.1, 0.25, 1e-9, "ordinate");
        }
    }

    #[test]
    fn lambda_measured_and_closed_forms() {
        // λ₉ ≈ 13.28 (paper's printed numeric) and = a₉⁹/2; λ₆ = a₆⁶/12
        let nd9 = normalization_data(9, &cfg()).unwrap();
        assert_rel(nd9.lambda, 13.28611516, 1e-8, "lambda 9 numeric");
        assert_rel(nd9.lambda, lambda_closed_form(9), 1e-9, "lambda 9 closed form");
        // Eq.-(5)-style direct evaluation at the barycenter agrees
        let arr = sigma_c(9).unwrap();
        let p = arrangement_poly(&arr, Precision::Double).unwrap();
        assert_rel(-p.eval(nd9.c, 0.25), nd9.lambda, 1e-9, "barycenter eval");

        let nd6 = normalization_data(6, &cfg()).unwrap();
        assert_rel(nd6.lambda, lambda_closed_form(6), 1e-9, "lambda 6");
        assert_rel(nd6.lambda, 0.067683284, 1e-7, "lambda 6 value");
    }

    #[test]
    fn lambda_sigma_d_equals_inverse_b() {
        for m in [4u32, 5, 6, 7, 9] {
            let arr = sigma_d(m).unwrap();
            let p = arrangement_poly(&arr, Precision::Double).unwrap();
            let (lam, _) = measure_lambda(&arr, &p, 1e-9).unwrap();
            assert_rel(lam, 1.0 / scale_factor_b(m), 1e-8, &format!("lambda_D m={m}"));
        }
    }

    #[test]
    fn sigma_d_3_has_no_minima() {
        let arr = sigma_d(3).unwrap();
        let p = arrangement_poly(&arr, Precision::Double).unwrap();
        assert!(matches!(
            measure_lambda(&arr, &p, 1e-9),
            Err(Error::SpectrumViolation(_))
        ));
    }

    #[test]
    fn normalized_restriction_matches_printed_m9() {
        let printed: [(usize, f64); 9] = [
            (0, -1.0),
            (2, 27.0),
            (3, -9.0),
            (4, -54.0),
            (5, 36.0),
            (6, 21.0),
            (7, -27.0),
            (8, 9.0),
            (9, -1.0),
        ];
        let p = normalized_c_poly(9, &cfg()).unwrap();
        let r = p.restrict_y0();
        for &(k, v) in &printed {
            assert_rel(r.c[k], v, 1e-6, &format!("x^{k}"));
        }
        assert!(r.c[1].abs() < 1e-6);
    }

    #[test]
    fn normalized_value_at_origin_is_minus_one() {
        for m in [3u32, 6, 9, 12] {
            let p = normalized_c_poly(m, &cfg()).unwrap();
            assert_rel(p.eval(0.0, 0.0), -1.0, 1e-9, &format!("m={m}"));
        }
    }

    #[test]
    fn mirror_identity_coefficientwise() {
        for m in [3u32, 6, 9, 12] {
            let j = normalized_c_poly(m, &cfg()).unwrap();
            let jbar = mirrored_c_poly(m, &cfg()).unwrap();
            let flipped = j.flip_y();
            let scale = j.coeff_scale();
            for i in 0..=m as usize {
                for jj in 0..=m as usize {
                    assert!(
                        (jbar.coeff(i, jj) - flipped.coeff(i, jj)).abs() <= 1e-6 * scale,
                        "m={m} ({i},{jj})"
                    );
                }
            }
        }
    }

    #[test]
    fn mirrored_noninteger_coeffs_only_at_odd_y_powers() {
        let p = normalized_c_poly(6, &cfg()).unwrap();
        let scale = p.coeff_scale();
        for i in 0..=6 {
            for j in (0..=6).step_by(2) {
                let c = p.coeff(i, j);
                if c.abs() > 1e-7 * scale {
                    assert!(
                        (c - c.round()).abs() <= 1e-6 * (1.0 + c.abs()),
                        "even y-power coefficient ({i},{j}) = {c} is not an integer"
                    );
                }
            }
        }
    }

    #[test]
    fn folding_routes_agree_and_coeffs_are_integers() {
        for m in [3u32, 6, 9, 12] {
            let f1 = folding_poly(m, &cfg()).unwrap();
            let f2 = folding_poly_identity_route(m, &cfg()).unwrap();
            let scale = f1.coeff_scale();
            for i in 0..=m as usize {
                for j in 0..=m as usize {
                    assert!((f1.coeff(i, j) - f2.coeff(i, j)).abs() <= 1e-6 * scale, "routes m={m}");
                    let c = f1.coeff(i, j);
                    assert!(
                        (c - c.round()).abs() <= 1e-6 * (1.0 + c.abs()),
                        "non-integer folding coefficient at m={m} ({i},{j}): {c}"
                    );
                }
            }
        }
    }

    #[test]
    fn folding_matches_definition_at_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let f = folding_poly(3, &cfg()).unwrap();
        let j = normalized_c_poly(3, &cfg()).unwrap();
        let jbar = mirrored_c_poly(3, &cfg()).unwrap();
        for _ in 0..50 {
            let x = rng.gen_range(-1.5..1.5);
            let y = rng.gen_range(-1.5..1.5);
            let lhs = f.eval(x, y);
            let rhs = 6.0 - j.eval(x, y) - jbar.eval(x, y);
            assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn compensated_mode_agrees_with_double() {
        let mut c = cfg();
        c.precision = Precision::Compensated;
        let a = normalized_c_poly(9, &cfg()).unwrap();
        let b = normalized_c_poly(9, &c).unwrap();
        let scale = a.coeff_scale();
        for i in 0..=9 {
            for j in 0..=9 {
                assert!((a.coeff(i, j) - b.coeff(i, j)).abs() <= 1e-9 * scale);
            }
        }
    }

    #[test]
    fn rejects_non_3q_degrees() {
        assert!(normalization_data(4, &cfg()).is_err());
        assert!(normalized_c_poly(10, &cfg()).is_err());
        assert!(mirrored_c_poly(7, &cfg()).is_err());
    }
}
