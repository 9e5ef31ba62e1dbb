//! Separable surfaces `J(x, y) + g(z) = 0`, node enumeration with full
//! numerical certification, closed-form node counts, and the hypersurface
//! counts built from critical spectra.
//!
//! A separable surface is singular exactly at products of critical points of
//! the two parts whose critical values sum to zero; every such point is a
//! conical node (mixed 3×3 Hessian signature).

use crate::arrangements::{sigma_d, triangular_faces, vertex_clusters};
use crate::construct::{
    arrangement_poly, folding_inverse, folding_poly, measure_lambda, mirrored_c_poly,
    normalized_c_poly, scale_factor_b,
};
use crate::critical::{
    c_spectrum, folding_spectrum, CriticalFinder, CriticalPoint, Morse, PolishParams,
};
use crate::error::Error;
use crate::exec;
use crate::poly::{chebyshev_t, BivarPoly, UnivarPoly};
use crate::{Config, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    PSigmaD,
    Chmutov,
    PC,
    QC,
    QbarC,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::PSigmaD => "P_SigmaD",
            Family::Chmutov => "Chmutov",
            Family::PC => "P_C",
            Family::QC => "Q_C",
            Family::QbarC => "Qbar_C",
        }
    }

    pub fn needs_3q(&self) -> bool {
        matches!(self, Family::PC | Family::QC | Family::QbarC)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "P_SigmaD" | "PSigmaD" => Family::PSigmaD,
            "Chmutov" | "chmutov" => Family::Chmutov,
            "P_C" | "PC" => Family::PC,
            "Q_C" | "QC" => Family::QC,
            "Qbar_C" | "QbarC" => Family::QbarC,
            other => return Err(Error::Parse(format!("unknown family `{other}`"))),
        })
    }
}

/// A separable surface: total polynomial = xy_part(x, y) + z_part(z).
#[derive(Clone, Debug)]
pub struct SurfaceSpec {
    pub family: Family,
    pub m: u32,
    pub xy_part: BivarPoly,
    pub z_part: UnivarPoly,
}

impl SurfaceSpec {
    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        self.xy_part.eval(x, y) + self.z_part.eval(z)
    }

    /// Trivariate term list (i, j, k, coeff) of the assembled polynomial.
    pub fn trivariate_terms(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out: Vec<(usize, usize, usize, f64)> = self
            .xy_part
            .terms(0.0)
            .into_iter()
            .map(|(i, j, c)| (i, j, 0, c))
            .collect();
        for (k, &c) in self.z_part.c.iter().enumerate() {
            if c != 0.0 {
                if k == 0 {
                    match out.iter_mut().find(|t| t.0 == 0 && t.1 == 0 && t.2 == 0) {
                        Some(t) => t.3 += c,
                        None => out.push((0, 0, 0, c)),
                    }
                } else {
                    out.push((0, 0, k, c));
                }
            }
        }
        out
    }
}

fn check_family_degree(family: Family, m: u32) -> Result<()> {
    if m < 3 {
        return Err(Error::Domain(format!(
            "degree m={m} too small for family {}",
            family.as_str()
        )));
    }
    if family.needs_3q() && m % 3 != 0 {
        return Err(Error::Domain(format!(
            "family {} needs m = 3q, got m={m}",
            family.as_str()
        )));
    }
    if m > 18 {
        return Err(Error::Domain(format!(
            "degree m={m} outside the supported range (m <= 18)"
        )));
    }
    Ok(())
}

/// Assemble a surface of the given family and degree.
pub fn build_surface(family: Family, m: u32, cfg: &Config) -> Result<SurfaceSpec> {
    check_family_degree(family, m)?;
    let half_cheb = |lam: f64| {
        // (lam/2)(T_m(z) + 1)
        chebyshev_t(m as usize).add_constant(1.0).scale(lam / 2.0)
    };
    let (xy_part, z_part) = match family {
        Family::PC => (normalized_c_poly(m, cfg)?, half_cheb(1.0)),
        Family::Chmutov => (folding_poly(m, cfg)?, half_cheb(1.0)),
        Family::PSigmaD => {
            let arr = sigma_d(m)?;
            let p = arrangement_poly(&arr, cfg.precision)?;
            // Measured where triangle minima exist; at m=3 the lone triangle
            // carries a maximum, so fall back to the 1/b_m closed form that
            // the measurement reproduces at every other degree.
            let lam = match measure_lambda(&arr, &p, cfg.tol) {
                Ok((lam, _)) => lam,
                Err(Error::SpectrumViolation(_)) if m == 3 => 1.0 / scale_factor_b(m),
                Err(e) => return Err(e),
            };
            (p, half_cheb(lam))
        }
        Family::QC | Family::QbarC => {
            let xy = if family == Family::QC {
                normalized_c_poly(m, cfg)?
            } else {
                mirrored_c_poly(m, cfg)?
            };
            // ((-1)^{m+1}/4) (J(z,0) - 1 + (-1)^{m+1} 2)
            let sgn = if m % 2 == 0 { -1.0 } else { 1.0 };
            let z = xy
                .restrict_y0()
                .add_constant(-1.0 + sgn * 2.0)
                .scale(sgn / 4.0);
            (xy, z)
        }
    };
    Ok(SurfaceSpec {
        family,
        m,
        xy_part,
        z_part,
    })
}

/// A critical point of the z-part.
#[derive(Clone, Copy, Debug)]
pub struct ZCritical {
    pub z: f64,
    pub value: f64,
    pub kind: Morse,
}

/// All real critical points of a univariate polynomial: Newton/bisection on
/// g' seeded from sign changes on a dense grid over the Cauchy root bound.
pub fn z_critical_points(g: &UnivarPoly) -> Result<Vec<ZCritical>> {
    if g.degree() == 0 {
        return Err(Error::Domain("z-part is constant".into()));
    }
    let d = g.derivative();
    let dd = d.derivative();
    let bound = d.root_bound().min(1e6);
    let roots = d.roots_in(-bound, bound, 8192);
    Ok(roots
        .into_iter()
        .map(|z| ZCritical {
            z,
            value: g.eval(z),
            kind: if dd.eval(z) > 0.0 { Morse::Min } else { Morse::Max },
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeClass {
    /// J-saddle paired with a z-level.
    VertexType,
    /// J-minimum paired with a z-level.
    TriangleType,
}

impl NodeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            NodeClass::VertexType => "vertex_type",
            NodeClass::TriangleType => "triangle_type",
        }
    }
}

/// A certified conical node.
#[derive(Clone, Copy, Debug)]
pub struct Node {
    pub location: (f64, f64, f64),
    pub class: NodeClass,
    pub grad_norm: f64,
    pub hessian3_det: f64,
    /// (positive, negative) inertia of the 3×3 Hessian.
    pub signature: (u8, u8),
}

#[derive(Clone, Debug)]
pub struct NodeCountReport {
    pub family: Family,
    pub m: u32,
    pub enumerated: usize,
    pub formula: usize,
    pub vertex_type: usize,
    pub triangle_type: usize,
    pub certified: bool,
}

/// Closed-form node count.
pub fn node_count_formula(family: Family, m: u32) -> Result<usize> {
    check_family_degree(family, m)?;
    let m = m as usize;
    let saddles = m * (m - 1) / 2;
    let count = if matches!(family, Family::PC | Family::QC | Family::QbarC) {
        saddles * (m / 2) + (1 + m * (m - 3) / 3) * ((m - 1) / 2)
    } else {
        let minima = if m % 3 == 0 {
            m * m / 3 - m
        } else {
            (m * m - 3 * m + 2) / 3
        };
        saddles * (m / 2) + minima * ((m - 1) / 2)
    };
    Ok(count)
}

/// The 2D critical points that can participate in nodes: saddles (level 0)
/// and minima (level −λ or −1). Maxima sit at a positive level while the
/// z-part never goes below 0, so they can never complete a zero sum.
fn xy_node_criticals(family: Family, m: u32, cfg: &Config) -> Result<Vec<CriticalPoint>> {
    match family {
        Family::PC | Family::QC => Ok(c_spectrum(m, false, cfg)?.points),
        Family::QbarC => Ok(c_spectrum(m, true, cfg)?.points),
        Family::PSigmaD | Family::Chmutov => {
            let arr = sigma_d(m)?;
            let mut guesses: Vec<(f64, f64)> = vertex_clusters(&arr, cfg.tol)?
                .into_iter()
                .map(|c| (c.x, c.y))
                .collect();
            let n_saddles = guesses.len();
            guesses.extend(triangular_faces(&arr, cfg.tol)?.iter().map(|t| t.barycenter));
            if family == Family::Chmutov {
                guesses = guesses
                    .into_iter()
                    .map(|p| folding_inverse(m, p))
                    .collect();
            }
            let p = match family {
                Family::Chmutov => folding_poly(m, cfg)?,
                _ => arrangement_poly(&arr, cfg.precision)?,
            };
            let finder = CriticalFinder::new(&p);
            let params = PolishParams::default();
            let polished = exec::map_slice(&guesses, |&g| finder.polish(g, &params));
            let mut out = Vec::new();
            for (idx, r) in polished.into_iter().enumerate() {
                let cp = r?;
                if idx < n_saddles {
                    if cp.morse != Morse::Saddle {
                        return Err(Error::SpectrumViolation(format!(
                            "vertex polished to a {} at ({:.6}, {:.6})",
                            cp.morse.as_str(),
                            cp.location.0,
                            cp.location.1
                        )));
                    }
                    out.push(cp);
                } else if cp.morse == Morse::Min {
                    // triangles that carry maxima (m=3) contribute no nodes
                    out.push(cp);
                }
            }
            Ok(out)
        }
    }
}

/// Enumerate and certify every node of the surface.
pub fn enumerate_nodes(s: &SurfaceSpec, cfg: &Config) -> Result<(Vec<Node>, NodeCountReport)> {
    let crit_xy = xy_node_criticals(s.family, s.m, cfg)?;
    let crit_z = z_critical_points(&s.z_part)?;
    let value_scale = 1.0
        + crit_xy
            .iter()
            .map(|c| c.value.abs())
            .chain(crit_z.iter().map(|c| c.value.abs()))
            .fold(0.0f64, f64::max);
    let sum_tol = 1e-5 * value_scale;

    let gz = s.z_part.derivative();
    let gzz = gz.derivative();
    let xy_scale = 1.0 + s.xy_part.coeff_scale();
    let z_scale = 1.0 + s.z_part.coeff_scale();
    let finder = CriticalFinder::new(&s.xy_part);

    let mut nodes = Vec::new();
    for cxy in &crit_xy {
        for cz in &crit_z {
            if (cxy.value + cz.value).abs() > sum_tol {
                continue;
            }
            let (x, y) = cxy.location;
            let z = cz.z;
            // certification: full 3D gradient, separable 3x3 Hessian
            let (gx, gy) = finder.grad(x, y);
            let gznorm = gz.eval(z);
            let grad_norm = (gx * gx + gy * gy + gznorm * gznorm).sqrt();
            let grad_bound = 1e-8 * xy_scale.max(z_scale);
            if grad_norm > grad_bound {
                return Err(Error::Certification(format!(
                    "|grad| = {grad_norm:.3e} above {grad_bound:.3e} at ({x:.6}, {y:.6}, {z:.6})"
                )));
            }
            let (hxx, hxy, hyy) = finder.hessian(x, y);
            let det2 = hxx * hyy - hxy * hxy;
            let d2z = gzz.eval(z);
            if det2.abs() <= 1e-8 * xy_scale * xy_scale || d2z.abs() <= 1e-8 * z_scale {
                return Err(Error::Certification(format!(
                    "degenerate Hessian at ({x:.6}, {y:.6}, {z:.6}): det2={det2:.3e}, g''={d2z:.3e}"
                )));
            }
            // eigenvalues of the 2x2 block plus g'' give the inertia
            let tr = hxx + hyy;
            let disc = ((hxx - hyy) * (hxx - hyy) + 4.0 * hxy * hxy).sqrt();
            let eigs = [(tr + disc) / 2.0, (tr - disc) / 2.0, d2z];
            let n_plus = eigs.iter().filter(|&&e| e > 0.0).count() as u8;
            let n_minus = eigs.iter().filter(|&&e| e < 0.0).count() as u8;
            if !(n_plus == 2 && n_minus == 1 || n_plus == 1 && n_minus == 2) {
                return Err(Error::Certification(format!(
                    "node at ({x:.6}, {y:.6}, {z:.6}) is not conical: signature ({n_plus}, {n_minus})"
                )));
            }
            nodes.push(Node {
                location: (x, y, z),
                class: match cxy.morse {
                    Morse::Saddle => NodeClass::VertexType,
                    Morse::Min => NodeClass::TriangleType,
                    Morse::Max => {
                        return Err(Error::Certification(
                            "a maximum completed a zero sum; the z-part is not nonnegative".into(),
                        ))
                    }
                },
                grad_norm,
                hessian3_det: det2 * d2z,
                signature: (n_plus, n_minus),
            });
        }
    }
    nodes.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap());
    let formula = node_count_formula(s.family, s.m)?;
    let vertex_type = nodes.iter().filter(|n| n.class == NodeClass::VertexType).count();
    let triangle_type = nodes.len() - vertex_type;
    let report = NodeCountReport {
        family: s.family,
        m: s.m,
        enumerated: nodes.len(),
        formula,
        vertex_type,
        triangle_type,
        certified: true,
    };
    Ok((nodes, report))
}

/// Node counts of the 4D hypersurfaces built as differences of two copies of
/// a bivariate polynomial: nodes are pairs of 2D critical points on a common
/// level, so the count is Σ (count at level)² over the spectrum. Compared
/// between the normalized C polynomial and the folding polynomial; the
/// excess is 3q(q−1).
#[derive(Clone, Copy, Debug)]
pub struct HypersurfaceCounts {
    pub m: u32,
    pub count_j: usize,
    pub count_chmutov: usize,
    pub excess: i64,
    pub expected_excess: i64,
}

pub fn hypersurface_node_count(m: u32, cfg: &Config) -> Result<HypersurfaceCounts> {
    if m % 3 != 0 || m < 3 {
        return Err(Error::Domain(format!(
            "hypersurface counts need m = 3q, got {m}"
        )));
    }
    let q = (m / 3) as i64;
    let spec_j = c_spectrum(m, false, cfg)?;
    let spec_f = folding_spectrum(m, 512, cfg)?;
    if spec_f.levels.len() != 3 {
        return Err(Error::SpectrumViolation(format!(
            "folding polynomial spectrum has {} levels, expected 3",
            spec_f.levels.len()
        )));
    }
    let count = |s: &crate::critical::CriticalSpectrum| {
        s.counts.iter().map(|&c| c * c).sum::<usize>()
    };
    let count_j = count(&spec_j);
    let count_chmutov = count(&spec_f);
    Ok(HypersurfaceCounts {
        m,
        count_j,
        count_chmutov,
        excess: count_j as i64 - count_chmutov as i64,
        expected_excess: 3 * q * (q - 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn chebyshev_z_critical_counts() {
        let t9 = chebyshev_t(9);
        let crit = z_critical_points(&t9).unwrap();
        let at = |v: f64| {
            crit.iter()
                .filter(|c| (c.value - v).abs() < 1e-9)
                .count()
        };
        assert_eq!(crit.len(), 8);
        assert_eq!(at(-1.0), 4);
        assert_eq!(at(1.0), 4);

        let t18 = chebyshev_t(18);
        let crit = z_critical_points(&t18).unwrap();
        let at = |v: f64| {
            crit.iter()
                .filter(|c| (c.value - v).abs() < 1e-9)
                .count()
        };
        assert_eq!(at(-1.0), 9);
        assert_eq!(at(1.0), 8);
    }

    #[test]
    fn q_surface_z_part_structure() {
        // J(z, 0) has minima at -1 and maxima at 3; the Eq.-(16) branch turns
        // them into z-part levels {0, 1} in both parities.
        for m in [6u32, 9] {
            let s = build_surface(Family::QC, m, &cfg()).unwrap();
            let crit = z_critical_points(&s.z_part).unwrap();
            let zeros = crit.iter().filter(|c| c.value.abs() < 1e-6).count();
            let ones = crit.iter().filter(|c| (c.value - 1.0).abs() < 1e-6).count();
            assert_eq!(zeros + ones, crit.len(), "m={m}: stray z-level");
            let expect_pairs_with_saddles = if m % 2 == 0 { (m / 2 + 1) as usize } else { (m / 2) as usize };
            assert_eq!(zeros, expect_pairs_with_saddles, "m={m}");
        }
    }

    #[test]
    fn restriction_has_four_minima_at_minus_one_m9() {
        let p = normalized_c_poly(9, &cfg()).unwrap();
        let r = p.restrict_y0();
        let crit = z_critical_points(&r).unwrap();
        let minima: Vec<_> = crit.iter().filter(|c| c.kind == Morse::Min).collect();
        assert_eq!(minima.len(), 4);
        for c in minima {
            assert!((c.value + 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn separability_is_exact() {
        let s = build_surface(Family::PC, 6, &cfg()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let terms = s.trivariate_terms();
        for _ in 0..20 {
            let (x, y, z) = (
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.2..1.2),
            );
            let assembled: f64 = terms
                .iter()
                .map(|&(i, j, k, c)| c * x.powi(i as i32) * y.powi(j as i32) * z.powi(k as i32))
                .sum();
            let parts = s.eval(x, y, z);
            assert!((assembled - parts).abs() <= 1e-12 * (1.0 + assembled.abs()));
        }
    }

    #[test]
    fn node_count_formula_values() {
        assert_eq!(node_count_formula(Family::PC, 3).unwrap(), 4);
        assert_eq!(node_count_formula(Family::PC, 6).unwrap(), 59);
        assert_eq!(node_count_formula(Family::PC, 9).unwrap(), 220);
        assert_eq!(node_count_formula(Family::PC, 12).unwrap(), 581);
        assert_eq!(node_count_formula(Family::PC, 15).unwrap(), 1162);
        assert_eq!(node_count_formula(Family::PC, 18).unwrap(), 2105);
        assert_eq!(node_count_formula(Family::PSigmaD, 9).unwrap(), 216);
        assert_eq!(node_count_formula(Family::Chmutov, 9).unwrap(), 216);
        assert_eq!(node_count_formula(Family::PSigmaD, 3).unwrap(), 3);
        // the C-family count exceeds the D-family count by floor((m-1)/2)
        for m in [6u32, 9, 12, 15, 18] {
            let c = node_count_formula(Family::PC, m).unwrap();
            let d = node_count_formula(Family::PSigmaD, m).unwrap();
            assert_eq!(c - d, ((m - 1) / 2) as usize, "m={m}");
        }
    }

    #[test]
    fn enumerate_nodes_small_degrees() {
        for (family, m, expect) in [
            (Family::PC, 3, 4),
            (Family::PC, 6, 59),
            (Family::PSigmaD, 3, 3),
            (Family::PSigmaD, 4, 14),
            (Family::Chmutov, 4, 14),
            (Family::QC, 6, 59),
            (Family::QbarC, 6, 59),
        ] {
            let s = build_surface(family, m, &cfg()).unwrap();
            let (nodes, report) = enumerate_nodes(&s, &cfg()).unwrap();
            assert_eq!(nodes.len(), expect, "{} m={m}", family.as_str());
            assert_eq!(report.enumerated, report.formula, "{} m={m}", family.as_str());
            for n in &nodes {
                assert!(
                    n.signature == (2, 1) || n.signature == (1, 2),
                    "non-conical node"
                );
            }
        }
    }

    #[test]
    fn mirror_surfaces_have_mirrored_nodes() {
        let sq = build_surface(Family::QC, 6, &cfg()).unwrap();
        let sqb = build_surface(Family::QbarC, 6, &cfg()).unwrap();
        let (nq, _) = enumerate_nodes(&sq, &cfg()).unwrap();
        let (nqb, _) = enumerate_nodes(&sqb, &cfg()).unwrap();
        assert_eq!(nq.len(), nqb.len());
        for n in &nq {
            let (x, y, z) = n.location;
            assert!(
                nqb.iter().any(|n2| {
                    let (x2, y2, z2) = n2.location;
                    (x - x2).hypot(y + y2).hypot(z - z2) < 1e-6 * (1.0 + x.abs() + y.abs())
                }),
                "no mirror partner for ({x}, {y}, {z})"
            );
        }
    }

    #[test]
    fn chmutov_and_sigma_d_have_same_counts() {
        for m in [4u32, 6, 9] {
            let sd = build_surface(Family::PSigmaD, m, &cfg()).unwrap();
            let ch = build_surface(Family::Chmutov, m, &cfg()).unwrap();
            let (_, rd) = enumerate_nodes(&sd, &cfg()).unwrap();
            let (_, rc) = enumerate_nodes(&ch, &cfg()).unwrap();
            assert_eq!(rd.enumerated, rc.enumerated, "m={m}");
            assert_eq!(rd.formula, rc.formula, "m={m}");
        }
    }

    #[test]
    fn hypersurface_counts_m6() {
        let h = hypersurface_node_count(6, &cfg()).unwrap();
        // level counts 15/7/3 and 15/6/4, confirmed by the grid oracle
        assert_eq!(h.count_j, 15 * 15 + 7 * 7 + 3 * 3);
        assert_eq!(h.count_j, 283);
        assert_eq!(h.excess, 6);
        assert_eq!(h.expected_excess, 6);
    }

    #[test]
    fn build_surface_rejects_bad_input() {
        assert!(build_surface(Family::PC, 4, &cfg()).is_err());
        assert!(build_surface(Family::QC, 7, &cfg()).is_err());
        assert!(build_surface(Family::PSigmaD, 2, &cfg()).is_err());
        assert!(build_surface(Family::PC, 21, &cfg()).is_err());
    }
}
