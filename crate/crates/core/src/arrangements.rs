//! The (C)/(D) line systems, their parity subsystems, and the planar census
//! operations (vertex clustering, triangular-face enumeration).
//!
//! Lines are stored in the unscaled factor form they carry in the polynomial
//! products (`y − x·t − Γ`, `x − c`, `y − c`); a normalized `(a, b, c)` view
//! is derived only for geometric predicates.

use crate::error::Error;
use crate::poly::LinearForm;
use crate::Result;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum System {
    C,
    D,
    SigmaC,
    SigmaD,
    MMinus1,
    M8,
    Custom,
}

impl System {
    pub fn as_str(&self) -> &'static str {
        match self {
            System::C => "C",
            System::D => "D",
            System::SigmaC => "Sigma_C",
            System::SigmaD => "Sigma_D",
            System::MMinus1 => "M_minus1",
            System::M8 => "M_8",
            System::Custom => "Custom",
        }
    }
}

impl std::str::FromStr for System {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "C" => System::C,
            "D" => System::D,
            "Sigma_C" | "SigmaC" => System::SigmaC,
            "Sigma_D" | "SigmaD" => System::SigmaD,
            "M_minus1" | "M-1" => System::MMinus1,
            "M_8" | "M8" => System::M8,
            other => return Err(Error::Parse(format!("unknown system `{other}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LineKind {
    /// `y − x·slope_tan − offset`
    NonVertical { slope_tan: f64, offset: f64 },
    /// `x − c`
    VerticalX { c: f64 },
    /// `y − c`
    HorizontalY { c: f64 },
}

/// Provenance label: which system the line came from, its index ν (or chord
/// index k), and the angular denominator d.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineLabel {
    pub system: System,
    pub nu: i64,
    pub d: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineForm {
    pub kind: LineKind,
    pub label: LineLabel,
}

impl LineForm {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            LineKind::NonVertical { slope_tan, offset } => y - x * slope_tan - offset,
            LineKind::VerticalX { c } => x - c,
            LineKind::HorizontalY { c } => y - c,
        }
    }

    /// The unscaled linear form used in polynomial products.
    pub fn linear_form(&self) -> LinearForm {
        match self.kind {
            LineKind::NonVertical { slope_tan, offset } => {
                LinearForm::new(-slope_tan, 1.0, -offset)
            }
            LineKind::VerticalX { c } => LinearForm::new(1.0, 0.0, -c),
            LineKind::HorizontalY { c } => LinearForm::new(0.0, 1.0, -c),
        }
    }

    /// Unit-normal representation with a fixed sign convention, for
    /// comparisons and predicates.
    pub fn normalized(&self) -> (f64, f64, f64) {
        let LinearForm { a, b, c } = self.linear_form();
        let h = a.hypot(b);
        let (mut a, mut b, mut c) = (a / h, b / h, c / h);
        if a < 0.0 || (a == 0.0 && b < 0.0) {
            a = -a;
            b = -b;
            c = -c;
        }
        (a, b, c)
    }

    pub fn same_line(&self, other: &LineForm, tol: f64) -> bool {
        let (a1, b1, c1) = self.normalized();
        let (a2, b2, c2) = other.normalized();
        (a1 - a2).abs() < tol && (b1 - b2).abs() < tol && (c1 - c2).abs() < tol
    }

    /// Direction angle in [0, π).
    pub fn direction_angle(&self) -> f64 {
        let (a, b, _) = self.normalized();
        // normal (a, b) -> direction (b, -a)
        let ang = (-a).atan2(b);
        ang.rem_euclid(PI)
    }
}

/// Offset Γ^X_{α(ν)} of the line with index ν in system X with d = 2m.
///
/// The α(ν) index maps are piecewise over four ranges per system; sums over
/// negative sine arguments cancel exactly as the construction intends, so the
/// sums are evaluated literally.
pub fn gamma_offset(system: System, nu: i64, d: u32) -> Result<f64> {
    if d % 2 != 0 || d < 6 {
        return Err(Error::Domain(format!(
            "gamma_offset({}, nu={nu}, d={d}): d must be an even integer >= 6",
            system.as_str()
        )));
    }
    let m = (d / 2) as i64;
    let s = |k: i64| -> f64 { ((k as f64) * PI / d as f64).sin() };
    match system {
        System::D => {
            if m < 3 {
                return Err(Error::Domain(format!("system D needs m >= 3, got m={m}")));
            }
            if (1..=m - 1).contains(&nu) {
                let alpha = if nu <= m / 2 { nu } else { m - nu };
                Ok(-(1..=alpha).map(|k| s(m + 1 - 2 * k)).sum::<f64>())
            } else if (m + 1..=2 * m - 1).contains(&nu) {
                let alpha = if nu <= m + m / 2 { nu - m } else { 2 * m - nu };
                Ok((1..=alpha).map(|k| s(m + 1 - 2 * k)).sum::<f64>())
            } else {
                Err(Error::Domain(format!(
                    "gamma_offset(D, nu={nu}, d={d}): nu must lie in 1..={} or {}..={}",
                    m - 1,
                    m + 1,
                    2 * m - 1
                )))
            }
        }
        System::C => {
            if m % 3 != 0 || m < 3 {
                return Err(Error::Domain(format!(
                    "system C needs m divisible by 3, got m={m}"
                )));
            }
            if (1..=m - 2).contains(&nu) {
                let alpha = if nu <= m - 3 { nu } else { 1 };
                Ok(-(1..=alpha).map(|k| s(m - 2 * k)).sum::<f64>())
            } else if nu == m - 1 {
                Ok(0.0)
            } else if (m + 1..=2 * m - 1).contains(&nu) {
                let alpha = if nu <= m + (m - 1) / 2 {
                    nu - m
                } else {
                    2 * m - 1 - nu
                };
                Ok((0..=alpha).map(|k| s(m - 2 * k)).sum::<f64>())
            } else {
                Err(Error::Domain(format!(
                    "gamma_offset(C, nu={nu}, d={d}): nu must lie in 1..={} or {}..={}",
                    m - 1,
                    m + 1,
                    2 * m - 1
                )))
            }
        }
        other => Err(Error::Domain(format!(
            "gamma_offset is defined for systems C and D, not {}",
            other.as_str()
        ))),
    }
}

/// A labeled set of lines plus the system parameter d = 2m.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub lines: Vec<LineForm>,
    pub system: System,
    pub d: u32,
}

impl Arrangement {
    pub fn m(&self) -> u32 {
        self.d / 2
    }

    pub fn custom(lines: Vec<LineForm>, d: u32) -> Self {
        Arrangement {
            lines,
            system: System::Custom,
            d,
        }
    }

    /// No two stored lines may coincide (normalized forms within 1e-10).
    pub fn check_distinct(&self) -> Result<()> {
        for i in 0..self.lines.len() {
            for j in i + 1..self.lines.len() {
                if self.lines[i].same_line(&self.lines[j], 1e-10) {
                    return Err(Error::DegenerateArrangement(format!(
                        "lines {i} and {j} coincide (nu={} and nu={})",
                        self.lines[i].label.nu, self.lines[j].label.nu
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The full 2m-line system (X): the axes x = 0, y = 0 plus the lines
/// `y = x·t_ν + Γ^X_{α(ν)}`. The y-axis carries index ν = 0 and the x = 0
/// line the pole index ν = m, so parity filtering extends to the axes.
pub fn build_system(system: System, d: u32) -> Result<Arrangement> {
    if system != System::C && system != System::D {
        return Err(Error::Domain(format!(
            "build_system supports C and D, not {}",
            system.as_str()
        )));
    }
    if d % 2 != 0 {
        return Err(Error::Domain(format!("d must be even, got {d}")));
    }
    let m = (d / 2) as i64;
    if m < 3 || (system == System::C && m % 3 != 0) {
        return Err(Error::Domain(format!(
            "invalid degree for system {}: m={m}",
            system.as_str()
        )));
    }
    let mut lines = Vec::with_capacity(d as usize);
    lines.push(LineForm {
        kind: LineKind::HorizontalY { c: 0.0 },
        label: LineLabel { system, nu: 0, d },
    });
    lines.push(LineForm {
        kind: LineKind::VerticalX { c: 0.0 },
        label: LineLabel { system, nu: m, d },
    });
    for nu in 1..2 * m {
        if nu == m {
            continue;
        }
        if system == System::C && nu == m - 1 {
            // Γ is null for this index.
        }
        let gamma = gamma_offset(system, nu, d)?;
        lines.push(LineForm {
            kind: LineKind::NonVertical {
                slope_tan: ((nu as f64) * PI / d as f64).tan(),
                offset: gamma,
            },
            label: LineLabel { system, nu, d },
        });
    }
    let arr = Arrangement { lines, system, d };
    arr.check_distinct()?;
    Ok(arr)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// Parity subsystem of a full (C) or (D) system. The axis membership rules
/// (Σ_D keeps x = 0 iff m is odd; Σ_C keeps y = 0 always and x = 0 iff m is
/// even) coincide with filtering the axis indices ν = 0 and ν = m by parity,
/// which is exactly what the product prefactors x^((1∓(−1)^m)/2)·y encode.
pub fn subsystem(arr: &Arrangement, parity: Parity) -> Result<Arrangement> {
    if arr.system != System::C && arr.system != System::D {
        return Err(Error::Domain(
            "subsystem expects a full (C) or (D) system".into(),
        ));
    }
    let want = |nu: i64| match parity {
        Parity::Odd => nu.rem_euclid(2) == 1,
        Parity::Even => nu.rem_euclid(2) == 0,
    };
    let lines: Vec<LineForm> = arr
        .lines
        .iter()
        .filter(|l| want(l.label.nu))
        .cloned()
        .collect();
    let system = match (arr.system, parity) {
        (System::D, Parity::Odd) => System::SigmaD,
        (System::C, Parity::Even) => System::SigmaC,
        _ => System::Custom,
    };
    Ok(Arrangement {
        lines,
        system,
        d: arr.d,
    })
}

/// Convenience: Σ_D for a given m.
pub fn sigma_d(m: u32) -> Result<Arrangement> {
    subsystem(&build_system(System::D, 2 * m)?, Parity::Odd)
}

/// Convenience: Σ_C for a given m (requires m = 3q).
pub fn sigma_c(m: u32) -> Result<Arrangement> {
    subsystem(&build_system(System::C, 2 * m)?, Parity::Even)
}

/// A cluster of pairwise intersections: the point plus the set of incident
/// line indices.
#[derive(Clone, Debug)]
pub struct VertexCluster {
    pub x: f64,
    pub y: f64,
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct VertexReport {
    /// (x, y, incident-line-count)
    pub points: Vec<(f64, f64, usize)>,
    pub simple: bool,
}

fn intersect(l1: &LineForm, l2: &LineForm) -> Option<(f64, f64)> {
    let f1 = l1.linear_form();
    let f2 = l2.linear_form();
    let det = f1.a * f2.b - f2.a * f1.b;
    let scale = f1.a.hypot(f1.b) * f2.a.hypot(f2.b);
    if det.abs() <= 1e-12 * scale {
        return None;
    }
    let x = (-f1.c * f2.b + f2.c * f1.b) / det;
    let y = (-f1.a * f2.c + f2.a * f1.c) / det;
    Some((x, y))
}

/// Cluster all pairwise intersection points with a scale-aware radius
/// `tol × (1 + |point|)`.
pub fn vertex_clusters(arr: &Arrangement, tol: f64) -> Result<Vec<VertexCluster>> {
    if arr.lines.len() < 2 {
        return Err(Error::Domain("need at least 2 lines".into()));
    }
    let mut clusters: Vec<VertexCluster> = Vec::new();
    for i in 0..arr.lines.len() {
        for j in i + 1..arr.lines.len() {
            let li = &arr.lines[i];
            let lj = &arr.lines[j];
            match intersect(li, lj) {
                Some((x, y)) => {
                    let r = tol * (1.0 + x.hypot(y));
                    match clusters
                        .iter_mut()
                        .find(|c| (c.x - x).hypot(c.y - y) <= r.max(tol))
                    {
                        Some(c) => {
                            if !c.lines.contains(&i) {
                                c.lines.push(i);
                            }
                            if !c.lines.contains(&j) {
                                c.lines.push(j);
                            }
                        }
                        None => clusters.push(VertexCluster {
                            x,
                            y,
                            lines: vec![i, j],
                        }),
                    }
                }
                None => {
                    // Parallel: coincident lines make the vertex set ill-defined.
                    if li.same_line(lj, 1e-10) {
                        return Err(Error::DegenerateArrangement(format!(
                            "parallel identical lines {i} and {j}"
                        )));
                    }
                }
            }
        }
    }
    clusters.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    Ok(clusters)
}

/// All intersection points with incidence counts and the simplicity flag.
pub fn vertices(arr: &Arrangement, tol: f64) -> Result<VertexReport> {
    let clusters = vertex_clusters(arr, tol)?;
    let points: Vec<(f64, f64, usize)> = clusters
        .iter()
        .map(|c| (c.x, c.y, c.lines.len()))
        .collect();
    let simple = points.iter().all(|&(_, _, n)| n == 2);
    Ok(VertexReport { points, simple })
}

/// A bounded triangular face: the three line indices and the barycenter of
/// its corners.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub lines: [usize; 3],
    pub barycenter: (f64, f64),
    pub corners: [(f64, f64); 3],
}

impl Triangle {
    pub fn side_lengths(&self) -> [f64; 3] {
        let [p, q, r] = self.corners;
        [
            (p.0 - q.0).hypot(p.1 - q.1),
            (p.0 - r.0).hypot(p.1 - r.1),
            (q.0 - r.0).hypot(q.1 - r.1),
        ]
    }
}

/// Bounded triangular faces of a simple arrangement, by exhaustive triple
/// enumeration: a triple is a face iff its three pairwise intersections are
/// distinct and every other line leaves all three corners strictly on one
/// side.
pub fn triangular_faces(arr: &Arrangement, tol: f64) -> Result<Vec<Triangle>> {
    let report = vertices(arr, tol)?;
    if !report.simple {
        return Err(Error::NotSimple(format!(
            "vertex with multiplicity > 2 present ({} lines)",
            arr.lines.len()
        )));
    }
    let n = arr.lines.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let Some(pij) = intersect(&arr.lines[i], &arr.lines[j]) else {
                continue;
            };
            for k in j + 1..n {
                let Some(pik) = intersect(&arr.lines[i], &arr.lines[k]) else {
                    continue;
                };
                let Some(pjk) = intersect(&arr.lines[j], &arr.lines[k]) else {
                    continue;
                };
                let sep = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0).hypot(p.1 - q.1);
                let scale = 1.0 + [pij, pik, pjk]
                    .iter()
                    .map(|p| p.0.hypot(p.1))
                    .fold(0.0, f64::max);
                if sep(pij, pik) <= tol * scale
                    || sep(pij, pjk) <= tol * scale
                    || sep(pik, pjk) <= tol * scale
                {
                    continue;
                }
                let mut is_face = true;
                for l in 0..n {
                    if l == i || l == j || l == k {
                        continue;
                    }
                    let f = arr.lines[l].linear_form();
                    let margin = 1e-9 * f.a.hypot(f.b) * scale;
                    let v = [
                        f.eval(pij.0, pij.1),
                        f.eval(pik.0, pik.1),
                        f.eval(pjk.0, pjk.1),
                    ];
                    if !(v.iter().all(|&x| x > margin) || v.iter().all(|&x| x < -margin)) {
                        is_face = false;
                        break;
                    }
                }
                if is_face {
                    out.push(Triangle {
                        lines: [i, j, k],
                        barycenter: (
                            (pij.0 + pik.0 + pjk.0) / 3.0,
                            (pij.1 + pik.1 + pjk.1) / 3.0,
                        ),
                        corners: [pij, pik, pjk],
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.barycenter.partial_cmp(&b.barycenter).unwrap() );
    Ok(out)
}

/// The unique equilateral triangle of Σ_C (side lengths equal within 1e-7
/// relative). Errors if none or several are found.
pub fn equilateral_triangle(arr: &Arrangement, tol: f64) -> Result<Triangle> {
    let tris = triangular_faces(arr, tol)?;
    let mut hits: Vec<Triangle> = Vec::new();
    for t in tris {
        let s = t.side_lengths();
        let mean = (s[0] + s[1] + s[2]) / 3.0;
        if s.iter().all(|&x| (x - mean).abs() < 1e-7 * mean) {
            hits.push(t);
        }
    }
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        n => Err(Error::Domain(format!(
            "expected exactly one equilateral triangle, found {n}"
        ))),
    }
}

/// Does rotating the line set by `angle` about `center` map it to itself
/// (as a set of lines, within tol)?
pub fn rotation_maps_to_self(arr: &Arrangement, center: (f64, f64), angle: f64, tol: f64) -> bool {
    let (s, c) = angle.sin_cos();
    let rotated: Vec<(f64, f64, f64)> = arr
        .lines
        .iter()
        .map(|l| {
            // rotate the normalized form: normal n -> R n, offset adjusts about center
            let (a, b, off) = l.normalized();
            let (na, nb) = (a * c - b * s, a * s + b * c);
            // line a x + b y + off = 0; after rotating points about center:
            // new offset = off + (a cx + b cy) - (na cx + nb cy)
            let noff = off + (a * center.0 + b * center.1) - (na * center.0 + nb * center.1);
            if na < 0.0 || (na.abs() < 1e-15 && nb < 0.0) {
                (-na, -nb, -noff)
            } else {
                (na, nb, noff)
            }
        })
        .collect();
    rotated.iter().all(|&(a, b, off)| {
        arr.lines.iter().any(|l| {
            let (la, lb, lc) = l.normalized();
            (la - a).abs() < tol && (lb - b).abs() < tol && (lc - off).abs() < tol
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_examples() {
        // direct evaluation of the defining sum with m=3, alpha(1)=1
        let g = gamma_offset(System::D, 1, 6).unwrap();
        assert!((g - (-(2.0 * PI / 6.0).sin())).abs() < 1e-15);
        assert!((g + 0.8660254037844386).abs() < 1e-10);
        // the C-system index m-1 has a null offset
        for m in [3i64, 6, 9, 12] {
            assert_eq!(gamma_offset(System::C, m - 1, 2 * m as u32).unwrap(), 0.0);
        }
        // single-term sum, sign flip of the nu=1 case
        for m in [3i64, 4, 5, 9] {
            let d = 2 * m as u32;
            let g = gamma_offset(System::D, m + 1, d).unwrap();
            let s = ((m - 1) as f64 * PI / d as f64).sin();
            assert!((g - s).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_domain_errors() {
        assert!(matches!(
            gamma_offset(System::D, 3, 6),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            gamma_offset(System::D, 6, 6),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            gamma_offset(System::C, 1, 8),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            gamma_offset(System::C, 9, 18),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn build_system_d6() {
        // smallest D system, m=3: tangents at nu in {1,2,4,5} plus both axes
        let arr = build_system(System::D, 6).unwrap();
        assert_eq!(arr.lines.len(), 6);
        let mut tangents: Vec<f64> = arr
            .lines
            .iter()
            .filter_map(|l| match l.kind {
                LineKind::NonVertical { slope_tan, .. } => Some(slope_tan),
                _ => None,
            })
            .collect();
        tangents.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expect: Vec<f64> = [1, 2, 4, 5]
            .iter()
            .map(|&nu| (nu as f64 * PI / 6.0).tan())
            .collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (t, e) in tangents.iter().zip(&expect) {
            assert!((t - e).abs() < 1e-12);
        }
    }

    #[test]
    fn build_system_rejects_bad_degrees() {
        assert!(build_system(System::C, 8).is_err()); // m=4 not divisible by 3
        assert!(build_system(System::D, 4).is_err()); // m=2 too small
        assert!(build_system(System::SigmaC, 18).is_err());
    }

    #[test]
    fn subsystem_counts_and_axes() {
        // Sigma_D m=7 has 7 lines (x-axis pole index included since m odd)
        let d14 = build_system(System::D, 14).unwrap();
        let sd = subsystem(&d14, Parity::Odd).unwrap();
        assert_eq!(sd.lines.len(), 7);
        assert!(sd
            .lines
            .iter()
            .any(|l| matches!(l.kind, LineKind::VerticalX { .. })));
        assert!(!sd
            .lines
            .iter()
            .any(|l| matches!(l.kind, LineKind::HorizontalY { .. })));

        // Sigma_C m=9 has 9 lines, with y = 0 and no x = 0
        let c18 = build_system(System::C, 18).unwrap();
        let sc = subsystem(&c18, Parity::Even).unwrap();
        assert_eq!(sc.lines.len(), 9);
        assert!(sc
            .lines
            .iter()
            .any(|l| matches!(l.kind, LineKind::HorizontalY { .. })));
        assert!(!sc
            .lines
            .iter()
            .any(|l| matches!(l.kind, LineKind::VerticalX { .. })));

        // (D, 6) even subsystem: nu in {2, 4} plus the y-axis = 3 lines
        let d6 = build_system(System::D, 6).unwrap();
        let se = subsystem(&d6, Parity::Even).unwrap();
        assert_eq!(se.lines.len(), 3);

        // axis parity rule equals the Eq.-style prefactor rule for every m
        for m in [3u32, 4, 5, 6, 7, 9, 12] {
            let sd = sigma_d(m).unwrap();
            let has_x = sd
                .lines
                .iter()
                .any(|l| matches!(l.kind, LineKind::VerticalX { .. }));
            assert_eq!(has_x, m % 2 == 1, "Sigma_D x-axis rule at m={m}");
            assert_eq!(sd.lines.len() as u32, m);
        }
        for m in [3u32, 6, 9, 12, 15, 18] {
            let sc = sigma_c(m).unwrap();
            let has_x = sc
                .lines
                .iter()
                .any(|l| matches!(l.kind, LineKind::VerticalX { .. }));
            assert_eq!(has_x, m % 2 == 0, "Sigma_C x-axis rule at m={m}");
            assert_eq!(sc.lines.len() as u32, m);
        }
    }

    #[test]
    fn vertex_census() {
        for m in [6u32, 9, 12, 15, 18] {
            let sc = sigma_c(m).unwrap();
            let rep = vertices(&sc, 1e-9).unwrap();
            assert_eq!(rep.points.len() as u32, m * (m - 1) / 2, "Sigma_C m={m}");
            assert!(rep.simple);
        }
        for m in [4u32, 7, 9, 12] {
            let sd = sigma_d(m).unwrap();
            let rep = vertices(&sd, 1e-9).unwrap();
            assert_eq!(rep.points.len() as u32, m * (m - 1) / 2, "Sigma_D m={m}");
            assert!(rep.simple);
        }
    }

    #[test]
    fn line_evaluation_on_line() {
        let arr = sigma_c(9).unwrap();
        for l in &arr.lines {
            // pick two points on the line and check the residual bound
            let pts = match l.kind {
                LineKind::NonVertical { slope_tan, offset } => {
                    vec![(0.0, offset), (2.0, 2.0 * slope_tan + offset)]
                }
                LineKind::VerticalX { c } => vec![(c, -1.0), (c, 3.0)],
                LineKind::HorizontalY { c } => vec![(-1.0, c), (5.0, c)],
            };
            for (x, y) in pts {
                assert!(l.eval(x, y).abs() <= 1e-12 * (1.0 + x.abs() + y.abs()));
            }
        }
    }

    #[test]
    fn triangle_census() {
        let expect_c = |m: u32| 1 + m * (m - 3) / 3;
        for m in [6u32, 9, 15, 18] {
            let sc = sigma_c(m).unwrap();
            let tris = triangular_faces(&sc, 1e-9).unwrap();
            assert_eq!(tris.len() as u32, expect_c(m), "Sigma_C m={m}");
        }
        // closed form for Sigma_D (m >= 4)
        for m in [4u32, 5, 6, 7, 9, 12] {
            let sd = sigma_d(m).unwrap();
            let tris = triangular_faces(&sd, 1e-9).unwrap();
            let expect = if m % 3 == 0 {
                m * m / 3 - m
            } else {
                (m * m - 3 * m + 2) / 3
            };
            assert_eq!(tris.len() as u32, expect, "Sigma_D m={m}");
        }
        // Sigma_C has one more triangle than Sigma_D for m = 3q
        for m in [6u32, 9, 12, 18] {
            let tc = triangular_faces(&sigma_c(m).unwrap(), 1e-9).unwrap().len();
            let td = triangular_faces(&sigma_d(m).unwrap(), 1e-9).unwrap().len();
            assert_eq!(tc, td + 1, "m={m}");
        }
    }

    #[test]
    fn sigma_d_m3_boundary_case() {
        // Three pairwise-crossing non-concurrent lines always bound one
        // geometric triangle; at m=3 it carries a maximum, not a minimum,
        // so the minima-count closed form gives 0 while the face count is 1.
        let sd = sigma_d(3).unwrap();
        let tris = triangular_faces(&sd, 1e-9).unwrap();
        assert_eq!(tris.len(), 1);
    }

    #[test]
    fn non_simple_arrangement_is_rejected() {
        // three concurrent lines through the origin
        let mk = |t: f64| LineForm {
            kind: LineKind::NonVertical {
                slope_tan: t,
                offset: 0.0,
            },
            label: LineLabel {
                system: System::Custom,
                nu: 0,
                d: 0,
            },
        };
        let arr = Arrangement::custom(vec![mk(0.0), mk(1.0), mk(-1.0)], 0);
        let rep = vertices(&arr, 1e-9).unwrap();
        assert!(!rep.simple);
        assert!(matches!(
            triangular_faces(&arr, 1e-9),
            Err(Error::NotSimple(_))
        ));
    }

    #[test]
    fn coincident_lines_are_degenerate() {
        let mk = |c: f64| LineForm {
            kind: LineKind::VerticalX { c },
            label: LineLabel {
                system: System::Custom,
                nu: 0,
                d: 0,
            },
        };
        let arr = Arrangement::custom(vec![mk(1.0), mk(1.0)], 0);
        assert!(matches!(
            vertices(&arr, 1e-9),
            Err(Error::DegenerateArrangement(_))
        ));
        // distinct parallels are fine, they just never intersect
        let arr2 = Arrangement::custom(vec![mk(0.0), mk(1.0), mk(2.0)], 0);
        let rep = vertices(&arr2, 1e-9).unwrap();
        assert_eq!(rep.points.len(), 0);
        assert!(rep.simple);
    }

    #[test]
    fn sigma_c_rotation_symmetry() {
        for m in [6u32, 9, 12] {
            let sc = sigma_c(m).unwrap();
            let t = equilateral_triangle(&sc, 1e-9).unwrap();
            assert!(rotation_maps_to_self(
                &sc,
                t.barycenter,
                2.0 * PI / 3.0,
                1e-8
            ));
        }
    }
}
