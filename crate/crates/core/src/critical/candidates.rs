//! Combinatorial prediction of extrema locations from chord-line
//! concurrences.
//!
//! The chord lines `L̄_{k,m}` pass through the unit-circle point at angle
//! 2kπ/6m with slope −tan(kπ/6m); every extremum of the normalized
//! polynomials is a point where exactly three of them meet. `M₋₁`
//! (indices 6ν, 6ν+2) carries the minima and `M₈` (indices 6ν+4) the maxima
//! of the mirrored polynomial; the unmirrored polynomial's extrema are the
//! same points with y negated.

use super::Window2;
use crate::arrangements::{
    vertex_clusters, Arrangement, LineForm, LineKind, LineLabel, System, VertexCluster,
};
use crate::error::Error;
use crate::Result;
use std::f64::consts::PI;

/// The line `L̄_{k,m}`. Indices are periodic mod 6m; k ≡ 3m maps to the
/// vertical line x = −1 (the tangent pole).
pub fn chord_line(k: i64, m: u32) -> LineForm {
    let period = 6 * m as i64;
    let kk = k.rem_euclid(period);
    let label = LineLabel {
        system: System::Custom,
        nu: k,
        d: 6 * m,
    };
    if kk == 3 * m as i64 {
        return LineForm {
            kind: LineKind::VerticalX { c: -1.0 },
            label,
        };
    }
    let phi = kk as f64 * PI / (6.0 * m as f64);
    let two_phi = 2.0 * phi;
    LineForm {
        kind: LineKind::NonVertical {
            slope_tan: -phi.tan(),
            offset: two_phi.cos() * phi.tan() + two_phi.sin(),
        },
        label,
    }
}

fn require_3q(m: u32, what: &str) -> Result<u32> {
    if m < 3 || m % 3 != 0 {
        return Err(Error::Domain(format!("{what} needs m = 3q, got m={m}")));
    }
    Ok(m / 3)
}

/// M₋₁ = { L̄_{6ν}, L̄_{6ν+2} : ν = 0..m−1 }: 2m lines whose triple points
/// are the minima of the mirrored polynomial.
pub fn minima_line_set(m: u32) -> Result<Arrangement> {
    require_3q(m, "minima_line_set")?;
    let mut lines = Vec::with_capacity(2 * m as usize);
    for nu in 0..m as i64 {
        lines.push(chord_line(6 * nu, m));
        lines.push(chord_line(6 * nu + 2, m));
    }
    Ok(Arrangement {
        lines,
        system: System::MMinus1,
        d: 2 * m,
    })
}

/// M₈ = { L̄_{6ν+4} : ν = 0..m−1 }: m lines whose triple points are the
/// maxima of the mirrored polynomial.
pub fn maxima_line_set(m: u32) -> Result<Arrangement> {
    require_3q(m, "maxima_line_set")?;
    let lines = (0..m as i64).map(|nu| chord_line(6 * nu + 4, m)).collect();
    Ok(Arrangement {
        lines,
        system: System::M8,
        d: 2 * m,
    })
}

fn triple_clusters(arr: &Arrangement, tol: f64) -> Result<Vec<VertexCluster>> {
    Ok(vertex_clusters(arr, tol)?
        .into_iter()
        .filter(|c| c.lines.len() == 3)
        .collect())
}

/// Label the lines of an M set 1..n in the paper's sweep order: l₁ is the
/// x-axis chord (k = 0 for M₋₁, k = 4 for M₈) and subsequent labels follow
/// consecutive clockwise line directions, which is ascending chord index.
fn labels_by_index(arr: &Arrangement) -> Vec<i64> {
    // arr.lines[i].label.nu is the chord index k; label position = rank of k.
    let mut ks: Vec<i64> = arr.lines.iter().map(|l| l.label.nu).collect();
    ks.sort_unstable();
    arr.lines
        .iter()
        .map(|l| (ks.binary_search(&l.label.nu).unwrap() + 1) as i64)
        .collect()
}

/// One detected triple concurrence with its relabeled line indices and
/// whether it satisfies the paper's parity/sum rule.
#[derive(Clone, Debug)]
pub struct Concurrence {
    pub point: (f64, f64),
    pub labels: [i64; 3],
    pub rule_ok: bool,
}

/// Detected triple points of an M set together with the index-rule check.
/// For M₋₁ the labels must be all even summing to 2m+4 or all odd summing to
/// 2m+3 (mod 2m); for M₈ they sum to 1 (mod m).
pub fn concurrence_report(arr: &Arrangement, tol: f64) -> Result<Vec<Concurrence>> {
    let m = arr.m() as i64;
    let labels = labels_by_index(arr);
    let clusters = triple_clusters(arr, tol)?;
    Ok(clusters
        .into_iter()
        .map(|c| {
            let mut ls = [
                labels[c.lines[0]],
                labels[c.lines[1]],
                labels[c.lines[2]],
            ];
            ls.sort_unstable();
            let sum = ls.iter().sum::<i64>();
            let rule_ok = match arr.system {
                System::MMinus1 => {
                    let all_even = ls.iter().all(|l| l % 2 == 0);
                    let all_odd = ls.iter().all(|l| l % 2 == 1);
                    (all_even && sum.rem_euclid(2 * m) == (2 * m + 4).rem_euclid(2 * m))
                        || (all_odd && sum.rem_euclid(2 * m) == (2 * m + 3).rem_euclid(2 * m))
                }
                System::M8 => sum.rem_euclid(m) == 1 % m,
                _ => false,
            };
            Concurrence {
                point: (c.x, c.y),
                labels: ls,
                rule_ok,
            }
        })
        .collect())
}

fn check_count(found: usize, expected: usize, what: &str) -> Result<()> {
    if found != expected {
        return Err(Error::CountMismatch {
            what: what.to_string(),
            expected,
            found,
        });
    }
    Ok(())
}

/// Predicted minima of the normalized polynomial J_m^C: the M₋₁ triple
/// points mirrored through the x-axis. Exactly 1 + m(m−3)/3 points.
pub fn candidate_minima(m: u32, tol: f64) -> Result<Vec<(f64, f64)>> {
    let arr = minima_line_set(m)?;
    let clusters = triple_clusters(&arr, tol)?;
    check_count(
        clusters.len(),
        (1 + m * (m - 3) / 3) as usize,
        &format!("M_minus1 triple concurrences at m={m}"),
    )?;
    let mut pts: Vec<(f64, f64)> = clusters.iter().map(|c| (c.x, -c.y)).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(pts)
}

/// Predicted maxima of J_m^C: mirrored M₈ triple points, m(m−3)/6 of them.
pub fn candidate_maxima(m: u32, tol: f64) -> Result<Vec<(f64, f64)>> {
    let arr = maxima_line_set(m)?;
    let clusters = triple_clusters(&arr, tol)?;
    check_count(
        clusters.len(),
        (m * (m - 3) / 6) as usize,
        &format!("M_8 triple concurrences at m={m}"),
    )?;
    let mut pts: Vec<(f64, f64)> = clusters.iter().map(|c| (c.x, -c.y)).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(pts)
}

fn line_by_label(arr: &Arrangement, label: i64) -> &LineForm {
    let labels = labels_by_index(arr);
    let idx = labels.iter().position(|&l| l == label).unwrap();
    &arr.lines[idx]
}

fn intersect_labels(arr: &Arrangement, l1: i64, l2: i64) -> Option<(f64, f64)> {
    let f1 = line_by_label(arr, l1).linear_form();
    let f2 = line_by_label(arr, l2).linear_form();
    let det = f1.a * f2.b - f2.a * f1.b;
    if det.abs() < 1e-13 {
        return None;
    }
    Some((
        (-f1.c * f2.b + f2.c * f1.b) / det,
        (-f1.a * f2.c + f2.a * f1.c) / det,
    ))
}

/// The minima on the x-axis: l₁ ∩ l_{3+2k}, k = 0..⌊(m−3)/2⌋, giving
/// 1 + ⌊(m−3)/2⌋ points (the central one at k = q−1).
pub fn xaxis_minima(m: u32) -> Result<Vec<(f64, f64)>> {
    require_3q(m, "xaxis_minima")?;
    let arr = minima_line_set(m)?;
    let mut out = Vec::new();
    for k in 0..=(m as i64 - 3) / 2 {
        if let Some(p) = intersect_labels(&arr, 1, 3 + 2 * k) {
            out.push(p);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

fn wrap_label(l: i64, n: i64) -> i64 {
    (l - 1).rem_euclid(n) + 1
}

fn push_with_rotations(
    arr: &Arrangement,
    pairs: &mut Vec<(i64, i64)>,
    l1: i64,
    l2: i64,
    shift: i64,
    n: i64,
) {
    for rot in 0..3 {
        pairs.push((
            wrap_label(l1 + rot * shift, n),
            wrap_label(l2 + rot * shift, n),
        ));
    }
    let _ = arr;
}

/// Generator for the full predicted minima set from the printed interval
/// patterns (x-axis pairs, the odd-index rows, the even-index pairs), closed
/// under the 3-fold rotation that shifts labels by 2q. For q ≤ 3 the odd
/// rows are empty, matching the count formulas. Cluster detection stays
/// authoritative; this exists to test the combinatorics.
pub fn generated_minima(m: u32) -> Result<Vec<(f64, f64)>> {
    let q = require_3q(m, "generated_minima")? as i64;
    let arr = minima_line_set(m)?;
    let n = 2 * m as i64;
    let mut pairs: Vec<(i64, i64)> = Vec::new();
    // x-axis family
    for k in 0..=(m as i64 - 3) / 2 {
        push_with_rotations(&arr, &mut pairs, 1, 3 + 2 * k, 2 * q, n);
    }
    // odd rows: row j pairs (3+2j, 3+2j+2t) and (6q−1−2j, 6q−1−2j−2t)
    let mut j = 0i64;
    while q - 3 - 2 * j >= 1 {
        let a = 3 + 2 * j;
        let b = 6 * q - 1 - 2 * j;
        for t in 1..=(q - 3 - 2 * j) {
            push_with_rotations(&arr, &mut pairs, a, a + 2 * t, 2 * q, n);
            push_with_rotations(&arr, &mut pairs, b, b - 2 * t, 2 * q, n);
        }
        j += 1;
    }
    // even pairs (2a, 2b), 1 <= a < b <= q
    for a in 1..=q {
        for b in (a + 1)..=q {
            push_with_rotations(&arr, &mut pairs, 2 * a, 2 * b, 2 * q, n);
        }
    }
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (l1, l2) in pairs {
        if let Some(p) = intersect_labels(&arr, l1, l2) {
            let dup = pts
                .iter()
                .any(|&(x, y)| (x - p.0).hypot(y - p.1) < 1e-7 * (1.0 + p.0.hypot(p.1)));
            if !dup {
                pts.push(p);
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(pts)
}

/// Generator for the predicted maxima: pairs (i, j), 1 ≤ i < j ≤ q, closed
/// under the label shift by q.
pub fn generated_maxima(m: u32) -> Result<Vec<(f64, f64)>> {
    let q = require_3q(m, "generated_maxima")? as i64;
    let arr = maxima_line_set(m)?;
    let n = m as i64;
    let mut pairs = Vec::new();
    for i in 1..=q {
        for j in (i + 1)..=q {
            push_with_rotations(&arr, &mut pairs, i, j, q, n);
        }
    }
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (l1, l2) in pairs {
        if let Some(p) = intersect_labels(&arr, l1, l2) {
            let dup = pts
                .iter()
                .any(|&(x, y)| (x - p.0).hypot(y - p.1) < 1e-7 * (1.0 + p.0.hypot(p.1)));
            if !dup {
                pts.push(p);
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(pts)
}

/// Window covering all predicted critical points of the normalized
/// polynomials (chord concurrences stay inside the unit disk; the vertex
/// saddles reach further out, so callers usually union with those).
pub fn candidate_window(points: &[(f64, f64)]) -> Window2 {
    Window2::around_points(points.iter().copied(), 1.15)
}

/// Do two point sets match bijectively within `tol` (scale-aware)?
pub fn sets_match(a: &[(f64, f64)], b: &[(f64, f64)], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for &(x, y) in a {
        for (i, &(bx, by)) in b.iter().enumerate() {
            if !used[i] && (x - bx).hypot(y - by) <= tol * (1.0 + x.hypot(y)) {
                used[i] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chord_line_special_indices() {
        let m = 9;
        // k=0 is the x-axis
        let l0 = chord_line(0, m);
        assert!(l0.eval(2.0, 0.0).abs() < 1e-15);
        assert!(l0.eval(-3.0, 0.0).abs() < 1e-15);
        // k=3m is the vertical line x = -1
        let l3m = chord_line(3 * m as i64, m);
        assert!(matches!(l3m.kind, LineKind::VerticalX { c } if c == -1.0));
        // k=6m is periodic back to k=0
        let l6m = chord_line(6 * m as i64, m);
        assert!(l0.same_line(&l6m, 1e-12));
    }

    #[test]
    fn chord_lines_are_unit_circle_chords() {
        // L̄_k passes through (cos 2φ, sin 2φ) with φ = kπ/6m
        let m = 9;
        for k in [1i64, 2, 4, 6, 10, 25] {
            let phi = k as f64 * PI / (6.0 * m as f64);
            let l = chord_line(k, m);
            assert!(l.eval((2.0 * phi).cos(), (2.0 * phi).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn concurrence_counts() {
        for (m, expect_min, expect_max) in [(6u32, 7, 3), (9, 19, 9), (18, 91, 45)] {
            let mins = candidate_minima(m, 1e-9).unwrap();
            assert_eq!(mins.len(), expect_min, "minima m={m}");
            let maxs = candidate_maxima(m, 1e-9).unwrap();
            assert_eq!(maxs.len(), expect_max, "maxima m={m}");
        }
    }

    #[test]
    fn index_sum_rules_hold() {
        for m in [6u32, 9, 12, 15, 18] {
            let arr = minima_line_set(m).unwrap();
            let report = concurrence_report(&arr, 1e-9).unwrap();
            assert_eq!(report.len(), (1 + m * (m - 3) / 3) as usize);
            assert!(report.iter().all(|c| c.rule_ok), "M-1 rules at m={m}");
            let arr8 = maxima_line_set(m).unwrap();
            let report8 = concurrence_report(&arr8, 1e-9).unwrap();
            assert_eq!(report8.len(), (m * (m - 3) / 6) as usize);
            assert!(report8.iter().all(|c| c.rule_ok), "M8 rules at m={m}");
        }
    }

    #[test]
    fn xaxis_minima_counts_and_membership() {
        for m in [6u32, 9, 15, 18] {
            let axis = xaxis_minima(m).unwrap();
            assert_eq!(axis.len(), (1 + (m - 3) / 2) as usize, "m={m}");
            assert!(axis.iter().all(|&(_, y)| y.abs() < 1e-10));
            // they are a subset of the full candidate set
            let all = candidate_minima(m, 1e-9).unwrap();
            for &p in &axis {
                assert!(all
                    .iter()
                    .any(|&(x, y)| (x - p.0).hypot(y - p.1) < 1e-8 * (1.0 + p.0.abs())));
            }
        }
    }

    #[test]
    fn generators_match_cluster_detection() {
        for m in [6u32, 9, 12, 15, 18] {
            let detected: Vec<(f64, f64)> = candidate_minima(m, 1e-9)
                .unwrap()
                .iter()
                .map(|&(x, y)| (x, -y))
                .collect();
            let generated = generated_minima(m).unwrap();
            assert!(
                sets_match(&generated, &detected, 1e-6),
                "minima generator mismatch at m={m}: {} vs {}",
                generated.len(),
                detected.len()
            );
            let detected8: Vec<(f64, f64)> = candidate_maxima(m, 1e-9)
                .unwrap()
                .iter()
                .map(|&(x, y)| (x, -y))
                .collect();
            let generated8 = generated_maxima(m).unwrap();
            assert!(
                sets_match(&generated8, &detected8, 1e-6),
                "maxima generator mismatch at m={m}"
            );
        }
    }

    #[test]
    fn rejects_non_3q() {
        assert!(candidate_minima(7, 1e-9).is_err());
        assert!(maxima_line_set(10).is_err());
    }
}
