//! Deterministic JSON / CSV emitters and the JSON importer.
//!
//! Floats are written with 17 significant digits so outputs are byte-stable
//! and round-trip exactly; coefficient pruning (1e-9 relative) happens only
//! here, never inside the pipeline.

use crate::arrangements::{Arrangement, LineKind};
use crate::critical::{CriticalPoint, CriticalSpectrum};
use crate::error::Error;
use crate::poly::{BivarPoly, UnivarPoly};
use crate::surfaces::{Node, NodeCountReport, SurfaceSpec};
use crate::Result;
use serde::Deserialize;
use std::fmt::Write as _;

const PRUNE_REL: f64 = 1e-9;

/// 17-significant-digit decimal representation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn poly_json(p: &BivarPoly) -> String {
    let mut s = String::new();
    let terms = p.terms(PRUNE_REL);
    write!(
        s,
        "{{\"degree\": {}, \"vars\": [\"x\",\"y\"], \"terms\": [",
        p.degree()
    )
    .unwrap();
    for (n, (i, j, c)) in terms.iter().enumerate() {
        if n > 0 {
            s.push_str(", ");
        }
        write!(s, "{{\"i\": {i}, \"j\": {j}, \"c\": {}}}", fmt_f64(*c)).unwrap();
    }
    s.push_str("]}");
    s
}

pub fn univar_json(p: &UnivarPoly) -> String {
    let mut s = String::new();
    let scale = p.coeff_scale();
    write!(
        s,
        "{{\"degree\": {}, \"vars\": [\"z\"], \"terms\": [",
        p.degree()
    )
    .unwrap();
    let mut first = true;
    for (k, &c) in p.c.iter().enumerate() {
        if c.abs() > PRUNE_REL * scale {
            if !first {
                s.push_str(", ");
            }
            write!(s, "{{\"i\": {k}, \"c\": {}}}", fmt_f64(c)).unwrap();
            first = false;
        }
    }
    s.push_str("]}");
    s
}

pub fn surface_json(s: &SurfaceSpec) -> String {
    format!(
        "{{\"family\": \"{}\", \"m\": {}, \"xy_part\": {}, \"z_part\": {}}}",
        s.family.as_str(),
        s.m,
        poly_json(&s.xy_part),
        univar_json(&s.z_part)
    )
}

#[derive(Deserialize)]
struct TermIn {
    i: usize,
    #[serde(default)]
    j: Option<usize>,
    c: f64,
}

#[derive(Deserialize)]
struct PolyIn {
    #[allow(dead_code)]
    degree: usize,
    vars: Vec<String>,
    terms: Vec<TermIn>,
}

pub fn read_poly_json(text: &str) -> Result<BivarPoly> {
    let p: PolyIn =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("polynomial JSON: {e}")))?;
    if p.vars != ["x", "y"] {
        return Err(Error::Parse(format!(
            "expected vars [\"x\",\"y\"], got {:?}",
            p.vars
        )));
    }
    let terms: Vec<(usize, usize, f64)> = p
        .terms
        .iter()
        .map(|t| (t.i, t.j.unwrap_or(0), t.c))
        .collect();
    Ok(BivarPoly::from_terms(&terms))
}

pub fn read_univar_json(text: &str) -> Result<UnivarPoly> {
    let p: PolyIn =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("polynomial JSON: {e}")))?;
    if p.vars != ["z"] {
        return Err(Error::Parse(format!(
            "expected vars [\"z\"], got {:?}",
            p.vars
        )));
    }
    let order = p.terms.iter().map(|t| t.i).max().unwrap_or(0);
    let mut c = vec![0.0; order + 1];
    for t in &p.terms {
        c[t.i] += t.c;
    }
    Ok(UnivarPoly::new(c))
}

pub fn arrangement_json(arr: &Arrangement) -> String {
    let mut s = String::new();
    write!(
        s,
        "{{\"system\": \"{}\", \"d\": {}, \"lines\": [",
        arr.system.as_str(),
        arr.d
    )
    .unwrap();
    for (n, l) in arr.lines.iter().enumerate() {
        if n > 0 {
            s.push_str(", ");
        }
        match l.kind {
            LineKind::NonVertical { slope_tan, offset } => write!(
                s,
                "{{\"kind\": \"non_vertical\", \"t\": {}, \"gamma\": {}, \"nu\": {}}}",
                fmt_f64(slope_tan),
                fmt_f64(offset),
                l.label.nu
            )
            .unwrap(),
            LineKind::VerticalX { c } => write!(
                s,
                "{{\"kind\": \"vertical_x\", \"c\": {}, \"nu\": {}}}",
                fmt_f64(c),
                l.label.nu
            )
            .unwrap(),
            LineKind::HorizontalY { c } => write!(
                s,
                "{{\"kind\": \"horizontal_y\", \"c\": {}, \"nu\": {}}}",
                fmt_f64(c),
                l.label.nu
            )
            .unwrap(),
        }
    }
    s.push_str("]}");
    s
}

pub fn vertex_csv(points: &[(f64, f64, usize)]) -> String {
    let mut s = String::from("x,y,count\n");
    for &(x, y, n) in points {
        writeln!(s, "{},{},{n}", fmt_f64(x), fmt_f64(y)).unwrap();
    }
    s
}

pub fn critical_csv(points: &[CriticalPoint]) -> String {
    let mut s = String::from("x,y,value,morse,grad_norm,hessian_det\n");
    for p in points {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt_f64(p.location.0),
            fmt_f64(p.location.1),
            fmt_f64(p.value),
            p.morse.as_str(),
            fmt_f64(p.grad_norm),
            fmt_f64(p.hessian_det)
        )
        .unwrap();
    }
    s
}

pub fn spectrum_json(s: &CriticalSpectrum) -> String {
    let mut out = String::from("{\"levels\": [");
    for (n, (l, c)) in s.levels.iter().zip(&s.counts).enumerate() {
        if n > 0 {
            out.push_str(", ");
        }
        write!(out, "{{\"value\": {}, \"count\": {c}}}", fmt_f64(*l)).unwrap();
    }
    write!(out, "], \"total\": {}}}", s.points.len()).unwrap();
    out
}

pub fn node_csv(nodes: &[Node]) -> String {
    let mut s = String::from("x,y,z,class,grad_norm,hessian3_det,sig_plus,sig_minus\n");
    for n in nodes {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(n.location.0),
            fmt_f64(n.location.1),
            fmt_f64(n.location.2),
            n.class.as_str(),
            fmt_f64(n.grad_norm),
            fmt_f64(n.hessian3_det),
            n.signature.0,
            n.signature.1
        )
        .unwrap();
    }
    s
}

pub fn node_report_json(r: &NodeCountReport) -> String {
    format!(
        "{{\"family\": \"{}\", \"m\": {}, \"enumerated\": {}, \"formula\": {}, \"per_class\": {{\"vertex_type\": {}, \"triangle_type\": {}}}, \"certified\": {}}}",
        r.family.as_str(),
        r.m,
        r.enumerated,
        r.formula,
        r.vertex_type,
        r.triangle_type,
        r.certified
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn formatting_is_17_significant_digits() {
        assert_eq!(fmt_f64(27.0), "2.7000000000000000e1");
        assert_eq!(fmt_f64(-1.0), "-1.0000000000000000e0");
    }

    #[test]
    fn poly_json_round_trip_evaluates_identically() {
        let p = BivarPoly::from_terms(&[(0, 0, -1.0), (2, 1, 27.5), (5, 3, -1e-4)]);
        let text = poly_json(&p);
        let q = read_poly_json(&text).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let (x, y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let a = p.eval(x, y);
            let b = q.eval(x, y);
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn emitters_are_deterministic() {
        let p = BivarPoly::from_terms(&[(1, 1, std::f64::consts::PI), (0, 2, -0.125)]);
        assert_eq!(poly_json(&p), poly_json(&p));
        let arr = crate::arrangements::sigma_c(6).unwrap();
        assert_eq!(arrangement_json(&arr), arrangement_json(&arr));
    }

    #[test]
    fn import_rejects_wrong_vars() {
        assert!(read_poly_json("{\"degree\": 1, \"vars\": [\"z\"], \"terms\": []}").is_err());
        assert!(read_univar_json("{\"degree\": 1, \"vars\": [\"x\",\"y\"], \"terms\": []}").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_random_polys(
            terms in proptest::collection::vec((0usize..6, 0usize..6, -100.0f64..100.0), 1..12),
            x in -1.5f64..1.5, y in -1.5f64..1.5,
        ) {
            let p = BivarPoly::from_terms(&terms);
            let q = read_poly_json(&poly_json(&p)).unwrap();
            let a = p.eval(x, y);
            let b = q.eval(x, y);
            // pruning may drop terms below 1e-9 relative; allow exactly that slack
            prop_assert!((a - b).abs() <= 1e-7 * (1.0 + p.coeff_scale()));
        }
    }
}
