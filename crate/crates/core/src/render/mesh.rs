//! Isosurface triangulation on a uniform grid, clipped to the inscribed
//! sphere of the volume window.
//!
//! Each grid cube is split into the six tetrahedra sharing its main
//! diagonal; the split induces the same diagonal on both sides of every
//! shared cube face, and zero-crossing vertices are welded through a
//! grid-edge key map, so the mesh is watertight away from singular points
//! and the clip boundary.

use super::{RenderConfig, Window3};
use crate::error::Error;
use crate::exec;
use crate::export::fmt_f64;
use crate::surfaces::SurfaceSpec;
use crate::Result;
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, Default)]
pub struct MeshData {
    pub vertices: Vec<(f64, f64, f64)>,
    pub triangles: Vec<[usize; 3]>,
    pub warning: Option<String>,
}

// corner offsets of a cube
const CORNERS: [(usize, usize, usize); 8] = [
    (0, 0, 0),
    (1, 0, 0),
    (1, 1, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 0, 1),
    (1, 1, 1),
    (0, 1, 1),
];

// six tetrahedra sharing the 0-6 diagonal
const TETS: [[usize; 4]; 6] = [
    [0, 1, 2, 6],
    [0, 2, 3, 6],
    [0, 3, 7, 6],
    [0, 7, 4, 6],
    [0, 4, 5, 6],
    [0, 5, 1, 6],
];

struct GridCtx {
    xs: Vec<f64>,
    ys: Vec<f64>,
    zs: Vec<f64>,
    np: usize,
}

impl GridCtx {
    fn corner_id(&self, c: (usize, usize, usize)) -> usize {
        (c.0 * self.np + c.1) * self.np + c.2
    }

    fn point(&self, c: (usize, usize, usize)) -> (f64, f64, f64) {
        (self.xs[c.0], self.ys[c.1], self.zs[c.2])
    }
}

/// Triangulate the zero set of `s` (shifted by `cfg.iso`) inside the clip
/// sphere inscribed in the volume window, on a grid of `grid_n` cells per
/// axis (at most 256).
pub fn export_mesh(s: &SurfaceSpec, cfg: &RenderConfig, grid_n: usize) -> Result<MeshData> {
    cfg.validate()?;
    if !(2..=256).contains(&grid_n) {
        return Err(Error::RenderConfig(format!(
            "mesh grid resolution must be 2..=256, got {grid_n}"
        )));
    }
    let vol: Window3 = cfg.volume()?;
    let center = vol.center();
    let radius = vol.inscribed_radius();
    let n = grid_n;
    let np = n + 1;
    let ctx = GridCtx {
        xs: (0..np)
            .map(|i| vol.x0 + (vol.x1 - vol.x0) * i as f64 / n as f64)
            .collect(),
        ys: (0..np)
            .map(|j| vol.y0 + (vol.y1 - vol.y0) * j as f64 / n as f64)
            .collect(),
        zs: (0..np)
            .map(|k| vol.z0 + (vol.z1 - vol.z0) * k as f64 / n as f64)
            .collect(),
        np,
    };

    // separable field: xy grid once, z line once
    let xy: Vec<Vec<f64>> = exec::map_range(np, |i| {
        ctx.ys
            .iter()
            .map(|&y| s.xy_part.eval(ctx.xs[i], y))
            .collect()
    });
    let zv: Vec<f64> = ctx.zs.iter().map(|&z| s.z_part.eval(z) - cfg.iso).collect();
    let r2 = radius * radius;
    let inside_sphere = |c: (usize, usize, usize)| {
        let dx = ctx.xs[c.0] - center.0;
        let dy = ctx.ys[c.1] - center.1;
        let dz = ctx.zs[c.2] - center.2;
        dx * dx + dy * dy + dz * dz <= r2
    };

    let mut mesh = MeshData::default();
    let mut edge_vertices: HashMap<(usize, usize), usize> = HashMap::new();

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ids: [(usize, usize, usize); 8] = std::array::from_fn(|c| {
                    let (di, dj, dk) = CORNERS[c];
                    (i + di, j + dj, k + dk)
                });
                if !ids.iter().all(|&c| inside_sphere(c)) {
                    continue;
                }
                let vals: [f64; 8] = std::array::from_fn(|c| xy[ids[c].0][ids[c].1] + zv[ids[c].2]);
                let any_neg = vals.iter().any(|&v| v < 0.0);
                let any_pos = vals.iter().any(|&v| v >= 0.0);
                if !(any_neg && any_pos) {
                    continue;
                }
                for tet in &TETS {
                    polygonize_tet(
                        &mut mesh,
                        &mut edge_vertices,
                        &ctx,
                        [ids[tet[0]], ids[tet[1]], ids[tet[2]], ids[tet[3]]],
                        [vals[tet[0]], vals[tet[1]], vals[tet[2]], vals[tet[3]]],
                    );
                }
            }
        }
    }
    if mesh.triangles.is_empty() {
        mesh.warning = Some("zero set does not intersect the clip volume".into());
    }
    Ok(mesh)
}

/// Zero-crossing vertex on the grid edge between two corners, welded.
fn cut_edge(
    mesh: &mut MeshData,
    edge_vertices: &mut HashMap<(usize, usize), usize>,
    ctx: &GridCtx,
    ca: (usize, usize, usize),
    cb: (usize, usize, usize),
    va: f64,
    vb: f64,
) -> usize {
    let ia = ctx.corner_id(ca);
    let ib = ctx.corner_id(cb);
    let key = (ia.min(ib), ia.max(ib));
    if let Some(&idx) = edge_vertices.get(&key) {
        return idx;
    }
    // interpolate from the smaller corner id so the parameter is identical
    // no matter which tetrahedron asks
    let (lo, hi, vlo, vhi) = if ia <= ib {
        (ca, cb, va, vb)
    } else {
        (cb, ca, vb, va)
    };
    let t = vlo / (vlo - vhi);
    let p0 = ctx.point(lo);
    let p1 = ctx.point(hi);
    let v = (
        p0.0 + t * (p1.0 - p0.0),
        p0.1 + t * (p1.1 - p0.1),
        p0.2 + t * (p1.2 - p0.2),
    );
    let idx = mesh.vertices.len();
    mesh.vertices.push(v);
    edge_vertices.insert(key, idx);
    idx
}

/// Push a triangle oriented with its normal pointing away from `inside`
/// (the negative side of the field).
fn push_oriented(mesh: &mut MeshData, tri: [usize; 3], inside: (f64, f64, f64)) {
    let p0 = mesh.vertices[tri[0]];
    let p1 = mesh.vertices[tri[1]];
    let p2 = mesh.vertices[tri[2]];
    let u = (p1.0 - p0.0, p1.1 - p0.1, p1.2 - p0.2);
    let v = (p2.0 - p0.0, p2.1 - p0.1, p2.2 - p0.2);
    let nrm = (
        u.1 * v.2 - u.2 * v.1,
        u.2 * v.0 - u.0 * v.2,
        u.0 * v.1 - u.1 * v.0,
    );
    let to_in = (inside.0 - p0.0, inside.1 - p0.1, inside.2 - p0.2);
    if nrm.0 * to_in.0 + nrm.1 * to_in.1 + nrm.2 * to_in.2 > 0.0 {
        mesh.triangles.push([tri[0], tri[2], tri[1]]);
    } else {
        mesh.triangles.push(tri);
    }
}

fn polygonize_tet(
    mesh: &mut MeshData,
    edge_vertices: &mut HashMap<(usize, usize), usize>,
    ctx: &GridCtx,
    corners: [(usize, usize, usize); 4],
    vals: [f64; 4],
) {
    let neg: Vec<usize> = (0..4).filter(|&a| vals[a] < 0.0).collect();
    match neg.len() {
        0 | 4 => {}
        1 | 3 => {
            // one corner separated from the other three: one triangle
            let lone = if neg.len() == 1 {
                neg[0]
            } else {
                (0..4).find(|x| !neg.contains(x)).unwrap()
            };
            let others: Vec<usize> = (0..4).filter(|&x| x != lone).collect();
            let tri = [
                cut_edge(mesh, edge_vertices, ctx, corners[lone], corners[others[0]], vals[lone], vals[others[0]]),
                cut_edge(mesh, edge_vertices, ctx, corners[lone], corners[others[1]], vals[lone], vals[others[1]]),
                cut_edge(mesh, edge_vertices, ctx, corners[lone], corners[others[2]], vals[lone], vals[others[2]]),
            ];
            let inside = if neg.len() == 1 {
                ctx.point(corners[lone])
            } else {
                ctx.point(corners[others[0]])
            };
            push_oriented(mesh, tri, inside);
        }
        2 => {
            // quad between the negative edge and the positive edge
            let (a, b) = (neg[0], neg[1]);
            let others: Vec<usize> = (0..4).filter(|&x| x != a && x != b).collect();
            let (c, d) = (others[0], others[1]);
            let vac = cut_edge(mesh, edge_vertices, ctx, corners[a], corners[c], vals[a], vals[c]);
            let vad = cut_edge(mesh, edge_vertices, ctx, corners[a], corners[d], vals[a], vals[d]);
            let vbc = cut_edge(mesh, edge_vertices, ctx, corners[b], corners[c], vals[b], vals[c]);
            let vbd = cut_edge(mesh, edge_vertices, ctx, corners[b], corners[d], vals[b], vals[d]);
            let pa = ctx.point(corners[a]);
            let pb = ctx.point(corners[b]);
            let inside = (
                0.5 * (pa.0 + pb.0),
                0.5 * (pa.1 + pb.1),
                0.5 * (pa.2 + pb.2),
            );
            push_oriented(mesh, [vac, vad, vbd], inside);
            push_oriented(mesh, [vac, vbd, vbc], inside);
        }
        _ => unreachable!(),
    }
}

/// V − E + F for the welded mesh.
pub fn euler_characteristic(mesh: &MeshData) -> i64 {
    let mut edges = std::collections::HashSet::new();
    for t in &mesh.triangles {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    mesh.vertices.len() as i64 - edges.len() as i64 + mesh.triangles.len() as i64
}

/// Every edge borders exactly two triangles (closed surface).
pub fn is_watertight(mesh: &MeshData) -> bool {
    let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
    for t in &mesh.triangles {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            *edge_count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    edge_count.values().all(|&c| c == 2)
}

/// OBJ-style text: `v x y z` records followed by 1-based `f` records.
pub fn obj_text(mesh: &MeshData) -> String {
    let mut s = String::new();
    if let Some(w) = &mesh.warning {
        writeln!(s, "# warning: {w}").unwrap();
    }
    for &(x, y, z) in &mesh.vertices {
        writeln!(s, "v {} {} {}", fmt_f64(x), fmt_f64(y), fmt_f64(z)).unwrap();
    }
    for t in &mesh.triangles {
        writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{BivarPoly, UnivarPoly};
    use crate::render::{RenderMode, RenderWindow};
    use crate::surfaces::{Family, SurfaceSpec};

    fn sphere_surface(r: f64) -> SurfaceSpec {
        SurfaceSpec {
            family: Family::PC,
            m: 2,
            xy_part: BivarPoly::from_terms(&[(2, 0, 1.0), (0, 2, 1.0), (0, 0, -r * r)]),
            z_part: UnivarPoly::new(vec![0.0, 0.0, 1.0]),
        }
    }

    fn vol_cfg(half: f64) -> RenderConfig {
        RenderConfig {
            width: 64,
            height: 64,
            window: RenderWindow::Volume(Window3::cube((0.0, 0.0, 0.0), half)),
            mode: RenderMode::Mesh,
            iso: 0.0,
            samples: 0,
        }
    }

    #[test]
    fn sphere_mesh_is_a_topological_sphere() {
        let s = sphere_surface(1.0);
        let mesh = export_mesh(&s, &vol_cfg(1.6), 64).unwrap();
        assert!(mesh.warning.is_none());
        assert!(mesh.triangles.len() > 500);
        assert!(is_watertight(&mesh));
        assert_eq!(euler_characteristic(&mesh), 2);
        // vertices sit on the unit sphere up to grid resolution
        for &(x, y, z) in &mesh.vertices {
            let r = (x * x + y * y + z * z).sqrt();
            assert!((r - 1.0).abs() < 0.05, "vertex radius {r}");
        }
    }

    #[test]
    fn empty_window_gives_warning() {
        let s = sphere_surface(1.0);
        let cfg = RenderConfig {
            window: RenderWindow::Volume(Window3::cube((10.0, 10.0, 10.0), 1.0)),
            ..vol_cfg(1.0)
        };
        let mesh = export_mesh(&s, &cfg, 32).unwrap();
        assert!(mesh.triangles.is_empty());
        assert!(mesh.warning.is_some());
    }

    #[test]
    fn obj_output_shape() {
        let s = sphere_surface(1.0);
        let mesh = export_mesh(&s, &vol_cfg(1.5), 16).unwrap();
        let text = obj_text(&mesh);
        let v_lines = text.lines().filter(|l| l.starts_with("v ")).count();
        let f_lines = text.lines().filter(|l| l.starts_with("f ")).count();
        assert_eq!(v_lines, mesh.vertices.len());
        assert_eq!(f_lines, mesh.triangles.len());
    }

    #[test]
    fn resolution_limit_enforced() {
        let s = sphere_surface(1.0);
        assert!(export_mesh(&s, &vol_cfg(1.5), 300).is_err());
    }
}
