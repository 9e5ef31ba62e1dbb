//! Figure reproduction: per-pixel sign plots, a sphere-clipped raymarcher,
//! and isosurface mesh extraction, with deterministic PGM/PPM/OBJ output.

mod mesh;
mod raymarch;

pub use mesh::{euler_characteristic, export_mesh, is_watertight, obj_text, MeshData};
pub use raymarch::render_surface;

use crate::critical::Window2;
use crate::error::Error;
use crate::exec;
use crate::poly::BivarPoly;
use crate::Result;

/// Axis-aligned 3D box.
#[derive(Clone, Copy, Debug)]
pub struct Window3 {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub z0: f64,
    pub z1: f64,
}

impl Window3 {
    pub fn cube(center: (f64, f64, f64), half: f64) -> Window3 {
        Window3 {
            x0: center.0 - half,
            x1: center.0 + half,
            y0: center.1 - half,
            y1: center.1 + half,
            z0: center.2 - half,
            z1: center.2 + half,
        }
    }

    pub fn center(&self) -> (f64, f64, f64) {
        (
            0.5 * (self.x0 + self.x1),
            0.5 * (self.y0 + self.y1),
            0.5 * (self.z0 + self.z1),
        )
    }

    /// Radius of the inscribed sphere (the render clip sphere).
    pub fn inscribed_radius(&self) -> f64 {
        0.5 * (self.x1 - self.x0)
            .min(self.y1 - self.y0)
            .min(self.z1 - self.z0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderMode {
    SignPlot,
    Raymarch,
    Mesh,
}

impl std::str::FromStr for RenderMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sign" | "sign_plot" => RenderMode::SignPlot,
            "raymarch" => RenderMode::Raymarch,
            "mesh" => RenderMode::Mesh,
            other => return Err(Error::Parse(format!("unknown render mode `{other}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub enum RenderWindow {
    Plane(Window2),
    Volume(Window3),
}

#[derive(Clone, Copy, Debug)]
pub struct RenderConfig {
    pub width: u32,
    pub height: u32,
    pub window: RenderWindow,
    pub mode: RenderMode,
    pub iso: f64,
    pub samples: u32,
}

impl RenderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.width < 16 || self.height < 16 {
            return Err(Error::RenderConfig(format!(
                "image must be at least 16x16, got {}x{}",
                self.width, self.height
            )));
        }
        let nonempty = match self.window {
            RenderWindow::Plane(w) => w.x1 > w.x0 && w.y1 > w.y0,
            RenderWindow::Volume(w) => w.x1 > w.x0 && w.y1 > w.y0 && w.z1 > w.z0,
        };
        if !nonempty {
            return Err(Error::RenderConfig("window is empty".into()));
        }
        Ok(())
    }

    pub fn plane(&self) -> Result<Window2> {
        match self.window {
            RenderWindow::Plane(w) => Ok(w),
            RenderWindow::Volume(_) => Err(Error::RenderConfig(
                "this mode needs a 2D window".into(),
            )),
        }
    }

    pub fn volume(&self) -> Result<Window3> {
        match self.window {
            RenderWindow::Volume(w) => Ok(w),
            RenderWindow::Plane(_) => Err(Error::RenderConfig(
                "this mode needs a 3D window".into(),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: u32,
    pub height: u32,
    /// RGB triples, row-major from the top row.
    pub pixels: Vec<u8>,
}

/// Binary PGM (P5).
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

/// Binary PPM (P6).
pub fn write_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

/// Per-pixel sign plot: black where p < iso, white elsewhere, with optional
/// gray cross markers. Pixel centers are sampled; the top row carries the
/// largest y.
pub fn render_sign_plot(
    p: &BivarPoly,
    cfg: &RenderConfig,
    markers: &[(f64, f64)],
) -> Result<GrayImage> {
    cfg.validate()?;
    let w = cfg.plane()?;
    let (width, height) = (cfg.width as usize, cfg.height as usize);
    let dx = (w.x1 - w.x0) / width as f64;
    let dy = (w.y1 - w.y0) / height as f64;
    let iso = cfg.iso;
    let rows = exec::map_range(height, |py| {
        let y = w.y1 - (py as f64 + 0.5) * dy;
        let mut row = vec![0u8; width];
        for (px, slot) in row.iter_mut().enumerate() {
            let x = w.x0 + (px as f64 + 0.5) * dx;
            *slot = if p.eval(x, y) < iso { 0 } else { 255 };
        }
        row
    });
    let mut pixels = Vec::with_capacity(width * height);
    for row in rows {
        pixels.extend_from_slice(&row);
    }
    let mut img = GrayImage {
        width: cfg.width,
        height: cfg.height,
        pixels,
    };
    for &(mx, my) in markers {
        let px = ((mx - w.x0) / dx - 0.5).round() as i64;
        let py = ((w.y1 - my) / dy - 0.5).round() as i64;
        for (ox, oy) in [(0i64, 0i64), (1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (qx, qy) = (px + ox, py + oy);
            if qx >= 0 && qx < width as i64 && qy >= 0 && qy < height as i64 {
                img.pixels[qy as usize * width + qx as usize] = 128;
            }
        }
    }
    Ok(img)
}

/// Number of 4-connected black components that do not touch the image
/// border (the bounded negative regions of a sign plot).
pub fn bounded_black_components(img: &GrayImage) -> usize {
    let (w, h) = (img.width as usize, img.height as usize);
    let mut seen = vec![false; w * h];
    let mut count = 0;
    for start in 0..w * h {
        if seen[start] || img.pixels[start] != 0 {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut touches_border = false;
        while let Some(idx) = stack.pop() {
            let (x, y) = (idx % w, idx / w);
            if x == 0 || y == 0 || x == w - 1 || y == h - 1 {
                touches_border = true;
            }
            let mut push = |nx: usize, ny: usize| {
                let nidx = ny * w + nx;
                if !seen[nidx] && img.pixels[nidx] == 0 {
                    seen[nidx] = true;
                    stack.push(nidx);
                }
            };
            if x > 0 {
                push(x - 1, y);
            }
            if x + 1 < w {
                push(x + 1, y);
            }
            if y > 0 {
                push(x, y - 1);
            }
            if y + 1 < h {
                push(x, y + 1);
            }
        }
        if !touches_border {
            count += 1;
        }
    }
    count
}

/// Fraction of pixels whose value differs by more than 2/255 between two
/// images of equal size.
pub fn differing_pixel_fraction(a: &RgbImage, b: &RgbImage) -> f64 {
    assert_eq!((a.width, a.height), (b.width, b.height));
    let per_px = 3;
    let n = (a.width * a.height) as usize;
    let mut diff = 0usize;
    for px in 0..n {
        let off = px * per_px;
        if (0..per_px).any(|c| {
            (a.pixels[off + c] as i16 - b.pixels[off + c] as i16).unsigned_abs() > 2
        }) {
            diff += 1;
        }
    }
    diff as f64 / n as f64
}

/// Vertical flip (top row becomes bottom row), i.e. the image of y ↦ −y for
/// a window symmetric about y = 0.
pub fn flip_vertical(img: &RgbImage) -> RgbImage {
    let w = img.width as usize * 3;
    let mut pixels = Vec::with_capacity(img.pixels.len());
    for row in (0..img.height as usize).rev() {
        pixels.extend_from_slice(&img.pixels[row * w..(row + 1) * w]);
    }
    RgbImage {
        width: img.width,
        height: img.height,
        pixels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::BivarPoly;

    fn plane_cfg(n: u32, half: f64) -> RenderConfig {
        RenderConfig {
            width: n,
            height: n,
            window: RenderWindow::Plane(Window2 {
                x0: -half,
                x1: half,
                y0: -half,
                y1: half,
            }),
            mode: RenderMode::SignPlot,
            iso: 0.0,
            samples: 0,
        }
    }

    #[test]
    fn sign_plot_splits_at_the_axis() {
        // p = x: left half black, right half white
        let p = BivarPoly::from_terms(&[(1, 0, 1.0)]);
        let img = render_sign_plot(&p, &plane_cfg(32, 1.0), &[]).unwrap();
        for py in 0..32 {
            for px in 0..32 {
                let v = img.pixels[py * 32 + px];
                assert_eq!(v, if px < 16 { 0 } else { 255 }, "({px},{py})");
            }
        }
    }

    #[test]
    fn bounded_component_count_disk() {
        // unit disk: one bounded black component
        let p = BivarPoly::from_terms(&[(2, 0, 1.0), (0, 2, 1.0), (0, 0, -1.0)]);
        let img = render_sign_plot(&p, &plane_cfg(64, 2.0), &[]).unwrap();
        assert_eq!(bounded_black_components(&img), 1);
        // flip sign: black is unbounded, nothing bounded
        let q = p.scale(-1.0);
        let img = render_sign_plot(&q, &plane_cfg(64, 2.0), &[]).unwrap();
        assert_eq!(bounded_black_components(&img), 0);
    }

    #[test]
    fn tiny_images_are_rejected() {
        let p = BivarPoly::constant(1.0);
        assert!(render_sign_plot(&p, &plane_cfg(8, 1.0), &[]).is_err());
    }

    #[test]
    fn pgm_header() {
        let img = GrayImage {
            width: 16,
            height: 16,
            pixels: vec![7; 256],
        };
        let bytes = write_pgm(&img);
        assert!(bytes.starts_with(b"P5\n16 16\n255\n"));
        assert_eq!(bytes.len(), 13 + 256);
    }
}
