//! Sphere-clipped sign-change raymarcher with bisection refinement.
//!
//! The camera sits on the +z axis through the clip-sphere center, the light
//! direction has no y component, and shading is two-sided Lambertian, so a
//! surface mirrored in y renders as the vertical flip of the original.

use super::{RenderConfig, RgbImage};
use crate::exec;
use crate::surfaces::SurfaceSpec;
use crate::Result;

const BISECTION_STEPS: u32 = 32;
const BASE_COLOR: [f64; 3] = [0.93, 0.90, 0.84];
const LIGHT: [f64; 3] = [-0.451, 0.0, 0.8925];

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Ray / sphere intersection: entry and exit parameters, if any.
fn sphere_span(
    origin: [f64; 3],
    dir: [f64; 3],
    center: (f64, f64, f64),
    radius: f64,
) -> Option<(f64, f64)> {
    let oc = [
        origin[0] - center.0,
        origin[1] - center.1,
        origin[2] - center.2,
    ];
    let b = oc[0] * dir[0] + oc[1] * dir[1] + oc[2] * dir[2];
    let c = oc[0] * oc[0] + oc[1] * oc[1] + oc[2] * oc[2] - radius * radius;
    let disc = b * b - c;
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    Some((-b - sq, -b + sq))
}

/// Render the surface clipped to the sphere inscribed in the volume window.
/// Deterministic for a fixed configuration.
pub fn render_surface(s: &SurfaceSpec, cfg: &RenderConfig) -> Result<RgbImage> {
    cfg.validate()?;
    let vol = cfg.volume()?;
    let center = vol.center();
    let radius = vol.inscribed_radius();
    let eye = [center.0, center.1, center.2 + 2.6 * radius];
    // angular radius of the sphere from the eye, with a small margin
    let half_fov = (radius / (2.6 * radius)).asin() * 1.08;
    let tan_fov = half_fov.tan();
    let samples = cfg.samples.max(64) as usize;

    let gx = s.xy_part.dx();
    let gy = s.xy_part.dy();
    let gz = s.z_part.derivative();

    let (width, height) = (cfg.width as usize, cfg.height as usize);
    let aspect = width as f64 / height as f64;
    let rows = exec::map_range(height, |py| {
        let mut row = vec![255u8; width * 3];
        let sy = (1.0 - 2.0 * (py as f64 + 0.5) / height as f64) * tan_fov;
        for px in 0..width {
            let sx = (2.0 * (px as f64 + 0.5) / width as f64 - 1.0) * tan_fov * aspect;
            let dir = normalize([sx, sy, -1.0]);
            let Some((t0, t1)) = sphere_span(eye, dir, center, radius) else {
                continue;
            };
            let t0 = t0.max(0.0);
            if t1 <= t0 {
                continue;
            }
            let at = |t: f64| {
                (
                    eye[0] + t * dir[0],
                    eye[1] + t * dir[1],
                    eye[2] + t * dir[2],
                )
            };
            let f = |t: f64| {
                let (x, y, z) = at(t);
                s.eval(x, y, z) - cfg.iso
            };
            let dt = (t1 - t0) / samples as f64;
            let mut prev_t = t0;
            let mut prev_v = f(prev_t);
            let mut hit = None;
            for k in 1..=samples {
                let t = t0 + k as f64 * dt;
                let v = f(t);
                if prev_v == 0.0 {
                    hit = Some(prev_t);
                    break;
                }
                if prev_v * v < 0.0 {
                    let (mut a, mut b) = (prev_t, t);
                    let mut fa = prev_v;
                    for _ in 0..BISECTION_STEPS {
                        let mid = 0.5 * (a + b);
                        let fm = f(mid);
                        if fa * fm <= 0.0 {
                            b = mid;
                        } else {
                            a = mid;
                            fa = fm;
                        }
                    }
                    hit = Some(0.5 * (a + b));
                    break;
                }
                prev_t = t;
                prev_v = v;
            }
            if let Some(th) = hit {
                let (x, y, z) = at(th);
                let n = normalize([gx.eval(x, y), gy.eval(x, y), gz.eval(z)]);
                let lambert = (n[0] * LIGHT[0] + n[1] * LIGHT[1] + n[2] * LIGHT[2]).abs();
                let shade = 0.22 + 0.78 * lambert;
                for c in 0..3 {
                    row[px * 3 + c] = (BASE_COLOR[c] * shade * 255.0).round() as u8;
                }
            }
        }
        row
    });
    let mut pixels = Vec::with_capacity(width * height * 3);
    for row in rows {
        pixels.extend_from_slice(&row);
    }
    Ok(RgbImage {
        width: cfg.width,
        height: cfg.height,
        pixels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{BivarPoly, UnivarPoly};
    use crate::render::{RenderMode, RenderWindow, Window3};
    use crate::surfaces::{Family, SurfaceSpec};

    fn sphere_surface(r: f64) -> SurfaceSpec {
        SurfaceSpec {
            family: Family::PC,
            m: 2,
            xy_part: BivarPoly::from_terms(&[(2, 0, 1.0), (0, 2, 1.0), (0, 0, -r * r)]),
            z_part: UnivarPoly::new(vec![0.0, 0.0, 1.0]),
        }
    }

    fn vol_cfg(n: u32, half: f64) -> RenderConfig {
        RenderConfig {
            width: n,
            height: n,
            window: RenderWindow::Volume(Window3::cube((0.0, 0.0, 0.0), half)),
            mode: RenderMode::Raymarch,
            iso: 0.0,
            samples: 128,
        }
    }

    #[test]
    fn unit_sphere_renders_a_shaded_ball() {
        let s = sphere_surface(1.0);
        let img = render_surface(&s, &vol_cfg(64, 1.6)).unwrap();
        // center pixel hits the ball, corner stays background
        let c = (32 * 64 + 32) * 3;
        assert!(img.pixels[c] < 255);
        assert_eq!(img.pixels[..3], [255, 255, 255]);
        // determinism
        let img2 = render_surface(&s, &vol_cfg(64, 1.6)).unwrap();
        assert_eq!(img, img2);
    }

    #[test]
    fn sphere_image_is_mirror_symmetric() {
        let s = sphere_surface(1.0);
        let img = render_surface(&s, &vol_cfg(64, 1.6)).unwrap();
        let flipped = crate::render::flip_vertical(&img);
        assert!(crate::render::differing_pixel_fraction(&img, &flipped) < 0.005);
    }
}
