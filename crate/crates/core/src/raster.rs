//! Complex-plane rasters shared by the Julia, limit-set and Schwarz renderers.

use crate::numeric::par;
use crate::{Error, Result};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Viewport> {
        if !(xmin < xmax && ymin < ymax) {
            return Err(Error::InvalidInput(format!(
                "viewport {xmin},{xmax},{ymin},{ymax} is empty"
            )));
        }
        Ok(Viewport {
            xmin,
            xmax,
            ymin,
            ymax,
        })
    }

    pub fn square(r: f64) -> Viewport {
        Viewport {
            xmin: -r,
            xmax: r,
            ymin: -r,
            ymax: r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterSpec {
    pub width: usize,
    pub height: usize,
    pub viewport: Viewport,
    pub max_iter: usize,
}

impl RasterSpec {
    pub fn new(
        width: usize,
        height: usize,
        viewport: Viewport,
        max_iter: usize,
    ) -> Result<RasterSpec> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(
                "raster dimensions must be positive".into(),
            ));
        }
        if max_iter == 0 {
            return Err(Error::InvalidInput(
                "iteration budget must be positive".into(),
            ));
        }
        Ok(RasterSpec {
            width,
            height,
            viewport,
            max_iter,
        })
    }

    /// Centre of pixel `(i, j)`; row 0 is the top of the image.
    pub fn pixel(&self, i: usize, j: usize) -> C {
        let v = &self.viewport;
        let x = v.xmin + (v.xmax - v.xmin) * (i as f64 + 0.5) / self.width as f64;
        let y = v.ymax - (v.ymax - v.ymin) * (j as f64 + 0.5) / self.height as f64;
        C::new(x, y)
    }
}

/// Per-pixel outcome: a class label and an iteration count.
///
/// Label `0` is reserved for undecided pixels, `1` for escape/divergence and
/// labels from `2` up identify attractors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pixel {
    pub class: u16,
    pub steps: u32,
}

pub const UNDECIDED: u16 = 0;
pub const ESCAPED: u16 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub spec: RasterSpec,
    pub pixels: Vec<Pixel>,
}

impl Raster {
    /// Classify every pixel with `f`, in parallel when enabled. The result is
    /// independent of the number of workers.
    pub fn render<F>(spec: RasterSpec, f: F) -> Raster
    where
        F: Fn(C) -> Pixel + Sync + Send,
    {
        let rows = par::map_collect(spec.height, |j| {
            (0..spec.width)
                .map(|i| f(spec.pixel(i, j)))
                .collect::<Vec<_>>()
        });
        Raster {
            spec,
            pixels: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Pixel {
        self.pixels[j * self.spec.width + i]
    }

    pub fn fraction(&self, class: u16) -> f64 {
        self.pixels.iter().filter(|p| p.class == class).count() as f64 / self.pixels.len() as f64
    }

    /// 8-bit RGB triples, row-major from the top.
    pub fn rgb(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() * 3);
        let budget = self.spec.max_iter.max(1) as f64;
        for p in &self.pixels {
            let c = colour(*p, budget);
            out.extend_from_slice(&c);
        }
        out
    }

    /// Binary PPM (P6).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.spec.width, self.spec.height).into_bytes();
        out.extend(self.rgb());
        out
    }
}

const PALETTE: [[f64; 3]; 6] = [
    [0.92, 0.55, 0.20],
    [0.25, 0.55, 0.90],
    [0.35, 0.75, 0.40],
    [0.80, 0.30, 0.55],
    [0.55, 0.45, 0.85],
    [0.90, 0.80, 0.30],
];

fn colour(p: Pixel, budget: f64) -> [u8; 3] {
    match p.class {
        UNDECIDED => [0, 0, 0],
        cls => {
            let base = if cls == ESCAPED {
                [0.95, 0.95, 0.97]
            } else {
                PALETTE[(cls as usize - 2) % PALETTE.len()]
            };
            // shade by log of the iteration count
            let s = 1.0 - 0.6 * ((1.0 + p.steps as f64).ln() / (1.0 + budget).ln()).min(1.0);
            let q = |x: f64| (255.0 * (x * s).clamp(0.0, 1.0)).round() as u8;
            [q(base[0]), q(base[1]), q(base[2])]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pixel_centres_cover_the_viewport() {
        let spec = RasterSpec::new(4, 2, Viewport::new(0.0, 4.0, 0.0, 2.0).unwrap(), 1).unwrap();
        assert_eq!(spec.pixel(0, 0), C::new(0.5, 1.5));
        assert_eq!(spec.pixel(3, 1), C::new(3.5, 0.5));
    }

    #[test]
    fn ppm_header_and_size() {
        let spec = RasterSpec::new(3, 2, Viewport::square(1.0), 10).unwrap();
        let r = Raster::render(spec, |z| Pixel {
            class: if z.re > 0.0 { 2 } else { 0 },
            steps: 3,
        });
        let ppm = r.to_ppm();
        assert!(ppm.starts_with(b"P6\n3 2\n255\n"));
        assert_eq!(ppm.len(), 11 + 18);
    }

    #[test]
    fn empty_viewport_is_rejected() {
        assert!(Viewport::new(1.0, 1.0, 0.0, 1.0).is_err());
    }
}
