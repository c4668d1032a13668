//! Density images as 16-bit binary PGM and current samples for quiver plots.

use std::io::{self, Write};

use cyclovortex::{current_density, density, PhysicsParams, WaveField};

pub const MAXVAL: u16 = u16::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub pixels: Vec<u16>,
}

/// Maps |Ψ|² linearly onto [0, 65535]. The image's top row is the largest y.
pub fn render_density(psi: &WaveField) -> GrayImage {
    let g = &psi.grid;
    let rho = density(psi);
    let peak = rho.max();
    let scale = if peak > 0.0 { MAXVAL as f64 / peak } else { 0.0 };
    let mut pixels = Vec::with_capacity(g.len());
    for j in (0..g.ny).rev() {
        for i in 0..g.nx {
            pixels.push((rho.values[g.index(i, j)] * scale).round() as u16);
        }
    }
    GrayImage {
        width: g.nx,
        height: g.ny,
        pixels,
    }
}

pub fn write_pgm<W: Write>(mut out: W, image: &GrayImage) -> io::Result<()> {
    let mut buf = format!("P5\n{} {}\n{}\n", image.width, image.height, MAXVAL).into_bytes();
    buf.reserve(2 * image.pixels.len());
    for p in &image.pixels {
        buf.extend_from_slice(&p.to_be_bytes());
    }
    out.write_all(&buf)?;
    out.flush()
}

/// Writes `x y jx jy` lines on every `stride`-th grid point along each axis.
pub fn write_arrows<W: Write>(
    mut out: W,
    psi: &WaveField,
    params: &PhysicsParams,
    stride: usize,
) -> Result<(), crate::CliError> {
    let g = &psi.grid;
    let j = current_density(psi, params)?;
    let stride = stride.max(1);
    let mut text = String::from("# x y jx jy\n");
    for jy in (0..g.ny).step_by(stride) {
        for ix in (0..g.nx).step_by(stride) {
            let idx = g.index(ix, jy);
            text += &format!("{:e} {:e} {:e} {:e}\n", g.x[ix], g.y[jy], j.x[idx], j.y[idx]);
        }
    }
    out.write_all(text.as_bytes())
        .map_err(|e| crate::CliError::io("arrow file", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cyclovortex::{make_grid, Complex64};

    #[test]
    fn zero_field_renders_black() {
        let g = make_grid(16, 20, 4.0, 4.0).unwrap();
        let img = render_density(&WaveField::zeros(&g));
        assert_eq!((img.width, img.height), (16, 20));
        assert!(img.pixels.iter().all(|&p| p == 0));
    }

    #[test]
    fn y_axis_points_up() {
        let g = make_grid(16, 16, 4.0, 4.0).unwrap();
        let psi = WaveField::from_fn(&g, |_, y| Complex64::new(if y > 1.0 { 1.0 } else { 0.0 }, 0.0));
        let img = render_density(&psi);
        assert_eq!(img.pixels[0], MAXVAL);
        assert_eq!(*img.pixels.last().unwrap(), 0);
    }

    #[test]
    fn pgm_header_and_byte_order() {
        let img = GrayImage {
            width: 2,
            height: 1,
            pixels: vec![0x0102, 0xfffe],
        };
        let mut buf = Vec::new();
        write_pgm(&mut buf, &img).unwrap();
        assert_eq!(buf, b"P5\n2 1\n65535\n\x01\x02\xff\xfe");
    }
}
