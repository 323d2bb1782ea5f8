//! Phase portraits of a BDE near the origin: discriminant, integral curves
//! and the folded point, drawn as SVG or dumped as CSV polylines.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bde::{integrate_curves, Bde, BdeError, IntegralCurve, IntegrateOptions};
use crate::scalar::Scalar;
use crate::svg::{contour, Svg};

#[derive(Clone, Copy, Debug)]
pub struct PortraitOptions {
    pub integrate: IntegrateOptions,
    /// Seeds per axis.
    pub grid: usize,
    /// Seed for the jitter of the seed grid.
    pub seed: u64,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        Self { integrate: IntegrateOptions { max_steps: 20_000, ..Default::default() }, grid: 8, seed: 0 }
    }
}

pub struct Portrait {
    pub curves: Vec<IntegralCurve>,
    pub discriminant: Vec<((f64, f64), (f64, f64))>,
    pub half_width: f64,
}

fn abc(bde: &Bde<f64>, x: f64, y: f64) -> (f64, f64, f64) {
    let e = |j: &crate::jet::Jet<f64>| j.eval(&[x, y]).unwrap_or(f64::NAN);
    (e(&bde.a), e(&bde.b), e(&bde.c))
}

/// Both asymptotic slopes at jittered grid points on the hyperbolic side,
/// each integrated forward and backward.
pub fn portrait<T: Scalar>(bde: &Bde<T>, opts: &PortraitOptions) -> Result<Portrait, BdeError> {
    let fb = bde.to_f64();
    let w = opts.integrate.half_width;
    let n = opts.grid.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut seeds = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let jx: f64 = rng.gen_range(-0.4..0.4);
            let jy: f64 = rng.gen_range(-0.4..0.4);
            let x = -w + (i as f64 + 0.5 + jx) * 2.0 * w / n as f64;
            let y = -w + (j as f64 + 0.5 + jy) * 2.0 * w / n as f64;
            let (a, b, c) = abc(&fb, x, y);
            let disc = b * b - a * c;
            if !(disc > 0.0) || c.abs() < 1e-12 {
                continue;
            }
            for s in [-1.0, 1.0] {
                seeds.push([x, y, (-b + s * disc.sqrt()) / c]);
            }
        }
    }
    let fwd = integrate_curves(&fb, &seeds, &opts.integrate)?;
    let back = IntegrateOptions { step: -opts.integrate.step, ..opts.integrate };
    let bwd = integrate_curves(&fb, &seeds, &back)?;
    let disc = |x: f64, y: f64| {
        let (a, b, c) = abc(&fb, x, y);
        b * b - a * c
    };
    Ok(Portrait { curves: fwd.into_iter().chain(bwd).collect(), discriminant: contour(&disc, 200, [-w, w, -w, w]), half_width: w })
}

impl Portrait {
    /// Layers, bottom to top: axes, discriminant, integral curves, folded point.
    pub fn to_svg(&self) -> String {
        let w = self.half_width;
        let mut svg = Svg::new(600.0, 600.0, [-w, w, -w, w]);
        svg.axes();
        for (p, q) in &self.discriminant {
            svg.line(*p, *q, "#c00", 2.0);
        }
        for c in &self.curves {
            svg.polyline(&c.points, "#1f4e9a", 0.8);
            for &(x, y) in &c.cusps {
                svg.circle(x, y, 1.5, "#1f4e9a");
            }
        }
        svg.circle(0.0, 0.0, 4.0, "#000");
        svg.finish()
    }

    /// CSV with columns `curve, x, y`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["curve", "x", "y"])?;
        for (k, c) in self.curves.iter().enumerate() {
            for (x, y) in &c.points {
                out.write_record([k.to_string(), x.to_string(), y.to_string()])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bde::{asymptotic_bde, folded_model};
    use crate::surface::normal_form_surface;

    #[test]
    fn saddle_model_portrait() {
        let p = portrait(&folded_model(-1.0), &PortraitOptions { grid: 4, ..Default::default() }).unwrap();
        assert!(!p.curves.is_empty() && !p.discriminant.is_empty());
        let svg = p.to_svg();
        assert!(svg.contains("<polyline") && svg.contains("<circle"));
    }

    #[test]
    fn surface_portrait_is_deterministic() {
        let s = normal_form_surface(2.0f64, -1.0, None).unwrap();
        let bde = asymptotic_bde(&s).unwrap();
        let opts = PortraitOptions { grid: 3, ..Default::default() };
        let (a, b) = (portrait(&bde, &opts).unwrap(), portrait(&bde, &opts).unwrap());
        assert_eq!(a.curves.len(), b.curves.len());
        assert_eq!(a.curves[0].points, b.curves[0].points);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("curve,x,y"));
    }
}
