//! The orthogonal projection family `(x, f1(x+uy, y) − vy, f2(x+uy, y) − wy)`
//! and the model versal family of the P3(c) germ.

use crate::germ::{ChartMap, DensePoly2};
use crate::surface::SurfaceJet;

/// Dense copies of `f1, f2` for fast partial-derivative evaluation.
#[derive(Clone, Debug)]
pub struct SurfaceDerivs {
    f: [DensePoly2; 2],
}

impl SurfaceDerivs {
    pub fn new(s: &SurfaceJet<f64>) -> Self {
        Self { f: [DensePoly2::from_jet(s.f1()), DensePoly2::from_jet(s.f2())] }
    }

    /// `∂X^i ∂Y^j f_k (X, Y)`, `k ∈ {1, 2}`.
    pub fn f(&self, k: usize, i: usize, j: usize, x: f64, y: f64) -> f64 {
        self.f[k - 1].d(i, j, x, y)
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |a, m| a * (n - m) as f64 / (m + 1) as f64)
}

/// One member `P_(u,v,w)` of the projection family.
#[derive(Clone, Copy, Debug)]
pub struct ProjectionFamily<'a> {
    pub base: &'a SurfaceDerivs,
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl<'a> ProjectionFamily<'a> {
    pub fn new(base: &'a SurfaceDerivs, u: f64, v: f64, w: f64) -> Self {
        Self { base, u, v, w }
    }

    /// Derivatives with the linear `−vy, −wy` terms left out.
    fn raw(&self, k: usize, i: usize, j: usize, x: f64, y: f64) -> f64 {
        let xs = x + self.u * y;
        let mut acc = 0.0;
        let mut up = 1.0;
        for m in 0..=j {
            acc += binom(j, m) * up * self.base.f(k - 1, i + m, j - m, xs, y);
            up *= self.u;
        }
        acc
    }

    /// `(v, w)` making `(x, y)` a singular point of this member.
    pub fn singular_vw(base: &SurfaceDerivs, u: f64, x: f64, y: f64) -> (f64, f64) {
        let m = ProjectionFamily::new(base, u, 0.0, 0.0);
        (m.raw(2, 0, 1, x, y), m.raw(3, 0, 1, x, y))
    }
}

impl ChartMap for ProjectionFamily<'_> {
    fn d(&self, k: usize, i: usize, j: usize, x: f64, y: f64) -> f64 {
        let r = self.raw(k, i, j, x, y);
        if i == 0 && j == 1 {
            r - if k == 2 { self.v } else { self.w }
        } else if i == 0 && j == 0 {
            r - y * if k == 2 { self.v } else { self.w }
        } else {
            r
        }
    }
}

/// `F(x, y; a, b, c, d) = (x, xy + y³ + a y, xy² + c y⁴ + b y + d y³)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelFamily {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl ModelFamily {
    fn poly(&self, k: usize) -> DensePoly2 {
        let mut p = DensePoly2::zero(4);
        if k == 2 {
            p.add(1, 1, 1.0);
            p.add(0, 3, 1.0);
            p.add(0, 1, self.a);
        } else {
            p.add(1, 2, 1.0);
            p.add(0, 4, self.c);
            p.add(0, 1, self.b);
            p.add(0, 3, self.d);
        }
        p
    }

    pub fn chart(&self) -> crate::germ::JetChart {
        crate::germ::JetChart::from_dense(self.poly(2), self.poly(3))
    }
}
