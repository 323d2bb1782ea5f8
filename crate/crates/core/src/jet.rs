//! Truncated multivariate polynomials ("jets") in two or three variables.
//!
//! A [`Jet`] stores the monomials of total degree at most its `bound`.
//! Products truncate at the smaller bound of the two factors, so arithmetic
//! is closed on jets. Variables are indexed 0, 1, 2 and named `x`, `y`, `p`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;

/// Largest supported degree bound.
pub const MAX_BOUND: u32 = 8;

pub type Exp = [u8; 3];

const VAR_NAMES: [&str; 3] = ["x", "y", "p"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported number of variables {0} (expected 2 or 3)")]
    InvalidNvars(usize),
    #[error("variable index {var} out of range for a {nvars}-variable jet")]
    InvalidVariable { var: usize, nvars: usize },
    #[error("degree bound {0} exceeds the maximum {MAX_BOUND}")]
    BoundTooLarge(u32),
    #[error("expected {expected} substitution jets, got {got}")]
    SubstitutionArity { expected: usize, got: usize },
    #[error("implicit solve: F(0) = {0} is not zero")]
    NonzeroConstant(String),
    #[error("implicit solve: leading partial with respect to {0} vanishes")]
    SingularImplicit(&'static str),
}

pub fn total_degree(e: &Exp) -> u32 {
    e.iter().map(|&k| k as u32).sum()
}

#[derive(Clone, Debug)]
pub struct Jet<T> {
    nvars: usize,
    bound: u32,
    terms: BTreeMap<Exp, T>,
}

impl<T: PartialEq> PartialEq for Jet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

fn check_shape(nvars: usize, bound: u32) -> Result<(), JetError> {
    if !(2..=3).contains(&nvars) {
        return Err(JetError::InvalidNvars(nvars));
    }
    if bound > MAX_BOUND {
        return Err(JetError::BoundTooLarge(bound));
    }
    Ok(())
}

impl<T: Scalar> Jet<T> {
    pub fn zero(nvars: usize, bound: u32) -> Result<Self, JetError> {
        check_shape(nvars, bound)?;
        Ok(Self { nvars, bound, terms: BTreeMap::new() })
    }

    pub fn constant(nvars: usize, bound: u32, c: T) -> Result<Self, JetError> {
        Self::monomial(nvars, bound, [0, 0, 0], c)
    }

    pub fn var(nvars: usize, bound: u32, var: usize) -> Result<Self, JetError> {
        if var >= nvars {
            return Err(JetError::InvalidVariable { var, nvars });
        }
        let mut e = [0u8; 3];
        e[var] = 1;
        Self::monomial(nvars, bound, e, T::one())
    }

    pub fn monomial(nvars: usize, bound: u32, exp: Exp, c: T) -> Result<Self, JetError> {
        Self::from_terms(nvars, bound, [(exp, c)])
    }

    /// Builds a jet from `(exponent, coefficient)` pairs, summing repeats and
    /// dropping terms above the bound.
    pub fn from_terms<I>(nvars: usize, bound: u32, terms: I) -> Result<Self, JetError>
    where
        I: IntoIterator<Item = (Exp, T)>,
    {
        let mut j = Self::zero(nvars, bound)?;
        for (e, c) in terms {
            if let Some(v) = e.iter().skip(nvars).position(|&k| k != 0) {
                return Err(JetError::InvalidVariable { var: nvars + v, nvars });
            }
            j.add_term(e, c);
        }
        Ok(j)
    }

    fn add_term(&mut self, e: Exp, c: T) {
        if total_degree(&e) > self.bound || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn coeff(&self, e: Exp) -> T {
        self.terms.get(&e).cloned().unwrap_or_else(T::zero)
    }

    /// Coefficient of `x^i y^j` in a two-variable view.
    pub fn c2(&self, i: u8, j: u8) -> T {
        self.coeff([i, j, 0])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree present, `None` for the zero jet.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(total_degree).max()
    }

    /// Lowest total degree present, `None` for the zero jet.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(total_degree).min()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Same jet with a different bound: lowering truncates, raising declares
    /// the missing higher terms to be zero (polynomial reading).
    pub fn with_bound(&self, bound: u32) -> Result<Self, JetError> {
        check_shape(self.nvars, bound)?;
        Ok(Self {
            nvars: self.nvars,
            bound,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) <= bound)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        })
    }

    pub fn truncate(&self, bound: u32) -> Self {
        self.with_bound(bound.min(self.bound)).expect("lowering a bound is always valid")
    }

    /// Homogeneous part of total degree `d`.
    pub fn homogeneous(&self, d: u32) -> Self {
        Self {
            nvars: self.nvars,
            bound: self.bound,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Embeds a two-variable jet into three variables (or returns a clone).
    pub fn lift_nvars(&self, nvars: usize) -> Result<Self, JetError> {
        if nvars < self.nvars {
            return Err(JetError::DimensionMismatch { left: self.nvars, right: nvars });
        }
        check_shape(nvars, self.bound)?;
        Ok(Self { nvars, bound: self.bound, terms: self.terms.clone() })
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Jet<U> {
        let mut out = Jet { nvars: self.nvars, bound: self.bound, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }

    pub fn to_f64(&self) -> Jet<f64> {
        self.map_coeffs(|c| c.to_f64())
    }

    fn same_shape(&self, other: &Self) -> Result<(), JetError> {
        if self.nvars != other.nvars {
            Err(JetError::DimensionMismatch { left: self.nvars, right: other.nvars })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, JetError> {
        self.same_shape(other)?;
        let bound = self.bound.min(other.bound);
        let mut out = self.truncate(bound);
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, JetError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, JetError> {
        self.same_shape(other)?;
        let bound = self.bound.min(other.bound);
        let mut out = Self { nvars: self.nvars, bound, terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            let da = total_degree(ea);
            if da > bound {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + total_degree(eb) > bound {
                    continue;
                }
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out = Self { nvars: self.nvars, bound: self.bound, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(*e, c.clone() * k.clone());
        }
        out
    }

    pub fn add_constant(&self, k: T) -> Self {
        let mut out = self.clone();
        out.add_term([0, 0, 0], k);
        out
    }

    fn neg_ref(&self) -> Self {
        Self {
            nvars: self.nvars,
            bound: self.bound,
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, self.bound, T::one()).expect("shape already valid");
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative; the bound drops by one.
    pub fn partial(&self, var: usize) -> Result<Self, JetError> {
        if var >= self.nvars {
            return Err(JetError::InvalidVariable { var, nvars: self.nvars });
        }
        let mut out = Self {
            nvars: self.nvars,
            bound: self.bound.saturating_sub(1),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut ne = *e;
            ne[var] -= 1;
            out.add_term(ne, c.clone() * T::from_i64(k as i64));
        }
        Ok(out)
    }

    /// `∂x^i ∂y^j (∂p^k)` applied in one go.
    pub fn derivative(&self, orders: Exp) -> Result<Self, JetError> {
        let mut out = self.clone();
        for (v, &k) in orders.iter().enumerate() {
            for _ in 0..k {
                out = out.partial(v)?;
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[T]) -> Result<T, JetError> {
        if point.len() != self.nvars {
            return Err(JetError::DimensionMismatch { left: self.nvars, right: point.len() });
        }
        let mut powers: Vec<Vec<T>> = Vec::with_capacity(self.nvars);
        for v in point {
            let mut row = vec![T::one()];
            for k in 1..=self.bound as usize {
                let next = row[k - 1].clone() * v.clone();
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (v, row) in powers.iter().enumerate() {
                if e[v] > 0 {
                    term = term * row[e[v] as usize].clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    pub fn eval_origin(&self) -> T {
        self.coeff([0, 0, 0])
    }

    /// Simultaneous substitution `x_i ↦ subs[i]`. The result lives in the
    /// substitutes' variables and takes the smallest bound involved.
    pub fn compose(&self, subs: &[Jet<T>]) -> Result<Self, JetError> {
        if subs.len() != self.nvars {
            return Err(JetError::SubstitutionArity { expected: self.nvars, got: subs.len() });
        }
        let nv = subs[0].nvars;
        for s in subs {
            if s.nvars != nv {
                return Err(JetError::DimensionMismatch { left: nv, right: s.nvars });
            }
        }
        let bound = subs.iter().map(|s| s.bound).fold(self.bound, u32::min);
        let subs: Vec<Jet<T>> = subs.iter().map(|s| s.truncate(bound)).collect();
        let max_pow = self.degree().unwrap_or(0) as usize;
        let mut powers: Vec<Vec<Jet<T>>> = Vec::with_capacity(subs.len());
        for s in &subs {
            let mut row = vec![Jet::constant(nv, bound, T::one())?];
            for k in 1..=max_pow {
                let next = &row[k - 1] * s;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Jet::zero(nv, bound)?;
        for (e, c) in &self.terms {
            let mut term = Jet::constant(nv, bound, c.clone())?;
            for (v, row) in powers.iter().enumerate() {
                if e[v] > 0 {
                    term = &term * &row[e[v] as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Replaces one variable by a jet in the same variables.
    pub fn substitute(&self, var: usize, s: &Jet<T>) -> Result<Self, JetError> {
        if var >= self.nvars {
            return Err(JetError::InvalidVariable { var, nvars: self.nvars });
        }
        let mut subs = Vec::with_capacity(self.nvars);
        for v in 0..self.nvars {
            if v == var {
                subs.push(s.clone());
            } else {
                subs.push(Jet::var(self.nvars, self.bound, v)?);
            }
        }
        self.compose(&subs)
    }

    /// Polynomial shift: `g(z) = f(z + point)`.
    pub fn translate(&self, point: &[T]) -> Result<Self, JetError> {
        if point.len() != self.nvars {
            return Err(JetError::DimensionMismatch { left: self.nvars, right: point.len() });
        }
        let subs = (0..self.nvars)
            .map(|v| Ok(Jet::var(self.nvars, self.bound, v)?.add_constant(point[v].clone())))
            .collect::<Result<Vec<_>, JetError>>()?;
        self.compose(&subs)
    }

    /// Linear change of the first two variables: `g(x,y) = f(m00 x + m01 y, m10 x + m11 y)`.
    pub fn linear_change(&self, m: &[[T; 2]; 2]) -> Result<Self, JetError> {
        let nv = self.nvars;
        let x = Jet::var(nv, self.bound, 0)?;
        let y = Jet::var(nv, self.bound, 1)?;
        let mut subs = vec![
            &x.scale(&m[0][0]) + &y.scale(&m[0][1]),
            &x.scale(&m[1][0]) + &y.scale(&m[1][1]),
        ];
        if nv == 3 {
            subs.push(Jet::var(nv, self.bound, 2)?);
        }
        self.compose(&subs)
    }

    /// Solves `F = 0` for variable `var` as a series in the other variables,
    /// correct through total degree `order` (capped by the bound).
    ///
    /// Chord iteration `s ← s − F(s)/F_var(0)`; each pass fixes one more degree.
    pub fn implicit_solve(&self, var: usize, order: u32) -> Result<Self, JetError> {
        if var >= self.nvars {
            return Err(JetError::InvalidVariable { var, nvars: self.nvars });
        }
        let c0 = self.eval_origin();
        let scale = self.max_abs_coeff();
        if !c0.is_zero_at(scale) {
            return Err(JetError::NonzeroConstant(c0.to_string()));
        }
        let mut e = [0u8; 3];
        e[var] = 1;
        let lead = self.coeff(e);
        if lead.is_zero_at(scale) {
            return Err(JetError::SingularImplicit(VAR_NAMES[var]));
        }
        let order = order.min(self.bound);
        let mut s = Jet::zero(self.nvars, order)?;
        for _ in 0..=order {
            let r = self.substitute(var, &s)?.truncate(order);
            if r.is_zero() {
                break;
            }
            s = &s - &r.scale(&(T::one() / lead.clone()));
        }
        Ok(s)
    }
}

impl<T: Scalar> fmt::Display for Jet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter() {
            let mono: Vec<String> = (0..self.nvars)
                .filter(|&v| e[v] > 0)
                .map(|v| if e[v] == 1 { VAR_NAMES[v].to_string() } else { format!("{}^{}", VAR_NAMES[v], e[v]) })
                .collect();
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                let cs = c.to_string();
                if cs.contains(['/', '-', 'e']) {
                    write!(f, "({cs})*{}", mono.join("*"))?;
                } else {
                    write!(f, "{cs}*{}", mono.join("*"))?;
                }
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<T: Scalar> $tr<&Jet<T>> for &Jet<T> {
            type Output = Jet<T>;
            /// Panics on mismatched variable counts; use the `checked_*` form to get an error.
            fn $method(self, rhs: &Jet<T>) -> Jet<T> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<T: Scalar> $tr<Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $method(self, rhs: Jet<T>) -> Jet<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Scalar> $tr<&Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $method(self, rhs: &Jet<T>) -> Jet<T> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<T: Scalar> Neg for &Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.neg_ref()
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    type J = Jet<Rational>;

    fn x(b: u32) -> J {
        J::var(2, b, 0).unwrap()
    }
    fn y(b: u32) -> J {
        J::var(2, b, 1).unwrap()
    }
    fn one(b: u32) -> J {
        J::constant(2, b, int(1)).unwrap()
    }

    #[test]
    fn monomial_product() {
        let p = &x(3) * &y(3);
        assert_eq!(p, J::monomial(2, 3, [1, 1, 0], int(1)).unwrap());
    }

    #[test]
    fn product_truncates_at_bound() {
        let p = (&one(1) + &x(1)) * (&one(1) - &x(1));
        assert_eq!(p, one(1));
    }

    #[test]
    fn binomial_square() {
        let a = &x(4) + &y(4).pow(2);
        let sq = &a * &a;
        let expect = J::from_terms(2, 4, [([2, 0, 0], int(1)), ([1, 2, 0], int(2)), ([0, 4, 0], int(1))]).unwrap();
        assert_eq!(sq, expect);
    }

    #[test]
    fn result_bound_is_min() {
        let p = &x(2) * &y(5);
        assert_eq!(p.bound(), 2);
    }

    #[test]
    fn mismatched_nvars_is_an_error() {
        let a = J::var(2, 3, 0).unwrap();
        let b = J::var(3, 3, 2).unwrap();
        assert_eq!(a.checked_mul(&b), Err(JetError::DimensionMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn zero_coefficients_compare_equal_to_zero() {
        let a = &x(3) - &x(3);
        assert_eq!(a, J::zero(2, 3).unwrap());
        assert!(a.is_zero());
    }

    #[test]
    fn partials() {
        let f = J::monomial(2, 5, [2, 1, 0], int(1)).unwrap();
        assert_eq!(f.partial(0).unwrap(), J::monomial(2, 4, [1, 1, 0], int(2)).unwrap());
        assert!(J::monomial(2, 5, [2, 0, 0], int(1)).unwrap().partial(1).unwrap().is_zero());
        assert_eq!(f.partial(0).unwrap().bound(), 4);
    }

    #[test]
    fn partial_in_p_of_normal_form_omega() {
        // Ω = ½p² + 3βyp − ½x + 3(β−α)y² at (α,β) = (−1,1)
        let omega = Jet::<Rational>::from_terms(
            3,
            4,
            [([0, 0, 2], rat(1, 2)), ([0, 1, 1], int(3)), ([1, 0, 0], rat(-1, 2)), ([0, 2, 0], int(6))],
        )
        .unwrap();
        let expect = Jet::from_terms(3, 3, [([0, 0, 1], int(1)), ([0, 1, 0], int(3))]).unwrap();
        assert_eq!(omega.partial(2).unwrap(), expect);
    }

    #[test]
    fn implicit_solve_simple() {
        let f = &x(4) - &y(4).pow(2);
        let s = f.implicit_solve(0, 4).unwrap();
        assert_eq!(s, y(4).pow(2));
    }

    #[test]
    fn implicit_solve_normal_form_x_series() {
        let (al, be) = (int(-1), int(1));
        let f = Jet::<Rational>::from_terms(
            3,
            4,
            [
                ([1, 0, 0], rat(-1, 2)),
                ([0, 0, 2], rat(1, 2)),
                ([0, 1, 1], int(3) * be.clone()),
                ([0, 2, 0], int(3) * (be.clone() - al.clone())),
            ],
        )
        .unwrap();
        let s = f.implicit_solve(0, 4).unwrap();
        let expect = Jet::from_terms(
            3,
            4,
            [([0, 2, 0], int(6) * (be.clone() - al)), ([0, 1, 1], int(6) * be), ([0, 0, 2], int(1))],
        )
        .unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn implicit_solve_nonlinear_residual_vanishes() {
        // F = x + x²y + y³ − x³
        let f = J::from_terms(2, 6, [([1, 0, 0], int(1)), ([2, 1, 0], int(1)), ([0, 3, 0], int(1)), ([3, 0, 0], int(-1))])
            .unwrap();
        let s = f.implicit_solve(0, 6).unwrap();
        let r = f.substitute(0, &s).unwrap();
        assert!(r.order().map_or(true, |o| o > 6));
        assert!(num_traits::Zero::is_zero(&s.coeff([1, 0, 0])));
    }

    #[test]
    fn implicit_solve_singular() {
        let f = &x(3).pow(2) - &y(3).pow(2);
        assert_eq!(f.implicit_solve(0, 3), Err(JetError::SingularImplicit("x")));
        let g = &x(3) + &one(3);
        assert!(matches!(g.implicit_solve(0, 3), Err(JetError::NonzeroConstant(_))));
    }

    #[test]
    fn translate_is_exact_shift() {
        let f = &x(3).pow(3) + &y(3);
        let g = f.translate(&[int(1), int(2)]).unwrap();
        // (x+1)^3 + y + 2
        assert_eq!(g.eval(&[int(0), int(0)]).unwrap(), int(3));
        assert_eq!(g.coeff([1, 0, 0]), int(3));
        assert_eq!(g.coeff([2, 0, 0]), int(3));
        assert_eq!(g.coeff([3, 0, 0]), int(1));
        assert_eq!(g.eval(&[int(1), int(-1)]).unwrap(), f.eval(&[int(2), int(1)]).unwrap());
    }

    #[test]
    fn linear_change_matches_evaluation() {
        let f = J::from_terms(2, 5, [([2, 0, 0], int(1)), ([1, 2, 0], int(3)), ([0, 4, 0], rat(-1, 2))]).unwrap();
        let m = [[int(1), int(2)], [int(0), int(1)]];
        let g = f.linear_change(&m).unwrap();
        let (a, b) = (rat(1, 3), rat(-2, 7));
        let lhs = g.eval(&[a.clone(), b.clone()]).unwrap();
        let rhs = f.eval(&[a + int(2) * b.clone(), b]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_is_readable() {
        let f = &x(3).pow(2) + &y(3).scale(&int(2));
        assert_eq!(f.to_string(), "2*y + x^2");
    }
}
