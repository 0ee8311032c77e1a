//! The function field `K(t)(x)[y] / (y² − x³ − A x − B)` of a Weierstrass
//! model, maps between points of the surface, and the group law on the
//! generic fiber.
//!
//! Elements are kept as `a + b·y` with `a, b ∈ K(t)(x)` in reduced form, so
//! equality is structural.

mod group;
mod maps;

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cyclotomic::CycloNum;
use crate::polyring::{ParseError, RationalFunction, TowerTXY, UniPoly};
use crate::scalar::Field;
use crate::surface::WeierstrassModel;
use crate::{Poly3, TFun, XtFun};

pub use group::{add_points, EllipticCurve, Point, Section};
pub use maps::{build_named_maps, NamedMaps, SurfaceMap, DEFAULT_MAX_ORDER, SIGMA_AST_PRINTED, SIGMA_EXPONENTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunFieldError {
    #[error("denominator vanishes on the surface")]
    ZeroDenominatorOnSurface,
    #[error("map does not preserve the surface; residual {residual}")]
    NotAMorphism { residual: String },
    #[error("pullback of the two-form is {factor} times the form, not a constant multiple")]
    NotConstantFactor { factor: String },
    #[error("no power up to {max} is the identity")]
    OrderBoundExceeded { max: u32 },
    #[error("image of t must be a function of t alone, got {expr}")]
    BaseMapNotInT { expr: String },
    #[error("maps live on different models")]
    IncompatibleModels,
    #[error("point {point} is not on the curve")]
    NotOnCurve { point: String },
    #[error("cannot parse image of {coordinate}: {source}")]
    Parse { coordinate: &'static str, source: ParseError },
}

/// The function field of a [`WeierstrassModel`].
#[derive(Debug)]
pub struct FunctionField {
    model: WeierstrassModel,
    a: TFun,
    b: TFun,
    /// `x³ + A x + B` as an element of `K(t)(x)`.
    rhs: XtFun,
}

impl PartialEq for FunctionField {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model
    }
}

impl FunctionField {
    pub fn new(model: WeierstrassModel) -> Arc<Self> {
        let a = TFun::from_poly(model.a().clone());
        let b = TFun::from_poly(model.b().clone());
        let rhs = XtFun::from_poly(UniPoly::new(vec![b.clone(), a.clone(), TFun::zero(), TFun::one()]));
        Arc::new(FunctionField { model, a, b, rhs })
    }

    pub fn model(&self) -> &WeierstrassModel {
        &self.model
    }

    pub fn a(&self) -> &TFun {
        &self.a
    }

    pub fn b(&self) -> &TFun {
        &self.b
    }

    pub fn rhs(&self) -> &XtFun {
        &self.rhs
    }

    pub fn x(&self) -> FieldElement {
        FieldElement::from_xt(XtFun::var())
    }

    pub fn y(&self) -> FieldElement {
        FieldElement { a: XtFun::zero(), b: XtFun::one() }
    }

    pub fn t(&self) -> FieldElement {
        FieldElement::from_t(TFun::var())
    }

    pub fn mul(&self, p: &FieldElement, q: &FieldElement) -> FieldElement {
        if p.b.is_zero() && q.b.is_zero() {
            return FieldElement::from_xt(&p.a * &q.a);
        }
        let bd = &p.b * &q.b;
        FieldElement { a: &(&p.a * &q.a) + &(&bd * &self.rhs), b: &(&p.a * &q.b) + &(&p.b * &q.a) }
    }

    /// `(a + b y)⁻¹ = (a − b y) / (a² − b² f)`.
    pub fn inv(&self, p: &FieldElement) -> Option<FieldElement> {
        if p.b.is_zero() {
            return p.a.inv().map(FieldElement::from_xt);
        }
        let norm = &(&p.a * &p.a) - &(&(&p.b * &p.b) * &self.rhs);
        let ni = norm.inv()?;
        Some(FieldElement { a: &p.a * &ni, b: -&(&p.b * &ni) })
    }

    pub fn div(&self, p: &FieldElement, q: &FieldElement) -> Option<FieldElement> {
        Some(self.mul(p, &self.inv(q)?))
    }

    pub fn pow(&self, p: &FieldElement, mut e: u32) -> FieldElement {
        let mut base = p.clone();
        let mut acc = FieldElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Reduces a polynomial in `x, y, t` with `y² = f`.
    pub fn from_poly(&self, p: &Poly3) -> FieldElement {
        let max_y = p.terms().map(|(e, _)| e[1]).max().unwrap_or(0);
        let mut f_pows = vec![XtFun::one()];
        for i in 1..=max_y / 2 {
            f_pows.push(&f_pows[i as usize - 1] * &self.rhs);
        }
        let mut a = XtFun::zero();
        let mut b = XtFun::zero();
        for (e, c) in p.terms() {
            let coeff = TFun::from_poly(UniPoly::monomial(c.clone(), e[2] as usize));
            let mono = XtFun::from_poly(UniPoly::monomial(coeff, e[0] as usize));
            let term = &mono * &f_pows[(e[1] / 2) as usize];
            if e[1] % 2 == 0 {
                a = &a + &term;
            } else {
                b = &b + &term;
            }
        }
        FieldElement { a, b }
    }

    /// Canonical `a + b·y` form of a rational function on the surface.
    pub fn normalize(&self, r: &RationalFunction<CycloNum>) -> Result<FieldElement, FunFieldError> {
        let n = self.from_poly(r.num());
        let d = self.from_poly(r.den());
        self.div(&n, &d).ok_or(FunFieldError::ZeroDenominatorOnSurface)
    }

    /// `r(u, w)` for `r ∈ K(t)(x)`; `None` if a denominator vanishes.
    pub fn eval_xt(&self, r: &XtFun, u: &FieldElement, w: &TFun) -> Option<FieldElement> {
        let horner = |p: &UniPoly<TFun>| -> Option<FieldElement> {
            let mut acc = FieldElement::zero();
            for c in p.coeffs().iter().rev() {
                let c = if w == &TFun::var() { c.clone() } else { c.compose(w)? };
                acc = &self.mul(&acc, u) + &FieldElement::from_t(c);
            }
            Some(acc)
        };
        let n = horner(r.num())?;
        if r.den().is_one() {
            return Some(n);
        }
        self.div(&n, &horner(r.den())?)
    }

    /// `e(u, v, w)`.
    pub fn substitute(&self, e: &FieldElement, u: &FieldElement, v: &FieldElement, w: &TFun) -> Option<FieldElement> {
        let a = self.eval_xt(&e.a, u, w)?;
        if e.b.is_zero() {
            return Some(a);
        }
        let b = self.eval_xt(&e.b, u, w)?;
        Some(&a + &self.mul(&b, v))
    }

    /// Partial derivative in `x` along the curve (`t` fixed), using
    /// `∂y/∂x = (3x² + A) / (2y)`.
    pub fn d_dx(&self, e: &FieldElement) -> FieldElement {
        if e.b.is_zero() {
            return FieldElement::from_xt(e.a.derivative());
        }
        let fx = self.rhs.derivative();
        let two_f = &self.rhs * &XtFun::from_i64(2);
        FieldElement { a: e.a.derivative(), b: &e.b.derivative() + &(&(&e.b * &fx) / &two_f) }
    }
}

/// `a + b·y` with `a, b ∈ K(t)(x)`.
#[derive(Clone, PartialEq)]
pub struct FieldElement {
    a: XtFun,
    b: XtFun,
}

impl FieldElement {
    pub fn new(a: XtFun, b: XtFun) -> Self {
        FieldElement { a, b }
    }

    pub fn from_xt(a: XtFun) -> Self {
        FieldElement { a, b: XtFun::zero() }
    }

    pub fn from_t(c: TFun) -> Self {
        Self::from_xt(XtFun::constant(c))
    }

    pub fn constant(c: CycloNum) -> Self {
        Self::from_t(TFun::constant(c))
    }

    pub fn a(&self) -> &XtFun {
        &self.a
    }

    pub fn b(&self) -> &XtFun {
        &self.b
    }

    /// The value, if it lies in `K(t)`.
    pub fn as_t(&self) -> Option<TFun> {
        if self.b.is_zero() {
            self.a.as_constant()
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<CycloNum> {
        self.as_t()?.as_constant()
    }

    pub fn scale(&self, c: &TFun) -> Self {
        let c = XtFun::constant(c.clone());
        FieldElement { a: &self.a * &c, b: &self.b * &c }
    }

    pub fn to_rational_function(&self) -> RationalFunction<CycloNum> {
        let tower = TowerTXY::from_poly(UniPoly::new(vec![self.a.clone(), self.b.clone()]));
        RationalFunction::from_tower(&tower)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn zero() -> Self {
        Self::from_xt(XtFun::zero())
    }

    pub fn one() -> Self {
        Self::from_xt(XtFun::one())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -&self.a, b: -&self.b }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational_function())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}
