use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::cyclotomic::{zeta_pow, CycloNum};
use crate::polyring::{parse_expression, Expr, MultiPoly, RationalFunction, Var};
use crate::{Poly3, TFun, TPoly};

use super::group::{Point, Section};
use super::{FieldElement, FunFieldError, FunctionField};

pub const DEFAULT_MAX_ORDER: u32 = 64;

/// Exponents `(a, b, c)` of the scaling `(ζ^a x, ζ^b y, ζ^c t)` on the
/// order-16 model.
pub const SIGMA_EXPONENTS: [i64; 3] = [6, 9, 4];

/// The order-16 action written as translation by `(0, 0)` after the scaling.
pub const SIGMA_AST_PRINTED: [&str; 3] = ["z^6*(y^2-x^3)/x^2", "z^9*(x^3*y-y^3)/x^3", "z^4*t"];

const XYT: &[Var] = &[Var::X, Var::Y, Var::T];

/// A map `(x, y, t) ↦ (u, v, w)` of a model to itself, with `w = w(t)`.
///
/// When the map was given by polynomials in the ambient coordinates they
/// are kept alongside, for [`SurfaceMap::ambient_scalar`].
#[derive(Clone)]
pub struct SurfaceMap {
    ff: Arc<FunctionField>,
    u: FieldElement,
    v: FieldElement,
    w: TFun,
    ambient: Option<[Poly3; 3]>,
}

impl PartialEq for SurfaceMap {
    fn eq(&self, other: &Self) -> bool {
        self.ff == other.ff && self.u == other.u && self.v == other.v && self.w == other.w
    }
}

impl SurfaceMap {
    pub fn new(ff: Arc<FunctionField>, u: FieldElement, v: FieldElement, w: TFun) -> Self {
        SurfaceMap { ff, u, v, w, ambient: None }
    }

    pub fn identity(ff: Arc<FunctionField>) -> Self {
        let (u, v) = (ff.x(), ff.y());
        let ambient = Some([Poly3::var(Var::X), Poly3::var(Var::Y), Poly3::var(Var::T)]);
        SurfaceMap { ff, u, v, w: TFun::var(), ambient }
    }

    /// `(ζ^a x, ζ^b y, ζ^c t)` with `ζ` the generator of the model's field.
    pub fn scaling(ff: Arc<FunctionField>, exps: [i64; 3]) -> Self {
        let k = ff.model().field().clone();
        let exprs = [Var::X, Var::Y, Var::T]
            .iter()
            .zip(exps)
            .map(|(v, e)| Expr::Poly(MultiPoly::var(*v).scale(&zeta_pow(&k, e))))
            .collect::<Vec<_>>();
        Self::from_expressions(ff, [&exprs[0], &exprs[1], &exprs[2]]).expect("scalings are regular")
    }

    pub fn from_expressions(ff: Arc<FunctionField>, exprs: [&Expr; 3]) -> Result<Self, FunFieldError> {
        let [ex, ey, et] = exprs;
        let u = ff.normalize(&ex.clone().into_rational_function())?;
        let v = ff.normalize(&ey.clone().into_rational_function())?;
        let rt = et.clone().into_rational_function();
        let to_t = |p: &Poly3| p.to_uni_t();
        let w = match (to_t(rt.num()), to_t(rt.den())) {
            (Some(n), Some(d)) => TFun::new(n, d).ok_or(FunFieldError::ZeroDenominatorOnSurface)?,
            _ => return Err(FunFieldError::BaseMapNotInT { expr: et.to_string() }),
        };
        let ambient = match (ex.as_poly(), ey.as_poly(), et.as_poly()) {
            (Some(a), Some(b), Some(c)) => Some([a.clone(), b.clone(), c.clone()]),
            _ => None,
        };
        Ok(SurfaceMap { ff, u, v, w, ambient })
    }

    /// Parses the images of `x`, `y`, `t` over the model's field.
    pub fn parse(ff: Arc<FunctionField>, src: [&str; 3]) -> Result<Self, FunFieldError> {
        let k = ff.model().field().clone();
        let mut exprs = Vec::with_capacity(3);
        for (coordinate, s) in ["x", "y", "t"].into_iter().zip(src) {
            let allowed: &[Var] = if coordinate == "t" { &[Var::T] } else { XYT };
            match parse_expression(s, allowed, &k) {
                Ok(e) => exprs.push(e),
                Err(source) => {
                    if coordinate == "t" && parse_expression(s, XYT, &k).is_ok() {
                        return Err(FunFieldError::BaseMapNotInT { expr: s.to_string() });
                    }
                    return Err(FunFieldError::Parse { coordinate, source });
                }
            }
        }
        Self::from_expressions(ff, [&exprs[0], &exprs[1], &exprs[2]])
    }

    pub fn function_field(&self) -> &Arc<FunctionField> {
        &self.ff
    }

    pub fn u(&self) -> &FieldElement {
        &self.u
    }

    pub fn v(&self) -> &FieldElement {
        &self.v
    }

    pub fn w(&self) -> &TFun {
        &self.w
    }

    pub fn ambient(&self) -> Option<&[Poly3; 3]> {
        self.ambient.as_ref()
    }

    /// Images of `x`, `y`, `t` in the expression grammar.
    pub fn formulas(&self) -> [String; 3] {
        let w = RationalFunction::new(Poly3::from_uni_t(self.w.num()), Poly3::from_uni_t(self.w.den())).unwrap();
        [self.u.to_string(), self.v.to_string(), w.to_string()]
    }

    /// `v² − u³ − A(w)u − B(w)` in the function field.
    pub fn residual(&self) -> FieldElement {
        let ff = &self.ff;
        let compose = |p: &TPoly| TFun::from_poly(p.clone()).compose(&self.w).expect("polynomials have no poles");
        let (aw, bw) = (compose(ff.model().a()), compose(ff.model().b()));
        let v2 = ff.mul(&self.v, &self.v);
        let u3 = ff.pow(&self.u, 3);
        let au = self.u.scale(&aw);
        &(&(&v2 - &u3) - &au) - &FieldElement::from_t(bw)
    }

    pub fn verify_morphism(&self) -> bool {
        self.residual().is_zero()
    }

    /// The scalar `c` with `F(u, v, w) = c·F`, `F = y² − x³ − A x − B`, when
    /// the map is given by ambient polynomials and such a `c` exists.
    pub fn ambient_scalar(&self) -> Option<CycloNum> {
        let [px, py, pt] = self.ambient.as_ref()?;
        let model = self.ff.model();
        let x = Poly3::var(Var::X);
        let y = Poly3::var(Var::Y);
        let f = &(&(&y * &y) - &x.pow(3)) - &(&(&Poly3::from_uni_t(model.a()) * &x) + &Poly3::from_uni_t(model.b()));
        let g = f.substitute([px, py, pt]);
        let (e, lead) = f.leading_term()?;
        let c = g.terms().find(|(ge, _)| *ge == e).map(|(_, gc)| gc.clone() / lead.clone())?;
        (g == f.scale(&c)).then_some(c)
    }

    /// The constant `c` with `m*(dx∧dt/y) = c · dx∧dt/y`.
    ///
    /// With `w = w(t)`, `du ∧ dw = w′ ∂u/∂x dx ∧ dt` where `∂/∂x` is taken
    /// along the curve, so the factor is `w′ · ∂u/∂x · y / v`.
    pub fn omega_factor(&self) -> Result<CycloNum, FunFieldError> {
        if !self.verify_morphism() {
            return Err(FunFieldError::NotAMorphism { residual: self.residual().to_string() });
        }
        let ff = &self.ff;
        let du = ff.d_dx(&self.u);
        let num = ff.mul(&du, &ff.y()).scale(&self.w.derivative());
        let factor = ff.div(&num, &self.v).ok_or(FunFieldError::ZeroDenominatorOnSurface)?;
        factor.as_constant().ok_or_else(|| FunFieldError::NotConstantFactor { factor: factor.to_string() })
    }

    /// `self ∘ other`: substitutes the images of `other` into `self`.
    pub fn compose(&self, other: &SurfaceMap) -> Result<SurfaceMap, FunFieldError> {
        if self.ff != other.ff {
            return Err(FunFieldError::IncompatibleModels);
        }
        let ff = &self.ff;
        let sub = |e: &FieldElement| {
            ff.substitute(e, &other.u, &other.v, &other.w).ok_or(FunFieldError::ZeroDenominatorOnSurface)
        };
        let u = sub(&self.u)?;
        let v = sub(&self.v)?;
        let w = self.w.compose(&other.w).ok_or(FunFieldError::ZeroDenominatorOnSurface)?;
        let ambient = match (&self.ambient, &other.ambient) {
            (Some(a), Some(b)) => {
                let s = [&b[0], &b[1], &b[2]];
                Some([a[0].substitute(s), a[1].substitute(s), a[2].substitute(s)])
            }
            _ => None,
        };
        Ok(SurfaceMap { ff: ff.clone(), u, v, w, ambient })
    }

    pub fn is_identity(&self) -> bool {
        self.u == self.ff.x() && self.v == self.ff.y() && self.w == TFun::var()
    }

    pub fn power(&self, k: u32) -> Result<SurfaceMap, FunFieldError> {
        let mut acc = SurfaceMap::identity(self.ff.clone());
        for _ in 0..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Least `k ≤ max` with `selfᵏ = id`.
    pub fn order(&self, max: u32) -> Result<u32, FunFieldError> {
        let mut p = self.clone();
        for k in 1..=max {
            if p.is_identity() {
                return Ok(k);
            }
            if k < max {
                p = p.compose(self)?;
            }
        }
        Err(FunFieldError::OrderBoundExceeded { max })
    }

    /// `self^(order − 1)`.
    pub fn inverse(&self, max: u32) -> Result<SurfaceMap, FunFieldError> {
        let n = self.order(max)?;
        self.power(n - 1)
    }

    /// Translation `P ↦ P + T` on every fiber, `w = t`.
    pub fn translation(ff: Arc<FunctionField>, section: &Section) -> Result<SurfaceMap, FunFieldError> {
        if !ff.generic_fiber().contains(section) {
            return Err(FunFieldError::NotOnCurve { point: section.to_string() });
        }
        let Point::Affine(x0, y0) = section else {
            return Ok(SurfaceMap::identity(ff));
        };
        let x0 = FieldElement::from_t(x0.clone());
        let y0 = FieldElement::from_t(y0.clone());
        let (x, y) = (ff.x(), ff.y());
        let lambda = ff.div(&(&y - &y0), &(&x - &x0)).expect("x is transcendental over K(t)");
        let u = &(&ff.mul(&lambda, &lambda) - &x) - &x0;
        let v = &ff.mul(&lambda, &(&x - &u)) - &y;
        Ok(SurfaceMap::new(ff, u, v, TFun::var()))
    }
}

impl fmt::Debug for SurfaceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [u, v, w] = self.formulas();
        write!(f, "({u}, {v}, {w})")
    }
}

impl fmt::Display for SurfaceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The maps of the order-16 construction on the model of a function field.
#[derive(Debug, Clone)]
pub struct NamedMaps {
    pub sigma: SurfaceMap,
    pub translation: SurfaceMap,
    /// `translation ∘ sigma`.
    pub sigma_ast: SurfaceMap,
    /// `sigma ∘ sigma_ast⁻¹`.
    pub tau: SurfaceMap,
    /// `sigma_ast` agrees with [`SIGMA_AST_PRINTED`].
    pub sigma_ast_matches_printed: bool,
    /// `tau` agrees with the translation by `(0, 0)`.
    pub tau_is_translation: bool,
}

impl NamedMaps {
    pub fn get(&self, name: &str) -> Option<&SurfaceMap> {
        match name {
            "sigma" => Some(&self.sigma),
            "translation" => Some(&self.translation),
            "sigma_ast" => Some(&self.sigma_ast),
            "tau" => Some(&self.tau),
            _ => None,
        }
    }
}

/// Builds `σ`, translation by `(0, 0)`, `σ_AST` and `τ`.
pub fn build_named_maps(ff: &Arc<FunctionField>) -> Result<NamedMaps, FunFieldError> {
    let sigma = SurfaceMap::scaling(ff.clone(), SIGMA_EXPONENTS);
    let origin = Point::Affine(TFun::zero(), TFun::zero());
    let translation = SurfaceMap::translation(ff.clone(), &origin)?;
    let sigma_ast = translation.compose(&sigma)?;
    let printed = SurfaceMap::parse(ff.clone(), SIGMA_AST_PRINTED)?;
    let tau = sigma.compose(&sigma_ast.inverse(DEFAULT_MAX_ORDER)?)?;
    Ok(NamedMaps {
        sigma_ast_matches_printed: printed == sigma_ast,
        tau_is_translation: tau == translation,
        sigma,
        translation,
        sigma_ast,
        tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::order16_model;
    use crate::cyclotomic::as_zeta_power;
    use num_traits::One;

    fn ff() -> Arc<FunctionField> {
        FunctionField::new(order16_model())
    }

    fn z(ff: &FunctionField, k: i64) -> CycloNum {
        zeta_pow(ff.model().field(), k)
    }

    #[test]
    fn sigma_is_an_automorphism() {
        let ff = ff();
        let sigma = SurfaceMap::scaling(ff.clone(), SIGMA_EXPONENTS);
        assert!(sigma.verify_morphism());
        assert_eq!(sigma.ambient_scalar(), Some(z(&ff, 2)));
        assert_eq!(sigma.omega_factor(), Ok(z(&ff, 1)));
        assert_eq!(sigma.order(32), Ok(16));
        let id = SurfaceMap::identity(ff.clone());
        assert_eq!(id.order(32), Ok(1));
        assert_eq!(id.ambient_scalar(), Some(CycloNum::one()));
        assert_eq!(id.omega_factor(), Ok(CycloNum::one()));
    }

    #[test]
    fn base_only_scaling_is_not_a_morphism() {
        let ff = ff();
        let m = SurfaceMap::parse(ff, ["x", "y", "z^4*t"]).unwrap();
        assert!(!m.verify_morphism());
        assert!(matches!(m.omega_factor(), Err(FunFieldError::NotAMorphism { .. })));
    }

    #[test]
    fn hyperelliptic_involution() {
        let ff = ff();
        let m = SurfaceMap::parse(ff.clone(), ["x", "-y", "t"]).unwrap();
        assert!(m.verify_morphism());
        assert_eq!(m.ambient_scalar(), Some(CycloNum::one()));
        assert_eq!(m.omega_factor(), Ok(-CycloNum::one()));
        assert_eq!(m.order(8), Ok(2));
    }

    #[test]
    fn translation_by_two_torsion() {
        let ff = ff();
        let origin = Point::Affine(TFun::zero(), TFun::zero());
        let tr = SurfaceMap::translation(ff.clone(), &origin).unwrap();
        let printed = SurfaceMap::parse(ff.clone(), ["(y^2-x^3)/x^2", "(x^3*y-y^3)/x^3", "t"]).unwrap();
        assert_eq!(tr, printed);
        assert!(tr.verify_morphism());
        assert_eq!(tr.omega_factor(), Ok(CycloNum::one()));
        assert_eq!(tr.order(8), Ok(2));
        assert_eq!(SurfaceMap::translation(ff.clone(), &Point::Zero).unwrap(), SurfaceMap::identity(ff));
    }

    #[test]
    fn named_maps() {
        let ff = ff();
        let m = build_named_maps(&ff).unwrap();
        assert!(m.sigma_ast_matches_printed);
        assert!(m.tau_is_translation);
        assert_eq!(m.sigma_ast.omega_factor(), Ok(z(&ff, 1)));
        assert_eq!(m.sigma_ast.order(32), Ok(16));
        assert_eq!(m.tau.omega_factor(), Ok(CycloNum::one()));
        assert_eq!(m.sigma_ast.power(2).unwrap(), m.sigma.power(2).unwrap());
        assert_eq!(m.sigma.compose(&m.translation).unwrap(), m.translation.compose(&m.sigma).unwrap());
        assert_eq!(as_zeta_power(ff.model().field(), &m.sigma.omega_factor().unwrap()), Some(1));
    }

    #[test]
    fn parse_rejects_fiber_dependent_base() {
        let ff = ff();
        assert!(matches!(SurfaceMap::parse(ff.clone(), ["x", "y", "x*t"]), Err(FunFieldError::BaseMapNotInT { .. })));
        assert!(matches!(SurfaceMap::parse(ff, ["x +", "y", "t"]), Err(FunFieldError::Parse { coordinate: "x", .. })));
    }
}
