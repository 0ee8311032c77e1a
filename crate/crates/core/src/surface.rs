//! Short Weierstrass models `y² = x³ + A(t)x + B(t)` over the projective
//! `t`-line and their singular fibers.
//!
//! Fibers are classified from the vanishing orders of `A`, `B` and the
//! discriminant at each place (characteristic zero, so the orders alone
//! decide the Kodaira type). Finite places come from a gcd-free basis of
//! `Δ, A, B`; a basis element of degree `d` stands for `d` fibers with
//! identical data. The point at infinity is read off the twisted model
//! `s⁸A(1/s), s¹²B(1/s)`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::cyclotomic::{CycloNum, CyclotomicField};
use crate::polyring::{gcd_free_basis, vanishing_order, Place, Valuation};
use crate::scalar::Field;
use crate::TPoly;

/// Degree bounds for a K3 model; they fix the twist at infinity.
pub const DEG_A: usize = 8;
pub const DEG_B: usize = 12;
pub const DEG_DELTA: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("deg {which} = {degree} exceeds the bound {bound}")]
    DegreeBound { which: &'static str, degree: usize, bound: usize },
    #[error("the discriminant vanishes identically")]
    ZeroDiscriminant,
    #[error("model is not minimal at {place} (vA = {va}, vB = {vb})")]
    NonMinimal { place: String, va: Valuation, vb: Valuation },
    #[error("vanishing orders vA = {va}, vB = {vb}, vDelta = {vd} match no Kodaira type")]
    Unclassifiable { va: Valuation, vb: Valuation, vd: u32 },
    #[error("model is non-minimal at the place {place} of degree {degree} > 1")]
    NonLinearNonMinimalPlace { place: String, degree: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    Smooth,
    /// `I_n`, n ≥ 1
    I(u32),
    II,
    III,
    IV,
    /// `I_n*`, n ≥ 0
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    pub fn euler(self) -> u32 {
        match self {
            KodairaType::Smooth => 0,
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => n + 6,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Number of irreducible components.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::Smooth | KodairaType::II => 1,
            KodairaType::I(n) => n,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IStar(n) => n + 5,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::Smooth => write!(f, "smooth"),
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

/// Kodaira type from the vanishing orders of `A`, `B` and `Δ` at a place
/// of a minimal model.
pub fn classify_place(va: Valuation, vb: Valuation, vd: u32) -> Result<KodairaType, SurfaceError> {
    use KodairaType::*;
    if va.at_least(4) && vb.at_least(6) {
        return Err(SurfaceError::NonMinimal { place: "?".into(), va, vb });
    }
    if vd == 0 {
        return Ok(Smooth);
    }
    let kind = if va.is(0) && vb.is(0) {
        Some(I(vd))
    } else if va.at_least(1) && vb.is(1) && vd == 2 {
        Some(II)
    } else if va.is(1) && vb.at_least(2) && vd == 3 {
        Some(III)
    } else if va.at_least(2) && vb.is(2) && vd == 4 {
        Some(IV)
    } else if vd == 6 && ((va.is(2) && vb.at_least(3)) || (va.at_least(3) && vb.is(3))) {
        Some(IStar(0))
    } else if va.is(2) && vb.is(3) && vd > 6 {
        Some(IStar(vd - 6))
    } else if va.at_least(3) && vb.is(4) && vd == 8 {
        Some(IVStar)
    } else if va.is(3) && vb.at_least(5) && vd == 9 {
        Some(IIIStar)
    } else if va.at_least(4) && vb.is(5) && vd == 10 {
        Some(IIStar)
    } else {
        None
    };
    kind.ok_or(SurfaceError::Unclassifiable { va, vb, vd })
}

/// `y² = x³ + A(t)x + B(t)` with `deg A ≤ 8`, `deg B ≤ 12`, `Δ ≢ 0`.
#[derive(Clone, PartialEq)]
pub struct WeierstrassModel {
    field: Arc<CyclotomicField>,
    a: TPoly,
    b: TPoly,
}

impl WeierstrassModel {
    pub fn new(field: Arc<CyclotomicField>, a: TPoly, b: TPoly) -> Result<Self, SurfaceError> {
        for (which, p, bound) in [("A", &a, DEG_A), ("B", &b, DEG_B)] {
            if let Some(d) = p.degree() {
                if d > bound {
                    return Err(SurfaceError::DegreeBound { which, degree: d, bound });
                }
            }
        }
        let m = WeierstrassModel { field, a, b };
        if m.discriminant().is_zero() {
            return Err(SurfaceError::ZeroDiscriminant);
        }
        Ok(m)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn a(&self) -> &TPoly {
        &self.a
    }

    pub fn b(&self) -> &TPoly {
        &self.b
    }

    /// `Δ = −16(4A³ + 27B²)`.
    pub fn discriminant(&self) -> TPoly {
        discriminant(&self.a, &self.b)
    }

    /// Removes `p⁴, p⁶` from `A, B` at every linear finite place where both
    /// vanish to order at least 4 and 6.
    pub fn minimalize(&self) -> Result<WeierstrassModel, SurfaceError> {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        loop {
            let nonzero: Vec<TPoly> = [&a, &b].into_iter().filter(|p| !p.is_zero()).cloned().collect();
            let basis = gcd_free_basis(&nonzero).expect("nonzero inputs");
            let bad = basis.into_iter().map(|(f, _)| f).find(|f| {
                vanishing_order(&a, f).at_least(4) && vanishing_order(&b, f).at_least(6)
            });
            let Some(f) = bad else { break };
            let degree = f.degree().unwrap();
            if degree > 1 {
                return Err(SurfaceError::NonLinearNonMinimalPlace { place: f.to_string(), degree });
            }
            a = a.exact_div(&f.pow(4)).unwrap();
            b = b.exact_div(&f.pow(6)).unwrap();
        }
        Ok(WeierstrassModel { field: self.field.clone(), a, b })
    }

    /// One fiber record per singular finite place cluster, then infinity.
    pub fn classify_all(&self) -> Result<FiberInventory, SurfaceError> {
        let delta = self.discriminant();
        let inputs: Vec<TPoly> = [&delta, &self.a, &self.b].into_iter().filter(|p| !p.is_zero()).cloned().collect();
        let basis = gcd_free_basis(&inputs).expect("nonzero inputs");
        let mut fibers = Vec::new();
        for (f, _) in basis {
            let vd = vanishing_order(&delta, &f).finite().unwrap();
            if vd == 0 {
                continue;
            }
            let va = vanishing_order(&self.a, &f);
            let vb = vanishing_order(&self.b, &f);
            let place = Place::Finite(f);
            let kind = classify_place(va, vb, vd).map_err(|e| with_place(e, &place))?;
            fibers.push(KodairaFiber::new(place, kind, va, vb, vd));
        }

        let (va, vb, vd) = self.orders_at_infinity();
        let kind = classify_place(va, vb, vd).map_err(|e| with_place(e, &Place::Infinity))?;
        fibers.push(KodairaFiber::new(Place::Infinity, kind, va, vb, vd));

        let euler_total = fibers.iter().map(|f| f.euler * f.multiplicity as u32).sum();
        Ok(FiberInventory { fibers, euler_total })
    }

    /// Vanishing orders at `t = ∞` of the twisted model, after removing
    /// `(s⁴, s⁶)` while both orders allow it.
    pub fn orders_at_infinity(&self) -> (Valuation, Valuation, u32) {
        let at_inf = |p: &TPoly, bound: usize| match p.degree() {
            None => Valuation::Infinite,
            Some(d) => Valuation::Finite((bound - d) as u32),
        };
        let mut va = at_inf(&self.a, DEG_A);
        let mut vb = at_inf(&self.b, DEG_B);
        let mut vd = at_inf(&self.discriminant(), DEG_DELTA).finite().expect("nonzero discriminant");
        while va.at_least(4) && vb.at_least(6) {
            va = va.minus(4);
            vb = vb.minus(6);
            vd -= 12;
        }
        (va, vb, vd)
    }

    /// The model seen from the other chart: `t ↦ 1/t` with the 8/12 twist.
    pub fn twisted(&self) -> WeierstrassModel {
        WeierstrassModel { field: self.field.clone(), a: self.a.reversed(DEG_A), b: self.b.reversed(DEG_B) }
    }

    /// True iff the Euler numbers of the fibers add up to 24.
    pub fn is_k3(&self) -> Result<bool, SurfaceError> {
        Ok(self.classify_all()?.is_k3())
    }
}

impl fmt::Debug for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})*x + ({}) over {:?}", self.a, self.b, self.field)
    }
}

fn with_place(e: SurfaceError, place: &Place<CycloNum>) -> SurfaceError {
    match e {
        SurfaceError::NonMinimal { va, vb, .. } => SurfaceError::NonMinimal { place: place.to_string(), va, vb },
        other => other,
    }
}

pub fn discriminant(a: &TPoly, b: &TPoly) -> TPoly {
    let four_a3 = a.pow(3).scale(&CycloNum::from_i64(4));
    let b2 = b.pow(2).scale(&CycloNum::from_i64(27));
    (&four_a3 + &b2).scale(&CycloNum::from_i64(-16))
}

#[derive(Debug, Clone, PartialEq)]
pub struct KodairaFiber {
    pub place: Place<CycloNum>,
    pub kind: KodairaType,
    pub va: Valuation,
    pub vb: Valuation,
    pub vdelta: u32,
    pub euler: u32,
    pub components: u32,
    /// Number of geometric fibers sharing this data (degree of the place).
    pub multiplicity: usize,
}

impl KodairaFiber {
    fn new(place: Place<CycloNum>, kind: KodairaType, va: Valuation, vb: Valuation, vdelta: u32) -> Self {
        let multiplicity = place.degree();
        KodairaFiber { place, kind, va, vb, vdelta, euler: kind.euler(), components: kind.components(), multiplicity }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberInventory {
    pub fibers: Vec<KodairaFiber>,
    pub euler_total: u32,
}

impl FiberInventory {
    pub fn is_k3(&self) -> bool {
        self.euler_total == 24
    }

    /// Geometric count of singular fibers of each type, in table order.
    pub fn type_counts(&self) -> Vec<(KodairaType, usize)> {
        let mut counts: std::collections::BTreeMap<KodairaType, usize> = Default::default();
        for f in self.fibers.iter().filter(|f| f.kind != KodairaType::Smooth) {
            *counts.entry(f.kind).or_default() += f.multiplicity;
        }
        counts.into_iter().collect()
    }
}

/// The one-parameter family's `A = t³(t⁴ − 1)`, `B = 0` over `Q(ζ₁₆)`.
pub fn order16_model() -> WeierstrassModel {
    let a = TPoly::from_i64s(&[0, 0, 0, -1, 0, 0, 0, 1]);
    WeierstrassModel::new(CyclotomicField::new(16), a, TPoly::zero()).expect("valid model")
}
