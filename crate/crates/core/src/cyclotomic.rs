//! Exact arithmetic in the cyclotomic fields `Q(ζₙ)`.
//!
//! An element is a coefficient vector of length `φ(n)` in the power basis
//! `1, ζ, …, ζ^{φ(n)-1}`, reduced modulo the cyclotomic polynomial `Φₙ`.
//! Elements that happen to be rational are always stored in `Q = Q(ζ₁)`,
//! which embeds in every cyclotomic field; this keeps `zero()`/`one()`
//! context free and makes equality structural. Arithmetic between two
//! different non-trivial orders is rejected.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::polyring::{write_dense, UniPoly};
use crate::scalar::{Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("cannot combine elements of Q(zeta_{left}) and Q(zeta_{right})")]
    MixedFields { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// The field `Q(ζₙ)` with its minimal polynomial and reduction table.
pub struct CyclotomicField {
    order: u32,
    phi: UniPoly<Rational>,
    degree: usize,
    /// `ζ^k` reduced, for `k` in `0..order`, as sparse (index, coefficient).
    powers: Vec<Vec<(usize, Rational)>>,
}

impl CyclotomicField {
    pub fn new(order: u32) -> Arc<Self> {
        assert!(order >= 1, "cyclotomic order must be positive");
        if order == 1 {
            return rationals();
        }
        Arc::new(Self::build(order))
    }

    fn build(order: u32) -> Self {
        let phi = cyclotomic_polynomial(order);
        let degree = phi.degree().unwrap();
        debug_assert_eq!(degree, euler_phi(order) as usize);
        let mut powers = Vec::with_capacity(order as usize);
        for k in 0..order as usize {
            let r = UniPoly::monomial(Rational::one(), k).rem(&phi);
            powers.push(
                r.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, c.clone()))
                    .collect(),
            );
        }
        CyclotomicField { order, phi, degree, powers }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `φ(n)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Φₙ`, constant term first.
    pub fn minimal_polynomial(&self) -> &UniPoly<Rational> {
        &self.phi
    }
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}
impl Eq for CyclotomicField {}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

fn rationals() -> Arc<CyclotomicField> {
    static Q: OnceLock<Arc<CyclotomicField>> = OnceLock::new();
    Q.get_or_init(|| Arc::new(CyclotomicField::build(1))).clone()
}

/// `Φₙ` by dividing `xⁿ - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u32) -> UniPoly<Rational> {
    let mut xn1 = UniPoly::monomial(Rational::one(), n as usize);
    xn1 = &xn1 - &UniPoly::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        xn1 = xn1.exact_div(&cyclotomic_polynomial(d)).expect("Φ_d divides xⁿ - 1");
    }
    xn1
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// Multiplicative order of `ζₙᵏ`.
pub fn zeta_power_order(n: u32, k: i64) -> u32 {
    let k = k.rem_euclid(n as i64) as u32;
    n / k.gcd(&n)
}

/// Exact element of `Q(ζₙ)`.
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic, the fallible form of the operators.
pub fn cyclo_arith(a: &CycloNum, b: &CycloNum, op: ArithOp) -> Result<CycloNum, CycloError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_add(&-b.clone()),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => {
            let inv = b.inv().ok_or(CycloError::DivisionByZero)?;
            a.checked_mul(&inv)
        }
    }
}

/// `ζᵏ` in `field`, for any integer `k`.
pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> CycloNum {
    let k = k.rem_euclid(field.order as i64) as usize;
    let mut coeffs = vec![Rational::zero(); field.degree];
    for (i, c) in &field.powers[k] {
        coeffs[*i] = c.clone();
    }
    CycloNum::normalized(field.clone(), coeffs)
}

/// The exponent `k ∈ [0, n)` with `c = ζₙᵏ`, if any.
pub fn as_zeta_power(field: &Arc<CyclotomicField>, c: &CycloNum) -> Option<u32> {
    (0..field.order).find(|&k| zeta_pow(field, k as i64) == *c)
}

impl CycloNum {
    fn normalized(field: Arc<CyclotomicField>, coeffs: Vec<Rational>) -> Self {
        debug_assert_eq!(coeffs.len(), field.degree);
        if field.order != 1 && coeffs[1..].iter().all(Zero::is_zero) {
            let c0 = coeffs.into_iter().next().unwrap();
            return CycloNum { field: rationals(), coeffs: vec![c0] };
        }
        CycloNum { field, coeffs }
    }

    pub fn rational(q: Rational) -> Self {
        CycloNum { field: rationals(), coeffs: vec![q] }
    }

    /// The generator `ζ` of `field`.
    pub fn zeta(field: &Arc<CyclotomicField>) -> Self {
        zeta_pow(field, 1)
    }

    /// The field this element is stored in; `Q(ζ₁)` for rationals.
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// The coefficient vector of length `φ(n)` in the power basis of
    /// `field`. Panics if the element lives in a different non-trivial field.
    pub fn coefficients_in(&self, field: &CyclotomicField) -> Vec<Rational> {
        if self.field.order == field.order {
            return self.coeffs.clone();
        }
        assert_eq!(self.field.order, 1, "element of Q(zeta_{}) is not in {field:?}", self.field.order);
        let mut v = vec![Rational::zero(); field.degree];
        v[0] = self.coeffs[0].clone();
        v
    }

    pub fn is_rational(&self) -> bool {
        self.field.order == 1
    }

    fn common_field(&self, other: &Self) -> Result<Arc<CyclotomicField>, CycloError> {
        match (self.field.order, other.field.order) {
            (1, _) => Ok(other.field.clone()),
            (_, 1) => Ok(self.field.clone()),
            (a, b) if a == b => Ok(self.field.clone()),
            (a, b) => Err(CycloError::MixedFields { left: a, right: b }),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycloError> {
        let field = self.common_field(other)?;
        if field.order == 1 {
            return Ok(Self::rational(&self.coeffs[0] + &other.coeffs[0]));
        }
        let a = self.coefficients_in(&field);
        let b = other.coefficients_in(&field);
        let sum = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(Self::normalized(field, sum))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycloError> {
        let field = self.common_field(other)?;
        if self.is_rational() || other.is_rational() {
            let (q, e) = if self.is_rational() { (&self.coeffs[0], other) } else { (&other.coeffs[0], self) };
            if q.is_zero() {
                return Ok(Self::zero());
            }
            let coeffs = e.coeffs.iter().map(|c| c * q).collect();
            return Ok(Self::normalized(e.field.clone(), coeffs));
        }
        let n = field.order as usize;
        let mut acc = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    acc[(i + j) % n] += a * b;
                }
            }
        }
        let mut out = vec![Rational::zero(); field.degree];
        for (e, c) in acc.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in &field.powers[e] {
                out[*i] += &c * p;
            }
        }
        Ok(Self::normalized(field, out))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Φₙ`.
    pub fn checked_inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::rational(self.coeffs[0].recip()));
        }
        let a = UniPoly::new(self.coeffs.clone());
        let (g, s, _) = a.ext_gcd(&self.field.phi);
        debug_assert!(g.is_one());
        let s = s.rem(&self.field.phi);
        let mut coeffs = s.into_coeffs();
        coeffs.resize(self.field.degree, Rational::zero());
        Ok(Self::normalized(self.field.clone(), coeffs))
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}
impl Eq for CycloNum {}

impl std::hash::Hash for CycloNum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl Zero for CycloNum {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_zero()
    }
}

impl One for CycloNum {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { field: self.field, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

// The operators panic on mixed fields; use `cyclo_arith` for the checked form.
impl Add for CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: CycloNum) -> CycloNum {
        self.checked_add(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: CycloNum) -> CycloNum {
        self.checked_add(&-rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: CycloNum) -> CycloNum {
        self.checked_mul(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Div for CycloNum {
    type Output = CycloNum;
    fn div(self, rhs: CycloNum) -> CycloNum {
        cyclo_arith(&self, &rhs, ArithOp::Div).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Field for CycloNum {
    const NESTING: usize = 0;

    fn inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }

    fn from_i64(n: i64) -> Self {
        Self::rational(Rational::from_i64(n))
    }

    fn from_rational(q: &Rational) -> Self {
        Self::rational(q.clone())
    }

    fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }
}

/// Prints as a polynomial in `z`, e.g. `z^3 - 1/2*z + 2`.
impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_dense(f, &self.coeffs, "z")
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {:?}", self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q16() -> Arc<CyclotomicField> {
        CyclotomicField::new(16)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let expect = |n: u32, cs: &[i64]| assert_eq!(cyclotomic_polynomial(n), UniPoly::from_i64s(cs), "Φ_{n}");
        expect(16, &[1, 0, 0, 0, 0, 0, 0, 0, 1]);
        expect(8, &[1, 0, 0, 0, 1]);
        expect(4, &[1, 0, 1]);
        expect(1, &[-1, 1]);
        expect(6, &[1, -1, 1]);
        expect(12, &[1, 0, -1, 0, 1]);
        for n in 1..=30 {
            assert_eq!(CyclotomicField::new(n).degree() as u32, euler_phi(n));
        }
    }

    #[test]
    fn arithmetic_examples() {
        let k = q16();
        let z = |e| zeta_pow(&k, e);
        assert_eq!(z(8) * z(8), CycloNum::one());
        assert_eq!(z(1) * z(7), -CycloNum::one());
        let one = CycloNum::one();
        assert_eq!((one.clone() + z(1)) * (one.clone() - z(1)), one - z(2));
    }

    #[test]
    fn zeta_pow_examples() {
        let k = q16();
        assert_eq!(zeta_pow(&k, 0), CycloNum::one());
        assert_eq!(zeta_pow(&k, 8), CycloNum::from_i64(-1));
        assert_eq!(zeta_pow(&k, 20), zeta_pow(&k, 4));
        assert_eq!(zeta_pow(&k, -1), zeta_pow(&k, 15));
    }

    #[test]
    fn recognizes_roots_of_unity() {
        let k = q16();
        assert_eq!(as_zeta_power(&k, &CycloNum::from_i64(-1)), Some(8));
        assert_eq!(as_zeta_power(&k, &zeta_pow(&k, 6)), Some(6));
        // 1 + ζ: compared against all sixteen powers, none match
        let c = CycloNum::one() + zeta_pow(&k, 1);
        assert_eq!(as_zeta_power(&k, &c), None);
    }

    #[test]
    fn mixed_fields_and_zero_division() {
        let a = CycloNum::zeta(&CyclotomicField::new(16));
        let b = CycloNum::zeta(&CyclotomicField::new(5));
        assert_eq!(cyclo_arith(&a, &b, ArithOp::Mul), Err(CycloError::MixedFields { left: 16, right: 5 }));
        assert_eq!(cyclo_arith(&a, &CycloNum::zero(), ArithOp::Div), Err(CycloError::DivisionByZero));
        // rationals embed in every field
        assert!(cyclo_arith(&a, &CycloNum::from_i64(3), ArithOp::Add).is_ok());
    }

    #[test]
    fn coefficient_vector_has_phi_entries() {
        let k = q16();
        let z3 = zeta_pow(&k, 3);
        assert_eq!(z3.coefficients_in(&k).len(), 8);
        assert_eq!(CycloNum::from_i64(2).coefficients_in(&k).len(), 8);
    }

    #[test]
    fn display() {
        let k = q16();
        let c = zeta_pow(&k, 3) - zeta_pow(&k, 1) * CycloNum::rational(Rational::new(1.into(), 2.into())) + CycloNum::from_i64(2);
        assert_eq!(c.to_string(), "z^3 - 1/2*z + 2");
        assert_eq!(zeta_pow(&k, 9).to_string(), "-z");
    }

    #[test]
    fn orders_of_powers() {
        for k in 0..16 {
            let g = zeta_pow(&q16(), k);
            let ord = (1..=16).find(|&m| g.pow(m).is_one()).unwrap();
            assert_eq!(ord, zeta_power_order(16, k));
        }
    }
}
