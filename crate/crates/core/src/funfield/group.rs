use std::fmt;

use crate::scalar::Field;
use crate::TFun;

use super::{FunFieldError, FunctionField};

/// `y² = x³ + a x + b` over a field `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticCurve<F> {
    pub a: F,
    pub b: F,
}

/// A point of an [`EllipticCurve`]; `Zero` is the point at infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum Point<F> {
    Zero,
    Affine(F, F),
}

/// A section of the fibration: a point of the generic fiber over `K(t)`.
pub type Section = Point<TFun>;

impl<F: Field> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Zero => write!(f, "O"),
            Point::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

impl<F: Field> EllipticCurve<F> {
    pub fn new(a: F, b: F) -> Self {
        EllipticCurve { a, b }
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Zero => true,
            Point::Affine(x, y) => {
                y.clone() * y.clone() == x.clone() * x.clone() * x.clone() + self.a.clone() * x.clone() + self.b.clone()
            }
        }
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Zero => Point::Zero,
            Point::Affine(x, y) => Point::Affine(x.clone(), -y.clone()),
        }
    }

    /// Chord-tangent addition.
    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Zero, _) => return q.clone(),
            (_, Point::Zero) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 != x2 {
            (y2.clone() - y1.clone()) / (x2.clone() - x1.clone())
        } else if y1 == y2 && !y1.is_zero() {
            let three = F::from_i64(3);
            (three * x1.clone() * x1.clone() + self.a.clone()) / (F::from_i64(2) * y1.clone())
        } else {
            return Point::Zero;
        };
        let x3 = lambda.clone() * lambda.clone() - x1.clone() - x2.clone();
        let y3 = lambda * (x1.clone() - x3.clone()) - y1.clone();
        Point::Affine(x3, y3)
    }

    /// `n·p` for `n ≥ 0` by double-and-add.
    pub fn mul(&self, p: &Point<F>, mut n: u64) -> Point<F> {
        let mut acc = Point::Zero;
        let mut base = p.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }
}

impl FunctionField {
    /// The generic fiber as a curve over `K(t)`.
    pub fn generic_fiber(&self) -> EllipticCurve<TFun> {
        EllipticCurve::new(self.a().clone(), self.b().clone())
    }
}

/// `P + Q` on the generic fiber.
pub fn add_points(ff: &FunctionField, p: &Section, q: &Section) -> Result<Section, FunFieldError> {
    let e = ff.generic_fiber();
    for s in [p, q] {
        if !e.contains(s) {
            return Err(FunFieldError::NotOnCurve { point: s.to_string() });
        }
    }
    Ok(e.add(p, q))
}
