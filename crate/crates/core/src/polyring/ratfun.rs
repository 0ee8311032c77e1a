use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::uni::{uni_gcd, UniPoly};
use crate::scalar::{needs_parens, Field, Rational};

/// Element of the fraction field `F(v)` of `F[v]`.
///
/// Always reduced: numerator and denominator coprime, denominator monic.
/// The representation is therefore canonical and equality is structural.
/// Nesting `RatFun<RatFun<F>>` gives `F(t)(x)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun<F> {
    num: UniPoly<F>,
    den: UniPoly<F>,
}

impl<F: Field> RatFun<F> {
    /// Builds `num / den`. Returns `None` if `den` is zero.
    pub fn new(num: UniPoly<F>, den: UniPoly<F>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(num, den))
    }

    fn reduce(num: UniPoly<F>, den: UniPoly<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = uni_gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
            }
        };
        let l = den.leading().expect("nonzero denominator").clone();
        if l.is_one() {
            RatFun { num, den }
        } else {
            let li = l.inv().unwrap();
            RatFun { num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn from_poly(p: UniPoly<F>) -> Self {
        RatFun { num: p, den: UniPoly::one() }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    /// The variable of this layer.
    pub fn var() -> Self {
        Self::from_poly(UniPoly::var())
    }

    pub fn num(&self) -> &UniPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<F> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value as an element of `F`, if this is a constant.
    pub fn as_constant(&self) -> Option<F> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// Derivative with respect to this layer's variable.
    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(n, &self.den * &self.den)
    }

    /// Substitutes `v := w` and evaluates in the field `T`, embedding the
    /// coefficients with `embed`. `None` if the denominator vanishes.
    pub fn eval_with<T: Field>(&self, w: &T, embed: impl Fn(&F) -> T) -> Option<T> {
        let d = self.den.eval_with(w, &embed);
        let di = d.inv()?;
        Some(self.num.eval_with(w, &embed) * di)
    }

    /// Composition `self(w(v))` for `w` in the same field.
    pub fn compose(&self, w: &Self) -> Option<Self> {
        self.eval_with(w, |c| Self::constant(c.clone()))
    }

    pub fn map<T: Field>(&self, f: impl Fn(&F) -> T) -> RatFun<T> {
        RatFun::reduce(self.num.map(&f), self.den.map(&f))
    }
}

impl<F: Field> Zero for RatFun<F> {
    fn zero() -> Self {
        RatFun { num: UniPoly::zero(), den: UniPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Field> One for RatFun<F> {
    fn one() -> Self {
        RatFun { num: UniPoly::one(), den: UniPoly::one() }
    }
}

impl<F: Field> Add<&RatFun<F>> for &RatFun<F> {
    type Output = RatFun<F>;
    fn add(self, rhs: &RatFun<F>) -> RatFun<F> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RatFun::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<F: Field> Sub<&RatFun<F>> for &RatFun<F> {
    type Output = RatFun<F>;
    fn sub(self, rhs: &RatFun<F>) -> RatFun<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Mul<&RatFun<F>> for &RatFun<F> {
    type Output = RatFun<F>;
    fn mul(self, rhs: &RatFun<F>) -> RatFun<F> {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFun { num: &self.num * &rhs.num, den: UniPoly::one() };
        }
        // cross-cancel before multiplying
        let g1 = uni_gcd(&self.num, &rhs.den);
        let g2 = uni_gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let l = den.leading().unwrap().clone();
        if l.is_one() {
            RatFun { num, den }
        } else {
            let li = l.inv().unwrap();
            RatFun { num: num.scale(&li), den: den.scale(&li) }
        }
    }
}

impl<F: Field> Div<&RatFun<F>> for &RatFun<F> {
    type Output = RatFun<F>;
    fn div(self, rhs: &RatFun<F>) -> RatFun<F> {
        self * &rhs.inv().expect("division by zero rational function")
    }
}

impl<F: Field> Neg for &RatFun<F> {
    type Output = RatFun<F>;
    fn neg(self) -> RatFun<F> {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl<F: Field> Neg for RatFun<F> {
    type Output = RatFun<F>;
    fn neg(self) -> RatFun<F> {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for RatFun<F> {
            type Output = RatFun<F>;
            fn $m(self, rhs: RatFun<F>) -> RatFun<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<F: Field> Field for RatFun<F> {
    const NESTING: usize = F::NESTING + 1;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let l = self.num.leading().unwrap().inv().unwrap();
        Some(RatFun { num: self.den.scale(&l), den: self.num.scale(&l) })
    }

    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }

    fn from_rational(q: &Rational) -> Self {
        Self::constant(F::from_rational(q))
    }

    fn as_rational(&self) -> Option<Rational> {
        self.as_constant()?.as_rational()
    }
}

impl<F: Field> fmt::Display for RatFun<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let n = self.num.to_string();
        let d = self.den.to_string();
        let n = if needs_parens(&n) || n.contains('/') { format!("({n})") } else { n };
        let d = if needs_parens(&d) || d.contains(['*', '/', '^']) { format!("({d})") } else { d };
        write!(f, "{n}/{d}")
    }
}

impl<F: Field> fmt::Debug for RatFun<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type QT = RatFun<Rational>;
    type QTX = RatFun<QT>;

    fn p(cs: &[i64]) -> UniPoly<Rational> {
        UniPoly::from_i64s(cs)
    }

    #[test]
    fn reduces_to_lowest_terms() {
        // (t^2 - 1)/(2t - 2) = (t + 1)/2
        let r = QT::new(p(&[-1, 0, 1]), p(&[-2, 2])).unwrap();
        assert!(r.is_polynomial());
        let half = Rational::from_i64(1) / Rational::from_i64(2);
        assert_eq!(r.num(), &p(&[1, 1]).scale(&half));
        let s = QT::new(p(&[0, 2]), p(&[0, 0, 4])).unwrap();
        assert_eq!(s.den(), &p(&[0, 1]));
    }

    #[test]
    fn field_axioms_on_samples() {
        let a = QT::new(p(&[1, 2]), p(&[0, 1, 1])).unwrap();
        let b = QT::new(p(&[3, 0, -1]), p(&[1, 1])).unwrap();
        let c = QT::new(p(&[0, 5]), p(&[7, 0, 1])).unwrap();
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a * &a.inv().unwrap(), QT::one());
        assert_eq!(&(&a - &a), &QT::zero());
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dt 1/t = -1/t^2
        let r = QT::new(p(&[1]), p(&[0, 1])).unwrap();
        assert_eq!(r.derivative(), QT::new(p(&[-1]), p(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn nested_tower_and_display() {
        let t = QTX::constant(QT::var());
        let x = QTX::var();
        let e = &(&x * &x) / &t;
        assert_eq!(e.to_string(), "1/t*x^2");
        let g = &QTX::one() / &(&x + &t);
        assert_eq!(g.to_string(), "1/(x + t)");
    }

    #[test]
    fn composition() {
        // (t^2 + 1) o (1/t) = (1 + t^2)/t^2
        let f = QT::from_poly(p(&[1, 0, 1]));
        let w = QT::new(p(&[1]), p(&[0, 1])).unwrap();
        assert_eq!(f.compose(&w).unwrap(), QT::new(p(&[1, 0, 1]), p(&[0, 0, 1])).unwrap());
    }
}
