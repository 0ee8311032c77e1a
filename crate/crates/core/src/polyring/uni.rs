use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{needs_parens, var_name, Field};

/// Dense univariate polynomial, constant term first.
///
/// Trailing zeros are never stored, so the zero polynomial is the empty
/// vector and `degree` is `len - 1`. The variable is implied by the
/// coefficient type: `t` over constants, `x` over functions of `t`, `y`
/// over functions of `x` and `t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// `c * var^d`
    pub fn monomial(c: F, d: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![F::zero(); d + 1];
        coeffs[d] = c;
        UniPoly { coeffs }
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Euclidean division. Panics when `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone();
            if c.is_zero() {
                continue;
            }
            let q = c * lead_inv.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] = rem[i + j].clone() - q.clone() * dc.clone();
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_i64(i as i64))
                .collect(),
        )
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, at: &F) -> F {
        self.eval_with(at, F::clone)
    }

    /// Horner evaluation in another field `T`, embedding each coefficient
    /// with `embed`.
    pub fn eval_with<T: Field>(&self, at: &T, embed: impl Fn(&F) -> T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at.clone();
            if !c.is_zero() {
                acc = acc + embed(c);
            }
        }
        acc
    }

    /// Coefficient-wise map into another field.
    pub fn map<T: Field>(&self, f: impl Fn(&F) -> T) -> UniPoly<T> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// The polynomial `s^deg_bound * p(1/s)`: coefficient list reversed and
    /// padded to `deg_bound`. Panics if `deg_bound < degree`.
    pub fn reversed(&self, deg_bound: usize) -> Self {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        assert!(d <= deg_bound, "degree {d} exceeds bound {deg_bound}");
        let mut out = vec![F::zero(); deg_bound + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[deg_bound - i] = c.clone();
        }
        Self::new(out)
    }

    /// Multiplicity of the root `0`, or `None` for the zero polynomial.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Extended Euclid: returns `(g, s, u)` with `s*self + u*other = g`,
    /// `g` monic (or zero when both inputs are zero).
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut u0, mut u1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let u2 = &u0 - &(&q * &u1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            u0 = std::mem::replace(&mut u1, u2);
        }
        match r0.leading().cloned() {
            None => (r0, s0, u0),
            Some(l) => {
                let li = l.inv().expect("nonzero leading coefficient");
                (r0.scale(&li), s0.scale(&li), u0.scale(&li))
            }
        }
    }

    /// Squarefree decomposition by Yun's algorithm (characteristic zero).
    ///
    /// Returns monic squarefree pairwise coprime `(a_i, i)` with
    /// `self = lc * prod a_i^i`; factors equal to `1` are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = uni_gcd(&f, &df);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let mut c = df.exact_div(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let a = uni_gcd(&b, &d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a).expect("gcd divides");
            if b.is_constant() {
                break;
            }
            c = d.exact_div(&a).expect("gcd divides");
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }
}

/// Monic greatest common divisor over the coefficient field.
/// `uni_gcd(0, 0) = 0`.
pub fn uni_gcd<F: Field>(p: &UniPoly<F>, q: &UniPoly<F>) -> UniPoly<F> {
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = std::mem::replace(&mut b, r.monic());
    }
    a.monic()
}

impl<F: Field> Zero for UniPoly<F> {
    fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<F: Field> One for UniPoly<F> {
    fn one() -> Self {
        UniPoly { coeffs: vec![F::one()] }
    }
}

fn add_coeffs<F: Field>(a: &[F], b: &[F], negate_b: bool) -> Vec<F> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i);
            let y = b.get(i);
            match (x, y) {
                (Some(x), Some(y)) if negate_b => x.clone() - y.clone(),
                (Some(x), Some(y)) => x.clone() + y.clone(),
                (Some(x), None) => x.clone(),
                (None, Some(y)) if negate_b => -y.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            }
        })
        .collect()
}

impl<F: Field> Add<&UniPoly<F>> for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn add(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        UniPoly::new(add_coeffs(&self.coeffs, &rhs.coeffs, false))
    }
}

impl<F: Field> Sub<&UniPoly<F>> for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn sub(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        UniPoly::new(add_coeffs(&self.coeffs, &rhs.coeffs, true))
    }
}

impl<F: Field> Mul<&UniPoly<F>> for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn mul(self, rhs: &UniPoly<F>) -> UniPoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        UniPoly::new(out)
    }
}

impl<F: Field> Neg for &UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for UniPoly<F> {
            type Output = UniPoly<F>;
            fn $m(self, rhs: UniPoly<F>) -> UniPoly<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Field> Neg for UniPoly<F> {
    type Output = UniPoly<F>;
    fn neg(self) -> UniPoly<F> {
        -&self
    }
}

/// Prints in the expression grammar, highest degree first, e.g.
/// `t^7 - t^3`.
impl<F: Field> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_dense(f, &self.coeffs, var_name(F::NESTING))
    }
}

/// Writes a dense coefficient list (constant first) as a sum in `var`.
pub(crate) fn write_dense<F: Field>(f: &mut fmt::Formatter<'_>, coeffs: &[F], var: &str) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        write_term(f, c, &mono, first)?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

/// Writes `coeff * mono` as one summand of a sum, handling signs and
/// parentheses. `mono` is empty for the constant term.
pub(crate) fn write_term<F: Field>(
    f: &mut fmt::Formatter<'_>,
    c: &F,
    mono: &str,
    first: bool,
) -> fmt::Result {
    let (neg, body) = match c.as_rational() {
        Some(q) => {
            let neg = crate::scalar::is_negative_rational(&q);
            let a = if neg { -q } else { q };
            (neg, crate::scalar::fmt_rational(&a))
        }
        None => {
            let s = c.to_string();
            if needs_parens(&s) {
                (false, format!("({s})"))
            } else if let Some(rest) = s.strip_prefix('-') {
                (true, rest.to_string())
            } else {
                (false, s)
            }
        }
    };
    let sep = match (first, neg) {
        (true, true) => "-",
        (true, false) => "",
        (false, true) => " - ",
        (false, false) => " + ",
    };
    let text = if mono.is_empty() {
        body
    } else if body == "1" {
        mono.to_string()
    } else {
        format!("{body}*{mono}")
    };
    write!(f, "{sep}{text}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type Q = UniPoly<Rational>;

    #[test]
    fn gcd_examples() {
        let a = Q::from_i64s(&[-1, 0, 1]);
        let b = Q::from_i64s(&[-1, 0, 0, 1]);
        assert_eq!(uni_gcd(&a, &b), Q::from_i64s(&[-1, 1]));
        let c = Q::from_i64s(&[-1, 0, 0, 0, 1]);
        assert_eq!(uni_gcd(&c, &Q::var()), Q::one());
        let p = Q::from_i64s(&[4, 0, 2]);
        assert_eq!(uni_gcd(&p, &Q::zero()), p.monic());
        assert_eq!(uni_gcd(&Q::zero(), &Q::zero()), Q::zero());
    }

    #[test]
    fn division_identity() {
        let a = Q::from_i64s(&[3, 1, 4, 1, 5]);
        let b = Q::from_i64s(&[2, 7, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = Q::from_i64s(&[1, 0, 0, 0, 0, 0, 0, 0, 1]);
        let b = Q::from_i64s(&[1, 1]);
        let (g, s, u) = a.ext_gcd(&b);
        assert_eq!(g, Q::one());
        assert_eq!(&(&s * &a) + &(&u * &b), g);
    }

    #[test]
    fn yun_decomposition() {
        // t^2 (t-1)^3 (t+2)
        let t = Q::var();
        let tm1 = Q::from_i64s(&[-1, 1]);
        let tp2 = Q::from_i64s(&[2, 1]);
        let p = &(&t.pow(2) * &tm1.pow(3)) * &tp2;
        let d = p.scale(&Rational::from_i64(5)).squarefree_decomposition();
        assert_eq!(d, vec![(tp2, 1), (t, 2), (tm1, 3)]);
    }

    #[test]
    fn display_grammar() {
        assert_eq!(Q::from_i64s(&[0, 0, 0, -1, 0, 0, 0, 1]).to_string(), "t^7 - t^3");
        assert_eq!(Q::from_i64s(&[-432]).to_string(), "-432");
        assert_eq!(Q::zero().to_string(), "0");
    }

    #[test]
    fn reversed_twist() {
        // s^8 A(1/s) for A = t^7 - t^3 is s - s^5
        let a = Q::from_i64s(&[0, 0, 0, -1, 0, 0, 0, 1]);
        assert_eq!(a.reversed(8), Q::from_i64s(&[0, 1, 0, 0, 0, -1]));
        assert_eq!(a.reversed(8).low_order(), Some(1));
    }
}
