use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ratfun::RatFun;
use super::uni::{uni_gcd, write_term, UniPoly};
use crate::scalar::Field;

/// The three ambient variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    T,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::T => "t",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "t" => Some(Var::T),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Exponents `(e_x, e_y, e_t)`.
pub type Exps = [u32; 3];

/// Sparse polynomial in `x, y, t`; zero coefficients are never stored and
/// terms iterate in lexicographic exponent order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<F> {
    terms: BTreeMap<Exps, F>,
}

impl<F: Field> MultiPoly<F> {
    pub fn constant(c: F) -> Self {
        Self::term(c, [0, 0, 0])
    }

    pub fn term(c: F, e: Exps) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MultiPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.index()] = 1;
        Self::term(F::one(), e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exps, &F)> {
        self.terms.iter().next_back()
    }

    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => self.terms.get(&[0, 0, 0]).cloned(),
            _ => None,
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.index()]).max().unwrap_or(0)
    }

    pub fn involves(&self, v: Var) -> bool {
        self.degree_in(v) > 0
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(e, a)| (*e, a.clone() * c.clone())).collect() }
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

    pub fn from_uni_t(p: &UniPoly<F>) -> Self {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| ([0, 0, i as u32], c.clone()))
            .collect();
        MultiPoly { terms }
    }

    /// The univariate polynomial in `t`, if `x` and `y` do not occur.
    pub fn to_uni_t(&self) -> Option<UniPoly<F>> {
        if self.involves(Var::X) || self.involves(Var::Y) {
            return None;
        }
        let mut coeffs = vec![F::zero(); self.degree_in(Var::T) as usize + 1];
        for (e, c) in &self.terms {
            coeffs[e[2] as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    /// Evaluates at `(x, y, t)` in a field `T`, embedding coefficients with
    /// `embed`.
    pub fn eval_with<T: Field>(&self, at: [&T; 3], embed: impl Fn(&F) -> T) -> T {
        let mut powers: [Vec<T>; 3] = [vec![T::one()], vec![T::one()], vec![T::one()]];
        for (k, p) in powers.iter_mut().enumerate() {
            let d = self.terms.keys().map(|e| e[k]).max().unwrap_or(0) as usize;
            for i in 1..=d {
                let next = p[i - 1].clone() * at[k].clone();
                p.push(next);
            }
        }
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let m = powers[0][e[0] as usize].clone() * powers[1][e[1] as usize].clone() * powers[2][e[2] as usize].clone();
            acc = acc + embed(c) * m;
        }
        acc
    }

    /// Polynomial substitution `x := sub[0], y := sub[1], t := sub[2]`.
    pub fn substitute(&self, sub: [&MultiPoly<F>; 3]) -> MultiPoly<F> {
        let mut powers: [Vec<MultiPoly<F>>; 3] = [vec![Self::one()], vec![Self::one()], vec![Self::one()]];
        for (k, p) in powers.iter_mut().enumerate() {
            let d = self.terms.keys().map(|e| e[k]).max().unwrap_or(0) as usize;
            for i in 1..=d {
                let next = &p[i - 1] * sub[k];
                p.push(next);
            }
        }
        let mut acc = Self::zero();
        for (e, c) in &self.terms {
            let m = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize]) * &powers[2][e[2] as usize];
            acc = &acc + &m.scale(c);
        }
        acc
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let c = if negate { -c.clone() } else { c.clone() };
            let v = match terms.remove(e) {
                Some(a) => a + c,
                None => c,
            };
            if !v.is_zero() {
                terms.insert(*e, v);
            }
        }
        MultiPoly { terms }
    }
}

impl<F: Field> Zero for MultiPoly<F> {
    fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Field> One for MultiPoly<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}

impl<F: Field> Add<&MultiPoly<F>> for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, rhs: &MultiPoly<F>) -> MultiPoly<F> {
        self.combine(rhs, false)
    }
}

impl<F: Field> Sub<&MultiPoly<F>> for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn sub(self, rhs: &MultiPoly<F>) -> MultiPoly<F> {
        self.combine(rhs, true)
    }
}

impl<F: Field> Mul<&MultiPoly<F>> for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, rhs: &MultiPoly<F>) -> MultiPoly<F> {
        let mut terms: BTreeMap<Exps, F> = BTreeMap::new();
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let p = a.clone() * b.clone();
                let v = match terms.remove(&e) {
                    Some(s) => s + p,
                    None => p,
                };
                if !v.is_zero() {
                    terms.insert(e, v);
                }
            }
        }
        MultiPoly { terms }
    }
}

impl<F: Field> Neg for &MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn neg(self) -> MultiPoly<F> {
        MultiPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<F: Field> Add for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<F: Field> Mul for MultiPoly<F> {
    type Output = MultiPoly<F>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

fn monomial_text(e: &Exps) -> String {
    let mut parts = Vec::new();
    for (k, v) in [Var::X, Var::Y, Var::T].into_iter().enumerate() {
        match e[k] {
            0 => {}
            1 => parts.push(v.name().to_string()),
            d => parts.push(format!("{}^{d}", v.name())),
        }
    }
    parts.join("*")
}

/// Prints in the expression grammar, largest exponent triple first.
impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            write_term(f, c, &monomial_text(e), i == 0)?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

/// `F(t)`, `F(t)(x)` and `F(t)(x)(y)`: the towers used for reduction.
pub type TowerT<F> = RatFun<F>;
pub type TowerTX<F> = RatFun<RatFun<F>>;
pub type TowerTXY<F> = RatFun<RatFun<RatFun<F>>>;

/// Quotient of two polynomials in `x, y, t`.
///
/// Stored reduced by gcds in `y`, then `x`, then `t` (computed in the tower
/// `F(t)(x)(y)`), and scaled so the leading term of the denominator is `1`.
/// Equality is by cross-multiplication.
#[derive(Clone)]
pub struct RationalFunction<F> {
    num: MultiPoly<F>,
    den: MultiPoly<F>,
}

impl<F: Field> RationalFunction<F> {
    /// `None` when `den` is the zero polynomial.
    pub fn new(num: MultiPoly<F>, den: MultiPoly<F>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::from_tower(&(&to_tower(&num) / &to_tower(&den))))
    }

    pub fn from_poly(p: MultiPoly<F>) -> Self {
        RationalFunction { num: p, den: MultiPoly::one() }
    }

    pub fn num(&self) -> &MultiPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly<F> {
        &self.den
    }

    /// The polynomial, if the denominator is constant.
    pub fn as_poly(&self) -> Option<MultiPoly<F>> {
        let c = self.den.as_constant()?;
        Some(self.num.scale(&c.inv()?))
    }

    pub fn to_tower(&self) -> TowerTXY<F> {
        &to_tower(&self.num) / &to_tower(&self.den)
    }

    /// Clears denominators of a tower element level by level.
    pub fn from_tower(r: &TowerTXY<F>) -> Self {
        let mut coeffs: Vec<TowerTX<F>> = Vec::new();
        coeffs.extend(r.num().coeffs().iter().cloned());
        let split = coeffs.len();
        coeffs.extend(r.den().coeffs().iter().cloned());

        // clear x-level denominators
        let mut l1 = UniPoly::<TowerT<F>>::one();
        for c in &coeffs {
            l1 = lcm(&l1, c.den());
        }
        let l1 = TowerTX::from_poly(l1);
        let polys: Vec<UniPoly<TowerT<F>>> = coeffs
            .iter()
            .map(|c| {
                let p = c * &l1;
                debug_assert!(p.is_polynomial());
                p.num().clone()
            })
            .collect();

        // clear t-level denominators
        let mut l2 = UniPoly::<F>::one();
        for p in &polys {
            for c in p.coeffs() {
                l2 = lcm(&l2, c.den());
            }
        }
        let l2 = TowerT::from_poly(l2);
        let mut num = MultiPoly::zero();
        let mut den = MultiPoly::zero();
        for (j, p) in polys.iter().enumerate() {
            let (target, ey) = if j < split { (&mut num, j) } else { (&mut den, j - split) };
            for (ex, c) in p.coeffs().iter().enumerate() {
                let c = c * &l2;
                for (et, a) in c.num().coeffs().iter().enumerate() {
                    if !a.is_zero() {
                        *target = &*target + &MultiPoly::term(a.clone(), [ex as u32, ey as u32, et as u32]);
                    }
                }
            }
        }
        let lead = den.leading_term().expect("nonzero denominator").1.inv().unwrap();
        RationalFunction { num: num.scale(&lead), den: den.scale(&lead) }
    }
}

fn lcm<F: Field>(a: &UniPoly<F>, b: &UniPoly<F>) -> UniPoly<F> {
    let g = uni_gcd(a, b);
    (a * &b.exact_div(&g).unwrap()).monic()
}

/// Embeds a polynomial into `F(t)(x)(y)`.
pub fn to_tower<F: Field>(p: &MultiPoly<F>) -> TowerTXY<F> {
    let x = TowerTXY::<F>::constant(TowerTX::var());
    let y = TowerTXY::<F>::var();
    let t = TowerTXY::<F>::constant(TowerTX::constant(TowerT::var()));
    p.eval_with([&x, &y, &t], |c| TowerTXY::constant(TowerTX::constant(TowerT::constant(c.clone()))))
}

impl<F: Field> PartialEq for RationalFunction<F> {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl<F: Field> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_poly() {
            return write!(f, "{p}");
        }
        let wrap = |s: String, strict: bool| {
            if s.contains([' ', '+']) || (strict && (s.contains(['*', '/']) || s.starts_with('-'))) {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(self.num.to_string(), false), wrap(self.den.to_string(), true))
    }
}

impl<F: Field> fmt::Debug for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}
