use std::fmt;

use num_traits::Zero;

use super::uni::{uni_gcd, UniPoly};
use super::PolyError;
use crate::scalar::Field;

/// Order of vanishing; `Infinite` is the valuation of the zero polynomial
/// and satisfies every lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }

    pub fn is(self, k: u32) -> bool {
        self == Valuation::Finite(k)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// Subtracts `k`, leaving `Infinite` unchanged. Panics on underflow.
    pub fn minus(self, k: u32) -> Self {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v.checked_sub(k).expect("valuation underflow")),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "INF"),
        }
    }
}

/// A closed point cluster of the projective line: the roots of a monic
/// squarefree polynomial, or the point at infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place<F> {
    Finite(UniPoly<F>),
    Infinity,
}

impl<F: Field> Place<F> {
    /// Number of geometric points in the cluster.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }
}

impl<F: Field> fmt::Display for Place<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "INFINITY"),
        }
    }
}

impl<F: Field> fmt::Debug for Place<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}

/// Largest `e` with `place^e | p`; `Infinite` for `p = 0`.
///
/// `place` must be non-constant.
pub fn vanishing_order<F: Field>(p: &UniPoly<F>, place: &UniPoly<F>) -> Valuation {
    assert!(!place.is_constant(), "a place must be a non-constant polynomial");
    if p.is_zero() {
        return Valuation::Infinite;
    }
    let mut e = 0;
    let mut cur = p.clone();
    while let Some(q) = cur.exact_div(place) {
        cur = q;
        e += 1;
    }
    Valuation::Finite(e)
}

/// Pairwise coprime, monic, squarefree `f_i` together with, for each `f_i`,
/// the exponent of `f_i` in every input: `P_j = unit_j · ∏ f_i^{e_ij}`.
///
/// The basis is sorted by printed form.
pub fn gcd_free_basis<F: Field>(polys: &[UniPoly<F>]) -> Result<Vec<(UniPoly<F>, Vec<u32>)>, PolyError> {
    if polys.iter().any(Zero::is_zero) {
        return Err(PolyError::ZeroInput);
    }
    let mut basis: Vec<UniPoly<F>> = Vec::new();
    for p in polys {
        for (f, _) in p.squarefree_decomposition() {
            let mut pending = vec![f];
            while let Some(q) = pending.pop() {
                if q.is_constant() {
                    continue;
                }
                let hit = basis.iter().enumerate().find_map(|(i, b)| {
                    let g = uni_gcd(&q, b);
                    (!g.is_constant()).then_some((i, g))
                });
                match hit {
                    None => basis.push(q),
                    Some((i, g)) => {
                        let b = basis.swap_remove(i);
                        pending.push(b.exact_div(&g).unwrap());
                        pending.push(q.exact_div(&g).unwrap());
                        pending.push(g);
                    }
                }
            }
        }
    }
    let mut out: Vec<(UniPoly<F>, Vec<u32>)> = basis
        .into_iter()
        .map(|f| {
            let exps = polys
                .iter()
                .map(|p| vanishing_order(p, &f).finite().expect("input is nonzero"))
                .collect();
            (f, exps)
        })
        .collect();
    out.sort_by_cached_key(|(f, _)| (f.degree(), f.to_string()));
    Ok(out)
}
