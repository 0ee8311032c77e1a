//! Even integral lattices given by Gram matrices: the named root lattices
//! and hyperbolic planes, lattices of curve configurations, signatures and
//! discriminant forms.
//!
//! Root lattices use the negative definite convention, so a `(−2)`-curve
//! and a simple root have the same square.

#![allow(clippy::needless_range_loop)]

mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::rigidity::CurveConfig;
use crate::scalar::Rational;

pub use snf::{column_reduce, smith_normal_form, IntMatrix, Smith};

/// Largest discriminant group handled by [`genus_equal`].
pub const MAX_GROUP_ORDER: u64 = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("unknown lattice `{name}`")]
    UnknownLattice { name: String },
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix has an odd diagonal entry")]
    NotEven,
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("discriminant group of order {order} exceeds {max}")]
    GroupTooLarge { order: BigInt, max: u64 },
}

/// A symmetric even integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    rows: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub nullity: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.positive, self.negative)
    }
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..n {
            if rows[i][i] % 2 != 0 {
                return Err(LatticeError::NotEven);
            }
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        Ok(GramMatrix { rows })
    }

    /// Gram matrix of a Dynkin-type graph: `−2` on the diagonal, `1` per
    /// edge.
    fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut rows = vec![vec![0; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = -2;
        }
        for &(a, b) in edges {
            rows[a][b] = 1;
            rows[b][a] = 1;
        }
        GramMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    fn big(&self) -> IntMatrix {
        self.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        let s = self.signature();
        s.positive + s.negative
    }

    /// Sylvester sign count from an exact congruence diagonalization.
    pub fn signature(&self) -> Signature {
        let n = self.size();
        let mut m: Vec<Vec<Rational>> =
            self.rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
        let (mut pos, mut neg) = (0, 0);
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            let pivot = active.iter().copied().find(|&i| !m[i][i].is_zero());
            let p = match pivot {
                Some(p) => p,
                None => {
                    // zero diagonal: a nonzero off-diagonal entry a_ij turns
                    // e_i + e_j into a pivot of square 2 a_ij
                    let pair = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).find(|&(i, j)| !m[i][j].is_zero());
                    let Some((i, j)) = pair else { break };
                    for k in 0..n {
                        let v = m[j][k].clone();
                        m[i][k] += v;
                    }
                    for k in 0..n {
                        let v = m[k][j].clone();
                        m[k][i] += v;
                    }
                    i
                }
            };
            let d = m[p][p].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&i| i != p);
            for &i in &active {
                if m[i][p].is_zero() {
                    continue;
                }
                let f = &m[i][p] / &d;
                for k in 0..n {
                    let v = &f * &m[p][k];
                    m[i][k] -= v;
                }
                for k in 0..n {
                    let v = &f * &m[k][p];
                    m[k][i] -= v;
                }
            }
        }
        Signature { positive: pos, negative: neg, nullity: n - pos - neg }
    }

    pub fn determinant(&self) -> BigInt {
        let s = smith_normal_form(&self.big());
        if s.d.len() < self.size() || s.d.iter().any(Zero::is_zero) {
            return BigInt::zero();
        }
        // P·G·R = D with det P, det R = ±1, and the sign comes from the
        // signature
        let prod: BigInt = s.d.iter().product();
        if self.signature().negative % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.signature().nullity == 0
    }

    /// Gram matrix of `L / ker`, in a basis completing a basis of the
    /// radical to one of `L`.
    pub fn nondegenerate_quotient(&self) -> GramMatrix {
        let (v, rank) = column_reduce(&self.big());
        let n = self.size();
        let g = self.big();
        let mut rows = vec![vec![0i64; rank]; rank];
        for a in 0..rank {
            for b in 0..rank {
                let mut s = BigInt::zero();
                for i in 0..n {
                    for j in 0..n {
                        s += &v[i][a] * &g[i][j] * &v[j][b];
                    }
                }
                rows[a][b] = s.to_i64().expect("entries fit in i64");
            }
        }
        GramMatrix { rows }
    }

    /// Discriminant group `L*/L` of the nondegenerate quotient.
    pub fn discriminant_data(&self) -> DiscriminantGroup {
        let q = self.nondegenerate_quotient();
        let g = q.big();
        let s = smith_normal_form(&g);
        let k = q.size();
        let mut factors = Vec::new();
        let mut generators = Vec::new();
        for (i, d) in s.d.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            factors.push(d.clone());
            generators.push((0..k).map(|row| Rational::new(s.r[row][i].clone(), d.clone())).collect::<Vec<_>>());
        }
        let form = |x: &[Rational], y: &[Rational]| -> Rational {
            let mut acc = Rational::zero();
            for i in 0..k {
                for j in 0..k {
                    acc += &x[i] * &g[i][j] * &y[j];
                }
            }
            acc
        };
        let q_values = generators.iter().map(|x| mod_rational(&form(x, x), 2)).collect();
        let b_values = generators
            .iter()
            .map(|x| generators.iter().map(|y| mod_rational(&form(x, y), 1)).collect())
            .collect();
        DiscriminantGroup { invariant_factors: factors, generators, q_values, b_values }
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.iter().flatten().map(|x| x.to_string().len()).max().unwrap_or(1);
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `x mod m` in `[0, m)`.
pub fn mod_rational(x: &Rational, m: i64) -> Rational {
    let m = Rational::from_integer(m.into());
    let k = (x / &m).floor();
    x - k * m
}

/// The finite quadratic form on `L*/L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Nontrivial invariant factors `d_1 | d_2 | …`.
    pub invariant_factors: Vec<BigInt>,
    /// `g_i ∈ L*` of order `d_i`, in coordinates of the basis of `L`.
    pub generators: Vec<Vec<Rational>>,
    /// `q(g_i) mod 2`.
    pub q_values: Vec<Rational>,
    /// `b(g_i, g_j) mod 1`.
    pub b_values: Vec<Vec<Rational>>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// `q(Σ xᵢ gᵢ) mod 2`.
    pub fn q_of(&self, x: &[u64]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..x.len() {
            let xi = Rational::from_integer(x[i].into());
            acc += &xi * &xi * &self.q_values[i];
            for j in i + 1..x.len() {
                acc += Rational::from_integer(2.into()) * &xi * Rational::from_integer(x[j].into()) * &self.b_values[i][j];
            }
        }
        mod_rational(&acc, 2)
    }

    /// `b(Σ xᵢ gᵢ, Σ yⱼ gⱼ) mod 1`.
    pub fn b_of(&self, x: &[u64], y: &[u64]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..x.len() {
            for j in 0..y.len() {
                acc += Rational::from_integer((x[i] * y[j]).into()) * &self.b_values[i][j];
            }
        }
        mod_rational(&acc, 1)
    }

    fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for d in &self.invariant_factors {
            let d = d.to_u64().unwrap();
            out = out.into_iter().flat_map(|v| (0..d).map(move |a| {
                let mut w = v.clone();
                w.push(a);
                w
            })).collect();
        }
        out
    }

    fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.invariant_factors)
            .map(|(&a, d)| {
                let d = d.to_u64().unwrap();
                d / a.gcd(&d)
            })
            .fold(1, |acc, o| acc.lcm(&o))
    }
}

/// `A_n`, `D_n`, `E_6`, `E_7`, `E_8`, `U` or `U(m)`; the underscore is
/// optional.
pub fn named_lattice(name: &str) -> Result<GramMatrix, LatticeError> {
    let unknown = || LatticeError::UnknownLattice { name: name.to_string() };
    let s: String = name.chars().filter(|c| !c.is_whitespace() && *c != '_').collect();
    if s == "U" {
        return Ok(GramMatrix { rows: vec![vec![0, 1], vec![1, 0]] });
    }
    if let Some(m) = s.strip_prefix("U(").and_then(|r| r.strip_suffix(')')) {
        let m: i64 = m.parse().map_err(|_| unknown())?;
        if m < 1 {
            return Err(unknown());
        }
        return Ok(GramMatrix { rows: vec![vec![0, m], vec![m, 0]] });
    }
    let (kind, n) = s.split_at(1.min(s.len()));
    let n: usize = n.parse().map_err(|_| unknown())?;
    let path = |len: usize| (1..len).map(|i| (i - 1, i)).collect::<Vec<_>>();
    match kind {
        "A" if n >= 1 => Ok(GramMatrix::from_edges(n, &path(n))),
        "D" if n >= 4 => {
            let mut e = path(n - 1);
            e.push((n - 3, n - 1));
            Ok(GramMatrix::from_edges(n, &e))
        }
        "E" if (6..=8).contains(&n) => {
            let mut e = path(n - 1);
            e.push((2, n - 1));
            Ok(GramMatrix::from_edges(n, &e))
        }
        _ => Err(unknown()),
    }
}

/// Parses `U(2) + D4 + E8` (also with `⊕`).
pub fn parse_lattice_sum(expr: &str) -> Result<GramMatrix, LatticeError> {
    let parts: Vec<GramMatrix> =
        expr.split(['+', '⊕']).map(str::trim).map(named_lattice).collect::<Result<_, _>>()?;
    Ok(direct_sum(&parts))
}

pub fn direct_sum(parts: &[GramMatrix]) -> GramMatrix {
    let n: usize = parts.iter().map(GramMatrix::size).sum();
    let mut rows = vec![vec![0; n]; n];
    let mut off = 0;
    for p in parts {
        for i in 0..p.size() {
            for j in 0..p.size() {
                rows[off + i][off + j] = p.rows[i][j];
            }
        }
        off += p.size();
    }
    GramMatrix { rows }
}

/// `−2` on the diagonal, edge multiplicities off it.
pub fn from_curve_config(config: &CurveConfig) -> GramMatrix {
    let n = config.len();
    let mut rows = vec![vec![0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = -2;
    }
    for (i, j, m) in config.edges() {
        rows[i][j] = m as i64;
        rows[j][i] = m as i64;
    }
    GramMatrix { rows }
}

/// Same signature and isomorphic discriminant forms.
pub fn genus_equal(g1: &GramMatrix, g2: &GramMatrix) -> Result<bool, LatticeError> {
    if !g1.is_nondegenerate() || !g2.is_nondegenerate() {
        return Err(LatticeError::Degenerate);
    }
    let (s1, s2) = (g1.signature(), g2.signature());
    if (s1.positive, s1.negative) != (s2.positive, s2.negative) {
        return Ok(false);
    }
    let (d1, d2) = (g1.discriminant_data(), g2.discriminant_data());
    for d in [&d1, &d2] {
        if d.order() > BigInt::from(MAX_GROUP_ORDER) {
            return Err(LatticeError::GroupTooLarge { order: d.order(), max: MAX_GROUP_ORDER });
        }
    }
    if d1.invariant_factors != d2.invariant_factors {
        return Ok(false);
    }
    Ok(forms_isomorphic(&d1, &d2))
}

/// Backtracking over images of the generators of `a` in `b`, matching
/// orders, `q` on generators and `b` on pairs; a full assignment is an
/// isometry once its image is all of `b`.
fn forms_isomorphic(a: &DiscriminantGroup, b: &DiscriminantGroup) -> bool {
    let elems = b.elements();
    let m = a.invariant_factors.len();
    let mut images: Vec<Vec<u64>> = Vec::with_capacity(m);
    search(a, b, &elems, &mut images)
}

fn search(a: &DiscriminantGroup, b: &DiscriminantGroup, elems: &[Vec<u64>], images: &mut Vec<Vec<u64>>) -> bool {
    let i = images.len();
    if i == a.invariant_factors.len() {
        return generates(b, images);
    }
    let order = a.invariant_factors[i].to_u64().unwrap();
    for h in elems {
        if b.element_order(h) != order || b.q_of(h) != a.q_values[i] {
            continue;
        }
        if (0..i).any(|j| b.b_of(&images[j], h) != a.b_values[j][i]) {
            continue;
        }
        images.push(h.clone());
        if search(a, b, elems, images) {
            return true;
        }
        images.pop();
    }
    false
}

fn generates(b: &DiscriminantGroup, images: &[Vec<u64>]) -> bool {
    let factors: Vec<u64> = b.invariant_factors.iter().map(|d| d.to_u64().unwrap()).collect();
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![vec![0u64; factors.len()]];
    seen.insert(frontier[0].clone());
    while let Some(x) = frontier.pop() {
        for h in images {
            let y: Vec<u64> = x.iter().zip(h).zip(&factors).map(|((a, b), d)| (a + b) % d).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len() as u64 == factors.iter().product::<u64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_det(g: &GramMatrix) -> BigInt {
        g.determinant().abs()
    }

    #[test]
    fn named_determinants() {
        let e8 = named_lattice("E8").unwrap();
        assert_eq!(abs_det(&e8), BigInt::one());
        assert_eq!(named_lattice("E_7").unwrap().determinant(), BigInt::from(-2));
        assert_eq!(named_lattice("E6").unwrap().determinant(), BigInt::from(3));
        assert_eq!(named_lattice("D4").unwrap().determinant(), BigInt::from(4));
        assert_eq!(named_lattice("A3").unwrap().determinant(), BigInt::from(-4));
        let u2 = named_lattice("U(2)").unwrap();
        assert_eq!(u2.rows(), &[vec![0, 2], vec![2, 0]]);
        assert_eq!(u2.determinant(), BigInt::from(-4));
        assert!(matches!(named_lattice("F4"), Err(LatticeError::UnknownLattice { .. })));
        assert!(matches!(named_lattice("D3"), Err(LatticeError::UnknownLattice { .. })));
    }

    #[test]
    fn signatures() {
        assert_eq!(named_lattice("E8").unwrap().signature(), Signature { positive: 0, negative: 8, nullity: 0 });
        assert_eq!(named_lattice("U").unwrap().signature(), Signature { positive: 1, negative: 1, nullity: 0 });
        let g = parse_lattice_sum("U(2) + D4 + E8").unwrap();
        assert_eq!(g.size(), 14);
        assert_eq!(g.signature(), Signature { positive: 1, negative: 13, nullity: 0 });
        // affine E7: one null direction
        let mut e = (1..7).map(|i| (i - 1, i)).collect::<Vec<_>>();
        e.push((3, 7));
        let ae7 = GramMatrix::from_edges(8, &e);
        assert_eq!(ae7.signature(), Signature { positive: 0, negative: 7, nullity: 1 });
        assert_eq!(ae7.nondegenerate_quotient().size(), 7);
    }

    #[test]
    fn discriminant_forms() {
        let g = parse_lattice_sum("U(2) + D4 + E8").unwrap();
        let d = g.discriminant_data();
        assert_eq!(d.invariant_factors, vec![BigInt::from(2); 4]);
        assert_eq!(d.order(), abs_det(&g));
        assert!(named_lattice("E8").unwrap().discriminant_data().invariant_factors.is_empty());
        let a1 = named_lattice("A1").unwrap().discriminant_data();
        assert_eq!(a1.q_values, vec![Rational::new(3.into(), 2.into())]);
    }

    #[test]
    fn genus_comparisons() {
        let l1 = parse_lattice_sum("U + D8 + D4").unwrap();
        let l2 = parse_lattice_sum("U(2) ⊕ E8 ⊕ D4").unwrap();
        assert_eq!(genus_equal(&l1, &l2), Ok(true));
        assert_eq!(genus_equal(&l2, &l1), Ok(true));
        let u = named_lattice("U").unwrap();
        assert_eq!(genus_equal(&u, &named_lattice("U(2)").unwrap()), Ok(false));
        let e8 = named_lattice("E8").unwrap();
        assert_eq!(genus_equal(&e8, &e8), Ok(true));
        // same group and signature, different forms
        assert_eq!(genus_equal(&parse_lattice_sum("U+A1+A1").unwrap(), &parse_lattice_sum("U(2)").unwrap()), Ok(false));
        let big = parse_lattice_sum("A1+A1+A1+A1+A1+A1+A1+A1+A1+A1+A1").unwrap();
        assert!(matches!(genus_equal(&big, &big), Err(LatticeError::GroupTooLarge { .. })));
        let ae = GramMatrix::new(vec![vec![-2, 2], vec![2, -2]]).unwrap();
        assert_eq!(genus_equal(&ae, &ae), Err(LatticeError::Degenerate));
    }

    #[test]
    fn validation() {
        assert_eq!(GramMatrix::new(vec![vec![1]]), Err(LatticeError::NotEven));
        assert_eq!(GramMatrix::new(vec![vec![0, 1], vec![2, 0]]), Err(LatticeError::NotSymmetric));
        assert_eq!(GramMatrix::new(vec![vec![0, 1]]), Err(LatticeError::NotSquare));
        let mut g = CurveConfig::new();
        g.add_vertex("C").unwrap();
        assert_eq!(from_curve_config(&g).rows(), &[vec![-2]]);
    }
}
