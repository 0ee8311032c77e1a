use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::RigidityError;

/// Incidence graph of smooth rational curves.
///
/// An edge of multiplicity 1 is a transverse intersection point, an edge of
/// multiplicity 2 a single tangency point.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CurveConfig {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeMap<usize, u8>>,
}

impl CurveConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize, RigidityError> {
        if self.index.contains_key(name) {
            return Err(RigidityError::DuplicateVertex { name: name.to_string() });
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.adj.push(BTreeMap::new());
        Ok(i)
    }

    pub fn add_edge(&mut self, a: usize, b: usize, multiplicity: u8) -> Result<(), RigidityError> {
        let bad = |msg: &str| RigidityError::InvalidEdge { a: self.names[a].clone(), b: self.names[b].clone(), msg: msg.to_string() };
        if a == b {
            return Err(bad("loops are not allowed"));
        }
        if !(1..=2).contains(&multiplicity) {
            return Err(bad("multiplicity must be 1 or 2"));
        }
        if self.adj[a].contains_key(&b) {
            return Err(bad("duplicate edge"));
        }
        self.adj[a].insert(b, multiplicity);
        self.adj[b].insert(a, multiplicity);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Index of `name`, as an error if unknown.
    pub fn vertex(&self, name: &str) -> Result<usize, RigidityError> {
        self.index_of(name).ok_or_else(|| RigidityError::UnknownVertex { name: name.to_string() })
    }

    /// Neighbors with edge multiplicities, by index.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.adj[i].iter().map(|(&j, &m)| (j, m))
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> Option<u8> {
        self.adj[i].get(&j).copied()
    }

    /// Edges `(i, j, m)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::new();
        for (i, nb) in self.adj.iter().enumerate() {
            for (&j, &m) in nb {
                if i < j {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    /// Sum of multiplicities at `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].values().map(|&m| m as usize).sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for (j, _) in self.neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.len() == self.len()
            && self.edges().into_iter().all(|(i, j, m)| self.multiplicity(p.apply(i), p.apply(j)) == Some(m))
    }

    /// Every automorphism preserving edges and multiplicities, in
    /// lexicographic order of image vectors.
    pub fn automorphisms(&self) -> Vec<Permutation> {
        let n = self.len();
        let invariant: Vec<(usize, Vec<u8>, Vec<usize>)> = (0..n)
            .map(|i| {
                let mut mults: Vec<u8> = self.adj[i].values().copied().collect();
                mults.sort_unstable();
                let mut nd: Vec<usize> = self.neighbors(i).map(|(j, _)| self.degree(j)).collect();
                nd.sort_unstable();
                (self.degree(i), mults, nd)
            })
            .collect();
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend(0, &invariant, &mut image, &mut used, &mut out);
        out
    }

    fn extend(
        &self,
        i: usize,
        inv: &[(usize, Vec<u8>, Vec<usize>)],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Permutation>,
    ) {
        if i == self.len() {
            out.push(Permutation(image.clone()));
            return;
        }
        for cand in 0..self.len() {
            if used[cand] || inv[cand] != inv[i] {
                continue;
            }
            let compatible = (0..i).all(|j| self.multiplicity(i, j) == self.multiplicity(cand, image[j]));
            if !compatible {
                continue;
            }
            image[i] = cand;
            used[cand] = true;
            self.extend(i + 1, inv, image, used, out);
            used[cand] = false;
        }
        image[i] = usize::MAX;
    }
}

/// A permutation of vertex indices, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Validates that `images` is a bijection of `0..len`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    /// Parses cycle notation such as `(a1 a2 a3 a4)(b1 b2)`; `()` and `id`
    /// denote the identity.
    pub fn parse_cycles(src: &str, config: &CurveConfig) -> Result<Self, RigidityError> {
        let bad = |msg: String| RigidityError::InvalidPermutation { msg };
        let mut images: Vec<usize> = (0..config.len()).collect();
        let mut moved = vec![false; config.len()];
        let src = src.trim();
        if src == "id" {
            return Ok(Permutation(images));
        }
        let mut rest = src;
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(bad(format!("expected `(` at `{rest}`")));
            };
            let Some(close) = body.find(')') else {
                return Err(bad("unclosed cycle".into()));
            };
            let cycle: Vec<usize> = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|name| config.vertex(name))
                .collect::<Result<_, _>>()?;
            for (k, &v) in cycle.iter().enumerate() {
                if std::mem::replace(&mut moved[v], true) {
                    return Err(bad(format!("vertex {} appears twice", config.name(v))));
                }
                images[v] = cycle[(k + 1) % cycle.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn pow(&self, m: u64) -> Permutation {
        let mut out = Permutation::identity(self.len());
        for (i, slot) in out.0.iter_mut().enumerate() {
            let len = self.orbit_len(i) as u64;
            let mut j = i;
            for _ in 0..m % len {
                j = self.0[j];
            }
            *slot = j;
        }
        out
    }

    pub fn orbit_len(&self, i: usize) -> usize {
        let mut j = self.0[i];
        let mut len = 1;
        while j != i {
            j = self.0[j];
            len += 1;
        }
        len
    }

    pub fn order(&self) -> u64 {
        (0..self.len()).fold(1, |acc, i| num_integer::lcm(acc, self.orbit_len(i) as u64))
    }

    /// Nontrivial cycles, each starting at its smallest index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for i in 0..self.len() {
            if seen[i] || self.0[i] == i {
                continue;
            }
            let mut cyc = vec![i];
            seen[i] = true;
            let mut j = self.0[i];
            while j != i {
                seen[j] = true;
                cyc.push(j);
                j = self.0[j];
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle notation with vertex names; `id` for the identity.
    pub fn display<'a>(&'a self, config: &'a CurveConfig) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Permutation, &'a CurveConfig);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let cycles = self.0.cycles();
                if cycles.is_empty() {
                    return write!(f, "id");
                }
                for c in cycles {
                    let names: Vec<&str> = c.iter().map(|&i| self.1.name(i)).collect();
                    write!(f, "({})", names.join(" "))?;
                }
                Ok(())
            }
        }
        D(self, config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> CurveConfig {
        let mut g = CurveConfig::new();
        for i in 0..n {
            g.add_vertex(&format!("v{i}")).unwrap();
        }
        for i in 1..n {
            g.add_edge(i - 1, i, 1).unwrap();
        }
        g
    }

    #[test]
    fn small_automorphism_groups() {
        assert_eq!(path(4).automorphisms().len(), 2);
        let mut tri = path(3);
        tri.add_edge(0, 2, 1).unwrap();
        assert_eq!(tri.automorphisms().len(), 6);
        let mut g = path(3);
        g.add_edge(0, 2, 2).unwrap();
        // the tangency edge is only fixed or reversed
        assert_eq!(g.automorphisms().len(), 2);
    }

    #[test]
    fn cycles_round_trip() {
        let g = path(5);
        let p = Permutation::parse_cycles("(v0 v4)(v1 v3)", &g).unwrap();
        assert!(g.is_automorphism(&p));
        assert_eq!(p.display(&g).to_string(), "(v0 v4)(v1 v3)");
        assert_eq!(p.order(), 2);
        assert!(p.pow(2).is_identity());
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(5));
        let q = Permutation::parse_cycles("(v0 v1 v2)", &g).unwrap();
        assert!(!g.is_automorphism(&q));
        assert_eq!(q.pow(4), q);
        assert_eq!(Permutation::parse_cycles("()", &g).unwrap().display(&g).to_string(), "id");
        assert!(Permutation::parse_cycles("(v0 v0)", &g).is_err());
        assert!(Permutation::parse_cycles("(v0 w)", &g).is_err());
    }
}
