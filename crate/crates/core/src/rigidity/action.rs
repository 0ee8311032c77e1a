use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_integer::Integer;

use super::config::{CurveConfig, Permutation};
use super::RigidityError;

/// A fixed point on a stable curve: its intersection with a stable
/// neighbor, or one of at most two synthesized free points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    Edge(usize),
    Free(u8),
}

impl Flag {
    pub fn display(&self, curve: usize, config: &CurveConfig) -> String {
        match *self {
            Flag::Edge(d) => format!("{}:{}", config.name(curve), config.name(d)),
            Flag::Free(k) => format!("{}:free{k}", config.name(curve)),
        }
    }
}

/// The weight of the action along `curve` at the point `flag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Anchor {
    pub curve: usize,
    pub flag: Flag,
    pub weight: u32,
}

/// How the action restricts to one curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveState {
    /// Moved by the permutation; carries no weights.
    Mobile,
    /// Stable with weight 0: every point is fixed.
    PointwiseFixed,
    /// Stable with exactly two fixed points of weights `w` and `−w`,
    /// sorted by flag.
    Rotating([(Flag, u32); 2]),
}

/// A weighted order-`n` action on a [`CurveConfig`]: the pullback of the
/// two-form is `ζⁿᶜ`, and each flag weight `w` is the exponent of the
/// eigenvalue `ζʷ` along the curve at that point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphAction {
    n: u32,
    c: u32,
    pi: Permutation,
    states: Vec<CurveState>,
}

pub(crate) enum Seed {
    Flag(usize, Flag, u32),
    Pointwise(usize),
}

/// Indices of the neighbors of `curve` stable under `pi`.
fn stable_edges(config: &CurveConfig, pi: &Permutation, curve: usize) -> Vec<usize> {
    config.neighbors(curve).map(|(d, _)| d).filter(|&d| pi.apply(d) == d).collect()
}

/// Fixed points of a stable, not pointwise fixed `curve`: its edge points
/// with stable neighbors, padded with free points up to two.
pub fn fixed_flags(config: &CurveConfig, pi: &Permutation, curve: usize) -> Vec<Flag> {
    let mut flags: Vec<Flag> = stable_edges(config, pi, curve).into_iter().map(Flag::Edge).collect();
    let mut k = 0;
    while flags.len() < 2 {
        flags.push(Flag::Free(k));
        k += 1;
    }
    flags
}

#[derive(Clone, PartialEq)]
enum Local {
    Pointwise,
    Rotating(BTreeMap<Flag, u32>),
}

struct Propagation<'a> {
    config: &'a CurveConfig,
    pi: &'a Permutation,
    n: u32,
    c: u32,
    state: Vec<Option<Local>>,
    parent: Vec<Option<usize>>,
    queue: VecDeque<usize>,
}

impl Propagation<'_> {
    fn implied(&self, curve: usize, flag: Flag, w: u32) -> Result<Local, RigidityError> {
        let flags = fixed_flags(self.config, self.pi, curve);
        if !flags.contains(&flag) {
            return Err(RigidityError::InvalidFlag { flag: flag.display(curve, self.config) });
        }
        if w == 0 {
            return Ok(Local::Pointwise);
        }
        if flags.len() > 2 {
            return Err(RigidityError::TooManyFixedPoints {
                curve: self.config.name(curve).to_string(),
                points: flags.len(),
                weight: w,
            });
        }
        let partner = *flags.iter().find(|&&f| f != flag).unwrap();
        Ok(Local::Rotating(BTreeMap::from([(flag, w), (partner, (self.n - w) % self.n)])))
    }

    fn set(&mut self, curve: usize, local: Local, from: Option<usize>) -> Result<(), RigidityError> {
        match &self.state[curve] {
            None => {
                self.state[curve] = Some(local);
                self.parent[curve] = from;
                self.queue.push_back(curve);
                Ok(())
            }
            Some(existing) if *existing == local => Ok(()),
            Some(_) => Err(RigidityError::InconsistentCycle { cycle: self.cycle(curve, from) }),
        }
    }

    fn path(&self, mut v: usize) -> Vec<usize> {
        let mut p = vec![v];
        while let Some(u) = self.parent[v] {
            p.push(u);
            v = u;
        }
        p
    }

    /// The loop closed by reaching `curve` a second time from `from`.
    fn cycle(&self, curve: usize, from: Option<usize>) -> Vec<String> {
        let a = self.path(curve);
        let b = from.map(|f| self.path(f)).unwrap_or_default();
        let meet = b.iter().position(|v| a.contains(v));
        let mut out: Vec<usize> = match meet {
            Some(j) => {
                let lca = b[j];
                let i = a.iter().position(|&v| v == lca).unwrap();
                let mut c = a[..=i].to_vec();
                c.extend(b[..j].iter().rev());
                c
            }
            None => a.iter().copied().chain(b.iter().rev().copied()).collect(),
        };
        out.dedup();
        out.into_iter().map(|v| self.config.name(v).to_string()).collect()
    }

    fn weight_at(&self, curve: usize, flag: Flag) -> u32 {
        match self.state[curve].as_ref().unwrap() {
            Local::Pointwise => 0,
            Local::Rotating(m) => m[&flag],
        }
    }

    fn run(&mut self) -> Result<(), RigidityError> {
        while let Some(curve) = self.queue.pop_front() {
            for d in stable_edges(self.config, self.pi, curve) {
                let w = self.weight_at(curve, Flag::Edge(d));
                let target = match self.config.multiplicity(curve, d).unwrap() {
                    1 => (self.c + self.n - w) % self.n,
                    _ => w,
                };
                let local = self.implied(d, Flag::Edge(curve), target)?;
                self.set(d, local, Some(curve))?;
            }
        }
        Ok(())
    }
}

/// Builds the action determined by `anchors` (one per connected component
/// of the stable curves suffices) and checks every local rule.
pub fn propagate(config: &CurveConfig, pi: &Permutation, n: u32, c: u32, anchors: &[Anchor]) -> Result<GraphAction, RigidityError> {
    if n == 0 {
        return Err(RigidityError::InvalidOrder);
    }
    if !config.is_automorphism(pi) {
        return Err(RigidityError::NotAnAutomorphism);
    }
    if !pi.pow(n as u64).is_identity() {
        return Err(RigidityError::PermutationOrder { order: pi.order(), n });
    }
    let seeds: Vec<Seed> = anchors.iter().map(|a| Seed::Flag(a.curve, a.flag, a.weight % n)).collect();
    propagate_seeds(config, pi.clone(), n, c % n, &seeds)
}

pub(crate) fn propagate_seeds(config: &CurveConfig, pi: Permutation, n: u32, c: u32, seeds: &[Seed]) -> Result<GraphAction, RigidityError> {
    let len = config.len();
    let mut p = Propagation { config, pi: &pi, n, c, state: vec![None; len], parent: vec![None; len], queue: VecDeque::new() };
    for seed in seeds {
        let curve = match *seed {
            Seed::Flag(curve, _, _) | Seed::Pointwise(curve) => curve,
        };
        if pi.apply(curve) != curve {
            return Err(RigidityError::AnchorOnMobileCurve { curve: config.name(curve).to_string() });
        }
        let local = match *seed {
            Seed::Flag(curve, flag, w) => p.implied(curve, flag, w)?,
            Seed::Pointwise(_) => Local::Pointwise,
        };
        p.set(curve, local, None)?;
        p.run()?;
    }
    let mut states = Vec::with_capacity(len);
    for curve in 0..len {
        if pi.apply(curve) != curve {
            states.push(CurveState::Mobile);
            continue;
        }
        let state = match &p.state[curve] {
            None => return Err(RigidityError::Unanchored { curve: config.name(curve).to_string() }),
            Some(Local::Pointwise) => CurveState::PointwiseFixed,
            Some(Local::Rotating(m)) => canonical_rotation(m.iter().map(|(&f, &w)| (f, w)).collect()),
        };
        states.push(state);
    }
    let action = GraphAction { n, c, pi, states };
    action.check_orbits(config)?;
    Ok(action)
}

/// Sorts by flag; two free points are interchangeable, so they are
/// labelled in increasing order of weight.
fn canonical_rotation(mut v: Vec<(Flag, u32)>) -> CurveState {
    v.sort();
    if let [(Flag::Free(_), a), (Flag::Free(_), b)] = v[..] {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        v = vec![(Flag::Free(0), lo), (Flag::Free(1), hi)];
    }
    CurveState::Rotating([v[0], v[1]])
}

impl GraphAction {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn pi(&self) -> &Permutation {
        &self.pi
    }

    pub fn states(&self) -> &[CurveState] {
        &self.states
    }

    pub fn is_stable(&self, curve: usize) -> bool {
        self.pi.apply(curve) == curve
    }

    /// Weight along `curve` at the fixed point `flag`.
    pub fn weight(&self, curve: usize, flag: Flag) -> Option<u32> {
        match &self.states[curve] {
            CurveState::Mobile => None,
            CurveState::PointwiseFixed => match flag {
                Flag::Edge(d) if self.is_stable(d) => Some(0),
                _ => None,
            },
            CurveState::Rotating(fs) => fs.iter().find(|(f, _)| *f == flag).map(|&(_, w)| w),
        }
    }

    /// Rotation exponent of a stable curve (`0` when pointwise fixed).
    pub fn rotation(&self, curve: usize) -> Option<u32> {
        match &self.states[curve] {
            CurveState::Mobile => None,
            CurveState::PointwiseFixed => Some(0),
            CurveState::Rotating(fs) => Some(fs[0].1),
        }
    }

    /// All weighted flags, usable as anchors.
    pub fn flags(&self, config: &CurveConfig) -> Vec<Anchor> {
        let mut out = Vec::new();
        for (curve, s) in self.states.iter().enumerate() {
            match s {
                CurveState::Mobile => {}
                CurveState::PointwiseFixed => {
                    for flag in fixed_flags(config, &self.pi, curve).into_iter().filter(|f| matches!(f, Flag::Edge(_))) {
                        out.push(Anchor { curve, flag, weight: 0 });
                    }
                }
                CurveState::Rotating(fs) => {
                    out.extend(fs.iter().map(|&(flag, weight)| Anchor { curve, flag, weight }));
                }
            }
        }
        out
    }

    /// A stable curve of rotation `w` acts on its moved points with orbits
    /// of length `n / gcd(n, w)`; the moved neighbors must follow suit.
    fn check_orbits(&self, config: &CurveConfig) -> Result<(), RigidityError> {
        for curve in 0..config.len() {
            let Some(w) = self.rotation(curve) else { continue };
            let expected = (self.n / self.n.gcd(&w)) as usize;
            for (d, _) in config.neighbors(curve) {
                let orbit = self.pi.orbit_len(d);
                if orbit > 1 && orbit != expected {
                    return Err(RigidityError::OrbitMismatch {
                        curve: config.name(curve).to_string(),
                        neighbor: config.name(d).to_string(),
                        orbit,
                        expected,
                    });
                }
            }
        }
        Ok(())
    }

    /// Least `m ≥ 1` with `piᵐ = id` and `m·c ≡ m·w ≡ 0 (mod n)` for all
    /// weights.
    pub fn order(&self) -> u32 {
        let weights: Vec<u32> = self.states.iter().filter_map(|s| match s {
            CurveState::Rotating(fs) => Some(fs[0].1),
            _ => None,
        }).collect();
        (1..=self.n)
            .find(|&m| {
                let m64 = m as u64;
                self.pi.pow(m64).is_identity()
                    && (m64 * self.c as u64).is_multiple_of(self.n as u64)
                    && weights.iter().all(|&w| (m64 * w as u64).is_multiple_of(self.n as u64))
            })
            .unwrap_or(self.n)
    }

    /// `selfᵐ`, re-propagated so curves that become stable get weights.
    pub fn power(&self, config: &CurveConfig, m: u64) -> Result<GraphAction, RigidityError> {
        let n = self.n as u64;
        let scale = |w: u32| ((w as u64 * (m % n)) % n) as u32;
        let mut seeds = Vec::new();
        for (curve, s) in self.states.iter().enumerate() {
            match s {
                CurveState::Mobile => {}
                CurveState::PointwiseFixed => seeds.push(Seed::Pointwise(curve)),
                CurveState::Rotating(fs) => {
                    if scale(fs[0].1) == 0 {
                        seeds.push(Seed::Pointwise(curve));
                    } else {
                        seeds.extend(fs.iter().map(|&(f, w)| Seed::Flag(curve, f, scale(w))));
                    }
                }
            }
        }
        propagate_seeds(config, self.pi.pow(m), self.n, scale(self.c), &seeds)
    }

    pub fn inverse(&self, config: &CurveConfig) -> Result<GraphAction, RigidityError> {
        self.power(config, self.order() as u64 - 1)
    }

    /// `self ∘ other`: permutations compose, volume exponents and weights at
    /// common fixed flags add.
    pub fn compose(&self, other: &GraphAction, config: &CurveConfig) -> Result<GraphAction, RigidityError> {
        if self.n != other.n || self.pi.len() != other.pi.len() {
            return Err(RigidityError::IncompatibleActions { curve: None });
        }
        let n = self.n;
        let pi = self.pi.compose(&other.pi);
        let mut seeds = Vec::new();
        for curve in 0..config.len() {
            if pi.apply(curve) != curve {
                continue;
            }
            let result_edges = stable_edges(config, &pi, curve).len();
            let usable = |a: &GraphAction, f: &Flag| match f {
                Flag::Edge(_) => true,
                Flag::Free(_) => stable_edges(config, &a.pi, curve).len() == result_edges,
            };
            match (&self.states[curve], &other.states[curve]) {
                (CurveState::Mobile, _) | (_, CurveState::Mobile) => {}
                (CurveState::PointwiseFixed, CurveState::PointwiseFixed) => seeds.push(Seed::Pointwise(curve)),
                (CurveState::PointwiseFixed, CurveState::Rotating(fs)) => {
                    seeds.extend(fs.iter().filter(|(f, _)| usable(other, f)).map(|&(f, w)| Seed::Flag(curve, f, w)));
                }
                (CurveState::Rotating(fs), CurveState::PointwiseFixed) => {
                    seeds.extend(fs.iter().filter(|(f, _)| usable(self, f)).map(|&(f, w)| Seed::Flag(curve, f, w)));
                }
                (CurveState::Rotating(f1), CurveState::Rotating(f2)) => {
                    if f1[0].0 != f2[0].0 || f1[1].0 != f2[1].0 {
                        return Err(RigidityError::IncompatibleActions { curve: Some(config.name(curve).to_string()) });
                    }
                    let sum = (f1[0].1 + f2[0].1) % n;
                    if sum == 0 {
                        seeds.push(Seed::Pointwise(curve));
                    } else {
                        for k in 0..2 {
                            if usable(self, &f1[k].0) {
                                seeds.push(Seed::Flag(curve, f1[k].0, (f1[k].1 + f2[k].1) % n));
                            }
                        }
                    }
                }
            }
        }
        propagate_seeds(config, pi, n, (self.c + other.c) % n, &seeds)
    }

    /// Transports the action along the graph automorphism `g`.
    pub fn conjugate(&self, g: &Permutation) -> GraphAction {
        let pi = g.compose(&self.pi).compose(&g.inverse());
        let mut states = vec![CurveState::Mobile; self.states.len()];
        for (curve, s) in self.states.iter().enumerate() {
            states[g.apply(curve)] = match s {
                CurveState::Rotating(fs) => canonical_rotation(
                    fs.iter()
                        .map(|&(f, w)| match f {
                            Flag::Edge(d) => (Flag::Edge(g.apply(d)), w),
                            free => (free, w),
                        })
                        .collect(),
                ),
                other => other.clone(),
            };
        }
        GraphAction { n: self.n, c: self.c, pi, states }
    }

    /// Ordering key used to pick class representatives.
    pub fn key(&self) -> (u32, u32, &[usize], &[CurveState]) {
        (self.n, self.c, self.pi.images(), &self.states)
    }

    pub fn census(&self, config: &CurveConfig) -> FixedLocusCensus {
        let mut items = Vec::new();
        for (curve, s) in self.states.iter().enumerate() {
            if *s == CurveState::PointwiseFixed {
                items.push(CensusItem { location: config.name(curve).to_string(), kind: PointKind::FixedCurve, weights: vec![] });
            }
        }
        for (i, j, m) in config.edges() {
            let location = format!("{}:{}", config.name(i), config.name(j));
            if self.is_stable(i) && self.is_stable(j) {
                let fixed_curve = [i, j].iter().any(|&v| self.states[v] == CurveState::PointwiseFixed);
                if fixed_curve {
                    continue;
                }
                let weights = vec![
                    (config.name(i).to_string(), self.weight(i, Flag::Edge(j)).unwrap()),
                    (config.name(j).to_string(), self.weight(j, Flag::Edge(i)).unwrap()),
                ];
                let kind = if m == 1 { PointKind::TransverseIntersection } else { PointKind::Tangency };
                items.push(CensusItem { location, kind, weights });
            } else if self.pi.apply(i) == j && self.pi.apply(j) == i {
                items.push(CensusItem { location, kind: PointKind::SwapPoint, weights: vec![] });
            }
        }
        for (curve, s) in self.states.iter().enumerate() {
            if let CurveState::Rotating(fs) = s {
                for &(f, w) in fs {
                    if let Flag::Free(_) = f {
                        items.push(CensusItem {
                            location: f.display(curve, config),
                            kind: PointKind::FreePoint,
                            weights: vec![(config.name(curve).to_string(), w)],
                        });
                    }
                }
            }
        }
        let k = items.iter().filter(|it| it.kind == PointKind::FixedCurve).count();
        FixedLocusCensus { isolated_points: items.len() - k, fixed_curves: k, items }
    }

    /// One line per stable curve: `name: fixed` or `name: w@point, w'@point'`.
    pub fn describe(&self, config: &CurveConfig) -> String {
        let mut out = format!("n = {}, c = {}, perm = {}, order = {}\n", self.n, self.c, self.pi.display(config), self.order());
        for (curve, s) in self.states.iter().enumerate() {
            match s {
                CurveState::Mobile => {}
                CurveState::PointwiseFixed => out.push_str(&format!("  {}: pointwise fixed\n", config.name(curve))),
                CurveState::Rotating(fs) => {
                    let parts: Vec<String> = fs.iter().map(|&(f, w)| format!("{w} at {}", f.display(curve, config))).collect();
                    out.push_str(&format!("  {}: {}\n", config.name(curve), parts.join(", ")));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointKind {
    TransverseIntersection,
    Tangency,
    FreePoint,
    SwapPoint,
    FixedCurve,
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointKind::TransverseIntersection => "transverse-intersection",
            PointKind::Tangency => "tangency",
            PointKind::FreePoint => "free-point",
            PointKind::SwapPoint => "swap-point",
            PointKind::FixedCurve => "fixed-curve",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusItem {
    pub location: String,
    pub kind: PointKind,
    /// Along-curve weights; empty at swap points and for fixed curves.
    pub weights: Vec<(String, u32)>,
}

/// Isolated fixed points `N` and pointwise-fixed curves `k`, itemized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLocusCensus {
    pub isolated_points: usize,
    pub fixed_curves: usize,
    pub items: Vec<CensusItem>,
}

impl fmt::Display for FixedLocusCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N = {}, k = {}", self.isolated_points, self.fixed_curves)?;
        for it in &self.items {
            write!(f, "  {} {}", it.kind, it.location)?;
            if !it.weights.is_empty() {
                let ws: Vec<String> = it.weights.iter().map(|(c, w)| format!("{c}={w}")).collect();
                write!(f, " [{}]", ws.join(", "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(names: &[&str], closed: bool) -> CurveConfig {
        let mut g = CurveConfig::new();
        for n in names {
            g.add_vertex(n).unwrap();
        }
        for i in 1..names.len() {
            g.add_edge(i - 1, i, 1).unwrap();
        }
        if closed {
            g.add_edge(names.len() - 1, 0, 1).unwrap();
        }
        g
    }

    #[test]
    fn chain_of_three() {
        let g = chain(&["L", "M", "R"], false);
        let id = Permutation::identity(3);
        let a = propagate(&g, &id, 16, 1, &[Anchor { curve: 1, flag: Flag::Edge(0), weight: 0 }]).unwrap();
        assert_eq!(a.states()[1], CurveState::PointwiseFixed);
        assert_eq!(a.weight(0, Flag::Edge(1)), Some(1));
        assert_eq!(a.weight(0, Flag::Free(0)), Some(15));
        assert_eq!(a.weight(2, Flag::Edge(1)), Some(1));
        let census = a.census(&g);
        assert_eq!((census.isolated_points, census.fixed_curves), (2, 1));
        assert_eq!(a.order(), 16);
    }

    #[test]
    fn triangle_is_inconsistent() {
        let g = chain(&["A", "B", "C"], true);
        let id = Permutation::identity(3);
        for w in 0..16 {
            let err = propagate(&g, &id, 16, 1, &[Anchor { curve: 0, flag: Flag::Edge(1), weight: w }]).unwrap_err();
            match err {
                RigidityError::InconsistentCycle { cycle } => assert_eq!(cycle.len(), 3, "{cycle:?}"),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn too_many_fixed_points() {
        // a star: the center has three stable neighbors
        let mut g = chain(&["A", "O", "B"], false);
        g.add_vertex("C").unwrap();
        g.add_edge(1, 3, 1).unwrap();
        let id = Permutation::identity(4);
        let err = propagate(&g, &id, 16, 1, &[Anchor { curve: 1, flag: Flag::Edge(0), weight: 3 }]).unwrap_err();
        assert!(matches!(err, RigidityError::TooManyFixedPoints { points: 3, .. }));
        assert!(propagate(&g, &id, 16, 1, &[Anchor { curve: 1, flag: Flag::Edge(0), weight: 0 }]).is_ok());
    }

    #[test]
    fn mobile_anchor_and_orbits() {
        let g = chain(&["A", "M", "B"], false);
        let swap = Permutation::parse_cycles("(A B)", &g).unwrap();
        let err = propagate(&g, &swap, 2, 1, &[Anchor { curve: 0, flag: Flag::Free(0), weight: 1 }]).unwrap_err();
        assert!(matches!(err, RigidityError::AnchorOnMobileCurve { .. }));
        // M's moved points form one orbit of length 2, so its rotation is n/2
        let ok = propagate(&g, &swap, 4, 1, &[Anchor { curve: 1, flag: Flag::Free(0), weight: 2 }]).unwrap();
        assert_eq!(ok.rotation(1), Some(2));
        let bad = propagate(&g, &swap, 4, 1, &[Anchor { curve: 1, flag: Flag::Free(0), weight: 1 }]).unwrap_err();
        assert!(matches!(bad, RigidityError::OrbitMismatch { orbit: 2, expected: 4, .. }));
    }

    #[test]
    fn tangency_transfers_the_weight() {
        let mut g = chain(&["P"], false);
        g.add_vertex("Q").unwrap();
        g.add_edge(0, 1, 2).unwrap();
        let id = Permutation::identity(2);
        let a = propagate(&g, &id, 8, 3, &[Anchor { curve: 0, flag: Flag::Edge(1), weight: 5 }]).unwrap();
        assert_eq!(a.weight(1, Flag::Edge(0)), Some(5));
        let census = a.census(&g);
        assert_eq!(census.items.iter().filter(|i| i.kind == PointKind::Tangency).count(), 1);
        assert_eq!(census.isolated_points, 3);
    }
}
