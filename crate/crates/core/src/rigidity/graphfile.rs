//! Text format for curve configurations and actions, and DOT export.
//!
//! ```text
//! # comment
//! vertex s0 C1 C2
//! edge s0 C1
//! edge a1 b1 x2
//! action sigma
//! n = 16
//! c = 1
//! perm = (a1 a2 a3 a4)(b1 b2 b3 b4)
//! anchor = s0 @ s0:C1 = 4
//! ```
//!
//! Key-value lines before any `action` header form an action named
//! `action`. Anchor points are `A:B` (the intersection of `A` and `B`, one
//! of which is the anchored curve) or `freeK` / `C:freeK`.

use std::fmt::Write as _;

use super::action::{propagate, Anchor, CurveState, Flag, GraphAction, PointKind};
use super::config::{CurveConfig, Permutation};
use super::RigidityError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    pub name: String,
    pub n: u32,
    pub c: u32,
    pub perm: Permutation,
    pub anchors: Vec<Anchor>,
    pub line: usize,
}

impl ActionSpec {
    pub fn build(&self, config: &CurveConfig) -> Result<GraphAction, RigidityError> {
        propagate(config, &self.perm, self.n, self.c, &self.anchors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub config: CurveConfig,
    pub actions: Vec<ActionSpec>,
}

impl GraphFile {
    pub fn action(&self, name: &str) -> Result<&ActionSpec, RigidityError> {
        self.actions.iter().find(|a| a.name == name).ok_or_else(|| RigidityError::UnknownAction { name: name.to_string() })
    }
}

#[derive(Default)]
struct Pending {
    name: String,
    line: usize,
    n: Option<u32>,
    c: Option<u32>,
    perm: Option<String>,
    anchors: Vec<(usize, String)>,
}

pub fn parse_graph_file(src: &str) -> Result<GraphFile, RigidityError> {
    let mut config = CurveConfig::new();
    let mut pending: Vec<Pending> = Vec::new();
    let syntax = |line: usize, msg: String| RigidityError::Syntax { line, msg };

    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        let in_vertex_section = pending.is_empty();
        let mut words = text.split_whitespace();
        let head = words.next().unwrap();
        if let Some((key, value)) = text.split_once('=').filter(|_| !matches!(head, "vertex" | "edge" | "action")) {
            if pending.is_empty() {
                pending.push(Pending { name: "action".into(), line, ..Default::default() });
            }
            let cur = pending.last_mut().unwrap();
            let value = value.trim();
            let number = |v: &str| v.parse::<u32>().map_err(|_| syntax(line, format!("expected a nonnegative integer, got `{v}`")));
            match key.trim() {
                "n" => cur.n = Some(number(value)?),
                "c" => cur.c = Some(number(value)?),
                "perm" => cur.perm = Some(value.to_string()),
                "anchor" => cur.anchors.push((line, value.to_string())),
                other => return Err(syntax(line, format!("unknown key `{other}`"))),
            }
            continue;
        }
        match head {
            "vertex" if in_vertex_section => {
                let names: Vec<&str> = words.collect();
                if names.is_empty() {
                    return Err(syntax(line, "`vertex` needs a name".into()));
                }
                for name in names {
                    config.add_vertex(name).map_err(|e| syntax(line, e.to_string()))?;
                }
            }
            "edge" if in_vertex_section => {
                let args: Vec<&str> = words.collect();
                let mult = match args.as_slice() {
                    [_, _] => 1,
                    [_, _, "x2"] => 2,
                    [_, _, "x1"] => 1,
                    _ => return Err(syntax(line, "expected `edge <a> <b> [x2]`".into())),
                };
                let a = config.vertex(args[0]).map_err(|e| syntax(line, e.to_string()))?;
                let b = config.vertex(args[1]).map_err(|e| syntax(line, e.to_string()))?;
                config.add_edge(a, b, mult).map_err(|e| syntax(line, e.to_string()))?;
            }
            "vertex" | "edge" => return Err(syntax(line, "graph lines must precede the actions".into())),
            "action" => {
                let name = words.next().ok_or_else(|| syntax(line, "`action` needs a name".into()))?;
                if pending.iter().any(|p| p.name == name) {
                    return Err(syntax(line, format!("duplicate action `{name}`")));
                }
                pending.push(Pending { name: name.to_string(), line, ..Default::default() });
            }
            other => return Err(syntax(line, format!("unexpected `{other}`"))),
        }
    }

    let mut actions = Vec::new();
    for p in pending {
        let missing = |what: &str| syntax(p.line, format!("action `{}` is missing `{what}`", p.name));
        let n = p.n.ok_or_else(|| missing("n"))?;
        let c = p.c.ok_or_else(|| missing("c"))?;
        let perm = match &p.perm {
            Some(s) => Permutation::parse_cycles(s, &config).map_err(|e| syntax(p.line, e.to_string()))?,
            None => Permutation::identity(config.len()),
        };
        let anchors = p
            .anchors
            .iter()
            .map(|(line, s)| parse_anchor(s, &config).map_err(|e| syntax(*line, e.to_string())))
            .collect::<Result<_, _>>()?;
        actions.push(ActionSpec { name: p.name, n, c, perm, anchors, line: p.line });
    }
    Ok(GraphFile { config, actions })
}

/// `C @ A:B = w`, `C @ freeK = w` or `C @ C:freeK = w`.
pub fn parse_anchor(src: &str, config: &CurveConfig) -> Result<Anchor, RigidityError> {
    let bad = || RigidityError::InvalidFlag { flag: src.to_string() };
    let (curve, rest) = src.split_once('@').ok_or_else(bad)?;
    let (point, weight) = rest.split_once('=').ok_or_else(bad)?;
    let curve = config.vertex(curve.trim())?;
    let weight: u32 = weight.trim().parse().map_err(|_| bad())?;
    let point = point.trim();
    let parts: Vec<&str> = point.split(':').collect();
    let free = |s: &str| s.strip_prefix("free").and_then(|k| k.parse::<u8>().ok());
    let flag = match parts.as_slice() {
        [p] => Flag::Free(free(p).ok_or_else(bad)?),
        [a, b] => {
            if let Some(k) = free(b) {
                if config.vertex(a)? != curve {
                    return Err(bad());
                }
                Flag::Free(k)
            } else {
                let (a, b) = (config.vertex(a)?, config.vertex(b)?);
                let other = if a == curve { b } else if b == curve { a } else { return Err(bad()) };
                if config.multiplicity(curve, other).is_none() {
                    return Err(bad());
                }
                Flag::Edge(other)
            }
        }
        _ => return Err(bad()),
    };
    Ok(Anchor { curve, flag, weight })
}

/// Graphviz rendering; curves and edges are emitted sorted by name.
///
/// Pointwise-fixed curves are filled grey, mobile curves white, stable
/// curves drawn bold. Fixed points appear as edge labels (weights along
/// each curve, or `swap`) and free fixed points as point nodes.
pub fn to_dot(config: &CurveConfig, action: Option<&GraphAction>) -> String {
    let mut order: Vec<usize> = (0..config.len()).collect();
    order.sort_by(|&a, &b| config.name(a).cmp(config.name(b)));
    let mut out = String::from("graph curves {\n  node [shape=ellipse];\n");
    for &v in &order {
        let style = match action.map(|a| &a.states()[v]) {
            None => "",
            Some(CurveState::PointwiseFixed) => " [style=filled, fillcolor=grey]",
            Some(CurveState::Mobile) => " [style=filled, fillcolor=white]",
            Some(CurveState::Rotating(_)) => " [style=bold]",
        };
        let _ = writeln!(out, "  \"{}\"{style};", config.name(v));
    }
    let census = action.map(|a| a.census(config));
    let mut edges: Vec<(usize, usize, u8)> = config
        .edges()
        .into_iter()
        .map(|(i, j, m)| if config.name(i) <= config.name(j) { (i, j, m) } else { (j, i, m) })
        .collect();
    edges.sort_by(|x, y| (config.name(x.0), config.name(x.1)).cmp(&(config.name(y.0), config.name(y.1))));
    for (i, j, m) in edges {
        let mut attrs = Vec::new();
        if m == 2 {
            attrs.push("color=\"black:black\"".to_string());
        }
        if let Some(a) = action {
            if let (Some(wi), Some(wj)) = (a.weight(i, Flag::Edge(j)), a.weight(j, Flag::Edge(i))) {
                attrs.push(format!("label=\"{wi}|{wj}\""));
            } else if a.pi().apply(i) == j && a.pi().apply(j) == i {
                attrs.push("label=\"swap\"".to_string());
            }
        }
        let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
        let _ = writeln!(out, "  \"{}\" -- \"{}\"{attrs};", config.name(i), config.name(j));
    }
    if let Some(census) = census {
        let mut free: Vec<_> = census.items.iter().filter(|it| it.kind == PointKind::FreePoint).collect();
        free.sort_by(|a, b| a.location.cmp(&b.location));
        for it in free {
            let (curve, w) = &it.weights[0];
            let _ = writeln!(out, "  \"{}\" [shape=point, xlabel=\"{w}\"];", it.location);
            let _ = writeln!(out, "  \"{curve}\" -- \"{}\" [style=dotted];", it.location);
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# a chain with a pendant tangency
vertex L M R
vertex T
edge L M
edge M R
edge R T x2
action mid
n = 16
c = 1
anchor = M @ L:M = 0
";

    #[test]
    fn parse_and_build() {
        let f = parse_graph_file(SMALL).unwrap();
        assert_eq!(f.config.len(), 4);
        assert_eq!(f.config.multiplicity(2, 3), Some(2));
        let spec = f.action("mid").unwrap();
        assert_eq!(spec.anchors, vec![Anchor { curve: 1, flag: Flag::Edge(0), weight: 0 }]);
        let a = spec.build(&f.config).unwrap();
        assert_eq!(a.states()[1], CurveState::PointwiseFixed);
        let dot = to_dot(&f.config, Some(&a));
        assert!(dot.contains("\"M\" [style=filled, fillcolor=grey];"));
        assert!(dot.contains("\"R\" -- \"T\" [color=\"black:black\", label=\"15|15\"];"), "{dot}");
        assert!(dot.contains("\"T:free0\" [shape=point, xlabel=\"1\"];"), "{dot}");
        assert_eq!(dot, to_dot(&f.config, Some(&a)));
    }

    #[test]
    fn unnamed_action_and_errors() {
        let f = parse_graph_file("vertex A\nn = 2\nc = 1\nanchor = A @ free0 = 1\n").unwrap();
        assert_eq!(f.actions[0].name, "action");
        assert_eq!(f.actions[0].anchors[0].flag, Flag::Free(0));
        let err = parse_graph_file("vertex A\nedge A B\n").unwrap_err();
        assert!(matches!(err, RigidityError::Syntax { line: 2, .. }));
        let err = parse_graph_file("vertex A\naction x\nc = 1\n").unwrap_err();
        assert!(matches!(err, RigidityError::Syntax { line: 2, .. }));
        let err = parse_graph_file("vertex A B\nedge A B\naction x\nn = 2\nc = 0\nanchor = A @ B:B = 1\n").unwrap_err();
        assert!(matches!(err, RigidityError::Syntax { line: 6, .. }));
        assert!(parse_graph_file("vertex A\nfoo\n").is_err());
    }
}
