//! Command implementations for the `k3rigid` binary.
//!
//! Every command returns a report that prints as plain text or, with
//! `--json`, as a JSON document whose keys follow the struct field order.

pub mod surface_file;

use std::fmt::{self, Write as _};
use std::fs;
use std::sync::Arc;

use k3rigid_core::cyclotomic::{as_zeta_power, zeta_power_order};
use k3rigid_core::funfield::DEFAULT_MAX_ORDER;
use k3rigid_core::lattice::{from_curve_config, genus_equal, parse_lattice_sum, GramMatrix};
use k3rigid_core::polyring::Valuation;
use k3rigid_core::rigidity::{
    enumerate_actions, parse_graph_file, to_dot, CurveConfig, CurveState, GraphAction, GraphFile, RigidityError,
};
use k3rigid_core::{CycloNum, CyclotomicField};
use serde::Serialize;
use thiserror::Error;

pub use surface_file::{parse_map_ref, parse_surface_file, MapDef, SurfaceFile};

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input; exit code 2.
    #[error("{0}")]
    Input(String),
    /// The input is well formed but a check failed; exit code 1.
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

pub fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

/// A printable command result.
pub trait Report: Serialize + fmt::Display {
    /// False when the report documents a failed verification.
    fn passed(&self) -> bool {
        true
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

fn valuation(v: Valuation) -> Option<u32> {
    v.finite()
}

fn zeta_text(k: u32) -> String {
    match k {
        0 => "1".into(),
        k => format!("z^{k}"),
    }
}

// ---------------------------------------------------------------- classify

#[derive(Debug, Serialize)]
pub struct FiberRow {
    pub place: String,
    #[serde(rename = "type")]
    pub kind: String,
    /// `null` stands for an identically vanishing coefficient.
    pub v_a: Option<u32>,
    pub v_b: Option<u32>,
    pub v_delta: u32,
    pub euler: u32,
    pub components: u32,
    pub count: usize,
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub field_order: u32,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub discriminant: String,
    pub fibers: Vec<FiberRow>,
    pub singular_fibers: Vec<(String, usize)>,
    pub euler_total: u32,
    pub k3: bool,
}

pub fn cmd_classify(path: &str, minimalize: bool) -> Result<ClassifyReport, CliError> {
    let file = parse_surface_file(path, &read_file(path)?)?;
    let mut model = file.model.clone();
    if minimalize {
        model = model.minimalize().map_err(|e| CliError::Verification(format!("{path}: {e}")))?;
    }
    let inv = model.classify_all().map_err(|e| CliError::Verification(format!("{path}: {e}")))?;
    let fibers = inv
        .fibers
        .iter()
        .map(|f| FiberRow {
            place: f.place.to_string(),
            kind: f.kind.to_string(),
            v_a: valuation(f.va),
            v_b: valuation(f.vb),
            v_delta: f.vdelta,
            euler: f.euler,
            components: f.components,
            count: f.multiplicity,
        })
        .collect();
    Ok(ClassifyReport {
        field_order: model.field().order(),
        a: model.a().to_string(),
        b: model.b().to_string(),
        discriminant: model.discriminant().to_string(),
        fibers,
        singular_fibers: inv.type_counts().into_iter().map(|(k, n)| (k.to_string(), n)).collect(),
        euler_total: inv.euler_total,
        k3: inv.is_k3(),
    })
}

impl Report for ClassifyReport {}

impl fmt::Display for ClassifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "y^2 = x^3 + A*x + B over Q(z), z a primitive root of unity of order {}", self.field_order)?;
        writeln!(f, "A = {}", self.a)?;
        writeln!(f, "B = {}", self.b)?;
        writeln!(f, "discriminant = {}", self.discriminant)?;
        writeln!(f)?;
        let width = self.fibers.iter().map(|r| r.place.len()).max().unwrap_or(5).max(5);
        writeln!(f, "{:<width$}  type   v(A)  v(B)  v(D)  euler  count", "place")?;
        let v = |x: Option<u32>| x.map_or("inf".to_string(), |x| x.to_string());
        for r in &self.fibers {
            writeln!(
                f,
                "{:<width$}  {:<5}  {:>4}  {:>4}  {:>4}  {:>5}  {:>5}",
                r.place,
                r.kind,
                v(r.v_a),
                v(r.v_b),
                r.v_delta,
                r.euler,
                r.count
            )?;
        }
        writeln!(f)?;
        let counts: Vec<String> = self.singular_fibers.iter().map(|(k, n)| format!("{k} x{n}")).collect();
        writeln!(f, "singular fibers: {}", if counts.is_empty() { "none".into() } else { counts.join(", ") })?;
        writeln!(f, "Euler number: {}", self.euler_total)?;
        writeln!(f, "K3: {}", if self.k3 { "yes" } else { "no" })
    }
}

// --------------------------------------------------------------- check-map

#[derive(Debug, Serialize)]
pub struct MapReport {
    pub map: String,
    pub field_order: u32,
    pub formulas: [String; 3],
    pub well_defined: bool,
    /// Nonzero residual `v² − u³ − A(w)u − B(w)` when not a morphism.
    pub residual: Option<String>,
    pub ambient_scalar: Option<String>,
    pub omega_factor: Option<String>,
    pub omega_exponent: Option<u32>,
    pub omega_order: Option<u32>,
    pub order: Option<u32>,
    pub primitive: Option<bool>,
    pub symplectic: Option<bool>,
}

fn cyclo_text(c: &CycloNum, field: &Arc<CyclotomicField>) -> String {
    as_zeta_power(field, c).map_or_else(|| c.to_string(), zeta_text)
}

pub fn cmd_check_map(path: &str, name: &str) -> Result<MapReport, CliError> {
    let file = parse_surface_file(path, &read_file(path)?)?;
    let ff = file.function_field();
    let m = file.map(&ff, name)?;
    let field = ff.model().field().clone();
    let n = field.order();
    let mut report = MapReport {
        map: name.to_string(),
        field_order: n,
        formulas: m.formulas(),
        well_defined: m.verify_morphism(),
        residual: None,
        ambient_scalar: m.ambient_scalar().map(|c| cyclo_text(&c, &field)),
        omega_factor: None,
        omega_exponent: None,
        omega_order: None,
        order: None,
        primitive: None,
        symplectic: None,
    };
    if !report.well_defined {
        report.residual = Some(m.residual().to_string());
        return Ok(report);
    }
    let omega = m.omega_factor().map_err(|e| CliError::Verification(format!("map `{name}`: {e}")))?;
    let k = as_zeta_power(&field, &omega);
    report.omega_factor = Some(cyclo_text(&omega, &field));
    report.omega_exponent = k;
    report.omega_order = k.map(|k| zeta_power_order(n, k as i64));
    report.order = m.order(DEFAULT_MAX_ORDER).ok();
    report.symplectic = Some(k == Some(0));
    report.primitive = match (report.order, report.omega_order) {
        (Some(o), Some(w)) => Some(o == w),
        _ => None,
    };
    Ok(report)
}

impl Report for MapReport {
    fn passed(&self) -> bool {
        self.well_defined
    }
}

impl fmt::Display for MapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yes = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "map {} (z a primitive root of unity of order {})", self.map, self.field_order)?;
        for (var, formula) in ["x", "y", "t"].iter().zip(&self.formulas) {
            writeln!(f, "  {var} -> {formula}")?;
        }
        writeln!(f, "well-defined: {}", yes(self.well_defined))?;
        if let Some(r) = &self.residual {
            writeln!(f, "residual: {r}")?;
            return Ok(());
        }
        if let Some(s) = &self.ambient_scalar {
            writeln!(f, "ambient scalar: {s}")?;
        }
        if let Some(w) = &self.omega_factor {
            writeln!(f, "omega factor: {w}")?;
        }
        match self.order {
            Some(o) => writeln!(f, "order: {o}")?,
            None => writeln!(f, "order: more than {DEFAULT_MAX_ORDER}")?,
        }
        if let Some(p) = self.primitive {
            writeln!(f, "primitive: {}", yes(p))?;
        }
        if let Some(s) = self.symplectic {
            writeln!(f, "symplectic: {}", yes(s))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- rigidity

#[derive(Debug, Clone)]
pub enum RigidityCommand {
    Census { action: String },
    Power { action: String, m: u64 },
    Compose { left: String, right: String },
    Enumerate { n: u32, c: u32, filter: Option<(usize, usize)>, jobs: usize },
}

#[derive(Debug, Serialize)]
pub struct PointWeight {
    pub point: String,
    pub weight: u32,
}

#[derive(Debug, Serialize)]
pub struct StableCurve {
    pub curve: String,
    pub pointwise_fixed: bool,
    pub weights: Vec<PointWeight>,
}

#[derive(Debug, Serialize)]
pub struct CensusEntry {
    pub kind: String,
    pub location: String,
    pub weights: Vec<(String, u32)>,
}

#[derive(Debug, Serialize)]
pub struct ActionReport {
    pub action: String,
    pub n: u32,
    pub c: u32,
    pub perm: String,
    pub order: u32,
    pub stable_curves: Vec<StableCurve>,
    #[serde(rename = "N")]
    pub isolated_points: usize,
    pub k: usize,
    pub fixed_locus: Vec<CensusEntry>,
    #[serde(skip)]
    pub dot: String,
}

impl ActionReport {
    pub fn new(label: &str, action: &GraphAction, config: &CurveConfig) -> Self {
        let census = action.census(config);
        let stable_curves = action
            .states()
            .iter()
            .enumerate()
            .filter_map(|(curve, s)| {
                let weights = match s {
                    CurveState::Mobile => return None,
                    CurveState::PointwiseFixed => vec![],
                    CurveState::Rotating(fs) => {
                        fs.iter().map(|&(fl, w)| PointWeight { point: fl.display(curve, config), weight: w }).collect()
                    }
                };
                Some(StableCurve {
                    curve: config.name(curve).to_string(),
                    pointwise_fixed: *s == CurveState::PointwiseFixed,
                    weights,
                })
            })
            .collect();
        ActionReport {
            action: label.to_string(),
            n: action.n(),
            c: action.c(),
            perm: action.pi().display(config).to_string(),
            order: action.order(),
            stable_curves,
            isolated_points: census.isolated_points,
            k: census.fixed_curves,
            fixed_locus: census
                .items
                .iter()
                .map(|it| CensusEntry { kind: it.kind.to_string(), location: it.location.clone(), weights: it.weights.clone() })
                .collect(),
            dot: to_dot(config, Some(action)),
        }
    }
}

impl fmt::Display for ActionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "action {}", self.action)?;
        writeln!(f, "n = {}, c = {}, perm = {}, order = {}", self.n, self.c, self.perm, self.order)?;
        for s in &self.stable_curves {
            if s.pointwise_fixed {
                writeln!(f, "  {}: pointwise fixed", s.curve)?;
            } else {
                let parts: Vec<String> = s.weights.iter().map(|p| format!("{} at {}", p.weight, p.point)).collect();
                writeln!(f, "  {}: {}", s.curve, parts.join(", "))?;
            }
        }
        writeln!(f, "N = {}, k = {}", self.isolated_points, self.k)?;
        for it in &self.fixed_locus {
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

impl Report for ActionReport {}

#[derive(Debug, Serialize)]
pub struct EnumerateReport {
    pub n: u32,
    pub c: u32,
    pub filter: Option<(usize, usize)>,
    pub classes: usize,
    pub representatives: Vec<ActionReport>,
}

impl fmt::Display for EnumerateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "order {} actions with c = {}", self.n, self.c)?;
        if let Some((n, k)) = self.filter {
            write!(f, " and N = {n}, k = {k}")?;
        }
        writeln!(f, ": {} class{}", self.classes, if self.classes == 1 { "" } else { "es" })?;
        for r in &self.representatives {
            writeln!(f)?;
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl Report for EnumerateReport {}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum RigidityReport {
    Action(ActionReport),
    Enumerate(EnumerateReport),
}

impl fmt::Display for RigidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RigidityReport::Action(r) => r.fmt(f),
            RigidityReport::Enumerate(r) => r.fmt(f),
        }
    }
}

impl Report for RigidityReport {}

pub fn load_graph(path: &str) -> Result<GraphFile, CliError> {
    parse_graph_file(&read_file(path)?).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn rigidity_failure(e: RigidityError) -> CliError {
    match e {
        RigidityError::Syntax { .. } | RigidityError::UnknownAction { .. } | RigidityError::UnknownVertex { .. } => {
            CliError::Input(e.to_string())
        }
        other => CliError::Verification(other.to_string()),
    }
}

/// Builds `name` or `inv(name)` from the file's actions.
pub fn build_action(file: &GraphFile, reference: &str) -> Result<GraphAction, CliError> {
    let (name, inverse) =
        parse_map_ref(reference).ok_or_else(|| CliError::Input(format!("bad action reference `{reference}`")))?;
    let action = file.action(&name).map_err(rigidity_failure)?.build(&file.config).map_err(rigidity_failure)?;
    if inverse {
        action.inverse(&file.config).map_err(rigidity_failure)
    } else {
        Ok(action)
    }
}

pub fn cmd_rigidity(path: &str, command: &RigidityCommand) -> Result<RigidityReport, CliError> {
    let file = load_graph(path)?;
    let config = &file.config;
    let report = match command {
        RigidityCommand::Census { action } => ActionReport::new(action, &build_action(&file, action)?, config),
        RigidityCommand::Power { action, m } => {
            let a = build_action(&file, action)?.power(config, *m).map_err(rigidity_failure)?;
            ActionReport::new(&format!("{action}^{m}"), &a, config)
        }
        RigidityCommand::Compose { left, right } => {
            let (a, b) = (build_action(&file, left)?, build_action(&file, right)?);
            let ab = a.compose(&b, config).map_err(rigidity_failure)?;
            ActionReport::new(&format!("{left} o {right}"), &ab, config)
        }
        RigidityCommand::Enumerate { n, c, filter, jobs } => {
            let found = enumerate_actions(config, *n, *c, *filter, *jobs).map_err(rigidity_failure)?;
            let representatives: Vec<ActionReport> =
                found.iter().enumerate().map(|(i, a)| ActionReport::new(&format!("class {}", i + 1), a, config)).collect();
            return Ok(RigidityReport::Enumerate(EnumerateReport {
                n: *n,
                c: *c % (*n).max(1),
                filter: *filter,
                classes: representatives.len(),
                representatives,
            }));
        }
    };
    Ok(RigidityReport::Action(report))
}

/// DOT for the bare graph or for one action.
pub fn cmd_dot(path: &str, action: Option<&str>) -> Result<String, CliError> {
    let file = load_graph(path)?;
    match action {
        None => Ok(to_dot(&file.config, None)),
        Some(name) => Ok(to_dot(&file.config, Some(&build_action(&file, name)?))),
    }
}

// ----------------------------------------------------------------- lattice

#[derive(Debug, Serialize)]
pub struct LatticeReport {
    pub source: String,
    pub size: usize,
    pub rank: usize,
    pub signature: (usize, usize),
    pub nullity: usize,
    /// Of the nondegenerate quotient.
    pub abs_det: String,
    pub invariant_factors: Vec<String>,
    /// `q` on the discriminant generators, mod 2.
    pub q_values: Vec<String>,
}

impl LatticeReport {
    pub fn new(source: &str, g: &GramMatrix) -> Self {
        let s = g.signature();
        let q = g.nondegenerate_quotient();
        let d = q.discriminant_data();
        LatticeReport {
            source: source.to_string(),
            size: g.size(),
            rank: s.positive + s.negative,
            signature: (s.positive, s.negative),
            nullity: s.nullity,
            abs_det: d.order().to_string(),
            invariant_factors: d.invariant_factors.iter().map(ToString::to_string).collect(),
            q_values: d.q_values.iter().map(ToString::to_string).collect(),
        }
    }
}

impl fmt::Display for LatticeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[String]| if v.is_empty() { "none".to_string() } else { format!("({})", v.join(", ")) };
        writeln!(f, "lattice {}", self.source)?;
        if self.nullity > 0 {
            writeln!(f, "size: {} (radical of rank {})", self.size, self.nullity)?;
        }
        writeln!(f, "rank: {}", self.rank)?;
        writeln!(f, "signature: ({}, {})", self.signature.0, self.signature.1)?;
        writeln!(f, "|det|: {}", self.abs_det)?;
        writeln!(f, "invariant factors: {}", list(&self.invariant_factors))?;
        writeln!(f, "q on generators (mod 2): {}", list(&self.q_values))
    }
}

impl Report for LatticeReport {}

#[derive(Debug, Serialize)]
pub struct GenusReport {
    pub left: String,
    pub right: String,
    pub genus_equal: bool,
}

impl fmt::Display for GenusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.genus_equal)
    }
}

impl Report for GenusReport {}

/// A lattice sum such as `U(2)+D4+E8`, or a graph file (the curve lattice,
/// reduced by its radical).
pub fn load_lattice(arg: &str) -> Result<GramMatrix, CliError> {
    if arg.ends_with(".graph") || std::path::Path::new(arg).is_file() {
        let file = load_graph(arg)?;
        return Ok(from_curve_config(&file.config));
    }
    parse_lattice_sum(arg).map_err(|e| CliError::Input(e.to_string()))
}

pub fn cmd_lattice(arg: &str) -> Result<LatticeReport, CliError> {
    Ok(LatticeReport::new(arg, &load_lattice(arg)?))
}

pub fn cmd_genus_equal(left: &str, right: &str) -> Result<GenusReport, CliError> {
    let (g1, g2) = (load_lattice(left)?, load_lattice(right)?);
    let (q1, q2) = (g1.nondegenerate_quotient(), g2.nondegenerate_quotient());
    let equal = genus_equal(&q1, &q2).map_err(|e| CliError::Verification(e.to_string()))?;
    Ok(GenusReport { left: left.to_string(), right: right.to_string(), genus_equal: equal })
}

/// Text or JSON rendering of a report.
pub fn render<R: Report>(report: &R, json: bool) -> String {
    if json {
        report.to_json()
    } else {
        let mut s = String::new();
        let _ = write!(s, "{report}");
        s
    }
}
