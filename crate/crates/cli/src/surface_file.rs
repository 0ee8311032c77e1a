//! Surface files: a Weierstrass model and named maps, in TOML.
//!
//! ```toml
//! field_order = 16
//! A = "t^3*(t^4-1)"
//! B = "0"
//!
//! [map.sigma]
//! x = "z^6*x"
//! y = "z^9*y"
//! t = "z^4*t"
//!
//! [map.tau]
//! compose = ["sigma", "inv(sigma_ast)"]
//! ```
//!
//! A map block gives either the images of `x`, `y`, `t` or a list of
//! other maps (optionally `inv(name)`), applied right to left like `∘`.

use std::collections::BTreeMap;
use std::sync::Arc;

use k3rigid_core::funfield::{FunctionField, SurfaceMap, DEFAULT_MAX_ORDER};
use k3rigid_core::polyring::{parse_expression, Expr, Var};
use k3rigid_core::surface::WeierstrassModel;
use k3rigid_core::{CyclotomicField, TPoly};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    field_order: u32,
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
    #[serde(default)]
    map: BTreeMap<String, RawMap>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    x: Option<String>,
    y: Option<String>,
    t: Option<String>,
    compose: Option<Vec<String>>,
}

#[derive(Debug, Clone)]
pub enum MapDef {
    Formulas([String; 3]),
    Compose(Vec<(String, bool)>),
}

#[derive(Debug)]
pub struct SurfaceFile {
    pub path: String,
    pub a_text: String,
    pub b_text: String,
    pub model: WeierstrassModel,
    pub maps: BTreeMap<String, MapDef>,
}

pub fn parse_surface_file(path: &str, src: &str) -> Result<SurfaceFile, CliError> {
    let input = |msg: String| CliError::Input(format!("{path}: {msg}"));
    let raw: RawSurface = toml::from_str(src).map_err(|e| input(format!("syntax error: {}", e.to_string().trim_end())))?;
    if raw.field_order == 0 {
        return Err(input("`field_order` must be positive".into()));
    }
    let field = CyclotomicField::new(raw.field_order);
    let poly_t = |key: &str, text: &str| -> Result<TPoly, CliError> {
        match parse_expression(text, &[Var::T], &field).map_err(|e| input(format!("syntax error in `{key}`: {e}")))? {
            Expr::Poly(p) => Ok(p.to_uni_t().expect("only t is allowed")),
            Expr::Ratio(_) => Err(input(format!("`{key}` must be a polynomial in t"))),
        }
    };
    let a = poly_t("A", &raw.a)?;
    let b = poly_t("B", &raw.b)?;
    let model = WeierstrassModel::new(field, a, b).map_err(|e| input(e.to_string()))?;

    let mut maps = BTreeMap::new();
    for (name, m) in raw.map {
        let def = match (m.x, m.y, m.t, m.compose) {
            (Some(x), Some(y), Some(t), None) => MapDef::Formulas([x, y, t]),
            (None, None, None, Some(list)) if !list.is_empty() => {
                let parts = list
                    .iter()
                    .map(|s| parse_map_ref(s).ok_or_else(|| input(format!("map `{name}`: bad reference `{s}`"))))
                    .collect::<Result<_, _>>()?;
                MapDef::Compose(parts)
            }
            _ => return Err(input(format!("map `{name}` needs either `x`, `y`, `t` or a nonempty `compose`"))),
        };
        maps.insert(name, def);
    }
    Ok(SurfaceFile { path: path.to_string(), a_text: raw.a, b_text: raw.b, model, maps })
}

/// `name` or `inv(name)`; the flag marks an inverse.
pub fn parse_map_ref(s: &str) -> Option<(String, bool)> {
    let s = s.trim();
    let (name, inverse) = match s.strip_prefix("inv(").and_then(|r| r.strip_suffix(')')) {
        Some(inner) => (inner.trim(), true),
        None => (s, false),
    };
    let ok = !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_');
    ok.then(|| (name.to_string(), inverse))
}

impl SurfaceFile {
    pub fn function_field(&self) -> Arc<FunctionField> {
        FunctionField::new(self.model.clone())
    }

    /// Builds the named map, resolving compositions.
    pub fn map(&self, ff: &Arc<FunctionField>, name: &str) -> Result<SurfaceMap, CliError> {
        self.resolve(ff, name, &mut Vec::new())
    }

    fn resolve(&self, ff: &Arc<FunctionField>, name: &str, stack: &mut Vec<String>) -> Result<SurfaceMap, CliError> {
        let input = |msg: String| CliError::Input(format!("{}: {msg}", self.path));
        let def = self.maps.get(name).ok_or_else(|| input(format!("no map named `{name}`")))?;
        if stack.iter().any(|s| s == name) {
            return Err(input(format!("map `{name}` is defined in terms of itself")));
        }
        stack.push(name.to_string());
        let result = match def {
            MapDef::Formulas([x, y, t]) => {
                SurfaceMap::parse(ff.clone(), [x, y, t]).map_err(|e| input(format!("map `{name}`: {e}")))
            }
            MapDef::Compose(parts) => {
                let mut acc = SurfaceMap::identity(ff.clone());
                for (part, inverse) in parts {
                    let mut m = self.resolve(ff, part, stack)?;
                    if *inverse {
                        m = m.inverse(DEFAULT_MAX_ORDER).map_err(|e| CliError::Verification(format!("inv({part}): {e}")))?;
                    }
                    acc = acc.compose(&m).map_err(|e| CliError::Verification(format!("map `{name}`: {e}")))?;
                }
                Ok(acc)
            }
        };
        stack.pop();
        result
    }
}
