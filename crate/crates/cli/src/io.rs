use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use homforge::graph::{parse_graphs, Graph, GraphHom, GraphRef};

use crate::demos::ReflectInstance;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } | CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
        }
    }
}

fn input_err(path: &Path, msg: impl ToString) -> CliError {
    CliError::Input { path: path.display().to_string(), msg: msg.to_string() }
}

pub fn read_graphs(path: &Path) -> Result<Vec<Graph>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(path, e))?;
    let graphs = parse_graphs(&text).map_err(|e| input_err(path, e))?;
    if graphs.is_empty() {
        return Err(input_err(path, "no graphs in file"));
    }
    Ok(graphs)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub id: String,
    pub dom: String,
    pub cod: String,
    pub map: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReflectSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub x: String,
    pub s: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub s: Vec<String>,
    pub d: Vec<String>,
}

/// Graphs and maps by id, reflection problems and an orthogonality grid.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub graphs: Vec<Graph>,
    #[serde(default)]
    pub morphisms: Vec<MorphismSpec>,
    #[serde(default)]
    pub reflect: Vec<ReflectSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub cap: Option<usize>,
}

/// An experiment with every id resolved.
pub struct Resolved {
    pub graphs: BTreeMap<String, GraphRef>,
    pub morphisms: BTreeMap<String, GraphHom>,
    pub instances: Vec<ReflectInstance>,
    pub grid: Option<(Vec<GraphHom>, Vec<Graph>)>,
    pub cap: Option<usize>,
}

pub fn read_experiment(path: &Path) -> Result<Resolved, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(path, e))?;
    let exp: Experiment = serde_json::from_str(&text).map_err(|e| input_err(path, e))?;
    resolve(exp).map_err(|msg| input_err(path, msg))
}

pub fn resolve(exp: Experiment) -> Result<Resolved, String> {
    let mut graphs = BTreeMap::new();
    for g in exp.graphs {
        let id = g.id().to_string();
        if graphs.insert(id.clone(), Arc::new(g)).is_some() {
            return Err(format!("duplicate graph id `{id}`"));
        }
    }
    let graph = |id: &str| graphs.get(id).cloned().ok_or_else(|| format!("unknown graph id `{id}`"));
    let mut morphisms = BTreeMap::new();
    for m in exp.morphisms {
        let f = GraphHom::new(graph(&m.dom)?, graph(&m.cod)?, m.map).map_err(|e| format!("morphism `{}`: {e}", m.id))?;
        if morphisms.insert(m.id.clone(), f).is_some() {
            return Err(format!("duplicate morphism id `{}`", m.id));
        }
    }
    let morphism = |id: &str| morphisms.get(id).cloned().ok_or_else(|| format!("unknown morphism id `{id}`"));
    let mut instances = Vec::new();
    for (k, r) in exp.reflect.iter().enumerate() {
        let s = r.s.iter().map(|id| morphism(id)).collect::<Result<_, _>>()?;
        let name = r.name.clone().unwrap_or_else(|| format!("instance-{k}"));
        instances.push(ReflectInstance { name, x: (*graph(&r.x)?).clone(), s });
    }
    let grid = match exp.grid {
        Some(gs) => {
            let s = gs.s.iter().map(|id| morphism(id)).collect::<Result<_, _>>()?;
            let d = gs.d.iter().map(|id| graph(id).map(|g| (*g).clone())).collect::<Result<_, _>>()?;
            Some((s, d))
        }
        None => None,
    };
    Ok(Resolved { graphs, morphisms, instances, grid, cap: exp.cap })
}
