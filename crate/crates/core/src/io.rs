//! JSON instance files.
//!
//! Graph instances:
//! `{"name": .., "vertices": n, "edges": [{"id", "u", "v", "dist": {"type": "exp", "rate": r}}]}`,
//! where `dist` may also be `{"type": "discrete", "atoms": [[value, prob], ..]}`.
//!
//! Matroid instances are either `{"type": "graphic", "graph": <graph instance>}`,
//! with rates taken from the edge distributions or an optional `"rates"` map
//! keyed by edge id, `{"type": "uniform", "k": k, "n": n, "rates": [..]}`, or
//! `{"type": "binary", "columns": [..], "rates": [..]}` with GF(2) column
//! vectors written as integers.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::matroid::{Matroid, MatroidInstance};
use crate::stochastic::{Instance, WeightDistribution};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
enum DistFile {
    #[serde(rename = "exp")]
    Exp { rate: f64 },
    #[serde(rename = "discrete")]
    Discrete { atoms: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    id: String,
    u: usize,
    v: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dist: Option<DistFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    #[serde(default)]
    name: String,
    vertices: usize,
    edges: Vec<EdgeFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum MatroidFile {
    Graphic {
        graph: GraphFile,
        #[serde(default)]
        rates: Option<BTreeMap<String, f64>>,
    },
    Uniform { k: usize, n: usize, rates: Vec<f64> },
    Binary { columns: Vec<u64>, rates: Vec<f64> },
}

/// How a matroid was built, for writing it back out.
#[derive(Debug, Clone, PartialEq)]
pub enum MatroidSource {
    Graphic(MultiGraph),
    Uniform { k: usize, n: usize },
    Binary(Vec<u64>),
}

impl MatroidSource {
    pub fn build(&self) -> Result<Matroid> {
        match self {
            MatroidSource::Graphic(g) => Matroid::graphic(g),
            MatroidSource::Uniform { k, n } => Matroid::uniform(*k, *n),
            MatroidSource::Binary(columns) => Matroid::binary(columns.clone()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            MatroidSource::Graphic(g) => format!("graphic({}v,{}e)", g.vertex_count(), g.edge_count()),
            MatroidSource::Uniform { k, n } => format!("U({k},{n})"),
            MatroidSource::Binary(columns) => format!("binary({})", columns.len()),
        }
    }
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    })
}

impl GraphFile {
    fn graph(&self) -> Result<MultiGraph> {
        MultiGraph::new(self.vertices, self.edges.iter().map(|e| (e.id.as_str(), e.u, e.v)))
    }
}

fn to_dist(edge: &EdgeFile) -> Result<WeightDistribution> {
    match &edge.dist {
        Some(DistFile::Exp { rate }) => WeightDistribution::exponential(*rate),
        Some(DistFile::Discrete { atoms }) => WeightDistribution::discrete(atoms.clone()),
        None => Err(Error::invalid(format!("edge {} has no distribution", edge.id))),
    }
    .map_err(|e| Error::invalid(format!("edge {}: {e}", edge.id)))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: GraphFile = parse(text)?;
    let graph = file.graph()?;
    let dists = file.edges.iter().map(to_dist).collect::<Result<Vec<_>>>()?;
    Ok(Instance::new(graph, dists)?.with_name(file.name))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&read(path.as_ref())?)
}

pub fn instance_to_json(inst: &Instance) -> String {
    let file = GraphFile {
        name: inst.name().to_string(),
        vertices: inst.graph().vertex_count(),
        edges: inst
            .graph()
            .edges()
            .iter()
            .zip(inst.dists())
            .map(|(e, d)| EdgeFile {
                id: e.id.0.clone(),
                u: e.u,
                v: e.v,
                dist: Some(match d {
                    WeightDistribution::Exponential { rate } => DistFile::Exp { rate: *rate },
                    WeightDistribution::Discrete { atoms } => DistFile::Discrete { atoms: atoms.clone() },
                }),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("instance serializes")
}

pub fn write_instance(path: impl AsRef<Path>, inst: &Instance) -> std::io::Result<()> {
    std::fs::write(path, instance_to_json(inst) + "\n")
}

pub fn parse_matroid_instance(text: &str) -> Result<MatroidInstance> {
    match parse::<MatroidFile>(text)? {
        MatroidFile::Graphic { graph: file, rates } => {
            let graph = file.graph()?;
            let rates = match rates {
                Some(map) => {
                    for id in map.keys() {
                        if graph.position(&id.as_str().into()).is_none() {
                            return Err(Error::UnknownEdge(id.as_str().into()));
                        }
                    }
                    file.edges
                        .iter()
                        .map(|e| {
                            map.get(&e.id)
                                .copied()
                                .ok_or_else(|| Error::invalid(format!("no rate for edge {}", e.id)))
                        })
                        .collect::<Result<Vec<_>>>()?
                }
                None => file
                    .edges
                    .iter()
                    .map(|e| to_dist(e)?.rate().ok_or(Error::NonExponential))
                    .collect::<Result<Vec<_>>>()?,
            };
            MatroidInstance::new(Matroid::graphic(&graph)?, rates)
        }
        MatroidFile::Uniform { k, n, rates } => MatroidInstance::new(Matroid::uniform(k, n)?, rates),
        MatroidFile::Binary { columns, rates } => MatroidInstance::new(Matroid::binary(columns)?, rates),
    }
}

/// Matroid instance file for `source` with one rate per element.
pub fn matroid_instance_to_json(source: &MatroidSource, rates: &[f64]) -> String {
    let value = match source {
        MatroidSource::Graphic(g) => {
            let graph = GraphFile {
                name: String::new(),
                vertices: g.vertex_count(),
                edges: g
                    .edges()
                    .iter()
                    .map(|e| EdgeFile {
                        id: e.id.0.clone(),
                        u: e.u,
                        v: e.v,
                        dist: None,
                    })
                    .collect(),
            };
            let keyed: BTreeMap<&str, f64> = g.edge_ids().map(|e| e.as_str()).zip(rates.iter().copied()).collect();
            serde_json::json!({"type": "graphic", "graph": graph, "rates": keyed})
        }
        MatroidSource::Uniform { k, n } => serde_json::json!({"type": "uniform", "k": k, "n": n, "rates": rates}),
        MatroidSource::Binary(columns) => serde_json::json!({"type": "binary", "columns": columns, "rates": rates}),
    };
    serde_json::to_string_pretty(&value).expect("matroid serializes")
}

pub fn read_matroid_instance(path: impl AsRef<Path>) -> Result<MatroidInstance> {
    parse_matroid_instance(&read(path.as_ref())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const K3: &str = r#"{"name": "k3", "vertices": 3, "edges": [
        {"id": "a", "u": 0, "v": 1, "dist": {"type": "exp", "rate": 1.0}},
        {"id": "b", "u": 1, "v": 2, "dist": {"type": "exp", "rate": 2.5}},
        {"id": "c", "u": 0, "v": 2, "dist": {"type": "discrete", "atoms": [[0.0, 0.5], [4.0, 0.5]]}}
    ]}"#;

    #[test]
    fn round_trip() {
        let inst = parse_instance(K3).unwrap();
        assert_eq!(inst.name(), "k3");
        assert_eq!(inst.graph().edge_count(), 3);
        assert!(!inst.is_exponential());
        let again = parse_instance(&instance_to_json(&inst)).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_instance("{\"vertices\": 2,\n \"edges\": [}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let bad_rate = K3.replace("\"rate\": 1.0", "\"rate\": 0.0");
        assert!(matches!(parse_instance(&bad_rate), Err(Error::InvalidInstance(_))));
        let bad_prob = K3.replace("[4.0, 0.5]", "[4.0, 0.4]");
        assert!(matches!(parse_instance(&bad_prob), Err(Error::InvalidInstance(_))));
        let looped = K3.replace("\"u\": 1, \"v\": 2", "\"u\": 1, \"v\": 1");
        assert!(matches!(parse_instance(&looped), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn matroid_files() {
        let u = parse_matroid_instance(r#"{"type": "uniform", "k": 1, "n": 3, "rates": [1, 2, 3]}"#).unwrap();
        assert_eq!(u.matroid().len(), 3);
        let g = format!(r#"{{"type": "graphic", "graph": {}}}"#, K3.replace("\"type\": \"discrete\", \"atoms\": [[0.0, 0.5], [4.0, 0.5]]", "\"type\": \"exp\", \"rate\": 3.0"));
        let g = parse_matroid_instance(&g).unwrap();
        assert_eq!(g.rates(), &[1.0, 2.5, 3.0]);
        let keyed = format!(r#"{{"type": "graphic", "graph": {K3}, "rates": {{"a": 1, "b": 2, "c": 4}}}}"#);
        assert_eq!(parse_matroid_instance(&keyed).unwrap().rates(), &[1.0, 2.0, 4.0]);
        let non_exp = format!(r#"{{"type": "graphic", "graph": {K3}}}"#);
        assert_eq!(parse_matroid_instance(&non_exp).unwrap_err(), Error::NonExponential);
        assert!(parse_matroid_instance(r#"{"type": "uniform", "k": 0, "n": 1, "rates": [1]}"#).is_err());
    }

    #[test]
    fn matroid_round_trip() {
        let g = MultiGraph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        for (source, rates) in [
            (MatroidSource::Graphic(g), vec![1.0, 0.5, 3.0]),
            (MatroidSource::Uniform { k: 2, n: 4 }, vec![1.0, 2.0, 3.0, 4.0]),
            (MatroidSource::Binary((1..8).collect()), vec![1.0; 7]),
        ] {
            let inst = parse_matroid_instance(&matroid_instance_to_json(&source, &rates)).unwrap();
            assert_eq!(inst.rates(), rates.as_slice());
            assert_eq!(inst.matroid().labels(), source.build().unwrap().labels());
        }
    }
}
