//! Instance files.
//!
//! Text form: the first non-comment line is `n m k q`, followed by `m` lines
//! `u v cost capacity unsafe_flag base_flag` with flags in {0,1}. Anything
//! after `#` on a line is ignored. The JSON form uses the same field names:
//! `{"n":..,"m":..,"k":..,"q":..,"edges":[{"u":..,"v":..,"cost":..,
//! "capacity":..,"unsafe_flag":0,"base_flag":1}, ..]}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Edge, Multigraph};
use crate::{Error, Result, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Multigraph,
    pub k: u32,
    pub q: u32,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    u: usize,
    v: usize,
    cost: Weight,
    capacity: Weight,
    unsafe_flag: u8,
    base_flag: u8,
}

#[derive(Serialize, Deserialize)]
struct JsonInstance {
    n: usize,
    m: usize,
    k: u32,
    q: u32,
    edges: Vec<JsonEdge>,
}

fn flag(v: u64, line: usize, name: &str) -> Result<bool> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(Error::Parse {
            line,
            msg: format!("{name} must be 0 or 1, got {v}"),
        }),
    }
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        fn fields<const N: usize>(line: usize, l: &str) -> Result<[u64; N]> {
            let parsed: Vec<u64> = l
                .split_whitespace()
                .map(|t| {
                    t.parse::<u64>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("expected a non-negative integer, got {t:?}"),
                    })
                })
                .collect::<Result<_>>()?;
            parsed.try_into().map_err(|v: Vec<u64>| Error::Parse {
                line,
                msg: format!("expected {N} fields, got {}", v.len()),
            })
        }

        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header line `n m k q`".into(),
        })?;
        let [n, m, k, q] = fields::<4>(hl, header)?;
        let mut graph = Multigraph::new(n as usize).map_err(|e| Error::Parse {
            line: hl,
            msg: e.to_string(),
        })?;
        for _ in 0..m {
            let (ln, l) = lines.next().ok_or(Error::Parse {
                line: 0,
                msg: format!("expected {m} edge lines"),
            })?;
            let [u, v, cost, cap, uf, bf] = fields::<6>(ln, l)?;
            let e = Edge {
                u: u as usize,
                v: v as usize,
                cost,
                capacity: cap,
                is_unsafe: flag(uf, ln, "unsafe_flag")?,
                is_base: flag(bf, ln, "base_flag")?,
            };
            graph.add_edge(e).map_err(|e| Error::Parse {
                line: ln,
                msg: e.to_string(),
            })?;
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse {
                line: ln,
                msg: format!("more than {m} edge lines"),
            });
        }
        Ok(Instance {
            graph,
            k: k as u32,
            q: q as u32,
        })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: JsonInstance = serde_json::from_str(text)?;
        if raw.m != raw.edges.len() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("m = {} but {} edges listed", raw.m, raw.edges.len()),
            });
        }
        let mut graph = Multigraph::new(raw.n)?;
        for (i, e) in raw.edges.into_iter().enumerate() {
            graph.add_edge(Edge {
                u: e.u,
                v: e.v,
                cost: e.cost,
                capacity: e.capacity,
                is_unsafe: flag(e.unsafe_flag.into(), i + 1, "unsafe_flag")?,
                is_base: flag(e.base_flag.into(), i + 1, "base_flag")?,
            })?;
        }
        Ok(Instance {
            graph,
            k: raw.k,
            q: raw.q,
        })
    }

    pub fn to_text(&self) -> String {
        let g = &self.graph;
        let mut out = format!("{} {} {} {}\n", g.node_count(), g.edge_count(), self.k, self.q);
        for e in g.edges() {
            let _ = writeln!(
                out,
                "{} {} {} {} {} {}",
                e.u, e.v, e.cost, e.capacity, e.is_unsafe as u8, e.is_base as u8
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let g = &self.graph;
        let raw = JsonInstance {
            n: g.node_count(),
            m: g.edge_count(),
            k: self.k,
            q: self.q,
            edges: g
                .edges()
                .iter()
                .map(|e| JsonEdge {
                    u: e.u,
                    v: e.v,
                    cost: e.cost,
                    capacity: e.capacity,
                    unsafe_flag: e.is_unsafe as u8,
                    base_flag: e.is_base as u8,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("instance serializes")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# C4 with two chords\n4 6 4 0\n0 1 0 1 0 1\n1 2 0 1 1 1 # unsafe base edge\n2 3 0 1 0 1\n3 0 0 1 0 1\n\n0 2 1 2 0 0\n1 3 1 2 0 0\n";

    #[test]
    fn parses_text_with_comments() {
        let inst = Instance::parse(SAMPLE).unwrap();
        assert_eq!(inst.k, 4);
        assert_eq!(inst.graph.edge_count(), 6);
        assert!(inst.graph.edge(1).is_unsafe);
        assert!(inst.graph.edge(1).is_base);
        assert_eq!(inst.graph.edge(4).capacity, 2);
        assert!(!inst.graph.edge(5).is_base);
    }

    #[test]
    fn text_and_json_agree() {
        let inst = Instance::parse(SAMPLE).unwrap();
        assert_eq!(Instance::parse(&inst.to_json()).unwrap(), inst);
        assert_eq!(Instance::parse(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(Instance::parse("3 1 1 0\n0 1 1 1 2 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(Instance::parse("3 2 1 0\n0 1 1 1 0 0\n").is_err());
        assert!(Instance::parse("3 1 1 0\n0 0 1 1 0 0\n").is_err());
        assert!(Instance::parse("3 1 1\n").is_err());
        assert!(Instance::parse("").is_err());
    }
}
