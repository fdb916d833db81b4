use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use super::{Point, ToricDiagram};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphNode {
    pub id: usize,
    /// Schematic position: the barycenter of the dual triangle.
    pub pos: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    /// The shared triangle edge this graph edge crosses.
    pub dual: [Point; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphRay {
    pub node: usize,
    /// Outward primitive normal of the boundary segment.
    pub direction: Point,
    pub dual: [Point; 2],
}

/// Planar graph dual to the triangulation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToricGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub rays: Vec<GraphRay>,
}

impl ToricGraph {
    /// `true` when every node meets exactly three edges or rays.
    pub fn is_trivalent(&self) -> bool {
        let mut deg = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            deg[e.from] += 1;
            deg[e.to] += 1;
        }
        for r in &self.rays {
            deg[r.node] += 1;
        }
        deg.iter().all(|&d| d == 3)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

fn key(a: Point, b: Point) -> [Point; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

pub fn emit_toric_graph(d: &ToricDiagram) -> ToricGraph {
    let nodes = d
        .triangles
        .iter()
        .enumerate()
        .map(|(id, t)| GraphNode {
            id,
            pos: [
                (t[0].0 + t[1].0 + t[2].0) as f64 / 3.0,
                (t[0].1 + t[1].1 + t[2].1) as f64 / 3.0,
            ],
        })
        .collect();
    let mut owners: BTreeMap<[Point; 2], Vec<(usize, [Point; 2])>> = BTreeMap::new();
    for (i, t) in d.triangles.iter().enumerate() {
        for j in 0..3 {
            let (a, b) = (t[j], t[(j + 1) % 3]);
            owners.entry(key(a, b)).or_default().push((i, [a, b]));
        }
    }
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for (k, own) in owners {
        match own.as_slice() {
            [(i, _), (j, _)] => edges.push(GraphEdge {
                from: *i,
                to: *j,
                dual: k,
            }),
            [(i, oriented)] => {
                let on_boundary = d.edges().iter().any(|e| {
                    super::cross(e[0], e[1], oriented[0]) == 0 && super::cross(e[0], e[1], oriented[1]) == 0
                });
                if on_boundary {
                    rays.push(GraphRay {
                        node: *i,
                        direction: ToricDiagram::outward_normal(oriented),
                        dual: k,
                    });
                }
            }
            _ => {}
        }
    }
    ToricGraph { nodes, edges, rays }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::validate_diagram;

    #[test]
    fn c3_graph() {
        let d = validate_diagram(&[(0, 0), (1, 0), (0, 1)], &[[(0, 0), (1, 0), (0, 1)]]).unwrap();
        let g = emit_toric_graph(&d);
        assert_eq!((g.nodes.len(), g.edges.len(), g.rays.len()), (1, 0, 3));
        assert!(g.is_trivalent());
    }

    #[test]
    fn conifold_graph() {
        let d = validate_diagram(
            &[(0, 0), (1, 0), (1, 1), (0, 1)],
            &[[(0, 0), (1, 0), (1, 1)], [(0, 0), (1, 1), (0, 1)]],
        )
        .unwrap();
        let g = emit_toric_graph(&d);
        assert_eq!((g.nodes.len(), g.edges.len(), g.rays.len()), (2, 1, 4));
        assert!(g.is_trivalent());
    }
}
