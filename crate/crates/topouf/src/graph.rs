//! Decoding graphs: check nodes as vertices, error mechanisms as edges.
//!
//! For a single round (code capacity) every edge is a data qubit; each data
//! qubit appears as exactly one edge in G_X and one in G_Z. Dangling check
//! slots on open-boundary codes are terminated by one distinct virtual vertex
//! per dangling edge. Space-time graphs repeat the single-round graph per
//! layer and link corresponding check nodes of consecutive layers with
//! measurement edges; the final round is measured perfectly, so no
//! measurement edges follow the last layer.

use crate::code::{Basis, TopologicalCode};
use serde::{Deserialize, Serialize};

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    /// Check index within its basis for real vertices; virtual vertices get
    /// fresh ids past the real range.
    pub check_id: u32,
    pub is_virtual: bool,
    pub layer: u32,
}

/// What kind of error a grown edge asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeMechanism {
    /// Data-qubit error at a given round (0-based; always 0 for code capacity).
    DataQubit { qubit: u32, round: u32 },
    /// Measurement bit-flip of a check at a given round.
    Measurement { check: u32, round: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub mechanism: EdgeMechanism,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecodingGraph {
    pub basis: Basis,
    pub rounds: u32,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Number of real (non-virtual) checks per layer.
    pub checks_per_layer: u32,
    /// Vertices per layer including virtuals.
    pub vertices_per_layer: u32,
    /// adjacency[v] lists (edge, opposite endpoint) pairs in edge order
    #[serde(skip)]
    pub adjacency: Vec<Vec<(EdgeId, VertexId)>>,
    /// data_edge[round][qubit] -> edge id
    #[serde(skip)]
    pub data_edge: Vec<Vec<EdgeId>>,
    /// meas_edge[round][check] -> edge id; rounds - 1 entries
    #[serde(skip)]
    pub meas_edge: Vec<Vec<EdgeId>>,
}

impl DecodingGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn is_virtual(&self, v: VertexId) -> bool {
        self.vertices[v as usize].is_virtual
    }

    /// Vertex id of real check `check` at `layer`.
    #[inline]
    pub fn check_vertex(&self, check: u32, layer: u32) -> VertexId {
        debug_assert!(check < self.checks_per_layer);
        layer * self.vertices_per_layer + check
    }

    /// Edge carrying the data-qubit mechanism (qubit, round).
    #[inline]
    pub fn qubit_edge(&self, qubit: u32, round: u32) -> EdgeId {
        self.data_edge[round as usize][qubit as usize]
    }

    /// Edge carrying the measurement mechanism (check, round).
    #[inline]
    pub fn measurement_edge(&self, check: u32, round: u32) -> EdgeId {
        self.meas_edge[round as usize][check as usize]
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let edge = &self.edges[e as usize];
        (edge.u, edge.v)
    }
}

/// Builds G_X or G_Z for `code`, optionally extended over `rounds` layers of
/// syndrome extraction.
pub fn build_decoding_graph(code: &TopologicalCode, basis: Basis, rounds: u32) -> DecodingGraph {
    assert!(rounds >= 1, "at least one round");
    let stabs = code.stabilizers(basis);
    let m = stabs.len() as u32;
    let n = code.n();

    // per-qubit check slots in this basis: up to two, dangling slots become
    // virtual vertices
    let mut slots: Vec<Vec<u32>> = vec![Vec::with_capacity(2); n];
    for (check, support) in stabs.iter().enumerate() {
        for &q in support {
            slots[q as usize].push(check as u32);
        }
    }
    let mut num_virtual = 0u32;
    for s in &slots {
        assert!(s.len() <= 2, "a qubit touches more than two {basis:?}");
        num_virtual += 2 - s.len() as u32;
    }
    let vertices_per_layer = m + num_virtual;

    let mut vertices = Vec::with_capacity((vertices_per_layer * rounds) as usize);
    let mut edges = Vec::new();
    let mut data_edge = vec![vec![0 as EdgeId; n]; rounds as usize];
    let mut meas_edge = vec![vec![0 as EdgeId; m as usize]; rounds as usize - 1];

    for layer in 0..rounds {
        for check in 0..m {
            vertices.push(Vertex {
                check_id: check,
                is_virtual: false,
                layer,
            });
        }
        // one distinct virtual vertex per dangling slot, allocated in qubit order
        let mut next_virtual = m;
        let layer_base = layer * vertices_per_layer;
        for (q, s) in slots.iter().enumerate() {
            let (u, v) = match s.as_slice() {
                [a, b] => (layer_base + a, layer_base + b),
                [a] => {
                    let vv = layer_base + next_virtual;
                    next_virtual += 1;
                    (layer_base + a, vv)
                }
                [] => {
                    let v1 = layer_base + next_virtual;
                    let v2 = layer_base + next_virtual + 1;
                    next_virtual += 2;
                    (v1, v2)
                }
                _ => unreachable!(),
            };
            data_edge[layer as usize][q] = edges.len() as EdgeId;
            edges.push(Edge {
                u,
                v,
                mechanism: EdgeMechanism::DataQubit {
                    qubit: q as u32,
                    round: layer,
                },
            });
        }
        for _ in m..next_virtual {
            vertices.push(Vertex {
                check_id: u32::MAX,
                is_virtual: true,
                layer,
            });
        }
        debug_assert_eq!(next_virtual, vertices_per_layer);
        // temporal edges up from the previous layer
        if layer > 0 {
            for check in 0..m {
                meas_edge[(layer - 1) as usize][check as usize] = edges.len() as EdgeId;
                edges.push(Edge {
                    u: (layer - 1) * vertices_per_layer + check,
                    v: layer_base + check,
                    mechanism: EdgeMechanism::Measurement {
                        check,
                        round: layer - 1,
                    },
                });
            }
        }
    }

    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (i, e) in edges.iter().enumerate() {
        adjacency[e.u as usize].push((i as EdgeId, e.v));
        adjacency[e.v as usize].push((i as EdgeId, e.u));
    }

    DecodingGraph {
        basis,
        rounds,
        vertices,
        edges,
        checks_per_layer: m,
        vertices_per_layer,
        adjacency,
        data_edge,
        meas_edge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_code, CodeFamily, CodeSpec};

    #[test]
    fn surface_d4_gx_shape() {
        let code = build_code(CodeSpec::new(CodeFamily::Surface, 4).unwrap());
        let g = build_decoding_graph(&code, Basis::XChecks, 1);
        let real = g.vertices.iter().filter(|v| !v.is_virtual).count();
        let virt = g.vertices.iter().filter(|v| v.is_virtual).count();
        assert_eq!(real, 12);
        assert_eq!(virt, 8); // d virtuals on each of the two X boundaries
        assert_eq!(g.num_edges(), 25);
        assert!(g
            .edges
            .iter()
            .all(|e| matches!(e.mechanism, EdgeMechanism::DataQubit { .. })));
    }

    #[test]
    fn rotated_toric_d4_gz_shape() {
        let code = build_code(CodeSpec::new(CodeFamily::RotatedToric, 4).unwrap());
        let g = build_decoding_graph(&code, Basis::ZChecks, 1);
        assert_eq!(g.num_vertices(), 8);
        assert_eq!(g.num_edges(), 16);
        assert!(g.vertices.iter().all(|v| !v.is_virtual));
    }

    #[test]
    fn toric_graphs_have_no_virtuals_and_are_4_regular() {
        let code = build_code(CodeSpec::new(CodeFamily::Toric, 5).unwrap());
        for basis in [Basis::XChecks, Basis::ZChecks] {
            let g = build_decoding_graph(&code, basis, 1);
            assert_eq!(g.num_vertices(), 25);
            assert_eq!(g.num_edges(), 50);
            for v in 0..g.num_vertices() {
                assert_eq!(g.adjacency[v].len(), 4);
            }
        }
    }

    #[test]
    fn each_qubit_is_one_edge_per_graph() {
        for (family, d) in [
            (CodeFamily::Toric, 4),
            (CodeFamily::RotatedToric, 6),
            (CodeFamily::Surface, 3),
            (CodeFamily::RotatedSurface, 5),
        ] {
            let code = build_code(CodeSpec::new(family, d).unwrap());
            for basis in [Basis::XChecks, Basis::ZChecks] {
                let g = build_decoding_graph(&code, basis, 1);
                let mut seen = vec![0u8; code.n()];
                for e in &g.edges {
                    match e.mechanism {
                        EdgeMechanism::DataQubit { qubit, round } => {
                            assert_eq!(round, 0);
                            seen[qubit as usize] += 1;
                        }
                        EdgeMechanism::Measurement { .. } => panic!("no temporal edges expected"),
                    }
                }
                assert!(seen.iter().all(|&c| c == 1), "{family:?} {basis:?}");
            }
        }
    }

    #[test]
    fn vertex_degree_matches_stabilizer_weight() {
        for (family, d) in [
            (CodeFamily::Surface, 4),
            (CodeFamily::RotatedSurface, 5),
            (CodeFamily::RotatedToric, 4),
        ] {
            let code = build_code(CodeSpec::new(family, d).unwrap());
            for basis in [Basis::XChecks, Basis::ZChecks] {
                let g = build_decoding_graph(&code, basis, 1);
                for (v, info) in g.vertices.iter().enumerate() {
                    if !info.is_virtual {
                        let weight = code.stabilizers(basis)[info.check_id as usize].len();
                        assert_eq!(g.adjacency[v].len(), weight);
                    } else {
                        assert_eq!(g.adjacency[v].len(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn spacetime_rotated_surface_d3_four_rounds() {
        let code = build_code(CodeSpec::new(CodeFamily::RotatedSurface, 3).unwrap());
        let g = build_decoding_graph(&code, Basis::XChecks, 4);
        assert_eq!(g.vertices.iter().map(|v| v.layer).max(), Some(3));
        // measurement edges exist between consecutive layer pairs only,
        // rounds 0-1, 1-2, 2-3
        let mut meas_rounds: Vec<u32> = g
            .edges
            .iter()
            .filter_map(|e| match e.mechanism {
                EdgeMechanism::Measurement { round, .. } => Some(round),
                _ => None,
            })
            .collect();
        meas_rounds.sort_unstable();
        meas_rounds.dedup();
        assert_eq!(meas_rounds, vec![0, 1, 2]);
        // bijection onto {qubits x rounds} union {checks x (rounds - 1)}
        let data_count = g
            .edges
            .iter()
            .filter(|e| matches!(e.mechanism, EdgeMechanism::DataQubit { .. }))
            .count();
        let meas_count = g.num_edges() - data_count;
        assert_eq!(data_count, code.n() * 4);
        assert_eq!(meas_count, code.x_stabilizers.len() * 3);
        let mut mechs: Vec<EdgeMechanism> = g.edges.iter().map(|e| e.mechanism).collect();
        mechs.sort_by_key(|m| match *m {
            EdgeMechanism::DataQubit { qubit, round } => (0, round, qubit),
            EdgeMechanism::Measurement { check, round } => (1, round, check),
        });
        mechs.dedup();
        assert_eq!(mechs.len(), g.num_edges());
    }

    #[test]
    fn spacetime_temporal_degree() {
        let code = build_code(CodeSpec::new(CodeFamily::RotatedToric, 4).unwrap());
        let g = build_decoding_graph(&code, Basis::XChecks, 3);
        for (v, info) in g.vertices.iter().enumerate() {
            let weight = code.x_stabilizers[info.check_id as usize].len();
            let temporal = if info.layer == 0 || info.layer == 2 { 1 } else { 2 };
            assert_eq!(g.adjacency[v].len(), weight + temporal);
        }
    }
}
