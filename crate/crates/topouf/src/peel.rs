//! Peeling decoder for erasures: spanning forest, then leaf peeling.
//!
//! The forest is grown by BFS over the erasure subgraph, seeded from virtual
//! vertices first (so any component containing one is rooted there), then
//! from the lowest-index remaining vertices. Peeling walks the visit order
//! backwards, so every vertex is a leaf when processed: a nontrivial leaf
//! puts its parent edge into the correction and hands its syndrome bit to
//! the parent; virtual vertices absorb whatever reaches them.

use crate::graph::{DecodingGraph, EdgeId, VertexId};
use crate::Error;

const NIL: u32 = u32::MAX;

/// Spanning forest over an erasure subgraph; exposed for inspection.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    /// roots in the order their trees were grown
    pub roots: Vec<VertexId>,
    /// (vertex, parent edge) pairs in BFS visit order; roots carry no entry
    pub parent_edges: Vec<(VertexId, EdgeId)>,
}

/// Reusable peeling scratch sized to one decoding graph.
pub struct Peeler {
    edge_stamp: Vec<u64>,
    visit_stamp: Vec<u64>,
    synd_stamp: Vec<u64>,
    synd: Vec<bool>,
    parent_edge: Vec<EdgeId>,
    parent_vertex: Vec<VertexId>,
    order: Vec<VertexId>,
    vertices: Vec<VertexId>,
    roots: Vec<VertexId>,
    stamp: u64,
}

impl Peeler {
    pub fn new(graph: &DecodingGraph) -> Self {
        Peeler {
            edge_stamp: vec![0; graph.num_edges()],
            visit_stamp: vec![0; graph.num_vertices()],
            synd_stamp: vec![0; graph.num_vertices()],
            synd: vec![false; graph.num_vertices()],
            parent_edge: vec![NIL; graph.num_vertices()],
            parent_vertex: vec![NIL; graph.num_vertices()],
            order: Vec::new(),
            vertices: Vec::new(),
            roots: Vec::new(),
            stamp: 0,
        }
    }

    #[inline]
    fn synd_get(&self, v: VertexId) -> bool {
        self.synd_stamp[v as usize] == self.stamp && self.synd[v as usize]
    }

    #[inline]
    fn synd_flip(&mut self, v: VertexId) {
        if self.synd_stamp[v as usize] == self.stamp {
            self.synd[v as usize] = !self.synd[v as usize];
        } else {
            self.synd_stamp[v as usize] = self.stamp;
            self.synd[v as usize] = true;
        }
    }

    /// Computes a correction within `erasure_edges` whose syndrome equals
    /// `nontrivial` exactly, appending the chosen edges to `correction`.
    pub fn peel(
        &mut self,
        graph: &DecodingGraph,
        erasure_edges: &[EdgeId],
        nontrivial: &[VertexId],
        correction: &mut Vec<EdgeId>,
    ) -> Result<(), Error> {
        self.build_forest(graph, erasure_edges);

        for &v in nontrivial {
            if self.visit_stamp[v as usize] != self.stamp {
                return Err(Error::MalformedInput(format!(
                    "nontrivial vertex {v} lies outside the erasure subgraph"
                )));
            }
            if graph.is_virtual(v) {
                return Err(Error::MalformedInput(format!(
                    "nontrivial vertex {v} is virtual"
                )));
            }
            self.synd_flip(v);
        }

        // peel in reverse visit order: children before parents
        for i in (0..self.order.len()).rev() {
            let v = self.order[i];
            let pe = self.parent_edge[v as usize];
            if pe == NIL {
                continue; // root
            }
            if self.synd_get(v) && !graph.is_virtual(v) {
                correction.push(pe);
                let p = self.parent_vertex[v as usize];
                self.synd_flip(p);
            }
        }
        for i in 0..self.roots.len() {
            let r = self.roots[i];
            if self.synd_get(r) && !graph.is_virtual(r) {
                return Err(Error::UnmatchablePeel);
            }
        }
        Ok(())
    }

    fn build_forest(&mut self, graph: &DecodingGraph, erasure_edges: &[EdgeId]) {
        self.stamp += 1;
        let present = self.stamp;
        self.vertices.clear();
        self.order.clear();
        self.roots.clear();
        for &e in erasure_edges {
            if self.edge_stamp[e as usize] == present {
                continue;
            }
            self.edge_stamp[e as usize] = present;
            let (u, v) = graph.endpoints(e);
            for w in [u, v] {
                if self.visit_stamp[w as usize] != present {
                    self.visit_stamp[w as usize] = present;
                    self.vertices.push(w);
                }
            }
        }
        self.vertices.sort_unstable();
        self.stamp += 1;
        let visited = self.stamp;

        // seeds: virtual vertices first, then lowest index
        for phase in 0..2 {
            for idx in 0..self.vertices.len() {
                let seed = self.vertices[idx];
                if (phase == 0) != graph.is_virtual(seed) {
                    continue;
                }
                if self.visit_stamp[seed as usize] == visited {
                    continue;
                }
                self.visit_stamp[seed as usize] = visited;
                self.parent_edge[seed as usize] = NIL;
                self.parent_vertex[seed as usize] = NIL;
                self.roots.push(seed);
                let mut head = self.order.len();
                self.order.push(seed);
                while head < self.order.len() {
                    let v = self.order[head];
                    head += 1;
                    for &(e, w) in &graph.adjacency[v as usize] {
                        if self.edge_stamp[e as usize] != present {
                            continue;
                        }
                        if self.visit_stamp[w as usize] == visited {
                            continue;
                        }
                        self.visit_stamp[w as usize] = visited;
                        self.parent_edge[w as usize] = e;
                        self.parent_vertex[w as usize] = v;
                        self.order.push(w);
                    }
                }
            }
        }
        debug_assert_eq!(self.order.len(), self.vertices.len());
    }

    /// Forest snapshot of the most recent peel, for tests and debugging.
    pub fn forest(&self) -> SpanningForest {
        SpanningForest {
            roots: self.roots.clone(),
            parent_edges: self
                .order
                .iter()
                .filter(|&&v| self.parent_edge[v as usize] != NIL)
                .map(|&v| (v, self.parent_edge[v as usize]))
                .collect(),
        }
    }
}

/// One-shot peeling over fresh scratch.
pub fn peel(
    graph: &DecodingGraph,
    erasure_edges: &[EdgeId],
    nontrivial: &[VertexId],
) -> Result<Vec<EdgeId>, Error> {
    let mut peeler = Peeler::new(graph);
    let mut correction = Vec::new();
    peeler.peel(graph, erasure_edges, nontrivial, &mut correction)?;
    Ok(correction)
}

/// Spanning forest over an erasure subgraph, without peeling.
pub fn build_spanning_forest(graph: &DecodingGraph, erasure_edges: &[EdgeId]) -> SpanningForest {
    let mut peeler = Peeler::new(graph);
    peeler.build_forest(graph, erasure_edges);
    peeler.forest()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_code, compute_syndrome, Basis, CodeFamily, CodeSpec};
    use crate::graph::build_decoding_graph;
    use crate::pauli::{PauliKind, PauliOp};

    #[test]
    fn empty_inputs_yield_empty_correction() {
        let code = build_code(CodeSpec::new(CodeFamily::Toric, 4).unwrap());
        let g = build_decoding_graph(&code, Basis::XChecks, 1);
        assert!(peel(&g, &[], &[]).unwrap().is_empty());
    }

    #[test]
    fn path_erasure_recovers_the_path() {
        let code = build_code(CodeSpec::new(CodeFamily::Toric, 6).unwrap());
        let g = build_decoding_graph(&code, Basis::XChecks, 1);
        // two Z errors on adjacent qubits make a 2-edge correction path
        let q1 = 8;
        let q2 = 9;
        let err = PauliOp::from_components(code.n(), [(q1, PauliKind::Z), (q2, PauliKind::Z)]);
        let syn = compute_syndrome(&code, &err, Basis::XChecks);
        let nontrivial: Vec<u32> = syn.iter_ones().map(|c| c as u32).collect();
        let erasure = vec![g.qubit_edge(q1 as u32, 0), g.qubit_edge(q2 as u32, 0)];
        let corr = peel(&g, &erasure, &nontrivial).unwrap();
        // returned set's syndrome equals the input syndrome
        let mut flips = vec![0u8; g.num_vertices()];
        for &e in &corr {
            let (u, v) = g.endpoints(e);
            flips[u as usize] ^= 1;
            flips[v as usize] ^= 1;
        }
        for v in 0..g.num_vertices() as u32 {
            let expect = nontrivial.contains(&v);
            assert_eq!(flips[v as usize] == 1, expect);
        }
        // containment in the erasure
        assert!(corr.iter().all(|e| erasure.contains(e)));
    }

    #[test]
    fn nontrivial_outside_erasure_is_rejected() {
        let code = build_code(CodeSpec::new(CodeFamily::Toric, 4).unwrap());
        let g = build_decoding_graph(&code, Basis::XChecks, 1);
        let err = peel(&g, &[], &[0, 1]);
        assert!(matches!(err, Err(Error::MalformedInput(_))));
    }

    #[test]
    fn odd_component_without_virtual_is_unmatchable() {
        let code = build_code(CodeSpec::new(CodeFamily::Toric, 4).unwrap());
        let g = build_decoding_graph(&code, Basis::XChecks, 1);
        // a single erasure edge with only one nontrivial endpoint
        let e = g.qubit_edge(0, 0);
        let (u, _) = g.endpoints(e);
        let err = peel(&g, &[e], &[u]);
        assert!(matches!(err, Err(Error::UnmatchablePeel)));
    }

    #[test]
    fn virtual_root_absorbs_odd_component() {
        let code = build_code(CodeSpec::new(CodeFamily::Surface, 3).unwrap());
        let g = build_decoding_graph(&code, Basis::XChecks, 1);
        // a qubit whose edge touches a virtual vertex
        let (e, check) = (0..code.n() as u32)
            .find_map(|q| {
                let e = g.qubit_edge(q, 0);
                let (u, v) = g.endpoints(e);
                match (g.is_virtual(u), g.is_virtual(v)) {
                    (true, false) => Some((e, v)),
                    (false, true) => Some((e, u)),
                    _ => None,
                }
            })
            .unwrap();
        let corr = peel(&g, &[e], &[check]).unwrap();
        assert_eq!(corr, vec![e]);
    }

    #[test]
    fn forest_is_acyclic_and_rooted_at_virtuals() {
        let code = build_code(CodeSpec::new(CodeFamily::Surface, 4).unwrap());
        let g = build_decoding_graph(&code, Basis::XChecks, 1);
        let erasure: Vec<u32> = (0..10).map(|q| g.qubit_edge(q, 0)).collect();
        let forest = build_spanning_forest(&g, &erasure);

        // component membership by BFS over the erasure subgraph
        let component_of = |start: u32| {
            let mut seen = vec![start];
            let mut head = 0;
            while head < seen.len() {
                let v = seen[head];
                head += 1;
                for &(e, w) in &g.adjacency[v as usize] {
                    if erasure.contains(&e) && !seen.contains(&w) {
                        seen.push(w);
                    }
                }
            }
            seen
        };
        for &root in &forest.roots {
            let comp = component_of(root);
            if comp.iter().any(|&v| g.is_virtual(v)) {
                assert!(g.is_virtual(root), "component with virtual not rooted at one");
            }
        }
        // acyclic: forest edges = vertices - trees
        let mut all: Vec<u32> = erasure
            .iter()
            .flat_map(|&e| {
                let (u, v) = g.endpoints(e);
                [u, v]
            })
            .collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(forest.parent_edges.len(), all.len() - forest.roots.len());
    }
}
