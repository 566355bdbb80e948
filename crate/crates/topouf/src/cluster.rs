//! Syndrome validation: the union-find cluster engine.
//!
//! Clusters start as erasure-edge components plus isolated nontrivial check
//! nodes. A cluster is valid once it holds an even number of nontrivial
//! checks or touches a virtual boundary vertex. Each growth round advances
//! every boundary edge slot of every growing cluster by one half-step; an
//! edge that reaches full growth fuses its endpoint clusters. Unweighted
//! growth grows all invalid clusters per round; weighted growth grows only
//! the invalid cluster(s) of minimum vertex count, ties together.
//!
//! The engine owns graph-sized scratch and is reused across decodes; one
//! engine must not be shared by concurrent trials.

use crate::graph::{DecodingGraph, EdgeId, VertexId};
use crate::Error;
use serde::Serialize;

const NIL: u32 = u32::MAX;

/// Per-round record for the debug dump of cluster evolution.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthRound {
    pub round: u32,
    pub grew_roots: Vec<u32>,
    pub fused_edges: Vec<u32>,
    pub invalid_remaining: usize,
}

pub struct ClusterEngine {
    num_vertices: usize,
    num_edges: usize,
    parent: Vec<u32>,
    /// vertex count of each cluster, valid at roots
    size: Vec<u32>,
    /// odd/even count of nontrivial checks, valid at roots
    parity: Vec<bool>,
    /// whether the cluster contains a virtual vertex, valid at roots
    touches_virtual: Vec<bool>,
    /// half-edge growth per edge: 0, 1, or 2
    growth: Vec<u8>,
    /// edges that reached full growth, in completion order
    grown: Vec<EdgeId>,
    // intrusive singly-linked boundary-vertex lists per root
    bnd_head: Vec<u32>,
    bnd_tail: Vec<u32>,
    bnd_next: Vec<u32>,
    /// candidate roots of invalid clusters (possibly stale entries)
    active: Vec<u32>,
    grow_roots: Vec<u32>,
    fusions: Vec<EdgeId>,
    seen: Vec<u32>,
    stamp: u32,
    rounds_executed: u32,
    log: Option<Vec<GrowthRound>>,
}

impl ClusterEngine {
    pub fn new(graph: &DecodingGraph) -> Self {
        let v = graph.num_vertices();
        let e = graph.num_edges();
        ClusterEngine {
            num_vertices: v,
            num_edges: e,
            parent: (0..v as u32).collect(),
            size: vec![1; v],
            parity: vec![false; v],
            touches_virtual: vec![false; v],
            growth: vec![0; e],
            grown: Vec::new(),
            bnd_head: (0..v as u32).collect(),
            bnd_tail: (0..v as u32).collect(),
            bnd_next: vec![NIL; v],
            active: Vec::new(),
            grow_roots: Vec::new(),
            fusions: Vec::new(),
            seen: vec![0; v],
            stamp: 0,
            rounds_executed: 0,
            log: None,
        }
    }

    /// Enables the per-round growth log; snapshots accumulate until taken.
    pub fn set_logging(&mut self, enabled: bool) {
        self.log = if enabled { Some(Vec::new()) } else { None };
    }

    pub fn take_log(&mut self) -> Vec<GrowthRound> {
        self.log.as_mut().map(std::mem::take).unwrap_or_default()
    }

    fn reset(&mut self, graph: &DecodingGraph) {
        debug_assert_eq!(graph.num_vertices(), self.num_vertices);
        debug_assert_eq!(graph.num_edges(), self.num_edges);
        for i in 0..self.num_vertices {
            self.parent[i] = i as u32;
            self.size[i] = 1;
            self.parity[i] = false;
            self.touches_virtual[i] = graph.vertices[i].is_virtual;
            self.bnd_head[i] = i as u32;
            self.bnd_tail[i] = i as u32;
            self.bnd_next[i] = NIL;
        }
        self.growth.iter_mut().for_each(|g| *g = 0);
        self.grown.clear();
        self.active.clear();
        self.rounds_executed = 0;
        if let Some(log) = &mut self.log {
            log.clear();
        }
    }

    #[inline]
    pub fn find(&mut self, v: VertexId) -> u32 {
        let mut v = v;
        loop {
            let p = self.parent[v as usize];
            if p == v {
                return v;
            }
            // path halving
            let gp = self.parent[p as usize];
            self.parent[v as usize] = gp;
            v = gp;
        }
    }

    fn union(&mut self, a: VertexId, b: VertexId) -> Option<u32> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return None;
        }
        let (child, root) = if self.size[ra as usize] < self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[child as usize] = root;
        self.size[root as usize] += self.size[child as usize];
        self.parity[root as usize] ^= self.parity[child as usize];
        self.touches_virtual[root as usize] |= self.touches_virtual[child as usize];
        // concatenate boundary lists
        let child_head = self.bnd_head[child as usize];
        if child_head != NIL {
            let root_tail = self.bnd_tail[root as usize];
            if root_tail == NIL {
                self.bnd_head[root as usize] = child_head;
            } else {
                self.bnd_next[root_tail as usize] = child_head;
            }
            self.bnd_tail[root as usize] = self.bnd_tail[child as usize];
        }
        Some(root)
    }

    #[inline]
    fn is_valid_root(&self, r: u32) -> bool {
        !self.parity[r as usize] || self.touches_virtual[r as usize]
    }

    /// Runs syndrome validation. Post: every cluster is valid and
    /// `grown_edges` holds exactly the fully grown edges.
    pub fn synd_val(
        &mut self,
        graph: &DecodingGraph,
        erasures: &[EdgeId],
        nontrivial: &[VertexId],
        weighted: bool,
    ) -> Result<(), Error> {
        self.reset(graph);

        for &v in nontrivial {
            if graph.is_virtual(v) {
                return Err(Error::MalformedInput(format!(
                    "nontrivial vertex {v} is virtual"
                )));
            }
            // set semantics: duplicates are idempotent
            self.parity[v as usize] = true;
        }
        let odd_count = (0..self.num_vertices).filter(|&v| self.parity[v]).count();
        let has_virtual = graph.vertices.iter().any(|v| v.is_virtual);
        if odd_count % 2 == 1 && !has_virtual {
            return Err(Error::MalformedInput(
                "odd number of nontrivial checks on a closed graph".into(),
            ));
        }

        for &e in erasures {
            if self.growth[e as usize] == 2 {
                continue;
            }
            self.growth[e as usize] = 2;
            self.grown.push(e);
            let (u, v) = graph.endpoints(e);
            self.union(u, v);
        }

        for &v in nontrivial {
            let r = self.find(v);
            self.active.push(r);
        }

        loop {
            // canonicalize candidates, drop valid clusters and duplicates
            self.stamp += 1;
            self.grow_roots.clear();
            for i in 0..self.active.len() {
                let r = self.find(self.active[i]);
                if self.seen[r as usize] == self.stamp {
                    continue;
                }
                self.seen[r as usize] = self.stamp;
                if !self.is_valid_root(r) {
                    self.grow_roots.push(r);
                }
            }
            self.active.clear();
            self.active.extend_from_slice(&self.grow_roots);
            if self.grow_roots.is_empty() {
                break;
            }
            self.grow_roots.sort_unstable();
            if weighted {
                let min = self
                    .grow_roots
                    .iter()
                    .map(|&r| self.size[r as usize])
                    .min()
                    .unwrap();
                let size = &self.size;
                self.grow_roots.retain(|&r| size[r as usize] == min);
            }
            self.rounds_executed += 1;
            assert!(
                self.rounds_executed as usize <= 2 * (self.num_vertices + self.num_edges) + 2,
                "syndrome validation failed to terminate"
            );

            self.fusions.clear();
            let grew_roots = std::mem::take(&mut self.grow_roots);
            for &r in &grew_roots {
                self.grow_cluster(graph, r);
            }
            self.grow_roots = grew_roots;

            for i in 0..self.fusions.len() {
                let e = self.fusions[i];
                let (u, v) = graph.endpoints(e);
                if let Some(root) = self.union(u, v) {
                    self.active.push(root);
                }
            }

            if self.log.is_some() {
                self.stamp += 1;
                let mut invalid = 0usize;
                for i in 0..self.active.len() {
                    let r = self.find(self.active[i]);
                    if self.seen[r as usize] == self.stamp {
                        continue;
                    }
                    self.seen[r as usize] = self.stamp;
                    if !self.is_valid_root(r) {
                        invalid += 1;
                    }
                }
                let entry = GrowthRound {
                    round: self.rounds_executed,
                    grew_roots: self.grow_roots.clone(),
                    fused_edges: self.fusions.clone(),
                    invalid_remaining: invalid,
                };
                self.log.as_mut().unwrap().push(entry);
            }
        }
        Ok(())
    }

    /// Advances all boundary half-edge slots of cluster `r`, unlinking
    /// vertices that had no remaining room before this round.
    fn grow_cluster(&mut self, graph: &DecodingGraph, r: u32) {
        let mut prev = NIL;
        let mut cur = self.bnd_head[r as usize];
        while cur != NIL {
            let next = self.bnd_next[cur as usize];
            let mut had_room = false;
            for &(e, _) in &graph.adjacency[cur as usize] {
                let g = self.growth[e as usize];
                if g < 2 {
                    had_room = true;
                    self.growth[e as usize] = g + 1;
                    if g + 1 == 2 {
                        self.grown.push(e);
                        self.fusions.push(e);
                    }
                }
            }
            if !had_room {
                // stale: every incident edge was already full
                if prev == NIL {
                    self.bnd_head[r as usize] = next;
                } else {
                    self.bnd_next[prev as usize] = next;
                }
                if next == NIL {
                    self.bnd_tail[r as usize] = prev;
                }
            } else {
                prev = cur;
            }
            cur = next;
        }
    }

    /// Fully grown edges in completion order; half-grown edges are excluded.
    pub fn grown_edges(&self) -> &[EdgeId] {
        &self.grown
    }

    pub fn edge_growth(&self, e: EdgeId) -> u8 {
        self.growth[e as usize]
    }

    pub fn rounds_executed(&self) -> u32 {
        self.rounds_executed
    }

    pub fn cluster_parity(&mut self, v: VertexId) -> bool {
        let r = self.find(v);
        self.parity[r as usize]
    }

    pub fn cluster_touches_virtual(&mut self, v: VertexId) -> bool {
        let r = self.find(v);
        self.touches_virtual[r as usize]
    }

    pub fn cluster_size(&mut self, v: VertexId) -> u32 {
        let r = self.find(v);
        self.size[r as usize]
    }
}

/// Union-find state after syndrome validation, snapshotted into plain data.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterSet {
    /// canonical cluster root of every vertex
    pub cluster_of: Vec<u32>,
    /// indexed by root id; meaningless at non-root indices
    pub parity: Vec<bool>,
    pub touches_virtual: Vec<bool>,
    pub size: Vec<u32>,
    /// per-edge growth in half-steps (0, 1, 2)
    pub edge_growth: Vec<u8>,
    /// fully grown edges in completion order
    pub grown_edges: Vec<EdgeId>,
    pub growth_rounds: u32,
}

impl ClusterSet {
    pub fn is_valid_cluster(&self, root: u32) -> bool {
        !self.parity[root as usize] || self.touches_virtual[root as usize]
    }

    pub fn roots(&self) -> Vec<u32> {
        let mut roots: Vec<u32> = self
            .cluster_of
            .iter()
            .enumerate()
            .filter(|&(v, &r)| v as u32 == r)
            .map(|(_, &r)| r)
            .collect();
        roots.sort_unstable();
        roots
    }
}

/// One-shot syndrome validation returning an owned snapshot.
pub fn synd_val(
    graph: &DecodingGraph,
    erasures: &[EdgeId],
    nontrivial: &[VertexId],
    weighted: bool,
) -> Result<ClusterSet, Error> {
    let mut engine = ClusterEngine::new(graph);
    engine.synd_val(graph, erasures, nontrivial, weighted)?;
    let cluster_of = (0..graph.num_vertices() as u32)
        .map(|v| engine.find(v))
        .collect();
    Ok(ClusterSet {
        cluster_of,
        parity: engine.parity.clone(),
        touches_virtual: engine.touches_virtual.clone(),
        size: engine.size.clone(),
        edge_growth: engine.growth.clone(),
        grown_edges: engine.grown.clone(),
        growth_rounds: engine.rounds_executed,
    })
}

/// Fully grown edges of a validated cluster set.
pub fn grown_edges(clusters: &ClusterSet) -> &[EdgeId] {
    &clusters.grown_edges
}
