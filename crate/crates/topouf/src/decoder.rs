//! Full decoders over the cluster engine and peeler.
//!
//! `UF` decodes the two bases independently: syndrome validation grows an
//! erasure set consistent with the syndrome, peeling extracts a correction.
//! `IRUF` feeds each basis's correction back as erasures for the other basis
//! and iterates a fixed number of times. `UIUF` runs syndrome validation on
//! both graphs, promotes every qubit whose data edge is fully grown in both
//! to an erasure (the intersection step), and then runs the two UF passes
//! with the augmented erasure set.
//!
//! On space-time graphs only data-qubit edges participate in cross-basis
//! erasure sharing; measurement mechanisms are basis-local and never enter
//! the shared erasure set.
//!
//! A `Decoder` owns graph-sized scratch and must not be shared by two trials
//! at once; the simulation harness keeps one per worker.

use crate::cluster::ClusterEngine;
use crate::code::{Basis, TopologicalCode};
use crate::graph::{build_decoding_graph, DecodingGraph, EdgeId, EdgeMechanism, VertexId};
use crate::pauli::{Bits, PauliOp};
use crate::peel::Peeler;
use crate::Error;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    Uf,
    Iruf,
    Uiuf,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Uf => "uf",
            Algorithm::Iruf => "iruf",
            Algorithm::Uiuf => "uiuf",
        }
    }

    pub fn parse(s: &str) -> Result<Algorithm, Error> {
        match s.to_ascii_lowercase().as_str() {
            "uf" => Ok(Algorithm::Uf),
            "iruf" => Ok(Algorithm::Iruf),
            "uiuf" => Ok(Algorithm::Uiuf),
            other => Err(Error::InvalidPlan(format!("unknown decoder '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub algorithm: Algorithm,
    pub weighted_growth: bool,
    /// IRUF only; ignored by the other algorithms.
    pub iter_max: u32,
}

impl DecoderConfig {
    pub fn uf() -> Self {
        DecoderConfig {
            algorithm: Algorithm::Uf,
            weighted_growth: false,
            iter_max: 1,
        }
    }

    pub fn iruf(iter_max: u32) -> Self {
        assert!(iter_max >= 1, "iter_max must be at least 1");
        DecoderConfig {
            algorithm: Algorithm::Iruf,
            weighted_growth: false,
            iter_max,
        }
    }

    pub fn uiuf() -> Self {
        DecoderConfig {
            algorithm: Algorithm::Uiuf,
            weighted_growth: false,
            iter_max: 1,
        }
    }

    pub fn with_weighted_growth(mut self, weighted: bool) -> Self {
        self.weighted_growth = weighted;
        self
    }

    pub fn label(&self) -> String {
        if self.algorithm == Algorithm::Iruf {
            format!("iruf{}", self.iter_max)
        } else {
            self.algorithm.name().to_string()
        }
    }
}

/// Decoder output: per-round qubit fixes plus per-round measurement-error
/// estimates for each check basis. Rounds are always 0 for code capacity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    /// X corrections as (round, qubit), from decoding G_Z.
    pub x_fix: Vec<(u32, u32)>,
    /// Z corrections as (round, qubit), from decoding G_X.
    pub z_fix: Vec<(u32, u32)>,
    /// X-check measurement-error estimates as (round, check), from G_X.
    pub meas_fix_x: Vec<(u32, u32)>,
    /// Z-check measurement-error estimates as (round, check), from G_Z.
    pub meas_fix_z: Vec<(u32, u32)>,
}

impl Correction {
    pub fn clear(&mut self) {
        self.x_fix.clear();
        self.z_fix.clear();
        self.meas_fix_x.clear();
        self.meas_fix_z.clear();
    }

    pub fn is_empty(&self) -> bool {
        self.x_fix.is_empty()
            && self.z_fix.is_empty()
            && self.meas_fix_x.is_empty()
            && self.meas_fix_z.is_empty()
    }

    /// Accumulated Pauli over all rounds; round-repeated fixes cancel.
    pub fn total_pauli(&self, n: usize) -> PauliOp {
        let mut p = PauliOp::identity(n);
        for &(_, q) in &self.x_fix {
            p.x_mask.flip(q as usize);
        }
        for &(_, q) in &self.z_fix {
            p.z_mask.flip(q as usize);
        }
        p
    }

    fn sort(&mut self) {
        self.x_fix.sort_unstable();
        self.z_fix.sort_unstable();
        self.meas_fix_x.sort_unstable();
        self.meas_fix_z.sort_unstable();
    }
}

/// The UF primitive on one decoding graph: syndrome validation over the
/// erasure set, then peeling on the grown edges. Returns the correction as
/// an edge set of the graph.
pub fn union_find(
    graph: &DecodingGraph,
    erasures: &[EdgeId],
    nontrivial: &[VertexId],
    weighted: bool,
) -> Result<Vec<EdgeId>, Error> {
    let mut engine = ClusterEngine::new(graph);
    let mut peeler = Peeler::new(graph);
    let mut out = Vec::new();
    uf_edges(
        graph,
        &mut engine,
        &mut peeler,
        erasures,
        nontrivial,
        weighted,
        &mut out,
    )?;
    Ok(out)
}

fn uf_edges(
    graph: &DecodingGraph,
    engine: &mut ClusterEngine,
    peeler: &mut Peeler,
    erasures: &[EdgeId],
    nontrivial: &[VertexId],
    weighted: bool,
    out: &mut Vec<EdgeId>,
) -> Result<(), Error> {
    engine.synd_val(graph, erasures, nontrivial, weighted)?;
    out.clear();
    peeler.peel(graph, engine.grown_edges(), nontrivial, out)
}

pub struct Decoder<'g> {
    pub gx: &'g DecodingGraph,
    pub gz: &'g DecodingGraph,
    eng_x: ClusterEngine,
    eng_z: ClusterEngine,
    peeler_x: Peeler,
    peeler_z: Peeler,
    era_x: Vec<EdgeId>,
    era_z: Vec<EdgeId>,
    edges_a: Vec<EdgeId>,
    edges_b: Vec<EdgeId>,
    shared: Vec<(u32, u32)>,
}

impl<'g> Decoder<'g> {
    pub fn new(gx: &'g DecodingGraph, gz: &'g DecodingGraph) -> Self {
        assert_eq!(gx.basis, Basis::XChecks);
        assert_eq!(gz.basis, Basis::ZChecks);
        assert_eq!(gx.rounds, gz.rounds);
        Decoder {
            gx,
            gz,
            eng_x: ClusterEngine::new(gx),
            eng_z: ClusterEngine::new(gz),
            peeler_x: Peeler::new(gx),
            peeler_z: Peeler::new(gz),
            era_x: Vec::new(),
            era_z: Vec::new(),
            edges_a: Vec::new(),
            edges_b: Vec::new(),
            shared: Vec::new(),
        }
    }

    /// Decodes one shot. `erasures` are (round, qubit) pairs (round 0 for
    /// code capacity); `sx` and `sz` are the nontrivial vertices of G_X and
    /// G_Z respectively.
    pub fn decode(
        &mut self,
        config: &DecoderConfig,
        erasures: &[(u32, u32)],
        sx: &[VertexId],
        sz: &[VertexId],
    ) -> Result<Correction, Error> {
        let mut out = Correction::default();
        self.decode_into(config, erasures, sx, sz, &mut out)?;
        Ok(out)
    }

    pub fn decode_into(
        &mut self,
        config: &DecoderConfig,
        erasures: &[(u32, u32)],
        sx: &[VertexId],
        sz: &[VertexId],
        out: &mut Correction,
    ) -> Result<(), Error> {
        out.clear();
        let weighted = config.weighted_growth;
        self.era_x.clear();
        self.era_z.clear();
        for &(round, q) in erasures {
            self.era_x.push(self.gx.qubit_edge(q, round));
            self.era_z.push(self.gz.qubit_edge(q, round));
        }
        match config.algorithm {
            Algorithm::Uf => {
                uf_edges(
                    self.gx,
                    &mut self.eng_x,
                    &mut self.peeler_x,
                    &self.era_x,
                    sx,
                    weighted,
                    &mut self.edges_a,
                )?;
                fill_from_edges(self.gx, &self.edges_a, out);
                uf_edges(
                    self.gz,
                    &mut self.eng_z,
                    &mut self.peeler_z,
                    &self.era_z,
                    sz,
                    weighted,
                    &mut self.edges_b,
                )?;
                fill_from_edges(self.gz, &self.edges_b, out);
            }
            Algorithm::Iruf => {
                assert!(config.iter_max >= 1, "iter_max must be at least 1");
                // C_X from G_Z first
                uf_edges(
                    self.gz,
                    &mut self.eng_z,
                    &mut self.peeler_z,
                    &self.era_z,
                    sz,
                    weighted,
                    &mut self.edges_a,
                )?;
                let base_x = self.era_x.len();
                let base_z = self.era_z.len();
                for _ in 0..config.iter_max {
                    // C_Z from G_X with erasures extended by C_X
                    self.era_x.truncate(base_x);
                    for i in 0..self.edges_a.len() {
                        if let EdgeMechanism::DataQubit { qubit, round } =
                            self.gz.edges[self.edges_a[i] as usize].mechanism
                        {
                            self.era_x.push(self.gx.qubit_edge(qubit, round));
                        }
                    }
                    uf_edges(
                        self.gx,
                        &mut self.eng_x,
                        &mut self.peeler_x,
                        &self.era_x,
                        sx,
                        weighted,
                        &mut self.edges_b,
                    )?;
                    // C_X from G_Z with erasures extended by C_Z
                    self.era_z.truncate(base_z);
                    for i in 0..self.edges_b.len() {
                        if let EdgeMechanism::DataQubit { qubit, round } =
                            self.gx.edges[self.edges_b[i] as usize].mechanism
                        {
                            self.era_z.push(self.gz.qubit_edge(qubit, round));
                        }
                    }
                    uf_edges(
                        self.gz,
                        &mut self.eng_z,
                        &mut self.peeler_z,
                        &self.era_z,
                        sz,
                        weighted,
                        &mut self.edges_a,
                    )?;
                }
                fill_from_edges(self.gz, &self.edges_a, out);
                fill_from_edges(self.gx, &self.edges_b, out);
            }
            Algorithm::Uiuf => {
                // Union: validate both graphs independently
                self.eng_x.synd_val(self.gx, &self.era_x, sx, weighted)?;
                self.eng_z.synd_val(self.gz, &self.era_z, sz, weighted)?;
                // Intersection: qubits fully covered in both graphs
                self.shared.clear();
                for &e in self.eng_x.grown_edges() {
                    if let EdgeMechanism::DataQubit { qubit, round } =
                        self.gx.edges[e as usize].mechanism
                    {
                        if self.eng_z.edge_growth(self.gz.qubit_edge(qubit, round)) == 2 {
                            self.shared.push((round, qubit));
                        }
                    }
                }
                for i in 0..self.shared.len() {
                    let (round, q) = self.shared[i];
                    self.era_x.push(self.gx.qubit_edge(q, round));
                    self.era_z.push(self.gz.qubit_edge(q, round));
                }
                // Union-Find with the augmented erasure set
                uf_edges(
                    self.gz,
                    &mut self.eng_z,
                    &mut self.peeler_z,
                    &self.era_z,
                    sz,
                    weighted,
                    &mut self.edges_a,
                )?;
                fill_from_edges(self.gz, &self.edges_a, out);
                uf_edges(
                    self.gx,
                    &mut self.eng_x,
                    &mut self.peeler_x,
                    &self.era_x,
                    sx,
                    weighted,
                    &mut self.edges_b,
                )?;
                fill_from_edges(self.gx, &self.edges_b, out);
            }
        }
        out.sort();
        Ok(())
    }
}

fn fill_from_edges(graph: &DecodingGraph, edges: &[EdgeId], out: &mut Correction) {
    for &e in edges {
        match graph.edges[e as usize].mechanism {
            EdgeMechanism::DataQubit { qubit, round } => match graph.basis {
                // G_X sees Z errors, G_Z sees X errors
                Basis::XChecks => out.z_fix.push((round, qubit)),
                Basis::ZChecks => out.x_fix.push((round, qubit)),
            },
            EdgeMechanism::Measurement { check, round } => match graph.basis {
                Basis::XChecks => out.meas_fix_x.push((round, check)),
                Basis::ZChecks => out.meas_fix_z.push((round, check)),
            },
        }
    }
}

/// Iterative UF on a pair of decoding graphs; erasures are (round, qubit).
pub fn iruf(
    gx: &DecodingGraph,
    gz: &DecodingGraph,
    erasures: &[(u32, u32)],
    sx: &[VertexId],
    sz: &[VertexId],
    iter_max: u32,
) -> Result<Correction, Error> {
    let mut decoder = Decoder::new(gx, gz);
    decoder.decode(&DecoderConfig::iruf(iter_max), erasures, sx, sz)
}

/// Union-Intersection UF on a pair of decoding graphs.
pub fn uiuf(
    gx: &DecodingGraph,
    gz: &DecodingGraph,
    erasures: &[(u32, u32)],
    sx: &[VertexId],
    sz: &[VertexId],
    weighted: bool,
) -> Result<Correction, Error> {
    let mut decoder = Decoder::new(gx, gz);
    decoder.decode(
        &DecoderConfig::uiuf().with_weighted_growth(weighted),
        erasures,
        sx,
        sz,
    )
}

/// Translates per-round syndrome differences into nontrivial vertex lists of
/// a space-time graph.
pub fn nontrivial_vertices(graph: &DecodingGraph, differences: &[Bits]) -> Vec<VertexId> {
    assert_eq!(differences.len(), graph.rounds as usize);
    let mut out = Vec::new();
    for (layer, diff) in differences.iter().enumerate() {
        for check in diff.iter_ones() {
            out.push(graph.check_vertex(check as u32, layer as u32));
        }
    }
    out
}

/// One-shot decode on the space-time graphs of `code` from per-round
/// syndrome differences (final round measured perfectly).
pub fn decode_spacetime(
    config: &DecoderConfig,
    code: &TopologicalCode,
    diffs_x: &[Bits],
    diffs_z: &[Bits],
    rounds: u32,
) -> Result<Correction, Error> {
    let gx = build_decoding_graph(code, Basis::XChecks, rounds);
    let gz = build_decoding_graph(code, Basis::ZChecks, rounds);
    let sx = nontrivial_vertices(&gx, diffs_x);
    let sz = nontrivial_vertices(&gz, diffs_z);
    let mut decoder = Decoder::new(&gx, &gz);
    decoder.decode(config, &[], &sx, &sz)
}

/// Checks that a correction reproduces the input nontrivial sets exactly in
/// both graphs (ignoring flips absorbed by virtual vertices).
pub fn correction_matches_syndrome(
    gx: &DecodingGraph,
    gz: &DecodingGraph,
    correction: &Correction,
    sx: &[VertexId],
    sz: &[VertexId],
) -> bool {
    let check_one = |graph: &DecodingGraph,
                     data: &[(u32, u32)],
                     meas: &[(u32, u32)],
                     nontrivial: &[VertexId]| {
        let mut flips = vec![0u8; graph.num_vertices()];
        for &(round, q) in data {
            let (u, v) = graph.endpoints(graph.qubit_edge(q, round));
            flips[u as usize] ^= 1;
            flips[v as usize] ^= 1;
        }
        for &(round, c) in meas {
            let (u, v) = graph.endpoints(graph.measurement_edge(c, round));
            flips[u as usize] ^= 1;
            flips[v as usize] ^= 1;
        }
        for &v in nontrivial {
            flips[v as usize] ^= 1;
        }
        flips
            .iter()
            .enumerate()
            .all(|(v, &f)| f == 0 || graph.is_virtual(v as u32))
    };
    check_one(gx, &correction.z_fix, &correction.meas_fix_x, sx)
        && check_one(gz, &correction.x_fix, &correction.meas_fix_z, sz)
}
