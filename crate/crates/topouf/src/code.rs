//! The four topological code families: stabilizers, logical operators, and
//! qubit indexing.
//!
//! Qubit indexing is row-major over lattice coordinates in every family:
//!
//! * Toric `[[2d^2, 2, d]]`: lattice sites at (r, c), r, c in 0..d, periodic.
//!   Horizontal edge h(r,c) joins sites (r,c)-(r,c+1) and has index `r*d + c`;
//!   vertical edge v(r,c) joins (r,c)-(r+1,c) and has index `d^2 + r*d + c`.
//!   X-stabilizers are site stars, Z-stabilizers are face plaquettes; all
//!   `d^2` of each are emitted (one per basis is dependent).
//! * Rotated toric `[[d^2, 2, d]]`, d even: qubits at (r, c) with index
//!   `r*d + c`, periodic. Faces f(r,c) with corners (r,c), (r,c+1), (r+1,c),
//!   (r+1,c+1) are X-checks when r+c is even and Z-checks when odd.
//! * Surface `[[d^2 + (d-1)^2, 1, d]]`: checkerboard positions (i, j) on a
//!   (2d-1) x (2d-1) grid; qubits at i+j even (row-major), X-checks at i odd,
//!   j even, Z-checks at i even, j odd. Each check acts on its lattice
//!   neighbors.
//! * Rotated surface `[[d^2, 1, d]]`, d odd: qubits at (r, c), faces as in
//!   the rotated toric but open; X-type faces (r+c odd) exist in the interior
//!   and as weight-2 checks on the left/right boundaries, Z-type faces (r+c
//!   even) in the interior and on the top/bottom boundaries.

use crate::pauli::{Bits, PauliOp};
use crate::Error;
use serde::{Deserialize, Serialize};

/// Which of the two CSS check sets to work with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// X-type stabilizers; their syndromes reveal Z errors.
    XChecks,
    /// Z-type stabilizers; their syndromes reveal X errors.
    ZChecks,
}

impl Basis {
    pub fn other(self) -> Basis {
        match self {
            Basis::XChecks => Basis::ZChecks,
            Basis::ZChecks => Basis::XChecks,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeFamily {
    Toric,
    RotatedToric,
    Surface,
    RotatedSurface,
}

impl CodeFamily {
    pub const ALL: [CodeFamily; 4] = [
        CodeFamily::Toric,
        CodeFamily::RotatedToric,
        CodeFamily::Surface,
        CodeFamily::RotatedSurface,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CodeFamily::Toric => "toric",
            CodeFamily::RotatedToric => "rotated-toric",
            CodeFamily::Surface => "surface",
            CodeFamily::RotatedSurface => "rotated-surface",
        }
    }

    pub fn parse(s: &str) -> Result<CodeFamily, Error> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "toric" => Ok(CodeFamily::Toric),
            "rotated-toric" | "rtoric" => Ok(CodeFamily::RotatedToric),
            "surface" => Ok(CodeFamily::Surface),
            "rotated-surface" | "rsurface" => Ok(CodeFamily::RotatedSurface),
            other => Err(Error::InvalidCodeSpec(format!(
                "unknown code family '{other}'"
            ))),
        }
    }
}

/// A validated (family, distance) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    pub family: CodeFamily,
    pub d: usize,
}

impl CodeSpec {
    pub fn new(family: CodeFamily, d: usize) -> Result<CodeSpec, Error> {
        if d < 2 {
            return Err(Error::InvalidCodeSpec(format!(
                "distance must be at least 2, got {d}"
            )));
        }
        match family {
            CodeFamily::RotatedToric if d % 2 != 0 => Err(Error::InvalidCodeSpec(format!(
                "rotated toric codes require even distance, got {d}"
            ))),
            CodeFamily::RotatedSurface if d % 2 == 0 => Err(Error::InvalidCodeSpec(format!(
                "rotated surface codes require odd distance, got {d}"
            ))),
            _ => Ok(CodeSpec { family, d }),
        }
    }

    /// Number of physical qubits.
    pub fn n(&self) -> usize {
        match self.family {
            CodeFamily::Toric => 2 * self.d * self.d,
            CodeFamily::RotatedToric | CodeFamily::RotatedSurface => self.d * self.d,
            CodeFamily::Surface => self.d * self.d + (self.d - 1) * (self.d - 1),
        }
    }

    /// Number of logical qubits.
    pub fn k(&self) -> usize {
        match self.family {
            CodeFamily::Toric | CodeFamily::RotatedToric => 2,
            CodeFamily::Surface | CodeFamily::RotatedSurface => 1,
        }
    }

    /// Guaranteed correction radius floor((d-1)/2).
    pub fn t(&self) -> usize {
        (self.d - 1) / 2
    }
}

/// A concrete code instance: stabilizer supports, logical operators, and the
/// lattice coordinate of every qubit.
#[derive(Debug, Clone, Serialize)]
pub struct TopologicalCode {
    pub spec: CodeSpec,
    /// Supports of the X-type stabilizers, each a sorted qubit-index list.
    pub x_stabilizers: Vec<Vec<u32>>,
    /// Supports of the Z-type stabilizers.
    pub z_stabilizers: Vec<Vec<u32>>,
    /// k anticommuting logical pairs: `logical_x[i]` pairs with `logical_z[i]`.
    pub logical_x: Vec<PauliOp>,
    pub logical_z: Vec<PauliOp>,
    /// Lattice coordinate of each qubit, indexed by qubit.
    pub qubit_coords: Vec<(i32, i32)>,
    #[serde(skip)]
    x_stab_masks: Vec<Bits>,
    #[serde(skip)]
    z_stab_masks: Vec<Bits>,
}

pub fn build_code(spec: CodeSpec) -> TopologicalCode {
    let (x_stabilizers, z_stabilizers, logical_x, logical_z, qubit_coords) = match spec.family {
        CodeFamily::Toric => build_toric(spec.d),
        CodeFamily::RotatedToric => build_rotated_toric(spec.d),
        CodeFamily::Surface => build_surface(spec.d),
        CodeFamily::RotatedSurface => build_rotated_surface(spec.d),
    };
    let n = spec.n();
    let to_masks = |stabs: &[Vec<u32>]| {
        stabs
            .iter()
            .map(|s| Bits::from_indices(n, s.iter().map(|&q| q as usize)))
            .collect()
    };
    TopologicalCode {
        spec,
        x_stab_masks: to_masks(&x_stabilizers),
        z_stab_masks: to_masks(&z_stabilizers),
        x_stabilizers,
        z_stabilizers,
        logical_x,
        logical_z,
        qubit_coords,
    }
}

type CodeParts = (
    Vec<Vec<u32>>,
    Vec<Vec<u32>>,
    Vec<PauliOp>,
    Vec<PauliOp>,
    Vec<(i32, i32)>,
);

fn build_toric(d: usize) -> CodeParts {
    let n = 2 * d * d;
    let h = |r: usize, c: usize| (r % d) * d + (c % d);
    let v = |r: usize, c: usize| d * d + (r % d) * d + (c % d);
    let mut x_stabs = Vec::with_capacity(d * d);
    let mut z_stabs = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            // star at site (r, c)
            let mut star = vec![
                h(r, c) as u32,
                h(r, (c + d - 1) % d) as u32,
                v(r, c) as u32,
                v((r + d - 1) % d, c) as u32,
            ];
            star.sort_unstable();
            star.dedup();
            x_stabs.push(star);
            // plaquette with top-left corner (r, c)
            let mut plaq = vec![
                h(r, c) as u32,
                h((r + 1) % d, c) as u32,
                v(r, c) as u32,
                v(r, (c + 1) % d) as u32,
            ];
            plaq.sort_unstable();
            plaq.dedup();
            z_stabs.push(plaq);
        }
    }
    let logical_z = vec![
        PauliOp {
            x_mask: Bits::zeros(n),
            z_mask: Bits::from_indices(n, (0..d).map(|c| h(0, c))),
        },
        PauliOp {
            x_mask: Bits::zeros(n),
            z_mask: Bits::from_indices(n, (0..d).map(|r| v(r, 0))),
        },
    ];
    let logical_x = vec![
        PauliOp {
            x_mask: Bits::from_indices(n, (0..d).map(|r| h(r, 0))),
            z_mask: Bits::zeros(n),
        },
        PauliOp {
            x_mask: Bits::from_indices(n, (0..d).map(|c| v(0, c))),
            z_mask: Bits::zeros(n),
        },
    ];
    let mut coords = vec![(0, 0); n];
    for r in 0..d {
        for c in 0..d {
            coords[h(r, c)] = (2 * r as i32, 2 * c as i32 + 1);
            coords[v(r, c)] = (2 * r as i32 + 1, 2 * c as i32);
        }
    }
    (x_stabs, z_stabs, logical_x, logical_z, coords)
}

fn build_rotated_toric(d: usize) -> CodeParts {
    let n = d * d;
    let q = |r: usize, c: usize| (r % d) * d + (c % d);
    let mut x_stabs = Vec::new();
    let mut z_stabs = Vec::new();
    for r in 0..d {
        for c in 0..d {
            let mut face = vec![
                q(r, c) as u32,
                q(r, c + 1) as u32,
                q(r + 1, c) as u32,
                q(r + 1, c + 1) as u32,
            ];
            face.sort_unstable();
            if (r + c) % 2 == 0 {
                x_stabs.push(face);
            } else {
                z_stabs.push(face);
            }
        }
    }
    let logical_z = vec![
        // horizontal loop along row 0
        PauliOp {
            x_mask: Bits::zeros(n),
            z_mask: Bits::from_indices(n, (0..d).map(|c| q(0, c))),
        },
        // vertical loop along column 0
        PauliOp {
            x_mask: Bits::zeros(n),
            z_mask: Bits::from_indices(n, (0..d).map(|r| q(r, 0))),
        },
    ];
    let logical_x = vec![
        PauliOp {
            x_mask: Bits::from_indices(n, (0..d).map(|r| q(r, 0))),
            z_mask: Bits::zeros(n),
        },
        PauliOp {
            x_mask: Bits::from_indices(n, (0..d).map(|c| q(0, c))),
            z_mask: Bits::zeros(n),
        },
    ];
    let mut coords = vec![(0, 0); n];
    for r in 0..d {
        for c in 0..d {
            coords[q(r, c)] = (r as i32, c as i32);
        }
    }
    (x_stabs, z_stabs, logical_x, logical_z, coords)
}

fn build_surface(d: usize) -> CodeParts {
    let side = 2 * d - 1;
    let n = d * d + (d - 1) * (d - 1);
    // row-major index over checkerboard qubit positions (i + j even)
    let mut qubit_at = vec![vec![None; side]; side];
    let mut coords = Vec::with_capacity(n);
    for i in 0..side {
        for j in 0..side {
            if (i + j) % 2 == 0 {
                qubit_at[i][j] = Some(coords.len() as u32);
                coords.push((i as i32, j as i32));
            }
        }
    }
    debug_assert_eq!(coords.len(), n);
    let neighbors = |i: usize, j: usize| {
        let mut acc = Vec::with_capacity(4);
        if i > 0 {
            acc.push(qubit_at[i - 1][j].unwrap());
        }
        if i + 1 < side {
            acc.push(qubit_at[i + 1][j].unwrap());
        }
        if j > 0 {
            acc.push(qubit_at[i][j - 1].unwrap());
        }
        if j + 1 < side {
            acc.push(qubit_at[i][j + 1].unwrap());
        }
        acc.sort_unstable();
        acc
    };
    let mut x_stabs = Vec::new();
    let mut z_stabs = Vec::new();
    for i in 0..side {
        for j in 0..side {
            if (i + j) % 2 == 1 {
                if i % 2 == 1 {
                    x_stabs.push(neighbors(i, j));
                } else {
                    z_stabs.push(neighbors(i, j));
                }
            }
        }
    }
    // logical Z: top-to-bottom path in column 0; logical X: left-to-right in row 0
    let logical_z = vec![PauliOp {
        x_mask: Bits::zeros(n),
        z_mask: Bits::from_indices(n, (0..d).map(|k| qubit_at[2 * k][0].unwrap() as usize)),
    }];
    let logical_x = vec![PauliOp {
        x_mask: Bits::from_indices(n, (0..d).map(|k| qubit_at[0][2 * k].unwrap() as usize)),
        z_mask: Bits::zeros(n),
    }];
    (x_stabs, z_stabs, logical_x, logical_z, coords)
}

fn build_rotated_surface(d: usize) -> CodeParts {
    let n = d * d;
    let q = |r: usize, c: usize| (r * d + c) as u32;
    // Face at integer position (fr, fc) with fr, fc in -1..d-1; in-lattice
    // corners only. X-type faces have (fr + fc) odd.
    let face_qubits = |fr: i32, fc: i32| {
        let mut acc = Vec::with_capacity(4);
        for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let (r, c) = (fr + dr, fc + dc);
            if r >= 0 && r < d as i32 && c >= 0 && c < d as i32 {
                acc.push(q(r as usize, c as usize));
            }
        }
        acc.sort_unstable();
        acc
    };
    let mut x_stabs = Vec::new();
    let mut z_stabs = Vec::new();
    // interior faces
    for fr in 0..d as i32 - 1 {
        for fc in 0..d as i32 - 1 {
            let face = face_qubits(fr, fc);
            if (fr + fc).rem_euclid(2) == 1 {
                x_stabs.push(face);
            } else {
                z_stabs.push(face);
            }
        }
    }
    // boundary weight-2 faces: Z on top/bottom, X on left/right
    for fc in 0..d as i32 - 1 {
        if (-1 + fc).rem_euclid(2) == 0 {
            z_stabs.push(face_qubits(-1, fc));
        }
        if (d as i32 - 1 + fc).rem_euclid(2) == 0 {
            z_stabs.push(face_qubits(d as i32 - 1, fc));
        }
    }
    for fr in 0..d as i32 - 1 {
        if (fr - 1).rem_euclid(2) == 1 {
            x_stabs.push(face_qubits(fr, -1));
        }
        if (fr + d as i32 - 1).rem_euclid(2) == 1 {
            x_stabs.push(face_qubits(fr, d as i32 - 1));
        }
    }
    let logical_z = vec![PauliOp {
        x_mask: Bits::zeros(n),
        z_mask: Bits::from_indices(n, (0..d).map(|r| q(r, 0) as usize)),
    }];
    let logical_x = vec![PauliOp {
        x_mask: Bits::from_indices(n, (0..d).map(|c| q(0, c) as usize)),
        z_mask: Bits::zeros(n),
    }];
    let mut coords = vec![(0, 0); n];
    for r in 0..d {
        for c in 0..d {
            coords[q(r, c) as usize] = (r as i32, c as i32);
        }
    }
    (x_stabs, z_stabs, logical_x, logical_z, coords)
}

impl TopologicalCode {
    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn stabilizers(&self, basis: Basis) -> &[Vec<u32>] {
        match basis {
            Basis::XChecks => &self.x_stabilizers,
            Basis::ZChecks => &self.z_stabilizers,
        }
    }

    pub fn stabilizer_masks(&self, basis: Basis) -> &[Bits] {
        match basis {
            Basis::XChecks => &self.x_stab_masks,
            Basis::ZChecks => &self.z_stab_masks,
        }
    }

    /// Stabilizer generator as a full Pauli operator.
    pub fn stabilizer_op(&self, basis: Basis, idx: usize) -> PauliOp {
        let n = self.n();
        let mask = self.stabilizer_masks(basis)[idx].clone();
        match basis {
            Basis::XChecks => PauliOp {
                x_mask: mask,
                z_mask: Bits::zeros(n),
            },
            Basis::ZChecks => PauliOp {
                x_mask: Bits::zeros(n),
                z_mask: mask,
            },
        }
    }
}

/// Syndrome of `error` against one basis of stabilizers: bit i is set iff the
/// error anticommutes with stabilizer i.
pub fn compute_syndrome(code: &TopologicalCode, error: &PauliOp, basis: Basis) -> Bits {
    assert_eq!(error.num_qubits(), code.n(), "error length mismatch");
    let masks = code.stabilizer_masks(basis);
    let mut syndrome = Bits::zeros(masks.len());
    for (i, mask) in masks.iter().enumerate() {
        // X-type stabilizers see the error's Z components and vice versa.
        let anti = match basis {
            Basis::XChecks => mask.and_parity(&error.z_mask),
            Basis::ZChecks => mask.and_parity(&error.x_mask),
        };
        if anti {
            syndrome.set(i, true);
        }
    }
    syndrome
}

/// Classifies a syndrome-free residual: true iff it acts nontrivially on the
/// logical space (anticommutes with some logical representative).
///
/// A residual with a nonzero syndrome is a decoder-contract violation, not a
/// logical failure, and is reported as an error.
pub fn is_logical_failure(code: &TopologicalCode, residual: &PauliOp) -> Result<bool, Error> {
    let sx = compute_syndrome(code, residual, Basis::XChecks);
    let sz = compute_syndrome(code, residual, Basis::ZChecks);
    if !sx.is_zero() || !sz.is_zero() {
        return Err(Error::ResidualHasSyndrome);
    }
    let anti = code
        .logical_x
        .iter()
        .chain(&code.logical_z)
        .any(|l| !residual.commutes_with(l));
    Ok(anti)
}

/// GF(2) rank of a set of supports over n columns; test and diagnostics aid.
pub fn gf2_rank(supports: &[Bits]) -> usize {
    let mut rows: Vec<Bits> = supports.to_vec();
    let n = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..n {
        if let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].get(col)) {
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            rank += 1;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::for_each_combination;
    use crate::pauli::PauliKind;

    fn all_specs_up_to(dmax: usize) -> Vec<CodeSpec> {
        let mut specs = Vec::new();
        for family in CodeFamily::ALL {
            for d in 2..=dmax {
                if let Ok(s) = CodeSpec::new(family, d) {
                    specs.push(s);
                }
            }
        }
        specs
    }

    #[test]
    fn parameters_match_table() {
        let cases = [
            (CodeFamily::Toric, 6, 72, 2),
            (CodeFamily::RotatedToric, 6, 36, 2),
            (CodeFamily::Surface, 4, 25, 1),
            (CodeFamily::RotatedSurface, 3, 9, 1),
        ];
        for (family, d, n, k) in cases {
            let spec = CodeSpec::new(family, d).unwrap();
            assert_eq!(spec.n(), n);
            assert_eq!(spec.k(), k);
            assert_eq!(spec.t(), (d - 1) / 2);
        }
    }

    #[test]
    fn parity_constraints_rejected() {
        assert!(CodeSpec::new(CodeFamily::RotatedToric, 5).is_err());
        assert!(CodeSpec::new(CodeFamily::RotatedSurface, 4).is_err());
        assert!(CodeSpec::new(CodeFamily::Toric, 1).is_err());
        assert!(CodeSpec::new(CodeFamily::RotatedToric, 6).is_ok());
        assert!(CodeSpec::new(CodeFamily::RotatedSurface, 5).is_ok());
    }

    #[test]
    fn toric_d6_stabilizer_counts() {
        let code = build_code(CodeSpec::new(CodeFamily::Toric, 6).unwrap());
        assert_eq!(code.x_stabilizers.len(), 36);
        assert_eq!(code.z_stabilizers.len(), 36);
        // one dependent generator per basis
        assert_eq!(gf2_rank(&code.x_stab_masks), 35);
        assert_eq!(gf2_rank(&code.z_stab_masks), 35);
    }

    #[test]
    fn rotated_surface_d3_check_counts() {
        let code = build_code(CodeSpec::new(CodeFamily::RotatedSurface, 3).unwrap());
        assert_eq!(code.n(), 9);
        assert_eq!(code.x_stabilizers.len(), 4);
        assert_eq!(code.z_stabilizers.len(), 4);
        assert_eq!(gf2_rank(&code.x_stab_masks), 4);
        assert_eq!(gf2_rank(&code.z_stab_masks), 4);
    }

    #[test]
    fn stabilizer_weights_are_2_3_or_4() {
        for spec in all_specs_up_to(6) {
            let code = build_code(spec);
            for s in code.x_stabilizers.iter().chain(&code.z_stabilizers) {
                assert!(
                    (2..=4).contains(&s.len()),
                    "{spec:?} has a weight-{} stabilizer",
                    s.len()
                );
            }
        }
    }

    #[test]
    fn stabilizer_group_is_abelian() {
        for spec in all_specs_up_to(6) {
            let code = build_code(spec);
            for xs in &code.x_stab_masks {
                for zs in &code.z_stab_masks {
                    let overlap = xs
                        .iter_ones()
                        .filter(|&q| zs.get(q))
                        .count();
                    assert_eq!(overlap % 2, 0, "{spec:?} X/Z stabilizers overlap oddly");
                }
            }
        }
    }

    #[test]
    fn total_stabilizer_rank_is_n_minus_k() {
        for spec in all_specs_up_to(6) {
            let code = build_code(spec);
            let all: Vec<Bits> = Vec::new();
            drop(all);
            let rx = gf2_rank(&code.x_stab_masks);
            let rz = gf2_rank(&code.z_stab_masks);
            assert_eq!(rx + rz, spec.n() - spec.k(), "{spec:?}");
        }
    }

    #[test]
    fn logical_pairing_and_commutation() {
        for spec in all_specs_up_to(6) {
            let code = build_code(spec);
            let k = spec.k();
            assert_eq!(code.logical_x.len(), k);
            assert_eq!(code.logical_z.len(), k);
            for i in 0..k {
                for j in 0..k {
                    let commute = code.logical_x[i].commutes_with(&code.logical_z[j]);
                    assert_eq!(commute, i != j, "{spec:?} pairing ({i},{j})");
                }
                // logicals commute with every stabilizer
                for b in [Basis::XChecks, Basis::ZChecks] {
                    for s in 0..code.stabilizers(b).len() {
                        let g = code.stabilizer_op(b, s);
                        assert!(code.logical_x[i].commutes_with(&g), "{spec:?}");
                        assert!(code.logical_z[i].commutes_with(&g), "{spec:?}");
                    }
                }
                assert_eq!(code.logical_x[i].weight(), spec.d);
                assert_eq!(code.logical_z[i].weight(), spec.d);
            }
            for i in 0..k {
                for j in 0..k {
                    assert!(code.logical_x[i].commutes_with(&code.logical_x[j]));
                    assert!(code.logical_z[i].commutes_with(&code.logical_z[j]));
                }
            }
        }
    }

    #[test]
    fn identity_error_has_zero_syndrome() {
        for spec in all_specs_up_to(5) {
            let code = build_code(spec);
            let id = PauliOp::identity(code.n());
            assert!(compute_syndrome(&code, &id, Basis::XChecks).is_zero());
            assert!(compute_syndrome(&code, &id, Basis::ZChecks).is_zero());
            assert!(!is_logical_failure(&code, &id).unwrap());
        }
    }

    #[test]
    fn toric_single_z_triggers_two_adjacent_x_checks() {
        let code = build_code(CodeSpec::new(CodeFamily::Toric, 6).unwrap());
        for qubit in 0..code.n() {
            let err = PauliOp::single(code.n(), qubit, PauliKind::Z);
            let syn = compute_syndrome(&code, &err, Basis::XChecks);
            assert_eq!(syn.count_ones(), 2, "qubit {qubit}");
            // adjacency: both triggered stars contain the qubit
            for check in syn.iter_ones() {
                assert!(code.x_stabilizers[check].contains(&(qubit as u32)));
            }
        }
    }

    #[test]
    fn surface_single_z_boundary_counts() {
        let code = build_code(CodeSpec::new(CodeFamily::Surface, 4).unwrap());
        let mut weight1 = 0;
        for qubit in 0..code.n() {
            let err = PauliOp::single(code.n(), qubit, PauliKind::Z);
            let w = compute_syndrome(&code, &err, Basis::XChecks).count_ones();
            assert!((1..=2).contains(&w), "qubit {qubit} weight {w}");
            if w == 1 {
                weight1 += 1;
                // boundary qubits only: coordinate on the top or bottom row
                let (i, _) = code.qubit_coords[qubit];
                assert!(i == 0 || i == 2 * 4 - 2, "qubit {qubit} not on X boundary");
            }
        }
        // d qubits on each of the two X-type boundaries
        assert_eq!(weight1, 8);
    }

    #[test]
    fn rotated_surface_boundary_x_error_triggers_one_z_check() {
        let code = build_code(CodeSpec::new(CodeFamily::RotatedSurface, 3).unwrap());
        let mut saw_single = false;
        for qubit in 0..code.n() {
            let err = PauliOp::single(code.n(), qubit, PauliKind::X);
            let w = compute_syndrome(&code, &err, Basis::ZChecks).count_ones();
            assert!((1..=2).contains(&w));
            if w == 1 {
                saw_single = true;
            }
        }
        assert!(saw_single);
    }

    #[test]
    fn syndrome_is_linear() {
        let code = build_code(CodeSpec::new(CodeFamily::RotatedToric, 4).unwrap());
        let p = PauliOp::from_components(
            code.n(),
            [(0, PauliKind::Y), (5, PauliKind::Z), (9, PauliKind::X)],
        );
        let q = PauliOp::from_components(code.n(), [(5, PauliKind::X), (12, PauliKind::Y)]);
        for basis in [Basis::XChecks, Basis::ZChecks] {
            let mut lhs = compute_syndrome(&code, &p.product(&q), basis);
            let sp = compute_syndrome(&code, &p, basis);
            let sq = compute_syndrome(&code, &q, basis);
            lhs.xor_assign(&sp);
            lhs.xor_assign(&sq);
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn stabilizers_and_logicals_classify_correctly() {
        for spec in all_specs_up_to(5) {
            let code = build_code(spec);
            let g = code.stabilizer_op(Basis::XChecks, 0);
            assert!(!is_logical_failure(&code, &g).unwrap(), "{spec:?}");
            assert!(is_logical_failure(&code, &code.logical_z[0].clone()).unwrap());
            assert!(is_logical_failure(&code, &code.logical_x[0].clone()).unwrap());
            // product of a logical with a stabilizer is still a failure
            let mixed = code.logical_z[0].product(&g);
            assert!(is_logical_failure(&code, &mixed).unwrap());
            // nonzero-syndrome residual is a contract violation
            let bad = PauliOp::single(code.n(), 0, PauliKind::Z);
            assert!(is_logical_failure(&code, &bad).is_err());
        }
    }

    /// Minimum weight of a nontrivial logical of one type, by exhaustive
    /// weight-limited search over that basis's binary vectors. A Pauli's
    /// weight is at least the weight of either of its halves, so per-basis
    /// searches bound the full Pauli search.
    fn min_logical_weight_at_most(code: &TopologicalCode, pauli_basis: Basis, wmax: usize) -> Option<usize> {
        let n = code.n();
        // commuting condition: against the opposite check type
        let check_masks = code.stabilizer_masks(pauli_basis.other());
        // triviality: membership in the same-type stabilizer row space
        let mut basis_rows: Vec<Bits> = Vec::new();
        for m in code.stabilizer_masks(pauli_basis) {
            let mut row = m.clone();
            for b in &basis_rows {
                let lead = b.iter_ones().next().unwrap();
                if row.get(lead) {
                    row.xor_assign(b);
                }
            }
            if !row.is_zero() {
                basis_rows.push(row);
                basis_rows.sort_by_key(|r| r.iter_ones().next().unwrap());
            }
        }
        let in_rowspace = |v: &Bits| {
            let mut v = v.clone();
            for b in &basis_rows {
                let lead = b.iter_ones().next().unwrap();
                if v.get(lead) {
                    v.xor_assign(b);
                }
            }
            v.is_zero()
        };
        for w in 1..=wmax {
            let mut found = false;
            for_each_combination(n, w, |supp| {
                if found {
                    return;
                }
                let v = Bits::from_indices(n, supp.iter().copied());
                if check_masks.iter().all(|m| !m.and_parity(&v)) && !in_rowspace(&v) {
                    found = true;
                }
            });
            if found {
                return Some(w);
            }
        }
        None
    }

    #[test]
    fn min_logical_weight_equals_d_small() {
        for spec in [
            CodeSpec::new(CodeFamily::Toric, 4).unwrap(),
            CodeSpec::new(CodeFamily::RotatedToric, 4).unwrap(),
            CodeSpec::new(CodeFamily::RotatedToric, 6).unwrap(),
            CodeSpec::new(CodeFamily::Surface, 3).unwrap(),
            CodeSpec::new(CodeFamily::Surface, 4).unwrap(),
            CodeSpec::new(CodeFamily::RotatedSurface, 3).unwrap(),
            CodeSpec::new(CodeFamily::RotatedSurface, 5).unwrap(),
        ] {
            let code = build_code(spec);
            for basis in [Basis::XChecks, Basis::ZChecks] {
                // no logical below weight d in either half ...
                assert_eq!(
                    min_logical_weight_at_most(&code, basis, spec.d - 1),
                    None,
                    "{spec:?} {basis:?}"
                );
            }
            // ... and the constructed representatives realize weight d
            assert_eq!(code.logical_z[0].weight(), spec.d);
        }
    }

    #[test]
    #[ignore = "several-second exhaustive search; run with -- --ignored"]
    fn min_logical_weight_equals_d_toric6() {
        let code = build_code(CodeSpec::new(CodeFamily::Toric, 6).unwrap());
        for basis in [Basis::XChecks, Basis::ZChecks] {
            assert_eq!(min_logical_weight_at_most(&code, basis, 5), None);
        }
    }
}
