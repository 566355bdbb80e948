//! Exhaustive error enumeration, weight enumerators, threshold fitting, and
//! decoder timing.

use crate::code::{Basis, TopologicalCode};
use crate::combinat::{binomial, for_each_combination_with_prefix, pow3};
use crate::decoder::{Correction, Decoder, DecoderConfig};
use crate::graph::{build_decoding_graph, DecodingGraph};
use crate::noise::{sample_sparse, trial_rng, NoiseParams};
use crate::pauli::PauliKind;
use crate::Error;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Pattern digit order for weight-w enumeration: base-3 digits map to X, Y, Z.
const KINDS: [PauliKind; 3] = [PauliKind::X, PauliKind::Y, PauliKind::Z];

/// Outcome of decoding one explicit error.
#[derive(Debug, Clone, Copy)]
pub struct ShotOutcome {
    pub failure: bool,
    pub syndrome_ok: bool,
}

/// Reusable single-shot decode pipeline over sparse error components.
pub struct ShotRunner<'g> {
    dec: Decoder<'g>,
    gx: &'g DecodingGraph,
    gz: &'g DecodingGraph,
    /// per-qubit logical parity masks: bit i flips when the residual has an
    /// X (resp. Z) component on the qubit
    x_table: Vec<u8>,
    z_table: Vec<u8>,
    flip_x: Vec<u8>,
    flip_z: Vec<u8>,
    touched_x: Vec<u32>,
    touched_z: Vec<u32>,
    sx: Vec<u32>,
    sz: Vec<u32>,
    corr: Correction,
}

impl<'g> ShotRunner<'g> {
    pub fn new(code: &TopologicalCode, gx: &'g DecodingGraph, gz: &'g DecodingGraph) -> Self {
        let n = code.n();
        let k = code.logical_x.len();
        let mut x_table = vec![0u8; n];
        let mut z_table = vec![0u8; n];
        // an X component anticommutes with Z-type logicals, a Z component
        // with X-type ones
        for q in 0..n {
            for (i, lz) in code.logical_z.iter().enumerate() {
                if lz.z_mask.get(q) {
                    x_table[q] |= 1 << i;
                }
            }
            for (i, lx) in code.logical_x.iter().enumerate() {
                if lx.x_mask.get(q) {
                    z_table[q] |= 1 << (k + i);
                }
            }
        }
        ShotRunner {
            dec: Decoder::new(gx, gz),
            gx,
            gz,
            x_table,
            z_table,
            flip_x: vec![0; gx.num_vertices()],
            flip_z: vec![0; gz.num_vertices()],
            touched_x: Vec::new(),
            touched_z: Vec::new(),
            sx: Vec::new(),
            sz: Vec::new(),
            corr: Correction::default(),
        }
    }

    fn flip_gx(&mut self, qubit: u32) {
        let (u, v) = self.gx.endpoints(self.gx.qubit_edge(qubit, 0));
        for w in [u, v] {
            if !self.gx.is_virtual(w) {
                if self.flip_x[w as usize] == 0 {
                    self.touched_x.push(w);
                }
                self.flip_x[w as usize] ^= 1;
            }
        }
    }

    fn flip_gz(&mut self, qubit: u32) {
        let (u, v) = self.gz.endpoints(self.gz.qubit_edge(qubit, 0));
        for w in [u, v] {
            if !self.gz.is_virtual(w) {
                if self.flip_z[w as usize] == 0 {
                    self.touched_z.push(w);
                }
                self.flip_z[w as usize] ^= 1;
            }
        }
    }

    /// Decodes a code-capacity error given as sparse components plus erased
    /// qubits, verifying syndrome reproduction and logical failure.
    pub fn run(
        &mut self,
        config: &DecoderConfig,
        components: &[(u32, PauliKind)],
        erasure_qubits: &[u32],
    ) -> Result<ShotOutcome, Error> {
        self.touched_x.clear();
        self.touched_z.clear();
        for &(q, kind) in components {
            if kind.has_z() {
                self.flip_gx(q);
            }
            if kind.has_x() {
                self.flip_gz(q);
            }
        }
        self.sx.clear();
        self.sz.clear();
        // a vertex can sit in the touched list more than once if its flip
        // count crossed zero; sort + dedup restores set semantics
        for i in 0..self.touched_x.len() {
            let v = self.touched_x[i];
            if self.flip_x[v as usize] == 1 {
                self.sx.push(v);
            }
        }
        for i in 0..self.touched_z.len() {
            let v = self.touched_z[i];
            if self.flip_z[v as usize] == 1 {
                self.sz.push(v);
            }
        }
        self.sx.sort_unstable();
        self.sx.dedup();
        self.sz.sort_unstable();
        self.sz.dedup();

        let erasures: Vec<(u32, u32)> = erasure_qubits.iter().map(|&q| (0, q)).collect();
        let (sx, sz) = (std::mem::take(&mut self.sx), std::mem::take(&mut self.sz));
        let mut corr = std::mem::take(&mut self.corr);
        let res = self.dec.decode_into(config, &erasures, &sx, &sz, &mut corr);
        self.sx = sx;
        self.sz = sz;
        match res {
            Ok(()) => {}
            Err(e) => {
                self.corr = corr;
                self.clear_flips();
                return Err(e);
            }
        }

        // replay the correction on the flip scratch: all real-vertex parities
        // must cancel for the syndrome to be reproduced exactly
        for i in 0..corr.z_fix.len() {
            let q = corr.z_fix[i].1;
            self.flip_gx(q);
        }
        for i in 0..corr.x_fix.len() {
            let q = corr.x_fix[i].1;
            self.flip_gz(q);
        }
        let syndrome_ok = self
            .touched_x
            .iter()
            .all(|&v| self.flip_x[v as usize] == 0)
            && self.touched_z.iter().all(|&v| self.flip_z[v as usize] == 0);

        // residual logical parity from error plus correction components
        let mut parity = 0u8;
        for &(q, kind) in components {
            if kind.has_x() {
                parity ^= self.x_table[q as usize];
            }
            if kind.has_z() {
                parity ^= self.z_table[q as usize];
            }
        }
        for &(_, q) in &corr.x_fix {
            parity ^= self.x_table[q as usize];
        }
        for &(_, q) in &corr.z_fix {
            parity ^= self.z_table[q as usize];
        }
        self.corr = corr;
        self.clear_flips();
        Ok(ShotOutcome {
            failure: parity != 0,
            syndrome_ok,
        })
    }

    fn clear_flips(&mut self) {
        for &v in &self.touched_x {
            self.flip_x[v as usize] = 0;
        }
        for &v in &self.touched_z {
            self.flip_z[v as usize] = 0;
        }
    }
}

/// Failure counts from one exhaustive weight-w enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub weight: usize,
    pub total_cases: u128,
    pub failures: u64,
    /// failures whose components are all X / all Z / all Y / mixed
    pub xxx: u64,
    pub zzz: u64,
    pub yyy: u64,
    pub mixed: u64,
    /// decodes whose output did not reproduce the syndrome; must stay 0
    pub syndrome_mismatches: u64,
}

impl EnumerationResult {
    fn zero(weight: usize, total_cases: u128) -> Self {
        EnumerationResult {
            weight,
            total_cases,
            failures: 0,
            xxx: 0,
            zzz: 0,
            yyy: 0,
            mixed: 0,
            syndrome_mismatches: 0,
        }
    }

    fn merge(mut self, other: &EnumerationResult) -> Self {
        self.failures += other.failures;
        self.xxx += other.xxx;
        self.zzz += other.zzz;
        self.yyy += other.yyy;
        self.mixed += other.mixed;
        self.syndrome_mismatches += other.syndrome_mismatches;
        self
    }
}

/// Decodes every weight-`weight` Pauli error on `code` (no erasures) and
/// counts logical failures, split by error type.
pub fn enumerate_undecodable(
    code: &TopologicalCode,
    config: &DecoderConfig,
    weight: usize,
    budget: u128,
) -> Result<EnumerationResult, Error> {
    let n = code.n();
    assert!(weight >= 1 && weight <= n);
    let total = binomial(n, weight) * pow3(weight);
    if total > budget {
        return Err(Error::EnumerationBudget {
            required: total,
            budget,
        });
    }
    let gx = build_decoding_graph(code, Basis::XChecks, 1);
    let gz = build_decoding_graph(code, Basis::ZChecks, 1);

    // block-partition the support space on the first one or two indices
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    if weight == 1 {
        blocks.push(vec![]);
    } else if weight == 2 {
        for i in 0..n {
            blocks.push(vec![i]);
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                blocks.push(vec![i, j]);
            }
        }
    }

    let result = blocks
        .par_iter()
        .map(|prefix| {
            let mut runner = ShotRunner::new(code, &gx, &gz);
            let mut acc = EnumerationResult::zero(weight, total);
            let mut components: Vec<(u32, PauliKind)> = Vec::with_capacity(weight);
            let rest_from = prefix.last().map_or(0, |&i| i + 1);
            for_each_combination_with_prefix(
                prefix,
                rest_from,
                n,
                weight - prefix.len(),
                &mut |support| {
                    enumerate_patterns(&mut runner, config, support, &mut components, &mut acc);
                },
            );
            acc
        })
        .reduce(
            || EnumerationResult::zero(weight, total),
            |a, b| a.merge(&b),
        );
    debug_assert_eq!(
        result.failures,
        result.xxx + result.zzz + result.yyy + result.mixed
    );
    Ok(result)
}

fn enumerate_patterns(
    runner: &mut ShotRunner,
    config: &DecoderConfig,
    support: &[usize],
    components: &mut Vec<(u32, PauliKind)>,
    acc: &mut EnumerationResult,
) {
    let w = support.len();
    let patterns = 3usize.pow(w as u32);
    for mut pattern in 0..patterns {
        components.clear();
        let mut counts = [0usize; 3];
        for &q in support {
            let digit = pattern % 3;
            pattern /= 3;
            counts[digit] += 1;
            components.push((q as u32, KINDS[digit]));
        }
        let outcome = runner
            .run(config, components, &[])
            .expect("enumeration inputs are well-formed");
        if !outcome.syndrome_ok {
            acc.syndrome_mismatches += 1;
        }
        if outcome.failure {
            acc.failures += 1;
            if counts[0] == w {
                acc.xxx += 1;
            } else if counts[1] == w {
                acc.yyy += 1;
            } else if counts[2] == w {
                acc.zzz += 1;
            } else {
                acc.mixed += 1;
            }
        }
    }
}

/// Outcome of a distance-guarantee sweep over erasures plus Pauli errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMode {
    Exhaustive { cases: u128 },
    Randomized { trials: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuaranteeResult {
    pub erasure_count: usize,
    pub pauli_weight: usize,
    pub mode: SweepMode,
    pub failures: u64,
    pub syndrome_mismatches: u64,
}

/// Checks the r-erasure / weight-t guarantee: every case is decoded and
/// counted. Exhaustive when the case count fits `exhaustive_budget`,
/// otherwise `randomized_trials` uniformly sampled cases.
pub fn check_guarantee(
    code: &TopologicalCode,
    config: &DecoderConfig,
    erasure_count: usize,
    pauli_weight: usize,
    exhaustive_budget: u128,
    randomized_trials: u64,
    seed: u64,
) -> GuaranteeResult {
    let n = code.n();
    let cases = binomial(n, erasure_count)
        * 4u128.pow(erasure_count as u32)
        * binomial(n - erasure_count, pauli_weight)
        * pow3(pauli_weight);
    let gx = build_decoding_graph(code, Basis::XChecks, 1);
    let gz = build_decoding_graph(code, Basis::ZChecks, 1);

    if cases <= exhaustive_budget {
        let (failures, mismatches) =
            guarantee_exhaustive(code, &gx, &gz, config, erasure_count, pauli_weight);
        GuaranteeResult {
            erasure_count,
            pauli_weight,
            mode: SweepMode::Exhaustive { cases },
            failures,
            syndrome_mismatches: mismatches,
        }
    } else {
        let (failures, mismatches) = guarantee_randomized(
            code,
            &gx,
            &gz,
            config,
            erasure_count,
            pauli_weight,
            randomized_trials,
            seed,
        );
        GuaranteeResult {
            erasure_count,
            pauli_weight,
            mode: SweepMode::Randomized {
                trials: randomized_trials,
            },
            failures,
            syndrome_mismatches: mismatches,
        }
    }
}

fn guarantee_exhaustive(
    code: &TopologicalCode,
    gx: &DecodingGraph,
    gz: &DecodingGraph,
    config: &DecoderConfig,
    r: usize,
    t: usize,
) -> (u64, u64) {
    let n = code.n();
    // parallelize over the erasure support's first index (or run serially
    // for r = 0)
    let firsts: Vec<Option<usize>> = if r == 0 {
        vec![None]
    } else {
        (0..n).map(Some).collect()
    };
    firsts
        .par_iter()
        .map(|&first| {
            let mut runner = ShotRunner::new(code, gx, gz);
            let mut failures = 0u64;
            let mut mismatches = 0u64;
            let mut visit = |erasure: &[usize]| {
                let erasure_u32: Vec<u32> = erasure.iter().map(|&q| q as u32).collect();
                let rest: Vec<usize> = (0..n).filter(|q| !erasure.contains(q)).collect();
                // every internal pattern of the erased qubits
                for mut pattern in 0..4usize.pow(r as u32) {
                    let mut base: Vec<(u32, PauliKind)> = Vec::with_capacity(r + t);
                    for &q in erasure {
                        let digit = pattern % 4;
                        pattern /= 4;
                        if digit > 0 {
                            base.push((q as u32, KINDS[digit - 1]));
                        }
                    }
                    // every weight-t Pauli on the remaining qubits
                    if t == 0 {
                        let outcome = runner.run(config, &base, &erasure_u32).unwrap();
                        failures += outcome.failure as u64;
                        mismatches += !outcome.syndrome_ok as u64;
                    } else {
                        crate::combinat::for_each_combination(rest.len(), t, |supp| {
                            let mut components = base.clone();
                            let start = components.len();
                            components.extend(supp.iter().map(|&i| (rest[i] as u32, KINDS[0])));
                            for mut pat in 0..3usize.pow(t as u32) {
                                for (slot, _) in supp.iter().enumerate() {
                                    components[start + slot].1 = KINDS[pat % 3];
                                    pat /= 3;
                                }
                                let outcome = runner.run(config, &components, &erasure_u32).unwrap();
                                failures += outcome.failure as u64;
                                mismatches += !outcome.syndrome_ok as u64;
                            }
                        });
                    }
                }
            };
            match first {
                None => visit(&[]),
                Some(first) => {
                    for_each_combination_with_prefix(&[first], first + 1, n, r - 1, &mut |er| {
                        visit(er)
                    });
                }
            }
            (failures, mismatches)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

#[allow(clippy::too_many_arguments)]
fn guarantee_randomized(
    code: &TopologicalCode,
    gx: &DecodingGraph,
    gz: &DecodingGraph,
    config: &DecoderConfig,
    r: usize,
    t: usize,
    trials: u64,
    seed: u64,
) -> (u64, u64) {
    let n = code.n();
    const BATCH: u64 = 4096;
    let batches: Vec<u64> = (0..trials.div_ceil(BATCH)).collect();
    batches
        .par_iter()
        .map(|&batch| {
            let mut runner = ShotRunner::new(code, gx, gz);
            let mut failures = 0u64;
            let mut mismatches = 0u64;
            let lo = batch * BATCH;
            let hi = (lo + BATCH).min(trials);
            let mut pool: Vec<u32> = (0..n as u32).collect();
            for trial in lo..hi {
                let mut rng = trial_rng(seed, trial, 7);
                // partial Fisher-Yates: first r entries become the erasure,
                // the next t the Pauli support
                for i in 0..(r + t) {
                    let j = rng.random_range(i..n);
                    pool.swap(i, j);
                }
                let mut erasure: Vec<u32> = pool[..r].to_vec();
                erasure.sort_unstable();
                let mut components: Vec<(u32, PauliKind)> = Vec::with_capacity(r + t);
                for &q in &erasure {
                    let digit = rng.random_range(0..4u32);
                    if digit > 0 {
                        components.push((q, KINDS[digit as usize - 1]));
                    }
                }
                let mut support: Vec<u32> = pool[r..r + t].to_vec();
                support.sort_unstable();
                for &q in &support {
                    components.push((q, KINDS[rng.random_range(0..3u32) as usize]));
                }
                let outcome = runner.run(config, &components, &erasure).unwrap();
                failures += outcome.failure as u64;
                mismatches += !outcome.syndrome_ok as u64;
            }
            (failures, mismatches)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Erasure-only sweep decoded by peeling alone (no cluster growth).
pub fn check_peeling_guarantee(
    code: &TopologicalCode,
    erasure_count: usize,
    exhaustive_budget: u128,
    randomized_trials: u64,
    seed: u64,
) -> GuaranteeResult {
    // UF on a pure-erasure input never grows clusters, so the UF pipeline
    // *is* the peeling decoder here; the sweep below exercises it with t=0.
    check_guarantee(
        code,
        &DecoderConfig::uf(),
        erasure_count,
        0,
        exhaustive_budget,
        randomized_trials,
        seed,
    )
}

/// Weight enumerator of undecodable errors up to w_max: a[i] counts the
/// weight-i Paulis the decoder fails on.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightEnumerator {
    pub n: usize,
    pub w_max: usize,
    /// a[0] is unused and always 0
    pub a: Vec<u64>,
}

impl WeightEnumerator {
    pub fn from_counts(n: usize, counts: &[(usize, u64)]) -> Self {
        let w_max = counts.iter().map(|&(w, _)| w).max().unwrap_or(0);
        let mut a = vec![0u64; w_max + 1];
        for &(w, count) in counts {
            a[w] = count;
        }
        WeightEnumerator { n, w_max, a }
    }
}

/// Truncated logical error rate at depolarizing rate epsilon: the weight-i
/// term is a_i (eps/3)^i (1-eps)^(n-i). A lower bound when the enumerator
/// stops at w_max.
pub fn logical_error_rate(enumerator: &WeightEnumerator, epsilon: f64) -> f64 {
    let mut total = 0.0;
    for (w, &count) in enumerator.a.iter().enumerate() {
        if count == 0 {
            continue;
        }
        total += count as f64
            * (epsilon / 3.0).powi(w as i32)
            * (1.0 - epsilon).powi((enumerator.n - w) as i32);
    }
    total
}

/// One Monte Carlo measurement entering a threshold fit.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThresholdSample {
    pub d: usize,
    pub epsilon: f64,
    pub p_l: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingFit {
    pub nu: f64,
    pub tau: f64,
    pub poly_coeffs: Vec<f64>,
    pub poly_degree: usize,
    pub residual: f64,
}

/// Fits the finite-size scaling ansatz p_L = f(d^(1/nu) (eps - tau)) with a
/// polynomial f, by grid search over nu (step 0.01) and tau (step 0.01%).
pub fn fit_threshold(
    samples: &[ThresholdSample],
    poly_degree: usize,
) -> Result<ScalingFit, Error> {
    let mut distances: Vec<usize> = samples.iter().map(|s| s.d).collect();
    distances.sort_unstable();
    distances.dedup();
    if distances.len() < 3 {
        return Err(Error::FitRejected(format!(
            "need at least 3 distances, got {}",
            distances.len()
        )));
    }
    for &d in &distances {
        let mut eps: Vec<f64> = samples
            .iter()
            .filter(|s| s.d == d)
            .map(|s| s.epsilon)
            .collect();
        eps.sort_by(f64::total_cmp);
        eps.dedup();
        if eps.len() < 4 {
            return Err(Error::FitRejected(format!(
                "need at least 4 epsilon points per distance, got {} for d={d}",
                eps.len()
            )));
        }
    }
    if samples.iter().any(|s| !(s.stderr > 0.0)) {
        return Err(Error::FitRejected("all stderr must be positive".into()));
    }

    let weights: Vec<f64> = samples.iter().map(|s| 1.0 / (s.stderr * s.stderr)).collect();
    let flat = {
        let wsum: f64 = weights.iter().sum();
        let mean: f64 = samples
            .iter()
            .zip(&weights)
            .map(|(s, w)| w * s.p_l)
            .sum::<f64>()
            / wsum;
        samples
            .iter()
            .zip(&weights)
            .map(|(s, w)| w * (s.p_l - mean) * (s.p_l - mean))
            .sum::<f64>()
    };

    let eps_min = samples.iter().map(|s| s.epsilon).fold(f64::INFINITY, f64::min);
    let eps_max = samples
        .iter()
        .map(|s| s.epsilon)
        .fold(f64::NEG_INFINITY, f64::max);
    const TAU_STEP: f64 = 1e-4;
    const NU_STEP: f64 = 0.01;
    let tau_steps = ((eps_max - eps_min) / TAU_STEP).round() as usize;
    if tau_steps == 0 {
        return Err(Error::FitRejected("epsilon range is degenerate".into()));
    }

    let nu_grid: Vec<f64> = (50..=200).map(|i| i as f64 * NU_STEP).collect();
    let best = nu_grid
        .par_iter()
        .map(|&nu| {
            let mut best: Option<(f64, f64, f64, Vec<f64>)> = None; // (sse, nu, tau, coeffs)
            let mut xs = vec![0.0; samples.len()];
            for step in 0..=tau_steps {
                let tau = eps_min + step as f64 * TAU_STEP;
                for (x, s) in xs.iter_mut().zip(samples) {
                    *x = (s.d as f64).powf(1.0 / nu) * (s.epsilon - tau);
                }
                if let Some((sse, coeffs)) = weighted_polyfit(&xs, samples, &weights, poly_degree)
                {
                    if best.as_ref().is_none_or(|b| sse < b.0) {
                        best = Some((sse, nu, tau, coeffs));
                    }
                }
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, b) => b,
                (a, None) => a,
                (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
            },
        );

    let (sse, nu, tau, coeffs) =
        best.ok_or_else(|| Error::FitRejected("no admissible fit found".into()))?;
    // the polynomial nests the flat model, so demand a real improvement
    if sse >= 0.5 * flat {
        return Err(Error::FitRejected(format!(
            "no crossing: best residual {sse:.3e} vs flat baseline {flat:.3e}"
        )));
    }
    Ok(ScalingFit {
        nu,
        tau,
        poly_coeffs: coeffs,
        poly_degree,
        residual: sse,
    })
}

/// Weighted least-squares polynomial fit; returns (sse, coefficients).
fn weighted_polyfit(
    xs: &[f64],
    samples: &[ThresholdSample],
    weights: &[f64],
    degree: usize,
) -> Option<(f64, Vec<f64>)> {
    let k = degree + 1;
    let mut ata = vec![0.0; k * k];
    let mut atb = vec![0.0; k];
    let mut powers = vec![0.0; k];
    for ((&x, s), &w) in xs.iter().zip(samples).zip(weights) {
        let mut p = 1.0;
        for slot in powers.iter_mut() {
            *slot = p;
            p *= x;
        }
        for i in 0..k {
            for j in 0..k {
                ata[i * k + j] += w * powers[i] * powers[j];
            }
            atb[i] += w * powers[i] * s.p_l;
        }
    }
    let coeffs = solve_linear(&mut ata, &mut atb, k)?;
    let mut sse = 0.0;
    for ((&x, s), &w) in xs.iter().zip(samples).zip(weights) {
        let mut fx = 0.0;
        let mut p = 1.0;
        for &c in &coeffs {
            fx += c * p;
            p *= x;
        }
        let r = s.p_l - fx;
        sse += w * r * r;
    }
    Some((sse, coeffs))
}

/// Gaussian elimination with partial pivoting on a k-by-k system.
fn solve_linear(a: &mut [f64], b: &mut [f64], k: usize) -> Option<Vec<f64>> {
    for col in 0..k {
        let pivot = (col..k).max_by(|&i, &j| {
            a[i * k + col]
                .abs()
                .total_cmp(&a[j * k + col].abs())
        })?;
        if a[pivot * k + col].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for j in 0..k {
                a.swap(col * k + j, pivot * k + j);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * k + col];
        for row in 0..k {
            if row == col {
                continue;
            }
            let factor = a[row * k + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for j in col..k {
                a[row * k + j] -= factor * a[col * k + j];
            }
            b[row] -= factor * b[col];
        }
    }
    Some((0..k).map(|i| b[i] / a[i * k + i]).collect())
}

/// Ordinary least-squares line fit returning (slope, intercept, r^2).
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Mean decode time of one configuration at a given error rate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BenchResult {
    pub trials: u64,
    pub mean_ns: f64,
}

/// Times pure decode calls (sampling and verification excluded) over
/// pre-generated code-capacity errors, single-threaded.
pub fn benchmark_decode(
    code: &TopologicalCode,
    config: &DecoderConfig,
    epsilon: f64,
    trials: u64,
    seed: u64,
) -> Result<BenchResult, Error> {
    if trials == 0 {
        return Err(Error::InvalidPlan("benchmark needs at least one trial".into()));
    }
    let params = NoiseParams::code_capacity(epsilon);
    params.validate()?;
    let gx = build_decoding_graph(code, Basis::XChecks, 1);
    let gz = build_decoding_graph(code, Basis::ZChecks, 1);
    let mut runner = ShotRunner::new(code, &gx, &gz);
    let mut total_ns = 0u128;
    const BATCH: u64 = 1024;
    let mut done = 0u64;
    let mut batch_inputs: Vec<(Vec<u32>, Vec<u32>)> = Vec::with_capacity(BATCH as usize);
    while done < trials {
        let count = BATCH.min(trials - done);
        batch_inputs.clear();
        for trial in done..done + count {
            let s = sample_sparse(&params, code, seed, trial);
            let (sx, sz) = sparse_syndromes(&gx, &gz, &s.pauli_per_round[0]);
            batch_inputs.push((sx, sz));
        }
        let start = std::time::Instant::now();
        for (sx, sz) in &batch_inputs {
            runner
                .dec
                .decode_into(config, &[], sx, sz, &mut runner.corr)
                .expect("well-formed decode");
        }
        total_ns += start.elapsed().as_nanos();
        done += count;
    }
    Ok(BenchResult {
        trials,
        mean_ns: total_ns as f64 / trials as f64,
    })
}

fn sparse_syndromes(
    gx: &DecodingGraph,
    gz: &DecodingGraph,
    components: &[(u32, PauliKind)],
) -> (Vec<u32>, Vec<u32>) {
    let mut flips_x = std::collections::BTreeMap::new();
    let mut flips_z = std::collections::BTreeMap::new();
    for &(q, kind) in components {
        if kind.has_z() {
            let (u, v) = gx.endpoints(gx.qubit_edge(q, 0));
            for w in [u, v] {
                if !gx.is_virtual(w) {
                    *flips_x.entry(w).or_insert(0u8) ^= 1;
                }
            }
        }
        if kind.has_x() {
            let (u, v) = gz.endpoints(gz.qubit_edge(q, 0));
            for w in [u, v] {
                if !gz.is_virtual(w) {
                    *flips_z.entry(w).or_insert(0u8) ^= 1;
                }
            }
        }
    }
    (
        flips_x
            .into_iter()
            .filter(|&(_, f)| f == 1)
            .map(|(v, _)| v)
            .collect(),
        flips_z
            .into_iter()
            .filter(|&(_, f)| f == 1)
            .map(|(v, _)| v)
            .collect(),
    )
}
