//! Noise sampling: depolarizing / biased Pauli channels, erasures, and
//! phenomenological measurement flips.
//!
//! Every trial draws from counter-based ChaCha streams keyed by
//! (seed, trial_index, stream tag), so a trial's sample is identical no
//! matter how trials are scheduled across workers. Per-qubit Bernoulli
//! processes are drawn by geometric gap skipping, which matches the i.i.d.
//! per-qubit distribution while touching only the hit qubits.

use crate::code::TopologicalCode;
use crate::pauli::{Bits, PauliKind, PauliOp};
use crate::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    /// Total physical error rate per qubit (and per round).
    pub epsilon: f64,
    /// Bias ratio p_Z / p_X with p_Y = p_X; 1 is the depolarizing channel.
    pub eta: f64,
    pub erasure_rate: f64,
    /// Measurement flip probability per check per round; the final round is
    /// always measured perfectly.
    pub meas_error_rate: f64,
    pub rounds: u32,
}

impl NoiseParams {
    pub fn code_capacity(epsilon: f64) -> Self {
        NoiseParams {
            epsilon,
            eta: 1.0,
            erasure_rate: 0.0,
            meas_error_rate: 0.0,
            rounds: 1,
        }
    }

    pub fn phenomenological(epsilon: f64, rounds: u32) -> Self {
        NoiseParams {
            epsilon,
            eta: 1.0,
            erasure_rate: 0.0,
            meas_error_rate: epsilon,
            rounds,
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_erasure_rate(mut self, rate: f64) -> Self {
        self.erasure_rate = rate;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::InvalidNoise(format!("{name} = {p} not in [0, 1]")))
            }
        };
        prob("epsilon", self.epsilon)?;
        prob("erasure_rate", self.erasure_rate)?;
        prob("meas_error_rate", self.meas_error_rate)?;
        if !(self.eta > 0.0) {
            return Err(Error::InvalidNoise(format!(
                "eta = {} must be positive",
                self.eta
            )));
        }
        if self.rounds < 1 {
            return Err(Error::InvalidNoise("rounds must be at least 1".into()));
        }
        Ok(())
    }

    /// Single-qubit marginals (p_X, p_Y, p_Z) summing to epsilon.
    pub fn pauli_probs(&self) -> (f64, f64, f64) {
        let px = self.epsilon / (2.0 + self.eta);
        (px, px, self.epsilon * self.eta / (2.0 + self.eta))
    }
}

/// Sparse per-trial noise realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseSample {
    /// per-round fresh Pauli errors as (qubit, kind), ascending qubit order
    pub pauli_per_round: Vec<Vec<(u32, PauliKind)>>,
    /// erased qubit indices, ascending
    pub erasures: Vec<u32>,
    /// per-round flipped X-checks / Z-checks; final round empty
    pub meas_flips_x: Vec<Vec<u32>>,
    pub meas_flips_z: Vec<Vec<u32>>,
}

/// Dense per-trial noise realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSample {
    pub pauli_per_round: Vec<PauliOp>,
    pub erasures: Vec<u32>,
    pub meas_flips_x: Vec<Bits>,
    pub meas_flips_z: Vec<Bits>,
}

impl SparseSample {
    pub fn to_dense(&self, code: &TopologicalCode) -> ErrorSample {
        let n = code.n();
        let mx = code.x_stabilizers.len();
        let mz = code.z_stabilizers.len();
        ErrorSample {
            pauli_per_round: self
                .pauli_per_round
                .iter()
                .map(|round| {
                    PauliOp::from_components(n, round.iter().map(|&(q, k)| (q as usize, k)))
                })
                .collect(),
            erasures: self.erasures.clone(),
            meas_flips_x: self
                .meas_flips_x
                .iter()
                .map(|r| Bits::from_indices(mx, r.iter().map(|&c| c as usize)))
                .collect(),
            meas_flips_z: self
                .meas_flips_z
                .iter()
                .map(|r| Bits::from_indices(mz, r.iter().map(|&c| c as usize)))
                .collect(),
        }
    }

    /// Accumulated data error through the end of the block.
    pub fn total_error(&self, n: usize) -> PauliOp {
        let mut p = PauliOp::identity(n);
        for round in &self.pauli_per_round {
            for &(q, kind) in round {
                p.apply(q as usize, kind);
            }
        }
        p
    }
}

const TAG_ERASURE: u64 = 0;
const TAG_PAULI: u64 = 1;
const TAG_MEAS: u64 = 2;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Counter-based stream: the key comes from `seed`, the stream index from
/// (trial, tag). Draw order within a stream is fixed by the sampler.
pub fn trial_rng(seed: u64, trial: u64, tag: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut s = seed;
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut s).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial.wrapping_mul(8).wrapping_add(tag));
    rng
}

/// Visits each index of 0..n hit by an i.i.d. Bernoulli(p) process.
fn sample_hits<R: Rng, F: FnMut(usize, &mut R)>(rng: &mut R, n: usize, p: f64, mut hit: F) {
    if p <= 0.0 || n == 0 {
        return;
    }
    if p >= 1.0 {
        for q in 0..n {
            hit(q, rng);
        }
        return;
    }
    let ln_q = (1.0 - p).ln();
    let mut i = 0usize;
    loop {
        let u: f64 = rng.random();
        let gap = ((1.0 - u).ln() / ln_q) as usize;
        i = i.saturating_add(gap);
        if i >= n {
            return;
        }
        hit(i, rng);
        i += 1;
    }
}

fn draw_kind<R: Rng>(rng: &mut R, px: f64, py: f64, epsilon: f64) -> PauliKind {
    let u: f64 = rng.random::<f64>() * epsilon;
    if u < px {
        PauliKind::X
    } else if u < px + py {
        PauliKind::Y
    } else {
        PauliKind::Z
    }
}

/// Samples one trial. The result depends only on (params, code size, seed,
/// trial) and never on scheduling.
pub fn sample_sparse(
    params: &NoiseParams,
    code: &TopologicalCode,
    seed: u64,
    trial: u64,
) -> SparseSample {
    let n = code.n();
    let rounds = params.rounds as usize;
    let (px, py, _) = params.pauli_probs();

    // erasure locations, then their uniform I/X/Y/Z contents
    let mut erasures = Vec::new();
    let mut erased = Vec::new();
    if params.erasure_rate > 0.0 {
        let mut rng = trial_rng(seed, trial, TAG_ERASURE);
        sample_hits(&mut rng, n, params.erasure_rate, |q, _| {
            erasures.push(q as u32)
        });
        for &q in &erasures {
            let kind = match rng.random_range(0..4u32) {
                0 => None,
                1 => Some(PauliKind::X),
                2 => Some(PauliKind::Y),
                _ => Some(PauliKind::Z),
            };
            if let Some(kind) = kind {
                erased.push((q, kind));
            }
        }
    }

    let mut pauli_per_round = vec![Vec::new(); rounds];
    if params.epsilon > 0.0 {
        let mut rng = trial_rng(seed, trial, TAG_PAULI);
        for round in pauli_per_round.iter_mut() {
            sample_hits(&mut rng, n, params.epsilon, |q, rng| {
                round.push((q as u32, draw_kind(rng, px, py, params.epsilon)));
            });
        }
    }
    // erased qubits carry the uniform draw instead of the channel draw
    if !erasures.is_empty() {
        let first = &mut pauli_per_round[0];
        first.retain(|(q, _)| erasures.binary_search(q).is_err());
        first.extend(erased);
        first.sort_unstable_by_key(|&(q, _)| q);
    }

    let mut meas_flips_x = vec![Vec::new(); rounds];
    let mut meas_flips_z = vec![Vec::new(); rounds];
    if params.meas_error_rate > 0.0 && rounds > 1 {
        let mut rng = trial_rng(seed, trial, TAG_MEAS);
        for round in 0..rounds - 1 {
            sample_hits(
                &mut rng,
                code.x_stabilizers.len(),
                params.meas_error_rate,
                |c, _| meas_flips_x[round].push(c as u32),
            );
            sample_hits(
                &mut rng,
                code.z_stabilizers.len(),
                params.meas_error_rate,
                |c, _| meas_flips_z[round].push(c as u32),
            );
        }
    }

    SparseSample {
        pauli_per_round,
        erasures,
        meas_flips_x,
        meas_flips_z,
    }
}

/// Dense variant of [`sample_sparse`].
pub fn sample(
    params: &NoiseParams,
    code: &TopologicalCode,
    seed: u64,
    trial: u64,
) -> ErrorSample {
    sample_sparse(params, code, seed, trial).to_dense(code)
}

/// Observed syndromes per round and basis: the syndrome of the accumulated
/// data error, XORed with that round's measurement flips.
pub fn observed_syndromes(sample: &ErrorSample, code: &TopologicalCode) -> (Vec<Bits>, Vec<Bits>) {
    use crate::code::{compute_syndrome, Basis};
    let n = code.n();
    let mut acc = PauliOp::identity(n);
    let mut out_x = Vec::with_capacity(sample.pauli_per_round.len());
    let mut out_z = Vec::with_capacity(sample.pauli_per_round.len());
    for (round, err) in sample.pauli_per_round.iter().enumerate() {
        acc.mul_assign(err);
        let mut sx = compute_syndrome(code, &acc, Basis::XChecks);
        let mut sz = compute_syndrome(code, &acc, Basis::ZChecks);
        if round < sample.meas_flips_x.len() {
            sx.xor_assign(&sample.meas_flips_x[round]);
        }
        if round < sample.meas_flips_z.len() {
            sz.xor_assign(&sample.meas_flips_z[round]);
        }
        out_x.push(sx);
        out_z.push(sz);
    }
    (out_x, out_z)
}

/// Per-round syndrome differences; round 0 differs from the all-zero state.
pub fn syndrome_differences(syndromes: &[Bits]) -> Vec<Bits> {
    let mut out = Vec::with_capacity(syndromes.len());
    for (i, s) in syndromes.iter().enumerate() {
        let mut d = s.clone();
        if i > 0 {
            d.xor_assign(&syndromes[i - 1]);
        }
        out.push(d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{build_code, CodeFamily, CodeSpec};

    fn toric6() -> TopologicalCode {
        build_code(CodeSpec::new(CodeFamily::Toric, 6).unwrap())
    }

    #[test]
    fn zero_rate_is_identity() {
        let code = toric6();
        let params = NoiseParams::code_capacity(0.0);
        let s = sample(&params, &code, 7, 0);
        assert!(s.pauli_per_round[0].is_identity());
        assert!(s.erasures.is_empty());
    }

    #[test]
    fn full_rate_hits_every_qubit_with_balanced_kinds() {
        let code = toric6();
        let params = NoiseParams::code_capacity(1.0);
        let mut counts = [0usize; 3];
        let trials = 100_000 / code.n() + 1; // ~1e5 qubit draws
        for trial in 0..trials {
            let s = sample_sparse(&params, &code, 42, trial as u64);
            assert_eq!(s.pauli_per_round[0].len(), code.n());
            for &(_, kind) in &s.pauli_per_round[0] {
                counts[match kind {
                    PauliKind::X => 0,
                    PauliKind::Y => 1,
                    PauliKind::Z => 2,
                }] += 1;
            }
        }
        let total: usize = counts.iter().sum();
        let expect = total as f64 / 3.0;
        let sigma = (total as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for c in counts {
            assert!(
                (c as f64 - expect).abs() < 3.0 * sigma,
                "kind counts {counts:?} outside 3 sigma"
            );
        }
    }

    #[test]
    fn biased_channel_marginals() {
        let code = toric6();
        let params = NoiseParams::code_capacity(0.05).with_eta(1000.0);
        let (px, py, pz) = params.pauli_probs();
        assert!((px + py + pz - params.epsilon).abs() < 1e-12);
        let draws = 1_000_000usize;
        let trials = draws / code.n();
        let mut counts = [0usize; 3];
        for trial in 0..trials {
            let s = sample_sparse(&params, &code, 5, trial as u64);
            for &(_, kind) in &s.pauli_per_round[0] {
                counts[match kind {
                    PauliKind::X => 0,
                    PauliKind::Y => 1,
                    PauliKind::Z => 2,
                }] += 1;
            }
        }
        let n_draws = (trials * code.n()) as f64;
        for (observed, p) in counts.iter().zip([px, py, pz]) {
            let mean = n_draws * p;
            let sigma = (n_draws * p * (1.0 - p)).sqrt();
            assert!(
                (*observed as f64 - mean).abs() < 3.0 * sigma,
                "marginal off: {counts:?}, expected mean {mean}"
            );
        }
    }

    #[test]
    fn erasures_carry_uniform_paulis() {
        let code = toric6();
        let params = NoiseParams::code_capacity(0.0).with_erasure_rate(0.5);
        let mut nontrivial = 0usize;
        let mut total = 0usize;
        for trial in 0..2000 {
            let s = sample_sparse(&params, &code, 11, trial);
            total += s.erasures.len();
            nontrivial += s.pauli_per_round[0].len();
            // errors only on erased qubits
            for &(q, _) in &s.pauli_per_round[0] {
                assert!(s.erasures.binary_search(&q).is_ok());
            }
        }
        // 3/4 of erased qubits carry a nontrivial Pauli
        let expect = total as f64 * 0.75;
        let sigma = (total as f64 * 0.75 * 0.25).sqrt();
        assert!((nontrivial as f64 - expect).abs() < 4.0 * sigma);
    }

    #[test]
    fn deterministic_per_trial_and_independent_of_order() {
        let code = toric6();
        let params = NoiseParams::phenomenological(0.1, 5).with_erasure_rate(0.0);
        let a = sample_sparse(&params, &code, 99, 3);
        let b = sample_sparse(&params, &code, 99, 3);
        assert_eq!(a, b);
        let c = sample_sparse(&params, &code, 99, 4);
        assert_ne!(a, c);
    }

    #[test]
    fn final_round_has_no_measurement_flips() {
        let code = toric6();
        let params = NoiseParams::phenomenological(0.2, 4);
        for trial in 0..50 {
            let s = sample_sparse(&params, &code, 1, trial);
            assert!(s.meas_flips_x.last().unwrap().is_empty());
            assert!(s.meas_flips_z.last().unwrap().is_empty());
        }
    }

    #[test]
    fn measurement_flip_shows_in_two_consecutive_differences() {
        let code = build_code(CodeSpec::new(CodeFamily::RotatedSurface, 3).unwrap());
        let rounds = 4;
        let flipped = 1usize;
        let at = 1usize;
        let sample = ErrorSample {
            pauli_per_round: vec![PauliOp::identity(code.n()); rounds],
            erasures: vec![],
            meas_flips_x: (0..rounds)
                .map(|r| {
                    Bits::from_indices(
                        code.x_stabilizers.len(),
                        (r == at).then_some(flipped).into_iter(),
                    )
                })
                .collect(),
            meas_flips_z: vec![Bits::zeros(code.z_stabilizers.len()); rounds],
        };
        let (sx, _) = observed_syndromes(&sample, &code);
        let diffs = syndrome_differences(&sx);
        for (r, d) in diffs.iter().enumerate() {
            let expect: Vec<usize> = if r == at || r == at + 1 {
                vec![flipped]
            } else {
                vec![]
            };
            assert_eq!(d.iter_ones().collect::<Vec<_>>(), expect, "round {r}");
        }
    }

    #[test]
    fn persistent_data_error_differs_only_once() {
        let code = build_code(CodeSpec::new(CodeFamily::RotatedSurface, 3).unwrap());
        let rounds = 4;
        let mut pauli_per_round = vec![PauliOp::identity(code.n()); rounds];
        pauli_per_round[0] = PauliOp::single(code.n(), 4, PauliKind::Z);
        let sample = ErrorSample {
            pauli_per_round,
            erasures: vec![],
            meas_flips_x: vec![Bits::zeros(code.x_stabilizers.len()); rounds],
            meas_flips_z: vec![Bits::zeros(code.z_stabilizers.len()); rounds],
        };
        let (sx, _) = observed_syndromes(&sample, &code);
        // identical nonzero syndrome every round
        assert!(sx[0].count_ones() > 0);
        for r in 1..rounds {
            assert_eq!(sx[r], sx[0]);
        }
        let diffs = syndrome_differences(&sx);
        assert_eq!(diffs[0], sx[0]);
        for d in &diffs[1..] {
            assert!(d.is_zero());
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(NoiseParams::code_capacity(1.5).validate().is_err());
        assert!(NoiseParams::code_capacity(0.1)
            .with_eta(0.0)
            .validate()
            .is_err());
        assert!(NoiseParams::code_capacity(0.1).validate().is_ok());
    }
}
