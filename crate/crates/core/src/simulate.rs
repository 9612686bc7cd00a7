//! Monte Carlo sampling of the single-letter channel.
//!
//! Draw `i` consumes the three uniforms at stream positions `3i`, `3i + 1`,
//! `3i + 2` of [`crate::rng::Stream`] and maps them by inverse CDF to `(a, x)`,
//! then `(s1, s2)` given `a`, then `(y1, y2)` given `(s1, s2, x)`, each over
//! its mixed-radix cell order with the last variable fastest.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{assemble_joint, ChannelSpec, InputLaw, Target, A, S1, S2, X, Y1, Y2};
use crate::error::{IsacError, Result};
use crate::estimation::{minimal_distortions, EstimatorTable};
use crate::pmf::{flat_index, unflatten, JointPmf, VarId};
use crate::rng::{inverse_cdf, Stream};

const CHUNK: u64 = 1 << 16;

/// Empirical counts over `(A, X, S1, S2, Y1, Y2)`, last variable fastest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleBatch {
    pub n: u64,
    pub seed: u64,
    pub dims: [usize; 6],
    pub counts: Vec<u64>,
}

impl SampleBatch {
    /// Adds the counts of `other`; the seed of `self` is kept.
    pub fn merge(&mut self, other: &SampleBatch) -> Result<()> {
        if self.dims != other.dims {
            return Err(IsacError::AlphabetMismatch(format!(
                "cannot merge batches over {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        self.n += other.n;
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        Ok(())
    }

    /// Relative frequencies as a joint law over the canonical variables.
    pub fn empirical_joint(&self) -> Result<JointPmf> {
        let names = [A, X, S1, S2, Y1, Y2];
        let vars = names
            .iter()
            .zip(self.dims)
            .map(|(n, d)| VarId::new(*n, d))
            .collect();
        let n = self.n as f64;
        JointPmf::new(vars, self.counts.iter().map(|&c| c as f64 / n).collect())
    }
}

/// `n` i.i.d. draws from the assembled law, deterministic in `seed`.
pub fn sample(ch: &ChannelSpec, law: &InputLaw, n: u64, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(IsacError::InvalidArgument("sample count must be ≥ 1".into()));
    }
    let al = *ch.alphabets();
    if law.action_size() != al.a || law.input_size() != al.x {
        return Err(IsacError::AlphabetMismatch(
            "law alphabets do not match the channel".into(),
        ));
    }
    let dims = [al.a, al.x, al.s1, al.s2, al.y1, al.y2];
    let p_ax = law.p_ax();
    let states = ch.state_kernel();
    let outputs = ch.output_kernel();

    let chunks: Vec<u64> = (0..n.div_ceil(CHUNK)).collect();
    let partials: Vec<Vec<u64>> = chunks
        .par_iter()
        .map(|&c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n);
            let mut rng = Stream::at(seed, 3 * start);
            let mut counts = vec![0u64; dims.iter().product()];
            for _ in start..end {
                let ax = inverse_cdf(&p_ax, rng.uniform());
                let (a, x) = (ax / al.x, ax % al.x);
                let s = inverse_cdf(&states[a], rng.uniform());
                let (s1, s2) = (s / al.s2, s % al.s2);
                let row = (s1 * al.s2 + s2) * al.x + x;
                let y = inverse_cdf(&outputs[row], rng.uniform());
                let (y1, y2) = (y / al.y2, y % al.y2);
                counts[flat_index(&dims, &[a, x, s1, s2, y1, y2])] += 1;
            }
            counts
        })
        .collect();

    let mut counts = vec![0u64; dims.iter().product()];
    for part in partials {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    Ok(SampleBatch {
        n,
        seed,
        dims,
        counts,
    })
}

/// Average distortion of `est` over the draws of `batch`.
pub fn empirical_distortion(batch: &SampleBatch, est: &EstimatorTable, ch: &ChannelSpec) -> Result<f64> {
    let al = ch.alphabets();
    if batch.dims != [al.a, al.x, al.s1, al.s2, al.y1, al.y2]
        || est.dims() != [al.a, al.x, al.y1, al.y2]
    {
        return Err(IsacError::AlphabetMismatch(
            "batch, estimator and channel alphabets differ".into(),
        ));
    }
    let target = est.target();
    let mut c = [0usize; 6];
    let mut total = 0.0;
    for (flat, &count) in batch.counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        unflatten(&batch.dims, flat, &mut c);
        let s = match target {
            Target::S1 => c[2],
            Target::S2 => c[3],
        };
        let s_hat = est.get(c[0], c[1], c[4], c[5]);
        total += count as f64 * ch.distortion(target, s, s_hat);
    }
    Ok(total / batch.n as f64)
}

/// `Σ |empirical − analytic|` over all cells of the joint law.
pub fn l1_gap(batch: &SampleBatch, ch: &ChannelSpec, law: &InputLaw) -> Result<f64> {
    let joint = assemble_joint(&law.to_full(), ch)?;
    if joint.mass().len() != batch.counts.len() {
        return Err(IsacError::AlphabetMismatch(
            "batch and channel alphabets differ".into(),
        ));
    }
    let n = batch.n as f64;
    Ok(joint
        .mass()
        .iter()
        .zip(&batch.counts)
        .map(|(p, &c)| (c as f64 / n - p).abs())
        .sum())
}

/// Four-sigma binomial tolerance `4·√(D(1 − D)/n)` for a Hamming distortion.
pub fn binomial_tolerance(d: f64, n: u64) -> f64 {
    4.0 * (d * (1.0 - d) / n as f64).max(0.0).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub n: u64,
    pub seed: u64,
    pub d1_analytic: f64,
    pub d1_empirical: f64,
    pub d2_analytic: f64,
    pub d2_empirical: f64,
    pub l1_gap: f64,
}

/// Samples the channel and compares the optimal estimators' empirical
/// distortions and the empirical joint with their analytic values.
pub fn simulate(ch: &ChannelSpec, law: &InputLaw, n: u64, seed: u64) -> Result<SimulationReport> {
    let (e1, e2, d1, d2) = minimal_distortions(ch, law)?;
    let batch = sample(ch, law, n, seed)?;
    Ok(SimulationReport {
        n,
        seed,
        d1_analytic: d1,
        d1_empirical: empirical_distortion(&batch, &e1, ch)?,
        d2_analytic: d2,
        d2_empirical: empirical_distortion(&batch, &e2, ch)?,
        l1_gap: l1_gap(&batch, ch, law)?,
    })
}
