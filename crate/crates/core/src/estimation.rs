//! Per-letter state estimators at the transmitter.
//!
//! The transmitter sees `(a, x, y1, y2)` and picks the estimate minimizing the
//! posterior expected distortion `Σ_s P(s | a, x, y1, y2)·d(s, ŝ)`.

use serde::Serialize;

use crate::channel::{assemble_joint, ChannelSpec, InputLaw, Target, A};
use crate::error::{IsacError, Result};
use crate::pmf::{flat_index, unflatten, JointPmf, ZERO_MASS};

/// Relative slack under which two posterior costs count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

/// Deterministic map `(a, x, y1, y2) → ŝ`, stored with `y2` fastest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EstimatorTable {
    target: Target,
    dims: [usize; 4],
    estimate_size: usize,
    table: Vec<usize>,
}

impl EstimatorTable {
    pub fn new(
        target: Target,
        dims: [usize; 4],
        estimate_size: usize,
        table: Vec<usize>,
    ) -> Result<Self> {
        if table.len() != dims.iter().product::<usize>() {
            return Err(IsacError::AlphabetMismatch(format!(
                "estimator table has {} entries for domain {:?}",
                table.len(),
                dims
            )));
        }
        if let Some(bad) = table.iter().find(|&&e| e >= estimate_size) {
            return Err(IsacError::AlphabetMismatch(format!(
                "estimate {bad} outside an alphabet of size {estimate_size}"
            )));
        }
        Ok(EstimatorTable {
            target,
            dims,
            estimate_size,
            table,
        })
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn entries(&self) -> &[usize] {
        &self.table
    }

    pub fn get(&self, a: usize, x: usize, y1: usize, y2: usize) -> usize {
        self.table[flat_index(&self.dims, &[a, x, y1, y2])]
    }

    fn check_matches(&self, ch: &ChannelSpec) -> Result<()> {
        let al = ch.alphabets();
        if self.dims != [al.a, al.x, al.y1, al.y2]
            || self.estimate_size != ch.estimate_size(self.target)
        {
            return Err(IsacError::AlphabetMismatch(format!(
                "estimator domain {:?} does not match the channel",
                self.dims
            )));
        }
        Ok(())
    }
}

/// Joint law over the canonical `(A, X, S1, S2, Y1, Y2)` order, auxiliary summed out.
pub(crate) fn observable_joint(law: &InputLaw, ch: &ChannelSpec) -> Result<JointPmf> {
    let joint = assemble_joint(&law.to_full(), ch)?;
    debug_assert_eq!(joint.vars()[0].name, A);
    Ok(joint)
}

/// Unnormalized posterior costs: `cost[cell][ŝ] = Σ_s P(a, x, y1, y2, s)·d(s, ŝ)`
/// together with the mass of every `(a, x, y1, y2)` cell.
pub(crate) fn posterior_costs(
    joint: &JointPmf,
    ch: &ChannelSpec,
    target: Target,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let al = ch.alphabets();
    let dims = [al.a, al.x, al.y1, al.y2];
    let cells = dims.iter().product::<usize>();
    let hat = ch.estimate_size(target);
    let mut cost = vec![vec![0.0; hat]; cells];
    let mut mass = vec![0.0; cells];
    let sizes = joint.sizes();
    let mut c = vec![0; sizes.len()];
    for (flat, &m) in joint.mass().iter().enumerate() {
        if m == 0.0 {
            continue;
        }
        unflatten(&sizes, flat, &mut c);
        let (a, x, s1, s2, y1, y2) = (c[0], c[1], c[2], c[3], c[4], c[5]);
        let s = match target {
            Target::S1 => s1,
            Target::S2 => s2,
        };
        let cell = flat_index(&dims, &[a, x, y1, y2]);
        mass[cell] += m;
        for (s_hat, slot) in cost[cell].iter_mut().enumerate() {
            *slot += m * ch.distortion(target, s, s_hat);
        }
    }
    (cost, mass)
}

pub(crate) fn optimal_from_joint(
    joint: &JointPmf,
    ch: &ChannelSpec,
    target: Target,
) -> Result<EstimatorTable> {
    let al = ch.alphabets();
    let (cost, mass) = posterior_costs(joint, ch, target);
    let table = cost
        .iter()
        .zip(&mass)
        .map(|(row, &m)| {
            if m <= ZERO_MASS {
                return 0;
            }
            let best = row.iter().copied().fold(f64::INFINITY, f64::min);
            row.iter()
                .position(|&c| c <= best + TIE_TOLERANCE * m)
                .unwrap_or(0)
        })
        .collect();
    EstimatorTable::new(
        target,
        [al.a, al.x, al.y1, al.y2],
        ch.estimate_size(target),
        table,
    )
}

pub(crate) fn distortion_from_joint(
    joint: &JointPmf,
    ch: &ChannelSpec,
    est: &EstimatorTable,
) -> Result<f64> {
    est.check_matches(ch)?;
    let sizes = joint.sizes();
    let mut c = vec![0; sizes.len()];
    let mut total = 0.0;
    for (flat, &m) in joint.mass().iter().enumerate() {
        if m == 0.0 {
            continue;
        }
        unflatten(&sizes, flat, &mut c);
        let s = match est.target() {
            Target::S1 => c[2],
            Target::S2 => c[3],
        };
        let s_hat = est.get(c[0], c[1], c[4], c[5]);
        total += m * ch.distortion(est.target(), s, s_hat);
    }
    Ok(total)
}

/// Optimal deterministic estimator of state `target`; ties go to the smallest
/// estimate index and zero-mass observations map to index 0.
pub fn optimal_estimator(
    ch: &ChannelSpec,
    law: &InputLaw,
    target: Target,
) -> Result<EstimatorTable> {
    let joint = observable_joint(law, ch)?;
    optimal_from_joint(&joint, ch, target)
}

/// `E[d(S, est(A, X, Y1, Y2))]` under the assembled single-letter law.
pub fn expected_distortion(ch: &ChannelSpec, law: &InputLaw, est: &EstimatorTable) -> Result<f64> {
    let joint = observable_joint(law, ch)?;
    distortion_from_joint(&joint, ch, est)
}

/// Optimal estimators for both states and their distortions `(d1, d2)`.
pub fn minimal_distortions(
    ch: &ChannelSpec,
    law: &InputLaw,
) -> Result<(EstimatorTable, EstimatorTable, f64, f64)> {
    let joint = observable_joint(law, ch)?;
    let e1 = optimal_from_joint(&joint, ch, Target::S1)?;
    let e2 = optimal_from_joint(&joint, ch, Target::S2)?;
    let d1 = distortion_from_joint(&joint, ch, &e1)?;
    let d2 = distortion_from_joint(&joint, ch, &e2)?;
    Ok((e1, e2, d1, d2))
}
