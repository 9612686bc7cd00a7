//! Degradedness orderings between the legitimate pair `(Y1, S1)` and the
//! eavesdropper pair `(Y2, S2)`.
//!
//! Physical degradedness asks the joint law to factor as
//! `P(a,x)·P(s1|a)·P(y1|s1,x)·P(y2,s2|y1,s1)`; the reverse ordering swaps the
//! roles of the two pairs. Stochastic degradedness only asks for some kernel
//! `T(y2,s2|y1,s1)` mapping `P(y1,s1|a,x)` onto `P(y2,s2|a,x)`, found here by a
//! phase-one linear program.

use serde::Serialize;

use crate::channel::{assemble_joint, ChannelSpec, InputLaw, A, S1, S2, X, Y1, Y2};
use crate::error::{IsacError, Result};
use crate::pmf::{ConditionalTable, JointPmf};
use crate::simplex::{phase_one, Phase1Outcome};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Conditioning rows lighter than this impose no constraint.
pub const SUPPORT_MASS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// Largest deviation from the required factorization.
    pub residual: f64,
}

/// Kernel `T(y2, s2 | y1, s1)`: rows indexed `y1·|S1| + s1`, columns `y2·|S2| + s2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessKernel {
    pub rows: Vec<Vec<f64>>,
}

impl WitnessKernel {
    /// Degrading kernel of the binary example: `s1 = 0` sends `(y2, s2)` to
    /// `(0, 0)`; `s1 = 1` draws `s2 ~ Bern(α)` and sets `y2 = s2·y1`.
    pub fn binary_example(alpha: f64) -> Self {
        let mut rows = vec![vec![0.0; 4]; 4];
        for y1 in 0..2 {
            rows[y1 * 2][0] = 1.0;
            rows[y1 * 2 + 1][0] = 1.0 - alpha;
            rows[y1 * 2 + 1][y1 * 2 + 1] += alpha;
        }
        WitnessKernel { rows }
    }

    /// Largest deviation of a row sum from one (or of an entry below zero).
    pub fn stochastic_defect(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| {
                let neg = row.iter().fold(0.0, |acc: f64, &v| acc.max(-v));
                neg.max((row.iter().sum::<f64>() - 1.0).abs())
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StochasticVerdict {
    pub holds: bool,
    /// Witness reproduction error when a witness exists, otherwise the
    /// phase-one infeasibility.
    pub residual: f64,
    pub witness: Option<WitnessKernel>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegradednessReport {
    pub tol: f64,
    pub strict: bool,
    pub physically_degraded: Verdict,
    pub reversely_degraded: Verdict,
    pub stochastically_degraded: StochasticVerdict,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(IsacError::InvalidArgument(format!("tolerance must be positive, got {tol}")))
    }
}

/// Uniform `P(a, x)`: every input pair is in the support.
pub fn strict_law(ch: &ChannelSpec) -> InputLaw {
    InputLaw::uniform(ch.alphabets().a, ch.alphabets().x)
}

/// Max deviation between the rows of `fine` (given `coarse.given` followed by
/// `extra` more assignments) and the matching row of `coarse`.
fn max_row_deviation(fine: &ConditionalTable, coarse: &ConditionalTable, extra: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, row) in fine.rows.iter().enumerate() {
        if fine.given_mass[k] < SUPPORT_MASS {
            continue;
        }
        let (Some(row), Some(base)) = (row, &coarse.rows[k / extra]) else {
            continue;
        };
        for (u, v) in row.iter().zip(base) {
            worst = worst.max((u - v).abs());
        }
    }
    worst
}

struct Roles {
    src_state: &'static str,
    src_output: &'static str,
    dst_state: &'static str,
    dst_output: &'static str,
}

const FORWARD: Roles = Roles {
    src_state: S1,
    src_output: Y1,
    dst_state: S2,
    dst_output: Y2,
};

const REVERSE: Roles = Roles {
    src_state: S2,
    src_output: Y2,
    dst_state: S1,
    dst_output: Y1,
};

fn physical_residual(joint: &JointPmf, roles: &Roles) -> Result<f64> {
    let (ax_a, ax_x) = (
        joint.vars()[joint.position(A)?].size,
        joint.vars()[joint.position(X)?].size,
    );
    // State of the stronger pair depends on the action only.
    let state_ax = joint.condition(&[roles.src_state], &[A, X])?;
    let state_a = joint.condition(&[roles.src_state], &[A])?;
    let r1 = max_row_deviation(&state_ax, &state_a, ax_x);
    // Its output depends on (state, input) only.
    let out_full = joint.condition(&[roles.src_output], &[roles.src_state, X, A])?;
    let out_sx = joint.condition(&[roles.src_output], &[roles.src_state, X])?;
    let r2 = max_row_deviation(&out_full, &out_sx, ax_a);
    // The weaker pair is a channel output of the stronger pair alone.
    let dst = [roles.dst_output, roles.dst_state];
    let weak_full = joint.condition(&dst, &[roles.src_output, roles.src_state, A, X])?;
    let weak = joint.condition(&dst, &[roles.src_output, roles.src_state])?;
    let r3 = max_row_deviation(&weak_full, &weak, ax_a * ax_x);
    Ok(r1.max(r2).max(r3))
}

fn verdict(residual: f64, tol: f64) -> Verdict {
    Verdict {
        holds: residual <= tol,
        residual,
    }
}

/// Whether `(Y2, S2)` is a physically degraded version of `(Y1, S1)` on the
/// support of `law`.
pub fn check_physically_degraded(ch: &ChannelSpec, law: &InputLaw, tol: f64) -> Result<Verdict> {
    check_tol(tol)?;
    let joint = assemble_joint(&law.to_full(), ch)?;
    Ok(verdict(physical_residual(&joint, &FORWARD)?, tol))
}

/// Mirror image of [`check_physically_degraded`]: `(Y1, S1)` degraded from `(Y2, S2)`.
pub fn check_reversely_degraded(ch: &ChannelSpec, law: &InputLaw, tol: f64) -> Result<Verdict> {
    check_tol(tol)?;
    let joint = assemble_joint(&law.to_full(), ch)?;
    Ok(verdict(physical_residual(&joint, &REVERSE)?, tol))
}

/// Supported rows of `P(y1,s1|a,x)` and `P(y2,s2|a,x)`.
fn input_conditionals(ch: &ChannelSpec, law: &InputLaw) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    let joint = assemble_joint(&law.to_full(), ch)?;
    let legit = joint.condition(&[Y1, S1], &[A, X])?;
    let eve = joint.condition(&[Y2, S2], &[A, X])?;
    Ok(legit
        .rows
        .iter()
        .zip(&eve.rows)
        .zip(&legit.given_mass)
        .filter(|(_, &m)| m >= SUPPORT_MASS)
        .filter_map(|((l, e), _)| Some((l.clone()?, e.clone()?)))
        .collect())
}

/// Max error of `Σ_{y1,s1} P(y1,s1|a,x)·T(y2,s2|y1,s1)` against
/// `P(y2,s2|a,x)` over the support of `law`, including the kernel's own
/// stochasticity defect.
pub fn witness_residual(ch: &ChannelSpec, law: &InputLaw, witness: &WitnessKernel) -> Result<f64> {
    let al = ch.alphabets();
    let (n1, n2) = (al.y1 * al.s1, al.y2 * al.s2);
    if witness.rows.len() != n1 || witness.rows.iter().any(|r| r.len() != n2) {
        return Err(IsacError::AlphabetMismatch(format!(
            "witness must be {n1}×{n2}"
        )));
    }
    let mut worst = witness.stochastic_defect();
    for (legit, eve) in input_conditionals(ch, law)? {
        for (j, target) in eve.iter().enumerate() {
            let mapped: f64 = legit
                .iter()
                .zip(&witness.rows)
                .map(|(p, row)| p * row[j])
                .sum();
            worst = worst.max((mapped - target).abs());
        }
    }
    Ok(worst)
}

/// Searches for a degrading kernel with a phase-one linear program.
pub fn check_stochastically_degraded(
    ch: &ChannelSpec,
    law: &InputLaw,
    tol: f64,
) -> Result<StochasticVerdict> {
    check_tol(tol)?;
    let al = ch.alphabets();
    let (n1, n2) = (al.y1 * al.s1, al.y2 * al.s2);
    let rows = input_conditionals(ch, law)?;

    // Unknown T[i][j] sits at column i·n2 + j.
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..n1 {
        let mut row = vec![0.0; n1 * n2];
        row[i * n2..(i + 1) * n2].fill(1.0);
        a.push(row);
        b.push(1.0);
    }
    for (legit, eve) in &rows {
        for (j, &target) in eve.iter().enumerate() {
            let mut row = vec![0.0; n1 * n2];
            for (i, &p) in legit.iter().enumerate() {
                row[i * n2 + j] = p;
            }
            a.push(row);
            b.push(target);
        }
    }

    match phase_one(&a, &b, tol)? {
        Phase1Outcome::Infeasible { infeasibility } => Ok(StochasticVerdict {
            holds: false,
            residual: infeasibility,
            witness: None,
        }),
        Phase1Outcome::Feasible { x, .. } => {
            let witness = WitnessKernel {
                rows: x.chunks(n2).map(<[f64]>::to_vec).collect(),
            };
            let residual = witness_residual(ch, law, &witness)?;
            let holds = residual <= tol;
            Ok(StochasticVerdict {
                holds,
                residual,
                witness: holds.then_some(witness),
            })
        }
    }
}

/// All three checks against `law`, or against every input pair when `strict`.
pub fn degradedness_report(
    ch: &ChannelSpec,
    law: &InputLaw,
    tol: f64,
    strict: bool,
) -> Result<DegradednessReport> {
    let strict_law;
    let law = if strict {
        strict_law = self::strict_law(ch);
        &strict_law
    } else {
        law
    };
    Ok(DegradednessReport {
        tol,
        strict,
        physically_degraded: check_physically_degraded(ch, law, tol)?,
        reversely_degraded: check_reversely_degraded(ch, law, tol)?,
        stochastically_degraded: check_stochastically_degraded(ch, law, tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::BinaryParams;
    use crate::channel::{binary_example_channel, Alphabets};

    fn alphabets(a: usize, x: usize, s1: usize, s2: usize, y1: usize, y2: usize) -> Alphabets {
        Alphabets {
            a,
            x,
            s1,
            s2,
            y1,
            y2,
            s1_hat: s1,
            s2_hat: s2,
        }
    }

    /// `Y2 = X`, `Y1 ~ Bern(0.3)` independent of everything, constant states.
    fn eve_sees_input() -> ChannelSpec {
        ChannelSpec::from_fns(
            alphabets(1, 2, 1, 1, 2, 2),
            |_, _, _| 1.0,
            |_, _, x, y1, y2| if y2 == x { [0.7, 0.3][y1] } else { 0.0 },
        )
        .unwrap()
    }

    /// Y1 = X through a BSC(0.1), Y2 = Y1 through a BSC(0.2); constant states.
    fn cascade() -> ChannelSpec {
        let bsc = |e: f64, i: usize, o: usize| if i == o { 1.0 - e } else { e };
        ChannelSpec::from_fns(
            alphabets(1, 2, 1, 1, 2, 2),
            |_, _, _| 1.0,
            move |_, _, x, y1, y2| bsc(0.1, x, y1) * bsc(0.2, y1, y2),
        )
        .unwrap()
    }

    #[test]
    fn explicit_cascade_is_physically_degraded() {
        let ch = cascade();
        let law = InputLaw::full(1, 2, vec![0.4, 0.6]).unwrap();
        let v = check_physically_degraded(&ch, &law, DEFAULT_TOL).unwrap();
        assert!(v.holds, "{v:?}");
        let s = check_stochastically_degraded(&ch, &law, DEFAULT_TOL).unwrap();
        assert!(s.holds && s.residual <= DEFAULT_TOL);
        let w = s.witness.unwrap();
        assert!(w.stochastic_defect() < 1e-9);
    }

    #[test]
    fn cascade_is_not_reversely_degraded() {
        let ch = cascade();
        let law = InputLaw::full(1, 2, vec![0.4, 0.6]).unwrap();
        let v = check_reversely_degraded(&ch, &law, DEFAULT_TOL).unwrap();
        assert!(!v.holds);
        assert!(v.residual > 0.01, "{v:?}");
    }

    #[test]
    fn eavesdropper_seeing_input_is_not_degraded() {
        let ch = eve_sees_input();
        let law = InputLaw::full(1, 2, vec![0.5, 0.5]).unwrap();
        let v = check_physically_degraded(&ch, &law, DEFAULT_TOL).unwrap();
        assert!(!v.holds && v.residual > 0.1, "{v:?}");
        let s = check_stochastically_degraded(&ch, &law, DEFAULT_TOL).unwrap();
        assert!(!s.holds && s.witness.is_none());
        assert!(s.residual > 0.1, "{s:?}");
    }

    #[test]
    fn identical_conditionally_independent_outputs_degrade_both_ways() {
        let bsc = |e: f64, i: usize, o: usize| if i == o { 1.0 - e } else { e };
        let ch = ChannelSpec::from_fns(
            alphabets(1, 2, 1, 1, 2, 2),
            |_, _, _| 1.0,
            move |_, _, x, y1, y2| bsc(0.2, x, y1) * bsc(0.2, x, y2),
        )
        .unwrap();
        // A single input letter makes both outputs independent of the input.
        let law = InputLaw::full(1, 2, vec![1.0, 0.0]).unwrap();
        assert!(check_physically_degraded(&ch, &law, DEFAULT_TOL).unwrap().holds);
        assert!(check_reversely_degraded(&ch, &law, DEFAULT_TOL).unwrap().holds);
    }

    #[test]
    fn binary_example_witness_reproduces_eve() {
        let bp = BinaryParams::new(0.3, 0.7, 0.5, 0.5).unwrap();
        let (ch, law) = binary_example_channel(&bp).unwrap();
        let w = WitnessKernel::binary_example(bp.alpha);
        assert!(witness_residual(&ch, &law, &w).unwrap() <= 1e-12);
        let report = degradedness_report(&ch, &law, DEFAULT_TOL, false).unwrap();
        assert!(report.stochastically_degraded.holds);
        // S2 depends on the action only through S1, so the joint also factors.
        assert!(report.physically_degraded.holds, "{report:?}");
    }

    #[test]
    fn strict_mode_uses_full_support() {
        let ch = eve_sees_input();
        // With a point-mass law only x = 0 is constrained, which is satisfiable.
        let law = InputLaw::full(1, 2, vec![1.0, 0.0]).unwrap();
        let lax = degradedness_report(&ch, &law, DEFAULT_TOL, false).unwrap();
        assert!(lax.stochastically_degraded.holds);
        let strict = degradedness_report(&ch, &law, DEFAULT_TOL, true).unwrap();
        assert!(!strict.stochastically_degraded.holds);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let ch = cascade();
        let law = strict_law(&ch);
        assert!(matches!(
            check_physically_degraded(&ch, &law, 0.0),
            Err(IsacError::InvalidArgument(_))
        ));
    }
}
