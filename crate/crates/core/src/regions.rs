//! Rate and distortion bounds for a fixed input law, and sweeps over input
//! laws tracing the achievable regions.
//!
//! Four bounds are evaluated:
//!
//! | mode | secrecy | ordering | secure-rate ceiling |
//! |------|---------|----------|---------------------|
//! | 1 | partial | physically degraded | `min{H(Y1,S1|Y2,S2) − H(S1|Y1,Y2,S2,V), I(V;Y1,S1) − R1}` |
//! | 2 | partial | reversely degraded | `min{H(Y1|Y2,S2), I(V;Y1,S1) − R1}` |
//! | 3 | full | physically degraded | `min{H(Y1,S1|Y2,S2) − H(S1|Y1,Y2,S2,X,A), I(X,A;Y1,S1)}` |
//! | 4 | full | reversely degraded | `min{H(Y1|Y2,S2), I(X,A;Y1,S1)}` |
//!
//! The ordering is a precondition of each bound but is only checked and
//! reported, so the formulas can still be explored on other channels.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{binary_input_law, ChannelSpec, InputLaw, A, S1, S2, V, X, Y1, Y2};
use crate::degraded::{check_physically_degraded, check_reversely_degraded, Verdict, DEFAULT_TOL};
use crate::error::{IsacError, Result};
use crate::estimation::minimal_distortions;
use crate::pmf::{Bits, JointPmf};
use crate::rng::Stream;

/// Largest number of laws a single sweep may enumerate.
pub const MAX_SWEEP_LAWS: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    PartialDegraded,
    PartialReverse,
    FullDegraded,
    FullReverse,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [
        Theorem::PartialDegraded,
        Theorem::PartialReverse,
        Theorem::FullDegraded,
        Theorem::FullReverse,
    ];

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1..=4 => Ok(Self::ALL[usize::from(n - 1)]),
            _ => Err(IsacError::InvalidArgument(format!(
                "theorem must be 1, 2, 3 or 4, got {n}"
            ))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Theorem::PartialDegraded => 1,
            Theorem::PartialReverse => 2,
            Theorem::FullDegraded => 3,
            Theorem::FullReverse => 4,
        }
    }

    pub fn full_secrecy(self) -> bool {
        matches!(self, Theorem::FullDegraded | Theorem::FullReverse)
    }

    pub fn reverse(self) -> bool {
        matches!(self, Theorem::PartialReverse | Theorem::FullReverse)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoremBounds {
    pub theorem: Theorem,
    /// `I(V; Y1, S1)`; absent under full secrecy.
    pub r1_max: Option<Bits>,
    /// First term of the secure-rate minimum.
    pub r2_prime: Bits,
    /// `[H(U|Y2,S2) − H(U|Y1,S1)]⁺ + H(Y1|Y2,S2,U)` with `U = V`, or
    /// `U = (X, A)` under full secrecy.
    pub r_sec: Bits,
    /// Second term of the secure-rate minimum at `R1 = 0`.
    pub sum_cap: Bits,
    /// Largest secure rate, `min(r2_prime, sum_cap)`.
    pub rate: Bits,
    pub d1_min: f64,
    pub d2_min: f64,
    /// Physical degradedness for modes 1 and 3, reverse for 2 and 4.
    pub degraded: Verdict,
}

impl TheoremBounds {
    /// Largest admissible `R2` for a given `R1`, or `None` if `R1` itself is
    /// not admissible.
    pub fn r2_cap(&self, r1: Bits) -> Option<Bits> {
        match self.r1_max {
            None if r1 == 0.0 => Some(self.rate),
            None => None,
            Some(max) if (0.0..=max).contains(&r1) => Some(self.r2_prime.min(max - r1).max(0.0)),
            Some(_) => None,
        }
    }

    pub fn admits(&self, r1: Bits, r2: Bits) -> bool {
        r2 >= 0.0 && self.r2_cap(r1).is_some_and(|cap| r2 <= cap)
    }
}

/// Auxiliary variable names: `V` itself, or `(X, A)` under full secrecy.
fn aux_vars(full: bool) -> &'static [&'static str] {
    if full {
        &[X, A]
    } else {
        &[V]
    }
}

fn r2_prime_general(joint: &JointPmf, aux: &[&str]) -> Result<Bits> {
    let given: Vec<&str> = [Y1, Y2, S2].iter().chain(aux).copied().collect();
    let r = joint.conditional_entropy(&[Y1, S1], &[Y2, S2])? - joint.conditional_entropy(&[S1], &given)?;
    Ok(r.max(0.0))
}

fn rsec(joint: &JointPmf, aux: &[&str]) -> Result<Bits> {
    let bracket =
        joint.conditional_entropy(aux, &[Y2, S2])? - joint.conditional_entropy(aux, &[Y1, S1])?;
    let given: Vec<&str> = [Y2, S2].iter().chain(aux).copied().collect();
    Ok(bracket.max(0.0) + joint.conditional_entropy(&[Y1], &given)?)
}

/// Rejects auxiliary alphabets above `min{|X||A|, |Y1||S1|, |Y2||S2|} + 1`.
fn check_cardinality(law: &InputLaw, ch: &ChannelSpec) -> Result<()> {
    let bound = ch.alphabets().auxiliary_bound();
    match law.auxiliary_size() {
        Some(size) if size > bound => Err(IsacError::CardinalityExceeded { size, bound }),
        _ => Ok(()),
    }
}

/// Partial-secrecy law; a law without auxiliary gets a constant `V`.
fn with_auxiliary(law: &InputLaw) -> InputLaw {
    match law {
        InputLaw::Partial { .. } => law.clone(),
        InputLaw::Full { a, x, p_ax } => InputLaw::Partial {
            v: 1,
            a: *a,
            x: *x,
            p_vax: p_ax.clone(),
        },
    }
}

fn evaluate(law: &InputLaw, ch: &ChannelSpec, theorem: Theorem) -> Result<TheoremBounds> {
    let full = theorem.full_secrecy();
    let law = if full { law.to_full() } else { with_auxiliary(law) };
    check_cardinality(&law, ch)?;
    let joint = crate::channel::assemble_joint(&law, ch)?;
    let aux = aux_vars(full);

    let sum_cap = joint.mutual_information(aux, &[Y1, S1])?;
    let r2_prime = if theorem.reverse() {
        joint.conditional_entropy(&[Y1], &[Y2, S2])?
    } else {
        r2_prime_general(&joint, aux)?
    };
    let r_sec = rsec(&joint, aux)?;
    let (_, _, d1_min, d2_min) = minimal_distortions(ch, &law)?;

    let degraded = if theorem.reverse() {
        check_reversely_degraded(ch, &law, DEFAULT_TOL)?
    } else {
        check_physically_degraded(ch, &law, DEFAULT_TOL)?
    };
    Ok(TheoremBounds {
        theorem,
        r1_max: (!full).then_some(sum_cap),
        r2_prime,
        r_sec,
        sum_cap,
        rate: r2_prime.min(sum_cap).max(0.0),
        d1_min,
        d2_min,
        degraded,
    })
}

fn warn_if_not_degraded(b: &TheoremBounds) {
    if !b.degraded.holds {
        log::warn!(
            "channel is not {} degraded under this law (residual {:.3e}); mode {} bound is evaluated anyway",
            if b.theorem.reverse() { "reversely" } else { "physically" },
            b.degraded.residual,
            b.theorem.number()
        );
    }
}

/// Partial secrecy over a physically degraded channel. A law without an
/// auxiliary variable is evaluated with `V` constant.
pub fn theorem1_bounds(law: &InputLaw, ch: &ChannelSpec) -> Result<TheoremBounds> {
    theorem_bounds(Theorem::PartialDegraded, law, ch)
}

/// Partial secrecy over a reversely degraded channel.
pub fn theorem2_bounds(law: &InputLaw, ch: &ChannelSpec) -> Result<TheoremBounds> {
    theorem_bounds(Theorem::PartialReverse, law, ch)
}

/// Full secrecy over a physically degraded channel. Any auxiliary in `law`
/// is summed out.
pub fn theorem3_rate(law: &InputLaw, ch: &ChannelSpec) -> Result<TheoremBounds> {
    theorem_bounds(Theorem::FullDegraded, law, ch)
}

/// Full secrecy over a reversely degraded channel.
pub fn theorem4_rate(law: &InputLaw, ch: &ChannelSpec) -> Result<TheoremBounds> {
    theorem_bounds(Theorem::FullReverse, law, ch)
}

pub fn theorem_bounds(theorem: Theorem, law: &InputLaw, ch: &ChannelSpec) -> Result<TheoremBounds> {
    let b = evaluate(law, ch, theorem)?;
    warn_if_not_degraded(&b);
    Ok(b)
}

/// `[H(V|Y2,S2) − H(V|Y1,S1)]⁺ + H(Y1|Y2,S2,V)` before any degradedness
/// simplification. A law without auxiliary uses `V` constant.
pub fn rsec_general(law: &InputLaw, ch: &ChannelSpec) -> Result<Bits> {
    let law = with_auxiliary(law);
    let joint = crate::channel::assemble_joint(&law, ch)?;
    rsec(&joint, &[V])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    /// Points per axis (binary) or lattice resolution (generic); 0 disables
    /// the lattice and 1 gives its barycenter only.
    pub grid: usize,
    /// Additional random laws.
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawFamily {
    /// `X ~ Bern(p)`, `A = X ⊕ Bern(q)` over the `(p, q)` square; partial
    /// secrecy uses `V = (A, X)`.
    BinaryExample,
    /// Lattice plus Dirichlet(1) laws over the whole input simplex; partial
    /// secrecy uses `|V|` at the cardinality bound.
    Generic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionPoint {
    pub params: Vec<f64>,
    pub law: InputLaw,
    pub bounds: TheoremBounds,
    /// Not dominated in (rate ↑, d1 ↓, d2 ↓).
    pub pareto: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionSweep {
    pub theorem: Theorem,
    pub param_names: Vec<String>,
    /// Sorted by `params`.
    pub points: Vec<RegionPoint>,
    /// Reference corner `(0, max d1, max d2)` of the dominated volume.
    pub reference: [f64; 3],
}

impl RegionSweep {
    pub fn frontier(&self) -> impl Iterator<Item = &RegionPoint> {
        self.points.iter().filter(|p| p.pareto)
    }

    /// Volume of the (rate, d1, d2) box region dominated by the frontier
    /// relative to [`RegionSweep::reference`].
    pub fn dominated_volume(&self) -> f64 {
        let pts: Vec<[f64; 3]> = self
            .frontier()
            .map(|p| [p.bounds.rate, p.bounds.d1_min, p.bounds.d2_min])
            .collect();
        dominated_volume(&pts, self.reference)
    }
}

fn objective(b: &TheoremBounds) -> [f64; 3] {
    [b.rate, b.d1_min, b.d2_min]
}

/// `a` dominates `b`: no worse in every objective and better in one.
fn dominates(a: &[f64; 3], b: &[f64; 3]) -> bool {
    let weak = a[0] >= b[0] && a[1] <= b[1] && a[2] <= b[2];
    weak && (a[0] > b[0] || a[1] < b[1] || a[2] < b[2])
}

/// Flags of the points not dominated by any other; equal points are all kept.
pub fn pareto_flags(objectives: &[[f64; 3]]) -> Vec<bool> {
    let mut order: Vec<usize> = (0..objectives.len()).collect();
    // Any dominator precedes what it dominates in this order.
    order.sort_by(|&i, &j| {
        let (a, b) = (&objectives[i], &objectives[j]);
        b[0].total_cmp(&a[0])
            .then(a[1].total_cmp(&b[1]))
            .then(a[2].total_cmp(&b[2]))
    });
    let mut flags = vec![false; objectives.len()];
    let mut frontier: Vec<usize> = Vec::new();
    for i in order {
        if !frontier.iter().any(|&f| dominates(&objectives[f], &objectives[i])) {
            flags[i] = true;
            frontier.push(i);
        }
    }
    flags
}

/// Lebesgue measure of `⋃ [0, rate] × [d1, ref1] × [d2, ref2]`.
pub fn dominated_volume(points: &[[f64; 3]], reference: [f64; 3]) -> f64 {
    let mut rates: Vec<f64> = points.iter().map(|p| p[0]).filter(|&r| r > reference[0]).collect();
    rates.sort_by(|a, b| b.total_cmp(a));
    rates.dedup();
    let mut volume = 0.0;
    for (k, &r) in rates.iter().enumerate() {
        let below = rates.get(k + 1).copied().unwrap_or(reference[0]);
        let mut slice: Vec<[f64; 2]> = points
            .iter()
            .filter(|p| p[0] >= r)
            .map(|p| [p[1], p[2]])
            .collect();
        slice.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        let mut area = 0.0;
        let mut best_d2 = reference[2];
        let mut steps: Vec<[f64; 2]> = Vec::new();
        for p in slice {
            if p[1] < best_d2 && p[0] < reference[1] {
                best_d2 = p[1];
                steps.push(p);
            }
        }
        for (i, s) in steps.iter().enumerate() {
            let right = steps.get(i + 1).map_or(reference[1], |n| n[0]);
            area += (right - s[0]).max(0.0) * (reference[2] - s[1]).max(0.0);
        }
        volume += (r - below) * area;
    }
    volume
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Points of the `k`-simplex with coordinates in `{0, 1/m, …, 1}`, `m = grid − 1`,
/// in lexicographic order of the numerators; `grid == 1` gives the barycenter.
pub fn simplex_lattice(k: usize, grid: usize) -> Result<Vec<Vec<f64>>> {
    match grid {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![vec![1.0 / k as f64; k]]),
        _ => {}
    }
    let m = grid - 1;
    let count = binomial(m + k - 1, k - 1);
    if count > MAX_SWEEP_LAWS as u128 {
        return Err(IsacError::InvalidArgument(format!(
            "lattice of resolution {grid} over {k} cells has {count} points (limit {MAX_SWEEP_LAWS})"
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut parts = vec![0usize; k];
    fn rec(pos: usize, left: usize, m: usize, parts: &mut [usize], out: &mut Vec<Vec<f64>>) {
        if pos + 1 == parts.len() {
            parts[pos] = left;
            out.push(parts.iter().map(|&c| c as f64 / m as f64).collect());
            return;
        }
        for c in (0..=left).rev() {
            parts[pos] = c;
            rec(pos + 1, left - c, m, parts, out);
        }
    }
    rec(0, m, m, &mut parts, &mut out);
    Ok(out)
}

/// `grid` evenly spaced points of `[0, 1]`; a single point sits at 1/2.
pub fn grid_axis(grid: usize) -> Vec<f64> {
    match grid {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..grid).map(|i| i as f64 / (grid - 1) as f64).collect(),
    }
}

/// Laws enumerated by a sweep, each with its parameter tuple, and the
/// parameter names.
pub fn sweep_laws(
    ch: &ChannelSpec,
    theorem: Theorem,
    family: LawFamily,
    cfg: &SweepConfig,
) -> Result<(Vec<String>, Vec<(Vec<f64>, InputLaw)>)> {
    let al = ch.alphabets();
    let mut rng = Stream::new(cfg.seed);
    match family {
        LawFamily::BinaryExample => {
            if (al.a, al.x) != (2, 2) {
                return Err(IsacError::AlphabetMismatch(
                    "the binary family needs |A| = |X| = 2".into(),
                ));
            }
            let grid = grid_axis(cfg.grid);
            let random = (0..cfg.samples).map(|_| (rng.uniform(), rng.uniform()));
            let pairs: Vec<(f64, f64)> = grid
                .iter()
                .flat_map(|&p| grid.iter().map(move |&q| (p, q)))
                .chain(random)
                .collect();
            let mut laws = Vec::with_capacity(pairs.len());
            for (p, q) in pairs {
                let law = binary_input_law(p, q)?;
                let law = if theorem.full_secrecy() { law } else { law.auxiliary_copy() };
                laws.push((vec![p, q], law));
            }
            let names = vec!["p".to_string(), "q".to_string()];
            Ok((names, laws))
        }
        LawFamily::Generic => {
            let cells = al.a * al.x;
            let mut weights: Vec<Vec<f64>> = Vec::new();
            if theorem.full_secrecy() {
                for w in simplex_lattice(cells, cfg.grid)? {
                    weights.push(w);
                }
                for _ in 0..cfg.samples {
                    weights.push(rng.dirichlet_ones(cells));
                }
                let names = (0..al.a)
                    .flat_map(|a| (0..al.x).map(move |x| format!("p_a{a}_x{x}")))
                    .collect();
                let laws = weights
                    .into_iter()
                    .map(|w| Ok((w.clone(), InputLaw::full(al.a, al.x, renormalize(w))?)))
                    .collect::<Result<_>>()?;
                Ok((names, laws))
            } else {
                let v = al.auxiliary_bound();
                let lattice = simplex_lattice(v, cfg.grid)?;
                // Deterministic rows: V selects cell v mod |A||X|.
                for p_v in &lattice {
                    let mut w = vec![0.0; v * cells];
                    for (i, &m) in p_v.iter().enumerate() {
                        w[i * cells + i % cells] = m;
                    }
                    weights.push(w);
                }
                for s in 0..cfg.samples {
                    let p_v = if lattice.is_empty() {
                        rng.dirichlet_ones(v)
                    } else {
                        lattice[s % lattice.len()].clone()
                    };
                    let mut w = Vec::with_capacity(v * cells);
                    for &m in &p_v {
                        w.extend(rng.dirichlet_ones(cells).into_iter().map(|r| m * r));
                    }
                    weights.push(w);
                }
                let names = (0..v)
                    .flat_map(|vv| {
                        (0..al.a).flat_map(move |a| (0..al.x).map(move |x| format!("p_v{vv}_a{a}_x{x}")))
                    })
                    .collect();
                let laws = weights
                    .into_iter()
                    .map(|w| Ok((w.clone(), InputLaw::partial(v, al.a, al.x, renormalize(w))?)))
                    .collect::<Result<_>>()?;
                Ok((names, laws))
            }
        }
    }
}

/// Absorbs the rounding error of a generated law into its largest cell.
fn renormalize(mut w: Vec<f64>) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    if let Some(i) = (0..w.len()).max_by(|&i, &j| w[i].total_cmp(&w[j])) {
        w[i] += 1.0 - total;
    }
    w
}

fn cmp_params(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Evaluates `theorem` on every law of the sweep in parallel and marks the
/// Pareto frontier.
pub fn sweep_region(
    ch: &ChannelSpec,
    theorem: Theorem,
    family: LawFamily,
    cfg: &SweepConfig,
) -> Result<RegionSweep> {
    let (param_names, laws) = sweep_laws(ch, theorem, family, cfg)?;
    if laws.is_empty() {
        return Err(IsacError::EmptySweep);
    }
    if laws.len() > MAX_SWEEP_LAWS {
        return Err(IsacError::InvalidArgument(format!(
            "sweep has {} laws (limit {MAX_SWEEP_LAWS})",
            laws.len()
        )));
    }
    let mut points = laws
        .into_par_iter()
        .map(|(params, law)| {
            let bounds = evaluate(&law, ch, theorem)?;
            Ok(RegionPoint {
                params,
                law,
                bounds,
                pareto: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| cmp_params(&a.params, &b.params));
    let failing = points.iter().filter(|p| !p.bounds.degraded.holds).count();
    if failing > 0 {
        log::warn!(
            "degradedness precondition of mode {} fails for {failing} of {} laws",
            theorem.number(),
            points.len()
        );
    }
    let objectives: Vec<[f64; 3]> = points.iter().map(|p| objective(&p.bounds)).collect();
    for (p, flag) in points.iter_mut().zip(pareto_flags(&objectives)) {
        p.pareto = flag;
    }
    Ok(RegionSweep {
        theorem,
        param_names,
        points,
        reference: [
            0.0,
            ch.max_distortion(crate::channel::Target::S1),
            ch.max_distortion(crate::channel::Target::S2),
        ],
    })
}
