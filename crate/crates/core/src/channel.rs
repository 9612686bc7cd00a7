//! ISAC channel descriptions and the single-letter joint laws they induce.
//!
//! A channel is the pair of kernels `P(s1, s2 | a)` and `P(y1, y2 | s1, s2, x)`
//! together with one per-letter distortion table per state. Input laws are
//! either `P(a, x)` (full secrecy) or `P(v, a, x)` with an auxiliary `V`
//! (partial secrecy).

use serde::Serialize;

use crate::binary::BinaryParams;
use crate::error::{IsacError, Result};
use crate::pmf::{flat_index, JointPmf, Odometer, VarId};

pub const V: &str = "V";
pub const A: &str = "A";
pub const X: &str = "X";
pub const S1: &str = "S1";
pub const S2: &str = "S2";
pub const Y1: &str = "Y1";
pub const Y2: &str = "Y2";

/// Allowed deviation of a kernel row or law from total mass one.
pub const ROW_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Alphabets {
    pub a: usize,
    pub x: usize,
    pub s1: usize,
    pub s2: usize,
    pub y1: usize,
    pub y2: usize,
    pub s1_hat: usize,
    pub s2_hat: usize,
}

impl Alphabets {
    /// All eight alphabets binary.
    pub fn binary() -> Self {
        Alphabets {
            a: 2,
            x: 2,
            s1: 2,
            s2: 2,
            y1: 2,
            y2: 2,
            s1_hat: 2,
            s2_hat: 2,
        }
    }

    /// Upper bound on the auxiliary alphabet:
    /// `min{|X||A|, |Y1||S1|, |Y2||S2|} + 1`.
    pub fn auxiliary_bound(&self) -> usize {
        (self.x * self.a).min(self.y1 * self.s1).min(self.y2 * self.s2) + 1
    }
}

/// Which of the two channel states a quantity refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Target {
    S1,
    S2,
}

impl Target {
    pub fn index(self) -> usize {
        match self {
            Target::S1 => 1,
            Target::S2 => 2,
        }
    }

    pub fn var(self) -> &'static str {
        match self {
            Target::S1 => S1,
            Target::S2 => S2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelSpec {
    alphabets: Alphabets,
    /// Rows indexed by `a`, columns by `(s1, s2)` with `s2` fastest.
    state_kernel: Vec<Vec<f64>>,
    /// Rows indexed by `(s1, s2, x)` with `x` fastest, columns by `(y1, y2)`.
    output_kernel: Vec<Vec<f64>>,
    /// Rows `s1`, columns `ŝ1`.
    distortion1: Vec<Vec<f64>>,
    /// Rows `s2`, columns `ŝ2`.
    distortion2: Vec<Vec<f64>>,
}

fn check_shape(field: &str, table: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    if table.len() != rows {
        return Err(IsacError::parse(
            field,
            format!("expected {rows} rows, found {}", table.len()),
        ));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != cols {
            return Err(IsacError::parse(
                field,
                format!("row {i} has {} entries, expected {cols}", row.len()),
            ));
        }
    }
    Ok(())
}

fn check_stochastic(field: &str, table: &[Vec<f64>]) -> Result<()> {
    for (i, row) in table.iter().enumerate() {
        if let Some(bad) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(IsacError::parse(
                field,
                format!("row {i} has invalid entry {bad}"),
            ));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_TOLERANCE {
            return Err(IsacError::parse(
                field,
                format!("row {i} sums to {sum}, expected 1"),
            ));
        }
    }
    Ok(())
}

fn check_distortion(field: &str, table: &[Vec<f64>]) -> Result<()> {
    for (i, row) in table.iter().enumerate() {
        if let Some(bad) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(IsacError::parse(
                field,
                format!("row {i} has invalid distortion {bad}"),
            ));
        }
    }
    Ok(())
}

/// Hamming distortion `d(s, ŝ) = 1{s ≠ ŝ}` on `size × size` symbols.
pub fn hamming(size: usize) -> Vec<Vec<f64>> {
    hamming_rect(size, size)
}

impl ChannelSpec {
    pub fn new(
        alphabets: Alphabets,
        state_kernel: Vec<Vec<f64>>,
        output_kernel: Vec<Vec<f64>>,
        distortion1: Vec<Vec<f64>>,
        distortion2: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let al = alphabets;
        let sizes = [
            ("a", al.a),
            ("x", al.x),
            ("s1", al.s1),
            ("s2", al.s2),
            ("y1", al.y1),
            ("y2", al.y2),
            ("s1_hat", al.s1_hat),
            ("s2_hat", al.s2_hat),
        ];
        if let Some((name, _)) = sizes.iter().find(|(_, s)| *s == 0) {
            return Err(IsacError::parse("alphabets", format!("`{name}` must be ≥ 1")));
        }
        check_shape("state_kernel", &state_kernel, al.a, al.s1 * al.s2)?;
        check_shape(
            "output_kernel",
            &output_kernel,
            al.s1 * al.s2 * al.x,
            al.y1 * al.y2,
        )?;
        check_shape("distortion1", &distortion1, al.s1, al.s1_hat)?;
        check_shape("distortion2", &distortion2, al.s2, al.s2_hat)?;
        check_stochastic("state_kernel", &state_kernel)?;
        check_stochastic("output_kernel", &output_kernel)?;
        check_distortion("distortion1", &distortion1)?;
        check_distortion("distortion2", &distortion2)?;
        Ok(ChannelSpec {
            alphabets,
            state_kernel,
            output_kernel,
            distortion1,
            distortion2,
        })
    }

    /// Builds a channel from kernel functions, with Hamming distortions on
    /// estimate alphabets equal to the state alphabets.
    pub fn from_fns(
        alphabets: Alphabets,
        state: impl Fn(usize, usize, usize) -> f64,
        output: impl Fn(usize, usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let al = alphabets;
        let state_kernel = (0..al.a)
            .map(|a| {
                Odometer::new(&[al.s1, al.s2])
                    .map(|c| state(a, c[0], c[1]))
                    .collect()
            })
            .collect();
        let output_kernel = Odometer::new(&[al.s1, al.s2, al.x])
            .map(|r| {
                Odometer::new(&[al.y1, al.y2])
                    .map(|c| output(r[0], r[1], r[2], c[0], c[1]))
                    .collect()
            })
            .collect();
        ChannelSpec::new(
            al,
            state_kernel,
            output_kernel,
            hamming_rect(al.s1, al.s1_hat),
            hamming_rect(al.s2, al.s2_hat),
        )
    }

    pub fn alphabets(&self) -> &Alphabets {
        &self.alphabets
    }

    pub fn state_kernel(&self) -> &[Vec<f64>] {
        &self.state_kernel
    }

    pub fn output_kernel(&self) -> &[Vec<f64>] {
        &self.output_kernel
    }

    /// `P(s1, s2 | a)`.
    pub fn state_prob(&self, a: usize, s1: usize, s2: usize) -> f64 {
        self.state_kernel[a][s1 * self.alphabets.s2 + s2]
    }

    /// `P(y1, y2 | s1, s2, x)`.
    pub fn output_prob(&self, s1: usize, s2: usize, x: usize, y1: usize, y2: usize) -> f64 {
        let al = &self.alphabets;
        let row = flat_index(&[al.s1, al.s2, al.x], &[s1, s2, x]);
        self.output_kernel[row][y1 * al.y2 + y2]
    }

    pub fn distortion_table(&self, target: Target) -> &[Vec<f64>] {
        match target {
            Target::S1 => &self.distortion1,
            Target::S2 => &self.distortion2,
        }
    }

    pub fn distortion(&self, target: Target, s: usize, s_hat: usize) -> f64 {
        self.distortion_table(target)[s][s_hat]
    }

    pub fn max_distortion(&self, target: Target) -> f64 {
        self.distortion_table(target)
            .iter()
            .flatten()
            .fold(0.0, |acc: f64, &d| acc.max(d))
    }

    pub fn state_size(&self, target: Target) -> usize {
        match target {
            Target::S1 => self.alphabets.s1,
            Target::S2 => self.alphabets.s2,
        }
    }

    pub fn estimate_size(&self, target: Target) -> usize {
        match target {
            Target::S1 => self.alphabets.s1_hat,
            Target::S2 => self.alphabets.s2_hat,
        }
    }
}

pub(crate) fn hamming_rect(rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|s| (0..cols).map(|t| if s == t { 0.0 } else { 1.0 }).collect())
        .collect()
}

/// Channel input law.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum InputLaw {
    /// `P(a, x)`, flattened with `x` fastest.
    Full {
        a: usize,
        x: usize,
        p_ax: Vec<f64>,
    },
    /// `P(v, a, x)`, flattened with `x` fastest.
    Partial {
        v: usize,
        a: usize,
        x: usize,
        p_vax: Vec<f64>,
    },
}

fn check_law(field: &str, mass: &[f64], cells: usize) -> Result<()> {
    if mass.len() != cells {
        return Err(IsacError::parse(
            field,
            format!("expected {cells} entries, found {}", mass.len()),
        ));
    }
    if let Some(bad) = mass.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(IsacError::parse(field, format!("invalid probability {bad}")));
    }
    let sum: f64 = mass.iter().sum();
    if (sum - 1.0).abs() > ROW_TOLERANCE {
        return Err(IsacError::parse(field, format!("sums to {sum}, expected 1")));
    }
    Ok(())
}

impl InputLaw {
    pub fn full(a: usize, x: usize, p_ax: Vec<f64>) -> Result<Self> {
        check_law("p_ax", &p_ax, a * x)?;
        Ok(InputLaw::Full { a, x, p_ax })
    }

    pub fn partial(v: usize, a: usize, x: usize, p_vax: Vec<f64>) -> Result<Self> {
        if v == 0 {
            return Err(IsacError::parse("v", "auxiliary alphabet must be ≥ 1"));
        }
        check_law("p_vax", &p_vax, v * a * x)?;
        Ok(InputLaw::Partial { v, a, x, p_vax })
    }

    pub fn uniform(a: usize, x: usize) -> Self {
        InputLaw::Full {
            a,
            x,
            p_ax: vec![1.0 / (a * x) as f64; a * x],
        }
    }

    pub fn action_size(&self) -> usize {
        match self {
            InputLaw::Full { a, .. } | InputLaw::Partial { a, .. } => *a,
        }
    }

    pub fn input_size(&self) -> usize {
        match self {
            InputLaw::Full { x, .. } | InputLaw::Partial { x, .. } => *x,
        }
    }

    pub fn auxiliary_size(&self) -> Option<usize> {
        match self {
            InputLaw::Full { .. } => None,
            InputLaw::Partial { v, .. } => Some(*v),
        }
    }

    /// Flattened law parameters in storage order.
    pub fn params(&self) -> &[f64] {
        match self {
            InputLaw::Full { p_ax, .. } => p_ax,
            InputLaw::Partial { p_vax, .. } => p_vax,
        }
    }

    /// Marginal `P(a, x)`, flattened with `x` fastest.
    pub fn p_ax(&self) -> Vec<f64> {
        match self {
            InputLaw::Full { p_ax, .. } => p_ax.clone(),
            InputLaw::Partial { a, x, p_vax, .. } => {
                let cells = a * x;
                let mut out = vec![0.0; cells];
                for (i, m) in p_vax.iter().enumerate() {
                    out[i % cells] += m;
                }
                out
            }
        }
    }

    /// Drops the auxiliary variable, keeping `P(a, x)`.
    pub fn to_full(&self) -> InputLaw {
        InputLaw::Full {
            a: self.action_size(),
            x: self.input_size(),
            p_ax: self.p_ax(),
        }
    }

    /// Partial-secrecy law with the auxiliary set to a copy of `(A, X)`,
    /// i.e. `v = a·|X| + x`.
    pub fn auxiliary_copy(&self) -> InputLaw {
        let (a, x) = (self.action_size(), self.input_size());
        let cells = a * x;
        let p_ax = self.p_ax();
        let mut p_vax = vec![0.0; cells * cells];
        for (i, m) in p_ax.iter().enumerate() {
            p_vax[i * cells + i] = *m;
        }
        InputLaw::Partial {
            v: cells,
            a,
            x,
            p_vax,
        }
    }
}

/// The joint law over `(V?, A, X, S1, S2, Y1, Y2)`:
/// `P(v, a, x)·P(s1, s2 | a)·P(y1, y2 | s1, s2, x)`.
pub fn assemble_joint(law: &InputLaw, ch: &ChannelSpec) -> Result<JointPmf> {
    let al = ch.alphabets();
    if law.action_size() != al.a || law.input_size() != al.x {
        return Err(IsacError::AlphabetMismatch(format!(
            "law is over |A|={}, |X|={} but the channel has |A|={}, |X|={}",
            law.action_size(),
            law.input_size(),
            al.a,
            al.x
        )));
    }
    let mut vars = Vec::with_capacity(7);
    if let Some(v) = law.auxiliary_size() {
        vars.push(VarId::new(V, v));
    }
    vars.extend([
        VarId::new(A, al.a),
        VarId::new(X, al.x),
        VarId::new(S1, al.s1),
        VarId::new(S2, al.s2),
        VarId::new(Y1, al.y1),
        VarId::new(Y2, al.y2),
    ]);
    let offset = usize::from(law.auxiliary_size().is_some());
    let input = law.params();
    JointPmf::from_fn(vars, |c| {
        let (a, x, s1, s2, y1, y2) = (
            c[offset],
            c[offset + 1],
            c[offset + 2],
            c[offset + 3],
            c[offset + 4],
            c[offset + 5],
        );
        let v = if offset == 1 { c[0] } else { 0 };
        let p_in = input[(v * al.a + a) * al.x + x];
        if p_in == 0.0 {
            return 0.0;
        }
        p_in * ch.state_prob(a, s1, s2) * ch.output_prob(s1, s2, x, y1, y2)
    })
}

/// The multiplicative-Bernoulli example: `Y1 = S1·X`, `Y2 = S2·X`, with
/// `A = 0` leaving `S1 = 0` with probability `λ` and `A = 1` with
/// probability `1 − λ`; given `S1 = 1`, `S2 ~ Bern(α)`, and `S2 = 0` when
/// `S1 = 0`. The input law has `X ~ Bern(p)` and `A = X ⊕ Bern(q)`.
pub fn binary_example_channel(params: &BinaryParams) -> Result<(ChannelSpec, InputLaw)> {
    params.validate()?;
    let BinaryParams {
        lambda,
        alpha,
        p,
        q,
    } = *params;
    // `A = 0` row: (0,0) = λ, (0,1) = 0, (1,0) = (1−λ)(1−α), (1,1) = (1−λ)α.
    let state = move |a: usize, s1: usize, s2: usize| {
        let s1_zero = if a == 0 { lambda } else { 1.0 - lambda };
        match (s1, s2) {
            (0, 0) => s1_zero,
            (0, _) => 0.0,
            (_, 0) => (1.0 - s1_zero) * (1.0 - alpha),
            _ => (1.0 - s1_zero) * alpha,
        }
    };
    let output = |s1: usize, s2: usize, x: usize, y1: usize, y2: usize| {
        if y1 == s1 * x && y2 == s2 * x {
            1.0
        } else {
            0.0
        }
    };
    let ch = ChannelSpec::from_fns(Alphabets::binary(), state, output)?;
    Ok((ch, binary_input_law(p, q)?))
}

/// `X ~ Bern(p)`, `A = X ⊕ Bern(q)`.
pub fn binary_input_law(p: f64, q: f64) -> Result<InputLaw> {
    for (name, v) in [("p", p), ("q", q)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(IsacError::domain(name, v));
        }
    }
    // (a, x) order: P(0,0) = (1−p)(1−q), P(0,1) = pq, P(1,0) = (1−p)q, P(1,1) = p(1−q).
    InputLaw::full(
        2,
        2,
        vec![
            (1.0 - p) * (1.0 - q),
            p * q,
            (1.0 - p) * q,
            p * (1.0 - q),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmf::convolve;

    fn params(lambda: f64, alpha: f64, p: f64, q: f64) -> BinaryParams {
        BinaryParams {
            lambda,
            alpha,
            p,
            q,
        }
    }

    #[test]
    fn binary_state_rows_are_stochastic() {
        let (ch, _) = binary_example_channel(&params(0.3, 0.7, 0.5, 0.5)).unwrap();
        for row in ch.state_kernel() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        // λ + (1−λ)(1−α) + (1−λ)α
        assert!((ch.state_prob(0, 1, 1) - 0.7 * 0.7).abs() < 1e-15);
        assert!((ch.state_prob(1, 1, 1) - 0.3 * 0.7).abs() < 1e-15);
    }

    #[test]
    fn binary_action_marginal_is_convolution() {
        for (p, q) in [(0.2, 0.3), (0.5, 0.9), (0.0, 1.0)] {
            let (ch, law) = binary_example_channel(&params(0.4, 0.6, p, q)).unwrap();
            let joint = assemble_joint(&law, &ch).unwrap();
            let pa = joint.marginalize(&[A]).unwrap();
            assert!((pa.mass()[1] - convolve(p, q).unwrap()).abs() < 1e-15);
            let px = joint.marginalize(&[X]).unwrap();
            assert!((px.mass()[1] - p).abs() < 1e-15);
        }
    }

    #[test]
    fn binary_point_mass_input() {
        let (ch, law) = binary_example_channel(&params(0.3, 0.7, 1.0, 0.0)).unwrap();
        let joint = assemble_joint(&law, &ch).unwrap();
        let ax = joint.marginalize(&[A, X]).unwrap();
        assert_eq!(ax.get(&[1, 1]), 1.0);
    }

    #[test]
    fn binary_lambda_zero_fixes_states_under_a0() {
        let (ch, _) = binary_example_channel(&params(0.0, 0.0, 0.5, 0.5)).unwrap();
        assert_eq!(ch.state_prob(0, 1, 0), 1.0);
        assert_eq!(ch.state_prob(0, 0, 0), 0.0);
    }

    #[test]
    fn binary_s2_mass_hand_sum() {
        // P(S2 = 1) = Σ_a P(a)·P(S1 = 1, S2 = 1 | a) = (1 − p∗q)(1−λ)α + (p∗q)λα.
        let (lambda, alpha) = (0.3, 0.7);
        let (ch, law) = binary_example_channel(&params(lambda, alpha, 0.5, 0.5)).unwrap();
        let joint = assemble_joint(&law, &ch).unwrap();
        let s2 = joint.marginalize(&[S2]).unwrap();
        let pa1 = 0.5;
        let expected = (1.0 - pa1) * (1.0 - lambda) * alpha + pa1 * lambda * alpha;
        assert!((s2.mass()[1] - expected).abs() < 1e-15);
        assert!((expected - 0.35).abs() < 1e-15);
    }

    #[test]
    fn binary_conditional_s2_given_s1() {
        let (ch, law) = binary_example_channel(&params(0.3, 0.7, 0.5, 0.5)).unwrap();
        let joint = assemble_joint(&law, &ch).unwrap();
        let k = joint.condition(&[S2], &[S1, A]).unwrap();
        assert!((k.prob(&[1], &[1, 0]).unwrap() - 0.7).abs() < 1e-15);
        assert!((k.prob(&[1], &[1, 1]).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn deterministic_channel_point_law_gives_point_joint() {
        let al = Alphabets {
            a: 2,
            x: 3,
            s1: 2,
            s2: 1,
            y1: 3,
            y2: 2,
            s1_hat: 2,
            s2_hat: 1,
        };
        let ch = ChannelSpec::from_fns(
            al,
            |a, s1, _| if s1 == a { 1.0 } else { 0.0 },
            |s1, _, x, y1, y2| if y1 == x && y2 == s1 { 1.0 } else { 0.0 },
        )
        .unwrap();
        let mut p_ax = vec![0.0; 6];
        p_ax[5] = 1.0;
        let law = InputLaw::full(2, 3, p_ax).unwrap();
        let joint = assemble_joint(&law, &ch).unwrap();
        assert_eq!(joint.get(&[1, 2, 1, 0, 2, 1]), 1.0);
    }

    #[test]
    fn mismatched_law_rejected() {
        let (ch, _) = binary_example_channel(&params(0.3, 0.7, 0.5, 0.5)).unwrap();
        let law = InputLaw::uniform(3, 2);
        assert!(matches!(
            assemble_joint(&law, &ch),
            Err(IsacError::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn bad_kernel_row_named() {
        let al = Alphabets::binary();
        let err = ChannelSpec::new(
            al,
            vec![vec![0.25; 4], vec![0.2, 0.2, 0.2, 0.3]],
            vec![vec![0.25; 4]; 8],
            hamming(2),
            hamming(2),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("state_kernel") && msg.contains("row 1"), "{msg}");
    }

    #[test]
    fn binary_params_out_of_range() {
        assert!(matches!(
            binary_example_channel(&params(1.2, 0.5, 0.5, 0.5)),
            Err(IsacError::DomainError { .. })
        ));
    }

    #[test]
    fn auxiliary_copy_preserves_input_marginal() {
        let law = InputLaw::full(2, 2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let lifted = law.auxiliary_copy();
        assert_eq!(lifted.auxiliary_size(), Some(4));
        assert_eq!(lifted.p_ax(), law.p_ax());
    }
}
