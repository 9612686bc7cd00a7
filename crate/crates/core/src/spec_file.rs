//! TOML channel specification files.
//!
//! ```toml
//! alphabets = { a = 2, x = 2, s1 = 2, s2 = 2, y1 = 2, y2 = 2 }  # s1_hat, s2_hat default to s1, s2
//! # |A| rows, columns (s1, s2) with s2 fastest
//! state_kernel = [[0.3, 0.0, 0.21, 0.49], [0.7, 0.0, 0.09, 0.21]]
//! # |S1||S2||X| rows ordered (s1, s2, x) with x fastest, columns (y1, y2) with y2 fastest
//! output_kernel = [...]
//! distortion1 = [[0, 1], [1, 0]]  # optional, Hamming by default
//! distortion2 = [[0, 1], [1, 0]]
//!
//! [law]                 # optional, uniform P(a, x) by default
//! p_ax = [[0.4, 0.1], [0.1, 0.4]]   # rows a, columns x
//! # or: v = 3 and p_vax = [[[...]]] indexed [v][a][x]
//! ```
//!
//! Alternatively a single `[binary_example]` table with `lambda`, `alpha`,
//! `p` and `q` stands for the multiplicative-Bernoulli channel and its law.

use std::path::Path;

use serde::Deserialize;

use crate::binary::BinaryParams;
use crate::channel::{binary_example_channel, hamming_rect, Alphabets, ChannelSpec, InputLaw};
use crate::error::{IsacError, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    alphabets: Option<RawAlphabets>,
    state_kernel: Option<Vec<Vec<f64>>>,
    output_kernel: Option<Vec<Vec<f64>>>,
    distortion1: Option<Vec<Vec<f64>>>,
    distortion2: Option<Vec<Vec<f64>>>,
    law: Option<RawLaw>,
    binary_example: Option<RawBinary>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlphabets {
    a: usize,
    x: usize,
    s1: usize,
    s2: usize,
    y1: usize,
    y2: usize,
    s1_hat: Option<usize>,
    s2_hat: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLaw {
    p_ax: Option<Vec<Vec<f64>>>,
    v: Option<usize>,
    p_vax: Option<Vec<Vec<Vec<f64>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBinary {
    lambda: f64,
    alpha: f64,
    p: f64,
    q: f64,
}

/// A parsed specification file.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedSpec {
    pub channel: ChannelSpec,
    pub law: InputLaw,
    /// Whether the file set the law (otherwise it is uniform).
    pub law_given: bool,
    /// Set when the file used the `[binary_example]` shorthand.
    pub binary: Option<BinaryParams>,
}

fn require<T>(field: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| IsacError::parse(field, "missing"))
}

fn flatten_matrix(field: &str, m: Vec<Vec<f64>>, rows: usize, cols: usize) -> Result<Vec<f64>> {
    if m.len() != rows {
        return Err(IsacError::parse(field, format!("expected {rows} rows, found {}", m.len())));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for (i, row) in m.into_iter().enumerate() {
        if row.len() != cols {
            return Err(IsacError::parse(
                field,
                format!("row {i} has {} entries, expected {cols}", row.len()),
            ));
        }
        out.extend(row);
    }
    Ok(out)
}

fn parse_law(raw: RawLaw, al: &Alphabets) -> Result<InputLaw> {
    match (raw.p_ax, raw.v, raw.p_vax) {
        (Some(p_ax), None, None) => {
            InputLaw::full(al.a, al.x, flatten_matrix("law.p_ax", p_ax, al.a, al.x)?)
        }
        (None, Some(v), Some(p_vax)) => {
            if p_vax.len() != v {
                return Err(IsacError::parse(
                    "law.p_vax",
                    format!("expected {v} blocks, found {}", p_vax.len()),
                ));
            }
            let mut flat = Vec::with_capacity(v * al.a * al.x);
            for (i, block) in p_vax.into_iter().enumerate() {
                flat.extend(flatten_matrix(&format!("law.p_vax[{i}]"), block, al.a, al.x)?);
            }
            InputLaw::partial(v, al.a, al.x, flat)
        }
        _ => Err(IsacError::parse(
            "law",
            "give either `p_ax`, or both `v` and `p_vax`",
        )),
    }
}

/// Parses and validates a specification document.
pub fn parse_spec(text: &str) -> Result<LoadedSpec> {
    let raw: RawSpec =
        toml::from_str(text).map_err(|e| IsacError::parse("spec", e.to_string().trim_end()))?;

    if let Some(b) = raw.binary_example {
        if raw.alphabets.is_some()
            || raw.state_kernel.is_some()
            || raw.output_kernel.is_some()
            || raw.distortion1.is_some()
            || raw.distortion2.is_some()
            || raw.law.is_some()
        {
            return Err(IsacError::parse(
                "binary_example",
                "cannot be combined with explicit kernels or a law",
            ));
        }
        let params = BinaryParams::new(b.lambda, b.alpha, b.p, b.q)?;
        let (channel, law) = binary_example_channel(&params)?;
        return Ok(LoadedSpec {
            channel,
            law,
            law_given: true,
            binary: Some(params),
        });
    }

    let ra = require("alphabets", raw.alphabets)?;
    let al = Alphabets {
        a: ra.a,
        x: ra.x,
        s1: ra.s1,
        s2: ra.s2,
        y1: ra.y1,
        y2: ra.y2,
        s1_hat: ra.s1_hat.unwrap_or(ra.s1),
        s2_hat: ra.s2_hat.unwrap_or(ra.s2),
    };
    let channel = ChannelSpec::new(
        al,
        require("state_kernel", raw.state_kernel)?,
        require("output_kernel", raw.output_kernel)?,
        raw.distortion1
            .unwrap_or_else(|| hamming_rect(al.s1, al.s1_hat)),
        raw.distortion2
            .unwrap_or_else(|| hamming_rect(al.s2, al.s2_hat)),
    )?;
    let law_given = raw.law.is_some();
    let law = match raw.law {
        Some(l) => parse_law(l, &al)?,
        None => InputLaw::uniform(al.a, al.x),
    };
    Ok(LoadedSpec {
        channel,
        law,
        law_given,
        binary: None,
    })
}

pub fn load_spec(path: &Path) -> Result<LoadedSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| IsacError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_spec(&text)
}
