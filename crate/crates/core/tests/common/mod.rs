#![allow(dead_code)]

use secure_isac::channel::{Alphabets, ChannelSpec, InputLaw};
use secure_isac::rng::Stream;

pub fn kernel(rng: &mut Stream, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows).map(|_| rng.dirichlet_ones(cols)).collect()
}

fn size(rng: &mut Stream, lo: usize, hi: usize) -> usize {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as usize
}

pub fn alphabets(rng: &mut Stream) -> Alphabets {
    let s1 = size(rng, 1, 3);
    let s2 = size(rng, 1, 2);
    Alphabets {
        a: size(rng, 1, 2),
        x: size(rng, 2, 3),
        s1,
        s2,
        y1: size(rng, 2, 3),
        y2: size(rng, 1, 3),
        s1_hat: s1,
        s2_hat: s2,
    }
}

/// `P(s1|a) P(s2|s1)` states and `P(y1|s1,x) P(y2|y1,s1,s2)` outputs.
pub fn physically_degraded(rng: &mut Stream) -> ChannelSpec {
    let al = alphabets(rng);
    let s1_a = kernel(rng, al.a, al.s1);
    let s2_s1 = kernel(rng, al.s1, al.s2);
    let y1_s1x = kernel(rng, al.s1 * al.x, al.y1);
    let y2_rest = kernel(rng, al.y1 * al.s1 * al.s2, al.y2);
    ChannelSpec::from_fns(
        al,
        |a, s1, s2| s1_a[a][s1] * s2_s1[s1][s2],
        |s1, s2, x, y1, y2| {
            y1_s1x[s1 * al.x + x][y1] * y2_rest[(y1 * al.s1 + s1) * al.s2 + s2][y2]
        },
    )
    .unwrap()
}

/// `P(s2|a) P(s1|s2)` states and `P(y2|s2,x) P(y1|y2,s2,s1)` outputs.
pub fn reversely_degraded(rng: &mut Stream) -> ChannelSpec {
    let al = alphabets(rng);
    let s2_a = kernel(rng, al.a, al.s2);
    let s1_s2 = kernel(rng, al.s2, al.s1);
    let y2_s2x = kernel(rng, al.s2 * al.x, al.y2);
    let y1_rest = kernel(rng, al.y2 * al.s2 * al.s1, al.y1);
    ChannelSpec::from_fns(
        al,
        |a, s1, s2| s2_a[a][s2] * s1_s2[s2][s1],
        |s1, s2, x, y1, y2| {
            y2_s2x[s2 * al.x + x][y2] * y1_rest[(y2 * al.s2 + s2) * al.s1 + s1][y1]
        },
    )
    .unwrap()
}

/// Unstructured channel with dense random kernels.
pub fn arbitrary(rng: &mut Stream) -> ChannelSpec {
    let al = alphabets(rng);
    let state = kernel(rng, al.a, al.s1 * al.s2);
    let output = kernel(rng, al.s1 * al.s2 * al.x, al.y1 * al.y2);
    ChannelSpec::from_fns(
        al,
        |a, s1, s2| state[a][s1 * al.s2 + s2],
        |s1, s2, x, y1, y2| output[(s1 * al.s2 + s2) * al.x + x][y1 * al.y2 + y2],
    )
    .unwrap()
}

/// Full-support law, renormalized so it passes the 1e-12 sum check.
fn normalized(mut w: Vec<f64>) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    let drift: f64 = 1.0 - w.iter().sum::<f64>();
    w[0] += drift;
    w
}

pub fn full_law(rng: &mut Stream, al: &Alphabets) -> InputLaw {
    InputLaw::full(al.a, al.x, normalized(rng.dirichlet_ones(al.a * al.x))).unwrap()
}

/// Auxiliary of size `v` with a random joint `P(v, a, x)`.
pub fn partial_law(rng: &mut Stream, al: &Alphabets, v: usize) -> InputLaw {
    InputLaw::partial(v, al.a, al.x, normalized(rng.dirichlet_ones(v * al.a * al.x))).unwrap()
}

/// A random permutation of `0..n`.
pub fn permutation(rng: &mut Stream, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        p.swap(i, j);
    }
    p
}

pub struct Relabeling {
    pub a: Vec<usize>,
    pub x: Vec<usize>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub y1: Vec<usize>,
    pub y2: Vec<usize>,
}

impl Relabeling {
    pub fn random(rng: &mut Stream, al: &Alphabets) -> Self {
        Relabeling {
            a: permutation(rng, al.a),
            x: permutation(rng, al.x),
            s1: permutation(rng, al.s1),
            s2: permutation(rng, al.s2),
            y1: permutation(rng, al.y1),
            y2: permutation(rng, al.y2),
        }
    }

    /// The channel seen through the relabeling: new symbol `σ(u)` behaves as
    /// old symbol `u`. Hamming distortions are invariant.
    pub fn channel(&self, ch: &ChannelSpec) -> ChannelSpec {
        let al = *ch.alphabets();
        let inv = |p: &[usize]| {
            let mut q = vec![0; p.len()];
            for (i, &v) in p.iter().enumerate() {
                q[v] = i;
            }
            q
        };
        let (ia, ix, is1, is2, iy1, iy2) = (
            inv(&self.a),
            inv(&self.x),
            inv(&self.s1),
            inv(&self.s2),
            inv(&self.y1),
            inv(&self.y2),
        );
        ChannelSpec::from_fns(
            al,
            |a, s1, s2| ch.state_prob(ia[a], is1[s1], is2[s2]),
            |s1, s2, x, y1, y2| ch.output_prob(is1[s1], is2[s2], ix[x], iy1[y1], iy2[y2]),
        )
        .unwrap()
    }

    pub fn law(&self, law: &InputLaw) -> InputLaw {
        let (a, x) = (law.action_size(), law.input_size());
        let p = law.p_ax();
        let mut q = vec![0.0; a * x];
        for aa in 0..a {
            for xx in 0..x {
                q[self.a[aa] * x + self.x[xx]] = p[aa * x + xx];
            }
        }
        InputLaw::full(a, x, q).unwrap()
    }
}

/// Whether an auxiliary copying `(A, X)` respects the cardinality bound.
pub fn copy_fits(al: &Alphabets) -> bool {
    al.a * al.x <= al.auxiliary_bound()
}

pub fn spec_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

/// One invocation of every subcommand in both output formats.
pub fn cli_invocations() -> Vec<Vec<String>> {
    let binary = spec_path("binary_example.toml").display().to_string();
    let cascade = spec_path("cascade.toml").display().to_string();
    let mut cases: Vec<Vec<&str>> = vec![
        vec!["check-degraded", &binary],
        vec!["check-degraded", &cascade, "--strict"],
        vec!["estimators", &cascade],
        vec!["region", &binary, "--theorem", "1", "--grid", "5", "--samples", "20", "--seed", "3"],
        vec!["region", &cascade, "--theorem", "3", "--grid", "4", "--samples", "30", "--seed", "4"],
        vec!["region", &cascade, "--theorem", "2", "--grid", "2", "--samples", "30"],
        vec!["lemma1", "--lambda", "0.3", "--alpha", "0.7", "--grid", "5"],
        vec!["lemma1", "--lambda", "0.3", "--alpha", "0.7", "--p", "0.5", "--q", "0.5"],
        vec!["simulate", &binary, "-n", "200000", "--seed", "7"],
    ];
    let json: Vec<Vec<&str>> = cases
        .iter()
        .map(|c| {
            let mut j = vec!["--format", "json"];
            j.extend(c);
            j
        })
        .collect();
    cases.extend(json);
    cases
        .into_iter()
        .map(|c| c.into_iter().map(String::from).collect())
        .collect()
}
