//! Dense joint probability mass functions over named finite variables.
//!
//! Cells are stored in mixed-radix order with the last variable varying
//! fastest. All information measures are reported in bits.

use serde::Serialize;

use crate::error::{IsacError, Result};

/// Information quantity in bits (base-2 logarithm).
pub type Bits = f64;

/// Cells below this mass count as exact zeros in entropy sums and conditioning.
pub const ZERO_MASS: f64 = 1e-15;

/// Allowed deviation of a pmf's total mass from one.
pub const SUM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VarId {
    pub name: String,
    pub size: usize,
}

impl VarId {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        VarId {
            name: name.into(),
            size,
        }
    }
}

/// Iterates over every assignment of a mixed-radix tuple, last digit fastest.
#[derive(Debug, Clone)]
pub struct Odometer {
    sizes: Vec<usize>,
    current: Vec<usize>,
    done: bool,
}

impl Odometer {
    pub fn new(sizes: &[usize]) -> Self {
        Odometer {
            sizes: sizes.to_vec(),
            current: vec![0; sizes.len()],
            done: sizes.iter().any(|&s| s == 0),
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut k = self.sizes.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.current[k] += 1;
            if self.current[k] < self.sizes[k] {
                break;
            }
            self.current[k] = 0;
        }
        Some(out)
    }
}

/// Flat index of `values` in mixed-radix order over `sizes`.
pub fn flat_index(sizes: &[usize], values: &[usize]) -> usize {
    debug_assert_eq!(sizes.len(), values.len());
    sizes
        .iter()
        .zip(values)
        .fold(0, |acc, (&size, &v)| acc * size + v)
}

/// Inverse of [`flat_index`].
pub fn unflatten(sizes: &[usize], mut index: usize, out: &mut [usize]) {
    for k in (0..sizes.len()).rev() {
        out[k] = index % sizes[k];
        index /= sizes[k];
    }
}

/// `−Σ m log₂ m` over raw masses, skipping cells below [`ZERO_MASS`].
pub fn entropy_of(masses: &[f64]) -> Bits {
    let h: f64 = masses
        .iter()
        .filter(|&&m| m >= ZERO_MASS)
        .map(|&m| -m * m.log2())
        .sum();
    h.max(0.0)
}

/// Binary entropy `H_b(x)` in bits, with `H_b(0) = H_b(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<Bits> {
    if !(0.0..=1.0).contains(&x) {
        return Err(IsacError::domain("x", x));
    }
    Ok(entropy_of(&[x, 1.0 - x]))
}

/// Binary convolution `a ∗ b = (1 − a)b + a(1 − b)`: the success probability
/// of the XOR of independent `Bern(a)` and `Bern(b)` variables.
pub fn convolve(a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(IsacError::domain("a", a));
    }
    if !(0.0..=1.0).contains(&b) {
        return Err(IsacError::domain("b", b));
    }
    Ok((1.0 - a) * b + a * (1.0 - b))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointPmf {
    vars: Vec<VarId>,
    mass: Vec<f64>,
}

impl JointPmf {
    pub fn new(vars: Vec<VarId>, mass: Vec<f64>) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if v.size == 0 {
                return Err(IsacError::InvalidPmf(format!(
                    "variable `{}` has an empty alphabet",
                    v.name
                )));
            }
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(IsacError::DuplicateVariable(v.name.clone()));
            }
        }
        let cells: usize = vars.iter().map(|v| v.size).product();
        if mass.len() != cells {
            return Err(IsacError::InvalidPmf(format!(
                "expected {} cells, got {}",
                cells,
                mass.len()
            )));
        }
        if let Some(bad) = mass.iter().find(|m| !m.is_finite() || **m < 0.0) {
            return Err(IsacError::InvalidPmf(format!("invalid mass {bad}")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(IsacError::InvalidPmf(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(JointPmf { vars, mass })
    }

    /// Builds a pmf by evaluating `f` on every assignment.
    pub fn from_fn(vars: Vec<VarId>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let sizes: Vec<usize> = vars.iter().map(|v| v.size).collect();
        let mass = Odometer::new(&sizes).map(|cell| f(&cell)).collect();
        JointPmf::new(vars, mass)
    }

    pub fn uniform(vars: Vec<VarId>) -> Result<Self> {
        let cells: usize = vars.iter().map(|v| v.size).product();
        JointPmf::new(vars, vec![1.0 / cells as f64; cells])
    }

    pub fn point_mass(vars: Vec<VarId>, values: &[usize]) -> Result<Self> {
        let sizes: Vec<usize> = vars.iter().map(|v| v.size).collect();
        if values.len() != sizes.len() || values.iter().zip(&sizes).any(|(v, s)| v >= s) {
            return Err(IsacError::InvalidPmf(format!(
                "point {values:?} outside alphabets {sizes:?}"
            )));
        }
        let mut mass = vec![0.0; sizes.iter().product()];
        mass[flat_index(&sizes, values)] = 1.0;
        JointPmf::new(vars, mass)
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.size).collect()
    }

    pub fn get(&self, values: &[usize]) -> f64 {
        self.mass[flat_index(&self.sizes(), values)]
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| IsacError::UnknownVariable(name.to_string()))
    }

    fn positions(&self, names: &[&str]) -> Result<Vec<usize>> {
        let positions = names
            .iter()
            .map(|n| self.position(n))
            .collect::<Result<Vec<_>>>()?;
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(IsacError::DuplicateVariable(n.to_string()));
            }
        }
        Ok(positions)
    }

    /// Sums out every variable not in `keep`; the result follows `keep`'s order.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointPmf> {
        let positions = self.positions(keep)?;
        let sizes = self.sizes();
        let out_vars: Vec<VarId> = positions.iter().map(|&p| self.vars[p].clone()).collect();
        let out_sizes: Vec<usize> = out_vars.iter().map(|v| v.size).collect();
        let mut out = vec![0.0; out_sizes.iter().product()];
        let mut digits = vec![0; sizes.len()];
        let mut picked = vec![0; positions.len()];
        for (flat, &m) in self.mass.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            unflatten(&sizes, flat, &mut digits);
            for (k, &p) in positions.iter().enumerate() {
                picked[k] = digits[p];
            }
            out[flat_index(&out_sizes, &picked)] += m;
        }
        Ok(JointPmf {
            vars: out_vars,
            mass: out,
        })
    }

    fn check_disjoint(a: &[&str], b: &[&str]) -> Result<()> {
        match a.iter().find(|n| b.contains(n)) {
            Some(n) => Err(IsacError::OverlappingSets(n.to_string())),
            None => Ok(()),
        }
    }

    /// Conditional kernel of `target` given `given`. Rows whose conditioning
    /// mass does not exceed [`ZERO_MASS`] are left undefined.
    pub fn condition(&self, target: &[&str], given: &[&str]) -> Result<ConditionalTable> {
        Self::check_disjoint(target, given)?;
        let combined: Vec<&str> = given.iter().chain(target).copied().collect();
        let joint = self.marginalize(&combined)?;
        let given_vars = joint.vars[..given.len()].to_vec();
        let target_vars = joint.vars[given.len()..].to_vec();
        let width: usize = target_vars.iter().map(|v| v.size).product();
        let mut given_mass = Vec::new();
        let rows = joint
            .mass
            .chunks(width)
            .map(|chunk| {
                let total: f64 = chunk.iter().sum();
                given_mass.push(total);
                (total > ZERO_MASS).then(|| chunk.iter().map(|m| m / total).collect())
            })
            .collect();
        Ok(ConditionalTable {
            target: target_vars,
            given: given_vars,
            given_mass,
            rows,
        })
    }

    pub fn entropy(&self, over: &[&str]) -> Result<Bits> {
        Ok(entropy_of(&self.marginalize(over)?.mass))
    }

    /// `H(target | given) = H(target, given) − H(given)`.
    pub fn conditional_entropy(&self, target: &[&str], given: &[&str]) -> Result<Bits> {
        Self::check_disjoint(target, given)?;
        let both: Vec<&str> = target.iter().chain(given).copied().collect();
        Ok((self.entropy(&both)? - self.entropy(given)?).max(0.0))
    }

    /// `I(left; right) = H(left) + H(right) − H(left, right)`.
    pub fn mutual_information(&self, left: &[&str], right: &[&str]) -> Result<Bits> {
        Self::check_disjoint(left, right)?;
        let both: Vec<&str> = left.iter().chain(right).copied().collect();
        let mi = self.entropy(left)? + self.entropy(right)? - self.entropy(&both)?;
        Ok(mi.max(0.0))
    }

    /// `I(left; right | given)`.
    pub fn conditional_mutual_information(
        &self,
        left: &[&str],
        right: &[&str],
        given: &[&str],
    ) -> Result<Bits> {
        Self::check_disjoint(left, right)?;
        Self::check_disjoint(left, given)?;
        Self::check_disjoint(right, given)?;
        let cmi = self.entropy(&[left, given].concat())?
            + self.entropy(&[right, given].concat())?
            - self.entropy(&[left, right, given].concat())?
            - self.entropy(given)?;
        Ok(cmi.max(0.0))
    }
}

/// A conditional kernel `P(target | given)`, one row per `given` assignment.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionalTable {
    pub target: Vec<VarId>,
    pub given: Vec<VarId>,
    /// Marginal mass of each `given` assignment.
    pub given_mass: Vec<f64>,
    /// `None` where the conditioning assignment has (numerically) zero mass.
    pub rows: Vec<Option<Vec<f64>>>,
}

impl ConditionalTable {
    pub fn given_sizes(&self) -> Vec<usize> {
        self.given.iter().map(|v| v.size).collect()
    }

    pub fn row(&self, given_values: &[usize]) -> Option<&[f64]> {
        self.rows[flat_index(&self.given_sizes(), given_values)].as_deref()
    }

    /// Entry `P(target = t | given = g)`, or `None` for an undefined row.
    pub fn prob(&self, target_values: &[usize], given_values: &[usize]) -> Option<f64> {
        let sizes: Vec<usize> = self.target.iter().map(|v| v.size).collect();
        self.row(given_values)
            .map(|row| row[flat_index(&sizes, target_values)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(names: &[&str]) -> Vec<VarId> {
        names.iter().map(|n| VarId::new(*n, 2)).collect()
    }

    #[test]
    fn odometer_last_fastest() {
        let cells: Vec<_> = Odometer::new(&[2, 3]).collect();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[1], vec![0, 1]);
        assert_eq!(cells[3], vec![1, 0]);
        for (i, c) in cells.iter().enumerate() {
            assert_eq!(flat_index(&[2, 3], c), i);
        }
    }

    #[test]
    fn rejects_bad_pmfs() {
        assert!(matches!(
            JointPmf::new(bits(&["x"]), vec![0.5, 0.4]),
            Err(IsacError::InvalidPmf(_))
        ));
        assert!(matches!(
            JointPmf::new(bits(&["x"]), vec![1.5, -0.5]),
            Err(IsacError::InvalidPmf(_))
        ));
        assert!(matches!(
            JointPmf::new(bits(&["x", "x"]), vec![0.25; 4]),
            Err(IsacError::DuplicateVariable(_))
        ));
        assert!(JointPmf::new(bits(&["x"]), vec![1.0]).is_err());
    }

    #[test]
    fn marginal_of_uniform_square() {
        let p = JointPmf::uniform(bits(&["x", "y"])).unwrap();
        let m = p.marginalize(&["x"]).unwrap();
        assert_eq!(m.mass(), &[0.5, 0.5]);
        let same = m.marginalize(&["x"]).unwrap();
        assert_eq!(same, m);
    }

    #[test]
    fn marginal_follows_keep_order() {
        let p = JointPmf::new(bits(&["x", "y"]), vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let swapped = p.marginalize(&["y", "x"]).unwrap();
        assert_eq!(swapped.vars()[0].name, "y");
        assert_eq!(swapped.get(&[1, 0]), 0.2);
        assert_eq!(swapped.get(&[0, 1]), 0.3);
    }

    #[test]
    fn unknown_variable_is_reported() {
        let p = JointPmf::uniform(bits(&["x"])).unwrap();
        assert!(matches!(p.marginalize(&["z"]), Err(IsacError::UnknownVariable(n)) if n == "z"));
        assert!(matches!(p.entropy(&["z"]), Err(IsacError::UnknownVariable(_))));
    }

    #[test]
    fn overlapping_sets_rejected() {
        let p = JointPmf::uniform(bits(&["x", "y"])).unwrap();
        assert!(matches!(
            p.condition(&["x"], &["x", "y"]),
            Err(IsacError::OverlappingSets(_))
        ));
        assert!(matches!(
            p.mutual_information(&["x"], &["x"]),
            Err(IsacError::OverlappingSets(_))
        ));
    }

    #[test]
    fn condition_independent_pair_returns_marginal() {
        let px = [0.3, 0.7];
        let py = [0.6, 0.4];
        let p = JointPmf::from_fn(bits(&["x", "y"]), |c| px[c[0]] * py[c[1]]).unwrap();
        let k = p.condition(&["y"], &["x"]).unwrap();
        for x in 0..2 {
            let row = k.row(&[x]).unwrap();
            assert!((row[0] - 0.6).abs() < 1e-15 && (row[1] - 0.4).abs() < 1e-15);
        }
    }

    #[test]
    fn condition_deterministic_copy_is_identity() {
        let p = JointPmf::from_fn(bits(&["x", "y"]), |c| if c[0] == c[1] { 0.5 } else { 0.0 })
            .unwrap();
        let k = p.condition(&["y"], &["x"]).unwrap();
        assert_eq!(k.row(&[0]).unwrap(), &[1.0, 0.0]);
        assert_eq!(k.row(&[1]).unwrap(), &[0.0, 1.0]);
    }

    #[test]
    fn zero_mass_rows_are_undefined() {
        let p = JointPmf::point_mass(bits(&["x", "y"]), &[1, 0]).unwrap();
        let k = p.condition(&["y"], &["x"]).unwrap();
        assert!(k.row(&[0]).is_none());
        assert_eq!(k.prob(&[0], &[1]), Some(1.0));
    }

    #[test]
    fn entropy_examples() {
        let u = JointPmf::uniform(bits(&["x", "y"])).unwrap();
        assert_eq!(u.entropy(&["x", "y"]).unwrap(), 2.0);
        let pm = JointPmf::point_mass(bits(&["x", "y"]), &[0, 1]).unwrap();
        assert_eq!(pm.entropy(&["x", "y"]).unwrap(), 0.0);
        let b = JointPmf::new(bits(&["x"]), vec![0.75, 0.25]).unwrap();
        // −0.25·log₂0.25 − 0.75·log₂0.75 = 0.5 + 0.311278124459133
        let expected = 0.5 + 0.75 * (4.0f64 / 3.0).log2();
        assert!((b.entropy(&["x"]).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.811_278_124_459_133).abs() < 1e-14);
        assert_eq!(b.entropy(&[]).unwrap(), 0.0);
    }

    #[test]
    fn conditional_entropy_examples() {
        let p = JointPmf::new(bits(&["x", "y"]), vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!(p.conditional_entropy(&["x"], &["x"]).is_err());
        let q = JointPmf::from_fn(bits(&["x", "y"]), |c| [0.2, 0.8][c[0]] * [0.5, 0.5][c[1]])
            .unwrap();
        let hx = q.entropy(&["x"]).unwrap();
        assert!((q.conditional_entropy(&["x"], &["y"]).unwrap() - hx).abs() < 1e-12);
        let copy = JointPmf::from_fn(bits(&["x", "y"]), |c| if c[0] == c[1] { 0.5 } else { 0.0 })
            .unwrap();
        assert_eq!(copy.conditional_entropy(&["y"], &["x"]).unwrap(), 0.0);
    }

    #[test]
    fn mutual_information_examples() {
        let copy = JointPmf::from_fn(bits(&["x", "y"]), |c| if c[0] == c[1] { 0.5 } else { 0.0 })
            .unwrap();
        assert_eq!(copy.mutual_information(&["x"], &["y"]).unwrap(), 1.0);
        let indep = JointPmf::uniform(bits(&["x", "y"])).unwrap();
        assert_eq!(indep.mutual_information(&["x"], &["y"]).unwrap(), 0.0);
    }

    #[test]
    fn binary_helpers() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
        assert!((convolve(0.2, 0.3).unwrap() - 0.38).abs() < 1e-15);
        for q in [0.0, 0.13, 0.5, 0.77, 1.0] {
            assert_eq!(convolve(0.5, q).unwrap(), 0.5);
        }
        assert!(convolve(-0.1, 0.5).is_err());
    }

    #[test]
    fn binary_entropy_is_concave_on_grid() {
        let h: Vec<f64> = (0..=1000)
            .map(|i| binary_entropy(i as f64 / 1000.0).unwrap())
            .collect();
        for i in 1..1000 {
            assert!(h[i] + 1e-15 >= 0.5 * (h[i - 1] + h[i + 1]), "at {i}");
        }
    }
}
