//! Exact finite-alphabet probability algebra.
//!
//! Everything downstream (relay rates, broadcast regions, the optimizer's
//! objective functions) is built from two types: [`JointPmf`], a dense
//! probability tensor over named variables, and [`ChannelSpec`], a
//! conditional distribution p(outputs|inputs). Tensors are stored row-major
//! with the *last* listed variable varying fastest, matching the JSON wire
//! format. All entropies and mutual informations are in bits.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalization tolerance for tensors constructed in memory.
pub const SUM_TOL: f64 = 1e-12;
/// Normalization tolerance for marginals supplied by callers.
pub const MARGINAL_TOL: f64 = 1e-9;
/// Tolerance below which a mutual information is treated as rounding noise.
pub const MI_CLAMP: f64 = 1e-12;
/// Independence / conditional-independence check tolerance.
pub const INDEP_TOL: f64 = 1e-9;

/// A named finite-alphabet variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub size: usize,
}

impl Var {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        Var { name: name.into(), size }
    }
}

fn entropy_of(probs: impl Iterator<Item = f64>) -> f64 {
    let mut h = 0.0;
    for p in probs {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

fn strides(sizes: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; sizes.len()];
    for k in (0..sizes.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * sizes[k + 1];
    }
    s
}

/// Dense joint pmf over named finite variables.
#[derive(Debug, Clone)]
pub struct JointPmf {
    vars: Vec<Var>,
    probs: Vec<f64>,
    strides: Vec<usize>,
}

impl JointPmf {
    /// Builds a joint pmf, validating shape, nonnegativity and normalization
    /// to [`SUM_TOL`].
    pub fn new(vars: Vec<Var>, probs: Vec<f64>) -> Result<Self> {
        Self::with_sum_tol(vars, probs, SUM_TOL, false)
    }

    /// Like [`JointPmf::new`] but with a caller-chosen normalization
    /// tolerance; when `renormalize` is set the tensor is rescaled to sum
    /// exactly to 1 after the check passes. Used for file ingestion, where
    /// published tables carry only 7 significant digits.
    pub fn with_sum_tol(
        vars: Vec<Var>,
        mut probs: Vec<f64>,
        tol: f64,
        renormalize: bool,
    ) -> Result<Self> {
        let expect: usize = vars.iter().map(|v| v.size).product();
        if vars.iter().any(|v| v.size == 0) {
            return Err(Error::DimensionMismatch("zero-size alphabet".into()));
        }
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.name.clone()) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        if probs.len() != expect {
            return Err(Error::DimensionMismatch(format!(
                "tensor has {} entries, variables imply {}",
                probs.len(),
                expect
            )));
        }
        for (i, &p) in probs.iter().enumerate() {
            if p < 0.0 {
                return Err(Error::NegativeProbability { index: i, value: p });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::NotNormalized { sum, tol });
        }
        if renormalize && sum != 1.0 {
            for p in probs.iter_mut() {
                *p /= sum;
            }
        }
        let sz: Vec<usize> = vars.iter().map(|v| v.size).collect();
        Ok(JointPmf { strides: strides(&sz), vars, probs })
    }

    /// Product of independent marginals, in the order given.
    pub fn product_of_marginals(marginals: &[(Var, Vec<f64>)]) -> Result<Self> {
        let mut vars = Vec::new();
        let mut probs = vec![1.0];
        for (v, m) in marginals {
            if m.len() != v.size {
                return Err(Error::DimensionMismatch(format!(
                    "marginal `{}` has {} entries for alphabet size {}",
                    v.name,
                    m.len(),
                    v.size
                )));
            }
            let s: f64 = m.iter().sum();
            if (s - 1.0).abs() > MARGINAL_TOL {
                return Err(Error::NotNormalized { sum: s, tol: MARGINAL_TOL });
            }
            let mut next = Vec::with_capacity(probs.len() * m.len());
            for &p in &probs {
                for &q in m {
                    next.push(p * q);
                }
            }
            probs = next;
            vars.push(v.clone());
        }
        let sz: Vec<usize> = vars.iter().map(|v| v.size).collect();
        Ok(JointPmf { strides: strides(&sz), vars, probs })
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn axis_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn axes_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.axis_of(n)).collect()
    }

    fn check_disjoint(groups: &[&[&str]]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for g in groups {
            for n in *g {
                if !seen.insert(*n) {
                    return Err(Error::OverlappingSets((*n).to_string()));
                }
            }
        }
        Ok(())
    }

    /// Marginal probabilities over the given axes (sorted ascending),
    /// returned in row-major order over those axes.
    fn marginal_over_axes(&self, axes: &[usize]) -> Vec<f64> {
        let out_sizes: Vec<usize> = axes.iter().map(|&a| self.vars[a].size).collect();
        let out_len: usize = out_sizes.iter().product();
        let out_strides = strides(&out_sizes);
        let mut out = vec![0.0; out_len];
        for (flat, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut o = 0usize;
            for (k, &a) in axes.iter().enumerate() {
                let idx = (flat / self.strides[a]) % self.vars[a].size;
                o += idx * out_strides[k];
            }
            out[o] += p;
        }
        out
    }

    /// Sums out all variables not in `keep`. The surviving variables retain
    /// their original relative order.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointPmf> {
        let mut axes = self.axes_of(keep)?;
        axes.sort_unstable();
        axes.dedup();
        let probs = self.marginal_over_axes(&axes);
        let vars: Vec<Var> = axes.iter().map(|&a| self.vars[a].clone()).collect();
        let sz: Vec<usize> = vars.iter().map(|v| v.size).collect();
        Ok(JointPmf { strides: strides(&sz), vars, probs })
    }

    fn subset_entropy(&self, names: &BTreeSet<&str>) -> Result<f64> {
        if names.is_empty() {
            return Ok(0.0);
        }
        let mut axes = Vec::with_capacity(names.len());
        for n in names {
            axes.push(self.axis_of(n)?);
        }
        axes.sort_unstable();
        Ok(entropy_of(self.marginal_over_axes(&axes).into_iter()))
    }

    /// H(vars | given) in bits, with 0·log 0 ≡ 0.
    pub fn entropy(&self, vars: &[&str], given: &[&str]) -> Result<f64> {
        Self::check_disjoint(&[vars, given])?;
        let b: BTreeSet<&str> = given.iter().copied().collect();
        let ab: BTreeSet<&str> = vars.iter().chain(given.iter()).copied().collect();
        Ok(self.subset_entropy(&ab)? - self.subset_entropy(&b)?)
    }

    /// I(a ; b | given) in bits, clamped to 0 against −1e-12 rounding.
    /// Anything more negative signals a genuinely inconsistent tensor.
    pub fn mutual_information(&self, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
        Self::check_disjoint(&[a, b, given])?;
        let bg: Vec<&str> = b.iter().chain(given.iter()).copied().collect();
        let mi = self.entropy(a, given)? - self.entropy(a, &bg)?;
        if mi < -MI_CLAMP {
            return Err(Error::NegativeInformation(mi));
        }
        Ok(mi.max(0.0))
    }

    /// Appends a time-sharing quantization of `source_var`: the new variable
    /// copies the source with probability `q` and is the erasure symbol
    /// (last index) otherwise, conditionally independent of everything else
    /// given the source.
    pub fn apply_ts_mapping(&self, source_var: &str, q: f64, new_var: &str) -> Result<JointPmf> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!(
                "time-sharing probability q={q} outside [0,1]"
            )));
        }
        if self.vars.iter().any(|v| v.name == new_var) {
            return Err(Error::DuplicateVariable(new_var.to_string()));
        }
        let src = self.axis_of(source_var)?;
        let src_size = self.vars[src].size;
        let new_size = src_size + 1;
        let mut probs = vec![0.0; self.probs.len() * new_size];
        for (flat, &p) in self.probs.iter().enumerate() {
            let s = (flat / self.strides[src]) % src_size;
            probs[flat * new_size + s] += q * p;
            probs[flat * new_size + (new_size - 1)] += (1.0 - q) * p;
        }
        let mut vars = self.vars.clone();
        vars.push(Var::new(new_var, new_size));
        let sz: Vec<usize> = vars.iter().map(|v| v.size).collect();
        Ok(JointPmf { strides: strides(&sz), vars, probs })
    }

    /// Appends the channel's output variables, multiplying by
    /// p(outputs | inputs). All channel inputs must already be present.
    pub fn extend_with_channel(&self, channel: &ChannelSpec) -> Result<JointPmf> {
        let in_axes: Vec<usize> = channel
            .input_vars
            .iter()
            .map(|v| {
                let a = self.axis_of(&v.name)?;
                if self.vars[a].size != v.size {
                    return Err(Error::DimensionMismatch(format!(
                        "variable `{}` has size {} here but {} in the channel",
                        v.name, self.vars[a].size, v.size
                    )));
                }
                Ok(a)
            })
            .collect::<Result<_>>()?;
        for v in &channel.output_vars {
            if self.vars.iter().any(|w| w.name == v.name) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        let in_sizes: Vec<usize> = channel.input_vars.iter().map(|v| v.size).collect();
        let in_strides = strides(&in_sizes);
        let out_len: usize = channel.output_vars.iter().map(|v| v.size).product();
        let mut probs = vec![0.0; self.probs.len() * out_len];
        for (flat, &p) in self.probs.iter().enumerate() {
            let mut ci = 0usize;
            for (k, &a) in in_axes.iter().enumerate() {
                let idx = (flat / self.strides[a]) % self.vars[a].size;
                ci += idx * in_strides[k];
            }
            let row = &channel.probs[ci * out_len..(ci + 1) * out_len];
            let dst = &mut probs[flat * out_len..(flat + 1) * out_len];
            for (d, &c) in dst.iter_mut().zip(row) {
                *d = p * c;
            }
        }
        let mut vars = self.vars.clone();
        vars.extend(channel.output_vars.iter().cloned());
        let sz: Vec<usize> = vars.iter().map(|v| v.size).collect();
        Ok(JointPmf { strides: strides(&sz), vars, probs })
    }

    /// Conditions on `var = value`, removing the variable. Returns the
    /// conditioned joint and the mass of the conditioning event.
    pub fn condition_on(&self, var: &str, value: usize) -> Result<(JointPmf, f64)> {
        let a = self.axis_of(var)?;
        if value >= self.vars[a].size {
            return Err(Error::InvalidParameter(format!(
                "symbol {value} out of range for `{var}`"
            )));
        }
        let mut vars = self.vars.clone();
        vars.remove(a);
        let out_len = self.probs.len() / self.vars[a].size;
        let mut probs = Vec::with_capacity(out_len);
        for (flat, &p) in self.probs.iter().enumerate() {
            if (flat / self.strides[a]) % self.vars[a].size == value {
                probs.push(p);
            }
        }
        let mass: f64 = probs.iter().sum();
        if mass < 1e-300 {
            return Err(Error::InvalidParameter(format!(
                "conditioning event `{var}`={value} has zero mass"
            )));
        }
        for p in probs.iter_mut() {
            *p /= mass;
        }
        let sz: Vec<usize> = vars.iter().map(|v| v.size).collect();
        Ok((JointPmf { strides: strides(&sz), vars, probs }, mass))
    }

    /// Checks I(a ; b | given) < tol.
    pub fn is_cond_independent(
        &self,
        a: &[&str],
        b: &[&str],
        given: &[&str],
        tol: f64,
    ) -> Result<bool> {
        Ok(self.mutual_information(a, b, given)? < tol)
    }
}

/// Conditional pmf p(outputs | inputs) over finite alphabets.
///
/// The tensor is laid out row-major over inputs-then-outputs, last variable
/// fastest: entry index = input_flat · |outputs| + output_flat.
#[derive(Debug, Clone)]
pub struct ChannelSpec {
    pub input_vars: Vec<Var>,
    pub output_vars: Vec<Var>,
    probs: Vec<f64>,
}

impl ChannelSpec {
    pub fn new(input_vars: Vec<Var>, output_vars: Vec<Var>, probs: Vec<f64>) -> Result<Self> {
        Self::with_slice_tol(input_vars, output_vars, probs, SUM_TOL, false)
    }

    pub fn with_slice_tol(
        input_vars: Vec<Var>,
        output_vars: Vec<Var>,
        mut probs: Vec<f64>,
        tol: f64,
        renormalize: bool,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in input_vars.iter().chain(output_vars.iter()) {
            if v.size == 0 {
                return Err(Error::DimensionMismatch("zero-size alphabet".into()));
            }
            if !seen.insert(v.name.clone()) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        if output_vars.is_empty() {
            return Err(Error::DimensionMismatch("channel needs at least one output".into()));
        }
        let in_len: usize = input_vars.iter().map(|v| v.size).product();
        let out_len: usize = output_vars.iter().map(|v| v.size).product();
        if probs.len() != in_len * out_len {
            return Err(Error::DimensionMismatch(format!(
                "channel tensor has {} entries, variables imply {}",
                probs.len(),
                in_len * out_len
            )));
        }
        for (i, &p) in probs.iter().enumerate() {
            if p < 0.0 {
                return Err(Error::NegativeProbability { index: i, value: p });
            }
        }
        for row in 0..in_len {
            let s: f64 = probs[row * out_len..(row + 1) * out_len].iter().sum();
            if (s - 1.0).abs() > tol {
                return Err(Error::NotNormalized { sum: s, tol });
            }
            if renormalize && s != 1.0 {
                for p in &mut probs[row * out_len..(row + 1) * out_len] {
                    *p /= s;
                }
            }
        }
        Ok(ChannelSpec { input_vars, output_vars, probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn output_len(&self) -> usize {
        self.output_vars.iter().map(|v| v.size).product()
    }

    /// Worst conditional-slice normalization defect (for `validate`).
    pub fn worst_slice_defect(&self) -> f64 {
        let out_len = self.output_len();
        self.probs
            .chunks(out_len)
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Joint pmf from independent input marginals pushed through a channel
/// (inputs in channel order, then outputs).
pub fn build_joint(inputs: &[(Var, Vec<f64>)], channel: &ChannelSpec) -> Result<JointPmf> {
    if inputs.len() != channel.input_vars.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} marginals supplied for {} channel inputs",
            inputs.len(),
            channel.input_vars.len()
        )));
    }
    // Reorder the marginals to the channel's input order.
    let mut ordered = Vec::with_capacity(inputs.len());
    for cv in &channel.input_vars {
        let (v, m) = inputs
            .iter()
            .find(|(v, _)| v.name == cv.name)
            .ok_or_else(|| Error::UnknownVariable(cv.name.clone()))?;
        if v.size != cv.size {
            return Err(Error::DimensionMismatch(format!(
                "marginal `{}` has size {}, channel expects {}",
                v.name, v.size, cv.size
            )));
        }
        ordered.push((v.clone(), m.clone()));
    }
    let prior = JointPmf::product_of_marginals(&ordered)?;
    prior.extend_with_channel(channel)
}

// ---------------------------------------------------------------------------
// JSON wire format

#[derive(Serialize, Deserialize)]
struct JointJson {
    vars: Vec<Var>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    inputs: Vec<Var>,
    outputs: Vec<Var>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&JointJson {
            vars: self.vars.clone(),
            probs: self.probs.clone(),
        })
        .expect("joint pmf serialization")
    }

    /// Parses the `{"vars":[...],"probs":[...]}` format. File tolerance is
    /// 1e-6 with exact renormalization, so published fixed-precision tables
    /// ingest cleanly while in-memory invariants stay at 1e-12.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: JointJson = serde_json::from_str(s)?;
        JointPmf::with_sum_tol(j.vars, j.probs, 1e-6, true)
    }
}

impl ChannelSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ChannelJson {
            inputs: self.input_vars.clone(),
            outputs: self.output_vars.clone(),
            probs: self.probs.clone(),
        })
        .expect("channel serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: ChannelJson = serde_json::from_str(s)?;
        ChannelSpec::with_slice_tol(j.inputs, j.outputs, j.probs, 1e-6, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng as _, SeedableRng as _};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_joint(vars: Vec<Var>, seed: u64) -> JointPmf {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n: usize = vars.iter().map(|v| v.size).product();
        let mut probs: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
        let s: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= s);
        JointPmf::new(vars, probs).unwrap()
    }

    #[test]
    fn point_mass_through_channel_is_channel_slice() {
        let ch = ChannelSpec::new(
            vec![Var::new("X", 2)],
            vec![Var::new("Y", 2)],
            vec![0.9, 0.1, 0.2, 0.8],
        )
        .unwrap();
        let j = build_joint(&[(Var::new("X", 2), vec![0.0, 1.0])], &ch).unwrap();
        let m = j.marginalize(&["Y"]).unwrap();
        assert_abs_diff_eq!(m.probs()[0], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(m.probs()[1], 0.8, epsilon = 1e-15);
    }

    #[test]
    fn uniform_through_identity_is_diagonal() {
        let ch = ChannelSpec::new(
            vec![Var::new("X", 2)],
            vec![Var::new("Y", 2)],
            vec![1.0, 0.0, 0.0, 1.0],
        )
        .unwrap();
        let j = build_joint(&[(Var::new("X", 2), vec![0.5, 0.5])], &ch).unwrap();
        assert_eq!(j.probs(), &[0.5, 0.0, 0.0, 0.5]);
        assert_abs_diff_eq!(j.mutual_information(&["X"], &["Y"], &[]).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn marginalize_identity_and_empty() {
        let j = random_joint(vec![Var::new("A", 2), Var::new("B", 3)], 1);
        let full = j.marginalize(&["A", "B"]).unwrap();
        assert_eq!(full.probs(), j.probs());
        let none = j.marginalize(&[]).unwrap();
        assert_eq!(none.probs().len(), 1);
        assert_abs_diff_eq!(none.probs()[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn marginalize_recovers_factor() {
        let px = vec![0.3, 0.7];
        let ch = ChannelSpec::new(
            vec![Var::new("X", 2)],
            vec![Var::new("Y", 2)],
            vec![0.6, 0.4, 0.25, 0.75],
        )
        .unwrap();
        let j = build_joint(&[(Var::new("X", 2), px.clone())], &ch).unwrap();
        let m = j.marginalize(&["X"]).unwrap();
        assert_abs_diff_eq!(m.probs()[0], px[0], epsilon = 1e-14);
        assert_abs_diff_eq!(m.probs()[1], px[1], epsilon = 1e-14);
    }

    #[test]
    fn entropy_basics() {
        let j = JointPmf::new(vec![Var::new("X", 2)], vec![0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(j.entropy(&["X"], &[]).unwrap(), 1.0, epsilon = 1e-15);
        let p = JointPmf::new(vec![Var::new("X", 2)], vec![1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(p.entropy(&["X"], &[]).unwrap(), 0.0, epsilon = 1e-15);
        let b = JointPmf::new(vec![Var::new("X", 2)], vec![0.25, 0.75]).unwrap();
        // independent oracle: -0.25 log2 0.25 - 0.75 log2 0.75
        let expect = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert_abs_diff_eq!(b.entropy(&["X"], &[]).unwrap(), expect, epsilon = 1e-15);
        assert_abs_diff_eq!(expect, 0.8112781244591328, epsilon = 1e-12);
    }

    #[test]
    fn mi_independent_vars_zero() {
        let j = JointPmf::product_of_marginals(&[
            (Var::new("A", 2), vec![0.2, 0.8]),
            (Var::new("B", 3), vec![0.1, 0.3, 0.6]),
        ])
        .unwrap();
        assert_abs_diff_eq!(j.mutual_information(&["A"], &["B"], &[]).unwrap(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn mi_chain_rule() {
        let j = random_joint(vec![Var::new("X", 2), Var::new("Y", 2), Var::new("Z", 2)], 7);
        let lhs = j.mutual_information(&["X"], &["Y", "Z"], &[]).unwrap();
        let rhs = j.mutual_information(&["X"], &["Y"], &[]).unwrap()
            + j.mutual_information(&["X"], &["Z"], &["Y"]).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn overlapping_sets_error() {
        let j = random_joint(vec![Var::new("X", 2), Var::new("Y", 2)], 3);
        assert!(matches!(
            j.entropy(&["X"], &["X"]),
            Err(Error::OverlappingSets(_))
        ));
        assert!(matches!(
            j.mutual_information(&["X"], &["Y"], &["Y"]),
            Err(Error::OverlappingSets(_))
        ));
    }

    #[test]
    fn ts_mapping_edge_cases() {
        let j = random_joint(vec![Var::new("X", 2), Var::new("Y1", 2)], 11);
        // q = 1: perfect copy
        let c = j.apply_ts_mapping("Y1", 1.0, "Yh").unwrap();
        let mi_src = c.mutual_information(&["X"], &["Y1"], &[]).unwrap();
        let mi_new = c.mutual_information(&["X"], &["Yh"], &[]).unwrap();
        assert_abs_diff_eq!(mi_src, mi_new, epsilon = 1e-12);
        // q = 0: constant erasure
        let e = j.apply_ts_mapping("Y1", 0.0, "Yh").unwrap();
        assert_abs_diff_eq!(e.mutual_information(&["X"], &["Yh"], &[]).unwrap(), 0.0, epsilon = 1e-13);
        // q = 0.5 on binary source: H(Yh|Y1) = 1 bit
        let h = j.apply_ts_mapping("Y1", 0.5, "Yh").unwrap();
        assert_abs_diff_eq!(h.entropy(&["Yh"], &["Y1"]).unwrap(), 1.0, epsilon = 1e-12);
        assert!(j.apply_ts_mapping("Y1", 1.5, "Yh").is_err());
    }

    #[test]
    fn json_round_trip() {
        let j = random_joint(vec![Var::new("X", 2), Var::new("Y", 3)], 5);
        let back = JointPmf::from_json(&j.to_json()).unwrap();
        assert_eq!(back.probs(), j.probs());
        let ch = ChannelSpec::new(
            vec![Var::new("X", 2)],
            vec![Var::new("Y", 2)],
            vec![0.9, 0.1, 0.2, 0.8],
        )
        .unwrap();
        let back = ChannelSpec::from_json(&ch.to_json()).unwrap();
        assert_eq!(back.probs(), ch.probs());
    }

    #[test]
    fn row_major_last_fastest() {
        // p(X=1,Y=0) must sit at flat index 1*|Y| + 0.
        let j = JointPmf::new(
            vec![Var::new("X", 2), Var::new("Y", 2)],
            vec![0.1, 0.2, 0.3, 0.4],
        )
        .unwrap();
        let (cond, mass) = j.condition_on("X", 1).unwrap();
        assert_abs_diff_eq!(mass, 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(cond.probs()[0], 0.3 / 0.7, epsilon = 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn invariants_on_random_joints(seed in 0u64..5000) {
            let j = random_joint(
                vec![Var::new("X", 2), Var::new("X1", 2), Var::new("Y", 3)],
                seed,
            );
            prop_assert!((j.total_mass() - 1.0).abs() < 1e-12);
            let ha = j.entropy(&["X"], &[]).unwrap();
            let hab = j.entropy(&["X"], &["Y"]).unwrap();
            prop_assert!(hab <= ha + 1e-12);
            let mi = j.mutual_information(&["X"], &["Y"], &["X1"]).unwrap();
            prop_assert!(mi >= 0.0);
            let mi_xy = j.mutual_information(&["X"], &["Y"], &[]).unwrap();
            let hy = j.entropy(&["Y"], &[]).unwrap();
            prop_assert!(mi_xy <= ha.min(hy) + 1e-12);
        }

        #[test]
        fn ts_identities_exact(seed in 0u64..2000, qi in 0u32..=20) {
            let q = qi as f64 / 20.0;
            let j = random_joint(
                vec![Var::new("X", 2), Var::new("X1", 2), Var::new("Y", 2), Var::new("Y1", 3)],
                seed,
            );
            let c = j.apply_ts_mapping("Y1", q, "Yh1").unwrap();
            prop_assert!((c.total_mass() - 1.0).abs() < 1e-12);
            // I(X; Yh1 | X1, Y) = q I(X; Y1 | X1, Y)
            let lhs = c.mutual_information(&["X"], &["Yh1"], &["X1", "Y"]).unwrap();
            let rhs = q * c.mutual_information(&["X"], &["Y1"], &["X1", "Y"]).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
            // I(Y1; Yh1 | X1, Y) = q H(Y1 | X1, Y)
            let lhs2 = c.mutual_information(&["Y1"], &["Yh1"], &["X1", "Y"]).unwrap();
            let rhs2 = q * c.entropy(&["Y1"], &["X1", "Y"]).unwrap();
            prop_assert!((lhs2 - rhs2).abs() < 1e-12);
            // data processing
            let dpi_l = c.mutual_information(&["X"], &["Yh1"], &["X1"]).unwrap();
            let dpi_r = c.mutual_information(&["X"], &["Y1"], &["X1"]).unwrap();
            prop_assert!(dpi_l <= dpi_r + 1e-12);
        }
    }
}
