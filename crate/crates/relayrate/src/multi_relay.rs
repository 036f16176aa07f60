//! Multi-relay time-sharing rates with subset enumeration, the two-relay
//! decode-and-forward baseline, and the point-to-point rate with relay
//! inputs frozen at their best constant symbols.

use crate::error::{Error, Result};
use crate::prob::{ChannelSpec, JointPmf, INDEP_TOL};

/// Default cap on the relay count: the rate sum enumerates 2^N subsets.
pub const MAX_RELAYS: usize = 10;

fn relay_name(prefix: &str, i: usize) -> String {
    format!("{prefix}{i}")
}

/// Joint distribution over {X, X1..XN, Y, Y1..YN} with independent inputs.
#[derive(Debug, Clone)]
pub struct MultiRelayInstance {
    joint: JointPmf,
    n: usize,
}

impl MultiRelayInstance {
    pub fn new(joint: JointPmf, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("relay count must be positive".into()));
        }
        joint.axis_of("X")?;
        joint.axis_of("Y")?;
        for i in 1..=n {
            joint.axis_of(&relay_name("X", i))?;
            joint.axis_of(&relay_name("Y", i))?;
        }
        let inst = MultiRelayInstance { joint, n };
        // Theorem's product chain: all inputs pairwise independent.
        let names = inst.input_names();
        for a in 0..names.len() {
            for b in (a + 1)..names.len() {
                let mi = inst
                    .joint
                    .mutual_information(&[&names[a]], &[&names[b]], &[])?;
                if mi >= INDEP_TOL {
                    return Err(Error::Precondition(format!(
                        "inputs `{}` and `{}` are dependent: I = {mi:.3e}",
                        names[a], names[b]
                    )));
                }
            }
        }
        Ok(inst)
    }

    pub fn joint(&self) -> &JointPmf {
        &self.joint
    }

    pub fn relay_count(&self) -> usize {
        self.n
    }

    fn input_names(&self) -> Vec<String> {
        let mut v = vec!["X".to_string()];
        v.extend((1..=self.n).map(|i| relay_name("X", i)));
        v
    }

    fn relay_input_names(&self) -> Vec<String> {
        (1..=self.n).map(|i| relay_name("X", i)).collect()
    }
}

/// Probability that exactly the relays in the bit pattern of `theta`
/// transmit while the others erase, together with the 1-based relay indices
/// selected. Relay `i` maps to bit `i-1`.
pub fn subset_weight(q: &[f64], theta: usize) -> Result<(f64, Vec<usize>)> {
    let n = q.len();
    if n == 0 || n > MAX_RELAYS {
        return Err(Error::InvalidParameter(format!(
            "relay count {n} outside 1..={MAX_RELAYS}"
        )));
    }
    if theta == 0 || theta >= (1 << n) {
        return Err(Error::InvalidParameter(format!(
            "theta {theta} outside 1..{}",
            (1usize << n) - 1
        )));
    }
    for (i, &qi) in q.iter().enumerate() {
        if !(0.0..=1.0).contains(&qi) {
            return Err(Error::InvalidParameter(format!(
                "q[{i}] = {qi} outside [0,1]"
            )));
        }
    }
    let mut prob = 1.0;
    let mut indices = Vec::new();
    for i in 1..=n {
        if theta >> (i - 1) & 1 == 1 {
            prob *= q[i - 1];
            indices.push(i);
        } else {
            prob *= 1.0 - q[i - 1];
        }
    }
    Ok((prob, indices))
}

/// Achievable rate for a given vector of time-sharing ratios:
/// I(X;Y|X_all) + Σ_θ P(θ) · I(X; Y_θ | X_all, Y), summed in ascending θ.
pub fn ts_rate_with_q(inst: &MultiRelayInstance, q: &[f64]) -> Result<f64> {
    let n = inst.n;
    if q.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} ratios for {n} relays",
            q.len()
        )));
    }
    let j = inst.joint();
    let relay_inputs = inst.relay_input_names();
    let relay_refs: Vec<&str> = relay_inputs.iter().map(|s| s.as_str()).collect();
    let mut cond = relay_refs.clone();
    cond.push("Y");
    let mut rate = j.mutual_information(&["X"], &["Y"], &relay_refs)?;
    for theta in 1..(1usize << n) {
        let (p, idx) = subset_weight(q, theta)?;
        if p == 0.0 {
            continue;
        }
        let group: Vec<String> = idx.iter().map(|&i| relay_name("Y", i)).collect();
        let group_refs: Vec<&str> = group.iter().map(|s| s.as_str()).collect();
        rate += p * j.mutual_information(&["X"], &group_refs, &cond)?;
    }
    Ok(rate)
}

fn clamp_ratio(num: f64, den: f64) -> f64 {
    if den <= 0.0 {
        1.0
    } else {
        (num / den).min(1.0)
    }
}

/// Per-relay ratios decoded independently of the other relays:
/// q_i = [I(X_i;Y) / H(Y_i|X_all,Y)]*, X_all the relay inputs.
pub fn multi_ts_eaf_simple(inst: &MultiRelayInstance) -> Result<(f64, Vec<f64>)> {
    let n = inst.n;
    if n > MAX_RELAYS {
        return Err(Error::InvalidParameter(format!(
            "relay count {n} exceeds the {MAX_RELAYS}-relay enumeration cap"
        )));
    }
    let j = inst.joint();
    let relay_inputs = inst.relay_input_names();
    let relay_refs: Vec<&str> = relay_inputs.iter().map(|s| s.as_str()).collect();
    let mut cond = relay_refs.clone();
    cond.push("Y");
    let mut q = Vec::with_capacity(n);
    for i in 1..=n {
        let xi = relay_name("X", i);
        let yi = relay_name("Y", i);
        let num = j.mutual_information(&[&xi], &["Y"], &[])?;
        let den = j.entropy(&[&yi], &cond)?;
        q.push(clamp_ratio(num, den));
    }
    let rate = ts_rate_with_q(inst, &q)?;
    Ok((rate, q))
}

/// Order in which the destination decodes the relay codewords (`x_order`)
/// and the quantization indices (`yhat_order`), both 1-based permutations.
/// A quantization index may only rely on priors whose codewords were
/// decoded earlier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodingOrder {
    pub x_order: Vec<usize>,
    pub yhat_order: Vec<usize>,
}

impl DecodingOrder {
    pub fn new(x_order: Vec<usize>, yhat_order: Vec<usize>) -> Result<Self> {
        let n = x_order.len();
        let check_perm = |v: &[usize], what: &str| -> Result<()> {
            let mut seen = vec![false; n + 1];
            if v.len() != n {
                return Err(Error::InvalidParameter(format!("{what} length mismatch")));
            }
            for &i in v {
                if i == 0 || i > n || seen[i] {
                    return Err(Error::InvalidParameter(format!(
                        "{what} is not a permutation of 1..={n}"
                    )));
                }
                seen[i] = true;
            }
            Ok(())
        };
        check_perm(&x_order, "x_order")?;
        check_perm(&yhat_order, "yhat_order")?;
        let pos = |v: &[usize], i: usize| v.iter().position(|&x| x == i).unwrap();
        for &i in &yhat_order {
            for &p in &yhat_order {
                if pos(&yhat_order, p) < pos(&yhat_order, i) && pos(&x_order, p) > pos(&x_order, i)
                {
                    return Err(Error::Precondition(format!(
                        "quantizer of relay {i} relies on relay {p} whose codeword is decoded later"
                    )));
                }
            }
        }
        Ok(DecodingOrder { x_order, yhat_order })
    }

    /// Identity order 1,2,...,n.
    pub fn natural(n: usize) -> Self {
        let v: Vec<usize> = (1..=n).collect();
        DecodingOrder { x_order: v.clone(), yhat_order: v }
    }

    /// Priors with no sequential information: reduces the ordered rate to
    /// the independent-decoding assignment.
    pub fn empty_priors(n: usize) -> Self {
        Self::natural(n)
    }
}

/// Sequential-decoding ratios: each q_i conditions its numerator on the
/// codewords decoded earlier and discounts its denominator by the
/// quantization indices decoded earlier, weighted by their own ratios.
pub fn multi_ts_eaf_ordered(
    inst: &MultiRelayInstance,
    order: &DecodingOrder,
) -> Result<(f64, Vec<f64>)> {
    let n = inst.n;
    if n > MAX_RELAYS {
        return Err(Error::InvalidParameter(format!(
            "relay count {n} exceeds the {MAX_RELAYS}-relay enumeration cap"
        )));
    }
    if order.x_order.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "order over {} relays for an {n}-relay instance",
            order.x_order.len()
        )));
    }
    let j = inst.joint();
    let relay_inputs = inst.relay_input_names();
    let relay_refs: Vec<&str> = relay_inputs.iter().map(|s| s.as_str()).collect();
    let mut cond = relay_refs.clone();
    cond.push("Y");

    let pos_x = |i: usize| order.x_order.iter().position(|&x| x == i).unwrap();
    let mut q = vec![0.0; n];
    for (k, &i) in order.yhat_order.iter().enumerate() {
        let xi = relay_name("X", i);
        let yi = relay_name("Y", i);
        // codewords decoded before relay i's
        let priors_x: Vec<String> = order.x_order[..pos_x(i)]
            .iter()
            .map(|&p| relay_name("X", p))
            .collect();
        let priors_refs: Vec<&str> = priors_x.iter().map(|s| s.as_str()).collect();
        let num = j.mutual_information(&[&xi], &["Y"], &priors_refs)?;
        // quantization indices decoded before relay i's, with their ratios
        let earlier: Vec<usize> = order.yhat_order[..k].to_vec();
        let qe: Vec<f64> = earlier.iter().map(|&p| q[p - 1]).collect();
        let mut den = j.entropy(&[&yi], &cond)?;
        if !earlier.is_empty() {
            for pattern in 1..(1usize << earlier.len()) {
                let (pw, sel) = subset_weight(&qe, pattern)?;
                if pw == 0.0 {
                    continue;
                }
                let group: Vec<String> =
                    sel.iter().map(|&s| relay_name("Y", earlier[s - 1])).collect();
                let group_refs: Vec<&str> = group.iter().map(|s| s.as_str()).collect();
                den -= pw * j.mutual_information(&[&yi], &group_refs, &cond)?;
            }
        }
        q[i - 1] = clamp_ratio(num, den);
    }
    let rate = ts_rate_with_q(inst, &q)?;
    Ok((rate, q))
}

/// The five decode-and-forward configurations for two relays and their
/// maximum.
#[derive(Debug, Clone, Copy)]
pub struct TwoRelayDaf {
    /// only relay 1 active, relay 2 frozen at its best constant symbol
    pub r1: f64,
    /// only relay 2 active
    pub r2: f64,
    /// relay 1 decodes first, then relay 2
    pub r12: f64,
    /// relay 2 decodes first
    pub r21: f64,
    /// both relays decode as one group
    pub r_g: f64,
    pub best: f64,
}

/// Evaluates all five two-relay decode-and-forward expressions under a
/// joint input distribution p(x, x1, x2).
pub fn two_relay_daf(channel: &ChannelSpec, dist: &JointPmf) -> Result<TwoRelayDaf> {
    for v in ["X", "X1", "X2"] {
        dist.axis_of(v)?;
    }
    let j = dist.extend_with_channel(channel)?;
    let mi = |a: &[&str], b: &[&str], c: &[&str]| j.mutual_information(a, b, c);
    let r_g = mi(&["X"], &["Y1"], &["X1", "X2"])?
        .min(mi(&["X"], &["Y2"], &["X1", "X2"])?)
        .min(mi(&["X", "X1", "X2"], &["Y"], &[])?);
    let r12 = mi(&["X"], &["Y1"], &["X1", "X2"])?
        .min(mi(&["X"], &["Y2"], &["X1", "X2"])? + mi(&["X1"], &["Y2"], &["X2"])?)
        .min(
            mi(&["X"], &["Y"], &["X1", "X2"])?
                + mi(&["X1"], &["Y"], &["X2"])?
                + mi(&["X2"], &["Y"], &[])?,
        );
    let r21 = mi(&["X"], &["Y2"], &["X1", "X2"])?
        .min(mi(&["X"], &["Y1"], &["X1", "X2"])? + mi(&["X2"], &["Y1"], &["X1"])?)
        .min(
            mi(&["X"], &["Y"], &["X1", "X2"])?
                + mi(&["X2"], &["Y"], &["X1"])?
                + mi(&["X1"], &["Y"], &[])?,
        );
    // Single-relay rates freeze the other relay's symbol at its best value,
    // conditioning the joint on that symbol.
    let single = |frozen: &str, other: &str, yr: &str| -> Result<f64> {
        let axis_size = j.vars()[j.axis_of(frozen)?].size;
        let mut best = f64::NEG_INFINITY;
        for v in 0..axis_size {
            let mass = dist.marginalize(&[frozen])?.probs()[v];
            if mass < 1e-12 {
                continue;
            }
            let (cj, _) = j.condition_on(frozen, v)?;
            let r = cj
                .mutual_information(&["X"], &[yr], &[other])?
                .min(
                    cj.mutual_information(&["X"], &["Y"], &[other])?
                        + cj.mutual_information(&[other], &["Y"], &[])?,
                );
            best = best.max(r);
        }
        if best == f64::NEG_INFINITY {
            return Err(Error::Precondition(format!(
                "no `{frozen}` symbol with positive mass"
            )));
        }
        Ok(best)
    };
    let r1 = single("X2", "X1", "Y1")?;
    let r2 = single("X1", "X2", "Y2")?;
    let best = r_g.max(r12).max(r21).max(r1).max(r2);
    Ok(TwoRelayDaf { r1, r2, r12, r21, r_g, best })
}

/// Discrete memoryless channel capacity by alternating maximization,
/// converged when the capacity bracket closes below `tol`.
/// Returns the capacity in bits and the maximizing input distribution.
pub fn channel_capacity(w: &[Vec<f64>], tol: f64) -> Result<(f64, Vec<f64>)> {
    let nx = w.len();
    if nx == 0 {
        return Err(Error::DimensionMismatch("empty transition matrix".into()));
    }
    let ny = w[0].len();
    if w.iter().any(|row| row.len() != ny) {
        return Err(Error::DimensionMismatch("ragged transition matrix".into()));
    }
    let mut p = vec![1.0 / nx as f64; nx];
    let mut lower = 0.0;
    for _ in 0..200_000 {
        let mut qy = vec![0.0; ny];
        for (x, row) in w.iter().enumerate() {
            for (y, &wxy) in row.iter().enumerate() {
                qy[y] += p[x] * wxy;
            }
        }
        let mut d = vec![0.0; nx];
        for (x, row) in w.iter().enumerate() {
            let mut acc = 0.0;
            for (y, &wxy) in row.iter().enumerate() {
                if wxy > 0.0 {
                    acc += wxy * (wxy / qy[y]).log2();
                }
            }
            d[x] = acc;
        }
        lower = p.iter().zip(&d).map(|(pi, di)| pi * di).sum();
        let upper = d.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        if upper - lower < tol {
            return Ok((lower.max(0.0), p));
        }
        let mut z = 0.0;
        for (pi, di) in p.iter_mut().zip(&d) {
            *pi *= ((di - lower) * std::f64::consts::LN_2).exp();
            z += *pi;
        }
        p.iter_mut().for_each(|pi| *pi /= z);
    }
    Ok((lower.max(0.0), p))
}

/// Point-to-point rate: relays transmit their best constant symbol pair and
/// the source distribution is optimized for the resulting p(y|x) slice.
pub fn ptp_rate(channel: &ChannelSpec) -> Result<f64> {
    let x_pos = channel
        .input_vars
        .iter()
        .position(|v| v.name == "X")
        .ok_or_else(|| Error::UnknownVariable("X".into()))?;
    let y_pos = channel
        .output_vars
        .iter()
        .position(|v| v.name == "Y")
        .ok_or_else(|| Error::UnknownVariable("Y".into()))?;
    let in_sizes: Vec<usize> = channel.input_vars.iter().map(|v| v.size).collect();
    let out_sizes: Vec<usize> = channel.output_vars.iter().map(|v| v.size).collect();
    let in_len: usize = in_sizes.iter().product();
    let out_len: usize = out_sizes.iter().product();
    let nx = in_sizes[x_pos];
    let ny = out_sizes[y_pos];
    let frozen_count = in_len / nx;
    let mut best = f64::NEG_INFINITY;
    // Enumerate frozen symbols of every input except X by iterating all
    // input cells and grouping them by their non-X coordinates.
    for frozen in 0..frozen_count {
        let mut w = vec![vec![0.0; ny]; nx];
        for cell in 0..in_len {
            // decode the input cell
            let mut rem = cell;
            let mut x_val = 0;
            let mut others = 0;
            let mut others_base = 1;
            for (k, &sz) in in_sizes.iter().enumerate().rev() {
                let idx = rem % sz;
                rem /= sz;
                if k == x_pos {
                    x_val = idx;
                } else {
                    others += idx * others_base;
                    others_base *= sz;
                }
            }
            if others != frozen {
                continue;
            }
            let row = &channel.probs()[cell * out_len..(cell + 1) * out_len];
            for (o, &p) in row.iter().enumerate() {
                let y_val = {
                    let mut rem = o;
                    let mut yv = 0;
                    for (k, &sz) in out_sizes.iter().enumerate().rev() {
                        let idx = rem % sz;
                        rem /= sz;
                        if k == y_pos {
                            yv = idx;
                        }
                    }
                    yv
                };
                w[x_val][y_val] += p;
            }
        }
        let (cap, _) = channel_capacity(&w, 1e-9)?;
        best = best.max(cap);
    }
    Ok(best)
}
