//! Single-relay achievable rates: decode-and-forward, estimate-and-forward
//! with a supplied quantizer, the time-sharing closed form, the
//! general-quantizer time-sharing rate, the joint-decoding rate, and the
//! time-sharing ratio that bridges the latter two.

use crate::error::{Error, Result};
use crate::prob::{JointPmf, INDEP_TOL};

/// Variable names expected on a single-relay joint.
pub const X: &str = "X";
pub const X1: &str = "X1";
pub const Y: &str = "Y";
pub const Y1: &str = "Y1";
/// Name of the quantized relay observation, when present.
pub const YH1: &str = "Yh1";

/// Feasibility tolerance on constraint slack, absolute.
pub const SLACK_TOL: f64 = 1e-9;

/// A rate together with the slack of its feasibility constraint
/// (constraint LHS − RHS; nonnegative means satisfiable).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibleRate {
    pub rate: f64,
    pub slack: f64,
    pub feasible: bool,
}

impl FeasibleRate {
    pub fn new(rate: f64, slack: f64) -> Self {
        FeasibleRate { rate, slack, feasible: slack >= -SLACK_TOL }
    }
}

/// Joint distribution over {X, X1, Y, Y1}, optionally extended with the
/// quantized relay observation Yh1.
#[derive(Debug, Clone)]
pub struct SingleRelayInstance {
    joint: JointPmf,
    has_quantizer: bool,
}

impl SingleRelayInstance {
    pub fn new(joint: JointPmf) -> Result<Self> {
        for v in [X, X1, Y, Y1] {
            joint.axis_of(v)?;
        }
        let has_quantizer = joint.axis_of(YH1).is_ok();
        Ok(SingleRelayInstance { joint, has_quantizer })
    }

    pub fn joint(&self) -> &JointPmf {
        &self.joint
    }

    pub fn has_quantizer(&self) -> bool {
        self.has_quantizer
    }

    /// Attaches a time-sharing quantizer with parameter `q`.
    pub fn with_ts_quantizer(&self, q: f64) -> Result<Self> {
        SingleRelayInstance::new(self.joint.apply_ts_mapping(Y1, q, YH1)?)
    }

    fn require_quantizer(&self) -> Result<()> {
        if !self.has_quantizer {
            return Err(Error::Precondition(format!("instance has no `{YH1}` variable")));
        }
        Ok(())
    }

    /// EAF-family preconditions: independent codebooks and a quantizer that
    /// depends on (X1, Y1) only.
    fn check_eaf_chain(&self) -> Result<()> {
        self.require_quantizer()?;
        self.check_input_independence()?;
        let mi = self.joint.mutual_information(&[YH1], &[X, Y], &[X1, Y1])?;
        if mi >= INDEP_TOL {
            return Err(Error::Precondition(format!(
                "quantizer is not conditionally independent of (X,Y) given (X1,Y1): leakage {mi:.3e}"
            )));
        }
        Ok(())
    }

    fn check_input_independence(&self) -> Result<()> {
        let mi = self.joint.mutual_information(&[X], &[X1], &[])?;
        if mi >= INDEP_TOL {
            return Err(Error::Precondition(format!(
                "X and X1 are dependent: I(X;X1) = {mi:.3e}"
            )));
        }
        Ok(())
    }
}

/// Decode-and-forward: min{I(X,X1;Y), I(X;Y1|X1)}. Accepts arbitrary
/// correlation between X and X1.
pub fn daf_rate(inst: &SingleRelayInstance) -> Result<f64> {
    let j = inst.joint();
    let a = j.mutual_information(&[X, X1], &[Y], &[])?;
    let b = j.mutual_information(&[X], &[Y1], &[X1])?;
    Ok(a.min(b))
}

/// Estimate-and-forward with the instance's quantizer:
/// rate I(X;Y,Yh1|X1) subject to I(X1;Y) ≥ I(Y1;Yh1|X1,Y).
pub fn eaf_rate(inst: &SingleRelayInstance) -> Result<FeasibleRate> {
    inst.check_eaf_chain()?;
    let j = inst.joint();
    let rate = j.mutual_information(&[X], &[Y, YH1], &[X1])?;
    let slack =
        j.mutual_information(&[X1], &[Y], &[])? - j.mutual_information(&[Y1], &[YH1], &[X1, Y])?;
    Ok(FeasibleRate::new(rate, slack))
}

/// `min(x, 1)`, with the 0/0 case resolving to 1: zero compression cost
/// means full forwarding is free.
fn clamp_ratio(num: f64, den: f64) -> f64 {
    if den <= 0.0 {
        1.0
    } else {
        (num / den).min(1.0)
    }
}

/// Time-sharing EAF closed form:
/// q = [I(X1;Y)/H(Y1|X1,Y)]*, rate = I(X;Y|X1) + q·I(X;Y1|X1,Y).
pub fn ts_eaf_rate(inst: &SingleRelayInstance) -> Result<(f64, f64)> {
    inst.check_input_independence()?;
    let j = inst.joint();
    let q = clamp_ratio(
        j.mutual_information(&[X1], &[Y], &[])?,
        j.entropy(&[Y1], &[X1, Y])?,
    );
    let rate = j.mutual_information(&[X], &[Y], &[X1])?
        + q * j.mutual_information(&[X], &[Y1], &[X1, Y])?;
    Ok((rate, q))
}

/// Result of the two-stage time-sharing rate: the rate, the time-sharing
/// ratio applied on top of the supplied quantizer, and whether the quantizer
/// carries no source information (the ratio is then immaterial).
#[derive(Debug, Clone, Copy)]
pub struct TsQuantizedRate {
    pub rate: f64,
    pub q: f64,
    pub degenerate: bool,
}

/// Time-sharing applied on top of an arbitrary quantizer Yh1:
/// q = [I(X1;Y)/I(Y1;Yh1|X1,Y)]*, rate = I(X;Y|X1) + q·I(X;Yh1|X1,Y).
pub fn taf_rate(inst: &SingleRelayInstance) -> Result<TsQuantizedRate> {
    inst.check_eaf_chain()?;
    let j = inst.joint();
    let q = clamp_ratio(
        j.mutual_information(&[X1], &[Y], &[])?,
        j.mutual_information(&[Y1], &[YH1], &[X1, Y])?,
    );
    let relay_gain = j.mutual_information(&[X], &[YH1], &[X1, Y])?;
    let rate = j.mutual_information(&[X], &[Y], &[X1])? + q * relay_gain;
    Ok(TsQuantizedRate { rate, q, degenerate: relay_gain < 1e-12 })
}

/// Joint decoding of the quantization index and the source message:
/// rate I(X;Y|X1) + min{I(X1;Y) − I(Yh1;Y1|X,X1,Y), I(X;Yh1|X1,Y)},
/// feasible when I(X1;Y) ≥ I(Yh1;Y1|X,X1,Y).
pub fn joint_decode_rate(inst: &SingleRelayInstance) -> Result<FeasibleRate> {
    inst.check_eaf_chain()?;
    let j = inst.joint();
    let direct = j.mutual_information(&[X], &[Y], &[X1])?;
    let relay_capacity = j.mutual_information(&[X1], &[Y], &[])?;
    let residual_cost = j.mutual_information(&[YH1], &[Y1], &[X, X1, Y])?;
    let relay_info = j.mutual_information(&[X], &[YH1], &[X1, Y])?;
    let slack = relay_capacity - residual_cost;
    Ok(FeasibleRate::new(direct + slack.min(relay_info), slack))
}

/// Largest time-sharing ratio keeping the supplied quantizer feasible:
/// min{1, I(X1;Y)/I(Yh1;Y1|X1,Y)} (1 on zero denominator).
pub fn q_opt(inst: &SingleRelayInstance) -> Result<f64> {
    inst.check_eaf_chain()?;
    let j = inst.joint();
    Ok(clamp_ratio(
        j.mutual_information(&[X1], &[Y], &[])?,
        j.mutual_information(&[Y1], &[YH1], &[X1, Y])?,
    ))
}
