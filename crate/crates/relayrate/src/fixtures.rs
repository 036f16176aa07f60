//! Bundled two-relay example data: the discrete channel and the recorded
//! optimal input distributions for the decode-and-forward and time-sharing
//! strategies. Entries reproduce the published 7-significant-digit values
//! bit-exactly; conditional rows are renormalized on ingestion.

use crate::multi_relay::MultiRelayInstance;
use crate::prob::{build_joint, ChannelSpec, JointPmf, Var};

pub const TABLE1_JSON: &str = include_str!("../fixtures/table1.json");
pub const TABLE2_JSON: &str = include_str!("../fixtures/table2.json");
pub const TABLE3_JSON: &str = include_str!("../fixtures/table3.json");

/// Named fixture lookup for the CLI (`table1.json` etc. resolve even when
/// the file is not on disk).
pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "table1.json" | "table1" => Some(TABLE1_JSON),
        "table2.json" | "table2" => Some(TABLE2_JSON),
        "table3.json" | "table3" => Some(TABLE3_JSON),
        _ => None,
    }
}

pub fn table1_channel() -> ChannelSpec {
    ChannelSpec::from_json(TABLE1_JSON).expect("bundled channel parses")
}

pub fn table2_distribution() -> JointPmf {
    JointPmf::from_json(TABLE2_JSON).expect("bundled distribution parses")
}

/// The recorded time-sharing marginals as (variable, pmf) pairs.
pub fn table3_marginals() -> Vec<(Var, Vec<f64>)> {
    let parsed: serde_json::Value =
        serde_json::from_str(TABLE3_JSON).expect("bundled marginals parse");
    parsed["marginals"]
        .as_array()
        .expect("marginals array")
        .iter()
        .map(|m| {
            let name = m["name"].as_str().expect("name").to_string();
            let probs: Vec<f64> = m["probs"]
                .as_array()
                .expect("probs")
                .iter()
                .map(|v| v.as_f64().expect("number"))
                .collect();
            (Var::new(name, probs.len()), probs)
        })
        .collect()
}

/// Two-relay instance: bundled channel with the recorded marginals.
pub fn table3_instance() -> MultiRelayInstance {
    let j = build_joint(&table3_marginals(), &table1_channel()).expect("fixture joint");
    MultiRelayInstance::new(j, 2).expect("fixture instance")
}
