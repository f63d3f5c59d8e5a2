//! Run reports: one JSON line (or human-readable line) per tested instance.

use crate::engine::{Verdict, VerdictKind};
use crate::residue::TestInstance;
use serde::{Deserialize, Serialize};

/// One instance's outcome, mirroring the JSON-lines schema:
/// {"p":int,"n":int,"A":str,"i":int,"digits":int,"verdict":...,"l":...,"f":int,
///  "ms":int,"baseline":...}
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunReport {
    pub p: u32,
    pub n: u32,
    #[serde(rename = "A")]
    pub a: String,
    pub i: u32,
    pub digits: usize,
    pub verdict: String,
    pub l: Option<u64>,
    pub f: u32,
    pub ms: u64,
    pub baseline: Option<String>,
}

pub fn verdict_str(kind: VerdictKind) -> &'static str {
    match kind {
        VerdictKind::Prime => "prime",
        VerdictKind::Composite => "composite",
        VerdictKind::Inapplicable => "inapplicable",
    }
}

impl RunReport {
    pub fn new(inst: &TestInstance, verdict: &Verdict, ms: u64, baseline: Option<bool>) -> Self {
        RunReport {
            p: inst.p,
            n: inst.n,
            a: inst.a.to_string(),
            i: inst.k,
            digits: inst.m.to_string().len(),
            verdict: verdict_str(verdict.kind).to_string(),
            l: verdict.certificate.as_ref().map(|c| c.l),
            f: inst.f,
            ms,
            baseline: baseline.map(|b| if b { "prime" } else { "composite" }.to_string()),
        }
    }

    /// True when a baseline verdict is present and contradicts the engine's.
    /// An inapplicable engine verdict never counts as disagreement.
    pub fn disagrees(&self) -> bool {
        match (&self.verdict[..], self.baseline.as_deref()) {
            ("prime", Some("composite")) | ("composite", Some("prime")) => true,
            _ => false,
        }
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    pub fn human_line(&self) -> String {
        let base = match &self.baseline {
            Some(b) => format!("  baseline={b}"),
            None => String::new(),
        };
        let l = match self.l {
            Some(l) => format!("  l={l}"),
            None => String::new(),
        };
        format!(
            "p={} n={} A={} i={}  ({} digits)  {}{}  f={}  {} ms{}",
            self.p, self.n, self.a, self.i, self.digits, self.verdict, l, self.f, self.ms, base
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{CertifyOptions, certify};
    use crate::residue::build_instance;
    use crate::sympoly::RecursionSet;
    use num_bigint::BigUint;

    #[test]
    fn json_roundtrip_and_schema() {
        let inst = build_instance(3, 1, BigUint::from(1u32), 1).unwrap();
        let polys = RecursionSet::compute(3);
        let v = certify(&inst, &polys, &CertifyOptions::default());
        let rep = RunReport::new(&inst, &v, 12, Some(true));
        let line = rep.json_line();
        let back: RunReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, rep);
        // schema fields present with the exact names
        let val: serde_json::Value = serde_json::from_str(&line).unwrap();
        for key in ["p", "n", "A", "i", "digits", "verdict", "l", "f", "ms", "baseline"] {
            assert!(val.get(key).is_some(), "missing {key}");
        }
        assert_eq!(val["A"], "1");
        assert_eq!(val["verdict"], "prime");
        assert_eq!(val["baseline"], "prime");
        assert!(!rep.disagrees());
    }

    #[test]
    fn disagreement_detection() {
        let mut rep = RunReport {
            p: 3,
            n: 1,
            a: "1".into(),
            i: 1,
            digits: 1,
            verdict: "prime".into(),
            l: Some(7),
            f: 2,
            ms: 0,
            baseline: Some("composite".into()),
        };
        assert!(rep.disagrees());
        rep.verdict = "inapplicable".into();
        assert!(!rep.disagrees());
        rep.baseline = None;
        assert!(!rep.disagrees());
    }
}
