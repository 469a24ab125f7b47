//! JSON rendering of classification reports. All numbers are exact and written as strings;
//! indices are 0-based.

use rankdrop::classify::{Condition, Report};
use rankdrop::invariants::Sextuple;
use rankdrop::linalg::{format_rat, QMatrix};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Schema of the emitted report.
pub const SCHEMA: &str = include_str!("../../../docs/schemas/report.schema.json");

/// Validation errors of a report document against [`SCHEMA`], empty when it conforms.
pub fn schema_errors(doc: &Value) -> Vec<String> {
    let schema: Value = serde_json::from_str(SCHEMA).expect("shipped schema is JSON");
    let validator = jsonschema::validator_for(&schema).expect("shipped schema compiles");
    validator
        .iter_errors(doc)
        .map(|e| format!("{}: {e}", e.instance_path()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub k: usize,
    pub rank: usize,
    pub deficient: bool,
    pub conditions: Vec<ConditionEntry>,
    pub unexplained: bool,
    pub contradicted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Invariants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionEntry {
    pub kind: String,
    pub implies_deficiency: bool,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Invariants {
    pub coble_x: Vec<String>,
    pub coble_y: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joubert: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timings {
    pub classify_us: u64,
}

pub fn sextuple(s: &Sextuple) -> Vec<String> {
    s.values().iter().map(|v| v.to_string()).collect()
}

pub fn matrix(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(format_rat).collect())
        .collect()
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn witness(c: &Condition) -> Value {
    match c {
        Condition::RepeatedPair { i, j } => json!({ "i": i, "j": j }),
        Condition::CoincidentTripleOppositeLine { coincident } => {
            json!({ "coincident_side": coincident.name() })
        }
        Condition::AllCoincident { side } => json!({ "side": side.name() }),
        Condition::BothSidesCollinearCrossRatio { residual } => {
            json!({ "residual": residual.to_string() })
        }
        Condition::K5LineAndBrackets {
            line_side,
            residuals,
        } => {
            json!({ "line_side": line_side.name(), "residuals": strings(residuals) })
        }
        Condition::K6Brackets { residuals } => json!({ "residuals": strings(residuals) }),
        Condition::K6LineJoubert { line_side, form } => {
            json!({ "line_side": line_side.name(), "form": form.to_string() })
        }
        Condition::K6InvariantProportional { coble_x, coble_y } => {
            json!({ "coble_x": sextuple(coble_x), "coble_y": sextuple(coble_y) })
        }
        Condition::HomographyRelated { homography } => {
            json!({ "homography": matrix(homography.matrix()) })
        }
        Condition::AsymmetricDoubleTriangle { order } => json!({ "order": order }),
        Condition::Inherited { subset, inner } => {
            json!({ "subset": subset, "inner": entry(inner) })
        }
    }
}

pub fn entry(c: &Condition) -> ConditionEntry {
    ConditionEntry {
        kind: c.kind().name().into(),
        implies_deficiency: c.implies_deficiency(),
        witness: witness(c),
    }
}

impl ReportFile {
    pub fn new(r: &Report, joubert: Option<&Sextuple>, timings: Option<Timings>) -> ReportFile {
        ReportFile {
            k: r.k,
            rank: r.rank,
            deficient: r.deficient,
            conditions: r.conditions.iter().map(entry).collect(),
            unexplained: r.unexplained,
            contradicted: r.contradicted,
            invariants: r.invariant_summary.as_ref().map(|(x, y)| Invariants {
                coble_x: sextuple(x),
                coble_y: sextuple(y),
                joubert: joubert.map(sextuple),
            }),
            timings,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "k = {}, rank = {}, {}\n",
            self.k,
            self.rank,
            if self.deficient {
                "rank deficient"
            } else {
                "full rank"
            }
        );
        for c in &self.conditions {
            out += &format!("  {} {}\n", c.kind, c.witness);
        }
        if self.unexplained {
            out += "  UNEXPLAINED: the rank drops but no condition accounts for it\n";
        }
        if self.contradicted {
            out += "  CONTRADICTED: a condition implies a rank drop that did not happen\n";
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rankdrop::classify::classify;
    use rankdrop::facesplit::Config;

    #[test]
    fn report_round_trips() {
        let c = Config::of(
            &[[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1], [50, 98, 113]],
            &[[0, 0, 1], [1, 0, 1], [3, 0, 1], [-4, 0, 1], [8, 0, 1]],
        );
        let f = ReportFile::new(&classify(&c), None, Some(Timings { classify_us: 12 }));
        let text = f.to_json();
        let back: ReportFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), text);
        assert_eq!(
            schema_errors(&serde_json::from_str(&text).unwrap()),
            Vec::<String>::new()
        );
        assert_eq!(f.conditions[0].kind, "K5LineAndBrackets");
        assert_eq!(
            f.conditions[0].witness["residuals"],
            json!(["0", "0", "0", "0", "0"])
        );
    }

    #[test]
    fn inherited_witness_nests() {
        let c = Config::of(
            &[[1, 2, 3], [1, 2, 3], [4, 0, 1]],
            &[[1, 0, 0], [1, 0, 0], [0, 5, 1]],
        );
        let f = ReportFile::new(&classify(&c), None, None);
        let w = &f.conditions[0].witness;
        assert_eq!(f.conditions[0].kind, "Inherited");
        assert_eq!(w["subset"], json!([0, 1]));
        assert_eq!(w["inner"]["kind"], json!("RepeatedPair"));
    }
}
