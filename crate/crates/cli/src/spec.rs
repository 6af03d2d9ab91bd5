//! JSON input schema: {"group": {...}, "rep": {...}}. Unknown fields are
//! rejected and every validation error names the offending field.

use largeness::oracle::OracleFamily;
use largeness::repspec::{Family, RepSpec};
use largeness::torus::WeightMatrix;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    group: RawGroup,
    rep: RawRep,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    #[serde(rename = "type")]
    kind: String,
    rank: Option<usize>,
    family: Option<String>,
    n: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRep {
    weights: Option<Vec<Vec<i64>>>,
    binary_forms: Option<Vec<usize>>,
    p: Option<usize>,
    q: Option<usize>,
}

/// Normalized echo of the input, reprinted verbatim in every report.
#[derive(Clone, Debug, Serialize)]
pub struct SpecEcho {
    pub group: GroupEcho,
    pub rep: RepEcho,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupEcho {
    Torus { rank: usize },
    Sl2,
    Classical { family: String, n: usize },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RepEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binary_forms: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
}

/// What the spec asks us to construct. The exceptional families carry a
/// verdict table but no matrix model, so only `analyze` accepts them.
#[derive(Clone, Debug)]
pub enum BuildTarget {
    Matrix(RepSpec),
    TableOnly {
        family: OracleFamily,
        n: usize,
        p: usize,
        q: usize,
    },
}

#[derive(Clone, Debug)]
pub struct ParsedSpec {
    pub echo: SpecEcho,
    pub target: BuildTarget,
}

fn require<T: Clone>(field: &Option<T>, path: &str, group: &str) -> Result<T, String> {
    field
        .clone()
        .ok_or_else(|| format!("{path}: required for a {group} group"))
}

fn forbid<T>(field: &Option<T>, path: &str, group: &str) -> Result<(), String> {
    if field.is_some() {
        Err(format!("{path}: not allowed for a {group} group"))
    } else {
        Ok(())
    }
}

pub fn parse_spec(text: &str) -> Result<ParsedSpec, String> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| format!("spec: {e}"))?;
    match raw.group.kind.as_str() {
        "torus" => {
            let rank = require(&raw.group.rank, "group.rank", "torus")?;
            forbid(&raw.group.family, "group.family", "torus")?;
            forbid(&raw.group.n, "group.n", "torus")?;
            forbid(&raw.rep.binary_forms, "rep.binary_forms", "torus")?;
            forbid(&raw.rep.p, "rep.p", "torus")?;
            forbid(&raw.rep.q, "rep.q", "torus")?;
            let rows = require(&raw.rep.weights, "rep.weights", "torus")?;
            if rows.len() != rank {
                return Err(format!(
                    "rep.weights: expected {rank} rows (one per torus factor), found {}",
                    rows.len()
                ));
            }
            let weights =
                WeightMatrix::new(rows.clone()).map_err(|e| format!("rep.weights: {e}"))?;
            Ok(ParsedSpec {
                echo: SpecEcho {
                    group: GroupEcho::Torus { rank },
                    rep: RepEcho {
                        weights: Some(rows),
                        ..RepEcho::default()
                    },
                },
                target: BuildTarget::Matrix(RepSpec::Torus { weights }),
            })
        }
        "sl2" => {
            forbid(&raw.group.rank, "group.rank", "sl2")?;
            forbid(&raw.group.family, "group.family", "sl2")?;
            forbid(&raw.group.n, "group.n", "sl2")?;
            forbid(&raw.rep.weights, "rep.weights", "sl2")?;
            forbid(&raw.rep.p, "rep.p", "sl2")?;
            forbid(&raw.rep.q, "rep.q", "sl2")?;
            let degrees = require(&raw.rep.binary_forms, "rep.binary_forms", "sl2")?;
            if degrees.is_empty() {
                return Err("rep.binary_forms: need at least one degree".into());
            }
            Ok(ParsedSpec {
                echo: SpecEcho {
                    group: GroupEcho::Sl2,
                    rep: RepEcho {
                        binary_forms: Some(degrees.clone()),
                        ..RepEcho::default()
                    },
                },
                target: BuildTarget::Matrix(RepSpec::Sl2 { degrees }),
            })
        }
        "classical" => {
            forbid(&raw.group.rank, "group.rank", "classical")?;
            forbid(&raw.rep.weights, "rep.weights", "classical")?;
            forbid(&raw.rep.binary_forms, "rep.binary_forms", "classical")?;
            let family = require(&raw.group.family, "group.family", "classical")?;
            let n = require(&raw.group.n, "group.n", "classical")?;
            let p = require(&raw.rep.p, "rep.p", "classical")?;
            let q = raw.rep.q.unwrap_or(0);
            let target = match family.as_str() {
                "gl" => BuildTarget::Matrix(RepSpec::Classical { family: Family::Gl, n, p, q }),
                "sl" => BuildTarget::Matrix(RepSpec::Classical { family: Family::Sl, n, p, q }),
                "so" => BuildTarget::Matrix(RepSpec::Classical { family: Family::So, n, p, q }),
                "sp" => BuildTarget::Matrix(RepSpec::Classical { family: Family::Sp, n, p, q }),
                "g2" => BuildTarget::TableOnly { family: OracleFamily::G2, n, p, q },
                "spin7" => BuildTarget::TableOnly { family: OracleFamily::Spin7, n, p, q },
                other => {
                    return Err(format!(
                        "group.family: unknown family `{other}` (expected gl, sl, so, sp, g2, spin7)"
                    ))
                }
            };
            Ok(ParsedSpec {
                echo: SpecEcho {
                    group: GroupEcho::Classical { family, n },
                    rep: RepEcho {
                        p: Some(p),
                        q: Some(q),
                        ..RepEcho::default()
                    },
                },
                target,
            })
        }
        other => Err(format!(
            "group.type: unknown type `{other}` (expected torus, sl2, classical)"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_three_documented_forms_parse() {
        let t = parse_spec(r#"{"group":{"type":"torus","rank":1},"rep":{"weights":[[1,-1]]}}"#)
            .unwrap();
        assert!(matches!(t.target, BuildTarget::Matrix(RepSpec::Torus { .. })));
        let s =
            parse_spec(r#"{"group":{"type":"sl2"},"rep":{"binary_forms":[1,1]}}"#).unwrap();
        assert!(matches!(s.target, BuildTarget::Matrix(RepSpec::Sl2 { .. })));
        let c = parse_spec(
            r#"{"group":{"type":"classical","family":"sp","n":1},"rep":{"p":3,"q":0}}"#,
        )
        .unwrap();
        match c.target {
            BuildTarget::Matrix(RepSpec::Classical { family, n, p, q }) => {
                assert_eq!(family, Family::Sp);
                assert_eq!((n, p, q), (1, 3, 0));
            }
            _ => panic!("wrong target"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected_with_a_path() {
        let err = parse_spec(
            r#"{"group":{"type":"torus","rank":1,"weird":2},"rep":{"weights":[[1]]}}"#,
        )
        .unwrap_err();
        assert!(err.contains("weird"), "{err}");
        let err =
            parse_spec(r#"{"group":{"type":"sl2"},"rep":{"binary_forms":[1],"p":2}}"#).unwrap_err();
        assert!(err.contains("rep.p"), "{err}");
        let err = parse_spec(r#"{"group":{"type":"torus","rank":2},"rep":{"weights":[[1,1]]}}"#)
            .unwrap_err();
        assert!(err.contains("rep.weights") && err.contains("2 rows"), "{err}");
    }

    #[test]
    fn table_only_families_are_flagged() {
        let g = parse_spec(
            r#"{"group":{"type":"classical","family":"g2","n":7},"rep":{"p":4}}"#,
        )
        .unwrap();
        match g.target {
            BuildTarget::TableOnly { family, n, p, q } => {
                assert_eq!(family, OracleFamily::G2);
                assert_eq!((n, p, q), (7, 4, 0));
            }
            _ => panic!("wrong target"),
        }
    }
}
