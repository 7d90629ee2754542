//! Protocol documents:
//!
//! ```text
//! {"domain": {"rows": [...], "cols": [...]}, "root": NODE}
//! NODE := {"speaker": "A"|"B", "rect": RECT,
//!          "branch": {"<input>": [[child, "p/q"], ...], ...},
//!          "children": [NODE, ...]}
//!       | {"leaf": "<value>"}
//!       | {"leaf": {"alice": {"<x>": "<value>"}, "bob": {"<y>": "<value>"}}}
//! ```
//!
//! A bare root node is also accepted when it carries a `rect`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{Internal, Leaf, Node, Party, ProtocolTree};
use crate::error::{Error, Result};
use crate::model::json as j;
use crate::model::{rational, SubRect};

fn node_to_json(node: &Node) -> Value {
    match node {
        Node::Leaf(Leaf::Announce(v)) => json!({ "leaf": v }),
        Node::Leaf(Leaf::Local { alice, bob }) => json!({
            "leaf": { "alice": index_map(alice), "bob": index_map(bob) }
        }),
        Node::Internal(n) => {
            let branch: Map<String, Value> = n
                .branch
                .iter()
                .map(|(i, pmf)| {
                    let entries: Vec<Value> = pmf
                        .iter()
                        .map(|(c, p)| json!([c, rational::format(p)]))
                        .collect();
                    (i.to_string(), Value::Array(entries))
                })
                .collect();
            json!({
                "speaker": n.speaker,
                "rect": n.rect,
                "branch": branch,
                "children": n.children.iter().map(node_to_json).collect::<Vec<_>>(),
            })
        }
    }
}

fn index_map(m: &BTreeMap<usize, String>) -> Map<String, Value> {
    m.iter()
        .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
        .collect()
}

fn parse_index(key: &str, path: &str) -> Result<usize> {
    key.parse().map_err(|_| Error::Schema {
        path: path.to_string(),
        message: format!("`{key}` is not an input index"),
    })
}

fn parse_index_map(value: &Value, path: &str) -> Result<BTreeMap<usize, String>> {
    j::object(value, path)?
        .iter()
        .map(|(k, v)| {
            let p = format!("{path}/{k}");
            let label = v.as_str().ok_or_else(|| Error::Schema {
                path: p.clone(),
                message: "expected a value label".into(),
            })?;
            Ok((parse_index(k, &p)?, label.to_string()))
        })
        .collect()
}

fn node_from_json(value: &Value, path: &str) -> Result<Node> {
    let obj = j::object(value, path)?;
    if let Some(leaf) = obj.get("leaf") {
        let lp = format!("{path}/leaf");
        return Ok(Node::Leaf(match leaf {
            Value::String(v) => Leaf::Announce(v.clone()),
            Value::Object(m) => Leaf::Local {
                alice: parse_index_map(j::field(m, "alice", &lp)?, &format!("{lp}/alice"))?,
                bob: parse_index_map(j::field(m, "bob", &lp)?, &format!("{lp}/bob"))?,
            },
            _ => {
                return Err(Error::Schema {
                    path: lp,
                    message: "expected a value label or local outputs".into(),
                })
            }
        }));
    }
    let speaker: Party =
        serde_json::from_value(j::field(obj, "speaker", path)?.clone()).map_err(|_| {
            Error::Schema {
                path: format!("{path}/speaker"),
                message: "expected \"A\" or \"B\"".into(),
            }
        })?;
    let rect = parse_rect(j::field(obj, "rect", path)?, &format!("{path}/rect"))?;
    let bp = format!("{path}/branch");
    let mut branch = BTreeMap::new();
    for (key, entries) in j::object(j::field(obj, "branch", path)?, &bp)? {
        let ep = format!("{bp}/{key}");
        let input = parse_index(key, &ep)?;
        let entries = entries.as_array().ok_or_else(|| Error::Schema {
            path: ep.clone(),
            message: "expected [[child, \"p/q\"], ...]".into(),
        })?;
        let mut pmf = Vec::with_capacity(entries.len());
        for (k, e) in entries.iter().enumerate() {
            let pp = format!("{ep}/{k}");
            let bad = || Error::Schema {
                path: pp.clone(),
                message: "expected [child, \"p/q\"]".into(),
            };
            let pair = e.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            let child = pair[0].as_u64().ok_or_else(bad)? as usize;
            let p = match &pair[1] {
                Value::String(s) => rational::parse(s, &pp)?,
                Value::Number(n) => rational::parse(&n.to_string(), &pp)?,
                _ => return Err(bad()),
            };
            pmf.push((child, p));
        }
        branch.insert(input, pmf);
    }
    let cp = format!("{path}/children");
    let children = j::field(obj, "children", path)?
        .as_array()
        .ok_or_else(|| Error::Schema {
            path: cp.clone(),
            message: "expected an array of nodes".into(),
        })?
        .iter()
        .enumerate()
        .map(|(i, c)| node_from_json(c, &format!("{cp}/{i}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Node::Internal(Internal {
        speaker,
        rect,
        branch,
        children,
    }))
}

fn parse_rect(value: &Value, path: &str) -> Result<SubRect> {
    serde_json::from_value(value.clone()).map_err(|e| Error::Schema {
        path: path.to_string(),
        message: e.to_string(),
    })
}

impl ProtocolTree {
    pub fn to_json(&self) -> Value {
        json!({ "domain": self.domain, "root": node_to_json(&self.root) })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = j::object(value, "")?;
        if let Some(domain) = obj.get("domain") {
            let domain = parse_rect(domain, "/domain")?;
            let root = node_from_json(j::field(obj, "root", "")?, "/root")?;
            return ProtocolTree::new(domain, root);
        }
        let root = node_from_json(value, "")?;
        let domain = match &root {
            Node::Internal(n) => n.rect.clone(),
            Node::Leaf(_) => {
                return Err(Error::MissingField {
                    path: "/".into(),
                    field: "domain".into(),
                })
            }
        };
        ProtocolTree::new(domain, root)
    }
}

/// Parses a protocol document.
pub fn parse_protocol(document: &str) -> Result<ProtocolTree> {
    ProtocolTree::from_json(&serde_json::from_str(document)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rational::ratio;

    #[test]
    fn randomized_tree_round_trips() {
        let rect = SubRect::full(2, 2);
        let bob_rect = SubRect::new(vec![0, 1], vec![0, 1]).unwrap();
        let local = Node::Leaf(Leaf::Local {
            alice: [(0, "p".to_string()), (1, "q".to_string())].into(),
            bob: [(0, "r".to_string())].into(),
        });
        let bob = Node::Internal(Internal {
            speaker: Party::Bob,
            rect: bob_rect,
            branch: [
                (0, vec![(0, ratio(1, 3)), (1, ratio(2, 3))]),
                (1, vec![(1, ratio(1, 1))]),
            ]
            .into(),
            children: vec![local, Node::announce("z")],
        });
        let root = Node::Internal(Internal {
            speaker: Party::Alice,
            rect: rect.clone(),
            branch: [(0, vec![(0, ratio(1, 1))]), (1, vec![(0, ratio(1, 1))])].into(),
            children: vec![bob],
        });
        let tree = ProtocolTree::new(rect, root).unwrap();
        let text = serde_json::to_string(&tree.to_json()).unwrap();
        assert!(text.contains("\"2/3\""));
        assert_eq!(parse_protocol(&text).unwrap(), tree);
    }

    #[test]
    fn bare_leaf_needs_domain() {
        assert!(parse_protocol(r#"{"leaf":"0"}"#).is_err());
        let t =
            parse_protocol(r#"{"domain":{"rows":[0],"cols":[0,1]},"root":{"leaf":"0"}}"#).unwrap();
        assert_eq!(t.depth(), 0);
    }
}
