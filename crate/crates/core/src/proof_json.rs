//! The JSON proof format, shared by resource and plain proofs.
//!
//! ```json
//! {"logic": "mll", "endsequent": "p |- p", "assignment": {"x1": 1},
//!  "tree": {"sequent": "p[x1] |- p[x2]", "rule": "Axiom", "principal": "ante:0,succ:0",
//!           "constraints": ["x1 = 1", "x2 = 1"], "children": []}}
//! ```
//!
//! Plain proofs leave out `assignment` and `constraints`; their
//! `principal` names the principal formula (`succ:p * q`) for readers and
//! is ignored when parsing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::boolexpr::{Assignment, Constraint, Var};
use crate::calculus::{Principal, RuleId, RuleInstance};
use crate::error::{Error, Result};
use crate::extract::{PlainNode, PlainProof};
use crate::formula::{Formula, Logic};
use crate::parse::{parse_resource_sequent, parse_sequent};
use crate::search::{ResourceProof, ResourceTree};
use crate::sequent::PlainSequent;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofDoc {
    pub logic: Logic,
    pub endsequent: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<BTreeMap<String, u8>>,
    pub tree: NodeDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub sequent: String,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraints: Option<Vec<String>>,
    /// Fresh variables introduced by the rule, in allocation order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fresh: Vec<String>,
    #[serde(default)]
    pub children: Vec<NodeDoc>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn assignment_map(a: &Assignment) -> BTreeMap<String, u8> {
    a.iter().map(|(v, b)| (v.to_string(), b as u8)).collect()
}

fn parse_var(s: &str) -> Result<Var> {
    s.strip_prefix('x')
        .and_then(|d| d.parse().ok())
        .map(Var)
        .ok_or_else(|| bad(format!("bad variable '{s}'")))
}

impl ProofDoc {
    /// A plain proof, optionally with the assignment it was extracted under.
    pub fn from_plain(p: &PlainProof, assignment: Option<&Assignment>) -> ProofDoc {
        ProofDoc {
            logic: p.logic,
            endsequent: p.endsequent().to_string(),
            assignment: assignment.map(assignment_map),
            tree: plain_node(&p.root),
        }
    }

    pub fn from_resource(p: &ResourceProof) -> ProofDoc {
        ProofDoc {
            logic: p.logic,
            endsequent: p.goal.to_string(),
            assignment: Some(assignment_map(&p.assignment)),
            tree: resource_node(&p.tree),
        }
    }

    pub fn parse(text: &str) -> Result<ProofDoc> {
        serde_json::from_str(text).map_err(|e| bad(format!("JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proof documents always serialize")
    }

    /// True when the tree carries constraints, i.e. it is a resource proof.
    pub fn is_resource(&self) -> bool {
        self.tree.constraints.is_some()
    }

    /// Reads the tree as a plain proof in `logic`. Annotations, if any,
    /// are not allowed.
    pub fn to_plain(&self, logic: Logic) -> Result<PlainProof> {
        if self.is_resource() {
            return Err(bad("expected a plain proof, found constraints"));
        }
        let root = read_plain(&self.tree, logic)?;
        let end = parse_sequent(&self.endsequent, logic)?;
        if end != root.sequent {
            return Err(bad("endsequent differs from the root sequent"));
        }
        Ok(PlainProof { logic, root })
    }

    pub fn to_resource(&self) -> Result<ResourceProof> {
        let logic = self.logic;
        let tree = read_resource(&self.tree, logic)?;
        let goal = parse_sequent(&self.endsequent, logic)?;
        let mut assignment = Assignment::new();
        for (k, v) in self.assignment.iter().flatten() {
            let bit = match v {
                0 => false,
                1 => true,
                _ => return Err(bad(format!("bit for {k} must be 0 or 1"))),
            };
            assignment.set(parse_var(k)?, bit);
        }
        let endsequent_vars = tree.sequent.vars();
        Ok(ResourceProof {
            logic,
            goal,
            tree,
            endsequent_vars,
            assignment,
        })
    }
}

fn plain_node(n: &PlainNode) -> NodeDoc {
    NodeDoc {
        sequent: n.sequent.to_string(),
        rule: n.rule.name().to_string(),
        principal: plain_principal(n),
        constraints: None,
        fresh: Vec::new(),
        children: n.children.iter().map(plain_node).collect(),
    }
}

fn resource_node(t: &ResourceTree) -> NodeDoc {
    NodeDoc {
        sequent: t.sequent.to_string(),
        rule: t.rule.rule.name().to_string(),
        principal: Some(t.rule.principal.to_string()),
        constraints: Some(t.emitted.iter().map(Constraint::to_string).collect()),
        fresh: t.fresh.iter().map(Var::to_string).collect(),
        children: t.children.iter().map(resource_node).collect(),
    }
}

fn rule(name: &str) -> Result<RuleId> {
    name.parse().map_err(|_| bad(format!("unknown rule '{name}'")))
}

fn read_plain(n: &NodeDoc, logic: Logic) -> Result<PlainNode> {
    Ok(PlainNode {
        sequent: parse_sequent(&n.sequent, logic)?,
        rule: rule(&n.rule)?,
        children: n.children.iter().map(|c| read_plain(c, logic)).collect::<Result<_>>()?,
    })
}

fn read_resource(n: &NodeDoc, logic: Logic) -> Result<ResourceTree> {
    let principal: Principal = n
        .principal
        .as_deref()
        .ok_or_else(|| bad("resource node without principal"))?
        .parse()
        .map_err(|_| bad(format!("bad principal in {}", n.sequent)))?;
    let emitted = n
        .constraints
        .iter()
        .flatten()
        .map(|c| c.parse::<Constraint>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ResourceTree {
        sequent: parse_resource_sequent(&n.sequent, logic)?,
        rule: RuleInstance::new(rule(&n.rule)?, principal),
        emitted,
        fresh: n.fresh.iter().map(|v| parse_var(v)).collect::<Result<_>>()?,
        children: n.children.iter().map(|c| read_resource(c, logic)).collect::<Result<_>>()?,
    })
}

fn sides(s: &PlainSequent) -> (Vec<Formula>, Vec<Formula>) {
    match s {
        PlainSequent::Ll { ante, succ } => (ante.clone(), succ.clone()),
        PlainSequent::Bi { ante, succ } => (ante.leaves().into_iter().map(|(_, f)| f.clone()).collect(), vec![succ.clone()]),
    }
}

// formulas of `whole` left after removing one copy of each in `part`
fn leftover(whole: &[Formula], part: &[Formula]) -> Vec<Formula> {
    let mut rest = whole.to_vec();
    for f in part {
        if let Some(i) = rest.iter().position(|g| g == f) {
            rest.remove(i);
        }
    }
    rest
}

/// The formula a plain rule acts on, found by comparing the conclusion
/// with its premises.
fn plain_principal(n: &PlainNode) -> Option<String> {
    let (ante, succ) = sides(&n.sequent);
    if n.children.is_empty() {
        return match n.rule {
            RuleId::BotL | RuleId::ZeroL | RuleId::FalseL => {
                let c = if n.rule == RuleId::ZeroL { "0" } else { "bot" };
                ante.iter().find(|f| f.to_string() == c).map(|f| format!("ante:{f}"))
            }
            _ => succ.first().map(|f| format!("succ:{f}")),
        };
    }
    let (mut pa, mut ps) = (Vec::new(), Vec::new());
    for c in &n.children {
        let (a, s) = sides(&c.sequent);
        pa.extend(a);
        ps.extend(s);
    }
    if let Some(f) = leftover(&ante, &pa).first() {
        return Some(format!("ante:{f}"));
    }
    leftover(&succ, &ps).first().map(|f| format!("succ:{f}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::extract;
    use crate::search::{prove_with, Strategy};
    use crate::verify::{check_proof, recheck_resource_proof};

    fn proved(s: &str, logic: Logic) -> ResourceProof {
        let seq = parse_sequent(s, logic).unwrap();
        prove_with(&seq, logic, Strategy::Lazy).unwrap().outcome.proof().unwrap().clone()
    }

    #[test]
    fn plain_round_trip() {
        for (s, logic) in [
            ("p,p,q,q |- (p*q)*(p*q)", Logic::Mll),
            ("p,q,q |- (p*q)+(p*q*q)", Logic::Pll),
            ("(r,(p;t),p -* q); s |- q * r", Logic::Bi),
        ] {
            let rp = proved(s, logic);
            let plain = extract(&rp).unwrap();
            let doc = ProofDoc::from_plain(&plain, Some(&rp.assignment));
            let back = ProofDoc::parse(&doc.to_json()).unwrap();
            assert_eq!(back, doc);
            let again = back.to_plain(logic).unwrap();
            assert_eq!(again, plain, "{s}");
            assert!(check_proof(&again, logic));
        }
    }

    #[test]
    fn resource_round_trip() {
        for (s, logic) in [("p,p,q,q |- (p*q)*(p*q)", Logic::Mll), ("r,(s;t) |- r*s", Logic::Bi)] {
            let rp = proved(s, logic);
            let doc = ProofDoc::from_resource(&rp);
            assert!(doc.is_resource());
            let back = ProofDoc::parse(&doc.to_json()).unwrap().to_resource().unwrap();
            assert_eq!(back.tree, rp.tree);
            assert_eq!(back.assignment, rp.assignment);
            recheck_resource_proof(&back).unwrap();
        }
    }

    #[test]
    fn principal_of_tensor() {
        let rp = proved("p, q |- p * q", Logic::Mll);
        let doc = ProofDoc::from_plain(&extract(&rp).unwrap(), None);
        assert_eq!(doc.tree.principal.as_deref(), Some("succ:p * q"));
        assert!(doc.assignment.is_none() && doc.tree.constraints.is_none());
    }

    #[test]
    fn truncated_input_is_malformed() {
        assert!(matches!(ProofDoc::parse("{\"logic\": \"mll\", \"tree\""), Err(Error::Malformed(_))));
    }
}
