//! JSON system documents.
//!
//! ```json
//! {"kind": "sft", "order": 2, "alphabet": ["x"], "A": [[1]], "J": [[1]]}
//! {"kind": "sofic", "order": 2, "states": ["p"], "label_alphabet": ["0"],
//!  "edges": [{"from": "p", "to": "p", "label": "0"}], "tau": {"0": "0"}}
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::IntMatrix;
use crate::sft::{ReversalSft, SftError};
use crate::sofic::{Edge, LabeledPresentation, SoficError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemDocument {
    Sft(ReversalSft),
    Sofic(LabeledPresentation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violations(pub Vec<String>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  - {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violations:\n{0}")]
    Schema(Violations),
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error(transparent)]
    Sofic(#[from] SoficError),
}

impl DocumentError {
    pub fn violations(&self) -> Vec<String> {
        match self {
            DocumentError::Schema(v) => v.0.clone(),
            other => vec![other.to_string()],
        }
    }
}

struct Checker<'a> {
    root: &'a Map<String, Value>,
    errors: Vec<String>,
}

impl<'a> Checker<'a> {
    fn field(&mut self, key: &str) -> Option<&'a Value> {
        let v = self.root.get(key);
        if v.is_none() {
            self.errors.push(format!("missing field \"{key}\""));
        }
        v
    }

    fn names(&mut self, key: &str) -> Option<Vec<String>> {
        let v = self.field(key)?;
        let Some(items) = v.as_array() else {
            self.errors
                .push(format!("\"{key}\" must be an array of strings"));
            return None;
        };
        let mut out = Vec::new();
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match item.as_str() {
                Some(s) if out.iter().any(|o: &String| o == s) => {
                    self.errors.push(format!("\"{key}\"[{i}] duplicates {s:?}"));
                    ok = false;
                }
                Some(s) => out.push(s.to_string()),
                None => {
                    self.errors.push(format!("\"{key}\"[{i}] is not a string"));
                    ok = false;
                }
            }
        }
        ok.then_some(out)
    }

    fn matrix(&mut self, key: &str, n: Option<usize>) -> Option<Vec<Vec<u8>>> {
        let v = self.field(key)?;
        let Some(rows) = v.as_array() else {
            self.errors
                .push(format!("\"{key}\" must be an array of rows"));
            return None;
        };
        let mut out = Vec::new();
        let mut ok = true;
        if let Some(n) = n {
            if rows.len() != n {
                self.errors.push(format!(
                    "\"{key}\" has {} rows, alphabet has {n} symbols",
                    rows.len()
                ));
                ok = false;
            }
        }
        for (i, row) in rows.iter().enumerate() {
            let Some(cells) = row.as_array() else {
                self.errors.push(format!("\"{key}\"[{i}] is not an array"));
                ok = false;
                continue;
            };
            if let Some(n) = n {
                if cells.len() != n {
                    self.errors.push(format!(
                        "\"{key}\" row {i} has {} entries, alphabet has {n} symbols",
                        cells.len()
                    ));
                    ok = false;
                }
            }
            let mut r = Vec::new();
            for (j, c) in cells.iter().enumerate() {
                match c.as_u64() {
                    Some(x @ (0 | 1)) => r.push(x as u8),
                    _ => {
                        self.errors
                            .push(format!("\"{key}\"[{i}][{j}] = {c} is not 0 or 1"));
                        ok = false;
                    }
                }
            }
            out.push(r);
        }
        ok.then_some(out)
    }
}

/// Parses and validates a document, reporting every schema violation found.
pub fn parse_system(text: &str) -> Result<SystemDocument, DocumentError> {
    let value: Value = serde_json::from_str(text)?;
    let Some(root) = value.as_object() else {
        return Err(DocumentError::Schema(Violations(vec![
            "document must be a JSON object".into(),
        ])));
    };
    let mut c = Checker {
        root,
        errors: Vec::new(),
    };
    let order = c.field("order").and_then(|v| match v.as_u64() {
        Some(o) if o >= 2 && o % 2 == 0 => Some(o as usize / 2),
        _ => {
            c.errors
                .push(format!("\"order\" must be an even integer >= 2, got {v}"));
            None
        }
    });
    let kind = c
        .field("kind")
        .map(|v| v.as_str().unwrap_or("").to_string());
    let doc = match kind.as_deref() {
        Some("sft") => parse_sft(&mut c, order),
        Some("sofic") => parse_sofic(&mut c, order),
        Some(other) => {
            c.errors.push(format!(
                "\"kind\" must be \"sft\" or \"sofic\", got {other:?}"
            ));
            None
        }
        None => None,
    };
    if !c.errors.is_empty() {
        return Err(DocumentError::Schema(Violations(c.errors)));
    }
    doc.expect("no violations means every part parsed")
}

fn parse_sft(c: &mut Checker, r: Option<usize>) -> Option<Result<SystemDocument, DocumentError>> {
    let alphabet = c.names("alphabet");
    let n = alphabet.as_ref().map(Vec::len);
    let a = c.matrix("A", n);
    let j = c.matrix("J", n);
    let (alphabet, a, j, r) = (alphabet?, a?, j?, r?);
    let build = || -> Result<SystemDocument, DocumentError> {
        if alphabet.is_empty() {
            return Ok(SystemDocument::Sft(ReversalSft::empty(r)));
        }
        let a = IntMatrix::from_rows(&a).map_err(SftError::from)?;
        let j = IntMatrix::from_rows(&j).map_err(SftError::from)?;
        Ok(SystemDocument::Sft(ReversalSft::validate(
            alphabet, a, j, r,
        )?))
    };
    Some(build())
}

fn parse_sofic(c: &mut Checker, r: Option<usize>) -> Option<Result<SystemDocument, DocumentError>> {
    let states = c.names("states");
    let labels = c.names("label_alphabet");
    let state_ix: Option<HashMap<&str, usize>> = states
        .as_ref()
        .map(|s| s.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect());
    let label_ix: Option<HashMap<&str, usize>> = labels
        .as_ref()
        .map(|s| s.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect());

    let mut edges = Vec::new();
    let mut edges_ok = true;
    match c.field("edges").map(|v| v.as_array()) {
        Some(Some(items)) => {
            for (i, item) in items.iter().enumerate() {
                let mut get = |key: &str, table: &Option<HashMap<&str, usize>>| -> Option<usize> {
                    let name = item.get(key).and_then(Value::as_str);
                    match (name, table) {
                        (None, _) => {
                            c.errors
                                .push(format!("edges[{i}].{key} is missing or not a string"));
                            None
                        }
                        (Some(s), Some(t)) => {
                            let found = t.get(s).copied();
                            if found.is_none() {
                                c.errors
                                    .push(format!("edges[{i}].{key} = {s:?} is not declared"));
                            }
                            found
                        }
                        (Some(_), None) => None,
                    }
                };
                let from = get("from", &state_ix);
                let to = get("to", &state_ix);
                let label = get("label", &label_ix);
                match (from, to, label) {
                    (Some(from), Some(to), Some(label)) => edges.push(Edge { from, to, label }),
                    _ => edges_ok = false,
                }
            }
        }
        Some(None) => {
            c.errors
                .push("\"edges\" must be an array of {from, to, label} objects".into());
            edges_ok = false;
        }
        None => edges_ok = false,
    }

    let mut tau = None;
    if let Some(v) = c.field("tau") {
        match (v.as_object(), &label_ix) {
            (None, _) => c
                .errors
                .push("\"tau\" must be an object mapping labels to labels".into()),
            (Some(map), Some(ix)) => {
                let mut images = vec![None; ix.len()];
                let mut ok = true;
                for (k, v) in map {
                    let src = ix.get(k.as_str());
                    let dst = v.as_str().and_then(|s| ix.get(s));
                    match (src, dst) {
                        (Some(&s), Some(&d)) => images[s] = Some(d),
                        (None, _) => {
                            c.errors
                                .push(format!("tau key {k:?} is not a declared label"));
                            ok = false;
                        }
                        (_, None) => {
                            c.errors
                                .push(format!("tau[{k:?}] = {v} is not a declared label"));
                            ok = false;
                        }
                    }
                }
                let names = labels.as_ref().expect("index built from labels");
                for (i, img) in images.iter().enumerate() {
                    if img.is_none() {
                        c.errors
                            .push(format!("tau has no image for label {:?}", names[i]));
                        ok = false;
                    }
                }
                let images: Vec<usize> = images.into_iter().flatten().collect();
                let mut seen = vec![false; ix.len()];
                for &d in &images {
                    if std::mem::replace(&mut seen[d], true) {
                        c.errors.push(format!(
                            "tau is not a bijection: {:?} is hit twice",
                            names[d]
                        ));
                        ok = false;
                    }
                }
                if ok {
                    tau = Some(images);
                }
            }
            (Some(_), None) => {}
        }
    }
    let (states, labels, tau, r) = (states?, labels?, tau?, r?);
    if !edges_ok {
        return None;
    }
    Some(
        LabeledPresentation::new(states, labels, edges, tau, r)
            .map(SystemDocument::Sofic)
            .map_err(Into::into),
    )
}

/// The JSON form accepted by [`parse_system`].
pub fn emit_system(doc: &SystemDocument) -> Value {
    match doc {
        SystemDocument::Sft(sys) => {
            let rows = |m: &IntMatrix| -> Vec<Vec<u8>> {
                m.to_rows()
                    .iter()
                    .map(|row| row.iter().map(|x| u8::from(*x == 1.into())).collect())
                    .collect()
            };
            json!({
                "kind": "sft",
                "order": sys.order(),
                "alphabet": sys.alphabet(),
                "A": rows(sys.a()),
                "J": rows(sys.j()),
            })
        }
        SystemDocument::Sofic(p) => {
            let edges: Vec<Value> = p
                .edges()
                .iter()
                .map(|e| {
                    json!({
                        "from": p.states()[e.from],
                        "to": p.states()[e.to],
                        "label": p.labels()[e.label],
                    })
                })
                .collect();
            let tau: BTreeMap<&str, &str> = p
                .tau()
                .iter()
                .enumerate()
                .map(|(i, &t)| (p.labels()[i].as_str(), p.labels()[t].as_str()))
                .collect();
            json!({
                "kind": "sofic",
                "order": p.order(),
                "states": p.states(),
                "label_alphabet": p.labels(),
                "edges": edges,
                "tau": tau,
            })
        }
    }
}

pub fn emit_system_string(doc: &SystemDocument) -> String {
    serde_json::to_string_pretty(&emit_system(doc)).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn minimal_sft() {
        let doc = parse_system(r#"{"kind":"sft","order":2,"alphabet":["x"],"A":[[1]],"J":[[1]]}"#)
            .unwrap();
        let SystemDocument::Sft(sys) = doc else {
            panic!()
        };
        assert_eq!(sys.len(), 1);
        assert_eq!(sys.r(), 1);
    }

    #[test]
    fn reports_every_violation() {
        let text = r#"{"kind":"sft","order":3,"alphabet":["x","y"],"A":[[1,1,0],[1,0,1]],"J":[[1,0],[0,2]]}"#;
        let err = parse_system(text).unwrap_err();
        let v = err.violations();
        assert!(v.iter().any(|s| s.contains("order")), "{v:?}");
        assert!(
            v.iter().any(|s| s.contains("\"A\" row 0 has 3 entries")),
            "{v:?}"
        );
        assert!(v.iter().any(|s| s.contains("\"J\"[1][1]")), "{v:?}");
        assert!(v.len() >= 4);
    }

    #[test]
    fn sofic_violations() {
        let text = r#"{"kind":"sofic","order":2,"states":["p"],"label_alphabet":["0","1"],
            "edges":[{"from":"p","to":"q","label":"0"}],"tau":{"0":"1","1":"1"}}"#;
        let v = parse_system(text).unwrap_err().violations();
        assert!(
            v.iter().any(|s| s.contains("\"q\" is not declared")),
            "{v:?}"
        );
        assert!(v.iter().any(|s| s.contains("bijection")), "{v:?}");
    }

    #[test]
    fn malformed_json_and_unknown_kind() {
        assert!(matches!(parse_system("{"), Err(DocumentError::Json(_))));
        assert!(matches!(
            parse_system(r#"{"kind":"x","order":2}"#),
            Err(DocumentError::Schema(_))
        ));
    }

    #[test]
    fn identities_are_checked() {
        let text =
            r#"{"kind":"sft","order":2,"alphabet":["x","y"],"A":[[1,1],[0,1]],"J":[[1,0],[0,1]]}"#;
        assert!(matches!(
            parse_system(text),
            Err(DocumentError::Sft(SftError::ReversalLaw { .. }))
        ));
    }

    #[test]
    fn round_trips() {
        let mut docs = vec![
            SystemDocument::Sft(fixtures::paper_example_6()),
            SystemDocument::Sft(fixtures::golden_mean()),
            SystemDocument::Sft(crate::sft::ReversalSft::empty(2)),
        ];
        docs.extend(
            fixtures::sofic_fixtures()
                .into_iter()
                .map(|f| SystemDocument::Sofic(f.presentation)),
        );
        for doc in docs {
            assert_eq!(parse_system(&emit_system_string(&doc)).unwrap(), doc);
        }
    }
}
