//! JSON documents, validation diagnostics, DOT export and result payloads.

mod dot;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::{DerivationStep, DerivationTrace, Flavor, FusionGrammar, FusionPairSet};
use crate::hypergraph::{
    AlphabetIssueKind, Edge, EdgeId, EdgeLabel, Hypergraph, Label, LabelAlphabet, LabelKind,
    Multiplicity, VertexId,
};
use crate::membership::{Affine, BoundedFusionGrammar};

pub use dot::{hypergraph_to_dot, net_to_dot};
pub use report::{
    cfg_document, mem1_certificate_document, ne_certificate_document, CertificateBase,
    CertificateDocument, OriginDocument, ProductionDocument, XiOriginDocument,
};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub id: String,
    pub label: String,
    pub att: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphDocument {
    #[serde(default)]
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeDocument>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelDocument {
    pub name: String,
    pub arity: usize,
    pub kind: LabelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetDocument {
    pub labels: Vec<LabelDocument>,
}

/// Affine bounds `[c0, c1]` meaning `z ↦ c0 + c1·z`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsDocument {
    #[serde(rename = "fM")]
    pub f_m: [u64; 2],
    #[serde(rename = "fK")]
    pub f_k: [u64; 2],
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrammarDocument {
    pub alphabet: AlphabetDocument,
    pub start: HypergraphDocument,
    pub flavor: Flavor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounded: Option<BoundsDocument>,
}

/// A host hypergraph and a fusion pair set on it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetDocument {
    pub alphabet: AlphabetDocument,
    pub host: HypergraphDocument,
    pub pairs: Vec<[String; 2]>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StepDocument {
    Multiply {
        counts: Vec<usize>,
        result: HypergraphDocument,
    },
    Fuse {
        pairs: Vec<[String; 2]>,
        result: HypergraphDocument,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDocument {
    pub start: HypergraphDocument,
    pub steps: Vec<StepDocument>,
}

/// One violated invariant, located by a JSON pointer into the document.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Diagnostic {
    pub pointer: String,
    pub message: String,
}

impl Diagnostic {
    fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() {
            "(document)"
        } else {
            &self.pointer
        };
        write!(f, "{at}: {}", self.message)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{}", .diagnostics.iter().map(Diagnostic::to_string).collect::<Vec<_>>().join("\n"))]
pub struct DocumentError {
    /// Never empty.
    pub diagnostics: Vec<Diagnostic>,
}

impl DocumentError {
    fn at(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError {
            diagnostics: vec![Diagnostic::new(pointer, message)],
        }
    }
}

fn check(diagnostics: Vec<Diagnostic>) -> Result<(), DocumentError> {
    if diagnostics.is_empty() {
        Ok(())
    } else {
        Err(DocumentError { diagnostics })
    }
}

/// Parses JSON text into `T`; schema errors carry the pointer of the
/// offending value.
pub fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T, DocumentError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer: String = e
            .path()
            .iter()
            .filter_map(|s| match s {
                serde_path_to_error::Segment::Seq { index } => Some(format!("/{index}")),
                serde_path_to_error::Segment::Map { key } => Some(format!("/{}", escape(key))),
                serde_path_to_error::Segment::Enum { variant } => {
                    Some(format!("/{}", escape(variant)))
                }
                serde_path_to_error::Segment::Unknown => None,
            })
            .collect();
        DocumentError::at(pointer, e.inner().to_string())
    })
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

pub fn alphabet_document(alphabet: &LabelAlphabet) -> AlphabetDocument {
    AlphabetDocument {
        labels: alphabet
            .labels()
            .map(|l| LabelDocument {
                name: l.name().to_string(),
                arity: l.arity(),
                kind: l.kind(),
                complement: l.complement_name().map(str::to_string),
            })
            .collect(),
    }
}

fn alphabet_at(
    doc: &AlphabetDocument,
    at: &str,
    out: &mut Vec<Diagnostic>,
) -> Option<LabelAlphabet> {
    let labels: Vec<Label> = doc
        .labels
        .iter()
        .map(|l| Label::new(&l.name, l.arity, l.kind, l.complement.as_deref()))
        .collect();
    let issues = LabelAlphabet::check(&labels);
    if issues.is_empty() {
        return Some(LabelAlphabet::new(labels).expect("checked"));
    }
    for issue in issues {
        let field = match issue.kind {
            AlphabetIssueKind::DuplicateName(_) => "name",
            AlphabetIssueKind::ArityMismatch { .. } => "arity",
            AlphabetIssueKind::ComplementKind(_) => "kind",
            _ => "complement",
        };
        out.push(Diagnostic::new(
            format!("{at}/labels/{}/{field}", issue.label_index),
            format!(
                "label `{}`: {}",
                doc.labels[issue.label_index].name, issue.kind
            ),
        ));
    }
    None
}

pub fn alphabet_from_document(doc: &AlphabetDocument) -> Result<LabelAlphabet, DocumentError> {
    let mut out = Vec::new();
    let alphabet = alphabet_at(doc, "", &mut out);
    check(out)?;
    Ok(alphabet.expect("no diagnostics"))
}

pub fn hypergraph_document<L: EdgeLabel>(h: &Hypergraph<L>) -> HypergraphDocument {
    HypergraphDocument {
        vertices: h.vertices().iter().map(|v| v.to_string()).collect(),
        edges: h
            .edges()
            .iter()
            .map(|e| EdgeDocument {
                id: e.id.to_string(),
                label: e.label.to_string(),
                att: e.att.iter().map(|v| v.to_string()).collect(),
            })
            .collect(),
    }
}

fn hypergraph_at(
    doc: &HypergraphDocument,
    alphabet: &LabelAlphabet,
    at: &str,
    out: &mut Vec<Diagnostic>,
) -> Option<Hypergraph> {
    let before = out.len();
    let mut vertices = BTreeSet::new();
    for (i, v) in doc.vertices.iter().enumerate() {
        if !vertices.insert(v.as_str()) {
            out.push(Diagnostic::new(
                format!("{at}/vertices/{i}"),
                format!("duplicate vertex id `{v}`"),
            ));
        }
    }
    let mut ids = BTreeSet::new();
    let mut edges = Vec::new();
    for (i, e) in doc.edges.iter().enumerate() {
        let here = format!("{at}/edges/{i}");
        if !ids.insert(e.id.as_str()) {
            out.push(Diagnostic::new(
                format!("{here}/id"),
                format!("duplicate edge id `{}`", e.id),
            ));
        }
        for (j, v) in e.att.iter().enumerate() {
            if !vertices.contains(v.as_str()) {
                out.push(Diagnostic::new(
                    format!("{here}/att/{j}"),
                    format!("edge `{}` is attached to unknown vertex `{v}`", e.id),
                ));
            }
        }
        let Some(label) = alphabet.get(&e.label) else {
            out.push(Diagnostic::new(
                format!("{here}/label"),
                format!(
                    "edge `{}` uses label `{}`, which is not in the alphabet",
                    e.id, e.label
                ),
            ));
            continue;
        };
        if e.att.len() != label.arity() {
            out.push(Diagnostic::new(
                format!("{here}/att"),
                format!(
                    "edge `{}` has {} attachment vertices but label `{}` has arity {}",
                    e.id,
                    e.att.len(),
                    label,
                    label.arity()
                ),
            ));
        }
        edges.push(Edge::new(
            e.id.as_str(),
            label.clone(),
            e.att.iter().map(|v| VertexId::from(v.as_str())),
        ));
    }
    if out.len() > before {
        return None;
    }
    match Hypergraph::new(
        doc.vertices.iter().map(|v| VertexId::from(v.as_str())),
        edges,
    ) {
        Ok(h) => Some(h),
        Err(e) => {
            out.push(Diagnostic::new(at, e.to_string()));
            None
        }
    }
}

/// Resolves edge labels by name in `alphabet`.
pub fn hypergraph_from_document(
    doc: &HypergraphDocument,
    alphabet: &LabelAlphabet,
) -> Result<Hypergraph, DocumentError> {
    let mut out = Vec::new();
    let h = hypergraph_at(doc, alphabet, "", &mut out);
    check(out)?;
    Ok(h.expect("no diagnostics"))
}

/// A grammar document with or without marker/connector bounds.
#[derive(Clone, Debug)]
pub enum LoadedGrammar {
    Plain(FusionGrammar),
    Bounded(BoundedFusionGrammar),
}

impl LoadedGrammar {
    pub fn grammar(&self) -> &FusionGrammar {
        match self {
            LoadedGrammar::Plain(g) => g,
            LoadedGrammar::Bounded(b) => &b.grammar,
        }
    }
}

pub fn grammar_document(g: &FusionGrammar) -> GrammarDocument {
    GrammarDocument {
        alphabet: alphabet_document(g.alphabet()),
        start: hypergraph_document(g.start()),
        flavor: g.flavor(),
        bounded: None,
    }
}

pub fn bounded_grammar_document(bg: &BoundedFusionGrammar) -> GrammarDocument {
    GrammarDocument {
        bounded: Some(BoundsDocument {
            f_m: [bg.f_m.c0, bg.f_m.c1],
            f_k: [bg.f_k.c0, bg.f_k.c1],
        }),
        ..grammar_document(&bg.grammar)
    }
}

/// Every violated invariant is reported, not only the first.
pub fn grammar_from_document(doc: &GrammarDocument) -> Result<LoadedGrammar, DocumentError> {
    let mut out = Vec::new();
    let Some(alphabet) = alphabet_at(&doc.alphabet, "/alphabet", &mut out) else {
        // Labels cannot be resolved; report start-graph id problems anyway.
        let empty = LabelAlphabet::default();
        let mut rest = Vec::new();
        hypergraph_at(&doc.start, &empty, "/start", &mut rest);
        out.extend(rest.into_iter().filter(|d| !d.pointer.ends_with("/label")));
        return Err(DocumentError { diagnostics: out });
    };
    let start = hypergraph_at(&doc.start, &alphabet, "/start", &mut out);
    if doc.flavor == Flavor::Markerless {
        for (i, e) in doc.start.edges.iter().enumerate() {
            if let Some(l) = alphabet.get(&e.label) {
                if matches!(l.kind(), LabelKind::Marker | LabelKind::Connector) {
                    out.push(Diagnostic::new(
                        format!("/start/edges/{i}/label"),
                        format!(
                            "edge `{}` uses {} label `{}`, which a markerless grammar cannot contain",
                            e.id,
                            l.kind(),
                            l
                        ),
                    ));
                }
            }
        }
        if doc.bounded.is_some() {
            out.push(Diagnostic::new(
                "/bounded",
                "marker and connector bounds need a full grammar",
            ));
        }
    }
    check(out)?;
    let g = FusionGrammar::new(alphabet, start.expect("no diagnostics"), doc.flavor)
        .map_err(|e| DocumentError::at("", e.to_string()))?;
    Ok(match doc.bounded {
        None => LoadedGrammar::Plain(g),
        Some(b) => LoadedGrammar::Bounded(BoundedFusionGrammar::new(
            g,
            Affine::new(b.f_m[0], b.f_m[1]),
            Affine::new(b.f_k[0], b.f_k[1]),
        )),
    })
}

fn pairs_at(
    pairs: &[[String; 2]],
    h: &Hypergraph,
    at: &str,
    out: &mut Vec<Diagnostic>,
) -> FusionPairSet {
    for (i, pair) in pairs.iter().enumerate() {
        for (j, e) in pair.iter().enumerate() {
            if h.edge(&EdgeId::from(e.as_str())).is_none() {
                out.push(Diagnostic::new(
                    format!("{at}/{i}/{j}"),
                    format!("unknown edge `{e}`"),
                ));
            }
        }
    }
    FusionPairSet::new(
        pairs
            .iter()
            .map(|[x, y]| (EdgeId::from(x.as_str()), EdgeId::from(y.as_str()))),
    )
}

fn pair_documents(p: &FusionPairSet) -> Vec<[String; 2]> {
    p.pairs()
        .iter()
        .map(|(x, y)| [x.to_string(), y.to_string()])
        .collect()
}

pub fn net_document(alphabet: &LabelAlphabet, host: &Hypergraph, p: &FusionPairSet) -> NetDocument {
    NetDocument {
        alphabet: alphabet_document(alphabet),
        host: hypergraph_document(host),
        pairs: pair_documents(p),
    }
}

/// The host and a pair set that passed validation against it.
pub fn net_from_document(doc: &NetDocument) -> Result<(Hypergraph, FusionPairSet), DocumentError> {
    let mut out = Vec::new();
    let alphabet = alphabet_at(&doc.alphabet, "/alphabet", &mut out);
    let host = alphabet.and_then(|a| hypergraph_at(&doc.host, &a, "/host", &mut out));
    let Some(host) = host else {
        return Err(DocumentError { diagnostics: out });
    };
    let p = pairs_at(&doc.pairs, &host, "/pairs", &mut out);
    check(out)?;
    p.validate(&host)
        .map_err(|e| DocumentError::at("/pairs", e.to_string()))?;
    Ok((host, p))
}

pub fn trace_document(t: &DerivationTrace) -> TraceDocument {
    TraceDocument {
        start: hypergraph_document(&t.start),
        steps: t
            .steps
            .iter()
            .map(|s| match s {
                DerivationStep::Multiply {
                    multiplicity,
                    result,
                } => StepDocument::Multiply {
                    counts: multiplicity.counts().to_vec(),
                    result: hypergraph_document(result),
                },
                DerivationStep::Fuse { pairs, result } => StepDocument::Fuse {
                    pairs: pair_documents(pairs),
                    result: hypergraph_document(result),
                },
            })
            .collect(),
    }
}

/// Rebuilds the recorded trace; it is not replayed.
pub fn trace_from_document(
    doc: &TraceDocument,
    alphabet: &LabelAlphabet,
) -> Result<DerivationTrace, DocumentError> {
    let mut out = Vec::new();
    let start = hypergraph_at(&doc.start, alphabet, "/start", &mut out);
    let mut steps = Vec::new();
    for (i, s) in doc.steps.iter().enumerate() {
        let here = format!("/steps/{i}");
        match s {
            StepDocument::Multiply { counts, result } => {
                let r = hypergraph_at(
                    result,
                    alphabet,
                    &format!("{here}/multiply/result"),
                    &mut out,
                );
                if let Some(result) = r {
                    steps.push(DerivationStep::Multiply {
                        multiplicity: Multiplicity::new(counts.clone()),
                        result,
                    });
                }
            }
            StepDocument::Fuse { pairs, result } => {
                let r = hypergraph_at(result, alphabet, &format!("{here}/fuse/result"), &mut out);
                if let Some(result) = r {
                    let pairs = FusionPairSet::new(
                        pairs
                            .iter()
                            .map(|[x, y]| (EdgeId::from(x.as_str()), EdgeId::from(y.as_str()))),
                    );
                    steps.push(DerivationStep::Fuse { pairs, result });
                }
            }
        }
    }
    check(out)?;
    Ok(DerivationTrace {
        start: start.expect("no diagnostics"),
        steps,
    })
}

/// Label names with their occurrence counts, for text output.
pub fn label_summary<L: EdgeLabel>(h: &Hypergraph<L>) -> BTreeMap<String, usize> {
    h.label_counts()
        .into_iter()
        .map(|(l, k)| (l.to_string(), k))
        .collect()
}
