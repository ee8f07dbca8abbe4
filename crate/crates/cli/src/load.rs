use std::path::Path;

use fusegraph::fusion::FusionPairSet;
use fusegraph::hypergraph::{Hypergraph, LabelAlphabet, LabelKind};
use fusegraph::io::{
    alphabet_from_document, grammar_from_document, hypergraph_from_document, net_from_document,
    parse_document, AlphabetDocument, DocumentError, GrammarDocument, HypergraphDocument,
    LabelDocument, LoadedGrammar, NetDocument,
};

use crate::error::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn invalid(path: &Path, e: DocumentError) -> CliError {
    CliError::Invalid {
        path: path.to_path_buf(),
        error: e,
    }
}

pub fn grammar(path: &Path) -> Result<LoadedGrammar, CliError> {
    let text = read(path)?;
    let doc: GrammarDocument = parse_document(&text).map_err(|e| invalid(path, e))?;
    grammar_from_document(&doc).map_err(|e| invalid(path, e))
}

/// Labels are resolved in the grammar's alphabet.
pub fn hypergraph(path: &Path, alphabet: &LabelAlphabet) -> Result<Hypergraph, CliError> {
    let text = read(path)?;
    let doc: HypergraphDocument = parse_document(&text).map_err(|e| invalid(path, e))?;
    hypergraph_from_document(&doc, alphabet).map_err(|e| invalid(path, e))
}

/// Every label name becomes a terminal with the arity of its first use.
fn implied_alphabet(doc: &HypergraphDocument) -> LabelAlphabet {
    let mut labels: Vec<LabelDocument> = Vec::new();
    for e in &doc.edges {
        if labels.iter().all(|l| l.name != e.label) {
            labels.push(LabelDocument {
                name: e.label.clone(),
                arity: e.att.len(),
                kind: LabelKind::Terminal,
                complement: None,
            });
        }
    }
    alphabet_from_document(&AlphabetDocument { labels }).expect("distinct terminal names")
}

pub enum AnyDocument {
    Grammar(LoadedGrammar),
    Hypergraph(Hypergraph),
    Net(Hypergraph, FusionPairSet),
}

/// Grammar documents have `start`, net documents `host`; anything else is
/// read as a hypergraph, against `alphabet` when one is given.
pub fn any(path: &Path, alphabet: Option<&LabelAlphabet>) -> Result<AnyDocument, CliError> {
    let text = read(path)?;
    let value: serde_json::Value = parse_document(&text).map_err(|e| invalid(path, e))?;
    let has = |k: &str| value.get(k).is_some();
    if has("start") {
        let doc: GrammarDocument = parse_document(&text).map_err(|e| invalid(path, e))?;
        return Ok(AnyDocument::Grammar(
            grammar_from_document(&doc).map_err(|e| invalid(path, e))?,
        ));
    }
    if has("host") {
        let doc: NetDocument = parse_document(&text).map_err(|e| invalid(path, e))?;
        let (h, p) = net_from_document(&doc).map_err(|e| invalid(path, e))?;
        return Ok(AnyDocument::Net(h, p));
    }
    let doc: HypergraphDocument = parse_document(&text).map_err(|e| invalid(path, e))?;
    let implied;
    let alphabet = match alphabet {
        Some(a) => a,
        None => {
            implied = implied_alphabet(&doc);
            &implied
        }
    };
    Ok(AnyDocument::Hypergraph(
        hypergraph_from_document(&doc, alphabet).map_err(|e| invalid(path, e))?,
    ))
}
