use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{
    connected_components, AlphabetError, Edge, EdgeId, Hypergraph, HypergraphError, Label,
    LabelAlphabet, LabelKind, VertexId,
};

/// Whether language members need a marker (`Full`) or are plain terminal
/// components (`Markerless`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Markerless,
    Full,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Markerless => "markerless",
            Flavor::Full => "full",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum GrammarError {
    #[error("edge `{edge}` uses label `{label}`, which is not in the alphabet")]
    UnknownLabel { edge: EdgeId, label: String },
    #[error(
        "edge `{edge}` uses {kind} label `{label}`, which a markerless grammar cannot contain"
    )]
    MarkerInMarkerless {
        edge: EdgeId,
        label: String,
        kind: LabelKind,
    },
    #[error("a markerless grammar is required")]
    NotMarkerless,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

/// `FG = (Z, F, M, T, K)`: a start hypergraph over a partitioned alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FusionGrammar {
    alphabet: LabelAlphabet,
    start: Hypergraph,
    flavor: Flavor,
    components: Vec<Hypergraph>,
}

impl FusionGrammar {
    pub fn new(
        alphabet: LabelAlphabet,
        start: Hypergraph,
        flavor: Flavor,
    ) -> Result<Self, GrammarError> {
        for e in start.edges() {
            if !alphabet.contains(&e.label) {
                return Err(GrammarError::UnknownLabel {
                    edge: e.id.clone(),
                    label: e.label.name().to_string(),
                });
            }
            if flavor == Flavor::Markerless
                && matches!(e.label.kind(), LabelKind::Marker | LabelKind::Connector)
            {
                return Err(GrammarError::MarkerInMarkerless {
                    edge: e.id.clone(),
                    label: e.label.name().to_string(),
                    kind: e.label.kind(),
                });
            }
        }
        let components = connected_components(&start);
        Ok(FusionGrammar {
            alphabet,
            start,
            flavor,
            components,
        })
    }

    pub fn markerless(alphabet: LabelAlphabet, start: Hypergraph) -> Result<Self, GrammarError> {
        FusionGrammar::new(alphabet, start, Flavor::Markerless)
    }

    pub fn full(alphabet: LabelAlphabet, start: Hypergraph) -> Result<Self, GrammarError> {
        FusionGrammar::new(alphabet, start, Flavor::Full)
    }

    pub fn alphabet(&self) -> &LabelAlphabet {
        &self.alphabet
    }

    pub fn start(&self) -> &Hypergraph {
        &self.start
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// `𝒞(Z)` in the fixed component order.
    pub fn components(&self) -> &[Hypergraph] {
        &self.components
    }

    pub fn require_markerless(&self) -> Result<(), GrammarError> {
        match self.flavor {
            Flavor::Markerless => Ok(()),
            Flavor::Full => Err(GrammarError::NotMarkerless),
        }
    }

    /// Index of the component holding vertex `v`.
    pub fn component_of_vertex(&self, v: &VertexId) -> Option<usize> {
        self.components.iter().position(|c| c.has_vertex(v))
    }

    /// Index of the component holding edge `e`.
    pub fn component_of_edge(&self, e: &EdgeId) -> Option<usize> {
        self.components.iter().position(|c| c.edge(e).is_some())
    }

    /// The same grammar over another start hypergraph.
    pub fn with_start(&self, start: Hypergraph) -> Result<Self, GrammarError> {
        FusionGrammar::new(self.alphabet.clone(), start, self.flavor)
    }

    /// Full grammar with a fresh unary marker attached to every vertex; the
    /// generated language is unchanged. Returns the grammar and the marker.
    pub fn lift_with_markers(&self, marker_base: &str) -> (FusionGrammar, Label) {
        let marker = Label::marker(self.alphabet.fresh_name(marker_base), 1);
        let alphabet = self
            .alphabet
            .extended([marker.clone()])
            .expect("fresh marker keeps the alphabet valid");
        let mut edges: Vec<Edge> = self.start.edges().to_vec();
        let taken: std::collections::BTreeSet<&str> = edges.iter().map(|e| e.id.as_str()).collect();
        let mut fresh = Vec::new();
        for v in self.start.vertices() {
            let mut id = format!("{}@{}", marker.name(), v);
            while taken.contains(id.as_str()) {
                id.push('\'');
            }
            fresh.push(Edge::new(id, marker.clone(), [v.clone()]));
        }
        edges.extend(fresh);
        let start = Hypergraph::new(self.start.vertices().to_vec(), edges).expect("fresh edge ids");
        let g = FusionGrammar::new(alphabet, start, Flavor::Full).expect("lifted grammar is valid");
        (g, marker)
    }

    /// Markers and connectors reclassified as terminals, as a markerless
    /// grammar. Returns the relabelled start hypergraph's grammar.
    pub fn terminal_view(&self) -> FusionGrammar {
        let relabel = |l: &Label| match l.kind() {
            LabelKind::Marker | LabelKind::Connector => l.with_kind(LabelKind::Terminal, None),
            _ => l.clone(),
        };
        let alphabet = LabelAlphabet::new(self.alphabet.labels().map(relabel)).expect("same names");
        let start = self.start.map_labels(|e| relabel(&e.label));
        FusionGrammar::new(alphabet, start, Flavor::Markerless)
            .expect("relabelled grammar is valid")
    }
}

/// Oracle truncation: totals, not per-component caps.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_total_copies: usize,
    pub max_fusion_pairs: usize,
}

impl SearchBounds {
    pub fn new(max_total_copies: usize, max_fusion_pairs: usize) -> Self {
        SearchBounds {
            max_total_copies,
            max_fusion_pairs,
        }
    }
}
