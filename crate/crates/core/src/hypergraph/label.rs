use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five disjoint label classes `T`, `F`, `F̄`, `M`, `K`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    Terminal,
    Fusion,
    Complement,
    Marker,
    Connector,
}

impl LabelKind {
    /// Fusion and complement labels carry a complement.
    pub fn is_fusion_like(self) -> bool {
        matches!(self, LabelKind::Fusion | LabelKind::Complement)
    }

    /// Labels that survive into language members: `T ∪ M ∪ K`.
    pub fn is_final(self) -> bool {
        matches!(
            self,
            LabelKind::Terminal | LabelKind::Marker | LabelKind::Connector
        )
    }
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelKind::Terminal => "terminal",
            LabelKind::Fusion => "fusion",
            LabelKind::Complement => "complement",
            LabelKind::Marker => "marker",
            LabelKind::Connector => "connector",
        })
    }
}

/// A typed symbol. Equality covers every field, so two alphabets that disagree
/// on the kind of a name produce distinct labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    name: Arc<str>,
    arity: usize,
    kind: LabelKind,
    complement: Option<Arc<str>>,
}

impl Label {
    pub fn new(
        name: impl AsRef<str>,
        arity: usize,
        kind: LabelKind,
        complement: Option<&str>,
    ) -> Self {
        Label {
            name: Arc::from(name.as_ref()),
            arity,
            kind,
            complement: complement.map(Arc::from),
        }
    }

    pub fn terminal(name: impl AsRef<str>, arity: usize) -> Self {
        Label::new(name, arity, LabelKind::Terminal, None)
    }

    pub fn marker(name: impl AsRef<str>, arity: usize) -> Self {
        Label::new(name, arity, LabelKind::Marker, None)
    }

    pub fn connector(name: impl AsRef<str>, arity: usize) -> Self {
        Label::new(name, arity, LabelKind::Connector, None)
    }

    /// A fusion label `A` together with its complement `Ā`.
    pub fn fusion_pair(name: &str, complement: &str, arity: usize) -> (Label, Label) {
        (
            Label::new(name, arity, LabelKind::Fusion, Some(complement)),
            Label::new(complement, arity, LabelKind::Complement, Some(name)),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> LabelKind {
        self.kind
    }

    pub fn complement_name(&self) -> Option<&str> {
        self.complement.as_deref()
    }

    /// Whether `other` is the complement of `self`.
    pub fn is_complement_of(&self, other: &Label) -> bool {
        self.kind.is_fusion_like()
            && other.kind.is_fusion_like()
            && self.kind != other.kind
            && self.complement.as_deref() == Some(other.name())
            && other.complement.as_deref() == Some(self.name())
            && self.arity == other.arity
    }

    /// The same label reclassified; used by reductions that change roles.
    pub fn with_kind(&self, kind: LabelKind, complement: Option<&str>) -> Label {
        Label::new(&*self.name, self.arity, kind, complement)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}:{}", self.name, self.arity, self.kind)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AlphabetIssueKind {
    DuplicateName(String),
    MissingComplement,
    UnexpectedComplement,
    UnknownComplement(String),
    NotInvolutive(String),
    ComplementKind(String),
    ArityMismatch {
        complement: String,
        ours: usize,
        theirs: usize,
    },
}

impl fmt::Display for AlphabetIssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphabetIssueKind::DuplicateName(n) => write!(f, "duplicate label name `{n}`"),
            AlphabetIssueKind::MissingComplement => {
                f.write_str("fusion and complement labels need a complement")
            }
            AlphabetIssueKind::UnexpectedComplement => {
                f.write_str("only fusion and complement labels may name a complement")
            }
            AlphabetIssueKind::UnknownComplement(c) => {
                write!(f, "complement `{c}` is not declared")
            }
            AlphabetIssueKind::NotInvolutive(c) => {
                write!(
                    f,
                    "complement `{c}` does not point back (complement is not an involution)"
                )
            }
            AlphabetIssueKind::ComplementKind(c) => write!(
                f,
                "complement `{c}` must have the opposite kind (fusion vs complement)"
            ),
            AlphabetIssueKind::ArityMismatch {
                complement,
                ours,
                theirs,
            } => write!(
                f,
                "arity mismatch: arity {ours} but complement `{complement}` has arity {theirs}"
            ),
        }
    }
}

/// One violated alphabet invariant, located by the label's input position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphabetIssue {
    pub label_index: usize,
    pub kind: AlphabetIssueKind,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("invalid alphabet: {}", .issues.iter().map(|i| format!("label #{}: {}", i.label_index, i.kind)).collect::<Vec<_>>().join("; "))]
pub struct AlphabetError {
    pub issues: Vec<AlphabetIssue>,
}

/// A finite label alphabet `Σ = T ⊎ F ⊎ F̄ ⊎ M ⊎ K` keyed by name.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LabelAlphabet {
    labels: BTreeMap<Arc<str>, Label>,
}

impl LabelAlphabet {
    pub fn new(labels: impl IntoIterator<Item = Label>) -> Result<Self, AlphabetError> {
        let labels: Vec<Label> = labels.into_iter().collect();
        let issues = Self::check(&labels);
        if !issues.is_empty() {
            return Err(AlphabetError { issues });
        }
        Ok(LabelAlphabet {
            labels: labels.into_iter().map(|l| (l.name.clone(), l)).collect(),
        })
    }

    /// Every violated invariant of a candidate label list.
    pub fn check(labels: &[Label]) -> Vec<AlphabetIssue> {
        let mut issues = Vec::new();
        let mut by_name: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if by_name.insert(l.name(), i).is_some() {
                issues.push(AlphabetIssue {
                    label_index: i,
                    kind: AlphabetIssueKind::DuplicateName(l.name().to_string()),
                });
            }
        }
        for (i, l) in labels.iter().enumerate() {
            let push = |issues: &mut Vec<AlphabetIssue>, kind| {
                issues.push(AlphabetIssue {
                    label_index: i,
                    kind,
                })
            };
            match (l.kind.is_fusion_like(), l.complement_name()) {
                (true, None) => push(&mut issues, AlphabetIssueKind::MissingComplement),
                (false, Some(_)) => push(&mut issues, AlphabetIssueKind::UnexpectedComplement),
                (false, None) => {}
                (true, Some(c)) => match by_name.get(c).map(|&j| &labels[j]) {
                    None => push(
                        &mut issues,
                        AlphabetIssueKind::UnknownComplement(c.to_string()),
                    ),
                    Some(other) => {
                        if other.complement_name() != Some(l.name()) {
                            push(&mut issues, AlphabetIssueKind::NotInvolutive(c.to_string()));
                        }
                        if !other.kind.is_fusion_like() || other.kind == l.kind {
                            push(
                                &mut issues,
                                AlphabetIssueKind::ComplementKind(c.to_string()),
                            );
                        }
                        if other.arity != l.arity {
                            push(
                                &mut issues,
                                AlphabetIssueKind::ArityMismatch {
                                    complement: c.to_string(),
                                    ours: l.arity,
                                    theirs: other.arity,
                                },
                            );
                        }
                    }
                },
            }
        }
        issues
    }

    pub fn get(&self, name: &str) -> Option<&Label> {
        self.labels.get(name)
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.labels.get(label.name()) == Some(label)
    }

    pub fn complement_of(&self, label: &Label) -> Option<&Label> {
        label.complement_name().and_then(|c| self.get(c))
    }

    /// All labels in name order.
    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.labels.values()
    }

    pub fn of_kind(&self, kind: LabelKind) -> impl Iterator<Item = &Label> {
        self.labels.values().filter(move |l| l.kind == kind)
    }

    pub fn terminals(&self) -> impl Iterator<Item = &Label> {
        self.of_kind(LabelKind::Terminal)
    }

    pub fn fusion(&self) -> impl Iterator<Item = &Label> {
        self.of_kind(LabelKind::Fusion)
    }

    pub fn markers(&self) -> impl Iterator<Item = &Label> {
        self.of_kind(LabelKind::Marker)
    }

    pub fn connectors(&self) -> impl Iterator<Item = &Label> {
        self.of_kind(LabelKind::Connector)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// A name not used by any label: `base`, then `base'`, `base''`, ...
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.labels.contains_key(name.as_str()) {
            name.push('\'');
        }
        name
    }

    /// This alphabet extended by `extra`, revalidated as a whole.
    pub fn extended(&self, extra: impl IntoIterator<Item = Label>) -> Result<Self, AlphabetError> {
        LabelAlphabet::new(self.labels.values().cloned().chain(extra))
    }
}
