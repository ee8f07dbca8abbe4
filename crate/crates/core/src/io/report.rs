use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::membership::{Mem1Certificate, Mem1Instance};
use crate::nonempty::NeAnswer;
use crate::parikh::ContextFreeGrammar;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertificateBase {
    pub component: usize,
    pub edge: String,
    pub tag: String,
}

/// `{"base": …, "counts": {tag: k}}`; non-emptiness adds the origin of every
/// reduction component.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub base: CertificateBase,
    pub counts: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origins: Option<Vec<XiOriginDocument>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct XiOriginDocument {
    pub component: usize,
    pub designated: Option<String>,
}

pub fn mem1_certificate_document(
    cert: &Mem1Certificate,
    inst: &Mem1Instance,
) -> CertificateDocument {
    CertificateDocument {
        base: CertificateBase {
            component: cert.base.component,
            edge: cert.base.base_edge(inst).expect("base column").to_string(),
            tag: cert.base.tag.clone(),
        },
        counts: cert
            .counts
            .iter()
            .map(|(c, k)| (c.tag.clone(), *k))
            .collect(),
        origins: None,
    }
}

pub fn ne_certificate_document(ans: &NeAnswer) -> Option<CertificateDocument> {
    let cert = ans.mem1.certificate.as_ref()?;
    let mut doc = mem1_certificate_document(cert, &ans.reduction.instance());
    doc.origins = Some(
        ans.reduction
            .origins
            .iter()
            .map(|o| XiOriginDocument {
                component: o.component,
                designated: o.designated.as_ref().map(|e| e.to_string()),
            })
            .collect(),
    );
    Some(doc)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OriginDocument {
    pub component: usize,
    pub edge: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ProductionDocument {
    pub lhs: String,
    pub rhs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<OriginDocument>,
}

/// The start symbol is written `S`.
pub fn cfg_document(cfg: &ContextFreeGrammar) -> Vec<ProductionDocument> {
    cfg.productions()
        .iter()
        .map(|p| ProductionDocument {
            lhs: p.lhs.to_string(),
            rhs: p.rhs.iter().map(|l| l.name().to_string()).collect(),
            origin: p.origin.as_ref().map(|o| OriginDocument {
                component: o.component,
                edge: o.edge.to_string(),
            }),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fgp_ex, loop_fg};
    use crate::nonempty::decide_nonempty_with;
    use crate::parikh::build_cfg;

    #[test]
    fn ne_certificate_lists_origins() {
        let ans = decide_nonempty_with(&fgp_ex(), &Default::default()).unwrap();
        let doc = ne_certificate_document(&ans).unwrap();
        assert_eq!(doc.origins.as_ref().unwrap().len(), 9);
        assert!(doc.base.tag.starts_with('B'));
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(
            serde_json::from_str::<CertificateDocument>(&text).unwrap(),
            doc
        );
    }

    #[test]
    fn loop_cfg_document() {
        let doc = cfg_document(&build_cfg(&loop_fg()));
        let lines: Vec<String> = doc
            .iter()
            .map(|p| format!("{} -> {}", p.lhs, p.rhs.join(" ")))
            .collect();
        assert_eq!(lines, ["A_bar -> mu", "S -> A mu", "A -> a"]);
        assert!(doc.iter().all(|p| p.origin.is_some()));
    }
}
