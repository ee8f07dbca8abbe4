use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use fusegraph::diophantine::SolverLimits;
use fusegraph::fusion::{
    fusion_net, oracle_membership, oracle_search, FusionGrammar, OracleOutcome, SearchBounds,
};
use fusegraph::hypergraph::LabelAlphabet;
use fusegraph::io::{
    cfg_document, hypergraph_document, hypergraph_to_dot, mem1_certificate_document,
    ne_certificate_document, net_to_dot, trace_document, LoadedGrammar,
};
use fusegraph::membership::{
    decide_mem_bounded_with, decide_mem_with, BoundedFusionGrammar, BoundedOptions, BoundedRoute,
    Mem1Options, MemRoute,
};
use fusegraph::nonempty::decide_nonempty_with;
use fusegraph::parikh::{decide_parikh_membership, Coordinates, ParikhError, ParikhOptions};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::load::{self, AnyDocument};
use crate::output::{Answer, CommandResult};
use crate::{Cli, Command};

pub struct Output {
    pub text: String,
    pub code: u8,
}

const SOLVER_ENV: &str = "FUSEGRAPH_MAX_SOLVER_NODES";

fn solver_limits() -> Result<SolverLimits, CliError> {
    match std::env::var(SOLVER_ENV) {
        Err(_) => Ok(SolverLimits::default()),
        Ok(v) => v
            .trim()
            .parse()
            .map(|max_nodes| SolverLimits { max_nodes })
            .map_err(|e| CliError::Usage(format!("{SOLVER_ENV}=`{v}`: {e}"))),
    }
}

fn mem_options() -> Result<Mem1Options, CliError> {
    Ok(Mem1Options {
        solver: solver_limits()?,
        ..Mem1Options::default()
    })
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed().as_secs_f64() * 1e3)
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    if let Command::ExportDot { file, grammar } = &cli.command {
        return export_dot(file, grammar.as_deref());
    }
    let mut result = match &cli.command {
        Command::Validate { file, grammar } => validate(file, grammar.as_deref())?,
        Command::Member { grammar, target } => member(grammar, target)?,
        Command::Nonempty { grammar } => nonempty(grammar)?,
        Command::BoundedMember {
            grammar,
            target,
            fm,
            fk,
        } => bounded_member(grammar, target, *fm, *fk)?,
        Command::Parikh {
            grammar,
            vector,
            assume_connection_preserving,
            emit_cfg,
        } => parikh(grammar, vector, *assume_connection_preserving, *emit_cfg)?,
        Command::Derive {
            grammar,
            target,
            max_copies,
            max_pairs,
        } => derive(
            grammar,
            target.as_deref(),
            SearchBounds::new(*max_copies, *max_pairs),
        )?,
        Command::ExportDot { .. } => unreachable!("handled above"),
    };
    if !cli.timing {
        result.timing_ms = None;
    }
    Ok(Output {
        text: result.render(cli.format),
        code: result.answer.exit_code(),
    })
}

fn grammar_alphabet(path: Option<&Path>) -> Result<Option<LabelAlphabet>, CliError> {
    path.map(|p| load::grammar(p).map(|g| g.grammar().alphabet().clone()))
        .transpose()
}

fn validate(file: &Path, grammar: Option<&Path>) -> Result<CommandResult, CliError> {
    let alphabet = grammar_alphabet(grammar)?;
    let mut r = CommandResult::new("validate", Answer::Yes);
    r.notes.push(match load::any(file, alphabet.as_ref())? {
        AnyDocument::Grammar(g) => {
            let bounds = match &g {
                LoadedGrammar::Bounded(b) => format!(
                    ", marker bound {}+{}z, connector bound {}+{}z",
                    b.f_m.c0, b.f_m.c1, b.f_k.c0, b.f_k.c1
                ),
                LoadedGrammar::Plain(_) => String::new(),
            };
            let g = g.grammar();
            format!(
                "{} grammar: {} labels, {} start components{bounds}",
                g.flavor(),
                g.alphabet().len(),
                g.components().len()
            )
        }
        AnyDocument::Hypergraph(h) => format!(
            "hypergraph: {} vertices, {} edges",
            h.vertex_count(),
            h.edge_count()
        ),
        AnyDocument::Net(h, p) => format!(
            "fusion net: {} pairs on a host with {} edges",
            p.len(),
            h.edge_count()
        ),
    });
    Ok(r)
}

fn member(grammar: &Path, target: &Path) -> Result<CommandResult, CliError> {
    let g = load::grammar(grammar)?;
    let h = load::hypergraph(target, g.grammar().alphabet())?;
    let opts = mem_options()?;
    let (ans, ms) = timed(|| decide_mem_with(g.grammar(), &h, &opts));
    let ans = ans.map_err(|e| {
        let limit = e.is_resource_limit();
        CliError::from_decider(e, limit)
    })?;
    let mut r = CommandResult::new("member", Answer::of(ans.member));
    r.route = Some(
        match ans.route {
            MemRoute::Empty => "empty target",
            MemRoute::Disconnected => "disconnected target",
            MemRoute::ForeignLabel => "label outside the grammar",
            MemRoute::MemO => "isolated vertex",
            MemRoute::Mem2 => "single-edge reduction",
        }
        .to_string(),
    );
    if let Some((inst, a)) = &ans.mem1 {
        r.certificate = a
            .certificate
            .as_ref()
            .map(|c| to_value(mem1_certificate_document(c, inst)));
    }
    r.timing_ms = Some(ms);
    Ok(r)
}

fn nonempty(grammar: &Path) -> Result<CommandResult, CliError> {
    let g = load::grammar(grammar)?;
    let opts = mem_options()?;
    let (ans, ms) = timed(|| decide_nonempty_with(g.grammar(), &opts));
    let ans = ans.map_err(|e| {
        let limit = e.is_resource_limit();
        CliError::from_decider(e, limit)
    })?;
    let mut r = CommandResult::new("nonempty", Answer::of(ans.nonempty));
    r.certificate = ne_certificate_document(&ans).map(to_value);
    r.timing_ms = Some(ms);
    Ok(r)
}

fn bounded_member(
    grammar: &Path,
    target: &Path,
    fm: Option<fusegraph::membership::Affine>,
    fk: Option<fusegraph::membership::Affine>,
) -> Result<CommandResult, CliError> {
    let bg = match (load::grammar(grammar)?, fm, fk) {
        (LoadedGrammar::Bounded(b), fm, fk) => BoundedFusionGrammar {
            f_m: fm.unwrap_or(b.f_m),
            f_k: fk.unwrap_or(b.f_k),
            ..b
        },
        (LoadedGrammar::Plain(g), Some(fm), Some(fk)) => BoundedFusionGrammar::new(g, fm, fk),
        (LoadedGrammar::Plain(_), _, _) => {
            return Err(CliError::Usage(format!(
                "{} has no `bounded` field; pass both --fm and --fk",
                grammar.display()
            )))
        }
    };
    let h = load::hypergraph(target, bg.grammar.alphabet())?;
    let opts = BoundedOptions {
        mem: mem_options()?,
        ..BoundedOptions::default()
    };
    let (ans, ms) = timed(|| decide_mem_bounded_with(&bg, &h, &opts));
    let ans = ans.map_err(|e| {
        let limit = e.is_resource_limit();
        CliError::from_decider(e, limit)
    })?;
    let mut r = CommandResult::new("bounded-member", Answer::of(ans.member));
    r.route = Some(
        match ans.route {
            BoundedRoute::NoMarkersAllowed => "marker bound is zero",
            BoundedRoute::ForeignLabel => "label outside the grammar",
            BoundedRoute::Oracle => "derivation search",
            BoundedRoute::Enumeration => "candidate enumeration",
        }
        .to_string(),
    );
    r.witness = ans
        .witness
        .as_ref()
        .map(|y| to_value(hypergraph_document(y)));
    r.timing_ms = Some(ms);
    Ok(r)
}

fn parse_vector(spec: &str, coords: &Coordinates) -> Result<Vec<u64>, CliError> {
    let terminals = &coords.labels()[..coords.t()];
    let mut v = vec![0u64; terminals.len()];
    let mut seen = BTreeMap::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, k) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("`{item}`: expected `label=count`")))?;
        let (name, k) = (name.trim(), k.trim());
        let i = terminals
            .iter()
            .position(|l| l.name() == name)
            .ok_or_else(|| CliError::Usage(format!("`{name}` is not a terminal label")))?;
        if seen.insert(name, ()).is_some() {
            return Err(CliError::Usage(format!("`{name}` is given twice")));
        }
        v[i] = k
            .parse()
            .map_err(|e| CliError::Usage(format!("`{item}`: {e}")))?;
    }
    Ok(v)
}

fn parikh(
    grammar: &Path,
    vector: &str,
    assume: bool,
    emit_cfg: bool,
) -> Result<CommandResult, CliError> {
    let g = load::grammar(grammar)?;
    let g: &FusionGrammar = g.grammar();
    let cfg = fusegraph::parikh::build_cfg(g);
    let target = parse_vector(vector, cfg.coords())?;
    let opts = ParikhOptions {
        refute: if assume {
            None
        } else {
            ParikhOptions::default().refute
        },
        solver: solver_limits()?,
        ..ParikhOptions::default()
    };
    let (ans, ms) = timed(|| decide_parikh_membership(g, &target, &opts));
    let ans = ans.map_err(|e| match e {
        ParikhError::NotConnectionPreserving(v) => CliError::Rejected(format!(
            "the grammar is not connection-preserving: fusing {} with {} disconnects part of a derived hypergraph",
            v.pair.0, v.pair.1
        )),
        e => {
            let limit = e.is_resource_limit();
            CliError::from_decider(e, limit)
        }
    })?;
    let mut r = CommandResult::new("parikh", Answer::of(ans.member));
    if !assume {
        let b = opts.refute.expect("set above");
        r.notes.push(format!(
            "connection preservation not refuted within {} copies and {} fusion pairs",
            b.max_total_copies, b.max_fusion_pairs
        ));
    }
    let coords = ans.cfg.coords();
    r.certificate = ans.certificate.as_ref().map(|c| {
        let productions: Vec<Value> = c
            .multiset
            .0
            .iter()
            .map(|(&i, &k)| json!({"production": ans.cfg.productions()[i].to_string(), "count": k}))
            .collect();
        let vector: BTreeMap<&str, u64> = coords
            .labels()
            .iter()
            .zip(&c.vector.0)
            .map(|(l, &k)| (l.name(), k))
            .collect();
        json!({"productions": productions, "vector": vector})
    });
    if emit_cfg {
        r.cfg = Some(to_value(cfg_document(&ans.cfg)));
    }
    r.timing_ms = Some(ms);
    Ok(r)
}

fn derive(
    grammar: &Path,
    target: Option<&Path>,
    bounds: SearchBounds,
) -> Result<CommandResult, CliError> {
    let g = load::grammar(grammar)?;
    let g = g.grammar();
    let Some(target) = target else {
        let (found, ms) = timed(|| oracle_search(g, bounds));
        let answer = if found.is_empty() {
            Answer::NotFoundWithinBounds
        } else {
            Answer::Yes
        };
        let mut r = CommandResult::new("derive", answer);
        r.notes
            .push(format!("{} members up to isomorphism", found.len()));
        r.witness = Some(to_value(
            found.iter().map(hypergraph_document).collect::<Vec<_>>(),
        ));
        r.timing_ms = Some(ms);
        return Ok(r);
    };
    let h = load::hypergraph(target, g.alphabet())?;
    let (outcome, ms) = timed(|| oracle_membership(g, &h, bounds));
    let mut r = match outcome {
        OracleOutcome::Found { witness, component } => {
            let mut r = CommandResult::new("derive", Answer::Yes);
            r.witness = Some(json!({
                "trace": trace_document(&witness),
                "component": hypergraph_document(&component),
            }));
            r
        }
        OracleOutcome::NotFoundWithinBounds => {
            CommandResult::new("derive", Answer::NotFoundWithinBounds)
        }
    };
    r.timing_ms = Some(ms);
    Ok(r)
}

/// Always DOT text, whatever `--format` says.
fn export_dot(file: &Path, grammar: Option<&Path>) -> Result<Output, CliError> {
    let alphabet = grammar_alphabet(grammar)?;
    let text = match load::any(file, alphabet.as_ref())? {
        AnyDocument::Grammar(g) => hypergraph_to_dot(g.grammar().start()),
        AnyDocument::Hypergraph(h) => hypergraph_to_dot(&h),
        AnyDocument::Net(h, p) => {
            net_to_dot(&fusion_net(&h, &p).map_err(|e| CliError::Rejected(e.to_string()))?)
        }
    };
    Ok(Output { text, code: 0 })
}
