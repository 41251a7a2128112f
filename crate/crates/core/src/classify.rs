//! Finite mutation type.
//!
//! A connected diagram on at least three nodes is mutation-finite exactly when
//! it is s-decomposable or lies in one of a short list of exceptional classes.
//! The exceptional classes are read from `data/exceptional.json`, or from the
//! file named by `SDECOMP_EXCEPTIONAL_CATALOG`, and expanded once per node count.
//!
//! A negative answer is only given when a mutation scan produces an edge of
//! weight at least 5. That such an edge forces an infinite class is a known
//! result from the literature, not something proved here; verdicts say so.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::assembly::Decomposition;
use crate::canon::canonical_form;
use crate::decompose::{s_decompose, Certificate, DecomposeOptions};
use crate::error::{Error, Result};
use crate::model::{matrix_to_diagram, Diagram, ExchangeMatrix, NodeId};
use crate::mutation::{mutation_class, scan_mutation_class, ScanLimits, ScanOutcome};

pub const CATALOG_ENV: &str = "SDECOMP_EXCEPTIONAL_CATALOG";
pub const EXCEPTIONAL_SOURCE: &str = include_str!("../data/exceptional.json");

#[derive(Clone, Debug, Deserialize)]
pub struct ExceptionalType {
    pub name: String,
    pub skew_symmetric: bool,
    pub nodes: usize,
    pub class_size: usize,
    pub edges: Vec<(usize, usize, u64)>,
}

impl ExceptionalType {
    pub fn diagram(&self) -> Result<Diagram> {
        let mut g = Diagram::new(self.nodes);
        for &(t, h, w) in &self.edges {
            if t == 0 || h == 0 {
                return Err(Error::Config(format!(
                    "{}: node ids are 1-based",
                    self.name
                )));
            }
            g.add_edge(t - 1, h - 1, w)
                .map_err(|e| Error::Config(format!("{}: {}", self.name, e)))?;
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct ExceptionalCatalog {
    pub format: String,
    pub version: u32,
    pub types: Vec<ExceptionalType>,
}

impl ExceptionalCatalog {
    pub fn parse(src: &str) -> Result<Self> {
        let c: ExceptionalCatalog = serde_json::from_str(src)
            .map_err(|e| Error::Config(format!("exceptional catalog: {}", e)))?;
        if c.format != "sdecomp-exceptional" || c.version != 1 {
            return Err(Error::Config(format!(
                "exceptional catalog: unsupported format {} v{}",
                c.format, c.version
            )));
        }
        for t in &c.types {
            t.diagram()?;
        }
        Ok(c)
    }

    /// Built-in catalog unless the environment names another file.
    pub fn load() -> Result<Self> {
        match std::env::var_os(CATALOG_ENV) {
            Some(p) => {
                let src = std::fs::read_to_string(&p)
                    .map_err(|e| Error::Config(format!("{}: {}", p.to_string_lossy(), e)))?;
                Self::parse(&src)
            }
            None => Self::parse(EXCEPTIONAL_SOURCE),
        }
    }
}

/// Canonical codes of every diagram in the catalog classes of one size.
struct Expanded {
    by_code: HashMap<Vec<i64>, String>,
}

fn expand(cat: &ExceptionalCatalog, n: usize) -> Result<Expanded> {
    let mut by_code = HashMap::new();
    for t in cat.types.iter().filter(|t| t.nodes == n) {
        let limits = ScanLimits {
            weight_cutoff: 4,
            max_diagrams: 200_000,
        };
        let class = mutation_class(&t.diagram()?, limits)?.ok_or_else(|| {
            Error::Config(format!(
                "{}: class is not finite within the scan limits",
                t.name
            ))
        })?;
        for g in class {
            by_code.insert(canonical_form(&g).code, t.name.clone());
        }
    }
    Ok(Expanded { by_code })
}

/// Exceptional classes, expanded lazily per node count.
pub struct Exceptional {
    catalog: ExceptionalCatalog,
    cache: Mutex<HashMap<usize, &'static Expanded>>,
}

impl Exceptional {
    pub fn new(catalog: ExceptionalCatalog) -> Self {
        Exceptional {
            catalog,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn catalog(&self) -> &ExceptionalCatalog {
        &self.catalog
    }

    /// Name of the exceptional class containing `g`, if any.
    pub fn lookup(&self, g: &Diagram) -> Result<Option<String>> {
        let n = g.node_count();
        let mut cache = self.cache.lock().unwrap();
        let ex = match cache.get(&n) {
            Some(e) => *e,
            None => {
                // leaked on purpose: one table per node count for the life of the process
                let e: &'static Expanded = Box::leak(Box::new(expand(&self.catalog, n)?));
                cache.insert(n, e);
                e
            }
        };
        Ok(ex
            .by_code
            .get(&canonical_form(&g.uncolored()).code)
            .cloned())
    }

    pub fn class_size(&self, name: &str) -> Result<Option<usize>> {
        let Some(t) = self.catalog.types.iter().find(|t| t.name == name) else {
            return Ok(None);
        };
        let limits = ScanLimits {
            weight_cutoff: 4,
            max_diagrams: 200_000,
        };
        Ok(mutation_class(&t.diagram()?, limits)?.map(|c| c.len()))
    }
}

/// Shared instance for the default catalog location.
pub fn exceptional() -> Result<&'static Exceptional> {
    static E: OnceLock<std::result::Result<Exceptional, String>> = OnceLock::new();
    E.get_or_init(|| {
        ExceptionalCatalog::load()
            .map(Exceptional::new)
            .map_err(|e| e.to_string())
    })
    .as_ref()
    .map_err(|e| Error::Config(e.clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    FiniteSDecomposable,
    FiniteExceptional,
    FiniteSmallRank,
    Infinite,
    Undecided,
}

impl OutcomeKind {
    pub fn is_finite(self) -> bool {
        matches!(
            self,
            OutcomeKind::FiniteSDecomposable
                | OutcomeKind::FiniteExceptional
                | OutcomeKind::FiniteSmallRank
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Decomposition {
        decomposition: Decomposition,
    },
    Exceptional {
        class: String,
    },
    SmallRank {
        size: usize,
    },
    /// Weight of the heavy edge and the mutation path that produced it.
    WeightGrowth {
        weight: u64,
        path: Vec<NodeId>,
        /// The weight criterion comes from the literature, not from this crate.
        criterion: &'static str,
    },
    Unresolved {
        reason: String,
        certificate: Option<Certificate>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentVerdict {
    pub nodes: Vec<NodeId>,
    pub outcome: OutcomeKind,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: OutcomeKind,
    pub components: Vec<ComponentVerdict>,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub use_catalog: bool,
    pub scan: ScanLimits,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            use_catalog: true,
            scan: ScanLimits {
                weight_cutoff: 4,
                max_diagrams: 20_000,
            },
        }
    }
}

pub const WEIGHT_CRITERION: &str =
    "external: an edge of weight at least 5 in the mutation class implies an infinite class";

fn component(
    g: &Diagram,
    nodes: Vec<NodeId>,
    opts: &ClassifyOptions,
    ex: Option<&Exceptional>,
) -> Result<ComponentVerdict> {
    let sub = g.induced(&nodes).uncolored();
    let verdict = |outcome, evidence| {
        Ok(ComponentVerdict {
            nodes: nodes.clone(),
            outcome,
            evidence,
        })
    };
    if sub.node_count() < 3 {
        return verdict(
            OutcomeKind::FiniteSmallRank,
            Evidence::SmallRank {
                size: sub.node_count(),
            },
        );
    }
    if let Some(ex) = ex {
        if let Some(class) = ex.lookup(&sub)? {
            return verdict(
                OutcomeKind::FiniteExceptional,
                Evidence::Exceptional { class },
            );
        }
    }
    let out = s_decompose(&sub, &DecomposeOptions::default())?;
    if out.decomposable {
        let mut d = out
            .decompositions
            .into_iter()
            .next()
            .expect("decomposable has a decomposition");
        d.node_count = g.node_count();
        for b in &mut d.blocks {
            for v in &mut b.nodes {
                *v = nodes[*v];
            }
        }
        d.normalize();
        return verdict(
            OutcomeKind::FiniteSDecomposable,
            Evidence::Decomposition { decomposition: d },
        );
    }
    if ex.is_none() {
        return verdict(
            OutcomeKind::Undecided,
            Evidence::Unresolved {
                reason: "not s-decomposable and the exceptional catalog is disabled".into(),
                certificate: out.certificate,
            },
        );
    }
    match scan_mutation_class(&sub, opts.scan)? {
        ScanOutcome::HeavyEdge { weight, path } => verdict(
            OutcomeKind::Infinite,
            Evidence::WeightGrowth {
                weight,
                path: path.iter().map(|&k| nodes[k]).collect(),
                criterion: WEIGHT_CRITERION,
            },
        ),
        ScanOutcome::Exhausted { size } => verdict(
            OutcomeKind::Undecided,
            Evidence::Unresolved {
                reason: format!(
                    "finite class of {} diagrams that is neither s-decomposable nor in the exceptional catalog",
                    size
                ),
                certificate: out.certificate,
            },
        ),
        ScanOutcome::Budget { visited } => verdict(
            OutcomeKind::Undecided,
            Evidence::Unresolved {
                reason: format!("scan stopped after {} diagrams without a heavy edge", visited),
                certificate: out.certificate,
            },
        ),
    }
}

pub fn classify_diagram(g: &Diagram, opts: &ClassifyOptions) -> Result<Verdict> {
    let ex = if opts.use_catalog {
        Some(exceptional()?)
    } else {
        None
    };
    let mut components = Vec::new();
    for nodes in g.components() {
        components.push(component(g, nodes, opts, ex)?);
    }
    let outcome = if components
        .iter()
        .any(|c| c.outcome == OutcomeKind::Infinite)
    {
        OutcomeKind::Infinite
    } else if components
        .iter()
        .any(|c| c.outcome == OutcomeKind::Undecided)
    {
        OutcomeKind::Undecided
    } else if components
        .iter()
        .any(|c| c.outcome == OutcomeKind::FiniteExceptional)
    {
        OutcomeKind::FiniteExceptional
    } else if components
        .iter()
        .any(|c| c.outcome == OutcomeKind::FiniteSDecomposable)
    {
        OutcomeKind::FiniteSDecomposable
    } else {
        OutcomeKind::FiniteSmallRank
    };
    Ok(Verdict {
        outcome,
        components,
    })
}

pub fn classify(b: &ExchangeMatrix, opts: &ClassifyOptions) -> Result<Verdict> {
    classify_diagram(&matrix_to_diagram(b), opts)
}
