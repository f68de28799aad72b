//! Class models: declarations, validation and the per-class feature tallies
//! consumed by the MOOD formulas.
//!
//! A [`ClassModel`] can hold invalid content (dangling names, inheritance
//! cycles); [`validate`] reports every violation as a [`Diagnostic`] and the
//! tally operations refuse models whose hierarchy cannot be resolved.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use petgraph::algo::{tarjan_scc, toposort};
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;
use thiserror::Error;

/// Words reserved by the OMDL grammar; they cannot name classes or features.
pub const KEYWORDS: [&str; 8] = [
    "class",
    "extends",
    "method",
    "attribute",
    "uses",
    "overrides",
    "visible",
    "hidden",
];

/// `[A-Za-z_][A-Za-z0-9_]*`, excluding keywords.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    #[default]
    Visible,
    Hidden,
}

/// The ancestor method a method redefines, written `Class.method`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OverrideTarget {
    pub class: String,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodKind {
    New,
    Override(OverrideTarget),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MethodDecl {
    pub name: String,
    pub visibility: Visibility,
    pub kind: MethodKind,
}

impl MethodDecl {
    pub fn new(name: impl Into<String>, visibility: Visibility) -> Self {
        MethodDecl {
            name: name.into(),
            visibility,
            kind: MethodKind::New,
        }
    }

    pub fn visible(name: impl Into<String>) -> Self {
        Self::new(name, Visibility::Visible)
    }

    pub fn hidden(name: impl Into<String>) -> Self {
        Self::new(name, Visibility::Hidden)
    }

    /// Turns this declaration into an override of `class.method`.
    pub fn overriding(mut self, class: impl Into<String>, method: impl Into<String>) -> Self {
        self.kind = MethodKind::Override(OverrideTarget {
            class: class.into(),
            method: method.into(),
        });
        self
    }

    pub fn override_target(&self) -> Option<&OverrideTarget> {
        match &self.kind {
            MethodKind::New => None,
            MethodKind::Override(t) => Some(t),
        }
    }

    pub fn is_override(&self) -> bool {
        matches!(self.kind, MethodKind::Override(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AttributeDecl {
    pub name: String,
    pub visibility: Visibility,
}

impl AttributeDecl {
    pub fn visible(name: impl Into<String>) -> Self {
        AttributeDecl {
            name: name.into(),
            visibility: Visibility::Visible,
        }
    }

    pub fn hidden(name: impl Into<String>) -> Self {
        AttributeDecl {
            name: name.into(),
            visibility: Visibility::Hidden,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ClassDecl {
    pub name: String,
    pub parents: Vec<String>,
    pub methods: Vec<MethodDecl>,
    pub attributes: Vec<AttributeDecl>,
    /// Client edges: classes whose services this class uses.
    pub uses: Vec<String>,
}

impl ClassDecl {
    pub fn new(name: impl Into<String>) -> Self {
        ClassDecl {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn extends(mut self, parent: impl Into<String>) -> Self {
        self.parents.push(parent.into());
        self
    }

    pub fn method(mut self, method: MethodDecl) -> Self {
        self.methods.push(method);
        self
    }

    pub fn attribute(mut self, attribute: AttributeDecl) -> Self {
        self.attributes.push(attribute);
        self
    }

    pub fn uses(mut self, class: impl Into<String>) -> Self {
        self.uses.push(class.into());
        self
    }

    fn declares_method(&self, name: &str) -> bool {
        self.methods.iter().any(|m| m.name == name)
    }

    /// Sort every list so that two declarations differing only in member
    /// order compare equal.
    fn canonicalize(&mut self) {
        self.parents.sort();
        self.methods.sort();
        self.attributes.sort();
        self.uses.sort();
        self.uses.dedup();
    }
}

/// A system under measurement: an ordered collection of class declarations.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct ClassModel {
    classes: Vec<ClassDecl>,
}

impl ClassModel {
    pub fn new(classes: Vec<ClassDecl>) -> Self {
        ClassModel { classes }
    }

    pub fn classes(&self) -> &[ClassDecl] {
        &self.classes
    }

    pub fn class(&self, name: &str) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// TC: total number of classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Order-insensitive form used for structural comparison.
    pub fn canonical(&self) -> ClassModel {
        let mut classes = self.classes.clone();
        for c in &mut classes {
            c.canonicalize();
        }
        classes.sort_by(|a, b| a.name.cmp(&b.name));
        ClassModel { classes }
    }

    pub fn structurally_eq(&self, other: &ClassModel) -> bool {
        self.canonical() == other.canonical()
    }
}

impl FromIterator<ClassDecl> for ClassModel {
    fn from_iter<I: IntoIterator<Item = ClassDecl>>(iter: I) -> Self {
        ClassModel::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    EmptyModel,
    InvalidName,
    DuplicateClass,
    DuplicateMethod,
    DuplicateAttribute,
    SelfReference,
    UnresolvedName,
    Cycle,
    Shadowing,
    AttributeShadowing,
    BadOverride,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::EmptyModel => "EMPTY_MODEL",
            DiagnosticCode::InvalidName => "INVALID_NAME",
            DiagnosticCode::DuplicateClass => "DUPLICATE_CLASS",
            DiagnosticCode::DuplicateMethod => "DUPLICATE_METHOD",
            DiagnosticCode::DuplicateAttribute => "DUPLICATE_ATTRIBUTE",
            DiagnosticCode::SelfReference => "SELF_REFERENCE",
            DiagnosticCode::UnresolvedName => "UNRESOLVED_NAME",
            DiagnosticCode::Cycle => "CYCLE",
            DiagnosticCode::Shadowing => "SHADOWING",
            DiagnosticCode::AttributeShadowing => "ATTRIBUTE_SHADOWING",
            DiagnosticCode::BadOverride => "BAD_OVERRIDE",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
    /// `None` only for model-level problems such as an empty model.
    pub class: Option<String>,
}

impl Diagnostic {
    fn new(code: DiagnosticCode, class: Option<&str>, message: String) -> Self {
        Diagnostic {
            code,
            message,
            class: class.map(str::to_owned),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.class {
            Some(c) => write!(f, "{} [{}]: {}", self.code, c, self.message),
            None => write!(f, "{}: {}", self.code, self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("UNKNOWN_CLASS: no class named `{0}`")]
    UnknownClass(String),
    #[error("inheritance hierarchy is not resolvable: {0}")]
    Unresolvable(String),
}

/// Per-class counts feeding the MOOD formulas.
///
/// `m_*` count methods, `a_*` attributes: `v` visible, `h` hidden, `d`
/// defined locally, `i` inherited, `a` available (`d + i`), `n` new,
/// `o` overriding. `dc` is the number of strict descendants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ClassTallies {
    pub m_v: usize,
    pub m_h: usize,
    pub m_d: usize,
    pub m_i: usize,
    pub m_a: usize,
    pub m_n: usize,
    pub m_o: usize,
    pub a_v: usize,
    pub a_h: usize,
    pub a_d: usize,
    pub a_i: usize,
    pub a_a: usize,
    pub dc: usize,
}

/// A feature is identified by the class that declares it and its name; the
/// same ancestor feature reached along two inheritance paths is one feature.
type FeatureId = (usize, String);

/// Resolved inheritance structure of a model whose parent edges all resolve
/// and form a DAG.
#[derive(Debug)]
pub(crate) struct Hierarchy<'m> {
    model: &'m ClassModel,
    index: HashMap<&'m str, usize>,
    parents: Vec<Vec<usize>>,
    /// Parents before children.
    topo: Vec<usize>,
}

impl<'m> Hierarchy<'m> {
    pub(crate) fn build(model: &'m ClassModel) -> Result<Self, ModelError> {
        let mut index = HashMap::with_capacity(model.len());
        for (i, c) in model.classes.iter().enumerate() {
            if index.insert(c.name.as_str(), i).is_some() {
                return Err(ModelError::Unresolvable(format!(
                    "class `{}` is declared twice",
                    c.name
                )));
            }
        }
        let mut graph: DiGraph<usize, ()> = DiGraph::with_capacity(model.len(), 0);
        let nodes: Vec<NodeIndex> = (0..model.len()).map(|i| graph.add_node(i)).collect();
        let mut parents = Vec::with_capacity(model.len());
        for (i, c) in model.classes.iter().enumerate() {
            let mut ps = Vec::new();
            for p in &c.parents {
                let j = *index.get(p.as_str()).ok_or_else(|| {
                    ModelError::Unresolvable(format!("`{}` extends unknown class `{p}`", c.name))
                })?;
                if !ps.contains(&j) {
                    ps.push(j);
                    graph.add_edge(nodes[j], nodes[i], ());
                }
            }
            parents.push(ps);
        }
        let topo = toposort(&graph, None)
            .map_err(|cycle| {
                ModelError::Unresolvable(format!(
                    "inheritance cycle through `{}`",
                    model.classes[graph[cycle.node_id()]].name
                ))
            })?
            .into_iter()
            .map(|n| graph[n])
            .collect();
        Ok(Hierarchy {
            model,
            index,
            parents,
            topo,
        })
    }

    pub(crate) fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Strict ancestors of every class, indexed by class position.
    fn ancestors(&self) -> Vec<HashSet<usize>> {
        let mut anc: Vec<HashSet<usize>> = vec![HashSet::new(); self.model.len()];
        for &c in &self.topo {
            let mut set = HashSet::new();
            for &p in &self.parents[c] {
                set.insert(p);
                set.extend(anc[p].iter().copied());
            }
            anc[c] = set;
        }
        anc
    }

    /// Methods and attributes available in each class (local plus inherited),
    /// as feature identities.
    fn available(&self) -> (Vec<BTreeSet<FeatureId>>, Vec<BTreeSet<FeatureId>>) {
        let n = self.model.len();
        let mut methods: Vec<BTreeSet<FeatureId>> = vec![BTreeSet::new(); n];
        let mut attrs: Vec<BTreeSet<FeatureId>> = vec![BTreeSet::new(); n];
        for &c in &self.topo {
            let decl = &self.model.classes[c];
            let mut ms: BTreeSet<FeatureId> =
                decl.methods.iter().map(|m| (c, m.name.clone())).collect();
            let mut atts: BTreeSet<FeatureId> = decl
                .attributes
                .iter()
                .map(|a| (c, a.name.clone()))
                .collect();
            for &p in &self.parents[c] {
                ms.extend(
                    methods[p]
                        .iter()
                        .filter(|(_, name)| !decl.declares_method(name))
                        .cloned(),
                );
                atts.extend(attrs[p].iter().cloned());
            }
            methods[c] = ms;
            attrs[c] = atts;
        }
        (methods, attrs)
    }

    pub(crate) fn tallies(&self) -> Vec<ClassTallies> {
        let anc = self.ancestors();
        let (methods, attrs) = self.available();
        let mut dc = vec![0usize; self.model.len()];
        for set in &anc {
            for &a in set {
                dc[a] += 1;
            }
        }
        self.model
            .classes
            .iter()
            .enumerate()
            .map(|(i, decl)| {
                let m_h = decl
                    .methods
                    .iter()
                    .filter(|m| m.visibility == Visibility::Hidden)
                    .count();
                let m_o = decl.methods.iter().filter(|m| m.is_override()).count();
                let a_h = decl
                    .attributes
                    .iter()
                    .filter(|a| a.visibility == Visibility::Hidden)
                    .count();
                let m_d = decl.methods.len();
                let a_d = decl.attributes.len();
                let m_i = methods[i].iter().filter(|(origin, _)| *origin != i).count();
                let a_i = attrs[i].iter().filter(|(origin, _)| *origin != i).count();
                ClassTallies {
                    m_v: m_d - m_h,
                    m_h,
                    m_d,
                    m_i,
                    m_a: m_d + m_i,
                    m_n: m_d - m_o,
                    m_o,
                    a_v: a_d - a_h,
                    a_h,
                    a_d,
                    a_i,
                    a_a: a_d + a_i,
                    dc: dc[i],
                }
            })
            .collect()
    }

    pub(crate) fn is_strict_ancestor(&self, ancestor: usize, of: usize) -> bool {
        let mut stack = self.parents[of].clone();
        let mut seen = HashSet::new();
        while let Some(c) = stack.pop() {
            if c == ancestor {
                return true;
            }
            if seen.insert(c) {
                stack.extend(self.parents[c].iter().copied());
            }
        }
        false
    }
}

/// Checks every model invariant; an empty result means the model is valid.
pub fn validate(model: &ClassModel) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let mut out = Vec::new();
    if model.is_empty() {
        out.push(Diagnostic::new(
            EmptyModel,
            None,
            "model declares no classes".into(),
        ));
        return out;
    }

    let names: HashSet<&str> = model.classes.iter().map(|c| c.name.as_str()).collect();
    let mut seen_classes = HashSet::new();
    for c in &model.classes {
        let cn = Some(c.name.as_str());
        if !is_identifier(&c.name) {
            out.push(Diagnostic::new(
                InvalidName,
                cn,
                format!("`{}` is not a valid class name", c.name),
            ));
        }
        if !seen_classes.insert(c.name.as_str()) {
            out.push(Diagnostic::new(
                DuplicateClass,
                cn,
                format!("class `{}` is declared more than once", c.name),
            ));
        }
        let mut seen = HashSet::new();
        for m in &c.methods {
            if !is_identifier(&m.name) {
                out.push(Diagnostic::new(
                    InvalidName,
                    cn,
                    format!("`{}` is not a valid method name", m.name),
                ));
            }
            if !seen.insert(m.name.as_str()) {
                out.push(Diagnostic::new(
                    DuplicateMethod,
                    cn,
                    format!("method `{}` is declared more than once", m.name),
                ));
            }
            if let Some(t) = m.override_target() {
                if !names.contains(t.class.as_str()) {
                    out.push(Diagnostic::new(
                        UnresolvedName,
                        cn,
                        format!(
                            "method `{}` overrides a method of unknown class `{}`",
                            m.name, t.class
                        ),
                    ));
                }
            }
        }
        let mut seen = HashSet::new();
        for a in &c.attributes {
            if !is_identifier(&a.name) {
                out.push(Diagnostic::new(
                    InvalidName,
                    cn,
                    format!("`{}` is not a valid attribute name", a.name),
                ));
            }
            if !seen.insert(a.name.as_str()) {
                out.push(Diagnostic::new(
                    DuplicateAttribute,
                    cn,
                    format!("attribute `{}` is declared more than once", a.name),
                ));
            }
        }
        for (what, list) in [("extends", &c.parents), ("uses", &c.uses)] {
            for target in list {
                if *target == c.name {
                    out.push(Diagnostic::new(
                        SelfReference,
                        cn,
                        format!("class `{}` {what} itself", c.name),
                    ));
                } else if !names.contains(target.as_str()) {
                    out.push(Diagnostic::new(
                        UnresolvedName,
                        cn,
                        format!("class `{}` {what} unknown class `{target}`", c.name),
                    ));
                }
            }
        }
    }

    out.extend(cycle_diagnostics(model));

    // Feature-level checks need a resolvable hierarchy.
    if out.is_empty() {
        if let Ok(h) = Hierarchy::build(model) {
            out.extend(feature_diagnostics(model, &h));
        }
    }
    out
}

fn cycle_diagnostics(model: &ClassModel) -> Vec<Diagnostic> {
    let mut graph: DiGraph<usize, ()> = DiGraph::new();
    let mut first: HashMap<&str, NodeIndex> = HashMap::new();
    for (i, c) in model.classes.iter().enumerate() {
        let n = graph.add_node(i);
        first.entry(c.name.as_str()).or_insert(n);
    }
    for (i, c) in model.classes.iter().enumerate() {
        for p in &c.parents {
            if *p == c.name {
                continue;
            }
            if let Some(&pn) = first.get(p.as_str()) {
                graph.add_edge(NodeIndex::new(i), pn, ());
            }
        }
    }
    let mut out = Vec::new();
    for scc in tarjan_scc(&graph) {
        if scc.len() < 2 {
            continue;
        }
        let mut members: Vec<&str> = scc
            .iter()
            .map(|&n| model.classes[graph[n]].name.as_str())
            .collect();
        members.sort_unstable();
        out.push(Diagnostic::new(
            DiagnosticCode::Cycle,
            Some(members[0]),
            format!("inheritance cycle among {}", members.join(", ")),
        ));
    }
    out.sort_by(|a, b| a.class.cmp(&b.class));
    out
}

fn feature_diagnostics(model: &ClassModel, h: &Hierarchy<'_>) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let (methods, attrs) = h.available();
    let mut out = Vec::new();
    for (i, c) in model.classes.iter().enumerate() {
        let cn = Some(c.name.as_str());
        let inherited_methods: HashSet<&str> = h.parents[i]
            .iter()
            .flat_map(|&p| methods[p].iter().map(|(_, n)| n.as_str()))
            .collect();
        let inherited_attrs: HashSet<&str> = h.parents[i]
            .iter()
            .flat_map(|&p| attrs[p].iter().map(|(_, n)| n.as_str()))
            .collect();
        for m in &c.methods {
            match m.override_target() {
                None => {
                    if inherited_methods.contains(m.name.as_str()) {
                        out.push(Diagnostic::new(
                            Shadowing,
                            cn,
                            format!(
                                "method `{}` hides an inherited method; declare it with `overrides`",
                                m.name
                            ),
                        ));
                    }
                }
                Some(t) => {
                    let Some(target) = h.position(&t.class) else {
                        continue;
                    };
                    if !h.is_strict_ancestor(target, i) {
                        out.push(Diagnostic::new(
                            BadOverride,
                            cn,
                            format!(
                                "method `{}` overrides `{}.{}` but `{}` is not an ancestor",
                                m.name, t.class, t.method, t.class
                            ),
                        ));
                    } else if !methods[target].iter().any(|(_, n)| *n == t.method) {
                        out.push(Diagnostic::new(
                            BadOverride,
                            cn,
                            format!(
                                "method `{}` overrides `{}.{}` which does not exist",
                                m.name, t.class, t.method
                            ),
                        ));
                    } else if t.method != m.name {
                        out.push(Diagnostic::new(
                            BadOverride,
                            cn,
                            format!(
                                "method `{}` cannot override differently named `{}.{}`",
                                m.name, t.class, t.method
                            ),
                        ));
                    }
                }
            }
        }
        for a in &c.attributes {
            if inherited_attrs.contains(a.name.as_str()) {
                out.push(Diagnostic::new(
                    AttributeShadowing,
                    cn,
                    format!("attribute `{}` shadows an inherited attribute", a.name),
                ));
            }
        }
    }
    out
}

/// Feature tallies of one class.
pub fn tallies(model: &ClassModel, class: &str) -> Result<ClassTallies, ModelError> {
    let h = Hierarchy::build(model)?;
    let i = h
        .position(class)
        .ok_or_else(|| ModelError::UnknownClass(class.to_owned()))?;
    Ok(h.tallies()[i])
}

/// Tallies for every class, in model order.
pub fn all_tallies(model: &ClassModel) -> Result<Vec<ClassTallies>, ModelError> {
    Ok(Hierarchy::build(model)?.tallies())
}

/// Number of strict descendants of `class`.
pub fn descendants(model: &ClassModel, class: &str) -> Result<usize, ModelError> {
    let h = Hierarchy::build(model)?;
    let i = h
        .position(class)
        .ok_or_else(|| ModelError::UnknownClass(class.to_owned()))?;
    Ok((0..model.len())
        .filter(|&d| h.is_strict_ancestor(i, d))
        .count())
}
