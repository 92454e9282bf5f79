//! Tactics: trees of actions under SEQ / ANYOF / FIRSTOF combinators.
//!
//! [`Tactic`] is the construction form. Binding it to a goal freezes it
//! into a [`TacticTree`], an immutable arena with parent back-links over
//! which `first` and `next` are computed. The runtime keeps a cursor (a
//! [`TacticNodeId`]) into the tree instead of mutating it.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::action::Action;
use crate::value::Value;

pub enum Tactic<S> {
    Primitive(Action<S>),
    Seq(Vec<Tactic<S>>),
    AnyOf(Vec<Tactic<S>>),
    FirstOf(Vec<Tactic<S>>),
}

impl<S> Clone for Tactic<S> {
    fn clone(&self) -> Self {
        match self {
            Tactic::Primitive(a) => Tactic::Primitive(a.clone()),
            Tactic::Seq(c) => Tactic::Seq(c.clone()),
            Tactic::AnyOf(c) => Tactic::AnyOf(c.clone()),
            Tactic::FirstOf(c) => Tactic::FirstOf(c.clone()),
        }
    }
}

pub fn lift<S>(action: Action<S>) -> Tactic<S> {
    Tactic::Primitive(action)
}

pub fn seq<S>(children: Vec<Tactic<S>>) -> Tactic<S> {
    Tactic::Seq(children)
}

pub fn any_of<S>(children: Vec<Tactic<S>>) -> Tactic<S> {
    Tactic::AnyOf(children)
}

pub fn first_of<S>(children: Vec<Tactic<S>>) -> Tactic<S> {
    Tactic::FirstOf(children)
}

impl<S> Action<S> {
    pub fn lift(self) -> Tactic<S> {
        Tactic::Primitive(self)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TacticError {
    #[error("combinator without children")]
    EmptyCombinator,
    #[error("action id `{0}` used twice in one tactic")]
    DuplicateAction(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TacticNodeId(usize);

impl TacticNodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TacticKind {
    Primitive,
    Seq,
    AnyOf,
    FirstOf,
}

impl TacticKind {
    pub fn label(self) -> &'static str {
        match self {
            TacticKind::Primitive => "PRIMITIVE",
            TacticKind::Seq => "SEQ",
            TacticKind::AnyOf => "ANYOF",
            TacticKind::FirstOf => "FIRSTOF",
        }
    }
}

struct Node<S> {
    kind: TacticKind,
    action: Option<Action<S>>,
    children: Vec<TacticNodeId>,
    parent: Option<TacticNodeId>,
    child_index: usize,
}

/// An enabled action together with the witness its guard produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub node: TacticNodeId,
    pub witness: Value,
}

pub struct TacticTree<S> {
    nodes: Vec<Node<S>>,
}

impl<S> TacticTree<S> {
    pub fn new(tactic: Tactic<S>) -> Result<Self, TacticError> {
        let mut tree = TacticTree { nodes: Vec::new() };
        let mut seen = HashSet::new();
        tree.insert(tactic, None, 0, &mut seen)?;
        Ok(tree)
    }

    fn insert(
        &mut self,
        tactic: Tactic<S>,
        parent: Option<TacticNodeId>,
        child_index: usize,
        seen: &mut HashSet<String>,
    ) -> Result<TacticNodeId, TacticError> {
        let id = TacticNodeId(self.nodes.len());
        let (kind, children) = match tactic {
            Tactic::Primitive(action) => {
                if !seen.insert(action.id().to_string()) {
                    return Err(TacticError::DuplicateAction(action.id().to_string()));
                }
                self.nodes.push(Node {
                    kind: TacticKind::Primitive,
                    action: Some(action),
                    children: Vec::new(),
                    parent,
                    child_index,
                });
                return Ok(id);
            }
            Tactic::Seq(c) => (TacticKind::Seq, c),
            Tactic::AnyOf(c) => (TacticKind::AnyOf, c),
            Tactic::FirstOf(c) => (TacticKind::FirstOf, c),
        };
        if children.is_empty() {
            return Err(TacticError::EmptyCombinator);
        }
        self.nodes.push(Node {
            kind,
            action: None,
            children: Vec::new(),
            parent,
            child_index,
        });
        for (i, child) in children.into_iter().enumerate() {
            let cid = self.insert(child, Some(id), i, seen)?;
            self.nodes[id.0].children.push(cid);
        }
        Ok(id)
    }

    pub fn root(&self) -> TacticNodeId {
        TacticNodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = TacticNodeId> {
        (0..self.nodes.len()).map(TacticNodeId)
    }

    pub fn kind(&self, id: TacticNodeId) -> TacticKind {
        self.nodes[id.0].kind
    }

    pub fn parent(&self, id: TacticNodeId) -> Option<TacticNodeId> {
        self.nodes[id.0].parent
    }

    pub fn children(&self, id: TacticNodeId) -> &[TacticNodeId] {
        &self.nodes[id.0].children
    }

    pub fn child_index(&self, id: TacticNodeId) -> usize {
        self.nodes[id.0].child_index
    }

    pub fn action(&self, id: TacticNodeId) -> Option<&Action<S>> {
        self.nodes[id.0].action.as_ref()
    }

    /// The leaf holding the action with this id.
    pub fn leaf(&self, action_id: &str) -> Option<TacticNodeId> {
        self.node_ids()
            .find(|&n| self.action(n).is_some_and(|a| a.id() == action_id))
    }

    pub fn leaves(&self) -> impl Iterator<Item = TacticNodeId> + '_ {
        self.node_ids().filter(|&n| self.nodes[n.0].action.is_some())
    }

    /// Enabled actions that may start the sub-tactic at `node`, in leaf
    /// order, each with the witness from a single guard evaluation.
    pub fn first(&self, node: TacticNodeId, state: &S) -> Vec<Candidate> {
        let mut out = Vec::new();
        self.collect_first(node, state, &mut out);
        out
    }

    fn collect_first(&self, node: TacticNodeId, state: &S, out: &mut Vec<Candidate>) {
        let n = &self.nodes[node.0];
        match n.kind {
            TacticKind::Primitive => {
                let action = n.action.as_ref().expect("primitive node holds an action");
                if let Some(witness) = action.witness(state) {
                    out.push(Candidate { node, witness });
                }
            }
            TacticKind::Seq => self.collect_first(n.children[0], state, out),
            TacticKind::AnyOf => {
                for &c in &n.children {
                    self.collect_first(c, state, out);
                }
            }
            TacticKind::FirstOf => {
                for &c in &n.children {
                    let before = out.len();
                    self.collect_first(c, state, out);
                    if out.len() > before {
                        break;
                    }
                }
            }
        }
    }

    /// Action ids of [`first`](Self::first).
    pub fn first_ids(&self, node: TacticNodeId, state: &S) -> Vec<&str> {
        self.first(node, state)
            .into_iter()
            .map(|c| self.nodes[c.node.0].action.as_ref().unwrap().id())
            .collect()
    }

    pub fn enabled(&self, node: TacticNodeId, state: &S) -> bool {
        !self.first(node, state).is_empty()
    }

    /// The sub-tactic scheduled after `node` completes.
    pub fn next(&self, node: TacticNodeId) -> TacticNodeId {
        let mut u = node;
        loop {
            let Some(p) = self.nodes[u.0].parent else {
                return u;
            };
            let parent = &self.nodes[p.0];
            let i = self.nodes[u.0].child_index;
            if parent.kind == TacticKind::Seq && i + 1 < parent.children.len() {
                return parent.children[i + 1];
            }
            u = p;
        }
    }

    /// Candidates for the tick after `completed` ran.
    pub fn next_actions(&self, completed: TacticNodeId, state: &S) -> Vec<Candidate> {
        self.first(self.next(completed), state)
    }

    /// Child indices from the root down to `node`.
    pub fn path(&self, node: TacticNodeId) -> Vec<usize> {
        let mut path = Vec::new();
        let mut u = node;
        while let Some(p) = self.nodes[u.0].parent {
            path.push(self.nodes[u.0].child_index);
            u = p;
        }
        path.reverse();
        path
    }

    /// `root`, `root.2`, `root.2.0`, ...
    pub fn path_string(&self, node: TacticNodeId) -> String {
        let mut s = String::from("root");
        for i in self.path(node) {
            let _ = write!(s, ".{i}");
        }
        s
    }

    /// One node per line, two spaces of indent per depth.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(self.root(), 0, &mut out);
        out
    }

    fn render_into(&self, node: TacticNodeId, depth: usize, out: &mut String) {
        let n = &self.nodes[node.0];
        out.push_str(&"  ".repeat(depth));
        out.push_str(n.kind.label());
        if let Some(a) = &n.action {
            out.push(' ');
            out.push_str(a.id());
        }
        out.push('\n');
        for &c in &n.children {
            self.render_into(c, depth + 1, out);
        }
    }
}
