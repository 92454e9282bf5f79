//! Goals and goal structures.
//!
//! A [`GoalStructure`] is the construction form: goals at the leaves, and
//! SEQ / FIRSTOF / REPEAT above them. An agent works on a [`GoalTree`], the
//! stateful arena built from it, which carries per-node status and budget
//! and supports the dynamic `add_after` / `add_before` rewrites.
//!
//! Statuses are propagated eagerly when a leaf is marked, so selecting the
//! current goal is a plain descent: SEQ picks its leftmost unsolved child,
//! FIRSTOF its leftmost unfailed child, REPEAT its only child.

use std::fmt;
use std::rc::Rc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::budget::{allocation, AllocationEvent, Budget, BudgetLedger};
use crate::tactic::{Tactic, TacticError, TacticTree};
use crate::value::Value;

type Predicate = Rc<dyn Fn(&Value) -> bool>;

/// A goal `g` bound to the tactic meant to solve it.
pub struct Goal<S> {
    name: String,
    evaluate: Predicate,
    tactic: Rc<TacticTree<S>>,
}

impl<S> Clone for Goal<S> {
    fn clone(&self) -> Self {
        Goal {
            name: self.name.clone(),
            evaluate: Rc::clone(&self.evaluate),
            tactic: Rc::clone(&self.tactic),
        }
    }
}

impl<S> fmt::Debug for Goal<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Goal").field("name", &self.name).finish_non_exhaustive()
    }
}

impl<S> Goal<S> {
    pub fn new(
        name: impl Into<String>,
        evaluate: impl Fn(&Value) -> bool + 'static,
        tactic: Tactic<S>,
    ) -> Result<Self, TacticError> {
        Ok(Self::with_tree(name, evaluate, Rc::new(TacticTree::new(tactic)?)))
    }

    /// Share an already frozen tactic tree.
    pub fn with_tree(
        name: impl Into<String>,
        evaluate: impl Fn(&Value) -> bool + 'static,
        tactic: Rc<TacticTree<S>>,
    ) -> Self {
        Goal {
            name: name.into(),
            evaluate: Rc::new(evaluate),
            tactic,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn evaluate(&self, proposal: &Value) -> bool {
        (self.evaluate)(proposal)
    }

    pub fn tactic(&self) -> &Rc<TacticTree<S>> {
        &self.tactic
    }

    pub fn lift(self) -> GoalStructure<S> {
        lift_goal(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GoalStatus {
    Unstarted,
    InProgress,
    Solved,
    Failed,
}

impl GoalStatus {
    pub fn is_terminal(self) -> bool {
        matches!(self, GoalStatus::Solved | GoalStatus::Failed)
    }

    fn label(self) -> &'static str {
        match self {
            GoalStatus::Unstarted => "UNSTARTED",
            GoalStatus::InProgress => "INPROGRESS",
            GoalStatus::Solved => "SOLVED",
            GoalStatus::Failed => "FAILED",
        }
    }
}

pub enum StructureKind<S> {
    Lift(Goal<S>),
    Seq(Vec<GoalStructure<S>>),
    FirstOf(Vec<GoalStructure<S>>),
    Repeat(Box<GoalStructure<S>>),
}

pub struct GoalStructure<S> {
    pub kind: StructureKind<S>,
    pub bmax: Budget,
    pub label: Option<String>,
}

pub fn lift_goal<S>(goal: Goal<S>) -> GoalStructure<S> {
    GoalStructure::from_kind(StructureKind::Lift(goal))
}

pub fn seq<S>(children: Vec<GoalStructure<S>>) -> GoalStructure<S> {
    GoalStructure::from_kind(StructureKind::Seq(children))
}

pub fn first_of<S>(children: Vec<GoalStructure<S>>) -> GoalStructure<S> {
    GoalStructure::from_kind(StructureKind::FirstOf(children))
}

pub fn repeat<S>(child: GoalStructure<S>) -> GoalStructure<S> {
    GoalStructure::from_kind(StructureKind::Repeat(Box::new(child)))
}

impl<S> GoalStructure<S> {
    fn from_kind(kind: StructureKind<S>) -> Self {
        GoalStructure {
            kind,
            bmax: Budget::Unbounded,
            label: None,
        }
    }

    pub fn with_bmax(mut self, bmax: impl Into<Budget>) -> Self {
        self.bmax = bmax.into();
        self
    }

    pub fn named(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Set `bmax` on every node whose goal name or label is `name`.
    /// Returns the number of nodes changed.
    pub fn override_bmax(&mut self, name: &str, bmax: Budget) -> usize {
        let here = match &self.kind {
            StructureKind::Lift(g) => g.name == name,
            _ => false,
        } || self.label.as_deref() == Some(name);
        if here {
            self.bmax = bmax;
        }
        let below: usize = match &mut self.kind {
            StructureKind::Lift(_) => 0,
            StructureKind::Seq(c) | StructureKind::FirstOf(c) => {
                c.iter_mut().map(|c| c.override_bmax(name, bmax)).sum()
            }
            StructureKind::Repeat(c) => c.override_bmax(name, bmax),
        };
        usize::from(here) + below
    }

    /// Term rendering, e.g. `SEQ(REPEAT(SEQ(G1,G2)),G3)`.
    pub fn shape(&self) -> String {
        let (head, children): (&str, Vec<&GoalStructure<S>>) = match &self.kind {
            StructureKind::Lift(g) => return g.name.clone(),
            StructureKind::Seq(c) => ("SEQ", c.iter().collect()),
            StructureKind::FirstOf(c) => ("FIRSTOF", c.iter().collect()),
            StructureKind::Repeat(c) => ("REPEAT", vec![c.as_ref()]),
        };
        let inner: Vec<String> = children.iter().map(|c| c.shape()).collect();
        format!("{head}({})", inner.join(","))
    }
}

/// A queued rewrite requested from inside an action effect.
pub enum GoalEdit<S> {
    After(GoalStructure<S>),
    Before(GoalStructure<S>, Budget),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GoalNodeId(usize);

impl GoalNodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GoalError {
    #[error("no current goal")]
    NoCurrentGoal,
    #[error("goal node {0:?} is not the current goal")]
    NotCurrent(GoalNodeId),
    #[error("goal combinator without children")]
    EmptyCombinator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoalEvent {
    Adopted(String),
    Solved(String),
    Failed(String),
    /// A REPEAT node restarted its child.
    Reset(String),
}

impl fmt::Display for GoalEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoalEvent::Adopted(g) => write!(f, "adopted:{g}"),
            GoalEvent::Solved(g) => write!(f, "solved:{g}"),
            GoalEvent::Failed(g) => write!(f, "failed:{g}"),
            GoalEvent::Reset(g) => write!(f, "reset:{g}"),
        }
    }
}

impl Serialize for GoalEvent {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoalKind {
    Lift,
    Seq,
    FirstOf,
    Repeat,
}

impl GoalKind {
    fn label(self) -> &'static str {
        match self {
            GoalKind::Lift => "LIFT",
            GoalKind::Seq => "SEQ",
            GoalKind::FirstOf => "FIRSTOF",
            GoalKind::Repeat => "REPEAT",
        }
    }
}

struct Node<S> {
    kind: GoalKind,
    goal: Option<Goal<S>>,
    label: Option<String>,
    children: Vec<GoalNodeId>,
    parent: Option<GoalNodeId>,
    child_index: usize,
    status: GoalStatus,
    bmax: Budget,
    remaining: Option<Budget>,
    current: bool,
}

/// The agent's goal structure Π with status and budget state.
pub struct GoalTree<S> {
    nodes: Vec<Node<S>>,
    root: GoalNodeId,
    ledger: BudgetLedger,
}

impl<S> GoalTree<S> {
    pub fn new(structure: GoalStructure<S>) -> Result<Self, GoalError> {
        Self::with_budget(structure, Budget::Unbounded)
    }

    /// Build the tree and adopt the first goal, allocating budget from the
    /// agent's initial budget `initial`.
    pub fn with_budget(structure: GoalStructure<S>, initial: Budget) -> Result<Self, GoalError> {
        let mut tree = GoalTree {
            nodes: Vec::new(),
            root: GoalNodeId(0),
            ledger: BudgetLedger::new(initial),
        };
        tree.root = tree.graft(structure, None, 0)?;
        tree.adopt();
        Ok(tree)
    }

    /// Replace the agent's initial budget before any work has been charged,
    /// redoing the allocations along the current path.
    pub(crate) fn restart_budget(&mut self, initial: Budget) {
        debug_assert_eq!(self.ledger.consumed(), 0);
        self.ledger = BudgetLedger::new(initial);
        for n in &mut self.nodes {
            n.current = false;
            n.remaining = None;
        }
        self.adopt();
    }

    fn graft(
        &mut self,
        structure: GoalStructure<S>,
        parent: Option<GoalNodeId>,
        child_index: usize,
    ) -> Result<GoalNodeId, GoalError> {
        let id = GoalNodeId(self.nodes.len());
        let (kind, goal, children) = match structure.kind {
            StructureKind::Lift(g) => (GoalKind::Lift, Some(g), Vec::new()),
            StructureKind::Seq(c) => (GoalKind::Seq, None, c),
            StructureKind::FirstOf(c) => (GoalKind::FirstOf, None, c),
            StructureKind::Repeat(c) => (GoalKind::Repeat, None, vec![*c]),
        };
        if kind != GoalKind::Lift && children.is_empty() {
            return Err(GoalError::EmptyCombinator);
        }
        self.nodes.push(Node {
            kind,
            goal,
            label: structure.label,
            children: Vec::new(),
            parent,
            child_index,
            status: GoalStatus::Unstarted,
            bmax: structure.bmax,
            remaining: None,
            current: false,
        });
        for (i, c) in children.into_iter().enumerate() {
            let cid = self.graft(c, Some(id), i)?;
            self.nodes[id.0].children.push(cid);
        }
        Ok(id)
    }

    fn push_node(&mut self, kind: GoalKind, bmax: Budget) -> GoalNodeId {
        let id = GoalNodeId(self.nodes.len());
        self.nodes.push(Node {
            kind,
            goal: None,
            label: None,
            children: Vec::new(),
            parent: None,
            child_index: 0,
            status: GoalStatus::Unstarted,
            bmax,
            remaining: None,
            current: false,
        });
        id
    }

    pub fn root(&self) -> GoalNodeId {
        self.root
    }

    pub fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }

    pub fn kind(&self, id: GoalNodeId) -> GoalKind {
        self.nodes[id.0].kind
    }

    pub fn status(&self, id: GoalNodeId) -> GoalStatus {
        self.nodes[id.0].status
    }

    pub fn children(&self, id: GoalNodeId) -> &[GoalNodeId] {
        &self.nodes[id.0].children
    }

    pub fn parent(&self, id: GoalNodeId) -> Option<GoalNodeId> {
        self.nodes[id.0].parent
    }

    pub fn goal(&self, id: GoalNodeId) -> Option<&Goal<S>> {
        self.nodes[id.0].goal.as_ref()
    }

    pub fn bmax(&self, id: GoalNodeId) -> Budget {
        self.nodes[id.0].bmax
    }

    /// Remaining budget, or `None` when the node has never been allocated
    /// (or was reset by a REPEAT).
    pub fn remaining(&self, id: GoalNodeId) -> Option<Budget> {
        self.nodes[id.0].remaining
    }

    pub fn is_current(&self, id: GoalNodeId) -> bool {
        self.nodes[id.0].current
    }

    /// Name of a node: the goal name for leaves, otherwise the label if any.
    pub fn name(&self, id: GoalNodeId) -> &str {
        let n = &self.nodes[id.0];
        match (&n.goal, &n.label) {
            (Some(g), _) => g.name(),
            (None, Some(l)) => l,
            (None, None) => "_",
        }
    }

    /// Every node reachable from the root, preorder.
    pub fn node_ids(&self) -> Vec<GoalNodeId> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[id.0].children.iter().rev());
        }
        out
    }

    /// Find the first leaf (preorder) whose goal is called `name`.
    pub fn find_goal(&self, name: &str) -> Option<GoalNodeId> {
        self.node_ids()
            .into_iter()
            .find(|&id| self.goal(id).is_some_and(|g| g.name() == name))
    }

    pub fn is_done(&self) -> bool {
        self.status(self.root).is_terminal()
    }

    pub fn current_leaf(&self) -> Option<GoalNodeId> {
        self.descend(self.root)
    }

    fn descend(&self, id: GoalNodeId) -> Option<GoalNodeId> {
        let n = &self.nodes[id.0];
        if n.status.is_terminal() {
            return None;
        }
        match n.kind {
            GoalKind::Lift => Some(id),
            GoalKind::Seq => n
                .children
                .iter()
                .find(|&&c| self.status(c) != GoalStatus::Solved)
                .and_then(|&c| self.descend(c)),
            GoalKind::FirstOf => n
                .children
                .iter()
                .find(|&&c| self.status(c) != GoalStatus::Failed)
                .and_then(|&c| self.descend(c)),
            GoalKind::Repeat => self.descend(n.children[0]),
        }
    }

    pub fn current_goal(&self) -> Option<&Goal<S>> {
        self.current_leaf().and_then(|id| self.goal(id))
    }

    /// Root first, current leaf last. Empty once the root is terminal.
    pub fn current_path(&self) -> Vec<GoalNodeId> {
        let Some(leaf) = self.current_leaf() else {
            return Vec::new();
        };
        let mut path = vec![leaf];
        let mut u = leaf;
        while let Some(p) = self.parent(u) {
            path.push(p);
            u = p;
        }
        path.reverse();
        path
    }

    /// Allocate every node on the current path that has just become current,
    /// root first, and retire nodes that dropped off the path.
    fn adopt(&mut self) -> Vec<GoalEvent> {
        let path = self.current_path();
        for i in 0..self.nodes.len() {
            if self.nodes[i].current && !path.contains(&GoalNodeId(i)) {
                self.nodes[i].current = false;
            }
        }
        let mut events = Vec::new();
        for (depth, &id) in path.iter().enumerate() {
            if self.nodes[id.0].current {
                continue;
            }
            let parent_remaining = if depth == 0 {
                self.ledger.remaining()
            } else {
                self.nodes[path[depth - 1].0]
                    .remaining
                    .expect("current parent is allocated")
            };
            let allocated = allocation(self.nodes[id.0].bmax, parent_remaining);
            let n = &mut self.nodes[id.0];
            n.remaining = Some(allocated);
            n.current = true;
            n.status = GoalStatus::InProgress;
            self.ledger.record_allocation(AllocationEvent {
                node: id,
                parent_remaining,
                allocated,
            });
            if let Some(g) = &self.nodes[id.0].goal {
                events.push(GoalEvent::Adopted(g.name().to_string()));
            }
        }
        events
    }

    fn expect_current(&self, leaf: GoalNodeId) -> Result<(), GoalError> {
        match self.current_leaf() {
            None => Err(GoalError::NoCurrentGoal),
            Some(c) if c == leaf => Ok(()),
            Some(_) => Err(GoalError::NotCurrent(leaf)),
        }
    }

    pub fn mark_solved(&mut self, leaf: GoalNodeId) -> Result<Vec<GoalEvent>, GoalError> {
        self.expect_current(leaf)?;
        let mut events = vec![GoalEvent::Solved(self.name(leaf).to_string())];
        self.nodes[leaf.0].status = GoalStatus::Solved;
        let mut u = leaf;
        while let Some(p) = self.parent(u) {
            let solved = match self.kind(p) {
                GoalKind::Seq => self.children(p).iter().all(|&c| self.status(c) == GoalStatus::Solved),
                GoalKind::FirstOf | GoalKind::Repeat => true,
                GoalKind::Lift => unreachable!("leaves have no children"),
            };
            if !solved {
                break;
            }
            self.nodes[p.0].status = GoalStatus::Solved;
            u = p;
        }
        events.extend(self.adopt());
        Ok(events)
    }

    pub fn mark_failed(&mut self, leaf: GoalNodeId) -> Result<Vec<GoalEvent>, GoalError> {
        self.expect_current(leaf)?;
        let mut events = vec![GoalEvent::Failed(self.name(leaf).to_string())];
        self.nodes[leaf.0].status = GoalStatus::Failed;
        let mut u = leaf;
        while let Some(p) = self.parent(u) {
            let fails = match self.kind(p) {
                GoalKind::Seq => true,
                GoalKind::FirstOf => self.children(p)[self.nodes[u.0].child_index + 1..]
                    .iter()
                    .all(|&c| self.status(c) == GoalStatus::Failed),
                GoalKind::Repeat => {
                    let left = self.nodes[p.0].remaining.unwrap_or(Budget::Unbounded);
                    if left.is_exhausted() {
                        true
                    } else {
                        let child = self.children(p)[0];
                        self.reset_subtree(child);
                        events.push(GoalEvent::Reset(self.name(p).to_string()));
                        false
                    }
                }
                GoalKind::Lift => unreachable!("leaves have no children"),
            };
            if !fails {
                break;
            }
            self.nodes[p.0].status = GoalStatus::Failed;
            u = p;
        }
        events.extend(self.adopt());
        Ok(events)
    }

    fn reset_subtree(&mut self, id: GoalNodeId) {
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            let node = &mut self.nodes[n.0];
            node.status = GoalStatus::Unstarted;
            node.current = false;
            node.remaining = None;
            stack.extend(node.children.iter().copied());
        }
    }

    /// Charge `cost` to the current goal and every current ancestor.
    pub fn deduct(&mut self, cost: i64) {
        for id in self.current_path() {
            let n = &mut self.nodes[id.0];
            n.remaining = Some(n.remaining.expect("current node is allocated").minus(cost));
        }
        self.ledger.charge(cost);
    }

    /// True when the current goal has no budget left. Checking the leaf
    /// alone suffices because it never holds more than its ancestors.
    pub fn exhausted(&self) -> bool {
        self.current_leaf()
            .and_then(|l| self.remaining(l))
            .is_some_and(Budget::is_exhausted)
    }

    /// (node, remaining) along the current path, root first.
    pub fn path_budgets(&self) -> Vec<(GoalNodeId, Budget)> {
        self.current_path()
            .into_iter()
            .map(|id| (id, self.remaining(id).unwrap_or(Budget::Unbounded)))
            .collect()
    }

    fn replace_in_parent(&mut self, old: GoalNodeId, new: GoalNodeId) {
        let parent = self.nodes[old.0].parent;
        let index = self.nodes[old.0].child_index;
        self.nodes[new.0].parent = parent;
        self.nodes[new.0].child_index = index;
        match parent {
            Some(p) => self.nodes[p.0].children[index] = new,
            None => self.root = new,
        }
    }

    fn attach_children(&mut self, parent: GoalNodeId, children: Vec<GoalNodeId>) {
        for (i, &c) in children.iter().enumerate() {
            self.nodes[c.0].parent = Some(parent);
            self.nodes[c.0].child_index = i;
        }
        self.nodes[parent.0].children = children;
    }

    /// Insert `structure` as the next sibling of the current goal. When the
    /// goal's parent is not a SEQ, the goal is wrapped into `SEQ(goal, H)`.
    pub fn add_after(&mut self, structure: GoalStructure<S>) -> Result<Vec<GoalEvent>, GoalError> {
        let leaf = self.current_leaf().ok_or(GoalError::NoCurrentGoal)?;
        match self.parent(leaf) {
            Some(p) if self.kind(p) == GoalKind::Seq => {
                let h = self.graft(structure, Some(p), 0)?;
                let mut children = self.nodes[p.0].children.clone();
                children.insert(self.nodes[leaf.0].child_index + 1, h);
                self.attach_children(p, children);
            }
            _ => {
                let h = self.graft(structure, None, 0)?;
                let wrapper = self.push_node(GoalKind::Seq, Budget::Unbounded);
                self.replace_in_parent(leaf, wrapper);
                self.attach_children(wrapper, vec![leaf, h]);
            }
        }
        Ok(self.adopt())
    }

    /// Turn the current goal `g` into `REPEAT(SEQ(H, g))` in place, so that
    /// a failure of `g` sends the agent back to `H`. The new current goal is
    /// the current goal of `H`.
    pub fn add_before(
        &mut self,
        structure: GoalStructure<S>,
        repeat_bmax: Budget,
    ) -> Result<Vec<GoalEvent>, GoalError> {
        let leaf = self.current_leaf().ok_or(GoalError::NoCurrentGoal)?;
        let h = self.graft(structure, None, 0)?;
        let rep = self.push_node(GoalKind::Repeat, repeat_bmax);
        let inner = self.push_node(GoalKind::Seq, Budget::Unbounded);
        self.replace_in_parent(leaf, rep);
        self.attach_children(rep, vec![inner]);
        self.attach_children(inner, vec![h, leaf]);
        self.reset_subtree(leaf);
        Ok(self.adopt())
    }

    /// Term rendering of the current tree, e.g. `SEQ(g0,H,g1)`.
    pub fn shape(&self) -> String {
        self.shape_of(self.root)
    }

    fn shape_of(&self, id: GoalNodeId) -> String {
        let n = &self.nodes[id.0];
        if n.kind == GoalKind::Lift {
            return self.name(id).to_string();
        }
        let inner: Vec<String> = n.children.iter().map(|&c| self.shape_of(c)).collect();
        format!("{}({})", n.kind.label(), inner.join(","))
    }

    /// One node per line: `KIND name [STATUS] budget=remaining/bmax`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let n = &self.nodes[id.0];
            let remaining = n.remaining.map_or_else(|| "-".to_string(), |b| b.to_string());
            out.push_str(&format!(
                "{}{} {} [{}] budget={}/{}\n",
                "  ".repeat(depth),
                n.kind.label(),
                self.name(id),
                n.status.label(),
                remaining,
                n.bmax
            ));
            for &c in n.children.iter().rev() {
                stack.push((c, depth + 1));
            }
        }
        out
    }

    /// Structural, status and budget invariants. Returns the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.parent(self.root).is_some() {
            return Err("root has a parent".into());
        }
        let reachable = self.node_ids();
        for &id in &reachable {
            let n = &self.nodes[id.0];
            match (n.kind, n.children.len()) {
                (GoalKind::Lift, 0) => {}
                (GoalKind::Lift, _) => return Err(format!("{id:?}: leaf with children")),
                (GoalKind::Repeat, 1) => {}
                (GoalKind::Repeat, k) => return Err(format!("{id:?}: REPEAT with {k} children")),
                (_, 0) => return Err(format!("{id:?}: empty combinator")),
                _ => {}
            }
            if (n.kind == GoalKind::Lift) != n.goal.is_some() {
                return Err(format!("{id:?}: goal presence does not match kind"));
            }
            for (i, &c) in n.children.iter().enumerate() {
                if self.parent(c) != Some(id) || self.nodes[c.0].child_index != i {
                    return Err(format!("{c:?}: broken back-link"));
                }
            }
            let statuses: Vec<GoalStatus> = n.children.iter().map(|&c| self.status(c)).collect();
            let all = |s: GoalStatus| statuses.iter().all(|&x| x == s);
            let any = |s: GoalStatus| statuses.contains(&s);
            let ok = match (n.kind, n.status) {
                (GoalKind::Lift, _) => true,
                (GoalKind::Seq, GoalStatus::Solved) => all(GoalStatus::Solved),
                (GoalKind::Seq, GoalStatus::Failed) => any(GoalStatus::Failed),
                (GoalKind::Seq, _) => !any(GoalStatus::Failed) && !all(GoalStatus::Solved),
                (GoalKind::FirstOf, GoalStatus::Solved) => any(GoalStatus::Solved),
                (GoalKind::FirstOf, GoalStatus::Failed) => all(GoalStatus::Failed),
                (GoalKind::FirstOf, _) => !any(GoalStatus::Solved) && !all(GoalStatus::Failed),
                (GoalKind::Repeat, s) if s.is_terminal() => statuses[0] == s,
                (GoalKind::Repeat, _) => !statuses[0].is_terminal(),
            };
            if !ok {
                return Err(format!(
                    "{id:?}: {} status {:?} inconsistent with children {statuses:?}",
                    n.kind.label(),
                    n.status
                ));
            }
        }
        let path = self.current_path();
        for &id in &reachable {
            if self.is_current(id) != path.contains(&id) {
                return Err(format!("{id:?}: current flag disagrees with current path"));
            }
        }
        for w in path.windows(2) {
            let (p, c) = (self.remaining(w[0]), self.remaining(w[1]));
            match (p, c) {
                (Some(p), Some(c)) if c <= p => {}
                _ => return Err(format!("{:?}: budget {c:?} exceeds parent {p:?}", w[1])),
            }
        }
        Ok(())
    }
}
