//! Commitment control through budgets.
//!
//! Each goal-structure node carries a cap (`bmax`) and, while it is current,
//! a remaining budget. A node that becomes current is allocated
//! `min(bmax, remaining of its parent)`; the root's parent is the agent's
//! own remaining budget. Every executed action deducts its cost from every
//! current node, so the current leaf is always the first to run dry.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::goal::GoalNodeId;

/// Abstract budget units. `Unbounded` absorbs subtraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Budget {
    Finite(i64),
    #[default]
    Unbounded,
}

impl Budget {
    pub fn min(self, other: Budget) -> Budget {
        match (self, other) {
            (Budget::Unbounded, b) | (b, Budget::Unbounded) => b,
            (Budget::Finite(a), Budget::Finite(b)) => Budget::Finite(a.min(b)),
        }
    }

    pub fn minus(self, cost: i64) -> Budget {
        match self {
            Budget::Unbounded => Budget::Unbounded,
            Budget::Finite(a) => Budget::Finite(a - cost),
        }
    }

    /// Remaining is zero or below.
    pub fn is_exhausted(self) -> bool {
        matches!(self, Budget::Finite(a) if a <= 0)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Budget::Finite(a) => Some(a),
            Budget::Unbounded => None,
        }
    }
}

impl PartialOrd for Budget {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Budget {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Budget::Unbounded, Budget::Unbounded) => Ordering::Equal,
            (Budget::Unbounded, _) => Ordering::Greater,
            (_, Budget::Unbounded) => Ordering::Less,
            (Budget::Finite(a), Budget::Finite(b)) => a.cmp(b),
        }
    }
}

impl From<i64> for Budget {
    fn from(v: i64) -> Self {
        Budget::Finite(v)
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Finite(a) => write!(f, "{a}"),
            Budget::Unbounded => write!(f, "inf"),
        }
    }
}

impl Serialize for Budget {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Budget::Finite(a) => serializer.serialize_i64(*a),
            Budget::Unbounded => serializer.serialize_str("inf"),
        }
    }
}

/// Recorded whenever a node becomes current.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AllocationEvent {
    pub node: GoalNodeId,
    /// Remaining budget of the parent (or of the agent, for the root) at the
    /// moment of allocation.
    pub parent_remaining: Budget,
    pub allocated: Budget,
}

/// Agent-wide budget accounting.
#[derive(Clone, Debug, Default)]
pub struct BudgetLedger {
    initial: Budget,
    consumed: i64,
    allocations: Vec<AllocationEvent>,
}

impl BudgetLedger {
    pub fn new(initial: Budget) -> Self {
        BudgetLedger {
            initial,
            consumed: 0,
            allocations: Vec::new(),
        }
    }

    pub fn initial(&self) -> Budget {
        self.initial
    }

    pub fn consumed(&self) -> i64 {
        self.consumed
    }

    /// What is left of the agent's initial budget.
    pub fn remaining(&self) -> Budget {
        self.initial.minus(self.consumed)
    }

    pub fn allocations(&self) -> &[AllocationEvent] {
        &self.allocations
    }

    pub(crate) fn record_allocation(&mut self, event: AllocationEvent) {
        self.allocations.push(event);
    }

    pub(crate) fn charge(&mut self, cost: i64) {
        self.consumed += cost;
    }
}

/// `min(bmax, parent)`.
pub fn allocation(bmax: Budget, parent_remaining: Budget) -> Budget {
    bmax.min(parent_remaining)
}
