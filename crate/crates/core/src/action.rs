//! Guarded, effectful actions: the leaves of every tactic.
//!
//! A guard is a query over the state. It either produces a witness value
//! (the action is enabled) or nothing (disabled). Executing the action hands
//! that witness to the effect, which may change the state and may return a
//! proposal to be checked against the current goal.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::value::Value;

type GuardFn<S> = Rc<dyn Fn(&S) -> Result<Option<Value>, String>>;
type EffectFn<S> = Rc<dyn Fn(&mut S, &Value) -> Result<Option<Value>, String>>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("action `{0}` executed while disabled")]
    Disabled(String),
    #[error("effect of `{action}` failed: {reason}")]
    Effect { action: String, reason: String },
}

pub struct Action<S> {
    id: String,
    guard: GuardFn<S>,
    effect: EffectFn<S>,
    cost: i64,
}

impl<S> Clone for Action<S> {
    fn clone(&self) -> Self {
        Action {
            id: self.id.clone(),
            guard: Rc::clone(&self.guard),
            effect: Rc::clone(&self.effect),
            cost: self.cost,
        }
    }
}

impl<S> fmt::Debug for Action<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Action")
            .field("id", &self.id)
            .field("cost", &self.cost)
            .finish_non_exhaustive()
    }
}

impl<S: 'static> Action<S> {
    /// An always-enabled action that does nothing and proposes nothing.
    pub fn new(id: impl Into<String>) -> Self {
        Action {
            id: id.into(),
            guard: Rc::new(|_| Ok(Some(Value::Unit))),
            effect: Rc::new(|_, _| Ok(None)),
            cost: 1,
        }
    }

    pub fn on(mut self, guard: impl Fn(&S) -> Option<Value> + 'static) -> Self {
        self.guard = Rc::new(move |s| Ok(guard(s)));
        self
    }

    /// Boolean guard; the witness is `Value::Unit`.
    pub fn on_when(mut self, pred: impl Fn(&S) -> bool + 'static) -> Self {
        self.guard = Rc::new(move |s| Ok(pred(s).then_some(Value::Unit)));
        self
    }

    /// A guard that may fail. Failures count as "not enabled".
    pub fn try_on(mut self, guard: impl Fn(&S) -> Result<Option<Value>, String> + 'static) -> Self {
        self.guard = Rc::new(guard);
        self
    }

    pub fn does(mut self, effect: impl Fn(&mut S, &Value) -> Option<Value> + 'static) -> Self {
        self.effect = Rc::new(move |s, r| Ok(effect(s, r)));
        self
    }

    pub fn try_does(mut self, effect: impl Fn(&mut S, &Value) -> Result<Option<Value>, String> + 'static) -> Self {
        self.effect = Rc::new(effect);
        self
    }

    pub fn with_cost(mut self, cost: i64) -> Self {
        assert!(cost >= 0, "action cost must be non-negative");
        self.cost = cost;
        self
    }
}

impl<S> Action<S> {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn cost(&self) -> i64 {
        self.cost
    }

    /// Evaluate the guard once. A failing guard is logged and reported as
    /// disabled.
    pub fn witness(&self, state: &S) -> Option<Value> {
        match (self.guard)(state) {
            Ok(w) => w,
            Err(reason) => {
                log::debug!("guard of `{}` failed: {reason}", self.id);
                None
            }
        }
    }

    pub fn is_enabled(&self, state: &S) -> bool {
        self.witness(state).is_some()
    }

    /// Evaluate the guard and, if it yields a witness, run the effect with it.
    pub fn execute(&self, state: &mut S) -> Result<Option<Value>, ActionError> {
        let witness = self
            .witness(state)
            .ok_or_else(|| ActionError::Disabled(self.id.clone()))?;
        self.execute_with(state, &witness)
    }

    /// Run the effect with a witness obtained earlier in the same tick.
    pub fn execute_with(&self, state: &mut S, witness: &Value) -> Result<Option<Value>, ActionError> {
        (self.effect)(state, witness).map_err(|reason| ActionError::Effect {
            action: self.id.clone(),
            reason,
        })
    }
}
