//! Single-threaded round-robin scheduler for several agents.
//!
//! Global time advances in unit steps. An agent with interval `k` wakes on
//! every multiple of `k`; in between it is woken early when a message has
//! arrived since its last tick. Within one step agents run in registration
//! order.

use crate::environment::Environment;
use crate::state::Beliefs;

use super::{Agent, TickReport, Wake};

/// Anything the harness can drive.
pub trait Schedulable {
    fn id(&self) -> &str;
    fn interval(&self) -> u64;
    fn has_new_messages(&self) -> bool;
    fn is_done(&self) -> bool;
    fn tick_at(&mut self, now: u64, wake: Wake) -> TickReport;
}

impl<E: Environment, B: Beliefs<E>> Schedulable for Agent<E, B> {
    fn id(&self) -> &str {
        Agent::id(self)
    }

    fn interval(&self) -> u64 {
        Agent::interval(self)
    }

    fn has_new_messages(&self) -> bool {
        Agent::has_new_messages(self)
    }

    fn is_done(&self) -> bool {
        Agent::is_done(self)
    }

    fn tick_at(&mut self, now: u64, wake: Wake) -> TickReport {
        Agent::tick_at(self, now, wake)
    }
}

#[derive(Default)]
pub struct Harness<'a> {
    agents: Vec<&'a mut dyn Schedulable>,
    now: u64,
}

impl<'a> Harness<'a> {
    pub fn new() -> Self {
        Harness {
            agents: Vec::new(),
            now: 0,
        }
    }

    pub fn add(&mut self, agent: &'a mut dyn Schedulable) -> &mut Self {
        self.agents.push(agent);
        self
    }

    pub fn now(&self) -> u64 {
        self.now
    }

    /// Advance global time by one step. Returns the ticks that ran.
    pub fn step(&mut self) -> Vec<TickReport> {
        self.now += 1;
        let now = self.now;
        let mut out = Vec::new();
        for agent in self.agents.iter_mut() {
            if agent.is_done() {
                continue;
            }
            let wake = if now.is_multiple_of(agent.interval()) {
                Wake::Tick
            } else if agent.has_new_messages() {
                Wake::Message
            } else {
                continue;
            };
            out.push(agent.tick_at(now, wake));
        }
        out
    }

    /// Step until every agent is done, `stop` says so, or `max_steps` ran.
    pub fn run(&mut self, max_steps: u64, mut stop: impl FnMut(&[TickReport]) -> bool) -> Vec<TickReport> {
        let mut all = Vec::new();
        for _ in 0..max_steps {
            if self.agents.iter().all(|a| a.is_done()) {
                break;
            }
            let reports = self.step();
            let halt = stop(&reports);
            all.extend(reports);
            if halt {
                break;
            }
        }
        all
    }
}
