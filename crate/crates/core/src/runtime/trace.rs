//! JSON-lines trace of deliberation ticks.

use std::io::{self, Write};

use serde::Serialize;

use crate::budget::Budget;
use crate::value::Value;

use super::{TickReport, Wake};

/// One line of trace output. Field order is fixed.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub tick: u64,
    pub agent: String,
    pub wake: Wake,
    pub goal: Option<String>,
    pub cursor: Option<String>,
    pub action: String,
    pub proposal: Option<Value>,
    pub budget_goal: Option<Budget>,
    pub budget_root: Option<Budget>,
    pub events: Vec<String>,
}

impl From<&TickReport> for TraceRecord {
    fn from(r: &TickReport) -> Self {
        TraceRecord {
            tick: r.tick,
            agent: r.agent.clone(),
            wake: r.wake,
            goal: r.goal.clone(),
            cursor: r.cursor.clone(),
            action: r.outcome.label(),
            proposal: r.proposal.clone(),
            budget_goal: r.budget_goal,
            budget_root: r.budget_root,
            events: r.events.iter().map(ToString::to_string).collect(),
        }
    }
}

pub fn write_record(out: &mut impl Write, report: &TickReport) -> io::Result<()> {
    let line = serde_json::to_string(&TraceRecord::from(report)).map_err(io::Error::other)?;
    writeln!(out, "{line}")
}

pub fn write_all<'a>(out: &mut impl Write, reports: impl IntoIterator<Item = &'a TickReport>) -> io::Result<()> {
    for r in reports {
        write_record(out, r)?;
    }
    Ok(())
}
