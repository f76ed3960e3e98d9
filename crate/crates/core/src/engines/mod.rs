//! The uniform dynamic-engine contract and the recompute baselines.

pub(crate) mod algo;
mod baseline;

pub use algo::compute_kaug_free_matching;
pub use baseline::BaselineEngine;

use crate::error::{Error, Result};
use crate::model::{Answer, CostCounters, Instance, Mode, ProblemKind, QueryOp, UpdateOp};

/// A marker for a point in an engine's update history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Checkpoint {
    id: u64,
    depth: usize,
}

impl Checkpoint {
    pub fn id(&self) -> u64 {
        self.id
    }

    /// Undo-log depth when the checkpoint was taken.
    pub fn depth(&self) -> usize {
        self.depth
    }
}

/// A dynamic problem under preprocess / update / query / rollback.
pub trait DynamicEngine: Send {
    fn kind(&self) -> ProblemKind;
    fn mode(&self) -> Mode;
    fn update(&mut self, op: UpdateOp) -> Result<()>;
    fn query(&mut self, q: QueryOp) -> Result<Answer>;
    fn checkpoint(&mut self) -> Checkpoint;
    fn rollback(&mut self, cp: Checkpoint) -> Result<()>;
    fn counters(&self) -> CostCounters;
    /// The instance as currently maintained.
    fn instance(&self) -> Instance;

    fn digest(&self) -> String {
        self.instance().digest()
    }
}

/// Builds engines; reductions are written against this so wrappers can be
/// swapped in for the baselines.
pub trait EngineFactory: Send + Sync {
    fn build(
        &self,
        kind: ProblemKind,
        mode: Mode,
        instance: Instance,
    ) -> Result<Box<dyn DynamicEngine>>;
}

/// Factory for [`BaselineEngine`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Baseline;

impl EngineFactory for Baseline {
    fn build(
        &self,
        kind: ProblemKind,
        mode: Mode,
        instance: Instance,
    ) -> Result<Box<dyn DynamicEngine>> {
        Ok(Box::new(BaselineEngine::new(kind, mode, instance)?))
    }
}

pub fn engine_new(kind: ProblemKind, mode: Mode, instance: Instance) -> Result<BaselineEngine> {
    BaselineEngine::new(kind, mode, instance)
}

/// Rejects ops the mode forbids. Rollback bypasses this check.
pub fn check_mode(mode: Mode, op: &UpdateOp) -> Result<()> {
    match mode {
        Mode::Incremental if !op.is_insertion() => Err(Error::ModeViolation(format!(
            "{op:?} is not allowed on an incremental engine"
        ))),
        Mode::Decremental if op.is_insertion() => Err(Error::ModeViolation(format!(
            "{op:?} is not allowed on a decremental engine"
        ))),
        _ => Ok(()),
    }
}

/// Live checkpoints of one engine, innermost last.
#[derive(Debug, Default, Clone)]
pub(crate) struct CheckpointStack {
    live: Vec<Checkpoint>,
    next_id: u64,
}

impl CheckpointStack {
    pub(crate) fn push(&mut self, depth: usize) -> Checkpoint {
        let cp = Checkpoint {
            id: self.next_id,
            depth,
        };
        self.next_id += 1;
        self.live.push(cp);
        cp
    }

    /// Drops `cp` and every checkpoint taken after it.
    pub(crate) fn release(&mut self, cp: Checkpoint) -> Result<()> {
        let pos = self
            .live
            .iter()
            .rposition(|c| *c == cp)
            .ok_or_else(|| Error::state(format!("checkpoint {} is stale", cp.id)))?;
        self.live.truncate(pos);
        Ok(())
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.live.is_empty()
    }
}
