//! Anchor stages: apply a batch of updates, query, and undo the batch.

use crate::engines::DynamicEngine;
use crate::error::{Error, Result};
use crate::model::{Answer, Mode, QueryOp, UpdateOp};

/// The exact inverse of `op`. Deleting an edge needs its weight to be
/// restored, so weighted deletions carry it in `weight`.
pub(crate) fn inverse(op: &UpdateOp, weight: Option<u64>) -> Result<UpdateOp> {
    use UpdateOp::*;
    Ok(match op {
        InsertEdge { u, v, .. } => UpdateOp::delete(*u, *v),
        DeleteEdge { u, v } => InsertEdge {
            u: *u,
            v: *v,
            weight,
        },
        ActivateNode(v) => DeactivateNode(*v),
        DeactivateNode(v) => ActivateNode(*v),
        AddToScope(i) => RemoveFromScope(*i),
        RemoveFromScope(i) => AddToScope(*i),
        InsertSet(_) | IntersectSets(..) => {
            return Err(Error::domain(format!("{op:?} has no inverse update")))
        }
    })
}

/// Runs stages against one engine. In full mode a stage is undone by
/// explicit inverse updates; in partially dynamic modes by rollback.
pub(crate) struct StageRunner {
    pub engine: Box<dyn DynamicEngine>,
    mode: Mode,
    check_isolation: bool,
}

impl StageRunner {
    pub fn new(engine: Box<dyn DynamicEngine>, check_isolation: bool) -> Self {
        let mode = engine.mode();
        StageRunner {
            engine,
            mode,
            check_isolation,
        }
    }

    /// `ops` pairs each forward update with its inverse.
    pub fn stage(&mut self, ops: &[(UpdateOp, UpdateOp)], query: QueryOp) -> Result<Answer> {
        let before = self.check_isolation.then(|| self.engine.digest());
        let answer = if self.mode == Mode::Full {
            for (op, _) in ops {
                self.engine.update(op.clone())?;
            }
            let answer = self.engine.query(query);
            for (_, inv) in ops.iter().rev() {
                self.engine.update(inv.clone())?;
            }
            answer?
        } else {
            let forward: Vec<UpdateOp> = ops.iter().map(|(op, _)| op.clone()).collect();
            self.rolled_back(&forward, query)?
        };
        if let Some(before) = before {
            if self.engine.digest() != before {
                return Err(Error::Construction(
                    "stage did not restore the instance".into(),
                ));
            }
        }
        Ok(answer)
    }

    /// A stage whose updates have no inverse update (set intersections):
    /// always undone by rollback.
    pub fn stage_with_rollback(&mut self, ops: &[UpdateOp], query: QueryOp) -> Result<Answer> {
        let before = self.check_isolation.then(|| self.engine.digest());
        let answer = self.rolled_back(ops, query)?;
        if let Some(before) = before {
            if self.engine.digest() != before {
                return Err(Error::Construction(
                    "stage did not restore the instance".into(),
                ));
            }
        }
        Ok(answer)
    }

    fn rolled_back(&mut self, ops: &[UpdateOp], query: QueryOp) -> Result<Answer> {
        let cp = self.engine.checkpoint();
        let answer = ops
            .iter()
            .try_for_each(|op| self.engine.update(op.clone()))
            .and_then(|()| self.engine.query(query));
        self.engine.rollback(cp)?;
        answer
    }
}
