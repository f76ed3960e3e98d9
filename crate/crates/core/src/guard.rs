//! Desk-scale size guards.

use crate::error::{Error, Result};

pub const MAX_STATE_NODES_ENV: &str = "REDUX_MAX_STATE_NODES";
pub const DEFAULT_MAX_STATE_NODES: usize = 1 << 20;

/// The node/stage cap, overridable through `REDUX_MAX_STATE_NODES`.
pub fn max_state_nodes() -> usize {
    std::env::var(MAX_STATE_NODES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_STATE_NODES)
}

pub fn check_size(count: u128, what: &str) -> Result<()> {
    let cap = max_state_nodes();
    if count > cap as u128 {
        return Err(Error::Guard(format!(
            "{what} = {count} exceeds the cap of {cap} (set {MAX_STATE_NODES_ENV} to raise it)"
        )));
    }
    Ok(())
}

/// `2^bits`, guarded.
pub fn pow2_guarded(bits: usize, what: &str) -> Result<usize> {
    if bits >= 64 {
        return Err(Error::Guard(format!("{what} = 2^{bits} is out of range")));
    }
    check_size(1u128 << bits, what)?;
    Ok(1usize << bits)
}
