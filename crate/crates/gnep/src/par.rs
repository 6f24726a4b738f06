use rayon::prelude::*;

use crate::error::Result;

/// Evaluates `f` for every player, in parallel when asked; output order is fixed.
pub fn map_players<T, F>(players: usize, parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if parallel && players > 1 {
        (0..players).into_par_iter().map(f).collect()
    } else {
        (0..players).map(f).collect()
    }
}
