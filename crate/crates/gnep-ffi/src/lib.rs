//! C interface to the solver.
//!
//! Games and results are opaque heap handles released with their `_free`
//! functions. Every call returns a [`GnepStatus`]; on failure the message is
//! available from [`gnep_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use gnep::error::GnepError;
use gnep::model::GameInstance;
use gnep::problems::{builtin, load_quadratic};
use gnep::solver::{solve, GammaPolicy, SigmaSchedule, SigmaScope, SolveResult, SolveStatus, SolverConfig};

/// Opaque game instance.
pub struct GnepGame(GameInstance);

/// Opaque solver outcome.
pub struct GnepResult(SolveResult);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    UnknownProblem = 3,
    Io = 4,
    Parse = 5,
    Dimension = 6,
    Config = 7,
    Oracle = 8,
    InnerNonconvergence = 9,
    BufferSize = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnepSolveStatus {
    Converged = 0,
    StalledStationary = 1,
    MaxOuter = 2,
    OracleFailure = 3,
    InnerNonconvergence = 4,
}

/// Solver settings. Non-positive `gamma` selects the automatic policy and
/// non-positive `sigma0` the default step.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnepOptions {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub gamma_safety: f64,
    pub sigma0: f64,
    /// Zero for a constant step.
    pub sigma_decay: f64,
    /// Nonzero caps each player's step by its own proximal weight.
    pub per_player_sigma: i32,
    pub tol: f64,
    pub inner_eps: f64,
    pub max_outer: u64,
    pub max_inner: u64,
    pub seed: u64,
    /// 1 runs serially, 0 uses all cores.
    pub threads: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &GnepError) -> GnepStatus {
    match e {
        GnepError::UnknownProblem(_) => GnepStatus::UnknownProblem,
        GnepError::Io(_) => GnepStatus::Io,
        GnepError::Parse { .. } => GnepStatus::Parse,
        GnepError::DimensionMismatch { .. } | GnepError::PlayerOutOfRange { .. } | GnepError::InvalidLayout(_) => {
            GnepStatus::Dimension
        }
        GnepError::Config(_) | GnepError::InvalidSet(_) | GnepError::Admissibility { .. } => GnepStatus::Config,
        GnepError::InnerNonconvergence { .. } => GnepStatus::InnerNonconvergence,
        GnepError::NonFinite { .. } | GnepError::DegenerateSampling { .. } => GnepStatus::Oracle,
    }
}

fn fail(e: GnepError) -> GnepStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn guard(f: impl FnOnce() -> GnepStatus) -> GnepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            GnepStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, GnepStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(GnepStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        GnepStatus::InvalidUtf8
    })
}

fn null_error(what: &str) -> GnepStatus {
    set_error(format!("null {what}"));
    GnepStatus::NullPointer
}

/// Writes the default settings into `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gnep_options_default(out: *mut GnepOptions) -> GnepStatus {
    if out.is_null() {
        return null_error("options pointer");
    }
    let d = SolverConfig::default();
    *out = GnepOptions {
        alpha: d.alpha,
        beta: d.beta,
        gamma: 0.0,
        gamma_safety: 1.0,
        sigma0: 0.0,
        sigma_decay: 50.0,
        per_player_sigma: 0,
        tol: d.outer_tol,
        inner_eps: d.inner_eps,
        max_outer: d.max_outer as u64,
        max_inner: d.max_inner as u64,
        seed: d.seed,
        threads: d.threads as u32,
    };
    GnepStatus::Ok
}

fn config_of(o: &GnepOptions) -> SolverConfig {
    let sigma0 = (o.sigma0 > 0.0).then_some(o.sigma0);
    SolverConfig {
        alpha: o.alpha,
        beta: o.beta,
        gamma: if o.gamma > 0.0 {
            GammaPolicy::Fixed(o.gamma)
        } else {
            GammaPolicy::Auto { safety: o.gamma_safety }
        },
        sigma: if o.sigma_decay > 0.0 {
            SigmaSchedule::Diminishing {
                sigma0,
                decay: o.sigma_decay,
            }
        } else {
            SigmaSchedule::Constant { sigma0 }
        },
        sigma_scope: if o.per_player_sigma != 0 {
            SigmaScope::PerPlayer
        } else {
            SigmaScope::Common
        },
        inner_eps: o.inner_eps,
        outer_tol: o.tol,
        max_outer: o.max_outer as usize,
        max_inner: o.max_inner as usize,
        seed: o.seed,
        threads: o.threads as usize,
        ..SolverConfig::default()
    }
}

fn put_game(out: *mut *mut GnepGame, g: GameInstance) -> GnepStatus {
    unsafe { *out = Box::into_raw(Box::new(GnepGame(g))) };
    GnepStatus::Ok
}

/// Builds a named built-in instance; `seed` drives the generated families.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gnep_game_builtin(name: *const c_char, seed: u64, out: *mut *mut GnepGame) -> GnepStatus {
    guard(|| {
        if out.is_null() {
            return null_error("output handle");
        }
        *out = ptr::null_mut();
        let name = match str_arg(name) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match builtin(name, seed) {
            Ok(g) => put_game(out, g),
            Err(e) => fail(e),
        }
    })
}

/// Loads a quadratic instance file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gnep_game_load(path: *const c_char, out: *mut *mut GnepGame) -> GnepStatus {
    guard(|| {
        if out.is_null() {
            return null_error("output handle");
        }
        *out = ptr::null_mut();
        let path = match str_arg(path) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match load_quadratic(Path::new(path)) {
            Ok(g) => put_game(out, g),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `game` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gnep_game_free(game: *mut GnepGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Player count, total dimension and total functional constraints.
///
/// # Safety
/// `game` must be a live handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn gnep_game_dims(
    game: *const GnepGame,
    players: *mut usize,
    n: *mut usize,
    m: *mut usize,
) -> GnepStatus {
    let Some(g) = game.as_ref() else {
        return null_error("game handle");
    };
    if !players.is_null() {
        *players = g.0.num_players();
    }
    if !n.is_null() {
        *n = g.0.n();
    }
    if !m.is_null() {
        *m = g.0.total_constraints();
    }
    GnepStatus::Ok
}

/// Runs the solver from `x0` (length `n`). With null `options` the defaults are used.
///
/// A result handle is produced whenever iterations ran, including after an
/// inner-loop failure; the status then reports the failure.
///
/// # Safety
/// `game` must be live, `x0` valid for `n` reads, `options` null or valid,
/// and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gnep_solve(
    game: *const GnepGame,
    x0: *const f64,
    n: usize,
    options: *const GnepOptions,
    out: *mut *mut GnepResult,
) -> GnepStatus {
    guard(|| {
        if out.is_null() {
            return null_error("output handle");
        }
        *out = ptr::null_mut();
        let Some(g) = game.as_ref() else {
            return null_error("game handle");
        };
        if x0.is_null() {
            return null_error("start point");
        }
        let start = std::slice::from_raw_parts(x0, n);
        let cfg = match options.as_ref() {
            Some(o) => config_of(o),
            None => SolverConfig::default(),
        };
        match solve(&g.0, start, &cfg) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(GnepResult(r)));
                GnepStatus::Ok
            }
            Err(f) => {
                let status = fail(f.error);
                if !f.partial.trace.initial_l.is_empty() {
                    *out = Box::into_raw(Box::new(GnepResult(*f.partial)));
                }
                status
            }
        }
    })
}

/// # Safety
/// `result` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gnep_result_free(result: *mut GnepResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gnep_result_status(result: *const GnepResult, out: *mut GnepSolveStatus) -> GnepStatus {
    let Some(r) = result.as_ref() else {
        return null_error("result handle");
    };
    if out.is_null() {
        return null_error("output pointer");
    }
    *out = match r.0.status {
        SolveStatus::Converged => GnepSolveStatus::Converged,
        SolveStatus::StalledStationary => GnepSolveStatus::StalledStationary,
        SolveStatus::MaxOuter => GnepSolveStatus::MaxOuter,
        SolveStatus::OracleFailure => GnepSolveStatus::OracleFailure,
        SolveStatus::InnerNonconvergence => GnepSolveStatus::InnerNonconvergence,
    };
    GnepStatus::Ok
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> GnepStatus {
    if buf.is_null() {
        return null_error("buffer");
    }
    if len != src.len() {
        set_error(format!("buffer holds {len} values, {} needed", src.len()));
        return GnepStatus::BufferSize;
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, len);
    GnepStatus::Ok
}

/// Copies the final strategy profile into `buf`, which must hold exactly `n` values.
///
/// # Safety
/// `result` must be live and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn gnep_result_x(result: *const GnepResult, buf: *mut f64, len: usize) -> GnepStatus {
    let Some(r) = result.as_ref() else {
        return null_error("result handle");
    };
    copy_out(&r.0.state.x, buf, len)
}

/// Number of multipliers of `player`.
///
/// # Safety
/// `result` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gnep_result_lambda_len(result: *const GnepResult, player: usize, out: *mut usize) -> GnepStatus {
    let Some(r) = result.as_ref() else {
        return null_error("result handle");
    };
    if out.is_null() {
        return null_error("output pointer");
    }
    match r.0.state.duals.get(player) {
        Some(d) => {
            *out = d.lambda.len();
            GnepStatus::Ok
        }
        None => fail(GnepError::PlayerOutOfRange {
            index: player,
            players: r.0.state.duals.len(),
        }),
    }
}

/// Copies the final multipliers of `player`.
///
/// # Safety
/// `result` must be live and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn gnep_result_lambda(
    result: *const GnepResult,
    player: usize,
    buf: *mut f64,
    len: usize,
) -> GnepStatus {
    let Some(r) = result.as_ref() else {
        return null_error("result handle");
    };
    match r.0.state.duals.get(player) {
        Some(d) => copy_out(&d.lambda, buf, len),
        None => fail(GnepError::PlayerOutOfRange {
            index: player,
            players: r.0.state.duals.len(),
        }),
    }
}

/// Outer and cumulative inner iteration counts plus the final stopping residual.
///
/// # Safety
/// `result` must be live; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn gnep_result_stats(
    result: *const GnepResult,
    outer: *mut u64,
    inner: *mut u64,
    residual: *mut f64,
) -> GnepStatus {
    let Some(r) = result.as_ref() else {
        return null_error("result handle");
    };
    if !outer.is_null() {
        *outer = r.0.outer_iterations as u64;
    }
    if !inner.is_null() {
        *inner = r.0.total_inner_iterations as u64;
    }
    if !residual.is_null() {
        *residual = r.0.final_residual;
    }
    GnepStatus::Ok
}

/// Copies the last error message of this thread, NUL-terminated and
/// truncated to `len`. Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn gnep_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let k = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, k);
            *buf.add(k) = 0;
        }
        msg.len()
    })
}
