use std::ffi::{c_char, CString};
use std::ptr;

use gnep_ffi::*;

fn last_error() -> String {
    unsafe {
        let need = gnep_last_error_message(ptr::null_mut(), 0);
        let mut buf = vec![0 as c_char; need + 1];
        gnep_last_error_message(buf.as_mut_ptr(), buf.len());
        std::ffi::CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn solves_circle_game_through_handles() {
    unsafe {
        let name = CString::new("example3").unwrap();
        let mut game = ptr::null_mut();
        assert_eq!(gnep_game_builtin(name.as_ptr(), 0, &mut game), GnepStatus::Ok);
        let (mut np, mut n, mut m) = (0, 0, 0);
        assert_eq!(gnep_game_dims(game, &mut np, &mut n, &mut m), GnepStatus::Ok);
        assert_eq!((np, n, m), (2, 2, 4));

        let mut opts = std::mem::zeroed();
        assert_eq!(gnep_options_default(&mut opts), GnepStatus::Ok);
        assert_eq!(opts.alpha, 10.0);
        let x0 = [2.0, 1.0];
        let mut res = ptr::null_mut();
        assert_eq!(gnep_solve(game, x0.as_ptr(), 2, &opts, &mut res), GnepStatus::Ok);
        assert!(!res.is_null());

        let mut status = GnepSolveStatus::MaxOuter;
        assert_eq!(gnep_result_status(res, &mut status), GnepStatus::Ok);
        assert!(matches!(status, GnepSolveStatus::Converged | GnepSolveStatus::StalledStationary));
        let mut x = [0.0; 2];
        assert_eq!(gnep_result_x(res, x.as_mut_ptr(), 2), GnepStatus::Ok);
        assert!((x[0] - 1.0).abs() < 1e-3 && x[1].abs() < 1e-3, "{x:?}");

        let mut k = 0;
        assert_eq!(gnep_result_lambda_len(res, 1, &mut k), GnepStatus::Ok);
        let mut lam = vec![0.0; k];
        assert_eq!(gnep_result_lambda(res, 1, lam.as_mut_ptr(), k), GnepStatus::Ok);
        assert!(lam.iter().all(|v| *v >= 0.0));
        let (mut outer, mut inner, mut resid) = (0u64, 0u64, 0.0);
        assert_eq!(gnep_result_stats(res, &mut outer, &mut inner, &mut resid), GnepStatus::Ok);
        assert!(outer > 0 && inner >= outer && resid <= 1e-4);

        let mut short = [0.0; 1];
        assert_eq!(gnep_result_x(res, short.as_mut_ptr(), 1), GnepStatus::BufferSize);
        assert!(last_error().contains("2 needed"));
        assert_eq!(gnep_result_lambda(res, 9, lam.as_mut_ptr(), k), GnepStatus::Dimension);

        gnep_result_free(res);
        gnep_game_free(game);
    }
}

#[test]
fn errors_are_codes_with_messages() {
    unsafe {
        let name = CString::new("nosuch").unwrap();
        let mut game = ptr::null_mut();
        assert_eq!(gnep_game_builtin(name.as_ptr(), 0, &mut game), GnepStatus::UnknownProblem);
        assert!(game.is_null());
        assert!(last_error().contains("unknown problem"));

        assert_eq!(gnep_game_builtin(ptr::null(), 0, &mut game), GnepStatus::NullPointer);
        let path = CString::new("/nonexistent/instance.json").unwrap();
        assert_eq!(gnep_game_load(path.as_ptr(), &mut game), GnepStatus::Io);

        let bad = [0xffu8 as c_char, 0];
        assert_eq!(gnep_game_builtin(bad.as_ptr(), 0, &mut game), GnepStatus::InvalidUtf8);

        let ok = CString::new("example3").unwrap();
        assert_eq!(gnep_game_builtin(ok.as_ptr(), 0, &mut game), GnepStatus::Ok);
        let mut res = ptr::null_mut();
        let x0 = [0.0; 3];
        assert_eq!(gnep_solve(game, x0.as_ptr(), 3, ptr::null(), &mut res), GnepStatus::Dimension);
        assert!(res.is_null());
        gnep_game_free(game);
        gnep_game_free(ptr::null_mut());
        gnep_result_free(ptr::null_mut());
    }
}

#[test]
fn loads_instance_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("rq.json");
    let spec = gnep::problems::random_quadratic(2, 2, 1, 3).unwrap().spec;
    gnep::problems::save_quadratic(&spec, &file).unwrap();
    unsafe {
        let path = CString::new(file.to_str().unwrap()).unwrap();
        let mut game = ptr::null_mut();
        assert_eq!(gnep_game_load(path.as_ptr(), &mut game), GnepStatus::Ok);
        let mut n = 0;
        assert_eq!(gnep_game_dims(game, ptr::null_mut(), &mut n, ptr::null_mut()), GnepStatus::Ok);
        assert_eq!(n, 4);
        gnep_game_free(game);
    }
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gnep.h")).unwrap();
    for name in [
        "gnep_game_builtin",
        "gnep_game_load",
        "gnep_game_free",
        "gnep_game_dims",
        "gnep_solve",
        "gnep_result_x",
        "gnep_result_lambda",
        "gnep_result_status",
        "gnep_result_stats",
        "gnep_result_free",
        "gnep_last_error_message",
        "typedef struct GnepGame GnepGame;",
        "GNEP_STATUS_UNKNOWN_PROBLEM = 3",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"gnep.h\"\nint main(void) { GnepOptions o; return gnep_options_default(&o) == GNEP_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let out = std::process::Command::new(cc)
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if std::process::Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc);
        }
    }
    Err(())
}
