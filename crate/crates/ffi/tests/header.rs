use std::path::{Path, PathBuf};
use std::process::Command;

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn exported_symbols() -> Vec<String> {
    let src = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    src.lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap().to_string())
        .collect()
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/weakbound.h")).unwrap();
    let symbols = exported_symbols();
    assert!(symbols.len() >= 16);
    for s in &symbols {
        assert!(header.contains(&format!(" {s}(")), "{s} missing from header");
    }
    for t in ["typedef struct WbFunction WbFunction;", "WB_STATUS_OK = 0", "WB_STATUS_PANIC", "WB_OPERATOR_LAMBDA_STAR"]
    {
        assert!(header.contains(t), "{t} missing from header");
    }
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.parent()?.join("libweakbound_ffi.a");
    lib.exists().then_some(lib)
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include "weakbound.h"
int main(void) {
    WbFunction *f = NULL;
    double measure = 0.0, l1 = 0.0, w = 0.0;
    if (wb_function_spec(1, 2.157, 6.623, &f) != WB_STATUS_OK) return 1;
    if (wb_superlevel_measure(WB_OPERATOR_LAMBDA, 1, f, 1.0, &measure) != WB_STATUS_OK) return 2;
    if (wb_function_l1_norm(f, &l1) != WB_STATUS_OK) return 3;
    if (wb_w(2.157, 6.623, 1, &w) != WB_STATUS_OK) return 4;
    wb_function_free(f);
    if (wb_function_spec(1, 2.157, 100.0, &f) != WB_STATUS_CONSTRAINT) return 5;
    double gap = measure / l1 - w;
    if (gap > 1e-9 || gap < -1e-9) return 6;
    printf("%.9f\n", w);
    return 0;
}
"#;

#[test]
fn c_program_compiles_and_links() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler on PATH; compile check not run");
        return;
    };
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c_abi");
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = crate_dir().join("include");

    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success(), "header does not compile as C99");

    let Some(lib) = static_lib() else {
        eprintln!("static library not built for this profile; link check not run");
        return;
    };
    let exe = dir.join("main");
    let status = Command::new(&cc)
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "link against the static library failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status);
    let w: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((w - 1.383).abs() < 1e-3);
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
