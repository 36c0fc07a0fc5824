//! Compiles and runs a C program against the committed header and the
//! static library. Skips when no C compiler is on the path.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include "mealydc.h"
#include <assert.h>
#include <stddef.h>
#include <string.h>

int main(void) {
  MdcMachine *m = NULL;
  const char *swap =
      "{\"kind\":\"machine\",\"input\":{\"size\":1},\"output\":{\"size\":1},"
      "\"states\":{\"size\":2},\"d\":[[1,0]],\"s\":[[0,0]]}";
  assert(mdc_machine_from_json(swap, &m) == MDC_STATUS_OK);
  assert(mdc_machine_state_count(m) == 2);

  size_t word[2] = {0, 0};
  size_t out[2];
  size_t state;
  assert(mdc_machine_run(m, 0, word, 2, out, &state) == MDC_STATUS_OK);
  assert(state == 0);
  assert(out[0] == 0 && out[1] == 0);
  mdc_machine_free(m);

  size_t count = 0;
  assert(mdc_enumerate_monads_count(2, 2, &count) == MDC_STATUS_OK);
  assert(count == 32);
  assert(mdc_enumerate_monads_count(3, 3, &count) == MDC_STATUS_BUDGET_EXCEEDED);

  assert(mdc_machine_from_json(NULL, &m) == MDC_STATUS_NULL_POINTER);
  return 0;
}
"#;

#[test]
fn c_program_links_against_header() {
    let compiler = ["cc", "gcc", "clang"]
        .iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok());
    let Some(compiler) = compiler else {
        eprintln!("no C compiler found, skipping");
        return;
    };

    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    let lib_dir = manifest.join("../../target/debug");
    assert!(
        lib_dir.join("libmealydc_ffi.a").exists(),
        "static library must be built before integration tests"
    );

    let work = std::env::temp_dir().join(format!("mealydc-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let source = work.join("smoke.c");
    let binary = work.join("smoke");
    std::fs::write(&source, PROGRAM).unwrap();

    let compile = Command::new(compiler)
        .arg(&source)
        .arg("-I")
        .arg(&include)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lmealydc_ffi")
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&binary)
        .output()
        .unwrap();
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary).output().unwrap();
    assert!(
        run.status.success(),
        "C smoke test failed with {:?}",
        run.status
    );
    std::fs::remove_dir_all(&work).ok();
}
