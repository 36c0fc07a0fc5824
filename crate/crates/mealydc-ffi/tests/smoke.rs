use std::ffi::{c_char, CStr, CString};
use std::ptr;

use mealydc_ffi::*;

use MdcStatus::*;

const SWAP: &str = r#"{"kind":"machine","input":{"size":1},"output":{"size":1},"states":{"size":2},"d":[[1,0]],"s":[[0,0]]}"#;
const ABSORBING: &str = r#"{"kind":"monad","machine":{"input":{"size":2},"output":{"size":2},"states":{"size":2},"d":[[0,1],[0,1]],"s":[[0,0],[1,0]]},"e0":0,"mu":[[0,1],[1,1]]}"#;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn machine_round_trip_run_compose() {
    let json = cstr(SWAP);
    let mut m: *mut MdcMachine = ptr::null_mut();
    unsafe {
        assert_eq!(mdc_machine_from_json(json.as_ptr(), &mut m), MdcStatusOk);
        assert_eq!(mdc_machine_input_size(m), 1);
        assert_eq!(mdc_machine_output_size(m), 1);
        assert_eq!(mdc_machine_state_count(m), 2);

        let word = [0usize, 0, 0];
        let mut out = [usize::MAX; 3];
        let mut state = usize::MAX;
        assert_eq!(
            mdc_machine_run(m, 0, word.as_ptr(), 3, out.as_mut_ptr(), &mut state),
            MdcStatusOk
        );
        assert_eq!(out, [0, 0, 0]);
        assert_eq!(state, 1, "three steps from 0 end on the swapped state");
        assert_eq!(
            mdc_machine_run(m, 5, word.as_ptr(), 3, out.as_mut_ptr(), &mut state),
            MdcStatusInvalidInput
        );

        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(mdc_machine_to_json(m, &mut text), MdcStatusOk);
        let round = CStr::from_ptr(text).to_str().unwrap().to_owned();
        mdc_string_free(text);
        let mut m2: *mut MdcMachine = ptr::null_mut();
        assert_eq!(
            mdc_machine_from_json(cstr(&round).as_ptr(), &mut m2),
            MdcStatusOk
        );

        let mut c: *mut MdcMachine = ptr::null_mut();
        assert_eq!(mdc_machine_compose(m, m2, &mut c), MdcStatusOk);
        assert_eq!(mdc_machine_state_count(c), 4);
        mdc_machine_free(c);
        mdc_machine_free(m2);
        mdc_machine_free(m);
    }
}

#[test]
fn monad_check_reports_witness() {
    unsafe {
        let mut m: *mut MdcMonad = ptr::null_mut();
        assert_eq!(
            mdc_monad_from_json(cstr(ABSORBING).as_ptr(), &mut m),
            MdcStatusOk
        );
        let mut report: *mut c_char = ptr::null_mut();
        assert_eq!(mdc_monad_check(m, &mut report), MdcStatusOk);
        assert_eq!(CStr::from_ptr(report).to_str().unwrap(), r#"{"pass":true}"#);
        mdc_string_free(report);
        mdc_monad_free(m);

        let broken = ABSORBING.replace("\"mu\":[[0,1],[1,1]]", "\"mu\":[[0,1],[0,1]]");
        let mut m: *mut MdcMonad = ptr::null_mut();
        assert_eq!(
            mdc_monad_from_json(cstr(&broken).as_ptr(), &mut m),
            MdcStatusOk
        );
        let mut report: *mut c_char = ptr::null_mut();
        assert_eq!(mdc_monad_check(m, &mut report), MdcStatusViolation);
        let v: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(report).to_str().unwrap()).unwrap();
        assert_eq!(v["axiom"], "ma_2");
        assert_eq!(v["witness"]["e"], 1);
        mdc_string_free(report);
        mdc_monad_free(m);
    }
}

#[test]
fn status_edges() {
    unsafe {
        let mut m: *mut MdcMachine = ptr::null_mut();
        assert_eq!(
            mdc_machine_from_json(ptr::null(), &mut m),
            MdcStatusNullPointer
        );
        assert_eq!(
            mdc_machine_from_json(cstr("not json").as_ptr(), &mut m),
            MdcStatusInvalidInput
        );
        assert_eq!(
            mdc_machine_from_json(cstr(ABSORBING).as_ptr(), &mut m),
            MdcStatusInvalidInput
        );
        assert_eq!(
            mdc_machine_run(
                ptr::null(),
                0,
                ptr::null(),
                0,
                ptr::null_mut(),
                ptr::null_mut()
            ),
            MdcStatusNullPointer
        );

        let mut count = 0usize;
        assert_eq!(mdc_enumerate_monads_count(2, 2, &mut count), MdcStatusOk);
        assert_eq!(count, 32);
        assert_eq!(
            mdc_enumerate_monads_count(3, 3, &mut count),
            MdcStatusBudgetExceeded
        );

        assert_eq!(
            CStr::from_ptr(mdc_version()).to_str().unwrap(),
            env!("CARGO_PKG_VERSION")
        );
    }
}
