//! Drive the exported functions the way a C caller would.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use liouville::error::Error;
use liouville::rational::parse_rational;
use liouville_ffi::*;

fn owned(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { lv_string_free(p) };
    s
}

fn last_error() -> String {
    let p = lv_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn parse(expr: &str) -> Result<*mut LvReal, LvStatus> {
    let c = CString::new(expr).unwrap();
    let mut h = ptr::null_mut();
    match unsafe { lv_real_parse(c.as_ptr(), &mut h) } {
        LvStatus::Ok => Ok(h),
        s => Err(s),
    }
}

#[test]
fn decimal_and_enclosure() {
    let h = parse("1/3 + sqrt(2)").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { lv_real_decimal(h, 12, &mut s) }, LvStatus::Ok);
    assert_eq!(owned(s), "1.747546895706");
    let (mut lo, mut hi) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(
        unsafe { lv_real_enclosure(h, 30, &mut lo, &mut hi) },
        LvStatus::Ok
    );
    let lo = parse_rational(&owned(lo)).unwrap();
    let hi = parse_rational(&owned(hi)).unwrap();
    assert!(lo < hi);
    unsafe { lv_real_free(h) };
}

#[test]
fn certify_then_verify() {
    let h = parse("liouville(10)").unwrap();
    let label = CString::new("L").unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { lv_certify(h, 4, label.as_ptr(), &mut json) },
        LvStatus::Ok
    );
    let json = owned(json);
    assert!(json.contains("\"label\": \"L\""), "{json}");
    let c = CString::new(json.clone()).unwrap();
    let mut level = 0;
    assert_eq!(unsafe { lv_verify(c.as_ptr(), &mut level) }, LvStatus::Ok);
    assert_eq!(level, 4);

    let mut doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    doc["subjects"][0]["witnesses"][3]["q"] = "999999".into();
    let c = CString::new(doc.to_string()).unwrap();
    assert_eq!(
        unsafe { lv_verify(c.as_ptr(), ptr::null_mut()) },
        LvStatus::InvalidWitness
    );
    assert!(last_error().starts_with("InvalidWitness:"));
    unsafe { lv_real_free(h) };
}

#[test]
fn errors_map_to_statuses() {
    assert_eq!(parse("sqrt(-1)").unwrap_err(), LvStatus::DomainError);
    assert!(last_error().starts_with("DomainError:"));
    assert_eq!(parse("1 +").unwrap_err(), LvStatus::ParseError);

    let h = parse("sqrt(2)").unwrap();
    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { lv_certify(h, 4, ptr::null(), &mut json) },
        LvStatus::WitnessSearchExhausted
    );
    assert!(json.is_null());
    unsafe { lv_real_free(h) };

    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { lv_real_parse(ptr::null(), &mut h) },
        LvStatus::NullPointer
    );
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { lv_real_parse(bad.as_ptr().cast(), &mut h) },
        LvStatus::Utf8
    );

    // A successful call clears the stored message.
    let h = parse("2").unwrap();
    assert!(lv_last_error().is_null());
    unsafe { lv_real_free(h) };
}

#[test]
fn status_names_match_error_tokens() {
    let samples = [
        Error::DivisorNotSeparatedFromZero { budget: 1 },
        Error::NotSeparatedFromZero { budget: 1 },
        Error::DomainError(String::new()),
        Error::AmbiguousNearestInteger { budget: 1 },
        Error::RefinementBudgetExceeded { budget: 1 },
        Error::InvalidSchedule(String::new()),
        Error::ZeroDistance,
        Error::WitnessSearchExhausted { level: 1 },
        Error::ImageCollapse(String::new()),
        Error::BudgetExceeded(String::new()),
        Error::NoRootInJ(String::new()),
        Error::NonMonotoneSlice(String::new()),
        Error::DomainEscape(String::new()),
        Error::InvalidRelation,
        Error::ZeroP,
        Error::ConstantF,
        Error::InvalidWitness(String::new()),
        Error::Parse(String::new()),
        Error::InvalidArgument(String::new()),
        Error::Format(String::new()),
    ];
    let mut codes = Vec::new();
    for e in &samples {
        let status = LvStatus::from(e);
        let name = unsafe { CStr::from_ptr(lv_status_name(status)) };
        assert_eq!(name.to_str().unwrap(), e.token());
        codes.push(status as i32);
    }
    codes.sort();
    codes.dedup();
    assert_eq!(codes.len(), samples.len());
}

#[test]
fn independence() {
    let polys: Vec<CString> = ["z", "z^2"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const c_char> = polys.iter().map(|c| c.as_ptr()).collect();
    let mut indep = -1;
    let status = unsafe {
        lv_expindep(
            LvIndepMode::Linear,
            ptrs.as_ptr(),
            ptrs.len(),
            &mut indep,
            ptr::null_mut(),
        )
    };
    assert_eq!((status, indep), (LvStatus::Ok, 1));

    let polys: Vec<CString> = ["z", "2z + 1"]
        .iter()
        .map(|s| CString::new(*s).unwrap())
        .collect();
    let ptrs: Vec<*const c_char> = polys.iter().map(|c| c.as_ptr()).collect();
    let mut detail = ptr::null_mut();
    let status = unsafe {
        lv_expindep(
            LvIndepMode::Algebraic,
            ptrs.as_ptr(),
            ptrs.len(),
            &mut indep,
            &mut detail,
        )
    };
    assert_eq!((status, indep), (LvStatus::Ok, 0));
    let v: serde_json::Value = serde_json::from_str(&owned(detail)).unwrap();
    assert_eq!(v["status"], "dependent");
}
