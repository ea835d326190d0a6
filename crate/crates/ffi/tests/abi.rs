use std::ffi::{CStr, CString};
use std::ptr;

use trigroup_ffi::*;

fn last_error() -> String {
    let p = tg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn parse_serialize_free() {
    let text = CString::new("n=3\ng1 g2 g3\ng2 g2 G1\n").unwrap();
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(tg_presentation_parse(text.as_ptr(), &mut p), TgStatus::Ok);
        assert_eq!(tg_presentation_generator_count(p), 3);
        assert_eq!(tg_presentation_relation_count(p), 2);
        let mut s = ptr::null_mut();
        assert_eq!(tg_presentation_serialize(p, &mut s), TgStatus::Ok);
        assert_eq!(
            CStr::from_ptr(s).to_str().unwrap(),
            "n=3\ng1 g2 g3\ng2 g2 G1\n"
        );
        tg_string_free(s);
        tg_presentation_free(p);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut p = ptr::null_mut();
    let bad = CString::new("n=2\ng1 G1 g2\n").unwrap();
    unsafe {
        assert_eq!(tg_presentation_parse(bad.as_ptr(), &mut p), TgStatus::Parse);
        assert!(p.is_null());
        assert!(last_error().contains("line 2"));
        assert_eq!(
            tg_presentation_parse(ptr::null(), &mut p),
            TgStatus::NullPointer
        );
        assert_eq!(
            tg_presentation_sample_binomial(5, 1.5, 0, &mut p),
            TgStatus::InvalidArgument
        );
        assert_eq!(tg_presentation_relation_count(ptr::null()), 0);
        tg_presentation_free(ptr::null_mut());
        tg_string_free(ptr::null_mut());
    }
}

#[test]
fn classify_and_gap() {
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(
            tg_presentation_sample_binomial(40, 20.0 * 40f64.ln() / 1600.0, 3, &mut p),
            TgStatus::Ok
        );
        let mut v = std::mem::MaybeUninit::<TgVerdict>::uninit();
        assert_eq!(tg_classify(p, 1e-8, true, v.as_mut_ptr()), TgStatus::Ok);
        let v = v.assume_init();
        assert_eq!(v.generators, 40);
        assert_eq!(v.relations as usize, tg_presentation_relation_count(p));
        assert_eq!(v.chi, 1 - 40 + v.relations as i64);
        assert_eq!(v.t_status, TgTStatus::Certified);
        let mut gap = 0.0;
        assert_eq!(tg_spectral_gap(p, &mut gap), TgStatus::Ok);
        assert_eq!(gap, v.lambda2);

        let mut skipped = std::mem::MaybeUninit::<TgVerdict>::uninit();
        assert_eq!(
            tg_classify(p, 1e-8, false, skipped.as_mut_ptr()),
            TgStatus::Ok
        );
        let skipped = skipped.assume_init();
        assert_eq!(skipped.t_status, TgTStatus::Skipped);
        assert!(skipped.lambda2.is_nan());
        assert_eq!(
            tg_classify(p, -1.0, true, ptr::null_mut()),
            TgStatus::NullPointer
        );
        tg_presentation_free(p);
    }
}

#[test]
fn uniform_sampler_is_seeded() {
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(
            tg_presentation_sample_uniform(6, 9, 42, &mut a),
            TgStatus::Ok
        );
        assert_eq!(
            tg_presentation_sample_uniform(6, 9, 42, &mut b),
            TgStatus::Ok
        );
        let (mut sa, mut sb) = (ptr::null_mut(), ptr::null_mut());
        tg_presentation_serialize(a, &mut sa);
        tg_presentation_serialize(b, &mut sb);
        assert_eq!(CStr::from_ptr(sa), CStr::from_ptr(sb));
        tg_string_free(sa);
        tg_string_free(sb);
        tg_presentation_free(a);
        tg_presentation_free(b);
    }
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/trigroup.h");
    for name in [
        "tg_last_error_message",
        "tg_presentation_parse",
        "tg_presentation_sample_binomial",
        "tg_presentation_sample_uniform",
        "tg_presentation_free",
        "tg_presentation_serialize",
        "tg_string_free",
        "tg_classify",
        "tg_spectral_gap",
        "typedef struct TgPresentation TgPresentation;",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
