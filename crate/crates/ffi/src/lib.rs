//! C ABI for the restname library.
//!
//! Suites travel across the boundary as opaque handles; strings are
//! NUL-terminated UTF-8 owned by whichever side allocated them. Every
//! fallible call returns a [`RestnameStatus`]; on failure the thread-local
//! error message is available via [`restname_last_error_message`].
//!
//! The C header is generated into `include/restname.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use restname::ir;
use restname::model::TestSuite;
use restname::naming::{name_suite, Convention, NamingConfig, NamingError};
use restname::ordering::sort_suite;
use restname::parser::{parse_source, ParseOptions, SourceFile};
use restname::rewrite::{apply_to_source, PipelineError, RewriteError};

/// Result of every fallible call. Mirrors the CLI exit-code contract, with
/// extra codes for boundary misuse.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestnameStatus {
    Ok = 0,
    ParseError = 1,
    ConfigError = 2,
    ConstraintError = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    InternalError = 6,
}

/// Opaque suite handle. Create with one of the constructors, release with
/// [`restname_suite_free`].
pub struct RestnameSuite {
    inner: TestSuite,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

/// Owned copy of the last error message on this thread, or null when the
/// previous call succeeded. Free with [`restname_string_free`].
#[no_mangle]
pub extern "C" fn restname_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Frees a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by a restname function and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn restname_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a suite handle. Passing null is a no-op.
///
/// # Safety
/// `suite` must be a pointer previously returned by a restname constructor
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn restname_suite_free(suite: *mut RestnameSuite) {
    if !suite.is_null() {
        drop(Box::from_raw(suite));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, RestnameStatus> {
    if ptr.is_null() {
        return Err(RestnameStatus::NullArgument);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| RestnameStatus::InvalidUtf8)
}

fn config_from_raw(
    convention: c_int,
    max_len: usize,
    suppress_mechanisms: c_int,
) -> Result<NamingConfig, RestnameStatus> {
    let convention = match convention {
        0 => Convention::Number,
        1 => Convention::Result,
        2 => Convention::Query,
        3 => Convention::Condition,
        other => {
            set_error(&format!("unknown convention code {other}"));
            return Err(RestnameStatus::ConfigError);
        }
    };
    let config = NamingConfig {
        convention,
        max_name_length: max_len,
        suppress_majority_mechanism: suppress_mechanisms != 0,
        ..NamingConfig::default()
    };
    if let Err(err) = config.validate() {
        set_error(&err.to_string());
        return Err(RestnameStatus::ConfigError);
    }
    Ok(config)
}

fn naming_status(err: &NamingError) -> RestnameStatus {
    match err {
        NamingError::InvalidConfig { .. } => RestnameStatus::ConfigError,
        _ => RestnameStatus::ConstraintError,
    }
}

fn guard<F: FnOnce() -> RestnameStatus>(f: F) -> RestnameStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            RestnameStatus::InternalError
        }
    }
}

/// Parses REST-Assured-style source text into a suite handle. `file_name`
/// picks the dialect by extension (`.kt` is Kotlin) and labels diagnostics.
///
/// # Safety
/// `text` and `file_name` must be valid NUL-terminated strings; `out` must
/// point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn restname_suite_parse_source(
    text: *const c_char,
    file_name: *const c_char,
    lenient: c_int,
    out: *mut *mut RestnameSuite,
) -> RestnameStatus {
    guard(|| {
        clear_error();
        if out.is_null() {
            set_error("out pointer is null");
            return RestnameStatus::NullArgument;
        }
        let (text, file_name) = match (read_str(text), read_str(file_name)) {
            (Ok(t), Ok(f)) => (t, f),
            (Err(status), _) | (_, Err(status)) => {
                set_error("text and file_name must be valid UTF-8 strings");
                return status;
            }
        };
        let file = SourceFile::from_path_and_text(file_name, text);
        let options = ParseOptions {
            lenient: lenient != 0,
            ..ParseOptions::default()
        };
        match parse_source(&file, &options) {
            Ok(outcome) => {
                *out = Box::into_raw(Box::new(RestnameSuite {
                    inner: outcome.suite,
                }));
                RestnameStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                RestnameStatus::ParseError
            }
        }
    })
}

/// Reads a suite from its IR JSON document. With `lenient` unset, unknown
/// JSON fields are rejected.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must point to
/// writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn restname_suite_from_json(
    json: *const c_char,
    lenient: c_int,
    out: *mut *mut RestnameSuite,
) -> RestnameStatus {
    guard(|| {
        clear_error();
        if out.is_null() {
            set_error("out pointer is null");
            return RestnameStatus::NullArgument;
        }
        let json = match read_str(json) {
            Ok(j) => j,
            Err(status) => {
                set_error("json must be a valid UTF-8 string");
                return status;
            }
        };
        match ir::from_json(json, lenient == 0) {
            Ok(suite) => {
                *out = Box::into_raw(Box::new(RestnameSuite { inner: suite }));
                RestnameStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                RestnameStatus::ParseError
            }
        }
    })
}

/// Serializes a suite back to its canonical IR JSON. Returns null only when
/// `suite` is null. Free the result with [`restname_string_free`].
///
/// # Safety
/// `suite` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn restname_suite_to_json(suite: *const RestnameSuite) -> *mut c_char {
    if suite.is_null() {
        set_error("suite handle is null");
        return ptr::null_mut();
    }
    let json = ir::to_json(&(*suite).inner);
    CString::new(json.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Number of tests in the suite; zero for a null handle.
///
/// # Safety
/// `suite` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn restname_suite_test_count(suite: *const RestnameSuite) -> usize {
    if suite.is_null() {
        return 0;
    }
    (*suite).inner.tests.len()
}

/// Sorts the suite by path, status group, and verb into a new handle; the
/// input handle is untouched.
///
/// # Safety
/// `suite` must be a live handle; `out` must point to writable storage for
/// one pointer.
#[no_mangle]
pub unsafe extern "C" fn restname_suite_sort(
    suite: *const RestnameSuite,
    out: *mut *mut RestnameSuite,
) -> RestnameStatus {
    guard(|| {
        clear_error();
        if suite.is_null() || out.is_null() {
            set_error("suite and out must be non-null");
            return RestnameStatus::NullArgument;
        }
        match sort_suite(&(*suite).inner) {
            Ok(sorted) => {
                *out = Box::into_raw(Box::new(RestnameSuite { inner: sorted }));
                RestnameStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                naming_status(&err)
            }
        }
    })
}

/// Names every test in suite order and returns the names as a JSON string
/// array. Conventions: 0 number, 1 result, 2 query, 3 condition. Free the
/// result with [`restname_string_free`].
///
/// # Safety
/// `suite` must be a live handle; `out_json` must point to writable storage
/// for one pointer.
#[no_mangle]
pub unsafe extern "C" fn restname_suite_names_json(
    suite: *const RestnameSuite,
    convention: c_int,
    max_len: usize,
    suppress_mechanisms: c_int,
    out_json: *mut *mut c_char,
) -> RestnameStatus {
    guard(|| {
        clear_error();
        if suite.is_null() || out_json.is_null() {
            set_error("suite and out_json must be non-null");
            return RestnameStatus::NullArgument;
        }
        let config = match config_from_raw(convention, max_len, suppress_mechanisms) {
            Ok(config) => config,
            Err(status) => return status,
        };
        match name_suite(&(*suite).inner, &config) {
            Ok(names) => {
                let rendered: Vec<&str> = names.iter().map(|n| n.rendered.as_str()).collect();
                let json = serde_json_string(&rendered);
                match CString::new(json) {
                    Ok(s) => {
                        *out_json = s.into_raw();
                        RestnameStatus::Ok
                    }
                    Err(_) => {
                        set_error("generated names contained an interior NUL");
                        RestnameStatus::InternalError
                    }
                }
            }
            Err(err) => {
                set_error(&err.to_string());
                naming_status(&err)
            }
        }
    })
}

fn serde_json_string(names: &[&str]) -> String {
    // names are identifier-safe; a hand-rolled emitter avoids re-exporting
    // serde_json across the ABI crate
    let mut out = String::from("[");
    for (i, name) in names.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('"');
        for c in name.chars() {
            match c {
                '"' => out.push_str("\\\""),
                '\\' => out.push_str("\\\\"),
                c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                c => out.push(c),
            }
        }
        out.push('"');
    }
    out.push(']');
    out
}

/// Full pipeline over source text: parse, sort, name, and rewrite. The
/// rewritten file is returned through `out_text`; free it with
/// [`restname_string_free`].
///
/// # Safety
/// `text` and `file_name` must be valid NUL-terminated strings; `out_text`
/// must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn restname_apply_source(
    text: *const c_char,
    file_name: *const c_char,
    convention: c_int,
    max_len: usize,
    suppress_mechanisms: c_int,
    lenient: c_int,
    out_text: *mut *mut c_char,
) -> RestnameStatus {
    guard(|| {
        clear_error();
        if out_text.is_null() {
            set_error("out_text pointer is null");
            return RestnameStatus::NullArgument;
        }
        let (text, file_name) = match (read_str(text), read_str(file_name)) {
            (Ok(t), Ok(f)) => (t, f),
            (Err(status), _) | (_, Err(status)) => {
                set_error("text and file_name must be valid UTF-8 strings");
                return status;
            }
        };
        let config = match config_from_raw(convention, max_len, suppress_mechanisms) {
            Ok(config) => config,
            Err(status) => return status,
        };
        let file = SourceFile::from_path_and_text(file_name, text);
        let options = ParseOptions {
            lenient: lenient != 0,
            ..ParseOptions::default()
        };
        match apply_to_source(&file, &options, &config, None) {
            Ok(rewritten) => match CString::new(rewritten.replace('\0', " ")) {
                Ok(s) => {
                    *out_text = s.into_raw();
                    RestnameStatus::Ok
                }
                Err(_) => {
                    set_error("rewritten text contained an interior NUL");
                    RestnameStatus::InternalError
                }
            },
            Err(PipelineError::Parse(err)) => {
                set_error(&err.to_string());
                RestnameStatus::ParseError
            }
            Err(PipelineError::Rewrite(RewriteError::Naming(err))) => {
                set_error(&err.to_string());
                naming_status(&err)
            }
            Err(PipelineError::Rewrite(err)) => {
                set_error(&err.to_string());
                RestnameStatus::ConstraintError
            }
        }
    })
}
