//! C ABI for the rlg library.
//!
//! Graphs travel as opaque `RlgGraph` handles; strings returned through
//! `char**` out-parameters are owned by the caller and must be released
//! with [`rlg_string_free`]. Every fallible call returns an
//! [`RlgStatus`] code; [`rlg_status_name`] maps codes to static names.
//! Panics are caught at the boundary and surface as a status code.
//!
//! The generated header lands in `include/rlg.h` at build time.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rlg::census;
use rlg::multigraph::Multigraph;
use rlg::rng::RngStream;
use rlg::sampler::{self, SamplerError};
use rlg::spectra;
use rlg::theory;

/// Result code of every fallible FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlgStatus {
    RlgStatusOk = 0,
    RlgStatusNullArgument = 1,
    RlgStatusInvalidGraph = 2,
    RlgStatusOddHalfEdges = 3,
    RlgStatusRejectionBudget = 4,
    RlgStatusBudgetExceeded = 5,
    RlgStatusLengthOutOfRange = 6,
    RlgStatusSpectralFailure = 7,
    RlgStatusInvalidJson = 8,
    RlgStatusInvalidUtf8 = 9,
    RlgStatusPanic = 10,
}

use RlgStatus::*;

/// Opaque handle to an immutable d-regular multigraph.
pub struct RlgGraph {
    inner: Multigraph,
}

fn sampler_status(e: &SamplerError) -> RlgStatus {
    match e {
        SamplerError::OddHalfEdges(_) => RlgStatusOddHalfEdges,
        SamplerError::RejectionBudgetExhausted(_) => RlgStatusRejectionBudget,
        SamplerError::BudgetExceeded { .. } => RlgStatusBudgetExceeded,
        SamplerError::Graph(_) => RlgStatusInvalidGraph,
    }
}

fn census_status(e: &census::CensusError) -> RlgStatus {
    match e {
        census::CensusError::LengthOutOfRange { .. } => RlgStatusLengthOutOfRange,
        census::CensusError::ResourceBudgetExceeded { .. } => RlgStatusBudgetExceeded,
        census::CensusError::SpectralUnavailable | census::CensusError::Spectra(_) => {
            RlgStatusSpectralFailure
        }
        census::CensusError::DivisibilityViolation { .. } => RlgStatusPanic,
    }
}

/// Run `body` with panics converted to a status code.
fn guarded(body: impl FnOnce() -> RlgStatus) -> RlgStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(RlgStatusPanic)
}

fn emit_graph(out: *mut *mut RlgGraph, g: Multigraph) -> RlgStatus {
    unsafe { *out = Box::into_raw(Box::new(RlgGraph { inner: g })) };
    RlgStatusOk
}

fn emit_string(out: *mut *mut c_char, text: String) -> RlgStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            RlgStatusOk
        }
        Err(_) => RlgStatusInvalidUtf8,
    }
}

/// Build a graph from a half-edge pairing array of length `n * d`.
///
/// # Safety
/// `pairing` must point to `len` readable `uint64_t`s and `out` must be
/// a valid location to store the new handle.
#[no_mangle]
pub unsafe extern "C" fn rlg_graph_from_pairing(
    d: u32,
    n: u32,
    pairing: *const u64,
    len: usize,
    out: *mut *mut RlgGraph,
) -> RlgStatus {
    if pairing.is_null() || out.is_null() {
        return RlgStatusNullArgument;
    }
    let slice = std::slice::from_raw_parts(pairing, len);
    guarded(|| {
        let pairing: Vec<usize> = slice.iter().map(|&h| h as usize).collect();
        match Multigraph::from_pairing(d as usize, n as usize, pairing) {
            Ok(g) => emit_graph(out, g),
            Err(_) => RlgStatusInvalidGraph,
        }
    })
}

/// Parse a graph from its JSON form `{"d":..,"n":..,"pairing":[..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn rlg_graph_from_json(
    json: *const c_char,
    out: *mut *mut RlgGraph,
) -> RlgStatus {
    if json.is_null() || out.is_null() {
        return RlgStatusNullArgument;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => return RlgStatusInvalidUtf8,
    };
    guarded(|| match Multigraph::from_json(text) {
        Ok(g) => emit_graph(out, g),
        Err(_) => RlgStatusInvalidJson,
    })
}

/// Draw from the configuration model `G(d, n)`. Same `(seed,
/// stream_index)` always yields the same graph.
///
/// # Safety
/// `out` must be a valid location to store the new handle.
#[no_mangle]
pub unsafe extern "C" fn rlg_graph_sample_configuration(
    d: u32,
    n: u32,
    seed: u64,
    stream_index: u64,
    out: *mut *mut RlgGraph,
) -> RlgStatus {
    if out.is_null() {
        return RlgStatusNullArgument;
    }
    guarded(|| {
        match sampler::sample_configuration(
            d as usize,
            n as usize,
            RngStream::new(seed, stream_index),
        ) {
            Ok(g) => emit_graph(out, g),
            Err(e) => sampler_status(&e),
        }
    })
}

/// Draw a uniformly random simple d-regular graph by rejection.
///
/// # Safety
/// `out` must be a valid location to store the new handle.
#[no_mangle]
pub unsafe extern "C" fn rlg_graph_sample_uniform_simple(
    d: u32,
    n: u32,
    seed: u64,
    stream_index: u64,
    max_attempts: u64,
    out: *mut *mut RlgGraph,
) -> RlgStatus {
    if out.is_null() {
        return RlgStatusNullArgument;
    }
    guarded(|| {
        match sampler::sample_uniform_simple(
            d as usize,
            n as usize,
            RngStream::new(seed, stream_index),
            max_attempts,
        ) {
            Ok(g) => emit_graph(out, g),
            Err(e) => sampler_status(&e),
        }
    })
}

/// Release a graph handle. NULL is a no-op.
///
/// # Safety
/// `g` must have come from this library and not have been freed yet.
#[no_mangle]
pub unsafe extern "C" fn rlg_graph_free(g: *mut RlgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Degree of the graph, or 0 for NULL.
///
/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn rlg_graph_degree(g: *const RlgGraph) -> u32 {
    g.as_ref().map_or(0, |g| g.inner.degree() as u32)
}

/// Vertex count of the graph, or 0 for NULL.
///
/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn rlg_graph_vertices(g: *const RlgGraph) -> u32 {
    g.as_ref().map_or(0, |g| g.inner.vertices() as u32)
}

/// Write the self-loop / multi-edge flags of the graph.
///
/// # Safety
/// All pointers must be valid; `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rlg_graph_structure_flags(
    g: *const RlgGraph,
    has_self_loop: *mut bool,
    has_multi_edge: *mut bool,
) -> RlgStatus {
    let (Some(g), false, false) = (g.as_ref(), has_self_loop.is_null(), has_multi_edge.is_null())
    else {
        return RlgStatusNullArgument;
    };
    let (sl, me) = g.inner.structure_flags();
    *has_self_loop = sl;
    *has_multi_edge = me;
    RlgStatusOk
}

/// Serialize the graph to its JSON form; the string is caller-owned.
///
/// # Safety
/// `g` must be a live handle and `out` a valid store location.
#[no_mangle]
pub unsafe extern "C" fn rlg_graph_to_json(
    g: *const RlgGraph,
    out: *mut *mut c_char,
) -> RlgStatus {
    let (Some(g), false) = (g.as_ref(), out.is_null()) else {
        return RlgStatusNullArgument;
    };
    guarded(|| emit_string(out, g.inner.to_json()))
}

/// Exact loop census at length `k` as JSON with big integers as decimal
/// strings: `{"k":..,"n_simp":..,"n_prim":..,"n_tr":..,"n_all":..}`.
/// `n_simp` is "0" for `k` above the vertex count.
///
/// # Safety
/// `g` must be a live handle and `out` a valid store location.
#[no_mangle]
pub unsafe extern "C" fn rlg_census_json(
    g: *const RlgGraph,
    k: u32,
    out: *mut *mut c_char,
) -> RlgStatus {
    let (Some(g), false) = (g.as_ref(), out.is_null()) else {
        return RlgStatusNullArgument;
    };
    if k < 1 {
        return RlgStatusLengthOutOfRange;
    }
    guarded(|| match census::full_census(&g.inner, k as usize) {
        Ok(c) => emit_string(
            out,
            format!(
                "{{\"k\":{},\"n_simp\":\"{}\",\"n_prim\":\"{}\",\"n_tr\":\"{}\",\"n_all\":\"{}\"}}",
                c.k, c.n_simp, c.n_prim, c.n_tr, c.n_all
            ),
        ),
        Err(e) => census_status(&e),
    })
}

/// Spectral report as JSON, same schema as the CLI `spectrum` command.
///
/// # Safety
/// `g` must be a live handle and `out` a valid store location.
#[no_mangle]
pub unsafe extern "C" fn rlg_spectrum_json(
    g: *const RlgGraph,
    direct_budget: u32,
    out: *mut *mut c_char,
) -> RlgStatus {
    let (Some(g), false) = (g.as_ref(), out.is_null()) else {
        return RlgStatusNullArgument;
    };
    guarded(|| match spectra::spectral_report(&g.inner, direct_budget as usize) {
        Ok(report) => {
            let nb: Vec<String> =
                report.nb_eigenvalues.iter().map(|c| format!("[{},{}]", c.re, c.im)).collect();
            let adjacency: Vec<String> =
                report.adjacency_eigenvalues.iter().map(|x| x.to_string()).collect();
            let fmt_opt = |v: Option<f64>| v.map_or("null".to_string(), |x| x.to_string());
            emit_string(
                out,
                format!(
                    "{{\"adjacency\":[{}],\"lambda\":{},\"mu\":{},\"nb\":[{}],\"residual\":{}}}",
                    adjacency.join(","),
                    fmt_opt(report.lambda_gap),
                    fmt_opt(report.mu_second),
                    nb.join(","),
                    report.residual_bound
                ),
            )
        }
        Err(_) => RlgStatusSpectralFailure,
    })
}

/// Exact expected simple-loop count under the configuration model, as
/// the string "numerator/denominator".
///
/// # Safety
/// `out` must be a valid store location.
#[no_mangle]
pub unsafe extern "C" fn rlg_expected_simple(
    d: u32,
    n: u32,
    k: u32,
    out: *mut *mut c_char,
) -> RlgStatus {
    if out.is_null() {
        return RlgStatusNullArgument;
    }
    guarded(|| match theory::exact_expected_simple(d as usize, n as usize, k as usize) {
        Ok(v) => emit_string(out, format!("{}/{}", v.numer(), v.denom())),
        Err(_) => RlgStatusLengthOutOfRange,
    })
}

/// Release a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must have come from this library and not have been freed yet.
#[no_mangle]
pub unsafe extern "C" fn rlg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn rlg_status_name(status: RlgStatus) -> *const c_char {
    let name: &'static CStr = match status {
        RlgStatusOk => c"ok",
        RlgStatusNullArgument => c"null argument",
        RlgStatusInvalidGraph => c"invalid graph",
        RlgStatusOddHalfEdges => c"odd half-edge count",
        RlgStatusRejectionBudget => c"rejection budget exhausted",
        RlgStatusBudgetExceeded => c"resource budget exceeded",
        RlgStatusLengthOutOfRange => c"length out of range",
        RlgStatusSpectralFailure => c"spectral computation failed",
        RlgStatusInvalidJson => c"invalid JSON",
        RlgStatusInvalidUtf8 => c"invalid UTF-8",
        RlgStatusPanic => c"internal panic",
    };
    name.as_ptr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
        unsafe { rlg_string_free(ptr) };
        s
    }

    #[test]
    fn pairing_round_trip_and_census() {
        let pairing: Vec<u64> = vec![3, 4, 5, 0, 1, 2];
        let mut g: *mut RlgGraph = ptr::null_mut();
        let status =
            unsafe { rlg_graph_from_pairing(3, 2, pairing.as_ptr(), pairing.len(), &mut g) };
        assert_eq!(status, RlgStatusOk);
        assert_eq!(unsafe { rlg_graph_degree(g) }, 3);
        assert_eq!(unsafe { rlg_graph_vertices(g) }, 2);

        let (mut sl, mut me) = (false, false);
        assert_eq!(unsafe { rlg_graph_structure_flags(g, &mut sl, &mut me) }, RlgStatusOk);
        assert_eq!((sl, me), (false, true));

        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { rlg_census_json(g, 2, &mut json) }, RlgStatusOk);
        assert_eq!(
            take_string(json),
            r#"{"k":2,"n_simp":"6","n_prim":"6","n_tr":"12","n_all":"6"}"#
        );

        let mut text: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { rlg_graph_to_json(g, &mut text) }, RlgStatusOk);
        let round = take_string(text);
        let mut g2: *mut RlgGraph = ptr::null_mut();
        let c = CString::new(round).unwrap();
        assert_eq!(unsafe { rlg_graph_from_json(c.as_ptr(), &mut g2) }, RlgStatusOk);
        unsafe {
            rlg_graph_free(g);
            rlg_graph_free(g2);
        }
    }

    #[test]
    fn sampling_is_deterministic_per_stream() {
        let mut a: *mut RlgGraph = ptr::null_mut();
        let mut b: *mut RlgGraph = ptr::null_mut();
        unsafe {
            assert_eq!(rlg_graph_sample_configuration(3, 10, 7, 1, &mut a), RlgStatusOk);
            assert_eq!(rlg_graph_sample_configuration(3, 10, 7, 1, &mut b), RlgStatusOk);
            let mut ja: *mut c_char = ptr::null_mut();
            let mut jb: *mut c_char = ptr::null_mut();
            assert_eq!(rlg_graph_to_json(a, &mut ja), RlgStatusOk);
            assert_eq!(rlg_graph_to_json(b, &mut jb), RlgStatusOk);
            assert_eq!(take_string(ja), take_string(jb));
            rlg_graph_free(a);
            rlg_graph_free(b);
        }
    }

    #[test]
    fn spectrum_json_has_expected_fields() {
        let mut g: *mut RlgGraph = ptr::null_mut();
        unsafe {
            assert_eq!(rlg_graph_sample_uniform_simple(3, 8, 3, 0, 10_000, &mut g), RlgStatusOk);
        }
        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { rlg_spectrum_json(g, 2000, &mut json) }, RlgStatusOk);
        let text = take_string(json);
        for key in ["\"adjacency\":", "\"lambda\":", "\"mu\":", "\"nb\":", "\"residual\":"] {
            assert!(text.contains(key), "missing {key} in {text}");
        }
        unsafe { rlg_graph_free(g) };
    }

    #[test]
    fn error_paths_report_codes() {
        unsafe {
            let mut g: *mut RlgGraph = ptr::null_mut();
            assert_eq!(
                rlg_graph_sample_configuration(3, 3, 1, 0, &mut g),
                RlgStatusOddHalfEdges
            );
            assert_eq!(
                rlg_graph_sample_uniform_simple(3, 2, 1, 0, 50, &mut g),
                RlgStatusRejectionBudget
            );
            let bad: Vec<u64> = vec![0, 1];
            assert_eq!(
                rlg_graph_from_pairing(1, 2, bad.as_ptr(), 2, &mut g),
                RlgStatusInvalidGraph
            );
            let text = CString::new("not json").unwrap();
            assert_eq!(rlg_graph_from_json(text.as_ptr(), &mut g), RlgStatusInvalidJson);
            assert_eq!(
                rlg_graph_from_pairing(1, 2, ptr::null(), 0, &mut g),
                RlgStatusNullArgument
            );
            let name = CStr::from_ptr(rlg_status_name(RlgStatusOddHalfEdges));
            assert_eq!(name.to_str().unwrap(), "odd half-edge count");
        }
    }

    #[test]
    fn expected_simple_matches_theory() {
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { rlg_expected_simple(3, 2, 1, &mut s) }, RlgStatusOk);
        assert_eq!(take_string(s), "12/5");
    }
}
