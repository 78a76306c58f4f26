//! C ABI over the percolation library: opaque handles for graphs,
//! samples, and component labelings, status codes mirroring the
//! library's error variants, and a thread-local last-error message.
//!
//! Conventions: constructors return a status and write the handle
//! through an out-pointer; every handle has exactly one `_free`;
//! accessors taking a valid handle cannot fail. On any non-OK status
//! the thread-local message from [`pp_last_error`] describes the
//! problem. All entry points catch panics and turn them into
//! `PP_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use prodperc::components::{giant_stats, label_components, ComponentLabeling};
use prodperc::percolation::{sample_percolation, EdgeSample};
use prodperc::{build_graph, BuildOptions, Error, ProductGraph};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed graph expression or base graph.
    InvalidBase = 2,
    /// Argument outside its documented domain.
    InvalidArgument = 3,
    /// Handles belong to different graphs.
    GraphMismatch = 4,
    /// A resource guard refused the operation at this scale.
    Guard = 5,
    /// The requested structure does not exist at this scale.
    Unsatisfiable = 6,
    /// I/O failure.
    Io = 7,
    /// A panic was caught at the boundary.
    Internal = 8,
}

fn status_of(err: &Error) -> PpStatus {
    match err {
        Error::InvalidBase(_) | Error::BadFile { .. } => PpStatus::InvalidBase,
        Error::Parse { .. } | Error::InvalidArgument(_) | Error::Config(_) => {
            PpStatus::InvalidArgument
        }
        Error::GraphMismatch(_) => PpStatus::GraphMismatch,
        Error::Guard(_) | Error::TooLarge { .. } => PpStatus::Guard,
        Error::Unsatisfiable(_) => PpStatus::Unsatisfiable,
        Error::Io(_) => PpStatus::Io,
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NULs stripped");
    });
}

/// Message for this thread's most recent failure. The pointer stays
/// valid until the next failing call on the same thread; never freed by
/// the caller.
#[no_mangle]
pub extern "C" fn pp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn guarded(body: impl FnOnce() -> PpStatus) -> PpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic at the ffi boundary".into());
            set_error(&msg);
            PpStatus::Internal
        }
    }
}

/// Opaque product graph.
pub struct PpGraph {
    inner: Arc<ProductGraph>,
}

/// Opaque percolation sample.
pub struct PpSample {
    inner: EdgeSample,
}

/// Opaque component labeling.
pub struct PpLabeling {
    inner: ComponentLabeling,
}

/// Headline numbers of the largest component.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PpGiantStats {
    pub n: u64,
    pub giant_size: u64,
    pub fraction: f64,
    pub second_size: u64,
    pub giant_edges: u64,
    pub excess: u64,
}

/// Builds the product graph named by `expr` (for example `"Q14"` or
/// `"K4xC9^2"`) and writes a handle through `out`.
#[no_mangle]
pub unsafe extern "C" fn pp_graph_build(
    expr: *const c_char,
    out: *mut *mut PpGraph,
) -> PpStatus {
    guarded(|| {
        if expr.is_null() || out.is_null() {
            set_error("expr and out must be non-null");
            return PpStatus::NullPointer;
        }
        let text = match CStr::from_ptr(expr).to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("expr is not valid UTF-8");
                return PpStatus::InvalidArgument;
            }
        };
        match build_graph(text, &BuildOptions::default()) {
            Ok(graph) => {
                *out = Box::into_raw(Box::new(PpGraph {
                    inner: Arc::new(graph),
                }));
                PpStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn pp_graph_free(graph: *mut PpGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices.
#[no_mangle]
pub unsafe extern "C" fn pp_graph_n(graph: *const PpGraph) -> u64 {
    (*graph).inner.n()
}

/// Number of edges.
#[no_mangle]
pub unsafe extern "C" fn pp_graph_edge_count(graph: *const PpGraph) -> u64 {
    (*graph).inner.edge_count()
}

/// Number of product factors.
#[no_mangle]
pub unsafe extern "C" fn pp_graph_dimension(graph: *const PpGraph) -> usize {
    (*graph).inner.dimension()
}

/// Common degree, or -1 when the product is irregular.
#[no_mangle]
pub unsafe extern "C" fn pp_graph_degree(graph: *const PpGraph) -> i64 {
    (*graph)
        .inner
        .regular_degree()
        .map(|d| d as i64)
        .unwrap_or(-1)
}

/// Samples bond percolation: edge `i` survives iff the seeded counter
/// stream assigns it a value below `p`. Identical `(graph, p, seed)`
/// triples reproduce the identical sample.
#[no_mangle]
pub unsafe extern "C" fn pp_percolate(
    graph: *const PpGraph,
    p: f64,
    seed: u64,
    out: *mut *mut PpSample,
) -> PpStatus {
    guarded(|| {
        if graph.is_null() || out.is_null() {
            set_error("graph and out must be non-null");
            return PpStatus::NullPointer;
        }
        match sample_percolation(&(*graph).inner, p, seed) {
            Ok(sample) => {
                *out = Box::into_raw(Box::new(PpSample { inner: sample }));
                PpStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn pp_sample_free(sample: *mut PpSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Number of retained edges.
#[no_mangle]
pub unsafe extern "C" fn pp_sample_retained_count(sample: *const PpSample) -> u64 {
    (*sample).inner.retained_count()
}

/// Whether the product edge `{u, v}` exists and survived.
#[no_mangle]
pub unsafe extern "C" fn pp_sample_retained_pair(
    sample: *const PpSample,
    u: u64,
    v: u64,
) -> bool {
    (*sample).inner.retained_pair(u, v)
}

/// Labels the connected components of a sample.
#[no_mangle]
pub unsafe extern "C" fn pp_label_components(
    sample: *const PpSample,
    out: *mut *mut PpLabeling,
) -> PpStatus {
    guarded(|| {
        if sample.is_null() || out.is_null() {
            set_error("sample and out must be non-null");
            return PpStatus::NullPointer;
        }
        match label_components(&(*sample).inner) {
            Ok(labeling) => {
                *out = Box::into_raw(Box::new(PpLabeling { inner: labeling }));
                PpStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn pp_labeling_free(labeling: *mut PpLabeling) {
    if !labeling.is_null() {
        drop(Box::from_raw(labeling));
    }
}

/// Number of components.
#[no_mangle]
pub unsafe extern "C" fn pp_labeling_component_count(
    labeling: *const PpLabeling,
) -> usize {
    (*labeling).inner.component_count()
}

/// Component id of vertex `v`.
#[no_mangle]
pub unsafe extern "C" fn pp_labeling_component_of(
    labeling: *const PpLabeling,
    v: u64,
) -> u32 {
    (*labeling).inner.component_of(v)
}

/// Fills `stats` with the largest component's headline numbers.
#[no_mangle]
pub unsafe extern "C" fn pp_labeling_giant_stats(
    labeling: *const PpLabeling,
    stats: *mut PpGiantStats,
) -> PpStatus {
    guarded(|| {
        if labeling.is_null() || stats.is_null() {
            set_error("labeling and stats must be non-null");
            return PpStatus::NullPointer;
        }
        let s = giant_stats(&(*labeling).inner);
        *stats = PpGiantStats {
            n: s.n,
            giant_size: s.giant_size,
            fraction: s.fraction,
            second_size: s.second_size,
            giant_edges: s.giant_edges,
            excess: s.excess,
        };
        PpStatus::Ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::ptr;

    #[test]
    fn build_percolate_label_roundtrip() {
        unsafe {
            let expr = CString::new("Q6").unwrap();
            let mut graph: *mut PpGraph = ptr::null_mut();
            assert_eq!(pp_graph_build(expr.as_ptr(), &mut graph), PpStatus::Ok);
            assert_eq!(pp_graph_n(graph), 64);
            assert_eq!(pp_graph_edge_count(graph), 192);
            assert_eq!(pp_graph_degree(graph), 6);
            assert_eq!(pp_graph_dimension(graph), 6);

            let mut sample: *mut PpSample = ptr::null_mut();
            assert_eq!(pp_percolate(graph, 1.0, 7, &mut sample), PpStatus::Ok);
            assert_eq!(pp_sample_retained_count(sample), 192);
            assert!(pp_sample_retained_pair(sample, 0, 1));
            assert!(!pp_sample_retained_pair(sample, 0, 3));

            let mut labeling: *mut PpLabeling = ptr::null_mut();
            assert_eq!(pp_label_components(sample, &mut labeling), PpStatus::Ok);
            assert_eq!(pp_labeling_component_count(labeling), 1);

            let mut stats = PpGiantStats {
                n: 0,
                giant_size: 0,
                fraction: 0.0,
                second_size: 0,
                giant_edges: 0,
                excess: 0,
            };
            assert_eq!(pp_labeling_giant_stats(labeling, &mut stats), PpStatus::Ok);
            assert_eq!(stats.giant_size, 64);
            assert_eq!(stats.second_size, 0);

            pp_labeling_free(labeling);
            pp_sample_free(sample);
            pp_graph_free(graph);
        }
    }

    #[test]
    fn reproducible_samples_across_handles() {
        unsafe {
            let expr = CString::new("Q8").unwrap();
            let mut a: *mut PpGraph = ptr::null_mut();
            let mut b: *mut PpGraph = ptr::null_mut();
            assert_eq!(pp_graph_build(expr.as_ptr(), &mut a), PpStatus::Ok);
            assert_eq!(pp_graph_build(expr.as_ptr(), &mut b), PpStatus::Ok);
            let mut sa: *mut PpSample = ptr::null_mut();
            let mut sb: *mut PpSample = ptr::null_mut();
            assert_eq!(pp_percolate(a, 0.4, 123, &mut sa), PpStatus::Ok);
            assert_eq!(pp_percolate(b, 0.4, 123, &mut sb), PpStatus::Ok);
            assert_eq!(
                pp_sample_retained_count(sa),
                pp_sample_retained_count(sb)
            );
            for u in 0..256u64 {
                for &v in &[u ^ 1, u ^ 2, u ^ 128] {
                    assert_eq!(
                        pp_sample_retained_pair(sa, u, v),
                        pp_sample_retained_pair(sb, u, v)
                    );
                }
            }
            pp_sample_free(sa);
            pp_sample_free(sb);
            pp_graph_free(a);
            pp_graph_free(b);
        }
    }

    #[test]
    fn errors_set_status_and_message() {
        unsafe {
            let expr = CString::new("Z99").unwrap();
            let mut graph: *mut PpGraph = ptr::null_mut();
            let status = pp_graph_build(expr.as_ptr(), &mut graph);
            assert_ne!(status, PpStatus::Ok);
            let msg = CStr::from_ptr(pp_last_error()).to_str().unwrap();
            assert!(!msg.is_empty());

            assert_eq!(
                pp_graph_build(ptr::null(), &mut graph),
                PpStatus::NullPointer
            );

            let good = CString::new("Q4").unwrap();
            assert_eq!(pp_graph_build(good.as_ptr(), &mut graph), PpStatus::Ok);
            let mut sample: *mut PpSample = ptr::null_mut();
            assert_eq!(
                pp_percolate(graph, 1.5, 0, &mut sample),
                PpStatus::InvalidArgument
            );
            pp_graph_free(graph);
        }
    }
}
