//! C ABI over the `siirv` library.
//!
//! Every fallible call returns a [`SiirvStatus`]; on failure the message is
//! available from [`siirv_last_error`] on the same thread until the next call.
//! Objects are opaque handles owned by the caller and released with the
//! matching `*_free` function. Strings returned by the library are released
//! with [`siirv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use siirv::dist::{draw_samples, exact_pmf, tv_distance, KIrv, KSiirv};
use siirv::hypothesis::{Hypothesis, PreparedSampler};
use siirv::learn::LearnConfig;
use siirv::rng::{stream, RngBits};
use siirv::run::{run_algorithm, Algorithm};
use siirv::source::{ModelSource, Replay};
use siirv::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiirvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidModel = 3,
    InsufficientSamples = 4,
    BudgetExceeded = 5,
    Unsupported = 6,
    Numerical = 7,
    Io = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiirvAlgorithm {
    Fourier = 0,
    Empirical = 1,
    Optimal2 = 2,
    OptimalK = 3,
    Heavy = 4,
    SparseFt = 5,
}

impl From<SiirvAlgorithm> for Algorithm {
    fn from(a: SiirvAlgorithm) -> Self {
        match a {
            SiirvAlgorithm::Fourier => Algorithm::Fourier,
            SiirvAlgorithm::Empirical => Algorithm::Empirical,
            SiirvAlgorithm::Optimal2 => Algorithm::Optimal2,
            SiirvAlgorithm::OptimalK => Algorithm::Optimalk,
            SiirvAlgorithm::Heavy => Algorithm::Heavy,
            SiirvAlgorithm::SparseFt => Algorithm::Sparseft,
        }
    }
}

/// A k-SIIRV: an ordered list of independent k-IRVs.
pub struct SiirvModel(KSiirv);

/// A learned hypothesis (dense, sparse-Fourier or Gaussian plus IRV).
pub struct SiirvHypothesis(Hypothesis);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SiirvStatus {
    match e {
        Error::InvalidModel(_) => SiirvStatus::InvalidModel,
        Error::InvalidArgument(_) | Error::EmptySamples => SiirvStatus::InvalidArgument,
        Error::InsufficientSamples { .. } => SiirvStatus::InsufficientSamples,
        Error::BudgetExceeded { .. } => SiirvStatus::BudgetExceeded,
        Error::Unsupported(_) => SiirvStatus::Unsupported,
        Error::ImaginaryResidual(_) | Error::RangeCheckFailed { .. } => SiirvStatus::Numerical,
        Error::Io(_) => SiirvStatus::Io,
    }
}

enum Fail {
    Null,
    Small(usize),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, clearing the last error first and translating failures and panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SiirvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SiirvStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            SiirvStatus::NullPointer
        }
        Ok(Err(Fail::Small(need))) => {
            set_error(format!("buffer too small: need {need} elements"));
            SiirvStatus::BufferTooSmall
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            SiirvStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null);
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out<T>(p: *mut T, v: T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    p.write(v);
    Ok(())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail::Lib(Error::InvalidArgument(format!("not UTF-8: {e}"))))
}

fn json_err(e: serde_json::Error) -> Fail {
    Fail::Lib(Error::InvalidArgument(e.to_string()))
}

unsafe fn give_string(s: String, dst: *mut *mut c_char) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail::Lib(Error::InvalidArgument(e.to_string())))?;
    out(dst, c.into_raw())
}

/// Message for the last failed call on this thread, or null if it succeeded.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn siirv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn siirv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a model from `n` rows of `k` probabilities, stored row-major.
///
/// # Safety
/// `probs` must point to `n * k` doubles; `model` must be writable.
#[no_mangle]
pub unsafe extern "C" fn siirv_model_new(
    k: usize,
    n: usize,
    probs: *const f64,
    model: *mut *mut SiirvModel,
) -> SiirvStatus {
    guard(|| {
        let len = n
            .checked_mul(k)
            .ok_or(Fail::Lib(Error::InvalidArgument("n * k overflows".into())))?;
        let p = slice(probs, len)?;
        if k == 0 {
            return Err(Error::InvalidModel("k must be at least 2".into()).into());
        }
        let comps = p
            .chunks(k)
            .map(|c| KIrv::new(c.to_vec()))
            .collect::<siirv::Result<Vec<_>>>()?;
        let m = KSiirv::new(comps)?;
        out(model, Box::into_raw(Box::new(SiirvModel(m))))
    })
}

/// Parses a model from its JSON form `{"k": .., "components": [[..], ..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `model` must be writable.
#[no_mangle]
pub unsafe extern "C" fn siirv_model_from_json(
    json: *const c_char,
    model: *mut *mut SiirvModel,
) -> SiirvStatus {
    guard(|| {
        let m: KSiirv = serde_json::from_str(str_arg(json)?).map_err(json_err)?;
        out(model, Box::into_raw(Box::new(SiirvModel(m))))
    })
}

/// Serializes a model to JSON; free the result with `siirv_string_free`.
///
/// # Safety
/// `model` must be a live handle; `json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn siirv_model_to_json(
    model: *const SiirvModel,
    json: *mut *mut c_char,
) -> SiirvStatus {
    guard(|| {
        let m = deref(model)?;
        give_string(serde_json::to_string(&m.0).map_err(json_err)?, json)
    })
}

/// # Safety
/// `model` must be null or a live handle, which becomes invalid.
#[no_mangle]
pub unsafe extern "C" fn siirv_model_free(model: *mut SiirvModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Support size `k` and number of components `n`.
///
/// # Safety
/// `model` must be a live handle; `k` and `n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn siirv_model_shape(
    model: *const SiirvModel,
    k: *mut usize,
    n: *mut usize,
) -> SiirvStatus {
    guard(|| {
        let m = deref(model)?;
        out(k, m.0.k())?;
        out(n, m.0.n())
    })
}

/// Exact pmf on `0..=n(k-1)`. Writes the required length to `len`; if
/// `capacity` is smaller, nothing else is written and `BufferTooSmall` is
/// returned, so a call with a null buffer and zero capacity queries the size.
///
/// # Safety
/// `model` must be a live handle; `buf` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn siirv_model_pmf(
    model: *const SiirvModel,
    buf: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> SiirvStatus {
    guard(|| {
        let m = deref(model)?;
        let p = exact_pmf(&m.0);
        let full = (m.0.n() * (m.0.k() - 1) + 1) as i64;
        out(len, full as usize)?;
        if capacity < full as usize {
            return Err(Fail::Small(full as usize));
        }
        if buf.is_null() {
            return Err(Fail::Null);
        }
        for i in 0..full {
            buf.add(i as usize).write(p.get(i));
        }
        Ok(())
    })
}

/// Draws `count` samples using the generator for `seed`.
///
/// # Safety
/// `model` must be a live handle; `buf` must hold `count` values.
#[no_mangle]
pub unsafe extern "C" fn siirv_model_sample(
    model: *const SiirvModel,
    seed: u64,
    count: usize,
    buf: *mut i64,
) -> SiirvStatus {
    guard(|| {
        let m = deref(model)?;
        let draws = draw_samples(&m.0, count, &mut stream(seed, 0));
        if count > 0 && buf.is_null() {
            return Err(Fail::Null);
        }
        ptr::copy_nonoverlapping(draws.as_ptr(), buf, count);
        Ok(())
    })
}

/// Learns a hypothesis from draws of `model` (seeded by `seed`). `n_samples`
/// may be null; otherwise it receives the number of draws used.
///
/// # Safety
/// `model` must be a live handle; `hypothesis` must be writable.
#[no_mangle]
pub unsafe extern "C" fn siirv_learn_from_model(
    model: *const SiirvModel,
    algorithm: SiirvAlgorithm,
    epsilon: f64,
    seed: u64,
    hypothesis: *mut *mut SiirvHypothesis,
    n_samples: *mut usize,
) -> SiirvStatus {
    guard(|| {
        let m = deref(model)?;
        let cal = siirv::calibration::Calibration::from_env()?;
        let config = LearnConfig::with_calibration(epsilon, m.0.k(), seed, cal);
        let mut src = ModelSource::new(m.0.clone(), stream(seed, 0));
        let o = run_algorithm(algorithm.into(), &mut src, &config, None)?;
        if !n_samples.is_null() {
            n_samples.write(o.report.n_samples);
        }
        out(
            hypothesis,
            Box::into_raw(Box::new(SiirvHypothesis(o.hypothesis))),
        )
    })
}

/// Learns a hypothesis from a recorded sample stream, consumed in order.
/// `Empirical` uses every sample; other algorithms fail with
/// `InsufficientSamples` if the stream runs out.
///
/// # Safety
/// `samples` must hold `len` values; `hypothesis` must be writable.
#[no_mangle]
pub unsafe extern "C" fn siirv_learn_from_samples(
    samples: *const i64,
    len: usize,
    k: usize,
    algorithm: SiirvAlgorithm,
    epsilon: f64,
    hypothesis: *mut *mut SiirvHypothesis,
) -> SiirvStatus {
    guard(|| {
        let s = slice(samples, len)?.to_vec();
        let cal = siirv::calibration::Calibration::from_env()?;
        let config = LearnConfig::with_calibration(epsilon, k, 0, cal);
        let o = run_algorithm(algorithm.into(), &mut Replay::new(s), &config, Some(len))?;
        out(
            hypothesis,
            Box::into_raw(Box::new(SiirvHypothesis(o.hypothesis))),
        )
    })
}

/// Parses any of the hypothesis JSON forms.
///
/// # Safety
/// `json` must be a NUL-terminated string; `hypothesis` must be writable.
#[no_mangle]
pub unsafe extern "C" fn siirv_hypothesis_from_json(
    json: *const c_char,
    hypothesis: *mut *mut SiirvHypothesis,
) -> SiirvStatus {
    guard(|| {
        let h: Hypothesis = serde_json::from_str(str_arg(json)?).map_err(json_err)?;
        out(hypothesis, Box::into_raw(Box::new(SiirvHypothesis(h))))
    })
}

/// # Safety
/// `hypothesis` must be a live handle; `json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn siirv_hypothesis_to_json(
    hypothesis: *const SiirvHypothesis,
    json: *mut *mut c_char,
) -> SiirvStatus {
    guard(|| {
        let h = deref(hypothesis)?;
        give_string(serde_json::to_string(&h.0).map_err(json_err)?, json)
    })
}

/// # Safety
/// `hypothesis` must be null or a live handle, which becomes invalid.
#[no_mangle]
pub unsafe extern "C" fn siirv_hypothesis_free(hypothesis: *mut SiirvHypothesis) {
    if !hypothesis.is_null() {
        drop(Box::from_raw(hypothesis));
    }
}

/// Inclusive support window `[lo, hi]`.
///
/// # Safety
/// `hypothesis` must be a live handle; `lo` and `hi` must be writable.
#[no_mangle]
pub unsafe extern "C" fn siirv_hypothesis_window(
    hypothesis: *const SiirvHypothesis,
    lo: *mut i64,
    hi: *mut i64,
) -> SiirvStatus {
    guard(|| {
        let (a, b) = deref(hypothesis)?.0.window();
        out(lo, a)?;
        out(hi, b)
    })
}

/// Pseudo-pmf value and CDF at `x` (zero / one outside the window as appropriate).
/// Either output may be null.
///
/// # Safety
/// `hypothesis` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn siirv_hypothesis_eval(
    hypothesis: *const SiirvHypothesis,
    x: i64,
    pmf: *mut f64,
    cdf: *mut f64,
) -> SiirvStatus {
    guard(|| {
        let h = &deref(hypothesis)?.0;
        if !pmf.is_null() {
            pmf.write(h.evaluate(x));
        }
        if !cdf.is_null() {
            cdf.write(h.cdf(x));
        }
        Ok(())
    })
}

/// Draws `count` values with the binary-search sampler at accuracy `epsilon`.
///
/// # Safety
/// `hypothesis` must be a live handle; `buf` must hold `count` values.
#[no_mangle]
pub unsafe extern "C" fn siirv_hypothesis_sample(
    hypothesis: *const SiirvHypothesis,
    epsilon: f64,
    seed: u64,
    count: usize,
    buf: *mut i64,
) -> SiirvStatus {
    guard(|| {
        let h = deref(hypothesis)?;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must lie in (0,1), got {epsilon}"
            ))
            .into());
        }
        if count > 0 && buf.is_null() {
            return Err(Fail::Null);
        }
        let sampler = PreparedSampler::new(&h.0, epsilon);
        let mut bits = RngBits::new(stream(seed, 0));
        for i in 0..count {
            buf.add(i).write(sampler.sample(&mut bits));
        }
        Ok(())
    })
}

/// Total variation distance between a model and a hypothesis (negative
/// hypothesis values count at face value).
///
/// # Safety
/// Both handles must be live; `tv` must be writable.
#[no_mangle]
pub unsafe extern "C" fn siirv_tv_distance(
    model: *const SiirvModel,
    hypothesis: *const SiirvHypothesis,
    tv: *mut f64,
) -> SiirvStatus {
    guard(|| {
        let m = deref(model)?;
        let h = deref(hypothesis)?;
        out(tv, tv_distance(&exact_pmf(&m.0), &h.0.to_pmf()))
    })
}
