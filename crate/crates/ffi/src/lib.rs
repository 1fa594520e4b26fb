//! C ABI over `lexinfo`.
//!
//! Every fallible function returns a [`LexinfoStatus`] and writes its result
//! through an out-pointer. On failure, [`lexinfo_last_error`] returns a
//! message for the calling thread. Corpus state lives behind the opaque
//! [`LexinfoAnalysis`] handle, released with [`lexinfo_analysis_free`].
//! Strings returned by the library are owned by it and stay valid until the
//! owning handle is freed or, for error messages, the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use lexinfo::colorspace::{self, HslColor, LabColor, SrgbColor};
use lexinfo::config::RunConfig;
use lexinfo::informativeness::{self, SamplingConfig, WordInfo};
use lexinfo::pipeline::{Analysis, GroupBy, Subset};
use lexinfo::simulate::SystemVariant;
use lexinfo::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexinfoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    Config = 5,
    Data = 6,
    NotFound = 7,
    OutOfRange = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LexinfoLab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl From<LabColor> for LexinfoLab {
    fn from(c: LabColor) -> Self {
        Self {
            l: c.l_star,
            a: c.a_star,
            b: c.b_star,
        }
    }
}

impl From<LexinfoLab> for LabColor {
    fn from(c: LexinfoLab) -> Self {
        LabColor::new(c.l, c.a, c.b)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LexinfoWordInfo {
    /// NUL-terminated UTF-8, owned by the analysis handle.
    pub word: *const c_char,
    pub spread: f64,
    pub i_w: f64,
    pub n_chips: usize,
    pub sampled: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexinfoVariant {
    Actual = 0,
    GeneralOnly = 1,
    SpecificOnly = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LexinfoSimResult {
    pub accuracy: f64,
    pub i_l: f64,
    pub n_interactions: usize,
    pub vocab_size: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexinfoSubset {
    All = 0,
    Repeated = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexinfoGroupBy {
    Chip = 0,
    Speaker = 1,
}

/// Random-intercept fit of informativeness on context ease, with the OLS
/// slope alongside.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LexinfoRegression {
    pub intercept: f64,
    pub slope: f64,
    pub se_slope: f64,
    pub t_slope: f64,
    pub p_slope: f64,
    pub sigma2_residual: f64,
    pub sigma2_group: f64,
    pub ols_slope: f64,
    pub ols_t_slope: f64,
    pub n: usize,
    pub n_groups: usize,
    pub converged: bool,
}

/// Opaque corpus analysis: cleaned rounds, denotations and word scores.
pub struct LexinfoAnalysis {
    analysis: Analysis,
    ranked: Vec<(CString, WordInfo)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LexinfoStatus {
    match e {
        Error::Io { .. } => LexinfoStatus::Io,
        Error::Csv(_) | Error::Json(_) => LexinfoStatus::Parse,
        Error::Config(_) | Error::MissingColumn { .. } => LexinfoStatus::Config,
        Error::InvalidColor(_) | Error::InvalidArgument(_) | Error::LengthMismatch(..) => {
            LexinfoStatus::InvalidArgument
        }
        Error::UnknownWord(_) | Error::NotApplicable { .. } => LexinfoStatus::NotFound,
        Error::InWord { source, .. } => status_of(source),
        _ => LexinfoStatus::Data,
    }
}

fn fail(status: LexinfoStatus, msg: impl Into<String>) -> LexinfoStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), LexinfoStatus>) -> LexinfoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LexinfoStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(LexinfoStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: lexinfo::Result<T>) -> Result<T, LexinfoStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, LexinfoStatus> {
    // SAFETY: callers pass either null or a valid, aligned, writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| fail(LexinfoStatus::NullPointer, "null output pointer"))
}

fn handle<'a>(h: *const LexinfoAnalysis) -> Result<&'a LexinfoAnalysis, LexinfoStatus> {
    // SAFETY: non-null handles come from `lexinfo_analysis_open`.
    unsafe { h.as_ref() }.ok_or_else(|| fail(LexinfoStatus::NullPointer, "null analysis handle"))
}

fn chips<'a>(p: *const LexinfoLab, n: usize) -> Result<&'a [LexinfoLab], LexinfoStatus> {
    if p.is_null() {
        return Err(fail(LexinfoStatus::NullPointer, "null chip array"));
    }
    // SAFETY: the caller guarantees `p` points to `n` initialized values.
    Ok(unsafe { std::slice::from_raw_parts(p, n) })
}

/// Message for the last failed call on this thread, or null if none.
#[no_mangle]
pub extern "C" fn lexinfo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lexinfo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// HSL (hue in degrees, saturation and lightness in [0, 1]) to CIELAB.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_hsl_to_lab(
    h: f64,
    s: f64,
    l: f64,
    out: *mut LexinfoLab,
) -> LexinfoStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = LabColor::from_hsl(lib(HslColor::new(h, s, l))?).into();
        Ok(())
    })
}

/// sRGB channels in [0, 1] to CIELAB (D65).
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_srgb_to_lab(
    r: f64,
    g: f64,
    b: f64,
    out: *mut LexinfoLab,
) -> LexinfoStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = colorspace::srgb_to_lab(lib(SrgbColor::new(r, g, b))?).into();
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn lexinfo_lab_distance(a: LexinfoLab, b: LexinfoLab) -> f64 {
    colorspace::lab_distance(a.into(), b.into())
}

/// Exact mean pairwise distance of `n` chips.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_spread(
    chips_ptr: *const LexinfoLab,
    n: usize,
    out: *mut f64,
) -> LexinfoStatus {
    guard(|| {
        let out = out_ref(out)?;
        let c: Vec<LabColor> = chips(chips_ptr, n)?.iter().map(|&c| c.into()).collect();
        *out = lib(informativeness::spread(&c))?;
        Ok(())
    })
}

/// Word informativeness of a chip set with the default sampling settings.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_informativeness(
    chips_ptr: *const LexinfoLab,
    n: usize,
    seed: u64,
    out: *mut f64,
) -> LexinfoStatus {
    guard(|| {
        let out = out_ref(out)?;
        let c: Vec<LabColor> = chips(chips_ptr, n)?.iter().map(|&c| c.into()).collect();
        let cfg = SamplingConfig {
            seed,
            ..Default::default()
        };
        *out = lib(informativeness::informativeness(&c, &cfg))?.i_w;
        Ok(())
    })
}

/// Loads the corpus named by a TOML run config and scores its words.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_analysis_open(
    config_path: *const c_char,
    out: *mut *mut LexinfoAnalysis,
) -> LexinfoStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        if config_path.is_null() {
            return Err(fail(LexinfoStatus::NullPointer, "null config path"));
        }
        // SAFETY: non-null and NUL-terminated per the contract.
        let path = unsafe { CStr::from_ptr(config_path) }
            .to_str()
            .map_err(|_| fail(LexinfoStatus::InvalidArgument, "config path is not UTF-8"))?;
        let cfg = lib(RunConfig::load(&PathBuf::from(path)))?;
        lib(cfg.validate())?;
        let analysis = lib(Analysis::from_config(&cfg))?;
        let ranked = analysis
            .ranked_infos()
            .into_iter()
            .map(|w| (CString::new(w.word.as_str()).unwrap_or_default(), w.clone()))
            .collect();
        *out = Box::into_raw(Box::new(LexinfoAnalysis { analysis, ranked }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_analysis_free(h: *mut LexinfoAnalysis) {
    if !h.is_null() {
        // SAFETY: `h` came from `lexinfo_analysis_open` and is freed once.
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Number of clean rounds, or 0 for a null handle.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_analysis_round_count(h: *const LexinfoAnalysis) -> usize {
    handle(h).map_or(0, |a| a.analysis.rounds.len())
}

/// Number of scored words, or 0 for a null handle.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_analysis_word_count(h: *const LexinfoAnalysis) -> usize {
    handle(h).map_or(0, |a| a.ranked.len())
}

/// Word at `index` in descending informativeness order.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_analysis_word_info(
    h: *const LexinfoAnalysis,
    index: usize,
    out: *mut LexinfoWordInfo,
) -> LexinfoStatus {
    guard(|| {
        let a = handle(h)?;
        let out = out_ref(out)?;
        let (name, w) = a.ranked.get(index).ok_or_else(|| {
            fail(
                LexinfoStatus::OutOfRange,
                format!("word index {index} out of range"),
            )
        })?;
        *out = LexinfoWordInfo {
            word: name.as_ptr(),
            spread: w.spread,
            i_w: w.i_w,
            n_chips: w.n_chips,
            sampled: w.sampled,
        };
        Ok(())
    })
}

/// Informativeness of a word by name.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_analysis_word_iw(
    h: *const LexinfoAnalysis,
    word: *const c_char,
    out: *mut f64,
) -> LexinfoStatus {
    guard(|| {
        let a = handle(h)?;
        let out = out_ref(out)?;
        if word.is_null() {
            return Err(fail(LexinfoStatus::NullPointer, "null word"));
        }
        // SAFETY: non-null and NUL-terminated per the contract.
        let w = unsafe { CStr::from_ptr(word) }.to_string_lossy();
        let info = a
            .analysis
            .infos
            .get(w.as_ref())
            .ok_or_else(|| fail(LexinfoStatus::NotFound, format!("unknown word `{w}`")))?;
        *out = info.i_w;
        Ok(())
    })
}

/// `variant` is a `LexinfoVariant` value.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_analysis_simulate(
    h: *const LexinfoAnalysis,
    variant: u32,
    out: *mut LexinfoSimResult,
) -> LexinfoStatus {
    guard(|| {
        let a = handle(h)?;
        let out = out_ref(out)?;
        let v = match variant {
            x if x == LexinfoVariant::Actual as u32 => SystemVariant::Actual,
            x if x == LexinfoVariant::GeneralOnly as u32 => SystemVariant::GeneralOnly,
            x if x == LexinfoVariant::SpecificOnly as u32 => SystemVariant::SpecificOnly,
            x => {
                return Err(fail(
                    LexinfoStatus::InvalidArgument,
                    format!("unknown variant {x}"),
                ))
            }
        };
        let entries = a.analysis.entries();
        let r = lib(lexinfo::simulate::run_simulation(
            &entries.entries,
            v,
            &a.analysis.denotations,
        ))?;
        *out = LexinfoSimResult {
            accuracy: r.accuracy,
            i_l: r.i_l,
            n_interactions: r.n_interactions,
            vocab_size: r.vocab_size,
        };
        Ok(())
    })
}

/// `subset` is a `LexinfoSubset` value and `group` a `LexinfoGroupBy` value.
///
/// # Safety
/// Pointer arguments must be null or valid for the reads and writes described.
#[no_mangle]
pub unsafe extern "C" fn lexinfo_analysis_regress(
    h: *const LexinfoAnalysis,
    subset: u32,
    group: u32,
    out: *mut LexinfoRegression,
) -> LexinfoStatus {
    guard(|| {
        let a = handle(h)?;
        let out = out_ref(out)?;
        let subset = match subset {
            x if x == LexinfoSubset::All as u32 => Subset::All,
            x if x == LexinfoSubset::Repeated as u32 => Subset::Repeated,
            x => {
                return Err(fail(
                    LexinfoStatus::InvalidArgument,
                    format!("unknown subset {x}"),
                ))
            }
        };
        let group = match group {
            x if x == LexinfoGroupBy::Chip as u32 => GroupBy::Chip,
            x if x == LexinfoGroupBy::Speaker as u32 => GroupBy::Speaker,
            x => {
                return Err(fail(
                    LexinfoStatus::InvalidArgument,
                    format!("unknown grouping {x}"),
                ))
            }
        };
        let r = lib(a.analysis.regress(subset, group))?;
        let m = &r.mixed;
        *out = LexinfoRegression {
            intercept: m.intercept,
            slope: m.slope,
            se_slope: m.se_slope,
            t_slope: m.t_slope,
            p_slope: m.p_slope,
            sigma2_residual: m.sigma2_residual,
            sigma2_group: m.sigma2_group,
            ols_slope: r.ols.slope,
            ols_t_slope: r.ols.t_slope,
            n: m.n,
            n_groups: m.n_groups,
            converged: m.converged,
        };
        Ok(())
    })
}
