//! C ABI for `k3fm`.
//!
//! Every function returns a [`K3fmStatus`] and writes results through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`k3fm_last_error_message`]. Lattices are opaque handles owned by the
//! caller and released with [`k3fm_lattice_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use k3fm::bqf;
use k3fm::counting;
use k3fm::disc_form::{same_genus, DEFAULT_ISOMETRY_BOUND};
use k3fm::fm_rank1::enumerate_partners;
use k3fm::lattice::{standard_lattice, IntegerLattice};
use k3fm::Error;
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K3fmStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    BoundExceeded = 3,
    Overflow = 4,
    BufferTooSmall = 5,
    NotFound = 6,
    Internal = 99,
}

/// Opaque even lattice.
pub struct K3fmLattice {
    inner: IntegerLattice,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> K3fmStatus {
    match err {
        Error::BoundExceeded { .. } => K3fmStatus::BoundExceeded,
        Error::Overflow(_) => K3fmStatus::Overflow,
        Error::NotFound { .. } => K3fmStatus::NotFound,
        _ => K3fmStatus::InvalidArgument,
    }
}

struct Failure(K3fmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(K3fmStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording the error message and turning panics into
/// `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> K3fmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            K3fmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            K3fmStatus::Internal
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn lattice<'a>(p: *const K3fmLattice) -> Result<&'a IntegerLattice, Failure> {
    p.as_ref().map(|l| &l.inner).ok_or_else(|| null("lattice"))
}

/// Copies `values` into `buf` (capacity `cap`) and stores the full length in
/// `len`; fails with `BufferTooSmall` when `cap` is short.
unsafe fn fill<T: Copy>(
    values: &[T],
    buf: *mut T,
    cap: usize,
    len: *mut usize,
) -> Result<(), Failure> {
    *out(len, "len")? = values.len();
    if values.len() > cap {
        return Err(Failure(
            K3fmStatus::BufferTooSmall,
            format!("need {} entries, buffer holds {cap}", values.len()),
        ));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(null("buffer"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

/// Length in bytes of the last error message of this thread, excluding the
/// terminating NUL.
#[no_mangle]
pub extern "C" fn k3fm_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().len())
}

/// Copies the last error message, NUL-terminated and truncated to `cap`
/// bytes. Returns the number of bytes written excluding the NUL.
///
/// # Safety
/// `buf` must be valid for `cap` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn k3fm_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    if buf.is_null() || cap == 0 {
        return 0;
    }
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let n = msg.len().min(cap - 1);
        ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
        *buf.add(n) = 0;
        n
    })
}

/// Brute-force bound on discriminant group orders used when callers pass 0.
#[no_mangle]
pub extern "C" fn k3fm_default_isometry_bound() -> u64 {
    DEFAULT_ISOMETRY_BOUND
}

fn bound_or_default(bound: u64) -> u64 {
    if bound == 0 {
        DEFAULT_ISOMETRY_BOUND
    } else {
        bound
    }
}

/// Builds a lattice from a row-major `rank × rank` Gram matrix.
///
/// # Safety
/// `gram` must point to `rank * rank` values; `out_lattice` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3fm_lattice_new(
    gram: *const i64,
    rank: usize,
    out_lattice: *mut *mut K3fmLattice,
) -> K3fmStatus {
    guard(|| {
        let slot = out(out_lattice, "out_lattice")?;
        *slot = ptr::null_mut();
        if gram.is_null() {
            return Err(null("gram"));
        }
        let len = rank
            .checked_mul(rank)
            .ok_or_else(|| Failure(K3fmStatus::Overflow, "rank too large".into()))?;
        let flat = std::slice::from_raw_parts(gram, len);
        let rows: Vec<&[i64]> = flat.chunks(rank.max(1)).collect();
        let inner = IntegerLattice::from_i64(&rows)?;
        *slot = Box::into_raw(Box::new(K3fmLattice { inner }));
        Ok(())
    })
}

/// Builds a named standard lattice (`U`, `E8_minus`, `rank1`, `lambda_n`,
/// `lambda_K3`, `extended_NS`). `param` is ignored unless `has_param`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_lattice` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3fm_lattice_standard(
    name: *const c_char,
    param: i64,
    has_param: bool,
    out_lattice: *mut *mut K3fmLattice,
) -> K3fmStatus {
    guard(|| {
        let slot = out(out_lattice, "out_lattice")?;
        *slot = ptr::null_mut();
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| Failure(K3fmStatus::InvalidArgument, "name is not UTF-8".into()))?;
        let inner = standard_lattice(name, has_param.then_some(param))?;
        *slot = Box::into_raw(Box::new(K3fmLattice { inner }));
        Ok(())
    })
}

/// Releases a lattice; null is a no-op.
///
/// # Safety
/// `lattice` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn k3fm_lattice_free(lattice: *mut K3fmLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn k3fm_lattice_rank(
    lattice: *const K3fmLattice,
    out_rank: *mut usize,
) -> K3fmStatus {
    guard(|| {
        *out(out_rank, "out_rank")? = self::lattice(lattice)?.rank();
        Ok(())
    })
}

/// Fails with `Overflow` when the determinant does not fit in 64 bits.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn k3fm_lattice_determinant(
    lattice: *const K3fmLattice,
    out_det: *mut i64,
) -> K3fmStatus {
    guard(|| {
        let det = self::lattice(lattice)?.determinant();
        *out(out_det, "out_det")? = det.to_i64().ok_or_else(|| {
            Failure(
                K3fmStatus::Overflow,
                format!("determinant {det} exceeds i64"),
            )
        })?;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn k3fm_lattice_signature(
    lattice: *const K3fmLattice,
    out_positive: *mut usize,
    out_negative: *mut usize,
) -> K3fmStatus {
    guard(|| {
        let sig = self::lattice(lattice)?.signature();
        *out(out_positive, "out_positive")? = sig.positive;
        *out(out_negative, "out_negative")? = sig.negative;
        Ok(())
    })
}

/// Orders of the cyclic factors of the discriminant group, each dividing the
/// next. `out_len` always receives the number of factors.
///
/// # Safety
/// `buf` must be valid for `cap` writes; `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3fm_lattice_discriminant_orders(
    lattice: *const K3fmLattice,
    buf: *mut u64,
    cap: usize,
    out_len: *mut usize,
) -> K3fmStatus {
    guard(|| {
        let form = self::lattice(lattice)?.discriminant_form()?;
        fill(form.orders(), buf, cap, out_len)
    })
}

/// Equal signatures and isomorphic discriminant forms. `bound` limits the
/// group order searched; 0 selects the default.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn k3fm_lattice_same_genus(
    first: *const K3fmLattice,
    second: *const K3fmLattice,
    bound: u64,
    out_same: *mut bool,
) -> K3fmStatus {
    guard(|| {
        let (a, b) = (lattice(first)?, lattice(second)?);
        *out(out_same, "out_same")? = same_genus(a, b, bound_or_default(bound))?;
        Ok(())
    })
}

/// Number of partners of a K3 surface with Picard lattice `⟨2n⟩`.
///
/// # Safety
/// `out_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3fm_partner_count(n: u64, out_count: *mut u64) -> K3fmStatus {
    guard(|| {
        *out(out_count, "out_count")? = enumerate_partners(n)?.len() as u64;
        Ok(())
    })
}

/// The pairs `(r, s)` with `rs = n`, `gcd(r, s) = 1`, `r ≥ s`, by descending
/// `r`. Both buffers hold `cap` entries.
///
/// # Safety
/// `r_buf` and `s_buf` must be valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn k3fm_partners(
    n: u64,
    r_buf: *mut u64,
    s_buf: *mut u64,
    cap: usize,
    out_len: *mut usize,
) -> K3fmStatus {
    guard(|| {
        let partners = enumerate_partners(n)?;
        let r: Vec<u64> = partners.iter().map(|p| p.r).collect();
        let s: Vec<u64> = partners.iter().map(|p| p.s).collect();
        fill(&r, r_buf, cap, out_len)?;
        fill(&s, s_buf, cap, out_len)
    })
}

/// Double-coset partner count for Picard lattice `⟨2n⟩`, `n ≥ 2`.
///
/// # Safety
/// `out_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3fm_rank1_count(n: u64, bound: u64, out_count: *mut u64) -> K3fmStatus {
    guard(|| {
        *out(out_count, "out_count")? = counting::rank1_fm_count(n, bound_or_default(bound))?;
        Ok(())
    })
}

/// Partner count for the rank-two Picard lattice of discriminant `p`, a
/// prime `≡ 1 mod 4`.
///
/// # Safety
/// `out_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3fm_rank2_count(p: u64, out_count: *mut u64) -> K3fmStatus {
    guard(|| {
        *out(out_count, "out_count")? = counting::rank2_fm_count(p)?;
        Ok(())
    })
}

/// # Safety
/// `out_h` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3fm_narrow_class_number(d: i64, out_h: *mut u64) -> K3fmStatus {
    guard(|| {
        *out(out_h, "out_h")? = bqf::narrow_class_number(d)?;
        Ok(())
    })
}

/// Class number of the real quadratic field of fundamental discriminant `d`.
///
/// # Safety
/// `out_h` must be writable.
#[no_mangle]
pub unsafe extern "C" fn k3fm_wide_class_number(d: i64, out_h: *mut u64) -> K3fmStatus {
    guard(|| {
        *out(out_h, "out_h")? = bqf::wide_class_number(d)?;
        Ok(())
    })
}
