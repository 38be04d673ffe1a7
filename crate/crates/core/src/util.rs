//! Shared numeric plumbing: compensated summation, the additive character
//! `e(theta)`, and a deterministic chunked work-runner.
//!
//! Determinism contract: every parallel computation in this crate splits its
//! index range into fixed-size chunks that do not depend on the worker count,
//! reduces each chunk in ascending order with compensated summation, and then
//! folds the chunk results in chunk-index order. Results are therefore
//! bit-identical for any number of workers.

use num_complex::Complex64;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// `e(theta) = exp(2 pi i theta)`. The crate-wide exponential convention.
#[inline]
pub fn e(theta: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * theta).sin_cos();
    Complex64::new(c, s)
}

/// Kahan–Babuška compensated accumulator for `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Compensated accumulator for complex values (independent Kahan per part).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: Kahan,
    im: Kahan,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Smallest power of two `>= n` (and `>= 2`).
pub fn next_pow2(n: usize) -> usize {
    let mut p = 2usize;
    while p < n {
        p <<= 1;
    }
    p
}

/// FNV-1a over little-endian words; used for ladder/checkpoint fingerprints.
pub fn fnv1a_u64(words: impl IntoIterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Runs `map` over the chunk decomposition of `0..n_items` (chunks of
/// `chunk_size`, last one ragged) on `workers` threads and returns the chunk
/// results in chunk order. The decomposition depends only on `chunk_size`,
/// so the output is identical for every worker count.
pub fn run_chunked<T, F>(n_items: usize, chunk_size: usize, workers: usize, map: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync,
{
    assert!(chunk_size > 0);
    let n_chunks = n_items.div_ceil(chunk_size);
    let workers = workers.max(1).min(n_chunks.max(1));
    if n_chunks == 0 {
        return Vec::new();
    }
    let mut out: Vec<Option<T>> = (0..n_chunks).map(|_| None).collect();
    if workers == 1 {
        for (i, slot) in out.iter_mut().enumerate() {
            let lo = i * chunk_size;
            let hi = ((i + 1) * chunk_size).min(n_items);
            *slot = Some(map(lo..hi));
        }
    } else {
        let next = AtomicUsize::new(0);
        let results = Mutex::new(&mut out);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= n_chunks {
                        break;
                    }
                    let lo = i * chunk_size;
                    let hi = ((i + 1) * chunk_size).min(n_items);
                    let r = map(lo..hi);
                    results.lock().unwrap()[i] = Some(r);
                });
            }
        });
    }
    out.into_iter().map(|r| r.unwrap()).collect()
}

/// Shortest decimal representation that round-trips to the same `f64`.
/// All file emitters use this so outputs are byte-stable across runs.
pub fn fmt_f64(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{x:.1}")
    } else {
        format!("{x}")
    }
}
