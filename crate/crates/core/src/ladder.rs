//! Desk-scale ternary verification: Proth certificates, binary Goldbach
//! checks, prime-ladder construction, and the three-prime decomposition of
//! every odd number in range.
//!
//! The ladder turns ternary verification into bounded binary checks: with
//! rung gaps in `[4, G]`, every odd `n` has a rung `p < n` with `n - p`
//! even in `[4, G + 2]`, and a binary decomposition of `n - p` finishes
//! the witness.

use crate::arith::{self, is_prime, jacobi, powmod};
use crate::error::{Error, Result};
use crate::util::{fnv1a_u64, run_chunked};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Default scan ceiling for direct binary checks.
pub const BINARY_SCAN_LIMIT: u64 = 10_000_000_000;

/// Outcome of a Proth test on `N = k 2^m + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProthResult {
    /// `a^{(N-1)/2} = -1 (mod N)` certifies primality
    Prime { witness: u64 },
    /// disproof: a Jacobi-(-1) base failed the congruence, or a shared
    /// factor turned up
    Composite { reason: String },
    /// no base with negative Jacobi symbol in the search set
    Inconclusive,
}

/// Witness bases tried in order (small primes, Jacobi-prechecked).
const PROTH_BASES: [u64; 15] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Proth's theorem: for `N = k 2^m + 1` with odd `k < 2^m`, `N` is prime
/// iff some `a` has `a^{(N-1)/2} = -1 (mod N)`. Bases are prechecked with
/// the Jacobi symbol: when `(a/N) = -1`, the congruence is an if-and-
/// only-if, so a single base decides.
pub fn proth_test(k: u64, m: u32) -> Result<ProthResult> {
    if k % 2 == 0 {
        return Err(Error::Domain("k must be odd".into()));
    }
    if m >= 63 || k >= (1u64 << m) {
        return Err(Error::Domain(format!(
            "Proth hypothesis needs k < 2^m (k={k}, m={m})"
        )));
    }
    let n = k
        .checked_shl(m)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::Domain("k 2^m + 1 overflows u64".into()))?;
    for &a in PROTH_BASES.iter() {
        if a >= n {
            break;
        }
        let g = arith::gcd(a, n);
        if g > 1 {
            return Ok(ProthResult::Composite {
                reason: format!("shared factor {g} with base {a}"),
            });
        }
        match jacobi(a, n) {
            -1 => {
                let pow = powmod(a, (n - 1) / 2, n);
                return if pow == n - 1 {
                    Ok(ProthResult::Prime { witness: a })
                } else {
                    Ok(ProthResult::Composite {
                        reason: format!("base {a} has (a/N) = -1 but a^((N-1)/2) != -1"),
                    })
                };
            }
            _ => continue,
        }
    }
    Ok(ProthResult::Inconclusive)
}

/// Smallest-first binary Goldbach decomposition of an even `n`.
pub fn binary_check(n: u64) -> Result<(u64, u64)> {
    if n % 2 != 0 || n < 4 {
        return Err(Error::Domain(format!("binary_check needs even n >= 4, got {n}")));
    }
    if n > BINARY_SCAN_LIMIT {
        return Err(Error::Resource(format!(
            "binary scan limit is {BINARY_SCAN_LIMIT}"
        )));
    }
    if is_prime(n - 2) {
        return Ok((2, n - 2));
    }
    let mut p = 3u64;
    while p <= n / 2 {
        if is_prime(p) && is_prime(n - p) {
            return Ok((p, n - p));
        }
        p += 2;
    }
    Err(Error::MathFailure(format!(
        "no binary decomposition found for {n} — state dump: scanned p <= {}",
        n / 2
    )))
}

/// Certifies a single claimed instance `n = p1 + p2` without scanning.
pub fn certify_binary_instance(n: u64, p1: u64, p2: u64) -> bool {
    p1 + p2 == n && is_prime(p1) && is_prime(p2)
}

/// An increasing list of certified primes with consecutive gaps in
/// `[4, max_gap]`, from 3 to past `limit`.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub rungs: Vec<u64>,
    pub limit: u64,
    pub max_gap: u64,
    /// rungs certified via Proth's theorem
    pub proth_rungs: u64,
    /// rungs certified by the deterministic Miller-Rabin fallback
    pub fallback_rungs: u64,
}

impl Ladder {
    pub const MIN_GAP: u64 = 4;

    /// FNV fingerprint over the rungs (stored in files and checkpoints).
    pub fn hash(&self) -> u64 {
        fnv1a_u64(self.rungs.iter().copied())
    }

    /// Largest rung strictly below `n`.
    pub fn rung_below(&self, n: u64) -> Option<u64> {
        match self.rungs.partition_point(|&p| p < n) {
            0 => None,
            i => Some(self.rungs[i - 1]),
        }
    }

    /// Checks every structural invariant exactly.
    pub fn validate(&self) -> Result<()> {
        if self.rungs.first() != Some(&3) {
            return Err(Error::MathFailure("ladder must start at 3".into()));
        }
        if *self.rungs.last().unwrap() < self.limit {
            return Err(Error::MathFailure("ladder stops short of its limit".into()));
        }
        for w in self.rungs.windows(2) {
            let gap = w[1] - w[0];
            if !(Self::MIN_GAP..=self.max_gap).contains(&gap) {
                return Err(Error::MathFailure(format!(
                    "gap {gap} at {} outside [4, {}]",
                    w[0], self.max_gap
                )));
            }
        }
        for &p in &self.rungs {
            if !is_prime(p) {
                return Err(Error::MathFailure(format!("rung {p} is not prime")));
            }
        }
        Ok(())
    }

    /// Serializes as a binary sorted-integer file:
    /// magic, limit, max_gap, count, hash, then the rungs as u64 LE.
    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(b"GBLADDR1")?;
        for v in [self.limit, self.max_gap, self.rungs.len() as u64, self.hash()] {
            w.write_all(&v.to_le_bytes())?;
        }
        for &p in &self.rungs {
            w.write_all(&p.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Ladder> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != b"GBLADDR1" {
            return Err(Error::Usage("not a ladder file".into()));
        }
        let mut word = [0u8; 8];
        let mut next = || -> Result<u64> {
            r.read_exact(&mut word)?;
            Ok(u64::from_le_bytes(word))
        };
        let limit = next()?;
        let max_gap = next()?;
        let count = next()?;
        let hash = next()?;
        let mut rungs = Vec::with_capacity(count as usize);
        for _ in 0..count {
            rungs.push(next()?);
        }
        let ladder = Ladder {
            rungs,
            limit,
            max_gap,
            proth_rungs: 0,
            fallback_rungs: 0,
        };
        if ladder.hash() != hash {
            return Err(Error::Usage("ladder file hash mismatch".into()));
        }
        Ok(ladder)
    }
}

/// Proth numbers `k 2^m + 1` (odd `k < 2^m`) inside `(lo, hi]`,
/// descending.
fn proth_candidates_desc(lo: u64, hi: u64) -> Vec<(u64, u32, u64)> {
    let mut out: Vec<(u64, u32, u64)> = Vec::new();
    for m in 2u32..63 {
        let pw = 1u64 << m;
        if pw + 1 > hi {
            break;
        }
        // k odd, k < 2^m, lo < k 2^m + 1 <= hi
        let k_hi = ((hi - 1) >> m).min(pw - 1);
        let k_lo = lo >> m; // the n > lo filter below decides inclusion
        let mut k = if k_hi % 2 == 0 { k_hi.wrapping_sub(1) } else { k_hi };
        while k >= k_lo.max(1) && k != u64::MAX {
            let n = (k << m) + 1;
            if n > lo && n <= hi {
                out.push((k, m, n));
            }
            if k < 2 {
                break;
            }
            k -= 2;
        }
    }
    out.sort_unstable_by(|a, b| b.2.cmp(&a.2));
    out.dedup_by_key(|c| c.2);
    out
}

/// Builds a ladder from 3 past `limit`, preferring Proth-certified rungs
/// and falling back to deterministic Miller-Rabin primes when no Proth
/// number in the window is prime. Panics never; a window with no
/// certifiable prime (impossible for max_gap >= 1000 at desk scale by
/// known gap records) reports a hard failure.
pub fn build_ladder(limit: u64, max_gap: u64) -> Result<Ladder> {
    if limit < 7 {
        return Err(Error::Domain("limit must be at least 7".into()));
    }
    if max_gap < Ladder::MIN_GAP {
        return Err(Error::Domain("max_gap must be at least 4".into()));
    }
    let mut rungs = vec![3u64];
    let mut proth_rungs = 0u64;
    let mut fallback_rungs = 0u64;
    while *rungs.last().unwrap() < limit {
        let last = *rungs.last().unwrap();
        let lo = last + Ladder::MIN_GAP - 1; // candidates strictly above last+3
        let hi = last + max_gap;
        let mut found = None;
        for (k, m, n) in proth_candidates_desc(lo, hi) {
            if let ProthResult::Prime { .. } = proth_test(k, m)? {
                found = Some(n);
                proth_rungs += 1;
                break;
            }
        }
        if found.is_none() {
            let mut n = if hi % 2 == 0 { hi - 1 } else { hi };
            while n > lo {
                if is_prime(n) {
                    found = Some(n);
                    fallback_rungs += 1;
                    break;
                }
                n -= 2;
            }
        }
        match found {
            Some(n) => rungs.push(n),
            None => {
                return Err(Error::MathFailure(format!(
                    "no certifiable prime in window ({lo}, {hi}]"
                )))
            }
        }
    }
    Ok(Ladder {
        rungs,
        limit,
        max_gap,
        proth_rungs,
        fallback_rungs,
    })
}

/// A certified three-prime decomposition `n = p + p1 + p2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TernaryWitness {
    pub n: u64,
    pub p: u64,
    pub p1: u64,
    pub p2: u64,
}

impl TernaryWitness {
    /// Re-validates the sum identity and all three primality certificates.
    pub fn revalidate(&self) -> bool {
        self.p + self.p1 + self.p2 == self.n
            && is_prime(self.p)
            && is_prime(self.p1)
            && is_prime(self.p2)
    }
}

/// Ladder rule: take the largest rung `p < n`; if `n - p = 2`, step down
/// one rung; then decompose the even remainder.
pub fn ternary_verify(n: u64, ladder: &Ladder) -> Result<TernaryWitness> {
    if n % 2 == 0 || n < 7 {
        return Err(Error::Domain(format!("need odd n >= 7, got {n}")));
    }
    if n > ladder.limit {
        return Err(Error::Domain(format!(
            "n = {n} beyond ladder limit {}",
            ladder.limit
        )));
    }
    let mut idx = ladder.rungs.partition_point(|&p| p < n);
    if idx == 0 {
        return Err(Error::MathFailure(format!("no rung below {n}")));
    }
    idx -= 1;
    if n - ladder.rungs[idx] == 2 {
        if idx == 0 {
            return Err(Error::MathFailure(format!("cannot step down below 3 at n = {n}")));
        }
        idx -= 1;
    }
    let p = ladder.rungs[idx];
    let m = n - p;
    debug_assert!(m % 2 == 0 && m >= 4);
    let (p1, p2) = binary_check(m)?;
    Ok(TernaryWitness { n, p, p1, p2 })
}

/// Summary of a verification run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifySummary {
    pub lo: u64,
    pub hi: u64,
    pub verified: u64,
    /// largest even remainder handed to the binary table
    pub max_binary_gap: u64,
    pub ladder_hash: u64,
}

/// Resumable checkpoint: plain JSON with the last verified n and the
/// ladder fingerprint.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Checkpoint {
    pub last_verified: u64,
    pub verified: u64,
    pub max_binary_gap: u64,
    pub lo: u64,
    pub ladder_hash: u64,
}

/// Precomputed smallest-prime binary decompositions for every even
/// `m <= cap`: `table[m/2 - 2] = p1`.
pub struct BinaryTable {
    cap: u64,
    table: Vec<u32>,
}

impl BinaryTable {
    pub fn build(cap: u64) -> Result<BinaryTable> {
        let cap = cap.max(4);
        let primes = arith::small_primes(cap);
        let mut is_p = vec![false; (cap + 1) as usize];
        for &p in &primes {
            is_p[p as usize] = true;
        }
        let mut table = Vec::with_capacity((cap / 2 - 1) as usize);
        for m in (4..=cap).step_by(2) {
            let mut found = 0u32;
            for &p in &primes {
                if p > m / 2 {
                    break;
                }
                if is_p[(m - p) as usize] {
                    found = p as u32;
                    break;
                }
            }
            if found == 0 {
                return Err(Error::MathFailure(format!(
                    "binary Goldbach fails at {m} — full state: checked all p <= {}",
                    m / 2
                )));
            }
            table.push(found);
        }
        Ok(BinaryTable { cap, table })
    }

    pub fn decompose(&self, m: u64) -> Option<(u64, u64)> {
        if m < 4 || m > self.cap || m % 2 != 0 {
            return None;
        }
        let p1 = self.table[(m / 2 - 2) as usize] as u64;
        Some((p1, m - p1))
    }
}

/// Verifies every odd `n` in `[lo, hi]` via the ladder rule, returning a
/// summary. Any failure aborts with the offending `n`. The scan is
/// chunked deterministically; an optional checkpoint resumes a previous
/// run (counts accumulate).
pub fn verify_range(
    lo: u64,
    hi: u64,
    ladder: &Ladder,
    workers: usize,
    resume: Option<&Checkpoint>,
) -> Result<VerifySummary> {
    if lo % 2 == 0 || hi % 2 == 0 || lo < 7 {
        return Err(Error::Domain("need odd endpoints with lo >= 7".into()));
    }
    if hi > ladder.limit {
        return Err(Error::Domain(format!(
            "hi = {hi} beyond ladder limit {}",
            ladder.limit
        )));
    }
    let table = BinaryTable::build(ladder.max_gap + 2)?;
    let (start, mut verified, mut max_gap) = match resume {
        Some(cp) => {
            if cp.ladder_hash != ladder.hash() {
                return Err(Error::Usage("checkpoint ladder hash mismatch".into()));
            }
            if cp.lo != lo {
                return Err(Error::Usage("checkpoint is for a different range".into()));
            }
            (cp.last_verified + 2, cp.verified, cp.max_binary_gap)
        }
        None => (lo, 0, 0),
    };
    if start > hi {
        return Ok(VerifySummary {
            lo,
            hi,
            verified,
            max_binary_gap: max_gap,
            ladder_hash: ladder.hash(),
        });
    }
    let n_items = ((hi - start) / 2 + 1) as usize;
    let chunks = run_chunked(n_items, 1 << 20, workers, |range| {
        let mut count = 0u64;
        let mut worst = 0u64;
        let first_n = start + 2 * range.start as u64;
        let mut idx = ladder.rungs.partition_point(|&p| p < first_n);
        for i in range {
            let n = start + 2 * i as u64;
            while idx < ladder.rungs.len() && ladder.rungs[idx] < n {
                idx += 1;
            }
            // idx now points at first rung >= n; the rung below is idx-1
            let mut j = idx - 1;
            if n - ladder.rungs[j] == 2 {
                j -= 1;
            }
            let m = n - ladder.rungs[j];
            match table.decompose(m) {
                Some(_) => {
                    count += 1;
                    worst = worst.max(m);
                }
                None => {
                    return Err(Error::MathFailure(format!(
                        "verification failed at n = {n}: remainder {m} has no tabled decomposition"
                    )))
                }
            }
        }
        Ok((count, worst))
    });
    for c in chunks {
        let (count, worst) = c?;
        verified += count;
        max_gap = max_gap.max(worst);
    }
    Ok(VerifySummary {
        lo,
        hi,
        verified,
        max_binary_gap: max_gap,
        ladder_hash: ladder.hash(),
    })
}
