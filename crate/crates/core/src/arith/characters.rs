//! Dirichlet characters with exact root-of-unity values.
//!
//! A character mod `q` is stored as an exponent tuple against a fixed set of
//! generators of `(Z/qZ)^*`; values are root-of-unity indices `k` meaning
//! `e(k / ord)`, materialized to complex numbers only on demand. This keeps
//! orthogonality checks exact at the index level.

use super::{factorize, gcd, powmod, totient};
use crate::error::{Error, Result};
use crate::util::e;
use num_complex::Complex64;
use std::sync::Arc;

/// Default cap on the modulus for full character enumeration.
pub const CHARACTER_MODULUS_LIMIT: u64 = 10_000;

/// Generator presentation of `(Z/qZ)^*` plus discrete logs of every unit.
#[derive(Debug)]
struct UnitGroup {
    q: u64,
    gen_orders: Vec<u64>,
    /// lcm of the generator orders (the group exponent)
    exponent: u64,
    /// dlogs[n] = exponent tuple of n, or None when gcd(n, q) != 1
    dlogs: Vec<Option<Vec<u32>>>,
}

impl UnitGroup {
    fn build(q: u64) -> Arc<UnitGroup> {
        let mut gens: Vec<(u64, u64)> = Vec::new(); // (generator mod q, order)
        if q > 1 {
            let fac = factorize(q);
            for &(p, a) in &fac {
                let pa = p.pow(a);
                if p == 2 {
                    match a {
                        1 => {}
                        2 => gens.push((crt_lift(3, 4, q), 2)),
                        _ => {
                            gens.push((crt_lift(pa - 1, pa, q), 2));
                            gens.push((crt_lift(5, pa, q), pa / 4));
                        }
                    }
                } else {
                    let g = primitive_root_mod_prime_power(p, a);
                    gens.push((crt_lift(g, pa, q), pa / p * (p - 1)));
                }
            }
        }
        let exponent = gens.iter().fold(1u64, |acc, &(_, d)| lcm(acc, d));
        // enumerate all units as products of generator powers
        let mut dlogs: Vec<Option<Vec<u32>>> = vec![None; q.max(1) as usize];
        let k = gens.len();
        let mut frontier: Vec<(u64, Vec<u32>)> = vec![(1 % q.max(1), vec![0u32; k])];
        for (j, &(g, d)) in gens.iter().enumerate() {
            let mut next = Vec::with_capacity(frontier.len() * d as usize);
            for (v, dl) in &frontier {
                let mut w = *v;
                for t in 0..d {
                    let mut dl2 = dl.clone();
                    dl2[j] = t as u32;
                    next.push((w, dl2));
                    if t + 1 < d {
                        w = mulq(w, g, q);
                    }
                }
            }
            frontier = next;
        }
        for (v, dl) in frontier {
            dlogs[v as usize] = Some(dl);
        }
        if q == 1 {
            dlogs[0] = Some(vec![]); // the single residue class
        }
        Arc::new(UnitGroup {
            q,
            gen_orders: gens.iter().map(|&(_, d)| d).collect(),
            exponent,
            dlogs,
        })
    }
}

fn mulq(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// x with x = r (mod m), x = 1 (mod q/m); requires gcd(m, q/m) = 1.
fn crt_lift(r: u64, m: u64, q: u64) -> u64 {
    let n = q / m;
    if n == 1 {
        return r % q;
    }
    // x = r + m * t with m t = 1 - r (mod n)
    let m_inv = mod_inverse(m % n, n);
    let t = mulq(((1 + n as u128 * m as u128 - r as u128) % n as u128) as u64, m_inv, n);
    (r as u128 + m as u128 * t as u128) as u64 % q
}

fn mod_inverse(a: u64, n: u64) -> u64 {
    // extended Euclid
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, a as i128);
    while new_r != 0 {
        let quo = r / new_r;
        (t, new_t) = (new_t, t - quo * new_t);
        (r, new_r) = (new_r, r - quo * new_r);
    }
    assert_eq!(r, 1, "not invertible");
    ((t % n as i128 + n as i128) % n as i128) as u64
}

fn primitive_root_mod_prime_power(p: u64, a: u32) -> u64 {
    let g = primitive_root_mod_prime(p);
    if a == 1 {
        return g;
    }
    // g works mod p^a unless g^(p-1) = 1 (mod p^2)
    if powmod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

fn primitive_root_mod_prime(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors: Vec<u64> = factorize(p - 1).into_iter().map(|(f, _)| f).collect();
    'outer: for g in 2..p {
        for &f in &factors {
            if powmod(g, (p - 1) / f, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("prime {p} has a primitive root");
}

/// A Dirichlet character mod `q`, tagged with its conductor.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub conductor: u64,
    pub primitive: bool,
    /// character exponent against each group generator
    exps: Vec<u64>,
    group: Arc<UnitGroup>,
}

impl DirichletCharacter {
    /// Root-of-unity index: `chi(n) = e(k / ord)`, or None when
    /// `gcd(n, q) != 1`.
    pub fn eval_index(&self, n: u64) -> Option<(u64, u64)> {
        let g = &self.group;
        let r = (n % g.q.max(1)) as usize;
        let dl = g.dlogs[r].as_ref()?;
        let ord = g.exponent;
        let mut k: u128 = 0;
        for (j, &t) in dl.iter().enumerate() {
            let d = g.gen_orders[j];
            k += self.exps[j] as u128 * t as u128 * (ord / d) as u128;
        }
        Some(((k % ord as u128) as u64, ord))
    }

    pub fn eval(&self, n: u64) -> Complex64 {
        match self.eval_index(n) {
            None => Complex64::new(0.0, 0.0),
            Some((k, ord)) => e(k as f64 / ord as f64),
        }
    }

    /// Value as a reduced fraction of a full turn, comparable across
    /// characters of different moduli.
    pub fn eval_fraction(&self, n: u64) -> Option<(u64, u64)> {
        let (k, ord) = self.eval_index(n)?;
        let g = gcd(k, ord).max(1);
        Some((k / g, ord / g))
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// True for real-valued characters (order dividing 2).
    pub fn is_real(&self) -> bool {
        self.exps
            .iter()
            .zip(&self.group.gen_orders)
            .all(|(&e, &d)| (2 * e) % d == 0)
    }

    /// The primitive character mod `conductor` that induces this one.
    pub fn primitive_character(&self) -> DirichletCharacter {
        if self.primitive {
            return self.clone();
        }
        let d = self.conductor;
        let candidates = characters_mod(d).expect("conductor within limit");
        'cand: for c in candidates {
            for n in 1..=self.modulus {
                if gcd(n, self.modulus) == 1 && c.eval_fraction(n) != self.eval_fraction(n) {
                    continue 'cand;
                }
            }
            return c;
        }
        unreachable!("every character is induced by a primitive one");
    }
}

/// All `phi(q)` Dirichlet characters mod `q`, each tagged with conductor
/// and primitivity.
pub fn characters_mod(q: u64) -> Result<Vec<DirichletCharacter>> {
    if q < 1 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    if q > CHARACTER_MODULUS_LIMIT {
        return Err(Error::Resource(format!(
            "modulus {q} over character limit {CHARACTER_MODULUS_LIMIT}"
        )));
    }
    let group = UnitGroup::build(q);
    let k = group.gen_orders.len();
    let mut chars = Vec::with_capacity(totient(q) as usize);
    let mut exps = vec![0u64; k];
    loop {
        let mut chi = DirichletCharacter {
            modulus: q,
            conductor: q,
            primitive: true,
            exps: exps.clone(),
            group: Arc::clone(&group),
        };
        let cond = conductor_of(&chi);
        chi.conductor = cond;
        chi.primitive = cond == q;
        chars.push(chi);
        // increment mixed-radix counter
        let mut j = 0;
        loop {
            if j == k {
                return Ok(chars);
            }
            exps[j] += 1;
            if exps[j] < group.gen_orders[j] {
                break;
            }
            exps[j] = 0;
            j += 1;
        }
    }
}

/// Smallest `d | q` such that `chi(n) = 1` whenever `n = 1 (mod d)` and
/// `gcd(n, q) = 1`.
fn conductor_of(chi: &DirichletCharacter) -> u64 {
    let q = chi.modulus;
    let mut divs = super::divisors(q);
    divs.sort_unstable();
    'next_d: for d in divs {
        let mut n = 1 + d;
        if d == q {
            return q;
        }
        while n <= q {
            if gcd(n, q) == 1 {
                match chi.eval_index(n) {
                    Some((0, _)) => {}
                    _ => continue 'next_d,
                }
            }
            n += d;
        }
        // also n = 1 itself trivially gives chi = 1
        return d;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q1_trivial_character() {
        let cs = characters_mod(1).unwrap();
        assert_eq!(cs.len(), 1);
        for n in 0..5 {
            assert!((cs[0].eval(n) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn q3_has_two_characters_nonprincipal_sends_2_to_minus_1() {
        let cs = characters_mod(3).unwrap();
        assert_eq!(cs.len(), 2);
        let non = cs.iter().find(|c| !c.is_principal()).unwrap();
        assert!((non.eval(2) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(non.conductor, 3);
        assert!(non.primitive);
    }

    #[test]
    fn q5_row_orthogonality() {
        let cs = characters_mod(5).unwrap();
        assert_eq!(cs.len(), 4);
        for c in &cs {
            let s: Complex64 = (0..5).map(|n| c.eval(n)).sum();
            if c.is_principal() {
                assert!((s.re - 4.0).abs() < 1e-12);
            } else {
                assert!(s.norm() < 1e-12, "row sum {s} for {:?}", c.exps);
            }
        }
    }

    #[test]
    fn orthogonality_all_q_up_to_200() {
        for q in 1..=200u64 {
            let cs = characters_mod(q).unwrap();
            assert_eq!(cs.len() as u64, totient(q), "count at q={q}");
            // rows
            for c in &cs {
                let s: Complex64 = (0..q).map(|n| c.eval(n)).sum();
                let want = if c.is_principal() { totient(q) as f64 } else { 0.0 };
                assert!(
                    (s - Complex64::new(want, 0.0)).norm() < 1e-12 * (q as f64),
                    "row orthogonality q={q}"
                );
            }
            // columns
            for n in 0..q {
                let s: Complex64 = cs.iter().map(|c| c.eval(n)).sum();
                let want = if n % q.max(1) == 1 % q.max(1) && gcd(n.max(1), q) == 1 {
                    totient(q) as f64
                } else {
                    0.0
                };
                assert!(
                    (s - Complex64::new(want, 0.0)).norm() < 1e-12 * (q as f64).max(1.0),
                    "column orthogonality q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn multiplicativity_and_periodicity() {
        for q in [8u64, 12, 45, 100] {
            for c in characters_mod(q).unwrap() {
                for a in 0..q {
                    assert_eq!(c.eval_index(a), c.eval_index(a + q));
                    for b in 0..q {
                        let lhs = c.eval(a) * c.eval(b);
                        let rhs = c.eval(a * b);
                        assert!((lhs - rhs).norm() < 1e-12, "q={q} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn conductors_divide_modulus_and_induction_agrees() {
        for q in [4u64, 6, 9, 12, 15, 16, 24] {
            for c in characters_mod(q).unwrap() {
                assert_eq!(q % c.conductor, 0);
                let star = c.primitive_character();
                assert_eq!(star.modulus, c.conductor);
                assert!(star.primitive);
                for n in 1..=q {
                    if gcd(n, q) == 1 {
                        let a = c.eval(n);
                        let b = star.eval(n);
                        assert!((a - b).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn modulus_limit_enforced() {
        assert!(matches!(
            characters_mod(CHARACTER_MODULUS_LIMIT + 1),
            Err(Error::Resource(_))
        ));
    }
}
