//! Table-driven arithmetic for GF(q²) together with its subfield GF(q).
//!
//! Elements are dense indices `0..q²`. An element `a + b·t` (with `t` a root of
//! the quadratic modulus and `a, b ∈ GF(q)`) has index `a + b·q`, so the
//! subfield GF(q) occupies exactly the indices `0..q`. Index 0 is zero and
//! index 1 is one. GF(q) itself is built the same way over the prime field:
//! the coefficient vector `(c₀, …, c_{e−1})` of a polynomial in the generator
//! has index `Σ cᵢ pⁱ`.
//!
//! Moduli are chosen as the least monic irreducible polynomial, where monic
//! polynomials `xᵈ + c_{d−1}x^{d−1} + … + c₀` are compared on the coefficient
//! sequence `(c_{d−1}, …, c₀)` (indices in the base field). The result is fully
//! deterministic.

use std::fmt;

use thiserror::Error;

/// Largest subfield order for which tables are built.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
}

/// An element of GF(q²) given by its table index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Returns `(p, e)` with `n = pᵉ`, or `None` if `n` is not a prime power.
pub fn prime_power(n: usize) -> Option<(usize, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > n {
        // n is prime
        return Some((n, 1));
    }
    let mut m = n;
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

/// Dense addition/multiplication tables of a small field.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SmallField {
    order: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
}

impl SmallField {
    fn prime(p: usize) -> SmallField {
        let mut add = vec![0u16; p * p];
        let mut mul = vec![0u16; p * p];
        for a in 0..p {
            for b in 0..p {
                add[a * p + b] = ((a + b) % p) as u16;
                mul[a * p + b] = ((a * b) % p) as u16;
            }
        }
        SmallField { order: p, add, mul }
    }

    #[inline]
    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b] as usize
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    fn neg(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }

    /// Builds `base[x]/(x^d + Σ cᵢxⁱ)`; `None` when the quotient has zero divisors.
    fn extension(&self, low_coeffs: &[usize]) -> Option<SmallField> {
        let d = low_coeffs.len();
        let n = self.order;
        let order = n.pow(d as u32);
        let neg_c: Vec<usize> = low_coeffs.iter().map(|&c| self.neg(c)).collect();

        let digits = |mut x: usize| -> Vec<usize> {
            let mut out = vec![0; d];
            for slot in out.iter_mut() {
                *slot = x % n;
                x /= n;
            }
            out
        };
        let undigits = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &c| acc * n + c) };

        let coeffs: Vec<Vec<usize>> = (0..order).map(digits).collect();
        let mut add = vec![0u16; order * order];
        let mut mul = vec![0u16; order * order];
        let mut prod = vec![0usize; 2 * d];
        for a in 0..order {
            for b in 0..order {
                let (ca, cb) = (&coeffs[a], &coeffs[b]);
                let sum: Vec<usize> = ca.iter().zip(cb).map(|(&x, &y)| self.add(x, y)).collect();
                add[a * order + b] = undigits(&sum) as u16;

                prod.iter_mut().for_each(|c| *c = 0);
                for (i, &x) in ca.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in cb.iter().enumerate() {
                        prod[i + j] = self.add(prod[i + j], self.mul(x, y));
                    }
                }
                // x^d = -Σ cᵢ xⁱ
                for k in (d..2 * d).rev() {
                    let top = prod[k];
                    if top == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, &nc) in neg_c.iter().enumerate() {
                        prod[k - d + i] = self.add(prod[k - d + i], self.mul(top, nc));
                    }
                }
                mul[a * order + b] = undigits(&prod[..d]) as u16;
            }
        }
        let field = SmallField { order, add, mul };
        let integral = (1..order).all(|a| (1..order).all(|b| field.mul(a, b) != 0));
        integral.then_some(field)
    }

    fn has_root(&self, low: &[usize]) -> bool {
        (0..self.order).any(|r| {
            // Horner on x^d + c_{d-1}x^{d-1} + ... + c_0
            let v = low.iter().rev().fold(1, |acc, &c| self.add(self.mul(acc, r), c));
            v == 0
        })
    }

    /// Least monic irreducible polynomial of degree `d` and the resulting extension.
    fn least_extension(&self, d: usize) -> (Vec<usize>, SmallField) {
        let n = self.order;
        for m in 0..n.pow(d as u32) {
            // big-endian digits give the lexicographic order on (c_{d-1}, ..., c_0)
            let mut low = vec![0; d];
            let mut x = m;
            for slot in low.iter_mut() {
                *slot = x % n;
                x /= n;
            }
            if self.has_root(&low) {
                continue;
            }
            if let Some(ext) = self.extension(&low) {
                return (low, ext);
            }
        }
        unreachable!("irreducible polynomials of every degree exist over finite fields")
    }
}

/// Arithmetic tables for GF(q²) with the conjugation `s ↦ s^q`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldTables {
    q: usize,
    characteristic: usize,
    degree: u32,
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    conj: Vec<u16>,
    subfield_modulus: Vec<usize>,
    modulus: [usize; 2],
}

impl fmt::Debug for FieldTables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTables")
            .field("q", &self.q)
            .field("modulus", &self.modulus_description())
            .finish_non_exhaustive()
    }
}

impl FieldTables {
    /// Builds GF(q²) ⊃ GF(q). Deterministic in `q`.
    pub fn new(q: usize) -> Result<FieldTables, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(FieldError::OrderTooLarge(q));
        }
        let prime = SmallField::prime(p);
        let (subfield_modulus, sub) = if e == 1 {
            (Vec::new(), prime)
        } else {
            prime.least_extension(e as usize)
        };
        let (low, big) = sub.least_extension(2);
        let size = big.order;

        let neg: Vec<u16> = (0..size)
            .map(|a| (0..size).find(|&b| big.add(a, b) == 0).unwrap() as u16)
            .collect();
        let mut inv = vec![0u16; size];
        for a in 1..size {
            inv[a] = (1..size).find(|&b| big.mul(a, b) == 1).unwrap() as u16;
        }
        let conj: Vec<u16> = (0..size)
            .map(|a| (0..q).fold(1usize, |acc, _| big.mul(acc, a)) as u16)
            .collect();

        Ok(FieldTables {
            q,
            characteristic: p,
            degree: e,
            size,
            add: big.add,
            mul: big.mul,
            neg,
            inv,
            conj,
            subfield_modulus,
            modulus: [low[0], low[1]],
        })
    }

    /// Order of the conjugation-fixed subfield.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of elements, `q²`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn characteristic(&self) -> usize {
        self.characteristic
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.size as u16).map(Elem)
    }

    /// The subfield GF(q), i.e. the indices `0..q`.
    pub fn subfield(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q as u16).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.index() * self.size + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.index() * self.size + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (!a.is_zero()).then(|| Elem(self.inv[a.index()]))
    }

    /// The Galois conjugation `s ↦ s^q`.
    #[inline]
    pub fn conj(&self, a: Elem) -> Elem {
        Elem(self.conj[a.index()])
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// `s + s̄`
    pub fn trace(&self, s: Elem) -> Elem {
        self.add(s, self.conj(s))
    }

    /// `s · s̄`
    pub fn norm(&self, s: Elem) -> Elem {
        self.mul(s, self.conj(s))
    }

    pub fn in_subfield(&self, s: Elem) -> bool {
        s.index() < self.q
    }

    /// Human-readable description of the moduli used for the construction.
    pub fn modulus_description(&self) -> String {
        let poly = |low: &[usize], var: &str| {
            let mut terms = vec![format!("{var}^{}", low.len())];
            for (i, &c) in low.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                let mono = match i {
                    0 => String::new(),
                    1 => var.to_string(),
                    _ => format!("{var}^{i}"),
                };
                terms.push(match (c, i) {
                    (_, 0) => c.to_string(),
                    (1, _) => mono,
                    _ => format!("{c}*{mono}"),
                });
            }
            terms.join(" + ")
        };
        let outer = poly(&self.modulus, "t");
        if self.degree == 1 {
            format!("GF({}) = GF({})[t]/({outer})", self.size, self.q)
        } else {
            format!(
                "GF({}) = GF({})[t]/({outer}), GF({}) = GF({})[u]/({})",
                self.size,
                self.q,
                self.q,
                self.characteristic,
                poly(&self.subfield_modulus, "u")
            )
        }
    }
}
