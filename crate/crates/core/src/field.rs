//! Small Galois fields GF(p^k) backed by full lookup tables.
//!
//! Elements are `u8` codes: the code of `c_0 + c_1 x + ... + c_{k-1} x^{k-1}`
//! is `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, so `0` and `1` are the additive
//! and multiplicative identities and the prime subfield is `0..p`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order the tables support.
pub const MAX_FIELD_ORDER: u32 = 16;

/// Default cap on the field order accepted by the geometry builders.
pub const DEFAULT_FIELD_CAP: u32 = 5;

pub type Elem = u8;

#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    p: u8,
    degree: u8,
    q: u8,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    frob: Vec<Elem>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Splits `q` into `(p, k)` with `q = p^k`, if `q` is a prime power.
fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    if !is_prime(p) {
        return None;
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Polynomials over GF(p) as coefficient vectors, lowest degree first.
fn poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    // m is monic
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                a[shift + i] = (a[shift + i] + (p - lead) * c % p) % p;
            }
        }
    }
    a
}

fn monic_polys(p: u32, degree: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = p.pow(degree);
    (0..count).map(move |mut code| {
        let mut coeffs = Vec::with_capacity(degree as usize + 1);
        for _ in 0..degree {
            coeffs.push(code % p);
            code /= p;
        }
        coeffs.push(1);
        coeffs
    })
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let d = (m.len() - 1) as u32;
    (1..=d / 2).all(|fd| {
        monic_polys(p, fd).all(|f| poly_rem(m.to_vec(), &f, p).iter().any(|&c| c != 0))
    })
}

impl Field {
    /// Builds GF(q) for a prime power `q <= MAX_FIELD_ORDER`.
    pub fn new(q: u32) -> Result<Self> {
        if q > MAX_FIELD_ORDER {
            return Err(Error::UnsupportedField { q, reason: format!("order exceeds {MAX_FIELD_ORDER}") });
        }
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::UnsupportedField { q, reason: "not a prime power".into() })?;
        let modulus = monic_polys(p, k)
            .find(|m| is_irreducible(m, p))
            .expect("irreducible polynomials exist in every degree");

        let to_poly = |x: u32| -> Vec<u32> { (0..k).map(|i| x / p.pow(i) % p).collect() };
        let from_poly = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            let pa = to_poly(a);
            for b in 0..q {
                let pb = to_poly(b);
                let sum: Vec<u32> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % p).collect();
                let mut prod = vec![0; 2 * k as usize];
                for (i, x) in pa.iter().enumerate() {
                    for (j, y) in pb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut red = poly_rem(prod, &modulus, p);
                red.resize(k as usize, 0);
                add[(a * q + b) as usize] = from_poly(&sum) as Elem;
                mul[(a * q + b) as usize] = from_poly(&red) as Elem;
            }
        }
        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as Elem;
                }
                if mul[a * n + b] == 1 {
                    inv[a] = b as Elem;
                }
            }
        }
        let mut frob = vec![0; n];
        for (a, slot) in frob.iter_mut().enumerate() {
            let mut x = 1usize;
            for _ in 0..p {
                x = mul[x * n + a] as usize;
            }
            *slot = x as Elem;
        }
        Ok(Field { p: p as u8, degree: k as u8, q: q as u8, add, mul, neg, inv, frob })
    }

    pub fn order(&self) -> u32 {
        self.q as u32
    }

    pub fn characteristic(&self) -> u32 {
        self.p as u32
    }

    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is reported as 0.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, mut e: u32) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(p^e)`, the `e`-th power of the Frobenius automorphism.
    #[inline]
    pub fn frobenius(&self, a: Elem, e: u32) -> Elem {
        (0..e % self.degree as u32).fold(a, |x, _| self.frob[x as usize])
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        let order = self.q as u32 - 1;
        self.elements()
            .skip(1)
            .find(|&a| (1..order).all(|e| self.pow(a, e) != 1))
            .expect("finite fields have cyclic unit groups")
    }

    /// `true` when `a` lies in the prime subfield.
    pub fn is_prime_subfield(&self, a: Elem) -> bool {
        a < self.p
    }

    pub fn is_square(&self, a: Elem) -> bool {
        self.elements().any(|x| self.mul(x, x) == a)
    }

    /// Integer embedding of the prime field, e.g. `from_int(-1)`.
    pub fn from_int(&self, v: i64) -> Elem {
        v.rem_euclid(self.p as i64) as Elem
    }
}
