//! Exact arithmetic in GF(p^f).
//!
//! Elements are stored by their integer encoding `Σ c_i p^i`, where `c_i` is
//! the coefficient of `x^i` in the polynomial basis. The encoding is a
//! bijection with coefficient vectors, so equality, ordering and hashing of
//! [`FieldElem`] are the canonical ones.
//!
//! The modulus is the least monic irreducible polynomial of degree `f` when
//! its lower coefficients are read as the base-`p` integer
//! `c_0 + c_1 p + … + c_{f-1} p^{f-1}`; the primitive element `xi` is the
//! element of least encoding with multiplicative order `q - 1`. Both choices
//! depend only on `(p, f)`.

use std::fmt;

use thiserror::Error;

use crate::arith;

/// Fields larger than this are rejected; the log tables would dominate memory.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const ADD_TABLE_LIMIT: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{f} exceeds the supported maximum {MAX_FIELD_ORDER}")]
    TooLarge { p: u64, f: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("square test is undefined for even characteristic (every element is a square)")]
    EvenCharacteristic,
    #[error("{r} does not divide the extension degree {f}")]
    NotADivisor { r: u32, f: u32 },
    #[error("encoding {enc} is out of range for GF({q})")]
    BadEncoding { enc: u64, q: u32 },
    #[error("coefficient vector must have length {f} with entries below {p}")]
    BadCoefficients { p: u32, f: u32 },
}

/// An element of GF(p^f), identified by its integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn encoding(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
pub struct Field {
    p: u32,
    f: u32,
    q: u32,
    /// Monic modulus, constant term first, length `f + 1`.
    modulus: Vec<u32>,
    xi: FieldElem,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    digit_pow: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("modulus", &self.modulus)
            .field("xi", &self.xi)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(p^f) with the deterministic modulus and primitive element.
    pub fn new(p: u64, f: u32) -> Result<Field, FieldError> {
        if !arith::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if f == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(f).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(FieldError::TooLarge { p, f });
        }
        let (p, q) = (p as u32, q as u32);

        let modulus = least_irreducible(p, f);
        let mut digit_pow = Vec::with_capacity(f as usize);
        let mut acc = 1u32;
        for _ in 0..f {
            digit_pow.push(acc);
            acc = acc.wrapping_mul(p);
        }

        let poly = PolyRing { p, f, modulus: &modulus };
        let xi = poly.least_primitive(q);

        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let xi_digits = poly.digits(xi);
        let mut cur = poly.digits(1);
        for k in 0..(q - 1) {
            let enc = poly.encode(&cur);
            exp.push(enc);
            log[enc as usize] = k;
            cur = poly.mul(&cur, &xi_digits);
        }

        let neg = (0..q)
            .map(|x| {
                let d = poly.digits(x);
                let nd: Vec<u32> = d.iter().map(|&c| (p - c) % p).collect();
                poly.encode(&nd)
            })
            .collect();

        let mut field = Field {
            p,
            f,
            q,
            modulus,
            xi: FieldElem(xi),
            exp,
            log,
            neg,
            add: None,
            digit_pow,
        };
        if p != 2 && q <= ADD_TABLE_LIMIT {
            let mut table = Vec::with_capacity((q * q) as usize);
            for x in 0..q {
                for y in 0..q {
                    table.push(field.add_digitwise(x, y));
                }
            }
            field.add = Some(table);
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus coefficients, constant term first (length `f + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element `xi`.
    pub fn primitive(&self) -> FieldElem {
        self.xi
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    pub fn elem(&self, enc: u64) -> Result<FieldElem, FieldError> {
        if enc >= self.q as u64 {
            return Err(FieldError::BadEncoding { enc, q: self.q });
        }
        Ok(FieldElem(enc as u32))
    }

    /// The image of an integer under `Z -> GF(p)`.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem, FieldError> {
        if coeffs.len() != self.f as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::BadCoefficients { p: self.p, f: self.f });
        }
        Ok(FieldElem(
            coeffs.iter().zip(&self.digit_pow).map(|(c, w)| c * w).sum(),
        ))
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        let mut n = x.0;
        (0..self.f)
            .map(|_| {
                let c = n % self.p;
                n /= self.p;
                c
            })
            .collect()
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    fn add_digitwise(&self, x: u32, y: u32) -> u32 {
        let (mut x, mut y, mut out) = (x, y, 0);
        for &w in &self.digit_pow {
            let s = (x % self.p + y % self.p) % self.p;
            out += s * w;
            x /= self.p;
            y /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(x.0 ^ y.0);
        }
        match &self.add {
            Some(t) => FieldElem(t[(x.0 * self.q + y.0) as usize]),
            None => FieldElem(self.add_digitwise(x.0, y.0)),
        }
    }

    #[inline]
    pub fn neg(&self, x: FieldElem) -> FieldElem {
        FieldElem(self.neg[x.0 as usize])
    }

    #[inline]
    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if x.0 == 0 || y.0 == 0 {
            return FieldElem::ZERO;
        }
        let s = self.log[x.0 as usize] + self.log[y.0 as usize];
        let m = self.q - 1;
        FieldElem(self.exp[(if s >= m { s - m } else { s }) as usize])
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem, FieldError> {
        if x.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.inv_nonzero(x))
    }

    #[inline]
    pub(crate) fn inv_nonzero(&self, x: FieldElem) -> FieldElem {
        debug_assert!(x.0 != 0);
        let m = self.q - 1;
        let l = self.log[x.0 as usize];
        FieldElem(self.exp[((m - l) % m) as usize])
    }

    pub fn div(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: FieldElem, n: u64) -> FieldElem {
        if n == 0 {
            return FieldElem::ONE;
        }
        if x.0 == 0 {
            return FieldElem::ZERO;
        }
        let m = (self.q - 1) as u64;
        let e = (self.log[x.0 as usize] as u64 * (n % m)) % m;
        FieldElem(self.exp[e as usize])
    }

    /// Discrete log to base `xi`; `None` for zero.
    pub fn log(&self, x: FieldElem) -> Option<u32> {
        (x.0 != 0).then(|| self.log[x.0 as usize])
    }

    /// `xi^k`.
    pub fn xi_pow(&self, k: u64) -> FieldElem {
        FieldElem(self.exp[(k % (self.q as u64 - 1)) as usize])
    }

    /// Zero counts as a square.
    pub fn is_square(&self, x: FieldElem) -> Result<bool, FieldError> {
        if self.p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if x.is_zero() {
            return Ok(true);
        }
        Ok(self.pow(x, ((self.q - 1) / 2) as u64) == FieldElem::ONE)
    }

    /// `x^(p^j)`, with `j` reduced mod `f`.
    #[inline]
    pub fn frobenius(&self, x: FieldElem, j: i64) -> FieldElem {
        let j = j.rem_euclid(self.f as i64) as u32;
        if j == 0 || x.0 == 0 {
            return x;
        }
        let m = (self.q - 1) as u64;
        let e = (self.log[x.0 as usize] as u64 * self.digit_pow[j as usize] as u64) % m;
        FieldElem(self.exp[e as usize])
    }

    /// Order of the subfield GF(p^(f/r)).
    pub fn subfield_order(&self, r: u32) -> Result<u32, FieldError> {
        if r == 0 || !self.f.is_multiple_of(r) {
            return Err(FieldError::NotADivisor { r, f: self.f });
        }
        Ok(self.p.pow(self.f / r))
    }

    /// Membership in GF(q0), `q0 = p^(f/r)`, i.e. `x^q0 = x`.
    pub fn in_subfield(&self, x: FieldElem, r: u32) -> Result<bool, FieldError> {
        let q0 = self.subfield_order(r)?;
        Ok(self.pow(x, q0 as u64) == x)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: FieldElem) -> Result<u32, FieldError> {
        let l = self.log(x).ok_or(FieldError::ZeroInverse)?;
        let m = self.q - 1;
        Ok(m / arith::gcd(l as u64, m as u64) as u32)
    }
}

/// Polynomial arithmetic over Z_p used only while constructing a field.
struct PolyRing<'a> {
    p: u32,
    f: u32,
    modulus: &'a [u32],
}

impl PolyRing<'_> {
    fn digits(&self, mut n: u32) -> Vec<u32> {
        (0..self.f)
            .map(|_| {
                let c = n % self.p;
                n /= self.p;
                c
            })
            .collect()
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let f = self.f as usize;
        let mut prod = vec![0u64; 2 * f];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k, &b) in y.iter().enumerate() {
                prod[i + k] = (prod[i + k] + a as u64 * b as u64) % p;
            }
        }
        for i in (f..2 * f).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for k in 0..f {
                let sub = c * self.modulus[k] as u64 % p;
                prod[i - f + k] = (prod[i - f + k] + p - sub) % p;
            }
            prod[i] = 0;
        }
        prod[..f].iter().map(|&c| c as u32).collect()
    }

    fn pow(&self, x: &[u32], mut n: u64) -> Vec<u32> {
        let mut base = x.to_vec();
        let mut acc = self.digits(1);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    fn least_primitive(&self, q: u32) -> u32 {
        let m = (q - 1) as u64;
        let one = self.digits(1);
        let factors = arith::prime_factors(m);
        (1..q)
            .find(|&enc| {
                let x = self.digits(enc);
                factors.iter().all(|&l| self.pow(&x, m / l) != one)
            })
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

/// Remainder of `num` modulo the monic `den`, both constant term first.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if c != 0 {
            for (k, &dk) in den.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p - c * dk % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn monic_from_index(mut n: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut v: Vec<u32> = (0..deg)
        .map(|_| {
            let c = (n % p as u64) as u32;
            n /= p as u64;
            c
        })
        .collect();
    v.push(1);
    v
}

/// Trial division against every monic polynomial of degree at most `deg/2`.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = (poly.len() - 1) as u32;
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k);
        for idx in 0..count {
            let div = monic_from_index(idx, k, p);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, f: u32) -> Vec<u32> {
    let count = (p as u64).pow(f);
    (0..count)
        .map(|idx| monic_from_index(idx, f, p))
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}
