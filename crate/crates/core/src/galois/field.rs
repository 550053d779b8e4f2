use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order handled by the packed element representation.
pub const MAX_ORDER: u64 = 1 << 32;
/// Fields up to this order get exp/log tables.
const TABLE_LIMIT: u64 = 1 << 16;

/// Characteristic, extension degree and defining polynomial of GF(p^N).
///
/// `modulus` lists the coefficients of a monic degree-`N` polynomial,
/// lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    #[serde(rename = "N")]
    pub degree: usize,
    pub modulus: Vec<u64>,
}

/// A field element packed as the little-endian base-`p` integer of its
/// coefficient vector. Residues of the prime subfield are therefore their own
/// packed value, which lets base-field matrices act on extension elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Arithmetic context for GF(p^N).
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    order: u64,
    tables: Option<Arc<LogTables>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.spec.p, self.spec.degree)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_order(p: u64, degree: usize) -> Result<u64> {
    let mut order: u64 = 1;
    for _ in 0..degree {
        order = order
            .checked_mul(p)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge { p, degree })?;
    }
    Ok(order)
}

// Dense polynomials over GF(p), lowest degree first.

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let shift = r.len() - 1 - df;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &fi) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * fi % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test: no factor of degree at most N/2.
pub fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let mut f = modulus.to_vec();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let degree = f.len() - 1;
    if degree == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = x.clone();
    for _ in 0..degree / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u64];
        for _ in 0..p {
            acc = poly_mulmod(&acc, &h, &f, p);
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        if poly_gcd(&f, &diff, p).len() > 1 {
            return false;
        }
    }
    true
}

impl FieldSpec {
    /// First monic irreducible polynomial of degree `degree`, searching the
    /// lower coefficients as a base-`p` counter starting at x^N + 1.
    pub fn search(p: u64, degree: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if degree == 0 {
            return Err(Error::BadModulus(0));
        }
        let order = checked_order(p, degree)?;
        if degree == 1 {
            return Ok(FieldSpec {
                p,
                degree,
                modulus: vec![0, 1],
            });
        }
        for t in 1..order {
            if t % p == 0 {
                continue;
            }
            let mut modulus = Vec::with_capacity(degree + 1);
            let mut v = t;
            for _ in 0..degree {
                modulus.push(v % p);
                v /= p;
            }
            modulus.push(1);
            if is_irreducible(&modulus, p) {
                return Ok(FieldSpec { p, degree, modulus });
            }
        }
        Err(Error::BadModulus(degree))
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        checked_order(self.p, self.degree)?;
        if self.modulus.len() != self.degree + 1
            || self.modulus[self.degree] != 1
            || self.modulus.iter().any(|&c| c >= self.p)
            || !is_irreducible(&self.modulus, self.p)
        {
            return Err(Error::BadModulus(self.degree));
        }
        Ok(())
    }
}

impl Field {
    /// GF(p^N) with a searched modulus.
    pub fn new(p: u64, degree: usize) -> Result<Self> {
        Self::from_spec(FieldSpec::search(p, degree)?)
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Self> {
        spec.validate()?;
        let order = checked_order(spec.p, spec.degree)?;
        let mut field = Field {
            spec,
            order,
            tables: None,
        };
        if order <= TABLE_LIMIT && field.spec.degree > 1 {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Characteristic, which is also the base-field order q.
    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn degree(&self) -> usize {
        self.spec.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The prime subfield GF(p).
    pub fn base_field(&self) -> Field {
        Field {
            spec: FieldSpec {
                p: self.spec.p,
                degree: 1,
                modulus: vec![0, 1],
            },
            order: self.spec.p,
            tables: None,
        }
    }

    pub fn elem(&self, v: u64) -> Result<Elem> {
        if v < self.order {
            Ok(Elem(v))
        } else {
            Err(Error::InvalidElement(v))
        }
    }

    /// Base-field residue embedded as a constant polynomial.
    pub fn from_base(&self, v: u64) -> Elem {
        Elem(v % self.spec.p)
    }

    pub fn is_base(&self, x: Elem) -> bool {
        x.0 < self.spec.p
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.order
    }

    /// Little-endian coefficient vector, exactly N residues.
    pub fn coeffs(&self, x: Elem) -> Vec<u64> {
        let p = self.spec.p;
        let mut v = x.0;
        (0..self.spec.degree)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() > self.spec.degree {
            return Err(Error::Dimension(format!(
                "{} coefficients for degree {}",
                coeffs.len(),
                self.spec.degree
            )));
        }
        let p = self.spec.p;
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= p {
                return Err(Error::InvalidElement(c));
            }
            v = v * p + c;
        }
        Ok(Elem(v))
    }

    fn pack(&self, mut coeffs: Vec<u64>) -> Elem {
        coeffs.resize(self.spec.degree, 0);
        let p = self.spec.p;
        Elem(coeffs.iter().rev().fold(0, |acc, &c| acc * p + c))
    }

    /// Iterator over every field element in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            return Elem(x.0 ^ y.0);
        }
        if self.spec.degree == 1 {
            return Elem((x.0 + y.0) % p);
        }
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    pub fn neg(&self, x: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            return x;
        }
        if self.spec.degree == 1 {
            return Elem((p - x.0 % p) % p);
        }
        let mut a = x.0;
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.0 == 0 || y.0 == 0 {
            return Elem::ZERO;
        }
        let p = self.spec.p;
        if self.spec.degree == 1 {
            return Elem(x.0 * y.0 % p);
        }
        if let Some(t) = &self.tables {
            let q1 = (self.order - 1) as u32;
            let s = (t.log[x.0 as usize] + t.log[y.0 as usize]) % q1;
            return Elem(t.exp[s as usize] as u64);
        }
        self.poly_mul(x, y)
    }

    fn poly_mul(&self, x: Elem, y: Elem) -> Elem {
        let p = self.spec.p;
        let a = self.coeffs(x);
        let b = self.coeffs(y);
        self.pack(poly_mulmod(&a, &b, &self.spec.modulus, p))
    }

    /// Multiply an element by a base-field scalar.
    pub fn scale(&self, c: u64, x: Elem) -> Elem {
        let p = self.spec.p;
        let c = c % p;
        match c {
            0 => Elem::ZERO,
            1 => x,
            _ if self.spec.degree == 1 => Elem(x.0 * c % p),
            _ => self.pack(self.coeffs(x).into_iter().map(|d| d * c % p).collect()),
        }
    }

    pub fn pow(&self, x: Elem, mut e: u128) -> Elem {
        let mut acc = Elem::ONE;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if let Some(t) = &self.tables {
            let q1 = (self.order - 1) as u32;
            let l = t.log[x.0 as usize];
            return Ok(Elem(t.exp[((q1 - l) % q1) as usize] as u64));
        }
        Ok(self.pow(x, (self.order - 2) as u128))
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^(q^i) with q = p; periodic in i with period N.
    pub fn frobenius(&self, x: Elem, i: usize) -> Elem {
        let mut y = x;
        for _ in 0..i % self.spec.degree {
            y = self.pow(y, self.spec.p as u128);
        }
        y
    }

    /// Generator of the power basis of GF(p^N) over GF(p), i.e. the class of x.
    /// For N = 1 this is 1.
    pub fn basis(&self) -> Vec<Elem> {
        let p = self.spec.p;
        let mut place = 1u64;
        (0..self.spec.degree)
            .map(|_| {
                let e = Elem(place);
                place = place.wrapping_mul(p);
                e
            })
            .collect()
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order;
        let q1 = q - 1;
        let factors = prime_factors(q1);
        let generator = (2..q)
            .map(Elem)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&f| self.slow_pow(g, q1 / f) != Elem::ONE)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; q1 as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = Elem::ONE;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0 as u32;
            log[cur.0 as usize] = i as u32;
            cur = self.poly_mul(cur, generator);
        }
        LogTables { exp, log }
    }

    fn slow_pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut acc = Elem::ONE;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            base = self.poly_mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_finds_standard_gf16_modulus() {
        let spec = FieldSpec::search(2, 4).unwrap();
        assert_eq!(spec.modulus, vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn rejects_composite_and_reducible() {
        assert_eq!(FieldSpec::search(4, 2), Err(Error::NotPrime(4)));
        let bad = FieldSpec {
            p: 2,
            degree: 2,
            modulus: vec![1, 0, 1],
        };
        assert_eq!(Field::from_spec(bad).unwrap_err(), Error::BadModulus(2));
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = Field::new(3, 3).unwrap();
        assert_eq!(f.inv(Elem::ZERO), Err(Error::ZeroInverse));
    }

    #[test]
    fn identities() {
        let f = Field::new(5, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.mul(x, Elem::ONE), x);
            assert_eq!(f.add(x, f.neg(x)), Elem::ZERO);
        }
    }

    #[test]
    fn gf16_inverse_matches_brute_force_search() {
        let f = Field::new(2, 4).unwrap();
        for x in f.elements().skip(1) {
            let brute = f
                .elements()
                .find(|&y| f.poly_mul(x, y) == Elem::ONE)
                .unwrap();
            assert_eq!(f.inv(x).unwrap(), brute);
            assert_eq!(f.mul(x, f.inv(x).unwrap()), Elem::ONE);
        }
    }

    #[test]
    fn table_and_polynomial_products_agree() {
        let f = Field::new(3, 3).unwrap();
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(f.mul(x, y), if x.is_zero() || y.is_zero() {
                    Elem::ZERO
                } else {
                    f.poly_mul(x, y)
                });
            }
        }
    }

    #[test]
    fn frobenius_has_period_n() {
        let f = Field::new(2, 4).unwrap();
        for x in f.elements() {
            assert_eq!(f.frobenius(x, 0), x);
            assert_eq!(f.pow(x, 16), x);
            assert_eq!(f.frobenius(x, 4), x);
        }
    }

    #[test]
    fn frobenius_is_base_linear_exhaustively() {
        for (p, n) in [(2u64, 4usize), (3, 3)] {
            let f = Field::new(p, n).unwrap();
            for i in 0..n {
                for x in f.elements() {
                    for y in f.elements() {
                        for a in 0..p {
                            let lhs = f.frobenius(f.add(f.scale(a, x), y), i);
                            let rhs = f.add(f.scale(a, f.frobenius(x, i)), f.frobenius(y, i));
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let f = Field::new(3, 3).unwrap();
        for x in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(x)).unwrap(), x);
        }
        assert!(f.from_coeffs(&[3]).is_err());
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(11, 8).unwrap();
        assert!(f.tables.is_none());
        let x = f.basis()[1];
        let y = f.add(x, Elem(7));
        let inv = f.inv(y).unwrap();
        assert_eq!(f.mul(y, inv), Elem::ONE);
        assert_eq!(f.pow(y, f.order() as u128), y);
    }

    #[test]
    fn serde_uses_capital_n() {
        let spec = FieldSpec::search(2, 4).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"p":2,"N":4,"modulus":[1,1,0,0,1]}"#);
    }
}
